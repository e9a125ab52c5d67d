"""Rotation sets, faces, and genericity checks.

The rotation set of an m-vector potential is the convex hull of the
Birkhoff averages of the elementary periodic orbits.  All hull geometry
here runs in exact rational arithmetic; float-mode potentials are
snapped to a 1e-9 grid first.  Explicit vertex/facet structure is built
for m <= 3 (interval, monotone chain, incremental hull); larger m stays
query-only through directional argmax.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (DegenerateFaceError, InvalidArgumentError, ResourceLimitError,
                     UnsupportedDimensionError)
from .orbits import birkhoff_average, elementary_orbits
from .potential import PotentialLC

SNAP_DEN = 10**9

# (sft, k, cap) triples whose cycle census already blew the cap once
_BLOWN_CAPS: set = set()


def _snap(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(round(float(x) * SNAP_DEN), SNAP_DEN)


def orbit_averages(Phi: PotentialLC, orbits) -> tuple[tuple[Fraction, ...], ...]:
    """Exact orbit averages; float potentials are snapped to the grid."""
    return tuple(tuple(_snap(x) for x in birkhoff_average(o, Phi)) for o in orbits)


# -- exact affine frame ----------------------------------------------------

class _AffineFrame:
    """Affine hull of a point set with exact coordinates in a basis."""

    def __init__(self, points):
        self.origin = points[0]
        m = len(self.origin)
        self.basis: list[tuple[Fraction, ...]] = []
        self._ech: list[tuple[list[Fraction], list[Fraction], int]] = []
        for p in points:
            diff = [a - b for a, b in zip(p, self.origin)]
            red, _ = self._reduce(diff)
            pivot = next((i for i, x in enumerate(red) if x != 0), None)
            if pivot is not None:
                coeffs = [Fraction(0)] * len(self.basis) + [Fraction(1)]
                for e, c, _ in self._ech:
                    c.append(Fraction(0))
                self.basis.append(tuple(diff))
                self._ech.append((red, coeffs, pivot))
        self.dim = len(self.basis)

    def _reduce(self, vec):
        v = list(vec)
        coeffs = [Fraction(0)] * len(self._ech)
        for idx, (e, c, pivot) in enumerate(self._ech):
            if v[pivot] != 0:
                f = v[pivot] / e[pivot]
                v = [a - f * b for a, b in zip(v, e)]
                coeffs[idx] = f
        return v, coeffs

    def coords(self, point):
        """Coordinates of a point in the basis, or None if off the hull."""
        diff = [a - b for a, b in zip(point, self.origin)]
        red, coeffs = self._reduce(diff)
        if any(x != 0 for x in red):
            return None
        out = [Fraction(0)] * self.dim
        for f, (_, c, _) in zip(coeffs, self._ech):
            for j, cj in enumerate(c):
                out[j] += f * cj
        return tuple(out)

    def to_ambient(self, coords):
        out = list(self.origin)
        for c, b in zip(coords, self.basis):
            for i, bi in enumerate(b):
                out[i] += c * bi
        return tuple(out)


# -- hulls in affine coordinates -------------------------------------------

def _cross2(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull_2d(points):
    """Strict convex hull, CCW starting at the lexicographic minimum."""
    pts = sorted(set(points))
    lower = []
    for p in pts:
        while len(lower) >= 2 and _cross2(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross2(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _sub3(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _cross3(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _tri_normal(pts, tri):
    a, b, c = (pts[i] for i in tri)
    return _cross3(_sub3(b, a), _sub3(c, a))


def _hull_3d(points):
    """Incremental exact hull; returns (vertex ids, triangles) over points."""
    pts = list(points)
    n = len(pts)
    i0 = 0
    i1 = next(i for i in range(n) if pts[i] != pts[i0])
    i2 = next(i for i in range(n)
              if any(x != 0 for x in _cross3(_sub3(pts[i1], pts[i0]), _sub3(pts[i], pts[i0]))))
    norm = _cross3(_sub3(pts[i1], pts[i0]), _sub3(pts[i2], pts[i0]))
    i3 = next(i for i in range(n) if _dot(norm, _sub3(pts[i], pts[i0])) != 0)

    def outward(tri, inside):
        nrm = _tri_normal(pts, tri)
        if _dot(nrm, _sub3(pts[inside], pts[tri[0]])) > 0:
            return (tri[0], tri[2], tri[1])
        return tri

    faces = {outward((i0, i1, i2), i3), outward((i0, i1, i3), i2),
             outward((i0, i2, i3), i1), outward((i1, i2, i3), i0)}

    def visible(tri, p):
        nrm = _tri_normal(pts, tri)
        return _dot(nrm, _sub3(pts[p], pts[tri[0]])) > 0

    for p in range(n):
        if p in (i0, i1, i2, i3):
            continue
        vis = {f for f in faces if visible(f, p)}
        if not vis:
            continue
        edge_owner = {}
        for f in faces:
            a, b, c = f
            for e in ((a, b), (b, c), (c, a)):
                edge_owner[e] = f
        horizon = []
        for f in vis:
            a, b, c = f
            for e in ((a, b), (b, c), (c, a)):
                if edge_owner[(e[1], e[0])] not in vis:
                    horizon.append(e)
        faces -= vis
        for (u, v) in horizon:
            faces.add((u, v, p))
    verts = sorted({i for f in faces for i in f})
    return verts, sorted(faces)


@dataclass(frozen=True)
class Facet:
    """A facet given by vertex indices, an outward normal, and its offset.

    ``ambient`` tells whether the normal lives in ambient coordinates
    (full-dimensional hull) or in the affine frame of a degenerate hull.
    """

    vertex_ids: tuple[int, ...]
    normal: tuple
    offset: Fraction
    ambient: bool


@dataclass
class RotationPolytope:
    """Convex hull of orbit rotation vectors."""

    m: int
    generator_points: list   # (orbit index, ambient m-vector)
    affine_dim: int
    vertices: list | None    # ambient exact points, canonical order
    facets: list | None
    query_only: bool
    frame: _AffineFrame | None = field(default=None, repr=False)

    def vertex_index(self, point) -> int | None:
        if self.vertices is None:
            return None
        for i, v in enumerate(self.vertices):
            if v == tuple(point):
                return i
        return None

    def membership(self, point) -> str:
        """'interior', 'boundary', or 'outside' relative to the affine hull."""
        if self.query_only:
            raise UnsupportedDimensionError("membership needs an explicit hull (m <= 3)")
        pt = tuple(_snap(x) for x in point)
        co = self.frame.coords(pt)
        if co is None:
            return "outside"
        if self.affine_dim == 0:
            return "interior"
        on_facet = False
        for f in self.facets:
            val = _dot(f.normal, pt) if f.ambient else _dot(f.normal, co)
            if val > f.offset:
                return "outside"
            if val == f.offset:
                on_facet = True
        return "boundary" if on_facet else "interior"

    def vertex_direction(self, vertex_id: int) -> tuple:
        """An ambient direction whose argmax face is exactly this vertex."""
        if self.query_only:
            raise UnsupportedDimensionError("vertex_direction needs an explicit hull")
        if self.affine_dim == 0:
            return tuple(Fraction(0) for _ in range(self.m))
        if self.affine_dim == 1:
            tangent = self.frame.basis[0]
            sign = 1 if vertex_id == 1 else -1
            return tuple(sign * t for t in tangent)
        if not self.facets or not self.facets[0].ambient:
            raise UnsupportedDimensionError("vertex_direction needs ambient facet normals")
        total = [Fraction(0)] * self.m
        for f in self.facets:
            if vertex_id in f.vertex_ids:
                for i, x in enumerate(f.normal):
                    total[i] += x
        if all(x == 0 for x in total):
            raise InvalidArgumentError(f"vertex {vertex_id} has no adjacent facets")
        return tuple(total)


def _build_hull(m, unique_points):
    frame = _AffineFrame(unique_points)
    r = frame.dim
    if r == 0:
        return frame, [unique_points[0]], []
    if r == 1:
        order = sorted(unique_points, key=lambda p: frame.coords(p)[0])
        lo, hi = order[0], order[-1]
        facets = [Facet((0,), (Fraction(-1),), -frame.coords(lo)[0], False),
                  Facet((1,), (Fraction(1),), frame.coords(hi)[0], False)]
        return frame, [lo, hi], facets
    if r == 2:
        # full-dimensional in the plane: hull the ambient points directly so
        # CCW orientation (and hence outward normals) is meaningful; for a
        # planar set in 3-space, hull in the affine frame instead
        ambient = (m == 2)
        if ambient:
            work = {p: p for p in unique_points}
        else:
            work = {p: frame.coords(p) for p in unique_points}
        inv = {w: p for p, w in work.items()}
        hull = _hull_2d(list(work.values()))
        verts = [inv[c] for c in hull]
        facets = []
        for i in range(len(hull)):
            a, b = hull[i], hull[(i + 1) % len(hull)]
            nrm = (b[1] - a[1], a[0] - b[0])
            facets.append(Facet((i, (i + 1) % len(hull)), nrm, _dot(nrm, a), ambient))
        return frame, verts, facets
    # r == 3 implies m == 3 (m > 3 never builds a hull): work in ambient
    pts = list(unique_points)
    vert_ids, triangles = _hull_3d(pts)
    verts = sorted(pts[i] for i in vert_ids)
    vid = {p: i for i, p in enumerate(verts)}
    groups: dict[tuple, set] = {}
    for tri in triangles:
        nrm = _primitive(_tri_normal(pts, tri))
        off = _dot(nrm, pts[tri[0]])
        groups.setdefault((nrm, off), set()).update(tri)
    facets = []
    for (nrm, off), members in sorted(groups.items()):
        ids = tuple(sorted(vid[pts[i]] for i in members))
        facets.append(Facet(ids, nrm, off, True))
    return frame, verts, facets


def _primitive(vec):
    """Scale a nonzero rational vector to coprime integers, keeping sign."""
    from math import gcd, lcm
    den = lcm(*(x.denominator for x in vec))
    ints = [int(x * den) for x in vec]
    g = gcd(*ints)
    return tuple(Fraction(i // g) for i in ints)


def rotation_set(Phi: PotentialLC, orbits=None, cap: int = 10**6) -> RotationPolytope:
    """Rotation polytope of a vector potential from its orbit averages.

    When no orbit list is given and enumeration would blow past ``cap``,
    the same hull is built from exact directional max-cycle-mean queries
    (m <= 2 only); generator_points is then empty.
    """
    if orbits is None:
        key = (Phi.sft, Phi.k, cap)
        if key in _BLOWN_CAPS:
            if Phi.m > 2:
                raise ResourceLimitError(f"orbit enumeration exceeded cap {cap}")
            return _support_polytope(Phi)
        try:
            orbits = elementary_orbits(Phi.sft, Phi.k, cap)
        except ResourceLimitError:
            _BLOWN_CAPS.add(key)
            if Phi.m > 2:
                raise
            return _support_polytope(Phi)
    avgs = orbit_averages(Phi, orbits)
    gens = list(enumerate(avgs))
    unique = sorted(set(avgs))
    if Phi.m > 3:
        frame = _AffineFrame(unique)
        return RotationPolytope(Phi.m, gens, frame.dim, None, None, True, frame)
    frame, verts, facets = _build_hull(Phi.m, unique)
    poly = RotationPolytope(Phi.m, gens, frame.dim, verts, facets, False, frame)
    return poly


def _support_vertex(recoded, vecs, direction, secondary):
    from .max_face import lex_extreme_cycle
    _, mean = lex_extreme_cycle(recoded, vecs, [direction, secondary])
    return mean


def _support_polytope(Phi: PotentialLC) -> RotationPolytope:
    """Hull of cycle averages via exact support queries, m in {1, 2}."""
    from .core_sft import recode_to_one_step
    from .max_face import lex_extreme_cycle
    recoded = recode_to_one_step(Phi.sft, Phi.k)
    vecs = [tuple(_snap(x) for x in Phi.value(b)) for b in recoded.states]
    if Phi.m == 1:
        _, lo = lex_extreme_cycle(recoded, vecs, [(Fraction(-1),)])
        _, hi = lex_extreme_cycle(recoded, vecs, [(Fraction(1),)])
        pts = sorted({lo, hi})
        frame, verts, facets = _build_hull(1, pts)
        return RotationPolytope(1, [], frame.dim, verts, facets, False, frame)
    one = Fraction(1)
    right = _support_vertex(recoded, vecs, (one, 0 * one), (0 * one, one))
    left = _support_vertex(recoded, vecs, (-one, 0 * one), (0 * one, -one))
    if right == left:
        # zero- or one-dimensional in the vertical direction
        top = _support_vertex(recoded, vecs, (0 * one, one), (one, 0 * one))
        bot = _support_vertex(recoded, vecs, (0 * one, -one), (one, 0 * one))
        pts = sorted({right, top, bot})
        frame, verts, facets = _build_hull(2, pts)
        return RotationPolytope(2, [], frame.dim, verts, facets, False, frame)

    found = {right, left}

    def expand(a, b):
        # outward normal of the directed chord a -> b (hull will be CCW)
        nrm = (b[1] - a[1], a[0] - b[0])
        tang = (b[0] - a[0], b[1] - a[1])
        p = _support_vertex(recoded, vecs, nrm, tang)
        if _dot(nrm, p) > _dot(nrm, a):
            found.add(p)
            expand(a, p)
            expand(p, b)

    expand(left, right)
    expand(right, left)
    frame, verts, facets = _build_hull(2, sorted(found))
    return RotationPolytope(2, [], frame.dim, verts, facets, False, frame)


@dataclass
class FaceFingerprint:
    """Argmax data of a direction over the orbit averages."""

    direction: tuple
    max_value: object
    orbit_set: tuple[int, ...]


def face_in_direction(Phi: PotentialLC, alpha, orbits=None,
                      tol: float = 1e-9) -> FaceFingerprint:
    """Orbits whose averages maximize alpha . rv.

    Exact argmax for rational directions on exact potentials; float
    inputs are compared after a 1e-9 snap.
    """
    if orbits is None:
        orbits = elementary_orbits(Phi.sft, Phi.k)
    alpha = tuple(alpha)
    if len(alpha) != Phi.m:
        raise InvalidArgumentError("direction length must equal potential dimension")
    exact = Phi.mode == "exact" and all(isinstance(a, (int, Fraction)) for a in alpha)
    if exact:
        avgs = orbit_averages(Phi, orbits)
        vals = [_dot(alpha, v) for v in avgs]
        best = max(vals)
        ids = tuple(i for i, v in enumerate(vals) if v == best)
        return FaceFingerprint(alpha, best, ids)
    vals = [sum(float(a) * float(x) for a, x in zip(alpha, birkhoff_average(o, Phi)))
            for o in orbits]
    best = max(vals)
    ids = tuple(i for i, v in enumerate(vals) if v >= best - tol)
    return FaceFingerprint(alpha, best, ids)


@dataclass
class GenericityReport:
    generic: bool
    vertex_violations: list
    boundary_violations: list
    affine_dim: int


def genericity_check(Phi: PotentialLC, orbits=None) -> GenericityReport:
    """Check the open-dense genericity conditions for m <= 3.

    (a) orbits at a common hull vertex must share their cylinder set;
    (b) no orbit average may sit on the relative boundary off a vertex.
    """
    if Phi.m > 3:
        raise UnsupportedDimensionError("genericity check supports m <= 3 only")
    if orbits is None:
        orbits = elementary_orbits(Phi.sft, Phi.k)
    poly = rotation_set(Phi, orbits)
    avgs = orbit_averages(Phi, orbits)
    vertex_violations = []
    boundary_violations = []
    if poly.affine_dim == 0:
        at_vertex = list(range(len(orbits)))
        for i in range(len(at_vertex)):
            for j in range(i + 1, len(at_vertex)):
                a, b = at_vertex[i], at_vertex[j]
                if orbits[a].cylinders != orbits[b].cylinders:
                    vertex_violations.append((0, (a, b)))
        return GenericityReport(not vertex_violations, vertex_violations, [], 0)
    vset = {v: idx for idx, v in enumerate(poly.vertices)}
    for vtx, vidx in vset.items():
        at = [i for i, a in enumerate(avgs) if a == vtx]
        for i in range(len(at)):
            for j in range(i + 1, len(at)):
                a, b = at[i], at[j]
                if orbits[a].cylinders != orbits[b].cylinders:
                    vertex_violations.append((vidx, (a, b)))
    for i, a in enumerate(avgs):
        if a in vset:
            continue
        if poly.membership(a) == "boundary":
            boundary_violations.append(i)
    ok = not vertex_violations and not boundary_violations
    return GenericityReport(ok, vertex_violations, boundary_violations, poly.affine_dim)


def face_segment(poly: RotationPolytope, fingerprint: FaceFingerprint, avgs):
    """Endpoints of a one-dimensional face picked out by a fingerprint.

    Returns (e0, e1, tangent); raises DegenerateFaceError when the face
    is a single point.
    """
    pts = sorted({avgs[i] for i in fingerprint.orbit_set})
    frame = _AffineFrame(pts)
    if frame.dim == 0:
        raise DegenerateFaceError("face is a vertex, not a segment")
    if frame.dim > 1:
        raise InvalidArgumentError("face is not one-dimensional")
    tangent = frame.basis[0]
    keyed = sorted(pts, key=lambda p: frame.coords(p)[0])
    return keyed[0], keyed[-1], tangent
