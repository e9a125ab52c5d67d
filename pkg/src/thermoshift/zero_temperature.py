"""Zero-temperature classification of locally constant potentials.

As t grows, the equilibrium state of t*phi concentrates on the subshift
maximizing phi.  The limit is decided by the transitive components of
that subshift with maximal entropy: a single periodic one, a single
positive-entropy one, or several components sharing the top entropy, in
which case the limit is a convex combination of their Parry measures
whose coefficients are estimated by sweeping t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

from .core_sft import is_transitive, recode_to_one_step
from .errors import (InvalidArgumentError, NotTransitiveError, NumericError,
                     ResourceLimitError, UnderflowError)
from .max_face import FaceSubshift, face_subshift, max_entropy_components
from .potential import PotentialLC
from .thermodynamics import MarkovMeasure, equilibrium_markov, parry_from_matrix

CASE_COHOMOLOGOUS = "CohomologousToConstant"
CASE_VERTEX_PERIODIC = "VertexPeriodic"
CASE_UNIQUE_TRANSITIVE = "UniqueTransitive"
CASE_MULTI_COMPONENT = "MultiComponent"

CONVERGENCE_TOL = 1e-10
UNCONVERGED_TOL = 1e-6
BOUNDARY_MASS_TOL = 1e-3


def _is_single_cycle(matrix) -> bool:
    return all(sum(row) == 1 for row in matrix)


@dataclass
class ClassificationResult:
    """Outcome of the zero-temperature classification of a scalar potential."""

    case: str
    beta: object
    face: FaceSubshift
    max_entropy_ids: tuple[int, ...]
    tolerance_limited: bool
    constant: object | None
    limit: list | None           # [(weight, MarkovMeasure)] when determined

    @property
    def components(self):
        return self.face.components


def component_parry(face: FaceSubshift, index: int) -> MarkovMeasure:
    comp = face.components[index]
    return parry_from_matrix(comp.matrix, comp.labels(), comp.blocks)


def classify(phi: PotentialLC) -> ClassificationResult:
    """Classify the zero-temperature limit of a scalar potential.

    The cohomology case is decided first (every transition tight, so all
    invariant measures share the same average); otherwise the maximal
    entropy components of the maximizing subshift decide the case.
    """
    if phi.m != 1:
        raise InvalidArgumentError("classify takes a scalar potential")
    if not is_transitive(phi.sft):
        raise NotTransitiveError("classification needs a transitive shift")
    face = face_subshift(phi)
    if face.is_whole_shift:
        # every measure has average beta; the equilibrium path is frozen
        # at the measure of maximal entropy
        whole = face.components[0]
        limit = [(Fraction(1), component_parry(face, 0))]
        return ClassificationResult(CASE_COHOMOLOGOUS, face.beta, face,
                                    (0,), False, face.beta, limit)
    ids, flagged = max_entropy_components(face)
    if len(ids) == 1:
        comp = face.components[ids[0]]
        case = CASE_VERTEX_PERIODIC if _is_single_cycle(comp.matrix) \
            else CASE_UNIQUE_TRANSITIVE
        limit = [(Fraction(1), component_parry(face, ids[0]))]
        return ClassificationResult(case, face.beta, face, ids, flagged,
                                    None, limit)
    return ClassificationResult(CASE_MULTI_COMPONENT, face.beta, face, ids,
                                flagged, None, None)


# -- symmetry shortcut -----------------------------------------------------

def _weighted_automorphisms(phi: PotentialLC, limit: int = 5000):
    """Automorphisms of the recoded graph preserving the weight of each
    state, as permutations of state indices."""
    recoded = recode_to_one_step(phi.sft, phi.k)
    g = nx.DiGraph()
    for i in range(recoded.n):
        g.add_node(i, w=phi.value(recoded.states[i])[0])
    for (a, b) in recoded.edges():
        g.add_edge(a, b)
    matcher = DiGraphMatcher(g, g, node_match=lambda x, y: x["w"] == y["w"])
    autos = []
    for iso in matcher.isomorphisms_iter():
        autos.append(tuple(iso[i] for i in range(recoded.n)))
        if len(autos) >= limit:
            break
    return autos


def symmetry_coefficients(phi: PotentialLC, res: ClassificationResult):
    """Exact equal coefficients when weight-preserving graph symmetries
    act transitively on the maximal entropy components; None otherwise."""
    if phi.mode != "exact":
        return None
    ids = res.max_entropy_ids
    if len(ids) < 2:
        return tuple(Fraction(1) for _ in ids)
    state_sets = {i: frozenset(res.face.components[i].state_ids) for i in ids}
    by_states = {s: i for i, s in state_sets.items()}
    parent = {i: i for i in ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for sigma in _weighted_automorphisms(phi):
        for i in ids:
            image = frozenset(sigma[s] for s in state_sets[i])
            j = by_states.get(image)
            if j is not None and find(i) != find(j):
                parent[find(i)] = find(j)
        if len({find(i) for i in ids}) == 1:
            r = len(ids)
            return tuple(Fraction(1, r) for _ in ids)
    return None


# -- numerical sweep -------------------------------------------------------

def _aitken(seq):
    """Aitken delta-squared extrapolation of the tail, guarded."""
    if len(seq) < 3:
        return seq[-1]
    x0, x1, x2 = seq[-3], seq[-2], seq[-1]
    den = (x2 - x1) - (x1 - x0)
    if abs(den) < 1e-300:
        return x2
    acc = x2 - (x2 - x1) ** 2 / den
    if -0.1 <= acc <= 1.1:
        return acc
    return x2


def default_schedule(t_max: float = 2.0 ** 14):
    out = []
    t = 1.0
    while t <= t_max:
        out.append(t)
        t *= 2.0
    return out


@dataclass
class ZtCoefficients:
    """Convex coefficients of the zero-temperature limit."""

    case: str
    component_ids: tuple[int, ...]
    coefficients: tuple
    method: str                # "symmetry", "sweep", or "trivial"
    t_values: list = field(default_factory=list)
    mass_history: list = field(default_factory=list)
    boundary_history: list = field(default_factory=list)
    est_error: float = 0.0
    converged: bool = True
    flags: list = field(default_factory=list)
    limit: list | None = None


def zt_coefficients(phi: PotentialLC, t_max: float = 2.0 ** 14,
                    schedule=None, tol: float = CONVERGENCE_TOL,
                    method: str = "auto") -> ZtCoefficients:
    """Coefficients of the component Parry measures in the t -> oo limit.

    ``method`` is "auto" (symmetry shortcut when available, else sweep),
    "symmetry" (fail to sweep if unavailable), or "sweep".
    """
    res = classify(phi)
    ids = res.max_entropy_ids
    if res.case != CASE_MULTI_COMPONENT:
        limit = res.limit
        return ZtCoefficients(res.case, ids, (Fraction(1),), "trivial",
                              limit=limit)
    if method not in ("auto", "symmetry", "sweep"):
        raise InvalidArgumentError(f"unknown method {method!r}")
    if method in ("auto", "symmetry"):
        sym = symmetry_coefficients(phi, res)
        if sym is not None:
            limit = [(c, component_parry(res.face, i)) for c, i in zip(sym, ids)]
            return ZtCoefficients(res.case, ids, sym, "symmetry", limit=limit,
                                  flags=["exact"])
        if method == "symmetry":
            raise InvalidArgumentError(
                "no transitive weight-preserving symmetry; use the sweep")
    if schedule is None:
        schedule = default_schedule(t_max)
    state_sets = [res.face.components[i].state_ids for i in ids]
    t_used, masses, boundary = [], [], []
    flags = []
    coeffs_hist = []
    est_error = math.inf
    for t in schedule:
        try:
            mu = equilibrium_markov(phi, t)
        except (UnderflowError, NumericError) as exc:
            flags.append(f"sweep stopped at t={t}: {exc}")
            break
        p = mu.stationary
        row = [float(sum(p[s] for s in sset)) for sset in state_sets]
        total = sum(row)
        t_used.append(t)
        masses.append(row)
        boundary.append(max(0.0, 1.0 - total))
        coeffs_hist.append([r / total for r in row])
        if len(coeffs_hist) >= 2:
            est_error = max(abs(a - b) for a, b in
                            zip(coeffs_hist[-1], coeffs_hist[-2]))
            if est_error < tol and boundary[-1] < BOUNDARY_MASS_TOL:
                break
    if not coeffs_hist:
        raise NumericError("zero-temperature sweep produced no data")
    final = tuple(_aitken([c[j] for c in coeffs_hist])
                  for j in range(len(ids)))
    s = sum(final)
    final = tuple(c / s for c in final)
    converged = est_error < UNCONVERGED_TOL
    if not converged:
        flags.append("unconverged")
    if boundary and boundary[-1] >= BOUNDARY_MASS_TOL:
        flags.append("boundary_mass_large")
    limit = [(c, component_parry(res.face, i)) for c, i in zip(final, ids)]
    return ZtCoefficients(res.case, ids, final, "sweep", t_used, masses,
                          boundary, est_error if est_error < math.inf else 1.0,
                          converged, flags, limit)


def ground_state_check(phi: PotentialLC, result=None, tol: float = 1e-8) -> dict:
    """Consistency checks on a classification: the limit measures are
    supported on the maximizing subshift, average to beta, and agree in
    entropy across selected components."""
    if result is None:
        result = classify(phi)
    if isinstance(result, ZtCoefficients):
        limit = result.limit
        face = classify(phi).face
        ids = result.component_ids
    else:
        limit = result.limit
        face = result.face
        ids = result.max_entropy_ids
    checks = {"weights_sum_to_one": True, "averages_at_beta": True,
              "entropies_agree": True}
    if limit is None:
        return {"undetermined": True}
    total = sum(float(w) for w, _ in limit)
    checks["weights_sum_to_one"] = abs(total - 1.0) <= tol
    beta = float(face.beta)
    for _, mu in limit:
        avg = sum(float(p) * float(phi.value(b)[0])
                  for p, b in zip(mu.stationary, mu.blocks))
        if abs(avg - beta) > tol:
            checks["averages_at_beta"] = False
    if len(ids) > 1:
        hs = [face.components[i].entropy for i in ids]
        if max(hs) - min(hs) > 1e-6:
            checks["entropies_agree"] = False
    checks["ok"] = all(v for v in checks.values())
    return checks
