"""Locally constant potentials on k-cylinders.

A potential assigns an m-vector to every admissible k-block.  Values are
either exact rationals (Fraction) or floats; a potential is uniformly
one or the other.  Scalar potentials (m = 1) feed the thermodynamic
machinery; vector potentials define rotation sets.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .core_sft import Sft, recode_to_one_step
from .errors import InvalidArgumentError
from .orbits import birkhoff_average, elementary_orbits

FLOAT_EQ_TOL = 1e-9

Number = object  # Fraction or float, uniform per potential


def _is_exact(x) -> bool:
    return isinstance(x, (Fraction, int))


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(eq=True)
class PotentialLC:
    """A locally constant m-vector potential with window k."""

    sft: Sft
    k: int
    m: int
    values: dict[tuple[int, ...], tuple]
    mode: str  # "exact" or "float"

    def __post_init__(self):
        if self.mode not in ("exact", "float"):
            raise InvalidArgumentError("mode must be 'exact' or 'float'")
        recoded = recode_to_one_step(self.sft, self.k)
        want = set(recoded.states)
        have = set(self.values)
        if have != want:
            missing = sorted(want - have)[:3]
            extra = sorted(have - want)[:3]
            raise InvalidArgumentError(
                f"potential values must cover admissible {self.k}-blocks exactly "
                f"(missing {missing}, extra {extra})")
        for blk, vec in self.values.items():
            if len(vec) != self.m:
                raise InvalidArgumentError(f"value at {blk} has length {len(vec)} != m={self.m}")
            for x in vec:
                if self.mode == "exact" and not _is_exact(x):
                    raise InvalidArgumentError("exact potential holds a non-rational value")
                if self.mode == "float" and not isinstance(x, float):
                    raise InvalidArgumentError("float potential holds a non-float value")

    def value(self, block: tuple[int, ...]) -> tuple:
        """Value on the cylinder of the leading k symbols of ``block``."""
        key = tuple(block[: self.k])
        try:
            return self.values[key]
        except KeyError:
            raise InvalidArgumentError(f"block {key} is not admissible") from None

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_block_values(cls, sft: Sft, k: int, values: dict, m: int | None = None,
                          mode: str = "exact") -> "PotentialLC":
        conv = {}
        for blk, vec in values.items():
            blk = tuple(blk)
            if not isinstance(vec, (tuple, list)):
                vec = (vec,)
            if mode == "exact":
                conv[blk] = tuple(_as_fraction(x) for x in vec)
            else:
                conv[blk] = tuple(float(x) for x in vec)
        if m is None:
            m = len(next(iter(conv.values())))
        return cls(sft=sft, k=k, m=m, values=conv, mode=mode)

    @classmethod
    def from_matrix(cls, sft: Sft, rows, mode: str = "exact") -> "PotentialLC":
        """Scalar window-2 potential from a d x d table of 2-block values."""
        d = sft.d
        if len(rows) != d or any(len(r) != d for r in rows):
            raise InvalidArgumentError("value table must be d x d")
        recoded = recode_to_one_step(sft, 2)
        vals = {blk: (rows[blk[0]][blk[1]],) for blk in recoded.states}
        return cls.from_block_values(sft, 2, vals, m=1, mode=mode)

    @classmethod
    def constant(cls, sft: Sft, c, k: int = 1, mode: str = "exact") -> "PotentialLC":
        recoded = recode_to_one_step(sft, k)
        return cls.from_block_values(sft, k, {blk: (c,) for blk in recoded.states},
                                     m=1, mode=mode)

    # -- serialization -----------------------------------------------------

    @staticmethod
    def _block_key(blk: tuple[int, ...]) -> str:
        if all(s < 10 for s in blk):
            return "".join(str(s) for s in blk)
        return ",".join(str(s) for s in blk)

    @staticmethod
    def _parse_block_key(key: str) -> tuple[int, ...]:
        if "," in key:
            return tuple(int(p) for p in key.split(","))
        return tuple(int(ch) for ch in key)

    def to_json(self) -> str:
        def enc(x):
            return str(x) if self.mode == "exact" else float(x)
        payload = {
            "k": self.k,
            "m": self.m,
            "mode": self.mode,
            "values": {self._block_key(b): [enc(x) for x in v]
                       for b, v in sorted(self.values.items())},
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str, sft: Sft, mode: str | None = None) -> "PotentialLC":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise InvalidArgumentError(f"invalid potential JSON: {e}") from e
        for field in ("k", "values"):
            if field not in obj:
                raise InvalidArgumentError(f"potential JSON needs '{field}'")
        mode = mode or obj.get("mode", "exact")
        vals = {}
        for key, vec in obj["values"].items():
            blk = cls._parse_block_key(key)
            if not isinstance(vec, list):
                vec = [vec]
            if mode == "exact":
                try:
                    vals[blk] = tuple(Fraction(str(x)) for x in vec)
                except ValueError as e:
                    raise InvalidArgumentError(
                        f"value {vec} at block '{key}' is not rational; use float mode") from e
            else:
                vals[blk] = tuple(float(x) for x in vec)
        return cls.from_block_values(sft, obj["k"], vals, m=obj.get("m"), mode=mode)


def scalarize(Phi: PotentialLC, alpha) -> PotentialLC:
    """Scalar potential alpha . Phi; exact when both sides are exact."""
    alpha = tuple(alpha)
    if len(alpha) != Phi.m:
        raise InvalidArgumentError(f"direction has length {len(alpha)}, potential has m={Phi.m}")
    exact = Phi.mode == "exact" and all(_is_exact(a) for a in alpha)
    if exact:
        alpha = tuple(_as_fraction(a) for a in alpha)
        vals = {b: (sum(a * x for a, x in zip(alpha, v)),) for b, v in Phi.values.items()}
        return PotentialLC(Phi.sft, Phi.k, 1, vals, "exact")
    vals = {b: (float(sum(float(a) * float(x) for a, x in zip(alpha, v))),)
            for b, v in Phi.values.items()}
    return PotentialLC(Phi.sft, Phi.k, 1, vals, "float")


def universal_potential(sft: Sft, k: int) -> PotentialLC:
    """The vector potential sending each admissible k-block to its own
    standard basis vector; every LC_k potential is a linear image of it."""
    recoded = recode_to_one_step(sft, k)
    n = recoded.n
    vals = {}
    for i, blk in enumerate(recoded.states):
        vec = [Fraction(0)] * n
        vec[i] = Fraction(1)
        vals[blk] = tuple(vec)
    return PotentialLC(sft, k, n, vals, "exact")


def embed_coordinates(phi: PotentialLC) -> tuple:
    """Cylinder-basis coordinates of a scalar potential (state order)."""
    if phi.m != 1:
        raise InvalidArgumentError("embed applies to scalar potentials")
    recoded = recode_to_one_step(phi.sft, phi.k)
    return tuple(phi.values[blk][0] for blk in recoded.states)


def embed_direction(phi: PotentialLC) -> tuple[float, ...]:
    """Unit vector along the cylinder-basis coordinates; errors on zero."""
    coords = [float(x) for x in embed_coordinates(phi)]
    norm = math.sqrt(sum(x * x for x in coords))
    if norm == 0.0:
        raise InvalidArgumentError("zero potential has no direction")
    return tuple(x / norm for x in coords)


@dataclass
class CohomologyReport:
    """Outcome of the orbit-average cohomology criterion."""

    cohomologous: bool
    constant: object | None
    witness: tuple[int, int] | None
    tolerance_limited: bool
    spread: float


def cohomology_test(phi: PotentialLC, psi: PotentialLC, orbits=None,
                    tol: float = FLOAT_EQ_TOL) -> CohomologyReport:
    """Decide whether phi - psi is cohomologous to a constant.

    Equivalent to all elementary-orbit averages of phi - psi at window
    max(k_phi, k_psi) agreeing; the common value is the constant.  In
    float mode, agreement within ``tol`` counts but is flagged.
    """
    if phi.m != 1 or psi.m != 1:
        raise InvalidArgumentError("cohomology test applies to scalar potentials")
    if phi.sft != psi.sft:
        raise InvalidArgumentError("potentials live on different shifts")
    k = max(phi.k, psi.k)
    if orbits is None:
        orbits = elementary_orbits(phi.sft, k)
    exact = phi.mode == "exact" and psi.mode == "exact"
    diffs = []
    for o in orbits:
        a = birkhoff_average(o, phi)[0]
        b = birkhoff_average(o, psi)[0]
        diffs.append(a - b if exact else float(a) - float(b))
    lo = min(range(len(diffs)), key=lambda i: diffs[i])
    hi = max(range(len(diffs)), key=lambda i: diffs[i])
    spread = float(diffs[hi] - diffs[lo])
    if exact:
        if diffs[lo] == diffs[hi]:
            return CohomologyReport(True, diffs[0], None, False, 0.0)
        return CohomologyReport(False, None, (lo, hi), False, spread)
    if spread <= tol:
        return CohomologyReport(True, sum(diffs) / len(diffs), None, spread > 0.0, spread)
    return CohomologyReport(False, None, (lo, hi), False, spread)
