"""Maximizing subshifts of a scalar potential via max cycle mean.

The states of X are the admissible k-blocks (the one-step recoding);
the weight of an edge is the potential value at its source block.
Karp's algorithm gives the maximum cycle mean beta exactly on rational
weights; node potentials from a longest-path relaxation then cut out
the tight edges, whose recurrent part carries every cycle of mean beta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx

from .core_sft import RecodedSft, perron_data, recode_to_one_step
from .errors import InvalidArgumentError
from .potential import PotentialLC, scalarize

TIGHT_TOL = 1e-9


def _scc_list(n: int, edges):
    g = nx.DiGraph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    sccs = []
    eset = set(edges)
    for comp in nx.strongly_connected_components(g):
        comp = sorted(comp)
        nontrivial = len(comp) > 1 or (comp[0], comp[0]) in eset
        if nontrivial:
            sccs.append(comp)
    sccs.sort(key=lambda c: c[0])
    return sccs


def karp_max_mean(n: int, edges, weight):
    """Maximum cycle mean of an edge-weighted digraph.

    ``weight`` maps (u, v) to a Fraction or float; exact in, exact out.
    Raises InvalidArgumentError when the graph has no cycle.
    """
    best = None
    for comp in _scc_list(n, edges):
        idx = {v: i for i, v in enumerate(comp)}
        sub = [(idx[u], idx[v]) for (u, v) in edges if u in idx and v in idx]
        m = len(comp)
        preds = [[] for _ in range(m)]
        for (u, v) in sub:
            preds[v].append(u)
        wloc = {(idx[u], idx[v]): weight(u, v) for (u, v) in edges
                if u in idx and v in idx}
        D = [[None] * m for _ in range(m + 1)]
        D[0][0] = 0
        for k in range(1, m + 1):
            for v in range(m):
                cands = [D[k - 1][u] + wloc[(u, v)] for u in preds[v]
                         if D[k - 1][u] is not None]
                if cands:
                    D[k][v] = max(cands)
        comp_best = None
        for v in range(m):
            if D[m][v] is None:
                continue
            vals = [(D[m][v] - D[k][v]) / (m - k) for k in range(m)
                    if D[k][v] is not None]
            lo = min(vals)
            comp_best = lo if comp_best is None else max(comp_best, lo)
        if comp_best is not None:
            best = comp_best if best is None else max(best, comp_best)
    if best is None:
        raise InvalidArgumentError("graph has no cycle")
    return best


def longest_path_potentials(n: int, edges, weight, beta):
    """Node potentials u with u[v] >= u[u] + (w - beta) for every edge.

    Bellman-Ford style relaxation from a zero baseline; converges since
    no reduced cycle is positive.
    """
    u = [0 * beta] * n
    for _ in range(n):
        changed = False
        for (a, b) in edges:
            cand = u[a] + weight(a, b) - beta
            if cand > u[b]:
                u[b] = cand
                changed = True
        if not changed:
            break
    return u


def tight_recurrent_part(n: int, edges, weight, beta, u, tol=0.0):
    """Tight edges and the nontrivial SCCs of the subgraph they span."""
    if tol:
        scale = 1.0 + max((abs(float(weight(a, b))) for (a, b) in edges),
                          default=0.0)
        tight = [(a, b) for (a, b) in edges
                 if abs(float(u[a] + weight(a, b) - beta - u[b])) <= tol * scale]
    else:
        tight = [(a, b) for (a, b) in edges if u[a] + weight(a, b) - beta == u[b]]
    sccs = _scc_list(n, tight)
    keep = {v for comp in sccs for v in comp}
    rec_edges = [(a, b) for (a, b) in tight if a in keep and b in keep]
    rec_edges = [(a, b) for (a, b) in rec_edges
                 if _same_comp(sccs, a, b)]
    return rec_edges, sccs


def _same_comp(sccs, a, b):
    for comp in sccs:
        if a in comp:
            return b in comp
    return False


def find_cycle(edges):
    """Any cycle in a nonempty recurrent edge set, as a node list."""
    succ = {}
    for (a, b) in edges:
        succ.setdefault(a, []).append(b)
    start = min(succ)
    seen = {}
    path = [start]
    seen[start] = 0
    cur = start
    while True:
        nxt = succ[cur][0]
        if nxt in seen:
            return path[seen[nxt]:]
        seen[nxt] = len(path)
        path.append(nxt)
        cur = nxt


@dataclass(frozen=True)
class FaceComponent:
    """One transitive component of a maximizing subshift."""

    index: int
    state_ids: tuple[int, ...]       # indices into the recoded state list
    blocks: tuple[tuple[int, ...], ...]
    matrix: tuple[tuple[int, ...], ...]
    entropy: float

    def labels(self) -> tuple[str, ...]:
        return tuple("".join(map(str, b)) for b in self.blocks)


@dataclass
class FaceSubshift:
    """Union of cycles maximizing the mean of a scalar potential."""

    direction: tuple | None
    beta: object
    recoded: RecodedSft
    tight_edges: tuple
    components: list[FaceComponent]
    is_whole_shift: bool
    mode: str

    @property
    def entropy(self) -> float:
        return max(c.entropy for c in self.components)


def _component_entropy(matrix) -> float:
    n = len(matrix)
    if n == 1:
        return 0.0
    return float(math.log(perron_data(matrix).lam))


def _build_components(recoded, rec_edges, sccs):
    comps = []
    rec_set = set(rec_edges)
    for i, comp in enumerate(sccs):
        ids = tuple(comp)
        blocks = tuple(recoded.states[v] for v in ids)
        mat = tuple(tuple(1 if (a, b) in rec_set else 0 for b in ids) for a in ids)
        comps.append(FaceComponent(i, ids, blocks, mat, _component_entropy(mat)))
    return comps


def max_mean_data(recoded: RecodedSft, weights, exact: bool):
    """(beta, potentials, recurrent tight edges, SCC node lists)."""
    n = recoded.n
    edges = [(a, b) for a in range(n) for b in range(n) if recoded.transition[a][b]]

    def wfun(a, b):
        return weights[a]

    beta = karp_max_mean(n, edges, wfun)
    u = longest_path_potentials(n, edges, wfun, beta)
    tol = 0.0 if exact else TIGHT_TOL
    rec_edges, sccs = tight_recurrent_part(n, edges, wfun, beta, u, tol)
    return beta, u, rec_edges, sccs, edges


def face_subshift(phi: PotentialLC, alpha=None) -> FaceSubshift:
    """Maximizing subshift of alpha . Phi (or of a scalar phi directly).

    Components are listed by smallest recoded state; ``is_whole_shift``
    says whether every admissible transition is tight, i.e. the face is
    all of X.
    """
    if alpha is not None:
        if len(tuple(alpha)) != phi.m:
            raise InvalidArgumentError("direction length must equal potential dimension")
        phi = scalarize(phi, alpha)
        direction = tuple(alpha)
    else:
        if phi.m != 1:
            raise InvalidArgumentError("scalar potential required when no direction given")
        direction = None
    recoded = recode_to_one_step(phi.sft, phi.k)
    exact = phi.mode == "exact"
    weights = [phi.value(b)[0] for b in recoded.states]
    if exact:
        weights = [Fraction(w) for w in weights]
    beta, u, rec_edges, sccs, edges = max_mean_data(recoded, weights, exact)
    comps = _build_components(recoded, rec_edges, sccs)
    whole = set(rec_edges) == set(edges)
    return FaceSubshift(direction, beta, recoded, tuple(sorted(rec_edges)),
                        comps, whole, phi.mode)


def max_entropy_components(face: FaceSubshift, tol: float = TIGHT_TOL):
    """Indices of components with maximal entropy, plus a near-tie flag.

    The flag reports an unselected component within 1e-6 of the cut,
    where the float comparison stops being trustworthy evidence of a
    strict gap.
    """
    top = max(c.entropy for c in face.components)
    ids = tuple(c.index for c in face.components if c.entropy >= top - tol)
    flagged = any(top - 1e-6 < c.entropy < top - tol for c in face.components)
    return ids, flagged


def lex_extreme_cycle(recoded: RecodedSft, vecs, directions):
    """A cycle maximizing the mean of vecs lexicographically in the
    given exact directions; returns (cycle state ids, mean vector).

    ``vecs`` is one rational m-vector per recoded state.  Used for
    support-oracle hull construction without orbit enumeration.
    """
    n = recoded.n
    edges = [(a, b) for a in range(n) for b in range(n) if recoded.transition[a][b]]
    for d in directions:
        w = [sum(di * xi for di, xi in zip(d, vecs[a])) for a in range(n)]

        def wfun(a, b, w=w):
            return w[a]

        beta = karp_max_mean(n, edges, wfun)
        u = longest_path_potentials(n, edges, wfun, beta)
        edges, _ = tight_recurrent_part(n, edges, wfun, beta, u, 0.0)
    cyc = find_cycle(edges)
    p = len(cyc)
    mean = tuple(sum(vecs[v][i] for v in cyc) / p for i in range(len(vecs[0])))
    return cyc, mean
