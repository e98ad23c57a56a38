#!/usr/bin/env python3
"""
Module de construction pour latmaj
Échange « Robin Hood » d'un niveau entre deux essais, descente itérée et
recherche à redémarrages aléatoires
"""

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from latmaj.design_core import Design, coincidence_matrix, pair_index, random_balanced, seed_sequence
from latmaj.errors import InvalidParameterError, StaleProposalError
from latmaj.parallel import map_ordered
from latmaj.schur_criteria import ConvexKernel, Number, kernel_eval, psi_lower_bound, schur_psi

logger = logging.getLogger(__name__)

DELTA_TOL = 1e-12


class TiePolicy(str, Enum):
    LEXICOGRAPHIC = "lexicographic"
    RANDOM = "random"


class Termination(str, Enum):
    LOCAL_OPTIMUM = "local_optimum"
    ITERATION_CAP = "iteration_cap"


@dataclass(frozen=True)
class SwapProposal:
    """Échange des niveaux des essais i et t dans la colonne j (indices base 0)"""

    i: int
    t: int
    j: int
    delta: Number
    touched: frozenset[int]
    level_i: int
    level_t: int


class _DeltaTable:
    """ψ tabulé sur 0..s et seuil de nullité de Δ"""

    def __init__(self, k: ConvexKernel, s: int):
        self.values = [kernel_eval(k, v) for v in range(s + 1)]
        self.exact = k.exact
        scale = max(abs(float(v)) for v in self.values) or 1.0
        self.tol = 0 if self.exact else DELTA_TOL * scale

    def negative(self, delta: Number) -> bool:
        return delta < -self.tol

    def same(self, a: Number, b: Number) -> bool:
        return a == b if self.exact else abs(a - b) <= self.tol


def _swap_delta(psi: list, M: np.ndarray, rows_i: np.ndarray, rows_t: np.ndarray,
                i: int, t: int) -> Number:
    delta = 0
    for w in rows_i.tolist():
        bi, bt = int(M[i, w]), int(M[t, w])
        delta += psi[bi - 1] + psi[bt + 1] - psi[bi] - psi[bt]
    for w in rows_t.tolist():
        bi, bt = int(M[i, w]), int(M[t, w])
        delta += psi[bt - 1] + psi[bi + 1] - psi[bi] - psi[bt]
    return delta


def _touched(n: int, i: int, t: int, rows: np.ndarray) -> frozenset[int]:
    indices = set()
    for w in rows.tolist():
        for a in (i, t):
            indices.add(pair_index(min(a, w), max(a, w), n))
    return frozenset(indices)


def robin_hood_step(d: Design, k: ConvexKernel,
                    tie_policy: TiePolicy = TiePolicy.LEXICOGRAPHIC,
                    rng: np.random.Generator | None = None) -> SwapProposal | None:
    """Un pas de l'échange Robin Hood

    1. paires (i, k), i < k, de coïncidence maximale, en ordre ligne par ligne;
    2. pour chacune, essais t ∉ {i, k} de coïncidence minimale avec x_i et
       colonnes C où x_i et x_k coïncident mais pas x_t;
    3. Δ_j pour j ∈ C, minimum local par (i, k, t) retenu s'il est négatif;
    4. minimum global des enregistrements, ou None.
    """
    X = d.matrix
    n, s = d.n, d.s
    table = _DeltaTable(k.bind(n, s, d.q), s)
    M = coincidence_matrix(d).matrix

    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    top = M[upper].max()
    records: list[tuple[int, int, int, Number, np.ndarray, np.ndarray]] = []

    for i, partner in np.argwhere(upper & (M == top)).tolist():
        others = np.array([t for t in range(n) if t not in (i, partner)], dtype=np.int64)
        if others.size == 0:
            continue
        closest = others[M[i, others] == M[i, others].min()]
        for t in closest.tolist():
            columns = np.flatnonzero((X[i] == X[partner]) & (X[t] != X[i]))
            best = None
            for j in columns.tolist():
                rows_i = np.flatnonzero(X[:, j] == X[i, j])
                rows_i = rows_i[rows_i != i]
                rows_t = np.flatnonzero(X[:, j] == X[t, j])
                rows_t = rows_t[rows_t != t]
                delta = _swap_delta(table.values, M, rows_i, rows_t, i, t)
                if best is None or (delta < best[3] and not table.same(delta, best[3])):
                    best = (i, t, j, delta, rows_i, rows_t)
            if best is not None and table.negative(best[3]):
                records.append(best)

    if not records:
        return None

    lowest = records[0][3]
    for record in records[1:]:
        if record[3] < lowest and not table.same(record[3], lowest):
            lowest = record[3]
    ties = [r for r in records if table.same(r[3], lowest)]
    if tie_policy is TiePolicy.RANDOM and len(ties) > 1:
        if rng is None:
            raise InvalidParameterError("Politique aléatoire sans générateur")
        chosen = ties[int(rng.integers(len(ties)))]
    else:
        chosen = ties[0]

    i, t, j, delta, rows_i, rows_t = chosen
    return SwapProposal(
        i=i, t=t, j=j, delta=delta,
        touched=_touched(n, i, t, np.concatenate([rows_i, rows_t])),
        level_i=int(X[i, j]), level_t=int(X[t, j]),
    )


def swap_levels(d: Design, i: int, t: int, j: int) -> Design:
    """Échanger les entrées (i, j) et (t, j); involution qui préserve l'équilibre"""
    matrix = d.matrix.copy()
    matrix[[i, t], j] = matrix[[t, i], j]
    return Design(matrix, d.q, label=d.label, column_labels=d.column_labels)


def apply_swap(d: Design, p: SwapProposal) -> Design:
    if int(d.matrix[p.i, p.j]) != p.level_i or int(d.matrix[p.t, p.j]) != p.level_t:
        raise StaleProposalError(p.i, p.t, p.j)
    return swap_levels(d, p.i, p.t, p.j)


# Descente

@dataclass(frozen=True)
class DescentStep:
    proposal: SwapProposal
    psi: Number


@dataclass(frozen=True)
class DescentTrace:
    steps: tuple[DescentStep, ...]
    initial_psi: Number
    final_psi: Number
    bound: Number
    design: Design
    terminated: Termination

    @property
    def iterations(self) -> int:
        return len(self.steps)


def default_max_iters(n: int, s: int) -> int:
    from latmaj.config import config

    return config.max_iters_factor * n * s


def descent_generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed_sequence(seed)))


def descend(d: Design, k: ConvexKernel, max_iters: int | None = None,
            tie_policy: TiePolicy = TiePolicy.LEXICOGRAPHIC, seed: int = 0) -> DescentTrace:
    """Appliquer des échanges Robin Hood jusqu'à l'optimum local ou au plafond"""
    if max_iters is None:
        max_iters = default_max_iters(d.n, d.s)
    if max_iters < 0:
        raise InvalidParameterError(f"max_iters doit être >= 0 ({max_iters})")
    rng = descent_generator(seed)

    start = schur_psi(d, k)
    current, psi = d, start.value
    steps: list[DescentStep] = []
    terminated = Termination.ITERATION_CAP

    while True:
        proposal = robin_hood_step(current, k, tie_policy, rng)
        if proposal is None:
            terminated = Termination.LOCAL_OPTIMUM
            break
        if len(steps) >= max_iters:
            break
        current = apply_swap(current, proposal)
        new_psi = schur_psi(current, k).value
        if not new_psi < psi:
            logger.warning("Échange sans amélioration: %s -> %s", psi, new_psi)
            break
        logger.debug("Échange %d: (%d, %d) col %d, Δ=%s, Ψ=%s",
                     len(steps) + 1, proposal.i + 1, proposal.t + 1, proposal.j + 1,
                     proposal.delta, new_psi)
        psi = new_psi
        steps.append(DescentStep(proposal, psi))

    return DescentTrace(tuple(steps), start.value, psi, start.bound, current, terminated)


# Redémarrages

@dataclass(frozen=True)
class SearchResult:
    best: DescentTrace
    best_index: int
    final_psis: tuple[Number, ...]
    seeds: tuple[int, ...]


def restart_seed(seed: int, restart: int) -> int:
    """Graine dérivée du redémarrage r"""
    sequence = seed_sequence(seed, restart)
    return int(sequence.generate_state(1, np.uint64)[0])


def restarted_search(n: int, s: int, q: int, k: ConvexKernel, restarts: int,
                     max_iters: int | None = None, seed: int = 0,
                     tie_policy: TiePolicy = TiePolicy.LEXICOGRAPHIC,
                     threads: int | None = None) -> SearchResult:
    """Descentes depuis `restarts` plans aléatoires; le meilleur Ψ final l'emporte,
    le premier redémarrage en cas d'égalité"""
    if restarts < 1:
        raise InvalidParameterError(f"restarts doit être >= 1 ({restarts})")
    seeds = tuple(restart_seed(seed, r) for r in range(restarts))

    def run(r: int) -> DescentTrace:
        start = random_balanced(n, s, q, seeds[r])
        return descend(start, k, max_iters, tie_policy, seeds[r])

    traces = map_ordered(run, range(restarts), threads)
    best_index = 0
    for r, trace in enumerate(traces):
        if trace.final_psi < traces[best_index].final_psi:
            best_index = r
    logger.debug("Recherche: meilleur redémarrage %d, Ψ=%s (borne %s)",
                 best_index, traces[best_index].final_psi, psi_lower_bound(n, s, q, k))
    return SearchResult(traces[best_index], best_index,
                        tuple(t.final_psi for t in traces), seeds)
