#!/usr/bin/env python3
"""
Module de majorisation pour latmaj
Ordre de majorisation sur les vecteurs de coïncidences, admissibilité
d'un ensemble de plans et vecteur de référence β̃
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from latmaj.design_core import (
    Design,
    PCVector,
    check_divides,
    pair_count,
    pc_mean,
    pc_total,
    pc_vector,
)
from latmaj.errors import (
    LengthMismatchError,
    MfNotIntegralError,
    MixedParametersError,
    SumMismatchError,
)
from latmaj.parallel import map_ordered

logger = logging.getLogger(__name__)


class RelationTag(str, Enum):
    EQUAL = "equal_as_multisets"
    LEFT_STRICT = "left_majorized_strict"
    RIGHT_STRICT = "right_majorized_strict"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class MajorizationRelation:
    """Relation entre deux vecteurs; witness = plus petit k (base 1) d'inégalité stricte"""

    tag: RelationTag
    witness: int | None = None

    def weakly_left(self) -> bool:
        """x ⪯ y"""
        return self.tag in (RelationTag.EQUAL, RelationTag.LEFT_STRICT)

    def weakly_right(self) -> bool:
        """y ⪯ x"""
        return self.tag in (RelationTag.EQUAL, RelationTag.RIGHT_STRICT)


def _prefix_sums(pc: PCVector | Sequence[int]) -> np.ndarray:
    values = pc.values if isinstance(pc, PCVector) else np.asarray(pc, dtype=np.int64)
    return np.cumsum(np.sort(values))


def _relation_from_diff(diff: np.ndarray) -> MajorizationRelation:
    """diff[k-1] = Σ_{r<=k} x_[r] - Σ_{r<=k} y_[r], pour k = 1..m-1"""
    positive = diff > 0
    negative = diff < 0
    if not positive.any() and not negative.any():
        return MajorizationRelation(RelationTag.EQUAL)
    if not negative.any():
        return MajorizationRelation(RelationTag.LEFT_STRICT, int(np.argmax(positive)) + 1)
    if not positive.any():
        return MajorizationRelation(RelationTag.RIGHT_STRICT, int(np.argmax(negative)) + 1)
    return MajorizationRelation(RelationTag.INCOMPARABLE)


def compare_pc(x: PCVector | Sequence[int], y: PCVector | Sequence[int]) -> MajorizationRelation:
    """Comparer x et y par sommes partielles des statistiques d'ordre croissantes

    LEFT_STRICT signifie x ≺ y: x est plus « plat » que y.
    """
    cx, cy = _prefix_sums(x), _prefix_sums(y)
    if cx.size != cy.size:
        raise LengthMismatchError(int(cx.size), int(cy.size))
    if cx[-1] != cy[-1]:
        raise SumMismatchError(int(cx[-1]), int(cy[-1]))
    return _relation_from_diff(cx[:-1] - cy[:-1])


@dataclass(frozen=True)
class PoolClassification:
    admissible: tuple[int, ...]
    inadmissible: tuple[tuple[int, int], ...]
    majorants: tuple[int, ...] = ()

    @property
    def majorant(self) -> int | None:
        return self.majorants[0] if self.majorants else None

    def is_admissible(self, index: int) -> bool:
        return index in self.admissible


def classify_pool(pool: Sequence[Design | PCVector], threads: int | None = None) -> PoolClassification:
    """Étape 1: un plan est inadmissible si un autre plan du lot a un vecteur
    strictement majorisé par le sien; il est majorant si son vecteur est
    faiblement majorisé par celui de tous les autres"""
    if not pool:
        return PoolClassification((), (), ())

    pcs = [item if isinstance(item, PCVector) else pc_vector(item) for item in pool]
    expected = (pcs[0].n, pcs[0].s, pcs[0].q)
    for index, pc in enumerate(pcs):
        found = (pc.n, pc.s, pc.q)
        if found != expected or pc.m != pcs[0].m or pc.sum != pcs[0].sum:
            raise MixedParametersError(expected, found, index)

    size = len(pcs)
    prefix = np.vstack([_prefix_sums(pc)[:-1] for pc in pcs])
    logger.debug("classify_pool: %d plans, m=%d", size, pcs[0].m)

    def row(i: int) -> tuple[np.ndarray, np.ndarray]:
        diff = prefix[i] - prefix
        # ge[j]: β(X_i) ⪯ β(X_j); le[j]: β(X_j) ⪯ β(X_i)
        return (diff >= 0).all(axis=1), (diff <= 0).all(axis=1)

    rows = map_ordered(row, range(size), threads)
    ge = np.vstack([r[0] for r in rows])
    le = np.vstack([r[1] for r in rows])
    equal = ge & le

    admissible, inadmissible, majorants = [], [], []
    for i in range(size):
        # X_j strictement plus plat que X_i
        dominators = np.flatnonzero(le[i] & ~equal[i])
        if dominators.size:
            inadmissible.append((i, int(dominators[0])))
        else:
            admissible.append(i)
        if ge[i].all():
            majorants.append(i)
    return PoolClassification(tuple(admissible), tuple(inadmissible), tuple(majorants))


@dataclass(frozen=True)
class PCBenchmark:
    """β̃: m(1-f) copies de θ suivies de mf copies de θ+1"""

    n: int
    s: int
    q: int
    theta: int
    frac: Fraction
    count_theta: int
    count_next: int

    @property
    def m(self) -> int:
        return self.count_theta + self.count_next

    @property
    def bar(self) -> Fraction:
        return self.theta + self.frac

    @property
    def tilde(self) -> np.ndarray:
        return np.concatenate([
            np.full(self.count_theta, self.theta, dtype=np.int64),
            np.full(self.count_next, self.theta + 1, dtype=np.int64),
        ])

    def as_pc(self) -> PCVector:
        return PCVector(self.tilde, self.n, self.s, self.q)

    def profile(self) -> np.ndarray:
        """Sommes cumulées de β̃ (deux pentes θ puis θ+1)"""
        return np.cumsum(self.tilde)


def benchmark_pc(n: int, s: int, q: int) -> PCBenchmark:
    check_divides(n, q)
    m = pair_count(n)
    mean = pc_mean(n, s, q)
    theta = mean.numerator // mean.denominator
    frac = mean - theta
    count_next = m * frac
    if count_next.denominator != 1:
        raise MfNotIntegralError(m, frac)
    bench = PCBenchmark(n, s, q, theta, frac, m - int(count_next), int(count_next))
    assert bench.count_theta * theta + bench.count_next * (theta + 1) == pc_total(n, s, q)
    return bench


def cumsum_profile(pc: PCVector) -> np.ndarray:
    """Sommes cumulées du vecteur trié, k = 1..m"""
    return pc.cumsum()


def benchmark_profile(benchmark: PCBenchmark) -> np.ndarray:
    return benchmark.profile()
