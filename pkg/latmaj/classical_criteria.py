#!/usr/bin/env python3
"""
Module des critères classiques pour latmaj
Polynômes de Krawtchouk, motif des longueurs de mots (GWP), critère
combinatoire Ψ_C et motif des écarts, Ave(χ²) et E(s²), discrépance
catégorielle, discrépances CL2 et WL2.

Tout ce qui dérive du vecteur de coïncidences est calculé en rationnels
exacts en regroupant les paires par valeur de β (au plus s+1 valeurs).
"""

import itertools
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np
from scipy.stats import qmc

from latmaj.design_core import Design, PCVector, pc_vector
from latmaj.errors import (
    InvalidDiscrepancyParamsError,
    InvalidParameterError,
    LengthMismatchError,
    OutOfRangeError,
    RelationMismatchError,
    RouteMismatchError,
    TooFewFactorsError,
    UnsupportedLevelCountError,
    WrongLevelCountError,
)
from latmaj.majorization import benchmark_pc
from latmaj.schur_criteria import REL_TOL, ConvexKernel, Number, psi_lower_bound, schur_psi

logger = logging.getLogger(__name__)


def _counts(d: Design | PCVector) -> tuple[PCVector, list[int]]:
    pc = d if isinstance(d, PCVector) else pc_vector(d)
    return pc, pc.counts().tolist()


def _check_order(j: int, s: int, low: int = 0) -> None:
    if not low <= j <= s:
        raise OutOfRangeError(f"j={j} hors de {low}..{s}")


def _sqrt(value: Number) -> float:
    return math.sqrt(max(0.0, float(value)))


# Krawtchouk

def krawtchouk(j: int, x: int, s: int, q: int) -> int:
    """P_j(x; s, q) = Σ_w (-1)^w (q-1)^(j-w) C(x, w) C(s-x, j-w)"""
    _check_order(j, s)
    if not 0 <= x <= s:
        raise OutOfRangeError(f"x={x} hors de 0..{s}")
    return sum(
        (-1) ** w * (q - 1) ** (j - w) * math.comb(x, w) * math.comb(s - x, j - w)
        for w in range(j + 1)
    )


# Distribution des distances et GWP

@dataclass(frozen=True)
class DistanceDistribution:
    """E_l = |{(i, k) ordonnées, diagonale comprise : β = s - l}| / n"""

    E: tuple[Fraction, ...]
    n: int

    @property
    def s(self) -> int:
        return len(self.E) - 1


def distance_distribution(d: Design | PCVector) -> DistanceDistribution:
    pc, counts = _counts(d)
    n, s = pc.n, pc.s
    E = []
    for l in range(s + 1):
        ordered = 2 * counts[s - l] + (n if l == 0 else 0)
        E.append(Fraction(ordered, n))
    return DistanceDistribution(tuple(E), n)


@dataclass(frozen=True)
class WordLengthPattern:
    """(A_1, ..., A_s); A[0] est A_1"""

    A: tuple[Number, ...]

    def __len__(self) -> int:
        return len(self.A)

    def __getitem__(self, j: int) -> Number:
        """A_j, indice de 1 à s"""
        if not 1 <= j <= len(self.A):
            raise OutOfRangeError(f"A_{j} hors de A_1..A_{len(self.A)}")
        return self.A[j - 1]

    def resolution(self) -> int:
        """Plus petit j avec A_j > 0 (s + 1 si tous nuls)"""
        for j, value in enumerate(self.A, 1):
            if value > REL_TOL:
                return j
        return len(self.A) + 1


def gwp_from_pc(d: Design | PCVector) -> WordLengthPattern:
    """A_j = (2/n²) Σ_r P_j(s - β_r) + ((q-1)^j / n) C(s, j)"""
    pc, counts = _counts(d)
    n, s, q = pc.n, pc.s, pc.q
    pattern = []
    for j in range(1, s + 1):
        total = sum(c * krawtchouk(j, s - v, s, q) for v, c in enumerate(counts) if c)
        pattern.append(Fraction(2 * total, n * n) + Fraction((q - 1) ** j * math.comb(s, j), n))
    return WordLengthPattern(tuple(pattern))


def gwp_from_distances(dist: DistanceDistribution, q: int) -> WordLengthPattern:
    """A_j = (1/n) Σ_l E_l P_j(l)"""
    s = dist.s
    return WordLengthPattern(tuple(
        sum((E_l * krawtchouk(j, l, s, q) for l, E_l in enumerate(dist.E)), Fraction(0)) / dist.n
        for j in range(1, s + 1)
    ))


def gwp(d: Design | PCVector) -> WordLengthPattern:
    pc, _ = _counts(d)
    primary = gwp_from_pc(pc)
    oracle = gwp_from_distances(distance_distribution(pc), pc.q)
    if primary.A != oracle.A:
        raise RouteMismatchError(f"GWP: {primary.A} != {oracle.A}")
    return primary


class AberrationOrder(str, Enum):
    PRECEDES = "precedes"
    EQUAL = "equal"
    SUCCEEDS = "succeeds"


def aberration_order(x: WordLengthPattern | Sequence[Number],
                     y: WordLengthPattern | Sequence[Number]) -> AberrationOrder:
    """x précède y si la première différence non nulle de x - y est négative"""
    xs = x.A if isinstance(x, WordLengthPattern) else tuple(x)
    ys = y.A if isinstance(y, WordLengthPattern) else tuple(y)
    if len(xs) != len(ys):
        raise LengthMismatchError(len(xs), len(ys))
    for a, b in zip(xs, ys):
        diff = a - b
        exact = isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction))
        if diff == 0 or (not exact and abs(diff) <= REL_TOL):
            continue
        return AberrationOrder.PRECEDES if diff < 0 else AberrationOrder.SUCCEEDS
    return AberrationOrder.EQUAL


# Critère combinatoire et motif des écarts

def psi_combinatorial(d: Design | PCVector, j: int) -> Fraction:
    """Ψ_C(X; j) = 2 Σ_r C(β_r, j) - C(s, j)(n²/q^j - n)"""
    pc, counts = _counts(d)
    n, s, q = pc.n, pc.s, pc.q
    _check_order(j, s, 1)
    total = sum(c * math.comb(v, j) for v, c in enumerate(counts))
    return 2 * total - math.comb(s, j) * (Fraction(n * n, q ** j) - n)


def projection_counts_oracle(d: Design, j: int) -> Fraction:
    """Σ_{|u|=j} Σ_x (N_x^(u) - n/q^j)² par énumération des projections"""
    _check_order(j, d.s, 1)
    target = Fraction(d.n, d.q ** j)
    weights = d.q ** np.arange(j - 1, -1, -1)
    total = Fraction(0)
    for cols in itertools.combinations(range(d.s), j):
        cells = d.matrix[:, cols] @ weights
        counts = np.bincount(cells, minlength=d.q ** j)
        total += sum((int(c) - target) ** 2 for c in counts)
    return total


@dataclass(frozen=True)
class DeviationPattern:
    """(B_1, ..., B_s) et les Ψ_C(X; j) dont ils dérivent"""

    psiC: tuple[Fraction, ...]
    q: int

    @property
    def squared(self) -> tuple[Fraction, ...]:
        """B_j² exacts"""
        return tuple(value / self.q ** j for j, value in enumerate(self.psiC, 1))

    @property
    def B(self) -> tuple[float, ...]:
        return tuple(_sqrt(v) for v in self.squared)


def deviation_pattern(d: Design | PCVector, check: bool = True) -> DeviationPattern:
    """B_j = sqrt(Ψ_C(X; j) / q^j), avec contrôle de la relation
    B_j² = (n²/q^(2j)) Σ_{k<=j} C(s-k, j-k) A_k"""
    pc, _ = _counts(d)
    n, s, q = pc.n, pc.s, pc.q
    result = DeviationPattern(tuple(psi_combinatorial(pc, j) for j in range(1, s + 1)), q)
    squared = result.squared

    if check:
        pattern = gwp(pc)
        for j in range(1, s + 1):
            linear = sum(
                (math.comb(s - k, j - k) * pattern[k] for k in range(1, j + 1)), Fraction(0)
            ) * Fraction(n * n, q ** (2 * j))
            if linear != squared[j - 1]:
                raise RelationMismatchError(f"B_{j}² = {squared[j - 1]} != {linear}")

    return result


@dataclass(frozen=True)
class PatternBenchmarks:
    """Références (A*_1..A*_s) et (B*_1..B*_s); A*_1 = B*_1 = 0"""

    Astar: tuple[Fraction, ...]
    Bstar_squared: tuple[Fraction, ...]

    @property
    def Bstar(self) -> tuple[float, ...]:
        return tuple(_sqrt(v) for v in self.Bstar_squared)


def pattern_benchmarks(n: int, s: int, q: int) -> PatternBenchmarks:
    bench = benchmark_pc(n, s, q)
    theta, f = bench.theta, bench.frac
    Astar, Bstar = [], []
    for j in range(1, s + 1):
        upper = (1 - f) * krawtchouk(j, s - theta, s, q)
        if f:
            upper += f * krawtchouk(j, s - theta - 1, s, q)
        Astar.append((1 - Fraction(1, n)) * upper + Fraction((q - 1) ** j * math.comb(s, j), n))

        spread = math.comb(theta, j) + f * math.comb(theta, j - 1)
        Bstar.append(
            Fraction(n * (n - 1), q ** j) * spread
            - math.comb(s, j) * (Fraction(n * n, q ** (2 * j)) - Fraction(n, q ** j))
        )
    return PatternBenchmarks(tuple(Astar), tuple(Bstar))


# Ave(χ²) et E(s²)

def _require_factors(s: int) -> None:
    if s < 2:
        raise TooFewFactorsError(s)


def ave_chi2_offset(n: int, s: int, q: int) -> Fraction:
    """a = (q²ns + n²(1 - s - q)) / (q²(s - 1))"""
    _require_factors(s)
    return Fraction(q * q * n * s + n * n * (1 - s - q), q * q * (s - 1))


def ave_chi2(d: Design | PCVector) -> Fraction:
    """Ave(χ²) = (2/(s(s-1))) Σ β_r² + a

    En journalisation debug, un plan est aussi recompté cellule par cellule
    (ave_chi2_direct); un écart est signalé en avertissement.
    """
    pc, counts = _counts(d)
    n, s, q = pc.n, pc.s, pc.q
    _require_factors(s)
    squares = sum(c * v * v for v, c in enumerate(counts))
    value = Fraction(2 * squares, s * (s - 1)) + ave_chi2_offset(n, s, q)
    if isinstance(d, Design) and logger.isEnabledFor(logging.DEBUG):
        direct = ave_chi2_direct(d)
        if direct != value:
            logger.warning("Ave(χ²) = %s mais comptage direct = %s", value, direct)
        else:
            logger.debug("Ave(χ²) = %s confirmé par comptage direct", value)
    return value


def ave_chi2_direct(d: Design) -> Fraction:
    """Moyenne sur les paires de colonnes de Σ_τ (N_τ - n/q²)²"""
    _require_factors(d.s)
    target = Fraction(d.n, d.q * d.q)
    total = Fraction(0)
    for j, l in itertools.combinations(range(d.s), 2):
        cells = d.matrix[:, j] * d.q + d.matrix[:, l]
        counts = np.bincount(cells, minlength=d.q * d.q)
        total += sum((int(c) - target) ** 2 for c in counts)
    return total * Fraction(2, d.s * (d.s - 1))


def ave_chi2_bound(n: int, s: int, q: int) -> Fraction:
    """n(n-1)/(s(s-1)) (θ² + 2θf + f) + a"""
    bench = benchmark_pc(n, s, q)
    theta, f = bench.theta, bench.frac
    spread = theta * theta + 2 * theta * f + f
    return Fraction(n * (n - 1), s * (s - 1)) * spread + ave_chi2_offset(n, s, q)


def ave_chi2_closed_form_bound(n: int, s: int, q: int) -> Fraction:
    """Borne pour β̄ entier: n²(q-1)((q-1)s - n + 1) / (q²(s-1)(n-1))"""
    bench = benchmark_pc(n, s, q)
    if bench.frac:
        raise InvalidParameterError(f"β̄ = {bench.bar} non entier")
    _require_factors(s)
    return Fraction(n * n * (q - 1) * ((q - 1) * s - n + 1), q * q * (s - 1) * (n - 1))


def e_s2(d: Design) -> Fraction:
    """E(s²) sur les colonnes codées ±1 (q = 2)"""
    if d.q != 2:
        raise WrongLevelCountError(d.q, 2)
    _require_factors(d.s)
    signs = 2 * d.matrix - 1
    gram = signs.T @ signs
    upper = gram[np.triu_indices(d.s, k=1)]
    return Fraction(2 * int((upper * upper).sum()), d.s * (d.s - 1))


def e_s2_bound(n: int, s: int) -> Fraction:
    return 4 * ave_chi2_bound(n, s, 2)


def yamada_lin_chi2(d: Design | PCVector) -> Fraction:
    """Ave(χ²) · 9/n pour q = 3"""
    pc, _ = _counts(d)
    if pc.q != 3:
        raise WrongLevelCountError(pc.q, 3)
    return ave_chi2(pc) * Fraction(9, pc.n)


# Discrépance catégorielle

@dataclass(frozen=True)
class DiscrepancyParams:
    """Noyau catégoriel: a sur la diagonale, b ailleurs, -a/(q-1) <= b < a"""

    a: Number
    b: Number
    q: int

    def __post_init__(self):
        a, b, q = self.a, self.b, self.q
        if q < 2:
            raise InvalidDiscrepancyParamsError(f"q doit être >= 2 (q={q})")
        if not a > 0:
            raise InvalidDiscrepancyParamsError(f"a doit être > 0 (a={a})")
        lower = -Fraction(a) / (q - 1) if isinstance(a, Fraction) else -a / (q - 1)
        if not lower <= b < a:
            raise InvalidDiscrepancyParamsError(f"b={b} hors de [{lower}, {a})")
        if not 1 + b > 0:
            raise InvalidDiscrepancyParamsError(f"1 + b doit être > 0 (b={b})")
        if a >= q - 1:
            logger.warning("Discrépance catégorielle: a=%s >= q-1=%d", a, q - 1)

    @classmethod
    def discrete(cls, a: Number, q: int) -> "DiscrepancyParams":
        """Discrépance discrète: a + (q-1)b = 0"""
        b = -Fraction(a) / (q - 1) if isinstance(a, (int, Fraction)) else -a / (q - 1)
        return cls(a, b, q)

    @property
    def mu(self) -> Number:
        return (self.a + (self.q - 1) * self.b) / self.q

    @property
    def rho(self) -> Number:
        return (1 + self.a) / (1 + self.b)


@dataclass(frozen=True)
class Discrepancy:
    """Discrépance au carré et sa borne inférieure au carré"""

    kind: str
    squared: Number
    bound_squared: Number

    @property
    def value(self) -> float:
        return _sqrt(self.squared)

    @property
    def bound(self) -> float:
        return _sqrt(self.bound_squared)


def _check_params(pc: PCVector, p: DiscrepancyParams) -> None:
    if p.q != pc.q:
        raise InvalidDiscrepancyParamsError(f"Paramètres pour q={p.q}, plan à q={pc.q}")


def categorical_discrepancy(d: Design | PCVector, p: DiscrepancyParams) -> Discrepancy:
    """D² = (1+b)^s 2Ψ_E(X; ρ)/n² + (1+a)^s/n - (1+μ)^s"""
    pc, _ = _counts(d)
    _check_params(pc, p)
    n, s = pc.n, pc.s
    psi = schur_psi(pc, ConvexKernel.exponential(p.rho))
    squared = (1 + p.b) ** s * 2 * psi.value / (n * n) + (1 + p.a) ** s / n - (1 + p.mu) ** s
    return Discrepancy("categorical", squared, categorical_bound(n, s, p))


def categorical_bound(n: int, s: int, p: DiscrepancyParams) -> Number:
    """(1/n)((n-1)(1+b)^s(1-f+ρf)ρ^θ + (1+a)^s) - (1+μ)^s"""
    bench = benchmark_pc(n, s, p.q)
    rho, f = p.rho, bench.frac
    pairs = (n - 1) * (1 + p.b) ** s * (1 - f + rho * f) * rho ** bench.theta
    return (pairs + (1 + p.a) ** s) / n - (1 + p.mu) ** s


def _subset_terms(d: Design, p: DiscrepancyParams) -> list[tuple[int, Number]]:
    """(|u|, D_u²) pour chaque sous-ensemble u non vide de colonnes"""
    agree = d.matrix[:, None, :] == d.matrix[None, :, :]
    terms = []
    for size in range(1, d.s + 1):
        for cols in itertools.combinations(range(d.s), size):
            hits = np.bincount(agree[:, :, cols].sum(axis=2).ravel(), minlength=size + 1)
            pairs = sum(int(c) * p.a ** h * p.b ** (size - h) for h, c in enumerate(hits) if c)
            terms.append((size, pairs / (d.n * d.n) - p.mu ** size))
    return terms


def categorical_discrepancy_oracle(d: Design, p: DiscrepancyParams) -> Number:
    """D² par la double somme du noyau sur les paires ordonnées et les sous-ensembles"""
    _check_params(pc_vector(d), p)
    return sum(term for _, term in _subset_terms(d, p))


def categorical_pattern(d: Design, p: DiscrepancyParams) -> tuple[Number, ...]:
    """(D_1², ..., D_s²): contributions des sous-ensembles de taille t"""
    _check_params(pc_vector(d), p)
    pattern = [0] * d.s
    for size, term in _subset_terms(d, p):
        pattern[size - 1] += term
    return tuple(pattern)


# Discrépances L2

class L2Kind(str, Enum):
    CL2 = "cl2"
    WL2 = "wl2"


def _l2_constants(kind: L2Kind, n: int, s: int, q: int) -> tuple[Fraction, Fraction, Fraction]:
    """(constante additive, facteur, base ρ) de l'identité L2² = c + facteur·2Ψ_E(ρ)/n²"""
    if kind is L2Kind.CL2:
        if q != 2:
            raise UnsupportedLevelCountError("CL2", q)
        a1 = Fraction(5, 4) ** s / n + Fraction(13, 12) ** s - 2 * Fraction(35, 32) ** s
        return a1, Fraction(1), Fraction(5, 4)
    if q not in (2, 3):
        raise UnsupportedLevelCountError("WL2", q)
    a2 = Fraction(3, 2) ** s / n - Fraction(4, 3) ** s
    if q == 2:
        return a2, Fraction(5, 4) ** s, Fraction(6, 5)
    return a2, Fraction(23, 18) ** s, Fraction(27, 23)


def l2_discrepancy(d: Design | PCVector, kind: L2Kind) -> Discrepancy:
    pc, _ = _counts(d)
    n, s, q = pc.n, pc.s, pc.q
    constant, factor, rho = _l2_constants(kind, n, s, q)
    psi = schur_psi(pc, ConvexKernel.exponential(rho))
    squared = constant + factor * 2 * psi.value / (n * n)
    return Discrepancy(kind.value, squared, l2_bound(n, s, q, kind))


def l2_bound(n: int, s: int, q: int, kind: L2Kind) -> Fraction:
    """Borne de L2² sur U(n, q^s), atteinte par un plan équidistant"""
    constant, factor, rho = _l2_constants(kind, n, s, q)
    return constant + factor * 2 * psi_lower_bound(n, s, q, ConvexKernel.exponential(rho)) / (n * n)


def l2_discrepancy_direct(d: Design, kind: L2Kind) -> float:
    """L2² par scipy.stats.qmc, niveau l placé en (2l+1)/(2q)"""
    _l2_constants(kind, d.n, d.s, d.q)
    sample = (2 * d.matrix + 1) / (2 * d.q)
    method = "CD" if kind is L2Kind.CL2 else "WD"
    return float(qmc.discrepancy(sample, iterative=False, method=method))


def l2_kinds(q: int) -> list[L2Kind]:
    """Discrépances L2 disponibles pour q niveaux"""
    if q == 2:
        return [L2Kind.CL2, L2Kind.WL2]
    return [L2Kind.WL2] if q == 3 else []
