#!/usr/bin/env python3
"""
Module des rapports pour latmaj
Classement en deux étapes d'un lot de plans, rapport complet des critères,
profils cumulés et sérialisation JSON (nombres en chaînes, 12 chiffres
significatifs par défaut)
"""

import json
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from latmaj.classical_criteria import (
    DeviationPattern,
    DiscrepancyParams,
    Discrepancy,
    PatternBenchmarks,
    WordLengthPattern,
    ave_chi2,
    ave_chi2_bound,
    categorical_discrepancy,
    deviation_pattern,
    e_s2,
    e_s2_bound,
    gwp,
    l2_discrepancy,
    l2_kinds,
    pattern_benchmarks,
)
from latmaj.construction import DescentTrace
from latmaj.design_core import Design, PCVector, equidistance_class, pc_vector
from latmaj.majorization import PoolClassification, benchmark_pc, classify_pool
from latmaj.parallel import map_ordered
from latmaj.schur_criteria import REL_TOL, ConvexKernel, Number, SchurValue, schur_psi

logger = logging.getLogger(__name__)

JSON_DIGITS = 12


def format_number(value: Number | None, digits: int = JSON_DIGITS) -> str | None:
    """Nombre en chaîne décimale à `digits` chiffres significatifs"""
    if value is None:
        return None
    return format(float(value), f".{digits}g")


def format_fixed(value: Number, decimals: int = 4) -> str:
    return f"{float(value):.{decimals}f}"


def dumps(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False)


def _same(a: Number, b: Number) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return math.isclose(float(a), float(b), rel_tol=REL_TOL)


# Classement d'un lot

@dataclass(frozen=True)
class RankedDesign:
    index: int
    rank: int
    value: SchurValue


@dataclass(frozen=True)
class PoolRanking:
    """Étape 1: admissibilité; étape 2: tri des admissibles par Ψ"""

    classification: PoolClassification
    ranked: tuple[RankedDesign, ...]
    kernel: ConvexKernel

    @property
    def top(self) -> tuple[int, ...]:
        """Indices classés premiers (plusieurs en cas d'égalité)"""
        return tuple(r.index for r in self.ranked if r.rank == 1)


def rank_pool(pool: Sequence[Design], k: ConvexKernel, threads: int | None = None) -> PoolRanking:
    pcs = map_ordered(pc_vector, pool, threads)
    classification = classify_pool(pcs, threads)
    values = map_ordered(lambda i: schur_psi(pcs[i], k), classification.admissible, threads)

    order = sorted(zip(classification.admissible, values), key=lambda item: (item[1].value, item[0]))
    ranked: list[RankedDesign] = []
    for position, (index, value) in enumerate(order, 1):
        if ranked and _same(value.value, ranked[-1].value.value):
            rank = ranked[-1].rank
        else:
            rank = position
        ranked.append(RankedDesign(index, rank, value))
    logger.debug("rank_pool: %d admissibles sur %d", len(ranked), len(pool))
    return PoolRanking(classification, tuple(ranked), k)


# Rapport de critères

@dataclass(frozen=True)
class CriterionReport:
    name: str
    n: int
    s: int
    q: int
    beta_bar: Fraction
    equidistance: str
    gwp: WordLengthPattern
    deviation: DeviationPattern
    benchmarks: PatternBenchmarks
    ave_chi2: Fraction | None
    ave_chi2_bound: Fraction | None
    e_s2: Fraction | None
    e_s2_bound: Fraction | None
    categorical: Discrepancy
    params: DiscrepancyParams
    l2: dict[str, Discrepancy] = field(default_factory=dict)
    schur: tuple[SchurValue, ...] = ()

    def to_json(self, digits: int = JSON_DIGITS) -> dict:
        def num(value):
            return format_number(value, digits)

        def pair(value, bound):
            return {"value": num(value), "bound": num(bound)}

        def disc(item: Discrepancy | None):
            if item is None:
                return None
            return {"squared": num(item.squared), "value": num(item.value),
                    "bound_squared": num(item.bound_squared), "bound": num(item.bound)}

        psi_c_bound = [value * self.q ** j for j, value in enumerate(self.benchmarks.Bstar_squared, 1)]
        categorical = disc(self.categorical)
        categorical["params"] = {"a": num(self.params.a), "b": num(self.params.b),
                                 "rho": num(self.params.rho)}
        return {
            "design": {"name": self.name, "n": self.n, "s": self.s, "q": self.q},
            "beta_bar": num(self.beta_bar),
            "equidistance": self.equidistance,
            "gwp": {"values": [num(v) for v in self.gwp.A],
                    "bound": [num(v) for v in self.benchmarks.Astar]},
            "deviation": {"values": [num(v) for v in self.deviation.B],
                          "bound": [num(v) for v in self.benchmarks.Bstar]},
            "psi_c": {"values": [num(v) for v in self.deviation.psiC],
                      "bound": [num(v) for v in psi_c_bound]},
            "ave_chi2": None if self.ave_chi2 is None else pair(self.ave_chi2, self.ave_chi2_bound),
            "e_s2": None if self.e_s2 is None else pair(self.e_s2, self.e_s2_bound),
            "categorical_d2": categorical,
            "cl2": disc(self.l2.get("cl2")),
            "wl2": disc(self.l2.get("wl2")),
            "schur": [{"kernel": v.kernel.label, "value": num(v.value), "bound": num(v.bound),
                       "gap": num(v.gap)} for v in self.schur],
        }


def criterion_report(d: Design, kernels: Sequence[ConvexKernel] = (),
                     params: DiscrepancyParams | None = None) -> CriterionReport:
    pc: PCVector = pc_vector(d)
    n, s, q = d.params
    if params is None:
        params = DiscrepancyParams(Fraction(1, 4), Fraction(0), q)

    if s >= 2:
        chi2, chi2_bound = ave_chi2(pc), ave_chi2_bound(n, s, q)
    else:
        chi2 = chi2_bound = None
    if q == 2 and s >= 2:
        es2, es2_bound = e_s2(d), e_s2_bound(n, s)
    else:
        es2 = es2_bound = None

    return CriterionReport(
        name=d.name, n=n, s=s, q=q,
        beta_bar=benchmark_pc(n, s, q).bar,
        equidistance=equidistance_class(pc).value,
        gwp=gwp(pc),
        deviation=deviation_pattern(pc),
        benchmarks=pattern_benchmarks(n, s, q),
        ave_chi2=chi2, ave_chi2_bound=chi2_bound,
        e_s2=es2, e_s2_bound=es2_bound,
        categorical=categorical_discrepancy(pc, params),
        params=params,
        l2={kind.value: l2_discrepancy(pc, kind) for kind in l2_kinds(q)},
        schur=tuple(schur_psi(pc, k) for k in kernels),
    )


# Profils cumulés

def emit_cumsum_profile(d: Design) -> list[tuple[int, int, int]]:
    """Lignes (k, somme cumulée du vecteur trié, somme cumulée de β̃), k = 1..m"""
    pc = pc_vector(d)
    design = pc.cumsum().tolist()
    bench = benchmark_pc(d.n, d.s, d.q).profile().tolist()
    return [(k, int(a), int(b)) for k, (a, b) in enumerate(zip(design, bench), 1)]


# Traces de descente

def trace_records(trace: DescentTrace, digits: int = JSON_DIGITS) -> list[dict]:
    """Un enregistrement par échange (essais et colonne en base 1), puis le bilan"""
    records = [
        {"iter": it, "i": step.proposal.i + 1, "t": step.proposal.t + 1,
         "j": step.proposal.j + 1, "delta": format_number(step.proposal.delta, digits),
         "psi": format_number(step.psi, digits)}
        for it, step in enumerate(trace.steps, 1)
    ]
    records.append({"final_psi": format_number(trace.final_psi, digits),
                    "bound": format_number(trace.bound, digits),
                    "terminated": trace.terminated.value})
    return records


def write_trace(path: str | Path, trace: DescentTrace, digits: int = JSON_DIGITS) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for record in trace_records(trace, digits):
            f.write(json.dumps(record, sort_keys=True) + "\n")
