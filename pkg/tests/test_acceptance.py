"""Reproduction de l'exemple U(27, 3^8) et du plan U(8, 2^6), bornes sur plans aléatoires"""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from latmaj.classical_criteria import (
    AberrationOrder,
    DiscrepancyParams,
    L2Kind,
    aberration_order,
    ave_chi2,
    ave_chi2_bound,
    categorical_discrepancy,
    deviation_pattern,
    gwp,
    l2_discrepancy,
    l2_kinds,
    pattern_benchmarks,
)
from latmaj.construction import apply_swap, restarted_search, robin_hood_step
from latmaj.design_core import coincidence_matrix, pc_vector, projections
from latmaj.majorization import RelationTag, benchmark_pc, classify_pool, compare_pc
from latmaj.schur_criteria import GOLDEN, ConvexKernel, psi_lower_bound, schur_psi
from strategies import balanced_designs

VARIANCE = ConvexKernel.variance()
POWER_PI = ConvexKernel.power(math.pi)
EXP_GOLDEN = ConvexKernel.exponential(GOLDEN)


@pytest.mark.parametrize("name, variance, power, exponential", [
    ("x1", 0.6391, 1658.7, 683.4),
    ("x2", 0.6391, 1724.5, 685.6),
])
def test_schur_values_at_printed_precision(request, name, variance, power, exponential):
    d = request.getfixturevalue(name)
    assert float(schur_psi(d, VARIANCE).value) == pytest.approx(variance, abs=5e-5)
    assert schur_psi(d, POWER_PI).value == pytest.approx(power, abs=0.05)
    assert schur_psi(d, EXP_GOLDEN).value == pytest.approx(exponential, abs=0.05)


def test_bounds_at_printed_precision():
    assert psi_lower_bound(27, 4, 3, VARIANCE) == Fraction(390, 2197)
    assert float(psi_lower_bound(27, 4, 3, VARIANCE)) == pytest.approx(0.1775, abs=5e-5)
    assert psi_lower_bound(27, 4, 3, POWER_PI) == pytest.approx(984.8, abs=0.05)
    assert psi_lower_bound(27, 4, 3, EXP_GOLDEN) == pytest.approx(648.9, abs=0.05)


def test_majorization_chain(x1, x2, x3, x4, table1):
    for low in (x1, x2):
        assert compare_pc(pc_vector(low), pc_vector(x3)).tag is RelationTag.LEFT_STRICT
        assert compare_pc(pc_vector(low), pc_vector(x4)).tag is RelationTag.LEFT_STRICT
    assert compare_pc(pc_vector(x3), pc_vector(x4)).tag is RelationTag.LEFT_STRICT
    assert compare_pc(pc_vector(x1), pc_vector(x2)).tag is RelationTag.INCOMPARABLE

    pool = [sub for _, sub in projections(table1, 4)]
    names = [sub.name for sub in pool]
    result = classify_pool(pool)
    assert result.majorants == ()
    assert not result.is_admissible(names.index("{ABDF}"))
    assert not result.is_admissible(names.index("{ADEF}"))


def test_word_length_patterns(x1, x2):
    assert gwp(x1).A == (0, 0, Fraction(10, 9), Fraction(8, 9))
    assert gwp(x2).A == (0, 0, Fraction(46, 27), Fraction(20, 27))
    assert aberration_order(gwp(x1), gwp(x2)) is AberrationOrder.PRECEDES


def test_wrap_around_discrepancy(x1, x2):
    assert l2_discrepancy(x1, L2Kind.WL2).value == pytest.approx(0.4242, abs=2e-4)
    assert l2_discrepancy(x2, L2Kind.WL2).value == pytest.approx(0.4245, abs=2e-4)


def test_robin_hood_reproduction(table3):
    proposal = robin_hood_step(table3, ConvexKernel.quadratic())
    assert (proposal.i + 1, proposal.t + 1, proposal.j + 1) == (1, 8, 4)

    after = apply_swap(table3, proposal)
    before_m, after_m = coincidence_matrix(table3).matrix, coincidence_matrix(after).matrix
    assert int(np.count_nonzero(np.triu(before_m != after_m, k=1))) == 12
    assert compare_pc(pc_vector(after), pc_vector(table3)).tag is RelationTag.LEFT_STRICT
    assert round(float(pc_vector(table3).mean), 4) == 2.5714


def test_restarted_descent_quality():
    k = ConvexKernel.quadratic()
    result = restarted_search(8, 6, 2, k, restarts=50, seed=20)
    assert float(result.best.final_psi) <= 1.05 * float(psi_lower_bound(8, 6, 2, k))
    psis = [result.best.initial_psi] + [step.psi for step in result.best.steps]
    assert all(b < a for a, b in zip(psis, psis[1:]))


@pytest.mark.parametrize("params", [(8, 6, 2), (12, 4, 3), (9, 4, 3), (12, 5, 2), (16, 3, 4)])
@given(data=st.data())
@settings(max_examples=1000, deadline=None)
def test_every_bound_holds(params, data):
    d = data.draw(balanced_designs(*params))
    n, s, q = params
    pc = pc_vector(d)
    for k in (VARIANCE, POWER_PI, EXP_GOLDEN, ConvexKernel.quadratic(), ConvexKernel.choose(2)):
        result = schur_psi(pc, k)
        assert float(result.value) >= float(result.bound) - 1e-9 * abs(float(result.bound))

    bench = pattern_benchmarks(n, s, q)
    assert aberration_order(bench.Astar, gwp(pc)) is not AberrationOrder.SUCCEEDS
    for low, value in zip(bench.Bstar_squared, deviation_pattern(pc).squared):
        assert low <= value

    assert ave_chi2(pc) >= ave_chi2_bound(n, s, q)
    disc = categorical_discrepancy(pc, DiscrepancyParams(Fraction(1, 4), Fraction(0), q))
    assert disc.squared >= disc.bound_squared
    for kind in l2_kinds(q):
        result = l2_discrepancy(pc, kind)
        assert result.squared >= result.bound_squared


def test_equidistant_fixtures_attain_bounds(oa_4_3_2, oa_9_4_3):
    for d in (oa_4_3_2, oa_9_4_3):
        assert benchmark_pc(*d.params).frac == 0
        for k in (VARIANCE, POWER_PI, EXP_GOLDEN):
            assert schur_psi(d, k).attains_bound()
        disc = categorical_discrepancy(d, DiscrepancyParams(Fraction(1, 4), Fraction(0), d.q))
        assert disc.squared == disc.bound_squared
