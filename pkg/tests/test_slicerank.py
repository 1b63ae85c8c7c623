import random
from math import comb

import numpy as np
import pytest
from sympy import GF
from sympy.polys.matrices import DomainMatrix

from cihyper.algebra import Form, parse_form, random_form, random_forms
from cihyper.config import DEFAULT_PRIME
from cihyper.errors import CapacityError, DimensionMismatch
from cihyper.series import ci_series
from cihyper.slicerank import (
    build_slice_matrix,
    generic_hilbert_function,
    generic_hilbert_value,
    hilbert_value,
    matrix_rank,
    sparse_rank,
)


def oracle_rank(dense, p):
    """Rank via sympy's domain matrices over GF(p), independent of our eliminators."""
    K = GF(p)
    rows = [[K(int(x)) for x in row] for row in dense.tolist()]
    if not rows:
        return 0
    return DomainMatrix(rows, dense.shape, K).rank()


def test_single_variable_generator():
    m = build_slice_matrix([Form.variable(1, 0)], 2)
    assert m.shape == (2, 3)
    assert m.to_dense().tolist() == [[1, 0, 0], [0, 1, 0]]  # x0*x0, x1*x0


def test_binary_quintics_shape():
    m = build_slice_matrix(random_forms(1, [5] * 4, seed=3), 6)
    assert m.shape == (8, 7)


def test_line_and_cubic_shape():
    m = build_slice_matrix(random_forms(3, [1, 3], seed=3), 4)
    assert m.shape == (24, 35)


def test_rows_are_monomial_multiples():
    f = random_form(2, 2, seed=9)
    m = build_slice_matrix([f], 3)
    for k, mult in enumerate([(1, 0, 0), (0, 1, 0), (0, 0, 1)]):
        expected = Form.from_terms(2, 1, {mult: 1}) * f
        assert m.to_dense()[k].tolist() == expected.coeffs.tolist()


def test_high_degree_generators_skipped():
    gens = [random_form(2, 4, seed=1), random_form(2, 1, seed=2)]
    m = build_slice_matrix(gens, 3)
    assert m.shape == (comb(4, 2), comb(5, 2))
    assert m.blocks == ((1, 6),)


def test_slice_mismatch():
    with pytest.raises(DimensionMismatch):
        build_slice_matrix([random_form(1, 1, 0), random_form(2, 1, 0)], 2)


def test_slice_capacity():
    with pytest.raises(CapacityError) as info:
        build_slice_matrix(random_forms(4, [2, 2], seed=0), 4, max_cells=100)
    assert info.value.shape == (30, 70)


def test_rank_zero_and_identity():
    assert sparse_rank([], 7) == 0
    assert sparse_rank([{0: 0}, {}], 7) == 0
    assert sparse_rank([{i: 1} for i in range(5)], 7) == 5


@pytest.mark.parametrize("method", ["sparse", "flint"])
@pytest.mark.parametrize("seed", range(6))
def test_rank_against_oracle(method, seed):
    p = 101 if seed % 2 else DEFAULT_PRIME
    rng = random.Random(seed)
    n, d = rng.randrange(1, 4), rng.randrange(2, 5)
    degrees = [rng.randrange(1, d + 1) for _ in range(rng.randrange(1, 4))]
    gens = random_forms(n, degrees, seed, p)
    m = build_slice_matrix(gens, d)
    assert matrix_rank(m, method) == oracle_rank(m.to_dense(), p)


@pytest.mark.parametrize("seed", range(4))
def test_rank_methods_agree_on_dependent_rows(seed):
    # low-rank matrix over GF(5): products of thin random factors
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 5, size=(40, 3))
    b = rng.integers(0, 5, size=(3, 30))
    dense = (a @ b) % 5
    rows = [{j: int(v) for j, v in enumerate(r) if v} for r in dense]
    assert sparse_rank(rows, 5) == oracle_rank(dense, 5)


def test_line_and_cubic_rank():
    m = build_slice_matrix(random_forms(3, [1, 3], seed=11), 4)
    assert matrix_rank(m) == 23


def test_hilbert_value_empty():
    assert hilbert_value([], 3, n=2) == 10
    assert hilbert_value([], 0, n=4) == 1


def test_binary_quintics_span_sextics():
    assert hilbert_value(random_forms(1, [5] * 4, seed=0), 6) == 0


def test_five_quadrics_in_five_variables():
    # (1+t)^5 -> coefficient of t^3 is 10
    assert hilbert_value(random_forms(4, [2] * 5, seed=1), 3) == 10


def test_sextic_line_unreduced():
    # full computation in six variables, no linear-form shortcut
    gens = random_forms(5, [1, 1, 1, 1, 5, 5, 5, 5], seed=4)
    assert hilbert_value(gens, 6) == 0


def test_quartics_through_line():
    gens = [parse_form("x2", 3), parse_form("x3", 3)]
    assert hilbert_value(gens, 4) == 5


def test_generic_examples():
    assert tuple(generic_hilbert_value(5, [1, 1, 1, 1, 5, 5, 5, 5], 6)) == (0, True)
    assert tuple(generic_hilbert_value(3, [1, 1, 3, 3], 4)) == (1, False)
    assert tuple(generic_hilbert_value(2, [], 3)) == (10, False)


def test_linear_reduction_matches_full_computation():
    # the shortcut that eliminates linear generators must agree with the full slice
    cases = [(3, [1, 1, 3, 3], 4), (4, [1, 2, 2, 3], 4), (3, [1, 1, 1, 2], 2), (2, [1, 2, 2], 3)]
    for n, degrees, d in cases:
        full = min(hilbert_value(random_forms(n, degrees, s), d) for s in range(2))
        assert generic_hilbert_value(n, degrees, d).value == full


def test_linear_forms_exhaust_variables():
    assert generic_hilbert_value(2, [1, 1, 1, 1], 2).value == 0
    assert generic_hilbert_value(2, [1, 1, 1, 1], 0).value == 1


@pytest.mark.parametrize("seed", range(5))
def test_specialization_bound(seed):
    rng = random.Random(seed)
    nvars = rng.randrange(2, 5)
    degrees = [rng.randrange(1, 4) for _ in range(rng.randrange(1, nvars + 1))]
    series = ci_series(nvars, degrees, 6)
    gens = random_forms(nvars - 1, degrees, seed)
    for d in range(7):
        assert hilbert_value(gens, d) >= series[d]


def test_specialization_bound_with_degenerate_forms():
    # a repeated generator is a bad specialization: the value can only go up
    f = random_form(2, 2, seed=1)
    assert hilbert_value([f, f, f], 2) == 5 > ci_series(3, [2, 2, 2], 2)[2]


def test_small_field_can_underestimate_rank():
    # over GF(2) many specializations are degenerate; values never drop below the generic one
    generic = ci_series(3, [2, 2, 2], 4).values
    for s in range(10):
        vals = [hilbert_value(random_forms(2, [2, 2, 2], s, 2), d) for d in range(5)]
        assert all(v >= g for v, g in zip(vals, generic))


def test_trials_monotone():
    n, degrees, d = 3, [2, 2, 2], 3
    values = [generic_hilbert_value(n, degrees, d, trials=t, seed=7, p=3).value for t in range(1, 6)]
    assert values == sorted(values, reverse=True)


def test_adding_generator_never_increases():
    base = random_forms(3, [2, 3], seed=2)
    extra = base + [random_form(3, 2, seed=99)]
    for d in range(6):
        assert hilbert_value(extra, d) <= hilbert_value(base, d)


def test_hilbert_range():
    gens = random_forms(2, [2, 3], seed=5)
    for d in range(7):
        assert 0 <= hilbert_value(gens, d) <= comb(d + 2, 2)
    assert hilbert_value(gens, 1) == 3


def test_generic_hilbert_function_matches_series():
    hv = generic_hilbert_function(3, [2, 2, 3, 3], 8, trials=1, seed=3)
    assert hv.values == ci_series(4, [2, 2, 3, 3], 8).values
    assert hv.mode == "randomized"
