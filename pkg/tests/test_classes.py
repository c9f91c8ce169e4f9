import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from l1sample import (
    CoefficientExpansion,
    FunctionClass,
    analytic_best_term_bound,
    analytic_tail_bound,
    chebyshev_system,
    class_norm,
    default_system,
    evaluate_function,
    fourier_system,
    index_weight,
    legendre_preconditioned_system,
    legendre_raw_system,
    make_index_set,
    poly_wiener,
    quadrature_l2_norm,
    random_unit_function,
    sobolev_mixed,
    truncation_error_bound,
    wiener_iso,
    wiener_mixed,
)

from util import chebyshev_value


# ---------------------------------------------------------------------------
# class descriptors


def test_class_validation():
    with pytest.raises(ValueError):
        FunctionClass("nope", 1.0)
    with pytest.raises(ValueError):
        wiener_mixed(0.0, 1)
    with pytest.raises(ValueError):
        wiener_mixed(1.0, 0)
    with pytest.raises(ValueError):
        wiener_iso(1.0, 1.5, 2)  # p > 1
    with pytest.raises(ValueError):
        wiener_iso(1.0, 0.0, 2)  # p = 0
    with pytest.raises(ValueError):
        sobolev_mixed(0.5, 1)  # needs r > 1/2
    with pytest.raises(ValueError):
        poly_wiener(-0.25, 1.0, 1.0)  # alpha not in {-1/2, 0}
    with pytest.raises(ValueError):
        FunctionClass("poly_wiener", 1.0, d=2, p=1.0, alpha=0.0)


def test_default_systems():
    assert default_system(wiener_mixed(1.0, 3)) == fourier_system(3)
    assert default_system(wiener_iso(1.0, 1.0, 2)) == fourier_system(2)
    assert default_system(sobolev_mixed(1.0, 2)) == fourier_system(2)
    assert default_system(poly_wiener(-0.5, 1.0, 1.0)) == chebyshev_system()
    assert default_system(poly_wiener(0.0, 1.0, 1.0)) == legendre_raw_system()


def test_index_weights():
    km = wiener_mixed(2.0, 2)
    assert index_weight(km, (1, -3)) == (2.0**2) * (4.0**2)
    ki = wiener_iso(1.5, 1.0, 2)
    assert index_weight(ki, (1, -3)) == 4.0**1.5
    kp = poly_wiener(-0.5, 2.0, 1.0)
    assert index_weight(kp, 3) == 16.0
    with pytest.raises(ValueError):
        index_weight(km, (1, 2, 3))  # wrong dimension
    with pytest.raises(ValueError):
        index_weight(kp, -1)  # negative degree


@settings(deadline=None, max_examples=50)
@given(
    k1=st.integers(min_value=-40, max_value=40),
    k2=st.integers(min_value=-40, max_value=40),
    r=st.floats(min_value=0.25, max_value=3.0),
)
def test_weights_at_least_one(k1, k2, r):
    for klass in (wiener_mixed(r, 2), wiener_iso(r, 1.0, 2)):
        assert index_weight(klass, (k1, k2)) >= 1.0


@settings(deadline=None, max_examples=50)
@given(
    k=st.integers(min_value=0, max_value=40),
    r=st.floats(min_value=0.25, max_value=3.0),
)
def test_weights_monotone_in_degree(k, r):
    klass = poly_wiener(0.0, r, 1.0)
    assert index_weight(klass, k + 1) > index_weight(klass, k) >= 1.0


# ---------------------------------------------------------------------------
# expansions


def test_expansion_key_handling():
    f = CoefficientExpansion(fourier_system(2), {(0, 1): 1.0, (2, -1): 2j})
    assert f.support() == [(0, 1), (2, -1)]
    assert f.get((2, -1)) == 2j
    assert f.get((5, 5)) == 0j
    assert f.max_order() == 2
    with pytest.raises(ValueError):
        CoefficientExpansion(fourier_system(2), {(0,): 1.0})
    with pytest.raises(ValueError):
        CoefficientExpansion(chebyshev_system(), {-1: 1.0})


def test_expansion_vector_alignment():
    f = CoefficientExpansion(chebyshev_system(), {0: 1.0, 3: -2.0})
    J = make_index_set("degrees", M=4)
    v = f.vector(J)
    assert v.tolist() == [1.0, 0.0, 0.0, -2.0, 0.0]


def test_expansion_norms_and_scaling():
    f = CoefficientExpansion(chebyshev_system(), {0: 3.0, 1: 4.0})
    assert f.l1_norm() == 7.0
    assert f.l2_norm() == 5.0
    g = f.scaled(2.0)
    assert g.l1_norm() == 14.0
    assert len(g) == 2


def test_expansion_json_round_trip():
    for f in (
        CoefficientExpansion(fourier_system(2), {(0, 1): 1 + 2j, (-3, 2): 0.5}),
        CoefficientExpansion(legendre_raw_system(), {0: 1.0, 7: -2.5j}),
    ):
        assert CoefficientExpansion.from_json(f.to_json()) == f


# ---------------------------------------------------------------------------
# norms


def test_class_norms_match_hand_computation():
    f = CoefficientExpansion(fourier_system(1), {(0,): 1.0, (1,): -0.5, (3,): 2.0})
    # weights 1, 2, 4
    assert class_norm(wiener_mixed(1.0, 1), f) == 1.0 + 1.0 + 8.0
    assert class_norm(sobolev_mixed(1.0, 1), f) == np.sqrt(1 + 1 + 64.0)
    g = CoefficientExpansion(chebyshev_system(), {0: 1.0, 1: 1.0})
    # p = 1/2 quasi-norm: (sum sqrt(w|c|))^2 with weights 1, 2
    expected = (1.0 + np.sqrt(2.0)) ** 2
    assert abs(class_norm(poly_wiener(-0.5, 1.0, 0.5), g) - expected) < 1e-14


@settings(deadline=None, max_examples=40)
@given(
    c=st.floats(min_value=0.01, max_value=100.0),
    p=st.sampled_from([0.5, 0.75, 1.0]),
)
def test_class_norm_homogeneous(c, p):
    klass = poly_wiener(-0.5, 1.0, p)
    f = CoefficientExpansion(chebyshev_system(), {0: 0.3, 2: -1.2, 5: 0.7})
    assert np.isclose(
        class_norm(klass, f.scaled(c)), c * class_norm(klass, f), rtol=1e-12
    )


def test_random_unit_function_is_unit_norm():
    for klass in (
        wiener_mixed(1.0, 2),
        sobolev_mixed(1.0, 2),
        wiener_iso(1.0, 0.5, 2),
        poly_wiener(-0.5, 1.0, 0.5),
        poly_wiener(0.0, 2.0, 1.0),
    ):
        if klass.kind == "poly_wiener":
            J = make_index_set("degrees", M=20)
        else:
            J = make_index_set("box", d=2, M=4)
        f = random_unit_function(klass, J, sparsity=5, seed=7)
        assert len(f) == 5
        assert abs(class_norm(klass, f) - 1.0) < 1e-12


def test_random_unit_function_real_for_polynomials():
    klass = poly_wiener(-0.5, 1.0, 1.0)
    f = random_unit_function(klass, make_index_set("degrees", M=10), sparsity=4, seed=1)
    assert all(v.imag == 0.0 for v in f.coefficients.values())


def test_random_unit_function_seeded():
    klass = wiener_mixed(1.0, 1)
    J = make_index_set("box", d=1, M=10)
    f1 = random_unit_function(klass, J, sparsity=3, seed=5)
    f2 = random_unit_function(klass, J, sparsity=3, seed=5)
    f3 = random_unit_function(klass, J, sparsity=3, seed=6)
    assert f1 == f2
    assert f1 != f3


def test_head_placement_takes_smallest_weights():
    klass = poly_wiener(-0.5, 1.0, 0.5)
    J = make_index_set("degrees", M=50)
    f = random_unit_function(klass, J, sparsity=4, seed=0, placement="head")
    assert f.support() == [0, 1, 2, 3]
    klass2 = wiener_mixed(1.0, 1)
    B = make_index_set("box", d=1, M=10)
    g = random_unit_function(klass2, B, sparsity=3, seed=0, placement="head")
    # weights (1+|k|): the three smallest are k = -1, 0, 1 (0 has weight 1)
    assert g.support() == [(-1,), (0,), (1,)]
    with pytest.raises(ValueError):
        random_unit_function(klass, J, sparsity=2, placement="middle")


# ---------------------------------------------------------------------------
# evaluation


def test_evaluate_fourier_expansion():
    f = CoefficientExpansion(fourier_system(1), {(1,): 1.0, (-1,): 1.0})
    x = np.array([0.0, 0.25, 0.4])
    vals = evaluate_function(f, x)
    assert np.abs(vals - 2.0 * np.cos(2 * np.pi * x)).max() < 1e-14


def test_evaluate_chebyshev_expansion():
    f = CoefficientExpansion(chebyshev_system(), {0: 0.5, 3: 2.0})
    x = np.linspace(-1, 1, 11)
    expected = 0.5 + 2.0 * np.sqrt(2.0) * chebyshev_value(3, x)
    assert np.abs(evaluate_function(f, x) - expected).max() < 1e-13


def test_evaluate_scalar_and_empty():
    f = CoefficientExpansion(fourier_system(1), {(2,): 1j})
    out = evaluate_function(f, 0.25)
    assert isinstance(out, complex)
    empty = CoefficientExpansion(fourier_system(1), {})
    assert evaluate_function(empty, 0.3) == 0j


def test_truncation_error_bound():
    f = CoefficientExpansion(fourier_system(1), {(0,): 1.0, (5,): 2.0, (9,): -1j})
    J = make_index_set("box", d=1, M=5)
    assert truncation_error_bound(wiener_mixed(1.0, 1), f, J) == 1.0
    J_all = make_index_set("box", d=1, M=9)
    assert truncation_error_bound(wiener_mixed(1.0, 1), f, J_all) == 0.0


# ---------------------------------------------------------------------------
# analytic bounds (derived anchors)


def test_best_term_bound_values():
    # mixed, d=1, r=1: n^(-3/2) * sqrt(log n)
    assert analytic_best_term_bound(wiener_mixed(1.0, 1), 4) == 0.125 * np.sqrt(np.log(4.0))
    # the guarded log keeps n=1 finite and positive
    assert analytic_best_term_bound(wiener_mixed(1.0, 1), 1) == np.sqrt(np.log(2.0))
    # chebyshev class, p=1, r=1: n^(-3/2), no log factor
    assert analytic_best_term_bound(poly_wiener(-0.5, 1.0, 1.0), 4) == 0.125
    # p=1/2 speeds it up to n^(-5/2)
    assert analytic_best_term_bound(poly_wiener(-0.5, 1.0, 0.5), 4) == 4.0**-2.5
    with pytest.raises(ValueError):
        analytic_best_term_bound(wiener_mixed(1.0, 1), 0)


def test_tail_bound_values():
    assert analytic_tail_bound(wiener_mixed(1.0, 1), 8) == 0.125
    assert analytic_tail_bound(poly_wiener(-0.5, 1.0, 1.0), 7) == 0.125
    # sobolev tail: positive, decreasing in M, and finite
    k = sobolev_mixed(1.0, 2)
    t4, t16 = analytic_tail_bound(k, 4), analytic_tail_bound(k, 16)
    assert 0 < t16 < t4 < np.inf
    with pytest.raises(ValueError):
        analytic_tail_bound(wiener_mixed(1.0, 1), 0)


@settings(deadline=None, max_examples=30)
@given(n=st.integers(min_value=3, max_value=200))
def test_best_term_bound_nonincreasing(n):
    # monotone once log n exceeds the log-power/power ratio (here: n >= 3)
    klass = wiener_mixed(1.0, 2)
    assert analytic_best_term_bound(klass, n + 1) <= analytic_best_term_bound(klass, n)


# ---------------------------------------------------------------------------
# quadrature cross-checks (Parseval)


@pytest.mark.parametrize(
    "system,keys",
    [
        (fourier_system(1), {(0,): 1.0, (3,): 1j, (-2,): 0.5}),
        (fourier_system(2), {(0, 1): 1.0, (2, -1): -0.5}),
        (chebyshev_system(), {0: 1.0, 2: -0.7, 5: 0.3}),
        (legendre_raw_system(), {0: 1.0, 1: 2.0, 6: -1.0}),
        (legendre_preconditioned_system(), {0: 1.0, 4: 0.25}),
    ],
)
def test_quadrature_matches_parseval(system, keys):
    f = CoefficientExpansion(system, keys)
    assert abs(quadrature_l2_norm(f) - f.l2_norm()) < 1e-12
