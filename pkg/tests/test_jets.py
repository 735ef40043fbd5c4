import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from akverify import jets
from akverify.jets import (
    BasePointMismatch,
    DepthExhausted,
    DomainError,
    Jet,
    MULTI_INDICES,
    N_COEFFS,
    arith,
    partial,
    seed,
    variables,
)

ORIGIN = (0.0, 0.0, 0.0, 0.0)


def test_coefficient_count():
    assert N_COEFFS == 70
    assert len(MULTI_INDICES) == 70
    assert list(MULTI_INDICES) == sorted(MULTI_INDICES)


def test_seed_coordinate_function():
    j = seed((1.0, 0.0, 0.0, 0.0), 0)
    assert j.coeff((0, 0, 0, 0)) == 1.0
    assert j.coeff((1, 0, 0, 0)) == 1.0
    assert np.count_nonzero(j.coeffs) == 2


def test_seed_second_variable():
    j = seed((2.0, 3.0, 0.0, 0.0), 1)
    assert j.value == 3.0
    assert j.coeff((0, 1, 0, 0)) == 1.0
    assert np.count_nonzero(j.coeffs) == 2


def test_seed_var_out_of_range():
    with pytest.raises(ValueError):
        seed(ORIGIN, 4)


@pytest.mark.parametrize("p", [ORIGIN, (1.5, -2.0, 0.3, 7.0)])
def test_product_rule_xy(p):
    x, y = seed(p, 0), seed(p, 1)
    assert partial(x * y, (1, 1, 0, 0)) == pytest.approx(1.0, abs=1e-15)


def test_square_expansion():
    x = seed((3.0, 0.0, 0.0, 0.0), 0)
    sq = x * x
    assert sq.value == 9.0
    assert partial(sq, (1, 0, 0, 0)) == 6.0
    assert partial(sq, (2, 0, 0, 0)) == 2.0


def test_exp_series_at_origin():
    e = seed(ORIGIN, 0).exp()
    expect = [1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0]
    got = [e.coeff((k, 0, 0, 0)) for k in range(5)]
    assert got == pytest.approx(expect, rel=1e-15)


def test_ln_second_derivative_against_finite_differences():
    j = seed((1.0, 0.0, 0.0, 0.0), 0).ln()
    assert j.coeff((2, 0, 0, 0)) == pytest.approx(-0.5, rel=1e-13)
    h = 1e-4
    fd = (math.log(1 + h) - 2 * math.log(1.0) + math.log(1 - h)) / h**2
    assert partial(j, (2, 0, 0, 0)) == pytest.approx(fd, abs=1e-7)


def test_partial_of_constant():
    c = Jet.constant(ORIGIN, 4.2)
    for alpha in [(1, 0, 0, 0), (0, 2, 1, 0), (1, 1, 1, 1)]:
        assert partial(c, alpha) == 0.0


def test_partial_x2y():
    p = (1.0, 1.0, 0.0, 0.0)
    x, y = seed(p, 0), seed(p, 1)
    f = x * x * y
    assert partial(f, (2, 1, 0, 0)) == pytest.approx(2.0, rel=1e-14)


def test_partial_exp_sin_mixed_fd_oracle():
    x, y, _, _ = variables(ORIGIN)
    f = x.exp() * y.sin()
    got = partial(f, (1, 1, 0, 0))
    h = 1e-4
    vals = [
        math.exp(sx * h) * math.sin(sy * h) * sx * sy
        for sx in (1, -1)
        for sy in (1, -1)
    ]
    fd = sum(vals) / (4 * h * h)
    assert got == pytest.approx(1.0, rel=1e-14)
    assert got == pytest.approx(fd, abs=1e-7)


def test_inverse_matches_geometric_series():
    inv = 1.0 / seed((2.0, 0.0, 0.0, 0.0), 0)
    expect = [0.5, -0.25, 0.125, -0.0625, 0.03125]
    got = [inv.coeff((k, 0, 0, 0)) for k in range(5)]
    assert got == pytest.approx(expect, rel=1e-13)


def _random_poly_jet(rng, p):
    """A random degree-<=4 polynomial evaluated as a jet, plus its coeffs."""
    coeffs = {
        alpha: rng.uniform(-1, 1)
        for alpha in MULTI_INDICES
        if rng.uniform() < 0.2 or sum(alpha) == 0
    }
    xs = variables(p)
    f = Jet.constant(p, 0.0)
    for alpha, c in coeffs.items():
        term = Jet.constant(p, c)
        for v, k in enumerate(alpha):
            for _ in range(k):
                term = term * xs[v]
        f = f + term
    return f, coeffs


def test_polynomial_partials_exact():
    rng = np.random.default_rng(0)
    for trial in range(8):
        p = tuple(rng.uniform(-1, 1, size=4))
        f, coeffs = _random_poly_jet(rng, p)
        # check at the base point against symbolic differentiation of monomials
        for alpha in [(1, 0, 0, 0), (2, 0, 0, 0), (1, 1, 0, 0), (0, 1, 1, 1), (4, 0, 0, 0)]:
            sym = 0.0
            for mono, c in coeffs.items():
                term = c
                for v in range(4):
                    k, d = mono[v], alpha[v]
                    if k < d:
                        term = 0.0
                        break
                    term *= math.factorial(k) // math.factorial(k - d)
                    term *= p[v] ** (k - d)
                sym += term
            got = partial(f, alpha)
            assert got == pytest.approx(sym, rel=1e-12, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_mul_commutative_associative(seed_int):
    rng = np.random.default_rng(seed_int)
    p = (0.3, -0.1, 0.2, 0.5)
    a = Jet(p, rng.uniform(-1, 1, N_COEFFS))
    b = Jet(p, rng.uniform(-1, 1, N_COEFFS))
    c = Jet(p, rng.uniform(-1, 1, N_COEFFS))
    comm = np.abs((a * b).coeffs - (b * a).coeffs).max()
    assoc = np.abs(((a * b) * c).coeffs - (a * (b * c)).coeffs).max()
    assert comm <= 1e-13
    assert assoc <= 1e-13


def test_leibniz_first_order():
    rng = np.random.default_rng(3)
    p = (0.2, 0.4, -0.3, 0.1)
    f = Jet(p, rng.uniform(-1, 1, N_COEFFS))
    g = Jet(p, rng.uniform(-1, 1, N_COEFFS))
    for v in range(4):
        e = [0, 0, 0, 0]
        e[v] = 1
        lhs = partial(f * g, tuple(e))
        rhs = partial(f, tuple(e)) * g.value + f.value * partial(g, tuple(e))
        assert lhs == pytest.approx(rhs, rel=1e-14, abs=1e-14)


def test_powi_and_dunder_pow():
    x = seed((2.0, 0.0, 0.0, 0.0), 0)
    assert (x**3).value == 8.0
    assert (x.powi(3)).coeff((1, 0, 0, 0)) == pytest.approx(12.0)
    assert (x.powi(-1)).value == pytest.approx(0.5)
    with pytest.raises(TypeError):
        x.powi(0.5)


def test_arith_dispatch():
    x = seed((1.0, 0.0, 0.0, 0.0), 0)
    y = seed((1.0, 0.0, 0.0, 0.0), 1)
    assert arith("add", x, y).value == 1.0
    assert arith("mul", x, x).value == 1.0
    assert arith("neg", x).value == -1.0
    assert arith("exp", Jet.constant((1.0, 0, 0, 0), 0.0)).value == 1.0
    assert arith("powi", x, 2).value == 1.0
    with pytest.raises(ValueError):
        arith("nope", x)


def test_domain_errors():
    neg = Jet.constant(ORIGIN, -1.0)
    zero = Jet.constant(ORIGIN, 0.0)
    with pytest.raises(DomainError):
        neg.ln()
    with pytest.raises(DomainError):
        neg.sqrt()
    with pytest.raises(ZeroDivisionError):
        seed(ORIGIN, 0).inv()
    with pytest.raises(ZeroDivisionError):
        Jet.constant(ORIGIN, 1.0) / zero


def test_base_point_mismatch_aborts():
    a = seed((0.0, 0.0, 0.0, 0.0), 0)
    b = seed((1.0, 0.0, 0.0, 0.0), 0)
    with pytest.raises(BasePointMismatch):
        _ = a + b


def test_depth_exhaustion():
    x = seed(ORIGIN, 0)
    d = x.deriv(0).deriv(0).deriv(0).deriv(0)
    with pytest.raises(DepthExhausted):
        d.deriv(0)
    with pytest.raises(DepthExhausted):
        partial(x.deriv(0), (4, 0, 0, 0))


def test_trig_derivative_consistency():
    x = seed((0.7, 0.0, 0.0, 0.0), 0)
    s, c = x.sin(), x.cos()
    assert partial(s, (1, 0, 0, 0)) == pytest.approx(c.value, rel=1e-14)
    assert partial(c, (1, 0, 0, 0)) == pytest.approx(-s.value, rel=1e-14)
    one = s * s + c * c
    assert one.value == pytest.approx(1.0, rel=1e-14)
    assert np.abs(one.coeffs[1:]).max() <= 1e-14


def test_sqrt_squares_back():
    rng = np.random.default_rng(9)
    p = (0.3, 0.1, -0.2, 0.4)
    f = Jet(p, rng.uniform(-0.3, 0.3, N_COEFFS))
    f = f + 2.0
    r = f.sqrt()
    assert np.abs((r * r).coeffs - f.coeffs).max() <= 1e-13
