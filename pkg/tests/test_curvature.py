import numpy as np
import pytest

from akverify.curvature import (
    DegenerateMetric,
    MetricField,
    MetricGeometry,
    bundle_from_geometry,
    christoffel,
    cotton_york,
    covariant_derivative,
    delta_W,
    norm_d,
    riemann,
    singer_thorpe,
)
from akverify.jets import N_COEFFS, seed as jet_seed
from akverify.tensorjets import JT, jcontract

from conftest import random_polynomial_metric
from oracles import fd_riemann, fd_scalar, fd_scalar_richardson

P = (0.11, -0.23, 0.31, 0.07)


def euclidean_field() -> MetricField:
    def fn(p):
        c = np.zeros((4, 4, N_COEFFS))
        for i in range(4):
            c[i, i, 0] = 1.0
        return JT(c)

    return MetricField(fn, name="euclidean")


def hyperbolic_plane_field() -> MetricField:
    """(dx^2 + dy^2)/x^2 + dz^2 + dt^2."""

    def fn(p):
        xs = JT.coords(p)
        inv_x2 = (xs[0] * xs[0]).inv()
        g = JT.zeros((4, 4))
        g.c[0, 0] = inv_x2.c
        g.c[1, 1] = inv_x2.c
        g.c[2, 2, 0] = 1.0
        g.c[3, 3, 0] = 1.0
        return JT(g.c, inv_x2.order)

    return MetricField(fn, name="h2xr2")


def conformally_flat_field() -> MetricField:
    def fn(p):
        xs = JT.coords(p)
        f = xs[0] * 0.2 + xs[1] * xs[2] * 0.1 + xs[3] * 0.15
        e2f = (f * 2.0).exp()
        g = JT.zeros((4, 4))
        for i in range(4):
            g.c[i, i] = e2f.c
        return JT(g.c, e2f.order)

    return MetricField(fn, name="confflat")


# -- christoffel -------------------------------------------------------------


def test_christoffel_flat_vanishes():
    t = christoffel(euclidean_field(), P)
    assert np.abs(t.components).max() == 0.0


def test_christoffel_hyperbolic_value():
    t = christoffel(hyperbolic_plane_field(), (1.0, 0.0, 0.0, 0.0))
    assert t.components[0, 0, 0] == pytest.approx(-1.0, rel=1e-13)


def test_christoffel_symmetric_lower_indices():
    for seed in range(10):
        m = random_polynomial_metric(seed)
        t = christoffel(m, P).components
        assert np.abs(t - t.transpose(0, 2, 1)).max() <= 1e-13


def test_christoffel_against_fd():
    m = random_polynomial_metric(21)
    t = christoffel(m, P).components
    from oracles import fd_gamma

    assert np.abs(t - fd_gamma(m.values, P)).max() <= 1e-6


# -- riemann -----------------------------------------------------------------


def test_riemann_flat_zero():
    b = riemann(euclidean_field(), P)
    assert np.abs(b.riemann.components).max() == 0.0


def test_scalar_hyperbolic_is_minus_two():
    m = hyperbolic_plane_field()
    for p in [(1.0, 0.0, 0.0, 0.0), (1.7, 0.4, -0.3, 0.2)]:
        b = riemann(m, p)
        assert b.s == pytest.approx(-2.0, abs=1e-12)
        oracle = fd_scalar_richardson(m.values, p)
        assert b.s == pytest.approx(oracle, abs=1e-7)


def test_family_scalar_matches_fd(family_presets):
    fi = family_presets["hyperbolic3sym"]
    m = fi.metric_field()
    p = (1.0, 0.0, 0.0, 0.0)
    geo = fi.geometry(p)
    oracle = fd_scalar_richardson(m.values, p)
    assert geo.s == pytest.approx(oracle, abs=1e-8)


def test_riemann_symmetries_and_first_bianchi():
    for seed in (0, 5):
        m = random_polynomial_metric(seed)
        r = riemann(m, P).riemann.components
        scale = max(np.abs(r).max(), 1.0)
        assert np.abs(r + r.transpose(1, 0, 2, 3)).max() / scale <= 1e-10
        assert np.abs(r + r.transpose(0, 1, 3, 2)).max() / scale <= 1e-10
        assert np.abs(r - r.transpose(2, 3, 0, 1)).max() / scale <= 1e-10
        fb = r + r.transpose(0, 2, 3, 1) + r.transpose(0, 3, 1, 2)
        assert np.abs(fb).max() / scale <= 1e-10


def test_riemann_against_fd_pipeline():
    m = random_polynomial_metric(11)
    r = riemann(m, P).riemann.components
    oracle = fd_riemann(m.values, P)
    assert np.abs(r - oracle).max() <= 1e-5


# -- Singer-Thorpe ------------------------------------------------------------


def test_singer_thorpe_einstein_offdiagonal(family_presets):
    fi = family_presets["gibbons_hawking"]
    geo = fi.geometry((1.37, 0.21, 0.33, -0.41))
    blocks = singer_thorpe(bundle_from_geometry(geo))
    assert np.abs(blocks["ric0_block"]).max() <= 1e-9


def test_singer_thorpe_reassembles():
    for seed in (1, 7):
        m = random_polynomial_metric(seed)
        b = riemann(m, P)
        blocks = singer_thorpe(b)
        assert blocks["reassembly_residual"] <= 1e-12


def test_weyl_blocks_trace_free():
    for seed in range(6):
        m = random_polynomial_metric(seed)
        b = riemann(m, P)
        assert abs(np.trace(b.wplus3)) <= 1e-10
        assert abs(np.trace(b.wminus3)) <= 1e-10


# -- covariant derivative ----------------------------------------------------


def test_metricity():
    for seed in range(10):
        m = random_polynomial_metric(seed)
        geo = MetricGeometry.from_field(m, P)
        ng = geo.cov(geo.g, "dd")
        assert np.abs(ng.value).max() <= 1e-11


def test_covariant_derivative_leibniz():
    m = random_polynomial_metric(13)
    geo = MetricGeometry.from_field(m, P)
    xs = JT.coords(P)
    f = (xs[0] * 0.3 + xs[1] * xs[3] * 0.2).exp()
    vec = JT.stack([xs[k] for k in range(4)])
    t = jcontract("i,j->ij", vec, vec * 2.0)
    ft = jcontract(",ij->ij", f, t)
    lhs = geo.cov(ft, "dd").value
    rhs = np.einsum("m,ij->mij", f.grad().value, t.value) + f.value * geo.cov(t, "dd").value
    assert np.abs(lhs - rhs).max() <= 1e-12


def test_covariant_derivative_public_surface():
    m = random_polynomial_metric(17)
    t = christoffel(m, P)
    # one more derivative on a (1,2) tensor, twice
    d1 = covariant_derivative(t)
    assert d1.variance == "dudd"
    d2 = covariant_derivative(d1)
    assert d2.components.shape == (4, 4, 4, 4, 4)
    with pytest.raises(ValueError):
        covariant_derivative(
            __import__("akverify.exterior", fromlist=["TensorAtPoint"]).TensorAtPoint(
                np.zeros(4), "d", t.metric
            )
        )


def test_ricci_identity_on_family(hyperbolic_geom):
    from akverify.hermitian import ricci_identity_residual

    assert ricci_identity_residual(hyperbolic_geom) <= 1e-8


# -- Cotton-York and delta W ---------------------------------------------------


def test_cotton_conformally_flat():
    m = conformally_flat_field()
    geo = MetricGeometry.from_field(m, P)
    assert norm_d(geo.weyl.value, geo.ginv0) <= 1e-8
    b = bundle_from_geometry(geo)
    cy = cotton_york(b)
    assert np.abs(cy.full).max() <= 1e-8
    dw = delta_W(b)
    assert np.abs(dw.full).max() <= 1e-8


def test_cotton_flat_zero():
    b = riemann(euclidean_field(), P)
    assert np.abs(cotton_york(b).full).max() == 0.0


def test_delta_w_equals_cotton_random():
    for seed in range(10):
        m = random_polynomial_metric(seed)
        b = riemann(m, P)
        cy = cotton_york(b)
        dw = delta_W(b)
        assert np.abs(dw.full - cy.full).max() <= 1e-7
        assert np.abs(dw.plus - cy.plus).max() <= 1e-7
        assert np.abs(dw.minus - cy.minus).max() <= 1e-7


def test_contracted_bianchi_random():
    m = random_polynomial_metric(23)
    geo = MetricGeometry.from_field(m, P)
    t = geo.ricci0 - jcontract(",ij->ij", geo.scalar * 0.25, geo.g)
    nt = geo.cov(t, "dd").value
    div = np.einsum("mi,mij->j", geo.ginv0, nt)
    assert np.abs(div).max() <= 1e-8


def test_weyl_conformal_covariance():
    m = random_polynomial_metric(29)
    geo = MetricGeometry.from_field(m, P)
    scaled = MetricField(lambda q: m.at(q) * 3.7)
    geo2 = MetricGeometry.from_field(scaled, P)
    w13 = np.einsum("li,ijkm->ljkm", geo.ginv0, geo.weyl.value)
    w13b = np.einsum("li,ijkm->ljkm", geo2.ginv0, geo2.weyl.value)
    assert np.abs(w13 - w13b).max() <= 1e-11


def test_degenerate_metric_aborts():
    def fn(p):
        c = np.zeros((4, 4, N_COEFFS))
        for i in range(3):
            c[i, i, 0] = 1.0
        c[3, 3, 0] = 1e-12
        return JT(c)

    with pytest.raises(DegenerateMetric):
        MetricGeometry.from_field(MetricField(fn), P)


def test_metric_field_from_component_evaluators():
    comps = {
        (0, 0): lambda p: 1.0 / (jet_seed(p, 0) * jet_seed(p, 0)),
        (1, 1): lambda p: 1.0 / (jet_seed(p, 0) * jet_seed(p, 0)),
        (2, 2): lambda p: jet_seed(p, 0) * 0 + 1.0,
        (3, 3): lambda p: jet_seed(p, 0) * 0 + 1.0,
    }
    m = MetricField.from_components(comps)
    b = riemann(m, (1.0, 0.0, 0.0, 0.0))
    assert b.s == pytest.approx(-2.0, abs=1e-12)
