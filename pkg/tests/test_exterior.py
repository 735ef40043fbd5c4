import numpy as np
import pytest

from akverify.exterior import (
    EUCLIDEAN,
    MetricContext,
    RankOverflow,
    SelfDualSplit,
    SingularMetric,
    TensorAtPoint,
    TwoForm,
    as_endomorphism,
    compose,
    coordinate_one_form,
    coordinate_two_form,
    form_inner,
    hodge_star,
    musical,
    sd_split,
    volume_form,
    wedge,
)
from akverify.family import presets


def dx(i, m=EUCLIDEAN):
    return coordinate_one_form(i, m)


def test_wedge_determinant_convention():
    w = wedge(dx(0), dx(1))
    assert w.components[0, 1] == 1.0
    assert w.components[1, 0] == -1.0


def test_wedge_self_is_zero():
    w = wedge(dx(0), dx(0))
    assert np.abs(w.components).max() == 0.0


def test_two_form_inner_product_is_one():
    w = TwoForm.from_matrix(wedge(dx(0), dx(1)).components, EUCLIDEAN)
    assert w.inner(w) == pytest.approx(1.0, abs=1e-15)


def test_wedge_rank_overflow():
    three = wedge(wedge(dx(0), dx(1)), dx(2))
    with pytest.raises(RankOverflow):
        wedge(three, wedge(dx(0), dx(3)))


def test_wedge_anticommutativity_random():
    rng = np.random.default_rng(0)
    for _ in range(10):
        a = TensorAtPoint(rng.normal(size=4), "d", EUCLIDEAN)
        mat = rng.normal(size=(4, 4))
        b = TensorAtPoint(mat - mat.T, "dd", EUCLIDEAN)
        ab = wedge(a, b).components
        ba = wedge(b, a).components
        assert np.abs(ab - (-1) ** (1 * 2) * ba).max() <= 1e-13


def test_hodge_star_euclidean():
    w = coordinate_two_form(0, 1, EUCLIDEAN)
    s = hodge_star(w)
    expect = coordinate_two_form(2, 3, EUCLIDEAN)
    assert np.abs(s.components - expect.components).max() <= 1e-15


def test_hodge_star_involutive_random():
    rng = np.random.default_rng(1)
    mat = rng.normal(size=(4, 4))
    m = MetricContext(np.eye(4) + 0.1 * (mat + mat.T) + np.diag([1.0] * 4))
    for _ in range(20):
        w = TwoForm(rng.normal(size=6), m)
        ss = hodge_star(hodge_star(w))
        assert np.abs(ss.components - w.components).max() <= 1e-12


def test_hodge_star_defining_relation_oracle():
    """a ^ *b = <a, b> vol, against the raw determinant-based inner product."""
    rng = np.random.default_rng(2)
    mat = rng.normal(size=(4, 4))
    m = MetricContext(np.eye(4) + 0.2 * (mat + mat.T) / 2 + np.eye(4))
    vol = volume_form(m).components[0, 1, 2, 3]
    for _ in range(10):
        a = TwoForm(rng.normal(size=6), m)
        b = TwoForm(rng.normal(size=6), m)
        sb = hodge_star(b)
        pairing = wedge(a.as_tensor(), sb.as_tensor()).components[0, 1, 2, 3]
        assert pairing == pytest.approx(a.inner(b) * vol, rel=1e-11, abs=1e-12)


def test_hodge_family_identity_point():
    """At a point where the family metric is the identity matrix."""
    fi = presets()["hyperbolic3sym"]
    p = (1.0, 0.0, 0.0, 0.0)
    g0 = fi.metric_field().values(p)
    assert np.abs(g0 - np.eye(4)).max() <= 1e-14
    m = MetricContext(g0, orientation=1)
    s = hodge_star(TwoForm.from_matrix(coordinate_two_form(0, 2, m).to_matrix(), m))
    expect = -coordinate_two_form(1, 3, m).components
    assert np.abs(s.components - expect).max() <= 1e-12


def test_musical_round_trip():
    rng = np.random.default_rng(3)
    mat = rng.normal(size=(4, 4))
    m = MetricContext(2 * np.eye(4) + 0.3 * (mat + mat.T) / 2)
    t = TensorAtPoint(rng.normal(size=(4, 4, 4)), "ddd", m)
    up = musical(t, 1, "raise")
    back = musical(up, 1, "lower")
    assert np.abs(back.components - t.components).max() <= 1e-13


def test_musical_euclidean_identity():
    t = TensorAtPoint(np.arange(4.0), "d", EUCLIDEAN)
    up = musical(t, 0, "raise")
    assert np.abs(up.components - t.components).max() == 0.0


def test_musical_family_lower_dz():
    fi = presets()["hyperbolic3sym"]
    p = (2.0, 0.0, 0.0, 0.0)
    m = MetricContext(fi.metric_field().values(p))
    dz_vec = TensorAtPoint(np.array([0.0, 0.0, 1.0, 0.0]), "u", m)
    low = musical(dz_vec, 0, "lower")
    assert low.components == pytest.approx([0.0, 0.0, 2.0, 0.0], abs=1e-13)


def test_as_endomorphism_defining_property():
    w = coordinate_two_form(0, 1, EUCLIDEAN)
    a = as_endomorphism(w).components
    e0 = np.zeros(4)
    e0[0] = 1.0
    assert np.abs(a @ e0 - np.array([0.0, 1.0, 0.0, 0.0])).max() <= 1e-15


def test_as_endomorphism_omega_is_j(family_presets):
    fi = family_presets["hyperbolic3sym"]
    p = (1.0, 0.0, 0.0, 0.0)
    geom = fi.geometry(p)
    m = MetricContext(geom.g0, geom.orientation)
    j = as_endomorphism(TwoForm.from_matrix(geom.omega0, m)).components
    assert np.abs(j @ j + np.eye(4)).max() <= 1e-12
    assert np.abs(j - geom.j0).max() <= 1e-12


def test_compose_is_endomorphism_composition():
    rng = np.random.default_rng(4)
    a = TwoForm(rng.normal(size=6), EUCLIDEAN)
    b = TwoForm(rng.normal(size=6), EUCLIDEAN)
    ab = compose(a, b).components
    expect = as_endomorphism(a).components @ as_endomorphism(b).components
    assert np.abs(ab - expect).max() <= 1e-14


def test_sd_split_basic():
    w = coordinate_two_form(0, 1, EUCLIDEAN) + coordinate_two_form(2, 3, EUCLIDEAN)
    split = sd_split(w, orientation=1)
    assert np.abs(split.plus.components - w.components).max() <= 1e-14
    assert np.abs(split.minus.components).max() <= 1e-14
    w2 = coordinate_two_form(0, 1, EUCLIDEAN) - coordinate_two_form(2, 3, EUCLIDEAN)
    split2 = sd_split(w2, orientation=1)
    assert np.abs(split2.minus.components - w2.components).max() <= 1e-14


def test_sd_split_reassembles_and_orthogonal():
    rng = np.random.default_rng(5)
    mat = rng.normal(size=(4, 4))
    m = MetricContext(np.eye(4) + 0.2 * (mat + mat.T) / 2 + np.eye(4) * 0.5)
    w = TwoForm(rng.normal(size=6), m)
    split = sd_split(w)
    total = split.plus.components + split.minus.components
    assert np.abs(total - w.components).max() <= 1e-12
    assert split.plus.inner(split.minus) == pytest.approx(0.0, abs=1e-12)
    sp = hodge_star(split.plus)
    sm = hodge_star(split.minus)
    assert np.abs(sp.components - split.plus.components).max() <= 1e-12
    assert np.abs(sm.components + split.minus.components).max() <= 1e-12


def test_orientation_flip_swaps_halves():
    rng = np.random.default_rng(6)
    w = TwoForm(rng.normal(size=6), EUCLIDEAN)
    s1 = sd_split(w, orientation=1)
    s2 = sd_split(w, orientation=-1)
    assert np.abs(s1.plus.components - s2.minus.components).max() <= 1e-14
    assert np.abs(s1.minus.components - s2.plus.components).max() <= 1e-14


def test_omega_selfdual_for_j_orientation(family_presets):
    from akverify.family import sample

    fi = family_presets["hyperbolic3sym"]
    for p in sample(fi, 10, seed=4):
        geom = fi.geometry(p)
        m = MetricContext(geom.g0, geom.orientation)
        w = TwoForm.from_matrix(geom.omega0, m)
        split = sd_split(w)
        assert np.abs(split.minus.components).max() <= 1e-12
        assert w.norm2() == pytest.approx(2.0, abs=1e-12)


def test_two_form_round_trip():
    rng = np.random.default_rng(7)
    comp = rng.normal(size=6)
    w = TwoForm(comp, EUCLIDEAN)
    back = TwoForm.from_matrix(w.to_matrix(), EUCLIDEAN)
    assert np.abs(back.components - comp).max() == 0.0


def test_form_inner_positive_definite():
    rng = np.random.default_rng(8)
    mat = rng.normal(size=(4, 4))
    m = MetricContext(np.eye(4) * 1.5 + 0.2 * (mat + mat.T) / 2)
    w = TwoForm(rng.normal(size=6), m)
    assert w.norm2() > 0.0
    zero = TwoForm(np.zeros(6), m)
    assert zero.norm2() == 0.0


def test_singular_metric_rejected():
    with pytest.raises(SingularMetric):
        MetricContext(np.diag([1.0, 1.0, 1.0, 0.0]))
