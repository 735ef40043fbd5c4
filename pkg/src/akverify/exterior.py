"""Pointwise exterior algebra on a 4-dimensional metric vector space.

Conventions, fixed once for the whole engine:

* wedge product: (a1 ^ ... ^ ar)(X1, ..., Xr) = det(ai(Xj));
* inner product of r-forms: <a1^...^ar, b1^...^br> = det(<ai, bj>), which
  in components reads <w, t> = (1/r!) w_I t^I;
* a 2-form phi and its skew endomorphism are identified by
  <phi(X), Y> = phi(X, Y);
* Hodge star on 2-forms is defined by  a ^ *b = <a, b> vol  with
  vol = orientation * sqrt(det g) dx^dy^dz^dt;
* the bivector basis is ordered {e01, e02, e03, e23, e31, e12} so that in a
  positively-oriented orthonormal frame the self-dual forms pair slots
  (0,3), (1,4), (2,5) with a plus sign.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

#: bivector basis order used for every 6x6 curvature display
BIVECTOR_PAIRS: tuple[tuple[int, int], ...] = (
    (0, 1),
    (0, 2),
    (0, 3),
    (2, 3),
    (3, 1),
    (1, 2),
)


def _levi_civita() -> np.ndarray:
    eps = np.zeros((4, 4, 4, 4))
    for perm in itertools.permutations(range(4)):
        sign = 1.0
        p = list(perm)
        for i in range(4):
            for j in range(i + 1, 4):
                if p[i] > p[j]:
                    sign = -sign
        eps[perm] = sign
    return eps


EPS4 = _levi_civita()


class RankOverflow(ValueError):
    """Wedge product would exceed the top degree of the space."""


class SingularMetric(ValueError):
    """Metric context is degenerate."""


@dataclass(frozen=True)
class MetricContext:
    """Metric data carried by every pointwise tensor.

    ``orientation`` is +1 when dx^dy^dz^dt is positively oriented and -1
    otherwise, so both orientations of the same metric coexist.
    """

    g: np.ndarray
    orientation: int = 1
    ginv: np.ndarray = field(init=False, repr=False)
    sqrt_det: float = field(init=False, repr=False)

    def __post_init__(self):
        g = np.asarray(self.g, dtype=float)
        object.__setattr__(self, "g", g)
        det = float(np.linalg.det(g))
        if det <= 0.0 or np.min(np.linalg.eigvalsh(g)) <= 1e-10:
            raise SingularMetric("metric is not positive definite")
        object.__setattr__(self, "ginv", np.linalg.inv(g))
        object.__setattr__(self, "sqrt_det", math.sqrt(det))

    def reversed(self) -> "MetricContext":
        return MetricContext(self.g, -self.orientation)


EUCLIDEAN = None  # populated below, after TensorAtPoint exists


@dataclass
class TensorAtPoint:
    """Dense tensor at a point: components plus declared index variance.

    ``variance`` is a string over {'d', 'u'} (covariant / contravariant),
    one letter per slot, matching the component axes in order.
    """

    components: np.ndarray
    variance: str
    metric: MetricContext

    def __post_init__(self):
        self.components = np.asarray(self.components, dtype=float)
        if self.components.ndim != len(self.variance):
            raise ValueError("variance letters must match component rank")

    @property
    def rank(self) -> int:
        return len(self.variance)

    def norm2(self) -> float:
        """Metric-invariant squared norm (no form-degree factorials)."""
        t = self.components
        for axis, v in enumerate(self.variance):
            m = self.metric.ginv if v == "d" else self.metric.g
            t = np.tensordot(t, m, axes=([axis], [0]))
            t = np.moveaxis(t, -1, axis)
        return float(np.tensordot(t, self.components, axes=self.rank))


def musical(t: TensorAtPoint, slot: int, direction: str) -> TensorAtPoint:
    """Raise or lower one slot with the metric context."""
    if direction not in ("raise", "lower"):
        raise ValueError("direction must be 'raise' or 'lower'")
    want = "u" if direction == "raise" else "d"
    have = t.variance[slot]
    if have == want:
        return TensorAtPoint(t.components.copy(), t.variance, t.metric)
    m = t.metric.ginv if want == "u" else t.metric.g
    comp = np.tensordot(t.components, m, axes=([slot], [0]))
    comp = np.moveaxis(comp, -1, slot)
    var = t.variance[:slot] + want + t.variance[slot + 1 :]
    return TensorAtPoint(comp, var, t.metric)


def _alt(comp: np.ndarray) -> np.ndarray:
    """Antisymmetrize (with 1/k! weight) over all axes."""
    k = comp.ndim
    out = np.zeros_like(comp)
    for perm in itertools.permutations(range(k)):
        sign = 1.0
        p = list(perm)
        for i in range(k):
            for j in range(i + 1, k):
                if p[i] > p[j]:
                    sign = -sign
        out += sign * comp.transpose(perm)
    return out / math.factorial(k)


def wedge(a: TensorAtPoint, b: TensorAtPoint) -> TensorAtPoint:
    """Wedge product of forms under the determinant convention."""
    k, l = a.rank, b.rank
    if k + l > 4:
        raise RankOverflow(f"wedge of ranks {k} and {l} exceeds degree 4")
    outer = np.multiply.outer(a.components, b.components)
    comp = _alt(outer) * math.factorial(k + l) / (math.factorial(k) * math.factorial(l))
    return TensorAtPoint(comp, "d" * (k + l), a.metric)


def form_inner(a: TensorAtPoint, b: TensorAtPoint) -> float:
    """<a, b> = det(<ai, bj>) convention, i.e. (1/k!) a_I b^I."""
    if a.rank != b.rank:
        raise ValueError("forms of different degree")
    return a_inner_components(a.components, b.components, a.metric)


def a_inner_components(a: np.ndarray, b: np.ndarray, m: MetricContext) -> float:
    k = a.ndim
    t = b
    for axis in range(k):
        t = np.tensordot(t, m.ginv, axes=([axis], [0]))
        t = np.moveaxis(t, -1, axis)
    return float(np.tensordot(a, t, axes=k)) / math.factorial(k)


def volume_form(m: MetricContext) -> TensorAtPoint:
    comp = m.orientation * m.sqrt_det * EPS4
    return TensorAtPoint(comp, "dddd", m)


@dataclass
class TwoForm:
    """2-form stored on the fixed bivector basis {e01,e02,e03,e23,e31,e12}."""

    components: np.ndarray
    metric: MetricContext

    def __post_init__(self):
        self.components = np.asarray(self.components, dtype=float)
        if self.components.shape != (6,):
            raise ValueError("a TwoForm has 6 components")

    @classmethod
    def from_matrix(cls, mat: np.ndarray, metric: MetricContext) -> "TwoForm":
        mat = np.asarray(mat, dtype=float)
        return cls(np.array([mat[i, j] for i, j in BIVECTOR_PAIRS]), metric)

    def to_matrix(self) -> np.ndarray:
        mat = np.zeros((4, 4))
        for c, (i, j) in zip(self.components, BIVECTOR_PAIRS):
            mat[i, j] = c
            mat[j, i] = -c
        return mat

    def as_tensor(self) -> TensorAtPoint:
        return TensorAtPoint(self.to_matrix(), "dd", self.metric)

    def inner(self, other: "TwoForm") -> float:
        return a_inner_components(self.to_matrix(), other.to_matrix(), self.metric)

    def norm2(self) -> float:
        return self.inner(self)

    def __add__(self, other: "TwoForm") -> "TwoForm":
        return TwoForm(self.components + other.components, self.metric)

    def __sub__(self, other: "TwoForm") -> "TwoForm":
        return TwoForm(self.components - other.components, self.metric)

    def __mul__(self, k: float) -> "TwoForm":
        return TwoForm(self.components * k, self.metric)

    __rmul__ = __mul__


def hodge_star(w: TwoForm, orientation: int | None = None) -> TwoForm:
    """*w defined by  a ^ *w = <a, w> vol;  involutive on 2-forms."""
    m = w.metric if orientation is None else MetricContext(w.metric.g, orientation)
    mat = w.to_matrix()
    up = m.ginv @ mat @ m.ginv.T
    star = 0.5 * m.orientation * m.sqrt_det * np.einsum("ijkl,kl->ij", EPS4, up)
    return TwoForm.from_matrix(star, m)


def as_endomorphism(w: TwoForm) -> TensorAtPoint:
    """Skew endomorphism A with <A(X), Y> = w(X, Y); variance 'ud'."""
    a = np.einsum("im,mk->ki", w.to_matrix(), w.metric.ginv)
    return TensorAtPoint(a, "ud", w.metric)


def compose(a: TwoForm, b: TwoForm) -> TensorAtPoint:
    """Endomorphism composition of the two skew endomorphisms."""
    am = as_endomorphism(a).components
    bm = as_endomorphism(b).components
    return TensorAtPoint(am @ bm, "ud", a.metric)


@dataclass
class SelfDualSplit:
    plus: TwoForm
    minus: TwoForm
    orientation: int


def sd_split(w: TwoForm, orientation: int | None = None) -> SelfDualSplit:
    """Self-dual / anti-self-dual halves for the given orientation."""
    m = w.metric if orientation is None else MetricContext(w.metric.g, orientation)
    wm = TwoForm(w.components, m)
    s = hodge_star(wm)
    plus = TwoForm((wm.components + s.components) / 2.0, m)
    minus = TwoForm((wm.components - s.components) / 2.0, m)
    return SelfDualSplit(plus, minus, m.orientation)


EUCLIDEAN = MetricContext(np.eye(4))


def coordinate_one_form(i: int, m: MetricContext) -> TensorAtPoint:
    comp = np.zeros(4)
    comp[i] = 1.0
    return TensorAtPoint(comp, "d", m)


def coordinate_two_form(i: int, j: int, m: MetricContext) -> TwoForm:
    mat = np.zeros((4, 4))
    mat[i, j] = 1.0
    mat[j, i] = -1.0
    return TwoForm.from_matrix(mat, m)
