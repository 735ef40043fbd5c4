"""Metric-to-curvature pipeline on order-4 jet fields.

Sign conventions, fixed here and documented in the README convention sheet:

* curvature operator  R_{X,Y} Z = (nabla_[X,Y] - [nabla_X, nabla_Y]) Z,
  stored as the (0,4) tensor  R[i,j,k,l] = < R_{di,dj} dk, dl >;
* Ricci contraction  Ric(X,Y) = tr { Z -> R_{X,Z} Y }, which makes the
  scalar curvature of the round sphere positive and of the hyperbolic
  plane negative;
* codifferential  delta = minus the g-trace of nabla on the first form
  slot, for forms and for Lambda^2-valued forms alike;
* 2-forms act on 2-forms through the half contraction
  (A(phi))_ij = 1/2 A_ijkl phi^kl, so the identity operator on Lambda^2
  corresponds to the tensor g_ik g_jl - g_il g_jk.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from .exterior import BIVECTOR_PAIRS, EPS4, MetricContext, TensorAtPoint
from .jets import Jet, MAX_ORDER, N_COEFFS
from .tensorjets import JT, jcontract, vcontract

Point = tuple[float, float, float, float]

MIN_METRIC_EIGENVALUE = 1e-10


class DegenerateMetric(ValueError):
    """Metric not positive definite at the sampled point."""


# ---------------------------------------------------------------------------
# jet-level linear algebra helpers
# ---------------------------------------------------------------------------


def jt_mat_inverse(m: JT) -> JT:
    """Inverse of a jet matrix by the terminating Neumann series."""
    m0inv = np.linalg.inv(m.value)
    h = JT(m.c.copy(), m.order)
    h.c[..., 0] = 0.0
    k = JT(-np.einsum("am,mbz->abz", m0inv, h.c), m.order)
    acc = JT.constant(np.eye(m.shape[0]))
    term = acc
    for _ in range(MAX_ORDER):
        term = jcontract("ab,bc->ac", term, k)
        acc = acc + term
    return JT(np.einsum("abz,bm->amz", acc.c, m0inv), m.order)


def jt_det4(m: JT) -> JT:
    """Determinant of a 4x4 jet matrix (explicit permutation expansion)."""
    acc = None
    for perm in itertools.permutations(range(4)):
        sign = 1.0
        p = list(perm)
        for i in range(4):
            for j in range(i + 1, 4):
                if p[i] > p[j]:
                    sign = -sign
        term = m[0, perm[0]] * m[1, perm[1]] * m[2, perm[2]] * m[3, perm[3]] * sign
        acc = term if acc is None else acc + term
    return acc


# ---------------------------------------------------------------------------
# metric fields
# ---------------------------------------------------------------------------


class MetricField:
    """Symmetric jet-valued metric evaluator: point -> (4,4) order-4 jets."""

    def __init__(self, fn: Callable[[Point], JT], name: str = "metric"):
        self._fn = fn
        self.name = name

    def at(self, p: Point) -> JT:
        g = self._fn(tuple(float(c) for c in p))
        if g.shape != (4, 4):
            raise ValueError("metric evaluator must produce a (4,4) jet matrix")
        return g

    def values(self, p: Point) -> np.ndarray:
        return self.at(p).value

    @classmethod
    def from_components(cls, comps, name: str = "metric") -> "MetricField":
        """Build from per-component scalar evaluators point -> Jet.

        ``comps`` maps (i, j) with i <= j to callables; missing entries are
        zero and the matrix is symmetrized.
        """

        def fn(p: Point) -> JT:
            c = np.zeros((4, 4, N_COEFFS))
            order = MAX_ORDER
            for (i, j), f in comps.items():
                jet: Jet = f(p)
                c[i, j] = jet.coeffs
                c[j, i] = jet.coeffs
                order = min(order, jet.order)
            return JT(c, order)

        return cls(fn, name=name)


# ---------------------------------------------------------------------------
# per-point geometry with lazily cached curvature data
# ---------------------------------------------------------------------------


class MetricGeometry:
    """All metric-level quantities at one point, cached lazily.

    Jet tensors keep the deepest order the pipeline supports: the metric at
    order 4, Christoffel symbols at 3, the curvature tensor at 2, and its
    covariant derivative at 1.
    """

    def __init__(self, g: JT, point: Point, orientation: int = 1):
        self.point = tuple(float(c) for c in point)
        self.orientation = int(orientation)
        self._g = g
        eig = np.linalg.eigvalsh(g.value)
        if eig.min() <= MIN_METRIC_EIGENVALUE:
            raise DegenerateMetric(
                f"metric eigenvalue {eig.min():.3e} at point {self.point}"
            )

    @classmethod
    def from_field(
        cls, m: MetricField, p: Point, orientation: int = 1
    ) -> "MetricGeometry":
        return cls(m.at(p), p, orientation)

    # -- basic data ---------------------------------------------------------

    @cached_property
    def g(self) -> JT:
        return self._g

    @cached_property
    def g0(self) -> np.ndarray:
        return self.g.value

    @cached_property
    def ginv(self) -> JT:
        return jt_mat_inverse(self.g)

    @cached_property
    def ginv0(self) -> np.ndarray:
        return np.linalg.inv(self.g0)

    @cached_property
    def sqrt_det(self) -> JT:
        return jt_det4(self.g).sqrt()

    @cached_property
    def metric_context(self) -> MetricContext:
        return MetricContext(self.g0, self.orientation)

    # -- connection and curvature -------------------------------------------

    @cached_property
    def gamma(self) -> JT:
        """Christoffel symbols, layout gamma[k, i, j] = Gamma^k_ij."""
        dg = self.g.grad()  # dg[m, i, j] = d_m g_ij
        c = dg.c
        d_i_g_jl = c  # axes already (i, j, l) once renamed
        d_j_g_il = np.transpose(c, (1, 0, 2, 3))
        d_l_g_ij = np.transpose(c, (1, 2, 0, 3))
        low = JT(0.5 * (d_i_g_jl + d_j_g_il - d_l_g_ij), dg.order)
        return jcontract("kl,ijl->kij", self.ginv, low)

    @cached_property
    def riemann(self) -> JT:
        """(0,4) curvature, R[i,j,k,l] = <R_{di,dj} dk, dl>."""
        gam = self.gamma
        dgam = gam.grad()  # dgam[m, k, i, j] = d_m Gamma^k_ij
        # R^m_{k|ij} = -( d_i G^m_jk - d_j G^m_ik + G^m_ip G^p_jk - G^m_jp G^p_ik )
        dpart = JT(np.einsum("imjkz->mkijz", dgam.c), dgam.order)
        gg = jcontract("mip,pjk->mkij", gam, gam)
        combined = dpart + gg
        up = JT(np.einsum("mkijz->mkjiz", combined.c), combined.order) - combined
        # lower the first index: R[i,j,k,l] = g_{ml} R^m_{k|ij}
        return jcontract("ml,mkij->ijkl", self.g, up)

    @cached_property
    def ricci(self) -> JT:
        """Ric[i,j] = g^{kl} R[i,k,j,l]."""
        return jcontract("kl,ikjl->ij", self.ginv, self.riemann)

    @cached_property
    def scalar(self) -> JT:
        return jcontract("ij,ij->", self.ginv, self.ricci)

    @cached_property
    def ricci0(self) -> JT:
        return self.ricci - jcontract(",ij->ij", self.scalar * 0.25, self.g)

    @cached_property
    def s(self) -> float:
        return float(self.scalar.value)

    # -- operators on 2-forms as (0,4) tensors --------------------------------

    @cached_property
    def id_lambda2(self) -> JT:
        """Tensor of the identity on 2-forms: g_ik g_jl - g_il g_jk."""
        gik_gjl = jcontract("ik,jl->ijkl", self.g, self.g)
        gil_gjk = jcontract("il,jk->ijkl", self.g, self.g)
        return gik_gjl - gil_gjk

    @cached_property
    def star4(self) -> JT:
        """Hodge star on 2-forms: (*phi)_ij = 1/2 star4_ijkl phi^kl."""
        return vcontract("ijkl,->ijkl", EPS4 * self.orientation, self.sqrt_det)

    def tilde(self, s_tensor: JT) -> JT:
        """Curvature-type extension of a symmetric 2-tensor.

        tilde(S)(X^Y) = S(X)^Y + X^S(Y), as a (0,4) tensor.
        """
        a = jcontract("ik,jl->ijkl", s_tensor, self.g)
        b = jcontract("il,jk->ijkl", s_tensor, self.g)
        c = jcontract("ik,jl->ijkl", self.g, s_tensor)
        d = jcontract("il,jk->ijkl", self.g, s_tensor)
        return a - b + c - d

    def op_compose(self, a: JT, b: JT) -> JT:
        """Composition of two Lambda^2 operators given as (0,4) tensors."""
        b_up = jcontract("mp,pqkl->mqkl", self.ginv, b)
        b_up = jcontract("nq,mqkl->mnkl", self.ginv, b_up)
        return jcontract("ijmn,mnkl->ijkl", a, b_up) * 0.5

    def op_apply(self, a: JT, phi: JT) -> JT:
        """Apply a Lambda^2 operator (0,4) to a 2-form: half contraction."""
        phi_up = jcontract("km,kl->ml", self.ginv, phi)
        phi_up = jcontract("ln,ml->mn", self.ginv, phi_up)
        return jcontract("ijmn,mn->ij", a, phi_up) * 0.5

    # -- Weyl ------------------------------------------------------------------

    @cached_property
    def weyl(self) -> JT:
        return (
            self.riemann
            - jcontract(",ijkl->ijkl", self.scalar * (1.0 / 12.0), self.id_lambda2)
            - self.tilde(self.ricci0) * 0.5
        )

    @cached_property
    def weyl_star(self) -> JT:
        return self.op_compose(self.weyl, self.star4)

    @cached_property
    def weyl_plus(self) -> JT:
        return (self.weyl + self.weyl_star) * 0.5

    @cached_property
    def weyl_minus(self) -> JT:
        return (self.weyl - self.weyl_star) * 0.5

    # -- covariant differentiation -----------------------------------------

    def cov(self, t: JT, variance: str) -> JT:
        """Covariant derivative; the new covariant slot comes first."""
        letters = "abcdefgh"[: len(variance)]
        if t.c.ndim - 1 != len(variance):
            raise ValueError("variance letters must match tensor rank")
        out = t.grad()
        for s, v in enumerate(variance):
            tgt = letters[s]
            slots = letters[:s] + "p" + letters[s + 1 :]
            if v == "d":
                corr = jcontract(f"pm{tgt},{slots}->m{letters}", self.gamma, t)
                out = out - corr
            else:
                corr = jcontract(f"{tgt}mp,{slots}->m{letters}", self.gamma, t)
                out = out + corr
        return out

    def laplacian(self, f: JT) -> JT:
        """Positive (geometer's) Laplacian of a scalar jet field."""
        hess = self.cov(f.grad(), "d")
        return -jcontract("mn,mn->", self.ginv, hess)

    # -- Cotton-York and the codifferential of W ------------------------------

    @cached_property
    def schouten(self) -> JT:
        """Normalized Ricci tensor 1/2 Ric0 + s/24 g."""
        return self.ricci0 * 0.5 + jcontract(
            ",ij->ij", self.scalar * (1.0 / 24.0), self.g
        )

    @cached_property
    def cotton(self) -> np.ndarray:
        """C[i,j,k] = C(di,dj,dk) = -(nabla_i h)(j,k) + (nabla_j h)(i,k)."""
        nh = self.cov(self.schouten, "dd").value
        return -nh + nh.transpose(1, 0, 2)

    @cached_property
    def nabla_weyl(self) -> JT:
        return self.cov(self.weyl, "dddd")

    @cached_property
    def delta_weyl(self) -> np.ndarray:
        """(delta W)[i,j,l]: 2-form value slots (i,j), direction slot l."""
        return -np.einsum("mk,mijkl->ijl", self.ginv0, self.nabla_weyl.value)

    def delta_lambda2_operator(self, nabla_op_values: np.ndarray) -> np.ndarray:
        """delta of a Lambda^2 operator field from its nabla values (4,4,4,4,4)."""
        return -np.einsum("mk,mijkl->ijl", self.ginv0, nabla_op_values)

    # -- frames ---------------------------------------------------------------

    def orthonormal_frame(self) -> np.ndarray:
        """Columns = g-orthonormal frame, positively oriented for self.orientation."""
        l = np.linalg.cholesky(self.g0)
        b = np.linalg.inv(l.T)
        if self.orientation * np.linalg.det(b) < 0:
            b = b[:, [0, 1, 3, 2]]
        return b

    def curv_op6(self, frame: np.ndarray | None = None) -> np.ndarray:
        """6x6 curvature operator on the orthonormal bivector basis."""
        b = self.orthonormal_frame() if frame is None else frame
        rf = np.einsum("ijkl,ia,jb,kc,ld->abcd", self.riemann.value, b, b, b, b)
        return curv_matrix6(rf)


def curv_matrix6(r_frame: np.ndarray) -> np.ndarray:
    m = np.zeros((6, 6))
    for a, (i, j) in enumerate(BIVECTOR_PAIRS):
        for bidx, (k, l) in enumerate(BIVECTOR_PAIRS):
            m[a, bidx] = r_frame[i, j, k, l]
    return m


#: star operator on the orthonormal bivector basis (positive orientation)
STAR6 = np.block([[np.zeros((3, 3)), np.eye(3)], [np.eye(3), np.zeros((3, 3))]])
P_PLUS6 = 0.5 * (np.eye(6) + STAR6)
P_MINUS6 = 0.5 * (np.eye(6) - STAR6)


# ---------------------------------------------------------------------------
# spec surface: operation wrappers and the curvature bundle
# ---------------------------------------------------------------------------


@dataclass
class CurvatureBundle:
    """Snapshot of the curvature apparatus at one point."""

    point: Point
    riemann: TensorAtPoint
    curv_op: np.ndarray
    ricci: TensorAtPoint
    ric0: TensorAtPoint
    s: float
    weyl: TensorAtPoint
    wplus3: np.ndarray
    wminus3: np.ndarray
    frame: np.ndarray
    geometry: MetricGeometry = field(repr=False, default=None)

    @property
    def cotton_york(self) -> np.ndarray:
        return self.geometry.cotton

    @property
    def delta_w(self) -> np.ndarray:
        return self.geometry.delta_weyl


def christoffel(m: MetricField, p: Point) -> TensorAtPoint:
    """Christoffel symbols at p, jets retained for two more derivatives."""
    geo = MetricGeometry.from_field(m, p)
    gam = geo.gamma
    t = TensorAtPoint(gam.value, "udd", geo.metric_context)
    t.jets = gam
    t.geometry = geo
    return t


def riemann(m: MetricField, p: Point, orientation: int = 1) -> CurvatureBundle:
    geo = MetricGeometry.from_field(m, p, orientation)
    return bundle_from_geometry(geo)


def bundle_from_geometry(geo: MetricGeometry) -> CurvatureBundle:
    ctx = geo.metric_context
    frame = geo.orthonormal_frame()
    m6 = geo.curv_op6(frame)
    wplus3, wminus3 = _sd_blocks(m6, geo.s)
    return CurvatureBundle(
        point=geo.point,
        riemann=TensorAtPoint(geo.riemann.value, "dddd", ctx),
        curv_op=m6,
        ricci=TensorAtPoint(geo.ricci.value, "dd", ctx),
        ric0=TensorAtPoint(geo.ricci0.value, "dd", ctx),
        s=geo.s,
        weyl=TensorAtPoint(geo.weyl.value, "dddd", ctx),
        wplus3=wplus3,
        wminus3=wminus3,
        frame=frame,
        geometry=geo,
    )


def _sd_blocks(m6: np.ndarray, s: float):
    plus = 0.5 * (m6[:3, :3] + m6[3:, 3:] + m6[:3, 3:] + m6[3:, :3])
    minus = 0.5 * (m6[:3, :3] + m6[3:, 3:] - m6[:3, 3:] - m6[3:, :3])
    wplus3 = plus - (s / 12.0) * np.eye(3)
    wminus3 = minus - (s / 12.0) * np.eye(3)
    return wplus3, wminus3


def singer_thorpe(b: CurvatureBundle) -> dict:
    """Block decomposition of the 6x6 curvature operator.

    Diagonal blocks are W+- plus s/12 Id, the off-diagonal block is half the
    curvature-type extension of the trace-free Ricci tensor.
    """
    m6 = b.curv_op
    ric_block = P_PLUS6 @ m6 @ P_MINUS6 + P_MINUS6 @ m6 @ P_PLUS6
    reassembled = P_PLUS6 @ m6 @ P_PLUS6 + P_MINUS6 @ m6 @ P_MINUS6 + ric_block
    return {
        "wplus": b.wplus3,
        "wminus": b.wminus3,
        "ric0_block": ric_block,
        "s_block": b.s / 12.0,
        "reassembly_residual": float(np.max(np.abs(reassembled - m6))),
    }


def covariant_derivative(
    t: TensorAtPoint, m: MetricField | None = None, p: Point | None = None
) -> TensorAtPoint:
    """One covariant derivative of a jet-carrying tensor (new slot first)."""
    jets: JT | None = getattr(t, "jets", None)
    if jets is None:
        raise ValueError("tensor carries no jet payload")
    geo = getattr(t, "geometry", None)
    if geo is None:
        geo = MetricGeometry.from_field(m, p)
    out = geo.cov(jets, t.variance)
    res = TensorAtPoint(out.value, "d" + t.variance, t.metric)
    res.jets = out
    res.geometry = geo
    return res


@dataclass
class DeltaW:
    """Codifferential of the Weyl tensor with self-dual and anti-self-dual parts."""

    full: np.ndarray  # [i, j, l]: 2-form slots (i,j), direction l
    plus: np.ndarray
    minus: np.ndarray


def split_form_slots(
    t3: np.ndarray, geo: MetricGeometry
) -> tuple[np.ndarray, np.ndarray]:
    """Split the 2-form value slots of a [i,j,l] array into SD/ASD parts."""
    ginv = geo.ginv0
    st = geo.star4.value
    up = np.einsum("ijl,ik,jm->kml", t3, ginv, ginv)
    star = 0.5 * np.einsum("ijkm,kml->ijl", st, up)
    return 0.5 * (t3 + star), 0.5 * (t3 - star)


def delta_W(b: CurvatureBundle) -> DeltaW:
    geo = b.geometry
    dw = geo.delta_weyl
    plus, minus = split_form_slots(dw, geo)
    return DeltaW(full=dw, plus=plus, minus=minus)


@dataclass
class CottonYork:
    full: np.ndarray  # [i, j, k] = C(di, dj, dk); C_Z = full[:, :, z]
    plus: np.ndarray
    minus: np.ndarray


def cotton_york(b: CurvatureBundle) -> CottonYork:
    geo = b.geometry
    c = geo.cotton
    plus, minus = split_form_slots(c, geo)
    return CottonYork(full=c, plus=plus, minus=minus)


# ---------------------------------------------------------------------------
# invariant norms on plain component arrays
# ---------------------------------------------------------------------------


def norm_d(t: np.ndarray, ginv: np.ndarray) -> float:
    """Metric-invariant norm of an all-covariant component array."""
    k = t.ndim
    u = t
    for axis in range(k):
        u = np.tensordot(u, ginv, axes=([axis], [0]))
        u = np.moveaxis(u, -1, axis)
    return float(np.sqrt(abs(np.tensordot(t, u, axes=k))))
