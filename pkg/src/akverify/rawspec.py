"""Raw geometry sources beyond the model family.

Two kinds:

* ``RandomAlmostKahler``: a genuinely random almost Kahler structure.  A
  random polynomial 1-form lam gives a closed non-degenerate Omega = d lam,
  a random SPD polynomial matrix gives an auxiliary metric g0, and the
  polar construction J = (-A^2)^{-1/2} A with A = g0^{-1} Omega,
  g = Omega(., J.) produces a compatible pair with d Omega = 0 exactly.
  The matrix square root is solved in jet arithmetic by a graded Sylvester
  iteration, so the whole structure is an order-4 jet field.

* ``ExplicitSpec``: g_ij and J^k_i given as coordinate expressions, used
  for negative controls; nothing is assumed about closedness or
  compatibility, the preflight checks report whatever holds.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .curvature import MetricField
from .expr import Expr
from .hermitian import HermitianGeometry
from .tensorjets import JT, jcontract

Point = tuple[float, float, float, float]

_DEFAULT_BOX = {
    "x": (-0.4, 0.4),
    "y": (-0.4, 0.4),
    "z": (-0.4, 0.4),
    "t": (-0.4, 0.4),
}


def _sylvester_solver(q0: np.ndarray):
    """Solve Q0 X + X Q0 = B coefficientwise, Q0 symmetric positive."""
    lam, u = np.linalg.eigh(q0)
    denom = lam[:, None] + lam[None, :]

    def solve(b: JT) -> JT:
        tb = np.einsum("ai,abz,bj->ijz", u, b.c, u)
        tb = tb / denom[:, :, None]
        return JT(np.einsum("ia,abz,jb->ijz", u, tb, u), b.order)

    return solve


def jt_sqrt_selfadjoint(s: JT, g_value: np.ndarray) -> JT:
    """Square root of a jet endomorphism self-adjoint w.r.t. ``g_value``.

    Conjugating by the metric square root makes the value part exactly
    symmetric, so the Sylvester iteration Q0 E + E Q0 = S - Q0^2 - E^2
    gains one exact Taylor degree per step and terminates.
    """
    lam_g, ug = np.linalg.eigh(g_value)
    gh = (ug * np.sqrt(lam_g)) @ ug.T
    ghi = np.linalg.inv(gh)
    st = JT(np.einsum("ab,bcz,cd->adz", gh, s.c, ghi), s.order)

    s0 = 0.5 * (st.value + st.value.T)
    lam, u = np.linalg.eigh(s0)
    if lam.min() <= 0:
        raise ValueError("matrix square root needs a positive definite value")
    q0 = (u * np.sqrt(lam)) @ u.T
    solve = _sylvester_solver(q0)
    q0_jt = JT.constant(q0)
    e = JT.zeros((4, 4))
    for _ in range(8):
        rhs = st - jcontract("ab,bc->ac", q0_jt, q0_jt) - jcontract("ab,bc->ac", e, e)
        e_new = solve(rhs)
        delta = float(np.abs(e_new.c - e.c).max())
        e = e_new
        if delta < 1e-15:
            break
    q = q0_jt + e
    return JT(np.einsum("ab,bcz,cd->adz", ghi, q.c, gh), q.order)


@dataclass(frozen=True)
class RandomAlmostKahler:
    """Seeded random compatible (g, J, Omega) with Omega closed by construction."""

    seed: int
    amplitude: float = 0.12
    domain: dict = dc_field(default_factory=lambda: dict(_DEFAULT_BOX))
    name: str = "random_ak"

    def _data(self):
        rng = np.random.default_rng(self.seed)
        amp = float(self.amplitude)
        g_lin = rng.normal(size=(4, 4, 4)) * amp * 0.5
        g_quad = rng.normal(size=(4, 4, 4, 4)) * amp * 0.25
        lam_coeff = rng.normal(size=(4, 4, 4)) * amp  # lam_i quadratic coeffs
        lam_cubic = rng.normal(size=(4, 4, 4, 4)) * amp * 0.3
        return g_lin, g_quad, lam_coeff, lam_cubic

    def _g0_omega(self, p: Point) -> tuple[JT, JT]:
        g_lin, g_quad, lam_coeff, lam_cubic = self._data()
        xs = JT.coords(p)
        g0 = JT.constant(np.eye(4))
        for i in range(4):
            for j in range(i, 4):
                pert = None
                for a in range(4):
                    t = xs[a] * g_lin[i, j, a]
                    pert = t if pert is None else pert + t
                    for b in range(a, 4):
                        pert = pert + xs[a] * xs[b] * g_quad[i, j, a, b]
                g0.c[i, j] += pert.c
                if i != j:
                    g0.c[j, i] += pert.c
                g0.order = min(g0.order, pert.order)

        # lam = standard primitive + random polynomial 1-form
        lam = [
            (xs[1] * (-0.5)),
            (xs[0] * 0.5),
            (xs[3] * (-0.5)),
            (xs[2] * 0.5),
        ]
        for i in range(4):
            extra = None
            for a in range(4):
                for b in range(a, 4):
                    t = xs[a] * xs[b] * (lam_coeff[i, a, b] * 0.5)
                    extra = t if extra is None else extra + t
                    for c in range(b, 4):
                        extra = extra + xs[a] * xs[b] * xs[c] * (
                            lam_cubic[i, a, (b + c) % 4, c] / 3.0
                        )
            lam[i] = lam[i] + extra

        # Omega = d lam
        dl = JT.stack([l.grad() for l in lam])  # dl[i, m] = d_m lam_i
        om = JT(np.einsum("imz->miz", dl.c), dl.order)
        om = om - JT(np.einsum("miz->imz", om.c), om.order)
        return g0, om

    def geometry(self, p: Point) -> HermitianGeometry:
        g0, om = self._g0_omega(p)
        g0inv = _jt_inv(g0)
        a = jcontract("im,mk->ki", om, g0inv)  # A^k_i
        s = -jcontract("km,mi->ki", a, a)
        q = jt_sqrt_selfadjoint(s, g0.value)
        j = jcontract("km,mi->ki", _jt_inv(q), a)
        # g(X, Y) = Omega(X, J Y)
        g = jcontract("im,mj->ij", om, j)
        return HermitianGeometry(g, om, p)

    def metric_field(self) -> MetricField:
        return MetricField(lambda p: self.geometry(p).g, name=self.name)

    def sample(self, n: int, seed: int) -> list[Point]:
        from scipy.stats import qmc

        keys = ("x", "y", "z", "t")
        lows = np.array([self.domain[k][0] for k in keys])
        highs = np.array([self.domain[k][1] for k in keys])
        halton = qmc.Halton(d=4, scramble=True, seed=seed)
        pts = qmc.scale(halton.random(n), lows, highs)
        return [tuple(float(c) for c in row) for row in pts]

    def to_config(self) -> dict:
        return {
            "kind": "random_ak",
            "seed": self.seed,
            "amplitude": self.amplitude,
            "domain": {k: list(v) for k, v in self.domain.items()},
            "name": self.name,
        }


def _jt_inv(m: JT) -> JT:
    from .curvature import jt_mat_inverse

    return jt_mat_inverse(m)


@dataclass(frozen=True)
class ExplicitSpec:
    """Explicit g_ij and J^k_i coordinate expressions (negative controls)."""

    g_exprs: tuple  # 4x4 nested tuple of expression strings
    j_exprs: tuple
    domain: dict = dc_field(default_factory=lambda: dict(_DEFAULT_BOX))
    name: str = "explicit"

    def geometry(self, p: Point) -> HermitianGeometry:
        xs = JT.coords(p)
        env = {"x": xs[0], "y": xs[1], "z": xs[2], "t": xs[3]}

        def build(exprs) -> JT:
            m = JT.zeros((4, 4))
            for i in range(4):
                for j in range(4):
                    v = Expr(str(exprs[i][j]))(env)
                    if isinstance(v, (int, float)):
                        m.c[i, j, 0] = float(v)
                    else:
                        m.c[i, j] = v.c
                        m.order = min(m.order, v.order)
            return m

        g = build(self.g_exprs)
        jmat = build(self.j_exprs)
        om = jcontract("ki,kj->ij", jmat, g)  # Omega_ij = g(J di, dj) = J^k_i g_kj
        return HermitianGeometry(g, om, p)

    def metric_field(self) -> MetricField:
        return MetricField(lambda p: self.geometry(p).g, name=self.name)

    def sample(self, n: int, seed: int) -> list[Point]:
        from scipy.stats import qmc

        keys = ("x", "y", "z", "t")
        lows = np.array([self.domain[k][0] for k in keys])
        highs = np.array([self.domain[k][1] for k in keys])
        halton = qmc.Halton(d=4, scramble=True, seed=seed)
        pts = qmc.scale(halton.random(n), lows, highs)
        return [tuple(float(c) for c in row) for row in pts]

    def to_config(self) -> dict:
        return {
            "kind": "explicit",
            "g": [list(r) for r in self.g_exprs],
            "J": [list(r) for r in self.j_exprs],
            "domain": {k: list(v) for k, v in self.domain.items()},
            "name": self.name,
        }

    @classmethod
    def from_config(cls, cfg: dict) -> "ExplicitSpec":
        return cls(
            g_exprs=tuple(tuple(r) for r in cfg["g"]),
            j_exprs=tuple(tuple(r) for r in cfg["J"]),
            domain={k: tuple(v) for k, v in cfg.get("domain", _DEFAULT_BOX).items()},
            name=cfg.get("name", "explicit"),
        )
