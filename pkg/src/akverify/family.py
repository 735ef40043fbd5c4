"""The explicit model family on (surface) x R^2.

An instance is a conformal surface metric F(x,y) (dx^2 + dy^2), a
holomorphic polynomial h = w + i v in zeta = x + i y with w > 0, and the
four-dimensional structure

    g     = F (dx^2 + dy^2) + w dz^2 + (1/w)(dt + v dz)^2
    Omega = F dx^dy - dz^dt
    J dx  = dy,   J dz = -(1/w)(dt + v dz)

together with the opposite pair (OmegaBar = F dx^dy + dz^dt, I dz =
+(1/w)(dt + v dz)).  Omega equals F dx^dy - dz^(dt + v dz) as well, since
dz^dz = 0.  Everything is evaluated through order-4 jets.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np
from scipy.stats import qmc

from .curvature import MetricField
from .expr import Expr
from .hermitian import HermitianGeometry
from .jets import N_COEFFS
from .tensorjets import JT

Point = tuple[float, float, float, float]

W_MARGIN = 1e-3


class PositivityError(ValueError):
    """Re(h) is not positive where the instance was evaluated."""


class SamplingExhausted(RuntimeError):
    """Rejection sampling could not find enough admissible points."""


@dataclass(frozen=True)
class SurfaceSpec:
    """Conformal data of the surface factor: g_S = e^u w (dx^2 + dy^2).

    ``kind`` fixes u: 'flat' makes g_S = dx^2 + dy^2, 'hyperbolic_halfplane'
    makes g_S = (dx^2 + dy^2)/x^2, and 'custom' takes u as an expression in
    (x, y).
    """

    kind: str = "flat"
    u: str | None = None

    def __post_init__(self):
        if self.kind not in ("flat", "hyperbolic_halfplane", "custom"):
            raise ValueError(f"unknown surface kind {self.kind!r}")
        if self.kind == "custom" and not self.u:
            raise ValueError("custom surfaces need a u expression")

    def conformal_factor(self, x: JT, y: JT, w: JT) -> JT:
        """F = e^u w evaluated on jets."""
        if self.kind == "flat":
            return JT.constant(np.asarray(1.0))
        if self.kind == "hyperbolic_halfplane":
            return (x * x).inv()
        u = Expr(self.u)({"x": x, "y": y})
        if isinstance(u, (int, float)):
            u = JT.constant(np.asarray(float(u)))
        return u.exp() * w


@dataclass(frozen=True)
class HoloFn:
    """Holomorphic polynomial h(zeta) = sum c_k zeta^k, zeta = x + i y."""

    coefficients: tuple[complex, ...]

    def __post_init__(self):
        if len(self.coefficients) > 7:
            raise ValueError("polynomial degree is capped at 6")
        object.__setattr__(
            self, "coefficients", tuple(complex(c) for c in self.coefficients)
        )

    def w_value(self, x: float, y: float) -> float:
        return complex(sum(c * (x + 1j * y) ** k for k, c in enumerate(self.coefficients))).real

    def parts(self, x: JT, y: JT) -> tuple[JT, JT]:
        """(w, v) = (Re h, Im h) as jet fields."""
        re = JT.constant(np.asarray(1.0))
        im = JT.constant(np.asarray(0.0))
        w = re * 0.0
        v = re * 0.0
        for c in self.coefficients:
            w = w + re * c.real - im * c.imag
            v = v + im * c.real + re * c.imag
            re, im = re * x - im * y, re * y + im * x
        return w, v


@dataclass(frozen=True)
class FamilyInstance:
    """A model-family instance over a coordinate box.

    ``scale`` applies a homothety (g -> scale * g, Omega -> scale * Omega).
    ``v_extra`` adds an expression to Im(h), deliberately breaking
    holomorphy (a negative control); ``g_perturb`` adds expressions to
    metric entries, e.g. {"xx": "0.1*x**2"}.
    """

    surface: SurfaceSpec
    h: HoloFn
    domain: dict = dc_field(
        default_factory=lambda: {
            "x": (0.6, 2.4),
            "y": (-1.0, 1.0),
            "z": (-1.0, 1.0),
            "t": (-1.0, 1.0),
        }
    )
    scale: float = 1.0
    v_extra: str | None = None
    g_perturb: dict | None = None
    name: str = "family"

    # -- jet-field construction ------------------------------------------------

    def _wv(self, x: JT, y: JT) -> tuple[JT, JT]:
        w, v = self.h.parts(x, y)
        if self.v_extra:
            extra = Expr(self.v_extra)({"x": x, "y": y})
            v = v + extra
        return w, v

    def _structure(self, p: Point) -> tuple[JT, JT, JT]:
        """(g, Omega, OmegaBar) jet matrices at p."""
        xs = JT.coords(p)
        x, y = xs[0], xs[1]
        w, v = self._wv(x, y)
        if float(w.value) <= 0.0:
            raise PositivityError(f"w = {float(w.value):.4g} <= 0 at {p}")
        f = self.surface.conformal_factor(x, y, w)
        winv = w.inv()
        s = float(self.scale)

        g = JT.zeros((4, 4))
        _set(g, 0, 0, f * s)
        _set(g, 1, 1, f * s)
        _set(g, 2, 2, (w + v * v * winv) * s)
        _set(g, 2, 3, v * winv * s)
        _set(g, 3, 3, winv * s)

        if self.g_perturb:
            idx = {"x": 0, "y": 1, "z": 2, "t": 3}
            for key, expr in self.g_perturb.items():
                i, j = idx[key[0]], idx[key[1]]
                env = {"x": xs[0], "y": xs[1], "z": xs[2], "t": xs[3]}
                pert = Expr(expr)(env)
                if isinstance(pert, (int, float)):
                    pert = JT.constant(np.asarray(float(pert)))
                _add(g, i, j, pert)

        om = JT.zeros((4, 4))
        _set_skew(om, 0, 1, f * s)
        _set_skew(om, 2, 3, JT.constant(np.asarray(-1.0)) * s)

        ombar = JT.zeros((4, 4))
        _set_skew(ombar, 0, 1, f * s)
        _set_skew(ombar, 2, 3, JT.constant(np.asarray(1.0)) * s)
        return g, om, ombar

    def metric_field(self) -> MetricField:
        return MetricField(lambda p: self._structure(p)[0], name=self.name)

    def omega_at(self, p: Point) -> JT:
        return self._structure(p)[1]

    def omega_bar_at(self, p: Point) -> JT:
        return self._structure(p)[2]

    def geometry(self, p: Point) -> HermitianGeometry:
        g, om, _ = self._structure(p)
        return HermitianGeometry(g, om, p)

    # -- config round trip ---------------------------------------------------------

    def to_config(self) -> dict:
        cfg = {
            "surface": {"kind": self.surface.kind, "u": self.surface.u},
            "h": [[c.real, c.imag] for c in self.h.coefficients],
            "domain": {k: list(v) for k, v in self.domain.items()},
            "scale": self.scale,
            "name": self.name,
        }
        if self.v_extra:
            cfg["v_extra"] = self.v_extra
        if self.g_perturb:
            cfg["g_perturb"] = dict(self.g_perturb)
        return cfg

    @classmethod
    def from_config(cls, cfg: dict) -> "FamilyInstance":
        surf = cfg.get("surface", {})
        return cls(
            surface=SurfaceSpec(kind=surf.get("kind", "flat"), u=surf.get("u")),
            h=HoloFn(tuple(complex(re, im) for re, im in cfg["h"])),
            domain={k: tuple(v) for k, v in cfg.get("domain", {}).items()}
            or cls.__dataclass_fields__["domain"].default_factory(),
            scale=float(cfg.get("scale", 1.0)),
            v_extra=cfg.get("v_extra"),
            g_perturb=cfg.get("g_perturb"),
            name=cfg.get("name", "family"),
        )


def _set(m: JT, i: int, j: int, v: JT) -> None:
    m.c[i, j] = v.c
    m.c[j, i] = v.c
    m.order = min(m.order, v.order)


def _add(m: JT, i: int, j: int, v: JT) -> None:
    m.c[i, j] += v.c
    if i != j:
        m.c[j, i] += v.c
    m.order = min(m.order, v.order)


def _set_skew(m: JT, i: int, j: int, v: JT) -> None:
    m.c[i, j] = v.c
    m.c[j, i] = -v.c
    m.order = min(m.order, v.order)


# ---------------------------------------------------------------------------
# spec operations
# ---------------------------------------------------------------------------


def build_metric(fi: FamilyInstance) -> MetricField:
    """Jet-valued metric evaluator of the instance."""
    return fi.metric_field()


def build_structures(fi: FamilyInstance) -> dict[str, Callable[[Point], JT]]:
    """Evaluators for Omega, J, I and OmegaBar (jet matrices at a point)."""

    def j_at(p: Point) -> JT:
        geom = fi.geometry(p)
        return geom.jt

    def i_at(p: Point) -> JT:
        from .curvature import jt_mat_inverse
        from .tensorjets import jcontract

        g, _, ombar = fi._structure(p)
        return jcontract("im,mk->ki", ombar, jt_mat_inverse(g))

    return {
        "Omega": fi.omega_at,
        "J": j_at,
        "I": i_at,
        "OmegaBar": fi.omega_bar_at,
    }


def presets() -> dict[str, FamilyInstance]:
    """Named instances used throughout the verification suite."""
    base_domain = {
        "x": (0.6, 2.4),
        "y": (-1.0, 1.0),
        "z": (-1.0, 1.0),
        "t": (-1.0, 1.0),
    }
    return {
        "hyperbolic3sym": FamilyInstance(
            surface=SurfaceSpec("hyperbolic_halfplane"),
            h=HoloFn((0.0, 1.0)),
            domain=dict(base_domain),
            name="hyperbolic3sym",
        ),
        # surface factor equal to w itself puts the metric in the harmonic
        # potential form V (dx^2+dy^2+dz^2) + V^-1 (dt+omega)^2 with V = w,
        # the Ricci-flat half-conformally-flat member of the family
        "gibbons_hawking": FamilyInstance(
            surface=SurfaceSpec("custom", u="0"),
            h=HoloFn((0.0, 1.0)),
            domain=dict(base_domain),
            name="gibbons_hawking",
        ),
        "kahler_product": FamilyInstance(
            surface=SurfaceSpec("hyperbolic_halfplane"),
            h=HoloFn((1.0,)),
            domain=dict(base_domain),
            name="kahler_product",
        ),
        "poly2": FamilyInstance(
            surface=SurfaceSpec("flat"),
            h=HoloFn((0.0, 0.0, 1.0)),
            domain={
                "x": (1.0, 2.0),
                "y": (-0.4, 0.4),
                "z": (-1.0, 1.0),
                "t": (-1.0, 1.0),
            },
            name="poly2",
        ),
    }


def sample(
    fi: FamilyInstance, n: int, seed: int, margin: float = W_MARGIN
) -> list[Point]:
    """Deterministic quasi-random points of the box with w bounded below."""
    if n < 1:
        raise ValueError("need at least one sample")
    keys = ("x", "y", "z", "t")
    lows = np.array([fi.domain[k][0] for k in keys])
    highs = np.array([fi.domain[k][1] for k in keys])
    halton = qmc.Halton(d=4, scramble=True, seed=seed)
    points: list[Point] = []
    drawn = 0
    while len(points) < n:
        batch = qmc.scale(halton.random(max(n, 16)), lows, highs)
        drawn += len(batch)
        for row in batch:
            if fi.h.w_value(row[0], row[1]) > margin:
                points.append(tuple(float(c) for c in row))
                if len(points) == n:
                    break
        if drawn > 100 * n + 1600:
            raise SamplingExhausted(
                f"rejection rate too high: {len(points)}/{drawn} accepted"
            )
    return points
