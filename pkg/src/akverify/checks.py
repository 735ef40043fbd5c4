"""Identity catalogue and per-point evaluation.

Every identity the engine certifies is registered here with its check
group, its tolerance tier and a one-line description.  Tolerances follow
the roundoff-amplification tiers: 1e-10 for pointwise linear algebra,
1e-8 for first-derivative identities, 1e-6 for identities consuming third
and fourth derivatives; a few inherit tighter values from the acceptance
gates.  Informational quantities (classifiers, norms) carry no tolerance
and never fail a run.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from . import hermitian as H
from .curvature import _sd_blocks
from .hermitian import GaugeDegenerate, HermitianGeometry

GROUPS = ("compat", "gray", "u2", "bianchi", "weitzenbock", "section4", "chern")

#: conventions the reports are stamped with
CONVENTIONS = {
    "curvature_sign": "R_{X,Y}Z = (nabla_[X,Y] - [nabla_X,nabla_Y])Z",
    "ricci": "Ric(X,Y) = tr(Z -> R_{X,Z}Y); hyperbolic plane gets s < 0",
    "codifferential": "delta = -trace of nabla on the first form slot",
    "two_form_action": "(A(phi))_ij = 1/2 A_ijkl phi^kl",
    "orientation": "Omega^Omega is a positive multiple of the volume form",
    "volume": "dmu = Omega^Omega / 2",
    "gauge": "phi from e01'' (fallback e02, e03), normalized to |phi|^2 = 2",
    "anti_invariant_projection": "applied to the 2-form value slot",
    "gray_normalization": "g3_*/g2 are relative to |R|",
}


def conventions_hash() -> str:
    payload = json.dumps(CONVENTIONS, sort_keys=True).encode()
    return hashlib.sha256(payload).hexdigest()[:16]


@dataclass(frozen=True)
class CheckInfo:
    group: str
    tol: float | None  # None marks an informational quantity
    description: str


CATALOGUE: dict[str, CheckInfo] = {
    # -- compat (always-on preflight) --------------------------------------
    "d_omega": CheckInfo("compat", 1e-9, "fundamental 2-form is closed"),
    "j_squared": CheckInfo("compat", 1e-11, "J squares to minus the identity"),
    "compatibility": CheckInfo("compat", 1e-11, "J is a metric isometry"),
    "omega_norm": CheckInfo("compat", 1e-10, "|Omega|^2 equals 2"),
    # -- gray ----------------------------------------------------------------
    "g3_i": CheckInfo(
        "gray", 1e-7, "anti-invariant Ricci and star-Ricci parts vanish"
    ),
    "g3_iii": CheckInfo(
        "gray", 1e-7, "Ric* - Ric equals (kappa - s)/6 times the metric"
    ),
    "g3_iv": CheckInfo("gray", 1e-7, "curvature invariant under J on all four slots"),
    "g2": CheckInfo(
        "gray", None, "second curvature condition classifier (informational)"
    ),
    # -- u2 -------------------------------------------------------------------
    "u2_recompose": CheckInfo(
        "u2", 1e-10, "seven reduced pieces rebuild the curvature tensor"
    ),
    "wplus_trace": CheckInfo("u2", 1e-10, "self-dual Weyl block is trace free"),
    "sstar_consistency": CheckInfo(
        "u2", 1e-10, "star-scalar curvature matches (2 kappa + s)/3"
    ),
    "sstar_minus_s": CheckInfo(
        "u2", 1e-8, "s* - s equals |nabla Omega|^2"
    ),
    "weitzenbock_omega": CheckInfo(
        "u2", 1e-8, "half the rough Laplacian of Omega is rho* - rho"
    ),
    "ricci_identity": CheckInfo(
        "u2", 1e-8, "second-derivative commutator of Omega is [J, R]"
    ),
    "naom_vs_nijenhuis": CheckInfo(
        "u2", 1e-9, "nabla Omega is half the J-dual of the Nijenhuis tensor"
    ),
    "naj_antilinear": CheckInfo(
        "u2", 1e-9, "nabla_{JX} J = -J nabla_X J"
    ),
    "nabla_omega_gauge": CheckInfo(
        "u2", 1e-9, "nabla Omega = a x phi - Ja x Jphi in the gauge"
    ),
    "nabla_phi_gauge": CheckInfo(
        "u2", 1e-9, "nabla phi = -a x Omega + b x Jphi in the gauge"
    ),
    "norm_4a2": CheckInfo("u2", 1e-9, "|nabla Omega|^2 equals 4|a|^2"),
    "ricci_id_phi_1": CheckInfo(
        "u2", 1e-8, "da - Ja^b equals minus the curvature of Jphi"
    ),
    "ricci_id_phi_2": CheckInfo(
        "u2", 1e-8, "d(Ja) + a^b equals minus the curvature of phi"
    ),
    "db_identity": CheckInfo("u2", 1e-8, "db = a^Ja - rho*"),
    # -- bianchi ---------------------------------------------------------------
    "delta_w_cotton": CheckInfo(
        "bianchi", 1e-6, "codifferential of Weyl equals the Cotton-York tensor"
    ),
    "delta_w_cotton_sd": CheckInfo(
        "bianchi", 1e-6, "self-dual half of the differential Bianchi identity"
    ),
    "delta_w_cotton_asd": CheckInfo(
        "bianchi", 1e-6, "anti-self-dual half of the differential Bianchi identity"
    ),
    "cotton_york_formula": CheckInfo(
        "bianchi", 1e-6, "Cotton-York tensor assembled from the U(2) apparatus"
    ),
    "bianchi_plus": CheckInfo(
        "bianchi", 1e-6, "self-dual Bianchi identity in U(2) pieces"
    ),
    "bianchi_minus": CheckInfo(
        "bianchi", 1e-6, "anti-self-dual Bianchi identity in U(2) pieces"
    ),
    "bianchi_omega": CheckInfo(
        "bianchi", 1e-6, "Omega-component of the self-dual Bianchi identity"
    ),
    "bianchi_anti": CheckInfo(
        "bianchi", 1e-6, "anti-invariant component of the self-dual Bianchi identity"
    ),
    "contracted_bianchi": CheckInfo(
        "bianchi", 1e-8, "divergence of Ric0 - (s/4) g vanishes"
    ),
    "ricci_form_bianchi": CheckInfo(
        "bianchi", 1e-8, "contracted Bianchi identity for the Ricci form"
    ),
    "delta_w1_formula": CheckInfo(
        "bianchi", 1e-6, "codifferential of the scalar self-dual Weyl piece"
    ),
    "delta_w2_formula": CheckInfo(
        "bianchi", 1e-6, "codifferential of the mixing self-dual Weyl piece"
    ),
    "lem31_gray": CheckInfo(
        "bianchi",
        1e-7,
        "d|nabla Omega|^2 determined by the Weyl piece acting on the gauge",
    ),
    # -- weitzenbock --------------------------------------------------------------
    "bourguignon": CheckInfo(
        "weitzenbock", 1e-6, "general Weitzenboeck formula for nabla Omega"
    ),
    "delta_naom": CheckInfo(
        "weitzenbock",
        1e-8,
        "codifferential of nabla Omega in star-Ricci terms",
    ),
    "laplace_naom": CheckInfo(
        "weitzenbock", 1e-6, "fully expanded rough Laplacian of nabla Omega"
    ),
    "laplace_naom_tail": CheckInfo(
        "weitzenbock",
        None,
        "terms that vanish under the third Gray condition (informational)",
    ),
    "weitzenbock_ucp": CheckInfo(
        "weitzenbock",
        1e-6,
        "unique-continuation Weitzenboeck identity for nabla Omega",
    ),
    # -- section4 -------------------------------------------------------------------
    "m1_formula": CheckInfo(
        "section4", 1e-7, "radial jet form is half d ln |nabla Omega|^2"
    ),
    "gauge_jet_forms": CheckInfo(
        "section4", 1e-7, "remaining 1-forms of the 2-jet of the gauge"
    ),
    "chern_ratio": CheckInfo(
        "section4",
        1e-7,
        "opposite Chern form is 3x the Chern form up to an exact form",
    ),
    "rho0_shape": CheckInfo(
        "section4", 1e-8, "trace-free Ricci form against the opposite 2-form"
    ),
    "opposite_kahler": CheckInfo(
        "section4", 1e-8, "the opposite structure is parallel"
    ),
    "d_omega_bar": CheckInfo(
        "section4", 1e-8, "the opposite fundamental form is closed"
    ),
    "ricci_shape": CheckInfo(
        "section4", 1e-8, "Ricci tensor is (s/2) times the surface metric"
    ),
    # -- chern ------------------------------------------------------------------------
    "chern_closed": CheckInfo("chern", 1e-8, "the canonical Chern form is closed"),
    "chern_gamma_i_family": CheckInfo(
        "chern", 1e-7, "opposite Chern form is (s/2) times the surface 2-form"
    ),
    "chern_gamma_j_family": CheckInfo(
        "chern",
        1e-7,
        "Chern form is (s/2 + |nabla Omega|^2/4) times the surface 2-form",
    ),
}

#: checks that need a gauge frame (skipped on Kahler-like points)
GAUGE_CHECKS = {
    "nabla_omega_gauge",
    "nabla_phi_gauge",
    "norm_4a2",
    "ricci_id_phi_1",
    "ricci_id_phi_2",
    "db_identity",
    "lem31_gray",
    "m1_formula",
    "gauge_jet_forms",
    "chern_ratio",
    "rho0_shape",
    "opposite_kahler",
    "d_omega_bar",
    "ricci_shape",
    "chern_closed",
    "chern_gamma_i_family",
    "chern_gamma_j_family",
}


def tolerance_table(scale: float = 1.0, overrides: dict | None = None) -> dict:
    table = {}
    for name, info in CATALOGUE.items():
        if info.tol is None:
            table[name] = None
        else:
            table[name] = info.tol * scale
    for name, tol in (overrides or {}).items():
        if name not in table:
            raise KeyError(f"unknown identity {name!r} in tolerance overrides")
        table[name] = float(tol)
    return table


def evaluate_point(
    geom: HermitianGeometry, groups: list[str]
) -> tuple[dict[str, float], dict[str, float], list[str]]:
    """Evaluate the requested check groups at one point.

    Returns (residuals, scalar diagnostics, names skipped for lack of a
    gauge).  The compat group always runs.
    """
    groups = list(dict.fromkeys(["compat", *groups]))
    residuals: dict[str, float] = {}
    skipped: list[str] = []

    residuals.update(H.compat_residuals(geom))

    gf = None
    gauge_failed = False
    need_gauge = any(g in groups for g in ("u2", "bianchi", "section4", "chern"))
    if need_gauge:
        try:
            gf = H.gauge_frame(geom)
        except GaugeDegenerate:
            gauge_failed = True

    if "gray" in groups:
        residuals.update(H.gray_residuals(geom))

    if "u2" in groups:
        u2 = H.u2_decompose(geom, gf)
        residuals["u2_recompose"] = u2.recompose_residual
        wplus3, _ = _sd_blocks(geom.curv_op6(geom.frame), geom.s)
        residuals["wplus_trace"] = float(abs(np.trace(wplus3)))
        residuals.update(H.sstar_residuals(geom))
        residuals["weitzenbock_omega"] = H.weitzenbock_omega_residual(geom)
        residuals["ricci_identity"] = H.ricci_identity_residual(geom)
        residuals.update(H.first_order_residuals(geom))
        if gf is not None:
            residuals.update(H.gauge_residuals(gf))
            residuals.update(H.ricci_identities(gf))

    if "bianchi" in groups:
        residuals.update(H.bianchi_residuals(geom, gf))

    if "weitzenbock" in groups:
        residuals.update(H.weitzenbock_general(geom))
        residuals["weitzenbock_ucp"] = H.weitzenbock_special(geom)

    if "section4" in groups and gf is not None:
        residuals.update(H.section4_identities(gf))

    if "chern" in groups and gf is not None:
        _, closed = H.chern_form(gf)
        residuals.update(closed)
        if "section4" not in groups:
            s4 = H.section4_identities(gf)
            residuals["chern_gamma_i_family"] = s4["chern_gamma_i_family"]
            residuals["chern_gamma_j_family"] = s4["chern_gamma_j_family"]

    if gauge_failed:
        for name in sorted(GAUGE_CHECKS):
            info = CATALOGUE[name]
            if info.group in groups and name not in residuals:
                skipped.append(name)

    scalars = {
        "nabla_omega_sq": geom.nabla_omega_sq,
        "s": geom.s,
        "kappa": geom.kappa0,
        "sstar": geom.sstar,
    }
    return residuals, scalars, skipped


def list_checks() -> str:
    """Human-readable catalogue: identity, group, tolerance, description."""
    lines = [f"{'identity':24} {'group':12} {'tolerance':>10}  description"]
    lines.append("-" * 96)
    for name, info in CATALOGUE.items():
        tol = f"{info.tol:.0e}" if info.tol is not None else "info"
        lines.append(f"{name:24} {info.group:12} {tol:>10}  {info.description}")
    lines.append("-" * 96)
    lines.append(f"{len(CATALOGUE)} identities; conventions {conventions_hash()}")
    return "\n".join(lines)
