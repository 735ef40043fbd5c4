"""Independent finite-difference curvature pipeline.

Everything here differentiates plain metric VALUE evaluations by central
differences; nothing touches the jet engine, so agreement between the two
paths cross-validates both.  Deliberately lower precision than the jets.
"""

from __future__ import annotations

import numpy as np


def fd_gamma(gfun, p, h=1e-4):
    """Christoffel symbols Gamma^k_ij by central differences."""
    p = np.asarray(p, dtype=float)
    g0 = gfun(p)
    gi = np.linalg.inv(g0)
    dg = np.empty((4, 4, 4))
    for m in range(4):
        e = np.zeros(4)
        e[m] = h
        dg[m] = (gfun(p + e) - gfun(p - e)) / (2 * h)
    low = 0.5 * (
        np.einsum("ijl->ijl", dg)
        + np.einsum("jil->ijl", dg)
        - np.einsum("lij->ijl", dg)
    )
    return np.einsum("kl,ijl->kij", gi, low)


def fd_riemann(gfun, p, h=1e-4):
    """(0,4) curvature in the engine's sign convention, by differences."""
    p = np.asarray(p, dtype=float)
    gam = fd_gamma(gfun, p, h)
    dgam = np.empty((4, 4, 4, 4))
    for m in range(4):
        e = np.zeros(4)
        e[m] = h
        dgam[m] = (fd_gamma(gfun, p + e, h) - fd_gamma(gfun, p - e, h)) / (2 * h)
    dpart = np.einsum("imjk->mkij", dgam)
    gg = np.einsum("mip,pjk->mkij", gam, gam)
    combined = dpart + gg
    up = np.einsum("mkij->mkji", combined) - combined
    return np.einsum("ml,mkij->ijkl", gfun(p), up)


def fd_ricci(gfun, p, h=1e-4):
    r4 = fd_riemann(gfun, p, h)
    gi = np.linalg.inv(gfun(p))
    return np.einsum("kl,ikjl->ij", gi, r4)


def fd_scalar(gfun, p, h=1e-4):
    gi = np.linalg.inv(gfun(np.asarray(p, dtype=float)))
    return float(np.einsum("ij,ij->", gi, fd_ricci(gfun, p, h)))


def fd_scalar_richardson(gfun, p, h=1e-3):
    """Scalar curvature with one Richardson extrapolation step."""
    s1 = fd_scalar(gfun, p, h)
    s2 = fd_scalar(gfun, p, h / 2)
    return (4.0 * s2 - s1) / 3.0


def fd_weyl_scalars(gfun, omfun, p, h=1e-4):
    """(s, kappa, sstar) by differences, given value evaluators for g, Omega."""
    p = np.asarray(p, dtype=float)
    g0 = gfun(p)
    gi = np.linalg.inv(g0)
    r4 = fd_riemann(gfun, p, h)
    ric = np.einsum("kl,ikjl->ij", gi, r4)
    s = float(np.einsum("ij,ij->", gi, ric))
    ric0 = ric - 0.25 * s * g0
    g2t = np.einsum("ik,jl->ijkl", g0, g0) - np.einsum("il,jk->ijkl", g0, g0)
    tilde = (
        np.einsum("ik,jl->ijkl", ric0, g0)
        - np.einsum("il,jk->ijkl", ric0, g0)
        + np.einsum("ik,jl->ijkl", g0, ric0)
        - np.einsum("il,jk->ijkl", g0, ric0)
    )
    w = r4 - (s / 12.0) * g2t - 0.5 * tilde
    om = omfun(p)
    pf = om[0, 1] * om[2, 3] - om[0, 2] * om[1, 3] + om[0, 3] * om[1, 2]
    orient = 1.0 if pf > 0 else -1.0
    import itertools

    eps = np.zeros((4, 4, 4, 4))
    for perm in itertools.permutations(range(4)):
        sign = 1.0
        q = list(perm)
        for i in range(4):
            for j in range(i + 1, 4):
                if q[i] > q[j]:
                    sign = -sign
        eps[perm] = sign
    st = orient * np.sqrt(np.linalg.det(g0)) * eps
    # compose W with star: (W o st)_ijkl = 1/2 W_ijmn g^mp g^nq st_pqkl
    w_up = np.einsum("ijmn,mp,nq->ijpq", w, gi, gi)
    w_star = 0.5 * np.einsum("ijpq,pqkl->ijkl", w_up, st)
    wplus = 0.5 * (w + w_star)
    om_up = np.einsum("ik,jl,kl->ij", gi, gi, om)
    wpo = 0.5 * np.einsum("ijkl,kl->ij", wplus, om_up)
    kappa = 3.0 * 0.5 * float(np.einsum("ij,ij->", wpo, om_up))
    sstar = (2.0 * kappa + s) / 3.0
    return s, kappa, sstar
