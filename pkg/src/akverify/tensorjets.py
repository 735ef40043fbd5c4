"""Batched jet tensors: dense arrays of Taylor coefficients.

A `JT` packs a whole tensor of order-`order` jets, all at the same base
point, into one array of shape ``tensor_shape + (70,)``.  Contractions run
as einsums over the tensor axes with the Cauchy-product pairing on the
trailing coefficient axis, which keeps the curvature pipeline fully
vectorized.

`order` tracks through how many total degrees the coefficients are exact;
combining jets takes the minimum and zeroes everything above it, so stale
high-degree coefficients can never leak into downstream identities.
"""

from __future__ import annotations

import string

import numpy as np

from .jets import (
    MAX_ORDER,
    N_COEFFS,
    NVARS,
    INDEX_OF,
    ORDER_MASKS,
    PAIR_FOLD,
    PAIR_I,
    PAIR_J,
    analytic_coeffs,
    deriv_coeffs,
    DepthExhausted,
)


class JT:
    """Tensor of jets sharing one base point (coefficients on the last axis)."""

    __slots__ = ("c", "order")

    def __init__(self, c: np.ndarray, order: int = MAX_ORDER):
        self.c = np.asarray(c, dtype=float)
        if self.c.shape[-1] != N_COEFFS:
            raise ValueError("last axis must hold the 70 jet coefficients")
        self.order = int(order)

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, values: np.ndarray) -> "JT":
        values = np.asarray(values, dtype=float)
        c = np.zeros(values.shape + (N_COEFFS,))
        c[..., 0] = values
        return cls(c)

    @classmethod
    def zeros(cls, shape: tuple[int, ...]) -> "JT":
        return cls(np.zeros(shape + (N_COEFFS,)))

    @classmethod
    def coords(cls, point) -> "JT":
        """Shape (4,) jet vector of the coordinate functions at ``point``."""
        c = np.zeros((NVARS, N_COEFFS))
        for v in range(NVARS):
            c[v, 0] = float(point[v])
            e = [0] * NVARS
            e[v] = 1
            c[v, INDEX_OF[tuple(e)]] = 1.0
        return cls(c)

    @classmethod
    def stack(cls, parts: list["JT"]) -> "JT":
        order = min(p.order for p in parts)
        c = np.stack([p.c for p in parts], axis=0)
        return cls(c * ORDER_MASKS[order], order)

    # -- bookkeeping --------------------------------------------------------

    @property
    def shape(self) -> tuple[int, ...]:
        return self.c.shape[:-1]

    @property
    def value(self) -> np.ndarray:
        return self.c[..., 0]

    def __getitem__(self, idx) -> "JT":
        if not isinstance(idx, tuple):
            idx = (idx,)
        return JT(self.c[idx + (slice(None),)], self.order)

    def transpose(self, *axes) -> "JT":
        return JT(self.c.transpose(tuple(axes) + (len(axes),)), self.order)

    def truncate(self, order: int) -> "JT":
        order = min(order, self.order)
        return JT(self.c * ORDER_MASKS[order], order)

    # -- linear operations --------------------------------------------------

    def _coerce(self, other) -> "JT":
        if isinstance(other, JT):
            return other
        return JT.constant(np.broadcast_to(np.asarray(other, float), self.shape))

    def __add__(self, other):
        o = self._coerce(other)
        order = min(self.order, o.order)
        return JT((self.c + o.c) * ORDER_MASKS[order], order)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        order = min(self.order, o.order)
        return JT((self.c - o.c) * ORDER_MASKS[order], order)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return JT(-self.c, self.order)

    def scale(self, k) -> "JT":
        """Multiply by a plain scalar or by a constant array (broadcast)."""
        k = np.asarray(k, dtype=float)
        return JT(self.c * k[..., None], self.order)

    def __mul__(self, other):
        if isinstance(other, (int, float, np.integer, np.floating)):
            return JT(self.c * float(other), self.order)
        o = self._coerce(other)
        order = min(self.order, o.order)
        return JT(_pairmul(self.c, o.c) * ORDER_MASKS[order], order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.integer, np.floating)):
            return JT(self.c / float(other), self.order)
        return self * self._coerce(other).inv()

    # -- analytic kernels (elementwise) --------------------------------------

    def _analytic(self, kind: str) -> "JT":
        return JT(analytic_coeffs(kind, self.c) * ORDER_MASKS[self.order], self.order)

    def exp(self) -> "JT":
        return self._analytic("exp")

    def ln(self) -> "JT":
        return self._analytic("ln")

    def sqrt(self) -> "JT":
        return self._analytic("sqrt")

    def sin(self) -> "JT":
        return self._analytic("sin")

    def cos(self) -> "JT":
        return self._analytic("cos")

    def inv(self) -> "JT":
        return self._analytic("inv")

    # -- differentiation ------------------------------------------------------

    def deriv(self, var: int) -> "JT":
        if self.order == 0:
            raise DepthExhausted("jet tensor carries no further derivatives")
        o = self.order - 1
        return JT(deriv_coeffs(self.c, var) * ORDER_MASKS[o], o)

    def grad(self) -> "JT":
        """Stack of coordinate derivatives, new axis first."""
        if self.order == 0:
            raise DepthExhausted("jet tensor carries no further derivatives")
        o = self.order - 1
        c = np.stack([deriv_coeffs(self.c, v) for v in range(NVARS)], axis=0)
        return JT(c * ORDER_MASKS[o], o)


def _pairmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a[..., PAIR_I] * b[..., PAIR_J]) @ PAIR_FOLD


_FREE = set(string.ascii_lowercase)


def jcontract(subs: str, A: JT, B: JT) -> JT:
    """einsum over tensor axes with Cauchy products on the coefficient axis.

    ``subs`` is an einsum spec over the tensor indices only, e.g.
    ``'kl,lij->kij'``; the pairing axis is appended internally.
    """
    ins, out = subs.split("->")
    sa, sb = ins.split(",")
    z = sorted(_FREE - set(subs))[0]
    spec = f"{sa}{z},{sb}{z}->{out}{z}"
    prod = np.einsum(spec, A.c[..., PAIR_I], B.c[..., PAIR_J])
    order = min(A.order, B.order)
    return JT((prod @ PAIR_FOLD) * ORDER_MASKS[order], order)


def vcontract(subs: str, values: np.ndarray, B: JT) -> JT:
    """einsum of a plain constant array against a jet tensor."""
    ins, out = subs.split("->")
    sa, sb = ins.split(",")
    z = sorted(_FREE - set(subs))[0]
    spec = f"{sa},{sb}{z}->{out}{z}"
    return JT(np.einsum(spec, values, B.c), B.order)
