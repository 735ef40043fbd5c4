"""Truncated multivariate Taylor arithmetic in four variables.

A jet stores the normalized Taylor coefficients c_alpha = (d^alpha f)/alpha!
of a scalar field at a base point, for every multi-index alpha of total
degree <= 4 (70 coefficients).  Sums, products (degree-truncated Cauchy
products) and compositions with analytic functions then propagate exact
partial derivatives up to total order 4, with only roundoff error.

The module-level tables (`MULTI_INDICES`, pair tables, derivative maps) are
shared with the batched tensor layer in `tensorjets`.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

NVARS = 4
MAX_ORDER = 4

#: all exponent tuples of total degree <= 4, in lexicographic order
MULTI_INDICES: tuple[tuple[int, ...], ...] = tuple(
    sorted(
        e
        for e in itertools.product(range(MAX_ORDER + 1), repeat=NVARS)
        if sum(e) <= MAX_ORDER
    )
)
N_COEFFS = len(MULTI_INDICES)  # C(8,4) = 70
INDEX_OF = {e: i for i, e in enumerate(MULTI_INDICES)}

DEGREES = np.array([sum(e) for e in MULTI_INDICES], dtype=np.int64)
FACTORIALS = np.array(
    [math.prod(math.factorial(k) for k in e) for e in MULTI_INDICES], dtype=float
)

#: ORDER_MASKS[o] zeroes every coefficient of degree > o
ORDER_MASKS = np.stack([(DEGREES <= o).astype(float) for o in range(MAX_ORDER + 1)])


def _build_pair_tables():
    ii, jj, kk = [], [], []
    for a, ea in enumerate(MULTI_INDICES):
        for b, eb in enumerate(MULTI_INDICES):
            ec = tuple(x + y for x, y in zip(ea, eb))
            if sum(ec) <= MAX_ORDER:
                ii.append(a)
                jj.append(b)
                kk.append(INDEX_OF[ec])
    ii = np.array(ii, dtype=np.intp)
    jj = np.array(jj, dtype=np.intp)
    kk = np.array(kk, dtype=np.intp)
    fold = np.zeros((len(kk), N_COEFFS))
    fold[np.arange(len(kk)), kk] = 1.0
    return ii, jj, fold


#: admissible coefficient pairs for the truncated Cauchy product and the
#: 0/1 matrix folding pair products back onto the 70 coefficient slots
PAIR_I, PAIR_J, PAIR_FOLD = _build_pair_tables()


def _build_deriv_tables():
    idx = np.zeros((NVARS, N_COEFFS), dtype=np.intp)
    scale = np.zeros((NVARS, N_COEFFS))
    for v in range(NVARS):
        for i, e in enumerate(MULTI_INDICES):
            shifted = list(e)
            shifted[v] += 1
            shifted = tuple(shifted)
            if sum(shifted) <= MAX_ORDER:
                idx[v, i] = INDEX_OF[shifted]
                scale[v, i] = e[v] + 1
    return idx, scale


DERIV_IDX, DERIV_SCALE = _build_deriv_tables()


class JetError(Exception):
    """Base class for jet arithmetic failures."""


class DomainError(JetError):
    """ln or sqrt applied to a jet with non-positive value."""


class BasePointMismatch(JetError):
    """Two jets anchored at different base points were combined."""


class DepthExhausted(JetError):
    """A derivative of higher order than the jet carries was requested."""


# ---------------------------------------------------------------------------
# coefficient-level kernels, shared with tensorjets (arrays shaped (..., 70))
# ---------------------------------------------------------------------------


def mul_coeffs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Degree-truncated Cauchy product on trailing coefficient axes."""
    return (a[..., PAIR_I] * b[..., PAIR_J]) @ PAIR_FOLD


def deriv_coeffs(c: np.ndarray, var: int) -> np.ndarray:
    """Coefficients of the partial derivative along ``var`` (order drops by 1)."""
    return c[..., DERIV_IDX[var]] * DERIV_SCALE[var]


def compose_coeffs(c: np.ndarray, series: np.ndarray) -> np.ndarray:
    """Evaluate an analytic function on jet coefficients by Horner's scheme.

    ``series[..., k]`` holds f^(k)(u0)/k! for the value part u0 of ``c``;
    the result is sum_k series_k (c - u0)^k, truncated at total degree 4.
    """
    h = c.copy()
    h[..., 0] = 0.0
    out = np.zeros_like(c)
    out[..., 0] = series[..., MAX_ORDER]
    for k in range(MAX_ORDER - 1, -1, -1):
        out = mul_coeffs(out, h)
        out[..., 0] += series[..., k]
    return out


def _series(kind: str, u0: np.ndarray) -> np.ndarray:
    """Taylor coefficients f^(k)(u0)/k!, k = 0..4, for the analytic kernels."""
    u0 = np.asarray(u0, dtype=float)
    s = np.empty(u0.shape + (MAX_ORDER + 1,))
    if kind == "exp":
        e = np.exp(u0)
        for k in range(5):
            s[..., k] = e / math.factorial(k)
    elif kind == "ln":
        if np.any(u0 <= 0.0):
            raise DomainError("ln of a jet with non-positive value")
        s[..., 0] = np.log(u0)
        for k in range(1, 5):
            s[..., k] = (-1.0) ** (k + 1) / (k * u0**k)
    elif kind == "sqrt":
        if np.any(u0 <= 0.0):
            raise DomainError("sqrt of a jet with non-positive value")
        r = np.sqrt(u0)
        binom = [1.0, 0.5, -0.125, 0.0625, -5.0 / 128.0]
        for k in range(5):
            s[..., k] = binom[k] * r / u0**k
    elif kind == "sin":
        sn, cs = np.sin(u0), np.cos(u0)
        cyc = [sn, cs, -sn, -cs]
        for k in range(5):
            s[..., k] = cyc[k % 4] / math.factorial(k)
    elif kind == "cos":
        sn, cs = np.sin(u0), np.cos(u0)
        cyc = [cs, -sn, -cs, sn]
        for k in range(5):
            s[..., k] = cyc[k % 4] / math.factorial(k)
    elif kind == "inv":
        if np.any(u0 == 0.0):
            raise ZeroDivisionError("division by a jet with zero value")
        for k in range(5):
            s[..., k] = (-1.0) ** k / u0 ** (k + 1)
    else:  # pragma: no cover
        raise ValueError(f"unknown analytic kernel {kind!r}")
    return s


def analytic_coeffs(kind: str, c: np.ndarray) -> np.ndarray:
    return compose_coeffs(c, _series(kind, c[..., 0]))


# ---------------------------------------------------------------------------
# the scalar Jet
# ---------------------------------------------------------------------------


class Jet:
    """Order-4 Taylor jet of a scalar field at a fixed base point."""

    __slots__ = ("point", "coeffs", "order")

    def __init__(self, point, coeffs: np.ndarray, order: int = MAX_ORDER):
        self.point = tuple(float(x) for x in point)
        self.coeffs = np.asarray(coeffs, dtype=float)
        if self.coeffs.shape != (N_COEFFS,):
            raise ValueError(f"jet needs {N_COEFFS} coefficients")
        self.order = int(order)

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, point, value: float) -> "Jet":
        c = np.zeros(N_COEFFS)
        c[0] = float(value)
        return cls(point, c)

    # -- bookkeeping ------------------------------------------------------

    @property
    def value(self) -> float:
        return float(self.coeffs[0])

    def coeff(self, alpha) -> float:
        return float(self.coeffs[INDEX_OF[tuple(alpha)]])

    def _wrap(self, coeffs: np.ndarray, order: int) -> "Jet":
        return Jet(self.point, coeffs * ORDER_MASKS[order], order)

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.point != self.point:
                raise BasePointMismatch(
                    f"jets at {self.point} and {other.point} cannot be combined"
                )
            return other
        return Jet.constant(self.point, other)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        order = min(self.order, o.order)
        return self._wrap(self.coeffs + o.coeffs, order)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        order = min(self.order, o.order)
        return self._wrap(self.coeffs - o.coeffs, order)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return Jet(self.point, -self.coeffs, self.order)

    def __mul__(self, other):
        if isinstance(other, (int, float, np.integer, np.floating)):
            return Jet(self.point, self.coeffs * float(other), self.order)
        o = self._coerce(other)
        order = min(self.order, o.order)
        return self._wrap(mul_coeffs(self.coeffs, o.coeffs), order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.integer, np.floating)):
            if float(other) == 0.0:
                raise ZeroDivisionError("division by zero constant")
            return Jet(self.point, self.coeffs / float(other), self.order)
        return self * self._coerce(other).inv()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n):
        return self.powi(n)

    # -- analytic kernels ---------------------------------------------------

    def _analytic(self, kind: str) -> "Jet":
        return self._wrap(analytic_coeffs(kind, self.coeffs), self.order)

    def exp(self) -> "Jet":
        return self._analytic("exp")

    def ln(self) -> "Jet":
        return self._analytic("ln")

    def sqrt(self) -> "Jet":
        return self._analytic("sqrt")

    def sin(self) -> "Jet":
        return self._analytic("sin")

    def cos(self) -> "Jet":
        return self._analytic("cos")

    def inv(self) -> "Jet":
        return self._analytic("inv")

    def powi(self, n: int) -> "Jet":
        if not isinstance(n, int):
            raise TypeError("powi needs an integer exponent")
        if n < 0:
            return self.inv().powi(-n)
        out = Jet.constant(self.point, 1.0)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def deriv(self, var: int) -> "Jet":
        """Jet of the partial derivative along coordinate ``var``."""
        if self.order == 0:
            raise DepthExhausted("jet carries no further derivatives")
        return Jet(
            self.point,
            deriv_coeffs(self.coeffs, var) * ORDER_MASKS[self.order - 1],
            self.order - 1,
        )

    def __repr__(self):  # pragma: no cover
        return f"Jet(point={self.point}, value={self.value:.6g}, order={self.order})"


def seed(point, var: int) -> Jet:
    """Jet of the coordinate function x_var at ``point``."""
    if not 0 <= var < NVARS:
        raise ValueError(f"variable index {var} out of range 0..3")
    c = np.zeros(N_COEFFS)
    c[0] = float(point[var])
    e = [0] * NVARS
    e[var] = 1
    c[INDEX_OF[tuple(e)]] = 1.0
    return Jet(point, c)


def variables(point) -> tuple[Jet, Jet, Jet, Jet]:
    """Seed jets of all four coordinate functions at ``point``."""
    return tuple(seed(point, v) for v in range(NVARS))


def partial(j: Jet, alpha) -> float:
    """Mixed partial derivative d^alpha f extracted from a jet."""
    alpha = tuple(int(a) for a in alpha)
    k = INDEX_OF.get(alpha)
    if k is None:
        raise ValueError(f"multi-index {alpha} exceeds total degree {MAX_ORDER}")
    if DEGREES[k] > j.order:
        raise DepthExhausted(
            f"jet valid to order {j.order}, requested |alpha| = {DEGREES[k]}"
        )
    return float(j.coeffs[k] * FACTORIALS[k])


_UNARY = {"neg", "exp", "ln", "sqrt", "sin", "cos"}
_BINARY = {"add", "sub", "mul", "div"}


def arith(op: str, *args):
    """Dispatch table over the jet operations, mirroring the op names."""
    if op in _BINARY:
        a, b = args
        if op == "add":
            return a + b
        if op == "sub":
            return a - b
        if op == "mul":
            return a * b
        return a / b
    if op in _UNARY:
        (a,) = args
        if op == "neg":
            return -a
        return getattr(a, op)()
    if op == "powi":
        a, n = args
        return a.powi(n)
    raise ValueError(f"unknown jet operation {op!r}")
