"""Truncated multivariate Taylor arithmetic (jets) over the eight chart variables.

A ``JetValue`` holds an array of jets: ``coeffs`` has shape ``(*shape, n)``
where ``n`` is the size of the coefficient basis. Scalars have ``shape == ()``.
Coefficients are Taylor coefficients, i.e. d^alpha f / alpha!.

Operands with different truncation orders are projected to the common smaller
order before combining; projection is exact.
"""

import math
from collections.abc import Callable, Sequence
from typing import Union

import numpy as np

from finsler_lab.errors import DivisionNearZero, OrderExceeded, SqrtDomain
from finsler_lab.jets.basis import DIM, JetBasis, MultiIndex, TruncationOrder, jet_basis
from finsler_lab.jets.point import AnyPoint

# Relative conditioning threshold for division, roots and sign extraction
EPS_DIV = 1e-10

Operand = Union["JetValue", float, int, np.ndarray]

# reserved einsum letter for the coefficient / pair axis
_COEF = "Z"

# floats per block of gathered pair products
_CHUNK_ELEMS = 1 << 22


class JetValue:
    """An array of truncated Taylor expansions at one chart point."""

    __slots__ = ("coeffs", "basis", "point")

    # make numpy defer to the reflected operators
    __array_ufunc__ = None

    def __init__(self, coeffs: np.ndarray, basis: JetBasis, point: AnyPoint) -> None:
        if coeffs.shape[-1] != basis.size:
            raise ValueError(
                f"Coefficient axis has length {coeffs.shape[-1]}, basis needs {basis.size}"
            )
        self.coeffs = coeffs
        self.basis = basis
        self.point = point

    # -- construction -----------------------------------------------------

    @classmethod
    def zeros(
        cls, shape: tuple[int, ...], order: TruncationOrder, point: AnyPoint
    ) -> "JetValue":
        basis = jet_basis(order)
        return cls(np.zeros((*shape, basis.size)), basis, point)

    @classmethod
    def constant(
        cls, value: float | np.ndarray, order: TruncationOrder, point: AnyPoint
    ) -> "JetValue":
        value = np.asarray(value, dtype=float)
        out = cls.zeros(value.shape, order, point)
        out.coeffs[..., 0] = value
        return out

    def _new(self, coeffs: np.ndarray, basis: JetBasis | None = None) -> "JetValue":
        return JetValue(coeffs, basis or self.basis, self.point)

    # -- inspection -------------------------------------------------------

    @property
    def order(self) -> TruncationOrder:
        return self.basis.order

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(self.coeffs.shape[:-1])

    @property
    def ndim(self) -> int:
        return self.coeffs.ndim - 1

    @property
    def value(self) -> np.ndarray:
        """Values at the base point (the zero-index coefficients)."""
        return self.coeffs[..., 0].copy()

    def __float__(self) -> float:
        if self.shape != ():
            raise TypeError(f"Cannot convert jet array of shape {self.shape} to float")
        return float(self.coeffs[0])

    def __getitem__(self, key: object) -> "JetValue":
        if not isinstance(key, tuple):
            key = (key,)
        if any(k is Ellipsis for k in key):
            # keep the coefficient axis out of the ellipsis
            key = (*key, slice(None))
        return self._new(self.coeffs[key])

    def __repr__(self) -> str:
        return f"JetValue(shape={self.shape}, order={self.order}, value={self.value!r})"

    def partial(self, idx: MultiIndex) -> np.ndarray:
        """d^idx f at the base point."""
        i = self.basis.index_of(idx)
        return self.coeffs[..., i] * self.basis.factorials[i]

    def magnitude(self) -> np.ndarray:
        """Scale of f near the point: max(|f|, |df_k| * max(1, |z_k|)) per element.

        For a batch the coordinate factor is the largest over the batch.
        """
        first = self.basis.first_order
        z = np.maximum(1.0, np.abs(self.point.coordinates))
        if z.ndim == 2:
            z = z.max(axis=0)
        scale = np.abs(self.coeffs[..., 0])
        for var in range(2 * DIM):
            if first[var] >= 0:
                scale = np.maximum(scale, np.abs(self.coeffs[..., first[var]]) * z[var])
        return scale

    # -- alignment --------------------------------------------------------

    def truncate(self, order: TruncationOrder) -> "JetValue":
        if order == self.order:
            return self
        keep = self.basis.projection(order)
        return self._new(self.coeffs[..., keep], jet_basis(order))

    def _align(self, other: "JetValue") -> tuple["JetValue", "JetValue"]:
        if other.point is not self.point and other.point != self.point:
            raise ValueError(f"Jets at different points: {self.point} vs {other.point}")
        if other.order == self.order:
            return self, other
        common = self.order.meet(other.order)
        return self.truncate(common), other.truncate(common)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: Operand) -> "JetValue":
        if isinstance(other, JetValue):
            a, b = self._align(other)
            return a._new(a.coeffs + b.coeffs)
        out = self.coeffs.copy()
        out = np.broadcast_to(out, (*np.broadcast_shapes(self.shape, np.shape(other)),
                                    self.basis.size)).copy()
        out[..., 0] += other
        return self._new(out)

    __radd__ = __add__

    def __neg__(self) -> "JetValue":
        return self._new(-self.coeffs)

    def __sub__(self, other: Operand) -> "JetValue":
        return self + (-other)

    def __rsub__(self, other: Operand) -> "JetValue":
        return (-self) + other

    def __mul__(self, other: Operand) -> "JetValue":
        if isinstance(other, JetValue):
            a, b = self._align(other)
            basis = a.basis
            return a._new(_pair_product(basis, np.multiply, a.coeffs, b.coeffs))
        return self._new(self.coeffs * np.asarray(other, dtype=float)[..., None])

    __rmul__ = __mul__

    def __truediv__(self, other: Operand) -> "JetValue":
        if isinstance(other, JetValue):
            return self * other.reciprocal()
        other = np.asarray(other, dtype=float)
        if np.any(other == 0.0):
            raise DivisionNearZero("Division of a jet by zero")
        return self._new(self.coeffs / other[..., None])

    def __rtruediv__(self, other: Operand) -> "JetValue":
        return self.reciprocal() * other

    def __pow__(self, p: float) -> "JetValue":
        if isinstance(p, int | np.integer) or float(p).is_integer():
            n = int(p)
            if n >= 0:
                return self._int_power(n)
            return self.reciprocal()._int_power(-n)
        return self.power(float(p))

    def _int_power(self, n: int) -> "JetValue":
        result = JetValue.constant(np.ones(self.shape), self.order, self.point)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- analytic functions -----------------------------------------------

    def compose(self, series: Callable[[np.ndarray, int], np.ndarray]) -> "JetValue":
        """f(self) from the univariate Taylor coefficients of f at the values.

        ``series(a0, K)`` returns an array of shape ``(K + 1, *a0.shape)`` with
        f^(k)(a0)/k!. The increment h = self - a0 is nilpotent of degree
        max_x_order + max_v_order, so K = that degree is exact.
        """
        a0 = self.value
        K = self.order.total
        c = np.asarray(series(a0, K), dtype=float)
        h = self._new(self.coeffs.copy())
        h.coeffs[..., 0] = 0.0
        result = JetValue.constant(c[K], self.order, self.point)
        for k in range(K - 1, -1, -1):
            result = result * h + c[k]
        return result

    def _check_nonzero(self, eps: float, what: str) -> None:
        a0 = np.abs(self.value)
        if np.any(a0 <= eps * self.magnitude()):
            raise DivisionNearZero(f"{what}: value {self.value} below threshold")

    def reciprocal(self, eps: float = EPS_DIV) -> "JetValue":
        self._check_nonzero(eps, "reciprocal")
        return self.compose(_reciprocal_series)

    def power(self, p: float, eps: float = EPS_DIV) -> "JetValue":
        """Real power; requires positive values."""
        if np.any(self.value <= eps * self.magnitude()):
            raise SqrtDomain(f"power {p} of non-positive value {self.value}")
        return self.compose(lambda a0, K: _power_series(a0, K, p))

    def sqrt(self, eps: float = EPS_DIV) -> "JetValue":
        return self.power(0.5, eps)

    def signed_abs(self, eps: float = EPS_DIV) -> "JetValue":
        """|f| as sign(f(p)) * f; valid where the sign is locally constant."""
        self._check_nonzero(eps, "signed_abs")
        return self * np.sign(self.value)

    def exp(self) -> "JetValue":
        return self.compose(_exp_series)

    def log(self, eps: float = EPS_DIV) -> "JetValue":
        if np.any(self.value <= eps * self.magnitude()):
            raise SqrtDomain(f"log of non-positive value {self.value}")
        return self.compose(_log_series)

    def sin(self) -> "JetValue":
        return self.compose(lambda a0, K: _trig_series(a0, K, 0.0))

    def cos(self) -> "JetValue":
        return self.compose(lambda a0, K: _trig_series(a0, K, 0.5 * math.pi))

    # -- differentiation --------------------------------------------------

    def d(self, var: int) -> "JetValue":
        """Partial derivative in chart variable ``var`` (0-3 x, 4-7 xdot)."""
        target, source, factor = self.basis.derivative_map(var)
        return self._new(self.coeffs[..., source] * factor, target)

    def d_x(self, k: int) -> "JetValue":
        return self.d(k)

    def d_v(self, k: int) -> "JetValue":
        return self.d(DIM + k)

    def grad_x(self) -> "JetValue":
        """Stack of d/dx^k along a new trailing tensor axis."""
        return stack([self.d_x(k) for k in range(DIM)], axis=self.ndim)

    def grad_v(self) -> "JetValue":
        """Stack of d/dxdot^k along a new trailing tensor axis."""
        return stack([self.d_v(k) for k in range(DIM)], axis=self.ndim)

    def euler_value(self) -> np.ndarray:
        """xdot^k d/dxdot^k f at the base point."""
        first = self.basis.first_order
        if first[DIM] < 0:
            raise OrderExceeded(f"Euler operator needs an xdot order, have {self.order}")
        v = self.point.v_array
        if v.ndim == 2:
            # batch axis leads the tensor shape
            v = v.T.reshape(DIM, -1, *([1] * max(self.ndim - 1, 0)))
        out = np.zeros(self.shape)
        for k in range(DIM):
            out = out + v[k] * self.coeffs[..., first[DIM + k]]
        return out

    # -- tensor structure -------------------------------------------------

    def sum(self, axis: int | tuple[int, ...]) -> "JetValue":
        return self._new(self.coeffs.sum(axis=_tensor_axes(axis, self.ndim)))

    def transpose(self, *axes: int) -> "JetValue":
        return self._new(np.transpose(self.coeffs, (*axes, self.ndim)))

    def swapaxes(self, a1: int, a2: int) -> "JetValue":
        return self._new(np.swapaxes(self.coeffs, a1 % self.ndim, a2 % self.ndim))


def _tensor_axes(axis: int | tuple[int, ...], ndim: int) -> int | tuple[int, ...]:
    if isinstance(axis, tuple):
        return tuple(a % ndim for a in axis)
    return axis % ndim


def _pair_product(
    basis: JetBasis,
    combine: Callable[[np.ndarray, np.ndarray], np.ndarray],
    a: np.ndarray,
    b: np.ndarray,
) -> np.ndarray:
    """Truncated Cauchy product: sum combine(a_p, b_q) into coefficient p + q.

    ``combine`` receives both operands gathered along a trailing pair axis and
    must keep that axis last. Pairs are processed in chunks to bound memory.
    """
    n_pairs = len(basis.pair_a)
    lead = max(math.prod(a.shape[:-1]), math.prod(b.shape[:-1]), 1)
    chunk = max(64, _CHUNK_ELEMS // lead)
    out: np.ndarray | None = None
    for start in range(0, n_pairs, chunk):
        stop = min(start + chunk, n_pairs)
        prod = combine(a[..., basis.pair_a[start:stop]], b[..., basis.pair_b[start:stop]])
        reduce = basis.reduce if stop - start == n_pairs else basis.reduce[:, start:stop]
        part = reduce @ prod.reshape(-1, stop - start).T
        part = np.asarray(part).T.reshape(*prod.shape[:-1], basis.size)
        out = part if out is None else out + part
    assert out is not None
    return out


def stack(jets: Sequence[JetValue], axis: int = 0) -> JetValue:
    """Stack jets along a new tensor axis, broadcasting their shapes."""
    if not jets:
        raise ValueError("Nothing to stack")
    order = jets[0].order
    for j in jets[1:]:
        order = order.meet(j.order)
    parts = [j.truncate(order) for j in jets]
    shape = np.broadcast_shapes(*(p.shape for p in parts))
    size = parts[0].basis.size
    if axis < 0:
        axis += len(shape) + 1
    coeffs = [np.broadcast_to(p.coeffs, (*shape, size)) for p in parts]
    return JetValue(np.stack(coeffs, axis=axis), parts[0].basis, parts[0].point)


def jet_einsum(subscripts: str, *operands: JetValue | np.ndarray | float) -> JetValue:
    """Einstein summation over tensor axes where at most two operands are jets.

    Constant operands (plain arrays) take part in the contraction directly;
    two jet operands are multiplied with the truncated Cauchy product.
    """
    inputs, output = subscripts.replace(" ", "").split("->")
    terms = inputs.split(",")
    if len(terms) != len(operands):
        raise ValueError(f"{subscripts!r} expects {len(terms)} operands, got {len(operands)}")
    if _COEF in subscripts:
        raise ValueError(f"Index letter {_COEF!r} is reserved")

    jet_pos = [i for i, op in enumerate(operands) if isinstance(op, JetValue)]
    if not jet_pos or len(jet_pos) > 2:
        raise ValueError("jet_einsum needs one or two jet operands")

    jets = [operands[i] for i in jet_pos]
    assert all(isinstance(j, JetValue) for j in jets)
    first: JetValue = jets[0]  # type: ignore[assignment]
    if len(jets) == 2:
        a, b = first._align(jets[1])  # type: ignore[arg-type]
        consts = {
            i: np.asarray(op, dtype=float) for i, op in enumerate(operands) if i not in jet_pos
        }
        new_terms = [t + _COEF if i in jet_pos else t for i, t in enumerate(terms)]
        expr = ",".join(new_terms) + "->" + output + _COEF

        def combine(ga: np.ndarray, gb: np.ndarray) -> np.ndarray:
            arrays = [
                ga if i == jet_pos[0] else gb if i == jet_pos[1] else consts[i]
                for i in range(len(operands))
            ]
            return np.einsum(expr, *arrays, optimize=True)

        return JetValue(_pair_product(a.basis, combine, a.coeffs, b.coeffs), a.basis, a.point)

    arrays = [
        first.coeffs if i == jet_pos[0] else np.asarray(op, dtype=float)
        for i, op in enumerate(operands)
    ]
    new_terms = [t + _COEF if i == jet_pos[0] else t for i, t in enumerate(terms)]
    out = np.einsum(",".join(new_terms) + "->" + output + _COEF, *arrays, optimize=True)
    return JetValue(out, first.basis, first.point)


# -- univariate Taylor coefficient generators -----------------------------


def _reciprocal_series(a0: np.ndarray, K: int) -> np.ndarray:
    return np.stack([(-1.0) ** k / a0 ** (k + 1) for k in range(K + 1)])


def _power_series(a0: np.ndarray, K: int, p: float) -> np.ndarray:
    coeffs = []
    binom = 1.0
    for k in range(K + 1):
        coeffs.append(binom * a0 ** (p - k))
        binom *= (p - k) / (k + 1)
    return np.stack(coeffs)


def _exp_series(a0: np.ndarray, K: int) -> np.ndarray:
    e = np.exp(a0)
    return np.stack([e / math.factorial(k) for k in range(K + 1)])


def _log_series(a0: np.ndarray, K: int) -> np.ndarray:
    coeffs = [np.log(a0)]
    for k in range(1, K + 1):
        coeffs.append((-1.0) ** (k + 1) / (k * a0**k))
    return np.stack(coeffs)


def _trig_series(a0: np.ndarray, K: int, phase: float) -> np.ndarray:
    # sin(a0 + phase + k pi/2) / k!
    return np.stack(
        [np.sin(a0 + phase + 0.5 * math.pi * k) / math.factorial(k) for k in range(K + 1)]
    )
