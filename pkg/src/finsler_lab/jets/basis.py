"""Truncation orders, multi-indices and the precomputed coefficient enumeration.

A jet over the eight chart variables (x^0..x^3, xdot^0..xdot^3) stores Taylor
coefficients for every multi-index whose x-part has total degree <= max_x_order
and whose xdot-part has total degree <= max_v_order. The x-part and v-part are
each enumerated in graded order; the full index is ``ix * n_v + iv`` so the
zero multi-index sits at position 0.
"""

import functools
import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

from finsler_lab.errors import OrderExceeded

DIM = 4


@dataclass(frozen=True)
class TruncationOrder:
    """Caps on the total x-derivative and xdot-derivative degree of a jet."""

    max_x_order: int = 3
    max_v_order: int = 6

    def __post_init__(self) -> None:
        if self.max_x_order < 0 or self.max_v_order < 0:
            raise ValueError(f"Truncation orders must be non-negative, got {self}")

    def bumped(self, dx: int = 1, dv: int = 1) -> "TruncationOrder":
        return TruncationOrder(self.max_x_order + dx, self.max_v_order + dv)

    def meet(self, other: "TruncationOrder") -> "TruncationOrder":
        """Largest order contained in both."""
        return TruncationOrder(
            min(self.max_x_order, other.max_x_order),
            min(self.max_v_order, other.max_v_order),
        )

    def contains(self, other: "TruncationOrder") -> bool:
        return (
            other.max_x_order <= self.max_x_order and other.max_v_order <= self.max_v_order
        )

    @property
    def total(self) -> int:
        return self.max_x_order + self.max_v_order


class MultiIndex(NamedTuple):
    """Derivative degrees in the x and xdot variable groups."""

    x_degrees: tuple[int, int, int, int] = (0, 0, 0, 0)
    v_degrees: tuple[int, int, int, int] = (0, 0, 0, 0)

    @classmethod
    def of(cls, x: tuple[int, ...] = (), v: tuple[int, ...] = ()) -> "MultiIndex":
        """Build from variable lists, e.g. ``MultiIndex.of(v=(0, 0))`` for d^2/d(xdot^0)^2."""
        xd = [0] * DIM
        vd = [0] * DIM
        for k in x:
            xd[k] += 1
        for k in v:
            vd[k] += 1
        return cls(tuple(xd), tuple(vd))  # type: ignore[arg-type]

    @property
    def x_total(self) -> int:
        return sum(self.x_degrees)

    @property
    def v_total(self) -> int:
        return sum(self.v_degrees)

    def factorial(self) -> int:
        return math.prod(math.factorial(d) for d in (*self.x_degrees, *self.v_degrees))


def _graded_exponents(k: int) -> np.ndarray:
    """All exponent 4-tuples with total degree <= k, graded then lexicographic."""
    rows = [e for e in itertools.product(range(k + 1), repeat=DIM) if sum(e) <= k]
    rows.sort(key=lambda e: (sum(e), tuple(-d for d in e)))
    return np.array(rows, dtype=np.int64).reshape(-1, DIM)


class _GroupTable:
    """Enumeration and pair table for one 4-variable group truncated at degree k."""

    def __init__(self, k: int) -> None:
        self.k = k
        self.exps = _graded_exponents(k)
        self.size = len(self.exps)
        self._radix = k + 1
        self._lookup = np.full(self._radix**DIM, -1, dtype=np.int64)
        self._lookup[self._encode(self.exps)] = np.arange(self.size)

        # pairs (a, b) whose exponent sum stays inside the truncation
        total = self.exps.sum(axis=1)
        ok = (total[:, None] + total[None, :]) <= k
        ia, ib = np.nonzero(ok)
        self.pair_a = ia
        self.pair_b = ib
        self.pair_c = self.index_of(self.exps[ia] + self.exps[ib])

    def _encode(self, exps: np.ndarray) -> np.ndarray:
        code = np.zeros(len(exps), dtype=np.int64)
        for d in range(DIM):
            code = code * self._radix + exps[:, d]
        return code

    def index_of(self, exps: np.ndarray) -> np.ndarray:
        exps = np.asarray(exps, dtype=np.int64).reshape(-1, DIM)
        if exps.size and (exps.min() < 0 or exps.sum(axis=1).max() > self.k):
            raise OrderExceeded(f"Exponents outside degree {self.k}")
        return self._lookup[self._encode(exps)]


@functools.lru_cache(maxsize=None)
def _group(k: int) -> _GroupTable:
    return _GroupTable(k)


class JetBasis:
    """Coefficient layout, multiplication table and derivative maps for one order."""

    def __init__(self, order: TruncationOrder) -> None:
        self.order = order
        self._gx = _group(order.max_x_order)
        self._gv = _group(order.max_v_order)
        nx, nv = self._gx.size, self._gv.size
        self.size = nx * nv

        ex = np.repeat(self._gx.exps, nv, axis=0)
        ev = np.tile(self._gv.exps, (nx, 1))
        self.exps = np.concatenate([ex, ev], axis=1)
        self.degree = self.exps.sum(axis=1)

        gx, gv = self._gx, self._gv
        self.pair_a = (gx.pair_a[:, None] * nv + gv.pair_a[None, :]).ravel()
        self.pair_b = (gx.pair_b[:, None] * nv + gv.pair_b[None, :]).ravel()
        pair_c = (gx.pair_c[:, None] * nv + gv.pair_c[None, :]).ravel()
        n_pairs = len(pair_c)
        # (size, n_pairs) summation matrix of the Cauchy product
        self.reduce = sp.csc_matrix(
            (np.ones(n_pairs), (pair_c, np.arange(n_pairs))), shape=(self.size, n_pairs)
        )
        self.factorials = np.array(
            [math.prod(math.factorial(int(d)) for d in row) for row in self.exps], dtype=float
        )

    def index_of(self, idx: MultiIndex) -> int:
        if idx.x_total > self.order.max_x_order or idx.v_total > self.order.max_v_order:
            raise OrderExceeded(f"Multi-index {idx} outside truncation {self.order}")
        ix = int(self._gx.index_of(np.array(idx.x_degrees))[0])
        iv = int(self._gv.index_of(np.array(idx.v_degrees))[0])
        return ix * self._gv.size + iv

    def indices_of(self, exps: np.ndarray) -> np.ndarray:
        """Flat indices of an (m, 8) exponent array, all assumed inside the order."""
        ix = self._gx.index_of(exps[:, :DIM])
        iv = self._gv.index_of(exps[:, DIM:])
        return ix * self._gv.size + iv

    @functools.cached_property
    def first_order(self) -> np.ndarray:
        """Flat indices of the eight unit multi-indices (-1 where truncated away)."""
        out = np.full(2 * DIM, -1, dtype=np.int64)
        for var in range(2 * DIM):
            if (var < DIM and self.order.max_x_order == 0) or (
                var >= DIM and self.order.max_v_order == 0
            ):
                continue
            e = np.zeros((1, 2 * DIM), dtype=np.int64)
            e[0, var] = 1
            out[var] = self.indices_of(e)[0]
        return out

    def derivative_map(self, var: int) -> tuple["JetBasis", np.ndarray, np.ndarray]:
        """Target basis, source indices and factors for d/d(variable ``var``)."""
        return _derivative_map(self.order, var)

    def projection(self, target: TruncationOrder) -> np.ndarray:
        """Indices (in this basis) of the coefficients kept by truncation to ``target``."""
        return _projection(self.order, target)


@functools.lru_cache(maxsize=None)
def jet_basis(order: TruncationOrder) -> JetBasis:
    return JetBasis(order)


@functools.lru_cache(maxsize=None)
def _derivative_map(
    order: TruncationOrder, var: int
) -> tuple[JetBasis, np.ndarray, np.ndarray]:
    if var < DIM:
        if order.max_x_order == 0:
            raise OrderExceeded(f"No x-derivative left at truncation {order}")
        lower = TruncationOrder(order.max_x_order - 1, order.max_v_order)
    else:
        if order.max_v_order == 0:
            raise OrderExceeded(f"No xdot-derivative left at truncation {order}")
        lower = TruncationOrder(order.max_x_order, order.max_v_order - 1)
    source = jet_basis(order)
    target = jet_basis(lower)
    shifted = target.exps.copy()
    shifted[:, var] += 1
    return target, source.indices_of(shifted), shifted[:, var].astype(float)


@functools.lru_cache(maxsize=None)
def _projection(order: TruncationOrder, target: TruncationOrder) -> np.ndarray:
    if not order.contains(target):
        raise OrderExceeded(f"Cannot project truncation {order} up to {target}")
    return jet_basis(order).indices_of(jet_basis(target).exps)
