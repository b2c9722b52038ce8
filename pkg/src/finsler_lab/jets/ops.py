"""Seeding, extraction and the named arithmetic entry point."""

import enum

import numpy as np

from finsler_lab.errors import DivisionNearZero, SqrtDomain
from finsler_lab.jets.basis import DIM, MultiIndex, TruncationOrder, jet_basis
from finsler_lab.jets.point import AnyPoint, ChartBatch, ChartPoint
from finsler_lab.jets.value import EPS_DIV, JetValue, Operand


class JetOp(enum.StrEnum):
    add = "add"
    sub = "sub"
    mul = "mul"
    div = "div"
    sqrt = "sqrt"
    pow = "pow"
    signed_abs = "signed_abs"


def seed_chart_jet(pt: ChartPoint, order: TruncationOrder) -> list[JetValue]:
    """One jet per chart variable: x^0..x^3 then xdot^0..xdot^3.

    The jet for variable k has value z_k and a unit first-order coefficient in
    slot k. A variable whose group is truncated at order 0 is a constant.
    """
    basis = jet_basis(order)
    coords = pt.coordinates
    first = basis.first_order
    seeds = []
    for var in range(2 * DIM):
        coeffs = np.zeros(basis.size)
        coeffs[0] = coords[var]
        if first[var] >= 0:
            coeffs[first[var]] = 1.0
        seeds.append(JetValue(coeffs, basis, pt))
    return seeds


def seed_vectors(pt: AnyPoint, order: TruncationOrder) -> tuple[JetValue, JetValue]:
    """The seeds packed as two 4-vectors (x, xdot).

    For a ``ChartBatch`` the xdot vector has shape (n, 4) and x stays shared.
    """
    basis = jet_basis(order)
    first = basis.first_order
    xc = np.zeros((DIM, basis.size))
    xc[:, 0] = pt.x_array
    v = pt.v_array
    vc = np.zeros((*v.shape, basis.size))
    vc[..., 0] = v
    for k in range(DIM):
        if first[k] >= 0:
            xc[k, first[k]] = 1.0
        if first[DIM + k] >= 0:
            vc[..., k, first[DIM + k]] = 1.0
    return JetValue(xc, basis, pt), JetValue(vc, basis, pt)


def seed_batch(x: np.ndarray, v: np.ndarray, order: TruncationOrder) -> tuple[JetValue, JetValue]:
    """Seed one position with many velocities (rows of ``v``)."""
    return seed_vectors(ChartBatch(x, v), order)


def extract_partial(j: JetValue, idx: MultiIndex) -> float:
    """d^idx f at the base point of a scalar jet."""
    return float(j.partial(idx))


def jet_arith(
    a: JetValue, b: Operand | None, op: JetOp | str, eps: float = EPS_DIV
) -> JetValue:
    op = JetOp(op)
    if op is JetOp.sqrt:
        return a.sqrt(eps)
    if op is JetOp.signed_abs:
        return a.signed_abs(eps)
    if b is None:
        raise ValueError(f"Operation {op} needs a second operand")
    if op is JetOp.add:
        return a + b
    if op is JetOp.sub:
        return a - b
    if op is JetOp.mul:
        return a * b
    if op is JetOp.div:
        if isinstance(b, JetValue):
            return a * b.reciprocal(eps)
        if np.any(np.abs(np.asarray(b, dtype=float)) <= eps):
            raise DivisionNearZero(f"Division by {b}")
        return a / b
    # pow
    if isinstance(b, JetValue):
        if b.shape != () or not np.allclose(b.coeffs[1:], 0.0):
            raise SqrtDomain("Jet-valued exponents are not supported")
        b = float(b.value)
    return a ** float(np.asarray(b))
