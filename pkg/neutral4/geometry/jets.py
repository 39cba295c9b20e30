"""Tensor-valued jets.

A `TensorJet` holds the value of a tensor at a point together with its
first and (optionally) second partial derivatives along the basis e_a. The
derivative axes are always trailing: ``d[..., a] = e_a(value)`` and
``dd[..., a, b] = e_b e_a (value)``. Products, inverses and stacking follow
the Leibniz rule, so algebraic constructions built from jets carry exact
derivatives with them. Each result keeps the lowest order among its inputs.
"""

import string
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Union

import numpy as np

from neutral4.exprdsl.expr import Expr
from neutral4.exprdsl.jet import DIM, evaluate_jet2


@dataclass(frozen=True)
class TensorJet:
    value: np.ndarray
    d: Optional[np.ndarray] = None
    dd: Optional[np.ndarray] = None

    @property
    def order(self) -> int:
        if self.d is None:
            return 0
        return 1 if self.dd is None else 2

    @property
    def shape(self) -> tuple:
        return self.value.shape

    @classmethod
    def constant(cls, value: Union[np.ndarray, Sequence, float], order: int = 2) -> "TensorJet":
        value = np.asarray(value, dtype=float)
        d = np.zeros(value.shape + (DIM,)) if order >= 1 else None
        dd = np.zeros(value.shape + (DIM, DIM)) if order >= 2 else None
        return cls(value, d, dd)

    def truncate(self, order: int) -> "TensorJet":
        return TensorJet(
            self.value,
            self.d if order >= 1 else None,
            self.dd if order >= 2 else None,
        )

    def grad(self) -> "TensorJet":
        """The jet of ``d``: value gains a trailing derivative index, order drops by one."""
        if self.d is None:
            raise ValueError("a jet of order 0 has no derivative")
        return TensorJet(self.d, self.dd, None)

    def __getitem__(self, index) -> "TensorJet":
        if not isinstance(index, tuple):
            index = (index,)
        return TensorJet(
            self.value[index],
            None if self.d is None else self.d[index],
            None if self.dd is None else self.dd[index],
        )

    def _combine(self, other: "TensorJet", sign: float) -> "TensorJet":
        order = min(self.order, other.order)
        d = self.d + sign * other.d if order >= 1 else None  # type: ignore[operator]
        dd = self.dd + sign * other.dd if order >= 2 else None  # type: ignore[operator]
        return TensorJet(self.value + sign * other.value, d, dd)

    def __add__(self, other: "TensorJet") -> "TensorJet":
        return self._combine(other, 1.0)

    def __sub__(self, other: "TensorJet") -> "TensorJet":
        return self._combine(other, -1.0)

    def __neg__(self) -> "TensorJet":
        return self.scale(-1.0)

    def scale(self, factor: float) -> "TensorJet":
        return TensorJet(
            factor * self.value,
            None if self.d is None else factor * self.d,
            None if self.dd is None else factor * self.dd,
        )

    def transpose(self, *axes: int) -> "TensorJet":
        """Permute value axes; derivative axes stay last."""
        n = self.value.ndim
        axes = axes or tuple(reversed(range(n)))
        return TensorJet(
            self.value.transpose(axes),
            None if self.d is None else self.d.transpose(tuple(axes) + (n,)),
            None if self.dd is None else self.dd.transpose(tuple(axes) + (n, n + 1)),
        )

    @property
    def T(self) -> "TensorJet":
        return self.transpose()

    def __matmul__(self, other: "TensorJet") -> "TensorJet":
        left = "ij" if self.value.ndim == 2 else "j"
        right = "jk" if other.value.ndim == 2 else "j"
        out = left.replace("j", "") + right.replace("j", "")
        return einsum(f"{left},{right}->{out}", self, other)


def _free_letters(spec: str, count: int) -> str:
    letters = [c for c in string.ascii_letters if c not in spec]
    return "".join(letters[:count])


def einsum(spec: str, x: TensorJet, y: TensorJet) -> TensorJet:
    """Bilinear contraction of two jets with the Leibniz rule on derivatives."""
    inputs, out = spec.split("->")
    xs, ys = inputs.split(",")
    p, q = _free_letters(spec, 2)
    value = np.einsum(spec, x.value, y.value)
    order = min(x.order, y.order)
    d = dd = None
    if order >= 1:
        d = np.einsum(f"{xs}{p},{ys}->{out}{p}", x.d, y.value) + np.einsum(
            f"{xs},{ys}{p}->{out}{p}", x.value, y.d
        )
    if order >= 2:
        cross = np.einsum(f"{xs}{p},{ys}{q}->{out}{p}{q}", x.d, y.d)
        dd = (
            np.einsum(f"{xs}{p}{q},{ys}->{out}{p}{q}", x.dd, y.value)
            + (cross + np.swapaxes(cross, -1, -2))
            + np.einsum(f"{xs},{ys}{p}{q}->{out}{p}{q}", x.value, y.dd)
        )
    return TensorJet(value, d, dd)


def contract(spec: str, x: TensorJet, array: np.ndarray) -> TensorJet:
    """Contract a jet with a constant array (structure constants, fixed bases)."""
    return einsum(spec, x, TensorJet.constant(array, x.order))


def inverse(m: TensorJet) -> TensorJet:
    mi = np.linalg.inv(m.value)
    d = dd = None
    if m.order >= 1:
        d = -np.einsum("ij,jky,kl->ily", mi, m.d, mi)
    if m.order >= 2:
        t1 = np.einsum("ij,jky,kl,lmz,mn->inyz", mi, m.d, mi, m.d, mi)
        dd = t1 + np.swapaxes(t1, -1, -2) - np.einsum("ij,jkyz,kl->ilyz", mi, m.dd, mi)
    return TensorJet(mi, d, dd)


def stack(jets: Sequence[TensorJet], axis: int = 0) -> TensorJet:
    """Stack along a value axis (``axis=-1`` makes matrix columns from vectors)."""
    n = jets[0].value.ndim
    axis = axis if axis >= 0 else n + 1 + axis
    order = min(j.order for j in jets)
    value = np.stack([j.value for j in jets], axis=axis)
    d = np.stack([j.d for j in jets], axis=axis) if order >= 1 else None
    dd = np.stack([j.dd for j in jets], axis=axis) if order >= 2 else None
    return TensorJet(value, d, dd)


def scalar_times(s: TensorJet, x: TensorJet) -> TensorJet:
    """Product of a scalar jet (shape ()) and a tensor jet."""
    letters = string.ascii_lowercase[: x.value.ndim]
    return einsum(f",{letters}->{letters}", s, x)


def from_exprs(
    exprs, point: Sequence[float], params: Dict[str, float], order: int = 2
) -> TensorJet:
    """Evaluate a nested sequence of expressions to a jet of the same shape."""
    array = np.asarray(exprs, dtype=object)
    value = np.empty(array.shape)
    d = np.empty(array.shape + (DIM,))
    dd = np.empty(array.shape + (DIM, DIM))
    for index in np.ndindex(array.shape):
        expr = array[index]
        assert isinstance(expr, Expr), f"not an expression: {expr!r}"
        jet = evaluate_jet2(expr, point, params)
        value[index] = jet.value
        d[index] = jet.gradient
        dd[index] = jet.hessian
    return TensorJet(value, d, dd).truncate(order)
