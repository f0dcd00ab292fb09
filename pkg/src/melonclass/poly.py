"""Exact dense integer polynomial arithmetic and basis-tagged class polynomials.

Coefficients are stored ascending by degree: index k holds the coefficient
of x**k.  The zero polynomial is the empty tuple.  Everything here is exact
arbitrary-precision integer arithmetic; no floats anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator


class Basis(Enum):
    """Variable bases for class polynomials: T = S + 1, L = S + 2."""

    S = 0
    T = 1
    L = 2

    @property
    def offset(self) -> int:
        """Offset of this basis variable relative to S."""
        return self.value


class IntPoly:
    """Immutable integer polynomial in one variable, canonical dense form.

    Canonical form: no trailing zero coefficients, so the last entry is
    nonzero unless the polynomial is zero (empty coefficient tuple).
    """

    __slots__ = ("coeffs",)

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int] = ()) -> None:
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("IntPoly is immutable")

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> int:
        """Coefficient of degree k (0 beyond the stored range)."""
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0

    def __iter__(self) -> Iterator[int]:
        return iter(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, IntPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "IntPoly") -> "IntPoly":
        return add(self, other)

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return add(self, other.__neg__())

    def __neg__(self) -> "IntPoly":
        return IntPoly(-c for c in self.coeffs)

    def __mul__(self, other: "IntPoly | int") -> "IntPoly":
        if isinstance(other, int):
            return IntPoly(c * other for c in self.coeffs)
        return mul(self, other)

    def __rmul__(self, other: int) -> "IntPoly":
        return self.__mul__(other)

    def __pow__(self, k: int) -> "IntPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = ONE
        base = self
        while k:
            if k & 1:
                result = mul(result, base)
            base = mul(base, base)
            k >>= 1
        return result

    def __repr__(self) -> str:
        return f"IntPoly({list(self.coeffs)!r})"


ZERO = IntPoly()
ONE = IntPoly((1,))
X = IntPoly((0, 1))


def add(p: IntPoly, q: IntPoly) -> IntPoly:
    """Coefficientwise sum, canonical."""
    a, b = p.coeffs, q.coeffs
    if len(a) < len(b):
        a, b = b, a
    cs = list(a)
    for i, c in enumerate(b):
        cs[i] += c
    return IntPoly(cs)


def mul(p: IntPoly, q: IntPoly) -> IntPoly:
    """Convolution product, canonical."""
    a, b = p.coeffs, q.coeffs
    if not a or not b:
        return ZERO
    cs = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                cs[i + j] += ai * bj
    return IntPoly(cs)


def shift_var(p: IntPoly, d: int) -> IntPoly:
    """Substitute x -> x + d, by Horner-style synthetic substitution.

    Builds q(x) = p(x + d) as (((c_n)(x+d) + c_{n-1})(x+d) + ...), which
    keeps every step an exact shift-and-add on the coefficient list.
    """
    if d == 0 or p.is_zero():
        return p
    cs: list[int] = []
    for c in reversed(p.coeffs):
        # cs <- cs * (x + d) + c
        cs.append(0)
        for i in range(len(cs) - 1, 0, -1):
            cs[i] = cs[i - 1] + cs[i] * d
        cs[0] = cs[0] * d + c
    return IntPoly(cs)


def eval_int(p: IntPoly, x: int) -> int:
    """Exact integer value p(x) by Horner's rule."""
    acc = 0
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


@dataclass(frozen=True)
class ClassPoly:
    """An IntPoly together with the basis its variable is expressed in."""

    poly: IntPoly
    basis: Basis = Basis.S

    def in_basis(self, basis: Basis) -> "ClassPoly":
        return to_basis(self, basis)

    def eval_at_field_size(self, q: int) -> int:
        """Value of the class when the affine-line class L is set to q."""
        return eval_int(to_basis(self, Basis.S).poly, q - 2)

    def __repr__(self) -> str:
        return f"ClassPoly({list(self.poly.coeffs)!r}, {self.basis.name})"


def to_basis(c: ClassPoly, basis: Basis) -> ClassPoly:
    """Re-express the same class in another basis.

    If x_old = S + a and x_new = S + b then p_new(x) = p_old(x + (a - b)).
    """
    if basis is c.basis:
        return c
    d = c.basis.offset - basis.offset
    return ClassPoly(shift_var(c.poly, d), basis)
