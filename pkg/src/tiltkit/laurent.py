"""Exact Laurent polynomials in ``v`` with integer coefficients."""

from __future__ import annotations

from typing import Iterable, Mapping


class LaurentPoly:
    """An immutable element of ``Z[v, v⁻¹]``.

    >>> v = LaurentPoly.v()
    >>> (v + v.bar()) * v
    1 + v^2
    >>> (v + 1).at_one()
    2
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        self._c = {int(k): int(a) for k, a in (coeffs or {}).items() if a}
        self._hash = None

    @classmethod
    def const(cls, a: int) -> LaurentPoly:
        return cls({0: a})

    @classmethod
    def v(cls, k: int = 1) -> LaurentPoly:
        return cls({k: 1})

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int], start: int = 0) -> LaurentPoly:
        """``c0 + c1 v + c2 v^2 + ...`` (shifted by ``v^start``)."""
        return cls({start + i: a for i, a in enumerate(coeffs)})

    def to_coeffs(self) -> list[int]:
        """Coefficients of ``v^0 .. v^deg``; requires no negative powers."""
        if not self._c:
            return []
        if min(self._c) < 0:
            raise ValueError("polynomial has negative powers of v")
        return [self._c.get(i, 0) for i in range(max(self._c) + 1)]

    # -- ring structure -------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        out = dict(self._c)
        for k, a in other._c.items():
            out[k] = out.get(k, 0) + a
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -a for k, a in self._c.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        out: dict[int, int] = {}
        for i, a in self._c.items():
            for j, b in other._c.items():
                out[i + j] = out.get(i + j, 0) + a * b
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._c) != 1:
                raise ValueError("only monomials are invertible")
            (k, a), = self._c.items()
            if a not in (1, -1):
                raise ValueError("only ±v^k are invertible")
            return LaurentPoly({k * n: a ** n})
        out = LaurentPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __bool__(self):
        return bool(self._c)

    # -- inspection -----------------------------------------------------------

    def bar(self) -> LaurentPoly:
        """The involution ``v ↦ v⁻¹``."""
        return LaurentPoly({-k: a for k, a in self._c.items()})

    def coeff(self, k: int) -> int:
        return self._c.get(k, 0)

    def items(self):
        return sorted(self._c.items())

    def at_one(self) -> int:
        return sum(self._c.values())

    @property
    def degree(self) -> int | None:
        return max(self._c) if self._c else None

    @property
    def valuation(self) -> int | None:
        return min(self._c) if self._c else None

    def is_nonnegative(self) -> bool:
        return all(a >= 0 for a in self._c.values())

    def __repr__(self):
        if not self._c:
            return "0"
        terms = []
        for k, a in sorted(self._c.items()):
            if k == 0:
                mono = str(a)
            else:
                mono = "v" if k == 1 else f"v^{k}"
                if a == -1:
                    mono = "-" + mono
                elif a != 1:
                    mono = f"{a}{mono}"
            terms.append(mono)
        return " + ".join(terms).replace("+ -", "- ")

    def to_json(self) -> list[list[int]]:
        return [[k, a] for k, a in sorted(self._c.items())]

    @classmethod
    def from_json(cls, data) -> LaurentPoly:
        return cls({int(k): int(a) for k, a in data})


def _coerce(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.const(x)
    raise TypeError(f"cannot treat {x!r} as a Laurent polynomial")


ZERO = LaurentPoly()
ONE = LaurentPoly.const(1)
V = LaurentPoly.v()
VINV = LaurentPoly.v(-1)
