"""Exact integer Laurent polynomials in ``v``.

``LaurentPoly`` is the coefficient ring for everything downstream.  The ring
Z[u, u^-1] used by the Hecke algebra sits inside it through ``u = v**2``, so
an element of the smaller ring is simply a LaurentPoly with only even
exponents.  ``IntPoly`` holds ordinary polynomials in an abstract variable
(``q = u**2`` for Kazhdan-Lusztig polynomials, ``u`` for the twisted ones).
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .errors import NotDivisible

__all__ = [
    "LaurentPoly",
    "IntPoly",
    "ZERO",
    "ONE",
    "V",
    "VINV",
    "U",
    "UINV",
    "mono",
    "substitute_power",
    "exact_div",
    "negative_part",
    "check_nonneg_even",
]


class LaurentPoly:
    """Immutable sparse map ``exponent -> nonzero int``."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c: dict[int, int] = {}
        for e, a in items:
            if a:
                a = c.get(e, 0) + a
                if a:
                    c[e] = a
                else:
                    del c[e]
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c: dict[int, int]) -> LaurentPoly:
        # caller guarantees no zero coefficients
        p = object.__new__(cls)
        p._c = c
        p._hash = None
        return p

    @classmethod
    def const(cls, a: int) -> LaurentPoly:
        return cls._raw({0: a} if a else {})

    # -- inspection -------------------------------------------------------

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def items(self):
        return sorted(self._c.items())

    def __getitem__(self, e: int) -> int:
        return self._c.get(e, 0)

    def __bool__(self) -> bool:
        return bool(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def max_degree(self) -> int | None:
        return max(self._c) if self._c else None

    def min_degree(self) -> int | None:
        return min(self._c) if self._c else None

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self._c == other._c
        if isinstance(other, int):
            return self._c == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other) -> LaurentPoly:
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        if not other._c:
            return self
        if not self._c:
            return other
        c = dict(self._c)
        for e, a in other._c.items():
            b = c.get(e, 0) + a
            if b:
                c[e] = b
            else:
                del c[e]
        return LaurentPoly._raw(c)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly._raw({e: -a for e, a in self._c.items()})

    def __sub__(self, other) -> LaurentPoly:
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> LaurentPoly:
        return (-self) + other

    def __mul__(self, other) -> LaurentPoly:
        if isinstance(other, int):
            if not other:
                return ZERO
            return LaurentPoly._raw({e: a * other for e, a in self._c.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a_c, b_c = self._c, other._c
        if not a_c or not b_c:
            return ZERO
        if len(a_c) == 1:
            (e0, a0), = a_c.items()
            return LaurentPoly._raw({e0 + e: a0 * b for e, b in b_c.items()})
        if len(b_c) == 1:
            (e0, b0), = b_c.items()
            return LaurentPoly._raw({e0 + e: b0 * a for e, a in a_c.items()})
        c: dict[int, int] = {}
        for e1, a1 in a_c.items():
            for e2, a2 in b_c.items():
                e = e1 + e2
                c[e] = c.get(e, 0) + a1 * a2
        return LaurentPoly._raw({e: a for e, a in c.items() if a})

    __rmul__ = __mul__

    def shift(self, n: int) -> LaurentPoly:
        """Multiply by ``v**n``."""
        if not n:
            return self
        return LaurentPoly._raw({e + n: a for e, a in self._c.items()})

    def __pow__(self, n: int) -> LaurentPoly:
        if n < 0:
            raise ValueError("negative power of a Laurent polynomial")
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def bar(self) -> LaurentPoly:
        """The ring involution ``v -> v^-1``."""
        return LaurentPoly._raw({-e: a for e, a in self._c.items()})

    # -- rendering --------------------------------------------------------

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for e, a in sorted(self._c.items()):
            parts.append(str(a) if e == 0 else f"{a}*v^{e}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> LaurentPoly:
        """Inverse of ``str``: accepts ``c*v^n`` terms joined by `` + ``."""
        text = text.strip()
        if text == "0":
            return ZERO
        c: dict[int, int] = {}
        for term in text.split(" + "):
            if "*v^" in term:
                a, e = term.split("*v^")
                c[int(e)] = c.get(int(e), 0) + int(a)
            else:
                c[0] = c.get(0, 0) + int(term)
        return cls(c)


ZERO = LaurentPoly._raw({})
ONE = LaurentPoly._raw({0: 1})
V = LaurentPoly._raw({1: 1})
VINV = LaurentPoly._raw({-1: 1})
U = LaurentPoly._raw({2: 1})
UINV = LaurentPoly._raw({-2: 1})


def mono(n: int, a: int = 1) -> LaurentPoly:
    """``a * v**n``."""
    return LaurentPoly._raw({n: a} if a else {})


class IntPoly:
    """Polynomial with integer coefficients in one abstract variable."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        c = list(coeffs)
        while c and not c[-1]:
            c.pop()
        self.coeffs = tuple(c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __eq__(self, other) -> bool:
        if isinstance(other, IntPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == ((other,) if other else ())
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __add__(self, other: IntPoly) -> IntPoly:
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(self[k] + other[k] for k in range(n))

    def __sub__(self, other: IntPoly) -> IntPoly:
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(self[k] - other[k] for k in range(n))

    def __neg__(self) -> IntPoly:
        return IntPoly(-a for a in self.coeffs)

    def is_nonnegative(self) -> bool:
        return all(a >= 0 for a in self.coeffs)

    def halve(self) -> IntPoly:
        if any(a % 2 for a in self.coeffs):
            raise ValueError(f"{self} is not divisible by 2")
        return IntPoly(a // 2 for a in self.coeffs)

    def render(self, var: str = "q") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, a in enumerate(self.coeffs):
            if not a:
                continue
            if k == 0:
                parts.append(str(a))
            elif k == 1:
                parts.append(f"{a}*{var}")
            else:
                parts.append(f"{a}*{var}^{k}")
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"IntPoly({list(self.coeffs)})"


def substitute_power(p: IntPoly, k: int) -> LaurentPoly:
    """Replace the variable of ``p`` by ``v**k``."""
    if k < 1:
        raise ValueError("k must be positive")
    return LaurentPoly((k * i, a) for i, a in enumerate(p.coeffs))


def exact_div(p: LaurentPoly, d: LaurentPoly) -> LaurentPoly:
    """Return ``r`` with ``p == d * r``; raise NotDivisible otherwise."""
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero():
        return ZERO
    dc = d.coeffs
    dmin, dmax = min(dc), max(dc)
    lead = dc[dmax]
    rem = p.coeffs
    out: dict[int, int] = {}
    # long division from the top degree down; terminates since the
    # remainder's span shrinks by at least one each step
    while rem:
        top = max(rem)
        if top - dmax < min(rem) - dmin:
            break
        a = rem[top]
        if a % lead:
            break
        q = a // lead
        shift = top - dmax
        out[shift] = out.get(shift, 0) + q
        for e, b in dc.items():
            k = e + shift
            val = rem.get(k, 0) - q * b
            if val:
                rem[k] = val
            else:
                rem.pop(k, None)
    if rem:
        raise NotDivisible(f"{p} is not divisible by {d}", dividend=str(p), divisor=str(d))
    return LaurentPoly(out)


def negative_part(p: LaurentPoly) -> LaurentPoly:
    """Sum of the terms of ``p`` with strictly negative exponent."""
    return LaurentPoly._raw({e: a for e, a in p._c.items() if e < 0})


def check_nonneg_even(p: LaurentPoly, require_even: bool = True) -> bool:
    for e, a in p._c.items():
        if a < 0 or (require_even and e % 2):
            return False
    return True
