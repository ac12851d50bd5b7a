"""Hecke algebra with T_s^2 = u^2 T_1 + (u^2 - 1) T_s, u = v^2.

Elements are plain dicts ``{element id: LaurentPoly}`` in the T-basis (or
c-basis where stated).  The canonical basis is produced by the generic
``selfdual_complete`` solver, which ``invmod`` reuses for the module on
twisted involutions.
"""

from __future__ import annotations

import heapq
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, Iterable

from .coxeter import Group
from .errors import AntisymmetryViolated, InternalConsistencyError, PositivityViolated, UnsupportedGroup
from .exactpoly import (
    ONE,
    U,
    ZERO,
    IntPoly,
    LaurentPoly,
    check_nonneg_even,
    mono,
    negative_part,
    substitute_power,
)

HeckeElt = Dict[int, LaurentPoly]

U2 = mono(4)              # u^2
U2_M1 = mono(4) - 1       # u^2 - 1
UM2 = mono(-4)            # u^-2
UM2_M1 = mono(-4) - 1     # u^-2 - 1
U_PLUS_UINV = mono(2) + mono(-2)


def add_scaled(acc: dict, other: dict, scale: LaurentPoly = ONE) -> dict:
    """``acc += scale * other`` in place; drops zero entries."""
    if scale.is_zero():
        return acc
    one = scale == ONE
    for k, p in other.items():
        term = p if one else p * scale
        cur = acc.get(k)
        if cur is None:
            acc[k] = term
        else:
            new = cur + term
            if new.is_zero():
                del acc[k]
            else:
                acc[k] = new
    return acc


def scale_elt(h: dict, scale: LaurentPoly) -> dict:
    if scale.is_zero():
        return {}
    return {k: p * scale for k, p in h.items()}


def sub_elt(a: dict, b: dict) -> dict:
    return add_scaled(dict(a), b, -ONE)


def selfdual_complete(
    w: int,
    bar_unit: Callable[[int], dict],
    lower_column: Callable[[int], dict],
    sort_key: Callable[[int], tuple],
) -> dict:
    """Bar-invariant column with unitriangular, strictly v-negative tail.

    All data is expressed in a normalized basis ``n_y``.  ``bar_unit(w)`` is
    ``bar(n_w)`` in that basis; it must equal ``n_w`` plus terms at smaller
    indices.  ``lower_column(y)`` returns the already-computed canonical
    column ``C_y`` for ``y`` below ``w``.  Returns ``C_w`` as a dict.
    """
    diff = dict(bar_unit(w))
    lead = diff.pop(w, ZERO)
    if lead != ONE:
        raise InternalConsistencyError(
            "bar operator is not unitriangular", column=w, leading=str(lead)
        )
    column = {w: ONE}
    heap = [(tuple(-k for k in sort_key(y)), y) for y in diff]
    heapq.heapify(heap)
    while heap:
        _, y = heapq.heappop(heap)
        e = diff.get(y)
        if e is None:
            continue
        if e.bar() != -e:
            raise AntisymmetryViolated(
                "correction coefficient is not bar-antisymmetric", column=w, row=y, coefficient=str(e)
            )
        c_y = lower_column(y)
        for x in c_y:
            if x != y and x not in diff:
                heapq.heappush(heap, (tuple(-k for k in sort_key(x)), x))
        add_scaled(diff, c_y, -e)
        if y in diff:
            raise InternalConsistencyError("lower column is not unitriangular", column=y)
        add_scaled(column, c_y, negative_part(e))
    return column


class HeckeAlgebra:
    """Hecke algebra of ``group``: T-basis arithmetic, bar, c-basis, KL data."""

    def __init__(self, group: Group):
        self.group = group
        self._tinv: dict[int, HeckeElt] = {0: {0: ONE}}
        self._cols: dict[int, HeckeElt] = {}
        self._kl: dict[tuple[int, int], IntPoly] = {}
        self._cs: dict[tuple[int, int, str], HeckeElt] = {}
        self._ctable: dict[int, dict[int, HeckeElt]] | None = None

    # -- T-basis ----------------------------------------------------------

    def t_mult_gen(self, h: HeckeElt, s: int, side: str = "left") -> HeckeElt:
        g = self.group
        out: HeckeElt = {}
        for w, p in h.items():
            if side == "left":
                sw = g.left_mult(s, w)
                down = g.is_left_descent(s, w)
            else:
                sw = g.right_mult(w, s)
                down = g.is_right_descent(s, w)
            if down:
                add_scaled(out, {sw: p * U2, w: p * U2_M1})
            else:
                add_scaled(out, {sw: p})
        return out

    def t_inv_mult_gen(self, h: HeckeElt, s: int, side: str = "left") -> HeckeElt:
        """``T_s^-1 h`` (or ``h T_s^-1``) with T_s^-1 = u^-2 T_s + (u^-2 - 1)."""
        out = scale_elt(self.t_mult_gen(h, s, side), UM2)
        return add_scaled(out, h, UM2_M1)

    def t_word(self, w: int, h: HeckeElt, side: str = "left") -> HeckeElt:
        """``T_w h`` (side='left') or ``h T_w`` (side='right')."""
        word = self.group.word(w)
        if side == "left":
            for s in reversed(word):
                h = self.t_mult_gen(h, s, "left")
        else:
            for s in word:
                h = self.t_mult_gen(h, s, "right")
        return h

    def multiply(self, a: HeckeElt, b: HeckeElt) -> HeckeElt:
        out: HeckeElt = {}
        for x, p in a.items():
            add_scaled(out, self.t_word(x, b, "left"), p)
        return out

    def t_inverse(self, w: int) -> HeckeElt:
        """``T_w^-1`` in the T-basis."""
        r = self._tinv.get(w)
        if r is None:
            g = self.group
            s = g.first_left_descent(w)
            # T_w = T_s T_{sw}  =>  T_w^-1 = T_{sw}^-1 T_s^-1
            r = self.t_inv_mult_gen(self.t_inverse(g.left_mult(s, w)), s, "right")
            self._tinv[w] = r
        return r

    def bar(self, h: HeckeElt) -> HeckeElt:
        g = self.group
        out: HeckeElt = {}
        for w, p in h.items():
            add_scaled(out, self.t_inverse(g.inverse(w)), p.bar())
        return out

    # -- canonical basis --------------------------------------------------

    def _bar_unit(self, w: int) -> HeckeElt:
        # n_w = v^{-2 l(w)} T_w;  bar(n_w) = v^{2 l(w)} T_{w^-1}^-1
        g = self.group
        lw = g.length(w)
        return {y: p.shift(2 * lw + 2 * g.length(y)) for y, p in self.t_inverse(g.inverse(w)).items()}

    def column(self, w: int) -> HeckeElt:
        """c_w in the normalized basis v^{-2 l(y)} T_y."""
        col = self._cols.get(w)
        if col is None:
            g = self.group
            for y in g.lower_interval(w):
                if y not in self._cols:
                    self._cols[y] = selfdual_complete(y, self._bar_unit, self._cols.__getitem__, g.sort_key)
                    self._check_column(y)
            col = self._cols[w]
        return col

    def _check_column(self, w: int) -> None:
        g = self.group
        lw = g.length(w)
        for y, p in self._cols[w].items():
            gap = lw - g.length(y)
            # coefficient is v^{-2 gap} P(v^4)
            raw = p.shift(2 * gap)
            coeffs = raw.coeffs
            if any(e % 4 or e < 0 for e in coeffs):
                raise InternalConsistencyError("KL column has unexpected exponents", y=y, w=w, coeff=str(p))
            P = IntPoly(coeffs.get(4 * k, 0) for k in range(max(coeffs) // 4 + 1))
            if y == w:
                if P != 1:
                    raise InternalConsistencyError("P_{w,w} != 1", w=w)
            elif not g.bruhat_leq(y, w) or 2 * P.degree > gap - 1:
                raise InternalConsistencyError("KL degree bound violated", y=y, w=w, P=str(P))
            self._kl[(y, w)] = P

    def compute_columns(self, ws: Iterable[int], threads: int = 1) -> None:
        """Fill columns for ``ws`` (and their intervals) as a length wavefront."""
        g = self.group
        need: set[int] = set()
        for w in ws:
            need |= g.interval_set(w)
        levels: dict[int, list[int]] = {}
        for y in need:
            levels.setdefault(g.length(y), []).append(y)
        if threads <= 1:
            for ln in sorted(levels):
                for y in sorted(levels[ln]):
                    self.column(y)
            return
        with ThreadPoolExecutor(max_workers=threads) as ex:
            for ln in sorted(levels):
                list(ex.map(self.column, sorted(levels[ln])))

    def c_basis(self, w: int) -> HeckeElt:
        """c_w = u^{-l(w)} sum_y P_{y,w}(u^2) T_y in the T-basis."""
        g = self.group
        return {y: p.shift(-2 * g.length(y)) for y, p in self.column(w).items()}

    def kl_polynomial(self, y: int, w: int) -> IntPoly:
        if not self.group.bruhat_leq(y, w):
            return IntPoly()
        self.column(w)
        return self._kl[(y, w)]

    def mu(self, y: int, w: int) -> int:
        gap = self.group.length(w) - self.group.length(y)
        if gap <= 0 or gap % 2 == 0:
            return 0
        return self.kl_polynomial(y, w)[(gap - 1) // 2]

    def to_c_basis(self, h: HeckeElt) -> HeckeElt:
        """Coefficients of ``h`` in the c-basis (descending-length elimination)."""
        g = self.group
        rest = dict(h)
        out: HeckeElt = {}
        heap = [(-g.length(y), -y) for y in rest]
        heapq.heapify(heap)
        while heap:
            _, my = heapq.heappop(heap)
            y = -my
            p = rest.get(y)
            if p is None:
                continue
            # c_y has leading coefficient u^{-l(y)} on T_y
            k = p.shift(2 * g.length(y))
            out[y] = k
            cy = self.c_basis(y)
            for x in cy:
                if x not in rest:
                    heapq.heappush(heap, (-g.length(x), -x))
            add_scaled(rest, cy, -k)
            if y in rest:
                raise InternalConsistencyError("c-basis elimination failed", y=y)
        return out

    # -- structure constants ----------------------------------------------

    def c_product(self, x: int, y: int) -> HeckeElt:
        """c_x c_y in the c-basis, computed through the T-basis."""
        return self.to_c_basis(self.multiply(self.c_basis(x), self.c_basis(y)))

    def cs_product(self, s: int, w: int, side: str = "left") -> HeckeElt:
        """c_s c_w (or c_w c_s) in the c-basis; memoized."""
        key = (s, w, side)
        r = self._cs.get(key)
        if r is None:
            cw = self.c_basis(w)
            h = add_scaled(self.t_mult_gen(cw, s, side), cw)
            r = self.to_c_basis(scale_elt(h, mono(-2)))
            self._cs[key] = r
        return r

    def product_table(self) -> dict[int, dict[int, HeckeElt]]:
        """All c_x c_y for finite W: ``table[x][y] = {z: h_xyz}``.

        Built row by row from c_x = c_s c_{sx} - (lower terms), using the
        memoized c_s products.
        """
        if self._ctable is not None:
            return self._ctable
        g = self.group
        if not g.is_finite:
            raise UnsupportedGroup("full product tables need a finite group")
        elems = g.elements()
        table: dict[int, dict[int, HeckeElt]] = {0: {y: {y: ONE} for y in elems}}
        for x in elems[1:]:
            s = g.first_left_descent(x)
            xp = g.left_mult(s, x)
            corr = dict(self.cs_product(s, xp))
            if corr.pop(x, None) != ONE:
                raise InternalConsistencyError("c_s c_{sx} lacks c_x with coefficient 1", x=x)
            row: dict[int, HeckeElt] = {}
            prev = table[xp]
            for y in elems:
                acc: HeckeElt = {}
                for z, p in prev[y].items():
                    add_scaled(acc, self.cs_product(s, z), p)
                for z, k in corr.items():
                    add_scaled(acc, table[z][y], -k)
                row[y] = acc
            table[x] = row
        self._ctable = table
        return table

    def h_const(self, x: int, y: int) -> HeckeElt:
        """{z: h_{x,y,z}} with c_x c_y = sum_z h_{x,y,z} c_z; checked in N[u,u^-1]."""
        if self._ctable is not None:
            h = self._ctable[x][y]
        else:
            h = self.c_product(x, y)
        for z, p in h.items():
            if not check_nonneg_even(p, True):
                raise PositivityViolated("h_{x,y,z} not in N[u,u^-1]", x=x, y=y, z=z, h=str(p))
        return h

    def h_tilde(self, z: int, w: int, w2: int, order: str = "left") -> LaurentPoly:
        """Coefficient of c_{w2} in c_z c_w c_{(z*)^-1}."""
        g = self.group
        zi = g.inverse(g.star(z))
        total = ZERO
        if order == "left":
            for z1, p in self.h_const(z, w).items():
                q = self.h_const(z1, zi).get(w2)
                if q is not None:
                    total = total + p * q
        else:
            for z1, p in self.h_const(w, zi).items():
                q = self.h_const(z, z1).get(w2)
                if q is not None:
                    total = total + p * q
        return total


def u_degree(p: LaurentPoly) -> int | None:
    """Degree in u of an element of Z[u,u^-1] given in v."""
    d = p.max_degree()
    return None if d is None else d // 2


def kl_table_rows(hecke: HeckeAlgebra, ws: Iterable[int]):
    """(w, y, P_{y,w}) for y <= w, ordered by (length, id)."""
    g = hecke.group
    for w in sorted(ws, key=g.sort_key):
        for y in g.lower_interval(w):
            yield w, y, hecke.kl_polynomial(y, w)


__all__ = [
    "HeckeElt",
    "HeckeAlgebra",
    "selfdual_complete",
    "add_scaled",
    "scale_elt",
    "sub_elt",
    "u_degree",
    "U_PLUS_UINV",
    "substitute_power",
]
