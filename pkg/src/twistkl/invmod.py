"""The Hecke-algebra module M with basis a_w, w a twisted involution.

The generator action is the four-case rule

    (T_s+1) a_z = (u+1)(a_z + a_z~)     z in I'_e
                  (u^2-u)(a_z + a_z~)   z in I''_e
                  a_z + a_z~            z in I'_n
                  u^2 (a_z + a_z~)      z in I''_n

where z~ = sz (e-cases) or s z s* (n-cases).  Everything else (bar operator,
self-dual basis A_w, sigma-polynomials, structure constants) is derived
from it.  Module elements are dicts ``{involution id: LaurentPoly}``.
"""

from __future__ import annotations

import heapq
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable

from .coxeter import Case, Group
from .errors import (
    EvennessViolated,
    InternalConsistencyError,
    NotTwistedInvolution,
    PositivityViolated,
    PreconditionViolated,
    RelationViolated,
    UnsupportedGroup,
)
from .exactpoly import ONE, ZERO, IntPoly, LaurentPoly, exact_div, mono, substitute_power
from .hecke import HeckeAlgebra, HeckeElt, add_scaled, scale_elt, selfdual_complete, sub_elt

MElt = Dict[int, LaurentPoly]

_U = mono(2)
_COEFF = {
    Case.PRIME_E: mono(2) + 1,         # u + 1
    Case.DPRIME_E: mono(4) - mono(2),  # u^2 - u
    Case.PRIME_N: ONE,
    Case.DPRIME_N: mono(4),            # u^2
}
_ONE_PLUS_UINV = mono(-2) + 1


def to_u(p: LaurentPoly) -> LaurentPoly:
    """Relabel v^n as u^n (i.e. v^n -> v^{2n})."""
    return LaurentPoly({2 * e: a for e, a in p.coeffs.items()})


@dataclass
class PositivityReport:
    """Outcome of a 6.4(a)-style check on one triple."""

    z: int
    w: int
    w2: int
    h_tilde: LaurentPoly
    b: LaurentPoly
    plus: LaurentPoly | None
    minus: LaurentPoly | None
    ok: bool
    b_has_odd_degree: bool = False
    notes: list[str] = field(default_factory=list)


class InvolutionModule:
    """M over Z[v, v^-1] for a group with diagram involution."""

    def __init__(self, hecke: HeckeAlgebra | Group):
        if isinstance(hecke, Group):
            hecke = HeckeAlgebra(hecke)
        self.hecke = hecke
        self.group = hecke.group
        self._ts1: dict[tuple[int, int], MElt] = {}
        self._bar: dict[int, MElt] = {0: {0: ONE}}
        self._cols: dict[int, MElt] = {}
        self._sigma: dict[tuple[int, int], IntPoly] = {}

    # -- the action -------------------------------------------------------

    def ts1_basis(self, s: int, z: int) -> MElt:
        """(T_s + 1) a_z."""
        key = (s, z)
        r = self._ts1.get(key)
        if r is None:
            g = self.group
            case = g.classify_case(s, z)
            c = _COEFF[case]
            r = {z: c, g.tilde(s, z): c}
            self._ts1[key] = r
        return r

    def act_Ts1(self, s: int, m: MElt) -> MElt:
        out: MElt = {}
        for z, p in m.items():
            add_scaled(out, self.ts1_basis(s, z), p)
        return out

    def act_Ts(self, s: int, m: MElt) -> MElt:
        return sub_elt(self.act_Ts1(s, m), m)

    def act_Ts_inv(self, s: int, m: MElt) -> MElt:
        # T_s^-1 = u^-2 T_s + (u^-2 - 1)
        out = scale_elt(self.act_Ts(s, m), mono(-4))
        return add_scaled(out, m, mono(-4) - 1)

    def act_cs(self, s: int, m: MElt) -> MElt:
        """c_s m = u^-1 (T_s + 1) m."""
        return scale_elt(self.act_Ts1(s, m), mono(-2))

    def act_hecke(self, h: HeckeElt, m: MElt) -> MElt:
        """h . m for h in the T-basis (u acts as v^2)."""
        g = self.group
        out: MElt = {}
        for x, p in h.items():
            cur = m
            for s in reversed(g.word(x)):
                cur = self.act_Ts(s, cur)
            add_scaled(out, cur, p)
        return out

    def act_c(self, z: int, m: MElt) -> MElt:
        return self.act_hecke(self.hecke.c_basis(z), m)

    # -- bar operator -----------------------------------------------------

    def _require_I(self, w: int) -> None:
        if not self.group.is_twisted_involution(w):
            raise NotTwistedInvolution(f"{self.group.word_str(w)} is not a twisted involution")

    def _bar_step(self, w: int, s: int) -> MElt:
        g = self.group
        sw = g.left_mult(s, w)
        if g.right_mult(sw, g.star_perm[s]) != w:
            # a_w = T_s a_z with z = s w s*
            z = g.right_mult(sw, g.star_perm[s])
            return self.act_Ts_inv(s, self.bar_a(z))
        # (u + 1) a_w = (T_s - u) a_z with z = s w
        bz = self.bar_a(sw)
        num = add_scaled(self.act_Ts_inv(s, bz), bz, -mono(-2))
        out: MElt = {}
        for y, p in num.items():
            q = exact_div(p, _ONE_PLUS_UINV)
            if q:
                out[y] = q
        return out

    def bar_a(self, w: int, s: int | None = None) -> MElt:
        """bar(a_w).  With ``s`` given, take that descent for the last step."""
        if s is not None:
            self._require_I(w)
            if not self.group.is_left_descent(s, w):
                raise PreconditionViolated(f"s{s+1} is not a left descent of {self.group.word_str(w)}")
            return self._bar_step(w, s)
        r = self._bar.get(w)
        if r is None:
            self._require_I(w)
            r = self._bar_step(w, self.group.first_left_descent(w))
            self._bar[w] = r
        return r

    def bar(self, m: MElt) -> MElt:
        out: MElt = {}
        for w, p in m.items():
            add_scaled(out, self.bar_a(w), p.bar())
        return out

    # -- canonical basis A_w ----------------------------------------------

    def _bar_unit(self, w: int) -> MElt:
        # n_y = v^{-l(y)} a_y
        g = self.group
        lw = g.length(w)
        return {y: p.shift(lw + g.length(y)) for y, p in self.bar_a(w).items()}

    def column(self, w: int) -> MElt:
        """A_w in the normalized basis v^{-l(y)} a_y."""
        col = self._cols.get(w)
        if col is None:
            self._require_I(w)
            g = self.group
            for y in g.lower_interval(w, twisted_only=True):
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
            raw = p.shift(gap)  # = P^sigma(v^2)
            coeffs = raw.coeffs
            if any(e % 2 or e < 0 for e in coeffs):
                raise InternalConsistencyError("sigma column has unexpected exponents", y=y, w=w, coeff=str(p))
            P = IntPoly(coeffs.get(2 * k, 0) for k in range(max(coeffs) // 2 + 1))
            if y == w:
                if P != 1:
                    raise InternalConsistencyError("P^sigma_{w,w} != 1", w=w)
            elif not g.bruhat_leq(y, w) or 2 * P.degree > gap - 1:
                raise InternalConsistencyError("sigma degree bound violated", y=y, w=w, P=str(P))
            self._sigma[(y, w)] = P

    def compute_columns(self, ws: Iterable[int], threads: int = 1) -> None:
        g = self.group
        need: set[int] = set()
        for w in ws:
            need |= {y for y in g.interval_set(w) if g.is_twisted_involution(y)}
        levels: dict[int, list[int]] = {}
        for y in need:
            levels.setdefault(g.length(y), []).append(y)
        order = [sorted(levels[ln]) for ln in sorted(levels)]
        if threads <= 1:
            for lvl in order:
                for y in lvl:
                    self.column(y)
            return
        # bar expansions first (they recurse on shorter involutions only)
        with ThreadPoolExecutor(max_workers=threads) as ex:
            for lvl in order:
                list(ex.map(self.bar_a, lvl))
            for lvl in order:
                list(ex.map(self.column, lvl))

    def A(self, w: int) -> MElt:
        """A_w in the a-basis."""
        g = self.group
        return {y: p.shift(-g.length(y)) for y, p in self.column(w).items()}

    def sigma_polynomial(self, y: int, w: int) -> IntPoly:
        """P^sigma_{y,w} in the variable u (zero unless y <= w)."""
        self._require_I(y)
        self._require_I(w)
        if not self.group.bruhat_leq(y, w):
            return IntPoly()
        self.column(w)
        return self._sigma[(y, w)]

    def a_column(self, w: int) -> tuple[MElt, dict[int, IntPoly]]:
        col = self.A(w)
        return col, {y: self._sigma[(y, w)] for y in col}

    def expand_in_A(self, m: MElt) -> MElt:
        """Coefficients of ``m`` in the basis {A_x}."""
        g = self.group
        rest = dict(m)
        out: MElt = {}
        heap = [(-g.length(y), -y) for y in rest]
        heapq.heapify(heap)
        while heap:
            _, my = heapq.heappop(heap)
            y = -my
            p = rest.get(y)
            if p is None:
                continue
            k = p.shift(g.length(y))
            out[y] = k
            Ay = self.A(y)
            for x in Ay:
                if x not in rest:
                    heapq.heappush(heap, (-g.length(x), -x))
            add_scaled(rest, Ay, -k)
        return out

    def assemble(self, coeffs: MElt) -> MElt:
        """Inverse of ``expand_in_A``."""
        out: MElt = {}
        for x, p in coeffs.items():
            add_scaled(out, self.A(x), p)
        return out

    # -- mu', mu'', M^s ----------------------------------------------------

    def mu_primes(self, y: int, w: int) -> tuple[int, int]:
        """(mu', mu''): coefficients of v^-1, v^-2 in v^{l(y)-l(w)} P^sigma_{y,w}(v^2)."""
        g = self.group
        gap = g.length(w) - g.length(y)
        if gap <= 0:
            self._require_I(y)
            self._require_I(w)
            return (0, 0)
        P = self.sigma_polynomial(y, w)
        mu1 = P[(gap - 1) // 2] if gap % 2 == 1 else 0
        mu2 = P[(gap - 2) // 2] if gap % 2 == 0 else 0
        return (mu1, mu2)

    def mu1(self, y: int, w: int) -> int:
        return self.mu_primes(y, w)[0]

    def m_s_coefficient(self, s: int, y: int, w: int) -> int:
        """M^s_{y,w}, defined when sy < y < sw > w and eps_y = eps_w."""
        g = self.group
        self._require_I(y)
        self._require_I(w)
        sy, sw = g.left_mult(s, y), g.left_mult(s, w)
        if not (
            g.is_left_descent(s, y)
            and not g.is_left_descent(s, w)
            and g.bruhat_leq(y, sw)
            and y != sw
            and g.parity(y) == g.parity(w)
        ):
            raise PreconditionViolated(
                "M^s_{y,w} needs sy < y < sw > w and eps_y = eps_w",
                s=s, y=g.word_str(y), w=g.word_str(w),
            )
        total = self.mu_primes(y, w)[1]
        for x in g.lower_interval(w, twisted_only=True):
            if x != w and x != y and g.is_left_descent(s, x) and g.bruhat_leq(y, x):
                total -= self.mu1(y, x) * self.mu1(x, w)
        star_s = g.star_perm[s]
        if sw == g.right_mult(w, star_s):
            total -= self.mu1(y, sw)
        if sy == g.right_mult(y, star_s):
            total += self.mu1(sy, w)
        return total

    # -- positivity -------------------------------------------------------

    def positivity_pointwise(self, y: int, w: int) -> tuple[IntPoly, IntPoly]:
        """((P + P^sigma)/2, (P - P^sigma)/2) with P's variable read as u."""
        P = self.hecke.kl_polynomial(y, w)
        S = self.sigma_polynomial(y, w)
        halves = []
        for poly in (P + S, P - S):
            if any(a % 2 for a in poly.coeffs) or not poly.is_nonnegative():
                raise PositivityViolated(
                    "(P +- P^sigma)/2 not in N[u]",
                    y=self.group.word_str(y), w=self.group.word_str(w), P=str(P), P_sigma=S.render("u"),
                )
            halves.append(poly.halve())
        return halves[0], halves[1]

    def b_const(self, z: int, w: int, strict_even: bool = False) -> MElt:
        """{w2: b_{z,w,w2}} with c_z A_w = sum b_{z,w,w2} A_{w2}.

        Values may have odd v-degree (already c_s A_1 = (v + v^-1) A_s in
        type A1); ``strict_even`` turns that into an error.
        """
        b = self.expand_in_A(self.act_c(z, self.A(w)))
        if strict_even:
            for w2, p in b.items():
                if any(e % 2 for e in p.coeffs):
                    raise EvennessViolated("b_{z,w,w2} has odd v-degree", z=z, w=w, w2=w2, b=str(p))
        return b

    def positivity_module(self, z: int, w: int, w2: int, b: MElt | None = None) -> PositivityReport:
        """Check (h~_{z,w,w2}(u) +- b_{z,w,w2}(u))/2 in N[u,u^-1].

        ``b`` is a Laurent polynomial in v; ``b(u)`` relabels v^n as u^n.
        Values are returned in the u = v^2 embedding.
        """
        if not self.group.is_finite:
            raise UnsupportedGroup("module positivity needs a finite group")
        ht = self.hecke.h_tilde(z, w, w2)
        bval = (b if b is not None else self.b_const(z, w)).get(w2, ZERO)
        bu = to_u(bval)
        odd = any(e % 2 for e in bval.coeffs)
        plus, minus, ok = None, None, True
        halves = []
        for poly in (ht + bu, ht - bu):
            c = poly.coeffs
            if any(a % 2 or a < 0 for a in c.values()) or any(e % 2 for e in c):
                ok = False
                halves.append(None)
            else:
                halves.append(LaurentPoly({e: a // 2 for e, a in c.items()}))
        plus, minus = halves
        rep = PositivityReport(z, w, w2, ht, bval, plus, minus, ok, odd)
        if odd:
            rep.notes.append("b has odd v-degree")
        return rep

    # -- module relations -------------------------------------------------

    def verify_module_relations(self, basis: Iterable[int] | None = None) -> dict:
        """(T_s+1)^2 = (u^2+1)(T_s+1) and braid relations on every a_z."""
        g = self.group
        if basis is None:
            if not g.is_finite:
                raise UnsupportedGroup("relation check over all of M needs a finite group")
            basis = g.twisted_involutions()
        basis = list(basis)
        u2p1 = mono(4) + 1
        checks = 0
        for s in range(g.rank):
            for z in basis:
                a = {z: ONE}
                lhs = self.act_Ts1(s, self.act_Ts1(s, a))
                rhs = scale_elt(self.act_Ts1(s, a), u2p1)
                if lhs != rhs:
                    raise RelationViolated("quadratic relation fails", s=s, z=g.word_str(z))
                checks += 1
        for s in range(g.rank):
            for t in range(s + 1, g.rank):
                m = g.matrix.m[s][t]
                if m == 0:
                    continue
                for z in basis:
                    left = right = {z: ONE}
                    for i in range(m):
                        left = self.act_Ts(s if i % 2 == 0 else t, left)
                        right = self.act_Ts(t if i % 2 == 0 else s, right)
                    if left != right:
                        raise RelationViolated("braid relation fails", s=s, t=t, z=g.word_str(z))
                    checks += 1
        return {"group": g.type_name, "star": [i + 1 for i in g.star_perm], "checks": checks, "ok": True}


def bar_choice_independent(mod: InvolutionModule, w: int) -> bool:
    g = mod.group
    ref = mod.bar_a(w)
    return all(mod.bar_a(w, s) == ref for s in g.descents(w))


__all__ = ["MElt", "InvolutionModule", "PositivityReport", "to_u", "bar_choice_independent", "substitute_power"]
