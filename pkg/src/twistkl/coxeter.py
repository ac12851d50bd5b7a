"""Coxeter groups with a diagram involution.

Elements are interned: each distinct group element gets a dense integer id
(the identity is 0) and all per-element data lives in flat tables indexed
by that id.  Canonical forms come from an exact faithful realization:

* integer Cartan matrices when every m_st is in {2, 3, 4, 6, inf};
* a symmetric Cartan matrix over Z[phi] (phi**2 = phi + 1) when every
  m_st is in {2, 3, 5, inf} (H3, H4, I2(5), ...);
* a rotation/reflection model for a single dihedral I2(m).

Descent tests use the sign of the image of a simple root.
"""

from __future__ import annotations

import enum
import json
import re
import threading
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import (
    InvalidMatrix,
    InvalidStar,
    NotTwistedInvolution,
    UnsupportedGroup,
    UsageError,
)

INF = 0  # encoding of m_st = infinity inside CoxeterMatrix.m

__all__ = [
    "INF",
    "CoxeterMatrix",
    "Group",
    "Case",
    "build_group",
    "named_matrix",
    "parse_group_spec",
    "parse_star",
    "ZPhi",
]


# ---------------------------------------------------------------------------
# Z[phi]


class ZPhi:
    """``a + b*phi`` with phi the golden ratio, exact."""

    __slots__ = ("a", "b")

    def __init__(self, a: int = 0, b: int = 0):
        self.a = a
        self.b = b

    def __add__(self, o):
        if isinstance(o, int):
            return ZPhi(self.a + o, self.b)
        return ZPhi(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return ZPhi(-self.a, -self.b)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        if isinstance(o, int):
            return ZPhi(self.a * o, self.b * o)
        # phi^2 = phi + 1
        bb = self.b * o.b
        return ZPhi(self.a * o.a + bb, self.a * o.b + self.b * o.a + bb)

    __rmul__ = __mul__

    def __eq__(self, o):
        if isinstance(o, int):
            return self.a == o and self.b == 0
        return isinstance(o, ZPhi) and self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def sign(self) -> int:
        # a + b*phi = (x + y*sqrt5)/2 with x = 2a + b, y = b
        x, y = 2 * self.a + self.b, self.b
        if x >= 0 and y >= 0:
            return 0 if (x == 0 and y == 0) else 1
        if x <= 0 and y <= 0:
            return -1
        if x > 0:  # y < 0
            return 1 if x * x > 5 * y * y else -1
        return 1 if 5 * y * y > x * x else -1

    def __repr__(self):
        return f"ZPhi({self.a}, {self.b})"


def _sign(x) -> int:
    if isinstance(x, int):
        return (x > 0) - (x < 0)
    return x.sign()


# ---------------------------------------------------------------------------
# Coxeter matrices and named types


@dataclass(frozen=True)
class CoxeterMatrix:
    """Symmetric matrix with 1 on the diagonal; ``INF`` (0) encodes infinity."""

    m: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.m)
        if n == 0:
            raise InvalidMatrix("rank must be positive")
        for i, row in enumerate(self.m):
            if len(row) != n:
                raise InvalidMatrix("Coxeter matrix must be square")
            for j, x in enumerate(row):
                if not isinstance(x, int):
                    raise InvalidMatrix(f"entry ({i},{j}) is not an integer")
                if i == j and x != 1:
                    raise InvalidMatrix(f"diagonal entry ({i},{i}) must be 1")
                if i != j and x != INF and x < 2:
                    raise InvalidMatrix(f"off-diagonal entry ({i},{j}) must be >= 2 or infinity")
                if x != self.m[j][i]:
                    raise InvalidMatrix("Coxeter matrix must be symmetric")

    @property
    def rank(self) -> int:
        return len(self.m)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> CoxeterMatrix:
        out = []
        for row in rows:
            r = []
            for x in row:
                if x is None or x == "inf" or x == "oo" or (isinstance(x, float) and x == float("inf")):
                    r.append(INF)
                elif isinstance(x, int) and x == -1:
                    r.append(INF)
                else:
                    r.append(x)
            out.append(tuple(r))
        return cls(tuple(out))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int, int]]) -> CoxeterMatrix:
        m = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
        for i, j, label in edges:
            m[i][j] = m[j][i] = label
        return cls(tuple(tuple(r) for r in m))

    def to_json(self) -> dict:
        return {"rank": self.rank, "m": [[("inf" if x == INF else x) for x in row] for row in self.m]}


def _path(n: int, start: int = 0) -> list[tuple[int, int, int]]:
    return [(i, i + 1, 3) for i in range(start, start + n - 1)]


def _finite_edges(letter: str, n: int) -> list[tuple[int, int, int]]:
    if letter == "A":
        if n < 1:
            raise UsageError("A_n needs n >= 1")
        return _path(n)
    if letter in "BC":
        if n < 2:
            raise UsageError(f"{letter}_n needs n >= 2")
        return _path(n - 1) + [(n - 2, n - 1, 4)]
    if letter == "D":
        if n < 4:
            raise UsageError("D_n needs n >= 4")
        return _path(n - 1) + [(n - 3, n - 1, 3)]
    if letter == "E":
        if n not in (6, 7, 8):
            raise UsageError("E_n needs n in {6,7,8}")
        # Bourbaki: 1-3-4-5-...-n and 2-4 (0-based below)
        edges = [(0, 2, 3), (1, 3, 3)]
        edges += [(i, i + 1, 3) for i in range(2, n - 1)]
        return edges
    if letter == "F":
        if n != 4:
            raise UsageError("F_n needs n = 4")
        return [(0, 1, 3), (1, 2, 4), (2, 3, 3)]
    if letter == "G":
        if n != 2:
            raise UsageError("G_n needs n = 2")
        return [(0, 1, 6)]
    if letter == "H":
        if n not in (2, 3, 4):
            raise UsageError("H_n needs n in {2,3,4}")
        return [(0, 1, 5)] + [(i, i + 1, 3) for i in range(1, n - 1)]
    raise UsageError(f"unknown Cartan type letter {letter!r}")


def _affine_edges(letter: str, n: int) -> tuple[int, list[tuple[int, int, int]]]:
    """Affine diagrams; node 0 is the extra node.  Returns (rank, edges)."""
    if letter == "A":
        if n == 1:
            return 2, [(0, 1, INF)]
        return n + 1, [(i, (i + 1) % (n + 1), 3) for i in range(n + 1)]
    if letter == "C":
        if n < 2:
            raise UsageError("C_n~ needs n >= 2")
        if n == 2:
            return 3, [(0, 1, 4), (1, 2, 4)]
        return n + 1, [(0, 1, 4)] + _path(n - 1, 1) + [(n - 1, n, 4)]
    if letter == "B":
        if n < 3:
            raise UsageError("B_n~ needs n >= 3")
        return n + 1, [(0, 2, 3)] + _path(n - 1, 1) + [(n - 1, n, 4)]
    if letter == "D":
        if n < 4:
            raise UsageError("D_n~ needs n >= 4")
        return n + 1, [(0, 2, 3)] + _path(n - 1, 1) + [(n - 2, n, 3)]
    if letter == "G":
        if n != 2:
            raise UsageError("G_n~ needs n = 2")
        return 3, [(0, 1, 3), (1, 2, 6)]
    if letter == "F":
        if n != 4:
            raise UsageError("F_n~ needs n = 4")
        return 5, [(0, 1, 3), (1, 2, 3), (2, 3, 4), (3, 4, 3)]
    if letter == "E":
        fin = [(i + 1, j + 1, m) for i, j, m in _finite_edges("E", n)]
        # extra node attaches to node 2 (E6), node 1 (E7), node n (E8); 1-based Bourbaki
        attach = {6: 2, 7: 1, 8: 8}[n]
        return n + 1, fin + [(0, attach, 3)]
    raise UsageError(f"unknown affine type {letter}{n}~")


_TYPE_RE = re.compile(r"^([A-HI])(\d+)(?:\((\d+)\))?(~?)$")


def named_matrix(name: str) -> CoxeterMatrix:
    """Coxeter matrix for ``"A3"``, ``"I2(7)"``, ``"A2~"``, ``"A1xA1"`` ..."""
    comps = [c.strip() for c in name.replace("×", "x").split("x") if c.strip()]
    if not comps:
        raise UsageError("empty group type")
    blocks: list[tuple[int, list]] = []
    for comp in comps:
        mt = _TYPE_RE.match(comp)
        if not mt:
            raise UsageError(f"cannot parse group type {comp!r}")
        letter, n, m, affine = mt.group(1), int(mt.group(2)), mt.group(3), mt.group(4)
        if letter == "I":
            if n != 2 or m is None or affine:
                raise UsageError("dihedral types are written I2(m)")
            m = int(m)
            if m < 2:
                raise UsageError("I2(m) needs m >= 2")
            blocks.append((2, [(0, 1, m)]))
        elif m is not None:
            raise UsageError(f"unexpected parameter in {comp!r}")
        elif affine:
            blocks.append(_affine_edges(letter, n))
        else:
            blocks.append((n, _finite_edges(letter, n)))
    total = sum(r for r, _ in blocks)
    edges, off = [], 0
    for r, es in blocks:
        edges += [(i + off, j + off, lab) for i, j, lab in es]
        off += r
    return CoxeterMatrix.from_edges(total, edges)


def parse_group_spec(type_name: str | None = None, matrix_text: str | None = None) -> CoxeterMatrix:
    if (type_name is None) == (matrix_text is None):
        raise UsageError("give exactly one of a named type or a matrix")
    if type_name is not None:
        return named_matrix(type_name)
    try:
        data = json.loads(matrix_text)
        rows = data["m"]
        rank = data.get("rank", len(rows))
    except (ValueError, KeyError, TypeError) as exc:
        raise InvalidMatrix(f"bad matrix JSON: {exc}") from exc
    mat = CoxeterMatrix.from_rows(rows)
    if mat.rank != rank:
        raise InvalidMatrix("rank does not match matrix size")
    return mat


def parse_star(text: str | None, rank: int) -> tuple[int, ...]:
    """``"3,2,1"`` (1-based) -> ``(2, 1, 0)``; ``None`` -> identity."""
    if text is None or text.strip() == "":
        return tuple(range(rank))
    try:
        perm = tuple(int(x) - 1 for x in text.split(","))
    except ValueError as exc:
        raise InvalidStar(f"bad star permutation {text!r}") from exc
    return perm


# ---------------------------------------------------------------------------
# finite type recognition


def _components(mat: CoxeterMatrix) -> list[list[int]]:
    n = mat.rank
    seen, comps = set(), []
    for i in range(n):
        if i in seen:
            continue
        comp, stack = [], [i]
        seen.add(i)
        while stack:
            a = stack.pop()
            comp.append(a)
            for b in range(n):
                if b not in seen and mat.m[a][b] != 2:
                    seen.add(b)
                    stack.append(b)
        comps.append(sorted(comp))
    return comps


def _classify_component(mat: CoxeterMatrix, nodes: list[int]) -> str | None:
    n = len(nodes)
    if n == 1:
        return "A1"
    edges = {}
    for a in nodes:
        for b in nodes:
            if a < b and mat.m[a][b] != 2:
                edges[(a, b)] = mat.m[a][b]
    if INF in edges.values() or len(edges) != n - 1:
        return None  # cycle or infinite bond
    if n == 2:
        (m,) = edges.values()
        return {3: "A2", 4: "B2", 6: "G2"}.get(m, f"I2({m})")
    deg = {a: 0 for a in nodes}
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    labels = sorted(edges.values())
    big = [lab for lab in labels if lab > 3]
    if max(deg.values()) > 3:
        return None
    if max(deg.values()) == 3:
        if big:
            return None
        centre = next(a for a in nodes if deg[a] == 3)
        arms = []
        for nb in nodes:
            if (min(centre, nb), max(centre, nb)) in edges:
                length, prev, cur = 1, centre, nb
                while True:
                    nxt = [x for x in nodes if x != prev and (min(cur, x), max(cur, x)) in edges]
                    if not nxt:
                        break
                    prev, cur = cur, nxt[0]
                    length += 1
                arms.append(length)
        arms.sort()
        if arms[0] == 1 and arms[1] == 1:
            return f"D{n}"
        if arms[:2] == [1, 2] and arms[2] in (2, 3, 4):
            return f"E{n}"
        return None
    # a path
    ends = [a for a in nodes if deg[a] == 1]
    order = [ends[0]]
    while len(order) < n:
        cur = order[-1]
        nxt = next(x for x in nodes if x not in order and (min(cur, x), max(cur, x)) in edges)
        order.append(nxt)
    path_labels = [edges[(min(a, b), max(a, b))] for a, b in zip(order, order[1:])]
    if not big:
        return f"A{n}"
    if len(big) > 1:
        return None
    pos = [i for i, lab in enumerate(path_labels) if lab > 3][0]
    lab = path_labels[pos]
    at_end = pos in (0, n - 2)
    if lab == 4 and at_end:
        return f"B{n}"
    if lab == 4 and n == 4 and pos == 1:
        return "F4"
    if lab == 5 and at_end and n in (3, 4):
        return f"H{n}"
    return None


def recognize(mat: CoxeterMatrix) -> str | None:
    """Finite type name (e.g. ``"A3"``, ``"A1xA1"``) or ``None`` if infinite."""
    names = []
    for comp in _components(mat):
        name = _classify_component(mat, comp)
        if name is None:
            return None
        names.append(name)
    return "x".join(names)


# ---------------------------------------------------------------------------
# realizations


class _MatrixBackend:
    """Elements as pairs (matrix of w, matrix of w^-1) on the root lattice."""

    def __init__(self, mat: CoxeterMatrix):
        n = mat.rank
        labels = {mat.m[i][j] for i in range(n) for j in range(n) if i != j}
        if labels <= {2, 3, 4, 6, INF}:
            cartan = [[0] * n for _ in range(n)]
            for i in range(n):
                cartan[i][i] = 2
                for j in range(i + 1, n):
                    m = mat.m[i][j]
                    a, b = {2: (0, 0), 3: (-1, -1), 4: (-1, -2), 6: (-1, -3), INF: (-2, -2)}[m]
                    cartan[i][j], cartan[j][i] = a, b
            zero, one = 0, 1
        elif labels <= {2, 3, 5, INF}:
            val = {2: ZPhi(0, 0), 3: ZPhi(-1, 0), 5: ZPhi(0, -1), INF: ZPhi(-2, 0)}
            cartan = [[ZPhi(2, 0) if i == j else val[mat.m[i][j]] for j in range(n)] for i in range(n)]
            zero, one = ZPhi(0, 0), ZPhi(1, 0)
        else:
            raise UnsupportedGroup(
                "no exact realization for this Coxeter matrix (mixes 5 with 4/6, or other m >= 7 at rank > 2)"
            )
        self.n = n
        # s_i(alpha_j) = alpha_j - cartan[i][j] alpha_i
        self.gens = []
        for i in range(n):
            rows = []
            for r in range(n):
                if r == i:
                    rows.append(tuple((one if j == i else zero) - cartan[i][j] for j in range(n)))
                else:
                    rows.append(tuple(one if j == r else zero for j in range(n)))
            self.gens.append(tuple(rows))
        ident = tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))
        self._identity = (ident, ident)

    def identity(self):
        return self._identity

    @staticmethod
    def _mul(a, b):
        n = len(a)
        cols = list(zip(*b))
        return tuple(tuple(sum((x * y for x, y in zip(a[i], cols[j])), a[0][0] * 0) for j in range(n)) for i in range(n))

    def left(self, s, key):
        m, minv = key
        return (self._mul(self.gens[s], m), self._mul(minv, self.gens[s]))

    def right(self, key, s):
        m, minv = key
        return (self._mul(m, self.gens[s]), self._mul(self.gens[s], minv))

    def right_descents(self, key) -> int:
        # ws < w  iff  w(alpha_s) < 0: column s of w
        m = key[0]
        mask = 0
        for s in range(self.n):
            for r in range(self.n):
                sg = _sign(m[r][s])
                if sg:
                    if sg < 0:
                        mask |= 1 << s
                    break
        return mask

    def left_descents(self, key) -> int:
        return self.right_descents((key[1], key[0]))


class _DihedralBackend:
    """I2(m) as pairs (k, f) meaning r^k s1^f with r = s1 s2."""

    def __init__(self, m: int):
        self.m = m
        self.gen_keys = [(0, 1), (m - 1, 1)]

    def identity(self):
        return (0, 0)

    def _mul(self, x, y):
        k1, f1 = x
        k2, f2 = y
        return ((k1 + (-k2 if f1 else k2)) % self.m, f1 ^ f2)

    def length_of(self, key) -> int:
        k, f = key
        m = self.m
        if f == 0:
            return 2 * min(k, m - k)
        return min(2 * k + 1, 2 * (m - k) - 1)

    def left(self, s, key):
        return self._mul(self.gen_keys[s], key)

    def right(self, key, s):
        return self._mul(key, self.gen_keys[s])

    def left_descents(self, key) -> int:
        lw = self.length_of(key)
        return sum(1 << s for s in range(2) if self.length_of(self.left(s, key)) < lw)

    def right_descents(self, key) -> int:
        lw = self.length_of(key)
        return sum(1 << s for s in range(2) if self.length_of(self.right(key, s)) < lw)


# ---------------------------------------------------------------------------
# the group


class Case(enum.Enum):
    """Class of a twisted involution z relative to a generator s."""

    PRIME_E = "I'_e"     # l(z) < l(sz), sz = zs*
    DPRIME_E = "I''_e"   # l(z) > l(sz), sz = zs*
    PRIME_N = "I'_n"     # l(z) < l(sz), sz != zs*
    DPRIME_N = "I''_n"   # l(z) > l(sz), sz != zs*

    @property
    def is_e(self) -> bool:
        return self in (Case.PRIME_E, Case.DPRIME_E)

    @property
    def is_prime(self) -> bool:
        return self in (Case.PRIME_E, Case.PRIME_N)


LEFT, RIGHT = "left", "right"


class Group:
    """A Coxeter system (W, S) with a diagram involution *.

    Generators are ``0..rank-1``; elements are integer ids, 0 = identity.
    """

    def __init__(self, matrix: CoxeterMatrix, star: Sequence[int] | None = None):
        n = matrix.rank
        star = tuple(range(n)) if star is None else tuple(star)
        if sorted(star) != list(range(n)):
            raise InvalidStar(f"star {star} is not a permutation of the generators")
        if any(star[star[i]] != i for i in range(n)):
            raise InvalidStar(f"star {star} is not an involution")
        for i in range(n):
            for j in range(n):
                if matrix.m[star[i]][star[j]] != matrix.m[i][j]:
                    raise InvalidStar(
                        f"star does not preserve the Coxeter matrix: m[{i+1}][{j+1}] != m[{star[i]+1}][{star[j]+1}]"
                    )
        self.matrix = matrix
        self.rank = n
        self.star_perm = star
        self.type_name = recognize(matrix)
        self.is_finite = self.type_name is not None

        if n == 2 and matrix.m[0][1] != INF and matrix.m[0][1] not in (2, 3, 4, 6):
            self._backend = _DihedralBackend(matrix.m[0][1])
        else:
            self._backend = _MatrixBackend(matrix)

        self._lock = threading.Lock()
        self._keys: list = []
        self._index: dict = {}
        self._len: list[int] = []
        self._dl: list[int] = []
        self._dr: list[int] = []
        self._lmul: list[list[int]] = [[] for _ in range(n)]
        self._rmul: list[list[int]] = [[] for _ in range(n)]
        self._inv: dict[int, int] = {0: 0}
        self._star: dict[int, int] = {0: 0}
        self._bruhat: dict[tuple[int, int], bool] = {}
        self._interval: dict[int, frozenset[int]] = {}
        self._word: dict[int, tuple[int, ...]] = {0: ()}
        self._all: list[int] | None = None
        self._intern(self._backend.identity(), 0)

    # -- interning --------------------------------------------------------

    def _intern(self, key, length: int) -> int:
        with self._lock:
            i = self._index.get(key)
            if i is not None:
                return i
            i = len(self._keys)
            self._keys.append(key)
            self._len.append(length)
            self._dl.append(self._backend.left_descents(key))
            self._dr.append(self._backend.right_descents(key))
            for s in range(self.rank):
                self._lmul[s].append(-1)
                self._rmul[s].append(-1)
            self._index[key] = i
            return i

    def __len__(self) -> int:
        """Number of elements interned so far (the order once enumerated)."""
        return len(self._keys)

    @property
    def identity(self) -> int:
        return 0

    def generator(self, s: int) -> int:
        return self.mult_gen(s, 0)

    # -- basic queries ----------------------------------------------------

    def length(self, w: int) -> int:
        return self._len[w]

    def parity(self, w: int) -> int:
        return -1 if self._len[w] % 2 else 1

    def mult_gen(self, s: int, w: int, side: str = LEFT) -> int:
        if side == LEFT:
            r = self._lmul[s][w]
            if r < 0:
                up = not (self._dl[w] >> s) & 1
                r = self._intern(self._backend.left(s, self._keys[w]), self._len[w] + (1 if up else -1))
                self._lmul[s][w] = r
                self._lmul[s][r] = w
            return r
        r = self._rmul[s][w]
        if r < 0:
            up = not (self._dr[w] >> s) & 1
            r = self._intern(self._backend.right(self._keys[w], s), self._len[w] + (1 if up else -1))
            self._rmul[s][w] = r
            self._rmul[s][r] = w
        return r

    def left_mult(self, s: int, w: int) -> int:
        return self.mult_gen(s, w, LEFT)

    def right_mult(self, w: int, s: int) -> int:
        return self.mult_gen(s, w, RIGHT)

    def is_left_descent(self, s: int, w: int) -> bool:
        return bool((self._dl[w] >> s) & 1)

    def is_right_descent(self, s: int, w: int) -> bool:
        return bool((self._dr[w] >> s) & 1)

    def descents(self, w: int, side: str = LEFT) -> frozenset[int]:
        mask = self._dl[w] if side == LEFT else self._dr[w]
        return frozenset(s for s in range(self.rank) if (mask >> s) & 1)

    def first_left_descent(self, w: int) -> int | None:
        mask = self._dl[w]
        if not mask:
            return None
        return (mask & -mask).bit_length() - 1

    def word(self, w: int) -> tuple[int, ...]:
        """Lexicographically first reduced word (0-based generators)."""
        out = self._word.get(w)
        if out is None:
            letters, x = [], w
            while x:
                s = self.first_left_descent(x)
                letters.append(s)
                x = self.left_mult(s, x)
            out = tuple(letters)
            self._word[w] = out
        return out

    def word_str(self, w: int) -> str:
        return "".join(f"s{s + 1}" for s in self.word(w)) or "1"

    def element(self, word: Iterable[int]) -> int:
        """Product of generators s_{i1} s_{i2} ... (need not be reduced)."""
        w = 0
        for s in reversed(list(word)):
            w = self.left_mult(s, w)
        return w

    # -- involutions, star ------------------------------------------------

    def inverse(self, w: int) -> int:
        r = self._inv.get(w)
        if r is None:
            s = self.first_left_descent(w)
            # w = s (sw)  =>  w^-1 = (sw)^-1 s
            r = self.right_mult(self.inverse(self.left_mult(s, w)), s)
            self._inv[w] = r
            self._inv[r] = w
        return r

    def star(self, w: int) -> int:
        r = self._star.get(w)
        if r is None:
            s = self.first_left_descent(w)
            r = self.left_mult(self.star_perm[s], self.star(self.left_mult(s, w)))
            self._star[w] = r
            self._star[r] = w
        return r

    def star_inv(self, w: int, op: str = "star-inverse") -> int:
        if op == "star":
            return self.star(w)
        if op == "inverse":
            return self.inverse(w)
        if op == "star-inverse":
            return self.inverse(self.star(w))
        raise ValueError(f"unknown op {op!r}")

    def is_twisted_involution(self, w: int) -> bool:
        return self.inverse(w) == self.star(w)

    def _require_twisted(self, z: int):
        if not self.is_twisted_involution(z):
            raise NotTwistedInvolution(f"{self.word_str(z)} is not a twisted involution")

    def classify_case(self, s: int, z: int) -> Case:
        self._require_twisted(z)
        sz = self.left_mult(s, z)
        e = sz == self.right_mult(z, self.star_perm[s])
        prime = self._len[sz] > self._len[z]
        if e:
            return Case.PRIME_E if prime else Case.DPRIME_E
        return Case.PRIME_N if prime else Case.DPRIME_N

    def tilde(self, s: int, z: int) -> int:
        self._require_twisted(z)
        sz = self.left_mult(s, z)
        szs = self.right_mult(sz, self.star_perm[s])
        return sz if szs == z else szs

    def hat(self, s: int, z: int) -> int:
        return z if self.classify_case(s, z).is_prime else self.tilde(s, z)

    def tilde_hat(self, s: int, z: int, which: str = "tilde") -> int:
        if which == "tilde":
            return self.tilde(s, z)
        if which == "hat":
            return self.hat(s, z)
        raise ValueError(f"unknown map {which!r}")

    # -- Bruhat order -----------------------------------------------------

    def bruhat_leq(self, y: int, w: int) -> bool:
        if y == w or y == 0:
            return True
        ly, lw = self._len[y], self._len[w]
        if ly >= lw:
            return False
        key = (y, w)
        r = self._bruhat.get(key)
        if r is None:
            s = self.first_left_descent(w)
            sw = self.left_mult(s, w)
            if self.is_left_descent(s, y):
                r = self.bruhat_leq(self.left_mult(s, y), sw)
            else:
                r = self.bruhat_leq(y, sw)
            self._bruhat[key] = r
        return r

    def interval_set(self, w: int) -> frozenset[int]:
        r = self._interval.get(w)
        if r is None:
            if w == 0:
                r = frozenset((0,))
            else:
                s = self.first_left_descent(w)
                below = self.interval_set(self.left_mult(s, w))
                r = below | frozenset(self.left_mult(s, y) for y in below)
            self._interval[w] = r
        return r

    def sort_key(self, w: int) -> tuple[int, int]:
        return (self._len[w], w)

    def lower_interval(self, w: int, twisted_only: bool = False) -> list[int]:
        """All y <= w sorted by (length, id)."""
        ys = self.interval_set(w)
        if twisted_only:
            ys = [y for y in ys if self.is_twisted_involution(y)]
        return sorted(ys, key=self.sort_key)

    # -- enumeration ------------------------------------------------------

    def elements(self) -> list[int]:
        """All elements of a finite group, sorted by (length, id)."""
        if not self.is_finite:
            raise UnsupportedGroup("the group is infinite; use a length bound")
        if self._all is None:
            self._all = self.elements_up_to(None)
        return self._all

    def elements_up_to(self, max_length: int | None) -> list[int]:
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for w in frontier:
                if max_length is not None and self._len[w] >= max_length:
                    continue
                for s in range(self.rank):
                    if not self.is_left_descent(s, w):
                        x = self.left_mult(s, w)
                        if x not in seen:
                            seen.add(x)
                            nxt.append(x)
            frontier = nxt
        return sorted(seen, key=self.sort_key)

    def order(self) -> int:
        return len(self.elements())

    def longest_element(self) -> int:
        if not self.is_finite:
            raise UnsupportedGroup("infinite groups have no longest element")
        w = 0
        while True:
            for s in range(self.rank):
                if not self.is_left_descent(s, w):
                    w = self.left_mult(s, w)
                    break
            else:
                return w

    def twisted_involutions_up_to(self, max_length: int | None = None) -> list[int]:
        """Twisted involutions of length <= max_length via tilde moves from 1."""
        if max_length is None and not self.is_finite:
            raise UnsupportedGroup("a length bound is required for infinite groups")
        seen = {0}
        queue = deque([0])
        while queue:
            z = queue.popleft()
            for s in range(self.rank):
                if self.is_left_descent(s, z):
                    continue
                t = self.tilde(s, z)
                if max_length is not None and self._len[t] > max_length:
                    continue
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
        return sorted(seen, key=self.sort_key)

    def twisted_involutions(self) -> list[int]:
        return self.twisted_involutions_up_to(None)

    def describe(self) -> dict:
        return {
            "type": self.type_name,
            "matrix": self.matrix.to_json(),
            "star": [i + 1 for i in self.star_perm],
        }


def build_group(matrix: CoxeterMatrix, star: Sequence[int] | None = None) -> Group:
    return Group(matrix, star)
