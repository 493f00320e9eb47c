"""Finite group engine with three realizations and a uniform element handle.

Realizations:

* ``MetacyclicGroup``   -- Z/p^m twisted by Z/p^n, elements are ``(a, x)``
  pairs of fully reduced residues.  The group law is
  ``(a, x) * (b, y) = (a + lam^x * b mod p^m, x + y mod p^n)``, the unique
  convention compatible with the p-th power closed form
  ``(a, x)^p = (p * a * eps(x), p * x)``.
* ``CayleyTableGroup``  -- an explicit order x order table, identity at 0.
* ``MatrixGroup``       -- closure of invertible matrices over F_p, elements
  are interned row-major flat tuples.

All groups are immutable after construction and safe to share across
workers; memoization caches are filled idempotently.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence, Union

from .errors import (
    ClosureCapExceeded,
    InvalidLambda,
    MismatchedGroups,
    NotAGroup,
    NotAPGroup,
)

# An element handle: (a, x) residue pair, a table index, or a flat matrix.
Element = Union[tuple, int]


def is_prime(n: int) -> bool:
    """Deterministic trial division; group orders here stay below ~10^6."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power_decomposition(n: int) -> tuple[int, int] | None:
    """Return (p, k) with n = p^k, or None if n is not a prime power."""
    if n < 2:
        return None
    p = 2
    while p * p <= n:
        if n % p == 0:
            break
        p += 1
    else:
        p = n
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return (p, k) if n == 1 else None


# ---------------------------------------------------------------------------
# group descriptions


@dataclass(frozen=True)
class Metacyclic:
    """Z/p^m twisted by Z/p^n where 1 acts as multiplication by lam."""

    p: int
    m: int
    n: int
    lam: int


@dataclass(frozen=True)
class CayleyTable:
    """An explicit multiplication table; identity normalized to index 0."""

    order: int
    table: tuple
    path: str | None = None


@dataclass(frozen=True)
class MatrixClosure:
    """Invertible dim x dim generators over F_p, closed under product."""

    p: int
    dim: int
    generators: tuple
    cap: int = 10**6


GroupDescription = Union[Metacyclic, CayleyTable, MatrixClosure]


# ---------------------------------------------------------------------------
# base class


class Group:
    """Uniform interface over the three realizations.

    Subclasses provide ``order``, ``identity``, ``mul``, ``inv``,
    ``elements``, ``element_index``, ``contains`` and ``spec_string``.
    Everything else (orders, powers, conjugacy, Frattini data) is shared,
    with realization-specific fast paths where the closed form exists.
    """

    order: int
    identity: Element

    def __init__(self) -> None:
        self._order_cache: dict = {}
        self._class_cache: dict = {}
        self._power_class_cache: dict = {}
        self._frattini = None
        self._generators = None

    # -- realization hooks --------------------------------------------------

    def mul(self, g: Element, h: Element) -> Element:
        raise NotImplementedError

    def inv(self, g: Element) -> Element:
        raise NotImplementedError

    def elements(self) -> list:
        """All elements in canonical enumeration order (identity first)."""
        raise NotImplementedError

    def element_index(self, g: Element) -> int:
        """Position of g in the canonical enumeration."""
        raise NotImplementedError

    def contains(self, g: Element) -> bool:
        raise NotImplementedError

    def spec_string(self) -> str:
        raise NotImplementedError

    def description(self) -> GroupDescription:
        raise NotImplementedError

    # -- shared machinery ----------------------------------------------------

    def require(self, g: Element, role: str = "element") -> None:
        if not self.contains(g):
            raise MismatchedGroups(f"{role} {g!r} is not in {self.spec_string()}")

    def power(self, g: Element, k: int) -> Element:
        """g^k by square and multiply; negative k goes through the inverse."""
        if k < 0:
            return self.power(self.inv(g), -k)
        acc = self.identity
        base = g
        while k:
            if k & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            k >>= 1
        return acc

    def element_order(self, g: Element) -> int:
        """Least k >= 1 with g^k = 1, by direct iteration (groups are small)."""
        cached = self._order_cache.get(g)
        if cached is not None:
            return cached
        n = 1
        h = g
        while h != self.identity:
            h = self.mul(h, g)
            n += 1
            if n > self.order:
                raise NotAGroup(f"no power of {g!r} reached the identity")
        self._order_cache[g] = n
        return n

    def conjugate(self, g: Element, h: Element) -> Element:
        """g h g^-1."""
        return self.mul(self.mul(g, h), self.inv(g))

    def conjugacy_class(self, g: Element) -> list:
        """The full conjugacy class, sorted in canonical element order."""
        orbit = {self.conjugate(c, g) for c in self.elements()}
        return sorted(orbit, key=self.element_index)

    def conjugacy_class_id(self, g: Element) -> Element:
        """Canonical identifier: the least element of the orbit.

        Generic path enumerates the orbit once and memoizes it for every
        member; the metacyclic realization overrides this with the
        closed-form orbit.
        """
        cached = self._class_cache.get(g)
        if cached is not None:
            return cached
        orbit = self.conjugacy_class(g)
        rep = orbit[0]
        for member in orbit:
            self._class_cache[member] = rep
        return rep

    def power_class_ids(self, g: Element) -> frozenset:
        """Class ids of the nontrivial powers g^k, 1 <= k < order(g)."""
        cached = self._power_class_cache.get(g)
        if cached is not None:
            return cached
        ids = set()
        h = g
        while h != self.identity:
            ids.add(self.conjugacy_class_id(h))
            h = self.mul(h, g)
        out = frozenset(ids)
        self._power_class_cache[g] = out
        return out

    def is_p_group(self) -> tuple[bool, int | None]:
        if self.order == 1:
            return True, None
        pp = prime_power_decomposition(self.order)
        if pp is None:
            return False, None
        return True, pp[0]

    def generating_set(self) -> list:
        """A small generating set, found greedily in canonical order."""
        if self._generators is not None:
            return list(self._generators)
        gens: list = []
        closure = {self.identity}
        for g in self.elements():
            if g in closure:
                continue
            gens.append(g)
            closure = _subgroup_closure(self, closure | {g})
            if len(closure) == self.order:
                break
        self._generators = tuple(gens)
        return list(gens)

    def frattini_quotient(self) -> "FrattiniQuotientMap":
        """Quotient by the subgroup generated by p-th powers and commutators."""
        if self._frattini is None:
            self._frattini = _generic_frattini_quotient(self)
        return self._frattini

    def cayley_table_data(self) -> list[list[int]]:
        """Raw order x order index table in canonical enumeration order."""
        elems = self.elements()
        index = self.element_index
        return [[index(self.mul(g, h)) for h in elems] for g in elems]

    def to_cayley_table(self) -> "CayleyExport":
        """Export as a validated CayleyTableGroup plus the correspondence."""
        table = self.cayley_table_data()
        group = CayleyTableGroup(CayleyTable(self.order, _freeze_table(table)))
        elems = self.elements()
        return CayleyExport(
            group=group,
            from_index=list(elems),
            to_index={g: i for i, g in enumerate(elems)},
        )

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.spec_string()} order={self.order}>"


@dataclass(eq=False)
class CayleyExport:
    group: "CayleyTableGroup"
    from_index: list
    to_index: dict


def _freeze_table(table: Sequence[Sequence[int]]) -> tuple:
    return tuple(tuple(int(v) for v in row) for row in table)


# ---------------------------------------------------------------------------
# metacyclic realization


class MetacyclicGroup(Group):
    """Z/p^m twisted by Z/p^n; the workhorse realization of the family."""

    def __init__(self, desc: Metacyclic):
        super().__init__()
        p, m, n, lam = desc.p, desc.m, desc.n, desc.lam
        if not is_prime(p):
            raise InvalidLambda(f"p={p} is not prime")
        if m < 1 or n < 1:
            raise InvalidLambda(f"exponents must be >= 1, got m={m}, n={n}")
        pm = p**m
        pn = p**n
        lam %= pm
        if math.gcd(lam, p) != 1:
            raise InvalidLambda(f"lambda={lam} is not a unit mod {p}^{m}")
        if pow(lam, pn, pm) != 1:
            raise InvalidLambda(
                f"lambda={lam} has order not dividing {p}^{n} mod {p}^{m}"
            )
        self.p, self.m, self.n, self.lam = p, m, n, lam
        self.pm, self.pn = pm, pn
        self.order = pm * pn
        self.identity = (0, 0)
        # lam^x for every x; the group exponent keeps this table small
        self._lampow = [1] * pn
        for x in range(1, pn):
            self._lampow[x] = self._lampow[x - 1] * lam % pm
        self._lam_order = next(e for e in _p_power_range(p, n) if pow(lam, e, pm) == 1)
        self._desc = Metacyclic(p, m, n, lam)
        self._elements: list | None = None

    def mul(self, g, h):
        a, x = g
        b, y = h
        return ((a + self._lampow[x] * b) % self.pm, (x + y) % self.pn)

    def inv(self, g):
        a, x = g
        li = self._lampow[(self.pn - x) % self.pn]  # lam^-x since lam^(p^n) = 1
        return (-li * a % self.pm, (self.pn - x) % self.pn)

    def elements(self):
        if self._elements is None:
            self._elements = [
                (a, x) for a in range(self.pm) for x in range(self.pn)
            ]
        return self._elements

    def element_index(self, g):
        a, x = g
        return a * self.pn + x

    def contains(self, g):
        if not (isinstance(g, tuple) and len(g) == 2):
            return False
        a, x = g
        return isinstance(a, int) and isinstance(x, int) and 0 <= a < self.pm and 0 <= x < self.pn

    def conjugacy_class_id(self, g):
        # Conjugating (a, x) by (b, y) gives (lam^y a + (1 - lam^x) b, x), so
        # the orbit is the union over y of the coset lam^y a + (1 - lam^x) Z;
        # the least member is min_y (lam^y a mod d) with d = gcd(1 - lam^x, p^m).
        cached = self._class_cache.get(g)
        if cached is not None:
            return cached
        a, x = g
        d = math.gcd((1 - self._lampow[x]) % self.pm, self.pm)
        amin = min(self._lampow[y] * a % d for y in range(self._lam_order)) if d > 1 else 0
        rep = (amin, x)
        self._class_cache[g] = rep
        return rep

    def conjugacy_class(self, g):
        a, x = g
        d = math.gcd((1 - self._lampow[x]) % self.pm, self.pm)
        firsts = set()
        for y in range(self._lam_order):
            firsts.update(range(self._lampow[y] * a % d, self.pm, d))
        return sorted((c, x) for c in firsts)

    def frattini_quotient(self):
        if self._frattini is None:
            p = self.p
            target = self if (self.m == 1 and self.n == 1 and self.lam == 1) else MetacyclicGroup(
                Metacyclic(p, 1, 1, 1)
            )
            pm1 = self.pm // p
            pn1 = self.pn // p

            def fmap(g, _p=p):
                return (g[0] % _p, g[1] % _p)

            def fiber(t, _p=p, _pm1=pm1, _pn1=pn1):
                a, x = t
                return [
                    (a + i * _p, x + j * _p) for i in range(_pm1) for j in range(_pn1)
                ]

            def vector(g, _p=p):
                return (g[0] % _p, g[1] % _p)

            self._frattini = FrattiniQuotientMap(
                source=self, target=target, map=fmap, fiber=fiber, rank=2, vector=vector
            )
        return self._frattini

    def spec_string(self):
        return f"metacyclic:p={self.p},m={self.m},n={self.n},lambda={self.lam}"

    def description(self):
        return self._desc

    def generating_set(self):
        return [(1, 0), (0, 1)]

    def __getstate__(self):
        return self._desc

    def __setstate__(self, desc):
        self.__init__(desc)


def _p_power_range(p: int, n: int) -> Iterable[int]:
    e = 1
    for _ in range(n + 1):
        yield e
        e *= p


# ---------------------------------------------------------------------------
# Cayley-table realization


class CayleyTableGroup(Group):
    """Group given by an explicit table; audited at construction."""

    def __init__(self, desc: CayleyTable, _trusted: bool = False):
        super().__init__()
        table = [list(row) for row in desc.table]
        n = desc.order
        if len(table) != n or any(len(row) != n for row in table):
            raise NotAGroup(f"table shape does not match order {n}")
        for row in table:
            for v in row:
                if not isinstance(v, int) or not 0 <= v < n:
                    raise NotAGroup(f"table entry {v!r} out of range [0,{n})")
        if not _trusted:
            table = _normalize_identity(table)
            _audit_inverses(table)
            _audit_associativity(table)
        self.order = n
        self.identity = 0
        self.table = table
        self.inv_table = [next(j for j in range(n) if table[i][j] == 0) for i in range(n)]
        self.path = desc.path
        self._desc = CayleyTable(n, _freeze_table(table), desc.path)
        self._elements = list(range(n))

    def mul(self, g, h):
        return self.table[g][h]

    def inv(self, g):
        return self.inv_table[g]

    def elements(self):
        return self._elements

    def element_index(self, g):
        return g

    def contains(self, g):
        return isinstance(g, int) and 0 <= g < self.order

    def spec_string(self):
        if self.path:
            return f"cayley:{self.path}"
        return f"cayley:<inline order={self.order}>"

    def description(self):
        return self._desc

    @classmethod
    def from_json_file(cls, path: str | Path) -> "CayleyTableGroup":
        data = json.loads(Path(path).read_text())
        try:
            order = int(data["order"])
            table = data["table"]
        except (KeyError, TypeError, ValueError) as exc:
            raise NotAGroup(f"bad cayley JSON {path}: {exc}") from exc
        return cls(CayleyTable(order, _freeze_table(table), str(path)))

    def to_json(self) -> str:
        return json.dumps({"order": self.order, "table": self.table})

    def __getstate__(self):
        return self._desc

    def __setstate__(self, desc):
        self.__init__(desc, _trusted=True)


def _normalize_identity(table: list[list[int]]) -> list[list[int]]:
    """Find the two-sided identity and relabel it to index 0."""
    n = len(table)
    e = None
    for i in range(n):
        if all(table[i][j] == j == table[j][i] for j in range(n)):
            e = i
            break
    if e is None:
        raise NotAGroup("table has no two-sided identity")
    if e == 0:
        return table
    sigma = list(range(n))
    sigma[0], sigma[e] = e, 0  # transposition relabeling 0 <-> e
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            out[sigma[i]][sigma[j]] = sigma[table[i][j]]
    return out


def _audit_inverses(table: list[list[int]]) -> None:
    n = len(table)
    for i in range(n):
        if not any(table[i][j] == 0 == table[j][i] for j in range(n)):
            raise NotAGroup(f"element {i} has no two-sided inverse")


def _audit_associativity(table: list[list[int]]) -> None:
    """Light's test on a greedy magma-generating set."""
    n = len(table)
    reachable = {0}
    gens = []
    while len(reachable) < n:
        g = next(i for i in range(n) if i not in reachable)
        gens.append(g)
        frontier = [g]
        reachable.add(g)
        while frontier:
            nxt = []
            known = list(reachable)
            for a in frontier:
                for b in known:
                    for c in (table[a][b], table[b][a]):
                        if c not in reachable:
                            reachable.add(c)
                            nxt.append(c)
            frontier = nxt
    for g in gens:
        row = table[g]
        for a in range(n):
            ta = table[a]
            tag = table[ta[g]]
            if any(ta[row[b]] != tag[b] for b in range(n)):
                raise NotAGroup(f"associativity fails at generator {g}")


# ---------------------------------------------------------------------------
# matrix realization


class MatrixGroup(Group):
    """Closure of invertible matrices over F_p; elements are flat tuples."""

    def __init__(self, desc: MatrixClosure):
        super().__init__()
        p, dim, cap = desc.p, desc.dim, desc.cap
        if not is_prime(p):
            raise NotAGroup(f"p={p} is not prime")
        if dim < 1:
            raise NotAGroup(f"dim must be >= 1, got {dim}")
        gens = []
        for raw in desc.generators:
            if len(raw) != dim * dim:
                raise NotAGroup(f"generator has {len(raw)} entries, expected {dim * dim}")
            mat = tuple(int(v) % p for v in raw)
            if _det_mod_p(mat, dim, p) == 0:
                raise NotAGroup(f"generator {mat} is singular mod {p}")
            gens.append(mat)
        self.p, self.dim, self.cap = p, dim, cap
        self.identity = tuple(
            1 if i == j else 0 for i in range(dim) for j in range(dim)
        )
        closure = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for g in frontier:
                for h in gens:
                    prod = _matmul(g, h, dim, p)
                    if prod not in closure:
                        if len(closure) >= cap:
                            raise ClosureCapExceeded(
                                f"closure exceeded cap={cap} elements"
                            )
                        closure.add(prod)
                        nxt.append(prod)
            frontier = nxt
        rest = sorted(closure - {self.identity})
        self._elements = [self.identity] + rest
        self._index = {g: i for i, g in enumerate(self._elements)}
        self.order = len(self._elements)
        self.generators = tuple(gens)
        self._inv_cache: dict = {}
        self._desc = MatrixClosure(p, dim, tuple(gens), cap)

    def mul(self, g, h):
        return _matmul(g, h, self.dim, self.p)

    def inv(self, g):
        cached = self._inv_cache.get(g)
        if cached is None:
            cached = self.power(g, self.element_order(g) - 1)
            self._inv_cache[g] = cached
        return cached

    def elements(self):
        return self._elements

    def element_index(self, g):
        return self._index[g]

    def contains(self, g):
        return g in self._index

    def spec_string(self):
        gens = ";".join(",".join(str(v) for v in g) for g in self.generators)
        return f"matrix:p={self.p},dim={self.dim},gens={gens},cap={self.cap}"

    def description(self):
        return self._desc

    def generating_set(self):
        if not self.generators:
            return [self.identity]
        return list(self.generators)

    def __getstate__(self):
        return self._desc

    def __setstate__(self, desc):
        self.__init__(desc)


def _matmul(u: tuple, v: tuple, dim: int, p: int) -> tuple:
    return tuple(
        sum(u[i * dim + k] * v[k * dim + j] for k in range(dim)) % p
        for i in range(dim)
        for j in range(dim)
    )


def _det_mod_p(mat: tuple, dim: int, p: int) -> int:
    rows = [[mat[i * dim + j] % p for j in range(dim)] for i in range(dim)]
    det = 1
    for col in range(dim):
        pivot = next((r for r in range(col, dim) if rows[r][col] % p), None)
        if pivot is None:
            return 0
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        inv = pow(rows[col][col], -1, p)
        det = det * rows[col][col] % p
        for r in range(col + 1, dim):
            factor = rows[r][col] * inv % p
            if factor:
                rows[r] = [(rows[r][j] - factor * rows[col][j]) % p for j in range(dim)]
    return det % p


# ---------------------------------------------------------------------------
# Frattini quotients and the generation test


@dataclass(eq=False)
class FrattiniQuotientMap:
    """Surjection onto the maximal elementary abelian quotient.

    ``map`` sends elements down, ``fiber`` lists preimages in canonical
    order, ``vector`` exposes the image as an exponent tuple over F_p, and
    ``rank`` is the F_p-dimension of the target.
    """

    source: Group
    target: Group
    map: Callable
    fiber: Callable
    rank: int
    vector: Callable


def _subgroup_closure(G: Group, seed: set, conjugators: Sequence = ()) -> set:
    """Closure of seed under products (and conjugation, when asked)."""
    closure = set(seed)
    closure.add(G.identity)
    frontier = list(closure)
    while frontier:
        nxt = []
        members = list(closure)
        for t in frontier:
            for s in members:
                for prod in (G.mul(t, s), G.mul(s, t)):
                    if prod not in closure:
                        closure.add(prod)
                        nxt.append(prod)
            for c in conjugators:
                conj = G.conjugate(c, t)
                if conj not in closure:
                    closure.add(conj)
                    nxt.append(conj)
        frontier = nxt
    return closure


_ALL_PAIR_COMMUTATOR_LIMIT = 1024


def _generic_frattini_quotient(G: Group) -> FrattiniQuotientMap:
    ok, p = G.is_p_group()
    if not ok:
        raise NotAPGroup(f"{G.spec_string()} has order {G.order}, not a prime power")
    if G.order == 1:
        trivial = G

        def tmap(g):
            return g

        def tfiber(t):
            return [G.identity]

        def tvec(g):
            return ()

        return FrattiniQuotientMap(G, trivial, tmap, tfiber, 0, tvec)

    elems = G.elements()
    seeds = {G.power(g, p) for g in elems}
    gens = G.generating_set()
    if G.order <= _ALL_PAIR_COMMUTATOR_LIMIT:
        inv = G.inv
        for g in elems:
            gi = inv(g)
            for h in elems:
                seeds.add(G.mul(G.mul(g, h), G.mul(gi, inv(h))))
        phi = _subgroup_closure(G, seeds)
    else:
        for g in gens:
            for h in elems:
                seeds.add(G.mul(G.mul(g, h), G.mul(G.inv(g), G.inv(h))))
        phi = _subgroup_closure(G, seeds, conjugators=gens)

    phi_list = sorted(phi, key=G.element_index)
    qorder = G.order // len(phi_list)
    pp = prime_power_decomposition(qorder) if qorder > 1 else (p, 0)
    if pp is None or pp[0] != p:
        raise NotAGroup("Frattini quotient order is not a power of p")  # bug guard
    rank = pp[1]

    # least-member coset representatives
    rep: dict = {}
    for g in elems:
        if g in rep:
            continue
        for f in phi_list:
            rep[G.mul(g, f)] = g

    # greedy basis of the quotient as an F_p vector space
    basis: list = []
    span = {rep[G.identity]}
    for g in elems:
        r = rep[g]
        if r in span:
            continue
        basis.append(r)
        span = {
            rep[G.mul(s, G.power(r, e))] for s in span for e in range(p)
        }
        if len(basis) == rank:
            break
    if len(basis) != rank:
        raise NotAGroup("could not find a quotient basis")  # bug guard

    vec_of_rep: dict = {}
    for exps in _exponent_tuples(p, rank):
        el = G.identity
        for b, e in zip(basis, exps):
            el = G.mul(el, G.power(b, e))
        vec_of_rep[rep[el]] = exps
    if len(vec_of_rep) != qorder:
        raise NotAGroup("quotient coordinates are not unique")  # bug guard

    target, encode, decode = _elementary_abelian_target(p, rank)
    fibers: dict = {}
    for g in elems:
        fibers.setdefault(encode(vec_of_rep[rep[g]]), []).append(g)
    for t in fibers:
        fibers[t].sort(key=G.element_index)

    def fmap(g):
        return encode(vec_of_rep[rep[g]])

    def ffiber(t):
        return list(fibers[t])

    def fvector(g):
        return vec_of_rep[rep[g]]

    return FrattiniQuotientMap(G, target, fmap, ffiber, rank, fvector)


def _exponent_tuples(p: int, rank: int):
    if rank == 0:
        yield ()
        return
    for head in _exponent_tuples(p, rank - 1):
        for e in range(p):
            yield head + (e,)


def _elementary_abelian_target(p: int, rank: int):
    """Target realization plus encode/decode between exponent tuples and it."""
    if rank == 2:
        target = MetacyclicGroup(Metacyclic(p, 1, 1, 1))
        return target, (lambda v: (v[0], v[1])), (lambda g: (g[0], g[1]))
    size = p**rank
    table = [
        [_vec_to_index(_vec_add(_index_to_vec(i, p, rank), _index_to_vec(j, p, rank), p), p)
         for j in range(size)]
        for i in range(size)
    ]
    target = CayleyTableGroup(CayleyTable(size, _freeze_table(table)), _trusted=True)
    return (
        target,
        lambda v: _vec_to_index(v, p),
        lambda g: _index_to_vec(g, p, rank),
    )


def _index_to_vec(i: int, p: int, rank: int) -> tuple:
    digits = []
    for _ in range(rank):
        i, d = divmod(i, p)
        digits.append(d)
    return tuple(reversed(digits))


def _vec_to_index(v: tuple, p: int) -> int:
    i = 0
    for d in v:
        i = i * p + d
    return i


def _vec_add(u: tuple, v: tuple, p: int) -> tuple:
    return tuple((a + b) % p for a, b in zip(u, v))


def _fp_rank(vectors: list, p: int) -> int:
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return 0
    width = len(rows[0])
    rank = 0
    for col in range(width):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] % p), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [v * inv % p for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] % p:
                f = rows[i][col]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def generates(G: Group, S: Iterable) -> bool:
    """True iff S generates G.

    p-groups go through the Frattini criterion (images must span the
    elementary abelian quotient); other groups use breadth-first closure.
    """
    S = list(S)
    if not S:
        raise ValueError("S must be nonempty")
    for g in S:
        G.require(g, "generator")
    ok, p = G.is_p_group()
    if ok and G.order > 1:
        fq = G.frattini_quotient()
        return _fp_rank([fq.vector(g) for g in S], p) == fq.rank
    return len(_subgroup_closure(G, set(S))) == G.order


# ---------------------------------------------------------------------------
# spec-string mini-grammar and the front door


def make_group(spec: GroupDescription | str) -> Group:
    """Validate a description (or spec string) and return the group handle."""
    if isinstance(spec, str):
        spec = parse_group_spec(spec)
    if isinstance(spec, Metacyclic):
        return MetacyclicGroup(spec)
    if isinstance(spec, CayleyTable):
        return CayleyTableGroup(spec)
    if isinstance(spec, MatrixClosure):
        return MatrixGroup(spec)
    raise TypeError(f"not a group description: {spec!r}")


def parse_group_spec(text: str) -> GroupDescription:
    """Parse the mini-grammar shared by the CLI and file headers.

    ``metacyclic:p=<prime>,m=<int>,n=<int>,lambda=<int>``
    ``cayley:<path>`` with a JSON object ``{order, table}``
    ``matrix:p=<prime>,dim=<int>,gens=<semicolon-separated lists>,cap=<int>``
    """
    kind, _, rest = text.partition(":")
    if kind == "metacyclic":
        fields = _parse_fields(rest, {"p", "m", "n", "lambda"})
        try:
            return Metacyclic(
                int(fields["p"]), int(fields["m"]), int(fields["n"]), int(fields["lambda"])
            )
        except (KeyError, ValueError) as exc:
            raise ValueError(f"bad metacyclic spec {text!r}: {exc}") from exc
    if kind == "cayley":
        if not rest:
            raise ValueError("cayley spec needs a file path")
        data = json.loads(Path(rest).read_text())
        return CayleyTable(int(data["order"]), _freeze_table(data["table"]), rest)
    if kind == "matrix":
        fields = _parse_fields(rest, {"p", "dim", "gens", "cap"})
        try:
            gens = tuple(
                tuple(int(v) for v in part.split(",") if v != "")
                for part in fields["gens"].split(";")
            )
            cap = int(fields.get("cap", 10**6))
            return MatrixClosure(int(fields["p"]), int(fields["dim"]), gens, cap)
        except (KeyError, ValueError) as exc:
            raise ValueError(f"bad matrix spec {text!r}: {exc}") from exc
    raise ValueError(f"unknown group spec kind {kind!r} in {text!r}")


def _parse_fields(rest: str, keys: set) -> dict:
    """Split key=value fields; bare tokens continue the previous value."""
    fields: dict = {}
    current = None
    for token in rest.split(","):
        head, eq, tail = token.partition("=")
        if eq and head in keys:
            fields[head] = tail
            current = head
        elif current is not None:
            fields[current] += "," + token
        else:
            raise ValueError(f"unexpected token {token!r}")
    return fields
