"""Entropy functions and quasi-uniform supports from finite groups,
subgroup families, finite-field subspace families, and explicit supports."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple, Union

from .exactlog import ZERO, LogScalar
from .ffield import GF, Matrix
from .setfunc import GroundSet, SetFunction


class FiniteGroup:
    """Finite group given by an explicit multiplication table over 0..n-1.

    Associativity is fully verified up to order 64 and random-sampled above.
    """

    __slots__ = ("order", "table", "identity")

    def __init__(self, table: Sequence[Sequence[int]], validate: bool = True):
        n = len(table)
        self.order = n
        self.table = tuple(tuple(row) for row in table)
        ident = None
        for e in range(n):
            if all(self.table[e][x] == x and self.table[x][e] == x for x in range(n)):
                ident = e
                break
        if ident is None:
            raise ValueError("no identity element")
        self.identity = ident
        if validate:
            self._validate()

    def _validate(self) -> None:
        n = self.order
        for row in self.table:
            if sorted(row) != list(range(n)):
                raise ValueError("multiplication table rows must be permutations")
        for j in range(n):
            col = sorted(self.table[i][j] for i in range(n))
            if col != list(range(n)):
                raise ValueError("multiplication table columns must be permutations")
        for x in range(n):
            if all(self.table[x][y] != self.identity for y in range(n)):
                raise ValueError(f"element {x} has no inverse")
        if n <= 64:
            triples = itertools.product(range(n), repeat=3)
        else:
            rng = random.Random(0)
            triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(20000))
        t = self.table
        for a, b, c in triples:
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise ValueError(f"associativity fails at ({a},{b},{c})")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        for b in range(self.order):
            if self.table[a][b] == self.identity:
                return b
        raise ValueError("no inverse")

    def is_subgroup(self, elems: FrozenSet[int]) -> bool:
        if self.identity not in elems:
            return False
        return all(self.table[a][b] in elems for a in elems for b in elems)

    def closure(self, gens: Sequence[int]) -> FrozenSet[int]:
        elems = {self.identity, *gens}
        frontier = list(elems)
        while frontier:
            new = []
            for a in list(elems):
                for b in frontier:
                    for c in (self.table[a][b], self.table[b][a]):
                        if c not in elems:
                            elems.add(c)
                            new.append(c)
            frontier = new
        return frozenset(elems)

    def all_subgroups(self) -> List[FrozenSet[int]]:
        """All subgroups, found as closures of generator sets of size <= 2
        plus iterated extension (sufficient for order <= 24: every group of
        such order has subgroups generated by at most 3 elements)."""
        found = {frozenset([self.identity])}
        n = self.order
        for a in range(n):
            found.add(self.closure([a]))
        for a in range(n):
            for b in range(a + 1, n):
                found.add(self.closure([a, b]))
        # one more generator round to catch e.g. the elementary abelian (2,2,2)
        extra = set()
        for sub in found:
            for c in range(n):
                if c not in sub:
                    extra.add(self.closure(list(sub) + [c]))
        found |= extra
        return sorted(found, key=lambda s: (len(s), sorted(s)))

    def to_json(self) -> dict:
        return {
            "format": "group/1",
            "order": self.order,
            "identity": self.identity,
            "table": [list(r) for r in self.table],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "FiniteGroup":
        if obj.get("format", "group/1") != "group/1":
            raise ValueError(f"unexpected format {obj.get('format')!r}")
        return cls(obj["table"])

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"


def cyclic(n: int) -> FiniteGroup:
    return FiniteGroup([[(i + j) % n for j in range(n)] for i in range(n)], validate=False)


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    n, m = g.order, h.order
    table = [
        [(g.table[a][c] * m + h.table[b][d]) for c in range(n) for d in range(m)]
        for a in range(n)
        for b in range(m)
    ]
    return FiniteGroup(table, validate=False)


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n: elements r^i s^j encoded as 2*i + j."""

    def mul(x: int, y: int) -> int:
        i1, j1 = divmod(x, 2)
        i2, j2 = divmod(y, 2)
        if j1 == 0:
            return 2 * ((i1 + i2) % n) + j2
        return 2 * ((i1 - i2) % n) + (1 - j2 if j2 else 1)

    table = [[mul(x, y) for y in range(2 * n)] for x in range(2 * n)]
    return FiniteGroup(table)


def symmetric(n: int) -> FiniteGroup:
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [
        [index[tuple(p[q[i]] for i in range(n))] for q in perms]
        for p in perms
    ]
    return FiniteGroup(table, validate=False)


def quaternion() -> FiniteGroup:
    """Quaternion group Q8: elements ±1, ±i, ±j, ±k as 0..7."""
    # encode: 0:1, 1:-1, 2:i, 3:-i, 4:j, 5:-j, 6:k, 7:-k
    base = {  # products of generators i, j, k
        ("i", "i"): ("-", "1"), ("j", "j"): ("-", "1"), ("k", "k"): ("-", "1"),
        ("i", "j"): ("+", "k"), ("j", "i"): ("-", "k"),
        ("j", "k"): ("+", "i"), ("k", "j"): ("-", "i"),
        ("k", "i"): ("+", "j"), ("i", "k"): ("-", "j"),
    }
    names = ["1", "1", "i", "i", "j", "j", "k", "k"]
    signs = [1, -1, 1, -1, 1, -1, 1, -1]

    def mul(x: int, y: int) -> int:
        nx, ny = names[x], names[y]
        s = signs[x] * signs[y]
        if nx == "1":
            nz = ny
        elif ny == "1":
            nz = nx
        else:
            sg, nz = base[(nx, ny)]
            if sg == "-":
                s = -s
        idx = {"1": 0, "i": 2, "j": 4, "k": 6}[nz]
        return idx if s > 0 else idx + 1

    table = [[mul(x, y) for y in range(8)] for x in range(8)]
    return FiniteGroup(table)


@dataclass(frozen=True)
class SubgroupFamily:
    parent: FiniteGroup
    members: Tuple[FrozenSet[int], ...]

    def __init__(self, parent: FiniteGroup, members: Sequence[Sequence[int]]):
        mem = tuple(frozenset(m) for m in members)
        for i, sub in enumerate(mem):
            if not parent.is_subgroup(sub):
                raise ValueError(f"member {i} is not a subgroup (not closed or missing identity)")
        object.__setattr__(self, "parent", parent)
        object.__setattr__(self, "members", mem)

    @property
    def arity(self) -> int:
        return len(self.members)

    def to_json(self) -> dict:
        return {
            "format": "subgroupfamily/1",
            "group": self.parent.to_json(),
            "members": [sorted(m) for m in self.members],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "SubgroupFamily":
        if obj.get("format", "subgroupfamily/1") != "subgroupfamily/1":
            raise ValueError(f"unexpected format {obj.get('format')!r}")
        return cls(FiniteGroup.from_json(obj["group"]), obj["members"])


@dataclass(frozen=True)
class SubspaceFamily:
    q: int
    ambient_dim: int
    members: Tuple[Tuple[Tuple[int, ...], ...], ...]

    def __init__(self, q: int, ambient_dim: int, members: Sequence[Sequence[Sequence[int]]]):
        gf = GF(q)  # validates that q is a prime power
        mem = []
        for i, basis in enumerate(members):
            rows = [tuple(int(x) for x in r) for r in basis]
            for r in rows:
                if len(r) != ambient_dim or any(not 0 <= x < q for x in r):
                    raise ValueError(f"member {i}: bad basis vector {r}")
            if rows and gf.rank([list(r) for r in rows]) != len(rows):
                raise ValueError(f"member {i}: basis is rank-deficient")
            mem.append(tuple(rows))
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "members", tuple(mem))

    @property
    def arity(self) -> int:
        return len(self.members)

    @property
    def gf(self) -> GF:
        return GF(self.q)

    def intersection_basis(self, indices: Sequence[int]) -> Matrix:
        gf = self.gf
        it = iter(indices)
        try:
            first = next(it)
        except StopIteration:
            return gf.identity(self.ambient_dim)
        cur = [list(r) for r in self.members[first]]
        for i in it:
            cur = gf.intersect(cur, [list(r) for r in self.members[i]])
        return cur

    def entropy_at(self, indices: Sequence[int]) -> LogScalar:
        """(ambient_dim - dim of the indexed intersection) * log q."""
        if not indices:
            return ZERO
        d = len(self.intersection_basis(indices))
        return LogScalar.log_int(self.q) * (self.ambient_dim - d)

    def to_json(self) -> dict:
        return {
            "format": "subspacefamily/1",
            "q": self.q,
            "ambient_dim": self.ambient_dim,
            "members": [[list(r) for r in m] for m in self.members],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "SubspaceFamily":
        if obj.get("format", "subspacefamily/1") != "subspacefamily/1":
            raise ValueError(f"unexpected format {obj.get('format')!r}")
        return cls(obj["q"], obj["ambient_dim"], obj["members"])


@dataclass(frozen=True)
class SupportSet:
    arity: int
    alphabets: Tuple[Tuple[object, ...], ...]
    tuples: FrozenSet[tuple]

    def __init__(self, arity: int, alphabets: Sequence[Sequence[object]], tuples):
        tups = frozenset(tuple(t) for t in tuples)
        if not tups:
            raise ValueError("support must be nonempty")
        alph = tuple(tuple(a) for a in alphabets)
        if len(alph) != arity:
            raise ValueError("need one alphabet per coordinate")
        for t in tups:
            if len(t) != arity:
                raise ValueError(f"tuple {t} has wrong arity")
            for x, a in zip(t, alph):
                if x not in a:
                    raise ValueError(f"symbol {x!r} missing from its coordinate alphabet")
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "alphabets", alph)
        object.__setattr__(self, "tuples", tups)

    def sorted_tuples(self) -> List[tuple]:
        """Tuples in lexicographic order of per-coordinate alphabet positions."""
        pos = [{x: i for i, x in enumerate(a)} for a in self.alphabets]
        return sorted(self.tuples, key=lambda t: tuple(pos[i][x] for i, x in enumerate(t)))

    def project(self, coords: Sequence[int]) -> Dict[tuple, int]:
        """Projection multiplicities onto the given coordinates."""
        out: Dict[tuple, int] = {}
        for t in self.tuples:
            key = tuple(t[c] for c in coords)
            out[key] = out.get(key, 0) + 1
        return out

    def to_json(self) -> dict:
        return {
            "format": "support/1",
            "arity": self.arity,
            "alphabets": [list(a) for a in self.alphabets],
            "tuples": sorted(list(t) for t in self.sorted_tuples()),
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "SupportSet":
        if obj.get("format", "support/1") != "support/1":
            raise ValueError(f"unexpected format {obj.get('format')!r}")
        alph = [[_dejson_sym(x) for x in a] for a in obj["alphabets"]]
        tups = [tuple(_dejson_sym(x) for x in t) for t in obj["tuples"]]
        return cls(obj["arity"], alph, tups)


def _dejson_sym(x):
    # JSON round-trips tuples as lists; normalize back
    if isinstance(x, list):
        return tuple(_dejson_sym(y) for y in x)
    return x


def _default_ground(n: int) -> GroundSet:
    return GroundSet([str(i + 1) for i in range(n)])


def entropy_from_subgroups(fam: SubgroupFamily) -> SetFunction:
    """f(α) = log(|G| / |∩_{i∈α} G_i|)."""
    order = fam.parent.order
    n = fam.arity
    ground = _default_ground(n)
    values = [ZERO]
    for mask in range(1, 1 << n):
        inter = None
        for i in range(n):
            if mask >> i & 1:
                inter = fam.members[i] if inter is None else inter & fam.members[i]
        values.append(LogScalar.log_fraction(order, len(inter)))
    return SetFunction(ground, values)


def entropy_from_subspaces(fam: SubspaceFamily) -> SetFunction:
    ground = _default_ground(fam.arity)
    values = [ZERO]
    for mask in range(1, 1 << fam.arity):
        idx = [i for i in range(fam.arity) if mask >> i & 1]
        values.append(fam.entropy_at(idx))
    return SetFunction(ground, values)


def coset_support(fam: Union[SubgroupFamily, SubspaceFamily]) -> SupportSet:
    """Joint support of the coset-index variables U_i: scan group elements in
    canonical order and record, per element, the tuple of left-coset indices
    (first-encounter numbering)."""
    if isinstance(fam, SubspaceFamily):
        fam = subgroup_family_from_subspaces(fam)
    g = fam.parent
    n = fam.arity
    coset_ids: List[Dict[FrozenSet[int], int]] = [{} for _ in range(n)]
    alphabets: List[List[int]] = [[] for _ in range(n)]
    tuples = []
    for x in range(g.order):
        idx = []
        for i, sub in enumerate(fam.members):
            coset = frozenset(g.mul(x, s) for s in sub)  # left coset x·G_i
            if coset not in coset_ids[i]:
                coset_ids[i][coset] = len(coset_ids[i])
                alphabets[i].append(coset_ids[i][coset])
            idx.append(coset_ids[i][coset])
        tuples.append(tuple(idx))
    return SupportSet(n, alphabets, tuples)


def subgroup_family_from_subspaces(fam: SubspaceFamily) -> SubgroupFamily:
    """View an F_q subspace family as subgroups of the additive group of the
    ambient space (element order = vector index order)."""
    gf = fam.gf
    n = fam.ambient_dim
    vecs = list(gf.all_vectors(n))
    index = {v: i for i, v in enumerate(vecs)}
    table = [
        [index[tuple(gf.add(a, b) for a, b in zip(u, v))] for v in vecs]
        for u in vecs
    ]
    group = FiniteGroup(table, validate=False)
    members = []
    for basis in fam.members:
        elems = set()
        for coeffs in gf.all_vectors(len(basis)) if basis else [()]:
            vec = [0] * n
            for c, row in zip(coeffs, basis):
                if c:
                    vec = gf.vec_add(vec, gf.vec_scale(c, row))
            elems.add(index[tuple(vec)])
        if not basis:
            elems = {index[tuple([0] * n)]}
        members.append(elems)
    return SubgroupFamily(group, members)


@dataclass(frozen=True)
class QuasiUniformResult:
    ok: bool
    entropy: Optional[SetFunction]
    failing: Tuple[Tuple[int, ...], ...]  # coordinate index sets that fail


def quasi_uniform_check(s: SupportSet) -> QuasiUniformResult:
    """Every projection must be uniform on its support; if so, the entropy
    function is α ↦ log of the projected support size."""
    n = s.arity
    values: List[LogScalar] = [ZERO]
    failing: List[Tuple[int, ...]] = []
    for mask in range(1, 1 << n):
        coords = [i for i in range(n) if mask >> i & 1]
        proj = s.project(coords)
        counts = set(proj.values())
        if len(counts) != 1:
            failing.append(tuple(coords))
            values.append(ZERO)
        else:
            values.append(LogScalar.log_int(len(proj)))
    if failing:
        return QuasiUniformResult(False, None, tuple(failing))
    return QuasiUniformResult(True, SetFunction(_default_ground(n), values), ())


def builtin_function(name: str, a: Union[int, Fraction] = 1) -> SetFunction:
    """Named example functions with exact printed values."""
    ground = _default_ground(4)
    if name in ("zy", "zy_counterexample"):
        a = Fraction(a)
        if a <= 0:
            raise ValueError("parameter must be positive")
        vals: Dict[tuple, Fraction] = {}
        for r in range(1, 5):
            for combo in itertools.combinations("1234", r):
                key = tuple(combo)
                if r == 1:
                    vals[key] = 2 * a
                elif r == 2:
                    vals[key] = 4 * a if set(combo) == {"3", "4"} else 3 * a
                else:
                    vals[key] = 4 * a
        return SetFunction.from_log2(ground, vals)
    if name in ("projective-plane", "projective_plane"):
        l13 = LogScalar.log_int(13)
        l6 = LogScalar.log_int(6)
        l12 = LogScalar.log_int(12)
        l4 = LogScalar.log_int(4)
        vals2: Dict[tuple, LogScalar] = {}
        for r in range(1, 5):
            for combo in itertools.combinations("1234", r):
                key = tuple(combo)
                if r == 1:
                    vals2[key] = l13
                elif r == 2:
                    if set(combo) == {"1", "2"}:
                        vals2[key] = l6 + l13
                    elif set(combo) == {"3", "4"}:
                        vals2[key] = l13 + l12
                    else:
                        vals2[key] = l13 + l4
                else:
                    vals2[key] = l13 + l12
        return SetFunction.from_dict(ground, vals2)
    raise ValueError(f"unknown builtin function {name!r}")
