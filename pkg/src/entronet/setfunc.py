"""Set functions over finite ground sets with exact log-valued entries.

Subsets are encoded as bitmasks: bit ``i`` corresponds to the ground label at
position ``i``; all iteration is in increasing mask order so reports and
serialized output are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from .exactlog import ZERO, LogScalar

SubsetLike = Union[int, Iterable[str]]


class GroundSet:
    """Ordered list of distinct element labels."""

    __slots__ = ("labels", "_index")

    def __init__(self, labels: Sequence[str]):
        labels = tuple(str(x) for x in labels)
        if len(labels) < 1:
            raise ValueError("ground set must have at least one element")
        if len(set(labels)) != len(labels):
            raise ValueError("ground labels must be distinct")
        self.labels = labels
        self._index = {lab: i for i, lab in enumerate(labels)}

    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GroundSet) and self.labels == other.labels

    def __hash__(self) -> int:
        return hash(self.labels)

    def __repr__(self) -> str:
        return f"GroundSet({list(self.labels)})"

    @property
    def full_mask(self) -> int:
        return (1 << len(self.labels)) - 1

    def mask(self, subset: SubsetLike) -> int:
        if isinstance(subset, int):
            if not 0 <= subset <= self.full_mask:
                raise ValueError(f"mask {subset} out of range")
            return subset
        m = 0
        for lab in subset:
            lab = str(lab)
            if lab not in self._index:
                raise KeyError(f"label {lab!r} not in ground set")
            m |= 1 << self._index[lab]
        return m

    def subset(self, mask: int) -> Tuple[str, ...]:
        return tuple(lab for i, lab in enumerate(self.labels) if mask >> i & 1)


class SetFunction:
    """Map from subsets of a ground set to LogScalar, zero at the empty set."""

    __slots__ = ("ground", "values")

    def __init__(self, ground: Union[GroundSet, Sequence[str]], values: Sequence[LogScalar]):
        if not isinstance(ground, GroundSet):
            ground = GroundSet(ground)
        values = list(values)
        if len(values) != 1 << len(ground):
            raise ValueError(
                f"expected {1 << len(ground)} values for ground of size {len(ground)}, "
                f"got {len(values)}"
            )
        if not values[0].is_zero():
            raise ValueError("value at the empty set must be zero")
        self.ground = ground
        self.values = values

    @classmethod
    def from_dict(
        cls,
        ground: Union[GroundSet, Sequence[str]],
        mapping: Mapping[SubsetLike, LogScalar],
    ) -> "SetFunction":
        if not isinstance(ground, GroundSet):
            ground = GroundSet(ground)
        values = [ZERO] * (1 << len(ground))
        seen = {0}
        for key, val in mapping.items():
            m = ground.mask(key)
            values[m] = val
            seen.add(m)
        missing = [ground.subset(m) for m in range(1 << len(ground)) if m not in seen]
        if missing:
            raise ValueError(f"missing values for subsets: {missing[:5]}")
        return cls(ground, values)

    @classmethod
    def from_log2(
        cls,
        ground: Union[GroundSet, Sequence[str]],
        mapping: Mapping[SubsetLike, Union[int, Fraction]],
    ) -> "SetFunction":
        """Convenience: values given as rational multiples of log 2."""
        return cls.from_dict(
            ground, {k: LogScalar({2: Fraction(v)}) for k, v in mapping.items()}
        )

    @classmethod
    def zero(cls, ground: Union[GroundSet, Sequence[str]]) -> "SetFunction":
        if not isinstance(ground, GroundSet):
            ground = GroundSet(ground)
        return cls(ground, [ZERO] * (1 << len(ground)))

    def __call__(self, subset: SubsetLike) -> LogScalar:
        return self.values[self.ground.mask(subset)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SetFunction):
            return NotImplemented
        return self.ground == other.ground and self.values == other.values

    def __add__(self, other: "SetFunction") -> "SetFunction":
        if self.ground != other.ground:
            raise ValueError("ground sets differ")
        return SetFunction(self.ground, [a + b for a, b in zip(self.values, other.values)])

    def scale(self, c: Union[int, Fraction]) -> "SetFunction":
        return SetFunction(self.ground, [v * c for v in self.values])

    def restrict(self, subset: SubsetLike) -> "SetFunction":
        """Restriction to a subset of the ground set (label order preserved)."""
        keep = self.ground.mask(subset)
        labels = self.ground.subset(keep)
        positions = [i for i in range(len(self.ground)) if keep >> i & 1]
        values = []
        for m in range(1 << len(labels)):
            big = 0
            for j, pos in enumerate(positions):
                if m >> j & 1:
                    big |= 1 << pos
            values.append(self.values[big])
        return SetFunction(GroundSet(labels), values)

    def __repr__(self) -> str:
        return f"SetFunction(ground={list(self.ground.labels)}, n={len(self.ground)})"

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        vals = {}
        for m in range(1, 1 << len(self.ground)):
            key = ",".join(self.ground.subset(m))
            vals[key] = self.values[m].to_json()
        return {"format": "setfunction/1", "ground": list(self.ground.labels), "values": vals}

    @classmethod
    def from_json(cls, obj: Mapping) -> "SetFunction":
        if obj.get("format", "setfunction/1") != "setfunction/1":
            raise ValueError(f"unexpected format {obj.get('format')!r}")
        ground = GroundSet(obj["ground"])
        values = [ZERO] * (1 << len(ground))
        seen = {0}
        for key, val in obj["values"].items():
            labels = [] if key == "" else key.split(",")
            m = ground.mask(labels)
            values[m] = LogScalar.from_json(val)
            seen.add(m)
        missing = [m for m in range(1 << len(ground)) if m not in seen]
        if missing:
            raise ValueError(
                f"missing values for subsets {[','.join(ground.subset(m)) for m in missing[:5]]}"
            )
        return cls(ground, values)


@dataclass(frozen=True)
class Violation:
    family: str
    subsets: Tuple[Tuple[str, ...], ...]
    slack: LogScalar


@dataclass(frozen=True)
class ViolationReport:
    kind: str
    instances: Tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.instances

    def to_json(self) -> dict:
        return {
            "format": "violationreport/1",
            "kind": self.kind,
            "ok": self.ok,
            "instances": [
                {
                    "family": v.family,
                    "subsets": [list(s) for s in v.subsets],
                    "slack": v.slack.to_json(),
                }
                for v in self.instances
            ],
        }


def scalar_sign(x: LogScalar) -> int:
    return x.sign()


def check_polymatroid(f: SetFunction) -> ViolationReport:
    """Elemental Shannon checks: single-element monotonicity at the top and
    pairwise conditional submodularity; these imply the full axioms."""
    g = f.ground
    n = len(g)
    full = g.full_mask
    vals = f.values
    out: List[Violation] = []
    for i in range(n):
        slack = vals[full] - vals[full & ~(1 << i)]
        if slack.sign() < 0:
            out.append(
                Violation("monotonicity", (g.subset(full & ~(1 << i)), g.subset(full)), slack)
            )
    for i in range(n):
        for j in range(i + 1, n):
            bi, bj = 1 << i, 1 << j
            rest = full & ~(bi | bj)
            a = rest
            while True:
                slack = vals[a | bi] + vals[a | bj] - vals[a | bi | bj] - vals[a]
                if slack.sign() < 0:
                    out.append(
                        Violation(
                            "submodularity",
                            (g.subset(a | bi), g.subset(a | bj), g.subset(a)),
                            slack,
                        )
                    )
                if a == 0:
                    break
                a = (a - 1) & rest
    out.sort(key=lambda v: (v.family, v.subsets))
    return ViolationReport("polymatroid", tuple(out))


def conditional_entropy(f: SetFunction, A: SubsetLike, B: SubsetLike) -> LogScalar:
    a = f.ground.mask(A)
    b = f.ground.mask(B)
    return f.values[a | b] - f.values[b]


def is_function_of(f: SetFunction, X: SubsetLike, A: SubsetLike) -> bool:
    x = f.ground.mask(X)
    a = f.ground.mask(A)
    return f.values[x | a] == f.values[a]


def is_independent(f: SetFunction, parts: Sequence[SubsetLike]) -> bool:
    masks = [f.ground.mask(p) for p in parts]
    union = 0
    for m in masks:
        if union & m:
            raise ValueError("parts must be pairwise disjoint")
        union |= m
    total = ZERO
    for m in masks:
        total = total + f.values[m]
    return f.values[union] == total


def _ordered_quadruples(n: int):
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    if len({a, b, c, d}) == 4:
                        yield a, b, c, d


def check_ingleton(f: SetFunction) -> ViolationReport:
    """g(12)+g(13)+g(14)+g(23)+g(24) >= g(1)+g(2)+g(34)+g(123)+g(124),
    evaluated over every ordered assignment of 4 distinct elements."""
    g = f.ground
    n = len(g)
    if n < 4:
        raise ValueError("Ingleton check requires at least 4 ground elements")
    v = f.values
    out: List[Violation] = []
    for a, b, c, d in _ordered_quadruples(n):
        A, B, C, D = 1 << a, 1 << b, 1 << c, 1 << d
        slack = (
            v[A | B] + v[A | C] + v[A | D] + v[B | C] + v[B | D]
            - v[A] - v[B] - v[C | D] - v[A | B | C] - v[A | B | D]
        )
        if slack.sign() < 0:
            out.append(
                Violation(
                    "ingleton",
                    (g.subset(A), g.subset(B), g.subset(C), g.subset(D)),
                    slack,
                )
            )
    return ViolationReport("ingleton", tuple(out))


def check_zhang_yeung(f: SetFunction) -> ViolationReport:
    """The 1998 non-Shannon inequality
    2 I(3;4) <= I(1;2) + I(1;34) + 3 I(3;4|1) + I(3;4|2),
    over every ordered assignment of 4 distinct elements."""
    g = f.ground
    n = len(g)
    if n < 4:
        raise ValueError("Zhang-Yeung check requires at least 4 ground elements")
    v = f.values

    def mi(x: int, y: int) -> LogScalar:
        return v[x] + v[y] - v[x | y]

    def cmi(x: int, y: int, z: int) -> LogScalar:
        return v[x | z] + v[y | z] - v[x | y | z] - v[z]

    out: List[Violation] = []
    for a, b, c, d in _ordered_quadruples(n):
        A, B, C, D = 1 << a, 1 << b, 1 << c, 1 << d
        slack = (
            mi(A, B) + mi(A, C | D) + 3 * cmi(C, D, A) + cmi(C, D, B) - 2 * mi(C, D)
        )
        if slack.sign() < 0:
            out.append(
                Violation(
                    "zhang-yeung",
                    (g.subset(A), g.subset(B), g.subset(C), g.subset(D)),
                    slack,
                )
            )
    return ViolationReport("zhang-yeung", tuple(out))


def flats(f: SetFunction) -> List[Tuple[str, ...]]:
    """Subsets A with f(A ∪ {x}) > f(A) for every x outside A.

    Requires a polymatroid; under monotonicity the single-element test is
    equivalent to the all-proper-supersets condition.
    """
    report = check_polymatroid(f)
    if not report.ok:
        raise ValueError("flats requires a polymatroid input")
    g = f.ground
    n = len(g)
    v = f.values
    out = []
    for m in range(1 << n):
        if all(
            (v[m | (1 << i)] - v[m]).sign() > 0
            for i in range(n)
            if not m >> i & 1
        ):
            out.append(g.subset(m))
    return out


def delta(f: SetFunction, A: SubsetLike, B: SubsetLike) -> LogScalar:
    a = f.ground.mask(A)
    b = f.ground.mask(B)
    return f.values[a] + f.values[b] - f.values[a | b] - f.values[a & b]


def adhesion_compatible(
    f: SetFunction, fstar: SetFunction, shared: Mapping[str, str]
) -> bool:
    """Matúš adhesivity condition: the two functions (which must coincide on
    the shared part) can be joined iff Δ_f(A,B) >= Δ_f(L'∩A, L'∩B) for all
    flats A, B of f."""
    for lab in shared:
        if lab not in f.ground._index:
            raise KeyError(f"shared label {lab!r} not in first ground set")
    for lab in shared.values():
        if lab not in fstar.ground._index:
            raise KeyError(f"shared label {lab!r} not in second ground set")
    shared_labels = list(shared)
    for m in range(1 << len(shared_labels)):
        sub = [shared_labels[i] for i in range(len(shared_labels)) if m >> i & 1]
        if f(sub) != fstar([shared[x] for x in sub]):
            raise ValueError("functions disagree on the shared subset")
    lmask = f.ground.mask(shared_labels)
    flist = [f.ground.mask(a) for a in flats(f)]
    v = f.values
    for a in flist:
        for b in flist:
            lhs = v[a] + v[b] - v[a | b] - v[a & b]
            rhs = (
                v[lmask & a]
                + v[lmask & b]
                - v[(lmask & a) | (lmask & b)]
                - v[lmask & a & b]
            )
            if (lhs - rhs).sign() < 0:
                return False
    return True
