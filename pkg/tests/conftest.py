"""Shared generators: group catalog, subspace enumeration, and a
rejection-sampled random-polymatroid oracle (brute-force acceptance over all
subset pairs, independent of the library's elemental reduction)."""

import itertools
import random
from fractions import Fraction

from entronet.exactlog import LogScalar
from entronet.ffield import GF
from entronet.groupchar import (
    cyclic,
    dihedral,
    direct_product,
    quaternion,
    symmetric,
)
from entronet.setfunc import GroundSet, SetFunction

ZERO = LogScalar()


def group_catalog():
    """Named groups of order <= 24 built from the library's constructors."""
    groups = [(f"C{n}", cyclic(n)) for n in range(1, 25)]
    groups += [(f"D{n}", dihedral(n)) for n in range(3, 13)]
    groups += [("S3", symmetric(3)), ("S4", symmetric(4)), ("Q8", quaternion())]
    for dims in [
        (2, 2), (2, 4), (2, 6), (2, 8), (2, 10), (2, 12),
        (3, 3), (4, 4), (3, 6), (2, 2, 2), (2, 2, 4), (2, 2, 6), (2, 3, 4),
    ]:
        g = cyclic(dims[0])
        for d in dims[1:]:
            g = direct_product(g, cyclic(d))
        groups.append(("x".join(map(str, dims)), g))
    return groups


def all_subspaces(q, n):
    """Every subspace of F_q^n as a canonical (rref) row-basis tuple."""
    g = GF(q)
    seen = {(): None}
    nz = [v for v in g.all_vectors(n) if any(v)]
    for r in range(1, n + 1):
        for combo in itertools.combinations(nz, r):
            R = g.rref([list(c) for c in combo])[0]
            basis = tuple(tuple(row) for row in R if any(row))
            if len(basis) == r:
                seen.setdefault(basis, None)
    return list(seen.keys())


def brute_force_polymatroid(values, n) -> bool:
    """Independent oracle: normalization, monotonicity and submodularity
    checked over every subset pair, not just the elemental family."""
    if values[0].sign() != 0:
        return False
    for a in range(1 << n):
        for b in range(1 << n):
            if a | b == b and (values[b] - values[a]).sign() < 0:
                return False
            lhs = values[a] + values[b]
            rhs = values[a | b] + values[a & b]
            if (lhs - rhs).sign() < 0:
                return False
    return True


def random_integer_polymatroid(rng: random.Random, n: int, unit=None) -> SetFunction:
    """Rejection sampling: draw monotone integer values (in log-2 units by
    default) and accept only when the brute-force oracle passes."""
    unit = unit if unit is not None else LogScalar({2: Fraction(1)})
    labels = [str(i + 1) for i in range(n)]
    while True:
        ints = [0] * (1 << n)
        ok = True
        for mask in range(1, 1 << n):
            low = max(ints[mask & ~(1 << i)] for i in range(n) if mask >> i & 1)
            i = max(i for i in range(n) if mask >> i & 1)
            single = ints[1 << i]
            if mask == 1 << i:
                ints[mask] = rng.randint(0, 4)
            else:
                ints[mask] = rng.randint(low, ints[mask & ~(1 << i)] + single)
        values = [unit * Fraction(v) for v in ints]
        if brute_force_polymatroid(values, n):
            return SetFunction(GroundSet(labels), values)


def perturb_non_polymatroid(rng: random.Random, f: SetFunction) -> SetFunction:
    """Break exactly one elemental inequality by lifting a non-full subset
    above the full set's value (violates monotonicity at that chain)."""
    n = len(f.ground)
    unit = LogScalar({2: Fraction(1)})
    full = (1 << n) - 1
    while True:
        mask = rng.randrange(1, full)
        values = list(f.values)
        values[mask] = values[full] + unit * Fraction(1 + rng.randint(0, 3))
        g = SetFunction(f.ground, values)
        if not brute_force_polymatroid(g.values, n):
            return g
