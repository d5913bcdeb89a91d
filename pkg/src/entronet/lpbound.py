"""Polymatroid extension calculus (functional join, coded sum, conditional
description, independent adhesion), per-subnetwork witness certificates for
the fixed network, the LP outer bound on rate-capacity tuples via exact
phase-1 simplex, and Shannon-derivability of linear information expressions."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .construct import GDaggerLayout
from .exactlog import ZERO, LogScalar
from .netmodel import (
    ConnectionRequirement,
    Network,
    RateCapacityTuple,
    ResourceError,
    UNCAPPED,
    decoder_feeds,
    edge_feeds,
)
from .setfunc import GroundSet, SetFunction, SubsetLike, check_polymatroid


class ExtensionError(ValueError):
    """The requested extension is ill-posed or its totalization failed the
    polymatroid re-check."""


class WitnessError(ValueError):
    """Certificate construction or verification failed; the message names
    the violated constraint."""


class CoverageError(WitnessError):
    """A connection-constraint clause spans no single local function."""


# ---------------------------------------------------------------------------
# extension / adhesion operations


def _check(g: SetFunction, op: str, validate: bool) -> SetFunction:
    if validate:
        rep = check_polymatroid(g)
        if not rep.ok:
            v = rep.instances[0]
            raise ExtensionError(
                f"{op}: totalization is not a polymatroid ({v.family} at {v.subsets})"
            )
    return g


def _extended_ground(f: SetFunction, name: str) -> GroundSet:
    if name in f.ground._index:
        raise ExtensionError(f"name collision: {name!r} already in the ground set")
    return GroundSet(list(f.ground.labels) + [name])


def functional_extension(
    f: SetFunction, A: SubsetLike, name: Optional[str] = None, validate: bool = True
) -> SetFunction:
    """Adjoin Y with g(B) = f(B) and g({Y} ∪ B) = f(B ∪ A): the join of A."""
    amask = f.ground.mask(A)
    if name is None:
        name = "J(" + ",".join(f.ground.subset(amask)) + ")"
    ground = _extended_ground(f, name)
    k = len(f.ground)
    values = list(f.values) + [f.values[m | amask] for m in range(1 << k)]
    return _check(SetFunction(ground, values), "functional_extension", validate)


def sum_extension(
    f: SetFunction, X: str, Y: str, name: Optional[str] = None, validate: bool = True
) -> SetFunction:
    """Adjoin Z = X ⊕ Y with g(Z) = f(X), requiring f(X) = f(Y) and X ⊥ Y;
    g({Z} ∪ B) = min(f(B ∪ {X,Y}), f(B) + g(Z))."""
    xm = f.ground.mask([X])
    ym = f.ground.mask([Y])
    if f.values[xm] != f.values[ym]:
        raise ExtensionError("sum extension requires equal singleton values")
    if f.values[xm | ym] != f.values[xm] + f.values[ym]:
        raise ExtensionError("sum extension requires the two elements independent")
    if name is None:
        name = f"({X}+{Y})"
    ground = _extended_ground(f, name)
    k = len(f.ground)
    z = f.values[xm]
    values = list(f.values) + [
        min(f.values[m | xm | ym], f.values[m] + z) for m in range(1 << k)
    ]
    return _check(SetFunction(ground, values), "sum_extension", validate)


def sw_extension(
    f: SetFunction,
    X: SubsetLike,
    Y: SubsetLike,
    name: Optional[str] = None,
    validate: bool = True,
) -> SetFunction:
    """Adjoin Z describing X given Y: g(Z) = f(X∪Y) − f(Y), Z a function of
    X, and X a function of {Z} ∪ Y; g({Z} ∪ B) = min(f(B ∪ X), f(B) + g(Z))."""
    xm = f.ground.mask(X)
    ym = f.ground.mask(Y)
    if name is None:
        name = (
            "J(" + ",".join(f.ground.subset(xm)) + "|" + ",".join(f.ground.subset(ym)) + ")"
        )
    ground = _extended_ground(f, name)
    k = len(f.ground)
    z = f.values[xm | ym] - f.values[ym]
    values = list(f.values) + [
        min(f.values[m | xm], f.values[m] + z) for m in range(1 << k)
    ]
    return _check(SetFunction(ground, values), "sw_extension", validate)


def independent_adhesion(
    f: SetFunction, fstar: SetFunction, validate: bool = True
) -> SetFunction:
    """Join two functions on disjoint grounds with g(A) = f(A∩L) + f*(A∩L*)."""
    if set(f.ground.labels) & set(fstar.ground.labels):
        raise ExtensionError("ground sets must be disjoint")
    ground = GroundSet(list(f.ground.labels) + list(fstar.ground.labels))
    k = len(f.ground)
    values = []
    for m in range(1 << len(ground)):
        values.append(f.values[m & ((1 << k) - 1)] + fstar.values[m >> k])
    return _check(SetFunction(ground, values), "independent_adhesion", validate)


# ---------------------------------------------------------------------------
# information expressions


_TOKEN = re.compile(
    r"\s*(?:(?P<rel>>=|<=|=)|(?P<op>[+-])|(?P<num>\d+(?:/\d+)?)"
    r"|(?P<meas>[HI])\s*\(|(?P<close>\))|(?P<sep>[;|,])|(?P<name>[A-Za-z_][\w]*|\d+))"
)


@dataclass(frozen=True)
class InfoExpression:
    """A linear combination Σ cᵢ·H(Bᵢ) asserted ≥ 0, in canonical term order."""

    terms: Tuple[Tuple[Fraction, Tuple[str, ...]], ...]

    @classmethod
    def from_terms(cls, terms: Mapping[Tuple[str, ...], Fraction]) -> "InfoExpression":
        canon: Dict[Tuple[str, ...], Fraction] = {}
        for subset, c in terms.items():
            key = tuple(sorted(set(subset)))
            if not key:
                continue
            canon[key] = canon.get(key, Fraction(0)) + Fraction(c)
        items = [(c, s) for s, c in canon.items() if c]
        items.sort(key=lambda t: (len(t[1]), t[1]))
        return cls(tuple(items))

    @property
    def variables(self) -> Tuple[str, ...]:
        out = set()
        for _, s in self.terms:
            out.update(s)
        return tuple(sorted(out))

    def evaluate(self, f: SetFunction) -> LogScalar:
        total = ZERO
        for c, s in self.terms:
            total = total + f(s) * c
        return total

    def relabel(self, mapping: Mapping[str, str]) -> "InfoExpression":
        return InfoExpression.from_terms(
            {tuple(mapping[x] for x in s): c for c, s in self.terms}
        )

    def holds_for(self, f: SetFunction) -> bool:
        return self.evaluate(f).sign() >= 0

    def __str__(self) -> str:
        if not self.terms:
            return "0 >= 0"
        parts = []
        for i, (c, s) in enumerate(self.terms):
            mag = abs(c)
            coeff = "" if mag == 1 else f"{mag} "
            atom = f"H({','.join(s)})"
            if i == 0:
                parts.append(("-" if c < 0 else "") + coeff + atom)
            else:
                parts.append(("- " if c < 0 else "+ ") + coeff + atom)
        return " ".join(parts) + " >= 0"

    @classmethod
    def parse(cls, text: str) -> "InfoExpression":
        """Grammar: signed terms `[coeff] H(list)` / `[coeff] I(list;list[|list])`
        with an optional trailing `<= c`, `>= c`, or `= c` (c a rational, and
        only 0 is accepted); everything is normalized to `expr >= 0`."""
        pos = 0
        text = text.strip()
        tokens: List[Tuple[str, str]] = []
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot tokenize expression at position {pos}: {text[pos:pos+12]!r}")
            pos = m.end()
            for kind in ("rel", "op", "num", "meas", "close", "sep", "name"):
                v = m.group(kind)
                if v is not None:
                    tokens.append((kind, v if kind != "meas" else m.group(kind)))
                    break
        i = 0

        def peek():
            return tokens[i] if i < len(tokens) else (None, None)

        terms: Dict[Tuple[str, ...], Fraction] = {}

        def add(subset, c):
            key = tuple(sorted(set(subset)))
            if key:
                terms[key] = terms.get(key, Fraction(0)) + c

        def parse_list():
            nonlocal i
            out = []
            while True:
                kind, v = peek()
                if kind in ("name", "num"):
                    out.append(v)
                    i += 1
                else:
                    raise ValueError(f"expected a variable name, got {v!r}")
                kind, v = peek()
                if kind == "sep" and v == ",":
                    i += 1
                    continue
                return out

        def parse_side(sign: Fraction):
            nonlocal i
            first = True
            while i < len(tokens):
                kind, v = peek()
                if kind == "rel":
                    return
                coeff = Fraction(1)
                if kind == "op":
                    coeff = Fraction(-1) if v == "-" else Fraction(1)
                    i += 1
                    kind, v = peek()
                elif not first:
                    raise ValueError(f"expected '+' or '-' before {v!r}")
                first = False
                if kind == "num":
                    nxt = tokens[i + 1] if i + 1 < len(tokens) else (None, None)
                    if nxt[0] == "meas":
                        coeff *= Fraction(v)
                        i += 1
                        kind, v = peek()
                    else:
                        # bare constant: only 0 is meaningful here
                        if Fraction(v) != 0:
                            raise ValueError("nonzero constants are not supported")
                        i += 1
                        continue
                if kind != "meas":
                    raise ValueError(f"expected H(...) or I(...), got {v!r}")
                meas = v
                i += 1
                a = parse_list()
                if meas == "H":
                    kind, v = peek()
                    if kind == "sep" and v == "|":
                        i += 1
                        b = parse_list()
                        add(a + b, sign * coeff)
                        add(b, -sign * coeff)
                    else:
                        add(a, sign * coeff)
                else:
                    kind, v = peek()
                    if not (kind == "sep" and v == ";"):
                        raise ValueError("I(...) needs ';' between its arguments")
                    i += 1
                    b = parse_list()
                    c: List[str] = []
                    kind, v = peek()
                    if kind == "sep" and v == "|":
                        i += 1
                        c = parse_list()
                    # I(A;B|C) = H(AC) + H(BC) - H(ABC) - H(C)
                    add(a + c, sign * coeff)
                    add(b + c, sign * coeff)
                    add(a + b + c, -sign * coeff)
                    if c:
                        add(c, -sign * coeff)
                kind, v = peek()
                if kind == "close":
                    i += 1
                else:
                    raise ValueError("missing ')'")

        parse_side(Fraction(1))
        kind, rel = peek()
        if kind == "rel":
            i += 1
            # normalize `lhs REL rhs` to `expr >= 0`
            lhs = dict(terms)
            terms.clear()
            for k, c in lhs.items():
                terms[k] = c if rel != "<=" else -c
            if rel == "=":
                raise ValueError("equalities are not supported; state both inequalities")
            if rel == "<=":
                parse_side(Fraction(1))
            else:
                parse_side(Fraction(-1))
        if i != len(tokens):
            raise ValueError("trailing tokens in expression")
        return cls.from_terms(terms)


def ingleton_expression(labels: Sequence[str] = ("1", "2", "3", "4")) -> InfoExpression:
    a, b, c, d = labels
    return InfoExpression.parse(
        f"I({a};{b}|{c}) + I({a};{b}|{d}) + I({c};{d}) - I({a};{b}) >= 0"
    )


def zhang_yeung_expression(labels: Sequence[str] = ("1", "2", "3", "4")) -> InfoExpression:
    a, b, c, d = labels
    return InfoExpression.parse(
        f"2 I({c};{d}) - I({a};{b}) - I({a};{c},{d}) - 3 I({c};{d}|{a}) - I({c};{d}|{b}) <= 0"
    )


# ---------------------------------------------------------------------------
# exact phase-1 simplex (Fraction tableau; RHS entries are any ordered
# Q-module with +, -, *Fraction and sign: Fraction or LogScalar)


def _sgn(x) -> int:
    if isinstance(x, LogScalar):
        return x.sign()
    return (x > 0) - (x < 0)


@dataclass
class LinearProgram:
    """Rows a·x (= or <=) b over x ≥ 0, solved for feasibility only."""

    num_vars: int
    rows: List[Dict[int, Fraction]] = field(default_factory=list)
    rhs: List[object] = field(default_factory=list)
    eq: List[bool] = field(default_factory=list)

    def add(self, coeffs: Mapping[int, Fraction], b, equality: bool) -> None:
        self.rows.append({j: Fraction(c) for j, c in coeffs.items() if c})
        self.rhs.append(b)
        self.eq.append(equality)


def _zero_like(sample):
    return ZERO if isinstance(sample, LogScalar) else Fraction(0)


def _normalize(lp: LinearProgram):
    """Slack insertion and row flipping to a·x = b with b ≥ 0, x ≥ 0.
    Returns (rows, rhs, ncols) with slack columns appended after the
    structural variables."""
    zero = _zero_like(lp.rhs[0]) if lp.rows else Fraction(0)
    rows: List[Dict[int, Fraction]] = []
    rhs: List[object] = []
    ncols = lp.num_vars
    for i in range(len(lp.rows)):
        row = dict(lp.rows[i])
        b = lp.rhs[i]
        if not lp.eq[i]:
            row[ncols] = Fraction(1)
            ncols += 1
        if _sgn(b - zero) < 0:
            row = {j: -c for j, c in row.items()}
            b = zero - b if isinstance(b, LogScalar) else -b
        rows.append(row)
        rhs.append(b)
    return rows, rhs, ncols


def solve_float(lp: LinearProgram, tol: float = 1e-9):
    """Dense float phase-1 simplex.  Returns (feasible, basis, x) where basis
    lists the final basic column indices (in the normalized column space) and
    x holds approximate structural-variable values; used only to steer the
    exact certification."""
    import numpy as np

    rows, rhs, ncols = _normalize(lp)
    m = len(rows)
    if m == 0:
        return True, [], np.zeros(lp.num_vars)
    T = np.zeros((m, ncols + m + 1))
    for i, row in enumerate(rows):
        for j, c in row.items():
            T[i, j] = float(c)
        T[i, ncols + i] = 1.0
        T[i, -1] = rhs[i].to_float() if isinstance(rhs[i], LogScalar) else float(rhs[i])
    basis = list(range(ncols, ncols + m))
    for _ in range(60 * (m + 10)):
        art_rows = [i for i, bb in enumerate(basis) if bb >= ncols]
        if not art_rows or T[art_rows, -1].sum() <= tol:
            break
        # reduced costs of the phase-1 objective, recomputed for stability
        obj = T[art_rows, :ncols].sum(axis=0)
        for i, bb in enumerate(basis):
            if bb < ncols:
                obj[bb] = 0.0
        jin = int(np.argmax(obj))
        if obj[jin] <= tol:
            break  # optimal with positive objective: infeasible
        col = T[:, jin]
        mask = col > tol
        if not mask.any():
            break
        ratios = np.where(mask, T[:, -1] / np.where(mask, col, 1.0), np.inf)
        r = int(np.argmin(ratios))
        T[r] /= T[r, jin]
        f = T[:, jin].copy()
        f[r] = 0.0
        T -= np.outer(f, T[r])
        basis[r] = jin
    art_rows = [i for i, bb in enumerate(basis) if bb >= ncols]
    feasible = not art_rows or T[art_rows, -1].sum() <= 1e-7
    x = np.zeros(lp.num_vars)
    for i, bb in enumerate(basis):
        if bb < lp.num_vars:
            x[bb] = T[i, -1]
    return feasible, basis, x


def exact_point_from_basis(lp: LinearProgram, basis: Sequence[int]):
    """Solve the square basis system exactly (Fraction matrix, exact RHS)
    and return {structural var: value} when it yields a verified feasible
    point of the program; None when the float pass misidentified the basis."""
    rows, rhs, ncols = _normalize(lp)
    m = len(rows)
    if m == 0:
        return {}
    zero = _zero_like(rhs[0])
    cols = list(basis)
    M: List[Dict[int, Fraction]] = []
    for i in range(m):
        row: Dict[int, Fraction] = {}
        for k, c in enumerate(cols):
            if c >= ncols:  # artificial column e_{c-ncols}
                if c - ncols == i:
                    row[k] = Fraction(1)
            else:
                v = rows[i].get(c)
                if v:
                    row[k] = v
        M.append(row)
    b = list(rhs)
    where: List[Optional[int]] = [None] * m
    used = [False] * m
    for k in range(m):
        cand = [i for i in range(m) if not used[i] and M[i].get(k)]
        if not cand:
            return None  # singular basis
        r = min(cand, key=lambda i: len(M[i]))
        used[r] = True
        where[k] = r
        p = M[r][k]
        if p != 1:
            M[r] = {j: c / p for j, c in M[r].items()}
            b[r] = b[r] * (Fraction(1) / p) if isinstance(b[r], LogScalar) else b[r] / p
        for i in range(m):
            if i != r and (f := M[i].get(k)):
                for j, c in M[r].items():
                    nv = M[i].get(j, Fraction(0)) - f * c
                    if nv:
                        M[i][j] = nv
                    else:
                        M[i].pop(j, None)
                b[i] = b[i] - b[r] * f if isinstance(b[i], LogScalar) else b[i] - f * b[r]
    x: Dict[int, object] = {}
    for k in range(m):
        v = b[where[k]]
        s = _sgn(v - zero)
        if s < 0:
            return None  # basic variable negative: wrong basis
        c = cols[k]
        if c >= ncols:
            if s != 0:  # artificial must vanish exactly
                return None
        elif c < lp.num_vars and s != 0:
            x[c] = v
    # exact verification of every original row
    for i, row in enumerate(lp.rows):
        total = zero
        for j, c in row.items():
            if j in x:
                total = total + x[j] * c
        s = _sgn(total - lp.rhs[i])
        if (lp.eq[i] and s != 0) or (not lp.eq[i] and s > 0):
            return None
    return x


def solve_highs(lp: LinearProgram):
    """Float feasibility check of the normalized system A·x = b, x ≥ 0 via
    HiGHS (explicit phase-1: min Σs subject to A·x + I·s = b).  Returns
    (feasible, x, y): approximate structural values and, when infeasible,
    equality-row duals usable as a Farkas certificate candidate."""
    import numpy as np
    from scipy.optimize import linprog

    rows, rhs, ncols = _normalize(lp)
    m = len(rows)
    if m == 0:
        return True, np.zeros(lp.num_vars), None
    A = np.zeros((m, ncols + m))
    b = np.zeros(m)
    for i, row in enumerate(rows):
        for j, c in row.items():
            A[i, j] = float(c)
        A[i, ncols + i] = 1.0
        b[i] = rhs[i].to_float() if isinstance(rhs[i], LogScalar) else float(rhs[i])
    cost = np.concatenate([np.zeros(ncols), np.ones(m)])
    res = linprog(cost, A_eq=A, b_eq=b, bounds=(0, None), method="highs")
    if not res.success:
        return None, None, None
    feasible = res.fun <= 1e-7
    x = res.x[: lp.num_vars]
    y = None
    if not feasible and res.eqlin is not None:
        y = np.asarray(res.eqlin.marginals, dtype=float)
        if float(y @ b) < 0:
            y = -y
    return feasible, x, y


def farkas_verified(lp: LinearProgram, y) -> bool:
    """Exact check that a rationalization of the float multipliers y proves
    A·x = b, x ≥ 0 infeasible: yᵀA ≤ 0 columnwise and yᵀb > 0."""
    rows, rhs, ncols = _normalize(lp)
    zero = _zero_like(rhs[0]) if rows else Fraction(0)
    yr = [
        Fraction(float(v)).limit_denominator(10**6) if abs(float(v)) > 1e-9 else Fraction(0)
        for v in y
    ]
    cols: Dict[int, Fraction] = {}
    for i, row in enumerate(rows):
        if yr[i]:
            for j, c in row.items():
                cols[j] = cols.get(j, Fraction(0)) + yr[i] * c
    if any(v > 0 for v in cols.values()):
        return False
    total = zero
    for i, b in enumerate(rhs):
        if yr[i]:
            total = total + (b * yr[i] if isinstance(b, LogScalar) else yr[i] * b)
    return _sgn(total) > 0


def rationalize_point(xf, masks_primes, max_den: int = 10**4):
    """Fit each float coordinate as a rational combination of logs of the
    given primes (exact-arithmetic candidate for a float vertex).  Returns a
    list of LogScalar or None when some coordinate resists fitting."""
    import math

    import mpmath

    primes = sorted(masks_primes) or [2]
    logs = [math.log(p) for p in primes]
    out = []
    for v in xf:
        v = float(v)
        if abs(v) < 1e-11:
            out.append(ZERO)
            continue
        if len(primes) == 1:
            q = Fraction(v / logs[0]).limit_denominator(max_den)
            if abs(float(q) * logs[0] - v) > 1e-8 * max(1.0, abs(v)):
                return None
            out.append(LogScalar({primes[0]: q}))
            continue
        rel = mpmath.pslq([mpmath.mpf(v)] + [mpmath.log(p) for p in primes],
                          tol=mpmath.mpf(1e-10), maxcoeff=10**6)
        if rel is None or rel[0] == 0:
            return None
        a = rel[0]
        out.append(LogScalar({p: Fraction(-rel[i + 1], a) for i, p in enumerate(primes)}))
    return out


def solve_phase1(lp: LinearProgram):
    """Exact phase-1 simplex (sparse Fraction tableau; RHS in the ordered
    module).  Returns (feasible, x) where x maps structural variable index
    to its value at a feasible point."""
    m = len(lp.rows)
    n = lp.num_vars
    zero = _zero_like(lp.rhs[0]) if m else Fraction(0)
    rows, rhs, ncols = _normalize(lp)
    # artificial variables, one per row; objective = sum of artificials
    art0 = ncols
    basis = []
    for i in range(m):
        rows[i][art0 + i] = Fraction(1)
        basis.append(art0 + i)
    total_cols = art0 + m
    # objective row: z_j - c_j for minimizing Σ artificials equals
    # (sum of all rows restricted to non-artificial columns), value Σ rhs
    obj: Dict[int, Fraction] = {}
    for row in rows:
        for j, c in row.items():
            if j < art0:
                obj[j] = obj.get(j, Fraction(0)) + c
    obj = {j: c for j, c in obj.items() if c}
    objval = rhs[0] if m else zero
    if m:
        objval = zero
        for b in rhs:
            objval = objval + b

    def pivot(r: int, jin: int):
        nonlocal objval
        prow = rows[r]
        p = prow[jin]
        if p != 1:
            rows[r] = prow = {j: c / p for j, c in prow.items()}
            rhs[r] = rhs[r] * (Fraction(1) / p) if isinstance(rhs[r], LogScalar) else rhs[r] / p
        for i in range(m):
            if i == r:
                continue
            f = rows[i].get(jin)
            if f:
                row = rows[i]
                for j, c in prow.items():
                    nv = row.get(j, Fraction(0)) - f * c
                    if nv:
                        row[j] = nv
                    else:
                        row.pop(j, None)
                rhs[i] = rhs[i] - rhs[r] * f if isinstance(rhs[i], LogScalar) else rhs[i] - f * rhs[r]
        f = obj.get(jin)
        if f:
            for j, c in prow.items():
                nv = obj.get(j, Fraction(0)) - f * c
                if nv:
                    obj[j] = nv
                else:
                    obj.pop(j, None)
            objval = objval - rhs[r] * f if isinstance(objval, LogScalar) else objval - f * rhs[r]
        basis[r] = jin

    # Dantzig's rule by default; permanent switch to Bland's rule after a
    # long degenerate stall guarantees termination
    stall = 0
    bland = False
    while True:
        jin = None
        if bland:
            for j in sorted(obj):
                if j < art0 and obj[j] > 0:
                    jin = j
                    break
        else:
            bestc = None
            for j, c in obj.items():
                if j < art0 and c > 0 and (bestc is None or c > bestc):
                    jin, bestc = j, c
        if jin is None:
            break
        # ratio test, tie-broken on basis index for Bland's rule
        best = None
        for i in range(m):
            a = rows[i].get(jin, Fraction(0))
            if a > 0:
                if best is None:
                    best = i
                else:
                    # compare rhs[i]/a vs rhs[best]/abest
                    ab = rows[best][jin]
                    diff = rhs[i] * ab - rhs[best] * a if isinstance(rhs[i], LogScalar) else ab * rhs[i] - a * rhs[best]
                    s = _sgn(diff)
                    if s < 0 or (s == 0 and basis[i] < basis[best]):
                        best = i
        if best is None:
            # unbounded phase-1 objective cannot happen (bounded below by 0)
            raise RuntimeError("unbounded phase-1 objective")
        degenerate = _sgn(rhs[best]) == 0
        pivot(best, jin)
        if degenerate:
            stall += 1
            if stall > 3 * (m + 1) and not bland:
                bland = True
        else:
            stall = 0

    if _sgn(objval) != 0:
        return False, None
    x: Dict[int, object] = {}
    for i, bj in enumerate(basis):
        if bj < n:
            x[bj] = rhs[i]
    return True, x


# ---------------------------------------------------------------------------
# elemental Shannon inequalities over an abstract index set


def elemental_inequalities(k: int):
    """Yield (description, {mask: coeff}) with the row asserted >= 0:
    top monotonicity f(full) - f(full \\ i) >= 0 and conditional pairwise
    submodularity f(iA)+f(jA)-f(ijA)-f(A) >= 0."""
    full = (1 << k) - 1
    for i in range(k):
        yield ("mono", (i,), {full: Fraction(1), full ^ (1 << i): Fraction(-1)})
    for i in range(k):
        for j in range(i + 1, k):
            rest = full ^ (1 << i) ^ (1 << j)
            a = rest
            while True:
                row = {}
                def bump(mask, c):
                    if mask:
                        row[mask] = row.get(mask, Fraction(0)) + c
                bump(a | (1 << i), Fraction(1))
                bump(a | (1 << j), Fraction(1))
                bump(a | (1 << i) | (1 << j), Fraction(-1))
                bump(a, Fraction(-1))
                yield ("submod", (i, j, a), row)
                if a == 0:
                    break
                a = (a - 1) & rest


# ---------------------------------------------------------------------------
# LP outer bound


@dataclass(frozen=True)
class LPResult:
    feasible: bool
    assignment: Optional[SetFunction]
    rounds: int
    constraints: int


def _connection_rows(
    net: Network,
    conn: ConnectionRequirement,
    tup: RateCapacityTuple,
    index: Mapping[str, int],
):
    """Rows of eqn-style connection constraints over entropy variables g(B),
    B a nonempty subset mask of sessions ∪ edges.  Yields
    (description, {mask: coeff}, rhs, equality, is_geq)."""

    def mask_of(keys):
        m = 0
        for kk in keys:
            m |= 1 << index[kk]
        return m

    for e in net.edges:
        feeds = edge_feeds(net, conn, e)
        fm = mask_of(feeds)
        em = mask_of([e.id])
        if fm:
            yield (f"edge {e.id}", {em | fm: Fraction(1), fm: Fraction(-1)}, ZERO, True, False)
        else:
            yield (f"edge {e.id}", {em: Fraction(1)}, ZERO, True, False)
    for r, s in conn.demands():
        feeds = decoder_feeds(net, conn, r)
        fm = mask_of(feeds)
        sm = mask_of([s])
        row = {sm | fm: Fraction(1)}
        if fm:
            row[fm] = row.get(fm, Fraction(0)) - 1
        yield (f"decode {s} at {r}", row, ZERO, True, False)
    if len(conn.sessions) > 1:
        row = {mask_of(conn.sessions): Fraction(1)}
        for s in conn.sessions:
            row[mask_of([s])] = row.get(mask_of([s]), Fraction(0)) - 1
        yield ("source independence", row, ZERO, True, False)
    for s in conn.sessions:
        yield (f"rate {s}", {mask_of([s]): Fraction(1)}, tup.rates[s], False, True)
    for e in net.edges:
        cap = tup.cap(e.id)
        if cap is not UNCAPPED:
            yield (f"capacity {e.id}", {mask_of([e.id]): Fraction(1)}, cap, False, False)


def lp_feasible(
    net: Network,
    conn: ConnectionRequirement,
    tup: RateCapacityTuple,
    extra: Sequence[InfoExpression] = (),
    ground_cap: int = 10,
    batch: int = 400,
    hint: Optional[SetFunction] = None,
) -> LPResult:
    """Decide whether some polymatroid over sessions ∪ edges satisfies all
    connection constraints at the given rates/capacities (plus instantiated
    extra inequality templates).  A float simplex steers lazy elemental
    generation; every verdict is certified exactly (basis solve or exact
    phase-1 simplex, then exact re-checks of all constraints).

    `hint` short-circuits the search when it is an exactly verified feasible
    point — e.g. the induced entropy of a known admissible code, which
    certifies feasibility because achievable tuples satisfy the LP bound.
    A failing hint is ignored."""
    keys = list(conn.sessions) + [e.id for e in net.edges]
    k = len(keys)
    if k > ground_cap:
        raise ResourceError(
            f"{k} variables exceed the LP ground cap {ground_cap}; for the fixed "
            "duality network use witness certificates (build_witness / "
            "verify_connection_constraints) instead"
        )
    index = {kk: i for i, kk in enumerate(keys)}
    nvars = (1 << k) - 1  # variable j-1 holds g of subset mask j

    base_rows: List[Tuple[Dict[int, Fraction], object, bool]] = []
    for _, row, b, equality, is_geq in _connection_rows(net, conn, tup, index):
        coeffs = {mask - 1: c for mask, c in row.items()}
        if is_geq:  # a·x >= b  ->  -a·x <= -b
            coeffs = {j: -c for j, c in coeffs.items()}
            b = ZERO - b if isinstance(b, LogScalar) else -b
            base_rows.append((coeffs, b, False))
        else:
            base_rows.append((coeffs, b, equality))
    # extra templates instantiated over all injective label assignments
    import itertools as _it

    for expr in extra:
        slots = expr.variables
        for combo in _it.permutations(keys, len(slots)):
            inst = expr.relabel(dict(zip(slots, combo)))
            coeffs: Dict[int, Fraction] = {}
            for c, subset in inst.terms:
                mask = 0
                for lab in subset:
                    mask |= 1 << index[lab]
                coeffs[mask - 1] = coeffs.get(mask - 1, Fraction(0)) + c
            # inst >= 0  ->  -inst <= 0
            base_rows.append(({j: -c for j, c in coeffs.items() if c}, ZERO, False))

    import numpy as np

    elementals = list(elemental_inequalities(k))

    def exact_ok(values: List[LogScalar]) -> bool:
        for coeffs, b, equality in base_rows:
            total = ZERO
            for j, c in coeffs.items():
                total = total + values[j + 1] * c
            s = (total - b).sign()
            if (equality and s != 0) or (not equality and s > 0):
                return False
        for _, _, row in elementals:
            total = ZERO
            for mask, c in row.items():
                total = total + values[mask] * c
            if total.sign() < 0:
                return False
        return True

    if hint is not None and sorted(hint.ground.labels) == sorted(keys):
        values = [hint([kk for kk in keys if m >> index[kk] & 1]) for m in range(1 << k)]
        if exact_ok(values):
            return LPResult(True, SetFunction(GroundSet(keys), values), 0, len(base_rows))
    # vectorized float evaluation of all elemental rows
    idx = np.zeros((len(elementals), 4), dtype=np.int64)
    cf = np.zeros((len(elementals), 4))
    for ei, (_, _, row) in enumerate(elementals):
        for p, (mask, c) in enumerate(row.items()):
            idx[ei, p] = mask
            cf[ei, p] = float(c)

    def violated_float(vals: np.ndarray, exclude: set) -> List[int]:
        slack = (cf * vals[idx]).sum(axis=1)
        out = [int(i) for i in np.nonzero(slack < -1e-9)[0] if int(i) not in exclude]
        return out[:batch]

    def build_lp(active) -> LinearProgram:
        lp = LinearProgram(num_vars=nvars)
        for coeffs, b, equality in base_rows:
            lp.add(coeffs, b, equality)
        for ei in active:
            _, _, row = elementals[ei]
            # row >= 0  ->  -row <= 0
            lp.add({mask - 1: -c for mask, c in row.items()}, ZERO, False)
        return lp

    def float_values(lp: LinearProgram, basis) -> Optional[np.ndarray]:
        # cheap approximate point: exact basis solve is deferred to the end
        x = exact_point_from_basis(lp, basis)
        if x is None:
            return None
        vals = np.zeros(1 << k)
        exact = [ZERO] * (1 << k)
        for j, v in x.items():
            if j < nvars:
                exact[j + 1] = v
                vals[j + 1] = v.to_float() if isinstance(v, LogScalar) else float(v)
        return vals, exact

    primes: set = set()
    for _, b, _ in base_rows:
        if isinstance(b, LogScalar):
            primes.update(b.terms)

    def exact_scan(exact: List[LogScalar]) -> List[int]:
        out = []
        for ei, (_, _, row) in enumerate(elementals):
            if ei in active_set:
                continue
            total = ZERO
            for mask, c in row.items():
                total = total + exact[mask] * c
            if total.sign() < 0:
                out.append(ei)
                if len(out) >= batch:
                    break
        return out

    active: List[int] = []
    active_set: set = set()
    rounds = 0
    while True:
        rounds += 1
        lp = build_lp(active)
        feasible_f, xf, dual = solve_highs(lp)
        if feasible_f:
            # steer with the cheap float point; exact work deferred until
            # the float scan comes back clean
            vals_f = np.zeros(1 << k)
            vals_f[1 : nvars + 1] = xf
            new = violated_float(vals_f, active_set)
            if new:
                active.extend(new)
                active_set.update(new)
                continue
            # clean float scan: rationalize the vertex and verify exactly
            exact = rationalize_point(xf, primes)
            if exact is not None:
                exact = [ZERO] + exact
                if exact_ok(exact):
                    g = SetFunction(GroundSet(keys), exact)
                    return LPResult(True, g, rounds, len(lp.rows))
        elif feasible_f is False and dual is not None and farkas_verified(lp, dual):
            return LPResult(False, None, rounds, len(lp.rows))
        # float machinery inconclusive: exact basis certification, then
        # exact simplex as the last resort
        okf, basis, _ = solve_float(lp)
        got = float_values(lp, basis) if okf else None
        if got is None:
            feasible, x = solve_phase1(lp)
            if not feasible:
                return LPResult(False, None, rounds, len(lp.rows))
            exact = [ZERO] * (1 << k)
            for j, v in (x or {}).items():
                if j < nvars:
                    exact[j + 1] = v
        else:
            _, exact = got
        new = exact_scan(exact)
        if not new:
            g = SetFunction(GroundSet(keys), exact)
            return LPResult(True, g, rounds, len(lp.rows))
        active.extend(new)
        active_set.update(new)


def shannon_implies(expr: InfoExpression, n: int, cap: int = 10):
    """True iff `expr >= 0` is a non-negative rational combination of the
    elemental inequalities on n variables; returns (bool, certificate) where
    the certificate maps elemental descriptions to their weights."""
    if n > cap:
        raise ResourceError(f"{n} variables exceed the cap {cap}")
    labels = expr.variables
    if len(labels) > n:
        raise ValueError("expression references more variables than n")
    labels = list(labels) + [f"_v{i}" for i in range(n - len(labels))]
    index = {lab: i for i, lab in enumerate(labels)}
    target = [Fraction(0)] * (1 << n)
    for c, subset in expr.terms:
        mask = 0
        for lab in subset:
            mask |= 1 << index[lab]
        target[mask] += c
    elementals = list(elemental_inequalities(n))
    # find y >= 0 with sum_i y_i * row_i == target (columns = subset masks)
    lp = LinearProgram(num_vars=len(elementals))
    cols: Dict[int, Dict[int, Fraction]] = {}
    for i, (_, _, row) in enumerate(elementals):
        for mask, c in row.items():
            cols.setdefault(mask, {})[i] = c
    for mask in range(1, 1 << n):
        lp.add(cols.get(mask, {}), target[mask], True)
    feasible, y = solve_phase1(lp)
    if not feasible:
        return False, None
    cert = {}
    for i, w in (y or {}).items():
        if w:
            kind, args, _ = elementals[i]
            cert[(kind, args)] = w
    return True, cert


# ---------------------------------------------------------------------------
# witness certificates for the fixed network


@dataclass(frozen=True)
class LocalWitness:
    """A polymatroid over a small ground plus the map from network variables
    (session labels and edge ids) to its ground elements."""

    func: SetFunction
    var_map: Dict[str, str]

    def to_json(self) -> dict:
        return {"function": self.func.to_json(), "vars": dict(sorted(self.var_map.items()))}

    @classmethod
    def from_json(cls, obj: Mapping) -> "LocalWitness":
        return cls(SetFunction.from_json(obj["function"]), dict(obj["vars"]))


@dataclass(frozen=True)
class WitnessCertificate:
    n: int
    locals_: Dict[str, LocalWitness]  # keyed by subnetwork tag

    def to_json(self) -> dict:
        return {
            "format": "witness/1",
            "n": self.n,
            "locals": {k: v.to_json() for k, v in sorted(self.locals_.items())},
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "WitnessCertificate":
        if obj.get("format") != "witness/1":
            raise ValueError("expected format witness/1")
        return cls(int(obj["n"]), {k: LocalWitness.from_json(v) for k, v in obj["locals"].items()})


def _single(label: str, value: LogScalar) -> SetFunction:
    return SetFunction(GroundSet([label]), [ZERO, value])


def build_witness(h: SetFunction, layout: GDaggerLayout) -> WitnessCertificate:
    """Per-subnetwork pseudo-variable certificates proving that the tuple
    induced by a polymatroid h is consistent with every connection
    constraint of the fixed network.  Raises WitnessError naming the first
    failing construction step when h is not a polymatroid."""
    N = layout.n
    if len(h.ground) != N:
        raise ValueError(f"set function has ground size {len(h.ground)}, layout expects {N}")
    full = (1 << N) - 1
    net = layout.network
    vlabels = list(h.ground.labels)

    def alpha_labels(mask: int) -> List[str]:
        return [vlabels[i] for i in range(N) if mask >> i & 1]

    def wrap(tag: str, fn):
        try:
            return fn()
        except ExtensionError as exc:
            raise WitnessError(f"{tag}: {exc}") from exc

    locals_: Dict[str, LocalWitness] = {}

    # sources: h extended by the joint session (function of all of V)
    f_src = wrap("sources", lambda: functional_extension(h, vlabels, name="S"))
    src_map = {layout.session_labels[full]: "S"}
    for j in range(1, N + 1):
        src_map[layout.v_edges[j]] = vlabels[j - 1]
    for e in net.edges:
        if e.id.startswith("fan[V["):
            j = int(e.id.split("]", 1)[0][len("fan[V["):])
            src_map[e.id] = vlabels[j - 1]
    locals_["sources"] = LocalWitness(f_src, src_map)

    # session independence: the modular product of all session values
    sess_labels = ["S" if m == full else f"Sa{m}" for m in range(1, full + 1)]
    ind = _single(sess_labels[0], h(alpha_labels(1)))
    for m in range(2, full + 1):
        val = h(alpha_labels(m))
        ind = wrap("independence", lambda ind=ind, m=m, val=val: independent_adhesion(ind, _single(sess_labels[m - 1], val)))
    ind_map = {layout.session_labels[m]: sess_labels[m - 1] for m in range(1, full + 1)}
    locals_["independence"] = LocalWitness(ind, ind_map)

    for sub in layout.subnets:
        a = sub.alpha
        alab = alpha_labels(a)
        sess_a = layout.session_labels[a]
        if sub.kind == 0:
            tag = f"T0[{a}]"
            g = _single("Sa", h(alab))
            (rx,) = sub.receivers
            locals_[tag] = LocalWitness(g, {sess_a: "Sa", sub.role_edges["W"]: "Sa"})
            continue
        if sub.kind == 1:
            tag = f"T1[{a}]"
            g = wrap(tag, lambda: functional_extension(h, vlabels, name="S"))
            g = wrap(tag, lambda g=g: functional_extension(g, alab, name="J"))
            g = wrap(tag, lambda g=g: sw_extension(g, ["S"], ["J"], name="W"))
            vmap = {layout.session_labels[full]: "S", sub.role_edges["W"]: "W", sub.role_edges["W'"]: "J"}
            # fan edges feeding this subnetwork's mid node
            mid = net.edge(sub.role_edges["W'"]).tail
            for e in net.in_edges(mid):
                j = int(e.id.split("]", 1)[0][len("fan[V["):])
                vmap[e.id] = vlabels[j - 1]
            locals_[tag] = LocalWitness(g, vmap)
            continue
        # type 2
        i = sub.i
        tag = f"T2[{a},{i}]"
        g = wrap(tag, lambda: functional_extension(h, vlabels, name="S"))
        g = wrap(tag, lambda g=g: independent_adhesion(g, _single("Sa", h(alab))))
        g = wrap(tag, lambda g=g: functional_extension(g, alab, name="J"))
        g = wrap(tag, lambda g=g: sum_extension(g, "Sa", "J", name="W"))
        g = wrap(tag, lambda g=g: sw_extension(g, ["S"], ["J"], name="W'"))
        g = wrap(tag, lambda g=g: sw_extension(g, ["J"], [vlabels[i - 1]], name="W''"))
        vmap = {
            layout.session_labels[full]: "S",
            sess_a: "Sa",
            sub.role_edges["W"]: "W",
            sub.role_edges["W>U"]: "W",
            sub.role_edges["W>L"]: "W",
            sub.role_edges["W'"]: "W'",
            sub.role_edges["W''"]: "W''",
            sub.role_edges["W*"]: "J",
        }
        edge_tag = sub.role_edges["W"].rsplit(".", 1)[0]
        vmap[f"{edge_tag}.Sa>n1"] = "Sa"
        vmap[f"{edge_tag}.Sa>rxU"] = "Sa"
        for e in net.edges:
            if e.id.startswith("fan[V[") and e.id.endswith(f"{edge_tag}.n1]") or \
               e.id.startswith("fan[V[") and e.id.endswith(f"{edge_tag}.n2]") or \
               e.id.startswith("fan[V[") and e.id.endswith(f"{edge_tag}.n3]"):
                j = int(e.id.split("]", 1)[0][len("fan[V["):])
                vmap[e.id] = vlabels[j - 1]
        locals_[tag] = LocalWitness(g, vmap)

    return WitnessCertificate(N, locals_)


def verify_connection_constraints(
    cert: WitnessCertificate,
    layout: GDaggerLayout,
    tup: RateCapacityTuple,
    failures: Optional[List[str]] = None,
) -> bool:
    """Exact check of every connection-constraint clause (edge and decoder
    functional dependence, source independence, rate lower bounds, capacity
    upper bounds) inside whichever local function covers its variables."""
    net, conn = layout.network, layout.conn
    ok = True

    def fail(msg: str):
        nonlocal ok
        ok = False
        if failures is not None:
            failures.append(msg)

    def find_local(varnames: Sequence[str]) -> Tuple[LocalWitness, List[str]]:
        for lw in cert.locals_.values():
            if all(v in lw.var_map for v in varnames):
                return lw, [lw.var_map[v] for v in varnames]
        raise CoverageError(f"no local function covers variables {list(varnames)}")

    def value(lw: LocalWitness, labels: Sequence[str]) -> LogScalar:
        return lw.func(sorted(set(labels)))

    for e in net.edges:
        feeds = edge_feeds(net, conn, e)
        lw, labs = find_local([e.id] + feeds)
        joint = value(lw, labs)
        given = value(lw, labs[1:]) if feeds else ZERO
        if joint != given:
            fail(f"edge {e.id}: not a function of its feeds")
    for r, s in conn.demands():
        feeds = decoder_feeds(net, conn, r)
        lw, labs = find_local([s] + feeds)
        if value(lw, labs) != value(lw, labs[1:]):
            fail(f"decode {s} at {r}: not a function of the received values")
    sessions = list(conn.sessions)
    if len(sessions) > 1:
        lw, labs = find_local(sessions)
        total = value(lw, labs)
        acc = ZERO
        for lab in labs:
            acc = acc + lw.func([lab])
        if total != acc:
            fail("source independence fails")
    for s in sessions:
        lw, labs = find_local([s])
        if (lw.func(labs) - tup.rates[s]).sign() < 0:
            fail(f"rate of {s} below the required lower bound")
    for e in net.edges:
        cap = tup.cap(e.id)
        if cap is UNCAPPED:
            continue
        lw, labs = find_local([e.id])
        if (cap - lw.func(labs)).sign() < 0:
            fail(f"capacity of {e.id} exceeded")
    return ok
