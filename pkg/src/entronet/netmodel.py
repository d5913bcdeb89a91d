"""Directed acyclic networks, connection requirements, network codes, and
exhaustive zero-error evaluation.

Conventions:
  - An edge's encoder reads, in canonical order, the sessions originating at
    its tail node (sorted by label) followed by the tail's in-edges (sorted
    by edge id).  A decoder at a receiver reads the sessions originating
    there followed by the receiver's in-edges, same ordering.
  - Lookup tables are dense arrays over the flat feed-domain index with the
    FIRST feed most significant.
  - Linear maps act on row vectors: y = x @ M over GF(q).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .exactlog import ZERO, LogScalar, entropy_of_counts
from .ffield import GF
from .groupchar import SubspaceFamily
from .setfunc import GroundSet, SetFunction


class StructuralError(ValueError):
    pass


class ResourceError(RuntimeError):
    pass


class _Uncapped:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNCAPPED"


UNCAPPED = _Uncapped()

Capacity = Union[LogScalar, _Uncapped]


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    cap: Capacity


class Network:
    def __init__(self, nodes: Sequence[str], edges: Sequence[Edge]):
        self.nodes = tuple(str(n) for n in nodes)
        if len(set(self.nodes)) != len(self.nodes):
            raise StructuralError("duplicate node labels")
        nodeset = set(self.nodes)
        self.edges = tuple(edges)
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            raise StructuralError("duplicate edge ids")
        for e in self.edges:
            if e.tail not in nodeset or e.head not in nodeset:
                raise StructuralError(f"edge {e.id} references unknown node")
        self._by_id = {e.id: e for e in self.edges}
        self._topo = topo_order(self)  # raises on cycles
        self._topo_pos = {n: i for i, n in enumerate(self._topo)}

    def edge(self, eid: str) -> Edge:
        return self._by_id[eid]

    def in_edges(self, node: str) -> List[Edge]:
        return sorted((e for e in self.edges if e.head == node), key=lambda e: e.id)

    def out_edges(self, node: str) -> List[Edge]:
        return sorted((e for e in self.edges if e.tail == node), key=lambda e: e.id)

    def edges_topo(self) -> List[Edge]:
        return sorted(self.edges, key=lambda e: (self._topo_pos[e.tail], e.id))

    def to_json(self) -> dict:
        return {
            "format": "network/1",
            "nodes": list(self.nodes),
            "edges": [
                {
                    "id": e.id,
                    "tail": e.tail,
                    "head": e.head,
                    "cap": None if e.cap is UNCAPPED else e.cap.to_json(),
                }
                for e in self.edges
            ],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "Network":
        if obj.get("format", "network/1") != "network/1":
            raise StructuralError(f"unexpected format {obj.get('format')!r}")
        edges = [
            Edge(
                d["id"],
                d["tail"],
                d["head"],
                UNCAPPED if d.get("cap") is None else LogScalar.from_json(d["cap"]),
            )
            for d in obj["edges"]
        ]
        return cls(obj["nodes"], edges)


def topo_order(net: Network) -> List[str]:
    """Topological node order, stable by label among ready nodes."""
    indeg = {n: 0 for n in net.nodes}
    out: Dict[str, List[str]] = {n: [] for n in net.nodes}
    for e in net.edges:
        indeg[e.head] += 1
        out[e.tail].append(e.head)
    ready = [n for n in net.nodes if indeg[n] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        n = heapq.heappop(ready)
        order.append(n)
        for m in out[n]:
            indeg[m] -= 1
            if indeg[m] == 0:
                heapq.heappush(ready, m)
    if len(order) != len(net.nodes):
        raise StructuralError("network contains a cycle")
    return order


class ConnectionRequirement:
    def __init__(
        self,
        sessions: Sequence[str],
        origin: Mapping[str, str],
        receivers: Mapping[str, Sequence[str]],
    ):
        self.sessions = tuple(sorted(str(s) for s in sessions))
        if len(set(self.sessions)) != len(self.sessions):
            raise StructuralError("duplicate session labels")
        self.origin = {s: origin[s] for s in self.sessions}
        self.receivers = {s: tuple(sorted(receivers[s])) for s in self.sessions}
        for s in self.sessions:
            if not self.receivers[s]:
                raise StructuralError(f"session {s} has no receivers")

    def validate_against(self, net: Network) -> None:
        nodeset = set(net.nodes)
        for s in self.sessions:
            if self.origin[s] not in nodeset:
                raise StructuralError(f"origin of session {s} not in network")
            for r in self.receivers[s]:
                if r not in nodeset:
                    raise StructuralError(f"receiver {r} of session {s} not in network")

    def sessions_at(self, node: str) -> List[str]:
        return [s for s in self.sessions if self.origin[s] == node]

    def demands(self) -> List[Tuple[str, str]]:
        """(receiver node, session) pairs, sorted."""
        out = []
        for s in self.sessions:
            for r in self.receivers[s]:
                out.append((r, s))
        return sorted(out)

    def to_json(self) -> dict:
        return {
            "format": "connection/1",
            "sessions": list(self.sessions),
            "origin": dict(self.origin),
            "receivers": {s: list(r) for s, r in self.receivers.items()},
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "ConnectionRequirement":
        if obj.get("format", "connection/1") != "connection/1":
            raise StructuralError(f"unexpected format {obj.get('format')!r}")
        return cls(obj["sessions"], obj["origin"], obj["receivers"])


class Alphabet:
    """Either an explicit symbol list or an F_q vector space (q, dim)."""

    __slots__ = ("kind", "symbols", "q", "dim", "_index")

    def __init__(self, symbols: Optional[Sequence[object]] = None, q: Optional[int] = None, dim: Optional[int] = None):
        if symbols is not None:
            self.kind = "symbols"
            self.symbols = tuple(symbols)
            if not self.symbols:
                raise StructuralError("alphabet must be nonempty")
            if len(set(self.symbols)) != len(self.symbols):
                raise StructuralError("alphabet symbols must be distinct")
            self.q = None
            self.dim = None
            self._index = {s: i for i, s in enumerate(self.symbols)}
        else:
            if q is None or dim is None:
                raise StructuralError("vector alphabet needs q and dim")
            self.kind = "vector"
            self.q = q
            self.dim = dim
            self.symbols = None
            self._index = None

    @property
    def size(self) -> int:
        if self.kind == "symbols":
            return len(self.symbols)
        return self.q ** self.dim

    def index(self, symbol) -> int:
        if self.kind == "symbols":
            return self._index[symbol]
        return GF(self.q).vec_index(symbol)

    def symbol(self, idx: int):
        if self.kind == "symbols":
            return self.symbols[idx]
        q, dim = self.q, self.dim
        v = []
        for _ in range(dim):
            v.append(idx % q)
            idx //= q
        return tuple(reversed(v))

    def log_size(self) -> LogScalar:
        return LogScalar.log_int(self.size)

    def to_json(self) -> dict:
        if self.kind == "symbols":
            return {"kind": "symbols", "symbols": [_sym_json(s) for s in self.symbols]}
        return {"kind": "vector", "q": self.q, "dim": self.dim}

    @classmethod
    def from_json(cls, obj: Mapping) -> "Alphabet":
        if obj["kind"] == "symbols":
            return cls(symbols=[_sym_dejson(s) for s in obj["symbols"]])
        return cls(q=obj["q"], dim=obj["dim"])

    def __eq__(self, other):
        return (
            isinstance(other, Alphabet)
            and self.kind == other.kind
            and self.symbols == other.symbols
            and self.q == other.q
            and self.dim == other.dim
        )


def _sym_json(s):
    if isinstance(s, tuple):
        return list(_sym_json(x) for x in s)
    return s


def _sym_dejson(s):
    if isinstance(s, list):
        return tuple(_sym_dejson(x) for x in s)
    return s


class TableMap:
    """Dense lookup table over the flat feed-domain index."""

    __slots__ = ("table",)

    def __init__(self, table: Sequence[int]):
        self.table = np.asarray(table, dtype=np.int64)

    @classmethod
    def from_function(cls, fn, feed_alphabets: Sequence[Alphabet], out_alphabet: Alphabet) -> "TableMap":
        sizes = [a.size for a in feed_alphabets]
        total = 1
        for s in sizes:
            total *= s
        table = np.empty(total, dtype=np.int64)
        for flat in range(total):
            rem = flat
            idxs = []
            for s in reversed(sizes):
                idxs.append(rem % s)
                rem //= s
            idxs.reverse()
            syms = tuple(a.symbol(i) for a, i in zip(feed_alphabets, idxs))
            table[flat] = out_alphabet.index(fn(*syms))
        return cls(table)

    def to_json(self) -> dict:
        return {"kind": "table", "table": self.table.tolist()}


class LinearMap:
    """F_q matrix acting on the concatenated feed vector: y = x @ M."""

    __slots__ = ("q", "matrix")

    def __init__(self, q: int, matrix: Sequence[Sequence[int]]):
        self.q = q
        self.matrix = [list(r) for r in matrix]

    @property
    def in_dim(self) -> int:
        return len(self.matrix)

    @property
    def out_dim(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    def to_table(self, feed_alphabets: Sequence[Alphabet]) -> np.ndarray:
        """Dense output-index table over the flat feed domain (vectorized)."""
        gf = GF(self.q)
        q = self.q
        dims = []
        for a in feed_alphabets:
            if a.kind != "vector" or a.q != q:
                raise StructuralError("linear encoder requires F_q vector feeds over the same q")
            dims.append(a.dim)
        in_dim = sum(dims)
        if in_dim != self.in_dim:
            raise StructuralError(
                f"linear map expects input dim {self.in_dim}, feeds provide {in_dim}"
            )
        total = q ** in_dim
        flat = np.arange(total, dtype=np.int64)
        # q-ary digits, most significant first (matches flat feed indexing
        # because each vector alphabet indexes base-q, first coord first)
        digits = []
        rem = flat
        for pos in range(in_dim - 1, -1, -1):
            digits.append((rem // q ** pos) % q)
        add = np.array(gf.add_table, dtype=np.int64)
        mul = np.array(gf.mul_table, dtype=np.int64)
        out = np.zeros(total, dtype=np.int64)
        for j in range(self.out_dim):
            acc = np.zeros(total, dtype=np.int64)
            for i in range(in_dim):
                c = self.matrix[i][j]
                if c:
                    acc = add[acc, mul[digits[i], c]]
            out = out * q + acc
        return out

    def to_json(self) -> dict:
        return {"kind": "linear", "q": self.q, "matrix": self.matrix}


EncoderMap = Union[TableMap, LinearMap]


def _map_from_json(obj: Mapping) -> EncoderMap:
    if obj["kind"] == "table":
        return TableMap(obj["table"])
    if obj["kind"] == "linear":
        return LinearMap(obj["q"], obj["matrix"])
    raise StructuralError(f"unknown map kind {obj['kind']!r}")


class NetworkCode:
    def __init__(
        self,
        alphabets: Mapping[str, Alphabet],
        encoders: Mapping[str, EncoderMap],
        decoders: Mapping[Tuple[str, str], EncoderMap],
    ):
        self.alphabets = dict(alphabets)
        self.encoders = dict(encoders)
        self.decoders = dict(decoders)

    def is_linear(self) -> Optional[int]:
        """The common q if every alphabet is a vector space and every map is
        linear; otherwise None."""
        qs = set()
        for a in self.alphabets.values():
            if a.kind != "vector":
                return None
            qs.add(a.q)
        for m in list(self.encoders.values()) + list(self.decoders.values()):
            if not isinstance(m, LinearMap):
                return None
            qs.add(m.q)
        if len(qs) != 1:
            return None
        return qs.pop()

    def to_json(self) -> dict:
        return {
            "format": "code/1",
            "alphabets": {k: a.to_json() for k, a in sorted(self.alphabets.items())},
            "encoders": {e: m.to_json() for e, m in sorted(self.encoders.items())},
            "decoders": [
                {"receiver": r, "session": s, "map": m.to_json()}
                for (r, s), m in sorted(self.decoders.items())
            ],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "NetworkCode":
        if obj.get("format", "code/1") != "code/1":
            raise StructuralError(f"unexpected format {obj.get('format')!r}")
        alph = {k: Alphabet.from_json(v) for k, v in obj["alphabets"].items()}
        enc = {e: _map_from_json(m) for e, m in obj["encoders"].items()}
        dec = {(d["receiver"], d["session"]): _map_from_json(d["map"]) for d in obj["decoders"]}
        return cls(alph, enc, dec)


class RateCapacityTuple:
    def __init__(self, rates: Mapping[str, LogScalar], caps: Mapping[str, LogScalar]):
        self.rates = dict(rates)
        self.caps = dict(caps)  # only capacitated edges appear
        for k, v in list(self.rates.items()) + list(self.caps.items()):
            if v.sign() < 0:
                raise ValueError(f"negative entry for {k!r}")

    def cap(self, edge_id: str) -> Capacity:
        return self.caps.get(edge_id, UNCAPPED)

    def __eq__(self, other):
        return (
            isinstance(other, RateCapacityTuple)
            and self.rates == other.rates
            and self.caps == other.caps
        )

    def to_json(self) -> dict:
        return {
            "format": "ratecap/1",
            "rates": {s: v.to_json() for s, v in sorted(self.rates.items())},
            "caps": {e: v.to_json() for e, v in sorted(self.caps.items())},
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "RateCapacityTuple":
        if obj.get("format", "ratecap/1") != "ratecap/1":
            raise ValueError(f"unexpected format {obj.get('format')!r}")
        return cls(
            {s: LogScalar.from_json(v) for s, v in obj["rates"].items()},
            {e: LogScalar.from_json(v) for e, v in obj["caps"].items()},
        )


def edge_feeds(net: Network, conn: ConnectionRequirement, edge: Edge) -> List[str]:
    """Canonical feed keys of an edge encoder: tail-origin sessions, then
    tail in-edges."""
    return conn.sessions_at(edge.tail) + [e.id for e in net.in_edges(edge.tail)]

def decoder_feeds(net: Network, conn: ConnectionRequirement, node: str) -> List[str]:
    return conn.sessions_at(node) + [e.id for e in net.in_edges(node)]


class EntropyOracle:
    """On-demand exact entropies of the empirical joint distribution of the
    session/edge variables (uniform over all source tuples)."""

    def __init__(self, arrays: Mapping[str, np.ndarray], sizes: Mapping[str, int], total: int):
        self.arrays = dict(arrays)
        self.sizes = dict(sizes)
        self.total = total
        self.ground = GroundSet(sorted(self.arrays))

    def entropy(self, keys: Sequence[str]) -> LogScalar:
        keys = list(keys)
        if not keys:
            return ZERO
        code = np.zeros(self.total, dtype=np.int64)
        card = 1
        for k in keys:
            code = code * self.sizes[k] + self.arrays[k]
            card *= self.sizes[k]
            if card > 1 << 40:
                _, code = np.unique(code, return_inverse=True)
                card = self.total
        _, counts = np.unique(code, return_counts=True)
        return entropy_of_counts(counts.tolist())

    def to_setfunction(self, max_ground: int = 14) -> SetFunction:
        n = len(self.ground)
        if n > max_ground:
            raise ResourceError(
                f"ground of size {n} too large to materialize; query entropies on demand"
            )
        values = [ZERO]
        for mask in range(1, 1 << n):
            values.append(self.entropy(self.ground.subset(mask)))
        return SetFunction(self.ground, values)


@dataclass
class EvaluationResult:
    zero_error: bool
    failing_inputs: List[tuple]
    oracle: Optional[EntropyOracle]

    @property
    def induced(self) -> SetFunction:
        if self.oracle is None:
            raise ResourceError("induced entropies unavailable (chunked evaluation)")
        return self.oracle.to_setfunction()


def _flat_index(arrays: List[np.ndarray], sizes: List[int]) -> np.ndarray:
    flat = np.zeros_like(arrays[0]) if arrays else np.zeros(1, dtype=np.int64)
    for arr, s in zip(arrays, sizes):
        flat = flat * s + arr
    return flat


def evaluate_code(
    net: Network,
    conn: ConnectionRequirement,
    code: NetworkCode,
    max_product: int = 1 << 24,
    chunk: int = 1 << 20,
    report_limit: int = 50,
) -> EvaluationResult:
    """Exhaustively enumerate all source tuples, propagate edge symbols in
    topological order, and check every decoder."""
    conn.validate_against(net)
    for e in net.edges:
        if e.id not in code.encoders:
            raise StructuralError(f"no encoder for edge {e.id}")
        if e.id not in code.alphabets:
            raise StructuralError(f"no alphabet for edge {e.id}")
    for s in conn.sessions:
        if s not in code.alphabets:
            raise StructuralError(f"no alphabet for session {s}")

    sizes = {k: a.size for k, a in code.alphabets.items()}
    sess = list(conn.sessions)
    total = 1
    for s in sess:
        total *= sizes[s]
    if total > max_product:
        raise ResourceError(
            f"source-tuple space of size {total} exceeds the cap {max_product}"
        )

    # canonicalize every encoder/decoder to a dense table
    tables: Dict[str, np.ndarray] = {}
    feeds_of: Dict[str, List[str]] = {}
    for e in net.edges_topo():
        feeds = edge_feeds(net, conn, e)
        feeds_of[e.id] = feeds
        enc = code.encoders[e.id]
        if isinstance(enc, TableMap):
            dom = 1
            for f in feeds:
                dom *= sizes[f]
            if len(enc.table) != dom:
                raise StructuralError(
                    f"encoder for {e.id} has {len(enc.table)} entries, expected {dom}"
                )
            if len(enc.table) and (enc.table.max() >= sizes[e.id] or enc.table.min() < 0):
                raise StructuralError(f"encoder for {e.id} writes outside its alphabet")
            tables[e.id] = enc.table
        else:
            tables[e.id] = enc.to_table([code.alphabets[f] for f in feeds])
    dec_tables: Dict[Tuple[str, str], np.ndarray] = {}
    dec_feeds: Dict[Tuple[str, str], List[str]] = {}
    for (r, s), dec in code.decoders.items():
        feeds = decoder_feeds(net, conn, r)
        dec_feeds[(r, s)] = feeds
        if isinstance(dec, TableMap):
            dec_tables[(r, s)] = dec.table
        else:
            dec_tables[(r, s)] = dec.to_table([code.alphabets[f] for f in feeds])
    for r, s in conn.demands():
        if (r, s) not in dec_tables:
            raise StructuralError(f"no decoder for session {s} at receiver {r}")

    failing: List[tuple] = []
    zero_error = True
    keep_arrays = total <= chunk
    oracle = None

    starts = range(0, total, chunk)
    for start in starts:
        stop = min(start + chunk, total)
        idx = np.arange(start, stop, dtype=np.int64)
        values: Dict[str, np.ndarray] = {}
        rem = idx
        for s in reversed(sess):
            values[s] = rem % sizes[s]
            rem = rem // sizes[s]
        for e in net.edges_topo():
            feeds = feeds_of[e.id]
            flat = _flat_index([values[f] for f in feeds], [sizes[f] for f in feeds])
            values[e.id] = tables[e.id][flat]
        for r, s in conn.demands():
            feeds = dec_feeds[(r, s)]
            flat = _flat_index([values[f] for f in feeds], [sizes[f] for f in feeds])
            got = dec_tables[(r, s)][flat]
            bad = np.nonzero(got != values[s])[0]
            if bad.size:
                zero_error = False
                for b in bad[: max(0, report_limit - len(failing))]:
                    src = tuple(
                        code.alphabets[t].symbol(int(values[t][b])) for t in sess
                    )
                    failing.append((src, r, s))
        if keep_arrays:
            oracle = EntropyOracle(values, sizes, total)

    return EvaluationResult(zero_error, failing, oracle)


def check_admissible(
    net: Network,
    conn: ConnectionRequirement,
    code: NetworkCode,
    tup: RateCapacityTuple,
    max_product: int = 1 << 24,
) -> bool:
    """Zero-error, log|A_e| <= ω_e on capacitated edges, log|A_s| >= λ_s."""
    result = evaluate_code(net, conn, code, max_product=max_product)
    if not result.zero_error:
        return False
    for e in net.edges:
        cap = tup.cap(e.id)
        if cap is UNCAPPED:
            continue
        if (code.alphabets[e.id].log_size() - cap).sign() > 0:
            return False
    for s in conn.sessions:
        lam = tup.rates.get(s, ZERO)
        if (code.alphabets[s].log_size() - lam).sign() < 0:
            return False
    return True


def code_product(
    net: Network, conn: ConnectionRequirement, code1: NetworkCode, code2: NetworkCode
) -> NetworkCode:
    """Componentwise product code: alphabets are Cartesian products,
    encoders/decoders act coordinate-wise."""
    keys = set(code1.alphabets) | set(code2.alphabets)
    if set(code1.alphabets) != set(code2.alphabets):
        raise ValueError("codes cover different sessions/edges")

    def pair_alpha(k: str) -> Alphabet:
        a1, a2 = code1.alphabets[k], code2.alphabets[k]
        return Alphabet(
            symbols=[
                (a1.symbol(i), a2.symbol(j))
                for i in range(a1.size)
                for j in range(a2.size)
            ]
        )

    alphabets = {k: pair_alpha(k) for k in keys}

    def tabulate(m: EncoderMap, feeds: List[str], cde: NetworkCode) -> np.ndarray:
        if isinstance(m, TableMap):
            return m.table
        return m.to_table([cde.alphabets[f] for f in feeds])

    def product_table(
        m1: EncoderMap, m2: EncoderMap, feeds: List[str], out_key: str
    ) -> TableMap:
        t1 = tabulate(m1, feeds, code1)
        t2 = tabulate(m2, feeds, code2)
        s1 = [code1.alphabets[f].size for f in feeds]
        s2 = [code2.alphabets[f].size for f in feeds]
        sp = [alphabets[f].size for f in feeds]
        dom = 1
        for s in sp:
            dom *= s
        idx = np.arange(dom, dtype=np.int64)
        rem = idx
        f1 = np.zeros(dom, dtype=np.int64)
        f2 = np.zeros(dom, dtype=np.int64)
        # decompose the product-domain flat index feed by feed (last fastest)
        parts = []
        for s in reversed(sp):
            parts.append(rem % s)
            rem = rem // s
        parts.reverse()
        for part, a1, a2 in zip(parts, s1, s2):
            i1 = part // a2
            i2 = part % a2
            f1 = f1 * a1 + i1
            f2 = f2 * a2 + i2
        o2 = code2.alphabets[out_key].size
        return TableMap(t1[f1] * o2 + t2[f2])

    encoders = {}
    for e in net.edges:
        feeds = edge_feeds(net, conn, e)
        encoders[e.id] = product_table(code1.encoders[e.id], code2.encoders[e.id], feeds, e.id)
    decoders = {}
    for (r, s) in code1.decoders:
        if (r, s) not in code2.decoders:
            continue
        feeds = decoder_feeds(net, conn, r)
        decoders[(r, s)] = product_table(code1.decoders[(r, s)], code2.decoders[(r, s)], feeds, s)
    return NetworkCode(alphabets, encoders, decoders)


def kernels_of_linear_code(
    net: Network, conn: ConnectionRequirement, code: NetworkCode
) -> SubspaceFamily:
    """Compose local encoder matrices along topological order to get global
    maps from the stacked source space, and return their kernels, indexed by
    sessions (sorted) then edges (sorted)."""
    q = code.is_linear()
    if q is None:
        raise ValueError("code is not linear over a common field")
    gf = GF(q)
    sess = list(conn.sessions)
    dims = [code.alphabets[s].dim for s in sess]
    D = sum(dims)
    offsets = {}
    off = 0
    for s, d in zip(sess, dims):
        offsets[s] = off
        off += d

    global_maps: Dict[str, List[List[int]]] = {}
    for s, d in zip(sess, dims):
        M = gf.zeros(D, d)
        for i in range(d):
            M[offsets[s] + i][i] = 1
        global_maps[s] = M
    for e in net.edges_topo():
        feeds = edge_feeds(net, conn, e)
        stacked_cols: List[List[List[int]]] = [global_maps[f] for f in feeds]
        # hstack the feed global maps, then apply the local matrix
        hcols = [
            [x for M in stacked_cols for x in M[row]] for row in range(D)
        ]
        enc = code.encoders[e.id]
        global_maps[e.id] = gf.matmul(hcols, enc.matrix)

    members = []
    for key in sess + [e.id for e in sorted(net.edges, key=lambda e: e.id)]:
        members.append(gf.nullspace(global_maps[key]))
    return SubspaceFamily(q, D, members)


def to_dot(net: Network, conn: ConnectionRequirement | None = None) -> str:
    """DOT export: open circles for session origins, double circles for
    receivers, solid points otherwise; capacities as edge labels."""
    origins = set()
    receivers = set()
    annot: Dict[str, List[str]] = {}
    if conn is not None:
        for s in conn.sessions:
            origins.add(conn.origin[s])
            annot.setdefault(conn.origin[s], []).append(f"O:{s}")
            for r in conn.receivers[s]:
                receivers.add(r)
                annot.setdefault(r, []).append(f"D:{s}")
    lines = ["digraph network {", "  rankdir=LR;"]
    for n in net.nodes:
        label = n
        if n in annot:
            label += "\\n" + ",".join(annot[n])
        if n in origins:
            lines.append(f'  "{n}" [shape=circle, label="{label}"];')
        elif n in receivers:
            lines.append(f'  "{n}" [shape=doublecircle, label="{label}"];')
        else:
            lines.append(f'  "{n}" [shape=point, label=""];')
    for e in net.edges:
        cap = "" if e.cap is UNCAPPED else _logscalar_text(e.cap)
        lines.append(f'  "{e.tail}" -> "{e.head}" [label="{e.id}{": " + cap if cap else ""}"];')
    lines.append("}")
    return "\n".join(lines)


def _logscalar_text(x: LogScalar) -> str:
    if x.is_zero():
        return "0"
    parts = []
    for p, qq in sorted(x.terms.items()):
        parts.append(f"{qq}·log{p}")
    return " + ".join(parts).replace("+ -", "- ")
