"""Proper cycles, proper paths, and the tight-path hypergraph.

A *proper cycle* of a layered graph visits each part exactly once (one
vertex per part, cyclically adjacent); proper cycles are the hyperedges of
the tight-path hypergraph.  A *proper path* visits at most one vertex per
part, along a consecutive arc of parts.

Canonical encoding: a proper cycle is stored part-indexed, so it has one
representation, and is ranked by the mixed-radix key
``sum(local_i * m**(k-1-i))`` over parts ``i``.  Enumeration emits keys in
ascending order; counting quantities are computed from adjacency-block
matrix products without materializing cycles (entries of all intermediate
products are integers, kept exactly representable - see ``_check_exact``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvariantViolationError, ResourceLimitError
from .layered_graph import LayeredGraph

__all__ = [
    "DEFAULT_CYCLE_CAP",
    "ProperCycle",
    "ProperPath",
    "TrashFamily",
    "proper_path",
    "trash_family",
    "count_proper_cycles",
    "cycles_per_vertex",
    "cycles_through_vertex",
    "cycle_keys",
    "enumerate_proper_cycles",
    "decode_keys",
    "extend_path",
    "count_family_extensions",
    "count_restricted_extensions",
    "count_cycles_meeting",
    "cycle_subpaths",
    "TightHypergraph",
    "build_hypergraph",
    "validate_tight_path",
    "validate_tight_path_verbose",
]

DEFAULT_CYCLE_CAP = 100_000_000


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class ProperCycle:
    """A proper cycle as part-indexed global vertex ids (vertices[i] in part i)."""

    vertices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True, order=True)
class ProperPath:
    """A proper path: consecutive vertices adjacent, one part each, arc of parts.

    Orientation is normalized so the first vertex lies in the lower-numbered
    of the two endpoint parts.
    """

    vertices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class TrashFamily:
    """Pairwise vertex-disjoint proper paths of exactly k-1 vertices each."""

    paths: tuple[ProperPath, ...]

    def __len__(self) -> int:
        return len(self.paths)

    def vertex_set(self) -> set[int]:
        out: set[int] = set()
        for p in self.paths:
            out.update(p.vertices)
        return out


def proper_path(g: LayeredGraph, vertices) -> ProperPath:
    """Validate and normalize a vertex sequence into a ProperPath."""
    seq = [int(v) for v in vertices]
    if not 1 <= len(seq) <= g.k - 1:
        raise InvariantViolationError(
            f"proper path must have 1..{g.k - 1} vertices, got {len(seq)}"
        )
    if len(set(seq)) != len(seq):
        raise InvariantViolationError("proper path has repeated vertices")
    parts = [g.part_of(v) for v in seq]
    if len(set(parts)) != len(parts):
        raise InvariantViolationError("proper path hits a part twice")
    for a, b in zip(seq, seq[1:]):
        if not g.adjacent(a, b):
            raise InvariantViolationError(f"consecutive vertices {a}, {b} not adjacent")
    # adjacency forces consecutive parts to differ by +-1 cyclically; with all
    # parts distinct the walk is monotone, so the part set is an arc.
    if parts[0] > parts[-1]:
        seq.reverse()
    return ProperPath(tuple(seq))


def trash_family(g: LayeredGraph, paths) -> TrashFamily:
    """Validate a family of (k-1)-vertex proper paths for pairwise disjointness."""
    norm: list[ProperPath] = []
    for p in paths:
        pp = p if isinstance(p, ProperPath) else proper_path(g, p)
        if len(pp) != g.k - 1:
            raise InvariantViolationError(
                f"trash paths must have exactly {g.k - 1} vertices, got {len(pp)}"
            )
        norm.append(pp)
    seen: set[int] = set()
    for pp in norm:
        for v in pp.vertices:
            if v in seen:
                raise InvariantViolationError(f"trash paths overlap at vertex {v}")
            seen.add(v)
    return TrashFamily(tuple(norm))


# ---------------------------------------------------------------------------
# exact counting via adjacency-block products
# ---------------------------------------------------------------------------


def _check_exact(g: LayeredGraph) -> None:
    # intermediate chain entries are bounded by m**(k-1); keep them exactly
    # representable in float64, and totals within int64
    if g.m ** (g.k - 1) > 2**52:
        raise ResourceLimitError(
            "exact float64 counting range exceeded", g.m ** (g.k - 1), 2**52
        )
    if g.m**g.k >= 2**63:
        raise ResourceLimitError("cycle totals exceed int64 range", g.m**g.k, 2**63)


def _chain(blocks_f: list[np.ndarray]) -> np.ndarray:
    out = blocks_f[0]
    for b in blocks_f[1:]:
        out = out @ b
    return out


def count_proper_cycles(g: LayeredGraph) -> int:
    """Total number of proper cycles (no materialization)."""
    _check_exact(g)
    fb = [b.astype(np.float64) for b in g.blocks]
    prefix = _chain(fb[:-1])
    per_start = np.einsum("ab,ba->a", prefix, fb[-1])
    return int(per_start.astype(np.int64).sum())


def cycles_per_vertex(g: LayeredGraph) -> np.ndarray:
    """Proper-cycle count through every vertex, as an int64 array of length k*m."""
    _check_exact(g)
    fb = [b.astype(np.float64) for b in g.blocks]
    out = np.empty(g.k * g.m, dtype=np.int64)
    for part in range(g.k):
        order = [fb[(part + j) % g.k] for j in range(g.k)]
        prefix = _chain(order[:-1])
        diag = np.einsum("ab,ba->a", prefix, order[-1])
        out[part * g.m : (part + 1) * g.m] = diag.astype(np.int64)
    return out


def cycles_through_vertex(g: LayeredGraph, v: int) -> int:
    """Number of proper cycles containing vertex v."""
    g._check_vertex(int(v))
    _check_exact(g)
    part, local = g.part_of(int(v)), g.local(int(v))
    vec = np.zeros(g.m, dtype=np.float64)
    vec[local] = 1.0
    for j in range(g.k):
        vec = vec @ g.blocks[(part + j) % g.k].astype(np.float64)
    return int(vec[local])


def count_cycles_meeting(g: LayeredGraph, cset) -> int:
    """Number of proper cycles intersecting the vertex set ``cset``."""
    verts = sorted({int(v) for v in cset})
    for v in verts:
        g._check_vertex(v)
    if not verts:
        return 0
    keep = np.ones(g.k * g.m, dtype=bool)
    keep[verts] = False
    masks = [keep[i * g.m : (i + 1) * g.m] for i in range(g.k)]
    masked = [
        g.blocks[i] & masks[i][:, None] & masks[(i + 1) % g.k][None, :]
        for i in range(g.k)
    ]
    avoiding = count_proper_cycles(LayeredGraph(g.k, g.m, masked))
    return count_proper_cycles(g) - avoiding


# ---------------------------------------------------------------------------
# enumeration (canonical ascending keys)
# ---------------------------------------------------------------------------


def _radices(k: int, m: int) -> np.ndarray:
    if k * math.log2(max(m, 2)) >= 64:
        raise ResourceLimitError("canonical key space exceeds 64 bits", m**k, 2**64)
    return np.array([m ** (k - 1 - i) for i in range(k)], dtype=np.uint64)


def cycle_keys(g: LayeredGraph, cap: int = DEFAULT_CYCLE_CAP) -> np.ndarray:
    """All proper cycles as ascending canonical keys (uint64).

    Counts first via matrix products and raises ``ResourceLimitError`` when
    the total exceeds ``cap``, so runaway parameters fail fast.
    """
    total = count_proper_cycles(g)
    if total > cap:
        raise ResourceLimitError("proper cycle count exceeds cap", total, cap)
    k, m = g.k, g.m
    radix = _radices(k, m)
    csrs = [g.csr(part, "forward") for part in range(k - 1)]
    close = g.blocks[k - 1]
    chunks: list[np.ndarray] = []
    for a in range(m):
        cols: list[np.ndarray] = [np.array([a], dtype=np.int64)]
        ends = cols[0]
        for level in range(1, k):
            ptr, idx = csrs[level - 1]
            starts = ptr[ends]
            cnt = ptr[ends + 1] - starts
            n_new = int(cnt.sum())
            if n_new == 0:
                ends = np.empty(0, dtype=np.int64)
                break
            rep = np.repeat(np.arange(ends.size), cnt)
            excl = np.concatenate(([0], np.cumsum(cnt)[:-1]))
            pos = np.arange(n_new, dtype=np.int64) + np.repeat(starts - excl, cnt)
            new_ends = idx[pos].astype(np.int64)
            cols = [c[rep] for c in cols]
            cols.append(new_ends)
            ends = new_ends
        if ends.size == 0:
            continue
        keep = close[ends, a]
        if not keep.any():
            continue
        keys = np.zeros(int(keep.sum()), dtype=np.uint64)
        for i, c in enumerate(cols):
            keys += c[keep].astype(np.uint64) * radix[i]
        chunks.append(keys)
    if not chunks:
        return np.empty(0, dtype=np.uint64)
    out = np.concatenate(chunks)
    assert out.size == total
    return out


def decode_keys(keys: np.ndarray, k: int, m: int) -> np.ndarray:
    """Decode canonical keys into (len, k) int64 part-local indices."""
    out = np.empty((keys.size, k), dtype=np.int64)
    rem = keys.astype(np.uint64).copy()
    for i in range(k):
        radix = np.uint64(m ** (k - 1 - i))
        out[:, i] = (rem // radix).astype(np.int64)
        rem %= radix
    return out


def _key_to_cycle(key: int, k: int, m: int) -> ProperCycle:
    locs = []
    rem = int(key)
    for i in range(k):
        radix = m ** (k - 1 - i)
        locs.append(rem // radix)
        rem %= radix
    return ProperCycle(tuple(loc + i * m for i, loc in enumerate(locs)))


def enumerate_proper_cycles(
    g: LayeredGraph, cap: int = DEFAULT_CYCLE_CAP
) -> list[ProperCycle]:
    """Every proper cycle exactly once, in canonical (ascending key) order."""
    keys = cycle_keys(g, cap)
    return [_key_to_cycle(int(key), g.k, g.m) for key in keys]


# ---------------------------------------------------------------------------
# path extensions
# ---------------------------------------------------------------------------


def _missing_part(g: LayeredGraph, path: ProperPath) -> int:
    hit = {g.part_of(v) for v in path.vertices}
    (q,) = set(range(g.k)) - hit
    return q


def extend_path(g: LayeredGraph, path: ProperPath | list[int]) -> np.ndarray:
    """Global ids of vertices completing a (k-1)-vertex proper path into a cycle.

    The completing vertex lies in the one part the path misses and must be
    adjacent to both path endpoints; each returned vertex closes a distinct
    proper cycle.
    """
    pp = path if isinstance(path, ProperPath) else proper_path(g, path)
    if len(pp) != g.k - 1:
        raise InvariantViolationError(
            f"extend_path needs a path of exactly {g.k - 1} vertices, got {len(pp)}"
        )
    q = _missing_part(g, pp)
    mask = np.ones(g.m, dtype=bool)
    for endpoint in (pp.vertices[0], pp.vertices[-1]):
        ep, el = g.part_of(endpoint), g.local(endpoint)
        if (ep - q) % g.k == 1:  # endpoint sits in part q+1: column of block q
            mask &= g.blocks[q][:, el]
        else:  # endpoint sits in part q-1: row of block q-1
            mask &= g.blocks[(q - 1) % g.k][el]
    return np.nonzero(mask)[0].astype(np.int64) + q * g.m


def _extension_keys(g: LayeredGraph, path: ProperPath, ext: np.ndarray) -> np.ndarray:
    """Canonical keys of the cycles obtained by each extension vertex."""
    radix = _radices(g.k, g.m)
    base = np.uint64(0)
    for v in path.vertices:
        base += np.uint64(g.local(v)) * radix[g.part_of(v)]
    q = _missing_part(g, path)
    return base + (ext % g.m).astype(np.uint64) * radix[q]


def count_family_extensions(g: LayeredGraph, fam: TrashFamily) -> int:
    """Number of distinct proper cycles extending at least one family path."""
    if not isinstance(fam, TrashFamily):
        fam = trash_family(g, fam)
    keys = [
        _extension_keys(g, p, extend_path(g, p)) for p in fam.paths
    ]
    if not keys:
        return 0
    return int(np.unique(np.concatenate(keys)).size)


def count_restricted_extensions(g: LayeredGraph, aset, fam: TrashFamily) -> int:
    """Distinct cycles extending a family path by a vertex from aset or the family."""
    if not isinstance(fam, TrashFamily):
        fam = trash_family(g, fam)
    allowed = {int(v) for v in aset} | fam.vertex_set()
    for v in allowed:
        g._check_vertex(v)
    keys = []
    for p in fam.paths:
        ext = extend_path(g, p)
        if ext.size == 0:
            continue
        sel = np.fromiter((int(u) in allowed for u in ext), dtype=bool, count=ext.size)
        if sel.any():
            keys.append(_extension_keys(g, p, ext[sel]))
    if not keys:
        return 0
    return int(np.unique(np.concatenate(keys)).size)


def cycle_subpaths(g: LayeredGraph, cycle: ProperCycle) -> list[ProperPath]:
    """The k proper (k-1)-paths a proper cycle extends (one per dropped part)."""
    k = g.k
    out = []
    for q in range(k):
        seq = [cycle.vertices[(q + 1 + j) % k] for j in range(k - 1)]
        out.append(proper_path(g, seq))
    return out


# ---------------------------------------------------------------------------
# tight-path hypergraph
# ---------------------------------------------------------------------------


class TightHypergraph:
    """The k-uniform hypergraph whose hyperedges are proper cycles of a graph.

    Hyperedges are held as the ascending canonical key array; ids are ranks
    in that order.  Membership tests and extension lookups run directly on
    the key array, so the structure stays usable at tens of millions of
    hyperedges.
    """

    def __init__(self, graph: LayeredGraph, keys: np.ndarray):
        self.graph = graph
        self.keys = np.asarray(keys, dtype=np.uint64)
        if self.keys.size > 1 and not (self.keys[1:] > self.keys[:-1]).all():
            raise InvariantViolationError("hyperedge keys must be strictly ascending")
        self.keys.setflags(write=False)

    def __len__(self) -> int:
        return int(self.keys.size)

    @property
    def num_vertices(self) -> int:
        return self.graph.num_vertices

    def hyperedge(self, idx: int) -> ProperCycle:
        return _key_to_cycle(int(self.keys[idx]), self.graph.k, self.graph.m)

    def hyperedges(self) -> list[ProperCycle]:
        return [self.hyperedge(i) for i in range(len(self))]

    def key_of(self, vertices) -> int:
        """Canonical key of a one-per-part vertex set (any order)."""
        g = self.graph
        locs = [-1] * g.k
        for v in vertices:
            p = g.part_of(int(v))
            if locs[p] != -1:
                raise InvariantViolationError("vertex set hits a part twice")
            locs[p] = g.local(int(v))
        if -1 in locs:
            raise InvariantViolationError("vertex set misses a part")
        key = 0
        for i, loc in enumerate(locs):
            key += loc * g.m ** (g.k - 1 - i)
        return key

    def edge_id(self, vertices) -> int:
        """Id of the hyperedge with this vertex set, or -1 if absent."""
        key = np.uint64(self.key_of(vertices))
        pos = int(np.searchsorted(self.keys, key))
        if pos < len(self) and self.keys[pos] == key:
            return pos
        return -1

    def ids_for_keys(self, keys: np.ndarray) -> np.ndarray:
        """Ids for canonical keys; -1 where the key is not a hyperedge."""
        keys = np.asarray(keys, dtype=np.uint64)
        if len(self) == 0:
            return np.full(keys.shape, -1, dtype=np.int64)
        pos = np.searchsorted(self.keys, keys)
        ok = self.keys[np.minimum(pos, len(self) - 1)] == keys
        return np.where(ok, pos, -1).astype(np.int64)

    def extension_ids(self, path: ProperPath) -> np.ndarray:
        """Ids of hyperedges extending a (k-1)-path (the on-demand path index)."""
        ext = extend_path(self.graph, path)
        if ext.size == 0:
            return np.empty(0, dtype=np.int64)
        keys = _extension_keys(self.graph, path, ext)
        ids = self.ids_for_keys(keys)
        return ids[ids >= 0]

    def edges_containing(self, v: int) -> np.ndarray:
        """Ids of hyperedges containing vertex v (vectorized incidence scan)."""
        g = self.graph
        g._check_vertex(int(v))
        part, local = g.part_of(int(v)), g.local(int(v))
        radix = np.uint64(g.m ** (g.k - 1 - part))
        locs = (self.keys // radix) % np.uint64(g.m)
        return np.nonzero(locs == np.uint64(local))[0].astype(np.int64)

    def to_json(self) -> dict:
        return {
            "vertices": self.num_vertices,
            "edges": [list(self.hyperedge(i).vertices) for i in range(len(self))],
        }

    @classmethod
    def from_cycles(cls, graph: LayeredGraph, cycles) -> "TightHypergraph":
        """Hand-built hypergraph from explicit proper cycles (validated)."""
        keys = []
        for c in cycles:
            verts = c.vertices if isinstance(c, ProperCycle) else tuple(c)
            for i, v in enumerate(verts):
                if graph.part_of(int(v)) != i:
                    raise InvariantViolationError(
                        "cycle vertices must be part-indexed (vertices[i] in part i)"
                    )
            for i in range(graph.k):
                if not graph.adjacent(int(verts[i]), int(verts[(i + 1) % graph.k])):
                    raise InvariantViolationError(
                        f"cycle {verts} misses adjacency at part {i}"
                    )
            key = 0
            for i, v in enumerate(verts):
                key += graph.local(int(v)) * graph.m ** (graph.k - 1 - i)
            keys.append(key)
        arr = np.array(sorted(keys), dtype=np.uint64)
        if arr.size != np.unique(arr).size:
            raise InvariantViolationError("duplicate cycles")
        return cls(graph, arr)


def build_hypergraph(g: LayeredGraph, cap: int = DEFAULT_CYCLE_CAP) -> TightHypergraph:
    """Enumerate all proper cycles of g into a TightHypergraph."""
    return TightHypergraph(g, cycle_keys(g, cap))


# ---------------------------------------------------------------------------
# tight-path validation
# ---------------------------------------------------------------------------


def validate_tight_path_verbose(
    h: TightHypergraph, seq, coloring=None, color: int | None = None
) -> tuple[bool, str | None]:
    """Check a vertex sequence is a tight path of h; returns (ok, reason).

    Reasons: too-short, unknown-vertex, repeated-vertex, window-not-one-per-part,
    window-not-hyperedge, window-wrong-color, deleted-window (never raised here).
    """
    g = h.graph
    seq = [int(v) for v in seq]
    if len(seq) < g.k:
        return False, "too-short"
    for v in seq:
        if not 0 <= v < g.num_vertices:
            return False, "unknown-vertex"
    if len(set(seq)) != len(seq):
        return False, "repeated-vertex"
    for start in range(len(seq) - g.k + 1):
        window = seq[start : start + g.k]
        parts = {g.part_of(v) for v in window}
        if len(parts) != g.k:
            return False, "window-not-one-per-part"
        eid = h.edge_id(window)
        if eid < 0:
            return False, "window-not-hyperedge"
        if coloring is not None and int(coloring.colors[eid]) != int(color):
            return False, "window-wrong-color"
    return True, None


def validate_tight_path(
    h: TightHypergraph, seq, coloring=None, color: int | None = None
) -> bool:
    """True iff seq is a tight path of h (optionally monochromatic in color)."""
    ok, _ = validate_tight_path_verbose(h, seq, coloring, color)
    return ok
