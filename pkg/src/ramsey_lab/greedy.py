"""Colorings of the tight-path hypergraph and the greedy path builder.

The builder maintains a working-color tight path A, a trash family of
(k-1)-vertex proper paths, and the unused vertex set U.  A round either
reaches a path of n vertices, fills the trash to n paths, or runs out of
eligible starting edges.  The outer loop restarts after each full trash,
deleting every working-color hyperedge that extends a trashed path, and
finishes with either a found path or an audited certificate.

All choices (starting edge, extension vertex) default to the
lexicographically least eligible option, so runs are replayable; a seeded
random policy is available for experiments.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .cycles import (
    ProperPath,
    TightHypergraph,
    TrashFamily,
    count_cycles_meeting,
    count_family_extensions,
    count_proper_cycles,
    count_restricted_extensions,
    decode_keys,
    proper_path,
    trash_family,
)
from .errors import ParameterError, ResourceLimitError
from .layered_graph import LayeredGraph
from .seeds import make_rng

__all__ = [
    "Coloring",
    "random_coloring",
    "adversarial_coloring",
    "pick_majority_color",
    "LexChoice",
    "RandomChoice",
    "RoundOutcome",
    "RoundResult",
    "GreedyState",
    "greedy_round",
    "FoundPath",
    "Certificate",
    "RoundRecord",
    "RoundAudit",
    "CertificateAudit",
    "run_outer",
    "audit_certificate",
    "outcome_to_json",
]

_SCAN_CHUNK = 1 << 20
_BALANCED_GREEDY_CAP = 200_000


# ---------------------------------------------------------------------------
# colorings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Coloring:
    """Total assignment of one of r colors to every hyperedge, in canonical order."""

    r: int
    colors: np.ndarray

    def __post_init__(self):
        if self.r < 2:
            raise ParameterError(f"r must be >= 2, got {self.r}")
        object.__setattr__(
            self, "colors", np.ascontiguousarray(self.colors, dtype=np.uint8)
        )
        if self.colors.size and int(self.colors.max()) >= self.r:
            raise ParameterError("color out of range")
        self.colors.setflags(write=False)

    def counts(self) -> np.ndarray:
        return np.bincount(self.colors, minlength=self.r)

    def to_json(self) -> dict:
        return {"r": self.r, "colors": [int(c) for c in self.colors]}

    @classmethod
    def from_json(cls, doc: dict) -> "Coloring":
        return cls(int(doc["r"]), np.array(doc["colors"], dtype=np.uint8))


def random_coloring(h: TightHypergraph, r: int, seed: int) -> Coloring:
    """I.i.d. uniform colors from the Philox stream for ``seed``."""
    if r > 255:
        raise ParameterError("at most 255 colors supported")
    colors = make_rng(seed).integers(0, r, size=len(h), dtype=np.uint8)
    return Coloring(r, colors)


def _decoded_globals(h: TightHypergraph, lo: int, hi: int) -> np.ndarray:
    g = h.graph
    locs = decode_keys(h.keys[lo:hi], g.k, g.m)
    return locs + (np.arange(g.k, dtype=np.int64) * g.m)[None, :]


def _vertex_cut_coloring(h: TightHypergraph, r: int, seed: int) -> Coloring:
    g = h.graph
    rng = make_rng(seed)
    size = max(1, g.num_vertices // 4)
    cut = np.zeros(g.num_vertices, dtype=bool)
    cut[rng.choice(g.num_vertices, size=size, replace=False)] = True
    colors = np.empty(len(h), dtype=np.uint8)
    for lo in range(0, len(h), _SCAN_CHUNK):
        hi = min(lo + _SCAN_CHUNK, len(h))
        verts = _decoded_globals(h, lo, hi)
        colors[lo:hi] = np.where(cut[verts].any(axis=1), 0, 1)
    return Coloring(r, colors)


def _balanced_greedy_coloring(h: TightHypergraph, r: int) -> Coloring:
    """Chain-averse coloring: each edge takes the color minimizing the number
    of already-colored tight neighbors (edges differing in one part slot),
    breaking ties toward the least-used color, then the smallest index."""
    if len(h) > _BALANCED_GREEDY_CAP:
        raise ResourceLimitError(
            "balanced-greedy strategy is for small hypergraphs", len(h), _BALANCED_GREEDY_CAP
        )
    g = h.graph
    radix = [g.m ** (g.k - 1 - i) for i in range(g.k)]
    neighbor_counts: dict[tuple[int, int], np.ndarray] = {}
    used = np.zeros(r, dtype=np.int64)
    colors = np.empty(len(h), dtype=np.uint8)
    for eid in range(len(h)):
        key = int(h.keys[eid])
        wildcards = []
        rem = key
        for q in range(g.k):
            loc = rem // radix[q]
            rem %= radix[q]
            wildcards.append((q, key - loc * radix[q]))
        score = np.zeros(r, dtype=np.int64)
        for w in wildcards:
            cnt = neighbor_counts.get(w)
            if cnt is not None:
                score += cnt
        best = min(range(r), key=lambda c: (int(score[c]), int(used[c]), c))
        colors[eid] = best
        used[best] += 1
        for w in wildcards:
            cnt = neighbor_counts.setdefault(w, np.zeros(r, dtype=np.int64))
            cnt[best] += 1
    return Coloring(r, colors)


def adversarial_coloring(
    h: TightHypergraph, r: int, strategy: str, seed: int = 0
) -> Coloring:
    """Structured colorings for stress tests.

    balanced_greedy: chain-averse (see above); vertex_cut: edges meeting a
    random quarter of the vertices get color 0, the rest color 1;
    round_robin: colors cycle 0..r-1 in canonical edge order.
    """
    if r < 2:
        raise ParameterError(f"r must be >= 2, got {r}")
    if strategy == "round_robin":
        return Coloring(r, (np.arange(len(h)) % r).astype(np.uint8))
    if strategy == "vertex_cut":
        return _vertex_cut_coloring(h, r, seed)
    if strategy == "balanced_greedy":
        return _balanced_greedy_coloring(h, r)
    raise ParameterError(f"unknown adversarial strategy {strategy!r}")


def pick_majority_color(col: Coloring) -> int:
    """Color with the most edges; ties break to the smallest color index."""
    if col.colors.size == 0:
        raise ParameterError("cannot pick a majority color of an empty hypergraph")
    return int(np.argmax(col.counts()))


# ---------------------------------------------------------------------------
# choice policies
# ---------------------------------------------------------------------------


class LexChoice:
    """Always take the lexicographically least eligible option."""

    exhaustive = False

    def pick(self, candidates: np.ndarray) -> int:
        return int(candidates[0])


class RandomChoice:
    """Seeded uniform choice among eligible options (for experiments)."""

    exhaustive = True

    def __init__(self, seed: int):
        self._rng = make_rng(seed)

    def pick(self, candidates: np.ndarray) -> int:
        return int(self._rng.choice(candidates))


# ---------------------------------------------------------------------------
# one greedy round
# ---------------------------------------------------------------------------


class RoundOutcome(Enum):
    PATH_FOUND = "path_found"
    TRASH_FULL = "trash_full"
    NO_WORKING_EDGE = "no_working_edge"


@dataclass
class RoundResult:
    kind: RoundOutcome
    path: list[int]
    trash: TrashFamily


@dataclass
class GreedyState:
    """Mutable state of one greedy round: the working path, this round's
    trash, and the unused-vertex mask (complement of path and trash)."""

    path: list[int]
    trash: list[ProperPath]
    unused: np.ndarray

    @classmethod
    def fresh(cls, num_vertices: int) -> "GreedyState":
        return cls(path=[], trash=[], unused=np.ones(num_vertices, dtype=bool))

    def claim(self, vertices) -> None:
        self.path.extend(vertices)
        self.unused[list(vertices)] = False

    def trash_tail(self, g: LayeredGraph) -> ProperPath:
        """Move the last k-1 path vertices into the trash (they stay used)."""
        tail = self.path[-(g.k - 1) :]
        del self.path[-(g.k - 1) :]
        dropped = proper_path(g, tail)
        self.trash.append(dropped)
        return dropped

    def release_stump(self) -> None:
        """A leftover shorter than k is no tight path; return it to U."""
        for v in self.path:
            self.unused[v] = True
        self.path = []

    def check_invariants(self, h: TightHypergraph, colors, color, deleted) -> None:
        g = h.graph
        in_path = set(self.path)
        in_trash = {v for p in self.trash for v in p.vertices}
        assert len(in_path) == len(self.path), "path repeats a vertex"
        assert not (in_path & in_trash), "path and trash overlap"
        expected = np.ones(g.num_vertices, dtype=bool)
        expected[sorted(in_path | in_trash)] = False
        assert np.array_equal(expected, self.unused), "unused mask out of sync"
        if self.path:
            _assert_window_invariant(h, colors, color, deleted, self.path)


def _find_start_edge(
    h: TightHypergraph,
    colors: np.ndarray,
    color: int,
    deleted: np.ndarray,
    unused: np.ndarray,
    policy,
) -> int | None:
    """Least (or random) working-color, non-deleted hyperedge inside U."""
    hits: list[np.ndarray] = []
    for lo in range(0, len(h), _SCAN_CHUNK):
        hi = min(lo + _SCAN_CHUNK, len(h))
        elig = (colors[lo:hi] == color) & ~deleted[lo:hi]
        if not elig.any():
            continue
        idxs = np.nonzero(elig)[0].astype(np.int64) + lo
        verts = _decoded_globals(h, lo, hi)[idxs - lo]
        ok = unused[verts].all(axis=1)
        if ok.any():
            if not policy.exhaustive:
                return int(idxs[ok][0])
            hits.append(idxs[ok])
    if not hits:
        return None
    return policy.pick(np.concatenate(hits))


def _eligible_extensions(
    h: TightHypergraph,
    colors: np.ndarray,
    color: int,
    deleted: np.ndarray,
    unused: np.ndarray,
    path: list[int],
) -> np.ndarray:
    """Unused vertices extending the last k-1 of the path by a working edge."""
    g = h.graph
    k, m = g.k, g.m
    last = path[-1]
    first = path[-(k - 1)]
    q = (g.part_of(last) + 1) % k
    mask = g.blocks[(q - 1) % k][last % m].copy()
    mask &= g.blocks[q][:, first % m]
    mask &= unused[q * m : (q + 1) * m]
    locs = np.nonzero(mask)[0]
    if locs.size == 0:
        return locs.astype(np.int64)
    base = np.uint64(0)
    for v in path[-(k - 1) :]:
        base += np.uint64(v % m) * np.uint64(m ** (k - 1 - g.part_of(v)))
    keys = base + locs.astype(np.uint64) * np.uint64(m ** (k - 1 - q))
    ids = h.ids_for_keys(keys)
    ok = ids >= 0
    ok[ok] &= (colors[ids[ok]] == color) & ~deleted[ids[ok]]
    return locs[ok].astype(np.int64) + q * m


def _assert_window_invariant(
    h: TightHypergraph, colors, color, deleted, path: list[int]
) -> None:
    g = h.graph
    for s in range(len(path) - g.k + 1):
        eid = h.edge_id(path[s : s + g.k])
        assert eid >= 0, "path window is not a hyperedge"
        assert int(colors[eid]) == color, "path window has the wrong color"
        assert not deleted[eid], "path window is a deleted hyperedge"


def greedy_round(
    h: TightHypergraph,
    g: LayeredGraph,
    col: Coloring,
    color: int,
    n: int,
    deleted: np.ndarray | None = None,
    policy=None,
    debug: bool = False,
) -> RoundResult:
    """Run one greedy round against the non-deleted working-color hyperedges."""
    if g is not h.graph:
        raise ParameterError("hypergraph was built over a different graph")
    if not 0 <= color < col.r:
        raise ParameterError(f"color {color} out of range for r={col.r}")
    if n < g.k:
        raise ParameterError(f"n must be >= k, got n={n}, k={g.k}")
    if col.colors.size != len(h):
        raise ParameterError("coloring is not total over the hypergraph")
    if deleted is None:
        deleted = np.zeros(len(h), dtype=bool)
    if policy is None:
        policy = LexChoice()
    colors = col.colors
    state = GreedyState.fresh(g.num_vertices)

    def checked(kind: RoundOutcome, path: list[int]) -> RoundResult:
        if debug:
            state.check_invariants(h, colors, color, deleted)
        return RoundResult(kind, list(path), trash_family(g, state.trash))

    while True:
        eid = _find_start_edge(h, colors, color, deleted, state.unused, policy)
        if eid is None:
            return checked(RoundOutcome.NO_WORKING_EDGE, [])
        state.claim(h.hyperedge(eid).vertices)
        if debug:
            state.check_invariants(h, colors, color, deleted)
        if len(state.path) >= n:
            return checked(RoundOutcome.PATH_FOUND, state.path)
        while state.path:
            ext = _eligible_extensions(h, colors, color, deleted, state.unused, state.path)
            if ext.size:
                state.claim([policy.pick(ext)])
                if debug:
                    state.check_invariants(h, colors, color, deleted)
                if len(state.path) >= n:
                    return checked(RoundOutcome.PATH_FOUND, state.path)
                continue
            # no extension: trash the last k-1 vertices and retreat
            state.trash_tail(g)
            if len(state.trash) >= n:
                return checked(RoundOutcome.TRASH_FULL, list(state.path))
            if len(state.path) < g.k:
                state.release_stump()
            if debug:
                state.check_invariants(h, colors, color, deleted)


# ---------------------------------------------------------------------------
# outer loop and certificate audit
# ---------------------------------------------------------------------------


@dataclass
class RoundRecord:
    """Snapshot of one exhausted round: the path at trash-full time and its family."""

    path_snapshot: list[int]
    trash: TrashFamily


@dataclass
class FoundPath:
    color: int
    vertices: list[int]

    kind = "path"


@dataclass
class RoundAudit:
    restricted_extensions: int  # cycles extending a trashed path by a used vertex
    family_extensions: int  # cycles extending some trashed path
    bound: float  # family_extensions / (2kr)
    margin: float
    ok: bool


@dataclass
class CertificateAudit:
    """Recomputed counting facts behind a certificate.

    Checks: (a) working-color edges <= sum of per-round restricted extension
    counts plus the final intersecting count; (b) every round's restricted
    count stays under family_extensions/(2kr); (c) the intersecting count
    stays under total/(2r); (d) the rounds' family extension counts sum to
    at most k * total; (e) the working color holds strictly less than 1/r
    of all hyperedges.
    """

    k: int
    r: int
    color: int
    total_cycles: int
    working_color_edges: int
    rounds: list[RoundAudit]
    meeting_final_trash: int
    meeting_bound: float
    accounting_ok: bool  # (a)
    per_round_ok: bool  # (b)
    meeting_ok: bool  # (c)
    extension_budget_ok: bool  # (d)
    minority_ok: bool  # (e)
    minority_margin: float

    def contradiction_consistent(self) -> bool:
        """(b) and (c) passing must force (e); False flags an accounting leak."""
        return self.minority_ok or not (self.per_round_ok and self.meeting_ok)


@dataclass
class Certificate:
    color: int
    rounds: list[RoundRecord]
    final_trash: TrashFamily
    intersecting_set: list[int]
    audit: CertificateAudit | None = None

    kind = "certificate"


GreedyOutcome = FoundPath | Certificate


def audit_certificate(
    outcome: Certificate,
    h: TightHypergraph,
    g: LayeredGraph,
    col: Coloring,
    color: int | None = None,
) -> CertificateAudit:
    """Recompute every certificate quantity from scratch on the graph."""
    if color is None:
        color = outcome.color
    if color != outcome.color:
        raise ParameterError("audit color does not match the certificate")
    total = count_proper_cycles(g)
    if total != len(h):
        raise ParameterError("hypergraph does not enumerate all proper cycles of g")
    working = int((col.colors == color).sum())
    k, r = g.k, col.r
    rounds: list[RoundAudit] = []
    for rec in outcome.rounds:
        y = count_restricted_extensions(g, rec.path_snapshot, rec.trash)
        t_fam = count_family_extensions(g, rec.trash)
        bound = t_fam / (2 * k * r)
        rounds.append(
            RoundAudit(
                restricted_extensions=y,
                family_extensions=t_fam,
                bound=bound,
                margin=bound - y,
                ok=y < bound,
            )
        )
    meeting = count_cycles_meeting(g, outcome.intersecting_set)
    meeting_bound = total / (2 * r)
    sum_y = sum(a.restricted_extensions for a in rounds)
    sum_fam = sum(a.family_extensions for a in rounds)
    return CertificateAudit(
        k=k,
        r=r,
        color=color,
        total_cycles=total,
        working_color_edges=working,
        rounds=rounds,
        meeting_final_trash=meeting,
        meeting_bound=meeting_bound,
        accounting_ok=working <= sum_y + meeting,
        per_round_ok=all(a.ok for a in rounds),
        meeting_ok=meeting < meeting_bound,
        extension_budget_ok=sum_fam <= k * total,
        minority_ok=working < total / r,
        minority_margin=total / r - working,
    )


def run_outer(
    h: TightHypergraph,
    g: LayeredGraph,
    col: Coloring,
    n: int,
    color: int | None = None,
    policy=None,
    audit: bool = True,
    debug: bool = False,
) -> GreedyOutcome:
    """Greedy rounds with restarts until a path is found or edges run out.

    After each trash-full round, every working-color hyperedge extending a
    trashed path is deleted and the round restarts with a fresh trash set;
    vertices stay usable.  Terminates because each trashed path forces at
    least one fresh deletion (the window that carried it into the path).
    """
    if color is None:
        color = pick_majority_color(col)
    deleted = np.zeros(len(h), dtype=bool)
    rounds: list[RoundRecord] = []
    for _ in range(len(h) + 2):
        res = greedy_round(h, g, col, color, n, deleted, policy, debug)
        if res.kind is RoundOutcome.PATH_FOUND:
            return FoundPath(color=color, vertices=res.path)
        if res.kind is RoundOutcome.TRASH_FULL:
            rounds.append(RoundRecord(path_snapshot=res.path, trash=res.trash))
            for b in res.trash.paths:
                ids = h.extension_ids(b)
                if ids.size:
                    deleted[ids[col.colors[ids] == color]] = True
            continue
        cset = sorted(res.trash.vertex_set())
        cert = Certificate(
            color=color, rounds=rounds, final_trash=res.trash, intersecting_set=cset
        )
        if audit:
            cert.audit = audit_certificate(cert, h, g, col)
        return cert
    raise AssertionError("outer loop failed to terminate")  # pragma: no cover


def outcome_to_json(outcome: GreedyOutcome) -> dict:
    """JSON form of a greedy outcome for run reports."""
    if isinstance(outcome, FoundPath):
        return {
            "kind": "path",
            "color": outcome.color,
            "vertices": list(map(int, outcome.vertices)),
        }
    audit = outcome.audit
    return {
        "kind": "certificate",
        "color": outcome.color,
        "rounds": [
            {
                "path_snapshot": list(map(int, rec.path_snapshot)),
                "trash": [list(map(int, p.vertices)) for p in rec.trash.paths],
            }
            for rec in outcome.rounds
        ],
        "final_trash": [list(map(int, p.vertices)) for p in outcome.final_trash.paths],
        "intersecting_set": list(map(int, outcome.intersecting_set)),
        "audit": None
        if audit is None
        else {
            "k": audit.k,
            "r": audit.r,
            "color": audit.color,
            "total_cycles": audit.total_cycles,
            "working_color_edges": audit.working_color_edges,
            "rounds": [
                {
                    "restricted_extensions": a.restricted_extensions,
                    "family_extensions": a.family_extensions,
                    "bound": a.bound,
                    "margin": a.margin,
                    "ok": a.ok,
                }
                for a in audit.rounds
            ],
            "meeting_final_trash": audit.meeting_final_trash,
            "meeting_bound": audit.meeting_bound,
            "accounting_ok": audit.accounting_ok,
            "per_round_ok": audit.per_round_ok,
            "meeting_ok": audit.meeting_ok,
            "extension_budget_ok": audit.extension_budget_ok,
            "minority_ok": audit.minority_ok,
            "minority_margin": audit.minority_margin,
        },
    }
