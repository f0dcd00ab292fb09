"""Melonic constructions, their multigraphs, and the recursive class algorithm.

A melonic construction is an ordered list of stages (b_s, p_s, k_s): replace
one edge of the k_s-th banana created in stage p_s with a string of bananas
whose sizes are the tuple b_s.  Stage 0 is the initial single edge.  Indices
are 1-based to match that reading: parent_stage 0 means the root edge, and
parent_banana counts entries of the parent tuple from 1.

A construction is reduced when no stage replaces an edge of a size-1 banana
created in stage 1 or later.  The class algorithm requires reduced input and
this module normalizes by splicing: a stage that targets a size-1 entry is
folded into its parent in place.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from typing import Any, Iterator

from . import families as fam
from .poly import Basis, ClassPoly, IntPoly, ONE, mul


@dataclass(frozen=True)
class Stage:
    bananas: tuple[int, ...]
    parent_stage: int
    parent_banana: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "bananas", tuple(self.bananas))


@dataclass(frozen=True)
class MelonicConstruction:
    stages: tuple[Stage, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "stages", tuple(self.stages))

    def num_edges(self) -> int:
        """Edges of the resulting graph: each stage past the first trades
        one existing edge for its banana string."""
        total = 0
        for i, st in enumerate(self.stages):
            total += sum(st.bananas) - (0 if i == 0 else 1)
        return total


@dataclass(frozen=True)
class Multigraph:
    """Vertices 0..num_vertices-1 and an ordered multiset of undirected
    edges; loops and parallel edges allowed.  Edge order fixes the
    variable order of the Kirchhoff polynomial."""

    num_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.num_vertices < 1:
            raise ValueError("graph needs at least one vertex")
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        for u, v in edges:
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise ValueError(f"edge ({u}, {v}) out of vertex range")
        object.__setattr__(self, "edges", edges)

    def sorted_edge_key(self) -> tuple[int, tuple[tuple[int, int], ...]]:
        """Order-insensitive identity of the labeled graph."""
        return (self.num_vertices,
                tuple(sorted((min(u, v), max(u, v)) for u, v in self.edges)))


StageKey = tuple[tuple[int, ...], int, int]
ConstructionKey = tuple[StageKey, ...]


def _encode(c: MelonicConstruction) -> ConstructionKey:
    return tuple((st.bananas, st.parent_stage, st.parent_banana)
                 for st in c.stages)


def _decode(key: ConstructionKey) -> MelonicConstruction:
    return MelonicConstruction(tuple(Stage(*s) for s in key))


def validate(c: MelonicConstruction) -> list[str]:
    """Check the four defining conditions; returns one message per violation."""
    violations: list[str] = []
    stages = c.stages
    if not stages:
        return ["construction has no stages"]
    for idx, st in enumerate(stages, start=1):
        if not st.bananas:
            violations.append(f"stage {idx}: banana tuple is empty")
        elif any(a < 1 for a in st.bananas):
            violations.append(f"stage {idx}: banana sizes must be positive")
        if idx == 1:
            if st.parent_stage != 0:
                violations.append(
                    "stage 1: must replace the root edge (parent_stage 0)")
            if st.parent_banana != 1:
                violations.append("stage 1: parent_banana must be 1")
        else:
            if not 0 < st.parent_stage < idx:
                violations.append(
                    f"stage {idx}: parent_stage {st.parent_stage} "
                    f"not in 1..{idx - 1}")
    targets: dict[tuple[int, int], int] = {}
    for idx, st in enumerate(stages, start=1):
        if idx == 1 or not 0 < st.parent_stage < idx:
            continue
        parent = stages[st.parent_stage - 1]
        if not 1 <= st.parent_banana <= len(parent.bananas):
            violations.append(
                f"stage {idx}: parent_banana {st.parent_banana} out of "
                f"range for stage {st.parent_stage}")
            continue
        slot = (st.parent_stage, st.parent_banana)
        targets[slot] = targets.get(slot, 0) + 1
    for (i, j), count in sorted(targets.items()):
        size = stages[i - 1].bananas[j - 1]
        if count > size:
            violations.append(
                f"banana {j} of stage {i} has {size} edges but is "
                f"replaced by {count} later stages")
    return violations


def _require_valid(c: MelonicConstruction) -> None:
    violations = validate(c)
    if violations:
        raise ValueError("invalid melonic construction: "
                         + "; ".join(violations))


def is_reduced(c: MelonicConstruction) -> bool:
    """True when no stage targets a size-1 banana made after stage 0."""
    for st in c.stages[1:]:
        if st.parent_stage >= 1:
            parent = c.stages[st.parent_stage - 1]
            if parent.bananas[st.parent_banana - 1] == 1:
                return False
    return True


def _splice_once(stages: list[StageKey]) -> bool:
    """Fold the first stage that targets a size-1 entry into its parent.

    Replacing an edge that is itself a replaced single edge is the same
    as splicing the string directly into the parent tuple, so the graph
    is unchanged.  Returns False when already reduced.
    """
    victim = None
    for idx in range(1, len(stages)):
        tup, p, k = stages[idx]
        if p >= 1 and stages[p - 1][0][k - 1] == 1:
            victim = idx
            break
    if victim is None:
        return False
    tup, p, k = stages[victim]
    r = len(tup)
    ptup, pp, pk = stages[p - 1]
    stages[p - 1] = (ptup[:k - 1] + tup + ptup[k:], pp, pk)
    del stages[victim]
    s_idx = victim + 1  # 1-based index the removed stage had
    for i in range(len(stages)):
        ttup, tp, tk = stages[i]
        if tp == s_idx:
            stages[i] = (ttup, p, k + tk - 1)
        elif tp == p and tk > k:
            stages[i] = (ttup, tp, tk + r - 1)
        elif tp > s_idx:
            stages[i] = (ttup, tp - 1, tk)
    return True


def _normalize_key(key: ConstructionKey) -> ConstructionKey:
    stages = list(key)
    while _splice_once(stages):
        pass
    return tuple(stages)


def normalize(c: MelonicConstruction) -> MelonicConstruction:
    """Return an equivalent reduced construction (idempotent)."""
    _require_valid(c)
    return _decode(_normalize_key(_encode(c)))


def to_graph(c: MelonicConstruction) -> Multigraph:
    """Build the melonic multigraph stage by stage."""
    _require_valid(c)
    edges: list[tuple[int, int] | None] = [(0, 1)]
    pools: dict[tuple[int, int], list[int]] = {(0, 1): [0]}
    num_vertices = 2
    for s_idx, st in enumerate(c.stages, start=1):
        pool = pools[(st.parent_stage, st.parent_banana)]
        eid = pool.pop()
        removed = edges[eid]
        assert removed is not None
        u, v = removed
        edges[eid] = None
        r = len(st.bananas)
        chain = [u] + list(range(num_vertices, num_vertices + r - 1)) + [v]
        num_vertices += r - 1
        for j, size in enumerate(st.bananas, start=1):
            ids = []
            for _ in range(size):
                edges.append((chain[j - 1], chain[j]))
                ids.append(len(edges) - 1)
            pools[(s_idx, j)] = ids
    kept = tuple(e for e in edges if e is not None)
    return Multigraph(num_vertices, kept)


_class_memo: dict[ConstructionKey, IntPoly] = {}
_class_lock = threading.Lock()


def _class_rec(key: ConstructionKey) -> IntPoly:
    with _class_lock:
        hit = _class_memo.get(key)
    if hit is not None:
        return hit

    stages = key
    n = len(stages)
    if n == 1:
        result = ONE
        for a in stages[0][0]:
            result = mul(result, fam._b(a))
    else:
        tup, p, k = stages[-1]
        if len(tup) == 1:
            # a single banana in the last stage only widens the parent slot
            a = tup[0]
            ptup, pp, pk = stages[p - 1]
            merged = (ptup[:k - 1] + (ptup[k - 1] + a - 1,) + ptup[k:], pp, pk)
            result = _class_rec(stages[:p - 1] + (merged,) + stages[p:n - 1])
        elif all(a == 1 for a in tup):
            # a string of r 1-bananas subdivides an edge r-1 times
            result = mul(fam._s2_pow(len(tup) - 1), _class_rec(stages[:-1]))
        else:
            m = max(range(len(tup)), key=lambda i: (tup[i], -i))
            a = tup[m]
            t_one = stages[:-1] + ((tup[:m] + (1,) + tup[m + 1:], p, k),)
            t_del = stages[:-1] + ((tup[:m] + tup[m + 1:], p, k),)
            ptup, pp, pk = stages[p - 1]
            shrunk = (ptup[:k - 1] + (ptup[k - 1] - 1,) + ptup[k:], pp, pk)
            t_cut = _normalize_key(stages[:p - 1] + (shrunk,) + stages[p:n - 1])
            side = ONE
            for i, ai in enumerate(tup):
                if i != m:
                    side = mul(side, fam._b(ai))
            result = (mul(fam._f(a), _class_rec(t_one))
                      + mul(fam.g_poly(a).poly, _class_rec(t_del))
                      + mul(mul(side, fam.h_poly(a).poly), _class_rec(t_cut)))

    with _class_lock:
        _class_memo[key] = result
    return result


def class_of(c: MelonicConstruction) -> ClassPoly:
    """Grothendieck class of the construction's graph, in the S basis.

    Dispatches on the last stage: a lone stage is a product of banana
    classes; a single-banana stage merges into its parent; an all-ones
    stage is a repeated edge subdivision; otherwise contraction-deletion
    on the largest banana of the last stage (lowest index on ties).
    """
    _require_valid(c)
    return ClassPoly(_class_rec(_normalize_key(_encode(c))), Basis.S)


def serialize(c: MelonicConstruction) -> str:
    """Deterministic compact string form of the exact stage list."""
    payload = [[list(st.bananas), st.parent_stage, st.parent_banana]
               for st in c.stages]
    return json.dumps(payload, separators=(",", ":"))


def deserialize(text: str) -> MelonicConstruction:
    payload = json.loads(text)
    return MelonicConstruction(tuple(Stage(tuple(b), p, k)
                                     for b, p, k in payload))


Node = tuple[tuple[int, ...], tuple[tuple["Node", ...], ...]]


def _to_tree(c: MelonicConstruction) -> Node:
    children: dict[tuple[int, int], list[int]] = {}
    for idx, st in enumerate(c.stages[1:], start=2):
        children.setdefault((st.parent_stage, st.parent_banana),
                            []).append(idx)

    def build(stage_idx: int) -> Node:
        tup = c.stages[stage_idx - 1].bananas
        forest = tuple(
            tuple(sorted(build(ch)
                         for ch in children.get((stage_idx, j), [])))
            for j in range(1, len(tup) + 1))
        return (tup, forest)

    return build(1)


def _linearize(root: Node) -> MelonicConstruction:
    stages: list[Stage] = [Stage(root[0], 0, 1)]

    def emit(parent_idx: int, forest: tuple[tuple[Node, ...], ...]) -> None:
        for j, siblings in enumerate(forest, start=1):
            for tup, sub in siblings:
                stages.append(Stage(tup, parent_idx, j))
                emit(len(stages), sub)

    emit(1, root[1])
    return MelonicConstruction(tuple(stages))


def canonical_construction(c: MelonicConstruction) -> MelonicConstruction:
    """Relinearize with sibling subtrees sorted, so that constructions
    differing only in stage bookkeeping order collapse to one form."""
    _require_valid(c)
    return _linearize(_to_tree(c))


def canonical_key(c: MelonicConstruction) -> str:
    return serialize(canonical_construction(c))


def enumerate_constructions(max_edges: int) -> Iterator[MelonicConstruction]:
    """Every reduced valid construction with at most max_edges edges.

    Each construction is emitted exactly once, already in canonical form:
    sibling subtrees attached to the same banana appear sorted, and stages
    are numbered in depth-first order.  Stages after the first always add
    at least two bananas; a later single-banana stage only widens its
    parent slot, so those spellings are redundant with a shorter one.
    """
    if max_edges < 1:
        raise ValueError("max_edges must be at least 1")

    catalog_cache: dict[int, list[tuple[Node, int]]] = {}

    def catalog(budget: int) -> list[tuple[Node, int]]:
        """All subtrees costing 1..budget edges, sorted by encoding."""
        if budget < 1:
            return []
        cached = catalog_cache.get(budget)
        if cached is not None:
            return cached
        items: list[tuple[Node, int]] = []
        for w in range(2, budget + 2):
            own = w - 1
            for tup in _compositions(w):
                if len(tup) < 2:
                    continue
                for forest, fcost in _forests(tup, budget - own):
                    items.append(((tup, forest), own + fcost))
        items.sort(key=lambda item: item[0])
        catalog_cache[budget] = items
        return items

    def _slot_sets(cap: int, budget: int) -> Iterator[tuple[tuple[Node, ...], int]]:
        """Non-decreasing tuples of child subtrees for one banana slot."""
        cands = catalog(budget)

        def rec(start: int, remaining: int,
                room: int) -> Iterator[tuple[tuple[Node, ...], int]]:
            yield (), 0
            if room == 0:
                return
            for i in range(start, len(cands)):
                node, cost = cands[i]
                if cost > remaining:
                    continue
                for rest, rcost in rec(i, remaining - cost, room - 1):
                    yield (node,) + rest, cost + rcost

        yield from rec(0, budget, cap)

    def _forests(tup: tuple[int, ...],
                 budget: int) -> Iterator[tuple[tuple[tuple[Node, ...], ...], int]]:
        def rec(j: int, remaining: int) -> Iterator[tuple[tuple[tuple[Node, ...], ...], int]]:
            if j == len(tup):
                yield (), 0
                return
            cap = tup[j] if tup[j] >= 2 else 0
            for children, ccost in _slot_sets(cap, remaining):
                for rest, rcost in rec(j + 1, remaining - ccost):
                    yield (children,) + rest, ccost + rcost

        yield from rec(0, budget)

    for w1 in range(1, max_edges + 1):
        for tup in _compositions(w1):
            for forest, _ in _forests(tup, max_edges - w1):
                yield _linearize((tup, forest))


def _compositions(total: int) -> Iterator[tuple[int, ...]]:
    """Ordered tuples of positive integers with the given sum."""
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in _compositions(total - first):
            yield (first,) + rest


def to_json_dict(c: MelonicConstruction) -> dict[str, Any]:
    return {"stages": [{"bananas": list(st.bananas),
                        "parent_stage": st.parent_stage,
                        "parent_banana": st.parent_banana}
                       for st in c.stages]}


def from_json_dict(data: Any) -> MelonicConstruction:
    """Parse the construction JSON shape; raises ValueError on bad shape."""
    if not isinstance(data, dict) or "stages" not in data:
        raise ValueError('construction JSON must be {"stages": [...]}')
    raw = data["stages"]
    if not isinstance(raw, list):
        raise ValueError('"stages" must be a list')
    stages = []
    for i, entry in enumerate(raw, start=1):
        if not isinstance(entry, dict):
            raise ValueError(f"stage {i}: must be an object")
        try:
            bananas = tuple(int(a) for a in entry["bananas"])
            parent_stage = int(entry["parent_stage"])
            parent_banana = int(entry["parent_banana"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"stage {i}: needs bananas, parent_stage, "
                             f"parent_banana") from exc
        stages.append(Stage(bananas, parent_stage, parent_banana))
    return MelonicConstruction(tuple(stages))
