"""Ground-truth oracle: spanning trees, Kirchhoff polynomials, and
finite-field point counts of graph hypersurface complements.

The Kirchhoff polynomial of a connected multigraph is

    Psi(t) = sum over spanning trees T of prod_{e not in T} t_e,

homogeneous of degree |E| - |V| + 1.  The number of points of F_q^E
where Psi does not vanish is the value the Grothendieck class predicts
at S = q - 2, which makes exhaustive counting over small primes an
independent check on every class this package computes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .poly import ClassPoly
from .melonic import Multigraph


class DisconnectedGraph(ValueError):
    pass


class NonPrimeModulus(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class CountBudget:
    """Cap on the q^|E| point-space size enumerated by one count."""

    max_points: int = 10 ** 8

    def __post_init__(self) -> None:
        if self.max_points < 1:
            raise ValueError("budget must allow at least one point")


DEFAULT_BUDGET = CountBudget()


def from_edge_list(text: str) -> Multigraph:
    """Parse one edge per line, "u v" with 0-based vertices, "u u" a loop.

    Blank lines and lines starting with '#' are skipped.  The vertex set
    is 0..max index seen.
    """
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: vertices must be integers") from exc
        if u < 0 or v < 0:
            raise ValueError(f"line {lineno}: vertices must be >= 0")
        edges.append((u, v))
    if not edges:
        raise ValueError("edge list is empty")
    num_vertices = 1 + max(max(u, v) for u, v in edges)
    return Multigraph(num_vertices, tuple(edges))


def to_edge_list(g: Multigraph) -> str:
    return "\n".join(f"{u} {v}" for u, v in g.edges) + "\n"


class _UnionFind:
    def __init__(self, nodes) -> None:
        self.parent = {x: x for x in nodes}

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[ry] = rx
        return True


def _components(nodes, edges) -> int:
    uf = _UnionFind(nodes)
    count = len(uf.parent)
    for u, v in edges:
        if uf.union(u, v):
            count -= 1
    return count


def _is_connected(num_vertices: int,
                  edges: tuple[tuple[int, int], ...]) -> bool:
    return _components(range(num_vertices), edges) == 1


def _require_connected(g: Multigraph) -> None:
    if not _is_connected(g.num_vertices, g.edges):
        raise DisconnectedGraph(
            f"graph with {g.num_vertices} vertices and "
            f"{len(g.edges)} edges is not connected")


def spanning_trees(g: Multigraph) -> list[frozenset[int]]:
    """All spanning trees, each as a frozenset of edge indices.

    Recursive contraction-deletion on the first non-loop edge: a tree
    either uses the edge (contract it) or not (delete it, allowed only
    when the rest still connects, i.e. the edge is not a bridge).
    """
    _require_connected(g)

    trees: list[frozenset[int]] = []

    def rec(items: list[tuple[int, int, int]], merged: dict[int, int],
            chosen: tuple[int, ...]) -> None:
        # items: (edge index, u, v) with endpoints under the current merge
        def root(x: int) -> int:
            while merged.get(x, x) != x:
                x = merged.get(x, x)
            return x

        live = []
        vertices = set()
        for eid, u, v in items:
            ru, rv = root(u), root(v)
            if ru != rv:
                live.append((eid, ru, rv))
                vertices.add(ru)
                vertices.add(rv)
        if not vertices:
            trees.append(frozenset(chosen))
            return
        eid, u, v = live[0]
        # include: contract the edge
        rec(live[1:], {**merged, v: u}, chosen + (eid,))
        # exclude: legal only if the remaining edges still connect
        rest = live[1:]
        if _components(vertices, [(ru, rv) for _, ru, rv in rest]) == 1:
            rec(rest, merged, chosen)

    items = [(i, u, v) for i, (u, v) in enumerate(g.edges)]
    rec(items, {}, ())
    return trees


@dataclass(frozen=True)
class KirchhoffPoly:
    """Monomial-set form of Psi: one edge-index subset per spanning tree,
    the complement of the tree."""

    monomials: frozenset[frozenset[int]]
    num_edges: int

    def __post_init__(self) -> None:
        degrees = {len(m) for m in self.monomials}
        if len(degrees) > 1:
            raise ValueError("Kirchhoff polynomial must be homogeneous")

    @property
    def degree(self) -> int:
        for m in self.monomials:
            return len(m)
        return 0

    def eval_point(self, point: tuple[int, ...], q: int) -> int:
        total = 0
        for mono in self.monomials:
            term = 1
            for i in mono:
                term = term * point[i] % q
                if term == 0:
                    break
            total += term
        return total % q


def kirchhoff_polynomial(g: Multigraph) -> KirchhoffPoly:
    trees = spanning_trees(g)
    all_edges = frozenset(range(len(g.edges)))
    monomials = frozenset(all_edges - tree for tree in trees)
    return KirchhoffPoly(monomials, len(g.edges))


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    d = 2
    while d * d <= q:
        if q % d == 0:
            return False
        d += 1
    return True


def _dtype_for(q: int) -> type:
    # headroom for (q-1)*(q-1) + (q-1) before the reduction mod q
    if q <= 15:
        return np.uint8
    if q <= 255:
        return np.uint16
    return np.uint32


def _count_dp(edges: tuple[tuple[int, int], ...], q: int) -> int:
    """Value table of Psi mod q over all q^|E| points, by
    contraction-deletion on the last edge; returns the nonzero count.

    With index t_n q^{n-1} + ... + t_1 (last edge most significant):
      loop e:    Psi = t_e Psi(G-e)          -> blocks a * A
      bridge e:  Psi = Psi(G/e)              -> q copies of B
      else:      Psi = t_e Psi(G-e) + Psi(G/e) -> blocks a * A + B
    """
    dtype = _dtype_for(q)

    def rec(es: tuple[tuple[int, int], ...]) -> np.ndarray:
        if not es:
            return np.ones(1, dtype=dtype)
        (u, v), rest = es[-1], es[:-1]
        if u == v:
            deleted = rec(rest)
            return np.concatenate([a * deleted % q for a in range(q)])
        contracted_rest = tuple(
            (u if x == v else x, u if y == v else y) for x, y in rest)
        vertices = {w for e in es for w in e}
        if _components(vertices, rest) > 1:  # bridge: Psi has no t_e term
            return np.tile(rec(contracted_rest), q)
        deleted = rec(rest)
        contracted = rec(contracted_rest)
        return np.concatenate(
            [(a * deleted + contracted) % q for a in range(q)])

    values = rec(edges)
    return int(np.count_nonzero(values))


def _count_direct(g: Multigraph, q: int) -> int:
    """Reference method: evaluate the monomial set at every point of
    F_q^|E| in fixed disjoint index ranges."""
    kp = kirchhoff_polynomial(g)
    monos = [sorted(m) for m in sorted(kp.monomials, key=sorted)]
    n = len(g.edges)
    total = q ** n
    strides = [q ** i for i in range(n)]
    count = 0
    chunk = 1 << 16
    for lo in range(0, total, chunk):
        idx = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        acc = np.zeros(len(idx), dtype=np.int64)
        for mono in monos:
            term = np.ones(len(idx), dtype=np.int64)
            for i in mono:
                term = term * (idx // strides[i] % q) % q
            acc += term
        count += int(np.count_nonzero(acc % q))
    return count


def count_complement_points(g: Multigraph, q: int,
                            budget: CountBudget | None = None,
                            method: str = "auto") -> int:
    """Exact #{t in F_q^|E| : Psi(t) != 0}.

    method "dp" tabulates Psi by contraction-deletion (fast), "direct"
    evaluates the spanning-tree monomials point by point (simple); both
    are exact and are cross-checked in the test suite.
    """
    if not _is_prime(q):
        raise NonPrimeModulus(f"{q} is not prime")
    if budget is None:
        budget = DEFAULT_BUDGET
    size = q ** len(g.edges)
    if size > budget.max_points:
        raise BudgetExceeded(
            f"{q}^{len(g.edges)} = {size} points exceeds budget "
            f"{budget.max_points}")
    _require_connected(g)
    if method == "auto":
        method = "dp"
    if method == "dp":
        return _count_dp(g.edges, q)
    if method == "direct":
        return _count_direct(g, q)
    raise ValueError(f"unknown counting method {method!r}")


@dataclass(frozen=True)
class PrimeCheck:
    q: int
    counted: int
    expected: int

    @property
    def match(self) -> bool:
        return self.counted == self.expected


@dataclass(frozen=True)
class VerifyReport:
    checks: tuple[PrimeCheck, ...] = field(default_factory=tuple)

    @property
    def all_match(self) -> bool:
        return all(c.match for c in self.checks)


def verify_class(g: Multigraph, c: ClassPoly, primes: list[int],
                 budget: CountBudget | None = None,
                 method: str = "auto") -> VerifyReport:
    """Count complement points at each prime and compare with the class
    evaluated at S = q - 2."""
    checks = []
    for q in primes:
        counted = count_complement_points(g, q, budget=budget, method=method)
        expected = c.eval_at_field_size(q)
        checks.append(PrimeCheck(q=q, counted=counted, expected=expected))
    return VerifyReport(tuple(checks))
