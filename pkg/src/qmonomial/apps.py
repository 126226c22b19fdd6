"""Application front-ends: non-simple k-paths, generalized set packing, P2-packing.

Each problem is posed as "does this polynomial have a q-monomial of the
right degree", with an exhaustive combinatorial oracle alongside.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from pathlib import Path

from .circuit import Circuit, CircuitBuilder
from .errors import BudgetError, InputFormatError, ParameterError

DEFAULT_ORACLE_BUDGET = 10**7


class ZeroPolynomial(ValueError):
    """The application polynomial is identically zero, so no circuit exists for it."""


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.n < 0:
            raise ParameterError("vertex count must be non-negative")
        for u, v in self.edges:
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ParameterError(f"edge ({u},{v}) outside 1..{self.n}")
            if u == v:
                raise ParameterError(f"self-loop at {u}")
            if u > v:
                raise ParameterError(f"edge ({u},{v}) must be stored as (min, max)")

    @classmethod
    def from_pairs(cls, n: int, pairs) -> Graph:
        return cls(n, frozenset((min(u, v), max(u, v)) for u, v in pairs))

    @classmethod
    def complete(cls, n: int) -> Graph:
        return cls.from_pairs(n, [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)])

    @classmethod
    def path(cls, n: int) -> Graph:
        return cls.from_pairs(n, [(i, i + 1) for i in range(1, n)])

    def neighbors(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in range(1, self.n + 1)}
        for u, v in sorted(self.edges):
            adj[u].append(v)
            adj[v].append(u)
        return {v: sorted(ns) for v, ns in adj.items()}

    def dumps(self) -> str:
        lines = [f"{self.n} {len(self.edges)}"] + [f"{u} {v}" for u, v in sorted(self.edges)]
        return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise InputFormatError("empty graph file")
    try:
        n, m = (int(x) for x in rows[0])
        pairs = [tuple(int(x) for x in r) for r in rows[1:]]
    except ValueError:
        raise InputFormatError("graph file must contain integers: 'n m' then 'u v' lines") from None
    if any(len(p) != 2 for p in pairs):
        raise InputFormatError("each edge line needs exactly two vertices")
    if len(pairs) != m:
        raise InputFormatError(f"header promises {m} edges, found {len(pairs)}")
    try:
        return Graph.from_pairs(n, pairs)
    except ParameterError as exc:
        raise InputFormatError(str(exc)) from None


def load_graph(path) -> Graph:
    return parse_graph(Path(path).read_text())


@dataclass(frozen=True)
class SetSystem:
    members: tuple[tuple[str, ...], ...]
    m: int
    strict: bool = False
    # center vertices recorded by p2_to_sets, parallel to members
    centers: tuple[tuple[int, ...], ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.m < 1 or (self.strict and self.m < 3):
            raise ParameterError(f"member size m={self.m} not allowed (strict={self.strict})")
        for mem in self.members:
            if len(mem) != self.m or len(set(mem)) != self.m:
                raise ParameterError(f"member {mem} does not have {self.m} distinct items")

    @property
    def universe(self) -> list[str]:
        seen: dict[str, None] = {}
        for mem in self.members:
            for x in mem:
                seen.setdefault(x, None)
        return list(seen)


def parse_set_system(text: str, m: int, strict: bool = False) -> SetSystem:
    members = []
    for ln in text.splitlines():
        if not ln.strip() or ln.lstrip().startswith("#"):
            continue
        items = tuple(ln.split())
        if len(items) != m or len(set(items)) != m:
            raise InputFormatError(f"member {' '.join(items)!r} does not have {m} distinct items")
        members.append(items)
    try:
        return SetSystem(tuple(members), m, strict)
    except ParameterError as exc:
        raise InputFormatError(str(exc)) from None


def load_set_system(path, m: int, strict: bool = False) -> SetSystem:
    return parse_set_system(Path(path).read_text(), m, strict)


# -- k-path -----------------------------------------------------------------


def vertex_var(i: int) -> str:
    return f"x{i}"


def build_kpath_circuit(G: Graph, k: int) -> Circuit:
    """F(G,k) = sum_i F_{k,i} with F_{1,i} = x_i, F_{l+1,i} = x_i * sum_{j~i} F_{l,j}.

    Level-l gates are shared by all neighbours, so the circuit is a DAG.
    Only (level, vertex) pairs that start a walk reaching level k get gates.
    """
    if k < 1:
        raise ParameterError("k must be >= 1")
    adj = G.neighbors()
    alive = [set(range(1, G.n + 1))]
    for _ in range(k - 1):
        alive.append({i for i in alive[-1] if any(j in alive[-1] for j in adj[i])})
    if not alive[-1]:
        raise ZeroPolynomial(f"graph has no {k}-vertex walk")
    need = [set() for _ in range(k)]
    need[-1] = alive[-1]
    for lvl in range(k - 2, -1, -1):
        need[lvl] = {j for i in need[lvl + 1] for j in adj[i] if j in alive[lvl]}
    b = CircuitBuilder()
    level = {i: b.var(vertex_var(i)) for i in sorted(need[0])}
    for lvl in range(1, k):
        level = {i: b.mul(b.var(vertex_var(i)), b.add(*(level[j] for j in adj[i] if j in level)))
                 for i in sorted(need[lvl])}
    return b.build(b.add(*level.values()))


def kpath_oracle(G: Graph, k: int, q: int, budget: int = DEFAULT_ORACLE_BUDGET) -> bool:
    """Is there a walk on k vertices visiting every vertex at most q-1 times?"""
    if k < 1 or q < 2:
        raise ParameterError("need k >= 1 and q >= 2")
    adj = G.neighbors()
    count = Counter()
    steps = 0

    def extend(v: int, length: int) -> bool:
        nonlocal steps
        steps += 1
        if steps > budget:
            raise BudgetError(f"walk enumeration exceeds budget {budget}")
        if length == k:
            return True
        for w in adj[v]:
            if count[w] < q - 1:
                count[w] += 1
                found = extend(w, length + 1)
                count[w] -= 1
                if found:
                    return True
        return False

    for v in range(1, G.n + 1):
        count[v] += 1
        found = extend(v, 1)
        count[v] -= 1
        if found:
            return True
    return False


# -- set packing ------------------------------------------------------------


def build_setpack_circuit(S: SetSystem, k: int) -> Circuit:
    """(sum_A prod_{x in A} x)^k as a tree-like circuit.

    Each of the k factors is a separate copy of the sum, and the copies
    are multiplied by a left-deep chain.  Terminals are shared.
    """
    if k < 1:
        raise ParameterError("k must be >= 1")
    if not S.members:
        raise ZeroPolynomial("empty set system")
    b = CircuitBuilder()

    def member_product(mem) -> int:
        acc = b.var(mem[0])
        for x in mem[1:]:
            acc = b.mul(acc, b.var(x))
        return acc

    def copy() -> int:
        return b.add(*(member_product(mem) for mem in S.members))

    root = copy()
    for _ in range(k - 1):
        root = b.mul(root, copy())
    return b.build(root)


def setpack_oracle(S: SetSystem, k: int, q: int, budget: int = DEFAULT_ORACLE_BUDGET) -> bool:
    """Is there a multiset of k members covering every item at most q-1 times?"""
    if k < 1 or q < 2:
        raise ParameterError("need k >= 1 and q >= 2")
    if len(S.members) ** k > budget:
        raise BudgetError(f"|S|^k = {len(S.members) ** k} exceeds budget {budget}")
    for pick in combinations_with_replacement(range(len(S.members)), k):
        cover = Counter(x for i in pick for x in S.members[i])
        if max(cover.values()) <= q - 1:
            return True
    return False


# -- P2 packing -------------------------------------------------------------


def p2_paths(G: Graph) -> list[tuple[int, int, int]]:
    """Simple length-2 paths (a, center, c) with a < c."""
    adj = G.neighbors()
    out = []
    for b in range(1, G.n + 1):
        ns = adj[b]
        for i, a in enumerate(ns):
            for c in ns[i + 1:]:
                out.append((a, b, c))
    return out


def p2_to_sets(G: Graph) -> SetSystem:
    """One 3-item member per vertex set of a P2; centers recorded per member."""
    centers: dict[tuple[int, ...], list[int]] = {}
    for a, b, c in p2_paths(G):
        centers.setdefault(tuple(sorted((a, b, c))), []).append(b)
    keys = sorted(centers)
    members = tuple(tuple(str(v) for v in key) for key in keys)
    return SetSystem(members, 3, centers=tuple(tuple(centers[key]) for key in keys))


def p2pack_oracle(G: Graph, k: int, q: int, budget: int = DEFAULT_ORACLE_BUDGET) -> bool:
    """k P2's (repeats allowed) with every vertex used at most q-1 times, on raw paths."""
    paths = p2_paths(G)
    if not paths:
        return False
    if len(paths) ** k > budget:
        raise BudgetError(f"|P2|^k exceeds budget {budget}")
    for pick in combinations_with_replacement(range(len(paths)), k):
        cover = Counter(v for i in pick for v in paths[i])
        if max(cover.values()) <= q - 1:
            return True
    return False
