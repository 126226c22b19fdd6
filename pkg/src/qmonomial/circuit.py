"""Arithmetic circuits: the gate model, its JSON format, evaluation and symbolic expansion.

A circuit is a DAG of ``var`` terminals, unbounded fan-in ``add`` gates and
binary ``mul`` gates.  There are no constant gates; integer coefficients
come from path multiplicity.  Every (parent, input slot) pair is an edge,
and edges are numbered by parent id, then slot.

File format (JSON)::

    {"gates": [{"id": 0, "op": "var", "name": "x1"},
               {"id": 1, "op": "mul", "in": [0, 0]}],
     "root": 1}
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping

from .errors import CircuitFormatError, ExpansionTooLarge, ParameterError

OPS = ("var", "add", "mul")
DEFAULT_EXPANSION_CAP = 10**6

Monomial = tuple[tuple[str, int], ...]
MonomialMap = dict[Monomial, Any]


@dataclass(frozen=True)
class Gate:
    id: int
    op: str
    name: str | None = None
    inputs: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"id": self.id, "op": self.op}
        if self.op == "var":
            d["name"] = self.name
        else:
            d["in"] = list(self.inputs)
        return d


@dataclass(frozen=True)
class Edge:
    id: int
    parent: int
    slot: int
    child: int


@dataclass(frozen=True)
class CircuitStats:
    s: int
    t: int
    n: int
    tree_like: bool


class Circuit:
    """Validated, immutable arithmetic circuit."""

    def __init__(self, gates: Iterable[Gate], root: int):
        gates = sorted(gates, key=lambda g: g.id)
        by_id: dict[int, Gate] = {}
        for g in gates:
            _check_gate(g)
            if g.id in by_id:
                raise CircuitFormatError("duplicate gate id", g.id)
            by_id[g.id] = g
        if root not in by_id:
            raise CircuitFormatError(f"root {root} is not a gate")
        for g in gates:
            for c in g.inputs:
                if c not in by_id:
                    raise CircuitFormatError(f"input {c} does not exist", g.id)
        self.gates: tuple[Gate, ...] = tuple(gates)
        self.root = root
        self._by_id = by_id
        self.order: tuple[int, ...] = _topological_order(by_id, root)
        if len(self.order) != len(gates):
            unreachable = sorted(set(by_id) - set(self.order))
            raise CircuitFormatError("gate is unreachable from the root", unreachable[0])

    def gate(self, gid: int) -> Gate:
        return self._by_id[gid]

    def __len__(self) -> int:
        return len(self.gates)

    def __eq__(self, other) -> bool:
        return isinstance(other, Circuit) and self.gates == other.gates and self.root == other.root

    def __hash__(self):
        return hash((self.gates, self.root))

    def __repr__(self) -> str:
        return f"Circuit({len(self.gates)} gates, root={self.root})"

    def edges(self) -> list[Edge]:
        out = []
        for g in self.gates:
            for slot, c in enumerate(g.inputs):
                out.append(Edge(len(out), g.id, slot, c))
        return out

    def fanout(self) -> dict[int, int]:
        counts = {g.id: 0 for g in self.gates}
        for g in self.gates:
            for c in g.inputs:
                counts[c] += 1
        return counts

    def variables(self) -> list[str]:
        """Distinct variable names, in order of first appearance by gate id."""
        seen: dict[str, None] = {}
        for g in self.gates:
            if g.op == "var":
                seen.setdefault(g.name, None)
        return list(seen)

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {"gates": [g.to_dict() for g in self.gates], "root": self.root}

    def dumps(self) -> str:
        lines = ",\n".join("    " + json.dumps(g.to_dict()) for g in self.gates)
        return '{\n  "gates": [\n' + lines + "\n  ],\n  \"root\": " + str(self.root) + "\n}\n"

    def save(self, path) -> None:
        Path(path).write_text(self.dumps())


class CircuitBuilder:
    """Incremental construction with dense ids; ``var`` reuses terminals by name."""

    def __init__(self):
        self._gates: list[Gate] = []
        self._vars: dict[str, int] = {}

    def _push(self, op: str, name: str | None = None, inputs: tuple[int, ...] = ()) -> int:
        gid = len(self._gates)
        self._gates.append(Gate(gid, op, name, inputs))
        return gid

    def var(self, name: str, fresh: bool = False) -> int:
        if not fresh and name in self._vars:
            return self._vars[name]
        gid = self._push("var", name)
        self._vars.setdefault(name, gid)
        return gid

    def add(self, *inputs: int) -> int:
        return self._push("add", inputs=tuple(inputs))

    def mul(self, a: int, b: int) -> int:
        return self._push("mul", inputs=(a, b))

    def build(self, root: int) -> Circuit:
        return Circuit(self._gates, root)


def _check_gate(g: Gate) -> None:
    if not isinstance(g.id, int) or isinstance(g.id, bool) or g.id < 0:
        raise CircuitFormatError(f"gate id must be a non-negative integer, got {g.id!r}")
    if g.op not in OPS:
        raise CircuitFormatError(f"unknown op {g.op!r}", g.id)
    if g.op == "var":
        if not isinstance(g.name, str) or not g.name:
            raise CircuitFormatError("var gate needs a non-empty name", g.id)
        if g.inputs:
            raise CircuitFormatError("var gate cannot have inputs", g.id)
    elif g.op == "add" and len(g.inputs) < 1:
        raise CircuitFormatError("add gate needs at least one input", g.id)
    elif g.op == "mul" and len(g.inputs) != 2:
        raise CircuitFormatError(f"mul gate needs exactly 2 inputs, got {len(g.inputs)}", g.id)


def _topological_order(by_id: Mapping[int, Gate], root: int) -> tuple[int, ...]:
    # iterative DFS post-order; children before parents
    state: dict[int, int] = {}  # 1 = on stack, 2 = done
    order: list[int] = []
    stack: list[tuple[int, int]] = [(root, 0)]
    state[root] = 1
    while stack:
        gid, i = stack[-1]
        inputs = by_id[gid].inputs
        if i < len(inputs):
            stack[-1] = (gid, i + 1)
            c = inputs[i]
            s = state.get(c)
            if s == 1:
                raise CircuitFormatError(f"cycle detected through input {c}", gid)
            if s is None:
                state[c] = 1
                stack.append((c, 0))
        else:
            stack.pop()
            state[gid] = 2
            order.append(gid)
    return tuple(order)


def circuit_from_dict(doc: Any) -> Circuit:
    if not isinstance(doc, dict) or "gates" not in doc or "root" not in doc:
        raise CircuitFormatError("document must be an object with 'gates' and 'root'")
    if not isinstance(doc["gates"], list):
        raise CircuitFormatError("'gates' must be an array")
    gates = []
    for raw in doc["gates"]:
        if not isinstance(raw, dict) or "id" not in raw or "op" not in raw:
            raise CircuitFormatError(f"malformed gate entry {raw!r}")
        gid = raw["id"]
        ins = raw.get("in", [])
        if not isinstance(ins, list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in ins):
            raise CircuitFormatError("'in' must be a list of gate ids", gid if isinstance(gid, int) else None)
        gates.append(Gate(gid, raw["op"], raw.get("name"), tuple(ins)))
    root = doc["root"]
    if not isinstance(root, int) or isinstance(root, bool):
        raise CircuitFormatError(f"root must be a gate id, got {root!r}")
    return Circuit(gates, root)


def parse_circuit(text: str) -> Circuit:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CircuitFormatError(f"syntax error: {exc}") from None
    return circuit_from_dict(doc)


def load_circuit(path) -> Circuit:
    return parse_circuit(Path(path).read_text())


def circuit_stats(c: Circuit) -> CircuitStats:
    depth: dict[int, int] = {}
    for gid in c.order:
        ins = c.gate(gid).inputs
        depth[gid] = 1 + max(depth[i] for i in ins) if ins else 0
    fan = c.fanout()
    tree_like = all(fan[g.id] <= 1 for g in c.gates if g.op != "var")
    return CircuitStats(s=len(c), t=depth[c.root], n=len(c.variables()), tree_like=tree_like)


# -- evaluation -------------------------------------------------------------


@dataclass(frozen=True)
class IntRing:
    zero: int = 0
    one: int = 1

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def is_zero(self, a) -> bool:
        return a == 0


@dataclass(frozen=True)
class IntModRing:
    p: int
    zero: int = 0
    one: int = 1

    def add(self, a, b):
        return (a + b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def is_zero(self, a) -> bool:
        return a % self.p == 0


def evaluate(c: Circuit, assignment: Mapping[str, Any] | Callable[[str], Any], ring) -> Any:
    """Evaluate once per gate in topological order over a caller-supplied ring.

    ``ring`` needs ``add`` and ``mul``; ``assignment`` maps every variable
    name to a ring value (a callable is accepted too).
    """
    lookup = assignment if callable(assignment) else None
    values: dict[int, Any] = {}
    for gid in c.order:
        g = c.gate(gid)
        if g.op == "var":
            if lookup is not None:
                values[gid] = lookup(g.name)
            else:
                try:
                    values[gid] = assignment[g.name]
                except KeyError:
                    raise ParameterError(f"no value bound to variable {g.name!r}") from None
        elif g.op == "mul":
            a, b = g.inputs
            values[gid] = ring.mul(values[a], values[b])
        else:
            acc = values[g.inputs[0]]
            for i in g.inputs[1:]:
                acc = ring.add(acc, values[i])
            values[gid] = acc
    return values[c.root]


# -- symbolic expansion -----------------------------------------------------


def _merge(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    exps = dict(m1)
    for v, e in m2:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def expand_general(c: Circuit, ring, constants: Mapping[str, Any] | None = None,
                   cap: int = DEFAULT_EXPANSION_CAP) -> MonomialMap:
    """Sum-product expansion with coefficients in ``ring``.

    Variables listed in ``constants`` are replaced by ring values; all
    others stay symbolic.  Raises ExpansionTooLarge once any gate holds
    more than ``cap`` distinct monomials.
    """
    if cap <= 0:
        raise ParameterError("expansion cap must be positive")
    constants = constants or {}
    polys: dict[int, MonomialMap] = {}
    for gid in c.order:
        g = c.gate(gid)
        if g.op == "var":
            if g.name in constants:
                val = constants[g.name]
                p = {} if ring.is_zero(val) else {(): val}
            else:
                p = {((g.name, 1),): ring.one}
        elif g.op == "add":
            p = {}
            for i in g.inputs:
                for m, coef in polys[i].items():
                    p[m] = ring.add(p[m], coef) if m in p else coef
                    if len(p) > cap:
                        raise ExpansionTooLarge(f"expansion exceeds {cap} monomials at gate {gid}")
        else:
            a, b = (polys[i] for i in g.inputs)
            p = {}
            for m1, c1 in a.items():
                for m2, c2 in b.items():
                    m = _merge(m1, m2)
                    prod = ring.mul(c1, c2)
                    p[m] = ring.add(p[m], prod) if m in p else prod
                    if len(p) > cap:
                        raise ExpansionTooLarge(f"expansion exceeds {cap} monomials at gate {gid}")
        polys[gid] = {m: v for m, v in p.items() if not ring.is_zero(v)}
    return polys[c.root]


def expand(c: Circuit, cap: int = DEFAULT_EXPANSION_CAP) -> MonomialMap:
    """Exact integer sum-product expansion (oracle use only)."""
    return expand_general(c, IntRing(), cap=cap)


def degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def monomial(**exps: int) -> Monomial:
    """Build a monomial key, e.g. ``monomial(x1=2, x2=1)``."""
    return tuple(sorted((v, e) for v, e in exps.items() if e))


def format_monomial(m: Monomial) -> str:
    if not m:
        return "1"
    return "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)


def is_q_monomial(m: Monomial, q: int) -> bool:
    return all(1 <= e <= q - 1 for _, e in m)


def q_monomial_oracle(poly: MonomialMap, q: int, k: int) -> bool:
    """Does some nonzero monomial have all exponents in [1, q-1] and degree <= k?"""
    if q < 2 or k < 1:
        raise ParameterError("need q >= 2 and k >= 1")
    return any(coef != 0 and degree(m) <= k and is_q_monomial(m, q)
               for m, coef in poly.items())


def evaluate_monomials(poly: MonomialMap, point: Mapping[str, int], p: int) -> int:
    total = 0
    for m, coef in poly.items():
        term = coef
        for v, e in m:
            term = term * pow(point[v], e, p) % p
        total = (total + term) % p
    return total
