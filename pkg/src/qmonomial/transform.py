"""Circuit reconstruction: C -> C* -> C' -> C''.

``duplicate`` splits shared add gates and terminals (C*), ``attach_z``
puts a fresh z-variable on every edge and one above the root (C'), and
``replace_xy`` turns each x occurrence into a z-weighted sum of q-1
y-variables (C'').  Fresh names are derived from edge and occurrence
numbers, so every stage is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .circuit import Circuit, CircuitBuilder, Gate
from .errors import ParameterError

STAR, PRIME, DOUBLE_PRIME = "C*", "C'", "C''"
RESERVED_PREFIXES = ("y:", "z:", "pad:")
ROOT_Z = "z:root"


def y_name(x: str, j: int) -> str:
    return f"y:{x}:{j}"


def is_z(name: str) -> bool:
    return name.startswith("z:")


def is_y(name: str) -> bool:
    return name.startswith("y:")


@dataclass(frozen=True)
class VarSpace:
    x_vars: tuple[str, ...]
    z_vars: tuple[str, ...]
    q: int | None = None
    # y_vars[(i, j)] -> name, 1-based i into x_vars
    y_vars: dict[tuple[int, int], str] = field(default_factory=dict)

    def gamma(self, i: int, j: int) -> int:
        """Bijection (i, j) -> 1..(q-1)n."""
        if self.q is None:
            raise ParameterError("no y-variables at this stage")
        return (i - 1) * (self.q - 1) + j

    def universe(self) -> int:
        return 0 if self.q is None else (self.q - 1) * len(self.x_vars)

    def y_by_gamma(self) -> list[str]:
        """y names ordered by gamma."""
        return [self.y_vars[ij] for ij in sorted(self.y_vars, key=lambda ij: self.gamma(*ij))]

    def to_dict(self) -> dict:
        return {
            "x_vars": list(self.x_vars),
            "q": self.q,
            "y_vars": [{"name": name, "i": i, "j": j, "gamma": self.gamma(i, j)}
                       for (i, j), name in sorted(self.y_vars.items())],
            "z_vars": list(self.z_vars),
        }


@dataclass(frozen=True)
class TransformOutput:
    circuit: Circuit
    vars: VarSpace
    stage: str


def renumber(c: Circuit) -> Circuit:
    """Dense ids in topological order."""
    new_id = {old: i for i, old in enumerate(c.order)}
    gates = [Gate(new_id[old], c.gate(old).op, c.gate(old).name,
                  tuple(new_id[i] for i in c.gate(old).inputs)) for old in c.order]
    return Circuit(gates, new_id[c.root])


def _check_names(c: Circuit) -> None:
    for name in c.variables():
        if name.startswith(RESERVED_PREFIXES):
            raise ParameterError(f"variable name {name!r} uses a reserved prefix")


def duplicate(c: Circuit) -> Circuit:
    """Split add gates and terminals so each feeds exactly one edge.

    One bottom-up pass over the add gates, then the terminals.  Copying a
    parent can raise the fan-out of an already-processed child again; that
    is left as is (no fixpoint iteration).
    """
    ops = {g.id: g.op for g in c.gates}
    names = {g.id: g.name for g in c.gates}
    inputs = {g.id: list(g.inputs) for g in c.gates}
    refs: dict[int, list[tuple[int, int]]] = {g.id: [] for g in c.gates}
    for g in c.gates:
        for slot, ch in enumerate(g.inputs):
            refs[ch].append((g.id, slot))
    next_id = max(ops) + 1

    def split(gid: int) -> None:
        nonlocal next_id
        first, *rest = refs[gid]
        for parent, slot in rest:
            nid = next_id
            next_id += 1
            ops[nid], names[nid], inputs[nid] = ops[gid], names[gid], list(inputs[gid])
            refs[nid] = [(parent, slot)]
            inputs[parent][slot] = nid
            for s, ch in enumerate(inputs[nid]):
                refs[ch].append((nid, s))
        refs[gid] = [first]

    for gid in c.order:
        if ops[gid] == "add" and len(refs[gid]) > 1:
            split(gid)
    for gid in [g.id for g in c.gates if g.op == "var"]:
        if len(refs[gid]) > 1:
            split(gid)
    gates = [Gate(gid, ops[gid], names[gid], tuple(inputs[gid])) for gid in ops]
    return renumber(Circuit(gates, c.root))


def attach_z(cstar: Circuit) -> TransformOutput:
    """Interpose Mul(z_e, child) on every edge e and Mul(z_root, root) on top."""
    _check_names(cstar)
    b = CircuitBuilder()
    new: dict[int, int] = {}
    z_vars: list[str] = []
    edge_ids = {(e.parent, e.slot): e.id for e in cstar.edges()}
    for gid in cstar.order:
        g = cstar.gate(gid)
        if g.op == "var":
            new[gid] = b.var(g.name, fresh=True)
            continue
        wrapped = []
        for slot, ch in enumerate(g.inputs):
            z = f"z:e{edge_ids[gid, slot]}"
            z_vars.append(z)
            wrapped.append(b.mul(b.var(z, fresh=True), new[ch]))
        new[gid] = b.mul(*wrapped) if g.op == "mul" else b.add(*wrapped)
    z_vars.append(ROOT_Z)
    top = b.mul(b.var(ROOT_Z, fresh=True), new[cstar.root])
    # sort z's by edge id so the VarSpace order does not depend on traversal order
    z_sorted = sorted(z_vars[:-1], key=lambda z: int(z[3:])) + [ROOT_Z]
    space = VarSpace(x_vars=tuple(cstar.variables()), z_vars=tuple(z_sorted))
    return TransformOutput(b.build(top), space, PRIME)


def replace_xy(cprime: TransformOutput, q: int) -> TransformOutput:
    """Replace every x occurrence by sum_j Mul(fresh z, y_{ij}), j = 1..q-1."""
    if not isinstance(q, int) or q < 2:
        raise ParameterError(f"q must be an integer >= 2, got {q!r}")
    c = cprime.circuit
    xs = cprime.vars.x_vars
    index = {x: i + 1 for i, x in enumerate(xs)}
    y_vars = {(index[x], j): y_name(x, j) for x in xs for j in range(1, q)}
    b = CircuitBuilder()
    new: dict[int, int] = {}
    z_new: list[str] = []
    occurrence = 0
    for gid in c.order:
        g = c.gate(gid)
        if g.op == "var":
            if g.name in index:
                branches = []
                for j in range(1, q):
                    z = f"z:o{occurrence}:{j}"
                    z_new.append(z)
                    branches.append(b.mul(b.var(z, fresh=True), b.var(y_name(g.name, j))))
                occurrence += 1
                new[gid] = branches[0] if q == 2 else b.add(*branches)
            else:
                new[gid] = b.var(g.name, fresh=True)
        elif g.op == "mul":
            new[gid] = b.mul(*(new[i] for i in g.inputs))
        else:
            new[gid] = b.add(*(new[i] for i in g.inputs))
    space = VarSpace(x_vars=xs, z_vars=cprime.vars.z_vars + tuple(z_new), q=q, y_vars=y_vars)
    return TransformOutput(renumber(b.build(new[c.root])), space, DOUBLE_PRIME)


def transform_full(c: Circuit, q: int) -> TransformOutput:
    if not isinstance(q, int) or q < 2:
        raise ParameterError(f"q must be an integer >= 2, got {q!r}")
    _check_names(c)
    return replace_xy(attach_z(duplicate(c)), q)


def pad_circuit(c: Circuit, count: int) -> Circuit:
    """Multiply the root by ``count`` fresh variables ``pad:1 .. pad:count``.

    Raises the degree of every monomial by ``count``; callers can use it to
    turn a degree-<=k question into an exact-degree one.
    """
    if count < 0:
        raise ParameterError("pad count must be non-negative")
    gates = list(c.gates)
    next_id = max(g.id for g in gates) + 1
    root = c.root
    for i in range(1, count + 1):
        gates.append(Gate(next_id, "var", f"pad:{i}"))
        gates.append(Gate(next_id + 1, "mul", None, (root, next_id)))
        root = next_id + 1
        next_id += 2
    return Circuit(gates, root)
