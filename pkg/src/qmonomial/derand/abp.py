"""Layered algebraic branching programs and a deterministic zero test.

The circuits handled here are tree-like, with some variables bound to
group-algebra constants and the rest (the z's) symbolic, each symbolic
variable used exactly once.  ``circuit_to_abp`` reads such a circuit as a
layered source-sink graph.  Products compose in series in input order and
sums compose in parallel; identity edges pad every path to a common length.

``rs_pit`` is a noncommutative identity test.  It sweeps the layers and
keeps a row basis of the coefficient profiles of all partial monomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping

import numpy as np

from ..algebra import AlgElem, FieldCtx, GroupAlgebraRing
from ..circuit import DEFAULT_EXPANSION_CAP, Circuit, circuit_stats, expand_general
from ..errors import ExpansionTooLarge, StructureError


@dataclass(frozen=True)
class Label:
    """Affine edge label ``const + sum(coef * z)``."""

    const: AlgElem | None = None
    terms: tuple[tuple[str, AlgElem], ...] = ()


@dataclass
class ABP:
    field: FieldCtx
    k: int
    layers: list[list[int]] = dc_field(default_factory=list)
    edges: list[tuple[int, int, Label]] = dc_field(default_factory=list)
    source: int = 0
    sink: int = 0

    def layer_of(self) -> dict[int, int]:
        return {v: i for i, nodes in enumerate(self.layers) for v in nodes}

    def z_vars(self) -> list[str]:
        return [z for _, _, lab in self.edges for z, _ in lab.terms]

    def check(self) -> None:
        layer = self.layer_of()
        for u, v, _ in self.edges:
            if layer[v] != layer[u] + 1:
                raise StructureError(f"edge {u}->{v} skips layers")
        zs = self.z_vars()
        if len(zs) != len(set(zs)):
            raise StructureError("a z-variable labels more than one edge")


class _Builder:
    def __init__(self, c: Circuit, constants: Mapping[str, AlgElem], field: FieldCtx, k: int):
        self.c = c
        self.constants = constants
        self.one = AlgElem.identity(field, k)
        self.abp = ABP(field, k)
        self.layer: dict[int, int] = {}
        self.length: dict[int, int] = {}
        for gid in c.order:
            g = c.gate(gid)
            if g.op == "var" or self._single_edge(gid):
                self.length[gid] = 1
            elif g.op == "mul":
                self.length[gid] = sum(self.length[i] for i in g.inputs)
            else:
                self.length[gid] = max(self.length[i] for i in g.inputs)

    def _single_edge(self, gid: int) -> Label | None:
        # constant * z (either order) collapses into one edge coef*z
        g = self.c.gate(gid)
        if g.op != "mul":
            return None
        a, b = (self.c.gate(i) for i in g.inputs)
        if a.op != "var" or b.op != "var":
            return None
        if a.name in self.constants and b.name not in self.constants:
            return Label(terms=((b.name, self.constants[a.name]),))
        if b.name in self.constants and a.name not in self.constants:
            return Label(terms=((a.name, self.constants[b.name]),))
        return None

    def _var_label(self, name: str) -> Label:
        if name in self.constants:
            return Label(const=self.constants[name])
        return Label(terms=((name, self.one),))

    def node(self, layer: int) -> int:
        nid = len(self.layer)
        self.layer[nid] = layer
        return nid

    def edge(self, u: int, v: int, label: Label) -> None:
        self.abp.edges.append((u, v, label))

    def pad(self, u: int, v: int, n: int) -> None:
        for _ in range(n - 1):
            w = self.node(self.layer[u] + 1)
            self.edge(u, w, Label(const=self.one))
            u = w
        self.edge(u, v, Label(const=self.one))

    def build(self, gid: int, src: int, dst: int, length: int) -> None:
        g = self.c.gate(gid)
        label = self._var_label(g.name) if g.op == "var" else self._single_edge(gid)
        if label is not None:
            if length == 1:
                self.edge(src, dst, label)
            else:
                mid = self.node(self.layer[src] + 1)
                self.edge(src, mid, label)
                self.pad(mid, dst, length - 1)
        elif g.op == "mul":
            a, b = g.inputs
            mid = self.node(self.layer[src] + self.length[a])
            self.build(a, src, mid, self.length[a])
            self.build(b, mid, dst, length - self.length[a])
        else:
            for ch in g.inputs:
                self.build(ch, src, dst, length)


def circuit_to_abp(c: Circuit, constants: Mapping[str, AlgElem], field: FieldCtx, k: int) -> ABP:
    """Layered ABP computing the circuit with ``constants`` substituted.

    Raises StructureError unless the circuit is tree-like and every
    symbolic variable occurs exactly once.
    """
    if not circuit_stats(c).tree_like:
        raise StructureError("circuit_to_abp needs a tree-like circuit")
    seen: set[str] = set()
    fan = c.fanout()
    for g in c.gates:
        if g.op == "var" and g.name not in constants:
            if g.name in seen or fan[g.id] > 1:
                raise StructureError(f"symbolic variable {g.name!r} occurs more than once")
            seen.add(g.name)
    b = _Builder(c, constants, field, k)
    src = b.node(0)
    total = b.length[c.root]
    dst = b.node(total)
    b.build(c.root, src, dst, total)
    abp = b.abp
    abp.source, abp.sink = src, dst
    abp.layers = [[] for _ in range(total + 1)]
    for nid, lay in b.layer.items():
        abp.layers[lay].append(nid)
    return abp


# -- zero testing -----------------------------------------------------------


def row_basis(field: FieldCtx, m: np.ndarray) -> np.ndarray:
    """Independent rows spanning the row space of m over GF(2^d) (echelon form)."""
    m = np.array(m, dtype=np.int64)
    m = m[np.any(m != 0, axis=1)]
    nrows, ncols = m.shape
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(m[r:, col])
        if len(nz) == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            m[[r, p]] = m[[p, r]]
        piv = int(m[r, col])
        if piv != 1:
            m[r] = field.mul_vec(field.inv(piv), m[r])
        below = r + 1 + np.flatnonzero(m[r + 1:, col])
        if len(below):
            m[below] ^= field.mul_vec(m[below, col][:, None], m[r][None, :])
        r += 1
    return m[:r]


def _apply_coef(field: FieldCtx, x: np.ndarray, coef: AlgElem) -> np.ndarray:
    """Multiply every row of x (rows x 2^k) by the algebra element coef."""
    idx = np.arange(x.shape[1], dtype=np.int64)
    out = np.zeros_like(x)
    for a in np.flatnonzero(coef.coeffs).tolist():
        c = int(coef.coeffs[a])
        shifted = x[:, idx ^ a]
        out ^= shifted if c == 1 else field.mul_vec(c, shifted)
    return out


def rs_pit(abp: ABP) -> bool:
    """True iff the ABP's polynomial is identically zero.

    Layer by layer, keep a basis of the profiles (node x algebra coordinate)
    of every partial monomial; extend each basis vector by each symbol (the
    constant part or one z) on the outgoing edges, then re-reduce.  The
    polynomial is zero iff the basis is empty at the sink.
    """
    field, dim = abp.field, 1 << abp.k
    layer = abp.layer_of()
    pos = {v: i for nodes in abp.layers for i, v in enumerate(nodes)}
    by_layer: list[list[tuple[int, int, Label]]] = [[] for _ in abp.layers]
    for u, v, lab in abp.edges:
        by_layer[layer[u]].append((pos[u], pos[v], lab))

    basis = np.zeros((1, len(abp.layers[0]), dim), dtype=np.int64)
    basis[0, pos[abp.source], 0] = 1
    for lay in range(len(abp.layers) - 1):
        width = len(abp.layers[lay + 1])
        groups: dict[str | None, list[tuple[int, int, AlgElem]]] = {}
        for pu, pv, lab in by_layer[lay]:
            if lab.const is not None:
                groups.setdefault(None, []).append((pu, pv, lab.const))
            for z, coef in lab.terms:
                groups.setdefault(z, []).append((pu, pv, coef))
        candidates = []
        for sym in sorted(groups, key=lambda s: "" if s is None else s):
            new = np.zeros((basis.shape[0], width, dim), dtype=np.int64)
            for pu, pv, coef in groups[sym]:
                new[:, pv, :] ^= _apply_coef(field, basis[:, pu, :], coef)
            candidates.append(new.reshape(basis.shape[0], width * dim))
        reduced = row_basis(field, np.concatenate(candidates, axis=0)) if candidates else np.zeros((0, width * dim), dtype=np.int64)
        if len(reduced) == 0:
            return True
        basis = reduced.reshape(len(reduced), width, dim)
    return len(basis) == 0


def symbolic_zero_oracle(c: Circuit, constants: Mapping[str, AlgElem], field: FieldCtx, k: int,
                         cap: int = DEFAULT_EXPANSION_CAP) -> bool:
    """Reference check: expand the z-polynomial with algebra coefficients."""
    poly = expand_general(c, GroupAlgebraRing(field, k), constants, cap=cap)
    return len(poly) == 0


def abp_polynomial(abp: ABP, cap: int = DEFAULT_EXPANSION_CAP) -> dict:
    """Sum over source-sink paths, as {sorted z tuple: AlgElem}; small ABPs only."""
    out_edges: dict[int, list[tuple[int, Label]]] = {}
    for u, v, lab in abp.edges:
        out_edges.setdefault(u, []).append((v, lab))
    acc: dict[int, dict[tuple[str, ...], AlgElem]] = {abp.source: {(): AlgElem.identity(abp.field, abp.k)}}
    for lay in range(len(abp.layers) - 1):
        nxt: dict[int, dict[tuple[str, ...], AlgElem]] = {}
        for u in abp.layers[lay]:
            for mono, coef in acc.get(u, {}).items():
                for v, lab in out_edges.get(u, []):
                    target = nxt.setdefault(v, {})
                    parts = [((), lab.const)] if lab.const is not None else []
                    parts += [((z,), cz) for z, cz in lab.terms]
                    for extra, cz in parts:
                        m = tuple(sorted(mono + extra))
                        val = coef * cz
                        target[m] = target[m] + val if m in target else val
                        if len(target) > cap:
                            raise ExpansionTooLarge(f"ABP expansion exceeds {cap} monomials")
        acc = nxt
    return {m: v for m, v in acc.get(abp.sink, {}).items() if not v.is_zero()}
