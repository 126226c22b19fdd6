"""Deterministic q-monomial testing for tree-like circuits.

For every coloring in a perfect hash family over the (q-1)n y-variables,
substitute ``basis(e_color) + identity`` for each y, turn the resulting
circuit in the symbolic z's into an ABP, and run the deterministic zero
test.  The answer is yes iff some coloring leaves a nonzero polynomial.
"""

from __future__ import annotations

import time

from ..algebra import MAX_ALGEBRA_DIM, AlgElem, make_field
from ..circuit import Circuit, circuit_stats
from ..errors import CapError, ParameterError, StructureError
from ..parallel import ordered_map, resolve_workers
from ..rtm import TestReport, _Timer, choose_field_degree
from ..transform import TransformOutput, transform_full
from .abp import circuit_to_abp, rs_pit
from .phf import DEFAULT_BUDGET, PerfectHashFamily, build_phf


def coloring_constants(T: TransformOutput, coloring, field, k: int) -> dict[str, AlgElem]:
    """y_ij -> basis(e_c) + identity with c = coloring(gamma(i, j)), e_c the c-th unit vector."""
    out = {}
    for (i, j), name in T.vars.y_vars.items():
        color = coloring[T.vars.gamma(i, j) - 1]
        out[name] = AlgElem.shifted_basis(field, k, 1 << (color - 1))
    return out


def dtm_coloring_nonzero(T: TransformOutput, coloring, field, k: int) -> bool:
    abp = circuit_to_abp(T.circuit, coloring_constants(T, coloring, field, k), field, k)
    return not rs_pit(abp)


def dtm_test(c: Circuit, q: int, k: int, workers: int | None = None,
             budget: int = DEFAULT_BUDGET, family: PerfectHashFamily | None = None) -> TestReport:
    """Exact answer to "is there a q-monomial of degree <= k" on a tree-like circuit."""
    if not isinstance(q, int) or q < 2 or not isinstance(k, int) or k < 1:
        raise ParameterError(f"need q >= 2 and k >= 1, got q={q}, k={k}")
    if k > MAX_ALGEBRA_DIM:
        raise CapError(f"k={k} exceeds the group-algebra cap {MAX_ALGEBRA_DIM}")
    workers = resolve_workers(workers)
    stats = circuit_stats(c)
    if not stats.tree_like:
        raise StructureError("deterministic testing needs a tree-like circuit")
    timer = _Timer()
    t0 = time.perf_counter()
    T = transform_full(c, q)
    d = choose_field_degree(k, stats.s)
    field = make_field(d)
    N = T.vars.universe()
    t0 = timer.mark("transform", t0)
    H = family if family is not None else build_phf(N, k, budget)
    if H.N != N or H.k != k:
        raise ParameterError(f"family is ({H.N},{H.k}), need ({N},{k})")
    t0 = timer.mark("hash_family", t0)

    # batches of `workers` colorings in family order; stop after the first
    # batch that contains a witness so the report is schedule independent
    witness = None
    for start in range(0, len(H), workers):
        batch = H.colorings[start:start + workers]
        flags = ordered_map(lambda h: dtm_coloring_nonzero(T, h, field, k), batch, workers)
        if any(flags):
            witness = start + flags.index(True)
            break
    timer.mark("identity_tests", t0)
    return TestReport(
        answer="yes" if witness is not None else "no",
        mode="deterministic",
        q=q, k=k, d=d,
        trials_run=len(H) if witness is None else witness + 1,
        successes=0 if witness is None else 1,
        seed=None,
        s=stats.s, t=stats.t, tree_like=stats.tree_like,
        elapsed_ms=timer.finish(),
        extra={"family_size": len(H), "witness_coloring": witness},
    )
