"""Randomized q-monomial testing over GF(2^d)[Z_2^k].

Each trial substitutes ``basis(v) + identity`` (v uniform and nonzero) for
every y-variable and a uniform field scalar for every z-variable of the
transformed circuit, then evaluates.  A nonzero result certifies a
q-monomial of degree <= k, so "yes" answers are never wrong.
"""

from __future__ import annotations

import hashlib
import struct
import time
from dataclasses import asdict, dataclass, field as dc_field

import numpy as np

from .algebra import MAX_ALGEBRA_DIM, AlgElem, FieldCtx, GroupAlgebraRing, make_field
from .circuit import Circuit, circuit_stats, evaluate
from .errors import CapError, ParameterError
from .parallel import ordered_map, resolve_workers
from .transform import DOUBLE_PRIME, TransformOutput, transform_full

DEFAULT_TRIALS = 64
_U64 = (1 << 64) - 1


@dataclass(frozen=True)
class TestParams:
    __test__ = False

    q: int
    k: int
    trials: int = DEFAULT_TRIALS
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.q, int) or self.q < 2:
            raise ParameterError(f"q must be an integer >= 2, got {self.q!r}")
        if not isinstance(self.k, int) or self.k < 1:
            raise ParameterError(f"k must be an integer >= 1, got {self.k!r}")
        if self.k > MAX_ALGEBRA_DIM:
            raise CapError(f"k={self.k} exceeds the group-algebra cap {MAX_ALGEBRA_DIM}")
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ParameterError(f"trials must be a positive integer, got {self.trials!r}")


@dataclass
class TestReport:
    __test__ = False

    answer: str
    mode: str
    q: int
    k: int
    d: int | None
    trials_run: int
    successes: int
    seed: int | None
    s: int | None = None
    t: int | None = None
    tree_like: bool | None = None
    elapsed_ms: dict[str, float] = dc_field(default_factory=dict)
    trial_flags: list[bool] = dc_field(default_factory=list)
    extra: dict = dc_field(default_factory=dict)

    @property
    def yes(self) -> bool:
        return self.answer == "yes"

    def to_dict(self, timings: bool = True) -> dict:
        out = asdict(self)
        if not timings:
            out.pop("elapsed_ms")
        return out


class _Timer:
    def __init__(self):
        self.phases: dict[str, float] = {}
        self._start = time.perf_counter()

    def mark(self, name: str, since: float) -> float:
        now = time.perf_counter()
        self.phases[name] = round((now - since) * 1000.0, 3)
        return now

    def finish(self) -> dict[str, float]:
        self.mark("total", self._start)
        return self.phases


def choose_field_degree(k: int, s: int) -> int:
    """d = ceil(log2(k(s+1)+1)) + 1, clamped to [2, 32].

    |F| = 2^d >= 2(k(s+1)+1), so a nonzero coefficient polynomial of degree
    <= k(s+1)+1 vanishes at a random point with probability <= 1/2.
    """
    if k < 1 or s < 1:
        raise ParameterError(f"need k >= 1 and s >= 1, got k={k}, s={s}")
    bound = k * (s + 1) + 1
    return min(32, max(2, (bound - 1).bit_length() + 1))


def trial_seed(master: int, index: int) -> int:
    """Per-trial seed, a hash of (master seed, trial index)."""
    h = hashlib.blake2b(struct.pack("<QQ", master & _U64, index), digest_size=8)
    return int.from_bytes(h.digest(), "little")


def sample_assignment(T: TransformOutput, k: int, field: FieldCtx, seed: int) -> dict[str, AlgElem]:
    """Random algebra values for every y (in gamma order) and z (in VarSpace order)."""
    rng = np.random.default_rng(seed)
    ys = T.vars.y_by_gamma()
    vs = rng.integers(1, 1 << k, size=len(ys))
    zs = rng.integers(0, field.order, size=len(T.vars.z_vars))
    values = {y: AlgElem.shifted_basis(field, k, int(v)) for y, v in zip(ys, vs)}
    values.update({z: AlgElem.scalar(field, k, int(c)) for z, c in zip(T.vars.z_vars, zs)})
    return values


def rtm_trial(T: TransformOutput, P: TestParams, seed: int, field: FieldCtx | None = None) -> bool:
    """One randomized evaluation of C''; True iff the result is nonzero."""
    if T.stage != DOUBLE_PRIME:
        raise ParameterError(f"rtm_trial needs a C'' circuit, got stage {T.stage}")
    if field is None:
        field = make_field(choose_field_degree(P.k, len(T.circuit)))
    values = sample_assignment(T, P.k, field, seed)
    result = evaluate(T.circuit, values, GroupAlgebraRing(field, P.k))
    return not result.is_zero()


def rtm_test(c: Circuit, P: TestParams, workers: int | None = None) -> TestReport:
    """Does the circuit's polynomial contain a q-monomial of degree <= k?

    No-answers are wrong with probability at most (7/8)^trials.
    """
    workers = resolve_workers(workers)
    timer = _Timer()
    t0 = time.perf_counter()
    stats = circuit_stats(c)
    T = transform_full(c, P.q)
    d = choose_field_degree(P.k, stats.s)
    field = make_field(d)
    t0 = timer.mark("transform", t0)
    seeds = [trial_seed(P.seed, i) for i in range(P.trials)]
    flags = ordered_map(lambda s: rtm_trial(T, P, s, field), seeds, workers)
    timer.mark("trials", t0)
    successes = sum(flags)
    return TestReport(
        answer="yes" if successes else "no",
        mode="randomized",
        q=P.q, k=P.k, d=d,
        trials_run=len(flags),
        successes=successes,
        seed=P.seed,
        s=stats.s, t=stats.t, tree_like=stats.tree_like,
        elapsed_ms=timer.finish(),
        trial_flags=list(flags),
    )
