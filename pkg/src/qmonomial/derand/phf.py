"""Perfect hash families built by the method of conditional expectations.

A coloring maps items 0..N-1 to colors 1..k.  A family is perfect when
every k-subset (every subset of size min(k, N)) is colored injectively by
some member.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ..errors import BudgetError, InputFormatError, ParameterError

DEFAULT_BUDGET = 10**6


@dataclass(frozen=True)
class PerfectHashFamily:
    N: int
    k: int
    colorings: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.colorings)

    def dumps(self) -> str:
        lines = [f"{self.N} {self.k} {len(self.colorings)}"]
        lines += [" ".join(map(str, h)) for h in self.colorings]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> PerfectHashFamily:
        rows = [ln.split() for ln in text.splitlines() if ln.strip()]
        try:
            N, k, count = (int(x) for x in rows[0])
            colorings = tuple(tuple(int(x) for x in r) for r in rows[1:])
        except (ValueError, IndexError):
            raise InputFormatError("PHF header must be 'N k count' followed by integer rows") from None
        if len(colorings) != count:
            raise InputFormatError(f"header promises {count} colorings, found {len(colorings)}")
        for h in colorings:
            if len(h) != N or any(not 1 <= c <= k for c in h):
                raise InputFormatError(f"coloring {h} is not a map from {N} items to 1..{k}")
        return cls(N, k, colorings)


def _subsets(N: int, size: int, budget: int) -> np.ndarray:
    count = math.comb(N, size)
    if count > budget:
        raise BudgetError(f"C({N},{size}) = {count} subsets exceeds budget {budget}")
    if count == 0 or size == 0:
        return np.zeros((count, size), dtype=np.int64)
    return np.array(list(combinations(range(N), size)), dtype=np.int64)


def _injective_rows(colors: np.ndarray) -> np.ndarray:
    s = np.sort(colors, axis=1)
    return np.all(s[:, 1:] != s[:, :-1], axis=1)


def verify_phf(F: PerfectHashFamily, budget: int = DEFAULT_BUDGET) -> bool:
    size = min(F.k, F.N)
    subsets = _subsets(F.N, size, budget)
    if len(subsets) == 0:
        return True
    covered = np.zeros(len(subsets), dtype=bool)
    for h in F.colorings:
        covered |= _injective_rows(np.asarray(h, dtype=np.int64)[subsets])
        if covered.all():
            return True
    return False


def _success_probs(k: int) -> np.ndarray:
    # probs[a] = P(r = k - a uniformly colored items avoid a fixed distinct colors
    # and each other), i.e. prod_{j<r} (k - a - j) / k
    probs = np.ones(k + 1)
    for a in range(k + 1):
        p = 1.0
        for j in range(k - a):
            p *= (k - a - j) / k
        probs[a] = p
    return probs


def _conditional_weight(colors: np.ndarray, probs: np.ndarray) -> float:
    """Sum over rows of P(row ends up injective | assigned colors, 0 = unassigned)."""
    s = np.sort(colors, axis=1)
    clash = np.any((s[:, 1:] == s[:, :-1]) & (s[:, 1:] != 0), axis=1)
    assigned = np.count_nonzero(colors, axis=1)
    return float(np.where(clash, 0.0, probs[assigned]).sum())


def build_phf(N: int, k: int, budget: int = DEFAULT_BUDGET) -> PerfectHashFamily:
    """Greedy derandomized cover of all k-subsets of {0..N-1}.

    Each coloring is fixed item by item, choosing the color that maximizes
    the expected number of still-uncovered subsets made injective when the
    remaining items are colored uniformly at random.  That expectation never
    drops, so every coloring covers at least a k!/k^k fraction of what is
    left and the loop terminates.
    """
    if not isinstance(N, int) or not isinstance(k, int) or N < 1 or k < 1:
        raise ParameterError(f"need N >= 1 and k >= 1, got N={N}, k={k}")
    if k >= N:
        return PerfectHashFamily(N, k, (tuple(range(1, N + 1)),))
    if k == 1:
        return PerfectHashFamily(N, k, ((1,) * N,))
    uncovered = _subsets(N, k, budget)
    probs = _success_probs(k)
    colorings = []
    while len(uncovered):
        col = np.zeros(N, dtype=np.int64)
        for item in range(N):
            rows = uncovered[np.any(uncovered == item, axis=1)]
            best, best_w = 1, -1.0
            for c in range(1, k + 1):
                col[item] = c
                w = _conditional_weight(col[rows], probs)
                if w > best_w + 1e-12:
                    best, best_w = c, w
            col[item] = best
        colorings.append(tuple(col.tolist()))
        uncovered = uncovered[~_injective_rows(col[uncovered])]
    return PerfectHashFamily(N, k, tuple(colorings))


def phf_size_bound(N: int, k: int) -> float:
    """Soft target e^k * k * ln N + k for the family size."""
    return math.exp(k) * k * math.log(max(N, 1)) + k
