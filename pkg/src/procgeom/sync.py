"""Search for epsilon-synchronizing strings.

A string epsilon-synchronizes a machine when, after conditioning the
stationary state belief on it, a single state carries at least ``1 - eps``
of the mass.  Every ergodic machine admits such strings for every positive
epsilon, but no length bound is available, so the search is best-first
with an explicit depth budget and reports :class:`DepthExceeded` (with the
best certificate found) when the budget runs out.

Joint synchronization drives several machines with the same string and
ranks frontier entries by the worst of the per-machine belief peaks.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .errors import DepthExceeded, ProcgeomError
from .pfsa import (
    Pfsa,
    belief_from_string,
    belief_update,
    check_same_alphabet,
    stationary_distribution,
)

FRONTIER_CAP = 10**6
BELIEF_QUANTUM = 1e-12
REPLAY_TOL = 1e-9


@dataclass(frozen=True)
class SyncResult:
    """Certificate from a synchronization search.

    ``string`` holds symbol names; ``achieved`` is the peak belief
    component after the string (verified by an independent replay of the
    belief recursion); ``state`` is the state carrying the peak;
    ``depth_searched`` is the longest string length the search examined.
    """

    string: tuple[str, ...]
    achieved: float
    state: str
    depth_searched: int


def product_machine(g: Pfsa, h: Pfsa, row_combiner=None) -> Pfsa:
    """Componentwise product machine on the shared alphabet.

    States are all pairs (g-state, h-state); a symbol moves both components
    by their own transition maps.  Emission rows come from
    ``row_combiner(row_g, row_h)``; without a combiner every product state
    emits uniformly, which is all the synchronization search needs.
    """
    check_same_alphabet(g, h)
    k = g.n_symbols
    names = []
    delta = np.empty((g.n_states * h.n_states, k), dtype=np.int64)
    morph = np.empty((g.n_states * h.n_states, k), dtype=np.float64)
    uniform_row = np.full(k, 1.0 / k)
    for i in range(g.n_states):
        for j in range(h.n_states):
            idx = i * h.n_states + j
            names.append(f"({g.states[i]},{h.states[j]})")
            for s in range(k):
                delta[idx, s] = g._delta[i, s] * h.n_states + h._delta[j, s]
            if row_combiner is None:
                morph[idx] = uniform_row
            else:
                morph[idx] = row_combiner(g._morph[i], h._morph[j])
    return Pfsa(g.alphabet, names, delta, morph)


def _belief_key(beliefs) -> tuple:
    parts = []
    for b in beliefs:
        parts.extend(int(x) for x in np.round(b / BELIEF_QUANTUM))
    return tuple(parts)


def _replayed_result(machine: Pfsa, string_idx: tuple[int, ...], depth: int) -> SyncResult:
    b = belief_from_string(machine, np.array(string_idx, dtype=np.int64))
    peak = int(np.argmax(b))
    return SyncResult(
        string=tuple(machine.alphabet[j] for j in string_idx),
        achieved=float(b[peak]),
        state=machine.states[peak],
        depth_searched=depth,
    )


def _frontier_search(machines, eps: float, max_depth: int):
    """Best-first search over strings, ranked by the worst belief peak.

    Beliefs quantized to 1e-12 deduplicate revisited frontier entries (the
    future depends on the beliefs alone).  Ties in score break toward the
    lexicographically smallest string in alphabet order.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must be in (0, 1), got {eps}")
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    k = machines[0].n_symbols
    start = tuple(stationary_distribution(m) for m in machines)

    def score(beliefs) -> float:
        return min(float(b.max()) for b in beliefs)

    heap = [(-score(start), (), start)]
    visited = {_belief_key(start)}
    best_score = -np.inf
    best_string: tuple[int, ...] = ()
    depth_seen = 0

    while heap:
        neg, string_idx, beliefs = heapq.heappop(heap)
        current = -neg
        depth_seen = max(depth_seen, len(string_idx))
        if current > best_score:
            best_score = current
            best_string = string_idx
        if current >= 1.0 - eps:
            results = tuple(_replayed_result(m, string_idx, depth_seen) for m in machines)
            for r, b in zip(results, beliefs):
                if abs(r.achieved - float(b.max())) > REPLAY_TOL:
                    raise ProcgeomError("search bookkeeping diverged from belief replay")
            return results, string_idx
        if len(string_idx) >= max_depth:
            continue
        for j in range(k):
            nxt = tuple(belief_update(m, b, j) for m, b in zip(machines, beliefs))
            key = _belief_key(nxt)
            if key in visited:
                continue
            visited.add(key)
            heapq.heappush(heap, (-score(nxt), string_idx + (j,), nxt))
        if len(heap) > FRONTIER_CAP:
            heap = heapq.nsmallest(FRONTIER_CAP // 2, heap)

    results = tuple(_replayed_result(m, best_string, depth_seen) for m in machines)
    raise DepthExceeded(
        f"no string within depth {max_depth} reaches belief {1.0 - eps:.17g} "
        f"(best {best_score:.17g} at {''.join(machines[0].alphabet[j] for j in best_string)!r})",
        best=results if len(results) > 1 else results[0],
    )


def default_max_depth(*machines: Pfsa) -> int:
    return 64 * max(m.n_states for m in machines)


def epsilon_synchronize(g: Pfsa, eps: float, max_depth: int | None = None) -> SyncResult:
    """Find a string concentrating the state belief to at least ``1 - eps``.

    Raises
    ------
    DepthExceeded
        If no such string exists within ``max_depth`` (default
        ``64 * n_states``); the best certificate found rides on the error.
    """
    if max_depth is None:
        max_depth = default_max_depth(g)
    results, _ = _frontier_search((g,), eps, max_depth)
    return results[0]


def joint_epsilon_synchronize(
    g: Pfsa, h: Pfsa, eps: float, max_depth: int | None = None
) -> tuple[SyncResult, SyncResult, tuple[str, ...]]:
    """One string that epsilon-synchronizes both machines simultaneously.

    Both machines read the same symbols, so the search walks the pair of
    belief recursions directly rather than a product construction.
    """
    check_same_alphabet(g, h)
    if max_depth is None:
        max_depth = default_max_depth(g, h)
    (rg, rh), string_idx = _frontier_search((g, h), eps, max_depth)
    return rg, rh, tuple(g.alphabet[j] for j in string_idx)


def joint_epsilon_synchronize_many(
    machines, eps: float, max_depth: int | None = None
) -> tuple[tuple[SyncResult, ...], tuple[str, ...]]:
    """Joint synchronization of any finite family over one alphabet."""
    machines = tuple(machines)
    if not machines:
        raise ValueError("need at least one machine")
    for m in machines[1:]:
        check_same_alphabet(machines[0], m)
    if max_depth is None:
        max_depth = default_max_depth(*machines)
    results, string_idx = _frontier_search(machines, eps, max_depth)
    return results, tuple(machines[0].alphabet[j] for j in string_idx)
