"""Vector-space structure and inner product on strictly positive processes.

A process handle wraps a machine in normal form: restricted to its unique
minimal closed restriction, state-minimized, and canonically ordered.
Equality of processes means equality of finite-dimensional distributions
(word probabilities), which is what the helpers here compare.

The algebra mirrors the simplex operations row by row:

* zero process: one state emitting uniformly (flat white noise),
* scalar product: every emission row raised to a power and renormalized,
* sum: componentwise product machine with row-wise simplex sums.

The inner product of two processes is the long-run average of the
log-ratio inner products of their next-symbol distributions along a
shared, uniformly random symbol stream, started after a jointly
synchronizing string.  ``inner_exact`` evaluates that limit in closed form
through the stationary distribution of the uniformly driven pair chain;
``inner_mc`` estimates it by seeded random walks through the full belief
recursion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import MultipleRecurrentClasses, ZeroNorm
from .pfsa import (
    Pfsa,
    _restrict,
    _tarjan_sccs,
    belief_from_string,
    canonicalize,
    check_same_alphabet,
    minimal_closed_restriction,
    minimize,
    require_valid,
    sink_sccs,
    stationary_distribution,
    structurally_equal,
)
from .simplex import pscale, psum
from .sync import joint_epsilon_synchronize

ZERO_NORM_TOL = 1e-12
DEFAULT_MC_EPS = 1e-6
RENORM_EVERY = 16


@dataclass(frozen=True)
class ProcessHandle:
    """A strictly positive process, stored in normal form with a label."""

    machine: Pfsa
    label: str

    @property
    def alphabet(self) -> tuple[str, ...]:
        return self.machine.alphabet


@dataclass(frozen=True)
class InnerEstimate:
    """Inner-product value with its sampling uncertainty.

    Exact evaluations carry ``std_error`` 0 and zero walk counts.
    """

    value: float
    std_error: float
    mode: str  # "exact" or "monte-carlo"
    walks: int
    walk_length: int


@dataclass(frozen=True)
class AngleEstimate:
    """Angle with the cosine-level uncertainty of its Monte Carlo inputs."""

    angle: float
    cos: float
    cos_std_error: float
    inner: InnerEstimate
    norm_sq_a: InnerEstimate
    norm_sq_b: InnerEstimate


def as_process(machine: Pfsa, label: str = "process") -> ProcessHandle:
    """Validate a machine and reduce it to process normal form."""
    require_valid(machine)
    normal = canonicalize(minimize(minimal_closed_restriction(machine)))
    return ProcessHandle(machine=normal, label=label)


def zero_process(alphabet) -> ProcessHandle:
    """The additive identity: a single state emitting uniformly."""
    alphabet = tuple(alphabet)
    k = len(alphabet)
    g = Pfsa(alphabet, ["z"], np.zeros((1, k), dtype=np.int64), np.full((1, k), 1.0 / k))
    return as_process(g, label="zero")


def scale_process(alpha: float, p: ProcessHandle) -> ProcessHandle:
    """Scalar product: power every emission row by ``alpha`` and renormalize.

    ``alpha = 0`` collapses to the zero process, ``alpha = -1`` gives the
    additive inverse.
    """
    g = p.machine
    rows = np.vstack([pscale(alpha, g._morph[i]) for i in range(g.n_states)])
    scaled = Pfsa(g.alphabet, g.states, g._delta.copy(), rows)
    return as_process(scaled, label=f"{alpha:g}*{p.label}")


def sum_processes(p: ProcessHandle, q: ProcessHandle) -> ProcessHandle:
    """Group sum: pair machine with row-wise simplex sums, then normal form.

    The sum tracks both operands along one shared symbol stream, so its
    states are pairs moved componentwise and its rows are the simplex sums
    of the operand rows.  When the pair structure splits into several
    closed components, the one reachable from the jointly synchronized
    start is the one the construction actually inhabits; a joint
    synchronization run pins it (mirroring :func:`inner_exact`).

    Raises
    ------
    AlphabetMismatch
    NotErgodic
        If several closed components remain reachable from the pinned start.
    DepthExceeded
        If no jointly synchronizing string is found to pin the start.
    """
    from .sync import joint_epsilon_synchronize, product_machine

    g, h = p.machine, q.machine
    check_same_alphabet(g, h)
    prod = product_machine(g, h, row_combiner=psum)
    label = f"({p.label}+{q.label})"
    sinks = sink_sccs(prod)
    if len(sinks) == 1:
        return as_process(prod, label=label)
    rg, rh, _ = joint_epsilon_synchronize(g, h, DEFAULT_MC_EPS)
    start = g.state_index(rg.state) * h.n_states + h.state_index(rh.state)
    reach = {start}
    todo = [start]
    while todo:
        for t in set(prod._delta[todo.pop()].tolist()):
            if t not in reach:
                reach.add(t)
                todo.append(t)
    reachable = [s for s in sinks if reach.intersection(s)]
    if len(reachable) != 1:
        raise NotErgodic(
            f"{len(reachable)} closed components reachable from the synchronized start"
        )
    return as_process(_restrict(prod, reachable[0]), label=label)


# ---------------------------------------------------------------------------
# finite-dimensional-distribution comparison

def _word_probabilities(g: Pfsa, max_len: int) -> dict[tuple[int, ...], float]:
    """Probabilities of every word up to ``max_len``, sharing prefix work."""
    out: dict[tuple[int, ...], float] = {(): 1.0}
    b0 = stationary_distribution(g)
    stack = [((), b0, 1.0)]
    while stack:
        word, belief, prob = stack.pop()
        if len(word) == max_len:
            continue
        for j in range(g.n_symbols):
            pj = prob * float(belief @ g._morph[:, j])
            w = np.zeros(g.n_states)
            np.add.at(w, g._delta[:, j], belief * g._morph[:, j])
            nxt = word + (j,)
            out[nxt] = pj
            stack.append((nxt, w / w.sum(), pj))
    return out

def fdd_distance(p: ProcessHandle, q: ProcessHandle, max_len: int = 5) -> float:
    """Largest word-probability gap over all words up to ``max_len``.

    Zero (up to tolerance) certifies process equality at desk scale.
    """
    check_same_alphabet(p.machine, q.machine)
    wp = _word_probabilities(p.machine, max_len)
    wq = _word_probabilities(q.machine, max_len)
    return max(abs(wp[w] - wq[w]) for w in wp)


# ---------------------------------------------------------------------------
# exact inner product via the uniformly driven pair chain

def _pair_chain(g: Pfsa, h: Pfsa):
    """Transition matrix, successor lists and sink components of the
    uniform-symbol pair chain.

    States are pairs (g-state, h-state); each symbol has weight 1/k and
    moves both components deterministically, so the chain depends only on
    the transition maps.
    """
    ng, nh, k = g.n_states, h.n_states, g.n_symbols
    n = ng * nh
    succ: list[list[int]] = []
    P = np.zeros((n, n))
    for i in range(ng):
        for j in range(nh):
            idx = i * nh + j
            targets = [int(g._delta[i, s]) * nh + int(h._delta[j, s]) for s in range(k)]
            for t in targets:
                P[idx, t] += 1.0 / k
            succ.append(sorted(set(targets)))
    sccs = _tarjan_sccs(succ)
    comp_of = np.empty(n, dtype=np.int64)
    for ci, comp in enumerate(sccs):
        comp_of[comp] = ci
    sinks = [comp for ci, comp in enumerate(sccs)
             if all(comp_of[t] == ci for v in comp for t in succ[v])]
    sinks.sort()
    return P, succ, sinks


def _chain_stationary(P: np.ndarray, keep: list[int]) -> np.ndarray:
    sub = P[np.ix_(keep, keep)]
    m = len(keep)
    a = np.vstack([sub.T - np.eye(m), np.ones((1, m))])
    rhs = np.zeros(m + 1)
    rhs[-1] = 1.0
    sol, *_ = np.linalg.lstsq(a, rhs, rcond=None)
    out = np.zeros(P.shape[0])
    out[keep] = sol
    if np.abs(out @ P - out).max() > 1e-12 or np.any(sol <= 0.0):
        raise MultipleRecurrentClasses("restricted pair chain is not a single recurrent class")
    return out


def inner_exact(p: ProcessHandle, q: ProcessHandle) -> InnerEstimate:
    """Closed-form inner product of two processes.

    Averages the pairwise log-ratio inner products of emission rows under
    the stationary distribution of the uniformly driven pair chain — the
    deterministic value of the walk-average definition.

    When the full pair chain has several sink components, only the part
    reachable from the jointly synchronized start matters (the walk begins
    there).  A process paired with itself starts on the diagonal, which is
    closed, so no search is needed; otherwise a joint synchronization run
    pins the start.  The value is ambiguous only if several sinks remain
    reachable from it.

    The closed form evaluates the walk limit under the synchronized-state
    idealization; it is exact whenever some word merges all states (the
    belief then collapses completely and stays collapsed).  Machines that
    only synchronize approximately keep a wandering belief residue, which
    the Monte Carlo route measures and this formula ignores.

    Raises
    ------
    MultipleRecurrentClasses
        If several recurrent classes are reachable from the synchronized
        start, making the walk average path dependent.
    DepthExceeded
        If the disambiguating joint synchronization fails.
    """
    g, h = p.machine, q.machine
    check_same_alphabet(g, h)
    P, succ, sinks = _pair_chain(g, h)
    if len(sinks) == 1:
        keep = sinks[0]
    else:
        if g is h or structurally_equal(g, h):
            starts = [i * h.n_states + i for i in range(g.n_states)]
        else:
            rg, rh, _ = joint_epsilon_synchronize(g, h, DEFAULT_MC_EPS)
            starts = [g.state_index(rg.state) * h.n_states + h.state_index(rh.state)]
        reach = set(starts)
        todo = list(starts)
        while todo:
            for t in succ[todo.pop()]:
                if t not in reach:
                    reach.add(t)
                    todo.append(t)
        reachable_sinks = [s for s in sinks if reach.intersection(s)]
        if len(reachable_sinks) != 1:
            raise MultipleRecurrentClasses(
                f"{len(reachable_sinks)} recurrent classes reachable from the "
                "synchronized start; the walk average is path dependent"
            )
        keep = reachable_sinks[0]
    rho = _chain_stationary(P, keep)
    lg = np.diff(np.log(g._morph), axis=1)
    lh = np.diff(np.log(h._morph), axis=1)
    pairwise = lg @ lh.T
    value = float(np.sum(rho.reshape(g.n_states, h.n_states) * pairwise))
    return InnerEstimate(value=value, std_error=0.0, mode="exact", walks=0, walk_length=0)


# ---------------------------------------------------------------------------
# Monte Carlo inner product

def _batched_pair_walks(pairs, starts, walk_length: int, repeats: int, seed_seq) -> np.ndarray:
    """Per-walk means of the log-inner terms for several (g, h) pairs at once.

    One row per (pair, repeat).  Beliefs evolve by the full recursion; the
    per-step term needs only log-ratios of ``belief @ morph``, which are
    normalization free, so beliefs are renormalized on a fixed cadence.
    Symbol draws come from per-walk spawned generators, making the result
    reproducible regardless of batching.
    """
    n_pairs = len(pairs)
    rows = n_pairs * repeats
    k = pairs[0][0].n_symbols
    qmax = max(max(g.n_states, h.n_states) for g, h in pairs)

    def padded(machine_side):
        gam = np.zeros((rows, k, qmax, qmax))
        pit = np.zeros((rows, qmax, k))
        bel = np.zeros((rows, qmax))
        for pi_, (pair, start) in enumerate(zip(pairs, starts)):
            m = pair[machine_side]
            nq = m.n_states
            gm = np.zeros((k, qmax, qmax))
            for s in range(k):
                gm[s, np.arange(nq), m._delta[:, s]] = m._morph[:, s]
            block = slice(pi_ * repeats, (pi_ + 1) * repeats)
            gam[block] = gm
            pit[block, :nq, :] = m._morph
            bel[block, :nq] = start[machine_side]
        return gam, pit, bel

    gam_g, pit_g, b_g = padded(0)
    gam_h, pit_h, b_h = padded(1)

    symbols = np.empty((walk_length, rows), dtype=np.int64)
    for pi_, pair_seq in enumerate(seed_seq.spawn(n_pairs)):
        for r, walk_seq in enumerate(pair_seq.spawn(repeats)):
            rng = np.random.default_rng(walk_seq)
            symbols[:, pi_ * repeats + r] = rng.integers(0, k, size=walk_length)

    ridx = np.arange(rows)
    acc = np.zeros(rows)
    for t in range(walk_length):
        fg = np.log(np.einsum("rq,rqs->rs", b_g, pit_g))
        fh = np.log(np.einsum("rq,rqs->rs", b_h, pit_h))
        acc += np.einsum("rs,rs->r", np.diff(fg, axis=1), np.diff(fh, axis=1))
        s = symbols[t]
        b_g = np.einsum("rq,rqp->rp", b_g, gam_g[ridx, s])
        b_h = np.einsum("rq,rqp->rp", b_h, gam_h[ridx, s])
        if t % RENORM_EVERY == RENORM_EVERY - 1:
            b_g /= b_g.sum(axis=1, keepdims=True)
            b_h /= b_h.sum(axis=1, keepdims=True)
    return (acc / walk_length).reshape(n_pairs, repeats)


def _synced_starts(p: ProcessHandle, q: ProcessHandle, eps: float, max_depth):
    _, _, string = joint_epsilon_synchronize(p.machine, q.machine, eps, max_depth)
    return (
        belief_from_string(p.machine, string),
        belief_from_string(q.machine, string),
    )


def _estimate_from_walks(means: np.ndarray, walk_length: int) -> InnerEstimate:
    repeats = means.size
    value = float(means.mean())
    se = float(means.std(ddof=1) / math.sqrt(repeats)) if repeats > 1 else float("inf")
    return InnerEstimate(value=value, std_error=se, mode="monte-carlo",
                         walks=repeats, walk_length=walk_length)


def inner_mc(
    p: ProcessHandle,
    q: ProcessHandle,
    eps: float = DEFAULT_MC_EPS,
    walk_length: int = 10_000,
    repeats: int = 20,
    seed=42,
    max_depth: int | None = None,
) -> InnerEstimate:
    """Monte Carlo inner product along uniformly random symbol walks.

    A jointly synchronizing string pins both beliefs, then ``repeats``
    independent walks of ``walk_length`` uniform symbols average the
    log-ratio inner product of the two next-symbol distributions, carried
    through the full belief recursion.  The estimate and its standard
    error come from the per-walk means, reduced in a fixed order.

    Raises
    ------
    DepthExceeded
        Propagated from the synchronization search.
    """
    check_same_alphabet(p.machine, q.machine)
    if walk_length < 1 or repeats < 2:
        raise ValueError("need walk_length >= 1 and repeats >= 2")
    starts = _synced_starts(p, q, eps, max_depth)
    means = _batched_pair_walks(
        [(p.machine, q.machine)], [starts], walk_length, repeats, np.random.SeedSequence(seed)
    )
    return _estimate_from_walks(means[0], walk_length)


def inner(p: ProcessHandle, q: ProcessHandle, mode: str = "exact", **mc_options) -> InnerEstimate:
    """Dispatch to :func:`inner_exact` or :func:`inner_mc` by ``mode``."""
    if mode == "exact":
        if mc_options:
            raise ValueError("exact mode takes no Monte Carlo options")
        return inner_exact(p, q)
    if mode == "mc":
        return inner_mc(p, q, **mc_options)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# norms and angles

def process_norm(p: ProcessHandle, mode: str = "exact", **mc_options) -> float:
    """Norm induced by the process inner product: ``sqrt(<p, p>)``."""
    est = inner(p, p, mode=mode, **mc_options)
    return math.sqrt(max(est.value, 0.0))


def angle_mc_estimate(
    p: ProcessHandle,
    q: ProcessHandle,
    eps: float = DEFAULT_MC_EPS,
    walk_length: int = 10_000,
    repeats: int = 20,
    seed=42,
    max_depth: int | None = None,
) -> AngleEstimate:
    """Monte Carlo angle with a cosine-level standard error.

    Estimates ``<p,q>``, ``<p,p>`` and ``<q,q>`` in one batched run (with
    independently spawned sub-seeds), forms the cosine, and propagates the
    three standard errors to the cosine, where the sampling distribution is
    regular.  The angle itself is ``arccos`` of the clamped cosine.
    """
    check_same_alphabet(p.machine, q.machine)
    if walk_length < 1 or repeats < 2:
        raise ValueError("need walk_length >= 1 and repeats >= 2")
    pairs = [(p.machine, q.machine), (p.machine, p.machine), (q.machine, q.machine)]
    starts = [
        _synced_starts(p, q, eps, max_depth),
        _synced_starts(p, p, eps, max_depth),
        _synced_starts(q, q, eps, max_depth),
    ]
    means = _batched_pair_walks(pairs, starts, walk_length, repeats, np.random.SeedSequence(seed))
    ip, n1, n2 = (_estimate_from_walks(m, walk_length) for m in means)
    if n1.value <= ZERO_NORM_TOL**2 or n2.value <= ZERO_NORM_TOL**2:
        raise ZeroNorm("angle undefined against a zero-norm process")
    denom = math.sqrt(n1.value * n2.value)
    cos = ip.value / denom
    var = (
        (ip.std_error / denom) ** 2
        + (ip.value * n1.std_error / (2.0 * n1.value * denom)) ** 2
        + (ip.value * n2.std_error / (2.0 * n2.value * denom)) ** 2
    )
    clamped = min(1.0, max(-1.0, cos))
    return AngleEstimate(
        angle=math.acos(clamped),
        cos=cos,
        cos_std_error=math.sqrt(var),
        inner=ip,
        norm_sq_a=n1,
        norm_sq_b=n2,
    )


def angle(p: ProcessHandle, q: ProcessHandle, mode: str = "exact", **mc_options) -> float:
    """Angle between two processes, in radians.

    Exact mode uses closed-form inner products; Monte Carlo mode accepts
    ``eps``, ``walk_length``, ``repeats`` and ``seed``.

    Raises
    ------
    ZeroNorm
        If either operand has norm below 1e-12 (the zero process).
    """
    if mode == "mc":
        return angle_mc_estimate(p, q, **mc_options).angle
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    norm_p = process_norm(p)
    norm_q = process_norm(q)
    if norm_p < ZERO_NORM_TOL or norm_q < ZERO_NORM_TOL:
        raise ZeroNorm("angle undefined against a zero-norm process")
    cos = inner_exact(p, q).value / (norm_p * norm_q)
    return math.acos(min(1.0, max(-1.0, cos)))
