"""Probabilistic finite-state automata as stationary-process encoders.

A machine is a 4-tuple: an ordered alphabet, a finite state set, a total
deterministic transition map ``delta: Q x Sigma -> Q`` and per-state
emission rows ("morph" rows) giving the next-symbol distribution at each
state.  Strictly positive rows encode strictly positive processes.

The module covers validation, the derived matrices, stationary analysis,
belief recursion over observed symbols, word probabilities, closed
restrictions, state minimization, canonical ordering, sampling, and the
line-oriented ``pfsa v1`` text format.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .errors import (
    AlphabetMismatch,
    InvalidPfsa,
    NotErgodic,
    PfsaFormatError,
    ZeroMass,
)
from .simplex import ProbVec, _freeze

ROW_SUM_TOL = 1e-12
STATIONARY_RESIDUAL_TOL = 1e-12


def _check_names(names, kind: str) -> tuple[str, ...]:
    out = tuple(str(n) for n in names)
    if len(set(out)) != len(out):
        raise InvalidPfsa(f"duplicate {kind} names")
    for n in out:
        if not n or any(c.isspace() for c in n):
            raise InvalidPfsa(f"{kind} name {n!r} is empty or contains whitespace")
    return out


class Pfsa:
    """Immutable probabilistic finite-state automaton.

    Parameters
    ----------
    alphabet : sequence of str
        Symbol names; the declared order is canonical and fixes the
        coordinate order of every emission row.
    states : sequence of str
        State names.
    delta : mapping or array
        Either ``{state: {symbol: next_state}}`` or an integer array of
        shape (n_states, n_symbols) holding next-state indices.
    morph : mapping or array
        Either ``{state: row}`` or a float array of shape
        (n_states, n_symbols).  Rows are stored as given; numeric
        invariants (positivity, row sums) are checked by :func:`validate`,
        not here.
    """

    __slots__ = ("alphabet", "states", "_delta", "_morph", "_sym_index", "_state_index")

    def __init__(self, alphabet, states, delta, morph):
        self.alphabet = _check_names(alphabet, "symbol")
        if len(self.alphabet) < 2:
            raise InvalidPfsa("alphabet needs at least 2 symbols")
        self.states = _check_names(states, "state")
        if not self.states:
            raise InvalidPfsa("need at least one state")
        self._sym_index = {s: i for i, s in enumerate(self.alphabet)}
        self._state_index = {q: i for i, q in enumerate(self.states)}
        n, k = len(self.states), len(self.alphabet)

        if isinstance(delta, dict):
            d = np.empty((n, k), dtype=np.int64)
            for q, row in delta.items():
                for s, target in row.items():
                    d[self._state_index[q], self._sym_index[s]] = self._state_index[target]
                if set(row) != set(self.alphabet):
                    raise InvalidPfsa(f"state {q!r}: transition map is not total")
            if set(delta) != set(self.states):
                raise InvalidPfsa("transition map missing states")
        else:
            d = np.array(delta, dtype=np.int64)
        if d.shape != (n, k):
            raise InvalidPfsa(f"delta shape {d.shape} != ({n}, {k})")
        if d.min() < 0 or d.max() >= n:
            raise InvalidPfsa("delta targets an unknown state")

        if isinstance(morph, dict):
            m = np.empty((n, k), dtype=np.float64)
            for q, row in morph.items():
                m[self._state_index[q], :] = np.asarray(row, dtype=np.float64)
            if set(morph) != set(self.states):
                raise InvalidPfsa("morph map missing states")
        else:
            m = np.array(morph, dtype=np.float64)
        if m.shape != (n, k):
            raise InvalidPfsa(f"morph shape {m.shape} != ({n}, {k})")

        self._delta = _freeze(d)
        self._morph = _freeze(m)

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def n_symbols(self) -> int:
        return len(self.alphabet)

    def symbol_index(self, sigma) -> int:
        if isinstance(sigma, (int, np.integer)):
            if not 0 <= int(sigma) < self.n_symbols:
                raise KeyError(f"symbol index {sigma} out of range")
            return int(sigma)
        return self._sym_index[sigma]

    def state_index(self, q) -> int:
        if isinstance(q, (int, np.integer)):
            if not 0 <= int(q) < self.n_states:
                raise KeyError(f"state index {q} out of range")
            return int(q)
        return self._state_index[q]

    def next_state(self, q, sigma) -> str:
        """State reached from ``q`` on symbol ``sigma``."""
        return self.states[self._delta[self.state_index(q), self.symbol_index(sigma)]]

    def morph_row(self, q) -> ProbVec:
        """Emission row of state ``q`` (read-only, as stored)."""
        return self._morph[self.state_index(q)]

    def to_indices(self, symbols) -> np.ndarray:
        """Convert a symbol sequence (names or indices) to an index array."""
        arr = np.asarray(symbols)
        if arr.dtype.kind in "iu":
            if arr.size and (arr.min() < 0 or arr.max() >= self.n_symbols):
                raise KeyError("symbol index out of range")
            return arr.astype(np.int64)
        return np.array([self._sym_index[s] for s in symbols], dtype=np.int64)

    def __repr__(self):
        return (
            f"Pfsa(|Q|={self.n_states}, alphabet={list(self.alphabet)!r}, "
            f"states={list(self.states)!r})"
        )


def structurally_equal(a: Pfsa, b: Pfsa) -> bool:
    """Exact equality of names, transition structure, and rows."""
    return (
        a.alphabet == b.alphabet
        and a.states == b.states
        and bool(np.array_equal(a._delta, b._delta))
        and bool(np.array_equal(a._morph, b._morph))
    )


def check_same_alphabet(a: Pfsa, b: Pfsa) -> None:
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch(f"alphabets differ: {a.alphabet} vs {b.alphabet}")


# ---------------------------------------------------------------------------
# validation and derived matrices

@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]

    @property
    def valid(self) -> bool:
        return not self.violations

    def __str__(self):
        if self.valid:
            return "valid"
        return "invalid:\n" + "\n".join(f"  - {v}" for v in self.violations)


def validate(g: Pfsa) -> ValidationReport:
    """Check all machine invariants; return a report instead of raising.

    Covers: total/closed transition map, finite strictly positive emission
    rows summing to one, and agreement of the transition matrix with the
    sum of the per-symbol event matrices.
    """
    bad: list[str] = []
    d, m = g._delta, g._morph
    if d.min() < 0 or d.max() >= g.n_states:
        bad.append("transition map leaves the state set")
    for i, q in enumerate(g.states):
        row = m[i]
        if not np.all(np.isfinite(row)):
            bad.append(f"state {q}: morph row has non-finite entries")
            continue
        nonpos = np.nonzero(row <= 0.0)[0]
        for j in nonpos:
            bad.append(f"state {q}: morph entry for symbol {g.alphabet[j]!r} is {row[j]:g} (must be > 0)")
        s = row.sum()
        if abs(s - 1.0) > ROW_SUM_TOL:
            bad.append(f"state {q}: morph row sums to {s:.17g}, not 1")
    if not bad:
        _, pi, gamma = matrices(g)
        if not np.array_equal(sum(gamma.values()), pi):
            bad.append("sum of event matrices does not equal the transition matrix")
    return ValidationReport(tuple(bad))


def require_valid(g: Pfsa) -> Pfsa:
    """Raise :class:`InvalidPfsa` if ``g`` fails :func:`validate`."""
    report = validate(g)
    if not report.valid:
        raise InvalidPfsa(str(report))
    return g


def matrices(g: Pfsa):
    """Morph matrix, transition probability matrix, and per-symbol event matrices.

    Returns
    -------
    (pi_tilde, pi, gamma)
        ``pi_tilde`` is (n_states, n_symbols); ``pi`` is
        (n_states, n_states) with rows summing to one; ``gamma`` maps each
        symbol name to its (n_states, n_states) event matrix.  By
        construction the event matrices sum to ``pi`` exactly.
    """
    n, k = g.n_states, g.n_symbols
    rows = np.arange(n)
    gamma = {}
    pi = np.zeros((n, n))
    for j, sym in enumerate(g.alphabet):
        gm = np.zeros((n, n))
        gm[rows, g._delta[:, j]] = g._morph[:, j]
        pi += gm
        gamma[sym] = _freeze(gm)
    return _freeze(g._morph.copy()), _freeze(pi), gamma


# ---------------------------------------------------------------------------
# graph structure: strongly connected components, closed restrictions

def _successor_lists(g: Pfsa) -> list[list[int]]:
    return [sorted(set(g._delta[i].tolist())) for i in range(g.n_states)]


def _tarjan_sccs(succ: list[list[int]]) -> list[list[int]]:
    """Strongly connected components, iteratively (no recursion limit)."""
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    sccs: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            descended = False
            for i in range(pi, len(succ[v])):
                w = succ[v][i]
                if index[w] == -1:
                    work[-1] = (v, i + 1)
                    work.append((w, 0))
                    descended = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if descended:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(sorted(comp))
    return sccs


def sink_sccs(g: Pfsa) -> list[list[int]]:
    """Strongly connected components with no transition leaving them."""
    succ = _successor_lists(g)
    sccs = _tarjan_sccs(succ)
    comp_of = np.empty(g.n_states, dtype=np.int64)
    for ci, comp in enumerate(sccs):
        comp_of[comp] = ci
    sinks = []
    for ci, comp in enumerate(sccs):
        if all(comp_of[w] == ci for v in comp for w in succ[v]):
            sinks.append(comp)
    sinks.sort()
    return sinks


def _restrict(g: Pfsa, keep: list[int]) -> Pfsa:
    """Restriction to a delta-closed state subset (inherited rows)."""
    remap = {old: new for new, old in enumerate(keep)}
    d = np.array([[remap[g._delta[i, j]] for j in range(g.n_symbols)] for i in keep])
    m = g._morph[keep, :]
    return Pfsa(g.alphabet, [g.states[i] for i in keep], d, m)


def closed_restrictions(g: Pfsa) -> list[Pfsa]:
    """All restrictions to nonempty delta-closed state subsets, ``g`` included.

    Every closed subset is a union of single-state forward closures, so the
    enumeration unions closures until no new subset appears.  Output is
    sorted by size, then by state names.
    """
    n = g.n_states
    base = set()
    for q in range(n):
        seen = {q}
        todo = [q]
        while todo:
            v = todo.pop()
            for w in set(g._delta[v].tolist()):
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        base.add(frozenset(seen))
    closed = set(base)
    frontier = list(base)
    while frontier:
        fresh = []
        for c in frontier:
            for b in base:
                u = c | b
                if u not in closed:
                    closed.add(u)
                    fresh.append(u)
        frontier = fresh
    subsets = sorted(closed, key=lambda c: (len(c), sorted(g.states[i] for i in c)))
    return [_restrict(g, sorted(c)) for c in subsets]


def minimal_closed_restriction(g: Pfsa) -> Pfsa:
    """The unique minimal closed restriction carrying all stationary mass.

    Minimal closed restrictions are exactly the sink strongly connected
    components of the transition graph; a unichain machine has one.

    Raises
    ------
    NotErgodic
        If several sink components exist (stationary mass would split).
    """
    sinks = sink_sccs(g)
    if len(sinks) != 1:
        raise NotErgodic(f"{len(sinks)} minimal closed restrictions; expected exactly one")
    return _restrict(g, sinks[0])


# ---------------------------------------------------------------------------
# stationary analysis and belief recursion

def transition_matrix(g: Pfsa) -> np.ndarray:
    return matrices(g)[1]


def stationary_distribution(g: Pfsa) -> np.ndarray:
    """Unique stationary state distribution (row vector fixed by the chain).

    Solved directly as the consistent linear system ``p (Pi - I) = 0``,
    ``sum(p) = 1`` on the single sink component; transient states get mass
    zero.  The residual must come out below 1e-12.

    Raises
    ------
    NotErgodic
        If the machine is not unichain.
    """
    sinks = sink_sccs(g)
    if len(sinks) != 1:
        raise NotErgodic(f"{len(sinks)} sink components; stationary distribution not unique")
    keep = sinks[0]
    pi = transition_matrix(g)
    sub = pi[np.ix_(keep, keep)]
    k = len(keep)
    a = np.vstack([sub.T - np.eye(k), np.ones((1, k))])
    rhs = np.zeros(k + 1)
    rhs[-1] = 1.0
    sol, *_ = np.linalg.lstsq(a, rhs, rcond=None)
    out = np.zeros(g.n_states)
    out[keep] = sol
    residual = max(float(np.abs(out @ pi - out).max()), abs(float(out.sum()) - 1.0))
    if residual > STATIONARY_RESIDUAL_TOL or np.any(sol <= 0.0):
        raise InvalidPfsa(f"stationary solve failed (residual {residual:.3e})")
    return _freeze(out)


def belief_update(g: Pfsa, belief: np.ndarray, sigma) -> np.ndarray:
    """Posterior over states after additionally observing ``sigma``.

    Reweights each state's mass by its probability of emitting ``sigma``,
    moves it along the transition map, and normalizes.
    """
    j = g.symbol_index(sigma)
    w = np.zeros(g.n_states)
    np.add.at(w, g._delta[:, j], belief * g._morph[:, j])
    total = w.sum()
    if total <= 0.0:
        raise ZeroMass(f"observation {g.alphabet[j]!r} has zero probability under the belief")
    return _freeze(w / total)


def belief_from_string(g: Pfsa, symbols, start: np.ndarray | None = None) -> np.ndarray:
    """Fold :func:`belief_update` over ``symbols``.

    The fold starts at the stationary distribution — the no-initial-state
    convention: any past could have preceded the observation window.
    """
    b = stationary_distribution(g) if start is None else start
    for j in g.to_indices(symbols):
        b = belief_update(g, b, int(j))
    return b


def symbolic_derivative(g: Pfsa, belief: np.ndarray) -> ProbVec:
    """Next-symbol distribution under a state belief: ``belief @ morph``."""
    return _freeze(belief @ g._morph)


def word_probability(g: Pfsa, symbols) -> float:
    """Probability that the stationary process emits ``symbols`` as a prefix.

    Folded from the stationary belief: each symbol contributes its current
    next-symbol probability, then conditions the belief.  The empty word
    has probability 1.
    """
    b = stationary_distribution(g)
    p = 1.0
    for j in g.to_indices(symbols):
        p *= float(b @ g._morph[:, j])
        b = belief_update(g, b, int(j))
    return p


# ---------------------------------------------------------------------------
# minimization and canonical form

def minimize(g: Pfsa, tol: float = 1e-9) -> Pfsa:
    """Merge states with matching rows and matching successor structure.

    Partition refinement: initial blocks group states whose emission rows
    agree entrywise within ``tol``; blocks are then split by the block
    signature of their successors until stable.  The quotient keeps one
    state per block, named after its lexicographically smallest member,
    with the row averaged over members (they agree within ``tol``).

    Expects a machine equal to its minimal closed restriction; the quotient
    then emits every word with the same probability as the input.
    """
    n, k = g.n_states, g.n_symbols
    block_of = np.full(n, -1, dtype=np.int64)
    reps: list[int] = []
    for q in range(n):
        for bi, rep in enumerate(reps):
            if np.max(np.abs(g._morph[q] - g._morph[rep])) <= tol:
                block_of[q] = bi
                break
        else:
            block_of[q] = len(reps)
            reps.append(q)

    while True:
        signatures = {}
        new_block_of = np.empty(n, dtype=np.int64)
        for q in range(n):
            sig = (block_of[q], *(block_of[g._delta[q, j]] for j in range(k)))
            if sig not in signatures:
                signatures[sig] = len(signatures)
            new_block_of[q] = signatures[sig]
        if len(signatures) == len(set(block_of.tolist())):
            block_of = new_block_of
            break
        block_of = new_block_of

    n_blocks = len(set(block_of.tolist()))
    members: list[list[int]] = [[] for _ in range(n_blocks)]
    for q in range(n):
        members[block_of[q]].append(q)
    order = sorted(range(n_blocks), key=lambda b: members[b][0])
    rename = {old: new for new, old in enumerate(order)}

    names = [min(g.states[q] for q in members[b]) for b in order]
    d = np.empty((n_blocks, k), dtype=np.int64)
    m = np.empty((n_blocks, k), dtype=np.float64)
    for new, b in enumerate(order):
        rep = members[b][0]
        d[new] = [rename[block_of[g._delta[rep, j]]] for j in range(k)]
        if len(members[b]) == 1:
            m[new] = g._morph[rep]
        else:
            m[new] = g._morph[members[b], :].mean(axis=0)
            m[new] /= m[new].sum()
    return Pfsa(g.alphabet, names, d, m)


def canonicalize(g: Pfsa) -> Pfsa:
    """Reorder states by first reachability from the smallest state name.

    Breadth-first order, exploring symbols in alphabet order; unreachable
    states (possible before restriction) follow in name order.  Gives
    deterministic file round-trips independent of construction history.
    """
    start = g.state_index(min(g.states))
    seen = {start}
    order = [start]
    head = 0
    while head < len(order):
        q = order[head]
        head += 1
        for j in range(g.n_symbols):
            t = int(g._delta[q, j])
            if t not in seen:
                seen.add(t)
                order.append(t)
    for q in sorted(range(g.n_states), key=lambda i: g.states[i]):
        if q not in seen:
            seen.add(q)
            order.append(q)
    remap = {old: new for new, old in enumerate(order)}
    d = np.array([[remap[g._delta[i, j]] for j in range(g.n_symbols)] for i in order])
    return Pfsa(g.alphabet, [g.states[i] for i in order], d, g._morph[order, :])


# ---------------------------------------------------------------------------
# sampling

def generate_sequence(g: Pfsa, length: int, seed) -> np.ndarray:
    """Sample ``length`` symbols from the stationary process (index array).

    The initial state is drawn from the stationary distribution, then the
    chain emits from the current row and follows the transition map.
    Deterministic for a fixed seed.
    """
    if length < 0:
        raise ValueError("length must be >= 0")
    rng = np.random.default_rng(seed)
    pi0 = stationary_distribution(g)
    out = np.empty(length, dtype=np.int64)
    if length == 0:
        return _freeze(out)
    q = int(rng.choice(g.n_states, p=pi0))
    u = rng.random(length)
    cum_rows = [row.tolist() for row in np.cumsum(g._morph, axis=1)]
    delta_rows = [row.tolist() for row in g._delta]
    last = g.n_symbols - 1
    for t in range(length):
        s = bisect_right(cum_rows[q], float(u[t]))
        if s > last:
            s = last
        out[t] = s
        q = delta_rows[q][s]
    return _freeze(out)


# ---------------------------------------------------------------------------
# pfsa v1 text format

def format_pfsa(g: Pfsa) -> str:
    """Render the machine in the ``pfsa v1`` text format (17 digit probs)."""
    lines = ["pfsa v1", "alphabet: " + " ".join(g.alphabet)]
    for i, q in enumerate(g.states):
        lines.append(f"state {q}:")
        for j, sym in enumerate(g.alphabet):
            lines.append(f"  {sym} -> {g.states[g._delta[i, j]]} {g._morph[i, j]:.17g}")
    return "\n".join(lines) + "\n"


def parse_pfsa(text: str) -> Pfsa:
    """Parse the strict ``pfsa v1`` text format.

    Unknown directives, blank interior lines, repeated or incomplete state
    blocks, out-of-order transition lines and unresolvable state references
    are all errors.
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != "pfsa v1":
        raise PfsaFormatError("first line must be exactly 'pfsa v1'")
    if len(lines) < 2 or not lines[1].startswith("alphabet: "):
        raise PfsaFormatError("second line must be 'alphabet: <symbols>'")
    alphabet = lines[1][len("alphabet: "):].split()
    if len(alphabet) < 2:
        raise PfsaFormatError("alphabet needs at least 2 symbols")
    if len(set(alphabet)) != len(alphabet):
        raise PfsaFormatError("alphabet symbols must be distinct")

    state_names: list[str] = []
    trans: dict[str, list[tuple[str, str, float]]] = {}
    i = 2
    while i < len(lines):
        line = lines[i]
        if not line.startswith("state ") or not line.endswith(":"):
            raise PfsaFormatError(f"line {i + 1}: expected 'state <name>:', got {line!r}")
        name = line[len("state "):-1]
        if not name or any(c.isspace() for c in name):
            raise PfsaFormatError(f"line {i + 1}: bad state name {name!r}")
        if name in trans:
            raise PfsaFormatError(f"line {i + 1}: duplicate state {name!r}")
        state_names.append(name)
        trans[name] = []
        i += 1
        for sym in alphabet:
            if i >= len(lines):
                raise PfsaFormatError(f"state {name!r}: missing transition for {sym!r}")
            row = lines[i]
            if not row[:1].isspace():
                raise PfsaFormatError(f"line {i + 1}: expected indented transition line")
            parts = row.split()
            if len(parts) != 4 or parts[1] != "->":
                raise PfsaFormatError(f"line {i + 1}: expected '<symbol> -> <state> <prob>'")
            if parts[0] != sym:
                raise PfsaFormatError(
                    f"line {i + 1}: expected symbol {sym!r} (alphabet order), got {parts[0]!r}"
                )
            try:
                prob = float(parts[3])
            except ValueError:
                raise PfsaFormatError(f"line {i + 1}: bad probability {parts[3]!r}") from None
            trans[name].append((sym, parts[2], prob))
            i += 1

    if not state_names:
        raise PfsaFormatError("no states declared")
    for name, rows in trans.items():
        for _, target, _ in rows:
            if target not in trans:
                raise PfsaFormatError(f"state {name!r}: transition to unknown state {target!r}")

    delta = {q: {sym: t for sym, t, _ in trans[q]} for q in state_names}
    morph = {q: [p for _, _, p in trans[q]] for q in state_names}
    return Pfsa(alphabet, state_names, delta, morph)


def read_pfsa(path) -> Pfsa:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_pfsa(fh.read())


def write_pfsa(g: Pfsa, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_pfsa(g))
