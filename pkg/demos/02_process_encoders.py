# A probabilistic finite-state automaton as a process encoder: validation,
# derived matrices, stationary behavior, belief conditioning on observed
# symbols, word probabilities, and sampling.

import numpy as np

from procgeom import (
    Pfsa,
    belief_from_string,
    generate_sequence,
    matrices,
    minimal_closed_restriction,
    minimize,
    stationary_distribution,
    symbolic_derivative,
    validate,
    word_probability,
)

# two states; symbol 0 funnels everything to A, symbol 1 to B
g2 = Pfsa(
    ["0", "1"],
    ["A", "B"],
    {"A": {"0": "A", "1": "B"}, "B": {"0": "A", "1": "B"}},
    {"A": [0.8, 0.2], "B": [0.3, 0.7]},
)
print("validation:", validate(g2))

pi_tilde, pi, gamma = matrices(g2)
print("\nemission rows:\n", pi_tilde)
print("state transition matrix:\n", pi)

# how often each state is visited in the long run
stat = stationary_distribution(g2)
print("\nstationary distribution:", stat)

# observing symbols concentrates the state belief; '0' pins the state exactly
for word in ([], ["0"], ["1"], ["0", "1"]):
    b = belief_from_string(g2, word)
    print(f"belief after {''.join(word) or '(nothing)':>9}: {b}   next-symbol: {symbolic_derivative(g2, b)}")

# word probabilities follow from the same recursion
for word in (["0"], ["0", "1"], ["1", "1", "0"]):
    print("P(" + "".join(word) + ") =", word_probability(g2, word))

# the encoder samples its own process
stream = generate_sequence(g2, 100_000, seed=42)
print("\nsampled frequency of '0':", float((stream == 0).mean()), " (stationary rate:", word_probability(g2, ["0"]), ")")

# redundant states disappear under minimization
redundant = Pfsa(
    ["0", "1"],
    ["A", "B", "C"],
    {"A": {"0": "A", "1": "B"}, "B": {"0": "A", "1": "C"}, "C": {"0": "A", "1": "B"}},
    {"A": [0.8, 0.2], "B": [0.3, 0.7], "C": [0.3, 0.7]},
)
squeezed = minimize(minimal_closed_restriction(redundant))
print("\nredundant 3-state encoder minimizes to", squeezed.n_states, "states:", squeezed.states)
