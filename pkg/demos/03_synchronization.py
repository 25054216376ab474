# Epsilon-synchronization: find a string of observations after which the
# state of the encoder is (almost) certain, even without knowing where it
# started.

from procgeom import (
    DepthExceeded,
    Pfsa,
    belief_from_string,
    epsilon_synchronize,
    joint_epsilon_synchronize,
)

g2 = Pfsa(
    ["0", "1"],
    ["A", "B"],
    {"A": {"0": "A", "1": "B"}, "B": {"0": "A", "1": "B"}},
    {"A": [0.8, 0.2], "B": [0.3, 0.7]},
)

# one symbol suffices here: every state moves to A on '0'
res = epsilon_synchronize(g2, eps=1e-6)
print(f"g2 synchronizes with {''.join(res.string)!r}: belief peak {res.achieved} at state {res.state}")

# rotation transitions never merge states, yet the likelihoods still
# concentrate the belief along the right observation sequence
t3 = Pfsa(
    ["0", "1"],
    ["x", "y", "z"],
    {"x": {"0": "y", "1": "z"}, "y": {"0": "z", "1": "x"}, "z": {"0": "x", "1": "y"}},
    {"x": [0.6, 0.4], "y": [0.25, 0.75], "z": [0.7, 0.3]},
)
res = epsilon_synchronize(t3, eps=1e-3)
print(f"\nrotation machine needs {len(res.string)} symbols for eps=1e-3:")
print("  string:", "".join(res.string))
for i in range(0, len(res.string) + 1, 4):
    peak = float(belief_from_string(t3, res.string[:i]).max())
    print(f"  after {i:2d} symbols: belief peak {peak:.6f}")

# uniform rows with permutation transitions carry no information at all
flat = Pfsa(
    ["0", "1"],
    ["p", "q"],
    {"p": {"0": "q", "1": "p"}, "q": {"0": "p", "1": "q"}},
    {"p": [0.5, 0.5], "q": [0.5, 0.5]},
)
try:
    epsilon_synchronize(flat, eps=0.01, max_depth=16)
except DepthExceeded as exc:
    print(f"\nuninformative machine: {exc}")

# one string can synchronize two machines at once (they read the same symbols)
rg, rh, string = joint_epsilon_synchronize(g2, t3, eps=1e-3)
print(f"\njoint certificate {''.join(string)!r}: peaks {rg.achieved:.6f} (g2) and {rh.achieved:.6f} (t3)")
