import itertools

import numpy as np
import pytest

from procgeom import (
    AlphabetMismatch,
    DepthExceeded,
    belief_from_string,
    epsilon_synchronize,
    joint_epsilon_synchronize,
    joint_epsilon_synchronize_many,
    product_machine,
    psum,
    scale_process,
    as_process,
    validate,
)
from conftest import make_perm2, make_single


def exhaustive_best(g, max_len):
    """Oracle: scan every string up to max_len for the best belief peak."""
    best = (-1.0, None)
    for length in range(max_len + 1):
        for w in itertools.product(range(g.n_symbols), repeat=length):
            peak = float(belief_from_string(g, np.array(w, dtype=np.int64)).max())
            if peak > best[0]:
                best = (peak, w)
    return best


class TestProductMachine:
    def test_g2_squared_has_four_states(self, g2):
        prod = product_machine(g2, g2)
        assert prod.n_states == 4
        assert validate(prod).valid

    def test_diagonal_closed_under_transitions(self, g2):
        prod = product_machine(g2, g2)
        diagonal = {f"({q},{q})" for q in g2.states}
        for q in diagonal:
            for sym in prod.alphabet:
                assert prod.next_state(q, sym) in diagonal

    def test_product_with_single_state_mirrors_g2(self, g2):
        prod = product_machine(g2, make_single())
        assert prod.n_states == g2.n_states
        for i, q in enumerate(g2.states):
            for sym in g2.alphabet:
                expected = f"({g2.next_state(q, sym)},s)"
                assert prod.next_state(f"({q},s)", sym) == expected

    def test_row_combiner(self, g2):
        prod = product_machine(g2, make_single(), row_combiner=psum)
        np.testing.assert_allclose(prod.morph_row("(A,s)"), [0.8, 0.2], atol=1e-15)

    def test_alphabet_mismatch(self, g2, u3):
        with pytest.raises(AlphabetMismatch):
            product_machine(g2, u3)


class TestEpsilonSynchronize:
    def test_g2_synchronizes_on_zero(self, g2):
        res = epsilon_synchronize(g2, 0.01)
        assert res.string == ("0",)
        assert res.achieved == 1.0
        assert res.state == "A"
        # oracle: exhaustive scan of strings up to length 2
        peak, word = exhaustive_best(g2, 2)
        assert peak == 1.0 and len(word) <= 1

    def test_single_state_needs_empty_string(self):
        res = epsilon_synchronize(make_single(), 0.5)
        assert res.string == ()
        assert res.achieved == 1.0

    def test_permutation_machine_exceeds_depth(self):
        g = make_perm2()
        with pytest.raises(DepthExceeded) as exc_info:
            epsilon_synchronize(g, 0.01, max_depth=6)
        best = exc_info.value.best
        assert best.achieved == pytest.approx(0.5)
        # oracle: no string up to the depth bound beats the uniform belief
        peak, _ = exhaustive_best(g, 6)
        assert peak == pytest.approx(0.5)

    def test_achieved_verified_by_replay(self, t3):
        res = epsilon_synchronize(t3, 1e-6)
        replay = belief_from_string(t3, res.string)
        assert float(replay.max()) == pytest.approx(res.achieved, abs=1e-12)
        assert t3.states[int(np.argmax(replay))] == res.state
        assert res.achieved >= 1.0 - 1e-6

    def test_monotone_in_eps(self, t3):
        res = epsilon_synchronize(t3, 0.05)
        replay = float(belief_from_string(t3, res.string).max())
        for eps in (0.1, 0.3, 0.6):
            assert replay >= 1.0 - eps

    def test_achieved_monotone_along_prefix_chain(self, g2):
        p = as_process(g2, "G")
        for machine in (g2, scale_process(0.1, p).machine):
            res = epsilon_synchronize(machine, 1e-6)
            peaks = [
                float(belief_from_string(machine, res.string[:i]).max())
                for i in range(len(res.string) + 1)
            ]
            assert all(a <= b + 1e-12 for a, b in zip(peaks, peaks[1:]))

    def test_bad_eps_rejected(self, g2):
        with pytest.raises(ValueError):
            epsilon_synchronize(g2, 0.0)
        with pytest.raises(ValueError):
            epsilon_synchronize(g2, 1.0)


class TestJointSynchronize:
    def test_same_machine_twice(self, g2):
        rg, rh, string = joint_epsilon_synchronize(g2, g2, 0.01)
        assert string == ("0",)
        assert rg.achieved == rh.achieved == 1.0

    def test_with_single_state(self, g2):
        rg, rh, string = joint_epsilon_synchronize(g2, make_single(), 0.01)
        assert string == ("0",)
        assert rh.achieved == 1.0

    def test_with_scaled_copy(self, g2):
        p = as_process(g2, "G")
        tenth = scale_process(0.1, p).machine
        rg, rh, string = joint_epsilon_synchronize(g2, tenth, 1e-6, max_depth=128)
        for machine, res in ((g2, rg), (tenth, rh)):
            replay = float(belief_from_string(machine, string).max())
            assert replay >= 1.0 - 1e-6
            assert replay == pytest.approx(res.achieved, abs=1e-12)

    def test_three_machines(self, g2, m2):
        p = as_process(g2, "G")
        machines = (g2, scale_process(0.1, p).machine, m2)
        results, string = joint_epsilon_synchronize_many(machines, 1e-6)
        for machine, res in zip(machines, results):
            replay = float(belief_from_string(machine, string).max())
            assert replay >= 1.0 - 1e-6
            assert replay == pytest.approx(res.achieved, abs=1e-12)

    def test_alphabet_mismatch(self, g2, u3):
        with pytest.raises(AlphabetMismatch):
            joint_epsilon_synchronize(g2, u3, 0.1)

    def test_permutation_pair_exceeds_depth(self, g2):
        with pytest.raises(DepthExceeded) as exc_info:
            joint_epsilon_synchronize(g2, make_perm2(), 0.01, max_depth=6)
        best = exc_info.value.best
        assert len(best) == 2
        assert best[1].achieved == pytest.approx(0.5)
