import math

import numpy as np
import pytest

from procgeom import (
    AlphabetMismatch,
    ZeroNorm,
    angle,
    angle_mc_estimate,
    as_process,
    fdd_distance,
    inner,
    inner_exact,
    inner_mc,
    minimal_closed_restriction,
    process_norm,
    pscale,
    scale_process,
    structurally_equal,
    sum_processes,
    validate,
    zero_process,
)


@pytest.fixture
def G(g2):
    return as_process(g2, "G")


@pytest.fixture
def M(m2):
    return as_process(m2, "M")


def exact_g2_self_inner():
    # direct arithmetic: uniform drive makes the pair chain spend half its
    # time in each diagonal state of the two-state fixture
    return 0.5 * math.log(0.8 / 0.2) ** 2 + 0.5 * math.log(0.3 / 0.7) ** 2


class TestNormalForm:
    def test_handle_machine_is_minimal_closed(self, G):
        assert structurally_equal(minimal_closed_restriction(G.machine), G.machine)

    def test_rows_strictly_positive(self, G, M):
        for p in (G, M):
            assert validate(p.machine).valid
            assert np.all(p.machine._morph > 0)


class TestZeroProcess:
    def test_single_uniform_state(self):
        z = zero_process(["0", "1"])
        assert z.machine.n_states == 1
        np.testing.assert_allclose(z.machine.morph_row("z"), [0.5, 0.5], atol=1e-15)

    def test_zero_norm(self):
        assert process_norm(zero_process(["0", "1"])) == 0.0

    def test_additive_identity(self, G):
        z = zero_process(G.alphabet)
        assert fdd_distance(sum_processes(G, z), G, 6) < 1e-10


class TestScale:
    def test_identity_scaling(self, G):
        s = scale_process(1.0, G)
        assert s.machine.n_states == G.machine.n_states
        assert fdd_distance(s, G, 6) < 1e-12

    def test_zero_scaling_gives_flat_noise(self, G):
        s = scale_process(0.0, G)
        assert s.machine.n_states == 1
        np.testing.assert_allclose(s.machine.morph_row(0), [0.5, 0.5], atol=1e-12)

    def test_tenth_scaling_rows(self, G, g2):
        s = scale_process(0.1, G)
        for q in g2.states:
            np.testing.assert_allclose(
                s.machine.morph_row(q), pscale(0.1, g2.morph_row(q)), atol=1e-15
            )

    def test_composition(self, G):
        assert fdd_distance(scale_process(-0.3, G), scale_process(-1.0, scale_process(0.3, G)), 5) < 1e-9


class TestSum:
    def test_commutative_up_to_fdd(self, G, M):
        assert fdd_distance(sum_processes(G, M), sum_processes(M, G), 5) < 1e-12

    def test_inverse_collapses_to_zero(self, G):
        s = sum_processes(G, scale_process(-1.0, G))
        assert s.machine.n_states == 1
        np.testing.assert_allclose(s.machine.morph_row(0), [0.5, 0.5], atol=1e-9)

    def test_self_sum_equals_double_scaling(self, G, g2):
        s = sum_processes(G, G)
        d = scale_process(2.0, G)
        assert fdd_distance(s, d, 6) < 1e-12
        for q_s, q_d in zip(s.machine.states, d.machine.states):
            np.testing.assert_allclose(
                s.machine.morph_row(q_s), d.machine.morph_row(q_d), atol=1e-14
            )

    def test_alphabet_mismatch(self, G, u3):
        with pytest.raises(AlphabetMismatch):
            sum_processes(G, as_process(u3, "U"))

    def test_split_pair_structure_resolved_by_synchronization(self, t3):
        # rotation machines share their transition map, so the pair
        # structure splits into offset classes; the jointly synchronized
        # start pins the aligned one, and summing a process with a renamed
        # copy of itself lands exactly on the doubled process
        from procgeom import Pfsa

        T = as_process(t3, "T")
        renamed = Pfsa(t3.alphabet, ["u", "v", "w"], t3._delta.copy(), t3._morph.copy())
        S = as_process(renamed, "S")
        total = sum_processes(T, S)
        assert total.machine.n_states == 3
        assert fdd_distance(total, scale_process(2.0, T), 5) < 1e-12
        assert fdd_distance(total, sum_processes(S, T), 5) < 1e-12

    def test_split_pair_inverse_tracks_offset_class(self, t3):
        # with no merging word, a machine and its inverse synchronize onto
        # different states, so the tracked sum follows an offset class and
        # is a valid process, not the zero process: the exact inverse law
        # belongs to machines whose belief collapses completely
        T = as_process(t3, "T")
        inv = sum_processes(T, scale_process(-1.0, T))
        assert validate(inv.machine).valid
        assert inv.machine.n_states == 3


class TestVectorSpaceLaws:
    @pytest.mark.parametrize("alpha", [-2.0, -1.0, 0.1, 0.5, 2.0])
    def test_distributivity(self, G, M, alpha):
        lhs = scale_process(alpha, sum_processes(G, M))
        rhs = sum_processes(scale_process(alpha, G), scale_process(alpha, M))
        assert fdd_distance(lhs, rhs, 5) < 1e-9

    @pytest.mark.parametrize("alpha,beta", [(-2.0, 0.5), (0.1, 2.0), (0.5, 0.5)])
    def test_scaling_composes(self, G, alpha, beta):
        lhs = scale_process(alpha * beta, G)
        rhs = scale_process(alpha, scale_process(beta, G))
        assert fdd_distance(lhs, rhs, 5) < 1e-9


class TestInnerExact:
    def test_g2_self_inner_frozen(self, G):
        est = inner_exact(G, G)
        assert est.mode == "exact" and est.std_error == 0.0
        assert est.value == pytest.approx(exact_g2_self_inner(), abs=1e-12)
        assert est.value == pytest.approx(1.3198628599447695, abs=1e-12)

    def test_zero_process_annihilates(self, G, M):
        z = zero_process(G.alphabet)
        for p in (G, M):
            assert inner_exact(p, z).value == 0.0

    @pytest.mark.parametrize("alpha", [-1.0, 0.1, 2.0])
    def test_scaling_pulls_out(self, G, M, alpha):
        base = inner_exact(G, M).value
        scaled = inner_exact(scale_process(alpha, G), M).value
        assert abs(scaled - alpha * base) < 1e-9

    def test_bilinear_in_both_slots(self, G, M):
        base = inner_exact(G, M).value
        for a, b in [(0.1, 2.0), (-1.0, 0.5), (2.0, 2.0)]:
            v = inner_exact(scale_process(a, G), scale_process(b, M)).value
            assert abs(v - a * b * base) < 1e-9

    def test_additivity(self, G, M):
        w = scale_process(0.5, G)
        lhs = inner_exact(sum_processes(G, M), w).value
        rhs = inner_exact(G, w).value + inner_exact(M, w).value
        assert abs(lhs - rhs) < 1e-8

    def test_self_inner_restricts_to_reachable_classes(self, t3):
        # the full pair chain of the rotation machine with itself splits into
        # three classes (the state offset never changes), but a self walk
        # starts synchronized on the diagonal; there the chain is doubly
        # stochastic, so the oracle is the plain average of the row norms
        T = as_process(t3, "T")
        expected = (
            math.log(0.6 / 0.4) ** 2 + math.log(0.25 / 0.75) ** 2 + math.log(0.7 / 0.3) ** 2
        ) / 3.0
        assert inner_exact(T, T).value == pytest.approx(expected, abs=1e-12)

    def test_collapsing_ternary_self_inner_agrees_with_mc(self, u3):
        # U3 has a merging symbol, so the synchronized-state idealization
        # behind the closed form matches the sampled walks
        U = as_process(u3, "U")
        est = inner_mc(U, U, walk_length=4000, repeats=8, seed=21)
        assert abs(est.value - inner_exact(U, U).value) <= 4.0 * est.std_error

    def test_unsyncable_cross_pair_raises_depth_exceeded(self):
        from procgeom import DepthExceeded, Pfsa, ProcessHandle

        def perm(names):
            a, b = names
            return Pfsa(
                ["0", "1"],
                names,
                {a: {"0": b, "1": a}, b: {"0": a, "1": b}},
                {a: [0.5, 0.5], b: [0.5, 0.5]},
            )

        # bypass normal form: uniform rows freeze the beliefs, the split
        # pair chain needs a synchronized start, and none can be found
        bad1 = ProcessHandle(machine=perm(["p", "q"]), label="perm1")
        bad2 = ProcessHandle(machine=perm(["r", "s"]), label="perm2")
        with pytest.raises(DepthExceeded):
            inner_exact(bad1, bad2)

    def test_symmetry(self, G, M):
        assert inner_exact(G, M).value == pytest.approx(inner_exact(M, G).value, abs=1e-12)


class TestInnerMc:
    def test_matches_exact_within_four_std_errors(self, G, M):
        pairs = [(G, G), (G, scale_process(-1.0, G)), (G, M)]
        for p, q in pairs:
            est = inner_mc(p, q, walk_length=4000, repeats=8, seed=5)
            exact = inner_exact(p, q).value
            assert abs(est.value - exact) <= 4.0 * est.std_error

    def test_zero_process_gives_exact_zero(self, G):
        est = inner_mc(G, zero_process(G.alphabet), walk_length=500, repeats=4, seed=0)
        assert est.value == 0.0 and est.std_error == 0.0

    def test_negation_flips_sign(self, G):
        a = inner_mc(G, G, walk_length=4000, repeats=8, seed=3)
        b = inner_mc(G, scale_process(-1.0, G), walk_length=4000, repeats=8, seed=9)
        combined = math.hypot(a.std_error, b.std_error)
        assert abs(a.value + b.value) <= 3.0 * combined

    def test_bit_reproducible(self, G, M):
        a = inner_mc(G, M, walk_length=1000, repeats=4, seed=123)
        b = inner_mc(G, M, walk_length=1000, repeats=4, seed=123)
        assert a.value == b.value and a.std_error == b.std_error
        c = inner_mc(G, M, walk_length=1000, repeats=4, seed=124)
        assert c.value != a.value

    def test_estimate_metadata(self, G):
        est = inner_mc(G, G, walk_length=800, repeats=5, seed=1)
        assert est.mode == "monte-carlo"
        assert est.walks == 5 and est.walk_length == 800
        assert est.std_error > 0.0

    def test_dispatcher(self, G, M):
        assert inner(G, M).value == inner_exact(G, M).value
        mc = inner(G, M, mode="mc", walk_length=500, repeats=4, seed=2)
        assert mc.mode == "monte-carlo"


class TestNormAndAngle:
    def test_norm_scales_linearly(self, G):
        base = process_norm(G)
        for alpha in (2.0, 4.0, 8.0):
            assert process_norm(scale_process(alpha, G)) == pytest.approx(alpha * base, rel=1e-12)

    def test_norm_growth_is_monotone(self, G):
        norms = [process_norm(scale_process(a, G)) for a in (1.0, 2.0, 4.0, 8.0)]
        assert all(a < b for a, b in zip(norms, norms[1:]))

    def test_opposite_processes_at_pi(self, G):
        assert angle(G, scale_process(-1.0, G)) == pytest.approx(math.pi, abs=1e-9)

    def test_scaled_copy_at_zero(self, G):
        assert angle(G, scale_process(0.1, G)) == pytest.approx(0.0, abs=1e-9)

    def test_zero_norm_rejected(self, G):
        with pytest.raises(ZeroNorm):
            angle(G, zero_process(G.alphabet))

    @pytest.mark.parametrize("alpha,beta", [(0.1, 0.5), (2.0, 0.1), (0.5, 2.0)])
    def test_positive_scaling_leaves_angle_invariant(self, G, M, alpha, beta):
        base = angle(G, M)
        scaled = angle(scale_process(alpha, G), scale_process(beta, M))
        assert abs(scaled - base) < 1e-9

    def test_mc_angle_consistent_with_exact(self, G, M):
        est = angle_mc_estimate(G, M, walk_length=4000, repeats=8, seed=17)
        exact_cos = inner_exact(G, M).value / (process_norm(G) * process_norm(M))
        assert abs(est.cos - exact_cos) <= 4.0 * est.cos_std_error
        assert est.angle == pytest.approx(math.acos(max(-1.0, min(1.0, est.cos))), abs=1e-15)

    def test_mc_angle_zero_norm_rejected(self, G):
        with pytest.raises(ZeroNorm):
            angle(G, zero_process(G.alphabet), mode="mc", walk_length=200, repeats=3, seed=0)
