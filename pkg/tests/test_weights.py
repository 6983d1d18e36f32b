import random
from fractions import Fraction

import pytest

from bipolar_maps.walks import EDGE, FaceMove
from bipolar_maps.weights import (FaceWeights, direct_distribution, feasible,
                                  period, preset_weights, solve_lambda,
                                  step_distribution, theory_stats,
                                  weights_from_text)


def test_lambda_presets():
    assert abs(solve_lambda(preset_weights("uniform")) - 0.5) <= 1e-12
    assert abs(solve_lambda(preset_weights("tri")) - 1.0) <= 1e-12
    assert abs(solve_lambda(preset_weights("quad")) - 3 ** -0.25) <= 1e-12
    assert abs(solve_lambda(preset_weights("kgon:5")) - 6 ** (-1 / 5)) <= 1e-12


def test_no_zero_drift():
    with pytest.raises(ValueError):
        FaceWeights({2: Fraction(1)})  # no degree >= 3 with positive weight


def test_triangulation_distribution():
    d = step_distribution(preset_weights("tri"))
    assert abs(d.norm - 3.0) <= 1e-12
    assert abs(d.p_edge - 1 / 3) <= 1e-12
    assert abs(d.face_probs[3] - 1 / 3) <= 1e-12


def test_uniform_distribution_values():
    d = step_distribution(preset_weights("uniform"))
    assert abs(d.norm - 8.0) <= 1e-12
    assert abs(d.p_edge - 0.5) <= 1e-12
    for i in range(4):
        for j in range(4):
            assert abs(d.prob_of_move(FaceMove(i, j)) - 2.0 ** (-i - j - 3)) <= 1e-12
    assert abs(d.prob_of_move(EDGE) - 0.5) <= 1e-12


def test_probabilities_sum_to_one():
    for name in ("tri", "quad", "kgon:5", "kgon:7"):
        d = step_distribution(preset_weights(name))
        total = d.p_edge + sum((k - 1) * p for k, p in d.face_probs.items())
        assert abs(total - 1.0) <= 1e-12


def test_period():
    assert period(preset_weights("tri")) == 3
    assert period(preset_weights("quad")) == 2
    assert period(preset_weights("uniform")) == 1
    assert period(FaceWeights({4: 1, 7: 1})) == 1
    assert period(FaceWeights({6: 1, 9: 1})) == 3


def test_feasible_examples():
    tri = preset_weights("tri")
    assert feasible(tri, 0, 1, 3)[0]
    assert not feasible(tri, 0, 1, 4)[0]
    quad = preset_weights("quad")
    ok, reason = feasible(quad, 1, 0, 5)
    assert not ok and "odd" in reason
    assert feasible(quad, 0, 0, 5)[0]
    assert not feasible(quad, 0, 0, 6)[0]  # sharper than the even-b congruence


def test_theory_values_triangulation():
    ts = theory_stats(step_distribution(preset_weights("tri")))
    assert abs(ts.var_diff - 2.0) <= 1e-9
    assert abs(ts.var_sum - 2 / 3) <= 1e-9
    assert abs(ts.cov[0][0] - 2 / 3) <= 1e-9
    assert abs(ts.cov[0][1] + 1 / 3) <= 1e-9


def test_theory_values_uniform():
    ts = theory_stats(step_distribution(preset_weights("uniform")))
    assert abs(ts.var_diff - 6.0) <= 1e-6
    assert abs(ts.var_sum - 2.0) <= 1e-6
    assert abs(ts.ratio - 3.0) <= 1e-9


def test_quad_degree_law_mass_on_four():
    ts = theory_stats(step_distribution(preset_weights("quad")))
    assert abs(ts.face_degree_law[4] - 1.0) <= 1e-9


def test_variance_identity_random_supports():
    rng = random.Random(7)
    for _ in range(100):
        supp = {}
        for k in range(2, rng.randint(3, 12)):
            if rng.random() < 0.6:
                supp[k] = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        supp[rng.randint(3, 12)] = Fraction(rng.randint(1, 9))
        ts = theory_stats(step_distribution(FaceWeights(supp)))
        assert abs(ts.var_diff - 3 * ts.var_sum) <= 1e-9 * max(1.0, ts.var_diff)


def test_reflection_symmetry_of_measures():
    # face moves of one degree share a probability, so nu(-i,j) = nu(-j,i)
    d = step_distribution(preset_weights("kgon:6"))
    for i in range(5):
        j = 4 - i
        assert d.prob_of_move(FaceMove(i, j)) == d.prob_of_move(FaceMove(j, i))


def test_direct_distribution_validation():
    # antidiagonal-heavy measure: valid, ratio above 3
    nu = {(1, -1): 0.45, (-1, 1): 0.35, (-1, 0): 0.1, (0, 1): 0.1}
    d = direct_distribution(nu)
    ts = theory_stats(d)
    assert ts.ratio > 3.0
    with pytest.raises(ValueError):
        direct_distribution({(1, -1): 0.6, (-1, 0): 0.2, (0, 1): 0.2})  # drift
    with pytest.raises(ValueError):
        direct_distribution({(1, -1): 0.5, (-2, 0): 0.3, (0, 2): 0.2})  # asymmetric


def test_weights_file_parsing():
    w = weights_from_text("# comment\n3 1\n5 0.5\n")
    assert w.support == {3: Fraction(1), 5: Fraction(1, 2)}
    assert weights_from_text("uniform\n").uniform
    with pytest.raises(ValueError):
        weights_from_text("uniform\n3 1\n")


def test_period_divides_return_times():
    # unconstrained-walk return times to the origin, by plane DP up to 60 steps
    def return_times(w, horizon=60):
        moves = [mv.delta for mv, _ in w.moves()]
        reach = {(0, 0)}
        times = []
        for t in range(1, horizon + 1):
            reach = {(x + dx, y + dy) for (x, y) in reach for dx, dy in moves
                     if abs(x + dx) <= horizon and abs(y + dy) <= horizon}
            if (0, 0) in reach:
                times.append(t)
        return times

    for name in ("tri", "quad", "kgon:5"):
        w = preset_weights(name)
        b = period(w)
        times = return_times(w)
        assert times, name
        assert all(t % b == 0 for t in times)
        # every large enough multiple of b up to the horizon is attained
        attained = set(times)
        missing = [t for t in range(b, 61, b) if t not in attained]
        assert not missing or max(missing) < 40, (name, sorted(attained))


def test_quad_normalizer():
    d = step_distribution(preset_weights("quad"))
    lam = d.lam
    assert abs(d.norm - (lam ** -2 + 3 * lam ** 2)) <= 1e-9
    assert abs(d.p_edge - lam ** -2 / d.norm) <= 1e-12
