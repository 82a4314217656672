import math

import numpy as np
import pytest

from bec_qpt.continuation import (
    bifurcation_diagram,
    branch_separation,
    continue_branch,
    modes_needed,
    nodal_count,
    state_census,
)
from bec_qpt.core import Domain, PhysicalParams, particle_number
from bec_qpt.errors import InvalidInputError, WrongSideError
from bec_qpt.reduced import critical_beta, gamma
from bec_qpt.spectral import analytic_modes, numeric_modes


@pytest.fixture(scope="module")
def modes(std):
    return numeric_modes(std[1], 4)


@pytest.fixture(scope="module")
def diagram(std):
    p, d = std
    return bifurcation_diagram(-10.0, 0.0, 3, p, d)


def test_nodal_count_examples():
    d = Domain(np.pi, 999)
    e = analytic_modes(d, 4)
    assert nodal_count(e[0].shape) == 0
    assert nodal_count(e[3].shape) == 3
    assert nodal_count(d.zeros()) == 0
    assert nodal_count(np.array([1.0, 1e-12, -1e-12, 1.0])) == 0


def test_branch_k1(std, modes):
    p, d = std
    b = continue_branch(modes[0], "+", -3.0, 0.05, p, d)
    assert 38 <= len(b.points) <= 42
    assert set(b.nodal_counts) == {0}
    assert b.points[-1].beta == -3.0
    assert np.all(np.diff(b.betas) < 0)
    for pt in b.points:
        assert pt.solution.residual_norm <= 1e-10


def test_branch_k2_has_one_node(std, modes):
    p, d = std
    b = continue_branch(modes[1], "-", -6.0, 0.05, p, d)
    assert set(b.nodal_counts) == {1}
    assert np.all(b.amplitudes < 0)


@pytest.mark.parametrize("k", [1, 2])
def test_first_point_follows_leading_order(std, modes, k):
    p, d = std
    m = modes[k - 1]
    bk = critical_beta(m, p).beta_k
    b = continue_branch(m, "+", bk - 0.05, 0.05, p, d)  # delta_0 = 0.005
    first = b.points[0]
    assert bk - first.beta == pytest.approx(0.005, rel=1e-9)
    assert first.amplitude == pytest.approx(math.sqrt(0.005 / (p.g * m.alpha)), rel=0.02)


def test_wrong_side_rejected(std, modes):
    p, d = std
    with pytest.raises(WrongSideError):
        continue_branch(modes[0], "+", -0.5, 0.05, p, d)
    with pytest.raises(WrongSideError):
        continue_branch(modes[0], "+", -1.5, 0.05, PhysicalParams(g=-1.0), d)


def test_attractive_branch_runs_upward(std, modes):
    _, d = std
    p = PhysicalParams(g=-1.0)
    b = continue_branch(modes[1], "+", -3.0, 0.05, p, d)
    assert np.all(np.diff(b.betas) > 0)
    assert set(b.nodal_counts) == {1}
    assert np.all(np.diff(np.abs(b.amplitudes)) > 0)


def test_separation_of_distinct_modes(std, modes):
    p, d = std
    b1 = continue_branch(modes[0], "+", -6.0, 0.05, p, d)
    b2 = continue_branch(modes[1], "+", -6.0, 0.05, p, d)
    b1.points = [pt for pt in b1.points if -6.0 <= pt.beta <= -4.1]
    b2.points = [pt for pt in b2.points if -6.0 <= pt.beta <= -4.1]
    dist, overlap = branch_separation(b1, b2)
    assert overlap and dist > 0.1


def test_separation_of_pitchfork_pair(std, modes):
    p, d = std
    plus = continue_branch(modes[0], "+", -2.0, 0.05, p, d)
    minus = continue_branch(modes[0], "-", -2.0, 0.05, p, d)
    dist, _ = branch_separation(plus, minus)
    min_norm = min(math.sqrt(pt.N) for pt in plus.points)
    assert dist == pytest.approx(2 * min_norm, rel=1e-12)
    assert dist == pytest.approx(2 * np.abs(plus.amplitudes).min(), rel=0.01)
    assert branch_separation(plus, plus) == (0.0, True)


def test_separation_without_overlap(std, modes):
    p, d = std
    b1 = continue_branch(modes[0], "+", -1.5, 0.05, p, d)
    b3 = continue_branch(modes[2], "+", -9.5, 0.05, p, d)
    assert branch_separation(b1, b3) == (math.inf, False)


def test_census_examples(std):
    p, d = std
    r = state_census(-1.5, 3, p, d)
    assert (r.j, r.expected_min) == (1, 2) and r.found_count >= 2 and r.ok and r.proven
    r = state_census(-0.5, 3, p, d)
    assert (r.j, r.found_count) == (0, 0)
    r = state_census(-10.0, 4, p, d)
    assert r.j == 3 and r.found_count >= 6
    assert sorted({s.label[0] for s in r.solutions}) == [1, 2, 3]


def test_census_needs_enough_modes(std):
    p, d = std
    with pytest.raises(InvalidInputError):
        state_census(-10.0, 3, p, d)
    assert modes_needed(-10.0, p, d) == 4
    assert modes_needed(-9.5, p, d) == 4
    assert modes_needed(-3.0, p, d) == 2


def test_census_attractive_is_flagged(std):
    _, d = std
    r = state_census(-2.0, 3, PhysicalParams(g=-1.0), d)
    assert r.j == 2 and r.found_count >= 4
    assert not r.proven


def test_diagram_structure(std, diagram):
    p, d = std
    assert not diagram.errors
    assert [b.label for b in diagram.branches] == ["1+", "1-", "2+", "2-", "3+", "3-"]
    for b in diagram.branches:
        onset = -(b.k**2)
        assert b.beta_k == pytest.approx(onset, abs=1e-3)
        assert 0 < b.beta_k - b.betas[0] <= 0.05 + 1e-12
        assert b.betas[-1] == -10.0
        assert set(b.nodal_counts) == {b.k - 1}


def test_diagram_pitchfork_symmetry(diagram):
    by = {b.label: b for b in diagram.branches}
    for k in (1, 2, 3):
        np.testing.assert_array_equal(by[f"{k}-"].amplitudes, -by[f"{k}+"].amplitudes)
        np.testing.assert_array_equal(by[f"{k}-"].betas, by[f"{k}+"].betas)


def test_diagram_empty_above_first_critical_point(std):
    p, d = std
    dg = bifurcation_diagram(-0.5, 0.0, 1, p, d)
    assert dg.branches == [] and dg.rows() == [] and not dg.errors
    with pytest.raises(InvalidInputError):
        bifurcation_diagram(0.0, -1.0, 1, p, d)


def test_diagram_rows(diagram):
    rows = diagram.rows()
    assert len(rows) == sum(len(b.points) for b in diagram.branches)
    k, sign, beta, amp, N, H, nodes, res = rows[0]
    assert (k, sign, nodes) == (1, "+", 0)
    assert N > 0 and res <= 1e-10


def test_leading_order_consistency_near_onset(std, diagram):
    p, d = std
    modes = numeric_modes(d, 3)
    for b in diagram.branches:
        m = modes[b.k - 1]
        for pt in b.points[:3]:
            gam = gamma(m, pt.beta, p)
            assert abs(pt.amplitude**2 * p.g * m.alpha + gam) <= 0.1 * abs(gam)


def test_amplitude_monotone(diagram):
    for b in diagram.branches:
        assert np.all(np.diff(np.abs(b.amplitudes)) >= 0)


def test_branches_pairwise_separated(diagram):
    br = diagram.branches
    for i, a in enumerate(br):
        for b in br[i + 1:]:
            dist, overlap = branch_separation(a, b, exclude_onset=0.01)
            assert overlap and dist > 1e-3


def test_amplitude_grows_like_sqrt_then_stays_finite(std, diagram):
    p, d = std
    b = diagram.branches[0]
    assert np.all(np.isfinite(b.amplitudes))
    # flat-top limit for g > 0: |phi| <= sqrt(-beta/g) by the maximum principle
    for pt in b.points:
        assert np.max(np.abs(pt.solution.phi)) <= math.sqrt(-pt.beta / p.g) + 1e-9
    assert particle_number(b.points[-1].solution.phi, d) < -b.points[-1].beta * d.length


@pytest.mark.parametrize("beta", [-1.01, -3.0, -4.2, -8.0, -9.2, -12.0])
def test_census_sound(std, beta):
    p, d = std
    r = state_census(beta, modes_needed(beta, p, d), p, d)
    assert r.found_count >= r.expected_min


def test_branches_continue_far_from_onset(std, modes):
    p, d = std
    for m in modes[:2]:
        br = continue_branch(m, "+", -40.0, 0.1, p, d)
        assert br.points[-1].beta == pytest.approx(-40.0)
        assert set(br.nodal_counts) == {m.k - 1}
        assert all(pt.solution.residual_norm <= pt.solution.tolerance for pt in br.points)
        assert np.all(np.diff(br.amplitudes) > 0)


def test_census_far_from_onset(std):
    p, d = std
    rep = state_census(-20.0, 5, p, d)
    assert rep.ok and rep.found_count == 8
    assert sorted(s.label for s in rep.solutions) == sorted((k, sg) for k in range(1, 5) for sg in "+-")


def test_census_falls_back_to_continuation(std):
    # at beta = -40 several one-mode seeds no longer converge to their branch
    p, d = std
    K = modes_needed(-40.0, p, d)
    rep = state_census(-40.0, K, p, d)
    assert rep.ok and rep.found_count == 12
    shapes = numeric_modes(d, K)
    for sol in rep.solutions:
        k, sg = sol.label
        assert nodal_count(sol.phi) == k - 1
        assert np.sign(sol.phi @ shapes[k - 1].shape) == (1 if sg == "+" else -1)
