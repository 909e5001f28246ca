import numpy as np
import pytest

from swarmcast.asymptotics import (
    LeaderSet,
    collective_speed_beta,
    consensus_alpha,
    deviation_gamma,
    find_equivalent_agents,
    predict,
)
from swarmcast.errors import DisconnectedGraphError, SizeLimitError
from swarmcast.goldens import (
    EXAMPLE_A,
    EXAMPLE_A_LEADERS,
    EXAMPLE_B,
    EXAMPLE_B_LEADERS,
    EXAMPLE_C,
    EXAMPLE_C_LEADERS,
)
from swarmcast.graphs import InfluenceModel, VisibilityGraph, laplacian
from swarmcast.random_graphs import random_connected_graph, random_leaders
from swarmcast.simulate import IntervalSpec, exact_state
from swarmcast.spectral import spectrum

UNIFORM = InfluenceModel.UNIFORM
SCALED = InfluenceModel.SCALED


def complete_graph(n):
    return VisibilityGraph(
        n=n, edges=frozenset((i, j) for i in range(n) for j in range(i + 1, n))
    )


# -- gathering point -----------------------------------------------------------


def test_alpha_coincident_point():
    g = complete_graph(4)
    q = [7.5, -2.25]
    x0 = [q[0]] * 4
    y0 = [q[1]] * 4
    for model in (UNIFORM, SCALED):
        assert np.allclose(consensus_alpha(g, model, x0, y0), q)


def test_alpha_example_a_scaled_weighted_average():
    # degree-weighted mean: d^T x0 / sum(d) = 31/10 for x0 = 1..5
    a = consensus_alpha(EXAMPLE_A, SCALED, [1, 2, 3, 4, 5], [0] * 5)
    assert a[0] == pytest.approx(3.1, abs=1e-12)
    # long-horizon oracle: zero-input run settles at alpha
    spec = IntervalSpec(0.0, np.zeros(2), LeaderSet.empty(), EXAMPLE_A, SCALED)
    far = exact_state(spec, [1, 2, 3, 4, 5], [0] * 5, 200.0)
    assert np.abs(far.x - a[0]).max() < 1e-10


def test_alpha_complete_scaled_is_mean(rng):
    g = complete_graph(5)
    x0 = rng.normal(size=5)
    y0 = rng.normal(size=5)
    assert np.allclose(
        consensus_alpha(g, SCALED, x0, y0), [x0.mean(), y0.mean()], atol=1e-12
    )


def test_alpha_disconnected_refuses():
    g = VisibilityGraph(n=4, edges=frozenset({(0, 1), (2, 3)}))
    with pytest.raises(DisconnectedGraphError):
        consensus_alpha(g, UNIFORM, np.zeros(4), np.zeros(4))


# -- speed fraction --------------------------------------------------------------


def test_beta_uniform_single_leader():
    assert collective_speed_beta(complete_graph(5), UNIFORM, LeaderSet.of([0])) == 0.2


def test_beta_example_a_scaled_degree_weighted():
    # leader is the degree-3 agent; degrees sum to 10
    beta = collective_speed_beta(EXAMPLE_A, SCALED, EXAMPLE_A_LEADERS)
    assert beta == pytest.approx(0.3, abs=1e-12)
    # simulation-slope oracle
    spec = IntervalSpec(
        0.0, np.array([1.0, 0.0]), EXAMPLE_A_LEADERS, EXAMPLE_A, SCALED
    )
    lam2 = spectrum(EXAMPLE_A, SCALED).eigenvalues[1]
    ts = np.linspace(30 / lam2, 60 / lam2, 10)
    means = [exact_state(spec, np.zeros(5), np.zeros(5), float(t)).x.mean() for t in ts]
    slope = np.polyfit(ts, means, 1)[0]
    assert slope == pytest.approx(beta, rel=1e-6)


def test_beta_everyone_or_nobody():
    g = EXAMPLE_B
    assert collective_speed_beta(g, UNIFORM, LeaderSet.of(range(5))) == 1.0
    assert collective_speed_beta(g, SCALED, LeaderSet.of(range(5))) == 1.0
    assert collective_speed_beta(g, UNIFORM, LeaderSet.empty()) == 0.0


# -- deviations -------------------------------------------------------------------


def test_gamma_example_a_uniform_golden():
    gam = deviation_gamma(EXAMPLE_A, UNIFORM, EXAMPLE_A_LEADERS)
    assert np.abs(gam - [-0.06, -0.16, -0.06, 0.04, 0.24]).max() < 5e-4
    # oracle: pseudoinverse of the Laplacian applied to the indicator
    pinv = np.linalg.pinv(laplacian(EXAMPLE_A, UNIFORM))
    assert np.abs(gam - pinv @ EXAMPLE_A_LEADERS.indicator(5)).max() < 1e-10


def test_gamma_example_a_scaled_published_convention():
    gam = deviation_gamma(
        EXAMPLE_A, SCALED, EXAMPLE_A_LEADERS, left_normalization="unit"
    )
    assert np.abs(gam - [-0.2526, -0.5142, -0.2526, 0.2952, 0.5812]).max() < 5e-4


def test_gamma_example_b_goldens():
    gu = deviation_gamma(EXAMPLE_B, UNIFORM, EXAMPLE_B_LEADERS)
    assert np.abs(gu - [-0.52, -0.12, 0.08, 0.28, 0.28]).max() < 5e-4
    gs = deviation_gamma(
        EXAMPLE_B, SCALED, EXAMPLE_B_LEADERS, left_normalization="unit"
    )
    assert np.abs(gs - [-0.6857, -0.3368, 0.0284, 0.4098, 0.4098]).max() < 5e-4


def test_gamma_example_c_scaled_is_four_times_uniform():
    gu = deviation_gamma(EXAMPLE_C, UNIFORM, EXAMPLE_C_LEADERS)
    gs = deviation_gamma(EXAMPLE_C, SCALED, EXAMPLE_C_LEADERS)
    assert np.abs(gu - [-0.08, -0.08, -0.08, 0.12, 0.12]).max() < 5e-4
    assert np.abs(gs - 4 * gu).max() < 1e-9


def test_gamma_zero_sums(rng):
    for _ in range(60):
        g = random_connected_graph(rng)
        leaders = random_leaders(rng, g.n)
        gu = deviation_gamma(g, UNIFORM, leaders)
        assert abs(gu.sum()) < 1e-9
        gs = deviation_gamma(g, SCALED, leaders)
        assert abs(g.degree_vector() @ gs) < 1e-9
        # the unit-normalized flavor satisfies the same weighted identity
        gsu = deviation_gamma(g, SCALED, leaders, left_normalization="unit")
        assert abs(g.degree_vector() @ gsu) < 1e-9


def test_gamma_unit_equals_biorthogonal_for_symmetric_cases(rng):
    # uniform always; scaled on complete graphs (symmetric Laplacian)
    g = complete_graph(6)
    leaders = LeaderSet.of([1, 4])
    for model in (UNIFORM, SCALED):
        a = deviation_gamma(g, model, leaders)
        b = deviation_gamma(g, model, leaders, left_normalization="unit")
        assert np.abs(a - b).max() < 1e-9


def test_gamma_all_leaders_zero():
    for g in (EXAMPLE_A, EXAMPLE_B, complete_graph(6)):
        for model in (UNIFORM, SCALED):
            gam = deviation_gamma(g, model, LeaderSet.of(range(g.n)))
            assert np.abs(gam).max() < 1e-9


def test_complete_graph_role_structure(rng):
    for _ in range(20):
        n = int(rng.integers(3, 9))
        g = complete_graph(n)
        k = int(rng.integers(1, n))
        leaders = LeaderSet.of(rng.choice(n, size=k, replace=False).tolist())
        mem = leaders.sorted()
        fol = [v for v in range(n) if v not in leaders.members]
        gu = deviation_gamma(g, UNIFORM, leaders)
        assert np.ptp(gu[mem]) < 1e-9 and np.ptp(gu[fol]) < 1e-9
        assert gu[mem[0]] > 0 > gu[fol[0]]
        gs = deviation_gamma(g, SCALED, leaders)
        assert np.abs(gs - (n - 1) * gu).max() < 1e-9


# -- prediction bundle --------------------------------------------------------------


def test_predict_zero_input_degenerates():
    p = predict(EXAMPLE_A, UNIFORM, EXAMPLE_A_LEADERS, np.arange(5.0), np.zeros(5), [0, 0])
    pos = p.position_at(1000.0)
    assert np.allclose(pos, np.tile(p.alpha, (5, 1)))


def test_predict_example_b_uniform():
    p = predict(EXAMPLE_B, UNIFORM, EXAMPLE_B_LEADERS, np.zeros(5), np.zeros(5), [1, 0])
    assert np.abs(p.gamma - [-0.52, -0.12, 0.08, 0.28, 0.28]).max() < 5e-4
    assert p.beta == pytest.approx(0.4)


def test_predict_all_leaders():
    p = predict(EXAMPLE_A, SCALED, LeaderSet.of(range(5)), np.zeros(5), np.zeros(5), [2, 1])
    assert p.beta == 1.0
    assert np.abs(p.gamma).max() < 1e-9


def test_prediction_matches_long_run_simulation(rng):
    # independent oracle: the exact propagator far in the future
    for _ in range(50):
        g = random_connected_graph(rng, n=int(rng.integers(2, 9)))
        leaders = random_leaders(rng, g.n)
        model = UNIFORM if rng.random() < 0.5 else SCALED
        x0 = rng.uniform(-10, 10, size=g.n)
        y0 = rng.uniform(-10, 10, size=g.n)
        u = rng.uniform(-3, 3, size=2)
        p = predict(g, model, leaders, x0, y0, u)
        lam2 = spectrum(g, model).eigenvalues[1]
        T = 40.0 / lam2
        spec = IntervalSpec(0.0, u, leaders, g, model)
        st = exact_state(spec, x0, y0, T)
        tol_x = 1e-5 * (1 + abs(u[0]) * T)
        tol_y = 1e-5 * (1 + abs(u[1]) * T)
        expect = p.position_at(T)
        assert np.abs(st.x - expect[:, 0]).max() < tol_x
        assert np.abs(st.y - expect[:, 1]).max() < tol_y


# -- equivalence ---------------------------------------------------------------------


def test_equivalence_examples():
    assert find_equivalent_agents(EXAMPLE_A, EXAMPLE_A_LEADERS) == [[0, 2], [1], [3], [4]]
    assert find_equivalent_agents(EXAMPLE_B, EXAMPLE_B_LEADERS) == [[0], [1], [2], [3, 4]]
    assert find_equivalent_agents(EXAMPLE_C, EXAMPLE_C_LEADERS) == [[0, 1, 2], [3, 4]]


def test_equivalence_changes_with_leader():
    # moving the broadcast receiver breaks the symmetry between 0 and 2
    assert [0, 2] not in find_equivalent_agents(EXAMPLE_A, LeaderSet.of([0]))


def test_equivalence_size_cap():
    g = complete_graph(11)
    with pytest.raises(SizeLimitError):
        find_equivalent_agents(g, LeaderSet.of([0]))


def test_equivalent_agents_share_gamma(rng):
    for _ in range(30):
        g = random_connected_graph(rng, n=int(rng.integers(3, 8)))
        leaders = random_leaders(rng, g.n)
        classes = find_equivalent_agents(g, leaders)
        for model in (UNIFORM, SCALED):
            gam = deviation_gamma(g, model, leaders)
            for cls in classes:
                assert gam[cls].max() - gam[cls].min() < 1e-9
