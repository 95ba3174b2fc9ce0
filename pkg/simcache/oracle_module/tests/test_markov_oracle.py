import numpy as np
import pytest

from simcache.catalog_module import QModel, build_neighbor_index
from simcache.errors import ConfigurationError, StateSpaceError
from simcache.oracle_module import MarkovOracle, exact_hit_rate
from simcache.simulator_module import aggregate_replications, replication_seeds, simulate
from simcache.utilities.testing import makeLine, makePair, makeRandomCatalog
from simcache.workload_module import PopularityProfile, gen_requests


def test_pair_always_hits():
    pair = makePair(distance=1.)
    index = build_neighbor_index(pair, 1.)
    result = exact_hit_rate('sim-lru', index, QModel.sim_lru(1.), pair.rates, 1)
    assert result.hit_rate == pytest.approx(1., abs=1e-12)
    assert result.states == [(), (0,), (1,)]
    assert result.pi.sum() == pytest.approx(1., abs=1e-12)
    assert result.residual <= 1e-10


testSingleSlot_data = [
    [0.5, 0.3, 0.2],
    [0.25, 0.25, 0.25, 0.25],
    [0.9, 0.1]
]


@pytest.mark.parametrize("rates", testSingleSlot_data)
def test_lru_single_slot(rates):
    catalog = makeLine(np.arange(len(rates), dtype=np.float64), rates=rates)
    index = build_neighbor_index(catalog, 0.)
    result = exact_hit_rate('lru', index, QModel.exact(), catalog.rates, 1)
    assert result.hit_rate == pytest.approx(float(np.sum(np.square(rates))), abs=1e-10)
    np.testing.assert_allclose(result.o, rates, atol=1e-10)
    np.testing.assert_allclose(result.h, rates, atol=1e-10)


testFullCache_data = ['lru', 'sim-lru', 'rnd-lru']


@pytest.mark.parametrize("policy", testFullCache_data)
def test_capacity_at_catalog_size(policy):
    catalog = makeLine([0., 1., 3.], rates=[0.5, 0.3, 0.2])
    index = build_neighbor_index(catalog, 1.)
    q = QModel.from_string("1:0.5", 1.) if policy == 'rnd-lru' else QModel.sim_lru(1.)
    result = exact_hit_rate(policy, index, q, catalog.rates, 3)
    if policy == 'lru':
        assert result.hit_rate == pytest.approx(1., abs=1e-9)
    assert result.residual <= 1e-10
    assert result.pi.sum() == pytest.approx(1., abs=1e-12)


testLruEquivalence_data = [
    ('sim-lru', 0.5, None),
    ('rnd-lru', 1., "1:0")
]


@pytest.mark.parametrize(("policy", "d", "q_text"), testLruEquivalence_data)
def test_policies_reducing_to_lru(policy, d, q_text):
    catalog = makeLine([0., 1., 2., 3.], rates=[0.4, 0.3, 0.2, 0.1])
    index = build_neighbor_index(catalog, d)
    q = QModel.sim_lru(d) if q_text is None else QModel.from_string(q_text, d)
    lru = exact_hit_rate('lru', index, QModel.exact(), catalog.rates, 2)
    other = exact_hit_rate(policy, index, q, catalog.rates, 2)
    assert other.hit_rate == pytest.approx(lru.hit_rate, abs=1e-12)
    np.testing.assert_allclose(other.o, lru.o, atol=1e-12)


def test_occupancies_sum_to_capacity():
    catalog = makeRandomCatalog(5, seed=3)
    index = build_neighbor_index(catalog, 1.)
    result = exact_hit_rate('sim-lru', index, QModel.sim_lru(1.), catalog.rates, 2)
    assert result.o.sum() <= 2. + 1e-9
    assert np.all((result.o >= 0.) & (result.o <= 1. + 1e-12))
    assert result.hit_rate == pytest.approx(np.dot(catalog.rates, result.h), abs=1e-10)


def test_transitions_are_stochastic():
    catalog = makeLine([0., 1., 2.], rates=[0.5, 0.3, 0.2])
    index = build_neighbor_index(catalog, 1.)
    oracle = MarkovOracle('rnd-lru', index, QModel.from_string("1:0.4", 1.), catalog.rates, 2)
    for state in [(), (1,), (0, 2), (2, 0)]:
        total = sum(prob for _, _, prob, _ in oracle.transitions(state))
        assert total == pytest.approx(1., abs=1e-12)


def test_state_space_cap():
    catalog = makeLine(np.arange(6.))
    index = build_neighbor_index(catalog, 0.)
    with pytest.raises(StateSpaceError):
        exact_hit_rate('lru', index, QModel.exact(), catalog.rates, 3, max_states=50)


def test_config_file_limits(tmp_path):
    config_file = tmp_path / "oracle.yaml"
    config_file.write_text("oracle_max_states : 50\noracle_tolerance : 1.0e-9\n")
    catalog = makeLine(np.arange(6.))
    index = build_neighbor_index(catalog, 0.)
    oracle = MarkovOracle('lru', index, QModel.exact(), catalog.rates, 3, config_file=str(config_file))
    assert oracle.max_states == 50
    assert oracle.tolerance == 1e-9
    assert oracle.max_iterations == MarkovOracle('lru', index, QModel.exact(), catalog.rates, 3).max_iterations
    with pytest.raises(StateSpaceError):
        oracle.solve()


testBadOracle_data = [('fifo', 1), ('lru', 0)]


@pytest.mark.parametrize(("policy", "C"), testBadOracle_data)
def test_bad_oracle(pair, policy, C):
    index = build_neighbor_index(pair, 1.)
    with pytest.raises(ConfigurationError):
        MarkovOracle(policy, index, QModel.sim_lru(1.), pair.rates, C)


def test_simulation_close_to_exact():
    catalog = makeRandomCatalog(5, seed=8)
    index = build_neighbor_index(catalog, 1.)
    q = QModel.from_string("0.5:0.8,1:0.3", 1.)
    exact = exact_hit_rate('rnd-lru', index, q, catalog.rates, 2)
    stream = gen_requests(PopularityProfile(catalog.rates), 200000, 5)
    result = simulate('rnd-lru', index, q, 2, stream, warmup_fraction=0.01, seed=6)
    assert result.hit_rate == pytest.approx(exact.hit_rate, abs=0.01)
    np.testing.assert_allclose(result.occupancy, exact.o, atol=0.02)


# (policy, N, C, d, q-map, catalog seed)
testOracleBattery_data = [
    ('lru', 4, 2, 1., None, 1),
    ('lru', 6, 3, 1., None, 2),
    ('sim-lru', 3, 1, 1., None, 3),
    ('sim-lru', 5, 2, 1., None, 4),
    ('sim-lru', 6, 3, 1.5, None, 5),
    ('sim-lru', 6, 2, 0.8, None, 6),
    ('rnd-lru', 4, 1, 1., "1:0.5", 7),
    ('rnd-lru', 5, 2, 1.5, "0.5:0.9,1:0.5,1.5:0.2", 8),
    ('rnd-lru', 6, 3, 1., "0.5:1,1:0.25", 9),
    ('rnd-lru', 6, 2, 2., "1:0.75,2:0.5", 10)
]


@pytest.mark.veryslow
@pytest.mark.parametrize(("policy", "n_items", "C", "d", "q_text", "seed"), testOracleBattery_data)
def test_simulation_interval_contains_exact(policy, n_items, C, d, q_text, seed):
    catalog = makeRandomCatalog(n_items, seed=seed)
    index = build_neighbor_index(catalog, d)
    if policy == 'lru':
        q = QModel.exact()
    elif policy == 'sim-lru':
        q = QModel.sim_lru(d)
    else:
        q = QModel.from_string(q_text, d)
    exact = exact_hit_rate(policy, index, q, catalog.rates, C)
    profile = PopularityProfile(catalog.rates)
    runs = [simulate(policy, index, q, C, gen_requests(profile, 1000000, stream_seed), warmup_fraction=0.001,
                     seed=draw_seed)
            for stream_seed, draw_seed in replication_seeds(seed, 10)]
    summary = aggregate_replications(runs)
    assert summary.ci_low <= exact.hit_rate <= summary.ci_high
