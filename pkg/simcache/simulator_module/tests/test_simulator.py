import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from simcache.baseline_module import lru_ttl
from simcache.catalog_module import Catalog, QModel, build_neighbor_index
from simcache.errors import ConfigurationError, SimulationInvariantError
from simcache.simulator_module import (CacheSimulator, CacheState, SimResult, aggregate_replications,
                                       replication_seeds, simulate)
from simcache.utilities.testing import makeLine, makePair, makeRandomCatalog
from simcache.workload_module import PopularityProfile, RequestStream, gen_requests, synth_grid_popularity


def referenceRun(policy, index, q, C, items, seed, warmup):
    """
    Plain list implementation of the three policies, sampling membership at
    every counted epoch.
    """
    draws = np.random.Generator(np.random.PCG64(seed)).random(len(items))
    cache = []
    hits = np.zeros(index.n_items, dtype=np.int64)
    presence = np.zeros(index.n_items, dtype=np.int64)
    for j, n in enumerate(items):
        if j >= warmup:
            for m in cache:
                presence[m] += 1
        row = [(n, 0.)] if policy == 'lru' else index.neighbor_list(n)
        server, dist = None, None
        for m, dist_m in row:
            if m in cache:
                server, dist = m, dist_m
                break
        if server is not None and (policy != 'rnd-lru' or draws[j] < q.probability(dist)):
            cache.remove(server)
            cache.insert(0, server)
            if j >= warmup:
                hits[n] += 1
        else:
            cache.insert(0, n)
            if len(cache) > C:
                cache.pop()
    return hits, presence


def test_pair_example():
    pair = makePair(distance=1.)
    index = build_neighbor_index(pair, 1.)
    result = simulate('sim-lru', index, QModel.sim_lru(1.), 1, RequestStream(items=[0, 1, 0, 1]))
    assert result.hits == 3
    assert result.hit_rate == 0.75
    np.testing.assert_array_equal(result.item_hits, [1, 2])
    np.testing.assert_array_equal(result.presence, [3, 0])
    np.testing.assert_array_equal(result.item_hit_probs, [0.5, 1.])


def test_item_hit_probs_unrequested_item():
    catalog = makeLine(np.arange(3.))
    index = build_neighbor_index(catalog, 0.5)
    result = simulate('lru', index, QModel.exact(), 2, RequestStream(items=[0, 0, 1]))
    np.testing.assert_array_equal(result.item_requests, [2, 1, 0])
    probs = result.item_hit_probs
    np.testing.assert_array_equal(probs[:2], [0.5, 0.])
    assert np.isnan(probs[2])


testExactOnly_data = [
    ('lru', 1., "1:1"),
    ('sim-lru', 0.5, "1:1"),
    ('rnd-lru', 2., "2:0")
]


@pytest.mark.parametrize(("policy", "d", "q_text"), testExactOnly_data)
def test_policies_without_approximate_hits_match_lru(policy, d, q_text):
    rates = np.random.default_rng(4).uniform(0.1, 1., size=30)
    catalog = makeLine(np.arange(30.), rates=rates)
    index = build_neighbor_index(catalog, d)
    stream = gen_requests(PopularityProfile(catalog.rates), 5000, 17)
    lru = simulate('lru', index, QModel.exact(), 5, stream, seed=1)
    other = simulate(policy, index, QModel.from_string(q_text, d), 5, stream, seed=2)
    np.testing.assert_array_equal(lru.item_hits, other.item_hits)
    np.testing.assert_array_equal(lru.presence, other.presence)


def test_rnd_with_unit_q_matches_sim():
    catalog = Catalog.from_grid(12, 12, synth_grid_popularity(12, 12, [(3, 3)], 1.5).probabilities)
    index = build_neighbor_index(catalog, 2.)
    stream = gen_requests(PopularityProfile(catalog.rates), 20000, 3)
    sim = simulate('sim-lru', index, QModel.sim_lru(2.), 10, stream, seed=5)
    rnd = simulate('rnd-lru', index, QModel.from_string("2:1", 2.), 10, stream, seed=6)
    np.testing.assert_array_equal(sim.item_hits, rnd.item_hits)
    np.testing.assert_array_equal(sim.presence, rnd.presence)


@pytest.mark.parametrize("policy", ['lru', 'sim-lru', 'rnd-lru'])
def test_second_pass_all_hits(policy):
    catalog = makeLine(np.arange(8) * 1.5)
    index = build_neighbor_index(catalog, 1.6)
    items = list(range(8)) * 2
    result = simulate(policy, index, QModel.from_string("1.6:1", 1.6), 8, RequestStream(items=items),
                      warmup_fraction=0.5, seed=3)
    assert result.counted == 8
    assert result.hit_rate == 1.


@settings(max_examples=30, deadline=None)
@given(policy=st.sampled_from(['lru', 'sim-lru', 'rnd-lru']), n_items=st.integers(2, 12),
       capacity=st.integers(1, 5), seed=st.integers(0, 2**32 - 1), warmup=st.sampled_from([0., 0.1, 0.5]),
       d=st.sampled_from([0.5, 1., 1.5, 2.]))
def test_matches_reference(policy, n_items, capacity, seed, warmup, d):
    catalog = makeRandomCatalog(n_items, seed=seed)
    index = build_neighbor_index(catalog, d)
    q = QModel.from_string("0.5:0.9,1:0.6,2:0.2", d) if policy == 'rnd-lru' else QModel.sim_lru(d)
    stream = gen_requests(PopularityProfile(catalog.rates), 400, seed)
    result = simulate(policy, index, q, capacity, stream, warmup_fraction=warmup, seed=seed + 1, debug=True)
    hits, presence = referenceRun(policy, index, q, capacity, stream.items.tolist(), seed + 1, result.warmup)
    np.testing.assert_array_equal(result.item_hits, hits)
    np.testing.assert_array_equal(result.presence, presence)
    assert result.hits <= result.counted
    assert np.all((result.occupancy >= 0.) & (result.occupancy <= 1.))
    assert result.presence.sum() <= capacity * result.counted


def test_debug_detects_separation_violation():
    pair = makePair(distance=1.)
    simulator = CacheSimulator('sim-lru', build_neighbor_index(pair, 1.), QModel.sim_lru(1.), 2, debug=True)
    cache = CacheState(2)
    cache.insert(0, 0)
    cache.insert(1, 0)
    with pytest.raises(SimulationInvariantError):
        simulator._check_insert(cache, 1)


def test_debug_grid_run():
    catalog = Catalog.from_grid(20, 20, synth_grid_popularity(20, 20, [(5, 5), (14, 14)], 2.5).probabilities)
    index = build_neighbor_index(catalog, 2.)
    stream = gen_requests(PopularityProfile(catalog.rates), 20000, 12)
    result = simulate('sim-lru', index, QModel.sim_lru(2.), 15, stream, seed=1, debug=True)
    assert 0. < result.hit_rate < 1.


@pytest.mark.slow
def test_separation_invariant_full_grid():
    catalog = Catalog.from_grid(100, 100, synth_grid_popularity(100, 100, [(24, 24), (74, 74)], 2.5).probabilities)
    index = build_neighbor_index(catalog, 2.)
    stream = gen_requests(PopularityProfile(catalog.rates), 1000000, 2)
    simulate('sim-lru', index, QModel.sim_lru(2.), 500, stream, seed=3, debug=True)


def test_lru_simulation_close_to_ttl_prediction():
    rates = 1. / np.arange(1, 201) ** 0.8
    catalog = makeLine(np.arange(200), rates=rates)
    index = build_neighbor_index(catalog, 0.)
    stream = gen_requests(PopularityProfile(catalog.rates), 200000, 6)
    result = simulate('lru', index, QModel.exact(), 20, stream, warmup_fraction=0.1)
    assert result.hit_rate == pytest.approx(lru_ttl(catalog.rates, 20).hit_rate, abs=0.01)


testBadSimulator_data = [
    ('fifo', 2, 0.),
    ('lru', 0, 0.),
    ('lru', 2, 1.),
    ('lru', 2, -0.1)
]


@pytest.mark.parametrize(("policy", "capacity", "warmup"), testBadSimulator_data)
def test_bad_simulator(pair, policy, capacity, warmup):
    index = build_neighbor_index(pair, 1.)
    with pytest.raises(ConfigurationError):
        simulate(policy, index, QModel.sim_lru(1.), capacity, RequestStream(items=[0, 1]), warmup_fraction=warmup)


def makeResult(hit_rate, config='c', requests=1000):
    hits = int(round(hit_rate * requests))
    return SimResult(requests, 0, [hits], [requests], [requests // 2], config=config)


testAggregate_data = [
    ([0.4, 0.6], 0.5, 1.96 * np.sqrt(0.02) / np.sqrt(2.)),
    ([0.3, 0.3], 0.3, 0.),
    ([0.5], 0.5, None),
    ([0.2, 0.4, 0.6], 0.4, 1.96 * 0.2 / np.sqrt(3.))
]


@pytest.mark.parametrize(("hit_rates", "mean", "half_width"), testAggregate_data)
def test_aggregate_replications(hit_rates, mean, half_width):
    summary = aggregate_replications([makeResult(h) for h in hit_rates])
    assert summary.mean == pytest.approx(mean, abs=1e-12)
    if half_width is None:
        assert summary.half_width is None
        assert not summary.has_ci
        assert summary.ci_low is None
    else:
        assert summary.half_width == pytest.approx(half_width, abs=1e-12)
        assert summary.ci_low == pytest.approx(mean - half_width, abs=1e-12)
    np.testing.assert_allclose(summary.occupancy, [0.5])


def test_aggregate_example_value():
    summary = aggregate_replications([makeResult(0.4), makeResult(0.6)])
    assert summary.half_width == pytest.approx(0.196, abs=1e-3)


def test_aggregate_mixed_configurations():
    with pytest.raises(ConfigurationError):
        aggregate_replications([makeResult(0.4, config='a'), makeResult(0.5, config='b')])
    with pytest.raises(ConfigurationError):
        aggregate_replications([])


def test_replication_seeds():
    seeds = replication_seeds(1234, 4)
    assert len(seeds) == 4
    assert seeds == replication_seeds(1234, 4)
    assert seeds[:2] == replication_seeds(1234, 2)
    assert len(set(s for pair in seeds for s in pair)) == 8
