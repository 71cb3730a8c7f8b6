import numpy as np
import pytest

from leadertrack.benchgen import (
    EventBenchConfig,
    KawadiaConfig,
    event_membership_history,
    generate_events,
    generate_kawadia,
)
from leadertrack.errors import ConfigError


def test_q_formula():
    assert KawadiaConfig(p=0.4, p_c=0.2).q == pytest.approx(0.1)
    assert KawadiaConfig(p=0.2, p_c=0.5).q == pytest.approx(0.2)


def test_kawadia_config_validation():
    with pytest.raises(ConfigError):
        KawadiaConfig(p=1.0, p_c=0.6).validate()
    with pytest.raises(ConfigError):
        KawadiaConfig(n=101).validate()
    with pytest.raises(ConfigError):
        KawadiaConfig.from_dict({"bogus": 1})


def test_kawadia_default_instance():
    net, truth = generate_kawadia(KawadiaConfig(seed=3))
    assert net.delta == 25
    assert len(set(truth.steps[0].values())) == 20
    sizes = np.bincount([int(c) for c in {str(v): str(v // 5) for v in range(100)}.values()])
    assert set(sizes.tolist()) == {5}
    for g, gt in zip(net, truth.for_network(net)):
        assert set(gt) == set(g.nodes)


def test_kawadia_background_static_and_dead_chain():
    net, _ = generate_kawadia(KawadiaConfig(p=0.0, seed=1, steps=5))
    assert all(g.adjacency == net[1].adjacency for g in net)
    net, _ = generate_kawadia(KawadiaConfig(seed=2, steps=6))
    size = 5

    def inter(g):
        return {(u, v) for u, v in g.edges() if int(net.symbols.label(u)) // size != int(net.symbols.label(v)) // size}

    assert all(inter(g) == inter(net[1]) for g in net)


def test_generators_deterministic():
    a = generate_kawadia(KawadiaConfig(seed=11, steps=4))
    b = generate_kawadia(KawadiaConfig(seed=11, steps=4))
    assert [g.sorted_edges() for g in a[0]] == [g.sorted_edges() for g in b[0]]
    c = generate_events(EventBenchConfig(event="merge_split", seed=5, steps=4))
    d = generate_events(EventBenchConfig(event="merge_split", seed=5, steps=4))
    assert c[1].steps == d[1].steps
    assert [g.sorted_edges() for g in c[0]] == [g.sorted_edges() for g in d[0]]


def test_event_config_validation():
    with pytest.raises(ConfigError):
        EventBenchConfig(event="explode").validate()
    with pytest.raises(ConfigError):
        EventBenchConfig(p_in=1.5).validate()


def test_zero_events_repeat_partition():
    net, truth = generate_events(EventBenchConfig(event="none", seed=1, steps=4, n_nodes=300))
    hist = event_membership_history(EventBenchConfig(event="none", seed=1, steps=4, n_nodes=300))
    assert all(h == hist[0] for h in hist)
    for other in ("birth_death", "merge_split", "expand_contract"):
        cfg = EventBenchConfig(event=other, event_count=0, seed=1, steps=4, n_nodes=300)
        hist = event_membership_history(cfg)
        assert all(h == hist[0] for h in hist)


def test_intermittent_hides_one_of_ten():
    cfg = EventBenchConfig(
        event="intermittent", n_nodes=100, min_size=10, max_size=10, steps=2, seed=0, hide_fraction=0.1,
        activity_exponent=None,
    )
    hist = event_membership_history(cfg)
    assert len(hist[0]) == 10
    assert len(hist[1]) == 9
    for label, members in hist[1].items():
        assert hist[0][label] == members


def test_intermittent_communities_return_unchanged():
    cfg = EventBenchConfig(event="intermittent", steps=8, seed=4)
    hist = event_membership_history(cfg)
    everything = {}
    for h in hist:
        for label, members in h.items():
            assert everything.setdefault(label, members) == members
    assert set(everything) == set(hist[0])


def test_merge_split_bookkeeping():
    # sizes >= 24 keep every split feasible for this many steps
    cfg = EventBenchConfig(event="merge_split", event_count=4, steps=6, seed=2, min_size=24, max_size=60)
    net, truth = generate_events(cfg)
    hist = event_membership_history(cfg)
    assert truth.skipped_events == 0
    for before, after in zip(hist, hist[1:]):
        assert len(after) == len(before) - 4 + 4
        assert sorted(v for m in after.values() for v in m) == sorted(v for m in before.values() for v in m)


def test_birth_death_and_expand_contract_conserve_nodes():
    for event in ("birth_death", "expand_contract"):
        cfg = EventBenchConfig(event=event, steps=6, seed=3)
        hist = event_membership_history(cfg)
        for h in hist:
            flat = [v for m in h.values() for v in m]
            assert len(flat) == len(set(flat))
            assert all(len(m) >= 3 for m in h.values())
    hist = event_membership_history(EventBenchConfig(event="birth_death", steps=4, seed=3))
    assert set(hist[1]) != set(hist[0])


def test_event_truth_covers_snapshot():
    for event in ("intermittent", "expand_contract", "birth_death", "merge_split"):
        net, truth = generate_events(EventBenchConfig(event=event, steps=4, seed=7))
        for g, gt in zip(net, truth.for_network(net)):
            assert set(gt) == set(g.nodes)


def test_power_law_sizes_in_range():
    cfg = EventBenchConfig(event="none", seed=0, steps=1)
    (sizes,) = [[len(m) for m in h.values()] for h in event_membership_history(cfg)]
    assert 30 <= len(sizes) <= 80
    assert min(sizes) >= cfg.min_size and max(sizes) <= cfg.max_size
    assert np.median(sizes) < (cfg.min_size + cfg.max_size) / 2


def test_infeasible_splits_are_counted():
    cfg = EventBenchConfig(event="merge_split", event_count=4, steps=6, seed=2)
    _, truth = generate_events(cfg)
    hist = event_membership_history(cfg)
    applied_change = sum(len(b) - len(a) for a, b in zip(hist, hist[1:]))
    # every merge went through, so each skipped split leaves one fewer community
    assert applied_change == -truth.skipped_events
