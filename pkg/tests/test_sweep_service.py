import pytest

from lattice_sumsets import InputError, LatticeToolkit


def test_sweep_names(toolkit):
    names = toolkit.sweeps.names()
    assert "box-doubling-exhaustive-3x3" in names
    assert "lacunary" in names
    assert names == sorted(names)
    assert len(names) == 13


def test_unknown_sweep(toolkit):
    with pytest.raises(InputError):
        toolkit.sweep("no-such-sweep")


def test_box_doubling_exhaustive_3x3(toolkit):
    summary = toolkit.sweep("box-doubling-exhaustive-3x3")
    assert summary.instances == 511
    assert summary.violations == 0
    assert summary.parameters["generator"] == "PCG64"


def test_box_doubling_full_boxes(toolkit):
    summary = toolkit.sweep("box-doubling-full-boxes")
    assert (summary.instances, summary.violations) == (84, 0)


def test_short_random_sweeps(toolkit):
    expected = {
        "compression-property": 3 * 20,
        "down-closure": 511 + 20,
        "cube-sum-identity": 511 + 20,
        "discrete-bm": 3 * 20,
        "plunnecke": 20,
        "freiman-lemma": 2 * (7 + 20),
    }
    for sweep_id, instances in expected.items():
        summary = toolkit.sweep(sweep_id, seed=7, trials=20)
        assert summary.instances == instances, sweep_id
        assert summary.passed, sweep_id
        assert summary.seed == 7


def test_fixed_sweeps(toolkit):
    for sweep_id, instances in [("discrete-bm-sharpness", 9), ("parallelepiped-cubes", 8), ("lacunary", 41)]:
        summary = toolkit.sweep(sweep_id)
        assert (summary.instances, summary.violations) == (instances, 0), sweep_id


def test_compressed_sum_bound_sweep(toolkit):
    summary = toolkit.sweep("compressed-sum-bound-3x3")
    assert summary.parameters["down_sets"] == 19
    assert (summary.instances, summary.violations) == (361, 0)


def test_results_do_not_depend_on_thread_count():
    single = LatticeToolkit({"sweeps": {"threads": 1}}).sweep("plunnecke", seed=3, trials=15, max_size=6)
    many = LatticeToolkit({"sweeps": {"threads": 8}}).sweep("plunnecke", seed=3, trials=15, max_size=6)
    assert single.to_dict() == many.to_dict()


def test_default_seed_comes_from_config():
    summary = LatticeToolkit({"sweeps": {"seed": 99}}).sweep("down-closure", trials=5)
    assert summary.seed == 99
    assert summary.to_dict()["seed"] == 99


@pytest.mark.slow
def test_box_doubling_exhaustive_2x2x2x2(toolkit):
    summary = toolkit.sweep("box-doubling-exhaustive-2x2x2x2")
    assert (summary.instances, summary.violations) == (65535, 0)


@pytest.mark.slow
def test_default_random_sweeps(toolkit):
    for sweep_id in ("compression-property", "discrete-bm", "plunnecke", "freiman-lemma"):
        assert toolkit.sweep(sweep_id).passed, sweep_id


def test_freiman_oracle_budget_overrun_fails_the_instance():
    toolkit = LatticeToolkit({"budgets": {"max_oracle_nodes": 1}})
    summary = toolkit.sweep("freiman-lemma", trials=0)
    assert (summary.instances, summary.violations) == (14, 7)
    assert not summary.passed
    failure = summary.failures[0]
    assert failure.statement_id == "freiman-dimension-cross-check"
    assert "max_oracle_nodes" in failure.parameters["oracle_budget_exceeded"]
    assert summary.parameters["oracle_max_size"] == 8
