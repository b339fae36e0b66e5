import dataclasses
import math

import numpy as np
import pytest

from thermoscale.config import ConfigError, format_config, parse_config
from thermoscale.experiments import (
    ExperimentConfig,
    check_invariants,
    emit_figure_data,
    oracle_suite,
    run_realization,
    run_sweep,
)

SMALL = ExperimentConfig(realizations=4, base_seed=1000)


@pytest.fixture(scope="module")
def small_sweep():
    return run_sweep(SMALL)


def test_realization_fields(small_sweep):
    r = small_sweep.results[0]
    assert r.seed == 1000
    assert r.c.shape == (3, 3)
    assert set(r.ratio) == {1, 2, 4}
    assert len(r.dist) == len(r.beta_spec_ratio) == 12
    for N, ratio in r.ratio.items():
        assert 0 < ratio <= 1 / math.sqrt(N)
    for N in r.ratio:
        # beta * max_j sqrt(<j|I^2|j>) is linear in beta
        per_beta = [r.max_correction_norm[N, bl] / bl for bl in SMALL.beta_lambda]
        np.testing.assert_allclose(per_beta, per_beta[0], rtol=1e-12)
        assert per_beta[0] >= r.interaction[N] * (1 - 1e-12)
    assert all(math.isfinite(v) for v in r.dist.values())


def test_realization_deterministic():
    a = run_realization(SMALL, 2)
    b = run_realization(SMALL, 2)
    assert a.dist == b.dist and a.beta_spec_ratio == b.beta_spec_ratio
    np.testing.assert_array_equal(a.c, b.c)


def test_realization_index_checked():
    with pytest.raises(ValueError):
        run_realization(SMALL, 4)


def test_noninteracting_realization_is_exactly_thermal():
    config = dataclasses.replace(SMALL, lam=0.0)
    r = run_realization(config, 0)
    assert max(r.dist.values()) < 1e-12
    for v in r.beta_spec_ratio.values():
        assert v == pytest.approx(1.0, abs=1e-9)


def test_sweep_summary(small_sweep):
    s = small_sweep.summary
    assert s.scaling_violations == 0
    assert check_invariants(s) == []
    assert s.delta_e_over_lambda_mean == pytest.approx(np.mean([r.delta_e for r in small_sweep.results]))
    names = [row[0] for row in s.rows()]
    assert names.count("dist_mean") == 12


def test_sweep_independent_of_threads(small_sweep):
    threaded = run_sweep(SMALL, threads=3)
    for a, b in zip(small_sweep.results, threaded.results):
        assert a.dist == b.dist and a.ratio == b.ratio and a.beta_spec_ratio == b.beta_spec_ratio


def test_figure_tables(small_sweep):
    header, rows = emit_figure_data(small_sweep, "fig1")
    assert header == ("realization", "N", "ratio", "reference_inv_sqrtN")
    assert [row[3] for row in rows[:3]] == [1.0, 1 / math.sqrt(2), 0.5]
    header, rows = emit_figure_data(small_sweep.results[:1], "fig3")
    assert header == ("realization", "N", "beta_lambda", "dist")
    assert len(rows) == 12
    header, rows = emit_figure_data(small_sweep, "fig4")
    assert header[-1] == "beta_spec_over_beta"
    header, rows = emit_figure_data(small_sweep, "fig2")
    assert header == ("j_index", "x", "weighted_density", "envelope")
    assert len(rows) == 3 * 256 * 256
    x = np.array([r[1] for r in rows[:1000]])
    env = np.array([r[3] for r in rows[:1000]])
    np.testing.assert_allclose(env, 0.25 * np.exp(-0.5 * np.abs(x)))


def test_figure_errors(small_sweep):
    with pytest.raises(ValueError):
        emit_figure_data(small_sweep, "fig5")
    with pytest.raises(ValueError):
        emit_figure_data(small_sweep.results[1:], "fig2")


@pytest.mark.parametrize("bad", [
    dict(partitions=(3,)),
    dict(realizations=0),
    dict(beta_lambda=(-0.1,)),
    dict(beta_lambda=()),
    dict(bin_width=0.0),
    dict(fig2_realization=10),
])
def test_config_validation(bad):
    with pytest.raises(ValueError):
        dataclasses.replace(SMALL, **bad)


def test_oracle_suite_residuals():
    for name, (residual, tol) in oracle_suite(ExperimentConfig(), 42, count=2).items():
        assert residual < tol, name


def test_config_round_trip():
    text = format_config(SMALL)
    assert parse_config(text) == SMALL


def test_config_parsing():
    cfg = parse_config("""
        # comment
        L = 6
        lambda = 0.5   # trailing comment
        beta_lambda = 0.1, 0.3
        partitions = 1, 3
        bin_width = auto
    """)
    assert (cfg.L, cfg.lam, cfg.beta_lambda, cfg.partitions, cfg.bin_width) == (6, 0.5, (0.1, 0.3), (1, 3), None)


@pytest.mark.parametrize("text", [
    "lamda = 1.0",
    "L = 8\nL = 8",
    "L: 8",
    "L = eight",
    "partitions = 1, 3",
])
def test_config_errors(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_shipped_default_config_matches_defaults():
    from pathlib import Path

    from thermoscale.config import load_config

    path = Path(__file__).resolve().parents[1] / "configs" / "default.cfg"
    assert load_config(path) == ExperimentConfig()
