"""Seeded realization sweeps over random nearest-neighbour couplings.

Each realization draws its couplings from seed ``base_seed + index`` and
computes every derived quantity for every partition and every beta*lambda
value. Sweeps may run realizations on several threads; results are merged
in index order so the output never depends on scheduling.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .chain import PartitionSpec, build_hamiltonian, sample_random_model, split_partition
from .operators import build_generators
from .spectra import (
    diagonalize,
    interaction_strength,
    interaction_strength_closed_form,
    level_width,
    level_width_closed_form,
)
from .thermal import (
    DecayProfile,
    build_product_basis,
    canonical_state,
    decay_profile,
    density_of_states,
    diagonal_comparison,
    group_spectral_temperature,
    overlap_distributions,
    product_canonical,
    state_distance,
)

log = logging.getLogger(__name__)

FIGURES = ("fig1", "fig2", "fig3", "fig4")


@dataclass(frozen=True)
class ExperimentConfig:
    L: int = 8
    n: int = 2
    lam: float = 1.0
    delta_e: float = 1.0
    beta_lambda: tuple[float, ...] = (0.1, 0.2, 0.3, 0.4)
    partitions: tuple[int, ...] = (1, 2, 4)
    realizations: int = 100
    base_seed: int = 0
    bin_width: float | None = None
    envelope_amplitude: float = 0.25
    fig2_realization: int = 0
    fig2_beta_width: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "beta_lambda", tuple(float(b) for b in self.beta_lambda))
        object.__setattr__(self, "partitions", tuple(int(N) for N in self.partitions))
        if self.L < 2 or self.n < 2:
            raise ValueError(f"need L >= 2 and n >= 2, got L={self.L}, n={self.n}")
        if self.realizations < 1:
            raise ValueError("realizations must be >= 1")
        if not self.partitions:
            raise ValueError("at least one partition is required")
        for N in self.partitions:
            if N < 1 or self.L % N:
                raise ValueError(f"group size N={N} does not divide L={self.L}")
        if not self.beta_lambda:
            raise ValueError("at least one beta*lambda value is required")
        if any(b < 0 for b in self.beta_lambda):
            raise ValueError("beta*lambda values must be >= 0")
        if self.lam < 0:
            raise ValueError("lambda must be >= 0")
        if self.bin_width is not None and not self.bin_width > 0:
            raise ValueError("bin_width must be positive")
        if not 0 <= self.fig2_realization < self.realizations:
            raise ValueError("fig2_realization must index an existing realization")

    def beta(self, beta_lambda: float) -> float:
        """Inverse temperature for a beta*lambda grid value; taken as beta itself when lambda = 0."""
        return beta_lambda / self.lam if self.lam > 0 else beta_lambda

    def seed(self, index: int) -> int:
        return self.base_seed + index


@dataclass
class RealizationResult:
    index: int
    seed: int
    c: np.ndarray
    delta_e: float
    delta_e_closed: float
    interaction: dict[int, float] = field(default_factory=dict)
    interaction_closed: dict[int, float] = field(default_factory=dict)
    ratio: dict[int, float] = field(default_factory=dict)
    dist: dict[tuple[int, float], float] = field(default_factory=dict)
    beta_spec_ratio: dict[tuple[int, float], float] = field(default_factory=dict)
    max_correction_norm: dict[tuple[int, float], float] = field(default_factory=dict)
    second_moment_residual: dict[int, float] = field(default_factory=dict)
    first_moment_residual: dict[int, float] = field(default_factory=dict)
    fig2_fraction_above: float = 0.0
    fig2_passed: bool = True
    fig2_profiles: dict[int, DecayProfile] | None = None

    @property
    def width_residual(self) -> float:
        return _rel(self.delta_e, self.delta_e_closed)

    @property
    def interaction_residual(self) -> float:
        return max((_rel(self.interaction[N], self.interaction_closed[N]) for N in self.interaction), default=0.0)


def _rel(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale > 0 else 0.0


def run_realization(config: ExperimentConfig, index: int, keep_profiles: bool = False) -> RealizationResult:
    if not 0 <= index < config.realizations:
        raise ValueError(f"realization {index} out of range 0..{config.realizations - 1}")
    gens = build_generators(config.n)
    model = sample_random_model(config.seed(index), config.lam, config.delta_e, config.n)
    spec = model.to_spec(config.L)
    H = build_hamiltonian(spec, gens)
    total = diagonalize(H)
    result = RealizationResult(
        index=index,
        seed=config.seed(index),
        c=model.c,
        delta_e=level_width(H),
        delta_e_closed=level_width_closed_form(spec),
    )
    eta = density_of_states(total.energies, config.bin_width)
    profiles = {}
    tail = above = 0
    for N in config.partitions:
        part = PartitionSpec.for_chain(config.L, N)
        _, I = split_partition(spec, part, gens)
        basis = build_product_basis(spec, part, gens)
        strength = interaction_strength(I)
        result.interaction[N] = strength
        result.interaction_closed[N] = interaction_strength_closed_form(spec, part)
        result.ratio[N] = strength / result.delta_e if result.delta_e > 0 else 0.0

        dists = overlap_distributions(total, basis, I)
        direct = np.array([d.conditional_second_moment for d in dists])
        spectral = np.array([d.spectral_second_moment for d in dists])
        scale = np.where(direct > 0, direct, 1.0)
        result.second_moment_residual[N] = float(np.max(np.abs(spectral - direct) / scale))

        profile = decay_profile(
            dists, eta, amplitude=config.envelope_amplitude, beta_width=config.fig2_beta_width
        )
        tail += profile.tail_points
        above += profile.above_envelope
        if keep_profiles:
            profiles[N] = profile

        widest = float(np.sqrt(direct.max()))
        for k, bl in enumerate(config.beta_lambda):
            beta = config.beta(bl)
            rho = canonical_state(total, beta)
            rho_t = product_canonical(basis, beta)
            result.dist[N, bl] = state_distance(rho, rho_t)
            result.max_correction_norm[N, bl] = beta * widest
            if k == 0:
                # the first-moment identity does not depend on beta
                comparison = diagonal_comparison(rho, basis, I)
                result.first_moment_residual[N] = float(comparison.first_moment_residual.max())
            if beta > 0:
                result.beta_spec_ratio[N, bl] = group_spectral_temperature(rho, basis) / beta
            else:
                result.beta_spec_ratio[N, bl] = 1.0

    result.fig2_fraction_above = above / tail if tail else 0.0
    result.fig2_passed = result.fig2_fraction_above < 0.05
    if keep_profiles:
        result.fig2_profiles = profiles
    return result


@dataclass
class SweepSummary:
    delta_e_mean: float
    delta_e_std: float
    delta_e_over_lambda_mean: float
    delta_e_over_lambda_std: float
    ratio_mean: dict[int, float]
    dist_mean: dict[tuple[int, float], float]
    beta_spec_ratio_mean: dict[tuple[int, float], float]
    scaling_violations: int
    dist_monotone_fraction: float
    max_beta_spec_ratio: float
    max_second_moment_residual: float
    max_first_moment_residual: float
    max_width_residual: float
    max_interaction_residual: float
    fig2_fraction_above: float
    fig2_pass_count: int

    def rows(self) -> list[tuple[str, str, str, float]]:
        """(name, N, beta_lambda, value) rows; blank fields where not applicable."""
        out = [
            ("delta_e_mean", "", "", self.delta_e_mean),
            ("delta_e_std", "", "", self.delta_e_std),
            ("delta_e_over_lambda_mean", "", "", self.delta_e_over_lambda_mean),
            ("delta_e_over_lambda_std", "", "", self.delta_e_over_lambda_std),
        ]
        out += [("ratio_mean", N, "", v) for N, v in self.ratio_mean.items()]
        out += [("dist_mean", N, bl, v) for (N, bl), v in self.dist_mean.items()]
        out += [("beta_spec_over_beta_mean", N, bl, v) for (N, bl), v in self.beta_spec_ratio_mean.items()]
        out += [
            ("scaling_violations", "", "", self.scaling_violations),
            ("dist_monotone_fraction", "", "", self.dist_monotone_fraction),
            ("max_beta_spec_over_beta", "", "", self.max_beta_spec_ratio),
            ("max_second_moment_residual", "", "", self.max_second_moment_residual),
            ("max_first_moment_residual", "", "", self.max_first_moment_residual),
            ("max_width_residual", "", "", self.max_width_residual),
            ("max_interaction_residual", "", "", self.max_interaction_residual),
            ("fig2_fraction_above", "", "", self.fig2_fraction_above),
            ("fig2_pass_count", "", "", self.fig2_pass_count),
        ]
        return out


@dataclass
class SweepResult:
    config: ExperimentConfig
    summary: SweepSummary
    results: list[RealizationResult]


def summarize(config: ExperimentConfig, results: list[RealizationResult]) -> SweepSummary:
    widths = np.array([r.delta_e for r in results])
    if config.lam > 0:
        scaled = widths / config.lam
        scaled_mean, scaled_std = float(scaled.mean()), float(scaled.std())
    else:
        scaled_mean = scaled_std = math.nan
    cells = [(N, bl) for N in config.partitions for bl in config.beta_lambda]
    violations = sum(
        1
        for r in results
        for N in config.partitions
        if r.ratio[N] > 1 / math.sqrt(N) * (1 + 1e-12)
    )
    ordered = sorted(config.partitions)
    monotone = total = 0
    if len(ordered) > 1:
        for r in results:
            for bl in config.beta_lambda:
                d = [r.dist[N, bl] for N in ordered]
                total += 1
                monotone += all(a > b for a, b in zip(d, d[1:]))
    fig2 = results[config.fig2_realization] if config.fig2_realization < len(results) else results[0]
    return SweepSummary(
        delta_e_mean=float(widths.mean()),
        delta_e_std=float(widths.std()),
        delta_e_over_lambda_mean=scaled_mean,
        delta_e_over_lambda_std=scaled_std,
        ratio_mean={N: float(np.mean([r.ratio[N] for r in results])) for N in config.partitions},
        dist_mean={c: float(np.mean([r.dist[c] for r in results])) for c in cells},
        beta_spec_ratio_mean={c: float(np.mean([r.beta_spec_ratio[c] for r in results])) for c in cells},
        scaling_violations=violations,
        dist_monotone_fraction=monotone / total if total else 1.0,
        max_beta_spec_ratio=max(v for r in results for v in r.beta_spec_ratio.values()),
        max_second_moment_residual=max(v for r in results for v in r.second_moment_residual.values()),
        max_first_moment_residual=max(v for r in results for v in r.first_moment_residual.values()),
        max_width_residual=max(r.width_residual for r in results),
        max_interaction_residual=max(r.interaction_residual for r in results),
        fig2_fraction_above=fig2.fig2_fraction_above,
        fig2_pass_count=sum(r.fig2_passed for r in results),
    )


def run_sweep(config: ExperimentConfig, threads: int = 1) -> SweepResult:
    """Run every realization; any failure aborts the sweep."""
    def one(i):
        return run_realization(config, i, keep_profiles=(i == config.fig2_realization))

    indices = range(config.realizations)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, indices))
    else:
        results = [one(i) for i in indices]
    summary = summarize(config, results)
    if config.lam > 0:
        log.info("mean level width %.4f lambda over %d realizations",
                 summary.delta_e_over_lambda_mean, len(results))
    exceptions = round((1 - summary.dist_monotone_fraction) * len(results) * len(config.beta_lambda))
    if exceptions:
        log.info("dist not decreasing in N for %d (realization, beta*lambda) pairs", exceptions)
    return SweepResult(config, summary, results)


def check_invariants(summary: SweepSummary) -> list[str]:
    """Names and values of every hard invariant the sweep breaches."""
    breaches = []
    if summary.scaling_violations:
        breaches.append(f"scaling bound violated {summary.scaling_violations} times")
    if summary.max_second_moment_residual >= 1e-9:
        breaches.append(f"second-moment identity residual {summary.max_second_moment_residual:.3e} >= 1e-9")
    if summary.max_first_moment_residual >= 1e-9:
        breaches.append(f"first-moment identity residual {summary.max_first_moment_residual:.3e} >= 1e-9")
    if summary.max_width_residual >= 1e-10:
        breaches.append(f"level width closed-form residual {summary.max_width_residual:.3e} >= 1e-10")
    if summary.max_interaction_residual >= 1e-10:
        breaches.append(f"interaction closed-form residual {summary.max_interaction_residual:.3e} >= 1e-10")
    return breaches


def emit_figure_data(results, which: str) -> tuple[tuple[str, ...], list[tuple]]:
    """Tabular data behind one figure as (header, rows).

    ``results`` is a :class:`SweepResult` or a list of realization results.
    fig2 uses the first realization that kept its decay profiles.
    """
    if which not in FIGURES:
        raise ValueError(f"unknown figure {which!r}; expected one of {FIGURES}")
    if isinstance(results, SweepResult):
        results = results.results
    if isinstance(results, RealizationResult):
        results = [results]
    if not results:
        raise ValueError("no results to tabulate")

    if which == "fig1":
        header = ("realization", "N", "ratio", "reference_inv_sqrtN")
        rows = [(r.index, N, r.ratio[N], 1 / math.sqrt(N)) for r in results for N in r.ratio]
    elif which == "fig2":
        header = ("j_index", "x", "weighted_density", "envelope")
        chosen = next((r for r in results if r.fig2_profiles), None)
        if chosen is None:
            raise ValueError("no realization carries decay profiles")
        rows = []
        for profile in chosen.fig2_profiles.values():
            rows += list(zip(profile.j_index.tolist(), profile.x.tolist(),
                             profile.weighted_density.tolist(), profile.envelope.tolist()))
    elif which == "fig3":
        header = ("realization", "N", "beta_lambda", "dist")
        rows = [(r.index, N, bl, v) for r in results for (N, bl), v in r.dist.items()]
    else:
        header = ("realization", "N", "beta_lambda", "beta_spec_over_beta")
        rows = [(r.index, N, bl, v) for r in results for (N, bl), v in r.beta_spec_ratio.items()]
    return header, rows


def oracle_suite(config: ExperimentConfig, seed: int, count: int = 3) -> dict[str, tuple[float, float]]:
    """Largest residual of each built-in identity on ``count`` fresh realizations.

    Returns ``{name: (residual, tolerance)}``.
    """
    from .chain import extract_coefficients

    gens = build_generators(config.n)
    worst = dict.fromkeys(
        ["second_moment_identity", "round_trip_extraction", "level_width_dual_path",
         "interaction_dual_path", "decomposition"], 0.0)
    for k in range(count):
        model = sample_random_model(seed + k, config.lam if config.lam > 0 else 1.0, config.delta_e, config.n)
        spec = model.to_spec(config.L)
        H = build_hamiltonian(spec, gens)
        total = diagonalize(H)
        A, C = extract_coefficients(H, gens, site=1 + k % config.L)
        if config.L > 2:
            worst["round_trip_extraction"] = max(
                worst["round_trip_extraction"],
                float(np.max(np.abs(A - spec.A))), float(np.max(np.abs(C - spec.C))))
        worst["level_width_dual_path"] = max(
            worst["level_width_dual_path"], _rel(level_width(H), level_width_closed_form(spec)))
        for N in config.partitions:
            part = PartitionSpec.for_chain(config.L, N)
            H0, I = split_partition(spec, part, gens)
            worst["decomposition"] = max(
                worst["decomposition"], float(np.linalg.norm(H0.matrix + I.matrix - H.matrix)))
            worst["interaction_dual_path"] = max(
                worst["interaction_dual_path"],
                _rel(interaction_strength(I), interaction_strength_closed_form(spec, part)))
            basis = build_product_basis(spec, part, gens)
            for d in overlap_distributions(total, basis, I):
                if d.conditional_second_moment > 0:
                    res = abs(d.spectral_second_moment - d.conditional_second_moment) / d.conditional_second_moment
                    worst["second_moment_identity"] = max(worst["second_moment_identity"], res)
    tolerances = {
        "second_moment_identity": 1e-9,
        "round_trip_extraction": 1e-12,
        "level_width_dual_path": 1e-10,
        "interaction_dual_path": 1e-10,
        "decomposition": 1e-12,
    }
    return {name: (worst[name], tolerances[name]) for name in worst}
