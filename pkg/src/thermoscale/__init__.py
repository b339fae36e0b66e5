"""Interaction scaling and local temperature in chains of coupled n-level systems."""
from .chain import (
    ChainSpec,
    NumericModel,
    PartitionSpec,
    build_hamiltonian,
    extract_coefficients,
    group_hamiltonian,
    sample_random_model,
    split_partition,
)
from .experiments import (
    ExperimentConfig,
    RealizationResult,
    SweepResult,
    SweepSummary,
    emit_figure_data,
    run_realization,
    run_sweep,
)
from .operators import (
    ChainOperator,
    GeneratorSet,
    build_generators,
    embed_pair,
    embed_single,
    partial_trace,
)
from .spectra import (
    Spectrum,
    diagonalize,
    interaction_strength,
    level_width,
    scaling_ratio,
)
from .thermal import (
    DensityMatrix,
    ProductBasis,
    build_product_basis,
    canonical_state,
    decay_profile,
    density_of_states,
    diagonal_comparison,
    group_occupations,
    offdiagonal_profile,
    overlap_distribution,
    product_canonical,
    spectral_temperature,
    state_distance,
)

__version__ = "0.1.0"
