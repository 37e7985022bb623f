"""Majority-rule opinion dynamics with zealots and correlated polarization."""

from .dynamics import RunOutcome, local_field, run_to_equilibrium, step
from .experiment import (
    Substrate,
    SweepConfig,
    SweepResult,
    histogram,
    percentile,
    run_realization,
    sweep,
)
from .graph import (
    Graph,
    configuration_model,
    fix_parity,
    largest_component,
    load_edge_list,
    sample_poisson_degrees,
    sample_powerlaw_degrees,
    write_edge_list,
)
from .metrics import (
    PolarizationSummary,
    assortativity_r,
    balance_R,
    correlated_polarization,
    fraction_negative,
    mixing_matrix,
)
from .seeding import degree_zealots, random_initial, seed_initial, uniform_zealots

__version__ = "0.1.0"
