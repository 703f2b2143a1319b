"""Probabilistic zero forcing on graphs: exact Markov-chain answers,
seeded Monte Carlo estimates, and the parameters built on them."""

from .exact import (
    ResourceError,
    StateChain,
    absorption_curve,
    build_chain,
    confidence_time,
    confidence_time_graph,
    ept_exact,
    ept_graph,
    lround_graph,
    lround_probability,
    round_distribution,
    successor_distribution,
)
from .graph import FamilySpec, Graph, GraphError, build, members, parse_family, to_mask
from .kernels import (
    force_probability,
    is_zero_forcing_set,
    propagation_time,
    psd_round,
    round_kernel,
    zf_round,
)
from .montecarlo import EstimateReport, estimate_confidence_time, estimate_ept, estimate_lround, simulate_trial
from .params import kang_yi_probability, th_alpha, th_pzf, th_pzf_graph, zero_forcing_number

__version__ = "0.1.0"
