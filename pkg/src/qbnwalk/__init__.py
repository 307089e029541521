"""Continuous-time quantum walk on the infinite-dimensional hypercube.

The walk is generated by ``A = sum_k w(k) Ξ_k`` where ``Ξ_k`` flips mode
``k`` of a basis vertex. Everything is computed on finite mode truncations.
"""

from .analysis import (
    Distribution,
    SymmetryReport,
    check_operator_identity,
    check_parity_sector_symmetry,
    check_time_reversal,
    distribution,
)
from .evolution import (
    Propagator,
    basis_amplitude,
    evolve,
    fwht,
    oracle_evolve,
    propagator,
    truncation_error_bound,
)
from .operators import (
    TruncatedOperator,
    adjacency,
    apply_adjacency,
    apply_shifted,
    dense_matrix,
    operator_norm_witness,
    shifted,
)
from .spectral import (
    SpectralReport,
    analytic_spectrum,
    spectrum_fill_report,
    weyl_residual,
    weyl_vector,
)
from .statespace import (
    State,
    apply_annihilation,
    apply_creation,
    apply_parity_T,
    apply_xi,
    apply_xi_sigma,
    basis_state,
    inner,
    project_parity,
)
from .vertexspace import format_vertex, parse_vertex, vertex
from .weights import W0, Weight, geometric, make_weight, mu, parse_weight

__version__ = "0.1.0"
