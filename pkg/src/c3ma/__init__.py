"""Condition-number-constrained covariance matrix approximation.

Finds the Frobenius-nearest positive definite matrix to a sample covariance
subject to an upper bound on its condition number, with SVD-based fast paths
for high-dimensional (p >> n) data, plus the analysis and benchmark tooling
around it.
"""

from .analysis import (
    TruncationPath,
    in_interval_stat,
    kappa_mu_maximizer,
    kappa_nu_maximizer,
    mu_of_kappa,
    nu_of_kappa,
    trace_path,
)
from .datagen import (
    SigmaSpec,
    eigen_dispersion,
    gaussian_matrix,
    haar_orthogonal,
    make_sigma,
    sample_covariance,
    sample_mvn,
)
from .errors import (
    C3MAError,
    InfeasibleZeroMatrix,
    InvalidIndex,
    InvalidInput,
    InvalidKappa,
    NotApplicable,
    ShapeError,
)
from .linalg import (
    DataMatrix,
    ModSvdResult,
    SpectralForm,
    SymmetricMatrix,
    mod_svd,
    symmetric_eigendecomposition,
    symmetrize,
    thin_svd,
)
from .oracle import feasible_set_probe, frobenius_distance, golden_section_minimize_f
from .pipeline import (
    CompactForm,
    CovarianceApproximation,
    densify,
    solve_fu_spt,
    solve_gr_svd,
    solve_mod_svd,
)
from .truncation import (
    EigenSpectrum,
    TruncationSolution,
    candidate_mu,
    clamp_eigenvalue,
    clamp_spectrum,
    objective,
    objective_derivative,
    region_contains,
    search_optimal,
    spectrum_from_eigenvalues,
)

__version__ = "0.1.0"
