"""Local and nonlocal superposition measures for finite quantum states.

The package quantifies how much a composite quantum state is spread
across orthonormal bases of one subsystem block (local superposition)
or across product bases of a whole partition (nonlocal superposition),
minimized over bases and, for mixed states, over ensemble
decompositions.  Alongside the numerical minimizers it ships exact
structural certifiers for the states on which those measures vanish:
classical-quantum (block diagonal in one side's eigenbasis), classical
(diagonal in a product eigenbasis), and separable (PPT oracle for small
systems), plus concurrence oracles for cross checks on two qubits.
"""

from .linalg import (
    DimensionLimitError,
    UnitaryParams,
    angles_from_unitary,
    eig_hermitian,
    kron,
    partial_trace,
    random_unitary,
    svd,
    unitary_from_angles,
)
from .measures import (
    CertificationResult,
    MeasureVariant,
    ProductBasis,
    Verdict,
    classical_certify,
    concurrence_mixed,
    concurrence_pure,
    cq_certify,
    nls_in_basis,
    pairwise_superposition,
    ppt_min_eigenvalue,
    probs_in_block_basis,
    s_local,
    s_local_ensemble,
    two_level_probability_product,
)
from .optimize import (
    GridCapError,
    ObjectiveError,
    OptimizerConfig,
    OptResult,
    SearchDomain,
    grid_seed,
    minimize_over_domain,
    nelder_mead,
)
from .roof import (
    ClosedFormValues,
    MeasureReport,
    ls_block_pure,
    ls_closed_form_pure,
    ls_mixed_estimate,
    ls_symmetric_pure,
    nls_mixed_estimate,
    nls_pure,
)
from .states import (
    DensityMatrix,
    Ensemble,
    InvariantViolation,
    Partition,
    PureState,
    StateValidationError,
    apply_block_unitary,
    ensemble_from_isometry,
    isometry_from_ensemble,
    load_state,
    make_state,
    save_state,
    schmidt_decompose,
    validate,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
