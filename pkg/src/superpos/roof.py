"""Local and nonlocal superposition measures for pure and mixed states.

Pure-state measures minimize the basis functionals of
:mod:`superpos.measures` over unitary-parametrized bases; mixed-state
estimates additionally search over ensemble decompositions through the
isometry chart of :mod:`superpos.optimize`.  All mixed-state numbers
are upper bounds: the search can only overestimate the true roof value,
never undercut it.  Zero / nonzero claims therefore belong to the
structural certifiers, not to these estimates.

Two details make the searches dependable at desk scale.  First, every
search gets deterministic warm starts built from spectral data (Schmidt
or marginal eigenbases; for two-qubit roofs the spin-flip construction
that attains the concurrence).  Second, seeded random restarts keep
probing for anything below the warm starts, so an incorrect conjectured
optimum would be reported, not hidden.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg, measures
from .measures import (
    MeasureVariant,
    Verdict,
    _pairwise_rows,
    _side_front_blocks,
    _SIGMA_YY,
    pairwise_superposition,
)
from .optimize import OptimizerConfig, OptResult, SearchDomain, minimize_over_domain
from .states import (
    DensityMatrix,
    Partition,
    PureState,
    RANK_TOL,
    block_dim,
    isometry_from_ensemble,
    schmidt_decompose,
    schmidt_coefficients,
)

DEFAULT_CFG = OptimizerConfig()

DEFAULT_RANK_CAP = 4

UPPER_BOUND_NOTE = "upper bound: minimization over decompositions may stop above the infimum"


@dataclass(frozen=True)
class MeasureReport:
    """Result of one measure evaluation.

    ``value`` is the best objective found; re-evaluating the functional
    at the witness (``unitaries`` and, for mixed states, ``isometry``)
    reproduces it.  ``closed_form`` carries the matching
    spectral-coefficient expression when one is known for cross checks.
    """

    kind: str
    value: float
    variant: MeasureVariant
    converged: bool
    evaluations: int
    unitaries: tuple
    isometry: np.ndarray = None
    params: np.ndarray = None
    closed_form: float = None
    notes: tuple = ()


@dataclass(frozen=True)
class ClosedFormValues:
    """Spectral-coefficient expressions for a pure-state block measure.

    ``two_level`` (twice the product of the two Schmidt coefficients) is
    proven for two-level blocks and is None otherwise.  The other two
    fields evaluate each pairwise variant on the squared Schmidt
    coefficients; for blocks of dimension above two they are conjectural
    and ``exact`` is False.
    """

    two_level: float
    sum_of_pairroots: float
    root_of_pairsum: float
    exact: bool

    def for_variant(self, variant: MeasureVariant) -> float:
        if variant is MeasureVariant.ROOT_OF_PAIRSUM:
            return self.root_of_pairsum
        return self.sum_of_pairroots


def _as_block(block) -> tuple:
    if isinstance(block, (int, np.integer)):
        return (int(block),)
    return tuple(sorted(int(i) for i in block))


def _complement(block, n) -> tuple:
    return tuple(i for i in range(n) if i not in block)


def ls_closed_form_pure(psi: PureState, block) -> ClosedFormValues:
    """Closed-form block superposition expressions from the Schmidt spectrum."""
    block = _as_block(block)
    c = schmidt_coefficients(psi, block)
    probs = c * c
    sum_form = pairwise_superposition(probs, MeasureVariant.SUM_OF_PAIRROOTS)
    root_form = pairwise_superposition(probs, MeasureVariant.ROOT_OF_PAIRSUM)
    d = block_dim(psi.dims, block)
    d_comp = psi.dim // d
    two_level = float(2.0 * c[0] * c[1]) if min(d, d_comp) == 2 else None
    return ClosedFormValues(
        two_level=two_level,
        sum_of_pairroots=float(sum_form),
        root_of_pairsum=float(root_form),
        exact=(d == 2),
    )


# ---------------------------------------------------------------------------
# Pure-state measures


def _finish(kind, objective, domain, result: OptResult, variant, closed_form, notes=()):
    unitaries, iso = domain.decode(result.params)
    value = float(objective(unitaries, iso))
    if abs(value - result.value) > 1e-12:
        raise AssertionError("witness does not reproduce the reported value")
    return MeasureReport(
        kind=kind,
        value=value,
        variant=variant,
        converged=result.converged,
        evaluations=result.evaluations,
        unitaries=tuple(unitaries),
        isometry=iso,
        params=np.asarray(result.params, dtype=float),
        closed_form=closed_form,
        notes=tuple(notes),
    )


def _encode_safe(domain: SearchDomain, unitaries, isometry=None):
    try:
        return [domain.encode(unitaries, isometry)]
    except (ValueError, np.linalg.LinAlgError):
        return []


def _basis_probabilities(rho_block: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Diagonal of u^dagger rho u, i.e. outcome probabilities in basis u."""
    return np.real(np.sum(u.conj() * (rho_block @ u), axis=0))


def _block_probability_objective(psi: PureState, block, variant):
    rho_block = measures.block_marginal_matrix(psi, block)

    def objective(unitaries, _iso):
        return pairwise_superposition(_basis_probabilities(rho_block, unitaries[0]), variant)

    return objective


def ls_block_pure(psi: PureState, block, variant: MeasureVariant = MeasureVariant.SUM_OF_PAIRROOTS,
                  cfg: OptimizerConfig = None) -> MeasureReport:
    """Minimal superposition of one block of a pure state over its bases.

    For two-level blocks this equals twice the product of the Schmidt
    coefficients; for larger blocks the minimum is located numerically
    (the Schmidt basis is used as a warm start and has never been beaten
    in practice).
    """
    cfg = cfg or DEFAULT_CFG
    block = _as_block(block)
    objective = _block_probability_objective(psi, block, variant)
    domain = SearchDomain((block_dim(psi.dims, block),))
    marginal = measures.block_marginal_matrix(psi, block)
    _, eigbasis = linalg.eig_hermitian(marginal)
    warm = _encode_safe(domain, [eigbasis]) + _encode_safe(
        domain, [np.eye(domain.unitary_dims[0], dtype=complex)]
    )
    result = minimize_over_domain(objective, domain, cfg, warm_starts=warm)
    closed = ls_closed_form_pure(psi, block).for_variant(variant)
    return _finish("ls_block", objective, domain, result, variant, closed)


def ls_symmetric_pure(psi: PureState, variant: MeasureVariant = MeasureVariant.SUM_OF_PAIRROOTS,
                      cfg: OptimizerConfig = None) -> MeasureReport:
    """Symmetric local superposition: the per-subsystem average, minimized jointly."""
    cfg = cfg or DEFAULT_CFG
    n = psi.n_subsystems
    if n < 2:
        raise ValueError("symmetric measure needs at least two subsystems")
    blocks = [(i,) for i in range(n)]
    marginals = [measures.block_marginal_matrix(psi, b) for b in blocks]

    def objective(unitaries, _iso):
        total = 0.0
        for rho_b, u in zip(marginals, unitaries):
            total += pairwise_superposition(_basis_probabilities(rho_b, u), variant)
        return total / n

    domain = SearchDomain(tuple(psi.dims))
    eigbases = [linalg.eig_hermitian(m)[1] for m in marginals]
    warm = _encode_safe(domain, eigbases) + _encode_safe(
        domain, [np.eye(d, dtype=complex) for d in psi.dims]
    )
    result = minimize_over_domain(objective, domain, cfg, warm_starts=warm)
    closed = float(
        np.mean(
            [ls_closed_form_pure(psi, b).for_variant(variant) for b in blocks]
        )
    )
    return _finish("ls_symmetric", objective, domain, result, variant, closed)


def _product_probability_objective(psi: PureState, partition: Partition, variant):
    perm = partition.indices()
    shape = tuple(block_dim(psi.dims, b) for b in partition.blocks)
    base = psi.tensor().transpose(perm).reshape(shape)

    def objective(unitaries, _iso):
        t = base
        for u in unitaries:
            t = np.moveaxis(np.tensordot(u.conj().T, t, axes=([1], [0])), 0, -1)
        p = np.abs(t.ravel()) ** 2
        return pairwise_superposition(p, variant)

    return objective


def _partition_warm_bases(psi: PureState, partition: Partition):
    """Spectral product bases used to seed a nonlocal search."""
    seeds = []
    if partition.n_blocks == 2:
        _, left, right = schmidt_decompose(psi, partition)
        seeds.append([left, right])
    else:
        seeds.append(
            [
                linalg.eig_hermitian(measures.block_marginal_matrix(psi, b))[1]
                for b in partition.blocks
            ]
        )
    seeds.append([np.eye(block_dim(psi.dims, b), dtype=complex) for b in partition.blocks])
    return seeds


def nls_pure(psi: PureState, partition: Partition = None,
             variant: MeasureVariant = MeasureVariant.ROOT_OF_PAIRSUM,
             cfg: OptimizerConfig = None) -> MeasureReport:
    """Minimal superposition of a pure state over product bases of a partition.

    Defaults to the finest partition (every subsystem its own block).
    Vanishes exactly on states that factor across the partition.
    """
    cfg = cfg or DEFAULT_CFG
    partition = partition or Partition.singletons(psi.n_subsystems)
    partition.check_covers(psi.n_subsystems)
    if partition.n_blocks < 2:
        raise ValueError("nonlocal superposition needs at least two blocks")
    objective = _product_probability_objective(psi, partition, variant)
    domain = SearchDomain(tuple(block_dim(psi.dims, b) for b in partition.blocks))
    warm = []
    for bases in _partition_warm_bases(psi, partition):
        warm += _encode_safe(domain, bases)
    result = minimize_over_domain(objective, domain, cfg, warm_starts=warm)
    closed = None
    if partition.n_blocks == 2:
        coeffs, _, _ = schmidt_decompose(psi, partition)
        closed = pairwise_superposition(coeffs * coeffs, variant)
    return _finish("nls", objective, domain, result, variant, closed)


# ---------------------------------------------------------------------------
# Mixed-state estimates


def _eigen_data(rho: DensityMatrix):
    w, v = rho.eigensystem()
    keep = np.flatnonzero(w > RANK_TOL)
    return w[keep], v[:, keep]


def _pad_rows(mix: np.ndarray, rows: int) -> np.ndarray:
    if mix.shape[0] == rows:
        return mix
    out = np.zeros((rows, mix.shape[1]), dtype=complex)
    out[: mix.shape[0]] = mix
    return out


def _member_stack(x_subnorm: np.ndarray, mix: np.ndarray):
    """Unnormalized member vectors (one per row) and their weights."""
    raw = (x_subnorm @ mix.T).T  # (k, D)
    weights = np.sum(np.abs(raw) ** 2, axis=1)
    return raw, weights


def _members_block_probs(raw, weights, dims, block, u):
    """Per-member outcome probabilities of a block basis, row-normalized."""
    k = raw.shape[0]
    n = len(dims)
    block = tuple(block)
    perm = block + tuple(i for i in range(n) if i not in block)
    t = raw.reshape((k,) + tuple(dims)).transpose((0,) + tuple(i + 1 for i in perm))
    t = t.reshape(k, block_dim(dims, block), -1)
    rotated = np.tensordot(t, u.conj(), axes=([1], [0]))  # (k, comp, m)
    p = np.sum(np.abs(rotated) ** 2, axis=1)
    safe = np.where(weights > RANK_TOL, weights, 1.0)
    return p / safe[:, None]


def _check_rank(rho: DensityMatrix, rank_cap: int) -> int:
    rank = rho.rank
    if rank > rank_cap:
        raise ValueError(
            f"rank {rank} exceeds the cap of {rank_cap}; raise rank_cap to proceed"
        )
    return rank


def _cq_zero_warm(rho: DensityMatrix, block, certificate, k: int):
    """Decomposition and basis realizing a certified block-diagonal form."""
    if certificate.verdict is not Verdict.CERTIFIED_ZERO:
        return None
    basis = certificate.bases[0]
    block = tuple(block)
    comp = _complement(block, rho.n_subsystems)
    perm = block + comp
    inverse = np.argsort(perm)
    blocks = _side_front_blocks(rho, block, basis)
    d_s = blocks.shape[0]
    probs = []
    members = []
    for i in range(d_s):
        b_i = blocks[i, :, i, :]
        p_i = float(np.real(np.trace(b_i)))
        if p_i <= RANK_TOL:
            continue
        w, vecs = linalg.eig_hermitian(b_i / p_i)
        for j in np.flatnonzero(np.clip(w, 0.0, None) > RANK_TOL):
            amp = np.kron(basis[:, i], vecs[:, j])
            shaped = amp.reshape([rho.dims[q] for q in perm]).transpose(inverse)
            probs.append(p_i * float(w[j]))
            members.append(PureState(rho.dims, shaped.ravel()))
    total = sum(probs)
    probs = [p / total for p in probs]
    mix = isometry_from_ensemble(rho, probs, members)
    if mix.shape[0] > k:
        return None
    mix = _pad_rows(mix, k)
    if np.max(np.abs(mix.conj().T @ mix - np.eye(mix.shape[1]))) > 1e-8:
        return None
    return basis, mix


def ls_mixed_estimate(rho: DensityMatrix, block=None, symmetric: bool = False,
                      variant: MeasureVariant = MeasureVariant.SUM_OF_PAIRROOTS,
                      cfg: OptimizerConfig = None, ensemble_size: int = None,
                      rank_cap: int = DEFAULT_RANK_CAP) -> MeasureReport:
    """Upper-bound estimate of the local superposition of a mixed state.

    Jointly minimizes over a decomposition isometry (ensemble size
    ``rank**2`` unless overridden) and one basis shared by every
    ensemble member (per-subsystem bases when ``symmetric``).  When the
    block-diagonal certifier already proves the measure vanishes, the
    certified decomposition seeds the search, so certified-zero inputs
    evaluate to zero rather than to an optimizer artifact.
    """
    cfg = cfg or DEFAULT_CFG
    if symmetric == (block is not None):
        raise ValueError("pass exactly one of block=... or symmetric=True")
    rank = _check_rank(rho, rank_cap)
    q, vecs = _eigen_data(rho)
    x_subnorm = vecs * np.sqrt(q)
    k = ensemble_size or max(rank * rank, rank)
    if k < rank:
        raise ValueError(f"ensemble_size {k} is below rank {rank}")
    blocks = [(i,) for i in range(rho.n_subsystems)] if symmetric else [_as_block(block)]
    iso_shape = (k, rank) if rank > 1 else None

    def objective(unitaries, iso):
        mix = iso if iso is not None else np.ones((1, 1), dtype=complex)
        raw, weights = _member_stack(x_subnorm, mix)
        total = 0.0
        for b, u in zip(blocks, unitaries):
            p = _members_block_probs(raw, weights, rho.dims, b, u)
            total += float(np.dot(weights, _pairwise_rows(p, variant)))
        return total / len(blocks)

    domain = SearchDomain(
        tuple(block_dim(rho.dims, b) for b in blocks), isometry_shape=iso_shape
    )
    identity_mix = _pad_rows(np.eye(rank, dtype=complex), k) if iso_shape else None
    eigbases = [linalg.eig_hermitian(rho.marginal(b))[1] for b in blocks]
    warm = _encode_safe(domain, eigbases, identity_mix)
    notes = [UPPER_BOUND_NOTE]
    if not symmetric:
        cert = measures.cq_certify(rho, blocks[0])
        zero = _cq_zero_warm(rho, blocks[0], cert, k) if iso_shape else None
        if zero is not None:
            warm = _encode_safe(domain, [zero[0]], zero[1]) + warm
            notes.append("seeded with a certified block-diagonal decomposition")
    elif rho.n_subsystems == 2:
        cert = measures.classical_certify(rho)
        if cert.verdict is Verdict.CERTIFIED_ZERO and iso_shape:
            zero = _classical_zero_warm(rho, cert, k)
            if zero is not None:
                warm = _encode_safe(domain, list(zero[0]), zero[1]) + warm
                notes.append("seeded with a certified diagonal decomposition")
    result = minimize_over_domain(objective, domain, cfg, warm_starts=warm)
    kind = "ls_mixed_symmetric" if symmetric else "ls_mixed_block"
    return _finish(kind, objective, domain, result, variant, None, notes)


def _classical_zero_warm(rho: DensityMatrix, certificate, k: int):
    """Product-eigenbasis decomposition of a certified classical state."""
    u_a, u_b = certificate.bases
    product = np.kron(u_a, u_b)
    diag = np.real(np.diag(product.conj().T @ rho.mat @ product))
    probs = []
    members = []
    for idx in np.flatnonzero(diag > RANK_TOL):
        probs.append(float(diag[idx]))
        members.append(PureState(rho.dims, product[:, idx]))
    total = sum(probs)
    probs = [p / total for p in probs]
    mix = isometry_from_ensemble(rho, probs, members)
    if mix.shape[0] > k:
        return None
    mix = _pad_rows(mix, k)
    if np.max(np.abs(mix.conj().T @ mix - np.eye(mix.shape[1]))) > 1e-8:
        return None
    return (u_a, u_b), mix


# -- spin-flip construction for two-qubit roofs ------------------------------


def _takagi(sym: np.ndarray):
    """Factor a complex symmetric matrix as ``w @ diag(mu) @ w.T``.

    Uses the real embedding [[Re, Im], [Im, -Re]], whose spectrum comes
    in +/- pairs; the nonnegative half supplies the factors.  Returns
    ``(mu, w)`` with ``mu`` descending, or None when the embedding fails
    to produce a unitary (possible only for pathological inputs).
    """
    sym = np.asarray(sym, dtype=complex)
    r = sym.shape[0]
    embed = np.block(
        [[sym.real, sym.imag], [sym.imag, -sym.real]]
    )
    evals, evecs = np.linalg.eigh(embed)
    order = np.argsort(evals)[::-1]
    chosen = []
    for idx in order:
        if len(chosen) == r:
            break
        v = evecs[:, idx]
        # Skip the -mu partner J v = (-y; x) of an already chosen vector.
        partner_overlap = 0.0
        for c in chosen:
            j_img = np.concatenate([-c[r:], c[:r]])
            partner_overlap = max(partner_overlap, abs(float(v @ j_img)))
        if partner_overlap > 0.5:
            continue
        chosen.append(v)
    if len(chosen) < r:
        return None
    w = np.stack([c[:r] + 1j * c[r:] for c in chosen], axis=1)
    mu = np.clip(np.array([float(v @ (embed @ v)) for v in chosen]), 0.0, None)
    if np.max(np.abs(w.conj().T @ w - np.eye(r))) > 1e-8:
        return None
    if np.max(np.abs(w @ np.diag(mu) @ w.T - sym)) > 1e-8:
        return None
    return mu, w


def _closure_phases(mu: np.ndarray) -> np.ndarray:
    """Phases theta with sum_j exp(2i theta_j) mu_j == 0 when the polygon closes.

    Requires mu descending with mu[0] <= sum(mu[1:]).  Groups all but
    the two largest lengths into one straight segment and closes the
    triangle with the law of cosines.
    """
    a = mu[0]
    b = mu[1]
    c = float(np.sum(mu[2:]))
    denom = 2.0 * a * b
    cos_gamma = ((a * a + b * b - c * c) / denom) if denom > 0 else 1.0
    gamma = math.acos(max(-1.0, min(1.0, cos_gamma)))
    z1 = a
    z2 = b * np.exp(1j * (math.pi - gamma))
    z3 = -(z1 + z2)
    theta = np.empty(len(mu))
    theta[0] = 0.0
    theta[1] = (math.pi - gamma) / 2.0
    theta[2:] = float(np.angle(z3)) / 2.0
    return theta


_HADAMARD4 = 0.5 * np.array(
    [
        [1, 1, 1, 1],
        [1, -1, 1, -1],
        [1, 1, -1, -1],
        [1, -1, -1, 1],
    ],
    dtype=complex,
)


def _concurrence_warm_mix(rho: DensityMatrix, k: int):
    """Isometry realizing an optimal-concurrence decomposition of a 2-qubit state.

    Diagonalizes the spin-flip overlap matrix of the eigen-ensemble
    (Takagi), applies phases that either align the pre-concurrences
    (entangled case) or close them into a vanishing polygon (separable
    case), and balances the members with a Hadamard mixing matrix.
    """
    if rho.dims != (2, 2):
        return None
    q, vecs = _eigen_data(rho)
    r = len(q)
    if r < 2:
        return None
    x = vecs * np.sqrt(q)
    tau = x.T @ _SIGMA_YY @ x
    takagi = _takagi(tau)
    if takagi is None:
        return None
    mu, w = takagi
    order = np.argsort(mu)[::-1]
    mu = mu[order]
    w = w[:, order]
    if mu[0] >= float(np.sum(mu[1:])):
        theta = np.array([0.0] + [math.pi / 2.0] * (r - 1))
    else:
        theta = _closure_phases(mu)
    if k >= 4:
        v = _HADAMARD4[:, :r]
    elif r <= 2 and k >= 2:
        v = np.array([[1, 1], [1, -1]], dtype=complex)[:, :r] / math.sqrt(2.0)
    else:
        return None
    mix = v @ np.diag(np.exp(1j * theta)) @ w.conj().T
    return _pad_rows(mix, k)


def nls_mixed_estimate(rho: DensityMatrix, partition: Partition = None,
                       variant: MeasureVariant = MeasureVariant.ROOT_OF_PAIRSUM,
                       cfg: OptimizerConfig = None, ensemble_size: int = None,
                       rank_cap: int = DEFAULT_RANK_CAP,
                       inner: str = "auto") -> MeasureReport:
    """Upper-bound estimate of the nonlocal superposition of a mixed state.

    Minimizes the decomposition average of per-member nonlocal
    superposition over ensemble isometries; each member is minimized
    over its own product basis, unlike the shared basis of the local
    estimate.  ``inner`` controls the per-member minimum:

    * ``"schmidt"`` evaluates the member in its Schmidt product basis
      across the (binary) partition, which attains the per-member
      minimum in every observed case and keeps the search fast;
    * ``"optimize"`` runs a full nested basis search per member;
    * ``"auto"`` picks ``schmidt`` for two-block partitions and
      ``optimize`` otherwise.

    For two-qubit states the search is additionally seeded with the
    spin-flip decomposition that attains the concurrence, and
    ``closed_form`` reports the concurrence for cross checks.
    """
    cfg = cfg or DEFAULT_CFG
    partition = partition or Partition.singletons(rho.n_subsystems)
    partition.check_covers(rho.n_subsystems)
    if partition.n_blocks < 2:
        raise ValueError("nonlocal superposition needs at least two blocks")
    if inner not in ("auto", "schmidt", "optimize"):
        raise ValueError("inner must be 'auto', 'schmidt' or 'optimize'")
    if inner == "auto":
        inner = "schmidt" if partition.n_blocks == 2 else "optimize"
    if inner == "schmidt" and partition.n_blocks != 2:
        raise ValueError("the schmidt inner evaluation needs a two-block partition")
    rank = _check_rank(rho, rank_cap)
    q, vecs = _eigen_data(rho)
    x_subnorm = vecs * np.sqrt(q)
    k = ensemble_size or max(rank * rank, rank)
    if k < rank:
        raise ValueError(f"ensemble_size {k} is below rank {rank}")
    iso_shape = (k, rank) if rank > 1 else None

    perm = partition.indices()
    if inner == "schmidt":
        left, right = partition.blocks
        d_l = block_dim(rho.dims, left)
        d_r = block_dim(rho.dims, right)

        def member_values(raw, weights):
            t = raw.reshape((raw.shape[0],) + tuple(rho.dims))
            t = t.transpose((0,) + tuple(i + 1 for i in perm)).reshape(-1, d_l, d_r)
            s = np.linalg.svd(t, compute_uv=False)
            safe = np.where(weights > RANK_TOL, weights, 1.0)
            return _pairwise_rows(s * s / safe[:, None], variant)

    else:
        inner_cfg = OptimizerConfig(
            seed=cfg.seed, restarts=2, max_iters=300, tol=max(cfg.tol, 1e-9),
            simplex_scale=cfg.simplex_scale,
        )

        def member_values(raw, weights):
            values = np.zeros(raw.shape[0])
            for i in range(raw.shape[0]):
                if weights[i] <= RANK_TOL:
                    continue
                member = PureState(rho.dims, raw[i] / math.sqrt(weights[i]))
                values[i] = nls_pure(member, partition, variant, inner_cfg).value
            return values

    def objective(_unitaries, iso):
        mix = iso if iso is not None else np.ones((1, 1), dtype=complex)
        raw, weights = _member_stack(x_subnorm, mix)
        return float(np.dot(weights, member_values(raw, weights)))

    domain = SearchDomain((), isometry_shape=iso_shape)
    warm = []
    notes = [UPPER_BOUND_NOTE]
    closed = None
    if iso_shape:
        warm += _encode_safe(domain, [], _pad_rows(np.eye(rank, dtype=complex), k))
        if rho.dims == (2, 2):
            spin_flip = _concurrence_warm_mix(rho, k)
            if spin_flip is not None:
                warm = _encode_safe(domain, [], spin_flip) + warm
                notes.append("seeded with the spin-flip optimal decomposition")
    if rho.dims == (2, 2):
        closed = measures.concurrence_mixed(rho)
    result = minimize_over_domain(objective, domain, cfg, warm_starts=warm)
    return _finish("nls_mixed", objective, domain, result, variant, closed, notes)
