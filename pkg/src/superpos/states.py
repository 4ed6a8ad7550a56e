"""State containers and factories.

Pure states, density matrices, probability-weighted ensembles and
partitions of the subsystem set, together with Schmidt decomposition,
the isometry construction that enumerates all ensemble realizations of
a density matrix, a catalog of named states used throughout the test
and CLI layers, and a JSON file format for both state kinds.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import linalg

NORM_TOL = 1e-10
PSD_TOL = 1e-10
# Eigenvalues in [-PSD_TOL, RANK_TOL) are treated as zero when ranking.
RANK_TOL = 1e-12

_PHASE_EPS = 1e-12


@dataclass(frozen=True)
class InvariantViolation:
    """One failed structural check, with the measured residual."""

    name: str
    residual: float
    tolerance: float

    def __str__(self):
        return f"{self.name}: residual {self.residual:.3e} (tolerance {self.tolerance:.1e})"


class StateValidationError(ValueError):
    """Raised when a state object fails its structural invariants."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


def _check_dims(dims) -> tuple:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise ValueError(f"invalid subsystem dimensions {dims}")
    if int(np.prod(dims)) > linalg.MAX_DIM:
        raise linalg.DimensionLimitError(
            f"total dimension {int(np.prod(dims))} exceeds {linalg.MAX_DIM}"
        )
    return dims


def validate_pure_arrays(dims, amps) -> list:
    """Structural checks for a pure-state amplitude vector; returns violations."""
    dims = tuple(int(d) for d in dims)
    amps = np.asarray(amps, dtype=complex).ravel()
    out = []
    expected = int(np.prod(dims))
    if amps.size != expected:
        out.append(InvariantViolation("amplitude count", float(abs(amps.size - expected)), 0.0))
        return out
    if not np.all(np.isfinite(amps.view(float))):
        out.append(InvariantViolation("finite amplitudes", math.inf, 0.0))
        return out
    norm_residual = abs(float(np.sum(np.abs(amps) ** 2)) - 1.0)
    if norm_residual > NORM_TOL:
        out.append(InvariantViolation("normalization", norm_residual, NORM_TOL))
    return out


def validate_density_arrays(dims, mat) -> list:
    """Structural checks for a density matrix; returns violations."""
    dims = tuple(int(d) for d in dims)
    mat = np.asarray(mat, dtype=complex)
    out = []
    expected = int(np.prod(dims))
    if mat.shape != (expected, expected):
        out.append(InvariantViolation("matrix shape", float(abs(mat.size - expected**2)), 0.0))
        return out
    if not np.all(np.isfinite(mat.view(float))):
        out.append(InvariantViolation("finite entries", math.inf, 0.0))
        return out
    herm = float(np.max(np.abs(mat - mat.conj().T)))
    if herm > linalg.HERMITIAN_TOL:
        out.append(InvariantViolation("hermiticity", herm, linalg.HERMITIAN_TOL))
        return out
    evals = np.linalg.eigvalsh((mat + mat.conj().T) / 2.0)
    if evals[0] < -PSD_TOL:
        out.append(InvariantViolation("positivity", float(-evals[0]), PSD_TOL))
    trace_residual = abs(float(np.trace(mat).real) - 1.0) + abs(float(np.trace(mat).imag))
    if trace_residual > NORM_TOL:
        out.append(InvariantViolation("unit trace", trace_residual, NORM_TOL))
    return out


@dataclass(frozen=True)
class PureState:
    """Normalized amplitude vector over an explicit tensor-product structure.

    The global phase is fixed on construction: the first amplitude of
    magnitude above 1e-12 is rotated to the positive real axis, so two
    states equal up to a phase compare equal entrywise.
    """

    dims: tuple
    amps: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        amps = np.array(self.amps, dtype=complex).ravel()
        violations = validate_pure_arrays(dims, amps)
        if violations:
            raise StateValidationError(violations)
        nz = np.flatnonzero(np.abs(amps) > _PHASE_EPS)
        if nz.size:
            phase = amps[nz[0]] / abs(amps[nz[0]])
            amps = amps / phase
        amps.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amps", amps)

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per subsystem."""
        return self.amps.reshape(self.dims)

    def density(self) -> "DensityMatrix":
        return DensityMatrix(self.dims, np.outer(self.amps, self.amps.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace operator with subsystem dims."""

    dims: tuple
    mat: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        mat = np.array(self.mat, dtype=complex)
        violations = validate_density_arrays(dims, mat)
        if violations:
            raise StateValidationError(violations)
        mat.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mat", mat)

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def eigensystem(self):
        """Eigenvalues (descending, clipped at zero) and eigenvector columns."""
        w, v = linalg.eig_hermitian(self.mat)
        return np.clip(w, 0.0, None), v

    @property
    def rank(self) -> int:
        w, _ = self.eigensystem()
        return int(np.sum(w > RANK_TOL))

    def eigen_ensemble(self) -> "Ensemble":
        """The spectral decomposition as an ensemble (zero modes dropped)."""
        w, v = self.eigensystem()
        keep = w > RANK_TOL
        probs = w[keep] / float(np.sum(w[keep]))
        members = [PureState(self.dims, v[:, i]) for i in np.flatnonzero(keep)]
        return Ensemble(tuple(probs), tuple(members))

    def marginal(self, block) -> np.ndarray:
        """Reduced matrix on the given subsystem indices."""
        return linalg.partial_trace(self.mat, self.dims, block)


@dataclass(frozen=True)
class Ensemble:
    """Probability-weighted list of pure states on identical subsystems."""

    probs: tuple
    members: tuple

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        members = tuple(self.members)
        if len(probs) != len(members) or not members:
            raise ValueError("probs and members must be equal-length and nonempty")
        if any(p < -NORM_TOL for p in probs):
            raise ValueError("ensemble probabilities must be nonnegative")
        if abs(sum(probs) - 1.0) > NORM_TOL:
            raise ValueError(f"ensemble probabilities sum to {sum(probs)}, not 1")
        dims = members[0].dims
        if any(m.dims != dims for m in members):
            raise ValueError("ensemble members disagree on subsystem dimensions")
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "members", members)

    @property
    def dims(self) -> tuple:
        return self.members[0].dims

    def density(self) -> DensityMatrix:
        mat = np.zeros((self.members[0].dim,) * 2, dtype=complex)
        for p, m in zip(self.probs, self.members):
            if p > 0.0:
                mat += p * np.outer(m.amps, m.amps.conj())
        return DensityMatrix(self.dims, mat)


@dataclass(frozen=True)
class Partition:
    """Disjoint blocks of subsystem indices; order fixes the block labelling."""

    blocks: tuple

    def __post_init__(self):
        blocks = tuple(tuple(sorted(int(i) for i in b)) for b in self.blocks)
        if not blocks or any(not b for b in blocks):
            raise ValueError("partition blocks must be nonempty")
        flat = [i for b in blocks for i in b]
        if len(flat) != len(set(flat)):
            raise ValueError("partition blocks must be disjoint")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    def indices(self) -> tuple:
        return tuple(i for b in self.blocks for i in b)

    def check_covers(self, n_subsystems: int):
        if sorted(self.indices()) != list(range(n_subsystems)):
            raise ValueError(
                f"partition {self.blocks} does not cover subsystems 0..{n_subsystems - 1}"
            )

    @staticmethod
    def singletons(n_subsystems: int) -> "Partition":
        return Partition(tuple((i,) for i in range(n_subsystems)))


def block_dim(dims, block) -> int:
    return int(np.prod([dims[i] for i in block]))


def to_block_matrix(psi: PureState, blocks_left, blocks_right) -> np.ndarray:
    """Amplitudes as a matrix whose row/column indices run over two index groups."""
    left = tuple(blocks_left)
    right = tuple(blocks_right)
    perm = left + right
    if sorted(perm) != list(range(psi.n_subsystems)):
        raise ValueError("index groups must cover every subsystem exactly once")
    t = psi.tensor().transpose(perm)
    return t.reshape(block_dim(psi.dims, left), block_dim(psi.dims, right))


def schmidt_decompose(psi: PureState, bipartition: Partition):
    """Schmidt data of a pure state across a two-block partition.

    Returns ``(coeffs, left_basis, right_basis)``: nonnegative
    coefficients sorted descending with sum of squares 1, and unitaries
    whose k-th columns are the matching local vectors, so that
    ``sum_k c_k |u_k>|v_k>`` rebuilds the state (up to global phase)
    in block-major subsystem order.
    """
    if bipartition.n_blocks != 2:
        raise ValueError(f"need exactly 2 blocks, got {bipartition.n_blocks}")
    bipartition.check_covers(psi.n_subsystems)
    m = to_block_matrix(psi, bipartition.blocks[0], bipartition.blocks[1])
    u, s, v = linalg.svd(m)
    # Right kets are the conjugated columns of v: m = u diag(s) v^dagger.
    return s, u, v.conj()


def schmidt_coefficients(psi: PureState, block) -> np.ndarray:
    """Schmidt coefficients across block | complement, sorted descending."""
    block = tuple(sorted(block))
    comp = tuple(i for i in range(psi.n_subsystems) if i not in block)
    if not comp:
        raise ValueError("block must leave a nonempty complement")
    m = to_block_matrix(psi, block, comp)
    return np.linalg.svd(m, compute_uv=False)


def ensemble_from_isometry(rho: DensityMatrix, mix: np.ndarray) -> Ensemble:
    """Realize ``rho`` as the ensemble selected by an isometry on its eigen-ensemble.

    ``mix`` must have ``rank(rho)`` columns and satisfy
    ``mix.conj().T @ mix == I``.  Unnormalized members are
    ``sum_j mix[i, j] * sqrt(q_j) |e_j>`` over the eigen-ensemble
    ``{q_j, |e_j>}``; every ensemble realizing ``rho`` arises this way.
    """
    mix = np.asarray(mix, dtype=complex)
    if mix.ndim != 2:
        raise ValueError("mix must be a matrix")
    w, v = rho.eigensystem()
    keep = np.flatnonzero(w > RANK_TOL)
    r = keep.size
    if mix.shape[1] != r:
        raise ValueError(f"mix has {mix.shape[1]} columns but rank(rho) = {r}")
    if mix.shape[0] < r:
        raise ValueError("mix must have at least rank(rho) rows")
    gram_err = float(np.max(np.abs(mix.conj().T @ mix - np.eye(r))))
    if gram_err > 1e-10:
        raise ValueError(f"mix is not an isometry (deviation {gram_err:.3e})")
    subnorm = v[:, keep] * np.sqrt(w[keep])  # columns sqrt(q_j)|e_j>
    raw = subnorm @ mix.T  # column i is the unnormalized member i
    probs = np.sum(np.abs(raw) ** 2, axis=0)
    probs = probs / float(np.sum(probs))
    members = []
    for i in range(mix.shape[0]):
        if probs[i] > RANK_TOL:
            members.append(PureState(rho.dims, raw[:, i] / np.linalg.norm(raw[:, i])))
        else:
            filler = np.zeros(rho.dim, dtype=complex)
            filler[0] = 1.0
            members.append(PureState(rho.dims, filler))
    return Ensemble(tuple(probs), tuple(members))


def isometry_from_ensemble(rho: DensityMatrix, probs, members) -> np.ndarray:
    """Recover the isometry mapping the eigen-ensemble of ``rho`` onto an ensemble.

    Inverse of ``ensemble_from_isometry``: given any ensemble
    ``{p_k, |psi_k>}`` realizing ``rho``, returns the matrix ``mix`` with
    ``mix[k, j] = <e_j| sqrt(p_k) psi_k> / sqrt(q_j)`` over the
    eigen-ensemble ``{q_j, |e_j>}``.
    """
    w, v = rho.eigensystem()
    keep = np.flatnonzero(w > RANK_TOL)
    basis = v[:, keep]
    subnorm = np.stack(
        [math.sqrt(max(p, 0.0)) * np.asarray(m.amps) for p, m in zip(probs, members)]
    )
    return (subnorm @ basis.conj()) / np.sqrt(w[keep])[None, :]


def apply_block_unitary(psi: PureState, block, u: np.ndarray) -> PureState:
    """Apply a unitary acting on the merged Hilbert space of ``block``."""
    block = tuple(sorted(block))
    comp = tuple(i for i in range(psi.n_subsystems) if i not in block)
    perm = block + comp
    t = psi.tensor().transpose(perm)
    d_b = block_dim(psi.dims, block)
    m = u @ t.reshape(d_b, -1)
    shaped = m.reshape([psi.dims[i] for i in perm])
    inverse = np.argsort(perm)
    return PureState(psi.dims, shaped.transpose(inverse).ravel())


def validate(state) -> list:
    """Diagnostics report for a state object; empty iff all invariants hold.

    Accepts a PureState, DensityMatrix or Ensemble.  Constructed objects
    normally pass by construction; the array-level helpers
    ``validate_pure_arrays`` / ``validate_density_arrays`` are the entry
    point for unchecked raw data.
    """
    if isinstance(state, PureState):
        return validate_pure_arrays(state.dims, state.amps)
    if isinstance(state, DensityMatrix):
        return validate_density_arrays(state.dims, state.mat)
    if isinstance(state, Ensemble):
        out = []
        total = sum(state.probs)
        if abs(total - 1.0) > NORM_TOL:
            out.append(InvariantViolation("probability sum", abs(total - 1.0), NORM_TOL))
        if any(p < -NORM_TOL for p in state.probs):
            out.append(InvariantViolation("probability sign", -min(state.probs), NORM_TOL))
        for m in state.members:
            out.extend(validate_pure_arrays(m.dims, m.amps))
        return out
    raise TypeError(f"cannot validate object of type {type(state).__name__}")


# ---------------------------------------------------------------------------
# Named-state catalog


def _ket(dims, index_bits) -> np.ndarray:
    amps = np.zeros(int(np.prod(dims)), dtype=complex)
    flat = 0
    for d, i in zip(dims, index_bits):
        flat = flat * d + i
    amps[flat] = 1.0
    return amps


def _require_unit_interval(name, value):
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} parameter must lie in [0, 1], got {value}")
    return value


def _psi_minus():
    amps = np.zeros(4, dtype=complex)
    amps[1] = 1.0 / math.sqrt(2.0)
    amps[2] = -1.0 / math.sqrt(2.0)
    return PureState((2, 2), amps)


def _phi_plus():
    amps = np.zeros(4, dtype=complex)
    amps[0] = amps[3] = 1.0 / math.sqrt(2.0)
    return PureState((2, 2), amps)


def _schmidt_state(alpha):
    alpha = _require_unit_interval("alpha", alpha)
    amps = np.zeros(4, dtype=complex)
    amps[0] = alpha
    amps[3] = math.sqrt(max(0.0, 1.0 - alpha * alpha))
    return PureState((2, 2), amps)


def _fig1_state(lam):
    lam = _require_unit_interval("lambda", lam)
    amps = np.zeros(9, dtype=complex)
    amps[0] = math.sqrt(2.0 / 3.0) * lam
    amps[4] = math.sqrt(1.0 / 3.0) * lam
    amps[8] = math.sqrt(max(0.0, 1.0 - lam * lam))
    return PureState((3, 3), amps)


def _ghz_like(lam):
    lam = _require_unit_interval("lambda", lam)
    amps = np.zeros(8, dtype=complex)
    amps[0] = lam
    amps[7] = math.sqrt(max(0.0, 1.0 - lam * lam))
    return PureState((2, 2, 2), amps)


def _w_state():
    amps = np.zeros(8, dtype=complex)
    amps[1] = amps[2] = amps[4] = 1.0 / math.sqrt(3.0)
    return PureState((2, 2, 2), amps)


def _w_like(lam):
    lam = _require_unit_interval("lambda", lam)
    amps = np.zeros(8, dtype=complex)
    amps[1] = lam / 2.0
    amps[2] = math.sqrt(3.0) * lam / 2.0
    amps[4] = math.sqrt(max(0.0, 1.0 - lam * lam))
    return PureState((2, 2, 2), amps)


def _rsp_state():
    plus = np.array([1.0, 1.0]) / math.sqrt(2.0)
    one = np.array([0.0, 1.0])
    proj_plus = np.outer(plus, plus)
    proj_one = np.outer(one, one)
    mat = 0.5 * np.kron(proj_one, proj_plus) + 0.5 * np.kron(proj_plus, proj_one)
    return DensityMatrix((2, 2), mat)


def _werner(p):
    p = _require_unit_interval("p", p)
    singlet = _psi_minus()
    mat = p * np.outer(singlet.amps, singlet.amps.conj()) + (1.0 - p) * np.eye(4) / 4.0
    return DensityMatrix((2, 2), mat)


_CATALOG = {
    "psi_minus": (_psi_minus, 0),
    "phi_plus": (_phi_plus, 0),
    "schmidt_state": (_schmidt_state, 1),
    "fig1_state": (_fig1_state, 1),
    "ghz": (lambda: _ghz_like(1.0 / math.sqrt(2.0)), 0),
    "ghz_like": (_ghz_like, 1),
    "w_state": (_w_state, 0),
    "w_like": (_w_like, 1),
    "rsp_state": (_rsp_state, 0),
    "werner": (_werner, 1),
}


def catalog_names() -> tuple:
    return tuple(sorted(_CATALOG))


def make_state(name: str, params=()):
    """Build a named state from the catalog.

    ``params`` supplies the family parameters in order (a bare number is
    accepted for single-parameter families).  Returns a PureState or a
    DensityMatrix depending on the entry.
    """
    if name not in _CATALOG:
        raise ValueError(f"unknown state {name!r}; known: {', '.join(catalog_names())}")
    builder, arity = _CATALOG[name]
    if isinstance(params, (int, float)):
        params = (params,)
    params = tuple(params)
    if len(params) != arity:
        raise ValueError(f"state {name!r} takes {arity} parameter(s), got {len(params)}")
    return builder(*params)


# ---------------------------------------------------------------------------
# JSON state files


def _complex_pairs(values) -> list:
    return [[float(z.real), float(z.imag)] for z in values]


def state_to_dict(state) -> dict:
    if isinstance(state, PureState):
        return {"dims": list(state.dims), "amps": _complex_pairs(state.amps)}
    if isinstance(state, DensityMatrix):
        return {"dims": list(state.dims), "rho": [_complex_pairs(row) for row in state.mat]}
    raise TypeError(f"cannot serialize object of type {type(state).__name__}")


def state_from_dict(data: dict):
    if not isinstance(data, dict) or "dims" not in data:
        raise ValueError("state file needs a 'dims' field")
    dims = data["dims"]
    if "amps" in data:
        amps = np.array([complex(re, im) for re, im in data["amps"]])
        return PureState(tuple(dims), amps)
    if "rho" in data:
        mat = np.array([[complex(re, im) for re, im in row] for row in data["rho"]])
        return DensityMatrix(tuple(dims), mat)
    raise ValueError("state file needs either an 'amps' or a 'rho' field")


def save_state(state, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_dict(state), fh)
        fh.write("\n")


def load_state(path):
    with open(path, "r", encoding="utf-8") as fh:
        return state_from_dict(json.load(fh))
