"""Dense complex linear algebra underlying the superposition measures.

Everything here works on plain numpy arrays: tensor products, partial
traces, spectral decompositions, and an angle chart for the unitary
group U(d).  The chart factors a unitary into d(d-1)/2 two-level
rotations (one mixing angle and one phase each, planes ordered
lexicographically) followed by a diagonal phase matrix, so a d-by-d
unitary is described by exactly d*d real angles.  The chart is exact:
``angles_from_unitary`` inverts ``unitary_from_angles`` for every
unitary, which the optimizer relies on when seeding basis searches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Composite dimensions above this are refused; the package targets desk scale.
MAX_DIM = 64

HERMITIAN_TOL = 1e-10
UNITARY_TOL = 1e-12

_EPS = 1e-14


class DimensionLimitError(ValueError):
    """The requested operation would exceed the supported matrix size."""


def kron(a: np.ndarray, b: np.ndarray, max_dim: int = MAX_DIM) -> np.ndarray:
    """Kronecker (tensor) product with a guard on the result size."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if rows > max_dim or cols > max_dim:
        raise DimensionLimitError(
            f"kron result would be {rows}x{cols}, above the {max_dim} limit"
        )
    return np.kron(a, b)


def partial_trace(rho: np.ndarray, dims, keep) -> np.ndarray:
    """Trace a square matrix on ``prod(dims)`` down to the subsystems in ``keep``.

    ``dims`` lists the per-subsystem dimensions in tensor order and
    ``keep`` is the set of subsystem indices retained.  Kept subsystems
    appear in ascending index order in the result.
    """
    rho = np.asarray(rho, dtype=complex)
    dims = tuple(int(d) for d in dims)
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise ValueError(f"matrix shape {rho.shape} does not match dims {dims}")
    n = len(dims)
    keep = tuple(sorted(set(int(k) for k in keep)))
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} subsystems")
    t = rho.reshape(dims + dims)
    for ax in sorted((i for i in range(n) if i not in keep), reverse=True):
        t = np.trace(t, axis1=ax, axis2=ax + t.ndim // 2)
    kept_dim = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(kept_dim, kept_dim)


def svd(m: np.ndarray):
    """Full SVD ``m = u @ diag(s) @ v.conj().T`` with ``s`` sorted descending.

    Returns ``(u, s, v)`` where both ``u`` and ``v`` are square unitaries.
    """
    m = np.asarray(m, dtype=complex)
    u, s, vh = np.linalg.svd(m, full_matrices=True)
    return u, s, vh.conj().T


def eig_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL):
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Returns ``(w, v)`` with ``m @ v[:, k] == w[k] * v[:, k]`` and
    orthonormal columns.  Raises ``ValueError`` when ``m`` deviates from
    Hermiticity by more than ``tol`` in max-abs norm.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("eig_hermitian needs a square matrix")
    if np.max(np.abs(m - m.conj().T)) > tol:
        raise ValueError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh((m + m.conj().T) / 2.0)
    return w[::-1].copy(), v[:, ::-1].copy()


def _planes(dim: int):
    """Two-level rotation planes (i, j), i < j, in lexicographic order."""
    return [(i, j) for i in range(dim) for j in range(i + 1, dim)]


def n_angles(dim: int) -> int:
    """Number of real parameters in the U(dim) chart."""
    return dim * dim


@dataclass(frozen=True)
class UnitaryParams:
    """Angle coordinates of a d-by-d unitary.

    Layout: d(d-1)/2 mixing angles (one per plane, lexicographic order),
    then d(d-1)/2 rotation phases in the same order, then d diagonal
    phases.  All angles are in radians.
    """

    dim: int
    angles: tuple

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        angles = tuple(float(a) for a in self.angles)
        if len(angles) != n_angles(self.dim):
            raise ValueError(
                f"U({self.dim}) needs {n_angles(self.dim)} angles, got {len(angles)}"
            )
        object.__setattr__(self, "angles", angles)


def _compose_unitary(dim: int, angles: np.ndarray) -> np.ndarray:
    """Build the unitary for an angle vector (fast path, no validation)."""
    if dim == 2:
        half = 0.5 * angles[0]
        s = math.sin(half)
        c = math.cos(half)
        e_plus = complex(math.cos(angles[1]), math.sin(angles[1]))
        d0 = complex(math.cos(angles[2]), math.sin(angles[2]))
        d1 = complex(math.cos(angles[3]), math.sin(angles[3]))
        return np.array(
            [
                [s * d0, -c * e_plus.conjugate() * d1],
                [c * e_plus * d0, s * d1],
            ]
        )
    npl = dim * (dim - 1) // 2
    thetas = angles[:npl]
    phis = angles[npl : 2 * npl]
    deltas = angles[2 * npl :]
    u = np.diag(np.exp(1j * deltas)).astype(complex)
    planes = _planes(dim)
    # Right-to-left application matches the product R_01 R_02 ... R_ij ... D.
    for k in range(npl - 1, -1, -1):
        i, j = planes[k]
        half = 0.5 * thetas[k]
        s = math.sin(half)
        c = math.cos(half)
        e_plus = complex(math.cos(phis[k]), math.sin(phis[k]))
        row_i = u[i].copy()
        row_j = u[j]
        u[i] = s * row_i - c * e_plus.conjugate() * row_j
        u[j] = c * e_plus * row_i + s * row_j
    return u


def unitary_from_angles(params: UnitaryParams) -> np.ndarray:
    """Reconstruct the unitary matrix described by ``params``."""
    return _compose_unitary(params.dim, np.asarray(params.angles, dtype=float))


def angles_from_unitary(u: np.ndarray, tol: float = 1e-10) -> UnitaryParams:
    """Invert the angle chart: find parameters that rebuild ``u`` exactly.

    Works by eliminating the below-diagonal entries with two-level
    rotations taken in lexicographic plane order; what remains is the
    diagonal phase matrix.
    """
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError("expected a square matrix")
    dim = u.shape[0]
    if np.max(np.abs(u.conj().T @ u - np.eye(dim))) > max(tol, 1e-8):
        raise ValueError("matrix is not unitary within tolerance")
    m = u.astype(complex).copy()
    thetas = []
    phis = []
    for i, j in _planes(dim):
        a = m[i, i]
        b = m[j, i]
        ra = abs(a)
        rb = abs(b)
        if ra > _EPS and rb > _EPS:
            theta = 2.0 * math.atan2(ra, rb)
            phi = float(np.angle(b) - np.angle(a))
        elif ra > _EPS:  # b ~ 0: the plane is already eliminated
            theta = math.pi
            phi = 0.0
        else:  # a ~ 0: swap the pivot up
            theta = 0.0
            phi = 0.0
        half = 0.5 * theta
        s = math.sin(half)
        c = math.cos(half)
        e_plus = complex(math.cos(phi), math.sin(phi))
        row_i = m[i].copy()
        row_j = m[j]
        # Rows transform by the inverse rotation; entry (j, i) becomes zero.
        m[i] = s * row_i + c * e_plus.conjugate() * row_j
        m[j] = -c * e_plus * row_i + s * row_j
        thetas.append(theta)
        phis.append(phi)
    deltas = [float(np.angle(m[k, k])) for k in range(dim)]
    return UnitaryParams(dim, tuple(thetas + phis + deltas))


def random_unitary(dim: int, seed: int) -> np.ndarray:
    """Haar-distributed unitary, deterministic for a fixed seed."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))
