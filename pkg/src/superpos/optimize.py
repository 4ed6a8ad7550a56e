"""Derivative-free minimization over products of unitary groups.

Every minimum in the measure definitions is taken over orthonormal
bases (one unitary per partition block) and, for mixed states, over the
isometry selecting an ensemble decomposition.  A ``SearchDomain``
describes that geometry and maps a flat real parameter vector onto
(unitaries, isometry) pairs; ``minimize_over_domain`` then runs
Nelder-Mead from deterministic warm starts and seeded random restarts
and keeps the best local minimum.  The objectives contain square-root
cusps at vanishing probabilities, which is why a simplex search is used
rather than gradient descent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from .linalg import _compose_unitary, angles_from_unitary, n_angles

GRID_POINT_CAP = 200_000


class ObjectiveError(RuntimeError):
    """The objective returned a non-finite value; carries the offending point."""

    def __init__(self, point, value):
        self.point = np.asarray(point, dtype=float)
        self.value = value
        super().__init__(f"objective returned {value!r} at {self.point.tolist()}")


class GridCapError(ValueError):
    """A seeding grid would exceed the configured point cap."""


@dataclass(frozen=True)
class OptimizerConfig:
    """Settings shared by every minimization.

    ``tol`` is an absolute objective tolerance: a local search stops when
    both the simplex diameter and the objective spread fall below it.
    ``simplex_scale`` is the initial simplex step in radians.
    """

    seed: int = 42
    restarts: int = 32
    max_iters: int = 2000
    tol: float = 1e-10
    simplex_scale: float = 0.3

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not self.tol > 0.0:
            raise ValueError("tol must be positive")


@dataclass(frozen=True)
class OptResult:
    """Outcome of a search: best value, its parameters, and bookkeeping."""

    value: float
    params: np.ndarray
    converged: bool
    evaluations: int


@dataclass(frozen=True)
class SearchDomain:
    """Geometry of a basis-and-decomposition search.

    ``unitary_dims`` lists the dimension of each basis unitary being
    searched; ``isometry_shape`` (rows, cols) adds a complex isometry
    parametrized by two angles per entry (modulus via cosine, phase) and
    orthonormalized column by column.
    """

    unitary_dims: tuple = ()
    isometry_shape: tuple = None

    def __post_init__(self):
        dims = tuple(int(d) for d in self.unitary_dims)
        if any(d < 1 for d in dims):
            raise ValueError("unitary dimensions must be >= 1")
        object.__setattr__(self, "unitary_dims", dims)
        if self.isometry_shape is not None:
            k, r = (int(x) for x in self.isometry_shape)
            if k < r or r < 1:
                raise ValueError(f"isometry shape ({k}, {r}) must have rows >= cols >= 1")
            object.__setattr__(self, "isometry_shape", (k, r))

    @property
    def n_unitary_params(self) -> int:
        return sum(n_angles(d) for d in self.unitary_dims)

    @property
    def n_isometry_params(self) -> int:
        if self.isometry_shape is None:
            return 0
        k, r = self.isometry_shape
        return 2 * k * r

    @property
    def param_count(self) -> int:
        return self.n_unitary_params + self.n_isometry_params

    def decode(self, x: np.ndarray):
        """Map a flat parameter vector to (list of unitaries, isometry or None)."""
        x = np.asarray(x, dtype=float)
        if x.size != self.param_count:
            raise ValueError(f"expected {self.param_count} parameters, got {x.size}")
        unitaries = []
        pos = 0
        for d in self.unitary_dims:
            unitaries.append(_compose_unitary(d, x[pos : pos + n_angles(d)]))
            pos += n_angles(d)
        iso = None
        if self.isometry_shape is not None:
            k, r = self.isometry_shape
            pairs = x[pos:].reshape(k, r, 2)
            raw = np.cos(pairs[..., 0]) * np.exp(1j * pairs[..., 1])
            iso = _orthonormal_columns(raw)
        return unitaries, iso

    def encode(self, unitaries, isometry=None) -> np.ndarray:
        """Inverse of ``decode`` for exact matrices (used for warm starts)."""
        parts = []
        if len(unitaries) != len(self.unitary_dims):
            raise ValueError("wrong number of unitaries for this domain")
        for d, u in zip(self.unitary_dims, unitaries):
            parts.append(np.asarray(angles_from_unitary(np.asarray(u)).angles, dtype=float))
        if (isometry is None) != (self.isometry_shape is None):
            raise ValueError("isometry presence must match the domain")
        if isometry is not None:
            iso = np.asarray(isometry, dtype=complex)
            if iso.shape != self.isometry_shape:
                raise ValueError(f"isometry shape {iso.shape} != {self.isometry_shape}")
            mod = np.clip(np.abs(iso), 0.0, 1.0)
            pairs = np.stack([np.arccos(mod), np.angle(iso)], axis=-1)
            parts.append(pairs.ravel())
        return np.concatenate(parts) if parts else np.zeros(0)

    def random_start(self, rng: np.random.Generator) -> np.ndarray:
        """Draw a starting point with every angle in its natural range."""
        parts = []
        for d in self.unitary_dims:
            npl = d * (d - 1) // 2
            parts.append(rng.uniform(0.0, math.pi, size=npl))
            parts.append(rng.uniform(0.0, 2.0 * math.pi, size=npl + d))
        if self.isometry_shape is not None:
            k, r = self.isometry_shape
            pairs = np.stack(
                [
                    rng.uniform(0.0, math.pi, size=(k, r)),
                    rng.uniform(0.0, 2.0 * math.pi, size=(k, r)),
                ],
                axis=-1,
            )
            parts.append(pairs.ravel())
        return np.concatenate(parts) if parts else np.zeros(0)

    def axis_ranges(self, resolution: int):
        """Per-parameter grid values used by ``grid_seed``.

        Every angle is gridded on [0, 2*pi) with the endpoint excluded;
        even resolutions therefore include 0, pi/2 and pi exactly.
        """
        if resolution < 2:
            raise ValueError("resolution must be >= 2")
        angle = np.linspace(0.0, 2.0 * math.pi, resolution, endpoint=False)
        return [angle] * self.param_count


def _orthonormal_columns(m: np.ndarray) -> np.ndarray:
    """Gram-Schmidt on the columns, with a deterministic rescue for null columns."""
    q = m.astype(complex).copy()
    rows, cols = q.shape
    for j in range(cols):
        for k in range(j):
            q[:, j] -= (q[:, k].conj() @ q[:, j]) * q[:, k]
        norm = np.linalg.norm(q[:, j])
        if norm < 1e-12:
            q[:, j] = 0.0
            q[j % rows, j] = 1.0
            for k in range(j):
                q[:, j] -= (q[:, k].conj() @ q[:, j]) * q[:, k]
            norm = np.linalg.norm(q[:, j])
        q[:, j] /= norm
    return q


def nelder_mead(objective, x0, cfg: OptimizerConfig) -> OptResult:
    """One simplex search from ``x0``.

    Converges when both the simplex diameter and the objective spread
    drop below ``cfg.tol``.  Raises ``ObjectiveError`` if the objective
    ever returns a non-finite value.
    """
    x0 = np.asarray(x0, dtype=float)
    evals = [0]

    def wrapped(x):
        evals[0] += 1
        v = float(objective(x))
        if not math.isfinite(v):
            raise ObjectiveError(x, v)
        return v

    f0 = wrapped(x0)
    if x0.size == 0:
        return OptResult(f0, x0, True, evals[0])
    simplex = np.vstack([x0, x0 + cfg.simplex_scale * np.eye(x0.size)])
    res = _scipy_minimize(
        wrapped,
        x0,
        method="Nelder-Mead",
        options={
            "maxiter": cfg.max_iters,
            "maxfev": max(4 * cfg.max_iters, 400),
            "xatol": cfg.tol,
            "fatol": cfg.tol,
            "initial_simplex": simplex,
            "adaptive": False,
        },
    )
    return OptResult(float(res.fun), np.asarray(res.x, dtype=float), bool(res.success), evals[0])


def minimize_over_domain(objective, domain: SearchDomain, cfg: OptimizerConfig,
                         warm_starts=()) -> OptResult:
    """Best of several local searches over a structured domain.

    ``objective(unitaries, isometry)`` is evaluated through the domain
    chart.  Search starts are the optional ``warm_starts`` (flat
    parameter vectors, tried in order) followed by ``cfg.restarts``
    random points seeded deterministically from ``(cfg.seed, index)``,
    so the result is reproducible and the best value can only improve
    as restarts are added.  Ties keep the earliest start.
    """

    def vector_objective(x):
        unitaries, iso = domain.decode(x)
        return objective(unitaries, iso)

    starts = [np.asarray(w, dtype=float) for w in warm_starts]
    for i in range(cfg.restarts):
        rng = np.random.default_rng([max(cfg.seed, 0), i])
        starts.append(domain.random_start(rng))

    best = None
    total_evals = 0
    for x0 in starts:
        result = nelder_mead(vector_objective, x0, cfg)
        total_evals += result.evaluations
        if best is None or result.value < best.value:
            best = result
    return OptResult(best.value, best.params, best.converged, total_evals)


def grid_seed(domain: SearchDomain, resolution: int, objective,
              cap: int = GRID_POINT_CAP) -> np.ndarray:
    """Pick the best point of a full Cartesian angle grid.

    Each parameter runs over ``resolution`` points of [0, 2*pi).
    Raises ``GridCapError`` when the grid would exceed ``cap`` points.
    Ties keep the lowest linear index.
    """
    axes = domain.axis_ranges(resolution)
    sizes = [len(a) for a in axes]
    total = int(np.prod(sizes)) if sizes else 1
    if total > cap:
        raise GridCapError(f"grid has {total} points, above the cap of {cap}")
    best_x = None
    best_v = math.inf
    point = np.zeros(len(axes))
    for flat in range(total):
        idx = flat
        for axis in range(len(axes) - 1, -1, -1):
            point[axis] = axes[axis][idx % sizes[axis]]
            idx //= sizes[axis]
        unitaries, iso = domain.decode(point)
        v = float(objective(unitaries, iso))
        if v < best_v:
            best_v = v
            best_x = point.copy()
    if best_x is None:
        best_x = np.zeros(len(axes))
    return best_x
