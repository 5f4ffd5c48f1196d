"""Entropic optimal transport via Sinkhorn iteration.

Solves  min_T <T, C> - lambda * H(T)  over plans T with prescribed row
marginal r and column marginal c, by alternating scaling of the Gibbs kernel
exp(-C/lambda). Zero-mass rows/columns are excluded from the scaling updates
and reinstated as exactly-zero slices of the returned plan.

Numerical strategy: the plain kernel iteration is used when well-conditioned;
the solve switches to log-domain potentials when the kernel underflows to
zero, when cost_range/lambda is large enough that scaling factors would drift
toward the representable limit, or on the fly if a scaling factor becomes
non-finite. NumericalBlowup is raised only when the log-domain pass itself
fails.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import NumericalBlowup, ShapeMismatch

# Above this exponent range the plain kernel's scaling factors lose precision
# or overflow; e^200 is still comfortably inside float64.
_LOG_DOMAIN_EXPONENT = 200.0

MARGINAL_SUM_ATOL = 1e-9


@dataclass(frozen=True)
class SolverConfig:
    """Entropic regularizer strength, iteration budget, and stop threshold.

    ``tol`` bounds the maximum of the two marginal L1 violations.
    """

    lam: float = 0.1
    max_iters: int = 100
    tol: float = 1e-6

    def __post_init__(self):
        if not (self.lam > 0.0):
            raise ValueError("lambda must be positive")
        if not (self.tol > 0.0):
            raise ValueError("tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


@dataclass(frozen=True)
class TransportPlan:
    """Nonnegative coupling with (approximately) prescribed marginals."""

    entries: np.ndarray  # (N, M)
    converged: bool
    iterations_used: int

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=np.float64)
        e.flags.writeable = False
        object.__setattr__(self, "entries", e)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def row_sums(self) -> np.ndarray:
        return self.entries.sum(axis=1)

    def col_sums(self) -> np.ndarray:
        return self.entries.sum(axis=0)


def as_marginal(weights, length: int | None = None, name: str = "marginal") -> np.ndarray:
    """Validate a probability vector: nonnegative, finite, sums to 1 within 1e-9."""
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or w.size == 0:
        raise ShapeMismatch(f"{name} must be a nonempty 1-D vector, got shape {w.shape}")
    if length is not None and w.shape[0] != length:
        raise ShapeMismatch(f"{name} has length {w.shape[0]}, expected {length}")
    if not np.isfinite(w).all():
        raise ValueError(f"{name} contains non-finite entries")
    if (w < 0.0).any():
        raise ValueError(f"{name} contains negative entries")
    total = float(w.sum())
    if abs(total - 1.0) > MARGINAL_SUM_ATOL:
        raise ValueError(f"{name} sums to {total!r}, expected 1 within {MARGINAL_SUM_ATOL}")
    return w


def _validate_cost(cost) -> np.ndarray:
    C = np.ascontiguousarray(cost, dtype=np.float64)
    if C.ndim != 2 or C.size == 0:
        raise ShapeMismatch(f"cost must be a nonempty 2-D matrix, got shape {C.shape}")
    if not np.isfinite(C).all():
        raise ValueError("cost matrix contains non-finite entries")
    return C


def sinkhorn(cost, r, c, config: SolverConfig | None = None) -> TransportPlan:
    """Entropically regularized optimal transport plan for the given marginals."""
    cfg = config if config is not None else SolverConfig()
    C = _validate_cost(cost)
    n, m = C.shape
    rv = as_marginal(r, n, "row marginal")
    cv = as_marginal(c, m, "column marginal")

    rows = rv > 0.0
    cols = cv > 0.0
    subC = np.ascontiguousarray(C[np.ix_(rows, cols)])
    sub_r = rv[rows]
    sub_c = cv[cols]

    use_log = float(subC.max() - subC.min()) / cfg.lam > _LOG_DOMAIN_EXPONENT
    sub_T = None
    converged = False
    iters = 0
    if not use_log:
        K = np.exp(-subC / cfg.lam)
        if (K == 0.0).any():
            use_log = True
        else:
            u, v, iters, converged, finite = _kernels.sinkhorn_scaling(
                K, sub_r, sub_c, cfg.tol, cfg.max_iters
            )
            if finite:
                sub_T = u[:, None] * K * v[None, :]
            else:
                use_log = True

    if use_log:
        f, g, iters, converged, finite = _kernels.sinkhorn_log(
            subC, sub_r, sub_c, cfg.lam, cfg.tol, cfg.max_iters
        )
        if not finite:
            raise NumericalBlowup(
                f"log-domain Sinkhorn produced non-finite potentials at lambda={cfg.lam}"
            )
        sub_T = np.exp((f[:, None] + g[None, :] - subC) / cfg.lam)

    if not np.isfinite(sub_T).all():
        raise NumericalBlowup("transport plan contains non-finite entries")

    T = np.zeros((n, m))
    T[np.ix_(rows, cols)] = sub_T
    return TransportPlan(T, bool(converged), int(iters))


def transport_cost(plan, cost) -> float:
    """Frobenius inner product <T, C> of a plan with a cost matrix."""
    T = np.asarray(getattr(plan, "entries", plan), dtype=np.float64)
    C = np.asarray(cost, dtype=np.float64)
    if T.shape != C.shape:
        raise ShapeMismatch(f"plan shape {T.shape} != cost shape {C.shape}")
    return float(np.sum(T * C))
