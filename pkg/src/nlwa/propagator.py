"""Spatial propagation psi(z) = exp(i K z) psi(0) on a zeta = C0*z grid.

The state is marched from grid point to grid point with a Lanczos (Krylov)
approximation of the matrix exponential.  The Krylov dimension grows until
the standard residual estimate drops below ``krylov_tol``; an interval that
fails to converge within ``max_krylov`` vectors is bisected, up to a substep
budget.  Everything is deterministic: no randomness enters the integrator,
so identical inputs give bit-identical states.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .fock import FockBasis
from .generator import EvolutionGenerator

logger = logging.getLogger(__name__)

NORM_TOL = 1e-9           # unitarity contract on every grid point
DEFAULT_KRYLOV_TOL = 1e-12
DEFAULT_MAX_KRYLOV = 48
MAX_SUBSTEPS = 2**14       # per grid interval
TOP_LEVEL_WARN = 1e-3      # truncation-leakage warning threshold


class ConvergenceError(RuntimeError):
    """Accuracy contract unattainable within the configured budget."""


@dataclass(frozen=True)
class PropagationResult:
    """States on the zeta grid plus propagation diagnostics.

    ``top_level_prob`` is the final-state probability of any mode sitting at
    the truncation edge n = m-1; it quantifies how hard the run leans on the
    chosen local dimension.
    """

    zeta_grid: np.ndarray
    states: np.ndarray  # (n_points, total_dim) complex; states[0] = psi0
    norm_drift: float
    top_level_prob: float


def _expi_krylov_step(K, psi: np.ndarray, dz: float, tol: float,
                      max_krylov: int) -> np.ndarray | None:
    """One Lanczos step exp(i K dz) psi, or None if max_krylov is hit."""
    nrm = np.linalg.norm(psi)
    m = max_krylov
    V = np.empty((m + 1, psi.size), dtype=np.complex128)
    alphas = np.empty(m)
    betas = np.empty(m)
    V[0] = psi / nrm
    for k in range(m):
        w = K @ V[k]
        a = float(np.real(np.vdot(V[k], w)))
        alphas[k] = a
        w -= a * V[k]
        if k > 0:
            w -= betas[k - 1] * V[k - 1]
        # one classical reorthogonalization pass keeps the basis clean
        w -= (V[: k + 1].conj() @ w) @ V[: k + 1]
        b = float(np.linalg.norm(w))
        evals, evecs = eigh_tridiagonal(alphas[: k + 1], betas[:k])
        y = evecs @ (np.exp(1j * dz * evals) * evecs[0])
        # happy breakdown == exact invariant subspace; otherwise Saad's
        # residual estimate for the exponential
        if b < 1e-14 * max(1.0, abs(a)) or b * abs(dz) * abs(y[-1]) < tol:
            return nrm * (V[: k + 1].T @ y)
        betas[k] = b
        V[k + 1] = w / b
    return None


def _expi_step(K, psi: np.ndarray, dz: float, tol: float, max_krylov: int,
               substeps_left: int = MAX_SUBSTEPS) -> np.ndarray:
    out = _expi_krylov_step(K, psi, dz, tol, max_krylov)
    if out is not None:
        return out
    if substeps_left < 2:
        raise ConvergenceError(
            f"Krylov propagation did not converge for step dz={dz:g} "
            f"within {MAX_SUBSTEPS} substeps"
        )
    half = _expi_step(K, psi, dz / 2.0, tol, max_krylov, substeps_left // 2)
    return _expi_step(K, half, dz / 2.0, tol, max_krylov, substeps_left // 2)


def _check_inputs(gen: EvolutionGenerator, psi0: np.ndarray, zeta_grid: np.ndarray):
    if psi0.shape != (gen.dim,):
        raise ValueError(f"state has dimension {psi0.shape}, generator {gen.dim}")
    if abs(np.linalg.norm(psi0) - 1.0) > NORM_TOL:
        raise ValueError("initial state is not unit-norm")
    if zeta_grid.ndim != 1 or zeta_grid.size < 1:
        raise ValueError("zeta_grid must be a non-empty 1-d array")
    if zeta_grid[0] != 0.0:
        raise ValueError("zeta_grid must start at 0")
    if zeta_grid.size > 1 and np.any(np.diff(zeta_grid) <= 0):
        raise ValueError("zeta_grid must be strictly increasing")


def iterate_states(gen: EvolutionGenerator, psi0: np.ndarray, zeta_grid,
                   krylov_tol: float = DEFAULT_KRYLOV_TOL,
                   max_krylov: int = DEFAULT_MAX_KRYLOV) -> Iterator[np.ndarray]:
    """Yield the state at each grid point without retaining the history.

    Raises ConvergenceError if the norm drifts beyond the unitarity contract.
    """
    zeta_grid = np.asarray(zeta_grid, dtype=float)
    psi0 = np.asarray(psi0, dtype=np.complex128)
    _check_inputs(gen, psi0, zeta_grid)
    C0 = gen.lattice.constants.C0
    psi = psi0.copy()
    yield psi
    for k in range(1, zeta_grid.size):
        dz = (zeta_grid[k] - zeta_grid[k - 1]) / C0
        psi = _expi_step(gen.K, psi, dz, krylov_tol, max_krylov)
        drift = abs(np.linalg.norm(psi) - 1.0)
        if drift > NORM_TOL:
            raise ConvergenceError(
                f"norm drift {drift:.3e} beyond {NORM_TOL:g} at zeta={zeta_grid[k]:g}"
            )
        yield psi


def top_level_probability(basis: FockBasis, psi: np.ndarray) -> float:
    """Probability of basis states with any mode at the top truncated level."""
    mask = basis.top_level_mask()
    return float(np.sum(np.abs(psi[mask]) ** 2))


def evolve(gen: EvolutionGenerator, psi0: np.ndarray, zeta_grid,
           krylov_tol: float = DEFAULT_KRYLOV_TOL,
           max_krylov: int = DEFAULT_MAX_KRYLOV,
           warn_top_level: float | None = TOP_LEVEL_WARN) -> PropagationResult:
    """Propagate psi0 across the zeta grid, keeping every intermediate state.

    For long grids at large dimension this stores n_points * total_dim
    amplitudes; use :func:`iterate_states` to stream instead.
    """
    zeta_grid = np.asarray(zeta_grid, dtype=float)
    states = []
    drift = 0.0
    for psi in iterate_states(gen, psi0, zeta_grid, krylov_tol, max_krylov):
        states.append(psi)
        drift = max(drift, abs(np.linalg.norm(psi) - 1.0))
    stack = np.stack(states)
    top_prob = top_level_probability(gen.basis, stack[-1])
    if warn_top_level is not None and top_prob > warn_top_level:
        logger.warning(
            "truncation leakage: %.3e of the final state sits at the top "
            "Fock level (threshold %.1e); consider a larger local dimension",
            top_prob, warn_top_level,
        )
    return PropagationResult(
        zeta_grid=zeta_grid, states=stack, norm_drift=drift,
        top_level_prob=top_prob,
    )
