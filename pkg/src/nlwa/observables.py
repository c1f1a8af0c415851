"""Observables along the propagation: photon numbers, localization, correlations.

All quantities reduce to sums over |amplitude|^2 weighted by occupation
numbers because every operator involved (N_j, and both branches of the
pair-correlation matrix) is diagonal in the Fock basis.

sigma and the participation ratio are undefined wherever the total photon
number is numerically zero (e.g. the vacuum at z = 0); such grid points are
flagged invalid and excluded from spatial averages.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import FockBasis
from .generator import EvolutionGenerator
from .propagator import iterate_states, top_level_probability

VACUUM_THRESHOLD = 1e-12   # below this total photon number, n_j is undefined
DEFAULT_WINDOW = (10.0, 20.0)


@dataclass(frozen=True)
class ZTrace:
    """Per-grid-point observables plus the correlation matrix at the end.

    Grid points where the distribution is undefined carry NaN in ``n``,
    ``sigma`` and ``pr`` and False in ``validity``.
    """

    zeta_grid: np.ndarray    # (n_z,)
    n: np.ndarray            # (n_z, N) normalized photon numbers
    sigma: np.ndarray        # (n_z,)
    pr: np.ndarray           # (n_z,)
    gamma_final: np.ndarray  # (N, N)
    validity: np.ndarray     # (n_z,) bool
    norm_drift: float = np.nan
    top_level_prob: float = np.nan


def photon_numbers(psi: np.ndarray, basis: FockBasis) -> np.ndarray:
    """<N_j> for every guide: sum_i |psi_i|^2 * occupation_ij."""
    p = np.abs(np.asarray(psi)) ** 2
    return p @ basis.occupations.astype(float)


def normalized_distribution(numbers: np.ndarray) -> np.ndarray | None:
    """n_j = <N_j> / sum_i <N_i>, or None when the total is numerically zero."""
    numbers = np.asarray(numbers, dtype=float)
    total = numbers.sum()
    if total < VACUUM_THRESHOLD:
        return None
    return numbers / total


def sigma(n: np.ndarray) -> float:
    """Standard deviation of the guide position, sigma = sqrt(<M^2> - <M>^2),
    with guide positions M_j = 1..N."""
    n = np.asarray(n, dtype=float)
    m = np.arange(1, n.size + 1, dtype=float)
    mean = n @ m
    radicand = n @ (m * m) - mean * mean
    if radicand < 0.0:
        if radicand < -1e-12:
            raise ValueError(f"negative variance {radicand:.3e}: corrupted distribution")
        radicand = 0.0
    return float(np.sqrt(radicand))


def participation_ratio(n: np.ndarray) -> float:
    """PR = 1 / sum_j n_j^2; 1 means fully localized, N fully delocalized."""
    n = np.asarray(n, dtype=float)
    s = n @ n
    if s == 0.0:
        raise ValueError("participation ratio of an all-zero distribution")
    return float(1.0 / s)


def correlation_matrix(psi: np.ndarray, basis: FockBasis) -> np.ndarray:
    """Pair-correlation matrix Gamma.

    Gamma[q,r] = <A_q† A_r† A_r A_q> for q != r and <A_q†² A_q²> on the
    diagonal, i.e. sum_i p_i n_q n_r off-diagonal and sum_i p_i n_q (n_q - 1)
    on it.  Real, symmetric and non-negative by construction.
    """
    p = np.abs(np.asarray(psi)) ** 2
    occ = basis.occupations.astype(float)
    gamma = occ.T @ (p[:, None] * occ)
    np.fill_diagonal(gamma, np.diag(gamma) - p @ occ)
    return gamma


def spatial_average(values: np.ndarray, zeta_grid: np.ndarray,
                    window: tuple[float, float] = DEFAULT_WINDOW,
                    validity: np.ndarray | None = None) -> float:
    """Mean of a per-grid-point series over grid points strictly inside
    ``window`` (endpoints excluded), skipping invalid points."""
    values = np.asarray(values, dtype=float)
    zeta_grid = np.asarray(zeta_grid, dtype=float)
    lo, hi = window
    mask = (zeta_grid > lo) & (zeta_grid < hi)
    if validity is not None:
        mask &= np.asarray(validity, dtype=bool)
    else:
        mask &= ~np.isnan(values)
    if mask.sum() < 2:
        raise ValueError(
            f"spatial window ({lo}, {hi}) contains fewer than 2 valid grid points"
        )
    return float(values[mask].mean())


def compute_trace(gen: EvolutionGenerator, zeta_grid, psi0: np.ndarray | None = None,
                  krylov_tol: float | None = None) -> ZTrace:
    """Propagate (from the vacuum unless ``psi0`` is given) and accumulate the
    full observable trace without storing intermediate states."""
    from .fock import vacuum_state
    from . import propagator as _prop

    zeta_grid = np.asarray(zeta_grid, dtype=float)
    if psi0 is None:
        psi0 = vacuum_state(gen.basis)
    tol = _prop.DEFAULT_KRYLOV_TOL if krylov_tol is None else krylov_tol

    n_z = zeta_grid.size
    n_modes = gen.basis.n_modes
    n_arr = np.full((n_z, n_modes), np.nan)
    sig_arr = np.full(n_z, np.nan)
    pr_arr = np.full(n_z, np.nan)
    valid = np.zeros(n_z, dtype=bool)
    drift = 0.0
    psi = psi0
    for k, psi in enumerate(iterate_states(gen, psi0, zeta_grid, krylov_tol=tol)):
        drift = max(drift, abs(np.linalg.norm(psi) - 1.0))
        numbers = photon_numbers(psi, gen.basis)
        n = normalized_distribution(numbers)
        if n is not None:
            n_arr[k] = n
            sig_arr[k] = sigma(n)
            pr_arr[k] = participation_ratio(n)
            valid[k] = True
    gamma = correlation_matrix(psi, gen.basis)
    return ZTrace(
        zeta_grid=zeta_grid, n=n_arr, sigma=sig_arr, pr=pr_arr,
        gamma_final=gamma, validity=valid, norm_drift=drift,
        top_level_prob=top_level_probability(gen.basis, psi),
    )
