"""Truncated multimode Fock space and bosonic ladder operators.

The state space of an N-guide array is the tensor product of N single-mode
Fock spaces, each truncated to occupations 0..m-1.  Basis states are
enumerated with guide 1 as the most significant digit of the base-m
expansion, so state indices (and everything serialized downstream) are
deterministic and identical across runs.

Operators are built as sparse matrices directly from the occupation table;
creation out of the top truncated level maps to the zero vector (projected
operator convention).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

# Refuse basis construction above this unless the caller raises the cap.
DEFAULT_DIM_CAP = 10_000_000


class BasisSizeError(RuntimeError):
    """Requested truncated space exceeds the configured dimension cap."""


@dataclass(frozen=True)
class FockBasis:
    """Occupation-number basis for ``n_modes`` guides truncated at ``local_dim``.

    ``occupations[i]`` is the occupation vector of basis state ``i``; mode 1
    is the most significant digit, so ``index = occupations @ strides``.
    """

    n_modes: int
    local_dim: int
    total_dim: int
    occupations: np.ndarray  # (total_dim, n_modes) int64
    strides: np.ndarray      # (n_modes,) int64

    def encode(self, occupation) -> int:
        """Flat index of the basis state |occupation>."""
        occ = np.asarray(occupation, dtype=np.int64)
        if occ.shape != (self.n_modes,):
            raise ValueError(f"occupation must have {self.n_modes} entries")
        if np.any(occ < 0) or np.any(occ >= self.local_dim):
            raise ValueError(
                f"occupation {occ.tolist()} outside truncation 0..{self.local_dim - 1}"
            )
        return int(occ @ self.strides)

    def decode(self, index: int) -> np.ndarray:
        """Occupation vector of basis state ``index``."""
        if not 0 <= index < self.total_dim:
            raise ValueError(f"state index {index} out of range")
        return self.occupations[index].copy()

    def mode_slice(self, mode: int) -> np.ndarray:
        """Occupation of ``mode`` (1-based) across all basis states."""
        self._check_mode(mode)
        return self.occupations[:, mode - 1]

    def top_level_mask(self) -> np.ndarray:
        """Boolean mask of states where any mode sits at the truncation edge."""
        return np.any(self.occupations == self.local_dim - 1, axis=1)

    def _check_mode(self, mode: int) -> None:
        if not 1 <= mode <= self.n_modes:
            raise ValueError(f"mode index {mode} out of range 1..{self.n_modes}")


def build_basis(n_modes: int, local_dim: int, dim_cap: int = DEFAULT_DIM_CAP) -> FockBasis:
    """Construct the truncated basis for ``n_modes`` guides with ``local_dim`` levels.

    Raises ``BasisSizeError`` when local_dim**n_modes exceeds ``dim_cap``
    instead of attempting an allocation that would thrash the machine.
    """
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    if local_dim < 2:
        raise ValueError("local_dim must be >= 2")
    total_dim = local_dim**n_modes
    if total_dim > dim_cap:
        raise BasisSizeError(
            f"total dimension {local_dim}^{n_modes} = {total_dim} exceeds cap {dim_cap}"
        )
    occupations = np.stack(
        np.unravel_index(np.arange(total_dim), (local_dim,) * n_modes), axis=1
    ).astype(np.int64)
    occupations.flags.writeable = False
    strides = local_dim ** np.arange(n_modes - 1, -1, -1, dtype=np.int64)
    strides.flags.writeable = False
    return FockBasis(
        n_modes=n_modes,
        local_dim=local_dim,
        total_dim=total_dim,
        occupations=occupations,
        strides=strides,
    )


def annihilation_op(basis: FockBasis, mode: int) -> sp.csr_matrix:
    """Annihilation operator for ``mode`` (1-based): a|n> = sqrt(n)|n-1>.

    Tensor-product embedding I x .. x a x .. x I realized directly on flat
    indices: lowering mode j shifts the index by -strides[j-1].
    """
    basis._check_mode(mode)
    occ = basis.occupations[:, mode - 1]
    col = np.nonzero(occ > 0)[0]
    row = col - basis.strides[mode - 1]
    val = np.sqrt(occ[col]).astype(np.complex128)
    return sp.csr_matrix((val, (row, col)), shape=(basis.total_dim, basis.total_dim))


def creation_op(basis: FockBasis, mode: int) -> sp.csr_matrix:
    """Creation operator a† for ``mode``; a†|m-1> = 0 under truncation."""
    return annihilation_op(basis, mode).conj().T.tocsr()


def number_op(basis: FockBasis, mode: int) -> sp.csr_matrix:
    """Number operator a†a for ``mode``, diagonal in the Fock basis."""
    basis._check_mode(mode)
    return sp.diags(
        basis.occupations[:, mode - 1].astype(np.complex128), format="csr"
    )


def parity_op(basis: FockBasis) -> sp.csr_matrix:
    """Total-photon-number parity (-1)**(sum_j n_j), diagonal."""
    total = basis.occupations.sum(axis=1)
    return sp.diags(np.where(total % 2 == 0, 1.0, -1.0).astype(np.complex128), format="csr")


def vacuum_state(basis: FockBasis) -> np.ndarray:
    """Unit vector |0,...,0>."""
    psi = np.zeros(basis.total_dim, dtype=np.complex128)
    psi[0] = 1.0
    return psi


def fock_state(basis: FockBasis, occupation) -> np.ndarray:
    """Unit vector for the given occupation; rejects occupations >= local_dim."""
    psi = np.zeros(basis.total_dim, dtype=np.complex128)
    psi[basis.encode(occupation)] = 1.0
    return psi
