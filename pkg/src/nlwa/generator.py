"""Hermitian generator of the spatial evolution.

For a lattice realization the generator is

    K = sum_{j=1}^{N-1} C_j (A_{j+1} A_j† + A_j A_{j+1}†)
      + sum_{j=1}^{N}   (eta_j A_j†² + conj(eta_j) A_j²)

in units of 1/m.  The hopping sum runs over the N-1 physical links only
(open boundaries: the array walls reflect).  The pump enters solely through
eta_j; it is a classical parameter, not a quantum mode.  K is exactly
Hermitian by construction (built as T + T†).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .fock import FockBasis, annihilation_op
from .lattice import LatticeRealization, eta_profile


@dataclass(frozen=True)
class EvolutionGenerator:
    """Sparse Hermitian generator K for one lattice realization."""

    basis: FockBasis
    K: sp.csr_matrix
    lattice: LatticeRealization

    @property
    def dim(self) -> int:
        return self.basis.total_dim


def build_generator(basis: FockBasis, lattice: LatticeRealization) -> EvolutionGenerator:
    """Assemble K from the coupling profile and eta_j = g|alpha_j|e^{i phi_j}."""
    n = basis.n_modes
    if lattice.n_guides != n:
        raise ValueError(
            f"basis has {n} modes but lattice has {lattice.n_guides} guides"
        )
    eta = eta_profile(lattice)
    ann = [annihilation_op(basis, j) for j in range(1, n + 1)]
    create = [a.conj().T.tocsr() for a in ann]

    T = sp.csr_matrix((basis.total_dim, basis.total_dim), dtype=np.complex128)
    for j in range(n - 1):
        if lattice.coupling[j] != 0.0:
            T = T + lattice.coupling[j] * (ann[j + 1] @ create[j])
    for j in range(n):
        if eta[j] != 0.0:
            T = T + eta[j] * (create[j] @ create[j])

    K = (T + T.conj().T).tocsr()
    K.sort_indices()
    return EvolutionGenerator(basis=basis, K=K, lattice=lattice)
