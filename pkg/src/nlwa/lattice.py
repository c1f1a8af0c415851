"""Physical description of one waveguide-array realization.

A realization bundles the device constants with the three profiles disorder
acts on: nearest-neighbor couplings C_j (N-1 values), pump amplitudes
|alpha_j| and pump phases arg(alpha_j) (N values each).  The effective
nonlinear drive eta_j = g * |alpha_j| * exp(i phi_j) is derived, never stored.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class PhysicalConstants:
    """Device constants: coupling strength C0 [1/m], nonlinear constant
    g [W^-1/2 / m], base pump amplitude alpha0 [W^1/2], interaction length
    z_max [m] and number of propagation samples n_z."""

    C0: float
    g: float
    alpha0: float
    z_max: float
    n_z: int

    def __post_init__(self):
        if self.C0 <= 0:
            raise ValueError("C0 must be positive")
        if self.g < 0 or self.alpha0 < 0:
            raise ValueError("g and alpha0 must be non-negative")
        if self.z_max <= 0:
            raise ValueError("z_max must be positive")
        if self.n_z < 2:
            raise ValueError("n_z must be at least 2")

    def zeta_grid(self) -> np.ndarray:
        """Dimensionless propagation grid zeta = C0*z, n_z points from 0."""
        return np.linspace(0.0, self.C0 * self.z_max, self.n_z)


@dataclass(frozen=True)
class LatticeRealization:
    """One concrete draw of the coupling / amplitude / phase profiles."""

    constants: PhysicalConstants
    coupling: np.ndarray        # (N-1,) [1/m]
    pump_amplitude: np.ndarray  # (N,)  [W^1/2]
    pump_phase: np.ndarray      # (N,)  radians, stored in [0, 2pi)

    def __post_init__(self):
        coupling = np.asarray(self.coupling, dtype=float)
        amplitude = np.asarray(self.pump_amplitude, dtype=float)
        phase = np.mod(np.asarray(self.pump_phase, dtype=float), TWO_PI)
        n = amplitude.size
        if phase.size != n or coupling.size != n - 1:
            raise ValueError(
                f"profile lengths inconsistent: coupling {coupling.size}, "
                f"amplitude {amplitude.size}, phase {phase.size}"
            )
        if np.any(coupling < 0) or np.any(amplitude < 0):
            raise ValueError("couplings and pump amplitudes must be non-negative")
        for name, arr in (("coupling", coupling), ("pump_amplitude", amplitude),
                          ("pump_phase", phase)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def n_guides(self) -> int:
        return self.pump_amplitude.size


def homogeneous_lattice(constants: PhysicalConstants, n_guides: int,
                        injected_modes, base_phases=None) -> LatticeRealization:
    """Ordered array: every C_j = C0, amplitude alpha0 on the injected guides
    (1-based indices), zero elsewhere, phases zero unless ``base_phases``
    supplies all N of them."""
    if n_guides < 2:
        raise ValueError("need at least 2 guides")
    injected = sorted(set(int(j) for j in injected_modes))
    if not injected:
        raise ValueError("injected_modes is empty: no pump, no dynamics")
    if injected[0] < 1 or injected[-1] > n_guides:
        raise ValueError(f"injected modes {injected} outside 1..{n_guides}")
    amplitude = np.zeros(n_guides)
    amplitude[np.asarray(injected) - 1] = constants.alpha0
    if base_phases is None:
        phase = np.zeros(n_guides)
    else:
        phase = np.asarray(base_phases, dtype=float)
        if phase.shape != (n_guides,):
            raise ValueError(f"base_phases must have {n_guides} entries")
    return LatticeRealization(
        constants=constants,
        coupling=np.full(n_guides - 1, constants.C0),
        pump_amplitude=amplitude,
        pump_phase=phase,
    )


def eta_profile(lattice: LatticeRealization) -> np.ndarray:
    """Effective nonlinear couplings eta_j = g * |alpha_j| * exp(i phi_j)."""
    return (
        lattice.constants.g
        * lattice.pump_amplitude
        * np.exp(1j * lattice.pump_phase)
    )
