"""Physical parameters and the elementary building blocks of a collision cycle.

Natural units hbar = k_B = 1 throughout; temperature is quoted in units of
the qubit gap Omega (default Omega = 1). Basis convention on every qubit:
index 0 = |g>, index 1 = |e>, so the excited population of a one-qubit
state rho is rho[1, 1].

Two primitives drive the dynamics:

* the exact thermal relaxation channel of a qubit coupled to a bosonic
  bath at mean occupation n = 1/(exp(Omega/T) - 1): populations relax
  toward the Gibbs weights at rate G = gamma*tau_se*(2n+1) per step and
  coherences decay at half that rate;
* the resonant partial-swap unitary exp(-i*theta*(s+ a- + s- a+)) that
  exchanges excitations between the probe and one ancilla.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import ComplexMatrix, DensityMatrix, validate_state

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
# Lowering operator |g><e| in the (g, e) basis.
SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SIGMA_PLUS = SIGMA_MINUS.conj().T


@dataclass(frozen=True, eq=False)
class AncillaPrep:
    """Initial one-qubit state of every ancilla in the stream.

    Use the module constants GROUND, EXCITED and PLUS, or
    :meth:`AncillaPrep.custom` for an arbitrary (possibly mixed) state.
    """

    kind: str
    rho: np.ndarray | None = None

    _KINDS = ("g", "e", "plus", "custom")

    def __post_init__(self) -> None:
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown ancilla preparation {self.kind!r}")
        if self.kind == "custom":
            if self.rho is None:
                raise ValueError("custom preparation requires a density matrix")
        elif self.rho is not None:
            raise ValueError(f"preparation {self.kind!r} takes no matrix")

    @classmethod
    def custom(cls, mat: ComplexMatrix) -> "AncillaPrep":
        state = validate_state(mat, tol=1e-10)
        if state.num_qubits != 1:
            raise ValueError("custom ancilla preparation must be a one-qubit state")
        return cls("custom", state.mat)

    def state(self) -> np.ndarray:
        """The 2x2 density matrix of a fresh ancilla."""
        if self.kind == "g":
            return np.diag([1.0, 0.0]).astype(complex)
        if self.kind == "e":
            return np.diag([0.0, 1.0]).astype(complex)
        if self.kind == "plus":
            return np.full((2, 2), 0.5, dtype=complex)
        return np.array(self.rho, dtype=complex)


GROUND = AncillaPrep("g")
EXCITED = AncillaPrep("e")
PLUS = AncillaPrep("plus")


@dataclass(frozen=True)
class ModelParams:
    """All physical parameters of the collision model.

    temperature   bath temperature T in units of hbar*Omega/k_B, > 0
    gamma_tau_se  dimensionless probe-bath coupling gamma*tau_se, >= 0
    g_tau_sa      partial-swap angle g*tau_sa, in [0, pi/2]
    omega         qubit gap Omega (natural units)
    ancilla_prep  initial state of the ancilla stream
    """

    temperature: float
    gamma_tau_se: float
    g_tau_sa: float
    omega: float = 1.0
    ancilla_prep: AncillaPrep = GROUND

    def __post_init__(self) -> None:
        if not self.temperature > 0:
            raise ValueError(f"temperature must be positive, got {self.temperature}")
        if self.gamma_tau_se < 0:
            raise ValueError(f"gamma_tau_se must be >= 0, got {self.gamma_tau_se}")
        if not 0 <= self.g_tau_sa <= math.pi / 2 + 1e-12:
            raise ValueError(f"g_tau_sa must lie in [0, pi/2], got {self.g_tau_sa}")
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")

    @property
    def n_bar(self) -> float:
        """Bath mean occupation at the probe frequency."""
        return mean_occupation(self)

    @property
    def big_gamma(self) -> float:
        """Effective relaxation parameter G = gamma*tau_se*(2*n_bar + 1)."""
        return self.gamma_tau_se * (2.0 * self.n_bar + 1.0)


def mean_occupation(params: ModelParams) -> float:
    """Bose-Einstein occupation n = 1/(exp(Omega/T) - 1).

    Evaluated as exp(-x)/(1 - exp(-x)) with x = Omega/T: expm1 keeps the
    high-temperature (small x) regime accurate and the low-temperature
    side underflows to zero instead of overflowing.
    """
    x = params.omega / params.temperature
    return math.exp(-x) / -math.expm1(-x)


def thermal_qubit_state(params: ModelParams) -> DensityMatrix:
    """Gibbs state of one qubit: diag(p_g, p_e) with p_e = n/(2n+1)."""
    n = params.n_bar
    p_e = n / (2.0 * n + 1.0)
    return DensityMatrix(np.diag([1.0 - p_e, p_e]).astype(complex), 1)


def thermal_map_factors(params: ModelParams) -> tuple[float, float, float]:
    """Closed-form factors of the integrated relaxation channel.

    Returns ``(pop_decay, coh_decay, p_excited)``: populations approach the
    Gibbs weights as p_e -> p_e*pop_decay + p_excited*(1 - pop_decay) with
    pop_decay = exp(-G), coherences shrink by coh_decay = exp(-G/2).
    """
    g = params.big_gamma
    n = params.n_bar
    return math.exp(-g), math.exp(-g / 2.0), n / (2.0 * n + 1.0)


def thermal_map_mat(
    mat: ComplexMatrix, qubit: int, num_qubits: int, params: ModelParams
) -> ComplexMatrix:
    """Apply the exact thermal channel to one qubit of a register matrix.

    Linear in ``mat`` and valid for arbitrary (non-Hermitian) operators,
    which the superoperator construction relies on. Identity on all other
    qubits; cost O(4^num_qubits), no superoperator is built.
    """
    if not 0 <= qubit < num_qubits:
        raise IndexError(f"qubit index {qubit} out of range for {num_qubits} qubits")
    pop_decay, coh_decay, p_e = thermal_map_factors(params)
    p_g = 1.0 - p_e

    t = np.asarray(mat, dtype=complex).reshape((2,) * (2 * num_qubits))
    t = np.moveaxis(t, (qubit, num_qubits + qubit), (0, 1))
    gg, ge, eg, ee = t[0, 0], t[0, 1], t[1, 0], t[1, 1]
    block_trace = gg + ee

    out = np.empty_like(t)
    out[0, 0] = p_g * block_trace + pop_decay * (gg - p_g * block_trace)
    out[1, 1] = p_e * block_trace + pop_decay * (ee - p_e * block_trace)
    out[0, 1] = coh_decay * ge
    out[1, 0] = coh_decay * eg
    out = np.moveaxis(out, (0, 1), (qubit, num_qubits + qubit))
    d = 2**num_qubits
    return out.reshape(d, d)


def apply_thermal_map(
    rho: DensityMatrix, system_qubit: int, params: ModelParams
) -> DensityMatrix:
    """Thermal channel on the designated qubit of a validated state."""
    out = thermal_map_mat(rho.mat, system_qubit, rho.num_qubits, params)
    return DensityMatrix(out, rho.num_qubits)


def partial_swap_unitary(theta: float) -> ComplexMatrix:
    """Resonant excitation-exchange unitary on (system, ancilla).

    Identity on |gg> and |ee>; on span{|ge>, |eg>} it acts as
    [[cos t, -i sin t], [-i sin t, cos t]]. theta = 0 is the identity,
    theta = pi/2 a full swap up to a phase.
    """
    u = np.eye(4, dtype=complex)
    c, s = math.cos(theta), math.sin(theta)
    u[1, 1] = u[2, 2] = c
    u[1, 2] = u[2, 1] = -1j * s
    return u


def thermal_fisher_information(params: ModelParams) -> float:
    """Temperature Fisher information of a fully thermalized qubit.

    Variance form: F_th = Var(H)/T^4 with H = Omega*sigma_z/2 in the Gibbs
    state, which evaluates to (Omega/(2 T^2))^2 * sech^2(Omega/(2 T)).
    """
    x = params.omega / (2.0 * params.temperature)
    return (x / params.temperature) ** 2 / math.cosh(x) ** 2
