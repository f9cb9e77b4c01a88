"""Temperature estimation: derivatives, quantum and classical Fisher information.

The quantum Fisher information is computed from the spectral form of the
symmetric logarithmic derivative: with rho = sum_i w_i |i><i| and the
temperature derivative d = dT rho,

    F = sum_{i,j} 2 |<i|d|j>|^2 / (w_i + w_j)

over pairs with w_i + w_j above a support cutoff. Derivative weight found
outside the retained support raises a hard error instead of being absorbed
by a pseudo-inverse. Temperature derivatives are central finite differences
with one Richardson extrapolation level, which also yields a built-in
error estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .chain import ChainConfig, build_chain_state
from .linalg import ComplexMatrix, DensityMatrix, _absmax, hermitian_eig
from .model import ModelParams, thermal_fisher_information


class StepTooLarge(ValueError):
    """Finite-difference step too large for a trustworthy derivative."""


class NonSmooth(RuntimeError):
    """Richardson levels disagree; the state is not smooth at this point."""


class SupportLeak(RuntimeError):
    """Derivative weight found outside the retained eigenvalue support."""


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class QfiResult:
    """QFI value with numerical diagnostics.

    derivative_step and richardson_error_estimate are NaN when the
    derivative was supplied directly rather than computed internally.
    """

    value: float
    n_truncated_pairs: int
    derivative_step: float = math.nan
    richardson_error_estimate: float = math.nan

    def __post_init__(self) -> None:
        if self.value < 0:
            raise ValueError(f"QFI must be non-negative, got {self.value}")


@dataclass(frozen=True, eq=False)
class DerivativeResult:
    """Richardson-extrapolated temperature derivative of a state."""

    matrix: np.ndarray
    step: float
    richardson_error: float


@dataclass(frozen=True, eq=False)
class Povm:
    """Positive operator valued measure: PSD elements summing to identity."""

    elements: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        elements = tuple(np.asarray(e, dtype=complex) for e in self.elements)
        object.__setattr__(self, "elements", elements)
        if not elements:
            raise ValueError("POVM needs at least one element")
        dim = elements[0].shape[0]
        total = np.zeros((dim, dim), dtype=complex)
        for e in elements:
            if e.shape != (dim, dim):
                raise DimensionMismatch("POVM elements must share one square dimension")
            if float(np.linalg.eigvalsh((e + e.conj().T) / 2)[0]) < -1e-10:
                raise ValueError("POVM element is not positive semidefinite")
            total += e
        if _absmax(total - np.eye(dim)) > 1e-10:
            raise ValueError("POVM elements do not sum to the identity")

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]


def temperature_derivative(
    state_builder: Callable[[float], DensityMatrix],
    t: float,
    rel_step: float = 1e-5,
) -> DerivativeResult:
    """Temperature derivative of a state family by central differences.

    Uses steps delta and delta/2 with delta = rel_step*t and one Richardson
    extrapolation level; the level disagreement is returned as an error
    estimate. The result is symmetrized and checked to be traceless.
    """
    delta = rel_step * t
    if not 0.0 < delta < 0.1:
        raise StepTooLarge(f"absolute step {delta} outside (0, 0.1)")

    plus_full = state_builder(t + delta).mat
    minus_full = state_builder(t - delta).mat
    plus_half = state_builder(t + delta / 2.0).mat
    minus_half = state_builder(t - delta / 2.0).mat
    d_full = (plus_full - minus_full) / (2.0 * delta)
    d_half = (plus_half - minus_half) / delta
    extrap = (4.0 * d_half - d_full) / 3.0
    disagreement = _absmax(d_half - d_full)

    # FD noise floor: differences below eps*|rho|/delta are indistinguishable
    # from a zero derivative and must not trip the smoothness check.
    state_scale = max(_absmax(plus_full), 1.0)
    noise_floor = 64.0 * np.finfo(float).eps * state_scale / delta
    if disagreement > max(1e-4 * _absmax(extrap), noise_floor):
        raise NonSmooth(
            f"Richardson levels disagree by {disagreement:.3e} "
            f"against derivative scale {_absmax(extrap):.3e}"
        )

    extrap = (extrap + extrap.conj().T) / 2.0
    tr = abs(np.trace(extrap))
    if tr > 1e-9:
        raise ArithmeticError(f"derivative trace {tr:.3e} exceeds 1e-9")
    return DerivativeResult(extrap, delta, disagreement / 3.0)


def qfi(
    rho: DensityMatrix, drho: ComplexMatrix, support_cutoff: float = 1e-12
) -> QfiResult:
    """Quantum Fisher information of ``rho`` for the derivative ``drho``.

    Eigenvalue pairs with w_i + w_j <= support_cutoff * w_max are dropped
    and counted; any dropped pair carrying derivative weight above 1e-6
    raises :class:`SupportLeak` (the cutoff would be silently lossy).
    """
    drho = np.asarray(drho, dtype=complex)
    if drho.shape != rho.mat.shape:
        raise DimensionMismatch(
            f"derivative shape {drho.shape} does not match state {rho.mat.shape}"
        )
    if _absmax(drho - drho.conj().T) > 1e-8:
        raise ValueError("derivative must be Hermitian")
    if abs(np.trace(drho)) > 1e-8:
        raise ValueError("derivative must be traceless")

    vals, vecs = hermitian_eig(rho.mat)
    overlap = vecs.conj().T @ drho @ vecs
    denom = vals[:, None] + vals[None, :]
    mask = denom > support_cutoff * float(vals[-1])

    n_truncated = int(np.count_nonzero(~mask))
    if n_truncated:
        leak = float(np.max(np.abs(overlap[~mask])))
        if leak > 1e-6:
            raise SupportLeak(
                f"derivative weight {leak:.3e} on truncated eigenvalue pairs"
            )
    if n_truncated >= rho.dim**2:
        raise SupportLeak("all eigenvalue pairs truncated; state has no support")

    value = float(np.sum(2.0 * np.abs(overlap[mask]) ** 2 / denom[mask]))
    return QfiResult(value=value, n_truncated_pairs=n_truncated)


def qfi_chain(config: ChainConfig, rel_step: float = 1e-5) -> QfiResult:
    """QFI of temperature carried by the N-ancilla chain state.

    Composes the chain-state builder (as a function of temperature),
    the finite-difference derivative, and the spectral QFI form.
    """
    params = config.params

    def builder(t: float) -> DensityMatrix:
        return build_chain_state(replace(config, params=replace(params, temperature=t)))

    deriv = temperature_derivative(builder, params.temperature, rel_step)
    result = qfi(builder(params.temperature), deriv.matrix)
    return QfiResult(
        value=result.value,
        n_truncated_pairs=result.n_truncated_pairs,
        derivative_step=deriv.step,
        richardson_error_estimate=deriv.richardson_error,
    )


def classical_fisher_information(
    povm: Povm, rho: DensityMatrix, drho: ComplexMatrix
) -> float:
    """Fisher information of the outcome distribution of an explicit POVM.

    F = sum_x (d p_x)^2 / p_x with p_x = tr(E_x rho) and
    d p_x = tr(E_x drho); outcomes with p_x <= 1e-14 are skipped.
    """
    drho = np.asarray(drho, dtype=complex)
    if povm.dim != rho.dim or drho.shape != rho.mat.shape:
        raise DimensionMismatch("POVM, state and derivative dimensions differ")
    total = 0.0
    for e in povm.elements:
        p = float(np.trace(e @ rho.mat).real)
        if p > 1e-14:
            dp = float(np.trace(e @ drho).real)
            total += dp * dp / p
    return total


def analytic_f1_ratio(n_bar: float, big_gamma: float) -> float:
    """Closed-form steady-state single-ancilla QFI over the thermal bound.

    Valid for a full swap with ground-state ancillas:
    (n+1)*(e^G - 1 + 2nG)^2 / ((n+1)e^{2G} - n - e^G). Tends to 0 in the
    Zeno limit G -> 0 and to 1 from above as G -> infinity.
    """
    if big_gamma < 0:
        raise ValueError(f"big_gamma must be >= 0, got {big_gamma}")
    if big_gamma == 0.0:
        return 0.0
    numer = (n_bar + 1.0) * (math.expm1(big_gamma) + 2.0 * n_bar * big_gamma) ** 2
    denom = (n_bar + 1.0) * math.expm1(2.0 * big_gamma) - math.expm1(big_gamma)
    return numer / denom


def analytic_pair_ratio_weak(n_bar: float, big_gamma: float) -> float:
    """Weak-coupling two-ancilla enhancement for ground-state ancillas.

    F_2/(2 F_1) ~ 1 + (n*G)^2/(e^G - 1), up to corrections quadratic in
    the swap angle. The enhancement term peaks near G ~ 1.6 at ~0.65 n^2.
    """
    if big_gamma < 0:
        raise ValueError(f"big_gamma must be >= 0, got {big_gamma}")
    if big_gamma == 0.0:
        return 1.0
    return 1.0 + (n_bar * big_gamma) ** 2 / math.expm1(big_gamma)


def qfi_over_thermal(config: ChainConfig) -> float:
    """Convenience ratio qfi_chain / thermal bound at the same parameters."""
    return qfi_chain(config).value / thermal_fisher_information(config.params)


def params_for_occupation(
    n_bar: float, big_gamma: float, base: ModelParams
) -> ModelParams:
    """Parameters with given mean occupation and relaxation strength.

    Inverts n = 1/(e^{Omega/T} - 1) for the temperature and splits G into
    gamma_tau_se = G/(2n+1), keeping everything else from ``base``.
    """
    if n_bar <= 0:
        raise ValueError(f"n_bar must be positive, got {n_bar}")
    temperature = base.omega / math.log1p(1.0 / n_bar)
    return replace(
        base,
        temperature=temperature,
        gamma_tau_se=big_gamma / (2.0 * n_bar + 1.0),
    )
