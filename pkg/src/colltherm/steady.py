"""Stroboscopic one-collision channel on the probe and its fixed point.

One collision cycle seen from the probe qubit: attach a fresh ancilla,
apply the partial swap, relax toward the bath, discard the ancilla. The
cycle is assembled as a 4x4 superoperator acting on column-vectorized
one-qubit operators, and its unique trace-one fixed point is the
operating point of the thermometer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import model
from .linalg import ComplexMatrix, DensityMatrix, partial_trace_mat, validate_state
from .model import ModelParams


class DegenerateFixedPoint(ArithmeticError):
    """The eigenvalue-1 subspace of the channel is more than one-dimensional."""


def vectorize(op: ComplexMatrix) -> np.ndarray:
    """Column-stacking vectorization: v[i + d*j] = op[i, j]."""
    return np.asarray(op, dtype=complex).reshape(-1, order="F")


def unvectorize(v: np.ndarray) -> ComplexMatrix:
    d = math.isqrt(v.size)
    return v.reshape((d, d), order="F")


@dataclass(frozen=True, eq=False)
class Superoperator:
    """Matrix representation of a channel on column-vectorized operators.

    ``dim`` is the operator-space dimension (4 for a qubit); ``mat`` is
    dim x dim. Construction checks trace preservation and that no
    eigenvalue modulus exceeds one.
    """

    dim: int
    mat: np.ndarray

    def __post_init__(self) -> None:
        if self.mat.shape != (self.dim, self.dim):
            raise ValueError(f"superoperator matrix must be {self.dim}x{self.dim}")
        d = math.isqrt(self.dim)
        if d * d != self.dim:
            raise ValueError(f"operator-space dimension {self.dim} is not a square")
        id_vec = vectorize(np.eye(d, dtype=complex))
        tp_dev = float(np.max(np.abs(id_vec @ self.mat - id_vec)))
        if tp_dev > 1e-10:
            raise ValueError(f"channel is not trace preserving (deviation {tp_dev:.3e})")
        radius = float(np.max(np.abs(np.linalg.eigvals(self.mat))))
        if radius > 1.0 + 1e-9:
            raise ValueError(f"spectral radius {radius} exceeds one")
        self.mat.flags.writeable = False

    @property
    def hilbert_dim(self) -> int:
        return math.isqrt(self.dim)

    def apply(self, op: ComplexMatrix) -> ComplexMatrix:
        """Channel action on an operator."""
        return unvectorize(self.mat @ vectorize(op))


def build_stroboscopic_channel(params: ModelParams) -> Superoperator:
    """One-collision channel on the probe: swap with a fresh ancilla, relax.

    Assembled column by column by pushing each operator-basis element
    through one cycle: tensor with the ancilla state, conjugate by the
    partial swap, apply the thermal channel to the probe, trace out the
    ancilla. Linearity of every step makes the matrix exact.
    """
    rho_a = params.ancilla_prep.state()
    u = model.partial_swap_unitary(params.g_tau_sa)
    u_dag = u.conj().T

    mat = np.empty((4, 4), dtype=complex)
    for k in range(4):
        basis = unvectorize(np.eye(4, dtype=complex)[:, k])
        joint = np.kron(basis, rho_a)
        joint = u @ joint @ u_dag
        joint = model.thermal_map_mat(joint, 0, 2, params)
        mat[:, k] = vectorize(partial_trace_mat(joint, [0], 2))
    return Superoperator(4, mat)


def fixed_point(phi: Superoperator) -> tuple[DensityMatrix, float]:
    """Trace-one fixed point of a channel and its spectral gap.

    Solved from the nullspace of (phi - id) with the trace-one constraint;
    the spectral gap is 1 - |second largest eigenvalue modulus|. Raises
    :class:`DegenerateFixedPoint` when the eigenvalue-1 subspace is not
    one-dimensional, rather than silently picking a representative.
    """
    m = phi.mat
    evals = np.linalg.eigvals(m)
    n_unit = int(np.sum(np.abs(evals - 1.0) <= 1e-9))
    if n_unit > 1:
        raise DegenerateFixedPoint(
            f"{n_unit} eigenvalues within 1e-9 of one; fixed point is not unique"
        )
    moduli = np.sort(np.abs(evals))[::-1]
    gap = float(1.0 - moduli[1])

    # Smallest right singular vector of (phi - id) spans the nullspace.
    _, _, vh = np.linalg.svd(m - np.eye(phi.dim))
    rho = unvectorize(vh[-1].conj())
    tr = np.trace(rho)
    if abs(tr) < 1e-12:
        raise DegenerateFixedPoint("fixed-point candidate has vanishing trace")
    rho = rho * (tr.conjugate() / abs(tr))  # rotate the arbitrary global phase away
    rho = (rho + rho.conj().T) / 2
    rho = rho / np.trace(rho).real

    resid = float(np.max(np.abs(phi.apply(rho) - rho)))
    if resid > 1e-12:
        raise ArithmeticError(f"fixed-point residual {resid:.3e} exceeds 1e-12")
    return validate_state(rho, 1e-10), gap
