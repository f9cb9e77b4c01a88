"""Dense complex linear algebra for multi-qubit operators.

Conventions used throughout the package:

* All operators are dense, row-major ``complex128`` numpy arrays.
* Qubit 0 is the leftmost Kronecker factor, i.e. the most significant
  bit of the computational-basis index.
* All functions here are pure; returned density matrices are marked
  read-only and safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

# Alias for readability in signatures; any dense square complex array.
ComplexMatrix = np.ndarray

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
NEGATIVITY_TOL = 1e-10


class StateValidationError(ValueError):
    """A matrix failed one of the density-matrix invariants."""


class HermiticityViolation(StateValidationError):
    pass


class TraceViolation(StateValidationError):
    pass


class NegativityViolation(StateValidationError):
    pass


class EigensolverError(RuntimeError):
    """Hermitian eigensolver failed to converge or missed its residual contract."""


def _absmax(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated quantum state on a register of qubits.

    Instances come from :func:`validate_state` or from trace-preserving
    operations applied to already-validated states; the constructor only
    checks shape bookkeeping. ``mat`` is frozen read-only on construction.
    """

    mat: np.ndarray
    num_qubits: int

    def __post_init__(self) -> None:
        if self.num_qubits < 1:
            raise ValueError(f"num_qubits must be >= 1, got {self.num_qubits}")
        d = 2 ** self.num_qubits
        if self.mat.shape != (d, d):
            raise ValueError(
                f"matrix shape {self.mat.shape} does not match {self.num_qubits} qubits"
            )
        self.mat.flags.writeable = False

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


def kron(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Kronecker product; the left factor is the most significant qubit."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError("kron expects square matrices")
    return np.kron(a, b)


def partial_trace_mat(
    mat: ComplexMatrix, keep: Sequence[int], num_qubits: int
) -> ComplexMatrix:
    """Partial trace of a 2^n x 2^n matrix over all qubits not in ``keep``.

    Works on arbitrary (not necessarily Hermitian) operators. The kept
    qubits appear in the output in the order given by ``keep``, which may
    therefore also permute subsystems.
    """
    keep = list(keep)
    if not keep:
        raise ValueError("keep must name at least one qubit")
    if len(set(keep)) != len(keep):
        raise ValueError(f"duplicate qubit indices in keep: {keep}")
    for q in keep:
        if not 0 <= q < num_qubits:
            raise IndexError(f"qubit index {q} out of range for {num_qubits} qubits")

    t = np.asarray(mat, dtype=complex).reshape((2,) * (2 * num_qubits))
    for q in sorted(set(range(num_qubits)) - set(keep), reverse=True):
        half = t.ndim // 2
        t = np.trace(t, axis1=q, axis2=q + half)

    # Remaining axes are in ascending qubit order; reorder to match keep.
    k = len(keep)
    srt = sorted(keep)
    perm = [srt.index(q) for q in keep]
    t = t.transpose(perm + [k + p for p in perm])
    return np.ascontiguousarray(t.reshape(2**k, 2**k))


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Reduced state of ``rho`` on the kept qubits, in ``keep`` order."""
    out = partial_trace_mat(rho.mat, keep, rho.num_qubits)
    if abs(np.trace(out) - np.trace(rho.mat)) > 1e-12:
        raise ArithmeticError("partial trace failed to preserve the trace")
    return DensityMatrix(out, len(list(keep)))


def hermitian_eig(h: ComplexMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    The input is symmetrized internally; inputs farther than 1e-8 from
    Hermitian are rejected. Returns ``(eigenvalues, eigenvectors)`` with
    eigenvectors as columns, satisfying the residual contract
    ``|h @ V - V @ diag(w)|_max <= 1e-9 * |h|_max``.
    """
    h = np.asarray(h, dtype=complex)
    dev = _absmax(h - h.conj().T)
    if dev > 1e-8:
        raise HermiticityViolation(f"matrix deviates from Hermitian by {dev:.3e}")
    hs = (h + h.conj().T) / 2
    try:
        vals, vecs = np.linalg.eigh(hs)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigh did not converge: {exc}") from exc
    resid = _absmax(hs @ vecs - vecs * vals[np.newaxis, :])
    if resid > 1e-9 * max(_absmax(hs), 1e-300):
        raise EigensolverError(f"eigendecomposition residual {resid:.3e} out of contract")
    return vals, vecs


def validate_state(mat: ComplexMatrix, tol: float = 1e-10) -> DensityMatrix:
    """Check the density-matrix invariants and wrap ``mat`` as a state.

    Raises :class:`HermiticityViolation`, :class:`TraceViolation` or
    :class:`NegativityViolation` (each reporting the offending magnitude)
    when the input violates an invariant beyond ``tol``. On success the
    returned state is the symmetrized, trace-renormalized input.
    """
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    dim = mat.shape[0]
    num_qubits = dim.bit_length() - 1
    if dim < 2 or 2**num_qubits != dim:
        raise ValueError(f"dimension {dim} is not a power of two")

    herm_dev = _absmax(mat - mat.conj().T)
    if herm_dev > tol:
        raise HermiticityViolation(f"Hermiticity deviation {herm_dev:.3e} exceeds {tol:.1e}")
    trace_dev = abs(np.trace(mat) - 1.0)
    if trace_dev > tol:
        raise TraceViolation(f"trace deviates from one by {trace_dev:.3e} (tol {tol:.1e})")

    sym = (mat + mat.conj().T) / 2
    min_eig = float(np.linalg.eigvalsh(sym)[0])
    if min_eig < -tol:
        raise NegativityViolation(f"minimum eigenvalue {min_eig:.3e} below -{tol:.1e}")

    out = sym / np.trace(sym).real
    return DensityMatrix(out, num_qubits)
