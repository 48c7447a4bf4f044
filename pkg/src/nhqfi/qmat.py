"""Complex 2x2 matrix substrate: density operators, Bloch maps, exact exponentials.

States are plain ``numpy`` arrays.  A qubit state is a 2x2 complex density
matrix in the fixed basis ``{|g>, |e>}`` with ``|g>`` at index 0; a Bloch
vector is a real length-3 array ``(rx, ry, rz)``.

Conventions (fixed here, used everywhere else in the package):

* ``rho = (I + rx*sx + ry*sy + rz*sz) / 2`` with the standard Pauli matrices
  below, so ``|g><g|`` maps to ``(0, 0, 1)``.
* ``to_bloch`` therefore reads ``rx = 2 Re rho[0,1]``, ``ry = -2 Im rho[0,1]``,
  ``rz = rho[0,0] - rho[1,1]``.

All functions are pure and operate on immutable inputs; they are safe to call
from any number of threads.
"""

from __future__ import annotations

import numpy as np

from .errors import NotAState, NotHermitian

ID2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# Validation tolerances for density matrices.
HERM_TOL = 1e-12
TRACE_TOL = 1e-12
EIG_TOL = 1e-12
BLOCH_NORM_TOL = 1e-12


def validate_state(rho: np.ndarray) -> np.ndarray:
    """Check the density-matrix invariants and return ``rho`` unchanged.

    Raises :class:`NotAState` if ``rho`` is not Hermitian (entrywise 1e-12),
    does not have unit trace, has an eigenvalue below ``-1e-12``, or has a
    Bloch norm above ``1 + 1e-12``.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise NotAState(f"expected a 2x2 matrix, got shape {rho.shape}")
    if not np.all(np.isfinite(rho.view(float))):
        raise NotAState("non-finite entries")
    if np.max(np.abs(rho - rho.conj().T)) > HERM_TOL:
        raise NotAState("not Hermitian within 1e-12")
    if abs(np.trace(rho).real - 1.0) > TRACE_TOL or abs(np.trace(rho).imag) > TRACE_TOL:
        raise NotAState("trace differs from 1 beyond 1e-12")
    evals = np.linalg.eigvalsh(rho)
    if evals.min() < -EIG_TOL:
        raise NotAState(f"negative eigenvalue {evals.min():.3e}")
    r = to_bloch(rho)
    if np.linalg.norm(r) > 1.0 + BLOCH_NORM_TOL:
        raise NotAState(f"Bloch norm {np.linalg.norm(r):.15f} exceeds 1")
    return rho


def to_bloch(rho: np.ndarray) -> np.ndarray:
    """Bloch vector of a density matrix (total on valid states)."""
    return np.array(
        [
            2.0 * rho[0, 1].real,
            -2.0 * rho[0, 1].imag,
            (rho[0, 0] - rho[1, 1]).real,
        ]
    )


def from_bloch(r) -> np.ndarray:
    """Density matrix ``(I + r . sigma)/2`` for a Bloch vector with norm <= 1.

    Raises :class:`NotAState` when the norm exceeds ``1 + 1e-9``.
    """
    r = np.asarray(r, dtype=float)
    norm = np.linalg.norm(r)
    if norm > 1.0 + 1e-9:
        raise NotAState(f"Bloch norm {norm:.12f} exceeds 1")
    return 0.5 * (ID2 + r[0] * SIGMA_X + r[1] * SIGMA_Y + r[2] * SIGMA_Z)


def expm2(h: np.ndarray, t: float) -> np.ndarray:
    """Exact ``exp(-i h t)`` for any complex 2x2 matrix ``h``.

    Splits ``h = a0*I + m`` with ``m`` traceless, for which ``m^2`` is a
    scalar multiple ``lam^2`` of the identity, so

        exp(-i h t) = exp(-i a0 t) * (cos(lam t) I - i sin(lam t)/lam * m).

    ``lam`` may be complex (non-Hermitian ``h``); the removable singularity
    at ``lam t -> 0`` is handled by a series for ``|lam t| < 1e-6``.
    """
    h = np.asarray(h, dtype=complex)
    a0 = (h[0, 0] + h[1, 1]) / 2.0
    m = h - a0 * ID2
    # m traceless => m @ m == -det(m) * I
    lam = np.sqrt(complex(-(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])))
    x = lam * t
    if abs(x) < 1e-6:
        sinc = t * (1.0 - x * x / 6.0 + x**4 / 120.0)
    else:
        sinc = np.sin(x) / lam
    return np.exp(-1j * a0 * t) * (np.cos(x) * ID2 - 1j * sinc * m)


def eig2_hermitian(m: np.ndarray, herm_tol: float = 1e-10):
    """Eigensystem of a Hermitian 2x2 matrix with a fixed phase gauge.

    Returns ``(values, vectors)`` with ``values`` sorted descending and
    ``vectors[:, k]`` the orthonormal eigenvector of ``values[k]``.  The
    gauge: the largest-magnitude component of each eigenvector is made real
    and nonnegative, which keeps finite differences of eigenvectors stable.

    Raises :class:`NotHermitian` if the asymmetry exceeds ``herm_tol``.
    """
    m = np.asarray(m, dtype=complex)
    if np.max(np.abs(m - m.conj().T)) > herm_tol:
        raise NotHermitian("matrix is not Hermitian within tolerance")
    vals, vecs = np.linalg.eigh(m)
    vals = vals[::-1].copy()
    vecs = vecs[:, ::-1].copy()
    for k in range(2):
        i = int(np.argmax(np.abs(vecs[:, k])))
        z = vecs[i, k]
        a = abs(z)
        if a > 0:
            vecs[:, k] *= z.conjugate() / a
    return vals, vecs
