"""Quantum Fisher information evaluators for single-parameter qubit curves.

A *curve* is a callable mapping one real parameter to a density matrix; the
evaluators differentiate it numerically (5-point central stencil, default
step 1e-5) and apply either

* the Bloch-vector formula
  ``F = |dr|^2 + (r . dr)^2 / (1 - |r|^2)``  (mixed states), reducing to
  ``F = |dr|^2`` on the pure boundary, or
* the spectral formula built from the eigendecomposition
  ``F = sum_n (dlam_n)^2/lam_n + sum_n lam_n F_n
  - sum_{n != m} 8 lam_n lam_m / (lam_n + lam_m) |<psi_n|dpsi_m>|^2``
  with ``F_n = 4 [<dpsi_n|dpsi_n> - |<psi_n|dpsi_n>|^2]``.

The two routes are independent implementations and are cross-checked against
each other in the test suite; each also backs a different set of closed-form
comparisons in :mod:`nhqfi.schemes`.

Branching policy for the Bloch route: the mixed term is used for
``|r| < 1 - 1e-8``.  Inside the band ``1 - |r|^2 in (1e-12, 1e-8)`` the term
is evaluated anyway and, if it exceeds 1e6, the state is too close to the
boundary for finite differences and :class:`NearBoundaryIllConditioned` is
raised instead of returning a silently truncated value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import (
    NearBoundaryIllConditioned,
    NotPure,
    RankDeficientDerivative,
    ZeroInformation,
)
from .qmat import eig2_hermitian, to_bloch

PURE_BRANCH_NORM = 1.0 - 1e-8
BAND_LO = 1e-12
BAND_HI = 1e-8
BAND_TERM_LIMIT = 1e6

EIGVAL_FLOOR = 1e-10
EIGDERIV_FLOOR = 1e-7
DEGENERATE_PAIR_FLOOR = 1e-12


@dataclass(frozen=True)
class ParamCurve:
    """A parametrized state family around an evaluation point.

    ``fn(x)`` must return a valid density matrix for ``x`` within
    ``[x0 - 2h, x0 + 2h]`` and must be re-entrant (evaluators may call it
    concurrently).
    """

    fn: Callable[[float], np.ndarray]
    x0: float
    h: float = 1e-5


@dataclass(frozen=True)
class QfiValue:
    """QFI value with tags recording how it was computed."""

    value: float
    method: str = "bloch"  # bloch | spectral | pure
    branch: str = "mixed"  # mixed | pure

    def __float__(self) -> float:
        return self.value


def _stencil_bloch(curve: ParamCurve):
    """Bloch vector at x0 and its 5-point central derivative."""
    x0, h = curve.x0, curve.h
    r = lambda x: to_bloch(curve.fn(x))
    dr = (-r(x0 + 2 * h) + 8 * r(x0 + h) - 8 * r(x0 - h) + r(x0 - 2 * h)) / (12 * h)
    return r(x0), dr


def qfi_bloch(curve: ParamCurve) -> QfiValue:
    """QFI from the Bloch-vector formula with numeric derivatives."""
    r0, dr = _stencil_bloch(curve)
    speed2 = float(dr @ dr)
    gap = 1.0 - float(r0 @ r0)
    norm = float(np.linalg.norm(r0))
    if BAND_LO < gap < BAND_HI:
        term = float(r0 @ dr) ** 2 / gap
        if term > BAND_TERM_LIMIT:
            raise NearBoundaryIllConditioned(
                f"1-|r|^2 = {gap:.3e} with mixed term {term:.3e}; "
                "tighten h or use qfi_spectral"
            )
    if norm >= PURE_BRANCH_NORM:
        return QfiValue(value=speed2, method="bloch", branch="pure")
    return QfiValue(value=speed2 + float(r0 @ dr) ** 2 / gap, method="bloch", branch="mixed")


def qfi_spectral(curve: ParamCurve) -> QfiValue:
    """QFI from the gauge-fixed eigendecomposition route.

    Eigenvalue terms with ``lam < 1e-10`` are dropped when the eigenvalue
    derivative also vanishes (``< 1e-7``); otherwise the QFI diverges and
    :class:`RankDeficientDerivative` is raised.  Cross terms with
    ``lam_n + lam_m < 1e-12`` are skipped (removable for degenerate pairs).
    """
    x0, h = curve.x0, curve.h
    vals0, vecs0 = eig2_hermitian(curve.fn(x0))
    vp, up = eig2_hermitian(curve.fn(x0 + h))
    vm, um = eig2_hermitian(curve.fn(x0 - h))
    dvals = (vp - vm) / (2 * h)
    dvecs = (up - um) / (2 * h)

    total = 0.0
    for n in range(2):
        if vals0[n] >= EIGVAL_FLOOR:
            total += dvals[n] ** 2 / vals0[n]
        elif abs(dvals[n]) >= EIGDERIV_FLOOR:
            raise RankDeficientDerivative(
                f"eigenvalue {vals0[n]:.3e} has derivative {dvals[n]:.3e}"
            )
        dpsi = dvecs[:, n]
        overlap = vecs0[:, n].conj() @ dpsi
        f_pure = 4.0 * float((dpsi.conj() @ dpsi).real - abs(overlap) ** 2)
        total += vals0[n] * f_pure
    for n in range(2):
        for m in range(2):
            if n == m:
                continue
            s = vals0[n] + vals0[m]
            if s < DEGENERATE_PAIR_FLOOR:
                continue
            total -= 8.0 * vals0[n] * vals0[m] / s * abs(vecs0[:, n].conj() @ dvecs[:, m]) ** 2
    branch = "pure" if vals0[1] < EIGVAL_FLOOR else "mixed"
    return QfiValue(value=float(total), method="spectral", branch=branch)


def qfi_pure(curve: ParamCurve) -> QfiValue:
    """QFI ``4[<dpsi|dpsi> - |<psi|dpsi>|^2]`` for a curve of pure states.

    The state vector is the gauge-fixed top eigenvector of the density
    matrix; its derivative is a central difference.  Raises
    :class:`NotPure` if the Bloch norm at ``x0`` is below ``1 - 1e-8``.
    """
    x0, h = curve.x0, curve.h
    r0 = to_bloch(curve.fn(x0))
    if np.linalg.norm(r0) < PURE_BRANCH_NORM:
        raise NotPure(f"Bloch norm {np.linalg.norm(r0):.12f} below pure threshold")

    def ket(x):
        _, vecs = eig2_hermitian(curve.fn(x))
        return vecs[:, 0]

    psi = ket(x0)
    dpsi = (ket(x0 + h) - ket(x0 - h)) / (2 * h)
    overlap = psi.conj() @ dpsi
    value = 4.0 * float((dpsi.conj() @ dpsi).real - abs(overlap) ** 2)
    return QfiValue(value=value, method="pure", branch="pure")


def cramer_rao_bound(f, n_experiments: int = 1) -> float:
    """Estimator-error lower bound ``1 / sqrt(n F)``.

    ``f`` may be a :class:`QfiValue` or a plain float.  Raises
    :class:`ZeroInformation` when the information is ``<= 1e-15``.
    """
    if n_experiments < 1:
        raise ValueError("n_experiments must be >= 1")
    value = float(f)
    if value <= 1e-15:
        raise ZeroInformation(f"QFI {value:.3e} carries no information")
    return 1.0 / np.sqrt(n_experiments * value)
