"""Non-Hermitian qubit Hamiltonians, their exact evolutions, and renormalization.

Two Hamiltonian families:

* the balanced gain/loss form ``H = s [[i sin a, 1], [1, -i sin a]]`` whose
  spectrum ``+-s cos a`` is real for ``|a| <= pi/2`` (the unbroken regime;
  ``a = +-pi/2`` is the exceptional point), and
* a general form ``H' = [[g_r e^{ia} + d, s], [s, g_r e^{-ia} - d]]``.

Evolution under a non-Hermitian ``H`` does not preserve the trace, so the
physical state is ``U rho U^dag / Tr(U rho U^dag)`` and the trace itself is
the success probability of the (post-selected) operation.  The closed form
:func:`pt_evolution` is exact because ``H^2 = s^2 cos^2(a) I``; the general
family is always evolved through the exact exponential :func:`qmat.expm2`
(a transcribed closed form for it would not survive the identities checked
in the test suite).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ExceptionalPoint, VanishingNorm
from .qmat import expm2

NORM_FLOOR = 1e-12


@dataclass(frozen=True)
class PtParams:
    """Balanced-form parameters: energy scale ``s``, angle ``alpha``, time ``t``."""

    s: float
    alpha: float
    t: float = 0.0

    @property
    def tau(self) -> float:
        """Dimensionless evolution phase ``s * t * cos(alpha)``."""
        return self.s * self.t * np.cos(self.alpha)

    @property
    def pt_unbroken(self) -> bool:
        """True iff the spectrum is real (``|alpha| <= pi/2``)."""
        return abs(self.alpha) <= np.pi / 2.0

    @classmethod
    def from_tau(cls, alpha: float, tau: float, s: float = 1.0) -> "PtParams":
        """Parameters with the given phase ``tau``, solving for ``t``."""
        c = np.cos(alpha)
        if abs(c) < 1e-12:
            raise ExceptionalPoint("cos(alpha) ~ 0: tau does not determine t")
        return cls(s=s, alpha=alpha, t=tau / (s * c))


@dataclass(frozen=True)
class GeneralParams:
    """General-form parameters ``(g_r, s, alpha, delta, t)``."""

    g_r: float
    s: float
    alpha: float
    delta: float = 0.0
    t: float = 0.0

    @property
    def omega(self) -> complex:
        """Principal sqrt of ``s^2 - g_r^2 sin^2(alpha)`` (delta = 0 rate)."""
        return complex(np.sqrt(complex(self.s**2 - self.g_r**2 * np.sin(self.alpha) ** 2)))


class EvolvedState(NamedTuple):
    state: np.ndarray
    success_prob: float


def pt_hamiltonian(p: PtParams) -> np.ndarray:
    """Matrix ``s [[i sin(alpha), 1], [1, -i sin(alpha)]]``."""
    isa = 1j * np.sin(p.alpha)
    return p.s * np.array([[isa, 1.0], [1.0, -isa]], dtype=complex)


def pt_evolution(p: PtParams) -> np.ndarray:
    """Closed-form ``exp(-i H t)`` for the balanced Hamiltonian.

    With ``tau = s t cos(alpha)``:

        (1/cos a) [[cos(tau - a), -i sin tau], [-i sin tau, cos(tau + a)]]

    Raises :class:`ExceptionalPoint` when ``|cos(alpha)| < 1e-12``.
    """
    ca = np.cos(p.alpha)
    if abs(ca) < 1e-12:
        raise ExceptionalPoint("evolution closed form diverges at |alpha| = pi/2")
    tau = p.tau
    off = -1j * np.sin(tau)
    return np.array(
        [[np.cos(tau - p.alpha), off], [off, np.cos(tau + p.alpha)]], dtype=complex
    ) / ca


def general_hamiltonian(p: GeneralParams) -> np.ndarray:
    """Matrix ``[[g_r e^{i a} + delta, s], [s, g_r e^{-i a} - delta]]``."""
    ea = np.exp(1j * p.alpha)
    return np.array(
        [[p.g_r * ea + p.delta, p.s], [p.s, p.g_r / ea - p.delta]], dtype=complex
    )


def general_evolution(p: GeneralParams) -> np.ndarray:
    """``exp(-i H' t)`` for the general Hamiltonian, via the exact exponential.

    For ``g_r = s, delta = 0`` the general form differs from the balanced one
    only by ``s cos(alpha) * I``, so the renormalized action coincides with
    :func:`pt_evolution` at the same ``(s, alpha, t)``.
    """
    return expm2(general_hamiltonian(p), p.t)


def evolve_renormalized(u: np.ndarray, rho: np.ndarray) -> EvolvedState:
    """Trace-restored evolution ``U rho U^dag / Tr(U rho U^dag)``.

    Returns the renormalized state and the raw pre-normalization trace (the
    success probability; it may exceed 1 and is reported unclamped).  Raises
    :class:`VanishingNorm` when the trace falls below 1e-12.
    """
    w = u @ rho @ u.conj().T
    tr = np.trace(w).real
    if tr <= NORM_FLOOR:
        raise VanishingNorm(f"Tr(U rho U^dag) = {tr:.3e}")
    state = w / tr
    # symmetrize away floating-point anti-Hermitian residue
    state = 0.5 * (state + state.conj().T)
    return EvolvedState(state=state, success_prob=float(tr))
