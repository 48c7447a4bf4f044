"""Input preparation, the phase gate, and the amplitude-damping channel.

The estimation parameters are the polar angle ``theta`` and the phase
``phi`` of the input superposition.  Phase-sign convention (load-bearing):
the phase enters the excited amplitude as ``exp(-i*phi)``, i.e.

    |psi(theta, phi)> = cos(theta/2)|g> + exp(-i*phi) sin(theta/2)|e>,

whose Bloch vector is ``(sin(theta) cos(phi), -sin(theta) sin(phi),
cos(theta))``.  This is the unique sign choice under which the closed-form
Bloch components and success probabilities in :mod:`nhqfi.schemes` agree
with the numeric pipeline to machine precision; flipping it breaks those
cross-checks at order one.  Both QFIs are invariant under the flip, so no
estimation quantity depends on it.

``theta`` and ``phi`` are accepted on the whole real line (the maps are
periodic); range checking of user input belongs to the CLI layer.  Curve
evaluators rely on this to probe ``theta`` slightly outside ``[0, pi]``.
"""

from __future__ import annotations

import numpy as np

from .errors import IncompleteKraus
from .qmat import ID2

COMPLETENESS_TOL = 1e-12


def delta_factor(eta: float) -> float:
    """Coherence survival factor ``sqrt(1 - eta^2)`` of the damping channel."""
    return float(np.sqrt(1.0 - eta * eta))


def prepare_input(theta: float, phi: float = 0.0) -> np.ndarray:
    """Pure input state ``cos(theta/2)|g> + exp(-i*phi) sin(theta/2)|e>``."""
    c = np.cos(theta / 2.0)
    s = np.sin(theta / 2.0)
    ket = np.array([c, s * np.exp(-1j * phi)], dtype=complex)
    return np.outer(ket, ket.conj())


def phase_gate(rho: np.ndarray, phi: float) -> np.ndarray:
    """Conjugate ``rho`` by the phase gate ``diag(1, exp(-i*phi))``.

    Composes with :func:`prepare_input`:
    ``phase_gate(prepare_input(theta), phi) == prepare_input(theta, phi)``.
    """
    u = np.array([1.0, np.exp(-1j * phi)])
    return rho * np.outer(u, u.conj())


def amplitude_damping(eta: float) -> list[np.ndarray]:
    """Kraus pair of the amplitude-damping channel with decay rate ``eta``.

    ``E1 = |g><g| + sqrt(1-eta^2)|e><e|`` and ``E2 = eta |g><e|``; the
    excited population decays by ``eta^2``.  ``eta`` must lie in ``[0, 1]``.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta={eta} outside [0, 1]")
    e1 = np.array([[1.0, 0.0], [0.0, delta_factor(eta)]], dtype=complex)
    e2 = np.array([[0.0, eta], [0.0, 0.0]], dtype=complex)
    return [e1, e2]


def kraus_defect(kraus) -> float:
    """Max-entry deviation of ``sum E_i^dag E_i`` from the identity."""
    acc = sum(e.conj().T @ e for e in kraus)
    return float(np.max(np.abs(acc - ID2)))


def apply_channel(kraus, rho: np.ndarray) -> np.ndarray:
    """Apply ``rho -> sum_i E_i rho E_i^dag`` after checking completeness.

    Raises :class:`IncompleteKraus` when ``sum E_i^dag E_i`` deviates from
    the identity by more than 1e-12.
    """
    if kraus_defect(kraus) > COMPLETENESS_TOL:
        raise IncompleteKraus("Kraus operators do not sum to the identity")
    out = np.zeros((2, 2), dtype=complex)
    for e in kraus:
        out += e @ rho @ e.conj().T
    return out
