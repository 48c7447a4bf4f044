"""End-to-end estimation pipelines and their closed-form evaluators.

Three protocol orders for a qubit that encodes ``(theta, phi)`` and passes
through amplitude damping with rate ``eta``:

* ``baseline`` – phase-encoded input, damping channel, nothing else;
* ``post``     – a renormalized non-Hermitian evolution applied *after* the
  channel;
* ``prior``    – the non-Hermitian evolution applied *before* the channel.

:func:`run_pipeline` composes the actual matrix pipeline and differentiates
it numerically; the ``bloch_*`` / ``qfi_*`` / ``success_prob_*`` functions
below are verbatim closed-form expressions for the same quantities.  The
closed forms are deliberately kept as literal transcriptions (no algebraic
simplification) so that any disagreement with the pipeline localizes a
transcription defect; the pipeline is ground truth.

Known validity limits of the closed forms, established by the cross-check
suite (see also ``nhqfi.crosscheck``):

* ``qfi_post_full``'s phase component carries ``cos^2(phi)`` terms that are
  inconsistent with the very Bloch components it derives from; it is exact
  on the ``phi = pi/2`` line (where all optimal-input results live) and
  wrong by an O(1) factor elsewhere.  The amplitude component is exact for
  all inputs.
* ``qfi_prior_optimal`` is the QFI of the *phase* parameter at the optimal
  input; the amplitude-parameter QFI of the prior protocol differs from it
  by up to ~5e-4 relative (they are not identical, unlike the post case).

All evaluators are pure functions of their arguments and broadcast over
numpy arrays; angle arguments may be complex (used for complex-step
differentiation in :func:`qfi_closed_exact`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .channels import amplitude_damping, apply_channel, prepare_input
from .errors import DenominatorVanishes, PtRegimeError
from .nonhermitian import (
    EvolvedState,
    GeneralParams,
    PtParams,
    evolve_renormalized,
    general_evolution,
    pt_evolution,
)
from .qfi import ParamCurve, qfi_bloch
from .qmat import to_bloch

ORDERS = ("baseline", "post", "prior")

OPT_THETA = np.pi / 2.0
OPT_PHI = np.pi / 2.0


@dataclass(frozen=True)
class SchemeConfig:
    """One evaluation point: input angles, damping rate, evolution, order."""

    theta: float = OPT_THETA
    phi: float = OPT_PHI
    eta: float = 0.2
    nh: Optional[Union[PtParams, GeneralParams]] = None
    order: str = "baseline"


@dataclass(frozen=True)
class SchemeOutput:
    """Everything :func:`run_pipeline` reports for one configuration."""

    bloch: np.ndarray
    qfi_theta: float
    qfi_phi: float
    success_prob: float
    delta_f: float
    baseline_f: float
    gamma: float


def gamma_factor(theta, eta):
    """Population factor ``1 + (1 - eta^2)(cos(theta) - 1)`` of the damped state."""
    return 1.0 + (1.0 - np.asarray(eta) ** 2) * (np.cos(theta) - 1.0)


def baseline_qfi(eta):
    """QFI of either parameter after damping alone, ``1 - eta^2``."""
    return 1.0 - np.asarray(eta) ** 2


def require_pt_regime(alpha) -> None:
    """Reject parameters outside the real-spectrum regime ``|alpha| <= pi/2``."""
    if np.any(np.abs(np.asarray(alpha)) > np.pi / 2.0 + 1e-12):
        raise PtRegimeError("closed forms require |alpha| <= pi/2")


def _evolution_operator(nh) -> np.ndarray:
    if isinstance(nh, PtParams):
        return pt_evolution(nh)
    if isinstance(nh, GeneralParams):
        return general_evolution(nh)
    raise TypeError(f"unsupported evolution parameters: {type(nh).__name__}")


def _final_state(order: str, theta: float, phi: float, eta: float, u) -> EvolvedState:
    """Run the matrix pipeline for one input point; u is precomputed."""
    rho = prepare_input(theta, phi)
    kraus = amplitude_damping(eta)
    if order == "baseline":
        return EvolvedState(state=apply_channel(kraus, rho), success_prob=1.0)
    if order == "post":
        return evolve_renormalized(u, apply_channel(kraus, rho))
    if order == "prior":
        ev = evolve_renormalized(u, rho)
        return EvolvedState(
            state=apply_channel(kraus, ev.state), success_prob=ev.success_prob
        )
    raise ValueError(f"unknown order {order!r}; expected one of {ORDERS}")


def run_pipeline(cfg: SchemeConfig, h: float = 1e-5) -> SchemeOutput:
    """Compose the pipeline and report Bloch vector, QFIs, and probabilities.

    QFIs are computed by :func:`nhqfi.qfi.qfi_bloch` on curves obtained by
    re-running the pipeline at perturbed ``theta`` / ``phi``; ``delta_f`` is
    the amplitude-parameter QFI minus the damping-only value ``1 - eta^2``.
    Propagates ``VanishingNorm`` / ``ExceptionalPoint`` from the evolution.
    """
    if not 0.0 <= cfg.eta <= 1.0:
        raise ValueError(f"eta={cfg.eta} outside [0, 1]")
    if cfg.order not in ORDERS:
        raise ValueError(f"unknown order {cfg.order!r}; expected one of {ORDERS}")
    u = None if cfg.order == "baseline" else _evolution_operator(cfg.nh)

    final = _final_state(cfg.order, cfg.theta, cfg.phi, cfg.eta, u)
    curve_theta = ParamCurve(
        fn=lambda x: _final_state(cfg.order, x, cfg.phi, cfg.eta, u).state,
        x0=cfg.theta,
        h=h,
    )
    curve_phi = ParamCurve(
        fn=lambda x: _final_state(cfg.order, cfg.theta, x, cfg.eta, u).state,
        x0=cfg.phi,
        h=h,
    )
    f_theta = qfi_bloch(curve_theta).value
    f_phi = qfi_bloch(curve_phi).value
    fd = float(baseline_qfi(cfg.eta))
    return SchemeOutput(
        bloch=to_bloch(final.state),
        qfi_theta=f_theta,
        qfi_phi=f_phi,
        success_prob=final.success_prob,
        delta_f=f_theta - fd,
        baseline_f=fd,
        gamma=float(gamma_factor(cfg.theta, cfg.eta)),
    )


def delta_f(cfg: SchemeConfig) -> float:
    """QFI gain over the damping-only value; positive means enhancement."""
    return run_pipeline(cfg).delta_f


# ----------------------------------------------------------------------
# closed forms, post order
# ----------------------------------------------------------------------

def bloch_post(theta, phi, eta, alpha, tau):
    """Closed-form Bloch components of the renormalized post-order state."""
    require_pt_regime(alpha)
    D = np.sqrt(1 - np.asarray(eta) ** 2)
    G = gamma_factor(theta, eta)
    sa, ca = np.sin(alpha), np.cos(alpha)
    st = np.sin(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    s2t, c2t = np.sin(2 * tau), np.cos(2 * tau)
    stau2 = np.sin(tau) ** 2

    den = 2 + G * s2t * np.sin(2 * alpha) - 2 * sa * (c2t * sa + 2 * D * stau2 * st * sp)
    rx = 2 * D * ca**2 * cp * st / den
    ry = (
        stau2 * (2 * D * st * sp - 4 * sa)
        + D * st * sp * (1 - 2 * np.cos(tau) ** 2 + sa**2)
        - 2 * G * ca * s2t
        - D * ca**2 * st * sp
    ) / den
    rz = (2 * G * c2t * ca**2 + s2t * (np.sin(2 * alpha) - 2 * D * ca * st * sp)) / den
    return np.array([rx, ry, rz])


def qfi_post_full(theta, phi, eta, alpha, tau):
    """Closed-form ``(F_theta, F_phi)`` of the post order for general input.

    ``F_theta`` is exact everywhere (validated against the pipeline).  The
    ``F_phi`` expression is exact only at ``phi = pi/2``; see the module
    docstring for its known inconsistency away from that line.
    """
    require_pt_regime(alpha)
    D = np.sqrt(1 - np.asarray(eta) ** 2)
    e2 = np.asarray(eta) ** 2
    G = gamma_factor(theta, eta)
    sa, ca = np.sin(alpha), np.cos(alpha)
    s2a = np.sin(2 * alpha)
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    stau, ctau = np.sin(tau), np.cos(tau)
    s2t, c2t = np.sin(2 * tau), np.cos(2 * tau)
    sh, ch = np.sin(theta / 2), np.cos(theta / 2)

    n = (2 - 2 * sa * (2 * D * stau**2 * st * sp + c2t * sa) + G * s2t * s2a) ** 4

    t1 = D**2 * ca**2 * cp**2 * (ct * (2 - 2 * c2t * sa**2) + (D**2 + e2 * ct) * s2t * s2a) ** 2
    t2 = 4 * ca**4 * (D * c2t * ca * ct * sp + D * s2t * (D**2 * sa * sp + e2 * ct * sa * sp - D * st)) ** 2
    t3 = (
        4 * e2 * D**2 * ca**2 * sh**2
        * ((2 - c2t + np.cos(2 * (tau - alpha))) * ch - 4 * D * stau**2 * sa * sp * sh) ** 2
    )
    t4 = (
        D * sp * s2a * (ctau**2 + e2 * ctau**2 * ct + e2 + e2 * stau**2)
        - 2 * D * sp * s2t * ca**2 * ct
        + D**2 * ca * (1 - 2 * c2t - np.cos(2 * alpha)) * st
        + D * s2a * sp * (D**2 * ctau**2 - e2 * ct * (stau**2 + 1) - 2)
    ) ** 2
    f_theta = 4 * ca**2 / n * (t1 + t2 + t3 + t4)

    u1 = 256 * e2 * D**2 * ch**2 * cp**2 * stau**4 * sa**2 * sh**6
    u2 = 16 * D**2 * cp**2 * stau**2 * st**2 * (ctau * ca + G * stau * sa) ** 2
    u3 = 4 * D**2 * ca**2 * cp**2 * st**2 * (c2t * ca + G * s2t * sa) ** 2
    u4 = st**2 * (D * (2 - 2 * c2t * sa**2 + G * s2t * s2a * sp) - 4 * D**2 * stau**2 * sa * st) ** 2
    f_phi = 4 * ca**4 / n * (u1 + u2 + u3 + u4)
    return f_theta, f_phi


def qfi_post_optimal(eta, alpha, tau):
    """Closed-form post-order QFI at the optimal input ``theta = phi = pi/2``.

    Equals both components of :func:`qfi_post_full` there.
    """
    require_pt_regime(alpha)
    D = np.sqrt(1 - np.asarray(eta) ** 2)
    e2 = np.asarray(eta) ** 2
    sa, ca = np.sin(alpha), np.cos(alpha)
    s2a = np.sin(2 * alpha)
    s2t, c2t = np.sin(2 * tau), np.cos(2 * tau)
    stau2 = np.sin(tau) ** 2

    num = 4 * ca**4 * (D * (2 - 2 * c2t * sa**2 + e2 * s2t * s2a) - 4 * D**2 * stau2 * sa) ** 2
    den = (2 - 2 * sa * (2 * D * stau2 + c2t * sa) + e2 * s2t * s2a) ** 4
    return num / den


def success_prob_post(eta, alpha, tau, theta: float = OPT_THETA, phi: float = OPT_PHI):
    """Pre-renormalization trace of the post order (may exceed 1; raw).

    At the default optimal input this is the verbatim secant-form
    expression; for other inputs it is the equivalent general trace (the
    Bloch-component denominator over ``2 cos^2(alpha)``).
    """
    require_pt_regime(alpha)
    sa, ca = np.sin(alpha), np.cos(alpha)
    s2t, c2t = np.sin(2 * tau), np.cos(2 * tau)
    stau2 = np.sin(tau) ** 2
    D = np.sqrt(1 - np.asarray(eta) ** 2)
    if theta == OPT_THETA and phi == OPT_PHI:
        sec, tan = 1.0 / ca, np.tan(alpha)
        return sec * (sec + np.asarray(eta) ** 2 * s2t * sa - tan * (2 * D * stau2 + c2t * sa))
    G = gamma_factor(theta, eta)
    st, sp = np.sin(theta), np.sin(phi)
    return (2 + G * s2t * np.sin(2 * alpha) - 2 * sa * (c2t * sa + 2 * D * stau2 * st * sp)) / (
        2 * ca**2
    )


# ----------------------------------------------------------------------
# closed forms, prior order
# ----------------------------------------------------------------------

def bloch_prior(theta, phi, eta, alpha, tau):
    """Closed-form Bloch components of the prior-order output state."""
    require_pt_regime(alpha)
    D = np.sqrt(1 - np.asarray(eta) ** 2)
    sec = 1.0 / np.cos(alpha)
    sa, ca = np.sin(alpha), np.cos(alpha)
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    s2t, c2t = np.sin(2 * tau), np.cos(2 * tau)
    stau = np.sin(tau)

    den = c2t + ct * s2t * np.tan(alpha) + 2 * sec * stau**2 * (sec - st * sp * np.tan(alpha))
    rx = D * cp * st / den
    ry = -(
        D * sec**2 * (2 * ca * ct * s2t + 4 * stau**2 * sa + (2 * c2t + np.cos(2 * alpha) - 1) * st * sp)
    ) / (2 * den)
    rz = 1 - (
        2 * D**2 * sec**2
        * (
            np.cos(theta / 2) ** 2 * stau**2
            + np.cos(tau + alpha) ** 2 * np.sin(theta / 2) ** 2
            + np.cos(tau + alpha) * stau * st * sp
        )
    ) / den
    return np.array([rx, ry, rz])


def qfi_prior_optimal(eta, alpha, tau):
    """Closed-form prior-order phase QFI at the optimal input.

    Raises :class:`DenominatorVanishes` within 1e-9 of the singular locus
    ``1 + cos(2 tau) sin(alpha) = 0`` (reachable only as ``|alpha| -> pi/2``).
    """
    require_pt_regime(alpha)
    core = 1.0 + np.cos(2 * tau) * np.sin(alpha)
    if np.any(np.abs(core) < 1e-9):
        raise DenominatorVanishes("1 + cos(2 tau) sin(alpha) ~ 0")
    return (1 - np.asarray(eta) ** 2) * (3 - np.cos(2 * alpha) + 4 * np.sin(alpha)) / (2 * core**2)


def success_prob_prior(alpha, tau, theta: float = OPT_THETA, phi: float = OPT_PHI):
    """Pre-renormalization trace of the prior order; independent of ``eta``.

    At the default optimal input this is the verbatim secant-form
    expression; for other inputs it is the equivalent general trace (the
    prior Bloch-component denominator).
    """
    require_pt_regime(alpha)
    sa, ca = np.sin(alpha), np.cos(alpha)
    stau2 = np.sin(tau) ** 2
    c2t = np.cos(2 * tau)
    if theta == OPT_THETA and phi == OPT_PHI:
        sec, tan = 1.0 / ca, np.tan(alpha)
        return c2t + 2 * sec * stau2 * (sec - tan)
    ct, st, sp = np.cos(theta), np.sin(theta), np.sin(phi)
    return (
        c2t
        + ct * np.sin(2 * tau) * np.tan(alpha)
        + 2 * (1.0 / ca) * stau2 * (1.0 / ca - st * sp * np.tan(alpha))
    )


# ----------------------------------------------------------------------
# machine-precision QFI from the closed Bloch components
# ----------------------------------------------------------------------

_BLOCH_CLOSED = {"post": bloch_post, "prior": bloch_prior}
_CSTEP = 1e-200


def qfi_closed_exact(order: str, wrt: str, theta, phi, eta, alpha, tau) -> float:
    """QFI assembled from the closed Bloch components with exact derivatives.

    Differentiates :func:`bloch_post` / :func:`bloch_prior` by a complex
    step (no subtractive cancellation, derivative exact to machine
    precision), then applies the Bloch QFI formula.  Used wherever finite
    differences of finite differences would drown the signal: stationarity
    certificates and high-precision cross-checks.

    ``wrt`` is ``"theta"`` or ``"phi"``.
    """
    fn = _BLOCH_CLOSED[order]
    if wrt == "theta":
        r0 = fn(theta, phi, eta, alpha, tau)
        dr = fn(theta + 1j * _CSTEP, phi, eta, alpha, tau).imag / _CSTEP
    elif wrt == "phi":
        r0 = fn(theta, phi, eta, alpha, tau)
        dr = fn(theta, phi + 1j * _CSTEP, eta, alpha, tau).imag / _CSTEP
    else:
        raise ValueError("wrt must be 'theta' or 'phi'")
    r0 = np.real(r0)
    speed2 = float(dr @ dr)
    gap = 1.0 - float(r0 @ r0)
    if gap <= 1e-12:
        return speed2
    return speed2 + float(r0 @ dr) ** 2 / gap
