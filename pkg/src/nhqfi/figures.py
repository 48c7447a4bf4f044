"""Reference data grids behind the package's standard figures (ids 2..8).

Each grid reproduces one documented parameter study; the CLI ``figure``
subcommand serializes them to CSV.  Surfaces over the optimal input use the
validated closed forms (fast, vectorized); figure 2 varies the input phase
away from ``pi/2``, where only the pipeline is trustworthy, so its rows run
the numeric pipeline.

Grids are generated as ``start + k*step`` so repeated runs are
bit-identical.
"""

from __future__ import annotations

import numpy as np

from .nonhermitian import PtParams
from .schemes import (
    SchemeConfig,
    baseline_qfi,
    qfi_post_optimal,
    qfi_prior_optimal,
    run_pipeline,
)

FIGURE_IDS = (2, 3, 4, 5, 6, 7, 8)


def _grid(start, stop, step):
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)


_TAU_FINE = _grid(0.0, 3.2, 0.02)
_TAU_COARSE = _grid(0.0, 3.2, 0.04)
_ETA = _grid(0.0, 0.99, 0.03)
_ALPHA_PRIOR = _grid(0.0, 0.45 * np.pi, 0.45 * np.pi / 60)


def _fig2():
    """Amplitude QFI vs tau for input phases 0, pi/4, pi/2 (post order)."""
    header = ["phi", "tau", "qfi_theta"]
    rows = []
    for phi in (0.0, np.pi / 4, np.pi / 2):
        for tau in _TAU_FINE:
            out = run_pipeline(
                SchemeConfig(
                    theta=np.pi / 2,
                    phi=float(phi),
                    eta=0.2,
                    nh=PtParams.from_tau(np.pi / 5, float(tau)),
                    order="post",
                )
            )
            rows.append((float(phi), float(tau), out.qfi_theta))
    return header, rows


def _surface(outer_name, outer, inner_name, inner, fn, baseline=None):
    header = [outer_name, inner_name, fn[0]]
    if baseline is not None:
        header.append("qfi_baseline")
    rows = []
    for o in outer:
        for i in inner:
            row = (float(o), float(i), float(fn[1](o, i)))
            if baseline is not None:
                row += (float(baseline(o, i)),)
            rows.append(row)
    return header, rows


def _fig3():
    """Post-order optimal QFI and baseline vs (alpha, eta) at tau = 2.5."""
    return _surface(
        "alpha", _ALPHA_PRIOR, "eta", _ETA,
        ("qfi_post", lambda a, e: qfi_post_optimal(e, a, 2.5)),
        baseline=lambda a, e: baseline_qfi(e),
    )


def _fig4():
    """Post-order optimal QFI vs tau for alpha in {-pi/5, 0, pi/5}, eta = 0.2."""
    return _surface(
        "alpha", (-np.pi / 5, 0.0, np.pi / 5), "tau", _TAU_FINE,
        ("qfi_post", lambda a, t: qfi_post_optimal(0.2, a, t)),
    )


def _fig5():
    """Post-order optimal QFI and baseline vs (tau, eta) at alpha = pi/5."""
    return _surface(
        "tau", _TAU_COARSE, "eta", _ETA,
        ("qfi_post", lambda t, e: qfi_post_optimal(e, np.pi / 5, t)),
        baseline=lambda t, e: baseline_qfi(e),
    )


def _fig6():
    """Post-order optimal QFI vs (tau, alpha) at eta = 0.2 (optimum locator)."""
    tau = np.linspace(0.0, np.pi, 161)
    alpha = np.linspace(0.0, 0.49 * np.pi, 161)
    return _surface(
        "tau", tau, "alpha", alpha,
        ("qfi_post", lambda t, a: qfi_post_optimal(0.2, a, t)),
    )


def _fig7():
    """Prior-order QFI and baseline vs (alpha, eta) at tau = 2.5."""
    return _surface(
        "alpha", _ALPHA_PRIOR, "eta", _ETA,
        ("qfi_prior", lambda a, e: qfi_prior_optimal(e, a, 2.5)),
        baseline=lambda a, e: baseline_qfi(e),
    )


def _fig8():
    """Prior-order QFI and baseline vs (tau, eta) at alpha = pi/5."""
    return _surface(
        "tau", _TAU_COARSE, "eta", _ETA,
        ("qfi_prior", lambda t, e: qfi_prior_optimal(e, np.pi / 5, t)),
        baseline=lambda t, e: baseline_qfi(e),
    )


_BUILDERS = {2: _fig2, 3: _fig3, 4: _fig4, 5: _fig5, 6: _fig6, 7: _fig7, 8: _fig8}


def figure_table(fig_id: int):
    """Header and rows for one figure id; raises ``KeyError`` on unknown ids."""
    return _BUILDERS[fig_id]()
