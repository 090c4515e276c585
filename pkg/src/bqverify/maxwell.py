"""Biquaternion Maxwell operator and its classical div/curl counterpart.

Conventions (fixed once, shared with :mod:`bqverify.dirac`):

* the operator is ``D = i d_t - sum_k e_k d_k``;
* the right-hand slot acts on the coefficient conjugate ``F*`` with the
  derivative units multiplied from the right;
* the source is ``J = rho_c - i j``.

With these, ``left - right`` vanishes exactly for the homogeneous pair
(div B = 0, curl E + d_t B = 0) and ``(left + right)/2 = J`` is the source
pair.  On a pure vector the ``tilde`` involution gives ``-F*``; the sign is
absorbed into which combination is called homogeneous.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .algebra import BASIS, Biquaternion
from .fields import EMField, Event, SourceDensity
from .report import Report

__all__ = [
    "SourceDensity", "Report", "dstar_products", "maxwell_residual",
    "classical_residual", "equivalence_check", "time_reversal_em", "residual_check",
]

RESIDUAL_TOL = 1e-10
RESIDUAL_TOL_FD = 1e-6


def dstar_products(field: EMField, e) -> tuple[Biquaternion, Biquaternion]:
    """Return ``(D F, F* D_r)`` at event ``e``."""
    e = Event.of(e)
    dF = [field.partial(mu, e) for mu in range(4)]
    left = 1j * dF[0]
    right = 1j * dF[0].star()
    for k in range(3):
        left = left - BASIS[k] * dF[k + 1]
        right = right - dF[k + 1].star() * BASIS[k]
    return left, right


def maxwell_residual(field: EMField, e) -> tuple[Biquaternion, Biquaternion]:
    """Return ``(hom, src)``; both vanish iff Maxwell's equations hold at ``e``."""
    e = Event.of(e)
    left, right = dstar_products(field, e)
    hom = left - right
    src = (left + right) * 0.5 - field.source(e).biquaternion()
    return hom, src


def classical_residual(field: EMField, e) -> np.ndarray:
    """Textbook residuals: (div E - rho, curl B - dE/dt - j, div B, curl E + dB/dt)."""
    e = Event.of(e)
    dE, dB = field.jacobians(e)
    src = field.source(e)

    def div(d):
        return d[1, 0] + d[2, 1] + d[3, 2]

    def curl(d):
        # d[mu, i] = partial_mu of component i; spatial mu = 1..3
        return np.array([d[2, 2] - d[3, 1], d[3, 0] - d[1, 2], d[1, 1] - d[2, 0]])

    out = np.empty(8)
    out[0] = div(dE) - src.charge
    out[1:4] = curl(dB) - dE[0] - np.asarray(src.current)
    out[4] = div(dB)
    out[5:8] = curl(dE) + dB[0]
    return out


def classical_as_biquaternions(c: np.ndarray) -> tuple[Biquaternion, Biquaternion]:
    """Map the 8 classical residuals onto the (hom, src) pair they must equal."""
    hom = Biquaternion(2j * c[4], -2 * c[5], -2 * c[6], -2 * c[7])
    src = Biquaternion(c[0], -1j * c[1], -1j * c[2], -1j * c[3])
    return hom, src


def equivalence_check(field: EMField, events: Sequence, tol: float = RESIDUAL_TOL) -> Report:
    """Check that the biquaternion residuals are fixed multiples of the classical ones.

    This is an identity between expressions, so it holds for any field with
    correct partials, Maxwellian or not.
    """
    worst = 0.0
    details = []
    for ev in events:
        ev = Event.of(ev)
        hom, src = maxwell_residual(field, ev)
        hom_c, src_c = classical_as_biquaternions(classical_residual(field, ev))
        mismatch = max(abs(hom - hom_c), abs(src - src_c))
        worst = max(worst, mismatch)
        details.append({"event": list(ev.coords), "mismatch": mismatch})
    return Report(f"equivalence:{field.name}", worst, tol, details=details)


def residual_check(field: EMField, events: Sequence, tol: float = RESIDUAL_TOL) -> Report:
    """Largest |hom| or |src| over the events."""
    worst_hom = worst_src = 0.0
    for ev in events:
        hom, src = maxwell_residual(field, ev)
        worst_hom = max(worst_hom, abs(hom))
        worst_src = max(worst_src, abs(src))
    return Report(f"maxwell:{field.name}", max(worst_hom, worst_src), tol,
                  extra={"max_hom": worst_hom, "max_src": worst_src})


def time_reversal_em(field: EMField) -> EMField:
    """t -> -t with E -> E, B -> -B, rho -> rho, j -> -j.  Squares to the identity."""

    def eb(e):
        E, B = field._eb(e.time_reversed())
        return E, -np.asarray(B)

    def jac(e):
        dE, dB = field._jac(e.time_reversed())
        dE = np.array(dE, dtype=float)
        dB = -np.array(dB, dtype=float)
        dE[0] *= -1
        dB[0] *= -1
        return dE, dB

    def source(e):
        s = field._source(e.time_reversed())
        return SourceDensity(s.charge, tuple(-c for c in s.current))

    singular = None
    if field._singular is not None:
        singular = lambda e: field._singular(e.time_reversed())
    return EMField(eb, jac, source, singular, name=f"T({field.name})")
