"""Biquaternion Maxwell and Dirac-Lanczos equations, with executable checks.

Modules: :mod:`~bqverify.algebra` (biquaternions), :mod:`~bqverify.fields`
(analytic fields), :mod:`~bqverify.maxwell`, :mod:`~bqverify.spinor`,
:mod:`~bqverify.dirac`, and the ``bqverify`` command line.
"""

from .algebra import (
    BASIS, E1, E2, E3, ONE, ZERO, Biquaternion, Rotor, cdot, exp_along, from_matrix,
    involution, inverse, multiply, rotor_apply, sqrt_principal, to_matrix,
)
from .fields import EMField, Event, FDParams, SourceDensity, SpinorField, catalog, fd_validate
from .report import Report

__version__ = "0.1.0"
