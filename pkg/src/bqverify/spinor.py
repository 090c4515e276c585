"""Spinor form of a non-null electromagnetic field.

A non-null field is written ``F = psi u bar(psi)`` with
``psi = sqrt(rho) exp(i beta/2) L``, ``u`` a fixed real unit vector and ``L``
a unit biquaternion.  ``rho exp(i beta)`` is a duality rotation and
``L () bar(L)`` a Lorentz transformation.  The rotor is recovered in closed
form as ``L = (f + u) / sqrt(2 (1 + f.u))`` where ``f = F / sqrt(F.F)``, and
it is only fixed up to ``L -> L exp(c u)``, ``c`` complex.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .algebra import (
    E3, ONE, Biquaternion, Rotor, _check_unit_axis, cdot, exp_along, random_rotor,
    sqrt_principal,
)
from .errors import DegenerateAxisError, DomainError, NotOnOrbitError, NullFieldError

EPS_NULL = 1e-9
EPS_DEG = 1e-8
ORBIT_TOL = 1e-9
RANK_REL_TOL = 1e-6


@dataclass(frozen=True)
class SpinorDecomposition:
    rho: float
    beta: float
    L: Rotor
    u: Biquaternion = E3

    def __post_init__(self):
        if not self.rho > 0:
            raise DomainError(f"rho must be positive, got {self.rho}")
        if not isinstance(self.L, Rotor):
            object.__setattr__(self, "L", Rotor(self.L))
        _check_unit_axis(self.u)

    def spinor(self) -> Biquaternion:
        return self.L.value * (math.sqrt(self.rho) * cmath.exp(0.5j * self.beta))

    def to_json(self) -> dict:
        return {"rho": self.rho, "beta": self.beta, "L": self.L.value.to_json(),
                "u": self.u.to_json()}


def _field_scale(F: Biquaternion) -> complex:
    if not F.is_vector(1e-12 * max(1.0, abs(F))):
        raise DomainError("field must be a pure vector")
    F = F.vector_part()
    ff = cdot(F, F)
    if abs(ff) <= EPS_NULL * abs(F) ** 2:
        raise NullFieldError(f"null field (F.F = {ff!r}) has no duality/rotor decomposition")
    return sqrt_principal(ff)


def invariant_scale(F: Biquaternion) -> tuple[float, float]:
    """Return ``(rho, beta)`` with ``rho exp(i beta) = sqrt(F.F)`` (principal root)."""
    lam = _field_scale(F)
    return abs(lam), cmath.phase(lam)


def compose(dec: SpinorDecomposition) -> Biquaternion:
    psi = dec.spinor()
    return psi * dec.u * psi.bar()


def decompose(F: Biquaternion, u: Biquaternion = E3) -> SpinorDecomposition:
    _check_unit_axis(u)
    lam = _field_scale(F)
    f = F.vector_part() / lam
    if abs(1 + cdot(f, u)) <= EPS_DEG:
        raise DegenerateAxisError(
            "field direction is antipodal to the axis (f.u = -1); retry with -u")
    v = f + u
    # cdot(v, v) = 2(1 + f.u); normalizing by it keeps N(L) = 1 to rounding
    L = v / sqrt_principal(cdot(v, v))
    rho, beta = abs(lam), cmath.phase(lam)
    return SpinorDecomposition(rho, beta, Rotor(L), u)


def gauge_shift(dec: SpinorDecomposition, c: complex) -> SpinorDecomposition:
    """Replace L by L exp(c u); the composed field does not change."""
    return SpinorDecomposition(dec.rho, dec.beta, Rotor(dec.L.value * exp_along(dec.u, c)), dec.u)


def gauge_log(L1, L2, u: Biquaternion = E3) -> complex:
    """Return c with L2 = L1 exp(c u)."""
    _check_unit_axis(u)
    L1 = L1.value if isinstance(L1, Rotor) else L1
    L2 = L2.value if isinstance(L2, Rotor) else L2
    q = L1.bar() * L2
    along = cdot(q.vector_part(), u)
    off = abs(q.vector_part() - u * along)
    if off > ORBIT_TOL:
        raise NotOnOrbitError(f"bar(L1) L2 leaves span(1, u) by {off:.3e}")
    # q = cos c + u sin c  =>  exp(i c) = cos c + i sin c
    return -1j * cmath.log(q.w + 1j * along)


def _chart_rotor(L: Biquaternion, xi: np.ndarray) -> Biquaternion:
    """Local chart of the unit shell at L: L (1 + xi.e) / sqrt(1 + xi.xi)."""
    step = Biquaternion(1, xi[0], xi[1], xi[2])
    return L * step / sqrt_principal(step.norm())


def _chart_coords(L: Biquaternion, L_new: Biquaternion) -> np.ndarray:
    """Inverse of :func:`_chart_rotor`: complex xi with _chart_rotor(L, xi) ~ L_new."""
    q = L.bar() * L_new
    return q.vec / q.w


def _params_to_field(dec: SpinorDecomposition, p: np.ndarray) -> np.ndarray:
    xi = p[2:5] + 1j * p[5:8]
    L = _chart_rotor(dec.L.value, xi)
    psi = L * (math.sqrt(p[0]) * cmath.exp(0.5j * p[1]))
    F = psi * dec.u * psi.bar()
    return np.concatenate([F.vec.real, F.vec.imag])


@dataclass
class DofResult:
    rank: int
    nullity: int
    singular_values: list
    null_space: np.ndarray
    jacobian: np.ndarray

    def __iter__(self):
        return iter((self.rank, self.nullity, self.singular_values))


def dof_jacobian(dec: SpinorDecomposition, h: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian of F (6 reals) w.r.t. (rho, beta, Re xi, Im xi)."""
    p0 = np.zeros(8)
    p0[0], p0[1] = dec.rho, dec.beta
    J = np.empty((6, 8))
    for j in range(8):
        step = h * max(1.0, abs(p0[j]))
        dp = np.zeros(8)
        dp[j] = step
        J[:, j] = (_params_to_field(dec, p0 + dp) - _params_to_field(dec, p0 - dp)) / (2 * step)
    return J


def dof_rank(dec: SpinorDecomposition, h: float = 1e-6, rel_tol: float = RANK_REL_TOL) -> DofResult:
    """Rank of the 8-parameter map onto the 6 real components of F.

    The domain has 8 directions and the range 6, so the singular-value list
    is padded with the two structural zeros of the right null space.
    """
    J = dof_jacobian(dec, h)
    _, s, vh = np.linalg.svd(J, full_matrices=True)
    sv = np.concatenate([s, np.zeros(8 - len(s))])
    rank = int(np.sum(sv >= rel_tol * sv[0]))
    return DofResult(rank, 8 - rank, [float(v) for v in sv], vh[rank:].T, J)


def gauge_tangents(dec: SpinorDecomposition, h: float = 1e-6) -> np.ndarray:
    """8x2 tangent vectors of c -> gauge_shift(dec, c) at c = 0, in chart coordinates."""
    L = dec.L.value
    cols = []
    for dc in (h, 1j * h):
        plus = _chart_coords(L, gauge_shift(dec, dc).L.value)
        minus = _chart_coords(L, gauge_shift(dec, -dc).L.value)
        d = (plus - minus) / (2 * h)
        cols.append(np.concatenate([[0.0, 0.0], d.real, d.imag]))
    return np.array(cols).T


def gauge_overlap(dec: SpinorDecomposition, result: DofResult | None = None) -> float:
    """Cosine of the largest principal angle between the null space and the gauge orbit."""
    if result is None:
        result = dof_rank(dec)
    G, _ = np.linalg.qr(gauge_tangents(dec))
    N = result.null_space
    if N.shape[1] != G.shape[1]:
        return 0.0
    return float(np.linalg.svd(N.T @ G, compute_uv=False).min())


def phase_probe(dec: SpinorDecomposition, theta: float, convention: str = "bar") -> Biquaternion:
    """Bilinear of ``exp(i theta) psi`` paired with bar(psi) or bar(psi*)."""
    psi = dec.spinor() * cmath.exp(1j * theta)
    if convention == "bar":
        return psi * dec.u * psi.bar()
    if convention == "bar-star":
        return psi * dec.u * psi.star().bar()
    raise DomainError(f"unknown convention {convention!r}; expected 'bar' or 'bar-star'")


def random_decomposition(rng: np.random.Generator, u: Biquaternion = E3,
                         boost: float = 1.0) -> SpinorDecomposition:
    return SpinorDecomposition(float(rng.uniform(0.5, 2.0)),
                               float(rng.uniform(-math.pi, math.pi)),
                               random_rotor(rng, boost), u)


def random_field(rng: np.random.Generator) -> Biquaternion:
    """Pure-vector F = E + iB with standard normal components."""
    return Biquaternion.vector(rng.normal(size=3) + 1j * rng.normal(size=3))
