"""The Dirac-Lanczos equation ``Dbar psi = i m psi* u``.

``Dbar = i d_t + sum_k e_k d_k`` is the bar-conjugate of the Maxwell
operator ``D``.  The identity ``D Dbar = -(d_t^2 - laplacian)`` together
with the conjugated equation turns every solution into a Klein-Gordon
solution.  The equation is only real-linear: the conjugate ``psi*`` on the
right breaks complex linearity, and the complex structure that commutes
with it is right-multiplication by ``u``.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import BASIS, E3, ONE, Biquaternion, _check_unit_axis, inverse, sqrt_principal
from .errors import DomainError, OffShellError, SearchExhaustedError
from .fields import EMField, Event, SpinorField
from .spinor import decompose

ON_SHELL_TOL = 1e-9
KERNEL_REL_TOL = 1e-8
SOLUTION_TOL = 1e-9
T_SQUARE_TOL = 1e-10


@dataclass(frozen=True)
class Momentum:
    E: float
    p: tuple = (0.0, 0.0, 0.0)
    m: float = 1.0

    def __post_init__(self):
        if self.m < 0:
            raise DomainError("mass must be non-negative")
        object.__setattr__(self, "p", tuple(float(c) for c in self.p))

    def on_shell(self) -> bool:
        return abs(self.E**2 - sum(c * c for c in self.p) - self.m**2) <= ON_SHELL_TOL

    @classmethod
    def on_shell_for(cls, p, m: float, sign: int = 1) -> "Momentum":
        return cls(sign * math.sqrt(sum(c * c for c in p) + m * m), tuple(p), m)


@dataclass(frozen=True)
class AmplitudePair:
    """Coefficients of exp(-i(Et - p.x)) and exp(+i(Et - p.x))."""

    A: Biquaternion
    B: Biquaternion

    def to_reals(self) -> np.ndarray:
        return np.concatenate([self.A.to_reals(), self.B.to_reals()])

    @classmethod
    def from_reals(cls, r) -> "AmplitudePair":
        return cls(Biquaternion.from_reals(r[:8]), Biquaternion.from_reals(r[8:]))


@dataclass(frozen=True)
class MassSample:
    event: Event
    M: Biquaternion
    scalar_part: complex
    deviation_from_scalar: float


def dbar(psi: SpinorField, e) -> Biquaternion:
    e = Event.of(e)
    out = 1j * psi.partial(0, e)
    for k in range(3):
        out = out + BASIS[k] * psi.partial(k + 1, e)
    return out


def lanczos_residual(psi: SpinorField, m: float, u: Biquaternion, e) -> Biquaternion:
    e = Event.of(e)
    return dbar(psi, e) - 1j * m * (psi.eval(e).star() * u)


def klein_gordon_residual(psi: SpinorField, m: float, e) -> Biquaternion:
    e = Event.of(e)
    out = psi.second_partial(0, 0, e) + (m * m) * psi.eval(e)
    for k in range(1, 4):
        out = out - psi.second_partial(k, k, e)
    return out


# -- momentum space --------------------------------------------------------


def _symbol(mom: Momentum, u: Biquaternion, pair: AmplitudePair) -> AmplitudePair:
    pv = Biquaternion.vector(mom.p)
    k = ONE * mom.E + 1j * pv
    A, B = pair.A, pair.B
    r1 = k * A - 1j * mom.m * (B.star() * u)
    r2 = -(k * B) - 1j * mom.m * (A.star() * u)
    return AmplitudePair(r1, r2)


def symbol_matrix(mom: Momentum, u: Biquaternion = E3) -> np.ndarray:
    """16x16 real matrix of the coefficient-matching equations on (A, B)."""
    cols = []
    for j in range(16):
        basis = np.zeros(16)
        basis[j] = 1.0
        cols.append(_symbol(mom, u, AmplitudePair.from_reals(basis)).to_reals())
    return np.array(cols).T


def momentum_symbol_kernel(mom: Momentum, u: Biquaternion = E3,
                           rel_tol: float = KERNEL_REL_TOL) -> tuple[int, list, list]:
    """Return ``(dim, basis, singular_values)`` of the plane-wave symbol's kernel."""
    _check_unit_axis(u)
    _, s, vh = np.linalg.svd(symbol_matrix(mom, u))
    rank = int(np.sum(s > rel_tol * s[0])) if s[0] > 0 else 0
    basis = [AmplitudePair.from_reals(v) for v in vh[rank:]]
    return 16 - rank, basis, [float(v) for v in s]


def plane_wave_spinor(mom: Momentum, pair: AmplitudePair, name: str = "plane_wave") -> SpinorField:
    """psi = A exp(-i phi) + B exp(i phi) with phi = E t - p.x, with exact partials."""
    k = (mom.E, -mom.p[0], -mom.p[1], -mom.p[2])
    A, B = pair.A, pair.B

    def phase(e):
        return cmath.exp(-1j * (k[0] * e.t + k[1] * e.x1 + k[2] * e.x2 + k[3] * e.x3))

    def value(e):
        w = phase(e)
        return A * w + B * (1 / w)

    def partial(mu, e):
        w = phase(e)
        return A * (-1j * k[mu] * w) + B * (1j * k[mu] / w)

    def second(mu, nu, e):
        w = phase(e)
        kk = -k[mu] * k[nu]
        return A * (kk * w) + B * (kk / w)

    return SpinorField(value, partial, second, name=name)


def construct_solution(mom: Momentum, u: Biquaternion, coeffs: Sequence[float]) -> SpinorField:
    if not mom.on_shell():
        raise OffShellError(f"E^2 - p^2 - m^2 = {mom.E**2 - sum(c*c for c in mom.p) - mom.m**2:.3e}")
    dim, basis, _ = momentum_symbol_kernel(mom, u)
    if len(coeffs) != dim:
        raise DomainError(f"expected {dim} coefficients, got {len(coeffs)}")
    r = np.zeros(16)
    for c, b in zip(coeffs, basis):
        r += c * b.to_reals()
    return plane_wave_spinor(mom, AmplitudePair.from_reals(r), name="lanczos_solution")


def random_on_shell(rng: np.random.Generator, m: float | None = None) -> Momentum:
    m = float(rng.uniform(0.5, 2.0)) if m is None else m
    return Momentum.on_shell_for(tuple(rng.uniform(-2, 2, size=3)), m,
                                 sign=1 if rng.random() < 0.5 else -1)


def random_off_shell(rng: np.random.Generator) -> Momentum:
    mom = random_on_shell(rng)
    shift = float(rng.uniform(0.1, 1.0))
    return Momentum(mom.E + math.copysign(shift, mom.E), mom.p, mom.m)


# -- time reversal -----------------------------------------------------------

_UNITS = [("1", ONE), ("i", ONE * 1j)] + [(f"e{k + 1}", b) for k, b in enumerate(BASIS)] \
    + [(f"ie{k + 1}", b * 1j) for k, b in enumerate(BASIS)]
CANDIDATE_FACTORS = [(n, v) for n, v in _UNITS] + [("-" + n, -v) for n, v in _UNITS]

_CONJUGATIONS = {
    "star": lambda q: q.star(),
    "bar*star": lambda q: q.tilde(),
}


@dataclass(frozen=True)
class TimeReversal:
    """psi(t, x) -> a . sigma(psi(-t, x)) . b"""

    a: Biquaternion
    b: Biquaternion
    sigma: str
    label: str = ""

    def _sig(self, q: Biquaternion) -> Biquaternion:
        return _CONJUGATIONS[self.sigma](q)

    def apply_value(self, q: Biquaternion) -> Biquaternion:
        return self.a * self._sig(q) * self.b

    def __call__(self, psi: SpinorField) -> SpinorField:
        def value(e):
            return self.apply_value(psi.eval(e.time_reversed()))

        def partial(mu, e):
            d = self.apply_value(psi.partial(mu, e.time_reversed()))
            return -d if mu == 0 else d

        return SpinorField(value, partial, name=f"T[{self.label}]({psi.name})")

    def j_linearity(self, u: Biquaternion, rng: np.random.Generator) -> str:
        """Behaviour w.r.t. the complex structure psi -> psi u: 'antilinear', 'linear' or 'neither'."""
        X = Biquaternion.from_reals(rng.normal(size=8))
        tx = self.apply_value(X)
        txu = self.apply_value(X * u)
        scale = max(1.0, abs(tx))
        if abs(txu + tx * u) <= 1e-12 * scale:
            return "antilinear"
        if abs(txu - tx * u) <= 1e-12 * scale:
            return "linear"
        return "neither"


@dataclass
class TimeReversalResult:
    descriptor: str
    t_square_sign: int
    j_linearity: str
    max_solution_residual: float
    max_t_square_error: float

    def __iter__(self):
        return iter((self.descriptor, self.t_square_sign))


@dataclass
class SearchOutcome:
    found: list
    rejected_linear: list = field(default_factory=list)
    candidates: int = 0


def solution_span(m: float, u: Biquaternion, rng: np.random.Generator) -> list:
    """The 8 kernel-basis solutions at one random on-shell momentum."""
    mom = Momentum.on_shell_for(tuple(rng.uniform(-1, 1, 3)), m)
    _, basis, _ = momentum_symbol_kernel(mom, u)
    return [plane_wave_spinor(mom, b, name=f"basis{i}").cached() for i, b in enumerate(basis)]


def _t_square_sign(T: TimeReversal, sols, events) -> tuple[int, float]:
    err_minus = err_plus = 0.0
    for psi in sols:
        tt = T(T(psi))
        for ev in events:
            v, w = tt.eval(ev), psi.eval(ev)
            err_minus = max(err_minus, abs(v + w))
            err_plus = max(err_plus, abs(v - w))
    if err_minus <= T_SQUARE_TOL:
        return -1, err_minus
    if err_plus <= T_SQUARE_TOL:
        return 1, err_plus
    return 0, min(err_minus, err_plus)


def time_reversal_scan(m: float, u: Biquaternion = E3, n_events: int = 50,
                       seed: int = 0) -> SearchOutcome:
    """Scan every candidate T and classify the solution-preserving ones."""
    if not m > 0:
        raise DomainError("time-reversal search needs m > 0")
    _check_unit_axis(u)
    rng = np.random.default_rng(seed)
    sols = solution_span(m, u, rng)
    events = [Event(*rng.uniform(-2, 2, 4)) for _ in range(n_events)]
    outcome = SearchOutcome(found=[])
    for sigma in _CONJUGATIONS:
        for (na, a), (nb, b) in itertools.product(CANDIDATE_FACTORS, repeat=2):
            outcome.candidates += 1
            T = TimeReversal(a, b, sigma, label=f"{na}.{sigma}(psi(-t)).{nb}")
            worst = 0.0
            for psi in sols:
                Tpsi = T(psi)
                for ev in events:
                    worst = max(worst, abs(lanczos_residual(Tpsi, m, u, ev)))
                    if worst > SOLUTION_TOL:
                        break
                if worst > SOLUTION_TOL:
                    break
            if worst > SOLUTION_TOL:
                continue
            sign, err = _t_square_sign(T, sols, events)
            res = TimeReversalResult(T.label, sign, T.j_linearity(u, rng), worst, err)
            if res.j_linearity == "antilinear":
                outcome.found.append((T, res))
            else:
                outcome.rejected_linear.append((T, res))
    return outcome


def time_reversal_search(m: float, u: Biquaternion = E3, n_events: int = 50,
                         seed: int = 0) -> list:
    """Solution-preserving antilinear time reversals as ``(descriptor, t_square_sign)`` pairs."""
    outcome = time_reversal_scan(m, u, n_events, seed)
    if not outcome.found:
        raise SearchExhaustedError("no antilinear candidate maps solutions onto solutions")
    return [res for _, res in outcome.found]


# -- effective mass ----------------------------------------------------------


def spinor_field_from_em(F: EMField, u: Biquaternion = E3) -> SpinorField:
    """psi(x) = sqrt(rho) exp(i beta/2) L(x) from the pointwise decomposition of F.

    Partials follow from the chain rule through sqrt(F.F), f = F/lambda and
    L = (f + u)/sqrt((f + u).(f + u)).
    """

    def pieces(e):
        Fv = F.eval(e)
        dec = decompose(Fv, u)
        lam = dec.rho * cmath.exp(1j * dec.beta)
        return Fv, dec, lam

    def value(e):
        return pieces(e)[1].spinor()

    def partial(mu, e):
        Fv, dec, lam = pieces(e)
        dF = F.partial(mu, e)
        Fa, dFa = Fv.vec, dF.vec
        dlam = (Fa @ dFa) / lam
        f = Fa / lam
        df = dFa / lam - Fa * (dlam / lam**2)
        v = f + u.vec
        n = v @ v
        s = sqrt_principal(n)
        ds = (v @ df) / s
        dL = df / s - v * (ds / s**2)
        sig = sqrt_principal(lam)
        dsig = dlam / (2 * sig)
        return dec.L.value * dsig + Biquaternion.vector(dL) * sig

    return SpinorField(value, partial, name=f"psi[{F.name}]")


def mass_samples(psi: SpinorField, u: Biquaternion, events: Sequence) -> list:
    out = []
    for ev in events:
        ev = Event.of(ev)
        M = -1j * dbar(psi, ev) * inverse(psi.eval(ev).star() * u)
        out.append(MassSample(ev, M, M.w, abs(M.vector_part())))
    return out


def mass_summary(samples: Sequence[MassSample]) -> dict:
    n = len(samples)
    mean = Biquaternion()
    for s in samples:
        mean = mean + s.M
    mean = mean / n
    spread = max(abs(s.M - mean) for s in samples)
    return {
        "n": n,
        "mean": mean.to_json(),
        "max_abs_dev_from_mean": spread,
        "relative_variation": spread / abs(mean) if abs(mean) > 0 else (0.0 if spread == 0 else math.inf),
        "max_deviation_from_scalar": max(s.deviation_from_scalar for s in samples),
    }


def effective_mass_field(F, u: Biquaternion, events: Sequence) -> tuple[list, dict]:
    """Pointwise mass slot M = -i (Dbar psi) (psi* u)^-1 along ``events``.

    ``F`` is an electromagnetic field (spinorized pointwise) or a spinor field.
    """
    psi = spinor_field_from_em(F, u) if isinstance(F, EMField) else F
    samples = mass_samples(psi, u, events)
    return samples, mass_summary(samples)
