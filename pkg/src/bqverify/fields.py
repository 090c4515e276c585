"""Analytic spacetime fields and finite-difference validation of their partials.

Units are natural (c = 1).  Coordinates are ordered ``(t, x1, x2, x3)`` and a
partial index ``mu`` runs over the same order.  An electromagnetic field is
described by real callables for ``E``, ``B`` and their first partials; the
biquaternion ``F = E + iB`` is assembled on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .algebra import Biquaternion
from .errors import DomainError, MissingDerivativeError, SingularPointError
from .report import Report

COULOMB_GUARD = 1e-3


@dataclass(frozen=True)
class Event:
    t: float
    x1: float
    x2: float
    x3: float

    def __post_init__(self):
        if not all(math.isfinite(c) for c in self.coords):
            raise DomainError(f"event coordinates must be finite: {self.coords}")

    @classmethod
    def of(cls, e) -> "Event":
        if isinstance(e, Event):
            return e
        if len(e) != 4:
            raise DomainError(f"an event has 4 coordinates, got {len(e)}")
        return cls(*(float(c) for c in e))

    @property
    def coords(self) -> tuple:
        return (self.t, self.x1, self.x2, self.x3)

    @property
    def spatial(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3])

    @classmethod
    def _trusted(cls, t, x1, x2, x3) -> "Event":
        # skips the finiteness check; inputs derive from a validated event
        e = object.__new__(cls)
        object.__setattr__(e, "t", t)
        object.__setattr__(e, "x1", x1)
        object.__setattr__(e, "x2", x2)
        object.__setattr__(e, "x3", x3)
        return e

    def shifted(self, mu: int, h: float) -> "Event":
        c = list(self.coords)
        c[mu] += h
        return Event(*c)

    def time_reversed(self) -> "Event":
        return Event._trusted(-self.t, self.x1, self.x2, self.x3)


@dataclass(frozen=True)
class SourceDensity:
    """Charge density and current, packaged as J = rho_c - i j."""

    charge: float
    current: tuple = (0.0, 0.0, 0.0)

    def biquaternion(self) -> Biquaternion:
        j = self.current
        return Biquaternion(self.charge, -1j * j[0], -1j * j[1], -1j * j[2])

    def __add__(self, other: "SourceDensity") -> "SourceDensity":
        return SourceDensity(self.charge + other.charge,
                             tuple(a + b for a, b in zip(self.current, other.current)))

    def __mul__(self, s: float) -> "SourceDensity":
        return SourceDensity(self.charge * s, tuple(s * c for c in self.current))


NO_SOURCE = SourceDensity(0.0)
_ZERO3 = np.zeros(3)
_ZERO43 = np.zeros((4, 3))


def _no_source(e):
    return NO_SOURCE


class EMField:
    """Electromagnetic field F = E + iB with exact first partials.

    ``eb(e)`` returns the real 3-vectors ``(E, B)``; ``jac(e)`` returns two
    4x3 arrays whose row ``mu`` holds the partial of E (resp. B) along ``mu``.
    ``singular(e)`` flags events where the field may not be evaluated.
    """

    def __init__(self, eb: Callable, jac: Callable, source: Callable = _no_source,
                 singular: Callable | None = None, name: str = "field"):
        self._eb = eb
        self._jac = jac
        self._source = source
        self._singular = singular
        self.name = name

    def check_event(self, e: Event) -> None:
        if self._singular is not None and self._singular(e):
            raise SingularPointError(f"{self.name} is singular at {e.coords}")

    def fields(self, e: Event):
        e = Event.of(e)
        self.check_event(e)
        E, B = self._eb(e)
        return np.asarray(E, dtype=float), np.asarray(B, dtype=float)

    def jacobians(self, e: Event):
        e = Event.of(e)
        self.check_event(e)
        dE, dB = self._jac(e)
        return np.asarray(dE, dtype=float), np.asarray(dB, dtype=float)

    def eval(self, e: Event) -> Biquaternion:
        E, B = self.fields(e)
        return Biquaternion.vector(E + 1j * B)

    def partial(self, mu: int, e: Event) -> Biquaternion:
        dE, dB = self.jacobians(e)
        return Biquaternion.vector(dE[mu] + 1j * dB[mu])

    def source(self, e: Event) -> SourceDensity:
        e = Event.of(e)
        self.check_event(e)
        return self._source(e)

    def __add__(self, other: "EMField") -> "EMField":
        def eb(e):
            E1, B1 = self._eb(e)
            E2, B2 = other._eb(e)
            return np.add(E1, E2), np.add(B1, B2)

        def jac(e):
            a, b = self._jac(e)
            c, d = other._jac(e)
            return np.add(a, c), np.add(b, d)

        def singular(e):
            return any(f._singular is not None and f._singular(e) for f in (self, other))

        return EMField(eb, jac, lambda e: self._source(e) + other._source(e),
                       singular, name=f"{self.name}+{other.name}")

    def with_source(self, source: Callable, name: str | None = None) -> "EMField":
        return EMField(self._eb, self._jac, source, self._singular, name or self.name)

    def __repr__(self):
        return f"EMField({self.name!r})"


class SpinorField:
    """Biquaternion-valued field psi(x) with exact partials.

    ``second`` is optional; without it second-order operators raise
    :class:`~bqverify.errors.MissingDerivativeError`.
    """

    def __init__(self, value: Callable, partial: Callable, second: Callable | None = None,
                 name: str = "spinor"):
        self._value = value
        self._partial = partial
        self._second = second
        self.name = name

    @property
    def has_second_partials(self) -> bool:
        return self._second is not None

    def check_event(self, e: Event) -> None:
        pass

    def eval(self, e) -> Biquaternion:
        return self._value(Event.of(e))

    def partial(self, mu: int, e) -> Biquaternion:
        return self._partial(mu, Event.of(e))

    def second_partial(self, mu: int, nu: int, e) -> Biquaternion:
        if self._second is None:
            raise MissingDerivativeError(f"{self.name} provides no second partials")
        return self._second(mu, nu, Event.of(e))

    def cached(self) -> "SpinorField":
        """Memoizing copy; worthwhile when the same events are probed repeatedly."""
        values, partials = {}, {}

        def value(e):
            v = values.get(e)
            if v is None:
                v = values[e] = self._value(e)
            return v

        def partial(mu, e):
            key = (mu, e)
            v = partials.get(key)
            if v is None:
                v = partials[key] = self._partial(mu, e)
            return v

        return SpinorField(value, partial, self._second, name=self.name)

    def left_scaled(self, c) -> "SpinorField":
        """The field ``c * psi`` for a scalar or biquaternion ``c``."""
        second = None
        if self._second is not None:
            second = lambda mu, nu, e: c * self._second(mu, nu, e)
        return SpinorField(lambda e: c * self._value(e),
                           lambda mu, e: c * self._partial(mu, e),
                           second, name=f"({c})*{self.name}")

    def __add__(self, other: "SpinorField") -> "SpinorField":
        second = None
        if self._second is not None and other._second is not None:
            second = lambda mu, nu, e: self._second(mu, nu, e) + other._second(mu, nu, e)
        return SpinorField(lambda e: self._value(e) + other._value(e),
                           lambda mu, e: self._partial(mu, e) + other._partial(mu, e),
                           second, name=f"{self.name}+{other.name}")

    def __repr__(self):
        return f"SpinorField({self.name!r})"


def constant_spinor(q: Biquaternion) -> SpinorField:
    zero = Biquaternion()
    return SpinorField(lambda e: q, lambda mu, e: zero, lambda mu, nu, e: zero,
                       name="constant")


@dataclass(frozen=True)
class FDParams:
    h: float = 1e-5
    order: int = 4
    tol: float = 1e-6

    def __post_init__(self):
        if not self.h > 0 or not self.tol > 0:
            raise DomainError("FD step and tolerance must be positive")
        if self.order != 4:
            raise DomainError("only the 4th-order central stencil is implemented")


def central_difference(f: Callable, e: Event, mu: int, h: float) -> Biquaternion:
    """4th-order central difference of f along coordinate mu."""
    return (f(e.shifted(mu, -2 * h)) - f(e.shifted(mu, 2 * h))
            + 8.0 * (f(e.shifted(mu, h)) - f(e.shifted(mu, -h)))) / (12.0 * h)


def fd_validate(field, events: Sequence, fd: FDParams = FDParams()) -> Report:
    """Compare ``field.partial`` with finite differences of ``field.eval``."""
    details = []
    worst = 0.0
    for ev in events:
        ev = Event.of(ev)
        field.check_event(ev)
        for mu in range(4):
            h = fd.h * max(1.0, abs(ev.coords[mu]))
            dev = abs(field.partial(mu, ev) - central_difference(field.eval, ev, mu, h))
            worst = max(worst, dev)
            details.append({"event": list(ev.coords), "mu": mu, "dev": dev})
    return Report(f"fd_validate:{getattr(field, 'name', 'field')}", worst, fd.tol, details=details)


# -- catalog ---------------------------------------------------------------


def constant(E=(1.0, 0.0, 0.0), B=(0.0, 0.0, 0.0)) -> EMField:
    E = np.array(E, dtype=float)
    B = np.array(B, dtype=float)
    return EMField(lambda e: (E, B), lambda e: (_ZERO43, _ZERO43), name="constant")


def parallel(E0=1.0, B0=1.0) -> EMField:
    """E and B both along e3: the canonical frame of a non-null field."""
    f = constant((0.0, 0.0, E0), (0.0, 0.0, B0))
    f.name = "parallel"
    return f


def coulomb(q=1.0) -> EMField:
    def eb(e):
        x = e.spatial
        r = math.sqrt(x @ x)
        return q * x / r**3, _ZERO3

    def jac(e):
        x = e.spatial
        r2 = x @ x
        r = math.sqrt(r2)
        dE = np.zeros((4, 3))
        # d_j E_i = q (delta_ij / r^3 - 3 x_i x_j / r^5)
        dE[1:] = q * (np.eye(3) / r**3 - 3.0 * np.outer(x, x) / r**5)
        return dE, _ZERO43

    def singular(e):
        x = e.spatial
        return math.sqrt(x @ x) < COULOMB_GUARD

    return EMField(eb, jac, singular=singular, name="coulomb")


def _wave(k, amp, axis, e_dir, b_dir, name):
    """Linearly polarized wave amp*cos(k(x_axis - t)) with E along e_dir, B along b_dir."""
    e_dir = np.asarray(e_dir, dtype=float)
    b_dir = np.asarray(b_dir, dtype=float)

    def eb(e):
        c = amp * math.cos(k * (e.coords[axis] - e.t))
        return c * e_dir, c * b_dir

    def jac(e):
        s = -amp * k * math.sin(k * (e.coords[axis] - e.t))
        dphase = np.zeros(4)
        dphase[0] = -1.0
        dphase[axis] = 1.0
        return np.outer(s * dphase, e_dir), np.outer(s * dphase, b_dir)

    return EMField(eb, jac, name=name)


def plane_wave(k=1.0, amplitude=1.0) -> EMField:
    """Null wave moving along +e3 with E along e1 and B along e2."""
    return _wave(k, amplitude, 3, (1, 0, 0), (0, 1, 0), "plane_wave")


def two_wave(k1=1.0, k2=1.3, a2=0.7) -> EMField:
    """Plane wave along +e3 plus a second one along +e1 (E along e2, B along e3)."""
    f = plane_wave(k1) + _wave(k2, a2, 1, (0, 1, 0), (0, 0, 1), "wave_x1")
    f.name = "two_wave"
    return f


CATALOG = {
    "constant": constant,
    "parallel": parallel,
    "coulomb": coulomb,
    "plane_wave": plane_wave,
    "two_wave": two_wave,
}


def catalog(name: str, params=None) -> EMField:
    """Build a catalog field; ``params`` is a dict of keyword arguments or a list."""
    try:
        factory = CATALOG[name]
    except KeyError:
        raise DomainError(f"unknown field {name!r}; choose from {sorted(CATALOG)}") from None
    if params is None:
        return factory()
    if isinstance(params, dict):
        return factory(**params)
    return factory(*params)


def field_from_spec(spec: dict) -> EMField:
    """Build a field from the JSON form ``{"name": ..., "params": {...}}``."""
    if not isinstance(spec, dict) or "name" not in spec:
        raise DomainError("field spec must be an object with a 'name' key")
    try:
        return catalog(spec["name"], spec.get("params"))
    except TypeError as exc:
        raise DomainError(f"bad parameters for {spec['name']!r}: {exc}") from None


def random_events(rng: np.random.Generator, n: int, r_min: float = 0.5, r_max: float = 2.0,
                  t_range: float = 2.0) -> list:
    """Events with spatial radius in [r_min, r_max] and |t| <= t_range."""
    out = []
    for _ in range(n):
        d = rng.normal(size=3)
        d *= rng.uniform(r_min, r_max) / np.linalg.norm(d)
        out.append(Event(float(rng.uniform(-t_range, t_range)), *map(float, d)))
    return out


# -- synthetic fields (valid partials, generally not Maxwell solutions) ------


def _linear_e():
    # E = x1 e1: div E = 1 with no declared charge
    def eb(e):
        return np.array([e.x1, 0.0, 0.0]), _ZERO3

    dE = np.zeros((4, 3))
    dE[1, 0] = 1.0
    return EMField(eb, lambda e: (dE, _ZERO43), name="linear_e")


def _monopole(strength=1.0):
    # B = s x1 e1: div B = s
    def eb(e):
        return _ZERO3, np.array([strength * e.x1, 0.0, 0.0])

    dB = np.zeros((4, 3))
    dB[1, 0] = strength
    return EMField(eb, lambda e: (_ZERO43, dB), name="monopole")


def _mixed():
    # E = (t x2, sin x3, x1 x3), B = (0, t x1, cos(t) x2)
    def eb(e):
        t, x1, x2, x3 = e.coords
        return (np.array([t * x2, math.sin(x3), x1 * x3]),
                np.array([0.0, t * x1, math.cos(t) * x2]))

    def jac(e):
        t, x1, x2, x3 = e.coords
        dE = np.array([
            [x2, 0.0, 0.0],
            [0.0, 0.0, x3],
            [t, 0.0, 0.0],
            [0.0, math.cos(x3), x1],
        ])
        dB = np.array([
            [0.0, x1, -math.sin(t) * x2],
            [0.0, t, 0.0],
            [0.0, 0.0, math.cos(t)],
            [0.0, 0.0, 0.0],
        ])
        return dE, dB

    return EMField(eb, jac, name="mixed")


SYNTHETIC = {"linear_e": _linear_e, "monopole": _monopole, "mixed": _mixed}


def synthetic(name: str, **params) -> EMField:
    try:
        return SYNTHETIC[name](**params)
    except KeyError:
        raise DomainError(f"unknown synthetic field {name!r}") from None
