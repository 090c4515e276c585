"""Biquaternions: quaternions with complex coefficients.

A biquaternion is ``w + x e1 + y e2 + z e3`` with complex ``w, x, y, z`` and
the basis law ``e_i e_j = -delta_ij + eps_ijk e_k``.  The complex unit ``i``
commutes with every ``e_k``.  Three involutions are provided:

* ``bar``   negates the vector part (anti-automorphism),
* ``star``  complex-conjugates all four coefficients (automorphism),
* ``tilde`` is ``star`` composed with ``bar`` (anti-automorphism).

The algebra is isomorphic to 2x2 complex matrices through ``e_k -> -i sigma_k``;
:func:`to_matrix` and :func:`from_matrix` implement that map and are used as
an independent oracle in the tests.
"""

from __future__ import annotations

import cmath
import math
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, NullElementError

ROTOR_TOL = 1e-9
# scalar parts below this (relative) are rounding residue of vector-valued products
VECTOR_TOL = 1e-10


class Biquaternion:
    """Immutable biquaternion ``w + x e1 + y e2 + z e3``."""

    __slots__ = ("w", "x", "y", "z")

    def __init__(self, w=0j, x=0j, y=0j, z=0j):
        self.w = complex(w)
        self.x = complex(x)
        self.y = complex(y)
        self.z = complex(z)

    @classmethod
    def _raw(cls, w, x, y, z) -> "Biquaternion":
        # trusted fast path: arguments are already complex
        q = object.__new__(cls)
        q.w = w
        q.x = x
        q.y = y
        q.z = z
        return q

    # -- constructors -------------------------------------------------------

    @classmethod
    def scalar(cls, s) -> "Biquaternion":
        return cls(s, 0, 0, 0)

    @classmethod
    def vector(cls, v: Sequence) -> "Biquaternion":
        """Pure vector with complex components ``v[0], v[1], v[2]``."""
        return cls(0, v[0], v[1], v[2])

    @classmethod
    def from_array(cls, arr: Iterable) -> "Biquaternion":
        w, x, y, z = arr
        return cls(w, x, y, z)

    @classmethod
    def from_reals(cls, r: Sequence[float]) -> "Biquaternion":
        """Inverse of :meth:`to_reals` (8 reals: real parts then imaginary parts)."""
        return cls(complex(r[0], r[4]), complex(r[1], r[5]),
                   complex(r[2], r[6]), complex(r[3], r[7]))

    # -- accessors ----------------------------------------------------------

    def coeffs(self) -> tuple:
        return (self.w, self.x, self.y, self.z)

    def to_array(self) -> np.ndarray:
        return np.array(self.coeffs(), dtype=complex)

    def to_reals(self) -> np.ndarray:
        c = self.coeffs()
        return np.array([v.real for v in c] + [v.imag for v in c])

    @property
    def vec(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=complex)

    def scalar_part(self) -> "Biquaternion":
        return Biquaternion(self.w)

    def vector_part(self) -> "Biquaternion":
        return Biquaternion(0, self.x, self.y, self.z)

    def is_vector(self, tol: float = 0.0) -> bool:
        return abs(self.w) <= tol

    def is_real(self, tol: float = 0.0) -> bool:
        return all(abs(c.imag) <= tol for c in self.coeffs())

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Biquaternion):
            if isinstance(other, (int, float, complex)):
                return Biquaternion(self.w + other, self.x, self.y, self.z)
            return NotImplemented
        return _raw(self.w + other.w, self.x + other.x,
                    self.y + other.y, self.z + other.z)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Biquaternion):
            if isinstance(other, (int, float, complex)):
                return Biquaternion(self.w - other, self.x, self.y, self.z)
            return NotImplemented
        return _raw(self.w - other.w, self.x - other.x,
                    self.y - other.y, self.z - other.z)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return _raw(-self.w, -self.x, -self.y, -self.z)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, Biquaternion):
            return multiply(self, other)
        if isinstance(other, (int, float, complex)):
            other = complex(other)
            return _raw(self.w * other, self.x * other,
                        self.y * other, self.z * other)
        return NotImplemented

    def __rmul__(self, other):
        # scalars commute with everything
        if isinstance(other, (int, float, complex)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex)):
            return self * (1.0 / other)
        return NotImplemented

    def __abs__(self) -> float:
        """Euclidean magnitude of the 8 real components (not the semi-norm)."""
        return math.sqrt(sum(abs(c) ** 2 for c in self.coeffs()))

    def __eq__(self, other):
        if isinstance(other, (int, float, complex)):
            other = Biquaternion(other)
        if not isinstance(other, Biquaternion):
            return NotImplemented
        return self.coeffs() == other.coeffs()

    def __hash__(self):
        return hash(self.coeffs())

    def __repr__(self):
        return "Biquaternion({!r}, {!r}, {!r}, {!r})".format(*self.coeffs())

    def isclose(self, other, tol: float = 1e-12) -> bool:
        return abs(self - other) <= tol

    # -- involutions and norms ----------------------------------------------

    def bar(self) -> "Biquaternion":
        return _raw(self.w, -self.x, -self.y, -self.z)

    def star(self) -> "Biquaternion":
        return _raw(self.w.conjugate(), self.x.conjugate(),
                    self.y.conjugate(), self.z.conjugate())

    def tilde(self) -> "Biquaternion":
        return _raw(self.w.conjugate(), -self.x.conjugate(),
                    -self.y.conjugate(), -self.z.conjugate())

    def norm(self) -> complex:
        """Semi-norm N(q) = q bar(q), a complex scalar (may vanish for q != 0)."""
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {k: [c.real, c.imag] for k, c in zip("wxyz", self.coeffs())}

    @classmethod
    def from_json(cls, obj: dict) -> "Biquaternion":
        vals = []
        for k in "wxyz":
            v = obj.get(k, [0.0, 0.0])
            if isinstance(v, (int, float)):
                v = [v, 0.0]
            if len(v) != 2:
                raise DomainError(f"coefficient {k!r} must be [re, im], got {v!r}")
            vals.append(complex(float(v[0]), float(v[1])))
        return cls(*vals)


_raw = Biquaternion._raw

ONE = Biquaternion(1)
ZERO = Biquaternion()
E1 = Biquaternion(0, 1, 0, 0)
E2 = Biquaternion(0, 0, 1, 0)
E3 = Biquaternion(0, 0, 0, 1)
BASIS = (E1, E2, E3)


def multiply(a: Biquaternion, b: Biquaternion) -> Biquaternion:
    """Hamilton product under e_i e_j = -delta_ij + eps_ijk e_k."""
    aw, ax, ay, az = a.w, a.x, a.y, a.z
    bw, bx, by, bz = b.w, b.x, b.y, b.z
    return _raw(
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by + ay * bw + az * bx - ax * bz,
        aw * bz + az * bw + ax * by - ay * bx,
    )


def involution(q: Biquaternion, kind: str) -> Biquaternion:
    if kind == "bar":
        return q.bar()
    if kind == "star":
        return q.star()
    if kind == "tilde":
        return q.tilde()
    raise DomainError(f"unknown involution {kind!r}; expected bar, star or tilde")


def cdot(a: Biquaternion, b: Biquaternion) -> complex:
    """Complex bilinear dot product of two pure vectors (no conjugation)."""
    if abs(a.w) > VECTOR_TOL * max(1.0, abs(a)) or abs(b.w) > VECTOR_TOL * max(1.0, abs(b)):
        raise DomainError("cdot is defined on pure vectors only")
    return a.x * b.x + a.y * b.y + a.z * b.z


def _check_unit_axis(u: Biquaternion) -> None:
    if u.w != 0 or not u.is_real(1e-12):
        raise DomainError("axis must be a real pure vector")
    if abs(cdot(u, u) - 1) > 1e-12:
        raise DomainError("axis must have unit length")


def exp_along(u: Biquaternion, c: complex) -> Biquaternion:
    """exp(c u) = cos c + u sin c for a real unit vector u and complex c."""
    _check_unit_axis(u)
    return ONE * cmath.cos(c) + u * cmath.sin(c)


class Rotor:
    """Unit biquaternion, acting on biquaternions by ``L q bar(L)``."""

    __slots__ = ("value",)

    def __init__(self, value: Biquaternion, tol: float = ROTOR_TOL):
        if isinstance(value, Rotor):
            value = value.value
        if abs(value.norm() - 1) > tol:
            raise DomainError(f"rotor must satisfy N(L) = 1, got N = {value.norm()!r}")
        self.value = value

    def __mul__(self, other):
        if isinstance(other, Rotor):
            return Rotor(self.value * other.value)
        return NotImplemented

    def __repr__(self):
        return f"Rotor({self.value!r})"


def _unwrap(L) -> Biquaternion:
    return L.value if isinstance(L, Rotor) else L


def rotor_apply(L, q: Biquaternion) -> Biquaternion:
    L = _unwrap(L)
    return L * q * L.bar()


def inverse(q: Biquaternion) -> Biquaternion:
    n = q.norm()
    if n == 0 or abs(n) <= 1e-300:
        raise NullElementError(f"{q!r} has vanishing semi-norm and no inverse")
    return q.bar() * (1.0 / n)


def sqrt_principal(z: complex) -> complex:
    """Square root with Re >= 0; on the cut Re = 0 the root with Im >= 0."""
    r = cmath.sqrt(complex(z))
    if r.real < 0 or (r.real == 0 and r.imag < 0):
        r = -r
    return r


# 2x2 images of the basis: e_k -> -i sigma_k
_SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def to_matrix(q: Biquaternion) -> np.ndarray:
    return np.array([
        [q.w - 1j * q.z, -1j * q.x - q.y],
        [-1j * q.x + q.y, q.w + 1j * q.z],
    ], dtype=complex)


def from_matrix(m) -> Biquaternion:
    m = np.asarray(m, dtype=complex)
    return Biquaternion(
        (m[0, 0] + m[1, 1]) / 2,
        1j * (m[0, 1] + m[1, 0]) / 2,
        (m[1, 0] - m[0, 1]) / 2,
        1j * (m[0, 0] - m[1, 1]) / 2,
    )


def random_biquaternion(rng: np.random.Generator, scale: float = 1.0) -> Biquaternion:
    return Biquaternion.from_reals(rng.normal(scale=scale, size=8))


def random_unit_vector(rng: np.random.Generator) -> Biquaternion:
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    return Biquaternion.vector(v)


def random_rotor(rng: np.random.Generator, boost: float = 1.0) -> Rotor:
    """Product of a random spatial rotation and a random boost of rapidity <= 2*boost."""
    rot = exp_along(random_unit_vector(rng), rng.uniform(-math.pi, math.pi))
    bst = exp_along(random_unit_vector(rng), 1j * rng.uniform(-boost, boost))
    return Rotor(rot * bst)
