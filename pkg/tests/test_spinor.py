import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings

from bqverify import spinor
from bqverify.algebra import E1, E2, E3, ONE, Biquaternion, Rotor, cdot, exp_along, random_rotor
from bqverify.errors import DegenerateAxisError, DomainError, NotOnOrbitError, NullFieldError
from bqverify.spinor import SpinorDecomposition, compose, decompose

from .conftest import vectors


def bilinear_jacobian(psi, u=E3):
    """Oracle: exact derivative of psi -> psi u bar(psi) over the 8 raw reals of psi."""
    cols = []
    for j in range(8):
        d = Biquaternion.from_reals(np.eye(8)[j])
        dF = d * u * psi.bar() + psi * u * d.bar()
        cols.append(np.concatenate([dF.vec.real, dF.vec.imag]))
    return np.array(cols).T


def test_invariant_scale_examples():
    assert spinor.invariant_scale(E1) == (1.0, 0.0)
    rho, beta = spinor.invariant_scale(1j * E1)
    assert rho == 1 and abs(beta - math.pi / 2) <= 1e-15
    rho, beta = spinor.invariant_scale(E1 + 2j * E2)   # F.F = -3
    assert abs(rho - math.sqrt(3)) <= 1e-15 and abs(beta - math.pi / 2) <= 1e-15
    with pytest.raises(NullFieldError):
        spinor.invariant_scale(E1 + 1j * E2)


def test_compose_examples():
    assert compose(SpinorDecomposition(1.0, 0.0, Rotor(ONE))) == E3
    dec = SpinorDecomposition(2.0, math.pi, Rotor(ONE))
    assert abs(compose(dec) + 2 * E3) <= 1e-15


def test_decompose_examples():
    dec = decompose(E3)
    assert dec.rho == 1 and dec.beta == 0 and dec.L.value == E3
    # e3 = exp(pi/2 e3): gauge-equivalent to the identity rotor
    assert abs(spinor.gauge_log(ONE, dec.L) - math.pi / 2) <= 1e-15
    dec = decompose(E1)
    assert abs(dec.L.value - (E1 + E3) / math.sqrt(2)) <= 1e-15
    assert abs(compose(dec) - E1) <= 1e-15


def test_decompose_errors():
    with pytest.raises(NullFieldError):
        decompose(E1 + 1j * E2)
    with pytest.raises(NullFieldError):
        decompose(Biquaternion())
    with pytest.raises(DegenerateAxisError):
        decompose(-E3)
    assert abs(compose(decompose(-E3, -E3)) + E3) <= 1e-15
    with pytest.raises(DomainError):
        decompose(ONE + E1)
    with pytest.raises(DomainError):
        decompose(E1, 2 * E3)


def test_roundtrip_random(rng):
    for _ in range(500):
        F = spinor.random_field(rng)
        dec = decompose(F)
        assert abs(compose(dec) - F) <= 1e-10 * abs(F)
        assert abs(dec.L.value.norm() - 1) <= 1e-12
        assert dec.rho > 0 and -math.pi < dec.beta <= math.pi


@settings(max_examples=200, deadline=None)
@given(vectors)
def test_roundtrip_property(F):
    scale = abs(F)
    assume(scale > 1e-3)
    assume(abs(cdot(F, F)) > 1e-6 * scale**2)
    try:
        dec = decompose(F)
    except DegenerateAxisError:
        return
    assert abs(compose(dec) - F) <= 1e-8 * scale
    lam = dec.rho * cmath.exp(1j * dec.beta)
    assert abs(lam * lam - cdot(F, F)) <= 1e-10 * scale**2


def test_double_cover(rng):
    dec = spinor.random_decomposition(rng)
    shifted = SpinorDecomposition(dec.rho, dec.beta + 2 * math.pi, dec.L, dec.u)
    assert abs(shifted.spinor() + dec.spinor()) <= 1e-14
    assert abs(compose(shifted) - compose(dec)) <= 1e-13


def test_gauge_shift_examples(rng):
    dec = decompose(E1)
    for c in (0.3, 0.2 - 0.4j, 1j):
        g = spinor.gauge_shift(dec, c)
        assert abs(compose(g) - E1) <= 1e-14
        assert abs(spinor.gauge_log(dec.L, g.L) - c) <= 1e-12
    for _ in range(100):
        d = spinor.random_decomposition(rng)
        c = complex(*rng.uniform(-1, 1, 2))
        g = spinor.gauge_shift(d, c)
        assert abs(compose(g) - compose(d)) <= 1e-10 * abs(compose(d))


def test_gauge_log_off_orbit():
    with pytest.raises(NotOnOrbitError):
        spinor.gauge_log(ONE, exp_along(E1, 0.3))


def test_decompositions_of_same_field_differ_by_gauge(rng):
    for _ in range(50):
        d = spinor.random_decomposition(rng)
        F = compose(d)
        d2 = decompose(F)
        assert abs(d2.rho - d.rho) <= 1e-10
        # beta is fixed only mod pi by the two roots of F.F
        delta = (d2.beta - d.beta) % math.pi
        assert min(delta, math.pi - delta) <= 1e-10
        same_root = abs(cmath.exp(1j * d2.beta) - cmath.exp(1j * d.beta)) <= 1e-8
        # the opposite root needs L u bar(L) -> -(L u bar(L)), i.e. L -> L e1
        L1 = d.L.value if same_root else d.L.value * E1
        c = spinor.gauge_log(L1, d2.L.value)
        assert abs(L1 * exp_along(d.u, c) - d2.L.value) <= 1e-9


def test_dof_rank_generic(rng):
    for _ in range(20):
        dec = spinor.random_decomposition(rng)
        res = spinor.dof_rank(dec)
        assert (res.rank, res.nullity) == (6, 2)
        sv = res.singular_values
        assert len(sv) == 8 and sv[5] / sv[0] >= 1e-4 and sv[6] == sv[7] == 0
        assert spinor.gauge_overlap(dec, res) >= 1 - 1e-6


def test_dof_rank_unit_e1():
    dec = decompose(E1)
    rank, nullity, sv = spinor.dof_rank(dec)
    assert (rank, nullity) == (6, 2)


def test_dof_matches_bilinear_oracle(rng):
    for _ in range(20):
        dec = spinor.random_decomposition(rng)
        J = bilinear_jacobian(dec.spinor(), dec.u)
        assert np.linalg.matrix_rank(J, tol=1e-8 * np.linalg.norm(J, 2)) == 6
        # the oracle's kernel is the gauge orbit psi -> psi exp(c u)
        psi = dec.spinor()
        for g in (psi * dec.u, psi * dec.u * 1j):
            assert np.abs(J @ g.to_reals()).max() <= 1e-12 * abs(psi) ** 2


def test_dof_jacobian_matches_oracle_image(rng):
    # the chart and the raw-spinor map have the same tangent image
    dec = spinor.random_decomposition(rng)
    Jc = spinor.dof_jacobian(dec)
    Jo = bilinear_jacobian(dec.spinor(), dec.u)
    both = np.hstack([Jc, Jo])
    assert np.linalg.matrix_rank(both, tol=1e-6 * np.linalg.norm(both, 2)) == 6


def test_phase_probe_duality(rng):
    for _ in range(50):
        dec = spinor.random_decomposition(rng)
        th = float(rng.uniform(-math.pi, math.pi))
        F = compose(dec)
        assert abs(spinor.phase_probe(dec, th, "bar") - F * cmath.exp(2j * th)) <= 1e-12
        assert abs(spinor.phase_probe(dec, th, "bar-star")
                   - spinor.phase_probe(dec, 0.0, "bar-star")) <= 1e-12
        # the duality rotation moves beta by 2 theta (mod pi, by the root's sign)
        _, beta = spinor.invariant_scale(spinor.phase_probe(dec, th, "bar"))
        delta = (beta - dec.beta - 2 * th) % math.pi
        assert min(delta, math.pi - delta) <= 1e-10
    with pytest.raises(DomainError):
        spinor.phase_probe(dec, 0.0, "tilde")


def test_random_rotor_boosts_give_valid_decompositions(rng):
    for boost in (0.0, 0.5, 2.0):
        L = random_rotor(rng, boost)
        dec = SpinorDecomposition(1.0, 0.0, L)
        F = compose(dec)
        assert abs(cdot(F, F) - 1) <= 1e-10 * max(1, abs(F) ** 2)


def test_decomposition_json():
    d = decompose(E1).to_json()
    assert d["rho"] == 1.0 and d["u"] == E3.to_json()
    with pytest.raises(DomainError):
        SpinorDecomposition(0.0, 0.0, Rotor(ONE))
