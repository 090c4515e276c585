import math

import numpy as np
import pytest

from bqverify import dirac, fields
from bqverify.algebra import E1, E3, ONE, Biquaternion, to_matrix
from bqverify.dirac import AmplitudePair, Momentum
from bqverify.errors import DomainError, MissingDerivativeError, OffShellError
from bqverify.fields import Event, SpinorField, constant_spinor


def fd_lanczos_residual(psi, m, u, e, h=1e-4):
    """Oracle: residual with partials taken by 4th-order central differences."""
    c = list(e.coords)
    d = []
    for mu in range(4):
        def along(s, mu=mu):
            cc = list(c)
            cc[mu] += s
            return psi.eval(Event(*cc))
        d.append((8 * (along(h) - along(-h)) - (along(2 * h) - along(-2 * h))) / (12 * h))
    dbar = 1j * d[0] + E1 * d[1] + Biquaternion(0, 0, 1, 0) * d[2] + E3 * d[3]
    return dbar - 1j * m * (psi.eval(e).star() * u)


def kernel_dim_oracle(mom, u):
    """Rank of the same linear system written over 2x2 complex matrices, via numpy lstsq-free SVD."""
    rows = []
    for j in range(16):
        r = np.zeros(16)
        r[j] = 1
        A, B = Biquaternion.from_reals(r[:8]), Biquaternion.from_reals(r[8:])
        k = ONE * mom.E + 1j * Biquaternion.vector(mom.p)
        KA = to_matrix(k) @ to_matrix(A)
        KB = to_matrix(k) @ to_matrix(B)
        mA = to_matrix(B.star() * u) * (1j * mom.m)
        mB = to_matrix(A.star() * u) * (1j * mom.m)
        res = np.concatenate([(KA - mA).ravel(), (-KB - mB).ravel()])
        rows.append(np.concatenate([res.real, res.imag]))
    s = np.linalg.svd(np.array(rows), compute_uv=False)
    return int(np.sum(s <= 1e-8 * s[0]))


def test_residual_examples():
    zero = constant_spinor(Biquaternion())
    assert dirac.lanczos_residual(zero, 1.0, E3, Event(0, 0, 0, 0)) == Biquaternion()
    one = constant_spinor(ONE)
    assert dirac.lanczos_residual(one, 1.0, E3, Event(1, 2, 3, 4)) == -1j * E3


def test_kernel_examples():
    assert dirac.momentum_symbol_kernel(Momentum(1.0, (0, 0, 0), 1.0))[0] == 8
    assert dirac.momentum_symbol_kernel(Momentum(1.5, (0, 0, 0), 1.0))[0] == 0
    assert dirac.momentum_symbol_kernel(Momentum(1.0, (0, 0, 1), 0.0))[0] == 8
    assert dirac.momentum_symbol_kernel(Momentum(-1.0, (0, 0, 0), 1.0))[0] == 8


def test_kernel_dimension_matches_matrix_oracle(rng):
    for _ in range(10):
        for mom in (dirac.random_on_shell(rng), dirac.random_off_shell(rng)):
            dim = dirac.momentum_symbol_kernel(mom, E3)[0]
            assert dim == kernel_dim_oracle(mom, E3)
            assert dim == (8 if mom.on_shell() else 0)


def test_kernel_gap(rng):
    for _ in range(20):
        dim, _, sv = dirac.momentum_symbol_kernel(dirac.random_on_shell(rng), E3)
        assert dim == 8 and math.log10(sv[7] / max(sv[8], 1e-300)) >= 6


def test_kernel_other_axis(rng):
    u = Biquaternion.vector([0.6, 0.0, 0.8])
    mom = dirac.random_on_shell(rng)
    dim, basis, _ = dirac.momentum_symbol_kernel(mom, u)
    assert dim == 8
    psi = dirac.construct_solution(mom, u, rng.normal(size=8))
    for ev in fields.random_events(rng, 20):
        assert abs(dirac.lanczos_residual(psi, mom.m, u, ev)) <= 1e-10


def test_construct_solution_zero_coeffs(rng):
    mom = Momentum.on_shell_for((0.3, 0.1, -0.2), 1.0)
    psi = dirac.construct_solution(mom, E3, [0.0] * 8)
    assert psi.eval(Event(0.5, 1, 2, 3)) == Biquaternion()


def test_construct_solution_errors():
    with pytest.raises(OffShellError):
        dirac.construct_solution(Momentum(1.5, (0, 0, 0), 1.0), E3, [1.0] * 8)
    with pytest.raises(DomainError):
        dirac.construct_solution(Momentum(1.0, (0, 0, 0), 1.0), E3, [1.0] * 3)
    with pytest.raises(DomainError):
        Momentum(1.0, (0, 0, 0), -1.0)


def test_basis_solutions_pass_residuals(rng):
    mom = dirac.random_on_shell(rng)
    events = fields.random_events(rng, 100)
    for j in range(8):
        psi = dirac.construct_solution(mom, E3, np.eye(8)[j])
        for ev in events:
            assert abs(dirac.lanczos_residual(psi, mom.m, E3, ev)) <= 1e-10
            assert abs(dirac.klein_gordon_residual(psi, mom.m, ev)) <= 1e-8


def test_solution_against_finite_difference_oracle(rng):
    mom = dirac.random_on_shell(rng)
    psi = dirac.construct_solution(mom, E3, rng.normal(size=8))
    for ev in fields.random_events(rng, 10):
        assert abs(fd_lanczos_residual(psi, mom.m, E3, ev)) <= 1e-7


def test_zero_momentum_frequency(rng):
    # p = 0: psi(t) combines exp(-imt) and exp(imt), so it is periodic with period 2 pi / m
    m = 1.7
    mom = Momentum.on_shell_for((0, 0, 0), m)
    psi = dirac.construct_solution(mom, E3, rng.normal(size=8))
    ev = Event(0.3, 1.0, -2.0, 0.5)
    later = Event(0.3 + 2 * math.pi / m, 1.0, -2.0, 0.5)
    assert abs(psi.eval(ev) - psi.eval(later)) <= 1e-12
    assert abs(psi.eval(ev) - psi.eval(Event(0.3, 7, 8, 9))) <= 1e-15
    # frequency content: the second time derivative is -m^2 psi
    assert abs(psi.second_partial(0, 0, ev) + m * m * psi.eval(ev)) <= 1e-12


def test_klein_gordon_examples():
    one = SpinorField(lambda e: ONE, lambda mu, e: Biquaternion(),
                      lambda mu, nu, e: Biquaternion())
    ev = Event(0, 0, 0, 0)
    assert dirac.klein_gordon_residual(one, 1.0, ev) == ONE
    with pytest.raises(MissingDerivativeError):
        dirac.klein_gordon_residual(SpinorField(lambda e: ONE, lambda mu, e: Biquaternion()), 1.0, ev)


def test_off_shell_plane_wave_fails(rng):
    mom = dirac.random_off_shell(rng)
    pair = AmplitudePair(ONE, Biquaternion())
    psi = dirac.plane_wave_spinor(mom, pair)
    ev = Event(0.1, 0.2, 0.3, 0.4)
    assert abs(dirac.lanczos_residual(psi, mom.m, E3, ev)) > 1e-3


def test_equation_is_not_complex_linear(rng):
    mom = dirac.random_on_shell(rng)
    psi = dirac.construct_solution(mom, E3, rng.normal(size=8))
    ipsi = psi.left_scaled(1j)
    for ev in fields.random_events(rng, 10):
        r = dirac.lanczos_residual(psi, mom.m, E3, ev)
        ri = dirac.lanczos_residual(ipsi, mom.m, E3, ev)
        assert abs(ri + 1j * r) > 1e-3
        assert abs(ri - 1j * r) > 1e-3
    # real scaling and right-multiplication by u keep solutions
    for ev in fields.random_events(rng, 10):
        assert abs(dirac.lanczos_residual(psi.left_scaled(2.5), mom.m, E3, ev)) <= 1e-10


def test_time_reversal_search_finds_fermionic_t():
    results = dirac.time_reversal_search(1.0, E3, seed=3)
    assert results
    assert all(r.t_square_sign == -1 for r in results)
    assert all(r.j_linearity == "antilinear" for r in results)


def test_time_reversal_squares_to_minus_one_directly(rng):
    outcome = dirac.time_reversal_scan(1.0, E3, seed=5)
    mom = Momentum.on_shell_for((0.4, -0.2, 0.7), 1.0)
    events = fields.random_events(rng, 20)
    for T, _ in outcome.found[:4]:
        for j in range(8):
            psi = dirac.construct_solution(mom, E3, np.eye(8)[j])
            tpsi = T(psi)
            tt = T(tpsi)
            for ev in events:
                assert abs(dirac.lanczos_residual(tpsi, 1.0, E3, ev)) <= 1e-9
                assert abs(tt.eval(ev) + psi.eval(ev)) <= 1e-10


def test_j_linear_survivors_are_not_time_reversals():
    outcome = dirac.time_reversal_scan(1.0, E3, seed=1)
    assert outcome.candidates == 512
    assert len(outcome.found) == 16
    assert {r.j_linearity for _, r in outcome.rejected_linear} == {"linear"}
    assert {r.t_square_sign for _, r in outcome.rejected_linear} == {-1, 1}


def test_time_reversal_search_requires_mass():
    with pytest.raises(DomainError):
        dirac.time_reversal_search(0.0, E3)


def test_effective_mass_self_consistent(rng):
    mom = dirac.random_on_shell(rng)
    psi = dirac.construct_solution(mom, E3, rng.normal(size=8))
    samples, summary = dirac.effective_mass_field(psi, E3, fields.random_events(rng, 50))
    assert summary["relative_variation"] <= 1e-8
    assert summary["max_deviation_from_scalar"] <= 1e-8 * mom.m
    for s in samples:
        assert abs(s.scalar_part - mom.m) <= 1e-8 * mom.m


COULOMB_MASS_VARIATION = 1.1484502500489784


def test_effective_mass_coulomb_not_constant():
    ray = [Event(0.0, float(x), 0.0, 0.0) for x in np.linspace(0.5, 2.0, 50)]
    _, summary = dirac.effective_mass_field(fields.coulomb(), E3, ray)
    assert summary["relative_variation"] >= 0.1
    assert summary["relative_variation"] == pytest.approx(COULOMB_MASS_VARIATION, rel=1e-9)


def test_effective_mass_parallel_vanishes(rng):
    samples, summary = dirac.effective_mass_field(fields.parallel(), E3, fields.random_events(rng, 10))
    assert all(s.M == Biquaternion() for s in samples)


def test_spinor_from_em_partials_match_finite_differences(rng):
    for name in ("coulomb", "two_wave"):
        psi = dirac.spinor_field_from_em(fields.catalog(name), E3)
        report = fields.fd_validate(psi, fields.random_events(rng, 20), fields.FDParams(tol=1e-6))
        assert report.passed, report.line()
