import math

import numpy as np
import pytest

from bqverify import fields
from bqverify.algebra import E1, E2, Biquaternion, cdot
from bqverify.errors import DomainError, SingularPointError
from bqverify.fields import EMField, Event, FDParams, fd_validate


def test_event_validation():
    assert Event.of([0, 1, 2, 3]).coords == (0.0, 1.0, 2.0, 3.0)
    with pytest.raises(DomainError):
        Event(0, math.inf, 0, 0)
    with pytest.raises(DomainError):
        Event.of([1, 2, 3])


def test_constant_field():
    f = fields.constant(E=(1, 0, 0), B=(0, 0, 0))
    assert f.eval(Event(3.0, -1, 2, 5)) == E1


def test_coulomb_unit_radius():
    f = fields.coulomb(q=1)
    assert f.eval(Event(0.7, 1, 0, 0)) == E1
    with pytest.raises(SingularPointError):
        f.eval(Event(0, 0, 0, 0))
    with pytest.raises(SingularPointError):
        f.partial(1, Event(0, 5e-4, 0, 0))


def test_plane_wave_at_origin_is_null():
    f = fields.plane_wave(k=1)
    F = f.eval(Event(0, 0, 0, 0))
    assert F == E1 + 1j * E2
    assert cdot(F, F) == 0


def test_plane_wave_null_everywhere(rng):
    f = fields.plane_wave(k=1.7, amplitude=2.0)
    for ev in fields.random_events(rng, 100):
        F = f.eval(ev)
        assert abs(cdot(F, F)) <= 1e-12


def test_parallel_and_coulomb_non_null(rng):
    for f in (fields.parallel(), fields.coulomb()):
        for ev in fields.random_events(rng, 100):
            F = f.eval(ev)
            assert abs(cdot(F, F)) > 0


def test_two_wave_generically_non_null(rng):
    f = fields.two_wave()
    vals = [abs(cdot(f.eval(ev), f.eval(ev))) for ev in fields.random_events(rng, 50)]
    assert np.median(vals) > 1e-3


def test_unknown_catalog_name():
    with pytest.raises(DomainError):
        fields.catalog("dipole")


def test_field_from_spec():
    f = fields.field_from_spec({"name": "coulomb", "params": {"q": 2.0}})
    assert f.eval(Event(0, 1, 0, 0)) == 2 * E1
    f = fields.catalog("plane_wave", [2.0])
    assert abs(f.eval(Event(0, 0, 0, math.pi / 4)).x) <= 1e-15
    with pytest.raises(DomainError):
        fields.field_from_spec({"name": "coulomb", "params": {"charge": 2.0}})
    with pytest.raises(DomainError):
        fields.field_from_spec({"params": {}})


def test_fd_validate_constant_exact():
    r = fd_validate(fields.constant(), [Event(0, 1, 2, 3), Event(-1, 0, 0, 0)])
    assert r.passed and r.max_abs == 0.0


def test_fd_validate_coulomb(rng):
    r = fd_validate(fields.coulomb(), fields.random_events(rng, 50), FDParams(h=1e-5, tol=1e-6))
    assert r.passed
    assert len(r.details) == 200


@pytest.mark.parametrize("name", sorted(fields.CATALOG))
def test_catalog_partials_match_finite_differences(name, rng):
    r = fd_validate(fields.catalog(name), fields.random_events(rng, 100), FDParams(tol=1e-6))
    assert r.passed, r.line()


@pytest.mark.parametrize("name", sorted(fields.SYNTHETIC))
def test_synthetic_partials_match_finite_differences(name, rng):
    r = fd_validate(fields.synthetic(name), fields.random_events(rng, 50))
    assert r.passed, r.line()


def test_fd_validate_detects_corrupted_partial(rng):
    base = fields.coulomb()

    def jac(e):
        dE, dB = base.jacobians(e)
        dE = dE.copy()
        dE[2, 1] += 0.1
        return dE, dB

    bad = EMField(base._eb, jac, singular=base._singular, name="corrupted")
    r = fd_validate(bad, fields.random_events(rng, 10))
    assert not r.passed
    assert abs(r.max_abs - 0.1) <= 1e-6


def test_fd_validate_rejects_singular_event():
    with pytest.raises(SingularPointError):
        fd_validate(fields.coulomb(), [Event(0, 0, 0, 0)])


def test_fd_params_validation():
    with pytest.raises(DomainError):
        FDParams(h=0)
    with pytest.raises(DomainError):
        FDParams(order=2)


def test_superposition_adds_sources():
    f = fields.constant().with_source(lambda e: fields.SourceDensity(1.0, (0, 1, 0)))
    g = f + f
    s = g.source(Event(0, 0, 0, 0))
    assert s.charge == 2.0 and s.current == (0, 2, 0)
    assert s.biquaternion() == Biquaternion(2, 0, -2j, 0)


def test_spinor_field_missing_second_partials():
    from bqverify.errors import MissingDerivativeError
    psi = fields.SpinorField(lambda e: E1, lambda mu, e: Biquaternion())
    with pytest.raises(MissingDerivativeError):
        psi.second_partial(0, 0, Event(0, 0, 0, 0))
