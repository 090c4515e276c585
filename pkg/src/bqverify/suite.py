"""The full verification suite run by ``bqverify verify``.

Each check draws from its own generator seeded from the run seed, so a
single check can be reproduced in isolation and the report bytes depend
only on the seed.
"""

from __future__ import annotations

import math

import numpy as np

from . import dirac, fields, maxwell, spinor
from .algebra import E3, from_matrix, random_biquaternion, to_matrix
from .errors import NullFieldError
from .fields import Event
from .report import Report

ALGEBRA_TOL = 1e-12
MAXWELL_TOL = 1e-10
ROUNDTRIP_REL_TOL = 1e-10
DOF_KEEP = 1e-4
DOF_DROP = 1e-8
OVERLAP_TOL = 1e-6
PHASE_TOL = 1e-12
LANCZOS_TOL = 1e-10
KG_TOL = 1e-8
KERNEL_GAP_DECADES = 6
T_SQUARE_TOL = 1e-10
EM_T_SQUARE_TOL = 1e-15
MASS_CONST_TOL = 1e-8
MASS_VARIATION_MIN = 0.1


def _rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, index])


def check_algebra(rng, trials: int = 1000) -> Report:
    worst = {"assoc": 0.0, "bar": 0.0, "star": 0.0, "tilde": 0.0, "involutive": 0.0,
             "norm": 0.0, "matrix": 0.0, "roundtrip": 0.0}
    for _ in range(trials):
        a, b, c = (random_biquaternion(rng) for _ in range(3))
        ab = a * b
        worst["assoc"] = max(worst["assoc"], abs(ab * c - a * (b * c)))
        worst["bar"] = max(worst["bar"], abs(ab.bar() - b.bar() * a.bar()))
        worst["star"] = max(worst["star"], abs(ab.star() - a.star() * b.star()))
        worst["tilde"] = max(worst["tilde"], abs(ab.tilde() - b.tilde() * a.tilde()))
        worst["involutive"] = max(worst["involutive"], abs(a.bar().bar() - a),
                                  abs(a.star().star() - a), abs(a.tilde().tilde() - a))
        worst["norm"] = max(worst["norm"], abs(ab.norm() - a.norm() * b.norm()))
        worst["matrix"] = max(worst["matrix"],
                              float(np.abs(to_matrix(ab) - to_matrix(a) @ to_matrix(b)).max()))
        worst["roundtrip"] = max(worst["roundtrip"], abs(from_matrix(to_matrix(a)) - a))
    return Report("algebra_laws", max(worst.values()), ALGEBRA_TOL, extra={"trials": trials, "worst": worst})


def synthetic_fields() -> list:
    return [fields.synthetic(n) for n in fields.SYNTHETIC]


def check_maxwell(rng, n_events: int = 100) -> Report:
    events = fields.random_events(rng, n_events)
    equiv = {}
    resid = {}
    for name in fields.CATALOG:
        f = fields.catalog(name)
        equiv[name] = maxwell.equivalence_check(f, events, MAXWELL_TOL).max_abs
        resid[name] = maxwell.residual_check(f, events, MAXWELL_TOL).max_abs
    for f in synthetic_fields():
        equiv[f.name] = maxwell.equivalence_check(f, events, MAXWELL_TOL).max_abs
    worst = max(max(equiv.values()), max(resid.values()))
    return Report("maxwell_equivalence", worst, MAXWELL_TOL,
                  extra={"events": n_events, "equivalence": equiv, "catalog_residual": resid})


def check_roundtrip(rng, trials: int = 1000) -> Report:
    worst = 0.0
    skipped = 0
    for _ in range(trials):
        F = spinor.random_field(rng)
        try:
            dec = spinor.decompose(F, E3)
        except spinor.DegenerateAxisError:
            skipped += 1
            continue
        worst = max(worst, abs(spinor.compose(dec) - F) / abs(F))
    wave = fields.plane_wave()
    null_rejected = 0
    probes = fields.random_events(rng, 20)
    for ev in probes:
        try:
            spinor.decompose(wave.eval(ev), E3)
        except NullFieldError:
            null_rejected += 1
    passed = worst <= ROUNDTRIP_REL_TOL and null_rejected == len(probes)
    return Report("gursey_roundtrip", worst, ROUNDTRIP_REL_TOL, passed,
                  extra={"trials": trials, "degenerate_skipped": skipped,
                         "null_rejected": f"{null_rejected}/{len(probes)}"})


def check_dof(rng, trials: int = 100) -> Report:
    min_keep = math.inf
    max_drop = 0.0
    worst_overlap = 0.0
    ranks = set()
    for _ in range(trials):
        dec = spinor.random_decomposition(rng)
        res = spinor.dof_rank(dec)
        sv = res.singular_values
        ranks.add(res.rank)
        min_keep = min(min_keep, sv[5] / sv[0])
        max_drop = max(max_drop, sv[6] / sv[0], sv[7] / sv[0])
        worst_overlap = max(worst_overlap, 1.0 - spinor.gauge_overlap(dec, res))
    passed = (ranks == {6} and min_keep >= DOF_KEEP and max_drop <= DOF_DROP
              and worst_overlap <= OVERLAP_TOL)
    return Report("dof_count", worst_overlap, OVERLAP_TOL, passed,
                  extra={"trials": trials, "ranks": sorted(ranks), "min_sigma6_rel": min_keep,
                         "max_sigma7_rel": max_drop, "worst_gauge_overlap_defect": worst_overlap})


def check_phase(rng, trials: int = 100) -> Report:
    worst_dual = worst_inv = 0.0
    for _ in range(trials):
        dec = spinor.random_decomposition(rng)
        theta = float(rng.uniform(-math.pi, math.pi))
        F = spinor.compose(dec)
        worst_dual = max(worst_dual, abs(spinor.phase_probe(dec, theta, "bar")
                                         - F * complex(math.cos(2 * theta), math.sin(2 * theta))))
        worst_inv = max(worst_inv, abs(spinor.phase_probe(dec, theta, "bar-star")
                                       - spinor.phase_probe(dec, 0.0, "bar-star")))
    return Report("phase_duality", max(worst_dual, worst_inv), PHASE_TOL,
                  extra={"trials": trials, "duality": worst_dual, "bar_star_invariance": worst_inv})


def check_dirac_solutions(rng, n_momenta: int = 20, n_events: int = 100) -> Report:
    dims_on, dims_off = [], []
    min_gap = math.inf
    worst_l = worst_kg = 0.0
    min_off_rel = math.inf
    events = fields.random_events(rng, n_events)
    for _ in range(n_momenta):
        mom = dirac.random_on_shell(rng)
        dim, _, sv = dirac.momentum_symbol_kernel(mom, E3)
        dims_on.append(dim)
        if 0 < dim < 16:
            min_gap = min(min_gap, math.log10(sv[15 - dim] / max(sv[16 - dim], 1e-300)))
        psi = dirac.construct_solution(mom, E3, rng.normal(size=dim))
        for ev in events:
            worst_l = max(worst_l, abs(dirac.lanczos_residual(psi, mom.m, E3, ev)))
            worst_kg = max(worst_kg, abs(dirac.klein_gordon_residual(psi, mom.m, ev)))
    for _ in range(n_momenta):
        mom = dirac.random_off_shell(rng)
        dim, _, sv = dirac.momentum_symbol_kernel(mom, E3)
        dims_off.append(dim)
        min_off_rel = min(min_off_rel, sv[-1] / sv[0])
    passed = (all(d == 8 for d in dims_on) and all(d == 0 for d in dims_off)
              and min_gap >= KERNEL_GAP_DECADES and worst_l <= LANCZOS_TOL and worst_kg <= KG_TOL)
    return Report("dirac_lanczos_solutions", worst_l, LANCZOS_TOL, passed,
                  extra={"kernel_dims_on_shell": sorted(set(dims_on)),
                         "kernel_dims_off_shell": sorted(set(dims_off)),
                         "min_gap_decades": min_gap, "min_off_shell_sigma_rel": min_off_rel,
                         "max_kg_residual": worst_kg,
                         "kg_tol": KG_TOL})


def check_time_reversal(rng, seed: int) -> Report:
    outcome = dirac.time_reversal_scan(1.0, E3, n_events=50, seed=seed)
    signs = sorted({r.t_square_sign for _, r in outcome.found})
    worst_t2 = max((r.max_t_square_error for _, r in outcome.found), default=math.inf)
    events = fields.random_events(rng, 100)
    worst_em = 0.0
    for name in fields.CATALOG:
        f = fields.catalog(name)
        tt = maxwell.time_reversal_em(maxwell.time_reversal_em(f))
        for ev in events:
            worst_em = max(worst_em, abs(tt.eval(ev) - f.eval(ev)))
    passed = bool(outcome.found) and signs == [-1] and worst_t2 <= T_SQUARE_TOL \
        and worst_em <= EM_T_SQUARE_TOL
    return Report("fermion_boson_contrast", worst_t2, T_SQUARE_TOL, passed,
                  extra={"candidates": outcome.candidates, "antilinear_found": len(outcome.found),
                         "t_square_signs": signs, "em_t_square_defect": worst_em,
                         "j_linear_survivors": len(outcome.rejected_linear),
                         "examples": [r.descriptor for _, r in outcome.found[:4]]})


def check_effective_mass(rng) -> Report:
    mom = dirac.random_on_shell(rng)
    psi = dirac.construct_solution(mom, E3, rng.normal(size=8))
    _, const = dirac.effective_mass_field(psi, E3, fields.random_events(rng, 50))
    ray = [Event(0.0, float(x), 0.0, 0.0) for x in np.linspace(0.5, 2.0, 50)]
    _, coul = dirac.effective_mass_field(fields.coulomb(), E3, ray)
    passed = const["relative_variation"] <= MASS_CONST_TOL \
        and abs(complex(*const["mean"]["w"]) - mom.m) <= MASS_CONST_TOL * mom.m \
        and coul["relative_variation"] >= MASS_VARIATION_MIN
    return Report("non_constant_mass", const["relative_variation"], MASS_CONST_TOL, passed,
                  extra={"mass": mom.m, "solution_mass_variation": const["relative_variation"],
                         "coulomb_mass_variation": coul["relative_variation"],
                         "coulomb_threshold": MASS_VARIATION_MIN})


def run_all(seed: int = 42) -> list:
    return [
        check_algebra(_rng(seed, 1)),
        check_maxwell(_rng(seed, 2)),
        check_roundtrip(_rng(seed, 3)),
        check_dof(_rng(seed, 4)),
        check_phase(_rng(seed, 5)),
        check_dirac_solutions(_rng(seed, 6)),
        check_time_reversal(_rng(seed, 7), seed),
        check_effective_mass(_rng(seed, 8)),
    ]
