"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""

import time
from dataclasses import replace

import pytest

from conftest import fixture_instance
from dqg import fundamental as fm
from dqg import integrals as ig
from dqg import modular_vn as mv
from dqg.checks import BY_ID, Context, run_check, run_suite
from dqg.exactlin import gq
from mutations import MUTATIONS

FULL_SUITE = ("T", "C", "G2", "S3")


def report(capsys, number: int, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")


def test_criterion_1_full_suite_exact_under_60s(capsys):
    failures = {}
    start = time.perf_counter()
    for name in FULL_SUITE:
        fresh = replace(fixture_instance(name))  # no cached tables from other tests
        res = run_suite(fresh, "all")
        bad = [(r.check_id, r.to_json()["witness"]) for r in res if r.status == "fail"]
        if bad:
            failures[name] = bad
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    report(capsys, 1, ok, f"{elapsed:.1f}s for {', '.join(FULL_SUITE)}; failing: {failures or 'none'}")
    assert elapsed < 60
    assert not failures


@pytest.mark.parametrize("name,ambient", [("T", 64), ("C", 216), ("S3", 216)])
def test_criterion_2_pentagon_three_ways(capsys, name, ambient):
    F = fixture_instance(name).fundamental
    M = F.pentagon_maps
    first = M["W23:X1->X2"].compose(M["W12:X0->X1"])
    second = M["W12:Y2->X2"].compose(M["W13:Y1->Y2"]).compose(M["W23:X0->Y1"])
    closed = F.pentagon_closed_form()
    ok = (F.triples["X0"].dim == ambient and first.equals(second)
          and closed.equals(first.adjoint()) and closed.adjoint().equals(second))
    report(capsys, 2, ok, f"{name}: pentagon on ambient {F.triples['X0'].dim}, two composites and closed form")
    assert ok


def test_criterion_3_modular_oracle(capsys):
    C = fixture_instance("C")
    I, base = C.integrals, C.base
    n, G = base.n, base.group
    closed = tuple({i: gq(base.weight[i % n] / base.weight[base.action[G.inv(i // n)][i % n]])}
                   for i in range(C.dim))
    theta_ok = I.theta_table == closed
    constructive = ig.constructive_defect(I, samples=20, seed=0)
    ok = theta_ok and constructive is None
    report(capsys, 3, ok, f"theta solve = closed form: {theta_ok}; 20 constructive pairs: {constructive or 'exact'}")
    assert ok


def test_criterion_4_numeric_checks(capsys):
    details = []
    ok = True
    for name in FULL_SUITE:
        inst = fixture_instance(name)
        j = mv.j_defect(inst, tol=1e-9)
        res = run_suite(replace(inst), checks=[BY_ID["gns-grams"], BY_ID["pentagon"], BY_ID["psd-oracle"]])
        psd = next(r for r in res if r.check_id == "psd-oracle")
        ok &= j is None and psd.status == "pass"
        details.append(f"{name}: J resid {mv.j_residuals(inst)['J^2 - 1']:.1e}, psd {psd.status}")
    report(capsys, 4, ok, "; ".join(details))
    assert ok


def test_criterion_5_mutation_sensitivity(capsys):
    missed, false_alarms = [], []
    for m in MUTATIONS:
        r = run_check(m.build(), BY_ID[m.detector], Context())
        if r.status != "fail" or r.witness is None:
            missed.append(m.name)
    # each detector passes on the genuine instance the mutation started from
    for m in MUTATIONS:
        r = run_check(fixture_instance(m.origin), BY_ID[m.detector], Context())
        if r.status != "pass":
            false_alarms.append((m.detector, m.origin))
    ok = len(MUTATIONS) == 12 and not missed and not false_alarms
    report(capsys, 5, ok, f"{12 - len(missed)}/12 detected; missed {missed or 'none'}; "
                          f"detectors failing on the unmutated fixture: {false_alarms or 'none'}")
    assert ok
    assert not false_alarms


def test_criterion_6_slice_consistency(capsys):
    F = fixture_instance("C").fundamental
    pairs = 0
    bad = []
    for i in range(F.d):
        for j in range(F.d):
            x, y = F.e(i), F.e(j)
            pairs += 1
            if not fm.slice_w_star_right(F, x, y).equals(F.pi(fm.slice_w_star_right_element(F, x, y))):
                bad.append(("right", i, j))
            if not fm.slice_w_star_left(F, x, y).equals(F.rho(fm.slice_w_star_left_element(F, x, y))):
                bad.append(("left", i, j))
    rho = fm.representations_defect(fixture_instance("C"))
    ok = not bad and rho is None
    report(capsys, 6, ok, f"{pairs} basis pairs, slice mismatches {bad or 'none'}; rho *-hom: {rho or 'yes'}")
    assert ok
