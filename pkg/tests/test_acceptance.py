"""Acceptance criteria 1-14 at their stated tolerances.

Each test runs the corresponding identity checks from ``bcprabhakar.verify``
with the default configuration and records one summary line per criterion;
``conftest.py`` prints those lines at the end of the session.
"""

import time

import pytest

from bcprabhakar import verify as V
from bcprabhakar.cli import EXIT_OK, main

from .conftest import SUMMARY

CFG = V.VerifyConfig()


def _run(criterion, *checks):
    records, elapsed = [], 0.0
    for check in checks:
        start = time.perf_counter()
        records.extend(V.run_check(check, CFG))
        elapsed += time.perf_counter() - start
    ok = bool(records) and all(r.passed for r in records) and all(r.criterion == criterion for r in records)
    worst = max(r.errors[-1] for r in records)
    SUMMARY[criterion] = f"{'PASS' if ok else 'FAIL'} criterion {criterion:2d}: {len(records)} record(s), worst error {worst:.3e}, {elapsed:.1f}s"
    for r in records:
        print(r.line())
    return records, elapsed


def _assert_passed(records):
    failed = [r.line() for r in records if not r.passed]
    assert not failed, "\n".join(failed)


def test_criterion_01_exponential_reduction():
    records, elapsed = _run(1, V.check_exponential_reduction)
    _assert_passed(records)
    assert records[0].threshold == 1e-12
    assert elapsed < 1.0


def test_criterion_02_special_case_lattice():
    records, _ = _run(2, V.check_special_lattice)
    _assert_passed(records)
    assert records[0].threshold == 1e-12


def test_criterion_03_k_gamma():
    records, _ = _run(3, V.check_k_gamma)
    _assert_passed(records)
    assert records[0].threshold == 1e-8


def test_criterion_04_kernel_laplace_transform():
    records, elapsed = _run(4, V.check_kernel_lt)
    _assert_passed(records)
    assert records[0].threshold == 1e-6
    assert elapsed < 30.0


def test_criterion_05_shift_formulas():
    records, _ = _run(5, V.check_shift_integral, V.check_shift_derivative)
    _assert_passed(records)
    integral, derivative = records
    assert integral.at == derivative.at == 2049 and 2049 in integral.grids
    assert integral.threshold == derivative.threshold == 5e-4
    assert integral.floor == 1.8 and derivative.floor == 1.0


def test_criterion_06_convolution_and_semigroup():
    records, _ = _run(6, V.check_kernel_convolution, V.check_semigroup, V.check_semigroup_rl)
    _assert_passed(records)
    assert all(r.threshold == 5e-4 and r.at == 2049 for r in records)
    assert records[0].floor == 1.8 and records[1].floor == 1.8


def test_criterion_07_rl_compositions():
    records, _ = _run(7, V.check_rl_composition)
    _assert_passed(records)
    assert records[0].threshold == 5e-4 and records[0].at == 2049


def test_criterion_08_left_inversion():
    records, _ = _run(8, V.check_left_inversion)
    _assert_passed(records)
    for r in records:
        assert r.grids == [513, 1025, 2049]
        assert r.threshold == 1e-2 and r.decreasing
        assert r.errors[0] > r.errors[1] > r.errors[2]


def test_criterion_09_boundedness():
    records, _ = _run(9, V.check_boundedness)
    _assert_passed(records)
    # worst ratio ||E f|| / (K ||f||) over 20 functions and 10 parameter draws
    assert records[0].errors[0] <= 1.0


def test_criterion_10_linearity():
    records, _ = _run(10, V.check_linearity)
    _assert_passed(records)
    assert records[0].threshold == 1e-12


def test_criterion_11_dual_form():
    records, _ = _run(11, V.check_dual_form)
    _assert_passed(records)
    assert all(r.threshold == 5e-4 and r.at == 2049 for r in records)


def test_criterion_12_cauchy_homogeneous():
    records, _ = _run(12, V.check_cauchy_exponential, V.check_cauchy_residual)
    _assert_passed(records)
    exponential, *residuals = records
    assert exponential.threshold == 1e-10
    for r in residuals:
        assert r.threshold == 1e-4 and r.at == 1025 and r.floor == 1.5


def test_criterion_13_corollary_consistency():
    records, _ = _run(13, V.check_corollary_consistency)
    _assert_passed(records)
    solvers, recovery = records
    assert solvers.threshold == 1e-4
    assert recovery.threshold == 5e-4 and recovery.at == 2049


def test_criterion_14_convolution_theorem():
    records, _ = _run(14, V.check_convolution_theorem)
    _assert_passed(records)
    assert records[0].threshold == 1e-5


@pytest.mark.slow
def test_full_verify_under_five_minutes(tmp_path, capsys):
    start = time.perf_counter()
    code = main(["verify", "--suite", "all", "--out", str(tmp_path / "report.json")])
    elapsed = time.perf_counter() - start
    capsys.readouterr()
    assert code == EXIT_OK
    assert elapsed < 300.0
