"""Acceptance criteria, one test per criterion at its stated tolerance.

Every test records a single pass/fail line that is printed in the terminal
summary of the pytest run.  The file can also be run directly:

    python3 tests/test_acceptance.py
"""

import math
import os
import subprocess
import sys
import time

import pytest

from fracx import dist, mc, specfun, verify
from fracx.mc import RngState
from fracx.specfun import KSParams

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:                                  # pragma: no cover
    ACCEPTANCE_LINES = {}

SEED = 20240101


def record(k, title, reports, elapsed=None, limit=None):
    """Store and print one summary line; return (passed, failures)."""
    failed = [r for r in reports if not r.passed]
    in_time = limit is None or elapsed <= limit
    ok = not failed and in_time
    worst = ", ".join(f"{r.name}={r.statistic:.3g} (tol {r.threshold:.3g})" for r in failed[:3])
    timing = "" if elapsed is None else f" [{elapsed:.1f}s" + ("" if limit is None else f" / {limit:.0f}s") + "]"
    line = f"[{'PASS' if ok else 'FAIL'}] {k:2d} {title}: {len(reports) - len(failed)}/{len(reports)} checks{timing}"
    if worst:
        line += f"; failing: {worst}"
    ACCEPTANCE_LINES[k] = line
    print(line)
    return ok, failed


def timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


def test_01_bound_suite():
    reports, dt = timed(lambda: [verify.check_bound_family(f) for f in specfun.HYPERBOLIC_FAMILIES])
    ok, failed = record(1, "hyperbolic bound suite", reports, dt, 120.0)
    assert ok, (failed, dt)


def test_02_double_gamma():
    names = {"barnes.shift_by_one", "barnes.shift_by_delta", "barnes.pochhammer_scaling",
             "barnes.pochhammer_shift", "barnes.value_at_delta", "barnes.gamma_ratio_identity"}
    reports, dt = timed(lambda: [r for r in verify.suite_barnes() if r.name in names])
    assert {r.name for r in reports} == names
    ok, failed = record(2, "double Gamma identities", reports, dt, 30.0)
    assert ok, (failed, dt)


def test_03_moment_oracles():
    reports, dt = timed(lambda: verify.check_functional_moments(quick=False, seed=SEED))
    assert all(r.details["n"] == 100_000 for r in reports)
    ok, failed = record(3, "functional moments vs Monte Carlo", reports, dt, 120.0)
    assert ok, (failed, dt)


def test_04_sampler_vs_analytic():
    laws = [dist.make_dist("fweibull", 0.5, 1.0, 1.0), dist.make_dist("ffrechet", 0.5, 1.0, 1.0),
            dist.make_dist("fgumbel", 0.5, 1.0)]
    reports = [verify.check_sampler_vs_cdf(d, 100_000, RngState(SEED, 100 + i)) for i, d in enumerate(laws)]
    reports += verify.check_path_vs_product(quick=False, seed=SEED)
    ok, failed = record(4, "sampler vs analytic sf, path vs beta product", reports)
    assert ok, failed


def test_05_tail_constants():
    names = {"asymptotics.fweibull_upper_tail", "asymptotics.ffrechet_lower_mass"}
    reports = [r for r in verify.suite_asymptotics(quick=False, seed=SEED) if r.name in names]
    assert {r.name for r in reports} == names
    assert all(r.details["n"] == 1_000_000 for r in reports)
    ok, failed = record(5, "tail constants by conditional Monte Carlo", reports)
    assert ok, failed


def test_06_series_asymptotics():
    def run():
        out = []
        for m in (1.0, 2.0):
            r = specfun.kilbas_saigo(KSParams(0.5, m, m - 1.0), -50.0, verify.SERIES_ONLY)
            ratio = r.value * math.gamma(0.5) * 50.0
            out.append(mc.CheckReport(f"weibull_ks[m={m:g}]", "", ratio, 0.1, abs(ratio - 1) <= 0.1,
                                      {"method": r.method, "terms": r.terms_used}))
        r = specfun.le_roy(0.5, -40.0, verify.SERIES_ONLY)
        ratio = r.value * math.gamma(0.5) * 40.0 * math.log(40.0) ** 0.5
        out.append(mc.CheckReport("leroy", "", ratio, 0.3, abs(ratio - 1) <= 0.3, {"method": r.method}))
        return out
    reports, dt = timed(run)
    assert all(r.details["method"] == "series" for r in reports)
    ok, failed = record(6, "series asymptotics at moderate arguments", reports, dt, 60.0)
    assert ok, (failed, dt)


def test_07_solver_equivalence():
    reports = [r for r in verify.suite_solver() if r.name != "solver.power_hazard_fast_path"]
    # each check requires both the closed-form tolerance and the certificate
    assert all(r.details["certificate_excess"] <= 0 for r in reports if r.passed)
    ok, failed = record(7, "series solver vs closed forms, certified", reports)
    assert ok, failed


def test_08_special_cases():
    ok, failed = record(8, "special-case identities", verify.check_special_cases())
    assert ok, failed


def test_09_monotonicity():
    reports = [verify.check_ks_monotone_in_m(), verify.check_leroy_monotone_in_alpha()]
    ok, failed = record(9, "monotonicity in m and alpha", reports)
    assert ok, failed


def test_10_identities_in_law():
    reports = [r for r in verify.suite_identities(quick=False, seed=SEED)
               if r.name.split(".")[1].split("[")[0] in
               ("shanbhag_sreehari", "cpy_product", "exp_factorization", "pareto_endpoints")]
    assert len(reports) == 7
    ok, failed = record(10, "identities in law", reports)
    assert ok, failed


def test_11_mellin():
    ok, failed = record(11, "Mellin transforms vs Monte Carlo power means", verify.check_mellin(seed=SEED))
    assert ok, failed


def _cli(args):
    env = dict(os.environ)
    env.pop("FRACX_PRECISION_BITS", None)
    p = subprocess.run([sys.executable, "-m", "fracx"] + args, capture_output=True, env=env, check=False)
    return p.returncode, p.stdout


def test_12_determinism_and_certification():
    runs = [
        ["sample", "--kind", "fweibull", "--alpha", "0.5", "--rho", "1", "--n", "2000", "--seed", "7"],
        ["sample", "--kind", "weibull_int", "--alpha", "0.3", "--rho", "2", "--n", "2000", "--seed", "7",
         "--method", "path", "--compare-n", "2000"],
        ["eval", "--fn", "kilbas_saigo", "--alpha", "0.5", "--m", "2", "--l", "1", "--xmin", "-20",
         "--xmax", "5", "--count", "6"],
        ["verify", "--suite", "identities", "--quick"],
    ]
    reports = []
    for args in runs:
        a, b = _cli(args), _cli(args)
        same = a == b and a[0] in (0, 1) and len(a[1]) > 0
        reports.append(mc.CheckReport(f"byte_identical[{args[0]}]", "", float(not same), 0.0, same, {}))
    reports.append(verify.check_certification())
    ok, failed = record(12, "determinism and certification", reports)
    assert ok, failed


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-s"]))
