import numpy as np

from core.verification import SUITES, check_symmetries, run_selftest


def test_selftest_passes():
    results = run_selftest(seed=11, samples=8)
    failed = [f"{r.suite}/{r.name}: {r.detail}" for r in results if not r.passed]
    assert not failed, failed
    assert {r.suite for r in results} == set(SUITES)


def test_selftest_is_reproducible():
    assert run_selftest(seed=3, samples=4) == run_selftest(seed=3, samples=4)


def test_symmetry_suite_covers_all_cases():
    names = {r.name.split("[")[0] for r in check_symmetries(np.random.default_rng(0), 2)}
    assert names == {"field_J_sign", "coupling_J_sign", "proportional_r_sign"}
