import json
from fractions import Fraction

import pytest

from homlaws.density import density
from homlaws.verify import run_verify, suite_motzkin_straus, suite_sampler_law


@pytest.fixture(scope="module")
def quick():
    return run_verify("quick", seed=0)


def test_quick_passes(quick):
    assert quick.passed, [s.to_json() for s in quick.suites if not s.passed]
    assert {s.name for s in quick.suites} >= {"motzkin_straus", "homomorphisms", "duality", "logic"}


def test_tampered_density_fails():
    def off_by_one_percent(d, **kw):
        value, prof = density(d, **kw)
        return value + Fraction(1, 100), prof

    r = suite_motzkin_straus(3, density_fn=off_by_one_percent)
    assert not r.passed
    report = run_verify("quick", seed=0, density_fn=off_by_one_percent)
    assert not report.passed
    assert [s.name for s in report.suites if not s.passed] == ["motzkin_straus"]


def test_quick_report_is_byte_identical(quick):
    again = run_verify("quick", seed=0)
    assert json.dumps(quick.to_json()) == json.dumps(again.to_json())


def test_sampler_law_suite_is_seeded():
    a, b = suite_sampler_law(5000, 11), suite_sampler_law(5000, 11)
    assert a == b and a.passed


@pytest.mark.slow
def test_full_report_is_byte_identical():
    a = json.dumps(run_verify("full", seed=7).to_json())
    b = json.dumps(run_verify("full", seed=7).to_json())
    assert a == b and json.loads(a)["passed"]
