import math

import numpy as np
import pytest

from gfakit.basealg.seminorm import AbsoluteValue
from gfakit.props import (
    DEFAULT_COUNTS, SUITE_NAMES, random_growth, random_moderate, random_negligible, run_suite, run_suites,
)
from gfakit.scale import LogScale
from gfakit.seqspace import MODERATE, NEGLIGIBLE, Seq, classify, ultranorm


@pytest.mark.parametrize("name", SUITE_NAMES)
def test_suites_pass_on_small_counts(name):
    res = run_suite(name, count=min(20, DEFAULT_COUNTS[name]), seed=3)
    assert res.passed, [r.as_dict() for r in res.rows]


def test_same_seed_same_rows():
    a = run_suite("ultrametric", 40, seed=5)
    b = run_suite("ultrametric", 40, seed=5)
    assert [r.as_dict() for r in a.rows] == [r.as_dict() for r in b.rows]


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nonsense")


def test_run_suites_selection():
    assert [r.name for r in run_suites("scalar", count=3)] == ["scalar"]
    assert [r.name for r in run_suites(count=2)] == list(SUITE_NAMES)


def test_generators_have_the_advertised_class():
    rng = np.random.default_rng(0)
    r, p = LogScale(), AbsoluteValue()
    for _ in range(30):
        assert classify(Seq.from_mono(random_moderate(rng)), p, r).verdict == MODERATE
        assert classify(Seq.from_mono(random_negligible(rng)), p, r).verdict == NEGLIGIBLE
        e = ultranorm(Seq.from_mono(random_growth(rng)), p, 1, 0, r).exponent
        assert not math.isnan(e)


def test_detector_catches_a_planted_violation():
    # a suite row must flag failures, not only count instances
    from gfakit.props import PropertyRow

    row = PropertyRow("x", "planted")
    row.record(True)
    row.record(False, 0.5, "example")
    assert row.violations == 1 and row.worst == 0.5 and row.as_dict()["status"] == "FAIL"
