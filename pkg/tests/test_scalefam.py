import numpy as np
import pytest

from gfakit.basealg.seminorm import AbsoluteValue, SupDerivatives
from gfakit.embed import make_delta
from gfakit.scale import INCREASING, ScaleFamily, egorov_family, log_family, power_family, PowerScale
from gfakit.scalefam import family_admissible, family_ideal_check, family_membership
from gfakit.seqspace import GrowthCertificate, Seq

ABS = AbsoluteValue()


@pytest.mark.parametrize("seq, in_F, in_K", [
    (Seq.monomial(1, a=5), True, False),
    (Seq.scalar("exp(log(n)^2)", certificate=GrowthCertificate.from_terms({(0, 2): 1.0})), True, False),
    (Seq.monomial(1, s=1, t=0.5), False, False),
    (Seq.monomial(1, s=1, t=1), False, False),
    (Seq.monomial(1, s=-1, t=1), True, True),
    (Seq.constant(0), True, True),
])
def test_power_family_membership(seq, in_F, in_K):
    v = family_membership(seq, power_family(range(1, 4)), ABS)
    assert (v.in_F, v.in_K) == (in_F, in_K)
    assert v.case == INCREASING


def test_power_family_levels_are_reported():
    v = family_membership(Seq.monomial(1, s=1, t=0.5), power_family(range(1, 5)), ABS)
    assert v.F_level == 3
    assert v.levels[2].value == pytest.approx(np.e)
    v = family_membership(Seq.monomial(1, s=-1, t=1), power_family(range(1, 4)), ABS)
    # exp(-n)^(1/n) = 1/e at m = 1; negligible from m = 2 on
    assert v.K_level == 2
    assert len(v.rows("k")) == 3


def test_log_family_decreasing_quantifiers():
    fam = log_family(range(1, 4))
    v = family_membership(Seq.monomial(1, a=3), fam, ABS)
    assert v.in_F is True and v.in_K is False
    v = family_membership(Seq.monomial(1, s=-1, t=0.5), fam, ABS)
    assert v.in_K is True


@pytest.mark.parametrize("seed", range(5))
def test_egorov_membership_is_eventual_vanishing(seed):
    rng = np.random.default_rng(seed)
    fam = egorov_family(range(1, 25))
    for _ in range(20):
        head = rng.normal(size=int(rng.integers(0, 20))).tolist()
        vanishes = bool(rng.random() < 0.5)
        tail = None if vanishes else Seq.constant(float(rng.uniform(0.1, 5)))
        v = family_membership(Seq.from_values(head, tail), fam, ABS, m_budget=24, nmax=4096)
        assert v.in_F is True
        assert v.in_K is vanishes
        if vanishes:
            assert v.K_level == max(1, len(head))


def test_egorov_examples():
    fam = egorov_family()
    v = family_membership(Seq.scalar("1/n"), fam, ABS, nmax=4096)
    assert (v.in_F, v.in_K) == (True, False)
    v = family_membership(Seq.from_values([1, 0.5]), fam, ABS, nmax=4096)
    assert v.in_K is True and v.K_level == 2


def test_ideal_checks():
    fam = power_family(range(1, 4))
    k = Seq.monomial(1, s=-1, t=1)
    f = Seq.monomial(1, a=3)
    chk = family_ideal_check(k, f, fam, ABS)
    assert chk.ok and not chk.flagged and chk.level == 2
    # a pair outside K x F is reported, not counted as a failure
    out = family_ideal_check(k, Seq.monomial(1, s=0.5, t=1), fam, ABS)
    assert out.ok and out.flagged


def test_egorov_ideal_absorbs():
    k = Seq.from_values([2, -1, 3])
    chk = family_ideal_check(k, Seq.scalar("exp(n)"), egorov_family(), ABS, nmax=4096)
    assert chk.ok and not chk.flagged


def test_ideal_check_decreasing_family():
    chk = family_ideal_check(Seq.monomial(1, s=-1, t=1), Seq.monomial(1, a=2), log_family(range(1, 4)), ABS)
    assert chk.ok and not chk.flagged


def test_non_monotone_family_is_refused():
    fam = ScaleFamily(lambda m: PowerScale({1: 2, 2: 1, 3: 3}[m]), (1, 2, 3))
    with pytest.raises(ValueError, match="not monotone"):
        family_membership(Seq.monomial(1, a=1), fam, ABS)


def test_family_admissibility_finds_first_level():
    fam = log_family(range(1, 4))
    adm = family_admissible(make_delta(), fam, SupDerivatives(), mu_max=1, nu_max=0, nmax=10**4)
    assert adm.admissible and adm.m0 == 1
