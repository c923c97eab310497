from fractions import Fraction

import pytest

from core import genfun
from core.errors import InvalidParameters
from core.families import named_group, stem_group
from core.analysis import group_fingerprint
from core.genfun import FingerprintCache, a_of_t, b_of_t
from core.rational_gf import Polynomial, RationalGF


@pytest.fixture(scope="module")
def s3():
    return named_group("symmetric", degree=3)


@pytest.fixture(scope="module")
def d8():
    return named_group("dihedral", order=8)


@pytest.fixture(scope="module")
def q8():
    return named_group("quaternion", order=8)


def test_alpha_of_symmetric_group(s3):
    assert genfun.alpha_series(s3, 3) == [1, 3, 11, 49]
    assert a_of_t(s3).integer_coefficients(3) == [1, 3, 11, 49]


def test_beta_of_symmetric_group(s3):
    assert genfun.beta_series(s3, 2) == [1, 3, 8]
    assert genfun.beta_coefficient(s3, 2) == 8


def test_quaternion_b():
    q8 = named_group("quaternion", order=8)
    assert b_of_t(q8) == RationalGF(Polynomial([1, -1]), {2: 1, 4: 1})
    assert genfun.beta_series(q8, 3) == [1, 5, 22, 92]


def test_dihedral_sixteen_alpha():
    assert genfun.alpha_coefficient(named_group("dihedral", order=16), 2) == 64


def test_abelian_and_trivial_groups():
    c5 = named_group("cyclic", order=5)
    assert a_of_t(c5) == RationalGF.geometric(5)
    assert b_of_t(c5) == RationalGF.geometric(5)
    trivial = named_group("cyclic", order=1)
    assert a_of_t(trivial) == RationalGF.geometric(1)
    assert genfun.alpha_series(trivial, 3) == [1, 1, 1, 1]


def test_negative_index_is_rejected(s3):
    with pytest.raises(InvalidParameters):
        genfun.alpha_coefficient(s3, -1)
    with pytest.raises(InvalidParameters):
        genfun.beta_coefficient(s3, -1)


def test_ac_shortcut_matches_recursion(d8, s3):
    assert genfun.b_of_t_ac(d8) == b_of_t(d8)
    assert genfun.b_of_t_ac(s3) == b_of_t(s3)
    with pytest.raises(InvalidParameters):
        genfun.b_of_t_ac(named_group("symmetric", degree=4))


@pytest.mark.parametrize("policy", ["never", "abelian_only", "always"])
def test_fingerprint_policies_agree(policy):
    s4 = named_group("symmetric", degree=4)
    reference = b_of_t(s4, policy="never", cache=FingerprintCache())
    assert b_of_t(s4, policy=policy, cache=FingerprintCache()) == reference


def test_recursion_work():
    assert genfun.recursion_work(named_group("symmetric", degree=3)) == 1
    # the dihedral centralizer of a double transposition is the only non-abelian one
    assert genfun.recursion_work(named_group("symmetric", degree=4)) == 2


def test_recursion_counts_table_reads(s3):
    b, work = genfun.b_of_t_with_work(s3)
    assert b == b_of_t(s3)
    # center 36, classes 36, two centralizers 24, induced C2 and C3 tables 13, their center tests 13
    assert work == 122


def test_abelian_only_policy_checks_non_abelian_entries():
    expected = b_of_t(named_group("symmetric", degree=4), policy="never", cache=FingerprintCache())
    cache = FingerprintCache()
    assert b_of_t(named_group("symmetric", degree=4), policy="abelian_only", cache=cache) == expected
    assert len(cache) == 1
    assert cache.verified == 0
    assert b_of_t(named_group("symmetric", degree=4), policy="abelian_only", cache=cache) == expected
    assert cache.verified == 1
    assert cache.collisions == 0
    assert cache.hits == 0


def test_wrong_cache_entry_is_caught_unless_trusted(d8):
    s4 = named_group("symmetric", degree=4)
    expected = b_of_t(s4, policy="never", cache=FingerprintCache())
    wrong = FingerprintCache()
    wrong.insert(group_fingerprint(d8), RationalGF.geometric(99))
    assert b_of_t(s4, policy="abelian_only", cache=wrong) == expected
    assert wrong.collisions == 1
    assert b_of_t(s4, policy="always", cache=wrong) != expected
    assert wrong.hits == 1


def test_equivalences(d8, q8, s3):
    assert genfun.a_equivalent(d8, q8)
    assert genfun.b_equivalent(d8, q8)
    c6 = named_group("cyclic", order=6)
    assert not genfun.a_equivalent(c6, s3)
    assert not genfun.b_equivalent(c6, s3)


def test_alpha_is_the_class_equation_sum(d8):
    f = a_of_t(d8)
    assert f.coefficient(0) == 1
    assert f.coefficient(1) == 5


def test_normalized_a_has_unit_coefficients(d8):
    # A_G(t/|G|) = sum over m of (z_m / |G|) / (1 - (m/|G|) t); the weights sum to one
    f = genfun.normalize(a_of_t(d8), d8.order)
    assert f.coefficient(0) == 1
    pf = genfun.partial_fractions(f)
    assert sum(t.coefficient for t in pf.terms) == 1
    assert pf.to_list() == [(3, 4, "1/2", 1), (1, 4, 1, 1)]


def test_beta_never_exceeds_alpha():
    g = stem_group("Gamma4", 2)
    alpha = genfun.alpha_series(g, 4)
    beta = genfun.beta_series(g, 4)
    assert all(b <= a for a, b in zip(alpha, beta))
    assert beta[1] == alpha[1]
    assert beta[1] == Fraction(genfun.a_of_t(g).coefficient(1))
