import pytest

from core import analysis, families
from core.errors import FingerprintMismatch, InvalidParameters
from core.families import FamilySpec, named_group, stem_group
from core.group_table import certify, element_orders
from core.isoclinism import stem_order

GAMMA_FAMILIES = [f"Gamma{k}" for k in range(2, 9)]
PHI_FAMILIES = [f"Phi{k}" for k in range(2, 11)]


@pytest.mark.parametrize("family", GAMMA_FAMILIES)
def test_gamma_stem_groups(family):
    g = stem_group(family, 2)
    spec = families.FAMILY_SPECS[family]
    assert g.order == 2 ** spec.order_exponent
    assert analysis.center(g).order == 2 ** spec.center
    assert certify(g).passed


@pytest.mark.parametrize("family", PHI_FAMILIES)
def test_phi_stem_groups_at_three(family):
    g = stem_group(family, 3)
    spec = families.FAMILY_SPECS[family]
    assert g.order == 3 ** spec.order_exponent
    assert analysis.nilpotency_class(g) == spec.nilpotency_class
    assert g.label == f"{family}(p=3)"


def test_stem_groups_are_built_once():
    assert stem_group("Phi2", 3) is stem_group("phi2", 3)
    assert stem_group("Φ2", 3) is stem_group("Φ₂", 3)


def test_abelian_stem_is_cyclic():
    g = stem_group("abelian", 7)
    assert g.order == 7
    assert analysis.is_abelian(g)


def test_inadmissible_pairs():
    with pytest.raises(InvalidParameters):
        stem_group("Gamma2", 3)
    with pytest.raises(InvalidParameters):
        stem_group("Phi2", 2)
    with pytest.raises(InvalidParameters):
        stem_group("Phi2", 9)
    # 7^5 is above the default table cap
    with pytest.raises(InvalidParameters):
        stem_group("Phi5", 7)


def test_admissible_families():
    assert families.admissible_families(2) == ["abelian"] + GAMMA_FAMILIES
    assert families.admissible_families(3) == ["abelian"] + PHI_FAMILIES
    assert "Phi2" in families.admissible_families(7)
    assert "Phi5" not in families.admissible_families(7)


def test_fingerprint_mismatch_is_reported(monkeypatch):
    monkeypatch.setattr(families, "_stem_cache", {})
    monkeypatch.setitem(families.FAMILY_SPECS, "Phi2", FamilySpec("Phi2", 3, "pcp", 2, 1, 2))
    with pytest.raises(FingerprintMismatch) as exc:
        stem_group("Phi2", 3)
    assert exc.value.expected["center_order"] == 9
    assert exc.value.actual["center_order"] == 3


def test_named_groups():
    assert named_group("quaternion", order=8).order == 8
    assert named_group("semidihedral", order=16).order == 16
    assert named_group("cyclic", order=1).order == 1
    assert named_group("symmetric", degree=4).order == 24
    assert named_group("elementary_abelian", p=3, rank=2).order == 9
    assert analysis.exponent(named_group("quaternion", order=16)) == 8


@pytest.mark.parametrize(
    "name, params",
    [
        ("dihedral", {"order": 7}),
        ("dihedral", {"order": 4}),
        ("quaternion", {"order": 12}),
        ("semidihedral", {"order": 8}),
        ("cyclic", {}),
        ("elementary_abelian", {"p": 4, "rank": 2}),
        ("octahedral", {"order": 24}),
    ],
)
def test_named_group_rejects_bad_parameters(name, params):
    with pytest.raises(InvalidParameters):
        named_group(name, **params)


def test_semidihedral_and_quaternion_are_not_dihedral():
    d16 = named_group("dihedral", order=16)
    sd16 = named_group("semidihedral", order=16)
    q16 = named_group("quaternion", order=16)
    # same order, class equation and exponent; the involution counts differ
    assert [analysis.group_fingerprint(g) for g in (sd16, q16)] == [analysis.group_fingerprint(d16)] * 2
    assert [int((element_orders(g) == 2).sum()) for g in (d16, sd16, q16)] == [9, 5, 1]
    assert all(analysis.center(g).order == 2 for g in (d16, sd16, q16))


def test_family_members():
    members = families.family_members("Gamma3", 2)
    assert [g.order for g in members] == [16, 16, 16, 32]
    assert [g.order for g in families.family_members("Gamma2", 2)] == [8, 8, 16, 32, 32]
    assert [g.order for g in families.family_members("Phi5", 3)] == [243]


def test_family_members_include_products_with_abelian_groups():
    members = families.family_members("Phi2", 3)
    assert [g.order for g in members] == [27, 81, 243, 243]
    assert [g.label for g in members[1:]] == ["Phi2(p=3) x C3", "Phi2(p=3) x C3^2", "Phi2(p=3) x C9"]
    assert {stem_order(g) for g in members} == {27}
    assert [analysis.center(g).order for g in members] == [3, 9, 27, 27]
    assert [g.order for g in families.family_members("Gamma4", 2, max_order=64)] == [32, 64]


def test_small_catalog_respects_the_order_bound():
    catalog = families.small_catalog(16)
    assert catalog
    assert all(g.order <= 16 for g in catalog)
    assert max(g.order for g in families.small_catalog(64)) == 32
