"""Catalog of stem groups for the rank <= 5 isoclinism families and of named small groups.

Odd-p families are compiled from power-commutator presentations; the
2-group families use permutation models.  Every stem group is checked
against an expected structural fingerprint before it is handed out.
"""
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple
import logging
import threading

import numpy as np

from . import analysis
from .closed_forms import FAMILY_ROWS, canonical_family
from .config import get_settings
from .errors import FingerprintMismatch, InvalidParameters
from .group_table import GroupTable, build_from_cayley, build_from_permutations, direct_product, perm_from_cycles
from .pcp import PcPresentation, build_from_pcp

logger = logging.getLogger(__name__)

Word = Dict[int, int]


@dataclass(frozen=True)
class FamilySpec:
    """Expected shape of a family's stem group, as exponents of p.

    abelian_max is None when the catalog does not pin it.
    """

    family: str
    order_exponent: int
    route: str
    center: int
    derived: int
    nilpotency_class: int
    abelian_max: Optional[bool] = None

    def expected(self, p: int) -> Dict:
        fingerprint = {
            "order": p ** self.order_exponent,
            "center_order": p ** self.center,
            "derived_order": p ** self.derived,
            "nilpotency_class": self.nilpotency_class,
        }
        if self.abelian_max is not None:
            fingerprint["abelian_max"] = self.abelian_max
        return fingerprint


FAMILY_SPECS: Dict[str, FamilySpec] = {
    spec.family: spec
    for spec in (
        FamilySpec("abelian", 1, "permutation", 1, 0, 1),
        FamilySpec("Phi2", 3, "pcp", 1, 1, 2),
        FamilySpec("Phi3", 4, "pcp", 1, 2, 3, True),
        FamilySpec("Phi4", 5, "pcp", 2, 2, 2, True),
        FamilySpec("Phi5", 5, "pcp", 1, 1, 2),
        FamilySpec("Phi6", 5, "pcp", 2, 3, 3, False),
        FamilySpec("Phi7", 5, "pcp", 1, 2, 3),
        FamilySpec("Phi8", 5, "pcp", 1, 2, 3),
        FamilySpec("Phi9", 5, "pcp", 1, 3, 4, True),
        FamilySpec("Phi10", 5, "pcp", 1, 3, 4, False),
        FamilySpec("Gamma2", 3, "permutation", 1, 1, 2),
        FamilySpec("Gamma3", 4, "permutation", 1, 2, 3, True),
        FamilySpec("Gamma4", 5, "permutation", 2, 2, 2, True),
        FamilySpec("Gamma5", 5, "pcp", 1, 1, 2),
        FamilySpec("Gamma6", 5, "permutation", 1, 2, 3),
        FamilySpec("Gamma7", 5, "permutation", 1, 2, 3),
        FamilySpec("Gamma8", 5, "permutation", 1, 3, 4, True),
    )
}


def _presentation(label: str, p: int, d: int, commutators: Dict[Tuple[int, int], Word], powers: Optional[Dict[int, Word]] = None) -> PcPresentation:
    def vec(word: Word) -> Tuple[int, ...]:
        out = [0] * d
        for k, e in word.items():
            out[k] = e % p
        return tuple(out)

    return PcPresentation(
        relative_orders=(p,) * d,
        power_words={i: vec(w) for i, w in (powers or {}).items()},
        commutator_words={ji: vec(w) for ji, w in commutators.items()},
        prime=p,
        label=label,
    )


def phi_presentation(family: str, p: int) -> PcPresentation:
    """Presentation of an odd-p stem group; generators are numbered from 0 and [g_j, g_i] with j > i"""
    q = p - 1  # exponent of an inverse
    label = f"{family}(p={p})"
    if family == "Phi2":
        return _presentation(label, p, 3, {(1, 0): {2: 1}})
    if family == "Phi3":
        # alpha, alpha1, alpha2, alpha3
        powers = {1: {3: 2}} if p == 3 else {}
        return _presentation(label, p, 4, {(1, 0): {2: 1}, (2, 0): {3: 1}}, powers)
    if family == "Phi4":
        # alpha, alpha1, alpha2, beta1, beta2
        return _presentation(label, p, 5, {(1, 0): {3: 1}, (2, 0): {4: 1}})
    if family == "Phi5":
        # alpha1..alpha4, beta
        return _presentation(label, p, 5, {(1, 0): {4: q}, (3, 2): {4: q}})
    if family == "Phi6":
        # alpha1, alpha2, beta, beta1, beta2
        return _presentation(label, p, 5, {(1, 0): {2: q}, (2, 0): {3: 1}, (2, 1): {4: 1}})
    if family == "Phi7":
        # alpha, alpha1, beta, alpha2, alpha3
        powers = {1: {4: 2}} if p == 3 else {}
        return _presentation(label, p, 5, {(1, 0): {3: 1}, (3, 0): {4: 1}, (2, 1): {4: q}}, powers)
    if family == "Phi8":
        # alpha1, alpha2, beta = alpha1^p, alpha2^p, beta^p
        return _presentation(
            label,
            p,
            5,
            {(1, 0): {2: q, 4: q}, (2, 1): {4: 1}, (3, 0): {4: q}},
            {0: {2: 1}, 1: {3: 1}, 2: {4: 1}},
        )
    if family in ("Phi9", "Phi10"):
        # alpha, alpha1..alpha4
        commutators = {(1, 0): {2: 1}, (2, 0): {3: 1}, (3, 0): {4: 1}}
        if family == "Phi10":
            commutators[(2, 1)] = {4: q}
        powers = {1: {3: 2, 4: 1}, 2: {4: 2}} if p == 3 else {}
        return _presentation(label, p, 5, commutators, powers)
    raise InvalidParameters(f"{family} has no power-commutator presentation")


def gamma5_presentation() -> PcPresentation:
    """Extraspecial group of order 32 as a central product of two dihedral groups of order 8"""
    return _presentation("Gamma5", 2, 5, {(1, 0): {4: 1}, (3, 0): {4: 1}, (2, 1): {4: 1}})


def dihedral_permutations(n: int) -> List[List[int]]:
    """Rotation and reflection of a regular n-gon"""
    return [[(i + 1) % n for i in range(n)], [(-i) % n for i in range(n)]]


def _affine_z4_squared() -> List[List[int]]:
    points = [(a, b) for a in range(4) for b in range(4)]
    index = {pt: i for i, pt in enumerate(points)}
    moves = [lambda a, b: (a + 1, b), lambda a, b: (a, b + 1), lambda a, b: (-a, -b)]
    return [[index[(f(a, b)[0] % 4, f(a, b)[1] % 4)] for a, b in points] for f in moves]


def _affine_z8() -> List[List[int]]:
    return [[(x + 1) % 8 for x in range(8)], [(-x) % 8 for x in range(8)], [(5 * x) % 8 for x in range(8)]]


def _affine_f2_cubed() -> List[List[int]]:
    def index(v):
        return v[0] + 2 * v[1] + 4 * v[2]

    points = [(i & 1, (i >> 1) & 1, (i >> 2) & 1) for i in range(8)]
    gens = []
    for k in range(3):
        gens.append([index(tuple((v[j] + (j == k)) % 2 for j in range(3))) for v in points])
    # unipotent Jordan block: e1 -> e1, e2 -> e1 + e2, e3 -> e2 + e3
    gens.append([index(((v[0] + v[1]) % 2, (v[1] + v[2]) % 2, v[2])) for v in points])
    return gens


def _gamma_group(family: str) -> GroupTable:
    if family == "Gamma2":
        return build_from_permutations(dihedral_permutations(4), label="Gamma2")
    if family == "Gamma3":
        return build_from_permutations(dihedral_permutations(8), label="Gamma3")
    if family == "Gamma4":
        return build_from_permutations(_affine_z4_squared(), label="Gamma4")
    if family == "Gamma5":
        return build_from_pcp(gamma5_presentation())
    if family == "Gamma6":
        return build_from_permutations(_affine_z8(), label="Gamma6")
    if family == "Gamma7":
        return build_from_permutations(_affine_f2_cubed(), label="Gamma7")
    if family == "Gamma8":
        return build_from_permutations(dihedral_permutations(16), label="Gamma8")
    raise InvalidParameters(f"unknown 2-group family {family}")


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p ** 0.5) + 1))


def check_admissible(family: str, p: int) -> str:
    """Canonical family key, or InvalidParameters when (family, p) has no stem group here"""
    family = canonical_family(family)
    if not _is_prime(p):
        raise InvalidParameters(f"{p} is not a prime")
    if family.startswith("Gamma") and p != 2:
        raise InvalidParameters(f"{family} is a family of 2-groups, got p = {p}")
    if family.startswith("Phi") and p == 2:
        raise InvalidParameters(f"{family} needs an odd prime")
    order = p ** FAMILY_SPECS[family].order_exponent
    cap = get_settings().table_order_cap
    if family != "abelian" and order > cap:
        raise InvalidParameters(f"stem group of {family} at p = {p} has order {order} > {cap}")
    return family


def fingerprint(g: GroupTable, p: int, with_abelian_max: bool = True) -> Dict:
    actual = {
        "order": g.order,
        "center_order": analysis.center(g).order,
        "derived_order": analysis.derived_subgroup(g).order,
        "nilpotency_class": analysis.nilpotency_class(g),
    }
    if with_abelian_max and g.order > 1:
        actual["abelian_max"] = analysis.has_abelian_maximal_subgroup(g, p)
    return actual


_stem_cache: Dict[Tuple[str, int], GroupTable] = {}
_stem_lock = threading.Lock()


def _build_stem(family: str, p: int) -> GroupTable:
    if family == "abelian":
        return named_group("cyclic", order=p)
    if family.startswith("Gamma"):
        return _gamma_group(family)
    return build_from_pcp(phi_presentation(family, p))


def stem_group(family: str, p: int) -> GroupTable:
    """Certified stem group of a family at prime p, built once per process"""
    family = check_admissible(family, p)
    key = (family, p)
    cached = _stem_cache.get(key)
    if cached is not None:
        return cached

    g = _build_stem(family, p)
    spec = FAMILY_SPECS[family]
    expected = spec.expected(p)
    actual = fingerprint(g, p, with_abelian_max=spec.abelian_max is not None)
    if actual != expected:
        raise FingerprintMismatch(family, expected, actual)
    g.label = f"{family}(p={p})" if family != "abelian" else f"C{p}"
    logger.info("built stem group %s of order %d", g.label, g.order)
    with _stem_lock:
        return _stem_cache.setdefault(key, g)


def admissible_families(p: int) -> List[str]:
    """Families with a stem group at p within the order cap, in table order"""
    out = []
    for family in FAMILY_ROWS:
        try:
            check_admissible(family, p)
        except InvalidParameters:
            continue
        out.append(family)
    return out


def _metacyclic_table(n: int, twist: int, square: int) -> np.ndarray:
    """Cayley table of <x, y | x^n, y^2 = x^square, y^-1 x y = x^twist>, element x^a y^b at a + n b"""
    a = np.arange(n)
    table = np.empty((2 * n, 2 * n), dtype=np.int64)
    for b in (0, 1):
        for d in (0, 1):
            r = twist if b else 1
            extra = square if (b and d) else 0
            first = (a[:, None] + r * a[None, :] + extra) % n
            table[np.ix_(a + n * b, a + n * d)] = first + n * (b ^ d)
    return table


def _power_of_two(order: int) -> bool:
    return order >= 1 and order & (order - 1) == 0


def named_group(name: str, **params) -> GroupTable:
    """Named small groups.

    Args:
        name: dihedral | semidihedral | quaternion | cyclic | elementary_abelian | symmetric
        params: order for the first four, p and rank for elementary_abelian,
            degree for symmetric
    """

    def need(key: str) -> int:
        if key not in params:
            raise InvalidParameters(f"{name} needs parameter {key!r}")
        value = params[key]
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise InvalidParameters(f"{name}: {key} must be a positive integer, got {value!r}")
        return value

    if name == "dihedral":
        order = need("order")
        if order < 6 or order % 2:
            raise InvalidParameters(f"dihedral groups need even order >= 6, got {order}")
        return build_from_permutations(dihedral_permutations(order // 2), label=f"D{order}")
    if name == "quaternion":
        order = need("order")
        if order < 8 or not _power_of_two(order):
            raise InvalidParameters(f"generalized quaternion groups need order 2^n >= 8, got {order}")
        n = order // 2
        return build_from_cayley(_metacyclic_table(n, n - 1, n // 2), label=f"Q{order}")
    if name == "semidihedral":
        order = need("order")
        if order < 16 or not _power_of_two(order):
            raise InvalidParameters(f"semidihedral groups need order 2^n >= 16, got {order}")
        n = order // 2
        return build_from_cayley(_metacyclic_table(n, n // 2 - 1, 0), label=f"SD{order}")
    if name == "cyclic":
        order = need("order")
        return build_from_permutations([[(i + 1) % order for i in range(order)]], label=f"C{order}")
    if name == "elementary_abelian":
        p, rank = need("p"), need("rank")
        if not _is_prime(p):
            raise InvalidParameters(f"{p} is not a prime")
        pcp = PcPresentation(relative_orders=(p,) * rank, prime=p, label=f"C{p}^{rank}")
        return build_from_pcp(pcp)
    if name == "symmetric":
        degree = need("degree")
        if degree < 3:
            gens = [perm_from_cycles([[0, 1]], degree)] if degree == 2 else [[0]]
        else:
            gens = [perm_from_cycles([list(range(degree))], degree), perm_from_cycles([[0, 1]], degree)]
        return build_from_permutations(gens, label=f"S{degree}")
    raise InvalidParameters(f"unknown named group {name!r}")


NAMED_GROUPS = ("dihedral", "semidihedral", "quaternion", "cyclic", "elementary_abelian", "symmetric")


def small_catalog(max_order: int = 64) -> List[GroupTable]:
    """Named and stem groups of order at most max_order, used for cross-checks"""
    builders: List[Callable[[], GroupTable]] = [
        lambda: named_group("cyclic", order=1),
        lambda: named_group("cyclic", order=2),
        lambda: named_group("cyclic", order=6),
        lambda: named_group("symmetric", degree=3),
        lambda: named_group("elementary_abelian", p=2, rank=2),
        lambda: named_group("dihedral", order=8),
        lambda: named_group("quaternion", order=8),
        lambda: named_group("dihedral", order=12),
        lambda: named_group("dihedral", order=16),
        lambda: named_group("quaternion", order=16),
        lambda: named_group("semidihedral", order=16),
        lambda: named_group("symmetric", degree=4),
        lambda: stem_group("Phi2", 3),
        lambda: named_group("dihedral", order=32),
        lambda: named_group("quaternion", order=32),
        lambda: named_group("semidihedral", order=32),
        lambda: stem_group("Gamma4", 2),
        lambda: stem_group("Gamma5", 2),
        lambda: stem_group("Gamma6", 2),
        lambda: stem_group("Gamma7", 2),
    ]
    groups = []
    for build in builders:
        g = build()
        if g.order <= max_order:
            groups.append(g)
    return groups


def _abelian_factors(p: int, room: int) -> List[GroupTable]:
    """C_p, C_p x C_p and C_{p^2}, those of order at most room"""
    factors = []
    if room >= p:
        factors.append(named_group("cyclic", order=p))
    if room >= p * p:
        factors.append(named_group("elementary_abelian", p=p, rank=2))
        factors.append(named_group("cyclic", order=p * p))
    return factors


def family_members(family: str, p: int, max_order: Optional[int] = None) -> Sequence[GroupTable]:
    """Groups of one isoclinism family: the stem group, the catalog isomers of
    the stem, and stem x A for small abelian A.

    Args:
        max_order: Largest member built; defaults to min(p^5, table_order_cap)
    """
    family = check_admissible(family, p)
    stem = stem_group(family, p)
    members = [stem]
    if family in ("Gamma3", "Gamma8") and p == 2:
        members.append(named_group("quaternion", order=stem.order))
        members.append(named_group("semidihedral", order=stem.order))
    if family == "Gamma2":
        members.append(named_group("quaternion", order=8))
    limit = max_order or min(p ** 5, get_settings().table_order_cap)
    for factor in _abelian_factors(p, limit // stem.order):
        members.append(direct_product(stem, factor))
    return members
