"""Structural invariants of a GroupTable.

All functions are pure; results that are reused across calls (class data,
center, lower central series) are memoized write-once on the table.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple
import itertools
import logging

import numpy as np

from .errors import NotPrimePower
from .group_table import GroupTable, Subgroup, closure, element_orders, generating_set, induced_table

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClassData:
    classes: Tuple[np.ndarray, ...]
    representatives: Tuple[int, ...]
    centralizer_sizes: Tuple[int, ...]
    z_histogram: Dict[int, int]
    class_of: np.ndarray = field(repr=False)
    table_lookups: int = 0  # products read from the table while classes were computed

    @property
    def class_equation(self) -> Tuple[int, ...]:
        return tuple(sorted(c.size for c in self.classes))

    @property
    def class_number(self) -> int:
        return len(self.classes)


@dataclass(frozen=True)
class MaximalClassProfile:
    is_maximal_class: bool
    p: int
    m: int
    P_series: Tuple[Subgroup, ...]
    degree_of_commutativity_positive: bool
    has_abelian_maximal_subgroup: bool
    P1_P3_commute: bool

    def to_dict(self) -> Dict:
        return {
            "is_maximal_class": self.is_maximal_class,
            "p": self.p,
            "m": self.m,
            "P_orders": [s.order for s in self.P_series],
            "degree_of_commutativity_positive": self.degree_of_commutativity_positive,
            "has_abelian_maximal_subgroup": self.has_abelian_maximal_subgroup,
            "P1_P3_commute": self.P1_P3_commute,
        }


def prime_power_exponent(order: int, p: int) -> int:
    """m with order = p^m, or NotPrimePower"""
    m, rest = 0, order
    while rest % p == 0 and rest > 1:
        rest //= p
        m += 1
    if rest != 1:
        raise NotPrimePower(order, p)
    return m


def prime_of(order: int) -> Optional[int]:
    """The prime p when order is a nontrivial prime power, else None"""
    if order < 2:
        return None
    p = next(q for q in itertools.count(2) if order % q == 0)
    try:
        prime_power_exponent(order, p)
    except NotPrimePower:
        return None
    return p


def conjugacy_data(g: GroupTable) -> ClassData:
    """Conjugacy classes ordered by their smallest element"""

    def compute():
        n = g.order
        everything = g.elements
        class_of = np.full(n, -1, dtype=np.int64)
        classes, reps, sizes = [], [], []
        histogram: Dict[int, int] = {}
        for x in range(n):
            if class_of[x] >= 0:
                continue
            conjugates = np.unique(g.mul[g.mul[g.inv, x], everything])
            class_of[conjugates] = len(classes)
            classes.append(conjugates)
            reps.append(x)
            centralizer_size = n // conjugates.size
            sizes.append(centralizer_size)
            histogram[centralizer_size] = histogram.get(centralizer_size, 0) + int(conjugates.size)
        logger.debug("%s: %d conjugacy classes", g.label, len(classes))
        return ClassData(
            classes=tuple(classes),
            representatives=tuple(reps),
            centralizer_sizes=tuple(sizes),
            z_histogram=dict(sorted(histogram.items(), reverse=True)),
            class_of=class_of,
            table_lookups=2 * n * len(classes),
        )

    return g.cached("class_data", compute)


def class_number(g: GroupTable) -> int:
    return conjugacy_data(g).class_number


def centralizer(g: GroupTable, x: int) -> Subgroup:
    return Subgroup.from_mask(g, g.mul[x, :] == g.mul[:, x])


def set_centralizer(g: GroupTable, xs: Sequence[int]) -> Subgroup:
    mask = np.ones(g.order, dtype=bool)
    for x in xs:
        mask &= g.mul[x, :] == g.mul[:, x]
    return Subgroup.from_mask(g, mask)


def center(g: GroupTable) -> Subgroup:
    return g.cached("center", lambda: Subgroup.from_mask(g, (g.mul == g.mul.T).all(axis=1)))


def is_abelian(g: GroupTable) -> bool:
    return center(g).order == g.order


def commutator_subgroup(g: GroupTable, a: Subgroup, b: Subgroup) -> Subgroup:
    """[A, B], generated by all [x, y] with x in A and y in B"""
    values = set()
    bs = np.asarray(b.elements, dtype=np.int64)
    inv_bs = g.inv[bs]
    for x in a.elements:
        comm = g.mul[g.mul[g.inv[x], inv_bs], g.mul[x, bs]]
        values.update(np.unique(comm).tolist())
    values.discard(0)
    return closure(g, sorted(values))


def derived_subgroup(g: GroupTable) -> Subgroup:
    return g.cached("derived", lambda: commutator_subgroup(g, Subgroup.whole(g), Subgroup.whole(g)))


def lower_central_series(g: GroupTable) -> List[Subgroup]:
    """gamma_1 = G, gamma_{i+1} = [gamma_i, G], stopping once a term repeats"""

    def compute():
        whole = Subgroup.whole(g)
        series = [whole]
        while True:
            nxt = derived_subgroup(g) if len(series) == 1 else commutator_subgroup(g, series[-1], whole)
            if nxt.order == series[-1].order:
                break
            series.append(nxt)
            if nxt.order == 1:
                break
        return series

    return list(g.cached("lower_central_series", compute))


def nilpotency_class(g: GroupTable) -> Optional[int]:
    """Class of a nilpotent group (0 for the trivial group); None otherwise"""
    series = lower_central_series(g)
    if series[-1].order != 1:
        return None
    return len(series) - 1


def exponent(g: GroupTable) -> int:
    return int(np.lcm.reduce(element_orders(g)))


def group_fingerprint(g: GroupTable) -> Tuple:
    """Cheap isomorphism invariant: order, class equation, abelianness, exponent"""
    return g.cached(
        "fingerprint",
        lambda: (g.order, conjugacy_data(g).class_equation, is_abelian(g), exponent(g)),
    )


def is_ac_group(g: GroupTable) -> bool:
    """Every non-central element has an abelian centralizer"""
    z = center(g)
    for x in conjugacy_data(g).representatives:
        if x in z:
            continue
        if not centralizer(g, x).is_abelian():
            return False
    return True


def is_normal(g: GroupTable, sub: Subgroup) -> bool:
    mask = sub.mask
    for s in g.generators:
        conj = g.mul[g.mul[g.inv[s], sub.elements], s]
        if not mask[conj].all():
            return False
    return True


def frattini_subgroup(g: GroupTable, p: int) -> Subgroup:
    """G' G^p for a p-group"""
    prime_power_exponent(g.order, p)

    def compute():
        powers = g.elements.copy()
        for _ in range(p - 1):
            powers = g.mul[powers, g.elements]
        return closure(g, np.unique(powers).tolist(), start=derived_subgroup(g))

    return g.cached(f"frattini_{p}", compute)


def maximal_subgroups(g: GroupTable, p: int) -> List[Subgroup]:
    """All index-p subgroups of a p-group, as kernels of functionals on G/Phi(G)"""
    phi = frattini_subgroup(g, p)
    if phi.order == g.order:
        return []
    basis: List[int] = []
    span = phi
    for x in list(g.generators) + list(range(g.order)):
        if span.order == g.order:
            break
        if x not in span:
            basis.append(x)
            span = closure(g, [x], start=span)
    rank = len(basis)

    coords = np.zeros((g.order, rank), dtype=np.int64)
    phi_els = np.asarray(phi.elements, dtype=np.int64)
    for vec in itertools.product(range(p), repeat=rank):
        rep = 0
        for b, e in zip(basis, vec):
            rep = int(g.mul[rep, g.power(b, e)])
        coset = g.mul[rep, phi_els]
        coords[coset] = vec

    subgroups = []
    for functional in itertools.product(range(p), repeat=rank):
        nonzero = [c for c in functional if c]
        if not nonzero or nonzero[0] != 1:
            continue
        kernel = (coords @ np.asarray(functional)) % p == 0
        subgroups.append(Subgroup.from_mask(g, kernel))
    return subgroups


def has_abelian_maximal_subgroup(g: GroupTable, p: int) -> bool:
    return g.cached(
        f"abelian_maximal_{p}", lambda: any(m.is_abelian() for m in maximal_subgroups(g, p))
    )


def _commute(g: GroupTable, a: Subgroup, b: Subgroup) -> bool:
    block = g.mul[np.ix_(a.elements, b.elements)]
    return bool((block == g.mul[np.ix_(b.elements, a.elements)].T).all())


def _two_step_centralizer(g: GroupTable, upper: Subgroup, lower: Subgroup) -> Subgroup:
    """Elements x with [x, y] in lower for every y in upper"""
    mask = np.ones(g.order, dtype=bool)
    lower_mask = lower.mask
    gens = generating_set(g, upper.elements)
    everything = g.elements
    for y in gens:
        comm = g.mul[g.mul[g.inv[everything], g.inv[y]], g.mul[everything, y]]
        mask &= lower_mask[comm]
    return Subgroup.from_mask(g, mask)


def maximal_class_profile(g: GroupTable, p: int) -> MaximalClassProfile:
    """Maximal-class data for a group of order p^m.

    P_1 is the centralizer of gamma_2/gamma_4 and P_i = gamma_i for i >= 2.
    Positive degree of commutativity holds when P_1 is abelian, or when
    [P_i, P_j] <= P_{i+j+1} for all i, j >= 1.
    """
    m = prime_power_exponent(g.order, p)
    abelian_max = has_abelian_maximal_subgroup(g, p) if m >= 1 else False
    cls = nilpotency_class(g)
    if m < 4 or cls != m - 1:
        return MaximalClassProfile(False, p, m, (), False, abelian_max, False)

    gamma = lower_central_series(g)  # gamma[i - 1] = gamma_i
    trivial = Subgroup.trivial(g)
    P1 = _two_step_centralizer(g, gamma[1], gamma[3] if len(gamma) > 3 else trivial)
    P = [Subgroup.whole(g), P1] + [gamma[i - 1] if i - 1 < len(gamma) else trivial for i in range(2, m + 1)]

    def term(i: int) -> Subgroup:
        return P[i] if i <= m else trivial

    if P1.is_abelian():
        positive = True
    else:
        positive = all(
            commutator_subgroup(g, term(i), term(j)).issubset(term(i + j + 1))
            for i in range(1, m)
            for j in range(i, m)
            if i + j < m
        )
    p1_p3 = _commute(g, P1, term(3))
    logger.debug("%s: maximal class of order %d^%d, P1 abelian=%s", g.label, p, m, P1.is_abelian())
    return MaximalClassProfile(True, p, m, tuple(P), positive, abelian_max, p1_p3)


@dataclass(frozen=True)
class CensusEntry:
    order: int
    fingerprint: Tuple
    class_count: int
    representatives: Tuple[int, ...]


def centralizer_census(g: GroupTable) -> List[CensusEntry]:
    """Non-central class representatives grouped by the fingerprint of their centralizer"""
    z = center(g)
    groups: Dict[Tuple, List[int]] = {}
    for x in conjugacy_data(g).representatives:
        if x in z:
            continue
        h = induced_table(centralizer(g, x))
        groups.setdefault(group_fingerprint(h), []).append(x)
    entries = [
        CensusEntry(order=fp[0], fingerprint=fp, class_count=len(xs), representatives=tuple(xs))
        for fp, xs in groups.items()
    ]
    return sorted(entries, key=lambda e: (e.order, e.fingerprint[1], e.representatives))


def summarize(g: GroupTable, p: Optional[int] = None) -> Dict:
    """Plain dictionary of the invariants reported by the CLI"""
    data = conjugacy_data(g)
    summary = {
        "label": g.label,
        "order": g.order,
        "class_number": data.class_number,
        "class_equation": list(data.class_equation),
        "z_histogram": {str(k): v for k, v in data.z_histogram.items()},
        "center_order": center(g).order,
        "derived_order": derived_subgroup(g).order,
        "nilpotency_class": nilpotency_class(g),
        "is_abelian": is_abelian(g),
        "is_ac_group": is_ac_group(g),
    }
    p = p or prime_of(g.order)
    if p is not None and g.order > 1:
        summary["prime"] = p
        summary["frattini_order"] = frattini_subgroup(g, p).order
    return summary
