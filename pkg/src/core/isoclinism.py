"""Isoclinism of small groups.

Two groups are isoclinic when there are isomorphisms theta: G/Z(G) -> H/Z(H)
and phi: G' -> H' with phi([x, y]) = [theta x, theta y].  theta is searched
by backtracking over images of a generating set of the central quotient;
phi is then forced on commutators and only validated.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple
import logging

import numpy as np

from . import analysis
from .config import get_settings
from .errors import QuotientTooLarge
from .group_table import GroupTable, Subgroup, closure, element_orders, generating_set, inverse_array

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CentralQuotient:
    group: GroupTable
    table: GroupTable
    coset_of: np.ndarray = field(repr=False)
    representatives: np.ndarray = field(repr=False)

    @property
    def order(self) -> int:
        return self.table.order


def central_quotient(g: GroupTable, cap: Optional[int] = None) -> CentralQuotient:
    """G/Z(G) with cosets numbered by their smallest element"""
    cap = cap or get_settings().quotient_cap
    z = analysis.center(g)
    size = g.order // z.order
    if size > cap:
        raise QuotientTooLarge(size, cap)

    def compute():
        smallest = g.mul[:, z.elements].min(axis=1)
        reps = np.unique(smallest)
        position = np.full(g.order, -1, dtype=np.int64)
        position[reps] = np.arange(reps.size)
        coset_of = position[smallest]
        mul = coset_of[g.mul[np.ix_(reps, reps)]].astype(np.int64)
        table = GroupTable(mul=mul, inv=inverse_array(mul), generators=(), label=f"{g.label}/Z")
        table.generators = generating_set(table)
        return CentralQuotient(g, table, coset_of, reps)

    return g.cached("central_quotient", compute)


def _commutator_matrix(q: CentralQuotient) -> np.ndarray:
    """[x, y] in G for coset indices; well defined since Z(G) is central"""
    g, reps = q.group, q.representatives
    inv = g.inv[reps]
    left = g.mul[np.ix_(inv, inv)]
    right = g.mul[np.ix_(reps, reps)]
    return g.mul[left, right]


@dataclass
class IsoclinismWitness:
    """theta on coset indices of the central quotients, phi on elements of G'"""

    theta: Tuple[int, ...]
    phi: Dict[int, int]
    g_representatives: Tuple[int, ...] = ()
    h_representatives: Tuple[int, ...] = ()

    def to_dict(self) -> Dict:
        return {
            "theta": {int(self.g_representatives[a]): int(self.h_representatives[b]) for a, b in enumerate(self.theta)},
            "phi": {int(k): int(v) for k, v in sorted(self.phi.items())},
        }


def _invariants(q: CentralQuotient, comm: np.ndarray) -> np.ndarray:
    """(order in G/Z, |C_G(x)/Z|) per coset"""
    orders = element_orders(q.table)
    centralizing = (comm == 0).sum(axis=1)
    return np.stack([orders, centralizing], axis=1)


def _trivial_witness() -> IsoclinismWitness:
    return IsoclinismWitness(theta=(0,), phi={0: 0}, g_representatives=(0,), h_representatives=(0,))


class _Search:
    def __init__(self, qg: CentralQuotient, qh: CentralQuotient):
        self.qg, self.qh = qg, qh
        self.comm_g = _commutator_matrix(qg)
        self.comm_h = _commutator_matrix(qh)
        self.inv_g = _invariants(qg, self.comm_g)
        self.inv_h = _invariants(qh, self.comm_h)
        self.gens = list(qg.table.generators)
        self.nodes = 0

    def candidates(self, a: int) -> List[int]:
        hits = np.flatnonzero((self.inv_h == self.inv_g[a]).all(axis=1))
        return [int(b) for b in hits]

    def run(self) -> Optional[IsoclinismWitness]:
        return self._extend([], {})

    def _extend(self, images: List[int], phi: Dict[int, int]) -> Optional[IsoclinismWitness]:
        k = len(images)
        if k == len(self.gens):
            return self._complete(images)
        a = self.gens[k]
        span = self._span(images)
        for b in self.candidates(a):
            if b in span:
                continue
            self.nodes += 1
            trial = dict(phi)
            if not self._consistent(trial, self.gens[: k + 1], images + [b]):
                continue
            found = self._extend(images + [b], trial)
            if found is not None:
                return found
        return None

    def _span(self, images: List[int]) -> set:
        if not images:
            return {0}
        return set(closure(self.qh.table, images).elements.tolist())

    def _consistent(self, phi: Dict[int, int], gens: List[int], images: List[int]) -> bool:
        """phi stays a well-defined injection on commutators of assigned generators"""
        last = len(gens) - 1
        seen = {v: k for k, v in phi.items()}
        for i in range(last + 1):
            for x, y, u, v in ((gens[i], gens[last], images[i], images[last]), (gens[last], gens[i], images[last], images[i])):
                c_g = int(self.comm_g[x, y])
                c_h = int(self.comm_h[u, v])
                if phi.setdefault(c_g, c_h) != c_h:
                    return False
                if seen.setdefault(c_h, c_g) != c_g:
                    return False
        return True

    def _complete(self, images: List[int]) -> Optional[IsoclinismWitness]:
        tg, th = self.qg.table, self.qh.table
        n = tg.order
        theta = np.full(n, -1, dtype=np.int64)
        theta[0] = 0
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for a, b in zip(self.gens, images):
                    y = int(tg.mul[x, a])
                    target = int(th.mul[theta[x], b])
                    if theta[y] < 0:
                        theta[y] = target
                        nxt.append(y)
                    elif theta[y] != target:
                        return None
            frontier = nxt
        if (theta < 0).any() or np.unique(theta).size != n:
            return None

        g, h = self.qg.group, self.qh.group
        source = self.comm_g.ravel()
        target = self.comm_h[np.ix_(theta, theta)].ravel()
        phi: Dict[int, int] = {}
        for c_g, c_h in zip(source.tolist(), target.tolist()):
            if phi.setdefault(c_g, c_h) != c_h:
                return None

        # extend multiplicatively over G' and require a homomorphism
        commutators = list(phi.items())
        frontier = list(phi)
        while frontier:
            nxt = []
            for x in frontier:
                for s, t in commutators:
                    y = int(g.mul[x, s])
                    value = int(h.mul[phi[x], t])
                    if y not in phi:
                        phi[y] = value
                        nxt.append(y)
                    elif phi[y] != value:
                        return None
            frontier = nxt
        if len(set(phi.values())) != len(phi) or len(phi) != analysis.derived_subgroup(h).order:
            return None
        return IsoclinismWitness(
            theta=tuple(int(v) for v in theta),
            phi=phi,
            g_representatives=tuple(int(r) for r in self.qg.representatives),
            h_representatives=tuple(int(r) for r in self.qh.representatives),
        )


def are_isoclinic(g: GroupTable, h: GroupTable, cap: Optional[int] = None) -> Optional[IsoclinismWitness]:
    """A witness of isoclinism, or None when the groups are not isoclinic"""
    qg, qh = central_quotient(g, cap), central_quotient(h, cap)
    if g is h:
        return IsoclinismWitness(
            theta=tuple(range(qg.order)),
            phi={int(x): int(x) for x in analysis.derived_subgroup(g).elements},
            g_representatives=tuple(int(r) for r in qg.representatives),
            h_representatives=tuple(int(r) for r in qg.representatives),
        )
    if qg.order != qh.order:
        return None
    if analysis.derived_subgroup(g).order != analysis.derived_subgroup(h).order:
        return None
    if qg.order == 1:
        return _trivial_witness()

    search = _Search(qg, qh)
    if sorted(map(tuple, search.inv_g.tolist())) != sorted(map(tuple, search.inv_h.tolist())):
        logger.debug("%s / %s: quotient invariants differ", g.label, h.label)
        return None
    witness = search.run()
    logger.debug(
        "isoclinism %s ~ %s: %s after %d search nodes", g.label, h.label, witness is not None, search.nodes
    )
    return witness


def verify_witness(g: GroupTable, h: GroupTable, witness: IsoclinismWitness) -> bool:
    """Check the commutative diagram over every pair of cosets"""
    qg, qh = central_quotient(g), central_quotient(h)
    theta = np.asarray(witness.theta, dtype=np.int64)
    if theta.size != qg.order or qg.order != qh.order or np.unique(theta).size != theta.size:
        return False
    if not (theta[qg.table.mul] == qh.table.mul[np.ix_(theta, theta)]).all():
        return False

    derived_g = analysis.derived_subgroup(g)
    derived_h = analysis.derived_subgroup(h)
    if set(witness.phi) != set(derived_g.elements.tolist()):
        return False
    if sorted(witness.phi.values()) != derived_h.elements.tolist():
        return False
    for x in witness.phi:
        for y in witness.phi:
            if witness.phi[int(g.mul[x, y])] != int(h.mul[witness.phi[x], witness.phi[y]]):
                return False

    comm_g = _commutator_matrix(qg)
    comm_h = _commutator_matrix(qh)
    mapped = comm_h[np.ix_(theta, theta)]
    lookup = np.vectorize(lambda c: witness.phi.get(int(c), -1))
    return bool((lookup(comm_g) == mapped).all())


def stem_order(g: GroupTable) -> int:
    """|G/Z(G)| * |Z(G) n G'|"""
    z = analysis.center(g)
    derived = analysis.derived_subgroup(g)
    meet = Subgroup.from_mask(g, z.mask & derived.mask)
    return (g.order // z.order) * meet.order


def family_rank(g: GroupTable) -> Optional[int]:
    """r with stem order p^r (0 for abelian groups); None when the stem order is not a prime power"""
    order = stem_order(g)
    if order == 1:
        return 0
    p = analysis.prime_of(order)
    if p is None:
        return None
    return analysis.prime_power_exponent(order, p)
