"""Generating functions A_G(t) and B_G(t) of a finite group.

A_G counts orbits of simultaneous conjugation on n-tuples and comes from the
centralizer-size histogram.  B_G counts orbits on pairwise commuting
n-tuples and is computed by recursion over centralizers of non-central
class representatives.
"""
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple
import logging
import threading

from .analysis import (
    center,
    centralizer,
    conjugacy_data,
    group_fingerprint,
    is_abelian,
    is_ac_group,
)
from .config import get_settings
from .errors import InvalidParameters, RecursionDepthExceeded
from .group_table import GroupTable, induced_table
from .rational_gf import PartialFractions, RationalGF

logger = logging.getLogger(__name__)


def a_of_t(g: GroupTable) -> RationalGF:
    """(1/|G|) sum_m z_m / (1 - m t)"""
    n = g.order
    hist = conjugacy_data(g).z_histogram
    return RationalGF.from_terms((Fraction(z, n), m, 1) for m, z in hist.items())


def alpha_coefficient(g: GroupTable, n: int) -> int:
    """(1/|G|) sum_g |Z_G(g)|^n"""
    if n < 0:
        raise InvalidParameters(f"n must be nonnegative, got {n}")
    hist = conjugacy_data(g).z_histogram
    total = sum(z * m ** n for m, z in hist.items())
    q, r = divmod(total, g.order)
    if r:
        raise ArithmeticError(f"orbit count {total}/{g.order} is not an integer")
    return q


def alpha_series(g: GroupTable, n: int) -> List[int]:
    return [alpha_coefficient(g, k) for k in range(n + 1)]


class FingerprintCache:
    """Cross-group B_H cache keyed by a cheap isomorphism fingerprint.

    Writes and counters go through a lock; reads are lock-free.  Entries are
    insert-if-absent, so the first value stored for a fingerprint is kept.
    """

    def __init__(self):
        self._entries: Dict[Tuple, RationalGF] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.verified = 0
        self.collisions = 0

    def get(self, key: Tuple) -> Optional[RationalGF]:
        value = self._entries.get(key)
        if value is not None:
            with self._lock:
                self.hits += 1
        return value

    def insert(self, key: Tuple, value: RationalGF) -> RationalGF:
        with self._lock:
            return self._entries.setdefault(key, value)

    def verify(self, key: Tuple, value: RationalGF) -> bool:
        """Store value if the fingerprint is new, else compare it with the stored one"""
        with self._lock:
            stored = self._entries.setdefault(key, value)
            if stored is value:
                return True
            if stored == value:
                self.verified += 1
                return True
            self.collisions += 1
            return False

    def __len__(self):
        return len(self._entries)

    def clear(self):
        with self._lock:
            self._entries.clear()
            self.hits = self.verified = self.collisions = 0


shared_fingerprint_cache = FingerprintCache()


class BRecursion:
    """One evaluation of B over a group and the centralizer tree below it.

    Args:
        policy: What a cross-group fingerprint entry is used for.
            "always" answers from the cache; "abelian_only" answers abelian
            centralizers from their order and recomputes the rest, checking
            the result against the cache; "never" skips the cache.
        recursion_limit: Deepest centralizer chain accepted
        cache: Cross-group cache shared between evaluations

    work counts table entries read: the center test of every table visited,
    class data, one row and column per centralizer and each induced table.
    """

    def __init__(
        self,
        policy: Optional[str] = None,
        recursion_limit: Optional[int] = None,
        cache: Optional[FingerprintCache] = None,
    ):
        settings = get_settings()
        self.policy = policy or settings.fingerprint_policy
        self.recursion_limit = recursion_limit or settings.recursion_limit
        self.cache = cache if cache is not None else shared_fingerprint_cache
        self.calls = 0
        self.memo_hits = 0
        self.work = 0

    def evaluate(self, g: GroupTable, depth: int = 0) -> RationalGF:
        self.calls += 1
        if depth > self.recursion_limit:
            raise RecursionDepthExceeded(f"centralizer chain deeper than {self.recursion_limit} at {g.label}")
        n = g.order
        self.work += n * n
        if is_abelian(g):
            return RationalGF.geometric(n)

        z = center(g)
        data = conjugacy_data(g)
        self.work += data.table_lookups
        local: Dict[bytes, RationalGF] = {}
        total = RationalGF.constant(1)
        for x in data.representatives:
            if x in z:
                continue
            c = centralizer(g, x)
            self.work += 2 * n
            if c.order >= n:
                raise RecursionDepthExceeded(f"centralizer of non-central {x} in {g.label} is the whole group")
            sub = local.get(c.key)
            if sub is None:
                self.work += c.order * c.order
                sub = self._lookup(induced_table(c), depth + 1)
                local[c.key] = sub
            else:
                self.memo_hits += 1
            total = total + sub.times_t()
        return total * RationalGF.geometric(z.order)

    def _lookup(self, h: GroupTable, depth: int) -> RationalGF:
        if is_abelian(h):
            self.work += h.order * h.order
            return RationalGF.geometric(h.order)
        if self.policy == "never":
            return self.evaluate(h, depth)
        key = group_fingerprint(h)
        if self.policy == "always":
            hit = self.cache.get(key)
            if hit is not None:
                self.work += h.order * h.order
                return hit
            return self.cache.insert(key, self.evaluate(h, depth))
        value = self.evaluate(h, depth)
        if not self.cache.verify(key, value):
            logger.warning("fingerprint %s is shared by centralizers with different B", key)
        return value


def b_of_t(g: GroupTable, policy: Optional[str] = None, cache: Optional[FingerprintCache] = None) -> RationalGF:
    """B_G = 1/(1 - |Z|t) * (1 + sum over non-central classes of t B_{Z_G(x)})"""

    def compute():
        recursion = BRecursion(policy=policy, cache=cache)
        value = recursion.evaluate(g)
        logger.debug("B for %s: %d recursive calls, %d memo hits", g.label, recursion.calls, recursion.memo_hits)
        return value

    if policy is None and cache is None:
        return g.cached("b_of_t", compute)
    return compute()


def b_of_t_ac(g: GroupTable) -> RationalGF:
    """Shortcut for AC-groups: every proper centralizer is abelian"""
    if not is_ac_group(g):
        raise InvalidParameters(f"{g.label or 'group'} is not an AC-group")
    z = center(g)
    total = RationalGF.constant(1)
    for x in conjugacy_data(g).representatives:
        if x not in z:
            total = total + RationalGF.geometric(centralizer(g, x).order).times_t()
    return total * RationalGF.geometric(z.order)


def beta_coefficient(g: GroupTable, n: int) -> int:
    if n < 0:
        raise InvalidParameters(f"n must be nonnegative, got {n}")
    return b_of_t(g).integer_coefficients(n)[n]


def beta_series(g: GroupTable, n: int) -> List[int]:
    return b_of_t(g).integer_coefficients(n)


def normalize(f: RationalGF, order: int) -> RationalGF:
    """f(t / order)"""
    return f.normalize(order)


def partial_fractions(f: RationalGF) -> PartialFractions:
    return f.partial_fractions()


def gf_equal(f: RationalGF, g: RationalGF) -> bool:
    return f == g


def a_equivalent(g: GroupTable, h: GroupTable) -> bool:
    return a_of_t(g) == a_of_t(h)


def b_equivalent(g: GroupTable, h: GroupTable) -> bool:
    return b_of_t(g) == b_of_t(h)


def recursion_work(g: GroupTable) -> int:
    """Number of recursive evaluations B_G needs with no cross-group cache"""
    recursion = BRecursion(policy="never", cache=FingerprintCache())
    recursion.evaluate(g)
    return recursion.calls


def b_of_t_with_work(g: GroupTable) -> Tuple[RationalGF, int]:
    """B_G and the table entries a cache-free recursion reads to get it"""
    recursion = BRecursion(policy="never", cache=FingerprintCache())
    value = recursion.evaluate(g)
    return value, recursion.work


GENERATING_FUNCTIONS: Dict[str, Callable[[GroupTable], RationalGF]] = {"A": a_of_t, "B": b_of_t}
