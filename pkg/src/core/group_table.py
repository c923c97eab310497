"""Element-indexed multiplication tables for small finite groups.

Every construction route (permutation closure, Cayley table, pc presentation)
ends in a GroupTable whose identity sits at index 0.  Tables are numpy arrays
and are frozen once built, so they can be shared between worker threads.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple
import logging
import threading

import numpy as np

from .config import get_settings
from .errors import ClosureExceedsCap, InvalidPermutation, NotAGroup

logger = logging.getLogger(__name__)


def index_dtype(order: int):
    """Smallest signed integer dtype able to hold element indices of a group"""
    return np.int16 if order <= np.iinfo(np.int16).max else np.int32


@dataclass(eq=False)
class GroupTable:
    mul: np.ndarray
    inv: np.ndarray
    generators: Tuple[int, ...]
    label: str = ""
    _cache: Dict[str, Any] = field(default_factory=dict, repr=False)
    _lock: Any = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        self.mul.setflags(write=False)
        self.inv.setflags(write=False)
        self.generators = tuple(int(s) for s in self.generators)

    @property
    def order(self) -> int:
        return int(self.mul.shape[0])

    @property
    def identity(self) -> int:
        return 0

    @property
    def elements(self) -> np.ndarray:
        return np.arange(self.order)

    def uncached(self) -> "GroupTable":
        """Same table with an empty memo"""
        return GroupTable(mul=self.mul, inv=self.inv, generators=self.generators, label=self.label)

    def cached(self, key: str, compute):
        """Write-once per-group memo; the first stored value wins"""
        if key in self._cache:
            return self._cache[key]
        value = compute()
        with self._lock:
            return self._cache.setdefault(key, value)

    def product(self, *xs: int) -> int:
        acc = 0
        for x in xs:
            acc = int(self.mul[acc, x])
        return acc

    def commutator(self, x: int, y: int) -> int:
        """[x, y] = x^-1 y^-1 x y"""
        return int(self.mul[self.mul[self.inv[x], self.inv[y]], self.mul[x, y]])

    def power(self, x: int, k: int) -> int:
        acc = 0
        base = int(x) if k >= 0 else int(self.inv[x])
        for _ in range(abs(k)):
            acc = int(self.mul[acc, base])
        return acc

    def __repr__(self):
        return f"GroupTable(label={self.label!r}, order={self.order}, generators={self.generators})"


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: GroupTable
    elements: np.ndarray

    @classmethod
    def from_mask(cls, parent: GroupTable, mask: np.ndarray) -> "Subgroup":
        return cls(parent, np.flatnonzero(mask))

    @classmethod
    def whole(cls, parent: GroupTable) -> "Subgroup":
        return cls(parent, parent.elements)

    @classmethod
    def trivial(cls, parent: GroupTable) -> "Subgroup":
        return cls(parent, np.zeros(1, dtype=np.int64))

    @property
    def order(self) -> int:
        return int(self.elements.size)

    @property
    def key(self) -> bytes:
        return np.asarray(self.elements, dtype=np.int64).tobytes()

    @property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[self.elements] = True
        return m

    def __contains__(self, x) -> bool:
        i = np.searchsorted(self.elements, x)
        return bool(i < self.elements.size and self.elements[i] == x)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subgroup)
            and other.parent is self.parent
            and np.array_equal(other.elements, self.elements)
        )

    def __hash__(self):
        return hash((id(self.parent), self.key))

    def issubset(self, other: "Subgroup") -> bool:
        return bool(other.mask[self.elements].all())

    def is_abelian(self) -> bool:
        block = self.parent.mul[np.ix_(self.elements, self.elements)]
        return bool((block == block.T).all())

    def __repr__(self):
        return f"Subgroup(order={self.order}, of={self.parent.label!r})"


def closure(g: GroupTable, seeds: Iterable[int], start: Optional[Subgroup] = None) -> Subgroup:
    """Subgroup generated by seeds (together with start, when given)."""
    seeds = np.unique(np.asarray(list(seeds), dtype=np.int64))
    member = start.mask if start is not None else np.zeros(g.order, dtype=bool)
    member[0] = True
    if start is not None and seeds.size:
        # closing a subgroup plus new seeds needs the old generators too
        seeds = np.union1d(seeds, start.elements)
    frontier = np.flatnonzero(member)
    while frontier.size and seeds.size:
        images = np.unique(g.mul[np.ix_(frontier, seeds)])
        fresh = images[~member[images]]
        member[fresh] = True
        frontier = fresh
    return Subgroup.from_mask(g, member)


def generating_set(g: GroupTable, elements: Optional[Sequence[int]] = None) -> Tuple[int, ...]:
    """Greedy irredundant generating sequence, smallest missing index first"""
    target = np.asarray(elements if elements is not None else g.elements, dtype=np.int64)
    chosen: List[int] = []
    span = Subgroup.trivial(g)
    while span.order < target.size:
        missing = target[~span.mask[target]]
        x = int(missing[0])
        chosen.append(x)
        span = closure(g, [x], start=span)
    return tuple(chosen)


def element_orders(g: GroupTable) -> np.ndarray:
    def compute():
        orders = np.zeros(g.order, dtype=np.int64)
        current = g.elements.copy()
        k = 1
        while (orders == 0).any():
            hit = (current == 0) & (orders == 0)
            orders[hit] = k
            current = g.mul[current, g.elements]
            k += 1
        return orders

    return g.cached("element_orders", compute)


def induced_table(sub: Subgroup, label: str = "") -> GroupTable:
    """The subgroup as an abstract group, re-indexed by parent index order"""
    parent = sub.parent
    els = np.asarray(sub.elements, dtype=np.int64)
    position = np.full(parent.order, -1, dtype=np.int64)
    position[els] = np.arange(els.size)
    dtype = index_dtype(els.size)
    mul = position[parent.mul[np.ix_(els, els)]].astype(dtype)
    inv = position[parent.inv[els]].astype(dtype)
    h = GroupTable(mul=mul, inv=inv, generators=(), label=label or f"{parent.label}<{els.size}>")
    h.generators = generating_set(h)
    return h


def direct_product(g: GroupTable, h: GroupTable, label: str = "", order_cap: Optional[int] = None) -> GroupTable:
    """G x H with (a, b) stored at a * |H| + b"""
    cap = order_cap or get_settings().order_cap
    n = g.order * h.order
    if n > cap:
        raise ClosureExceedsCap(cap)
    nh = h.order
    g_mul = g.mul.astype(np.int64)
    mul = (g_mul[:, None, :, None] * nh + h.mul[None, :, None, :]).reshape(n, n).astype(index_dtype(n))
    inv = (g.inv.astype(np.int64)[:, None] * nh + h.inv[None, :]).reshape(n).astype(index_dtype(n))
    generators = [a * nh for a in g.generators] + list(h.generators)
    label = label or f"{g.label} x {h.label}"
    logger.debug("direct product %s: order %d", label, n)
    return GroupTable(mul=mul, inv=inv, generators=tuple(generators), label=label)


def _table_from_right_actions(right: np.ndarray, pred: np.ndarray, via: np.ndarray) -> np.ndarray:
    """Fill the full table column by column from right-multiplication by generators.

    right[s, x] is the index of x*s; every y > 0 equals pred[y]*generator via[y],
    with pred[y] filled before y.
    """
    order = right.shape[1]
    mul = np.empty((order, order), dtype=index_dtype(order))
    mul[:, 0] = np.arange(order)
    for y in range(1, order):
        mul[:, y] = right[via[y], mul[:, pred[y]]]
    return mul


def inverse_array(mul: np.ndarray) -> np.ndarray:
    return np.argmax(mul == 0, axis=1).astype(mul.dtype)


def _is_int(v: Any) -> bool:
    return isinstance(v, (int, np.integer)) and not isinstance(v, (bool, np.bool_))


def perm_from_cycles(cycles: Sequence[Sequence[int]], degree: int) -> List[int]:
    """Image list of a permutation written in cycle notation"""
    if not _is_int(degree) or degree < 1:
        raise InvalidPermutation(-1, cycles, f"needs a positive degree, got {degree!r}")
    if not isinstance(cycles, (list, tuple)):
        raise InvalidPermutation(-1, cycles, "needs a list of cycles")
    images = list(range(degree))
    seen = set()
    for cycle in cycles:
        if not isinstance(cycle, (list, tuple)) or not cycle:
            raise InvalidPermutation(-1, cycles, "has a malformed cycle")
        for a in cycle:
            if not _is_int(a) or not 0 <= a < degree or a in seen:
                raise InvalidPermutation(-1, cycles, f"moves {a!r} twice or outside range({degree})")
            seen.add(a)
        for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
            images[a] = b
    return images


def build_from_permutations(
    gens: Sequence[Sequence[int]], label: str = "", order_cap: Optional[int] = None
) -> GroupTable:
    """Close permutation generators into a GroupTable.

    Elements are numbered in breadth-first discovery order starting from the
    identity.  The product x*y applies x first, then y.

    Args:
        gens: Image lists of permutations on {0..k-1}, all of the same degree
        label: Free-form group name
        order_cap: Largest closure accepted; defaults to Settings.order_cap
    """
    cap = order_cap or get_settings().order_cap
    if not isinstance(gens, (list, tuple)) or not gens:
        raise InvalidPermutation(-1, [], "list needs at least one generator")
    arrays = []
    for i, images in enumerate(gens):
        if not isinstance(images, (list, tuple, np.ndarray)):
            raise InvalidPermutation(i, images, "is not an image list")
        if not all(_is_int(v) for v in images):
            raise InvalidPermutation(i, images, "has non-integer images")
        arr = np.asarray(images, dtype=np.int64)
        degree = arrays[0].size if arrays else arr.size
        if arr.ndim != 1 or arr.size != degree or not np.array_equal(np.sort(arr), np.arange(degree)):
            raise InvalidPermutation(i, images)
        arrays.append(arr)

    identity = np.arange(degree)
    index: Dict[bytes, int] = {identity.tobytes(): 0}
    perms = [identity]
    pred = [0]
    via = [0]
    right_rows: List[List[int]] = [[] for _ in arrays]
    head = 0
    while head < len(perms):
        x = perms[head]
        for s, gen in enumerate(arrays):
            y = gen[x]
            key = y.tobytes()
            j = index.get(key)
            if j is None:
                j = len(perms)
                if j >= cap:
                    raise ClosureExceedsCap(cap)
                index[key] = j
                perms.append(y)
                pred.append(head)
                via.append(s)
            right_rows[s].append(j)
        head += 1

    right = np.asarray(right_rows, dtype=np.int64)
    mul = _table_from_right_actions(right, np.asarray(pred), np.asarray(via))
    generators = []
    for gen in arrays:
        j = index[gen.tobytes()]
        if j and j not in generators:
            generators.append(j)
    logger.debug("permutation closure %s: order %d from %d generators", label, len(perms), len(arrays))
    return GroupTable(mul=mul, inv=inverse_array(mul), generators=tuple(generators), label=label)


def build_from_cayley(table, label: str = "", exhaustive_max: Optional[int] = None) -> GroupTable:
    """Validate an explicit Cayley table and relabel it so the identity is index 0"""
    if not isinstance(table, np.ndarray):
        if not isinstance(table, (list, tuple)) or not all(isinstance(row, (list, tuple, np.ndarray)) for row in table):
            raise NotAGroup("square table")
        if any(len(row) != len(table) for row in table):
            raise NotAGroup("square table")
        if not all(_is_int(v) for row in table for v in row):
            raise NotAGroup("integer entries")
    mul = np.asarray(table)
    if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
        raise NotAGroup("square table")
    n = mul.shape[0]
    if not np.issubdtype(mul.dtype, np.integer):
        raise NotAGroup("integer entries")
    bad = np.argwhere((mul < 0) | (mul >= n))
    if bad.size:
        raise NotAGroup("closure", tuple(int(v) for v in bad[0]))

    everything = np.arange(n)
    candidates = [e for e in range(n) if np.array_equal(mul[e], everything) and np.array_equal(mul[:, e], everything)]
    if not candidates:
        raise NotAGroup("identity")
    e = candidates[0]
    if e != 0:
        swap = everything.copy()
        swap[[0, e]] = [e, 0]
        mul = swap[mul[np.ix_(swap, swap)]]
    mul = mul.astype(index_dtype(n))

    for x in range(n):
        row_hits = np.flatnonzero(mul[x] == 0)
        if row_hits.size != 1 or mul[row_hits[0], x] != 0:
            raise NotAGroup("inverse", (x,))

    h = GroupTable(mul=mul, inv=inverse_array(mul), generators=(), label=label)
    # closure() multiplies on the right only, so it is safe on an unverified table
    h.generators = generating_set(h)
    report = certify(h, exhaustive_max=exhaustive_max)
    for check in report.checks:
        if not check.passed:
            raise NotAGroup(check.name, check.witness)
    return h


@dataclass
class CertificateCheck:
    name: str
    passed: bool
    detail: str = ""
    witness: Optional[Tuple[int, ...]] = None
    skipped: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "skipped": self.skipped,
            "detail": self.detail,
            "witness": list(self.witness) if self.witness is not None else None,
        }


@dataclass
class CertificateReport:
    label: str
    order: int
    checks: List[CertificateCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[CertificateCheck]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "order": self.order,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }


def _first(mask: np.ndarray) -> Optional[Tuple[int, ...]]:
    hits = np.argwhere(mask)
    return tuple(int(v) for v in hits[0]) if hits.size else None


def certify(g: GroupTable, exhaustive_max: Optional[int] = None) -> CertificateReport:
    """Check the group axioms on a table; failures are reported, never raised"""
    limit = exhaustive_max or get_settings().exhaustive_associativity_max
    n = g.order
    mul = g.mul
    everything = np.arange(n)
    checks: List[CertificateCheck] = []

    witness = _first((mul[0] != everything) | (mul[:, 0] != everything))
    checks.append(CertificateCheck("identity", witness is None, "index 0 is a two-sided identity", witness))

    inv = np.asarray(g.inv, dtype=np.int64)
    witness = _first((mul[everything, inv] != 0) | (mul[inv, everything] != 0))
    checks.append(CertificateCheck("inverse", witness is None, "x * inv[x] = inv[x] * x = 0", witness))

    sorted_rows = np.sort(mul, axis=1)
    sorted_cols = np.sort(mul, axis=0)
    witness = _first((sorted_rows != everything).any(axis=1))
    if witness is None:
        witness = _first((sorted_cols != everything[:, None]).any(axis=0))
    checks.append(CertificateCheck("cancellation", witness is None, "rows and columns are permutations", witness))

    span = closure(g, g.generators).order if n > 1 else 1
    checks.append(
        CertificateCheck("generation", span == n, f"generators span {span} of {n} elements")
    )

    if n <= limit:
        witness = None
        for x in range(n):
            lhs = mul[mul[x], :]
            rhs = mul[x][mul]
            bad = _first(lhs != rhs)
            if bad is not None:
                witness = (x, bad[0], bad[1])
                break
        checks.append(CertificateCheck("associativity", witness is None, "exhaustive over all triples", witness))
    else:
        checks.append(
            CertificateCheck(
                "associativity", True, f"full check skipped: order > {limit}", skipped=True
            )
        )
        witness = None
        for s in g.generators:
            lhs = mul[mul, s]
            rhs = mul[:, mul[:, s]]
            bad = _first(lhs != rhs)
            if bad is not None:
                witness = (bad[0], bad[1], int(s))
                break
        checks.append(
            CertificateCheck(
                "generator_associativity", witness is None, "(xy)s = x(ys) for every generator s", witness
            )
        )

    report = CertificateReport(label=g.label, order=n, checks=checks)
    if report.passed:
        logger.debug("certified %s (order %d)", g.label, n)
    else:
        logger.info("certificate for %s failed: %s", g.label, [c.name for c in report.failures()])
    return report
