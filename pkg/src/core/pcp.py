"""Power-commutator presentations and collection from the left."""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple
import logging
import math

import numpy as np

from .config import get_settings
from .errors import ClosureExceedsCap, InconsistentPresentation
from .group_table import GroupTable, _table_from_right_actions, certify, inverse_array

logger = logging.getLogger(__name__)

ExponentVector = Tuple[int, ...]


@dataclass(frozen=True)
class PcPresentation:
    """Generators g_0..g_{d-1} with g_i^{r_i} = power_words[i] and [g_j, g_i] = commutator_words[j, i].

    Words are normal-form exponent vectors.  Missing entries mean the
    trivial word.  Commutators use [x, y] = x^-1 y^-1 x y.
    """

    relative_orders: Tuple[int, ...]
    power_words: Dict[int, ExponentVector] = field(default_factory=dict)
    commutator_words: Dict[Tuple[int, int], ExponentVector] = field(default_factory=dict)
    prime: Optional[int] = None
    label: str = ""

    @property
    def num_generators(self) -> int:
        return len(self.relative_orders)

    @property
    def order(self) -> int:
        return math.prod(self.relative_orders)


def _validate(pcp: PcPresentation):
    d = pcp.num_generators
    for r in pcp.relative_orders:
        if r < 2:
            raise InconsistentPresentation(f"relative order {r} must be at least 2")
    for i, w in pcp.power_words.items():
        if not 0 <= i < d:
            raise InconsistentPresentation(f"power word for g{i} names no generator")
        _check_word(pcp, w, lead=i, what=f"power word of g{i}")
    for (j, i), w in pcp.commutator_words.items():
        if not 0 <= i < j < d:
            raise InconsistentPresentation(f"commutator [g{j}, g{i}] needs j > i")
        _check_word(pcp, w, lead=j, what=f"commutator [g{j}, g{i}]")


def _check_word(pcp: PcPresentation, word: Sequence[int], lead: int, what: str):
    if len(word) != pcp.num_generators:
        raise InconsistentPresentation(f"{what} has length {len(word)}, expected {pcp.num_generators}")
    for k, e in enumerate(word):
        if not 0 <= e < pcp.relative_orders[k]:
            raise InconsistentPresentation(f"{what}: exponent {e} of g{k} out of range")
        if e and k <= lead:
            raise InconsistentPresentation(f"{what} must only involve generators after g{lead}")


class Collector:
    """Multiplies normal forms by collection from the left.

    Only nonnegative letters are ever pushed, so every word in the
    presentation must already be a normal form.
    """

    def __init__(self, pcp: PcPresentation, rewrite_budget: Optional[int] = None):
        _validate(pcp)
        self.pcp = pcp
        self.budget = rewrite_budget or get_settings().rewrite_budget
        d = pcp.num_generators
        self._powers = [self._letters(pcp.power_words.get(i)) for i in range(d)]
        self._commutators = {
            (j, i): self._letters(pcp.commutator_words.get((j, i))) for j in range(d) for i in range(j)
        }

    @staticmethod
    def _letters(word: Optional[Sequence[int]]) -> List[int]:
        if not word:
            return []
        return [k for k, e in enumerate(word) for _ in range(e)]

    def collect(self, exponents: Sequence[int], letters: Sequence[int]) -> List[int]:
        """Normal form of (normal form `exponents`) * letters"""
        exps = list(exponents)
        orders = self.pcp.relative_orders
        stack = list(reversed(letters))
        steps = 0
        while stack:
            steps += 1
            if steps > self.budget:
                raise InconsistentPresentation(
                    f"collection exceeded the rewrite budget of {self.budget} steps"
                )
            i = stack.pop()
            tail = exps[i + 1:]
            for k in range(i + 1, len(exps)):
                exps[k] = 0
            pending: List[int] = []
            exps[i] += 1
            if exps[i] == orders[i]:
                exps[i] = 0
                pending.extend(self._powers[i])
            # tail * g_i = g_i * prod (g_j [g_j, g_i])^{t_j}
            for offset, count in enumerate(tail):
                j = i + 1 + offset
                conjugate = [j] + self._commutators[(j, i)]
                for _ in range(count):
                    pending.extend(conjugate)
            stack.extend(reversed(pending))
        return exps

    def multiply(self, u: Sequence[int], v: Sequence[int]) -> List[int]:
        return self.collect(u, self._letters(v))


def exponent_vectors(relative_orders: Sequence[int]) -> np.ndarray:
    """All exponent vectors in lexicographic order, one row per element"""
    if not relative_orders:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices(tuple(relative_orders)).reshape(len(relative_orders), -1)
    return grids.T


def build_from_pcp(
    pcp: PcPresentation, order_cap: Optional[int] = None, rewrite_budget: Optional[int] = None
) -> GroupTable:
    """Compile a pc presentation into a certified GroupTable.

    Elements are the normal forms indexed lexicographically by exponent
    vector.  Right multiplication by each generator comes from the collector;
    the rest of the table follows column by column.
    """
    cap = order_cap or get_settings().order_cap
    n = pcp.order
    if n > cap:
        raise ClosureExceedsCap(cap)
    collector = Collector(pcp, rewrite_budget)
    d = pcp.num_generators
    strides = np.array([math.prod(pcp.relative_orders[k + 1:]) for k in range(d)], dtype=np.int64)
    vectors = exponent_vectors(pcp.relative_orders)

    right = np.empty((max(d, 1), n), dtype=np.int64)
    for x, vec in enumerate(vectors):
        for s in range(d):
            right[s, x] = int(np.dot(collector.collect(vec, [s]), strides))

    pred = np.zeros(n, dtype=np.int64)
    via = np.zeros(n, dtype=np.int64)
    for y in range(1, n):
        last = int(np.flatnonzero(vectors[y])[-1])
        pred[y] = y - strides[last]
        via[y] = last

    mul = _table_from_right_actions(right, pred, via) if d else np.zeros((1, 1), dtype=np.int16)
    generators = tuple(int(strides[s]) for s in range(d))
    g = GroupTable(mul=mul, inv=inverse_array(mul), generators=generators, label=pcp.label)
    report = certify(g)
    if not report.passed:
        failed = report.failures()[0]
        raise InconsistentPresentation(
            f"{pcp.label or 'presentation'}: {failed.name} fails at {failed.witness}"
        )
    logger.debug("compiled pc presentation %s: order %d", pcp.label, n)
    return g


def normal_word(d: int, exponents: Dict[int, int]) -> ExponentVector:
    """Exponent vector of length d with the given nonzero entries"""
    word = [0] * d
    for k, e in exponents.items():
        word[k] = e
    return tuple(word)
