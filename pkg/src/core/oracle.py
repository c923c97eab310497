"""Brute-force orbit counts under simultaneous conjugation.

Tuples are encoded as base-|G| integers, first coordinate most significant.
Orbits are the connected components of the graph whose edges are the moves
x -> s^-1 x s for the generators s; components are found by vectorized
min-label propagation with pointer jumping.
"""
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Tuple
import logging

import numpy as np

from .config import get_settings
from .errors import InvalidParameters, TupleCapExceeded
from .group_table import GroupTable

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OrbitCount:
    group: str
    n: int
    mode: str
    count: int
    tuples_visited: int
    work: int

    def to_record(self) -> Dict:
        return asdict(self)

    def to_line(self) -> str:
        return f"{self.group},{self.mode},{self.n},{self.count},{self.work}"


def conjugation_arrays(g: GroupTable) -> List[np.ndarray]:
    """c_s[x] = s^-1 x s for each generator s"""
    return [np.asarray(g.mul[g.mul[g.inv[s], :], s], dtype=np.int64) for s in g.generators]


def _check_size(g: GroupTable, n: int, cap: Optional[int]) -> int:
    if n < 0:
        raise InvalidParameters(f"n must be nonnegative, got {n}")
    cap = cap or get_settings().tuple_cap
    size = g.order ** n
    if size > cap:
        raise TupleCapExceeded(size, cap)
    return size


def _digits(codes: np.ndarray, order: int, n: int) -> np.ndarray:
    """coordinates of each code, shape (n, len(codes))"""
    powers = order ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (codes[None, :] // powers[:, None]) % order


def _encode(coords: np.ndarray, order: int) -> np.ndarray:
    n = coords.shape[0]
    powers = order ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (coords * powers[:, None]).sum(axis=0)


def count_components(size: int, moves: List[np.ndarray]) -> Tuple[int, int]:
    """Number of components of the graph on range(size) with edges i -> move[i]; also the edges processed"""
    label = np.arange(size, dtype=np.int64)
    edges = 0
    while True:
        before = label.copy()
        for move in moves:
            np.minimum.at(label, move, label)
            label = np.minimum(label, label[move])
            edges += 2 * size
        while True:
            jumped = label[label]
            if np.array_equal(jumped, label):
                break
            label = jumped
        if np.array_equal(before, label):
            break
    return int(np.count_nonzero(label == np.arange(size))), edges


def alpha_brute(g: GroupTable, n: int, cap: Optional[int] = None) -> OrbitCount:
    """Orbits of G on G^n"""
    size = _check_size(g, n, cap)
    if n == 0:
        return OrbitCount(g.label, 0, "all_tuples", 1, 1, 1)
    codes = np.arange(size, dtype=np.int64)
    coords = _digits(codes, g.order, n)
    moves = [_encode(c[coords], g.order) for c in conjugation_arrays(g)]
    count, edges = count_components(size, moves)
    logger.debug("alpha_brute %s n=%d: %d orbits, %d edges", g.label, n, count, edges)
    return OrbitCount(g.label, n, "all_tuples", count, size, size + edges)


def commuting_tuples(g: GroupTable, n: int, cap: Optional[int] = None) -> np.ndarray:
    """Sorted codes of pairwise commuting n-tuples, each coordinate drawn from the centralizer of the prefix"""
    _check_size(g, n, cap)
    if n == 0:
        return np.zeros(1, dtype=np.int64)
    commute = g.mul == g.mul.T
    codes = np.arange(g.order, dtype=np.int64)
    allowed = commute.copy()
    for _ in range(n - 1):
        rows, xs = np.nonzero(allowed)
        codes = codes[rows] * g.order + xs
        allowed = allowed[rows] & commute[xs]
    return codes


def commuting_tuples_filtered(g: GroupTable, n: int, cap: Optional[int] = None) -> np.ndarray:
    """Same set as commuting_tuples, by filtering all of G^n"""
    size = _check_size(g, n, cap)
    codes = np.arange(size, dtype=np.int64)
    if n <= 1:
        return codes
    commute = g.mul == g.mul.T
    coords = _digits(codes, g.order, n)
    keep = np.ones(size, dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            keep &= commute[coords[i], coords[j]]
    return codes[keep]


def beta_brute(g: GroupTable, n: int, cap: Optional[int] = None) -> OrbitCount:
    """Orbits of G on pairwise commuting n-tuples"""
    codes = commuting_tuples(g, n, cap)
    if n == 0:
        return OrbitCount(g.label, 0, "commuting_tuples", 1, 1, 1)
    coords = _digits(codes, g.order, n)
    moves = [np.searchsorted(codes, _encode(c[coords], g.order)) for c in conjugation_arrays(g)]
    count, edges = count_components(codes.size, moves)
    logger.debug("beta_brute %s n=%d: %d orbits over %d tuples", g.label, n, count, codes.size)
    return OrbitCount(g.label, n, "commuting_tuples", count, int(codes.size), int(codes.size) + edges)


ORACLES = {"alpha": alpha_brute, "beta": beta_brute}
