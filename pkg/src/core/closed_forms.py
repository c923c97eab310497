"""Closed forms for A_G(t) and B_G(t), written as data.

Each formula is a template over a base x (the prime p, or n for dihedral
groups) and an exponent m:

    scale * prod 1/(1 - X_k t) * sum_terms coeff * t^a * prod (1 - Y t) / prod (1 - W t)

where every X, Y, W and coeff summand is a Power: c * x^(a*m + b).
Templates are evaluated to exact RationalGF values and compared against
the general algorithms in the test-suite.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple
import logging

from . import analysis
from .errors import InvalidParameters
from .group_table import GroupTable
from .rational_gf import Polynomial, RationalGF

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Power:
    """c * x^(a*m + b)"""

    a: int
    b: int
    c: Fraction = Fraction(1)

    def value(self, x: int, m: int) -> Fraction:
        return Fraction(self.c) * Fraction(x) ** (self.a * m + self.b)


def M(b: int, c=1) -> Power:
    """c * x^(m + b)"""
    return Power(1, b, Fraction(c))


def K(b: int, c=1) -> Power:
    """c * x^b, independent of m"""
    return Power(0, b, Fraction(c))


@dataclass(frozen=True)
class Term:
    coeff: Tuple[Power, ...]
    t_power: int = 0
    numer: Tuple[Power, ...] = ()
    denom: Tuple[Power, ...] = ()

    def evaluate(self, x: int, m: int) -> RationalGF:
        c = sum((p.value(x, m) for p in self.coeff), Fraction(0))
        num = Polynomial.constant(c).shift(self.t_power)
        for y in self.numer:
            num = num * Polynomial.linear_factor(y.value(x, m))
        poles: Dict[Fraction, int] = {}
        for w in self.denom:
            q = w.value(x, m)
            poles[q] = poles.get(q, 0) + 1
        return RationalGF(num, poles)


def term(*coeff: Power, t: int = 0, numer: Sequence[Power] = (), denom: Sequence[Power] = ()) -> Term:
    return Term(tuple(coeff), t, tuple(numer), tuple(denom))


ONE = term(K(0))


@dataclass(frozen=True)
class Formula:
    name: str
    terms: Tuple[Term, ...]
    scale: Power = K(0)
    denominators: Tuple[Power, ...] = ()

    def evaluate(self, x: int, m: int = 0) -> RationalGF:
        total = RationalGF.constant(0)
        for t in self.terms:
            total = total + t.evaluate(x, m)
        for w in self.denominators:
            total = total * RationalGF.geometric(w.value(x, m))
        return total * self.scale.value(x, m)


@dataclass(frozen=True)
class FormulaId:
    name: str
    p: int
    m: int
    case: str = ""

    def __str__(self):
        suffix = f", {self.case}" if self.case else ""
        return f"{self.name}(p={self.p}, m={self.m}{suffix})"


# |G/Z(G)| = p^2
CENTRAL_QUOTIENT_P2_A = Formula(
    "central_quotient_p2",
    (term(M(-2), denom=[M(0)]), term(M(0), M(-2, -1), denom=[M(-1)])),
    scale=Power(-1, 0),
)
CENTRAL_QUOTIENT_P2_B = Formula(
    "central_quotient_p2",
    (term(K(0), numer=[M(-3)], denom=[M(-2), M(-1)]),),
)

# |G/Z(G)| = p^3
CENTRAL_QUOTIENT_P3_NO_ABELIAN_MAX_A = Formula(
    "central_quotient_p3_no_abelian_max",
    (term(M(-3), denom=[M(0)]), term(M(0), M(-3, -1), denom=[M(-2)])),
    scale=Power(-1, 0),
)
CENTRAL_QUOTIENT_P3_NO_ABELIAN_MAX_B = Formula(
    "central_quotient_p3_no_abelian_max",
    (term(K(0), numer=[M(-5)], denom=[M(-2), M(-3)]),),
)
CENTRAL_QUOTIENT_P3_ABELIAN_MAX_A = Formula(
    "central_quotient_p3_abelian_max",
    (
        term(M(-3), denom=[M(0)]),
        term(M(-1), M(-3, -1), denom=[M(-1)]),
        term(M(0), M(-1, -1), denom=[M(-2)]),
    ),
    scale=Power(-1, 0),
)
CENTRAL_QUOTIENT_P3_ABELIAN_MAX_B = Formula(
    "central_quotient_p3_abelian_max",
    (
        ONE,
        term(M(-2), M(-4, -1), t=1, denom=[M(-1)]),
        term(M(-2), M(-3, -1), t=1, denom=[M(-2)]),
    ),
    denominators=(M(-3),),
)

# maximal class, positive degree of commutativity
MAXIMAL_CLASS_ABELIAN_MAX_A = Formula(
    "maximal_class_abelian_max",
    (
        term(K(1), denom=[M(0)]),
        term(M(0), M(-1, -1), denom=[K(2)]),
        term(M(-1), K(1, -1), denom=[M(-1)]),
    ),
    scale=Power(-1, 0),
)
MAXIMAL_CLASS_ABELIAN_MAX_B = Formula(
    "maximal_class_abelian_max",
    (
        ONE,
        term(M(-2), K(0, -1), t=1, denom=[M(-1)]),
        term(K(2), K(1, -1), t=1, denom=[K(2)]),
    ),
    denominators=(K(1),),
)
MAXIMAL_CLASS_P1P3_A = Formula(
    "maximal_class_P1P3",
    (
        term(K(1), denom=[M(0)]),
        term(M(0), M(-1, -1), denom=[K(2)]),
        term(M(-1), M(-3, -1), denom=[M(-2)]),
        term(M(-3), K(1, -1), denom=[M(-1)]),
    ),
    scale=Power(-1, 0),
)
MAXIMAL_CLASS_P1P3_B = Formula(
    "maximal_class_P1P3",
    (
        ONE,
        term(M(-4), K(0, -1), t=1, numer=[M(-4)], denom=[M(-2), M(-3)]),
        term(M(-3), M(-5, -1), t=1, denom=[M(-2)]),
        term(K(2), K(1, -1), t=1, denom=[K(2)]),
    ),
    denominators=(K(1),),
)

# extraspecial groups of order p^5 (m fixed at 5)
EXTRASPECIAL_P5_A = Formula(
    "extraspecial_p5",
    (term(K(1), denom=[K(5)]), term(K(5), K(1, -1), denom=[K(4)])),
    scale=K(-5),
)
EXTRASPECIAL_P5_B = Formula(
    "extraspecial_p5",
    (ONE, term(K(4), K(0, -1), t=1, numer=[K(1)], denom=[K(2), K(3)])),
    denominators=(K(1),),
)

# dihedral group of order 2n, x = n
DIHEDRAL_A = Formula(
    "dihedral_even",
    (term(K(0, 2), denom=[K(1, 2)]), term(K(1), denom=[K(0, 4)]), term(K(1), K(0, -2), denom=[K(1)])),
    scale=K(-1, Fraction(1, 2)),
)
DIHEDRAL_B = Formula(
    "dihedral_even",
    (
        ONE,
        term(K(1, Fraction(1, 2)), K(0, -1), t=1, denom=[K(1)]),
        term(K(0, 2), t=1, denom=[K(0, 4)]),
    ),
    denominators=(K(0, 2),),
)


def _require_prime(p: int):
    if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
        raise InvalidParameters(f"{p} is not a prime")


def _require(condition: bool, message: str):
    if not condition:
        raise InvalidParameters(message)


def a_central_quotient_p2(p: int, m: int) -> RationalGF:
    _require_prime(p)
    _require(m >= 3, f"|G/Z(G)| = p^2 needs m >= 3, got {m}")
    return CENTRAL_QUOTIENT_P2_A.evaluate(p, m)


def b_central_quotient_p2(p: int, m: int) -> RationalGF:
    _require_prime(p)
    _require(m >= 3, f"|G/Z(G)| = p^2 needs m >= 3, got {m}")
    return CENTRAL_QUOTIENT_P2_B.evaluate(p, m)


def _p3_formulas(p: int, m: int, has_abelian_max: bool) -> Tuple[Formula, Formula]:
    _require_prime(p)
    if has_abelian_max:
        _require(m >= 4, f"|G/Z(G)| = p^3 needs m >= 4, got {m}")
        return CENTRAL_QUOTIENT_P3_ABELIAN_MAX_A, CENTRAL_QUOTIENT_P3_ABELIAN_MAX_B
    _require(m >= 5, f"|G/Z(G)| = p^3 without an abelian maximal subgroup needs m >= 5, got {m}")
    return CENTRAL_QUOTIENT_P3_NO_ABELIAN_MAX_A, CENTRAL_QUOTIENT_P3_NO_ABELIAN_MAX_B


def a_central_quotient_p3(p: int, m: int, has_abelian_max: bool) -> RationalGF:
    return _p3_formulas(p, m, has_abelian_max)[0].evaluate(p, m)


def b_central_quotient_p3(p: int, m: int, has_abelian_max: bool) -> RationalGF:
    return _p3_formulas(p, m, has_abelian_max)[1].evaluate(p, m)


MAXIMAL_CLASS_CASES = ("abelian_max", "P1P3_no_abelian_max")


def _maximal_class_formulas(p: int, m: int, case: str) -> Tuple[Formula, Formula]:
    _require_prime(p)
    if case == "abelian_max":
        _require(m >= 4, f"maximal class needs m >= 4, got {m}")
        return MAXIMAL_CLASS_ABELIAN_MAX_A, MAXIMAL_CLASS_ABELIAN_MAX_B
    if case == "P1P3_no_abelian_max":
        _require(m >= 5, f"[P1, P3] = 1 without an abelian maximal subgroup needs m >= 5, got {m}")
        return MAXIMAL_CLASS_P1P3_A, MAXIMAL_CLASS_P1P3_B
    raise InvalidParameters(f"unknown maximal class case {case!r}; expected one of {MAXIMAL_CLASS_CASES}")


def a_maximal_class(p: int, m: int, case: str) -> RationalGF:
    return _maximal_class_formulas(p, m, case)[0].evaluate(p, m)


def b_maximal_class(p: int, m: int, case: str) -> RationalGF:
    return _maximal_class_formulas(p, m, case)[1].evaluate(p, m)


def a_maximal_class_2group(n: int) -> RationalGF:
    """Maximal class 2-group of order 2^n"""
    _require(n >= 4, f"maximal class 2-groups need n >= 4, got {n}")
    return MAXIMAL_CLASS_ABELIAN_MAX_A.evaluate(2, n)


def b_maximal_class_2group(n: int) -> RationalGF:
    _require(n >= 4, f"maximal class 2-groups need n >= 4, got {n}")
    return MAXIMAL_CLASS_ABELIAN_MAX_B.evaluate(2, n)


def _require_even(n: int):
    _require(n >= 4 and n % 2 == 0, f"the dihedral formulas need even n >= 4, got {n}")


def a_dihedral(n: int) -> RationalGF:
    """Dihedral group of order 2n"""
    _require_even(n)
    return DIHEDRAL_A.evaluate(n)


def b_dihedral(n: int) -> RationalGF:
    _require_even(n)
    return DIHEDRAL_B.evaluate(n)


def a_extraspecial_p5(p: int) -> RationalGF:
    _require_prime(p)
    return EXTRASPECIAL_P5_A.evaluate(p)


def b_extraspecial_p5(p: int) -> RationalGF:
    _require_prime(p)
    return EXTRASPECIAL_P5_B.evaluate(p)


# Normalized rows: (coefficient summands as powers of p, pole exponent k) for c / (1 - p^k t)
RowTerms = Tuple[Tuple[Tuple[Power, ...], int], ...]


def _row(*entries) -> RowTerms:
    return tuple((tuple(K(b, c) for b, c in coeff), k) for coeff, k in entries)


_ABELIAN_ROW = _row(([(0, 1)], 0))
_TABLE_ROWS: Dict[str, Tuple[RowTerms, RowTerms]] = {
    "abelian": (_ABELIAN_ROW, _ABELIAN_ROW),
    "rank3": (
        _row(([(0, 1), (-2, -1)], -1), ([(-2, 1)], 0)),
        _row(([(-1, -1)], -2), ([(0, 1), (-1, 1)], -1)),
    ),
    "rank4": (
        _row(([(0, 1), (-1, -1)], -2), ([(-1, 1), (-3, -1)], -1), ([(-3, 1)], 0)),
        _row(([(-1, -1)], -3), ([(0, 1)], -2), ([(-1, 1)], -1)),
    ),
    "extraspecial": (
        _row(([(0, 1), (-4, -1)], -1), ([(-4, 1)], 0)),
        _row(
            ([(0, 1)], -4),
            ([(1, -1), (0, -1), (-1, -1), (-2, -1)], -3),
            ([(1, 1), (0, 1), (-1, 1), (-2, 1)], -2),
        ),
    ),
    "Phi6": (
        _row(([(0, 1), (-3, -1)], -2), ([(-3, 1)], 0)),
        _row(([(-1, -1), (-2, -1)], -3), ([(0, 1), (-1, 1), (-2, 1)], -2)),
    ),
    "Phi7": (
        _row(([(0, 1), (-2, -1)], -2), ([(-2, 1), (-4, -1)], -1), ([(-4, 1)], 0)),
        _row(([(-1, -1), (-2, -1)], -3), ([(0, 1), (-1, 1), (-2, 1)], -2)),
    ),
    "Phi9": (
        _row(([(0, 1), (-1, -1)], -3), ([(-1, 1), (-4, -1)], -1), ([(-4, 1)], 0)),
        _row(([(-1, -1)], -4), ([(0, 1)], -3), ([(-1, 1)], -1)),
    ),
    "Phi10": (
        _row(([(0, 1), (-1, -1)], -3), ([(-1, 1), (-3, -1)], -2), ([(-3, 1), (-4, -1)], -1), ([(-4, 1)], 0)),
        _row(([(-1, -1)], -4), ([(0, 1), (-2, -1)], -3), ([(-1, 1), (-2, 1)], -2)),
    ),
}

FAMILY_ROWS: Dict[str, str] = {
    "abelian": "abelian",
    "Phi2": "rank3",
    "Gamma2": "rank3",
    "Phi3": "rank4",
    "Phi4": "rank4",
    "Gamma3": "rank4",
    "Gamma4": "rank4",
    "Phi5": "extraspecial",
    "Gamma5": "extraspecial",
    "Phi6": "Phi6",
    "Phi7": "Phi7",
    "Phi8": "Phi7",
    "Gamma6": "Phi7",
    "Gamma7": "Phi7",
    "Phi9": "Phi9",
    "Gamma8": "Phi9",
    "Phi10": "Phi10",
}

FAMILY_ALIASES: Dict[str, str] = {}
for _name in FAMILY_ROWS:
    if _name != "abelian":
        _greek, _index = ("Φ", _name[3:]) if _name.startswith("Phi") else ("Γ", _name[5:])
        FAMILY_ALIASES[_name.lower()] = _name
        FAMILY_ALIASES[f"{_greek}{_index}"] = _name
        FAMILY_ALIASES[_greek + _index.translate(str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉"))] = _name
FAMILY_ALIASES["abelian"] = "abelian"


def canonical_family(name: str) -> str:
    key = FAMILY_ALIASES.get(name) or FAMILY_ALIASES.get(name.lower())
    if key is None and name in FAMILY_ROWS:
        key = name
    if key is None:
        raise InvalidParameters(f"unknown family {name!r}")
    return key


def _check_family_prime(family: str, p: int):
    _require_prime(p)
    if family.startswith("Gamma"):
        _require(p == 2, f"{family} is a family of 2-groups, got p = {p}")
    elif family.startswith("Phi"):
        _require(p % 2 == 1, f"{family} needs an odd prime, got p = {p}")


def _evaluate_row(row: RowTerms, p: int) -> RationalGF:
    return RationalGF.from_terms(
        ((sum((c.value(p, 0) for c in coeff), Fraction(0)), Fraction(p) ** k, 1) for coeff, k in row),
        normalized=True,
    )


def table_row(family: str, p: int) -> Tuple[RationalGF, RationalGF]:
    """Normalized A_G(t/|G|) and B_G(t/|G|) of an isoclinism family"""
    family = canonical_family(family)
    _check_family_prime(family, p)
    a_row, b_row = _TABLE_ROWS[FAMILY_ROWS[family]]
    return _evaluate_row(a_row, p), _evaluate_row(b_row, p)


def stem_closed_forms(family: str, p: int) -> Optional[Tuple[FormulaId, RationalGF, RationalGF]]:
    """Closed-form A and B of the family's stem group, where a theorem covers it"""
    family = canonical_family(family)
    _check_family_prime(family, p)
    if family == "abelian":
        return FormulaId("abelian", p, 1), RationalGF.geometric(p), RationalGF.geometric(p)
    if family in ("Phi2", "Gamma2"):
        return FormulaId("central_quotient_p2", p, 3), a_central_quotient_p2(p, 3), b_central_quotient_p2(p, 3)
    if family in ("Phi3", "Gamma3"):
        return (
            FormulaId("central_quotient_p3_abelian_max", p, 4),
            a_central_quotient_p3(p, 4, True),
            b_central_quotient_p3(p, 4, True),
        )
    if family in ("Phi4", "Gamma4"):
        return (
            FormulaId("central_quotient_p3_abelian_max", p, 5),
            a_central_quotient_p3(p, 5, True),
            b_central_quotient_p3(p, 5, True),
        )
    if family == "Phi6":
        return (
            FormulaId("central_quotient_p3_no_abelian_max", p, 5),
            a_central_quotient_p3(p, 5, False),
            b_central_quotient_p3(p, 5, False),
        )
    if family in ("Phi5", "Gamma5"):
        return FormulaId("extraspecial_p5", p, 5), a_extraspecial_p5(p), b_extraspecial_p5(p)
    if family in ("Phi9", "Gamma8"):
        return (
            FormulaId("maximal_class", p, 5, "abelian_max"),
            a_maximal_class(p, 5, "abelian_max"),
            b_maximal_class(p, 5, "abelian_max"),
        )
    if family == "Phi10":
        return (
            FormulaId("maximal_class", p, 5, "P1P3_no_abelian_max"),
            a_maximal_class(p, 5, "P1P3_no_abelian_max"),
            b_maximal_class(p, 5, "P1P3_no_abelian_max"),
        )
    return None


@dataclass(frozen=True)
class ClosedForm:
    formula: FormulaId
    A: RationalGF
    B: RationalGF


def applicable_formulas(g: GroupTable) -> List[ClosedForm]:
    """Every closed form whose hypotheses the group satisfies"""
    p = analysis.prime_of(g.order)
    if p is None or analysis.is_abelian(g):
        return []
    m = analysis.prime_power_exponent(g.order, p)
    z = analysis.center(g).order
    quotient = g.order // z
    found: List[ClosedForm] = []

    if quotient == p ** 2 and m >= 3:
        found.append(ClosedForm(FormulaId("central_quotient_p2", p, m), a_central_quotient_p2(p, m), b_central_quotient_p2(p, m)))
    if quotient == p ** 3 and m >= 4:
        abelian_max = analysis.has_abelian_maximal_subgroup(g, p)
        if abelian_max or m >= 5:
            name = "central_quotient_p3_abelian_max" if abelian_max else "central_quotient_p3_no_abelian_max"
            found.append(
                ClosedForm(
                    FormulaId(name, p, m),
                    a_central_quotient_p3(p, m, abelian_max),
                    b_central_quotient_p3(p, m, abelian_max),
                )
            )
    if m == 5 and z == p and analysis.derived_subgroup(g).order == p:
        found.append(ClosedForm(FormulaId("extraspecial_p5", p, 5), a_extraspecial_p5(p), b_extraspecial_p5(p)))

    if m >= 4:
        profile = analysis.maximal_class_profile(g, p)
        if profile.is_maximal_class and profile.degree_of_commutativity_positive:
            if profile.has_abelian_maximal_subgroup:
                found.append(
                    ClosedForm(
                        FormulaId("maximal_class", p, m, "abelian_max"),
                        a_maximal_class(p, m, "abelian_max"),
                        b_maximal_class(p, m, "abelian_max"),
                    )
                )
                if p == 2:
                    found.append(
                        ClosedForm(FormulaId("maximal_class_2group", 2, m), a_maximal_class_2group(m), b_maximal_class_2group(m))
                    )
            elif profile.P1_P3_commute and m >= 5:
                found.append(
                    ClosedForm(
                        FormulaId("maximal_class", p, m, "P1P3_no_abelian_max"),
                        a_maximal_class(p, m, "P1P3_no_abelian_max"),
                        b_maximal_class(p, m, "P1P3_no_abelian_max"),
                    )
                )
    logger.debug("%s: closed forms %s", g.label, [str(f.formula) for f in found])
    return found
