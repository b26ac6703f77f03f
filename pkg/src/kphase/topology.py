"""Poincare polynomials of equal-rank quotients and orbit bookkeeping.

Everything here is exact integer arithmetic: products of cyclotomic-style
binomials divided with zero remainder.  Group names are accepted both as
Cartan labels (A3, B2, G2, U1) and classical names (SU(4), SO(5), Sp(3),
U(1)), composed with x into products and with / into quotients.
"""

from __future__ import annotations

import enum
import re
import warnings
from dataclasses import dataclass

from .errors import InvalidRank, NonDivisible, RankMismatch, UnknownGroup


class Series(str, enum.Enum):
    """Simple series plus the rank-one torus factor."""

    A = "A"
    B = "B"
    C = "C"
    D = "D"
    G2 = "G2"
    F4 = "F4"
    E6 = "E6"
    E7 = "E7"
    E8 = "E8"
    U1 = "U1"


_FIXED_RANK = {
    Series.G2: 2,
    Series.F4: 4,
    Series.E6: 6,
    Series.E7: 7,
    Series.E8: 8,
    Series.U1: 1,
}


@dataclass(frozen=True)
class SimpleFactor:
    """One simple (or torus) factor of a compact group."""

    series: Series
    rank: int

    def __post_init__(self):
        object.__setattr__(self, "series", Series(self.series))
        if self.rank < 1:
            raise InvalidRank("rank must be positive")
        fixed = _FIXED_RANK.get(self.series)
        if fixed is not None and self.rank != fixed:
            raise InvalidRank(
                f"{self.series.value} has fixed rank {fixed}"
            )
        if self.series is Series.D:
            if self.rank < 2:
                raise InvalidRank("the D series starts at rank 2")
            if self.rank == 2:
                warnings.warn(
                    "D with rank 2 is reducible (two A1 factors); "
                    "allowed but flagged",
                    stacklevel=2,
                )

    @property
    def label(self) -> str:
        if self.series in _FIXED_RANK:
            return self.series.value
        return f"{self.series.value}{self.rank}"

    def degrees(self) -> list[int]:
        n = self.rank
        if self.series is Series.A:
            return list(range(2, n + 2))
        if self.series in (Series.B, Series.C):
            return [2 * k for k in range(1, n + 1)]
        if self.series is Series.D:
            return sorted([2 * k for k in range(1, n)] + [n])
        return {
            Series.G2: [2, 6],
            Series.F4: [2, 6, 8, 12],
            Series.E6: [2, 5, 6, 8, 9, 12],
            Series.E7: [2, 6, 8, 10, 12, 14, 18],
            Series.E8: [2, 8, 12, 14, 18, 20, 24, 30],
            Series.U1: [1],
        }[self.series]


@dataclass(frozen=True)
class GroupSpec:
    """A product of simple and torus factors."""

    factors: tuple[SimpleFactor, ...]

    @property
    def rank(self) -> int:
        return sum(f.rank for f in self.factors)

    @property
    def label(self) -> str:
        return " x ".join(f.label for f in self.factors)


_CARTAN = re.compile(r"^([ABCD])_?(\d+)$")
_CLASSICAL = re.compile(r"^(SU|SO|SP|U)\(?(\d+)\)?$", re.IGNORECASE)


def _parse_factor(token: str) -> list[SimpleFactor]:
    text = token.strip()
    if not text:
        raise UnknownGroup("empty group name")
    upper = text.upper()
    if upper in ("U1", "U_1", "U(1)", "SO2", "SO(2)", "SO_2"):
        return [SimpleFactor(Series.U1, 1)]
    if upper in ("G2", "G_2"):
        return [SimpleFactor(Series.G2, 2)]
    if upper in ("F4", "F_4"):
        return [SimpleFactor(Series.F4, 4)]
    if upper in ("E6", "E_6", "E7", "E_7", "E8", "E_8"):
        series = Series(upper.replace("_", ""))
        return [SimpleFactor(series, _FIXED_RANK[series])]
    m = _CARTAN.match(upper)
    if m:
        return [SimpleFactor(Series(m.group(1)), int(m.group(2)))]
    m = _CLASSICAL.match(text)
    if m:
        name, n = m.group(1).upper(), int(m.group(2))
        if name == "SU":
            if n < 2:
                raise InvalidRank("SU needs size at least 2")
            return [SimpleFactor(Series.A, n - 1)]
        if name == "SP":
            if n < 1:
                raise InvalidRank("Sp needs positive rank")
            return [SimpleFactor(Series.C, n)]
        if name == "SO":
            if n == 2:
                return [SimpleFactor(Series.U1, 1)]
            if n < 3:
                raise UnknownGroup(f"no group behind SO({n})")
            if n % 2:
                return [SimpleFactor(Series.B, (n - 1) // 2)]
            return [SimpleFactor(Series.D, n // 2)]
        if name == "U":
            if n == 1:
                return [SimpleFactor(Series.U1, 1)]
            # Unitary groups split into their special part and a circle.
            return [
                SimpleFactor(Series.A, n - 1),
                SimpleFactor(Series.U1, 1),
            ]
    raise UnknownGroup(f"cannot parse group name {token!r}")


def parse_group(text: str) -> GroupSpec:
    """Parse a product of group names separated by x, *, or a times sign."""
    tokens = re.split(r"[x*×]", text, flags=re.IGNORECASE)
    factors: list[SimpleFactor] = []
    for token in tokens:
        factors.extend(_parse_factor(token))
    if not factors:
        raise UnknownGroup(f"no factors in {text!r}")
    return GroupSpec(tuple(factors))


def parse_quotient(text: str) -> tuple[GroupSpec, GroupSpec]:
    """Parse a quotient string such as ``SU(4)/SU(2)xSU(2)xU(1)``."""
    if text.count("/") != 1:
        raise UnknownGroup("a quotient needs exactly one '/'")
    top, bottom = text.split("/")
    return parse_group(top), parse_group(bottom)


def weyl_degrees(g) -> list[int]:
    """Sorted invariant degrees of a group (string, factor, or product)."""
    if isinstance(g, str):
        g = parse_group(g)
    if isinstance(g, SimpleFactor):
        g = GroupSpec((g,))
    out: list[int] = []
    for f in g.factors:
        out.extend(f.degrees())
    return sorted(out)


@dataclass(frozen=True)
class PoincarePolynomial:
    """Integer coefficient list indexed by degree (Betti numbers)."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coefficients)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def euler_characteristic(self) -> int:
        return sum(self.coefficients)

    def __call__(self, t: float) -> float:
        out = 0.0
        for c in reversed(self.coefficients):
            out = out * t + c
        return out

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coefficients):
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                base = "t" if k == 1 else f"t^{k}"
                terms.append(base if c == 1 else f"{c} {base}")
        return " + ".join(terms) if terms else "0"


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    num = list(num)
    d = len(den) - 1
    lead = den[-1]
    q = [0] * (len(num) - d)
    for k in range(len(num) - 1, d - 1, -1):
        c, r = divmod(num[k], lead)
        if r != 0:
            raise NonDivisible("polynomial division leaves a remainder")
        q[k - d] = c
        for j, y in enumerate(den):
            num[k - d + j] -= c * y
    if any(num):
        raise NonDivisible("polynomial division leaves a remainder")
    return q, num


def hirsch_polynomial(g_degrees, h_degrees) -> PoincarePolynomial:
    """Quotient Poincare polynomial from two equal-length degree lists.

    Computes ``prod_j (1 - t^{2 n_j}) / prod_j (1 - t^{2 m_j})`` by exact
    integer polynomial division; a nonzero remainder signals an invalid
    pairing.
    """
    gd = [int(x) for x in g_degrees]
    hd = [int(x) for x in h_degrees]
    if len(gd) != len(hd):
        raise RankMismatch(
            f"degree lists have lengths {len(gd)} and {len(hd)}"
        )
    if any(x < 1 for x in gd + hd):
        raise InvalidRank("degrees must be positive")
    num = [1]
    for n in gd:
        factor = [1] + [0] * (2 * n - 1) + [-1]
        num = _poly_mul(num, factor)
    den = [1]
    for m in hd:
        factor = [1] + [0] * (2 * m - 1) + [-1]
        den = _poly_mul(den, factor)
    q, _ = _poly_divmod(num, den)
    return PoincarePolynomial(tuple(q))


def poincare_quotient(text: str) -> PoincarePolynomial:
    """Poincare polynomial of a quotient given as a string."""
    top, bottom = parse_quotient(text)
    return hirsch_polynomial(weyl_degrees(top), weyl_degrees(bottom))


@dataclass(frozen=True)
class BettiReport:
    """Validity checks of a Betti-number list."""

    ok: bool
    violations: tuple[str, ...]
    euler_characteristic: int
    top_degree: int

    def __bool__(self) -> bool:
        return self.ok


def betti_validate(p: PoincarePolynomial) -> BettiReport:
    """Check the shape every compact simply-connected orbit must have.

    Unit bottom class, vanishing odd Betti numbers, palindromic list, and
    no gaps among the even Betti numbers up to the top degree.
    """
    coeffs = p.coefficients
    violations = []
    if coeffs[0] != 1:
        violations.append("bottom Betti number is not 1")
    if any(c != 0 for c in coeffs[1::2]):
        violations.append("odd-degree Betti numbers do not vanish")
    if any(c < 0 for c in coeffs):
        violations.append("negative coefficient")
    n = len(coeffs) - 1
    if any(coeffs[k] != coeffs[n - k] for k in range(len(coeffs))):
        violations.append("coefficients are not palindromic")
    if any(coeffs[k] <= 0 for k in range(0, n + 1, 2)):
        violations.append("an even Betti number vanishes below the top degree")
    return BettiReport(
        ok=not violations,
        violations=tuple(violations),
        euler_characteristic=p.euler_characteristic(),
        top_degree=p.degree,
    )


@dataclass(frozen=True)
class MinOrbitInfo:
    """Dimension and isotropy of the smallest nonzero coadjoint orbit."""

    group: str
    dimension: int
    isotropy: str


def min_orbit(g) -> MinOrbitInfo:
    """Smallest-orbit table row for one simple factor.

    The published dimensions and isotropy labels are reproduced verbatim;
    torus factors and products have no row.
    """
    if isinstance(g, str):
        parsed = parse_group(g)
        if len(parsed.factors) != 1:
            raise UnknownGroup("the minimal-orbit table covers single factors")
        factor = parsed.factors[0]
    elif isinstance(g, GroupSpec):
        if len(g.factors) != 1:
            raise UnknownGroup("the minimal-orbit table covers single factors")
        factor = g.factors[0]
    elif isinstance(g, SimpleFactor):
        factor = g
    else:
        raise UnknownGroup(f"cannot interpret {g!r} as a group")
    s, n = factor.series, factor.rank
    if s is Series.U1:
        raise UnknownGroup("a torus factor has no nonzero coadjoint orbit")
    if s is Series.A:
        sub = "U(1)" if n == 1 else f"A{n - 1} x U(1)"
        return MinOrbitInfo(factor.label, 2 * n, sub)
    if s is Series.B:
        sub = "SO(2)" if n == 1 else f"B{n - 1} x SO(2)"
        return MinOrbitInfo(factor.label, 2 * (2 * n - 1), sub)
    if s is Series.C:
        if n < 2:
            raise InvalidRank("rank-one symplectic is the A-series row")
        return MinOrbitInfo(factor.label, 2 * (2 * n - 2), f"C{n - 1} x U(1)")
    if s is Series.D:
        return MinOrbitInfo(factor.label, 2 * (2 * n - 2), f"D{n - 1} x SO(2)")
    table = {
        Series.G2: (10, "A1 x SO(2)"),
        Series.F4: (30, "C3 x SO(2)"),
        Series.E6: (32, "D5 x SO(2)"),
        Series.E7: (54, "E6 x SO(2)"),
        Series.E8: (114, "E7 x SO(2)"),
    }
    dim, sub = table[s]
    return MinOrbitInfo(factor.label, dim, sub)
