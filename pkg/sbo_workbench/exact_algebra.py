"""Exact arithmetic substrate.

Coefficients everywhere in the package live in the rational function field
``QQ(lambda1, ..., lambda{n+1}, nu1, ..., nu{n})`` built with
:func:`sympy.polys.fields.field`. sympy keeps its elements gcd-reduced, so
equality of two coefficients is equality of their canonical forms.

Parameters that are affine in the symbols (the entries of lambda and nu, the
exponents s_i and t_i, every Gamma argument) are carried as
:class:`AffineForm`, which supports the integer-difference tests that the
Gamma calculus and the kernel solver need.
"""
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from sympy import Rational, Symbol, latex
from sympy.combinatorics import Permutation
from sympy.core.sympify import SympifyError
from sympy.polys.domains import QQ
from sympy.polys.fields import FracElement, FracField, field
from sympy.polys.rings import PolyElement

from .constants import PARAMETER_PREFIXES, RANDOM_POINT_DEFAULTS

logger = logging.getLogger(__name__)

Assignment = Mapping[str, Any]


def lambda_names(n: int) -> List[str]:
    """Names lambda1..lambda{n+1} of the G-side parameters."""
    return [f"{PARAMETER_PREFIXES['lambda']}{i}" for i in range(1, n + 2)]


def nu_names(n: int) -> List[str]:
    """Names nu1..nu{n} of the H-side parameters."""
    return [f"{PARAMETER_PREFIXES['nu']}{j}" for j in range(1, n + 1)]


def parameter_names(n: int) -> List[str]:
    return lambda_names(n) + nu_names(n)


@lru_cache(maxsize=None)
def parameter_field(n: int) -> FracField:
    """Rational function field in the parameters of (GL_{n+1}, GL_n).

    The field object is cached so that every module working at size n shares
    one set of generators.
    """
    K, *_ = field(",".join(parameter_names(n)), QQ)
    logger.debug(f"Built parameter field for n={n} with {len(K.gens)} generators")
    return K


@lru_cache(maxsize=None)
def _gens_by_name(K: FracField) -> Tuple[Tuple[str, FracElement], ...]:
    return tuple((str(sym), gen) for sym, gen in zip(K.symbols, K.gens))


def gens_by_name(K: FracField) -> Dict[str, FracElement]:
    """Map symbol name -> generator of K."""
    return dict(_gens_by_name(K))


def size_for_names(names: Iterable[str]) -> int:
    """Smallest n whose parameter field contains all the given names."""
    n = 1
    for name in names:
        if name.startswith(PARAMETER_PREFIXES["lambda"]):
            n = max(n, int(name[len(PARAMETER_PREFIXES["lambda"]):]) - 1)
        elif name.startswith(PARAMETER_PREFIXES["nu"]):
            n = max(n, int(name[len(PARAMETER_PREFIXES["nu"]):]))
        else:
            raise ValueError(f"unbound name: {name}")
    return n


def as_rational(value: Any) -> Rational:
    """Coerce an exact scalar to a sympy Rational.

    Accepts ints, sympy Rationals, fractions, ground elements of QQ, constant
    AffineForms, constant field elements and strings such as ``"5/2"``.
    Floats are rejected.

    Raises:
        ValueError: If the value is not an exact rational
    """
    if isinstance(value, bool):
        raise ValueError(f"not an exact rational: {value!r}")
    if isinstance(value, Rational):
        return value
    if isinstance(value, int):
        return Rational(value)
    if isinstance(value, Fraction):
        return Rational(value.numerator, value.denominator)
    if isinstance(value, str):
        try:
            parsed = Rational(value.strip())
        except (TypeError, ValueError, SympifyError):
            raise ValueError(f"not an exact rational: {value!r}")
        return parsed
    if isinstance(value, AffineForm):
        if not value.is_constant:
            raise ValueError(f"not an exact rational: {value}")
        return value.constant
    if isinstance(value, FracElement):
        if value.numer.is_ground and value.denom.is_ground:
            domain = value.field.domain
            return domain.to_sympy(value.numer.LC) / domain.to_sympy(value.denom.LC)
        raise ValueError(f"not an exact rational: {value.as_expr()}")
    if QQ.of_type(value):
        return QQ.to_sympy(value)
    raise ValueError(f"not an exact rational: {value!r}")


def to_field(K: FracField, value: Any) -> FracElement:
    """Convert a scalar, AffineForm or element of K into an element of K."""
    if isinstance(value, FracElement) and value.field == K:
        return value
    if isinstance(value, AffineForm):
        return value.to_element(K)
    return K.ground_new(QQ.from_sympy(as_rational(value)))


def is_constant(value: FracElement) -> bool:
    """True when a field element does not depend on any parameter."""
    return value.numer.is_ground and value.denom.is_ground


@dataclass(frozen=True)
class AffineForm:
    """c_0 + sum c_name * name with exact rational coefficients.

    Coefficients are stored as a sorted tuple so that equality and hashing are
    structural.
    """
    coefficients: Tuple[Tuple[str, Rational], ...] = ()
    constant: Rational = Rational(0)

    @classmethod
    def build(cls, coefficients: Mapping[str, Any] = None, constant: Any = 0) -> "AffineForm":
        items = []
        for name, coeff in (coefficients or {}).items():
            coeff = as_rational(coeff)
            if coeff != 0:
                items.append((name, coeff))
        return cls(tuple(sorted(items)), as_rational(constant))

    @classmethod
    def symbol(cls, name: str) -> "AffineForm":
        return cls(((name, Rational(1)),), Rational(0))

    @classmethod
    def coerce(cls, value: Any) -> "AffineForm":
        if isinstance(value, AffineForm):
            return value
        return cls((), as_rational(value))

    @property
    def is_constant(self) -> bool:
        return not self.coefficients

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.coefficients)

    @property
    def linear_part(self) -> "AffineForm":
        return AffineForm(self.coefficients, Rational(0))

    def coefficient(self, name: str) -> Rational:
        return dict(self.coefficients).get(name, Rational(0))

    def _combine(self, other: "AffineForm", sign: int) -> "AffineForm":
        merged: Dict[str, Rational] = dict(self.coefficients)
        for name, coeff in other.coefficients:
            merged[name] = merged.get(name, Rational(0)) + sign * coeff
        return AffineForm.build(merged, self.constant + sign * other.constant)

    def __add__(self, other: Any) -> "AffineForm":
        try:
            other = AffineForm.coerce(other)
        except ValueError:
            return NotImplemented
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "AffineForm":
        try:
            other = AffineForm.coerce(other)
        except ValueError:
            return NotImplemented
        return self._combine(other, -1)

    def __rsub__(self, other: Any) -> "AffineForm":
        return (-self) + other

    def __neg__(self) -> "AffineForm":
        return self * -1

    def __mul__(self, scalar: Any) -> "AffineForm":
        try:
            scalar = as_rational(scalar)
        except ValueError:
            return NotImplemented
        return AffineForm.build(
            {name: coeff * scalar for name, coeff in self.coefficients},
            self.constant * scalar,
        )

    __rmul__ = __mul__

    def difference(self, other: "AffineForm") -> Optional[Rational]:
        """self - other when the two forms share their linear part, else None."""
        other = AffineForm.coerce(other)
        if self.coefficients != other.coefficients:
            return None
        return self.constant - other.constant

    def integer_difference(self, other: "AffineForm") -> Optional[int]:
        diff = self.difference(other)
        if diff is None or not diff.is_integer:
            return None
        return int(diff)

    def to_element(self, K: FracField) -> FracElement:
        """Image of the form in the field K.

        Raises:
            ValueError: "unbound name" when a symbol is not a generator of K
        """
        gens = gens_by_name(K)
        result = K.ground_new(QQ.from_sympy(self.constant))
        for name, coeff in self.coefficients:
            if name not in gens:
                raise ValueError(f"unbound name: {name}")
            result += gens[name] * QQ.from_sympy(coeff)
        return result

    def eval_at(self, assignment: Assignment) -> Rational:
        total = self.constant
        for name, coeff in self.coefficients:
            if name not in assignment:
                raise ValueError(f"unbound name: {name}")
            total += coeff * as_rational(assignment[name])
        return total

    def substitute(self, mapping: Mapping[str, Any]) -> "AffineForm":
        """Replace some names by AffineForms or numbers, leaving the rest."""
        result = AffineForm.coerce(self.constant)
        for name, coeff in self.coefficients:
            image = AffineForm.coerce(mapping[name]) if name in mapping else AffineForm.symbol(name)
            result = result + image * coeff
        return result

    def sort_key(self) -> Tuple:
        return (tuple((name, float(c)) for name, c in self.coefficients), float(self.constant))

    def to_expr(self):
        expr = self.constant
        for name, coeff in self.coefficients:
            expr += coeff * Symbol(name)
        return expr

    def to_latex(self) -> str:
        return latex(self.to_expr())

    def __str__(self) -> str:
        return str(self.to_expr())


def lambda_forms(n: int) -> List[AffineForm]:
    """The symbolic vector (lambda1, ..., lambda{n+1})."""
    return [AffineForm.symbol(name) for name in lambda_names(n)]


def nu_forms(n: int) -> List[AffineForm]:
    return [AffineForm.symbol(name) for name in nu_names(n)]


def pochhammer(a: Any, j: int, K: Optional[FracField] = None):
    """Rising factorial (a)_j = a (a+1) ... (a+j-1); (a)_0 = 1.

    ``a`` may be a field or polynomial element, a rational, or an AffineForm;
    a non-constant AffineForm is first mapped into K (inferred from its names
    if not given).
    """
    if j < 0:
        raise ValueError(f"pochhammer needs j >= 0, got {j}")
    if isinstance(a, AffineForm) and not a.is_constant:
        K = K or parameter_field(size_for_names(a.names))
        a = a.to_element(K)
    elif not isinstance(a, (FracElement, PolyElement)):
        a = as_rational(a)
        if K is not None:
            a = to_field(K, a)
    if isinstance(a, FracElement):
        result = a.field.one
    elif isinstance(a, PolyElement):
        result = a.ring.one
    else:
        result = Rational(1)
    for i in range(j):
        result = result * (a + i)
    return result


def eval_at(expr: Any, assignment: Assignment) -> Rational:
    """Exact value of a symbolic expression at a rational point.

    Raises:
        ValueError: "division-by-zero at point" or "unbound name: <x>"
    """
    point = {name: as_rational(value) for name, value in assignment.items()}
    return _evaluate(expr, point)


def _evaluate(expr: Any, point: Dict[str, Rational]) -> Rational:
    if hasattr(expr, "eval_at"):
        return expr.eval_at(point)
    if isinstance(expr, FracElement):
        denom = _evaluate_poly(expr.denom, point)
        if denom == 0:
            raise ValueError(f"division-by-zero at point {_format_point(point)}")
        return _evaluate_poly(expr.numer, point) / denom
    if isinstance(expr, PolyElement):
        return _evaluate_poly(expr, point)
    return as_rational(expr)


def _evaluate_poly(poly: PolyElement, point: Dict[str, Rational]) -> Rational:
    names = [str(sym) for sym in poly.ring.symbols]
    domain = poly.ring.domain
    total = Rational(0)
    for monom, coeff in poly.iterterms():
        if isinstance(coeff, (FracElement, PolyElement)):
            term = _evaluate(coeff, point)
        else:
            term = domain.to_sympy(coeff)
        for name, exponent in zip(names, monom):
            if exponent:
                if name not in point:
                    raise ValueError(f"unbound name: {name}")
                term *= point[name] ** exponent
        total += term
    return total


def _format_point(point: Mapping[str, Rational]) -> str:
    return "{" + ", ".join(f"{name}: {value}" for name, value in sorted(point.items())) + "}"


def random_points(
    names: Sequence[str],
    count: int = None,
    seed: int = None,
    avoid: Iterable[Any] = (),
    max_denominator: int = None,
) -> List[Dict[str, Rational]]:
    """Seeded random rational points that keep every ``avoid`` expression nonzero.

    Args:
        names: Parameter names to assign
        count: Number of points
        seed: Seed of the private random generator
        avoid: Expressions that must evaluate to a nonzero, finite value
        max_denominator: Bound on the denominators drawn

    Returns:
        List of name -> Rational assignments

    Raises:
        RuntimeError: If rejection sampling exhausts its budget
    """
    count = RANDOM_POINT_DEFAULTS["count"] if count is None else count
    seed = RANDOM_POINT_DEFAULTS["seed"] if seed is None else seed
    max_denominator = max_denominator or RANDOM_POINT_DEFAULTS["max_denominator"]
    span = RANDOM_POINT_DEFAULTS["numerator_span"]
    avoid = list(avoid)
    rng = random.Random(seed)

    def draw() -> Rational:
        q = rng.randint(1, max_denominator)
        return Rational(rng.randint(-span * q, span * q), q)

    points = []
    for _ in range(count):
        for _attempt in range(RANDOM_POINT_DEFAULTS["max_attempts"]):
            point = {name: draw() for name in names}
            if _clears(point, avoid):
                points.append(point)
                break
        else:
            raise RuntimeError(f"Could not draw a random point avoiding {len(avoid)} expressions")
    return points


def _clears(point: Dict[str, Rational], avoid: List[Any]) -> bool:
    for expr in avoid:
        try:
            if _evaluate(expr, point) == 0:
                return False
        except ValueError:
            return False
    return True


def leibniz_expansion(rows: Sequence[Sequence[Any]], zero: Any = 0) -> Any:
    """sum_sigma sgn(sigma) M[sigma(1)][1] * ... * M[sigma(m)][m].

    Factors are multiplied in increasing column order, so the expansion is
    meaningful for noncommuting entries. Zero entries prune whole terms.
    """
    size = len(rows)
    if any(len(row) != size for row in rows):
        raise ValueError(f"non-square input: {size} rows of lengths {[len(r) for r in rows]}")
    total = None
    for perm in permutations(range(size)):
        factors = [rows[perm[col]][col] for col in range(size)]
        if any(not factor for factor in factors):
            continue
        term = factors[0]
        for factor in factors[1:]:
            term = term * factor
        if Permutation(list(perm)).signature() < 0:
            term = -term
        total = term if total is None else total + term
    return zero if total is None else total


