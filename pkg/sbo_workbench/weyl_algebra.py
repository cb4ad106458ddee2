"""Weyl algebra over the matrix entries of GL_{n+1}.

Operators are stored in normal order: a g-monomial to the left of a
partial-monomial, keyed by the pair of flattened exponent vectors, with
coefficients in the parameter field. The vector fields

    eps^{i,j} = sum_k g_{ki} d/dg_{kj}

generate the right regular action; the source operators D_i, F_i are
column-ordered determinants of matrices whose first column holds the
multiplication operators Phi_r or Psi_r.
"""
import logging
from dataclasses import dataclass
from itertools import product
from math import comb, factorial
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import Rational, latex
from sympy.polys.fields import FracElement, FracField
from sympy.polys.rings import PolyElement

from .covariant_functions import FunctionKind, entry_ring, phi_psi
from .exact_algebra import as_rational, eval_at, leibniz_expansion, parameter_field, to_field
from .validators import validate_alpha, validate_index, validate_length

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]
TermKey = Tuple[Monomial, Monomial]


class NormalOrderedOperator:
    """sum c_{a,b} x^a d^b over ``nvars`` commuting coordinates, normal ordered.

    Subclasses fix what the coordinates are and how they print.
    """

    def __init__(self, nvars: int, field: FracField, terms: Optional[Dict[TermKey, Any]] = None):
        self.nvars = nvars
        self.field = field
        self.terms: Dict[TermKey, FracElement] = {key: c for key, c in (terms or {}).items() if c}

    def _spawn(self, terms: Dict[TermKey, Any]) -> "NormalOrderedOperator":
        raise NotImplementedError

    def _unit_key(self) -> TermKey:
        zero = (0,) * self.nvars
        return (zero, zero)

    def _check_compatible(self, other: "NormalOrderedOperator") -> None:
        if type(self) is not type(other) or self.nvars != other.nvars or self.field != other.field:
            raise ValueError("size mismatch: operators over different coordinates or fields")

    def zero_like(self) -> "NormalOrderedOperator":
        return self._spawn({})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: Any) -> "NormalOrderedOperator":
        if not isinstance(other, NormalOrderedOperator):
            other = self._spawn({self._unit_key(): to_field(self.field, other)})
        self._check_compatible(other)
        merged = dict(self.terms)
        for key, coeff in other.terms.items():
            merged[key] = merged.get(key, self.field.zero) + coeff
        return self._spawn(merged)

    __radd__ = __add__

    def __neg__(self) -> "NormalOrderedOperator":
        return self._spawn({key: -c for key, c in self.terms.items()})

    def __sub__(self, other: Any) -> "NormalOrderedOperator":
        return self + (-other)

    def __rsub__(self, other: Any) -> "NormalOrderedOperator":
        return (-self) + other

    def scale(self, value: Any) -> "NormalOrderedOperator":
        c = to_field(self.field, value)
        return self._spawn({key: coeff * c for key, coeff in self.terms.items()})

    def __mul__(self, other: Any) -> "NormalOrderedOperator":
        if isinstance(other, NormalOrderedOperator):
            self._check_compatible(other)
            return self._spawn(self._product(other))
        return self.scale(other)

    def __rmul__(self, other: Any) -> "NormalOrderedOperator":
        return self.scale(other)

    def __pow__(self, exponent: int) -> "NormalOrderedOperator":
        if exponent < 0:
            raise ValueError("negative powers of differential operators are undefined")
        result = self._spawn({self._unit_key(): self.field.one})
        for _ in range(exponent):
            result = result * self
        return result

    def _product(self, other: "NormalOrderedOperator") -> Dict[TermKey, FracElement]:
        # d^b x^c = sum_k C(b,k) C(c,k) k! x^{c-k} d^{b-k}, coordinatewise
        result: Dict[TermKey, FracElement] = {}
        zero = self.field.zero
        for (a, b), c1 in self.terms.items():
            for (c, d), c2 in other.terms.items():
                coeff = c1 * c2
                active = [v for v in range(self.nvars) if b[v] and c[v]]
                for ks in product(*(range(min(b[v], c[v]) + 1) for v in active)):
                    weight = 1
                    gexp = [a[v] + c[v] for v in range(self.nvars)]
                    dexp = [b[v] + d[v] for v in range(self.nvars)]
                    for v, k in zip(active, ks):
                        weight *= comb(b[v], k) * comb(c[v], k) * factorial(k)
                        gexp[v] -= k
                        dexp[v] -= k
                    key = (tuple(gexp), tuple(dexp))
                    result[key] = result.get(key, zero) + coeff * weight
        return result

    def commutator(self, other: "NormalOrderedOperator") -> "NormalOrderedOperator":
        return self * other - other * self

    def __eq__(self, other: object) -> bool:
        if isinstance(other, NormalOrderedOperator):
            return type(self) is type(other) and self.nvars == other.nvars and self.terms == other.terms
        try:
            scalar = to_field(self.field, other)
        except (ValueError, TypeError):
            return NotImplemented
        return self.terms == ({self._unit_key(): scalar} if scalar else {})

    __hash__ = None

    def order(self) -> int:
        """Highest total derivative order; 0 for the zero operator."""
        return max((sum(d) for _, d in self.terms), default=0)

    def coefficient(self, gexp: Monomial, dexp: Monomial) -> FracElement:
        return self.terms.get((tuple(gexp), tuple(dexp)), self.field.zero)

    def is_scalar(self) -> bool:
        return all(key == self._unit_key() for key in self.terms)

    def sorted_terms(self) -> List[Tuple[TermKey, FracElement]]:
        """Terms in the deterministic normal order: graded-lex g-part, then d-part."""
        return sorted(self.terms.items(), key=lambda item: (sum(item[0][0]), item[0][0], sum(item[0][1]), item[0][1]))

    def substitute(self, assignment: Dict[str, Any]) -> "NormalOrderedOperator":
        """Evaluate every coefficient at a parameter point."""
        return self._spawn({key: to_field(self.field, eval_at(c, assignment)) for key, c in self.terms.items()})

    def variable_names(self) -> List[Tuple[str, str]]:
        """(coordinate, derivative) LaTeX names per variable."""
        raise NotImplementedError

    def _monomial_latex(self, gexp: Monomial, dexp: Monomial) -> str:
        names = self.variable_names()
        parts = []
        for (coord, _), power in zip(names, gexp):
            if power:
                parts.append(coord if power == 1 else f"{coord}^{{{power}}}")
        for (_, deriv), power in zip(names, dexp):
            if power:
                parts.append(deriv if power == 1 else f"{deriv}^{{{power}}}")
        return " ".join(parts)

    def to_latex(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for (gexp, dexp), coeff in self.sorted_terms():
            monomial = self._monomial_latex(gexp, dexp)
            coeff_tex = latex(coeff.as_expr())
            if not monomial:
                pieces.append(coeff_tex)
            elif coeff == 1:
                pieces.append(monomial)
            elif coeff == -1:
                pieces.append(f"- {monomial}")
            else:
                pieces.append(f"\\left({coeff_tex}\\right) {monomial}")
        return " + ".join(pieces).replace("+ -", "-")

    def to_json(self) -> List[Dict[str, Any]]:
        return [
            {"x": list(gexp), "d": list(dexp), "coeff": str(coeff.as_expr())}
            for (gexp, dexp), coeff in self.sorted_terms()
        ]

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.to_latex()})"


class WeylElement(NormalOrderedOperator):
    """Differential operator in g_ij, 1 <= i, j <= size, normal ordered.

    Exponent vectors are flattened row-major: g_ij has index (i-1)*size + (j-1).
    """

    def __init__(self, size: int, field: Optional[FracField] = None, terms: Optional[Dict[TermKey, Any]] = None):
        self.size = size
        super().__init__(size * size, field or parameter_field(size - 1), terms)

    def _spawn(self, terms: Dict[TermKey, Any]) -> "WeylElement":
        return WeylElement(self.size, self.field, terms)

    def _check_compatible(self, other: "NormalOrderedOperator") -> None:
        if isinstance(other, WeylElement) and other.size != self.size:
            raise ValueError(f"size mismatch: {self.size} vs {other.size}")
        super()._check_compatible(other)

    def variable_names(self) -> List[Tuple[str, str]]:
        return [
            (f"g_{{{i}{j}}}", f"\\partial_{{{i}{j}}}")
            for i in range(1, self.size + 1)
            for j in range(1, self.size + 1)
        ]

    def _index(self, i: int, j: int) -> int:
        validate_index(i, 1, self.size, "row")
        validate_index(j, 1, self.size, "column")
        return (i - 1) * self.size + (j - 1)

    @classmethod
    def identity(cls, size: int, field: Optional[FracField] = None) -> "WeylElement":
        element = cls(size, field)
        return element._spawn({element._unit_key(): element.field.one})

    @classmethod
    def scalar(cls, value: Any, size: int, field: Optional[FracField] = None) -> "WeylElement":
        return cls.identity(size, field).scale(value)

    @classmethod
    def coordinate(cls, i: int, j: int, size: int, field: Optional[FracField] = None) -> "WeylElement":
        element = cls(size, field)
        gexp = [0] * (size * size)
        gexp[element._index(i, j)] = 1
        return element._spawn({(tuple(gexp), (0,) * (size * size)): element.field.one})

    @classmethod
    def partial(cls, i: int, j: int, size: int, field: Optional[FracField] = None) -> "WeylElement":
        element = cls(size, field)
        dexp = [0] * (size * size)
        dexp[element._index(i, j)] = 1
        return element._spawn({((0,) * (size * size), tuple(dexp)): element.field.one})

    @classmethod
    def multiplication(cls, poly: PolyElement, n: int) -> "WeylElement":
        """Multiplication by a polynomial of :func:`entry_ring` (n)."""
        if poly.ring.ngens != (n + 1) ** 2:
            raise ValueError(f"size mismatch: polynomial in {poly.ring.ngens} variables for n={n}")
        K = parameter_field(n)
        zero = (0,) * ((n + 1) ** 2)
        return cls(n + 1, K, {(monom, zero): to_field(K, coeff) for monom, coeff in poly.iterterms()})

    def apply(self, poly: PolyElement) -> PolyElement:
        """Action on a polynomial of :func:`entry_ring`."""
        if poly.ring.ngens != self.nvars:
            raise ValueError(f"size mismatch: operator on {self.nvars} variables, polynomial in {poly.ring.ngens}")
        result = poly.ring.zero
        for (gexp, dexp), coeff in self.sorted_terms():
            derived = poly
            for var, power in enumerate(dexp):
                for _ in range(power):
                    derived = derived.diff(var)
                if not derived:
                    break
            if derived:
                result += derived.mul_monom(gexp).mul_ground(coeff)
        return result


def epsilon(i: int, j: int, n: int, field: Optional[FracField] = None) -> WeylElement:
    """eps^{i,j} = sum_k g_{ki} d/dg_{kj}."""
    validate_index(i, 1, n + 1, "i")
    validate_index(j, 1, n + 1, "j")
    size = n + 1
    terms: Dict[TermKey, Any] = {}
    K = field or parameter_field(n)
    for k in range(1, size + 1):
        gexp = [0] * (size * size)
        dexp = [0] * (size * size)
        gexp[(k - 1) * size + (i - 1)] = 1
        dexp[(k - 1) * size + (j - 1)] = 1
        terms[(tuple(gexp), tuple(dexp))] = K.one
    return WeylElement(size, K, terms)


def epsilon_tilde(i: int, j: int, n: int, field: Optional[FracField] = None) -> WeylElement:
    """(-1)^{i+j+1} eps^{i,j}."""
    sign = -1 if (i + j + 1) % 2 else 1
    return epsilon(i, j, n, field).scale(sign)


@dataclass
class OperatorMatrix:
    """Rectangular array of operator entries (WeylElements, field scalars or 0)."""
    entries: List[List[Any]]

    def __post_init__(self):
        widths = {len(row) for row in self.entries}
        if len(widths) > 1:
            raise ValueError(f"ragged operator matrix with row lengths {sorted(widths)}")

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0


def ordered_det(M: Any) -> Any:
    """Column-ordered determinant sum_sigma sgn(sigma) M[sigma(1)][1] ... M[sigma(m)][m].

    Raises:
        ValueError: "non-square input"
    """
    matrix = M if isinstance(M, OperatorMatrix) else OperatorMatrix([list(row) for row in M])
    if matrix.rows != matrix.cols:
        raise ValueError(f"non-square input: {matrix.rows}x{matrix.cols}")
    operators = [item for row in matrix.entries for item in row if hasattr(item, "zero_like")]
    zero = operators[0].zero_like() if operators else 0
    return leibniz_expansion(matrix.entries, zero=zero)


class WeylEntries:
    """Matrix entries for the D_i / F_i determinants realised in the Weyl algebra."""

    def __init__(self, n: int, field: Optional[FracField] = None):
        self.n = n
        self.field = field or parameter_field(n)

    def phi(self, r: int) -> WeylElement:
        return WeylElement.multiplication(phi_psi(FunctionKind.PHI, r, self.n), self.n)

    def psi(self, r: int) -> WeylElement:
        return WeylElement.multiplication(phi_psi(FunctionKind.PSI, r, self.n), self.n)

    def epsilon(self, a: int, b: int) -> WeylElement:
        return epsilon(a, b, self.n, self.field)

    def epsilon_tilde(self, a: int, b: int) -> WeylElement:
        return epsilon_tilde(a, b, self.n, self.field)

    def scalar(self, value: Any) -> FracElement:
        return to_field(self.field, value)

    def identity(self) -> WeylElement:
        return WeylElement.identity(self.n + 1, self.field)


def _lambda_vector(lam: Sequence[Any], n: int, field: FracField) -> List[FracElement]:
    validate_length(lam, n + 1, "lambda")
    return [to_field(field, value) for value in lam]


def d_matrix(i: int, lam: Sequence[Any], n: int, entries) -> OperatorMatrix:
    """i x i matrix: column 1 Phi_1..Phi_i, superdiagonal lambda_{i,r}, eps^{r,c-1} below."""
    lam_K = _lambda_vector(lam, n, entries.field)
    rows = []
    for r in range(1, i + 1):
        row = [entries.phi(r)]
        for c in range(2, i + 1):
            if c <= r:
                row.append(entries.epsilon(r, c - 1))
            elif c == r + 1:
                row.append(entries.scalar(lam_K[i - 1] - lam_K[r - 1] - 1))
            else:
                row.append(0)
        rows.append(row)
    return OperatorMatrix(rows)


def f_matrix(i: int, lam: Sequence[Any], n: int, entries) -> OperatorMatrix:
    """(n+2-i) square matrix: column 1 Psi_{n+1}..Psi_i, superdiagonal lambda_{n+2-r,i}, tilde-eps below."""
    lam_K = _lambda_vector(lam, n, entries.field)
    size = n + 2 - i
    rows = []
    for r in range(1, size + 1):
        row = [entries.psi(n + 2 - r)]
        for c in range(2, size + 1):
            if c <= r:
                row.append(entries.epsilon_tilde(n + 3 - c, n + 2 - r))
            elif c == r + 1:
                row.append(entries.scalar(lam_K[n + 1 - r] - lam_K[i - 1] - 1))
            else:
                row.append(0)
        rows.append(row)
    return OperatorMatrix(rows)


def build_D(i: int, lam: Sequence[Any], n: int, entries=None):
    """D_1 = M_Phi; D_i for i >= 2 is the ordered determinant of :func:`d_matrix`."""
    validate_index(i, 1, n + 1, "i")
    entries = entries or WeylEntries(n)
    if i == 1:
        validate_length(lam, n + 1, "lambda")
        return entries.phi(1)
    return ordered_det(d_matrix(i, lam, n, entries))


def build_F(i: int, lam: Sequence[Any], n: int, entries=None):
    """F_{n+1} = M_Psi; F_i for i <= n is the ordered determinant of :func:`f_matrix`."""
    validate_index(i, 1, n + 1, "i")
    entries = entries or WeylEntries(n)
    if i == n + 1:
        validate_length(lam, n + 1, "lambda")
        return entries.psi(n + 1)
    return ordered_det(f_matrix(i, lam, n, entries))


def shift_lambda(kind: str, i: int, lam: Sequence[Any]) -> List[Any]:
    """Parameter after one factor: lambda - e_i for D_i, lambda - hat e_i for F_i."""
    shifted = list(lam)
    for position in range(len(lam)):
        if (kind == "D") == (position == i - 1):
            shifted[position] = shifted[position] - 1
    return shifted


def factor_sequence(alpha: Sequence[int], k: int, lam: Sequence[Any], n: int) -> List[Tuple[str, int, List[Any]]]:
    """Factors of L_{alpha,k}, innermost (rightmost) first, with the lambda each one sees.

    L_{alpha,k} = F_1^{alpha_1} ... F_k^{alpha_k} D_{k+2}^{alpha_{k+1}} ... D_{n+1}^{alpha_n}.
    """
    validate_alpha(alpha, n)
    validate_index(k, 0, n, "k")
    blocks = [("D", j + 1, alpha[j - 1]) for j in range(n, k, -1)]
    blocks += [("F", j, alpha[j - 1]) for j in range(k, 0, -1)]
    sequence = []
    current = list(lam)
    for kind, index, power in blocks:
        for _ in range(power):
            sequence.append((kind, index, current))
            current = shift_lambda(kind, index, current)
    return sequence


def _build(kind: str, i: int, lam: Sequence[Any], n: int, entries):
    return build_D(i, lam, n, entries) if kind == "D" else build_F(i, lam, n, entries)


def build_power(kind: str, i: int, alpha: int, lam: Sequence[Any], n: int, entries=None):
    """D_i^alpha = D_i(lambda - (alpha-1) e_i) o ... o D_i(lambda), likewise for F_i."""
    if kind not in ("D", "F"):
        raise ValueError(f"unknown operator kind: {kind}")
    validate_index(i, 1, n + 1, "i")
    entries = entries or WeylEntries(n)
    result = entries.identity()
    current = list(lam)
    for _ in range(alpha):
        result = _build(kind, i, current, n, entries) * result
        current = shift_lambda(kind, i, current)
    return result


def build_L(alpha: Sequence[int], k: int, lam: Sequence[Any], n: int, entries=None):
    """The source operator L_{alpha,k} with lambda threaded right to left."""
    entries = entries or WeylEntries(n)
    validate_length(lam, n + 1, "lambda")
    result = entries.identity()
    for kind, index, current in factor_sequence(alpha, k, lam, n):
        result = _build(kind, index, current, n, entries) * result
    logger.debug(f"Built L_{{{tuple(alpha)},{k}}} at n={n}")
    return result


def residue_operator(i: int, j: int, parity: int, n: int) -> WeylElement:
    """(-1)^j (j+p)!/(2j+p)! (eps^{i+1,i})^{2j+p}, the differential residue at a simple reflection."""
    validate_index(i, 1, n, "i")
    if j < 0 or parity not in (0, 1):
        raise ValueError(f"residue operator needs j >= 0 and parity in {{0, 1}}, got j={j}, parity={parity}")
    scalar = Rational((-1) ** j * factorial(j + parity), factorial(2 * j + parity))
    return (epsilon(i + 1, i, n) ** (2 * j + parity)).scale(scalar)


def random_weyl_element(rng, n: int, max_terms: int = 3, max_degree: int = 1) -> WeylElement:
    """Small random WeylElement with integer coefficients, for property checks."""
    size = n + 1
    nvars = size * size
    terms: Dict[TermKey, Any] = {}
    K = parameter_field(n)
    for _ in range(rng.randint(1, max_terms)):
        gexp = [0] * nvars
        dexp = [0] * nvars
        for _ in range(rng.randint(0, max_degree)):
            gexp[rng.randrange(nvars)] += 1
        for _ in range(rng.randint(0, max_degree)):
            dexp[rng.randrange(nvars)] += 1
        key = (tuple(gexp), tuple(dexp))
        terms[key] = terms.get(key, K.zero) + rng.randint(-3, 3)
    return WeylElement(size, K, terms)


def as_scalar(value: Any) -> Rational:
    """Rational value of a constant operator or scalar."""
    if isinstance(value, NormalOrderedOperator):
        if not value.is_scalar():
            raise ValueError("operator is not a scalar")
        return as_rational(value.terms.get(value._unit_key(), value.field.zero))
    return as_rational(value)


def iter_epsilons(n: int) -> Iterable[Tuple[int, int]]:
    """All index pairs (i, j) with 1 <= i, j <= n+1."""
    return product(range(1, n + 2), repeat=2)
