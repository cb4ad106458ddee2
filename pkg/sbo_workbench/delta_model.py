"""Kernels supported at the origin of the lower-unipotent chart.

A kernel sum a(m) delta^{(m)}(nbar) is a finite map from order vectors m
(one natural per lower-triangular coordinate) to coefficients. The
equivariance of the kernel under x_k^{-1} P_H x_k becomes, after a Gauss
decomposition of (1 + tX) nbar = nbar(t) p(t) differentiated at t = 0, a
first-order system of differential equations acting on these sums. At n = 2
the system is solved exactly for the coefficients.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from math import factorial
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import Matrix, Poly, Rational, cancel, eye, latex, symbols, zeros
from sympy.polys.fields import FracElement, FracField
from sympy.polys.matrices import DomainMatrix

from .covariant_functions import x_k_matrix
from .exact_algebra import AffineForm, as_rational, parameter_field, pochhammer, to_field
from .parameters import HALF, InductionParams, rho_G, rho_H
from .validators import validate_index
from .weyl_algebra import NormalOrderedOperator

logger = logging.getLogger(__name__)

Orders = Tuple[int, ...]

COORDINATE_LETTERS = {2: ("x", "y", "z")}


def lower_coordinates(n: int) -> List[Tuple[int, int]]:
    """Positions (i, j), i > j, of the chart coordinates ordered by (i - j, j).

    At n = 2 this is (2,1), (3,2), (3,1), i.e. x, y, z.
    """
    pairs = [(i, j) for i in range(2, n + 2) for j in range(1, i)]
    return sorted(pairs, key=lambda pr: (pr[0] - pr[1], pr[1]))


def coordinate_names(n: int) -> List[str]:
    if n in COORDINATE_LETTERS:
        return list(COORDINATE_LETTERS[n])
    return [f"n{i}{j}" for i, j in lower_coordinates(n)]


class DeltaKernel:
    """sum a(m) prod_v delta^{(m_v)}(coordinate_v)."""

    def __init__(self, n: int, terms: Optional[Dict[Orders, Any]] = None, field: Optional[FracField] = None):
        self.n = n
        self.field = field or parameter_field(n)
        self.coords = tuple(lower_coordinates(n))
        cleaned = {}
        for orders, coeff in (terms or {}).items():
            orders = tuple(orders)
            if len(orders) != len(self.coords) or any(o < 0 for o in orders):
                raise ValueError(f"size mismatch: orders {orders} for {len(self.coords)} coordinates")
            coeff = to_field(self.field, coeff)
            if coeff:
                cleaned[orders] = cleaned.get(orders, self.field.zero) + coeff
        self.terms: Dict[Orders, FracElement] = {o: c for o, c in cleaned.items() if c}

    @classmethod
    def delta(cls, orders: Sequence[int], n: int = 2, coefficient: Any = 1) -> "DeltaKernel":
        return cls(n, {tuple(orders): coefficient})

    def _check(self, other: "DeltaKernel") -> None:
        if self.n != other.n:
            raise ValueError(f"coordinate mismatch: n={self.n} vs n={other.n}")

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "DeltaKernel") -> "DeltaKernel":
        self._check(other)
        merged = dict(self.terms)
        for orders, coeff in other.terms.items():
            merged[orders] = merged.get(orders, self.field.zero) + coeff
        return DeltaKernel(self.n, merged, self.field)

    def __neg__(self) -> "DeltaKernel":
        return self.scale(-1)

    def __sub__(self, other: "DeltaKernel") -> "DeltaKernel":
        return self + (-other)

    def scale(self, value: Any) -> "DeltaKernel":
        c = to_field(self.field, value)
        return DeltaKernel(self.n, {o: coeff * c for o, coeff in self.terms.items()}, self.field)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DeltaKernel):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    __hash__ = None

    def coefficient(self, orders: Sequence[int]) -> FracElement:
        return self.terms.get(tuple(orders), self.field.zero)

    def orders(self) -> List[Orders]:
        """Order vectors sorted by the last coordinate first (z-order at n = 2)."""
        return sorted(self.terms, key=lambda o: tuple(reversed(o)))

    def normalized(self) -> "DeltaKernel":
        """Scaled so the first coefficient in :meth:`orders` order is 1."""
        if not self.terms:
            return self
        return self.scale(1 / self.terms[self.orders()[0]])

    def to_json(self) -> List[Dict[str, Any]]:
        return [{"orders": list(o), "coefficient": str(self.terms[o].as_expr())} for o in self.orders()]

    def to_latex(self) -> str:
        if not self.terms:
            return "0"
        names = coordinate_names(self.n)
        pieces = []
        for orders in self.orders():
            deltas = " ".join(f"\\delta^{{({m})}}({name})" for name, m in zip(names, orders))
            coeff = self.terms[orders]
            coeff_tex = "" if coeff == 1 else f"\\left({latex(coeff.as_expr())}\\right) "
            pieces.append(coeff_tex + deltas)
        return " + ".join(pieces)

    def __repr__(self) -> str:
        return f"DeltaKernel({self.to_latex()})"


class PdeOperator(NormalOrderedOperator):
    """Differential operator in the chart coordinates with a right-hand side.

    The equation it encodes is ``op K = rhs * K``. Ring operations act on the
    operator part only; the right-hand side of the result is zero.
    """

    def __init__(self, n: int, field: Optional[FracField] = None, terms=None, rhs: Any = 0):
        self.n = n
        self.coords = tuple(lower_coordinates(n))
        super().__init__(len(self.coords), field or parameter_field(n), terms)
        self.rhs = to_field(self.field, rhs)

    def _spawn(self, terms) -> "PdeOperator":
        return PdeOperator(self.n, self.field, terms)

    def _variable(self, name: str) -> int:
        names = coordinate_names(self.n)
        if name not in names:
            raise ValueError(f"unbound name: {name}")
        return names.index(name)

    @classmethod
    def coordinate(cls, name: str, n: int = 2) -> "PdeOperator":
        op = cls(n)
        exp = [0] * op.nvars
        exp[op._variable(name)] = 1
        return op._spawn({(tuple(exp), (0,) * op.nvars): op.field.one})

    @classmethod
    def partial(cls, name: str, n: int = 2) -> "PdeOperator":
        op = cls(n)
        exp = [0] * op.nvars
        exp[op._variable(name)] = 1
        return op._spawn({((0,) * op.nvars, tuple(exp)): op.field.one})

    @classmethod
    def scalar(cls, value: Any, n: int = 2) -> "PdeOperator":
        op = cls(n)
        return op._spawn({op._unit_key(): to_field(op.field, value)})

    def with_rhs(self, rhs: Any) -> "PdeOperator":
        return PdeOperator(self.n, self.field, self.terms, rhs)

    def homogeneous(self) -> "PdeOperator":
        """op - rhs, an operator whose equation has zero right-hand side."""
        return self - self.rhs

    def variable_names(self) -> List[Tuple[str, str]]:
        return [(name, f"\\partial_{{{name}}}") for name in coordinate_names(self.n)]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PdeOperator):
            return self.n == other.n and self.terms == other.terms and self.rhs == other.rhs
        return super().__eq__(other)

    __hash__ = None

    def to_latex(self) -> str:
        return f"{super().to_latex()} = {latex(self.rhs.as_expr())}"

    def residual(self, kernel: DeltaKernel) -> DeltaKernel:
        return act(self, kernel) - kernel.scale(self.rhs)


def _falling(m: int, g: int) -> int:
    return factorial(m) // factorial(m - g)


def act(op: NormalOrderedOperator, kernel: DeltaKernel) -> DeltaKernel:
    """Apply a normal-ordered operator to a delta kernel.

    Coordinatewise d delta^{(m)} = delta^{(m+1)} and x delta^{(m)} = -m delta^{(m-1)}.

    Raises:
        ValueError: "coordinate mismatch" if the operator lives on another chart
    """
    if getattr(op, "n", None) != kernel.n or op.nvars != len(kernel.coords):
        raise ValueError(f"coordinate mismatch: operator on {op.nvars} coordinates, kernel on {len(kernel.coords)}")
    result: Dict[Orders, FracElement] = {}
    zero = kernel.field.zero
    for (gexp, dexp), coeff in op.sorted_terms():
        for orders, value in kernel.terms.items():
            raised = [m + d for m, d in zip(orders, dexp)]
            if any(g > m for g, m in zip(gexp, raised)):
                continue
            weight = 1
            for g, m in zip(gexp, raised):
                weight *= (-1) ** g * _falling(m, g)
            target = tuple(m - g for m, g in zip(raised, gexp))
            result[target] = result.get(target, zero) + coeff * value * weight
    return DeltaKernel(kernel.n, result, kernel.field)


class GeneratorKind(str, Enum):
    """One-parameter directions of the stabiliser x_k^{-1} P_H x_k."""
    GAMMA = "gamma"          # diag(t,..,t,1,..,1) on the first l entries of H
    DELTA = "delta"          # diag(1,..,1,t,..,t) on the last l entries of H
    UNIPOTENT = "unipotent"  # 1 + t E_ab in N_H, a < b <= n


@dataclass(frozen=True)
class Generator:
    kind: GeneratorKind
    a: int
    b: int = 0

    @classmethod
    def parse(cls, tag: str) -> "Generator":
        """"gamma1", "delta2" or "E12"."""
        for kind in (GeneratorKind.GAMMA, GeneratorKind.DELTA):
            if tag.startswith(kind.value):
                return cls(kind, int(tag[len(kind.value):]))
        if tag.startswith("E") and len(tag) == 3 and tag[1:].isdigit():
            return cls(GeneratorKind.UNIPOTENT, int(tag[1]), int(tag[2]))
        raise ValueError(f"unknown generator tag: {tag}")

    @property
    def tag(self) -> str:
        if self.kind is GeneratorKind.UNIPOTENT:
            return f"E{self.a}{self.b}"
        return f"{self.kind.value}{self.a}"

    def h_matrix(self, n: int) -> Matrix:
        """The Lie algebra element Y of P_H (n x n)."""
        Y = zeros(n, n)
        if self.kind is GeneratorKind.UNIPOTENT:
            if not 1 <= self.a < self.b <= n:
                raise ValueError(f"index out of range: unipotent direction E{self.a}{self.b} for n={n}")
            Y[self.a - 1, self.b - 1] = 1
            return Y
        validate_index(self.a, 1, n, f"{self.kind.value} length")
        rows = range(self.a) if self.kind is GeneratorKind.GAMMA else range(n - self.a, n)
        for i in rows:
            Y[i, i] = 1
        return Y

    def g_matrix(self, k: int, n: int) -> Matrix:
        """X = x_k^{-1} diag(Y, 0) x_k in the Lie algebra of G."""
        embedded = zeros(n + 1, n + 1)
        embedded[:n, :n] = self.h_matrix(n)
        x = x_k_matrix(k, n)
        return x.T * embedded * x

    def sign_character(self, p: InductionParams, k: int) -> int:
        """Parity picked up by the kernel under conjugation with the element at t = -1."""
        if self.kind is GeneratorKind.UNIPOTENT:
            return 0
        Y = self.h_matrix(p.n)
        X = self.g_matrix(k, p.n)
        total = sum(p.eta[i] for i in range(p.n) if Y[i, i] == 1)
        total += sum(p.xi[i] for i in range(p.n + 1) if X[i, i] == 1)
        return total % 2

    def flipped_coordinates(self, k: int, n: int) -> List[int]:
        """Chart coordinates whose sign changes under the element at t = -1."""
        if self.kind is GeneratorKind.UNIPOTENT:
            return []
        X = self.g_matrix(k, n)
        return [v for v, (i, j) in enumerate(lower_coordinates(n)) if X[i - 1, i - 1] != X[j - 1, j - 1]]


def catalogued_generators(k: int, n: int) -> List[Generator]:
    """gamma_l for l <= k, delta_l for l <= n-k, and the unipotent directions of N_H."""
    validate_index(k, 0, n, "k")
    generators = [Generator(GeneratorKind.GAMMA, ell) for ell in range(1, k + 1)]
    generators += [Generator(GeneratorKind.DELTA, ell) for ell in range(1, n - k + 1)]
    generators += [Generator(GeneratorKind.UNIPOTENT, a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)]
    return generators


def _gauss_decompose(M: Matrix) -> Tuple[Matrix, Matrix]:
    """M = L U with L unit lower triangular and U upper triangular, no pivoting.

    Raises:
        ValueError: "decomposition singular" if a pivot vanishes identically
    """
    size = M.rows
    U = M.copy()
    L = eye(size)
    for c in range(size):
        pivot = cancel(U[c, c])
        if pivot == 0:
            raise ValueError(f"decomposition singular at pivot {c + 1}")
        for r in range(c + 1, size):
            factor = cancel(U[r, c] / pivot)
            if factor == 0:
                continue
            L[r, c] = factor
            for j in range(size):
                U[r, j] = cancel(U[r, j] - factor * U[c, j])
    return L, U


def _chart_poly(expr, coordinate_symbols) -> Dict[Tuple[int, ...], Rational]:
    expr = cancel(expr)
    numer, denom = expr.as_numer_denom()
    if denom != 1:
        raise RuntimeError(f"non-polynomial infinitesimal action: {expr}")
    if numer == 0:
        return {}
    return dict(Poly(numer, *coordinate_symbols).terms())


def derive_pde(
    k: int,
    generator: Any,
    n: int = 2,
    params: Optional[InductionParams] = None,
) -> PdeOperator:
    """Equivariance equation of K_k along one direction of x_k^{-1} P_H x_k.

    Solves (1 + tX) nbar = nbar(t) p(t) exactly, differentiates at t = 0 and
    returns sum nbar'_ij d_ij + sum (lambda_i - rho_i) p'_ii = sum (nu_i + rho_i) Y_ii.
    Euler-type equations are scaled so their derivative part has coefficient 1.

    Args:
        k: Support index 0..n
        generator: A :class:`Generator` or its tag ("gamma1", "delta1", "E12")
        n: Size
        params: Parameters to substitute for lambda and nu; symbolic if omitted

    Raises:
        ValueError: "decomposition singular" if a Gauss pivot vanishes identically
    """
    validate_index(k, 0, n, "k")
    if isinstance(generator, str):
        generator = Generator.parse(generator)
    p = params if params is not None else InductionParams.symbolic(n)
    K = parameter_field(n)
    coords = lower_coordinates(n)
    names = coordinate_names(n)
    coord_symbols = symbols(" ".join(names), seq=True)
    t = symbols("t")
    nbar = eye(n + 1)
    for (i, j), sym in zip(coords, coord_symbols):
        nbar[i - 1, j - 1] = sym
    X = generator.g_matrix(k, n)
    Y = generator.h_matrix(n)
    L, U = _gauss_decompose((eye(n + 1) + t * X) * nbar)
    zero = (0,) * len(coords)
    terms: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], FracElement] = {}

    def add(key, value):
        terms[key] = terms.get(key, K.zero) + value

    for v, (i, j) in enumerate(coords):
        velocity = L[i - 1, j - 1].diff(t).subs(t, 0)
        dexp = tuple(1 if w == v else 0 for w in range(len(coords)))
        for monom, coeff in _chart_poly(velocity, coord_symbols).items():
            add((tuple(monom), dexp), to_field(K, coeff))
    rho_g = rho_G(n)
    for i in range(n + 1):
        weight = (p.lam[i] - rho_g[i]).to_element(K)
        for monom, coeff in _chart_poly(U[i, i].diff(t).subs(t, 0), coord_symbols).items():
            add((tuple(monom), zero), weight * to_field(K, coeff))
    rho_h = rho_H(n)
    rhs = K.zero
    for i in range(n):
        if Y[i, i]:
            rhs += (p.nu[i] + rho_h[i]).to_element(K) * to_field(K, Y[i, i])
    scalar = terms.pop((zero, zero), K.zero)
    op = PdeOperator(n, K, terms, rhs - scalar)
    euler = [c for (g, d), c in op.terms.items() if g == d and sum(g) == 1]
    if op.terms and len(euler) == len(op.terms):
        lead = op.sorted_terms()[0][1]
        op = PdeOperator(n, K, {key: c / lead for key, c in op.terms.items()}, op.rhs / lead)
    logger.debug(f"Derived equation k={k}, {generator.tag}: {op.to_latex()}")
    return op


def derive_system(k: int, n: int = 2, params: Optional[InductionParams] = None) -> Dict[str, PdeOperator]:
    """Every catalogued equation for K_k, keyed by generator tag."""
    return {g.tag: derive_pde(k, g, n, params) for g in catalogued_generators(k, n)}


def _constant(form: Any, what: str) -> Rational:
    try:
        return as_rational(form)
    except ValueError:
        raise ValueError(f"integrality undecidable: {what} = {form} is not a number")


def _natural(value: Rational) -> bool:
    return value.is_integer and value >= 0


@dataclass
class KernelSpace:
    """Exact solution space of the equivariance system at one parameter point."""
    k: int
    basis: List[DeltaKernel]
    candidates: List[Orders] = field(default_factory=list)
    reasons: List[str] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def to_json(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "dimension": self.dimension,
            "basis": [kernel.to_json() for kernel in self.basis],
            "reasons": list(self.reasons),
        }


def _candidate_orders(system: Dict[str, PdeOperator], n: int, reasons: List[str]) -> List[Orders]:
    """Order vectors allowed by the Euler equations."""
    size = len(lower_coordinates(n))
    origin = DeltaKernel.delta((0,) * size, n)
    bound = 0
    euler = []
    for tag, op in system.items():
        if any(g != d or sum(g) != 1 for g, d in op.terms):
            continue
        euler.append(op)
        # sum_v w_v m_v equals the residual coefficient on delta^{(0)}
        total = _constant(op.residual(origin).coefficient((0,) * size), f"homogeneity of {tag}")
        weights = [as_rational(c) for c in op.terms.values()]
        if all(w < 0 for w in weights):
            total, weights = -total, [-w for w in weights]
        elif not all(w > 0 for w in weights):
            raise RuntimeError(f"mixed-sign Euler equation {tag}")
        if total < 0:
            reasons.append(f"homogeneity degree {total} of {tag} is negative")
            return []
        bound = max(bound, int(total / min(weights)))
    candidates = [
        orders
        for orders in product(range(bound + 1), repeat=size)
        if all(not op.residual(DeltaKernel.delta(orders, n)) for op in euler)
    ]
    if not candidates:
        reasons.append("no order vector satisfies the homogeneity equations")
    return candidates


def _nullspace(rows: List[List[FracElement]], columns: int, K: FracField) -> List[List[FracElement]]:
    rows = [row for row in rows if any(row)]
    if not rows:
        return [[K.one if i == j else K.zero for j in range(columns)] for i in range(columns)]
    matrix = DomainMatrix(rows, (len(rows), columns), K.to_domain())
    return matrix.nullspace().to_list()


def solve_kernels(p: InductionParams, k: int) -> KernelSpace:
    """All kernels at the origin for (xi, lambda, eta, nu), by exact linear algebra.

    Raises:
        ValueError: "unsupported n" for n != 2, "integrality undecidable" for symbolic degrees
    """
    if p.n != 2:
        raise ValueError(f"unsupported n: the kernel solver is closed for n = 2, got {p.n}")
    validate_index(k, 0, p.n, "k")
    n = p.n
    K = parameter_field(n)
    system = derive_system(k, n, p)
    reasons: List[str] = []
    candidates = _candidate_orders(system, n, reasons)
    for generator in catalogued_generators(k, n):
        flips = generator.flipped_coordinates(k, n)
        if not flips:
            continue
        required = generator.sign_character(p, k)
        kept = [o for o in candidates if sum(o[v] for v in flips) % 2 == required]
        if len(kept) < len(candidates):
            reasons.append(f"parity condition of {generator.tag} fails")
        candidates = kept
    if not candidates:
        logger.info(f"Kernel space k={k} at {p.to_json()}: dimension 0")
        return KernelSpace(k, [], [], reasons)
    index = {orders: c for c, orders in enumerate(candidates)}
    equations: Dict[Tuple[str, Orders], List[FracElement]] = {}
    for c, orders in enumerate(candidates):
        for tag, op in system.items():
            image = op.residual(DeltaKernel.delta(orders, n))
            for target, coeff in image.terms.items():
                row = equations.setdefault((tag, target), [K.zero] * len(candidates))
                row[c] += coeff
    basis = []
    for vector in _nullspace(list(equations.values()), len(candidates), K):
        kernel = DeltaKernel(n, {orders: vector[index[orders]] for orders in candidates}, K)
        if kernel:
            basis.append(kernel.normalized())
    logger.info(f"Kernel space k={k} at {p.to_json()}: dimension {len(basis)}")
    return KernelSpace(k, basis, candidates, reasons)


def span_rank(kernels: Sequence[DeltaKernel]) -> int:
    """Rank of the coefficient vectors of a family of kernels."""
    kernels = [kernel for kernel in kernels if kernel]
    if not kernels:
        return 0
    K = kernels[0].field
    orders = sorted({o for kernel in kernels for o in kernel.terms})
    rows = [[kernel.coefficient(o) for o in orders] for kernel in kernels]
    return DomainMatrix(rows, (len(rows), len(orders)), K.to_domain()).rank()


def same_span(first: Sequence[DeltaKernel], second: Sequence[DeltaKernel]) -> bool:
    r = span_rank(first)
    return r == span_rank(second) == span_rank(list(first) + list(second))


class KernelCase(str, Enum):
    """Which displayed Pochhammer sum of the n = 2 classification."""
    FULL = "full"    # j = 0..N
    UPPER = "upper"  # k = 1, j = l0+1..N, the vanishing denominator factor removed
    LOWER = "lower"  # k = 1, j = 0..k0


def degrees(p: InductionParams, k: int) -> Tuple[Rational, Rational]:
    """(n_1, n_2): the homogeneity degrees of the kernel at support index k (n = 2)."""
    lam, nu = p.lam, p.nu
    if k == 1:
        pair = (nu[0] - lam[0] - HALF, lam[2] - nu[1] - HALF)
    elif k == 2:
        pair = (nu[0] - lam[0] - HALF, nu[0] + nu[1] - lam[0] - lam[1] - 1)
    elif k == 0:
        pair = (lam[2] - nu[1] - HALF, lam[1] + lam[2] - nu[0] - nu[1] - 1)
    else:
        raise ValueError(f"index out of range: k={k} for n=2")
    return _constant(pair[0], "n_1"), _constant(pair[1], "n_2")


def _parities(p: InductionParams, k: int) -> Tuple[int, int]:
    xi, eta = p.xi, p.eta
    if k == 1:
        return (xi[0] + eta[0]) % 2, (eta[1] + xi[2]) % 2
    if k == 2:
        return (xi[0] + eta[0]) % 2, (xi[0] + eta[0] + xi[1] + eta[1]) % 2
    return (eta[1] + xi[2]) % 2, (eta[0] + xi[1] + eta[1] + xi[2]) % 2


def _kernel_orders(k: int, n1: int, n2: int, j: int) -> Orders:
    if k == 0:
        return (n2 - j, n1 - j, j)
    return (n1 - j, n2 - j, j)


@dataclass
class CaseData:
    """The integers of the n = 2 case analysis at one parameter point."""
    k: int
    n1: Rational
    n2: Rational
    admissible: bool
    pivots: List[int] = field(default_factory=list)      # l0 (k = 1) or k0 (k = 0, 2)
    secondary: List[int] = field(default_factory=list)   # k0 (k = 1)

    @property
    def top(self) -> int:
        return int(min(self.n1, self.n2))


def case_data(p: InductionParams, k: int) -> CaseData:
    """Degrees, parity admissibility and the integer loci of the three n = 2 propositions."""
    n1, n2 = degrees(p, k)
    admissible = _natural(n1) and _natural(n2)
    if admissible:
        admissible = _parities(p, k) == (int(n1) % 2, int(n2) % 2)
    data = CaseData(k, n1, n2, admissible)
    if not admissible:
        return data
    lam = p.lam
    top = data.top
    if k == 1:
        a = _constant(lam[0] - lam[2] + n1 + n2, "lambda_1 - lambda_3 + n_1 + n_2")
        b = _constant(lam[1] - lam[2] + n2, "lambda_2 - lambda_3 + n_2")
        data.pivots = [int(a)] if a.is_integer and 0 <= a <= top - 1 else []
        data.secondary = [int(b)] if b.is_integer and 0 <= b <= top - 1 else []
    else:
        shift = lam[0] - lam[1] + n1 - n2 if k == 2 else lam[2] - lam[1] - n1
        c = _constant(shift, "Pochhammer base")
        data.pivots = [int(-c)] if (-c).is_integer and 0 <= -c <= int(n2) else []
    return data


def _parity_of(value: Rational) -> int:
    return int(value) % 2 if value.is_integer else 0


def params_for_degrees(
    k: int,
    n1: Any,
    n2: Any,
    lam: Sequence[Any],
    xi: Sequence[int] = (0, 0, 0),
    flip_parity: bool = False,
) -> InductionParams:
    """Parameters at n = 2 whose degrees at support index k are (n1, n2).

    nu is solved from lambda so that :func:`degrees` returns (n1, n2) and eta
    is chosen to meet the parity conditions (or to violate them when
    ``flip_parity`` is set). A non-integral degree counts as even.
    """
    validate_index(k, 0, 2, "k")
    n1, n2 = as_rational(n1), as_rational(n2)
    lam = [AffineForm.coerce(v) for v in lam]
    p1, p2 = _parity_of(n1), _parity_of(n2)
    if k == 1:
        nu = (lam[0] + n1 + HALF, lam[2] - n2 - HALF)
        eta = [(p1 - xi[0]) % 2, (p2 - xi[2]) % 2]
    elif k == 2:
        nu = (lam[0] + n1 + HALF, lam[1] + n2 - n1 + HALF)
        eta = [(p1 - xi[0]) % 2, (p2 - p1 - xi[1]) % 2]
    else:
        nu = (lam[1] + n1 - n2 - HALF, lam[2] - n1 - HALF)
        eta = [(p2 - p1 - xi[1]) % 2, (p1 - xi[2]) % 2]
    if flip_parity:
        eta[0] = 1 - eta[0]
    return InductionParams.build(lam, nu, xi=tuple(xi), eta=tuple(eta))


def predicted_dimension(p: InductionParams, k: int) -> int:
    """Dimension of the kernel space read off from the n = 2 case analysis."""
    if p.n != 2:
        raise ValueError(f"unsupported n: case analysis exists for n = 2, got {p.n}")
    data = case_data(p, k)
    if not data.admissible:
        return 0
    if k == 1:
        if data.pivots and data.secondary and data.secondary[0] <= data.pivots[0]:
            return 2
        return 1
    if data.n1 <= data.n2:
        return 1
    return 1 if data.pivots else 0


def _k1_coefficient(
    j: int,
    n1: int,
    n2: int,
    lam: Sequence[FracElement],
    skip: Optional[int] = None,
    numer_skip: Optional[int] = None,
) -> FracElement:
    """(-1)^j (-n1)_j (-n2)_j (l3-l2-n2)_j / ((l3-l1-n1-n2)_j j!).

    The denominator factor ``skip`` and the numerator factor ``numer_skip`` of
    the two lambda-dependent Pochhammer symbols are left out.
    """
    K = lam[0].field
    numer = pochhammer(to_field(K, -n1), j) * pochhammer(to_field(K, -n2), j)
    for i in range(j):
        if i != numer_skip:
            numer *= lam[2] - lam[1] - n2 + i
    base = lam[2] - lam[0] - n1 - n2
    denom = K.one * factorial(j)
    for i in range(j):
        if i != skip:
            denom *= base + i
    return numer / denom * (-1) ** j


def closed_form_kernel(k: int, case: Any, p: InductionParams) -> DeltaKernel:
    """The displayed Pochhammer sum for support index k at n = 2.

    k = 2: sum (-1)^j (-n1)_j (l1-l2+n1-n2)_j / j! delta^{(n1-j)}(x) delta^{(n2-j)}(y) delta^{(j)}(z)
    k = 0: sum (-1)^j (-n1)_j (l3-l2-n1)_j / j! delta^{(n2-j)}(x) delta^{(n1-j)}(y) delta^{(j)}(z)
    k = 1: the FULL, UPPER or LOWER sums of the three-case classification.

    Raises:
        ValueError: "case preconditions violated" if the parameters are not in the case
    """
    case = KernelCase(case)
    if p.n != 2:
        raise ValueError(f"unsupported n: closed forms exist for n = 2, got {p.n}")
    data = case_data(p, k)
    if not data.admissible:
        raise ValueError(f"case preconditions violated: degrees ({data.n1}, {data.n2}) or parities not admissible for k={k}")
    K = parameter_field(2)
    lam = [v.to_element(K) for v in p.lam]
    n1, n2, top = int(data.n1), int(data.n2), data.top
    terms: Dict[Orders, FracElement] = {}
    if k in (0, 2):
        if case is not KernelCase.FULL or predicted_dimension(p, k) == 0:
            raise ValueError(f"case preconditions violated: k={k} has the full sum only, in dimension one")
        base = lam[0] - lam[1] + n1 - n2 if k == 2 else lam[2] - lam[1] - n1
        for j in range(top + 1):
            coeff = pochhammer(to_field(K, -n1), j) * pochhammer(base, j) * to_field(K, Rational((-1) ** j, factorial(j)))
            terms[_kernel_orders(k, n1, n2, j)] = coeff
        return DeltaKernel(2, terms, K)
    numer_skip = None
    if case is KernelCase.FULL:
        if data.pivots:
            raise ValueError(f"case preconditions violated: lambda_1 - lambda_3 + n_1 + n_2 = {data.pivots[0]} <= N-1")
        js, skip = range(top + 1), None
    elif case is KernelCase.UPPER:
        if not data.pivots:
            raise ValueError("case preconditions violated: no l0 <= N-1 with lambda_1 - lambda_3 + n_1 + n_2 = l0")
        js, skip = range(data.pivots[0] + 1, top + 1), data.pivots[0]
        # at the multiplicity-two locus the numerator vanishes at k0 as well
        if data.secondary and data.secondary[0] <= data.pivots[0]:
            numer_skip = data.secondary[0]
    else:
        if not (data.pivots and data.secondary and data.secondary[0] <= data.pivots[0]):
            raise ValueError("case preconditions violated: need 0 <= k0 <= l0 <= N-1 at the multiplicity-two locus")
        js, skip = range(data.secondary[0] + 1), None
    for j in js:
        terms[_kernel_orders(1, n1, n2, j)] = _k1_coefficient(j, n1, n2, lam, skip, numer_skip)
    return DeltaKernel(2, terms, K)


def closed_form_basis(p: InductionParams, k: int) -> List[DeltaKernel]:
    """Closed-form kernels spanning the predicted space (empty in dimension zero)."""
    dimension = predicted_dimension(p, k)
    if dimension == 0:
        return []
    if k != 1:
        return [closed_form_kernel(k, KernelCase.FULL, p)]
    data = case_data(p, k)
    if dimension == 2:
        return [closed_form_kernel(1, KernelCase.UPPER, p), closed_form_kernel(1, KernelCase.LOWER, p)]
    return [closed_form_kernel(1, KernelCase.UPPER if data.pivots else KernelCase.FULL, p)]


def recurrence_holds(kernel: DeltaKernel, p: InductionParams) -> bool:
    """(l1-l3+n1+n2-j)(j+1) c_{j+1} = -(l2-l3+n2-j)(n1-j)(n2-j) c_j for j < N (k = 1)."""
    n1, n2 = (int(v) for v in degrees(p, 1))
    K = kernel.field
    lam = [v.to_element(K) for v in p.lam]
    for j in range(min(n1, n2)):
        c_j = kernel.coefficient(_kernel_orders(1, n1, n2, j))
        c_next = kernel.coefficient(_kernel_orders(1, n1, n2, j + 1))
        lhs = (lam[0] - lam[2] + n1 + n2 - j) * (j + 1) * c_next
        rhs = -(lam[1] - lam[2] + n2 - j) * (n1 - j) * (n2 - j) * c_j
        if lhs != rhs:
            return False
    return True
