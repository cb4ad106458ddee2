"""Covariant functions on GL_{n+1}.

Polynomials in the matrix entries g_ij (minors kappa_k, theta_l and the
polynomials Phi_i, Psi_i), the formal-power kernel K and the restriction maps
f -> f(diag(h, 1) x_k). Operators from :mod:`sbo_workbench.weyl_algebra` act on
:class:`FunctionCombination` through :func:`apply_weyl`.

Formal-power mode: |x|^s_xi is represented by the formal power x^s. Parities
are tracked separately by :mod:`sbo_workbench.parameters`.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from sympy import Matrix, eye, latex, symbols, zeros
from sympy.polys.fields import FracElement
from sympy.polys.rings import PolyElement, PolyRing, ring

from .exact_algebra import leibniz_expansion, parameter_field, to_field
from .parameters import to_spectral
from .validators import validate_index

logger = logging.getLogger(__name__)


class MinorKind(str, Enum):
    """Catalogued minors of the kernel."""
    KAPPA = "kappa"  # bottom-left k x k block
    THETA = "theta"  # rows n+1-l..n, cols 1..l


class FunctionKind(str, Enum):
    """The two families of covariant polynomials."""
    PHI = "Phi"
    PSI = "Psi"


def entry_names(n: int, letter: str = "g", size: Optional[int] = None) -> List[str]:
    size = n + 1 if size is None else size
    return [f"{letter}{i}{j}" for i in range(1, size + 1) for j in range(1, size + 1)]


@lru_cache(maxsize=None)
def entry_ring(n: int) -> PolyRing:
    """Polynomials in g_ij, 1 <= i, j <= n+1, with coefficients in the parameter field."""
    R, *_ = ring(",".join(entry_names(n)), parameter_field(n).to_domain())
    return R


@lru_cache(maxsize=None)
def h_ring(n: int) -> PolyRing:
    """Polynomials in h_ij, 1 <= i, j <= n, the entries of the GL_n factor."""
    R, *_ = ring(",".join(entry_names(n, "h", n)), parameter_field(n).to_domain())
    return R


def entry(n: int, i: int, j: int) -> PolyElement:
    """The coordinate g_ij in :func:`entry_ring`."""
    return entry_ring(n).gens[(i - 1) * (n + 1) + (j - 1)]


def h_entry(n: int, i: int, j: int) -> PolyElement:
    return h_ring(n).gens[(i - 1) * n + (j - 1)]


def _block_det(n: int, rows: Sequence[int], cols: Sequence[int]) -> PolyElement:
    matrix = [[entry(n, r, c) for c in cols] for r in rows]
    return leibniz_expansion(matrix, zero=entry_ring(n).zero)


@lru_cache(maxsize=None)
def minor(kind: Union[MinorKind, str], index: int, n: int) -> PolyElement:
    """kappa_k (rows n+2-k..n+1, cols 1..k) or theta_l (rows n+1-l..n, cols 1..l)."""
    kind = MinorKind(kind)
    if kind is MinorKind.KAPPA:
        validate_index(index, 1, n + 1, "kappa index")
        rows = range(n + 2 - index, n + 2)
    else:
        validate_index(index, 1, n, "theta index")
        rows = range(n + 1 - index, n + 1)
    return _block_det(n, list(rows), list(range(1, index + 1)))


def h_determinant(n: int) -> PolyElement:
    """det(h) in :func:`h_ring`."""
    matrix = [[h_entry(n, r, c) for c in range(1, n + 1)] for r in range(1, n + 1)]
    return leibniz_expansion(matrix, zero=h_ring(n).zero)


def _swap_columns(poly: PolyElement, i: int, n: int) -> PolyElement:
    """poly(g w_i): columns i and i+1 of g exchanged."""
    pairs = []
    for a in range(1, n + 2):
        pairs.append((entry(n, a, i), entry(n, a, i + 1)))
        pairs.append((entry(n, a, i + 1), entry(n, a, i)))
    return poly.compose(pairs)


@lru_cache(maxsize=None)
def phi_psi(kind: Union[FunctionKind, str], i: int, n: int) -> PolyElement:
    """Phi_i or Psi_i by iterated column-swap substitution.

    Phi_1 = g_{n+1,1} and Phi_{i+1}(g) = Phi_i(g w_i); Psi_{n+1} is the
    upper-left n x n determinant and Psi_i(g) = Psi_{i+1}(g w_i).
    """
    kind = FunctionKind(kind)
    validate_index(i, 1, n + 1, f"{kind.value} index")
    if kind is FunctionKind.PHI:
        if i == 1:
            return entry(n, n + 1, 1)
        return _swap_columns(phi_psi(kind, i - 1, n), i - 1, n)
    if i == n + 1:
        return _block_det(n, list(range(1, n + 1)), list(range(1, n + 1)))
    return _swap_columns(phi_psi(kind, i + 1, n), i, n)


@lru_cache(maxsize=None)
def catalogue(n: int) -> Tuple[Tuple[str, PolyElement], ...]:
    """The fixed base catalogue kappa_1..kappa_{n+1}, theta_1..theta_n."""
    bases = [(f"kappa{k}", minor(MinorKind.KAPPA, k, n)) for k in range(1, n + 2)]
    bases += [(f"theta{l}", minor(MinorKind.THETA, l, n)) for l in range(1, n + 1)]
    return tuple(bases)


@lru_cache(maxsize=None)
def _catalogue_partials(n: int) -> Tuple[Tuple[PolyElement, ...], ...]:
    R = entry_ring(n)
    return tuple(tuple(base.diff(v) for v in range(R.ngens)) for _, base in catalogue(n))


@dataclass(frozen=True)
class PowerProduct:
    """prefactor * prod_m base_m ** exponents[m] over the catalogue of size n."""
    prefactor: PolyElement
    exponents: Tuple[FracElement, ...]
    n: int

    def to_latex(self) -> str:
        parts = []
        if self.prefactor != 1:
            parts.append(f"\\left({latex(self.prefactor.as_expr())}\\right)")
        for (label, _), exponent in zip(catalogue(self.n), self.exponents):
            if exponent == 0:
                continue
            base = latex(symbols(label))
            if exponent == 1:
                parts.append(base)
            else:
                parts.append(f"{base}^{{{latex(exponent.as_expr())}}}")
        return " ".join(parts) if parts else "1"

    def as_combination(self) -> "FunctionCombination":
        zero = (0,) * len(self.exponents)
        return FunctionCombination(self.n, self.exponents, {zero: self.prefactor})


class FunctionCombination:
    """sum over offsets o of P_o * prod_m base_m ** (E_m + o_m).

    All summands share the exponent vector E (field elements); the integer
    offsets o record how differentiation moved each summand.
    """

    def __init__(self, n: int, exponents: Sequence[FracElement], summands: Dict[Tuple[int, ...], PolyElement]):
        self.n = n
        K = parameter_field(n)
        self.exponents = tuple(to_field(K, e) for e in exponents)
        self.summands = {off: poly for off, poly in summands.items() if poly}

    @classmethod
    def from_polynomial(cls, poly: PolyElement, n: int) -> "FunctionCombination":
        size = len(catalogue(n))
        return cls(n, (0,) * size, {(0,) * size: poly})

    @property
    def ring(self) -> PolyRing:
        return entry_ring(self.n)

    def __bool__(self) -> bool:
        return bool(self.summands)

    def _check(self, other: "FunctionCombination") -> None:
        if self.n != other.n or self.exponents != other.exponents:
            raise ValueError("size mismatch: combinations over different exponent vectors")

    def __add__(self, other: "FunctionCombination") -> "FunctionCombination":
        self._check(other)
        merged = dict(self.summands)
        for off, poly in other.summands.items():
            merged[off] = merged.get(off, self.ring.zero) + poly
        return FunctionCombination(self.n, self.exponents, merged)

    def __sub__(self, other: "FunctionCombination") -> "FunctionCombination":
        return self + other.scale(-1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FunctionCombination):
            return NotImplemented
        return not (self - other).normalize().summands

    __hash__ = None

    def scale(self, value: Any) -> "FunctionCombination":
        c = to_field(parameter_field(self.n), value)
        return FunctionCombination(
            self.n, self.exponents, {off: poly.mul_ground(c) for off, poly in self.summands.items()}
        )

    def multiply(self, poly: PolyElement) -> "FunctionCombination":
        return FunctionCombination(
            self.n, self.exponents, {off: p * poly for off, p in self.summands.items()}
        )

    def partial(self, var: int) -> "FunctionCombination":
        """Derivative in the coordinate with flat index ``var``."""
        partials = _catalogue_partials(self.n)
        zero = self.ring.zero
        result: Dict[Tuple[int, ...], PolyElement] = {}
        for off, poly in self.summands.items():
            dpoly = poly.diff(var)
            if dpoly:
                result[off] = result.get(off, zero) + dpoly
            for m, exponent in enumerate(self.exponents):
                dbase = partials[m][var]
                if not dbase:
                    continue
                power = exponent + off[m]
                if not power:
                    continue
                shifted = off[:m] + (off[m] - 1,) + off[m + 1:]
                result[shifted] = result.get(shifted, zero) + (poly * dbase).mul_ground(power)
        return FunctionCombination(self.n, self.exponents, result)

    def normalize(self) -> "FunctionCombination":
        """Divide catalogued bases out of the prefactors and merge like terms."""
        merged: Dict[Tuple[int, ...], PolyElement] = {}
        for off, poly in self.summands.items():
            off = list(off)
            for m, (_, base) in enumerate(catalogue(self.n)):
                while True:
                    quotient, remainder = poly.div(base)
                    if remainder:
                        break
                    poly = quotient
                    off[m] += 1
            key = tuple(off)
            merged[key] = merged.get(key, self.ring.zero) + poly
        return FunctionCombination(self.n, self.exponents, merged)

    def collapse(self) -> "FunctionCombination":
        """One summand: all terms over the common lowest offset, then normalized.

        A multiple b * prod base^delta of the kernel comes out as {delta: b}.
        """
        summands = {off: poly for off, poly in self.summands.items() if poly}
        if not summands:
            return FunctionCombination(self.n, self.exponents, {})
        bases = [base for _, base in catalogue(self.n)]
        floor = tuple(min(off[m] for off in summands) for m in range(len(bases)))
        total = self.ring.zero
        for off, poly in summands.items():
            term = poly
            for base, o, c in zip(bases, off, floor):
                if o > c:
                    term = term * base ** (o - c)
            total += term
        if not total:
            return FunctionCombination(self.n, self.exponents, {})
        return FunctionCombination(self.n, self.exponents, {floor: total}).normalize()

    def power_products(self) -> List[PowerProduct]:
        """Summands as PowerProducts, sorted by offset."""
        return [
            PowerProduct(poly, tuple(e + o for e, o in zip(self.exponents, off)), self.n)
            for off, poly in sorted(self.summands.items())
        ]

    def to_polynomial(self) -> PolyElement:
        """The underlying polynomial when no fractional powers are present.

        Raises:
            ValueError: "restriction defined on polynomial layer only"
        """
        if any(e != 0 for e in self.exponents) or any(o < 0 for off in self.summands for o in off):
            raise ValueError("restriction defined on polynomial layer only")
        bases = [base for _, base in catalogue(self.n)]
        total = self.ring.zero
        for off, poly in self.summands.items():
            term = poly
            for base, power in zip(bases, off):
                if power:
                    term = term * base ** power
            total += term
        return total

    def to_latex(self) -> str:
        if not self.summands:
            return "0"
        return " + ".join(pp.to_latex() for pp in self.power_products())


def kernel_exponents(params) -> List[Any]:
    """(s_1, ..., s_{n+1}, t_1, ..., t_n) of the formal kernel, as AffineForms."""
    spectral = to_spectral(params)
    return list(spectral.s) + list(spectral.t)


def kernel_K(params, mode: str = "formal-power") -> PowerProduct:
    """prod_k kappa_k^{s_k} prod_l theta_l^{t_l} with sign characters dropped."""
    if mode != "formal-power":
        raise ValueError(f"unsupported kernel mode: {mode}")
    K = parameter_field(params.n)
    exponents = tuple(to_field(K, e) for e in kernel_exponents(params))
    return PowerProduct(entry_ring(params.n).one, exponents, params.n)


def _flat(n: int, i: int, j: int) -> int:
    return (i - 1) * (n + 1) + (j - 1)


def apply_weyl(W, f: Union[FunctionCombination, PowerProduct, PolyElement]) -> FunctionCombination:
    """Leibniz action of a normal-ordered WeylElement on a FunctionCombination.

    Derivatives are built incrementally, one partial at a time, and shared
    between the terms of W.

    Raises:
        ValueError: "size mismatch" if W and f live over different n
    """
    if isinstance(f, PowerProduct):
        f = f.as_combination()
    elif isinstance(f, PolyElement):
        f = FunctionCombination.from_polynomial(f, W.size - 1)
    if W.size != f.n + 1:
        raise ValueError(f"size mismatch: operator of size {W.size} on functions of size {f.n + 1}")
    zero_key = (0,) * (W.size * W.size)
    derivatives: Dict[Tuple[int, ...], FunctionCombination] = {zero_key: f}

    def derivative(dexp: Tuple[int, ...]) -> FunctionCombination:
        if dexp in derivatives:
            return derivatives[dexp]
        var = next(v for v, e in enumerate(dexp) if e)
        lower = dexp[:var] + (dexp[var] - 1,) + dexp[var + 1:]
        result = derivative(lower).partial(var)
        derivatives[dexp] = result
        return result

    result = FunctionCombination(f.n, f.exponents, {})
    for (gexp, dexp), coeff in W.sorted_terms():
        derived = derivative(dexp)
        if not derived:
            continue
        summands = {off: poly.mul_monom(gexp).mul_ground(coeff) for off, poly in derived.summands.items()}
        result = result + FunctionCombination(f.n, f.exponents, summands)
    return result


def x_k_images(k: int, n: int) -> List[int]:
    """image[j] = row index of the 1 in column j of x_k (1-based)."""
    validate_index(k, 0, n, "k")
    images = []
    for j in range(1, n + 2):
        if j <= k:
            images.append(j)
        elif j == k + 1:
            images.append(n + 1)
        else:
            images.append(j - 1)
    return images


def x_k_matrix(k: int, n: int) -> Matrix:
    """The permutation matrix x_k: identity block k, shifted block, bottom row e_{k+1}."""
    images = x_k_images(k, n)
    matrix = zeros(n + 1, n + 1)
    for j, row in enumerate(images, start=1):
        matrix[row - 1, j - 1] = 1
    return matrix


def conjugation_is_upper_unipotent(k: int, n: int) -> bool:
    """x_k^{-1} diag(n_H, 1) x_k is upper unipotent for symbolic upper-unipotent n_H."""
    n_H = eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            n_H[i, j] = symbols(f"u{i + 1}{j + 1}")
    embedded = eye(n + 1)
    embedded[:n, :n] = n_H
    x = x_k_matrix(k, n)
    conjugate = (x.T * embedded * x).expand()
    for i in range(n + 1):
        for j in range(n + 1):
            if i > j and conjugate[i, j] != 0:
                return False
            if i == j and conjugate[i, j] != 1:
                return False
    return True


def _restriction_images(k: int, n: int) -> List[Optional[int]]:
    """Flat h-index (or -1 for the constant 1, None for 0) of each g_ij under g = diag(h,1) x_k."""
    images = x_k_images(k, n)
    result: List[Optional[int]] = []
    for a in range(1, n + 2):
        for j in range(1, n + 2):
            b = images[j - 1]
            if a <= n and b <= n:
                result.append((a - 1) * n + (b - 1))
            elif a == n + 1 and b == n + 1:
                result.append(-1)
            else:
                result.append(None)
    return result


def _restrict_monomial(gexp: Tuple[int, ...], images: List[Optional[int]], n: int) -> Optional[Tuple[int, ...]]:
    hexp = [0] * (n * n)
    for var, power in enumerate(gexp):
        if not power:
            continue
        image = images[var]
        if image is None:
            return None
        if image >= 0:
            hexp[image] += power
    return tuple(hexp)


def restrict_k(f: Union[FunctionCombination, PolyElement], k: int, n: Optional[int] = None) -> PolyElement:
    """f(diag(h, 1) x_k) as a polynomial in the h-entries.

    Raises:
        ValueError: "restriction defined on polynomial layer only" for fractional powers
    """
    if isinstance(f, FunctionCombination):
        n = f.n
        f = f.to_polynomial()
    elif n is None:
        n = int(round(f.ring.ngens ** 0.5)) - 1
    images = _restriction_images(k, n)
    terms: Dict[Tuple[int, ...], Any] = {}
    zero = parameter_field(n).zero
    for gexp, coeff in f.iterterms():
        hexp = _restrict_monomial(gexp, images, n)
        if hexp is None:
            continue
        terms[hexp] = terms.get(hexp, zero) + coeff
    return h_ring(n).from_dict({m: c for m, c in terms.items() if c})


def restrict_operator(W, k: int) -> Dict[Tuple[int, ...], PolyElement]:
    """rest_k o W collected by derivative multi-index.

    rest_k(W f) = sum_d c_d(h) * (partial^d f)(diag(h,1) x_k); the returned map
    is d -> c_d with zero coefficients dropped.
    """
    n = W.size - 1
    images = _restriction_images(k, n)
    R = h_ring(n)
    collected: Dict[Tuple[int, ...], Dict[Tuple[int, ...], Any]] = {}
    for (gexp, dexp), coeff in W.terms.items():
        hexp = _restrict_monomial(gexp, images, n)
        if hexp is None:
            continue
        bucket = collected.setdefault(dexp, {})
        bucket[hexp] = bucket.get(hexp, parameter_field(n).zero) + coeff
    result = {}
    for dexp, bucket in collected.items():
        poly = R.from_dict({m: c for m, c in bucket.items() if c})
        if poly:
            result[dexp] = poly
    return result


def left_equivariance_holds(n: int) -> bool:
    """Phi(hat h g) = Phi(g) and Psi(hat h g) = det(h) Psi(g) as polynomial identities."""
    g = Matrix(n + 1, n + 1, lambda i, j: symbols(f"g{i + 1}{j + 1}"))
    h = Matrix(n, n, lambda i, j: symbols(f"h{i + 1}{j + 1}"))
    hat = eye(n + 1)
    hat[:n, :n] = h
    translated = hat * g
    mapping = {g[i, j]: translated[i, j] for i in range(n + 1) for j in range(n + 1)}
    det_h = h.det()
    for i in range(1, n + 2):
        phi = phi_psi(FunctionKind.PHI, i, n).as_expr()
        psi = phi_psi(FunctionKind.PSI, i, n).as_expr()
        if (phi.xreplace(mapping) - phi).expand() != 0:
            return False
        if (psi.xreplace(mapping) - det_h * psi).expand() != 0:
            return False
    logger.debug(f"Left equivariance of Phi_i, Psi_i verified for n={n}")
    return True
