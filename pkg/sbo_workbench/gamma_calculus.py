"""Formal products of Gamma((affine form)/2)^{+-1}.

Every Gamma argument is stored doubled, as an AffineForm A standing for
Gamma(A/2), so integer shifts of the argument are even shifts of A and no
rational division is needed to detect them. Canonical form moves each
argument into the shift class with constant term in (0, 2] and pushes the
difference into the rational prefactor as a Pochhammer symbol.
"""
import logging
from dataclasses import dataclass, field
from math import ceil
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import Rational, latex, pi
from sympy.combinatorics import Permutation
from sympy.polys.fields import FracElement, FracField

from .constants import PARAMETER_PREFIXES
from .exact_algebra import AffineForm, is_constant, parameter_field, pochhammer, size_for_names, to_field
from .parameters import HALF, InductionParams, bracket, restriction_params
from .validators import validate_index, validate_length

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GammaExpr:
    """prefactor * pi^pi_power * prod Gamma(A/2)^e over (A, e) in factors."""
    prefactor: FracElement
    factors: Tuple[Tuple[AffineForm, int], ...] = ()
    pi_power: Rational = Rational(0)

    @classmethod
    def build(
        cls,
        field: FracField,
        prefactor: Any = 1,
        factors: Optional[Iterable[Tuple[AffineForm, int]]] = None,
        pi_power: Any = 0,
    ) -> "GammaExpr":
        merged: Dict[AffineForm, int] = {}
        for argument, exponent in factors or ():
            argument = AffineForm.coerce(argument)
            merged[argument] = merged.get(argument, 0) + exponent
        items = tuple(sorted(((a, e) for a, e in merged.items() if e), key=lambda item: item[0].sort_key()))
        return cls(to_field(field, prefactor), items, Rational(pi_power))

    @classmethod
    def gamma(cls, field: FracField, doubled_argument: Any, exponent: int = 1) -> "GammaExpr":
        """Gamma(doubled_argument / 2) ** exponent."""
        return cls.build(field, 1, [(AffineForm.coerce(doubled_argument), exponent)])

    @classmethod
    def one(cls, field: FracField) -> "GammaExpr":
        return cls.build(field)

    @property
    def field(self) -> FracField:
        return self.prefactor.field

    def __mul__(self, other: Any) -> "GammaExpr":
        if isinstance(other, GammaExpr):
            return GammaExpr.build(
                self.field,
                self.prefactor * other.prefactor,
                list(self.factors) + list(other.factors),
                self.pi_power + other.pi_power,
            )
        return GammaExpr.build(self.field, self.prefactor * to_field(self.field, other), self.factors, self.pi_power)

    __rmul__ = __mul__

    def inverse(self) -> "GammaExpr":
        if not self.prefactor:
            raise ZeroDivisionError("inverse of a vanishing Gamma expression")
        return GammaExpr.build(
            self.field, 1 / self.prefactor, [(a, -e) for a, e in self.factors], -self.pi_power
        )

    def __truediv__(self, other: Any) -> "GammaExpr":
        if isinstance(other, GammaExpr):
            return self * other.inverse()
        return self * (1 / to_field(self.field, other))

    def __pow__(self, exponent: int) -> "GammaExpr":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return GammaExpr.build(
            self.field, self.prefactor ** exponent, [(a, e * exponent) for a, e in self.factors], self.pi_power * exponent
        )

    @property
    def is_gamma_free(self) -> bool:
        return not self.factors

    @property
    def is_polynomial(self) -> bool:
        """Gamma-free with a polynomial prefactor and no pi."""
        return self.is_gamma_free and self.pi_power == 0 and self.prefactor.denom.is_ground

    def names(self) -> Tuple[str, ...]:
        """Parameter names the expression depends on."""
        found = {str(sym) for sym in self.field.symbols if _mentions(self.prefactor, sym)}
        for argument, _ in self.factors:
            found.update(argument.names)
        return tuple(sorted(found))

    def is_free_of(self, prefixes: Sequence[str]) -> bool:
        return not any(name.startswith(tuple(prefixes)) for name in self.names())

    def is_one(self) -> bool:
        canonical = canonicalize(self)
        return canonical.is_gamma_free and canonical.pi_power == 0 and canonical.prefactor == 1

    def to_latex(self) -> str:
        parts = []
        if self.prefactor != 1 or not (self.factors or self.pi_power):
            parts.append(f"\\left({latex(self.prefactor.as_expr())}\\right)")
        if self.pi_power:
            parts.append(latex(pi ** self.pi_power))
        numer = [f"\\Gamma\\left(\\frac{{{a.to_latex()}}}{{2}}\\right)" + (f"^{{{e}}}" if e > 1 else "") for a, e in self.factors if e > 0]
        denom = [f"\\Gamma\\left(\\frac{{{a.to_latex()}}}{{2}}\\right)" + (f"^{{{-e}}}" if e < -1 else "") for a, e in self.factors if e < 0]
        body = " ".join(parts + numer)
        if denom:
            return f"\\frac{{{body or '1'}}}{{{' '.join(denom)}}}"
        return body

    def to_json(self) -> Dict[str, Any]:
        return {
            "prefactor": str(self.prefactor.as_expr()),
            "pi_power": str(self.pi_power),
            "factors": [{"argument": f"({a})/2", "exponent": e} for a, e in self.factors],
        }

    def __str__(self) -> str:
        body = " * ".join(
            [f"({self.prefactor.as_expr()})"]
            + ([f"pi**({self.pi_power})"] if self.pi_power else [])
            + [f"gamma(({a})/2)**({e})" for a, e in self.factors]
        )
        return body


def _mentions(value: FracElement, symbol) -> bool:
    index = value.field.symbols.index(symbol)
    return any(m[index] for m in value.numer.monoms()) or any(m[index] for m in value.denom.monoms())


def _shift_class(argument: AffineForm) -> Tuple[AffineForm, int]:
    """(representative, m) with argument/2 = representative/2 + m, constant of representative in (0, 2]."""
    m = ceil(argument.constant / 2) - 1
    representative = AffineForm(argument.coefficients, argument.constant - 2 * m)
    return representative, int(m)


def canonicalize(e: GammaExpr) -> GammaExpr:
    """Reduce integer-shifted Gamma factors to Pochhammer polynomials.

    Constant arguments are evaluated where the value is classical
    (Gamma(1) = 1, Gamma(1/2) = sqrt(pi)); other constants stay symbolic.

    Raises:
        ValueError: "Gamma pole" if a constant argument is a nonpositive integer
    """
    K = e.field
    prefactor = e.prefactor
    pi_power = e.pi_power
    merged: Dict[AffineForm, int] = {}
    for argument, exponent in e.factors:
        representative, m = _shift_class(argument)
        y = (representative * HALF).to_element(K) if not representative.is_constant else to_field(K, representative.constant * HALF)
        if m > 0:
            prefactor = prefactor * pochhammer(y, m) ** exponent
        elif m < 0:
            shift = pochhammer(y + m, -m)
            if not shift:
                raise ValueError(f"Gamma pole at argument ({argument})/2")
            prefactor = prefactor * shift ** (-exponent)
        if representative.is_constant:
            if representative.constant == 2:
                continue
            if representative.constant == 1:
                pi_power += Rational(exponent, 2)
                continue
        merged[representative] = merged.get(representative, 0) + exponent
    return GammaExpr.build(K, prefactor, merged.items(), pi_power)


def non_integral_pairs(e: GammaExpr) -> List[Tuple[AffineForm, AffineForm]]:
    """Pairs of surviving factors whose arguments differ by a non-integer constant."""
    canonical = canonicalize(e)
    pairs = []
    arguments = [a for a, _ in canonical.factors]
    for i, first in enumerate(arguments):
        for second in arguments[i + 1:]:
            if first.difference(second) is not None:
                pairs.append((first, second))
    return pairs


def equivalent(first: GammaExpr, second: GammaExpr) -> bool:
    return (first / second).is_one()


def proportional(first: GammaExpr, second: GammaExpr) -> bool:
    """Ratio is a nonzero rational constant after canonicalization."""
    ratio = canonicalize(first / second)
    return ratio.is_gamma_free and ratio.pi_power == 0 and bool(ratio.prefactor) and is_constant(ratio.prefactor)


@dataclass(frozen=True)
class WeylWord:
    """Word w_{i_1} ... w_{i_l} in the simple transpositions of S_size."""
    letters: Tuple[int, ...]
    size: int

    def __post_init__(self):
        for letter in self.letters:
            validate_index(letter, 1, self.size - 1, "letter")

    @classmethod
    def longest(cls, size: int) -> "WeylWord":
        """A reduced word of the longest element of S_size."""
        return cls(tuple(j for i in range(size - 1, 0, -1) for j in range(1, i + 1)), size)

    def permutation(self) -> Permutation:
        perm = Permutation(list(range(self.size)))
        for letter in self.letters:
            perm = perm * Permutation(letter - 1, letter, size=self.size)
        return perm

    @property
    def length(self) -> int:
        return len(self.letters)

    def is_reduced(self) -> bool:
        return self.permutation().inversions() == self.length

    def act(self, values: Sequence[Any]) -> List[Any]:
        """Apply the letters left to right to a vector (w_{i_1} first)."""
        values = list(values)
        for letter in self.letters:
            values[letter - 1], values[letter] = values[letter], values[letter - 1]
        return values


def _field_for(values: Sequence[AffineForm]) -> FracField:
    names = [name for v in values for name in AffineForm.coerce(v).names]
    return parameter_field(size_for_names(names) if names else 1)


def simple_c_function(i: int, xi: Sequence[int], lam: Sequence[Any], field: Optional[FracField] = None) -> GammaExpr:
    """c_i(xi, lambda) for one simple transposition."""
    lam = [AffineForm.coerce(v) for v in lam]
    K = field or _field_for(lam)
    d = lam[i - 1] - lam[i]
    p = (xi[i - 1] + xi[i]) % 2
    sign = -1 if (xi[i - 1] + xi[i]) % 2 else 1
    return GammaExpr.build(
        K,
        sign,
        [(d + p, 1), (-d + p, 1), (d + 1 + p, -1), (-d + 1 + p, -1)],
        pi_power=1,
    )


def c_function(word: WeylWord, xi: Sequence[int], lam: Sequence[Any], field: Optional[FracField] = None) -> GammaExpr:
    """prod_j c_{i_j}(w_{i_{j-1}} ... w_{i_1}(xi, lambda))."""
    validate_length(lam, word.size, "lambda")
    validate_length(xi, word.size, "xi")
    lam = [AffineForm.coerce(v) for v in lam]
    K = field or _field_for(lam)
    result = GammaExpr.one(K)
    xi_cur, lam_cur = list(xi), list(lam)
    for letter in word.letters:
        result = result * simple_c_function(letter, xi_cur, lam_cur, K)
        xi_cur[letter - 1], xi_cur[letter] = xi_cur[letter], xi_cur[letter - 1]
        lam_cur[letter - 1], lam_cur[letter] = lam_cur[letter], lam_cur[letter - 1]
    return result


def gamma_factor_pairs(n: int) -> Tuple[List[Tuple[int, int]], List[Tuple[int, int]]]:
    """Index pairs (i, j) with i + j <= n+1 and with i + j >= n+2."""
    pairs = [(i, j) for i in range(1, n + 2) for j in range(1, n + 1)]
    return [pr for pr in pairs if sum(pr) <= n + 1], [pr for pr in pairs if sum(pr) >= n + 2]


def gamma_normalizer(p: InductionParams, skip: Iterable[Tuple[int, int]] = ()) -> GammaExpr:
    """gamma(xi, lambda, eta, nu), optionally without the factors of the pairs in ``skip``."""
    K = parameter_field(p.n)
    skip = set(skip)
    lower, upper = gamma_factor_pairs(p.n)
    factors = []
    for i, j in lower:
        if (i, j) not in skip:
            factors.append((p.lam[i - 1] - p.nu[j - 1] + HALF + (p.xi[i - 1] + p.eta[j - 1]) % 2, 1))
    for i, j in upper:
        if (i, j) not in skip:
            factors.append((p.nu[j - 1] - p.lam[i - 1] + HALF + (p.eta[j - 1] + p.xi[i - 1]) % 2, 1))
    return GammaExpr.build(K, 1, factors)


def e_functions(side: str, parities: Sequence[int], values: Sequence[Any], field: Optional[FracField] = None) -> GammaExpr:
    """prod_{i<j} Gamma((v_i - v_j + 1 + [p_i + p_j])/2)^{-1}; ``side`` only labels the group."""
    if side not in ("G", "H"):
        raise ValueError(f"unknown side: {side}")
    validate_length(parities, len(values), "parities")
    values = [AffineForm.coerce(v) for v in values]
    K = field or _field_for(values)
    factors = [
        (values[i] - values[j] + 1 + (parities[i] + parities[j]) % 2, -1)
        for i in range(len(values))
        for j in range(i + 1, len(values))
    ]
    return GammaExpr.build(K, 1, factors)


def bs_scalar(kind: str, i: int, alpha: int, p: InductionParams) -> GammaExpr:
    """Gamma-ratio form of p_i^(alpha) (kind "p") or q_i^(alpha) (kind "q"), constant set to 1."""
    if kind not in ("p", "q"):
        raise ValueError(f"unknown Bernstein-Sato scalar kind: {kind}")
    validate_index(i, 1, p.n + 1, "i")
    if alpha < 0:
        raise ValueError(f"alpha must be natural, got {alpha}")
    K = parameter_field(p.n)
    factors = []
    for j in range(1, p.n + 1):
        x = p.nu[j - 1] - p.lam[i - 1] if kind == "p" else p.lam[i - 1] - p.nu[j - 1]
        parity = p.xi[i - 1] + p.eta[j - 1]
        factors.append((x + HALF + alpha + (parity + alpha) % 2, 1))
        factors.append((x + HALF + parity % 2, -1))
    return GammaExpr.build(K, 1, factors)


def bs_target(kind: str, i: int, p: InductionParams, alpha: int = 1) -> InductionParams:
    """Parameters of the shifted kernel: (xi,lambda)+alpha(e_i,e_i) for D, plus hat e_i and (1,1) on H for F."""
    if kind in ("D", "q"):
        unit = [alpha if j == i - 1 else 0 for j in range(p.n + 1)]
        return p.shifted(d_lam=unit, d_xi=unit)
    if kind in ("F", "p"):
        hat = [0 if j == i - 1 else alpha for j in range(p.n + 1)]
        ones = [alpha] * p.n
        return p.shifted(d_lam=hat, d_xi=hat, d_nu=ones, d_eta=ones)
    raise ValueError(f"unknown operator kind: {kind}")


def expected_bs_factor(kind: str, i: int, p: InductionParams, alpha: int = 1) -> GammaExpr:
    """canonicalize(bs_scalar * gamma(p) / gamma(p')): the factor for the unnormalised kernel K."""
    scalar_kind = "p" if kind == "F" else "q"
    target = bs_target(kind, i, p, alpha)
    return canonicalize(bs_scalar(scalar_kind, i, alpha, p) * gamma_normalizer(p) / gamma_normalizer(target))


def x_k_params(p: InductionParams, k: int) -> InductionParams:
    """(x_k(xi, lambda), w_0^H(eta, nu)): position k+1 of (xi, lambda) moved last, (eta, nu) reversed."""
    xi = list(p.xi[:k]) + list(p.xi[k + 1:]) + [p.xi[k]]
    lam = list(p.lam[:k]) + list(p.lam[k + 1:]) + [p.lam[k]]
    return InductionParams(tuple(xi), tuple(lam), tuple(reversed(p.eta)), tuple(reversed(p.nu)), p.n)


@dataclass
class ResidueReport:
    k: int
    n: int
    passed: bool
    remainder: GammaExpr
    details: Dict[str, Any] = field(default_factory=dict)


def residue_scalar_check(k: int, n: int, xi: Optional[Sequence[int]] = None) -> ResidueReport:
    """Gamma bookkeeping of restriction as a residue; PASS iff the remainder is lambda-free.

    Raises:
        RuntimeError: "non-integral shift" if surviving factors differ by a non-integer
    """
    validate_index(k, 0, n, "k")
    p = restriction_params(InductionParams.symbolic(n, xi=xi), k)
    K = parameter_field(n)
    pre_h = GammaExpr.one(K)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            parity = (p.eta[i - 1] + p.eta[j - 1]) % 2
            pre_h = pre_h * GammaExpr.build(
                K, 1, [(p.nu[i - 1] - p.nu[j - 1] + 1 + parity, 1), (p.nu[j - 1] - p.nu[i - 1] + parity, -1)]
            )
    pre_g = GammaExpr.one(K)
    for i in range(k + 2, n + 2):
        parity = (p.xi[i - 1] + p.xi[k]) % 2
        pre_g = pre_g * GammaExpr.build(
            K, 1, [(p.lam[i - 1] - p.lam[k] + 1 + parity, 1), (p.lam[k] - p.lam[i - 1] + parity, -1)]
        )
    c_h = c_function(WeylWord.longest(n), p.eta, p.nu, K) if n > 1 else GammaExpr.one(K)
    c_g = c_function(WeylWord(tuple(range(k + 1, n + 1)), n + 1), p.xi, p.lam, K)
    residue_pairs = [(j, n + 1 - j) for j in range(1, k + 1)]
    gamma_prime = gamma_normalizer(x_k_params(p, k), skip=residue_pairs)
    scalar = pre_h * pre_g * c_h * c_g / gamma_prime
    e_g = e_functions("G", p.xi, p.lam, K)
    e_h = e_functions("H", p.eta, [-v for v in p.nu], K)
    remainder = canonicalize(scalar / (e_g * e_h))
    if remainder.factors and non_integral_pairs(remainder):
        raise RuntimeError(f"non-integral shift in residue bookkeeping at n={n}, k={k}: {remainder}")
    passed = remainder.is_free_of(list(PARAMETER_PREFIXES.values()))
    logger.info(f"Residue scalar n={n}, k={k}: {'λ-free ✓' if passed else 'depends on parameters'}")
    return ResidueReport(k, n, passed, remainder, {"remainder": str(remainder)})


def gamma_ratio(p: InductionParams) -> GammaExpr:
    """gamma(0, lambda', 0, nu') / gamma(xi, lambda, eta, nu) with the parity-absorbing shifts."""
    n = p.n

    def xi_at(index: int) -> int:
        return p.xi[index - 1] if 1 <= index <= n + 1 else 0

    def eta_at(index: int) -> int:
        return p.eta[index - 1] if 1 <= index <= n else 0

    lam_shift = [
        sum(bracket(xi_at(k) + eta_at(n + 1 - k)) + bracket(eta_at(n + 1 - k) + xi_at(k + 1)) for k in range(i, n + 2))
        for i in range(1, n + 2)
    ]
    nu_shift = [
        sum(bracket(eta_at(n + 1 - k) + xi_at(k + 1)) + bracket(xi_at(k + 1) + eta_at(n - k)) for k in range(n + 1 - i, n + 1))
        for i in range(1, n + 1)
    ]
    shifted = InductionParams(
        (0,) * (n + 1),
        tuple(v + d for v, d in zip(p.lam, lam_shift)),
        (0,) * n,
        tuple(v + d for v, d in zip(p.nu, nu_shift)),
        n,
    )
    return canonicalize(gamma_normalizer(shifted) / gamma_normalizer(p))


def transpose_scalar(xi: Sequence[int] = (0, 0), n: int = 1) -> GammaExpr:
    """lambda_{2,1} c_1(xi+e_2, lambda-e_2) / ((lambda_{1,2}+1) c_1(xi, lambda)), lambda_{i,j} = lambda_i - lambda_j - 1."""
    p = InductionParams.symbolic(n, xi=tuple(xi) + (0,) * (n + 1 - len(xi)))
    K = parameter_field(n)
    lam = list(p.lam)
    moved_xi = list(p.xi)
    moved_xi[1] = (moved_xi[1] + 1) % 2
    moved_lam = list(lam)
    moved_lam[1] = moved_lam[1] - 1
    lam_21 = (lam[1] - lam[0] - 1).to_element(K)
    lam_12 = (lam[0] - lam[1] - 1).to_element(K)
    ratio = simple_c_function(1, moved_xi, moved_lam, K) / simple_c_function(1, p.xi, lam, K)
    return canonicalize(ratio * (lam_21 / (lam_12 + 1)))


def functional_equation_scalar(alpha: Sequence[int], k: int, p: InductionParams, order: str = "F-first") -> GammaExpr:
    """prod p_i^(alpha_i) prod q_{i+1}^(alpha_i) threaded through the parameter shifts of L_{alpha,k}.

    ``order`` chooses whether the F-blocks or the D-blocks are absorbed first.
    """
    validate_length(alpha, p.n, "alpha")
    f_blocks = [("F", i, alpha[i - 1]) for i in range(1, k + 1)]
    d_blocks = [("D", i + 1, alpha[i - 1]) for i in range(k + 1, p.n + 1)]
    if order == "F-first":
        blocks = f_blocks + d_blocks
    elif order == "D-first":
        blocks = d_blocks + f_blocks
    else:
        raise ValueError(f"unknown composition order: {order}")
    result = GammaExpr.one(parameter_field(p.n))
    current = p
    for kind, index, power in blocks:
        result = result * bs_scalar("p" if kind == "F" else "q", index, power, current)
        current = bs_target(kind, index, current, power)
    return canonicalize(result)
