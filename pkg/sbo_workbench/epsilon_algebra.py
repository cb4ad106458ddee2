"""The lower epsilon-algebra at n = 2 and rest_1-normal forms.

At n = 2 the source operators D_3 and F_1 only involve the three lower
vector fields X = eps^{2,1}, Y = eps^{3,2}, Z = eps^{3,1} and the
multiplication operators Phi_r, Psi_r. X, Y, Z span a Heisenberg algebra
([Y, X] = Z, Z central) that acts on span(Phi, Psi) by derivations, so every
composite can be written as sum P_w(Phi, Psi) X^a Y^b Z^c. After rest_1 the
multipliers collapse to powers of det_H and an operator becomes a finite
table (a, b, c) -> coefficient.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy.polys.fields import FracElement
from sympy.polys.rings import PolyElement, PolyRing, ring

from .covariant_functions import FunctionKind, phi_psi
from .exact_algebra import eval_at, lambda_forms, parameter_field, pochhammer, to_field
from .weyl_algebra import d_matrix, epsilon, f_matrix, factor_sequence, ordered_det

logger = logging.getLogger(__name__)

N = 2
Word = Tuple[int, int, int]
LETTERS = {"X": (2, 1), "Y": (3, 2), "Z": (3, 1)}
MULTIPLIERS = ("Phi1", "Phi2", "Phi3", "Psi1", "Psi2", "Psi3")
# rest_1 sends Phi2 -> 1 and Psi2 -> det_H; every other multiplier -> 0
RESTRICTION_SURVIVORS = {"Phi2": 0, "Psi2": 1}


@lru_cache(maxsize=None)
def multiplier_ring() -> PolyRing:
    R, *_ = ring(",".join(MULTIPLIERS), parameter_field(N).to_domain())
    return R


def _multiplier_polynomials() -> List[PolyElement]:
    kinds = [(FunctionKind.PHI, r) for r in (1, 2, 3)] + [(FunctionKind.PSI, r) for r in (1, 2, 3)]
    return [phi_psi(kind, r, N) for kind, r in kinds]


@lru_cache(maxsize=None)
def derivation_table() -> Dict[str, Tuple[PolyElement, ...]]:
    """Image of each multiplier under X, Y, Z, read off from the Weyl algebra.

    Raises:
        RuntimeError: If a vector field leaves span(Phi, Psi)
    """
    R = multiplier_ring()
    functions = _multiplier_polynomials()
    table = {}
    for letter, (a, b) in LETTERS.items():
        field_op = epsilon(a, b, N)
        images = []
        for source in functions:
            image = field_op.apply(source)
            images.append(_match_multiplier(image, functions, R, letter))
        table[letter] = tuple(images)
    logger.debug("Derived epsilon action on Phi/Psi at n=2")
    return table


def _match_multiplier(image: PolyElement, functions: List[PolyElement], R: PolyRing, letter: str) -> PolyElement:
    if not image:
        return R.zero
    for index, target in enumerate(functions):
        for sign in (1, -1):
            if image == target * sign:
                return R.gens[index] * sign
    raise RuntimeError(f"eps action {letter} leaves span(Phi, Psi)")


def _derive(letter: str, P: PolyElement, times: int = 1) -> PolyElement:
    images = derivation_table()[letter]
    for _ in range(times):
        if not P:
            break
        P = sum((P.diff(v) * images[v] for v in range(len(MULTIPLIERS)) if images[v]), P.ring.zero)
    return P


def push_word(word: Word, P: PolyElement) -> Dict[Word, PolyElement]:
    """X^a Y^b Z^c o P = sum P' X^a' Y^b' Z^c' (generalised Leibniz rule, letter by letter)."""
    a, b, c = word
    result: Dict[Word, PolyElement] = {}
    for i in range(c + 1):
        Pi = _derive("Z", P, i) * comb(c, i)
        for j in range(b + 1):
            Pij = _derive("Y", Pi, j) * comb(b, j)
            for ell in range(a + 1):
                Pl = _derive("X", Pij, ell) * comb(a, ell)
                if Pl:
                    key = (a - ell, b - j, c - i)
                    result[key] = result.get(key, P.ring.zero) + Pl
    return result


def multiply_words(left: Word, right: Word) -> Dict[Word, int]:
    """Normal form of X^a1 Y^b1 Z^c1 X^a2 Y^b2 Z^c2, using Y^b X^a = sum j! C(a,j) C(b,j) X^{a-j} Y^{b-j} Z^j."""
    a1, b1, c1 = left
    a2, b2, c2 = right
    return {
        (a1 + a2 - j, b1 + b2 - j, c1 + c2 + j): factorial(j) * comb(a2, j) * comb(b1, j)
        for j in range(min(a2, b1) + 1)
    }


class EpsilonElement:
    """sum_w P_w(Phi, Psi) X^a Y^b Z^c with multipliers written on the left."""

    def __init__(self, terms: Optional[Dict[Word, PolyElement]] = None):
        self.ring = multiplier_ring()
        self.terms: Dict[Word, PolyElement] = {w: P for w, P in (terms or {}).items() if P}

    @classmethod
    def word(cls, a: int = 0, b: int = 0, c: int = 0) -> "EpsilonElement":
        return cls({(a, b, c): multiplier_ring().one})

    @classmethod
    def multiplier(cls, name: str) -> "EpsilonElement":
        R = multiplier_ring()
        return cls({(0, 0, 0): R.gens[MULTIPLIERS.index(name)]})

    def zero_like(self) -> "EpsilonElement":
        return EpsilonElement()

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, EpsilonElement) and self.terms == other.terms

    __hash__ = None

    def __add__(self, other: "EpsilonElement") -> "EpsilonElement":
        merged = dict(self.terms)
        for w, P in other.terms.items():
            merged[w] = merged.get(w, self.ring.zero) + P
        return EpsilonElement(merged)

    def __neg__(self) -> "EpsilonElement":
        return EpsilonElement({w: -P for w, P in self.terms.items()})

    def __sub__(self, other: "EpsilonElement") -> "EpsilonElement":
        return self + (-other)

    def scale(self, value: Any) -> "EpsilonElement":
        c = to_field(parameter_field(N), value)
        return EpsilonElement({w: P.mul_ground(c) for w, P in self.terms.items()})

    def __mul__(self, other: Any) -> "EpsilonElement":
        if not isinstance(other, EpsilonElement):
            return self.scale(other)
        result: Dict[Word, PolyElement] = {}
        for w1, P1 in self.terms.items():
            for w2, P2 in other.terms.items():
                for w_mid, P_mid in push_word(w1, P2).items():
                    for w, weight in multiply_words(w_mid, w2).items():
                        result[w] = result.get(w, self.ring.zero) + P1 * P_mid * weight
        return EpsilonElement(result)

    def __rmul__(self, other: Any) -> "EpsilonElement":
        return self.scale(other)

    def __repr__(self) -> str:
        return f"EpsilonElement({ {w: str(P.as_expr()) for w, P in sorted(self.terms.items())} })"


class EpsilonEntries:
    """Matrix entries for :func:`d_matrix` / :func:`f_matrix` in the epsilon-algebra."""

    def __init__(self):
        self.n = N
        self.field = parameter_field(N)

    def phi(self, r: int) -> EpsilonElement:
        return EpsilonElement.multiplier(f"Phi{r}")

    def psi(self, r: int) -> EpsilonElement:
        return EpsilonElement.multiplier(f"Psi{r}")

    def epsilon(self, a: int, b: int) -> EpsilonElement:
        for letter, pair in LETTERS.items():
            if pair == (a, b):
                return EpsilonElement.word(*(1 if name == letter else 0 for name in "XYZ"))
        raise ValueError(f"eps^{{{a},{b}}} is not a lower vector field at n=2")

    def epsilon_tilde(self, a: int, b: int) -> EpsilonElement:
        sign = -1 if (a + b + 1) % 2 else 1
        return self.epsilon(a, b).scale(sign)

    def scalar(self, value: Any) -> FracElement:
        return to_field(self.field, value)

    def identity(self) -> EpsilonElement:
        return EpsilonElement.word()


def epsilon_factor(kind: str, i: int, lam: Sequence[Any]) -> EpsilonElement:
    """D_i(lambda) or F_i(lambda) at n = 2 as an EpsilonElement."""
    entries = EpsilonEntries()
    if kind == "D":
        return entries.phi(1) if i == 1 else ordered_det(d_matrix(i, lam, N, entries))
    if i == N + 1:
        return entries.psi(N + 1)
    return ordered_det(f_matrix(i, lam, N, entries))


@dataclass
class NormalFormExpansion:
    """det_H^{det_power} * sum terms[(a,b,c)] rest_1 o X^a Y^b Z^c."""
    terms: Dict[Word, Any] = field(default_factory=dict)
    det_power: int = 0

    def __post_init__(self):
        self.terms = {w: c for w, c in self.terms.items() if c}

    def coefficient(self, a: int, b: int, c: int) -> Any:
        return self.terms.get((a, b, c), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def scale(self, value: Any) -> "NormalFormExpansion":
        return NormalFormExpansion({w: c * value for w, c in self.terms.items()}, self.det_power)

    def shift_words(self, da: int = 0, db: int = 0, dc: int = 0) -> "NormalFormExpansion":
        """Compose with Z^dc on either side and with X^da / Y^db where they stay in normal order.

        X^da multiplies from the left of the word and Y^db from the right.
        """
        return NormalFormExpansion(
            {(a + da, b + db, c + dc): coeff for (a, b, c), coeff in self.terms.items()},
            self.det_power,
        )

    def substitute(self, assignment: Dict[str, Any]) -> "NormalFormExpansion":
        return NormalFormExpansion({w: eval_at(c, assignment) for w, c in self.terms.items()}, self.det_power)

    def words(self) -> List[Word]:
        return sorted(self.terms)

    def to_json(self) -> Dict[str, Any]:
        return {
            "det_power": self.det_power,
            "terms": [
                {"word": list(w), "coeff": str(c.as_expr() if hasattr(c, "as_expr") else c)}
                for w, c in sorted(self.terms.items())
            ],
        }


def restrict_multiplier(P: PolyElement) -> Tuple[FracElement, Optional[int]]:
    """rest_1 of a multiplier: (coefficient, det_H power), power None when P restricts to 0.

    Raises:
        RuntimeError: If the surviving monomials carry different det_H powers
    """
    K = parameter_field(N)
    total = K.zero
    power = None
    for monom, coeff in P.iterterms():
        if any(e for name, e in zip(MULTIPLIERS, monom) if name not in RESTRICTION_SURVIVORS):
            continue
        det_exp = monom[MULTIPLIERS.index("Psi2")]
        if power is not None and det_exp != power:
            raise RuntimeError("non-homogeneous det_H power after restriction")
        power = det_exp
        total += to_field(K, coeff)
    return total, (power if total else None)


def compose_restricted(state: NormalFormExpansion, factor: EpsilonElement) -> NormalFormExpansion:
    """(rest_1 o state) o factor, collapsed back to a normal form."""
    K = parameter_field(N)
    terms: Dict[Word, FracElement] = {}
    det_power = None
    for w1, c1 in state.terms.items():
        for w2, P2 in factor.terms.items():
            for w_mid, P_mid in push_word(w1, P2).items():
                coeff, power = restrict_multiplier(P_mid)
                if power is None:
                    continue
                if det_power is not None and power != det_power:
                    raise RuntimeError("non-homogeneous det_H power after restriction")
                det_power = power
                for w, weight in multiply_words(w_mid, w2).items():
                    terms[w] = terms.get(w, K.zero) + c1 * coeff * weight
    return NormalFormExpansion(terms, state.det_power + (det_power or 0))


def expand_rest1_FD(n_pow: int, m_pow: int, lam: Optional[Sequence[Any]] = None) -> NormalFormExpansion:
    """Normal form of rest_1 o F_1^{n_pow} o D_3^{m_pow} at n = 2.

    Args:
        n_pow: Power of F_1
        m_pow: Power of D_3
        lam: Parameter (defaults to the symbolic lambda1..lambda3)

    Returns:
        NormalFormExpansion with coefficients in the parameter field
    """
    if n_pow < 0 or m_pow < 0:
        raise ValueError(f"powers must be natural, got n={n_pow}, m={m_pow}")
    lam = list(lam) if lam is not None else lambda_forms(N)
    K = parameter_field(N)
    state = NormalFormExpansion({(0, 0, 0): K.one}, 0)
    # outermost factor first
    for kind, index, current in reversed(factor_sequence((n_pow, m_pow), 1, lam, N)):
        state = compose_restricted(state, epsilon_factor(kind, index, current))
    logger.debug(f"rest_1 F_1^{n_pow} D_3^{m_pow} has {len(state.terms)} normal-order terms")
    return state


def expansion_prefactor(n_pow: int, m_pow: int) -> FracElement:
    """(lambda1 - lambda3 + 1 + m)_n, the common factor of every coefficient."""
    lam = lambda_forms(N)
    return pochhammer(lam[0] - lam[2] + 1 + m_pow, n_pow, parameter_field(N))
