"""Induction and spectral parameter bookkeeping.

A parameter tuple (xi, lambda, eta, nu) fixes a G-principal series
pi_{xi,lambda} and an H-principal series tau_{eta,nu}. lambda and nu are kept
as AffineForms so the same code serves symbolic vectors (lambda_i the i-th
field generator) and numeric rational points.
"""
import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import Matrix, Rational

from .exact_algebra import AffineForm, as_rational, lambda_forms, lambda_names, nu_forms, nu_names
from .validators import validate_alpha, validate_index, validate_length, validate_parities

logger = logging.getLogger(__name__)

HALF = Rational(1, 2)


def bracket(value: Any) -> int:
    """[m] in {0, 1}: remainder of an integer mod 2."""
    value = as_rational(value)
    if not value.is_integer:
        raise ValueError(f"parity of a non-integer: {value}")
    return int(value) % 2


@dataclass(frozen=True)
class InductionParams:
    """(xi, lambda, eta, nu) for the pair (GL_{n+1}, GL_n)."""
    xi: Tuple[int, ...]
    lam: Tuple[AffineForm, ...]
    eta: Tuple[int, ...]
    nu: Tuple[AffineForm, ...]
    n: int

    def __post_init__(self):
        validate_parities(self.xi, self.n + 1, "xi")
        validate_parities(self.eta, self.n, "eta")
        validate_length(self.lam, self.n + 1, "lambda")
        validate_length(self.nu, self.n, "nu")

    @classmethod
    def build(
        cls,
        lam: Sequence[Any],
        nu: Sequence[Any],
        xi: Optional[Sequence[int]] = None,
        eta: Optional[Sequence[int]] = None,
    ) -> "InductionParams":
        """Parameters from explicit vectors; parities default to zero."""
        n = len(nu)
        return cls(
            xi=tuple(xi) if xi is not None else (0,) * (n + 1),
            lam=tuple(AffineForm.coerce(v) for v in lam),
            eta=tuple(eta) if eta is not None else (0,) * n,
            nu=tuple(AffineForm.coerce(v) for v in nu),
            n=n,
        )

    @classmethod
    def symbolic(cls, n: int, xi: Optional[Sequence[int]] = None, eta: Optional[Sequence[int]] = None) -> "InductionParams":
        """lambda_i, nu_j are the generators of the parameter field."""
        return cls.build(lambda_forms(n), nu_forms(n), xi, eta)

    @property
    def is_numeric(self) -> bool:
        return all(v.is_constant for v in self.lam + self.nu)

    def lam_values(self) -> List[Rational]:
        return [as_rational(v) for v in self.lam]

    def nu_values(self) -> List[Rational]:
        return [as_rational(v) for v in self.nu]

    def assignment(self) -> Dict[str, Rational]:
        """name -> value for numeric parameters.

        Raises:
            ValueError: If some entry is still symbolic
        """
        names = lambda_names(self.n) + nu_names(self.n)
        return dict(zip(names, self.lam_values() + self.nu_values()))

    def substitute(self, mapping: Dict[str, Any]) -> "InductionParams":
        return replace(
            self,
            lam=tuple(v.substitute(mapping) for v in self.lam),
            nu=tuple(v.substitute(mapping) for v in self.nu),
        )

    def shifted(
        self,
        d_lam: Sequence[Any] = None,
        d_nu: Sequence[Any] = None,
        d_xi: Sequence[int] = None,
        d_eta: Sequence[int] = None,
    ) -> "InductionParams":
        """Add integer shifts; parity shifts are taken mod 2."""
        lam = self.lam if d_lam is None else tuple(v + d for v, d in zip(self.lam, d_lam))
        nu = self.nu if d_nu is None else tuple(v + d for v, d in zip(self.nu, d_nu))
        xi = self.xi if d_xi is None else tuple((v + d) % 2 for v, d in zip(self.xi, d_xi))
        eta = self.eta if d_eta is None else tuple((v + d) % 2 for v, d in zip(self.eta, d_eta))
        return replace(self, lam=lam, nu=nu, xi=xi, eta=eta)

    def to_json(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "xi": list(self.xi),
            "lambda": [str(v) for v in self.lam],
            "eta": list(self.eta),
            "nu": [str(v) for v in self.nu],
        }


@dataclass(frozen=True)
class SpectralParams:
    """Exponents (s, t) and sign characters (delta, epsilon) of the kernel K."""
    delta: Tuple[int, ...]
    s: Tuple[AffineForm, ...]
    eps: Tuple[int, ...]
    t: Tuple[AffineForm, ...]


def to_spectral(p: InductionParams) -> SpectralParams:
    """s_i = lambda_i - nu_{n+1-i} - 1/2, t_i = nu_{n+1-i} - lambda_{i+1} - 1/2, s_{n+1} = lambda_{n+1} + n/2."""
    n = p.n
    s = [p.lam[i - 1] - p.nu[n - i] - HALF for i in range(1, n + 1)]
    s.append(p.lam[n] + Rational(n, 2))
    t = [p.nu[n - i] - p.lam[i] - HALF for i in range(1, n + 1)]
    delta = [(p.xi[i - 1] + p.eta[n - i]) % 2 for i in range(1, n + 1)] + [p.xi[n]]
    eps = [(p.eta[n - i] + p.xi[i]) % 2 for i in range(1, n + 1)]
    return SpectralParams(tuple(delta), tuple(s), tuple(eps), tuple(t))


def spectral_map_rank(n: int) -> int:
    """Rank of the linear part of (lambda, nu) -> (s, t); full rank 2n+1 means injective."""
    p = InductionParams.symbolic(n)
    spectral = to_spectral(p)
    names = lambda_names(n) + nu_names(n)
    rows = [[form.coefficient(name) for name in names] for form in spectral.s + spectral.t]
    return Matrix(rows).rank()


def rho_G(n: int) -> List[Rational]:
    """Half-sum of positive roots of GL_{n+1}: ((n+2-2i)/2)_i."""
    return [Rational(n + 2 - 2 * i, 2) for i in range(1, n + 2)]


def rho_H(n: int) -> List[Rational]:
    return [Rational(n + 1 - 2 * i, 2) for i in range(1, n + 1)]


def eta_k(xi: Sequence[int], k: int) -> Tuple[int, ...]:
    """(xi_1, ..., xi_k, xi_{k+2}, ..., xi_{n+1})."""
    validate_index(k, 0, len(xi) - 1, "k")
    return tuple(xi[:k]) + tuple(xi[k + 1:])


def nu_k(lam: Sequence[AffineForm], k: int) -> Tuple[AffineForm, ...]:
    """(lambda_1 + 1/2, ..., lambda_k + 1/2, lambda_{k+2} - 1/2, ..., lambda_{n+1} - 1/2)."""
    validate_index(k, 0, len(lam) - 1, "k")
    lam = [AffineForm.coerce(v) for v in lam]
    return tuple(v + HALF for v in lam[:k]) + tuple(v - HALF for v in lam[k + 1:])


def restriction_params(p: InductionParams, k: int) -> InductionParams:
    """(xi, lambda, eta_k(xi), nu_k(lambda)): the target of rest_k."""
    return replace(p, eta=eta_k(p.xi, k), nu=nu_k(p.lam, k))


def shift_params(p: InductionParams, k: int, alpha: Sequence[int]) -> InductionParams:
    """Replace (eta, nu) by (eta_{alpha,k}(xi), nu_{alpha,k}(lambda)), the target of rest_k o L_{alpha,k}."""
    validate_index(k, 0, p.n, "k")
    validate_alpha(alpha, p.n)
    base = restriction_params(p, k)
    eta = tuple((e + a) % 2 for e, a in zip(base.eta, alpha))
    nu = tuple(v + a if i < k else v - a for i, (v, a) in enumerate(zip(base.nu, alpha)))
    return replace(p, eta=eta, nu=nu)


def is_generic(p: InductionParams) -> bool:
    """No lambda_i - lambda_j is an explicit integer (i != j)."""
    for i in range(p.n + 1):
        for j in range(i + 1, p.n + 1):
            if p.lam[i].integer_difference(p.lam[j]) is not None:
                return False
    return True


@dataclass
class ClassificationResult:
    """Membership in L_k and the operator rest_k o L_{alpha,k} it predicts."""
    member_of_L_k: bool
    dimension_hint: int
    alpha: Optional[Tuple[int, ...]] = None
    not_generic: bool = False
    betas: Tuple[Any, ...] = ()
    betas_prime: Tuple[Any, ...] = ()
    reasons: List[str] = field(default_factory=list)

    def to_json(self) -> Dict[str, Any]:
        return {
            "member_of_L_k": self.member_of_L_k,
            "dimension_hint": self.dimension_hint,
            "alpha": list(self.alpha) if self.alpha is not None else None,
            "not_generic": self.not_generic,
            "betas": [str(b) for b in self.betas],
            "betas_prime": [str(b) for b in self.betas_prime],
            "reasons": list(self.reasons),
        }


def betas(p: InductionParams, k: int) -> Tuple[List[Rational], List[Rational]]:
    """beta_l for l = 1..k and beta'_l for l = 1..n-k."""
    lam, nu = p.lam_values(), p.nu_values()
    n = p.n
    beta = [sum((nu[i] - lam[i] - HALF for i in range(ell)), Rational(0)) for ell in range(1, k + 1)]
    beta_prime = [
        sum((lam[i] - nu[i - 1] - HALF for i in range(n + 1 - ell, n + 1)), Rational(0))
        for ell in range(1, n - k + 1)
    ]
    return beta, beta_prime


def _is_natural(value: Rational) -> bool:
    return value.is_integer and value >= 0


def classify_generic(p: InductionParams, k: int) -> ClassificationResult:
    """Membership of numeric parameters in L_k and the alpha of the predicted operator.

    The telescoped alpha must be a vector of naturals for rest_k o L_{alpha,k}
    to exist, so a decreasing beta sequence is reported as non-member.

    Raises:
        ValueError: If lambda or nu is symbolic
    """
    validate_index(k, 0, p.n, "k")
    if not p.is_numeric:
        raise ValueError("classify_generic needs numeric lambda and nu")
    n = p.n
    not_generic = not is_generic(p)
    if not_generic:
        logger.warning(f"Parameters lambda={[str(v) for v in p.lam]} are not generic; dimension hint is indicative only")
    beta, beta_prime = betas(p, k)
    reasons = []
    for ell, value in enumerate(beta, start=1):
        if not _is_natural(value):
            reasons.append(f"beta_{ell} = {value} not in N")
        elif sum(p.eta[i] + p.xi[i] for i in range(ell)) % 2 != bracket(value):
            reasons.append(f"parity condition for beta_{ell} fails")
    for ell, value in enumerate(beta_prime, start=1):
        if not _is_natural(value):
            reasons.append(f"beta'_{ell} = {value} not in N")
        elif sum(p.eta[i - 1] + p.xi[i] for i in range(n + 1 - ell, n + 1)) % 2 != bracket(value):
            reasons.append(f"parity condition for beta'_{ell} fails")
    alpha = None
    if not reasons:
        padded = [Rational(0)] + beta
        padded_prime = [Rational(0)] + beta_prime
        alpha = tuple(
            int(padded[i] - padded[i - 1]) if i <= k else int(padded_prime[n + 1 - i] - padded_prime[n - i])
            for i in range(1, n + 1)
        )
        if any(a < 0 for a in alpha):
            reasons.append(f"telescoped alpha {alpha} has a negative entry")
            alpha = None
    member = not reasons
    return ClassificationResult(
        member_of_L_k=member,
        dimension_hint=1 if member else 0,
        alpha=alpha,
        not_generic=not_generic,
        betas=tuple(beta),
        betas_prime=tuple(beta_prime),
        reasons=reasons,
    )


def epsilon_intertwiner_target(side: str, k0: int, parities: Sequence[int], values: Sequence[Any]) -> Tuple[Tuple[int, ...], Tuple[AffineForm, ...]]:
    """Parameters reached by (eps^{3,2})^{k0} on G or (eps_H^{2,1})^{k0} on H at n = 2.

    Args:
        side: "G" (needs lambda_3 - lambda_2 = k0) or "H" (needs nu_2 - nu_1 = k0)
        k0: Natural exponent
        parities: xi (length 3) or eta (length 2)
        values: lambda or nu

    Raises:
        ValueError: If the parameters do not satisfy the integrality condition
    """
    values = [AffineForm.coerce(v) for v in values]
    shift = k0 % 2
    if side == "G":
        validate_length(values, 3, "lambda")
        if values[2].difference(values[1]) != k0:
            raise ValueError(f"eps^{{3,2}} power {k0} needs lambda_3 - lambda_2 = {k0}")
        xi = (parities[0], (parities[1] + shift) % 2, (parities[2] + shift) % 2)
        return xi, (values[0], values[1] + k0, values[2] - k0)
    if side == "H":
        validate_length(values, 2, "nu")
        if values[1].difference(values[0]) != k0:
            raise ValueError(f"eps_H^{{2,1}} power {k0} needs nu_2 - nu_1 = {k0}")
        eta = ((parities[0] + shift) % 2, (parities[1] + shift) % 2)
        return eta, (values[0] + k0, values[1] - k0)
    raise ValueError(f"unknown side: {side}")


def multiplicity_two_params(lambda0: Any, n1: int, n2: int, k0: int, l0: int) -> InductionParams:
    """The k = 1 parameters with a two-dimensional DSBO space.

    lambda = (l, l + n1 + k0 - l0, l + n1 + n2 - l0), nu = (l + n1 + 1/2, l + n1 - l0 - 1/2),
    parities chosen to satisfy the k = 1 parity conditions.

    Raises:
        ValueError: "case preconditions violated" unless 0 <= k0 <= l0 <= min(n1, n2) - 1
    """
    if not (n1 >= 1 and n2 >= 1 and 0 <= k0 <= l0 <= min(n1, n2) - 1):
        raise ValueError(f"case preconditions violated: need 0 <= k0 <= l0 <= min(n1, n2) - 1, got {(n1, n2, k0, l0)}")
    base = AffineForm.coerce(lambda0)
    lam = (base, base + n1 + k0 - l0, base + n1 + n2 - l0)
    nu = (base + n1 + HALF, base + n1 - l0 - HALF)
    eta = (n1 % 2, n2 % 2)
    return InductionParams.build(lam, nu, xi=(0, 0, 0), eta=eta)
