"""Fixed numbers, names and anchors for the SBO workbench.

Everything a verification run depends on besides its RunConfig is pinned here
so that two runs with the same configuration produce the same report.
"""

# Random evaluation points
RANDOM_POINT_DEFAULTS = {
    "seed": 7,
    "count": 20,
    "max_denominator": 97,    # denominators drawn from 1..97
    "numerator_span": 4,      # numerators drawn from -span*q..span*q
    "max_attempts": 1000,     # rejection sampling budget per point
}

# Numeric layer (mpmath)
NUMERIC_DEFAULTS = {
    "mpmath_dps": 30,
    "gamma_rel_tol": 1e-12,
    "canonicalize_rel_tol": 1e-9,
    "riesz_tol": 1e-4,
    "riesz_grid_size": 10,    # s = -1 + 2**-j for j = 1..size
    "quad_error_tol": 1e-15,
}

# Parameter symbol prefixes of the coefficient field
PARAMETER_PREFIXES = {
    "lambda": "lambda",   # lambda1..lambda{n+1}, G-side
    "nu": "nu",           # nu1..nu{n}, H-side
}

# Sizes the symbolic layers are exercised on
SUPPORTED_SIZES = {
    "min_n": 1,
    "max_n": 3,
    "delta_model_n": 2,   # the kernel solver is closed for n = 2 only
}

# Verification suites, in the order `all` runs them
SUITES = (
    "restriction",
    "bernstein-sato",
    "expansion",
    "residue-scalar",
    "gamma-ratio",
    "n2-classify",
    "algebra-axioms",
    "numeric-probes",
)

EXIT_CODES = {
    "pass": 0,
    "fail": 1,
    "usage": 2,
}

# Anchor strings attached to each check in a report
CHECK_ANCHORS = {
    "determinant_calibration": "determinant formulas for D_3 and F_1 at n=2",
    "restriction": "vanishing and scalar relations of rest_k against D_i, F_i",
    "bernstein_sato": "kernel identities F_i(-lambda)K and D_i(-lambda)K",
    "iterated_bernstein_sato": "iterated identities with p_i^(alpha), q_i^(alpha)",
    "order_independence": "functional equation for L_{alpha,k} in either composition order",
    "expansion": "normal form of rest_1 F_1^n D_3^m",
    "expansion_cross_check": "epsilon expansion against the matrix-entry Weyl algebra",
    "multiplicity_two": "two independent operators at the multiplicity-two locus",
    "renormalized": "renormalized case (1) operator does not vanish",
    "epsilon_rewrite": "epsilon_H o rest_k = rest_k o epsilon",
    "residue_scalar": "restriction as residue: Gamma bookkeeping is lambda-free",
    "gamma_ratio": "gamma(0,lambda',0,nu')/gamma(xi,lambda,eta,nu) is Gamma-free",
    "transpose_scalar": "transpose lemma scalar equals one",
    "c_function_inverse": "T^{w_i} o T^{w_i} = c_i id from either side: c_i is w_i-invariant",
    "c_function_product": "c-function of a reduced word equals the product of shifted one-letter factors",
    "pde_calibration": "equivariance PDEs for K_1 at n=2",
    "n2_classify": "n=2 kernel dimension against the case analysis",
    "closed_form": "closed-form Pochhammer kernels span the solver output",
    "constructive_basis": "eps_H^{2,1} o rest_k o F or D products span the k = 0, 2 operators",
    "generic_consistency": "generic classification agrees with the solver",
    "algebra_axioms": "ring and module axioms on random instances",
    "gamma_numeric": "mpmath Gamma against classical values",
    "riesz_probe": "residue of the Riesz distribution at s = -1",
}

# Classical Gamma values checked by the numeric probe: argument -> closed form
CLASSICAL_GAMMA_VALUES = {
    "1": "1",
    "2": "1",
    "3": "2",
    "5": "24",
    "1/2": "sqrt(pi)",
    "3/2": "sqrt(pi)/2",
    "5/2": "3*sqrt(pi)/4",
    "-1/2": "-2*sqrt(pi)",
    "-3/2": "4*sqrt(pi)/3",
    "1/3": "gamma(1/3)",
    "4": "6",
    "6": "120",
    "10": "362880",
    "7/2": "15*sqrt(pi)/8",
    "9/2": "105*sqrt(pi)/16",
    "-5/2": "-8*sqrt(pi)/15",
    "-7/2": "16*sqrt(pi)/105",
    "3/4": "pi*sqrt(2)/gamma(1/4)",
    "2/3": "2*pi/(sqrt(3)*gamma(1/3))",
    "1/4": "gamma(1/4)",
}

# Multiplicity-two instances (lambda0, n1, n2, k0, l0), 0 <= k0 <= l0 <= min(n1, n2) - 1
MULTIPLICITY_TWO_INSTANCES = (
    (0, 2, 2, 0, 1),
    (0, 3, 2, 0, 1),
    ("1/3", 2, 3, 1, 1),
)

# Number of random instances drawn by the algebra-axioms suite per property
AXIOM_SAMPLES = {
    "polynomial_ring": 250,
    "weyl_associativity": 150,
    "weyl_commutator": 100,
    "module_action": 100,
    "pochhammer": 200,
    "canonicalize": 100,
    "parity": 100,
}

REPORT_DEFAULTS = {
    "output_dir": "reports",
    "json_indent": 2,
}
