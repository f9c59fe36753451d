"""Contains constants used throughout hhgeom."""

# Tolerances
EPS_GEOM = 1e-9  # relative tolerance for exact geometric paths
EPS_NUM = 1e-7  # absolute tolerance for numerical properties (concavity, clamping, gauges)
EPS_CLOSED_FORM = 1e-12  # relative agreement of closed-form constants
FLAT_TOL = 1e-7  # Chebyshev radius below which a halfspace system is treated as flat
LOG_LIMIT_TOL = 1e-8  # |f(0)/f_min - 1| below which the log-concave bound takes its limit value
SIGMA_MULTIPLIER = 3.0  # Monte Carlo verdict band in standard errors

# Sizes
MAX_DIM = 8
DEFAULT_SAMPLES = 200_000
DEFAULT_KNOTS = 2001
DEFAULT_TRIALS = 100
SHARD_SIZE = 50_000
MIN_MONTE_CARLO_SAMPLES = 100

# Environment
JOBS_ENV_VAR = "HHGEOM_JOBS"

# Body family tags
BODY_FAMILIES = (
    "cube",
    "cross_polytope",
    "regular_mgon_prism",
    "cone_over_base",
    "generalized_cylinder",
    "scaled_slab_body",
    "random_hull",
)

# Command line aliases for body families
FAMILY_ALIASES = {
    "cube": "cube",
    "cross-polytope": "cross_polytope",
    "mgon-prism": "regular_mgon_prism",
    "cone": "cone_over_base",
    "cylinder": "generalized_cylinder",
    "scaled-slab": "scaled_slab_body",
    "random-hull": "random_hull",
}

# Theorem tags understood by the verification dispatch
GEOMETRIC_THEOREMS = (
    "thm1",
    "santos",
    "mp_centroid",
    "proj_centroid",
    "max_section",
)
FUNCTIONAL_THEOREMS = (
    "thm2",
    "cor_alpha",
    "thm3",
    "classical_hh",
    "hh_center_of_mass",
)
THEOREMS = GEOMETRIC_THEOREMS + FUNCTIONAL_THEOREMS

# Report output
REPORT_CSV_COLUMNS = [
    "name",
    "lhs",
    "rhs",
    "ratio",
    "slack",
    "verdict",
    "seed",
    "instance_path",
]
