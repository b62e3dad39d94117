"""Constants shared by the engine, the check suite and the CLI."""

# Largest number of points a product space may have
DEFAULT_PRODUCT_CAP = 10**6

# Process exit codes
EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_LOAD_ERROR = 2
EXIT_DOMAIN_ERROR = 3
EXIT_WITNESS_ERROR = 4

# Measure kinds accepted in model files
MEASURE_KINDS = ("probability", "finite", "base")

# Default number of random cases per check
DEFAULT_CASES = 25

# Default seed for the random model generator
DEFAULT_SEED = 0

# Random model shape
MIN_SPACE_SIZE = 2
MAX_SPACE_SIZE = 4
MIN_OBJECTS = 2
MAX_OBJECTS = 4
MAX_DENOMINATOR = 8

# Random variables take values k/d with |k/d| bounded by this
MAX_VARIABLE_MAGNITUDE = 4

# Longest stabilizing sequence prefix drawn by the convergence checks
MAX_SEQUENCE_LENGTH = 16

# Spaces up to this size get exhaustive event enumeration
EXHAUSTIVE_EVENT_SIZE = 3

# Relative tolerance for inequalities with irrational exponents
FLOAT_RELATIVE_TOLERANCE = 1e-12

# Default digits for decimal renderings
DEFAULT_DECIMAL_DIGITS = 6

# Names accepted by --theorems, in report order
CHECK_NAMES = (
    "pushforward-mass",
    "pushforward-functor",
    "refinement-order",
    "bundle-projection",
    "cooc-bundle-equivalence",
    "full-constraint-absorption",
    "cooc-monotonicity",
    "pointwise-defining-equation",
    "kernel-defining-equation",
    "ae-uniqueness",
    "target-fixing-consistency",
    "bayes-shift-roundtrip",
    "two-step-shift",
    "disintegration",
    "chain-rule",
    "kernel-composition",
    "independence-propagation",
    "ci-equivalence",
    "kernel-monotonicity",
    "kernel-product",
    "density-roundtrip",
    "density-canonical",
    "marginal-nesting",
    "density-kernel",
    "change-of-base",
    "absolute-continuity",
    "indicator-integral",
    "conditioning-reduction",
    "rectangle-integral",
    "expectation-defining-equation",
    "iterated-decomposition",
    "constraint-additivity",
    "expectation-shift",
    "independence-transfer",
    "linearity",
    "tower",
    "monotone-convergence",
    "fatou",
    "dominated-convergence",
    "pull-out",
    "holder",
    "minkowski",
    "jensen",
    "null-convention",
    "scm-observational",
    "scm-acyclic-unique",
    "scm-intervention-idempotent",
    "serialization-roundtrip",
)
