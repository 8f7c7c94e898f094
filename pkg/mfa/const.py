"""Constants for mfa."""

DOMAIN = "mfa"

CONF_RANK = "rank"
CONF_FIELD = "field"
CONF_ALGEBRA = "algebra"
CONF_MAX_DEGREE = "max_degree"
CONF_SEED = "seed"
CONF_FORMAT = "format"
CONF_VERBOSE = "verbose"

ALGEBRA_METABELIAN = "metabelian"
ALGEBRA_FREE = "free"
ALGEBRAS = [ALGEBRA_METABELIAN, ALGEBRA_FREE]

FORMAT_HUMAN = "human"
FORMAT_JSON = "json"
FORMATS = [FORMAT_HUMAN, FORMAT_JSON]

KIND_ENDOMORPHISM = "endomorphism"
KIND_DERIVATION = "derivation"
KINDS = [KIND_ENDOMORPHISM, KIND_DERIVATION]

FIELD_RATIONALS = "q"
FIELD_PRIME_PREFIX = "gf:"
MAX_PRIME = 2**31

DEFAULT_RANK = 3
DEFAULT_FIELD = FIELD_RATIONALS
DEFAULT_ALGEBRA = ALGEBRA_METABELIAN
DEFAULT_MAX_DEGREE = 10
DEFAULT_SEED = 0
DEFAULT_FORMAT = FORMAT_HUMAN

# Minimal degree of an element of the metabelian identity ideal (uv)(wq) of B.
IDEAL_MIN_DEGREE = 4

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2

BUILTIN_SIGMA = "sigma"
BUILTIN_TAU = "tau"
BUILTINS = [BUILTIN_SIGMA, BUILTIN_TAU]

VERDICT_ABSOLUTELY_WILD = "absolutely_wild"
VERDICT_INCONCLUSIVE = "inconclusive"

REASON_ZERO_DIVERGENCE = "zero_divergence"
REASON_IDEAL_DEGREE_CHECK_FAILED = "ideal_degree_check_failed"
REASON_AUTOMORPHISM_UNVERIFIED = "automorphism_unverified"

ERROR_FIELD = "field_error"
ERROR_DIVISION_BY_ZERO = "division_by_zero"
ERROR_STRUCTURAL_MISMATCH = "structural_mismatch"
ERROR_DIMENSION_MISMATCH = "dimension_mismatch"
ERROR_NOT_IN_AUGMENTATION_IDEAL = "not_in_augmentation_ideal"
ERROR_NOT_ANTISYMMETRIC = "not_antisymmetric"
ERROR_INVALID_INDEX = "invalid_index"
ERROR_NOT_IA = "not_ia"
ERROR_NOT_CHEIN = "not_chein"
ERROR_NOT_IN_A_SQUARED = "not_in_a_squared"
ERROR_RANK_TOO_SMALL = "rank_too_small"
ERROR_IDENTITY_ENDOMORPHISM = "identity_endomorphism"
ERROR_PARSE = "parse_error"
ERROR_MAP_FORMAT = "map_format_error"
ERROR_INVALID_ARGUMENT = "invalid_argument"
ERROR_CONFIG = "config_error"
ERROR_USAGE = "usage_error"
