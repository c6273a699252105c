from enum import IntEnum

MAX_DIMENSION = 16

# star products are assembled up to this hbar order
MAX_STAR_ORDER = 3

# exhaustive canonical labeling is only attempted up to this many aerial vertices
MAX_CANONICAL_VERTICES = 6

DEFAULT_SAMPLES = 200_000
DEFAULT_SEED = 42
DEFAULT_CHUNK_SIZE = 65_536

# hbar order carried by Weyl operators; polynomial inputs never reach it
DEFAULT_WEYL_ORDER = 16

HBAR = "ħ"


class ExitCode(IntEnum):
    OK = 0
    FAILED = 1
    INVALID_INPUT = 2
    MALFORMED_JSON = 3
    UNSUPPORTED = 4
