from enum import Enum, IntEnum


class ObstructionKind(Enum):
    CHORDLESS_CYCLE = "chordless_cycle"
    INCOMPARABLE_EDGE = "incomparable_edge"
    VALLEY_PATH = "valley_path"


class Command(Enum):
    CHECK = "check"
    BASIS = "basis"
    CHARPOLY = "charpoly"
    SSOLV = "ssolv"
    AUDIT = "audit"
    MULTI = "multi"
    NISH = "nish"
    SWEEP = "sweep"


class ExitCode(IntEnum):
    OK = 0
    CERTIFICATION_FAILURE = 1
    INVALID_INPUT = 2
    GUARD_EXCEEDED = 3
    INCONCLUSIVE = 4


# Lattice enumeration is exponential in |A| in the worst case.
LATTICE_GUARD = 20
MAX_AMBIENT_DIM = 8

# forbidden_paths enumerates every induced path.
FORBIDDEN_PATHS_MAX_VERTICES = 12

# Sign-vector chamber counting refines an integer grid up to this radius.
CHAMBER_GRID_START = 2
CHAMBER_GRID_LIMIT = 64
CHAMBER_MAX_DIM = 3

# Finite-field point counts enumerate p ** d points.
POINT_COUNT_LIMIT = 2_000_000

LATTICE_GUARD_ENV = "ARRANGER_LATTICE_GUARD"
LOG_LEVEL_ENV = "ARRANGER_LOG_LEVEL"
LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"
DEFAULT_LOG_LEVEL = "INFO"

SWEEP_DEFAULT_MAX_VERTICES = 4
SWEEP_DEFAULT_WEIGHTS = "∅,{0},{1},{0,1}"
SWEEP_DEFAULT_SAMPLES = 300
SWEEP_MAX_VERTICES = 6
DEFAULT_SEED = 0
