"""
Configuration for the Cohen-Eisenstein coefficient toolkit.
"""

import os

from dotenv import load_dotenv

load_dotenv()

# Cache of ideal class sets (one JSON file per level configuration)
CACHE_DIR = os.getenv("COHEN_CACHE_DIR", "data/classes")
CACHE_VERSION = 1

# Default truncation bounds
DEFAULT_D_MAX = 2000  # weight-3/2 coefficients, matches the published tables
DEFAULT_M_MAX = 30    # Brandt matrices / trace identity
DEFAULT_P_MAX = 50    # Hecke eigenvalue sweeps
DEFAULT_EMBEDDING_D_MAX = 500

# Quaternion algebra search: pairs (a, b) with |a| + |b| up to this bound
ALGEBRA_SEARCH_BOUND = 4000

# Eichler order construction: zero divisors tried per prime before giving up
SPLITTING_RETRIES = 8

# Rational eigenspace splitting
EIGEN_START_PRIMES = 3   # good primes used before checking dimensions
EIGEN_MAX_PRIMES = 12    # hard cap on good primes

# Class enumeration: norms up to this bound form the right-order invariant
CLASS_INVARIANT_BOUND = 3

# Parallelism for coefficient sweeps and Brandt pairs
WORKERS = int(os.getenv("COHEN_WORKERS", "1"))

# Logging / progress
LOG_LEVEL = os.getenv("COHEN_LOG_LEVEL", "WARNING")
SHOW_PROGRESS = os.getenv("COHEN_PROGRESS", "0") == "1"

# Output
CSV_LINE_TERMINATOR = "\n"
SUPPORTED_FORMATS = ("csv", "json")

# Verification suites exposed by the CLI
VERIFY_SUITES = ("mass", "rowsum", "trace", "hecke", "congruence", "corollary", "embedding")
