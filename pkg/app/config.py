import os

from dotenv import load_dotenv

load_dotenv()
DEFAULT_SEED = int(os.getenv("SIGMA_MAX_SEED", "0"))
DEFAULT_GRID = os.getenv("SIGMA_MAX_GRID", "64x64")
DEFAULT_TOLERANCE = float(os.getenv("SIGMA_MAX_TOLERANCE", "1e-9"))
LOG_FILE = os.getenv("SIGMA_MAX_LOG_FILE", "info.log")
LOG_LEVEL = os.getenv("SIGMA_MAX_LOG_LEVEL", "DEBUG")

# Пределы полного перебора
MAX_ENUMERATION_SIZE = 20
MAX_AXIOM_CHECK_SIZE = 10
MAX_COMPOSITION_ORACLE_SIZE = 5
ROUND_TRIP_TOLERANCE = 1e-12
