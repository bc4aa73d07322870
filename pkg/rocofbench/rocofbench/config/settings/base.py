"""
Base settings for rocofbench.

Values come from the environment (optionally a .env file at the
repository root) and fall back to the defaults below.
"""
import os
from pathlib import Path

from dotenv import load_dotenv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent.parent

load_dotenv(BASE_DIR.parent.parent / ".env")

# Logging
LOG_LEVEL = os.getenv("ROCOFBENCH_LOG_LEVEL", "INFO")
LOG_SERIALIZE = os.getenv("ROCOFBENCH_LOG_SERIALIZE", "False") != "False"

# Acquisition and reporting
SAMPLING_RATE = float(os.getenv("ROCOFBENCH_SAMPLING_RATE", "5000"))
REPORTING_RATE = float(os.getenv("ROCOFBENCH_REPORTING_RATE", "50"))
NOMINAL_FREQUENCY = float(os.getenv("ROCOFBENCH_NOMINAL_FREQUENCY", "50"))

# Runs
DEFAULT_SEED = int(os.getenv("ROCOFBENCH_SEED", "1"))
OUTPUT_DIR = Path(os.getenv("ROCOFBENCH_OUTPUT_DIR", "results"))
RESULT_WRITER = os.getenv("ROCOFBENCH_RESULT_WRITER", "csv")
