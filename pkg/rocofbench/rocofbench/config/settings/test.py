"""
Settings for testing.
Keeps logs quiet and pins the seed.
"""
from rocofbench.config.settings.base import *

LOG_LEVEL = "WARNING"
DEFAULT_SEED = 1
