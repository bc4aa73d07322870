from rocofbench.config.settings.base import *

LOG_LEVEL = os.getenv("ROCOFBENCH_LOG_LEVEL", "DEBUG")
