import os
from importlib import import_module

environment = os.environ.get("ROCOFBENCH_ENVIRONMENT", "local")
if environment not in ["local", "test"]:
    raise EnvironmentError("Please define valid ROCOFBENCH_ENVIRONMENT.")

settings = import_module(f"rocofbench.config.settings.{environment}")
