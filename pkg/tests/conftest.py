"""Shared pytest configuration."""

import os

os.environ.setdefault("ROCOFBENCH_ENVIRONMENT", "test")
