from neutral4.suites.registry import SUITES, Suite, describe_suite, get_suite, list_suites
from neutral4.suites.runner import run, run_suite

__all__ = ["SUITES", "Suite", "describe_suite", "get_suite", "list_suites", "run", "run_suite"]
