# CLI Package
from cli.main import main
from cli.suite import registered_checks, run_suite

__all__ = ["main", "registered_checks", "run_suite"]
