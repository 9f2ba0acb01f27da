"""Fixture catalogue: recorded instances with their expected invariants."""

from .runner import (CHECKS, Fixture, VerificationReport, fixture_path, load_fixtures,
                     run_all, run_fixture)

__all__ = ["CHECKS", "Fixture", "VerificationReport", "fixture_path", "load_fixtures",
           "run_all", "run_fixture"]
