"""Corpora, functional comparisons, K-functional checks and named suites."""

from rispace.harness.compare import EquivalenceReport, compare_functionals, compare_with_doubling
from rispace.harness.corpus import KINDS, Corpus, gen_corpus
from rispace.harness.kfunctional import kfunctional_check
from rispace.harness.report import Assertion, SuiteResult
from rispace.harness.suites import REGISTRY, SUITE_NAMES, UnknownSuiteError, run_suite

__all__ = [
    "KINDS",
    "Corpus",
    "gen_corpus",
    "EquivalenceReport",
    "compare_functionals",
    "compare_with_doubling",
    "kfunctional_check",
    "Assertion",
    "SuiteResult",
    "REGISTRY",
    "SUITE_NAMES",
    "UnknownSuiteError",
    "run_suite",
]
