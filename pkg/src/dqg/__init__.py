"""Exact workbench for finite measured Hopf *-algebroids over a base (B, Gamma)."""

from dqg.base import InvalidInstance, NotApplicable
from dqg.builders import example_crossed, example_group_algebra, example_pair, example_sweedler
from dqg.checks import REGISTRY, SUITES, run_suite
from dqg.exactlin import GaussianRational, GramMap, GramSpace, gq, is_psd_hermitian
from dqg.instance import Instance
from dqg.io import emit_instance, load_instance

__all__ = [
    "GaussianRational",
    "GramSpace",
    "GramMap",
    "gq",
    "is_psd_hermitian",
    "Instance",
    "InvalidInstance",
    "NotApplicable",
    "example_pair",
    "example_crossed",
    "example_group_algebra",
    "example_sweedler",
    "load_instance",
    "emit_instance",
    "run_suite",
    "REGISTRY",
    "SUITES",
]
