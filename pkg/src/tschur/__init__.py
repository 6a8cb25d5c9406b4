"""Truncated q-series, eta quotients, and a verification harness for
overpartition and t-Schur overpartition identities and congruences."""

from .congruences import check_prime_family, check_progression, legendre, scan_progressions
from .expr import evaluate, parse_expression, to_text
from .families import FamilySpec, family_gf, parse_family
from .identities import verify_dissection, verify_identity
from .manifest import register_manifest, shipped_claims
from .report import VerificationReport, to_json
from .runner import run_claims
from .series import EXACT, Modular, Ring, Series, make_series

__all__ = [
    "EXACT",
    "FamilySpec",
    "Modular",
    "Ring",
    "Series",
    "VerificationReport",
    "check_prime_family",
    "check_progression",
    "evaluate",
    "family_gf",
    "legendre",
    "make_series",
    "parse_expression",
    "parse_family",
    "register_manifest",
    "run_claims",
    "scan_progressions",
    "shipped_claims",
    "to_json",
    "to_text",
    "verify_dissection",
    "verify_identity",
]
