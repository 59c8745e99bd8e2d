"""Verification toolkit for classical and quantum homomorphisms of finite structures."""

from . import catalog, fileio, games, linalg, qmonad, structures, translations
from .catalog import catalog_get, catalog_ids
from .games import Strategy, check_perfect, strategy_from_cert, winning_probability
from .linalg import GaussianRational, Matrix
from .qmonad import QDist, QHomCert, kleisli_compose, lift, mu, verify_qhom
from .report import PreconditionError, Report, Violation
from .structures import Homomorphism, Signature, Structure, find_homomorphism

__all__ = [
    "catalog",
    "fileio",
    "games",
    "linalg",
    "qmonad",
    "structures",
    "translations",
    "catalog_get",
    "catalog_ids",
    "Strategy",
    "check_perfect",
    "strategy_from_cert",
    "winning_probability",
    "GaussianRational",
    "Matrix",
    "QDist",
    "QHomCert",
    "kleisli_compose",
    "lift",
    "mu",
    "verify_qhom",
    "PreconditionError",
    "Report",
    "Violation",
    "Homomorphism",
    "Signature",
    "Structure",
    "find_homomorphism",
]
