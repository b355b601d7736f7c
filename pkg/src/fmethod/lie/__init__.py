"""Graded Lie algebras, their principal-series actions, and built-in settings."""

from .action import (RepWeight, alpha, alpha_full, beta, beta_full, coordinate_space, dpi,
                     dpi_hat, generic_point, is_torus_direction, mu_from_lambda)
from .builtin import Setting, builtin_setting, juhl, juhl_lie, rankin_cohen, rankin_cohen_lie, sl2
from .graded import GradedLie

__all__ = [
    "GradedLie", "RepWeight", "Setting", "alpha", "alpha_full", "beta", "beta_full",
    "builtin_setting", "coordinate_space", "dpi", "dpi_hat", "generic_point",
    "is_torus_direction", "juhl", "juhl_lie", "mu_from_lambda", "rankin_cohen",
    "rankin_cohen_lie", "sl2",
]
