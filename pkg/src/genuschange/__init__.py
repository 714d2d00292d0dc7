"""Exact arithmetic for genus change of curves over imperfect fields.

The package computes invariants of one-dimensional complete local rings
over fields K = F_q(t_1, ..., t_c) of characteristic p: valuations and
p-th power obstructions (q invariants), delta invariants and conductors
of the normalization after inseparable base change, Jacobian numbers,
and the kernels of differential maps along a chain of base changes.
"""

from .series import PrecisionConfig, PrecisionExhausted

__all__ = ["PrecisionConfig", "PrecisionExhausted"]
__version__ = "0.1.0"
