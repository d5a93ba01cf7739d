"""Multiplierless 8-point DCT approximations from the parametrized Loeffler
factorization: exact construction, figures of merit, Pareto search, fast
add/shift kernels and a JPEG-like evaluation harness."""

__version__ = "0.1.0"
