"""Exact computations on Gamma0(N): cusps, width-one conjugation, matrix counts,
Hecke cosets and the sup-norm exponent derivation."""

import json
from fractions import Fraction

from . import _core
from ._core import CuspnormError

__all__ = ["CuspnormError", "cusps", "reduce", "count", "hecke", "exponent", "fourier", "smooth_count", "run"]


def _q(v):
    return str(Fraction(v)) if not isinstance(v, str) else v


def cusps(level):
    return json.loads(_core.cusps(level))


def reduce(level, x, y):
    return json.loads(_core.reduce(level, _q(x), _q(y)))


def count(level, m, l, x, y, delta=1):
    return json.loads(_core.count(level, m, l, _q(delta), _q(x), _q(y)))


def hecke(level, m, l):
    return json.loads(_core.hecke(level, m, l))


def exponent(case="main"):
    return json.loads(_core.exponent(case))


def fourier(level, m, y):
    return json.loads(_core.fourier(level, m, _q(y)))


def smooth_count(x, level):
    return _core.smooth_count(x, level)


def run(*args):
    """Runs a CLI command in-process; returns (exit_code, stdout, stderr)."""
    return _core.run_cli([str(a) for a in args])
