"""Cubic slice dynamics: exact angles, rays, orbit portraits, tessellations and figures.

Angles are exact fractions written as "p/q" strings. Structured results are
returned as dictionaries; renders are numpy arrays of shape (height, width, 3).
"""

import json as _json

from . import _core
from ._core import (
    basilica_partner,
    check_names,
    coperiodic_angles,
    export_table,
    mobius_count,
    periodic_angles,
    render_julia,
    render_slice,
    w_boundary_angles,
)

__all__ = [
    "basilica_partner",
    "check_names",
    "coperiodic_angles",
    "export_table",
    "lamination",
    "mobius_count",
    "orbit_portrait",
    "periodic_angles",
    "psi",
    "psi_hat",
    "quotient_check",
    "render_julia",
    "render_slice",
    "run_suite",
    "tessellate",
    "trace_dynamical_ray",
    "trace_parameter_ray",
    "w_boundary_angles",
]


def _decoded(fn):
    def wrapper(*args, **kwargs):
        return _json.loads(fn(*args, **kwargs))

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


lamination = _decoded(_core.lamination)
trace_dynamical_ray = _decoded(_core.trace_dynamical_ray)
trace_parameter_ray = _decoded(_core.trace_parameter_ray)
orbit_portrait = _decoded(_core.orbit_portrait)
tessellate = _decoded(_core.tessellate)
psi = _decoded(_core.psi)
quotient_check = _decoded(_core.quotient_check)
psi_hat = _decoded(_core.psi_hat)
run_suite = _decoded(_core.run_suite)
