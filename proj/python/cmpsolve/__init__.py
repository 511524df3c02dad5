"""Python interface to the cmp grid motion planning library."""

from pathlib import Path

from ._core import (
    Error,
    InfeasibleError,
    Instance,
    InternalError,
    ParseError,
    Solution,
    SolverFailure,
    UnsupportedInstance,
    ValidationError,
    generate,
    lower_bound,
    optimize,
    read_instance,
    read_solution,
    render_svg,
    solve,
    transform_instance,
    transform_solution,
    validate,
)


def load_instance(path):
    return read_instance(Path(path).read_text())


def load_solution(path, instance):
    return read_solution(Path(path).read_text(), instance)


__all__ = [
    "Error",
    "InfeasibleError",
    "Instance",
    "InternalError",
    "ParseError",
    "Solution",
    "SolverFailure",
    "UnsupportedInstance",
    "ValidationError",
    "generate",
    "load_instance",
    "load_solution",
    "lower_bound",
    "optimize",
    "read_instance",
    "read_solution",
    "render_svg",
    "solve",
    "transform_instance",
    "transform_solution",
    "validate",
]
