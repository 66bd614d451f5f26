"""Exceptions module."""

from .base import (
    ConfigurationError,
    DefGraspException,
    ElementInversionError,
    GraspPoseError,
    LinearSolveError,
    MeshError,
    MeshParseError,
    MeshValidationError,
    NewtonConvergenceError,
    OutputError,
    SimulationError,
    SqueezeConvergenceError,
)

__all__ = [
    "DefGraspException",
    "ConfigurationError",
    "MeshError",
    "MeshParseError",
    "MeshValidationError",
    "SimulationError",
    "ElementInversionError",
    "NewtonConvergenceError",
    "LinearSolveError",
    "SqueezeConvergenceError",
    "GraspPoseError",
    "OutputError",
]
