"""Custom exceptions for the grasp-evaluation simulator."""

from shared.constants import (
    EXIT_CONFIGURATION_ERROR,
    EXIT_MESH_ERROR,
    EXIT_OUTPUT_ERROR,
    EXIT_SIMULATION_ERROR,
)


class DefGraspException(Exception):
    """Base exception for all simulator errors.

    Carries a stable problem type and title for the manifest and the
    process exit code the CLI reports when the error escapes a command.
    """

    def __init__(
        self,
        message: str,
        problem_type: str,
        title: str,
        exit_code: int = 1,
    ) -> None:
        """Initialize the exception.

        Args:
            message: Human-readable error detail
            problem_type: Problem type identifier (e.g., 'mesh-error')
            title: Short human-readable summary
            exit_code: Process exit code for the CLI
        """
        super().__init__(message)
        self.message = message
        self.problem_type = problem_type
        self.title = title
        self.exit_code = exit_code


class ConfigurationError(DefGraspException):
    """Raised when the run configuration is invalid."""

    def __init__(self, message: str) -> None:
        super().__init__(
            message=message,
            problem_type="configuration-error",
            title="Configuration Error",
            exit_code=EXIT_CONFIGURATION_ERROR,
        )


class MeshError(DefGraspException):
    """Raised when a tetrahedral mesh cannot be used."""

    def __init__(self, message: str, problem_type: str = "mesh-error", title: str = "Mesh Error") -> None:
        super().__init__(message=message, problem_type=problem_type, title=title, exit_code=EXIT_MESH_ERROR)


class MeshParseError(MeshError):
    """Raised when a mesh file is malformed or uses an unsupported format."""

    def __init__(self, message: str) -> None:
        super().__init__(message, problem_type="mesh-parse-error", title="Mesh Parse Error")


class MeshValidationError(MeshError):
    """Raised for inverted or degenerate elements, bad indices or disconnected meshes."""

    def __init__(self, message: str, element_index: int | None = None) -> None:
        super().__init__(message, problem_type="mesh-validation-error", title="Mesh Validation Error")
        self.element_index = element_index


class SimulationError(DefGraspException):
    """Raised when a simulation cannot continue."""

    def __init__(
        self, message: str, problem_type: str = "simulation-error", title: str = "Simulation Error"
    ) -> None:
        super().__init__(message=message, problem_type=problem_type, title=title, exit_code=EXIT_SIMULATION_ERROR)


class ElementInversionError(SimulationError):
    """Raised when an element's deformation gradient has non-positive determinant."""

    def __init__(self, element_index: int, determinant: float) -> None:
        super().__init__(
            f"Element {element_index} inverted (det F = {determinant:.3e})",
            problem_type="element-inversion",
            title="Element Inversion",
        )
        self.element_index = element_index
        self.determinant = determinant


class NewtonConvergenceError(SimulationError):
    """Raised when the implicit step does not reach its residual tolerance."""

    def __init__(self, residual: float, iterations: int) -> None:
        super().__init__(
            f"Newton solve did not converge after {iterations} iterations (residual {residual:.3e} N)",
            problem_type="newton-non-convergence",
            title="Newton Non-Convergence",
        )
        self.residual = residual
        self.iterations = iterations


class LinearSolveError(SimulationError):
    """Raised when the linear system of a Newton iteration cannot be solved."""

    def __init__(self, message: str) -> None:
        super().__init__(message, problem_type="linear-solve-error", title="Linear Solve Error")


class SqueezeConvergenceError(SimulationError):
    """Raised when the grasp force does not settle within the time budget."""

    def __init__(self, reason: str) -> None:
        super().__init__(
            f"Squeeze did not converge: {reason}",
            problem_type="squeeze-non-convergence",
            title="Squeeze Non-Convergence",
        )
        self.reason = reason


class GraspPoseError(SimulationError):
    """Raised when a grasp pose intersects the object at its initial separation."""

    def __init__(self, message: str) -> None:
        super().__init__(message, problem_type="grasp-pose-error", title="Grasp Pose Error")


class OutputError(DefGraspException):
    """Raised when result files cannot be written or read back."""

    def __init__(self, message: str) -> None:
        super().__init__(
            message=message,
            problem_type="output-error",
            title="Output Error",
            exit_code=EXIT_OUTPUT_ERROR,
        )
