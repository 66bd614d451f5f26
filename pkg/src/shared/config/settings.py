"""Run configuration using Pydantic BaseSettings."""

from __future__ import annotations

import hashlib
import json
import math
from functools import lru_cache
from pathlib import Path

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, computed_field, field_validator, model_validator
from pydantic_settings import (
    BaseSettings,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
)

from shared.constants import (
    ALL_EXPERIMENTS,
    DEFAULT_TIME_STEP,
    MAX_GRIPPER_OPENING,
    STANDARD_GRAVITY,
    ExperimentName,
)
from shared.exceptions import ConfigurationError

# Load .env file into os.environ so that DEFGRASP_* overrides are visible to every source
load_dotenv()


class ApplicationSettings(BaseModel):
    """Application-level settings (maps to DefGrasp.ApplicationSettings in JSON)."""

    model_config = ConfigDict(populate_by_name=True)

    name: str = Field(default="DefGrasp Simulator", alias="Name")
    version: str = Field(default="0.1.0", alias="Version")
    log_level: str = Field(default="INFO", alias="LogLevel")


class ObjectSettings(BaseModel):
    """Object mesh and material (maps to DefGrasp.Object in JSON)."""

    model_config = ConfigDict(populate_by_name=True)

    mesh_path: Path | None = Field(
        default=None, alias="MeshPath", description="Gmsh v2.2 ASCII (.msh) or plain .tet mesh"
    )
    density: float = Field(default=1000.0, alias="Density", gt=0.0, description="Mass density in kg/m^3")
    youngs_modulus: float | list[float] = Field(
        default=2.0e5,
        alias="YoungsModulus",
        description="Young's modulus in Pa; a list runs one sweep directory per value",
    )
    poisson_ratio: float = Field(default=0.3, alias="PoissonRatio", ge=0.0, lt=0.5)
    friction: float = Field(default=0.7, alias="Friction", gt=0.0, description="Coulomb coefficient, object-pad")

    @field_validator("youngs_modulus")
    @classmethod
    def _positive_moduli(cls, value: float | list[float]) -> float | list[float]:
        values = value if isinstance(value, list) else [value]
        if not values:
            raise ValueError("YoungsModulus sweep list must not be empty")
        if any(not math.isfinite(v) or v <= 0.0 for v in values):
            raise ValueError("YoungsModulus values must be positive and finite")
        return value

    @field_validator("mesh_path")
    @classmethod
    def _mesh_exists(cls, value: Path | None) -> Path | None:
        if value is not None and not value.is_file():
            raise ValueError(f"mesh file not found: {value}")
        return value


class SimulationSettings(BaseModel):
    """Time integration and linear algebra (maps to DefGrasp.Simulation in JSON)."""

    model_config = ConfigDict(populate_by_name=True)

    gravity: float = Field(default=STANDARD_GRAVITY, alias="Gravity", gt=0.0)
    time_step: float = Field(default=DEFAULT_TIME_STEP, alias="TimeStep", gt=0.0, le=0.01)
    newton_tolerance: float = Field(
        default=1e-6, alias="NewtonTolerance", gt=0.0, description="Relative residual tolerance"
    )
    newton_absolute_tolerance: float = Field(default=1e-12, alias="NewtonAbsoluteTolerance", gt=0.0)
    newton_max_iterations: int = Field(default=20, alias="NewtonMaxIterations", ge=1, le=200)
    max_step_halvings: int = Field(
        default=3,
        alias="MaxStepHalvings",
        ge=0,
        le=10,
        description="Substep retries (dt halved) before a Newton failure is reported",
    )
    rayleigh_alpha: float = Field(default=0.0, alias="RayleighAlpha", ge=0.0)
    rayleigh_beta: float = Field(default=0.002, alias="RayleighBeta", ge=0.0)
    direct_solver_max_unknowns: int = Field(default=10_000, alias="DirectSolverMaxUnknowns", ge=0)
    cg_tolerance: float = Field(default=1e-8, alias="CgTolerance", gt=0.0)
    settle_time: float = Field(
        default=0.2, alias="SettleTime", ge=0.0, description="Free settling on the platform before grasping"
    )
    strain_energy_half_factor: bool = Field(default=True, alias="StrainEnergyHalfFactor")


class ContactSettings(BaseModel):
    """Penalty contact between surface nodes, pads and platform (maps to DefGrasp.Contact in JSON)."""

    model_config = ConfigDict(populate_by_name=True)

    penalty_scale: float = Field(
        default=100.0, alias="PenaltyScale", gt=0.0, description="k_n = scale * E * characteristic length"
    )
    tangential_stiffness_ratio: float = Field(default=1.0, alias="TangentialStiffnessRatio", gt=0.0)
    detection_margin: float = Field(default=5e-4, alias="DetectionMargin", ge=0.0)
    pad_thickness: float = Field(default=0.01, alias="PadThickness", gt=0.0)
    loss_debounce_steps: int = Field(default=3, alias="LossDebounceSteps", ge=1)
    gross_slip_is_loss: bool = Field(default=True, alias="GrossSlipIsLoss")


class GripperSettings(BaseModel):
    """Parallel-jaw gripper geometry and finger dynamics (maps to DefGrasp.Gripper in JSON)."""

    model_config = ConfigDict(populate_by_name=True)

    pad_width: float = Field(default=0.02, alias="PadWidth", gt=0.0)
    pad_length: float = Field(default=0.04, alias="PadLength", gt=0.0)
    max_half_travel: float = Field(default=MAX_GRIPPER_OPENING / 2.0, alias="MaxHalfTravel", gt=0.0)
    finger_mass: float = Field(default=0.05, alias="FingerMass", gt=0.0)
    joint_damping: float = Field(default=50.0, alias="JointDamping", ge=0.0, description="N*s/m per finger")
    clearance: float = Field(
        default=0.005, alias="Clearance", ge=0.0, description="Per-side gap between pad and object before squeeze"
    )

    @computed_field
    @property
    def max_opening(self) -> float:
        """Largest finger separation the gripper can reach."""
        return 2.0 * self.max_half_travel


class ControllerSettings(BaseModel):
    """Force filter, PI controller and squeeze convergence (maps to DefGrasp.Controller in JSON)."""

    model_config = ConfigDict(populate_by_name=True)

    filter_alpha: float = Field(default=0.05, alias="FilterAlpha", gt=0.0, le=1.0)
    proportional_gain: float = Field(default=1.0, alias="ProportionalGain", ge=0.0)
    integral_gain: float = Field(default=10.0, alias="IntegralGain", ge=0.0, description="1/s")
    max_force: float = Field(default=70.0, alias="MaxForce", gt=0.0, description="Drive force cap per finger")
    convergence_band: float = Field(default=0.05, alias="ConvergenceBand", gt=0.0, lt=1.0)
    convergence_window: float = Field(default=0.2, alias="ConvergenceWindow", gt=0.0)
    time_budget: float = Field(default=5.0, alias="TimeBudget", gt=0.0)


class SamplerSettings(BaseModel):
    """Antipodal sampler parameters (maps to DefGrasp.GraspSource.Sampler in JSON)."""

    model_config = ConfigDict(populate_by_name=True)

    count: int = Field(default=50, alias="Count", ge=0)
    seed: int = Field(default=0, alias="Seed", ge=0)
    max_attempts_factor: int = Field(default=100, alias="MaxAttemptsFactor", ge=1)


class GraspSourceSettings(BaseModel):
    """Exactly one of a grasp CSV file or sampler parameters (maps to DefGrasp.GraspSource in JSON)."""

    model_config = ConfigDict(populate_by_name=True)

    file: Path | None = Field(default=None, alias="File")
    sampler: SamplerSettings | None = Field(default=None, alias="Sampler")

    @model_validator(mode="after")
    def _exactly_one_source(self) -> GraspSourceSettings:
        if self.file is None and self.sampler is None:
            self.sampler = SamplerSettings()
        if self.file is not None and self.sampler is not None:
            raise ValueError("GraspSource takes either File or Sampler, not both")
        if self.file is not None and not self.file.is_file():
            raise ValueError(f"grasp file not found: {self.file}")
        return self


class ExperimentSettings(BaseModel):
    """Experiment selection and limits (maps to DefGrasp.Experiments in JSON)."""

    model_config = ConfigDict(populate_by_name=True)

    enabled: list[ExperimentName] = Field(default_factory=lambda: list(ALL_EXPERIMENTS), alias="Enabled")

    platform_speed: float = Field(default=0.05, alias="PlatformSpeed", gt=0.0)
    platform_travel: float = Field(default=0.1, alias="PlatformTravel", gt=0.0)
    hold_time: float = Field(default=5.0, alias="HoldTime", gt=0.0)

    reorientation_speed: float = Field(default=math.pi / 2.0, alias="ReorientationSpeed", gt=0.0)
    reorientation_settle: float = Field(default=0.5, alias="ReorientationSettle", ge=0.0)
    reorientation_angles: list[float] = Field(
        default_factory=lambda: [k * math.pi / 4.0 for k in range(1, 5)], alias="ReorientationAngles", min_length=1
    )
    include_control_state: bool = Field(default=False, alias="IncludeControlState")

    linear_jerk: float = Field(default=1000.0, alias="LinearJerk", gt=0.0)
    linear_limit: float = Field(default=50.0, alias="LinearLimit", gt=0.0)
    angular_jerk: float = Field(default=2500.0, alias="AngularJerk", gt=0.0)
    angular_limit: float = Field(default=1000.0, alias="AngularLimit", gt=0.0)
    direction_indices: list[int] | None = Field(
        default=None, alias="DirectionIndices", description="Subset of the 16 test directions (0-15)"
    )

    grasp_force_override: float | None = Field(
        default=None, alias="GraspForceOverride", gt=0.0, description="Squeeze to this force instead of F_p"
    )

    @field_validator("enabled")
    @classmethod
    def _unique_experiments(cls, value: list[ExperimentName]) -> list[ExperimentName]:
        if len(set(value)) != len(value):
            raise ValueError("Enabled experiments must be unique")
        return value

    @field_validator("direction_indices")
    @classmethod
    def _direction_range(cls, value: list[int] | None) -> list[int] | None:
        if value is not None and (not value or any(i < 0 or i > 15 for i in value)):
            raise ValueError("DirectionIndices must be a non-empty subset of 0..15")
        return value

    @field_validator("reorientation_angles")
    @classmethod
    def _positive_angles(cls, value: list[float]) -> list[float]:
        if any(a <= 0.0 for a in value):
            raise ValueError("ReorientationAngles must be positive")
        return value


class OutputSettings(BaseModel):
    """Result locations (maps to DefGrasp.Output in JSON)."""

    model_config = ConfigDict(populate_by_name=True)

    directory: Path = Field(default=Path("results"), alias="Directory")
    snapshot_stride: float = Field(default=0.1, alias="SnapshotStride", gt=0.0)
    export_snapshots: bool = Field(default=True, alias="ExportSnapshots")


class TelemetrySettings(BaseModel):
    """OpenTelemetry tracing (maps to DefGrasp.Telemetry in JSON)."""

    model_config = ConfigDict(populate_by_name=True)

    tracing_enabled: bool = Field(default=False, alias="TracingEnabled")
    console_exporter: bool = Field(default=False, alias="ConsoleExporter")


# Fields that do not change simulated results and are left out of the config hash.
_NON_SEMANTIC_FIELDS = {"config_path", "threads", "application", "output", "telemetry"}


class RunConfig(BaseSettings):
    """Run configuration loaded from a JSON file, environment variables or arguments.

    Settings can be loaded from:
    1. Constructor arguments (highest priority)
    2. Environment variables (``DEFGRASP_`` prefix, ``__`` nested delimiter)
    3. .env file
    4. JSON run-configuration file (``config_path``)
    5. File secrets (lowest priority)
    """

    model_config = SettingsConfigDict(
        env_prefix="DEFGRASP_",
        env_file=".env",
        env_file_encoding="utf-8",
        env_nested_delimiter="__",
        extra="ignore",
        populate_by_name=True,
    )

    # Bootstrap settings (never read from the JSON file itself)
    config_path: Path | None = Field(default=None, description="JSON run-configuration file")
    threads: int | None = Field(default=None, ge=1, description="Worker processes; overrides --jobs")

    application: ApplicationSettings = Field(default_factory=ApplicationSettings, alias="ApplicationSettings")
    body: ObjectSettings = Field(default_factory=ObjectSettings, alias="Object")
    simulation: SimulationSettings = Field(default_factory=SimulationSettings, alias="Simulation")
    contact: ContactSettings = Field(default_factory=ContactSettings, alias="Contact")
    gripper: GripperSettings = Field(default_factory=GripperSettings, alias="Gripper")
    controller: ControllerSettings = Field(default_factory=ControllerSettings, alias="Controller")
    grasp_source: GraspSourceSettings = Field(default_factory=GraspSourceSettings, alias="GraspSource")
    experiments: ExperimentSettings = Field(default_factory=ExperimentSettings, alias="Experiments")
    output: OutputSettings = Field(default_factory=OutputSettings, alias="Output")
    telemetry: TelemetrySettings = Field(default_factory=TelemetrySettings, alias="Telemetry")

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        """Customise settings sources to include the JSON run-configuration file."""
        from infrastructure.config.json_file_source import JsonConfigFileSettingsSource

        init = init_settings()
        env = env_settings()
        dotenv = dotenv_settings()

        config_path = init.get("config_path") or env.get("config_path") or dotenv.get("config_path")

        return (
            init_settings,
            env_settings,
            dotenv_settings,
            JsonConfigFileSettingsSource(settings_cls, path=config_path),
            file_secret_settings,
        )

    @property
    def youngs_moduli(self) -> list[float]:
        """Young's modulus values to run, one per sweep directory."""
        value = self.body.youngs_modulus
        return list(value) if isinstance(value, list) else [value]

    @property
    def is_sweep(self) -> bool:
        return isinstance(self.body.youngs_modulus, list)

    def for_modulus(self, youngs_modulus: float) -> RunConfig:
        """Return a copy of this configuration with a single Young's modulus."""
        body = self.body.model_copy(update={"youngs_modulus": youngs_modulus})
        return self.model_copy(update={"body": body})

    def config_hash(self) -> str:
        """SHA-256 over every field that influences simulated results."""
        payload = self.model_dump(mode="json", exclude=_NON_SEMANTIC_FIELDS)
        canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def load_run_config(path: Path | str | None = None, **overrides: object) -> RunConfig:
    """Load and validate a run configuration.

    Raises:
        ConfigurationError: when the file is missing or any value is invalid.
    """
    try:
        return RunConfig(config_path=Path(path) if path is not None else None, **overrides)
    except ValidationError as exc:
        details = "; ".join(
            f"{'.'.join(str(loc) for loc in err['loc'])}: {err['msg']}" if err["loc"] else err["msg"]
            for err in exc.errors()
        )
        raise ConfigurationError(f"Invalid run configuration: {details}") from exc


@lru_cache
def get_settings() -> RunConfig:
    """Get cached settings instance.

    Using lru_cache ensures settings are only loaded once.
    """
    return load_run_config()
