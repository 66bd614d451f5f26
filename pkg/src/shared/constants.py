"""Shared constants across the simulator.

Physical defaults, experiment identifiers, output schema and exit codes live
here so that simulation, experiments and I/O agree on one set of values.
"""

from __future__ import annotations

from typing import Literal

# ---------------------------------------------------------------------------
# Process exit codes
# ---------------------------------------------------------------------------
EXIT_OK = 0
EXIT_CONFIGURATION_ERROR = 2
EXIT_MESH_ERROR = 3
EXIT_SIMULATION_ERROR = 4
EXIT_OUTPUT_ERROR = 5

# ---------------------------------------------------------------------------
# Physical defaults (SI units)
# ---------------------------------------------------------------------------
STANDARD_GRAVITY = 9.81
DEFAULT_TIME_STEP = 1.0 / 1500.0
FORCE_SAFETY_FACTOR = 1.3
MAX_GRIPPER_OPENING = 0.08

# ---------------------------------------------------------------------------
# Experiment identifiers
# ---------------------------------------------------------------------------
PICKUP: Literal["pickup"] = "pickup"
REORIENT: Literal["reorient"] = "reorient"
LINEAR_ACCELERATION: Literal["lin_acc"] = "lin_acc"
ANGULAR_ACCELERATION: Literal["ang_acc"] = "ang_acc"

ExperimentName = Literal["pickup", "reorient", "lin_acc", "ang_acc"]
ALL_EXPERIMENTS: tuple[ExperimentName, ...] = (PICKUP, REORIENT, LINEAR_ACCELERATION, ANGULAR_ACCELERATION)

# ---------------------------------------------------------------------------
# Output schema
# ---------------------------------------------------------------------------
SCHEMA_VERSION = 1
SCHEMA_LINE = f"# schema_version={SCHEMA_VERSION}"

GRASP_COLUMNS = ("id", "px", "py", "pz", "qx", "qy", "qz", "qw", "separation")

FEATURE_COLUMNS = (
    "grasp_id",
    "pure_dist",
    "perp_dist",
    "num_contacts",
    "edge_dist",
    "squeeze_dist",
    "gripper_sep",
    "grav_align",
    "contact_area",
)

METRIC_COLUMNS = (
    "grasp_id",
    "experiment",
    "pickup_success",
    "max_stress",
    "max_deformation",
    "strain_energy",
    "linear_instability",
    "angular_instability",
    "deform_controllability",
    "censored_dirs",
)

REORIENTATION_COLUMNS = (
    "grasp_id",
    "axis_index",
    "ax",
    "ay",
    "az",
    "angle",
    "max_deformation",
    "max_stress",
    "failed",
)

FEATURES_FILE = "features.csv"
METRICS_FILE = "metrics.csv"
REORIENTATION_FILE = "reorientation.csv"
MANIFEST_FILE = "manifest.json"
SNAPSHOT_DIR = "snapshots"

# ---------------------------------------------------------------------------
# Logging / tracing context keys
# ---------------------------------------------------------------------------
UNKNOWN_GRASP_ID = "GRASP_NOT_SET"
UNKNOWN_EXPERIMENT = "EXPERIMENT_NOT_SET"
GRASP_CONTEXT_KEY = "grasp_id"
EXPERIMENT_CONTEXT_KEY = "experiment"
