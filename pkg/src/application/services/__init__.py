"""Orchestration services: coordinate simulation runs and dataset output."""

from .evaluation_service import EvaluationService, GraspJob, RunResult, evaluate_grasp

__all__ = ["EvaluationService", "GraspJob", "RunResult", "evaluate_grasp"]
