"""Application layer: domain models and orchestration services."""
