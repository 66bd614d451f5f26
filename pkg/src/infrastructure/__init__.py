"""Infrastructure layer: file formats, run context and tracing."""
