from __future__ import annotations

__all__: tuple[str, ...] = (
    "linalg",
    "entanglement",
    "bell_statistics",
    "models",
    "simulators",
    "datasets",
    "report",
    "cli",
    "settings",
)
