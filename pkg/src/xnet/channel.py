"""Shared context between external transitions and the motion backend."""

from __future__ import annotations

from dataclasses import dataclass

OPERATIONS = ("move", "suspend", "resume", "restart", "none")


@dataclass
class MotionChannel:
    """Mutable bridge object: the net's hooks write the target operation,
    the world writes back the current position. Guarded by the solver's
    lock; hooks and request handling never see a half-updated channel."""

    target_operation: str = "none"
    target_position: tuple[float, float] | None = None
    current_position: tuple[float, float] = (0.0, 0.0)
    speed: float = 1.0

    def set_operation(self, op: str) -> None:
        if op not in OPERATIONS:
            raise ValueError(f"bad channel operation {op!r}")
        self.target_operation = op

    def as_dict(self) -> dict:
        return {
            "target_operation": self.target_operation,
            "target_position": list(self.target_position) if self.target_position else None,
            "current_position": list(self.current_position),
            "speed": self.speed,
        }
