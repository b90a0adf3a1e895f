"""Operator command grammar and the ActSpec message it produces.

Three fixed productions, case-insensitive, trailing punctuation optional:

    "<Agent>, (amble|move|dash) to the <color> box!"
    "<Agent>, stop moving!"
    "<Agent>, continue moving!"

A parsed command becomes an ActSpec, the JSON message crossing from the
language side to the action side. Notifications travelling the other way
reuse the same type with ``kind="notification"`` and a message payload.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field

DEFAULT_COLORS = ("red", "green", "blue", "yellow")

VERB_SPEEDS = {"amble": "slow", "move": "normal", "dash": "fast"}
SPEED_VERBS = {speed: verb for verb, speed in VERB_SPEEDS.items()}

PREDICATES = ("move", "stop", "continue", "redirect-implicit")


class CommandParseError(Exception):
    """Input matched no production; carries the nearest production as a hint."""

    def __init__(self, message: str, hint: str | None = None):
        super().__init__(message)
        self.hint = hint


class VocabularyError(CommandParseError):
    """Production matched but a slot word is outside the vocabulary."""


@dataclass(frozen=True)
class GoalDescriptor:
    color: str
    shape: str = "box"


@dataclass(frozen=True)
class ActSpec:
    """Structured action request or notification.

    Commands carry a predicate; move commands also carry speed and goal.
    Notifications carry a human-readable message and optionally the
    object they are about.
    """

    kind: str
    agent: str
    predicate: str | None = None
    speed: str | None = None
    goal: GoalDescriptor | None = None
    sequence: int = 0
    message: str | None = None
    object: dict | None = field(default=None)

    def __post_init__(self):
        if self.kind not in ("command", "notification"):
            raise ValueError(f"bad ActSpec kind {self.kind!r}")
        if self.kind == "command":
            if self.predicate not in PREDICATES:
                raise ValueError(f"bad predicate {self.predicate!r}")
            is_move = self.predicate in ("move", "redirect-implicit")
            if is_move != (self.goal is not None):
                raise ValueError("goal present iff predicate is move")
            if is_move != (self.speed is not None):
                raise ValueError("speed present iff predicate is move")

    def to_json(self) -> dict:
        data = {"kind": self.kind, "agent": self.agent, "sequence": self.sequence}
        if self.predicate is not None:
            data["predicate"] = self.predicate
        if self.speed is not None:
            data["speed"] = self.speed
        if self.goal is not None:
            data["goal"] = {"color": self.goal.color, "shape": self.goal.shape}
        if self.message is not None:
            data["message"] = self.message
        if self.object is not None:
            data["object"] = self.object
        return data

    def to_json_str(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "ActSpec":
        goal = data.get("goal")
        return cls(
            kind=data["kind"],
            agent=data["agent"],
            predicate=data.get("predicate"),
            speed=data.get("speed"),
            goal=GoalDescriptor(**goal) if goal else None,
            sequence=data.get("sequence", 0),
            message=data.get("message"),
            object=data.get("object"),
        )


_MOVE_RE = re.compile(
    r"^\s*(?P<agent>[A-Za-z][A-Za-z0-9_-]*)\s*,\s*(?P<verb>amble|move|dash)\s+to\s+the\s+"
    r"(?P<color>[A-Za-z]+)\s+box\s*[!.]?\s*$",
    re.IGNORECASE,
)
_STOP_RE = re.compile(
    r"^\s*(?P<agent>[A-Za-z][A-Za-z0-9_-]*)\s*,\s*stop\s+moving\s*[!.]?\s*$", re.IGNORECASE
)
_CONTINUE_RE = re.compile(
    r"^\s*(?P<agent>[A-Za-z][A-Za-z0-9_-]*)\s*,\s*continue\s+moving\s*[!.]?\s*$", re.IGNORECASE
)

PRODUCTIONS = (
    "<Agent>, (amble|move|dash) to the <color> box!",
    "<Agent>, stop moving!",
    "<Agent>, continue moving!",
)


class CommandParser:
    """Deterministic parser; assigns a monotonic sequence number per parse."""

    def __init__(self, colors: tuple[str, ...] = DEFAULT_COLORS):
        self.colors = tuple(c.lower() for c in colors)
        self._sequence = itertools.count(1)

    def parse(self, text: str) -> ActSpec:
        m = _MOVE_RE.match(text)
        if m:
            color = m.group("color").lower()
            if color not in self.colors:
                raise VocabularyError(
                    f"unknown color {color!r}; known colors: {', '.join(self.colors)}",
                    hint=PRODUCTIONS[0],
                )
            return ActSpec(
                kind="command",
                agent=m.group("agent"),
                predicate="move",
                speed=VERB_SPEEDS[m.group("verb").lower()],
                goal=GoalDescriptor(color),
                sequence=next(self._sequence),
            )
        m = _STOP_RE.match(text)
        if m:
            return ActSpec(kind="command", agent=m.group("agent"),
                           predicate="stop", sequence=next(self._sequence))
        m = _CONTINUE_RE.match(text)
        if m:
            return ActSpec(kind="command", agent=m.group("agent"),
                           predicate="continue", sequence=next(self._sequence))
        raise CommandParseError(
            f"could not parse {text.strip()!r}", hint=self._nearest(text)
        )

    @staticmethod
    def _nearest(text: str) -> str:
        lowered = text.lower()
        if "stop" in lowered:
            return PRODUCTIONS[1]
        if "continue" in lowered:
            return PRODUCTIONS[2]
        return PRODUCTIONS[0]


def render_command(spec: ActSpec) -> str:
    """Canonical text for a command ActSpec; reparses to equal fields."""
    if spec.kind != "command":
        raise ValueError("only command ActSpecs have a canonical surface form")
    if spec.predicate in ("move", "redirect-implicit"):
        verb = SPEED_VERBS[spec.speed]
        return f"{spec.agent}, {verb} to the {spec.goal.color} box!"
    if spec.predicate == "stop":
        return f"{spec.agent}, stop moving!"
    return f"{spec.agent}, continue moving!"
