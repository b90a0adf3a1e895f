"""Executable action networks for language-driven robot control.

An extended Petri net engine (external places and transitions, timed
transitions, merge composition), PNML I/O, a live runner, the standard
action controller and Move net, an operator command grammar, an
asynchronous problem solver, a 2D kinematic world, and an HTTP control
surface.
"""

from .actions import (
    Aspect,
    MoveXnetPlaces,
    StandardActionPlaces,
    aspect_of,
    build_move_xnet,
    build_standard_controller,
)
from .channel import MotionChannel
from .commands import ActSpec, CommandParser, render_command
from .petri import Arc, Marking, PetriNet, Place, Transition, enabled_set, fire, is_enabled, merge_nets
from .pnml import PnmlDocument, parse_pnml, serialize_pnml
from .runner import HookRegistry, Runner, RunnerEvent
from .solver import Solver, SolverConfig, WorldModel, plan_trajectory
from .world import World, load_world

__version__ = "0.1.0"
