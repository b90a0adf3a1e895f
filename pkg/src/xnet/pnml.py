"""PNML reading and writing, including the net-extension vocabulary.

Standard PNML (place/transition nets, one or more ``<net>`` elements,
``initialMarking`` and ``inscription`` labels) plus a ``<toolspecific
tool="xnet">`` block per node carrying the extensions:

======================  ==========  =======================================
element                 on          meaning
======================  ==========  =======================================
``<kind>``              place       plain | external-input | external-output | merge
``<mergeGroup>``        place       composition group label
``<kind>``              transition  immediate | timed | external
``<delay>``             transition  non-negative tick delay (timed only)
``<hook>``              transition  registered callback name (external only)
======================  ==========  =======================================

Graphics and ``<name>`` labels are tolerated and ignored; toolspecific
blocks of other tools are skipped. Parsing never yields a structurally
invalid net: every failure raises ``PnmlParseError`` (syntax, unknown
extension elements or values) or ``PnmlValidationError`` (well-formed XML
that does not describe a valid net).
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

from .petri import (
    Arc,
    Marking,
    PetriNet,
    Place,
    PlaceKind,
    Transition,
    TransitionKind,
    ValidationError,
)

PNML_NS = "http://www.pnml.org/version-2009/grammar/pnml"
NET_TYPE = "http://www.pnml.org/version-2009/grammar/ptnet"
TOOL_NAME = "xnet"
TOOL_VERSION = "1"

_PLACE_KINDS = {k.value: k for k in PlaceKind}
_TRANSITION_KINDS = {k.value: k for k in TransitionKind}


class PnmlError(Exception):
    """Base class for PNML reader/writer errors."""


class PnmlParseError(PnmlError):
    """Malformed XML or unknown extension vocabulary."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class PnmlValidationError(PnmlError):
    """Well-formed document that does not describe a valid net."""


@dataclass(frozen=True)
class PnmlDocument:
    """Parsed document: nets with their ids and initial markings.

    ``source_name`` is provenance only and excluded from equality, so
    round-trip comparisons are structural.
    """

    nets: tuple[PetriNet, ...]
    initial_markings: tuple[Marking, ...]
    net_ids: tuple[str, ...]
    source_name: str = field(default="", compare=False)

    def __post_init__(self):
        if not (len(self.nets) == len(self.initial_markings) == len(self.net_ids)):
            raise PnmlValidationError("nets, markings and ids must align")
        if len(set(self.net_ids)) != len(self.net_ids):
            raise PnmlValidationError("duplicate net ids in document")
        for net, marking in zip(self.nets, self.initial_markings):
            marking.check_covers(net)

    @classmethod
    def single(cls, net: PetriNet, marking: Marking, net_id: str = "net0",
               source_name: str = "") -> "PnmlDocument":
        return cls((net,), (marking,), (net_id,), source_name)

    def net(self, net_id: str) -> PetriNet:
        return self.nets[self.net_ids.index(net_id)]

    def initial_marking(self, net_id: str) -> Marking:
        return self.initial_markings[self.net_ids.index(net_id)]


def _tag(name: str) -> str:
    return f"{{{PNML_NS}}}{name}"


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _label_text(element: ET.Element, label: str) -> str | None:
    node = element.find(f"{_tag(label)}/{_tag('text')}")
    if node is None:
        # Some writers omit the namespace on nested text elements.
        node = element.find(f"{_tag(label)}/text")
    return None if node is None else (node.text or "").strip()


def _tool_extensions(element: ET.Element, allowed: set[str], context: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for tool in element.findall(_tag("toolspecific")):
        if tool.get("tool") != TOOL_NAME:
            continue
        for child in tool:
            name = _local(child.tag)
            if name not in allowed:
                raise PnmlParseError(f"unknown extension element <{name}> on {context}")
            values[name] = (child.text or "").strip()
    return values


def _parse_place(element: ET.Element) -> tuple[Place, int]:
    place_id = element.get("id")
    if not place_id:
        raise PnmlValidationError("place without id")
    ext = _tool_extensions(element, {"kind", "mergeGroup"}, f"place {place_id!r}")
    kind_text = ext.get("kind", PlaceKind.PLAIN.value)
    if kind_text not in _PLACE_KINDS:
        raise PnmlParseError(f"unknown place kind {kind_text!r} on place {place_id!r}")
    tokens_text = _label_text(element, "initialMarking")
    try:
        tokens = int(tokens_text) if tokens_text else 0
    except ValueError:
        raise PnmlValidationError(f"bad initialMarking {tokens_text!r} on place {place_id!r}") from None
    try:
        place = Place(place_id, _PLACE_KINDS[kind_text], ext.get("mergeGroup") or None)
    except ValidationError as exc:
        raise PnmlValidationError(str(exc)) from None
    return place, tokens


def _parse_transition(element: ET.Element) -> Transition:
    transition_id = element.get("id")
    if not transition_id:
        raise PnmlValidationError("transition without id")
    ext = _tool_extensions(element, {"kind", "delay", "hook"}, f"transition {transition_id!r}")
    kind_text = ext.get("kind", TransitionKind.IMMEDIATE.value)
    if kind_text not in _TRANSITION_KINDS:
        raise PnmlParseError(f"unknown transition kind {kind_text!r} on {transition_id!r}")
    delay = None
    if "delay" in ext:
        try:
            delay = int(ext["delay"])
        except ValueError:
            raise PnmlValidationError(f"bad delay {ext['delay']!r} on {transition_id!r}") from None
    try:
        return Transition(transition_id, _TRANSITION_KINDS[kind_text], delay, ext.get("hook") or None)
    except ValidationError as exc:
        raise PnmlValidationError(str(exc)) from None


def _parse_arc(element: ET.Element) -> Arc:
    source, target = element.get("source"), element.get("target")
    if not source or not target:
        raise PnmlValidationError("arc without source/target")
    weight_text = _label_text(element, "inscription")
    try:
        weight = int(weight_text) if weight_text else 1
    except ValueError:
        raise PnmlValidationError(f"bad inscription {weight_text!r} on arc {source!r}->{target!r}") from None
    return Arc(source, target, weight)


def _parse_net(element: ET.Element) -> tuple[str, PetriNet, Marking]:
    net_id = element.get("id") or "net0"
    places, transitions, arcs = [], [], []
    counts = {}
    # Nodes may sit directly under <net> or inside any number of <page>s.
    containers = [element] + element.findall(f".//{_tag('page')}")
    for container in containers:
        for child in container.findall(_tag("place")):
            place, tokens = _parse_place(child)
            places.append(place)
            counts[place.id] = tokens
        for child in container.findall(_tag("transition")):
            transitions.append(_parse_transition(child))
        for child in container.findall(_tag("arc")):
            arcs.append(_parse_arc(child))

    node_ids = {p.id for p in places} | {t.id for t in transitions}
    for arc in arcs:
        for endpoint in (arc.source, arc.target):
            if endpoint not in node_ids:
                raise PnmlValidationError(
                    f"net {net_id!r}: arc endpoint {endpoint!r} does not exist"
                )
    try:
        net = PetriNet(places, transitions, arcs)
        marking = Marking.for_net(net, counts)
    except ValidationError as exc:
        raise PnmlValidationError(f"net {net_id!r}: {exc}") from None
    return net_id, net, marking


def parse_pnml(data: bytes | str, source_name: str = "") -> PnmlDocument:
    if isinstance(data, str):
        data = data.encode("utf-8")
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        line, column = exc.position
        raise PnmlParseError(f"malformed XML: {exc.msg.split(':')[0]}", line, column) from None
    if _local(root.tag) != "pnml":
        raise PnmlParseError(f"root element is <{_local(root.tag)}>, expected <pnml>")

    ids, nets, markings = [], [], []
    for net_element in root.findall(_tag("net")):
        net_id, net, marking = _parse_net(net_element)
        ids.append(net_id)
        nets.append(net)
        markings.append(marking)
    if not nets:
        raise PnmlValidationError("document contains no <net> element")
    return PnmlDocument(tuple(nets), tuple(markings), tuple(ids), source_name)


def parse_pnml_file(path) -> PnmlDocument:
    with open(path, "rb") as fh:
        return parse_pnml(fh.read(), source_name=str(path))


def _text_label(parent: ET.Element, label: str, value) -> None:
    node = ET.SubElement(parent, _tag(label))
    ET.SubElement(node, _tag("text")).text = str(value)


def _tool_block(parent: ET.Element, entries: dict[str, str]) -> None:
    if not entries:
        return
    tool = ET.SubElement(parent, _tag("toolspecific"), tool=TOOL_NAME, version=TOOL_VERSION)
    for name, value in entries.items():
        ET.SubElement(tool, _tag(name)).text = value


def serialize_pnml(doc: PnmlDocument) -> bytes:
    ET.register_namespace("", PNML_NS)
    root = ET.Element(_tag("pnml"))
    for net_id, net, marking in zip(doc.net_ids, doc.nets, doc.initial_markings):
        net_el = ET.SubElement(root, _tag("net"), id=net_id, type=NET_TYPE)
        page = ET.SubElement(net_el, _tag("page"), id=f"{net_id}-page0")
        for place in net.places:
            el = ET.SubElement(page, _tag("place"), id=place.id)
            _text_label(el, "name", place.id)
            if marking[place.id]:
                _text_label(el, "initialMarking", marking[place.id])
            entries = {}
            if place.kind is not PlaceKind.PLAIN:
                entries["kind"] = place.kind.value
            if place.merge_group is not None:
                entries["mergeGroup"] = place.merge_group
            _tool_block(el, entries)
        for transition in net.transitions:
            el = ET.SubElement(page, _tag("transition"), id=transition.id)
            _text_label(el, "name", transition.id)
            entries = {}
            if transition.kind is not TransitionKind.IMMEDIATE:
                entries["kind"] = transition.kind.value
            if transition.delay is not None:
                entries["delay"] = str(transition.delay)
            if transition.hook_name is not None:
                entries["hook"] = transition.hook_name
            _tool_block(el, entries)
        for i, arc in enumerate(net.arcs):
            el = ET.SubElement(page, _tag("arc"), id=f"{net_id}-a{i}",
                               source=arc.source, target=arc.target)
            if arc.weight != 1:
                _text_label(el, "inscription", arc.weight)
    ET.indent(root)
    return ET.tostring(root, encoding="utf-8", xml_declaration=True)
