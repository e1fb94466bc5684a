"""Mass-spring network data model and its JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

NETWORK_FORMAT_VERSION = 1


class Phase(str, Enum):
    IN = "in_phase"
    OUT = "out_of_phase"

    @property
    def coefficients(self) -> tuple[float, float]:
        """(a0, a1), equally (d0, d1), for this phase."""
        return (0.0, 1.0) if self is Phase.IN else (2.0, -1.0)

    @property
    def other(self) -> Phase:
        return Phase.OUT if self is Phase.IN else Phase.IN


class CouplingKind(str, Enum):
    LINEAR_POS = "linear_pos"
    LINEAR_NEG = "linear_neg"
    NONLINEAR_GATE = "nonlinear_gate"


# coupling constant c for each kind (magnitude from the dynamics model)
COUPLING_C = {
    CouplingKind.LINEAR_POS: 0.5,
    CouplingKind.LINEAR_NEG: -0.5,
    CouplingKind.NONLINEAR_GATE: -0.5,
}

TAGS = (
    "sensor",
    "actuator",
    "clock-loop",
    "clock",
    "intermediate",
    "output",
    "constant",
)


@dataclass
class MassSpec:
    id: int
    phase: Phase
    bias: float = 0.0  # q multiplier: +1 pushes toward 0, -1 toward 1
    x0: float = 0.0
    v0: float = 0.0
    tag: str = "output"
    label: str = ""


@dataclass
class CouplingSpec:
    """A pairwise interaction.

    Linear kinds are symmetric.  For ``nonlinear_gate`` the energy is
    ``-c s x_i x_j**2``: ``i`` is the controlling mass and ``j`` the gated one.
    """

    i: int
    j: int
    kind: CouplingKind
    phase: Phase

    @property
    def c(self) -> float:
        return COUPLING_C[self.kind]


@dataclass
class MassSpringNetwork:
    masses: list[MassSpec] = field(default_factory=list)
    couplings: list[CouplingSpec] = field(default_factory=list)
    sensors: dict[tuple[str, int], int] = field(default_factory=dict)
    actuators: dict[tuple[str, int], int] = field(default_factory=dict)
    latches: dict[str, int] = field(default_factory=dict)  # register bit -> Q mass
    clock_output: int | None = None  # ring (or composite) output mass
    clock_root: int | None = None  # mass of the netlist clock net
    rings: list[list[int]] = field(default_factory=list)
    fsm_period: int = 0
    tick_cycle: int = 0  # cycle within each FSM window at which latches capture
    value_maps: dict[str, dict[str, str]] = field(default_factory=dict)  # io name -> {"0b01": label}
    notes: list[str] = field(default_factory=list)

    # -- construction -----------------------------------------------------

    def add_mass(self, phase: Phase, tag: str = "output", bias: float = 0.0, x0: float = 0.0, label: str = "") -> int:
        mid = len(self.masses)
        self.masses.append(MassSpec(mid, Phase(phase), bias, x0, 0.0, tag, label))
        return mid

    def couple(self, i: int, j: int, kind: CouplingKind, phase: Phase) -> None:
        self.couplings.append(CouplingSpec(i, j, CouplingKind(kind), Phase(phase)))

    # -- queries ----------------------------------------------------------

    @property
    def num_masses(self) -> int:
        return len(self.masses)

    @property
    def sample_cycle(self) -> int:
        """Cycle within each window at which outputs are read."""
        return self.fsm_period - 1

    def tagged(self, tag: str) -> list[int]:
        return [m.id for m in self.masses if m.tag == tag]

    def edges(self) -> list[tuple[int, int]]:
        """Distinct undirected mass pairs joined by at least one coupling."""
        seen = set()
        out = []
        for c in self.couplings:
            key = (min(c.i, c.j), max(c.i, c.j))
            if key not in seen:
                seen.add(key)
                out.append(key)
        return out

    def io_masses(self) -> dict[tuple[str, int], int]:
        out = dict(self.sensors)
        out.update(self.actuators)
        return out

    def check(self) -> None:
        n = len(self.masses)
        for c in self.couplings:
            if not (0 <= c.i < n and 0 <= c.j < n) or c.i == c.j:
                raise ValueError(f"bad coupling {c}")
            if c.kind is not CouplingKind.NONLINEAR_GATE:
                if self.masses[c.i].phase is self.masses[c.j].phase:
                    raise ValueError(f"linear coupling {c.i}-{c.j} joins masses of equal phase")

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        def binding(d):
            return [{"name": k[0], "bit": k[1], "mass": v} for k, v in sorted(d.items())]

        return {
            "format_version": NETWORK_FORMAT_VERSION,
            "fsm_period": self.fsm_period,
            "tick_cycle": self.tick_cycle,
            "clock_output": self.clock_output,
            "clock_root": self.clock_root,
            "masses": [
                {"id": m.id, "phase": m.phase.value, "bias": m.bias, "x0": m.x0, "v0": m.v0,
                 "tag": m.tag, "label": m.label}
                for m in self.masses
            ],
            "couplings": [
                {"i": c.i, "j": c.j, "kind": c.kind.value, "phase": c.phase.value}
                for c in self.couplings
            ],
            "bindings": {
                "sensors": binding(self.sensors),
                "actuators": binding(self.actuators),
                "latches": [{"name": k, "mass": v} for k, v in sorted(self.latches.items())],
            },
            "rings": self.rings,
            "value_maps": self.value_maps,
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> MassSpringNetwork:
        version = data.get("format_version")
        if version != NETWORK_FORMAT_VERSION:
            raise ValueError(f"unsupported network format_version {version}")
        net = cls(
            masses=[
                MassSpec(m["id"], Phase(m["phase"]), m["bias"], m["x0"], m.get("v0", 0.0),
                         m["tag"], m.get("label", ""))
                for m in data["masses"]
            ],
            couplings=[
                CouplingSpec(c["i"], c["j"], CouplingKind(c["kind"]), Phase(c["phase"]))
                for c in data["couplings"]
            ],
            fsm_period=data["fsm_period"],
            tick_cycle=data.get("tick_cycle", 0),
            clock_output=data.get("clock_output"),
            clock_root=data.get("clock_root"),
            rings=[list(r) for r in data.get("rings", [])],
            value_maps={k: dict(v) for k, v in data.get("value_maps", {}).items()},
            notes=list(data.get("notes", [])),
        )
        b = data.get("bindings", {})
        net.sensors = {(x["name"], x["bit"]): x["mass"] for x in b.get("sensors", [])}
        net.actuators = {(x["name"], x["bit"]): x["mass"] for x in b.get("actuators", [])}
        net.latches = {x["name"]: x["mass"] for x in b.get("latches", [])}
        for k, m in enumerate(net.masses):
            if m.id != k:
                raise ValueError("mass ids must be dense and ordered")
        net.check()
        return net

    @classmethod
    def from_json(cls, text: str) -> MassSpringNetwork:
        return cls.from_dict(json.loads(text))
