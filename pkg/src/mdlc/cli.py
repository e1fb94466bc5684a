"""Command-line entry point: ``mdlc <command> ...``.

Exit codes: 0 success, 1 domain error (bad design, failed run), 2 usage error.
"""

from __future__ import annotations

import argparse
import copy
import json
import re
import sys
from pathlib import Path

from mdlc.config import CompileConfig, ConfigError, load_config
from mdlc.dynamics import ForceSchedule, SimParams, SimulationDiverged, simulate
from mdlc.frontend import LexError, ParseError, parse, validate
from mdlc.place import Layout, PlaceError, discretize, place_and_route, render_svg
from mdlc.runtime import (
    ACTUATOR,
    LogicDevice,
    MazeError,
    MazeWorld,
    PhysicalDevice,
    ScenarioError,
    direction_codes,
    generate_maze,
    run_maze,
    run_scenario,
)
from mdlc.synth import ElaborationError, GateNetlist, NetlistError, synthesize
from mdlc.synth.yosys import import_yosys_json, parse_cell_map
from mdlc.techmap import MassSpringNetwork, TechmapError, map_netlist


class CliError(Exception):
    """Domain failure reported on stderr with exit code 1."""


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from exc


def _load_network(path: str) -> MassSpringNetwork:
    try:
        return MassSpringNetwork.from_json(_read(path))
    except (KeyError, ValueError, TypeError) as exc:
        raise CliError(f"{path}: not a network file ({exc})") from exc


def _load_document(path: str):
    source = _read(path)
    try:
        doc = parse(source)
    except (LexError, ParseError) as exc:
        raise CliError(f"{path}:{exc.span.line}:{exc.span.col}: error: {exc.message}") from exc
    report = validate(doc)
    if not report.ok:
        raise CliError(report.format(path))
    for w in report.warnings:
        print(w.format(path), file=sys.stderr)
    return doc


# -- compile ------------------------------------------------------------------


def compile_document(doc, cfg: CompileConfig) -> dict:
    """Run the pipeline; returns the artifacts as objects plus a report."""
    result = synthesize(doc.behavior, io_buffers=cfg.io_buffers, fanout_trees=cfg.fanout_trees)
    nl = result.netlist
    network = map_netlist(nl, cfg.fsm_period, auto_clock=cfg.auto_clock, max_ring=cfg.max_ring)
    network.value_maps = {io.name: dict(io.value_map) for io in doc.ios if io.value_map}
    layout = place_and_route(doc, network, cfg.placement) if cfg.place else None
    report = {
        "design": doc.name,
        "gates": nl.counts(),
        "latches": len(nl.latches),
        "depth": nl.depth(),
        "masses": network.num_masses,
        "couplings": len(network.couplings),
        "fsm_period": network.fsm_period,
        "clock_periods": [len(r) // 2 for r in network.rings],
        "tick_cycle": network.tick_cycle,
        "crossings": layout.crossings if layout else None,
        "notes": list(network.notes),
    }
    return {"netlist": nl, "network": network, "layout": layout, "report": report}


def cmd_compile(args) -> int:
    flags = {
        "fsm_period": args.fsm_period,
        "auto_clock": False if args.no_clock else None,
        "fanout_trees": False if args.no_fanout_trees else None,
        "io_buffers": False if args.no_io_buffers else None,
        "place": False if args.no_place else None,
        "output_dir": args.out,
        "seeds": args.seeds,
        "free_iterations": args.free_iterations,
        "pinned_iterations": args.pinned_iterations,
        "radius": args.radius,
        "crossing_passes": args.crossing_passes,
        "time_limit": args.time_limit,
    }
    cfg = load_config(args.config, flags)
    doc = _load_document(args.mdl)
    art = compile_document(doc, cfg)
    out = Path(cfg.output_dir)
    stem = doc.name
    _write(out / f"{stem}.netlist.json", art["netlist"].to_json())
    _write(out / f"{stem}.network.json", art["network"].to_json())
    if art["layout"] is not None:
        _write(out / f"{stem}.layout.json", art["layout"].to_json())
        _write(out / f"{stem}.svg", render_svg(art["network"], art["layout"], discretize(doc.boundary).vertices))
    report = art["report"]
    _write(out / f"{stem}.report.json", json.dumps(report, indent=2) + "\n")
    gates = ", ".join(f"{k} {v}" for k, v in sorted(report["gates"].items()) if v)
    print(f"{stem}: {gates}; depth {report['depth']}; {report['masses']} masses; "
          f"fsm_period {report['fsm_period']}"
          + (f"; {report['crossings']} crossings" if report["crossings"] is not None else ""))
    for note in report["notes"]:
        print(f"note: {note}")
    return 0


# -- simulate -----------------------------------------------------------------

_BIT = re.compile(r"^(.+)\[(\d+)\]$")


def resolve_masses(network: MassSpringNetwork, probe: str) -> list[int]:
    """Mass ids named by an id, ``io[bit]``, io name, label or tag."""
    if probe.isdigit():
        m = int(probe)
        if m >= network.num_masses:
            raise CliError(f"unknown probe {probe!r}")
        return [m]
    io = network.io_masses()
    m = _BIT.match(probe)
    if m and (m.group(1), int(m.group(2))) in io:
        return [io[(m.group(1), int(m.group(2)))]]
    named = [mass for (name, _), mass in sorted(io.items()) if name == probe]
    if named:
        return named
    labelled = [ms.id for ms in network.masses if ms.label == probe]
    if labelled:
        return labelled
    tagged = network.tagged(probe)
    if tagged:
        return tagged
    raise CliError(f"unknown probe {probe!r}")


def parse_schedule(text: str, network: MassSpringNetwork) -> ForceSchedule:
    """Lines of ``mass start end value``; times in power-clock periods."""
    sched = ForceSchedule()
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].split()
        if not body:
            continue
        if len(body) != 4:
            raise CliError(f"schedule line {no}: expected 'mass start end value'")
        try:
            start, end, value = map(float, body[1:])
        except ValueError as exc:
            raise CliError(f"schedule line {no}: {exc}") from exc
        for m in resolve_masses(network, body[0]):
            try:
                sched.add(m, start, end, value)
            except ValueError as exc:
                raise CliError(f"schedule line {no}: {exc}") from exc
    return sched


def cmd_simulate(args) -> int:
    network = _load_network(args.network)
    params = SimParams()
    sched = parse_schedule(_read(args.schedule), network) if args.schedule else ForceSchedule()
    for item in args.set or []:
        name, _, value = item.partition("=")
        if value not in ("0", "1"):
            raise CliError(f"--set expects name=0 or name=1, got {item!r}")
        for m in resolve_masses(network, name):
            try:
                sched.add(m, 0.0, float(args.periods), params.q if value == "1" else -params.q)
            except ValueError as exc:
                raise CliError(f"--set {item}: {exc}") from exc
    probes = []
    for spec in args.probe or []:
        probes.extend(resolve_masses(network, spec))
    try:
        trace = simulate(network, args.periods, sched, probes, params, record_every=args.record_every)
    except SimulationDiverged as exc:
        raise CliError(str(exc)) from exc
    labels = {m.id: m.label or f"m{m.id}" for m in network.masses}
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    trace.write_csv(out, labels)
    for p in probes:
        bits = "".join(map(str, trace.logic(p)))
        print(f"{labels[p]}: {bits}")
    return 0


# -- runtime ------------------------------------------------------------------


def _device(args, network: MassSpringNetwork):
    if args.netlist:
        return LogicDevice(GateNetlist.from_json(_read(args.netlist)))
    return PhysicalDevice(network)


def cmd_run_maze(args) -> int:
    network = _load_network(args.network)
    if args.generate:
        m = re.fullmatch(r"(\d+)x(\d+)", args.generate)
        if not m:
            raise CliError("--generate expects WxH, e.g. 8x8")
        world = generate_maze(int(m.group(1)), int(m.group(2)), args.seed)
    elif args.maze:
        world = MazeWorld.parse(_read(args.maze))
    else:
        raise CliError("give a maze file or --generate WxH")
    codes = direction_codes(network.value_maps.get(ACTUATOR))
    run = run_maze(_device(args, network), copy.deepcopy(world), args.max_steps, codes)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        run.write_csv(args.out)
    print(f"solved: {str(run.solved).lower()}; steps {len(run.steps)}; "
          f"mismatches {len(run.mismatches)}; blocked {len(run.blocked)}")
    return 0 if run.ok else 1


def cmd_run_scenario(args) -> int:
    network = _load_network(args.network)
    result = run_scenario(_device(args, network), _read(args.script))
    text = result.format()
    if args.out:
        _write(Path(args.out), text)
    sys.stdout.write(text)
    return 0 if result.ok else 1


# -- netlist import / render --------------------------------------------------


def cmd_netlist_import(args) -> int:
    cell_map = parse_cell_map(json.loads(_read(args.cell_map))) if args.cell_map else None
    nl = import_yosys_json(_read(args.yosys), cell_map, args.top, args.clock)
    _write(Path(args.out), nl.to_json())
    print(f"imported {len(nl.gates)} gates, {len(nl.latches)} latches")
    if args.network:
        network = map_netlist(nl, args.fsm_period)
        _write(Path(args.network), network.to_json())
        print(f"mapped to {network.num_masses} masses")
    return 0


def cmd_render(args) -> int:
    network = _load_network(args.network)
    layout = Layout.from_json(_read(args.layout))
    vertices = discretize(_load_document(args.mdl).boundary).vertices if args.mdl else None
    _write(Path(args.out), render_svg(network, layout, vertices))
    return 0


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mdlc", description="Compile MDL designs into mass-spring networks.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compile", help="MDL -> netlist, network, layout, SVG and report")
    c.add_argument("mdl")
    c.add_argument("--config", help="YAML config file")
    c.add_argument("--out", help="output directory (default build)")
    c.add_argument("--fsm-period", type=int)
    c.add_argument("--no-clock", action="store_true", help="disable automatic clock generation")
    c.add_argument("--no-fanout-trees", action="store_true", help="disable buffer trees for fanout")
    c.add_argument("--no-io-buffers", action="store_true", help="disable per-I/O buffer insertion")
    c.add_argument("--no-place", action="store_true", help="skip place and route")
    c.add_argument("--seeds", type=int)
    c.add_argument("--free-iterations", type=int)
    c.add_argument("--pinned-iterations", type=int)
    c.add_argument("--radius", type=float)
    c.add_argument("--crossing-passes", type=int)
    c.add_argument("--time-limit", type=float)
    c.set_defaults(func=cmd_compile)

    s = sub.add_parser("simulate", help="integrate a network and write a trace CSV")
    s.add_argument("network")
    s.add_argument("--periods", type=float, required=True)
    s.add_argument("--schedule", help="force schedule: 'mass start end value' per line")
    s.add_argument("--set", action="append", metavar="NAME=BIT", help="hold a sensor at a bit for the whole run")
    s.add_argument("--probe", action="append", help="mass id, io name, io[bit], label or tag")
    s.add_argument("--record-every", type=int, default=4, help="steps between trace rows")
    s.add_argument("--out", default="trace.csv")
    s.set_defaults(func=cmd_simulate)

    m = sub.add_parser("run-maze", help="closed-loop maze run")
    m.add_argument("network")
    m.add_argument("maze", nargs="?")
    m.add_argument("--generate", metavar="WxH")
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--max-steps", type=int, default=1000)
    m.add_argument("--netlist", help="run the gate netlist instead of the ODE model")
    m.add_argument("--out", help="trajectory CSV")
    m.set_defaults(func=cmd_run_maze)

    r = sub.add_parser("run-scenario", help="scripted input phases with expectations")
    r.add_argument("network")
    r.add_argument("script")
    r.add_argument("--netlist", help="run the gate netlist instead of the ODE model")
    r.add_argument("--out", help="transcript file")
    r.set_defaults(func=cmd_run_scenario)

    i = sub.add_parser("netlist-import", help="Yosys JSON -> netlist JSON")
    i.add_argument("yosys")
    i.add_argument("--out", required=True)
    i.add_argument("--cell-map")
    i.add_argument("--top")
    i.add_argument("--clock", default="clk")
    i.add_argument("--network", help="also map to a network file")
    i.add_argument("--fsm-period", type=int, default=CompileConfig().fsm_period)
    i.set_defaults(func=cmd_netlist_import)

    v = sub.add_parser("render", help="SVG from network and layout files")
    v.add_argument("network")
    v.add_argument("layout")
    v.add_argument("--mdl", help="draw the boundary of this design")
    v.add_argument("--out", default="layout.svg")
    v.set_defaults(func=cmd_render)
    return p


DOMAIN_ERRORS = (
    CliError, ConfigError, ElaborationError, NetlistError, TechmapError, PlaceError,
    MazeError, ScenarioError, SimulationDiverged,
)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
