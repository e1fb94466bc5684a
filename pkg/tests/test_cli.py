import json
import xml.etree.ElementTree as ET
from importlib import resources

import pytest

from conftest import SMALL_SOURCE
from mdlc.cli import CliError, build_parser, main, parse_schedule, resolve_masses
from mdlc.synth.yosys import export_yosys_json
from mdlc.techmap import MassSpringNetwork

DATA = resources.files("mdlc.data")
# same design on a 31x31 boundary so that it fits
ROOMY = SMALL_SOURCE.replace("4", "30")


@pytest.fixture(scope="module")
def tiny(tmp_path_factory):
    root = tmp_path_factory.mktemp("tiny")
    (root / "tiny.mdl").write_text(ROOMY)
    assert main(["compile", str(root / "tiny.mdl"), "--out", str(root / "build"), "--seeds", "1"]) == 0
    return root


def test_compile_writes_artifacts(tiny, capsys):
    build = tiny / "build"
    names = sorted(p.name for p in build.iterdir())
    assert names == ["tiny.layout.json", "tiny.netlist.json", "tiny.network.json", "tiny.report.json", "tiny.svg"]
    report = json.loads((build / "tiny.report.json").read_text())
    assert report["gates"]["NOT"] == 1 and report["latches"] == 1
    assert report["fsm_period"] == 60 and report["clock_periods"] == [5, 12]
    net = MassSpringNetwork.from_json((build / "tiny.network.json").read_text())
    assert net.num_masses == report["masses"]
    ET.fromstring((build / "tiny.svg").read_text())


def test_compile_no_place(tmp_path, capsys):
    src = tmp_path / "tiny.mdl"
    src.write_text(SMALL_SOURCE)  # too small to place, fine without placement
    assert main(["compile", str(src), "--out", str(tmp_path), "--no-place"]) == 0
    assert not (tmp_path / "tiny.layout.json").exists()
    assert "71 masses" in capsys.readouterr().out


def test_compile_config_file(tmp_path):
    src = tmp_path / "tiny.mdl"
    src.write_text(SMALL_SOURCE)
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text("fsm_period: 84\nplace: false\n")
    assert main(["compile", str(src), "--config", str(cfg), "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "tiny.report.json").read_text())
    assert report["fsm_period"] == 84


def test_compile_domain_errors(tmp_path, capsys):
    small = tmp_path / "small.mdl"
    small.write_text(SMALL_SOURCE)
    assert main(["compile", str(small), "--out", str(tmp_path)]) == 1
    assert "do not fit" in capsys.readouterr().err
    bad = tmp_path / "bad.mdl"
    bad.write_text("mechanicalmodule x(; boundary")
    assert main(["compile", str(bad)]) == 1
    assert f"{bad}:1:" in capsys.readouterr().err
    assert main(["compile", str(tmp_path / "missing.mdl")]) == 1
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text("colour: blue\n")
    assert main(["compile", str(small), "--config", str(cfg)]) == 1
    assert "unknown option" in capsys.readouterr().err


def test_usage_errors_exit_2(capsys):
    for argv in ([], ["frobnicate"], ["simulate", "net.json"], ["compile", "a.mdl", "--seeds", "x"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2


def test_simulate_holds_sensor(tiny, capsys, tmp_path):
    net = tiny / "build" / "tiny.network.json"
    out = tmp_path / "trace.csv"
    assert main(["simulate", str(net), "--periods", "60", "--set", "a=1", "--probe", "a", "--probe", "y[0]",
                 "--out", str(out)]) == 0
    lines = dict(line.split(": ") for line in capsys.readouterr().out.splitlines())
    a_bits, y_bits = lines.values()
    assert set(a_bits) == {"1"}
    assert y_bits[-1] == "0"  # y <= !a after the first tick at cycle 51
    assert out.read_text().splitlines()[0].startswith("t,")


def test_simulate_rejects_bad_set(tiny, capsys):
    net = str(tiny / "build" / "tiny.network.json")
    assert main(["simulate", net, "--periods", "1", "--set", "a=2"]) == 1
    assert main(["simulate", net, "--periods", "1", "--probe", "nope"]) == 1
    assert "unknown probe" in capsys.readouterr().err


def test_resolve_and_schedule(tiny):
    net = MassSpringNetwork.from_json((tiny / "build" / "tiny.network.json").read_text())
    io = net.io_masses()
    assert resolve_masses(net, "a") == [io[("a", 0)]]
    assert resolve_masses(net, "a[0]") == [io[("a", 0)]]
    assert resolve_masses(net, "3") == [3]
    sched = parse_schedule("# comment\na 0 2 1.0\n\n3 1 2 -1", net)
    assert sched is not None
    with pytest.raises(CliError, match="line 1"):
        parse_schedule("a 0 x 1", net)
    with pytest.raises(CliError, match="expected"):
        parse_schedule("a 0 1", net)


def test_run_scenario_physical(tiny, tmp_path, capsys):
    script = tmp_path / "s.scn"
    script.write_text("set a=1; ticks 2; expect y=0\nset a=0; ticks 2; expect y=1\n")
    net = str(tiny / "build" / "tiny.network.json")
    assert main(["run-scenario", net, str(script), "--out", str(tmp_path / "t.txt")]) == 0
    assert (tmp_path / "t.txt").read_text() == capsys.readouterr().out
    script.write_text("set a=1; ticks 2; expect y=1\n")
    assert main(["run-scenario", net, str(script)]) == 1


@pytest.fixture(scope="module")
def compiled(tmp_path_factory):
    root = tmp_path_factory.mktemp("examples")
    for name in ("mazerobot", "lock"):
        src = root / f"{name}.mdl"
        src.write_text(DATA.joinpath(f"{name}.mdl").read_text())
        assert main(["compile", str(src), "--out", str(root), "--no-place"]) == 0
    return root


def test_run_scenario_netlist(compiled, capsys):
    script = compiled / "demo.scn"
    script.write_text(DATA.joinpath("lock_demo.scn").read_text())
    rc = main(["run-scenario", str(compiled / "lock.network.json"), str(script),
               "--netlist", str(compiled / "lock.netlist.json")])
    assert rc == 0, capsys.readouterr().out
    assert "FAIL" not in capsys.readouterr().out


def test_run_maze_netlist(compiled, capsys, tmp_path):
    net = str(compiled / "mazerobot.network.json")
    args = ["run-maze", net, "--netlist", str(compiled / "mazerobot.netlist.json")]
    assert main(args + ["--generate", "6x5", "--seed", "2", "--out", str(tmp_path / "run.csv")]) == 0
    assert capsys.readouterr().out.startswith("solved: true")
    maze = tmp_path / "m.txt"
    maze.write_text("###\n#S#\n###\n")
    assert main(args[:2] + [str(maze)] + args[2:] + ["--max-steps", "5"]) == 1
    assert "solved: false" in capsys.readouterr().out
    assert main(args + ["--generate", "six"]) == 1
    assert main(args) == 1


def test_netlist_import(lock_synth, tmp_path, capsys):
    yosys = tmp_path / "lock.yosys.json"
    yosys.write_text(export_yosys_json(lock_synth.netlist))
    out, net = tmp_path / "nl.json", tmp_path / "net.json"
    assert main(["netlist-import", str(yosys), "--out", str(out), "--network", str(net)]) == 0
    text = capsys.readouterr().out
    assert f"{len(lock_synth.netlist.gates)} gates" in text and "masses" in text
    assert MassSpringNetwork.from_json(net.read_text()).num_masses == 344


def test_render(tiny, tmp_path):
    build = tiny / "build"
    svg = tmp_path / "v.svg"
    assert main(["render", str(build / "tiny.network.json"), str(build / "tiny.layout.json"),
                 "--mdl", str(tiny / "tiny.mdl"), "--out", str(svg)]) == 0
    root = ET.fromstring(svg.read_text())
    assert root.tag.endswith("svg")
    assert main(["render", str(build / "tiny.layout.json"), str(build / "tiny.layout.json")]) == 1


def test_parser_lists_commands():
    text = build_parser().format_help()
    for cmd in ("compile", "simulate", "run-maze", "run-scenario", "netlist-import", "render"):
        assert cmd in text
