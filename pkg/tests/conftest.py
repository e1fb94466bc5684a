import pytest

from mdlc.examples import example_document
from mdlc.synth import synthesize
from mdlc.techmap import map_netlist

SMALL_SOURCE = """
mechanicalmodule tiny();
  boundary {
    line top {(0,4), (4,4)},
    line right {(4,4), (4,0)},
    line bottom {(4,0), (0,0)},
    line left {(0,0), (0,4)} };
  sensor a { location = {(left, 0.5)}, values = {"0b0": "OFF", "0b1": "ON"} };
  actuator y { location = {(right, 0.5)}, values = {"0b0": "LOW", "0b1": "HIGH"} };
  module tiny (input wire clk, input wire a, output reg y);
    always @(posedge clk) begin
      y <= !a;
    end
  endmodule
endmechanicalmodule
"""


@pytest.fixture(scope="session")
def maze_doc():
    return example_document("mazerobot")


@pytest.fixture(scope="session")
def lock_doc():
    return example_document("lock")


@pytest.fixture(scope="session")
def maze_synth(maze_doc):
    return synthesize(maze_doc.behavior)


@pytest.fixture(scope="session")
def lock_synth(lock_doc):
    return synthesize(lock_doc.behavior)


@pytest.fixture(scope="session")
def maze_net(maze_doc, maze_synth):
    net = map_netlist(maze_synth.netlist)
    net.value_maps = {io.name: dict(io.value_map) for io in maze_doc.ios}
    return net


@pytest.fixture(scope="session")
def lock_net(lock_doc, lock_synth):
    net = map_netlist(lock_synth.netlist)
    net.value_maps = {io.name: dict(io.value_map) for io in lock_doc.ios}
    return net


@pytest.fixture(scope="session")
def maze_layout(maze_doc, maze_net):
    from mdlc.place import place_and_route

    return place_and_route(maze_doc, maze_net)


@pytest.fixture(scope="session")
def lock_layout(lock_doc, lock_net):
    from mdlc.place import place_and_route

    return place_and_route(lock_doc, lock_net)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS):
            terminalreporter.write_line(line)
