import contextlib
import io
import json
import os
import tempfile
import unittest
from fractions import Fraction
from unittest import mock

from arrangement import build_psi_arrangement, intersection_lattice
from cli import RunConfig, build_parser, config_from_args, main, parse_edge, run
from constants import LATTICE_GUARD_ENV, SWEEP_MAX_VERTICES, Command, ExitCode
from harness.decorators import number
from serialize import GraphFormatError, dumps, graph_from_json, int_graph_from_json, lattice_dump, obstruction_dict
from sweep import format_weight, parse_weight_pool
from wgraph import ChordlessCycle, WeightedGraph

STORES = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "stores")


def store(name: str) -> str:
    return os.path.join(STORES, name)


class CliCase(unittest.TestCase):

    def invoke(self, command: Command, path=None, **kwargs) -> tuple[int, object]:
        out = io.StringIO()
        code = run(RunConfig(command, input_path=path, **kwargs), out)
        text = out.getvalue()
        return code, json.loads(text) if text else None


class TestCommands(CliCase):

    @number("6.1")
    def test_check_free(self):
        code, data = self.invoke(Command.CHECK, store("example_a.json"))
        self.assertEqual(code, ExitCode.OK)
        self.assertEqual(data["verdict"], "free")
        self.assertEqual(data["ordering"], [2, 1])
        self.assertEqual(data["exponents"], [1, 2, 2])
        self.assertEqual(data["saito_scalar"], "-1")
        self.assertEqual(data["basis"][1], {"dz": "0", "dx1": "x1^2 - z*x1", "dx2": "x2^2 - z*x2"})

    @number("6.2")
    def test_check_not_free(self):
        code, data = self.invoke(Command.CHECK, store("four_cycle.json"))
        self.assertEqual(code, ExitCode.OK)
        self.assertEqual(data, {"verdict": "not_free",
                                "obstruction": {"kind": "chordless_cycle", "cycle": [1, 2, 3, 4]}})
        _, data = self.invoke(Command.CHECK, store("incomparable_edge.json"))
        self.assertEqual(data["obstruction"], {"kind": "incomparable_edge", "edge": [1, 2]})
        _, data = self.invoke(Command.CHECK, store("valley_path.json"))
        self.assertEqual(data["obstruction"], {"kind": "valley_path", "path": [1, 2, 3]})
        self.assertEqual(data["audit"]["exp_deleted"], [1, 2, 2, 2])
        self.assertTrue(data["audit"]["refutes_freeness"])

    @number("6.3")
    def test_basis(self):
        code, data = self.invoke(Command.BASIS, store("example_a.json"))
        self.assertEqual(code, ExitCode.OK)
        self.assertEqual(data["rows"], ["z", "x2", "x1"])
        self.assertEqual(data["degrees"], [1, 2, 2])
        self.assertEqual(data["basis"][0], "(z)*dz + (x1)*dx1 + (x2)*dx2")
        _, data = self.invoke(Command.BASIS, store("four_cycle.json"))
        self.assertIsNone(data["ordering"])

    @number("6.4")
    def test_charpoly_and_ssolv(self):
        _, data = self.invoke(Command.CHARPOLY, store("example_a.json"))
        self.assertEqual(data["polynomial"], "q^3 - 5*q^2 + 8*q - 4")
        self.assertEqual(data["coefficients"], [1, -5, 8, -4])
        self.assertEqual(data["flats_by_rank"], [1, 5, 6, 1])
        self.assertEqual(data["moebius_by_rank"], [1, 5, 8, 4])
        _, data = self.invoke(Command.SSOLV, store("example_a.json"))
        self.assertEqual([x["rank"] for x in data["mchain"]], [0, 1, 2, 3])
        self.assertEqual(data["mchain"][0], {"rank": 0, "normals": [], "members": [], "moebius": 1})
        _, data = self.invoke(Command.SSOLV, store("four_cycle.json"))
        self.assertIsNone(data["mchain"])

    @number("6.5")
    def test_audit(self):
        code, data = self.invoke(Command.AUDIT, store("valley_path.json"), edge=(3, 2))
        self.assertEqual(code, ExitCode.OK)
        self.assertEqual(data, {"edge": [2, 3], "exp_deleted": [1, 2, 2, 2], "exp_restricted": [1, 2, 3],
                                "subset_holds": False, "refutes_freeness": True})
        code, _ = self.invoke(Command.AUDIT, store("valley_path.json"), edge=(1, 3))
        self.assertEqual(code, ExitCode.INVALID_INPUT)

    @number("6.6")
    def test_audit_inconclusive(self):
        graph = {"vertices": [{"id": 1, "psi": ["1"]}, {"id": 2, "psi": []}, {"id": 3, "psi": ["0"]}],
                 "edges": [[1, 2], [2, 3]]}
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "graph.json")
            with open(path, "w", encoding="utf-8") as f:
                json.dump(graph, f)
            code, data = self.invoke(Command.AUDIT, path, edge=(2, 3))
        self.assertEqual(code, ExitCode.INCONCLUSIVE)
        self.assertIsNone(data)

    @number("6.7")
    def test_multi(self):
        code, data = self.invoke(Command.MULTI, store("multi_edge.json"))
        self.assertEqual(code, ExitCode.OK)
        self.assertEqual(data["exponents"], [2, 2])
        self.assertEqual(data["multiplicities"], [{"form": "x1 - x2", "m": 1}, {"form": "x1", "m": 1},
                                                  {"form": "x2", "m": 2}])
        _, data = self.invoke(Command.MULTI, store("multi_valley.json"))
        self.assertEqual(data, {"verdict": "not_free", "obstruction": {"kind": "valley_path", "path": [1, 2, 3]}})
        code, _ = self.invoke(Command.MULTI, store("example_a.json"))
        self.assertEqual(code, ExitCode.INVALID_INPUT)

    @number("6.8")
    def test_nish(self):
        _, data = self.invoke(Command.NISH, store("nested_triangle.json"))
        self.assertEqual(data, {"nest": [1, 2, 3], "affine_equivalent": True, "free": True})
        code, _ = self.invoke(Command.NISH, store("valley_path.json"))
        self.assertEqual(code, ExitCode.INVALID_INPUT)

    @number("6.9")
    def test_sweep(self):
        code, data = self.invoke(Command.SWEEP, max_vertices=2, samples=10, seed=3)
        self.assertEqual(code, ExitCode.OK)
        self.assertEqual(data["instances"], 36)
        self.assertEqual(data["disagreements"], 0)
        self.assertEqual(len(set(data["counts"].values())), 1)
        self.assertEqual(data["supersolvable_sample"]["size"], 10)
        self.assertEqual(data["supersolvable_sample"]["disagreements"], 0)
        code, _ = self.invoke(Command.SWEEP, max_vertices=SWEEP_MAX_VERTICES + 1)
        self.assertEqual(code, ExitCode.GUARD_EXCEEDED)
        code, _ = self.invoke(Command.SWEEP, max_vertices=0)
        self.assertEqual(code, ExitCode.INVALID_INPUT)


class TestErrors(CliCase):

    @number("6.10")
    def test_missing_file(self):
        code, data = self.invoke(Command.CHECK, store("nowhere.json"))
        self.assertEqual(code, ExitCode.INVALID_INPUT)
        self.assertIsNone(data)

    @number("6.11")
    def test_guard(self):
        with mock.patch.dict(os.environ, {LATTICE_GUARD_ENV: "3"}):
            code, _ = self.invoke(Command.CHARPOLY, store("example_a.json"))
        self.assertEqual(code, ExitCode.GUARD_EXCEEDED)

    @number("6.12")
    def test_parser(self):
        self.assertEqual(parse_edge(" 3, 4"), (3, 4))
        args = build_parser().parse_args(["audit", "g.json", "--edge", "1,2"])
        self.assertEqual(config_from_args(args), RunConfig(Command.AUDIT, input_path="g.json", edge=(1, 2)))
        args = build_parser().parse_args(["sweep", "--max-vertices", "3"])
        self.assertEqual(config_from_args(args).max_vertices, 3)
        with contextlib.redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit):
                build_parser().parse_args(["audit", "g.json", "--edge", "1-2"])

    @number("6.13")
    def test_main(self):
        out = io.StringIO()
        with contextlib.redirect_stdout(out):
            code = main(["nish", store("nested_triangle.json")])
        self.assertEqual(code, 0)
        self.assertTrue(json.loads(out.getvalue())["free"])


class TestSerialization(unittest.TestCase):

    @number("6.14")
    def test_graph_json(self):
        g = graph_from_json({"vertices": [{"id": 2, "psi": ["1/2"]}, {"id": 1, "psi": []}], "edges": [[2, 1]]})
        self.assertEqual(g.psi, (frozenset(), frozenset({Fraction(1, 2)})))
        self.assertEqual(g.edges, frozenset({(1, 2)}))
        h = int_graph_from_json({"vertices": [{"id": 1, "psi": 2}]})
        self.assertEqual(h.psi, (2,))

    @number("6.15")
    def test_rejected_graphs(self):
        bad = [
            [],
            {"vertices": []},
            {"vertices": [{"id": 2, "psi": []}]},
            {"vertices": [{"id": 1, "psi": ["0", "0"]}]},
            {"vertices": [{"id": 1, "psi": [0.5]}]},
            {"vertices": [{"id": 1, "psi": ["0.5"]}]},
            {"vertices": [{"id": 1, "psi": []}], "edges": [[1, 1]]},
            {"vertices": [{"id": 1, "psi": []}], "edges": [[1, 2]]},
            {"vertices": [{"id": True, "psi": []}]},
        ]
        for data in bad:
            with self.assertRaises(GraphFormatError, msg=repr(data)):
                graph_from_json(data)
        with self.assertRaises(GraphFormatError):
            int_graph_from_json({"vertices": [{"id": 1, "psi": -1}]})

    @number("6.16")
    def test_dumps(self):
        self.assertEqual(dumps({"q": Fraction(1, 2), "s": frozenset({2, 1}), "k": Command.CHECK}),
                         '{"q":"1/2","s":[1,2],"k":"check"}')
        self.assertEqual(obstruction_dict(ChordlessCycle((1, 2, 3, 4))),
                         {"kind": "chordless_cycle", "cycle": [1, 2, 3, 4]})

    @number("6.17")
    def test_lattice_dump(self):
        g = WeightedGraph.build(2, [(1, 2)], [[0], [0, 1]])
        dump = lattice_dump(intersection_lattice(build_psi_arrangement(g)))
        self.assertEqual(len(dump), 13)
        self.assertEqual(dump[-1]["moebius"], -4)
        self.assertEqual(dump[1]["normals"], [["1", "0", "0"]])

    @number("6.18")
    def test_weight_pool(self):
        pool = parse_weight_pool("∅,{0},{1/2, 1}")
        self.assertEqual(pool, [frozenset(), frozenset({Fraction(0)}), frozenset({Fraction(1, 2), Fraction(1)})])
        self.assertEqual([format_weight(w) for w in pool], ["∅", "{0}", "{1/2,1}"])
        for bad in ("", "{0", "0", "{x}"):
            with self.assertRaises(ValueError, msg=bad):
                parse_weight_pool(bad)
