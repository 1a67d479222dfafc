"""
Command-line frontend.

Every command reads a graph JSON file (except ``sweep``) and writes one
JSON document to standard output. Progress and summaries go to standard
error through logging.
"""
from __future__ import annotations

import argparse
import logging
import os
import re
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from arrangement import (ArrangementError, LatticeGuardExceeded, affine_equiv_check, build_psi_arrangement,
                         characteristic_polynomial, charpoly_coefficients, intersection_lattice, is_nest,
                         supersolvable_mchain)
from constants import (DEFAULT_LOG_LEVEL, DEFAULT_SEED, LOG_FORMAT, LOG_LEVEL_ENV, SWEEP_DEFAULT_MAX_VERTICES,
                       SWEEP_DEFAULT_SAMPLES, SWEEP_DEFAULT_WEIGHTS, Command, ExitCode)
from exact import coordinate_names
from logderiv import (AuditInconclusive, CertificationError, Free, addition_deletion_audit, decide_freeness,
                      theta_basis)
from multiarr import decide_multi_freeness
from serialize import (AuditSerializer, GraphFormatError, certificate_dict, dumps, flat_dict, graph_from_json,
                       int_graph_from_json, load_json, obstruction_dict)
from sweep import SweepGuardExceeded, parse_weight_pool, run_sweep
from wgraph import GraphError, Ordering, find_weo

LOGGER = logging.getLogger(__name__)

_EDGE = re.compile(r"^\s*(\d+)\s*,\s*(\d+)\s*$")


@dataclass(frozen=True)
class RunConfig:
    command: Command
    input_path: Optional[str] = None
    edge: Optional[tuple[int, int]] = None
    max_vertices: int = SWEEP_DEFAULT_MAX_VERTICES
    weights: str = SWEEP_DEFAULT_WEIGHTS
    samples: int = SWEEP_DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED


def parse_edge(text: str) -> tuple[int, int]:
    match = _EDGE.match(text)
    if match is None:
        raise argparse.ArgumentTypeError(f"edge must look like 'i,j', got {text!r}")
    return int(match.group(1)), int(match.group(2))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="arranger",
        description="Freeness and supersolvability certificates for psi-graphical arrangements.",
    )
    sub = p.add_subparsers(dest="command", required=True)
    helps = {
        Command.CHECK: "Decide freeness and emit a certificate.",
        Command.BASIS: "Emit the triangular basis of logarithmic derivations.",
        Command.CHARPOLY: "Emit the characteristic polynomial from the intersection lattice.",
        Command.SSOLV: "Emit a maximal chain of modular flats, or null.",
        Command.AUDIT: "Run the addition-deletion audit along one edge.",
        Command.MULTI: "Decide freeness of the multiarrangement of an integer-weighted graph.",
        Command.NISH: "Check the nest condition and the N-Ish affine equivalence.",
    }
    for command, text in helps.items():
        cp = sub.add_parser(command.value, help=text)
        cp.add_argument("input", help="Graph JSON file.")
        if command is Command.AUDIT:
            cp.add_argument("--edge", type=parse_edge, required=True, help="Edge as 'i,j'.")
    sp = sub.add_parser(Command.SWEEP.value, help="Compare the equivalent conditions on small graphs.")
    sp.add_argument("--max-vertices", type=int, default=SWEEP_DEFAULT_MAX_VERTICES)
    sp.add_argument("--weights", default=SWEEP_DEFAULT_WEIGHTS, help="Weight pool, e.g. '∅,{0},{1},{0,1}'.")
    sp.add_argument("--samples", type=int, default=SWEEP_DEFAULT_SAMPLES)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    command = Command(args.command)
    if command is Command.SWEEP:
        return RunConfig(command, max_vertices=args.max_vertices, weights=args.weights,
                         samples=args.samples, seed=args.seed)
    return RunConfig(command, input_path=args.input, edge=getattr(args, "edge", None))


def _check(config: RunConfig) -> dict:
    return certificate_dict(decide_freeness(graph_from_json(load_json(config.input_path))))


def _basis(config: RunConfig) -> dict:
    g = graph_from_json(load_json(config.input_path))
    found = find_weo(g)
    if not isinstance(found, Ordering):
        return {"ordering": None, "obstruction": obstruction_dict(found)}
    ders, rows = theta_basis(g, found)
    names = coordinate_names(g.n_vertices)
    return {
        "ordering": list(found.perm),
        "rows": [names[r] for r in rows],
        "degrees": [d.degree for d in ders],
        "basis": [d.display() for d in ders],
    }


def _charpoly(config: RunConfig) -> dict:
    g = graph_from_json(load_json(config.input_path))
    lat = intersection_lattice(build_psi_arrangement(g))
    return {
        "polynomial": characteristic_polynomial(lat).display(),
        "coefficients": charpoly_coefficients(lat),
        "flats_by_rank": lat.rank_counts(),
        "moebius_by_rank": lat.moebius_sums(),
    }


def _ssolv(config: RunConfig) -> dict:
    g = graph_from_json(load_json(config.input_path))
    lat = intersection_lattice(build_psi_arrangement(g))
    chain = supersolvable_mchain(lat)
    return {"mchain": None if chain is None else [flat_dict(lat, x) for x in chain]}


def _audit(config: RunConfig) -> dict:
    g = graph_from_json(load_json(config.input_path))
    return AuditSerializer(addition_deletion_audit(g, config.edge)).data


def _multi(config: RunConfig) -> dict:
    return certificate_dict(decide_multi_freeness(int_graph_from_json(load_json(config.input_path))))


def _nish(config: RunConfig) -> dict:
    g = graph_from_json(load_json(config.input_path))
    equivalent = affine_equiv_check(g)
    nest = is_nest([g.weight(v) for v in g.vertices])
    return {
        "nest": None if nest is None else list(nest),
        "affine_equivalent": equivalent,
        "free": isinstance(decide_freeness(g), Free),
    }


def _sweep(config: RunConfig) -> dict:
    pool = parse_weight_pool(config.weights)
    return run_sweep(config.max_vertices, pool, config.samples, config.seed).as_dict()


HANDLERS = {
    Command.CHECK: _check,
    Command.BASIS: _basis,
    Command.CHARPOLY: _charpoly,
    Command.SSOLV: _ssolv,
    Command.AUDIT: _audit,
    Command.MULTI: _multi,
    Command.NISH: _nish,
    Command.SWEEP: _sweep,
}


def run(config: RunConfig, out=None) -> int:
    """Run one command, printing its JSON result. Returns the exit code."""
    out = out if out is not None else sys.stdout
    try:
        result = HANDLERS[config.command](config)
    except (LatticeGuardExceeded, SweepGuardExceeded) as e:
        LOGGER.error("%s", e)
        return ExitCode.GUARD_EXCEEDED
    except AuditInconclusive as e:
        LOGGER.error("audit inconclusive: %s", e)
        return ExitCode.INCONCLUSIVE
    except CertificationError as e:
        LOGGER.error("certification failed: %s", e)
        return ExitCode.CERTIFICATION_FAILURE
    except (GraphFormatError, GraphError, ArrangementError, ValueError) as e:
        LOGGER.error("invalid input: %s", e)
        return ExitCode.INVALID_INPUT
    out.write(dumps(result) + "\n")
    LOGGER.info("%s finished", config.command.value)
    return ExitCode.OK


def configure_logging() -> None:
    level = os.environ.get(LOG_LEVEL_ENV, DEFAULT_LOG_LEVEL).upper()
    if not isinstance(logging.getLevelName(level), int):
        level = DEFAULT_LOG_LEVEL
    logging.basicConfig(stream=sys.stderr, format=LOG_FORMAT, level=level)


def main(argv: Optional[Sequence[str]] = None) -> int:
    configure_logging()
    args = build_parser().parse_args(argv)
    return int(run(config_from_args(args)))
