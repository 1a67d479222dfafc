import dataclasses
import json
from enum import Enum
from fractions import Fraction
from typing import Any, Union

import serpy

from arrangement import Flat, Lattice
from exact import LinForm, MPoly, parse_rat
from logderiv import AuditReport, Free, NotFree
from multiarr import MultiFree
from wgraph import ChordlessCycle, GraphError, IncomparableEdge, Obstruction, ValleyPath, WeightedGraph


class GraphFormatError(ValueError):
    pass


class EnhancedJSONEncoder(json.JSONEncoder):
    def default(self, o):
        if isinstance(o, Fraction):
            return str(o)
        if isinstance(o, Enum):
            return o.value
        if isinstance(o, (MPoly, LinForm)):
            return o.display()
        if isinstance(o, (set, frozenset)):
            return sorted(o)
        if dataclasses.is_dataclass(o):
            return dataclasses.asdict(o)
        return super().default(o)


def dumps(obj: Any) -> str:
    return json.dumps(obj, cls=EnhancedJSONEncoder, ensure_ascii=False, separators=(",", ":"))


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except OSError as e:
        raise GraphFormatError(f"cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise GraphFormatError(f"{path} is not valid JSON: {e}") from e


def _vertices_and_edges(data: Any) -> tuple[list[dict], list]:
    if not isinstance(data, dict) or "vertices" not in data:
        raise GraphFormatError("graph JSON needs a 'vertices' list")
    vertices = data["vertices"]
    edges = data.get("edges", [])
    if not isinstance(vertices, list) or not vertices:
        raise GraphFormatError("'vertices' must be a nonempty list")
    if not isinstance(edges, list):
        raise GraphFormatError("'edges' must be a list")
    ids = []
    for vertex in vertices:
        if not isinstance(vertex, dict) or "id" not in vertex or "psi" not in vertex:
            raise GraphFormatError(f"vertex entry {vertex!r} needs 'id' and 'psi'")
        if isinstance(vertex["id"], bool) or not isinstance(vertex["id"], int):
            raise GraphFormatError(f"vertex id {vertex['id']!r} is not an integer")
        ids.append(vertex["id"])
    if sorted(ids) != list(range(1, len(ids) + 1)):
        raise GraphFormatError(f"vertex ids {sorted(ids)} are not 1..{len(ids)}")
    for edge in edges:
        if not isinstance(edge, list) or len(edge) != 2 or not all(
                isinstance(v, int) and not isinstance(v, bool) for v in edge):
            raise GraphFormatError(f"edge {edge!r} is not a pair of vertex ids")
    return sorted(vertices, key=lambda vertex: vertex["id"]), edges


def graph_from_json(data: Any) -> WeightedGraph:
    """Vertices carry weight lists of exact rationals such as "1/2"."""
    vertices, edges = _vertices_and_edges(data)
    psi = []
    for vertex in vertices:
        values = vertex["psi"]
        if not isinstance(values, list):
            raise GraphFormatError(f"psi of vertex {vertex['id']} must be a list")
        try:
            weights = [parse_rat(value) for value in values]
        except ValueError as e:
            raise GraphFormatError(f"vertex {vertex['id']}: {e}") from e
        if len(set(weights)) != len(weights):
            raise GraphFormatError(f"vertex {vertex['id']} repeats a weight")
        psi.append(frozenset(weights))
    try:
        return WeightedGraph.build(len(vertices), edges, psi)
    except GraphError as e:
        raise GraphFormatError(str(e)) from e


def int_graph_from_json(data: Any) -> WeightedGraph:
    """Vertices carry a nonnegative integer weight."""
    vertices, edges = _vertices_and_edges(data)
    psi = []
    for vertex in vertices:
        value = vertex["psi"]
        if isinstance(value, bool) or not isinstance(value, int) or value < 0:
            raise GraphFormatError(f"psi of vertex {vertex['id']} must be a nonnegative integer")
        psi.append(value)
    try:
        return WeightedGraph.build(len(vertices), edges, psi)
    except GraphError as e:
        raise GraphFormatError(str(e)) from e


class RatField(serpy.Field):
    to_value = staticmethod(str)


class ChordlessCycleSerializer(serpy.Serializer):
    kind = serpy.MethodField()
    cycle = serpy.MethodField()

    def get_kind(self, obj: ChordlessCycle) -> str:
        return obj.kind.value

    def get_cycle(self, obj: ChordlessCycle) -> list[int]:
        return list(obj.cycle)


class IncomparableEdgeSerializer(serpy.Serializer):
    kind = serpy.MethodField()
    edge = serpy.MethodField()

    def get_kind(self, obj: IncomparableEdge) -> str:
        return obj.kind.value

    def get_edge(self, obj: IncomparableEdge) -> list[int]:
        return [obj.u, obj.v]


class ValleyPathSerializer(serpy.Serializer):
    kind = serpy.MethodField()
    path = serpy.MethodField()

    def get_kind(self, obj: ValleyPath) -> str:
        return obj.kind.value

    def get_path(self, obj: ValleyPath) -> list[int]:
        return list(obj.path)


OBSTRUCTION_SERIALIZERS = {
    ChordlessCycle: ChordlessCycleSerializer,
    IncomparableEdge: IncomparableEdgeSerializer,
    ValleyPath: ValleyPathSerializer,
}


def obstruction_dict(obstruction: Obstruction) -> dict:
    return OBSTRUCTION_SERIALIZERS[type(obstruction)](obstruction).data


class AuditSerializer(serpy.Serializer):
    edge = serpy.MethodField()
    exp_deleted = serpy.MethodField()
    exp_restricted = serpy.MethodField()
    subset_holds = serpy.BoolField()
    refutes_freeness = serpy.BoolField()

    def get_edge(self, obj: AuditReport) -> list[int]:
        return list(obj.edge)

    def get_exp_deleted(self, obj: AuditReport) -> list[int]:
        return list(obj.exp_deleted)

    def get_exp_restricted(self, obj: AuditReport) -> list[int]:
        return list(obj.exp_restricted)


class FreeSerializer(serpy.Serializer):
    verdict = serpy.MethodField()
    ordering = serpy.MethodField()
    exponents = serpy.MethodField()
    saito_scalar = RatField()
    basis = serpy.MethodField()

    def get_verdict(self, obj: Free) -> str:
        return "free"

    def get_ordering(self, obj: Free) -> list[int]:
        return list(obj.ordering.perm)

    def get_exponents(self, obj: Free) -> list[int]:
        return list(obj.exponents)

    def get_basis(self, obj: Free) -> list[dict[str, str]]:
        return [d.as_dict() for d in obj.basis]


class MultiFreeSerializer(FreeSerializer):
    multiplicities = serpy.MethodField()

    def get_multiplicities(self, obj: MultiFree) -> list[dict]:
        return obj.multiarrangement.as_dict()


class NotFreeSerializer(serpy.Serializer):
    verdict = serpy.MethodField()
    obstruction = serpy.MethodField()
    audit = serpy.MethodField()

    def get_verdict(self, obj: NotFree) -> str:
        return "not_free"

    def get_obstruction(self, obj: NotFree) -> dict:
        return obstruction_dict(obj.obstruction)

    def get_audit(self, obj: NotFree):
        return AuditSerializer(obj.audit).data if obj.audit is not None else None


def certificate_dict(cert: Union[Free, MultiFree, NotFree]) -> dict:
    if isinstance(cert, MultiFree):
        return MultiFreeSerializer(cert).data
    if isinstance(cert, Free):
        return FreeSerializer(cert).data
    data = NotFreeSerializer(cert).data
    if data["audit"] is None:
        del data["audit"]
    return data


class FlatSerializer(serpy.Serializer):
    rank = serpy.IntField()
    normals = serpy.MethodField()
    members = serpy.MethodField()

    def get_normals(self, obj: Flat) -> list[list[str]]:
        return [[str(c) for c in row] for row in obj.normals]

    def get_members(self, obj: Flat) -> list[int]:
        return sorted(obj.members)


def flat_dict(lat: Lattice, x: Flat) -> dict:
    data = FlatSerializer(x).data
    data["moebius"] = lat.moebius[x]
    return data


def lattice_dump(lat: Lattice) -> list[dict]:
    return [flat_dict(lat, x) for x in lat.flats]
