"""JSON documents: resolution graphs, instances and the per-command settings.

Every document read from disk goes through a pydantic model here, so a bad
file fails with a field path (`edges[3].weight: ...`) instead of deep inside
the arithmetic. Rationals are written as integers or "p/q" strings.
"""

from __future__ import annotations

import json
import typing
from fractions import Fraction

from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    ValidationError,
    model_validator,
)
from typing_extensions import Annotated, Literal

from rlab.errors import DomainError, GraphError, SchemaError
from rlab.excluder import NFInstance, PigeonholeInstance, Singularity
from rlab.ids import RANK_SUITES, SWEEP_FAMILIES
from rlab.respath import Edge, ResolutionGraph, Vertex, require_valid


def _to_fraction(value):
    if isinstance(value, bool):
        raise ValueError("expected a rational, got a boolean")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            raise ValueError(f"{value!r} is not an integer or 'p/q'") from None
    raise ValueError("use an integer or a 'p/q' string (floats are not exact)")


Rational = Annotated[Fraction, BeforeValidator(_to_fraction)]
IntRange = typing.Tuple[int, int]


class Doc(BaseModel):
    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True)


# --- graphs and instances ----------------------------------------------------


class VertexDoc(Doc):
    level: int = Field(ge=0)
    mu: Literal[1, 2]
    codim: int = Field(ge=2)
    gamma: typing.Optional[Literal[1, 2]] = None


class EdgeDoc(Doc):
    src: int = Field(ge=1)
    dst: int = Field(ge=1)
    weight: Literal[1, 2] = 1


class GraphDoc(Doc):
    fibre_dim: int = Field(default=3, ge=2)
    l_fibre: int = Field(default=0, ge=0)
    vertices: typing.List[VertexDoc] = Field(min_length=1)
    edges: typing.List[EdgeDoc] = []

    def to_graph(self) -> ResolutionGraph:
        return ResolutionGraph(
            self.fibre_dim,
            tuple(Vertex(v.level, v.mu, v.codim, v.gamma) for v in self.vertices),
            tuple(sorted(Edge(e.src, e.dst, e.weight) for e in self.edges)),
            self.l_fibre,
        )


class CrossDoc(Doc):
    i: int = Field(ge=1)
    j: int = Field(ge=1)
    value: Rational


class NFInstanceDoc(Doc):
    model_config = ConfigDict(populate_by_name=True)

    kind: Literal["nf"] = "nf"
    label: str = ""
    graph: GraphDoc
    n: int = Field(ge=1)
    nu: typing.List[Rational]
    lam: Rational = Field(alias="lambda")
    # optional multiplicities m_1..m_L for the counting system
    m: typing.Optional[typing.List[Rational]] = None
    cross: typing.List[CrossDoc] = []

    def to_instance(self, default_label: str) -> NFInstance:
        g = self.graph.to_graph()
        require_valid(g)
        if self.m is not None and len(self.m) != g.L:
            raise DomainError(f"m: has {len(self.m)} entries, the lower part has L={g.L}")
        for idx, c in enumerate(self.cross):
            if not c.i < c.j <= g.L:
                raise DomainError(
                    f"cross[{idx}]: m_({c.i},{c.j}) outside 1 <= i < j <= L={g.L}"
                )
        return NFInstance(g, self.n, tuple(self.nu), self.lam, self.label or default_label)


class SingularityDoc(Doc):
    label: str
    eps: Rational
    deg: Rational
    t: Rational = Fraction(1)
    group: str = "T"


class PigeonholeDoc(Doc):
    kind: Literal["pigeonhole"]
    label: str = ""
    n: int = Field(ge=1)
    y_c: Rational
    lambdas: typing.Dict[str, Rational]
    singularities: typing.List[SingularityDoc] = Field(min_length=1)
    t_c: typing.Optional[typing.Dict[str, Rational]] = None

    @model_validator(mode="after")
    def _every_group_has_a_lambda(self):
        for idx, s in enumerate(self.singularities):
            if s.group not in self.lambdas:
                raise ValueError(f"singularities[{idx}].group: no lambda for group {s.group!r}")
        return self

    def to_instance(self, default_label: str) -> PigeonholeInstance:
        return PigeonholeInstance(
            self.n,
            self.y_c,
            dict(self.lambdas),
            tuple(Singularity(s.label, s.eps, s.deg, s.t, s.group) for s in self.singularities),
            dict(self.t_c) if self.t_c is not None else None,
            self.label or default_label,
        )


_INSTANCE_KINDS = {"nf": NFInstanceDoc, "pigeonhole": PigeonholeDoc}


# --- settings ----------------------------------------------------------------


class RankCheckSettings(Doc):
    suite: Literal[RANK_SUITES] = "lemma31"
    N: IntRange = (3, 4)
    d: IntRange = (3, 6)
    m: IntRange = (1, 5)
    r: IntRange = (1, 2)
    seeds: int = Field(default=20, ge=1)
    lines: int = Field(default=5, ge=0)
    seed: typing.Optional[int] = None


class CodimSweepSettings(Doc):
    N: IntRange = (3, 12)
    d: IntRange = (4, 12)
    k: IntRange = (1, 12)
    l: IntRange = (1, 12)
    q: IntRange = (2, 12)
    M: IntRange = (4, 10)
    families: typing.List[Literal[SWEEP_FAMILIES]] = list(SWEEP_FAMILIES)
    include_d3: bool = False


class GraphCheckSettings(Doc):
    count: int = Field(default=1000, ge=0)
    K: IntRange = (1, 40)
    fibre_dim: IntRange = (3, 5)
    oracle_k_max: int = Field(default=8, ge=0)
    nu_trials: int = Field(default=100, ge=0)
    seed: typing.Optional[int] = None


class ExcludeSettings(Doc):
    count: int = Field(default=1000, ge=0)
    K_max: int = Field(default=12, ge=1)
    fibre_dim: int = Field(default=3, ge=2)
    n_max: int = Field(default=5, ge=1)
    lam_max: int = Field(default=5, ge=0)
    denominator: int = Field(default=4, ge=1)
    seed: typing.Optional[int] = None


class LimitsSettings(Doc):
    max_cells: int = Field(default=2_000_000, ge=1)


class LogSettings(Doc):
    level: int = Field(default=4, ge=0, le=5)


SETTINGS = {
    "rank_check": RankCheckSettings,
    "codim_sweep": CodimSweepSettings,
    "graph_check": GraphCheckSettings,
    "exclude": ExcludeSettings,
    "limits": LimitsSettings,
    "log": LogSettings,
}


# --- loading -----------------------------------------------------------------


def _loc(loc) -> str:
    out = ""
    for part in loc:
        if isinstance(part, int):
            out += f"[{part}]"
        else:
            out += f".{part}" if out else str(part)
    return out or "<document>"


def describe_validation_error(exc: ValidationError, prefix: str = "") -> str:
    lines = []
    for err in exc.errors():
        msg = err["msg"]
        if msg.startswith("Value error, "):
            msg = msg[len("Value error, ") :]
        if not err["loc"]:
            lines.append(f"{prefix}{msg}")
            continue
        lines.append(f"{prefix}{_loc(err['loc'])}: {msg}")
    return "\n".join(lines)


def read_json(path: str) -> typing.Any:
    try:
        with open(path, "r") as f:
            return json.load(f)
    except FileNotFoundError:
        raise SchemaError(f"{path}: no such file") from None
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}") from None
    except OSError as e:
        raise SchemaError(f"{path}: {e}") from None


def parse_model(model: typing.Type[BaseModel], data, where: str):
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise SchemaError(describe_validation_error(e, f"{where}: ")) from None


def load_graph(path: str) -> GraphDoc:
    data = read_json(path)
    if isinstance(data, dict) and "graph" in data and "vertices" not in data:
        data = data["graph"]
    return parse_model(GraphDoc, data, path)


def load_instance(path: str, default_label: str = ""):
    """An `NFInstance` or `PigeonholeInstance` from a document with a `kind`
    field ("nf" when absent), plus the parsed document."""
    data = read_json(path)
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: expected a JSON object")
    kind = data.get("kind", "nf")
    if kind not in _INSTANCE_KINDS:
        raise SchemaError(f"{path}: kind: unknown instance kind {kind!r}")
    doc = parse_model(_INSTANCE_KINDS[kind], data, path)
    try:
        return doc.to_instance(default_label or path), doc
    except GraphError as e:
        raise SchemaError(f"{path}: graph: " + "; ".join(e.violations)) from None
    except DomainError as e:
        raise SchemaError(f"{path}: {e}") from None
