"""Resolution graphs: weighted path counts, r-coefficients and their oracles.

Vertices 1..K are the blow-ups of a resolution of one divisorial valuation E;
an edge j → i (j > i) means the centre of the j-th blow-up lies on the strict
transform of the i-th exceptional divisor, with weight 2 when it lies in its
quadric-cone singular locus. Everything here is integral and exact: r_i is
computed backwards from K by a recursion, and independently forwards by
simulating total transforms stage by stage.
"""

from __future__ import annotations

import dataclasses
import functools
import random
import typing
from fractions import Fraction

from rlab.errors import DomainError, GraphError
from rlab.ids import MODE_CANONICAL, MODE_FIBRE, MODE_SIGMA


@dataclasses.dataclass(frozen=True)
class Vertex:
    level: int
    mu: int
    codim: int
    gamma: typing.Optional[int] = None

    @property
    def delta(self) -> int:
        """The elementary discrepancy codim − μ."""
        return self.codim - self.mu


@dataclasses.dataclass(frozen=True, order=True)
class Edge:
    src: int
    dst: int
    weight: int = 1


@dataclasses.dataclass(frozen=True)
class ResolutionGraph:
    fibre_dim: int
    vertices: typing.Tuple[Vertex, ...]
    edges: typing.Tuple[Edge, ...] = ()
    l_fibre: int = 0

    @property
    def K(self) -> int:
        return len(self.vertices)

    def vertex(self, i: int) -> Vertex:
        return self.vertices[i - 1]

    def is_lower(self, i: int) -> bool:
        return self.vertex(i).level <= self.fibre_dim - 2

    @functools.cached_property
    def L(self) -> int:
        """max I_l (0 when there is no lower part)."""
        return max((i for i in range(1, self.K + 1) if self.is_lower(i)), default=0)

    @functools.cached_property
    def L_sing(self) -> int:
        return max((i for i in range(1, self.L + 1) if self.vertex(i).mu == 2), default=0)

    @functools.cached_property
    def in_edges(self) -> typing.Dict[int, typing.Tuple[Edge, ...]]:
        out: typing.Dict[int, typing.List[Edge]] = {i: [] for i in range(1, self.K + 1)}
        for e in self.edges:
            if e.dst in out:
                out[e.dst].append(e)
        return {i: tuple(sorted(es)) for i, es in out.items()}

    @functools.cached_property
    def out_edges(self) -> typing.Dict[int, typing.Tuple[Edge, ...]]:
        out: typing.Dict[int, typing.List[Edge]] = {i: [] for i in range(1, self.K + 1)}
        for e in self.edges:
            if e.src in out:
                out[e.src].append(e)
        return {i: tuple(sorted(es)) for i, es in out.items()}

    def to_doc(self) -> dict:
        """The JSON document form (same schema `rlab.schema.GraphDoc` reads)."""
        vertices = []
        for v in self.vertices:
            doc = {"level": v.level, "mu": v.mu, "codim": v.codim}
            if v.gamma is not None:
                doc["gamma"] = v.gamma
            vertices.append(doc)
        return {
            "fibre_dim": self.fibre_dim,
            "l_fibre": self.l_fibre,
            "vertices": vertices,
            "edges": [{"src": e.src, "dst": e.dst, "weight": e.weight} for e in self.edges],
        }


@dataclasses.dataclass(frozen=True)
class PullbackExpansion:
    """Coefficients of a total transform over E_1..E_K at stage K."""

    coeffs: typing.Dict[int, int]

    def __getitem__(self, i: int) -> int:
        return self.coeffs.get(i, 0)


@dataclasses.dataclass(frozen=True)
class SigmaPartition:
    sigma_l: int
    sigma_u: int
    sigma_sing: int
    sigma_nonsing: int


# --- validation --------------------------------------------------------------


def validate_graph(g: ResolutionGraph) -> typing.List[str]:
    violations = []
    K, M = g.K, g.fibre_dim
    if K < 1:
        return ["graph has no vertices"]
    if M < 2:
        violations.append(f"fibre dimension {M} < 2")
    for i in range(1, K + 1):
        v = g.vertex(i)
        where = f"vertex {i}"
        if not 0 <= v.level <= M - 1:
            violations.append(f"{where}: level {v.level} outside 0..{M - 1}")
        if v.mu not in (1, 2):
            violations.append(f"{where}: multiplicity {v.mu} not in {{1, 2}}")
        if v.codim < 2:
            violations.append(f"{where}: centre codimension {v.codim} < 2")
        if v.mu == 2 and v.level >= M - 2:
            violations.append(
                f"{where}: multiplicity 2 at level {v.level} (levels M-2, M-1 must be smooth)"
            )
        if v.level == M - 1 and v.codim != 2:
            violations.append(f"{where}: upper-part centre must have codimension 2, got {v.codim}")
        if v.level <= M - 2 and v.delta < 2:
            violations.append(f"{where}: lower-part discrepancy {v.delta} < 2")
        if v.delta < 1:
            violations.append(f"{where}: discrepancy {v.delta} < 1")
        if i <= g.l_fibre and v.gamma not in (1, 2):
            violations.append(f"{where}: fibre multiplicity gamma must be 1 or 2 for i <= L_fibre")
    if not 0 <= g.l_fibre <= K:
        violations.append(f"L_fibre {g.l_fibre} outside 0..{K}")
    if g.K >= 1 and g.vertex(K).level != M - 1:
        violations.append(f"vertex {K}: the last blow-up must lie in the upper part")
    upper_seen = None
    for i in range(1, K + 1):
        if not g.is_lower(i):
            upper_seen = upper_seen or i
        elif upper_seen is not None:
            violations.append(f"vertex {i}: lower-part vertex after upper-part vertex {upper_seen}")
            break
    seen = set()
    for e in g.edges:
        where = f"edge {e.src}->{e.dst}"
        if not (1 <= e.src <= K and 1 <= e.dst <= K):
            violations.append(f"{where}: endpoint outside 1..{K}")
            continue
        if e.src <= e.dst:
            violations.append(f"{where}: edges must go from a later to an earlier blow-up")
        if e.weight not in (1, 2):
            violations.append(f"{where}: weight {e.weight} not in {{1, 2}}")
        if e.weight == 2 and not (e.src > g.L_sing >= e.dst):
            violations.append(f"{where}: weight-2 edge into non-singular stage")
        if (e.src, e.dst) in seen:
            violations.append(f"{where}: duplicate edge")
        seen.add((e.src, e.dst))
    if not violations:
        reached = {K}
        for j in range(K, 0, -1):
            if j in reached:
                reached.update(e.dst for e in g.out_edges[j])
        for i in range(1, K):
            if i not in reached:
                violations.append(f"vertex {i}: not reachable from vertex {K}")
    return violations


def require_valid(g: ResolutionGraph):
    violations = validate_graph(g)
    if violations:
        raise GraphError(violations)


# --- recursions --------------------------------------------------------------


def _backward(g: ResolutionGraph, weighted: bool) -> typing.Dict[int, int]:
    require_valid(g)
    # Edges only go downwards, so decreasing index is a topological order.
    acc = {g.K: 1}
    for i in range(g.K - 1, 0, -1):
        acc[i] = sum(acc[e.src] * (e.weight if weighted else 1) for e in g.in_edges[i])
    return dict(sorted(acc.items()))


def path_counts(g: ResolutionGraph) -> typing.Dict[int, int]:
    """p_Ki: the number of paths from K to i (p_KK = 1)."""
    return _backward(g, weighted=False)


def r_coeffs(g: ResolutionGraph) -> typing.Dict[int, int]:
    """r_i = ord_E of the pullback of E_i: paths from K weighted by edge weight."""
    return _backward(g, weighted=True)


def _stages(g: ResolutionGraph, start: int, increments) -> typing.Dict[int, Fraction]:
    """Total transform coefficients over E_start..E_K, blow-up by blow-up.

    Blowing up B_{j-1} pulls each E_a^{j-1} back to E_a^j plus w_{ja}·E_j when
    j → a; `increments[j]` is the multiplicity the tracked divisor itself
    picks up along B_{j-1}.
    """
    coeffs: typing.Dict[int, Fraction] = {}
    for j in range(start, g.K + 1):
        c = increments(j)
        for e in g.out_edges[j]:
            if e.dst in coeffs:
                c += e.weight * coeffs[e.dst]
        coeffs[j] = c
    return coeffs


def forward_pullback(g: ResolutionGraph, i: int) -> PullbackExpansion:
    require_valid(g)
    if not 1 <= i <= g.K:
        raise DomainError(f"vertex {i} outside 1..{g.K}")
    coeffs = _stages(g, i, lambda j: Fraction(int(j == i)))
    return PullbackExpansion({j: int(c) for j, c in coeffs.items()})


def stage_simulation(g: ResolutionGraph, increments: typing.Sequence) -> Fraction:
    """ord_E of a divisor D with D^j = φ*D^{j−1} − x_j·E_j, where x = increments.

    An oracle for the linear functionals that does not use r at all.
    """
    require_valid(g)
    if len(increments) != g.K:
        raise DomainError(f"{len(increments)} increments for {g.K} blow-ups")
    inc = [Fraction(x) for x in increments]
    return _stages(g, 1, lambda j: inc[j - 1])[g.K]


def compatibility_check(g: ResolutionGraph, a: typing.Mapping[int, Fraction]) -> bool:
    """a(i) ≥ Σ_{j ∈ I_l, j→i} a(j) for every i in I_l."""
    lower = [i for i in range(1, g.K + 1) if g.is_lower(i)]
    for i in lower:
        incoming = sum(a[e.src] for e in g.in_edges[i] if g.is_lower(e.src))
        if a[i] < incoming:
            return False
    return True


def increments_for(g: ResolutionGraph, mode: str, nu=None) -> typing.List[Fraction]:
    """Per-stage multiplicities of Σ (ν), of T (γ up to L_fibre) or of K_V (δ)."""
    if mode == MODE_SIGMA:
        if nu is None or len(nu) != g.K:
            raise DomainError(f"mode {mode} needs {g.K} multiplicities")
        return [Fraction(x) for x in nu]
    if mode == MODE_FIBRE:
        out = []
        for i in range(1, g.K + 1):
            gamma = g.vertex(i).gamma if i <= g.l_fibre else 0
            if gamma is None:
                raise DomainError(f"vertex {i} has no fibre multiplicity")
            out.append(Fraction(gamma))
        return out
    if mode == MODE_CANONICAL:
        return [Fraction(v.delta) for v in g.vertices]
    raise DomainError(f"unknown mode {mode!r}")


def ord_linear_functionals(g: ResolutionGraph, nu=None, mode: str = MODE_SIGMA) -> Fraction:
    r = r_coeffs(g)
    inc = increments_for(g, mode, nu)
    return sum((r[i] * inc[i - 1] for i in range(1, g.K + 1)), Fraction(0))


def sigma_partition(g: ResolutionGraph) -> SigmaPartition:
    r = r_coeffs(g)
    sigma_l = sum(r[i] for i in range(1, g.L + 1))
    sigma_u = sum(r[i] for i in range(g.L + 1, g.K + 1))
    sigma_sing = sum(r[i] for i in range(1, g.L_sing + 1))
    sigma_nonsing = sum(r[i] for i in range(g.L_sing + 1, g.K + 1))
    assert sigma_sing + sigma_nonsing == sigma_l + sigma_u
    return SigmaPartition(sigma_l, sigma_u, sigma_sing, sigma_nonsing)


def path_bounds_hold(g: ResolutionGraph) -> bool:
    """r_i = p_Ki above L_sing and p_Ki ≤ r_i ≤ 2·p_Ki at or below it."""
    r, p = r_coeffs(g), path_counts(g)
    for i in range(1, g.K + 1):
        if i > g.L_sing and r[i] != p[i]:
            return False
        if i <= g.L_sing and not p[i] <= r[i] <= 2 * p[i]:
            return False
    return True


def is_chain_connected(g: ResolutionGraph) -> bool:
    """Every vertex i < K has an in-edge from i + 1."""
    return all(any(e.src == i + 1 for e in g.in_edges[i]) for i in range(1, g.K))


# --- random instances --------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class GraphParams:
    """Shape of a random graph.

    n_lower is L (vertices 1..L form the lower part), l_sing is L_sing; None
    for either draws it. density is the probability of each extra edge j → i
    beyond the one that keeps i reachable; weight2 the probability that an
    admissible edge gets weight 2.
    """

    K: int
    fibre_dim: int = 3
    n_lower: typing.Optional[int] = None
    l_sing: typing.Optional[int] = None
    l_fibre: typing.Optional[int] = None
    density: float = 0.3
    weight2: float = 0.5
    chain: bool = False


def random_graph(params: GraphParams, seed: int) -> ResolutionGraph:
    rng = random.Random(seed)
    K, M = params.K, params.fibre_dim
    if K < 1 or M < 2:
        raise DomainError(f"need K >= 1 and fibre dimension >= 2 (got K={K}, M={M})")
    L = rng.randint(0, K - 1) if params.n_lower is None else params.n_lower
    if not 0 <= L <= K - 1:
        raise DomainError(f"lower part size {L} leaves no upper vertex among {K}")
    if params.l_sing is None:
        l_sing = rng.randint(0, L) if M >= 3 else 0
    else:
        l_sing = params.l_sing
    if not 0 <= l_sing <= L:
        raise DomainError(f"L_sing={l_sing} outside 0..L={L}")
    if l_sing and M < 3:
        raise DomainError("singular centres need a level <= M-3, so fibre dimension >= 3")
    l_fibre = rng.randint(0, K) if params.l_fibre is None else params.l_fibre
    if not 0 <= l_fibre <= K:
        raise DomainError(f"L_fibre={l_fibre} outside 0..{K}")

    vertices = []
    for i in range(1, K + 1):
        gamma = rng.choice((1, 2)) if i <= l_fibre else None
        if i > L:
            vertices.append(Vertex(M - 1, 1, 2, gamma))
            continue
        mu = 2 if i == l_sing or (i < l_sing and rng.random() < 0.5) else 1
        if mu == 2:
            level = rng.randint(0, M - 3)
            codim = rng.randint(4, 6)
        else:
            level = rng.randint(0, M - 2)
            codim = rng.randint(3, 5)
        vertices.append(Vertex(level, mu, codim, gamma))

    def weight(j, i):
        if j > l_sing >= i and rng.random() < params.weight2:
            return 2
        return 1

    edges = []
    for i in range(1, K):
        parent = i + 1 if params.chain else rng.randint(i + 1, K)
        sources = {parent}
        for j in range(i + 1, K + 1):
            if j != parent and rng.random() < params.density:
                sources.add(j)
        edges.extend(Edge(j, i, weight(j, i)) for j in sorted(sources))
    g = ResolutionGraph(M, tuple(vertices), tuple(sorted(edges)), l_fibre)
    require_valid(g)
    return g
