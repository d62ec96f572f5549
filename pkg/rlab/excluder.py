"""Noether-Fano arithmetic and the exclusion of supermaximal singularities.

An `NFInstance` attaches scalars (n, ν, λ) to a resolution graph. From them
follow e = ord_E Σ − n·a(E) and ord_E T; `exclude` instantiates the chain of
inequalities that rules a supermaximal singularity out, and `chain_verify`
checks the same chain symbolically with `MultiPoly` certificates.
"""

from __future__ import annotations

import dataclasses
import functools
import random
import typing
from fractions import Fraction

from rlab.errors import DomainError
from rlab.ids import (
    MODE_CANONICAL,
    MODE_FIBRE,
    MODE_SIGMA,
    VERDICT_FEASIBLE,
    VERDICT_INFEASIBLE,
    VERDICT_NOT_SUPERMAXIMAL,
)
from rlab.multipoly import MultiPoly, symbols
from rlab.respath import (
    GraphParams,
    ResolutionGraph,
    SigmaPartition,
    ord_linear_functionals,
    r_coeffs,
    random_graph,
    require_valid,
    sigma_partition,
)


@dataclasses.dataclass(frozen=True)
class NFInstance:
    graph: ResolutionGraph
    n: int
    nu: typing.Tuple[Fraction, ...]
    lam: Fraction
    label: str = "instance"

    def __post_init__(self):
        require_valid(self.graph)
        if self.n < 1:
            raise DomainError(f"n must be positive, got {self.n}")
        if len(self.nu) != self.graph.K:
            raise DomainError(f"{len(self.nu)} multiplicities for {self.graph.K} blow-ups")
        if any(x <= 0 for x in self.nu):
            raise DomainError("multiplicities nu_i must be positive")
        if self.lam < 0:
            raise DomainError(f"lambda must be non-negative, got {self.lam}")

    @functools.cached_property
    def r(self) -> typing.Dict[int, int]:
        return r_coeffs(self.graph)

    @property
    def e(self) -> Fraction:
        return epsilon(self)

    @property
    def ord_t(self) -> Fraction:
        return ord_linear_functionals(self.graph, mode=MODE_FIBRE)


def epsilon(inst: NFInstance) -> Fraction:
    """Σ r_i ν_i − n·Σ r_i δ_i."""
    sigma = ord_linear_functionals(inst.graph, inst.nu, MODE_SIGMA)
    return sigma - inst.n * ord_linear_functionals(inst.graph, mode=MODE_CANONICAL)


def is_supermaximal(inst: NFInstance) -> bool:
    return 2 * inst.n * epsilon(inst) > inst.lam * inst.ord_t


# --- pigeonhole --------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class Singularity:
    label: str
    eps: Fraction
    deg: Fraction
    t: Fraction
    group: str


@dataclasses.dataclass(frozen=True)
class PigeonholeInstance:
    """Maximal singularities met by a curve C, grouped by fibre component T.

    `t_c` holds (T·C) per group; when omitted it defaults to the least value
    the setting allows, Σ_{E ∈ T} t_E·(E·C).
    """

    n: int
    y_c: Fraction
    lambdas: typing.Dict[str, Fraction]
    singularities: typing.Tuple[Singularity, ...]
    t_c: typing.Optional[typing.Dict[str, Fraction]] = None
    label: str = "pigeonhole"


@dataclasses.dataclass(frozen=True)
class PigeonholeResult:
    label: str
    found: typing.Optional[str]
    aggregate_lhs: Fraction
    aggregate_rhs: Fraction
    diagnostics: typing.Tuple[str, ...] = ()


def find_supermaximal(p: PigeonholeInstance) -> PigeonholeResult:
    """Some E with 2n·ε_E > λ_T·t_E, found term by term when the aggregate
    inequality 2n·Σ ε_E·deg_E > Σ_T λ_T·Σ_{E∈T} t_E·deg_E holds."""
    diagnostics = []
    if p.n < 1:
        diagnostics.append(f"n = {p.n} is not positive")
    if p.y_c < 0:
        diagnostics.append(f"(Y.C) = {p.y_c} is negative")
    for s in p.singularities:
        if s.eps <= 0 or s.deg <= 0 or s.t < 1:
            diagnostics.append(f"{s.label}: needs eps > 0, deg > 0, t >= 1")
        if s.group not in p.lambdas:
            raise DomainError(f"{s.label}: no lambda for group {s.group!r}")
    for group, lam in sorted(p.lambdas.items()):
        if lam < 0:
            diagnostics.append(f"group {group}: lambda {lam} is negative")

    by_group: typing.Dict[str, Fraction] = {}
    for s in p.singularities:
        by_group[s.group] = by_group.get(s.group, Fraction(0)) + s.t * s.deg
    lhs = 2 * p.n * sum((s.eps * s.deg for s in p.singularities), Fraction(0))
    rhs = sum((p.lambdas[g] * v for g, v in by_group.items()), Fraction(0))

    # The three displayed steps the aggregate is assembled from.
    eps_deg = sum((s.eps * s.deg for s in p.singularities), Fraction(0))
    if not eps_deg > p.y_c:
        diagnostics.append(f"sum eps*deg = {eps_deg} does not exceed (Y.C) = {p.y_c}")
    t_c = p.t_c if p.t_c is not None else by_group
    k2 = sum((p.lambdas[g] * t_c.get(g, Fraction(0)) for g in p.lambdas), Fraction(0))
    if not 2 * p.n * p.y_c >= k2:
        diagnostics.append(f"2n(Y.C) = {2 * p.n * p.y_c} < sum lambda_T (T.C) = {k2}")
    for g, v in sorted(by_group.items()):
        if t_c.get(g, Fraction(0)) < v:
            diagnostics.append(f"group {g}: (T.C) = {t_c.get(g)} < sum t*deg = {v}")

    if not lhs > rhs:
        diagnostics.append(f"aggregate fails: {lhs} <= {rhs}")
        return PigeonholeResult(p.label, None, lhs, rhs, tuple(diagnostics))
    for s in p.singularities:
        if 2 * p.n * s.eps > p.lambdas[s.group] * s.t:
            return PigeonholeResult(p.label, s.label, lhs, rhs, tuple(diagnostics))
    diagnostics.append("aggregate holds but no term does")
    return PigeonholeResult(p.label, None, lhs, rhs, tuple(diagnostics))


# --- quadratic minimum -------------------------------------------------------


def qp_minimize(
    r: typing.Sequence, mu: typing.Sequence[int], c
) -> typing.Tuple[typing.Tuple[Fraction, ...], Fraction]:
    """argmin of Σ r_i μ_i ν_i² on the hyperplane Σ r_i ν_i = c, and the minimum."""
    if not r:
        raise DomainError("empty coefficient vector")
    if len(mu) != len(r):
        raise DomainError("r and mu differ in length")
    if any(x <= 0 for x in r) or any(m not in (1, 2) for m in mu):
        raise DomainError("need r_i > 0 and mu_i in {1, 2}")
    c = Fraction(c)
    if c <= 0:
        raise DomainError(f"c must be positive, got {c}")
    s = sum((Fraction(ri, m) for ri, m in zip(r, mu)), Fraction(0))
    theta = c / s
    return tuple(theta / m for m in mu), c * c / s


# --- counting multiplicities -------------------------------------------------


@dataclasses.dataclass(frozen=True)
class MultiplicityData:
    """m_i, m_{i,j} (i < j) and d_i on the lower part 1..L."""

    m: typing.Tuple[Fraction, ...]
    cross: typing.Dict[typing.Tuple[int, int], Fraction]
    d: typing.Tuple[Fraction, ...]


def _check_dims(inst: NFInstance, length: int, what: str):
    if length != inst.graph.L:
        raise DomainError(f"{what} has {length} entries, the lower part has L={inst.graph.L}")


def counting_system_check(inst: NFInstance, data: MultiplicityData) -> typing.List[str]:
    g = inst.graph
    L = g.L
    _check_dims(inst, len(data.m), "m")
    _check_dims(inst, len(data.d), "d")
    for i, j in data.cross:
        if not 1 <= i < j <= L:
            raise DomainError(f"cross multiplicity m_({i},{j}) outside 1 <= i < j <= {L}")
    violations = []
    values = list(data.m) + list(data.d) + list(data.cross.values())
    if any(Fraction(x) < 0 for x in values):
        violations.append("multiplicities must be non-negative")
    for i in range(1, L + 1):
        nu = Fraction(inst.nu[i - 1])
        lhs = g.vertex(i).mu * nu * nu + Fraction(data.d[i - 1])
        rhs = Fraction(data.m[i - 1]) + sum(
            (Fraction(data.cross.get((j, i), 0)) for j in range(1, i)), Fraction(0)
        )
        if lhs != rhs:
            violations.append(f"row {i}: mu*nu^2 + d = {lhs} but m + sum m_(j,{i}) = {rhs}")
    if L:
        tail = sum((Fraction(x) ** 2 for x in inst.nu[L:]), Fraction(0))
        if Fraction(data.d[L - 1]) < tail:
            violations.append(f"estimate: d_{L} = {data.d[L - 1]} < sum_(i>L) nu_i^2 = {tail}")
    return violations


def balance_multiplicities(
    inst: NFInstance, m: typing.Sequence, cross: typing.Optional[dict] = None
) -> MultiplicityData:
    """Data satisfying every equality of the system, solved for d_i."""
    cross = {k: Fraction(v) for k, v in (cross or {}).items()}
    _check_dims(inst, len(m), "m")
    d = []
    for i in range(1, inst.graph.L + 1):
        nu = Fraction(inst.nu[i - 1])
        incoming = sum((cross.get((j, i), Fraction(0)) for j in range(1, i)), Fraction(0))
        d_i = Fraction(m[i - 1]) + incoming - inst.graph.vertex(i).mu * nu * nu
        if d_i < 0:
            raise DomainError(f"row {i}: m too small, d_{i} would be {d_i}")
        d.append(d_i)
    return MultiplicityData(tuple(Fraction(x) for x in m), cross, tuple(d))


def inequality_11_evaluate(
    inst: NFInstance, m: typing.Sequence
) -> typing.Tuple[Fraction, Fraction]:
    """Both sides of Σ_{i≤L} r_i m_i ≥ Σ_i r_i μ_i ν_i², without a verdict."""
    _check_dims(inst, len(m), "m")
    r = inst.r
    lhs = sum((r[i] * Fraction(m[i - 1]) for i in range(1, inst.graph.L + 1)), Fraction(0))
    rhs = sum(
        (r[i] * inst.graph.vertex(i).mu * Fraction(inst.nu[i - 1]) ** 2 for i in r),
        Fraction(0),
    )
    return lhs, rhs


# --- the symbolic chain ------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class StepCertificate:
    name: str
    claim: str
    kind: str  # zero | nonneg | combination | square
    difference: str
    certificate: str
    certified: bool

    @property
    def status(self) -> str:
        return "certified" if self.certified else "not certified by this method"


@dataclasses.dataclass(frozen=True)
class ChainCertificate:
    steps: typing.Tuple[StepCertificate, ...]

    @property
    def certified(self) -> bool:
        return all(s.certified for s in self.steps)


def _chain_sides():
    n, e, sl, su = symbols("n", "e", "sigma_l", "sigma_u")
    lhs_b = 2 * n**2 * sl * MultiPoly.symbol("sigma_ns") + 2 * n * e * MultiPoly.symbol("sigma_ns")
    rhs_b = 2 * n**2 * sl**2 + 2 * n**2 * sl * su + n**2 * su**2 + 2 * n * e * sl + e**2
    return lhs_b, rhs_b


def _step_bound() -> StepCertificate:
    n, e, sl, lam, ord_t, s_vert, horiz, vert = symbols(
        "n", "e", "sigma_l", "lam", "ord_t", "s_vert", "horiz", "vert"
    )
    one = MultiPoly.const(1)
    diff = (4 * n**2 * sl + 4 * n * e) - (horiz + vert)
    # (side condition, multiplier, strict)
    sides = [
        (4 * n**2 * sl - horiz, one, False),
        (2 * lam * s_vert - vert, one, False),
        (ord_t - s_vert, 2 * lam, False),
        (2 * n * e - lam * ord_t, MultiPoly.const(2), True),
    ]
    residual = diff
    for side, mult, _ in sides:
        residual = residual - mult * side
    # a strict side condition must enter with a positive constant weight
    strict = any(
        is_strict and (mult.constant_value() or 0) > 0 for _, mult, is_strict in sides
    )
    certified = (
        residual.is_zero()
        and all(mult.has_nonnegative_coefficients() for _, mult, _ in sides)
        and strict
    )
    certificate = " + ".join(
        f"({side})" if mult == one else f"{mult}*({side})" for side, mult, _ in sides
    )
    return StepCertificate(
        "a",
        "horiz + vert < 4*n^2*sigma_l + 4*n*e from conditions (h), (v), "
        "sum_(i<=L*) r_i <= ord_T and supermaximality 2ne > lam*ord_T",
        "combination",
        str(diff),
        certificate,
        certified,
    )


def _step_expand() -> StepCertificate:
    n, e, sl, su, ssing, sns = symbols("n", "e", "sigma_l", "sigma_u", "sigma_sing", "sigma_ns")
    lhs_b, rhs_b = _chain_sides()
    premise = (4 * n**2 * sl + 4 * n * e) * (ssing + 2 * sns) - 2 * (2 * n * sl + n * su + e) ** 2
    diff = (lhs_b - rhs_b) - Fraction(1, 2) * premise
    residual = diff.substitute("sigma_sing", sl + su - sns)
    return StepCertificate(
        "b",
        f"{lhs_b} > {rhs_b}, from (4*n^2*sigma_l + 4*n*e)(sigma_sing + 2*sigma_ns) "
        "> 2(2*n*sigma_l + n*sigma_u + e)^2 with sigma_sing + sigma_ns = sigma_l + sigma_u",
        "zero",
        str(lhs_b - rhs_b),
        str(residual),
        residual.is_zero(),
    )


def _step_relax() -> StepCertificate:
    n, e, sl, su, ssing = symbols("n", "e", "sigma_l", "sigma_u", "sigma_sing")
    lhs_b, rhs_b = _chain_sides()
    upper = (2 * n**2 * sl + 2 * n * e) * (sl + su)
    relax = (upper - lhs_b).substitute("sigma_ns", sl + su - ssing)
    target = 2 * n * e * su - n**2 * su**2 - e**2
    identity = upper - rhs_b - target
    return StepCertificate(
        "c",
        f"{target} > 0, using sigma_ns <= sigma_l + sigma_u",
        "nonneg",
        str(relax),
        f"{relax} >= 0; remainder {identity}",
        relax.has_nonnegative_coefficients() and identity.is_zero(),
    )


def _step_square() -> StepCertificate:
    n, e, su = symbols("n", "e", "sigma_u")
    poly = n**2 * su**2 + e**2 - 2 * n * e * su
    root = poly.sqrt()
    certified = root is not None and root * root == poly
    return StepCertificate(
        "d",
        "2*n*e*sigma_u > n^2*sigma_u^2 + e^2 is impossible",
        "square",
        str(poly),
        f"({root})^2" if root is not None else "no square root",
        certified,
    )


def chain_verify() -> ChainCertificate:
    return ChainCertificate((_step_bound(), _step_expand(), _step_relax(), _step_square()))


# --- exclusion ---------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class ExclusionVerdict:
    label: str
    verdict: str
    n: int
    e: Fraction
    lam: Fraction
    ord_t: Fraction
    sigma: SigmaPartition
    s_vert: int
    lhs_upper: Fraction
    strict_upper: Fraction
    rhs_lower: Fraction
    rhs_instance: Fraction
    square_root: Fraction
    square: Fraction
    halved_denominator: bool
    diagnostics: typing.Tuple[str, ...] = ()


def exclude(inst: NFInstance) -> ExclusionVerdict:
    """Instantiate the chain: the left side ≤ 4n²Σ_l + 2λΣ_{i≤L*} r_i < 4n²Σ_l + 4ne,
    while the right side ≥ c²/Σ(r_i/μ_i) ≥ 4n²Σ_l + 4ne with c = Σ r_i ν_i."""
    g = inst.graph
    r = inst.r
    n, e, lam, ord_t = inst.n, inst.e, inst.lam, inst.ord_t
    sigma = sigma_partition(g)
    l_star = min(g.L, g.l_fibre)
    s_vert = sum(r[i] for i in range(1, l_star + 1))
    lhs_upper = 4 * n * n * sigma.sigma_l + 2 * lam * s_vert
    strict_upper = 4 * n * n * sigma.sigma_l + 4 * n * e
    c = sum((r[i] * inst.nu[i - 1] for i in r), Fraction(0))
    weight = sum((Fraction(r[i], g.vertex(i).mu) for i in r), Fraction(0))
    rhs_lower = c * c / weight
    rhs_instance = sum((r[i] * g.vertex(i).mu * inst.nu[i - 1] ** 2 for i in r), Fraction(0))
    root = n * sigma.sigma_u - e
    halved_denominator = all(g.vertex(i).mu == 2 for i in range(1, g.L_sing + 1))

    diagnostics = []
    if e <= 0:
        verdict = VERDICT_NOT_SUPERMAXIMAL
        diagnostics.append(f"e = {e} <= 0: not a maximal singularity")
    elif not is_supermaximal(inst):
        verdict = VERDICT_NOT_SUPERMAXIMAL
        diagnostics.append(f"2ne = {2 * n * e} <= lambda*ord_T = {lam * ord_t}")
    elif lhs_upper < strict_upper <= rhs_lower:
        verdict = VERDICT_INFEASIBLE
    else:
        verdict = VERDICT_FEASIBLE
        diagnostics.append(
            f"chain does not close: {lhs_upper} < {strict_upper} <= {rhs_lower} fails"
        )
    return ExclusionVerdict(
        inst.label,
        verdict,
        n,
        e,
        lam,
        ord_t,
        sigma,
        s_vert,
        lhs_upper,
        strict_upper,
        rhs_lower,
        rhs_instance,
        root,
        root * root,
        halved_denominator,
        tuple(diagnostics),
    )


@dataclasses.dataclass(frozen=True)
class InstanceParams:
    K_max: int = 12
    fibre_dim: int = 3
    n_max: int = 5
    lam_max: int = 5
    denominator: int = 4


def random_instance(params: InstanceParams, seed: int, label: str = "") -> NFInstance:
    """A seeded supermaximal instance: ν_K is raised until e > 0 and
    2ne > λ·ord_T (r_K = 1, so ν_K moves e one for one)."""
    rng = random.Random(seed)
    if params.K_max < 1 or params.n_max < 1 or params.denominator < 1:
        raise DomainError("instance parameters must be positive")
    den = params.denominator
    K = rng.randint(1, params.K_max)
    g = random_graph(GraphParams(K, params.fibre_dim), rng.randrange(2**32))
    n = rng.randint(1, params.n_max)
    lam = Fraction(rng.randint(0, 2 * params.lam_max), 2)
    nu = [Fraction(rng.randint(1, 10 * den), den) for _ in range(K)]
    inst = NFInstance(g, n, tuple(nu), lam, label or f"seed-{seed}")
    e = inst.e
    if e <= 0:
        nu[-1] += -e + Fraction(rng.randint(1, den), den)
        inst = dataclasses.replace(inst, nu=tuple(nu))
        e = inst.e
    deficit = lam * inst.ord_t - 2 * n * e
    if deficit >= 0:
        nu[-1] += deficit / (2 * n) + Fraction(rng.randint(1, den), den)
        inst = dataclasses.replace(inst, nu=tuple(nu))
    return inst
