"""Coefficient spaces of degree-d forms and their singularity-condition systems.

A form f of degree d in x0..xN is a vector of coefficients over the monomial
basis of `CoeffSpace`; every condition built here ("p is a singular point of f",
"p is a singular point of f restricted to a subspace", "a whole plane lies in
Sing f") is a linear functional on that vector. A `ConditionMatrix` stacks them
with provenance, and `exact_rank` measures the codimension they cut out.
"""

from __future__ import annotations

import dataclasses
import functools
import itertools
import math
import random
import typing
from fractions import Fraction

from rlab import exact
from rlab.codim import simplex_points
from rlab.errors import DomainError, GenericityError, SubspaceError

COORD_RANGE = 10
RESAMPLE_LIMIT = 32

Vector = typing.Tuple[Fraction, ...]


def _vector(values) -> Vector:
    return tuple(exact.as_fraction(x) for x in values)


@dataclasses.dataclass(frozen=True, order=True)
class Monomial:
    exponents: typing.Tuple[int, ...]

    def __post_init__(self):
        if any(a < 0 for a in self.exponents):
            raise DomainError(f"negative exponent in {self.exponents}")

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def value_at(self, coords: typing.Sequence[Fraction]) -> Fraction:
        v = Fraction(1)
        for c, a in zip(coords, self.exponents):
            if a:
                v *= c**a
        return v

    def derivative_at(self, j: int, coords: typing.Sequence[Fraction]) -> Fraction:
        a_j = self.exponents[j]
        if a_j == 0:
            return Fraction(0)
        v = Fraction(a_j)
        for i, (c, a) in enumerate(zip(coords, self.exponents)):
            e = a - 1 if i == j else a
            if e:
                v *= c**e
        return v

    def __str__(self):
        parts = [
            f"x{i}" if a == 1 else f"x{i}^{a}"
            for i, a in enumerate(self.exponents)
            if a
        ]
        return "*".join(parts) or "1"


def _exponent_vectors(n_vars: int, d: int) -> typing.Iterator[typing.Tuple[int, ...]]:
    # Sorted index multisets come out in descending lex order of exponents
    # (x0^d first), which for a fixed degree is graded lex with x0 > ... > xN.
    for combo in itertools.combinations_with_replacement(range(n_vars + 1), d):
        exps = [0] * (n_vars + 1)
        for i in combo:
            exps[i] += 1
        yield tuple(exps)


@dataclasses.dataclass(frozen=True)
class CoeffSpace:
    """Forms of `degree` in x0..x{n_vars} (n_vars is N, so N+1 variables)."""

    n_vars: int
    degree: int
    basis: typing.Tuple[Monomial, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @functools.cached_property
    def index(self) -> typing.Dict[Monomial, int]:
        return {m: i for i, m in enumerate(self.basis)}

    def _coords(self, point) -> Vector:
        coords = point.coords if isinstance(point, RationalPoint) else _vector(point)
        if len(coords) != self.n_vars + 1:
            raise DomainError(
                f"point has {len(coords)} coordinates, expected {self.n_vars + 1}"
            )
        if not any(coords):
            raise DomainError("the zero vector is not a projective point")
        return coords

    def evaluation_row(self, point) -> Vector:
        coords = self._coords(point)
        return tuple(m.value_at(coords) for m in self.basis)

    def derivative_row(self, point, j: int) -> Vector:
        coords = self._coords(point)
        return tuple(m.derivative_at(j, coords) for m in self.basis)


@dataclasses.dataclass(frozen=True)
class RationalPoint:
    coords: Vector

    def __post_init__(self):
        lead = next((c for c in self.coords if c != 0), None)
        if lead is None:
            raise DomainError("the zero vector is not a projective point")
        if lead != 1:
            raise DomainError(f"point {self} is not normalized; use RationalPoint.of")

    @classmethod
    def of(cls, coords) -> "RationalPoint":
        v = _vector(coords)
        lead = next((c for c in v if c != 0), None)
        if lead is None:
            raise DomainError("the zero vector is not a projective point")
        return cls(tuple(c / lead for c in v))

    @property
    def n_vars(self) -> int:
        return len(self.coords) - 1

    def __str__(self):
        return "(" + ":".join(str(c) for c in self.coords) + ")"


def _form_value(form: Vector, coords: Vector) -> Fraction:
    return sum((a * x for a, x in zip(form, coords)), Fraction(0))


@dataclasses.dataclass(frozen=True)
class LinearSubspaceSpec:
    """A projective linear subspace, held both ways: implicit equations (`forms`)
    and a parametrization x = Σ t_k·basis[k]."""

    n_vars: int
    forms: typing.Tuple[Vector, ...]
    basis: typing.Tuple[Vector, ...]

    @classmethod
    def from_forms(cls, n_vars: int, forms) -> "LinearSubspaceSpec":
        forms = tuple(_vector(f) for f in forms)
        for f in forms:
            if len(f) != n_vars + 1:
                raise SubspaceError(f"form {f} has the wrong length for N={n_vars}")
        if exact.rank(forms) != len(forms):
            raise SubspaceError("forms are linearly dependent")
        if len(forms) > n_vars:
            raise SubspaceError(f"{len(forms)} forms leave nothing of P^{n_vars}")
        return cls(n_vars, forms, tuple(exact.nullspace(forms, n_vars + 1)))

    @classmethod
    def whole(cls, n_vars: int) -> "LinearSubspaceSpec":
        return cls.from_forms(n_vars, ())

    @property
    def codim(self) -> int:
        return len(self.forms)

    @property
    def dim(self) -> int:
        return self.n_vars - self.codim

    def with_parametrization(self, basis) -> "LinearSubspaceSpec":
        basis = tuple(_vector(v) for v in basis)
        if len(basis) != self.dim + 1:
            raise SubspaceError(
                f"a {self.dim}-dimensional subspace needs {self.dim + 1} basis vectors"
            )
        if not all(self.contains(v) for v in basis):
            raise SubspaceError("parametrization leaves the subspace")
        if exact.rank(basis) != len(basis):
            raise SubspaceError("parametrization vectors are dependent")
        return dataclasses.replace(self, basis=basis)

    def contains(self, coords) -> bool:
        coords = coords.coords if isinstance(coords, RationalPoint) else _vector(coords)
        return all(_form_value(f, coords) == 0 for f in self.forms)

    def point(self, params) -> Vector:
        coords = [Fraction(0)] * (self.n_vars + 1)
        for t, v in zip(params, self.basis):
            if t:
                for i, x in enumerate(v):
                    coords[i] += t * x
        return tuple(coords)

    def parameters_of(self, coords) -> Vector:
        coords = coords.coords if isinstance(coords, RationalPoint) else _vector(coords)
        t = exact.solve(self.basis, coords)
        if t is None:
            raise SubspaceError(f"point {coords} does not lie on the subspace")
        return t


@dataclasses.dataclass(frozen=True)
class ConditionMatrix:
    """Rows are linear functionals on a CoeffSpace, one provenance tag per row.

    Tags: ("derivative", coords, j), ("value", coords),
    ("direction", coords, vector), ("plane", basis, j, t_exponents).
    """

    n_cols: int
    rows: typing.Tuple[Vector, ...] = ()
    provenance: typing.Tuple[tuple, ...] = ()

    def __post_init__(self):
        if len(self.rows) != len(self.provenance):
            raise ValueError("every row needs a provenance tag")
        for row in self.rows:
            if len(row) != self.n_cols:
                raise ValueError(f"row of length {len(row)} in a {self.n_cols}-column matrix")

    def __len__(self):
        return len(self.rows)

    def stack(self, other: "ConditionMatrix") -> "ConditionMatrix":
        if other.n_cols != self.n_cols:
            raise ValueError("cannot stack matrices over different spaces")
        return ConditionMatrix(
            self.n_cols, self.rows + other.rows, self.provenance + other.provenance
        )


@dataclasses.dataclass(frozen=True)
class ThetaFamily:
    """Forms l_0..l_r, Π = {l_0 = ... = l_r = 0} and the subspaces
    Θ(e) = {l_i − λ_{i,e_i}·l_0 = 0} for e in the simplex Δ_{d−3}."""

    forms: typing.Tuple[Vector, ...]
    pi: LinearSubspaceSpec
    members: typing.Tuple[typing.Tuple[typing.Tuple[int, ...], LinearSubspaceSpec], ...]


# --- operations --------------------------------------------------------------


def space_dim(n_vars: int, d: int) -> int:
    if n_vars < 1 or d < 0:
        raise DomainError(f"space_dim needs N >= 1, d >= 0 (got N={n_vars}, d={d})")
    return math.comb(n_vars + d, d)


def enumerate_monomials(n_vars: int, d: int) -> CoeffSpace:
    if n_vars < 1 or d < 1:
        raise DomainError(f"need N >= 1, d >= 1 (got N={n_vars}, d={d})")
    basis = tuple(Monomial(e) for e in _exponent_vectors(n_vars, d))
    return CoeffSpace(n_vars, d, basis)


def singularity_conditions(space: CoeffSpace, points) -> ConditionMatrix:
    rows, tags = [], []
    for p in points:
        coords = space._coords(p)
        for j in range(space.n_vars + 1):
            rows.append(space.derivative_row(coords, j))
            tags.append(("derivative", coords, j))
    return ConditionMatrix(space.dim, tuple(rows), tuple(tags))


def restricted_singularity_conditions(
    space: CoeffSpace, theta: LinearSubspaceSpec, points
) -> ConditionMatrix:
    """p ∈ Sing(f|theta) for each point: the value at p plus the derivatives
    along all parametrization directions but one.

    The skipped direction is the first one p has a nonzero coordinate on; by
    Euler's identity it is spanned by the value and the other directions.
    """
    if theta.n_vars != space.n_vars:
        raise DomainError("subspace and coefficient space live in different P^N")
    rows, tags = [], []
    for p in points:
        coords = space._coords(p)
        if not theta.contains(coords):
            raise SubspaceError(f"point {coords} does not satisfy the subspace equations")
        t = theta.parameters_of(coords)
        k0 = next(k for k, x in enumerate(t) if x != 0)
        rows.append(space.evaluation_row(coords))
        tags.append(("value", coords))
        derivs = [space.derivative_row(coords, j) for j in range(space.n_vars + 1)]
        for k, v in enumerate(theta.basis):
            if k == k0:
                continue
            row = [Fraction(0)] * space.dim
            for vj, drow in zip(v, derivs):
                if vj:
                    for c, x in enumerate(drow):
                        if x:
                            row[c] += vj * x
            rows.append(tuple(row))
            tags.append(("direction", coords, v))
    return ConditionMatrix(space.dim, tuple(rows), tuple(tags))


def _poly_mul(p: dict, q: dict) -> dict:
    out: typing.Dict[tuple, Fraction] = {}
    for ea, ca in p.items():
        for eb, cb in q.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, Fraction(0)) + ca * cb
    return {e: c for e, c in out.items() if c}


def subspace_conditions(space: CoeffSpace, plane: LinearSubspaceSpec) -> ConditionMatrix:
    """plane ⊂ Sing(f): every ∂f/∂x_j vanishes identically on the plane.

    Each ∂f/∂x_j is pulled back through the parametrization to a form in the
    plane's parameters t; each of its coefficients is one row.
    """
    if plane.n_vars != space.n_vars:
        raise DomainError("plane and coefficient space live in different P^N")
    n_params = len(plane.basis)
    unit = tuple([0] * n_params)
    linear = []
    for i in range(space.n_vars + 1):
        form = {}
        for k, v in enumerate(plane.basis):
            if v[i]:
                e = [0] * n_params
                e[k] = 1
                form[tuple(e)] = v[i]
        linear.append(form)
    powers: typing.Dict[typing.Tuple[int, int], dict] = {}

    def power(i: int, a: int) -> dict:
        if (i, a) not in powers:
            powers[(i, a)] = (
                {unit: Fraction(1)} if a == 0 else _poly_mul(power(i, a - 1), linear[i])
            )
        return powers[(i, a)]

    rows: typing.Dict[tuple, typing.List[Fraction]] = {}
    for col, mono in enumerate(space.basis):
        for j in range(space.n_vars + 1):
            a_j = mono.exponents[j]
            if a_j == 0:
                continue
            pulled = {unit: Fraction(a_j)}
            for i, a in enumerate(mono.exponents):
                e = a - 1 if i == j else a
                if e:
                    pulled = _poly_mul(pulled, power(i, e))
            for t_exps, c in pulled.items():
                row = rows.setdefault((j, t_exps), [Fraction(0)] * space.dim)
                row[col] += c
    keys = sorted(rows, key=lambda key: (key[0], tuple(-x for x in key[1])))
    keys = [k for k in keys if any(rows[k])]
    return ConditionMatrix(
        space.dim,
        tuple(tuple(rows[k]) for k in keys),
        tuple(("plane", plane.basis, k[0], k[1]) for k in keys),
    )


def exact_rank(matrix: ConditionMatrix) -> int:
    return exact.rank(matrix.rows)


def random_generic_points(
    theta: LinearSubspaceSpec, m: int, seed: int, avoid=()
) -> typing.List[RationalPoint]:
    """m independent points on theta with coordinates from small integer
    parameters; none of them may be a zero of a form in `avoid`."""
    if m < 0:
        raise DomainError(f"negative point count {m}")
    if m > theta.dim + 1:
        raise GenericityError(
            f"no {m} independent points on a {theta.dim}-dimensional subspace"
        )
    avoid = [_vector(f) for f in avoid]
    rng = random.Random(seed)
    for _ in range(RESAMPLE_LIMIT):
        pts = []
        for _ in range(m):
            params = [rng.randint(-COORD_RANGE, COORD_RANGE) for _ in theta.basis]
            pts.append(theta.point(params))
        if any(not any(p) for p in pts):
            continue
        if any(_form_value(f, p) == 0 for f in avoid for p in pts):
            continue
        if exact.rank(pts) < m:
            continue
        return [RationalPoint.of(p) for p in pts]
    raise GenericityError(
        f"no {m} generic points found on the subspace after {RESAMPLE_LIMIT} samples"
    )


def coordinate_points(n_vars: int, m: int) -> typing.List[RationalPoint]:
    """The standard basis points e_0..e_{m-1}."""
    if not 0 <= m <= n_vars + 1:
        raise DomainError(f"P^{n_vars} has {n_vars + 1} coordinate points, not {m}")
    return [
        RationalPoint(tuple(Fraction(int(i == k)) for i in range(n_vars + 1)))
        for k in range(m)
    ]


def coordinate_line(n_vars: int) -> LinearSubspaceSpec:
    """The line {x_2 = ... = x_N = 0} through e_0 and e_1."""
    if n_vars < 1:
        raise DomainError(f"P^{n_vars} has no lines")
    forms = [tuple(int(i == k) for i in range(n_vars + 1)) for k in range(2, n_vars + 1)]
    return LinearSubspaceSpec.from_forms(n_vars, forms).with_parametrization(
        [p.coords for p in coordinate_points(n_vars, 2)]
    )


def random_line(n_vars: int, seed: int) -> LinearSubspaceSpec:
    """The line through two seeded integer points, parametrized by those points."""
    if n_vars < 1:
        raise DomainError(f"P^{n_vars} has no lines")
    rng = random.Random(seed)
    for _ in range(RESAMPLE_LIMIT):
        pts = [
            tuple(Fraction(rng.randint(-COORD_RANGE, COORD_RANGE)) for _ in range(n_vars + 1))
            for _ in range(2)
        ]
        if exact.rank(pts) == 2:
            forms = exact.nullspace(pts, n_vars + 1)
            return LinearSubspaceSpec.from_forms(n_vars, forms).with_parametrization(pts)
    raise GenericityError(f"no line found after {RESAMPLE_LIMIT} samples")


def euler_identity_check(space: CoeffSpace, point, derivative_rows=None) -> bool:
    """Σ_j p_j·(∂/∂x_j row) == d·(evaluation row), exactly.

    `derivative_rows` replaces the computed rows (negative controls).
    """
    coords = space._coords(point)
    if derivative_rows is None:
        derivative_rows = [space.derivative_row(coords, j) for j in range(space.n_vars + 1)]
    lhs = [Fraction(0)] * space.dim
    for pj, row in zip(coords, derivative_rows):
        if pj:
            for c, x in enumerate(row):
                lhs[c] += pj * x
    rhs = [space.degree * x for x in space.evaluation_row(coords)]
    return lhs == rhs


def theta_family(n_vars: int, r: int, d: int, seed: int) -> ThetaFamily:
    """Random integer forms l_0..l_r and the subspaces Θ(e), e ∈ Δ_{d−3}.

    λ_{i,0} = 0 and λ_{i,j} = j, so Θ(e) = {l_i = e_i·l_0, i = 1..r}.
    """
    if not 1 <= r < n_vars:
        raise DomainError(f"need 1 <= r < N (got r={r}, N={n_vars})")
    if d < 3:
        raise DomainError(f"the Θ family needs d >= 3 (got d={d})")
    rng = random.Random(seed)
    for _ in range(RESAMPLE_LIMIT):
        forms = tuple(
            tuple(Fraction(rng.randint(-COORD_RANGE, COORD_RANGE)) for _ in range(n_vars + 1))
            for _ in range(r + 1)
        )
        if exact.rank(forms) == r + 1:
            break
    else:
        raise GenericityError("no independent forms l_0..l_r after resampling")
    l0 = forms[0]
    members = []
    for e in simplex_points(r, d - 3):
        eqs = [tuple(a - e[i] * b for a, b in zip(forms[i + 1], l0)) for i in range(r)]
        members.append((e, LinearSubspaceSpec.from_forms(n_vars, eqs)))
    pi = LinearSubspaceSpec.from_forms(n_vars, forms)
    return ThetaFamily(forms, pi, tuple(members))
