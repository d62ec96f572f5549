"""Closed-form codimension counts, the master inequality and their sweeps.

Every function is an exact integer formula with its admissible domain checked
up front (DomainError otherwise). `sweep` evaluates whole families over
configured ranges and never drops a failing tuple: a false verdict is an entry
in the violation list.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
import typing

from rlab.errors import DomainError
from rlab.ids import (
    FAMILY_EX32,
    FAMILY_EX33,
    FAMILY_EX34,
    FAMILY_EX35,
    FAMILY_LINE,
    FAMILY_MASTER,
    FAMILY_THEOREM04,
    SWEEP_FAMILIES,
)

Range = typing.Tuple[int, int]


def binom(a: int, b: int) -> int:
    """C(a, b), taken as 0 when a < b or b < 0 (an empty monomial set)."""
    if b < 0 or a < b:
        return 0
    return math.comb(a, b)


def simplex_count(r: int, a: int) -> int:
    """Number of lattice points of Δ_a = {e ∈ Z^r_+ : |e| ≤ a}."""
    if r < 1 or a < 0:
        raise DomainError(f"simplex_count needs r >= 1, a >= 0 (got r={r}, a={a})")
    return math.comb(a + r, r)


def simplex_points(r: int, a: int) -> typing.List[typing.Tuple[int, ...]]:
    """The points of Δ_a in lexicographic order."""
    if r < 1 or a < 0:
        raise DomainError(f"simplex_points needs r >= 1, a >= 0 (got r={r}, a={a})")
    return [e for e in itertools.product(range(a + 1), repeat=r) if sum(e) <= a]


def codim_line(N: int, d: int) -> int:
    if N < 3 or d < 3:
        raise DomainError(f"codim_line needs N >= 3, d >= 3 (got N={N}, d={d})")
    return (d - 2) * N + 3


def codim_line_fixed(N: int, d: int) -> int:
    """The same locus with the line fixed: codim_line plus the 2(N−1) Grassmannian directions."""
    return codim_line(N, d) + 2 * (N - 1)


def codim_ex32(N: int, d: int, q: int) -> int:
    if N < 3 or not 2 <= q <= d - 1:
        raise DomainError(f"ex32 needs N >= 3, 2 <= q <= d-1 (got N={N}, d={d}, q={q})")
    return (d + 1) * (d + 2) // 2 + (N - 3) * (q * d - q * (q - 1) // 2)


def _ex33_quadratic(d: int, q: int) -> int:
    # 5q² − (4d+3)q + d² + 3d + 4 is always even.
    return (5 * q * q - (4 * d + 3) * q + d * d + 3 * d + 4) // 2


def codim_ex33(N: int, d: int, q: int) -> int:
    """Planes (k = 2) whose singular locus has a curve of degree q, so N >= 2."""
    if N < 2 or q < 2 or 2 * q > d:
        raise DomainError(f"ex33 needs N >= 2, 2 <= q, 2q <= d (got N={N}, d={d}, q={q})")
    return _ex33_quadratic(d, q) + (N - 2) * (2 * d + 1)


@dataclasses.dataclass(frozen=True)
class Ex33Minimum:
    d: int
    argmin: int
    value: int
    q2_value: int

    @property
    def q2_is_minimizer(self) -> bool:
        return self.q2_value == self.value


def ex33_minimizer(d: int) -> Ex33Minimum:
    """Exhaustive minimum of the quadratic part over 2 ≤ q ≤ d/2 (smallest q on ties)."""
    if d < 4:
        raise DomainError(f"ex33 has no admissible q for d={d}")
    values = [(_ex33_quadratic(d, q), q) for q in range(2, d // 2 + 1)]
    value, argmin = min(values)
    return Ex33Minimum(d, argmin, value, _ex33_quadratic(d, 2))


def codim_ex34(N: int, d: int, k: int) -> int:
    if k < 1 or k > N or d < 3 or N + 1 < 2 * k:
        raise DomainError(f"ex34 needs 1 <= k <= N, N+1 >= 2k, d >= 3 (got N={N}, d={d}, k={k})")
    return binom(k + d, d) + (N + 1 - 2 * k) * ((d - 1) * k + 1)


def codim_ex35(N: int, d: int, k: int, q: int) -> int:
    if k < 2 or k > N or q < 2 or 2 * q > d or N + 2 < 2 * k:
        raise DomainError(
            f"ex35 needs 2 <= k <= N, N+2 >= 2k, 2 <= q, 2q <= d (got N={N}, d={d}, k={k}, q={q})"
        )
    return (
        binom(k + d, k)
        - binom(k + d - 2 * q, k)
        - binom(k + q, k)
        + (N + 2 - 2 * k) * ((d - 1) * k + 1)
    )


def master_inequality(N: int, d: int, k: int, l: int) -> typing.Tuple[int, int, bool]:
    if not (1 <= l <= k - 2 and k <= N and d >= 3 and N + 1 >= k + l):
        raise DomainError(
            f"master inequality needs 1 <= l <= k-2, k <= N, d >= 3, N+1 >= k+l "
            f"(got N={N}, d={d}, k={k}, l={l})"
        )
    lhs = (k - l + 1) * simplex_count(l, d - 3) + (N + 1 - k - l) * ((d - 1) * k + 1)
    rhs = theorem03_bound(N, d) + (k + 1) * (N - k)
    return lhs, rhs, lhs >= rhs


def prop31_adjust(codim_fixed_P: int, N: int, k: int) -> int:
    """Codimension bound once the k-plane P is allowed to move (may go negative: vacuous)."""
    if codim_fixed_P < 0:
        raise DomainError(f"negative codimension {codim_fixed_P}")
    return codim_fixed_P - (k + 1) * (N - k)


def theorem03_bound(N: int, d: int) -> int:
    if N < 3 or d < 3:
        raise DomainError(f"theorem03_bound needs N >= 3, d >= 3 (got N={N}, d={d})")
    return (d - 2) * N


def theorem04_bound(M: int) -> int:
    if M < 4:
        raise DomainError(f"theorem04_bound needs M >= 4 (got M={M})")
    return min((M - 2) * (M - 1) // 2 + 1, 2 * M * (M - 1))


# --- sweep -------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class SweepConfig:
    """Inclusive ranges; a range with lo > hi is empty."""

    N: Range = (3, 12)
    d: Range = (4, 12)
    k: Range = (1, 12)
    l: Range = (1, 12)
    q: Range = (2, 12)
    M: Range = (4, 10)
    families: typing.Tuple[str, ...] = SWEEP_FAMILIES
    include_d3: bool = False

    def __post_init__(self):
        unknown = [f for f in self.families if f not in SWEEP_FAMILIES]
        if unknown:
            raise DomainError(f"unknown formula families: {', '.join(unknown)}")

    def values(self, name: str) -> range:
        lo, hi = getattr(self, name)
        if name == "d":
            lo = max(lo, 3 if self.include_d3 else 4)
        return range(lo, hi + 1)


@dataclasses.dataclass(frozen=True)
class SweepEntry:
    family: str
    N: int
    d: int
    k: typing.Optional[int]
    l: typing.Optional[int]
    q: typing.Optional[int]
    lhs: int
    rhs: int

    @property
    def verdict(self) -> bool:
        return self.lhs >= self.rhs

    @property
    def adjusted(self) -> typing.Optional[int]:
        """lhs with the moving-plane correction, comparable to (d−2)N."""
        if self.family == FAMILY_THEOREM04:
            return None
        return self.lhs - (self.k + 1) * (self.N - self.k)

    def sort_key(self):
        def key(x):
            return -1 if x is None else x

        return (self.N, self.d, key(self.k), key(self.l), key(self.q), self.family)


@dataclasses.dataclass(frozen=True)
class SweepReport:
    config: SweepConfig
    entries: typing.Tuple[SweepEntry, ...]
    remarks: typing.Tuple[Ex33Minimum, ...]

    @property
    def violations(self) -> typing.List[SweepEntry]:
        return [e for e in self.entries if not e.verdict]

    def minima(self) -> typing.List[dict]:
        """Per (N, d): the smallest adjusted codimension any mechanism achieved."""
        best: typing.Dict[typing.Tuple[int, int], SweepEntry] = {}
        for e in self.entries:
            if e.adjusted is None:
                continue
            cur = best.get((e.N, e.d))
            if cur is None or e.adjusted < cur.adjusted:
                best[(e.N, e.d)] = e
        out = []
        for (N, d), e in sorted(best.items()):
            bound = theorem03_bound(N, d)
            out.append(
                {
                    "N": N,
                    "d": d,
                    "min_adjusted": e.adjusted,
                    "family": e.family,
                    "theorem03": bound,
                    "conjectured": bound + 3,
                    "gap": e.adjusted - bound,
                }
            )
        return out


def _plane_rhs(N: int, d: int, k: int) -> int:
    return theorem03_bound(N, d) + (k + 1) * (N - k)


def sweep_chunk(task: typing.Tuple[SweepConfig, int]) -> typing.List[SweepEntry]:
    """All entries with ambient dimension N (one unit of parallel work)."""
    config, N = task
    if N < 3:
        return []
    fam = set(config.families)
    ks, ls, qs = config.values("k"), config.values("l"), config.values("q")
    out = []
    for d in config.values("d"):

        def add(family, k, l, q, lhs, rhs=None):
            if rhs is None:
                rhs = _plane_rhs(N, d, k)
            out.append(SweepEntry(family, N, d, k, l, q, lhs, rhs))

        if FAMILY_LINE in fam and 1 in ks and 1 in ls:
            add(FAMILY_LINE, 1, 1, None, codim_line_fixed(N, d))
        if FAMILY_EX32 in fam and 2 in ks and 2 in ls:
            for q in qs:
                if 2 <= q <= d - 1:
                    add(FAMILY_EX32, 2, 2, q, codim_ex32(N, d, q))
        if FAMILY_EX33 in fam and 2 in ks and 1 in ls:
            for q in qs:
                if 2 <= q and 2 * q <= d:
                    add(FAMILY_EX33, 2, 1, q, codim_ex33(N, d, q))
        for k in ks:
            if k > N:
                break
            if FAMILY_EX34 in fam and k >= 3 and k in ls and N + 1 >= 2 * k:
                add(FAMILY_EX34, k, k, None, codim_ex34(N, d, k))
            if FAMILY_EX35 in fam and k >= 3 and k - 1 in ls and N + 2 >= 2 * k:
                for q in qs:
                    if 2 <= q and 2 * q <= d:
                        add(FAMILY_EX35, k, k - 1, q, codim_ex35(N, d, k, q))
            if FAMILY_MASTER in fam:
                for l in ls:
                    if 1 <= l <= k - 2 and N + 1 >= k + l:
                        lhs, rhs, _ = master_inequality(N, d, k, l)
                        add(FAMILY_MASTER, k, l, None, lhs, rhs)
    return out


def theorem04_entries(config: SweepConfig) -> typing.List[SweepEntry]:
    """Rows N = M, d = 2M: (d−2)N = 2M(M−1) against theorem04_bound(M)."""
    if FAMILY_THEOREM04 not in config.families:
        return []
    return [
        SweepEntry(
            FAMILY_THEOREM04,
            M,
            2 * M,
            None,
            None,
            None,
            theorem03_bound(M, 2 * M),
            theorem04_bound(M),
        )
        for M in config.values("M")
        if M >= 4
    ]


def sweep(config: SweepConfig, mapper=map) -> SweepReport:
    """Evaluate every admissible tuple; `mapper` may be a parallel map.

    The merge sorts, so the report does not depend on how chunks were scheduled.
    """
    chunks = mapper(sweep_chunk, [(config, N) for N in config.values("N")])
    entries = [e for chunk in chunks for e in chunk] + theorem04_entries(config)
    entries.sort(key=SweepEntry.sort_key)
    remarks = []
    if FAMILY_EX33 in config.families and config.values("N"):
        for d in config.values("d"):
            if d >= 4:
                m = ex33_minimizer(d)
                if not m.q2_is_minimizer:
                    remarks.append(m)
    return SweepReport(config, tuple(entries), tuple(remarks))
