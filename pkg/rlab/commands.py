"""The subcommands: rank-check, codim-sweep, graph-check and exclude.

Each `cmd_*` takes the App struct, resolves its settings section, fans the
work out through a `Job`, merges the results in a fixed sort order and returns
a finished report dict. Worker functions (`*_task`) are module level so they
can cross into a process pool; they take one task and return a plain dict.
"""

from __future__ import annotations

import dataclasses
import os
import random
import typing
from fractions import Fraction

from rlab import codim, excluder, polyspace, report, respath
from rlab.config import derive_seed, settings
from rlab.errors import ConfigError, DomainError
from rlab.ids import (
    CMD_CODIM_SWEEP,
    CMD_EXCLUDE,
    CMD_GRAPH_CHECK,
    CMD_RANK_CHECK,
    ID_EXCLUDE_JOB,
    ID_GRAPH_JOB,
    ID_RANK_JOB,
    ID_SWEEP_JOB,
    MODE_CANONICAL,
    MODE_FIBRE,
    MODE_SIGMA,
    SUITE_LEMMA31,
    SUITE_LEMMA31_BASIS,
    SUITE_LINE,
    SUITE_PROP32,
    VERDICT_INFEASIBLE,
    VERDICT_NOT_SUPERMAXIMAL,
)
from rlab.jobs import Job
from rlab.schema import NFInstanceDoc, load_graph, load_instance

EXAMPLE_INSTANCE = os.path.join(os.path.dirname(__file__), "data", "k2_chain.json")


def _span(r) -> range:
    lo, hi = r
    return range(lo, hi + 1)


def _require_seed(s, what: str) -> int:
    if s.seed is None:
        raise ConfigError(f"{what} is randomized: pass --seed or set a seed in the config")
    if not 0 <= s.seed < 2**64:
        raise ConfigError(f"seed {s.seed} is not an unsigned 64-bit integer")
    return s.seed


def _echo(s) -> dict:
    return s.model_dump(mode="json")


def _job_violations(job: Job) -> typing.List[dict]:
    return [
        {"task": repr(task), "problem": f"worker failed: {message}"}
        for task, message in job.errors
    ]


# --- rank-check --------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class RankTask:
    suite: str
    N: int
    d: int
    r: typing.Optional[int]
    m: typing.Optional[int]
    sample: int
    seed: typing.Optional[int]
    rows: int

    def cells(self) -> int:
        return self.rows * polyspace.space_dim(self.N, self.d)

    def sort_key(self):
        return (self.N, self.d, self.r or 0, self.m or 0, self.sample)


def rank_tasks(s) -> typing.List[RankTask]:
    seeded = s.suite != SUITE_LEMMA31_BASIS
    seed = _require_seed(s, f"suite {s.suite}") if seeded else None
    tasks = []
    for N in _span(s.N):
        if N < 1:
            continue
        for d in _span(s.d):
            if d < 1:
                continue
            if s.suite == SUITE_LINE:
                for sample in range(s.lines + 1):
                    sub = derive_seed(seed, s.suite, N, d, sample) if sample else None
                    tasks.append(RankTask(s.suite, N, d, None, None, sample, sub, (N + 1) * d))
                continue
            if s.suite == SUITE_PROP32:
                if d < 3:
                    continue
                for r in _span(s.r):
                    if not 1 <= r < N:
                        continue
                    members = codim.simplex_count(r, d - 3)
                    for m in _span(s.m):
                        if not 1 <= m <= N - r + 1:
                            continue
                        for sample in range(s.seeds):
                            sub = derive_seed(seed, s.suite, N, d, r, m, sample)
                            rows = members * m * (N - r + 1)
                            tasks.append(RankTask(s.suite, N, d, r, m, sample, sub, rows))
                continue
            for m in _span(s.m):
                if not 0 <= m <= N + 1:
                    continue
                if s.suite == SUITE_LEMMA31_BASIS:
                    tasks.append(RankTask(s.suite, N, d, None, m, 0, None, m * (N + 1)))
                    continue
                for sample in range(s.seeds):
                    sub = derive_seed(seed, s.suite, N, d, m, sample)
                    tasks.append(RankTask(s.suite, N, d, None, m, sample, sub, m * (N + 1)))
    return tasks


def rank_task(task: RankTask) -> dict:
    N, d, m = task.N, task.d, task.m
    space = polyspace.enumerate_monomials(N, d)
    euler = None
    if task.suite in (SUITE_LEMMA31, SUITE_LEMMA31_BASIS):
        if task.suite == SUITE_LEMMA31:
            points = polyspace.random_generic_points(
                polyspace.LinearSubspaceSpec.whole(N), m, task.seed
            )
        else:
            points = polyspace.coordinate_points(N, m)
        matrix = polyspace.singularity_conditions(space, points)
        euler = all(polyspace.euler_identity_check(space, p) for p in points)
        expected = m * (N + 1)
    elif task.suite == SUITE_LINE:
        if task.sample == 0:
            line = polyspace.coordinate_line(N)
        else:
            line = polyspace.random_line(N, task.seed)
        matrix = polyspace.subspace_conditions(space, line)
        expected = d * N + 1
    else:
        family = polyspace.theta_family(N, task.r, d, task.seed)
        matrix = polyspace.ConditionMatrix(space.dim)
        for idx, (_, theta) in enumerate(family.members):
            points = polyspace.random_generic_points(
                theta, m, derive_seed(task.seed, idx), avoid=[family.forms[0]]
            )
            matrix = matrix.stack(polyspace.restricted_singularity_conditions(space, theta, points))
        expected = m * (N - task.r + 1) * len(family.members)
    rank = polyspace.exact_rank(matrix)
    return {
        "suite": task.suite,
        "N": N,
        "d": d,
        "r": task.r,
        "m": m,
        "sample": task.sample,
        "seed": task.seed,
        "rows": len(matrix),
        "cols": space.dim,
        "expected": expected,
        "rank": rank,
        "euler": euler,
        "status": "ok" if rank == expected else "mismatch",
    }


def cmd_rank_check(app) -> dict:
    s = settings(app.config, "rank_check", seed=app.seed)
    cap = settings(app.config, "limits").max_cells
    tasks = rank_tasks(s)
    if tasks:
        big = max(tasks, key=RankTask.cells)
        if big.cells() > cap:
            raise ConfigError(
                f"largest condition matrix would be {big.rows} x "
                f"{polyspace.space_dim(big.N, big.d)} = {big.cells()} cells "
                f"(N={big.N}, d={big.d}), over limits.max_cells = {cap}"
            )
    app.log.info(f"rank-check {s.suite}: {len(tasks)} matrices")
    job = Job(app, ID_RANK_JOB, rank_task)
    results = job.map(sorted(tasks, key=RankTask.sort_key))
    entries = [e for e in results if e is not None]

    out = report.new_report(CMD_RANK_CHECK, _echo(s))
    out["entries"] = entries
    problems = []
    for e in entries:
        if e["status"] != "ok":
            problems.append(
                {
                    **{k: e[k] for k in ("suite", "N", "d", "r", "m", "seed")},
                    "problem": f"rank {e['rank']} != expected {e['expected']}",
                }
            )
        if e["euler"] is False:
            problems.append(
                {
                    **{k: e[k] for k in ("suite", "N", "d", "m", "seed")},
                    "problem": "Euler identity fails on the derivative rows",
                }
            )
    out["violations"] = report.annotate(app, CMD_RANK_CHECK, problems + _job_violations(job))
    known = {
        _rank_key(v) for v in out["violations"] if v["expected"] and "rank" in v["problem"]
    }
    for e in entries:
        if e["status"] == "mismatch" and _rank_key(e) in known:
            e["status"] = "expected"
    return report.finish(out)


def _rank_key(row: dict) -> tuple:
    return tuple(row.get(k) for k in ("suite", "N", "d", "r", "m", "seed"))


# --- codim-sweep -------------------------------------------------------------


def cmd_codim_sweep(app) -> dict:
    s = settings(app.config, "codim_sweep")
    try:
        config = codim.SweepConfig(
            N=tuple(s.N),
            d=tuple(s.d),
            k=tuple(s.k),
            l=tuple(s.l),
            q=tuple(s.q),
            M=tuple(s.M),
            families=tuple(s.families),
            include_d3=s.include_d3,
        )
    except DomainError as e:
        raise ConfigError(f"codim_sweep: {e}") from None
    job = Job(app, ID_SWEEP_JOB, codim.sweep_chunk)

    def mapper(fn, tasks):
        return [chunk or [] for chunk in job.map(tasks)]

    result = codim.sweep(config, mapper=mapper)
    app.log.info(f"codim-sweep: {len(result.entries)} tuples")
    out = report.new_report(CMD_CODIM_SWEEP, _echo(s))
    out["entries"] = [
        {
            "family": e.family,
            "N": e.N,
            "d": e.d,
            "k": e.k,
            "l": e.l,
            "q": e.q,
            "lhs": e.lhs,
            "rhs": e.rhs,
            "verdict": e.verdict,
            "adjusted": e.adjusted,
        }
        for e in result.entries
    ]
    problems = [
        {
            "family": e.family,
            "N": e.N,
            "d": e.d,
            "k": e.k,
            "l": e.l,
            "q": e.q,
            "problem": f"lhs {e.lhs} < rhs {e.rhs}",
        }
        for e in result.violations
    ]
    out["violations"] = report.annotate(app, CMD_CODIM_SWEEP, problems + _job_violations(job))
    out["minima"] = result.minima()
    out["remarks"] = [
        {
            "d": m.d,
            "argmin": m.argmin,
            "value": m.value,
            "q2_value": m.q2_value,
            "note": "q = 2 does not minimize the ex33 quadratic",
        }
        for m in result.remarks
    ]
    return report.finish(out)


# --- graph-check -------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class GraphTask:
    index: int
    seed: typing.Optional[int]
    label: str
    graph: typing.Optional[respath.ResolutionGraph]
    K: typing.Tuple[int, int]
    fibre_dim: typing.Tuple[int, int]
    oracle_k_max: int
    nu_trials: int


def check_graph(g: respath.ResolutionGraph, oracle_k_max: int, nu_trials: int, rng) -> dict:
    r = respath.r_coeffs(g)
    pullback = all(respath.forward_pullback(g, i)[g.K] == r[i] for i in r)
    compatible = respath.compatibility_check(g, {i: Fraction(x) for i, x in r.items()})
    monotone = None
    if respath.is_chain_connected(g):
        monotone = all(r[i] >= r[i + 1] for i in range(1, g.K))
    oracle = None
    if g.K <= oracle_k_max:
        # random nu vectors need a seed; without one only the fixed modes run
        trials = [
            [Fraction(rng.randint(1, 100), rng.randint(1, 10)) for _ in range(g.K)]
            for _ in range(nu_trials if rng is not None else 0)
        ]
        checks = [(MODE_SIGMA, nu) for nu in trials] + [(MODE_CANONICAL, None)]
        if g.l_fibre == 0 or all(g.vertex(i).gamma for i in range(1, g.l_fibre + 1)):
            checks.append((MODE_FIBRE, None))
        oracle = all(
            respath.stage_simulation(g, respath.increments_for(g, mode, nu))
            == respath.ord_linear_functionals(g, nu, mode)
            for mode, nu in checks
        )
    return {
        "K": g.K,
        "L": g.L,
        "L_sing": g.L_sing,
        "fibre_dim": g.fibre_dim,
        "r": [r[i] for i in sorted(r)],
        "pullback": pullback,
        "bounds": respath.path_bounds_hold(g),
        "compatible": compatible,
        "monotone": monotone,
        "oracle": oracle,
    }


def graph_task(task: GraphTask) -> dict:
    g = task.graph
    rng = None
    if task.seed is not None:
        rng = random.Random(derive_seed(task.seed, "nu", task.index))
    if g is None:
        pick = random.Random(task.seed)
        K = pick.randint(*task.K)
        M = pick.randint(*task.fibre_dim)
        g = respath.random_graph(respath.GraphParams(K, M), pick.randrange(2**32))
    entry = {"index": task.index, "seed": task.seed, "label": task.label}
    entry.update(check_graph(g, task.oracle_k_max, task.nu_trials, rng))
    return entry


CHECKS = ("pullback", "bounds", "compatible", "monotone", "oracle")


def cmd_graph_check(app, paths: typing.Sequence[str] = ()) -> dict:
    s = settings(app.config, "graph_check", seed=app.seed)
    out = report.new_report(CMD_GRAPH_CHECK, _echo(s))
    tasks, invalid = [], []
    if paths:
        seed = _require_seed(s, "nu trials") if s.seed is not None else None
        for index, path in enumerate(paths):
            g = load_graph(path).to_graph()
            violations = respath.validate_graph(g)
            if violations:
                invalid.append({"index": index, "label": path, "K": g.K, "violations": violations})
                continue
            tasks.append(
                GraphTask(index, seed, path, g, s.K, s.fibre_dim, s.oracle_k_max, s.nu_trials)
            )
    else:
        seed = _require_seed(s, "the random graph suite")
        if s.K[0] < 1 or s.fibre_dim[0] < 2:
            raise ConfigError("graph_check: need K >= 1 and fibre_dim >= 2")
        tasks = [
            GraphTask(
                i,
                derive_seed(seed, CMD_GRAPH_CHECK, i),
                "",
                None,
                tuple(s.K),
                tuple(s.fibre_dim),
                s.oracle_k_max,
                s.nu_trials,
            )
            for i in range(s.count)
        ]
    job = Job(app, ID_GRAPH_JOB, graph_task)
    entries = [e for e in job.map(tasks) if e is not None] + invalid
    entries.sort(key=lambda e: e["index"])
    out["entries"] = entries
    problems = []
    for e in entries:
        if "violations" in e:
            problems.append(
                {"index": e["index"], "label": e["label"], "problem": "; ".join(e["violations"])}
            )
            continue
        failed = [c for c in CHECKS if e[c] is False]
        if failed:
            problems.append(
                {
                    "index": e["index"],
                    "seed": e["seed"],
                    "K": e["K"],
                    "problem": "failed: " + ", ".join(failed),
                }
            )
    out["violations"] = report.annotate(app, CMD_GRAPH_CHECK, problems + _job_violations(job))
    return report.finish(out)


# --- exclude -----------------------------------------------------------------


def exclusion_entry(v: excluder.ExclusionVerdict) -> dict:
    return {
        "label": v.label,
        "n": v.n,
        "e": v.e,
        "lambda": v.lam,
        "ord_t": v.ord_t,
        "sigma_l": v.sigma.sigma_l,
        "sigma_u": v.sigma.sigma_u,
        "sigma_sing": v.sigma.sigma_sing,
        "sigma_ns": v.sigma.sigma_nonsing,
        "s_vert": v.s_vert,
        "lhs_upper": v.lhs_upper,
        "strict_upper": v.strict_upper,
        "rhs_lower": v.rhs_lower,
        "rhs_instance": v.rhs_instance,
        "square_root": v.square_root,
        "square": v.square,
        "halved_denominator": v.halved_denominator,
        "verdict": v.verdict,
        "diagnostics": list(v.diagnostics),
    }


def _counting(inst: excluder.NFInstance, doc: NFInstanceDoc, entry: dict) -> typing.List[str]:
    cross = {(c.i, c.j): c.value for c in doc.cross}
    try:
        data = excluder.balance_multiplicities(inst, doc.m, cross)
        lhs, rhs = excluder.inequality_11_evaluate(inst, doc.m)
    except DomainError as e:
        return [str(e)]
    entry["counting"] = {"d": list(data.d), "lhs": lhs, "rhs": rhs, "holds": lhs >= rhs}
    return excluder.counting_system_check(inst, data)


@dataclasses.dataclass(frozen=True)
class ExcludeTask:
    index: int
    seed: int
    params: excluder.InstanceParams


def exclude_task(task: ExcludeTask) -> dict:
    inst = excluder.random_instance(task.params, task.seed, label=f"random-{task.index}")
    entry = exclusion_entry(excluder.exclude(inst))
    entry.update(index=task.index, seed=task.seed, K=inst.graph.K)
    entry["bounds"] = respath.path_bounds_hold(inst.graph)
    return entry


def _certificate_block() -> typing.Tuple[list, bool]:
    cert = excluder.chain_verify()
    block = [
        {
            "step": s.name,
            "claim": s.claim,
            "kind": s.kind,
            "difference": s.difference,
            "certificate": s.certificate,
            "status": s.status,
        }
        for s in cert.steps
    ]
    return block, cert.certified


def cmd_exclude(app, paths: typing.Sequence[str] = (), example: bool = False) -> dict:
    s = settings(app.config, "exclude", seed=app.seed)
    echo = _echo(s)
    problems, entries, pigeonhole = [], [], []
    if example:
        paths = [EXAMPLE_INSTANCE]
    if paths:
        echo = {"instances": [os.path.basename(p) if example else p for p in paths]}
        for path in paths:
            inst, doc = load_instance(path)
            if isinstance(inst, excluder.PigeonholeInstance):
                res = excluder.find_supermaximal(inst)
                pigeonhole.append(report.jsonable(res))
                if res.found is None and res.aggregate_lhs > res.aggregate_rhs:
                    problems.append(
                        {"label": res.label, "problem": "aggregate holds, no term does"}
                    )
                continue
            entry = exclusion_entry(excluder.exclude(inst))
            if doc.m is not None:
                for msg in _counting(inst, doc, entry):
                    problems.append({"label": inst.label, "problem": f"counting system: {msg}"})
            entries.append(entry)
    else:
        seed = _require_seed(s, "the random exclusion suite")
        params = excluder.InstanceParams(
            s.K_max, s.fibre_dim, s.n_max, s.lam_max, s.denominator
        )
        tasks = [
            ExcludeTask(i, derive_seed(seed, CMD_EXCLUDE, i), params) for i in range(s.count)
        ]
        job = Job(app, ID_EXCLUDE_JOB, exclude_task)
        entries = [e for e in job.map(tasks) if e is not None]
        problems.extend(_job_violations(job))
        for e in entries:
            if not e["bounds"]:
                problems.append({"label": e["label"], "problem": "path bounds fail"})
            if e["verdict"] == VERDICT_NOT_SUPERMAXIMAL:
                problems.append(
                    {"label": e["label"], "problem": "generator missed supermaximality"}
                )

    for e in entries:
        if e["verdict"] not in (VERDICT_INFEASIBLE, VERDICT_NOT_SUPERMAXIMAL):
            problems.append(
                {"label": e["label"], "problem": "supermaximal instance not excluded"}
            )
    certificate, certified = _certificate_block()
    if not certified:
        problems.append({"label": "chain", "problem": "symbolic chain not certified"})

    out = report.new_report(CMD_EXCLUDE, echo)
    out["entries"] = entries
    out["violations"] = report.annotate(app, CMD_EXCLUDE, problems)
    out["certificate"] = certificate
    if pigeonhole:
        out["pigeonhole"] = pigeonhole
    return report.finish(out)


COMMANDS = {
    CMD_RANK_CHECK: cmd_rank_check,
    CMD_CODIM_SWEEP: cmd_codim_sweep,
    CMD_GRAPH_CHECK: cmd_graph_check,
    CMD_EXCLUDE: cmd_exclude,
}
