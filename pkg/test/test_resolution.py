"""Resolution graphs and the exclusion chain, against independent oracles.

Path counts are compared with explicit path enumeration, r-coefficients with
stage-by-stage pullbacks, the quadratic minimum with a sympy Lagrange solve.
"""

import itertools
import os
import sys
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

# Make the repo root importable regardless of how pytest is invoked.
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from rlab import excluder, respath  # noqa: E402
from rlab.errors import DomainError, GraphError  # noqa: E402
from rlab.ids import MODE_CANONICAL, MODE_FIBRE, MODE_SIGMA  # noqa: E402
from rlab.multipoly import symbols  # noqa: E402
from rlab.respath import Edge, ResolutionGraph, Vertex  # noqa: E402

LOWER = Vertex(0, 1, 3, 1)


def upper(M=3, gamma=1):
    return Vertex(M - 1, 1, 2, gamma)


def chain(K, M=3, l_fibre=0):
    """K-1 smooth lower vertices, one upper vertex, edges i+1 -> i."""
    vertices = [Vertex(0, 1, 3, 1)] * (K - 1) + [upper(M)]
    return ResolutionGraph(M, tuple(vertices), tuple(Edge(i + 1, i) for i in range(1, K)), l_fibre)


def k2_graph():
    return ResolutionGraph(2, (Vertex(0, 1, 3, 1), Vertex(1, 1, 2, 1)), (Edge(2, 1),), 2)


def k2_instance(n=2, nu=(5, 3), lam=1):
    return excluder.NFInstance(k2_graph(), n, tuple(Fraction(x) for x in nu), Fraction(lam), "k2")


def enumerate_paths(g, src, dst):
    """All paths src -> dst as lists of edges, by depth-first search."""
    if src == dst:
        return [[]]
    out = []
    for e in g.out_edges[src]:
        if e.dst >= dst:
            out.extend([e] + rest for rest in enumerate_paths(g, e.dst, dst))
    return out


def random_graphs(count, K_max=8):
    for seed in range(count):
        K = 1 + seed % K_max
        M = 3 + seed % 3
        yield respath.random_graph(respath.GraphParams(K, M), seed)


# --- validation ---------------------------------------------------------------


def test_small_chain_is_valid():
    assert respath.validate_graph(chain(3)) == []
    assert respath.validate_graph(ResolutionGraph(3, (upper(),))) == []


def test_weight2_edge_into_a_smooth_stage():
    g = ResolutionGraph(3, (LOWER, upper()), (Edge(2, 1, 2),))
    assert any("weight-2 edge into non-singular stage" in v for v in respath.validate_graph(g))


def test_double_point_on_the_upper_levels():
    g = ResolutionGraph(3, (Vertex(1, 2, 4), upper()), (Edge(2, 1),))
    assert any("multiplicity 2 at level 1" in v for v in respath.validate_graph(g))


def test_edges_must_point_backwards_and_reach_everything():
    backwards = ResolutionGraph(3, (LOWER, upper()), (Edge(1, 2),))
    assert any("later to an earlier" in v for v in respath.validate_graph(backwards))
    orphan = ResolutionGraph(3, (LOWER, LOWER, upper()), (Edge(3, 2),))
    assert respath.validate_graph(orphan) == ["vertex 1: not reachable from vertex 3"]


def test_invalid_graph_raises_with_every_violation():
    g = ResolutionGraph(3, (Vertex(0, 1, 2), upper()), (Edge(2, 1, 2),))
    with pytest.raises(GraphError) as exc:
        respath.r_coeffs(g)
    assert len(exc.value.violations) >= 2


# --- paths and r-coefficients ---------------------------------------------------------


def test_chain_path_counts():
    assert respath.path_counts(chain(5)) == {i: 1 for i in range(1, 6)}


def test_diamond_has_two_paths():
    g = ResolutionGraph(
        3, (LOWER, LOWER, LOWER, upper()), (Edge(2, 1), Edge(3, 1), Edge(4, 2), Edge(4, 3))
    )
    assert respath.path_counts(g) == {1: 2, 2: 1, 3: 1, 4: 1}


def test_path_counts_match_enumeration():
    for g in random_graphs(60):
        counts = respath.path_counts(g)
        for i in range(1, g.K + 1):
            assert counts[i] == len(enumerate_paths(g, g.K, i))


def test_r_coefficients_are_weighted_path_counts():
    for g in random_graphs(60):
        r = respath.r_coeffs(g)
        for i in range(1, g.K + 1):
            weighted = sum(
                Fraction(1) * _product(e.weight for e in path)
                for path in enumerate_paths(g, g.K, i)
            )
            assert r[i] == weighted


def _product(xs):
    out = 1
    for x in xs:
        out *= x
    return out


def test_unit_weights_give_path_counts():
    g = respath.random_graph(respath.GraphParams(10, 3, n_lower=6, l_sing=0, density=0.6), 7)
    assert respath.r_coeffs(g) == respath.path_counts(g)


def test_weight2_chain():
    g = ResolutionGraph(3, (Vertex(0, 2, 4), upper()), (Edge(2, 1, 2),))
    assert respath.r_coeffs(g) == {1: 2, 2: 1}
    assert respath.path_counts(g) == {1: 1, 2: 1}
    assert respath.path_bounds_hold(g)


def test_graph_with_singular_stages_respects_the_weight_rule():
    g = respath.random_graph(respath.GraphParams(10, 4, n_lower=6, l_sing=3, density=0.5), 3)
    assert g.L_sing == 3
    assert respath.validate_graph(g) == []
    assert all(e.src > 3 >= e.dst for e in g.edges if e.weight == 2)


def test_forward_pullback_agrees_with_r():
    for g in random_graphs(40):
        r = respath.r_coeffs(g)
        for i in range(1, g.K + 1):
            assert respath.forward_pullback(g, i)[g.K] == r[i]
    assert respath.forward_pullback(chain(3), 3).coeffs == {3: 1}
    assert respath.forward_pullback(chain(4), 1)[4] == 1


def test_path_bounds_on_random_graphs():
    assert all(respath.path_bounds_hold(g) for g in random_graphs(80))


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 40), st.integers(3, 5), st.integers(0, 2**32 - 1))
def test_large_random_graphs_match_the_pullback(K, M, seed):
    g = respath.random_graph(respath.GraphParams(K, M), seed)
    r = respath.r_coeffs(g)
    assert all(respath.forward_pullback(g, i)[g.K] == r[i] for i in r)
    assert respath.path_bounds_hold(g)
    assert respath.compatibility_check(g, {i: Fraction(x) for i, x in r.items()})


def test_r_non_increasing_on_chain_connected_graphs():
    for seed in range(40):
        g = respath.random_graph(respath.GraphParams(8, 3, chain=True), seed)
        assert respath.is_chain_connected(g)
        r = respath.r_coeffs(g)
        assert all(r[i] >= r[i + 1] for i in range(1, g.K))


# --- compatibility and linear functionals -----------------------------------------------


def test_compatibility():
    g = ResolutionGraph(
        3, (LOWER, LOWER, LOWER, upper()), (Edge(2, 1), Edge(3, 1), Edge(3, 2), Edge(4, 3))
    )
    r = respath.r_coeffs(g)
    assert respath.compatibility_check(g, {i: Fraction(x) for i, x in r.items()})
    assert not respath.compatibility_check(g, {i: Fraction(1) for i in range(1, 5)})
    assert respath.compatibility_check(g, {i: Fraction(0) for i in range(1, 5)})


def test_stage_simulation_on_the_k2_chain():
    g = k2_graph()
    assert respath.stage_simulation(g, [5, 3]) == 8
    assert respath.ord_linear_functionals(g, [5, 3], MODE_SIGMA) == 8
    assert respath.ord_linear_functionals(g, mode=MODE_CANONICAL) == 3
    assert respath.ord_linear_functionals(g, mode=MODE_FIBRE) == 2


def test_fibre_order_counts_vertices_when_everything_is_one():
    g = chain(6, l_fibre=6)
    assert respath.ord_linear_functionals(g, mode=MODE_FIBRE) == 6


@settings(max_examples=50, deadline=None)
@given(
    st.integers(0, 2**32 - 1),
    st.lists(st.fractions(1, 50, max_denominator=9), min_size=8, max_size=8),
)
def test_linear_functionals_match_the_simulation(seed, nu):
    g = respath.random_graph(respath.GraphParams(1 + seed % 8, 3), seed)
    nu = nu[: g.K]
    for mode, values in ((MODE_SIGMA, nu), (MODE_CANONICAL, None)):
        inc = respath.increments_for(g, mode, values)
        assert respath.stage_simulation(g, inc) == respath.ord_linear_functionals(g, values, mode)


def test_sigma_partition():
    p = respath.sigma_partition(chain(3))
    assert (p.sigma_sing, p.sigma_nonsing) == (0, p.sigma_l + p.sigma_u)
    g = ResolutionGraph(4, (Vertex(0, 2, 4), Vertex(0, 2, 4), upper(4)), (Edge(2, 1), Edge(3, 2)))
    p = respath.sigma_partition(g)
    assert g.L_sing == g.L == 2
    assert p.sigma_sing == p.sigma_l
    for g in random_graphs(30):
        p = respath.sigma_partition(g)
        total = sum(respath.r_coeffs(g).values())
        assert p.sigma_sing + p.sigma_nonsing == p.sigma_l + p.sigma_u == total


def test_random_graph_domain_errors():
    with pytest.raises(DomainError):
        respath.random_graph(respath.GraphParams(3, 2, n_lower=1, l_sing=1), 0)
    with pytest.raises(DomainError):
        respath.random_graph(respath.GraphParams(3, 3, n_lower=3), 0)


def test_single_vertex_graph():
    g = respath.random_graph(respath.GraphParams(1, 3), 5)
    assert g.K == 1 and g.edges == ()
    assert respath.r_coeffs(g) == {1: 1}


# --- Noether-Fano arithmetic ----------------------------------------------------------------


def test_epsilon_on_the_k2_chain():
    assert excluder.epsilon(k2_instance()) == 2
    assert excluder.epsilon(k2_instance(n=3)) == -1
    # ν = n·δ is the boundary
    assert excluder.epsilon(k2_instance(n=2, nu=(4, 2))) == 0


def test_supermaximality():
    assert excluder.is_supermaximal(k2_instance())
    assert excluder.is_supermaximal(k2_instance(lam=0))
    assert not excluder.is_supermaximal(k2_instance(n=3))
    assert not excluder.is_supermaximal(k2_instance(n=3, lam=0))
    assert not excluder.is_supermaximal(k2_instance(lam=8))


def test_instance_validation():
    with pytest.raises(DomainError):
        k2_instance(nu=(5,))
    with pytest.raises(DomainError):
        k2_instance(nu=(5, 0))
    with pytest.raises(DomainError):
        k2_instance(lam=-1)


# --- pigeonhole -------------------------------------------------------------------------------


def _pigeon(*sings, n=1, lam=1, y_c=3):
    return excluder.PigeonholeInstance(
        n,
        Fraction(y_c),
        {"T": Fraction(lam)},
        tuple(
            excluder.Singularity(label, Fraction(eps), Fraction(1), Fraction(t), "T")
            for label, eps, t in sings
        ),
    )


def test_pigeonhole_returns_the_supermaximal_term():
    res = excluder.find_supermaximal(_pigeon(("E1", 1, 4), ("E2", 3, 2)))
    assert res.found == "E2"
    assert (res.aggregate_lhs, res.aggregate_rhs) == (8, 6)


def test_pigeonhole_single_singularity():
    assert excluder.find_supermaximal(_pigeon(("E", 2, 1))).found == "E"


def test_pigeonhole_aggregate_fails():
    res = excluder.find_supermaximal(_pigeon(("E1", 1, 4), ("E2", 1, 4)))
    assert res.found is None
    assert any("aggregate fails" in d for d in res.diagnostics)


def test_pigeonhole_unknown_group():
    p = excluder.PigeonholeInstance(
        1, Fraction(1), {}, (excluder.Singularity("E", Fraction(1), Fraction(1), Fraction(1), "X"),)
    )
    with pytest.raises(DomainError):
        excluder.find_supermaximal(p)


# --- quadratic minimum ----------------------------------------------------------------------


@pytest.mark.parametrize(
    "r,mu,c,nu,value",
    [
        ((1,), (1,), 5, (5,), 25),
        ((1, 1), (1, 2), 3, (2, 1), 6),
        ((2, 1), (1, 1), 6, (2, 2), 12),
    ],
)
def test_qp_minimize(r, mu, c, nu, value):
    assert excluder.qp_minimize(r, mu, c) == (tuple(Fraction(x) for x in nu), value)


def _lagrange(r, mu, c):
    nus = sympy.symbols(f"v0:{len(r)}")
    lam = sympy.Symbol("lam")
    objective = sum(ri * mi * v**2 for ri, mi, v in zip(r, mu, nus))
    constraint = sum(ri * v for ri, v in zip(r, nus)) - c
    eqs = [sympy.diff(objective - lam * constraint, v) for v in nus] + [constraint]
    sol = sympy.solve(eqs, list(nus) + [lam], dict=True)[0]
    return tuple(sol[v] for v in nus), objective.subs(sol)


@settings(max_examples=30, deadline=None)
@given(
    st.lists(st.tuples(st.integers(1, 9), st.sampled_from((1, 2))), min_size=1, max_size=4),
    st.integers(1, 40),
)
def test_qp_minimize_matches_lagrange(pairs, c):
    r = [p[0] for p in pairs]
    mu = [p[1] for p in pairs]
    nu, value = excluder.qp_minimize(r, mu, c)
    want_nu, want_value = _lagrange(r, mu, c)
    assert [sympy.Rational(x.numerator, x.denominator) for x in nu] == list(want_nu)
    assert sympy.Rational(value.numerator, value.denominator) == want_value


def test_qp_minimum_beats_a_grid():
    r, mu, c = (1, 1), (1, 2), 3
    _, best = excluder.qp_minimize(r, mu, c)
    for k in range(0, 61):
        a = Fraction(k, 20)
        b = c - a
        assert a * a + 2 * b * b >= best


def test_qp_minimize_domain():
    with pytest.raises(DomainError):
        excluder.qp_minimize((), (), 1)
    with pytest.raises(DomainError):
        excluder.qp_minimize((1,), (3,), 1)
    with pytest.raises(DomainError):
        excluder.qp_minimize((1,), (1,), 0)


# --- counting multiplicities -----------------------------------------------------------------


def test_counting_system_balanced_data():
    inst = k2_instance(n=1, nu=(2, 1))
    data = excluder.balance_multiplicities(inst, [5])
    assert data.d == (1,)
    assert excluder.counting_system_check(inst, data) == []


def test_counting_system_perturbed_row():
    inst = k2_instance(n=1, nu=(2, 1))
    data = excluder.MultiplicityData((Fraction(5),), {}, (Fraction(2),))
    violations = excluder.counting_system_check(inst, data)
    assert len(violations) == 1 and violations[0].startswith("row 1:")


def test_counting_system_estimate():
    inst = k2_instance(n=1, nu=(2, 1))
    data = excluder.balance_multiplicities(inst, [Fraction(9, 2)])
    assert data.d == (Fraction(1, 2),)
    assert any(v.startswith("estimate:") for v in excluder.counting_system_check(inst, data))


def test_inequality_11_sides():
    inst = k2_instance(n=1, nu=(2, 1))
    assert excluder.inequality_11_evaluate(inst, [5]) == (5, 5)
    assert excluder.inequality_11_evaluate(inst, [0])[0] == 0


# --- the symbolic chain ---------------------------------------------------------------------


def test_chain_is_certified():
    cert = excluder.chain_verify()
    assert [s.name for s in cert.steps] == ["a", "b", "c", "d"]
    assert cert.certified
    assert all(s.status == "certified" for s in cert.steps)


def test_final_step_is_a_perfect_square():
    step = excluder.chain_verify().steps[3]
    assert step.kind == "square"
    assert step.certificate == "(n*sigma_u - e)^2"


def test_boundary_of_the_final_step():
    # at n = e = sigma_u = 1 the strict claim 2*n*e*sigma_u > n^2*sigma_u^2 + e^2 is an equality
    n, e, su = symbols("n", "e", "sigma_u")
    at = {"n": 1, "e": 1, "sigma_u": 1}
    assert (2 * n * e * su).evaluate(at) == (n**2 * su**2 + e**2).evaluate(at) == 2


# --- exclusion ------------------------------------------------------------------------------


def test_k2_chain_is_excluded():
    v = excluder.exclude(k2_instance())
    assert v.verdict == "infeasible"
    assert (v.e, v.ord_t, v.sigma.sigma_l, v.sigma.sigma_u) == (2, 2, 1, 1)
    assert (v.lhs_upper, v.strict_upper, v.rhs_lower) == (18, 32, 32)
    assert v.rhs_instance == 34
    assert v.square == v.square_root**2 == 0


def test_not_supermaximal_instance():
    v = excluder.exclude(k2_instance(n=3))
    assert v.verdict == "not supermaximal"
    assert v.diagnostics
    v = excluder.exclude(k2_instance(lam=8))
    assert v.verdict == "not supermaximal"


def test_rhs_lower_bounds_the_instance():
    for seed in range(50):
        v = excluder.exclude(excluder.random_instance(excluder.InstanceParams(), seed))
        assert v.rhs_lower <= v.rhs_instance


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**63), st.integers(3, 5))
def test_random_supermaximal_instances_are_infeasible(seed, M):
    inst = excluder.random_instance(excluder.InstanceParams(K_max=10, fibre_dim=M), seed)
    assert excluder.is_supermaximal(inst)
    assert excluder.exclude(inst).verdict == "infeasible"


def test_random_instance_is_reproducible():
    params = excluder.InstanceParams()
    assert excluder.random_instance(params, 12) == excluder.random_instance(params, 12)


def test_chain_sides_on_random_instances():
    """Every link of the instantiated chain, checked numerically."""
    for seed in itertools.islice(itertools.count(1000), 40):
        inst = excluder.random_instance(excluder.InstanceParams(fibre_dim=4), seed)
        v = excluder.exclude(inst)
        assert v.lhs_upper < v.strict_upper
        assert 2 * v.n * v.e * v.sigma.sigma_u <= v.n**2 * v.sigma.sigma_u**2 + v.e**2
