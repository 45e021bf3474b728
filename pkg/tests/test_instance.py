import pytest
from hypothesis import given, settings, strategies as st

from nulc.instance import (
    Instance,
    ParseError,
    Permutation,
    Reason,
    Solution,
    force_deletions,
    parse_instance,
    parse_solution,
    perm_inverse,
    serialize_instance,
    serialize_solution,
    verify_solution,
)

SWAP = (2, 1)


def cycle_oct(n, k):
    return Instance.build(n, 2, k, [(i, (i + 1) % n, SWAP) for i in range(n)])


def test_perm_inverse_examples():
    assert perm_inverse(Permutation.identity(3)) == Permutation.identity(3)
    assert perm_inverse(Permutation((2, 1))) == Permutation((2, 1))
    assert perm_inverse(Permutation((2, 3, 1))) == Permutation((3, 1, 2))


def test_permutation_rejects_non_bijection():
    with pytest.raises(ValueError):
        Permutation((1, 1))
    with pytest.raises(ValueError):
        Permutation((0, 1))


permutations = st.integers(1, 6).flatmap(lambda s: st.permutations(range(1, s + 1))).map(lambda xs: Permutation(tuple(xs)))


@given(permutations)
def test_perm_inverse_is_involution(p):
    q = perm_inverse(p)
    assert perm_inverse(q) == p
    assert all(q(p(i)) == i for i in range(1, p.size + 1))


def test_edge_stored_once_with_inverse_for_other_endpoint():
    inst = Instance.build(2, 3, 0, [(1, 0, (2, 3, 1))])
    g = inst.graph
    assert g.edges[0][:2] == (0, 1)
    assert g.perm(0, 1) == Permutation((2, 3, 1))
    assert g.perm(0, 0) == Permutation((3, 1, 2))


def test_anchor_contract():
    g = cycle_oct(3, 0).graph
    with pytest.raises(ValueError):
        Instance(g, 0, (3, 3, 3), frozenset({0}), anchor=0)  # tau not singleton
    with pytest.raises(ValueError):
        Instance(g, 0, (1, 3, 3), frozenset(), anchor=0)  # not undeletable
    Instance(g, 0, (1, 3, 3), frozenset({0}), anchor=0)


def test_graph_must_be_simple():
    with pytest.raises(ValueError):
        Instance.build(2, 2, 0, [(0, 0, SWAP)])
    with pytest.raises(ValueError):
        Instance.build(2, 2, 0, [(0, 1, SWAP), (1, 0, SWAP)])


def test_verify_accepts_bipartite_c4():
    sol = Solution(True, frozenset(), {0: 1, 1: 2, 2: 1, 3: 2})
    assert verify_solution(cycle_oct(4, 0), sol)


def test_verify_rejects_odd_cycle_on_closing_edge():
    inst = cycle_oct(3, 0)
    verdict = verify_solution(inst, Solution(True, frozenset(), {0: 1, 1: 2, 2: 1}))
    assert verdict.reason is Reason.EDGE_VIOLATION
    closing = next(e for e, (u, v, _) in enumerate(inst.graph.edges) if (u, v) == (0, 2))
    assert verdict.where == closing


def test_verify_c5_with_one_deletion():
    # v3 is vertex 2 (0-based); the rest is the path 3-4-0-1
    sol = Solution(True, frozenset({2}), {3: 1, 4: 2, 0: 1, 1: 2})
    assert verify_solution(cycle_oct(5, 1), sol)


def test_verify_reason_order():
    inst = Instance.build(3, 2, 1, [(0, 1, SWAP), (1, 2, SWAP)], tau={2: [1]}, undeletable=[0])
    assert verify_solution(inst, Solution(True, frozenset({1, 2}), {0: 1})).reason is Reason.BUDGET_EXCEEDED
    assert verify_solution(inst, Solution(True, frozenset({0}), {1: 1, 2: 2})).reason is Reason.UNDELETABLE_DELETED
    v = verify_solution(inst, Solution(True, frozenset(), {0: 1, 1: 2, 2: 2}))
    assert (v.reason, v.where) == (Reason.TAU_VIOLATION, 2)
    v = verify_solution(inst, Solution(True, frozenset(), {0: 1, 1: 2}))
    assert (v.reason, v.where) == (Reason.TAU_VIOLATION, 2)  # missing label


def test_force_deletions_examples():
    inst = cycle_oct(4, 0)
    assert force_deletions(inst) is inst
    single = Instance.build(1, 2, 1, [], tau={0: []})
    out = force_deletions(single)
    assert out is not None and out.k == 0 and list(out.vertices()) == []
    assert force_deletions(Instance.build(1, 2, 1, [], tau={0: []}, undeletable=[0])) is None
    assert force_deletions(Instance.build(1, 2, 0, [], tau={0: []})) is None


def test_parse_example_and_defaults():
    text = "ulc 1\n# hi\nn 3 m 2 sigma 2 k 1\nv 2 tau 1\nundeletable 3\ne 1 2 2 1\ne 2 3 1 2\n"
    inst = parse_instance(text)
    assert (inst.n, inst.graph.m, inst.s, inst.k) == (3, 2, 2, 1)
    assert inst.allowed(0) == [1, 2] and inst.allowed(1) == [1]
    assert inst.undeletable == {2}
    assert parse_instance(serialize_instance(inst)) == inst


@pytest.mark.parametrize(
    "text, line",
    [
        ("ulc 2\n", 1),
        ("ulc 1\nn 2 m 1 sigma 2\n", 2),
        ("ulc 1\nn 2 m 1 sigma 2 k 0\ne 1 1 1 2\n", 3),
        ("ulc 1\nn 2 m 1 sigma 2 k 0\ne 1 2 1 1\n", 3),
        ("ulc 1\nn 2 m 1 sigma 2 k 0\nv 3 tau 1\ne 1 2 1 2\n", 3),
        ("ulc 1\nn 2 m 2 sigma 2 k 0\ne 1 2 1 2\n", 2),
        ("ulc 1\nn 2 m 1 sigma 2 k 0\ne 1 2 1 2\nbogus\n", 4),
    ],
)
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_instance(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


@st.composite
def instances(draw):
    s = draw(st.integers(1, 4))
    n = draw(st.integers(0, 7))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    edges = [(u, v, draw(st.permutations(range(1, s + 1)))) for u, v in chosen]
    tau = {v: draw(st.sets(st.integers(1, s))) for v in draw(st.sets(st.integers(0, max(n - 1, 0)))) if n}
    und = draw(st.sets(st.integers(0, n - 1))) if n else set()
    return Instance.build(n, s, draw(st.integers(0, 5)), edges, tau=tau, undeletable=und)


@given(instances())
@settings(max_examples=150)
def test_round_trip(inst):
    assert parse_instance(serialize_instance(inst)) == inst


def test_solution_round_trip():
    sol = Solution(True, frozenset({2}), {0: 1, 1: 2})
    assert parse_solution(serialize_solution(sol)) == sol
    assert parse_solution("NO\n").decision is False
    assert serialize_solution(Solution(True)) == "YES\ndelete\n"
