import sympy
import pytest

from conftest import hilb_fixture, sub_colinked_fixture
from linkedchains import strata, zrep
from linkedchains.errors import ContractViolation, SizeBoundError
from linkedchains.exactlin import Q, Matrix
from linkedchains.strata import ArrowProfile
from linkedchains.zrep import SubrepLine, TypeVector, ZRep

q_ = strata.q_symbol


def dual_u(r):
    return zrep.dual(zrep.make_u_of_r(r))


def test_profile_of_examples():
    v = sub_colinked_fixture()
    p = strata.profile_of(SubrepLine(0, [(1, 0, 0), (1, 0, 1), (0, 0, 1)]), v)
    assert (p.pair(0), p.pair(1)) == ((0, 1), (1, 0))
    assert p.label == "01.10"
    g = ZRep(Q, 0, 1, (2, 2), [Matrix.identity(Q, 2)], [Matrix.identity(Q, 2)])
    assert strata.profile_of(SubrepLine(0, [(1, 1), (1, 1)]), g).flat == (1, 1)
    v1 = hilb_fixture(1)
    p = strata.profile_of(SubrepLine(0, [(0, 1), (1, 0)]), v1)
    assert p.flat == (0, 0)


def test_enumerate_exact_profiles():
    assert [len(strata.enumerate_exact_profiles(d)) for d in range(4)] == [1, 2, 4, 8]
    for p in strata.enumerate_exact_profiles(3):
        assert p.is_exact and p.is_special
    sinks = sorted(tuple(p.sinks()) for p in strata.enumerate_exact_profiles(2))
    assert sinks == [(0,), (0, 2), (1,), (2,)]


def _profile_with_sinks(d, sinks):
    for p in strata.enumerate_exact_profiles(d):
        if list(p.sinks()) == list(sinks):
            return p
    raise AssertionError(sinks)


def test_stratum_nonempty_examples():
    assert strata.stratum_nonempty(_profile_with_sinks(1, [0]), TypeVector((1, 1)))
    assert not strata.stratum_nonempty(_profile_with_sinks(2, [1]), TypeVector((1, 0, 1)))
    p = _profile_with_sinks(2, [0, 2])
    assert list(p.sources()) == [1]
    r = TypeVector((1, 1, 1))
    assert strata.stratum_nonempty(p, r)
    classes = strata.group_by_profile(strata.oracle_points(dual_u(r), 2))
    padded = strata.stratify(dual_u(r))
    match = [x for x in padded.profiles if padded.core(x) == p]
    assert classes.get(match[0])


def test_components_examples():
    assert len(strata.components(dual_u((1, 1)))) == 2
    assert len(strata.components(dual_u((3,)))) == 1
    assert len(strata.components(dual_u((1, 1, 1)))) == 4
    assert len(strata.components(dual_u((1, 0, 1)))) == 3
    st = strata.stratify(zrep.make_u_of_r((1, 1)))
    assert st.dualized


def test_cells_and_counts():
    r = TypeVector((1, 1))
    cell = strata.cell_structure(_profile_with_sinks(1, [0]), r)
    assert cell.dimension == 1
    assert strata.count_poly(cell).as_expr() == q_
    single = strata.cell_structure(_profile_with_sinks(0, [0]), TypeVector((3,)))
    assert strata.count_poly(single).as_expr() == 1 + q_ + q_**2
    total = sum(strata.count_poly(strata.cell_structure(p, r)).as_expr() for p in strata.enumerate_exact_profiles(1))
    assert sympy.expand(total + 1) == 2 * q_ + 1
    assert [len(strata.oracle_points(dual_u(r), q)) for q in (2, 3)] == [5, 7]


def test_meet_and_closure():
    a, b = strata.enumerate_exact_profiles(1)
    assert strata.meet(a, a) == a
    m = strata.meet(a, b)
    assert m.flat == (0, 0)
    assert strata.closure_leq(m, a) and strata.closure_leq(m, b) and not strata.closure_leq(a, b)
    v = dual_u((1, 1))
    st = strata.stratify(v)
    comps = st.components
    both = [p for _, p in strata.oracle_points(v, 2) if all(strata.closure_leq(p, c) for c in comps)]
    assert len(both) == 1 and both[0] == strata.meet(*comps)


def test_oracle_examples():
    sizes = {p.label: len(ws) for p, ws in strata.group_by_profile(strata.oracle_points(dual_u((1, 1)), 2)).items()}
    assert sizes == {"00": 1, "01": 2, "10": 2}
    assert len(strata.oracle_points(hilb_fixture(3), 2)) == 9
    g = ZRep(Q, 0, 1, (3, 3), [Matrix.identity(Q, 3)], [Matrix.identity(Q, 3)])
    for q in (2, 3):
        assert len(strata.oracle_points(g, q)) == 1 + q + q * q


def test_oracle_size_bound():
    with pytest.raises(SizeBoundError):
        strata.oracle_points(hilb_fixture(3), 7, max_cells=10)


def test_strata_reject_non_exact():
    with pytest.raises(ContractViolation):
        strata.stratify(hilb_fixture(2))


def test_component_poset_dot():
    poset = strata.component_poset(dual_u((1, 1)))
    dot = strata.poset_to_dot(poset)
    assert dot.count('kind="component"') == 2 and dot.count('kind="meet"') == 1
    assert dot.startswith("digraph")


def test_deformation_examples():
    v = dual_u((1, 1))
    meet_point = [w for w, p in strata.oracle_points(v, 2) if p.flat == (0, 0)][0]
    w = strata.lift_balanced(meet_point, 2)
    fam = strata.deformation_witness(v, w, (strata.UP, 0))
    assert fam.after.up_bits == (1,) and fam.after.is_exact
    assert zrep.is_subrep_line(v, fam.at(0)) and strata.profile_of(fam.at(0), v) == fam.before
    sample = strata.specialize_family(v, fam)
    assert strata.profile_of(sample, v) == fam.after
    exact = [w for w, p in strata.rational_oracle_points(v, 3) if p.up_bits == (1,)][0]
    same = strata.deformation_witness(v, exact, (strata.UP, 0))
    assert same.trivial


def test_path_to_exact_bounded_by_zero_pairs():
    for r in [(1, 1), (1, 1, 1), (2, 1), (1, 0, 1)]:
        v = dual_u(r)
        for w, p in strata.rational_oracle_points(v, 2):
            if p.is_exact:
                continue
            path = strata.path_to_exact(v, w)
            assert path[-1].is_exact
            assert len(path) - 1 <= len(p.zero_pairs())


def test_report_rows():
    rows = strata.stratification_report(dual_u((1, 1, 1)), q=2)
    assert len(rows) == 4
    for row in rows:
        if row["nonempty"]:
            assert sympy.sympify(row["count_poly"]).subs(q_, 2) == row["oracle_count"]
