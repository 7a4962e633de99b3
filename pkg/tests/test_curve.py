import json
import random

import pytest

from conftest import FIXTURES
from linkedchains import curve, zrep
from linkedchains import exactlin as el
from linkedchains.curve import CurveBundle, NodalCurve
from linkedchains.errors import ContractViolation, ParseError
from linkedchains.exactlin import Q, Matrix
from linkedchains.zrep import ZRep

X = NodalCurve()


def fixture(name):
    return curve.load_fixture(str(FIXTURES / f"{name}.json"))


def test_curve_invariants():
    assert NodalCurve(1, 2, curve.PROFILE_ONLY).g == 3
    with pytest.raises(ContractViolation):
        NodalCurve(1, 0)
    assert curve.canonical_bundle(X).multidegree == (-1, -1)
    assert curve.canonical_bundle(NodalCurve(1, 1, curve.PROFILE_ONLY)).multidegree == (1, 1)
    with pytest.raises(ContractViolation):
        CurveBundle((0, 0), 0)


def test_h0_sequence_of_degree_two():
    seq = curve.h0_sequence(X, CurveBundle((2, 0)), (-2, 5))
    assert seq == [4, 3, 3, 3, 3, 3, 4, 5]
    assert seq[1:6] == [3] * 5  # plateau [-1, 3] with value d - g + 1


def test_h0_sequence_tail_formulas():
    for d in range(-1, 4):
        lo, hi = -4, d + 5
        seq = dict(zip(range(lo, hi + 1), curve.h0_sequence(X, CurveBundle((d, 0)), (lo, hi))))
        for i, h in seq.items():
            if -1 <= i <= d + 1:
                assert h == d + 1
            elif i > d + 1:
                assert h == i  # deg L|_Z + i - g_Z
            else:
                assert h == d - i  # deg L|_Y - i - g_Y


def test_negative_degree_has_a_zero_entry():
    for md in [(-1, 0), (2, -4), (-3, 1)]:
        assert 0 in curve.h0_sequence(X, CurveBundle(md))


def test_elliptic_fixture_dimensions():
    ne = fixture("elliptic_L_P_ne_N")
    seq = dict(zip(range(ne.window[0], ne.window[1] + 1), curve.h0_sequence(ne.curve, ne)))
    assert (seq[0], seq[1], seq[2]) == (2, 1, 1)
    assert seq[-1] == 2 and seq[3] == 2
    eq = fixture("elliptic_L_P_eq_N")
    assert curve.h0_sequence(eq.curve, eq) == [2, 2, 2, 2, 2]


def test_fixture_with_wrong_plateau_is_rejected():
    data = {"g_Y": 0, "g_Z": 0, "multidegree": [2, 0], "window": [-1, 3], "dims": [3, 3, 2, 3, 3]}
    fx = curve.fixture_from_dict(data)
    with pytest.raises(ContractViolation, match="fixture rejected"):
        curve.h0_sequence(fx.curve, fx)
    with pytest.raises(ParseError):
        curve.fixture_from_dict({"g_Y": 0, "window": [0, 1], "dims": [1, 1]})


def test_structure_sheaf_tower():
    t = curve.build_tower(X, CurveBundle((0, 0)))
    assert t.rep.dim(0) == 1
    oy, _ = curve._ambient(t.components, 1)
    right = t.bases[1] @ t.rep.up(0)
    left = t.bases[-1] @ t.rep.down(-1)
    oy_left, _ = curve._ambient(t.components, -1)
    assert not right.is_zero() and all(right.rows[k][0] == 0 for k in range(len(oy)))
    assert not left.is_zero() and all(left.rows[k][0] == 0 for k in range(len(oy_left), left.nrows))


def test_degree_one_core():
    t = curve.build_tower(X, CurveBundle((1, 0)))
    assert (t.rep.dim(0), t.rep.dim(1)) == (2, 2)
    assert t.rep.up(0).rank() == 1 and t.rep.down(0).rank() == 1


def test_window_must_cover_padded_core():
    with pytest.raises(ContractViolation, match="padded core"):
        curve.build_tower(X, CurveBundle((2, 0)), (0, 2))


def test_random_towers_are_special_with_required_injectivity():
    gen = random.Random(7)
    for _ in range(20):
        b = curve.random_bundle(gen)
        t = curve.build_tower(X, b)
        assert zrep.is_special(t.rep) is True
        assert curve.tower_problems(t) == []
        for i in t.rep.arrows:
            if t.injective_up[i]:
                assert t.rep.up(i).rank() == t.rep.dim(i)


def test_gluing_scalar_does_not_change_dimensions():
    a = curve.h0_sequence(X, CurveBundle((1, 1), 1), (-3, 3))
    b = curve.h0_sequence(X, CurveBundle((1, 1), Q.convert(-7) / 3), (-3, 3))
    assert a == b


def test_section_polynomials_respect_twists():
    b = curve.point_twist(CurveBundle((2, 0)), "Y", 5)
    t = curve.build_tower(X, b)
    import sympy

    x = sympy.Symbol("x")
    for py, _ in curve.section_polynomials(b, t, 0):
        assert sympy.simplify(py.subs(x, 5)) == 0


def test_winU_trivial_and_degree_two():
    t = curve.build_tower(X, CurveBundle((2, 0)))
    W = curve.winU_construct(t.rep, 3, (-1, 3))
    assert all(s.dim == 3 for s in W.values())
    z = curve.winU_construct(curve.build_tower(X, CurveBundle((-1, 0))).rep, 0, (-1, 0))
    assert all(s.dim == 0 for s in z.values())


def test_winU_hypothesis_failure_names_vertex():
    rep = ZRep(Q, 0, 2, (2, 2, 1), [Matrix.identity(Q, 2), Matrix.from_rows(Q, [[1, 0]])], [Matrix.zeros(Q, 2, 2), Matrix.zeros(Q, 2, 1)])
    with pytest.raises(ContractViolation, match="vertex 2"):
        curve.winU_construct(rep, 2, (0, 1))


def _rnd(gen, r, c):
    if r == 0 or c == 0:
        return Matrix.zeros(Q, r, c)
    return Matrix.from_rows(Q, [[gen.randint(-3, 3) for _ in range(c)] for _ in range(r)], c)


def _random_special_pair(gen, a, b):
    """Random up: k^a -> k^b and a down map through coker(up) into ker(up)."""
    up = _rnd(gen, b, a)
    ker = el.kernel(up)
    ann = el.annihilator(el.image(up))
    K = Matrix.from_columns(Q, ker.vectors(), a) if ker.dim else Matrix.zeros(Q, a, 0)
    down = K @ _rnd(gen, ker.dim, ann.nrows) @ ann
    return up, down


def _random_outward_rep(gen, n, left, right):
    dims = [n + k for k in range(left, 0, -1)] + [n] * 2 + [n + k for k in range(1, right + 1)]
    pairs = [_random_special_pair(gen, dims[k], dims[k + 1]) for k in range(len(dims) - 1)]
    lo = -left
    return ZRep(Q, lo, lo + len(dims) - 1, dims, [p[0] for p in pairs], [p[1] for p in pairs])


def test_winU_random_maps():
    gen = random.Random(11)
    for _ in range(20):
        n = gen.randint(1, 3)
        rep = _random_outward_rep(gen, n, gen.randint(0, 2), gen.randint(0, 2))
        assert zrep.is_special(rep) is True
        W = curve.winU_construct(rep, n, (0, 1))
        assert curve.subrep_problem(rep, W) is None
        assert all(s.dim == n for s in W.values())


def test_frak_h0_examples():
    assert curve.frak_h0(X, CurveBundle((1, 0))).value == 2
    assert curve.frak_h0(X, CurveBundle((0, -1))).value == 0
    h = curve.frak_h0(X, CurveBundle((0, 0)))
    assert (h.value, h.upper_bound, h.certificate) == (1, 1, "exact")


def test_oracle_agrees_with_construct_on_small_bundles():
    for md in [(0, 0), (1, 0), (2, 0), (1, 1), (-1, 0), (-2, 1), (0, -3)]:
        b = CurveBundle(md)
        assert curve.frak_h0(X, b, "oracle", 2).value == curve.frak_h0(X, b).value


def test_oracle_supports_lie_in_the_core():
    for md in [(1, 0), (2, 0), (1, 1), (0, 0)]:
        b = CurveBundle(md)
        t = curve.build_tower(X, b, field=el.PrimeField(2))
        core = (-b.deg_Z, b.deg_Y)
        top = curve.oracle_max_pure(t.rep, 2).value
        for W in curve.pure_subreps(t.rep, top):
            lo, hi = curve.support_of_subrep(t.rep, W)
            assert core[0] <= lo and hi <= core[1]


def test_rr_report_negative_degree():
    rec = curve.rr_report(X, CurveBundle((-1, 0)))
    assert rec["frak_h0"] == 0 and rec["frak_h1"] == 0 and rec["rr_ok"]
    assert curve.serre_dual(X, CurveBundle((-1, 0))).degree == -1


def test_point_twist_examples():
    b = CurveBundle((2, 0))
    p = curve.point_twist(b, "Y", Q.convert(3) / 7)
    assert curve.frak_h0(X, b, "oracle", 2).value == 3
    assert curve.frak_h0(X, p, "oracle", 2).value == 2
    back = curve.point_twist(p, "Y", Q.convert(3) / 7, +1)
    assert back == b and curve.frak_h0(X, back).value == 3
    with pytest.raises(ContractViolation):
        curve.point_twist(b, "Z", "N")
    assert curve.check_desigualdade(X, b, "Z", 2)


def test_random_point_twists():
    gen = random.Random(13)
    for _ in range(30):
        b = curve.random_bundle(gen)
        assert curve.check_desigualdade(X, b, gen.choice("YZ"), gen.randint(-5, 5))


def test_elliptic_oracle_values():
    expected = {"P_eq_N": (2, 1), "P_ne_N": (1, 0)}
    for case, (h0, h1) in expected.items():
        rec = curve.rr_report_fixtures(fixture(f"elliptic_L_{case}"), fixture(f"elliptic_M_{case}"))
        assert (rec["frak_h0"], rec["frak_h1"]) == (h0, h1)
        assert rec["frak_h0"] - rec["frak_h1"] == rec["deg"] - rec["g"] + 1
        assert "not computed from elliptic geometry" in rec["note"]
    eq = curve.fixture_h0(fixture("elliptic_L_P_eq_N"))
    assert eq.support == (0, 2)
    assert curve.fixture_h0(fixture("elliptic_M_P_eq_N")).support == (-1, -1)


def test_fixture_json_is_reproducible(tmp_path):
    import importlib.util

    spec = importlib.util.spec_from_file_location("make_elliptic", FIXTURES / "make_elliptic.py")
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    mod.HERE = tmp_path
    mod.main()
    for name in mod.CASES:
        assert json.loads((tmp_path / f"{name}.json").read_text()) == json.loads((FIXTURES / f"{name}.json").read_text())
