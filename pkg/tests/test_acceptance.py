"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import random
import time

import sympy

import test_properties as props
from conftest import FIXTURES, hilb_fixture, record_acceptance
from linkedchains import curve, hilbert, strata, zrep
from linkedchains.curve import CurveBundle, NodalCurve
from linkedchains.exactlin import QT, Q
from linkedchains.zrep import TypeVector

SMALL = zrep.all_type_vectors(3, 3)
TINY = zrep.all_type_vectors(3, 2)


def dual_u(r):
    return zrep.dual(zrep.make_u_of_r(r))


def test_01_classification(conjugate_instances):
    start = time.perf_counter()
    wrong, unverified = 0, 0
    for r, _, v, _ in conjugate_instances:
        if zrep.classify(v) != r:
            wrong += 1
        try:
            zrep.simple_basis(v)  # verifies the isomorphism before returning
        except zrep.SimpleBasisError:
            unverified += 1
    elapsed = time.perf_counter() - start
    sample = conjugate_instances[::50]
    round_trip = True
    for _, _, v, _ in sample:
        sb = zrep.simple_basis(v)
        round_trip &= zrep.verify_isomorphism(v, sb.target, sb.changes)
        round_trip &= zrep.transport(sb.target, sb.changes, v.lo, v.hi) == v
    ok = wrong == 0 and unverified == 0 and round_trip and elapsed < 10
    record_acceptance(
        1, ok, f"{len(conjugate_instances)} conjugates, {wrong} misclassified, {unverified} unverified, {elapsed:.1f}s (< 10s)"
    )
    assert ok


def test_02_duality(conjugate_instances):
    bad = 0
    for _, _, v, _ in conjugate_instances:
        d = zrep.dual(v)
        same = (
            zrep.is_linked(d) == zrep.is_colinked(v)
            and zrep.is_colinked(d) == zrep.is_linked(v)
            and zrep.support_interval(v) == zrep.cosupport_interval(d)
            and zrep.cosupport_interval(v) == zrep.support_interval(d)
            and zrep.dual(d) == v
        )
        bad += not same
    ok = bad == 0
    record_acceptance(2, ok, f"{len(conjugate_instances)} instances, {bad} duality failures")
    assert ok


def _sink_criterion(core, r):
    return all(r.entries[t - core.lo] > 0 for t in core.sinks())


def test_03_strata_vs_oracle():
    start = time.perf_counter()
    failures = []
    for r in SMALL:
        v = dual_u(r)
        st = strata.stratify(v)
        for q in (2, 3):
            points = strata.oracle_points(v, q)
            groups = strata.group_by_profile(points)
            if sum(len(ws) for ws in groups.values()) != len(points):
                failures.append((r.entries, q, "partition"))
            for p, nonempty in zip(st.profiles, st.nonempty):
                size = len(groups.get(p, []))
                expect = strata.count_poly(st.cell(p)).eval(q) if nonempty else 0
                if size != expect:
                    failures.append((r.entries, q, p.label, size, expect))
                if nonempty != _sink_criterion(st.core(p), r) or nonempty != (size > 0):
                    failures.append((r.entries, q, p.label, "sink criterion"))
    totals = {}
    for q in (2, 3):
        totals[q] = (len(strata.oracle_points(dual_u((1, 1)), q)), len(strata.oracle_points(hilb_fixture(3), q)))
        if totals[q] != (2 * q + 1, (q + 1) ** 2):
            failures.append(("totals", q, totals[q]))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    record_acceptance(3, ok, f"{len(SMALL)} type vectors x q in (2,3), totals {totals}, {len(failures)} mismatches, {elapsed:.1f}s (< 60s)")
    assert ok, failures[:5]


def test_04_components_and_meets():
    q = 2
    failures = []
    counts = {}
    for r in SMALL:
        v = dual_u(r)
        st = strata.stratify(v)
        comps = st.components
        groups = strata.group_by_profile(strata.oracle_points(v, q))
        exact_seen = [p for p in groups if p.is_exact]
        if sorted(p.flat for p in exact_seen) != sorted(p.flat for p in comps):
            failures.append((r.entries, "component count"))
        counts[r.entries] = len(comps)
        if r.d == 1 and len(comps) != 2 or r.d == 2 and not 1 <= len(comps) <= 4:
            failures.append((r.entries, "count range"))
        for a in comps:
            if sympy.degree(strata.count_poly(st.cell(a)).as_expr(), strata.q_symbol) != r.r - 1:
                failures.append((r.entries, a.label, "pure dimension"))
            for b in comps:
                m = strata.meet(a, b)
                both = {p for p in groups if strata.closure_leq(p, a) and strata.closure_leq(p, b)}
                below = {p for p in groups if strata.closure_leq(p, m)}
                if both != below:
                    failures.append((r.entries, a.label, b.label, "meet"))
    ok = not failures and counts[(1, 1, 1)] == 4
    record_acceptance(4, ok, f"component counts {dict(sorted(counts.items()))}, {len(failures)} failures")
    assert ok, failures[:5]


def _same_line(a, b):
    return all(zrep.parallel(Q, x, y) for x, y in zip(a.vectors, b.vectors))


def test_05_closure_deformations():
    witnesses, failures = 0, []
    for r in TINY:
        v = dual_u(r)
        vt = zrep.change_field(v, QT)
        for w, p in strata.rational_oracle_points(v, 3):
            if p.is_exact:
                continue
            for k in range(len(p.up_bits)):
                if p.up_bits[k] or p.down_bits[k]:
                    continue
                for arrow in ((strata.UP, p.lo + k), (strata.DOWN, p.lo + k)):
                    try:
                        fam = strata.deformation_witness(v, w, arrow)
                        ok = (
                            zrep.line_failures(vt, fam.family) == []
                            and _same_line(fam.at(0), w)
                            and strata.profile_of(strata.specialize_family(v, fam), v) == fam.after
                        )
                    except Exception as exc:  # recorded, then reported below
                        ok = False
                        failures.append((r.entries, p.label, arrow, str(exc)))
                    witnesses += 1
                    if not ok and not failures:
                        failures.append((r.entries, p.label, arrow))
    ok = witnesses > 0 and not failures
    record_acceptance(5, ok, f"{witnesses} deformation witnesses verified over Q(t), {len(failures)} failures")
    assert ok, failures[:5]


def test_06_hilbert():
    start = time.perf_counter()
    mismatches, degrees = 0, 0
    for r in TINY:
        rows = hilbert.hilbert_report(r, (3,) * (r.d + 1))
        degrees += len(rows)
        mismatches += sum(not row["equal"] for row in rows)
    fixtures_ok = True
    for kind, poly in ((1, lambda a, b: a + b + 1), (2, lambda a, b: a + b + 1), (3, lambda a, b: (a + 1) * (b + 1))):
        for row in hilbert.hilbert_table(hilb_fixture(kind), (3, 3)):
            fixtures_ok &= row["computed"] == poly(*row["degree"])
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and fixtures_ok and elapsed < 120
    record_acceptance(
        6, ok, f"{degrees} box degrees over {len(TINY)} chains, {mismatches} mismatches, fixtures exact={fixtures_ok}, {elapsed:.1f}s (< 120s)"
    )
    assert ok


def test_07_lifting():
    lifts, failures = 0, []
    for r in TINY:
        s = hilbert.make_smoothing(r)
        if s.special != dual_u(r):
            failures.append((r.entries, "special fibre"))
        for q in (2, 3):
            for w, p in strata.rational_oracle_points(s.special, q):
                if not p.is_exact:
                    continue
                try:
                    lifted = hilbert.lift_subrep(s, w)
                    at0 = zrep.SubrepLine(lifted.lo, [tuple(QT.evaluate(c, 0) for c in vec) for vec in lifted.vectors])
                    good = zrep.line_failures(s.family, lifted) == [] and _same_line(at0, w)
                except Exception as exc:  # recorded, then reported below
                    good = False
                    failures.append((r.entries, q, p.label, str(exc)))
                lifts += 1
                if not good and not failures:
                    failures.append((r.entries, q, p.label))
    ok = lifts > 0 and not failures
    record_acceptance(7, ok, f"{lifts} exact oracle points lifted over Q(t), {len(failures)} failures")
    assert ok, failures[:5]


def test_08_riemann_roch_genus_zero():
    start = time.perf_counter()
    c = NodalCurve()
    failures = []
    for dy in range(-3, 4):
        for dz in range(-3, 4):
            b = CurveBundle((dy, dz))
            rec = curve.rr_report(c, b)
            certs = rec["certificates"]
            if rec["frak_h0"] - rec["frak_h1"] != b.degree + 1 or not rec["rr_ok"]:
                failures.append(((dy, dz), "rr"))
            if not rec["riemann_ok"]:
                failures.append(((dy, dz), "riemann"))
            if certs["h0"]["certificate"] != "exact" or certs["h1"]["certificate"] != "exact":
                failures.append(((dy, dz), "certificate"))
            d = b.degree
            if d > -2:
                plateau = (-1 - dz, d + 1 - dz)
                lo, hi = curve.default_window(b)
                seq = dict(zip(range(min(lo, plateau[0]), max(hi, plateau[1]) + 1),
                               curve.h0_sequence(c, b, (min(lo, plateau[0]), max(hi, plateau[1])))))
                if any(seq[i] != d + 1 for i in range(plateau[0], plateau[1] + 1)):
                    failures.append(((dy, dz), "plateau"))
    gen = random.Random(8)
    twists = 0
    for _ in range(30):
        b = CurveBundle((gen.randint(-3, 3), gen.randint(-3, 3)), gen.choice([1, 2, -3]))
        twists += 1
        if not curve.check_desigualdade(c, b, gen.choice("YZ"), Q.convert(gen.randint(-9, 9)) / gen.randint(1, 4)):
            failures.append((b.multidegree, "twist"))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    record_acceptance(8, ok, f"49 multidegrees, {twists} point twists, {len(failures)} failures, {elapsed:.1f}s (< 60s)")
    assert ok, failures[:5]


def test_09_elliptic_fixtures():
    expect = {"P_eq_N": (2, 1), "P_ne_N": (1, 0)}
    got, notes = {}, True
    for case in expect:
        line = curve.load_fixture(str(FIXTURES / f"elliptic_L_{case}.json"))
        dual = curve.load_fixture(str(FIXTURES / f"elliptic_M_{case}.json"))
        rec = curve.rr_report_fixtures(line, dual)
        got[case] = (rec["frak_h0"], rec["frak_h1"])
        notes &= bool(rec.get("note"))
        print(f"  {case}: note: {rec.get('note')}")
    ok = got == expect and notes and all(h0 - h1 == 1 for h0, h1 in got.values())
    record_acceptance(9, ok, f"(h0, h1) = {got}, expected {expect}, caveat note emitted={notes}")
    assert ok


def test_10_property_suite():
    counts = {}
    for name in (
        "test_rank_nullity",
        "test_modular_dimension_law",
        "test_preimage_dimension_identity",
        "test_special_heredity_of_line_subreps",
        "test_linked_breakpoint_necessity",
    ):
        calls = []
        original = props.run_counted

        def capture(prop, calls=calls):
            prop(calls)

        props.run_counted = capture
        try:
            getattr(props, name)()
        finally:
            props.run_counted = original
        counts[name.removeprefix("test_")] = len(calls)
    ok = all(n >= props.MIN_CASES for n in counts.values())
    record_acceptance(10, ok, "cases run: " + ", ".join(f"{k}={v}" for k, v in counts.items()))
    assert ok
