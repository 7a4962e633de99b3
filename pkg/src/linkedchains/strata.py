"""Arrow profiles and the stratification of the variety of line subrepresentations.

A line subrepresentation ``w`` of a representation ``v`` records, for every
arrow, whether the induced map between the chosen lines is nonzero.  That
0/1 function is an :class:`ArrowProfile`; the points sharing a profile form
a stratum.  For exact colinked chains with finite cosupport the strata of
exact profiles are products of projective spaces, affine spaces and tori,
and their closures are the irreducible components.

The finite-field oracle enumerates all points over F_q by brute force and
is the ground truth the closed formulas are tested against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

import sympy

from . import exactlin as el
from . import zrep
from .errors import ContractViolation, DimensionError, LinkedChainsError, SizeBoundError
from .exactlin import QT, FieldSpec, PrimeField, Q
from .zrep import INFINITE, UNDETERMINED, SubrepLine, TailKind, TypeVector, ZRep

ORACLE_PRIMES = (2, 3, 5, 7)
DEFAULT_MAX_CELLS = 10**6
UP, DOWN = "up", "down"

q_symbol = sympy.Symbol("q")


# --- profiles -------------------------------------------------------------


def _tail_bits(kind: TailKind) -> tuple[int, int]:
    if kind is TailKind.FORWARD_ISO:
        return (1, 0)
    if kind is TailKind.BACKWARD_ISO:
        return (0, 1)
    raise zrep.TailUndetermined("profile bit requested beyond a truncated tail")


@dataclass(frozen=True)
class ArrowProfile:
    """Bits (up_i, down_i) for the window arrows lo <= i < hi; tails supply the rest."""

    lo: int
    hi: int
    up_bits: tuple[int, ...]
    down_bits: tuple[int, ...]
    left_tail: TailKind = TailKind.FORWARD_ISO
    right_tail: TailKind = TailKind.BACKWARD_ISO

    def __post_init__(self):
        object.__setattr__(self, "up_bits", tuple(int(b) for b in self.up_bits))
        object.__setattr__(self, "down_bits", tuple(int(b) for b in self.down_bits))
        object.__setattr__(self, "left_tail", TailKind(self.left_tail))
        object.__setattr__(self, "right_tail", TailKind(self.right_tail))
        n = self.hi - self.lo
        if n < 0 or len(self.up_bits) != n or len(self.down_bits) != n:
            raise DimensionError("profile bits do not match the window")
        if any(b not in (0, 1) for b in self.up_bits + self.down_bits):
            raise ContractViolation("profile bits must be 0 or 1")

    def pair(self, i: int) -> tuple[int, int]:
        if i < self.lo:
            return _tail_bits(self.left_tail)
        if i >= self.hi:
            return _tail_bits(self.right_tail)
        k = i - self.lo
        return (self.up_bits[k], self.down_bits[k])

    def bit(self, arrow: tuple[str, int]) -> int:
        kind, i = arrow
        return self.pair(i)[0 if kind == UP else 1]

    @property
    def flat(self) -> tuple[int, ...]:
        return tuple(b for k in range(self.hi - self.lo) for b in (self.up_bits[k], self.down_bits[k]))

    @property
    def label(self) -> str:
        return ".".join(f"{u}{d}" for u, d in zip(self.up_bits, self.down_bits)) or "-"

    @property
    def is_special(self) -> bool:
        return all(not (u and d) for u, d in zip(self.up_bits, self.down_bits))

    @property
    def is_exact(self) -> bool:
        return all(u + d == 1 for u, d in zip(self.up_bits, self.down_bits))

    def zero_pairs(self) -> list[int]:
        return [self.lo + k for k in range(self.hi - self.lo) if not self.up_bits[k] and not self.down_bits[k]]

    def sinks(self) -> list[int]:
        return [i for i in range(self.lo, self.hi + 1) if self.pair(i - 1)[0] and self.pair(i)[1]]

    def sources(self) -> list[int]:
        return [i for i in range(self.lo, self.hi + 1) if self.pair(i)[0] and self.pair(i - 1)[1]]

    def raised(self, arrow: tuple[str, int]) -> ArrowProfile:
        kind, i = arrow
        if not self.lo <= i < self.hi:
            raise ContractViolation(f"arrow {i} lies outside the window [{self.lo}, {self.hi}]")
        up, down = list(self.up_bits), list(self.down_bits)
        (up if kind == UP else down)[i - self.lo] = 1
        return ArrowProfile(self.lo, self.hi, up, down, self.left_tail, self.right_tail)

    def to_dict(self) -> dict:
        return {"window": [self.lo, self.hi], "up": list(self.up_bits), "down": list(self.down_bits), "label": self.label}


def _same_window(a: ArrowProfile, b: ArrowProfile):
    if (a.lo, a.hi) != (b.lo, b.hi):
        raise DimensionError(f"profile windows [{a.lo}, {a.hi}] and [{b.lo}, {b.hi}] differ")


def closure_leq(b: ArrowProfile, a: ArrowProfile) -> bool:
    """Pointwise b <= a."""
    _same_window(a, b)
    return all(x <= y for x, y in zip(b.flat, a.flat))


def meet(a: ArrowProfile, b: ArrowProfile) -> ArrowProfile:
    """Pointwise minimum."""
    _same_window(a, b)
    up = [min(x, y) for x, y in zip(a.up_bits, b.up_bits)]
    down = [min(x, y) for x, y in zip(a.down_bits, b.down_bits)]
    return ArrowProfile(a.lo, a.hi, up, down, a.left_tail, a.right_tail)


def profile_of(w: SubrepLine, v: ZRep) -> ArrowProfile:
    """Bit 0 exactly where the induced map between lines vanishes."""
    problems = zrep.line_failures(v, w)
    if problems:
        raise ContractViolation("not a line subrepresentation: " + problems[0])
    f = v.field
    up = [0 if zrep.is_zero_vector(f, v.up(i).apply(w.at(i))) else 1 for i in v.arrows]
    down = [0 if zrep.is_zero_vector(f, v.down(i).apply(w.at(i + 1))) else 1 for i in v.arrows]
    left = v.left if v.left is not TailKind.TRUNCATED else TailKind.FORWARD_ISO
    right = v.right if v.right is not TailKind.TRUNCATED else TailKind.BACKWARD_ISO
    return ArrowProfile(v.lo, v.hi, up, down, left, right)


def enumerate_exact_profiles(d: int, lo: int = 0) -> list[ArrowProfile]:
    """Every exact profile on [lo, lo + d] with the colinked tail convention, sorted."""
    if d < 0:
        raise ContractViolation("d must be nonnegative")
    out = []
    for ups in itertools.product((0, 1), repeat=d):
        out.append(ArrowProfile(lo, lo + d, ups, [1 - u for u in ups]))
    return sorted(out, key=lambda p: p.flat)


def linked_breakpoint(p: ArrowProfile) -> int | None:
    """Index i with pairs (0,1) before i, (1,0) after i and pair i not (1,1); else None.

    Tails must follow the linked convention (left BackwardIso, right ForwardIso).
    """
    i = next((k for k in range(p.lo, p.hi + 1) if p.pair(k) != (0, 1)), p.hi)
    if p.pair(i) == (1, 1):
        return None
    if all(p.pair(k) == (1, 0) for k in range(i + 1, p.hi + 1)):
        return i
    return None


# --- cells ----------------------------------------------------------------


@dataclass(frozen=True)
class StratumCell:
    sinks: tuple[int, ...]
    sources: tuple[int, ...]
    projective: tuple[int, ...]  # dimension of each projective factor, one per sink
    affine: int
    torus: int

    @property
    def dimension(self) -> int:
        return sum(self.projective) + self.affine + self.torus

    def to_dict(self) -> dict:
        return {
            "sinks": list(self.sinks),
            "sources": list(self.sources),
            "projective": list(self.projective),
            "affine": self.affine,
            "torus": self.torus,
            "dimension": self.dimension,
        }


def _check_lengths(p: ArrowProfile, r: TypeVector):
    if p.hi - p.lo != r.d:
        raise DimensionError(f"profile window has {p.hi - p.lo + 1} vertices but r has {r.d + 1} entries")


def _relative(p: ArrowProfile) -> tuple[list[int], list[int]]:
    return [t - p.lo for t in p.sinks()], [s - p.lo for s in p.sources()]


def stratum_nonempty(p: ArrowProfile, r: TypeVector) -> bool:
    """Nonempty iff every sink t of the exact profile has r_t > 0."""
    _check_lengths(p, r)
    if not p.is_exact:
        raise ContractViolation("sink criterion applies to exact profiles only")
    sinks, _ = _relative(p)
    return all(r[t] > 0 for t in sinks)


def cell_structure(p: ArrowProfile, r: TypeVector) -> StratumCell:
    if not stratum_nonempty(p, r):
        raise ContractViolation(f"stratum {p.label} is empty for r = {list(r.entries)}")
    sinks, sources = _relative(p)

    def R(m):
        return r.R(m) if m >= 0 else 0

    affine = R(sinks[0] - 1) + R(r.d) - R(sinks[-1])
    affine += sum(R(sinks[k + 1] - 1) - R(sinks[k]) for k in range(len(sinks) - 1))
    return StratumCell(tuple(sinks), tuple(sources), tuple(r[t] - 1 for t in sinks), affine, len(sinks) - 1)


def count_poly(cell: StratumCell) -> sympy.Poly:
    """Number of F_q points of the cell as an integer polynomial in q."""
    q = q_symbol
    expr = q**cell.affine * (q - 1) ** cell.torus
    for n in cell.projective:
        expr *= sum(q**k for k in range(n + 1))
    return sympy.Poly(sympy.expand(expr), q, domain="ZZ")


def poly_text(poly: sympy.Poly) -> str:
    return str(poly.as_expr()).replace(" ", "")


# --- components -----------------------------------------------------------


@dataclass(frozen=True)
class Stratification:
    """Exact profiles of an exact colinked chain, padded to its window."""

    rep: ZRep
    type_vector: TypeVector
    anchor: int
    dualized: bool
    profiles: tuple[ArrowProfile, ...]  # all exact profiles, window-padded
    nonempty: tuple[bool, ...]

    @property
    def components(self) -> list[ArrowProfile]:
        return [p for p, ok in zip(self.profiles, self.nonempty) if ok]

    def core(self, p: ArrowProfile) -> ArrowProfile:
        """Restriction of a padded profile to the cosupport window."""
        a, d = self.anchor, self.type_vector.d
        k = a - p.lo
        return ArrowProfile(a, a + d, p.up_bits[k : k + d], p.down_bits[k : k + d])

    def cell(self, p: ArrowProfile) -> StratumCell:
        return cell_structure(self.core(p), self.type_vector)


def _colinked_side(v: ZRep) -> tuple[ZRep, bool]:
    if v.truncated:
        raise ContractViolation("strata need non-truncated tails")
    problem = zrep.first_violation(v, ["special", "exact"])
    if problem:
        raise ContractViolation(problem)
    col = zrep.check_axiom(v, "colinked")
    if col.status is True:
        return v, False
    if zrep.check_axiom(v, "linked").status is True:
        return zrep.dual(v), True
    raise ContractViolation(col.message())


def stratify(v: ZRep) -> Stratification:
    """Exact profiles and their nonemptiness; linked input is replaced by its dual."""
    cv, dualized = _colinked_side(v)
    if zrep.cosupport_interval(cv) is INFINITE:
        raise ContractViolation("representation has no finite cosupport")
    r, a, _ = zrep.anchored_type(cv)
    profiles, flags = [], []
    for core in enumerate_exact_profiles(r.d, a):
        up = [1] * (a - cv.lo) + list(core.up_bits) + [0] * (cv.hi - a - r.d)
        down = [0] * (a - cv.lo) + list(core.down_bits) + [1] * (cv.hi - a - r.d)
        profiles.append(ArrowProfile(cv.lo, cv.hi, up, down, cv.left, cv.right))
        flags.append(stratum_nonempty(core, r))
    return Stratification(cv, r, a, dualized, tuple(profiles), tuple(flags))


def components(v: ZRep) -> list[ArrowProfile]:
    """Exact profiles whose strata are nonempty; their closures are the components."""
    return stratify(v).components


@dataclass
class ComponentPoset:
    nodes: list[ArrowProfile]
    kinds: dict[ArrowProfile, str]
    labels: dict[ArrowProfile, str]
    edges: list[tuple[ArrowProfile, ArrowProfile]] = dc_field(default_factory=list)  # (smaller, larger)


def component_poset(v: ZRep) -> ComponentPoset:
    """Components, their iterated pairwise meets, and the covering relation."""
    st = stratify(v)
    comps = st.components
    nodes = list(comps)
    frontier = list(comps)
    while frontier:
        fresh = []
        for a, b in itertools.combinations(nodes, 2):
            m = meet(a, b)
            if m not in nodes and m not in fresh:
                fresh.append(m)
        nodes.extend(fresh)
        frontier = fresh
    nodes.sort(key=lambda p: (-sum(p.flat), p.flat))
    kinds, labels = {}, {}
    for p in nodes:
        if p in comps:
            kinds[p] = "component"
            labels[p] = f"{p.label}\\n{poly_text(count_poly(st.cell(p)))}"
        else:
            kinds[p] = "meet"
            labels[p] = p.label
    edges = []
    for lo_p in nodes:
        for hi_p in nodes:
            if lo_p == hi_p or not closure_leq(lo_p, hi_p):
                continue
            between = any(
                m not in (lo_p, hi_p) and closure_leq(lo_p, m) and closure_leq(m, hi_p) for m in nodes
            )
            if not between:
                edges.append((lo_p, hi_p))
    return ComponentPoset(nodes, kinds, labels, edges)


def poset_to_dot(poset: ComponentPoset, name: str = "components") -> str:
    ids = {p: f"n{k}" for k, p in enumerate(poset.nodes)}
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for p in poset.nodes:
        shape = "box" if poset.kinds[p] == "component" else "ellipse"
        lines.append(f'  {ids[p]} [label="{poset.labels[p]}", shape={shape}, kind="{poset.kinds[p]}"];')
    for a, b in poset.edges:
        lines.append(f"  {ids[a]} -> {ids[b]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def stratification_report(v: ZRep, q: int | None = None, max_cells: int = DEFAULT_MAX_CELLS) -> list[dict]:
    """One row per exact profile; oracle counts are added when q is given."""
    st = stratify(v)
    counts = None
    if q is not None:
        counts = group_by_profile(oracle_points(st.rep, q, max_cells))
    rows = []
    for p, ok in zip(st.profiles, st.nonempty):
        row = {"profile": p.to_dict(), "nonempty": ok, "cell": None, "count_poly": None}
        if ok:
            cell = st.cell(p)
            row["cell"] = cell.to_dict()
            row["count_poly"] = poly_text(count_poly(cell))
        if counts is not None:
            row["oracle_count"] = len(counts.get(p, []))
        rows.append(row)
    return rows


# --- finite-field oracle --------------------------------------------------


def _projective_points(n: int, q: int) -> list[tuple[int, ...]]:
    """Vectors in F_q^n whose first nonzero entry is 1."""
    pts = []
    for lead in range(n):
        for tail in itertools.product(range(q), repeat=n - lead - 1):
            pts.append((0,) * lead + (1,) + tail)
    return pts


def _apply_mod(rows, x, q):
    return tuple(sum(a * b for a, b in zip(r, x)) % q for r in rows)


def _parallel_mod(a, b, q) -> bool:
    n = len(a)
    return all((a[i] * b[j] - a[j] * b[i]) % q == 0 for i in range(n) for j in range(i + 1, n))


def reduce_mod(v: ZRep, q: int) -> ZRep:
    if q not in ORACLE_PRIMES:
        raise ContractViolation(f"oracle fields are F_q for q in {ORACLE_PRIMES}")
    if v.field == PrimeField(q):
        return v
    if v.field != Q:
        raise ContractViolation(f"cannot reduce {v.field.name} entries modulo {q}")
    try:
        return zrep.change_field(v, PrimeField(q))
    except el.ConfigurationError as exc:
        raise ContractViolation(str(exc)) from exc


def oracle_points(v: ZRep, q: int, max_cells: int = DEFAULT_MAX_CELLS) -> list[tuple[SubrepLine, ArrowProfile]]:
    """All line subrepresentations over F_q, each with its profile, in enumeration order."""
    vq = reduce_mod(v, q)
    verts = list(vq.vertices)
    if any(vq.dim(i) == 0 for i in verts):
        return []
    pts = {i: _projective_points(vq.dim(i), q) for i in verts}
    space = 1
    for i in verts:
        space *= len(pts[i])
    if space > max_cells:
        raise SizeBoundError(f"oracle search space {space} exceeds the bound {max_cells}")
    ups = [vq.up(i).rows for i in vq.arrows]
    downs = [vq.down(i).rows for i in vq.arrows]
    sols: list[tuple] = []

    def extend(chain):
        k = len(chain)
        if k == len(verts):
            sols.append(tuple(chain))
            return
        prev = chain[-1]
        image = _apply_mod(ups[k - 1], prev, q)
        for y in pts[verts[k]]:
            if _parallel_mod(image, y, q) and _parallel_mod(_apply_mod(downs[k - 1], y, q), prev, q):
                chain.append(y)
                extend(chain)
                chain.pop()

    for x in pts[verts[0]]:
        extend([x])
    _assert_all_pairs(vq, sols, q)
    out = []
    for s in sols:
        up = [0 if not any(_apply_mod(ups[k], s[k], q)) else 1 for k in range(len(ups))]
        down = [0 if not any(_apply_mod(downs[k], s[k + 1], q)) else 1 for k in range(len(downs))]
        left = vq.left if vq.left is not TailKind.TRUNCATED else TailKind.FORWARD_ISO
        right = vq.right if vq.right is not TailKind.TRUNCATED else TailKind.BACKWARD_ISO
        out.append((SubrepLine(vq.lo, s), ArrowProfile(vq.lo, vq.hi, up, down, left, right)))
    return out


def _assert_all_pairs(vq: ZRep, sols, q: int):
    """Adjacent wedge conditions must imply the conditions for every pair of vertices."""
    table = zrep.composite_table(vq)
    lo = vq.lo
    for s in sols:
        for (i, j), m in table.items():
            if i != j and not _parallel_mod(_apply_mod(m.rows, s[i - lo], q), s[j - lo], q):
                raise LinkedChainsError(f"all-pairs condition fails for ({i}, {j}) on an adjacent solution")


def group_by_profile(points: Iterable[tuple[SubrepLine, ArrowProfile]]) -> dict[ArrowProfile, list[SubrepLine]]:
    groups: dict[ArrowProfile, list[SubrepLine]] = {}
    for w, p in points:
        groups.setdefault(p, []).append(w)
    return dict(sorted(groups.items(), key=lambda kv: kv[0].flat))


def lift_balanced(w: SubrepLine, q: int) -> SubrepLine:
    """Lift residues to integers in (-q/2, q/2], as rational vectors."""
    half = q // 2
    vecs = [tuple(Q.convert(x - q if x > half else x) for x in vec) for vec in w.vectors]
    return SubrepLine(w.lo, vecs)


def rational_oracle_points(v: ZRep, q: int, max_cells: int = DEFAULT_MAX_CELLS) -> list[tuple[SubrepLine, ArrowProfile]]:
    """Oracle points of a rational representation lifted back to Q.

    Each lift is re-checked over Q; a lift that stops being a point, or
    changes profile, is an error rather than a silent omission.
    """
    out = []
    for w, p in oracle_points(v, q, max_cells):
        lw = lift_balanced(w, q)
        if not zrep.is_subrep_line(v, lw) or profile_of(lw, v) != p:
            raise LinkedChainsError(f"F_{q} point {w.vectors} does not lift to a rational point with the same profile")
        out.append((lw, p))
    return out


def is_cosupport_of(v: ZRep, H: tuple[int, int]) -> bool:
    """Every window vertex maps injectively into some vertex of H."""
    table = zrep.composite_table(v)
    a, b = H
    return all(any(table[(i, j)].rank() == v.dim(i) for j in range(a, b + 1)) for i in v.vertices)


# --- closure deformations -------------------------------------------------


@dataclass(frozen=True)
class DeformationFamily:
    """Generators x_l + t*y_l over Q(t) degenerating to w at t = 0."""

    arrow: tuple[str, int]
    before: ArrowProfile
    after: ArrowProfile
    pivot: int | None  # the vertex j chosen by the construction
    base: SubrepLine  # rescaled generators x_l of w
    direction: SubrepLine  # y_l
    family: SubrepLine  # over Qt

    @property
    def trivial(self) -> bool:
        return self.pivot is None

    def at(self, value) -> SubrepLine:
        return SubrepLine(self.family.lo, [tuple(QT.evaluate(x, value) for x in vec) for vec in self.family.vectors])


def _solve(m: el.Matrix, rhs, what: str):
    x = m.solve(rhs)
    if x is None:
        raise ContractViolation(f"deformation hypothesis fails: {what}")
    return x


def _raise_up(v: ZRep, w: SubrepLine, i: int, b: ArrowProfile):
    f = v.field
    cos = zrep.cosupport_interval(v)
    if cos in (INFINITE, UNDETERMINED):
        raise ContractViolation("deformation hypothesis fails: no finite cosupport")
    m = cos[0]
    j = i
    while j > m and b.pair(j - 1)[0]:
        j -= 1
    nonzero_before = bool(b.pair(j - 1)[0])
    x = {l: tuple(w.at(l)) for l in v.vertices}
    start = v.lo if nonzero_before else j
    for l in range(start + 1, i + 1):
        x[l] = zrep.composite(v, start, l).apply(x[start])
        if zrep.is_zero_vector(f, x[l]):
            raise ContractViolation(f"deformation hypothesis fails: the line map into vertex {l} vanishes")
    z = _solve(zrep.composite(v, j - 1, i + 1), x[i + 1], f"x_{i + 1} is not in the image of the composite from {j - 1}")
    y = {}
    for l in v.vertices:
        if l > i:
            y[l] = tuple(f.zero for _ in range(v.dim(l)))
        elif l >= j:
            y[l] = zrep.composite(v, j - 1, l).apply(z)
        elif not nonzero_before:
            y[l] = tuple(f.zero for _ in range(v.dim(l)))
        elif l == j - 1:
            y[l] = tuple(z)
        else:
            y[l] = _solve(zrep.composite(v, l, j - 1), z, f"composite from {l} to {j - 1} does not reach z")
    return j, x, y


def deformation_witness(v: ZRep, w: SubrepLine, arrow: tuple[str, int]) -> DeformationFamily:
    """One-parameter family of lines switching on one arrow of w, verified over Q(t).

    ``arrow`` is ``("up", i)`` for the map V_i -> V_{i+1} or ``("down", i)``
    for V_{i+1} -> V_i.  Both bits of the pair at i must be zero unless the
    requested bit is already set, in which case the family is constant.
    """
    kind, i = arrow
    if kind not in (UP, DOWN):
        raise ContractViolation(f"unknown arrow kind {kind!r}")
    if v.field != Q:
        raise ContractViolation("deformations are computed over Q")
    problem = zrep.first_violation(v, ["special", "exact", "colinked"])
    if problem:
        raise ContractViolation("deformation hypothesis fails: " + problem)
    b = profile_of(w, v)
    if not v.lo <= i < v.hi:
        raise ContractViolation(f"arrow {i} lies outside the window [{v.lo}, {v.hi}]")
    if b.bit(arrow):
        zero = SubrepLine(w.lo, [tuple(Q.zero for _ in vec) for vec in w.vectors])
        fam = SubrepLine(w.lo, [tuple(QT.convert(x) for x in vec) for vec in w.vectors])
        return DeformationFamily(arrow, b, b, None, w, zero, fam)
    if b.pair(i) != (0, 0):
        raise ContractViolation(f"both bits at arrow {i} must be zero to raise {kind}")
    if kind == UP:
        j, x, y = _raise_up(v, w, i, b)
        base = SubrepLine(v.lo, [x[l] for l in v.vertices])
        direction = SubrepLine(v.lo, [y[l] for l in v.vertices])
    else:
        mv, mw = zrep.mirror(v), zrep.mirror_line(w)
        mb = profile_of(mw, mv)
        j, x, y = _raise_up(mv, mw, -i - 1, mb)
        j = -j
        base = zrep.mirror_line(SubrepLine(mv.lo, [x[l] for l in mv.vertices]))
        direction = zrep.mirror_line(SubrepLine(mv.lo, [y[l] for l in mv.vertices]))
    t = QT.t
    fam = SubrepLine(
        v.lo,
        [tuple(QT.convert(a) + t * QT.convert(c) for a, c in zip(xa, ya)) for xa, ya in zip(base.vectors, direction.vectors)],
    )
    result = DeformationFamily(arrow, b, b.raised(arrow), j, base, direction, fam)
    _verify_family(v, w, result)
    return result


def _verify_family(v: ZRep, w: SubrepLine, fam: DeformationFamily):
    vt = zrep.change_field(v, QT)
    problems = zrep.line_failures(vt, fam.family)
    if problems:
        raise ContractViolation("deformation does not give a subrepresentation over Q(t): " + problems[0])
    got = profile_of(fam.family, vt)
    if got != fam.after:
        raise ContractViolation(f"generic profile {got.label} differs from expected {fam.after.label}")
    limit = fam.at(0)
    for l in v.vertices:
        if zrep.is_zero_vector(Q, limit.at(l)) or not zrep.parallel(Q, limit.at(l), w.at(l)):
            raise ContractViolation(f"limit at t=0 does not recover W_{l}")


def specialize_family(v: ZRep, fam: DeformationFamily, tries: Sequence[int] = tuple(range(1, 25))) -> SubrepLine:
    """A rational member of the family whose profile is the generic one."""
    for c in tries:
        try:
            w = fam.at(c)
        except ZeroDivisionError:
            continue
        if zrep.is_subrep_line(v, w) and profile_of(w, v) == fam.after:
            return w
    raise ContractViolation("no tried parameter value reaches the generic stratum")


def path_to_exact(v: ZRep, w: SubrepLine) -> list[ArrowProfile]:
    """Raise zero pairs one at a time until the profile is exact."""
    profiles = [profile_of(w, v)]
    while profiles[-1].zero_pairs():
        i = profiles[-1].zero_pairs()[0]
        fam = deformation_witness(v, w, (UP, i))
        w = specialize_family(v, fam)
        profiles.append(fam.after)
    return profiles
