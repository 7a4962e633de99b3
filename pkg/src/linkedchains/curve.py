"""Section towers of line bundles on a curve with two components meeting at one node.

Each component is described by the pole orders at the node that its
sections can have.  For a rational component with the node at infinity the
sections of a degree-m bundle are polynomials of degree at most m, and the
value at the node is the coefficient of x^m.  The tower index i moves
degree from Y to Z: ``L^i|_Y`` has degree ``deg_Y - i`` and ``L^i|_Z`` has
degree ``deg_Z + i``.

Global sections are pairs of component sections whose node values agree
through the gluing scalar.  The rightward map keeps the Z part and drops
the Y part; the leftward map does the opposite.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field as dc_field, replace
from typing import Iterator, Sequence

import sympy

from . import exactlin as el
from . import zrep
from .errors import ContractViolation, ParseError, SizeBoundError
from .exactlin import FieldSpec, Matrix, PrimeField, Q, Subspace
from .zrep import TailKind, ZRep

RATIONAL_EXPLICIT = "RationalExplicit"
PROFILE_ONLY = "ProfileOnly"
DEFAULT_SEARCH_BOUND = 10**6


@dataclass(frozen=True)
class NodalCurve:
    g_Y: int = 0
    g_Z: int = 0
    model: str = RATIONAL_EXPLICIT

    def __post_init__(self):
        if self.g_Y < 0 or self.g_Z < 0:
            raise ContractViolation("component genera are nonnegative")
        if self.model not in (RATIONAL_EXPLICIT, PROFILE_ONLY):
            raise ContractViolation(f"unknown curve model {self.model!r}")
        if self.model == RATIONAL_EXPLICIT and (self.g_Y, self.g_Z) != (0, 0):
            raise ContractViolation("explicit section spaces need two rational components")

    @property
    def g(self) -> int:
        return self.g_Y + self.g_Z


@dataclass(frozen=True)
class Twist:
    component: str  # "Y" or "Z"
    point: object  # a rational coordinate on the affine part; the node is at infinity
    multiplicity: int


@dataclass(frozen=True)
class CurveBundle:
    multidegree: tuple[int, int]
    gluing: object = 1
    twists: tuple[Twist, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "multidegree", tuple(int(x) for x in self.multidegree))
        g = Q.convert(self.gluing)
        if g == 0:
            raise ContractViolation("gluing scalar must be nonzero")
        object.__setattr__(self, "gluing", g)
        object.__setattr__(self, "twists", _merge_twists(self.twists))

    def twist_total(self, component: str) -> int:
        return sum(t.multiplicity for t in self.twists if t.component == component)

    @property
    def deg_Y(self) -> int:
        return self.multidegree[0] + self.twist_total("Y")

    @property
    def deg_Z(self) -> int:
        return self.multidegree[1] + self.twist_total("Z")

    @property
    def degree(self) -> int:
        return self.deg_Y + self.deg_Z


def _merge_twists(twists: Sequence[Twist]) -> tuple[Twist, ...]:
    total: dict[tuple[str, object], int] = {}
    for t in twists:
        if t.component not in ("Y", "Z"):
            raise ContractViolation(f"twist component must be Y or Z, got {t.component!r}")
        if t.point is None or t.point == "N":
            raise ContractViolation("twists at the node are not allowed")
        key = (t.component, Q.convert(t.point))
        total[key] = total.get(key, 0) + int(t.multiplicity)
    items = sorted((k, m) for k, m in total.items() if m)
    return tuple(Twist(c, p, m) for (c, p), m in items)


def canonical_bundle(c: NodalCurve) -> CurveBundle:
    """Multidegree (2 g_Y - 1, 2 g_Z - 1)."""
    return CurveBundle((2 * c.g_Y - 1, 2 * c.g_Z - 1))


def serre_dual(c: NodalCurve, b: CurveBundle) -> CurveBundle:
    """omega tensor the inverse of b: degrees and twists negated, gluing inverted."""
    w = canonical_bundle(c)
    md = (w.multidegree[0] - b.multidegree[0], w.multidegree[1] - b.multidegree[1])
    tw = tuple(Twist(t.component, t.point, -t.multiplicity) for t in b.twists)
    return CurveBundle(md, 1 / b.gluing, tw)


def point_twist(b: CurveBundle, component: str, point, multiplicity: int = -1) -> CurveBundle:
    """b(multiplicity * P) for a point P away from the node."""
    if point is None or point == "N":
        raise ContractViolation("the twisting point must differ from the node")
    return replace(b, twists=b.twists + (Twist(component, point, multiplicity),))


# --- component models -----------------------------------------------------


@dataclass(frozen=True)
class PoleOrders:
    """Orders k in {k >= start} minus ``missing``; sections of index i use k <= top0 + slope * i."""

    start: int
    missing: tuple[int, ...]
    top0: int
    slope: int

    def top(self, i: int) -> int:
        return self.top0 + self.slope * i

    def orders(self, i: int) -> list[int]:
        return [k for k in range(self.start, self.top(i) + 1) if k not in self.missing]

    def value_index(self, i: int) -> int | None:
        orders = self.orders(i)
        return len(orders) - 1 if orders and orders[-1] == self.top(i) else None


def rational_components(b: CurveBundle) -> tuple[PoleOrders, PoleOrders]:
    return PoleOrders(0, (), b.deg_Y, -1), PoleOrders(0, (), b.deg_Z, 1)


# --- towers ---------------------------------------------------------------


@dataclass(frozen=True)
class SectionTower:
    rep: ZRep  # truncated tails; beyond the window the maps point away injectively
    components: tuple[PoleOrders, PoleOrders]
    bases: dict  # vertex -> Matrix whose columns span H^0 inside the ambient coordinates
    injective_up: dict  # vertex -> whether up(i) must be injective
    injective_down: dict  # vertex -> whether down(i - 1) must be injective

    @property
    def window(self) -> tuple[int, int]:
        return (self.rep.lo, self.rep.hi)

    @property
    def dims(self) -> list[int]:
        return list(self.rep.dims)


def default_window(b: CurveBundle) -> tuple[int, int]:
    """The vertices where both partial degrees are nonnegative, padded by one."""
    a, c = -b.deg_Z, b.deg_Y
    return (min(a, c) - 1, max(a, c) + 1)


def _ambient(comps, i):
    Y, Z = comps
    return Y.orders(i), Z.orders(i)


def _h0_basis(f: FieldSpec, comps, gluing, i) -> Matrix:
    Y, Z = comps
    oy, oz = _ambient(comps, i)
    n = len(oy) + len(oz)
    row = [f.zero] * n
    vy, vz = Y.value_index(i), Z.value_index(i)
    if vy is not None:
        row[vy] = f.one
    if vz is not None:
        row[len(oy) + vz] = f.neg(f.convert(gluing))
    if n == 0:
        return Matrix.zeros(f, 0, 0)
    ker = el.kernel(Matrix.from_rows(f, [row], n))
    return Matrix.from_columns(f, ker.vectors(), n) if ker.dim else Matrix.zeros(f, n, 0)


def _ambient_map(f: FieldSpec, comps, src: int, dst: int, keep: str) -> Matrix:
    """Coordinate map keeping one component's function and dropping the other."""
    sy, sz = _ambient(comps, src)
    ty, tz = _ambient(comps, dst)
    rows = [[f.zero] * (len(sy) + len(sz)) for _ in range(len(ty) + len(tz))]
    if keep == "Z":
        for a, k in enumerate(sz):
            rows[len(ty) + tz.index(k)][len(sy) + a] = f.one
    else:
        for a, k in enumerate(sy):
            if k in ty:
                rows[ty.index(k)][a] = f.one
    return Matrix._trusted(f, len(ty) + len(tz), len(sy) + len(sz), rows)


def _in_bases(f: FieldSpec, target: Matrix, image: Matrix) -> Matrix:
    cols = []
    for col in image.columns():
        x = target.solve(col)
        if x is None:
            raise ContractViolation("a tower map leaves the space of global sections")
        cols.append(x)
    return Matrix.from_columns(f, cols, target.ncols) if cols else Matrix.zeros(f, target.ncols, 0)


def tower_from_components(
    comps: tuple[PoleOrders, PoleOrders], gluing, window: tuple[int, int], field: FieldSpec = Q
) -> SectionTower:
    f = field
    lo, hi = window
    bases = {i: _h0_basis(f, comps, gluing, i) for i in range(lo, hi + 1)}
    fwd, bwd = [], []
    for i in range(lo, hi):
        up = _ambient_map(f, comps, i, i + 1, "Z")
        down = _ambient_map(f, comps, i + 1, i, "Y")
        fwd.append(_in_bases(f, bases[i + 1], up @ bases[i]))
        bwd.append(_in_bases(f, bases[i], down @ bases[i + 1]))
    dims = [bases[i].ncols for i in range(lo, hi + 1)]
    rep = ZRep(f, lo, hi, dims, fwd, bwd, TailKind.TRUNCATED, TailKind.TRUNCATED)
    Y, Z = comps
    inj_up = {i: Y.top(i) <= 0 for i in range(lo, hi + 1)}
    inj_down = {i: Z.top(i) <= 0 for i in range(lo, hi + 1)}
    return SectionTower(rep, comps, bases, inj_up, inj_down)


def _require_explicit(c: NodalCurve):
    if c.model != RATIONAL_EXPLICIT:
        raise ContractViolation("explicit section spaces need the RationalExplicit model")


def build_tower(c: NodalCurve, b: CurveBundle, window: tuple[int, int] | None = None, field: FieldSpec = Q) -> SectionTower:
    """Tower of global sections on the window, with its structural checks applied."""
    _require_explicit(c)
    need = default_window(b)
    window = tuple(window) if window is not None else need
    if window[0] > need[0] or window[1] < need[1]:
        raise ContractViolation(f"window {list(window)} must contain the padded core {list(need)}")
    tower = tower_from_components(rational_components(b), b.gluing, window, field)
    for problem in tower_problems(tower):
        raise ContractViolation(problem)
    return tower


def tower_problems(tower: SectionTower) -> list[str]:
    """Opposite composites vanish, and the required maps are injective."""
    v = tower.rep
    out = []
    for i in v.arrows:
        if not (v.down(i) @ v.up(i)).is_zero() or not (v.up(i) @ v.down(i)).is_zero():
            out.append(f"opposite composites do not vanish at arrow {i}")
        if tower.injective_up[i] and v.up(i).rank() != v.dim(i):
            out.append(f"rightward map at {i} is not injective although deg L^{i}|_Y <= 0")
        if tower.injective_down[i + 1] and v.down(i).rank() != v.dim(i + 1):
            out.append(f"leftward map into {i} is not injective although deg L^{i + 1}|_Z <= 0")
    return out


def section_polynomials(b: CurveBundle, tower: SectionTower, i: int) -> list[tuple]:
    """Global sections at vertex i as pairs of rational functions in x (node at infinity)."""
    x = sympy.Symbol("x")
    oy, oz = _ambient(tower.components, i)

    def weights(comp):
        num, den = sympy.Integer(1), sympy.Integer(1)
        for t in b.twists:
            if t.component == comp:
                p = sympy.Rational(int(t.point.numerator), int(t.point.denominator))
                if t.multiplicity < 0:
                    num *= (x - p) ** (-t.multiplicity)
                else:
                    den *= (x - p) ** t.multiplicity
        return num, den

    ny, dy = weights("Y")
    nz, dz = weights("Z")
    out = []
    for col in tower.bases[i].columns():
        qy = sum(sympy.Rational(int(col[a].numerator), int(col[a].denominator)) * x**k for a, k in enumerate(oy))
        qz = sum(sympy.Rational(int(col[len(oy) + a].numerator), int(col[len(oy) + a].denominator)) * x**k for a, k in enumerate(oz))
        out.append((sympy.simplify(qy * ny / dy), sympy.simplify(qz * nz / dz)))
    return out


# --- sequences ------------------------------------------------------------


@dataclass(frozen=True)
class ProfileFixture:
    """Dimension data supplied from outside, optionally with a matrix realization."""

    curve: NodalCurve
    multidegree: tuple[int, int]
    window: tuple[int, int]
    dims: tuple[int, ...]
    rep: ZRep | None = None
    note: str = ""
    expected: dict = dc_field(default_factory=dict)


def check_plateau_shape(c: NodalCurve, multidegree: Sequence[int], window: Sequence[int], dims: Sequence[int]) -> list[str]:
    """Unit steps away from the plateau and the plateau value, after moving to multidegree (d, 0)."""
    d = sum(multidegree)
    if d <= 2 * c.g - 2:
        return []
    shift = multidegree[1]
    h = {i + shift: x for i, x in zip(range(window[0], window[1] + 1), dims)}
    out = []
    for i in sorted(h):
        if i + 1 in h and i >= 2 * c.g_Z and not h[i] <= h[i + 1] <= h[i] + 1:
            out.append(f"step from {i - shift} to {i + 1 - shift} is not 0 or 1")
        if i - 1 in h and i <= d - 2 * c.g_Y and not h[i] <= h[i - 1] <= h[i] + 1:
            out.append(f"step from {i - shift} to {i - 1 - shift} is not 0 or 1")
        if 2 * c.g_Z - 1 <= i <= d - 2 * c.g_Y + 1 and h[i] != d - c.g + 1:
            out.append(f"value {h[i]} at {i - shift} differs from the plateau value {d - c.g + 1}")
    return out


def h0_sequence(c: NodalCurve, b: CurveBundle | ProfileFixture, window: tuple[int, int] | None = None) -> list[int]:
    if isinstance(b, ProfileFixture):
        problems = check_plateau_shape(b.curve, b.multidegree, b.window, b.dims)
        if problems:
            raise ContractViolation("fixture rejected: " + problems[0])
        return list(b.dims)
    _require_explicit(c)
    window = tuple(window) if window is not None else default_window(b)
    tower = tower_from_components(rational_components(b), b.gluing, window)
    return tower.dims


# --- pure subrepresentations ----------------------------------------------


def winU_construct(rep: ZRep, n: int, plateau: tuple[int, int]) -> dict[int, Subspace]:
    """Pure subrepresentation of dimension n grown outward from a plateau of dimension n."""
    f = rep.field
    m, M = plateau
    if not (rep.lo <= m <= M <= rep.hi):
        raise ContractViolation(f"plateau {list(plateau)} must lie in the window [{rep.lo}, {rep.hi}]")
    for i in range(m, M + 1):
        if rep.dim(i) != n:
            raise ContractViolation(f"dimension {rep.dim(i)} at plateau vertex {i} differs from n = {n}")
    for i in range(M, rep.hi):
        if rep.dim(i + 1) < rep.dim(i):
            raise ContractViolation(f"dimensions decrease right of the plateau at vertex {i + 1}")
    for i in range(m, rep.lo, -1):
        if rep.dim(i - 1) < rep.dim(i):
            raise ContractViolation(f"dimensions decrease left of the plateau at vertex {i - 1}")
    W = {i: el.full_space(f, n) for i in range(m, M + 1)}
    for i in range(M, rep.hi):
        inner = el.image_of(rep.up(i), W[i])
        outer = el.preimage(rep.down(i), W[i])
        W[i + 1] = el.extend_to_dim(inner, outer, n)
    for i in range(m, rep.lo, -1):
        inner = el.image_of(rep.down(i - 1), W[i])
        outer = el.preimage(rep.up(i - 1), W[i])
        W[i - 1] = el.extend_to_dim(inner, outer, n)
    W = dict(sorted(W.items()))
    problem = subrep_problem(rep, W)
    if problem:
        raise ContractViolation(problem)
    return W


def subrep_problem(rep: ZRep, W: dict[int, Subspace]) -> str | None:
    for i in rep.arrows:
        if not el.image_of(rep.up(i), W[i]).issubspace(W[i + 1]):
            return f"rightward map at {i} leaves the chosen subspaces"
        if not el.image_of(rep.down(i), W[i + 1]).issubspace(W[i]):
            return f"leftward map at {i} leaves the chosen subspaces"
    return None


def _subspaces(f: PrimeField, m: int, k: int) -> Iterator[list[tuple]]:
    """Bases (RREF rows) of all k-dimensional subspaces of F_q^m."""
    q = f.p
    for piv in itertools.combinations(range(m), k):
        free = [(r, c) for r in range(k) for c in range(piv[r] + 1, m) if c not in piv]
        for vals in itertools.product(range(q), repeat=len(free)):
            rows = [[0] * m for _ in range(k)]
            for r, c in enumerate(piv):
                rows[r][c] = 1
            for (r, c), x in zip(free, vals):
                rows[r][c] = x
            yield [tuple(r) for r in rows]


def _sandwich(f: PrimeField, inner: Subspace, outer: Subspace, n: int) -> Iterator[Subspace]:
    """All n-dimensional S with inner <= S <= outer."""
    if not inner.issubspace(outer) or not inner.dim <= n <= outer.dim:
        return
    comp, cur = [], inner
    for vec in outer.vectors():
        if not cur.contains(vec):
            comp.append(vec)
            cur = el.subspace_sum(cur, el.span(f, [vec], inner.ambient_dim))
    k = n - inner.dim
    for rows in _subspaces(f, len(comp), k):
        vecs = [tuple(sum(a * b for a, b in zip(r, col)) % f.p for col in zip(*comp)) for r in rows] if comp else []
        yield el.span(f, inner.vectors() + vecs, inner.ambient_dim)


def pure_subreps(rep: ZRep, n: int, bound: int = DEFAULT_SEARCH_BOUND) -> Iterator[dict[int, Subspace]]:
    """Every pure n-dimensional subrepresentation over a prime field, by chain search."""
    f = rep.field
    if not isinstance(f, PrimeField):
        raise ContractViolation("exhaustive search needs a prime field")
    verts = list(rep.vertices)
    if any(rep.dim(i) < n for i in verts):
        return
    visited = [0]

    def dfs(k, chain):
        visited[0] += 1
        if visited[0] > bound:
            raise SizeBoundError(f"subspace chain search exceeded {bound} nodes")
        if k == len(verts):
            yield dict(zip(verts, chain))
            return
        i = verts[k - 1]
        inner = el.image_of(rep.up(i), chain[-1])
        outer = el.preimage(rep.down(i), chain[-1])
        for S in _sandwich(f, inner, outer, n):
            yield from dfs(k + 1, chain + [S])

    for rows in _subspaces(f, rep.dim(verts[0]), n):
        yield from dfs(1, [el.span(f, rows, rep.dim(verts[0]))])


def oracle_max_pure(rep: ZRep, q: int, bound: int = DEFAULT_SEARCH_BOUND) -> H0Value:
    """Largest n with a pure n-dimensional subrepresentation over F_q, with a witness and its support."""
    rq = rep if rep.field == PrimeField(q) else zrep.change_field(rep, PrimeField(q))
    upper = min(rq.dims)
    for n in range(upper, 0, -1):
        for W in pure_subreps(rq, n, bound):
            return H0Value(n, upper, "oracle", "exact", W, support_of_subrep(rq, W))
    return H0Value(0, upper, "oracle", "exact")


def support_of_subrep(rep: ZRep, W: dict[int, Subspace]) -> tuple[int, int]:
    """Minimal interval H such that every W_i is reached surjectively from W_j, j in H."""
    table = zrep.composite_table(rep)
    verts = list(rep.vertices)

    def covers(j, i):
        return el.image_of(table[(j, i)], W[j]) == W[i]

    for length in range(len(verts)):
        for a in verts[: len(verts) - length]:
            if all(any(covers(j, i) for j in range(a, a + length + 1)) for i in verts):
                return (a, a + length)
    return (rep.lo, rep.hi)


# --- frak h^0 -------------------------------------------------------------


@dataclass(frozen=True)
class H0Value:
    value: int
    upper_bound: int
    mode: str
    certificate: str  # "exact" or "lower_bound"
    witness: dict | None = None
    support: tuple[int, int] | None = None

    def to_dict(self) -> dict:
        out = {"value": self.value, "upper_bound": self.upper_bound, "mode": self.mode, "certificate": self.certificate}
        if self.support is not None:
            out["support"] = list(self.support)
        return out


def frak_h0(c: NodalCurve, b: CurveBundle, mode: str = "construct", q: int = 3, bound: int = DEFAULT_SEARCH_BOUND) -> H0Value:
    """Maximum dimension of a pure subrepresentation of the section tower."""
    _require_explicit(c)
    d = b.degree
    if mode == "oracle":
        return oracle_max_pure(build_tower(c, b, field=PrimeField(q)).rep, q, bound)
    if mode != "construct":
        raise ContractViolation(f"unknown mode {mode!r}")
    if d > 2 * c.g - 2:
        n = d - c.g + 1
        shift = -b.deg_Z
        plateau = (2 * c.g_Z - 1 + shift, d - 2 * c.g_Y + 1 + shift)
        lo, hi = default_window(b)
        tower = build_tower(c, b, (min(lo, plateau[0]), max(hi, plateau[1])))
        W = winU_construct(tower.rep, n, plateau)
        upper = min(tower.dims)
        return H0Value(n, upper, "construct", "exact" if n == upper else "lower_bound", W)
    tower = build_tower(c, b)
    upper = min(tower.dims)
    return H0Value(0, upper, "construct", "exact" if upper == 0 else "lower_bound", None)


def rr_record(h0: H0Value, h1: H0Value, deg: int, g: int) -> dict:
    expected = deg - g + 1
    rr_applies = not (0 <= deg <= 2 * g - 2) or g <= 1
    return {
        "frak_h0": h0.value,
        "frak_h1": h1.value,
        "deg": deg,
        "g": g,
        "riemann_ok": h0.value >= expected,
        "rr_ok": (h0.value - h1.value == expected) if rr_applies else None,
        "certificates": {"h0": h0.to_dict(), "h1": h1.to_dict()},
    }


def rr_report(c: NodalCurve, b: CurveBundle, mode: str = "construct", q: int = 3) -> dict:
    h0 = frak_h0(c, b, mode, q)
    h1 = frak_h0(c, serre_dual(c, b), mode, q)
    return rr_record(h0, h1, b.degree, c.g)


def check_desigualdade(c: NodalCurve, b: CurveBundle, component: str, point, mode: str = "construct", q: int = 3) -> bool:
    """frak_h0(L) - 1 <= frak_h0(L(-P)) <= frak_h0(L)."""
    before = frak_h0(c, b, mode, q).value
    after = frak_h0(c, point_twist(b, component, point), mode, q).value
    return before - 1 <= after <= before


def random_bundle(rng: random.Random, max_deg: int = 3) -> CurveBundle:
    md = (rng.randint(-max_deg, max_deg), rng.randint(-max_deg, max_deg))
    gluing = Q.convert(rng.choice([1, 2, 3, -1, -2])) / Q.convert(rng.choice([1, 2, 3]))
    return CurveBundle(md, gluing)


# --- fixtures -------------------------------------------------------------


def fixture_from_dict(data: dict, field: FieldSpec | None = None) -> ProfileFixture:
    try:
        curve = NodalCurve(int(data["g_Y"]), int(data["g_Z"]), PROFILE_ONLY)
        window = tuple(int(x) for x in data["window"])
        dims = tuple(int(x) for x in data["dims"])
        md = tuple(int(x) for x in data.get("multidegree", (0, 0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed profile fixture: {exc}") from exc
    if len(dims) != window[1] - window[0] + 1:
        raise ParseError("fixture dims do not match its window")
    rep = None
    if "matrices" in data:
        mats = data["matrices"]
        rep = zrep.from_dict(
            {"field": data.get("field", "Q"), "window": list(window), "dims": list(dims), "fwd": mats["fwd"], "bwd": mats["bwd"]},
            field,
        )
    return ProfileFixture(curve, md, window, dims, rep, data.get("note", ""), data.get("expected", {}))


def load_fixture(path: str) -> ProfileFixture:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from exc
    return fixture_from_dict(data)


def fixture_h0(fx: ProfileFixture, q: int = 3, bound: int = DEFAULT_SEARCH_BOUND) -> H0Value:
    if fx.rep is None:
        raise ContractViolation("fixture has no matrix realization to search")
    return oracle_max_pure(fx.rep, q, bound)


def rr_report_fixtures(line: ProfileFixture, dual: ProfileFixture, q: int = 3) -> dict:
    """Riemann-Roch record from a bundle fixture and the fixture of its Serre dual."""
    rec = rr_record(fixture_h0(line, q), fixture_h0(dual, q), sum(line.multidegree), line.curve.g)
    if line.note:
        rec["note"] = line.note
    return rec
