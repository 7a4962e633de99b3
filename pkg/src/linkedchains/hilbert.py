"""Quiver Plücker ideals, multigraded Hilbert functions, smoothings and lifts.

The variety of line subrepresentations of ``v`` sits in the product of the
projective spaces P(V_i).  Its ideal is generated by the 2x2 minors of
``[composite(i, j) x_i | x_j]``, one bilinear form per coordinate pair.
Hilbert functions are computed as graded ranks of the coordinate ring,
``dim S_D - dim I_D``, by exact sparse elimination.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from math import comb, prod
from typing import Sequence

from . import exactlin as el
from . import zrep
from .errors import ContractViolation, SizeBoundError
from .exactlin import QT, FieldSpec, Matrix, Q
from .zrep import SubrepLine, TailKind, TypeVector, ZRep

MAX_DEGREE = 4
MAX_FACTORS = 4
PAIR_MODES = ("adjacent", "all")

Monomial = tuple[tuple[int, ...], ...]  # exponent vector per factor


@dataclass(frozen=True)
class Generator:
    terms: tuple[tuple[Monomial, object], ...]  # sorted by monomial, leading coefficient 1
    multidegree: tuple[int, ...]


@dataclass(frozen=True)
class MultiGradedIdeal:
    field: FieldSpec
    vertices: tuple[int, ...]
    dims: tuple[int, ...]
    generators: tuple[Generator, ...]

    def variable(self, factor: int, coord: int) -> str:
        return f"x{self.vertices[factor]}_{coord + 1}"

    def text(self, g: Generator) -> str:
        parts = []
        for mono, c in g.terms:
            factors = []
            for k, exps in enumerate(mono):
                for a, e in enumerate(exps):
                    if e:
                        factors.append(self.variable(k, a) + (f"^{e}" if e > 1 else ""))
            coeff = self.field.dump(c)
            parts.append(("" if coeff == 1 else "-" if coeff == -1 else f"{coeff}*") + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")


def _unit(n: int, a: int) -> tuple[int, ...]:
    return tuple(1 if k == a else 0 for k in range(n))


def _wedge_forms(f: FieldSpec, M: Matrix, src: int, dst: int, nfac: int, dims) -> list[dict]:
    """Entries (M x_src)_a (x_dst)_b - (M x_src)_b (x_dst)_a for a < b, as polynomials."""
    forms = []
    for a, b in itertools.combinations(range(dims[dst]), 2):
        poly: dict = {}
        for c in range(dims[src]):
            for row, col, sign in ((a, b, 1), (b, a, -1)):
                coeff = M[row, c]
                if f.is_zero(coeff):
                    continue
                mono = [tuple(0 for _ in range(dims[k])) for k in range(nfac)]
                mono[src] = _unit(dims[src], c)
                mono[dst] = tuple(x + y for x, y in zip(mono[dst], _unit(dims[dst], col)))
                key = tuple(mono)
                val = f.add(poly.get(key, f.zero), coeff if sign > 0 else f.neg(coeff))
                if f.is_zero(val):
                    poly.pop(key, None)
                else:
                    poly[key] = val
        if poly:
            forms.append(poly)
    return forms


def _normalize(f: FieldSpec, poly: dict) -> tuple:
    items = sorted(poly.items())
    lead = items[0][1]
    return tuple((m, f.div(c, lead)) for m, c in items)


def plucker_generators(v: ZRep, pair_mode: str = "all") -> MultiGradedIdeal:
    """Bilinear wedge forms for the chosen vertex pairs, both directions, deduplicated."""
    if pair_mode not in PAIR_MODES:
        raise ContractViolation(f"pair_mode must be one of {PAIR_MODES}")
    f = v.field
    verts = list(v.vertices)
    dims = [v.dim(i) for i in verts]
    nfac = len(verts)
    table = zrep.composite_table(v)
    if pair_mode == "adjacent":
        pairs = [(k, k + 1) for k in range(nfac - 1)]
    else:
        pairs = list(itertools.combinations(range(nfac), 2))
    seen, gens = set(), []
    for k, l in pairs:
        i, j = verts[k], verts[l]
        deg = tuple(1 if m in (k, l) else 0 for m in range(nfac))
        forms = _wedge_forms(f, table[(i, j)], k, l, nfac, dims) + _wedge_forms(f, table[(j, i)], l, k, nfac, dims)
        for poly in forms:
            key = _normalize(f, poly)
            if key not in seen:
                seen.add(key)
                gens.append(Generator(key, deg))
    return MultiGradedIdeal(f, tuple(verts), tuple(dims), tuple(gens))


def _monomials(n: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree ``degree`` in n variables, lexicographically descending."""
    if n == 0:
        return [()] if degree == 0 else []
    out = []
    for first in range(degree, -1, -1):
        out.extend((first,) + rest for rest in _monomials(n - 1, degree - first))
    return out


def graded_basis(dims: Sequence[int], degree: Sequence[int]) -> list[Monomial]:
    return [tuple(m) for m in itertools.product(*(_monomials(n, d) for n, d in zip(dims, degree)))]


def _check_bounds(ideal: MultiGradedIdeal, degree: Sequence[int], max_degree: int):
    if len(degree) != len(ideal.dims):
        raise ContractViolation(f"degree has {len(degree)} entries for {len(ideal.dims)} factors")
    if len(ideal.dims) > MAX_FACTORS:
        raise SizeBoundError(f"at most {MAX_FACTORS} factors are supported")
    if any(d < 0 for d in degree):
        raise ContractViolation("degrees must be nonnegative")
    if any(d > max_degree for d in degree):
        raise SizeBoundError(f"degree entries are bounded by {max_degree}")


def sparse_rank(f: FieldSpec, rows: list[dict]) -> int:
    """Rank of sparse rows (column -> nonzero value) by incremental elimination."""
    pivots: dict[int, dict] = {}
    for row in rows:
        row = dict(row)
        while row:
            lead = min(row)
            piv = pivots.get(lead)
            if piv is None:
                inv = f.inv(row[lead])
                pivots[lead] = {c: f.mul(x, inv) for c, x in row.items()}
                break
            c0 = row[lead]
            for c, x in piv.items():
                val = f.sub(row.get(c, f.zero), f.mul(c0, x))
                if f.is_zero(val):
                    row.pop(c, None)
                else:
                    row[c] = val
    return len(pivots)


def hilbert_function(ideal: MultiGradedIdeal, degree: Sequence[int], max_degree: int = MAX_DEGREE) -> int:
    """dim (S/I) in the given multidegree."""
    degree = tuple(degree)
    _check_bounds(ideal, degree, max_degree)
    basis = graded_basis(ideal.dims, degree)
    index = {m: k for k, m in enumerate(basis)}
    f = ideal.field
    rows = []
    for g in ideal.generators:
        rest = tuple(d - e for d, e in zip(degree, g.multidegree))
        if any(x < 0 for x in rest):
            continue
        for mono in graded_basis(ideal.dims, rest):
            row = {}
            for gm, c in g.terms:
                prodm = tuple(tuple(a + b for a, b in zip(x, y)) for x, y in zip(gm, mono))
                row[index[prodm]] = c
            rows.append(row)
    return len(basis) - sparse_rank(f, rows)


def expected_hilbert(r: int, degree: Sequence[int]) -> int:
    """The diagonal's value binom(sum(degree) + r - 1, r - 1)."""
    if r < 1:
        raise ContractViolation("r must be positive")
    return comb(sum(degree) + r - 1, r - 1)


def _stable_at(values: dict, box: Sequence[int], degree: tuple, order: int) -> bool:
    """Along each direction, the order-th difference over the right-most run containing degree vanishes."""
    for k, top in enumerate(box):
        if top < order:
            return False
        start = min(degree[k], top - order)
        run = []
        for m in range(start, start + order + 1):
            point = degree[:k] + (m,) + degree[k + 1 :]
            run.append(values[point])
        diff = sum((-1) ** (order - s) * comb(order, s) * run[s] for s in range(order + 1))
        if diff != 0:
            return False
    return True


def hilbert_table(v: ZRep, box: Sequence[int], r: int | None = None, pair_mode: str = "all") -> list[dict]:
    """Computed against expected values for every degree in prod(range(b + 1))."""
    ideal = plucker_generators(v, pair_mode)
    box = tuple(box)
    if len(box) != len(ideal.dims):
        raise ContractViolation(f"box has {len(box)} entries for {len(ideal.dims)} factors")
    r = r if r is not None else ideal.dims[0]
    values = {deg: hilbert_function(ideal, deg) for deg in itertools.product(*(range(b + 1) for b in box))}
    rows = []
    for deg, val in values.items():
        exp = expected_hilbert(r, deg)
        rows.append(
            {
                "degree": list(deg),
                "computed": val,
                "expected": exp,
                "equal": val == exp,
                "stable_flag": _stable_at(values, box, deg, r),
            }
        )
    return rows


def hilbert_report(r: TypeVector | Sequence[int], degree_box: Sequence[int], pair_mode: str = "all") -> list[dict]:
    """hilbert_table for the exact colinked chain dual(u(r)), tagged with r."""
    if not isinstance(r, TypeVector):
        r = TypeVector(tuple(r))
    v = zrep.dual(zrep.make_u_of_r(r))
    rows = hilbert_table(v, degree_box, r.r, pair_mode)
    return [{"r_vector": list(r.entries), **row} for row in rows]


# --- smoothings -----------------------------------------------------------


@dataclass(frozen=True)
class Smoothing:
    """A family over Q(t) whose fibre at t = 0 is ``special`` and whose generic fibre is general."""

    family: ZRep
    special: ZRep
    type_vector: TypeVector | None = None

    def specialize(self, value) -> ZRep:
        return _fibre(self.family, value)


def _fibre(fam: ZRep, value) -> ZRep:
    fwd = [el.specialize(m, value) for m in fam.fwd]
    bwd = [el.specialize(m, value) for m in fam.bwd]
    return ZRep(Q, fam.lo, fam.hi, fam.dims, fwd, bwd, fam.left, fam.right)


def check_smoothing(family: ZRep) -> Smoothing:
    """Validate regularity at 0 and generic generality, returning the Smoothing."""
    if family.field != QT:
        raise ContractViolation("a smoothing must have rational-function entries")
    for m in family.fwd + family.bwd:
        for row in m.rows:
            for x in row:
                if not QT.regular_at(x, 0):
                    raise ContractViolation(f"entry {QT.dump(x)} is not regular at t=0")
    if zrep.is_general(family) is not True:
        raise ContractViolation(zrep.check_axiom(family, "general").message())
    return Smoothing(family, _fibre(family, 0))


def make_smoothing(r: TypeVector | Sequence[int]) -> Smoothing:
    """diag(t I_R, I_S) forward and diag(I_R, t I_S) backward on [0, d]."""
    if not isinstance(r, TypeVector):
        r = TypeVector(tuple(r))
    n, t = r.r, QT.t
    fwd, bwd = [], []
    for i in range(r.d):
        R = r.R(i)
        fwd.append(Matrix.diagonal(QT, [t] * R + [QT.one] * (n - R)))
        bwd.append(Matrix.diagonal(QT, [QT.one] * R + [t] * (n - R)))
    family = ZRep(QT, 0, r.d, (n,) * (r.d + 1), fwd, bwd, TailKind.FORWARD_ISO, TailKind.BACKWARD_ISO)
    sm = check_smoothing(family)
    return Smoothing(sm.family, sm.special, r)


def _scalar_of(m: Matrix, what: str):
    c = m.is_scalar_identity()
    if c is None:
        raise ContractViolation(f"smoothing is not general: {what} is not a scalar")
    return c


def _split(A: Matrix, B: Matrix, y: Sequence):
    """y1, y0 regular at 0 with A y1 - B y0 = y, using a minor that is a unit at 0."""
    n = A.nrows
    big = A.hstack(B.scale(QT.convert(-1)))
    residue = el.specialize(big, 0)
    cols = el.pivot_columns(residue)
    if len(cols) != n:
        raise ContractViolation("split of the correction fails: residue images do not span (input not colinked)")
    minor = Matrix.from_columns(QT, [big.columns()[c] for c in cols], n)
    sol = minor.solve(y)
    if sol is None or not all(QT.regular_at(x, 0) for x in sol):
        raise ContractViolation("split of the correction fails over the local ring")
    full = [QT.zero] * big.ncols
    for c, x in zip(cols, sol):
        full[c] = x
    return tuple(full[: A.ncols]), tuple(full[A.ncols :])


def lift_subrep(s: Smoothing, w: SubrepLine) -> SubrepLine:
    """A line subrepresentation of the family over Q(t) specializing to w."""
    from .strata import profile_of

    v, fam = s.special, s.family
    p = profile_of(w, v)
    if not p.is_exact:
        raise ContractViolation(f"profile {p.label} of the line is not exact")
    cos = zrep.cosupport_interval(v)
    if cos != (v.lo, v.hi):
        raise ContractViolation("the window must be the minimal cosupport of the special fibre")
    lo, hi = v.lo, v.hi
    sinks, sources = p.sinks(), p.sources()
    src = [lo] + sources + [hi]  # src[k] is s_{k-1}
    table = zrep.composite_table(fam)
    gamma = [_scalar_of(table[(src[k + 1], t_k)] @ table[(t_k, src[k + 1])], f"composite at sink {t_k}") for k, t_k in enumerate(sinks)]
    lift = {i: tuple(QT.convert(x) for x in w.at(i)) for i in v.vertices}
    x = {src[0]: lift[src[0]]}

    def fill(k):
        """Segment from source s_{k-1} towards the neighbouring sinks."""
        base = src[k]
        left = sinks[k - 1] if k > 0 else lo
        right = sinks[k] if k < len(sinks) else hi
        for i in range(left, right + 1):
            x[i] = table[(base, i)].apply(x[base])

    fill(0)
    for j, t_j in enumerate(sinks):
        s_j = src[j + 1]
        if s_j == t_j:
            x[s_j] = x[t_j]
            fill(j + 1)
            continue
        cand = table[(s_j, t_j)].apply(lift[s_j])
        target0 = [QT.evaluate(c, 0) for c in x[t_j]]
        cand0 = [QT.evaluate(c, 0) for c in cand]
        k = next(a for a, c in enumerate(target0) if c)
        scale = target0[k] / cand0[k]
        x[s_j] = tuple(QT.convert(scale) * c for c in lift[s_j])
        diff = [a - b for a, b in zip(table[(s_j, t_j)].apply(x[s_j]), x[t_j])]
        y = tuple(c / QT.t for c in diff)
        if not all(QT.regular_at(c, 0) for c in y):
            raise ContractViolation(f"residues disagree at sink {t_j}")
        y1, y0 = _split(table[(s_j, t_j)], table[(lo, t_j)], y)
        t = QT.t
        for i in range(-1, j):
            eta = QT.one
            for m in range(i + 1, j):
                eta = eta * gamma[m]
            push = table[(lo, src[i + 1])].apply(y0)
            x[src[i + 1]] = tuple(a - t * eta * b for a, b in zip(x[src[i + 1]], push))
        x[s_j] = tuple(a - t * b for a, b in zip(x[s_j], y1))
        for k in range(j + 2):
            fill(k)
    out = SubrepLine(lo, [x[i] for i in v.vertices])
    _verify_lift(s, w, out)
    return out


def _verify_lift(s: Smoothing, w: SubrepLine, lifted: SubrepLine):
    problems = zrep.line_failures(s.family, lifted)
    if problems:
        raise ContractViolation("lift is not a subrepresentation over Q(t): " + problems[0])
    for i in s.special.vertices:
        at0 = tuple(QT.evaluate(c, 0) for c in lifted.at(i))
        if zrep.is_zero_vector(Q, at0) or not zrep.parallel(Q, at0, w.at(i)):
            raise ContractViolation(f"lift does not specialize to W_{i}")


def check_lift_at_random_points(s: Smoothing, lifted: SubrepLine, rng: random.Random, count: int = 20) -> bool:
    """Evaluate at random rational t and confirm each fibre line is a subrepresentation."""
    done = 0
    while done < count:
        value = Q.convert(rng.randint(-50, 50)) / Q.convert(rng.randint(1, 9))
        try:
            fibre = s.specialize(value)
            line = SubrepLine(lifted.lo, [tuple(QT.evaluate(c, value) for c in vec) for vec in lifted.vectors])
        except (ZeroDivisionError, ContractViolation):
            continue
        if any(zrep.is_zero_vector(Q, vec) for vec in line.vectors):
            continue
        if not zrep.is_subrep_line(fibre, line):
            return False
        done += 1
    return True


def lift_report(s: Smoothing, lifted: SubrepLine) -> dict:
    return {
        "window": [lifted.lo, lifted.hi],
        "generators": [[QT.dump(c) for c in vec] for vec in lifted.vectors],
        "constant_in_t": all(c.numer.is_ground and c.denom.is_ground for vec in lifted.vectors for c in vec),
    }
