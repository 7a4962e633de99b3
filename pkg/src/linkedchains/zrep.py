"""Finitely presented representations of the Z^1 quiver.

A :class:`ZRep` stores vector spaces ``V_lo .. V_hi``, the rightward maps
``up(i): V_i -> V_{i+1}`` and the leftward maps ``down(i): V_{i+1} -> V_i``
for ``lo <= i < hi``, and a :class:`TailKind` on each side saying how the
representation continues outside the window.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from . import exactlin as el
from .errors import (
    ClassificationError,
    ContractViolation,
    DimensionError,
    ParseError,
    SimpleBasisError,
)
from .exactlin import FieldSpec, Matrix, Q, Subspace


class TailKind(str, Enum):
    FORWARD_ISO = "ForwardIso"  # rightward arrows are identities, leftward are zero
    BACKWARD_ISO = "BackwardIso"  # leftward arrows are identities, rightward are zero
    TRUNCATED = "Truncated"

    def flipped(self) -> TailKind:
        if self is TailKind.FORWARD_ISO:
            return TailKind.BACKWARD_ISO
        if self is TailKind.BACKWARD_ISO:
            return TailKind.FORWARD_ISO
        return self


class _Marker:
    def __init__(self, name: str):
        self.name = name

    def __repr__(self):
        return self.name

    def __bool__(self):
        raise TypeError(f"{self.name} has no truth value")


UNDETERMINED = _Marker("UNDETERMINED")
INFINITE = _Marker("INFINITE")


class TailUndetermined(ContractViolation):
    """A map outside the window was requested across a truncated tail."""


@dataclass(frozen=True)
class TypeVector:
    entries: tuple[int, ...]

    def __post_init__(self):
        e = tuple(int(x) for x in self.entries)
        object.__setattr__(self, "entries", e)
        if not e:
            raise ContractViolation("type vector must be nonempty")
        if any(x < 0 for x in e):
            raise ContractViolation("type vector entries must be nonnegative")
        if e[0] == 0 or e[-1] == 0:
            raise ContractViolation("type vector must have nonzero first and last entries")

    @property
    def d(self) -> int:
        return len(self.entries) - 1

    @property
    def r(self) -> int:
        return sum(self.entries)

    def R(self, i: int) -> int:
        """r_0 + ... + r_i (zero for i < 0)."""
        return sum(self.entries[: max(i + 1, 0)])

    def S(self, i: int) -> int:
        """r_{i+1} + ... + r_d."""
        return sum(self.entries[max(i + 1, 0) :])

    def __getitem__(self, i):
        return self.entries[i]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def all_type_vectors(max_r: int, max_d: int) -> list[TypeVector]:
    """Every type vector with total <= max_r and length <= max_d + 1."""
    out = []

    def rec(prefix, remaining, length):
        if len(prefix) == length:
            if prefix[-1] > 0:
                out.append(TypeVector(tuple(prefix)))
            return
        lo = 1 if not prefix else 0
        for x in range(lo, remaining + 1):
            rec(prefix + [x], remaining - x, length)

    for d in range(max_d + 1):
        rec([], max_r, d + 1)
    return sorted(out, key=lambda tv: (tv.d, tv.entries))


@dataclass(frozen=True)
class ZRep:
    field: FieldSpec
    lo: int
    hi: int
    dims: tuple[int, ...]
    fwd: tuple[Matrix, ...]
    bwd: tuple[Matrix, ...]
    left: TailKind = TailKind.TRUNCATED
    right: TailKind = TailKind.TRUNCATED

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(self.dims))
        object.__setattr__(self, "fwd", tuple(self.fwd))
        object.__setattr__(self, "bwd", tuple(self.bwd))
        object.__setattr__(self, "left", TailKind(self.left))
        object.__setattr__(self, "right", TailKind(self.right))
        if self.hi < self.lo:
            raise DimensionError("window must satisfy lo <= hi")
        n = self.hi - self.lo
        if len(self.dims) != n + 1 or len(self.fwd) != n or len(self.bwd) != n:
            raise DimensionError("dims/fwd/bwd lengths do not match the window")
        for k in range(n):
            a, b = self.dims[k], self.dims[k + 1]
            if self.fwd[k].shape != (b, a):
                raise DimensionError(f"forward map at {self.lo + k} has shape {self.fwd[k].shape}, expected {(b, a)}")
            if self.bwd[k].shape != (a, b):
                raise DimensionError(f"backward map at {self.lo + k} has shape {self.bwd[k].shape}, expected {(a, b)}")
            el.same_field(self.field, self.fwd[k].field, self.bwd[k].field)

    @property
    def vertices(self) -> range:
        return range(self.lo, self.hi + 1)

    @property
    def arrows(self) -> range:
        return range(self.lo, self.hi)

    @property
    def truncated(self) -> bool:
        return TailKind.TRUNCATED in (self.left, self.right)

    def dim(self, i: int) -> int:
        if i < self.lo:
            self._tail_side(i)
            return self.dims[0]
        if i > self.hi:
            self._tail_side(i)
            return self.dims[-1]
        return self.dims[i - self.lo]

    def space(self, i: int) -> tuple[int, int]:
        return i, self.dim(i)

    def _tail_side(self, i: int) -> TailKind:
        kind = self.left if i < self.lo else self.right
        if kind is TailKind.TRUNCATED:
            raise TailUndetermined(f"vertex {i} lies beyond a truncated tail")
        return kind

    def up(self, i: int) -> Matrix:
        """The rightward map V_i -> V_{i+1}."""
        if self.lo <= i < self.hi:
            return self.fwd[i - self.lo]
        kind = self._tail_side(i if i < self.lo else i + 1)
        n = self.dims[0] if i < self.lo else self.dims[-1]
        if kind is TailKind.FORWARD_ISO:
            return Matrix.identity(self.field, n)
        return Matrix.zeros(self.field, n, n)

    def down(self, i: int) -> Matrix:
        """The leftward map V_{i+1} -> V_i."""
        if self.lo <= i < self.hi:
            return self.bwd[i - self.lo]
        kind = self._tail_side(i if i < self.lo else i + 1)
        n = self.dims[0] if i < self.lo else self.dims[-1]
        if kind is TailKind.BACKWARD_ISO:
            return Matrix.identity(self.field, n)
        return Matrix.zeros(self.field, n, n)

    def with_tails(self, left: TailKind, right: TailKind) -> ZRep:
        return ZRep(self.field, self.lo, self.hi, self.dims, self.fwd, self.bwd, left, right)


@dataclass(frozen=True)
class SubrepLine:
    """One nonzero generator per window vertex, spanning a line W_i in V_i."""

    lo: int
    vectors: tuple[tuple, ...]

    def __post_init__(self):
        object.__setattr__(self, "vectors", tuple(tuple(v) for v in self.vectors))

    @property
    def hi(self) -> int:
        return self.lo + len(self.vectors) - 1

    def at(self, i: int) -> tuple:
        return self.vectors[i - self.lo]


def parallel(field: FieldSpec, a: Sequence, b: Sequence) -> bool:
    """a ∧ b = 0 (one of them is zero or they are proportional)."""
    n = len(a)
    for i in range(n):
        for j in range(i + 1, n):
            if not field.is_zero(field.sub(field.mul(a[i], b[j]), field.mul(a[j], b[i]))):
                return False
    return True


def is_zero_vector(field: FieldSpec, v: Sequence) -> bool:
    return all(field.is_zero(x) for x in v)


def line_failures(v: ZRep, w: SubrepLine) -> list[str]:
    """Violations of the adjacent wedge conditions for w inside v."""
    f = v.field
    out = []
    if w.lo != v.lo or w.hi != v.hi:
        return [f"line window [{w.lo}, {w.hi}] differs from representation window [{v.lo}, {v.hi}]"]
    for i in v.vertices:
        x = w.at(i)
        if len(x) != v.dim(i):
            return [f"generator at vertex {i} has length {len(x)}, expected {v.dim(i)}"]
        if is_zero_vector(f, x):
            out.append(f"generator at vertex {i} is zero")
    for i in v.arrows:
        if not parallel(f, v.up(i).apply(w.at(i)), w.at(i + 1)):
            out.append(f"forward map at {i} does not send W_{i} into W_{i + 1}")
        if not parallel(f, v.down(i).apply(w.at(i + 1)), w.at(i)):
            out.append(f"backward map at {i} does not send W_{i + 1} into W_{i}")
    return out


def is_subrep_line(v: ZRep, w: SubrepLine) -> bool:
    return not line_failures(v, w)


def line_as_rep(v: ZRep, w: SubrepLine) -> ZRep:
    """The induced dimension-1 representation, in the generator bases."""
    f = v.field
    fwd, bwd = [], []
    for i in v.arrows:
        fwd.append(Matrix.from_rows(f, [[_ratio(f, v.up(i).apply(w.at(i)), w.at(i + 1))]]))
        bwd.append(Matrix.from_rows(f, [[_ratio(f, v.down(i).apply(w.at(i + 1)), w.at(i))]]))
    return ZRep(f, v.lo, v.hi, (1,) * len(v.dims), fwd, bwd, v.left, v.right)


def _ratio(field: FieldSpec, image_vec: Sequence, target: Sequence):
    """The scalar c with image_vec = c * target."""
    k = next(j for j, x in enumerate(target) if not field.is_zero(x))
    return field.div(image_vec[k], target[k])


def make_u_of_r(r: TypeVector | Sequence[int], field: FieldSpec = Q, shift: int = 0) -> ZRep:
    """The canonical exact linked chain u(r) on the window [shift, shift + d]."""
    if not isinstance(r, TypeVector):
        r = TypeVector(tuple(r))
    n = r.r
    fwd, bwd = [], []
    for i in range(r.d):
        R = r.R(i)
        fwd.append(Matrix.diagonal(field, [1] * R + [0] * (n - R)))
        bwd.append(Matrix.diagonal(field, [0] * R + [1] * (n - R)))
    return ZRep(field, shift, shift + r.d, (n,) * (r.d + 1), fwd, bwd, TailKind.BACKWARD_ISO, TailKind.FORWARD_ISO)


def dual(v: ZRep) -> ZRep:
    """Transpose every map; rightward and leftward roles swap."""
    return ZRep(
        v.field,
        v.lo,
        v.hi,
        v.dims,
        [m.T for m in v.bwd],
        [m.T for m in v.fwd],
        v.left.flipped(),
        v.right.flipped(),
    )


def change_field(v: ZRep, field: FieldSpec) -> ZRep:
    """Same representation with every entry converted into another field."""
    fwd = [m.map_entries(field.convert, field) for m in v.fwd]
    bwd = [m.map_entries(field.convert, field) for m in v.bwd]
    return ZRep(field, v.lo, v.hi, v.dims, fwd, bwd, v.left, v.right)


def translate(v: ZRep, t: int) -> ZRep:
    return ZRep(v.field, v.lo + t, v.hi + t, v.dims, v.fwd, v.bwd, v.left, v.right)


def mirror(v: ZRep) -> ZRep:
    """Reflect the quiver through the origin: vertex i becomes -i."""
    n = v.hi - v.lo
    fwd = [v.bwd[n - 1 - k] for k in range(n)]
    bwd = [v.fwd[n - 1 - k] for k in range(n)]
    return ZRep(v.field, -v.hi, -v.lo, tuple(reversed(v.dims)), fwd, bwd, v.right.flipped(), v.left.flipped())


def mirror_line(w: SubrepLine) -> SubrepLine:
    return SubrepLine(-w.hi, tuple(reversed(w.vectors)))


def extend_window(v: ZRep, lo: int, hi: int) -> ZRep:
    """Write the tail maps out explicitly so the window becomes [lo, hi]."""
    if lo > v.lo or hi < v.hi:
        raise ContractViolation("extended window must contain the original one")
    dims = tuple(v.dim(i) for i in range(lo, hi + 1))
    fwd = [v.up(i) for i in range(lo, hi)]
    bwd = [v.down(i) for i in range(lo, hi)]
    return ZRep(v.field, lo, hi, dims, fwd, bwd, v.left, v.right)


def restrict_window(v: ZRep, lo: int, hi: int) -> ZRep:
    if lo < v.lo or hi > v.hi or lo > hi:
        raise ContractViolation("restricted window must lie inside the original one")
    a, b = lo - v.lo, hi - v.lo
    return ZRep(v.field, lo, hi, v.dims[a : b + 1], v.fwd[a:b], v.bwd[a:b], TailKind.TRUNCATED, TailKind.TRUNCATED)


def conjugate(v: ZRep, changes: dict[int, Matrix]) -> ZRep:
    """Change basis at each window vertex: maps become P_{i+1} f P_i^{-1}."""
    inv = {i: changes[i].inverse() for i in v.vertices}
    fwd = [changes[i + 1] @ v.up(i) @ inv[i] for i in v.arrows]
    bwd = [changes[i] @ v.down(i) @ inv[i + 1] for i in v.arrows]
    return ZRep(v.field, v.lo, v.hi, v.dims, fwd, bwd, v.left, v.right)


def random_invertible(field: FieldSpec, n: int, rng: random.Random, spread: int = 3) -> Matrix:
    """Product of random unit lower and upper triangular matrices times a diagonal."""
    f = field
    low = [[f.one if i == j else (f.convert(rng.randint(-spread, spread)) if j < i else f.zero) for j in range(n)] for i in range(n)]
    upp = [[f.one if i == j else (f.convert(rng.randint(-spread, spread)) if j > i else f.zero) for j in range(n)] for i in range(n)]
    diag = []
    for _ in range(n):
        c = 0
        while f.is_zero(f.convert(c)):
            c = rng.choice([-3, -2, -1, 1, 2, 3])
        diag.append(c)
    L = Matrix(f, n, n, low)
    U = Matrix(f, n, n, upp)
    return L @ Matrix.diagonal(f, diag) @ U


def random_conjugate(v: ZRep, rng: random.Random) -> tuple[ZRep, dict[int, Matrix]]:
    changes = {i: random_invertible(v.field, v.dim(i), rng) for i in v.vertices}
    return conjugate(v, changes), changes


def composite(v: ZRep, i: int, j: int) -> Matrix:
    """The map V_i -> V_j obtained by following arrows from i to j."""
    m = Matrix.identity(v.field, v.dim(i))
    if j > i:
        for k in range(i, j):
            m = v.up(k) @ m
    elif j < i:
        for k in range(i - 1, j - 1, -1):
            m = v.down(k) @ m
    return m


# --- axioms -------------------------------------------------------------

AXIOM_LABELS = {
    "special": "(A)",
    "linked": "(B)",
    "colinked": "(B∨)",
    "exact": "(exact)",
    "general": "(general)",
    "pure": "(pure)",
}


@dataclass(frozen=True)
class AxiomCheck:
    axiom: str
    failures: tuple[str, ...]
    undetermined: tuple[str, ...]

    @property
    def status(self):
        if self.failures:
            return False
        if self.undetermined:
            return UNDETERMINED
        return True

    def message(self) -> str:
        label = AXIOM_LABELS[self.axiom]
        if self.failures:
            return f"{label} fails at {self.failures[0]}"
        if self.undetermined:
            return f"{label} undetermined at {self.undetermined[0]}"
        return f"{label} holds"


def _arrow_range(v: ZRep, include_tails: bool) -> list[int]:
    lo = v.lo - 1 if include_tails and v.left is not TailKind.TRUNCATED else v.lo
    hi = v.hi if include_tails and v.right is not TailKind.TRUNCATED else v.hi - 1
    return list(range(lo, hi + 1))


def _vertex_range(v: ZRep) -> list[int]:
    lo = v.lo - 1 if v.left is not TailKind.TRUNCATED else v.lo
    hi = v.hi + 1 if v.right is not TailKind.TRUNCATED else v.hi
    return list(range(lo, hi + 1))


def _try(fn, *args):
    try:
        return fn(*args)
    except TailUndetermined:
        return None


def check_axiom(v: ZRep, axiom: str) -> AxiomCheck:
    fails: list[str] = []
    unknown: list[str] = []
    if axiom == "special":
        for i in _arrow_range(v, True):
            if not (v.down(i) @ v.up(i)).is_zero():
                fails.append(f"vertex {i}")
            elif not (v.up(i) @ v.down(i)).is_zero():
                fails.append(f"vertex {i + 1}")
    elif axiom == "exact":
        for i in _arrow_range(v, True):
            up, down = v.up(i), v.down(i)
            if el.kernel(up) != el.image(down):
                fails.append(f"vertex {i}")
            elif el.kernel(down) != el.image(up):
                fails.append(f"vertex {i + 1}")
    elif axiom == "general":
        for i in _arrow_range(v, False):
            a = (v.down(i) @ v.up(i)).is_scalar_identity()
            b = (v.up(i) @ v.down(i)).is_scalar_identity()
            if a is None or b is None or v.field.is_zero(a) or v.field.is_zero(b) or a != b:
                fails.append(f"arrow {i}")
    elif axiom == "pure":
        if len(set(v.dims)) > 1:
            k = next(k for k in range(1, len(v.dims)) if v.dims[k] != v.dims[0])
            fails.append(f"vertex {v.lo + k}")
    elif axiom in ("linked", "colinked"):
        for i in _vertex_range(v):
            n = v.dim(i)
            if axiom == "linked":
                parts = [_try(lambda k: el.kernel(v.down(k)), i - 1), _try(lambda k: el.kernel(v.up(k)), i)]
                known = [p for p in parts if p is not None]
                meet = known[0] if known else el.full_space(v.field, n)
                for p in known[1:]:
                    meet = el.intersect(meet, p)
                if meet.dim == 0:
                    continue
            else:
                parts = [_try(lambda k: el.image(v.down(k)), i), _try(lambda k: el.image(v.up(k)), i - 1)]
                known = [p for p in parts if p is not None]
                total = known[0] if known else el.zero_space(v.field, n)
                for p in known[1:]:
                    total = el.subspace_sum(total, p)
                if total.dim == n:
                    continue
            (unknown if None in parts else fails).append(f"vertex {i}")
    else:
        raise ValueError(f"unknown axiom {axiom!r}")
    return AxiomCheck(axiom, tuple(fails), tuple(unknown))


def is_special(v: ZRep):
    return check_axiom(v, "special").status


def is_linked(v: ZRep):
    s = check_axiom(v, "special").status
    if s is False:
        return False
    b = check_axiom(v, "linked").status
    if b is False:
        return False
    return UNDETERMINED if UNDETERMINED in (s, b) else True


def is_colinked(v: ZRep):
    s = check_axiom(v, "special").status
    if s is False:
        return False
    b = check_axiom(v, "colinked").status
    if b is False:
        return False
    return UNDETERMINED if UNDETERMINED in (s, b) else True


def is_exact(v: ZRep):
    return check_axiom(v, "exact").status


def is_pure(v: ZRep):
    return check_axiom(v, "pure").status


def is_general(v: ZRep):
    """Opposite composites are equal nonzero scalars at every window arrow."""
    return check_axiom(v, "general").status


def first_violation(v: ZRep, axioms: Sequence[str]) -> str | None:
    for ax in axioms:
        chk = check_axiom(v, ax)
        if chk.status is not True:
            return chk.message()
    return None


# --- support ------------------------------------------------------------


def _surjective(m: Matrix) -> bool:
    return m.rank() == m.nrows


def _injective(m: Matrix) -> bool:
    return m.rank() == m.ncols


def composite_table(v: ZRep) -> dict[tuple[int, int], Matrix]:
    """composite(v, i, j) for every pair of window vertices, built incrementally."""
    table = {}
    for i in v.vertices:
        m = Matrix.identity(v.field, v.dim(i))
        table[(i, i)] = m
        for j in range(i, v.hi):
            m = v.up(j) @ m
            table[(i, j + 1)] = m
        m = table[(i, i)]
        for j in range(i - 1, v.lo - 1, -1):
            m = v.down(j) @ m
            table[(i, j)] = m
    return table


def _minimal_interval(v: ZRep, covers) -> tuple[int, int]:
    verts = list(v.vertices)
    ok = {(j, i): covers(j, i) for j in verts for i in verts}
    for length in range(len(verts)):
        for a in verts[: len(verts) - length]:
            cand = range(a, a + length + 1)
            if all(any(ok[(j, i)] for j in cand) for i in verts):
                return (a, a + length)
    return (v.lo, v.hi)


def support_interval(v: ZRep):
    """Minimal interval H with every V_i reached surjectively from some j in H."""
    if v.truncated:
        return UNDETERMINED
    if (v.right is TailKind.BACKWARD_ISO and v.dims[-1] > 0) or (v.left is TailKind.FORWARD_ISO and v.dims[0] > 0):
        return INFINITE
    table = composite_table(v)
    return _minimal_interval(v, lambda j, i: _surjective(table[(j, i)]))


def cosupport_interval(v: ZRep):
    """Minimal interval H with every V_i mapping injectively into some j in H."""
    if v.truncated:
        return UNDETERMINED
    if (v.right is TailKind.FORWARD_ISO and v.dims[-1] > 0) or (v.left is TailKind.BACKWARD_ISO and v.dims[0] > 0):
        return INFINITE
    table = composite_table(v)
    return _minimal_interval(v, lambda j, i: _injective(table[(i, j)]))


# --- classification -----------------------------------------------------


def _linked_side(v: ZRep) -> tuple[ZRep, bool]:
    """Return (linked representation, whether it is the dual of v), checking axioms."""
    if v.truncated:
        raise ClassificationError("classification needs non-truncated tails")
    for ax in ("special", "exact", "pure"):
        chk = check_axiom(v, ax)
        if chk.status is not True:
            raise ClassificationError(chk.message())
    linked = check_axiom(v, "linked")
    if linked.status is True:
        return v, False
    if check_axiom(v, "colinked").status is True:
        return dual(v), True
    raise ClassificationError(linked.message())


def _analyze(v: ZRep) -> tuple[TypeVector, ZRep, bool, int]:
    lv, dualized = _linked_side(v)
    sup = support_interval(lv)
    if sup is INFINITE:
        raise ClassificationError("representation has no finite support")
    a, b = sup
    n = lv.dim(a)
    entries = []
    for i in range(a, b + 1):
        entries.append(n - lv.up(i - 1).rank() - lv.down(i).rank())
    if any(x < 0 for x in entries) or sum(entries) != n:
        raise ClassificationError(f"rank data {entries} inconsistent with dimension {n}")
    return TypeVector(tuple(entries)), lv, dualized, a


def classify(v: ZRep) -> TypeVector:
    """Type vector r with v equivalent to a translate of u(r) (or its dual)."""
    return _analyze(v)[0]


def anchored_type(v: ZRep) -> tuple[TypeVector, int, bool]:
    """(type vector, first vertex of the minimal (co)support, whether v was dualized)."""
    r, _, dualized, a = _analyze(v)
    return r, a, dualized


@dataclass(frozen=True)
class SimpleBasis:
    """Blocks B_j (vertex anchor + j) and isomorphisms from the canonical model.

    ``changes[i]`` maps the canonical space at vertex i to V_i; its columns
    are the pushed-forward blocks in block order.
    """

    type_vector: TypeVector
    anchor: int
    blocks: tuple[tuple[tuple, ...], ...]
    changes: dict
    target: ZRep
    dualized: bool
    strategy: str


def verify_isomorphism(v: ZRep, target: ZRep, changes: dict[int, Matrix]) -> bool:
    """v.up(i) = P_{i+1} target.up(i) P_i^{-1} and likewise for down, on v's window."""
    inv = {i: changes[i].inverse() for i in v.vertices}
    for i in v.arrows:
        if v.up(i) != changes[i + 1] @ target.up(i) @ inv[i]:
            return False
        if v.down(i) != changes[i] @ target.down(i) @ inv[i + 1]:
            return False
    return True


def _blocks(lv: ZRep, a: int, r: TypeVector, strategy: str) -> list[list[tuple]]:
    f = lv.field
    blocks = []
    for k in range(r.d + 1):
        i = a + k
        n = lv.dim(i)
        occupied = el.subspace_sum(el.image(lv.up(i - 1)), el.image(lv.down(i)))
        pool: list[tuple] = []
        if strategy == "preimage" and k > 0 and blocks[k - 1]:
            prev = el.span(f, blocks[k - 1], lv.dim(i - 1))
            pool = list(el.preimage(lv.down(i - 1), prev).basis)
        pool += occupied.complement_basis()
        picked = []
        cur = occupied
        for row in pool:
            if cur.dim == n:
                break
            if not cur.contains(row):
                picked.append(row)
                cur = el.subspace_sum(cur, el.span(f, [row], n))
        if len(picked) != r[k]:
            raise SimpleBasisError(f"block at vertex {i} has {len(picked)} vectors, expected {r[k]}")
        blocks.append(picked)
    return blocks


def _changes(lv: ZRep, a: int, r: TypeVector, blocks) -> dict[int, Matrix]:
    f = lv.field
    table = composite_table(lv)
    changes = {}
    for i in lv.vertices:
        cols = []
        for k, blk in enumerate(blocks):
            push = table[(a + k, i)]
            cols.extend(push.apply(b) for b in blk)
        P = Matrix.from_columns(f, cols, lv.dim(i))
        if P.rank() != lv.dim(i) or P.ncols != lv.dim(i):
            raise SimpleBasisError(f"pushed-forward family is not a basis at vertex {i}")
        changes[i] = P
    return changes


def simple_basis(v: ZRep, strategy: str = "complement") -> SimpleBasis:
    """Simple basis and the isomorphism with u(classify(v)), verified on the window.

    ``strategy`` is ``complement`` (coordinate complements, smallest pivot
    first) or ``preimage`` (complements inside preimages of the previous
    block); ``complement`` falls back to ``preimage`` when verification fails.
    """
    r, lv, dualized, a = _analyze(v)
    target = extend_window(make_u_of_r(r, v.field, shift=a), min(lv.lo, a), max(lv.hi, a + r.d))
    order = [strategy] if strategy == "preimage" else ["complement", "preimage"]
    last_err: Exception | None = None
    for strat in order:
        try:
            blocks = _blocks(lv, a, r, strat)
            changes = _changes(lv, a, r, blocks)
        except SimpleBasisError as exc:
            last_err = exc
            continue
        if not verify_isomorphism(lv, target, changes):
            last_err = SimpleBasisError("isomorphism with the canonical model does not round-trip")
            continue
        if dualized:
            changes = {i: m.T.inverse() for i, m in changes.items()}
            target_v = dual(target)
            if not verify_isomorphism(v, target_v, changes):
                raise SimpleBasisError("dual isomorphism does not round-trip")
        else:
            target_v = target
        return SimpleBasis(r, a, tuple(tuple(b) for b in blocks), changes, target_v, dualized, strat)
    raise last_err  # type: ignore[misc]


def transport(target: ZRep, changes: dict[int, Matrix], lo: int, hi: int) -> ZRep:
    """Move target through the isomorphism onto the window [lo, hi]."""
    inv = {i: changes[i].inverse() for i in range(lo, hi + 1)}
    fwd = [changes[i + 1] @ target.up(i) @ inv[i] for i in range(lo, hi)]
    bwd = [changes[i] @ target.down(i) @ inv[i + 1] for i in range(lo, hi)]
    dims = tuple(target.dim(i) for i in range(lo, hi + 1))
    return ZRep(target.field, lo, hi, dims, fwd, bwd, target.left, target.right)


# --- JSON -----------------------------------------------------------------


def to_dict(v: ZRep) -> dict:
    return {
        "field": v.field.name,
        "window": [v.lo, v.hi],
        "dims": list(v.dims),
        "fwd": [m.dump() for m in v.fwd],
        "bwd": [m.dump() for m in v.bwd],
        "tails": {"left": v.left.value, "right": v.right.value},
    }


def _matrix(field: FieldSpec, rows, shape) -> Matrix:
    nr, nc = shape
    if nr == 0 or nc == 0:
        return Matrix.zeros(field, nr, nc)
    return Matrix.from_rows(field, [[field.parse(x) for x in r] for r in rows], nc)


def from_dict(data: dict, field: FieldSpec | None = None) -> ZRep:
    try:
        f = field or el.field_from_name(data.get("field", "Q"))
        lo, hi = (int(x) for x in data["window"])
        dims = [int(x) for x in data["dims"]]
        if len(dims) != hi - lo + 1:
            raise ParseError("dims length does not match window")
        fwd = [_matrix(f, m, (dims[k + 1], dims[k])) for k, m in enumerate(data.get("fwd", []))]
        bwd = [_matrix(f, m, (dims[k], dims[k + 1])) for k, m in enumerate(data.get("bwd", []))]
        tails = data.get("tails", {})
        left = TailKind(tails.get("left", "Truncated"))
        right = TailKind(tails.get("right", "Truncated"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed representation JSON: {exc}") from exc
    try:
        return ZRep(f, lo, hi, dims, fwd, bwd, left, right)
    except DimensionError as exc:
        raise ParseError(str(exc)) from exc


def dumps(v: ZRep) -> str:
    return json.dumps(to_dict(v), ensure_ascii=False)


def loads(text: str, field: FieldSpec | None = None) -> ZRep:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return from_dict(data, field)


def line_to_dict(field: FieldSpec, w: SubrepLine) -> dict:
    return {"lo": w.lo, "vectors": [[field.dump(x) for x in vec] for vec in w.vectors]}


def line_from_dict(field: FieldSpec, data: dict) -> SubrepLine:
    try:
        return SubrepLine(int(data["lo"]), [[field.parse(x) for x in vec] for vec in data["vectors"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed line JSON: {exc}") from exc
