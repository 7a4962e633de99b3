"""Exact linear algebra over Q, F_p and Q(t).

Scalars are plain Python objects owned by a field:

* ``Q``   gmpy2/sympy ``mpq`` rationals,
* ``Fp:p`` integers reduced into ``range(p)``,
* ``Qt``  sympy rational functions in one variable ``t``.

Subspaces are always kept as a reduced row-echelon basis, so two subspaces
are equal exactly when their stored bases are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Iterable, Sequence

import sympy
from sympy import QQ
from sympy.polys.fields import field as _frac_field

from .errors import ConfigurationError, ContractViolation, DimensionError, ParseError

MAX_PRIME = 97


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % k for k in range(2, int(n**0.5) + 1))


class FieldSpec:
    """Arithmetic for one exact field. Subclasses are stateless singletons per parameter."""

    name: str = ""
    native = False  # elements support +, -, *, / and truthiness directly

    def convert(self, x):
        raise NotImplementedError

    def contains(self, x) -> bool:
        raise NotImplementedError

    def is_zero(self, x) -> bool:
        return x == 0

    @cached_property
    def zero(self):
        return self.convert(0)

    @cached_property
    def one(self):
        return self.convert(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def div(self, a, b):
        if self.is_zero(b):
            raise ZeroDivisionError("division by zero in " + self.name)
        return a / b

    def inv(self, a):
        return self.div(self.one, a)

    def parse(self, text) -> object:
        raise NotImplementedError

    def dump(self, x):
        """JSON-friendly encoding of a scalar (int when integral, else string)."""
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return f"FieldSpec({self.name})"


class RationalField(FieldSpec):
    name = "Q"
    native = True

    def convert(self, x):
        if isinstance(x, QQ.dtype):
            return x
        if isinstance(x, bool):
            raise ConfigurationError("booleans are not scalars")
        if isinstance(x, int):
            return QQ(x)
        if isinstance(x, Fraction):
            return QQ(x.numerator, x.denominator)
        if isinstance(x, str):
            return self.parse(x)
        raise ConfigurationError(f"{x!r} is not a rational scalar")

    def contains(self, x) -> bool:
        return isinstance(x, QQ.dtype)

    def parse(self, text):
        if isinstance(text, int) and not isinstance(text, bool):
            return QQ(text)
        try:
            f = Fraction(str(text).strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational literal {text!r}") from exc
        return QQ(f.numerator, f.denominator)

    def dump(self, x):
        if x.denominator == 1:
            return int(x.numerator)
        return f"{int(x.numerator)}/{int(x.denominator)}"


class PrimeField(FieldSpec):
    def __init__(self, p: int):
        if not isinstance(p, int) or not _is_prime(p):
            raise ConfigurationError(f"{p!r} is not prime")
        if p > MAX_PRIME:
            raise ConfigurationError(f"prime fields are limited to p <= {MAX_PRIME}")
        self.p = p
        self.name = f"Fp:{p}"

    def convert(self, x):
        if isinstance(x, bool):
            raise ConfigurationError("booleans are not scalars")
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, (Fraction, QQ.dtype)):
            num, den = int(x.numerator), int(x.denominator)
            if den % self.p == 0:
                raise ConfigurationError(f"{x} has no image in F_{self.p}")
            return num * pow(den, -1, self.p) % self.p
        if isinstance(x, str):
            return self.parse(x)
        raise ConfigurationError(f"{x!r} is not an F_{self.p} scalar")

    def contains(self, x) -> bool:
        return type(x) is int and 0 <= x < self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in " + self.name)
        return a * pow(b, -1, self.p) % self.p

    def parse(self, text):
        return self.convert(RationalField().parse(text))

    def dump(self, x):
        return int(x)


_QT, _T = _frac_field("t", QQ)


class RationalFunctionField(FieldSpec):
    """Q(t). Elements are sympy ``FracElement`` objects, always gcd-reduced."""

    name = "Qt"
    native = True
    t = _T
    frac_field = _QT

    def convert(self, x):
        if isinstance(x, type(_T)) and x.field == _QT:
            return x
        if isinstance(x, str):
            return self.parse(x)
        return _QT(RationalField().convert(x))

    def contains(self, x) -> bool:
        return isinstance(x, type(_T)) and x.field == _QT

    def is_zero(self, x) -> bool:
        return not x

    def parse(self, text):
        if not isinstance(text, str):
            return self.convert(text)
        try:
            expr = sympy.sympify(text, locals={"t": sympy.Symbol("t")})
            return _QT.from_expr(expr)
        except (sympy.SympifyError, TypeError, ValueError, sympy.PolynomialError) as exc:
            raise ParseError(f"bad rational function literal {text!r}") from exc

    def monic_parts(self, x):
        """Numerator and denominator with the denominator scaled to be monic."""
        lc = x.denom.LC
        return x.numer.quo_ground(lc), x.denom.quo_ground(lc)

    def dump(self, x):
        num, den = self.monic_parts(x)
        if den == 1 and num.is_ground:
            return RationalField().dump(QQ.convert(num.LC) if num else QQ(0))
        ns = str(num.as_expr()).replace(" ", "")
        if den == 1:
            return ns
        return f"({ns})/({str(den.as_expr()).replace(' ', '')})"

    def evaluate(self, x, value):
        """Value of x at t = value; raises if the denominator vanishes there."""
        value = QQ.convert(value) if not isinstance(value, QQ.dtype) else value
        d = x.denom(value)
        if d == 0:
            raise ZeroDivisionError(f"{self.dump(x)} has a pole at t={value}")
        return QQ.convert(x.numer(value)) / QQ.convert(d)

    def vanishes_at(self, x, value) -> bool:
        return x.numer(value) == 0

    def regular_at(self, x, value) -> bool:
        return x.denom(value) != 0


Q = RationalField()
QT = RationalFunctionField()


def field_from_name(name: str) -> FieldSpec:
    """Parse ``Q``, ``Qt`` or ``Fp:<p>``."""
    name = name.strip()
    if name == "Q":
        return Q
    if name == "Qt":
        return QT
    if name.startswith("Fp:"):
        try:
            p = int(name[3:])
        except ValueError as exc:
            raise ParseError(f"bad field name {name!r}") from exc
        try:
            return PrimeField(p)
        except ConfigurationError as exc:
            raise ParseError(str(exc)) from exc
    raise ParseError(f"unknown field {name!r}; expected Q, Qt or Fp:<p>")


def same_field(*fields: FieldSpec) -> FieldSpec:
    first = fields[0]
    for f in fields[1:]:
        if f != first:
            raise ConfigurationError(f"mixed fields {first.name} and {f.name}")
    return first


class Matrix:
    """Immutable dense matrix; ``rows`` is a tuple of row tuples."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: FieldSpec, nrows: int, ncols: int, rows: Sequence[Sequence]):
        if len(rows) != nrows or any(len(r) != ncols for r in rows):
            raise DimensionError(f"entries do not form a {nrows}x{ncols} array")
        for r in rows:
            for x in r:
                if not field.contains(x):
                    raise ConfigurationError(f"entry {x!r} does not belong to {field.name}")
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self.rows = tuple(tuple(r) for r in rows)

    @classmethod
    def _trusted(cls, field, nrows, ncols, rows):
        m = object.__new__(cls)
        m.field, m.nrows, m.ncols = field, nrows, ncols
        m.rows = tuple(tuple(r) for r in rows)
        return m

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence], ncols: int | None = None) -> Matrix:
        conv = field.convert
        rows = [[conv(x) for x in r] for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionError(f"entries do not form a {len(rows)}x{ncols} array")
        return cls._trusted(field, len(rows), ncols, rows)

    @classmethod
    def zeros(cls, field: FieldSpec, nrows: int, ncols: int) -> Matrix:
        z = field.zero
        return cls._trusted(field, nrows, ncols, [[z] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> Matrix:
        z, o = field.zero, field.one
        return cls._trusted(field, n, n, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, field: FieldSpec, diag: Sequence) -> Matrix:
        n = len(diag)
        z = field.zero
        d = [field.convert(x) for x in diag]
        return cls._trusted(field, n, n, [[d[i] if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, field: FieldSpec, cols: Sequence[Sequence], nrows: int) -> Matrix:
        return cls._trusted(field, nrows, len(cols), [[c[i] for c in cols] for i in range(nrows)])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.shape == other.shape
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.field, self.shape, self.rows))

    def __repr__(self):
        body = "; ".join(" ".join(str(self.field.dump(x)) for x in r) for r in self.rows)
        return f"Matrix[{self.field.name}]({self.nrows}x{self.ncols}: {body})"

    def columns(self) -> list[tuple]:
        return [tuple(r[j] for r in self.rows) for j in range(self.ncols)]

    def transpose(self) -> Matrix:
        return Matrix._trusted(self.field, self.ncols, self.nrows, self.columns())

    T = property(transpose)

    def __matmul__(self, other: Matrix) -> Matrix:
        f = same_field(self.field, other.field)
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.columns()
        z = f.zero
        out = []
        if f.native:
            for r in self.rows:
                out.append([sum((a * b for a, b in zip(r, c) if a and b), z) for c in cols])
        else:
            p = f.p
            for r in self.rows:
                out.append([sum(a * b for a, b in zip(r, c)) % p for c in cols])
        return Matrix._trusted(f, self.nrows, other.ncols, out)

    def __add__(self, other: Matrix) -> Matrix:
        f = same_field(self.field, other.field)
        if self.shape != other.shape:
            raise DimensionError("shape mismatch in addition")
        return Matrix._trusted(
            f, self.nrows, self.ncols, [[f.add(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)]
        )

    def __sub__(self, other: Matrix) -> Matrix:
        f = same_field(self.field, other.field)
        if self.shape != other.shape:
            raise DimensionError("shape mismatch in subtraction")
        return Matrix._trusted(
            f, self.nrows, self.ncols, [[f.sub(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)]
        )

    def scale(self, c) -> Matrix:
        f = self.field
        c = f.convert(c)
        return Matrix._trusted(f, self.nrows, self.ncols, [[f.mul(c, a) for a in r] for r in self.rows])

    def apply(self, vec: Sequence) -> tuple:
        """Matrix times column vector."""
        if len(vec) != self.ncols:
            raise DimensionError(f"vector of length {len(vec)} for a map with {self.ncols} columns")
        f = self.field
        add, mul, z = f.add, f.mul, f.zero
        out = []
        for r in self.rows:
            acc = z
            for a, b in zip(r, vec):
                if a and b:
                    acc = add(acc, mul(a, b))
            out.append(acc)
        return tuple(out)

    def is_zero(self) -> bool:
        f = self.field
        return all(f.is_zero(x) for r in self.rows for x in r)

    def is_scalar_identity(self):
        """Return c when the matrix is c times the identity, else None."""
        if self.nrows != self.ncols:
            return None
        if self.nrows == 0:
            return self.field.one
        f = self.field
        c = self.rows[0][0]
        for i, r in enumerate(self.rows):
            for j, x in enumerate(r):
                if i == j:
                    if x != c:
                        return None
                elif not f.is_zero(x):
                    return None
        return c

    def hstack(self, other: Matrix) -> Matrix:
        f = same_field(self.field, other.field)
        if self.nrows != other.nrows:
            raise DimensionError("row count mismatch in hstack")
        return Matrix._trusted(f, self.nrows, self.ncols + other.ncols, [a + b for a, b in zip(self.rows, other.rows)])

    def vstack(self, other: Matrix) -> Matrix:
        f = same_field(self.field, other.field)
        if self.ncols != other.ncols:
            raise DimensionError("column count mismatch in vstack")
        return Matrix._trusted(f, self.nrows + other.nrows, self.ncols, self.rows + other.rows)

    def map_entries(self, fn, field: FieldSpec) -> Matrix:
        return Matrix(field, self.nrows, self.ncols, [[fn(x) for x in r] for r in self.rows])

    def rank(self) -> int:
        return rref(self)[0]

    def inverse(self) -> Matrix:
        if self.nrows != self.ncols:
            raise DimensionError("only square matrices are invertible")
        n = self.nrows
        rk, red = rref(self.hstack(Matrix.identity(self.field, n)))
        left = Matrix._trusted(self.field, n, n, [r[:n] for r in red.rows])
        if left != Matrix.identity(self.field, n):
            raise ContractViolation("matrix is singular")
        return Matrix._trusted(self.field, n, n, [r[n:] for r in red.rows])

    def solve(self, rhs: Sequence):
        """Some x with self·x = rhs (free variables set to zero), or None."""
        f = self.field
        aug = self.hstack(Matrix._trusted(f, self.nrows, 1, [[f.convert(b)] for b in rhs]))
        rk, red = rref(aug)
        x = [f.zero] * self.ncols
        for row in red.rows[:rk]:
            lead = next(j for j, v in enumerate(row) if not f.is_zero(v))
            if lead == self.ncols:
                return None
            x[lead] = row[-1]
        return tuple(x)

    def dump(self) -> list[list]:
        return [[self.field.dump(x) for x in r] for r in self.rows]


def _rref_rows(field: FieldSpec, rows: list[list], ncols: int, trace: list | None = None):
    """In-place Gauss-Jordan elimination. Returns (rank, pivot columns)."""
    nrows = len(rows)
    pivots = []
    native = field.native
    one = field.one
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pr = next((i for i in range(r, nrows) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        piv = rows[r][c]
        if trace is not None:
            trace.append((r, c, piv))
        if native:
            inv = one / piv
            prow = rows[r] = [x * inv for x in rows[r]]
            for i in range(nrows):
                if i != r:
                    a = rows[i][c]
                    if a:
                        rows[i] = [x - a * y if y else x for x, y in zip(rows[i], prow)]
        else:
            p = field.p
            inv = pow(piv, -1, p)
            prow = rows[r] = [x * inv % p for x in rows[r]]
            for i in range(nrows):
                if i != r:
                    a = rows[i][c]
                    if a:
                        rows[i] = [(x - a * y) % p for x, y in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
    return r, pivots


def rref(m: Matrix) -> tuple[int, Matrix]:
    """Rank and reduced row-echelon form (zero rows kept at the bottom)."""
    rows = [list(r) for r in m.rows]
    rank, _ = _rref_rows(m.field, rows, m.ncols)
    return rank, Matrix._trusted(m.field, m.nrows, m.ncols, rows)


def pivot_columns(m: Matrix) -> list[int]:
    rows = [list(r) for r in m.rows]
    return _rref_rows(m.field, rows, m.ncols)[1]


@dataclass(frozen=True)
class Subspace:
    """A subspace of field^ambient_dim stored by its RREF basis (rows)."""

    field: FieldSpec
    ambient_dim: int
    basis: tuple[tuple, ...]

    def __post_init__(self):
        f = self.field
        last = -1
        for row in self.basis:
            if len(row) != self.ambient_dim:
                raise DimensionError("basis row length differs from ambient dimension")
            lead = next((j for j, x in enumerate(row) if not f.is_zero(x)), None)
            if lead is None or lead <= last or row[lead] != f.one:
                raise ContractViolation("basis is not in reduced row-echelon form")
            if any(not f.is_zero(other[lead]) for other in self.basis if other is not row):
                raise ContractViolation("pivot column has more than one nonzero entry")
            last = lead

    @classmethod
    def _trusted(cls, field, ambient_dim, basis):
        s = object.__new__(cls)
        object.__setattr__(s, "field", field)
        object.__setattr__(s, "ambient_dim", ambient_dim)
        object.__setattr__(s, "basis", basis)
        return s

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> list[int]:
        f = self.field
        return [next(j for j, x in enumerate(row) if not f.is_zero(x)) for row in self.basis]

    def matrix(self) -> Matrix:
        return Matrix._trusted(self.field, self.dim, self.ambient_dim, self.basis)

    def vectors(self) -> list[tuple]:
        return list(self.basis)

    def contains(self, vec: Sequence) -> bool:
        if len(vec) != self.ambient_dim:
            raise DimensionError("vector length differs from ambient dimension")
        f = self.field
        v = list(vec)
        for row, p in zip(self.basis, self.pivots):
            c = v[p]
            if not f.is_zero(c):
                v = [f.sub(x, f.mul(c, y)) for x, y in zip(v, row)]
        return all(f.is_zero(x) for x in v)

    def issubspace(self, other: Subspace) -> bool:
        _check_ambient(self, other)
        return all(other.contains(v) for v in self.basis)

    def complement_basis(self) -> list[tuple]:
        """Standard basis vectors on the non-pivot columns, in increasing order."""
        f = self.field
        piv = set(self.pivots)
        n = self.ambient_dim
        return [tuple(f.one if k == j else f.zero for k in range(n)) for j in range(n) if j not in piv]

    def intersect(self, other: Subspace) -> Subspace:
        return intersect(self, other)

    def sum(self, other: Subspace) -> Subspace:
        return subspace_sum(self, other)

    def dump(self) -> dict:
        return {"ambient_dim": self.ambient_dim, "basis": [[self.field.dump(x) for x in r] for r in self.basis]}


def span(field: FieldSpec, vectors: Iterable[Sequence], ambient_dim: int) -> Subspace:
    if field.native:
        rows = [list(v) for v in vectors]
    else:
        conv = field.convert
        rows = [[conv(x) for x in v] for v in vectors]
    for r in rows:
        if len(r) != ambient_dim:
            raise DimensionError("vector length differs from ambient dimension")
    rank, _ = _rref_rows(field, rows, ambient_dim)
    return Subspace._trusted(field, ambient_dim, tuple(tuple(r) for r in rows[:rank]))


def zero_space(field: FieldSpec, n: int) -> Subspace:
    return Subspace(field, n, ())


def full_space(field: FieldSpec, n: int) -> Subspace:
    return Subspace(field, n, Matrix.identity(field, n).rows)


def standard_vector(field: FieldSpec, n: int, j: int) -> tuple:
    return tuple(field.one if k == j else field.zero for k in range(n))


def _check_ambient(a: Subspace, b: Subspace):
    same_field(a.field, b.field)
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError(f"ambient dimensions {a.ambient_dim} and {b.ambient_dim} differ")


def kernel(m: Matrix) -> Subspace:
    f = m.field
    rank, red = rref(m)
    pivots = []
    for row in red.rows[:rank]:
        pivots.append(next(j for j, x in enumerate(row) if not f.is_zero(x)))
    free = [j for j in range(m.ncols) if j not in set(pivots)]
    vecs = []
    for j in free:
        v = [f.zero] * m.ncols
        v[j] = f.one
        for row, p in zip(red.rows, pivots):
            v[p] = f.neg(row[j])
        vecs.append(v)
    return span(f, vecs, m.ncols)


def image(m: Matrix) -> Subspace:
    return span(m.field, m.columns(), m.nrows)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    return span(a.field, list(a.basis) + list(b.basis), a.ambient_dim)


def annihilator(s: Subspace) -> Matrix:
    """Matrix whose kernel is s (rows span the annihilator)."""
    if s.dim == 0:
        return Matrix.identity(s.field, s.ambient_dim)
    ann = kernel(s.matrix())
    return Matrix._trusted(s.field, ann.dim, s.ambient_dim, ann.basis)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    if a.dim == 0 or b.dim == 0:
        return zero_space(a.field, a.ambient_dim)
    return kernel(annihilator(a).vstack(annihilator(b)))


def image_of(m: Matrix, s: Subspace) -> Subspace:
    """m applied to the subspace s."""
    if s.ambient_dim != m.ncols:
        raise DimensionError("subspace does not live in the domain of the map")
    return span(m.field, [m.apply(v) for v in s.basis], m.nrows)


def preimage(m: Matrix, s: Subspace) -> Subspace:
    """{x : m·x in s}."""
    same_field(m.field, s.field)
    if s.ambient_dim != m.nrows:
        raise DimensionError(f"subspace ambient {s.ambient_dim} differs from codomain {m.nrows}")
    if s.dim == s.ambient_dim:
        return full_space(m.field, m.ncols)
    return kernel(annihilator(s) @ m)


def extend_to_dim(inner: Subspace, outer: Subspace, n: int) -> Subspace:
    """Smallest-pivot-first S with inner <= S <= outer and dim S = n."""
    _check_ambient(inner, outer)
    if not inner.issubspace(outer):
        raise ContractViolation("inner subspace is not contained in outer subspace")
    if not inner.dim <= n <= outer.dim:
        raise ContractViolation(f"target dimension {n} outside [{inner.dim}, {outer.dim}]")
    current = inner
    for row in outer.basis:
        if current.dim == n:
            break
        if not current.contains(row):
            current = span(inner.field, list(current.basis) + [row], inner.ambient_dim)
    return current


@dataclass(frozen=True)
class SpecializationReport:
    """Outcome of comparing rref-then-evaluate with evaluate-then-rref over Q(t)."""

    value: object
    vanishing_pivots: tuple[tuple[int, int], ...]
    reduced_then_evaluated: Matrix | None
    evaluated_then_reduced: Matrix
    commutes: bool

    @property
    def safe(self) -> bool:
        return not self.vanishing_pivots


def specialize(m: Matrix, value=0) -> Matrix:
    """Evaluate a Q(t) matrix at t = value."""
    if m.field != QT:
        raise ConfigurationError("specialization needs a Qt matrix")
    try:
        rows = [[QT.evaluate(x, value) for x in r] for r in m.rows]
    except ZeroDivisionError as exc:
        raise ContractViolation(str(exc)) from exc
    return Matrix._trusted(Q, m.nrows, m.ncols, rows)


def specialization_report(m: Matrix, value=0) -> SpecializationReport:
    """Detect pivots of the Q(t) elimination that vanish at t = value."""
    if m.field != QT:
        raise ConfigurationError("specialization report needs a Qt matrix")
    value = Q.convert(value)
    for r in m.rows:
        for x in r:
            if not QT.regular_at(x, value):
                raise ContractViolation(f"entry {QT.dump(x)} is not regular at t={value}")
    rows = [list(r) for r in m.rows]
    trace: list = []
    _rref_rows(QT, rows, m.ncols, trace)
    bad = tuple((r, c) for r, c, piv in trace if QT.vanishes_at(piv, value))
    red = Matrix._trusted(QT, m.nrows, m.ncols, rows)
    try:
        red_eval = specialize(red, value)
    except ContractViolation:
        red_eval = None
    eval_red = rref(specialize(m, value))[1]
    return SpecializationReport(value, bad, red_eval, eval_red, red_eval == eval_red)
