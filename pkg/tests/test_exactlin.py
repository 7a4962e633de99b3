import itertools

import pytest

from linkedchains import exactlin as el
from linkedchains.errors import ConfigurationError, ContractViolation, DimensionError, ParseError
from linkedchains.exactlin import QT, Q, Matrix, PrimeField

F2 = PrimeField(2)


def e(f, n, j):
    return el.standard_vector(f, n, j)


def all_vectors(f, n):
    return list(itertools.product(range(f.p), repeat=n))


def all_subspaces(f, n):
    seen = set()
    for k in range(n + 1):
        for vecs in itertools.combinations(all_vectors(f, n), k):
            s = el.span(f, vecs, n)
            if s.basis not in seen:
                seen.add(s.basis)
                yield s


def all_matrices(f, nr, nc):
    for entries in itertools.product(range(f.p), repeat=nr * nc):
        rows = [entries[r * nc : (r + 1) * nc] for r in range(nr)]
        yield Matrix.from_rows(f, rows, nc) if nr else Matrix.zeros(f, 0, nc)


def test_field_names_and_parsing():
    assert el.field_from_name("Q") == Q
    assert el.field_from_name("Fp:7") == PrimeField(7)
    assert el.field_from_name("Qt") == QT
    with pytest.raises(ParseError):
        el.field_from_name("Fp:8")
    with pytest.raises(ParseError):
        el.field_from_name("R")
    assert Q.parse("-3/6") == Q.convert(-1) / 2
    assert PrimeField(5).parse("7") == 2
    assert QT.dump(QT.parse("(t^2-1)/(2*t-2)")) == QT.dump(QT.parse("(t+1)/2"))


def test_rref_trivial_cases():
    rank, red = el.rref(Matrix.identity(Q, 3))
    assert rank == 3 and red == Matrix.identity(Q, 3)
    assert el.rref(Matrix.zeros(Q, 2, 2))[0] == 0
    assert el.rref(Matrix.from_rows(Q, [[1, 0], [0, 0]]))[0] == 1


def test_rref_is_canonical():
    m = Matrix.from_rows(Q, [[2, 4, 2], [1, 2, 3], [3, 6, 5]])
    _, red = el.rref(m)
    assert red.dump() == [[1, 2, 0], [0, 0, 1], [0, 0, 0]]
    assert el.pivot_columns(m) == [0, 2]


def test_kernel_image_of_projection():
    p = Matrix.diagonal(Q, [1, 0])
    assert el.kernel(p) == el.span(Q, [e(Q, 2, 1)], 2)
    assert el.image(p) == el.span(Q, [e(Q, 2, 0)], 2)
    assert el.kernel(Matrix.identity(Q, 3)) == el.zero_space(Q, 3)


def test_intersection_and_sum():
    a = el.span(Q, [e(Q, 2, 0)], 2)
    b = el.span(Q, [e(Q, 2, 1)], 2)
    assert el.intersect(a, b) == el.zero_space(Q, 2)
    assert el.intersect(a, a) == a and el.subspace_sum(a, a) == a
    assert el.subspace_sum(a, b) == el.full_space(Q, 2)


def test_dimension_formula_exhaustive_f2_plane():
    subs = list(all_subspaces(F2, 2))
    assert len(subs) == 5
    for a, b in itertools.product(subs, repeat=2):
        assert el.subspace_sum(a, b).dim + el.intersect(a, b).dim == a.dim + b.dim


def test_preimage_trivial_cases():
    s = el.span(Q, [(1, 1)], 2)
    assert el.preimage(Matrix.identity(Q, 2), s) == s
    assert el.preimage(Matrix.diagonal(Q, [1, 0]), el.zero_space(Q, 2)) == el.span(Q, [e(Q, 2, 1)], 2)


@pytest.mark.parametrize("n,m", [(1, 2), (2, 2), (2, 3), (3, 2)])
def test_preimage_against_vector_enumeration(n, m):
    for mat in all_matrices(F2, m, n):
        for s in all_subspaces(F2, m):
            pre = el.preimage(mat, s)
            brute = [x for x in all_vectors(F2, n) if s.contains(mat.apply(x))]
            assert len(brute) == 2**pre.dim
            assert all(pre.contains(x) for x in brute)
            inter = el.intersect(s, el.image(mat))
            assert pre.dim == el.kernel(mat).dim + inter.dim


def test_extend_to_dim_examples():
    inner = el.span(Q, [(1, 1, 0)], 3)
    assert el.extend_to_dim(inner, inner, 1) == inner
    assert el.extend_to_dim(el.zero_space(Q, 3), el.full_space(Q, 3), 2) == el.span(Q, [e(Q, 3, 0), e(Q, 3, 1)], 3)


def test_extend_to_dim_exhaustive_f2():
    subs = list(all_subspaces(F2, 3))
    for inner, outer in itertools.product(subs, repeat=2):
        if not inner.issubspace(outer):
            continue
        for n in range(inner.dim, outer.dim + 1):
            s = el.extend_to_dim(inner, outer, n)
            assert s.dim == n and inner.issubspace(s) and s.issubspace(outer)
        with pytest.raises(ContractViolation):
            el.extend_to_dim(inner, outer, outer.dim + 1)


def test_contract_errors():
    with pytest.raises(DimensionError):
        Matrix.identity(Q, 2) @ Matrix.identity(Q, 3)
    with pytest.raises(ConfigurationError):
        Matrix.identity(Q, 2) @ Matrix.identity(F2, 2)
    with pytest.raises(ContractViolation):
        Matrix.diagonal(Q, [1, 0]).inverse()


def test_inverse_and_solve():
    m = Matrix.from_rows(Q, [[2, 1], [1, 1]])
    assert m @ m.inverse() == Matrix.identity(Q, 2)
    assert m.solve((3, 2)) == (1, 1)
    assert Matrix.diagonal(Q, [1, 0]).solve((0, 1)) is None


def test_rational_function_entries_and_specialization():
    t = QT.t
    m = Matrix.from_rows(QT, [[t, 1], [0, 1 / (t + 1)]])
    assert el.specialize(m, 0) == Matrix.from_rows(Q, [[0, 1], [0, 1]])
    with pytest.raises(ContractViolation):
        el.specialize(Matrix.from_rows(QT, [[1 / t]]), 0)
    assert m.rank() == 2
