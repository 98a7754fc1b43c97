import pytest

from pdcbench.algebra import (
    AlgebraError,
    algebra_from_structure,
    enveloping,
    ground_algebra,
    is_algebra_hom,
    kA2,
    path_algebra,
    sample_algebras,
)
from pdcbench.linalg import ExactMatrix, FieldSpec, QQ


def test_path_algebra_a2_has_three_paths():
    a = path_algebra(QQ, 2, [("a", 1, 2)])
    assert a.dim == 3
    assert len(a.primitive_idempotents()) == 2
    assert a.radical().cols == 1


def test_loop_with_square_relation_is_dual_numbers():
    a = path_algebra(QQ, 1, [("x", 1, 1)], [{"x*x": 1}])
    assert a.dim == 2
    assert a.radical().cols == 1


def test_single_vertex_is_the_field():
    assert path_algebra(QQ, 1, []).dim == 1


def test_infinite_quotient_rejected():
    with pytest.raises(AlgebraError):
        path_algebra(QQ, 1, [("x", 1, 1)], max_length=6)


def test_malformed_relation_rejected():
    with pytest.raises(AlgebraError):
        path_algebra(QQ, 1, [("x", 1, 1)], [{"y*y": 1}])


def test_opposite_is_involutive(sample_algebra):
    a = sample_algebra
    assert a.opposite().opposite() == a
    a.opposite().verify()


def test_commutative_opposite(D):
    assert D.opposite() == D


def test_opposite_a2_reverses_the_arrow():
    op = kA2().opposite()
    rev = path_algebra(QQ, 2, [("a", 2, 1)])
    # same dimension, and the arrow now sits in e1 A e2 instead of e2 A e1
    assert op.dim == rev.dim == 3
    e1, e2, a = (op.basis_vector(i) for i in range(3))
    assert op.mul(op.mul(e1, a), e2) == a


def test_non_associative_structure_rejected_with_triple():
    c = [
        [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        [[0, 1, 0], [0, 0, 1], [0, 0, 0]],
        [[0, 0, 1], [0, 1, 0], [0, 0, 0]],
    ]
    with pytest.raises(AlgebraError, match=r"triple \(i,j,l\) = \(1,1,1\)"):
        algebra_from_structure(QQ, c, [1, 0, 0])


def test_bad_unit_rejected():
    with pytest.raises(AlgebraError):
        algebra_from_structure(QQ, [[[1]]], [2])


def test_sample_algebras_verify(sample_algebra):
    sample_algebra.verify()
    idem = sample_algebra.primitive_idempotents()
    total = [sum(x) for x in zip(*idem)]
    assert tuple(total) == sample_algebra.unit


def test_enveloping_of_ground_is_ground():
    k = ground_algebra()
    assert enveloping(k, k).dim == 1


def test_enveloping_dimension(A2, D):
    assert enveloping(A2, D).dim == 6


def test_algebra_hom_checks():
    k = ground_algebra()
    a = kA2()
    unit = ExactMatrix.column(QQ, a.unit)
    assert is_algebra_hom(unit, k, a)
    assert not is_algebra_hom(ExactMatrix.column(QQ, [1, 0, 0]), k, a)
    assert is_algebra_hom(ExactMatrix.identity(QQ, 3), a, a)


def test_prime_field_samples():
    F = FieldSpec.prime(3)
    for a in sample_algebras(F).values():
        a.verify()
        assert a.field == F
