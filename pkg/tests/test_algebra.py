"""
Tests for finite fields, SL matrices and their point actions.
"""

import numpy as np
import pytest

from algebra import (FieldElem, FieldError, SLMatrix, base_generating_set, certify_generation, determinant,
                     element_from_coeffs, enumerate_points, field_inv, field_spec, format_matrix,
                     k_cycle_element, multiplicative_order, parse_matrix, perm_from_matrix,
                     primitive_element, random_sl_matrix, sl_order)
from experiment_config import BaseStyle, HKind
from group_engine import make_rng
from perm_core import Parity, compose, cycle_type, order, parity


def test_gf8_arithmetic():
    """x * x^2 = x^3 = x + 1 in GF(2)[x]/(x^3 + x + 1)."""
    gf8 = field_spec(2, 3)
    x, x2 = FieldElem(gf8, 2), FieldElem(gf8, 4)
    assert (x * x2).coeffs == (1, 1, 0)
    assert (x + x).value == 0


def test_field_inverses_and_zero():
    """Every nonzero element has an inverse; zero does not."""
    for p, m in [(2, 3), (3, 2), (5, 1), (7, 2)]:
        spec = field_spec(p, m)
        for code in range(1, spec.q):
            a = FieldElem(spec, code)
            assert (a * field_inv(a)).value == 1
        with pytest.raises(FieldError):
            field_inv(FieldElem(spec, 0))


def test_field_validation():
    """Non-prime characteristic, reducible modulus and mixed fields are rejected."""
    with pytest.raises(FieldError):
        field_spec(4)
    with pytest.raises(FieldError):
        field_spec(2, 2, (1, 0, 1))  # x^2 + 1 = (x + 1)^2
    with pytest.raises(FieldError):
        FieldElem(field_spec(2), 1) + FieldElem(field_spec(3), 1)


def test_primitive_elements():
    """Primitive elements have order q - 1."""
    for p, m in [(2, 3), (3, 2), (5, 2), (7, 1)]:
        spec = field_spec(p, m)
        assert multiplicative_order(primitive_element(spec)) == spec.q - 1


def test_element_from_coeffs():
    """Little-endian coefficient encoding."""
    spec = field_spec(3, 2)
    assert element_from_coeffs(spec, [1, 2]).value == 7
    assert element_from_coeffs(spec, [1, 2]).coeffs == (1, 2)


def test_sl_matrix_rejects_determinant():
    """Only determinant-1 matrices are accepted."""
    spec = field_spec(3)
    with pytest.raises(FieldError):
        SLMatrix(spec, [[2, 0], [0, 1]])
    m = SLMatrix(spec, [[2, 0], [0, 2]])
    assert (m @ m.inverse()).is_identity()


def test_random_sl_matrix_determinant():
    """Random SL elements have determinant 1."""
    rng = make_rng(5)
    for p, m, dim in [(2, 1, 3), (3, 1, 3), (2, 2, 2)]:
        spec = field_spec(p, m)
        for _ in range(5):
            assert determinant(spec, random_sl_matrix(spec, dim, rng).array) == 1


def test_sl_orders():
    """Standard order formula."""
    assert sl_order(2, 3) == 168
    assert sl_order(3, 2) == 24
    assert sl_order(3, 3) == 5616


def test_perm_from_matrix_is_homomorphism():
    """Matrices act on row vectors, so products map to left-to-right compositions."""
    spec = field_spec(2)
    points = enumerate_points(spec, 3)
    rng = make_rng(7)
    a, b = random_sl_matrix(spec, 3, rng), random_sl_matrix(spec, 3, rng)
    pa, pb = perm_from_matrix(a, points), perm_from_matrix(b, points)
    assert perm_from_matrix(a @ b, points) == compose(pa, pb)
    assert parity(pa) == Parity.EVEN


def test_point_enumerations():
    """Seven nonzero vectors of F_2^3; thirteen projective points over F_3."""
    assert enumerate_points(field_spec(2), 3).size == 7
    projective = enumerate_points(field_spec(3), 3, HKind.PROJECTIVE_PLANE)
    assert projective.size == 13
    assert enumerate_points(field_spec(2), 6).size == 63


def test_singer_elements():
    """The Singer element is one K-cycle."""
    for spec, dim, kind, K in [(field_spec(2), 3, HKind.NONZERO_VECTORS, 7),
                               (field_spec(2), 4, HKind.NONZERO_VECTORS, 15),
                               (field_spec(3), 3, HKind.PROJECTIVE_PLANE, 13)]:
        points = enumerate_points(spec, dim, kind)
        singer = perm_from_matrix(k_cycle_element(spec, points), points)
        assert cycle_type(singer).parts == (K,)
        assert order(singer) == K


def test_singer_nonzero_vectors_needs_characteristic_two():
    """Over F_3 the norm is never 1, so no determinant-1 K-cycle on nonzero vectors."""
    spec = field_spec(3)
    with pytest.raises(FieldError):
        k_cycle_element(spec, enumerate_points(spec, 3))


def test_base_generating_sets_certify():
    """Elementary sets generate SL on nonzero vectors and on the projective plane."""
    spec = field_spec(2)
    points = enumerate_points(spec, 3)
    assert certify_generation(base_generating_set(spec, 3), points).order == 168
    spec3 = field_spec(3)
    plane = enumerate_points(spec3, 3, HKind.PROJECTIVE_PLANE)
    assert certify_generation(base_generating_set(spec3, 3), plane).order == 5616


def test_involution_style():
    """Involution sets consist of involutions and still generate."""
    spec = field_spec(3)
    plane = enumerate_points(spec, 3, HKind.PROJECTIVE_PLANE)
    gens = base_generating_set(spec, 3, BaseStyle.INVOLUTION)
    assert all((g @ g).is_identity() for g in gens)
    assert certify_generation(gens, plane).order == 5616
    with pytest.raises(FieldError):
        base_generating_set(spec, 2, BaseStyle.INVOLUTION)


def test_matrix_text_round_trip():
    """Matrices print as coefficient digits and parse back."""
    spec = field_spec(2, 2)
    m = random_sl_matrix(spec, 2, make_rng(2))
    assert parse_matrix(spec, format_matrix(m)) == m
    with pytest.raises(FieldError):
        parse_matrix(spec, "12 00\n00 10")
