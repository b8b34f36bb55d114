"""
Tests for the cube arrangement, power generating sets and the generating families.
"""

import math

import numpy as np
import pytest

from algebra import base_generating_set, enumerate_points, field_spec, random_sl_matrix
from construction import (CubeConstruction, GeneratingFamily, Twist, abelian_family, cube_enumeration, embed_axis,
                          enumerate_C_sample, odd_involution, pad_to_all_n, padding_windows, power_generating_set,
                          restrict_to_fiber, sym_variant)
from experiment_config import BaseStyle, BudgetExceededError, ExperimentConfig, FamilyKind, HKind
from group_engine import alternating_order, build_bsgs, make_rng
from perm_core import Parity, PermutationError, compose, parity, support


def test_cube_index_round_trip():
    """index and coords are inverse bijections."""
    cube = cube_enumeration(7, 3)
    assert cube.size == 343 and cube.copies == 49
    for i in (0, 1, 48, 200, 342):
        assert cube.index(cube.coords(i)) == i
    assert cube.fibers(1).shape == (49, 7)
    with pytest.raises(PermutationError):
        cube.index((7, 0, 0))


def test_cube_budget():
    """Cubes above the point budget are refused."""
    with pytest.raises(BudgetExceededError):
        cube_enumeration(63, 3, budget=20_000)


def test_fibers_partition_points():
    """Fibers of one axis partition the cube and vary only that coordinate."""
    cube = cube_enumeration(5, 3)
    for axis in range(3):
        fibers = cube.fibers(axis)
        assert sorted(fibers.ravel().tolist()) == list(range(cube.size))
        for row in fibers:
            coords = [cube.coords(int(x)) for x in row]
            assert [c[axis] for c in coords] == list(range(5))
            assert len({tuple(x for k, x in enumerate(c) if k != axis) for c in coords}) == 1


def test_embed_axis_and_restrict(desk_construction):
    """A local element embedded on one fiber restricts back to itself."""
    cube = desk_construction.cube
    h = desk_construction.cycle
    p = embed_axis(h, (3,), 0, cube)
    assert support(p) == 7
    assert restrict_to_fiber(p, 0, cube.copy_index((3,)), cube) == h
    assert restrict_to_fiber(p, 0, cube.copy_index((2,)), cube).is_identity()


def test_abelian_family_all_ones_moves_every_point(desk_construction):
    """Gamma element with exponent 1 on every fiber: support 49."""
    p = desk_construction.abelian_family(0, [1] * 7)
    assert support(p) == 49
    assert p == abelian_family(desk_construction.cube, 0, [8] * 7, desk_construction.cycle)
    assert parity(p) == Parity.EVEN


def test_abelian_family_is_abelian(desk_construction):
    """Elements of one Gamma_i commute."""
    rng = np.random.default_rng(1)
    a = desk_construction.abelian_family(1, rng.integers(0, 7, size=7))
    b = desk_construction.abelian_family(1, rng.integers(0, 7, size=7))
    assert compose(a, b) == compose(b, a)
    with pytest.raises(PermutationError):
        desk_construction.abelian_family(1, {0: 1})


def test_twist_inverts():
    """invert undoes apply."""
    spec = field_spec(2)
    rng = make_rng(4)
    twist = Twist(random_sl_matrix(spec, 3, rng), True)
    x = random_sl_matrix(spec, 3, rng)
    assert twist.invert(twist.apply(x)) == x
    assert twist.apply(x @ x) == twist.apply(x) @ twist.apply(x)


def test_power_set_certified(desk_construction):
    """S~ for H = SL_3(F_2), M = 7: Hall criterion and BSGS order |H|^7."""
    pgs = desk_construction.power_set
    assert pgs.M == 7
    assert len(pgs) == 6
    assert pgs.hall_checked
    assert pgs.bsgs_order == 168 ** 7
    assert len(pgs) <= 40


@pytest.mark.parametrize("M", [2, 3, 5, 10])
def test_power_set_certified_for_several_copy_counts(M):
    """S~ generates all of SL_3(F_2)^M: BSGS order 168^M, with at most 40 elements."""
    spec = field_spec(2)
    points = enumerate_points(spec, 3)
    pgs = power_generating_set(base_generating_set(spec, 3), points, M, seed=1)
    assert pgs.M == M
    assert pgs.hall_checked
    assert pgs.bsgs_order == 168 ** M
    assert len(pgs) <= 40
    assert build_bsgs(pgs.product_action(), order_bound=168 ** M).order == 168 ** M


def test_F_N_generates_alt49(desk_family):
    """F_N at K=7, d=2 is even and generates Alt(49)."""
    assert desk_family.kind == FamilyKind.F_N
    assert desk_family.degree == 49
    assert len(desk_family) == 12
    assert all(parity(p) == Parity.EVEN for p in desk_family.elements)
    b = build_bsgs(desk_family.elements, order_bound=alternating_order(49))
    assert b.order == alternating_order(49)


def test_F_N_labels_and_json(desk_family):
    """Labels carry axis provenance and survive a JSON reload."""
    assert {label.axis for label in desk_family.labels} == {0, 1}
    again = GeneratingFamily.from_json(desk_family.to_json())
    assert again.elements == desk_family.elements
    assert again.label_strings() == desk_family.label_strings()
    assert again.metadata["cube_dimension"] == 6


def test_C_sample_is_even_and_reproducible(desk_construction):
    """C samples are even and fixed by their seed."""
    first = desk_construction.c_family(8, seed=3)
    second = desk_construction.c_family(8, seed=3)
    assert first.elements == second.elements
    assert all(parity(p) == Parity.EVEN for p in first.elements)
    elements, labels = enumerate_C_sample(4, make_rng(0), desk_construction.cube, desk_construction.cycle)
    assert len(elements) == len(labels) == 4


def test_padding_windows_cover():
    """Windows cover {0..n-1}, overlap by at least 5 and end right-aligned."""
    for n, n_s in [(90, 49), (60, 49), (49, 49), (1000, 49), (400, 10)]:
        offsets = padding_windows(n, n_s)
        covered = set()
        for t in offsets:
            covered.update(range(t, t + n_s))
        assert covered == set(range(n))
        assert offsets[-1] == n - n_s
        assert all(b - a <= n_s - 5 for a, b in zip(offsets, offsets[1:]))
    assert padding_windows(90, 49) == [0, 25, 41]
    assert len(padding_windows(1000, 49)) <= -(-2 * 1000 // 49)


def test_pad_to_all_n_generates_alt(desk_family):
    """F_n on 60 points generates Alt(60)."""
    F_n = pad_to_all_n(60, desk_family)
    assert F_n.kind == FamilyKind.F_n
    assert len(F_n) == 2 * len(desk_family)
    b = build_bsgs(F_n.elements, order_bound=alternating_order(60))
    assert b.order == alternating_order(60)
    with pytest.raises(PermutationError):
        pad_to_all_n(40, desk_family)


@pytest.mark.parametrize("n", range(49, 61))
def test_padding_and_sym_variant_for_every_n(n, desk_family):
    """F_n generates Alt(n) and F~_n generates Sym(n) for every n from 49 to 60."""
    F_n = pad_to_all_n(n, desk_family)
    assert F_n.degree == n
    assert build_bsgs(F_n.elements, order_bound=alternating_order(n)).order == alternating_order(n)
    Ft = sym_variant(F_n, "transposition", certify=False)
    assert build_bsgs(Ft.elements, order_bound=math.factorial(n)).order == math.factorial(n)


def test_odd_involutions():
    """Both odd-element styles are odd involutions."""
    for n in (8, 10, 13):
        for style in ("transposition", "involution"):
            p = odd_involution(n, style)
            assert parity(p) == Parity.ODD
            assert compose(p, p).is_identity()


def test_sym_variant(desk_family):
    """F~_n adds exactly one odd involution."""
    F_n = pad_to_all_n(52, desk_family)
    Ft = sym_variant(F_n, "transposition", certify=True)
    assert Ft.kind == FamilyKind.SYM_F_n
    assert len(Ft) == len(F_n) + 1
    assert sum(parity(p) == Parity.ODD for p in Ft.elements) == 1


def test_family_dispatch():
    """CubeConstruction.family follows family_kind."""
    gamma = CubeConstruction(ExperimentConfig(d=2, family_kind=FamilyKind.GAMMA)).family()
    assert gamma.kind == FamilyKind.GAMMA and len(gamma) == 2
    c = CubeConstruction(ExperimentConfig(d=2, family_kind=FamilyKind.C, c_sample_count=5)).family()
    assert c.kind == FamilyKind.C and len(c) == 5


def test_involution_base_style_gives_involutions():
    """Over characteristic 2 the involution style yields an all-involution F_N."""
    config = ExperimentConfig(d=2, base_style=BaseStyle.INVOLUTION)
    family = CubeConstruction(config).build_F_N()
    assert all(compose(p, p).is_identity() for p in family.elements)


@pytest.mark.slow
def test_projective_plane_square():
    """SL_3(F_3) on 13 projective points: F_N generates Alt(169)."""
    config = ExperimentConfig(d=2, field_p=3, h_kind=HKind.PROJECTIVE_PLANE)
    family = CubeConstruction(config).build_F_N()
    assert family.degree == 169
    b = build_bsgs(family.elements, order_bound=alternating_order(169))
    assert b.order == alternating_order(169)


@pytest.mark.slow
def test_desk_cube_generates_alt343():
    """K=7, d=3: F_N generates Alt(343)."""
    family = CubeConstruction(ExperimentConfig(d=3)).build_F_N()
    assert family.degree == 343
    b = build_bsgs(family.elements, order_bound=alternating_order(343))
    assert b.order == alternating_order(343)
