import pytest

from heckelab.errors import ScaleError
from heckelab.permgroup import PermGroup, Permutation, symmetric_group
from heckelab.treefam import (TreeShape, ball_aut_group, closed_form_order,
                              level_size, q_group, restriction_to_level,
                              wreath_embed)

import oracles


def test_level_sizes():
    assert level_size(TreeShape(2, 2), 1) == 2
    assert level_size(TreeShape(2, 2), 3) == 8
    assert level_size(TreeShape(3, 2), 2) == 6
    assert level_size(TreeShape(3, 2), 0) == 1


def test_degenerate_shapes_rejected():
    with pytest.raises(ValueError):
        TreeShape(1, 2)
    with pytest.raises(ValueError):
        TreeShape(2, 1)


def test_vertices_are_lexicographically_sorted():
    shape = TreeShape(3, 2)
    for n in range(4):
        verts = shape.vertices(n)
        assert verts == sorted(verts)
        assert len(verts) == shape.level_size(n)


class TestBallAutGroup:
    def test_small_orders(self):
        assert ball_aut_group(TreeShape(2, 2), 1).order() == 2
        assert ball_aut_group(TreeShape(2, 3), 1).order() == 6
        assert ball_aut_group(TreeShape(2, 2), 3).order() == 128

    def test_orders_match_closed_form(self):
        cases = [(2, 2, 1), (2, 2, 2), (2, 2, 3), (2, 2, 4), (2, 2, 5),
                 (3, 2, 1), (3, 2, 2), (2, 3, 1), (2, 3, 2), (2, 3, 3),
                 (3, 3, 1), (3, 3, 2)]
        for d, k, n in cases:
            shape = TreeShape(d, k)
            assert ball_aut_group(shape, n).order() == closed_form_order(shape, n)

    def test_binary_depth3_equals_portrait_enumeration(self):
        shape = TreeShape(2, 2)
        oracle = oracles.enumerate_ball_automorphisms(shape, 3)
        assert len(oracle) == 128
        assert {p.images for p in ball_aut_group(shape, 3).elements()} == oracle

    def test_ternary_depth2_equals_portrait_enumeration(self):
        shape = TreeShape(3, 2)
        oracle = oracles.enumerate_ball_automorphisms(shape, 2)
        group = ball_aut_group(shape, 2)
        assert group.order() == len(oracle)
        assert {p.images for p in group.elements()} == oracle

    def test_scale_cap(self):
        with pytest.raises(ScaleError):
            ball_aut_group(TreeShape(2, 2), 7)

    def test_restriction_is_onto(self):
        shape = TreeShape(2, 2)
        for n in (1, 2, 3):
            upper = ball_aut_group(shape, n + 1)
            restricted = PermGroup(
                shape.level_size(n),
                [restriction_to_level(shape, n, g) for g in upper.generators])
            assert restricted.same_group(ball_aut_group(shape, n))


class TestQGroup:
    def test_depth_one_is_symmetric(self):
        assert q_group(2, 1).same_group(symmetric_group(2))

    def test_depth_two_is_the_dihedral_sylow(self):
        q2 = q_group(2, 2)
        assert q2.order() == 8
        sylow = PermGroup(4, [Permutation.from_cycles(4, (0, 1)),
                              Permutation.from_cycles(4, (2, 3)),
                              Permutation.from_cycles(4, (0, 2), (1, 3))])
        assert q2.same_group(sylow)
        orders = sorted(_element_order(p) for p in q2.elements())
        assert orders == [1, 2, 2, 2, 2, 2, 4, 4]

    def test_depth_three_order(self):
        assert q_group(2, 3).order() == 128


def _element_order(p: Permutation) -> int:
    e = Permutation.identity(p.degree)
    q = p
    order = 1
    while q != e:
        q = q * p
        order += 1
    return order


class TestWreathEmbedding:
    @pytest.mark.parametrize("l,n", [(1, 1), (1, 2), (2, 1)])
    def test_block_group_equals_ball_group(self, l, n):
        assert wreath_embed(2, l, n, 2).equals_ball_group()

    def test_small_case_order(self):
        we = wreath_embed(2, 1, 1, 2)
        assert we.spanned_group().order() == 8

    def test_order_product(self):
        we = wreath_embed(2, 2, 1, 2)
        q2 = q_group(2, 2)
        p1 = ball_aut_group(TreeShape(2, 2), 1)
        assert we.spanned_group().order() == q2.order() ** 2 * p1.order() == 128

    def test_top_copy_meets_blocks_trivially(self):
        we = wreath_embed(2, 2, 1, 2)
        blocks_only = PermGroup(we.total_points, we.base_copies(symmetric_group(4)))
        top = symmetric_group(we.block_count)
        for sigma in top.elements():
            embedded = we.top_embed(sigma)
            if not sigma.is_identity():
                assert embedded not in blocks_only
            else:
                assert embedded in blocks_only

    def test_blocks_are_contiguous_prefix_runs(self):
        we = wreath_embed(2, 2, 1, 2)
        shape = TreeShape(2, 2)
        level = shape.vertices(3)
        prefixes = shape.vertices(1)
        for i, block in enumerate(we.blocks()):
            assert [level[j][:1] for j in block] == [prefixes[i]] * we.block_size

    def test_scale_cap(self):
        with pytest.raises(ScaleError):
            wreath_embed(2, 4, 3, 2)
