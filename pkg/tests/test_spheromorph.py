import json
import random

import pytest

from heckelab.errors import LevelError
from heckelab.permgroup import Permutation
from heckelab.spheromorph import (AlmostAutomorphism, canonical_form, compose,
                                  double_coset_key, from_json_dict, inverse,
                                  is_in_level_subgroup, level_permutation,
                                  minimal_level, random_element,
                                  random_tree_automorphism, to_json_dict)
from heckelab.treefam import TreeShape, ball_aut_group

SHAPE = TreeShape(2, 2)


class TestValidation:
    def test_incomplete_domain_tree(self):
        with pytest.raises(ValueError):
            AlmostAutomorphism(SHAPE, {(0,): (0,)}, {})

    def test_non_injective_leaf_map(self):
        with pytest.raises(ValueError):
            AlmostAutomorphism(SHAPE, {(0,): (0,), (1,): (0,)}, {})

    def test_leaf_with_descendants(self):
        with pytest.raises(ValueError):
            AlmostAutomorphism(SHAPE, {(0,): (0,), (1,): (1,), (0, 0): (1, 1)}, {})

    def test_bad_twist_permutation(self):
        with pytest.raises(ValueError):
            AlmostAutomorphism(SHAPE, {(): ()}, {(): {(): (0, 0)}})

    def test_twist_arity_at_root(self):
        shape = TreeShape(2, 3)  # root has three children
        AlmostAutomorphism(shape, {(): ()}, {(): {(): (2, 0, 1)}})
        with pytest.raises(ValueError):
            AlmostAutomorphism(shape, {(): ()}, {(): {(): (1, 0)}})


class TestGroupAxioms:
    def test_identity(self):
        e = AlmostAutomorphism.identity(SHAPE)
        assert e.is_identity()

    def test_axioms_on_random_elements(self):
        rng = random.Random(20240805)
        e = AlmostAutomorphism.identity(SHAPE)
        for _ in range(250):
            g = random_element(SHAPE, rng)
            h = random_element(SHAPE, rng)
            f = random_element(SHAPE, rng)
            assert compose(g, e) == g
            assert compose(e, g) == g
            assert compose(g, inverse(g)).is_identity()
            assert compose(inverse(g), g).is_identity()
            assert compose(compose(g, h), f) == compose(g, compose(h, f))

    def test_axioms_on_ternary_tree(self):
        shape = TreeShape(3, 2)
        rng = random.Random(99)
        for _ in range(60):
            g = random_element(shape, rng)
            h = random_element(shape, rng)
            assert compose(g, inverse(g)).is_identity()
            assert inverse(inverse(g)) == g
            assert inverse(compose(g, h)) == compose(inverse(h), inverse(g))


class TestCanonicalForm:
    def test_idempotent(self):
        rng = random.Random(5)
        for _ in range(100):
            c = canonical_form(random_element(SHAPE, rng))
            assert canonical_form(c).data_equal(c)

    def test_refined_identity_collapses(self):
        leaf_map = {a: a for a in SHAPE.vertices(2)}
        refined = AlmostAutomorphism(SHAPE, leaf_map, {})
        assert refined.is_identity()
        c = canonical_form(refined)
        assert c.leaf_map == {(): ()}

    def test_minimal_element_is_unchanged(self):
        g = AlmostAutomorphism(SHAPE, {(0, 0): (0,), (0, 1): (1, 0), (1,): (1, 1)}, {})
        assert canonical_form(g).data_equal(g)

    def test_refine_then_canonicalize_is_canonicalize(self):
        rng = random.Random(7)
        ball = set()
        for j in range(4):
            ball.update(SHAPE.vertices(j))
        for _ in range(80):
            g = random_element(SHAPE, rng)
            refined = g.refined_to_domain(ball)
            assert canonical_form(refined).data_equal(canonical_form(g))

    def test_twisted_identity_collapses_to_root_portrait(self):
        # an automorphism presented on the level-2 ball
        sigma = Permutation([2, 3, 1, 0])
        g = AlmostAutomorphism.from_level_permutation(SHAPE, 2, sigma)
        c = canonical_form(g)
        assert set(c.leaf_map) == {()}


class TestLevelSubgroups:
    def test_tree_automorphisms_live_at_level_zero(self):
        rng = random.Random(9)
        for _ in range(30):
            k = random_tree_automorphism(SHAPE, rng)
            assert is_in_level_subgroup(k, 0)
            assert is_in_level_subgroup(k, 2)
            assert minimal_level(k) == 0

    def test_block_swap_is_an_automorphism(self):
        swap = AlmostAutomorphism.automorphism(SHAPE, {(): (1, 0)})
        assert is_in_level_subgroup(swap, 1)
        assert minimal_level(swap) == 0
        assert level_permutation(swap, 1) == Permutation([1, 0])

    def test_level_shifting_element_is_never_inside(self):
        g = AlmostAutomorphism(SHAPE, {(0, 0): (0,), (0, 1): (1, 0), (1,): (1, 1)}, {})
        for n in range(7):
            assert not is_in_level_subgroup(g, n)
        assert minimal_level(g, n_max=8) is None

    def test_genuine_level_two_element(self):
        sigma = Permutation.from_cycles(4, (1, 2))
        g = AlmostAutomorphism.from_level_permutation(SHAPE, 2, sigma)
        assert is_in_level_subgroup(g, 2)
        assert not is_in_level_subgroup(g, 1)
        assert minimal_level(g) == 2
        assert level_permutation(g, 2) == sigma

    def test_level_permutation_requires_membership(self):
        g = AlmostAutomorphism(SHAPE, {(0, 0): (0,), (0, 1): (1, 0), (1,): (1, 1)}, {})
        with pytest.raises(LevelError):
            level_permutation(g, 3)


class TestDoubleCosetKey:
    def test_automorphisms_key_to_the_identity_class(self):
        rng = random.Random(13)
        for n in (1, 2):
            for _ in range(15):
                k = random_tree_automorphism(SHAPE, rng)
                assert double_coset_key(k, n).is_identity()

    def test_bi_invariance(self):
        rng = random.Random(17)
        for _ in range(120):
            sigma = Permutation(
                random.Random(rng.random()).sample(range(4), 4))
            g = AlmostAutomorphism.from_level_permutation(SHAPE, 2, sigma)
            k1 = random_tree_automorphism(SHAPE, rng)
            k2 = random_tree_automorphism(SHAPE, rng)
            assert double_coset_key(compose(compose(k1, g), k2), 2) == \
                double_coset_key(g, 2)

    def test_twists_do_not_change_the_key(self):
        rng = random.Random(19)
        sigma = Permutation.from_cycles(4, (0, 3))
        base = AlmostAutomorphism.from_level_permutation(SHAPE, 2, sigma)
        key = double_coset_key(base, 2)
        for _ in range(10):
            from heckelab.spheromorph import random_portrait
            twists = {a: random_portrait(SHAPE, a, rng) for a in SHAPE.vertices(2)}
            twisted = AlmostAutomorphism.from_level_permutation(SHAPE, 2, sigma, twists)
            assert double_coset_key(twisted, 2) == key

    def test_cross_block_transposition_has_nontrivial_key(self):
        # swapping two level-2 vertices under different level-1 parents is
        # not a ball automorphism, so its key leaves the identity class
        sigma = Permutation.from_cycles(4, (1, 2))
        g = AlmostAutomorphism.from_level_permutation(SHAPE, 2, sigma)
        p2 = ball_aut_group(SHAPE, 2)
        assert sigma not in p2
        assert not double_coset_key(g, 2).is_identity()

    def test_complete_invariant_at_level_two(self):
        # keys of all 24 level-2 permutations reproduce the double-coset
        # partition of the ball group in the symmetric group
        from heckelab.permgroup import DoubleCosetTable, symmetric_group
        p2 = ball_aut_group(SHAPE, 2)
        table = DoubleCosetTable(symmetric_group(4), p2)
        by_key = {}
        for images in __import__("itertools").permutations(range(4)):
            sigma = Permutation(images)
            g = AlmostAutomorphism.from_level_permutation(SHAPE, 2, sigma)
            by_key.setdefault(double_coset_key(g, 2).images, set()).add(images)
        assert len(by_key) == len(table.entries)
        for entry in table.entries:
            block = by_key[entry.representative.images]
            assert len(block) == entry.size
        # keys are exactly the canonical representatives
        assert set(by_key) == {e.representative.images for e in table.entries}

    def test_keys_realize_every_class_at_level_three(self, flagship_pair):
        for entry in flagship_pair.table.entries:
            g = AlmostAutomorphism.from_level_permutation(
                SHAPE, 3, entry.representative)
            assert double_coset_key(g, 3) == entry.representative

    def test_keys_classify_random_level_three_elements(self, flagship_pair):
        # the key equals the table representative of the class of the induced
        # permutation, for arbitrary elements of the level-3 subgroup
        rng = random.Random(29)
        for _ in range(50):
            sigma = flagship_pair.group.sample(rng)
            g = AlmostAutomorphism.from_level_permutation(SHAPE, 3, sigma)
            expected = flagship_pair.table.entries[
                flagship_pair.table.class_of(sigma)].representative
            assert double_coset_key(g, 3) == expected


class TestSerialization:
    def test_round_trip(self):
        rng = random.Random(23)
        for _ in range(40):
            g = canonical_form(random_element(SHAPE, rng))
            data = json.loads(json.dumps(to_json_dict(g)))
            assert from_json_dict(data) == g

    def test_rejects_inconsistent_trees(self):
        g = AlmostAutomorphism.automorphism(SHAPE, {(): (1, 0)})
        data = to_json_dict(g)
        data["A"] = ["", "0", "1"]
        with pytest.raises(ValueError):
            from_json_dict(data)

    def test_rejects_unknown_format(self):
        with pytest.raises(ValueError):
            from_json_dict({"format": "other"})

    def test_addresses_accept_lists_and_strings(self):
        data = {
            "format": "heckelab/spheromorph/v1",
            "d": 2, "k": 2,
            "A": ["", [0], [1]],
            "B": ["", "0", "1"],
            "phi": [[[0], "1"], ["1", [0]]],
            "twists": {"0": [["", [1, 0]]]},
        }
        g = from_json_dict(data)
        assert g.leaf_map == {(0,): (1,), (1,): (0,)}
