import unittest

import numpy as np

from nda.catalog import get_state, subshell_family
from nda.topology import (DomainReport, TransformSpec, count_nodal_domains,
                          find_block_transform)
from nda.topology import test_node_equivalence as node_equivalence


class TestTransformSpec(unittest.TestCase):
    def test_identity(self):
        t = TransformSpec.identity(2)
        self.assertEqual(t.matrix.shape, (6, 6))
        self.assertEqual(t.determinant, 1)
        x = np.arange(12.0).reshape(2, 6)
        self.assertTrue(np.array_equal(t.apply(x), x))

    def test_axis_flip(self):
        t = TransformSpec.axis_flip(2, axis=0, particle=1)
        x = np.arange(6.0)[None, :]
        y = t.apply(x)
        expect = x.copy()
        expect[0, 3] = -expect[0, 3]
        self.assertTrue(np.array_equal(y, expect))
        self.assertEqual(t.determinant, -1)

    def test_inverse_roundtrip(self):
        rng = np.random.default_rng(0)
        # block rotation + particle swap
        q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        t = TransformSpec.from_blocks([q, np.eye(3)], permutation=(1, 0))
        x = rng.normal(size=(5, 6))
        back = t.inverse().apply(t.apply(x))
        self.assertTrue(np.allclose(back, x, atol=1e-12))

    def test_rejects_non_orthogonal(self):
        m = np.eye(6)
        m[0, 1] = 0.5
        with self.assertRaises(ValueError):
            TransformSpec(matrix=m)

    def test_rejects_block_structure_violation(self):
        # a rotation mixing coordinates of different particles is not
        # a per-particle block transform
        m = np.eye(6)
        c, s = np.cos(0.3), np.sin(0.3)
        m[0, 0], m[0, 3], m[3, 0], m[3, 3] = c, -s, s, c
        with self.assertRaises(ValueError):
            TransformSpec(matrix=m)


class TestDomainCount(unittest.TestCase):
    def test_single_plane_node_two_domains(self):
        rep = count_nodal_domains(get_state("2P_2p"), n_points=4000, seed=5)
        self.assertIsInstance(rep, DomainReport)
        self.assertEqual(rep.n_domains, 2)
        self.assertEqual(rep.n_points, 4000)

    def test_two_electron_states_two_domains(self):
        for name in ["3P_2p2", "1S_2p2"]:
            rep = count_nodal_domains(get_state(name), n_points=4000, seed=5)
            self.assertEqual(rep.n_domains, 2, name)

    def test_four_domain_orbital_stays_four(self):
        # the l=2, m=2 real orbital's node is two intersecting planes; the
        # corridor rescue pass must not glue genuinely distinct domains
        rep = count_nodal_domains(subshell_family(1, 2))
        self.assertEqual(rep.n_domains, 4)

    def test_note_mentions_upper_bound(self):
        rep = count_nodal_domains(get_state("2P_2p"), n_points=2000, seed=5)
        self.assertIn("upper bound", rep.confidence_note)

    def test_minimum_points_enforced(self):
        with self.assertRaises(ValueError):
            count_nodal_domains(get_state("2P_2p"), n_points=100)


class TestEquivalence(unittest.TestCase):
    def test_self_equivalence_under_identity(self):
        st = get_state("3P_2p2")
        out = node_equivalence(st, st, TransformSpec.identity(2),
                                    n_points=20_000)
        self.assertEqual(out["verdict"], "equivalent")
        self.assertEqual(out["agreement_fraction"], 1.0)

    def test_singlet_triplet_flip_map(self):
        # flipping one axis of one particle carries the 1D node onto the 3P node
        t = TransformSpec.axis_flip(2, axis=0, particle=1)
        out = node_equivalence(get_state("1D_2p2"), get_state("3P_2p2"), t,
                                    n_points=20_000)
        self.assertEqual(out["verdict"], "equivalent")
        self.assertEqual(out["agreement_fraction"], 1.0)

    def test_inequivalent_nodes_detected(self):
        t = TransformSpec.identity(2)
        out = node_equivalence(get_state("1S_2p2"), get_state("3P_2p2"), t,
                                    n_points=20_000)
        self.assertEqual(out["verdict"], "inequivalent")
        self.assertLess(out["agreement_fraction"], 0.95)

    def test_search_finds_the_singlet_triplet_map(self):
        t = find_block_transform(get_state("1D_2p2"), get_state("3P_2p2"), seed=2)
        self.assertIsNotNone(t)
        out = node_equivalence(get_state("1D_2p2"), get_state("3P_2p2"), t,
                                    n_points=50_000)
        self.assertEqual(out["agreement_fraction"], 1.0)

    def test_search_honestly_fails_for_different_node_geometry(self):
        # the 1S node is a full quadric cone in the pair coordinates, the 3P
        # node a product of hyperplane factors; no signed permutation with
        # particle exchange can map one onto the other
        t = find_block_transform(get_state("1S_2p2"), get_state("3P_2p2"), seed=2)
        self.assertIsNone(t)


if __name__ == "__main__":
    unittest.main()
