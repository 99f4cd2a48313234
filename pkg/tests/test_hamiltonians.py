import unittest

import numpy as np

from nda.catalog import catalog_list, get_state
from nda.hamiltonians import (HamiltonianSpec, NodeProximityError,
                              SingularPointError, coulomb_atom, harmonic_pair,
                              local_energy, potential, potential_batch)


class TestPotential(unittest.TestCase):
    def test_coulomb_single_electron(self):
        h = coulomb_atom(Z=2, ee=False)
        # one electron at distance 2 -> V = -Z/r = -1
        self.assertAlmostEqual(potential(h, np.array([0.0, 0.0, 2.0])), -1.0, places=14)

    def test_coulomb_repulsion_term(self):
        h_on = coulomb_atom(Z=1, ee=True)
        h_off = coulomb_atom(Z=1, ee=False)
        x = np.array([[1.0, 0, 0, -1.0, 0, 0]])  # r1 = r2 = 1, r12 = 2
        self.assertAlmostEqual(potential_batch(h_on, x)[0], -2.0 + 0.5, places=14)
        self.assertAlmostEqual(potential_batch(h_off, x)[0], -2.0, places=14)

    def test_harmonic_values(self):
        h = harmonic_pair(omega=0.25, g0=1.0)
        x = np.array([[1.0, 0, 0, 0, 1.0, 0]])
        expect = 0.5 * 0.25**2 * 2.0 + 1.0 / np.sqrt(2.0)
        self.assertAlmostEqual(potential_batch(h, x)[0], expect, places=14)

    def test_singularities_raise(self):
        h = coulomb_atom(Z=1, ee=True)
        with self.assertRaises(SingularPointError):
            potential(h, np.zeros(3))
        with self.assertRaises(SingularPointError):
            potential(h, np.array([1.0, 0, 0, 1.0, 0, 0]))

    def test_bad_family_rejected(self):
        with self.assertRaises(ValueError):
            HamiltonianSpec(family="lattice")
        with self.assertRaises(ValueError):
            coulomb_atom(Z=0)
        with self.assertRaises(ValueError):
            harmonic_pair(omega=-1.0)

    def test_harmonic_needs_two_particles(self):
        h = harmonic_pair(omega=0.25)
        with self.assertRaises(ValueError):
            potential_batch(h, np.zeros((1, 9)))


class TestLocalEnergy(unittest.TestCase):
    def test_every_catalog_eigenstate_is_flat(self):
        rng = np.random.default_rng(42)
        for s in catalog_list():
            if s.model is None or s.exact_total_energy is None:
                continue
            h = s.hamiltonian()
            E = float(s.exact_total_energy)
            x = rng.normal(scale=2.0, size=(200, 3 * s.model.n_particles))
            vals = s.model.values(x)
            for row, v in zip(x, vals):
                if abs(v) < 1e-6:
                    continue
                self.assertAlmostEqual(local_energy(h, s.model, row), E,
                                       delta=5e-9, msg=s.name)

    def test_node_proximity_guard(self):
        s = get_state("2P_2p")
        h = s.hamiltonian()
        on_node = np.array([1.0, 1.0, 0.0])  # z = 0 plane
        with self.assertRaises(NodeProximityError):
            local_energy(h, s.model, on_node)

    def test_mixed_state_is_not_flat(self):
        # the noninteracting state under the interacting hamiltonian
        s = get_state("harmonic_mixed")
        h = s.hamiltonian()
        self.assertEqual(h.g0, 1.0)
        rng = np.random.default_rng(1)
        x = rng.normal(scale=1.5, size=(50, 6))
        vals = [local_energy(h, s.model, row) for row in x
                if abs(s.model.values(row[None, :])[0]) > 1e-6]
        self.assertGreater(np.ptp(vals), 0.01)


if __name__ == "__main__":
    unittest.main()
