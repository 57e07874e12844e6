import math

import numpy as np
import pytest

from photomag import symmetry as sym

from conftest import random_unit_vectors


class TestGroups:
    def test_identity_group(self):
        g = sym.group_elements("1")
        assert len(g) == 1
        assert np.allclose(g.elements[0], np.eye(3))

    def test_group_4_is_proper_rotations(self):
        g = sym.group_elements("4")
        assert len(g) == 4
        for el in g.elements:
            assert np.linalg.det(el) == pytest.approx(1.0)
            assert np.allclose(el @ el.T, np.eye(3))

    def test_group_4mm_has_four_mirrors(self):
        g = sym.group_elements("4mm")
        assert len(g) == 8
        dets = sorted(round(float(np.linalg.det(el))) for el in g.elements)
        assert dets == [-1, -1, -1, -1, 1, 1, 1, 1]

    def test_closure(self):
        for name in ("4", "4mm"):
            g = sym.group_elements(name)
            for a in g.elements:
                for b in g.elements:
                    prod = a @ b
                    assert any(np.allclose(prod, el) for el in g.elements)

    def test_unknown_group(self):
        with pytest.raises(ValueError, match="4mm"):
            sym.group_elements("6mm")


class TestProjection:
    def test_identity_group_is_noop(self):
        chi = sym.ChiTensor.random(0)
        proj = sym.project_tensor(chi, sym.group_elements("1"))
        assert np.allclose(proj.components, chi.components)

    def test_idempotent(self):
        for name in ("4", "4mm"):
            group = sym.group_elements(name)
            once = sym.project_tensor(sym.ChiTensor.random(1), group)
            twice = sym.project_tensor(once, group)
            assert np.max(np.abs(twice.components - once.components)) < 1e-14

    def test_projected_tensor_invariant_elementwise(self):
        for name in ("4", "4mm"):
            group = sym.group_elements(name)
            proj = sym.project_tensor(sym.ChiTensor.random(2), group)
            assert sym.is_invariant(proj, group)

    def test_group_4_component_relations(self):
        proj = sym.project_tensor(sym.ChiTensor.random(3), sym.group_elements("4"))
        assert proj["yyyx"] == pytest.approx(-proj["xxxy"], abs=1e-12)
        assert proj["xxyx"] == pytest.approx(-proj["yyxy"], abs=1e-12)
        assert abs(proj["xxxy"]) > 1e-3  # the components survive

    def test_group_4mm_kills_switching_components(self):
        proj = sym.project_tensor(sym.ChiTensor.random(4), sym.group_elements("4mm"))
        for name in ("yyyx", "xxxy", "xxyx", "yyxy"):
            assert abs(proj[name]) < 1e-12

    def test_4mm_subspace_inside_4(self):
        proj = sym.project_tensor(sym.ChiTensor.random(5), sym.group_elements("4mm"))
        again = sym.project_tensor(proj, sym.group_elements("4"))
        assert np.max(np.abs(again.components - proj.components)) < 1e-14


class TestSwitchingEnergy:
    def test_equals_cos2phi_mxmy_for_group_4(self):
        proj = sym.project_tensor(sym.ChiTensor.random(6), sym.group_elements("4"))
        a = sym.switching_coefficient(proj)
        rng = np.random.default_rng(7)
        for m in random_unit_vectors(100, seed=8):
            phi = float(rng.uniform(0.0, 180.0))
            w = sym.switching_energy(proj, phi, m)
            ref = a * math.cos(2 * math.radians(phi)) * m[0] * m[1]
            assert abs(w - ref) < 1e-12

    def test_4mm_tensor_cannot_switch(self):
        proj = sym.project_tensor(sym.ChiTensor.random(9), sym.group_elements("4mm"))
        for m in random_unit_vectors(20, seed=10):
            for phi in (0.0, 30.0, 90.0):
                assert abs(sym.switching_energy(proj, phi, m)) < 1e-12

    def test_45_degrees_vanishes(self):
        proj = sym.project_tensor(sym.ChiTensor.random(11), sym.group_elements("4"))
        m = random_unit_vectors(5, seed=12)
        for v in m:
            assert abs(sym.switching_energy(proj, 45.0, v)) < 1e-12

    def test_0_vs_90_opposite(self):
        proj = sym.project_tensor(sym.ChiTensor.random(13), sym.group_elements("4"))
        m = np.array([1.0, 1.0, 1.0]) / math.sqrt(3.0)
        w0 = sym.switching_energy(proj, 0.0, m)
        w90 = sym.switching_energy(proj, 90.0, m)
        assert w0 == pytest.approx(-w90, rel=1e-12)


class TestPolarizationPreference:
    def _negative_a_tensor(self):
        proj = sym.project_tensor(sym.ChiTensor.random(14), sym.group_elements("4"))
        if sym.switching_coefficient(proj) > 0:
            proj = sym.ChiTensor(-proj.components)
        return proj

    def test_phi_0_favors_positive_my(self):
        assert sym.polarization_preference(self._negative_a_tensor(), 0.0) == 1

    def test_phi_90_favors_negative_my(self):
        assert sym.polarization_preference(self._negative_a_tensor(), 90.0) == -1

    def test_phi_45_no_preference(self):
        assert sym.polarization_preference(self._negative_a_tensor(), 45.0) == 0

    def test_zero_coefficient_no_preference(self):
        proj = sym.project_tensor(sym.ChiTensor.random(15), sym.group_elements("4mm"))
        assert sym.polarization_preference(proj, 0.0) == 0
