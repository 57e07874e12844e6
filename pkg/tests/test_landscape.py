import math

import numpy as np
import pytest

from photomag import landscape as ls
from photomag import magnetics as mag
from photomag.landscape import DOMAIN_DIAGONALS, Equilibrium
from photomag.magnetics import FilmFrame, MaterialParams

from conftest import random_unit_vectors

SQ3 = 1.0 / math.sqrt(3.0)


def grid_scan_minima(params, frame, h_applied=None, step_deg=1.0):
    """Brute-force oracle: local minima of the energy on a 1-degree grid."""
    theta = np.radians(np.arange(step_deg / 2, 180.0, step_deg))
    phi = np.radians(np.arange(0.0, 360.0, step_deg))
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    m = np.stack([np.sin(tt) * np.cos(pp), np.sin(tt) * np.sin(pp), np.cos(tt)], axis=-1)
    e = mag.total_energy(m, params, frame, h_applied, check=False)

    local_min = np.ones_like(e, dtype=bool)
    for dt in (-1, 0, 1):
        for dp in (-1, 0, 1):
            if dt == 0 and dp == 0:
                continue
            shifted = np.roll(e, dp, axis=1)
            if dt == -1:
                neighbor = np.empty_like(e)
                neighbor[:-1] = shifted[1:]
                neighbor[-1] = np.inf
            elif dt == 1:
                neighbor = np.empty_like(e)
                neighbor[1:] = shifted[:-1]
                neighbor[0] = np.inf
            else:
                neighbor = shifted
            local_min &= e <= neighbor
    return m[local_min]


class TestPureCubic:
    def setup_method(self):
        self.params = MaterialParams(ku=0.0, miscut_deg=0.0)
        self.frame = FilmFrame.from_params(self.params)
        self.minima = ls.find_minima(self.params, self.frame)

    def test_eight_minima_on_diagonals(self):
        assert len(self.minima) == 8
        for eq in self.minima:
            dots = np.abs([eq.m @ d for d in DOMAIN_DIAGONALS.values()])
            assert np.max(dots) == pytest.approx(1.0, abs=1e-9)

    def test_equal_energies_k1_over_3(self):
        for eq in self.minima:
            assert eq.energy == pytest.approx(self.params.k1 / 3.0, rel=1e-12)

    def test_curvatures_match_analytic(self):
        for eq in self.minima:
            for lam in eq.hessian_eigenvalues:
                assert lam == pytest.approx(4.0 / 3.0 * abs(self.params.k1), rel=1e-9)


class TestDefaultLandscape:
    def test_eight_minima_within_20_deg(self, params, frame, minima):
        assert len(minima) == 8
        for eq in minima:
            cos = eq.m @ DOMAIN_DIAGONALS[eq.label]
            assert math.degrees(math.acos(min(cos, 1.0))) < 20.0

    def test_minima_tilted_toward_film_plane(self, params, frame, minima):
        for eq in minima:
            diag = DOMAIN_DIAGONALS[eq.label]
            assert abs(eq.m @ frame.film_normal) < abs(diag @ frame.film_normal)

    def test_gradient_and_curvature_contracts(self, params, frame, minima):
        for eq in minima:
            g = mag.energy_gradient(eq.m, params, frame)
            gt = g - (g @ eq.m) * eq.m
            assert np.linalg.norm(gt) < 1e-6 * abs(params.k1)
            assert min(eq.hessian_eigenvalues) > 0.0

    def test_matches_grid_scan(self, params, frame, minima):
        grid = grid_scan_minima(params, frame)
        assert len(grid) == 8
        for eq in minima:
            cos = np.max(grid @ eq.m)
            assert math.degrees(math.acos(min(cos, 1.0))) <= 1.0

    def test_large_domain_quartet_is_lower(self, params, frame, minima):
        by_label = ls.minima_by_label(minima)
        for l_lab in ("L+", "L-"):
            for s_lab in ("S+", "S-"):
                assert by_label[l_lab].energy < by_label[s_lab].energy

    def test_miscut_zero_degeneracy(self):
        params = MaterialParams(miscut_deg=0.0)
        frame = FilmFrame.from_params(params)
        minima = ls.find_minima(params, frame)
        assert len(minima) == 8
        energies = np.array([eq.energy for eq in minima])
        assert np.max(np.abs(energies - energies[0])) < 1e-9 * abs(energies[0])

    def test_preparation_field_global_minimum(self, params, frame):
        h = 800.0 * np.array([1.0, -1.0, 0.0]) / math.sqrt(2.0)
        minima = ls.find_minima(params, frame, h_applied=h)
        best = minima[0]
        assert best.m[0] > 0.0 and best.m[1] < 0.0


class TestClassify:
    def test_exact_minimum(self, minima):
        for eq in minima:
            assert ls.classify(eq.m, minima) == eq.label

    def test_s_plus_diagonal(self, params, frame, minima):
        assert ls.classify(np.array([1.0, 1.0, 1.0]) * SQ3, minima) == "S+"

    def test_agrees_with_relaxation_oracle(self, params, frame, minima):
        """Steepest-descent endpoints vs nearest-minimum labels, 10^4 points."""
        m = random_unit_vectors(10_000, seed=11)
        step = 0.3 / (4 * abs(params.k1))
        x = m.copy()
        for _ in range(3000):
            g = mag.energy_gradient(x, params, frame)
            gt = g - np.sum(g * x, axis=1, keepdims=True) * x
            x = x - step * gt
            x /= np.linalg.norm(x, axis=1, keepdims=True)
        endpoint_labels = ls.classify_batch(x, minima)
        start_labels = ls.classify_batch(m, minima)
        agreement = np.mean(endpoint_labels == start_labels)
        assert agreement >= 0.95

    def test_empty_minima_rejected(self):
        with pytest.raises(ValueError):
            ls.classify([0.0, 0.0, 1.0], [])


class TestFmrFrequency:
    def test_pure_cubic_analytic(self):
        params = MaterialParams(ku=0.0, miscut_deg=0.0)
        frame = FilmFrame.from_params(params)
        minima = ls.find_minima(params, frame)
        f = ls.fmr_frequency(params, frame, minima[0])
        expected = params.gamma / (2 * math.pi) * (4.0 / 3.0) * abs(params.k1) / params.ms * 1e-9
        assert f == pytest.approx(expected, rel=1e-9)

    def test_easy_axis_uniaxial_analytic(self):
        # positive ku makes the axis easy: both curvatures 2 ku
        params = MaterialParams(k1=0.0, ku=5.0e3, miscut_deg=0.0)
        frame = FilmFrame.from_params(params)
        eq = Equilibrium(m=np.array([0.0, 0.0, 1.0]), energy=-5e3, label="S+",
                         hessian_eigenvalues=(1e4, 1e4))
        f = ls.fmr_frequency(params, frame, eq)
        expected = params.gamma / (2 * math.pi) * 2 * params.ku / params.ms * 1e-9
        assert f == pytest.approx(expected, rel=1e-9)

    def test_thin_film_kittel_limit(self):
        # in-plane easy axis + shape term reproduces sqrt(Hk (Hk + 4 pi Ms))
        ku_eff = 2.0e3
        params_k = MaterialParams(k1=0.0, ku=ku_eff, miscut_deg=0.0, include_demag=True)
        frame_k = FilmFrame(film_normal=np.array([0.0, 0.0, 1.0]),
                            uniaxial_axis=np.array([1.0, 0.0, 0.0]))
        eq = Equilibrium(m=np.array([1.0, 0.0, 0.0]), energy=0.0, label="S+",
                         hessian_eigenvalues=(1.0, 1.0))
        f = ls.fmr_frequency(params_k, frame_k, eq)
        hk = 2 * ku_eff / params_k.ms
        expected = params_k.gamma / (2 * math.pi) * math.sqrt(
            hk * (hk + 4 * math.pi * params_k.ms)) * 1e-9
        assert f == pytest.approx(expected, rel=1e-9)

    def test_flat_landscape_gives_zero(self):
        params = MaterialParams(k1=0.0, ku=0.0, miscut_deg=0.0)
        frame = FilmFrame.from_params(params)
        eq = Equilibrium(m=np.array([0.0, 0.0, 1.0]), energy=0.0, label="S+",
                         hessian_eigenvalues=(0.0, 0.0))
        assert ls.fmr_frequency(params, frame, eq) == 0.0

    def test_saddle_rejected(self):
        params = MaterialParams(ku=0.0, miscut_deg=0.0)
        frame = FilmFrame.from_params(params)
        saddle = Equilibrium(m=np.array([1.0, 1.0, 0.0]) / math.sqrt(2.0), energy=-2.1e3,
                             label="S+", hessian_eigenvalues=(-1.0, 1.0))
        with pytest.raises(ValueError, match="not a minimum"):
            ls.fmr_frequency(params, frame, saddle)

    def test_invariant_under_list_order(self, params, frame, minima):
        fs = sorted(ls.fmr_frequency(params, frame, eq) for eq in minima)
        fs_rev = sorted(ls.fmr_frequency(params, frame, eq) for eq in reversed(minima))
        assert fs == fs_rev

    def test_periods_bracket_observed_250ps(self, params, frame, minima):
        periods = [1e3 / ls.fmr_frequency(params, frame, eq) for eq in minima]
        assert min(periods) < 250.0 < max(periods)
        assert all(190.0 <= t <= 310.0 for t in periods)


class TestLabels:
    def test_label_aliases(self):
        assert ls.parse_label("L+d") == "L+↓"
        assert ls.parse_label("S-") == "S-"
        with pytest.raises(ValueError):
            ls.parse_label("Q+")

    def test_down_quartet_is_antipodal(self):
        for name in ("L+", "L-", "S+", "S-"):
            assert np.allclose(DOMAIN_DIAGONALS[name + "↓"], -DOMAIN_DIAGONALS[name])
