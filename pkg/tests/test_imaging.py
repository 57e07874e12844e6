import math

import numpy as np
import pytest

from photomag import imaging as im
from photomag.photoexcitation import PumpPulse

from conftest import TOGGLE_AMPLITUDE, pulse_for_amplitude


def analytic_area(i0, i_th):
    """Closed-form Gaussian-threshold switched area over the spot area."""
    if i0 <= i_th:
        return 0.0
    return min(math.log(i0 / i_th) / 2.0, 1.0)


@pytest.fixture(scope="module")
def flat_beam():
    """Spot much larger than the image: effectively uniform illumination."""
    return im.BeamProfile(peak_fluence=100.0, spot_radius_um=5e4)


class TestGaussianFluence:
    def test_center_value(self):
        beam = im.BeamProfile(peak_fluence=150.0, spot_radius_um=65.0)
        assert im.gaussian_fluence(beam, 0.0, 0.0) == pytest.approx(150.0)

    def test_radius_value(self):
        beam = im.BeamProfile(peak_fluence=150.0, spot_radius_um=65.0)
        assert im.gaussian_fluence(beam, 65.0, 0.0) == pytest.approx(150.0 * math.exp(-2.0))

    def test_plane_integral_quadrature(self):
        """Numerical quadrature of the profile equals I0 pi r^2 / 2."""
        beam = im.BeamProfile(peak_fluence=150.0, spot_radius_um=65.0)
        rho = np.linspace(0.0, 600.0, 40001)
        vals = im.gaussian_fluence(beam, rho, 0.0) * 2 * math.pi * rho
        integral = np.trapezoid(vals, rho)
        expected = 150.0 * math.pi * 65.0**2 / 2.0
        assert integral == pytest.approx(expected, rel=1e-3)


class TestPatterns:
    def test_uniform(self, by_label):
        img = im.uniform_image("L+", 16, 1.0, by_label)
        assert img.width == img.height == 16
        assert np.all(img.label_names() == "L+")
        assert np.allclose(img.mz, by_label["L+"].m[2])

    def test_stripes_alternate(self, by_label):
        img = im.stripe_image(("L+", "S-"), 8.0, 16, 1.0, by_label)
        names = img.label_names()
        assert set(np.unique(names)) == {"L+", "S-"}
        assert names[0, 0] == "L+" and names[0, 4] == "S-"
        assert np.all(names[0] == names[5])  # vertical stripes

    def test_checkerboard(self, by_label):
        img = im.checkerboard_image(("L+", "S-"), 8.0, 16, 1.0, by_label)
        names = img.label_names()
        assert names[0, 0] != names[0, 4]
        assert names[0, 0] != names[4, 0]


class TestSimulateImage:
    def test_area_matches_analytic_oracle(self, params, frame, minima, by_label, coupling):
        pulse = PumpPulse(fluence=150.0, coupling_at_reference=coupling)
        beam = im.BeamProfile(peak_fluence=150.0, spot_radius_um=65.0)
        initial = im.uniform_image("L+", 128, 200.0 / 128, by_label)
        result = im.simulate_image(initial, beam, pulse, params, frame, minima=minima)
        area = im.normalized_switched_area(initial, result.final, beam)
        assert area == pytest.approx(analytic_area(150.0, 34.0), abs=0.02)
        assert result.undecided_pixels == 0

    def test_below_threshold_output_identical(self, params, frame, minima, by_label, coupling):
        pulse = PumpPulse(fluence=30.0, coupling_at_reference=coupling)
        beam = im.BeamProfile(peak_fluence=30.0, spot_radius_um=65.0)
        initial = im.stripe_image(("L+", "S-"), 40.0, 64, 200.0 / 64, by_label)
        result = im.simulate_image(initial, beam, pulse, params, frame, minima=minima)
        assert np.array_equal(result.final.labels, initial.labels)
        assert im.normalized_switched_area(initial, result.final, beam) == 0.0

    def test_contrast_reversal_and_restore_under_flat_pulse(
            self, params, frame, minima, by_label, coupling, toggle_pulse_fluence, flat_beam):
        """At the toggling fluence every large pixel goes L+ -> L- and every
        small pixel S- -> S+ (the contrast reverses, the pattern survives);
        a follow-up 90-degree pulse restores the initial image exactly."""
        beam = im.replace_beam_fluence(flat_beam, toggle_pulse_fluence)
        p0 = pulse_for_amplitude(coupling, TOGGLE_AMPLITUDE, phi_deg=0.0)
        p90 = pulse_for_amplitude(coupling, TOGGLE_AMPLITUDE, phi_deg=90.0)
        initial = im.stripe_image(("L+", "S-"), 16.0, 48, 1.0, by_label)

        flipped = im.simulate_image(initial, beam, p0, params, frame, minima=minima)
        names0 = initial.label_names()
        names1 = flipped.final.label_names()
        assert np.all(names1[names0 == "L+"] == "L-")
        assert np.all(names1[names0 == "S-"] == "S+")
        # contrast (m_z sign) reverses pixelwise
        assert np.all(np.sign(flipped.final.mz) == -np.sign(initial.mz))

        restored = im.simulate_image(flipped.final, beam, p90, params, frame, minima=minima)
        assert np.array_equal(restored.final.labels, initial.labels)

    def test_translation_commutes(self, params, frame, minima, by_label, coupling):
        """Shifting the beam center and comparing against the shifted output."""
        pulse = PumpPulse(fluence=150.0, coupling_at_reference=coupling)
        initial = im.uniform_image("L+", 48, 4.0, by_label)
        centered = im.BeamProfile(peak_fluence=150.0, spot_radius_um=65.0)
        shifted = im.BeamProfile(peak_fluence=150.0, spot_radius_um=65.0,
                                 center_um=(8.0, 0.0))  # exactly 2 pixels
        a = im.simulate_image(initial, centered, pulse, params, frame, minima=minima)
        b = im.simulate_image(initial, shifted, pulse, params, frame, minima=minima)
        assert np.array_equal(a.final.labels[:, :-2], b.final.labels[:, 2:])


class TestAreaSweeps:
    def test_monotone_in_peak_fluence(self, params, frame, minima, by_label, coupling):
        pulse = PumpPulse(fluence=150.0, coupling_at_reference=coupling)
        beam = im.BeamProfile(peak_fluence=150.0, spot_radius_um=65.0)
        initial = im.uniform_image("L+", 64, 200.0 / 64, by_label)
        values = [10.0, 25.0, 33.0, 40.0, 60.0, 90.0, 150.0]
        rows = im.area_sweep("fluence", values, initial, beam, pulse, params, frame,
                             minima=minima)
        areas = [r["normalized_area"] for r in rows]
        assert all(b >= a for a, b in zip(areas, areas[1:]))
        assert areas[0] == 0.0 and areas[1] == 0.0 and areas[2] == 0.0
        assert areas[3] > 0.0

    def test_wavelength_sweep_peaks_at_resonance(self, params, frame, minima, by_label,
                                                 coupling):
        pulse = PumpPulse(fluence=83.0, coupling_at_reference=coupling)
        beam = im.BeamProfile(peak_fluence=83.0, spot_radius_um=65.0)
        initial = im.uniform_image("L+", 64, 200.0 / 64, by_label)
        wavelengths = np.arange(1225.0, 1390.0, 10.0)
        rows = im.area_sweep("wavelength", wavelengths, initial, beam, pulse, params,
                             frame, minima=minima)
        areas = np.array([r["normalized_area"] for r in rows])
        best = wavelengths[int(np.argmax(areas))]
        assert abs(best - 1305.0) <= 20.0
        assert areas.max() > 0.2


class TestPgm:
    def test_single_pixel_extremes(self, by_label):
        img = im.DomainImage(labels=np.array([[0]]), mz=np.array([[1.0]]), pixel_pitch_um=1.0)
        data = im.render_pgm(img, "mz")
        assert data.endswith(b"\xff")
        img2 = im.DomainImage(labels=np.array([[0]]), mz=np.array([[-1.0]]), pixel_pitch_um=1.0)
        assert im.render_pgm(img2, "mz").endswith(b"\x00")

    def test_header_format(self, by_label):
        img = im.uniform_image("L+", 200, 1.0, by_label)
        data = im.render_pgm(img, "mz")
        assert data.startswith(b"P5\n200 200\n255\n")
        assert len(data) == len(b"P5\n200 200\n255\n") + 200 * 200

    def test_difference_mode_levels(self, by_label):
        a = im.uniform_image("L+", 4, 1.0, by_label)
        b = im.uniform_image("L-", 4, 1.0, by_label)
        data = im.render_pgm(b, "difference", reference=a)
        assert set(data[-16:]) == {255}
        same = im.render_pgm(a, "difference", reference=a)
        assert set(same[-16:]) == {128}

    def test_label_roundtrip_through_pgm(self, by_label):
        img = im.stripe_image(("L+", "S-"), 8.0, 32, 1.0, by_label)
        data = im.render_pgm(img, "labels")
        back = im.load_pgm_labels(data, 1.0, by_label)
        assert np.array_equal(back.labels, img.labels)
