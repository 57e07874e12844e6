"""Per-pixel macrospin imaging of switched domains under a Gaussian beam.

Each pixel of a domain image holds an independent macrospin (no exchange
between pixels: the switching is coherent rotation, not wall motion, so
inter-pixel coupling is deliberately absent - this is the model's central
approximation). A pump pulse with a Gaussian fluence profile assigns each
pixel a local fluence; the pixel's fate depends only on (initial label,
local photo amplitude), so outcomes are memoized on a quantized amplitude
grid (512 levels) and each distinct case is integrated once, in one
vectorized batch. Results are therefore bit-identical regardless of any
worker configuration.

Outputs are label maps, out-of-plane (m_z) contrast maps rendered as
binary PGM, difference maps, and the normalized switched area
(label-changed area over the pump spot area pi r^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import landscape
from .dynamics import integrate_batch
from .magnetics import FilmFrame, MaterialParams
from .photoexcitation import PumpPulse, SpectralModel, photo_amplitude

MEMO_LEVELS = 512


@dataclass(frozen=True)
class BeamProfile:
    """Gaussian pump beam: fluence(rho) = I0 exp(-2 rho^2 / r^2).

    peak_fluence is the value at the spot center (mJ cm^-2); spot_radius_um
    is r (65 um default, a 130 um diameter spot); center in um.
    """

    peak_fluence: float = 150.0
    spot_radius_um: float = 65.0
    center_um: tuple = (0.0, 0.0)

    def __post_init__(self):
        if self.spot_radius_um <= 0:
            raise ValueError("spot radius must be positive")
        if self.peak_fluence < 0:
            raise ValueError("peak fluence must be non-negative")


def gaussian_fluence(beam: BeamProfile, x_um, y_um):
    """Local fluence at (x, y) um; accepts arrays."""
    dx = np.asarray(x_um, dtype=float) - beam.center_um[0]
    dy = np.asarray(y_um, dtype=float) - beam.center_um[1]
    rho2 = dx * dx + dy * dy
    return beam.peak_fluence * np.exp(-2.0 * rho2 / beam.spot_radius_um**2)


@dataclass
class DomainImage:
    """Raster of domain labels plus the m_z (Faraday-like) contrast.

    labels holds indices into landscape.LABELS; mz the out-of-plane
    component per pixel; pixel_pitch_um the pixel size. Pixel (0, 0) is the
    upper-left corner, x to the right, y downward, with physical
    coordinates centered on the image.
    """

    labels: np.ndarray
    mz: np.ndarray
    pixel_pitch_um: float

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=np.int16)
        self.mz = np.asarray(self.mz, dtype=float)
        if self.labels.ndim != 2 or self.labels.shape != self.mz.shape:
            raise ValueError("labels and mz must be matching 2-D rasters")
        if self.pixel_pitch_um <= 0:
            raise ValueError("pixel pitch must be positive")

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def width(self) -> int:
        return self.labels.shape[1]

    def label_names(self) -> np.ndarray:
        return np.asarray(landscape.LABELS, dtype=object)[self.labels]

    def pixel_coordinates(self):
        """Physical (x, y) um of every pixel center, image-centered."""
        h, w = self.labels.shape
        x = (np.arange(w) - (w - 1) / 2.0) * self.pixel_pitch_um
        y = (np.arange(h) - (h - 1) / 2.0) * self.pixel_pitch_um
        return np.meshgrid(x, y)


@dataclass
class ImageResult:
    """Outcome of pulsing a domain image."""

    final: DomainImage
    difference: np.ndarray          # +1 changed, 0 unchanged per pixel
    undecided_pixels: int
    undecided_mask: np.ndarray = field(repr=False, default=None)


def _label_index(label: str) -> int:
    return landscape.LABELS.index(landscape.parse_label(label))


def uniform_image(label: str, size_px: int, pixel_pitch_um: float,
                  minima_by_label: dict) -> DomainImage:
    idx = _label_index(label)
    mz = minima_by_label[landscape.parse_label(label)].m[2]
    return DomainImage(
        labels=np.full((size_px, size_px), idx, dtype=np.int16),
        mz=np.full((size_px, size_px), mz),
        pixel_pitch_um=pixel_pitch_um,
    )


def stripe_image(labels: tuple, period_um: float, size_px: int,
                 pixel_pitch_um: float, minima_by_label: dict) -> DomainImage:
    """Vertical stripes alternating between two labels."""
    a, b = (landscape.parse_label(s) for s in labels)
    x = np.arange(size_px) * pixel_pitch_um
    in_a = ((x // (period_um / 2.0)).astype(int) % 2) == 0
    row = np.where(in_a, _label_index(a), _label_index(b))
    lab = np.tile(row, (size_px, 1))
    mza, mzb = minima_by_label[a].m[2], minima_by_label[b].m[2]
    mz = np.where(lab == _label_index(a), mza, mzb)
    return DomainImage(labels=lab, mz=mz, pixel_pitch_um=pixel_pitch_um)


def checkerboard_image(labels: tuple, period_um: float, size_px: int,
                       pixel_pitch_um: float, minima_by_label: dict) -> DomainImage:
    a, b = (landscape.parse_label(s) for s in labels)
    coords = np.arange(size_px) * pixel_pitch_um
    cell = (coords // (period_um / 2.0)).astype(int)
    board = (cell[None, :] + cell[:, None]) % 2 == 0
    lab = np.where(board, _label_index(a), _label_index(b))
    mz = np.where(board, minima_by_label[a].m[2], minima_by_label[b].m[2])
    return DomainImage(labels=lab, mz=mz, pixel_pitch_um=pixel_pitch_um)


class PixelOutcomeCache:
    """Memoized pulse outcomes on a quantized photo-amplitude grid.

    Keyed by (initial label index, amplitude bin); one vectorized LLG batch
    integrates every distinct case that a whole image (or an entire sweep)
    needs. Bins quantize the initial amplitude from 0 to amp_floor (the
    most negative amplitude the cache was created for).
    """

    def __init__(self, params: MaterialParams, frame: FilmFrame, minima,
                 amp_floor: float, lifetime_ps: float,
                 polarization_angle_deg: float = 0.0,
                 t_end_ps: float = 1000.0, dt_ps: float = 0.05,
                 levels: int = MEMO_LEVELS):
        if amp_floor >= 0.0:
            raise ValueError("amp_floor must be negative (photo amplitudes are)")
        self.params, self.frame, self.minima = params, frame, minima
        self.amp_floor = float(amp_floor)
        self.lifetime_ps = lifetime_ps
        self.polarization_angle_deg = polarization_angle_deg
        self.t_end_ps, self.dt_ps = t_end_ps, dt_ps
        self.levels = levels
        self._results: dict = {}
        self._by_label = landscape.minima_by_label(minima)
        self._global_index = {eq.label: landscape.LABELS.index(eq.label) for eq in minima}

    def bin_of(self, amplitude) -> np.ndarray:
        """Quantization bin (0 = no pulse edge case handled separately)."""
        frac = np.clip(np.asarray(amplitude, dtype=float) / self.amp_floor, 0.0, 1.0)
        return np.minimum((frac * self.levels).astype(int), self.levels - 1)

    def bin_amplitude(self, b) -> np.ndarray:
        """Representative (bin-center) amplitude."""
        return (np.asarray(b, dtype=float) + 0.5) / self.levels * self.amp_floor

    def ensure(self, cases) -> None:
        """Integrate any (label_idx, bin) cases not yet cached, in one batch."""
        todo = [c for c in set(cases) if c not in self._results]
        if not todo:
            return
        m0 = np.array([self._by_label[landscape.LABELS[li]].m for li, _ in todo])
        amps = self.bin_amplitude(np.array([b for _, b in todo]))
        mf, tt, tm = integrate_batch(
            m0, amps, self.polarization_angle_deg, self.lifetime_ps,
            self.params, self.frame, t_end_ps=self.t_end_ps, dt_ps=self.dt_ps,
            tail_window_ps=100.0, tail_stride_ps=2.0,
        )
        idx = landscape.classify_batch(tm, self.minima)       # (K, N) into minima
        final = idx[-1]
        for n, case in enumerate(todo):
            resident = bool(np.all(idx[:, n] == final[n]))
            eq = self.minima[final[n]]
            self._results[case] = (
                self._global_index[eq.label], float(mf[n, 2]), resident,
            )

    def outcome(self, label_idx: int, b: int):
        """(final global label index, final mz, decided) for a cached case."""
        return self._results[(label_idx, b)]


def simulate_image(initial: DomainImage, beam: BeamProfile, pulse: PumpPulse,
                   params: MaterialParams, frame: FilmFrame,
                   minima=None, spectral_model: SpectralModel | None = None,
                   cache: PixelOutcomeCache | None = None,
                   t_end_ps: float = 1000.0, dt_ps: float = 0.05) -> ImageResult:
    """Pulse every pixel with its local fluence and collect the final image.

    Pixels whose trajectory is still migrating between basins at the end of
    the run are counted as undecided and keep a mid-gray difference value.
    """
    if minima is None:
        minima = landscape.find_minima(params, frame)
    state0 = photo_amplitude(pulse, spectral_model)   # validates calibration
    x, y = initial.pixel_coordinates()
    local_fluence = gaussian_fluence(beam, x, y)
    scale = float(state0.amplitude) / pulse.fluence if pulse.fluence > 0 else 0.0
    local_amp = scale * local_fluence

    if cache is None:
        floor = min(float(np.min(local_amp)), -1e-9)
        cache = PixelOutcomeCache(
            params, frame, minima, amp_floor=floor, lifetime_ps=pulse.lifetime_ps,
            polarization_angle_deg=pulse.polarization_angle_deg,
            t_end_ps=t_end_ps, dt_ps=dt_ps,
        )

    bins = cache.bin_of(local_amp)
    keys = initial.labels.astype(np.int64) * cache.levels + bins
    unique_keys = np.unique(keys)
    cache.ensure([divmod(int(k), cache.levels) for k in unique_keys])

    lab_of = np.empty(unique_keys.size, dtype=np.int16)
    mz_of = np.empty(unique_keys.size)
    undecided_of = np.empty(unique_keys.size, dtype=bool)
    for n, k in enumerate(unique_keys):
        lab, mz, decided = cache.outcome(*divmod(int(k), cache.levels))
        lab_of[n], mz_of[n], undecided_of[n] = lab, mz, not decided
    pos = np.searchsorted(unique_keys, keys)
    out_labels = lab_of[pos]
    out_mz = mz_of[pos]
    undecided = undecided_of[pos]

    final = DomainImage(labels=out_labels, mz=out_mz, pixel_pitch_um=initial.pixel_pitch_um)
    difference = (out_labels != initial.labels).astype(np.int8)
    return ImageResult(
        final=final,
        difference=difference,
        undecided_pixels=int(np.count_nonzero(undecided)),
        undecided_mask=undecided,
    )


def normalized_switched_area(before: DomainImage, after: DomainImage,
                             beam: BeamProfile) -> float:
    """Label-changed area over the pump spot area pi r^2."""
    if before.labels.shape != after.labels.shape:
        raise ValueError("image dimensions differ")
    if before.pixel_pitch_um != after.pixel_pitch_um:
        raise ValueError("pixel pitches differ")
    changed = np.count_nonzero(before.labels != after.labels)
    pixel_area = before.pixel_pitch_um**2
    return changed * pixel_area / (math.pi * beam.spot_radius_um**2)


def render_pgm(image: DomainImage, mode: str = "mz",
               reference: DomainImage | None = None,
               undecided_mask: np.ndarray | None = None) -> bytes:
    """Binary (P5) PGM bytes.

    mode "mz": m_z in [-1, 1] mapped linearly to [0, 255] (Faraday-like
    contrast); "labels": label index mapped to spread gray levels;
    "difference": mid-gray for unchanged pixels, white for changed,
    dark-gray for undecided (needs reference).
    """
    if mode == "mz":
        gray = np.clip((image.mz + 1.0) * 0.5 * 255.0, 0.0, 255.0).round().astype(np.uint8)
    elif mode == "labels":
        n = len(landscape.LABELS)
        gray = (image.labels.astype(float) * (255.0 / (n - 1))).round().astype(np.uint8)
    elif mode == "difference":
        if reference is None:
            raise ValueError("difference mode needs a reference image")
        changed = image.labels != reference.labels
        gray = np.where(changed, 255, 128).astype(np.uint8)
        if undecided_mask is not None:
            gray[undecided_mask] = 64
    else:
        raise ValueError(f"unknown render mode {mode!r}")
    header = f"P5\n{image.width} {image.height}\n255\n".encode("ascii")
    return header + gray.tobytes()


def load_pgm_labels(data: bytes, pixel_pitch_um: float,
                    minima_by_label: dict) -> DomainImage:
    """Read a P5 PGM and map its gray levels back to the nearest label."""
    tokens, pos = [], 0
    while len(tokens) < 4:
        # header tokens with '#' comments allowed
        end = data.index(b"\n", pos) if b"\n" in data[pos:] else len(data)
        line = data[pos:end].split(b"#")[0].split()
        tokens.extend(line)
        pos = end + 1
    if tokens[0] != b"P5":
        raise ValueError("only binary (P5) PGM supported")
    width, height, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    raw = np.frombuffer(data[pos:pos + width * height], dtype=np.uint8)
    if raw.size != width * height:
        raise ValueError("truncated PGM payload")
    n = len(landscape.LABELS)
    idx = np.clip(np.round(raw.reshape(height, width).astype(float) / (255.0 / (n - 1))), 0, n - 1)
    labels = idx.astype(np.int16)
    mz = np.empty((height, width))
    for k, name in enumerate(landscape.LABELS):
        if name in minima_by_label:
            mz[labels == k] = minima_by_label[name].m[2]
    return DomainImage(labels=labels, mz=mz, pixel_pitch_um=pixel_pitch_um)


def area_sweep(variable: str, values, initial: DomainImage, beam: BeamProfile,
               pulse: PumpPulse, params: MaterialParams, frame: FilmFrame,
               minima=None, spectral_model: SpectralModel | None = None,
               t_end_ps: float = 1000.0, dt_ps: float = 0.05):
    """Normalized switched area vs peak fluence or wavelength.

    One amplitude-quantized outcome cache is shared across the whole sweep
    (a pixel's fate depends only on its local amplitude), so the cost is a
    single batch of at most levels x labels trajectories.

    Returns a list of dict rows with the axis value, normalized_area and
    undecided_fraction.
    """
    from dataclasses import replace

    if variable not in ("fluence", "wavelength"):
        raise ValueError("variable must be 'fluence' or 'wavelength'")
    if minima is None:
        minima = landscape.find_minima(params, frame)

    # deepest amplitude any sweep point can reach
    worst = -1e-9
    for v in values:
        probe = replace(pulse, fluence=float(v)) if variable == "fluence" else replace(
            pulse, wavelength_nm=float(v))
        amp = float(photo_amplitude(probe, spectral_model).amplitude)
        worst = min(worst, amp)
    cache = PixelOutcomeCache(
        params, frame, minima, amp_floor=worst, lifetime_ps=pulse.lifetime_ps,
        polarization_angle_deg=pulse.polarization_angle_deg,
        t_end_ps=t_end_ps, dt_ps=dt_ps,
    )

    rows = []
    npix = initial.labels.size
    for v in values:
        p = replace(pulse, fluence=float(v)) if variable == "fluence" else replace(
            pulse, wavelength_nm=float(v))
        b = replace_beam_fluence(beam, p.fluence) if variable == "fluence" else beam
        result = simulate_image(initial, b, p, params, frame, minima=minima,
                                spectral_model=spectral_model, cache=cache,
                                t_end_ps=t_end_ps, dt_ps=dt_ps)
        rows.append({
            ("I0_mJcm2" if variable == "fluence" else "lambda_nm"): float(v),
            "normalized_area": normalized_switched_area(initial, result.final, b),
            "undecided_fraction": result.undecided_pixels / npix,
        })
    return rows


def replace_beam_fluence(beam: BeamProfile, fluence: float) -> BeamProfile:
    return BeamProfile(peak_fluence=fluence, spot_radius_um=beam.spot_radius_um,
                       center_um=beam.center_um)
