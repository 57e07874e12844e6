"""Landau-Lifshitz-Gilbert dynamics under a decaying photo-induced anisotropy.

The equation of motion is the Landau-Lifshitz form of the Gilbert equation,

    dm/dt = -gamma / (1 + alpha^2) * [ m x H_eff + alpha m x (m x H_eff) ],

integrated with fixed-step classical RK4 and a renormalization of m after
every step (|m| = 1 to machine precision at all samples). Fixed stepping is
deliberate: trajectories are short (<= a few ns) and bit-for-bit
reproducibility across runs and worker counts matters more than step
economy. Time is in picoseconds everywhere.

The photo-induced anisotropy enters through a pulse schedule: an object
with `polarization_angle_deg` and `amplitude_at(t_ps)` (step rise at t = 0,
exponential decay afterwards; see photoexcitation). Under static fields the
energy must not increase (Lyapunov property of damped LLG); the integrator
enforces this and fails loudly if a step is too coarse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import curve_fit

from . import landscape
from .magnetics import (
    FilmFrame,
    MaterialParams,
    PhotoAnisotropyState,
    check_unit,
    energy_gradient,
    total_energy,
)

MAX_DT_PS = 0.1
RESIDENCY_WINDOW_PS = 100.0    # basin residency required for a verdict
STABILIZATION_CONE_DEG = 5.0
FIT_WINDOW_PS = 150.0


class IntegrationError(RuntimeError):
    """Integration diagnostics failed (step too large, non-convergence...)."""


class FitError(RuntimeError):
    """The rise-time fit could not be performed on this signal."""


@dataclass
class Trajectory:
    """Time series of the reduced magnetization during/after a pulse."""

    times: np.ndarray            # ps, strictly increasing
    m: np.ndarray                # (N, 3), unit rows
    energies: np.ndarray         # erg cm^-3
    labels: list[str]            # domain label per sample

    def component(self, axis) -> np.ndarray:
        return self.m @ np.asarray(axis, dtype=float)

    def to_csv(self, path) -> None:
        """Write t_ps, mx, my, mz, energy, label rows."""
        with open(path, "w", encoding="utf-8") as f:
            f.write("t_ps,mx,my,mz,energy_erg_cm3,label\n")
            for t, m, e, lab in zip(self.times, self.m, self.energies, self.labels):
                f.write(f"{t!r},{m[0]!r},{m[1]!r},{m[2]!r},{e!r},{lab}\n")


@dataclass
class SwitchOutcome:
    """Verdict and timing of a single-pulse switching attempt."""

    initial_label: str
    final_label: str
    switched: bool
    undecided: bool
    crossing_time_ps: float | None
    stabilization_time_ps: float | None
    fitted_tau_ps: float | None
    trajectory: Trajectory = field(repr=False, default=None)


def llg_rhs(m, h_eff, alpha: float, gamma: float):
    """dm/dt in ps^-1; gamma in rad s^-1 Oe^-1, h_eff in Oe.

    Always orthogonal to m. Accepts (..., 3) arrays.
    """
    m = np.asarray(m, dtype=float)
    h_eff = np.asarray(h_eff, dtype=float)
    pre = -gamma * 1e-12 / (1.0 + alpha * alpha)
    mxh = np.cross(m, h_eff)
    return pre * (mxh + alpha * np.cross(m, mxh))


def _rhs_factory(params, frame, schedule, h_applied):
    """RHS f(m, t) with the pulse amplitude evaluated at stage times."""
    alpha, gamma, ms = params.alpha, params.gamma, params.ms

    def f(m, t):
        state = None
        if schedule is not None:
            state = PhotoAnisotropyState(
                amplitude=schedule.amplitude_at(t),
                polarization_angle_deg=schedule.polarization_angle_deg,
            )
        h = -energy_gradient(m, params, frame, h_applied, state) / ms
        return llg_rhs(m, h, alpha, gamma)

    return f


def _rk4_step(f, m, t, dt):
    k1 = f(m, t)
    k2 = f(m + 0.5 * dt * k1, t + 0.5 * dt)
    k3 = f(m + 0.5 * dt * k2, t + 0.5 * dt)
    k4 = f(m + dt * k3, t + dt)
    out = m + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return out / np.linalg.norm(out, axis=-1, keepdims=True)


def integrate(
    m0,
    params: MaterialParams,
    frame: FilmFrame,
    pulse_schedule=None,
    h_applied=None,
    t_end_ps: float = 1000.0,
    dt_ps: float = 0.05,
    t_start_ps: float = 0.0,
    minima: list | None = None,
) -> Trajectory:
    """Integrate LLG from m0, sampling every step.

    The pulse (if any) arrives at t = 0; pass a negative t_start_ps to
    record pre-pulse samples. Labels are assigned against the zero-field
    minima (computed once if not supplied).
    """
    if dt_ps > MAX_DT_PS:
        raise ValueError(f"dt_ps = {dt_ps} exceeds the {MAX_DT_PS} ps integrator contract")
    if t_end_ps <= t_start_ps:
        raise ValueError("t_end_ps must exceed t_start_ps")
    m = check_unit(m0).astype(float).copy()
    if minima is None:
        minima = landscape.find_minima(params, frame)

    f = _rhs_factory(params, frame, pulse_schedule, h_applied)
    n_steps = int(round((t_end_ps - t_start_ps) / dt_ps))
    times = t_start_ps + dt_ps * np.arange(n_steps + 1)

    samples = np.empty((n_steps + 1, 3))
    energies = np.empty(n_steps + 1)
    samples[0] = m
    energies[0] = total_energy(m, params, frame, h_applied, _state_at(pulse_schedule, times[0]), check=False)

    static = pulse_schedule is None
    e_scale = max(abs(params.k1), abs(params.ku), 1.0)
    for k in range(n_steps):
        m = _rk4_step(f, m, times[k], dt_ps)
        samples[k + 1] = m
        e = total_energy(m, params, frame, h_applied, _state_at(pulse_schedule, times[k + 1]), check=False)
        energies[k + 1] = e
        if static and e > energies[k] + 1e-6 * max(abs(energies[k]), e_scale):
            raise IntegrationError(
                f"energy increased by {e - energies[k]:.3e} erg/cm^3 at t = {times[k + 1]:.2f} ps "
                f"under static fields; reduce dt_ps (currently {dt_ps})"
            )

    idx = landscape.classify_batch(samples, minima)
    labels = [minima[i].label for i in idx]
    return Trajectory(times=times, m=samples, energies=energies, labels=labels)


def _state_at(schedule, t):
    if schedule is None:
        return None
    return PhotoAnisotropyState(
        amplitude=schedule.amplitude_at(t),
        polarization_angle_deg=schedule.polarization_angle_deg,
    )


def integrate_batch(
    m0s,
    amplitudes,
    polarization_angle_deg: float,
    lifetime_ps: float,
    params: MaterialParams,
    frame: FilmFrame,
    t_end_ps: float = 1000.0,
    dt_ps: float = 0.05,
    tail_window_ps: float = RESIDENCY_WINDOW_PS,
    tail_stride_ps: float = 1.0,
):
    """Integrate many independent macrospins at once (imaging fast path).

    Each row of m0s gets its own initial photo amplitude; polarization and
    lifetime are shared. Starts at t = 0 (pulse arrival). Returns
    (m_final (N,3), tail_times (K,), tail_m (K,N,3)) where the tail covers
    the final residency window.
    """
    if dt_ps > MAX_DT_PS:
        raise ValueError(f"dt_ps = {dt_ps} exceeds the {MAX_DT_PS} ps integrator contract")
    m = np.array([check_unit(v) for v in np.asarray(m0s, dtype=float)])
    a0 = np.asarray(amplitudes, dtype=float)
    alpha, gamma, ms = params.alpha, params.gamma, params.ms

    def f(mm, t):
        amp = a0 * math.exp(-t / lifetime_ps) if t >= 0.0 else np.zeros_like(a0)
        state = PhotoAnisotropyState(amplitude=amp, polarization_angle_deg=polarization_angle_deg)
        h = -energy_gradient(mm, params, frame, None, state) / ms
        return llg_rhs(mm, h, alpha, gamma)

    n_steps = int(round(t_end_ps / dt_ps))
    times = dt_ps * np.arange(n_steps + 1)
    stride = max(1, int(round(tail_stride_ps / dt_ps)))
    tail_start = t_end_ps - tail_window_ps

    tail_times, tail_m = [], []
    for k in range(n_steps):
        m = _rk4_step(f, m, times[k], dt_ps)
        if times[k + 1] >= tail_start and (k + 1) % stride == 0:
            tail_times.append(times[k + 1])
            tail_m.append(m.copy())
    return m, np.array(tail_times), np.array(tail_m)


def simulate_switch(
    initial_label: str,
    params: MaterialParams,
    frame: FilmFrame,
    pulse,
    t_end_ps: float = 1000.0,
    dt_ps: float = 0.05,
    spectral_model=None,
    t_pre_ps: float = 10.0,
    minima: list | None = None,
) -> SwitchOutcome:
    """Pulse the system starting from the labeled minimum and judge the result.

    The run starts t_pre_ps before pulse arrival, integrates to t_end_ps and
    requires the trajectory to reside in one basin for the final residency
    window; otherwise the outcome is undecided (neither switched nor not).
    """
    from .photoexcitation import build_schedule  # deferred: calibration calls back here

    initial_label = landscape.parse_label(initial_label)
    if minima is None:
        minima = landscape.find_minima(params, frame)
    by_label = landscape.minima_by_label(minima)
    if initial_label not in by_label:
        raise ValueError(f"no minimum labeled {initial_label} for these parameters")

    schedule = build_schedule(pulse, spectral_model)
    traj = integrate(
        by_label[initial_label].m,
        params,
        frame,
        pulse_schedule=schedule,
        t_end_ps=t_end_ps,
        dt_ps=dt_ps,
        t_start_ps=-abs(t_pre_ps),
        minima=minima,
    )

    labels = traj.labels
    final_label = labels[-1]
    in_window = traj.times >= traj.times[-1] - RESIDENCY_WINDOW_PS
    resident = all(labels[i] == final_label for i in np.nonzero(in_window)[0])

    # first time after which the label equals final_label for good
    crossing = None
    mismatches = [i for i, lab in enumerate(labels) if lab != final_label]
    if mismatches:
        if mismatches[-1] + 1 < len(labels):
            crossing = float(traj.times[mismatches[-1] + 1])
    else:
        crossing = float(traj.times[0])

    # first time after which m stays within the stabilization cone
    stabilization = None
    target = by_label.get(final_label)
    if target is not None:
        cosang = np.clip(traj.m @ target.m, -1.0, 1.0)
        outside = np.nonzero(cosang < math.cos(math.radians(STABILIZATION_CONE_DEG)))[0]
        if len(outside) == 0:
            stabilization = float(traj.times[0])
        elif outside[-1] + 1 < len(labels):
            stabilization = float(traj.times[outside[-1] + 1])

    switched = resident and final_label != initial_label
    tau = None
    if switched:
        try:
            tau = fit_rise_time(traj).tau_ps
        except FitError:
            tau = None

    return SwitchOutcome(
        initial_label=initial_label,
        final_label=final_label,
        switched=switched,
        undecided=not resident,
        crossing_time_ps=crossing,
        stabilization_time_ps=stabilization,
        fitted_tau_ps=tau,
        trajectory=traj,
    )


@dataclass(frozen=True)
class RiseFit:
    """Result of the exponential rise fit a (1 - exp(-t/tau))."""

    tau_ps: float
    amplitude: float
    residual_rms: float


def fit_rise_time(
    traj: Trajectory,
    component_axis=(0.0, 0.0, 1.0),
    fit_window_ps: float = FIT_WINDOW_PS,
) -> RiseFit:
    """Fit a (1 - exp(-t/tau)) to the normalized rise of one m component.

    The component (m_z by default, the out-of-plane projection an imaging
    probe sees) is taken on t in [0, fit_window_ps], offset to start at 0
    and normalized by its net change over the window, so falling transients
    fit the same way as rising ones. A signal with no net trend is refused.
    """
    sel = (traj.times >= 0.0) & (traj.times <= fit_window_ps)
    if np.count_nonzero(sel) < 8:
        raise FitError("too few samples in the fit window")
    t = traj.times[sel] - traj.times[sel][0]
    c = traj.component(component_axis)[sel]

    tail = c[int(0.8 * len(c)):]
    delta = float(np.mean(tail) - c[0])
    if abs(delta) < 1e-3:
        raise FitError("component shows no net rise over the fit window")
    s = (c - c[0]) / delta
    if np.corrcoef(t, s)[0, 1] <= 0.0:
        raise FitError("component trend is not a rise after normalization")

    def model(tt, a, tau):
        return a * (1.0 - np.exp(-tt / tau))

    try:
        popt, _ = curve_fit(
            model, t, s, p0=(1.0, 20.0), bounds=((0.0, 1e-3), (10.0, 1e4)), maxfev=10000
        )
    except (RuntimeError, ValueError) as exc:
        raise FitError(f"least-squares fit failed: {exc}") from exc
    a, tau = float(popt[0]), float(popt[1])
    resid = float(np.sqrt(np.mean((model(t, a, tau) - s) ** 2)))
    return RiseFit(tau_ps=tau, amplitude=a, residual_rms=resid)


def relax_in_field(
    m0,
    params: MaterialParams,
    frame: FilmFrame,
    h_applied,
    t_relax_ps: float = 500.0,
    dt_ps: float = 0.05,
    max_extra_chunks: int = 40,
) -> np.ndarray:
    """State-preparation protocol: relax under H, remove H, relax again.

    Integrates under the applied field for t_relax_ps (extending in chunks
    until the torque dies out), then repeats at zero field. Returns the
    final unit magnetization. Raises IntegrationError if either phase fails
    to settle.
    """
    m = check_unit(m0).astype(float).copy()
    for h in (np.asarray(h_applied, dtype=float), None):
        m = _settle(m, params, frame, h, t_relax_ps, dt_ps, max_extra_chunks)
    return m


def _settle(m, params, frame, h, t_chunk_ps, dt_ps, max_chunks):
    f = _rhs_factory(params, frame, None, h)
    tol = 1e-7  # rad/ps; this slow only within ~1e-5 rad of the fixed point
    for _ in range(max_chunks):
        n_steps = int(round(t_chunk_ps / dt_ps))
        for k in range(n_steps):
            m = _rk4_step(f, m, k * dt_ps, dt_ps)
        if float(np.linalg.norm(f(m, 0.0))) < tol:
            return m
    raise IntegrationError(
        f"relaxation did not settle within {max_chunks} chunks of {t_chunk_ps} ps"
    )
