"""Metastable states of the anisotropy landscape and their small oscillations.

Minima of the free energy on the unit sphere are located by multi-start
projected gradient descent (tangent-space steps with a backtracking line
search) followed by a Newton polish in a local tangent basis, so there are
no coordinate poles anywhere in the search. Each converged point is
verified to be a true minimum through the 2x2 curvature matrix of the
energy restricted to the sphere,

    H_ij = t_i . (d2E/dm2) . t_j - (m . dE/dm) delta_ij,

with (t_1, t_2) an orthonormal tangent basis. The same matrix gives the
small-oscillation (ferromagnetic resonance) frequency about a minimum,

    f = gamma / (2 pi Ms) * sqrt(det H),

which is the curvature (Smit-Beljers) formula written in a pole-free basis.

Minima are labeled by the sign pattern of the nearest <111> body diagonal:
L+ for (+,-,+), L- for (+,+,-), S+ for (+,+,+), S- for (+,-,-), and the
antipodal quartet carries a trailing arrow (L+^, written "L+v" in ASCII
alias form ... see LABEL_ALIASES). Labels are keyed to geometry, not to
energy ordering, so they are stable under parameter sweeps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .magnetics import (
    FilmFrame,
    MaterialParams,
    check_unit,
    energy_gradient,
    energy_hessian,
    total_energy,
    unit_vector,
)

SQ3 = 1.0 / math.sqrt(3.0)

# sign patterns of the eight <111> diagonals; the down quartet is the
# antipodal image of the four canonical states
DOMAIN_DIAGONALS: dict[str, np.ndarray] = {
    "L+": np.array([1.0, -1.0, 1.0]) * SQ3,
    "L-": np.array([1.0, 1.0, -1.0]) * SQ3,
    "S+": np.array([1.0, 1.0, 1.0]) * SQ3,
    "S-": np.array([1.0, -1.0, -1.0]) * SQ3,
    "L+↓": np.array([-1.0, 1.0, -1.0]) * SQ3,
    "L-↓": np.array([-1.0, -1.0, 1.0]) * SQ3,
    "S+↓": np.array([-1.0, -1.0, -1.0]) * SQ3,
    "S-↓": np.array([-1.0, 1.0, 1.0]) * SQ3,
}

LABELS = tuple(DOMAIN_DIAGONALS)

# ASCII-friendly aliases accepted wherever a label is parsed (CLI flags etc.)
LABEL_ALIASES = {name.replace("↓", "d"): name for name in LABELS}

GRAD_TOL_FACTOR = 1e-6      # convergence: |grad_tangent| < factor * |K1|
DEDUP_ANGLE_DEG = 0.5
MAX_DESCENT_ITER = 2000


class ConvergenceError(RuntimeError):
    """A minimization start failed to reach a verified minimum."""


def parse_label(name: str) -> str:
    """Normalize a domain label, accepting the ASCII 'd' alias for the arrow."""
    if name in DOMAIN_DIAGONALS:
        return name
    if name in LABEL_ALIASES:
        return LABEL_ALIASES[name]
    raise ValueError(f"unknown domain label {name!r}; known: {', '.join(LABELS)}")


@dataclass(frozen=True)
class Equilibrium:
    """A verified local minimum of the free energy on the unit sphere."""

    m: np.ndarray
    energy: float
    label: str
    hessian_eigenvalues: tuple[float, float]


def _tangent_basis(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal basis of the tangent plane at unit vector m."""
    helper = np.array([0.0, 0.0, 1.0]) if abs(m[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    t1 = unit_vector(np.cross(helper, m))
    t2 = np.cross(m, t1)
    return t1, t2


def sphere_hessian(
    m,
    params: MaterialParams,
    frame: FilmFrame,
    h_applied=None,
    photo_state=None,
) -> np.ndarray:
    """2x2 curvature matrix of the energy restricted to the sphere at m."""
    m = check_unit(m)
    t1, t2 = _tangent_basis(m)
    hess = energy_hessian(m, params, frame, photo_state)
    lam = float(energy_gradient(m, params, frame, h_applied, photo_state) @ m)
    h = np.empty((2, 2))
    h[0, 0] = t1 @ hess @ t1 - lam
    h[0, 1] = h[1, 0] = t1 @ hess @ t2
    h[1, 1] = t2 @ hess @ t2 - lam
    return h


def _descend(m0, params, frame, h_applied, grad_tol, max_iter=MAX_DESCENT_ITER):
    """Projected gradient descent with backtracking; returns (m, converged)."""
    m = unit_vector(np.asarray(m0, dtype=float))
    energy = float(total_energy(m, params, frame, h_applied, check=False))
    step = 1.0e-5  # (erg cm^-3)^-1; rescaled adaptively below
    for _ in range(max_iter):
        g = energy_gradient(m, params, frame, h_applied)
        gt = g - (g @ m) * m
        gnorm = float(np.linalg.norm(gt))
        if gnorm < grad_tol:
            return m, True
        accepted = False
        for _ in range(60):
            trial = unit_vector(m - step * gt)
            e_trial = float(total_energy(trial, params, frame, h_applied, check=False))
            if e_trial <= energy - 0.25 * step * gnorm**2:
                m, energy = trial, e_trial
                step *= 1.5
                accepted = True
                break
            step *= 0.5
        if not accepted:
            # line search exhausted: either converged to machine precision
            # or the landscape is flat here
            return m, gnorm < 10.0 * grad_tol
    return m, False


def _newton_polish(m, params, frame, h_applied, tol, max_iter=40):
    """Newton iterations in the local tangent basis; returns refined m."""
    m = unit_vector(np.asarray(m, dtype=float))
    for _ in range(max_iter):
        g = energy_gradient(m, params, frame, h_applied)
        t1, t2 = _tangent_basis(m)
        gt = np.array([g @ t1, g @ t2])
        if np.linalg.norm(gt) < tol:
            break
        h = sphere_hessian(m, params, frame, h_applied)
        try:
            delta = np.linalg.solve(h, -gt)
        except np.linalg.LinAlgError:
            break
        # safeguard against huge Newton steps out of the quadratic regime
        norm = np.linalg.norm(delta)
        if norm > 0.2:
            delta *= 0.2 / norm
        m = unit_vector(m + delta[0] * t1 + delta[1] * t2)
    return m


def _fibonacci_sphere(n: int) -> np.ndarray:
    """n quasi-uniform points on the sphere (deterministic)."""
    i = np.arange(n)
    z = 1.0 - 2.0 * (i + 0.5) / n
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    golden = math.pi * (3.0 - math.sqrt(5.0))
    phi = golden * i
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def _grad_scale(params: MaterialParams) -> float:
    return max(abs(params.k1), abs(params.ku), 1.0)


def nearest_diagonal_label(m) -> str:
    """Label of the <111> diagonal closest to m."""
    m = np.asarray(m, dtype=float)
    dots = {name: float(m @ d) for name, d in DOMAIN_DIAGONALS.items()}
    return max(dots, key=dots.get)


def find_minima(
    params: MaterialParams,
    frame: FilmFrame,
    h_applied=None,
) -> list[Equilibrium]:
    """Locate all minima of the free energy on the unit sphere.

    Multi-start descent from the 8 <111> diagonals plus 48 quasi-uniform
    sphere points, deduplicated at 0.5 deg, each verified by a positive
    definite tangent curvature matrix. Returned sorted by energy.
    """
    grad_tol = GRAD_TOL_FACTOR * _grad_scale(params)
    starts = list(DOMAIN_DIAGONALS.values()) + list(_fibonacci_sphere(48))

    found: list[np.ndarray] = []
    cos_tol = math.cos(math.radians(DEDUP_ANGLE_DEG))
    for idx, start in enumerate(starts):
        m, converged = _descend(start, params, frame, h_applied, grad_tol)
        if not converged:
            raise ConvergenceError(
                f"minimization did not converge from start point {idx} {np.round(start, 4)}"
            )
        m = _newton_polish(m, params, frame, h_applied, tol=1e-9 * _grad_scale(params))
        h = sphere_hessian(m, params, frame, h_applied)
        eig = np.linalg.eigvalsh(h)
        if eig[0] <= 0.0:
            # rolled to a saddle or ridge: nudge along the soft direction
            # and descend again; drop the start if it still refuses
            t1, t2 = _tangent_basis(m)
            vec = np.linalg.eigh(h)[1][:, 0]
            kick = unit_vector(m + math.radians(1.0) * (vec[0] * t1 + vec[1] * t2))
            m, converged = _descend(kick, params, frame, h_applied, grad_tol)
            if not converged:
                continue
            m = _newton_polish(m, params, frame, h_applied, tol=1e-9 * _grad_scale(params))
            eig = np.linalg.eigvalsh(sphere_hessian(m, params, frame, h_applied))
            if eig[0] <= 0.0:
                continue
        if any(float(m @ prev) > cos_tol for prev in found):
            continue
        found.append(m)

    minima = [
        Equilibrium(
            m=m,
            energy=float(total_energy(m, params, frame, h_applied, check=False)),
            label=nearest_diagonal_label(m),
            hessian_eigenvalues=tuple(
                np.linalg.eigvalsh(sphere_hessian(m, params, frame, h_applied))
            ),
        )
        for m in found
    ]
    minima.sort(key=lambda eq: eq.energy)
    return minima


def minima_by_label(minima: list[Equilibrium]) -> dict[str, Equilibrium]:
    """Map label -> equilibrium (lowest energy wins on duplicate labels)."""
    out: dict[str, Equilibrium] = {}
    for eq in sorted(minima, key=lambda e: e.energy, reverse=True):
        out[eq.label] = eq
    return out


def classify(m, minima: list[Equilibrium]) -> str:
    """Label of the minimum closest (by angle) to m.

    Ties are broken by lower energy, then lexicographic label order.
    """
    if not minima:
        raise ValueError("classify needs a non-empty minima list")
    m = check_unit(m)
    best = None
    for eq in minima:
        dot = float(np.clip(m @ eq.m, -1.0, 1.0))
        key = (-dot, eq.energy, eq.label)
        if best is None or key < best[0]:
            best = (key, eq.label)
    return best[1]


def classify_batch(m, minima: list[Equilibrium]) -> np.ndarray:
    """Vectorized classify for m of shape (..., 3); returns label indices
    into the given minima list (nearest by angle)."""
    m = np.asarray(m, dtype=float)
    directions = np.stack([eq.m for eq in minima])
    dots = m @ directions.T
    return np.argmax(dots, axis=-1)


def fmr_frequency(
    params: MaterialParams,
    frame: FilmFrame,
    eq: Equilibrium,
    h_applied=None,
) -> float:
    """Small-oscillation frequency about a minimum, GHz.

    Curvature formula f = gamma sqrt(det H) / (2 pi Ms) with H the 2x2
    on-sphere curvature matrix at the minimum. A flat landscape gives 0;
    a saddle or maximum raises ValueError.
    """
    h = sphere_hessian(eq.m, params, frame, h_applied)
    eig = np.linalg.eigvalsh(h)
    tol = 1e-9 * _grad_scale(params)
    if eig[0] < -tol:
        raise ValueError(f"not a minimum: tangent curvatures {tuple(eig)} erg/cm^3")
    det = max(float(eig[0] * eig[1]), 0.0)
    omega = params.gamma / params.ms * math.sqrt(det)  # rad/s
    return omega / (2.0 * math.pi) * 1e-9
