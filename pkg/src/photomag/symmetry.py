"""Point-group projection of the rank-4 photo-magnetic susceptibility tensor.

The pump-induced energy is chi_ijkl E_i E_j* M_k M_l with chi a polar
fourth-rank tensor. Projecting a generic chi onto the invariant subspace of
a point group by group averaging,

    chi'_ijkl = 1/|G| sum_g g_ia g_jb g_kc g_ld chi_abcd,

reproduces the component relations each group allows. Because the two
magnetization indices always appear as a pair, the axial sign factors of
improper elements cancel, so plain polar transformation on all four indices
is correct for every group handled here.

For the group 4 (rotations about z) the surviving in-plane components obey
chi_yyyx = -chi_xxxy and chi_xxyx = -chi_yyxy, which collapses the
switching energy for a linear polarization at angle phi from [100] to

    W = A cos(2 phi) mx my,     A = chi_xxxy + chi_xxyx,

the form the rest of the package uses. For 4mm (adding the vertical
mirrors) those four components vanish and no linear-polarization switching
term survives at all; an observed polarization toggle therefore implies the
lower symmetry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

AXES = {"x": 0, "y": 1, "z": 2}

SUPPORTED_GROUPS = ("1", "4", "4mm")


@dataclass(frozen=True)
class ChiTensor:
    """Rank-4 polar susceptibility, components[i, j, k, l] over x, y, z."""

    components: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.components, dtype=float)
        if c.shape != (3, 3, 3, 3):
            raise ValueError("chi must be a 3x3x3x3 array")
        if not np.all(np.isfinite(c)):
            raise ValueError("chi must be finite")
        object.__setattr__(self, "components", c)

    def __getitem__(self, key: str) -> float:
        """Component by letter index, e.g. chi['xxxy']."""
        if len(key) != 4 or any(ch not in AXES for ch in key):
            raise KeyError(f"bad component name {key!r}")
        i, j, k, l = (AXES[ch] for ch in key)
        return float(self.components[i, j, k, l])

    @classmethod
    def random(cls, seed: int = 0) -> "ChiTensor":
        return cls(np.random.default_rng(seed).normal(size=(3, 3, 3, 3)))


@dataclass(frozen=True)
class PointGroup:
    """A crystallographic point group as an explicit set of 3x3 matrices."""

    name: str
    elements: tuple

    def __len__(self):
        return len(self.elements)


def _rotz(quarter_turns: int) -> np.ndarray:
    c = [1, 0, -1, 0][quarter_turns % 4]
    s = [0, 1, 0, -1][quarter_turns % 4]
    return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]], dtype=float)


def group_elements(name: str) -> PointGroup:
    """Matrices of the supported groups.

    "1": identity; "4": rotations about z by 0/90/180/270 deg; "4mm": those
    plus the mirrors normal to x, y and the two in-plane diagonals. All
    entries are exact (0, +-1), so projections are exact up to roundoff of
    the averaging itself.
    """
    if name not in SUPPORTED_GROUPS:
        raise ValueError(f"unknown point group {name!r}; supported: {', '.join(SUPPORTED_GROUPS)}")
    rotations = [_rotz(k) for k in range(4)]
    if name == "1":
        elements = [np.eye(3)]
    elif name == "4":
        elements = rotations
    else:
        mirror_x = np.diag([-1.0, 1.0, 1.0])   # plane normal to x
        mirror_y = np.diag([1.0, -1.0, 1.0])
        mirror_d1 = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])   # normal (1,-1,0)
        mirror_d2 = np.array([[0.0, -1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])  # normal (1,1,0)
        elements = rotations + [mirror_x, mirror_y, mirror_d1, mirror_d2]
    return PointGroup(name=name, elements=tuple(elements))


def project_tensor(chi: ChiTensor, group: PointGroup) -> ChiTensor:
    """Group-average chi onto the invariant subspace (idempotent)."""
    acc = np.zeros((3, 3, 3, 3))
    for g in group.elements:
        acc += np.einsum("ia,jb,kc,ld,abcd->ijkl", g, g, g, g, chi.components, optimize=True)
    return ChiTensor(acc / len(group.elements))


def is_invariant(chi: ChiTensor, group: PointGroup, tol: float = 1e-12) -> bool:
    """True when chi is unchanged by every element of the group."""
    for g in group.elements:
        moved = np.einsum("ia,jb,kc,ld,abcd->ijkl", g, g, g, g, chi.components, optimize=True)
        if np.max(np.abs(moved - chi.components)) > tol:
            return False
    return True


def switching_coefficient(chi: ChiTensor) -> float:
    """A = chi_xxxy + chi_xxyx, the prefactor of cos(2 phi) mx my."""
    return chi["xxxy"] + chi["xxyx"]


def switching_energy(chi: ChiTensor, polarization_angle_deg: float, m) -> float:
    """Switching part of the pump-induced energy per unit |E|^2.

    Sums the four mixed in-plane terms chi_iikl E_i E_i* M_k M_l (k != l,
    k,l in {x,y}) for a linear polarization E = (cos phi, sin phi, 0); for a
    group-4 tensor this equals A cos(2 phi) mx my with A from
    switching_coefficient.
    """
    m = np.asarray(m, dtype=float)
    phi = math.radians(polarization_angle_deg)
    ex2 = math.cos(phi) ** 2
    ey2 = math.sin(phi) ** 2
    mxmy = m[0] * m[1]
    return (
        (chi["xxxy"] + chi["xxyx"]) * ex2 * mxmy
        + (chi["yyxy"] + chi["yyyx"]) * ey2 * mxmy
    )


def polarization_preference(chi: ChiTensor, polarization_angle_deg: float) -> int:
    """Sign of m_y minimizing the switching energy, with m_x > 0 fixed.

    Returns +1 (my > 0 favored), -1 (my < 0 favored) or 0 when the pulse
    exerts no preference (A = 0 or cos 2 phi = 0).
    """
    a = switching_coefficient(chi)
    c2 = math.cos(2.0 * math.radians(polarization_angle_deg))
    drive = a * c2
    if abs(drive) < 1e-15:
        return 0
    return 1 if drive < 0.0 else -1
