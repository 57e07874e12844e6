"""Physical constants and unit conversions.

The whole package works in CGS-Gaussian units (erg cm^-3, Oe, G, emu cm^-3)
with time in picoseconds at every dynamic interface. The few SI conversions
needed by the energy-budget calculators live here so no module hard-codes
its own copy.
"""

import math

# SI defining constant, exact: 1 eV in joule
EV_TO_JOULE = 1.602176634e-19

# 1 nm^3 = 1e-21 cm^3
NM3_TO_CM3 = 1.0e-21

# fluence: 1 mJ = 1e-3 J
MJ_TO_J = 1.0e-3

# applied field: 1 mT = 10 Oe
MT_TO_OE = 10.0

PS_TO_S = 1.0e-12

FOUR_PI = 4.0 * math.pi

# default gyromagnetic ratio, rad s^-1 Oe^-1. A Lande factor g ~ 2.2 rather
# than the free-electron 2.0: cobalt substitution adds a large unquenched
# orbital moment, and this value keeps the small-oscillation periods of all
# eight metastable states inside the expected ~200-300 ps window.
GAMMA_DEFAULT = 1.96e7
