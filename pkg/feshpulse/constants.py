"""Physical constants (SI units).

hbar and the Bohr magneton are fixed to the CODATA 2018 values so that
output files do not change with the installed SciPy release; the other
constants come from :mod:`scipy.constants`.

"""
from scipy.constants import physical_constants as _physical_constants

HBAR = 1.054571817e-34          # J s
MU_B = 9.2740100783e-24         # J/T
BOHR_RADIUS = _physical_constants['Bohr radius'][0]  # m

LI6_MASS = 9.988e-27            # kg, 6Li atom
