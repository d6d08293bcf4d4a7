"""
Reflectionless wells from bound states
======================================

With no reflection, the bound-state energies -kappa_n^2 and norming constants
c_n determine the potential through the Marchenko equation.  One level gives
a sech^2 well; two levels with the right constants give -6 sech^2.
"""

import numpy as np

from scipy.integrate import simpson

from barrier_inverse import DiscreteSpectrum, reconstruct_potential
from barrier_inverse.marchenko import soliton_centre

x = np.linspace(-8, 8, 401)

one = DiscreteSpectrum([(1.0, np.sqrt(2.0))])
u = reconstruct_potential(one, x).u_values
print("one level: centre", soliton_centre(1.0, np.sqrt(2.0)),
      " max |U + 2 sech^2 x| =", np.max(np.abs(u + 2 / np.cosh(x) ** 2)))

# moving the norming constant moves the well and leaves its shape alone
c = np.sqrt(2.0) * np.exp(1.5)
u_shift = reconstruct_potential(DiscreteSpectrum([(1.0, c)]), x + 1.5).u_values
print("c -> c e^1.5: centre", soliton_centre(1.0, c),
      " max |U_shifted(x + 1.5) - U(x)| =", np.max(np.abs(u_shift - u)))

two = DiscreteSpectrum([(1.0, np.sqrt(6.0)), (2.0, np.sqrt(12.0))])
u = reconstruct_potential(two, x).u_values
print("two levels: min U =", u.min(), " max |U + 6 sech^2 x| =",
      np.max(np.abs(u + 6 / np.cosh(x) ** 2)))

# depth of the well versus the bound states: integral U dx = -4 sum kappa
print("integral U dx =", simpson(u, x=x),
      " -4 sum kappa =", -4 * two.kappa.sum())
