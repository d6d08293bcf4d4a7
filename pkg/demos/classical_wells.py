"""
Wells from periods, barriers from reflection delays
===================================================

A constant period 2 pi / omega belongs to the harmonic well, and an even well
is fixed by its period.  On the barrier side, the time a classical particle
spends on the face before bouncing back pins down the face once the other
side is put at a wall.
"""

import numpy as np

from barrier_inverse import (
    LinearRamp,
    LinearWell,
    ScatteringCurve,
    TabulatedFunction,
    invert_barrier_backward,
    invert_well_period,
    sample_curve,
)

E = np.linspace(0.01, 2.0, 200)

# a period that does not depend on energy
flat = ScatteringCurve("period", TabulatedFunction(E, np.full_like(E, 2 * np.pi)))
x = invert_well_period(flat, E, even=True)
print("constant period -> max |U - x^2/2|:", np.max(np.abs(E - 0.5 * x.values ** 2)))

# the V-shaped well U = |x| has period 4 sqrt(2E)
period = sample_curve(LinearWell(1.0), "period", E)
print("period of |x| at E = 1:", period.data(1.0), "expected", 4 * np.sqrt(2.0))
x = invert_well_period(period, E, even=True)
print("recovered |x| well -> max |U - |x||:", np.max(np.abs(E - np.abs(x.values))))

# barrier face from backward times: U = F x on x >= 0
ramp = LinearRamp(2.0, 1.0)
back = sample_curve(ramp, "backward", E)
x = invert_barrier_backward(back, E)
for u, xi in list(zip(x.abscissa, x.values))[::40]:
    print(f"U = {u:.3f}   x = {xi:.10f}   U/F = {u / 2:.10f}")
