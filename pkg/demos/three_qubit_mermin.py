"""
Three qubits: the Mermin inequality along a noisy GHZ family
============================================================

Mixing the three-qubit GHZ state with white noise,

    rho(x) = x |GHZ><GHZ| + (1 - x) I/8,

gives a one-parameter family that walks from the maximally mixed state
(x = 0) to a maximal Mermin violator (x = 1, value 4 against the
classical bound 2).  Along the way it crosses three thresholds:

  * x = 1/5  -- below this the state is fully separable
               (participation ratio R = 8 / (1 + 7 x^2) = 25/4 there),
  * x = 1/2  -- below this the Mermin value 4x stays classical,
  * R = 32/11 -- the mixedness level below which *no* three-qubit
               state, of any shape, can violate the Mermin inequality.

The family saturates the mixedness envelope: its Mermin value 4x equals
the bound 4 sqrt((8 - R) / (7 R)) exactly, so the optimizer should land
on 4x to the settings tolerance at every stop.
"""

import numpy as np

from entrobell.bell import mermin_envelope, mermin_max
from entrobell.states import participation_ratio, werner3

print(f"{'x':>5s} {'R':>7s} {'mermin':>8s} {'4x':>7s} {'envelope':>9s}  verdict")
for x in np.linspace(0.0, 1.0, 11):
    state = werner3(float(x))
    ratio = participation_ratio(state)
    value = mermin_max(state).value
    envelope = mermin_envelope(min(ratio, 8.0))
    verdict = "nonlocal" if value > 2.0 + 1e-9 else "classical correlations suffice"
    print(
        f"{x:5.2f} {ratio:7.4f} {value:8.4f} {4 * x:7.4f} {envelope:9.4f}  {verdict}"
    )

print()
print("thresholds:")
print(f"  separable below        x = 0.2   (R = {8 / (1 + 7 * 0.2 ** 2):.4f} = 25/4)")
print(f"  Mermin-classical below x = 0.5   (value 4x = 2)")
print(f"  universal cutoff       R = {32 / 11:.6f} = 32/11,"
      f" envelope there = {mermin_envelope(32 / 11):.1f}")
