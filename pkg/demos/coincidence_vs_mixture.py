"""
Coincidence vs. mixedness: a sweep over the participation ratio
===============================================================

The participation ratio R = 1 / Tr(rho^2) measures how mixed a state
is: R = 1 for pure states, R = 4 for the maximally mixed two-qubit
state.  Above R = 2 no two-qubit state can violate a CHSH inequality,
and above R = 3 none is entangled at all -- so on that plateau the
entropic test and the CHSH test agree on *every* state (both say no).

This script pins states to fixed R with the rejection sampler, sweeps R
across the plateau and below it, and prints the probability that the
entropic flag and the Bell flag coincide at each stop.
"""

import csv
import io

from entrobell.survey import SurveyConfig, ratio_sweep

GRID = [1.2, 1.4, 1.6, 1.8, 2.0, 2.2, 2.4, 2.6, 2.8, 3.0]
PER_POINT = 2_000

config = SurveyConfig(
    n_qubits=2,
    sample_count=PER_POINT,
    state_family="fixed_ratio",
    measures=("entropic", "chsh"),
    seed=23,
    ratio=2.0,
)
rows = ratio_sweep(config, GRID, per_point=PER_POINT)

print(f"{PER_POINT} states per stop, entropic flag vs CHSH flag")
print(f"{'R':>5s} {'P(agree)':>9s} {'Wilson low':>11s} {'Wilson high':>12s}")
for row in rows:
    stats = row.stat("entropic-bell")
    low, high = stats.interval
    marker = "  <- plateau" if row.ratio >= 2.0 else ""
    print(f"{row.ratio:5.2f} {stats.probability:9.4f} {low:11.4f} {high:12.4f}{marker}")

# The same table as CSV, ready to paste into any plotting tool.
buffer = io.StringIO()
writer = csv.writer(buffer)
writer.writerow(["R", "p_agree", "wilson_low", "wilson_high"])
for row in rows:
    stats = row.stat("entropic-bell")
    writer.writerow([row.ratio, stats.probability, *stats.interval])
print()
print(buffer.getvalue().rstrip())
