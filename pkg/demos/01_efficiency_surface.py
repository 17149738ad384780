# # Efficiency over unit count and sequential fraction
#
# The whole model has two knobs: how many processing units run the job, and
# the fraction of the work (1 - alpha) that cannot be spread over them.
# This walk-through tabulates efficiency over both.

import numpy as np

from amdahl_lens import AlphaEstimate, efficiency, speedup
from amdahl_lens.predict import log_axis, surface

# ## A coarse grid
#
# Rows are sequential fractions, columns are unit counts.

n_axis = log_axis(10, 1e9, 9, integer=True)
oma_axis = log_axis(1e-13, 1e-5, 5)
grid = surface(n_axis, oma_axis)

print("1-alpha   " + "".join(f"{int(n):>9.0e}" for n in n_axis))
for oma, row in zip(oma_axis, grid.values):
    print(f"{oma:8.0e}  " + "".join(f"{v:9.3f}" for v in row))

# Read along a row: efficiency stays near 1 until n reaches about
# 1/(1-alpha), then falls off as 1/n. Read down a column: at a fixed size,
# only a smaller sequential fraction keeps the machine busy.

# ## Where efficiency drops to one half
#
# Setting E = 1/2 gives (n - 1)(1 - alpha) = 1.

for oma in oma_axis:
    n_half = 1 + 1 / oma
    print(f"1-alpha={oma:.0e}: half efficiency at n={n_half:.3g}")

# ## Speedup is bounded
#
# However many units are added, speedup cannot exceed 1/(1-alpha).

a = AlphaEstimate(3.25e-8)
for n in (10**6, 10**7, 10**8, 10**9, 10**10):
    print(f"n={n:.0e}  speedup={speedup(a, n):.4g}  efficiency={efficiency(a, n):.4f}")
print(f"ceiling {a.max_gain:.4g}")

# The same table as numbers, e.g. for plotting elsewhere:
np.set_printoptions(precision=3)
print(grid.values[:, -3:])
