# # A fork-join timeline and where it turns over
#
# A coordinator hands work to n units one at a time, waits, then collects
# results one at a time. The dispatch and join cycles are the sequential
# part that the model calls (1 - alpha).

import numpy as np

from amdahl_lens.model import AlphaEstimate
from amdahl_lens.predict import curve
from amdahl_lens.simulator import (
    Looping,
    SimConfig,
    argmax_payload,
    brain_preset,
    hpcg_preset,
    hpl_preset,
    simulate,
    sweep_n,
    timeline,
)

# ## Two workers, by hand

tl = timeline(SimConfig(n=2, payload_cycles=100))
print("dispatched", tl.dispatch_end, "finished", tl.finish, "joined", tl.join_end)
out = simulate(SimConfig(n=2, payload_cycles=100))
print(f"speedup {out.speedup:.4f}, alpha_eff {out.alpha_eff.alpha:.4f}")

# ## Constant overhead: 1 - alpha is just (d + j) / w

for n in (16, 256, 4096):
    o = simulate(SimConfig(n=n, payload_cycles=1000))
    print(f"n={n:5d}  1-alpha_eff={o.alpha_eff.one_minus_alpha:.5f}")

# ## Overhead that grows with n
#
# If each dispatch gets slower as more units are attached, the payload rate
# peaks and then falls.

grid = np.unique(np.round(np.geomspace(16, 2**22, 64)).astype(np.int64))
sweep = sweep_n(SimConfig(n=1, payload_cycles=1000, looping=Looping.linear(1e-6)), grid)
best = argmax_payload(sweep)
print(f"simulated peak at n={best}")

# The analytic curve with the matching growth term peaks at the same place.
analytic = curve(AlphaEstimate(2e-3), 1.0, grid, Looping.linear(1e-9))
print(f"analytic peak at n={analytic.argmax()}")
for (n, o), p in zip(sweep[::8], analytic.payload[::8]):
    print(f"n={n:8d}  simulated {o.payload_rate:8.1f}  analytic {p:8.1f}")

# ## Workload shapes
#
# A single long run, many short iterations with sequential work in between,
# and iterations locked to a fixed 1 ms period.

for name, preset in (("hpl", hpl_preset), ("hpcg", hpcg_preset), ("brain", brain_preset)):
    o = simulate(preset(10_000))
    print(f"{name:6s} speedup {o.speedup:10.1f}  idle {o.idle_fraction:.3f}")
