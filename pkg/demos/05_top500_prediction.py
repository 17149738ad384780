# # From list entries to predictions
#
# The bundled fixture holds a few list-style rows. Each row gives an
# efficiency, which inverts to (1 - alpha); that in turn predicts payload
# performance at other sizes.

from importlib import resources

from amdahl_lens import bounds
from amdahl_lens.ingest import derive, pair_workloads, parse_snapshots
from amdahl_lens.model import AlphaEstimate
from amdahl_lens.precision import fp0_alpha
from amdahl_lens.predict import curve, gain_ratio, in_hpl_hpcg_band, log_axis

text = resources.files("amdahl_lens").joinpath("data/top500_fixture.csv").read_text()
records = [derive(s) for s in parse_snapshots(text)]
for r in records:
    print(f"{r.snapshot.name:7s} {r.snapshot.workload:7s} eff={r.efficiency:.3f} "
          f"1-alpha={r.alpha.one_minus_alpha:.3e}")

for p in pair_workloads(records).pairs:
    print(f"{p.name}: 16-bit / 64-bit payload ratio {p.measurement.perf_ratio:.2f}")

# ## Plateaus
#
# Holding alpha fixed, payload saturates at p_single / (1 - alpha). For
# Summit the three workloads give three ceilings.

summit = {r.snapshot.workload: r for r in records if r.snapshot.name == "Summit"}
n_axis = log_axis(1e3, 1e10, 8, integer=True)
for workload in ("HPCG", "HPL", "HPL-AI"):
    r = summit[workload]
    c = curve(r.alpha, r.snapshot.p_single, n_axis)
    print(f"{workload:7s} " + " ".join(f"{p:.1e}" for p in c.payload))

# Two more reference lines use alpha values from elsewhere in the package:
# a science workload limited by signal travel across 100 m, and the
# housekeeping-only FP0 figure.

window = bounds.MeasurementWindow.hpl_reference()
science = AlphaEstimate(bounds.propagation_bound(100, window).one_minus_alpha_bound)
fp0 = fp0_alpha(1.88e18, 2.0e18, 2_414_592)
p_single = summit["HPL"].snapshot.p_single
for label, a in (("science", science), ("FP0", fp0)):
    print(f"{label:7s} " + " ".join(f"{p:.1e}" for p in curve(a, p_single, n_axis).payload))

# ## HPL versus HPCG

ratio = gain_ratio(summit["HPL"].alpha, summit["HPCG"].alpha, summit["HPL"].snapshot.cores_used)
print(f"HPL/HPCG efficiency ratio {ratio:.0f}, in 200..500 band: {in_hpl_hpcg_band(ratio)}")
