# # Splitting non-payload time by operand length
#
# Running the same benchmark with 64-bit and 16-bit operands gives two
# efficiencies. Normalised to equal operation counts, the difference between
# them is time that scales with operand length; what is left is housekeeping.

from amdahl_lens.precision import (
    DualPrecisionMeasurement,
    SummingModel,
    compose,
    decompose,
    expected_perf_ratio,
    fp0_alpha,
    times_from_measurement,
)

machines = {
    "Fugaku": DualPrecisionMeasurement(0.808, 0.691, 7_299_072, 3.42),
    "Summit": DualPrecisionMeasurement(0.74, 0.557, 2_414_592, 3.01),
}

# ## Two ways of adding the parts
#
# Serially the parts just add. In the time-aware model they add in
# quadrature, as if they overlapped.

for name, m in machines.items():
    t64, t16 = times_from_measurement(m)
    print(f"{name}: time64={t64:.3e} time16={t16:.3e}")
    for model in SummingModel:
        d = decompose(t16, t64, model)
        print(f"  {model.value:9s} f16={d.f16:.3e} f0={d.f0:.3e} "
              f"implied ratio={expected_perf_ratio(d):.2f}")

# The decomposition inverts exactly:
d = decompose(1.79e-8, 3.25e-8, SummingModel.SERIAL)
print("recomposed:", compose(d.f0, d.f16, SummingModel.SERIAL))

# ## Times outside the band
#
# time64 above 4 * time16 would need negative housekeeping.

try:
    decompose(1e-8, 5e-8, SummingModel.SERIAL)
except ValueError as exc:
    print("rejected:", exc)

# ## Zero-length operands
#
# A workload with no arithmetic payload at all leaves pure housekeeping.
# With a delivered 1.88e18 ops/s against an assumed 2.0e18 nominal on
# Summit's core count:

print(f"FP0 1-alpha = {fp0_alpha(1.88e18, 2.0e18, 2_414_592).one_minus_alpha:.2e}")
