# # How small can the sequential fraction get?
#
# Any run has some work that cannot overlap. Counting those cycles against
# the cycles of the whole measurement gives a floor for (1 - alpha).
# Here the window is a 13298 s run on a 1.45 GHz clock.

from amdahl_lens import bounds

window = bounds.MeasurementWindow.hpl_reference()
print(f"window: {window.total_cycles:.3e} cycles")

# ## One bound per mechanism

results = [
    bounds.clock_quantum_bound(window),
    bounds.propagation_bound(100.0, window),           # 100 m of cable, there and back
    bounds.addressing_bound(10**7, 100, window),       # 1e7 cores addressed in groups of 100
    bounds.os_bound(bounds.CONTEXT_SWITCH_CYCLES, window),
    bounds.instruction_access_bound(window, bounds.CACHED_ACCESS_FACTOR),
]
for r in results:
    print(f"{r.kind.value:18s} {r.sequential_cycles:>10d} cycles  "
          f"1-alpha >= {r.one_minus_alpha_bound:.2e}  gain <= {r.max_gain:.2e}")

# Two cycles of clock granularity is the floor no design can beat. Signal
# travel over a room-sized machine already costs hundreds of cycles.

# ## Slower access scales a bound

far = bounds.access_scaling(results[0], bounds.FAR_MEMORY_FACTOR)
print(f"clock quantum with far memory: {far.one_minus_alpha_bound:.2e}")

# ## Mechanisms add
#
# Bounds measured against the same window sum into a contribution set.

contribs = bounds.to_contributions(results)
for label, value in contribs.entries:
    print(f"{label.value:12s} {value:.2e}")
print(f"total      {contribs.total():.2e}")
