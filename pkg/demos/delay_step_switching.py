"""
Switching schemes when the delay changes
========================================

The round-trip delay starts at 10 ms, jumps to 100 ms at t = 5 s and drops
back at t = 13 s. The master probes the RTT every 100 ms and hands over to
the better scheme, but only while the slave is out of contact.
"""
from dataclasses import replace

import numpy as np

from teleswitch import DelayProfile, preset, run_scenario

profile = DelayProfile(((0.0, 0.005, 0.005), (5.0, 0.050, 0.050), (13.0, 0.005, 0.005)))
cfg = replace(preset("paper-soft-object"), scheme_mode="auto", delay_profile=profile, rng_seed=1)
trace = run_scenario(cfg)

for t, old, new in trace.switch_events:
    k = int(round(t / cfg.sample_period))
    print(f"t = {t:6.3f} s  {old.value} -> {new.value}   x_s = {trace['x_s'][k] * 1000:+.2f} mm"
          f"   RTT estimate {trace['rtt_est'][k] * 1000:.1f} ms")

# Scheme in force every two seconds
t = trace.time
for sec in range(0, 20, 2):
    k = np.searchsorted(t, sec)
    print(f"{sec:2d} s: {trace['scheme'][k].value}")

s = trace.summary()
print("\n" + "\n".join(s.as_lines()))
