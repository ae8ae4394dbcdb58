"""
TDPA: softer feel with more delay
=================================

The passivity controllers add damping whenever a port has put out more
energy than it received. The longer the delay, the more often this
happens, and the softer the object feels at the master.
"""
from dataclasses import replace

from teleswitch import DelayProfile, displayed_stiffness, preset, run_scenario

base = replace(preset("paper-soft-object"), scheme_mode="fixed_tdpa", rng_seed=1)

print("rtt_ms  K_displayed  E_diss_alpha  E_diss_beta  force_rmse")
for rtt in (0, 10, 25, 50, 100, 200):
    trace = run_scenario(replace(base, delay_profile=DelayProfile.constant(rtt / 1000)))
    s = trace.summary()
    print(f"{rtt:6d} {displayed_stiffness(trace):11.2f} {trace['e_diss_alpha'][-1] * 1e3:11.3f}mJ"
          f" {trace['e_diss_beta'][-1] * 1e3:10.3f}mJ {s.force_tracking_rmse:10.4f}")

# Passivity holds at every tick: the worst post-controller balance
trace = run_scenario(replace(base, delay_profile=DelayProfile.constant(0.2)))
print(f"\nmin W_master = {trace['w_master'].min():.2e} J, min W_slave = {trace['w_slave'].min():.2e} J")
