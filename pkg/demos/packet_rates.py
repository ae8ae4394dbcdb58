"""
Backward traffic: force samples vs model updates
================================================

TDPA+PD sends deadband-coded force samples back to the master, MMT+PD only
sends a new stiffness when the estimate changes by more than 10%. The same
press script is replayed with and without sensor noise on the force.
"""
from dataclasses import replace

from teleswitch import DelayProfile, Direction, packet_rate, preset, run_scenario

base = preset("paper-soft-object")
quiet = replace(base.env_params, noise_enabled=False)

print("rtt_ms  noise   tdpa_bwd  mmt_bwd  tdpa_fwd   (packets/s)")
for noise in (True, False):
    for rtt in (10, 100, 200):
        rates = {}
        for mode in ("fixed_tdpa", "fixed_mmt"):
            cfg = replace(
                base,
                scheme_mode=mode,
                delay_profile=DelayProfile.constant(rtt / 1000),
                env_params=base.env_params if noise else quiet,
                rng_seed=1,
            )
            trace = run_scenario(cfg)
            rates[mode] = (packet_rate(trace, Direction.BACKWARD), packet_rate(trace, Direction.FORWARD))
        print(f"{rtt:6d}  {'on ' if noise else 'off'}  {rates['fixed_tdpa'][0]:9.1f} {rates['fixed_mmt'][0]:8.1f}"
              f" {rates['fixed_tdpa'][1]:9.1f}")

# With 0.1 N noise the 10% band around a force below 0.6 N is narrower than
# the noise itself, so TDPA transmits on most contact ticks.
