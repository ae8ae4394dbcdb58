"""Time-domain passivity approach: port energy observers and adaptive dampers.

Sign conventions
----------------
``update_po`` takes ``f`` and ``v`` already oriented so that ``f * v > 0``
means power flowing *into* the communication two-port at that port: from
the operator at the master port, from the environment at the slave port.

``pc_slave`` works on the environment reaction force (positive pushes the
slave out of the object) and the slave velocity (positive into the object).

``pc_master`` works on the force acting on the operator's hand, signed
along the motion axis, so ``f * v_m > 0`` means energy delivered to the
operator.

Timing
------
The master's input energy reaches the slave one tick after it is observed
at the earliest. For the slave balance to compare like with like, slave
output energy is booked one tick late (``defer_output``) while slave input
energy is booked at once. With zero delay and no data reduction the two
port balances are then exactly zero and neither controller fires.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

V_EPS = 1e-6  # m/s
F_EPS = 1e-6  # N
EPS_DIV = 1e-12


class Port(str, Enum):
    MASTER = "master"
    SLAVE = "slave"


@dataclass
class EnergyLedger:
    """Cumulative port energies in joules.

    ``remote_in_master`` is the slave's latest received copy of the master
    input energy, ``remote_in_slave`` the master's copy of the slave input
    energy. Both only ever increase because the senders' counters do.
    """

    sample_period: float = 0.001
    e_in_master: float = 0.0
    e_out_master: float = 0.0
    e_in_slave: float = 0.0
    e_out_slave: float = 0.0
    e_diss_alpha: float = 0.0
    e_diss_beta: float = 0.0
    remote_in_master: float = 0.0
    remote_in_slave: float = 0.0
    pending_out_slave: float = 0.0

    def commit_slave_output(self):
        self.e_out_slave += self.pending_out_slave
        self.pending_out_slave = 0.0

    def slave_balance(self) -> float:
        return self.remote_in_master - self.e_out_slave + self.e_diss_alpha

    def master_balance(self) -> float:
        return self.remote_in_slave - self.e_out_master + self.e_diss_beta

    def receive_master_energy(self, energy: float):
        self.remote_in_master = max(self.remote_in_master, energy)

    def receive_slave_energy(self, energy: float):
        self.remote_in_slave = max(self.remote_in_slave, energy)


@dataclass
class PcState:
    alpha: float = 0.0  # N*s/m, slave side
    beta: float = 0.0  # N*s/m, master side
    alpha_active: bool = False
    beta_active: bool = False


def update_po(port: Port, f: float, v: float, ledger: EnergyLedger, defer_output: bool = False) -> EnergyLedger:
    """Accumulate this tick's port power into the ledger.

    With ``defer_output`` a slave output contribution is parked until the
    next ``commit_slave_output``.
    """
    de = f * v * ledger.sample_period
    if Port(port) is Port.MASTER:
        if de > 0:
            ledger.e_in_master += de
        elif de < 0:
            ledger.e_out_master -= de
    else:
        if de > 0:
            ledger.e_in_slave += de
        elif de < 0 and defer_output:
            ledger.pending_out_slave -= de
        elif de < 0:
            ledger.e_out_slave -= de
    return ledger


def pc_slave(v_delayed: float, f_env: float, ledger: EnergyLedger, state: PcState | None = None) -> float:
    """Slave-side passivity controller.

    If the slave port has output more energy than the master has put in,
    a damper ``alpha`` sized to absorb exactly the deficit is added to the
    returned force. With ``|v| <= V_EPS`` the deficit is carried forward.
    """
    state = state if state is not None else PcState()
    w = ledger.slave_balance()
    if w < 0 and abs(v_delayed) > V_EPS:
        alpha = -w / (ledger.sample_period * v_delayed * v_delayed)
        ledger.e_diss_alpha += alpha * v_delayed * v_delayed * ledger.sample_period
        state.alpha, state.alpha_active = alpha, True
        return f_env + alpha * v_delayed
    state.alpha, state.alpha_active = 0.0, False
    return f_env


def pc_master(f_delayed: float, v_m: float, ledger: EnergyLedger, state: PcState | None = None) -> float:
    """Master-side passivity controller acting on the displayed hand force."""
    state = state if state is not None else PcState()
    w = ledger.master_balance()
    if w < 0 and abs(f_delayed) > F_EPS:
        correction = min(abs(f_delayed), -w / (ledger.sample_period * abs(v_m) + EPS_DIV))
        dissipated = correction * abs(v_m) * ledger.sample_period
        ledger.e_diss_beta += dissipated
        state.beta = correction / abs(v_m) if v_m != 0 else 0.0
        state.beta_active = dissipated > 0
        return f_delayed - math.copysign(1.0, v_m) * correction if v_m != 0 else f_delayed
    state.beta, state.beta_active = 0.0, False
    return f_delayed
