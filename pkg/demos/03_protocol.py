# %% [markdown]
# # Extracting the singlet by repeated transmission
#
# Send N ancillas one after another and keep the run only if every one
# is transmitted.  From the completely mixed state the fidelity with
# the singlet climbs to 1.  The success probability settles at the
# initial singlet weight, 1/4.

# %%
import numpy as np

from resonant_filter import states
from resonant_filter.protocol import SchemeKind, asymptotics, closed_form_resonant, run
from resonant_filter.scattering import ScatteringParams, closed_form_T_R

for kd_over_pi in (1, 2, 3):
    ops = closed_form_T_R(ScatteringParams.from_caption(1.0, kd_over_pi))
    traj = run(ops.t, ops.r, SchemeKind.TRANSMISSION_ONLY, states.mixed(), 30)
    print(f"kd/pi={kd_over_pi}: F(1..5)={np.round(traj.fidelity[1:6], 4)}  F(30)={traj.fidelity[30]:.12f}"
          f"  P(30)={traj.probability[30]:.12f}")

# %% [markdown]
# At resonance the whole trajectory depends only on the initial singlet
# weight, so the simulation can be checked against the closed form.

# %%
ops = closed_form_T_R(ScatteringParams(1.0, np.pi))
traj = run(ops.t, ops.r, SchemeKind.TRANSMISSION_ONLY, states.mixed(), 20)
f, p = closed_form_resonant(1.0, 0.25, traj.n)
print("max |F - F_closed|:", np.abs(traj.fidelity - f).max())
print("max |P - P_closed|:", np.abs(traj.probability - p).max())

# %% [markdown]
# The dominant eigenprojection predicts the limits without iterating.

# %%
for name in ("mixed", "updown", "singlet"):
    a = asymptotics(ops.t, getattr(states, name)())
    print(f"{name:8s} F(oo)={a.fidelity:.6f}  P(oo)={a.probability:.6f}")
