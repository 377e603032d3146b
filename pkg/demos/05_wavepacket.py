# %% [markdown]
# # A spread of incident momenta
#
# Away from kd = n pi the singlet is no longer perfectly transmitted.  A
# Gaussian spread of width epsilon around a resonant k0 therefore leaks
# singlet weight.  The averaged map has a largest eigenvalue below 1, so
# the success probability keeps decaying.  The limiting fidelity also
# falls short of 1.

# %%
import numpy as np

from resonant_filter import states
from resonant_filter.wavepacket import (
    MomentumDistribution,
    asymptotic_fidelity,
    averaged_channel,
    averaged_trajectory,
    averaged_transition,
)

PI = np.pi
for k0 in (1, 2, 3):
    row = []
    for eps in (0, 0.05, 0.1, 0.15, 0.2):
        f, lam = asymptotic_fidelity(averaged_transition(MomentumDistribution(k0 * PI, eps * PI), 1.0))
        row.append(f"{f:.5f}/{lam:.5f}")
    print(f"k0 d/pi={k0}:  F(oo)/lambda0 at eps/pi=0..0.2:", "  ".join(row))

# %% [markdown]
# At eps = 0.05 pi the trajectory shows the slow leak.  The fidelity
# approaches the eigenvector prediction, and successive probabilities
# shrink by lambda0.

# %%
avg = averaged_channel(MomentumDistribution(2 * PI, 0.05 * PI), 1.0)
f_inf, lam = asymptotic_fidelity(avg)
traj = averaged_trajectory(avg, states.mixed(), 200)
print(f"F(200)={traj.fidelity[200]:.8f}  F(oo)={f_inf:.8f}")
print(f"P(N+1)/P(N) at N=150: {traj.decay_ratio(150):.8f}  lambda0={lam:.8f}")
print(f"P(50)={traj.probability[50]:.5f} (ideal limit 0.25)")
