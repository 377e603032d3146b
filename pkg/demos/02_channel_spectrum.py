# %% [markdown]
# # The transmission map and its spectrum
#
# Keeping only transmitted X and ignoring its spin turns one scattering
# event into a trace-decreasing map on the AB density matrix.  At resonance
# the singlet is a fixed point with eigenvalue 1, and every other eigenvalue
# lies strictly inside the unit circle.

# %%
import numpy as np

from resonant_filter import states
from resonant_filter.channel import apply_map, spectrum, superoperator_of, transition_matrix
from resonant_filter.scattering import ScatteringParams, closed_form_T_R

t_res = closed_form_T_R(ScatteringParams.from_caption(1.0, 1.0)).t
out = apply_map(t_res, states.singlet())
print("singlet in, trace out:", out.trace)

# %% [markdown]
# Dense eigenvalues and a block subspace iteration give the same leading
# pair.  The subdominant eigenvalues come in tied conjugate pairs.

# %%
s = superoperator_of(t_res)
dense = spectrum(s)
sub = spectrum(s, method="subspace")
print("dense   :", np.round(dense.eigenvalues[:4], 6))
print("subspace:", np.round(sub.eigenvalues[:2], 6))

# %%
for kd_over_pi in np.linspace(0.5, 3.5, 13):
    ev = spectrum(superoperator_of(closed_form_T_R(ScatteringParams.from_caption(1.0, kd_over_pi)).t)).eigenvalues
    print(f"kd/pi={kd_over_pi:4.2f}  |l0|={abs(ev[0]):.6f}  |l1|={abs(ev[1]):.6f}")

# %% [markdown]
# ## Populations close on a 2x2 matrix
#
# Singlet and triplet populations evolve under a 2x2 matrix.  At
# resonance the singlet row is (1, 0) and the triplet survives with
# probability (1 + 12 w^2) / ((1 + 4 w^2)(1 + 16 w^2)), which is 13/85 at w = 1.

# %%
tm = transition_matrix(ScatteringParams(1.0, np.pi))
print(tm.as_array(), 13 / 85)
