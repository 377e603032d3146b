# %% [markdown]
# # Three ways to post-select
#
# (a) unpolarized X, keep transmitted X, spin unseen;
# (b) X prepared up, keep X found up whether transmitted or reflected;
# (c) X prepared up, keep X transmitted and found up.
#
# Starting from |up down>, (a) purifies faster than (b), (c) is faster
# still, and (a) and (b) end with the same success probability, 1/2.

# %%
import numpy as np

from resonant_filter import states
from resonant_filter.protocol import SchemeKind, run
from resonant_filter.scattering import ScatteringParams, closed_form_T_R

ops = closed_form_T_R(ScatteringParams.from_caption(1.0, 2.0))
trajs = {s: run(ops.t, ops.r, s, states.updown(), 40) for s in SchemeKind}

print(" N   F_a      F_b      F_c      P_a      P_b      P_c")
for n in (0, 1, 2, 3, 5, 10, 20, 40):
    f = [trajs[s].fidelity[n] for s in SchemeKind]
    p = [trajs[s].probability[n] for s in SchemeKind]
    print(f"{n:2d}  " + "  ".join(f"{x:.5f}" for x in f + p))
