# %% [markdown]
# # Plotting the figure data
#
# The command-line tool writes each figure as commented CSV.  This
# script regenerates the tables in-process and draws them with
# matplotlib (install the ``demos`` extra).

# %%
import sys

import matplotlib.pyplot as plt

from resonant_filter import figures

out = sys.argv[1] if len(sys.argv) > 1 else "figures.png"
tables = {
    "fig2": figures.fig2(points=200),
    "fig3": figures.fig3(points=200),
    "fig4": figures.fig4(),
    "fig6": figures.fig6(points=20),
}

# %%
fig, axes = plt.subplots(2, 2, figsize=(10, 8))
for ax, (name, table) in zip(axes.flat, tables.items()):
    for block in table.blocks:
        cols = list(zip(*block.rows))
        label = ", ".join(f"{k}={v}" for k, v in block.params.items())
        ax.plot(cols[0], cols[1], label=label)
        if name == "fig3":
            ax.plot(cols[0], cols[2], "--", label="|lambda1|")
    ax.set_title(name)
    ax.set_xlabel(table.blocks[0].columns[0])
    ax.set_ylabel(table.blocks[0].columns[1])
    ax.legend(fontsize=7)
fig.tight_layout()
fig.savefig(out, dpi=120)
print("wrote", out)
