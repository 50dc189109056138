"""
Sum rate, worst rate and proposal counts versus the number of SUs
=================================================================

A reduced Monte Carlo sweep (2000 trials per point) with the default
parameters. Writes ``sweep.csv`` and, when matplotlib is available,
``sweep.png``.
"""

# %%
from crnmatch import SweepConfig, run_sweep, write_results

sweep = SweepConfig(m_values=tuple(range(2, 11)), n_values=(3, 4), trials=2000, base_seed=1)
summary = run_sweep(sweep)
write_results(summary, "sweep.csv")

# %%
algs = ("proposed", "deferred_acceptance", "random")
for n in sweep.n_values:
    print(f"N = {n}")
    print("  M  " + "  ".join(f"{a[:8]:>17s}" for a in algs))
    for m in sweep.m_values:
        cells = [summary[(m, n, a)]["sum_rate"] for a in algs]
        print(f" {m:2d}  " + "  ".join(f"{c.mean:9.2f} ± {c.stderr:5.2f}" for c in cells))

# %%
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, axes = plt.subplots(1, 3, figsize=(13, 3.8))
    ms = list(sweep.m_values)
    for a in algs:
        axes[0].plot(ms, [summary[(m, 4, a)]["sum_rate"].mean for m in ms], marker="o", label=a)
        axes[1].plot(ms, [summary[(m, 3, a)]["min_rate"].mean for m in ms], marker="o", label=a)
        if a != "random":
            axes[2].plot(ms, [summary[(m, 4, a)]["proposal_count"].mean for m in ms], marker="o", label=a)
    for ax, title in zip(axes, ("sum rate, N=4", "worst rate, N=3", "proposals, N=4")):
        ax.set_title(title)
        ax.set_xlabel("M")
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig("sweep.png", dpi=120)
