"""Figure rendering for region sweeps. Matplotlib is imported lazily so the
library works without it."""
from __future__ import annotations


def render_regions(regions, labels, path, title=None):
    """Draw region hulls (solid with noise, dashed without) into ``path``."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5.5, 5.0))
    colors = {}
    for region, label in zip(regions, labels):
        hull = region.hull_array()
        key = label.split(",")[0]
        color = colors.setdefault(key, f"C{len(colors) % 10}")
        ls = "-" if region.with_artificial_noise else "--"
        if len(hull) >= 3:
            # drop the axis edges through the origin, as in rate-region plots
            xs, ys = hull[1:, 0], hull[1:, 1]
        else:
            xs, ys = hull[:, 0], hull[:, 1]
        ax.plot(xs, ys, ls, color=color, label=label)
    ax.set_xlabel(r"$R_1$ (bits/channel use)")
    ax.set_ylabel(r"$R_2$ (bits/channel use)")
    ax.set_xlim(left=0)
    ax.set_ylim(bottom=0)
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
