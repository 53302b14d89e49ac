"""Figure rendering for scan and verification results (file output only)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .bounds import default_c, thm31_bound  # noqa: E402


def scan_figure(rows: list[tuple[int, float]], path: str) -> str:
    """log(h_p^-/G(p)) per prime, with the +/- explicit |f(1)| bound
    overlaid where it applies (p > 500)."""
    ps = [p for p, _ in rows]
    ratios = [r for _, r in rows]
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.scatter(ps, ratios, s=12, color="tab:blue", label="log(h⁻/G)")
    bp = [p for p in ps if p > 500]
    if bp:
        bound = [float(thm31_bound(p, default_c(p)).mid) for p in bp]
        ax.plot(bp, bound, color="tab:red", lw=1, label="bound")
        ax.plot(bp, [-b for b in bound], color="tab:red", lw=1)
    ax.set_xlabel("p")
    ax.set_ylabel("log ratio")
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def verify_figure(reports, path: str) -> str:
    """Certified margin rhs.lower - lhs.upper per grid point (>0 = pass)."""
    xs, ys, colors = [], [], []
    for i, r in enumerate(reports):
        if r.lhs is None or r.rhs is None:
            continue
        xs.append(r.p if r.p else i)
        ys.append(float(r.rhs.lower() - r.lhs.upper()))
        colors.append("tab:green" if r.passed else "tab:red")
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.scatter(xs, ys, s=14, c=colors)
    ax.axhline(0.0, color="black", lw=0.8)
    ax.set_xlabel("p")
    ax.set_ylabel("certified margin")
    if reports:
        ax.set_title(reports[0].bound_id)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def crossover_figure(outcomes, path: str, prec: int = 128) -> str:
    """Both sides of the corollary comparison around the crossover."""
    from .bounds import cor33_rhs

    ps = [p for p, _ in outcomes]
    lhs = [float(thm31_bound(p, default_c(p, prec), 1, prec).mid) for p in ps]
    rhs = [float(cor33_rhs(p, prec).mid) for p in ps]
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(ps, lhs, lw=1, color="tab:red", label="|f(1)| bound (beta forced)")
    ax.plot(ps, rhs, lw=1, color="tab:blue", label="((p-1)/4) log(4π²/39)")
    first_pass = next((p for p, ok in outcomes if ok), None)
    if first_pass is not None:
        ax.axvline(first_pass, color="gray", ls="--", lw=0.8)
    ax.set_xlabel("p")
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
