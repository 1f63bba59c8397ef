"""Certificate reports: delimited per-step data plus rendered figures.

The report path writes a CSV of the norm ledger next to two matplotlib
figures (residual decay against the geometric envelope, and bounding-chain
norms per step).  Figures are rendered headlessly; numbers in the CSV stay
exact rational strings with float columns alongside for plotting ease.
"""

from __future__ import annotations

import csv
from fractions import Fraction
from pathlib import Path

from .certifier import Certificate
from .serialize import frac_str


def certificate_rows(cert: Certificate) -> list[dict]:
    norm0 = cert.initial_cycle.l1_norm()
    rows = [{
        "step": 0,
        "cycle_norm": frac_str(norm0),
        "envelope": frac_str(norm0),
        "bounding_norm": "",
        "witness_bound": "",
        "orbit_count": "",
        "eta": "",
        "factor_count": "",
    }]
    for st in cert.steps:
        envelope = norm0 / (2 ** (st.index + 1))
        rows.append({
            "step": st.index + 1,
            "cycle_norm": frac_str(st.cycle_out.l1_norm()),
            "envelope": frac_str(envelope),
            "bounding_norm": frac_str(st.bounding.l1_norm()),
            "witness_bound": frac_str(st.witness_bound),
            "orbit_count": st.orbit_count,
            "eta": frac_str(st.eta),
            "factor_count": st.factor_count(),
        })
    return rows


def write_csv(cert: Certificate, path: Path) -> Path:
    rows = certificate_rows(cert)
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
    return path


def render_report(cert: Certificate, out_dir: str | Path) -> dict[str, str]:
    """Write steps.csv, residual_decay.png and bounding_norms.png into the
    directory; returns the file map."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {"csv": str(write_csv(cert, out / "steps.csv"))}

    rows = certificate_rows(cert)
    steps = [r["step"] for r in rows]
    norms = [float(Fraction(r["cycle_norm"])) for r in rows]
    envel = [float(Fraction(r["envelope"])) for r in rows]

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(steps, norms, "o-", label="residual norm", color="#1f6fb2")
    ax.plot(steps, envel, "--", label="geometric envelope", color="#888888")
    positive = [v for v in norms if v > 0]
    if positive and min(positive) < max(envel) / 4:
        ax.set_yscale("log")
        if 0.0 in norms:
            floor = min(positive) / 4 if positive else 1e-6
            ax.plot([s for s, v in zip(steps, norms) if v == 0],
                    [floor] * norms.count(0.0), "v", color="#1f6fb2",
                    label="exactly zero")
            ax.set_ylim(bottom=floor / 2)
    ax.set_xlabel("halving step")
    ax.set_ylabel("l1 norm")
    ax.set_title("Residual cycle norm per step")
    ax.legend()
    fig.tight_layout()
    decay = out / "residual_decay.png"
    fig.savefig(decay, dpi=130)
    plt.close(fig)
    files["residual_decay"] = str(decay)

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    if cert.steps:
        xs = [st.index + 1 for st in cert.steps]
        bnorms = [float(st.bounding.l1_norm()) for st in cert.steps]
        cum = []
        acc = 0.0
        for v in bnorms:
            acc += v
            cum.append(acc)
        ax.bar(xs, bnorms, color="#4a9d6e", label="step bounding norm")
        ax.plot(xs, cum, "o-", color="#1f6fb2",
                label="cumulative (partial bounding chain budget)")
        ax.legend()
    ax.set_xlabel("halving step")
    ax.set_ylabel("l1 norm")
    ax.set_title("Bounding chain norms")
    fig.tight_layout()
    bounds = out / "bounding_norms.png"
    fig.savefig(bounds, dpi=130)
    plt.close(fig)
    files["bounding_norms"] = str(bounds)
    return files
