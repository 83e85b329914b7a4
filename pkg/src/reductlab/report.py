"""The report battery: headline verdicts as delimited rows plus figures.

Runs the classification and verification battery, writes report.csv, and
renders three figures next to it: the type-space growth of both catalogs,
the explicit bad coloring for the failing chain arrow, and the census of
realizable unary behaviors.
"""

from __future__ import annotations

import csv
from pathlib import Path

from .structures import EQUALITY, Q_ORDER, RANDOM_GRAPH
from .types import ConstantConfig, enumerate_types, ordered_bell
from .catalog import language
from .canonical import enumerate_behaviors
from .classifiers import cameron_class, equality_csp, temporal_csp, thomas_class
from .definability import decide_pp, verify_verdict
from .catalog import builtin_relation
from .interp import shipped_interpretation, verify_interpretation
from .ramsey import arrows, chain_query


def battery() -> list[dict]:
    """All headline verdicts as flat rows."""
    rows: list[dict] = []

    def add(task, subject, verdict, detail=""):
        rows.append({"task": task, "subject": subject,
                     "verdict": str(verdict), "detail": detail})

    for name in ("<", "Betw", "Cycl", "Sep", "eq"):
        add("cameron", "{%s}" % name, cameron_class(language(name)).verdict)
    for name in ("E", "R3", "R4", "R5", "eq"):
        add("thomas", "{%s}" % name,
            thomas_class(language(name, base=RANDOM_GRAPH)).verdict)
    for name in ("neq", "eq", "E6"):
        add("equality_csp", "{%s}" % name, equality_csp(language(name)).verdict)
    for name in ("<", "Betw", "T3"):
        rep = temporal_csp(language(name))
        add("temporal_csp", "{%s}" % name, rep.verdict,
            rep.evidence.get("behavior", rep.evidence.get("hard_relation", "")))
    v = decide_pp(builtin_relation("neq"), language("Betw"))
    add("decide_pp", "neq from {Betw}", v.kind,
        v.derivation.render() if v.derivation else "")
    v2 = decide_pp(builtin_relation("Betw"), language("<"))
    add("decide_pp", "Betw from {<}", v2.kind,
        v2.witness_behavior.name if v2.witness_behavior else "")
    for name in ("oit_in_t3", "nae_in_betw", "oit_in_e6", "betw_from_sep"):
        rep = verify_interpretation(shipped_interpretation(name))
        add("verify_interp", name,
            "verified" if rep.ok else "failed", f"{rep.checked} types")
    r6 = arrows(chain_query(6, 3, 2, 2))
    r5 = arrows(chain_query(5, 3, 2, 2))
    add("ramsey", "chain:6 -> (chain:3)^chain:2_2", r6.holds,
        f"{r6.n_colorings} colorings")
    add("ramsey", "chain:5 -> (chain:3)^chain:2_2", r5.holds,
        "explicit bad coloring")
    return rows


def write_report(out_dir: str, jobs: int = 1) -> dict:
    """Write report.csv and the figures; returns a manifest of the files."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = battery()
    csv_path = out / "report.csv"
    with csv_path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["task", "subject", "verdict",
                                                "detail"])
        writer.writeheader()
        writer.writerows(rows)
    figures = render_figures(out)
    return {"csv": str(csv_path), "figures": figures, "rows": len(rows)}


def render_figures(out: Path) -> list[str]:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    paths = []

    # type-space growth against the weak-order recursion
    fig, ax = plt.subplots(figsize=(6, 4))
    ks = list(range(1, 6))
    ax.plot(ks, [ordered_bell(k) for k in ks], "o-",
            label="weak orders (recursion)")
    ax.plot(ks, [len(enumerate_types(Q_ORDER, k)) for k in ks], "x--",
            label="order types (enumerated)")
    ax.plot(ks[:4], [len(enumerate_types(RANDOM_GRAPH, k)) for k in ks[:4]],
            "s--", label="graph types")
    ax.plot(ks[:4], [len(enumerate_types(EQUALITY, k)) for k in ks[:4]],
            "d--", label="partition types")
    ax.set_yscale("log")
    ax.set_xlabel("tuple arity")
    ax.set_ylabel("complete types")
    ax.set_title("Type spaces of the catalogs")
    ax.legend(fontsize=8)
    fig.tight_layout()
    p = out / "type_growth.png"
    fig.savefig(p, dpi=120)
    plt.close(fig)
    paths.append(str(p))

    # the explicit bad coloring on the 5-chain
    r5 = arrows(chain_query(5, 3, 2, 2))
    fig, ax = plt.subplots(figsize=(4.5, 4))
    grid = [[None] * 5 for _ in range(5)]
    for (i, j), color in (r5.bad_coloring or {}).items():
        grid[i][j] = color
        grid[j][i] = color
    import numpy as np
    data = np.array([[float("nan") if c is None else c for c in row]
                     for row in grid])
    ax.imshow(data, cmap="coolwarm", vmin=0, vmax=1)
    ax.set_xticks(range(5))
    ax.set_yticks(range(5))
    ax.set_title("2-coloring of pairs in a 5-chain\nwith no monochromatic 3-chain")
    fig.tight_layout()
    p = out / "ramsey_bad_coloring.png"
    fig.savefig(p, dpi=120)
    plt.close(fig)
    paths.append(str(p))

    # unary behavior census per base
    fig, ax = plt.subplots(figsize=(5, 4))
    labels, counts = [], []
    for base, config, label in (
            (Q_ORDER, None, "order"),
            (Q_ORDER, ConstantConfig(Q_ORDER, 1), "order + constant"),
            (RANDOM_GRAPH, None, "graph"),
            (EQUALITY, None, "partition")):
        labels.append(label)
        counts.append(len(enumerate_behaviors(base, 1, config)))
    ax.bar(labels, counts, color="tab:blue")
    for i, c in enumerate(counts):
        ax.text(i, c, str(c), ha="center", va="bottom")
    ax.set_ylabel("realizable unary behaviors")
    ax.set_title("Unary behavior census")
    fig.tight_layout()
    p = out / "behavior_census.png"
    fig.savefig(p, dpi=120)
    plt.close(fig)
    paths.append(str(p))
    return paths
