"""Walk the space-exploration fixture through every pipeline stage.

    python3 scripts/space_exploration_demo.py [--time 600] [--computed]

Prints the relation edges, levels, weight table, ranking, tie decisions and
the greedy trace, then the Markdown rendering of the resulting summary.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from rhetsum import SummaryBudget, generate_summary, parse_document_spec, parse_user_profile, render_markdown

DATA = Path(__file__).resolve().parents[1] / "data"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--time", type=float, default=600.0)
    ap.add_argument("--computed", action="store_true", help="compute weights instead of using presets")
    args = ap.parse_args()

    doc = parse_document_spec((DATA / "space_exploration.json").read_bytes())
    profile = parse_user_profile((DATA / "space_profile.json").read_bytes())
    run = generate_summary(doc, SummaryBudget(args.time), profile, pre_weighted=not args.computed)

    print("edges")
    for e in run.graph.edges:
        kind = f"{e.rel_type}/orbit {e.orbit}" if e.is_ns else f"{e.rel_type} (multi-nucleus)"
        print(f"  {e.source} -> {e.target}  [{kind}]")

    print("\nweights")
    width = max(len(u) for u in run.weights)
    for uid in run.final_order:
        r = run.weights[uid]
        print(f"  {uid:<{width}}  raw={r.raw_weight:.3f}  norm={r.normalized_weight:.3f}  L={r.level}  rank={r.rank}")

    print("\ntie decisions")
    for d in run.decisions or ():
        print(f"  {list(d.group)} -> {list(d.chosen_order)}  ({d.method}: {d.detail})")
    if not run.decisions:
        print("  none")

    print(f"\nselection under {args.time:g} s")
    durations = {u.id: u.duration_s for u in doc.units}
    for uid in run.final_order:
        verdict = "selected" if uid in run.selection.selected else next(
            s.reason for s in run.selection.skipped if s.id == uid
        )
        print(f"  {uid:<{width}}  {durations[uid]:>5g} s  {verdict}")
    print(f"  total {run.selection.total_duration_s:g} s")

    print("\n" + render_markdown(run.manifest, doc))


if __name__ == "__main__":
    main()
