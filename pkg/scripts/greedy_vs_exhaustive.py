"""How far is the greedy selection from the best coherent selection?

    python3 scripts/greedy_vs_exhaustive.py [--docs 300] [--max-units 10] [--seed 7]

For small random documents, enumerates every subset that fits the budget and
is closed under "satellite needs its nuclei", and compares the total raw
weight it covers with the greedy selection. This characterizes the greedy
rule; nothing in the package depends on it.
"""

from __future__ import annotations

import argparse
import itertools
import random
import statistics

from rhetsum import SummaryBudget, generate_summary
from rhetsum.synth import random_budget, random_document


def best_subset(esus, duration, weight, nuclei, budget):
    best = 0.0
    for k in range(len(esus) + 1):
        for combo in itertools.combinations(esus, k):
            chosen = set(combo)
            if sum(duration[u] for u in combo) > budget:
                continue
            if any(n not in chosen for u in combo for n in nuclei[u]):
                continue
            best = max(best, sum(weight[u] for u in combo))
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--docs", type=int, default=300)
    ap.add_argument("--max-units", type=int, default=10)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    ratios = []
    optimal = 0
    for _ in range(args.docs):
        doc = random_document(rng, max_units=args.max_units)
        budget = random_budget(rng, doc)
        run = generate_summary(doc, SummaryBudget(budget))
        g, w = run.graph, run.weights
        esus = list(g.esus)
        duration = {u: g.nodes[u].duration_s for u in esus}
        weight = {u: w.raw(u) for u in esus}
        nuclei = {u: g.nuclei_of(u) for u in esus}
        best = best_subset(esus, duration, weight, nuclei, budget)
        got = sum(weight[u] for u in run.selection.selected)
        ratio = 1.0 if best == 0 else got / best
        ratios.append(ratio)
        optimal += ratio >= 1.0 - 1e-12

    print(f"documents          {len(ratios)}")
    print(f"greedy optimal     {optimal} ({100 * optimal / len(ratios):.1f}%)")
    print(f"mean weight ratio  {statistics.fmean(ratios):.4f}")
    print(f"worst ratio        {min(ratios):.4f}")
    q = statistics.quantiles(ratios, n=10)
    print(f"10th percentile    {q[0]:.4f}")


if __name__ == "__main__":
    main()
