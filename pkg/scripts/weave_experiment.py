"""Weave seeded random aspect-tagged ontologies, check each result against
the filter oracle and report how module sizes vary with the selection."""

import argparse
import random
import statistics
import sys
import time
import warnings
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from generators import HAS_ASPECT, random_aspect_ontology, random_selectors  # noqa: E402
from oracles import weave_oracle  # noqa: E402
from ontomvn.model import axiom_aspects  # noqa: E402
from ontomvn.weaver import AspectSelector, UnknownAspectWarning, WeaveConfig, apply_aspects  # noqa: E402


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=500)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--max-axioms", type=int, default=50)
    ap.add_argument("--max-aspects", type=int, default=6)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    mismatches = 0
    kept_fraction = {0: [], 1: [], 2: [], 3: []}
    start = time.perf_counter()
    for _ in range(args.n):
        onto, n = random_aspect_ontology(rng, args.max_axioms, args.max_aspects)
        selectors = random_selectors(rng, n)
        include = rng.random() < 0.5
        cfg = WeaveConfig(tuple(AspectSelector(s) for s in selectors), HAS_ASPECT, include)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UnknownAspectWarning)
            out = apply_aspects(onto, cfg)
        tagged = [(ax, frozenset(a.value for a in axiom_aspects(ax, HAS_ASPECT))) for ax in onto.axioms]
        if set(out.axioms) != weave_oracle(tagged, selectors, include):
            mismatches += 1
        if onto.axioms:
            kept_fraction[len(selectors)].append(len(out.axioms) / len(onto.axioms))
    elapsed = time.perf_counter() - start

    print(f"{args.n} weaves, {mismatches} oracle mismatches, {elapsed:.2f}s")
    print(f"{'selectors':>9} {'cases':>6} {'mean kept':>10}")
    for k, values in kept_fraction.items():
        if values:
            print(f"{k:>9} {len(values):>6} {statistics.mean(values):>10.3f}")
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
