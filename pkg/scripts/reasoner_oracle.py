"""Compare classify against the naive fixpoint oracle on seeded random EL
ontologies, then time classify on growing chain-and-existential inputs."""

import argparse
import random
import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from generators import cls, random_el_ontology, role  # noqa: E402
from oracles import naive_named_subsumptions  # noqa: E402
from ontomvn.model import Existential, Iri, Ontology, SubClassOf, signature  # noqa: E402
from ontomvn.reasoner import classify  # noqa: E402


def oracle_run(n: int, seed: int, max_classes: int, max_roles: int, max_axioms: int) -> int:
    rng = random.Random(seed)
    bad = 0
    start = time.perf_counter()
    for i in range(n):
        o = random_el_ontology(rng, max_classes, max_roles, max_axioms)
        got = classify(o).named_pairs()
        want = naive_named_subsumptions(o, sorted(signature(o).classes))
        if got != want:
            bad += 1
            print(f"  case {i}: extra={sorted(got - want)} missing={sorted(want - got)}")
    print(f"oracle: {n} ontologies, {bad} discrepancies, {time.perf_counter() - start:.2f}s")
    return bad


def scaling(sizes) -> None:
    print(f"{'classes':>8} {'axioms':>8} {'pairs':>10} {'seconds':>8}")
    for k in sizes:
        axioms = []
        for i in range(k):
            axioms.append(SubClassOf(cls(i), cls(i + 1)))
            if i % 3 == 0:
                axioms.append(SubClassOf(cls(i), Existential(role(i % 2), cls((i * 7) % k))))
                axioms.append(SubClassOf(Existential(role(i % 2), cls(i)), cls((i + 5) % k)))
        o = Ontology(Iri("http://example.org/scale"), axioms=tuple(axioms))
        start = time.perf_counter()
        r = classify(o)
        print(f"{k:>8} {len(axioms):>8} {len(r.named_pairs()):>10} {time.perf_counter() - start:>8.3f}")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=3)
    ap.add_argument("--max-classes", type=int, default=6)
    ap.add_argument("--max-roles", type=int, default=2)
    ap.add_argument("--max-axioms", type=int, default=10)
    ap.add_argument("--sizes", type=int, nargs="*", default=[50, 100, 200])
    args = ap.parse_args()
    bad = oracle_run(args.n, args.seed, args.max_classes, args.max_roles, args.max_axioms)
    scaling(args.sizes)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
