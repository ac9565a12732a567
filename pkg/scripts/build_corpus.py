"""Regenerate tests/fixtures/corpus: hand-written documents plus seeded
random ones rendered with prefixes, comments and irregular whitespace."""

import argparse
import random
import shutil
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from generators import random_aspect_ontology, random_abox, random_el_ontology  # noqa: E402
from ontomvn.ofn import serialize_ontology  # noqa: E402

HAND_WRITTEN = [
    "reputation.owl", "temporal.owl", "report.owl",
    "reasoning/consistent.owl", "reasoning/inconsistent.owl", "reasoning/unknown.owl",
    "reasoning/premise.owl", "reasoning/conclusion_unsupported.owl",
]

EXTRA = {
    "literals.owl": '''Prefix(:=<http://example.org/lit#>)
Ontology(<http://example.org/lit>
  Annotation(rdfs:comment "with \\"quotes\\" and a \\\\ backslash")
  AnnotationAssertion(rdfs:label :A "Ein Satz"@de)
  AnnotationAssertion(:weight :A "3"^^xsd:integer)
  SubClassOf(Annotation(rdfs:comment "why") :A :B)
)
''',
    "empty.owl": "Ontology()\n",
    "versioned.owl": '''Ontology(<urn:example:v> <urn:example:v:2>
  Import(<urn:example:base>)
  Import(<http://example.org/other>)
  Declaration(NamedIndividual(<urn:example:i>))
  Declaration(DataProperty(<urn:example:dp>))
)
''',
}


def render_random(onto, rng: random.Random) -> str:
    text = serialize_ontology(onto)
    ns = "http://example.org/gen#"
    text = "Prefix(g:=<%s>)\n// generated document\n" % ns + text.replace(f"<{ns}", "g:<")
    # prefixed names are written without angle brackets
    out = []
    for token in text.split("g:<"):
        if out:
            local, _, rest = token.partition(">")
            token = "g:" + local + rest
        out.append(token)
    text = "".join(out)
    if rng.random() < 0.5:
        text = text.replace("\n", "\n   ")
    return text


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=ROOT / "tests" / "fixtures" / "corpus")
    ap.add_argument("--seed", type=int, default=20240601)
    args = ap.parse_args(argv)
    fixtures = ROOT / "tests" / "fixtures"
    if args.out.exists():
        shutil.rmtree(args.out)
    args.out.mkdir(parents=True)
    for name in HAND_WRITTEN:
        shutil.copy(fixtures / name, args.out / name.replace("/", "_"))
    for name, text in EXTRA.items():
        (args.out / name).write_text(text)
    rng = random.Random(args.seed)
    k = 0
    while len(list(args.out.iterdir())) < 30:
        if k % 3 == 2:
            onto, _ = random_aspect_ontology(rng, max_axioms=15)
        else:
            onto = random_el_ontology(rng)
            if k % 3 == 1:
                onto = random_abox(rng, onto)
        (args.out / f"gen{k:02d}.owl").write_text(render_random(onto, rng))
        k += 1
    print(f"wrote {len(list(args.out.iterdir()))} documents to {args.out}")


if __name__ == "__main__":
    main()
