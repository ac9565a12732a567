import random

from hypothesis import given, settings, strategies as st

from generators import HAS_ASPECT, NS, random_el_ontology
from ontomvn.diff import DiffReport, VerdictNote, render_diff, semantic_diff, structural_diff
from ontomvn.model import Annotation, Iri, NamedClass, Ontology, SubClassOf, signature
from ontomvn.ofn import parse_ontology
from ontomvn.reasoner import AUX_PREFIX, EntailmentResult, entails

A, B, C, D, E = (NamedClass(Iri(NS + n)) for n in "ABCDE")


def onto(*axioms, imports=()) -> Ontology:
    return Ontology(Iri(NS + "o"), imports=imports, axioms=axioms)


def pair(x, y):
    return (x.iri, y.iri)


def test_identical_ontologies():
    o = onto(SubClassOf(A, B))
    assert structural_diff(o, o) == (frozenset(), frozenset())
    r = semantic_diff(o, o)
    assert not (r.semantic_added or r.semantic_removed)


def test_added_axiom():
    added, removed = structural_diff(onto(SubClassOf(A, B)), onto(SubClassOf(A, B), SubClassOf(B, C)))
    assert added == {SubClassOf(B, C)} and removed == frozenset()


def test_annotation_change_is_remove_plus_add():
    plain = SubClassOf(A, B)
    tagged = SubClassOf(A, B, annotations={Annotation(HAS_ASPECT, Iri(NS + "asp"))})
    added, removed = structural_diff(onto(plain), onto(tagged))
    assert added == {tagged} and removed == {plain}
    assert not semantic_diff(onto(plain), onto(tagged)).semantic_added


def test_semantic_added_chain():
    r = semantic_diff(onto(SubClassOf(A, B)), onto(SubClassOf(A, B), SubClassOf(B, C)))
    assert r.semantic_added == {pair(B, C), pair(A, C)}
    assert r.semantic_removed == frozenset()
    assert r.verdict_note is VerdictNote.EXACT


def test_redundant_axiom_is_structural_only():
    before = onto(SubClassOf(A, B), SubClassOf(B, C))
    after = before.add(SubClassOf(A, C))
    r = semantic_diff(before, after)
    assert len(r.structural_added) == 1 and r.semantic_added == frozenset()


def test_profile_violation_marks_approximate():
    after = parse_ontology(f"Ontology(SubClassOf(<{NS}A> ObjectUnionOf(<{NS}B> <{NS}C>)))")
    assert semantic_diff(onto(), after).verdict_note is VerdictNote.APPROXIMATE


def test_render_sections():
    empty = render_diff(DiffReport())
    assert empty == "== Structural ==\n== Semantic ==\nverdict: Exact\n"
    r = semantic_diff(onto(), onto(SubClassOf(A, B), imports=(Iri("http://example.org/base"),)))
    text = render_diff(r)
    structural = text.split("== Imports ==")[0]
    assert [ln for ln in structural.splitlines() if ln.startswith("+")] == \
        [f"+ SubClassOf(<{NS}A> <{NS}B>)"]
    assert "+ <http://example.org/base>" in text
    assert f"+ <{NS}A> SubClassOf <{NS}B>" in text
    assert render_diff(r) == render_diff(semantic_diff(onto(), onto(SubClassOf(A, B), imports=(
        Iri("http://example.org/base"),))))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32))
def test_antisymmetry(seed):
    rng = random.Random(seed)
    a, b = random_el_ontology(rng), random_el_ontology(rng)
    ab, ba = semantic_diff(a, b), semantic_diff(b, a)
    assert ab.semantic_added == ba.semantic_removed
    assert ab.semantic_removed == ba.semantic_added
    assert ab.structural_added == ba.structural_removed
    assert not ab.structural_added & ab.structural_removed


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32))
def test_added_pairs_are_entailed_after_only(seed):
    rng = random.Random(seed)
    a, b = random_el_ontology(rng), random_el_ontology(rng)
    r = semantic_diff(a, b)
    for sub, sup in r.semantic_added:
        goal = onto(SubClassOf(NamedClass(sub), NamedClass(sup)))
        assert entails(b, goal) is EntailmentResult.ENTAILMENT
        assert entails(a, goal) is EntailmentResult.NO_ENTAILMENT
        assert sub != sup
        assert not sub.value.startswith(AUX_PREFIX) and not sup.value.startswith(AUX_PREFIX)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_triangle_for_additions(seed):
    """Holds for pairs over the classes already present in v2. A class first
    named in v3 can inherit a subsumption that v2 already implies for every
    class, which neither intermediate diff can mention."""
    rng = random.Random(seed)
    v1 = random_el_ontology(rng, max_axioms=5)
    v2 = v1.add(*random_el_ontology(rng, max_axioms=4).axioms)
    v3 = v2.add(*random_el_ontology(rng, max_axioms=4).axioms)
    known = signature(v2).classes
    whole = {p for p in semantic_diff(v1, v3).semantic_added if set(p) <= known}
    assert whole <= semantic_diff(v1, v2).semantic_added | semantic_diff(v2, v3).semantic_added


def test_triangle_on_fixture_sequence():
    v1 = onto(SubClassOf(A, B))
    v2 = v1.add(SubClassOf(B, C))
    v3 = v2.add(SubClassOf(C, D), SubClassOf(E, A))
    whole = semantic_diff(v1, v3).semantic_added
    assert whole <= semantic_diff(v1, v2).semantic_added | semantic_diff(v2, v3).semantic_added
    assert pair(E, D) in whole and pair(A, D) in whole
