import random

import pytest
from hypothesis import given, settings, strategies as st

from ontomvn.model import (
    Annotation,
    ConflictingDeclaration,
    Conjunction,
    Declaration,
    EntityKind,
    EquivalentClasses,
    Existential,
    InvalidIri,
    Iri,
    Literal,
    NamedClass,
    Ontology,
    SubClassOf,
    axiom_aspects,
    canonicalize,
    intersection,
    signature,
)

from generators import HAS_ASPECT, random_el_ontology

A, B, C, D = (NamedClass(Iri(f"http://ex.org/{n}")) for n in "ABCD")
R = Iri("http://ex.org/r")


@pytest.mark.parametrize("text", ["http://ex.org/a", "urn:isbn:123", "https://x.y/z#w"])
def test_iri_accepts_absolute(text):
    assert Iri(text).value == text


@pytest.mark.parametrize("text", ["A", "/rel/path", "", "http://ex.org/a b", "#frag"])
def test_iri_rejects_relative(text):
    with pytest.raises(InvalidIri):
        Iri(text)


def test_iri_order_is_codepoint():
    assert Iri("http://ex.org/B") < Iri("http://ex.org/a")


def test_conjunction_sorted_and_deduplicated():
    assert Conjunction((B, A)) == Conjunction((A, B))
    assert Conjunction((A, B, A)).operands == (A, B)
    with pytest.raises(ValueError):
        Conjunction((A, A))
    assert intersection(A, A) == A


def test_canonicalize_examples():
    ax = SubClassOf(Conjunction((B, A)), C)
    assert canonicalize(ax).sub.operands == (A, B)
    assert canonicalize(canonicalize(ax)) == canonicalize(ax)
    assert EquivalentClasses((C, C, D)) == EquivalentClasses((C, D))


def test_annotations_participate_in_equality():
    plain = SubClassOf(A, B)
    tagged = SubClassOf(A, B, annotations={Annotation(HAS_ASPECT, Iri("http://ex.org/asp"))})
    assert plain != tagged
    assert len(Ontology(axioms=(plain, tagged, plain)).axioms) == 2


def test_ontology_invariants():
    with pytest.raises(ValueError):
        Ontology(imports=(Iri("http://ex.org/b"), Iri("http://ex.org/b")))
    with pytest.raises(ValueError):
        Ontology(version_iri=Iri("http://ex.org/v1"))


def test_signature_examples():
    o = Ontology(axioms=(Declaration(EntityKind.CLASS, A.iri), SubClassOf(A, B)))
    assert signature(o).classes == {A.iri, B.iri}
    empty = signature(Ontology())
    assert not (empty.classes or empty.object_properties or empty.individuals)
    with pytest.raises(ConflictingDeclaration):
        signature(Ontology(axioms=(Declaration(EntityKind.CLASS, A.iri),
                                   Declaration(EntityKind.OBJECT_PROPERTY, A.iri))))


def test_declaration_wins_over_usage():
    o = Ontology(axioms=(Declaration(EntityKind.OBJECT_PROPERTY, A.iri),
                         SubClassOf(NamedClass(A.iri), B)))
    sig = signature(o)
    assert A.iri in sig.object_properties and A.iri not in sig.classes


def test_axiom_aspects():
    rep = Iri("http://example.org/reputation#Reputation123")
    prov = Iri("http://example.org/provenance#prov_789")
    ax = SubClassOf(A, B, annotations={Annotation(HAS_ASPECT, rep)})
    assert axiom_aspects(ax, HAS_ASPECT) == {rep}
    assert axiom_aspects(SubClassOf(A, B), HAS_ASPECT) == frozenset()
    two = SubClassOf(A, B, annotations={Annotation(HAS_ASPECT, rep), Annotation(HAS_ASPECT, prov),
                                        Annotation(HAS_ASPECT, Literal("text")),
                                        Annotation(Iri("http://ex.org/other"), rep)})
    assert axiom_aspects(two, HAS_ASPECT) == {rep, prov}


def _permute(expr, rng):
    if isinstance(expr, Conjunction):
        ops = [_permute(o, rng) for o in expr.operands]
        rng.shuffle(ops)
        # rebuilt through object.__new__ to bypass the sorting constructor
        raw = object.__new__(Conjunction)
        object.__setattr__(raw, "operands", tuple(ops))
        return raw
    if isinstance(expr, Existential):
        return Existential(expr.role, _permute(expr.filler, rng))
    return expr


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_canonical_form_ignores_operand_order(seed):
    rng = random.Random(seed)
    for ax in random_el_ontology(rng).axioms:
        if isinstance(ax, SubClassOf):
            shuffled = SubClassOf(_permute(ax.sub, rng), _permute(ax.sup, rng))
            assert canonicalize(shuffled) == canonicalize(ax)
            assert canonicalize(shuffled).ofn == ax.ofn


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_signature_monotone(seed):
    rng = random.Random(seed)
    o = random_el_ontology(rng, declare_all=False)
    bigger = o.add(*random_el_ontology(rng, declare_all=False).axioms)
    s1, s2 = signature(o), signature(bigger)
    assert s1.classes <= s2.classes and s1.object_properties <= s2.object_properties


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_set_semantics(seed):
    o = random_el_ontology(random.Random(seed))
    assert len(o.add(*o.axioms).axioms) == len(o.axioms)
