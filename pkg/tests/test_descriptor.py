import random

import pytest
from hypothesis import given, settings, strategies as st

from ontomvn.descriptor import (
    Catalog,
    CatalogEntry,
    CatalogError,
    Coordinate,
    Dependency,
    DescriptorError,
    ProjectDescriptor,
    RepositorySpec,
    parse_catalog,
    parse_descriptor,
    write_catalog,
    write_descriptor,
)
from ontomvn.markup import MarkupError, read_markup
from ontomvn.model import Iri


def test_read_markup_examples():
    node = read_markup("<a><b>x</b></a>")
    assert node.name == "a" and node.find("b").text() == "x"
    with pytest.raises(MarkupError):
        read_markup("<a>")
    uri = read_markup('<uri name="n" uri="u"/>')
    assert uri.attributes == [("name", "n"), ("uri", "u")] and not uri.children


def test_markup_rejects_dtd_and_reports_position():
    with pytest.raises(MarkupError):
        read_markup('<!DOCTYPE a [<!ENTITY x "y">]><a>&x;</a>')
    with pytest.raises(MarkupError) as err:
        read_markup("<a>\n  <b></c>\n</a>")
    assert err.value.line == 2


def test_markup_entities_and_colons():
    node = read_markup("<p:a x='1'>&lt;&amp;&gt;&quot;&apos;<!-- c --></p:a>")
    assert node.name == "p:a" and node.text() == "<&>\"'"


def test_camera_descriptor(fixtures):
    d = parse_descriptor((fixtures / "pom_camera.xml").read_text())
    assert d.dependencies == (Dependency(Coordinate(
        "xfront.com.owl.ontologies", "Camera-OWL-Ontology", "1.0-SNAPSHOT", "owl")),)
    assert d.repositories == (RepositorySpec(
        "snapshots", "http://www.corporate-semantic-web.de/repository/snapshots/",
        "OntoMaven Snapshot Repository", True),)


def test_aspect_descriptor(fixtures):
    d = parse_descriptor((fixtures / "pom_aspects.xml").read_text())
    assert d.params("apply-aspects") == {
        "userAspects": ["http://example.org/reputation#Reputation123",
                        "http://example.org/provenance#prov_789"],
        "aspectsIRI": "http://corporate-semantic-web.de/aspectOWL#hasAspect",
        "includeOriginalAxioms": "true",
    }
    assert d.params("owlimport") == {"owlfile": "src/resource/reputation.owl", "local": "true"}


def test_alias_parameter_warns():
    d = parse_descriptor("""<project><groupId>g</groupId><artifactId>a</artifactId><version>1</version>
      <build><plugins><plugin><artifactId>OntoMvnApplyAspects</artifactId>
      <configuration><ifIncludeOriginalAxioms>false</ifIncludeOriginalAxioms></configuration>
      </plugin></plugins></build></project>""")
    assert d.params("apply-aspects") == {"includeOriginalAxioms": "false"}
    assert any("ifIncludeOriginalAxioms" in w for w in d.warnings)


def test_inactive_profile_ignored():
    d = parse_descriptor("""<project><groupId>g</groupId><artifactId>a</artifactId><version>1</version>
      <profiles><profile><repositories><repository><id>x</id><url>http://h/</url>
      </repository></repositories></profile></profiles></project>""")
    assert d.repositories == ()


@pytest.mark.parametrize("doc", [
    "<project><artifactId>a</artifactId><version>1</version></project>",
    "<project><groupId>g</groupId><artifactId>a/b</artifactId><version>1</version></project>",
    """<project><groupId>g</groupId><artifactId>a</artifactId><version>1</version><dependencies>
       <dependency><groupId>x</groupId><artifactId>y</artifactId><version>1</version></dependency>
       <dependency><groupId>x</groupId><artifactId>y</artifactId><version>2</version></dependency>
       </dependencies></project>""",
    """<project><groupId>g</groupId><artifactId>a</artifactId><version>1</version>
       <repositories><repository><id>x</id></repository></repositories></project>""",
])
def test_descriptor_errors(doc):
    with pytest.raises(DescriptorError):
        parse_descriptor(doc)


def test_coordinate_rules():
    assert Coordinate("g", "a", "1.0-SNAPSHOT").is_snapshot
    assert not Coordinate("g", "a", "1.0").is_snapshot
    assert Coordinate.parse("g.h:a:ofn:docs:2") == Coordinate("g.h", "a", "2", "ofn", "docs")
    for bad in [("g..h", "a", "1"), ("g", "a b", "1"), ("g", "a", ""), ("g", "..", "1")]:
        with pytest.raises(DescriptorError):
            Coordinate(*bad)


def test_descriptor_whitespace_stable(fixtures):
    text = (fixtures / "pom_aspects.xml").read_text()
    squeezed = "".join(line.strip() for line in text.splitlines())
    assert parse_descriptor(squeezed) == parse_descriptor(text)


def test_write_descriptor_round_trip(fixtures):
    for name in ("pom_camera.xml", "pom_aspects.xml"):
        d = parse_descriptor((fixtures / name).read_text())
        again = parse_descriptor(write_descriptor(d))
        assert again.coordinate == d.coordinate
        assert again.dependencies == d.dependencies
        assert again.repositories == d.repositories
        assert again.plugin_params == d.plugin_params


def test_catalog_examples():
    doc = '<catalog><uri name="http://ex.org/b" uri="repo/http/ex.org/b.ofn.owl"/></catalog>'
    cat = parse_catalog(doc)
    assert len(cat) == 1 and cat.lookup(Iri("http://ex.org/b")) == "repo/http/ex.org/b.ofn.owl"
    assert len(parse_catalog("<catalog/>")) == 0
    with pytest.raises(CatalogError):
        parse_catalog('<catalog><uri name="http://a/x" uri="1"/><uri name="http://a/x" uri="2"/></catalog>')
    with pytest.raises(CatalogError):
        parse_catalog('<catalog><uri name="relative" uri="1"/></catalog>')
    assert write_catalog(Catalog()).endswith("<catalog></catalog>\n")


def test_catalog_unknown_entry_warns():
    cat = parse_catalog('<catalog><rewriteURI uriStartString="x" rewritePrefix="y"/>'
                        '<uri name="http://a/x" uri="1"/></catalog>')
    assert len(cat) == 1 and len(cat.warnings) == 1


def test_catalog_first_match_kept_on_extend():
    n = Iri("http://a/n")
    cat = Catalog((CatalogEntry(n, "a"),)).extended([CatalogEntry(n, "b")])
    assert cat.lookup(n) == "a"


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 50), st.text("abc/._-", min_size=1, max_size=12)),
                max_size=12, unique_by=lambda t: t[0]))
def test_catalog_round_trip(items):
    cat = Catalog(tuple(CatalogEntry(Iri(f"http://ex.org/o{n}"), loc) for n, loc in items))
    again = parse_catalog(write_catalog(cat))
    assert again.entries == cat.entries


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_descriptor_round_trip_random(seed):
    rng = random.Random(seed)
    deps = tuple(Dependency(Coordinate(f"g{i}.x", f"a{i}", f"{rng.randint(1, 9)}.0",
                                       rng.choice(["owl", "ofn"])))
                 for i in range(rng.randint(0, 4)))
    repos = tuple(RepositorySpec(f"r{i}", f"http://h{i}.org/repo/", None, rng.random() < 0.5)
                  for i in range(rng.randint(0, 3)))
    d = ProjectDescriptor(Coordinate("org.x", "p", "1.0-SNAPSHOT"), deps, repos,
                          {"test": {"compliancemode": "lenient"}})
    again = parse_descriptor(write_descriptor(d))
    assert (again.dependencies, again.repositories, again.plugin_params) == \
        (d.dependencies, d.repositories, d.plugin_params)
