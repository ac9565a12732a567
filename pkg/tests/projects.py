"""On-disk project layouts for lifecycle tests, the acceptance module and
the end-to-end demo script."""

from __future__ import annotations

from pathlib import Path

BASE_ONTOLOGY = """Prefix(:=<http://example.org/base#>)
Ontology(<http://example.org/base>
  SubClassOf(:Camera :Device)
)
"""

APP_ONTOLOGY = """Prefix(:=<http://example.org/app#>)
Prefix(b:=<http://example.org/base#>)
Prefix(asp:=<http://corporate-semantic-web.de/aspectOWL#>)
Ontology(<http://example.org/app>
  Import(<http://example.org/base>)
  SubClassOf(:Dslr b:Camera)
  SubClassOf(Annotation(asp:hasAspect <http://example.org/reputation#Reputation123>) :Dslr :Trusted)
  SubClassOf(Annotation(asp:hasAspect <http://example.org/provenance#prov_789>) :Dslr :Traced)
)
"""

APP_MANIFEST = """<testsuite>
  <test id="entailed" kind="PositiveEntailmentTest" input="../main/ontology/app.owl" conclusion="conclusion.owl"/>
  <test id="profile" kind="SyntaxTest" input="../main/ontology/app.owl" expectedProfile="EL"/>
</testsuite>
"""

APP_CONCLUSION = """Prefix(:=<http://example.org/app#>)
Ontology(SubClassOf(:Dslr :Trusted))
"""


def _repositories(url: str) -> str:
    return f"<repositories><repository><id>stub</id><url>{url}</url></repository></repositories>"


def make_base(root: Path, url: str) -> Path:
    """A dependency-free project deployable to ``url``."""
    base = root / "base"
    (base / "src/main/ontology").mkdir(parents=True, exist_ok=True)
    (base / "pom.xml").write_text(
        "<project><groupId>org.example</groupId><artifactId>base</artifactId><version>1.0</version>"
        + _repositories(url) + "</project>\n")
    (base / "src/main/ontology/base.owl").write_text(BASE_ONTOLOGY)
    return base


def make_app(root: Path, url: str, failing_test: bool = False) -> Path:
    """A project that depends on the base project, imports its ontology,
    weaves one aspect and runs a two-case test manifest."""
    app = root / "app"
    (app / "src/main/ontology").mkdir(parents=True, exist_ok=True)
    (app / "src/test").mkdir(parents=True, exist_ok=True)
    (app / "pom.xml").write_text(f"""<project>
  <groupId>org.example</groupId><artifactId>app</artifactId><version>0.1-SNAPSHOT</version>
  {_repositories(url)}
  <dependencies><dependency>
    <groupId>org.example</groupId><artifactId>base</artifactId><version>1.0</version><type>owl</type>
  </dependency></dependencies>
  <build><plugins>
    <plugin><artifactId>OntoMvnImport</artifactId>
      <configuration><owlfile>src/main/ontology/app.owl</owlfile><local>true</local></configuration>
      <executions><execution><goals><goal>owlimport</goal></goals></execution></executions>
    </plugin>
    <plugin><artifactId>OntoMvnApplyAspects</artifactId>
      <configuration>
        <userAspects><aspect>http://example.org/reputation#Reputation123</aspect></userAspects>
        <aspectsIRI>http://corporate-semantic-web.de/aspectOWL#hasAspect</aspectsIRI>
        <includeOriginalAxioms>true</includeOriginalAxioms>
      </configuration>
    </plugin>
  </plugins></build>
</project>
""")
    (app / "src/main/ontology/app.owl").write_text(APP_ONTOLOGY)
    (app / "src/test/ontology-tests.xml").write_text(APP_MANIFEST)
    conclusion = APP_CONCLUSION.replace(":Trusted", ":Unrelated") if failing_test else APP_CONCLUSION
    (app / "src/test/conclusion.owl").write_text(conclusion)
    return app


def make_standalone(root: Path, ontology: str, pom_extra: str = "") -> Path:
    """Project with no dependencies and no repositories."""
    proj = root / "solo"
    (proj / "src/main/ontology").mkdir(parents=True, exist_ok=True)
    (proj / "pom.xml").write_text(
        "<project><groupId>org.example</groupId><artifactId>solo</artifactId><version>1.0</version>"
        + pom_extra + "</project>\n")
    (proj / "src/main/ontology/solo.owl").write_text(ontology)
    return proj
