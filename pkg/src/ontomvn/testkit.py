"""Syntax, consistency and entailment test suites driven by a small manifest.

Manifest layout::

    <testsuite>
      <test id="t1" kind="PositiveEntailmentTest" input="a.ofn" conclusion="b.ofn"/>
      <test id="t2" kind="SyntaxTest" input="a.ofn" expectedProfile="EL"/>
    </testsuite>

Paths are relative to the manifest's directory.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .markup import MarkupError, read_markup
from .ofn import ParseError, check_syntax, parse_ontology
from .reasoner import (
    DEFAULT_ATOM_LIMIT,
    Consistency,
    EntailmentResult,
    detect_profile,
    entails,
    is_consistent,
)

log = logging.getLogger(__name__)

SYNTAX = "SyntaxTest"
CONSISTENCY = "ConsistencyTest"
INCONSISTENCY = "InconsistencyTest"
POSITIVE_ENTAILMENT = "PositiveEntailmentTest"
NEGATIVE_ENTAILMENT = "NegativeEntailmentTest"
ENTAILMENT_KINDS = (POSITIVE_ENTAILMENT, NEGATIVE_ENTAILMENT)
KNOWN_KINDS = (SYNTAX, CONSISTENCY, INCONSISTENCY) + ENTAILMENT_KINDS

DEFAULT_MANIFEST = "src/test/ontology-tests.xml"
REPORT_PATH = "target/test-report.txt"


class ManifestError(ConfigError):
    pass


class Verdict(enum.Enum):
    PASS = "Pass"
    FAIL = "Fail"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class TestCase:
    __test__ = False

    id: str
    kind: str
    input_path: str
    conclusion_path: str | None = None
    expected_profile: str | None = None

    def __post_init__(self):
        if self.kind in KNOWN_KINDS and (self.kind in ENTAILMENT_KINDS) != (self.conclusion_path is not None):
            raise ManifestError(f"test {self.id}: conclusion is required exactly for entailment tests")


@dataclass(frozen=True)
class TestOutcome:
    __test__ = False

    case_id: str
    verdict: Verdict
    detail: str = ""


@dataclass
class TestReport:
    __test__ = False

    outcomes: list = field(default_factory=list)

    @property
    def summary(self) -> dict:
        counts = {v.value: 0 for v in Verdict}
        for o in self.outcomes:
            counts[o.verdict.value] += 1
        return counts

    @property
    def failing(self) -> bool:
        return any(o.verdict is Verdict.FAIL for o in self.outcomes)

    def render(self) -> str:
        lines = []
        for o in self.outcomes:
            lines.append(f"{o.case_id}\t{o.verdict}\t{o.detail}")
        s = self.summary
        lines.append(f"Pass: {s['Pass']}, Fail: {s['Fail']}, Unknown: {s['Unknown']}")
        lines.append("result: " + ("FAILED" if self.failing else "PASSED"))
        return "\n".join(lines) + "\n"


def _read(path: str | Path) -> str:
    return Path(path).read_text("utf-8")


def _load(path: str | Path):
    """Parse a document, returning (ontology, None) or (None, failure detail)."""
    try:
        return parse_ontology(_read(path)), None
    except ParseError as exc:
        return None, f"parse error: {exc}"


def run_syntax_test(case: TestCase, compliancemode: str = "strict") -> TestOutcome:
    if compliancemode not in ("strict", "lenient"):
        raise ConfigError(f"compliancemode must be strict or lenient, not {compliancemode!r}")
    onto, diagnostics = check_syntax(_read(case.input_path))
    if onto is None:
        first = next((d for d in diagnostics if d.severity.value == "Error"), diagnostics[0])
        return TestOutcome(case.id, Verdict.FAIL, f"parse error: {first}")
    profile = detect_profile(onto)
    expected = case.expected_profile
    if expected is None or profile == expected:
        return TestOutcome(case.id, Verdict.PASS, f"profile {profile}")
    detail = f"profile {profile}, expected {expected}"
    if compliancemode == "strict":
        return TestOutcome(case.id, Verdict.FAIL, detail)
    return TestOutcome(case.id, Verdict.PASS, detail + " (lenient)")


def run_consistency_test(case: TestCase, atom_limit: int = DEFAULT_ATOM_LIMIT) -> TestOutcome:
    onto, err = _load(case.input_path)
    if onto is None:
        return TestOutcome(case.id, Verdict.FAIL, err)
    result = is_consistent(onto, atom_limit)
    if result is Consistency.UNKNOWN:
        return TestOutcome(case.id, Verdict.UNKNOWN, result.value)
    expected = Consistency.CONSISTENT if case.kind == CONSISTENCY else Consistency.INCONSISTENT
    return TestOutcome(case.id, Verdict.PASS if result is expected else Verdict.FAIL, result.value)


def run_entailment_test(case: TestCase, atom_limit: int = DEFAULT_ATOM_LIMIT) -> TestOutcome:
    premise, err = _load(case.input_path)
    if premise is None:
        return TestOutcome(case.id, Verdict.FAIL, err)
    conclusion, err = _load(case.conclusion_path)
    if conclusion is None:
        return TestOutcome(case.id, Verdict.FAIL, err)
    result = entails(premise, conclusion, atom_limit)
    if result is EntailmentResult.UNKNOWN:
        return TestOutcome(case.id, Verdict.UNKNOWN, result.value)
    expected = (EntailmentResult.ENTAILMENT if case.kind == POSITIVE_ENTAILMENT
                else EntailmentResult.NO_ENTAILMENT)
    return TestOutcome(case.id, Verdict.PASS if result is expected else Verdict.FAIL, result.value)


def run_case(case: TestCase, compliancemode: str = "strict",
             atom_limit: int = DEFAULT_ATOM_LIMIT) -> TestOutcome:
    if case.kind == SYNTAX:
        return run_syntax_test(case, compliancemode)
    if case.kind in (CONSISTENCY, INCONSISTENCY):
        return run_consistency_test(case, atom_limit)
    if case.kind in ENTAILMENT_KINDS:
        return run_entailment_test(case, atom_limit)
    log.warning("test %s: unknown kind %s", case.id, case.kind)
    return TestOutcome(case.id, Verdict.UNKNOWN, f"unsupported test kind {case.kind}")


def load_manifest(manifest_path: str | Path) -> list[TestCase]:
    path = Path(manifest_path)
    if not path.is_file():
        raise ManifestError(f"manifest not found: {path}")
    try:
        root = read_markup(path.read_bytes())
    except MarkupError as exc:
        raise ManifestError(f"{path}: {exc}") from None
    if root.name != "testsuite":
        raise ManifestError(f"{path}: root element must be <testsuite>")
    base = path.parent
    cases, ids = [], set()
    for node in root.elements("test"):
        cid, kind, inp = node.attr("id"), node.attr("kind"), node.attr("input")
        if not cid or not kind or not inp:
            raise ManifestError(f"{path}:{node.line}: <test> needs id, kind and input")
        if cid in ids:
            raise ManifestError(f"{path}:{node.line}: duplicate test id {cid}")
        ids.add(cid)
        conclusion = node.attr("conclusion")
        for p in (inp, conclusion):
            if p is not None and not (base / p).is_file():
                raise ManifestError(f"test {cid}: file not found: {base / p}")
        cases.append(TestCase(cid, kind, str(base / inp),
                              str(base / conclusion) if conclusion else None,
                              node.attr("expectedProfile")))
    return cases


def run_suite(manifest_path: str | Path, compliancemode: str = "strict",
              report_path: str | Path | None = REPORT_PATH,
              atom_limit: int = DEFAULT_ATOM_LIMIT) -> TestReport:
    report = TestReport([run_case(c, compliancemode, atom_limit)
                         for c in load_manifest(manifest_path)])
    if report_path is not None:
        out = Path(report_path)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(report.render(), "utf-8")
    return report
