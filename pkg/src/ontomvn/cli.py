"""``ontomvn <goal|phase> [-Dname=value]... [--offline] [--local-repo PATH]``

Goals run against the project in ``--project-dir`` (default: the current
directory), which must contain ``pom.xml``. Phases run every goal bound to
themselves and to all earlier phases, in lifecycle order.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from .descriptor import Coordinate, DescriptorError, ProjectDescriptor, parse_descriptor
from .diff import render_diff, semantic_diff
from .errors import ConfigError, InternalError, OntomvnError
from .model import Ontology
from .ofn import parse_ontology, serialize_ontology
from .reasoner import DEFAULT_ATOM_LIMIT
from .reports import (
    GRAPH_FILE,
    SUMMARY_FILE,
    TECHNICAL_FILE,
    emit_graph,
    summary_report,
    technical_report,
)
from .repository import HttpClient, LocalRepository, credentials_from_env, deploy, fetch
from .resolver import import_goal, load_catalog, resolve_dependencies
from .testkit import DEFAULT_MANIFEST, REPORT_PATH, TestCase, run_suite, run_syntax_test
from .weaver import WeaveConfig, apply_aspects

log = logging.getLogger("ontomvn")

PHASES = ("validate", "resolve", "process", "test", "package", "install", "deploy")

# goal -> phase it belongs to
GOAL_PHASES = {
    "validate": "validate",
    "resolve": "resolve",
    "owlimport": "resolve",
    "semantic-diff": "process",
    "ontologyreport": "process",
    "technicalreport": "process",
    "visualizer": "process",
    "test": "test",
    "test-syntax": "test",
    "apply-aspects": "package",
    "package": "package",
    "install": "install",
    "deploy": "deploy",
}

# goals every phase runs even when the descriptor configures nothing
DEFAULT_PHASE_GOALS = {
    "validate": ("validate",),
    "resolve": ("resolve",),
    "process": (),
    "test": ("test",),
    "package": ("package",),
    "install": ("install",),
    "deploy": ("deploy",),
}

GOAL_DEFAULTS = {
    "owlimport": {"local": "true"},
    "test": {"compliancemode": "strict", "manifest": DEFAULT_MANIFEST},
    "test-syntax": {"compliancemode": "strict", "expectedProfile": "EL"},
    "apply-aspects": {"includeOriginalAxioms": "true"},
    "technicalreport": {"maxGroups": "10", "groupingAlgorithm": "components"},
}


class UsageError(ConfigError):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class GoalInvocation:
    goal_name: str
    parameter_overrides: list = field(default_factory=list)
    project_dir: Path = Path(".")
    offline: bool = False
    local_repo: Path | None = None
    plan_only: bool = False

    @property
    def overrides(self) -> dict:
        return dict(self.parameter_overrides)


def default_local_repo() -> Path:
    home = os.environ.get("ONTOMVN_HOME")
    base = Path(home) if home else Path.home() / ".ontomvn"
    return base / "repository"


def parse_invocation(argv) -> GoalInvocation:
    ap = _ArgumentParser(prog="ontomvn", description="ontology build lifecycle")
    ap.add_argument("target", help="goal or lifecycle phase")
    ap.add_argument("-D", dest="defines", action="append", default=[], metavar="NAME=VALUE",
                    help="goal parameter override")
    ap.add_argument("-o", "--offline", action="store_true", help="never contact remote hosts")
    ap.add_argument("--local-repo", type=Path, help="local repository root")
    ap.add_argument("--project-dir", type=Path, default=Path("."))
    ap.add_argument("--plan", action="store_true", help="print the goals a phase would run")
    ap.add_argument("-q", "--quiet", action="store_true")
    args = ap.parse_args(list(argv))
    if args.target not in GOAL_PHASES and args.target not in PHASES:
        raise UsageError(f"unknown goal or phase: {args.target}")
    overrides = []
    for token in args.defines:
        name, sep, value = token.partition("=")
        if not sep or not name.strip():
            raise UsageError(f"malformed parameter -D{token}; expected -Dname=value")
        overrides.append((name.strip(), value))
    if args.quiet:
        logging.getLogger().setLevel(logging.WARNING)
    return GoalInvocation(args.target, overrides, args.project_dir, args.offline,
                          args.local_repo, args.plan)


def plan(phase: str, descriptor: ProjectDescriptor | None = None) -> list[str]:
    """Goals run by ``phase``: fixed defaults plus goals configured in the
    descriptor, each phase's defaults ahead of its configured goals."""
    if phase not in PHASES:
        raise UsageError(f"not a lifecycle phase: {phase}")
    configured = set(descriptor.plugin_params) if descriptor else set()
    goals = []
    for p in PHASES[:PHASES.index(phase) + 1]:
        extra = [g for g in GOAL_PHASES if GOAL_PHASES[g] == p and g in configured
                 and g not in DEFAULT_PHASE_GOALS[p]]
        for g in list(DEFAULT_PHASE_GOALS[p]) + extra:
            if g not in goals:
                goals.append(g)
    return goals


def print_plan(phase: str, descriptor: ProjectDescriptor | None = None) -> str:
    lines = []
    for g in plan(phase, descriptor):
        lines.append(f"{GOAL_PHASES[g]}: {g}")
    return "\n".join(lines) + "\n"


# -- goal context -------------------------------------------------------------


class Project:
    def __init__(self, inv: GoalInvocation):
        self.inv = inv
        self.dir = inv.project_dir.resolve()
        pom = self.dir / "pom.xml"
        if not pom.is_file():
            raise ConfigError(f"no pom.xml in {self.dir}")
        self.pom_bytes = pom.read_bytes()
        self.descriptor = parse_descriptor(self.pom_bytes)
        self.local = LocalRepository(inv.local_repo or default_local_repo())
        self.client = HttpClient(credentials_from_env())
        self.target = self.dir / "target"
        self.packaged: Path | None = None

    @property
    def coordinate(self) -> Coordinate:
        return self.descriptor.coordinate

    def params(self, goal: str) -> dict:
        """Command line beats descriptor beats built-in default."""
        merged = dict(GOAL_DEFAULTS.get(goal, {}))
        merged.update(self.descriptor.params(goal))
        merged.update(self.inv.overrides)
        return merged

    def path(self, relative: str) -> Path:
        p = Path(relative)
        return p if p.is_absolute() else self.dir / p

    def owlfile(self, params: dict) -> Path:
        if "owlfile" in params:
            return self.path(params["owlfile"])
        for goal in sorted(self.descriptor.plugin_params):
            value = self.descriptor.plugin_params[goal].get("owlfile")
            if value:
                return self.path(value)
        c = self.coordinate
        return self.dir / "src" / "main" / "ontology" / f"{c.artifact_id}.{c.packaging}"

    def load_main(self, params: dict) -> Ontology:
        path = self.owlfile(params)
        if not path.is_file():
            raise ConfigError(f"ontology file not found: {path}")
        return parse_ontology(path.read_text("utf-8"))

    def write(self, relative: str, text: str) -> Path:
        out = self.target / relative
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, "utf-8")
        return out


def _flag(params: dict, name: str) -> bool:
    value = str(params.get(name, "false")).strip().lower()
    if value not in ("true", "false"):
        raise ConfigError(f"{name} must be true or false, not {value!r}")
    return value == "true"


def _int(params: dict, name: str, default: int) -> int:
    try:
        value = int(params.get(name, default))
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be an integer") from None
    if value < 1:
        raise ConfigError(f"{name} must be positive")
    return value


# -- goals --------------------------------------------------------------------


def goal_validate(p: Project) -> int:
    onto = p.load_main(p.params("validate"))
    load_catalog(p.local)
    print(f"[validate] {p.coordinate}: {len(onto.axioms)} axioms, {len(onto.imports)} imports")
    return 0


def goal_resolve(p: Project) -> int:
    report = resolve_dependencies(p.descriptor, p.local, p.inv.offline, p.client)
    p.write("resolution.txt", report.render())
    print(f"[resolve] {len(report.selected) - 1} dependencies selected, "
          f"{len(report.displaced)} displaced")
    return 0


def goal_owlimport(p: Project) -> int:
    params = p.params("owlimport")
    report = import_goal(p.owlfile(params), _flag(params, "local"), p.local,
                         p.descriptor.repositories, p.inv.offline, p.client)
    p.write("imports.txt", report.render())
    print(f"[owlimport] {len(report.closure)} imported ontologies, "
          f"{len(report.catalog_delta)} new catalog entries")
    return 0


def _load_version(p: Project, ref: str) -> Ontology:
    path = p.path(ref)
    if path.is_file():
        return parse_ontology(path.read_text("utf-8"))
    try:
        coord = Coordinate.parse(ref)
    except DescriptorError:
        raise ConfigError(f"semantic-diff: {ref} is neither a file nor a coordinate") from None
    data, _ = fetch(coord, p.descriptor.repositories, p.local, p.inv.offline, p.client)
    return parse_ontology(data.decode("utf-8"))


def goal_semantic_diff(p: Project) -> int:
    params = p.params("semantic-diff")
    for name in ("before", "after"):
        if not params.get(name):
            raise ConfigError(f"semantic-diff needs -D{name}=<path|coordinate>")
    limit = _int(params, "reasonerAtomLimit", DEFAULT_ATOM_LIMIT)
    report = semantic_diff(_load_version(p, params["before"]), _load_version(p, params["after"]),
                           limit)
    text = render_diff(report)
    p.write("semantic-diff.txt", text)
    print(text, end="")
    return 0


def goal_ontologyreport(p: Project) -> int:
    out = p.write(f"reports/{SUMMARY_FILE}", summary_report(p.load_main(p.params("ontologyreport"))))
    print(f"[ontologyreport] wrote {out.relative_to(p.dir)}")
    return 0


def goal_technicalreport(p: Project) -> int:
    params = p.params("technicalreport")
    if params.get("groupingAlgorithm", "components") != "components":
        raise ConfigError(f"unknown groupingAlgorithm {params['groupingAlgorithm']!r}")
    text = technical_report(p.load_main(params), _int(params, "maxGroups", 10))
    out = p.write(f"reports/{TECHNICAL_FILE}", text)
    print(f"[technicalreport] wrote {out.relative_to(p.dir)}")
    return 0


def goal_visualizer(p: Project) -> int:
    out = p.write(f"reports/{GRAPH_FILE}", emit_graph(p.load_main(p.params("visualizer"))))
    print(f"[visualizer] wrote {out.relative_to(p.dir)}")
    return 0


def goal_test(p: Project) -> int:
    params = p.params("test")
    manifest = p.path(params["manifest"])
    explicit = "manifest" in p.descriptor.params("test") or "manifest" in p.inv.overrides
    if not manifest.is_file() and not explicit:
        print("[test] no test manifest; nothing to run")
        return 0
    report = run_suite(manifest, params["compliancemode"], p.dir / REPORT_PATH,
                       _int(params, "reasonerAtomLimit", DEFAULT_ATOM_LIMIT))
    s = report.summary
    print(f"[test] Pass: {s['Pass']}, Fail: {s['Fail']}, Unknown: {s['Unknown']}")
    return 1 if report.failing else 0


def goal_test_syntax(p: Project) -> int:
    params = p.params("test-syntax")
    path = p.owlfile(params)
    if not path.is_file():
        raise ConfigError(f"ontology file not found: {path}")
    case = TestCase("syntax", "SyntaxTest", str(path), expected_profile=params["expectedProfile"])
    outcome = run_syntax_test(case, params["compliancemode"])
    p.write("test-syntax.txt", f"{outcome.case_id}\t{outcome.verdict}\t{outcome.detail}\n")
    print(f"[test-syntax] {outcome.verdict}: {outcome.detail}")
    return 1 if outcome.verdict.value == "Fail" else 0


def goal_apply_aspects(p: Project) -> int:
    params = p.params("apply-aspects")
    config = WeaveConfig.from_params(params)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        woven = apply_aspects(p.load_main(params), config)
    for w in caught:
        log.warning("%s", w.message)
    c = p.coordinate
    out = p.write(f"{c.artifact_id}-{c.version}-aspects.{c.packaging}", serialize_ontology(woven))
    print(f"[apply-aspects] {len(woven.axioms)} axioms -> {out.relative_to(p.dir)}")
    return 0


def goal_package(p: Project) -> int:
    params = p.params("package")
    path = p.owlfile(params)
    if not path.is_file():
        raise ConfigError(f"ontology file not found: {path}")
    data = path.read_bytes()
    parse_ontology(data.decode("utf-8"))
    c = p.coordinate
    out = p.target / f"{c.artifact_id}-{c.version}.{c.packaging}"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(data)
    p.packaged = out
    print(f"[package] {out.relative_to(p.dir)}")
    return 0


def _artifact_bytes(p: Project) -> bytes:
    c = p.coordinate
    packaged = p.packaged or p.target / f"{c.artifact_id}-{c.version}.{c.packaging}"
    if packaged.is_file():
        return packaged.read_bytes()
    path = p.owlfile(p.params("package"))
    if not path.is_file():
        raise ConfigError(f"ontology file not found: {path}")
    return path.read_bytes()


def goal_install(p: Project) -> int:
    record = p.local.install(_artifact_bytes(p), p.descriptor, p.pom_bytes)
    print(f"[install] {record.coordinate} sha256={record.content_hash} -> {p.local.root}")
    return 0


def goal_deploy(p: Project) -> int:
    params = p.params("deploy")
    repos = p.descriptor.repositories
    wanted = params.get("repositoryId")
    if wanted:
        matches = [r for r in repos if r.id == wanted]
        if not matches:
            raise ConfigError(f"deploy: no repository with id {wanted!r}")
        remote = matches[0]
    elif repos:
        remote = repos[0]
    else:
        raise ConfigError("deploy: the descriptor declares no repository")
    if p.inv.offline:
        raise ConfigError("deploy is not possible offline")
    conf = deploy(p.coordinate, _artifact_bytes(p), p.pom_bytes, remote, client=p.client)
    print(f"[deploy] {conf.coordinate} -> {remote.id} ({remote.url})")
    return 0


GOALS = {
    "validate": goal_validate,
    "resolve": goal_resolve,
    "owlimport": goal_owlimport,
    "semantic-diff": goal_semantic_diff,
    "ontologyreport": goal_ontologyreport,
    "technicalreport": goal_technicalreport,
    "visualizer": goal_visualizer,
    "test": goal_test,
    "test-syntax": goal_test_syntax,
    "apply-aspects": goal_apply_aspects,
    "package": goal_package,
    "install": goal_install,
    "deploy": goal_deploy,
}


def execute(inv: GoalInvocation) -> int:
    if inv.plan_only:
        descriptor = None
        pom = inv.project_dir / "pom.xml"
        if pom.is_file():
            descriptor = parse_descriptor(pom.read_bytes())
        print(print_plan(inv.goal_name, descriptor), end="")
        return 0
    project = Project(inv)
    # a name that is both a phase and a goal runs the phase
    if inv.goal_name not in PHASES:
        return GOALS[inv.goal_name](project)
    for g in plan(inv.goal_name, project.descriptor):
        code = GOALS[g](project)
        if code:
            return code
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s")
    try:
        inv = parse_invocation(sys.argv[1:] if argv is None else argv)
        return execute(inv)
    except OntomvnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:  # anything unexpected is an internal error
        print(f"internal error: {exc!r}", file=sys.stderr)
        return InternalError.exit_code


if __name__ == "__main__":
    sys.exit(main())
