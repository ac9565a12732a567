"""EL reasoning by normalization and completion-rule saturation.

Axioms are rewritten into four normal forms over atoms (named classes, Top,
Bottom and fresh auxiliary names)::

    A ⊑ B        A1 ⊓ A2 ⊑ B        A ⊑ ∃r.B        ∃r.A ⊑ B

and then saturated with the usual completion rules, tracking for every atom
``x`` the set S(x) of atoms subsuming it and, per role, the derived edges.
Individuals are represented by one auxiliary class each; that is sound and
complete here because there are no nominals and no inverse roles.
"""

from __future__ import annotations

import enum
import random
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import NamedTuple, Union

from .errors import InternalError
from .model import (
    OWL_NOTHING,
    OWL_THING,
    AnnotationAssertion,
    Axiom,
    Bottom,
    ClassAssertion,
    ClassExpression,
    Conjunction,
    Declaration,
    EquivalentClasses,
    Existential,
    Iri,
    NamedClass,
    Ontology,
    PropertyAssertion,
    SubClassOf,
    Top,
    UnsupportedAxiom,
    UnsupportedExpression,
    signature,
)

AUX_PREFIX = "urn:ontomvn:aux:"
TOP = Iri(OWL_THING)
BOTTOM = Iri(OWL_NOTHING)
DEFAULT_ATOM_LIMIT = 100_000


class ResourceLimit(InternalError):
    pass


def is_auxiliary(iri: Iri) -> bool:
    return iri.value.startswith(AUX_PREFIX)


# -- normal forms -------------------------------------------------------------


@dataclass(frozen=True)
class AtomSub:
    sub: Iri
    sup: Iri


@dataclass(frozen=True)
class ConjSub:
    left: Iri
    right: Iri
    sup: Iri


@dataclass(frozen=True)
class ExistsRhs:
    sub: Iri
    role: Iri
    filler: Iri


@dataclass(frozen=True)
class ExistsLhs:
    role: Iri
    filler: Iri
    sup: Iri


NormalizedAxiom = Union[AtomSub, ConjSub, ExistsRhs, ExistsLhs]


class ProfileViolation(NamedTuple):
    axiom: Axiom
    reason: str


def _unsupported_constructs(node, found: list) -> None:
    if isinstance(node, UnsupportedExpression):
        found.append(node.keyword)
        for a in node.args:
            _unsupported_constructs(a, found)
    elif isinstance(node, Conjunction):
        for op in node.operands:
            _unsupported_constructs(op, found)
    elif isinstance(node, Existential):
        _unsupported_constructs(node.filler, found)


def unsupported_constructs(axiom: Axiom) -> list[str]:
    found: list[str] = []
    if isinstance(axiom, UnsupportedAxiom):
        found.append(axiom.construct)
        for a in axiom.args:
            _unsupported_constructs(a, found)
    elif isinstance(axiom, SubClassOf):
        _unsupported_constructs(axiom.sub, found)
        _unsupported_constructs(axiom.sup, found)
    elif isinstance(axiom, EquivalentClasses):
        for op in axiom.operands:
            _unsupported_constructs(op, found)
    elif isinstance(axiom, ClassAssertion):
        _unsupported_constructs(axiom.class_expression, found)
    return list(dict.fromkeys(found))


def individual_atom(individual: Iri) -> Iri:
    return Iri(f"{AUX_PREFIX}ind:{individual.value}")


def _atom_of(expr) -> Iri | None:
    if isinstance(expr, Iri):
        return expr
    if isinstance(expr, NamedClass):
        return expr.iri
    if isinstance(expr, Top):
        return TOP
    if isinstance(expr, Bottom):
        return BOTTOM
    return None


class Normalizer:
    def __init__(self):
        self.axioms: list[NormalizedAxiom] = []
        self.violations: list[ProfileViolation] = []
        self.individuals: dict[Iri, Iri] = {}
        self.role_assertions: set[tuple] = set()
        self._counter = 0
        self._lhs: dict[str, Iri] = {}
        self._rhs: dict[str, Iri] = {}

    def fresh(self) -> Iri:
        self._counter += 1
        return Iri(f"{AUX_PREFIX}{self._counter}")

    def individual(self, ind: Iri) -> Iri:
        if ind not in self.individuals:
            self.individuals[ind] = individual_atom(ind)
        return self.individuals[ind]

    def name_lhs(self, expr: ClassExpression) -> Iri:
        """Atom X with expr ⊑ X."""
        atom = _atom_of(expr)
        if atom is not None:
            return atom
        if expr.ofn not in self._lhs:
            x = self.fresh()
            self._lhs[expr.ofn] = x
            self.subsume(expr, x)
        return self._lhs[expr.ofn]

    def name_rhs(self, expr: ClassExpression) -> Iri:
        """Atom X with X ⊑ expr."""
        atom = _atom_of(expr)
        if atom is not None:
            return atom
        if expr.ofn not in self._rhs:
            x = self.fresh()
            self._rhs[expr.ofn] = x
            self.subsume(x, expr)
        return self._rhs[expr.ofn]

    def subsume(self, c, d) -> None:
        """Emit normal forms for c ⊑ d (each an atom or a class expression)."""
        if isinstance(d, Conjunction):
            for op in d.operands:
                self.subsume(c, op)
            return
        ca, da = _atom_of(c), _atom_of(d)
        if ca == BOTTOM or da == TOP:
            return
        if ca is None and da is None:
            x = self.fresh()
            self.subsume(c, x)
            self.subsume(x, d)
            return
        if ca is not None:
            if da is not None:
                self.axioms.append(AtomSub(ca, da))
            else:
                self.axioms.append(ExistsRhs(ca, d.role, self.name_rhs(d.filler)))
            return
        if isinstance(c, Conjunction):
            atoms = list(dict.fromkeys(self.name_lhs(op) for op in c.operands))
            if BOTTOM in atoms:
                return
            if len(atoms) > 1 and TOP in atoms:
                atoms.remove(TOP)
            if len(atoms) == 1:
                self.axioms.append(AtomSub(atoms[0], da))
                return
            current = atoms[0]
            for k, nxt in enumerate(atoms[1:], start=2):
                target = da if k == len(atoms) else self.fresh()
                self.axioms.append(ConjSub(current, nxt, target))
                current = target
        else:
            self.axioms.append(ExistsLhs(c.role, self.name_lhs(c.filler), da))

    def add_axiom(self, axiom: Axiom) -> None:
        bad = unsupported_constructs(axiom)
        if bad:
            self.violations.append(ProfileViolation(axiom, ", ".join(bad)))
            return
        if isinstance(axiom, SubClassOf):
            self.subsume(axiom.sub, axiom.sup)
        elif isinstance(axiom, EquivalentClasses):
            first = axiom.operands[0]
            for other in axiom.operands[1:]:
                self.subsume(first, other)
                self.subsume(other, first)
        elif isinstance(axiom, ClassAssertion):
            self.subsume(self.individual(axiom.individual), axiom.class_expression)
        elif isinstance(axiom, PropertyAssertion):
            s, o = self.individual(axiom.subject), self.individual(axiom.object)
            self.axioms.append(ExistsRhs(s, axiom.role, o))
            self.role_assertions.add((axiom.role, axiom.subject, axiom.object))
        elif isinstance(axiom, (Declaration, AnnotationAssertion)):
            pass

    def atoms(self) -> set[Iri]:
        found = {TOP, BOTTOM}
        for ax in self.axioms:
            if isinstance(ax, AtomSub):
                found.update((ax.sub, ax.sup))
            elif isinstance(ax, ConjSub):
                found.update((ax.left, ax.right, ax.sup))
            elif isinstance(ax, ExistsRhs):
                found.update((ax.sub, ax.filler))
            else:
                found.update((ax.filler, ax.sup))
        return found


def normalize(ontology: Ontology):
    """Normal forms plus the list of axioms skipped as out-of-profile."""
    n = Normalizer()
    for ax in ontology.axioms:
        n.add_axiom(ax)
    return list(n.axioms), list(n.violations)


def detect_profile(ontology: Ontology) -> str:
    _, violations = normalize(ontology)
    if not violations:
        return "EL"
    constructs = sorted({c for v in violations for c in v.reason.split(", ")})
    return f"UNSUPPORTED({', '.join(constructs)})"


# -- saturation ---------------------------------------------------------------


class Saturation:
    """Completion-rule closure of a set of normal-form axioms.

    ``rng`` permutes the processing order of the agenda; the fixpoint is the
    same for every order.
    """

    def __init__(self, axioms, atoms, rng: random.Random | None = None):
        self.told = defaultdict(list)        # A -> [B]            for A ⊑ B
        self.conj = defaultdict(list)        # A -> [(other, B)]   for A ⊓ other ⊑ B
        self.exists_rhs = defaultdict(list)  # A -> [(r, B)]       for A ⊑ ∃r.B
        self.exists_lhs = defaultdict(list)  # (r, A) -> [B]       for ∃r.A ⊑ B
        self.lhs_roles = defaultdict(set)    # A -> {r}            with some ∃r.A ⊑ _
        for ax in axioms:
            if isinstance(ax, AtomSub):
                self.told[ax.sub].append(ax.sup)
            elif isinstance(ax, ConjSub):
                if ax.left == ax.right:
                    self.told[ax.left].append(ax.sup)
                else:
                    self.conj[ax.left].append((ax.right, ax.sup))
                    self.conj[ax.right].append((ax.left, ax.sup))
            elif isinstance(ax, ExistsRhs):
                self.exists_rhs[ax.sub].append((ax.role, ax.filler))
            else:
                self.exists_lhs[(ax.role, ax.filler)].append(ax.sup)
                self.lhs_roles[ax.filler].add(ax.role)
        self.subsumers: dict[Iri, set] = {}
        self.successors = defaultdict(lambda: defaultdict(set))    # r -> x -> {y}
        self.predecessors = defaultdict(lambda: defaultdict(set))  # r -> y -> {x}
        self.rng = rng
        self.agenda: deque = deque()
        for a in sorted(set(atoms) | {TOP, BOTTOM}):
            self._init(a)
        self._run()

    def _init(self, a: Iri) -> None:
        if a not in self.subsumers:
            self.subsumers[a] = set()
            self.agenda.append(("add", a, a))
            self.agenda.append(("add", a, TOP))

    def _pop(self):
        if self.rng is None:
            return self.agenda.popleft()
        i = self.rng.randrange(len(self.agenda))
        self.agenda[i], self.agenda[-1] = self.agenda[-1], self.agenda[i]
        return self.agenda.pop()

    def _run(self) -> None:
        push = self.agenda.append
        while self.agenda:
            task = self._pop()
            if task[0] == "add":
                _, x, c = task
                s = self.subsumers[x]
                if c in s:
                    continue
                s.add(c)
                for b in self.told.get(c, ()):
                    push(("add", x, b))
                for other, b in self.conj.get(c, ()):
                    if other in s:
                        push(("add", x, b))
                for r, y in self.exists_rhs.get(c, ()):
                    push(("link", r, x, y))
                for r in self.lhs_roles.get(c, ()):
                    for z in list(self.predecessors[r][x]):
                        for b in self.exists_lhs[(r, c)]:
                            push(("add", z, b))
                if c == BOTTOM:
                    for r in list(self.predecessors):
                        for z in list(self.predecessors[r][x]):
                            push(("add", z, BOTTOM))
            else:
                _, r, x, y = task
                if y in self.successors[r][x]:
                    continue
                self.successors[r][x].add(y)
                self.predecessors[r][y].add(x)
                self._init(y)
                for c in list(self.subsumers[y]):
                    for b in self.exists_lhs.get((r, c), ()):
                        push(("add", x, b))
                    if c == BOTTOM:
                        push(("add", x, BOTTOM))

    def subsumed(self, sub: Iri, sup: Iri) -> bool:
        s = self.subsumers.get(sub)
        if s is None:
            return sub == sup or sup == TOP
        return sup in s or BOTTOM in s

    def unsatisfiable(self, atom: Iri) -> bool:
        return BOTTOM in self.subsumers.get(atom, ())


# -- public operations --------------------------------------------------------


@dataclass(frozen=True)
class ClassificationResult:
    subsumptions: frozenset
    classes: frozenset
    profile_violations: tuple = ()

    def subsumes(self, sub: Iri, sup: Iri) -> bool:
        return (sub, sup) in self.subsumptions

    def superclasses(self, cls: Iri) -> set:
        return {b for a, b in self.subsumptions if a == cls}

    def named_pairs(self) -> frozenset:
        """Non-reflexive subsumptions between named classes."""
        special = (TOP, BOTTOM)
        return frozenset((a, b) for a, b in self.subsumptions
                         if a != b and a not in special and b not in special)

    @property
    def unsatisfiable(self) -> frozenset:
        return frozenset(a for a in self.classes if (a, BOTTOM) in self.subsumptions)


def _saturate(normalizer: Normalizer, atom_limit: int, rng, extra_atoms=()) -> Saturation:
    atoms = normalizer.atoms() | set(extra_atoms)
    if len(atoms) > atom_limit:
        raise ResourceLimit(f"{len(atoms)} atoms exceed the reasoner limit of {atom_limit}")
    return Saturation(normalizer.axioms, atoms, rng)


def classify(ontology: Ontology, atom_limit: int = DEFAULT_ATOM_LIMIT,
             rng: random.Random | None = None) -> ClassificationResult:
    n = Normalizer()
    for ax in ontology.axioms:
        n.add_axiom(ax)
    classes = set(signature(ontology).classes)
    sat = _saturate(n, atom_limit, rng, classes)
    domain = classes | {TOP, BOTTOM}
    pairs = set()
    for a in domain:
        s = sat.subsumers[a]
        if BOTTOM in s:
            pairs.update((a, b) for b in domain)
        else:
            pairs.update((a, b) for b in s if b in domain)
    return ClassificationResult(frozenset(pairs), frozenset(domain), tuple(n.violations))


class Consistency(enum.Enum):
    CONSISTENT = "consistent"
    INCONSISTENT = "inconsistent"
    UNKNOWN = "unknown"

    def __str__(self):
        return self.value


class EntailmentResult(enum.Enum):
    ENTAILMENT = "Entailment"
    NO_ENTAILMENT = "NoEntailment"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


def _inconsistent(sat: Saturation, individuals) -> bool:
    return sat.unsatisfiable(TOP) or any(sat.unsatisfiable(x) for x in individuals)


def is_consistent(ontology: Ontology, atom_limit: int = DEFAULT_ATOM_LIMIT) -> Consistency:
    n = Normalizer()
    for ax in ontology.axioms:
        n.add_axiom(ax)
    sat = _saturate(n, atom_limit, None)
    if _inconsistent(sat, n.individuals.values()):
        return Consistency.INCONSISTENT
    return Consistency.UNKNOWN if n.violations else Consistency.CONSISTENT


def entails(premise: Ontology, conclusion: Ontology,
            atom_limit: int = DEFAULT_ATOM_LIMIT) -> EntailmentResult:
    """Whether every axiom of ``conclusion`` follows from ``premise``.

    Out-of-profile axioms on either side make the answer Unknown, since the
    skipped axioms could change it.
    """
    if any(unsupported_constructs(ax) for ax in conclusion.axioms):
        return EntailmentResult.UNKNOWN
    n = Normalizer()
    for ax in premise.axioms:
        n.add_axiom(ax)
    premise_individuals = list(n.individuals.values())
    told_roles = set(n.role_assertions)

    checks: list[tuple[Iri, Iri]] = []
    role_checks_ok = True

    def check_sub(c, d):
        p, q = n.fresh(), n.fresh()
        n.subsume(p, c)
        n.subsume(d, q)
        checks.append((p, q))

    for ax in conclusion.axioms:
        if isinstance(ax, SubClassOf):
            check_sub(ax.sub, ax.sup)
        elif isinstance(ax, EquivalentClasses):
            first = ax.operands[0]
            for other in ax.operands[1:]:
                check_sub(first, other)
                check_sub(other, first)
        elif isinstance(ax, ClassAssertion):
            q = n.fresh()
            n.subsume(ax.class_expression, q)
            checks.append((n.individual(ax.individual), q))
        elif isinstance(ax, PropertyAssertion):
            # without role inclusions a role assertion follows only if told
            if (ax.role, ax.subject, ax.object) not in told_roles:
                role_checks_ok = False

    extra = {x for pair in checks for x in pair}
    sat = _saturate(n, atom_limit, None, extra)
    if n.violations:
        return EntailmentResult.UNKNOWN
    if _inconsistent(sat, premise_individuals):
        return EntailmentResult.ENTAILMENT
    if role_checks_ok and all(sat.subsumed(p, q) for p, q in checks):
        return EntailmentResult.ENTAILMENT
    return EntailmentResult.NO_ENTAILMENT
