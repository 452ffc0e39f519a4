"""Small propositional language plus the graded common-ground context store.

The language is deliberately tiny: literals, conjunctive-antecedent rules,
and biconditionals between literals.  It is just enough to detect when an
utterance is informationally redundant and to chain the inferences that
dialogue annotations rely on.

Surface syntax (whitespace-insensitive)::

    atom            positive literal
    !atom           negated literal
    a & b -> c      rule with conjunctive antecedents
    a <-> !b        biconditional between two literals

Identifiers match ``[A-Za-z][A-Za-z0-9_]*`` and are case-sensitive.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .errors import BadPropositionSyntax, ConflictDetected
from .evidence import DERIVED_CAP, Strength

ATOM_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*$")

LIVE = "live"
DEFEATED = "defeated"


@dataclass(frozen=True)
class Literal:
    atom: str
    positive: bool = True

    def __post_init__(self):
        if not ATOM_RE.match(self.atom):
            raise BadPropositionSyntax(f"bad atom name {self.atom!r}")

    def negated(self) -> "Literal":
        return Literal(self.atom, not self.positive)

    def __str__(self) -> str:
        return self.atom if self.positive else "!" + self.atom


@dataclass(frozen=True)
class Rule:
    antecedents: tuple[Literal, ...]
    consequent: Literal

    def __post_init__(self):
        if not self.antecedents:
            raise BadPropositionSyntax("rule with no antecedents")
        if len(set(self.antecedents)) != len(self.antecedents):
            raise BadPropositionSyntax("duplicate rule antecedents")

    def __str__(self) -> str:
        return " & ".join(str(a) for a in self.antecedents) + " -> " + str(self.consequent)


@dataclass(frozen=True)
class Biconditional:
    left: Literal
    right: Literal

    def __str__(self) -> str:
        return f"{self.left} <-> {self.right}"


Proposition = Union[Literal, Rule, Biconditional]


def parse_proposition(text: str) -> Proposition:
    """Parse one proposition in the surface syntax.  Raises BadPropositionSyntax."""

    def lit(chunk: str) -> Literal:
        chunk = chunk.strip()
        neg = False
        while chunk.startswith("!"):
            neg = not neg
            chunk = chunk[1:].strip()
        if not ATOM_RE.match(chunk):
            raise BadPropositionSyntax(f"bad literal {chunk!r} in {text!r}")
        return Literal(chunk, not neg)

    s = text.strip()
    if not s:
        raise BadPropositionSyntax("empty proposition")
    if "<->" in s:
        left, _, right = s.partition("<->")
        if "->" in left or "->" in right or "<->" in right:
            raise BadPropositionSyntax(f"malformed biconditional {text!r}")
        return Biconditional(lit(left), lit(right))
    if "->" in s:
        head, _, tail = s.partition("->")
        if "->" in tail:
            raise BadPropositionSyntax(f"malformed rule {text!r}")
        ants = tuple(lit(a) for a in head.split("&"))
        return Rule(ants, lit(tail))
    if "&" in s:
        raise BadPropositionSyntax(f"conjunction outside a rule body: {text!r}")
    return lit(s)


def format_proposition(p: Proposition) -> str:
    return str(p)


def prop_key(p: Proposition) -> str:
    """Canonical index key.  Rule antecedents and biconditional sides are
    order-insensitive so that notational variants collapse to one entry."""
    if isinstance(p, Literal):
        return str(p)
    if isinstance(p, Rule):
        return " & ".join(sorted(str(a) for a in p.antecedents)) + " -> " + str(p.consequent)
    return " <-> ".join(sorted((str(p.left), str(p.right))))


@dataclass(frozen=True)
class RedundancyVerdict:
    """Outcome of a redundancy check.

    ``antecedents`` carries the ids of the utterances that already put the
    proposition (or its premises) into the context; stats over multiple and
    remote antecedents are folded from these sets.
    """

    kind: str  # "not_redundant" | "said" | "entailed"
    antecedents: frozenset[str] = frozenset()

    NOT_REDUNDANT = "not_redundant"
    SAID = "said"
    ENTAILED = "entailed"

    @property
    def redundant(self) -> bool:
        return self.kind != self.NOT_REDUNDANT


@dataclass
class ContextEntry:
    """One proposition in the common ground with its evidential bookkeeping.

    ``sources`` lists the utterances that explicitly asserted the
    proposition, in order; it is empty for purely derived entries.
    ``dependencies`` holds the entry ids a derivation rests on; a derived
    entry's strength is the MIN over those premises, capped at inference.
    """

    entry_id: str
    proposition: Proposition
    strength: Strength
    sources: tuple[str, ...] = ()
    dependencies: set[str] = field(default_factory=set)
    status: str = LIVE
    order: int = 0

    @property
    def source(self) -> str:
        return self.sources[0] if self.sources else "derived"

    @property
    def derived(self) -> bool:
        return not self.sources


@dataclass(frozen=True)
class _Deriv:
    """Best-known derivation label for a literal during saturation."""

    strength: Strength
    deps: frozenset[str]
    rank: tuple[int, ...]  # sorted insertion orders of deps; earlier premises win ties

    def beats(self, other: Optional["_Deriv"]) -> bool:
        if other is None:
            return True
        if self.strength != other.strength:
            return self.strength > other.strength
        return self.rank < other.rank


class Context:
    """Mutable common-ground store for one dialogue.

    Single-threaded per dialogue by contract; distinct dialogues never share
    a context.  ``clone()`` gives an independent copy for what-if checks.
    """

    def __init__(self):
        self.entries: dict[str, ContextEntry] = {}
        self._by_key: dict[str, str] = {}  # live proposition key -> entry id
        self._counter = 0

    # -- plumbing ---------------------------------------------------------

    def clone(self) -> "Context":
        other = Context()
        other._counter = self._counter
        other._by_key = dict(self._by_key)
        for eid, e in self.entries.items():
            other.entries[eid] = ContextEntry(
                entry_id=e.entry_id,
                proposition=e.proposition,
                strength=e.strength,
                sources=e.sources,
                dependencies=set(e.dependencies),
                status=e.status,
                order=e.order,
            )
        return other

    def live_entries(self) -> list[ContextEntry]:
        return [e for e in self.entries.values() if e.status == LIVE]

    def lookup(self, p: Proposition) -> Optional[ContextEntry]:
        return self.lookup_key(prop_key(p))

    def lookup_key(self, key: str) -> Optional[ContextEntry]:
        eid = self._by_key.get(key)
        if eid is None:
            return None
        entry = self.entries[eid]
        return entry if entry.status == LIVE else None

    def _fresh_id(self, source: Optional[str]) -> str:
        if source is None:
            self._counter += 1
            return f"d{self._counter}"
        if source not in self.entries:
            return source
        n = 2
        while f"{source}#{n}" in self.entries:
            n += 1
        return f"{source}#{n}"

    def _insert(self, p: Proposition, strength: Strength, sources: tuple[str, ...],
                dependencies: set[str]) -> ContextEntry:
        eid = self._fresh_id(sources[0] if sources else None)
        self._counter += 1
        entry = ContextEntry(
            entry_id=eid,
            proposition=p,
            strength=strength,
            sources=sources,
            dependencies=dependencies,
            order=self._counter,
        )
        self.entries[eid] = entry
        self._by_key[prop_key(p)] = eid
        return entry

    # -- assertion --------------------------------------------------------

    def assert_prop(self, p: Proposition, strength: Strength, source: str) -> ContextEntry:
        """Add ``p`` at ``strength`` on behalf of utterance ``source``.

        Re-asserting an existing proposition raises its strength to the new
        value (never lowers it).  A direct contradiction with a live literal
        of equal or greater strength raises ConflictDetected; a strictly
        weaker contrary literal is defeated in place and cascaded.
        """
        existing = self.lookup(p)
        if existing is not None:
            if source not in existing.sources:
                existing.sources = existing.sources + (source,)
            if strength >= existing.strength:
                existing.strength = strength
                # direct assertion supersedes any derivation as support
                existing.dependencies = set()
            return existing
        if isinstance(p, Literal):
            contrary = self.lookup(p.negated())
            if contrary is not None:
                if contrary.strength >= strength:
                    raise ConflictDetected([(p, contrary.proposition)])
                self.defeat_entry(contrary.entry_id)
        return self._insert(p, strength, (source,), set())

    def defeat_entry(self, entry_id: str) -> list[str]:
        """Mark an entry defeated and cascade through dependent entries."""
        defeated = retract(self.entries, entry_id)
        for eid in defeated:
            self.unindex(eid)
        return defeated

    def unindex(self, entry_id: str) -> None:
        """Drop a (defeated) entry from the live-proposition index."""
        entry = self.entries.get(entry_id)
        if entry is None:
            return
        key = prop_key(entry.proposition)
        if self._by_key.get(key) == entry_id:
            del self._by_key[key]

    # -- inference --------------------------------------------------------

    def closure(self) -> set[Literal]:
        """Forward-chain to fixpoint and return all live literals.

        Mechanisms: modus ponens on rules, biconditionals expanded to both
        directional rules, contrapositives of single-antecedent rules, and
        self-refutation (a literal whose own negation implies it is forced).
        Each newly derived literal is stored as an entry depending on its
        premises, with strength MIN over premises capped at inference.
        When several derivations reach the same literal, the strongest wins
        and remaining ties go to the derivation with earliest premises.

        Raises ConflictDetected if the fixpoint contains both polarities of
        an atom, listing the clashing literals; the context is unchanged.
        """
        live = self.live_entries()
        lit_entries = {prop_key(e.proposition): e for e in live
                       if isinstance(e.proposition, Literal)}
        edges: dict[str, list[tuple[Literal, ContextEntry]]] = {}
        multis: list[tuple[tuple[Literal, ...], Literal, ContextEntry]] = []

        def add_edge(src: Literal, dst: Literal, entry: ContextEntry) -> None:
            edges.setdefault(str(src), []).append((dst, entry))

        for e in sorted(live, key=lambda x: x.order):
            p = e.proposition
            if isinstance(p, Rule):
                if len(p.antecedents) == 1:
                    a = p.antecedents[0]
                    add_edge(a, p.consequent, e)
                    add_edge(p.consequent.negated(), a.negated(), e)
                else:
                    multis.append((p.antecedents, p.consequent, e))
            elif isinstance(p, Biconditional):
                l, r = p.left, p.right
                for src, dst in ((l, r), (r, l), (r.negated(), l.negated()),
                                 (l.negated(), r.negated())):
                    add_edge(src, dst, e)

        settled: dict[str, tuple[Literal, _Deriv]] = {}
        agenda: list[tuple[tuple[int, tuple[int, ...], str], Literal, _Deriv]] = []

        def push(lit: Literal, deriv: _Deriv) -> None:
            heapq.heappush(agenda, ((-deriv.strength, deriv.rank, str(lit)), lit, deriv))

        for e in sorted(lit_entries.values(), key=lambda x: x.order):
            push(e.proposition, _Deriv(e.strength, frozenset([e.entry_id]), (e.order,)))
        for lit, deriv in self._forced_literals(edges):
            push(lit, deriv)

        def capped(s: Strength) -> Strength:
            return min(s, DERIVED_CAP)

        while agenda:
            _, lit, deriv = heapq.heappop(agenda)
            key = str(lit)
            if key in settled:
                continue
            settled[key] = (lit, deriv)
            for dst, rule_entry in edges.get(key, ()):
                if str(dst) in settled:
                    continue
                deps = deriv.deps | {rule_entry.entry_id}
                push(dst, _Deriv(capped(min(deriv.strength, rule_entry.strength)),
                                 deps, self._rank(deps)))
            for ants, consequent, rule_entry in multis:
                if str(consequent) in settled:
                    continue
                if all(str(a) in settled for a in ants):
                    strengths = [settled[str(a)][1].strength for a in ants]
                    deps = {rule_entry.entry_id}
                    for a in ants:
                        deps |= settled[str(a)][1].deps
                    push(consequent, _Deriv(capped(min(min(strengths), rule_entry.strength)),
                                            frozenset(deps), self._rank(deps)))

        clashes = []
        for key, (lit, _) in sorted(settled.items()):
            neg = str(lit.negated())
            if lit.positive and neg in settled:
                clashes.append((lit, settled[neg][0]))
        if clashes:
            raise ConflictDetected(clashes)

        for key, (lit, deriv) in sorted(settled.items(), key=lambda kv: kv[1][1].rank):
            if key in lit_entries:
                entry = lit_entries[key]
                derived_strength = capped(deriv.strength)
                if derived_strength > entry.strength:
                    entry.strength = derived_strength
                    entry.dependencies = set(deriv.deps - {entry.entry_id})
                continue
            existing = self.lookup(lit)
            if existing is not None:
                if deriv.strength > existing.strength:
                    existing.strength = deriv.strength
                    existing.dependencies = set(deriv.deps)
                continue
            self._insert(lit, deriv.strength, (), set(deriv.deps))

        return {e.proposition for e in self.live_entries()
                if isinstance(e.proposition, Literal)}

    def _rank(self, deps: Iterable[str]) -> tuple[int, ...]:
        return tuple(sorted(self.entries[d].order for d in deps))

    def _forced_literals(self, edges) -> list[tuple[Literal, _Deriv]]:
        """Literals L whose negation implies L through the rule graph.

        A chain !L -> ... -> L forces L regardless of any asserted facts;
        this closes the gap left by pure unit propagation (e.g. a -> b plus
        !a -> b forces b).  The widest (strongest-weakest-rule) chain wins.
        """
        forced = []
        nodes = set(edges)
        for dsts in edges.values():
            nodes.update(str(d) for d, _ in dsts)
        lits = {}
        for key in nodes:
            neg = key.startswith("!")
            lits[key] = Literal(key.lstrip("!"), not neg)
        for key in sorted(nodes):
            target = lits[key]
            start = str(target.negated())
            best: dict[str, _Deriv] = {}
            heap: list[tuple[tuple[int, tuple[int, ...], str], str, _Deriv]] = []
            seed = _Deriv(Strength.PHYSICAL, frozenset(), ())
            heapq.heappush(heap, ((-seed.strength, (), start), start, seed))
            while heap:
                _, node, deriv = heapq.heappop(heap)
                if node in best:
                    continue
                best[node] = deriv
                if node == key:
                    break
                for dst, rule_entry in edges.get(node, ()):
                    dk = str(dst)
                    if dk in best:
                        continue
                    deps = deriv.deps | {rule_entry.entry_id}
                    cand = _Deriv(min(deriv.strength, rule_entry.strength),
                                  deps, self._rank(deps))
                    heapq.heappush(heap, ((-cand.strength, cand.rank, dk), dk, cand))
            if key in best and best[key].deps:
                d = best[key]
                forced.append((target, _Deriv(min(d.strength, DERIVED_CAP), d.deps, d.rank)))
        return forced

    # -- redundancy -------------------------------------------------------

    def is_redundant(self, p: Proposition) -> RedundancyVerdict:
        """Classify ``p`` against the current context.

        ``said`` if an identical proposition was explicitly asserted (the
        verdict lists every asserting utterance); ``entailed`` if it is a
        live derived entry that was never asserted (the verdict lists the
        asserted roots of its derivation); ``not_redundant`` otherwise.
        Call closure() first so derived entries are current.
        """
        entry = self.lookup(p)
        if entry is None:
            return RedundancyVerdict(RedundancyVerdict.NOT_REDUNDANT)
        if entry.sources:
            return RedundancyVerdict(RedundancyVerdict.SAID, frozenset(entry.sources))
        return RedundancyVerdict(RedundancyVerdict.ENTAILED,
                                 frozenset(self.asserted_roots(entry)))

    def asserted_roots(self, entry: ContextEntry) -> set[str]:
        """Utterances at the bottom of an entry's derivation chain."""
        roots: set[str] = set()
        seen: set[str] = set()
        stack = list(entry.dependencies)
        while stack:
            eid = stack.pop()
            if eid in seen:
                continue
            seen.add(eid)
            e = self.entries[eid]
            if e.sources:
                roots.update(e.sources)
            else:
                stack.extend(e.dependencies)
        return roots


def retract(nodes: dict, target_id: str) -> list[str]:
    """Mark ``target_id`` defeated plus everything whose dependency closure
    reaches it.  Returns the defeated ids, sorted.  ``nodes`` maps ids to
    objects with ``status`` and ``dependencies`` attributes; dependency ids
    with no node (e.g. raw event ids kept for provenance) are ignored."""
    if target_id not in nodes:
        raise KeyError(target_id)
    defeated = {target_id}
    changed = True
    while changed:
        changed = False
        for nid, node in nodes.items():
            if nid in defeated or getattr(node, "status", LIVE) != LIVE:
                continue
            if node.dependencies & defeated:
                defeated.add(nid)
                changed = True
    result = sorted(defeated)
    for nid in result:
        nodes[nid].status = DEFEATED
    return result
