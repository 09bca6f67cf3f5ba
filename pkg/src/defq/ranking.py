"""Conditional knowledge bases and the rational-closure ranking.

A knowledge base is an ordered sequence of defaults ``A |~ B``.  Repeatedly
keeping the defaults whose antecedent is refuted by the materialization of
the current set yields a shrinking chain of subsets; the chain stabilizes
and assigns every default (and every formula) a rank, with ``INF`` for
antecedents that stay refuted all the way down.  Rational-closure query
answering compares the rank of the antecedent with the rank of the
antecedent conjoined with the negated consequent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

from .logic import (
    DEFAULT_ATOM_CAP,
    Formula,
    ParseError,
    Signature,
    SizeCapExceeded,
    TruthTable,
    Valuation,
    implies,
    land,
    lnot,
    parse_conditional_parts,
    to_text,
)

DEFAULT_KB_CAP = 16

INF = math.inf
Rank = Union[int, float]


@dataclass(frozen=True)
class Conditional:
    """A default ``antecedent |~ consequent`` at a fixed KB position."""

    antecedent: Formula
    consequent: Formula
    index: int

    def materialization(self) -> Formula:
        return implies(self.antecedent, self.consequent)

    def text(self) -> str:
        return f"{to_text(self.antecedent)} |~ {to_text(self.consequent)}"

    def __str__(self) -> str:
        return self.text()


class KnowledgeBase:
    """Immutable ordered sequence of defaults with its derived signature.

    Holds a shared truth-table context and pure memo caches (ranking,
    formula ranks, bases, justifications, models); concurrent readers are
    safe because cache fills are idempotent.
    """

    def __init__(
        self,
        conditionals: Sequence[Conditional],
        signature: Signature,
        max_atoms: int = DEFAULT_ATOM_CAP,
        max_defaults: int = DEFAULT_KB_CAP,
    ):
        if len(conditionals) > max_defaults:
            raise SizeCapExceeded(
                f"{len(conditionals)} defaults exceeds the cap of {max_defaults}"
            )
        for i, c in enumerate(conditionals):
            if c.index != i:
                raise ValueError("conditional indices must be contiguous from 0")
        self.conditionals: tuple[Conditional, ...] = tuple(conditionals)
        self.signature = signature
        self.max_atoms = max_atoms
        self.max_defaults = max_defaults
        self.truth = TruthTable(signature, max_atoms)
        self.cache: dict = {}

    def __len__(self) -> int:
        return len(self.conditionals)

    def __iter__(self) -> Iterator[Conditional]:
        return iter(self.conditionals)

    @property
    def indices(self) -> frozenset[int]:
        return frozenset(range(len(self.conditionals)))

    def materialization(self, members: Iterable[int] | None = None) -> tuple[Formula, ...]:
        if members is None:
            return tuple(c.materialization() for c in self.conditionals)
        return tuple(self.conditionals[i].materialization() for i in sorted(members))

    def parse_query(self, text: str) -> tuple[Conditional, "KnowledgeBase"]:
        """Parse ``A |~ B``, extending the signature with new query atoms.

        Returns the query and the knowledge base to evaluate it against: a
        fresh one when the signature grew (this instance is never mutated),
        otherwise this instance itself.  Default ranks are unaffected by
        fresh atoms, so rankings computed before and after agree.
        """
        sig = self.signature.copy()
        antecedent, consequent = parse_conditional_parts(text, sig)
        query = Conditional(antecedent, consequent, index=-1)
        if len(sig) == len(self.signature):
            return query, self
        extended = KnowledgeBase(
            self.conditionals, sig, max_atoms=self.max_atoms, max_defaults=self.max_defaults
        )
        return query, extended


def parse_kb(
    text: str,
    max_atoms: int = DEFAULT_ATOM_CAP,
    max_defaults: int = DEFAULT_KB_CAP,
) -> KnowledgeBase:
    """Parse knowledge-base text: one ``A |~ B`` per line.

    ``#`` starts a comment; blank lines are ignored; line order defines the
    0-based default indices.  Parse errors carry the 1-based line number.
    """
    sig = Signature()
    conditionals: list[Conditional] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            antecedent, consequent = parse_conditional_parts(line, sig)
        except ParseError as exc:
            raise ParseError(str(exc.args[0]).split(": ", 1)[-1], exc.offset, lineno) from None
        conditionals.append(Conditional(antecedent, consequent, len(conditionals)))
    return KnowledgeBase(conditionals, sig, max_atoms=max_atoms, max_defaults=max_defaults)


# ---------------------------------------------------------------------------
# Ranking construction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RankingTable:
    """The exceptionality chain and the ranks it induces.

    ``chain[i]`` is the i-th subset of default indices; the last entry is the
    stable one (its exceptional part is itself).  ``default_ranks[d]`` is the
    chain position where default d drops out, or ``INF`` when it never does.
    ``order_k`` is the least i whose step ``chain[i] - chain[i+1]`` is empty,
    i.e. one past the highest finite rank in use.
    """

    chain: tuple[frozenset[int], ...]
    default_ranks: tuple[Rank, ...]
    order_k: int

    @property
    def fixpoint(self) -> frozenset[int]:
        return self.chain[-1]

    def rank_of_default(self, index: int) -> Rank:
        return self.default_ranks[index]

    def defaults_with_rank(self, rank: Rank) -> frozenset[int]:
        return frozenset(i for i, r in enumerate(self.default_ranks) if r == rank)


def materialize(members: Iterable[int], kb: KnowledgeBase) -> frozenset[Formula]:
    """Material counterparts ``A -> B`` of the selected defaults."""
    return frozenset(kb.conditionals[i].materialization() for i in members)


def is_exceptional(a: Formula, members: Iterable[int], kb: KnowledgeBase) -> bool:
    """True iff the materialization of the selected defaults refutes ``a``."""
    return kb.truth.entails(kb.materialization(members), lnot(a))


def compute_ranking(kb: KnowledgeBase) -> RankingTable:
    """Iterate the exceptionality step from the full KB to its fixpoint."""
    cached = kb.cache.get("ranking")
    if cached is not None:
        return cached

    chain: list[frozenset[int]] = [kb.indices]
    while True:
        current = chain[-1]
        nxt = frozenset(
            i for i in current if is_exceptional(kb.conditionals[i].antecedent, current, kb)
        )
        if nxt == current:
            break
        chain.append(nxt)

    fixpoint = chain[-1]
    ranks: list[Rank] = [INF] * len(kb)
    for i, members in enumerate(chain[:-1]):
        for d in members - chain[i + 1]:
            ranks[d] = i
    for d in fixpoint:
        ranks[d] = INF

    order_k = 0
    while order_k < len(chain) - 1 and chain[order_k] != chain[order_k + 1]:
        order_k += 1

    table = RankingTable(tuple(chain), tuple(ranks), order_k)
    kb.cache["ranking"] = table
    return table


def rank_of_formula(a: Formula, rt: RankingTable, kb: KnowledgeBase) -> Rank:
    """Least chain position whose materialization does not refute ``a``."""
    memo = kb.cache.setdefault("formula_ranks", {})
    cached = memo.get(a)
    if cached is not None:
        return cached
    result: Rank = INF
    for i, members in enumerate(rt.chain):
        if not is_exceptional(a, members, kb):
            result = i
            break
    memo[a] = result
    return result


def rc_query(kb: KnowledgeBase, rt: RankingTable, query: Conditional) -> bool:
    """Rational-closure membership of ``A |~ B``.

    Accepts iff rank(A) < rank(A & !B), or rank(A) is infinite.  ``INF`` is
    never below itself, so the infinite case is decided by the explicit
    clause alone.
    """
    rank_a = rank_of_formula(query.antecedent, rt, kb)
    if rank_a == INF:
        return True
    rank_conflict = rank_of_formula(land(query.antecedent, lnot(query.consequent)), rt, kb)
    return rank_a < rank_conflict


def kb_satisfiable(kb: KnowledgeBase) -> bool:
    """True iff some valuation satisfies the whole KB's materialization."""
    return kb.truth.is_consistent(kb.materialization())


def violated_defaults(v: Valuation, kb: KnowledgeBase) -> frozenset[int]:
    """Indices of defaults whose antecedent holds and consequent fails at ``v``."""
    if v.atoms != kb.signature.atoms:
        raise ValueError(
            f"valuation atoms {v.atoms!r} do not match KB signature {kb.signature.atoms!r}"
        )
    j = v.bits
    return frozenset(
        c.index for c in kb.conditionals if not kb.truth.satisfies(j, c.materialization())
    )
