"""Table entries, subgoal frames and answer tries for three table designs.

``original``
    subgoal and answer tries hold the full token sequence of each term.
``gt-t`` / ``gt-st``
    every argument or substitution term takes exactly one local node: the
    term's own token when it is simple, otherwise a reference to the term's
    leaf in the shared global trie.
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .global_trie import GT_ST, GT_T, GlobalTrie
from .terms import (
    CONS,
    FUNCTOR,
    REF,
    CallSignature,
    Term,
    detokenize,
    is_simple,
    ref_token,
    simple_token,
    standardize,
    tokenize,
)
from .trie import (
    ANSWER,
    HASH_THRESHOLD,
    SUBGOAL,
    Trie,
    TrieNode,
    children,
    has_children,
)

ORIGINAL = "original"
DESIGNS = (ORIGINAL, GT_T, GT_ST)


class Instr(str, enum.Enum):
    DO_SUBS_SIMPLE = "do_subs_simple"
    TRY_SUBS_SIMPLE = "try_subs_simple"
    RETRY_SUBS_SIMPLE = "retry_subs_simple"
    TRUST_SUBS_SIMPLE = "trust_subs_simple"
    DO_SUBS_COMPOUND = "do_subs_compound"
    TRY_SUBS_COMPOUND = "try_subs_compound"
    RETRY_SUBS_COMPOUND = "retry_subs_compound"
    TRUST_SUBS_COMPOUND = "trust_subs_compound"

    @property
    def op(self) -> str:
        return self.value.split("_", 1)[0]

    @property
    def compound(self) -> bool:
        return self.value.endswith("compound")

    @classmethod
    def select(cls, op: str, compound: bool) -> Instr:
        return cls(f"{op}_subs_{'compound' if compound else 'simple'}")


class TableError(RuntimeError):
    pass


@dataclass(eq=False)
class SubgoalFrame:
    call: CallSignature
    free_var_count: int
    answer_trie: Trie
    answer_order: list = field(default_factory=list)
    compiled: bool = False
    _answer_leaves: set = field(default_factory=set, repr=False)

    def __len__(self):
        return len(self.answer_order)


@dataclass(eq=False)
class TableEntry:
    name: str
    arity: int
    design: str
    subgoal_trie: Trie
    frames: list = field(default_factory=list)


class TableSpace:
    """All tables of one program, sharing one global trie in the GT designs."""

    def __init__(self, design: str = ORIGINAL, hash_threshold: float = HASH_THRESHOLD):
        if design not in DESIGNS:
            raise ValueError(f"unknown table design {design!r}")
        self.design = design
        self.hash_threshold = hash_threshold
        self.gt = None if design == ORIGINAL else GlobalTrie(design, hash_threshold)
        self.entries: dict[tuple[str, int], TableEntry] = {}

    def table_entry(self, name: str, arity: int, design: str | None = None) -> TableEntry:
        design = design or self.design
        if design != self.design:
            raise TableError(f"{name}/{arity}: design {design} in a {self.design} table space")
        te = self.entries.get((name, arity))
        if te is None:
            te = TableEntry(name, arity, design, Trie(SUBGOAL, self.hash_threshold))
            self.entries[name, arity] = te
        return te

    def frames(self) -> Iterator[SubgoalFrame]:
        for te in self.entries.values():
            yield from te.frames

    # -- insertion ----------------------------------------------------------

    def _insert_terms(self, trie: Trie, node: TrieNode, terms: Sequence[Term]) -> TrieNode:
        gt = self.gt
        if gt is None:
            for t in terms:
                for tok in tokenize(t):
                    node = trie.check_insert(node, tok)
            return node
        for t in terms:
            if is_simple(t):
                node = trie.check_insert(node, simple_token(t))
            else:
                leaf = gt.intern(t)
                node, created = trie.check_insert_new(node, ref_token(leaf))
                if created:
                    leaf.child += 1
        return node

    def subgoal_check_insert(self, te: TableEntry, call: CallSignature) -> tuple[SubgoalFrame, bool]:
        if call.arity != te.arity:
            raise TableError(f"call {call} does not match table {te.name}/{te.arity}")
        leaf = self._insert_terms(te.subgoal_trie, te.subgoal_trie.root, call.args)
        if isinstance(leaf.child, SubgoalFrame):
            return leaf.child, False
        _, nvars = standardize(call.args)
        sf = SubgoalFrame(call, nvars, Trie(ANSWER, self.hash_threshold))
        leaf.child = sf
        te.frames.append(sf)
        return sf, True

    def call(self, name: str, *args: Term) -> tuple[SubgoalFrame, bool]:
        """Standardize ``name(args...)`` and check/insert it as a subgoal."""
        sig, _ = CallSignature.of(name, args)
        return self.subgoal_check_insert(self.table_entry(name, len(args)), sig)

    def answer_check_insert(self, sf: SubgoalFrame, subs: Sequence[Term]) -> tuple[TrieNode, bool]:
        if len(subs) != sf.free_var_count:
            raise TableError(
                f"{len(subs)} substitution terms for a call with {sf.free_var_count} free variables"
            )
        if sf.compiled:
            raise TableError(f"answer trie of {sf.call} is already compiled")
        subs, _ = standardize(tuple(subs))
        trie = sf.answer_trie
        leaf = self._insert_terms(trie, trie.root, subs)
        if leaf in sf._answer_leaves:
            return leaf, False
        sf._answer_leaves.add(leaf)
        sf.answer_order.append(leaf)
        return leaf, True

    # -- loading ------------------------------------------------------------

    def _decode(self, tokens, count: int) -> tuple:
        resolve = None if self.gt is None else self.gt.term_load
        return tuple(detokenize(tokens, count, resolve))

    def load_answers_bottom_up(self, sf: SubgoalFrame) -> Iterator[tuple]:
        """Answers in insertion order, each read by walking leaf-to-root."""
        path_tokens = sf.answer_trie.path_tokens
        n = sf.free_var_count
        for leaf in sf.answer_order:
            yield self._decode(path_tokens(leaf), n)

    def compile_answer_trie(self, sf: SubgoalFrame) -> None:
        if sf.compiled:
            return
        original = self.gt is None
        trie = sf.answer_trie
        for parent in [trie.root, *trie.walk()]:
            group = list(children(parent))
            last = len(group) - 1
            for i, node in enumerate(group):
                if last == 0:
                    op = "do"
                elif i == 0:
                    op = "try"
                elif i == last:
                    op = "trust"
                else:
                    op = "retry"
                kind = node.token.kind
                compound = kind in (FUNCTOR, CONS) if original else kind == REF
                node.code = Instr.select(op, compound)
        sf.compiled = True

    def load_answers_compiled(self, sf: SubgoalFrame) -> Iterator[tuple]:
        """Top-down enumeration driven by the compiled instructions.

        ``try`` pushes a choice point over the node's sibling group,
        ``retry`` advances it and ``trust`` pops it.
        """
        if not sf.compiled:
            raise TableError(f"answer trie of {sf.call} is not compiled")
        if not sf.answer_order:
            return
        n = sf.free_var_count
        if n == 0:
            yield ()
            return
        root = sf.answer_trie.root
        node = next(children(root))
        tokens: list = []
        stack: list = []
        while True:
            op = node.code.op
            if op == "try":
                stack.append([list(children(node.parent)), 1, len(tokens)])
            elif op == "retry":
                stack[-1][1] += 1
            elif op == "trust":
                stack.pop()
            tokens.append(node.token)
            if has_children(node):
                node = next(children(node))
                continue
            yield self._decode(tokens, n)
            if not stack:
                return
            group, i, depth = stack[-1]
            del tokens[depth:]
            node = group[i]

    # -- reclamation --------------------------------------------------------

    def _release_refs(self, trie: Trie) -> None:
        if self.gt is None:
            return
        for node in trie.walk():
            if node.token.kind == REF:
                self.gt.release(node.token.value)

    def abolish_table(self, te: TableEntry) -> None:
        for sf in te.frames:
            self._release_refs(sf.answer_trie)
            sf.answer_trie = Trie(ANSWER, self.hash_threshold)
            sf.answer_order.clear()
            sf._answer_leaves.clear()
        self._release_refs(te.subgoal_trie)
        te.subgoal_trie = Trie(SUBGOAL, self.hash_threshold)
        te.frames.clear()

    def abolish_all(self) -> None:
        for te in self.entries.values():
            self.abolish_table(te)

    def refcount_discrepancies(self) -> dict:
        """GT leaves whose stored count differs from the reference tokens naming them.

        Maps leaf to ``(stored, counted)``; empty when the counts are conserved.
        """
        if self.gt is None:
            return {}
        counted = Counter(self.gt.internal_refs())
        tries = [te.subgoal_trie for te in self.entries.values()]
        tries += [sf.answer_trie for sf in self.frames()]
        for trie in tries:
            for node in trie.walk():
                if node.token.kind == REF:
                    counted[node.token.value] += 1
        bad = {}
        leaves = set(self.gt.leaves())
        for leaf in leaves | set(counted):
            stored = leaf.child if leaf in leaves else None
            if stored != counted.get(leaf, 0):
                bad[leaf] = (stored, counted.get(leaf, 0))
        return bad
