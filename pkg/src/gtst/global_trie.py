"""The global trie: compound terms interned once and referenced by leaf.

Two interning modes share one trie layout.  ``gt-t`` stores every
compound term as its flat token path.  ``gt-st`` additionally stores each
compound subterm as a path of its own and spells the enclosing term with a
reference token to that path's leaf.  Lists are spelled inline in both
modes; only compound subterms become separate paths.

A leaf's ``child`` field is its reference count: the number of reference
tokens, anywhere in the table space, naming that leaf.
"""
from __future__ import annotations

from collections import Counter
from typing import Iterator

from .terms import (
    CONS_TOKEN,
    FUNCTOR,
    NIL_TOKEN,
    REF,
    Compound,
    List,
    Term,
    Token,
    detokenize,
    is_simple,
    simple_token,
    tokenize,
)
from .trie import GLOBAL, HASH_THRESHOLD, Trie, TrieNode, has_children

GT_T = "gt-t"
GT_ST = "gt-st"
MODES = (GT_T, GT_ST)


class DanglingReferenceError(RuntimeError):
    """A global-trie leaf was loaded or released with no live references."""


class GlobalTrie:
    def __init__(self, mode: str = GT_T, hash_threshold: float = HASH_THRESHOLD):
        if mode not in MODES:
            raise ValueError(f"unknown global trie mode {mode!r}")
        self.mode = mode
        self.trie = Trie(GLOBAL, hash_threshold)
        self.root = self.trie.root

    # -- insertion ----------------------------------------------------------

    def intern(self, t: Term) -> TrieNode:
        """Leaf of the path for compound ``t``, created if missing.

        The leaf's own count is left alone; whoever stores a reference to it
        must call :meth:`incref`.
        """
        if is_simple(t):
            raise ValueError(f"only compound terms enter the global trie, got {t!r}")
        if self.mode == GT_T:
            leaf = self.trie.insert_path(tokenize(t))
        else:
            leaf = self.term_check_insert(self.root, t)
        if leaf.child is None:
            leaf.child = 0
        return leaf

    def check_insert(self, t: Term) -> TrieNode:
        leaf = self.intern(t)
        leaf.child += 1
        return leaf

    def check_insert_flat(self, t: Term) -> TrieNode:
        if self.mode != GT_T:
            raise ValueError("flat interning needs a gt-t trie")
        return self.check_insert(t)

    def check_insert_subterm(self, t: Term) -> TrieNode:
        if self.mode != GT_ST:
            raise ValueError("subterm interning needs a gt-st trie")
        return self.check_insert(t)

    def term_check_insert(self, gt_node: TrieNode, t: Term) -> TrieNode:
        """Insert ``t`` below ``gt_node``, interning compound subterms separately.

        Called from outside with the root and a compound term.  Below the
        root a compound is first interned from the root and only a
        reference to its leaf is stored under ``gt_node``.
        """
        check_insert = self.trie.check_insert_new
        if is_simple(t):
            return check_insert(gt_node, simple_token(t))[0]
        if gt_node is self.root or isinstance(t, List):
            if isinstance(t, Compound):
                gt_node = check_insert(gt_node, Token(FUNCTOR, t.name, len(t.args)))[0]
                for sub_t in t.args:
                    gt_node = self.term_check_insert(gt_node, sub_t)
            else:
                for e in t.elements:
                    gt_node = check_insert(gt_node, CONS_TOKEN)[0]
                    gt_node = self.term_check_insert(gt_node, e)
                gt_node = check_insert(gt_node, NIL_TOKEN)[0]
            return gt_node
        sub_gt_node = self.term_check_insert(self.root, t)
        if sub_gt_node.child is None:
            sub_gt_node.child = 0
        node, created = check_insert(gt_node, Token(REF, sub_gt_node))
        if created:
            sub_gt_node.child += 1
        return node

    @staticmethod
    def incref(leaf: TrieNode) -> None:
        leaf.child += 1

    @staticmethod
    def refcount(leaf: TrieNode) -> int:
        c = leaf.child
        if not isinstance(c, int):
            raise ValueError(f"{leaf!r} is not a global trie leaf")
        return c

    # -- loading and release ------------------------------------------------

    def term_load(self, leaf: TrieNode) -> Term:
        c = leaf.child
        if not isinstance(c, int) or c < 1:
            raise DanglingReferenceError(f"load through unreferenced leaf {leaf!r}")
        return detokenize(self.trie.path_tokens(leaf), 1, self.term_load)[0]

    def release(self, leaf: TrieNode) -> None:
        """Drop one reference; delete the path once nothing refers to it."""
        c = leaf.child
        if not isinstance(c, int) or c < 1:
            raise DanglingReferenceError(f"release of unreferenced leaf {leaf!r}")
        leaf.child = c - 1
        if c > 1:
            return
        targets = []
        node = leaf
        while node is not self.root and not has_children(node):
            parent = node.parent
            self.trie.unlink(node)
            if node.token.kind == REF:
                targets.append(node.token.value)
            node = parent
        # after the loop: a subterm path may share a prefix with this one
        for target in targets:
            self.release(target)

    # -- inspection ---------------------------------------------------------

    def leaves(self) -> Iterator[TrieNode]:
        return (n for n in self.trie.walk() if isinstance(n.child, int))

    def internal_refs(self) -> Counter:
        """Reference tokens stored inside the global trie itself, by target leaf."""
        return Counter(n.token.value for n in self.trie.walk() if n.token.kind == REF)

    def __len__(self):
        return len(self.trie)
