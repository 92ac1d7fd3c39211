"""First-child / parent / next-sibling tries with hashed sibling groups.

A node's ``child`` field is overloaded the way table-space tries do it:

* ``None`` – no children yet,
* a ``TrieNode`` – head of the sibling list,
* a ``SiblingIndex`` – the children, hashed once the group outgrew the threshold,
* anything else – leaf payload (a reference count in the global trie, a
  subgoal frame at a subgoal-trie leaf).
"""
from __future__ import annotations

from typing import Iterator, NamedTuple

from .terms import ROOT_TOKEN, Token

HASH_THRESHOLD = 8
INITIAL_BUCKETS = 8
# expand when entries exceed this many per bucket
MAX_LOAD = 4

SUBGOAL = "subgoal"
ANSWER = "answer"
GLOBAL = "global"
CATEGORIES = (SUBGOAL, ANSWER, GLOBAL)


class TrieNode:
    __slots__ = ("token", "child", "parent", "sibling")

    def __init__(self, token: Token, parent: TrieNode | None, sibling: TrieNode | None):
        self.token = token
        self.child = None
        self.parent = parent
        self.sibling = sibling

    def __repr__(self):
        return f"<{type(self).__name__} {self.token}>"


class AnswerTrieNode(TrieNode):
    """Answer-trie node; ``code`` holds the compiled-trie instruction."""

    __slots__ = ("code",)

    def __init__(self, token, parent, sibling):
        super().__init__(token, parent, sibling)
        self.code = None


class SiblingIndex:
    __slots__ = ("buckets", "count")

    def __init__(self, nbuckets: int = INITIAL_BUCKETS):
        self.buckets: list[TrieNode | None] = [None] * nbuckets
        self.count = 0

    @classmethod
    def of(cls, head: TrieNode) -> SiblingIndex:
        nodes = []
        while head is not None:
            nodes.append(head)
            head = head.sibling
        index = cls()
        # keep list order inside each bucket
        for node in reversed(nodes):
            index.add(node)
        return index

    def find(self, token: Token) -> TrieNode | None:
        x = self.buckets[hash(token) & (len(self.buckets) - 1)]
        while x is not None:
            if x.token == token:
                return x
            x = x.sibling
        return None

    def add(self, node: TrieNode) -> None:
        b = hash(node.token) & (len(self.buckets) - 1)
        node.sibling = self.buckets[b]
        self.buckets[b] = node
        self.count += 1
        if self.count > MAX_LOAD * len(self.buckets):
            self._expand()

    def remove(self, node: TrieNode) -> None:
        b = hash(node.token) & (len(self.buckets) - 1)
        x = self.buckets[b]
        if x is node:
            self.buckets[b] = node.sibling
        else:
            while x.sibling is not node:
                x = x.sibling
            x.sibling = node.sibling
        node.sibling = None
        self.count -= 1

    def _expand(self) -> None:
        nodes = list(self)
        self.buckets = [None] * (2 * len(self.buckets))
        self.count = 0
        for node in reversed(nodes):
            self.add(node)

    def __iter__(self) -> Iterator[TrieNode]:
        for x in self.buckets:
            while x is not None:
                yield x
                x = x.sibling

    def __len__(self):
        return self.count


class NodeCount(NamedTuple):
    nodes: int
    hash_buckets: int
    max_depth: int


class Trie:
    """One trie (subgoal, answer or global) anchored at a root marker node."""

    def __init__(self, category: str, hash_threshold: float = HASH_THRESHOLD):
        if category not in CATEGORIES:
            raise ValueError(f"unknown trie category {category!r}")
        self.category = category
        self.hash_threshold = hash_threshold
        self.node_class = AnswerTrieNode if category == ANSWER else TrieNode
        self.root = self.node_class(ROOT_TOKEN, None, None)
        self.allocated = 0
        self.freed = 0

    def lookup(self, n: TrieNode, token: Token) -> TrieNode | None:
        c = n.child
        if isinstance(c, SiblingIndex):
            return c.find(token)
        if c is not None and not isinstance(c, TrieNode):
            return None
        while c is not None:
            if c.token == token:
                return c
            c = c.sibling
        return None

    def check_insert(self, n: TrieNode, token: Token) -> TrieNode:
        return self.check_insert_new(n, token)[0]

    def check_insert_new(self, n: TrieNode, token: Token) -> tuple[TrieNode, bool]:
        """Child of ``n`` labelled ``token``, created at the list head if absent.

        The flag tells whether the node was created by this call.
        """
        c = n.child
        if type(c) is SiblingIndex:
            buckets = c.buckets
            x = buckets[hash(token) & (len(buckets) - 1)]
            while x is not None:
                if x.token == token:
                    return x, False
                x = x.sibling
            node = self.node_class(token, n, None)
            self.allocated += 1
            c.add(node)
            return node, True
        if c is None or isinstance(c, TrieNode):
            count = 0
            x = c
            while x is not None:
                if x.token == token:
                    return x, False
                count += 1
                x = x.sibling
            node = self.node_class(token, n, c)
            self.allocated += 1
            if count + 1 > self.hash_threshold:
                n.child = SiblingIndex.of(node)
            else:
                n.child = node
            return node, True
        raise ValueError(f"cannot insert below leaf {n!r}")

    def insert_path(self, tokens, start: TrieNode | None = None) -> TrieNode:
        n = self.root if start is None else start
        check_insert_new = self.check_insert_new
        for t in tokens:
            n = check_insert_new(n, t)[0]
        return n

    def unlink(self, node: TrieNode) -> None:
        """Detach ``node`` from its parent's children.  Its subtree is not visited."""
        p = node.parent
        c = p.child
        if isinstance(c, SiblingIndex):
            c.remove(node)
            if not c.count:
                p.child = None
        elif c is node:
            p.child = node.sibling
        else:
            while c.sibling is not node:
                c = c.sibling
            c.sibling = node.sibling
        node.parent = node.sibling = None
        self.freed += 1

    def path_tokens(self, leaf: TrieNode) -> list[Token]:
        out = []
        n = leaf
        while n.parent is not None:
            out.append(n.token)
            n = n.parent
        out.reverse()
        return out

    def walk(self, start: TrieNode | None = None) -> Iterator[TrieNode]:
        """Every node below ``start`` (root by default), preorder."""
        stack = list(children(self.root if start is None else start))
        while stack:
            n = stack.pop()
            yield n
            stack.extend(children(n))

    def count_nodes(self) -> NodeCount:
        nodes = buckets = max_depth = 0
        stack = [(self.root, 0)]
        pop, push = stack.pop, stack.append
        while stack:
            n, depth = pop()
            if depth > max_depth:
                max_depth = depth
            c = n.child
            if type(c) is SiblingIndex:
                buckets += len(c.buckets)
                for x in c.buckets:
                    while x is not None:
                        nodes += 1
                        push((x, depth + 1))
                        x = x.sibling
            elif isinstance(c, TrieNode):
                while c is not None:
                    nodes += 1
                    push((c, depth + 1))
                    c = c.sibling
        return NodeCount(nodes, buckets, max_depth)

    def __len__(self):
        return self.allocated - self.freed


def children(n: TrieNode) -> Iterator[TrieNode]:
    """Children of ``n`` in sibling-list (or bucket) order."""
    c = n.child
    if isinstance(c, SiblingIndex):
        yield from c
    elif isinstance(c, TrieNode):
        while c is not None:
            yield c
            c = c.sibling


def has_children(n: TrieNode) -> bool:
    c = n.child
    return isinstance(c, TrieNode) or (isinstance(c, SiblingIndex) and c.count > 0)


def is_hashed(n: TrieNode) -> bool:
    return isinstance(n.child, SiblingIndex)
