"""Node accounting for a table space and an independent expected-count model.

The expected counts never touch a trie: each trie is modelled as the set
of non-empty prefixes of the token sequences stored in it, which is
exactly its node set.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .global_trie import GT_ST, GT_T
from .table_space import DESIGNS, ORIGINAL, TableSpace
from .terms import (
    CONS_TOKEN,
    NIL_TOKEN,
    List,
    Term,
    functor_token,
    is_simple,
    simple_token,
    standardize,
    tokenize,
)

DEFAULT_WORD_BYTES = 8
FIELDS = {"subgoal": 4, "answer": 5, "gt": 4}


@dataclass(frozen=True)
class MemoryReport:
    nodes_subgoal: int = 0
    nodes_answer: int = 0
    nodes_gt: int = 0
    hash_buckets: int = 0
    word_bytes: int = DEFAULT_WORD_BYTES

    @property
    def nodes_total(self) -> int:
        return self.nodes_subgoal + self.nodes_answer + self.nodes_gt

    @property
    def bytes_by_category(self) -> dict[str, int]:
        w = self.word_bytes
        return {
            "subgoal": self.nodes_subgoal * FIELDS["subgoal"] * w,
            "answer": self.nodes_answer * FIELDS["answer"] * w,
            "gt": self.nodes_gt * FIELDS["gt"] * w,
            "hash_buckets": self.hash_buckets * w,
        }

    @property
    def bytes_total(self) -> int:
        return sum(self.bytes_by_category.values())

    def nodes_dict(self) -> dict[str, int]:
        return {
            "subgoal": self.nodes_subgoal,
            "answer": self.nodes_answer,
            "gt": self.nodes_gt,
            "hash_buckets": self.hash_buckets,
        }


def snapshot(store: TableSpace, word_bytes: int = DEFAULT_WORD_BYTES) -> MemoryReport:
    """Exact node counts by full walks.  No writer may be active."""
    sub = ans = gt = buckets = 0
    for te in store.entries.values():
        c = te.subgoal_trie.count_nodes()
        sub += c.nodes
        buckets += c.hash_buckets
        for sf in te.frames:
            c = sf.answer_trie.count_nodes()
            ans += c.nodes
            buckets += c.hash_buckets
    if store.gt is not None:
        c = store.gt.trie.count_nodes()
        gt = c.nodes
        buckets += c.hash_buckets
    return MemoryReport(sub, ans, gt, buckets, word_bytes)


@dataclass(frozen=True)
class OracleCount:
    nodes_subgoal: int
    nodes_answer: int
    nodes_gt: int

    @property
    def nodes_total(self) -> int:
        return self.nodes_subgoal + self.nodes_answer + self.nodes_gt

    def mismatches(self, report: MemoryReport) -> dict[str, tuple[int, int]]:
        """``{category: (expected, observed)}`` for every differing count."""
        out = {}
        for cat in ("nodes_subgoal", "nodes_answer", "nodes_gt"):
            want, got = getattr(self, cat), getattr(report, cat)
            if want != got:
                out[cat] = (want, got)
        return out


class _Model:
    def __init__(self, design: str):
        if design not in DESIGNS:
            raise ValueError(f"unknown design {design!r}")
        self.design = design
        self.subgoal: set = set()
        self.answer: set = set()
        self.gt: set = set()
        self._interned: set = set()

    @staticmethod
    def _add_prefixes(bucket: set, scope, seq: tuple) -> None:
        for i in range(1, len(seq) + 1):
            bucket.add((scope, seq[:i]))

    def _intern(self, t: Term) -> tuple:
        key = tuple(tokenize(t))
        if key in self._interned:
            return key
        self._interned.add(key)
        if self.design == GT_T:
            seq = key
        else:
            seq = tuple(self._st_spelling(t, top=True))
        self._add_prefixes(self.gt, None, seq)
        return key

    def _st_spelling(self, t: Term, top: bool) -> list:
        if is_simple(t):
            return [simple_token(t)]
        if isinstance(t, List):
            out = []
            for e in t.elements:
                out.append(CONS_TOKEN)
                out += self._st_spelling(e, top=False)
            out.append(NIL_TOKEN)
            return out
        if not top:
            return [("ref", self._intern(t))]
        out = [functor_token(t.name, len(t.args))]
        for a in t.args:
            out += self._st_spelling(a, top=False)
        return out

    def encode(self, terms) -> tuple:
        if self.design == ORIGINAL:
            return tuple(tok for t in terms for tok in tokenize(t))
        return tuple(simple_token(t) if is_simple(t) else ("ref", self._intern(t)) for t in terms)


def oracle_counts(queries: Iterable, design: str) -> OracleCount:
    """Expected node counts for storing ``queries`` under ``design``.

    Each query provides ``predicate``, ``args`` and ``answers`` (an iterable
    of substitution tuples), as :class:`gtst.workloads.Query` does.
    """
    m = _Model(design)
    for q in queries:
        args, _ = standardize(tuple(q.args))
        pred = (q.predicate, len(args))
        call_seq = m.encode(args)
        m._add_prefixes(m.subgoal, pred, call_seq)
        frame = (pred, call_seq)
        for subs in q.answers:
            subs, _ = standardize(tuple(subs))
            m._add_prefixes(m.answer, frame, m.encode(subs))
    return OracleCount(len(m.subgoal), len(m.answer), len(m.gt))


def table2_gt_nodes(a: int, b: int, n: int, design: str) -> int:
    """Closed-form GT size for ``n`` facts ``f(g(i,..,i), ..)`` with ``a`` copies of ``g/b``.

    Root-level ``f/a`` and ``g/b`` are shared; per fact gt-t adds the rest of
    the flat path, gt-st adds ``b`` integers plus ``a`` references.
    """
    if design == GT_T:
        return 2 + n * (a * (b + 1) - 1)
    if design == GT_ST:
        return 2 + n * (a + b)
    raise ValueError(f"no global trie in design {design!r}")


def table2_gt_ratio_limit(a: int, b: int) -> float:
    return (a + b) / (a * (b + 1) - 1)


def ratio(num: int, den: int) -> float:
    return num / den if den else float("nan")
