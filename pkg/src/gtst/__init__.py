"""Tabling table spaces: the original two-level tries, GT-T and GT-ST."""
from .global_trie import GT_ST, GT_T, DanglingReferenceError, GlobalTrie
from .stats import MemoryReport, OracleCount, oracle_counts, snapshot
from .table_space import DESIGNS, ORIGINAL, Instr, SubgoalFrame, TableEntry, TableError, TableSpace
from .terms import (
    Atom,
    CallSignature,
    Compound,
    Int,
    List,
    StdVar,
    Term,
    TermSyntaxError,
    Token,
    Var,
    format_term,
    parse_term,
    standardize,
    tokenize,
)
from .trie import SiblingIndex, Trie, TrieNode

__all__ = [
    "DESIGNS",
    "GT_ST",
    "GT_T",
    "ORIGINAL",
    "Atom",
    "CallSignature",
    "Compound",
    "DanglingReferenceError",
    "GlobalTrie",
    "Instr",
    "Int",
    "List",
    "MemoryReport",
    "OracleCount",
    "SiblingIndex",
    "StdVar",
    "SubgoalFrame",
    "TableEntry",
    "TableError",
    "TableSpace",
    "Term",
    "TermSyntaxError",
    "Token",
    "Trie",
    "TrieNode",
    "Var",
    "format_term",
    "oracle_counts",
    "parse_term",
    "snapshot",
    "standardize",
    "tokenize",
]
