"""Workload generators: the two benchmark families, fact files, random programs."""
from __future__ import annotations

import itertools
import logging
import random
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .terms import NIL, Atom, Compound, Int, List, Term, Var, parse_fact_file

log = logging.getLogger(__name__)

TABLE1_KINDS = ("int", "atom", "f/1", "f/2", "f/4", "f/6", "list1", "list2", "list4")
TABLE2_ARITIES = (1, 2, 3)
TABLE2_SUBARITIES = (1, 3, 5)


class WorkloadError(ValueError):
    pass


class Product:
    """Re-iterable cartesian product of fact domains, one per free variable."""

    def __init__(self, domains: Sequence[Sequence[Term]]):
        self.domains = [list(d) for d in domains]

    def __iter__(self):
        return itertools.product(*self.domains)

    def __len__(self):
        n = 1
        for d in self.domains:
            n *= len(d)
        return n


@dataclass
class Query:
    """One tabled call and the answers the program derives for it."""

    predicate: str
    args: tuple
    answers: Iterable[tuple] = ()


@dataclass
class Workload:
    name: str
    n: int
    queries: list[Query] = field(default_factory=list)


@dataclass(frozen=True)
class WorkloadSpec:
    family: str
    kind: str | None = None
    outer_arity: int | None = None
    inner_arity: int | None = None
    path: str | None = None
    seed: int | None = None

    @classmethod
    def parse(cls, text: str) -> WorkloadSpec:
        family, _, arg = text.partition(":")
        if family == "table1":
            return cls("table1", kind=arg)
        if family == "table2":
            m = re.fullmatch(r"f(\d+)\.g(\d+)", arg)
            if m is None:
                raise WorkloadError(f"table2 workload must look like table2:f2.g3, got {text!r}")
            return cls("table2", outer_arity=int(m[1]), inner_arity=int(m[2]))
        if family == "factfile":
            if not arg:
                raise WorkloadError("factfile workload needs a path")
            return cls("factfile", path=arg)
        if family == "random":
            try:
                return cls("random", seed=int(arg))
            except ValueError:
                raise WorkloadError(f"random workload needs an integer seed, got {arg!r}") from None
        raise WorkloadError(f"unknown workload family {family!r}")

    def __str__(self):
        if self.family == "table1":
            return f"table1:{self.kind}"
        if self.family == "table2":
            return f"table2:f{self.outer_arity}.g{self.inner_arity}"
        if self.family == "factfile":
            return f"factfile:{self.path}"
        return f"random:{self.seed}"

    def generate(self, n: int | None = None, all_pairs: bool = False) -> Workload:
        if self.family == "table1":
            return gen_table1(self.kind, 100 if n is None else n, all_pairs=all_pairs)
        if self.family == "table2":
            return gen_table2(self.outer_arity, self.inner_arity, 50_000 if n is None else n)
        if self.family == "factfile":
            return load_factfile(self.path, n)
        return gen_random(self.seed)


# -- table1: t/5 over one kind of term ---------------------------------------

def table1_fact(kind: str, i: int) -> Term:
    if kind == "int":
        return Int(i)
    if kind == "atom":
        return Atom(f"a{i}")
    m = re.fullmatch(r"f/(\d+)|list(\d+)", kind)
    if m is None or int(m[1] or m[2]) < 1:
        raise WorkloadError(f"unknown table1 term kind {kind!r}")
    if m[1]:
        return Compound("f", (Int(i),) * int(m[1]))
    return List((Int(i),) * int(m[2]))


def table1_free_positions(arity: int = 5, all_pairs: bool = False) -> list[tuple[int, ...]]:
    singles = [(p,) for p in range(arity)]
    if all_pairs:
        pairs = list(itertools.combinations(range(arity), 2))
    else:
        pairs = [(p, p + 1) for p in range(arity - 1)]
    return singles + pairs


def gen_table1(kind: str, n: int, all_pairs: bool = False) -> Workload:
    """``n`` facts of one kind and the t/5 query schedule.

    Free positions are variables, every other position is the first fact.
    Each query's answers are all fact combinations for its free positions.
    """
    if n < 1:
        raise WorkloadError("n must be >= 1")
    facts = [table1_fact(kind, i) for i in range(1, n + 1)]
    fixed = facts[0]
    queries = []
    for free in table1_free_positions(5, all_pairs):
        names = iter("ABCDE")
        args = tuple(Var(next(names)) if p in free else fixed for p in range(5))
        queries.append(Query("t", args, Product([facts] * len(free))))
    return Workload(f"table1:{kind}", n, queries)


# -- table2: t/1 over f(g(i,..,i), ..) ----------------------------------------

def table2_fact(a: int, b: int, i: int) -> Compound:
    sub = Compound("g", (Int(i),) * b)
    return Compound("f", (sub,) * a)


def gen_table2(a: int, b: int, n: int) -> Workload:
    if a < 1 or b < 1:
        raise WorkloadError("table2 arities must be >= 1")
    if n < 1:
        raise WorkloadError("n must be >= 1")
    if a not in TABLE2_ARITIES or b not in TABLE2_SUBARITIES:
        log.warning("table2 f%d.g%d is outside the benchmark grid", a, b)
    facts = [table2_fact(a, b, i) for i in range(1, n + 1)]
    return Workload(f"table2:f{a}.g{b}", n, [Query("t", (Var("A"),), Product([facts]))])


# -- fact files ---------------------------------------------------------------

def load_factfile(path: str | Path, n: int | None = None) -> Workload:
    """``term/1`` facts as the answers of a single ``t(A)`` call."""
    with open(path, encoding="utf-8") as fh:
        facts = parse_fact_file(fh)
    if n is not None:
        facts = facts[:n]
    if not facts:
        raise WorkloadError(f"{path}: no term/1 facts")
    return Workload(f"factfile:{path}", len(facts), [Query("t", (Var("A"),), [(t,) for t in facts])])


# -- random programs ----------------------------------------------------------

ATOMS = ("a", "b", "c")
FUNCTORS = ("f", "g", "h")
VAR_NAMES = ("X", "Y", "Z", "W")


def random_term(
    rng: random.Random,
    depth: int = 4,
    max_arity: int = 4,
    var_prob: float = 0.15,
    max_int: int = 4,
) -> Term:
    """A random term of nesting depth at most ``depth`` over small symbol pools."""
    if depth <= 1 or rng.random() < 0.45:
        r = rng.random()
        if r < var_prob:
            return Var(rng.choice(VAR_NAMES))
        if r < 0.55:
            return Int(rng.randint(0, max_int))
        if r < 0.9:
            return Atom(rng.choice(ATOMS))
        return NIL
    sub = lambda: random_term(rng, depth - 1, max_arity, var_prob, max_int)  # noqa: E731
    if rng.random() < 0.25:
        return List(tuple(sub() for _ in range(rng.randint(1, max_arity))))
    return Compound(rng.choice(FUNCTORS), tuple(sub() for _ in range(rng.randint(1, max_arity))))


def gen_random(seed: int, max_terms: int = 200) -> Workload:
    """A random tabled program: calls to up to three predicates, with answers.

    Between 1 and ``max_terms`` terms are drawn in total.  Calls and answers
    are sometimes repeated so duplicate suppression gets exercised.
    """
    rng = random.Random(seed)
    budget = rng.randint(1, max_terms)
    preds = [(f"p{k}", rng.randint(0, 3)) for k in range(rng.randint(1, 3))]
    queries: list[Query] = []
    while budget > 0:
        if queries and rng.random() < 0.15:
            prev = rng.choice(queries)
            name, args = prev.predicate, prev.args
        else:
            name, arity = rng.choice(preds)
            args = tuple(random_term(rng) for _ in range(arity))
            budget -= max(arity, 1)
        nfree = len({v for v in _vars(args)})
        answers: list[tuple] = []
        for _ in range(rng.randint(0, 6)):
            if answers and rng.random() < 0.2:
                answers.append(rng.choice(answers))
            else:
                answers.append(tuple(random_term(rng) for _ in range(nfree)))
            budget -= max(nfree, 1)
        queries.append(Query(name, args, answers))
    drawn = sum(len(q.args) + sum(len(a) for a in q.answers) for q in queries)
    return Workload(f"random:{seed}", drawn, queries)


def _vars(terms):
    for t in terms:
        if isinstance(t, Var):
            yield t.name
        elif isinstance(t, Compound):
            yield from _vars(t.args)
        elif isinstance(t, List):
            yield from _vars(t.elements)
