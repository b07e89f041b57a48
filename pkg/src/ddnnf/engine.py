"""Counting queries over a preprocessed circuit.

The baseline pass already holds every node's count under no assumptions, so
a query only has to account for the literals it forces to zero.  The ladder
of optimizations, each independently toggleable:

* core/dead shortcuts: a query including a dead variable or excluding a core
  one is 0 without touching the circuit; included-core and excluded-dead
  assumptions change nothing and are dropped before marking.
* partial traversal: climb parent pointers from the affected literal nodes,
  mark the ancestor closure, and recompute only marked nodes, reading every
  unmarked child's baseline.  Skipped when the assumption set exceeds
  ``traversal_bypass_fraction`` of the variables, where marking overhead
  stops paying off.
* partial calculation: when less than half of an And node's children
  changed, divide the cached product by the old child values and multiply
  the new ones in, instead of multiplying all children.  The matching Or
  rule (subtract and add) is implemented but off by default, since Or nodes
  rarely have more than two children.
* iterative traversal: full re-evaluations sweep the node list in order
  instead of recursing from the root; with it off the engine recurses, with
  or without per-query caching of shared subtrees.

Every configuration returns identical counts; only the work differs.
Queries never mutate the circuit: per-query values live in local buffers,
so concurrent queries are safe.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .core import Assumptions, Ddnnf, NodeKind
from .errors import DdnnfError, VariableOutOfRange, ZeroOldChild


@dataclass(frozen=True)
class OptimizationConfig:
    reuse_subtrees: bool = True
    partial_traversal: bool = True
    partial_calculation: bool = True
    core_dead_shortcuts: bool = True
    iterative: bool = True
    or_folding: bool = False
    traversal_bypass_fraction: float = 0.2

    def __post_init__(self):
        if not 0 < self.traversal_bypass_fraction <= 1:
            raise ValueError("traversal_bypass_fraction must be in (0, 1]")


FULL = OptimizationConfig()
NAIVE = OptimizationConfig(
    reuse_subtrees=False,
    partial_traversal=False,
    partial_calculation=False,
    core_dead_shortcuts=False,
    iterative=False,
)
REUSING_SUBTREES = OptimizationConfig(
    partial_traversal=False,
    partial_calculation=False,
    core_dead_shortcuts=False,
    iterative=False,
)
NO_PARTIAL_TRAVERSAL = OptimizationConfig(partial_traversal=False)
NO_PARTIAL_CALCULATION = OptimizationConfig(partial_calculation=False)
NO_CORE_DEAD = OptimizationConfig(core_dead_shortcuts=False)

#: The benchmark variants, weakest first.
VARIANTS: dict[str, OptimizationConfig] = {
    "naive": NAIVE,
    "reusing-subtrees": REUSING_SUBTREES,
    "no-partial-traversal": NO_PARTIAL_TRAVERSAL,
    "no-partial-calculation": NO_PARTIAL_CALCULATION,
    "no-core-dead": NO_CORE_DEAD,
    "full": FULL,
}


@dataclass(frozen=True)
class QueryResult:
    count: int
    nodes_visited: int
    nodes_marked: int
    strategy: str  # "shortcut" | "partial" | "full" | "contradiction"


def literal_value_feature(literal: int, feature: int) -> int:
    """Initial value of a literal node when counting one feature."""
    return 0 if literal == -feature else 1


def literal_value_config(literal: int, assumptions: Assumptions) -> int:
    """Initial value of a literal node under a partial configuration."""
    if literal < 0:
        return 0 if -literal in assumptions.include else 1
    return 0 if literal in assumptions.exclude else 1


def _require_preprocessed(d: Ddnnf) -> None:
    if not d.preprocessed:
        raise DdnnfError("circuit must be preprocessed first")


def count_total(d: Ddnnf) -> int:
    """Cardinality of the whole model; O(1) after preprocessing."""
    _require_preprocessed(d)
    return d.nodes[d.root].baseline * d.omitted_factor


def mark_ancestors(d: Ddnnf, zero_literals) -> set[int]:
    """Ancestor closure (inclusive) of the nodes holding the given literals.

    Only literals forced to zero are worth seeding: a literal forced to one
    equals its baseline and changes nothing upstream.
    """
    marked: set[int] = set()
    stack = [i for lit in zero_literals for i in d.literal_index.get(lit, ())]
    nodes = d.nodes
    while stack:
        i = stack.pop()
        if i not in marked:
            marked.add(i)
            stack.extend(nodes[i].parents)
    return marked


def recompute_and_partial(old_value, changed, arity: int):
    """Incremental And update: old_value * prod(new) / prod(old).

    ``changed`` holds (old_child, new_child) pairs; the caller guarantees
    fewer than ``arity / 2`` of them and that ``old_value`` is the product
    of all old children, which makes the division exact.  A zero old child
    cannot be divided out; the caller must fall back to the full product.
    """
    numerator = 1
    denominator = 1
    for old, new in changed:
        if old == 0:
            raise ZeroOldChild("cannot divide out a zero-valued child")
        numerator *= new
        denominator *= old
    return old_value * numerator // denominator


def recompute_or_partial(old_value, changed):
    """Incremental Or update: old_value plus the change of each child."""
    for old, new in changed:
        old_value += new - old
    return old_value


def _partial_pass(d: Ddnnf, marked: set[int], cfg: OptimizationConfig):
    nodes = d.nodes
    scratch: dict[int, int] = {}
    for i in sorted(marked):
        nd = nodes[i]
        kind = nd.kind
        if kind is NodeKind.LITERAL:
            scratch[i] = 0  # marked literals are exactly the zero-forced ones
            continue
        children = nd.children
        changed = [
            (nodes[c].baseline, scratch[c])
            for c in children
            if c in scratch and scratch[c] != nodes[c].baseline
        ]
        if kind is NodeKind.AND:
            if cfg.partial_calculation and 2 * len(changed) < len(children):
                try:
                    scratch[i] = recompute_and_partial(
                        nd.baseline, changed, len(children)
                    )
                    continue
                except ZeroOldChild:
                    pass
            value = 1
            for c in children:
                v = scratch.get(c)
                value *= nodes[c].baseline if v is None else v
                if value == 0:
                    break
            scratch[i] = value
        else:  # OR; True/False are leaves and never marked
            if cfg.or_folding and 2 * len(changed) < len(children):
                scratch[i] = recompute_or_partial(nd.baseline, changed)
                continue
            total = 0
            for c in children:
                v = scratch.get(c)
                total += nodes[c].baseline if v is None else v
            scratch[i] = total
    root_value = scratch.get(d.root, nodes[d.root].baseline)
    return root_value, len(marked)


def _full_pass(d: Ddnnf, zero_literals: set[int]):
    nodes = d.nodes
    values = [0] * len(nodes)
    for i, nd in enumerate(nodes):
        kind = nd.kind
        if kind is NodeKind.LITERAL:
            values[i] = 0 if nd.literal in zero_literals else 1
        elif kind is NodeKind.AND:
            value = 1
            for c in nd.children:
                value *= values[c]
                if value == 0:
                    break
            values[i] = value
        elif kind is NodeKind.OR:
            values[i] = sum(values[c] for c in nd.children)
        elif kind is NodeKind.TRUE:
            values[i] = 1
    return values[d.root], len(nodes)


def _recursive_eval(d: Ddnnf, zero_literals: set[int], memoize: bool):
    nodes = d.nodes
    visited = 0
    memo: dict[int, int] = {}

    def count(i: int) -> int:
        nonlocal visited
        if memoize:
            cached = memo.get(i)
            if cached is not None:
                return cached
        visited += 1
        nd = nodes[i]
        kind = nd.kind
        if kind is NodeKind.LITERAL:
            value = 0 if nd.literal in zero_literals else 1
        elif kind is NodeKind.AND:
            value = 1
            for c in nd.children:
                value *= count(c)
        elif kind is NodeKind.OR:
            value = sum(count(c) for c in nd.children)
        elif kind is NodeKind.TRUE:
            value = 1
        else:
            value = 0
        if memoize:
            memo[i] = value
        return value

    return count(d.root), visited


def query(
    d: Ddnnf, assumptions: Assumptions, cfg: OptimizationConfig = FULL
) -> QueryResult:
    """Cardinality of the partial configuration given by ``assumptions``.

    Contradictory assumptions legitimately count 0 and are answered without
    touching the circuit.  Assumptions on omitted variables never reach the
    traversal: pinning a free variable exactly halves the omitted-variable
    correction factor.  The count is identical under every configuration.
    """
    _require_preprocessed(d)
    n = d.num_variables
    for v in assumptions.variables():
        if not 1 <= v <= n:
            raise VariableOutOfRange(f"variable {v} outside 1..{n}")
    if assumptions.contradictory:
        return QueryResult(0, 0, 0, "contradiction")

    factor = d.omitted_factor
    include = set(assumptions.include)
    exclude = set(assumptions.exclude)
    for v in (include | exclude) & d.omitted:
        factor //= 2
    include -= d.omitted
    exclude -= d.omitted

    if cfg.core_dead_shortcuts:
        if include & d.dead or exclude & d.core:
            return QueryResult(0, 0, 0, "shortcut")
        include -= d.core
        exclude -= d.dead

    zero_literals = {-v for v in include} | set(exclude)
    if not zero_literals:
        return QueryResult(d.nodes[d.root].baseline * factor, 0, 0, "shortcut")

    if cfg.partial_traversal and len(zero_literals) <= cfg.traversal_bypass_fraction * n:
        marked = mark_ancestors(d, zero_literals)
        value, visited = _partial_pass(d, marked, cfg)
        return QueryResult(value * factor, visited, len(marked), "partial")

    if cfg.iterative:
        value, visited = _full_pass(d, zero_literals)
    else:
        value, visited = _recursive_eval(d, zero_literals, cfg.reuse_subtrees)
    return QueryResult(value * factor, visited, 0, "full")


def count_feature(d: Ddnnf, feature: int, cfg: OptimizationConfig = FULL) -> int:
    """Cardinality of one feature: models that include it."""
    return query(d, Assumptions.of(include={feature}), cfg).count


def count_all_features(
    d: Ddnnf, cfg: OptimizationConfig = FULL, threads: int = 1
) -> list[tuple[int, int]]:
    """(variable, cardinality) for every variable, ascending.

    Queries are independent; with ``threads > 1`` they run on a worker pool
    whose output keeps the input order regardless of completion order.
    """
    _require_preprocessed(d)
    variables = range(1, d.num_variables + 1)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            counts = list(pool.map(lambda v: count_feature(d, v, cfg), variables))
        return list(zip(variables, counts))
    return [(v, count_feature(d, v, cfg)) for v in variables]
