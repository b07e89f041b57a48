"""Test-only builders: random d-DNNF circuits and tiny hand-made texts.

The generator emits c2d text for circuits that are decomposable and
deterministic by construction (Shannon splits and conjunctions over disjoint
variable groups) but usually not smooth, so the smoothing pass gets real
work.  ``tree_budget`` caps the tree expansion of the DAG, which bounds the
cost of the no-reuse recursive engine variant on these fixtures.
"""

from __future__ import annotations

import random


def random_c2d_text(
    seed: int,
    num_variables: int,
    omit: int = 0,
    tree_budget: int = 1200,
    keep_probability: float = 0.8,
) -> str:
    """Random circuit over variables 1..num_variables-omit, declaring
    num_variables in the header so the last ``omit`` variables are omitted.
    Deterministic in ``seed``."""
    rng = random.Random(seed)
    records: list[str] = []
    tree_sizes: list[int] = []
    literal_cache: dict[int, int] = {}
    memo: dict[tuple[int, ...], int] = {}

    def emit(record: str, tree: int) -> int:
        records.append(record)
        tree_sizes.append(tree)
        return len(records) - 1

    def literal(lit: int) -> int:
        idx = literal_cache.get(lit)
        if idx is None:
            idx = literal_cache[lit] = emit(f"L {lit}", 1)
        return idx

    def subset(variables: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(v for v in variables if rng.random() < keep_probability)

    def build(variables: tuple[int, ...], budget: int) -> int:
        if not variables:
            if rng.random() < 0.05:
                return emit("O 0 0", 1)  # False
            return emit("A 0", 1)  # True
        if variables in memo and rng.random() < 0.4:
            return memo[variables]
        if len(variables) == 1 or budget < 8 or rng.random() < 0.1:
            v = variables[rng.randrange(len(variables))]
            roll = rng.random()
            if roll < 0.4:
                idx = literal(v)
            elif roll < 0.7:
                idx = literal(-v)
            else:
                pos, neg = literal(v), literal(-v)
                idx = emit(f"O {v} 2 {pos} {neg}", 3)
        elif rng.random() < 0.35 and len(variables) >= 2:
            shuffled = list(variables)
            rng.shuffle(shuffled)
            cut = rng.randrange(1, len(shuffled))
            groups = [tuple(sorted(shuffled[:cut])), tuple(sorted(shuffled[cut:]))]
            children = [build(g, budget // 2) for g in groups]
            tree = 1 + sum(tree_sizes[c] for c in children)
            idx = emit(f"A {len(children)} {children[0]} {children[1]}", tree)
        else:
            v = variables[rng.randrange(len(variables))]
            rest = tuple(u for u in variables if u != v)
            hi_sub = build(subset(rest), budget // 2)
            lo_sub = build(subset(rest), budget // 2)
            hi = emit(
                f"A 2 {literal(v)} {hi_sub}", 2 + tree_sizes[hi_sub]
            )
            lo = emit(
                f"A 2 {literal(-v)} {lo_sub}", 2 + tree_sizes[lo_sub]
            )
            idx = emit(f"O {v} 2 {hi} {lo}", 1 + tree_sizes[hi] + tree_sizes[lo])
        memo[variables] = idx
        return idx

    used = tuple(range(1, num_variables - omit + 1))
    build(used, tree_budget)
    edges = sum(
        len(rec.split()) - 2 - (rec.startswith("O ") and 1)
        for rec in records
        if rec[0] in "AO"
    )
    header = f"nnf {len(records)} {edges} {num_variables}"
    return "\n".join([header] + records) + "\n"


def gadget_chain_c2d(k: int) -> str:
    """And of k independent (v or not v) gadgets: count is exactly 2**k."""
    records = []
    ors = []
    for v in range(1, k + 1):
        records.append(f"L {v}")
        records.append(f"L {-v}")
        base = 3 * (v - 1)
        records.append(f"O {v} 2 {base} {base + 1}")
        ors.append(len(records) - 1)
    records.append(f"A {k} " + " ".join(map(str, ors)))
    edges = 2 * k + k
    return "\n".join([f"nnf {len(records)} {edges} {k}"] + records) + "\n"
