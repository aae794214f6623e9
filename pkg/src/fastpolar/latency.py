"""Time-step cost model for plan-based SC and SCL decoding.

f/g updates cost one step each regardless of stage.  SC node prices:
Rate-0/Rate-1 1, Rep 2, SPC 3, G-PC/RG-PC 3, G-Rep 1 plus its Rate-C
node.  Under SCL, information bits are estimated one at a time (shared
partial-sum update and metric sorting), so a node of size 2^t costs:
Rate-1 2*2^t, Rep 1+2^t, SPC 2*2^t-1, G-PC/RG-PC 1+ceil(2*(2^t-1)/Np);
Rate-0 and the G-Rep wrapper are unchanged.  No resource limits are
modelled, and no cost is assigned to the final CRC check.
"""

import math
from dataclasses import dataclass

from .classify import classify, option_sweep

__all__ = ["CostReport", "cost_sc", "cost_scl", "latency_table"]


@dataclass(frozen=True)
class CostReport:
    decoder: str  # "sc" | "scl"
    node_set: str
    total_steps: int
    per_node: dict  # kind -> accumulated steps

    def __post_init__(self):
        if self.total_steps != sum(self.per_node.values()):
            raise ValueError("total does not match the breakdown")


def _node_cost_sc(node, acc):
    if node.kind == "split":
        acc["split"] += 2  # one f step, one g step
        _node_cost_sc(node.left, acc)
        _node_cost_sc(node.right, acc)
    elif node.kind in ("rate0", "rate1"):
        acc[node.kind] += 1
    elif node.kind == "rep":
        acc["rep"] += 2
    elif node.kind == "spc":
        acc["spc"] += 3
    elif node.kind in ("gpc", "rgpc"):
        acc[node.kind] += 3
    elif node.kind == "grep":
        acc["grep"] += 1
        _node_cost_sc(node.rate_c, acc)
    else:
        raise ValueError(node.kind)


def _node_cost_scl(node, acc):
    size = node.size
    if node.kind == "split":
        acc["split"] += 2
        _node_cost_scl(node.left, acc)
        _node_cost_scl(node.right, acc)
    elif node.kind == "rate0":
        acc["rate0"] += 1
    elif node.kind == "rate1":
        acc["rate1"] += 2 * size
    elif node.kind == "rep":
        acc["rep"] += 1 + size
    elif node.kind == "spc":
        acc["spc"] += 2 * size - 1
    elif node.kind in ("gpc", "rgpc"):
        acc[node.kind] += 1 + math.ceil(2 * (size - 1) / node.np_sub)
    elif node.kind == "grep":
        acc["grep"] += 1
        _node_cost_scl(node.rate_c, acc)
    else:
        raise ValueError(node.kind)


def _report(plan, decoder, node_set, walker):
    from collections import defaultdict

    acc = defaultdict(int)
    walker(plan, acc)
    per_node = dict(acc)
    return CostReport(decoder, node_set, sum(per_node.values()), per_node)


def cost_sc(plan, node_set="custom"):
    """Total SC decoding time steps for a plan."""
    return _report(plan, "sc", node_set, _node_cost_sc)


def cost_scl(plan, node_set="custom"):
    """Total SCL decoding time steps for a plan."""
    return _report(plan, "scl", node_set, _node_cost_scl)


def latency_table(code, max_af_sweep=(1, 2, 3)):
    """Per-decoder progression of costs over the node-set columns.

    Returns {"sc": [CostReport, ...], "scl": [...]} with one report per
    column: base, +G-Rep, +G-Rep+G-PC, then +RG-PC per AF budget.
    """
    table = {"sc": [], "scl": []}
    for label, opts in option_sweep(max_af_sweep):
        plan = classify(code, opts)
        table["sc"].append(cost_sc(plan, label))
        table["scl"].append(cost_scl(plan, label))
    return table
