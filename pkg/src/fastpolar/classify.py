"""Decode-tree pruning: turn a frozen-flag vector into a plan of special nodes.

Matching is top-down at every node with a fixed precedence: Rate-0,
Rate-1, G-Rep (smallest Rate-C), G-PC (largest parity block), RG-PC
(largest parity block within the AF budget), Rep, SPC, otherwise split
and recurse.
"""

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

__all__ = ["PlanOptions", "DecodePlan", "classify", "plan_stats",
           "BASE_OPTIONS", "option_sweep"]


@dataclass(frozen=True)
class PlanOptions:
    enable_grep: bool = False
    enable_gpc: bool = False
    max_af: int = 0
    min_special_size: int = 2

    def __post_init__(self):
        if not 0 <= self.max_af <= 3:
            raise ValueError("max_af must be in 0..3")


BASE_OPTIONS = PlanOptions()


def option_sweep(max_af_values=(1, 2, 3)):
    """The progressive node-set columns: base, +G-Rep, +G-PC, +RG-PC(k AF)."""
    cols = [("base", PlanOptions()),
            ("+grep", PlanOptions(enable_grep=True)),
            ("+gpc", PlanOptions(enable_grep=True, enable_gpc=True))]
    for k in max_af_values:
        cols.append((f"+rgpc{k}", PlanOptions(enable_grep=True, enable_gpc=True, max_af=k)))
    return cols


@dataclass(frozen=True)
class DecodePlan:
    """One node of the pruned decode tree.

    ``offset`` is the node's position in the length-N flag vector; a node
    at stage t spans ``2**stage`` bits.  Kind-specific payload:
    grep -> rate_c (sub-plan), gpc/rgpc -> np_sub (parity block size) and,
    for rgpc, af_positions (node-relative indices of the ignored frozen
    bits), split -> left/right.
    """

    kind: str  # rate0 | rate1 | rep | spc | grep | gpc | rgpc | split
    stage: int
    offset: int
    left: "DecodePlan | None" = None
    right: "DecodePlan | None" = None
    rate_c: "DecodePlan | None" = None
    np_sub: int = 0
    af_positions: tuple = field(default_factory=tuple)

    @property
    def size(self):
        return 1 << self.stage

    def leaves(self):
        if self.kind == "split":
            yield from self.left.leaves()
            yield from self.right.leaves()
        else:
            yield self

    def walk(self):
        yield self
        if self.kind == "split":
            yield from self.left.walk()
            yield from self.right.walk()

    def pretty(self, indent=0):
        pad = "  " * indent
        extra = ""
        if self.kind == "grep":
            extra = f" rate_c@{self.rate_c.offset}/2^{self.rate_c.stage}"
        elif self.kind in ("gpc", "rgpc"):
            extra = f" Np={self.np_sub}"
            if self.kind == "rgpc":
                extra += f" af={list(self.af_positions)}"
        lines = [f"{pad}{self.kind} size={self.size} offset={self.offset}{extra}"]
        if self.kind == "split":
            lines += self.left.pretty(indent + 1)
            lines += self.right.pretty(indent + 1)
        elif self.kind == "grep":
            lines += self.rate_c.pretty(indent + 1)
        return lines

    def to_dict(self):
        d = {"kind": self.kind, "stage": self.stage, "offset": self.offset}
        if self.kind == "split":
            d["left"] = self.left.to_dict()
            d["right"] = self.right.to_dict()
        elif self.kind == "grep":
            d["rate_c"] = self.rate_c.to_dict()
        elif self.kind in ("gpc", "rgpc"):
            d["np_sub"] = self.np_sub
            if self.kind == "rgpc":
                d["af_positions"] = list(self.af_positions)
        return d


def _match_grep(flags, stage, offset, opts):
    # everything left of the rightmost 2^p block frozen, p < stage
    size = 1 << stage
    ones = np.flatnonzero(flags)
    first_one = int(ones[0])
    if first_one < size // 2:
        return None  # left child not Rate-0
    p = 0
    while (1 << p) < size - first_one:
        p += 1
    rc_off = size - (1 << p)
    rate_c = _classify(flags[rc_off:], p, offset + rc_off, opts)
    return DecodePlan("grep", stage, offset, rate_c=rate_c)


def _leading_zero_run(flags):
    ones = np.flatnonzero(flags)
    return int(ones[0]) if ones.size else flags.size


def _match_gpc(flags, stage, offset):
    z = _leading_zero_run(flags)
    size = 1 << stage
    if z == 0 or z >= size or z & (z - 1):
        return None
    if not np.all(flags[z:]):
        return None
    return DecodePlan("gpc", stage, offset, np_sub=z)


def _match_rgpc(flags, stage, offset, max_af):
    z = _leading_zero_run(flags)
    size = 1 << stage
    if z == 0 or z >= size:
        return None
    np_sub = 1 << (z.bit_length() - 1)  # largest power of two inside the run
    af = tuple(int(i) for i in np.flatnonzero(flags[np_sub:] == 0) + np_sub)
    if len(af) > max_af:
        return None
    return DecodePlan("rgpc", stage, offset, np_sub=np_sub, af_positions=af)


def _classify(flags, stage, offset, opts):
    size = 1 << stage
    ones = int(flags.sum())
    if ones == 0:
        return DecodePlan("rate0", stage, offset)
    if ones == size:
        return DecodePlan("rate1", stage, offset)
    if size >= opts.min_special_size:
        if opts.enable_grep:
            node = _match_grep(flags, stage, offset, opts)
            if node is not None:
                return node
        if opts.enable_gpc:
            node = _match_gpc(flags, stage, offset)
            if node is not None:
                return node
        if opts.max_af > 0:
            node = _match_rgpc(flags, stage, offset, opts.max_af)
            if node is not None:
                return node
        if ones == 1 and flags[-1]:
            return DecodePlan("rep", stage, offset)
        if ones == size - 1 and not flags[0]:
            return DecodePlan("spc", stage, offset)
    half = size // 2
    return DecodePlan(
        "split", stage, offset,
        left=_classify(flags[:half], stage - 1, offset, opts),
        right=_classify(flags[half:], stage - 1, offset + half, opts),
    )


def classify(code, opts=BASE_OPTIONS):
    """Build the pruned decode tree for a code under the given node options."""
    return _classify(code.flags, code.n, 0, opts)


def plan_stats(plan):
    """Histogram of node kinds over the whole plan (split nodes included)."""
    counts = Counter()

    def visit(node):
        counts[node.kind] += 1
        if node.kind == "split":
            visit(node.left)
            visit(node.right)
        elif node.kind == "grep":
            visit(node.rate_c)

    visit(plan)
    return dict(counts)
