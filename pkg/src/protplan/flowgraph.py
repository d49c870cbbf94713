"""Explicit information flow graph for one stage and its max-flow min-cut.

The graph follows the canonical loss order (node n first, then n-1, ...)
and keeps every survivor as a chain of storage edges, so its min-cut can
be computed without reference to the cut enumeration in :mod:`cuts`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .model import ProtectionPlan


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"


INF = _Infinity()

Capacity = Union[Fraction, _Infinity]


@dataclass(frozen=True)
class Arc:
    tail: str
    head: str
    capacity: Capacity
    kind: str  # "source", "sink", "storage" or "transmission"


@dataclass
class FlowNetwork:
    source: str
    sink: str
    arcs: list[Arc] = field(default_factory=list)
    labels: dict[str, dict] = field(default_factory=dict)

    @property
    def vertices(self) -> list[str]:
        seen = dict.fromkeys([self.source])
        for arc in self.arcs:
            seen.setdefault(arc.tail)
            seen.setdefault(arc.head)
        return list(seen)

    def add(self, tail: str, head: str, capacity: Capacity, kind: str) -> None:
        self.arcs.append(Arc(tail, head, capacity, kind))

    def finite_arcs(self) -> list[Arc]:
        return [a for a in self.arcs if a.capacity is not INF]

    def to_dot(self) -> str:
        lines = ["digraph flow {", "  rankdir=LR;"]
        for v in self.vertices:
            meta = self.labels.get(v, {})
            text = meta.get("text", v)
            lines.append(f'  "{v}" [label="{text}"];')
        for a in self.arcs:
            cap = "inf" if a.capacity is INF else str(a.capacity)
            style = ' style="dashed"' if a.kind == "transmission" else ""
            lines.append(f'  "{a.tail}" -> "{a.head}" [label="{cap}"{style}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_flow_network(plan: ProtectionPlan, m: int) -> FlowNetwork:
    """Graph for stage ``m``: survivors 1..m, nodes n..m+1 lost in that order.

    Lost nodes are hubs fed by ``S`` with infinite capacity; they send
    ``beta_q`` to every survivor's epoch-q vertex while still alive.
    """
    spec = plan.spec
    n = spec.n
    if not spec.k <= m <= n - 1:
        raise ValueError(f"stage m={m} outside [{spec.k}, {n - 1}]")
    a, b = plan.alpha, plan.beta
    net = FlowNetwork("S", "DC")
    net.labels["S"] = {"text": "S"}
    net.labels["DC"] = {"text": "DC"}

    for i in range(1, m + 1):
        pre = f"pre{i}"
        net.labels[pre] = {"node": i, "epoch": None, "text": f"N{i}"}
        net.add("S", pre, INF, "source")
        prev = pre
        for q in range(n, m, -1):
            v = f"a{i}_{q}"
            net.labels[v] = {"node": i, "epoch": q, "text": f"N{i}@{q}"}
            net.add(prev, v, a[q], "storage")
            prev = v
        fin = f"fin{i}"
        net.labels[fin] = {"node": i, "epoch": m, "text": f"N{i}@{m}"}
        net.add(prev, fin, a[m], "storage")
        net.add(fin, "DC", INF, "sink")

    for d in range(m + 1, n + 1):
        hub = f"x{d}"
        net.labels[hub] = {"node": d, "epoch": None, "text": f"N{d} (lost)"}
        net.add("S", hub, INF, "source")
    for q in range(n, m, -1):
        for d in range(m + 1, q + 1):
            for i in range(1, m + 1):
                net.add(f"x{d}", f"a{i}_{q}", b[q], "transmission")
    return net


def max_flow(net: FlowNetwork) -> Fraction:
    """Edmonds-Karp on exact rational capacities."""
    big = sum((arc.capacity for arc in net.finite_arcs()), Fraction(0)) + 1
    index = {v: i for i, v in enumerate(net.vertices)}
    size = len(index)
    adj: list[list[int]] = [[] for _ in range(size)]
    # residual capacities kept in a flat edge list; edge e ^ 1 is its reverse
    to: list[int] = []
    res: list[Fraction] = []
    for arc in net.arcs:
        u, v = index[arc.tail], index[arc.head]
        cap = big if arc.capacity is INF else Fraction(arc.capacity)
        adj[u].append(len(to)); to.append(v); res.append(cap)
        adj[v].append(len(to)); to.append(u); res.append(Fraction(0))

    s, t = index[net.source], index[net.sink]
    flow = Fraction(0)
    while True:
        parent_edge = [-1] * size
        parent_edge[s] = -2
        queue = deque([s])
        while queue and parent_edge[t] == -1:
            u = queue.popleft()
            for e in adj[u]:
                v = to[e]
                if parent_edge[v] == -1 and res[e] > 0:
                    parent_edge[v] = e
                    queue.append(v)
        if parent_edge[t] == -1:
            return flow
        push = None
        v = t
        while v != s:
            e = parent_edge[v]
            push = res[e] if push is None else min(push, res[e])
            v = to[e ^ 1]
        v = t
        while v != s:
            e = parent_edge[v]
            res[e] -= push
            res[e ^ 1] += push
            v = to[e ^ 1]
        flow += push


def min_cut(net: FlowNetwork) -> Fraction:
    return max_flow(net)


def stage_min_cuts(plan: ProtectionPlan) -> dict[int, Fraction]:
    return {m: min_cut(build_flow_network(plan, m)) for m in plan.spec.stages}
