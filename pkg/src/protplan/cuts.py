"""Enumeration of the finite S-DC cuts of the information flow graph.

A cut at stage ``m`` (``m`` nodes left) is fixed by how the ``m`` surviving
incarnations split their storage edges across epochs: ``j[p]`` of them cut
the storage edge of capacity ``alpha_p`` (p = n..m).  Every survivor whose
storage edge is cut at epoch ``p >= q`` also cuts the ``q - m`` incoming
transmissions of epoch ``q`` from nodes that are later lost, hence

    l[q] = (q - m) * sum(j[p] for p >= q)          (q = n..m+1)

and the cut capacity is ``sum j[p] alpha_p + sum l[q] beta_q``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterator

from .model import ProblemSpec, ProtectionPlan

DEFAULT_CUT_LIMIT = 10**6


class CutCountWarning(UserWarning):
    """The requested enumeration is larger than the configured limit."""


@dataclass(frozen=True)
class CutConstraint:
    """One cut: ``j`` is indexed p = n, n-1, ..., m and ``l`` q = n, ..., m+1."""

    n: int
    stage_m: int
    j: tuple[int, ...]
    l: tuple[int, ...]

    def __post_init__(self) -> None:
        m = self.stage_m
        if len(self.j) != self.n - m + 1 or len(self.l) != self.n - m:
            raise ValueError("cut vectors have the wrong length")
        if sum(self.j) != m:
            raise ValueError(f"alpha multiplicities must sum to m={m}")
        if any(x < 0 or x > m for x in self.j):
            raise ValueError("alpha multiplicities must lie in [0, m]")
        if self.l != induced_transmissions(self.n, m, self.j):
            raise ValueError("transmission multiplicities inconsistent with j")

    def j_at(self, p: int) -> int:
        return self.j[self.n - p]

    def l_at(self, q: int) -> int:
        return self.l[self.n - q]

    def label(self) -> str:
        return f"cut[m={self.stage_m}] j=({','.join(map(str, self.j))})"

    def expression(self) -> str:
        """Capacity as text, e.g. ``4*alpha_6 + 8*beta_6 + 4*beta_5``."""
        terms = [f"{c}*alpha_{p}" for p, c in zip(range(self.n, self.stage_m - 1, -1), self.j) if c]
        terms += [f"{c}*beta_{q}" for q, c in zip(range(self.n, self.stage_m, -1), self.l) if c]
        return " + ".join(terms) or "0"


def induced_transmissions(n: int, m: int, j: tuple[int, ...]) -> tuple[int, ...]:
    out = []
    running = 0
    for q in range(n, m, -1):
        running += j[n - q]
        out.append((q - m) * running)
    return tuple(out)


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Weak compositions of ``total`` into ``parts`` parts, descending lex order.

    Iterative: the successor decrements the last nonzero entry before the
    final slot and sweeps everything to its right into the next slot.
    """
    if parts < 1:
        return
    c = [0] * parts
    c[0] = total
    while True:
        yield tuple(c)
        i = parts - 2
        while i >= 0 and c[i] == 0:
            i -= 1
        if i < 0:
            return
        tail = sum(c[i + 1:])
        c[i] -= 1
        c[i + 1] = tail + 1
        for t in range(i + 2, parts):
            c[t] = 0


def stage_cut_count(n: int, m: int) -> int:
    return comb(n, n - m)


def total_cut_count(n: int, k: int) -> int:
    return sum(comb(n, t) for t in range(1, n - k + 1))


def iter_stage_cuts(spec: ProblemSpec, m: int) -> Iterator[CutConstraint]:
    if not spec.k <= m <= spec.n - 1:
        raise ValueError(f"stage m={m} outside [{spec.k}, {spec.n - 1}]")
    n = spec.n
    for j in compositions(m, n - m + 1):
        yield CutConstraint(n, m, j, induced_transmissions(n, m, j))


def enumerate_stage_cuts(spec: ProblemSpec, m: int) -> list[CutConstraint]:
    return list(iter_stage_cuts(spec, m))


def enumerate_all_cuts(spec: ProblemSpec, limit: int = DEFAULT_CUT_LIMIT) -> list[CutConstraint]:
    count = total_cut_count(spec.n, spec.k)
    if count > limit:
        warnings.warn(
            f"(n={spec.n}, k={spec.k}) has {count} cut constraints (limit {limit})",
            CutCountWarning,
            stacklevel=2,
        )
    out: list[CutConstraint] = []
    for m in spec.stages:
        out.extend(iter_stage_cuts(spec, m))
    return out


def cut_capacity(cut: CutConstraint, plan: ProtectionPlan) -> Fraction:
    spec = plan.spec
    if cut.n != spec.n or not spec.k <= cut.stage_m < spec.n:
        raise ValueError(f"{cut.label()} does not belong to (n={spec.n}, k={spec.k})")
    a, b = plan.alpha, plan.beta
    total = Fraction(0)
    for p, c in zip(range(cut.n, cut.stage_m - 1, -1), cut.j):
        if c:
            total += c * a[p]
    for q, c in zip(range(cut.n, cut.stage_m, -1), cut.l):
        if c:
            total += c * b[q]
    return total


def csv_header(spec: ProblemSpec) -> list[str]:
    n, k = spec.n, spec.k
    return ["m"] + [f"j_{p}" for p in range(n, k - 1, -1)] + [f"l_{q}" for q in range(n, k, -1)]


def csv_row(spec: ProblemSpec, cut: CutConstraint) -> list[str]:
    n, k, m = spec.n, spec.k, cut.stage_m
    js = [str(cut.j_at(p)) if p >= m else "" for p in range(n, k - 1, -1)]
    ls = [str(cut.l_at(q)) if q > m else "" for q in range(n, k, -1)]
    return [str(m)] + js + ls
