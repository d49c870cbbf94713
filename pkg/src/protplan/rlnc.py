"""Random linear network coding run of a protection plan.

Only coefficient vectors are simulated: source packet ``t`` is the unit
vector ``e_t`` of length ``G`` and a set of stored packets can rebuild
the data iff its coefficient matrix has rank ``G``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, lcm
from typing import Mapping

import numpy as np

from .gf import field as gf_field
from .model import ProtectionPlan

DEFAULT_MAX_G = 360


@dataclass(frozen=True)
class PacketizedPlan:
    """Integer image of a plan: packets stored per node (``a``) and per link (``b``)."""

    n: int
    k: int
    data_size: Fraction
    G: int
    a: Mapping[int, int]
    b: Mapping[int, int]
    exact: bool

    @property
    def note(self) -> str:
        return "exact" if self.exact else f"rounded up to a {self.G}-packet grid"

    def traffic(self) -> Fraction:
        """Data units sent over the whole run."""
        return sum(s * (s - 1) * self.b[s] for s in self.b) * self.data_size / self.G


def packetize(plan: ProtectionPlan, max_G: int = DEFAULT_MAX_G) -> PacketizedPlan:
    """Pick the packet count ``G`` and round storage/transmissions onto it.

    ``G`` is the lcm of every ``alpha/M`` and ``beta/M`` denominator when that
    fits in ``max_G``; otherwise ``G = max_G`` and counts are rounded up,
    which keeps every plan constraint satisfied.
    """
    spec = plan.spec
    if max_G < spec.n:
        raise ValueError(f"max_G={max_G} < n={spec.n}: some node would start empty")
    M = spec.M
    values = [v / M for v in plan.alpha.values()] + [v / M for v in plan.beta.values()]
    G = lcm(*(v.denominator for v in values))
    exact = G <= max_G
    if not exact:
        G = max_G
    a = {m: ceil(G * v / M) for m, v in plan.alpha.items()}
    b = {s: ceil(G * v / M) for s, v in plan.beta.items()}
    return PacketizedPlan(spec.n, spec.k, M, G, a, b, exact)


@dataclass(frozen=True)
class TrialReport:
    seed: int
    ranks: Mapping[int, int]
    success: bool
    traffic: Fraction
    failed_order: tuple[int, ...] = field(default=())


def _initial_storage(pp: PacketizedPlan) -> list[np.ndarray]:
    eye = np.eye(pp.G, dtype=np.int64)
    return [eye[i::pp.n] for i in range(pp.n)]


def run_trial(pp: PacketizedPlan, seed: int, field_order: int = 256) -> TrialReport:
    """One seeded run; ranks are recorded after each compression (m = n-1..k)."""
    gf = gf_field(field_order)
    rng = np.random.default_rng(seed)
    store = dict(enumerate(_initial_storage(pp)))
    alive = list(range(pp.n))
    ranks: dict[int, int] = {}
    failed: list[int] = []
    packets_sent = 0
    for s in range(pp.n, pp.k, -1):
        bs = pp.b[s]
        inbox: dict[int, list[np.ndarray]] = {v: [] for v in alive}
        if bs:
            for u in alive:
                held = store[u]
                for v in alive:
                    if v == u:
                        continue
                    if held.shape[0]:
                        coeffs = gf.random(rng, (bs, held.shape[0]))
                        inbox[v].append(gf.matmul(coeffs, held))
                    else:
                        inbox[v].append(np.zeros((bs, pp.G), dtype=np.int64))
                    packets_sent += bs
        lost = alive.pop(int(rng.integers(len(alive))))
        failed.append(lost)
        del store[lost]
        budget = pp.a[s - 1]
        for v in alive:
            pool = np.vstack([store[v]] + inbox[v]) if inbox[v] else store[v]
            if pool.shape[0] > budget:
                pool = gf.matmul(gf.random(rng, (budget, pool.shape[0])), pool)
            store[v] = pool
        ranks[s - 1] = gf.rank(np.vstack([store[v] for v in alive]))
    success = all(r == pp.G for r in ranks.values())
    traffic = Fraction(packets_sent) * pp.data_size / pp.G
    return TrialReport(seed, ranks, success, traffic, tuple(failed))


@dataclass(frozen=True)
class BatchSummary:
    G: int
    trials: int
    successes: int
    per_epoch_min_rank: Mapping[int, int]
    exact: bool

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials if self.trials else 0.0

    def to_dict(self) -> dict:
        return {
            "G": self.G,
            "trials": self.trials,
            "successes": self.successes,
            "per_epoch_min_rank": {str(m): r for m, r in sorted(self.per_epoch_min_rank.items(), reverse=True)},
            "packetization": "exact" if self.exact else "rounded",
        }


def run_batch(pp: PacketizedPlan, trials: int, base_seed: int = 0,
              field_order: int = 256) -> BatchSummary:
    min_rank: dict[int, int] = {}
    successes = 0
    for t in range(trials):
        rep = run_trial(pp, base_seed + t, field_order)
        successes += rep.success
        for m, r in rep.ranks.items():
            min_rank[m] = min(r, min_rank.get(m, r))
    return BatchSummary(pp.G, trials, successes, min_rank, pp.exact)


def predicted_uncoded_ranks(pp: PacketizedPlan) -> dict[int, int]:
    """Ranks left when nothing is transmitted: the survivors' initial packets.

    Exact for ``b == 0`` only when ``G`` is a multiple of ``n`` (equal shares);
    otherwise it depends on which nodes fail.
    """
    share = pp.G // pp.n
    return {m: m * share for m in range(pp.n - 1, pp.k - 1, -1)}
