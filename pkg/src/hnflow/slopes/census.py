"""Sweeps over many flows and the ordered Bell bound on the HN census."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

from ..exact.subspace import Subspace
from .flow import Flow, MatrixFamily
from .lattice import lattice_for
from .polygon import hn_filtration
from .tau import TauOracle

__all__ = ["ordered_bell", "CensusResult", "flow_sweep"]


@lru_cache(maxsize=None)
def ordered_bell(n: int) -> int:
    """Number of weak orderings of n items: b(n) = sum_k C(n,k) b(n-k)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return 1
    return sum(comb(n, k) * ordered_bell(n - k) for k in range(1, n + 1))


@dataclass
class CensusResult:
    census: tuple
    per_flow: list = field(default_factory=list)  # (flow, chain subspaces, slopes)
    bound: int = 0

    @property
    def size(self) -> int:
        return len(self.census)

    @property
    def within_bound(self) -> bool:
        return self.size <= self.bound


def _one(fam, a, extra, max_rounds):
    lat = lattice_for(fam, a, extra, max_rounds)
    filt = hn_filtration(TauOracle(fam, a), lat)
    return filt


def flow_sweep(fam: MatrixFamily, flows: Sequence[Flow], extra: Iterable[Subspace] = (),
               max_rounds: int = 8, threads: int = 1) -> CensusResult:
    """HN filtrations for every flow; the census collects all distinct proper nonzero terms."""
    flows = list(flows)
    extra = tuple(extra)
    d = fam.dim
    for a in flows:
        if a.dim != d:
            raise ValueError("all flows must share the family dimension")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            filts = list(pool.map(lambda a: _one(fam, a, extra, max_rounds), flows))
    else:
        filts = [_one(fam, a, extra, max_rounds) for a in flows]
    seen = {}
    per_flow = []
    for a, filt in zip(flows, filts):
        for V in filt.interior:
            seen.setdefault(V, None)
        per_flow.append((a, filt.interior, filt.slopes))
    census = tuple(sorted(seen, key=Subspace.sort_key))
    result = CensusResult(census, per_flow, ordered_bell(2 ** d))
    if not result.within_bound:
        raise AssertionError(f"census of size {result.size} exceeds b(2^{d}) = {result.bound}")
    return result
