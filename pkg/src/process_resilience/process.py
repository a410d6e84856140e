"""The random graph process and its relatives: seeded samplers for the
nested process {G_i}, G(n,m), G(n,p), and coupled pairs G- <= G+, plus
hitting-time computation along a trace.

A ProcessTrace never materializes the full permutation of the N = n(n-1)/2
vertex pairs: it is stored implicitly as (n, seed) and streamed by a partial
Fisher-Yates shuffle, so hitting-time scans use O(steps) memory. Replaying
the same trace always yields the identical permutation. ``sample_gnm(n, m,
seed)`` takes the first m pairs of that same permutation, so it coincides
with ``graph_at(sample_process(n, seed), m)`` by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

from .graphs import Graph, _graph_from_pairs
from .rng import GENERATOR_ID, derive_seed, generator


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def index_from_pair(n: int, u: int, v: int) -> int:
    """Lexicographic rank of the pair (u, v), u < v, in the upper triangle."""
    if u > v:
        u, v = v, u
    return u * (2 * n - u - 1) // 2 + (v - u - 1)


def pair_from_index(n: int, idx: int):
    """Inverse of index_from_pair."""
    u = (2 * n - 1 - math.isqrt((2 * n - 1) ** 2 - 8 * idx)) // 2
    while u * (2 * n - u - 1) // 2 > idx:
        u -= 1
    while (u + 1) * (2 * n - u - 2) // 2 <= idx:
        u += 1
    v = idx - u * (2 * n - u - 1) // 2 + u + 1
    return u, v


_BATCH = 8192


def _uniform_doubles(seed: int) -> Iterator[float]:
    rng = generator(seed)
    while True:
        yield from rng.random(_BATCH).tolist()


@dataclass(frozen=True)
class ProcessTrace:
    """A seeded permutation of all vertex pairs, stored implicitly."""

    n: int
    seed: int

    @property
    def num_pairs(self) -> int:
        return pair_count(self.n)

    def iter_pairs(self) -> Iterator[tuple]:
        """Stream the permutation: pair arriving at step i+1 is the i-th yield.

        Partial Fisher-Yates with a sparse swap map; memory grows only with
        the number of steps consumed.
        """
        N = self.num_pairs
        swap = {}
        doubles = _uniform_doubles(self.seed)
        for i in range(N):
            j = i + int(next(doubles) * (N - i))
            picked = swap.get(j, j)
            swap[j] = swap.pop(i, i)
            yield pair_from_index(self.n, picked)

    def pairs(self, m: int) -> list:
        """First m pairs of the permutation."""
        if not (0 <= m <= self.num_pairs):
            raise ValueError(f"m must be in [0, {self.num_pairs}], got {m}")
        out = []
        it = self.iter_pairs()
        for _ in range(m):
            out.append(next(it))
        return out

    def descriptor(self) -> dict:
        return {"n": self.n, "seed": self.seed, "generator": GENERATOR_ID}


def trace_from_descriptor(d: dict) -> ProcessTrace:
    if d.get("generator") != GENERATOR_ID:
        raise ValueError(f"unsupported generator id {d.get('generator')!r}; "
                         f"this build produces {GENERATOR_ID!r}")
    return ProcessTrace(int(d["n"]), int(d["seed"]))


def sample_process(n: int, seed: int) -> ProcessTrace:
    if n < 2:
        raise ValueError(f"process needs n >= 2, got {n}")
    return ProcessTrace(n, seed)


def graph_at(trace: ProcessTrace, m: int) -> Graph:
    """The process graph after m edge arrivals (distributed as G(n,m))."""
    return _graph_from_pairs(trace.n, trace.pairs(m))


def hitting_time_min_degree(trace: ProcessTrace, k: int) -> int:
    """Smallest m with min degree >= k, in one streaming pass."""
    if not (1 <= k <= trace.n - 1):
        raise ValueError(f"k must be in [1, {trace.n - 1}], got {k}")
    deg = [0] * trace.n
    below = trace.n
    for step, (u, v) in enumerate(trace.iter_pairs(), start=1):
        deg[u] += 1
        if deg[u] == k:
            below -= 1
        deg[v] += 1
        if deg[v] == k:
            below -= 1
        if below == 0:
            return step
    raise AssertionError("unreachable: K_n has min degree n-1 >= k")


def _hitting_time_connectivity(trace: ProcessTrace) -> int:
    """Smallest m with G_m connected, via incremental union-find."""
    parent = list(range(trace.n))
    rank = [0] * trace.n
    ncomp = trace.n

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for step, (u, v) in enumerate(trace.iter_pairs(), start=1):
        ru, rv = find(u), find(v)
        if ru != rv:
            if rank[ru] < rank[rv]:
                ru, rv = rv, ru
            parent[rv] = ru
            if rank[ru] == rank[rv]:
                rank[ru] += 1
            ncomp -= 1
            if ncomp == 1:
                return step
    raise AssertionError("unreachable: K_n is connected")


def hitting_time_k_connectivity(trace: ProcessTrace, k: int) -> int:
    """Smallest m with G_m k-connected.

    k = 1 is maintained incrementally (union-find). For k >= 2 we binary
    search over m, which is valid because k-connectivity is monotone under
    edge addition; the upper bracket is found by doubling from the
    min-degree hitting time to keep graph prefixes short.
    """
    from .graphs import is_k_connected

    if not (1 <= k <= trace.n - 1):
        raise ValueError(f"k must be in [1, {trace.n - 1}], got {k}")
    if k == 1:
        return _hitting_time_connectivity(trace)
    N = trace.num_pairs
    lo = hitting_time_min_degree(trace, k)
    hi = lo
    while hi < N and not is_k_connected(graph_at(trace, hi), k):
        lo = hi + 1
        hi = min(N, max(2 * hi, hi + trace.n))
    while lo < hi:
        mid = (lo + hi) // 2
        if is_k_connected(graph_at(trace, mid), k):
            hi = mid
        else:
            lo = mid + 1
    return lo


def sample_gnm(n: int, m: int, seed: int) -> Graph:
    """Uniform graph with n vertices and m edges."""
    trace = sample_process(n, seed) if n >= 2 else ProcessTrace(n, seed)
    if m > trace.num_pairs:
        raise ValueError(f"m={m} exceeds the {trace.num_pairs} available pairs")
    return graph_at(trace, m)


def sample_gnp(n: int, p: float, seed: int) -> Graph:
    """Binomial random graph; geometric skipping, runtime ~ output edges."""
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"p must be in [0, 1], got {p}")
    N = pair_count(n)
    if p == 0.0 or N == 0:
        return _graph_from_pairs(n, ())
    if p == 1.0:
        return _graph_from_pairs(n, (pair_from_index(n, i) for i in range(N)))
    log_q = math.log1p(-p)
    doubles = _uniform_doubles(seed)
    pairs = []
    idx = -1
    while True:
        u = next(doubles)
        if u <= 0.0:
            break
        idx += 1 + int(math.log(u) / log_q)
        if idx >= N:
            break
        pairs.append(pair_from_index(n, idx))
    return _graph_from_pairs(n, pairs)


@dataclass(frozen=True)
class CoupledSample:
    """G- ~ G(n,p0) together with G+ = G- union G(n,p'), marginally G(n,p1)."""

    g_minus: Graph
    g_plus: Graph
    p0: float
    p_prime: float
    p1: float


def sample_coupled(n: int, p0: float, p_prime: float, seed: int) -> CoupledSample:
    """Sample the coupled pair from two independent derived streams."""
    for name, p in (("p0", p0), ("p_prime", p_prime)):
        if not (0.0 <= p <= 1.0):
            raise ValueError(f"{name} must be in [0, 1], got {p}")
    g_minus = sample_gnp(n, p0, derive_seed(seed, 0))
    extra = sample_gnp(n, p_prime, derive_seed(seed, 1))
    merged = set(g_minus.edges) | set(extra.edges)
    g_plus = _graph_from_pairs(n, merged)
    if p_prime == 0.0:
        p1 = p0
    elif p0 == 0.0:
        p1 = p_prime
    else:
        p1 = 1.0 - (1.0 - p0) * (1.0 - p_prime)
    return CoupledSample(g_minus, g_plus, p0, p_prime, p1)
