"""Lazy constructions of the Gumbel process.

``TopDownStream`` realizes the heap of (G_k, X_k, B_k) nodes by recursively
splitting regions at the sampled locations; ``in_order_stream`` produces the
same values in strictly decreasing order without partitioning space.
"""

import heapq
import itertools
import math
from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .gumbel import sample_gumbel, sample_trunc_gumbel
from .regions import Region, partition


@dataclass
class HeapNode:
    index: int
    gumbel: float
    location: np.ndarray
    region: Region
    parent: Optional[int] = None
    log_mass: float = 0.0

    def trace_line(self):
        parent = "-" if self.parent is None else str(self.parent)
        xs = " ".join(repr(float(v)) for v in self.location)
        return f"{self.index} {parent} {self.gumbel!r} {xs} {self.region.to_text()}"


def _root_log_mass(proposal, root):
    lm = proposal.log_mass(root)
    if not math.isfinite(lm):
        raise ValueError(f"root region {root} must have finite positive proposal mass (log mass {lm})")
    return lm


class TopDownStream:
    """Demand-driven realization of the Top-Down construction.

    Iterating yields :class:`HeapNode` objects. With ``order="breadth-first"``
    nodes come out in the queue order of the construction (root, then the
    children of each popped node). With ``order="descending"`` the frontier is
    a max-heap on G and each node is yielded when popped, so values arrive in
    decreasing order; its children are realized on the following request.
    """

    def __init__(self, proposal, root=None, rng=None, order="breadth-first", trace=None):
        if order not in ("breadth-first", "descending"):
            raise ValueError(f"unknown order {order!r}")
        self.proposal = proposal
        self.root = proposal.support() if root is None else root
        self.rng = np.random.default_rng() if rng is None else rng
        self.order = order
        self.trace = trace
        self._root_lm = _root_log_mass(proposal, self.root)
        self._count = 0
        self._started = False
        self._ready = deque()
        self._frontier = deque() if order == "breadth-first" else []
        self._tie = itertools.count()
        self._last_popped = None
        self.nodes = []

    def _make(self, region, log_mass, bound, parent):
        if bound == math.inf:
            g = sample_gumbel(log_mass, self.rng)
        else:
            g = sample_trunc_gumbel(log_mass, bound, self.rng)
        x = self.proposal.sample(region, self.rng)
        self._count += 1
        node = HeapNode(self._count, g, x, region, parent, log_mass)
        self.nodes.append(node)
        if self.trace is not None:
            self.trace.write(node.trace_line() + "\n")
        return node

    def children(self, node):
        """Realize the children of ``node`` (in L, R order)."""
        out = []
        for child in partition(node.region, node.location):
            lm = self.proposal.log_mass(child)
            if lm == -math.inf:
                continue
            out.append(self._make(child, lm, node.gumbel, node.index))
        return out

    def _push(self, node):
        if self.order == "breadth-first":
            self._frontier.append(node)
        else:
            heapq.heappush(self._frontier, (-node.gumbel, next(self._tie), node))

    def __iter__(self):
        return self

    def __next__(self):
        if not self._started:
            self._started = True
            root = self._make(self.root, self._root_lm, math.inf, None)
            self._push(root)
            if self.order == "breadth-first":
                return root
        if self.order == "breadth-first":
            while not self._ready:
                if not self._frontier:
                    raise StopIteration
                p = self._frontier.popleft()
                for c in self.children(p):
                    self._push(c)
                    self._ready.append(c)
            return self._ready.popleft()
        if self._last_popped is not None:
            for c in self.children(self._last_popped):
                self._push(c)
            self._last_popped = None
        if not self._frontier:
            raise StopIteration
        node = heapq.heappop(self._frontier)[2]
        self._last_popped = node
        return node

    def frontier_max(self):
        """Largest G among realized nodes whose children are not yet realized."""
        if self.order == "breadth-first":
            pending = list(self._frontier)
        else:
            pending = [t[2] for t in self._frontier]
            if self._last_popped is not None:
                pending.append(self._last_popped)
        return max((n.gumbel for n in pending), default=-math.inf)

    def certified_top(self, k):
        """Realize breadth-first, one full level at a time, until the ``k``
        largest values are certified, and return them in decreasing order."""
        if self.order != "breadth-first":
            raise ValueError("certified_top needs a breadth-first stream")
        if not self._started:
            next(self)
        while True:
            values = sorted((n.gumbel for n in self.nodes), reverse=True)
            if len(values) >= k and values[k - 1] >= self.frontier_max():
                return values[:k]
            if not self._frontier:
                return values[:k]
            level = len(self._frontier)
            for _ in range(level):
                p = self._frontier.popleft()
                for c in self.children(p):
                    self._frontier.append(c)

    def max_in(self, region):
        """Largest realized G among nodes whose location lies in ``region``."""
        best = -math.inf
        for n in self.nodes:
            if n.gumbel > best and region.contains(n.location):
                best = n.gumbel
        return best

    def certified_max_in(self, region):
        """Realize until the process maximum over ``region`` is known, and
        return ``(G, X)``. Only frontier nodes overlapping ``region`` whose G
        could still beat the realized maximum are split."""
        if self.order != "breadth-first":
            raise ValueError("certified_max_in needs a breadth-first stream")
        if not self._started:
            next(self)
        while True:
            best, arg = -math.inf, None
            for n in self.nodes:
                if n.gumbel > best and region.contains(n.location):
                    best, arg = n.gumbel, n.location
            open_nodes = [n for n in self._frontier
                          if n.gumbel > best and _overlaps(n.region, region)]
            if not open_nodes:
                return best, arg
            opened = {id(n) for n in open_nodes}
            self._frontier = deque(n for n in self._frontier if id(n) not in opened)
            for p in open_nodes:
                for c in self.children(p):
                    self._frontier.append(c)


def _overlaps(a, b):
    return all(lo1 < hi2 and lo2 < hi1
               for lo1, hi1, lo2, hi2 in zip(a.lower, a.upper, b.lower, b.upper))


def top_down_stream(proposal, root=None, rng=None, order="breadth-first", trace=None):
    return TopDownStream(proposal, root, rng, order, trace)


def in_order_stream(proposal, root=None, rng=None):
    """Yield ``(G_k, X_k)`` pairs in strictly decreasing order of G."""
    root = proposal.support() if root is None else root
    rng = np.random.default_rng() if rng is None else rng
    lm = _root_log_mass(proposal, root)
    g = sample_gumbel(lm, rng)
    x = proposal.sample(root, rng)
    while True:
        yield g, x
        g = sample_trunc_gumbel(lm, g, rng)
        x = proposal.sample(root, rng)
