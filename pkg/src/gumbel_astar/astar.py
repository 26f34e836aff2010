"""A* Sampling and its variants.

All searches run over one realization of the Top-Down construction for the
proposal. Node draws (truncated Gumbel, then location) are taken from the
caller's generator in node-creation order, so variants that create the same
nodes in the same order see identical values.
"""

import heapq
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .construction import in_order_stream
from .gumbel import sample_gumbel, sample_trunc_gumbel
from .regions import partition

DEFAULT_MAX_EXPANSIONS = 10 ** 7


@dataclass
class SearchStats:
    likelihood_evals: int = 0
    bound_evals: int = 0
    nodes_expanded: int = 0
    iterations: int = 0
    fallback: bool = False

    def add(self, other):
        self.likelihood_evals += other.likelihood_evals
        self.bound_evals += other.bound_evals
        self.nodes_expanded += other.nodes_expanded
        self.iterations += other.iterations
        self.fallback = self.fallback or other.fallback

    def cost(self, bound_weight=2.0):
        return self.likelihood_evals + bound_weight * self.bound_evals


@dataclass
class ExactSample:
    point: np.ndarray
    max_value: float
    stats: SearchStats
    # largest G + M(B) left on the queue at termination (-inf if empty)
    frontier_max: float = -math.inf
    frontier: list = field(default_factory=list, repr=False)


class SearchAborted(RuntimeError):
    """Raised when a run exceeds its expansion cap."""

    def __init__(self, message, stats):
        super().__init__(message)
        self.stats = stats


class _Node:
    __slots__ = ("index", "parent", "g", "x", "region", "log_mass", "bound", "o", "cell",
                 "floor", "pending")

    def __init__(self, index, parent, g, x, region, log_mass, cell=None):
        self.index = index
        self.parent = parent
        self.g = g
        self.x = x
        self.region = region
        self.log_mass = log_mass
        self.bound = None
        self.o = None
        self.cell = cell
        # every process point in the region above ``floor`` is realized:
        # this node's own point plus ``pending``
        self.floor = g
        self.pending = []


class _Cell:
    """A region of a persistent partition with its cached bound and split."""

    __slots__ = ("region", "bound", "kids")

    def __init__(self, region):
        self.region = region
        self.bound = None
        self.kids = None


class _Search:
    def __init__(self, target, root, rng, max_expansions, trace, store=None):
        self.target = target
        self.proposal = target.proposal
        self.root = target.root if root is None else root
        self.rng = np.random.default_rng() if rng is None else rng
        self.max_expansions = max_expansions
        self.trace = trace
        self.store = store
        self.stats = SearchStats()
        self.lb = -math.inf
        self.best = None
        self.count = 0
        self.heap = []
        self.tie = itertools.count()

    # -- bookkeeping -------------------------------------------------------
    def log(self, action, node, extra=""):
        if self.trace is None:
            return
        o = "nan" if node.o is None else repr(node.o)
        m = "nan" if node.bound is None else repr(node.bound)
        parent = "-" if node.parent is None else node.parent
        self.trace.write(f"{action} {node.index} {parent} {node.g!r} {o} {m} "
                         f"{node.region.to_text()}{extra}\n")

    def bound(self, node):
        cell = node.cell
        if cell is not None and cell.bound is not None:
            node.bound = cell.bound
            return node.bound
        self.stats.bound_evals += 1
        node.bound = float(self.target.bounder(node.region))
        if cell is not None:
            cell.bound = node.bound
        return node.bound

    def lower(self, node):
        if node.o is None:
            self.stats.likelihood_evals += 1
            node.o = float(self.target.o(node.x))
        value = node.g + node.o
        if self.lb < value:
            self.lb = value
            self.best = node
        return value

    def make(self, region, log_mass, bound, parent, cell):
        if bound == math.inf:
            g = sample_gumbel(log_mass, self.rng)
        else:
            g = sample_trunc_gumbel(log_mass, bound, self.rng)
        x = self.proposal.sample(region, self.rng)
        self.count += 1
        return _Node(self.count, parent, g, x, region, log_mass, cell)

    def make_root(self):
        lm = self.proposal.log_mass(self.root)
        if not math.isfinite(lm):
            raise ValueError(f"root region {self.root} must have finite positive proposal mass")
        cell = None if self.store is None else self.store
        node = self.make(self.root, lm, math.inf, None, cell)
        self.bound(node)
        return node

    def children(self, node):
        cell = node.cell
        if cell is not None:
            if cell.kids is None:
                cell.kids = [_Cell(r) for r in partition(node.region, node.x)]
            pairs = [(c.region, c) for c in cell.kids]
        else:
            pairs = [(r, None) for r in partition(node.region, node.x)]
        pending = node.pending
        out = []
        for region, c in pairs:
            lm = self.proposal.log_mass(region)
            if lm == -math.inf:
                continue
            if pending:
                inside = [q for q in pending if region.contains(q.x)]
                if inside:
                    pending = [q for q in pending if not region.contains(q.x)]
                    out.append(self.adopt(inside, region, lm, node, c))
                    continue
            out.append(self.make(region, lm, node.floor, node.index, c))
        return out

    def adopt(self, points, region, log_mass, parent, cell):
        """Child whose maximum is an already realized point."""
        points.sort(key=lambda q: q.g, reverse=True)
        top = points[0]
        top.parent = parent.index
        top.region = region
        top.log_mass = log_mass
        top.cell = cell
        top.floor = parent.floor
        top.pending = points[1:]
        return top

    def deepen(self, p, k):
        """Realize the next ``k`` process points in ``p``'s region, in
        decreasing order, and evaluate a lower bound at each."""
        for _ in range(k):
            g = sample_trunc_gumbel(p.log_mass, p.floor, self.rng)
            x = self.proposal.sample(p.region, self.rng)
            self.count += 1
            q = _Node(self.count, p.index, g, x, None, None)
            p.floor = g
            p.pending.append(q)
            self.lower(q)

    def push(self, node):
        heapq.heappush(self.heap, (-(node.g + node.bound), next(self.tie), node))
        self.log("push", node)

    def top(self):
        return -self.heap[0][0] if self.heap else -math.inf

    def tick(self):
        self.stats.iterations += 1
        self.stats.nodes_expanded += 1
        if self.stats.nodes_expanded > self.max_expansions:
            raise SearchAborted(
                f"search exceeded {self.max_expansions} node expansions "
                f"(lower bound {self.lb}, top priority {self.top()})", self.stats)

    # -- one expansion -------------------------------------------------------
    def expand(self, p, extra=0):
        """Split ``p`` and return the children that survive both pruning tests.

        ``extra`` additional lower bounds are drawn inside ``p`` first.
        """
        if extra:
            self.deepen(p, extra)
        viable = []
        for c in self.children(p):
            if self.lb < c.g + p.bound:
                self.bound(c)
                if self.lb < c.g + c.bound:
                    viable.append(c)
                else:
                    self.log("prune-own-bound", c)
            else:
                self.log("prune-parent-bound", c)
        return viable

    def extra_draws(self, lb_draws, lb_rate):
        if lb_rate is not None:
            return int(self.rng.poisson(1.0 / lb_rate - 1.0))
        return lb_draws - 1

    def run_queue(self, lb_draws=1, lb_rate=None):
        while self.heap and self.lb < self.top():
            p = heapq.heappop(self.heap)[2]
            self.tick()
            self.lower(p)
            self.log("expand", p)
            extra = self.extra_draws(lb_draws, lb_rate)
            for c in self.expand(p, extra):
                self.push(c)

    def result(self):
        if self.best is None:
            raise RuntimeError("search finished without evaluating any node")
        self.log("accept", self.best)
        frontier = [t[2] for t in self.heap]
        return ExactSample(np.array(self.best.x, dtype=float), self.lb, self.stats,
                           self.top(), [(n.g, n.bound, n.region) for n in frontier])


def astar_sample(target, root=None, rng=None, max_expansions=DEFAULT_MAX_EXPANSIONS, trace=None):
    """Draw one exact sample from ``exp(i(x) + o(x))`` restricted to ``root``.

    Returns an :class:`ExactSample` whose ``max_value`` is the final lower
    bound, itself a Gumbel(log Z) draw.
    """
    return astar_sample_multi_lb(target, root, 1, rng, max_expansions, trace)


def astar_sample_multi_lb(target, root=None, lb_draws=1, rng=None,
                          max_expansions=DEFAULT_MAX_EXPANSIONS, trace=None):
    """A* Sampling drawing several lower bounds per node expansion.

    ``lb_draws`` is either an integer >= 1 (fixed draws per expansion) or a
    float rate ``r`` in (0, 1), giving ``Poisson(1/r - 1) + 1`` draws.

    The extra draws continue the process inside the expanded region in
    decreasing order below its maximum. Each one later becomes the maximum of
    whichever child region it falls in, so the realization, and hence the
    output law, is that of plain A*.
    """
    lb_rate = None
    if isinstance(lb_draws, float) and not float(lb_draws).is_integer():
        if not 0.0 < lb_draws <= 1.0:
            raise ValueError("a fractional lb_draws must be a rate in (0, 1]")
        lb_rate = lb_draws
    else:
        lb_draws = int(lb_draws)
        if lb_draws < 1:
            raise ValueError("lb_draws must be >= 1")
    s = _Search(target, root, rng, max_expansions, trace)
    s.push(s.make_root())
    s.run_queue(lb_draws, lb_rate)
    return s.result()


def drill_down_sample(target, root=None, rng=None, max_expansions=DEFAULT_MAX_EXPANSIONS, trace=None):
    """Queue-free A* for 1-D targets whose ``o`` is unimodal.

    Keeps a single active node. If both children of a split survive pruning
    (the target was not unimodal after all) the run continues as ordinary A*
    from the current state and ``stats.fallback`` is set.
    """
    s = _Search(target, root, rng, max_expansions, trace)
    active = s.make_root()
    while active is not None:
        s.tick()
        s.lower(active)
        s.log("expand", active)
        viable = s.expand(active)
        if len(viable) <= 1:
            active = viable[0] if viable else None
            continue
        s.stats.fallback = True
        for c in viable:
            s.push(c)
        s.run_queue()
        break
    return s.result()


def global_bound_sample(target, root=None, M_global=None, rng=None, stream=None,
                        max_iterations=DEFAULT_MAX_EXPANSIONS):
    """A* with a single global bound, searching the In-Order stream.

    ``stream`` may supply any iterator of ``(G, X)`` pairs (or nodes with
    ``gumbel`` and ``location``) in decreasing order of G; by default the
    In-Order construction for the proposal is used.
    """
    root = target.root if root is None else root
    stats = SearchStats()
    if M_global is None:
        stats.bound_evals += 1
        M_global = float(target.bounder(root))
    if stream is None:
        stream = in_order_stream(target.proposal, root, rng)

    def pairs():
        for item in stream:
            if hasattr(item, "gumbel"):
                yield item.gumbel, item.location
            else:
                yield item

    it = pairs()
    lb, best = -math.inf, None
    g, x = next(it)
    while lb < g + M_global:
        stats.iterations += 1
        stats.nodes_expanded += 1
        if stats.iterations > max_iterations:
            raise SearchAborted(f"global-bound search exceeded {max_iterations} iterations", stats)
        stats.likelihood_evals += 1
        value = g + float(target.o(x))
        if lb < value:
            lb, best = value, x
        g, x = next(it)
    return ExactSample(np.array(best, dtype=float), lb, stats, g + M_global)


class BoundStore:
    """Persistent partition with cached bounds, shared across samples."""

    def __init__(self, root):
        self.root_cell = _Cell(root)

    def cells(self):
        out, todo = [], [self.root_cell]
        while todo:
            c = todo.pop()
            out.append(c)
            if c.kids:
                todo.extend(c.kids)
        return out


def multi_sample_reuse(target, root=None, n_samples=1, rng=None, store=None,
                       max_expansions=DEFAULT_MAX_EXPANSIONS, rngs=None):
    """Draw ``n_samples`` independent exact samples, reusing bounds.

    Each sample is a fresh A* search (fresh Gumbels and locations) over a
    persistent partition: a region that was split by an earlier sample is
    split the same way again, and a bound computed once is never recomputed.
    ``rngs`` optionally supplies one generator per sample.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    root = target.root if root is None else root
    store = BoundStore(root) if store is None else store
    out = []
    for i in range(n_samples):
        r = rngs[i] if rngs is not None else rng
        s = _Search(target, root, r, max_expansions, None, store.root_cell)
        s.push(s.make_root())
        s.run_queue()
        out.append(s.result())
    return out
