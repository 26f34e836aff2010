"""Baselines: rejection sampling, OS* with piecewise-constant bounds, and a
random-direction slice sampler."""

import math
from dataclasses import dataclass, field

import numpy as np

from .astar import DEFAULT_MAX_EXPANSIONS, SearchAborted, SearchStats
from .gumbel import uniform_open
from .regions import partition

REFINE_STRATEGIES = ("at-rejected-point", "largest-mass")


def _trace(trace, action, step, piece, o, bound, region):
    # same fields as the A* trace: action id parent G o M region
    o = "nan" if o is None else repr(o)
    trace.write(f"{action} {step} {piece} nan {o} {bound!r} {region.to_text()}\n")


def rejection_sample(target, root=None, M_global=None, rng=None,
                     max_iterations=DEFAULT_MAX_EXPANSIONS, trace=None):
    """Plain rejection sampling with proposal ``i`` and envelope ``exp(M_global)``.

    Returns ``(point, stats)``.
    """
    root = target.root if root is None else root
    rng = np.random.default_rng() if rng is None else rng
    stats = SearchStats()
    if M_global is None:
        stats.bound_evals += 1
        M_global = float(target.bounder(root))
    proposal = target.proposal
    while True:
        stats.iterations += 1
        if stats.iterations > max_iterations:
            raise SearchAborted(f"rejection sampling exceeded {max_iterations} proposals", stats)
        x = proposal.sample(root, rng)
        stats.likelihood_evals += 1
        o = float(target.o(x))
        accept = math.log(uniform_open(rng)) <= o - M_global
        if trace is not None:
            _trace(trace, "propose", stats.iterations, "-", None, M_global, root)
            _trace(trace, "accept" if accept else "reject", stats.iterations, "-", o, M_global, root)
        if accept:
            return np.array(x, dtype=float), stats


@dataclass
class Piece:
    region: object
    bound: float
    log_mass: float

    @property
    def log_weight(self):
        return self.log_mass + self.bound


@dataclass
class PieceTable:
    """Partition of the root into pieces carrying constant bounds."""

    pieces: list = field(default_factory=list)

    def log_weights(self):
        return np.array([p.log_weight for p in self.pieces])

    def choose(self, rng):
        lw = self.log_weights()
        w = np.exp(lw - lw.max())
        cdf = np.cumsum(w)
        u = uniform_open(rng) * cdf[-1]
        return min(int(np.searchsorted(cdf, u, side="right")), len(self.pieces) - 1)

    def total_log_mass(self):
        lm = np.array([p.log_mass for p in self.pieces])
        m = lm.max()
        return float(m + np.log(np.exp(lm - m).sum()))


def _new_pieces(target, regions, stats):
    out = []
    for r in regions:
        lm = target.proposal.log_mass(r)
        stats.bound_evals += 1
        out.append(Piece(r, float(target.bounder(r)), lm))
    return out


def osstar_sample(target, root=None, refine="at-rejected-point", refine_rate=1.0, rng=None,
                  pieces=None, max_iterations=DEFAULT_MAX_EXPANSIONS, trace=None):
    """OS* adaptive rejection sampling with piecewise-constant bounds.

    Each step picks a piece with probability proportional to
    ``nu(B) exp(M(B))``, proposes from the proposal restricted to it and
    accepts with probability ``exp(o(x) - M(B))``. On a rejection, with
    probability ``refine_rate``, a piece is split: the proposing piece at the
    rejected point (``"at-rejected-point"``) or the piece of largest proposal
    mass at a fresh draw inside it (``"largest-mass"``).

    Passing an existing :class:`PieceTable` continues from its refinement.
    Returns ``(point, stats, pieces)``.
    """
    if refine not in REFINE_STRATEGIES:
        raise ValueError(f"refine must be one of {REFINE_STRATEGIES}, got {refine!r}")
    if not 0.0 < refine_rate <= 1.0:
        raise ValueError("refine_rate must be in (0, 1]")
    root = target.root if root is None else root
    rng = np.random.default_rng() if rng is None else rng
    stats = SearchStats()
    if pieces is None:
        pieces = PieceTable(_new_pieces(target, [root], stats))
    proposal = target.proposal
    while True:
        stats.iterations += 1
        if stats.iterations > max_iterations:
            raise SearchAborted(f"OS* exceeded {max_iterations} proposals", stats)
        i = pieces.choose(rng)
        piece = pieces.pieces[i]
        x = proposal.sample(piece.region, rng)
        stats.likelihood_evals += 1
        o = float(target.o(x))
        accept = math.log(uniform_open(rng)) <= o - piece.bound
        if trace is not None:
            _trace(trace, "propose", stats.iterations, i, None, piece.bound, piece.region)
            _trace(trace, "accept" if accept else "reject", stats.iterations, i, o, piece.bound,
                   piece.region)
        if accept:
            return np.array(x, dtype=float), stats, pieces
        if refine_rate < 1.0 and not rng.random() < refine_rate:
            continue
        if refine == "largest-mass":
            i = int(np.argmax([p.log_mass for p in pieces.pieces]))
            piece = pieces.pieces[i]
            x = proposal.sample(piece.region, rng)
        stats.nodes_expanded += 1
        children = _new_pieces(target, partition(piece.region, x), stats)
        pieces.pieces[i] = children[0]
        pieces.pieces.extend(children[1:])
        if trace is not None:
            _trace(trace, "refine", stats.iterations, i, None, piece.bound, piece.region)


def slice_sample(log_density, x0, n_steps, rng=None, width=1.0, max_steps_out=64, stats=None):
    """Random-direction slice sampling with stepping out and shrinkage.

    Returns an array of shape ``(n_steps, D)``. ``stats.likelihood_evals`` is
    incremented per density evaluation when ``stats`` is given.
    """
    rng = np.random.default_rng() if rng is None else rng
    x = np.atleast_1d(np.asarray(x0, dtype=float)).copy()
    stats = SearchStats() if stats is None else stats

    def f(z):
        stats.likelihood_evals += 1
        return float(log_density(z))

    fx = f(x)
    if not math.isfinite(fx):
        raise ValueError(f"log density at x0 must be finite, got {fx}")
    dim = x.size
    chain = np.empty((n_steps, dim))
    for t in range(n_steps):
        stats.iterations += 1
        direction = rng.standard_normal(dim)
        direction /= np.linalg.norm(direction)
        level = fx + math.log(uniform_open(rng))
        lo = -width * uniform_open(rng)
        hi = lo + width
        for _ in range(max_steps_out):
            if f(x + lo * direction) <= level:
                break
            lo -= width
        for _ in range(max_steps_out):
            if f(x + hi * direction) <= level:
                break
            hi += width
        while True:
            s = lo + (hi - lo) * uniform_open(rng)
            z = x + s * direction
            fz = f(z)
            if fz > level:
                x, fx = z, fz
                break
            if s < 0.0:
                lo = s
            else:
                hi = s
        chain[t] = x
    return chain
