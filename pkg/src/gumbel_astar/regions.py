"""Axis-aligned hyperrectangles, possibly with infinite extent."""

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Region:
    """A box ``[lower, upper]`` in D dimensions.

    Edges may be infinite. Regions are immutable and hashable so they can key
    bound caches.
    """

    lower: tuple
    upper: tuple

    def __post_init__(self):
        lower = tuple(float(v) for v in self.lower)
        upper = tuple(float(v) for v in self.upper)
        if len(lower) == 0 or len(lower) != len(upper):
            raise ValueError("lower and upper must have the same non-zero length")
        for lo, hi in zip(lower, upper):
            if not lo < hi:
                raise ValueError(f"degenerate or inverted side [{lo}, {hi}]")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def real_line(cls, dim=1):
        return cls((-math.inf,) * dim, (math.inf,) * dim)

    @classmethod
    def box(cls, lo, hi, dim):
        return cls((lo,) * dim, (hi,) * dim)

    @property
    def dim(self):
        return len(self.lower)

    @property
    def widths(self):
        return tuple(hi - lo for lo, hi in zip(self.lower, self.upper))

    @property
    def is_finite(self):
        return all(math.isfinite(v) for v in self.lower + self.upper)

    def contains(self, point):
        point = _as_tuple(point)
        if len(point) != self.dim:
            raise ValueError(f"point has dimension {len(point)}, region has {self.dim}")
        return all(lo <= p <= hi for lo, p, hi in zip(self.lower, point, self.upper))

    def split_dim(self):
        """Dimension with the largest side; infinite sides win, lowest index on ties."""
        widths = self.widths
        best = 0
        for d in range(1, len(widths)):
            if widths[d] > widths[best]:
                best = d
        return best

    def split_at(self, point):
        """Split along the widest dimension at ``point``.

        Returns ``(left, right, split_dim)``.
        """
        point = _as_tuple(point)
        if len(point) != self.dim:
            raise ValueError(f"point has dimension {len(point)}, region has {self.dim}")
        if not all(lo < p < hi for lo, p, hi in zip(self.lower, point, self.upper)):
            raise ValueError(f"split point {point} is not strictly inside {self}")
        d = self.split_dim()
        cut = point[d]
        left_upper = self.upper[:d] + (cut,) + self.upper[d + 1:]
        right_lower = self.lower[:d] + (cut,) + self.lower[d + 1:]
        return Region(self.lower, left_upper), Region(right_lower, self.upper), d

    def to_text(self):
        return " ".join(f"{_fmt(lo)},{_fmt(hi)}" for lo, hi in zip(self.lower, self.upper))

    @classmethod
    def from_text(cls, text):
        lower, upper = [], []
        for pair in text.split():
            lo, hi = pair.split(",")
            lower.append(float(lo))
            upper.append(float(hi))
        return cls(tuple(lower), tuple(upper))

    def __str__(self):
        return "x".join(f"[{_fmt(lo)},{_fmt(hi)}]" for lo, hi in zip(self.lower, self.upper))


def split_at(region, point):
    return region.split_at(point)


def contains(region, point):
    return region.contains(point)


def _as_tuple(point):
    try:
        return tuple(float(v) for v in point)
    except TypeError:
        return (float(point),)


def _fmt(value):
    if value == math.inf:
        return "inf"
    if value == -math.inf:
        return "-inf"
    return repr(float(value))


def partition(region, point):
    """Split ``region`` at ``point``; if the point sits on an edge (possible
    after rounding in very narrow boxes) the offending coordinates are moved
    to interior values first."""
    point = _as_tuple(point)
    try:
        left, right, _ = region.split_at(point)
        return left, right
    except ValueError:
        if len(point) != region.dim:
            raise
    safe = []
    for lo, p, hi in zip(region.lower, point, region.upper):
        if lo < p < hi:
            safe.append(p)
        elif math.isfinite(lo) and math.isfinite(hi):
            safe.append(0.5 * (lo + hi))
        elif math.isfinite(lo):
            safe.append(lo + max(1.0, abs(lo)))
        elif math.isfinite(hi):
            safe.append(hi - max(1.0, abs(hi)))
        else:
            safe.append(0.0)
    left, right, _ = region.split_at(safe)
    return left, right
