"""Sampling geometries in the time-frequency plane and their density.

Points are stored as rows ``(t, w)`` (for d-dimensional product sets, the d
time coordinates followed by the d frequency coordinates).  Every finite set
keeps a descriptor from which its generator can be rebuilt, so the counting
function can be evaluated beyond the truncation radius without enumeration.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

__all__ = [
    "zroot_seq",
    "SamplingSet",
    "GammaStar",
    "LineConfig",
    "SqrtLattice",
    "RootLine",
    "ParallelLines",
    "IntersectingLines",
    "IrregularLine",
    "generator_from_descriptor",
    "sqrt_lattice",
    "parallel_lines_set",
    "intersecting_lines_set",
    "irregular_line_set",
    "single_line_set",
    "product_set",
    "grid_set",
    "gamma_star",
    "counting_function",
    "counting_curve",
    "density_estimate",
    "line_distance",
    "ratio_rationality",
    "uniform_density",
]

COINCIDE_TOL = 1e-12


def zroot_seq(nu: float, a: float, n_max: int) -> np.ndarray:
    """Sorted ``{+-a n**nu : 0 <= n <= n_max}`` with 0 listed once."""
    if a <= 0 or nu <= 0 or n_max < 0:
        raise ValueError("need a > 0, nu > 0 and n_max >= 0")
    pos = a * np.arange(1, n_max + 1, dtype=float) ** nu
    return np.concatenate([-pos[::-1], [0.0], pos])


def ratio_rationality(x: float, q_max: int = 1000, tol: float = 1e-9):
    """Smallest-denominator ``(p, q)`` with ``|x - p/q| <= tol`` and ``q <= q_max``, else None.

    The simplest fraction in ``[x - tol, x + tol]`` is found by the
    continued-fraction descent of the interval end points (exact rationals).
    A result only flags that ``x`` is numerically close to a rational.
    """
    if not math.isfinite(x) or q_max < 1:
        raise ValueError("x must be finite and q_max >= 1")
    fx, ft = Fraction(x), Fraction(tol)
    frac = _simplest_in(fx - ft, fx + ft, fx)
    if frac.denominator > q_max:
        return None
    return frac.numerator, frac.denominator


def _simplest_in(lo: Fraction, hi: Fraction, target: Fraction) -> Fraction:
    # closed interval [lo, hi]
    c = math.ceil(lo)
    if c <= hi:
        # several integers may fit: take the one nearest to the target
        return Fraction(min(max(round(target), c), math.floor(hi)))
    n = math.floor(lo)
    return n + 1 / _simplest_in(1 / (hi - n), 1 / (lo - n), 1 / (target - n))


def line_distance(anchor_l, anchor_3, theta0: float) -> float:
    """Distance between the parallel lines through two anchors with direction ``(sin theta0, cos theta0)``."""
    (tl, wl), (t3, w3) = anchor_l, anchor_3
    return abs((wl - w3) * math.sin(theta0) - (tl - t3) * math.cos(theta0))


def uniform_density(lambdas, nu: float = 0.5) -> float:
    """Finite-sample value of ``lambda_n / n**nu`` at the last index."""
    lam = np.asarray(lambdas, dtype=float)
    if lam.size == 0:
        raise ValueError("empty sequence")
    return float(lam[-1] / lam.size**nu)


def _rational_flag(x: float, q_max: int = 1000, tol: float = 1e-9) -> dict:
    pq = ratio_rationality(x, q_max, tol)
    return {"value": x, "rational": pq is not None, "p": None if pq is None else pq[0], "q": None if pq is None else pq[1]}


@dataclass
class SamplingSet:
    """Finite truncation of a sampling geometry."""

    points: np.ndarray
    kind: str = "explicit"
    params: dict = field(default_factory=dict)
    R: float = math.inf
    flags: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.size == 0:
            pts = pts.reshape(0, 2 if pts.ndim < 2 else pts.shape[1])
        if pts.ndim != 2 or pts.shape[1] % 2:
            raise ValueError("points must have shape (M, 2d)")
        self.points = pts

    @property
    def dim(self) -> int:
        return self.points.shape[1] // 2

    def __len__(self):
        return len(self.points)

    @property
    def t(self):
        return self.points[:, : self.dim]

    @property
    def w(self):
        return self.points[:, self.dim :]

    @property
    def descriptor(self) -> dict:
        return {"kind": self.kind, "params": self.params, "R": self.R}

    def generator(self):
        return generator_from_descriptor(self.descriptor)

    def bounding_box(self):
        if len(self) == 0:
            return -np.ones(2 * self.dim), np.ones(2 * self.dim)
        return self.points.min(axis=0), self.points.max(axis=0)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "params": self.params,
            "R": None if math.isinf(self.R) else self.R,
            "flags": self.flags,
            "points": self.points.tolist(),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "SamplingSet":
        R = d.get("R")
        pts = np.asarray(d["points"], dtype=float)
        return cls(pts, d.get("kind", "explicit"), d.get("params", {}), math.inf if R is None else R, d.get("flags", {}))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if self.dim == 1:
            w.writerow(["t", "w"])
        else:
            w.writerow([f"t{l + 1}" for l in range(self.dim)] + [f"w{l + 1}" for l in range(self.dim)])
        for row in self.points:
            w.writerow([repr(float(x)) for x in row])
        return buf.getvalue()


@dataclass(frozen=True)
class GammaStar:
    """Complex sequence ``{w + i t : (t, w) in set}`` in source order."""

    zs: np.ndarray

    def __len__(self):
        return len(self.zs)

    def to_set(self) -> SamplingSet:
        return SamplingSet(np.column_stack([self.zs.imag, self.zs.real]))


def gamma_star(sampling_set: SamplingSet) -> GammaStar:
    if sampling_set.dim != 1:
        raise ValueError("the associated complex sequence is defined for planar sets")
    pts = sampling_set.points
    return GammaStar(pts[:, 1] + 1j * pts[:, 0])


def _dedupe(points: np.ndarray) -> np.ndarray:
    if len(points) < 2:
        return points
    key = np.round(points / COINCIDE_TOL).astype(np.int64) if np.abs(points).max() < 1e6 else np.round(points, 9)
    _, idx = np.unique(key, axis=0, return_index=True)
    return points[np.sort(idx)]


def _count_param(lo: float, hi: float, a: float, nu: float, start: int) -> int:
    """``#{n >= start : lo <= a n**nu <= hi}`` for ``0 <= lo``."""
    if hi < lo or hi < 0:
        return 0
    lo = max(lo, 0.0)
    n_hi = math.floor((hi / a) ** (1 / nu))
    while a * (n_hi + 1) ** nu <= hi:
        n_hi += 1
    while n_hi >= 0 and a * n_hi**nu > hi:
        n_hi -= 1
    n_lo = math.ceil((lo / a) ** (1 / nu))
    while n_lo > 0 and a * (n_lo - 1) ** nu >= lo:
        n_lo -= 1
    while a * n_lo**nu < lo:
        n_lo += 1
    n_lo = max(n_lo, start)
    return max(0, n_hi - n_lo + 1)


def _line_param_window(anchor, direction, r):
    """Interval of ``x`` with ``|anchor + x*direction| <= r`` or None."""
    p = np.asarray(anchor, float)
    u = np.asarray(direction, float)
    pu = float(p @ u)
    disc = pu**2 - (float(p @ p) - r * r)
    if disc < 0:
        return None
    s = math.sqrt(disc)
    return -pu - s, -pu + s


def _count_root_line(anchor, direction, a, nu, r, include_zero=True) -> int:
    win = _line_param_window(anchor, direction, r)
    if win is None:
        return 0
    lo, hi = win
    count = 0
    if include_zero and lo <= 0 <= hi:
        count += 1
    # positive params x = a n**nu, negative params x = -a n**nu
    count += _count_param(max(lo, 0.0), hi, a, nu, 1)
    count += _count_param(max(-hi, 0.0), -lo, a, nu, 1)
    return count


class _Generator:
    kind = "generator"

    def __init__(self, **params):
        self.params = params

    def descriptor(self, R):
        return {"kind": self.kind, "params": self.params, "R": R}

    def flags(self) -> dict:
        return {}

    def sample(self, R: float) -> SamplingSet:
        if R < 0:
            raise ValueError("radius must be >= 0")
        pts = self.points(R)
        if len(pts):
            pts = pts[np.linalg.norm(pts, axis=1) <= R * (1 + 1e-15)]
        return SamplingSet(_dedupe(pts), self.kind, dict(self.params), R, self.flags())

    def points(self, R):  # pragma: no cover - abstract
        raise NotImplementedError

    def count(self, r: float) -> int:
        """Exact ``#{points with |p| <= r}``."""
        return len(self.sample(r))

    @property
    def coverage(self) -> float:
        return math.inf


class SqrtLattice(_Generator):
    kind = "sqrt-lattice"

    def __init__(self, a: float, b: float):
        if a <= 0 or b <= 0:
            raise ValueError("need a > 0 and b > 0")
        super().__init__(a=a, b=b)
        self.a, self.b = a, b

    def points(self, R):
        a, b = self.a, self.b
        m_max = int(math.floor((R / a) ** 2)) + 1
        ms = np.arange(m_max + 1)
        out = []
        for m in ms:
            rest = R * R - a * a * m
            if rest < 0:
                break
            n_max = int(math.floor(rest / (b * b))) + 1
            ns = np.arange(n_max + 1)
            ts = a * math.sqrt(m) * (np.array([1.0]) if m == 0 else np.array([1.0, -1.0]))
            ws = b * np.sqrt(ns)
            ws = np.concatenate([ws, -ws[1:]])
            tt, ww = np.meshgrid(ts, ws, indexing="ij")
            out.append(np.column_stack([tt.ravel(), ww.ravel()]))
        return np.concatenate(out) if out else np.zeros((0, 2))

    def count(self, r: float) -> int:
        if r < 0:
            return 0
        a, b = self.a, self.b
        m = np.arange(int(math.floor((r / a) ** 2)) + 2, dtype=float)
        rest = r * r - a * a * m
        m, rest = m[rest >= 0], rest[rest >= 0]
        n = np.floor(rest / (b * b))
        # boundary corrections for rounding
        n = np.where(b * b * (n + 1) <= rest, n + 1, n)
        n = np.where(b * b * n > rest, n - 1, n)
        weight = np.where(m == 0, 1, 2)
        return int(np.sum(weight * (2 * n + 1)))


class RootLine(_Generator):
    """``anchor + a Z^nu (sin theta, cos theta)``."""

    kind = "root-line"

    def __init__(self, a: float, nu: float, theta: float = 0.0, anchor=(0.0, 0.0)):
        if a <= 0 or nu <= 0:
            raise ValueError("need a > 0 and nu > 0")
        super().__init__(a=a, nu=nu, theta=theta, anchor=list(map(float, anchor)))
        self.a, self.nu, self.theta, self.anchor = a, nu, theta, np.asarray(anchor, float)

    @property
    def direction(self):
        return np.array([math.sin(self.theta), math.cos(self.theta)])

    def _ray_points(self, R):
        n_max = int(math.ceil(((R + np.linalg.norm(self.anchor)) / self.a) ** (1 / self.nu))) + 1
        x = zroot_seq(self.nu, self.a, n_max)
        return self.anchor + x[:, None] * self.direction

    def points(self, R):
        return self._ray_points(R)

    def count(self, r: float) -> int:
        return _count_root_line(self.anchor, self.direction, self.a, self.nu, r)


class ParallelLines(_Generator):
    kind = "parallel-lines"

    def __init__(self, theta0: float, anchors, a: float, nu: float):
        cfg = LineConfig(theta0, [tuple(map(float, p)) for p in anchors], a, nu)
        if len(cfg.anchors) != 3:
            raise ValueError("parallel-lines needs exactly 3 anchors")
        d1, d2 = cfg.distances
        if d1 <= COINCIDE_TOL or d2 <= COINCIDE_TOL:
            raise ValueError(f"degenerate configuration: line distances d1={d1}, d2={d2} must be > 0")
        if line_distance(cfg.anchors[0], cfg.anchors[1], theta0) <= COINCIDE_TOL:
            raise ValueError("degenerate configuration: lines 1 and 2 coincide")
        super().__init__(theta0=theta0, anchors=[list(p) for p in cfg.anchors], a=a, nu=nu)
        self.cfg = cfg
        self.lines = [RootLine(a, nu, theta0, p) for p in cfg.anchors]

    def flags(self):
        d1, d2 = self.cfg.distances
        return {"d1": d1, "d2": d2, "d1_over_d2": _rational_flag(d1 / d2)}

    def points(self, R):
        return np.concatenate([ln.points(R) for ln in self.lines])

    def count(self, r):
        return sum(ln.count(r) for ln in self.lines)


class IntersectingLines(_Generator):
    kind = "intersecting-lines"

    def __init__(self, center, theta1: float, theta2: float, a: float, nu: float):
        if abs(math.sin(theta1 - theta2)) < 1e-12:
            raise ValueError("degenerate configuration: the two lines coincide (theta1 - theta2 in pi Z)")
        super().__init__(center=list(map(float, center)), theta1=theta1, theta2=theta2, a=a, nu=nu)
        self.lines = [RootLine(a, nu, th, center) for th in (theta1, theta2)]
        self.center = np.asarray(center, float)

    def flags(self):
        th1, th2 = self.params["theta1"], self.params["theta2"]
        return {"angle_over_pi": _rational_flag((th1 - th2) / math.pi)}

    def points(self, R):
        return np.concatenate([ln.points(R) for ln in self.lines])

    def count(self, r):
        shared = 1 if np.linalg.norm(self.center) <= r else 0
        return sum(ln.count(r) for ln in self.lines) - shared


class IrregularLine(_Generator):
    """``anchor +- lambda_n (sin theta, cos theta)`` for a finite increasing list."""

    kind = "irregular-line"

    def __init__(self, lambdas, theta: float = 0.0, anchor=(0.0, 0.0)):
        lam = np.asarray(lambdas, dtype=float)
        if lam.size and (np.any(lam <= 0) or np.any(np.diff(lam) <= 0)):
            raise ValueError("lambdas must be strictly increasing positive numbers")
        super().__init__(lambdas=lam.tolist(), theta=theta, anchor=list(map(float, anchor)))
        self.lam, self.theta, self.anchor = lam, theta, np.asarray(anchor, float)

    @property
    def coverage(self) -> float:
        # beyond this radius points of the (unknown) tail could be missing
        if self.lam.size == 0:
            return math.inf
        return max(float(self.lam[-1]) - float(np.linalg.norm(self.anchor)), 0.0)

    def points(self, R):
        u = np.array([math.sin(self.theta), math.cos(self.theta)])
        x = np.concatenate([self.lam, -self.lam])
        return self.anchor + x[:, None] * u if x.size else np.zeros((0, 2))

    def sample(self, R=None):
        pts = self.points(R)
        if R is not None and len(pts):
            pts = pts[np.linalg.norm(pts, axis=1) <= R]
        return SamplingSet(_dedupe(pts), self.kind, dict(self.params), self.coverage if R is None else min(R, self.coverage))

    def count(self, r):
        pts = self.points(r)
        return int(np.sum(np.linalg.norm(pts, axis=1) <= r)) if len(pts) else 0


_KINDS = {
    "sqrt-lattice": lambda p: SqrtLattice(p["a"], p["b"]),
    "root-line": lambda p: RootLine(p["a"], p["nu"], p.get("theta", 0.0), p.get("anchor", (0, 0))),
    "parallel-lines": lambda p: ParallelLines(p["theta0"], p["anchors"], p["a"], p["nu"]),
    "intersecting-lines": lambda p: IntersectingLines(p["center"], p["theta1"], p["theta2"], p["a"], p["nu"]),
    "irregular-line": lambda p: IrregularLine(p["lambdas"], p.get("theta", 0.0), p.get("anchor", (0, 0))),
}


def generator_from_descriptor(desc: dict):
    kind = desc["kind"]
    if kind not in _KINDS:
        raise ValueError(f"no generator for set kind {kind!r}")
    return _KINDS[kind](desc["params"])


@dataclass(frozen=True)
class LineConfig:
    theta0: float
    anchors: list
    a: float = 1.0
    nu: float = 0.5

    def __post_init__(self):
        if self.a <= 0 or self.nu <= 0:
            raise ValueError("need a > 0 and nu > 0")

    @property
    def distances(self) -> tuple[float, ...]:
        ref = self.anchors[-1]
        return tuple(line_distance(p, ref, self.theta0) for p in self.anchors[:-1])

    @property
    def ratio_flag(self):
        d1, d2 = self.distances
        return ratio_rationality(d1 / d2)


def sqrt_lattice(a: float, b: float, R: float) -> SamplingSet:
    return SqrtLattice(a, b).sample(R)


def single_line_set(a: float, nu: float, R: float, theta: float = 0.0, anchor=(0.0, 0.0)) -> SamplingSet:
    return RootLine(a, nu, theta, anchor).sample(R)


def parallel_lines_set(cfg: LineConfig, R: float) -> SamplingSet:
    return ParallelLines(cfg.theta0, cfg.anchors, cfg.a, cfg.nu).sample(R)


def intersecting_lines_set(center, theta1, theta2, a, nu, R) -> SamplingSet:
    return IntersectingLines(center, theta1, theta2, a, nu).sample(R)


def irregular_line_set(lambdas, theta: float = 0.0, anchor=(0.0, 0.0)) -> SamplingSet:
    return IrregularLine(lambdas, theta, anchor).sample()


def grid_set(lo, hi, n: int) -> SamplingSet:
    """Regular ``n x n`` grid over ``[lo, hi]**2`` in the (t, w) plane."""
    x = np.linspace(lo, hi, n)
    tt, ww = np.meshgrid(x, x, indexing="ij")
    return SamplingSet(np.column_stack([tt.ravel(), ww.ravel()]), "grid", {"lo": lo, "hi": hi, "n": n})


def product_set(*sets: SamplingSet) -> SamplingSet:
    """Cartesian product; coordinates are regrouped as (all t, all w)."""
    blocks_t = [s.t for s in sets]
    blocks_w = [s.w for s in sets]
    idx = np.meshgrid(*[np.arange(len(s)) for s in sets], indexing="ij")
    idx = [i.ravel() for i in idx]
    t = np.column_stack([bt[i] for bt, i in zip(blocks_t, idx)]) if idx[0].size else np.zeros((0, len(sets)))
    w = np.column_stack([bw[i] for bw, i in zip(blocks_w, idx)]) if idx[0].size else np.zeros((0, len(sets)))
    return SamplingSet(
        np.hstack([t, w]),
        "product",
        {"factors": [s.descriptor for s in sets]},
        math.inf,
    )


def counting_function(source, r: float) -> int:
    """``n(r) = #{points with |p| <= r}``.

    ``source`` is either a generator (any ``r``) or a finite
    :class:`SamplingSet`, in which case ``r`` may not exceed its truncation
    radius.
    """
    if r < 0:
        raise ValueError("r must be >= 0")
    if isinstance(source, SamplingSet):
        if r > source.R:
            raise ValueError(f"set truncated at R={source.R} cannot count up to r={r}")
        return int(np.sum(np.linalg.norm(source.points, axis=1) <= r))
    if r > source.coverage:
        raise ValueError(f"generator only covers radius {source.coverage}")
    return source.count(r)


def counting_curve(source, r_values) -> np.ndarray:
    return np.array([counting_function(source, float(r)) for r in r_values], dtype=np.int64)


def density_estimate(source, r_values) -> float:
    """Slope of ``log n(r)`` against ``log r`` over the top decade of ``r_values``."""
    r = np.asarray(r_values, dtype=float)
    if r.size < 2 or np.any(np.diff(r) <= 0):
        raise ValueError("need at least two increasing radii")
    n = counting_curve(source, r)
    top = r >= r[-1] / 10
    if top.sum() < 2:
        top = np.ones_like(top)
    keep = top & (n > 0) & (r > 0)
    if keep.sum() < 2:
        raise ValueError("fewer than two radii with a nonzero count")
    slope, _ = np.polyfit(np.log(r[keep]), np.log(n[keep]), 1)
    return float(slope)
