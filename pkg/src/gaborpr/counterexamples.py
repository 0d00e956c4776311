"""Explicit pairs of non-equivalent signals whose Gabor magnitudes agree on a set.

The common mechanism: if ``Q`` is entire and real on the complex sequence of a
sampling set, and ``hat_h(p2) = Q * hat_h(p1)``, then for unimodular ``c1, c2``
with non-real ratio the signals

    f1 = c1 p1 + c2 p2,    f2 = conj(c1) p1 + conj(c2) p2

have equal Gabor magnitudes on the set but differ by more than a global phase.
All ``Q`` used here are exponentials of polynomials of degree at most two (or
sums of them), so ``p1`` and ``p2`` are written down exactly as chirped
Gaussians: a Gaussian ``hat_h`` is the transform of a Gaussian, and a factor
``exp(w z)`` is a complex translation.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .entire import ZeroSet, canonical_product_log, convergence_exponent, tail_moment_estimate
from .sampling import GammaStar, LineConfig, ratio_rationality
from .signals import MultiSignal, PolyGaussAtom, Signal, _pair, _unpair, signal_from_dict
from .transforms import inner_product, norm

__all__ = [
    "QMultiplier",
    "ChirpExp",
    "LineExp",
    "RationalAngleSum",
    "CanonicalQ",
    "q_from_dict",
    "q_eval",
    "RealnessReport",
    "q_realness_check",
    "signal_with_hat",
    "CounterexamplePair",
    "pair_from_chirp",
    "pair_from_exponential_Q",
    "lattice_pair",
    "lattice_constant",
    "low_density_Q",
    "separable_pair",
    "separable_counterexample",
    "nonequivalence_distance",
    "relative_distance",
]

RATIO_TOL = 1e-12


class QMultiplier:
    """Entire function used as the ratio ``hat_h(p2) / hat_h(p1)``."""

    kind = "abstract"

    def scaled(self, z):
        """``(m, s)`` with ``Q(z) = m * exp(s)`` and real ``s``; avoids overflow."""
        raise NotImplementedError

    def __call__(self, z):
        m, s = self.scaled(z)
        with np.errstate(over="ignore", invalid="ignore"):
            return m * np.exp(s)

    def to_dict(self) -> dict:
        raise NotImplementedError

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _scaled_exp(E):
    E = np.asarray(E, dtype=complex)
    return np.exp(1j * E.imag), E.real


@dataclass(frozen=True)
class ChirpExp(QMultiplier):
    """``Q(z) = exp(c e^{i alpha} (z - z0)**2)`` with ``0 < c < pi``."""

    c: float
    alpha: float
    z0: complex = 0j
    kind = "chirp-exp"

    def __post_init__(self):
        if not 0 < self.c < math.pi:
            raise ValueError(f"chirp rate c = {self.c} must lie in (0, pi)")
        object.__setattr__(self, "z0", complex(self.z0))

    @property
    def kappa(self) -> complex:
        return self.c * cmath.exp(1j * self.alpha)

    def scaled(self, z):
        z = np.asarray(z, dtype=complex)
        return _scaled_exp(self.kappa * (z - self.z0) ** 2)

    def to_dict(self):
        return {"kind": self.kind, "c": self.c, "alpha": self.alpha, "z0": _pair(self.z0)}

    @classmethod
    def for_lattice(cls, a: float, b: float) -> "ChirpExp":
        """``exp(-i c z**2)`` with the smallest admissible ``c`` for ``a Z^{1/2} x b Z^{1/2}``."""
        return cls(lattice_constant(a, b), -math.pi / 2, 0j)

    @classmethod
    def for_intersecting_lines(cls, case: str, theta1: float, theta2: float, a: float, center=(0.0, 0.0)) -> "ChirpExp":
        """Chirp real on the two square-root rays through ``center`` at angles theta1, theta2.

        ``case`` selects the rotation: ``"cos"`` (alpha = pi/2 - theta1 - theta2),
        ``"sin"`` (alpha = -theta1 - theta2) or ``"double"`` (alpha = -2 theta2,
        real on the second ray for every c).  The rate ``c`` is fixed by
        ``c a**2 |trig| = pi``.
        """
        d = theta1 - theta2
        rules = {
            "cos": (math.pi / 2 - theta1 - theta2, math.cos(d)),
            "sin": (-theta1 - theta2, math.sin(d)),
            "double": (-2 * theta2, math.sin(2 * d)),
        }
        if case not in rules:
            raise ValueError(f"case must be one of {sorted(rules)}")
        alpha, trig = rules[case]
        if abs(trig) < RATIO_TOL:
            raise ValueError(f"case {case!r} is degenerate for theta1 - theta2 = {d}")
        c = math.pi / (a * a * abs(trig))
        if not c < math.pi:
            raise ValueError(f"case {case!r} needs a**2 |trig| > 1, got {a * a * abs(trig):.6g}")
        t, w = map(float, center)
        return cls(c, alpha, complex(w, t))

    @classmethod
    def for_parallel_lines(cls, cfg: LineConfig) -> "ChirpExp":
        """Chirp real on three parallel square-root lines stacked at distances ``a sqrt(n_l)``.

        The anchors must lie on one normal to the lines, with the last anchor
        as the reference point ``z3``.
        """
        if abs(cfg.nu - 0.5) > RATIO_TOL:
            raise ValueError("the parallel-line chirp needs square-root lines (nu = 1/2)")
        u = cmath.exp(1j * cfg.theta0)
        t3, w3 = cfg.anchors[-1]
        z3 = complex(w3, t3)
        for t, w in cfg.anchors[:-1]:
            off = (complex(w, t) - z3) / u
            if abs(off.real) > 1e-9 * max(1.0, abs(off)):
                raise ValueError("anchors must lie on a common normal to the lines")
            n = (off.imag / cfg.a) ** 2
            if abs(n - round(n)) > 1e-9 * max(1.0, n):
                raise ValueError(f"line distance {abs(off.imag)} is not a * sqrt(integer) for a = {cfg.a}")
        return cls(math.pi / cfg.a**2, math.pi / 2 - 2 * cfg.theta0, z3)


@dataclass(frozen=True)
class LineExp(QMultiplier):
    """``Q(z) = exp(n pi (z - z3) e^{-i theta0} / d1)``."""

    n: int
    d1: float
    z3: complex
    theta0: float
    kind = "line-exp"

    def __post_init__(self):
        if self.n <= 0 or self.d1 <= 0:
            raise ValueError("need n > 0 and d1 > 0")
        object.__setattr__(self, "z3", complex(self.z3))

    @property
    def rate(self) -> complex:
        return self.n * math.pi * cmath.exp(-1j * self.theta0) / self.d1

    def scaled(self, z):
        z = np.asarray(z, dtype=complex)
        return _scaled_exp(self.rate * (z - self.z3))

    def to_dict(self):
        return {"kind": self.kind, "n": self.n, "d1": self.d1, "z3": _pair(self.z3), "theta0": self.theta0}

    @classmethod
    def from_config(cls, cfg: LineConfig) -> "LineExp":
        d1, d2 = cfg.distances
        pq = ratio_rationality(d1 / d2)
        if pq is None:
            raise ValueError(f"d1/d2 = {d1 / d2!r} is not rational; no exponential multiplier")
        t3, w3 = cfg.anchors[-1]
        return cls(pq[0], d1, complex(w3, t3), cfg.theta0)


@dataclass(frozen=True)
class RationalAngleSum(QMultiplier):
    """``Q(z) = sum_{n < 2q} exp((z - z0) e^{-i (theta2 + p n pi / q)})``."""

    p: int
    q: int
    theta2: float
    z0: complex = 0j
    kind = "rational-angle-sum"

    def __post_init__(self):
        if self.q <= 0:
            raise ValueError("q must be positive")
        object.__setattr__(self, "z0", complex(self.z0))

    @property
    def rates(self) -> np.ndarray:
        n = np.arange(2 * self.q)
        return np.exp(-1j * (self.theta2 + self.p * n * np.pi / self.q))

    def scaled(self, z):
        z = np.asarray(z, dtype=complex)
        E = (z - self.z0)[..., None] * self.rates
        s = E.real.max(axis=-1)
        return np.exp(E - s[..., None]).sum(axis=-1), s

    def to_dict(self):
        return {"kind": self.kind, "p": self.p, "q": self.q, "theta2": self.theta2, "z0": _pair(self.z0)}


@dataclass(frozen=True)
class CanonicalQ(QMultiplier):
    """Weierstrass product over a listed zero set.

    ``tail`` approximates the unlisted zeros to first order: the product is
    multiplied by ``exp(-tail * z**(genus+1) / (genus+1))``.  With
    ``tail = 0`` it is the finite product, an entire function in its own
    right; either way it vanishes exactly on the listed zeros.
    """

    zeros: ZeroSet
    genus: int
    tail: complex = 0j
    estimate: object = field(default=None, compare=False)
    kind = "canonical"

    def log(self, z):
        z = np.asarray(z, dtype=complex)
        p = self.genus
        return canonical_product_log(self.zeros, p, z) - self.tail * z ** (p + 1) / (p + 1)

    def scaled(self, z):
        L = self.log(z)
        with np.errstate(invalid="ignore"):
            m, s = _scaled_exp(L)
        dead = np.isneginf(L.real)
        return np.where(dead, 0, m), np.where(dead, 0.0, s)

    def to_dict(self):
        return {"kind": self.kind, "genus": self.genus, "tail": _pair(self.tail), **self.zeros.to_dict()}


def q_from_dict(d: dict) -> QMultiplier:
    kind = d["kind"]
    if kind == ChirpExp.kind:
        return ChirpExp(d["c"], d["alpha"], _unpair(d["z0"]))
    if kind == LineExp.kind:
        return LineExp(d["n"], d["d1"], _unpair(d["z3"]), d["theta0"])
    if kind == RationalAngleSum.kind:
        return RationalAngleSum(d["p"], d["q"], d["theta2"], _unpair(d["z0"]))
    if kind == CanonicalQ.kind:
        return CanonicalQ(ZeroSet.from_dict(d), d["genus"], _unpair(d.get("tail", 0.0)))
    raise ValueError(f"unknown multiplier kind {kind!r}")


def q_eval(q: QMultiplier, z):
    return q(z)


@dataclass
class RealnessReport:
    max_dev: float
    worst_point: complex | None
    n_points: int
    tol: float
    passed: bool

    def to_dict(self):
        return {
            "max_dev": self.max_dev,
            "worst_point": None if self.worst_point is None else _pair(self.worst_point),
            "n_points": self.n_points,
            "tol": self.tol,
            "passed": self.passed,
        }


def q_realness_check(q: QMultiplier, gs, tol: float = 1e-10) -> RealnessReport:
    """Largest ``|Im Q| / (1 + |Q|)`` over the points of ``gs``."""
    zs = np.asarray(gs.zs if isinstance(gs, GammaStar) else gs, dtype=complex).ravel()
    if zs.size == 0:
        return RealnessReport(0.0, None, 0, tol, True)
    m, s = q.scaled(zs)
    with np.errstate(over="ignore"):
        dev = np.abs(m.imag) / (np.exp(-s) + np.abs(m))
    k = int(np.argmax(dev))
    mx = float(dev[k])
    return RealnessReport(mx, complex(zs[k]), int(zs.size), tol, bool(mx <= tol))


def signal_with_hat(q2: complex, q1: complex = 0.0, q0: complex = 0.0) -> Signal:
    """The signal ``f`` with ``hat_h(f)(w) = exp(q2 w**2 + q1 w + q0)``.

    ``h = f exp(-pi s**2)`` is then the Gaussian
    ``exp(-pi A s**2 + 2 pi beta s + delta)`` with ``A = -pi / q2``; ``f`` is
    in L2 exactly when ``Re A > 1``.
    """
    q2, q1, q0 = complex(q2), complex(q1), complex(q0)
    if q2 == 0:
        raise ValueError("q2 must be nonzero")
    A = -math.pi / q2
    if not A.real > 1:
        raise ValueError(f"not square integrable: Re(-pi/q2) = {A.real:.6g} must exceed 1")
    beta = 1j * q1 * A / (2 * math.pi)
    delta = q0 - math.pi * beta**2 / A + 0.5 * cmath.log(A)
    return Signal((PolyGaussAtom((1.0,), A - 1, beta, delta),))


def _check_units(c1: complex, c2: complex):
    c1, c2 = complex(c1), complex(c2)
    if abs(abs(c1) - 1) > 1e-12 or abs(abs(c2) - 1) > 1e-12:
        raise ValueError("c1 and c2 must be unimodular")
    if abs((c1 / c2).imag) < RATIO_TOL:
        raise ValueError("c1/c2 is real: the two signals would agree up to a global phase")
    return c1, c2


@dataclass
class CounterexamplePair:
    """``f1 = c1 p1 + c2 p2`` and ``f2 = conj(c1) p1 + conj(c2) p2``."""

    f1: Signal | MultiSignal
    f2: Signal | MultiSignal
    q: QMultiplier | None
    c1: complex
    c2: complex
    provenance: str
    intended: dict | None = None
    p1: Signal | None = None
    p2: Signal | None = None
    q_scale: float = 1.0  # hat_h(p2) = q_scale * Q * hat_h(p1)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.c1, self.c2 = _check_units(self.c1, self.c2)
        if self.f1.is_zero or self.f2.is_zero:
            raise ValueError("counterexample signals must be nonzero")

    @classmethod
    def build(cls, p1: Signal, p2: Signal, q, c1, c2, provenance, intended=None, balance=False) -> "CounterexamplePair":
        """Combine ``p1, p2``; ``balance`` rescales ``p2`` to the norm of ``p1``.

        A positive factor keeps ``Q`` real wherever it was, and stops one
        component from swamping the other when ``Q`` is large.
        """
        c1, c2 = _check_units(c1, c2)
        scale = norm(p1) / norm(p2) if balance else 1.0
        p2 = scale * p2 if balance else p2
        f1 = c1 * p1 + c2 * p2
        f2 = c1.conjugate() * p1 + c2.conjugate() * p2
        return cls(f1, f2, q, c1, c2, provenance, intended, p1, p2, scale)

    @property
    def dim(self) -> int:
        return getattr(self.f1, "dim", 1)

    def to_dict(self) -> dict:
        d = {
            "provenance": self.provenance,
            "intended": self.intended,
            "c1": _pair(self.c1),
            "c2": _pair(self.c2),
            "q": None if self.q is None else self.q.to_dict(),
            "q_scale": self.q_scale,
            "f1": self.f1.to_dict(),
            "f2": self.f2.to_dict(),
        }
        if self.p1 is not None:
            d["p1"] = self.p1.to_dict()
            d["p2"] = self.p2.to_dict()
        if self.extra:
            d["extra"] = self.extra
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "CounterexamplePair":
        return cls(
            signal_from_dict(d["f1"]),
            signal_from_dict(d["f2"]),
            None if d.get("q") is None else q_from_dict(d["q"]),
            _unpair(d["c1"]),
            _unpair(d["c2"]),
            d.get("provenance", ""),
            d.get("intended"),
            Signal.from_dict(d["p1"]) if "p1" in d else None,
            Signal.from_dict(d["p2"]) if "p2" in d else None,
            d.get("q_scale", 1.0),
            d.get("extra", {}),
        )

    @classmethod
    def from_json(cls, text: str) -> "CounterexamplePair":
        return cls.from_dict(json.loads(text))


def pair_from_chirp(
    c: float,
    alpha: float,
    z0: complex = 0j,
    c1: complex = 1.0,
    c2: complex = 1j,
    *,
    beta: float | None = None,
    provenance: str | None = None,
    intended: dict | None = None,
) -> CounterexamplePair:
    """Pair with ``hat_h(p2) = exp(c e^{i alpha} (z - z0)**2) hat_h(p1)``.

    ``hat_h(p1) = exp(-pi v w**2)`` with ``v = 1/2 + (beta/pi) e^{i alpha}``;
    both ``p1`` and ``p2`` are square integrable iff ``c - pi/2 < beta < pi/2``.
    """
    q = ChirpExp(c, alpha, z0)
    if beta is None:
        beta = c / 2
    if not c - math.pi / 2 < beta < math.pi / 2:
        raise ValueError(f"beta = {beta} must lie in ({c - math.pi / 2}, {math.pi / 2})")
    v = 0.5 + beta / math.pi * cmath.exp(1j * alpha)
    k = q.kappa
    p1 = signal_with_hat(-math.pi * v)
    p2 = signal_with_hat(-math.pi * v + k, -2 * k * q.z0, k * q.z0**2)
    prov = provenance or f"chirp multiplier, c={c:.12g}, alpha={alpha:.12g}, z0={q.z0:.12g}"
    return CounterexamplePair.build(p1, p2, q, c1, c2, prov, intended)


def _shifted_hat(base_q2: complex, base_q0: complex, rate: complex, shift: complex) -> Signal:
    # hat = exp(base_q2 w^2 + base_q0) * exp(rate (w - shift))
    return signal_with_hat(base_q2, rate, base_q0 - rate * shift)


def pair_from_exponential_Q(
    q, base_width: float = 0.1, c1: complex = 1.0, c2: complex = 1j, *, intended=None, balance: bool = True
) -> CounterexamplePair:
    """Pair for an exponential-type multiplier (:class:`LineExp` or :class:`RationalAngleSum`).

    ``p1`` has ``h = exp(-pi s**2 / sigma**2)``; each ``exp(w z)`` factor of
    ``Q`` becomes a complex translation of ``h``.  The quotient by
    ``exp(-pi s**2)`` stays square integrable iff ``sigma < 1``.  By default
    ``p2`` is rescaled to the norm of ``p1`` (see ``q_scale``).
    """
    sigma = float(base_width)
    if not 0 < sigma < 1:
        raise ValueError(f"base width {sigma} too large: need 0 < sigma < 1 so that 1/sigma**2 > 1")
    q2 = -math.pi * sigma**2
    q0 = math.log(sigma)
    p1 = signal_with_hat(q2, 0, q0)
    if isinstance(q, LineExp):
        p2 = _shifted_hat(q2, q0, q.rate, q.z3)
        prov = f"parallel-line exponential multiplier, n={q.n}, d1={q.d1:.12g}, theta0={q.theta0:.12g}"
    elif isinstance(q, RationalAngleSum):
        p2 = Signal()
        for r in q.rates:
            p2 = p2 + _shifted_hat(q2, q0, r, q.z0)
        prov = f"rational-angle exponential sum, p={q.p}, q={q.q}, theta2={q.theta2:.12g}"
    else:
        raise TypeError("expected a LineExp or RationalAngleSum multiplier")
    return CounterexamplePair.build(p1, p2, q, c1, c2, prov, intended, balance=balance)


def lattice_constant(a: float, b: float) -> float:
    """Smallest ``c`` in (0, pi) with ``a**2 c`` and ``b**2 c`` in ``pi Z``."""
    if a <= 0 or b <= 0:
        raise ValueError("need a > 0 and b > 0")
    pq = ratio_rationality(b * b / (a * a))
    if pq is None:
        raise ValueError(f"no admissible c: b^2/a^2 = {b * b / (a * a)!r} is not rational")
    c = pq[1] * math.pi / (a * a)
    if not c < math.pi:
        raise ValueError(f"no admissible c in (0, pi): the smallest candidate is {c / math.pi:.6g}*pi")
    return c


def lattice_pair(a: float, b: float, c1: complex = 1.0, c2: complex = 1j) -> CounterexamplePair:
    """Non-equivalent pair with equal Gabor magnitudes on ``a Z^{1/2} x b Z^{1/2}``."""
    c = lattice_constant(a, b)
    frac = ratio_rationality(c / math.pi)
    c_txt = f"{frac[0]}*pi/{frac[1]}".replace("1*pi", "pi") if frac else f"{c:.12g}"
    prov = f"square-root lattice chirp, a={a:g}, b={b:g}, c={c_txt}"
    return pair_from_chirp(c, -math.pi / 2, 0j, c1, c2, provenance=prov, intended={"kind": "sqrt-lattice", "params": {"a": a, "b": b}})


def low_density_Q(gs, tail: bool = True) -> CanonicalQ:
    """Canonical product vanishing on the listed points of ``gs``.

    The genus comes from the convergence-exponent estimate of the points.
    The point set should have density below 2 for the product to grow slower
    than any nonzero ``hat_h``; the estimate is recorded, not proven.  With
    ``tail`` the unlisted continuation of the set is accounted for to first
    order (see :func:`tail_moment_estimate`), which keeps growth estimates
    at moderate radii close to those of the infinite product.
    """
    zs = np.asarray(gs.zs if isinstance(gs, GammaStar) else gs, dtype=complex)
    zeros = ZeroSet.from_points(zs)
    est = convergence_exponent(zeros)
    t = tail_moment_estimate(zeros, est.genus, est.rho) if tail else 0j
    return CanonicalQ(zeros, est.genus, t, est)


def separable_pair(pair: CounterexamplePair, extra) -> tuple[MultiSignal, MultiSignal]:
    """``F_j(s) = f_j(s_1) * extra(s_2, ..., s_d)``."""
    if isinstance(extra, (Signal, MultiSignal)) and not extra.is_zero:
        return MultiSignal((pair.f1, extra)), MultiSignal((pair.f2, extra))
    raise ValueError("extra factor must be a nonzero signal")


def separable_counterexample(pair: CounterexamplePair, extra) -> CounterexamplePair:
    """The d-dimensional pair of :func:`separable_pair`, packaged with its provenance."""
    F1, F2 = separable_pair(pair, extra)
    intended = None
    if pair.intended is not None:
        intended = {"kind": "product", "params": {"first": pair.intended, "dim": F1.dim}}
    prov = f"separable extension to dimension {F1.dim} of: {pair.provenance}"
    return CounterexamplePair(F1, F2, pair.q, pair.c1, pair.c2, prov, intended, q_scale=pair.q_scale)


def nonequivalence_distance(f, g) -> float:
    """``min over alpha of ||f - e^{i alpha} g||`` in closed form."""
    nf = inner_product(f, f).real
    ng = inner_product(g, g).real
    val = nf + ng - 2 * abs(inner_product(f, g))
    return math.sqrt(max(val, 0.0))


def relative_distance(f, g) -> float:
    scale = max(norm(f), norm(g))
    return nonequivalence_distance(f, g) / scale if scale > 0 else 0.0
