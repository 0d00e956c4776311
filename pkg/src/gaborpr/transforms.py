"""Closed-form Gabor, Bargmann and related transforms of poly-Gauss signals.

All transforms reduce to the moment integrals

    I_k(a, b) = int s**k exp(-pi*a*s**2 + 2*pi*b*s) ds,   Re a > 0,

which are evaluated by completing the square and the recurrence
``I_k = (b*I_{k-1} + (k-1)/(2*pi)*I_{k-2}) / a``.  No quadrature is used.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signals import MAX_DEGREE, MultiSignal, Signal

__all__ = [
    "gauss_integral",
    "atom_eval",
    "inner_product",
    "norm",
    "gabor",
    "hat_h",
    "bargmann",
    "ff_extension",
    "magnitude_samples",
    "Measurements",
]


def _moment_sum(poly: np.ndarray, a: complex, b: np.ndarray) -> np.ndarray:
    """``sum_k poly[k] * I_k(a, b) / I_0(a, b)`` by forward recurrence."""
    deg = len(poly) - 1
    if deg > MAX_DEGREE:
        raise ValueError(f"integrand degree {deg} exceeds the supported maximum {MAX_DEGREE}")
    j_prev = np.ones_like(b)
    total = poly[0] * j_prev
    if deg == 0:
        return total
    j_cur = b / a
    total = total + poly[1] * j_cur
    for k in range(2, deg + 1):
        j_prev, j_cur = j_cur, (b * j_cur + (k - 1) / (2 * np.pi) * j_prev) / a
        total = total + poly[k] * j_cur
    return total


def gauss_integral(f: Signal, A: complex, B, C=0.0) -> np.ndarray:
    """``int f(s) exp(-pi*A*s**2 + 2*pi*B*s + C) ds`` for arrays ``B`` and ``C``."""
    B = np.asarray(B, dtype=complex)
    C = np.asarray(C, dtype=complex)
    shape = np.broadcast(B, C).shape
    out = np.zeros(shape, dtype=complex)
    for atom in f.atoms:
        a = atom.gamma + A
        if not a.real > 0:
            raise ValueError(f"divergent Gaussian integral: Re(quadratic coefficient) = {a.real} <= 0")
        b = atom.beta + B
        poly = np.asarray(atom.poly, dtype=complex)
        with np.errstate(over="ignore", invalid="ignore"):
            pref = np.exp(np.pi * b**2 / a + atom.delta + C) / np.sqrt(a)
            out = out + pref * _moment_sum(poly, a, b)
    return out


def atom_eval(atom, s):
    """Pointwise value of an atom (or a whole signal)."""
    return atom(s)


def _product_atoms(f: Signal, g: Signal):
    for x in f.atoms:
        for y in g.atoms:
            yc = y.conj()
            poly = np.polynomial.polynomial.polymul(np.asarray(x.poly), np.asarray(yc.poly))
            yield poly, x.gamma + yc.gamma, x.beta + yc.beta, x.delta + yc.delta


def inner_product(f, g) -> complex:
    """``<f, g> = int f(s) conj(g(s)) ds`` in closed form.

    For :class:`MultiSignal` arguments the integral factorises over coordinates.
    """
    if isinstance(f, MultiSignal) or isinstance(g, MultiSignal):
        if not (isinstance(f, MultiSignal) and isinstance(g, MultiSignal)) or f.dim != g.dim:
            raise ValueError("inner product needs signals of equal dimension")
        out = 1.0 + 0j
        for x, y in zip(f.factors, g.factors):
            out *= inner_product(x, y)
        return out
    total = 0j
    for poly, a, b, d in _product_atoms(f, g):
        if not a.real > 0:
            raise ValueError(f"divergent inner product: Re(quadratic coefficient) = {a.real} <= 0")
        total += complex(np.exp(np.pi * b**2 / a + d) / np.sqrt(a) * _moment_sum(poly.astype(complex), a, np.asarray(b)))
    return total


def norm(f) -> float:
    return float(np.sqrt(max(inner_product(f, f).real, 0.0)))


def gabor(f, t, w):
    """Gabor transform ``V_phi f(t, w)`` with window ``exp(-pi x**2)``.

    For a :class:`MultiSignal` of dimension d, ``t`` and ``w`` carry the
    coordinates on their last axis and the transform is the product of the
    one-dimensional transforms.
    """
    if isinstance(f, MultiSignal):
        t = np.asarray(t, dtype=float)
        w = np.asarray(w, dtype=float)
        if t.shape[-1] != f.dim or w.shape[-1] != f.dim:
            raise ValueError(f"expected {f.dim} time and frequency coordinates")
        out = np.ones(np.broadcast(t[..., 0], w[..., 0]).shape, dtype=complex)
        for l, fl in enumerate(f.factors):
            out = out * gabor(fl, t[..., l], w[..., l])
        return out
    t = np.asarray(t, dtype=float)
    w = np.asarray(w, dtype=float)
    return gauss_integral(f, 1.0, t - 1j * w, -np.pi * t**2)


def hat_h(f: Signal, z):
    """Entire extension of the Fourier transform of ``f(s) exp(-pi s**2)``."""
    z = np.asarray(z, dtype=complex)
    return gauss_integral(f, 1.0, -1j * z)


def bargmann(f: Signal, z):
    """Bargmann transform ``2**(1/4) int f(s) exp(2 pi s z - pi s**2 - pi z**2 / 2) ds``."""
    z = np.asarray(z, dtype=complex)
    return gauss_integral(f, 1.0, z, -np.pi * z**2 / 2 + np.log(2) / 4)


def ff_extension(f: Signal, theta: float, z0: complex, z):
    """Entire function equal to ``|hat_h(f, z0 + x e^{i theta})|**2`` for real x.

    The defining double integral over ``(s, t)`` separates into a product of
    two single Gaussian integrals, one of them reflected through the real
    axis: ``F(z) = hat_h(z0 + z e^{i theta}) * conj(hat_h(z0 + conj(z) e^{i theta}))``.
    """
    z = np.asarray(z, dtype=complex)
    rot = np.exp(1j * theta)
    return hat_h(f, z0 + z * rot) * np.conj(hat_h(f, z0 + np.conj(z) * rot))


@dataclass(frozen=True)
class Measurements:
    """Gabor magnitudes sampled at the rows of ``points`` (``t`` block then ``w`` block)."""

    points: np.ndarray
    magnitudes: np.ndarray

    def __len__(self):
        return len(self.magnitudes)

    def __iter__(self):
        for p, m in zip(self.points, self.magnitudes):
            yield tuple(p), float(m)

    def to_csv(self) -> str:
        d = self.points.shape[1] // 2 if len(self.points) else 1
        if d == 1:
            head = "t,w,magnitude"
        else:
            head = ",".join([f"t{l + 1}" for l in range(d)] + [f"w{l + 1}" for l in range(d)] + ["magnitude"])
        rows = [head]
        for p, m in zip(self.points, self.magnitudes):
            rows.append(",".join(repr(float(x)) for x in p) + "," + repr(float(m)))
        return "\n".join(rows) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "Measurements":
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        data = np.array([[float(x) for x in ln.split(",")] for ln in lines[1:]], dtype=float)
        if data.size == 0:
            return cls(np.zeros((0, 2)), np.zeros(0))
        return cls(data[:, :-1], data[:, -1])


def magnitude_samples(f, sampling_set) -> Measurements:
    """``|V_phi f|`` at every point of a sampling set, in order."""
    pts = np.asarray(getattr(sampling_set, "points", sampling_set), dtype=float)
    if pts.size == 0:
        return Measurements(pts.reshape(0, 2), np.zeros(0))
    d = pts.shape[1] // 2
    if isinstance(f, MultiSignal):
        vals = gabor(f, pts[:, :d], pts[:, d:])
    else:
        if d != 1:
            raise ValueError("one-dimensional signal sampled on a multi-dimensional set")
        vals = gabor(f, pts[:, 0], pts[:, 1])
    return Measurements(pts, np.abs(vals))
