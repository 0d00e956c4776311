"""Entire-function tooling: Weierstrass products, growth estimates, Carlson splitting.

Growth quantities (order, type, indicator) are limits superior and cannot be
computed; the estimators here are finite-radius proxies and always return the
grid they were computed on.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

__all__ = [
    "PowerSeries",
    "ZeroSet",
    "ProductValue",
    "GridEstimate",
    "OrderType",
    "ExponentEstimate",
    "elementary_factor",
    "log_elementary_factor",
    "canonical_product",
    "canonical_product_log",
    "tail_moment_estimate",
    "convergence_exponent",
    "genus",
    "residue_component",
    "g_series",
    "indicator_estimate",
    "order_type_estimate",
    "carlson_gap",
    "carlson_gap_general",
    "quartic_line_product",
    "quartic_line_product_log",
    "quartic_zero_set",
]

N_ANGLES = 256


@dataclass(frozen=True)
class PowerSeries:
    """Truncated Taylor series ``sum_k coeffs[k] z**k``."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.atleast_1d(np.asarray(self.coeffs, dtype=complex)))

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def to_dict(self):
        return {"coeffs": [[c.real, c.imag] for c in self.coeffs]}

    @classmethod
    def from_dict(cls, d):
        return cls(np.array([complex(*c) for c in d["coeffs"]]))


@dataclass(frozen=True)
class ZeroSet:
    """Nonzero zeros listed with multiplicity, sorted by modulus; the origin is a flag."""

    zeros: np.ndarray
    origin_zero: bool = False

    def __post_init__(self):
        z = np.atleast_1d(np.asarray(self.zeros, dtype=complex))
        if np.any(z == 0):
            raise ValueError("zeros at the origin go in origin_zero, not in the list")
        object.__setattr__(self, "zeros", z[np.argsort(np.abs(z), kind="stable")])

    @classmethod
    def from_points(cls, zs) -> "ZeroSet":
        zs = np.asarray(zs, dtype=complex)
        at0 = np.abs(zs) == 0
        return cls(zs[~at0], bool(at0.any()))

    def __len__(self):
        return len(self.zeros)

    def to_dict(self):
        return {"zeros": [[z.real, z.imag] for z in self.zeros], "origin_zero": self.origin_zero}

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d):
        return cls(np.array([complex(*z) for z in d["zeros"]]), bool(d.get("origin_zero", False)))


class ProductValue(NamedTuple):
    value: complex
    rel_bound: float  # |true - value| <= rel_bound * |value|
    certified: bool


@dataclass
class GridEstimate:
    value: float
    r_grid: np.ndarray
    samples: np.ndarray
    overflow: bool = False

    def __float__(self):
        return float(self.value)


@dataclass
class OrderType:
    order: float
    type: float
    r_grid: np.ndarray
    log_max_modulus: np.ndarray
    overflow: bool = False


@dataclass
class ExponentEstimate:
    rho: float
    genus: int
    n_zeros: int
    low_confidence: bool = False
    fit_range: tuple = field(default=(0.0, 0.0))

    def __float__(self):
        return float(self.rho)


def elementary_factor(k: int, z):
    """Weierstrass factor ``E_k(z) = (1 - z) exp(z + z**2/2 + ... + z**k/k)``."""
    if k < 0:
        raise ValueError("k must be >= 0")
    z = np.asarray(z, dtype=complex)
    poly = sum(z**j / j for j in range(1, k + 1)) if k else 0
    return (1 - z) * np.exp(poly)


def log_elementary_factor(k: int, u):
    u = np.asarray(u, dtype=complex)
    with np.errstate(divide="ignore"):
        out = np.log(1 - u)
    for j in range(1, k + 1):
        out = out + u**j / j
    return out


def canonical_product_log(zeros: ZeroSet, p: int, z):
    """``log P(z)`` (some branch) of the truncated canonical product of genus p."""
    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape, dtype=complex)
    flat = z.reshape(-1)
    acc = out.reshape(-1)
    chunk = max(1, 2_000_000 // max(len(zeros), 1))
    for i in range(0, flat.size, chunk):
        zc = flat[i : i + chunk, None]
        u = zc / zeros.zeros[None, :]
        # complex division need not return exactly 1 at a listed zero
        u = np.where(zc == zeros.zeros[None, :], 1.0, u)
        acc[i : i + chunk] = log_elementary_factor(p, u).sum(axis=1)
    if zeros.origin_zero:
        with np.errstate(divide="ignore"):
            out = out + np.log(z)
    return out


def tail_moment_estimate(zeros: ZeroSet, p: int, rho: float | None = None) -> complex:
    """Estimate of ``sum z_n**(-(p+1))`` over the zeros beyond the listed ones.

    The listed zeros in the last dyadic shell ``(r_N/2, r_N]`` are assumed to
    repeat self-similarly: each further doubling of the radius multiplies the
    shell count by ``2**rho`` and the size of ``z**(-(p+1))`` by
    ``2**(-(p+1))``, which sums to a geometric series.
    """
    if rho is None:
        rho = convergence_exponent(zeros).rho
    ratio = 2.0 ** (rho - p - 1)
    if ratio >= 1:
        raise ValueError("genus too small for the counting law: the tail does not converge")
    r = np.abs(zeros.zeros)
    shell = zeros.zeros[r > r[-1] / 2]
    return complex(np.sum(shell ** (-(p + 1.0))) * ratio / (1 - ratio))


def _tail_estimate(zeros: ZeroSet, s: float) -> float:
    """Estimated ``sum over unlisted zeros of |z_n|**(-s)`` from the fitted counting law."""
    est = convergence_exponent(zeros)
    rho = est.rho
    if s <= rho:
        return math.inf
    R = float(np.abs(zeros.zeros[-1]))
    return len(zeros) * rho / ((s - rho) * R**s)


def canonical_product(zeros: ZeroSet, p: int, z: complex, tail_tol: float = 1e-6, tail_sum: float | None = None) -> ProductValue:
    """Truncated canonical product with a bound on the truncation error.

    Listed zeros are multiplied exactly.  The omitted tail contributes at most
    ``2 |z|**(p+1) * tail_sum`` to ``|log P|`` as long as every omitted zero
    satisfies ``|z/z_n| <= 1/2``; ``tail_sum`` bounds
    ``sum |z_n|**(-(p+1))`` over the omitted zeros.  Without it the bound is
    estimated from the counting law of the listed zeros and marked uncertified.
    """
    z = complex(z)
    if len(zeros) == 0:
        raise ValueError("empty zero set")
    r_last = float(np.abs(zeros.zeros[-1]))
    certified = tail_sum is not None
    if tail_sum is None:
        tail_sum = _tail_estimate(zeros, p + 1)
    if abs(z) > r_last / 2:
        raise ValueError(f"|z| = {abs(z)} too large for the listed zeros (need |z| <= {r_last / 2})")
    eps = 2 * abs(z) ** (p + 1) * tail_sum
    if not eps <= tail_tol:
        raise ValueError(f"tail bound {eps:.3g} exceeds tail_tol={tail_tol:.3g}; supply more zeros")
    if zeros.origin_zero and z == 0 or np.any(zeros.zeros == z):
        return ProductValue(0j, 0.0, certified)
    val = complex(np.exp(canonical_product_log(zeros, p, z)))
    return ProductValue(val, math.expm1(eps), certified)


def _fit_window(x: np.ndarray) -> np.ndarray:
    """Mask of the top decade of positive ``x`` (or the top half when the decade is thin)."""
    top = x >= x[-1] / 10
    if top.sum() < 10:
        top = np.zeros_like(top)
        top[len(x) // 2 :] = True
    return top


def convergence_exponent(zeros: ZeroSet) -> ExponentEstimate:
    """Finite-sample convergence exponent and genus of a zero sequence.

    The exponent is the log-log slope of the counting function at the listed
    moduli.  Near an integer k, divergence of ``sum |z_n|**(-k)`` is decided by
    comparing the contributions of the last two dyadic shells of moduli.
    """
    r = np.abs(zeros.zeros)
    n = len(r)
    if n < 3:
        raise ValueError("need at least 3 zeros to estimate a convergence exponent")
    idx = np.arange(1, n + 1, dtype=float)
    mask = _fit_window(r)
    if np.ptp(np.log(r[mask])) == 0:
        raise ValueError("zero moduli do not grow")
    rho, _ = np.polyfit(np.log(r[mask]), np.log(idx[mask]), 1)
    rho = max(float(rho), 0.0)

    k = round(rho)
    if abs(rho - k) < 0.1 and k >= 1:
        r_max = r[-1]
        last = np.sum(r[(r > r_max / 2)] ** (-float(k)))
        prev = np.sum(r[(r > r_max / 4) & (r <= r_max / 2)] ** (-float(k)))
        alpha = k + 1 if prev > 0 and last / prev >= 0.5 else k
    else:
        alpha = max(1, math.ceil(rho))
    return ExponentEstimate(rho, alpha - 1, n, n < 100, (float(r[mask][0]), float(r[-1])))


def genus(zeros: ZeroSet) -> int:
    return convergence_exponent(zeros).genus


def residue_component(f: PowerSeries, m: int, k: int) -> PowerSeries:
    """``f_k(z) = sum_l w**((m-k) l) f(w**l z)`` with ``w = exp(2 pi i / m)``.

    Computed from the definition at coefficient level; the result keeps only
    the powers congruent to k mod m, scaled by m.
    """
    if not 0 <= k < m:
        raise ValueError("need 0 <= k < m")
    n = np.arange(len(f.coeffs))
    out = np.zeros(len(f.coeffs), dtype=complex)
    for l in range(m):
        out += np.exp(2j * np.pi * ((m - k) * l % m) / m) * np.exp(2j * np.pi * (l * n % m) / m) * f.coeffs
    return PowerSeries(out)


def g_series(f: PowerSeries, m: int, k: int) -> PowerSeries:
    """``g_k(z) = m sum_n a_{mn+k} z**(n+1)``, so that ``g_k(z**m) = z**(m-k) f_k(z)``."""
    if not 0 <= k < m:
        raise ValueError("need 0 <= k < m")
    sel = f.coeffs[k::m]
    out = np.zeros(len(sel) + 1, dtype=complex)
    out[1:] = m * sel
    return PowerSeries(out)


def _log_abs(F, z, log: bool):
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        v = F(z)
        return np.real(v) if log else np.log(np.abs(v))


def indicator_estimate(
    F: Callable, rho: float, theta: float, r_grid, *, log: bool = False, top: float = 0.5
) -> GridEstimate:
    """Largest ``log|F(r e^{i theta})| / r**rho`` over the top part of the radius grid.

    With ``log=True``, ``F`` returns ``log F`` (any branch) instead of ``F``.
    Radii where the value overflows are dropped and flagged.
    """
    r = np.asarray(r_grid, dtype=float)
    vals = _log_abs(F, r * np.exp(1j * theta), log) / r**rho
    ok = np.isfinite(vals) | (vals == -np.inf)
    overflow = not ok.all()
    if overflow:
        cut = np.argmin(ok)
        r, vals = r[:cut], vals[:cut]
    if r.size == 0:
        raise ValueError("overflow at every radius of the grid")
    start = int(len(r) * (1 - top)) if len(r) > 1 else 0
    return GridEstimate(float(np.max(vals[start:])), r, vals, overflow)


def order_type_estimate(F: Callable, r_grid, *, rho: float | None = None, log: bool = False, top: float = 0.5) -> OrderType:
    """Order and type proxies from the max modulus on circles.

    ``log M(r)`` is the maximum of ``log|F|`` over 256 equispaced angles.  The
    order is the least-squares slope of ``log log M`` against ``log r`` over
    the top part of the grid; the type is the largest ``log M(r) / r**rho``
    there, with ``rho`` the given order or the estimate.
    """
    r = np.asarray(r_grid, dtype=float)
    ang = np.exp(2j * np.pi * np.arange(N_ANGLES) / N_ANGLES)
    logm = np.array([np.max(_log_abs(F, ri * ang, log)) for ri in r])
    ok = np.isfinite(logm)
    overflow = not ok.all()
    if overflow:
        cut = np.argmin(ok)
        r, logm = r[:cut], logm[:cut]
    start = int(len(r) * (1 - top))
    sel = slice(start, None)
    rr, lm = r[sel], logm[sel]
    good = lm > 0
    if good.sum() < 2:
        raise ValueError("max modulus does not exceed 1 on enough radii to fit an order")
    order, _ = np.polyfit(np.log(rr[good]), np.log(lm[good]), 1)
    use = order if rho is None else rho
    typ = float(np.max(lm / rr**use))
    return OrderType(float(order), typ, r, logm, overflow)


def carlson_gap(h_quarter: float, h_5quarter: float, h_neg_quarter: float, h_neg_5quarter: float, a: float) -> bool:
    """Strict gap inequality for functions of order 2 vanishing on ``a Z^{1/2}``."""
    if a <= 0:
        raise ValueError("a must be > 0")
    return max(h_quarter, h_5quarter) + max(h_neg_quarter, h_neg_5quarter) < 2 * math.pi / a**2


def carlson_gap_general(H: Callable[[float], float], m: int, a: float) -> bool:
    """Gap inequality for order m and zeros at ``lambda_n e^{2 l pi i/m}``, ``lambda_n ~ a n**(1/m)``."""
    up = max(H((4 * l + 1) * math.pi / (2 * m)) for l in range(m))
    down = max(H((4 * l - 1) * math.pi / (2 * m)) for l in range(m))
    return up + down < 2 * math.pi / a**m


def quartic_zero_set(lambdas) -> ZeroSet:
    lam = np.asarray(lambdas, dtype=float)
    return ZeroSet(np.concatenate([lam, -lam, 1j * lam, -1j * lam]))


def quartic_line_product_log(lambdas, z):
    """``log prod (1 - z**4 / lambda_n**4)`` over the listed lambdas (vectorised in z)."""
    lam4 = np.asarray(lambdas, dtype=float) ** 4
    z = np.asarray(z, dtype=complex)
    w = (z**4).reshape(-1)
    out = np.empty(w.shape, dtype=complex)
    chunk = max(1, 2_000_000 // max(lam4.size, 1))
    with np.errstate(divide="ignore"):
        for i in range(0, w.size, chunk):
            out[i : i + chunk] = np.log(1 - w[i : i + chunk, None] / lam4[None, :]).sum(axis=1)
    return out.reshape(z.shape)


def quartic_line_product(lambdas, z: complex, tail_sum: float | None = None) -> ProductValue:
    """``prod (1 - z**4/lambda_n**4)``: the genus-2 product with zeros ``+-lambda_n, +-i lambda_n``.

    Omitted factors satisfy ``|log(1 - u)| <= 2|u|`` for ``|u| <= 1/2``.
    ``tail_sum`` bounds ``sum lambda_n**(-4)`` over the omitted indices; by
    default it assumes ``lambda_n / n**(1/2)`` does not drop below its last
    listed value, giving ``N / lambda_N**4``.
    """
    lam = np.asarray(lambdas, dtype=float)
    if lam.size == 0:
        return ProductValue(1 + 0j, 0.0, True)
    if np.any(lam <= 0) or np.any(np.diff(lam) <= 0):
        raise ValueError("lambdas must be strictly increasing positive numbers")
    z = complex(z)
    w = z**4
    if np.any(w == lam**4):
        return ProductValue(0j, 0.0, True)
    N = lam.size
    if tail_sum is None:
        tail_sum = N / lam[-1] ** 4
    if abs(w) > lam[-1] ** 4 / 2:
        raise ValueError("|z| too large for the listed lambdas")
    eps = 2 * abs(w) * tail_sum
    val = complex(np.exp(quartic_line_product_log(lam, z)))
    return ProductValue(val, math.expm1(eps), True)
