"""Polynomial times chirped-Gaussian signals.

Every signal handled by the package is a finite sum of atoms

    P(s) * exp(-pi*gamma*s**2 + 2*pi*beta*s + delta)

with complex ``gamma`` (``Re gamma > 0``), complex ``beta`` and ``delta`` and a
polynomial ``P`` stored in ascending order.  The class is closed under
addition, scalar multiplication, multiplication by Gaussians and complex
translations, which is all the constructions of the package need.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from numpy.polynomial import hermite as H
from numpy.polynomial import polynomial as P

MAX_DEGREE = 64


def _pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _unpair(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return complex(v)


@dataclass(frozen=True)
class PolyGaussAtom:
    poly: tuple[complex, ...]
    gamma: complex = 1.0
    beta: complex = 0.0
    delta: complex = 0.0

    def __post_init__(self):
        coeffs = [complex(c) for c in self.poly]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "poly", tuple(coeffs))
        object.__setattr__(self, "gamma", complex(self.gamma))
        object.__setattr__(self, "beta", complex(self.beta))
        object.__setattr__(self, "delta", complex(self.delta))
        if not self.gamma.real > 0:
            raise ValueError(f"atom not in L2: Re(gamma) = {self.gamma.real} must be > 0")
        if len(coeffs) - 1 > MAX_DEGREE:
            raise ValueError(f"polynomial degree {len(coeffs) - 1} exceeds {MAX_DEGREE}")
        if not all(map(np.isfinite, (self.gamma, self.beta, self.delta))):
            raise ValueError("atom parameters must be finite")

    @property
    def is_zero(self) -> bool:
        return len(self.poly) == 0

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    def __call__(self, s):
        s = np.asarray(s, dtype=complex)
        if self.is_zero:
            return np.zeros_like(s)
        expo = -np.pi * self.gamma * s**2 + 2 * np.pi * self.beta * s + self.delta
        return P.polyval(s, np.asarray(self.poly)) * np.exp(expo)

    def scaled(self, c: complex) -> "PolyGaussAtom":
        return PolyGaussAtom(tuple(complex(c) * p for p in self.poly), self.gamma, self.beta, self.delta)

    def conj(self) -> "PolyGaussAtom":
        """Pointwise complex conjugate on the real line."""
        return PolyGaussAtom(
            tuple(np.conj(self.poly)), self.gamma.conjugate(), self.beta.conjugate(), self.delta.conjugate()
        )

    def to_dict(self) -> dict:
        return {
            "poly": [_pair(c) for c in self.poly],
            "gamma": _pair(self.gamma),
            "beta": _pair(self.beta),
            "delta": _pair(self.delta),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PolyGaussAtom":
        return cls(
            tuple(_unpair(c) for c in d["poly"]),
            _unpair(d.get("gamma", 1.0)),
            _unpair(d.get("beta", 0.0)),
            _unpair(d.get("delta", 0.0)),
        )


@dataclass(frozen=True)
class Signal:
    """A finite sum of :class:`PolyGaussAtom`; the empty sum is the zero signal."""

    atoms: tuple[PolyGaussAtom, ...] = ()
    dim: int = 1

    def __post_init__(self):
        atoms = tuple(a for a in self.atoms if not a.is_zero)
        object.__setattr__(self, "atoms", atoms)
        if self.dim != 1:
            raise ValueError("Signal is one-dimensional; use MultiSignal for tensor products")

    @classmethod
    def atom(cls, poly: Sequence[complex] = (1.0,), gamma: complex = 1.0, beta: complex = 0.0, delta: complex = 0.0):
        return cls((PolyGaussAtom(tuple(poly), gamma, beta, delta),))

    @property
    def is_zero(self) -> bool:
        return len(self.atoms) == 0

    def __call__(self, s):
        s = np.asarray(s, dtype=complex)
        out = np.zeros_like(s)
        for a in self.atoms:
            out = out + a(s)
        return out

    def __add__(self, other: "Signal") -> "Signal":
        if not isinstance(other, Signal):
            return NotImplemented
        return Signal(self.atoms + other.atoms)

    def __sub__(self, other: "Signal") -> "Signal":
        return self + (-1) * other

    def __mul__(self, c) -> "Signal":
        if isinstance(c, (Signal, MultiSignal)):
            return NotImplemented
        return Signal(tuple(a.scaled(c) for a in self.atoms))

    __rmul__ = __mul__

    def __neg__(self) -> "Signal":
        return -1 * self

    def conj(self) -> "Signal":
        return Signal(tuple(a.conj() for a in self.atoms))

    def modulated(self, w: complex) -> "Signal":
        """Multiply by ``exp(-2*pi*i*s*w)``; complex ``w`` is allowed."""
        dbeta = -1j * complex(w)
        return Signal(tuple(PolyGaussAtom(a.poly, a.gamma, a.beta + dbeta, a.delta) for a in self.atoms))

    def to_dict(self) -> dict:
        return {"dim": 1, "atoms": [a.to_dict() for a in self.atoms]}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "Signal":
        if d.get("dim", 1) != 1:
            raise ValueError("expected a one-dimensional signal")
        return cls(tuple(PolyGaussAtom.from_dict(a) for a in d["atoms"]))

    @classmethod
    def from_json(cls, text: str) -> "Signal":
        return cls.from_dict(json.loads(text))


ZERO = Signal()


@dataclass(frozen=True)
class MultiSignal:
    """Separable signal ``F(s) = f_1(s_1) * ... * f_d(s_d)``."""

    factors: tuple[Signal, ...] = field(default_factory=tuple)

    def __post_init__(self):
        factors = []
        for f in self.factors:
            if isinstance(f, MultiSignal):
                factors.extend(f.factors)
            elif isinstance(f, Signal):
                factors.append(f)
            else:
                raise TypeError(f"factor must be a Signal, got {type(f).__name__}")
        if not factors:
            raise ValueError("a MultiSignal needs at least one factor")
        object.__setattr__(self, "factors", tuple(factors))

    @property
    def dim(self) -> int:
        return len(self.factors)

    @property
    def is_zero(self) -> bool:
        return any(f.is_zero for f in self.factors)

    def __call__(self, s):
        s = np.asarray(s, dtype=complex)
        out = np.ones(s.shape[:-1], dtype=complex)
        for l, f in enumerate(self.factors):
            out = out * f(s[..., l])
        return out

    def __mul__(self, c) -> "MultiSignal":
        if isinstance(c, (Signal, MultiSignal)):
            return NotImplemented
        return MultiSignal((c * self.factors[0],) + self.factors[1:])

    __rmul__ = __mul__

    def to_dict(self) -> dict:
        return {"dim": self.dim, "factors": [f.to_dict() for f in self.factors]}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "MultiSignal":
        return cls(tuple(Signal.from_dict(f) for f in d["factors"]))


def signal_from_dict(d: dict):
    """Load either a :class:`Signal` or a :class:`MultiSignal`."""
    if "factors" in d:
        return MultiSignal.from_dict(d)
    return Signal.from_dict(d)


def gaussian(gamma: complex = 1.0, beta: complex = 0.0, delta: complex = 0.0) -> Signal:
    """``exp(-pi*gamma*s**2 + 2*pi*beta*s + delta)``; the default is the window ``exp(-pi*s**2)``."""
    return Signal.atom((1.0,), gamma, beta, delta)


PHI = gaussian()


def hermite_function(n: int) -> Signal:
    """L2-normalised Hermite function ``c_n H_n(sqrt(2*pi) s) exp(-pi s**2)``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    # physicists' H_n in powers of x, then x = sqrt(2 pi) s
    coeffs = H.herm2poly([0] * n + [1])
    coeffs = coeffs * (2 * np.pi) ** (np.arange(n + 1) / 2)
    norm = 2**0.25 / math.sqrt(2.0**n * math.factorial(n))
    return Signal.atom(tuple(norm * coeffs), 1.0)


def hermite_basis(n: int) -> list[Signal]:
    return [hermite_function(k) for k in range(n)]


def combine(coeffs: Iterable[complex], basis: Sequence[Signal]) -> Signal:
    out = ZERO
    for c, b in zip(coeffs, basis):
        out = out + complex(c) * b
    return out
