"""Verification harness: magnitude comparisons, certification and a reconstruction probe.

The probe is empirical.  Recovering a planted signal from magnitudes on a set
supports, but does not prove, that the set does phase retrieval; finding two
non-equivalent exact fits on a counterexample set is the designed negative
control.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .counterexamples import CounterexamplePair, nonequivalence_distance
from .sampling import SamplingSet, generator_from_descriptor
from .signals import MultiSignal, Signal, combine, hermite_basis, signal_from_dict
from .transforms import Measurements, gabor, norm

__all__ = [
    "VerificationReport",
    "compare_profiles",
    "equivalence_up_to_phase",
    "certify_counterexample",
    "RestartRun",
    "ProbeResult",
    "reconstruction_probe",
    "probe_design",
    "probe_objective",
    "distinct_minimizers",
    "default_threads",
]

EQUAL_TOL = 1e-8
DISTINCT_TOL = 1e-2
WITNESS_GRID = 41
MAX_PROBE_DIM = 16
PRUNE_BELOW = 1e-30
WEIGHT_FLOOR = 1e-12


@dataclass
class VerificationReport:
    on_set_max_dev: float
    off_set_witness: tuple[list[float], float] | None
    phase_distance: float
    relative_phase_distance: float
    flags: dict
    config: dict = field(default_factory=dict)

    @property
    def counterexample_certified(self) -> bool:
        return self.flags["counterexample_certified"]

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.off_set_witness is not None:
            pt, dev = self.off_set_witness
            d["off_set_witness"] = {"point": list(map(float, pt)), "dev": float(dev)}
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _abs_gabor(f, pts: np.ndarray) -> np.ndarray:
    d = pts.shape[1] // 2
    if isinstance(f, MultiSignal):
        return np.abs(gabor(f, pts[:, :d], pts[:, d:]))
    return np.abs(gabor(f, pts[:, 0], pts[:, 1]))


def _dev(f, g, pts) -> np.ndarray:
    a, b = _abs_gabor(f, pts), _abs_gabor(g, pts)
    return np.abs(a - b) / (1 + np.maximum(a, b))


def _witness(f, g, lo, hi, n: int, refine: int = 40):
    """Grid search for the largest magnitude mismatch, then compass refinement."""
    k = lo.size
    per_axis = max(3, int(round(n ** (2 / k))))
    axes = [np.linspace(l, h, per_axis) for l, h in zip(lo, hi)]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, k)
    dev = _dev(f, g, mesh)
    i = int(np.argmax(dev))
    x, best = mesh[i].copy(), float(dev[i])
    step = (hi - lo) / (per_axis - 1)
    moves = np.concatenate([np.eye(k), -np.eye(k)])
    for _ in range(refine):
        cand = x + moves * step
        cand = np.clip(cand, lo, hi)
        cd = _dev(f, g, cand)
        j = int(np.argmax(cd))
        if cd[j] > best:
            x, best = cand[j], float(cd[j])
        else:
            step = step / 2
    return x, best


def _bounds(sampling_set: SamplingSet):
    lo, hi = sampling_set.bounding_box()
    lo, hi = np.array(lo, float), np.array(hi, float)
    flat = hi - lo < 1e-12
    lo[flat] -= 1.0
    hi[flat] += 1.0
    return lo, hi


def compare_profiles(
    f,
    g,
    sampling_set: SamplingSet,
    tol: float = EQUAL_TOL,
    *,
    distinct_tol: float = DISTINCT_TOL,
    grid: int = WITNESS_GRID,
) -> VerificationReport:
    """Compare ``|V f|`` and ``|V g|`` on a set and look for an off-set witness.

    Deviations are ``||Vf| - |Vg|| / (1 + max(|Vf|, |Vg|))``, symmetric in
    ``f, g``.  The witness search covers the set's bounding box with a
    ``grid x grid`` mesh (same total size spread over all axes in higher
    dimension) followed by compass refinement.
    """
    pts = sampling_set.points
    on = float(np.max(_dev(f, g, pts))) if len(pts) else 0.0
    lo, hi = _bounds(sampling_set)
    x, wdev = _witness(f, g, lo, hi, grid)
    dist = nonequivalence_distance(f, g)
    scale = max(norm(f), norm(g))
    rel = dist / scale if scale > 0 else 0.0
    equal = on <= tol
    distinct = rel >= distinct_tol
    nonempty = len(pts) > 0
    flags = {
        "equal_on_set": bool(equal),
        "distinct_globally": bool(distinct),
        "nonempty": bool(nonempty),
        "counterexample_certified": bool(equal and distinct and nonempty),
    }
    config = {
        "tol": tol,
        "distinct_tol": distinct_tol,
        "witness_grid": grid,
        "n_points": len(pts),
        "set": sampling_set.descriptor | {"R": None if math.isinf(sampling_set.R) else sampling_set.R},
    }
    return VerificationReport(on, (x.tolist(), wdev), dist, rel, flags, config)


def equivalence_up_to_phase(f, g, tol: float = EQUAL_TOL) -> bool:
    scale = max(norm(f), norm(g))
    return nonequivalence_distance(f, g) <= tol * scale


def _kind_of(desc: dict | None):
    return None if desc is None else desc.get("kind")


def certify_counterexample(pair: CounterexamplePair, sampling_set: SamplingSet, **kw) -> VerificationReport:
    """:func:`compare_profiles` after checking the set against the pair's intended geometry.

    The set must have the pair's dimension, and a generated set must be of
    the intended kind (parameters may differ, which is how denser sets
    are probed).  Explicit, grid and empty sets are accepted.
    """
    if sampling_set.dim != pair.dim:
        raise ValueError(f"set of dimension {sampling_set.dim} for a pair of dimension {pair.dim}")
    want = _kind_of(pair.intended)
    have = sampling_set.kind
    if want and have not in ("explicit", "grid", want) and len(sampling_set):
        raise ValueError(f"pair built for {want!r} sets, got a {have!r} set")
    rep = compare_profiles(pair.f1, pair.f2, sampling_set, **kw)
    rep.config["provenance"] = pair.provenance
    return rep


# ---------------------------------------------------------------------------
# reconstruction probe


def default_threads() -> int:
    env = os.environ.get("GPR_THREADS")
    if env:
        return max(1, int(env))
    return 1


@dataclass
class RestartRun:
    index: int
    coeffs: list
    objective: float
    iterations: int
    converged: bool
    diverged: bool
    rel_error: float | None
    history: list

    def coeff_array(self) -> np.ndarray:
        return np.array([complex(*c) for c in self.coeffs])


@dataclass
class ProbeResult:
    planted: dict | None
    basis: str
    coeffs: list
    rel_error: float | None
    objective: float
    runs: list
    config: dict

    @property
    def best(self) -> RestartRun:
        return min(self.runs, key=lambda r: (r.objective, r.index))

    def success_rate(self, threshold: float = 1e-3) -> float:
        ok = [r.rel_error is not None and r.rel_error <= threshold for r in self.runs]
        return sum(ok) / len(ok) if ok else 0.0

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def probe_design(points: np.ndarray, basis) -> np.ndarray:
    """Matrix of basis Gabor transforms, one row per point (rows negligible for every basis element dropped)."""
    pts = np.asarray(points, dtype=float)
    d = pts.shape[1] // 2 if pts.size else 1
    if d != 1:
        raise ValueError("the probe works with one-dimensional signals")
    A = np.column_stack([gabor(b, pts[:, 0], pts[:, 1]) for b in basis]) if len(pts) else np.zeros((0, len(basis)))
    return A


def probe_objective(A: np.ndarray, m2: np.ndarray, c: np.ndarray):
    """``sum (|A c|**2 - m**2)**2`` and its gradient ``2 A^H (r * y)`` with respect to conj(c)."""
    y = A @ c
    r = np.abs(y) ** 2 - m2
    return float(r @ r), 2 * (A.conj().T @ (r * y))


def _descend(A, m2, c, max_iter, gtol, ftol):
    f, g = probe_objective(A, m2, c)
    hist = [f]
    step = 1.0 / max(np.sum(m2), 1e-300)
    it = 0
    converged = diverged = False
    for it in range(1, max_iter + 1):
        gn = float(np.vdot(g, g).real)
        if f <= ftol or math.sqrt(gn) <= gtol:
            converged = True
            break
        # Armijo backtracking along -g, starting from a slightly enlarged last step
        step *= 2.0
        while True:
            cn = c - step * g
            fn, gn_new = probe_objective(A, m2, cn)
            if fn <= f - 0.5 * step * gn:
                break
            step *= 0.5
            if step < 1e-300:
                break
        if not math.isfinite(fn):
            diverged = True
            break
        if step < 1e-300:
            converged = f <= ftol
            break
        c, f, g = cn, fn, gn_new
        hist.append(f)
    if len(hist) > 200:
        idx = np.unique(np.geomspace(1, len(hist), 200).astype(int) - 1)
        hist = [hist[i] for i in idx]
    return c, f, it, converged, diverged, hist


def _residual_jac(A, m2, weights):
    N = A.shape[1]

    def fun(x):
        y = A @ (x[:N] + 1j * x[N:])
        return (np.abs(y) ** 2 - m2) * weights

    def jac(x):
        y = A @ (x[:N] + 1j * x[N:])
        g = 2 * (np.conj(y) * weights)[:, None] * A
        return np.hstack([g.real, -g.imag])

    return fun, jac


def _polish(A, m2, c, max_nfev):
    """Levenberg-Marquardt on relatively weighted residuals ``(|A c|**2 - m**2) / m**2``.

    Exact data make every zero of the residuals a global minimizer whatever
    the weights, and the relative weighting lets small measurements count
    when the magnitudes span many orders.  The returned objective is the
    unweighted one.
    """
    N = A.shape[1]
    floor = WEIGHT_FLOOR * float(np.max(m2)) if m2.size else 1.0
    fun, jac = _residual_jac(A, m2, 1.0 / np.sqrt(m2**2 + floor**2))
    x0 = np.concatenate([c.real, c.imag])
    sol = least_squares(fun, x0, jac=jac, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=max_nfev)
    cn = sol.x[:N] + 1j * sol.x[N:]
    f, _ = probe_objective(A, m2, cn)
    return cn, f, int(sol.nfev)


def _rel_error(planted: Signal | None, basis, c) -> float | None:
    if planted is None:
        return None
    rec = combine(c, basis)
    scale = norm(planted)
    dist = nonequivalence_distance(planted, rec)
    return dist / scale if scale > 0 else dist


def reconstruction_probe(
    measurements: Measurements,
    basis_dim: int = 8,
    restarts: int = 16,
    seed: int = 0,
    *,
    basis: list[Signal] | None = None,
    planted: Signal | None = None,
    max_iter: int = 5000,
    gtol: float = 1e-15,
    ftol: float = 1e-28,
    polish: bool = True,
    threads: int | None = None,
) -> ProbeResult:
    """Fit magnitudes by multi-start gradient descent over a finite basis.

    The objective is ``sum (|V f_c|**2 - m**2)**2`` over the measurement
    points, with ``f_c = sum c_k b_k``.  Gradient descent with backtracking
    does the global work; with ``polish`` each restart ends with a
    Levenberg-Marquardt pass on relatively weighted residuals, which settles
    the weakly determined directions that make plain descent crawl on
    ill-conditioned data.

    The default basis is the first ``basis_dim`` Hermite functions.  Each
    restart starts from an independent seeded complex Gaussian vector scaled
    to the measured energy.  Restarts run on up to ``threads`` workers
    (default: ``GPR_THREADS`` or 1); results are ordered by restart index, so
    the output does not depend on the thread count.
    """
    if basis is None:
        if not 1 <= basis_dim <= MAX_PROBE_DIM:
            raise ValueError(f"basis dimension must be between 1 and {MAX_PROBE_DIM}")
        basis = hermite_basis(basis_dim)
        basis_name = f"hermite-{basis_dim}"
    else:
        basis_name = f"custom-{len(basis)}"
    N = len(basis)
    A = probe_design(measurements.points, basis)
    m2 = np.asarray(measurements.magnitudes, dtype=float) ** 2
    keep = np.max(np.abs(A), axis=1) >= PRUNE_BELOW if len(A) else np.zeros(0, bool)
    A, m2 = A[keep], m2[keep]

    energy = float(np.sum(m2))
    seeds = np.random.SeedSequence(seed).spawn(restarts)

    def run(i: int) -> RestartRun:
        if energy == 0:
            c = np.zeros(N, dtype=complex)
            return RestartRun(i, [[0.0, 0.0]] * N, 0.0, 0, True, False, _rel_error(planted, basis, c), [0.0])
        rng = np.random.default_rng(seeds[i])
        c0 = rng.standard_normal(N) + 1j * rng.standard_normal(N)
        c0 *= math.sqrt(energy / max(np.sum(np.abs(A @ c0) ** 2), 1e-300))
        c, f, it, conv, div, hist = _descend(A, m2, c0, max_iter, gtol, ftol)
        if polish and not div and not f <= ftol:
            cp, fp, nfev = _polish(A, m2, c, 100 * (N + 1))
            if fp <= f:
                c, f = cp, fp
                hist.append(f)
            it += nfev
            conv = conv or f <= ftol
        err = None if div else _rel_error(planted, basis, c)
        return RestartRun(i, [[float(z.real), float(z.imag)] for z in c], f, it, conv, div, err, hist)

    workers = threads if threads is not None else default_threads()
    if workers > 1 and restarts > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            runs = list(ex.map(run, range(restarts)))
    else:
        runs = [run(i) for i in range(restarts)]
    runs.sort(key=lambda r: r.index)
    best = min(runs, key=lambda r: (r.objective, r.index))
    config = {
        "basis": basis_name,
        "restarts": restarts,
        "seed": seed,
        "max_iter": max_iter,
        "gtol": gtol,
        "ftol": ftol,
        "polish": polish,
        "n_measurements": int(len(measurements)),
        "n_used": int(keep.sum()),
    }
    return ProbeResult(
        None if planted is None else planted.to_dict(),
        basis_name,
        best.coeffs,
        best.rel_error,
        best.objective,
        runs,
        config,
    )


def distinct_minimizers(result: ProbeResult, basis, obj_tol: float = 1e-12, tol: float = 1e-3):
    """Pairs of restart indices that both fit to ``obj_tol`` yet differ by more than a global phase."""
    good = [r for r in result.runs if r.objective <= obj_tol and not r.diverged]
    sigs = [combine(r.coeff_array(), basis) for r in good]
    out = []
    for i in range(len(good)):
        for j in range(i + 1, len(good)):
            if not equivalence_up_to_phase(sigs[i], sigs[j], tol):
                out.append((good[i].index, good[j].index))
    return out


def load_signal(d: dict):
    return signal_from_dict(d)


def load_set(d: dict) -> SamplingSet:
    s = SamplingSet.from_dict(d)
    if s.kind not in ("explicit", "grid", "product"):
        generator_from_descriptor(s.descriptor)  # validates parameters
    return s
