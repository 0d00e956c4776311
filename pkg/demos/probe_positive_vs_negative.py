"""Reconstruction probe on a dense lattice and on counterexample data.

Run: python3 demos/probe_positive_vs_negative.py
"""

import numpy as np

from gaborpr import lattice_pair
from gaborpr.counterexamples import relative_distance
from gaborpr.lab import reconstruction_probe
from gaborpr.sampling import sqrt_lattice
from gaborpr.signals import combine, hermite_basis
from gaborpr.transforms import magnitude_samples

rng = np.random.default_rng(7)
coeffs = (rng.standard_normal(8) + 1j * rng.standard_normal(8)) / 2
planted = combine(coeffs, hermite_basis(8))

# Dense lattice: every restart lands on the planted signal up to phase.
meas = magnitude_samples(planted, sqrt_lattice(0.8, 0.8, 10))
res = reconstruction_probe(meas, 8, restarts=16, seed=7, planted=planted, threads=4)
print(f"planted signal: success rate {res.success_rate():.0%}, best relative error {res.rel_error:.1e}")

# Counterexample data: the restarts split between f1 and f2.
pair = lattice_pair(2, 2)
basis = [pair.p1, pair.p2]
neg = reconstruction_probe(magnitude_samples(pair.f1, sqrt_lattice(2, 2, 8)), basis=basis, restarts=16, seed=7)
for run in neg.runs:
    g = combine(run.coeff_array(), basis)
    d1, d2 = relative_distance(g, pair.f1), relative_distance(g, pair.f2)
    print(f"restart {run.index:2d}: objective {run.objective:.1e}, nearest {'f1' if d1 < d2 else 'f2'} ({min(d1, d2):.1e})")
