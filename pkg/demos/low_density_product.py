"""A canonical product vanishing on a sparse line grows slower than order 2.

Run: python3 demos/low_density_product.py
"""

import numpy as np

from gaborpr.counterexamples import low_density_Q
from gaborpr.entire import order_type_estimate
from gaborpr.sampling import RootLine, density_estimate, gamma_star, single_line_set

nu = 0.7
src = single_line_set(1.0, nu, 300)
print(f"line Z^{nu}: {len(src)} points, density {density_estimate(RootLine(1.0, nu), np.geomspace(10, 1000, 20)):.3f}")

q = low_density_Q(gamma_star(src))
print(f"convergence exponent {q.estimate.rho:.3f}, genus {q.genus}")

zs = gamma_star(src).zs
print(f"max |Q| on the points: {np.max(np.abs(q(zs[zs != 0]))):.1e}")

est = order_type_estimate(q.log, np.geomspace(5, 60, 12), log=True)
print(f"order estimate {est.order:.3f} (1/nu = {1 / nu:.3f}), below the Gabor growth order 2")
