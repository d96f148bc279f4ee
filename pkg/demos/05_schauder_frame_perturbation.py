# # Perturbing a Schauder frame in l^p
#
# x repeats e_n / n exactly n times and the functionals repeat e_n, so the
# reconstruction is exact.  Shifting each x_k along e_1 by (k+N)^(-3/2)
# keeps mu below 1, while the relative shifts sum like a divergent series.

# In[1]:

import math

import numpy as np

from framepert.gallery import example31
from framepert.schauder import SchauderFramePair, projection_constant, reconstruction_residual, thm31_certificate

ex = example31(10)
print("N =", ex.offset, " vectors:", len(ex.pair), " residual:", reconstruction_residual(ex.pair))
print("mu     ", np.round(ex.traces["mu"].partial_sums[-3:], 4), ex.traces["mu"].verdict_hint)
print("lambda ", np.round(ex.traces["lambda"].partial_sums[-3:], 4), ex.traces["lambda"].verdict_hint)

# The certificate rebuilds dual functionals for y and checks them.

# In[2]:

for p in (1, 2, math.inf):
    pair = SchauderFramePair(ex.pair.x, ex.pair.f, p)
    rep = thm31_certificate(pair, ex.y)
    print(
        f"p={p}: K={projection_constant(pair).projection_constant:.3f}",
        f"mu={rep.hypothesis_values['mu']:.3f} ok={rep.hypothesis_ok}",
        f"residual={rep.extras.get('reconstruction_residual', float('nan')):.1e}",
    )
