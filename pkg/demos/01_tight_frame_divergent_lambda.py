# # A tight frame whose perturbation passes on mu alone
#
# The family f repeats e_n / c_n exactly c_n^2 times, so its frame operator
# is the identity.  The perturbation h rescales the first copy in each block
# by t_n.  The cross term mu stays below 1 while the squared distances keep
# adding up at the rate of a harmonic series.

# In[1]:

import numpy as np

from framepert.certificates import thm21_certificate
from framepert.gallery import example21
from framepert.hilbert import frame_bounds

ex = example21(4)
print("offset N =", ex.offset, "  vectors per family:", len(ex.f))
print("f bounds:", frame_bounds(ex.f).bounds.as_list())
print("h bounds:", frame_bounds(ex.h).bounds.as_list())

# The two series, block by block.  mu settles well below 1.

# In[2]:

for name in ("mu", "lambda"):
    t = ex.traces[name]
    print(f"{name:7s} partial sums {np.round(t.partial_sums, 4)}  verdict: {t.verdict_hint}")

# Each lambda increment n^3/(n+N)^4 sits above (1+N)^-4 / n, so the
# truncations track a divergent harmonic series.

# In[3]:

ns = np.arange(1, 5)
print("increments  ", np.round(ex.traces["lambda"].increments, 4))
print("lower bound ", np.round((1 + ex.offset) ** -4.0 / ns, 4))

# In[4]:

rep = thm21_certificate(ex.f, ex.h, ex.g)
print("hypothesis holds:", rep.hypothesis_ok, " predicted", rep.predicted.as_list(), " actual", rep.actual.as_list())
