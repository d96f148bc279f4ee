# # A Riesz sequence and a nearby family that loses its lower bound
#
# f interleaves zeros with the even unit vectors.  g puts e_j / j in the odd
# slots.  The two are quadratically close, but the witness u_n = e_(2n-1)/(2n-1)
# sees a frame-operator quotient of 1/(2n-1)^2, which tends to zero.

# In[1]:

from fractions import Fraction

import numpy as np

from framepert.certificates import frame_extension_dichotomy
from framepert.gallery import example22
from framepert.hilbert import VectorFamily, frame_sequence_bounds

ex = example22(5)
print("nonzero part of f is Riesz:", ex.f_nonzero_is_riesz)
for n, r in enumerate(ex.ratios, start=1):
    print(n, r, Fraction(r).limit_denominator(1000))

# In[2]:

print("sum |f - g|^2:", np.round(ex.traces["quadratic"].partial_sums, 5))
print("g lower sequence bound at this depth:", frame_sequence_bounds(ex.g).lower)

# The same construction works for any finite family with room to spare:
# extend by zeros, then fill the gaps with scaled complement vectors.

# In[3]:

rep = frame_extension_dichotomy(VectorFamily([[1.0, 0, 0, 0, 0, 0, 0]]), 7)
print("codim", rep.codim, "ratios", rep.witness_ratios, "match:", rep.ratios_match)
