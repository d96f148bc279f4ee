# # The gap between a plane and a tilted copy
#
# Tilt the e2 axis toward e3 by theta and measure how far the new plane sits
# from the old one.  The gap equals sin(theta), and it is directional.

# In[1]:

import math

import numpy as np

from framepert.certificates import gap_certificate
from framepert.hilbert import VectorFamily, frame_sequence_bounds, gap

f = VectorFamily([[1.0, 0, 0], [0, 1.0, 0]])
for theta in (0.05, 0.2, 0.6, 1.2):
    h = VectorFamily([[1.0, 0, 0], [0, math.cos(theta), math.sin(theta)]])
    rep = gap_certificate(f, h)
    print(
        f"theta={theta:4.2f} delta={rep.hypothesis_values['delta']:.6f} sin={math.sin(theta):.6f}",
        f"mu={rep.hypothesis_values['mu']:.3f} ok={rep.hypothesis_ok}",
    )

# In[2]:

h = VectorFamily([[1.0, 0, 0], [0, math.cos(0.2), math.sin(0.2)]])
rep = gap_certificate(f, h)
print("predicted", np.round(rep.predicted.as_list(), 4), " actual", frame_sequence_bounds(h).as_list())

# A line inside a plane: zero one way, one the other.

# In[3]:

line = VectorFamily([[1.0, 0, 0]])
print(gap(line, f), gap(f, line))
