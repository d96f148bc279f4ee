# # When the quadratic-closeness test gives up
#
# Blocks of size (n+1)^2 with a first vector scaled by 3, then by 2.  The
# squared distances already reach the lower frame bound 1 in the first block,
# so the quadratic-closeness condition fails.  The mu condition still holds.

# In[1]:

from framepert.certificates import quadratic_closeness_check, thm21_certificate
from framepert.gallery import example_remark22

ex = example_remark22(6)
qc = quadratic_closeness_check(ex.f, ex.h)
t21 = thm21_certificate(ex.f, ex.h, ex.g)

print("lambda =", round(qc.hypothesis_values["lambda"], 6), " A =", qc.hypothesis_values["A"])
print("quadratic closeness applicable:", qc.hypothesis_ok)

# In[2]:

print("mu =", round(t21.hypothesis_values["mu"], 6))
print("predicted", [round(x, 4) for x in t21.predicted.as_list()])
print("actual   ", [round(x, 4) for x in t21.actual.as_list()])
print("enclosed:", t21.enclosed)

# The partial sums for every depth up to the cap.

# In[3]:

for depth in (1, 2, 5, 10, 20):
    e = example_remark22(depth)
    print(depth, round(e.traces["lambda"].final, 5), round(e.traces["mu"].final, 5))
