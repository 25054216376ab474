# Walk through the vector-space structure on strictly positive probability
# vectors: the group sum, scalar product, log-ratio inner product, and the
# straight lines (geodesics) they induce.

import numpy as np

from procgeom import (
    from_log_ratios,
    geodesic_intersection,
    geodesic_point,
    log_inner,
    make_pvec,
    pdist,
    pnorm,
    pscale,
    psum,
    uniform_pvec,
)

a = make_pvec([0.2, 0.3, 0.5])
b = make_pvec([0.6, 0.3, 0.1])
print("a =", a)
print("b =", b)

# the "sum" multiplies entrywise and renormalizes; the uniform vector is zero
print("\na + b      =", psum(a, b))
print("a + 0      =", psum(a, uniform_pvec(3)), "(unchanged)")
print("a + (-1)a  =", psum(a, pscale(-1.0, a)), "(the zero vector)")

# scaling powers the entries; 0.1*a is dragged toward uniform, looks like noise
print("\n0.1 * a =", pscale(0.1, a))
print("2.0 * a =", pscale(2.0, a))

# the log-ratio inner product turns all of this into honest linear algebra
print("\n<a, b> =", log_inner(a, b))
print("|a|    =", pnorm(a))
print("d(a,b) =", pdist(a, b))

# geodesics are plain line segments in log-ratio coordinates; the parameter
# moves at constant speed
print("\ngeodesic from b (t=0) to a (t=1):")
for t in np.linspace(0.0, 1.0, 5):
    print(f"  t={t:.2f}  ", geodesic_point(a, b, float(t)))

# two orthogonal lines through the uniform center, and their intersection
p0 = from_log_ratios([1.0, 0.6])
q0 = from_log_ratios([-0.6, 1.0])
center = uniform_pvec(3)
theta_star, p_star = geodesic_intersection(p0, center, q0, center)
print("\northogonal lines through the center intersect at t* =", theta_star)
print("intersection point:", p_star)
