"""
The integer polynomials defining every variety the workbench counts or
checks. All of them live in rings over ZZ; callers move them to QQ or QQ_I
with ``set_ring`` when they need a field.
"""
from itertools import combinations
from sympy import ZZ
from sympy.polys.rings import ring

# P^3 with coordinates x0..x3
P3, x0, x1, x2, x3 = ring("x0,x1,x2,x3", ZZ)
_X = (x0, x1, x2, x3)

# Maschke's octic, the lowest degree invariant of G
F = (sum(x**8 for x in _X)
     + 14*sum(a**4*b**4 for a, b in combinations(_X, 2))
     + 168*x0**2*x1**2*x2**2*x3**2)

# F is a quartic in the squares; replacing x_i^2 by x_i gives the K3 surface Sbar
SBAR = (sum(x**4 for x in _X)
        + 14*sum(a**2*b**2 for a, b in combinations(_X, 2))
        + 168*x0*x1*x2*x3)

# degree 4 invariants of the Heisenberg group
P_INVARIANTS = (
    x0**4 + x1**4 + x2**4 + x3**4,
    2*(x0**2*x1**2 + x2**2*x3**2),
    2*(x0**2*x2**2 + x1**2*x3**2),
    2*(x0**2*x3**2 + x1**2*x2**2),
    4*x0*x1*x2*x3,
)

# P^4 with coordinates y0..y4
P4, y0, y1, y2, y3, y4 = ring("y0,y1,y2,y3,y4", ZZ)

IGUSA = (y4**4 + (y0**2 - y1**2 - y2**2 - y3**2)*y4**2
         + y1**2*y2**2 + y1**2*y3**2 + y2**2*y3**2 - 2*y0*y1*y2*y3)
QUADRIC = y0**2 + 3*(y1**2 + y2**2 + y3**2) + 6*y4**2

# the quartic W in P^3 with coordinates w0..w3 (the y0..y3 of P^4)
W3, w0, w1, w2, w3 = ring("w0,w1,w2,w3", ZZ)
W_QUARTIC = (5*w0**4 + 6*w0**2*(w1**2 + w2**2 + w3**2)
             - 27*(w1**4 + w2**4 + w3**4)
             - 90*(w1**2*w2**2 + w1**2*w3**2 + w2**2*w3**2)
             + 72*w0*w1*w2*w3)

# affine plane of the four-tangent lines (x, 1, ty, t)
A2, x, y = ring("x,y", ZZ)
A = y**8 + 14*y**4 + 1
B = 14*(x**4*y**4 + x**4 + y**4 + 12*x**2*y**2 + 1)
C = x**8 + 14*x**4 + 1
DELTA = B**2 - 4*A*C
G_PLUS = (2*y**4 + y**2 + 2)*x**4 - (y**4 - 24*y**2 + 1)*x**2 + 2*y**4 + y**2 + 2
G_MINUS = (2*y**4 - y**2 + 2)*x**4 + (y**4 + 24*y**2 + 1)*x**2 + 2*y**4 - y**2 + 2
P = 2*y**4 + y**2 + 2
Q = y**4 - 24*y**2 + 1

# homogeneous versions on P^1_(y:v), used by the curve counters
P1, yh, vh = ring("y,v", ZZ)
A_HOM = yh**8 + 14*yh**4*vh**4 + vh**8
P_HOM = 2*yh**4 + yh**2*vh**2 + 2*vh**4
Q_HOM = yh**4 - 24*yh**2*vh**2 + vh**4
# C- in the form P_(x^4 + u^4) - Q_ x^2 u^2, from g-(x, y) = g+(ix, iy)
P_MINUS_HOM = 2*yh**4 - yh**2*vh**2 + 2*vh**4
Q_MINUS_HOM = -(yh**4 + 24*yh**2*vh**2 + vh**4)
DISC_HOM = Q_HOM**2 - 4*P_HOM**2

# bihomogeneous models on P^1_(x:u) x P^1_(y:v), bidegree (4, 4)
P1P1, xb, ub, yb, vb = ring("x,u,y,v", ZZ)
G_PLUS_BIHOM = (2*yb**4 + yb**2*vb**2 + 2*vb**4)*(xb**4 + ub**4) - (yb**4 - 24*yb**2*vb**2 + vb**4)*xb**2*ub**2
G_MINUS_BIHOM = (2*yb**4 - yb**2*vb**2 + 2*vb**4)*(xb**4 + ub**4) + (yb**4 + 24*yb**2*vb**2 + vb**4)*xb**2*ub**2
