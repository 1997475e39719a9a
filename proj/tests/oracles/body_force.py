"""Symbolic oracle for the manufactured body force f = -div sigma(u).

u = curl phi with phi = (x y (1-x)(1-y))^2. Prints f at a few points with
mu = 1 and lambda = 2, to be frozen in the unit tests.
"""
import sympy as sp

x, y, lam, mu = sp.symbols("x y lambda mu")
phi = (x * y * (1 - x) * (1 - y)) ** 2
u = sp.Matrix([sp.diff(phi, y), -sp.diff(phi, x)])
grad = u.jacobian([x, y])
eps = (grad + grad.T) / 2
sigma = 2 * mu * eps + lam * grad.trace() * sp.eye(2)
f = -sp.Matrix([sp.diff(sigma[0, 0], x) + sp.diff(sigma[0, 1], y),
                sp.diff(sigma[1, 0], x) + sp.diff(sigma[1, 1], y)])
f = sp.simplify(f)
assert sp.simplify(grad.trace()) == 0

for px, py in [(0.5, 0.25), (0.3, 0.7), (0.9, 0.1)]:
    v = f.subs({x: sp.Rational(str(px)), y: sp.Rational(str(py)), mu: 1, lam: 2})
    print(px, py, sp.N(v[0], 17), sp.N(v[1], 17))
