"""Two-variable Jack polynomials P^{(1/g)} by Gram-Schmidt in the weight
|1 - z1/z2|^{2g} (integer g, exact constant-term extraction), and the p = 0
single-contour residue for lam = 1, g = 1.

Prints the monomial coefficients frozen into test_transform.cpp.
"""
import sympy as sp

z1, z2, xi = sp.symbols("z1 z2 xi")


def mono(a, b):
    return z1**a * z2**b + (z1**b * z2**a if a != b else 0)


def inner(f, h, g):
    # torus average of f(z) conj(h(z)) W, using conj(z) = 1/z
    hc = h.subs({z1: 1 / z1, z2: 1 / z2}, simultaneous=True)
    w = ((1 - z1 / z2) * (1 - z2 / z1)) ** g
    e = sp.expand(f * hc * w)
    return sp.Poly(sp.expand(e * z1**40 * z2**40), z1, z2).coeff_monomial(z1**40 * z2**40)


def jack(l1, l2, g):
    basis = [(l1 - j, l2 + j) for j in range((l1 - l2) // 2 + 1)]
    cs = sp.symbols("c1:%d" % (len(basis) + 1))[: len(basis) - 1]
    P = mono(*basis[0]) + sum(c * mono(*m) for c, m in zip(cs, basis[1:]))
    eqs = [inner(P, mono(*m), g) for m in basis[1:]]
    sol = sp.solve(eqs, cs, dict=True)[0] if cs else {}
    return [sp.Integer(1)] + [sol[c] for c in cs]


for g in (1, 2, 3):
    for lam in ((1, 0), (2, 0), (1, 1), (3, 0), (4, 0), (3, 1), (4, 2)):
        print("g", g, "lambda", lam, [str(c) for c in jack(*lam, g)])

# p = 0, g = 1, lam = 1: oint dxi/(2 pi i xi) xi / ((1 - z1/xi)(1 - z2/xi)) on |xi| > 1,
# the sum of the residues at xi = z1 and xi = z2
f = 1 / ((1 - z1 / xi) * (1 - z2 / xi))
res = sp.residue(f, xi, z1) + sp.residue(f, xi, z2)
print("single contour lam=1 g=1 p=0:", sp.simplify(res))
