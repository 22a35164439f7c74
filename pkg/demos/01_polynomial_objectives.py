"""Tour of the polynomial objectives and their exact derivatives.

Builds the test-function corpus, evaluates derivative bundles, checks
them against central differences, and computes the Lipschitz bounds the
optimizer needs.
"""

import numpy as np

from thirdopt import CORPUS_NAMES, corpus, finite_difference_check, smoothness_bounds

print("The corpus of degenerate test functions:")
for name in CORPUS_NAMES:
    poly = corpus(name)
    print(f"  {name:24s} dim={poly.dim} degree={poly.degree}  {poly}")

print()
print("Derivatives of the monkey saddle -3x^2y + y^3 at the origin:")
monkey = corpus("monkey_saddle")
bundle = monkey.bundle(np.zeros(2), order=3)
print("  value:", bundle.value)
print("  gradient:", bundle.grad, " (a critical point)")
print("  hessian:\n", bundle.hess)
print("  -> both vanish: first and second order information is blind here.")
print("  third derivative entries T[0,0,1] =", bundle.third.entries[0, 0, 1],
      " T[1,1,1] =", bundle.third.entries[1, 1, 1])
print("  frobenius norm of the third derivative:", bundle.third.frobenius_norm())

print()
print("Central-difference verification (max relative residual per order):")
rng = np.random.default_rng(1)
for name in CORPUS_NAMES:
    poly = corpus(name)
    x = rng.uniform(-0.7, 0.7, poly.dim)
    res = finite_difference_check(poly, x, h=1e-4)
    print(f"  {name:24s} grad {res.grad:.2e}  hess {res.hess:.2e}  third {res.third:.2e}")

print()
print("Term-wise Lipschitz bounds on the radius-2 ball:")
for name in CORPUS_NAMES:
    sc = smoothness_bounds(corpus(name), radius=2.0)
    print(f"  {name:24s} hessian {sc.hess_lipschitz:10.3f}   third {sc.third_lipschitz:10.3f}")
print("(a quadratic or cubic term contributes nothing; floored at 1e-6)")
