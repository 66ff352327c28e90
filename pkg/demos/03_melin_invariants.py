"""Symplectic invariants of a nonnegative quadratic form.

The fundamental matrix F = J^-1 H has eigenvalues +/- i lambda_j when
H >= 0; the plus-trace tr+ sums the positive branch.  The punchline is
spectral: the hbar = 1 quantization of the form has lowest eigenvalue
exactly tr+/2, so s + tr+/2 > 0 decides positivity of the model Q0 + s.
"""

import numpy as np

from melinlab import (
    QuadraticData,
    fundamental_matrix,
    lowest_eigenvalue,
    melin_phase_diagram,
    melin_quantity,
    quadratic_form_symbol,
    trace_plus,
    weyl_quantize,
)

alpha, beta, gamma = 2.0, 0.5, 1.0
h = np.array([[2 * alpha, 2 * beta], [2 * beta, 2 * gamma]])
q = QuadraticData(1, h, subprincipal=-1.0)

print("quadratic form:", quadratic_form_symbol(alpha, beta, gamma))
print("Hessian:\n", h)
print("fundamental matrix F = J^-1 H:\n", fundamental_matrix(q))
print("tr+ =", trace_plus(q), "   (closed form 2 sqrt(alpha gamma - beta^2) =",
      2.0 * np.sqrt(alpha * gamma - beta ** 2), ")")
print("melin quantity s + tr+/2 =", melin_quantity(q))

print("\n-- the ground-state identity --")
sym = quadratic_form_symbol(alpha, beta, gamma)
lam_min = lowest_eigenvalue(weyl_quantize(sym, 1.0, 64))
print("lambda_min(quantize(Q0, hbar=1)) =", lam_min)
print("tr+/2                            =", 0.5 * trace_plus(q))

print("\n-- a small phase diagram --")
rep = melin_phase_diagram(
    alphas=np.linspace(0.8, 2.0, 4),
    betas=[0.0, 0.3],
    gammas=[1.0],
    svals=[-1.5, 0.0],
    truncation=48,
)
print(f"{len(rep.points)} grid points, max |lambda_min - melin| = {rep.max_error:.3e}")
for p in rep.points[:4]:
    sign = "positive" if p.melin > 0 else "not positive"
    print(f"  alpha={p.alpha:.2f} beta={p.beta:.2f} s={p.s:+.1f}: "
          f"melin={p.melin:+.4f} -> model {sign}")
