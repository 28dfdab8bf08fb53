"""Lyapunov certificates: Stein solutions and equivalent contraction norms.

The discrete Lyapunov (Stein) equation T^T Q T - Q = -I has a positive
semidefinite solution exactly for stable systems, and V(x) = x^T Q x then
decreases by exactly ||x||_2^2 per step.  Alternatively, rescaling the
dynamics by s > 1 and taking the sup over the trajectory produces an
equivalent norm in which T is a strict contraction; taking the modulus
first preserves monotonicity of the norm (lattice variant).
"""

import numpy as np

import posstab as ps

T = ps.dense([[0.5, 1.0], [0.0, 0.5]])
cert = ps.solve_stein(T)
print("Q =")
print(np.round(cert.Q, 6))
print("residual ||T'QT - Q + I||_inf =", cert.residual)
print("series terms used:", cert.n_terms, " tail bound:", cert.tail_bound)

rng = np.random.default_rng(0)
samples = rng.normal(size=(5, 2))
print("\nexact decrease V(Tx) - V(x) = -||x||_2^2 on samples:",
      ps.quadratic_decrease_check(cert.Q, T, samples))

for x in samples[:3]:
    v = float(x @ cert.Q @ x)
    tx = ps.apply(T, x)
    print(f"  V(x)={v:9.4f}  V(Tx)={float(tx @ cert.Q @ tx):9.4f}  ||x||^2={float(x @ x):7.4f}")

est = ps.spectral_radius(T)
s = float(np.sqrt(1.0 / est.upper))
print(f"\nequivalent norm with s = {s:.4f} (so s * spr < 1):")
norm_cert = ps.equivalent_norm(T, s, norm="linf")
print(f"  truncation depth K = {norm_cert.K}")
print(f"  sampled contraction factor = {norm_cert.contraction_factor:.6f} <= 1/s = {1/s:.6f}")

lat = ps.equivalent_norm(T, s, lattice=True, cone=ps.orthant(2, "linf"), norm="linf")
x = np.array([0.3, 0.2])
y = np.array([0.5, 0.8])
print("\nlattice variant is monotone: 0 <= x <= y gives ||x||_equ <= ||y||_equ")
print(f"  ||x||_equ = {lat(x):.6f}   ||y||_equ = {lat(y):.6f}")

V = norm_cert
ok, _ = ps.verify_lyapunov(
    V,
    ps.KFunctionSpec("linear", 1.0),
    ps.KFunctionSpec("linear", 4.0),
    ps.KFunctionSpec("linear", (1.0 - 1.0 / s)),
    T,
    rng.normal(size=(50, 2)),
    norm="linf",
)
print("\nthe equivalent norm is itself a Lyapunov function:", ok)
