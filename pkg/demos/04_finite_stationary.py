"""Finite stationary diagrams: classes, distinguished roots, measures.

For a finite stationary standard diagram, ergodic probability measures
correspond to the distinguished communicating classes of A = F^T: classes
whose Perron root strictly dominates every class that can reach them.  Each
yields a nonnegative eigenvector supported exactly on the vertices with
access to the class, and cylinder values xi(w) / lambda^(n-1).
"""

import numpy as np

from bratteli import (
    decompose,
    distinguished_classes,
    distinguished_eigenvector,
    measures_finite_stationary,
    spectral_radius,
)

A = [[3, 0], [1, 2]]
print(f"A = {A}  (A = F^T: entry [i][j] counts edges from vertex i up to j)")

dec = decompose(A)
print(f"communicating classes, topologically ordered: {dec.classes}")
print(f"access relation (beta reaches alpha): {dec.reduced_edges}")

for idx in range(len(dec.classes)):
    lo, hi = spectral_radius(dec.class_matrix(idx))
    print(f"  class {dec.classes[idx]}: Perron root in [{lo:.12f}, {hi:.12f}]")

dist = distinguished_classes(dec)
print(f"distinguished classes: {[dec.classes[i] for i in dist]}")

for alpha in dist:
    data = distinguished_eigenvector(dec, alpha)
    print(f"  class {dec.classes[alpha]}: xi = {data.xi}, support = {sorted(data.support)}")

print("\nMeasures (normalized so level-1 tower masses sum to 1):")
for m in measures_finite_stationary(A):
    print(f"  class {dec.classes[m.data.class_index]}: lambda = {m.lam}, xi = {m.xi_normalized}")
    print(f"    cylinder value at level 2, vertex 2: {m.cylinder_value(2, 2)}")

print("\nA chain where the upstream class dominates kills the downstream measure:")
B = [[2, 0], [1, 3]]
ms = measures_finite_stationary(B)
print(f"  A = {B}: {len(ms)} measure(s); class {decompose(B).classes[ms[0].data.class_index]} wins")

print("\nA 1x1 zero class is never distinguished but its neighbors can be:")
C = [[2, 1, 0], [0, 0, 1], [0, 0, 3]]
decC = decompose(C)
distC = distinguished_classes(decC)
print(f"  classes {decC.classes}; distinguished: {[decC.classes[i] for i in distC]}")

print("\nEigen residual check against numpy on a random irreducible block:")
rng = np.random.default_rng(1)
block = rng.integers(1, 5, size=(4, 4))
lo, hi = spectral_radius(block.astype(float))
print(f"  power-iteration bracket [{lo:.12f}, {hi:.12f}]")
print(f"  numpy eigvals max magnitude: {max(abs(np.linalg.eigvals(block))):.12f}")
