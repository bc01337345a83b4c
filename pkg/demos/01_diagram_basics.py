"""Diagram families, incidence windows, tower heights, telescoping.

The library's central objects are "odometer chains": generalized Bratteli
diagrams whose level-n incidence matrix is upper bidiagonal, with a_n(i)
vertical edges on odometer i and a single edge linking odometer i to
odometer i+1.  Everything below is exact integer arithmetic.
"""

from bratteli import (
    NonStationaryUniform,
    StationaryAK,
    Truncation,
    VertexId,
    count_paths_bruteforce,
    heights,
    incidence,
    telescope,
)
from bratteli.sequences import Constant

spec = StationaryAK(a=4, k=2)
window = Truncation(max_level=12, max_vertex=8)

print("Incidence matrix F_0 of the (a=4, k=2) chain, windowed to 8 vertices:")
mat = incidence(spec, 0, window)
for v, row in sorted(mat.row_map().items()):
    print(f"  row {v}: {row}")

print("\nTower heights H^(n)_i count the paths from level 0 into (n, i).")
print("For this chain H^(n)_i = (a-k+1)^n = 3^n for every i > 1:")
for n in (1, 3, 6):
    hv = heights(spec, n, window)
    print(f"  n={n}: H_2 = {hv.value(2)}, H_5 = {hv.value(5)}  (3^{n} = {3 ** n})")

print("\nBrute-force enumeration of edge sequences agrees with the recursion:")
count = count_paths_bruteforce(spec, VertexId(4, 2), window)
print(f"  paths into (4, 2) by explicit enumeration: {count}")
print(f"  heights recursion:                         {heights(spec, 4, window).value(2)}")

print("\nThe uniform non-stationary chain with a_n = 2 has H^(n) = 3^n everywhere:")
nsu = NonStationaryUniform(Constant(2))
print(f"  H^(3) = {heights(nsu, 3, Truncation(4, 4)).values}")

print("\nTelescoping through levels 0, 2, 4 multiplies consecutive matrices:")
tel = telescope(spec, [0, 2, 4], Truncation(6, 8))
for v, w, m in tel.levels[0][:6]:
    print(f"  (row {v}, col {w}) -> {m}")
print("  heights are preserved at breakpoint levels:",
      heights(tel, 1, Truncation(2, 3)).value(2), "==",
      heights(spec, 2, Truncation(3, 3)).value(2))
