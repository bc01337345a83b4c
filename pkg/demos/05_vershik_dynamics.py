"""Orders on odometer chains and the adic successor dynamics.

Every vertex order tags the diagonal edge as minimal (left), maximal
(right), or interior (middle).  Quasi-stationary orders fix the tag per
odometer, which decides exactly which odometers carry maximal and minimal
paths, whether the successor map extends to a Borel bijection, and rules out
a homeomorphism.  Finally, the orbit of the successor map equidistributes
toward the normalized extension measure, which the demo checks empirically.
"""

from bratteli import (
    ExplicitPath,
    QuasiStationary,
    StationaryAK,
    Truncation,
    classify_odometer,
    extend_odometer,
    extension_verdict,
    orbit_frequencies,
    successor,
    vertical_path,
)
from bratteli.measure import DIAGONAL, VERTICAL
from bratteli.orders import LEFT, MIDDLE, RIGHT

spec = StationaryAK(a=4, k=2)

print("Tag semantics (quasi-stationary orders):")
for tag in (LEFT, RIGHT, MIDDLE):
    c = classify_odometer(spec, QuasiStationary(default=(tag,)), 1)
    print(f"  all-{tag:6s}: finite_right={c.finite_right}, finite_left={c.finite_left}")

print("\nExtension verdicts:")
for default, label in [((LEFT,), "all left"), ((LEFT, RIGHT), "alternating"), ((MIDDLE,), "all middle")]:
    v = extension_verdict(spec, QuasiStationary(default=default))
    print(f"  {label:12s}: |fr|={v.i_fr}, |fl|={v.i_fl}, borel={v.borel_extension}, homeomorphism={v.homeomorphism}")

print("\nSuccessor steps from the bottom path of odometer 1 (middle orders):")
order = QuasiStationary(default=(MIDDLE,))
path = vertical_path(spec, 1, 3)
for step in range(6):
    print(f"  step {step}: start={path.start}, edges={path.edges}")
    path = successor(spec, order, path)

print("\nOrbit frequencies vs the normalized extension measure (20000 steps):")
measure = extend_odometer(spec, 1).normalize()
cyls = [ExplicitPath(j, ((VERTICAL, 1),)) for j in (1, 2, 3)]
cyls.append(ExplicitPath(2, ((DIAGONAL, 0),)))
rep = orbit_frequencies(
    spec, order, vertical_path(spec, 1, 14), 20000, cyls, measure=measure, window=Truncation(16, 40)
)
for e in rep.entries:
    kind = "diagonal" if e.cylinder.edges[0][0] == DIAGONAL else "vertical"
    print(
        f"  first edge {kind} from vertex {e.cylinder.start}: "
        f"empirical {float(e.empirical):.4f} vs theoretical {float(e.theoretical):.4f}"
    )
