"""The two-dimensional family parametrised by a point on the unit circle.

Every rational point gives a Galois extension with trivial fixed part, yet
the module-algebra property only survives on the real axis. We walk a few
points produced by the rational parametrisation of the circle.
"""
from fractions import Fraction

from qbundle import entwine as ent
from qbundle import factor as fac
from qbundle.scalars import scalar


def circle_point(t):
    t = Fraction(t)
    return (1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)


print(f"{'(cos, sin)':>16}  {'dim M':>5}  {'det':>4}  {'cleft':>5}  module algebra")
for t in [0, Fraction(1, 2), Fraction(2, 3), 1, 2, None]:
    cos, sin = circle_point(t) if t is not None else (Fraction(-1), Fraction(0))
    fz, copoint = fac.example27(scalar(cos), scalar(sin))
    data = fac.galois_data(fz, copoint)
    det = ent.chi_group_basis(fz, copoint, "lk").det()
    cleft = fac.find_cleaving(data) is not None
    module = not fac.module_algebra_defect(data)
    print(f"{str(cos) + ', ' + str(sin):>16}  {len(data.M):>5}  {str(det):>4}  {str(cleft):>5}  {module}")

# the ordering of the basis matters for the sign
fz, copoint = fac.example27(scalar(Fraction(3, 5)), scalar(Fraction(4, 5)))
print("det in (k, l) lexicographic order:", ent.chi_group_basis(fz, copoint, "lex").det())
print("det with l slowest:               ", ent.chi_group_basis(fz, copoint, "lk").det())
