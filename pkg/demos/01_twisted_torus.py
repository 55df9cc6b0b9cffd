"""A walk through the twisted cyclic factorisation.

Two copies of Z/n, generators g and h, glued by h g = zeta g h with zeta a
primitive n-th root of unity. The copoint h^m -> g^m turns the algebra into
a bundle over the scalars, and everything below is exact in Q(zeta).
"""
import itertools

from qbundle import factor as fac
from qbundle.scalars import Scalar

N = 3
print(f"== twisted Z/{N} x Z/{N} ==")
fz, copoint = fac.example26(N)
zeta = Scalar.zeta(N)
print("zeta =", zeta, " zeta^N =", zeta ** N)

# the exchange map on a few basis pairs
for m, k in [(1, 1), (1, 2), (2, 2)]:
    print(f"  h^{m} (x) g^{k}  ->", fz.pair(m, k))

axioms = fac.check_factorisation(fz)
print("factorisation axioms:", "pass" if axioms.passed else axioms.failures)
print("dimension of the glued algebra:", axioms.data["X"].dim)

data = fac.galois_data(fz, copoint)
print("fixed subalgebra basis:", data.M)
print("Galois report:", "pass" if data.report.passed else data.report.failures)

# the action h^m |> g^k = zeta^(mk + m) g^k, read off the computed map
print("action table (exponent of zeta):")
for m in range(N):
    row = []
    for k in range(N):
        (idx, coeff), = data.action.basis(m, k).items()
        row.append(next(e for e in range(N) if zeta ** e == coeff))
    print("  h^%d:" % m, row)

trans = fac.verify_translation(data)
print("translation map identities:", "pass" if trans.passed else trans.failures)

# rebuild the factorisation from nothing but the action
rebuilt, copoint2, _ = fac.galois_product(data.A, data.P, data.action.map, compare=fz)
same = all(rebuilt.pair(m, k) == fz.pair(m, k) for m, k in itertools.product(range(N), repeat=2))
print("round trip recovers the exchange map:", same, " copoint:", copoint2 == copoint)

cleaving = fac.find_cleaving(data)
print("cleft:", cleaving is not None)
