"""Quaternions as C glued to C: the copoint needs a square root of -1.

Asking for a copoint reduces to a conic. Over Q it is a sum of two squares
equal to -1, which has no solution; over Q(i) the point (i, 0) works.
"""
from qbundle import factor as fac
from qbundle.scalars import I_UNIT, ZERO

quat = fac.quaternion_factorisation()
print("factorisation axioms:", fac.check_factorisation(quat).passed)

over_q = fac.copoint_feasibility_dim2(quat, "Q")
print("conic:", over_q.equation)
print("feasible over Q:", over_q.feasible)
print("obstruction:", over_q.certificate)

over_qi = fac.copoint_feasibility_dim2(quat, "Q(i)")
print("feasible over Q(i):", over_qi.feasible, " witnesses:", [(str(a), str(b)) for a, b in over_qi.witnesses])

copoint = fac._copoint_from_xy(quat, I_UNIT, ZERO)
print("copoint at (i, 0) verifies:", fac.check_copoint(quat, copoint).passed)
