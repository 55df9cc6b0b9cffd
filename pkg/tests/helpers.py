"""Small constructions shared by several test modules."""
from qbundle.linalg import FinAlgebra, FinSpace
from qbundle.scalars import ONE


def matrix_algebra(n):
    labels = [f"e{i}{j}" for i in range(n) for j in range(n)]
    mult = {}
    for a in range(n * n):
        for b in range(n * n):
            i, j = divmod(a, n)
            k, l = divmod(b, n)
            mult[(a, b)] = {i * n + l: ONE} if j == k else {}
    return FinAlgebra(FinSpace(labels), mult, {i * n + i: ONE for i in range(n)})
