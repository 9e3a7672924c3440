"""Shared helpers for the test suite (imported as `from conftest import ...`)."""

import random


def random_unimodular(rng: random.Random, n: int, steps: int = 12):
    """Random GL_n(Z) matrix built from elementary integer row operations."""
    M = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        op = rng.randrange(3)
        i = rng.randrange(n)
        j = rng.randrange(n)
        if op == 0 and i != j:
            c = rng.randint(-3, 3)
            M[i] = [a + c * b for a, b in zip(M[i], M[j])]
        elif op == 1 and i != j:
            M[i], M[j] = M[j], M[i]
        elif op == 2:
            M[i] = [-a for a in M[i]]
    return tuple(tuple(row) for row in M)


def random_translation(rng: random.Random, n: int, bound: int = 9):
    return tuple(rng.randint(-bound, bound) for _ in range(n))


def apply_affine(U, t, points):
    """U.p + t for every p, returned sorted (handy for set comparisons)."""
    out = []
    for p in points:
        q = tuple(sum(U[i][k] * p[k] for k in range(len(p))) + t[i]
                  for i in range(len(t)))
        out.append(q)
    return tuple(sorted(out))
