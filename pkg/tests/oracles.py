"""Independent reference computations used by the tests."""

from itertools import combinations
from math import gcd


def brute_det(m):
    """Laplace expansion; fine for the tiny matrices in the tests."""
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * m[0][j] * brute_det(minor)
    return total


def determinantal_divisors(m):
    """d_k = gcd of all k x k minors, for k = 1..rank."""
    rows, cols = len(m), len(m[0]) if m else 0
    out = []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                g = gcd(g, brute_det([[m[r][c] for c in cs] for r in rs]))
        if g == 0:
            break
        out.append(g)
    return out


def invariant_factors_oracle(m):
    d = determinantal_divisors(m)
    prev = 1
    out = []
    for x in d:
        out.append(x // prev)
        prev = x
    return out


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def hull3_oracle(points):
    """Facets (primitive inward normal, level) and vertices of conv(points) in Z^3.

    Brute force over point triples: a plane through three points supports the
    hull when every point lies on one side of it.
    """
    pts = sorted(set(tuple(p) for p in points))
    facets = set()
    for a, b, c in combinations(pts, 3):
        n = cross(sub(b, a), sub(c, a))
        if n == (0, 0, 0):
            continue
        vals = [dot(n, p) - dot(n, a) for p in pts]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            n = tuple(-x for x in n)
        else:
            continue
        g = 0
        for x in n:
            g = gcd(g, x)
        n = tuple(x // g for x in n)
        facets.add((n, dot(n, a)))
    vertices = []
    for p in pts:
        through = [n for n, lv in facets if dot(n, p) == lv]
        # p is a vertex iff three independent supporting planes pass through it
        if any(dot(cross(u, v), w) != 0 for u, v, w in combinations(through, 3)):
            vertices.append(p)
    return sorted(facets), vertices
