"""Slow, independent reference computations used only by the tests.

Nothing here calls into specergo; each oracle uses a different route from
the code it checks.
"""
import cmath
import math


def naive_matmul(a, b):
    n, k = len(a), len(a[0])
    m = len(b[0])
    out = [[0j] * m for _ in range(n)]
    for i in range(n):
        for j in range(m):
            s = 0j
            for t in range(k):
                s += a[i][t] * b[t][j]
            out[i][j] = s
    return out


def lu_det(a):
    """Determinant by Gaussian elimination with partial pivoting."""
    m = [list(map(complex, row)) for row in a]
    n = len(m)
    det = 1 + 0j
    for k in range(n):
        p = max(range(k, n), key=lambda i: abs(m[i][k]))
        if m[p][k] == 0:
            return 0j
        if p != k:
            m[k], m[p] = m[p], m[k]
            det = -det
        det *= m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            for j in range(k, n):
                m[i][j] -= f * m[k][j]
    return det


def charpoly(a):
    """Monic characteristic polynomial coefficients (highest first), Faddeev-LeVerrier."""
    n = len(a)
    ident = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]
    coeffs = [1 + 0j]
    m = [[0j] * n for _ in range(n)]
    for k in range(1, n + 1):
        am = naive_matmul(a, m)
        m = [[am[i][j] + coeffs[-1] * ident[i][j] for j in range(n)] for i in range(n)]
        am = naive_matmul(a, m)
        c = -sum(am[i][i] for i in range(n)) / k
        coeffs.append(c)
    return coeffs


def polyval(coeffs, z):
    acc = 0j
    for c in coeffs:
        acc = acc * z + c
    return acc


def poly_roots(coeffs, iters=500):
    """Durand-Kerner simultaneous iteration, then Newton polishing."""
    n = len(coeffs) - 1
    radius = 1 + max(abs(c) for c in coeffs[1:])
    roots = [radius * cmath.exp(2j * math.pi * (k + 0.25) / n) for k in range(n)]
    for _ in range(iters):
        new = []
        for i, r in enumerate(roots):
            den = 1 + 0j
            for j, s in enumerate(roots):
                if j != i:
                    den *= r - s
            new.append(r - polyval(coeffs, r) / den if den != 0 else r)
        roots = new
    deriv = [c * (n - i) for i, c in enumerate(coeffs[:-1])]
    polished = []
    for r in roots:
        for _ in range(5):
            d = polyval(deriv, r)
            if d == 0:
                break
            r = r - polyval(coeffs, r) / d
        polished.append(r)
    return polished


def match_multisets(xs, ys):
    """Greedy nearest matching; returns the worst matched distance."""
    ys = list(ys)
    worst = 0.0
    for x in xs:
        j = min(range(len(ys)), key=lambda t: abs(ys[t] - x))
        worst = max(worst, abs(ys[j] - x))
        ys.pop(j)
    return worst


def histogram_by_counting(phases, k_bins):
    """Bin phases in [-pi, pi) by comparing against each edge explicitly."""
    width = 2 * math.pi / k_bins
    counts = [0] * k_bins
    for p in phases:
        if p >= math.pi:
            p = -math.pi
        k = 0
        while k + 1 < k_bins and p >= -math.pi + (k + 1) * width:
            k += 1
        counts[k] += 1
    return counts


def omega_double_loop(densities, size_n):
    m = len(densities)
    k_bins = len(densities[0])
    out = []
    for k in range(k_bins):
        mean = 0.0
        for j in range(m):
            mean += densities[j][k]
        mean /= m
        acc = 0.0
        for j in range(m):
            acc += (densities[j][k] - mean) ** 2
        out.append(acc / (m * size_n))
    return out


def kl_sum(a, b, eps):
    total = 0.0
    for x, y in zip(a, b):
        x, y = max(x, eps), max(y, eps)
        total += x * math.log(x / y, 2)
    return total


def greedy_phase_pairs(phases):
    """Pair each phase with its nearest unpaired neighbour on the circle.

    Returns the list of intra-pair distances, or None if an odd one is left.
    """
    remaining = sorted(phases)
    dists = []
    while remaining:
        p = remaining.pop(0)
        if not remaining:
            return None
        j = min(range(len(remaining)),
                key=lambda t: abs(cmath.phase(cmath.exp(1j * (remaining[t] - p)))))
        q = remaining.pop(j)
        dists.append(abs(cmath.phase(cmath.exp(1j * (q - p)))))
    return dists
