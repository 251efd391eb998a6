"""Numba kernels: Householder Hessenberg reduction and single-shift complex QR.

Both routines work in place on a complex128 C-contiguous array. Only the
eigenvalues are produced, so each QR sweep touches just the active window.
"""
import numpy as np
from numba import njit

EPS = np.finfo(np.float64).eps
SAFMIN = np.finfo(np.float64).tiny


@njit(cache=True)
def _cabs1(z):
    return abs(z.real) + abs(z.imag)


@njit(cache=True)
def hessenberg_inplace(a):
    n = a.shape[0]
    v = np.zeros(n, dtype=np.complex128)
    w = np.zeros(n, dtype=np.complex128)
    for k in range(n - 2):
        xnorm2 = 0.0
        for i in range(k + 2, n):
            xnorm2 += a[i, k].real ** 2 + a[i, k].imag ** 2
        if xnorm2 == 0.0:
            continue
        alpha = a[k + 1, k]
        aabs = abs(alpha)
        norm = np.sqrt(aabs * aabs + xnorm2)
        phase = alpha / aabs if aabs != 0.0 else 1.0 + 0.0j
        beta = -phase * norm
        v[k + 1] = alpha - beta
        for i in range(k + 2, n):
            v[i] = a[i, k]
        vnorm2 = v[k + 1].real ** 2 + v[k + 1].imag ** 2 + xnorm2
        tau = 2.0 / vnorm2

        # left: rows k+1.., columns k..
        for j in range(k, n):
            w[j] = 0.0
        for i in range(k + 1, n):
            vc = v[i].conjugate()
            for j in range(k, n):
                w[j] += vc * a[i, j]
        for i in range(k + 1, n):
            vi = tau * v[i]
            for j in range(k, n):
                a[i, j] -= vi * w[j]

        # right: all rows, columns k+1..
        for i in range(n):
            s = 0.0 + 0.0j
            for j in range(k + 1, n):
                s += a[i, j] * v[j]
            s *= tau
            for j in range(k + 1, n):
                a[i, j] -= s * v[j].conjugate()

        a[k + 1, k] = beta
        for i in range(k + 2, n):
            a[i, k] = 0.0
    return a


@njit(cache=True)
def _wilkinson_shift(a11, a12, a21, a22):
    p = 0.5 * (a11 - a22)
    bc = a12 * a21
    disc = np.sqrt(p * p + bc)
    den1 = p + disc
    den2 = p - disc
    den = den1 if abs(den1) >= abs(den2) else den2
    if den == 0.0:
        return a22
    return a22 - bc / den


@njit(cache=True)
def hessenberg_qr_eigvals(h, max_sweeps):
    """Eigenvalues of upper Hessenberg ``h`` (destroyed).

    Returns ``(eigs, sweeps)``; ``sweeps`` is -1 when ``max_sweeps`` ran out.
    """
    n = h.shape[0]
    eigs = np.zeros(n, dtype=np.complex128)
    hi = n - 1
    sweeps = 0
    its = 0
    while hi >= 0:
        # locate the bottom of the active block
        lo = hi
        while lo > 0:
            sub = _cabs1(h[lo, lo - 1])
            if sub <= SAFMIN:
                break
            ref = _cabs1(h[lo - 1, lo - 1]) + _cabs1(h[lo, lo])
            if ref == 0.0:
                ref = 1.0
            if sub <= EPS * ref:
                break
            lo -= 1
        if lo > 0:
            h[lo, lo - 1] = 0.0
        if lo == hi:
            eigs[hi] = h[hi, hi]
            hi -= 1
            its = 0
            continue
        if sweeps >= max_sweeps:
            return eigs, -1
        sweeps += 1
        its += 1

        if its % 10 == 0:
            mu = h[hi, hi] + 0.75 * abs(h[hi, hi - 1].real)
        else:
            mu = _wilkinson_shift(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi])

        x = h[lo, lo] - mu
        y = h[lo + 1, lo]
        for k in range(lo, hi):
            if k > lo:
                x = h[k, k - 1]
                y = h[k + 1, k - 1]
            ax = abs(x)
            nrm = np.sqrt(ax * ax + y.real * y.real + y.imag * y.imag)
            if nrm == 0.0:
                continue
            if ax == 0.0:
                c = 0.0
                s = 1.0 + 0.0j
            else:
                c = ax / nrm
                s = (x / ax) * y.conjugate() / nrm
            sc = s.conjugate()
            jstart = k - 1 if k > lo else lo
            for j in range(jstart, hi + 1):
                t1 = h[k, j]
                t2 = h[k + 1, j]
                h[k, j] = c * t1 + s * t2
                h[k + 1, j] = c * t2 - sc * t1
            if k > lo:
                h[k + 1, k - 1] = 0.0
            iend = k + 2 if k + 2 < hi else hi
            for i in range(lo, iend + 1):
                t1 = h[i, k]
                t2 = h[i, k + 1]
                h[i, k] = c * t1 + sc * t2
                h[i, k + 1] = c * t2 - s * t1
    return eigs, sweeps


@njit(cache=True)
def eigvals(a, max_sweeps):
    h = hessenberg_inplace(a)
    return hessenberg_qr_eigvals(h, max_sweeps)
