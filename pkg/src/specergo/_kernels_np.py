"""Pure-numpy twin of ``_kernels_nb``; same algorithm, vectorised per step."""
import numpy as np

EPS = np.finfo(np.float64).eps
SAFMIN = np.finfo(np.float64).tiny


def _cabs1(z):
    return abs(z.real) + abs(z.imag)


def hessenberg_inplace(a):
    n = a.shape[0]
    for k in range(n - 2):
        x = a[k + 1:, k]
        xnorm2 = float(np.vdot(x[1:], x[1:]).real)
        if xnorm2 == 0.0:
            continue
        alpha = x[0]
        aabs = abs(alpha)
        norm = np.sqrt(aabs * aabs + xnorm2)
        phase = alpha / aabs if aabs != 0.0 else 1.0 + 0.0j
        beta = -phase * norm
        v = x.copy()
        v[0] = alpha - beta
        tau = 2.0 / float(np.vdot(v, v).real)
        blk = a[k + 1:, k:]
        blk -= np.outer(tau * v, v.conj() @ blk)
        blk = a[:, k + 1:]
        blk -= np.outer(tau * (blk @ v), v.conj())
        a[k + 1, k] = beta
        a[k + 2:, k] = 0.0
    return a


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


def hessenberg_qr_eigvals(h, max_sweeps):
    n = h.shape[0]
    eigs = np.zeros(n, dtype=np.complex128)
    hi = n - 1
    sweeps = 0
    its = 0
    while hi >= 0:
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
                c, s = 0.0, 1.0 + 0.0j
            else:
                c = ax / nrm
                s = (x / ax) * y.conjugate() / nrm
            sc = s.conjugate()
            jstart = k - 1 if k > lo else lo
            r1 = h[k, jstart:hi + 1].copy()
            r2 = h[k + 1, jstart:hi + 1]
            h[k, jstart:hi + 1] = c * r1 + s * r2
            h[k + 1, jstart:hi + 1] = c * r2 - sc * r1
            if k > lo:
                h[k + 1, k - 1] = 0.0
            iend = min(k + 2, hi)
            c1 = h[lo:iend + 1, k].copy()
            c2 = h[lo:iend + 1, k + 1]
            h[lo:iend + 1, k] = c * c1 + sc * c2
            h[lo:iend + 1, k + 1] = c * c2 - s * c1
    return eigs, sweeps


def eigvals(a, max_sweeps):
    h = hessenberg_inplace(a)
    return hessenberg_qr_eigvals(h, max_sweeps)
