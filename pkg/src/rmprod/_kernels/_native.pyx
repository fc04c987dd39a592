# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: continued-fraction chains, renormalized matrix
products, the wavefunction recursion and Stieltjes convergents.

Every routine has a pure-Python twin in ``_fallback.py``; the arithmetic is
written operation-for-operation identically so both produce bit-equal output.
"""

from libc.math cimport log, sqrt

IMPLEMENTATION = "native"


def chain_cone(double[::1] a, double cos_a, double sin_a,
               double z0re, double z0im,
               double[::1] out_re, double[::1] out_im):
    """Iterate z_k = 1/(z_{k-1} + a_k e^{i alpha}), storing the trajectory."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t k
    cdef double zre = z0re, zim = z0im
    cdef double wre, wim, d
    for k in range(n):
        wre = zre + a[k] * cos_a
        wim = zim + a[k] * sin_a
        d = wre * wre + wim * wim
        if d == 0.0:
            d = 1e-300
        zre = wre / d
        zim = -wim / d
        out_re[k] = zre
        out_im[k] = zim


def chain_axis(double[::1] a, double sign, double y0, double[::1] out):
    """Iterate Y_k = -1/(sign*a_k + Y_{k-1}) on the imaginary axis."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t k
    cdef double y = y0, d
    for k in range(n):
        d = sign * a[k] + y
        if d == 0.0:
            d = 1e-300
        y = -1.0 / d
        out[k] = y


def matrix_product_logs(double[::1] a, double cos_a, double sin_a,
                        double[::1] logs):
    """Accumulate M <- M * [[0,1],[1,a_k e^{i alpha}]] with per-step
    renormalization by the largest entry modulus.

    ``logs[k]`` receives the log of the factor extracted at step k; the
    returned tuple is the stored (renormalized) matrix entries
    (m11, m12, m21, m22) as complex values.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t k
    cdef double m11r = 1.0, m11i = 0.0, m12r = 0.0, m12i = 0.0
    cdef double m21r = 0.0, m21i = 0.0, m22r = 1.0, m22i = 0.0
    cdef double qr, qi, t11r, t11i, t21r, t21i, m, cand
    for k in range(n):
        qr = a[k] * cos_a
        qi = a[k] * sin_a
        # right-multiply: columns become (old col2, old col1 + old col2 * q)
        t11r = m11r
        t11i = m11i
        t21r = m21r
        t21i = m21i
        m11r = m12r
        m11i = m12i
        m21r = m22r
        m21i = m22i
        m12r = t11r + m11r * qr - m11i * qi
        m12i = t11i + m11r * qi + m11i * qr
        m22r = t21r + m21r * qr - m21i * qi
        m22i = t21i + m21r * qi + m21i * qr
        m = sqrt(m11r * m11r + m11i * m11i)
        cand = sqrt(m12r * m12r + m12i * m12i)
        if cand > m:
            m = cand
        cand = sqrt(m21r * m21r + m21i * m21i)
        if cand > m:
            m = cand
        cand = sqrt(m22r * m22r + m22i * m22i)
        if cand > m:
            m = cand
        m11r /= m
        m11i /= m
        m12r /= m
        m12i /= m
        m21r /= m
        m21i /= m
        m22r /= m
        m22i /= m
        logs[k] = log(m)
    return (complex(m11r, m11i), complex(m12r, m12i),
            complex(m21r, m21i), complex(m22r, m22i))


def wavefunction_logs(double[::1] a, double y0, double y1,
                      Py_ssize_t renorm_every, double[::1] logs):
    """Iterate y_{k+1} = a_k y_k - y_{k-1} with periodic renormalization.

    Returns (y_prev, y_cur, n_events); logs[j] holds the extracted log at
    renormalization event j.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t k, j = 0
    cdef double yp = y0, yc = y1, yn, m
    for k in range(n):
        yn = a[k] * yc - yp
        yp = yc
        yc = yn
        if (k + 1) % renorm_every == 0:
            m = yp if yp >= 0.0 else -yp
            cand = yc if yc >= 0.0 else -yc
            if cand > m:
                m = cand
            if m == 0.0:
                m = 1e-300
            yp /= m
            yc /= m
            logs[j] = log(m)
            j += 1
    return yp, yc, j


def stieltjes_forward(double[::1] c, double tre, double tim,
                      double[::1] f_re, double[::1] f_im,
                      double[::1] ln_b, double[::1] ph_re, double[::1] ph_im):
    """Forward three-term recurrence for F_n = A_n/B_n of the random
    Stieltjes fraction, renormalized jointly each step.

    Writes, for n = 1..N (index n-1): the convergent F_n, the true
    log-magnitude ln|B_n|, and the phase B_n/|B_n|.
    """
    cdef Py_ssize_t n = c.shape[0]
    cdef Py_ssize_t k
    # levels k-1 and k of A and B, renormalized by a shared factor
    cdef double apr = 1.0, api = 0.0, acr = 0.0, aci = 0.0
    cdef double bpr = 0.0, bpi = 0.0, bcr = 1.0, bci = 0.0
    cdef double lsum = 0.0
    cdef double anr, ani, bnr, bni, m, cand, d, babs
    for k in range(n):
        if k == 0:
            # a_1 = 1: A_1 = c_1 A_0 + A_{-1}, B_1 = c_1 B_0 + B_{-1}
            anr = c[0] * acr + apr
            ani = c[0] * aci + api
            bnr = c[0] * bcr + bpr
            bni = c[0] * bci + bpi
        else:
            # a_k = t
            anr = c[k] * acr + tre * apr - tim * api
            ani = c[k] * aci + tre * api + tim * apr
            bnr = c[k] * bcr + tre * bpr - tim * bpi
            bni = c[k] * bci + tre * bpi + tim * bpr
        apr = acr
        api = aci
        bpr = bcr
        bpi = bci
        acr = anr
        aci = ani
        bcr = bnr
        bci = bni
        m = sqrt(acr * acr + aci * aci)
        cand = sqrt(bcr * bcr + bci * bci)
        if cand > m:
            m = cand
        if m == 0.0:
            m = 1e-300
        acr /= m
        aci /= m
        bcr /= m
        bci /= m
        apr /= m
        api /= m
        bpr /= m
        bpi /= m
        lsum += log(m)
        d = bcr * bcr + bci * bci
        if d == 0.0:
            d = 1e-300
        f_re[k] = (acr * bcr + aci * bci) / d
        f_im[k] = (aci * bcr - acr * bci) / d
        babs = sqrt(bcr * bcr + bci * bci)
        ln_b[k] = log(babs) + lsum
        if babs == 0.0:
            babs = 1e-300
        ph_re[k] = bcr / babs
        ph_im[k] = bci / babs
