"""Pure-Python twins of the compiled kernels.

The arithmetic mirrors ``_native.pyx`` operation for operation so that both
implementations produce bit-identical results; only the speed differs.
"""

from math import log, sqrt

IMPLEMENTATION = "fallback"


def chain_cone(a, cos_a, sin_a, z0re, z0im, out_re, out_im):
    """Iterate z_k = 1/(z_{k-1} + a_k e^{i alpha}), storing the trajectory."""
    zre, zim = z0re, z0im
    for k in range(len(a)):
        wre = zre + a[k] * cos_a
        wim = zim + a[k] * sin_a
        d = wre * wre + wim * wim
        if d == 0.0:
            d = 1e-300
        zre = wre / d
        zim = -wim / d
        out_re[k] = zre
        out_im[k] = zim


def chain_axis(a, sign, y0, out):
    """Iterate Y_k = -1/(sign*a_k + Y_{k-1}) on the imaginary axis."""
    y = y0
    for k in range(len(a)):
        d = sign * a[k] + y
        if d == 0.0:
            d = 1e-300
        y = -1.0 / d
        out[k] = y


def matrix_product_logs(a, cos_a, sin_a, logs):
    """See the native twin: renormalized product of [[0,1],[1,a e^{i alpha}]]."""
    m11r, m11i, m12r, m12i = 1.0, 0.0, 0.0, 0.0
    m21r, m21i, m22r, m22i = 0.0, 0.0, 1.0, 0.0
    for k in range(len(a)):
        qr = a[k] * cos_a
        qi = a[k] * sin_a
        t11r, t11i, t21r, t21i = m11r, m11i, m21r, m21i
        m11r, m11i, m21r, m21i = m12r, m12i, m22r, m22i
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


def wavefunction_logs(a, y0, y1, renorm_every, logs):
    """Iterate y_{k+1} = a_k y_k - y_{k-1} with periodic renormalization."""
    yp, yc = y0, y1
    j = 0
    for k in range(len(a)):
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


def stieltjes_forward(c, tre, tim, f_re, f_im, ln_b, ph_re, ph_im):
    """Forward three-term recurrence for the Stieltjes convergents."""
    apr, api, acr, aci = 1.0, 0.0, 0.0, 0.0
    bpr, bpi, bcr, bci = 0.0, 0.0, 1.0, 0.0
    lsum = 0.0
    for k in range(len(c)):
        if k == 0:
            anr = c[0] * acr + apr
            ani = c[0] * aci + api
            bnr = c[0] * bcr + bpr
            bni = c[0] * bci + bpi
        else:
            anr = c[k] * acr + tre * apr - tim * api
            ani = c[k] * aci + tre * api + tim * apr
            bnr = c[k] * bcr + tre * bpr - tim * bpi
            bni = c[k] * bci + tre * bpi + tim * bpr
        apr, api, bpr, bpi = acr, aci, bcr, bci
        acr, aci, bcr, bci = anr, ani, bnr, bni
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
