"""Numerical kernels.

Everything here is written to be compiled by numba's ``njit`` (see
``_backend.jit_kernel``) but runs unchanged as plain Python when the numpy
backend is selected.  Scalar interval operations pass endpoints as floats
and return tuples; batch kernels loop over contiguous float64 arrays.

Interval soundness convention: every arithmetic result is widened outward
by one ulp per endpoint (``math.nextafter`` toward the respective
infinity) AFTER the rounded-to-nearest float computation.  Since IEEE-754
round-to-nearest never strays past the neighbouring representable, the
widened interval encloses the exact real result.

Complex intervals are rectangles [re_lo, re_hi] + i*[im_lo, im_hi] stored
as 4 consecutive floats; a box over C^n is a float64 array of shape (n, 4).
"""

import math

import numpy as np

from ._backend import jit_kernel

_INF = math.inf


# ---------------------------------------------------------------------------
# scalar real interval ops
# ---------------------------------------------------------------------------

@jit_kernel
def r_add(al, ah, bl, bh):
    return math.nextafter(al + bl, -_INF), math.nextafter(ah + bh, _INF)


@jit_kernel
def r_sub(al, ah, bl, bh):
    return math.nextafter(al - bh, -_INF), math.nextafter(ah - bl, _INF)


@jit_kernel
def r_mul(al, ah, bl, bh):
    p1 = al * bl
    p2 = al * bh
    p3 = ah * bl
    p4 = ah * bh
    lo = min(min(p1, p2), min(p3, p4))
    hi = max(max(p1, p2), max(p3, p4))
    return math.nextafter(lo, -_INF), math.nextafter(hi, _INF)


@jit_kernel
def r_div(al, ah, bl, bh):
    # caller guarantees 0 is not in [bl, bh]
    q1 = al / bl
    q2 = al / bh
    q3 = ah / bl
    q4 = ah / bh
    lo = min(min(q1, q2), min(q3, q4))
    hi = max(max(q1, q2), max(q3, q4))
    return math.nextafter(lo, -_INF), math.nextafter(hi, _INF)


# ---------------------------------------------------------------------------
# scalar complex (rectangle) ops
# ---------------------------------------------------------------------------

@jit_kernel
def c_add(arl, arh, ail, aih, brl, brh, bil, bih):
    rl, rh = r_add(arl, arh, brl, brh)
    il, ih = r_add(ail, aih, bil, bih)
    return rl, rh, il, ih


@jit_kernel
def c_sub(arl, arh, ail, aih, brl, brh, bil, bih):
    rl, rh = r_sub(arl, arh, brl, brh)
    il, ih = r_sub(ail, aih, bil, bih)
    return rl, rh, il, ih


@jit_kernel
def c_mul(arl, arh, ail, aih, brl, brh, bil, bih):
    # Re = Re_a*Re_b - Im_a*Im_b, Im = Re_a*Im_b + Im_a*Re_b
    p1l, p1h = r_mul(arl, arh, brl, brh)
    p2l, p2h = r_mul(ail, aih, bil, bih)
    rl, rh = r_sub(p1l, p1h, p2l, p2h)
    p3l, p3h = r_mul(arl, arh, bil, bih)
    p4l, p4h = r_mul(ail, aih, brl, brh)
    il, ih = r_add(p3l, p3h, p4l, p4h)
    return rl, rh, il, ih


@jit_kernel
def c_den(brl, brh, bil, bih):
    # denominator interval Re_b*Re_b + Im_b*Im_b of complex division
    s1l, s1h = r_mul(brl, brh, brl, brh)
    s2l, s2h = r_mul(bil, bih, bil, bih)
    return r_add(s1l, s1h, s2l, s2h)


@jit_kernel
def c_div(arl, arh, ail, aih, brl, brh, bil, bih):
    # caller guarantees 0 is not in the denominator interval
    dl, dh = c_den(brl, brh, bil, bih)
    n1l, n1h = r_mul(arl, arh, brl, brh)
    n2l, n2h = r_mul(ail, aih, bil, bih)
    rnl, rnh = r_add(n1l, n1h, n2l, n2h)
    n3l, n3h = r_mul(ail, aih, brl, brh)
    n4l, n4h = r_mul(arl, arh, bil, bih)
    inl, inh = r_sub(n3l, n3h, n4l, n4h)
    rl, rh = r_div(rnl, rnh, dl, dh)
    il, ih = r_div(inl, inh, dl, dh)
    return rl, rh, il, ih


@jit_kernel
def c_mag(rl, rh, il, ih):
    # upper bound on |z| over the rectangle, rounded up at every step
    a = max(abs(rl), abs(rh))
    b = max(abs(il), abs(ih))
    s1 = math.nextafter(a * a, _INF)
    s2 = math.nextafter(b * b, _INF)
    s = math.nextafter(s1 + s2, _INF)
    return math.nextafter(math.sqrt(s), _INF)


# ---------------------------------------------------------------------------
# box ops (n, 4)
# ---------------------------------------------------------------------------

@jit_kernel
def box_add(a, b):
    n = a.shape[0]
    out = np.empty((n, 4), np.float64)
    for i in range(n):
        rl, rh, il, ih = c_add(a[i, 0], a[i, 1], a[i, 2], a[i, 3],
                               b[i, 0], b[i, 1], b[i, 2], b[i, 3])
        out[i, 0] = rl
        out[i, 1] = rh
        out[i, 2] = il
        out[i, 3] = ih
    return out


@jit_kernel
def box_sub(a, b):
    n = a.shape[0]
    out = np.empty((n, 4), np.float64)
    for i in range(n):
        rl, rh, il, ih = c_sub(a[i, 0], a[i, 1], a[i, 2], a[i, 3],
                               b[i, 0], b[i, 1], b[i, 2], b[i, 3])
        out[i, 0] = rl
        out[i, 1] = rh
        out[i, 2] = il
        out[i, 3] = ih
    return out


@jit_kernel
def box_mul(a, b):
    n = a.shape[0]
    out = np.empty((n, 4), np.float64)
    for i in range(n):
        rl, rh, il, ih = c_mul(a[i, 0], a[i, 1], a[i, 2], a[i, 3],
                               b[i, 0], b[i, 1], b[i, 2], b[i, 3])
        out[i, 0] = rl
        out[i, 1] = rh
        out[i, 2] = il
        out[i, 3] = ih
    return out


@jit_kernel
def box_div(a, b):
    # caller guarantees each denominator interval excludes 0
    n = a.shape[0]
    out = np.empty((n, 4), np.float64)
    for i in range(n):
        rl, rh, il, ih = c_div(a[i, 0], a[i, 1], a[i, 2], a[i, 3],
                               b[i, 0], b[i, 1], b[i, 2], b[i, 3])
        out[i, 0] = rl
        out[i, 1] = rh
        out[i, 2] = il
        out[i, 3] = ih
    return out


@jit_kernel
def box_dens(b):
    # denominator intervals of entrywise complex division (for zero checks)
    n = b.shape[0]
    out = np.empty((n, 2), np.float64)
    for i in range(n):
        dl, dh = c_den(b[i, 0], b[i, 1], b[i, 2], b[i, 3])
        out[i, 0] = dl
        out[i, 1] = dh
    return out


@jit_kernel
def box_shift(box, vre, vim):
    # box + v for a point vector v (degenerate intervals)
    n = box.shape[0]
    out = np.empty((n, 4), np.float64)
    for i in range(n):
        rl, rh, il, ih = c_add(box[i, 0], box[i, 1], box[i, 2], box[i, 3],
                               vre[i], vre[i], vim[i], vim[i])
        out[i, 0] = rl
        out[i, 1] = rh
        out[i, 2] = il
        out[i, 3] = ih
    return out


@jit_kernel
def box_centered_k(xre, xim, r):
    n = xre.shape[0]
    out = np.empty((n, 4), np.float64)
    for i in range(n):
        out[i, 0] = math.nextafter(xre[i] - r, -_INF)
        out[i, 1] = math.nextafter(xre[i] + r, _INF)
        out[i, 2] = math.nextafter(xim[i] - r, -_INF)
        out[i, 3] = math.nextafter(xim[i] + r, _INF)
    return out


@jit_kernel
def box_contains_k(outer, inner):
    n = outer.shape[0]
    for i in range(n):
        if inner[i, 0] < outer[i, 0] or inner[i, 1] > outer[i, 1]:
            return False
        if inner[i, 2] < outer[i, 2] or inner[i, 3] > outer[i, 3]:
            return False
    return True


@jit_kernel
def box_norm_k(box):
    n = box.shape[0]
    m = 0.0
    for i in range(n):
        v = c_mag(box[i, 0], box[i, 1], box[i, 2], box[i, 3])
        if v > m:
            m = v
    return m


# ---------------------------------------------------------------------------
# interval matrices (r, c, 4)
# ---------------------------------------------------------------------------

@jit_kernel
def inorm_k(mat):
    # max row sum of entry magnitudes, rounded up
    r = mat.shape[0]
    c = mat.shape[1]
    best = 0.0
    for i in range(r):
        s = 0.0
        for j in range(c):
            v = c_mag(mat[i, j, 0], mat[i, j, 1], mat[i, j, 2], mat[i, j, 3])
            s = math.nextafter(s + v, _INF)
        if s > best:
            best = s
    return best


@jit_kernel
def imatvec_k(mat, vec):
    r = mat.shape[0]
    c = mat.shape[1]
    out = np.empty((r, 4), np.float64)
    for i in range(r):
        arl = 0.0
        arh = 0.0
        ail = 0.0
        aih = 0.0
        for j in range(c):
            prl, prh, pil, pih = c_mul(
                mat[i, j, 0], mat[i, j, 1], mat[i, j, 2], mat[i, j, 3],
                vec[j, 0], vec[j, 1], vec[j, 2], vec[j, 3])
            arl, arh, ail, aih = c_add(arl, arh, ail, aih, prl, prh, pil, pih)
        out[i, 0] = arl
        out[i, 1] = arh
        out[i, 2] = ail
        out[i, 3] = aih
    return out


@jit_kernel
def pmatvec_k(yre, yim, vec):
    # point matrix times interval vector
    r = yre.shape[0]
    c = yre.shape[1]
    out = np.empty((r, 4), np.float64)
    for i in range(r):
        arl = 0.0
        arh = 0.0
        ail = 0.0
        aih = 0.0
        for j in range(c):
            prl, prh, pil, pih = c_mul(
                yre[i, j], yre[i, j], yim[i, j], yim[i, j],
                vec[j, 0], vec[j, 1], vec[j, 2], vec[j, 3])
            arl, arh, ail, aih = c_add(arl, arh, ail, aih, prl, prh, pil, pih)
        out[i, 0] = arl
        out[i, 1] = arh
        out[i, 2] = ail
        out[i, 3] = aih
    return out


@jit_kernel
def residual_k(yre, yim, mat):
    # identity minus (point matrix Y) * (interval matrix)
    n = yre.shape[0]
    out = np.empty((n, n, 4), np.float64)
    for i in range(n):
        for j in range(n):
            arl = 0.0
            arh = 0.0
            ail = 0.0
            aih = 0.0
            for k in range(n):
                prl, prh, pil, pih = c_mul(
                    yre[i, k], yre[i, k], yim[i, k], yim[i, k],
                    mat[k, j, 0], mat[k, j, 1], mat[k, j, 2], mat[k, j, 3])
                arl, arh, ail, aih = c_add(arl, arh, ail, aih,
                                           prl, prh, pil, pih)
            d = 1.0 if i == j else 0.0
            rl, rh, il, ih = c_sub(d, d, 0.0, 0.0, arl, arh, ail, aih)
            out[i, j, 0] = rl
            out[i, j, 1] = rh
            out[i, j, 2] = il
            out[i, j, 3] = ih
    return out


# ---------------------------------------------------------------------------
# homotopy preludes
# ---------------------------------------------------------------------------

@jit_kernel
def param_interval_k(p0re, p0im, p1re, p1im, tlo, thi):
    # (1 - T)*p0 + T*p1 entrywise, T = [tlo, thi] real
    m = p0re.shape[0]
    out = np.empty((m, 4), np.float64)
    ul, uh = r_sub(1.0, 1.0, tlo, thi)
    for k in range(m):
        arl, arh, ail, aih = c_mul(ul, uh, 0.0, 0.0,
                                   p0re[k], p0re[k], p0im[k], p0im[k])
        brl, brh, bil, bih = c_mul(tlo, thi, 0.0, 0.0,
                                   p1re[k], p1re[k], p1im[k], p1im[k])
        rl, rh, il, ih = c_add(arl, arh, ail, aih, brl, brh, bil, bih)
        out[k, 0] = rl
        out[k, 1] = rh
        out[k, 2] = il
        out[k, 3] = ih
    return out


@jit_kernel
def shear_box_k(box, are, aim, bre, bim, tlo, thi):
    # box + (a + T*b) entrywise, the interval image of a time-linear shift
    n = box.shape[0]
    out = np.empty((n, 4), np.float64)
    for i in range(n):
        srl, srh, sil, sih = c_mul(tlo, thi, 0.0, 0.0,
                                   bre[i], bre[i], bim[i], bim[i])
        srl, srh, sil, sih = c_add(srl, srh, sil, sih,
                                   are[i], are[i], aim[i], aim[i])
        rl, rh, il, ih = c_add(box[i, 0], box[i, 1], box[i, 2], box[i, 3],
                               srl, srh, sil, sih)
        out[i, 0] = rl
        out[i, 1] = rh
        out[i, 2] = il
        out[i, 3] = ih
    return out


# ---------------------------------------------------------------------------
# polynomial evaluation
# ---------------------------------------------------------------------------

@jit_kernel
def eval_terms_interval(coef_re, coef_im, fac, par, expo, ptr, max_expo, z, pv):
    """Interval evaluation of a flattened term list.

    Equation i is the sum of terms t in [ptr[i], ptr[i+1]):
      coef[t] * fac[t] * pv[par[t]] * prod_j z[j]^expo[t, j]
    with the parameter factor skipped when par[t] < 0.  ``fac`` carries
    exact small-integer multiplicities (from differentiation); it is
    applied with interval semantics so no rounding is silently dropped.
    """
    neq = ptr.shape[0] - 1
    n = z.shape[0]
    zpow = np.empty((n, max_expo + 1, 4), np.float64)
    for j in range(n):
        zpow[j, 0, 0] = 1.0
        zpow[j, 0, 1] = 1.0
        zpow[j, 0, 2] = 0.0
        zpow[j, 0, 3] = 0.0
        for e in range(1, max_expo + 1):
            rl, rh, il, ih = c_mul(
                zpow[j, e - 1, 0], zpow[j, e - 1, 1],
                zpow[j, e - 1, 2], zpow[j, e - 1, 3],
                z[j, 0], z[j, 1], z[j, 2], z[j, 3])
            zpow[j, e, 0] = rl
            zpow[j, e, 1] = rh
            zpow[j, e, 2] = il
            zpow[j, e, 3] = ih
    out = np.empty((neq, 4), np.float64)
    for i in range(neq):
        arl = 0.0
        arh = 0.0
        ail = 0.0
        aih = 0.0
        for t in range(ptr[i], ptr[i + 1]):
            vrl = coef_re[t]
            vrh = coef_re[t]
            vil = coef_im[t]
            vih = coef_im[t]
            if fac[t] != 1.0:
                vrl, vrh, vil, vih = c_mul(vrl, vrh, vil, vih,
                                           fac[t], fac[t], 0.0, 0.0)
            k = par[t]
            if k >= 0:
                vrl, vrh, vil, vih = c_mul(vrl, vrh, vil, vih,
                                           pv[k, 0], pv[k, 1],
                                           pv[k, 2], pv[k, 3])
            for j in range(n):
                e = expo[t, j]
                if e > 0:
                    vrl, vrh, vil, vih = c_mul(
                        vrl, vrh, vil, vih,
                        zpow[j, e, 0], zpow[j, e, 1],
                        zpow[j, e, 2], zpow[j, e, 3])
            arl, arh, ail, aih = c_add(arl, arh, ail, aih, vrl, vrh, vil, vih)
        out[i, 0] = arl
        out[i, 1] = arh
        out[i, 2] = ail
        out[i, 3] = aih
    return out


@jit_kernel
def tpoly_linmul(w, wdeg, arl, arh, ail, aih, brl, brh, bil, bih):
    # in-place multiply of the coefficient polynomial w[0..wdeg] by
    # (A + B*tau); slots above wdeg must be zero on entry
    for d in range(wdeg + 1, 0, -1):
        hrl, hrh, hil, hih = c_mul(w[d, 0], w[d, 1], w[d, 2], w[d, 3],
                                   arl, arh, ail, aih)
        lrl, lrh, lil, lih = c_mul(w[d - 1, 0], w[d - 1, 1],
                                   w[d - 1, 2], w[d - 1, 3],
                                   brl, brh, bil, bih)
        rl, rh, il, ih = c_add(hrl, hrh, hil, hih, lrl, lrh, lil, lih)
        w[d, 0] = rl
        w[d, 1] = rh
        w[d, 2] = il
        w[d, 3] = ih
    rl, rh, il, ih = c_mul(w[0, 0], w[0, 1], w[0, 2], w[0, 3],
                           arl, arh, ail, aih)
    w[0, 0] = rl
    w[0, 1] = rh
    w[0, 2] = il
    w[0, 3] = ih
    return wdeg + 1


@jit_kernel
def eval_terms_tpoly(coef_re, coef_im, fac, par, expo, ptr, dmax,
                     x_re, x_im, sa_re, sa_im, sb_re, sb_im, has_shear,
                     p0_re, p0_im, p1_re, p1_im, t_lo, t_hi):
    """Enclosure over t in [t_lo, t_hi] of a term list at a fixed point x.

    Every time-dependent factor is kept as a degree-1 polynomial in the
    local offset tau = t - tc, anchored at the window midpoint tc:
    variables enter as x_j + s_j(tc) + s'_j*tau, parameters as
    p(tc) + (p1 - p0)*tau.  Term products are convolved with interval
    coefficients and only then is the symmetric tau interval
    substituted, with odd/even powers bounded by their actual ranges.
    Cancellations between the shear slope and the parameter drift (and,
    at the midpoint, between the two refined window endpoints) happen
    in coefficient arithmetic instead of being lost to independent
    copies of the time interval.
    """
    neq = ptr.shape[0] - 1
    n = x_re.shape[0]
    m = p0_re.shape[0]
    nd = dmax + 2
    tc = 0.5 * (t_lo + t_hi)
    if tc < t_lo:
        tc = t_lo
    elif tc > t_hi:
        tc = t_hi
    z0 = np.empty((n, 4), np.float64)
    for j in range(n):
        if has_shear:
            rl, rh = r_mul(sb_re[j], sb_re[j], tc, tc)
            il, ih = r_mul(sb_im[j], sb_im[j], tc, tc)
            rl, rh = r_add(rl, rh, sa_re[j], sa_re[j])
            il, ih = r_add(il, ih, sa_im[j], sa_im[j])
            rl, rh = r_add(rl, rh, x_re[j], x_re[j])
            il, ih = r_add(il, ih, x_im[j], x_im[j])
        else:
            rl = x_re[j]
            rh = x_re[j]
            il = x_im[j]
            ih = x_im[j]
        z0[j, 0] = rl
        z0[j, 1] = rh
        z0[j, 2] = il
        z0[j, 3] = ih
    # parameter drift p1 - p0 as an interval (the float difference rounds)
    # and the path point p(t_lo) = p0 + t_lo*(p1 - p0)
    dq = np.empty((m, 4), np.float64)
    q0 = np.empty((m, 4), np.float64)
    for k in range(m):
        drl, drh = r_sub(p1_re[k], p1_re[k], p0_re[k], p0_re[k])
        dil, dih = r_sub(p1_im[k], p1_im[k], p0_im[k], p0_im[k])
        dq[k, 0] = drl
        dq[k, 1] = drh
        dq[k, 2] = dil
        dq[k, 3] = dih
        rl, rh = r_mul(drl, drh, tc, tc)
        il, ih = r_mul(dil, dih, tc, tc)
        rl, rh = r_add(rl, rh, p0_re[k], p0_re[k])
        il, ih = r_add(il, ih, p0_im[k], p0_im[k])
        q0[k, 0] = rl
        q0[k, 1] = rh
        q0[k, 2] = il
        q0[k, 3] = ih
    tau_lo, _ = r_sub(t_lo, t_lo, tc, tc)
    _, tau_hi = r_sub(t_hi, t_hi, tc, tc)
    w = np.empty((nd, 4), np.float64)
    acc = np.empty((nd, 4), np.float64)
    out = np.empty((neq, 4), np.float64)
    for i in range(neq):
        for d in range(nd):
            for c in range(4):
                acc[d, c] = 0.0
        for t in range(ptr[i], ptr[i + 1]):
            for d in range(nd):
                for c in range(4):
                    w[d, c] = 0.0
            w[0, 0] = coef_re[t]
            w[0, 1] = coef_re[t]
            w[0, 2] = coef_im[t]
            w[0, 3] = coef_im[t]
            if fac[t] != 1.0:
                rl, rh, il, ih = c_mul(w[0, 0], w[0, 1], w[0, 2], w[0, 3],
                                       fac[t], fac[t], 0.0, 0.0)
                w[0, 0] = rl
                w[0, 1] = rh
                w[0, 2] = il
                w[0, 3] = ih
            wdeg = 0
            k = par[t]
            if k >= 0:
                wdeg = tpoly_linmul(w, wdeg,
                                    q0[k, 0], q0[k, 1], q0[k, 2], q0[k, 3],
                                    dq[k, 0], dq[k, 1], dq[k, 2], dq[k, 3])
            for j in range(n):
                for _rep in range(expo[t, j]):
                    if has_shear:
                        wdeg = tpoly_linmul(
                            w, wdeg,
                            z0[j, 0], z0[j, 1], z0[j, 2], z0[j, 3],
                            sb_re[j], sb_re[j], sb_im[j], sb_im[j])
                    else:
                        for d in range(wdeg + 1):
                            rl, rh, il, ih = c_mul(
                                w[d, 0], w[d, 1], w[d, 2], w[d, 3],
                                z0[j, 0], z0[j, 1], z0[j, 2], z0[j, 3])
                            w[d, 0] = rl
                            w[d, 1] = rh
                            w[d, 2] = il
                            w[d, 3] = ih
            for d in range(wdeg + 1):
                rl, rh, il, ih = c_add(acc[d, 0], acc[d, 1],
                                       acc[d, 2], acc[d, 3],
                                       w[d, 0], w[d, 1], w[d, 2], w[d, 3])
                acc[d, 0] = rl
                acc[d, 1] = rh
                acc[d, 2] = il
                acc[d, 3] = ih
        # substitute the symmetric tau interval [tau_lo, tau_hi] (it
        # straddles 0): odd powers are monotone, even powers have range
        # [0, max-magnitude^d], each magnitude power rounded up
        rl = acc[0, 0]
        rh = acc[0, 1]
        il = acc[0, 2]
        ih = acc[0, 3]
        pl = 1.0
        ph = 1.0
        for d in range(1, nd):
            pl = math.nextafter(pl * (-tau_lo), _INF)
            ph = math.nextafter(ph * tau_hi, _INF)
            if d % 2 == 1:
                pwl = -pl
                pwh = ph
            else:
                pwl = 0.0
                pwh = pl if pl > ph else ph
            trl, trh, til, tih = c_mul(acc[d, 0], acc[d, 1],
                                       acc[d, 2], acc[d, 3],
                                       pwl, pwh, 0.0, 0.0)
            rl, rh, il, ih = c_add(rl, rh, il, ih, trl, trh, til, tih)
        out[i, 0] = rl
        out[i, 1] = rh
        out[i, 2] = il
        out[i, 3] = ih
    return out


@jit_kernel
def eval_terms_point(coef, par, expo, ptr, max_expo, z, pv):
    """Plain complex point evaluation of a flattened term list."""
    neq = ptr.shape[0] - 1
    n = z.shape[0]
    zpow = np.empty((n, max_expo + 1), np.complex128)
    for j in range(n):
        zpow[j, 0] = 1.0 + 0.0j
        for e in range(1, max_expo + 1):
            zpow[j, e] = zpow[j, e - 1] * z[j]
    out = np.empty(neq, np.complex128)
    for i in range(neq):
        acc = 0.0 + 0.0j
        for t in range(ptr[i], ptr[i + 1]):
            v = coef[t]
            k = par[t]
            if k >= 0:
                v = v * pv[k]
            for j in range(n):
                e = expo[t, j]
                if e > 0:
                    v = v * zpow[j, e]
            acc = acc + v
        out[i] = acc
    return out


# ---------------------------------------------------------------------------
# dense complex linear algebra (LU with partial pivoting)
# ---------------------------------------------------------------------------

@jit_kernel
def lu_factor_k(a):
    n = a.shape[0]
    lu = a.copy()
    piv = np.empty(n, np.int64)
    ok = True
    for k in range(n):
        pk = k
        pmax = abs(lu[k, k])
        for i in range(k + 1, n):
            v = abs(lu[i, k])
            if v > pmax:
                pmax = v
                pk = i
        if pmax < 1e-300:
            ok = False
            break
        piv[k] = pk
        if pk != k:
            for j in range(n):
                tmp = lu[k, j]
                lu[k, j] = lu[pk, j]
                lu[pk, j] = tmp
        for i in range(k + 1, n):
            lu[i, k] = lu[i, k] / lu[k, k]
            f = lu[i, k]
            for j in range(k + 1, n):
                lu[i, j] = lu[i, j] - f * lu[k, j]
    return lu, piv, ok


@jit_kernel
def lu_apply_k(lu, piv, b):
    n = lu.shape[0]
    x = b.copy()
    for k in range(n):
        pk = piv[k]
        if pk != k:
            tmp = x[k]
            x[k] = x[pk]
            x[pk] = tmp
    for i in range(n):
        for j in range(i):
            x[i] = x[i] - lu[i, j] * x[j]
    for i in range(n - 1, -1, -1):
        for j in range(i + 1, n):
            x[i] = x[i] - lu[i, j] * x[j]
        x[i] = x[i] / lu[i, i]
    return x


@jit_kernel
def lu_solve_k(a, b):
    lu, piv, ok = lu_factor_k(a)
    if not ok:
        return np.zeros_like(b), False
    return lu_apply_k(lu, piv, b), True


@jit_kernel
def lu_inverse_k(a):
    n = a.shape[0]
    lu, piv, ok = lu_factor_k(a)
    out = np.zeros((n, n), np.complex128)
    if not ok:
        return out, False
    e = np.zeros(n, np.complex128)
    for c in range(n):
        e[:] = 0.0
        e[c] = 1.0
        x = lu_apply_k(lu, piv, e)
        for i in range(n):
            out[i, c] = x[i]
    return out, True


# ---------------------------------------------------------------------------
# batch helpers for randomized soundness checks
# ---------------------------------------------------------------------------

@jit_kernel
def rop_batch(a, b, opcode):
    # opcode: 0 add, 1 sub, 2 mul, 3 div; shapes (N, 2)
    n = a.shape[0]
    out = np.empty((n, 2), np.float64)
    for i in range(n):
        if opcode == 0:
            lo, hi = r_add(a[i, 0], a[i, 1], b[i, 0], b[i, 1])
        elif opcode == 1:
            lo, hi = r_sub(a[i, 0], a[i, 1], b[i, 0], b[i, 1])
        elif opcode == 2:
            lo, hi = r_mul(a[i, 0], a[i, 1], b[i, 0], b[i, 1])
        else:
            lo, hi = r_div(a[i, 0], a[i, 1], b[i, 0], b[i, 1])
        out[i, 0] = lo
        out[i, 1] = hi
    return out


@jit_kernel
def cop_batch(a, b, opcode):
    # opcode: 0 add, 1 sub, 2 mul, 3 div; shapes (N, 4)
    n = a.shape[0]
    out = np.empty((n, 4), np.float64)
    for i in range(n):
        if opcode == 0:
            rl, rh, il, ih = c_add(a[i, 0], a[i, 1], a[i, 2], a[i, 3],
                                   b[i, 0], b[i, 1], b[i, 2], b[i, 3])
        elif opcode == 1:
            rl, rh, il, ih = c_sub(a[i, 0], a[i, 1], a[i, 2], a[i, 3],
                                   b[i, 0], b[i, 1], b[i, 2], b[i, 3])
        elif opcode == 2:
            rl, rh, il, ih = c_mul(a[i, 0], a[i, 1], a[i, 2], a[i, 3],
                                   b[i, 0], b[i, 1], b[i, 2], b[i, 3])
        else:
            rl, rh, il, ih = c_div(a[i, 0], a[i, 1], a[i, 2], a[i, 3],
                                   b[i, 0], b[i, 1], b[i, 2], b[i, 3])
        out[i, 0] = rl
        out[i, 1] = rh
        out[i, 2] = il
        out[i, 3] = ih
    return out
