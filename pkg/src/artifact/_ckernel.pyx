# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=False
"""int64 σ-action kernel with transparent fallback to Python integers.

Inputs whose entries all fit under ``LIMIT`` are processed in machine words;
the bound leaves enough headroom that no intermediate of a single half twist
can overflow.  Between half twists the bound is re-checked, and the work is
handed to the pure-Python kernel once it is exceeded.
"""

from libc.stdlib cimport malloc, free
from . import _pykernel

BACKEND = "cython"

cdef long long LIMIT = 1LL << 55


cdef inline long long _pos(long long x) nogil:
    return x if x > 0 else 0

cdef inline long long _abs(long long x) nogil:
    return x if x >= 0 else -x

cdef inline long long _fd2(long long x) nogil:
    # floor division by two
    return x >> 1


cdef void _pair_pos(long long* c) nogil:
    cdef long long a0 = c[0], b0 = c[1], a1 = c[2], b1 = c[3]
    cdef long long B1, B2, B3, e0, e4, u2, d2, u3, d3, e1, e2, e3
    cdef long long cr, p, cc, nu2, nd3, nd2, nu3, span, nB2, t
    B1 = 2 * _abs(a0) + 2 * _pos(b0)
    t = 2 * _abs(a1) + 2 * _pos(b1) + 2 * b0
    if t > B1:
        B1 = t
    B2 = B1 - 2 * b0
    B3 = B2 - 2 * b1
    e0 = _fd2(B1)
    e4 = _fd2(B3)
    u2 = _fd2(B1) - a0 + _pos(-b0)
    d2 = _fd2(B1) + a0 + _pos(-b0)
    u3 = _fd2(B2) - a1 + _pos(-b1)
    d3 = _fd2(B2) + a1 + _pos(-b1)
    e1 = _fd2(2 * e0 + u2 + d2) - B1 + _fd2(_abs(d2 - u2))
    e2 = _fd2(u2 + u3 + d2 + d3) - B2 + _fd2(_abs(u2 - u3 - d2 + d3))
    e3 = _fd2(u3 + d3 + 2 * e4) - B3 + _fd2(_abs(u3 - d3))
    cr = _fd2(e2 + d3 - d2)
    p = _fd2(e2 + d2 - d3)
    cc = _fd2(d2 + e1 - e0)
    cr = cr + _pos(p - cc)
    if cc < p:
        p = cc
    nu2 = cr + _abs(p - _fd2(e1 + u2 - e0)) + _fd2(e0 + u2 - e1)
    cr = _fd2(e2 + u2 - u3)
    p = _fd2(e2 + u3 - u2)
    cc = _fd2(u3 + e3 - e4)
    cr = cr + _pos(p - cc)
    if cc < p:
        p = cc
    nd3 = cr + _abs(p - _fd2(d3 + e3 - e4)) + _fd2(d3 + e4 - e3)
    nd2 = d3
    nu3 = u2
    span = _fd2(nu2 + nu3 + nd2 + nd3) - e2
    nB2 = span + _fd2(_abs(nu2 - nu3 - nd2 + nd3))
    c[0] = _fd2(nd2 - nu2)
    c[1] = _fd2(B1 - nB2)
    c[2] = _fd2(nd3 - nu3)
    c[3] = _fd2(nB2 - B3)


cdef void _pair(long long* c, int s) nogil:
    if s > 0:
        _pair_pos(c)
    else:
        c[0] = -c[0]
        c[2] = -c[2]
        _pair_pos(c)
        c[0] = -c[0]
        c[2] = -c[2]


cdef int _sigma(long long* c, int k, int j, int s) nogil:
    cdef int m = k + 2
    cdef long long tmp[4]
    cdef long long be
    if 2 <= j <= m - 2:
        _pair(c + 2 * (j - 2), s)
    elif j == m - 1:
        be = 2 * _abs(c[2 * k - 2]) + 2 * _pos(c[2 * k - 1])
        tmp[0] = c[2 * k - 2]
        tmp[1] = c[2 * k - 1]
        tmp[2] = 0
        tmp[3] = _fd2(be - 2 * c[2 * k - 1])
        _pair(tmp, s)
        c[2 * k - 2] = tmp[0]
        c[2 * k - 1] = tmp[1]
    elif j == 1:
        be = 2 * _abs(c[0]) + 2 * _pos(c[1])
        tmp[0] = 0
        tmp[1] = -_fd2(be)
        tmp[2] = c[0]
        tmp[3] = c[1]
        _pair(tmp, s)
        c[0] = tmp[2]
        c[1] = tmp[3]
    else:
        return -1
    return 0


cdef bint _fits(list coords):
    cdef object x
    for x in coords:
        if x >= LIMIT or x <= -LIMIT:
            return False
    return True


cdef inline bint _small(long long* c, int size) nogil:
    cdef int i
    for i in range(size):
        if c[i] >= LIMIT or c[i] <= -LIMIT:
            return False
    return True


def sigma(coords, int j, int s):
    return artin_seq(coords, ((j, s),))


def artin_seq(coords, seq):
    """Apply (j, s) pairs in order; same contract as the Python kernel."""
    cdef list c = list(coords)
    cdef int size = len(c)
    cdef int k = size // 2
    cdef int i, done = 0, bad = 0
    cdef list pairs = list(seq)
    cdef int total = len(pairs)
    cdef long long* buf
    cdef int* js
    cdef int* ss
    if not _fits(c):
        return _pykernel.artin_seq(c, pairs)
    buf = <long long*> malloc(size * sizeof(long long))
    js = <int*> malloc((total + 1) * sizeof(int))
    ss = <int*> malloc((total + 1) * sizeof(int))
    try:
        for i in range(size):
            buf[i] = c[i]
        for i in range(total):
            js[i] = pairs[i][0]
            ss[i] = pairs[i][1]
        with nogil:
            while done < total:
                if _sigma(buf, k, js[done], ss[done]) < 0:
                    bad = 1
                    break
                done += 1
                if not _small(buf, size):
                    break
        if bad:
            raise IndexError(f"half twist index {js[done]} out of range")
        out = [buf[i] for i in range(size)]
    finally:
        free(buf)
        free(js)
        free(ss)
    if done < total:
        return _pykernel.artin_seq(out, pairs[done:])
    return out


cdef long long NORMAL_LIMIT = 1LL << 50


cdef bint _fits_normal(list coords):
    cdef object x
    if len(coords) > 512:
        return False
    for x in coords:
        if x >= NORMAL_LIMIT or x <= -NORMAL_LIMIT:
            return False
    return True


def normal(coords):
    """Same as the Python kernel; machine words when the entries are small."""
    cdef list c = list(coords)
    if not _fits_normal(c):
        return _pykernel.normal(c)
    cdef int k = len(c) // 2
    cdef int m = k + 2
    cdef int i
    cdef long long acc = 0, best = 0, v, a, b, rho
    cdef bint have = False
    beta = [0] * m
    for i in range(k):
        a = c[2 * i]
        b = c[2 * i + 1]
        v = 2 * _abs(a) + 2 * _pos(b) + 2 * acc
        if not have or v > best:
            best = v
            have = True
        acc = acc + b
    beta[1] = best
    for i in range(k):
        beta[i + 2] = beta[i + 1] - 2 * c[2 * i + 1]
    u = [0] * (m + 1)
    d = [0] * (m + 1)
    u[1] = d[1] = _fd2(beta[1])
    u[m] = d[m] = _fd2(beta[m - 1])
    for i in range(1, m - 1):
        a = c[2 * (i - 1)]
        b = c[2 * (i - 1) + 1]
        rho = _pos(-b)
        u[i + 1] = _fd2(beta[i]) - a + rho
        d[i + 1] = _fd2(beta[i]) + a + rho
    e = [0] * (m + 1)
    e[0] = u[1]
    e[m] = u[m]
    cdef long long ui, uj, di, dj
    for i in range(1, m):
        ui = u[i]
        uj = u[i + 1]
        di = d[i]
        dj = d[i + 1]
        e[i] = _fd2(ui + uj + di + dj) - <long long> beta[i] + _fd2(_abs(ui - uj - di + dj))
    return e, u, d, beta


def norm(coords):
    e = normal(coords)[0]
    return sum(e) - e[0]


def closure_norm(coords):
    return sum(normal(coords)[0])


# ---------------------------------------------------------------------------
# carried-by check in machine words
# ---------------------------------------------------------------------------

cdef struct Part:
    long long s
    long long e
    long long x1
    long long y2
    int which


cdef int _bands_c(long long* e, long long* rays, int m, long long* out) nogil:
    """Merged bands (x1, y1, x2, y2) of one half-plane; returns their count."""
    cdef long long stk_a[64]
    cdef long long stk_b[64]
    cdef long long raw[4 * 256]
    cdef int top = 0, nraw = 0, g, i, j, nb = 0
    cdef long long pos = 1, lr, rr, left, need, st, size, c
    for g in range(m + 1):
        lr = rays[g] if g >= 1 else 0
        rr = rays[g + 1] if g + 1 <= m else 0
        left = (e[g] + lr - rr) >> 1
        need = left
        st = pos
        while need > 0:
            size = stk_b[top - 1] - stk_a[top - 1] + 1
            c = size if size < need else need
            raw[4 * nraw] = stk_b[top - 1] - c + 1
            raw[4 * nraw + 1] = stk_b[top - 1]
            raw[4 * nraw + 2] = st
            raw[4 * nraw + 3] = st + c - 1
            nraw += 1
            if c == size:
                top -= 1
            else:
                stk_b[top - 1] -= c
            st += c
            need -= c
        if e[g] - left > 0:
            stk_a[top] = pos + left
            stk_b[top] = pos + e[g] - 1
            top += 1
        pos += e[g]
    # insertion sort of raw chunks by x1
    cdef long long t0, t1, t2, t3
    for i in range(1, nraw):
        t0 = raw[4 * i]; t1 = raw[4 * i + 1]; t2 = raw[4 * i + 2]; t3 = raw[4 * i + 3]
        j = i - 1
        while j >= 0 and raw[4 * j] > t0:
            raw[4 * (j + 1)] = raw[4 * j]
            raw[4 * (j + 1) + 1] = raw[4 * j + 1]
            raw[4 * (j + 1) + 2] = raw[4 * j + 2]
            raw[4 * (j + 1) + 3] = raw[4 * j + 3]
            j -= 1
        raw[4 * (j + 1)] = t0; raw[4 * (j + 1) + 1] = t1; raw[4 * (j + 1) + 2] = t2; raw[4 * (j + 1) + 3] = t3
    for i in range(nraw):
        if nb > 0 and out[4 * (nb - 1) + 1] + 1 == raw[4 * i] and out[4 * (nb - 1) + 2] - 1 == raw[4 * i + 3]:
            out[4 * (nb - 1) + 1] = raw[4 * i + 1]
            out[4 * (nb - 1) + 2] = raw[4 * i + 2]
        else:
            out[4 * nb] = raw[4 * i]
            out[4 * nb + 1] = raw[4 * i + 1]
            out[4 * nb + 2] = raw[4 * i + 2]
            out[4 * nb + 3] = raw[4 * i + 3]
            nb += 1
    return nb


cdef int _parts_c(long long* bands, int nb, Part* parts) nogil:
    cdef int i, j, np = 0
    cdef Part tmp
    for i in range(nb):
        parts[np].s = bands[4 * i]; parts[np].e = bands[4 * i + 1]
        parts[np].x1 = bands[4 * i]; parts[np].y2 = bands[4 * i + 3]; parts[np].which = 0
        np += 1
        parts[np].s = bands[4 * i + 2]; parts[np].e = bands[4 * i + 3]
        parts[np].x1 = bands[4 * i]; parts[np].y2 = bands[4 * i + 3]; parts[np].which = 1
        np += 1
    for i in range(1, np):
        tmp = parts[i]
        j = i - 1
        while j >= 0 and parts[j].s > tmp.s:
            parts[j + 1] = parts[j]
            j -= 1
        parts[j + 1] = tmp
    return np


cdef int _locate(Part* parts, int np, long long p) nogil:
    cdef int lo = 0, hi = np, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if parts[mid].s <= p:
            lo = mid + 1
        else:
            hi = mid
    lo -= 1
    if lo < 0 or p > parts[lo].e:
        return -1
    return lo


cdef inline long long _partner(Part* q, long long p) nogil:
    if q.which == 0:
        return q.y2 - (p - q.x1)
    return q.x1 + (q.y2 - p)


def carried(coords, strips, N_obj, int cap):
    """(total points, lengths or None) for the family check of every strip.

    ``strips`` holds (i, j, up, k, l, up2) tuples; returns None as the second
    item when some strip is not realized.  Falls back to ``None, None`` when
    the entries are too large for machine words.
    """
    cdef list c = list(coords)
    if not _fits_normal(c) or len(c) // 2 + 2 > 60 or N_obj >= NORMAL_LIMIT:
        return None, None
    cdef long long N = N_obj
    e_l, u_l, d_l, _ = normal(c)
    cdef int m = len(c) // 2 + 2
    cdef long long e[64]
    cdef long long u[64]
    cdef long long d[64]
    cdef long long ub[4 * 256]
    cdef long long lb[4 * 256]
    cdef Part up_parts[512]
    cdef Part lo_parts[512]
    cdef int g, nu, nl, npu, npl, t, k, length
    cdef long long total = 0, p, q, a, b, lo, hi
    cdef long long ti, tj, tk, tl
    cdef int side, side2
    for g in range(m + 1):
        e[g] = e_l[g]
        u[g] = u_l[g]
        d[g] = d_l[g]
        total += e[g]
    nu = _bands_c(e, u, m, ub)
    nl = _bands_c(e, d, m, lb)
    npu = _parts_c(ub, nu, up_parts)
    npl = _parts_c(lb, nl, lo_parts)
    if total < N:
        return total, None
    out = []
    for st in strips:
        ti, tj, side, tk, tl, side2 = st
        p, q = ti, tj
        length = 0
        while True:
            lo = p if p < q else q
            hi = p if p > q else q
            if side:
                k = _locate(up_parts, npu, lo)
                if k < 0 or hi > up_parts[k].e:
                    return total, None
                a = _partner(&up_parts[k], p)
                b = _partner(&up_parts[k], q)
            else:
                k = _locate(lo_parts, npl, lo)
                if k < 0 or hi > lo_parts[k].e:
                    return total, None
                a = _partner(&lo_parts[k], p)
                b = _partner(&lo_parts[k], q)
            p, q = a, b
            length += 1
            lo = p if p < q else q
            hi = p if p > q else q
            if hi <= N:
                if p == tk and q == tl and side == side2:
                    break
                return total, None
            if lo <= N or length >= cap:
                return total, None
            side = 0 if side else 1
        out.append(length)
    return total, out
