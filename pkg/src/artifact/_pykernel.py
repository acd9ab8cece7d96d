"""Pure-Python σ-action kernel on closure coordinates.

Coordinates are flat ``[a1, b1, a2, b2, ...]`` describing the closure of a
lamination of D_n as a multicurve in a disk with m = n + 1 punctures, the
leftmost of which is the false puncture.  ``j`` indexes half twists of that
larger disk, so the Artin generator σ_i of B_n is ``j = i + 1``.

Every function here is written with ``+ - * // abs max min`` only, so it also
runs on symbolic affine values (see ``lamination_coords._Aff``).
"""

from __future__ import annotations

__all__ = ["sigma", "artin_seq", "normal", "norm", "closure_norm", "BACKEND"]

BACKEND = "python"


def _pos(x):
    return x if x > 0 else x - x


def _pair_pos(a0, b0, a1, b1):
    # local four-puncture picture around the twisted pair
    B1 = max(2 * abs(a0) + 2 * _pos(b0), 2 * abs(a1) + 2 * _pos(b1) + 2 * b0)
    B2 = B1 - 2 * b0
    B3 = B2 - 2 * b1
    e0 = B1 // 2
    e4 = B3 // 2
    u2 = B1 // 2 - a0 + _pos(-b0)
    d2 = B1 // 2 + a0 + _pos(-b0)
    u3 = B2 // 2 - a1 + _pos(-b1)
    d3 = B2 // 2 + a1 + _pos(-b1)
    e1 = (2 * e0 + u2 + d2) // 2 - B1 + abs(d2 - u2) // 2
    e2 = (u2 + u3 + d2 + d3) // 2 - B2 + abs(u2 - u3 - d2 + d3) // 2
    e3 = (u3 + d3 + 2 * e4) // 2 - B3 + abs(u3 - d3) // 2
    # walk the image of the ray above the left puncture
    cr = (e2 + d3 - d2) // 2
    p = (e2 + d2 - d3) // 2
    c = (d2 + e1 - e0) // 2
    cr = cr + _pos(p - c)
    p = min(p, c)
    nu2 = cr + abs(p - (e1 + u2 - e0) // 2) + (e0 + u2 - e1) // 2
    # and of the ray below the right puncture
    cr = (e2 + u2 - u3) // 2
    p = (e2 + u3 - u2) // 2
    c = (u3 + e3 - e4) // 2
    cr = cr + _pos(p - c)
    p = min(p, c)
    nd3 = cr + abs(p - (d3 + e3 - e4) // 2) + (d3 + e4 - e3) // 2
    nd2 = d3
    nu3 = u2
    span = (nu2 + nu3 + nd2 + nd3) // 2 - e2
    nB2 = span + abs(nu2 - nu3 - nd2 + nd3) // 2
    return (nd2 - nu2) // 2, (B1 - nB2) // 2, (nd3 - nu3) // 2, (nB2 - B3) // 2


def _pair(a0, b0, a1, b1, s):
    if s > 0:
        return _pair_pos(a0, b0, a1, b1)
    x = _pair_pos(-a0, b0, -a1, b1)
    return -x[0], x[1], -x[2], x[3]


def _sigma_inplace(c, j, s):
    k = len(c) // 2  # = m - 2
    m = k + 2
    if 2 <= j <= m - 2:
        t = 2 * (j - 2)
        c[t], c[t + 1], c[t + 2], c[t + 3] = _pair(c[t], c[t + 1], c[t + 2], c[t + 3], s)
    elif j == m - 1:
        a, b = c[-2], c[-1]
        be = 2 * abs(a) + 2 * _pos(b)
        br = be - 2 * b
        c[-2], c[-1], _, _ = _pair(a, b, a - a, br // 2, s)
    elif j == 1:
        a, b = c[0], c[1]
        be = 2 * abs(a) + 2 * _pos(b)
        _, _, c[0], c[1] = _pair(a - a, -(be // 2), a, b, s)
    else:
        raise IndexError(f"half twist index {j} out of range")


def sigma(coords, j, s):
    c = list(coords)
    _sigma_inplace(c, j, s)
    return c


def artin_seq(coords, seq):
    """Apply (j, s) pairs in the given order (first pair acts first)."""
    c = list(coords)
    for j, s in seq:
        _sigma_inplace(c, j, s)
    return c


def _betas(c):
    k = len(c) // 2
    acc = 0
    best = None
    for i in range(k):
        a, b = c[2 * i], c[2 * i + 1]
        v = 2 * abs(a) + 2 * _pos(b) + 2 * acc
        best = v if best is None else max(best, v)
        acc = acc + b
    out = [best]
    for i in range(k):
        out.append(out[-1] - 2 * c[2 * i + 1])
    return out


def normal(coords):
    """Axis counts of the closure.

    Returns ``(e, u, d, beta)``: ``e[g]`` crossings in gap g (0..m), ``u[q]``
    and ``d[q]`` crossings of the vertical rays above/below puncture q (1..m,
    index 0 unused), and ``beta[i]`` the minimal vertical crossing in gap i
    (1..m-1, index 0 unused).
    """
    k = len(coords) // 2
    m = k + 2
    beta = [0] + _betas(coords)
    u = [0] * (m + 1)
    d = [0] * (m + 1)
    u[1] = d[1] = beta[1] // 2
    u[m] = d[m] = beta[m - 1] // 2
    for i in range(1, m - 1):
        a, b = coords[2 * (i - 1)], coords[2 * (i - 1) + 1]
        rho = _pos(-b)
        u[i + 1] = beta[i] // 2 - a + rho
        d[i + 1] = beta[i] // 2 + a + rho
    e = [0] * (m + 1)
    e[0] = u[1]
    e[m] = u[m]
    for i in range(1, m):
        e[i] = (u[i] + u[i + 1] + d[i] + d[i + 1]) // 2 - beta[i] + abs(u[i] - u[i + 1] - d[i] + d[i + 1]) // 2
    return e, u, d, beta


def closure_norm(coords):
    return sum(normal(coords)[0])


def norm(coords):
    e = normal(coords)[0]
    return sum(e) - e[0]


def carried(coords, strips, N, cap):
    """No fast path here; callers fall back to the compressed matchings."""
    return None, None
