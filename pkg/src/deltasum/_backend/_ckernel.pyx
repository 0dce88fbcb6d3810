# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled exponential-sum kernel.

Term-for-term mirror of deltasum._backend._pykernel: same iteration order,
same integer phase reduction, same Kahan compensation, same libm cos/sin.
Compiled without fast-math so the IEEE operation sequence is preserved and
the two backends agree bit for bit.
"""

from libc.math cimport M_PI, cos, sin


def kloosterman_raw(long long a, long long b, long long c):
    """Sum of e((a*x + b*x^-1)/c) over x mod c with gcd(x, c) = 1.

    Requires 0 <= a < c and 0 <= b < c. Returns (real, imag).
    """
    cdef double s_re = 0.0, comp_re = 0.0, s_im = 0.0, comp_im = 0.0
    cdef double angle, term, y, tot
    cdef long long x, t, xinv, r0, r1, s0, s1, q, tmp
    if c == 1:
        return 1.0, 0.0
    for x in range(1, c):
        # extended Euclid, tracking the coefficient of x mod c
        r0 = c
        r1 = x
        s0 = 0
        s1 = 1
        while r1 != 0:
            q = r0 // r1
            tmp = r0 - q * r1
            r0 = r1
            r1 = tmp
            tmp = s0 - q * s1
            s0 = s1
            s1 = tmp
        if r0 != 1:
            continue
        xinv = s0 % c
        if xinv < 0:
            xinv += c
        t = (a * x + b * xinv) % c
        angle = 2.0 * M_PI * t / c
        term = cos(angle)
        y = term - comp_re
        tot = s_re + y
        comp_re = (tot - s_re) - y
        s_re = tot
        term = sin(angle)
        y = term - comp_im
        tot = s_im + y
        comp_im = (tot - s_im) - y
        s_im = tot
    return s_re, s_im
