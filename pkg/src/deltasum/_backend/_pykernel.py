"""Pure Python exponential-sum kernel.

Pinned algorithm, shared with the compiled backend: iterate x = 1..c-1 in
ascending order, skip x with gcd(x, c) > 1, reduce the phase
a*x + b*inverse(x) exactly in integer arithmetic, and accumulate
cos/sin(2*pi*t/c) with Kahan compensation. Both backends perform the
identical sequence of IEEE operations and call the same libm cos/sin, so
their outputs agree bit for bit.
"""

from math import cos, gcd, pi, sin


def kloosterman_raw(a: int, b: int, c: int) -> tuple[float, float]:
    """Sum of e((a*x + b*x^-1)/c) over x mod c with gcd(x, c) = 1.

    Requires 0 <= a < c and 0 <= b < c. Returns (real, imag).
    """
    if c == 1:
        return 1.0, 0.0
    s_re = 0.0
    comp_re = 0.0
    s_im = 0.0
    comp_im = 0.0
    for x in range(1, c):
        if gcd(x, c) != 1:
            continue
        xinv = pow(x, -1, c)
        t = (a * x + b * xinv) % c
        angle = 2.0 * pi * t / c
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
