"""Reference computations that share no code with the package.

Multiples come from the division-polynomial recurrence evaluated at the base
point in plain Fractions; point orders come from walking the curve mod q with
textbook affine formulas.
"""

from fractions import Fraction


def division_values(a, b, x, y, upto):
    """psi_0..psi_upto evaluated at (x, y) on y^2 = x^3 + a x + b."""
    x, y = Fraction(x), Fraction(y)
    psi = [Fraction(0), Fraction(1), 2 * y,
           3 * x**4 + 6 * a * x**2 + 12 * b * x - a * a,
           4 * y * (x**6 + 5 * a * x**4 + 20 * b * x**3 - 5 * a * a * x**2 - 4 * a * b * x - 8 * b * b - a**3)]
    for n in range(5, upto + 1):
        m = n // 2
        if n % 2:
            psi.append(psi[m + 2] * psi[m] ** 3 - psi[m - 1] * psi[m + 1] ** 3)
        else:
            psi.append(psi[m] / (2 * y) * (psi[m + 2] * psi[m - 1] ** 2 - psi[m - 2] * psi[m + 1] ** 2))
    return psi


def multiples(a, b, x, y, upto):
    """{n: (x_n, y_n)} for 1 <= n <= upto."""
    psi = division_values(a, b, x, y, 2 * upto + 2)
    x = Fraction(x)
    out = {}
    for n in range(1, upto + 1):
        xn = x - psi[n - 1] * psi[n + 1] / psi[n] ** 2
        yn = psi[2 * n] / (2 * psi[n] ** 4)
        out[n] = (xn, yn)
    return out


def order_mod(a, b, x, y, q):
    """Order of (x, y) on the reduction mod q (q an odd prime of good reduction)."""
    P = (x % q, y % q)
    acc, n = P, 1
    while acc is not None:
        acc = _add_mod(acc, P, a, q)
        n += 1
    return n


def _add_mod(p1, p2, a, q):
    (x1, y1), (x2, y2) = p1, p2
    if x1 == x2:
        if (y1 + y2) % q == 0:
            return None
        lam = (3 * x1 * x1 + a) * pow(2 * y1, -1, q) % q
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, q) % q
    x3 = (lam * lam - x1 - x2) % q
    return x3, (lam * (x1 - x3) - y1) % q


def primes_below(n):
    sieve = bytearray([1]) * (n + 1)
    sieve[:2] = b"\x00\x00"
    for i in range(2, int(n**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(n + 1) if sieve[i]]
