"""Integer number theory helpers: primality, factorization, quadratic residues, CRT.

Everything here is exact and deterministic.  Sizes stay at desk scale
(inputs are numerators/denominators of search candidates), so trial
division backed by deterministic Miller-Rabin and Pollard rho is plenty.
"""

import math
from functools import lru_cache

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# Witnesses certifying Miller-Rabin for all n < 3.3 * 10**24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n):
    # n odd composite, not a prime power of a small prime
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"rho failed on {n}")


@lru_cache(maxsize=65536)
def factorint(n):
    """Factor a positive integer; returns a tuple of (prime, exponent) pairs sorted by prime."""
    if n <= 0:
        raise ValueError("factorint needs a positive integer")
    fac = {}
    for p in _SMALL_PRIMES:
        while n % p == 0:
            fac[p] = fac.get(p, 0) + 1
            n //= p
    # trial division up to a modest bound, then rho on what is left
    d = 41
    while d * d <= n and d < 10000:
        while n % d == 0:
            fac[d] = fac.get(d, 0) + 1
            n //= d
        d += 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            fac[m] = fac.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return tuple(sorted(fac.items()))


def primes_stream():
    """Yield 2, 3, 5, ... indefinitely."""
    n = 2
    while True:
        if is_prime(n):
            yield n
        n += 1


def legendre(a, p):
    """Quadratic residue symbol of a modulo an odd prime p, in {-1, 0, 1}."""
    a %= p
    if a == 0:
        return 0
    s = pow(a, (p - 1) // 2, p)
    return -1 if s == p - 1 else 1


def crt(residues, moduli):
    """Solve x = r_i (mod m_i) for pairwise coprime moduli; least nonnegative solution."""
    x, m = 0, 1
    for r, mi in zip(residues, moduli):
        g = math.gcd(m, mi)
        if g != 1:
            raise ValueError("crt moduli must be pairwise coprime")
        # x' = x + m*t with x' = r mod mi
        t = (r - x) * pow(m, -1, mi) % mi
        x = x + m * t
        m *= mi
    return x % m


def valuation_int(n, p):
    """Exponent of the prime p in the nonzero integer n."""
    if n == 0:
        raise ValueError("valuation of 0")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v
