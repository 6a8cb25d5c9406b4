"""Slow, obviously-correct reference computations on plain Python lists.

None of these touch the package's series code; tests compare against them.
"""


def poly_mul(a, b, n):
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def euler_product(k, n):
    """prod_{j>=1} (1 - q^{kj}) multiplied out factor by factor."""
    out = [1] + [0] * (n - 1)
    j = k
    while j < n:
        out = [out[i] - (out[i - j] if i >= j else 0) for i in range(n)]
        j += k
    return out


def partition_counts(n):
    """p(0..n-1) by the classic coin-change recurrence."""
    p = [1] + [0] * (n - 1)
    for part in range(1, n):
        for total in range(part, n):
            p[total] += p[total - part]
    return p


def eta_quotient(factors, n):
    """prod f_k^e with negative e handled via partition-style inversion."""
    out = [1] + [0] * (n - 1)
    for k, e in factors:
        fk = euler_product(k, n)
        if e < 0:
            fk = inverse(fk, n)
        for _ in range(abs(e)):
            out = poly_mul(out, fk, n)
    return out


def inverse(a, n):
    """1/a for a constant term of +1 or -1, by the schoolbook recurrence."""
    c0 = a[0]
    assert c0 in (1, -1)
    b = [0] * n
    b[0] = c0
    for i in range(1, n):
        s = sum(a[j] * b[i - j] for j in range(1, min(i, len(a) - 1) + 1))
        b[i] = -c0 * s
    return b


def theta_sum(terms, n):
    """Sum of sign*q^e over an explicit list of (sign, e) pairs."""
    out = [0] * n
    for sign, e in terms:
        if 0 <= e < n:
            out[e] += sign
    return out
