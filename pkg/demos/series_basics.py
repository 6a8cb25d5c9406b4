"""Truncated q-series arithmetic over the integers and over Z/m."""

from tschur import EXACT, Modular, evaluate, parse_expression
from tschur.series import invert, make_series, mul, reduce_mod
from tschur.special import euler_f, phi, psi

N = 12

f1 = euler_f(1, N)
print("f1          ", f1.coeffs())
print("1/f1 = p(n) ", invert(f1).coeffs())

# the overpartition generating function f2/f1^2, built two ways
by_hand = mul(euler_f(2, N), invert(mul(f1, f1)))
parsed = evaluate(parse_expression("f2/f1^2"), N)
print("f2/f1^2     ", by_hand.coeffs(), by_hand == parsed)

print("phi         ", phi(N).coeffs())
print("psi         ", psi(N).coeffs())

# the same quotient computed directly modulo 4 agrees with reducing the exact one
mod4 = evaluate(parse_expression("f2/f1^2"), N, ring=Modular(4))
print("mod 4       ", mod4.coeffs(), mod4 == reduce_mod(parsed, 4))

# a series with constant term 2 has no inverse mod 4
try:
    invert(make_series(Modular(4), [2, 1]))
except ValueError as exc:
    print("non-unit    ", exc)
print("ring of f1  ", f1.ring is EXACT)
