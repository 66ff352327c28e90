"""Polynomial symbols and the Moyal star product.

The star product composes operators at the symbol level:
quantize(a # b) = quantize(a) @ quantize(b).  For polynomials the
expansion is a finite sum, so everything below is exact algebra.
"""

from melinlab import PolynomialSymbol, bidifferential_power, eta, moyal_star, poisson_bracket, y

Y, E = y(), eta()
H = Y ** 2 + E ** 2

print("coordinate symbols:", Y, "and", E)

print("\n-- the canonical commutation relation, at the symbol level --")
comm = moyal_star(Y, E, 1.0) - moyal_star(E, Y, 1.0)
print("y # eta          =", moyal_star(Y, E, 1.0))
print("y # eta - eta # y =", comm, " (i hbar with hbar = 1)")

print("\n-- the harmonic symbol squared --")
print("H      =", H)
print("H # H  =", moyal_star(H, H, 1.0))
print("so H # H = H^2 - hbar^2: the star product sees the zero point.")
print("B^2(H, H) =", bidifferential_power(H, H, 2), " (the constant feeding that correction)")

print("\n-- first order in hbar is the Poisson bracket --")
a = Y ** 2 * E
b = Y + E ** 2
print("a =", a, "   b =", b)
print("{a, b}       =", poisson_bracket(a, b))
print("a#b - b#a    =", moyal_star(a, b, 1.0) - moyal_star(b, a, 1.0))
print("(equal to i hbar {a,b} plus an hbar^3 tail for these degrees)")

print("\n-- hbar = 0 collapses to the commutative product --")
print("a # b at hbar=0 equals a*b:", moyal_star(a, b, 0.0) == a * b)

print("\n-- associativity, checked numerically --")
c = PolynomialSymbol.constant(1, 2.0) + Y * E
left = moyal_star(moyal_star(a, b, 0.5), c, 0.5)
right = moyal_star(a, moyal_star(b, c, 0.5), 0.5)
gap = max((abs(v) for v in (left - right).terms.values()), default=0.0)
print("max coefficient gap between (a#b)#c and a#(b#c):", gap)
