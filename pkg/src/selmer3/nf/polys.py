"""Univariate polynomial utilities over Z, Q, and Z/p^k.

Polynomials are coefficient lists, low degree first, trailing zeros stripped.
sympy is used only where it genuinely earns its keep: factorization over Q
and over F_p, and integer factorization.
"""

from fractions import Fraction
from math import gcd

import sympy
from sympy import GF, Poly, ZZ
from sympy.abc import x as _x


def trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def deg(f):
    return len(f) - 1


def padd(f, g):
    n = max(len(f), len(g))
    return trim([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)])


def pneg(f):
    return [-a for a in f]


def psub(f, g):
    return padd(f, pneg(g))


def pmul(f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] += a * b
    return trim(out)


def pscale(f, c):
    return trim([a * c for a in f])


def pdivmod(f, g):
    """Division with remainder over Q (g nonzero)."""
    f = [Fraction(a) for a in f]
    g = [Fraction(a) for a in g]
    trim(f)
    trim(g)
    if not g:
        raise ZeroDivisionError
    q = [Fraction(0)] * max(0, len(f) - len(g) + 1)
    inv = 1 / g[-1]
    while len(f) >= len(g) and f:
        c = f[-1] * inv
        d = len(f) - len(g)
        q[d] = c
        for i in range(len(g)):
            f[d + i] -= c * g[i]
        trim(f)
    return trim(q), f


def pmod(f, g):
    return pdivmod(f, g)[1]


def pgcd(f, g):
    """Monic gcd over Q."""
    a = [Fraction(c) for c in f]
    b = [Fraction(c) for c in g]
    trim(a)
    trim(b)
    while b:
        a, b = b, pmod(a, b)
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def pevaluate(f, v):
    out = 0
    for c in reversed(f):
        out = out * v + c
    return out


def pderiv(f):
    return trim([i * f[i] for i in range(1, len(f))])


def pcontent(f):
    c = 0
    for a in f:
        c = gcd(c, a.numerator if isinstance(a, Fraction) else a)
    return c


def primitive_int(f):
    """Clear denominators and content; returns integer poly with content 1."""
    den = 1
    for a in f:
        if isinstance(a, Fraction):
            den = den * a.denominator // gcd(den, a.denominator)
    g = [int(a * den) if isinstance(a, Fraction) else a * den for a in f]
    c = pcontent(g)
    if c:
        g = [a // c for a in g]
    if g and g[-1] < 0:
        g = [-a for a in g]
    return trim(g)


def to_sympy(f, var=_x):
    return Poly(list(reversed(f)), var, domain="QQ")


def from_sympy(P):
    cs = list(reversed(P.all_coeffs()))
    return trim([Fraction(c.p, c.q) if hasattr(c, "p") else Fraction(c) for c in map(sympy.Rational, cs)])


def factor_q(f):
    """Irreducible factorization over Q. Returns (content, [(factor, mult)]);
    factors are primitive integer polys with positive leading coefficient."""
    P = to_sympy(f)
    cont, facs = P.factor_list()
    out = []
    for g, m in facs:
        gi = primitive_int(from_sympy(g))
        out.append((gi, m))
    return Fraction(sympy.Rational(cont).p, sympy.Rational(cont).q), out


def is_irreducible_q(f):
    _, facs = factor_q(f)
    return len(facs) == 1 and facs[0][1] == 1 and deg(facs[0][0]) == deg(f)


def factor_mod_p(f, p):
    """Factor f mod p into monic irreducibles: returns (lc, [(g, mult)])."""
    fp = [a % p for a in f]
    trim(fp)
    if not fp:
        raise ValueError("zero polynomial mod p")
    P = Poly(list(reversed(fp)), _x, domain=GF(p))
    lc, facs = P.factor_list()
    out = []
    for g, m in facs:
        coeffs = [int(c) % p for c in reversed(g.all_coeffs())]
        out.append((trim(coeffs), m))
    return int(lc) % p, out


def resultant(f, g):
    """Resultant of integer/rational polys via sympy."""
    return sympy.Rational(to_sympy(f).resultant(to_sympy(g)))


def discriminant(f):
    n = deg(f)
    if n < 1:
        return 0
    r = resultant(f, pderiv(f))
    lc = Fraction(f[-1])
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * Fraction(sympy.Rational(r).p, sympy.Rational(r).q) / lc


def squarefree_part(f):
    g = pgcd(f, pderiv(f))
    q, r = pdivmod(f, g)
    assert not r
    return q


def make_monic_integral(f):
    """Given f with rational coeffs, return (g, c) with g monic integral and
    roots of g equal to c*roots of f."""
    f = [Fraction(a) for a in f]
    trim(f)
    n = deg(f)
    f = [a / f[-1] for a in f]  # monic over Q
    den = 1
    for a in f:
        den = den * a.denominator // gcd(den, a.denominator)
    # candidate scaling c: smallest c with c^(n-i) * a_i integral
    c = 1
    for i in range(n):
        a = f[i]
        k = n - i
        d = a.denominator
        # need c^k * a integral: take c multiple of each prime power ceil
        while (c ** k * a).denominator != 1:
            g = gcd(int((c ** k * a).denominator), d) or int((c ** k * a).denominator)
            # grow c by the radical of the remaining denominator
            rad = 1
            m = (c ** k * a).denominator
            for q in sympy.factorint(m):
                rad *= q
            c *= rad
    g = [f[i] * c ** (n - i) for i in range(n + 1)]
    assert all(a.denominator == 1 for a in g)
    return [int(a) for a in g], c


# ---------------------------------------------------------------------------
# arithmetic mod p^k and Hensel lifting

def pmul_mod(f, g, m):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % m
    return trim(out)


def pdivmod_monic_mod(f, g, m):
    """f = q*g + r mod m, g monic."""
    f = [a % m for a in f]
    trim(f)
    q = [0] * max(0, len(f) - len(g) + 1)
    while len(f) >= len(g) and f:
        c = f[-1] % m
        d = len(f) - len(g)
        q[d] = c
        for i in range(len(g)):
            f[d + i] = (f[d + i] - c * g[i]) % m
        trim(f)
    return trim(q), f


def hensel_lift_factors(f, facs, p, k):
    """Lift pairwise-coprime monic factorization f = prod(facs) mod p to mod p^k.

    f monic integral; facs monic mod p, pairwise coprime. Returns lifted list.
    """
    if len(facs) == 1:
        return [[a % p ** k for a in f]]
    # split into two halves and recurse (balanced tree)
    half = len(facs) // 2
    g = facs[0]
    for h in facs[1:half]:
        g = pmul_mod(g, h, p)
    h = facs[half]
    for t in facs[half + 1:]:
        h = pmul_mod(h, t, p)
    G, H = hensel_lift_pair(f, g, h, p, k)
    out = []
    out += hensel_lift_factors(G, [ [a % p for a in q] for q in facs[:half]], p, k)
    out += hensel_lift_factors(H, [ [a % p for a in q] for q in facs[half:]], p, k)
    return out


def hensel_lift_pair(f, g, h, p, k):
    """Lift f = g*h (mod p) with f,g,h monic, g,h coprime mod p, to mod p^k.

    Quadratic Hensel lifting (von zur Gathen & Gerhard, Alg. 15.10).
    """
    s, t = _xgcd_mod(g, h, p)
    m = p
    G = [c % p for c in g]
    H = [c % p for c in h]
    S, T = s, t
    target = p ** k
    while m < target:
        m2 = min(m * m, target)
        e = trim([c % m2 for c in psub([c % m2 for c in f], pmul_mod(G, H, m2))])
        q, r = pdivmod_monic_mod(pmul_mod(S, e, m2), H, m2)
        Gn = trim([c % m2 for c in padd(G, padd(pmul_mod(T, e, m2), pmul_mod(q, G, m2)))])
        Hn = trim([c % m2 for c in padd(H, r)])
        b = [c % m2 for c in psub(padd(pmul_mod(S, Gn, m2), pmul_mod(T, Hn, m2)), [1])]
        c_, d = pdivmod_monic_mod(pmul_mod(S, b, m2), Hn, m2)
        Sn = [v % m2 for v in psub(S, d)]
        Tn = [v % m2 for v in psub(T, padd(pmul_mod(T, b, m2), pmul_mod(c_, Gn, m2)))]
        G, H, S, T, m = Gn, Hn, Sn, Tn, m2
    return G, H


def _xgcd_mod(g, h, p):
    """a,b with a*g + b*h = 1 mod p (g,h coprime mod p)."""
    r0, r1 = [c % p for c in g], [c % p for c in h]
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while trim(r1[:]):
        q, r = _pdivmod_p(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, [(a - b) % p for a, b in _zipq(s0, pmul_mod(q, s1, p))]
        t0, t1 = t1, [(a - b) % p for a, b in _zipq(t0, pmul_mod(q, t1, p))]
    c = r0[-1]
    cinv = pow(c, -1, p)
    a = [v * cinv % p for v in s0]
    b = [v * cinv % p for v in t0]
    return trim(a), trim(b)


def _zipq(a, b):
    n = max(len(a), len(b))
    return [((a[i] if i < len(a) else 0), (b[i] if i < len(b) else 0)) for i in range(n)]


def _pdivmod_p(f, g, p):
    f = [a % p for a in f]
    trim(f)
    ginv = pow(g[-1], -1, p)
    q = [0] * max(0, len(f) - len(g) + 1)
    while len(f) >= len(g) and f:
        c = f[-1] * ginv % p
        d = len(f) - len(g)
        q[d] = c
        for i in range(len(g)):
            f[d + i] = (f[d + i] - c * g[i]) % p
        trim(f)
    return trim(q), f


def factor_int(n, **kw):
    """Integer factorization as dict prime -> exponent (sympy)."""
    return {int(p): int(e) for p, e in sympy.factorint(int(n), **kw).items()}
