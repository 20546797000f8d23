"""The bad-prime set S: a conservative, correctness-preserving superset of
{3} + primes dividing c + bad reduction of C + bad reduction of the descent
forms (field discriminants, flex-coordinate denominators, content of ell1)."""

from fractions import Fraction

import sympy

from ..nf import polys
from ..nf.ideals import Ideal


class BadPrimeSet:
    def __init__(self, primes, reasons):
        self.primes = tuple(sorted(primes))
        self.reasons = dict(reasons)

    def __iter__(self):
        return iter(self.primes)

    def __repr__(self):
        return "BadPrimeSet(%s)" % (list(self.primes),)


def _prime_divisors(n):
    n = int(n)
    if n in (0,):
        return set()
    return set(polys.factor_int(abs(n)).keys())


def bad_primes(C, fd, ld=None, extra=()):
    reasons = {}

    def tag(p, why):
        reasons.setdefault(p, []).append(why)

    tag(3, "divides p")
    # discriminant of C (exact, from the pencil machinery in a good frame)
    from .flex import pencil_discriminant, form_substitute, _frames_for_disc, hessian
    from ..rings import QQ
    disc = None
    for frame in _frames_for_disc():
        try:
            W = form_substitute(QQ, C.form, frame)
            disc = pencil_discriminant(W, hessian(W), Fraction(0))
            break
        except ArithmeticError:
            continue
    assert disc not in (None, 0)
    for p in _prime_divisors(Fraction(disc).numerator) | _prime_divisors(Fraction(disc).denominator):
        tag(p, "bad reduction of C")
    # primes dividing c
    cc = Fraction(fd.c)
    for p in _prime_divisors(cc.numerator) | _prime_divisors(cc.denominator):
        tag(p, "divides c")
    # field discriminants of the flex algebra factors
    for K in fd.fields:
        for p in _prime_divisors(K.disc()):
            tag(p, "ramified in flex algebra")
    # content ideal of ell1 (conservative: primes where some ell_x may vanish)
    for K, grad in zip(fd.fields, fd.ell1):
        if K.n == 1:
            g = 0
            for x in grad:
                g = sympy.gcd(g, int(x[0]))
            for p in _prime_divisors(g):
                tag(p, "content of ell1")
            continue
        order = K.maximal_order()
        rows = []
        for x in grad:
            if not K.is_zero(x):
                rows.extend(Ideal.principal(order, x).M)
        A = Ideal(order, rows)
        for p in _prime_divisors(A.norm()):
            tag(p, "content of ell1")
    # leading structure: the eliminant scale (flex coordinates at infinity)
    for p in _prime_divisors(fd.lc):
        tag(p, "flex chart scaling")
    for p in extra:
        tag(int(p), "user supplied")
    return BadPrimeSet(reasons.keys(), reasons)
