"""Exact root finding for polynomials over a number field.

Strategy: reduce modulo a well-chosen rational prime q, find the roots in the
residue components, Newton-lift every residue combination in O/q^k O for the
equation order, then reconstruct exact coordinates (denominators divide the
polynomial discriminant) and verify.  Any true root reduces to one of the
lifted candidates, so the returned list is provably complete.
"""

from fractions import Fraction
from math import gcd

import mpmath
import sympy

from ..linalg import hnf
from . import polys
from .field import NumberField, Order
from .ideals import prime_decomp


def _lcm(a, b):
    return a * b // gcd(a, b)


def _clear_denominators(K, coeffs):
    """Scale a K[t] poly so all coefficients have integral power coords.

    Returns (new_coeffs, den) with new = den-scaled version (same roots are
    NOT preserved; caller handles substitution)."""
    den = 1
    for c in coeffs:
        for x in c:
            den = _lcm(den, Fraction(x).denominator)
    return [tuple(Fraction(x) * den for x in c) for c in coeffs], den


def _monicize(K, g):
    """Make g monic via y = lc*t substitution: returns (h, lc) with
    h(y) monic and roots(g) = roots(h)/lc."""
    lc = g[-1]
    n = len(g) - 1
    if K.is_zero(lc):
        raise ValueError("zero leading coefficient")
    out = []
    lcp = K.one()
    # h_i = g_i * lc^{n-1-i}
    for i in range(n):
        out.append(K.mul(g[i], K.pow(lc, n - 1 - i)))
    out.append(K.one())
    return out, lc


def _poly_eval_mod(g_coords, xc, order, m):
    """Evaluate poly with order-coord coefficients at order element mod m."""
    out = None
    for c in reversed(g_coords):
        if out is None:
            out = [v % m for v in c]
        else:
            out = [v % m for v in order.mul_coords(out, xc)]
            out = [(a + b) % m for a, b in zip(out, c)]
    return out


def _solve_unit_mod(order, a, m, q):
    """Inverse of order element a modulo m = q^k (mult-by-a invertible mod q)."""
    n = order.K.n
    # build multiplication matrix columns: a*e_i
    cols = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        cols.append(order.mul_coords(a, e))
    # solve M x = one (order coords), M[j][i] = cols[i][j]
    M = [[cols[i][j] % m for i in range(n)] for j in range(n)]
    b = [v % m for v in order.to_coords_int(order.K.one())]
    # Gaussian elimination mod q^k with unit pivots
    A = [row[:] + [b[i]] for i, row in enumerate(M)]
    piv_of_col = [None] * n
    rows_used = set()
    for c in range(n):
        piv = next(i for i in range(n) if i not in rows_used and A[i][c] % q)
        rows_used.add(piv)
        piv_of_col[c] = piv
        inv = pow(A[piv][c], -1, m)
        A[piv] = [(x * inv) % m for x in A[piv]]
        for i in range(n):
            if i != piv and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % m for x, y in zip(A[i], A[piv])]
    x = [0] * n
    for c in range(n):
        x[c] = A[piv_of_col[c]][n]
    return x


def field_roots(K, g_elems, order=None, qseed=0):
    """All roots in K of the polynomial with K-element coefficients.

    g_elems: list of K elements (power-coord tuples), low degree first.
    Returns a list of exact K elements (verified)."""
    # trivial degree cases
    g = [K.el(c) if not isinstance(c, tuple) else c for c in g_elems]
    while g and K.is_zero(g[-1]):
        g = g[:-1]
    if len(g) <= 1:
        return []
    if len(g) == 2:
        return [K.neg(K.div(g[0], g[1]))]
    if K.n == 1:
        # rational field: use rational root extraction via sympy
        qs = [Fraction(c[0]) for c in g]
        den = 1
        for c in qs:
            den = _lcm(den, c.denominator)
        zz = [int(c * den) for c in qs]
        P = sympy.Poly(list(reversed(zz)), sympy.Symbol("t"))
        out = []
        for r in P.all_roots():
            if r.is_rational:
                out.append(K.el([Fraction(sympy.Rational(r).p, sympy.Rational(r).q)]))
        return out

    # make squarefree over K
    gp = [K.scal(i, g[i]) for i in range(1, len(g))]
    d = _kpoly_gcd(K, g, gp)
    if len(d) > 1:
        g, _ = _kpoly_divmod(K, g, d)

    # monic + integral coefficients
    g, _den = _clear_denominators(K, g)
    gm, lc = _monicize(K, [K.el(c) for c in g])
    gm, _den2 = _clear_denominators(K, gm)
    gm = [K.el(c) for c in gm]
    # gm is monic with integral coefficients now? monicize may reintroduce
    # denominators only if lc had them; cleared again above, keeping monic:
    assert all(Fraction(x).denominator == 1 for c in gm for x in c)

    order = order or Order.equation_order(K)
    n = K.n
    D = abs(int(polys.discriminant(K.f)))

    # coefficient bound for D * (power coords of any root of gm)
    B = _coord_bound(K, gm) * D
    # choose prime q
    q = _pick_prime(K, gm, qseed)
    k = 1
    m = q
    while m <= 2 * B * 4:
        m *= q
        k += 1

    # roots of gm in each residue component
    dec = prime_decomp(Order.equation_order(K), q)
    comps = []
    for P in dec:
        R = P.residue_field()
        gbar = [R.reduce([int(x) % q for x in _order_coords_int(order, c)]) for c in gm]
        comps.append((P, R, _ff_roots(R, gbar)))
    # all combinations
    combos = [[]]
    for P, R, roots in comps:
        if not roots:
            return []  # some component has no root => no root in K
        combos = [c + [r] for c in combos for r in roots]

    out = []
    gm_coords = [_order_coords_int(order, c) for c in gm]
    gprime = [K.scal(i, gm[i]) for i in range(1, len(gm))]
    gp_coords = [_order_coords_int(order, c) for c in gprime]
    for combo in combos:
        # CRT initial approximation mod q
        x0 = _crt_residues(order, comps, combo, q)
        # check g'(x0) invertible mod q: else skip (handled by squarefree choice)
        gpx = _poly_eval_mod(gp_coords, x0, order, q)
        if not _is_unit_mod(order, gpx, q):
            continue
        # Newton iteration
        mm = q
        x = x0
        while mm < m:
            mm = min(mm * mm, m)
            gx = _poly_eval_mod(gm_coords, x, order, mm)
            gpx = _poly_eval_mod(gp_coords, x, order, mm)
            inv = _solve_unit_mod(order, gpx, mm, q)
            delta = order.mul_coords(gx, inv)
            x = [(a - b) % mm for a, b in zip(x, delta)]
        # reconstruct D*x centered mod m, divide by D, undo monicize scaling
        cand_coords = [_center(D * v % m, m) for v in x]
        cand = order.from_coords([Fraction(c, D) for c in cand_coords])
        root = K.div(cand, lc)
        # verify against the original (unscaled) polynomial
        val = K.zero()
        for c in reversed(g_elems):
            ce = K.el(c) if not isinstance(c, tuple) else c
            val = K.add(K.mul(val, root), ce)
        if K.is_zero(val):
            if root not in out:
                out.append(root)
    return out


def _center(v, m):
    v %= m
    return v - m if v > m // 2 else v


def _order_coords_int(order, el):
    c = order.to_coords(el)
    assert all(x.denominator == 1 for x in c)
    return [int(x) for x in c]


def _is_unit_mod(order, coords, q):
    n = order.K.n
    cols = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        cols.append(order.mul_coords(coords, e))
    M = [[cols[i][j] % q for i in range(n)] for j in range(n)]
    from ..linalg import fp_rank
    return fp_rank(M, q) == n


def _crt_residues(order, comps, combo, q):
    """Element of O/qO reducing to the chosen root in each component."""
    n = order.K.n
    # solve linear system: x mod P_i = r_i. Use CRT over the ideals P_i.
    from .ideals import ideal_crt
    pairs = []
    for (P, R, _), r in zip(comps, combo):
        pairs.append((R.lift(r), P))
    x, _I = ideal_crt(order, pairs)
    return [v % q for v in x]


def _coord_bound(K, gm):
    """Numeric bound for the sup-norm of power-basis coords of any root of gm."""
    mpmath.mp.dps = 60
    n = K.n
    reals, cplx = K.embeddings(60)
    embs = [mpmath.mpc(r) for r in reals] + [z for z in cplx] + [mpmath.conj(z) for z in cplx]
    # root bound per embedding: Cauchy bound of the embedded polynomial
    root_bound = mpmath.mpf(1)
    for emb in embs:
        coeffs = []
        for c in gm:
            coeffs.append(_eval_embed(c, emb))
        cb = 1 + max(abs(a) for a in coeffs[:-1]) / abs(coeffs[-1])
        root_bound = max(root_bound, cb)
    # Vandermonde inverse norm
    V = mpmath.matrix(n, n)
    for i, emb in enumerate(embs):
        for j in range(n):
            V[i, j] = emb ** j
    Vinv = V ** -1
    vnorm = max(sum(abs(Vinv[i, j]) for j in range(n)) for i in range(n))
    b = vnorm * root_bound
    return int(mpmath.floor(b)) + 1 << 12


def _eval_embed(c, emb):
    out = mpmath.mpc(0)
    for a in reversed(c):
        out = out * emb + mpmath.mpf(Fraction(a).numerator) / mpmath.mpf(Fraction(a).denominator)
    return out


def _pick_prime(K, gm, qseed):
    """Odd prime q, unramified in Z[theta], gm squarefree mod q (all comps)."""
    d = int(polys.discriminant(K.f))
    # disc of gm over K: nonzero since gm squarefree; avoid primes dividing
    # its norm, detected on the fly instead (cheaper): just retry q.
    q = 100 + 97 * qseed
    tried = 0
    while True:
        q = int(sympy.nextprime(q))
        if d % q == 0:
            continue
        # gm mod q squarefree in every residue component
        dec = prime_decomp(Order.equation_order(K), q)
        ok = True
        order = Order.equation_order(K)
        for P in dec:
            R = P.residue_field()
            gbar = [R.reduce([int(x) % q for x in _order_coords_int(order, c)]) for c in gm]
            while gbar and not any(gbar[-1]):
                gbar.pop()
            if len(gbar) - 1 != len(gm) - 1:
                ok = False
                break
            gpbar = _ffp_deriv(R, gbar)
            if _ffp_gcd_deg(R, gbar, gpbar) != 0:
                ok = False
                break
        if ok:
            return q
        tried += 1
        assert tried < 500, "cannot find a good prime for root finding"


# -- tiny polynomial layer over a ResidueField-like object -------------------

def _ffp_trim(R, f):
    while f and R.is_zero(f[-1]):
        f.pop()
    return f


def _ffp_deriv(R, f):
    out = []
    for i in range(1, len(f)):
        k = i % R.p
        out.append(tuple((k * x) % R.p for x in f[i]))
    return _ffp_trim(R, out)


def _ffp_add(R, f, g):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else R.zero()
        b = g[i] if i < len(g) else R.zero()
        out.append(tuple((x + y) % R.p for x, y in zip(a, b)))
    return _ffp_trim(R, out)


def _ffp_mul(R, f, g):
    if not f or not g:
        return []
    out = [R.zero()] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if not R.is_zero(a):
            for j, b in enumerate(g):
                if not R.is_zero(b):
                    prod = R.mul(a, b)
                    out[i + j] = tuple((x + y) % R.p for x, y in zip(out[i + j], prod))
    return _ffp_trim(R, out)


def _ffp_divmod(R, f, g):
    f = list(f)
    _ffp_trim(R, f)
    ginv = R.inv(g[-1])
    q = [R.zero()] * max(0, len(f) - len(g) + 1)
    while len(f) >= len(g) and f:
        c = R.mul(f[-1], ginv)
        dd = len(f) - len(g)
        q[dd] = c
        for i in range(len(g)):
            sub = R.mul(c, g[i])
            f[dd + i] = tuple((x - y) % R.p for x, y in zip(f[dd + i], sub))
        _ffp_trim(R, f)
    return q, f


def _ffp_gcd(R, f, g):
    a, b = list(f), list(g)
    _ffp_trim(R, a)
    _ffp_trim(R, b)
    while b:
        _, r = _ffp_divmod(R, a, b)
        a, b = b, r
    return a


def _ffp_gcd_deg(R, f, g):
    d = _ffp_gcd(R, f, g)
    return len(d) - 1 if d else -1


def _ffp_powmod(R, base, e, mod):
    out = [R.one()]
    b = list(base)
    while e:
        if e & 1:
            out = _ffp_divmod(R, _ffp_mul(R, out, b), mod)[1]
        b = _ffp_divmod(R, _ffp_mul(R, b, b), mod)[1]
        e >>= 1
    return out


def _ff_roots(R, gbar):
    """Roots in the finite field R of the poly gbar (coeff tuples)."""
    import random as _random
    g = list(gbar)
    _ffp_trim(R, g)
    if len(g) <= 1:
        return []
    # restrict to root part: gcd(g, x^q - x)
    xq = _ffp_powmod(R, [R.zero(), R.one()], R.q, g)
    lin = _ffp_add(R, xq, [R.zero(), _ffneg(R, R.one())])
    h = _ffp_gcd(R, g, lin)
    roots = []
    stack = [h]
    rng = _random.Random(97)
    while stack:
        cur = stack.pop()
        _ffp_trim(R, cur)
        if len(cur) <= 1:
            continue
        if len(cur) == 2:
            # root = -c0/c1
            r = R.mul(_ffneg(R, cur[0]), R.inv(cur[1]))
            roots.append(r)
            continue
        # Cantor-Zassenhaus split for odd q
        while True:
            c = tuple(rng.randrange(R.p) for _ in range(R.f))
            base = [c, R.one()]
            w = _ffp_powmod(R, base, (R.q - 1) // 2, cur)
            w1 = _ffp_add(R, w, [_ffneg(R, R.one())])
            d = _ffp_gcd(R, cur, w1)
            if 0 < len(d) - 1 < len(cur) - 1:
                q2, r2 = _ffp_divmod(R, cur, d)
                assert not r2
                stack.append(d)
                stack.append(q2)
                break
    return roots


def _ffneg(R, a):
    return tuple((-x) % R.p for x in a)


# -- gcd over K ---------------------------------------------------------------

def _kpoly_divmod(K, f, g):
    f = list(f)
    while f and K.is_zero(f[-1]):
        f.pop()
    ginv = K.inv(g[-1])
    q = [K.zero()] * max(0, len(f) - len(g) + 1)
    while len(f) >= len(g) and f:
        c = K.mul(f[-1], ginv)
        d = len(f) - len(g)
        q[d] = c
        for i in range(len(g)):
            f[d + i] = K.sub(f[d + i], K.mul(c, g[i]))
        while f and K.is_zero(f[-1]):
            f.pop()
    return q, f


def _kpoly_gcd(K, f, g):
    a = [c for c in f]
    b = [c for c in g]
    while a and K.is_zero(a[-1]):
        a.pop()
    while b and K.is_zero(b[-1]):
        b.pop()
    while b:
        _, r = _kpoly_divmod(K, a, b)
        a, b = b, r
    if a:
        inv = K.inv(a[-1])
        a = [K.mul(c, inv) for c in a]
    return a


# -- convenience wrappers ------------------------------------------------------

def cube_roots(K, a):
    """All cube roots of a in K (exact)."""
    if K.is_zero(a):
        return [K.zero()]
    return field_roots(K, [K.neg(a), K.zero(), K.zero(), K.one()])


def is_cube(K, a):
    return len(cube_roots(K, a)) > 0


def roots_of_unity(K):
    """(zeta, order): a generator of the roots of unity in K."""
    n = K.n
    r1, _r2 = K.signature()
    if r1 > 0:
        return K.from_rational(-1), 2
    # candidate orders m with phi(m) | n
    best = (K.from_rational(-1), 2)
    cands = sorted({m for m in range(3, 6 * n * n + 1)
                    if sympy.totient(m) <= n and n % sympy.totient(m) == 0})
    for m in cands:
        cyc = sympy.Poly(sympy.cyclotomic_poly(m, sympy.Symbol("t"))).all_coeffs()
        g = [Fraction(int(c)) for c in reversed(cyc)]
        rts = field_roots(K, [K.el([c]) for c in g])
        if rts and m > best[1]:
            best = (rts[0], m)
    return best
