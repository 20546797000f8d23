"""Plane-cubic geometry: flex algebra and generic flex, Hesse-pencil line
algebras, descent linear forms, the constants c and beta, the induced norm
del2, the chord algebra tower M/N, bad primes, and the Jacobian.

Ternary forms are dicts {(i,j,k): coeff} with i+j+k constant; coefficient
rings follow the small protocol in rings.py so the same helpers serve Q,
number-field, and tower coefficients.
"""

import random
from fractions import Fraction

import sympy

from ..backend.gateway import default_gateway
from ..linalg import det_bareiss, rational_rref
from ..nf import polys
from ..nf.field import NumberField
from ..rings import (QQ, FieldRing, TowerRing, ZeroDivisorSplit, rp_add,
                    rp_divmod, rp_eval, rp_gcd_monic, rp_mul,
                    rp_resultant_monic, rp_sub, rp_trim, ring_det)

MONOMIALS3 = [(3, 0, 0), (2, 1, 0), (2, 0, 1), (1, 2, 0), (1, 1, 1),
              (1, 0, 2), (0, 3, 0), (0, 2, 1), (0, 1, 2), (0, 0, 3)]


# -- ternary forms ------------------------------------------------------------

def form_from_coeffs(coeffs):
    """Ternary cubic from the 10 coefficients in the documented order."""
    assert len(coeffs) == 10
    return {m: Fraction(c) for m, c in zip(MONOMIALS3, coeffs) if c}

def form_coeffs(F):
    return [F.get(m, Fraction(0)) for m in MONOMIALS3]

def form_add(R, F, G):
    out = dict(F)
    for m, c in G.items():
        v = R.add(out.get(m, R.zero()), c)
        if R.is_zero(v):
            out.pop(m, None)
        else:
            out[m] = v
    return out

def form_scal(R, c, F):
    if R.is_zero(c):
        return {}
    return {m: R.mul(c, v) for m, v in F.items()}

def form_mul(R, F, G):
    out = {}
    for m1, c1 in F.items():
        for m2, c2 in G.items():
            m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
            v = R.add(out.get(m, R.zero()), R.mul(c1, c2))
            if R.is_zero(v):
                out.pop(m, None)
            else:
                out[m] = v
    return out

def form_eval(R, F, pt):
    out = R.zero()
    for (i, j, k), c in F.items():
        term = c
        for _ in range(i):
            term = R.mul(term, pt[0])
        for _ in range(j):
            term = R.mul(term, pt[1])
        for _ in range(k):
            term = R.mul(term, pt[2])
        out = R.add(out, term)
    return out

def form_deriv(R, F, var):
    out = {}
    for m, c in F.items():
        if m[var] == 0:
            continue
        m2 = list(m)
        m2[var] -= 1
        out[tuple(m2)] = R.mul(R.from_rational(m[var]), c)
    return out

def form_map_coeffs(F, fn):
    return {m: fn(c) for m, c in F.items()}

def form_q_to_ring(R, F):
    return {m: R.from_rational(c) for m, c in F.items()}


def hessian(coeffs):
    """Hessian determinant of a ternary cubic given by its 10 coefficients."""
    U = form_from_coeffs(coeffs) if not isinstance(coeffs, dict) else coeffs
    R = QQ
    H = [[form_deriv(R, form_deriv(R, U, i), j) for j in range(3)] for i in range(3)]
    det = {}
    import itertools
    for perm in itertools.permutations(range(3)):
        sign = _perm_sign(perm)
        term = form_mul(R, form_mul(R, H[0][perm[0]], H[1][perm[1]]), H[2][perm[2]])
        det = form_add(R, det, form_scal(R, Fraction(sign), term))
    return det


def _perm_sign(p):
    sign = 1
    p = list(p)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def form_to_sympy(F, syms):
    expr = 0
    for (i, j, k), c in F.items():
        expr += sympy.Rational(c) * syms[0] ** i * syms[1] ** j * syms[2] ** k
    return expr


def unimodular_frames(seed):
    """Deterministic stream of SL3(Z) frames, starting with the identity."""
    yield [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    rng = random.Random(seed ^ 0xF1A7)
    while True:
        M = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        for _ in range(6):
            i, j = rng.randrange(3), rng.randrange(3)
            if i != j:
                c = rng.choice([-2, -1, 1, 2])
                for k in range(3):
                    M[i][k] += c * M[j][k]
        yield M


def form_substitute(R, F, T):
    """F(T*u): substitute u_i -> sum_j T[i][j] u_j (entries rationals)."""
    lin = []
    for i in range(3):
        lin.append({(1 if t == 0 else 0, 1 if t == 1 else 0, 1 if t == 2 else 0):
                    R.from_rational(T[i][t]) for t in range(3) if T[i][t]})
    out = {}
    for m, c in F.items():
        term = {(0, 0, 0): c}
        for var in range(3):
            for _ in range(m[var]):
                term = form_mul(R, term, lin[var])
        out = form_add(R, out, term)
    return out


class PlaneCubic:
    """Smooth integral plane cubic with content-1 coefficients."""

    def __init__(self, coeffs):
        coeffs = [Fraction(c) for c in coeffs]
        den = 1
        for c in coeffs:
            den = den * c.denominator // _gcd(den, c.denominator)
        ints = [int(c * den) for c in coeffs]
        g = 0
        for c in ints:
            g = _gcd(g, abs(c))
        if g:
            ints = [c // g for c in ints]
        # deterministic sign: first nonzero coefficient positive
        for c in ints:
            if c:
                if c < 0:
                    ints = [-x for x in ints]
                break
        self.coeffs = ints
        self.form = form_from_coeffs(ints)
        self.hess = hessian(self.form)
        if not self.is_smooth():
            raise ValueError("cubic is singular")

    def is_smooth(self):
        # smooth modulo some prime implies smooth over Q; try small primes
        # first and fall back to the exact discriminant in random frames
        for p in (5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43):
            if self._smooth_mod_p(p):
                return True
        for frame in _frames_for_disc():
            try:
                W = form_substitute(QQ, self.form, frame)
                d = pencil_discriminant(W, hessian(W), at_lambda=Fraction(0))
                return d != 0
            except ArithmeticError:
                continue
        return False

    def _smooth_mod_p(self, p):
        coeffs = {m: int(c) % p for m, c in self.form.items()}
        d = [{}, {}, {}]
        for var in range(3):
            for m, c in coeffs.items():
                if m[var]:
                    m2 = list(m)
                    m2[var] -= 1
                    d[var][tuple(m2)] = (d[var].get(tuple(m2), 0) + m[var] * c) % p

        def ev(F, pt):
            out = 0
            for (i, j, k), c in F.items():
                out = (out + c * pow(pt[0], i, p) * pow(pt[1], j, p)
                       * pow(pt[2], k, p)) % p
            return out

        pts = [(1, a, b) for a in range(p) for b in range(p)]
        pts += [(0, 1, b) for b in range(p)] + [(0, 0, 1)]
        for pt in pts:
            if ev(coeffs, pt) == 0 and all(ev(dv, pt) == 0 for dv in d):
                return False
        return True

    def __repr__(self):
        return "PlaneCubic(%s)" % (self.coeffs,)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _frames_for_disc():
    yield [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    rng = random.Random(0xD15C)
    for _ in range(8):
        M = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        for _ in range(5):
            i, j = rng.randrange(3), rng.randrange(3)
            if i != j:
                c = rng.choice([-1, 1, 2])
                for k in range(3):
                    M[i][k] += c * M[j][k]
        yield M


# -- discriminant of a pencil member via the Macaulay quotient ----------------

_MONOMIALS4 = None


def _monomials4():
    global _MONOMIALS4
    if _MONOMIALS4 is None:
        _MONOMIALS4 = [(i, j, 4 - i - j) for i in range(5) for j in range(5 - i)]
    return _MONOMIALS4


def _macaulay_det(q1, q2, q3):
    """Macaulay determinant pair (det M, det M') for three ternary quadrics
    with Fraction coefficients; Res = det M / det M'."""
    mons = _monomials4()
    rows = []
    tags = []
    for m in mons:
        if m[0] >= 2:
            src, shift = q1, (m[0] - 2, m[1], m[2])
        elif m[1] >= 2:
            src, shift = q2, (m[0], m[1] - 2, m[2])
        else:
            assert m[2] >= 2
            src, shift = q3, (m[0], m[1], m[2] - 2)
        row = {}
        for mm, c in src.items():
            tgt = (mm[0] + shift[0], mm[1] + shift[1], mm[2] + shift[2])
            row[tgt] = row.get(tgt, Fraction(0)) + c
        rows.append([row.get(mm, Fraction(0)) for mm in mons])
        tags.append(m)
    # reduced monomials: divisible by two distinct squares
    redd = [i for i, m in enumerate(tags)
            if sum(1 for t in range(3) if m[t] >= 2) >= 2]
    M = rows
    den = 1
    ints = []
    for row in M:
        for c in row:
            den = den * c.denominator // _gcd(den, c.denominator)
    Mi = [[int(c * den) for c in row] for row in M]
    detM = Fraction(det_bareiss(Mi), den ** len(Mi))
    sub = [[Mi[i][j] for j in redd] for i in redd]
    detMp = Fraction(det_bareiss(sub), den ** len(sub)) if redd else Fraction(1)
    return detM, detMp


def pencil_discriminant(U, H, at_lambda):
    """Discriminant (up to a fixed rational scalar) of U + lambda*H."""
    R = QQ
    W = form_add(R, U, form_scal(R, Fraction(at_lambda), H))
    qs = [form_deriv(R, W, i) for i in range(3)]
    dM, dMp = _macaulay_det(*qs)
    if dMp == 0:
        # evaluation hit a vanishing extraneous minor; perturb via frames
        raise ArithmeticError("degenerate Macaulay minor")
    return dM / dMp


def pencil_quartic(C, max_shift=8):
    """(q, m): primitive integer quartic q with q(lambda)^3 ~ disc(U + lambda*(H + m*U)).

    m shifts the pencil basis so that all four triangles sit at finite lambda."""
    U, H0 = C.form, C.hess
    R = QQ
    for m in range(0, max_shift):
        H = form_add(R, H0, form_scal(R, Fraction(m), U))
        # interpolate disc(lambda): degree 12 polynomial
        xs = []
        ys = []
        lam = 0
        while len(xs) < 14:
            try:
                d = pencil_discriminant(U, H, Fraction(lam))
            except ArithmeticError:
                lam += 1
                continue
            xs.append(Fraction(lam))
            ys.append(d)
            lam += 1
        coeffs = _interp_poly(xs, ys, 13)
        coeffs = polys.trim(coeffs)
        if len(coeffs) - 1 != 12:
            continue
        # disc = const * q(lambda)^3 with q quartic squarefree
        g = polys.pgcd(coeffs, polys.pderiv(coeffs))
        q, r = polys.pdivmod(coeffs, g)
        assert not r
        q = polys.primitive_int(q)
        if polys.deg(q) == 4 and polys.deg(polys.pgcd(q, polys.pderiv(q))) == 0:
            return q, m
    raise ValueError("no good pencil shift found")


def _interp_poly(xs, ys, maxdeg):
    """Lagrange interpolation -> coefficient list (low first)."""
    n = len(xs)
    out = [Fraction(0)] * n
    for i in range(n):
        num = [Fraction(1)]
        den = Fraction(1)
        for j in range(n):
            if j != i:
                num = polys.pmul(num, [-xs[j], Fraction(1)])
                den *= xs[i] - xs[j]
        c = ys[i] / den
        out = polys.padd(out, polys.pscale(num, c))
    return out


# -- flex data -----------------------------------------------------------------

class FlexData:
    def __init__(self, **kw):
        self.__dict__.update(kw)


def flex_data(C, gateway=None, seed=0):
    """Flex algebra F, generic flex, tangent form ell1, g, and c.

    The degree-9 flex eliminant r is made monic by the substitution T = lc*t,
    so flexes are parameterized projectively as (T : lc : Z3(T)) with a single
    polynomial Z3 over Q."""
    gw = gateway or default_gateway()
    R = QQ
    t = sympy.Symbol("t")
    u3 = sympy.Symbol("u3")
    for frame in unimodular_frames(seed):
        Uf = form_substitute(R, C.form, frame)
        Hf = hessian(Uf)
        Ue = _sympy_poly_u3(Uf, t, u3)
        He = _sympy_poly_u3(Hf, t, u3)
        if Ue.degree(u3) != 3 or He.degree(u3) != 3:
            continue
        res = sympy.resultant(Ue, He, u3)
        rpoly = sympy.Poly(res, t)
        r = [Fraction(sympy.Rational(c).p, sympy.Rational(c).q)
             for c in reversed(rpoly.all_coeffs())]
        r = polys.trim(r)
        if polys.deg(r) != 9:
            continue
        if polys.deg(polys.pgcd(r, polys.pderiv(r))) != 0:
            continue
        rint = polys.primitive_int(r)
        # monicize: roots of R are lc * (flex t-coordinates)
        Rm, lc = polys.make_monic_integral([Fraction(c) for c in rint])
        resp = gw.factor_polynomial(Rm)
        fac_polys = sorted(([int(c) for c in fc] for fc, _m in resp["factors"]),
                           key=lambda f: (len(f), f))
        if any(fc[-1] != 1 for fc in fac_polys):
            continue
        fields = [NumberField(fc) for fc in fac_polys]
        # scaled flex: (theta : lc : Z3(theta)); determine the third coordinate
        x3_parts = []
        good = True
        for K in fields:
            KR = FieldRing(K)
            theta = K.gen()
            Upoly = _u3_poly_over_K(Uf, K, theta, lc)
            Hpoly = _u3_poly_over_K(Hf, K, theta, lc)
            g = rp_gcd_monic(KR, Upoly, Hpoly)
            if len(g) - 1 != 1:
                good = False
                break
            x3_parts.append(K.neg(K.div(g[0], g[1])))
        if not good:
            continue
        Z3 = _crt_coordinate(fields, fac_polys, x3_parts)
        ell1 = []
        for K, x3 in zip(fields, x3_parts):
            theta = K.gen()
            flex = _reduce_content_ideal(K, [theta, K.from_rational(lc), x3])
            flex = tuple(flex)
            KR = FieldRing(K)
            UK = form_q_to_ring(KR, Uf)
            grad = [form_eval(KR, form_deriv(KR, UK, i), flex) for i in range(3)]
            if all(K.is_zero(gg) for gg in grad):
                good = False
                break
            grad = _integral_scale_vector(K, grad)
            grad = _reduce_content_ideal(K, grad)
            ell1.append(grad)
            if not _contact_order_three(K, UK, flex, grad):
                good = False
                break
        if not good:
            continue
        gH = _normalize_int_form(Hf)
        W = _norm_form(fields, ell1)
        c = _solve_c(W, gH, Uf)
        if c is None:
            continue
        return FlexData(frame=frame, U=Uf, H=Hf, fields=fields,
                        fac_polys=fac_polys, x3_parts=x3_parts, Z3=Z3, lc=lc,
                        ell1=ell1, g=gH, c=c, eliminant=Rm, seed=seed)
    raise ValueError("no valid projection frame found")


def _sympy_poly_u3(F, t, u3):
    expr = 0
    for (i, j, k), c in F.items():
        expr += sympy.Rational(c) * t ** i * u3 ** k
    return sympy.Poly(expr, u3, t)


def _u3_poly_over_K(F, K, theta, lc=1):
    """F(theta, lc, x) as a poly in x with K coefficients (scaled flex chart)."""
    out = [K.zero()] * 4
    for (i, j, k), c in F.items():
        term = K.scal(Fraction(c) * Fraction(lc) ** j, K.pow(theta, i))
        out[k] = K.add(out[k], term)
    return _trimK(K, out)


def _trimK(K, f):
    while f and K.is_zero(f[-1]):
        f.pop()
    return f


def _crt_coordinate(fields, fac_polys, parts):
    """Single X3 in Q[t] with X3 = part_i mod r_i."""
    X = [Fraction(0)]
    mod = [Fraction(1)]
    for K, r_i, x3 in zip(fields, fac_polys, parts):
        target = list(x3)  # power coords = poly in t of deg < n_i
        ri = [Fraction(c) for c in r_i]
        # solve X + mod * y = target mod r_i
        # current X mod r_i:
        _, Xmod = polys.pdivmod(X, ri)
        diff = polys.psub(polys.trim(list(target)), Xmod)
        _, modred = polys.pdivmod(mod, ri)
        inv = _poly_inverse_mod(modred, ri)
        y = polys.pmod(polys.pmul(diff, inv), ri)
        X = polys.padd(X, polys.pmul(mod, y))
        mod = polys.pmul(mod, ri)
    return X


def _poly_inverse_mod(a, m):
    r0, r1 = [Fraction(c) for c in m], [Fraction(c) for c in a]
    s0, s1 = [], [Fraction(1)]
    while True:
        q, r = polys.pdivmod(r0, r1)
        if not r:
            break
        s = polys.psub(s0, polys.pmul(q, s1))
        r0, r1, s0, s1 = r1, r, s1, s
    assert polys.deg(r1) == 0
    return polys.pscale(s1, 1 / r1[0])


def _reduce_content_ideal(K, vec):
    """Divide a coefficient vector by (as much as possible of) its content
    ideal: always the rational part, plus a generator of the rest when the
    short-vector search finds one.  Coefficients stay integral in the order
    sense; the content ideal becomes trivial whenever the search succeeds."""
    from ..nf.bnfsmall import ideal_generator
    from ..nf.ideals import Ideal
    if K.n == 1:
        g = 0
        for x in vec:
            g = _gcd(g, abs(Fraction(x[0]).numerator)) if not K.is_zero(x) else g
        if g > 1:
            vec = [K.scal(Fraction(1, g), x) for x in vec]
        return list(vec)
    order = K.maximal_order()

    def content(v):
        rows = []
        for x in v:
            if not K.is_zero(x):
                rows.extend(Ideal.principal(order, x).M)
        return Ideal(order, rows)

    A = content(vec)
    if A.norm() == 1:
        return list(vec)
    # rational part: largest r with A contained in r*O
    r = 0
    for row in A.M:
        for x in row:
            r = _gcd(r, abs(x))
    if r > 1:
        vec = [K.scal(Fraction(1, r), x) for x in vec]
        A = content(vec)
        if A.norm() == 1:
            return list(vec)
    alpha = ideal_generator(order, A)
    if alpha is None:
        return list(vec)
    out = [K.div(x, alpha) for x in vec]
    assert content(out).norm() == 1, "content reduction incomplete"
    return out


def _integral_scale_vector(K, vec):
    """Scale a K-vector by a rational so all power coords are integers with
    content 1 (deterministic)."""
    den = 1
    for x in vec:
        for c in x:
            den = den * Fraction(c).denominator // _gcd(den, Fraction(c).denominator)
    vec = [K.scal(den, x) for x in vec]
    cont = 0
    for x in vec:
        for c in x:
            cont = _gcd(cont, abs(int(c)))
    if cont > 1:
        vec = [K.scal(Fraction(1, cont), x) for x in vec]
    # deterministic sign: first nonzero coordinate positive
    for x in vec:
        for c in x:
            if c:
                if c < 0:
                    vec = [K.neg(v) for v in vec]
                return vec
    return vec


def _contact_order_three(K, UK, flex, grad):
    """U restricted to the tangent line vanishes to order exactly 3 at the flex."""
    KR = FieldRing(K)
    # second point on the line grad . u = 0, independent from flex
    basis = None
    for cand in ((K.one(), K.zero(), K.zero()), (K.zero(), K.one(), K.zero()),
                 (K.zero(), K.zero(), K.one())):
        # project cand onto the line: y = cand * (grad.grad) - grad * (grad.cand)
        gg = K.zero()
        for g in grad:
            gg = K.add(gg, K.mul(g, g))
        gc = K.zero()
        for g, cc in zip(grad, cand):
            gc = K.add(gc, K.mul(g, cc))
        y = tuple(K.sub(K.mul(gg, cc), K.mul(gc, g)) for g, cc in zip(grad, cand))
        if any(not K.is_zero(v) for v in y):
            # independent from flex?
            minors = [K.sub(K.mul(flex[i], y[j]), K.mul(flex[j], y[i]))
                      for i in range(3) for j in range(i + 1, 3)]
            if any(not K.is_zero(m) for m in minors):
                basis = y
                break
    assert basis is not None
    # U(s*flex + w*basis): coefficient of s^3, s^2 w, s w^2 must vanish, w^3 not
    coeffs = [K.zero()] * 4
    import itertools
    # expand via trinomial evaluation at symbolic (s, w): use 4-point interpolation
    pts = [Fraction(v) for v in (0, 1, 2, 3)]
    vals = []
    for v in pts:
        pt = tuple(K.add(K.scal(1, f), K.scal(v, b)) for f, b in zip(flex, basis))
        # here s = 1, w = v: gives sum coeffs[k] v^k
        vals.append(form_eval(KR, UK, pt))
    # solve Vandermonde for coeffs over K
    V = [[Fraction(p) ** k for k in range(4)] for p in pts]
    Vinv = _rat_matrix_inverse(V)
    for k in range(4):
        acc = K.zero()
        for i in range(4):
            acc = K.add(acc, K.scal(Vinv[k][i], vals[i]))
        coeffs[k] = acc
    return (K.is_zero(coeffs[0]) and K.is_zero(coeffs[1]) and K.is_zero(coeffs[2])
            and not K.is_zero(coeffs[3]))


def _rat_matrix_inverse(M):
    n = len(M)
    A = [[Fraction(M[i][j]) for j in range(n)] + [Fraction(1 if i == j else 0) for j in range(n)]
         for i in range(n)]
    R, piv = rational_rref(A)
    assert len(R) == n
    return [row[n:] for row in R]


def _normalize_int_form(F):
    """Integer, content-1, deterministic-sign copy of a rational form."""
    den = 1
    for c in F.values():
        den = den * c.denominator // _gcd(den, c.denominator)
    out = {m: int(c * den) for m, c in F.items()}
    g = 0
    for c in out.values():
        g = _gcd(g, abs(c))
    if g > 1:
        out = {m: c // g for m, c in out.items()}
    first = min(out)
    if out[first] < 0:
        out = {m: -c for m, c in out.items()}
    return {m: Fraction(c) for m, c in out.items()}


def _norm_form(fields, ell1):
    """N_{F/Q}(ell1) as a degree-9 rational ternary form, by interpolation."""
    # evaluate det of multiplication-by-L on each factor at sample points
    deg = sum(K.n for K in fields)
    mons = [(i, j, deg - i - j) for i in range(deg + 1) for j in range(deg + 1 - i)]
    pts = []
    rows = []
    vals = []
    rng = random.Random(1234)
    while len(pts) < len(mons):
        p = (rng.randrange(-12, 13), rng.randrange(-12, 13), rng.randrange(-12, 13))
        val = Fraction(1)
        for K, grad in zip(fields, ell1):
            L = K.zero()
            for g, c in zip(grad, p):
                L = K.add(L, K.scal(c, g))
            val *= K.norm(L)
        row = [Fraction(p[0]) ** i * Fraction(p[1]) ** j * Fraction(p[2]) ** k
               for (i, j, k) in mons]
        pts.append(p)
        rows.append(row)
        vals.append(val)
    # solve for coefficients (retry with more points if singular)
    aug = [rows[i] + [vals[i]] for i in range(len(mons))]
    R, piv = rational_rref(aug)
    if len(R) < len(mons):
        raise ArithmeticError("norm interpolation degenerate")
    coeffs = {}
    sol = [Fraction(0)] * len(mons)
    for rr, c in enumerate(piv):
        sol[c] = R[rr][len(mons)]
    for m, c in zip(mons, sol):
        if c:
            coeffs[m] = c
    return coeffs


def _solve_c(W, g, U):
    """c with W = c*g^3 + V*U as forms (V cubic x cubic -> degree 6)."""
    R = QQ
    g3 = form_mul(R, form_mul(R, g, g), g)
    mons9 = [(i, j, 9 - i - j) for i in range(10) for j in range(10 - i)]
    mons6 = [(i, j, 6 - i - j) for i in range(7) for j in range(7 - i)]
    cols = []
    # unknowns: c, then V coefficients
    col_c = [g3.get(m, Fraction(0)) for m in mons9]
    cols.append(col_c)
    for m6 in mons6:
        prod = {}
        for mU, cU in U.items():
            mm = (m6[0] + mU[0], m6[1] + mU[1], m6[2] + mU[2])
            prod[mm] = prod.get(mm, Fraction(0)) + cU
        cols.append([prod.get(m, Fraction(0)) for m in mons9])
    target = [W.get(m, Fraction(0)) for m in mons9]
    # solve least-structure linear system
    A = [[cols[j][i] for j in range(len(cols))] + [target[i]] for i in range(len(mons9))]
    R2, piv = rational_rref(A)
    sol = [Fraction(0)] * len(cols)
    for rr, c in enumerate(piv):
        if c == len(cols):
            return None  # inconsistent
        sol[c] = R2[rr][len(cols)]
    # verify exactly
    c0 = sol[0]
    check = dict(W)
    check = form_add(QQ, check, form_scal(QQ, -c0, g3))
    for m6, vc in zip(mons6, sol[1:]):
        if vc:
            for mU, cU in U.items():
                mm = (m6[0] + mU[0], m6[1] + mU[1], m6[2] + mU[2])
                old = check.get(mm, Fraction(0)) - vc * cU
                if old:
                    check[mm] = old
                else:
                    check.pop(mm, None)
    if any(check.values()):
        return None
    return c0
