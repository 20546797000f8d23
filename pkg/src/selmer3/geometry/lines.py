"""Hesse-pencil line data: the degenerate-member algebra T, the line algebra
H2 with its integral linear form ell2, the induced norm del2 with the constant
beta, and the chord-tower algebras M and N used by the model builder.

Conventions: flexes are parameterized as (T : lc : Z3(T)) with T a root of the
monic eliminant (flex.py).  A line through the generic flex x with chord slope
s (in the (u1, u3)-chart over u2 = lc) has linear form

    ell_{x,s}(u) = s*u1 + (Z3(x) - s*x)/lc * u2 - u3 .

All line-membership polynomials live in the single variable T.
"""

import random
from fractions import Fraction

import sympy

from ..backend.gateway import default_gateway
from ..nf import polys
from ..nf.field import NumberField
from ..rings import (QQ, FieldRing, TowerRing, ZeroDivisorSplit, rp_add,
                     rp_divmod, rp_eval, rp_gcd_monic, rp_mul,
                     rp_resultant_monic, rp_sub, rp_trim)
from .flex import (FieldRing, form_add, form_deriv, form_eval, form_mul,
                   form_q_to_ring, form_scal, pencil_quartic,
                   _integral_scale_vector, _normalize_int_form, _trimK)


class LineData:
    def __init__(self, **kw):
        self.__dict__.update(kw)


class H2Factor:
    """One absolute factor of H2 with its line data.

    fields: K (NumberField), lam (pencil parameter in K), s_aux (parameter of
    the auxiliary line), ell2 (integral linear form over K), cy (monic cubic
    in T over K whose roots are the flexes on the line), beta (element of K).
    """

    def __init__(self, **kw):
        self.__dict__.update(kw)


def line_data(C, fd, gateway=None, seed=0):
    """Build T, H2 (with ell2, c_y, beta), del2 data, and the M/N towers."""
    gw = gateway or default_gateway()
    qT, shift = pencil_quartic(C)
    # pencil member at lambda: U + lambda*(H + shift*U)
    Hs = form_add(QQ, fd.H, form_scal(QQ, Fraction(shift), fd.U))
    resp = gw.factor_polynomial(qT)
    t_polys = []
    for fc, m in resp["factors"]:
        assert m == 1, "pencil quartic not squarefree"
        fc = [int(c) for c in fc]
        fm, sc = polys.make_monic_integral([Fraction(c) for c in fc])
        t_polys.append((fm, sc))
    t_polys.sort(key=lambda fs: (len(fs[0]), fs[0]))
    T_fields = [NumberField(f) for f, _ in t_polys]

    rng = random.Random(seed ^ 0xA11E)
    for attempt in range(40):
        aux = [[rng.randrange(-5, 6) for _ in range(2)] for _ in range(3)]
        if attempt == 0:
            aux = [[1, 0], [0, 1], [1, 1]]
        try:
            h2_factors = _build_h2(C, fd, Hs, t_polys, aux, gw)
        except _Degenerate:
            continue
        try:
            mdata = _build_m_tower(C, fd, gw)
        except _Degenerate:
            continue
        # beta per H2 factor and exact identity check
        for h2 in h2_factors:
            h2.beta = _solve_beta(fd, h2)
        return LineData(T_fields=T_fields, t_polys=t_polys, pencil_shift=shift,
                        qT=qT, Hs=Hs, h2_factors=h2_factors, aux=aux,
                        m_components=mdata, seed=seed)
    raise ValueError("no nondegenerate auxiliary line found")


class _Degenerate(Exception):
    pass


def _build_h2(C, fd, Hs, t_polys, aux, gw):
    """Absolute H2 factors with ell2 and the flexes-on-line cubic c_y."""
    out = []
    for (tp, tscale) in t_polys:
        KT = NumberField(tp)
        KTR = FieldRing(KT)
        lam = KT.scal(Fraction(1, tscale), KT.gen())  # true pencil root
        # W = U + lam*Hs over KT
        W = form_add(KTR, form_q_to_ring(KTR, fd.U),
                     form_scal(KTR, lam, form_q_to_ring(KTR, Hs)))
        # parametrized aux line P(s) = aux . (s, 1)
        cub = _restrict_form_to_line(KTR, W, aux)  # cubic in s over KT
        if len(cub) - 1 != 3:
            raise _Degenerate
        # squarefree?
        dcub = [KT.scal(i, cub[i]) for i in range(1, len(cub))]
        if len(rp_gcd_monic(KTR, cub, dcub)) != 1:
            raise _Degenerate
        # vertices of the triangle must avoid the aux line: gcd of cub with
        # all three partials of W restricted to the line
        parts = [_restrict_form_to_line(KTR, form_deriv(KTR, W, i), aux)
                 for i in range(3)]
        g = cub
        for ppp in parts:
            g = rp_gcd_monic(KTR, g, ppp)
        if len(g) != 1:
            raise _Degenerate
        # absolutize KT[s]/(cub): primitive element mu = s + k*lam
        for k in range(0, 12):
            mu_min = _absolute_minpoly(KT, tp, cub, k)
            if mu_min is None:
                continue
            _c, facs = polys.factor_q(mu_min)
            if any(m != 1 for _g2, m in facs):
                continue
            break
        else:
            raise _Degenerate
        for fac, _m in sorted(facs, key=lambda fm: (len(fm[0]), fm[0])):
            fac = [int(c) for c in fac]
            if fac[-1] != 1:
                fac_m, fsc = polys.make_monic_integral([Fraction(c) for c in fac])
            else:
                fac_m, fsc = fac, 1
            K2 = NumberField(fac_m)
            mu = K2.scal(Fraction(1, fsc), K2.gen())
            # recover lam in K2: common root of tp(x) and cub_x(mu - k x)
            lam2, s2 = _split_mu(K2, KT, tp, tscale, cub, mu, k)
            # the triangle's line through P(s2): normal = grad W at P(s2)
            K2R = FieldRing(K2)
            W2 = form_add(K2R, form_q_to_ring(K2R, fd.U),
                          form_scal(K2R, lam2, form_q_to_ring(K2R, Hs)))
            P0 = tuple(K2.add(K2.scal(aux[i][0], s2), K2.from_rational(aux[i][1]))
                       for i in range(3))
            grad = [form_eval(K2R, form_deriv(K2R, W2, i), P0) for i in range(3)]
            if all(K2.is_zero(x) for x in grad):
                raise _Degenerate
            ell2 = _integral_scale_vector(K2, grad)
            # flexes on the line: cy = gcd(R(T), ell2(flexparam(T)))
            EofT = _ell_at_flexparam(K2, ell2, fd)
            RQ = [K2.from_rational(c) for c in fd.eliminant]
            cy = rp_gcd_monic(K2R, RQ, EofT)
            if len(cy) - 1 != 3:
                raise _Degenerate
            out.append(H2Factor(K=K2, lam=lam2, s_aux=s2, ell2=ell2, cy=cy,
                                T_poly=tp, mu_shift=k, fac_scale=fsc))
    if sum(h.K.n for h in out) != 12:
        raise _Degenerate
    return out


def _restrict_form_to_line(R, F, aux):
    """F(aux . (s,1)) as a polynomial in s with ring coefficients."""
    # coordinates: u_i(s) = aux[i][0]*s + aux[i][1]
    lin = [[R.from_rational(aux[i][1]), R.from_rational(aux[i][0])] for i in range(3)]
    out = []
    for m, c in F.items():
        term = [c]
        for var in range(3):
            for _ in range(m[var]):
                term = rp_mul(R, term, lin[var])
        out = rp_add(R, out, term)
    return out


def _absolute_minpoly(KT, tp, cub, k):
    """Minimal polynomial over Q of mu = s + k*lam via resultants (sympy)."""
    x, y = sympy.symbols("x y")
    # tp(y) and cub_y(x - k y): coefficients of cub are KT elements = polys in y
    tp_y = sum(int(c) * y ** i for i, c in enumerate(tp))
    cub_x = 0
    for i, c in enumerate(cub):
        cpoly = sum(sympy.Rational(v) * y ** j for j, v in enumerate(c))
        cub_x += cpoly * (x - k * y) ** i
    res = sympy.resultant(sympy.Poly(tp_y, y), sympy.Poly(sympy.expand(cub_x), y), y)
    P = sympy.Poly(res, x)
    coeffs = [Fraction(sympy.Rational(c).p, sympy.Rational(c).q)
              for c in reversed(P.all_coeffs())]
    coeffs = polys.trim(coeffs)
    if polys.deg(coeffs) != 3 * polys.deg(tp):
        return None
    if polys.deg(polys.pgcd(coeffs, polys.pderiv(coeffs))) != 0:
        return None
    return polys.primitive_int(coeffs)


def _split_mu(K2, KT, tp, tscale, cub, mu, k):
    """In K2: lam (root of the scaled tp) and s = mu - k*lam, via gcd."""
    K2R = FieldRing(K2)
    # g1(x) = tp(x) over K2 ; g2(x) = cub_x(mu - k x) over K2
    g1 = [K2.from_rational(c) for c in tp]
    # cub has KT coefficients: interpret their y-polynomials at y = x (unknown)
    # evaluate cub coefficient polys at x: c_i(x) then sum c_i(x) (mu - kx)^i
    xpoly = [K2.zero(), K2.one()]  # x
    mupoly = [mu]
    mu_minus_kx = [mu, K2.from_rational(-k)]
    g2 = []
    for i, c in enumerate(cub):
        cpoly = [K2.from_rational(v) for v in c]  # poly in x
        term = cpoly
        for _ in range(i):
            term = rp_mul(K2R, term, mu_minus_kx)
        g2 = rp_add(K2R, g2, term)
    g = rp_gcd_monic(K2R, g1, g2)
    if len(g) - 1 != 1:
        raise _Degenerate
    lam_scaled = K2.neg(K2.div(g[0], g[1]))  # root of tp
    lam = K2.scal(Fraction(1, tscale), lam_scaled)
    s = K2.sub(mu, K2.scal(k, lam_scaled))
    return lam, s


def _ell_at_flexparam(K2, ell2, fd):
    """ell2 evaluated at the flex parameterization (T, lc, Z3(T)): poly in T."""
    K2R = FieldRing(K2)
    out = []
    # u1 = T: poly [0,1]; u2 = lc: constant; u3 = Z3(T)
    comp = [[K2.zero(), K2.one()], [K2.from_rational(fd.lc)],
            [K2.from_rational(c) for c in fd.Z3]]
    res = []
    for coef, upoly in zip(ell2, comp):
        res = rp_add(K2R, res, [K2.mul(coef, c) for c in upoly])
    return res


def _solve_beta(fd, h2):
    """beta in K2 with del2(ell1) = beta * ell2^3 modulo (U) over K2."""
    K2 = h2.K
    K2R = FieldRing(K2)
    # del2(ell1) at this line: Res_T(cy(T), L(T; u)) where L(T; u) is ell1's
    # coefficient forms CRT'd over the eliminant, i.e. the universal tangent
    # form with Q[T] coefficients evaluated over the cy-roots.
    Lcoeffs = _universal_ell1(fd)  # three Q[T] polynomials
    # reduce each mod cy over K2, then resultant as a cubic form in u
    d2 = _del2_of_linear(K2R, h2.cy, Lcoeffs)
    # solve d2 = beta * ell2^3 + V * U with beta, V in K2
    ell23 = form_mul(K2R, form_mul(K2R, _lin_form(K2, h2.ell2), _lin_form(K2, h2.ell2)),
                     _lin_form(K2, h2.ell2))
    UK = form_q_to_ring(K2R, fd.U)
    mons = sorted(set(list(d2.keys()) + list(ell23.keys()) + list(UK.keys())))
    # unknowns: beta, v  (two ring unknowns) -> solve 2x2 from two monomials,
    # verify on the rest
    rows = []
    for m in mons:
        rows.append((ell23.get(m, K2.zero()), UK.get(m, K2.zero()), d2.get(m, K2.zero())))
    beta = None
    for i in range(len(rows)):
        for j in range(len(rows)):
            if i == j:
                continue
            a1, b1, c1 = rows[i]
            a2, b2, c2 = rows[j]
            det = K2.sub(K2.mul(a1, b2), K2.mul(a2, b1))
            if K2.is_zero(det):
                continue
            beta = K2.div(K2.sub(K2.mul(c1, b2), K2.mul(c2, b1)), det)
            v = K2.div(K2.sub(K2.mul(a1, c2), K2.mul(a2, c1)), det)
            ok = True
            for (a, b, c) in rows:
                lhs = K2.add(K2.mul(a, beta), K2.mul(b, v))
                if not K2.is_zero(K2.sub(lhs, c)):
                    ok = False
                    break
            if ok:
                return beta
    raise _Degenerate


def _lin_form(K, vec):
    return {(1, 0, 0): vec[0], (0, 1, 0): vec[1], (0, 0, 1): vec[2]}


def _universal_ell1(fd):
    """ell1 as a single linear form with Q[T]-coefficients (CRT over factors)."""
    from .flex import _crt_coordinate
    out = []
    for coord in range(3):
        parts = [grad[coord] for grad in fd.ell1]
        out.append(_crt_coordinate(fd.fields, fd.fac_polys, parts))
    return out


def _del2_of_linear(R, cy, Lcoeffs):
    """Product over the roots of cy of the linear form L(T; u): cubic form in u.

    Implemented as the resultant Res_T(cy, L) where L = sum_j L_j(T) u_j: we
    reduce each L_j mod cy and expand the 5x5 Sylvester determinant, whose
    entries are u-linear ring elements, via the form algebra."""
    red = []
    for L in Lcoeffs:
        Lr = [R.from_rational(c) for c in L]
        _q, r = rp_divmod(R, Lr, cy)
        r = r + [R.zero()] * (3 - len(r))
        red.append(r)  # degree <= 2 coefficients
    # linear-form-in-u coefficients for T^0, T^1, T^2:
    lin = []
    for td in range(3):
        lin.append({(1, 0, 0): red[0][td], (0, 1, 0): red[1][td], (0, 0, 1): red[2][td]})
    # Sylvester of (cy deg 3, L deg 2): 5x5; rows: 2 of cy, 3 of L
    FR = _FormRing(R)
    Z = FR.zero()
    cyf = [ {(0,0,0): c} if not R.is_zero(c) else {} for c in cy ]
    rows = []
    rows.append([cyf[0], cyf[1], cyf[2], cyf[3], {}])
    rows.append([{}, cyf[0], cyf[1], cyf[2], cyf[3]])
    rows.append([lin[0], lin[1], lin[2], {}, {}])
    rows.append([{}, lin[0], lin[1], lin[2], {}])
    rows.append([{}, {}, lin[0], lin[1], lin[2]])
    det = _form_det(FR, rows)
    return det


class _FormRing:
    """Forms in u1,u2,u3 over a coefficient ring, as a ring object."""

    def __init__(self, R):
        self.R = R

    def zero(self):
        return {}

    def one(self):
        return {(0, 0, 0): self.R.one()}

    def is_zero(self, F):
        return not F

    def add(self, F, G):
        return form_add(self.R, F, G)

    def sub(self, F, G):
        return form_add(self.R, F, form_scal(self.R, self.R.from_rational(-1), G))

    def mul(self, F, G):
        return form_mul(self.R, F, G)

    def neg(self, F):
        return form_scal(self.R, self.R.from_rational(-1), F)


def _form_det(FR, M):
    n = len(M)
    if n == 1:
        return M[0][0]
    out = FR.zero()
    for j in range(n):
        if FR.is_zero(M[0][j]):
            continue
        minor = [[M[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = FR.mul(M[0][j], _form_det(FR, minor))
        out = FR.add(out, term) if j % 2 == 0 else FR.sub(out, term)
    return out


# -- del2 on elements and z-forms ------------------------------------------------

def del2_element(ld, zpoly):
    """del2 of an F-element given as a Q[T]-poly mod the eliminant: per-H2-factor
    values Res_T(cy, zpoly), returned as a list of K2 elements."""
    out = []
    for h2 in ld.h2_factors:
        K2R = FieldRing(h2.K)
        Z = [h2.K.from_rational(c) for c in zpoly]
        out.append(rp_resultant_monic(K2R, h2.cy, Z))
    return out


def del2_linear_form(ld, Lcoeffs):
    """del2 of a linear u-form with Q[T] coefficients: cubic forms per factor."""
    out = []
    for h2 in ld.h2_factors:
        K2R = FieldRing(h2.K)
        out.append(_del2_of_linear(K2R, h2.cy, Lcoeffs))
    return out


# -- the chord tower M (and N) ---------------------------------------------------

class MComponent:
    """Component of M over the F-factor K_i: field K_i with the slope quartic
    factor m(s); carries the two-other-flexes quadratic q2(T) over the tower."""

    def __init__(self, **kw):
        self.__dict__.update(kw)


def _build_m_tower(C, fd, gw):
    """For each F-factor: slope polynomial of flex chords, its square root
    q4, factored over the factor; towers M_ij = K_i[s]/(m_ij)."""
    comps = []
    R9 = fd.eliminant
    for idx, (K, rpol) in enumerate(zip(fd.fields, fd.fac_polys)):
        KR = FieldRing(K)
        theta = K.gen()
        # r8(T) = eliminant / (T - theta) over K
        RQ = [K.from_rational(c) for c in R9]
        q, rem = rp_divmod(KR, RQ, [K.neg(theta), K.one()])
        assert not rem
        r8 = q
        # slope sigma(T) = (Z3(T) - Z3(theta)) / (lc*(T - theta)) in the chart
        # u1/u2 = T/lc, u3/u2 = Z3(T)/lc: chord slope in (u1,u3)-plane:
        # sigma = (Z3(T)-Z3(theta)) / (T - theta)
        Z3K = [K.from_rational(c) for c in fd.Z3]
        z3th = rp_eval(KR, Z3K, theta)
        num = rp_sub(KR, Z3K, [z3th])
        qs, rs = rp_divmod(KR, num, [K.neg(theta), K.one()])
        assert not rs, "Z3 difference not divisible by T - theta"
        sigma = qs  # polynomial of degree <= 7 over K
        # characteristic polynomial of sigma on K[T]/(r8): via resultant
        # ch(s) = Res_T(r8(T), s - sigma(T)) (monic in s of degree 8)
        ch = _charpoly_of_map(KR, r8, sigma)
        # ch = q4(s)^2
        dch = [K.scal(i, ch[i]) for i in range(1, len(ch))]
        g = rp_gcd_monic(KR, ch, dch)
        q4, rq = rp_divmod(KR, ch, g)
        assert not rq
        if len(q4) - 1 != 4:
            raise _Degenerate
        # factor q4 over K via its action: use gateway factorization over Q
        # by absolutizing: factor the minimal polynomial of s over Q... keep
        # relative: factor q4 by splitting with field_roots-style methods is
        # costly; use sympy factorization over the algebraic field
        facs = _factor_relative(K, q4, gw)
        for m_ij in facs:
            comp = MComponent(i=idx, K=K, m=m_ij, r8=r8, sigma=sigma,
                              theta=theta, z3theta=z3th, q4full=q4)
            comps.append(comp)
    # q2 and the N-cubic per component, over the tower M_ij = K_i[s]/(m_ij)
    for comp in comps:
        K = comp.K
        KR = FieldRing(K)
        TR = TowerRing(KR, comp.m, "s")
        s = TR.gen()
        r8_t = [TR.from_base(c) for c in comp.r8]
        Z3_t = [TR.from_base(K.from_rational(c)) for c in fd.Z3]
        # G(T) = (Z3(T) - Z3(theta)) - s*(T - theta)
        G = rp_sub(TR, Z3_t, [TR.from_base(comp.z3theta)])
        sT = rp_mul(TR, [s], [TR.from_base(K.neg(comp.theta)), TR.one()])
        G = rp_sub(TR, G, sT)
        q2 = rp_gcd_monic(TR, r8_t, G)
        if len(q2) - 1 != 2:
            raise _Degenerate
        comp.q2 = q2
        comp.tower = TR
        # N: remaining-slope cubic q4full/(x - s) over the tower
        q4_t = [TR.from_base(c) for c in comp.q4full]
        ncub, rn = rp_divmod(TR, q4_t, [TR.neg(s), TR.one()])
        assert not rn, "slope quartic not divisible by (x - s) over its tower"
        comp.n_poly = ncub
    return comps


def _charpoly_of_map(KR, modpoly, element_poly):
    """Characteristic polynomial of multiplication by element_poly on
    K[T]/(modpoly): computed as Res_T(modpoly, s - element_poly) with the
    resultant taken coefficient-wise in the tower K[s]."""
    n = len(modpoly) - 1
    # Res_T(modpoly, s - sigma(T)) is a degree-n polynomial in s; evaluate at
    # n+1 rational values of s and interpolate over K.
    pts = []
    vals = []
    k = 0
    while len(pts) < n + 1:
        sval = KR.from_rational(k)
        # Res_T(modpoly, sval - sigma(T)): both polys over K
        Z = rp_sub(KR, [sval], element_poly)
        v = rp_resultant_monic(KR, modpoly, Z)
        pts.append(Fraction(k))
        vals.append(v)
        k += 1
    # Lagrange interpolate over K
    out = [KR.zero()] * (n + 1)
    for i in range(n + 1):
        num = [KR.one()]
        den = Fraction(1)
        for j in range(n + 1):
            if j != i:
                num = rp_mul(KR, num, [KR.from_rational(-pts[j]), KR.one()])
                den *= pts[i] - pts[j]
        c = KR.mul(vals[i], KR.from_rational(Fraction(1) / den))
        for t2 in range(len(num)):
            out[t2] = KR.add(out[t2], KR.mul(c, num[t2]))
    # make monic
    inv = KR.inv(out[-1])
    return [KR.mul(inv, c) for c in out]


def _factor_relative(K, poly, gw):
    """Monic irreducible factors of a monic poly over the number field K."""
    if K.n == 1:
        qpoly = [c[0] for c in poly]
        _c, facs = polys.factor_q(qpoly)
        out = []
        for g, m in facs:
            assert m == 1
            gm = [Fraction(c, g[-1]) for c in g]
            out.append([K.el([c]) for c in gm])
        return out
    enc = []
    for c in poly:
        enc.append([str(Fraction(x)) for x in c])
    resp = gw.factor_polynomial(enc, base=[int(c) for c in K.f])
    out = []
    for gc, m in resp["factors_ext"]:
        assert m == 1, "relative factor with multiplicity"
        fac = []
        for cv in gc:
            vec = [Fraction(x) for x in cv]
            fac.append(K.el(vec))
        # make monic
        lc = fac[-1]
        if not K.is_zero(K.sub(lc, K.one())):
            inv = K.inv(lc)
            fac = [K.mul(inv, c) for c in fac]
        out.append(fac)
    out.sort(key=lambda f: (len(f), [tuple(map(str, c)) for c in f]))
    return out
