"""Local multiplicative structure at a prime P, by exact global arithmetic
in O/P^M.  Provides K_P^x /(K_P^x)^3 with a discrete log, and defining
polynomials of completions to finite precision.

For v != 3 the cube-class data is (valuation mod 3, residue cube class).
For v = 3 the principal-unit part is handled with the classical filtered
basis eta_{j,b} = 1 + w_b pi^j (3 not dividing j, j < e0 = 3e/2), the critical
level e0 carrying the extra mu_3 generator when it is integral, and greedy
peeling computes the canonical expansion coefficients mod 3.
"""

from fractions import Fraction

from ..linalg import fp_kernel, fp_rref, fp_solve, hnf
from .ideals import Ideal, ideal_crt, prime_decomp


class Completion:
    """Arithmetic in O/P^M plus the cube-class dlog of K_P^x."""

    def __init__(self, P, others, M=None):
        self.P = P
        self.order = P.order
        self.K = P.order.K
        self.p = P.p
        self.e = P.e
        self.f = P.f
        self.R = P.residue_field()
        e0twice = 3 * P.e  # 2*e0 with e0 = 3e/2
        base_M = (3 * P.e) // 2 + P.e + 3 + 5 * P.e  # room for shifted peeling
        self.M = M if M is not None else max(base_M, 2 * P.e + 2)
        self.PM = P.pow(self.M)
        # global uniformizer: pi = uniformizer at P, ~1 at the other primes over p
        self.pi = self._uniformizer(others)
        self.pi_pows = [self.order.to_coords_int(self.K.one())]
        for _ in range(self.M + 1):
            self.pi_pows.append(self.PM.reduce(self.order.mul_coords(self.pi_pows[-1], self.pi)))
        # lattices P^j for level maps
        self._Pj = [P.pow(j) if j else Ideal.of_integer(P.order, 1) for j in range(self.M + 1)]
        self._lvl_solvers = {}
        self.e0 = (3 * P.e) // 2 if (3 * P.e) % 2 == 0 else None  # integral critical level
        self._crit = None

    # -- plumbing ---------------------------------------------------------------
    def _uniformizer(self, others):
        P = self.P
        # element with v_P = 1 and v_Q = 0 for the other primes over p
        pairs = [(self._elt_val1(), P.pow(self.M + 2))]
        for Q in others:
            one = P.order.to_coords_int(P.order.K.one())
            pairs.append((one, Q.pow(self.M + 2)))
        x, _I = ideal_crt(P.order, pairs)
        assert P.valuation_coords(x) == 1
        for Q in others:
            assert Q.valuation_coords(x) == 0
        return x

    def _elt_val1(self):
        P = self.P
        P2 = P.pow(2)
        for row in P.M:
            if P.valuation_coords(list(row)) == 1:
                return list(row)
        # combine rows to dodge accidental extra valuation
        base = [sum(r[i] for r in P.M) for i in range(len(P.M))]
        if P.valuation_coords(base) == 1:
            return base
        raise AssertionError("no valuation-1 element found in P")

    def reduce(self, coords):
        return self.PM.reduce(list(coords))

    def mul(self, a, b):
        return self.PM.reduce(self.order.mul_coords(list(a), list(b)))

    def powm(self, a, k):
        out = self.reduce(self.order.to_coords_int(self.K.one()))
        base = self.reduce(a)
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def level(self, z):
        """v_P of z given by O-coords (capped at M)."""
        if not any(z):
            return self.M
        v = self.P.valuation_coords(list(z))
        return min(v, self.M)

    def _level_solver(self, j):
        """Matrix data solving z = c*pi^j mod P^{j+1} for c in the residue field."""
        if j in self._lvl_solvers:
            return self._lvl_solvers[j]
        R = self.R
        n = self.K.n
        Pj1 = self._Pj[j + 1]
        cols = []
        for b in range(self.f):
            rvec = tuple(1 if t == b else 0 for t in range(self.f))
            x = R.lift(rvec)
            img = Pj1.reduce(self.order.mul_coords(x, self.pi_pows[j]))
            cols.append(img)
        self._lvl_solvers[j] = cols
        return cols

    def level_residue(self, z, j):
        """c in R with z = lift(c)*pi^j mod P^{j+1}; requires v_P(z) >= j."""
        p = self.p
        cols = self._level_solver(j)
        Pj1 = self._Pj[j + 1]
        target = Pj1.reduce(list(z))
        Pj = self._Pj[j]

        def pj_coords(vec):
            v = list(vec)
            out = []
            n = len(v)
            for i in range(n):
                c = next(t for t in range(n) if Pj.M[i][t])
                q, r = divmod(v[c], Pj.M[i][c])
                assert r == 0, "element not in P^j"
                out.append(q)
                v = [a - q * b for a, b in zip(v, Pj.M[i])]
            return out

        colc = [pj_coords(c) for c in cols]
        tgtc = pj_coords(target)
        sub = [pj_coords(row) for row in self._Pj[j + 1].M]
        red, _ = fp_rref([[x % p for x in r] for r in sub], p)

        def resid(vec):
            v = [x % p for x in vec]
            for row in red:
                c = next((i for i in range(len(v)) if row[i]), None)
                if c is not None and v[c]:
                    fm = v[c]
                    v = [(a - fm * b) % p for a, b in zip(v, row)]
            return v

        A = [resid(c) for c in colc]
        t = resid(tgtc)
        sol = fp_solve(A, t, p)
        assert sol is not None, "level residue solve failed"
        return tuple(int(s) % p for s in sol)

    def teichmuller(self, u):
        """Teichmuller-type representative with the same residue as the unit u."""
        z = self.reduce(u)
        q = self.R.q
        for _ in range(4 * self.M * self.e + 8):
            z2 = self.powm(z, q)
            if z2 == z:
                break
            z = z2
        return z


class LocalCubeGroup:
    """K_P^x modulo cubes (times Q_v^x handled by the caller at algebra level)."""

    def __init__(self, P, others):
        self.P = P
        self.p = P.p
        self.R = P.residue_field()
        self.C = Completion(P, others)
        self.has_zeta_res = (self.R.q % 3 == 1)
        self.wild = (P.p == 3)
        self.gens = []  # descriptions, parallel to dlog coordinates
        self.labels = []
        self._invcache = {}
        self.max_shift = 5 * max(P.e, 1)
        self._setup()

    def _setup(self):
        self.labels.append("pi")
        self.crit = None
        if not self.wild:
            if self.has_zeta_res:
                self.labels.append("teich")
            self.dim = len(self.labels)
            return
        # wild case: valuation, then filtered principal-unit basis
        C = self.C
        e = C.e
        e0 = Fraction(3 * e, 2)
        self.eta_levels = []
        j = 1
        while Fraction(j) < e0:
            if j % 3 != 0:
                for b in range(C.f):
                    self.labels.append("eta_%d_%d" % (j, b))
                self.eta_levels.append(j)
            j += 1
        self.crit = None
        if e0.denominator == 1:
            self.crit = int(e0)
            self._setup_critical()
            if self.crit_has_kernel:
                self.labels.append("eta_star")
        self.dim = len(self.labels)

    def _setup_critical(self):
        """At level e0: the map w -> w^3 + c0*w on the residue field, where
        multiplying (1 + w pi^{e/2})^3 contributes both w^3 pi^{3e/2} and
        3 w pi^{e/2 + e}.  Its image has index 1 or 3."""
        C = self.C
        R = self.R
        e = C.e
        half = self.crit - e  # = e/2
        # c0: residue of 3*pi^{half} at level crit relative to pi^{crit}:
        # 3 pi^{half} = c0 pi^{crit} mod P^{crit+1}
        three = C.reduce(C.order.to_coords_int(C.K.from_rational(3)))
        val = C.mul(three, C.pi_pows[half])
        assert C.level(val) >= self.crit
        c0 = C.level_residue(val, self.crit)
        self.c0 = c0
        # enumerate the image of w -> w^3 + c0*w (q <= 3^6 is small)
        img = set()
        import itertools
        for w in itertools.product(range(3), repeat=R.f):
            w = tuple(w)
            v = R.add(R.mul(R.mul(w, w), w), R.mul(c0, w))
            img.add(v)
        self.crit_image = img
        self.crit_has_kernel = len(img) < 3 ** R.f
        if self.crit_has_kernel:
            # coset representative map: F_q / image = F_3; build a labelling
            allv = [tuple(v) for v in itertools.product(range(3), repeat=R.f)]
            out = [v for v in allv if v not in img]
            wstar = out[0]
            self.wstar = wstar
            # label classes: 0 for image, 1 for image+wstar, 2 for image+2*wstar
            lab = {}
            for v in img:
                lab[v] = 0
            for v in img:
                lab[R.add(v, wstar)] = 1
                lab[R.add(v, R.add(wstar, wstar))] = 2
            self.crit_label = lab

    # -- dlog -------------------------------------------------------------------
    def dlog(self, coords, valuation=None):
        """F_3 coordinates of a nonzero order element at P: (v_P mod 3, unit part)."""
        C = self.C
        P = self.P
        v = P.valuation_coords(list(coords)) if valuation is None else valuation
        assert v <= self.max_shift, "valuation too large for completion precision"
        out = [v % 3]
        x = C.reduce(coords)
        if not self.wild:
            if self.has_zeta_res:
                r0 = C.level_residue(x, v)
                out.append(self.R.cube_class(r0))
            return tuple(out)
        # wild: peel the principal-unit part at shifted levels
        r0 = C.level_residue(x, v)
        omega = C.teichmuller(self.R.lift(r0))
        out.extend(self._dlog_principal_shifted(x, v, omega))
        return tuple(out)

    def _dlog_principal_shifted(self, x, s, omega):
        """Expansion coefficients mod 3 of the principal-unit part of x/pi^s,
        peeling x directly at levels s+j (omega = Teichmuller part)."""
        C = self.C
        R = self.R
        coeffs = {}
        base = C.mul(omega, C.pi_pows[s])
        guard = 0
        Mcut = C.M - s - 1
        while True:
            guard += 1
            assert guard < 30 * C.M + 60, "peeling did not terminate"
            z = [a - b for a, b in zip(x, base)]
            jj = C.level(z)
            j = jj - s
            if j > Mcut or jj >= C.M:
                break
            r = C.level_residue(z, jj)
            # the principal-unit residue at level j is r / omega-residue
            romega = C.level_residue(base, s)
            r = R.mul(r, R.inv(romega))
            if all(c == 0 for c in r):
                x = C.reduce(x)
                continue
            if j % 3 != 0 and Fraction(j) < Fraction(3 * C.e, 2):
                for b in range(R.f):
                    c = r[b] % 3
                    if c:
                        coeffs[(j, b)] = (coeffs.get((j, b), 0) + c) % 3
                        eta = self._eta(j, b)
                        x = C.mul(x, C.powm(self._inv_unit(eta), c))
            elif self.crit is not None and j == self.crit:
                lab = self.crit_label[tuple(r)] if self.crit_has_kernel else 0
                if self.crit_has_kernel and lab:
                    coeffs["star"] = (coeffs.get("star", 0) + lab) % 3
                    star = self._eta_star()
                    x = C.mul(x, C.powm(self._inv_unit(star), lab))
                    continue
                w = self._crit_solve(tuple(r))
                g = self._one_plus(w, self.crit - C.e)
                x = C.mul(x, C.powm(self._inv_unit(g), 3))
            elif j % 3 == 0 and Fraction(j) < Fraction(3 * C.e, 2):
                w = R.powq(tuple(r), R.q // 3)
                g = self._one_plus(w, j // 3)
                x = C.mul(x, C.powm(self._inv_unit(g), 3))
            else:
                shift = j - C.e
                assert shift > 0, (j, C.e)
                three = C.reduce(C.order.to_coords_int(C.K.from_rational(3)))
                bb = C.mul(three, C.pi_pows[shift])
                c0 = C.level_residue(bb, j)
                w = self._lin_solve(c0, tuple(r))
                g = self._one_plus(w, shift)
                x = C.mul(x, C.powm(self._inv_unit(g), 3))
        out = []
        for lbl in self.labels:
            if lbl == "eta_star":
                out.append(coeffs.get("star", 0))
            elif lbl.startswith("eta_"):
                _, j, b = lbl.split("_")
                out.append(coeffs.get((int(j), int(b)), 0))
        return out

    def _inv_unit(self, t):
        """Inverse of a P-unit modulo P^M by exact linear solve."""
        key = tuple(t)
        if key in self._invcache:
            return self._invcache[key]
        C = self.C
        n = C.K.n
        rows = []
        for i in range(n):
            e = [0] * n
            e[i] = 1
            rows.append(C.order.mul_coords(list(t), e))
        rows += [list(r) for r in C.PM.M]
        one = C.order.to_coords_int(C.K.one())
        from ..linalg import solve_integer
        sol = solve_integer(rows, one)
        assert sol is not None, "unit inversion failed"
        inv = C.reduce(sol[:n])
        self._invcache[key] = inv
        return inv

    def _eta(self, j, b):
        rvec = tuple(1 if t == b else 0 for t in range(self.R.f))
        return self._one_plus(rvec, j)

    def _eta_star(self):
        return self._one_plus(self.wstar, self.crit)

    def _one_plus(self, rvec, j):
        C = self.C
        x = self.R.lift(rvec)
        one = C.order.to_coords_int(C.K.one())
        return C.reduce([a + b for a, b in zip(one, C.order.mul_coords(x, C.pi_pows[j]))])

    def _crit_solve(self, r):
        R = self.R
        import itertools
        for w in itertools.product(range(3), repeat=R.f):
            w = tuple(w)
            if R.add(R.mul(R.mul(w, w), w), R.mul(self.c0, w)) == r:
                return w
        raise AssertionError("critical level solve failed")

    def _lin_solve(self, c0, r):
        """w with c0*w = r in the residue field (c0 a unit)."""
        R = self.R
        return R.mul(R.inv(c0), r)


def completion_minpoly(P, others, prec):
    """Monic defining polynomial over Z_v (mod v^prec) of the completion K_P.

    Built from a generator gamma = pi + lift(residue generator); returns
    (coeffs mod v^prec, degree e*f). Falls back to extending gamma if it
    fails to generate."""
    order = P.order
    K = order.K
    v = P.p
    d = P.e * P.f
    C = Completion(P, others, M=max(P.e * (prec + 2), 2 * P.e + 2))
    R = P.residue_field()
    # residue generator: an element whose residue generates F_q over F_3... over F_p
    gen_res = _residue_generator(R)
    base = R.lift(gen_res)
    # theta's image always generates the completion of Q(theta) at P, so the
    # minpoly of theta is the corresponding factor of the defining polynomial
    cands = [order.to_coords_int(K.gen())]
    cands.append([a + b for a, b in zip(C.pi, base)])
    cands.append(C.pi)
    modulus = v ** prec
    Pek = P.pow(P.e * prec)
    n = K.n
    for gamma in cands:
        # powers of gamma in O/P^{e*prec}: free Z/v^prec-module of rank d
        pows = [order.to_coords_int(K.one())]
        for _ in range(d):
            pows.append(Pek.reduce(order.mul_coords(pows[-1], gamma)))
        # solve: gamma^d = -(c_0 + c_1 gamma + ... + c_{d-1} gamma^{d-1}) mod P^{e*prec}
        # over Z/v^prec; set up linear algebra on a Z/v^prec basis of O/P^{e*prec}
        basis, tocoords = _zmod_basis(P, P.e * prec, v, prec)
        A = [tocoords(p) for p in pows[:d]]
        t = tocoords(pows[d])
        sol = _solve_zmod(A, t, v, prec)
        if sol is None:
            continue
        coeffs = [(-s) % modulus for s in sol] + [1]
        return coeffs, d
    raise ValueError("no generator found for completion")


def _residue_generator(R):
    import itertools
    q = R.q
    if R.f == 1:
        return R.one()
    best = None
    for w in itertools.product(range(R.p), repeat=R.f):
        w = tuple(w)
        if R.is_zero(w):
            continue
        # multiplicative order check is overkill; additive generation of the
        # field as an F_p-algebra by w suffices: powers span
        rows = []
        acc = R.one()
        for _ in range(R.f):
            rows.append(list(acc))
            acc = R.mul(acc, w)
        from ..linalg import fp_rank
        if fp_rank(rows, R.p) == R.f:
            return w
    raise AssertionError("no residue generator")


def _zmod_basis(P, ek, v, prec):
    """Z/v^prec-coordinates on O/P^{ek} via Smith normal form."""
    from ..linalg import snf_with_transform
    order = P.order
    n = order.K.n
    L = P.pow(ek)
    D, U, V = snf_with_transform([row[:] for row in L.M])
    modulus = v ** prec
    idx = [i for i in range(n) if D[i][i] != 1]
    for i in idx:
        assert D[i][i] == modulus, (D[i][i], modulus)

    def tocoords(z):
        w = [sum(int(z[a]) * V[a][b] for a in range(n)) for b in range(n)]
        return [w[i] % modulus for i in idx]

    return idx, tocoords


def _solve_zmod(A, t, v, prec):
    """Solve x*A = t over Z/v^prec (A rows as vectors)."""
    m = v ** prec
    rows = [r[:] for r in A]
    n = len(rows)
    width = len(t)
    aug = [rows[i] + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    # eliminate with unit pivots
    used = []
    piv_of = {}
    for c in range(width):
        piv = next((i for i in range(n) if i not in piv_of.values()
                    and aug[i][c] % v != 0), None)
        if piv is None:
            continue
        inv = pow(aug[piv][c], -1, m)
        aug[piv] = [(x * inv) % m for x in aug[piv]]
        for i in range(n):
            if i != piv and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(x - f * y) % m for x, y in zip(aug[i], aug[piv])]
        piv_of[c] = piv
    x = [0] * n
    rem = list(t)
    for c, piv in piv_of.items():
        f = rem[c] % m
        if f:
            x = [(xi + f * u) % m for xi, u in zip(x, aug[piv][width:])]
            rem = [(a - f * b) % m for a, b in zip(rem, aug[piv][:width])]
    if any(r % m for r in rem):
        return None
    return x
