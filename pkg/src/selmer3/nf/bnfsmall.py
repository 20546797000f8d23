"""S-class-group and S-unit computation by index calculus on small fields.

The factor-base bound decides the correctness mode:
  * "grh":        Bach bound 12*log(|disc|)^2 (provably generating under GRH)
  * "heuristic":  a scaled-down bound plus an Euler-product h*R certification,
                  the mode practical descent computations actually run in.
  * "unconditional" is reported when the factor base reaches the Minkowski
    bound and the h*R check passes.
Every result records which mode produced it; callers propagate the flag.

Relations are kept as an incrementally updated HNF lattice whose rows carry
their expression in terms of the found smooth elements; a relation that
reduces to zero against the lattice *is* a unit, in factored form.  Outputs
are factored elements: downstream descent code only needs classes modulo
cubes, valuations and characters, all cheap on the factored form.
"""

import math
import random
from fractions import Fraction

import mpmath
import sympy

from ..linalg import det_bareiss, hnf, hnf_with_transform, snf_with_transform, solve_integer
from . import polys
from .field import NumberField
from .ideals import Ideal, prime_decomp
from .roots import roots_of_unity


class BnfError(Exception):
    pass


class FactoredElement:
    """Formal product prod x_i^{e_i} of field elements (power-coord tuples)."""

    __slots__ = ("K", "parts")

    def __init__(self, K, parts):
        merged = {}
        for x, e in parts:
            if e:
                key = tuple(x)
                merged[key] = merged.get(key, 0) + int(e)
        self.K = K
        self.parts = [(x, e) for x, e in merged.items() if e]

    def __repr__(self):
        return "FactoredElement(%d parts)" % len(self.parts)

    def mul(self, other):
        return FactoredElement(self.K, self.parts + other.parts)

    def pow(self, k):
        return FactoredElement(self.K, [(x, e * k) for x, e in self.parts])

    def valuation(self, P):
        return sum(e * P.valuation_element(x) for x, e in self.parts)

    def expand_mod_cubes(self):
        """An exact element representing the same class modulo cubes."""
        out = self.K.one()
        for x, e in self.parts:
            out = self.K.mul(out, self.K.pow(x, e % 3))
        return out

    def expand(self):
        out = self.K.one()
        for x, e in self.parts:
            out = self.K.mul(out, self.K.pow(x, e))
        return out

    def log_embeddings(self, prec=60):
        vals = None
        for x, e in self.parts:
            lv = [mpmath.log(abs(v)) * e for v in self.K.embed_element(x, prec)]
            vals = lv if vals is None else [a + b for a, b in zip(vals, lv)]
        if vals is None:
            r1, r2 = self.K.signature()
            vals = [mpmath.mpf(0)] * (r1 + r2)
        return vals


def factor_degrees(K, p, order=None):
    """[(e, f)] for the primes above p (exact)."""
    d = int(polys.discriminant(K.f))
    if d % p != 0:
        _lc, facs = polys.factor_mod_p(K.f, p)
        return [(1, polys.deg(g)) for g, m in facs for _ in range(m)]
    order = order or K.maximal_order()
    return [(P.e, P.f) for P in prime_decomp(order, p)]


def euler_hr_estimate(K, order, w, pmax=30000):
    """Truncated Euler-product estimate of h*R (class number formula)."""
    r1, r2 = K.signature()
    d = abs(order.disc())
    mpmath.mp.dps = 30
    logres = mpmath.mpf(0)
    p = 2
    dpoly = int(polys.discriminant(K.f))
    while p < pmax:
        if dpoly % p:
            degs = _degree_profile_fast(K.f, p)
        else:
            degs = [f for e, f in factor_degrees(K, p, order)]
        loc = mpmath.mpf(1)
        for f in degs:
            loc *= 1 / (1 - mpmath.mpf(p) ** (-f))
        logres += mpmath.log(loc * (1 - mpmath.mpf(p) ** -1))
        p = int(sympy.nextprime(p))
    res = mpmath.e ** logres
    hr = res * w * mpmath.sqrt(d) / (2 ** r1 * (2 * mpmath.pi) ** r2)
    return float(hr)


def _degree_profile_fast(f, p):
    """Residue degrees of the primes above p when p does not divide disc(f)."""
    fp = [a % p for a in f]
    degs = []
    n = polys.deg(f)
    frob = [0, 1]
    remaining = fp[:]
    remaining_deg = polys.deg(remaining)
    d = 0
    while remaining_deg > 0 and d <= n:
        d += 1
        frob = _powmod_poly(frob, p, remaining, p)
        diff = [(a - b) % p for a, b in polys._zipq(frob, [0, 1])]
        g = _gcd_poly_modp(diff, remaining, p)
        gd = polys.deg(g) if g else 0
        if gd > 0:
            degs.extend([d] * (gd // d))
            remaining = polys._pdivmod_p(remaining, g, p)[0]
            remaining_deg = polys.deg(remaining)
            if remaining_deg > 0:
                frob = polys._pdivmod_p(frob, remaining, p)[1]
    return degs


def _powmod_poly(base, e, mod, p):
    out = [1]
    b = polys._pdivmod_p(base, mod, p)[1]
    while e:
        if e & 1:
            out = polys._pdivmod_p(polys.pmul_mod(out, b, p), mod, p)[1]
        b = polys._pdivmod_p(polys.pmul_mod(b, b, p), mod, p)[1]
        e >>= 1
    return out


def _gcd_poly_modp(a, b, p):
    a = [x % p for x in a]
    b = [x % p for x in b]
    polys.trim(a)
    polys.trim(b)
    while b:
        a, b = b, polys._pdivmod_p(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


class RelationLattice:
    """Incremental HNF of the relation lattice; rows remember how they are
    built from the element list, and dependent relations yield units."""

    def __init__(self, nfb):
        self.nfb = nfb
        self.rows = []      # HNF rows (lattice basis)
        self.exprs = []     # parallel: expression vectors over self.elts
        self.elts = []      # field elements (power-coord tuples)
        self.units = []     # expression vectors over self.elts with zero image

    def _pad(self):
        for e in self.exprs:
            e.extend([0] * (len(self.elts) - len(e)))
        for u in self.units:
            u.extend([0] * (len(self.elts) - len(u)))

    def add(self, vec, elt):
        self.elts.append(tuple(elt))
        self._pad()
        expr_new = [0] * len(self.elts)
        expr_new[-1] = 1
        stacked = [r[:] for r in self.rows] + [list(vec)]
        exprs = [e[:] for e in self.exprs] + [expr_new]
        H, U = hnf_with_transform(stacked)
        newrows, newexprs = [], []
        for i in range(len(H)):
            comb = [0] * len(self.elts)
            for j, c in enumerate(U[i]):
                if c:
                    comb = [a + c * b for a, b in zip(comb, exprs[j])]
            if any(H[i]):
                newrows.append(H[i])
                newexprs.append(comb)
            else:
                if any(comb):
                    self.units.append(comb)
        self.rows = newrows
        self.exprs = newexprs

    def rank(self):
        return len(self.rows)

    def solve(self, vec):
        """Expression of vec over the lattice (as element-exponent vector)."""
        sol = solve_integer(self.rows, list(vec))
        if sol is None:
            return None
        comb = [0] * len(self.elts)
        for c, e in zip(sol, self.exprs):
            if c:
                comb = [a + c * b for a, b in zip(comb, e)]
        return comb


class BnfData:
    """Class group, units and S-machinery for one number field."""

    def __init__(self, K, order, fb, lattice, mode, regulator, torsion, h, invariants):
        self.K = K
        self.order = order
        self.fb = fb
        self.lattice = lattice
        self.mode = mode
        self.regulator = regulator
        self.torsion = torsion
        self.h = h
        self.invariants = invariants

    def fb_index(self, P):
        for i, Q in enumerate(self.fb):
            if Q.p == P.p and Q.M == P.M:
                return i
        raise KeyError("prime not in factor base")

    def principal_gen_for_vector(self, vec):
        """FactoredElement g with (g) = prod fb[i]^vec[i], or None."""
        comb = self.lattice.solve(vec)
        if comb is None:
            return None
        return FactoredElement(self.K, [(self.lattice.elts[j], comb[j])
                                        for j in range(len(comb))])

    def unit_elements(self):
        return [FactoredElement(self.K, [(self.lattice.elts[j], u[j])
                                         for j in range(len(u))])
                for u in self.lattice.units]

    def unit_basis(self, prec=60):
        """FactoredElements whose log vectors form a basis of the found unit
        lattice (fundamental system modulo torsion, up to the lattice found)."""
        r1, r2 = self.K.signature()
        rank = r1 + r2 - 1
        if rank == 0 or not self.lattice.units:
            return []
        lset = {}
        logs = []
        for u in self.lattice.units:
            digits = max((len(str(abs(c))) for c in u if c), default=1)
            uprec = max(prec, 60 + digits)
            mpmath.mp.dps = uprec + 10
            lv = [mpmath.mpf(0)] * (r1 + r2)
            for j, e in enumerate(u):
                if e:
                    key = (tuple(self.lattice.elts[j]), uprec)
                    if key not in lset:
                        lset[key] = [mpmath.log(abs(v))
                                     for v in self.K.embed_element(self.lattice.elts[j], uprec)]
                    lv = [a + e * b for a, b in zip(lv, lset[key])]
            lv = [float(lv[t]) * (1 if t < r1 else 2) for t in range(r1 + r2)]
            logs.append(lv[:rank])
        scale = 2.0 ** 30
        rows = [[x * scale for x in v] for v in logs]
        coords = [[1 if i == j else 0 for j in range(len(logs))] for i in range(len(logs))]
        red = _float_lll(rows, coords)
        basis = []
        pick = []
        for vec, comb in red:
            if sum(x * x for x in vec) < (1e-4 * scale) ** 2:
                continue
            trial = pick + [vec]
            g = [[sum(a * b for a, b in zip(u2, v2)) for v2 in trial] for u2 in trial]
            det = _float_det(g)
            if det > (1e-3 * scale) ** (2 * len(trial)) * 1e-12:
                pick = trial
                uvec = [0] * len(self.lattice.elts)
                for c, u in zip(comb, self.lattice.units):
                    if c:
                        uvec = [a + c * b for a, b in zip(uvec, u)]
                basis.append(FactoredElement(
                    self.K, [(self.lattice.elts[j], uvec[j])
                             for j in range(len(uvec)) if uvec[j]]))
            if len(pick) == rank:
                break
        assert len(basis) == rank, "unit basis extraction failed"
        return basis


class ClassUnitEngine:
    def __init__(self, K, mode="heuristic", seed=0, fb_bound=None, extra_primes=()):
        self.K = K
        self.mode = mode
        self.seed = seed
        self.order = K.maximal_order()
        d = abs(self.order.disc())
        bach = 12 * math.log(max(d, 3)) ** 2
        if fb_bound is not None:
            self.bound = fb_bound
        elif mode == "grh":
            self.bound = int(bach) + 1
        else:
            self.bound = int(min(max(120, 0.12 * bach), 6000))
        self.extra_primes = sorted(set(int(p) for p in extra_primes))
        self.rng = random.Random(seed ^ 0x5EED)
        self._logcache = {}
        r1, r2 = K.signature()
        n = K.n
        self.minkowski = math.sqrt(d) * (4 / math.pi) ** r2 * math.factorial(n) / n ** n

    def build_fb(self):
        fb = []
        fb_primes = []
        p = 2
        while p <= self.bound:
            for P in prime_decomp(self.order, p):
                if P.norm() <= self.bound:
                    fb.append(P)
            fb_primes.append(p)
            p = int(sympy.nextprime(p))
        for p in self.extra_primes:
            if p not in fb_primes:
                for P in prime_decomp(self.order, p):
                    fb.append(P)
                fb_primes.append(p)
        fb_primes.sort()
        self.fb = fb
        self.fb_primes = fb_primes
        self.fb_by_p = {}
        for i, P in enumerate(fb):
            self.fb_by_p.setdefault(P.p, []).append((i, P))

    def _mink_matrix(self):
        K = self.K
        prec = 60
        reals, cplx = K.embeddings(prec)
        rows = []
        sqrt2 = mpmath.sqrt(2)
        for b in self.order.basis_elements():
            vec = []
            for r in reals:
                vec.append(float(_embed_val(b, r)))
            for z in cplx:
                v = _embed_val_c(b, z)
                vec.append(float(mpmath.re(v) * sqrt2))
                vec.append(float(mpmath.im(v) * sqrt2))
            rows.append(vec)
        return rows

    def compute(self, progress=None):
        self.build_fb()
        K, order = self.K, self.order
        n = K.n
        torsion = roots_of_unity(K)
        if n == 1:
            return self._trivial_bnf(torsion)
        nfb = len(self.fb)
        EMB = self._mink_matrix()
        lat = RelationLattice(nfb)
        seen = set()

        # relations from rational primes whose primes all sit in the fb
        for p in self.fb_primes:
            plist = self.fb_by_p.get(p, [])
            decs = prime_decomp(order, p)
            vec = [0] * nfb
            ok = True
            for P in decs:
                idx = next((i for i, Q in plist if Q.M == P.M), None)
                if idx is None:
                    ok = False
                    break
                vec[idx] = P.e
            if ok and tuple(vec) not in seen:
                seen.add(tuple(vec))
                lat.add(vec, K.from_rational(p))

        r1, r2 = K.signature()
        unit_rank = r1 + r2 - 1
        hr_target = None
        batch = 0
        max_batches = 5000
        reg = 1.0
        ratio = 1.0
        while True:
            batch += 1
            if batch > max_batches:
                raise BnfError("relation search did not converge")
            self._relation_batch(EMB, lat, seen)
            if lat.rank() < nfb:
                continue
            D, _U, _V = snf_with_transform([r[:] for r in lat.rows])
            inv = [D[i][i] for i in range(min(len(D), nfb))]
            if any(x == 0 for x in inv):
                continue
            h = 1
            for x in inv:
                h *= max(x, 1)
            reg, units_ok = self._regulator(lat, unit_rank)
            if not units_ok:
                continue
            if hr_target is None:
                hr_target = euler_hr_estimate(K, order, torsion[1])
            ratio = (h * reg) / hr_target if hr_target else 1.0
            if progress:
                progress(batch, len(lat.elts), h, reg, ratio)
            if 0.67 < ratio < 1.5:
                break
        invariants = [x for x in inv if x > 1]
        if self.bound >= self.minkowski and 0.75 < ratio < 1.33:
            mode = "unconditional"
        elif self.bound >= 12 * math.log(max(abs(order.disc()), 3)) ** 2:
            mode = "grh"
        else:
            mode = "heuristic"
        return BnfData(K, order, self.fb, lat, mode, reg, torsion, h, invariants)

    def _trivial_bnf(self, torsion):
        K = self.K
        fb = []
        for p in self.fb_primes:
            fb.extend(prime_decomp(self.order, p))
        lat = RelationLattice(len(fb))
        for i, P in enumerate(fb):
            v = [0] * len(fb)
            v[i] = 1
            lat.add(v, K.from_rational(P.p))
        return BnfData(K, self.order, fb, lat, "unconditional", 1.0,
                       (K.from_rational(-1), 2), 1, [])

    def _relation_batch(self, EMB, lat, seen, count=30):
        K, order = self.K, self.order
        nfb = len(self.fb)
        for _ in range(count):
            i = self.rng.randrange(nfb)
            I = self.fb[i]
            if self.rng.random() < 0.5:
                j = self.rng.randrange(nfb)
                I = I.mul(self.fb[j])
            cands = self._short_elements(I, EMB)
            for coords in cands[:3]:
                x = order.from_coords(coords)
                if K.is_zero(x):
                    continue
                nx = _order_norm(order, coords)
                if nx == 0:
                    continue
                cof, vals = self._smooth_factor(abs(nx))
                if cof != 1:
                    continue
                vec = [0] * nfb
                okay = True
                total = 1
                for p, _e in vals.items():
                    plist = self.fb_by_p.get(p)
                    if plist is None:
                        okay = False
                        break
                    for idx, P in plist:
                        v = P.valuation_element(x)
                        if v:
                            vec[idx] = v
                            total *= P.norm() ** v
                if not okay or total != abs(nx):
                    continue
                key = tuple(vec)
                if key in seen:
                    continue
                seen.add(key)
                lat.add(vec, x)

    def _short_elements(self, I, EMB):
        n = self.K.n
        rows = I.M
        mix = [row[:] for row in rows]
        for _ in range(n):
            a, b = self.rng.randrange(n), self.rng.randrange(n)
            if a != b and self.rng.random() < 0.6:
                c = self.rng.choice([-2, -1, 1, 2])
                mix[a] = [x + c * y for x, y in zip(mix[a], mix[b])]
        fl = []
        for row in mix:
            v = [0.0] * n
            for j, c in enumerate(row):
                if c:
                    for k in range(n):
                        v[k] += c * EMB[j][k]
            fl.append(v)
        red = _float_lll(fl, mix)
        return [coords for _vec, coords in red]

    def _smooth_factor(self, m):
        vals = {}
        for p in self.fb_primes:
            if m == 1:
                break
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                vals[p] = e
        return m, vals

    def _unit_logs(self, lat):
        """Accurate float log vectors of the units: the combination
        coefficients can be enormous, so embeddings are evaluated at a
        precision exceeding their digit size before the cancelling sum."""
        K = self.K
        r1, r2 = K.signature()
        m = r1 + r2
        logs = []
        for u in lat.units:
            digits = max((len(str(abs(c))) for c in u if c), default=1)
            prec = 60 + digits
            lv = [mpmath.mpf(0)] * m
            mpmath.mp.dps = prec + 10
            for j, c in enumerate(u):
                if c:
                    key = (tuple(lat.elts[j]), prec)
                    if key not in self._logcache:
                        self._logcache[key] = [mpmath.log(abs(v))
                                               for v in K.embed_element(lat.elts[j], prec)]
                    lv = [a + c * b for a, b in zip(lv, self._logcache[key])]
            lv = [float(lv[t]) * (1 if t < r1 else 2) for t in range(m)]
            logs.append(lv)
        return logs

    def _regulator(self, lat, unit_rank):
        if unit_rank == 0:
            return 1.0, True
        if len(lat.units) < unit_rank:
            return 0.0, False
        logs = self._unit_logs(lat)
        best = _log_lattice_regulator(logs, unit_rank)
        if best is None or best < 1e-8:
            return 0.0, False
        return best, True


def _log_lattice_regulator(logs, rank):
    """Covolume of the lattice spanned by the log vectors (rank coords)."""
    rows = [v[:rank] for v in logs]
    scale = 2 ** 30
    Z = [[int(round(x * scale)) for x in r] for r in rows]
    Z = [r for r in Z if any(abs(x) > 1024 for x in r)]
    if len(Z) < rank:
        return None
    from ..linalg import lll
    if len(Z) > 24:
        Z.sort(key=lambda r: sum(x * x for x in r))
        Z = Z[:24]
    R = lll(Z)
    R = [r for r in R if any(abs(x) > 1024 for x in r)]
    if len(R) < rank:
        return None
    R.sort(key=lambda r: sum(x * x for x in r))
    pick = []
    for r in R:
        trial = pick + [r]
        g = [[sum(a * b for a, b in zip(u, v)) for v in trial] for u in trial]
        det = _float_det([[float(x) for x in row] for row in g])
        if det > (1e-3 * scale) ** (2 * len(trial)) * 1e-12:
            pick = trial
        if len(pick) == rank:
            break
    if len(pick) < rank:
        return None
    g = [[sum(a * b for a, b in zip(u, v)) for v in pick] for u in pick]
    det = _float_det([[float(x) for x in row] for row in g])
    if det <= 0:
        return None
    return math.sqrt(det) / (scale ** rank)


def _float_det(M):
    A = [row[:] for row in M]
    n = len(A)
    det = 1.0
    for k in range(n):
        piv = max(range(k, n), key=lambda i: abs(A[i][k]))
        if abs(A[piv][k]) < 1e-300:
            return 0.0
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            det = -det
        det *= A[k][k]
        for i in range(k + 1, n):
            f = A[i][k] / A[k][k]
            for j in range(k, n):
                A[i][j] -= f * A[k][j]
    return det


def _float_lll(rows, coords, delta=0.99, snap=True):
    """LLL on float rows, applying the same transforms to integer coords.

    Rows that are numerically zero relative to the largest row are dropped up
    front (e.g. logs of torsion units), otherwise their float noise acts as a
    fake short vector and corrupts the reduction."""
    B = [r[:] for r in rows]
    C = [c[:] for c in coords]
    if snap and B:
        mags = [max(abs(x) for x in r) if r else 0.0 for r in B]
        mx = max(mags) if mags else 0.0
        eps = 1e-12 * mx
        keep = [i for i in range(len(B)) if mags[i] > eps]
        B = [[x if abs(x) > eps else 0.0 for x in B[i]] for i in keep]
        C = [C[i] for i in keep]
    n = len(B)
    if n == 0:
        return []

    def gso():
        Bs = []
        mu = [[0.0] * n for _ in range(n)]
        floor = max(max(abs(x) for x in r) for r in B) ** 2 * 1e-24 + 1e-280
        for i in range(n):
            v = B[i][:]
            for j in range(i):
                d = sum(x * x for x in Bs[j])
                mu[i][j] = (sum(x * y for x, y in zip(B[i], Bs[j])) / d) if d > floor else 0.0
                v = [x - mu[i][j] * y for x, y in zip(v, Bs[j])]
            Bs.append(v)
        return Bs, mu

    Bs, mu = gso()
    k = 1
    steps = 0
    while k < n and steps < 20000:
        steps += 1
        changed = False
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                B[k] = [x - q * y for x, y in zip(B[k], B[j])]
                C[k] = [x - q * y for x, y in zip(C[k], C[j])]
                changed = True
        if changed:
            Bs, mu = gso()
        nk = sum(x * x for x in Bs[k])
        nk1 = sum(x * x for x in Bs[k - 1])
        if nk >= (delta - mu[k][k - 1] ** 2) * nk1 - 1e-300:
            k += 1
        else:
            B[k], B[k - 1] = B[k - 1], B[k]
            C[k], C[k - 1] = C[k - 1], C[k]
            Bs, mu = gso()
            k = max(k - 1, 1)
    out = list(zip(B, C))
    out.sort(key=lambda t: sum(x * x for x in t[0]))
    return out


def _order_norm(order, coords):
    n = order.K.n
    cols = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        cols.append(order.mul_coords(list(coords), e))
    M = [[cols[i][j] for i in range(n)] for j in range(n)]
    return det_bareiss(M)


def _embed_val(a, r):
    out = mpmath.mpf(0)
    for c in reversed(a):
        out = out * r + mpmath.mpf(c.numerator) / mpmath.mpf(c.denominator)
    return out


def _embed_val_c(a, z):
    out = mpmath.mpc(0)
    for c in reversed(a):
        out = out * z + mpmath.mpf(c.numerator) / mpmath.mpf(c.denominator)
    return out


def minkowski_rows(order, prec=60):
    """Float Minkowski embedding of the order basis (rows)."""
    K = order.K
    reals, cplx = K.embeddings(prec)
    rows = []
    sqrt2 = mpmath.sqrt(2)
    for b in order.basis_elements():
        vec = [float(_embed_val(b, r)) for r in reals]
        for z in cplx:
            v = _embed_val_c(b, z)
            vec.append(float(mpmath.re(v) * sqrt2))
            vec.append(float(mpmath.im(v) * sqrt2))
        rows.append(vec)
    return rows


def ideal_short_elements(order, I, seed=0, weights=None):
    """Short elements of an ideal lattice under (optionally weighted) T2."""
    K = order.K
    n = K.n
    EMB = minkowski_rows(order)
    if weights:
        EMB = [[v * w for v, w in zip(row, weights)] for row in EMB]
    rng = random.Random(seed)
    mix = [row[:] for row in I.M]
    for _ in range(n):
        a, b = rng.randrange(n), rng.randrange(n)
        if a != b and rng.random() < 0.5:
            c = rng.choice([-1, 1])
            mix[a] = [x + c * y for x, y in zip(mix[a], mix[b])]
    fl = []
    for row in mix:
        v = [0.0] * len(EMB[0])
        for j, c in enumerate(row):
            if c:
                for k in range(len(EMB[0])):
                    v[k] += c * EMB[j][k]
        fl.append(v)
    red = _float_lll(fl, mix)
    return [coords for _v, coords in red]


def ideal_generator(order, I, tries=60):
    """A generator of the ideal I if one is found by short-vector search.

    Strips the rational part first, then runs weighted-LLL searches with
    small-combination candidates."""
    K = order.K
    n = K.n
    # rational part: largest r with I contained in r*O
    r = 0
    for row in I.M:
        for x in row:
            r = _gcd2(r, abs(x))
    if r > 1:
        J = __import__("selmer3.nf.ideals", fromlist=["Ideal"]).Ideal(
            order, [[x // r for x in row] for row in I.M])
        g = ideal_generator(order, J, tries)
        if g is None:
            return None
        return K.scal(r, g)
    NI = I.norm()
    if NI == 1:
        return K.one()
    r1, r2 = K.signature()
    m = r1 + r2
    for t in range(tries):
        weights = None
        if t:
            rng = random.Random(1000 + t)
            wbase = [mpmath.e ** (rng.uniform(-3.0, 3.0)) for _ in range(m)]
            weights = []
            for i in range(r1):
                weights.append(float(wbase[i]))
            for i in range(r2):
                weights.extend([float(wbase[r1 + i])] * 2)
        cands = ideal_short_elements(order, I, seed=t, weights=weights)
        for coords in cands[:n]:
            if not any(coords):
                continue
            if abs(_order_norm(order, coords)) == NI:
                return order.from_coords(coords)
        import itertools
        base = cands[: min(3, len(cands))]
        for combo in itertools.product((-2, -1, 0, 1, 2), repeat=len(base)):
            if not any(combo):
                continue
            vec = [0] * n
            for cc, bb in zip(combo, base):
                if cc:
                    vec = [u + cc * v for u, v in zip(vec, bb)]
            if any(vec) and abs(_order_norm(order, vec)) == NI:
                return order.from_coords(vec)
    return None


def _gcd2(a, b):
    while b:
        a, b = b, a % b
    return abs(a)
