"""Number fields: arithmetic, maximal orders (Pohst-Zassenhaus round 2),
complex embeddings, and element reduction.

Elements of K = Q[t]/(f) are tuples of Fractions in the power basis
(1, t, ..., t^(n-1)).  Orders carry their basis as rows over the power basis
with a common denominator, plus an integer multiplication table.
"""

from fractions import Fraction
from functools import lru_cache
from math import gcd

import mpmath

from ..linalg import det_bareiss, fp_kernel, fp_rref, hnf
from . import polys


class NumberField:
    """Q[t]/(f) for a monic integral irreducible polynomial f."""

    def __init__(self, f):
        f = [int(a) for a in f]
        assert f[-1] == 1, "defining polynomial must be monic"
        self.f = f
        self.n = polys.deg(f)
        self._redcache = self._power_reductions()
        self._Zk = None
        self._disc = None
        self._emb = {}

    def __repr__(self):
        return "NumberField(%s)" % (self.f,)

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.f == other.f

    def __hash__(self):
        return hash(tuple(self.f))

    # -- element construction -------------------------------------------------
    def el(self, coeffs):
        c = [Fraction(a) for a in coeffs]
        assert len(c) <= self.n
        return tuple(c + [Fraction(0)] * (self.n - len(c)))

    def zero(self):
        return self.el([])

    def one(self):
        return self.el([1])

    def gen(self):
        if self.n == 1:
            return self.el([-self.f[0]])
        return self.el([0, 1])

    def from_rational(self, q):
        return self.el([Fraction(q)])

    def _power_reductions(self):
        """t^k mod f for k up to 2n-2, as rational vectors (f monic integral)."""
        n = self.n
        base = [Fraction(-a) for a in self.f[:-1]]  # t^n in lower powers
        pows = []
        v = [Fraction(1 if i == 0 else 0) for i in range(n)]
        for _k in range(2 * n - 1):
            pows.append(v[:])
            w = [Fraction(0)] + v[:-1]
            if n and v[-1]:
                w = [w[i] + v[-1] * base[i] for i in range(n)]
            v = w
        return pows

    # -- arithmetic ------------------------------------------------------------
    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        n = self.n
        prod = [Fraction(0)] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = [Fraction(0)] * n
        for k, c in enumerate(prod):
            if c:
                pk = self._redcache[k]
                for i in range(n):
                    if pk[i]:
                        out[i] += c * pk[i]
        return tuple(out)

    def scal(self, c, a):
        c = Fraction(c)
        return tuple(c * x for x in a)

    def is_zero(self, a):
        return all(x == 0 for x in a)

    def inv(self, a):
        """Inverse via extended Euclid in Q[t]/(f)."""
        A = polys.trim([Fraction(x) for x in a])
        if not A:
            raise ZeroDivisionError("inverting zero")
        f = [Fraction(c) for c in self.f]
        r0, r1 = f, A
        s0, s1 = [], [Fraction(1)]
        while True:
            q, r = polys.pdivmod(r0, r1)
            if not r:
                break
            s = polys.psub(s0, polys.pmul(q, s1))
            r0, r1, s0, s1 = r1, r, s1, s
        if polys.deg(r1) != 0:
            raise ZeroDivisionError("element is a zero divisor")
        c = r1[0]
        return self.el([x / c for x in s1])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k):
        if k < 0:
            return self.pow(self.inv(a), -k)
        out = self.one()
        while k:
            if k & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            k >>= 1
        return out

    def mul_matrix(self, a):
        """Matrix of multiplication by a on the power basis (columns = images)."""
        cols = []
        b = self.el([1])
        for i in range(self.n):
            cols.append(self.mul(a, self.el([0] * i + [1])))
        return [[cols[j][i] for j in range(self.n)] for i in range(self.n)]

    def charpoly(self, a):
        """Characteristic polynomial of a (Leverrier-Faddeev), low-first coeffs."""
        n = self.n
        M = self.mul_matrix(a)
        c = [Fraction(1)]  # leading
        Mk = [row[:] for row in M]
        coeffs = [Fraction(1)] + [Fraction(0)] * n
        B = [row[:] for row in M]
        cs = []
        for k in range(1, n + 1):
            tr = sum(B[i][i] for i in range(n))
            ck = -tr / k
            cs.append(ck)
            if k < n:
                # B = M*(B + ck*I)
                Bc = [[B[i][j] + (ck if i == j else 0) for j in range(n)] for i in range(n)]
                B = [[sum(M[i][t] * Bc[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        # charpoly x^n + cs[0] x^{n-1} + ... + cs[-1]
        return list(reversed([Fraction(1)] + cs))

    def norm(self, a):
        cp = self.charpoly(a)
        return cp[0] * (-1) ** self.n

    def trace(self, a):
        cp = self.charpoly(a)
        return -cp[self.n - 1]

    def minpoly(self, a):
        cp = self.charpoly(a)
        _, facs = polys.factor_q(cp)
        for g, _m in facs:
            gm = [Fraction(c, g[-1]) for c in g]
            if self.is_zero(self._eval_poly(gm, a)):
                return gm
        raise AssertionError("no factor annihilates element")

    def _eval_poly(self, g, a):
        out = self.zero()
        for c in reversed(g):
            out = self.add(self.mul(out, a), self.from_rational(c))
        return out

    # -- maximal order -----------------------------------------------------
    def maximal_order(self, primes=None):
        """Maximal order (or p-maximal at the given primes only)."""
        if primes is None and self._Zk is not None:
            return self._Zk
        d = polys.discriminant(self.f)
        d = int(d)
        if primes is None:
            fac = polys.factor_int(abs(d))
            plist = [p for p, e in fac.items() if e >= 2]
        else:
            plist = [p for p in primes if d % (p * p) == 0]
        order = Order.equation_order(self)
        for p in sorted(set(plist)):
            order = _p_maximal(order, p)
            order.pmax.add(p)
        order._disc = d // (order.index ** 2)
        if primes is None:
            order.pmax = {"all"}
            self._Zk = order
            self._disc = order._disc
        else:
            order.pmax.update(int(p) for p in primes)
        return order

    def disc(self):
        if self._disc is None:
            self.maximal_order()
        return self._disc

    # -- embeddings ----------------------------------------------------------
    def embeddings(self, prec=80):
        """Complex roots of f at `prec` decimal digits: (real_roots, complex_pairs).

        complex_pairs contains one representative per conjugate pair (Im > 0).
        """
        if prec in self._emb:
            return self._emb[prec]
        mpmath.mp.dps = prec + 20
        roots = mpmath.polyroots([mpmath.mpf(c) for c in reversed(self.f)],
                                 maxsteps=200, extraprec=200)
        reals, cplx = [], []
        for r in roots:
            if abs(mpmath.im(r)) < mpmath.mpf(10) ** (-prec // 2):
                reals.append(mpmath.re(r))
            elif mpmath.im(r) > 0:
                cplx.append(r)
        reals.sort()
        cplx.sort(key=lambda z: (mpmath.re(z), mpmath.im(z)))
        self._emb[prec] = (reals, cplx)
        return self._emb[prec]

    def signature(self):
        r, c = self.embeddings(60)
        return len(r), len(c)

    def embed_element(self, a, prec=80):
        """Values of a at all embeddings: list of mpc/mpf, reals first."""
        reals, cplx = self.embeddings(prec)
        mpmath.mp.dps = prec + 20
        vals = []
        for r in reals:
            vals.append(_horner(a, r))
        for z in cplx:
            vals.append(_horner(a, z))
        return vals


def _horner(coeffs, v):
    out = mpmath.mpf(0)
    for c in reversed(coeffs):
        out = out * v + mpmath.mpf(c.numerator) / mpmath.mpf(c.denominator)
    return out


class Order:
    """An order in a number field: basis rows over the power basis, common
    denominator, integer multiplication table."""

    def __init__(self, K, basis_num, den):
        self.K = K
        n = K.n
        self.basis_num = basis_num  # n x n integer matrix, rows
        self.den = den
        self._mt = None
        self._inv = None  # rational inverse matrix of basis (power -> order coords)
        self.index = 1  # [O : Z[theta]] maintained by round 2
        self._disc = None
        self.pmax = set()  # primes at which this order is known p-maximal

    def is_p_maximal(self, p):
        if "all" in self.pmax or p in self.pmax:
            return True
        d = int(polys.discriminant(self.K.f))
        return d % (p * p) != 0

    @staticmethod
    def equation_order(K):
        n = K.n
        return Order(K, [[1 if i == j else 0 for j in range(n)] for i in range(n)], 1)

    def basis_elements(self):
        return [self.K.el([Fraction(x, self.den) for x in row]) for row in self.basis_num]

    def _basis_inverse(self):
        if self._inv is not None:
            return self._inv
        n = self.K.n
        # solve B^T X = I over Q: compute inverse of basis matrix (rows)
        B = [[Fraction(x, self.den) for x in row] for row in self.basis_num]
        # Gauss-Jordan
        A = [row[:] + [Fraction(1 if i == j else 0) for j in range(n)] for i, row in enumerate(B)]
        r = 0
        for c in range(n):
            piv = next(i for i in range(r, n) if A[i][c] != 0)
            A[r], A[piv] = A[piv], A[r]
            inv = 1 / A[r][c]
            A[r] = [x * inv for x in A[r]]
            for i in range(n):
                if i != r and A[i][c] != 0:
                    fmul = A[i][c]
                    A[i] = [x - fmul * y for x, y in zip(A[i], A[r])]
            r += 1
        self._inv = [row[n:] for row in A]
        return self._inv

    def to_coords(self, a):
        """Coordinates of field element a w.r.t. the order basis (rationals)."""
        Binv = self._basis_inverse()
        # a = sum coords_i * basis_i ; basis rows: power coords. solve coords * B = a
        # i.e. coords = a * B^{-1} with row-vector convention
        return tuple(sum(Fraction(a[j]) * Binv[j][i] for j in range(self.K.n)) for i in range(self.K.n))

    def to_coords_int(self, a):
        c = self.to_coords(a)
        out = []
        for x in c:
            if x.denominator != 1:
                raise ValueError("element not in order")
            out.append(int(x))
        return out

    def from_coords(self, coords):
        n = self.K.n
        vec = [Fraction(0)] * n
        for ci, row in zip(coords, self.basis_num):
            if ci:
                for j in range(n):
                    vec[j] += Fraction(ci * row[j], self.den)
        return tuple(vec)

    def contains(self, a):
        try:
            self.to_coords_int(a)
            return True
        except ValueError:
            return False

    def mult_table(self):
        """MT[i][j] = integer coords of b_i*b_j w.r.t. the order basis."""
        if self._mt is not None:
            return self._mt
        n = self.K.n
        bas = self.basis_elements()
        MT = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                prod = self.K.mul(bas[i], bas[j])
                MT[i][j] = MT[j][i] = self.to_coords_int(prod)
        self._mt = MT
        return MT

    def mul_coords(self, u, v):
        """Product of two order elements given by integer coords."""
        MT = self.mult_table()
        n = self.K.n
        out = [0] * n
        for i, a in enumerate(u):
            if a:
                for j, b in enumerate(v):
                    if b:
                        row = MT[i][j]
                        for k in range(n):
                            if row[k]:
                                out[k] += a * b * row[k]
        return out

    def disc(self):
        if self._disc is None:
            d = int(polys.discriminant(self.K.f))
            self._disc = d // (self.index ** 2)
        return self._disc


def _p_radical_modp(order, p):
    """Basis (mod p) of the p-radical of O/pO, as F_p row vectors."""
    n = order.K.n
    q = p
    while q < n:
        q *= p
    # Frobenius x -> x^q as F_p-linear map on O/pO
    rows = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        # compute e^q via repeated squaring in O/pO
        acc = e
        k = q
        # use binary powering on the coordinate vector
        result = None
        base = e
        while k:
            if k & 1:
                result = base if result is None else [c % p for c in order.mul_coords(result, base)]
            base = [c % p for c in order.mul_coords(base, base)]
            k >>= 1
        rows.append([c % p for c in result])
    return fp_kernel(rows, p)


def _p_maximal(order, p):
    """p-maximal overorder via repeated multiplier-ring enlargement."""
    K = order.K
    n = K.n
    while True:
        rad = _p_radical_modp(order, p)
        # lattice Ip = pO + lifts(rad): coords w.r.t. order basis (an O-ideal)
        Ip = hnf([[p if i == j else 0 for j in range(n)] for i in range(n)] +
                 [[int(x) for x in row] for row in rad])

        def ip_coords(vec):
            # coordinates of an O-vector w.r.t. the HNF basis of Ip (exact)
            v = list(vec)
            out = [0] * n
            pivcols = [next(j for j in range(n) if Ip[i][j]) for i in range(n)]
            for i in range(n):
                c = pivcols[i]
                q, r = divmod(v[c], Ip[i][c])
                assert r == 0, "vector not in the radical lattice"
                out[i] = q
                v = [a - q * b for a, b in zip(v, Ip[i])]
            assert not any(v)
            return out

        # multiplier ring O' = (1/p) ker(O/pO -> End(Ip/pIp)):
        # y qualifies iff y*b has Ip-coordinates divisible by p for all basis b
        big = []
        for i in range(n):
            rowparts = []
            e = [0] * n
            e[i] = 1
            for b in Ip:
                prod = order.mul_coords(e, list(b))
                rowparts.extend(x % p for x in ip_coords(prod))
            big.append(rowparts)
        ker = fp_kernel(big, p)
        # new order basis: (1/p) * (pO + lifts of ker)
        rows = [[p if i == j else 0 for j in range(n)] for i in range(n)]
        rows += [[int(x) for x in v] for v in ker]
        L = hnf(rows)
        # index of enlargement: det(pO)/det(L) = p^n / det(L)
        detL = 1
        for i in range(n):
            detL *= L[i][i]
        if detL == p ** n:
            return order
        # construct the enlarged order: basis rows L/p in terms of current basis
        newb = []
        for row in L:
            vec = order.from_coords(row)
            newb.append(tuple(x / p for x in vec))
        # renormalize to integer matrix with common denominator
        den = 1
        for v in newb:
            for x in v:
                den = den * x.denominator // gcd(den, x.denominator)
        mat = [[int(x * den) for x in v] for v in newb]
        mat = hnf(mat)
        new_order = Order(order.K, mat, den)
        new_order.index = order.index * (p ** n // detL)
        new_order.pmax = set(order.pmax)
        order = new_order
