"""Coefficient-ring adapters and generic polynomial helpers.

Geometry code is written against a tiny ring protocol (zero/one/add/sub/mul/
is_zero/inv) so the same routines run over Q, number fields, and tower rings
(relative extensions used for the line algebras).  Tower rings may be mere
products of fields; inversion either succeeds or raises ZeroDivisorSplit
carrying a factorization witness, dynamic-evaluation style.
"""

from fractions import Fraction

from .nf import polys


class ZeroDivisorSplit(Exception):
    """Raised when a tower inverse meets a zero divisor; carries a nontrivial
    factor of the top modulus so the caller can split the component."""

    def __init__(self, factor):
        super().__init__("zero divisor; modulus splits")
        self.factor = factor


class QQ:
    """Ring adapter for rationals."""

    n = 1

    @staticmethod
    def zero():
        return Fraction(0)

    @staticmethod
    def one():
        return Fraction(1)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def is_zero(a):
        return a == 0

    @staticmethod
    def inv(a):
        return 1 / a

    @staticmethod
    def from_rational(q):
        return Fraction(q)

    @staticmethod
    def el(c):
        return Fraction(c[0]) if isinstance(c, (list, tuple)) else Fraction(c)


QQ = QQ()


class TowerRing:
    """K[s]/(m(s)) for a base ring K (field or tower): relative extension.

    Elements are tuples of base elements, length deg(m)."""

    def __init__(self, base, modulus, varname="s"):
        self.base = base
        self.modulus = list(modulus)  # coefficients in base, monic
        assert base.is_zero(base.sub(self.modulus[-1], base.one())), "modulus must be monic"
        self.d = len(modulus) - 1
        self.varname = varname

    def __repr__(self):
        return "TowerRing(%s, deg %d)" % (self.varname, self.d)

    def zero(self):
        return tuple(self.base.zero() for _ in range(self.d))

    def one(self):
        return tuple([self.base.one()] + [self.base.zero()] * (self.d - 1))

    def gen(self):
        if self.d == 1:
            return (self.base.neg(self.modulus[0]),)
        return tuple([self.base.zero(), self.base.one()] + [self.base.zero()] * (self.d - 2))

    def from_base(self, a):
        return tuple([a] + [self.base.zero()] * (self.d - 1))

    def from_rational(self, q):
        return self.from_base(self.base.from_rational(q))

    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(self.base.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def is_zero(self, a):
        return all(self.base.is_zero(x) for x in a)

    def mul(self, a, b):
        B = self.base
        d = self.d
        prod = [B.zero()] * (2 * d - 1)
        for i, x in enumerate(a):
            if not B.is_zero(x):
                for j, y in enumerate(b):
                    if not B.is_zero(y):
                        prod[i + j] = B.add(prod[i + j], B.mul(x, y))
        # reduce modulo the monic modulus
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if B.is_zero(c):
                continue
            for i in range(self.d):
                prod[k - self.d + i] = B.sub(prod[k - self.d + i], B.mul(c, self.modulus[i]))
            prod[k] = B.zero()
        return tuple(prod[:d])

    def pow(self, a, k):
        out = self.one()
        while k:
            if k & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            k >>= 1
        return out

    def scal(self, q, a):
        qb = self.base.from_rational(q)
        return tuple(self.base.mul(qb, x) for x in a)

    def inv(self, a):
        """Inverse via linear algebra over the base; raises ZeroDivisorSplit
        with a monic proper factor of the modulus when a is a zero divisor."""
        B = self.base
        d = self.d
        if d == 1:
            return (B.inv(a[0]),)
        cols = [a]
        cur = a
        for _ in range(d - 1):
            cur = self.mul(cur, self.gen())
            cols.append(cur)
        rows = [[cols[j][i] for j in range(d)] + [B.one() if i == 0 else B.zero()]
                for i in range(d)]
        r = 0
        pivcols = []
        for c in range(d):
            piv = None
            for i in range(r, d):
                if not B.is_zero(rows[i][c]):
                    piv = i
                    break
            if piv is None:
                g = rp_gcd_monic(B, self.modulus, list(a))
                assert 0 < len(g) - 1 < self.d, "inconsistent zero divisor"
                raise ZeroDivisorSplit(g)
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = B.inv(rows[r][c])
            rows[r] = [B.mul(inv, v) for v in rows[r]]
            for i in range(d):
                if i != r and not B.is_zero(rows[i][c]):
                    f = rows[i][c]
                    rows[i] = [B.sub(v, B.mul(f, w)) for v, w in zip(rows[i], rows[r])]
            pivcols.append(c)
            r += 1
        sol = [B.zero()] * d
        for rr, c in enumerate(pivcols):
            sol[c] = rows[rr][d]
        return tuple(sol)

    def div(self, a, b):
        return self.mul(a, self.inv(b))


class FieldRing:
    """Adapter exposing a NumberField through the ring protocol."""

    def __init__(self, K):
        self.K = K
        self.n = K.n

    def zero(self):
        return self.K.zero()

    def one(self):
        return self.K.one()

    def gen(self):
        return self.K.gen()

    def add(self, a, b):
        return self.K.add(a, b)

    def sub(self, a, b):
        return self.K.sub(a, b)

    def mul(self, a, b):
        return self.K.mul(a, b)

    def neg(self, a):
        return self.K.neg(a)

    def is_zero(self, a):
        return self.K.is_zero(a)

    def inv(self, a):
        return self.K.inv(a)

    def div(self, a, b):
        return self.K.div(a, b)

    def pow(self, a, k):
        return self.K.pow(a, k)

    def scal(self, q, a):
        return self.K.scal(q, a)

    def from_rational(self, q):
        return self.K.from_rational(q)


# -- generic univariate helpers over a ring ------------------------------------

def rp_trim(R, f):
    while f and R.is_zero(f[-1]):
        f.pop()
    return f


def rp_add(R, f, g):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else R.zero()
        b = g[i] if i < len(g) else R.zero()
        out.append(R.add(a, b))
    return rp_trim(R, out)


def rp_sub(R, f, g):
    return rp_add(R, f, [R.neg(x) for x in g])


def rp_mul(R, f, g):
    if not f or not g:
        return []
    out = [R.zero()] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if not R.is_zero(a):
            for j, b in enumerate(g):
                if not R.is_zero(b):
                    out[i + j] = R.add(out[i + j], R.mul(a, b))
    return rp_trim(R, out)


def rp_divmod(R, f, g):
    """Division over a ring whose leading coefficient is invertible."""
    f = list(f)
    rp_trim(R, f)
    ginv = R.inv(g[-1])
    q = [R.zero()] * max(0, len(f) - len(g) + 1)
    while len(f) >= len(g) and f:
        c = R.mul(f[-1], ginv)
        d = len(f) - len(g)
        q[d] = c
        for i in range(len(g)):
            f[d + i] = R.sub(f[d + i], R.mul(c, g[i]))
        rp_trim(R, f)
    return q, f


def rp_gcd_monic(R, f, g):
    """Monic gcd over a ring with invertible leading coefficients (field or
    tower of fields; raises ZeroDivisorSplit over genuine products)."""
    a, b = list(f), list(g)
    rp_trim(R, a)
    rp_trim(R, b)
    while b:
        _q, r = rp_divmod(R, a, b)
        a, b = b, r
    if a:
        inv = R.inv(a[-1])
        a = [R.mul(inv, c) for c in a]
    return a


def rp_eval(R, f, x):
    out = R.zero()
    for c in reversed(f):
        out = R.add(R.mul(out, x), c)
    return out


def rp_resultant_monic(R, c, Z):
    """Resultant Res_t(c, Z) with c monic: product of Z over the roots of c.

    Computed as det of the Sylvester-style matrix via reduction: reduce Z mod
    c, then expand the small determinant (deg c <= 3 in our uses)."""
    c = list(c)
    Z = list(Z)
    rp_trim(R, c)
    rp_trim(R, Z)
    degc = len(c) - 1
    if degc == 0:
        return R.one()
    if not Z:
        return R.zero()
    degZ = len(Z) - 1
    _q, r = rp_divmod(R, Z, c)
    # Res(c, Z) = lc(c)^{degZ - degR} * Res(c, r) = Res(c, r) for monic c
    Z = r
    if not Z:
        return R.zero()
    degZ = len(Z) - 1
    # Sylvester matrix of (c, Z): (degZ + degc) square
    n = degZ + degc
    M = []
    for i in range(degZ):
        row = [R.zero()] * n
        for j, cc in enumerate(c):
            row[i + j] = cc
        M.append(row)
    for i in range(degc):
        row = [R.zero()] * n
        for j, zz in enumerate(Z):
            row[i + j] = zz
        M.append(row)
    return ring_det(R, M)


def ring_det(R, M):
    """Determinant over a commutative ring: cofactor expansion (small sizes)."""
    n = len(M)
    if n == 0:
        return R.one()
    if n == 1:
        return M[0][0]
    if n == 2:
        return R.sub(R.mul(M[0][0], M[1][1]), R.mul(M[0][1], M[1][0]))
    out = R.zero()
    for j in range(n):
        if R.is_zero(M[0][j]):
            continue
        minor = [[M[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = R.mul(M[0][j], ring_det(R, minor))
        out = R.add(out, term) if j % 2 == 0 else R.sub(out, term)
    return out
