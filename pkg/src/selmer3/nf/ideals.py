"""Ideal arithmetic and prime decomposition in (orders of) number fields.

Ideals are Z-lattices given by HNF integer matrices whose rows are coordinates
with respect to the order basis.  Prime decomposition follows Buchmann-Lenstra
(splitting the separable algebra O/rad by idempotents), which is uniform in p
and needs no index-divisor special cases.
"""

import random
from fractions import Fraction

from ..linalg import fp_kernel, fp_rref, hnf, kernel_z, solve_integer
from . import polys


class Ideal:
    """Integral ideal of an order, as an HNF lattice in order coordinates."""

    def __init__(self, order, rows):
        self.order = order
        n = order.K.n
        H = hnf([list(map(int, r)) for r in rows])
        assert len(H) == n, "ideal lattice must have full rank"
        self.M = H

    @staticmethod
    def principal(order, a):
        """Ideal generated by the order element a (field element or coords)."""
        if not isinstance(a, (list, tuple)) or len(a) != order.K.n or not isinstance(a[0], (int,)):
            coords = order.to_coords_int(a)
        else:
            coords = list(a)
        rows = []
        n = order.K.n
        for i in range(n):
            e = [0] * n
            e[i] = 1
            rows.append(order.mul_coords(coords, e))
        return Ideal(order, rows)

    @staticmethod
    def of_integer(order, m):
        n = order.K.n
        return Ideal(order, [[m if i == j else 0 for j in range(n)] for i in range(n)])

    def norm(self):
        out = 1
        for i in range(len(self.M)):
            out *= self.M[i][i]
        return abs(out)

    def __eq__(self, other):
        return self.order is other.order and self.M == other.M

    def __hash__(self):
        return hash(tuple(map(tuple, self.M)))

    def mul(self, other):
        rows = []
        for a in self.M:
            for b in other.M:
                rows.append(self.order.mul_coords(a, b))
        return Ideal(self.order, rows)

    def add(self, other):
        return Ideal(self.order, self.M + other.M)

    def pow(self, k):
        assert k >= 0
        out = Ideal.of_integer(self.order, 1)
        base = self
        while k:
            if k & 1:
                out = out.mul(base)
            base = base.mul(base)
            k >>= 1
        return out

    def contains(self, coords):
        v = list(coords)
        n = len(v)
        for i in range(n):
            c = next(j for j in range(n) if self.M[i][j])
            q, r = divmod(v[c], self.M[i][c])
            if r:
                return False
            v = [a - q * b for a, b in zip(v, self.M[i])]
        return not any(v)

    def reduce(self, coords):
        """Canonical representative of coords modulo the ideal lattice."""
        v = list(coords)
        n = len(v)
        for i in range(n):
            c = next(j for j in range(n) if self.M[i][j])
            q = v[c] // self.M[i][c]
            v = [a - q * b for a, b in zip(v, self.M[i])]
        return v

    def intersect(self, other):
        n = self.order.K.n
        # kernel of [I; -J] gives (u, v) with u*I = v*J, i.e. common vectors
        A = [self.M[i][:] for i in range(n)] + [[-x for x in other.M[i]] for i in range(n)]
        K = kernel_z(A)
        rows = []
        for vec in K:
            u = vec[:n]
            x = [sum(u[i] * self.M[i][j] for i in range(n)) for j in range(n)]
            rows.append(x)
        return Ideal(self.order, rows)


def idempotent_pair(order, I, J):
    """For coprime ideals I + J = O, return (i, j) coords with i+j = 1, i in I, j in J."""
    n = order.K.n
    one = [1 if k == 0 else 0 for k in range(n)]
    # order basis may not start with 1; express 1 in order coords
    one = order.to_coords_int(order.K.one())
    sol = solve_integer(I.M + J.M, one)
    assert sol is not None, "ideals are not coprime"
    i = [sum(sol[k] * I.M[k][j] for k in range(n)) for j in range(n)]
    j = [a - b for a, b in zip(one, i)]
    return i, j


def ideal_crt(order, pairs):
    """x with x = a_k mod I_k for pairwise coprime ideals. pairs: [(a_coords, Ideal)]."""
    a, I = pairs[0]
    a = list(a)
    for b, J in pairs[1:]:
        i, j = idempotent_pair(order, I, J)
        # x = a*j + b*i  (j = 1 mod I, 0 mod J; i = 0 mod I, 1 mod J)
        x = [u + v for u, v in zip(order.mul_coords(a, j), order.mul_coords(list(b), i))]
        I = I.mul(J)
        a = I.reduce(x)
    return a, I


class PrimeIdeal(Ideal):
    """Prime ideal with cached splitting data and valuation machinery."""

    def __init__(self, order, rows, p, f):
        super().__init__(order, rows)
        self.p = p
        self.f = f
        self.e = None  # set by prime_decomp
        self._anti = None
        self._resfield = None

    def __repr__(self):
        return "PrimeIdeal(p=%d, e=%s, f=%d)" % (self.p, self.e, self.f)

    def anti_uniformizer(self):
        """Coords of tau in O with tau/p in P^{-1} \\ O."""
        if self._anti is not None:
            return self._anti
        n = self.order.K.n
        # y with y*P subset pO
        rows = []
        for i in range(n):
            e = [0] * n
            e[i] = 1
            row = []
            for b in self.M:
                prod = self.order.mul_coords(e, list(b))
                row.extend(x % self.p for x in prod)
            rows.append(row)
        ker = fp_kernel(rows, self.p)
        # pick kernel lift not in pO
        for v in ker:
            if any(x % self.p for x in v):
                self._anti = [int(x) for x in v]
                return self._anti
        raise AssertionError("no anti-uniformizer found")

    def valuation_coords(self, coords):
        """v_P(x) for a nonzero order element in integer coords."""
        tau = self.anti_uniformizer()
        v = 0
        cur = list(coords)
        assert any(cur)
        while True:
            nxt = self.order.mul_coords(cur, tau)
            if all(c % self.p == 0 for c in nxt):
                cur = [c // self.p for c in nxt]
                v += 1
            else:
                return v

    def valuation_element(self, a):
        """v_P(a) for a nonzero field element (rational denominators allowed)."""
        den = 1
        for x in a:
            den = den * Fraction(x).denominator // _gcd(den, Fraction(x).denominator)
        scaled = self.order.K.scal(den, a)
        coords = self.order.to_coords_int(scaled)
        return self.valuation_coords(coords) - self.valuation_int(den)

    def valuation_int(self, m):
        """v_P of a nonzero rational integer."""
        m = abs(int(m))
        v = 0
        while m % self.p == 0:
            m //= self.p
            v += self.e
        # p-part only: v_P(m) = e * v_p(m)
        return v

    def valuation_ideal(self, I):
        return min(self.valuation_coords(list(row)) for row in I.M)

    def residue_field(self):
        if self._resfield is None:
            self._resfield = ResidueField(self)
        return self._resfield

    def smallest_integer(self):
        return self.p


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


class ResidueField:
    """O/P as an explicit F_{p^f}: basis over F_p with multiplication."""

    def __init__(self, P):
        self.P = P
        self.p = P.p
        self.f = P.f
        order = P.order
        n = order.K.n
        # column-reduce P's lattice mod p to find quotient basis
        span, pivots = fp_rref([[x % self.p for x in row] for row in P.M], self.p)
        self.span = span
        free = [j for j in range(n) if j not in [next(i for i in range(n) if row[i]) for row in span]]
        # recompute pivots robustly
        pivcols = []
        for row in span:
            pivcols.append(next(i for i in range(n) if row[i]))
        free = [j for j in range(n) if j not in pivcols]
        assert len(free) == self.f, (len(free), self.f)
        self.free = free
        self.q = self.p ** self.f

    def reduce(self, coords):
        """Image of an order element (int coords) in F_q, as tuple over free coords."""
        v = [x % self.p for x in coords]
        for row in self.span:
            c = next(i for i in range(len(v)) if row[i])
            if v[c]:
                fmul = v[c]
                v = [(a - fmul * b) % self.p for a, b in zip(v, row)]
        return tuple(v[j] for j in self.free)

    def lift(self, rvec):
        """Order coords of a lift of the residue vector."""
        n = self.P.order.K.n
        v = [0] * n
        for val, j in zip(rvec, self.free):
            v[j] = int(val)
        return v

    def mul(self, a, b):
        va, vb = self.lift(a), self.lift(b)
        return self.reduce(self.P.order.mul_coords(va, vb))

    def powq(self, a, k):
        out = self.one()
        base = a
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def one(self):
        return self.reduce(self.P.order.to_coords_int(self.P.order.K.one()))

    def zero(self):
        return tuple(0 for _ in range(self.f))

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def is_zero(self, a):
        return not any(a)

    def inv(self, a):
        return self.powq(a, self.q - 2)

    def cube_class(self, a):
        """0 if a is a cube in F_q; else 1 or 2 (consistent labelling)."""
        assert not self.is_zero(a)
        if self.q % 3 != 1:
            return 0
        chi = self.powq(a, (self.q - 1) // 3)
        if chi == self.one():
            return 0
        zeta = self._zeta3()
        if chi == zeta:
            return 1
        return 2

    def _zeta3(self):
        if not hasattr(self, "_z3"):
            rng = random.Random(11)
            n = self.P.order.K.n
            while True:
                coords = [rng.randrange(self.p) for _ in range(self.f)]
                a = tuple(coords)
                if self.is_zero(a):
                    continue
                z = self.powq(a, (self.q - 1) // 3)
                if z != self.one():
                    self._z3 = z
                    break
        return self._z3


def prime_decomp(order, p):
    """Prime ideals of the order above p, with e and f set.

    The order must be p-maximal (full maximal order, or produced by
    maximal_order(primes=[..., p, ...])); polydisc-squarefree p is fine too.
    """
    K = order.K
    d = int(polys.discriminant(K.f))
    if d % (p * p) != 0:
        return _dedekind_decomp(order, p)
    if not order.is_p_maximal(p):
        raise ValueError("order is not known to be %d-maximal" % p)
    if order.index % p != 0:
        return _dedekind_decomp(order, p)
    return _buchmann_lenstra(order, p)


def _dedekind_decomp(order, p):
    K = order.K
    n = K.n
    lc, facs = polys.factor_mod_p(K.f, p)
    out = []
    for g, e in facs:
        # P = pO + g(theta)O
        gt = K._eval_poly([Fraction(c) for c in g], K.gen())
        rows = [[p if i == j else 0 for j in range(n)] for i in range(n)]
        base = order.to_coords_int(gt)
        for i in range(n):
            ei = [0] * n
            ei[i] = 1
            rows.append(order.mul_coords(base, ei))
        P = PrimeIdeal(order, rows, p, polys.deg(g))
        P.e = e
        out.append(P)
    assert sum(P.e * P.f for P in out) == n
    return out


def _buchmann_lenstra(order, p):
    K = order.K
    n = K.n
    from .field import _p_radical_modp
    rad = _p_radical_modp(order, p)
    # A = (O/pO)/rad; basis: complement of rad span
    span, _ = fp_rref([[int(x) % p for x in row] for row in rad], p)
    pivcols = [next(i for i in range(n) if row[i]) for row in span]
    free = [j for j in range(n) if j not in pivcols]

    def proj(coords):
        v = [x % p for x in coords]
        for row in span:
            c = next(i for i in range(n) if row[i])
            if v[c]:
                fmul = v[c]
                v = [(a - fmul * b) % p for a, b in zip(v, row)]
        return tuple(v[j] for j in free)

    def lift(avec):
        v = [0] * n
        for val, j in zip(avec, free):
            v[j] = int(val)
        return v

    dim = len(free)
    one = proj(order.to_coords_int(K.one()))

    def amul(a, b):
        return proj(order.mul_coords(lift(a), lift(b)))

    # split the etale algebra A into fields by random minimal polynomials
    components = [[tuple(1 if i == j else 0 for i in range(dim)) for j in range(dim)]]
    # component = list of A-basis vectors; start with full algebra
    fields = []
    rng = random.Random(1729 + p)

    def component_minpoly(basis, ident, a):
        # minimal polynomial of a over F_p within span(basis); ident is the
        # identity of the component (not of the whole algebra)
        mat = [list(b) for b in basis]
        red, piv = fp_rref(mat, p)

        def in_coords(v):
            # represent v in terms of red basis (assumed to lie in span)
            vv = list(v)
            coeffs = [0] * len(red)
            for idx, row in enumerate(red):
                c = next(i for i in range(dim) if row[i])
                if vv[c]:
                    fm = vv[c]
                    coeffs[idx] = fm
                    vv = [(x - fm * y) % p for x, y in zip(vv, row)]
            assert not any(vv)
            return coeffs

        powers = [ident]
        while True:
            rows = [in_coords(v) for v in powers]
            newrow = in_coords(amul(powers[-1], a))
            ker2 = fp_kernel(rows + [newrow], p)
            dep = None
            for v in ker2:
                if v[-1] % p:
                    dep = v
                    break
            if dep is not None:
                inv = pow(dep[-1], -1, p)
                # sum dep_i a^i = 0  =>  a^k + sum (dep_i/dep_k) a^i = 0
                coeffs = [(c * inv) % p for c in dep[:-1]]
                return coeffs + [1]  # monic, low-first
            powers.append(amul(powers[-1], a))

    work = [ [tuple(1 if i == j else 0 for i in range(dim)) for j in range(dim)] ]
    # refine: maintain list of subalgebras (bases); each has its own identity
    # we track (basis, identity)
    work = [([tuple(1 if i == j else 0 for i in range(dim)) for j in range(dim)], one)]
    maxtries = 200
    while work:
        basis, ident = work.pop()
        d = len(basis)
        if d == 1:
            fields.append((basis, ident))
            continue
        split_done = False
        for _try in range(maxtries):
            a = ident
            # random element of the component
            coeffs = [rng.randrange(p) for _ in range(d)]
            a = tuple(sum(c * b[i] for c, b in zip(coeffs, basis)) % p for i in range(dim))
            m = component_minpoly(basis, ident, a)
            lcm, facs = polys.factor_mod_p(m, p)
            if len(facs) == 1 and facs[0][1] == 1 and polys.deg(facs[0][0]) == d:
                fields.append((basis, ident))
                split_done = True
                break
            if len(facs) == 1:
                continue  # try another element
            # split via idempotents
            for g, _e in facs:
                h = m
                # h = m / g
                q, r = polys._pdivmod_p(m, g, p)
                assert not r
                # u*g + v*h = 1 mod p -> idempotent = (v*h)(a)
                u, v = polys._xgcd_mod(g, q, p)
                vh = polys.pmul_mod(v, q, p)
                idem = _eval_in_algebra(vh, a, amul, ident, p)
                # new component: idem * basis, then row-reduce
                newbasis_raw = [amul(idem, b) for b in basis]
                red, piv = fp_rref([list(x) for x in newbasis_raw], p)
                newbasis = [tuple(row) for row in red]
                newident = idem
                work.append((newbasis, newident))
            split_done = True
            break
        assert split_done, "failed to split etale algebra"
    # build prime ideals
    out = []
    for basis, ident in fields:
        f = len(basis)
        # P = ker(O -> component): x with proj(x)*ident = 0 in component
        rows = [[p if i == j else 0 for j in range(n)] for i in range(n)]
        rows += [[int(x) for x in r] for r in rad]
        # kernel of multiplication-by-ident on A restricted... P = preimage of
        # the ideal of A annihilating the component: x in O with proj(x)*ident = 0
        cond = []
        for i in range(n):
            e = [0] * n
            e[i] = 1
            img = amul(proj(e), ident)
            cond.append(list(img))
        ker = fp_kernel(cond, p)
        rows += [[int(x) for x in v] for v in ker]
        P = PrimeIdeal(order, rows, p, f)
        out.append(P)
    # set ramification indices via the valuation of p
    for P in out:
        tau = P.anti_uniformizer()
        v = 0
        cur = order.to_coords_int(order.K.from_rational(p))
        while True:
            nxt = order.mul_coords(cur, tau)
            if all(c % p == 0 for c in nxt):
                cur = [c // p for c in nxt]
                v += 1
            else:
                break
        P.e = v
    assert sum(P.e * P.f for P in out) == n, [(P.e, P.f) for P in out]
    return out


def _eval_in_algebra(poly, a, amul, one, p):
    out = None
    for c in reversed(poly):
        if out is None:
            out = tuple((c * x) % p for x in one)
        else:
            out = amul(out, a)
            out = tuple((y + c * x) % p for y, x in zip(out, one))
    return out


def prime_decomp_all(order, primes):
    out = {}
    for p in primes:
        out[p] = prime_decomp(order, p)
    return out
