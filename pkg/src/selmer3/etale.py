"""Etale Q-algebras (products of number fields): elements, norms, the
unramified-outside-S subgroup of F^x/Q^x F^x3, and discrete logs.

Group elements are carried in factored form per factor (products of small
field elements with exponents); explicit representatives are expanded on
demand with exponents reduced mod 3, which changes nothing modulo cubes and
keeps coefficients tame even when fundamental units are astronomically large.

Independence and membership use character vectors: full local cube dlogs at
the S-primes plus residue characters at auxiliary split primes, with exact
cube-test verification behind every accepted discrete log.
"""

import hashlib
import random
from fractions import Fraction

import sympy

from .backend import schema
from .backend.gateway import default_gateway
from .linalg import fp_kernel, fp_rref, fp_solve
from .nf import polys
from .nf.field import NumberField
from .nf.ideals import prime_decomp
from .nf.localunits import LocalCubeGroup
from .nf.roots import cube_roots, field_roots, is_cube


class EtaleAlgebra:
    """Ordered product of number fields."""

    def __init__(self, factors):
        self.factors = list(factors)
        self.degree = sum(K.n for K in factors)
        self._localgroups = {}
        self._sprimes = {}

    @staticmethod
    def from_polys(defining, gateway=None, monicize=True):
        """Build from a list of rational polynomials; reducible inputs are
        split automatically (and the split recorded on the instance)."""
        gw = gateway or default_gateway()
        factors = []
        split_log = []
        for f in defining:
            f = [Fraction(c) for c in f]
            g, scale = polys.make_monic_integral(f)
            resp = gw.factor_polynomial(g)
            for fac, m in resp["factors"]:
                fac = [int(c) for c in fac]
                if m != 1:
                    raise ValueError("defining polynomial not squarefree")
                if fac[-1] != 1:
                    fac2, _ = polys.make_monic_integral([Fraction(c) for c in fac])
                    fac = fac2
                factors.append(NumberField(fac))
                if len(resp["factors"]) > 1:
                    split_log.append((tuple(int(c) for c in g), tuple(fac)))
        A = EtaleAlgebra(factors)
        A.split_log = split_log
        return A

    def __repr__(self):
        return "EtaleAlgebra(deg %d = %s)" % (self.degree, "+".join(str(K.n) for K in self.factors))

    def one(self):
        return AlgebraElement(self, [K.one() for K in self.factors])

    def zero(self):
        return AlgebraElement(self, [K.zero() for K in self.factors])

    def from_rational(self, q):
        return AlgebraElement(self, [K.from_rational(q) for K in self.factors])

    def element(self, comps):
        return AlgebraElement(self, [K.el(c) if not isinstance(c, tuple) else c
                                     for K, c in zip(self.factors, comps)])

    def s_prime_data(self, v):
        """[(factor index, PrimeIdeal, others)] for the primes above v."""
        if v not in self._sprimes:
            out = []
            for i, K in enumerate(self.factors):
                order = K.maximal_order(primes=[v]) if K.n > 1 else K.maximal_order()
                dec = prime_decomp(order, v)
                for P in dec:
                    out.append((i, P, [Q for Q in dec if Q is not P]))
            self._sprimes[v] = out
        return self._sprimes[v]

    def local_group(self, i, P, others):
        key = (i, P.p, tuple(map(tuple, P.M)))
        if key not in self._localgroups:
            self._localgroups[key] = LocalCubeGroup(P, others)
        return self._localgroups[key]

    def serial(self):
        return [[int(c) for c in K.f] for K in self.factors]


class AlgebraElement:
    """Explicit element: one field element per factor."""

    __slots__ = ("parent", "comps")

    def __init__(self, parent, comps):
        self.parent = parent
        self.comps = tuple(comps)

    def __eq__(self, other):
        return isinstance(other, AlgebraElement) and self.comps == other.comps

    def __hash__(self):
        return hash(self.comps)

    def __repr__(self):
        return "AlgebraElement(%s)" % (list(self.comps),)

    def mul(self, other):
        A = self.parent
        return AlgebraElement(A, [K.mul(a, b) for K, a, b in
                                  zip(A.factors, self.comps, other.comps)])

    def div(self, other):
        A = self.parent
        return AlgebraElement(A, [K.div(a, b) for K, a, b in
                                  zip(A.factors, self.comps, other.comps)])

    def pow(self, k):
        A = self.parent
        return AlgebraElement(A, [K.pow(a, k) for K, a in zip(A.factors, self.comps)])

    def is_unit(self):
        return all(not K.is_zero(c) for K, c in zip(self.parent.factors, self.comps))

    def norm(self):
        out = Fraction(1)
        for K, c in zip(self.parent.factors, self.comps):
            out *= K.norm(c)
        return out

    def serial(self):
        return [schema.encode_element(c) for c in self.comps]


class KummerRep:
    """A class in F^x/(cubes): factored per-factor parts."""

    def __init__(self, algebra, parts):
        # parts: dict factor_index -> list[(power-coord tuple, exponent)]
        self.algebra = algebra
        self.parts = {i: [(tuple(x), int(e)) for x, e in lst if e % 3]
                      for i, lst in parts.items()}
        self.parts = {i: lst for i, lst in self.parts.items() if lst}

    @staticmethod
    def from_element(a):
        parts = {}
        for i, (K, c) in enumerate(zip(a.parent.factors, a.comps)):
            if c != K.one():
                parts[i] = [(c, 1)]
        return KummerRep(a.parent, parts)

    def mul(self, other):
        parts = {}
        for i, lst in self.parts.items():
            parts.setdefault(i, []).extend(lst)
        for i, lst in other.parts.items():
            parts.setdefault(i, []).extend(lst)
        return KummerRep(self.algebra, parts)

    def pow(self, k):
        return KummerRep(self.algebra, {i: [(x, e * k) for x, e in lst]
                                        for i, lst in self.parts.items()})

    def component_factored(self, i):
        return self.parts.get(i, [])

    def expand(self):
        """Explicit representative (exponents mod 3), with rational cube
        content removed and denominators cleared (cube-preserving)."""
        A = self.algebra
        comps = []
        for i, K in enumerate(A.factors):
            c = K.one()
            for x, e in self.parts.get(i, []):
                c = K.mul(c, K.pow(K.el(x), e % 3))
            comps.append(c)
        el = AlgebraElement(A, comps)
        return _strip_rational_cubes(el)

    def valuation(self, i, P):
        v = 0
        for x, e in self.parts.get(i, []):
            v += e * P.valuation_element(self.algebra.factors[i].el(x))
        return v

    def local_dlog(self, v):
        """Concatenated local cube dlog over the primes above v."""
        A = self.algebra
        out = []
        for i, P, others in A.s_prime_data(v):
            G = A.local_group(i, P, others)
            vec = [0] * len(G.labels)
            for x, e in self.parts.get(i, []):
                K = A.factors[i]
                order = P.order
                el = K.el(x)
                den = 1
                for t in el:
                    den = den * Fraction(t).denominator // _gcd(den, Fraction(t).denominator)
                d = list(G.dlog(order.to_coords_int(K.scal(den, el))))
                if den != 1:
                    dden = G.dlog(order.to_coords_int(K.from_rational(den)))
                    d = [a - b for a, b in zip(d, dden)]
                vec = [(a + e * b) % 3 for a, b in zip(vec, d)]
            out.extend(vec)
        return out

    def serial(self):
        return {str(i): schema.encode_factored(lst) for i, lst in sorted(self.parts.items())}


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _strip_rational_cubes(el):
    """Divide out rational cube content and clear denominators (mod cubes)."""
    A = el.parent
    comps = []
    for K, c in zip(A.factors, el.comps):
        den = 1
        for x in c:
            den = den * Fraction(x).denominator // _gcd(den, Fraction(x).denominator)
        # multiply by den^3 to clear denominators (a cube)
        c = K.scal(den ** 3, c) if den != 1 else c
        # strip small cube content (best effort; exactness not required)
        cont = 0
        for x in c:
            cont = _gcd(cont, abs(Fraction(x).numerator))
        if cont > 1:
            cub = 1
            m = cont
            d = 2
            while d * d * d <= m and d < 100000:
                while m % (d ** 3) == 0:
                    cub *= d
                    m //= d ** 3
                d += 1
            if cub > 1:
                c = K.scal(Fraction(1, cub ** 3), c)
        comps.append(c)
    return AlgebraElement(A, comps)


def _int_cuberoot(n):
    if n <= 0:
        return 0
    r = int(round(n ** (1 / 3.0))) + 2
    while r ** 3 > n:
        r -= 1
    return r


def norm_to_base(a):
    """Norm F -> Q of a unit algebra element."""
    if isinstance(a, KummerRep):
        out = Fraction(1)
        for i, lst in a.parts.items():
            K = a.algebra.factors[i]
            for x, e in lst:
                out *= K.norm(K.el(x)) ** e
        return out
    if not a.is_unit():
        raise ValueError("norm of a non-unit")
    return a.norm()


def make_algebra(defining, gateway=None):
    return EtaleAlgebra.from_polys(defining, gateway)


class GroupPresentation:
    """F_3 presentation of the unramified-outside-S subgroup."""

    def __init__(self, algebra, S, basis, char_columns, char_matrix, diag_rows, context):
        self.algebra = algebra
        self.S = tuple(sorted(S))
        self.basis = basis              # list of KummerRep
        self.char_columns = char_columns
        self.char_matrix = char_matrix  # rows: chars of basis elements
        self.diag_rows = diag_rows      # rows: chars of rational generators
        self.basis_context = context
        self.order = 3 ** len(basis)

    def rank(self):
        return len(self.basis)

    def element_from_coords(self, coords):
        out = KummerRep(self.algebra, {})
        for c, g in zip(coords, self.basis):
            if c % 3:
                out = out.mul(g.pow(c % 3))
        return out


class NotInGroup:
    """Explicit non-membership result of discrete_log."""

    def __init__(self, reason):
        self.reason = reason

    def __repr__(self):
        return "NotInGroup(%s)" % self.reason

    def __bool__(self):
        return False


def _charvec(rep, chars, algebra):
    """Character vector of a KummerRep: local dlogs at the listed primes."""
    out = []
    for v in chars:
        out.extend(rep.local_dlog(v))
    return out


def unramified_subgroup(F, S, gateway=None, mode="heuristic", seed=0, p=3):
    """Presentation of the unramified-outside-S subgroup of F^x/Q^x F^x3."""
    assert p == 3, "only p = 3 is constructed"
    gw = gateway or default_gateway()
    S = sorted(set(int(s) for s in S))
    cand = []
    modes = set()
    for i, K in enumerate(F.factors):
        resp = gw.field_selmer_gens([int(c) for c in K.f], S, mode=mode, seed=seed)
        modes.add(resp["mode"])
        for enc in resp["selmer_gens"]:
            parts = schema.decode_factored(enc)
            cand.append(KummerRep(F, {i: parts}))
    # rational diagonal generators: the quotient kills all of Q^x, so span
    # the image with the S-primes plus small generic primes (their character
    # vectors stabilize quickly) -- see also discrete_log, which adds the
    # support primes of its argument.
    diag_primes = sorted(set(S) | {p for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)})
    diag = [_diag_rep(F, s) for s in diag_primes]
    # characters: S-primes first, then auxiliary split primes until stable
    chars = list(S)
    aux = _aux_prime_stream(F, S)
    target_stable = 3
    stable = 0
    while True:
        M = [_charvec(g, chars, F) for g in cand]
        D = [_charvec(g, chars, F) for g in diag]
        basis_idx = _independent_modulo(M, D)
        rank = len(basis_idx)
        if stable >= target_stable:
            break
        q = next(aux)
        chars.append(q)
        M2 = [_charvec(g, chars, F) for g in cand]
        D2 = [_charvec(g, chars, F) for g in diag]
        if len(_independent_modulo(M2, D2)) == rank and \
           _same_relations(M, D, M2, D2):
            stable += 1
        else:
            stable = 0
    basis = [cand[i] for i in basis_idx]
    Mb = [_charvec(g, chars, F) for g in basis]
    Db = [_charvec(g, chars, F) for g in diag]
    ctx = hashlib.sha256(schema.canonical(
        {"alg": F.serial(), "S": S, "chars": chars,
         "basis": [b.serial() for b in basis]}).encode()).hexdigest()[:16]
    pres = GroupPresentation(F, S, basis, chars, Mb, Db, ctx)
    pres.diag_primes = diag_primes
    pres.mode = "heuristic" if "heuristic" in modes else (
        "grh" if "grh" in modes else "unconditional")
    return pres


def _aux_prime_stream(F, S):
    """Split primes q = 1 mod 3 able to carry residue characters."""
    q = 5
    bad = set(S)
    while True:
        q = int(sympy.nextprime(q))
        if q in bad or q % 3 != 1:
            continue
        ok = True
        for K in F.factors:
            d = int(polys.discriminant(K.f))
            if d % q == 0:
                ok = False
                break
        if ok:
            yield q


def _independent_modulo(M, D):
    """Indices of rows of M forming an F_3-basis modulo span(D)."""
    span = [row[:] for row in D]
    red, _ = fp_rref(span, 3) if span else ([], [])
    out = []
    cur = [r[:] for r in red]
    for i, row in enumerate(M):
        v = _reduce_row(row, cur)
        if any(v):
            out.append(i)
            cur.append(v)
            cur, _ = fp_rref(cur, 3)
    return out


def _reduce_row(row, red):
    v = [x % 3 for x in row]
    for r in red:
        c = next((j for j in range(len(v)) if r[j] % 3), None)
        if c is not None and v[c]:
            f = v[c]
            v = [(a - f * b) % 3 for a, b in zip(v, r)]
    return v


def _same_relations(M, D, M2, D2):
    """Check the relation kernels did not change when adding characters."""
    big = M + D
    big2 = M2 + D2
    k1 = fp_kernel(big, 3) if big else []
    k2 = fp_kernel(big2, 3) if big2 else []
    red1, _ = fp_rref(k1, 3) if k1 else ([], [])
    red2, _ = fp_rref(k2, 3) if k2 else ([], [])
    return red1 == red2


def discrete_log(a, pres, max_extra_chars=12):
    """Coordinates of a in the presentation, or NotInGroup.

    Accepted answers are verified exactly: divide by the basis product and
    certify the quotient lies in Q^x F^x3 by per-factor cube tests."""
    F = pres.algebra
    rep = a if isinstance(a, KummerRep) else KummerRep.from_element(a)
    chars = list(pres.char_columns)
    # the diagonal span must cover the rational support of the argument
    support = set(pres.diag_primes)
    for i, lst in rep.parts.items():
        K = F.factors[i]
        for x, _e in lst:
            n = Fraction(K.norm(K.el(x)))
            for v in polys.factor_int(abs(n.numerator)):
                support.add(v)
            for v in polys.factor_int(n.denominator):
                support.add(v)
    diag_primes = sorted(support)
    diag = [_diag_rep(F, s) for s in diag_primes]
    Mb = [g.local_dlog_concat(chars) if False else _charvec(g, chars, F) for g in pres.basis]
    Db = [_charvec(g, chars, F) for g in diag]
    aux = _aux_prime_stream(F, pres.S)
    used = set(chars)
    extra = 0
    while True:
        av = _charvec(rep, chars, F)
        sol = fp_solve(Mb + Db, av, 3)
        if sol is None:
            return NotInGroup("character vector outside the group span")
        coords = [s % 3 for s in sol[:len(pres.basis)]]
        quotient = rep
        for c, g in zip(coords, pres.basis):
            if c:
                quotient = quotient.mul(g.pow(3 - c))
        if _in_rational_times_cubes(quotient):
            return tuple(coords)
        extra += 1
        if extra > max_extra_chars:
            return NotInGroup("verification failed repeatedly; class not in group")
        q = next(aux)
        while q in used:
            q = next(aux)
        used.add(q)
        chars.append(q)
        Mb = [r + g.local_dlog(q) for r, g in zip(Mb, pres.basis)]
        Db = [r + g.local_dlog(q) for r, g in zip(Db, diag)]


def _diag_rep(F, s):
    return KummerRep(F, {i: [(K.from_rational(s), 1)] for i, K in enumerate(F.factors)})


def _diag_reps(pres):
    F = pres.algebra
    return [_diag_rep(F, s) for s in pres.diag_primes]


def _in_rational_times_cubes(rep):
    """Exact test: does the class of rep lie in Q^x F^x3?

    The rational part q is pinned (mod cubes) prime by prime from the
    valuations of the expanded element, then certified with per-factor cube
    tests."""
    F = rep.algebra
    el = rep.expand()
    for K, c in zip(F.factors, el.comps):
        if K.is_zero(c):
            return False
    # support of the element: primes dividing any norm numerator/denominator
    support = set()
    norms = []
    for K, c in zip(F.factors, el.comps):
        n = Fraction(K.norm(c))
        norms.append(n)
        for v in polys.factor_int(abs(n.numerator)):
            support.add(v)
        for v in polys.factor_int(n.denominator):
            support.add(v)
    cands = [Fraction(1)]
    for v in sorted(support):
        sols = set(range(3))
        for i, K in enumerate(F.factors):
            order = K.maximal_order(primes=[v]) if K.n > 1 else K.maximal_order()
            for P in prime_decomp(order, v):
                val = P.valuation_element(el.comps[i])
                # need val - x*e_P = 0 mod 3
                local = {x for x in range(3) if (val - x * P.e) % 3 == 0}
                sols &= local
        if not sols:
            return False
        new = []
        for base in cands:
            for x in sorted(sols):
                new.append(base * Fraction(v) ** x)
        cands = new
        if len(cands) > 243:
            return False
    for q in cands:
        ok = True
        for K, c in zip(F.factors, el.comps):
            y = K.mul(c, K.from_rational(Fraction(1) / q))
            if not is_cube(K, y):
                ok = False
                break
        if ok:
            return True
    return False


def mu3_quotient_invariants(F):
    """Generators of mu_3(F) modulo diagonal constants, as AlgebraElements."""
    gens = []
    zfactors = []
    for i, K in enumerate(F.factors):
        rts = field_roots(K, [K.from_rational(1), K.from_rational(1), K.from_rational(1)])
        if rts:
            zfactors.append((i, rts[0]))
    if not zfactors:
        return []
    for i, z in zfactors:
        comps = [K.one() for K in F.factors]
        comps[i] = z
        gens.append(AlgebraElement(F, comps))
    if len(zfactors) == len(F.factors):
        # the diagonal constant is in F: quotient kills one generator
        gens = gens[:-1]
    return gens
