"""Generators of K(S,p) = {x in K*/K*^p unramified outside S} for p = 3.

Built from a BnfData: S-units (torsion, fundamental-unit classes, prime-power
generators) plus cube-witnesses for the 3-torsion of the S-class group, per
the usual exact sequence  1 -> O_{K,S}^x/(^3) -> K(S,3) -> Cl_S(K)[3] -> 1.
"""

from ..linalg import fp_rref, snf_with_transform, solve_integer
from .bnfsmall import BnfData, FactoredElement
from .ideals import prime_decomp


def s_prime_ideals(bnf, S):
    """All primes of K above the rational primes in S (from the factor base)."""
    out = []
    for p in sorted(set(S)):
        plist = [P for P in bnf.fb if P.p == p]
        if not plist:
            raise ValueError("prime %d missing from factor base; rebuild with extra_primes" % p)
        got = sorted(plist, key=lambda P: tuple(map(tuple, P.M)))
        out.extend(got)
    return out


def k_selmer_generators(bnf, S):
    """Generators of K(S,3) as FactoredElements (possibly redundant).

    Returns (gens, s_primes).  Completeness relies on the bnf mode; the
    caller records bnf.mode alongside.
    """
    K = bnf.K
    lat = bnf.lattice
    nfb = len(bnf.fb)
    sp = s_prime_ideals(bnf, S)
    sidx = [bnf.fb_index(P) for P in sp]
    gens = []

    # torsion: contributes iff 3 divides the torsion order
    zeta, w = bnf.torsion
    if w % 3 == 0:
        gens.append(FactoredElement(K, [(zeta, w // 3)]))

    # fundamental-unit classes (basis of the found unit lattice)
    gens.extend(bnf.unit_basis())

    # S-prime power generators: g with (g) = P^{h_P}, h_P = class order of P
    D0, U0, V0 = snf_with_transform([r[:] for r in lat.rows])
    diag0 = [D0[i][i] for i in range(min(len(D0), nfb))]
    for P, i in zip(sp, sidx):
        evec = [1 if j == i else 0 for j in range(nfb)]
        coords = [sum(evec[a] * V0[a][b] for a in range(nfb)) for b in range(nfb)]
        m = 1
        for t, d in enumerate(diag0):
            if d > 1:
                from math import gcd
                m = m * (d // gcd(d, coords[t])) // gcd(m, d // gcd(d, coords[t]))
        vec = [0] * nfb
        vec[i] = m
        g = bnf.principal_gen_for_vector(vec)
        assert g is not None, "S-prime power not principal at its class order"
        gens.append(g)

    # 3-torsion of Cl_S: witnesses gamma with (gamma) = A^3 * (S-part)
    M = [r[:] for r in lat.rows] + [[1 if j == i else 0 for j in range(nfb)] for i in sidx]
    D, U, V = snf_with_transform([r[:] for r in M])
    k = min(len(D), nfb)
    for t in range(k):
        d = D[t][t]
        if d > 1 and d % 3 == 0:
            # generator of the t-th cyclic factor: g with g*V = e_t
            target = [1 if j == t else 0 for j in range(nfb)]
            gvec = solve_integer([list(row) for row in zip(*V)], target)
            assert gvec is not None
            avec = [(d // 3) * x for x in gvec]
            threea = [3 * x for x in avec]
            comb = _solve_with_exprs(K, lat, sidx, threea)
            gens.append(comb)
    return gens, sp


def _solve_with_exprs(K, lat, sidx, vec):
    """Express vec over lattice rows + unit vectors at sidx; return the element
    part as a FactoredElement (the S-prime rows carry no elements)."""
    nfb = len(vec)
    rows = [r[:] for r in lat.rows] + [[1 if j == i else 0 for j in range(nfb)]
                                       for i in sidx]
    sol = solve_integer(rows, list(vec))
    assert sol is not None, "class witness not solvable; relations incomplete"
    nlat = len(lat.rows)
    comb = [0] * len(lat.elts)
    for c, e in zip(sol[:nlat], lat.exprs):
        if c:
            comb = [a + c * b for a, b in zip(comb, e)]
    return FactoredElement(K, [(lat.elts[j], comb[j])
                               for j in range(len(comb)) if comb[j]])
