"""The embedded arithmetic backend: executes protocol requests in-process.

This is the reference implementation of the backend protocol.  An external
process speaking the same line protocol can replace it without touching any
caller (see worker.py for the stock subprocess realization).
"""

from fractions import Fraction

import sympy

from ..nf import polys
from ..nf.bnfsmall import ClassUnitEngine, factor_degrees
from ..nf.field import NumberField
from ..nf.ideals import prime_decomp
from ..nf.localunits import completion_minpoly
from ..nf.sgroup import k_selmer_generators
from . import schema


class BackendError(Exception):
    pass


_BNF_CACHE = {}


def _field(req_field):
    f = [int(c) for c in req_field]
    return NumberField(f)


def _bnf_for(field_coeffs, S, mode, seed):
    key = (tuple(int(c) for c in field_coeffs), tuple(sorted(set(map(int, S)))),
           mode, int(seed))
    if key not in _BNF_CACHE:
        K = NumberField(list(key[0]))
        eng = ClassUnitEngine(K, mode=mode, seed=seed, extra_primes=list(key[1]))
        _BNF_CACHE[key] = eng.compute()
    return _BNF_CACHE[key]


def handle(req):
    op = req["op"]
    if req.get("schema") != schema.SCHEMA_VERSION:
        raise BackendError("unsupported schema version %r" % req.get("schema"))
    if op == "factor_polynomial":
        return _factor_polynomial(req)
    if op == "s_class_group":
        return _s_class_group(req)
    if op == "s_units":
        return _s_units(req)
    if op == "padic_splitting":
        return _padic_splitting(req)
    if op == "field_selmer_gens":
        return _field_selmer_gens(req)
    raise BackendError("unknown op %r" % op)


def _factor_polynomial(req):
    poly = [Fraction(str(c)) for c in req["poly"]]
    base = req.get("base", "QQ")
    if not any(poly):
        raise BackendError("zero polynomial")
    if base == "QQ":
        cont, facs = polys.factor_q(poly)
        return {
            "schema": schema.SCHEMA_VERSION,
            "content": schema.encode_rational(cont),
            "factors": [[[str(c) for c in g], m] for g, m in facs],
        }
    # factor over a number field via sympy's algebraic factorization
    K = _field(base)
    t = sympy.Symbol("t")
    x = sympy.Symbol("x")
    ext = sympy.rootof(sympy.Poly(list(reversed(K.f)), t).as_expr(), 0) if False else None
    alpha = sympy.AlgebraicNumber(sympy.Poly(list(reversed(K.f)), t))
    coeffs = [schema.decode_rational(str(c)) if not isinstance(c, (list, tuple)) else c
              for c in req["poly"]]
    # coefficients may be field elements (lists) or rationals
    theta = alpha.as_expr()
    expr = 0
    for i, c in enumerate(req["poly"]):
        if isinstance(c, (list, tuple)):
            cc = sum(sympy.Rational(str(v)) * theta ** j for j, v in enumerate(c))
        else:
            cc = sympy.Rational(str(c))
        expr += cc * x ** i
    P = sympy.Poly(expr, x, extension=alpha)
    cont, facs = P.factor_list()
    out = []
    for g, m in facs:
        gc = []
        for c in reversed(g.all_coeffs()):
            vec = sympy.Poly(sympy.expand(c), theta).all_coeffs() if c.has(theta) else [c]
            vec = list(reversed(vec))
            gc.append([str(sympy.Rational(v)) for v in vec])
        out.append([gc, m])
    return {"schema": schema.SCHEMA_VERSION, "factors_ext": out}


def _s_class_group(req):
    bnf = _bnf_for(req["field"], req["S"], req.get("mode", "heuristic"), req.get("seed", 0))
    sset = sorted(set(map(int, req["S"])))
    # S-class group = Cl / <classes of primes above S>
    from ..linalg import snf_with_transform
    nfb = len(bnf.fb)
    sidx = [i for i, P in enumerate(bnf.fb) if P.p in sset]
    M = [r[:] for r in bnf.lattice.rows] + [[1 if j == i else 0 for j in range(nfb)]
                                            for i in sidx]
    D, _U, _V = snf_with_transform(M)
    inv = [D[i][i] for i in range(min(len(D), nfb)) if D[i][i] > 1]
    return {
        "schema": schema.SCHEMA_VERSION,
        "mode": bnf.mode,
        "class_invariants": [int(x) for x in bnf.invariants],
        "s_class_invariants": [int(x) for x in inv],
        "class_generator_primes": [[int(P.p), int(P.f)] for P in bnf.fb],
        "h": int(bnf.h),
        "regulator": repr(bnf.regulator),
    }


def _s_units(req):
    bnf = _bnf_for(req["field"], req["S"], req.get("mode", "heuristic"), req.get("seed", 0))
    K = bnf.K
    zeta, w = bnf.torsion
    units = bnf.unit_basis() if K.n > 1 else []
    gens, sp = k_selmer_generators(bnf, sorted(set(map(int, req["S"]))))
    # the S-unit part: torsion, fundamental units, and the P^{h_P} generators
    sunit_gens = []
    for g in gens:
        sunit_gens.append(schema.encode_factored(g.parts))
    return {
        "schema": schema.SCHEMA_VERSION,
        "mode": bnf.mode,
        "torsion_unit": schema.encode_element(zeta),
        "torsion_order": int(w),
        "fundamental_units": [schema.encode_factored(u.parts) for u in units],
        "selmer_gens": sunit_gens,
        "s_primes": [[int(P.p), int(P.e), int(P.f)] for P in sp],
    }


def _field_selmer_gens(req):
    return _s_units(req)


def _padic_splitting(req):
    K = _field(req["field"])
    v = int(req["prime"])
    prec = int(req.get("precision", 8))
    if K.n == 1:
        return {"schema": schema.SCHEMA_VERSION, "prime": v, "precision": prec,
                "factors": [[1, 1, ["0", "1"]]]}
    order = K.maximal_order(primes=[v])
    dec = prime_decomp(order, v)
    out = []
    for P in dec:
        others = [Q for Q in dec if Q is not P]
        cp, d = completion_minpoly(P, others, prec)
        out.append([int(P.e), int(P.f), [str(c) for c in cp]])
    assert sum(e * f for e, f, _ in out) == K.n
    return {"schema": schema.SCHEMA_VERSION, "prime": v, "precision": prec,
            "factors": out}
