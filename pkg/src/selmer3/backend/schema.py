"""Request/response records for the arithmetic backend.

Requests and responses are JSON objects with a schema version; the canonical
serialization (sorted keys, compact separators) is hashed to key the cache.
Numbers that can exceed float range travel as decimal strings; field elements
as lists of "num/den" strings in power-basis coordinates.
"""

import hashlib
import json
from fractions import Fraction

SCHEMA_VERSION = 1

OPS = (
    "factor_polynomial",
    "s_class_group",
    "s_units",
    "padic_splitting",
    "field_selmer_gens",
)


def canonical(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def request_key(req):
    return hashlib.sha256(canonical(req).encode()).hexdigest()


def make_request(op, **params):
    assert op in OPS, op
    req = {"schema": SCHEMA_VERSION, "op": op}
    req.update(params)
    return req


def encode_rational(x):
    x = Fraction(x)
    return "%d/%d" % (x.numerator, x.denominator) if x.denominator != 1 else str(x.numerator)


def decode_rational(s):
    return Fraction(s)


def encode_element(el):
    return [encode_rational(c) for c in el]


def decode_element(lst):
    return tuple(Fraction(str(c)) for c in lst)


def encode_factored(fe):
    return [[encode_element(x), int(e)] for x, e in fe]


def decode_factored(lst):
    return [(decode_element(x), int(e)) for x, e in lst]
