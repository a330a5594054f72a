"""Python access to the shgh core (linear systems, Cremona reduction,
finite-field rank oracle, degeneration fibres)."""

import json

from . import _shgh
from ._shgh import HypothesisError, ParseError, RatioOutOfRange, ShghError, ValidationError

__all__ = [
    "ShghError", "ParseError", "HypothesisError", "RatioOutOfRange", "ValidationError",
    "system", "dim", "reduce", "oracle", "fiber", "validate", "ledger", "choose_a", "scan", "verify",
]


def _int(v):
    # the core sends integers beyond 64 bits as decimal strings
    return int(v) if isinstance(v, str) else v


def system(spec):
    """Parsed form of "d; m1, m2^k, [a,b]" with virtual and expected dimension."""
    j = json.loads(_shgh.system(spec))
    for k in ("degree", "virtual_dim", "expected_dim"):
        j[k] = _int(j[k])
    return j


def dim(spec):
    """Conjectural dimension via Cremona reduction; status PROVEN or CONJECTURAL."""
    j = json.loads(_shgh.dim(spec))
    j["dim"] = _int(j["dim"])
    return j


def reduce(spec):
    return json.loads(_shgh.reduce(spec))


def oracle(spec, p=2147483647, trials=3, seed=1, cache_dir="", frame=True):
    """Rank of the condition matrix over F_p at random points."""
    j = json.loads(_shgh.oracle(spec, p, trials, seed, cache_dir, frame))
    j["dim"], j["expected"] = _int(j["dim"]), _int(j["expected"])
    return j


def fiber(stage, d, m, a):
    """Central fibre of the given stage, with its validation report."""
    return json.loads(_shgh.fiber(stage, d, m, a))


def validate(fiber_json):
    return json.loads(_shgh.validate(json.dumps(fiber_json)))


def ledger(d, m, a=None):
    return json.loads(_shgh.ledger(d, m, a))


def choose_a(d, m):
    return json.loads(_shgh.choose_a(d, m))


def scan(lo, hi, m_max, all_pairs=False):
    return json.loads(_shgh.scan(str(lo), str(hi), m_max, all_pairs))


def verify(include_long=False, cache_dir=""):
    return json.loads(_shgh.verify(include_long, cache_dir))
