"""JSON Schema for every CLI report, plus the CSV header of each subcommand."""

from __future__ import annotations

RATIONAL = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}
# bare number, or the strings used for infinities
REAL = {"anyOf": [{"type": "number"}, {"enum": ["inf", "-inf"]}]}
PROB = {"type": "string", "minLength": 1}
N = {"type": "integer", "minimum": 1}
PREC = {"type": "integer", "minimum": 2}

PER_SIZE = {"type": "object", "patternProperties": {r"^[1-9]\d*$": RATIONAL}, "additionalProperties": False}


def _obj(props: dict, optional: tuple = ()) -> dict:
    return {
        "type": "object",
        "properties": props,
        "required": [k for k in props if k not in optional],
        "additionalProperties": False,
    }


RATIONAL_REPORT = _obj({"n": N, "p": PROB, "r": {"type": "integer", "minimum": 2}, "total": RATIONAL, "per_size": PER_SIZE}, optional=("r",))

JSON_SCHEMAS = {
    "exact": {
        "oneOf": [
            RATIONAL_REPORT,
            _obj(
                {
                    "n": N,
                    "p": PROB,
                    "precision_bits": PREC,
                    "log_total": REAL,
                    "argmax_k": N,
                    "sandwich_lower": REAL,
                    "sandwich_upper": REAL,
                }
            ),
        ]
    },
    "profile": _obj(
        {
            "n": N,
            "p": PROB,
            "precision_bits": PREC,
            "argmax_k": N,
            "log_total": REAL,
            "log_terms": {"type": "array", "items": REAL, "minItems": 1},
        }
    ),
    "argmax": _obj({"n": N, "p": PROB, "precision_bits": PREC, "argmax_k": N, "log_term": REAL}),
    "asymptote": _obj(
        {
            "n": N,
            "p": PROB,
            "precision_bits": PREC,
            "points": {
                "type": "array",
                "minItems": 1,
                "items": _obj({k: REAL for k in ("x", "f", "g", "a", "b", "h")}),
            },
        }
    ),
    "stationary": _obj(
        {
            "n": N,
            "p": PROB,
            "precision_bits": PREC,
            "x_tilde": REAL,
            "h_prime": REAL,
            "h_second": REAL,
            "h_max": {"anyOf": [REAL, {"type": "null"}]},
            "markov_threshold_log": REAL,
        }
    ),
    "residual-sweep": _obj(
        {
            "precision_bits": PREC,
            "rows": {"type": "array", "items": _obj({"n": N, "p": PROB, "log_total": REAL, "residual": REAL})},
        }
    ),
    "simulate": _obj(
        {
            "n": N,
            "p": PROB,
            "r": {"type": "integer", "minimum": 2},
            "trials": N,
            "master_seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
            "mean": {"type": "number", "minimum": 0},
            "stderr": {"type": "number", "minimum": 0},
            "expected": {"type": "number", "minimum": 0},
        }
    ),
    "oracle": RATIONAL_REPORT,
    "hyper": {
        "oneOf": [
            RATIONAL_REPORT,
            _obj(
                {
                    "n": N,
                    "r": {"type": "integer", "minimum": 2},
                    "p": PROB,
                    "precision_bits": PREC,
                    "log_total": REAL,
                    "lower_k": {"type": "integer", "minimum": 0},
                    "lower_term_log": {"anyOf": [REAL, {"type": "null"}]},
                }
            ),
        ]
    },
    "conjecture": _obj(
        {
            "precision_bits": PREC,
            "constant": {"type": "number"},
            "rows": {
                "type": "array",
                "items": _obj({"n": N, "r": {"type": "integer"}, "p": PROB, "log_total": REAL, "exponent": REAL, "gap": REAL}),
            },
        }
    ),
}

CSV_HEADERS = {
    "exact": ("n,p,precision_bits,log_total,argmax_k,sandwich_lower,sandwich_upper", "k,expected"),
    "profile": ("k,log_term",),
    "argmax": ("n,p,precision_bits,argmax_k,log_term",),
    "asymptote": ("x,f,g,a,b,h",),
    "stationary": ("n,p,precision_bits,x_tilde,h_prime,h_second,h_max,markov_threshold_log",),
    "residual-sweep": ("n,p,log_total,residual",),
    "simulate": ("n,p,r,trials,master_seed,mean,stderr,expected",),
    "oracle": ("k,expected",),
    "hyper": ("n,r,p,precision_bits,log_total,lower_k,lower_term_log", "k,expected"),
    "conjecture": ("n,r,p,log_total,exponent,gap",),
}
