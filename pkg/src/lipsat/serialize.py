"""JSON encoding of polynomials, certificates and witnesses.

Rationals are written as {"num": "...", "den": "..."} so no precision is
lost; certificates decode back to objects that ``verify_certificate``
re-checks.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any, Dict

from .arcs import AtLeastTruncation, Series
from .closure import (
    ArcWitness,
    DeclaredWitness,
    IntegralCertificate,
    IntegralityRelation,
    PointWitness,
)
from .ideal import ReductionTrace
from .poly import GREVLEX, Polynomial, format_poly


def rational(q) -> Dict[str, str]:
    q = Fraction(q)
    return {"num": str(q.numerator), "den": str(q.denominator)}


def from_rational(d) -> Fraction:
    return Fraction(int(d["num"]), int(d["den"]))


def poly_to_json(p: Polynomial) -> Dict[str, Any]:
    return {
        "variables": list(p.gens),
        "terms": [{"exponents": list(e), "coefficient": rational(c)} for e, c in p.sorted_terms(GREVLEX)],
        "text": format_poly(p),
    }


def poly_from_json(d) -> Polynomial:
    gens = tuple(d["variables"])
    return Polynomial(gens, {tuple(t["exponents"]): from_rational(t["coefficient"]) for t in d["terms"]})


def series_to_json(s: Series) -> Dict[str, Any]:
    return {"coefficients": {str(k): rational(v) for k, v in sorted(s.coeffs.items())}, "trunc": s.trunc}


def _order(v):
    if isinstance(v, AtLeastTruncation):
        return {"at_least": v.bound}
    if v == math.inf:
        return "inf"
    return int(v)


def certificate_to_json(cert, z: Polynomial = None, generators=(), ambient=None) -> Dict[str, Any]:
    if isinstance(cert, IntegralCertificate):
        out = {
            "kind": "integral-closure",
            "n": cert.n,
            "coefficients": [
                [{"cofactor": poly_to_json(c), "indices": list(idx)} for c, idx in combo] for combo in cert.combos
            ],
        }
        if z is not None:
            out["target"] = poly_to_json(z)
            out["generators"] = [poly_to_json(g) for g in generators]
            out["ambient"] = [poly_to_json(g) for g in (ambient or ())]
        return out
    if isinstance(cert, IntegralityRelation):
        return {"kind": "integrality", "n": cert.n, "coefficients": [poly_to_json(c) for c in cert.coefficients]}
    if isinstance(cert, ReductionTrace):
        cof = cert.generator_cofactors if cert.generator_cofactors is not None else cert.cofactors
        return {"kind": "reduction", "member": cert.member, "cofactors": [poly_to_json(c) for c in cof]}
    if isinstance(cert, tuple):
        return {"kind": "combined", "parts": [certificate_to_json(c) for c in cert]}
    # IntegralDependence lives in saturation; duck-typed to avoid an import cycle
    if hasattr(cert, "coefficients") and hasattr(cert, "n"):
        return {"kind": "integral-dependence", "n": cert.n,
                "coefficients": [poly_to_json(c) for c in cert.coefficients]}
    raise TypeError(f"cannot serialize certificate {type(cert).__name__}")


def certificate_from_json(d) -> IntegralCertificate:
    if d.get("kind") != "integral-closure":
        raise ValueError(f"not an integral-closure certificate: {d.get('kind')!r}")
    combos = tuple(
        tuple((poly_from_json(t["cofactor"]), tuple(t["indices"])) for t in combo) for combo in d["coefficients"]
    )
    return IntegralCertificate(int(d["n"]), combos)


def witness_to_json(w) -> Dict[str, Any]:
    if isinstance(w, ArcWitness):
        return {
            "kind": "arc",
            "label": w.arc.label,
            "components": [series_to_json(s) for s in w.arc.components],
            "target_order": _order(w.target_order),
            "ideal_order": _order(w.ideal_order),
            "ideal_order_is_bound": w.ideal_order_is_bound,
        }
    if isinstance(w, PointWitness):
        return {
            "kind": "point",
            "point": [rational(v) for v in w.point],
            "generator_values": [rational(v) for v in w.generator_values],
            "target_value": rational(w.target_value),
        }
    if isinstance(w, DeclaredWitness):
        return {"kind": "declared", "reason": w.reason}
    if hasattr(w, "target") and hasattr(w, "point"):  # RadicalWitness
        out = {"kind": "radical", "target": poly_to_json(w.target)}
        if w.point is not None:
            out["point"] = witness_to_json(w.point)
        return out
    raise TypeError(f"cannot serialize witness {type(w).__name__}")
