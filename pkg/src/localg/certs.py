"""Machine-checkable witness records.

A certificate packages the inputs of a verdict together with the vectors
that witness it, so an independent checker can reproduce the verdict with
nothing more than relation membership and subspace membership tests.  The
replay logic deliberately avoids the code paths that produced the verdict.
"""

from __future__ import annotations

from typing import Optional

from .fields import Field
from .linalg import Subspace, vadd, vec
from .core import LocalitySpace

SEARCH_ORDER_VERSION = "lex-v1"

SCHEMA = 1

KINDS = (
    "not_compatible",
    "not_locality_quotient",
    "no_strong_complement",
    "compatible_witness_table",
    "conjecture_counterexample",
)


class Certificate:
    def __init__(self, kind: str, space_doc: dict, data: dict):
        if kind not in KINDS:
            raise ValueError(f"unknown certificate kind {kind!r}")
        self.kind = kind
        self.space_doc = space_doc
        self.data = data

    def to_json(self) -> dict:
        return {
            "localg_schema": SCHEMA,
            "certificate": self.kind,
            "search_order": SEARCH_ORDER_VERSION,
            "space": self.space_doc,
            "data": self.data,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Certificate":
        return cls(doc["certificate"], doc["space"], doc["data"])

    def replay(self) -> bool:
        space = LocalitySpace.from_json(self.space_doc)
        fn = _REPLAYERS[self.kind]
        return fn(space, self.data)


def _parse_vec(field: Field, doc) -> tuple:
    return vec(field, doc)


def _parse_sub(space: LocalitySpace, doc) -> Subspace:
    return Subspace.span(space.field, space.dim, doc)


def _no_shift_works(space: LocalitySpace, w_sub: Subspace, x, y, z) -> bool:
    """Exhaustive check that no shift of x inside the subspace fixes both pairs."""
    F = space.field
    if F.p == 0:
        raise ValueError("exhaustive shift replay needs a finite field")
    for w2 in w_sub.vectors():
        cand = vadd(F, x, w2)
        if space.related(cand, y) and space.related(cand, z):
            return False
    return True


def _replay_not_compatible(space: LocalitySpace, data: dict) -> bool:
    F = space.field
    w_sub = _parse_sub(space, data["w_subspace"])
    x = _parse_vec(F, data["x"])
    y = _parse_vec(F, data["y"])
    z = _parse_vec(F, data["z"])
    w = _parse_vec(F, data["w"])
    if not w_sub.contains(w):
        return False
    if not space.related(x, y):
        return False
    if not space.related(vadd(F, x, w), z):
        return False
    if F.p:
        return _no_shift_works(space, w_sub, x, y, z)
    # over the rationals the record carries the exact refutation: an
    # inconsistent linear system is re-derived by the quotients module
    from .quotients import no_correction_exists

    return no_correction_exists(space, w_sub, x, y, z)


def _replay_not_locality_quotient(space: LocalitySpace, data: dict) -> bool:
    F = space.field
    if F.p == 0:
        raise ValueError("quotient replay needs a finite field")
    w_sub = _parse_sub(space, data["w_subspace"])
    v1 = _parse_vec(F, data["v1"])
    v2 = _parse_vec(F, data["v2"])
    v3 = _parse_vec(F, data["v3"])

    def class_related(a, b) -> bool:
        for w1 in w_sub.vectors():
            for w2 in w_sub.vectors():
                if space.related(vadd(F, a, w1), vadd(F, b, w2)):
                    return True
        return False

    return (
        class_related(v1, v2)
        and class_related(v1, v3)
        and not class_related(v1, vadd(F, v2, v3))
    )


def _replay_no_strong_complement(space: LocalitySpace, data: dict) -> bool:
    from .quotients import strong_complement

    w_sub = _parse_sub(space, data["w_subspace"])
    res = strong_complement(space, w_sub)
    return res.status == "none"


def _replay_compatible_witness_table(space: LocalitySpace, data: dict) -> bool:
    F = space.field
    w_sub = _parse_sub(space, data["w_subspace"])
    for entry in data["entries"]:
        x = _parse_vec(F, entry["x"])
        y = _parse_vec(F, entry["y"])
        z = _parse_vec(F, entry["z"])
        wp = _parse_vec(F, entry["w_prime"])
        if not w_sub.contains(wp):
            return False
        cand = vadd(F, x, wp)
        if not (space.related(cand, y) and space.related(cand, z)):
            return False
    return True


def _replay_conjecture_counterexample(space: LocalitySpace, data: dict) -> bool:
    from .conjlab import replay_counterexample

    return replay_counterexample(space, data)


_REPLAYERS = {
    "not_compatible": _replay_not_compatible,
    "not_locality_quotient": _replay_not_locality_quotient,
    "no_strong_complement": _replay_no_strong_complement,
    "compatible_witness_table": _replay_compatible_witness_table,
    "conjecture_counterexample": _replay_conjecture_counterexample,
}
