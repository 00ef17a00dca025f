"""Partial-independence ("locality") relations on exact vector spaces.

A relation marks pairs of vectors as mutually independent.  Three concrete
representations are supported:

* ``blocks``  -- a finite union of subspace pairs (A, B), symmetrized; works
  over any field and is the symbolic workhorse over the rationals.
* ``pairs``   -- an explicit finite symmetric set of vector pairs over GF(p);
  every question about it is decided by exhaustion, so answers from this
  backend are authoritative.
* ``ortho``   -- x independent of y iff x^T G y = 0 for a symmetric Gram
  matrix G.  An optional ``support`` subspace restricts where the form is
  tested (pairs with a member outside the support count as independent);
  this variant shows up as the image of an ortho relation under quotients.

Verdicts from symbolic backends are three-valued: a question that cannot be
certified either way comes back UNKNOWN instead of a guess.
"""

from __future__ import annotations

import itertools
from enum import Enum
from typing import Iterable, Iterator, Optional, Sequence

from .fields import Field
from .linalg import (
    LinMap,
    Subspace,
    all_vectors,
    is_zero_vec,
    unit_vec,
    vadd,
    vec,
    vdot,
    vscale,
    vsub,
    zero_vec,
    mat_vec,
)


class Verdict(Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    @staticmethod
    def of(b: bool) -> "Verdict":
        return Verdict.TRUE if b else Verdict.FALSE

    @property
    def is_true(self) -> bool:
        return self is Verdict.TRUE

    @property
    def is_false(self) -> bool:
        return self is Verdict.FALSE

    @property
    def is_unknown(self) -> bool:
        return self is Verdict.UNKNOWN


class NotLocalityError(ValueError):
    """An operation required a genuine locality space and got something weaker."""


class BackendUnsupported(TypeError):
    """The requested operation is not available for this relation backend."""


class UndecidedError(RuntimeError):
    """A symbolic backend could not certify an answer either way."""


MAX_ENUM = 1_000_000  # guard for exhaustive vector enumeration


def _check_vec(field: Field, dim: int, v: Sequence) -> tuple:
    v = vec(field, v)
    if len(v) != dim:
        raise ValueError(f"vector length {len(v)} != ambient dim {dim}")
    return v


# ---------------------------------------------------------------------------
# relation backends
# ---------------------------------------------------------------------------


class PairsRelation:
    """Explicit symmetric pair set over a finite field."""

    kind = "pairs"

    def __init__(self, field: Field, dim: int, pairs: Iterable[tuple]):
        if field.p == 0:
            raise BackendUnsupported("pairs relations require a finite field")
        self.field = field
        self.dim = dim
        full = set()
        z = zero_vec(field, dim)
        full.add((z, z))
        for x, y in pairs:
            x = _check_vec(field, dim, x)
            y = _check_vec(field, dim, y)
            full.add((x, y))
            full.add((y, x))
        self.pairs = frozenset(full)
        self._polar: Optional[dict] = None

    def related(self, x, y) -> bool:
        return (tuple(x), tuple(y)) in self.pairs

    def polar_map(self) -> dict:
        if self._polar is None:
            acc: dict = {}
            for x, y in self.pairs:
                acc.setdefault(x, set()).add(y)
            self._polar = {x: frozenset(s) for x, s in acc.items()}
        return self._polar

    def polar_of(self, x) -> frozenset:
        return self.polar_map().get(tuple(x), frozenset())

    def to_json(self):
        fmt = self.field.format_scalar
        items = sorted(self.pairs)
        return {
            "type": "pairs",
            "pairs": [[[fmt(c) for c in x], [fmt(c) for c in y]] for x, y in items],
        }


class BlocksRelation:
    """Finite union of subspace-pair blocks, stored symmetrized and reduced."""

    kind = "blocks"

    def __init__(self, field: Field, dim: int, blocks: Iterable[tuple]):
        self.field = field
        self.dim = dim
        sym = []
        zero = Subspace.zero(field, dim)
        for a, b in blocks:
            if not isinstance(a, Subspace):
                a = Subspace.span(field, dim, a)
            if not isinstance(b, Subspace):
                b = Subspace.span(field, dim, b)
            if a.dim != dim or b.dim != dim or a.field != field:
                raise ValueError("block subspaces must live in the ambient space")
            sym.append((a, b))
            sym.append((b, a))
        sym.append((zero, zero))
        # drop blocks dominated by another block
        reduced = []
        for i, (a, b) in enumerate(sym):
            dominated = False
            for j, (a2, b2) in enumerate(sym):
                if i == j:
                    continue
                if a2.contains_subspace(a) and b2.contains_subspace(b):
                    if (a2, b2) != (a, b) or j < i:
                        dominated = True
                        break
            if not dominated and (a, b) not in reduced:
                reduced.append((a, b))
        self.blocks = tuple(sorted(reduced, key=lambda ab: (ab[0].rows, ab[1].rows)))

    def related(self, x, y) -> bool:
        x = _check_vec(self.field, self.dim, x)
        y = _check_vec(self.field, self.dim, y)
        return any(a.contains(x) and b.contains(y) for a, b in self.blocks)

    def polar_parts(self, x) -> list:
        """The polar of a single vector as a reduced union of subspaces."""
        x = _check_vec(self.field, self.dim, x)
        parts = [b for a, b in self.blocks if a.contains(x)]
        return reduce_union(parts)

    def a_sides(self) -> list:
        return [a for a, _ in self.blocks]

    def strata(self) -> list:
        """Realizable membership patterns of the left sides.

        Over an infinite field the realizable patterns are exactly
        sigma(C) = {j : C <= A_j} for C in the intersection lattice of the
        left sides, witnessed by any point of C generic w.r.t. the other
        sides.  Returns a list of (C, sigma, polar_parts) triples.
        """
        sides = self.a_sides()
        lattice = intersection_lattice(self.field, self.dim, sides)
        out = []
        seen = set()
        for c in lattice:
            sigma = tuple(j for j, a in enumerate(sides) if a.contains_subspace(c))
            if sigma in seen:
                continue
            seen.add(sigma)
            parts = reduce_union([self.blocks[j][1] for j in sigma])
            out.append((c, sigma, parts))
        return out

    def to_pairs_iter(self, guard: int = MAX_ENUM) -> Iterator[tuple]:
        if self.field.p == 0:
            raise BackendUnsupported("cannot enumerate blocks over the rationals")
        total = 0
        for a, b in self.blocks:
            total += self.field.p ** (a.rank + b.rank)
            if total > guard:
                raise MemoryError("block enumeration exceeds guard size")
        for a, b in self.blocks:
            for x in a.vectors():
                for y in b.vectors():
                    yield (x, y)

    def to_json(self):
        out = []
        for a, b in self.blocks:
            out.append({"left": a.to_json(), "right": b.to_json()})
        return {"type": "blocks", "blocks": out}


class OrthoRelation:
    """x independent of y iff x^T G y = 0, possibly restricted to a support."""

    kind = "ortho"

    def __init__(self, field: Field, dim: int, gram: Sequence[Sequence], support: Optional[Subspace] = None):
        rows = tuple(_check_vec(field, dim, r) for r in gram)
        if len(rows) != dim:
            raise ValueError("Gram matrix must be dim x dim")
        for i in range(dim):
            for j in range(dim):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        self.field = field
        self.dim = dim
        self.gram = rows
        self.support = support if support is not None else Subspace.full(field, dim)

    def form(self, x, y):
        return vdot(self.field, mat_vec(self.field, self.gram, y), x)

    def related(self, x, y) -> bool:
        x = _check_vec(self.field, self.dim, x)
        y = _check_vec(self.field, self.dim, y)
        if not (self.support.contains(x) and self.support.contains(y)):
            return True
        return self.form(x, y) == self.field.zero()

    def form_vanishes_on_support(self) -> bool:
        z = self.field.zero()
        rows = self.support.rows
        return all(self.form(u, v) == z for u in rows for v in rows)

    def to_json(self):
        fmt = self.field.format_scalar
        doc = {"type": "ortho", "gram": [[fmt(c) for c in row] for row in self.gram]}
        if not self.support.is_full():
            doc["support"] = self.support.to_json()
        return doc


Relation = PairsRelation | BlocksRelation | OrthoRelation


def relation_from_json(field: Field, dim: int, doc) -> Relation:
    kind = doc.get("type")
    if kind == "pairs":
        return PairsRelation(field, dim, [(p[0], p[1]) for p in doc["pairs"]])
    if kind == "blocks":
        return BlocksRelation(field, dim, [(b["left"], b["right"]) for b in doc["blocks"]])
    if kind == "ortho":
        support = None
        if "support" in doc:
            support = Subspace.span(field, dim, doc["support"])
        return OrthoRelation(field, dim, doc["gram"], support)
    raise ValueError(f"unknown relation type {kind!r}")


class LocalitySpace:
    """An exact vector space together with a symmetric independence relation."""

    __slots__ = ("field", "dim", "relation")

    def __init__(self, field: Field, dim: int, relation: Relation):
        if relation.field != field or relation.dim != dim:
            raise ValueError("relation does not match the ambient space")
        self.field = field
        self.dim = dim
        self.relation = relation

    def related(self, x, y) -> bool:
        return self.relation.related(x, y)

    def vectors(self) -> Iterator[tuple]:
        if self.field.p ** self.dim > MAX_ENUM:
            raise MemoryError("vector enumeration exceeds guard size")
        return all_vectors(self.field, self.dim)

    @property
    def kind(self) -> str:
        return self.relation.kind

    def to_json(self):
        return {
            "localg_schema": 1,
            "field": self.field.to_json(),
            "dim": self.dim,
            "relation": self.relation.to_json(),
        }

    @classmethod
    def from_json(cls, doc) -> "LocalitySpace":
        field = Field.from_json(doc["field"])
        dim = int(doc["dim"])
        return cls(field, dim, relation_from_json(field, dim, doc["relation"]))

    def to_pairs(self) -> "LocalitySpace":
        """Enumerate any backend over a finite field into an explicit pair set."""
        if self.kind == "pairs":
            return self
        if self.field.p == 0:
            raise BackendUnsupported("cannot enumerate a relation over the rationals")
        if self.kind == "blocks":
            pairs = self.relation.to_pairs_iter()
        else:
            pairs = (
                (x, y)
                for x in all_vectors(self.field, self.dim)
                for y in all_vectors(self.field, self.dim)
                if self.relation.related(x, y)
            )
        return LocalitySpace(self.field, self.dim, PairsRelation(self.field, self.dim, pairs))


# ---------------------------------------------------------------------------
# unions of subspaces
# ---------------------------------------------------------------------------


def reduce_union(parts: Iterable[Subspace]) -> list:
    """Drop members of a finite union contained in another member."""
    parts = list(parts)
    out = []
    for i, p in enumerate(parts):
        if any(
            j != i and parts[j].contains_subspace(p) and (parts[j] != p or j < i)
            for j in range(len(parts))
        ):
            continue
        if p not in out:
            out.append(p)
    return out


def union_is_subspace(field: Field, dim: int, parts: Sequence[Subspace]) -> bool:
    """Exact test whether a finite union of subspaces is itself a subspace.

    Over an infinite field a union of finitely many subspaces is a subspace
    iff one member contains all others.  Over GF(p) that criterion is only
    sufficient, so the union is enumerated.
    """
    parts = reduce_union(parts)
    if not parts:
        return False  # the empty union misses the zero vector
    if len(parts) == 1:
        return True
    if field.p == 0:
        return False  # reduced union with >= 2 incomparable members
    members = set()
    for p in parts:
        members.update(p.vectors())
    total = Subspace.span(field, dim, list(members))
    return all(v in members for v in total.vectors())


def subspace_in_union(field: Field, c: Subspace, parts: Sequence[Subspace]) -> bool:
    """Exact test for C <= union(parts)."""
    parts = list(parts)
    if c.is_zero():
        return len(parts) > 0
    if field.p == 0:
        return any(p.contains_subspace(c) for p in parts)
    return all(any(p.contains(v) for p in parts) for v in c.vectors())


def intersection_lattice(field: Field, dim: int, subspaces: Sequence[Subspace]) -> list:
    """Closure of the given subspaces under pairwise intersection, plus the
    full ambient space (the empty intersection)."""
    seen = {Subspace.full(field, dim)}
    frontier = list(seen)
    for s in subspaces:
        if s not in seen:
            seen.add(s)
            frontier.append(s)
    i = 0
    while i < len(frontier):
        c = frontier[i]
        i += 1
        for s in subspaces:
            nxt = c.intersect(s)
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return sorted(seen, key=lambda s: (-s.rank, s.rows))


def generic_point(field: Field, c: Subspace, avoid: Sequence[Subspace]) -> Optional[tuple]:
    """A point of C outside every listed subspace that does not contain C.

    Over the rationals such a point always exists and is found by scanning
    integer coefficient boxes of growing radius.  Over GF(p) the member
    vectors are scanned directly and None is returned when every one is
    covered.
    """
    targets = [a for a in avoid if not a.contains_subspace(c)]
    if c.is_zero():
        # every avoided subspace contains C = {0}, so targets is empty here
        return zero_vec(field, c.dim) if not targets else None
    if field.p:
        for v in c.vectors():
            if is_zero_vec(field, v):
                continue
            if not any(a.contains(v) for a in targets):
                return v
        return None
    k = c.rank
    for radius in range(1, 5 + len(targets)):
        for coeffs in itertools.product(range(-radius, radius + 1), repeat=k):
            if all(abs(x) < radius for x in coeffs):
                continue  # already tried in a smaller box
            v = zero_vec(field, c.dim)
            for co, row in zip(coeffs, c.rows):
                v = vadd(field, v, vscale(field, field.coerce(co), row))
            if is_zero_vec(field, v):
                continue
            if not any(a.contains(v) for a in targets):
                return v
    return None


# ---------------------------------------------------------------------------
# polar sets
# ---------------------------------------------------------------------------


class PolarSet:
    """The set of vectors independent of every member of a finite set U.

    Depending on the backend the set is carried as an explicit vector set
    (``pairs``), a reduced union of subspaces (``union``), or a single
    subspace.  ``is_subspace`` reports whether the set is a linear subspace;
    for an exotic ortho-with-support polar only the membership predicate and
    the flag are provided.
    """

    def __init__(self, space: LocalitySpace, u_list: list, kind: str, *, subspace=None, parts=None, members=None, is_subspace=None):
        self.space = space
        self.u_list = u_list
        self.kind = kind
        self.subspace = subspace
        self.parts = parts
        self.members = members
        self._is_subspace = is_subspace

    @property
    def is_subspace(self) -> bool:
        return self._is_subspace

    def contains(self, v) -> bool:
        if self.kind == "pairs":
            return tuple(vec(self.space.field, v)) in self.members
        if self.kind == "subspace":
            return self.subspace.contains(v)
        if self.kind == "union":
            return any(p.contains(v) for p in self.parts)
        return all(self.space.related(u, v) for u in self.u_list)

    def as_subspace(self) -> Subspace:
        if not self.is_subspace:
            raise ValueError("polar set is not a subspace")
        F = self.space.field
        if self.kind == "subspace":
            return self.subspace
        if self.kind == "union":
            for p in self.parts:
                if all(p.contains_subspace(q) for q in self.parts):
                    return p
            # finite-field union that happens to be a subspace
            members = set()
            for p in self.parts:
                members.update(p.vectors())
            return Subspace.span(F, self.space.dim, list(members))
        return Subspace.span(F, self.space.dim, list(self.members))

    def to_json(self):
        doc = {"is_subspace": self.is_subspace, "kind": self.kind}
        fmt = self.space.field.format_scalar
        if self.kind == "subspace":
            doc["basis"] = self.subspace.to_json()
        elif self.kind == "union":
            doc["parts"] = [p.to_json() for p in self.parts]
        elif self.kind == "pairs":
            doc["members"] = sorted([fmt(c) for c in m] for m in self.members)
        return doc


def polar(space: LocalitySpace, u_list: Iterable) -> PolarSet:
    """Polar set of a finite vector list; the empty list polarizes to everything."""
    F = space.field
    u_list = [_check_vec(F, space.dim, u) for u in u_list]
    if not u_list:
        full = Subspace.full(F, space.dim)
        return PolarSet(space, u_list, "subspace", subspace=full, is_subspace=True)
    rel = space.relation
    if rel.kind == "pairs":
        members = rel.polar_of(u_list[0])
        for u in u_list[1:]:
            members = members & rel.polar_of(u)
        span = Subspace.span(F, space.dim, list(members)) if members else None
        good = bool(members) and set(span.vectors()) == set(members)
        return PolarSet(space, u_list, "pairs", members=frozenset(members), is_subspace=good)
    if rel.kind == "blocks":
        # intersection of per-vector unions = union of per-choice intersections
        options = [[b for a, b in rel.blocks if a.contains(u)] for u in u_list]
        parts = []
        for choice in itertools.product(*options):
            c = choice[0]
            for extra in choice[1:]:
                c = c.intersect(extra)
            parts.append(c)
        parts = reduce_union(parts)
        good = union_is_subspace(F, space.dim, parts)
        return PolarSet(space, u_list, "union", parts=parts, is_subspace=good)
    # ortho
    if rel.support.is_full():
        rows = [mat_vec(F, rel.gram, u) for u in u_list]
        from .linalg import nullspace

        ker = nullspace(F, rows, space.dim)
        return PolarSet(space, u_list, "subspace", subspace=ker, is_subspace=True)
    if F.p:
        members = frozenset(
            v for v in all_vectors(F, space.dim) if all(rel.related(u, v) for u in u_list)
        )
        span = Subspace.span(F, space.dim, list(members)) if members else None
        good = bool(members) and set(span.vectors()) == set(members)
        return PolarSet(space, u_list, "pairs", members=frozenset(members), is_subspace=good)
    # rational ortho with proper support: the polar is everything unless some
    # u sits in the support with a nonvanishing induced form
    inside = [u for u in u_list if rel.support.contains(u)]
    z = F.zero()
    nontrivial = [u for u in inside if any(rel.form(u, s) != z for s in rel.support.rows)]
    if not nontrivial:
        full = Subspace.full(F, space.dim)
        return PolarSet(space, u_list, "subspace", subspace=full, is_subspace=True)
    return PolarSet(space, u_list, "predicate", is_subspace=False)


# ---------------------------------------------------------------------------
# the locality condition and the closure
# ---------------------------------------------------------------------------


def is_locality_space(space: LocalitySpace) -> Verdict:
    """Is the polar of every single vector a linear subspace?"""
    rel = space.relation
    F = space.field
    if rel.kind == "ortho":
        if rel.support.is_full() or rel.support.is_zero():
            return Verdict.TRUE
        return Verdict.of(rel.form_vanishes_on_support())
    if rel.kind == "pairs":
        pm = rel.polar_map()
        for x in space.vectors():
            members = pm.get(x, frozenset())
            if not members:
                return Verdict.FALSE  # misses the zero vector
            span = Subspace.span(F, space.dim, list(members))
            if F.p ** span.rank != len(members):
                return Verdict.FALSE
        return Verdict.TRUE
    # blocks
    if F.p:
        return is_locality_space(space.to_pairs())
    for _c, _sigma, parts in rel.strata():
        if not union_is_subspace(F, space.dim, parts):
            return Verdict.FALSE
    return Verdict.TRUE


def locality_witness(space: LocalitySpace) -> Optional[tuple]:
    """A triple (u, x, y) with u related to x and y but not to x + y, if any."""
    rel = space.relation
    F = space.field
    if rel.kind == "pairs":
        pm = rel.polar_map()
        for u in space.vectors():
            members = sorted(pm.get(u, frozenset()))
            if not members:
                return (u, zero_vec(F, space.dim), zero_vec(F, space.dim))
            for x in members:
                for y in members:
                    if not rel.related(u, vadd(F, x, y)):
                        return (u, x, y)
                for k in range(2, F.p):
                    if not rel.related(u, vscale(F, k, x)):
                        return (u, x, vscale(F, k - 1, x))
        return None
    if rel.kind == "blocks" and F.p == 0:
        for c, sigma, parts in rel.strata():
            if union_is_subspace(F, space.dim, parts):
                continue
            sides = rel.a_sides()
            avoid = [sides[j] for j in range(len(sides)) if j not in sigma]
            u = generic_point(F, c, avoid)
            if u is None:
                continue
            # two parts whose sum escapes the union
            for p in parts:
                for q in parts:
                    for x in p.rows:
                        for y in q.rows:
                            s = vadd(F, x, y)
                            if not rel.related(u, s):
                                return (u, x, y)
        return None
    raise BackendUnsupported("witness extraction implemented for pairs and rational blocks")


def closure(space: LocalitySpace) -> LocalitySpace:
    """The coarsest relation containing this one whose polars are subspaces.

    On the pairs backend the closure is computed as a fixed point: every
    vector's polar is replaced by its linear span, the relation is
    re-symmetrized, and the process repeats until stable.  Each step stays
    inside every locality relation containing the input, and a stable point
    is itself a locality relation, so the result is exactly the minimal one.
    """
    rel = space.relation
    F = space.field
    if rel.kind == "ortho":
        if is_locality_space(space).is_true:
            return space
        raise UndecidedError("closure of a support-restricted ortho relation is not certified")
    if rel.kind == "blocks":
        if is_locality_space(space).is_true:
            return space
        raise UndecidedError("closure over symbolic blocks is not certified minimal")
    pairs = set(rel.pairs)
    z = zero_vec(F, space.dim)
    for v in space.vectors():
        pairs.add((v, z))
        pairs.add((z, v))
    changed = True
    while changed:
        changed = False
        acc: dict = {}
        for x, y in pairs:
            acc.setdefault(x, set()).add(y)
        for x, members in acc.items():
            span = Subspace.span(F, space.dim, list(members))
            if F.p ** span.rank == len(members):
                continue
            for y in span.vectors():
                if (x, y) not in pairs:
                    pairs.add((x, y))
                    pairs.add((y, x))
                    changed = True
    return LocalitySpace(F, space.dim, PairsRelation(F, space.dim, pairs))


# ---------------------------------------------------------------------------
# locality maps
# ---------------------------------------------------------------------------


class LocMap:
    """A linear map between locality spaces, optionally checked to preserve
    independence (a checked map satisfies (f x f)(rel_src) inside rel_tgt)."""

    def __init__(self, linmap: LinMap, source: LocalitySpace, target: LocalitySpace, check: bool = False):
        if linmap.src_dim != source.dim or linmap.tgt_dim != target.dim:
            raise ValueError("map shape does not match the spaces")
        if linmap.field != source.field or source.field != target.field:
            raise ValueError("field mismatch")
        self.map = linmap
        self.source = source
        self.target = target
        if check:
            v = independent_maps(self, self)
            if v.is_false:
                raise NotLocalityError("map does not preserve independence")
            if v.is_unknown:
                raise UndecidedError("map preservation could not be certified")

    def __call__(self, v):
        return self.map(v)


def _box_vectors(field: Field, basis: Sequence[tuple], radius: int) -> Iterator[tuple]:
    dim = len(basis[0]) if basis else 0
    for coeffs in itertools.product(range(-radius, radius + 1), repeat=len(basis)):
        v = zero_vec(field, dim)
        for c, row in zip(coeffs, basis):
            v = vadd(field, v, vscale(field, field.coerce(c), row))
        yield v


def independent_maps(f: LocMap, g: LocMap) -> Verdict:
    """Does (f x g) send every independent source pair to an independent target pair?"""
    if f.source is not g.source and f.source.to_json() != g.source.to_json():
        raise ValueError("maps must share a source space")
    src = f.source
    tgt_f, tgt_g = f.target, g.target
    F = src.field
    rel = src.relation
    if rel.kind == "pairs":
        for x, y in rel.pairs:
            if not tgt_f.relation.related(f(x), g(y)):
                return Verdict.FALSE
        return Verdict.TRUE
    if rel.kind == "blocks":
        if F.p:
            return independent_maps(
                LocMap(f.map, src.to_pairs(), tgt_f),
                LocMap(g.map, src.to_pairs(), tgt_g),
            )
        ok_all = True
        for a, b in rel.blocks:
            if _subspace_pair_related(tgt_f, _image_subspace(f.map, a), _image_subspace(g.map, b)):
                continue
            ok_all = False
            w = _witness_pair_in_block(f, g, a, b)
            if w is not None:
                return Verdict.FALSE
        return Verdict.TRUE if ok_all is True else Verdict.UNKNOWN
    # ortho source over the rationals: exact falsification by box search,
    # certification only in easy cases
    if F.p:
        return independent_maps(
            LocMap(f.map, src.to_pairs(), tgt_f), LocMap(g.map, src.to_pairs(), tgt_g)
        )
    ident = LinMap.identity(F, src.dim)
    if f.map == ident and g.map == ident and tgt_f.to_json() == src.to_json():
        return Verdict.TRUE
    basis = [unit_vec(F, src.dim, i) for i in range(src.dim)]
    for x in _box_vectors(F, basis, 2):
        for y in _box_vectors(F, basis, 2):
            if rel.related(x, y) and not tgt_f.relation.related(f(x), g(y)):
                return Verdict.FALSE
    return Verdict.UNKNOWN


def _image_subspace(m: LinMap, a: Subspace) -> Subspace:
    return Subspace.span(m.field, m.tgt_dim, [m(r) for r in a.rows])


def _subspace_pair_related(tgt: LocalitySpace, a: Subspace, b: Subspace) -> bool:
    """Certified sufficient condition: the product A x B sits inside the target."""
    rel = tgt.relation
    if rel.kind == "blocks":
        return any(p.contains_subspace(a) and q.contains_subspace(b) for p, q in rel.blocks)
    if rel.kind == "ortho" and rel.support.is_full():
        z = tgt.field.zero()
        return all(rel.form(u, v) == z for u in a.rows for v in b.rows)
    if rel.kind == "pairs":
        return all(rel.related(u, v) for u in a.vectors() for v in b.vectors())
    return False


def _witness_pair_in_block(f: LocMap, g: LocMap, a: Subspace, b: Subspace):
    F = f.source.field
    if not a.rows or not b.rows:
        return None
    for x in _box_vectors(F, a.rows, 2):
        for y in _box_vectors(F, b.rows, 2):
            if not f.target.relation.related(f(x), g(y)):
                return (x, y)
    return None


# ---------------------------------------------------------------------------
# higher cartesian products
# ---------------------------------------------------------------------------


class CartesianDescriptor:
    """Description of the n-fold pairwise-independent cartesian product."""

    def __init__(self, space, n, kind, *, tuples=None, blocks=None, nonzero_tuples_exist=None):
        self.space = space
        self.n = n
        self.kind = kind
        self.tuples = tuples
        self.blocks = blocks
        self.nonzero_tuples_exist = nonzero_tuples_exist


def loc_cartesian(space: LocalitySpace, factors: Sequence[Subspace], n: Optional[int] = None) -> CartesianDescriptor:
    """Tuples of the factor subspaces whose entries are pairwise independent.

    n = 0 is the ground field by convention.  The pairs backend enumerates
    tuples outright; blocks produce a symbolic union of subspace tuples; a
    rational ortho relation only reports whether all-nonzero tuples exist.
    """
    if n is not None:
        factors = [factors[0] if factors else Subspace.full(space.field, space.dim)] * n
    factors = list(factors)
    n = len(factors)
    if n == 0:
        return CartesianDescriptor(space, 0, "unit")
    rel = space.relation
    F = space.field
    if rel.kind == "pairs":
        tuples = []

        def extend(prefix):
            if len(prefix) == n:
                tuples.append(tuple(prefix))
                return
            i = len(prefix)
            for v in factors[i].vectors():
                if all(rel.related(u, v) for u in prefix):
                    extend(prefix + [v])

        extend([])
        return CartesianDescriptor(space, n, "tuples", tuples=tuples)
    if rel.kind == "blocks":
        if n > 3:
            raise BackendUnsupported("symbolic cartesian products support n <= 3")
        combos = _block_tuples(space, factors)
        return CartesianDescriptor(space, n, "blocks", blocks=combos)
    # ortho
    if F.p:
        return loc_cartesian(space.to_pairs(), factors)
    exists = _ortho_nonzero_tuple_exists(rel, factors)
    return CartesianDescriptor(space, n, "ortho", nonzero_tuples_exist=exists)


def _block_tuples(space: LocalitySpace, factors: Sequence[Subspace]) -> list:
    """Subspace tuples (S_1..S_n) with every ordered pair certified by a block.

    Complete for block relations: an independent tuple has each pair inside
    some block, so its entries lie in the corresponding side intersections.
    """
    rel = space.relation
    n = len(factors)
    if n == 1:
        return [(factors[0],)]
    pair_idx = [(i, j) for i in range(n) for j in range(n) if i < j]
    results = []

    def assign(k, current):
        if k == len(pair_idx):
            if all(not s.is_zero() for s in current) or all(s.is_zero() for s in current):
                tup = tuple(current)
                if tup not in results:
                    results.append(tup)
            return
        i, j = pair_idx[k]
        for a, b in rel.blocks:
            si = current[i].intersect(a)
            sj = current[j].intersect(b)
            nxt = list(current)
            nxt[i], nxt[j] = si, sj
            assign(k + 1, nxt)

    assign(0, list(factors))
    # drop tuples dominated componentwise by another tuple
    out = []
    for t in results:
        if any(
            other is not t and all(o.contains_subspace(s) for o, s in zip(other, t))
            for other in results
        ):
            continue
        if t not in out:
            out.append(t)
    return out


def _ortho_nonzero_tuple_exists(rel: OrthoRelation, factors: Sequence[Subspace]) -> Optional[bool]:
    F = rel.field
    if _gram_positive_definite(rel):
        # pairwise independent nonzero vectors are linearly independent here
        return len(factors) <= rel.dim
    basis_sets = [s.rows for s in factors]
    if not all(basis_sets):
        return False
    for combo in itertools.product(*[list(_box_vectors(F, b, 2)) for b in basis_sets]):
        if any(is_zero_vec(F, v) for v in combo):
            continue
        if all(rel.related(x, y) for x, y in itertools.combinations(combo, 2)):
            return True
    return None


def _gram_positive_definite(rel: OrthoRelation) -> bool:
    if rel.field.p:
        return False
    from fractions import Fraction

    n = rel.dim
    m = [[Fraction(rel.gram[i][j]) for j in range(n)] for i in range(n)]
    # leading principal minors via fraction-free elimination
    for k in range(1, n + 1):
        det = _det([row[:k] for row in m[:k]])
        if det <= 0:
            return False
    return True


def _det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        term = m[0][j] * _det(minor)
        total += term if j % 2 == 0 else -term
    return total


# ---------------------------------------------------------------------------
# the free span modulo linearity, compared with the space itself
# ---------------------------------------------------------------------------


def freespan_quotient_iso_check(space: LocalitySpace, require_locality: bool = True) -> bool:
    """Rebuild the space from the free span on its vector set and compare.

    The free span K(V) has one basis slot per vector of V; quotienting by the
    linearity relators (a+b)-(a)-(b) and k(a)-(ka) recovers V.  The check
    verifies the canonical bijection and that the induced quotient relation
    (classes admitting representatives with mutually independent supports)
    agrees with the original relation.  Fails for merely pre-locality inputs,
    which is why those are rejected by default.
    """
    if space.kind != "pairs":
        raise BackendUnsupported("free span check runs on the pairs backend")
    if require_locality and not is_locality_space(space).is_true:
        raise NotLocalityError("input relation is not a locality relation")
    F = space.field
    vecs = sorted(space.vectors())
    index = {v: i for i, v in enumerate(vecs)}
    nfree = len(vecs)

    def basis_row(v):
        row = [F.zero()] * nfree
        row[index[v]] = F.one()
        return row

    gens = []
    for a in vecs:
        for b in vecs:
            row = basis_row(vadd(F, a, b))
            row[index[a]] = F.sub(row[index[a]], F.one())
            row[index[b]] = F.sub(row[index[b]], F.one())
            gens.append(row)
    for k in range(F.p):
        for a in vecs:
            row = [F.mul(k, c) for c in basis_row(a)]
            ka = vscale(F, k, a)
            row[index[ka]] = F.sub(row[index[ka]], F.one())
            gens.append(row)
    i_lin = Subspace.span(F, nfree, gens)
    if nfree - i_lin.rank != space.dim:
        return False
    # canonical bijection: distinct vectors stay distinct in the quotient
    residues = {tuple(i_lin.reduce(basis_row(v))) for v in vecs}
    if len(residues) != len(vecs):
        return False

    rel = space.relation
    pm = rel.polar_map()

    def polar_set(d):
        out = set(vecs)
        for u in d:
            out &= pm.get(u, frozenset())
        return frozenset(out)

    # intersection-closed family of polar sets, seeds the candidate supports
    cands = {frozenset(vecs)}
    frontier = [frozenset(vecs)]
    singles = [pm.get(v, frozenset()) for v in vecs]
    for s in singles:
        if s not in cands:
            cands.add(s)
            frontier.append(s)
    i = 0
    while i < len(frontier):
        c = frontier[i]
        i += 1
        for s in singles:
            t = c & s
            if t not in cands:
                cands.add(t)
                frontier.append(t)
    support_pairs = []
    for c in cands:
        s1 = polar_set(c)
        s2 = polar_set(s1)
        support_pairs.append((s1, s2))
        support_pairs.append((s2, s1))

    def in_span_plus_ilin(target_vec, support):
        rows = list(i_lin.rows) + [basis_row(s) for s in sorted(support)]
        return Subspace.span(F, nfree, rows).contains(basis_row(target_vec))

    for x in vecs:
        for y in vecs:
            direct = rel.related(x, y)
            quotient = any(
                in_span_plus_ilin(x, s1) and in_span_plus_ilin(y, s2)
                for s1, s2 in support_pairs
            )
            if direct != quotient:
                return False
    return True
