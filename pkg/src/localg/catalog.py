"""Named example spaces used by the fixture corpus and the test suite."""

from __future__ import annotations

from .fields import Field, QQ
from .linalg import Subspace, unit_vec
from .core import BlocksRelation, LocalitySpace, OrthoRelation, PairsRelation


def e(field: Field, dim: int, *idx) -> tuple:
    """Sum of standard basis vectors (1-based indices)."""
    v = [field.zero()] * dim
    for i in idx:
        v[i - 1] = field.add(v[i - 1], field.one())
    return tuple(v)


def ortho_space(field: Field, dim: int, gram=None) -> LocalitySpace:
    """Independence by vanishing of a symmetric form; default form is the dot product."""
    if gram is None:
        gram = [unit_vec(field, dim, i) for i in range(dim)]
    return LocalitySpace(field, dim, OrthoRelation(field, dim, gram))


def trivial_space(field: Field, dim: int) -> LocalitySpace:
    full = Subspace.full(field, dim)
    return LocalitySpace(field, dim, BlocksRelation(field, dim, [(full, full)]))


def r4_block_space(field: Field = QQ) -> LocalitySpace:
    """Dimension 4: everything pairs with zero, plus <e1,e3> x <e2+e4> symmetrized."""
    dim = 4
    blocks = [
        (Subspace.full(field, dim), Subspace.zero(field, dim)),
        (
            Subspace.span(field, dim, [e(field, dim, 1), e(field, dim, 3)]),
            Subspace.span(field, dim, [e(field, dim, 2, 4)]),
        ),
    ]
    return LocalitySpace(field, dim, BlocksRelation(field, dim, blocks))


def r7_block_space(field: Field = QQ) -> LocalitySpace:
    """The seven-dimensional relation with a compatible subspace <e1,e2,e3>
    that admits no independence-preserving projection onto it."""
    dim = 7

    def sp(*vecs):
        return Subspace.span(field, dim, vecs)

    blocks = [
        (Subspace.full(field, dim), Subspace.zero(field, dim)),
        (sp(e(field, dim, 1, 7)), sp(e(field, dim, 4), e(field, dim, 5))),
        (sp(e(field, dim, 2, 7)), sp(e(field, dim, 5), e(field, dim, 6))),
        (sp(e(field, dim, 3, 7)), sp(e(field, dim, 4), e(field, dim, 6))),
        (sp(e(field, dim, 1, 7), e(field, dim, 3, 7)), sp(e(field, dim, 4))),
        (sp(e(field, dim, 1, 7), e(field, dim, 2, 7)), sp(e(field, dim, 5))),
        (sp(e(field, dim, 2, 7), e(field, dim, 3, 7)), sp(e(field, dim, 6))),
    ]
    return LocalitySpace(field, dim, BlocksRelation(field, dim, blocks))


def r7_w(field: Field = QQ) -> Subspace:
    return Subspace.span(field, 7, [e(field, 7, 1), e(field, 7, 2), e(field, 7, 3)])


def appendix_space(field: Field = QQ) -> LocalitySpace:
    """Dimension 2: zero pairs plus <e1+e2> x <e1> and <e1+2e2> x <e2>, symmetrized."""
    dim = 2
    two = field.add(field.one(), field.one())
    e1 = e(field, dim, 1)
    e2 = e(field, dim, 2)
    e12 = e(field, dim, 1, 2)
    e1_2e2 = (field.one(), two)
    blocks = [
        (Subspace.full(field, dim), Subspace.zero(field, dim)),
        (Subspace.span(field, dim, [e12]), Subspace.span(field, dim, [e1])),
        (Subspace.span(field, dim, [e1_2e2]), Subspace.span(field, dim, [e2])),
    ]
    return LocalitySpace(field, dim, BlocksRelation(field, dim, blocks))


def lie_family_space(field: Field = QQ) -> LocalitySpace:
    """Dimension 3: each axis pairs with itself, and <e1,e2> pairs with <e3>."""
    dim = 3
    blocks = [
        (Subspace.span(field, dim, [e(field, dim, 1)]), Subspace.span(field, dim, [e(field, dim, 1)])),
        (Subspace.span(field, dim, [e(field, dim, 2)]), Subspace.span(field, dim, [e(field, dim, 2)])),
        (Subspace.span(field, dim, [e(field, dim, 3)]), Subspace.span(field, dim, [e(field, dim, 3)])),
        (
            Subspace.span(field, dim, [e(field, dim, 1), e(field, dim, 2)]),
            Subspace.span(field, dim, [e(field, dim, 3)]),
        ),
    ]
    return LocalitySpace(field, dim, BlocksRelation(field, dim, blocks))


def lie_family(lam, mu, mup, field: Field = QQ):
    """Three-dimensional partial Lie bracket on the axis-block relation:
    [e1,e3] = lam e1 + mu e3 and [e2,e3] = mup e3; [e1,e2] stays undefined."""
    from .lie import LocLieAlgebra

    space = lie_family_space(field)
    lam, mu, mup = field.coerce(lam), field.coerce(mu), field.coerce(mup)
    z = field.zero()
    table = {
        (0, 2): (lam, z, mu),
        (1, 2): (z, z, mup),
    }
    return LocLieAlgebra(space, table)


def abelian_lie(field: Field, dim: int):
    """Zero bracket on the complete relation."""
    from .lie import LocLieAlgebra

    return LocLieAlgebra(trivial_space(field, dim), {}, fill_zero=True)
