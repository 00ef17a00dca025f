"""Empirical stress-testing of the compatibility statements on small fields.

Each statement asserts that a distinguished relator subspace is
correction-compatible with the linearly extended relation of a free span:

  1  bilinearity relators inside the span on independent pairs,
  2  multilinearity relators inside the span on independent chains (per
     truncation degree),
  3  the commutator relators inside the truncated tensor algebra of a
     partial Lie bracket.

A trial samples a hypothesis quadruple (x, y, z, w) and searches for the
correcting shift w'.  Supports live in the finite generator list, and
membership of x + w' in span(support) + relators is monotone in the
support, so feasibility at the full admissible generator set decides
existence outright; the size-capped search only serves to report small
witnesses.  A trial is declared a counterexample only when that full check
is infeasible, and every counterexample ships as a certificate whose replay
re-verifies the hypothesis and re-runs an independent exhaustive search.
"""

from __future__ import annotations

import itertools
import json
import random
from typing import Callable, Optional, Sequence

from .fields import Field
from .linalg import Subspace, is_zero_vec, kron, kron_many, nullspace, vadd, vec, vscale, vsub, zero_vec
from .core import LocalitySpace, PairsRelation, closure
from .certs import Certificate
from .catalog import lie_family_space
from .tensor import chains_of

POOL_SIZE = 6
SEED_STRIDE = 1_000_003


# ---------------------------------------------------------------------------
# free-span problems
# ---------------------------------------------------------------------------


class FreeSpanProblem:
    """A finite generator list with a symmetric independence predicate, a
    realization into coordinates whose kernel is the relator subspace, and
    the relator basis itself."""

    def __init__(self, field: Field, gens: list, related: Callable, relators: Subspace, label: str):
        self.field = field
        self.gens = gens
        self.index = {g: i for i, g in enumerate(gens)}
        self.related = related
        self.relators = relators  # subspace of the coefficient space
        self.label = label

    @property
    def n(self) -> int:
        return len(self.gens)

    def support(self, coeffs: Sequence) -> list:
        F = self.field
        return [self.gens[i] for i, c in enumerate(coeffs) if c != F.zero()]

    def elements_related(self, a: Sequence, b: Sequence) -> bool:
        return all(self.related(g, h) for g in self.support(a) for h in self.support(b))

    def admissible(self, targets: list) -> list:
        """Generator indices independent of every listed generator."""
        return [
            i
            for i, g in enumerate(self.gens)
            if all(self.related(g, h) for h in targets)
        ]


def _pair_slotwise(space: LocalitySpace):
    rel = space.relation

    def related(g, h):
        return rel.related(g[0], h[0]) and rel.related(g[1], h[1])

    return related


def _chain_cross(space: LocalitySpace):
    rel = space.relation

    def related(g, h):
        return all(rel.related(u, v) for u in g for v in h)

    return related


def statement1_problem(space: LocalitySpace, v1: Subspace, v2: Subspace) -> FreeSpanProblem:
    """Free span on independent pairs; relators = kernel of the map onto the
    ordinary tensor product (exactly the bilinearity combinations)."""
    F = space.field
    rel = space.relation
    gens = sorted(
        (x, y) for x, y in rel.pairs if v1.contains(x) and v2.contains(y)
    )
    amb = space.dim * space.dim
    rows = [[F.zero()] * len(gens) for _ in range(amb)]
    for j, (x, y) in enumerate(gens):
        k = kron(F, x, y)
        for i, c in enumerate(k):
            rows[i][j] = c
    relators = nullspace(F, rows, len(gens))
    return FreeSpanProblem(F, gens, _pair_slotwise(space), relators, "pairs")


def statement2_problem(space: LocalitySpace, max_degree: int) -> FreeSpanProblem:
    """Free span on independent chains of degree <= N; relators = kernel of
    the degreewise Kronecker realization (the multilinearity combinations)."""
    F = space.field
    full = Subspace.full(F, space.dim)
    gens: list = [()]
    for k in range(1, max_degree + 1):
        gens.extend(sorted(chains_of(space, [full] * k)))
    offsets = {}
    off = 0
    for k in range(0, max_degree + 1):
        offsets[k] = off
        off += space.dim ** k if k else 1
    rows = [[F.zero()] * len(gens) for _ in range(off)]
    for j, g in enumerate(gens):
        if not g:
            rows[offsets[0]][j] = F.one()
            continue
        k = len(g)
        v = kron_many(F, g)
        for i, c in enumerate(v):
            rows[offsets[k] + i][j] = c
    relators = nullspace(F, rows, len(gens))
    return FreeSpanProblem(F, gens, _chain_cross(space), relators, "chains")


def statement3_problem(space: LocalitySpace, max_degree: int = 2) -> FreeSpanProblem:
    """Free span on chains again, but the relator subspace is the commutator
    ideal of the three-parameter partial bracket, pulled back to generator
    coordinates."""
    from .catalog import lie_family
    from .lie import TruncEnvAlgebra

    F = space.field
    one = F.one()
    lie = lie_family(one, one, one, F)
    if lie.space.to_json() != space.to_json():
        raise ValueError("statement 3 runs on the three-parameter family space")
    env = TruncEnvAlgebra(lie, max_degree)
    pairs_space = space.to_pairs()
    full = Subspace.full(F, space.dim)
    gens: list = [()]
    for k in range(1, max_degree + 1):
        gens.extend(sorted(chains_of(pairs_space, [full] * k)))
    # relators in generator coordinates: each stacked relator is a signed
    # combination of chain realizations
    relator_rows = []
    for a, b in env._relator_basis_pairs():
        row = [F.zero()] * len(gens)
        idx = lambda g: gens.index(g)
        val = lie.bracket(a, b)
        ab = (tuple(a), tuple(b))
        ba = (tuple(b), tuple(a))
        if ab not in gens or ba not in gens:
            continue
        row[idx(ab)] = F.add(row[idx(ab)], F.one())
        row[idx(ba)] = F.sub(row[idx(ba)], F.one())
        if not is_zero_vec(F, val):
            # spread the bracket value over degree-1 chains
            for i, c in enumerate(val):
                if c == F.zero():
                    continue
                g1 = (tuple(1 if t == i else 0 for t in range(space.dim)),)
                g1 = (vec(F, g1[0]),)
                if g1 in gens:
                    row[idx(g1)] = F.sub(row[idx(g1)], c)
        relator_rows.append(row)
    relators = Subspace.span(F, len(gens), relator_rows)
    return FreeSpanProblem(F, gens, _chain_cross(pairs_space), relators, "env-chains")


# ---------------------------------------------------------------------------
# instances and witness search
# ---------------------------------------------------------------------------


class ConjInstance:
    def __init__(self, statement: int, space: LocalitySpace, problem: FreeSpanProblem, params: dict, x, y, z, w, support_cap: int, seed: int):
        self.statement = statement
        self.space = space
        self.problem = problem
        self.params = params
        self.x = x
        self.y = y
        self.z = z
        self.w = w
        self.support_cap = support_cap
        self.seed = seed

    def hypothesis_holds(self) -> bool:
        F = self.problem.field
        xw = vadd(F, self.x, self.w)
        return self.problem.elements_related(self.x, self.y) and self.problem.elements_related(xw, self.z)


class SearchResult:
    def __init__(self, status: str, w_prime=None, support_size: Optional[int] = None):
        self.status = status  # "found" | "counterexample"
        self.w_prime = w_prime
        self.support_size = support_size


def witness_search(inst: ConjInstance) -> SearchResult:
    """Complete decision via the full admissible support, then a greedy
    support minimization for reporting."""
    prob = inst.problem
    F = prob.field
    targets = prob.support(inst.y) + prob.support(inst.z)
    admissible = prob.admissible(targets)
    w_prime = _solve_in_support(prob, admissible, inst.x)
    if w_prime is None:
        return SearchResult("counterexample")
    # shrink greedily starting from the canonical solution's own support
    support = sorted(
        i for i, c in enumerate(vadd(F, inst.x, w_prime)) if c != F.zero()
    )
    for i in list(support):
        if i not in support:
            continue
        trial = [j for j in support if j != i]
        cand = _solve_in_support(prob, trial, inst.x)
        if cand is not None:
            w_prime = cand
            support = sorted(
                j for j, c in enumerate(vadd(F, inst.x, cand)) if c != F.zero()
            )
    size = sum(1 for c in vadd(F, inst.x, w_prime) if c != F.zero())
    return SearchResult("found", w_prime, size)


def _solve_in_support(prob: FreeSpanProblem, support: list, x) -> Optional[tuple]:
    """Is x in span(unit vectors of the support) + relators?  If so, return
    w' in the relator subspace with x + w' supported there."""
    F = prob.field
    n = prob.n
    gens_rows = []
    for i in support:
        row = [F.zero()] * n
        row[i] = F.one()
        gens_rows.append(tuple(row))
    from .linalg import solve_in_span

    all_rows = gens_rows + list(prob.relators.rows)
    coeffs = solve_in_span(F, all_rows, x)
    if coeffs is None:
        return None
    w_prime = zero_vec(F, n)
    for c, row in zip(coeffs[len(gens_rows) :], prob.relators.rows):
        w_prime = vadd(F, w_prime, vscale(F, c, row))
    return vneg_tuple(F, w_prime)


def vneg_tuple(F: Field, v):
    from .linalg import vneg

    return vneg(F, v)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


_SPACE_POOL: dict = {}


def _pool_space(p: int, dim: int, idx: int) -> LocalitySpace:
    key = (p, dim, idx)
    if key not in _SPACE_POOL:
        field = Field.gf(p)
        rng = random.Random(900_000 + p * 10_000 + dim * 100 + idx)
        vs = sorted(itertools.product(range(p), repeat=dim))
        gens = [(rng.choice(vs), rng.choice(vs)) for _ in range(rng.randrange(1, 5))]
        _SPACE_POOL[key] = closure(
            LocalitySpace(field, dim, PairsRelation(field, dim, gens))
        )
    return _SPACE_POOL[key]


_PROBLEM_CACHE: dict = {}


def _cached_problem(statement: int, space: LocalitySpace, params: dict) -> FreeSpanProblem:
    key = (statement, json.dumps(space.to_json(), sort_keys=True), json.dumps(params, sort_keys=True))
    if key not in _PROBLEM_CACHE:
        F = space.field
        if statement == 1:
            v1 = Subspace.span(F, space.dim, params["v1"]) if params.get("v1") else Subspace.full(F, space.dim)
            v2 = Subspace.span(F, space.dim, params["v2"]) if params.get("v2") else Subspace.full(F, space.dim)
            _PROBLEM_CACHE[key] = statement1_problem(space, v1, v2)
        elif statement == 2:
            _PROBLEM_CACHE[key] = statement2_problem(space, params["degree"])
        else:
            _PROBLEM_CACHE[key] = statement3_problem(space, params["degree"])
    return _PROBLEM_CACHE[key]


class SampleSkipped(Exception):
    pass


def sample_instance(statement: int, p: int, dim: int, support_cap: int, seed: int) -> ConjInstance:
    """Deterministic sparse sample of a hypothesis quadruple.

    x, y draw small supports with y admissible against x; w is a small
    relator combination; z draws from the generators admissible against the
    combined support of x + w.  A trial whose pools run dry raises
    SampleSkipped, recorded by the fuzzer.
    """
    rng = random.Random(seed)
    if statement == 3:
        field = Field.gf(p)
        space = lie_family_space(field)
        params = {"degree": 2}
    elif statement == 2:
        space = _pool_space(p, min(dim, 2) if p == 3 else dim, rng.randrange(POOL_SIZE))
        params = {"degree": 2 if (p == 3 or dim >= 3) else 3}
    else:
        space = _pool_space(p, dim, rng.randrange(POOL_SIZE))
        params = {"v1": None, "v2": None}
    prob = _cached_problem(statement, space, params)
    F = prob.field
    n = prob.n
    if n == 0:
        raise SampleSkipped("no generators")

    def draw_element(pool: list, max_terms: int) -> tuple:
        if not pool:
            raise SampleSkipped("empty support pool")
        terms = rng.randrange(1, max_terms + 1)
        out = [F.zero()] * n
        for _ in range(terms):
            i = rng.choice(pool)
            c = rng.randrange(1, F.p)
            out[i] = F.add(out[i], F.coerce(c))
        if all(c == F.zero() for c in out):
            raise SampleSkipped("cancelled to zero")
        return tuple(out)

    all_idx = list(range(n))
    x = draw_element(all_idx, max(1, support_cap // 2))
    y = draw_element(prob.admissible(prob.support(x)), 2)
    # w: small relator combination
    w = zero_vec(F, n)
    if prob.relators.rank:
        for _ in range(rng.randrange(1, 3)):
            row = prob.relators.rows[rng.randrange(prob.relators.rank)]
            w = vadd(F, w, vscale(F, F.coerce(rng.randrange(1, F.p)), row))
    xw = vadd(F, x, w)
    z = draw_element(prob.admissible(prob.support(xw)), 2)
    return ConjInstance(statement, space, prob, params, x, y, z, w, support_cap, seed)


# ---------------------------------------------------------------------------
# the fuzzing loop
# ---------------------------------------------------------------------------


class FuzzReport:
    def __init__(self, statement: int, config: dict, trials: int, found: int, skipped: int, counterexamples: list, seed: int):
        self.statement = statement
        self.config = config
        self.trials = trials
        self.found = found
        self.skipped = skipped
        self.counterexamples = counterexamples
        self.seed = seed

    def to_json(self) -> dict:
        return {
            "localg_schema": 1,
            "report": "conjecture-fuzz",
            "statement": self.statement,
            "config": self.config,
            "trials": self.trials,
            "found": self.found,
            "skipped": self.skipped,
            "counterexamples": [c.to_json() for c in self.counterexamples],
            "seed": self.seed,
        }


def _instance_certificate(inst: ConjInstance) -> Certificate:
    prob = inst.problem
    F = prob.field
    fmt = F.format_scalar
    data = {
        "statement": inst.statement,
        "params": inst.params,
        "x": [fmt(c) for c in inst.x],
        "y": [fmt(c) for c in inst.y],
        "z": [fmt(c) for c in inst.z],
        "w": [fmt(c) for c in inst.w],
        "support_cap": inst.support_cap,
        "trial_seed": inst.seed,
    }
    return Certificate("conjecture_counterexample", inst.space.to_json(), data)


def fuzz(statement: int, config: dict) -> FuzzReport:
    """Run independent seeded trials; re-verify any counterexample by replay
    before reporting it."""
    trials = int(config.get("trials", 100))
    seed = int(config.get("seed", 0))
    p = int(config.get("p", 2))
    dim = int(config.get("dim", 2))
    cap = int(config.get("cap", 6))
    found = 0
    skipped = 0
    certs = []
    for t in range(trials):
        trial_seed = seed * SEED_STRIDE + t
        try:
            inst = sample_instance(statement, p, dim, cap, trial_seed)
        except SampleSkipped:
            skipped += 1
            continue
        if not inst.hypothesis_holds():
            skipped += 1
            continue
        res = witness_search(inst)
        if res.status == "found":
            found += 1
        else:
            cert = _instance_certificate(inst)
            if not cert.replay():
                raise RuntimeError("counterexample failed its own replay")
            certs.append(cert)
    return FuzzReport(statement, {"p": p, "dim": dim, "cap": cap, "trials": trials}, trials, found, skipped, certs, seed)


def replay_counterexample(space: LocalitySpace, data: dict) -> bool:
    """Independent re-verification: rebuild the problem from the inputs,
    confirm the hypothesis, and exhaust the correcting-shift search."""
    statement = int(data["statement"])
    prob = _cached_problem(statement, space, data["params"])
    F = prob.field
    x = vec(F, data["x"])
    y = vec(F, data["y"])
    z = vec(F, data["z"])
    w = vec(F, data["w"])
    if not prob.relators.contains(w):
        return False
    if not prob.elements_related(x, y):
        return False
    if not prob.elements_related(vadd(F, x, w), z):
        return False
    # exhaustive search, independent of the span argument, when affordable
    if F.p ** prob.relators.rank <= 4096:
        for wp in prob.relators.vectors():
            cand = vadd(F, x, wp)
            if prob.elements_related(cand, y) and prob.elements_related(cand, z):
                return False
        return True
    targets = prob.support(y) + prob.support(z)
    return _solve_in_support(prob, prob.admissible(targets), x) is None
