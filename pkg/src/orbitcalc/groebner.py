"""Buchberger-based ideal and module computations.

Scalar layer: reduced Groebner bases (sugar selection strategy, product and
chain criteria), normal forms, and elimination ideals.

Module layer: rank-r vectors are encoded with r position-tag variables in a
block order that dominates the scalar order (position over term), and the tag
products e_i*e_j are adjoined so the scalar engine runs unchanged.  Submodule
membership returns explicit witnesses (representations are tracked through
the whole computation) and syzygy generating sets come from the classical
S-pair lifting on the final basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .algebra import (
    GREVLEX,
    BlockOrder,
    MonomialOrder,
    PolyRing,
    Polynomial,
    embed,
    mono_degree,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
    restrict,
)

CancelCheck = Callable[[], bool]


class ComputationCancelled(RuntimeError):
    """Raised when a caller-supplied cancellation token fires mid-computation."""


def _poll(cancel: CancelCheck | None):
    if cancel is not None and cancel():
        raise ComputationCancelled("computation cancelled by caller")


# ---------------------------------------------------------------------------
# division
# ---------------------------------------------------------------------------

def divide(
    p: Polynomial,
    divisors: Sequence[Polynomial],
    order: MonomialOrder,
    divisor_order: Sequence[int] | None = None,
) -> tuple[Polynomial, list[Polynomial]]:
    """Full multivariate division: ``p = sum(q_i * divisors_i) + remainder``.

    No remainder term is divisible by any divisor's leading monomial.  The
    divisor preference defaults to list order; ``divisor_order`` permutes it
    (used by the confluence property test — the remainder must not depend on
    the strategy once the divisors form a Groebner basis).
    """
    ring = p.ring
    preference = list(divisor_order) if divisor_order is not None else list(range(len(divisors)))
    leads = []
    for i in preference:
        d = divisors[i]
        if d.is_zero():
            continue
        lm, lc = d.leading(order)
        leads.append((i, d, lm, lc))
    quotients = [ring.zero() for _ in divisors]
    remainder_terms: dict = {}
    work = dict(p.terms)
    while work:
        exps = max(work, key=order.key)
        coeff = work.pop(exps)
        for i, d, lm, lc in leads:
            if mono_divides(lm, exps):
                factor_exps = mono_div(exps, lm)
                factor_coeff = coeff / lc
                quotients[i] = quotients[i] + ring.monomial(factor_exps, factor_coeff)
                shifted = d.mul_monomial(factor_exps, factor_coeff)
                for e, c in shifted.terms.items():
                    if e == exps:
                        continue
                    new = work.get(e, Fraction(0)) - c
                    if new:
                        work[e] = new
                    else:
                        work.pop(e, None)
                break
        else:
            remainder_terms[exps] = coeff
    return Polynomial(ring, remainder_terms), quotients


# ---------------------------------------------------------------------------
# Buchberger with sugar strategy, product + chain criteria, and optional
# representation tracking (every basis element as a combination of the inputs)
# ---------------------------------------------------------------------------

@dataclass
class _Tracked:
    poly: Polynomial
    rep: list[Polynomial]  # poly == sum(rep[j] * original[j])
    sugar: int


def _scale_tracked(t: _Tracked, c: Fraction) -> _Tracked:
    return _Tracked(t.poly.scale(c), [r.scale(c) for r in t.rep], t.sugar)


def _buchberger_tracked(
    gens: Sequence[Polynomial],
    order: MonomialOrder,
    cancel: CancelCheck | None = None,
) -> list[_Tracked]:
    """Reduced Groebner basis with representations over ``gens``.

    Output elements are monic, pairwise interreduced, and sorted by leading
    monomial (descending) so results are byte-reproducible.
    """
    ring = gens[0].ring if gens else None
    basis: list[_Tracked] = []
    for j, g in enumerate(gens):
        if g.is_zero():
            continue  # zero generators are dropped silently
        rep = [g.ring.zero() for _ in gens]
        rep[j] = g.ring.one()
        basis.append(_Tracked(g, rep, g.degree()))
    if not basis:
        return []
    ring = basis[0].poly.ring

    def lead(i: int):
        return basis[i].poly.leading(order)[0]

    pairs: set[tuple[int, int]] = {
        (i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))
    }

    def pair_sort_key(pair: tuple[int, int]):
        i, j = pair
        lcm = mono_lcm(lead(i), lead(j))
        sugar = max(
            basis[i].sugar + mono_degree(mono_div(lcm, lead(i))),
            basis[j].sugar + mono_degree(mono_div(lcm, lead(j))),
        )
        return (sugar, order.key(lcm), i, j)

    while pairs:
        _poll(cancel)
        i, j = min(pairs, key=pair_sort_key)
        pairs.discard((i, j))
        li, lj = lead(i), lead(j)
        lcm = mono_lcm(li, lj)
        # product criterion: coprime leading monomials reduce to zero
        if lcm == mono_mul(li, lj):
            continue
        # chain criterion: some k divides the lcm and both mixed pairs are done
        skip = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if mono_divides(lead(k), lcm):
                pik = (min(i, k), max(i, k))
                pjk = (min(j, k), max(j, k))
                if pik not in pairs and pjk not in pairs:
                    skip = True
                    break
        if skip:
            continue
        fi, fj = basis[i], basis[j]
        ci = fi.poly.leading(order)[1]
        cj = fj.poly.leading(order)[1]
        ui, uj = mono_div(lcm, li), mono_div(lcm, lj)
        s_poly = fi.poly.mul_monomial(ui, Fraction(1) / ci) - fj.poly.mul_monomial(
            uj, Fraction(1) / cj
        )
        s_sugar = max(fi.sugar + mono_degree(ui), fj.sugar + mono_degree(uj))
        remainder, quotients = divide(s_poly, [t.poly for t in basis], order)
        if remainder.is_zero():
            continue
        rep = [
            fi.rep[m].mul_monomial(ui, Fraction(1) / ci)
            - fj.rep[m].mul_monomial(uj, Fraction(1) / cj)
            for m in range(len(gens))
        ]
        for k, q in enumerate(quotients):
            if q.is_zero():
                continue
            rep = [r - q * basis[k].rep[m] for m, r in enumerate(rep)]
        new_index = len(basis)
        basis.append(_Tracked(remainder, rep, max(s_sugar, remainder.degree())))
        pairs.update((k, new_index) for k in range(new_index))

    return _reduce_tracked(basis, order, len(gens))


def _reduce_tracked(
    basis: list[_Tracked], order: MonomialOrder, ngens: int
) -> list[_Tracked]:
    # minimal: drop elements whose leading monomial another's divides
    kept: list[_Tracked] = []
    leads = [t.poly.leading(order)[0] for t in basis]
    for idx, t in enumerate(basis):
        lm = leads[idx]
        redundant = False
        for jdx, other in enumerate(basis):
            if jdx == idx:
                continue
            lo = leads[jdx]
            if mono_divides(lo, lm) and (lo != lm or jdx < idx):
                redundant = True
                break
        if not redundant:
            kept.append(t)
    # interreduce tails and normalize monic
    reduced: list[_Tracked] = []
    for idx, t in enumerate(kept):
        others = [u.poly for k, u in enumerate(kept) if k != idx]
        remainder, quotients = divide(t.poly, others, order)
        rep = list(t.rep)
        qi = 0
        for k, u in enumerate(kept):
            if k == idx:
                continue
            q = quotients[qi]
            qi += 1
            if not q.is_zero():
                rep = [r - q * u.rep[m] for m, r in enumerate(rep)]
        lc = remainder.leading(order)[1]
        reduced.append(
            _scale_tracked(_Tracked(remainder, rep, t.sugar), Fraction(1) / lc)
        )
    reduced.sort(key=lambda t: order.key(t.poly.leading(order)[0]), reverse=True)
    return reduced


# ---------------------------------------------------------------------------
# public scalar API
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced Groebner basis together with its monomial order."""

    generators: tuple[Polynomial, ...]
    order: MonomialOrder
    reduced: bool = True

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)


def buchberger(
    gens: Sequence[Polynomial],
    order: MonomialOrder = GREVLEX,
    cancel: CancelCheck | None = None,
) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    Idempotent: running it on its own output returns the same basis.  Long
    computations poll ``cancel`` once per S-pair and raise
    :class:`ComputationCancelled` when it returns True.
    """
    rings = {g.ring for g in gens}
    if len(rings) > 1:
        raise ValueError("incompatible rings among generators")
    tracked = _buchberger_tracked(gens, order, cancel)
    return GroebnerBasis(tuple(t.poly for t in tracked), order, True)


def normal_form(
    p: Polynomial,
    gb: GroebnerBasis,
    divisor_order: Sequence[int] | None = None,
) -> Polynomial:
    """Remainder of full division by the basis: the canonical representative
    of ``p`` modulo the ideal.  Zero iff ``p`` is an ideal member."""
    if not gb.generators:
        return p
    if p.ring != gb.generators[0].ring:
        raise ValueError("incompatible rings")
    remainder, _ = divide(p, gb.generators, gb.order, divisor_order)
    return remainder


def eliminate(
    gens: Sequence[Polynomial],
    drop: int,
    cancel: CancelCheck | None = None,
) -> GroebnerBasis:
    """Intersect the ideal with the subring omitting the first ``drop``
    variables (block-elimination order, dropped block first).

    Input polynomials live in the combined alphabet; the output basis lives
    in the ring of the kept trailing variables.
    """
    if not gens:
        return GroebnerBasis((), GREVLEX, True)
    combined = gens[0].ring
    keep_ring = PolyRing(combined.names[drop:])
    block_gb = buchberger(gens, BlockOrder(drop), cancel)
    kept = []
    for g in block_gb.generators:
        if all(not any(e[:drop]) for e in g.terms):
            kept.append(restrict(g, keep_ring, drop))
    # the kept elements form a Groebner basis for the induced order; rerun to
    # present the unique reduced basis in the plain grevlex order of the
    # smaller ring
    return buchberger(kept, GREVLEX, cancel)


# ---------------------------------------------------------------------------
# module layer
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubmoduleProblem:
    """Membership problem: is a vector in the span of ``columns`` over the
    scalar ring, modulo componentwise multiples of ``ideal``?

    Tag columns ``e_i * g`` for every ideal generator are adjoined
    automatically, so membership is tested modulo the ideal.
    """

    ambient_rank: int
    columns: tuple[tuple[Polynomial, ...], ...]
    ideal: GroebnerBasis

    def __post_init__(self):
        for col in self.columns:
            if len(col) != self.ambient_rank:
                raise ValueError("column length differs from ambient rank")


@dataclass(frozen=True)
class ModuleMembership:
    """Outcome of :func:`module_solve`: a verified witness or a certificate."""

    member: bool
    witness: tuple[Polynomial, ...] | None = None
    certificate: tuple[Polynomial, ...] | None = None


class _ModuleCodec:
    """Vectors of length r over the scalar ring <-> tag-variable polynomials."""

    def __init__(self, rank: int, scalar_ring: PolyRing):
        self.rank = rank
        self.scalar_ring = scalar_ring
        tags = tuple(f"_e{i + 1}" for i in range(rank))
        self.ring = PolyRing(tags + scalar_ring.names)
        self.order = BlockOrder(rank)

    def encode(self, vector: Sequence[Polynomial]) -> Polynomial:
        if len(vector) != self.rank:
            raise ValueError("vector length differs from ambient rank")
        total = self.ring.zero()
        for i, component in enumerate(vector):
            tag = self.ring.variable(i)
            total = total + tag * embed(component, self.ring, self.rank)
        return total

    def decode(self, p: Polynomial) -> tuple[Polynomial, ...]:
        components = [dict() for _ in range(self.rank)]
        for exps, coeff in p.terms.items():
            head = exps[: self.rank]
            if sum(head) != 1:
                raise ValueError("polynomial is not a tag-linear vector encoding")
            i = head.index(1)
            components[i][exps[self.rank :]] = coeff
        return tuple(Polynomial(self.scalar_ring, c) for c in components)

    def scalar_part(self, p: Polynomial) -> Polynomial:
        """The tag-free component, restricted to the scalar ring."""
        terms = {
            exps[self.rank :]: coeff
            for exps, coeff in p.terms.items()
            if not any(exps[: self.rank])
        }
        return Polynomial(self.scalar_ring, terms)

    def tag_products(self) -> list[Polynomial]:
        out = []
        for i in range(self.rank):
            for j in range(i, self.rank):
                out.append(self.ring.variable(i) * self.ring.variable(j))
        return out

    def padding(self, ideal: GroebnerBasis) -> list[Polynomial]:
        pads = []
        for g in ideal.generators:
            lifted = embed(g, self.ring, self.rank)
            for i in range(self.rank):
                pads.append(self.ring.variable(i) * lifted)
        return pads


def _scalar_ring_of(problem: SubmoduleProblem) -> PolyRing:
    if problem.columns:
        return problem.columns[0][0].ring
    if problem.ideal.generators:
        return problem.ideal.generators[0].ring
    raise ValueError("cannot infer scalar ring from an empty problem")


def module_solve(
    target: Sequence[Polynomial],
    problem: SubmoduleProblem,
    cancel: CancelCheck | None = None,
) -> ModuleMembership:
    """Decide membership of ``target`` in the column span modulo the ideal.

    On success the witness lists one coefficient polynomial per column and is
    verified by substitution before being returned; on failure the nonzero
    module normal form is the certificate.
    """
    if len(target) != problem.ambient_rank:
        raise ValueError("target length differs from ambient rank")
    codec = _ModuleCodec(problem.ambient_rank, _scalar_ring_of(problem))
    columns = [codec.encode(col) for col in problem.columns]
    pads = codec.padding(problem.ideal)
    tags = codec.tag_products()
    gens = columns + pads + tags
    tracked = _buchberger_tracked(gens, codec.order, cancel)
    remainder, quotients = divide(
        codec.encode(target), [t.poly for t in tracked], codec.order
    )
    if not remainder.is_zero():
        return ModuleMembership(member=False, certificate=codec.decode(remainder))
    witness = []
    for j in range(len(problem.columns)):
        coeff = codec.ring.zero()
        for q, t in zip(quotients, tracked):
            if not q.is_zero() and not t.rep[j].is_zero():
                coeff = coeff + q * t.rep[j]
        witness.append(codec.scalar_part(coeff))
    _verify_witness(target, problem, witness)
    return ModuleMembership(member=True, witness=tuple(witness))


def _verify_witness(
    target: Sequence[Polynomial],
    problem: SubmoduleProblem,
    witness: Sequence[Polynomial],
):
    for row in range(problem.ambient_rank):
        acc = target[row].ring.zero()
        for w, col in zip(witness, problem.columns):
            acc = acc + w * col[row]
        if not normal_form(acc - target[row], problem.ideal).is_zero():
            raise AssertionError(
                "internal error: module witness failed verification"
            )


def syzygies(
    columns: Sequence[Sequence[Polynomial]],
    ideal: GroebnerBasis,
    cancel: CancelCheck | None = None,
) -> list[tuple[Polynomial, ...]]:
    """Generating set of the relations ``sum(c_i * columns_i) = 0 mod ideal``.

    Output rows are primitive-integer rescaled, deduplicated, sorted, and each
    verified exactly by componentwise normal form against the ideal.
    """
    if not columns:
        return []
    rank = len(columns[0])
    scalar_ring = columns[0][0].ring
    codec = _ModuleCodec(rank, scalar_ring)
    encoded = [codec.encode(col) for col in columns]
    gens = encoded + codec.padding(ideal) + codec.tag_products()
    tracked = _buchberger_tracked(gens, codec.order, cancel)
    basis = [t.poly for t in tracked]
    order = codec.order
    n_cols = len(columns)

    rows: list[list[Polynomial]] = []

    def row_from_basis_combo(combo: list[Polynomial]):
        """Translate a relation over the basis into one over the columns."""
        out = [codec.ring.zero() for _ in range(n_cols)]
        for z, t in zip(combo, tracked):
            if z.is_zero():
                continue
            for j in range(n_cols):
                if not t.rep[j].is_zero():
                    out[j] = out[j] + z * t.rep[j]
        rows.append(out)

    # S-pair (Schreyer) relations on the final basis — every pair, no criteria
    for a in range(len(basis)):
        for b in range(a + 1, len(basis)):
            _poll(cancel)
            la = basis[a].leading(order)[0]
            lb = basis[b].leading(order)[0]
            lcm = mono_lcm(la, lb)
            ua, ub = mono_div(lcm, la), mono_div(lcm, lb)
            s_poly = basis[a].mul_monomial(ua) - basis[b].mul_monomial(ub)
            remainder, quotients = divide(s_poly, basis, order)
            if not remainder.is_zero():
                raise AssertionError("internal error: basis is not a Groebner basis")
            combo = [q.scale(-1) for q in quotients]
            combo[a] = combo[a] + codec.ring.monomial(ua)
            combo[b] = combo[b] - codec.ring.monomial(ub)
            row_from_basis_combo(combo)

    # completion rows: each generator minus its own expression through the
    # basis (all generators — the padding and tag rows also project onto
    # column coefficients)
    for j, g in enumerate(gens):
        _poll(cancel)
        remainder, quotients = divide(g, basis, order)
        if not remainder.is_zero():
            raise AssertionError("internal error: generator escaped its own ideal")
        out = [codec.ring.zero() for _ in range(n_cols)]
        if j < n_cols:
            out[j] = codec.ring.one()
        for q, t in zip(quotients, tracked):
            if q.is_zero():
                continue
            for m in range(n_cols):
                if not t.rep[m].is_zero():
                    out[m] = out[m] - q * t.rep[m]
        rows.append(out)

    # project to the scalar ring, normalize, dedupe, verify
    seen: set[tuple] = set()
    results: list[tuple[Polynomial, ...]] = []
    for row in rows:
        projected = [codec.scalar_part(c) for c in row]
        if all(p.is_zero() for p in projected):
            continue
        projected = _primitive_row(projected)
        key = tuple(frozenset(p.terms.items()) for p in projected)
        if key in seen:
            continue
        seen.add(key)
        for r in range(rank):
            acc = scalar_ring.zero()
            for c, col in zip(projected, columns):
                acc = acc + c * col[r]
            if not normal_form(acc, ideal).is_zero():
                raise AssertionError("internal error: syzygy failed verification")
        results.append(tuple(projected))
    results.sort(key=lambda row: tuple(str(p) for p in row))
    return results


def _primitive_row(row: list[Polynomial]) -> list[Polynomial]:
    from math import gcd, lcm

    coeffs = [c for p in row for c in p.terms.values()]
    if not coeffs:
        return row
    den = lcm(*(c.denominator for c in coeffs))
    num = gcd(*(abs(c.numerator) for c in coeffs))
    scale = Fraction(den, num)
    row = [p.scale(scale) for p in row]
    for p in row:
        if p.terms:
            lead_coeff = p.leading(GREVLEX)[1]
            if lead_coeff < 0:
                row = [q.scale(-1) for q in row]
            break
    return row
