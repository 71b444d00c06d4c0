"""Invariant theory for finite rational matrix groups: generators of the
invariant ring (the Hilbert map), the relation ideal among them, subduction
(rewriting an invariant in the generators), and generators of the module of
invariant vector fields.

The subduction backbone is the tagged ideal < y_j - sigma_j(x) > in a block
elimination order with the x block first: the normal form of an invariant
polynomial against it contains no x variable, and reading off the y part
rewrites the invariant through the generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from .algebra import (
    GREVLEX,
    BlockOrder,
    PolyRing,
    Polynomial,
    embed,
    restrict,
)
from .groebner import GroebnerBasis, buchberger, eliminate, normal_form
from .group_action import (
    FiniteMatrixGroup,
    PolyVectorField,
    is_invariant,
    reynolds,
)
from . import linalg


def ambient_ring(n: int) -> PolyRing:
    """The standard source ring in x1..xn."""
    return PolyRing.ambient(n)


def _monomials_of_degree(ring: PolyRing, degree: int) -> list[Polynomial]:
    """All monomials of the given total degree, grevlex-descending."""
    n = ring.nvars
    seen = []
    for combo in combinations_with_replacement(range(n), degree):
        exps = [0] * n
        for i in combo:
            exps[i] += 1
        seen.append(tuple(exps))
    seen.sort(key=GREVLEX.key, reverse=True)
    return [ring.monomial(e) for e in seen]


def _primitive_poly(p: Polynomial) -> Polynomial:
    return p.primitive()


# ---------------------------------------------------------------------------
# Hilbert map
# ---------------------------------------------------------------------------

class HilbertMap:
    """A generating set sigma_1..sigma_l of the invariant ring, with the
    tagged Groebner basis that powers subduction.

    The y alphabet doubles as coordinates of the orbit space model: the image
    of x -> (sigma_1(x), ..., sigma_l(x)) carries the quotient structure.
    """

    __slots__ = ("group", "sigma", "ring", "orbit_ring", "combined_ring", "tag_basis")

    def __init__(self, group, sigma, ring, orbit_ring, combined_ring, tag_basis):
        self.group = group
        self.sigma = sigma
        self.ring = ring
        self.orbit_ring = orbit_ring
        self.combined_ring = combined_ring
        self.tag_basis = tag_basis

    @staticmethod
    def from_polynomials(
        group: FiniteMatrixGroup,
        polys,
        check: bool = True,
    ) -> "HilbertMap":
        """Assemble a Hilbert map from explicitly chosen generators, kept in
        the given order.  Invariance and minimality are verified unless
        ``check`` is disabled (internal callers only)."""
        sigma = tuple(polys)
        if not sigma:
            raise ValueError("a Hilbert map needs at least one generator")
        ring = sigma[0].ring
        if ring.nvars != group.n:
            raise ValueError("generator ring dimension differs from the group")
        if check:
            for p in sigma:
                if not is_invariant(p, group):
                    raise ValueError(f"not invariant: {p}")
        hmap = _assemble(group, sigma, ring)
        if check:
            for j in range(len(sigma)):
                rest = sigma[:j] + sigma[j + 1 :]
                if rest and _subalgebra_rewrite(sigma[j], _assemble(group, rest, ring)) is not None:
                    raise ValueError(
                        f"generator {sigma[j]} is a polynomial in the others"
                    )
                if not rest and sigma[j].degree() < 1:
                    raise ValueError("constant generator")
        return hmap

    def substitute_into(self, q: Polynomial) -> Polynomial:
        """Evaluate a y-polynomial on the generators: q(sigma_1, ..., sigma_l)."""
        if q.ring != self.orbit_ring:
            raise ValueError("argument must live in the orbit ring")
        return q.substitute(list(self.sigma))

    def __len__(self):
        return len(self.sigma)


def _assemble(group, sigma, ring) -> HilbertMap:
    n = ring.nvars
    orbit_ring = PolyRing.orbit(len(sigma))
    if set(orbit_ring.names) & set(ring.names):
        raise ValueError("ambient variable names collide with the orbit alphabet")
    combined = PolyRing(ring.names + orbit_ring.names)
    gens = []
    for j, s in enumerate(sigma):
        gens.append(combined.variable(n + j) - embed(s, combined, 0))
    tag_basis = buchberger(gens, BlockOrder(n))
    return HilbertMap(group, sigma, ring, orbit_ring, combined, tag_basis)


def _subalgebra_rewrite(p: Polynomial, hmap: HilbertMap) -> Polynomial | None:
    """The y-polynomial rewriting p through the generators, or None if p is
    not in the subalgebra they generate."""
    n = hmap.ring.nvars
    nf = normal_form(embed(p, hmap.combined_ring, 0), hmap.tag_basis)
    if any(any(e[:n]) for e in nf.terms):
        return None
    return restrict(nf, hmap.orbit_ring, n)


def subduct(p: Polynomial, hmap: HilbertMap) -> Polynomial:
    """Rewrite an invariant polynomial as a polynomial in the generators.

    The result q satisfies q(sigma) = p exactly; it is the canonical normal
    form against the tagged basis, so equal inputs give equal outputs.
    """
    if p.ring != hmap.ring:
        raise ValueError("polynomial lives in the wrong ring")
    if reynolds(p, hmap.group) != p:
        raise ValueError("not invariant")
    q = _subalgebra_rewrite(p, hmap)
    if q is None:
        raise ValueError("not in subalgebra generated by the Hilbert map")
    return q


def invariant_generators(
    group: FiniteMatrixGroup, degree_bound: int | None = None
) -> HilbertMap:
    """Generators of the invariant ring by degreewise Reynolds averaging.

    The default bound |G| is complete in characteristic zero (Noether).
    Output order is canonical: ascending degree, then descending grevlex
    leading monomial within a degree.
    """
    bound = group.order if degree_bound is None else degree_bound
    if bound < 1:
        raise ValueError("degree bound must be positive")
    ring = ambient_ring(group.n)
    sigma: list[Polynomial] = []
    hmap: HilbertMap | None = None
    for degree in range(1, bound + 1):
        for mono in _monomials_of_degree(ring, degree):
            candidate = reynolds(mono, group)
            if candidate.is_zero():
                continue
            if hmap is not None and _subalgebra_rewrite(candidate, hmap) is not None:
                continue
            sigma.append(_primitive_poly(candidate))
            hmap = _assemble(group, tuple(sigma), ring)
    if hmap is None:
        raise ValueError("no invariants found up to the degree bound")
    sigma.sort(key=lambda p: (p.degree(), GREVLEX.key(p.leading(GREVLEX)[0])))
    ordered = []
    by_degree: dict[int, list[Polynomial]] = {}
    for p in sigma:
        by_degree.setdefault(p.degree(), []).append(p)
    for degree in sorted(by_degree):
        block = by_degree[degree]
        block.sort(key=lambda p: GREVLEX.key(p.leading(GREVLEX)[0]), reverse=True)
        ordered.extend(block)
    return HilbertMap.from_polynomials(group, ordered)


# ---------------------------------------------------------------------------
# relation ideal
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RelationIdeal:
    """All polynomial relations among the Hilbert map generators; the orbit
    space model is its zero set.  ``basis`` is the reduced Groebner basis
    over the orbit ring, so ``normal`` canonically represents classes."""

    basis: GroebnerBasis

    def normal(self, p: Polynomial) -> Polynomial:
        return normal_form(p, self.basis)

    def is_member(self, p: Polynomial) -> bool:
        return self.normal(p).is_zero()

    def is_zero_ideal(self) -> bool:
        return not self.basis.generators


def relations(hmap: HilbertMap) -> RelationIdeal:
    """Eliminate the x block from the tagged ideal; every output vanishes
    identically under substitution of the generators."""
    n = hmap.ring.nvars
    gens = list(hmap.tag_basis.generators)
    basis = eliminate(gens, n)
    for g in basis.generators:
        if not hmap.substitute_into(g).is_zero():
            raise AssertionError("internal error: relation fails under substitution")
    return RelationIdeal(basis)


# ---------------------------------------------------------------------------
# invariant vector fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EquivariantModule:
    """A minimal generating set for the module of invariant polynomial
    vector fields over the invariant ring."""

    generators: tuple[PolyVectorField, ...]

    def __len__(self):
        return len(self.generators)

    @property
    def ring(self) -> PolyRing:
        return self.generators[0].ring

    @staticmethod
    def from_fields(group: FiniteMatrixGroup, fields, check: bool = True) -> "EquivariantModule":
        fields = tuple(fields)
        if not fields:
            raise ValueError("empty generating set")
        if check:
            for X in fields:
                if not is_invariant(X, group):
                    raise ValueError(f"not invariant: {X}")
            for j, X in enumerate(fields):
                rest = fields[:j] + fields[j + 1 :]
                if rest and invariant_combination(X, rest, group) is not None:
                    raise ValueError(f"generator {X} is a combination of the others")
        return EquivariantModule(fields)


def invariant_basis(group: FiniteMatrixGroup, ring: PolyRing, degree: int) -> list[Polynomial]:
    """A deterministic linear basis of the invariant polynomials of one
    degree (Reynolds averages of monomials, row reduced)."""
    if degree == 0:
        return [ring.one()]
    monos = _monomials_of_degree(ring, degree)
    coords = sorted({e for m in monos for e in m.terms}, key=GREVLEX.key, reverse=True)
    index = {e: i for i, e in enumerate(coords)}
    rows = []
    for m in monos:
        avg = reynolds(m, group)
        if avg.is_zero():
            continue
        row = [Fraction(0)] * len(coords)
        for e, c in avg.terms.items():
            row[index[e]] = c
        rows.append(row)
    if not rows:
        return []
    reduced, pivots = linalg.echelon(rows)
    basis = []
    for r in reduced[: len(pivots)]:
        terms = {coords[i]: c for i, c in enumerate(r) if c}
        basis.append(Polynomial(ring, terms).primitive())
    return basis


def invariant_combination(
    target: PolyVectorField,
    fields,
    group: FiniteMatrixGroup,
    degree_bound: int | None = None,
) -> list[Polynomial] | None:
    """Express ``target`` as sum h_j * fields_j with each h_j invariant, or
    return None.  Coefficient degrees are searched up to deg(target) (or the
    explicit bound): relations among homogeneous fields are homogeneous, and
    the callers pass homogeneous data."""
    ring = target.ring
    target_degree = max((c.degree() for c in target.components), default=-1)
    if target_degree < 0:
        return [ring.zero() for _ in fields]
    bound = target_degree if degree_bound is None else degree_bound
    columns: list[tuple[int, Polynomial]] = []  # (field index, invariant h)
    for j, X in enumerate(fields):
        for m in range(0, bound + 1):
            for h in invariant_basis(group, ring, m):
                columns.append((j, h))
    if not columns:
        return None
    coords: set = set()
    candidates = []
    for j, h in columns:
        moved = [h * c for c in fields[j].components]
        candidates.append(moved)
        for comp_index, comp in enumerate(moved):
            coords.update((comp_index, e) for e in comp.terms)
    for comp_index, comp in enumerate(target.components):
        coords.update((comp_index, e) for e in comp.terms)
    coord_list = sorted(coords)
    pos = {c: i for i, c in enumerate(coord_list)}
    matrix = [[Fraction(0)] * len(columns) for _ in coord_list]
    for col, moved in enumerate(candidates):
        for comp_index, comp in enumerate(moved):
            for e, c in comp.terms.items():
                matrix[pos[(comp_index, e)]][col] = c
    rhs = [Fraction(0)] * len(coord_list)
    for comp_index, comp in enumerate(target.components):
        for e, c in comp.terms.items():
            rhs[pos[(comp_index, e)]] = c
    solution = linalg.solve(matrix, rhs)
    if solution is None:
        return None
    out = [ring.zero() for _ in fields]
    for (j, h), z in zip(columns, solution):
        if z:
            out[j] = out[j] + h.scale(z)
    return out


def _primitive_field(X: PolyVectorField) -> PolyVectorField:
    from math import gcd, lcm

    coeffs = [c for comp in X.components for c in comp.terms.values()]
    if not coeffs:
        return X
    den = lcm(*(c.denominator for c in coeffs))
    num = gcd(*(abs(c.numerator) for c in coeffs))
    scaled = X * Fraction(den, num)
    for comp in scaled.components:
        if not comp.is_zero():
            if comp.leading(GREVLEX)[1] < 0:
                scaled = scaled * Fraction(-1)
            break
    return scaled


def equivariant_generators(
    group: FiniteMatrixGroup, degree_bound: int | None = None
) -> EquivariantModule:
    """Generators of the invariant vector fields by degreewise averaging of
    monomial fields, with redundant candidates dropped by the invariant
    coefficient ansatz.

    The default bound |G| matches the invariant-ring bound; completeness at
    the bound is exercised by a one-degree-beyond check in the test suite.
    """
    bound = group.order if degree_bound is None else degree_bound
    ring = ambient_ring(group.n)
    kept: list[PolyVectorField] = []
    for degree in range(0, bound + 1):
        monos = _monomials_of_degree(ring, degree)
        for mono in monos:
            for i in range(ring.nvars):
                components = [ring.zero()] * ring.nvars
                components[i] = mono
                candidate = reynolds(PolyVectorField(ring, components), group)
                if candidate.is_zero():
                    continue
                if kept and invariant_combination(candidate, tuple(kept), group) is not None:
                    continue
                kept.append(_primitive_field(candidate))
    if not kept:
        raise ValueError("no invariant fields found up to the degree bound")
    return EquivariantModule.from_fields(group, tuple(kept), check=True)
