"""Shared builders for the test suite.

Everything random is driven by an explicit ``random.Random`` so each suite is
reproducible from its stated seed.  The heavyweight randomized property
suites live here as plain functions; the acceptance gate runs them at full
trial counts and the module tests reuse the builders.
"""

from fractions import Fraction

import pytest

from orbitcalc.algebra import PolyRing, Polynomial
from orbitcalc.exterior import d, homotopy, wedge
from orbitcalc.group_action import (
    PolyDiffForm,
    PolyVectorField,
    act_form,
    act_poly,
    act_vf,
    closure,
    is_invariant,
    mat_mul,
    reynolds,
)
from orbitcalc.quotient import (
    OrbitSpace,
    OrbitVectorField,
    orbit_bracket,
    orbit_d,
    push_form,
    push_vf,
)
from orbitcalc.verify import canonical_one_forms, reflection_context


# ---------------------------------------------------------------------------
# random object builders
# ---------------------------------------------------------------------------

def random_poly(rng, ring, max_degree=3, max_terms=3, nonzero=False):
    terms = {}
    count = rng.randint(1 if nonzero else 0, max_terms)
    for _ in range(count):
        exps = [0] * ring.nvars
        for _ in range(rng.randint(0, max_degree)):
            exps[rng.randrange(ring.nvars)] += 1
        coeff = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        key = tuple(exps)
        terms[key] = terms.get(key, Fraction(0)) + coeff
    p = ring.from_terms({e: c for e, c in terms.items() if c})
    if nonzero and p.is_zero():
        return ring.one()
    return p


def random_vf(rng, ring, max_degree=3, max_terms=2):
    return PolyVectorField(
        ring,
        [random_poly(rng, ring, max_degree, max_terms) for _ in range(ring.nvars)],
    )


def random_form(rng, ring, degree, max_degree=3, max_terms=2):
    """Random form of the given degree; degree 0 is a bare polynomial."""
    if degree == 0:
        return random_poly(rng, ring, max_degree, max_terms)
    n = ring.nvars
    items = []
    for _ in range(rng.randint(0, 3)):
        indices = tuple(sorted(rng.sample(range(n), degree)))
        items.append((indices, random_poly(rng, ring, max_degree, max_terms)))
    return PolyDiffForm(ring, degree, items)


# ---------------------------------------------------------------------------
# linear-algebra views of polynomials (independent membership oracles)
# ---------------------------------------------------------------------------

def monomials_up_to(ring, degree):
    out = [(0,) * ring.nvars]
    frontier = list(out)
    for _ in range(degree):
        new = []
        for exps in frontier:
            for i in range(ring.nvars):
                bumped = tuple(e + (1 if j == i else 0) for j, e in enumerate(exps))
                if bumped not in new:
                    new.append(bumped)
        frontier = new
        out.extend(e for e in new if e not in out)
    return out


def coefficient_vector(p, columns):
    return [p.coefficient(e) for e in columns]


# ---------------------------------------------------------------------------
# groups and spaces used across files
# ---------------------------------------------------------------------------

def make_reflection_group():
    return closure([[["-1", "0"], ["0", "-1"]]])


def make_swap_group():
    return closure([[["0", "1"], ["1", "0"]]])


def make_rotation4_group():
    return closure([[["0", "-1"], ["1", "0"]]])


@pytest.fixture(scope="session")
def golden_space() -> OrbitSpace:
    """The reflection example with the classical generator presentation."""
    return reflection_context()


@pytest.fixture(scope="session")
def golden_forms(golden_space):
    return canonical_one_forms(golden_space.hilbert.ring)


@pytest.fixture(scope="session")
def reflection():
    return make_reflection_group()


@pytest.fixture(scope="session")
def swap_group():
    return make_swap_group()


@pytest.fixture(scope="session")
def rotation4():
    return make_rotation4_group()


# ---------------------------------------------------------------------------
# randomized property suites (shared between module tests and acceptance)
# ---------------------------------------------------------------------------

def suite_d_squared(rng, trials):
    """d(d(omega)) = 0 across dimensions 2..4 and all form degrees."""
    for _ in range(trials):
        n = rng.randint(2, 4)
        ring = PolyRing.ambient(n)
        degree = rng.randint(0, n)
        omega = random_form(rng, ring, degree, max_degree=5)
        assert d(d(omega)).is_zero()


def suite_leibniz(rng, trials):
    """d(a ^ b) = da ^ b + (-1)^k a ^ db on random pairs."""
    for _ in range(trials):
        n = rng.randint(2, 3)
        ring = PolyRing.ambient(n)
        k = rng.randint(0, n - 1)
        h = rng.randint(0, n - k)
        a = random_form(rng, ring, k)
        b = random_form(rng, ring, h)
        left = d(wedge(a, b))
        right = wedge(d(a), b)
        signed = wedge(a, d(b))
        if k % 2:
            right = right - signed
        else:
            right = right + signed
        assert (left - right).is_zero()


def suite_reynolds(rng, trials, groups):
    """Idempotence and projection of the averaging operator."""
    for _ in range(trials):
        group = rng.choice(groups)
        ring = PolyRing.ambient(group.n)
        kind = rng.randrange(3)
        if kind == 0:
            obj = random_poly(rng, ring)
        elif kind == 1:
            obj = random_vf(rng, ring)
        else:
            obj = random_form(rng, ring, rng.randint(1, group.n))
        averaged = reynolds(obj, group)
        assert is_invariant(averaged, group)
        again = reynolds(averaged, group)
        assert (again - averaged).is_zero()


def suite_action_laws(rng, trials, groups):
    """act(g, act(h, o)) = act(g h, o) and the identity acts trivially."""
    for _ in range(trials):
        group = rng.choice(groups)
        ring = PolyRing.ambient(group.n)
        g = rng.choice(group.elements)
        h = rng.choice(group.elements)
        ident = group.elements[0]
        kind = rng.randrange(3)
        if kind == 0:
            obj, act = random_poly(rng, ring), act_poly
        elif kind == 1:
            obj, act = random_vf(rng, ring), act_vf
        else:
            obj, act = random_form(rng, ring, rng.randint(1, group.n)), act_form
        assert (act(g, act(h, obj)) - act(mat_mul(g, h), obj)).is_zero()
        assert (act(ident, obj) - obj).is_zero()


def suite_homotopy(rng, trials):
    """h(d omega) + d(h(omega)) = omega for k >= 1; = omega - omega(0) for k = 0."""
    for _ in range(trials):
        n = rng.randint(2, 3)
        ring = PolyRing.ambient(n)
        k = rng.randint(0, n)
        omega = random_form(rng, ring, k, max_degree=4)
        recovered = homotopy(d(omega))
        if k >= 1:
            recovered = recovered + d(homotopy(omega))
            assert (recovered - omega).is_zero()
        else:
            expected = omega - ring.constant(omega.constant_term())
            assert (recovered - expected).is_zero()


def random_tangent_field(rng, space, max_degree=1, max_terms=2) -> OrbitVectorField:
    """Random combination of the pushed generators; tangent by construction."""
    pushed = space.pushed_generators
    total = pushed[0] * random_poly(rng, space.orbit_ring, max_degree, max_terms)
    for Y in pushed[1:]:
        total = total + Y * random_poly(rng, space.orbit_ring, max_degree, max_terms)
    return total


def suite_jacobi(space, rng, trials):
    """Jacobi identity for the orbit bracket on random tangent triples."""
    for _ in range(trials):
        a = random_tangent_field(rng, space)
        b = random_tangent_field(rng, space)
        c = random_tangent_field(rng, space)
        total = orbit_bracket(a, orbit_bracket(b, c))
        total = total + orbit_bracket(b, orbit_bracket(c, a))
        total = total + orbit_bracket(c, orbit_bracket(a, b))
        assert total.is_zero()


def random_invariant_poly(rng, space, max_degree=2, max_terms=2) -> Polynomial:
    class_rep = random_poly(rng, space.orbit_ring, max_degree, max_terms)
    return space.hilbert.substitute_into(class_rep)


def suite_push_homomorphism(space, rng, trials):
    """push(f X) = class(f) push(X) and push(X + X') = push(X) + push(X')."""
    gens = space.module.generators
    for _ in range(trials):
        rep = random_poly(rng, space.orbit_ring, max_degree=2, max_terms=2)
        f = space.hilbert.substitute_into(rep)
        coeffs = [random_invariant_poly(rng, space, 1, 2) for _ in gens]
        X = PolyVectorField.zero(space.hilbert.ring)
        for c, gen in zip(coeffs, gens):
            X = X + c * gen
        other = rng.choice(gens)
        assert push_vf(f * X, space) == space.function(rep) * push_vf(X, space)
        assert push_vf(X + other, space) == push_vf(X, space) + push_vf(other, space)


def suite_push_d_commutation(space, forms):
    """push(d theta) equals the orbit derivative of push(theta)."""
    for theta in forms:
        pushed = push_form(theta, space)
        assert orbit_d(pushed) == push_form(d(theta), space)


def suite_orbit_d_squared(space, rng, trials):
    """The orbit exterior derivative squares to zero on random pushed 1-forms."""
    group = space.hilbert.group
    ring = space.hilbert.ring
    for _ in range(trials):
        omega = reynolds(random_form(rng, ring, 1, max_degree=3), group)
        theta = push_form(omega, space)
        assert orbit_d(orbit_d(theta)).is_zero()


def check_lift_roundtrip(space, field: OrbitVectorField):
    from orbitcalc.quotient import lift_vf

    lifted = lift_vf(field, space)
    assert is_invariant(lifted, space.hilbert.group)
    assert push_vf(lifted, space) == field
