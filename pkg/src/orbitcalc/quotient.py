"""Calculus on the orbit space of a linear finite group action.

An :class:`OrbitSpace` bundles a Hilbert map, its relation ideal, a generating
set of invariant vector fields, and (optionally) a linear Lie algebra action
for semi-basic tests.  Downstairs objects are intrinsic: functions are ideal
normal forms in the orbit alphabet, vector fields are derivations tangent to
the relations, and k-forms are alternating value tables on the pushed
generator fields constrained by the generator syzygies — the latter is what
makes a value table a well-defined functional, and is exactly what admits
forms (such as the canonical volume-like 1-form of the reflection example)
that extend to no ambient polynomial form.

Everything is exact: pushforwards subduct Lie derivatives, lifts and
extension checks are submodule membership with verified witnesses, and the
orbit exterior derivative is pull-differentiate-push.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from fractions import Fraction

from .algebra import PolyRing, Polynomial, parse_polynomial
from .groebner import SubmoduleProblem, module_solve, syzygies
from .group_action import (
    LieAlgebraAction,
    PolyDiffForm,
    PolyVectorField,
    _sort_sign,
    act_form,
    is_invariant,
)
from .exterior import d as exterior_d
from .exterior import evaluate, interior, semibasic_check, wedge
from .invariants import (
    EquivariantModule,
    HilbertMap,
    RelationIdeal,
    equivariant_generators,
    relations,
    subduct,
)
from . import linalg


class OrbitSpace:
    """Shared context: Hilbert map, relation ideal, generator fields, and the
    caches (pushed generators, their syzygies) every operation leans on."""

    def __init__(
        self,
        hilbert: HilbertMap,
        ideal: RelationIdeal | None = None,
        module: EquivariantModule | None = None,
        lie_action: LieAlgebraAction | None = None,
    ):
        self.hilbert = hilbert
        self.ideal = ideal if ideal is not None else relations(hilbert)
        self.module = (
            module if module is not None else equivariant_generators(hilbert.group)
        )
        if self.module.ring != hilbert.ring:
            raise ValueError("generator fields live in the wrong ring")
        self.lie_action = (
            lie_action
            if lie_action is not None
            else LieAlgebraAction(hilbert.group.n, ())
        )
        self._pushed: list[OrbitVectorField] | None = None
        self._syzygies: list[tuple[Polynomial, ...]] | None = None

    # -- basic constructors -------------------------------------------------

    @property
    def orbit_ring(self) -> PolyRing:
        return self.hilbert.orbit_ring

    def function(self, rep: Polynomial) -> "OrbitFunction":
        return OrbitFunction(self, self.ideal.normal(rep))

    def parse_function(self, text: str) -> "OrbitFunction":
        return self.function(parse_polynomial(text, self.orbit_ring))

    def field(self, components, check: bool = True) -> "OrbitVectorField":
        comps = [
            c if isinstance(c, OrbitFunction) else self.function(c)
            for c in components
        ]
        return OrbitVectorField(self, comps, check=check)

    # -- caches ---------------------------------------------------------------

    @property
    def pushed_generators(self) -> list["OrbitVectorField"]:
        """The generator fields pushed to the orbit space (computed once)."""
        if self._pushed is None:
            self._pushed = [push_vf(X, self) for X in self.module.generators]
        return self._pushed

    @property
    def generator_syzygies(self) -> list[tuple[Polynomial, ...]]:
        """Relations among the pushed generators modulo the relation ideal."""
        if self._syzygies is None:
            columns = [
                tuple(c.rep for c in Y.components) for Y in self.pushed_generators
            ]
            self._syzygies = syzygies(columns, self.ideal.basis)
        return self._syzygies


# ---------------------------------------------------------------------------
# intrinsic objects
# ---------------------------------------------------------------------------

class OrbitFunction:
    """A function class on the orbit space: a normal-form polynomial in the
    orbit alphabet. Equality of classes is equality of representatives."""

    __slots__ = ("space", "rep")

    def __init__(self, space: OrbitSpace, rep: Polynomial):
        if rep.ring != space.orbit_ring:
            raise ValueError("representative must live in the orbit ring")
        self.space = space
        self.rep = space.ideal.normal(rep)

    def is_zero(self) -> bool:
        return self.rep.is_zero()

    def __add__(self, other):
        return OrbitFunction(self.space, self.rep + _rep(other, self.space))

    __radd__ = __add__

    def __sub__(self, other):
        return OrbitFunction(self.space, self.rep - _rep(other, self.space))

    def __neg__(self):
        return OrbitFunction(self.space, -self.rep)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return OrbitFunction(self.space, self.rep.scale(other))
        if not isinstance(other, (OrbitFunction, Polynomial)):
            return NotImplemented
        return OrbitFunction(self.space, self.rep * _rep(other, self.space))

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, OrbitFunction)
            and self.space is other.space
            and self.rep == other.rep
        )

    def __hash__(self):
        return hash(self.rep)

    def __str__(self):
        return str(self.rep)

    def __repr__(self):
        return f"OrbitFunction({self.rep})"


def _rep(obj, space: OrbitSpace) -> Polynomial:
    if isinstance(obj, OrbitFunction):
        return obj.rep
    if isinstance(obj, Polynomial):
        return obj
    raise TypeError(f"cannot combine with {type(obj).__name__}")


class OrbitVectorField:
    """A derivation of the orbit function algebra: one class per orbit
    coordinate, constrained to preserve the relation ideal (tangency)."""

    __slots__ = ("space", "components")

    def __init__(self, space: OrbitSpace, components, check: bool = True):
        comps = tuple(
            c if isinstance(c, OrbitFunction) else OrbitFunction(space, c)
            for c in components
        )
        if len(comps) != space.orbit_ring.nvars:
            raise ValueError("component count must match the orbit alphabet")
        self.space = space
        self.components = comps
        if check:
            self._check_tangency()

    def _check_tangency(self):
        ideal = self.space.ideal
        for g in ideal.basis.generators:
            total = g.ring.zero()
            for j, c in enumerate(self.components):
                total = total + c.rep * g.partial_derivative(j)
            if not ideal.is_member(total):
                raise ValueError(
                    "orbit field does not preserve the relation ideal"
                )

    def apply(self, f) -> OrbitFunction:
        """Directional derivative of an orbit function."""
        rep = _rep(f, self.space)
        total = rep.ring.zero()
        for j, c in enumerate(self.components):
            total = total + c.rep * rep.partial_derivative(j)
        return self.space.function(total)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __add__(self, other):
        return OrbitVectorField(
            self.space,
            [a + b for a, b in zip(self.components, other.components)],
            check=False,
        )

    def __sub__(self, other):
        return OrbitVectorField(
            self.space,
            [a - b for a, b in zip(self.components, other.components)],
            check=False,
        )

    def __neg__(self):
        return OrbitVectorField(self.space, [-c for c in self.components], check=False)

    def __mul__(self, factor):
        return OrbitVectorField(
            self.space, [c * factor for c in self.components], check=False
        )

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, OrbitVectorField)
            and self.space is other.space
            and self.components == other.components
        )

    def __hash__(self):
        return hash(self.components)

    def __str__(self):
        names = self.space.orbit_ring.names
        pieces = [
            f"({c})*d/d{name}"
            for name, c in zip(names, self.components)
            if not c.is_zero()
        ]
        return " + ".join(pieces) if pieces else "0"

    def __repr__(self):
        return f"OrbitVectorField({self})"


class OrbitForm:
    """An alternating k-linear functional on the pushed generator fields,
    linear over the orbit function ring.

    ``values`` assigns an orbit function to every strictly increasing tuple
    of generator indices; alternation recovers the rest, and compatibility
    with every generator syzygy (checked on construction) is what makes the
    table a single well-defined functional rather than a list of numbers.
    Degree-0 orbit forms are bare :class:`OrbitFunction` values.
    """

    __slots__ = ("space", "degree", "values")

    def __init__(self, space: OrbitSpace, degree: int, values, check: bool = True):
        if degree < 1:
            raise ValueError("form degree must be at least 1")
        n_gens = len(space.pushed_generators)
        table: dict[tuple[int, ...], OrbitFunction] = {}
        items = values.items() if isinstance(values, dict) else values
        for indices, value in items:
            if len(indices) != degree:
                raise ValueError("index tuple length must equal the form degree")
            if any(i < 0 or i >= n_gens for i in indices):
                raise ValueError("generator index out of range")
            if len(set(indices)) != degree:
                continue
            sign, sorted_ix = _sort_sign(indices)
            if not isinstance(value, OrbitFunction):
                value = space.function(value)
            if sign < 0:
                value = -value
            if sorted_ix in table:
                value = table[sorted_ix] + value
            if value.is_zero():
                table.pop(sorted_ix, None)
            else:
                table[sorted_ix] = value
        self.space = space
        self.degree = degree
        self.values = table
        if check:
            self._check_syzygy_compatibility()

    def _check_syzygy_compatibility(self):
        """Sum of c_i * value(i, rest) over each syzygy c must vanish mod the
        ideal for every (k-1)-tuple: linearity over the function ring."""
        space = self.space
        n_gens = len(space.pushed_generators)
        rests = list(combinations(range(n_gens), self.degree - 1))
        for syz in space.generator_syzygies:
            for rest in rests:
                total = space.orbit_ring.zero()
                for i, c in enumerate(syz):
                    if c.is_zero():
                        continue
                    v = self.value((i,) + rest)
                    if not v.is_zero():
                        total = total + c * v.rep
                if not space.ideal.is_member(total):
                    raise ValueError(
                        "values are not compatible with the generator syzygies"
                    )

    def value(self, indices) -> OrbitFunction:
        """Value on an arbitrary generator tuple, via alternation."""
        indices = tuple(indices)
        if len(set(indices)) != len(indices):
            return self.space.function(self.space.orbit_ring.zero())
        sign, sorted_ix = _sort_sign(indices)
        value = self.values.get(sorted_ix)
        if value is None:
            return self.space.function(self.space.orbit_ring.zero())
        return -value if sign < 0 else value

    def is_zero(self) -> bool:
        return not self.values

    def __add__(self, other):
        if self.degree != other.degree or self.space is not other.space:
            raise ValueError("can only add orbit forms of one degree and space")
        merged = dict(self.values)
        for ix, v in other.values.items():
            w = merged.get(ix)
            v = v if w is None else w + v
            if v.is_zero():
                merged.pop(ix, None)
            else:
                merged[ix] = v
        return OrbitForm(self.space, self.degree, merged, check=False)

    def __neg__(self):
        return OrbitForm(
            self.space,
            self.degree,
            {ix: -v for ix, v in self.values.items()},
            check=False,
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, factor):
        return OrbitForm(
            self.space,
            self.degree,
            {ix: v * factor for ix, v in self.values.items()},
            check=False,
        )

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, OrbitForm)
            and self.space is other.space
            and self.degree == other.degree
            and self.values == other.values
        )

    def __hash__(self):
        return hash((self.degree, frozenset(self.values.items())))

    def __str__(self):
        if not self.values:
            return "0"
        pieces = []
        for ix in sorted(self.values):
            tag = ",".join(str(i + 1) for i in ix)
            pieces.append(f"(Y{tag}) -> {self.values[ix]}")
        return "; ".join(pieces)

    def __repr__(self):
        return f"OrbitForm(degree={self.degree}, {self})"


@dataclass(frozen=True)
class ExtendResult:
    """Outcome of the ambient-extension decision for an orbit 1-form: either
    coefficient polynomials A_j pulling the form back from the ambient
    coordinate differentials, or the certificate that none exist."""

    extendable: bool
    witness: tuple[Polynomial, ...] | None = None
    certificate: tuple[Polynomial, ...] | None = None

    def __bool__(self):
        return self.extendable


# ---------------------------------------------------------------------------
# pushforward / lift of vector fields
# ---------------------------------------------------------------------------

def push_vf(X: PolyVectorField, space: OrbitSpace) -> OrbitVectorField:
    """Push an invariant field down: component j is the rewrite of the Lie
    derivative X(sigma_j) through the generators.

    A tangency failure after subduction would mean the Hilbert map data is
    inconsistent, so the constructor check stays on.
    """
    if not is_invariant(X, space.hilbert.group):
        raise ValueError("field is not invariant")
    components = []
    for s in space.hilbert.sigma:
        components.append(space.function(subduct(X.apply(s), space.hilbert)))
    return OrbitVectorField(space, components, check=True)


def lift_vf(
    Y: OrbitVectorField, space: OrbitSpace, degree_bound: int | None = None
) -> PolyVectorField:
    """An invariant ambient field pushing to ``Y``: write ``Y`` through the
    pushed generators (exact submodule membership, no degree search — the
    ``degree_bound`` argument is accepted for interface symmetry and unused)
    and assemble the same combination upstairs.
    """
    del degree_bound
    columns = [
        tuple(c.rep for c in gen.components) for gen in space.pushed_generators
    ]
    problem = SubmoduleProblem(
        ambient_rank=space.orbit_ring.nvars,
        columns=tuple(columns),
        ideal=space.ideal.basis,
    )
    target = [c.rep for c in Y.components]
    outcome = module_solve(target, problem)
    if not outcome.member:
        raise ValueError("lift not found: field is outside the pushed module")
    lifted = PolyVectorField.zero(space.hilbert.ring)
    for h, X in zip(outcome.witness, space.module.generators):
        if not h.is_zero():
            lifted = lifted + space.hilbert.substitute_into(h) * X
    check = push_vf(lifted, space)
    if check != Y:
        raise AssertionError("internal error: lift does not push back to the input")
    return lifted


def orbit_bracket(Y: OrbitVectorField, Z: OrbitVectorField) -> OrbitVectorField:
    """Commutator of derivations: component j is Y(Z_j) - Z(Y_j).

    Agrees with lift-bracket-push on the golden suite (the bracket of
    invariant fields pushes to the bracket of the pushforwards).
    """
    if Y.space is not Z.space:
        raise ValueError("fields live on different orbit spaces")
    components = [
        Y.apply(zc) - Z.apply(yc) for yc, zc in zip(Y.components, Z.components)
    ]
    return OrbitVectorField(Y.space, components, check=True)


# ---------------------------------------------------------------------------
# pushforward / pull of forms
# ---------------------------------------------------------------------------

def push_form(theta, space: OrbitSpace):
    """Push an invariant semi-basic ambient form down to its intrinsic value
    table: value(i1..ik) = rewrite of theta(X_{i1}, ..., X_{ik}).

    Invariance is checked against every group element, semi-basicness
    against the supplied Lie algebra action (trivially true when empty).
    """
    if isinstance(theta, Polynomial):
        return space.function(subduct(theta, space.hilbert))
    group = space.hilbert.group
    for g in group.elements:
        if act_form(g, theta) != theta:
            raise ValueError("form is not invariant")
    sb = semibasic_check(theta, space.lie_action, space.hilbert.ring)
    if not sb:
        raise ValueError("form is not semi-basic")
    k = theta.degree
    fields = space.module.generators
    values = {}
    for indices in combinations(range(len(fields)), k):
        contraction = evaluate(theta, [fields[i] for i in indices])
        values[indices] = space.function(subduct(contraction, space.hilbert))
    return OrbitForm(space, k, values, check=True)


def _ambient_monomials(ring: PolyRing, max_degree: int) -> list:
    from .invariants import _monomials_of_degree

    out = []
    for degree in range(0, max_degree + 1):
        out.extend(_monomials_of_degree(ring, degree))
    return out


def pull_form(theta, space: OrbitSpace, degree_bound: int | None = None):
    """An invariant semi-basic ambient form pushing to ``theta``.

    Linear ansatz on the coefficients, swept degree by degree so the answer
    has least coefficient degree; ties are broken by the fixed unknown order
    with free variables pinned to zero.  The default bound (degree of the
    substituted values plus the generator coefficient degree) is raised
    automatically once before giving up.
    """
    if isinstance(theta, OrbitFunction):
        return space.hilbert.substitute_into(theta.rep)
    k = theta.degree
    fields = space.module.generators
    targets = {}
    for indices in combinations(range(len(fields)), k):
        targets[indices] = space.hilbert.substitute_into(theta.value(indices).rep)
    if degree_bound is None:
        value_degree = max((t.degree() for t in targets.values()), default=0)
        gen_degree = max(
            (c.degree() for X in fields for c in X.components if not c.is_zero()),
            default=0,
        )
        bound = max(value_degree, 0) + max(gen_degree, 0)
        bounds = list(range(0, bound + 1)) + list(range(bound + 1, 2 * bound + 2))
    else:
        bounds = list(range(0, degree_bound + 1))
    for m in bounds:
        candidate = _pull_at_degree(theta, space, targets, m)
        if candidate is not None:
            verification = push_form(candidate, space)
            if verification != theta:
                raise AssertionError(
                    "internal error: pulled form does not push back to the input"
                )
            return candidate
    raise ValueError(f"pull not found at bound {bounds[-1]}")


def _pull_at_degree(theta, space: OrbitSpace, targets, max_degree: int):
    """Solve the linear system for an ambient form of coefficient degree at
    most ``max_degree``; None when infeasible."""
    ring = space.hilbert.ring
    k = theta.degree
    n = ring.nvars
    if k > n:
        return None
    monomials = _ambient_monomials(ring, max_degree)
    basis_tuples = list(combinations(range(n), k))
    unknowns = [(J, m) for J in basis_tuples for m in monomials]

    def assemble(coeffs):
        items = []
        for (J, m), c in zip(unknowns, coeffs):
            if c:
                items.append((J, m.scale(c)))
        return PolyDiffForm(ring, k, items)

    rows = []
    rhs = []
    coords: dict = {}

    def emit(linear_parts: list[Polynomial], target: Polynomial):
        """One polynomial equation sum(c_u * linear_parts[u]) = target,
        expanded into monomial coordinates."""
        local: dict[tuple, list] = {}
        for u, part in enumerate(linear_parts):
            for e, c in part.terms.items():
                local.setdefault(e, []).append((u, c))
        exps = set(local) | set(target.terms)
        for e in exps:
            row = [Fraction(0)] * len(unknowns)
            for u, c in local.get(e, ()):
                row[u] += c
            rows.append(row)
            rhs.append(target.terms.get(e, Fraction(0)))

    group = space.hilbert.group
    one = ring.one()

    # evaluation constraints: theta(X_I) must equal the substituted values
    for indices, target in targets.items():
        parts = []
        for J, m in unknowns:
            basis_form = PolyDiffForm(ring, k, [(J, one)])
            value = evaluate(basis_form, [space.module.generators[i] for i in indices])
            parts.append(m * value)
        emit(parts, target)

    # invariance under each group generator
    for g in group.generators:
        moved = [act_form(g, f) for f in _unknown_forms(ring, k, unknowns)]
        for J in basis_tuples:
            parts = [f.terms.get(J, ring.zero()) for f in moved]
            originals = [m if J0 == J else ring.zero() for J0, m in unknowns]
            diff = [a - b for a, b in zip(parts, originals)]
            emit(diff, ring.zero())

    # semi-basic constraints
    from .group_action import infinitesimal_fields

    for field in infinitesimal_fields(space.lie_action, ring):
        contracted = [
            interior(field, f) for f in _unknown_forms(ring, k, unknowns)
        ]
        if k == 1:
            parts = list(contracted)
            emit(parts, ring.zero())
        else:
            all_tuples = set()
            for f in contracted:
                all_tuples.update(f.terms)
            for J in sorted(all_tuples):
                parts = [f.terms.get(J, ring.zero()) for f in contracted]
                emit(parts, ring.zero())

    solution = linalg.solve(rows, rhs)
    if solution is None:
        return None
    return assemble(solution)


def _unknown_forms(ring: PolyRing, k: int, unknowns) -> list[PolyDiffForm]:
    return [PolyDiffForm(ring, k, [(J, m)]) for J, m in unknowns]


def orbit_d(theta):
    """Exterior derivative on the orbit space.

    Degree 0 is intrinsic (value on each generator is its derivative of the
    function); higher degrees go through pull, ambient d, push — the two
    agree where both apply, and d of d vanishes.
    """
    if isinstance(theta, OrbitFunction):
        space = theta.space
        values = {}
        for i, Y in enumerate(space.pushed_generators):
            values[(i,)] = Y.apply(theta)
        return OrbitForm(space, 1, values, check=True)
    space = theta.space
    ambient = pull_form(theta, space)
    return push_form(exterior_d(ambient), space)


def orbit_wedge(a, b):
    """Exterior product downstairs, through pull - wedge - push."""
    space = a.space
    up_a = pull_form(a, space) if not isinstance(a, OrbitFunction) else space.hilbert.substitute_into(a.rep)
    up_b = pull_form(b, space) if not isinstance(b, OrbitFunction) else space.hilbert.substitute_into(b.rep)
    return push_form(wedge(up_a, up_b), space)


# ---------------------------------------------------------------------------
# extension decision
# ---------------------------------------------------------------------------

def extend_check(theta: OrbitForm, space: OrbitSpace | None = None) -> ExtendResult:
    """Decide whether an orbit 1-form is the value table of sum A_j d(y_j):
    exact submodule membership against the columns (Y_i(y_j))_i.

    Extendable case returns the A_j (a verified witness); the negative case
    returns the nonzero module normal form as certificate.
    """
    space = theta.space if space is None else space
    if isinstance(theta, OrbitFunction) or theta.degree != 1:
        raise ValueError("extension decision applies to orbit 1-forms")
    pushed = space.pushed_generators
    n_gens = len(pushed)
    columns = []
    for j in range(space.orbit_ring.nvars):
        columns.append(tuple(Y.components[j].rep for Y in pushed))
    target = [theta.value((i,)).rep for i in range(n_gens)]
    problem = SubmoduleProblem(
        ambient_rank=n_gens, columns=tuple(columns), ideal=space.ideal.basis
    )
    outcome = module_solve(target, problem)
    if outcome.member:
        witness = tuple(space.ideal.normal(w) for w in outcome.witness)
        for i in range(n_gens):
            acc = space.orbit_ring.zero()
            for j, w in enumerate(witness):
                acc = acc + w * pushed[i].components[j].rep
            if not space.ideal.is_member(acc - target[i]):
                raise AssertionError("internal error: extension witness broken")
        return ExtendResult(True, witness=witness)
    return ExtendResult(False, certificate=outcome.certificate)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def orbit_form_to_json(theta) -> dict:
    if isinstance(theta, OrbitFunction):
        return {
            "degree": 0,
            "generators": len(theta.space.pushed_generators),
            "values": [{"tuple": [], "class": str(theta.rep)}],
        }
    return {
        "degree": theta.degree,
        "generators": len(theta.space.pushed_generators),
        "values": [
            {"tuple": [i + 1 for i in ix], "class": str(theta.values[ix].rep)}
            for ix in sorted(theta.values)
        ],
    }


def orbit_form_from_json(data: dict, space: OrbitSpace):
    n_gens = len(space.pushed_generators)
    if int(data.get("generators", n_gens)) != n_gens:
        raise ValueError("generator count differs from the orbit space")
    degree = int(data["degree"])
    ring = space.orbit_ring
    if degree == 0:
        total = ring.zero()
        for item in data["values"]:
            total = total + parse_polynomial(item["class"], ring)
        return space.function(total)
    values = []
    for item in data["values"]:
        ix = tuple(int(i) - 1 for i in item["tuple"])
        values.append((ix, parse_polynomial(item["class"], ring)))
    return OrbitForm(space, degree, values, check=True)


def orbit_vf_to_json(Y: OrbitVectorField) -> dict:
    return {"components": [str(c.rep) for c in Y.components]}


def orbit_vf_from_json(data: dict, space: OrbitSpace) -> OrbitVectorField:
    ring = space.orbit_ring
    comps = [parse_polynomial(s, ring) for s in data["components"]]
    return space.field(comps, check=True)
