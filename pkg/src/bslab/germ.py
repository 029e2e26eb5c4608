"""Thickened spaces O/J with J a monomial ideal in w supported on {w = 0}.

Elements of the quotient are represented by their jets: the tuple of transversal
derivatives ``(d/dw)^alpha f`` restricted to ``w = 0``, one for every exponent ``alpha``
in the staircase of J. Jet coefficients are stored *without* the ``1/alpha!`` factor,
so that they coincide with the values of the Noetherian operators ``(d/dw)^alpha``.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .polycore import AmbientRing, Ideal, Polynomial, derivative, groebner, normal_form


class SpaceError(ValueError):
    pass


def _factorial(alpha) -> int:
    return math.prod(math.factorial(a) for a in alpha)


@dataclass(frozen=True)
class ThickenedSpace:
    """Germ with smooth reduced support ``{w = 0}`` and structure ring ``O / J``.

    The ambient ring lists the z-variables first, then the w-variables.
    ``j_exponents`` are the minimal generators of J (exponent vectors over w).
    """

    ring: AmbientRing
    z_count: int
    w_count: int
    j_exponents: tuple
    staircase: tuple

    @property
    def z_indices(self) -> tuple:
        return tuple(range(self.z_count))

    @property
    def w_indices(self) -> tuple:
        return tuple(range(self.z_count, self.z_count + self.w_count))

    @property
    def z_names(self) -> tuple:
        return self.ring.variable_names[: self.z_count]

    @property
    def w_names(self) -> tuple:
        return self.ring.variable_names[self.z_count :]

    @property
    def dim(self) -> int:
        return self.z_count

    @property
    def max_order(self) -> int:
        """Largest order ``d`` among the defining operators."""
        return max(sum(a) for a in self.staircase)

    @property
    def k(self) -> Optional[int]:
        """The exponent ``k`` when ``J = (w^k)`` in a single w-variable, else None."""
        if self.w_count == 1 and len(self.j_exponents) == 1:
            return self.j_exponents[0][0]
        return None

    def lift(self, alpha) -> tuple:
        """Embed a w-exponent into a full exponent vector."""
        return (0,) * self.z_count + tuple(alpha)

    def w_part(self, exp) -> tuple:
        return tuple(exp[self.z_count :])

    def j_generators(self) -> list:
        return [self.ring.monomial(self.lift(a)) for a in self.j_exponents]

    def j_ideal(self) -> Ideal:
        return Ideal(tuple(self.j_generators()))

    def in_staircase(self, alpha) -> bool:
        return not any(all(x >= y for x, y in zip(alpha, g)) for g in self.j_exponents)


def _minimalize(exps):
    exps = sorted(set(exps))
    return tuple(
        e for e in exps if not any(o != e and all(x <= y for x, y in zip(o, e)) for o in exps)
    )


def make_space(
    z_count: int,
    j_generators: Sequence,
    w_count: int = 1,
    z_names: Optional[Sequence[str]] = None,
    w_names: Optional[Sequence[str]] = None,
    order: str = "grevlex",
) -> ThickenedSpace:
    """Build the space ``O / J``.

    ``j_generators`` are w-monomials, given either as text over the w-variable names
    (``"w^3"``) or as exponent tuples of length ``w_count``.
    """
    if z_names is None:
        z_names = ["z"] if z_count == 1 else [f"z{i + 1}" for i in range(z_count)]
    if w_names is None:
        w_names = ["w"] if w_count == 1 else [f"w{i + 1}" for i in range(w_count)]
    if len(z_names) != z_count or len(w_names) != w_count:
        raise SpaceError("variable name lists do not match the counts")
    if w_count < 1:
        raise SpaceError("need at least one w-variable")
    ring = AmbientRing(tuple(z_names) + tuple(w_names), order)

    exps = []
    for g in j_generators:
        if isinstance(g, str):
            p = ring.parse(g)
            if not p.is_monomial():
                raise SpaceError(f"J generator {g!r} is not a monomial")
            e = p.LM
            if any(e[:z_count]):
                raise SpaceError(f"J generator {g!r} involves z-variables")
            exps.append(tuple(e[z_count:]))
        else:
            e = tuple(int(x) for x in g)
            if len(e) != w_count or any(x < 0 for x in e):
                raise SpaceError(f"bad J exponent {g!r}")
            exps.append(e)
    if not exps:
        raise SpaceError("J needs at least one generator")
    exps = _minimalize(exps)

    # J is (w)-primary iff it contains a pure power of every w-variable
    bounds = []
    for i in range(w_count):
        pure = [e[i] for e in exps if all(x == 0 for j, x in enumerate(e) if j != i)]
        if not pure:
            raise SpaceError("J is not primary to (w): the staircase is infinite")
        bounds.append(min(pure))
    if any(b == 0 for b in bounds):
        raise SpaceError("J is the unit ideal")

    stairs = [
        a
        for a in itertools.product(*(range(b) for b in bounds))
        if not any(all(x >= y for x, y in zip(a, g)) for g in exps)
    ]
    stairs.sort(key=lambda a: (sum(a), tuple(-x for x in a)))
    return ThickenedSpace(ring, z_count, w_count, exps, tuple(stairs))


# ---------------------------------------------------------------------------
# Noetherian operators


@dataclass(frozen=True)
class NoetherianOperator:
    """The constant-coefficient operator ``(d/dw)^alpha`` followed by restriction to ``w = 0``."""

    alpha: tuple

    @property
    def order(self) -> int:
        return sum(self.alpha)

    def __str__(self):
        if not any(self.alpha):
            return "1"
        return "d^" + "".join(str(a) for a in self.alpha) if len(self.alpha) > 1 else f"d^{self.alpha[0]}"


def noetherian_set(space: ThickenedSpace) -> list:
    return [NoetherianOperator(a) for a in space.staircase]


def apply_operator(op: NoetherianOperator, f: Polynomial, space: ThickenedSpace) -> Polynomial:
    """``(d/dw)^alpha f`` evaluated on ``w = 0``; a polynomial in z only."""
    g = f
    for idx, a in zip(space.w_indices, op.alpha):
        if a:
            g = derivative(g, idx, a)
    return g.restrict_zero(space.w_indices)


def member_of_J(f: Polynomial, space: ThickenedSpace, crosscheck: bool = False) -> bool:
    result = all(apply_operator(op, f, space).is_zero() for op in noetherian_set(space))
    if crosscheck:
        r, _ = normal_form(f, groebner(space.j_ideal()))
        if r.is_zero() != result:
            raise AssertionError(f"defining set and normal form disagree on {f}")
    return result


# ---------------------------------------------------------------------------
# jets


@dataclass(frozen=True)
class JetElement:
    space: ThickenedSpace
    coefficients: tuple  # ((alpha, Polynomial), ...) in staircase order, zeros included

    def __getitem__(self, alpha) -> Polynomial:
        return dict(self.coefficients)[tuple(alpha)]

    def as_dict(self) -> dict:
        return dict(self.coefficients)

    def is_zero(self) -> bool:
        return all(c.is_zero() for _, c in self.coefficients)

    def __eq__(self, other):
        if not isinstance(other, JetElement):
            return NotImplemented
        return self.space == other.space and self.coefficients == other.coefficients

    def __hash__(self):
        return hash((self.space, self.coefficients))

    def to_json(self) -> list:
        return [[list(a), str(c)] for a, c in self.coefficients]

    @classmethod
    def from_json(cls, data, space: ThickenedSpace) -> "JetElement":
        coeffs = {tuple(a): space.ring.parse(t) for a, t in data}
        return make_jet(space, coeffs)


def make_jet(space: ThickenedSpace, coeffs: dict) -> JetElement:
    bad = [a for a in coeffs if tuple(a) not in space.staircase]
    if bad:
        raise SpaceError(f"exponents outside the staircase: {bad}")
    for c in coeffs.values():
        if c.variables_used() & set(space.w_indices):
            raise SpaceError(f"jet coefficient {c} involves w-variables")
    zero = space.ring.zero()
    return JetElement(space, tuple((a, coeffs.get(a, zero)) for a in space.staircase))


def taylor_jet(f: Polynomial, space: ThickenedSpace) -> JetElement:
    return JetElement(
        space, tuple((op.alpha, apply_operator(op, f, space)) for op in noetherian_set(space))
    )


def jet_mul(u: JetElement, v: JetElement) -> JetElement:
    """Product in O/J computed on jets by the Leibniz rule."""
    if u.space != v.space:
        raise SpaceError("jets live on different spaces")
    space = u.space
    U, V = u.as_dict(), v.as_dict()
    out = []
    for gamma in space.staircase:
        acc = space.ring.zero()
        for alpha in itertools.product(*(range(g + 1) for g in gamma)):
            beta = tuple(g - a for g, a in zip(gamma, alpha))
            a_c, b_c = U[alpha], V[beta]
            if a_c and b_c:
                binom = math.prod(math.comb(g, a) for g, a in zip(gamma, alpha))
                acc = acc + (a_c * b_c).scale(binom)
        out.append((gamma, acc))
    return JetElement(space, tuple(out))


def jet_add(u: JetElement, v: JetElement) -> JetElement:
    if u.space != v.space:
        raise SpaceError("jets live on different spaces")
    V = v.as_dict()
    return JetElement(u.space, tuple((a, c + V[a]) for a, c in u.coefficients))


def reconstruct(jet: JetElement) -> Polynomial:
    """A representative ``sum coefficient[alpha] * w^alpha / alpha!``."""
    space = jet.space
    f = space.ring.zero()
    for alpha, c in jet.coefficients:
        if c:
            f = f + c.mul_term(space.lift(alpha), Fraction(1, _factorial(alpha)))
    return f


# ---------------------------------------------------------------------------
# space files


def space_from_dict(data: dict, order: str = "grevlex") -> ThickenedSpace:
    z_vars = list(data.get("z_vars", []))
    w_vars = list(data["w_vars"])
    return make_space(len(z_vars), data["J"], len(w_vars), z_vars, w_vars, order)


def space_to_dict(space: ThickenedSpace) -> dict:
    return {
        "z_vars": list(space.z_names),
        "w_vars": list(space.w_names),
        "J": [str(g) for g in space.j_generators()],
    }


def load_space(path) -> ThickenedSpace:
    with open(path) as fh:
        return space_from_dict(json.load(fh))


def dump_space(space: ThickenedSpace, path) -> None:
    with open(path, "w") as fh:
        json.dump(space_to_dict(space), fh, indent=2)
        fh.write("\n")
