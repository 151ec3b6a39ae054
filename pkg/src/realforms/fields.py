"""Exact formally real field towers.

A tower is built from the rationals by three constructors:

* ``QuadExt(F, d)``      -- F(sqrt d) for a non-square d positive at some ordering,
* ``EuclideanHull(F, P)`` -- the Euclidean closure of (F, P); same carrier as F,
  but every element positive at P is a square (this is how "R" is modelled),
* ``Laurent(F)``          -- F((t)), elements restricted to finite Laurent
  polynomials.

Elements are plain Python values: ``Fraction`` over the rationals,
:class:`QuadNumber` over a quadratic extension and :class:`LaurentPoly` over a
Laurent node.  Elements of an Euclidean hull are elements of its base.

An ordering is a path with one entry per tower node, innermost first:
``0`` for the rationals and for Euclidean hulls (no choice), the sign of the
adjoined root for ``QuadExt`` and the sign of ``t`` for ``Laurent``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import isqrt
from typing import Optional, Union

from .errors import (
    DivisionByZero,
    FieldMismatch,
    InvalidTower,
    NonInvertibleLaurentElement,
    NotAnExtension,
    NotLaurentField,
    OrderingFieldMismatch,
    ZeroElement,
)

Element = Union[Fraction, "QuadNumber", "LaurentPoly"]
Path = tuple[int, ...]


def _sign_char(s: int) -> str:
    return "+" if s > 0 else "-"


class FieldTower:
    """Common interface of the tower nodes."""

    def coerce(self, x) -> Element:
        raise NotImplementedError

    def _sign(self, x, path: Path) -> int:
        raise NotImplementedError

    def _paths(self) -> list[Path]:
        raise NotImplementedError

    def square_test(self, x) -> tuple[bool, Optional[Element]]:
        """Return (is_square, root) for nonzero ``x``; root may be None."""
        raise NotImplementedError

    @property
    def zero(self) -> Element:
        return self.coerce(0)

    @property
    def one(self) -> Element:
        return self.coerce(1)

    @cached_property
    def orderings(self) -> tuple["Ordering", ...]:
        return tuple(Ordering(self, p) for p in self._paths())

    def sign_labels(self, path: Path) -> list[str]:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.to_text()

    def to_text(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Rationals(FieldTower):
    def coerce(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int) and not isinstance(x, bool):
            return Fraction(x)
        raise FieldMismatch(f"{x!r} is not an element of Q")

    def _sign(self, x, path):
        return (x > 0) - (x < 0)

    def _paths(self):
        return [(0,)]

    def square_test(self, x):
        if x <= 0:
            return False, None
        n, d = x.numerator, x.denominator
        rn, rd = isqrt(n), isqrt(d)
        if rn * rn == n and rd * rd == d:
            return True, Fraction(rn, rd)
        return False, None

    def sign_labels(self, path):
        return []

    def to_text(self):
        return "Q"

    def __repr__(self):
        return "Rationals()"


@dataclass(frozen=True, repr=False)
class QuadExt(FieldTower):
    base: FieldTower
    radicand: Element

    def __post_init__(self):
        if isinstance(self.base, Laurent):
            raise InvalidTower("use quad_ext() to adjoin a root to a Laurent field")
        d = self.base.coerce(self.radicand)
        object.__setattr__(self, "radicand", d)
        if d == 0:
            raise InvalidTower("radicand must be nonzero")
        if self.base.square_test(d)[0]:
            raise InvalidTower(f"{to_text(d)} is already a square in {self.base}")
        if not any(self.base._sign(d, p) > 0 for p in self.base._paths()):
            raise InvalidTower(f"{to_text(d)} is negative at every ordering: extension not real")

    @cached_property
    def pythagorean_step(self) -> bool:
        return all(self.base._sign(self.radicand, p) > 0 for p in self.base._paths())

    @cached_property
    def gen(self) -> "QuadNumber":
        return QuadNumber(self, self.base.zero, self.base.one)

    def coerce(self, x):
        if isinstance(x, QuadNumber) and (x.field is self or x.field == self):
            return x
        return QuadNumber(self, self.base.coerce(x), self.base.zero)

    def _sign(self, x, path):
        bp, s = path[:-1], path[-1]
        sa = self.base._sign(x.a, bp)
        sb = s * self.base._sign(x.b, bp)
        if sb == 0 or sa == sb:
            return sa
        if sa == 0:
            return sb
        sn = self.base._sign(x.a * x.a - self.radicand * x.b * x.b, bp)
        return sa if sn > 0 else sb

    def _paths(self):
        return [bp + (s,) for bp in self.base._paths()
                if self.base._sign(self.radicand, bp) > 0 for s in (1, -1)]

    def square_test(self, x):
        # (a + b*r)^2 = p + q*r  <=>  a^2 + d*b^2 = p, 2ab = q
        base, d = self.base, self.radicand
        p, q = x.a, x.b
        if q == 0:
            ok, w = base.square_test(p)
            if ok:
                return True, self.coerce(w)
            ok, w = base.square_test(p / d)
            if ok:
                return True, QuadNumber(self, base.zero, w)
            return False, None
        ok, r = base.square_test(p * p - d * q * q)
        if not ok:
            return False, None
        for cand in ((p + r) / 2, (p - r) / 2):
            if cand == 0:
                continue
            ok, a = base.square_test(cand)
            if ok:
                root = QuadNumber(self, a, q / (2 * a))
                if root * root == x:
                    return True, root
        return False, None

    def sign_labels(self, path):
        return self.base.sign_labels(path[:-1]) + [f"sqrt({to_text(self.radicand)}){_sign_char(path[-1])}"]

    def to_text(self):
        return f"quadext({self.base.to_text()}, {to_text(self.radicand)})"

    def __repr__(self):
        return f"QuadExt({self.base!r}, {to_text(self.radicand)!r})"


@dataclass(frozen=True, repr=False)
class EuclideanHull(FieldTower):
    base: FieldTower
    ordering: "Ordering"

    def __post_init__(self):
        if isinstance(self.base, (EuclideanHull, Laurent)):
            raise InvalidTower("Euclidean hull must sit directly over Q or a quadratic tower")
        if self.ordering.field != self.base or self.ordering.path not in self.base._paths():
            raise InvalidTower("designated ordering does not belong to the base field")

    def coerce(self, x):
        return self.base.coerce(x)

    def _sign(self, x, path):
        return self.base._sign(x, self.ordering.path)

    def _paths(self):
        return [self.ordering.path + (0,)]

    def square_test(self, x):
        if self._sign(x, ()) < 0:
            return False, None
        ok, w = self.base.square_test(x)
        return True, (w if ok else None)

    def sign_labels(self, path):
        return self.base.sign_labels(self.ordering.path)

    def to_text(self):
        labels = "".join(_sign_char(s) for s in self.ordering.path if s)
        if labels:
            return f"euclid({self.base.to_text()}, {labels})"
        return f"euclid({self.base.to_text()})"

    def __repr__(self):
        return f"EuclideanHull({self.base!r}, {self.ordering.path!r})"


@dataclass(frozen=True, repr=False)
class Laurent(FieldTower):
    base: FieldTower

    def __post_init__(self):
        node = self.base
        while True:
            if isinstance(node, Laurent):
                raise InvalidTower("nested Laurent fields are not supported")
            if isinstance(node, Rationals):
                break
            node = node.base

    @cached_property
    def t(self) -> "LaurentPoly":
        return LaurentPoly(self, ((1, self.base.one),))

    def coerce(self, x):
        if isinstance(x, LaurentPoly):
            if x.field is self or x.field == self:
                return x
            return LaurentPoly(self, tuple((e, self.base.coerce(c)) for e, c in x.terms))
        c = self.base.coerce(x)
        return LaurentPoly(self, ((0, c),) if c != 0 else ())

    def _sign(self, x, path):
        if not x.terms:
            return 0
        v, c = x.terms[0]
        s = self.base._sign(c, path[:-1])
        return s if v % 2 == 0 else s * path[-1]

    def _paths(self):
        return [bp + (s,) for bp in self.base._paths() for s in (1, -1)]

    def square_test(self, x):
        # Hensel: t^v * u is a square iff v is even and u(0) is a square.
        v, c = x.terms[0]
        if v % 2:
            return False, None
        ok, w = self.base.square_test(c)
        if not ok:
            return False, None
        if w is None:
            return True, None
        return True, self._poly_sqrt(x, w)

    def _poly_sqrt(self, x, w):
        v = x.valuation
        top = x.terms[-1][0] - v
        if top % 2:
            return None
        u = dict((e - v, c) for e, c in x.terms)
        zero = self.base.zero
        root = [w]
        for n in range(1, top // 2 + 1):
            acc = u.get(n, zero)
            for i in range(1, n):
                acc = acc - root[i] * root[n - i]
            root.append(acc / (2 * w))
        cand = LaurentPoly(self, tuple((e + v // 2, c) for e, c in enumerate(root) if c != 0))
        return cand if cand * cand == x else None

    def sign_labels(self, path):
        return self.base.sign_labels(path[:-1]) + [f"t{'>' if path[-1] > 0 else '<'}0"]

    def to_text(self):
        return f"laurent({self.base.to_text()})"

    def __repr__(self):
        return f"Laurent({self.base!r})"


@dataclass(frozen=True)
class Ordering:
    field: FieldTower
    path: Path

    @property
    def label(self) -> str:
        return "(" + ", ".join(self.field.sign_labels(self.path)) + ")"

    def __str__(self):
        labels = self.field.sign_labels(self.path)
        return "(" + ", ".join(labels) + ")" if labels else "(unique)"

    def __repr__(self):
        return f"Ordering({self.field.to_text()}, {self.path})"


@dataclass(frozen=True)
class SquareClassRep:
    representative: Element
    field: FieldTower


@dataclass(frozen=True)
class Unsupported:
    reason: str


# --- elements ---------------------------------------------------------------


def _field_of(x) -> Optional[FieldTower]:
    if isinstance(x, (QuadNumber, LaurentPoly)):
        return x.field
    if isinstance(x, (Fraction, int)) and not isinstance(x, bool):
        return Q
    return None


def _lift(self, other):
    """Coerce ``other`` into self's field, or NotImplemented to defer upward."""
    try:
        return self.field.coerce(other)
    except FieldMismatch:
        fo = _field_of(other)
        if fo is None:
            # e.g. a quaternion: let its reflected operator handle the scalar
            return NotImplemented
        try:
            fo.coerce(self)
        except FieldMismatch:
            pass
        else:
            return NotImplemented
        raise FieldMismatch(f"cannot combine elements of {self.field} and {fo}") from None


class _ElementOps:
    __slots__ = ()

    def __radd__(self, other):
        o = _lift(self, other)
        return o if o is NotImplemented else o + self

    def __sub__(self, other):
        o = _lift(self, other)
        return o if o is NotImplemented else self + (-o)

    def __rsub__(self, other):
        o = _lift(self, other)
        return o if o is NotImplemented else o + (-self)

    def __rmul__(self, other):
        o = _lift(self, other)
        return o if o is NotImplemented else o * self

    def __truediv__(self, other):
        o = _lift(self, other)
        return o if o is NotImplemented else self * o.inverse()

    def __rtruediv__(self, other):
        o = _lift(self, other)
        return o if o is NotImplemented else o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        result = self.field.one
        for _ in range(abs(n)):
            result = result * base
        return result

    def __pos__(self):
        return self

    def __str__(self):
        return to_text(self)


class QuadNumber(_ElementOps):
    """a + b*sqrt(d) over ``field.base``."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field: QuadExt, a, b):
        self.field = field
        self.a = a
        self.b = b

    def __add__(self, other):
        o = _lift(self, other)
        if o is NotImplemented:
            return o
        return QuadNumber(self.field, self.a + o.a, self.b + o.b)

    def __mul__(self, other):
        o = _lift(self, other)
        if o is NotImplemented:
            return o
        d = self.field.radicand
        return QuadNumber(self.field, self.a * o.a + d * self.b * o.b, self.a * o.b + self.b * o.a)

    def __neg__(self):
        return QuadNumber(self.field, -self.a, -self.b)

    def conjugate(self) -> "QuadNumber":
        return QuadNumber(self.field, self.a, -self.b)

    def norm(self):
        return self.a * self.a - self.field.radicand * self.b * self.b

    def inverse(self) -> "QuadNumber":
        n = self.norm()
        if n == 0:
            raise DivisionByZero("division by zero")
        return QuadNumber(self.field, self.a / n, -self.b / n)

    def __eq__(self, other):
        try:
            o = self.field.coerce(other)
        except FieldMismatch:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash(self.a) if self.b == 0 else hash((self.a, self.b))

    def __repr__(self):
        return f"QuadNumber({to_text(self)!r})"


class LaurentPoly(_ElementOps):
    """Finite Laurent polynomial; ``terms`` is sorted by exponent, no zero coefficients."""

    __slots__ = ("field", "terms")

    def __init__(self, field: Laurent, terms):
        self.field = field
        self.terms = tuple(terms)

    @classmethod
    def from_dict(cls, field: Laurent, coeffs: dict) -> "LaurentPoly":
        return cls(field, tuple((e, coeffs[e]) for e in sorted(coeffs) if coeffs[e] != 0))

    @property
    def valuation(self) -> int:
        if not self.terms:
            raise ZeroElement("zero has no valuation")
        return self.terms[0][0]

    @property
    def residue(self):
        """Constant coefficient of the unit part."""
        if not self.terms:
            raise ZeroElement("zero has no residue")
        return self.terms[0][1]

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __add__(self, other):
        o = _lift(self, other)
        if o is NotImplemented:
            return o
        acc = dict(self.terms)
        for e, c in o.terms:
            acc[e] = acc[e] + c if e in acc else c
        return LaurentPoly.from_dict(self.field, acc)

    def __mul__(self, other):
        o = _lift(self, other)
        if o is NotImplemented:
            return o
        acc: dict = {}
        for e1, c1 in self.terms:
            for e2, c2 in o.terms:
                e = e1 + e2
                acc[e] = acc[e] + c1 * c2 if e in acc else c1 * c2
        return LaurentPoly.from_dict(self.field, acc)

    def __neg__(self):
        return LaurentPoly(self.field, tuple((e, -c) for e, c in self.terms))

    def inverse(self) -> "LaurentPoly":
        if not self.terms:
            raise DivisionByZero("division by zero")
        if len(self.terms) != 1:
            raise NonInvertibleLaurentElement(
                f"{to_text(self)} is not a monomial; only c*t^v can be inverted exactly")
        (e, c), = self.terms
        return LaurentPoly(self.field, ((-e, self.field.base.one / c),))

    def __eq__(self, other):
        try:
            o = self.field.coerce(other)
        except FieldMismatch:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        if not self.terms:
            return hash(0)
        if len(self.terms) == 1 and self.terms[0][0] == 0:
            return hash(self.terms[0][1])
        return hash(self.terms)

    def __repr__(self):
        return f"LaurentPoly({to_text(self)!r})"


# --- text rendering ---------------------------------------------------------


def _needs_parens(s: str) -> bool:
    return " " in s


def _scaled(coeff, gen: str) -> str:
    if coeff == 1:
        return gen
    if coeff == -1:
        return "-" + gen
    c = to_text(coeff)
    if _needs_parens(c):
        c = f"({c})"
    return f"{c}*{gen}"


def _join(terms: list[str]) -> str:
    if not terms:
        return "0"
    out = terms[0]
    for s in terms[1:]:
        out += f" - {s[1:]}" if s.startswith("-") else f" + {s}"
    return out


def to_text(x) -> str:
    """Render an element in the shared textual format (parseable back)."""
    if isinstance(x, bool):
        raise FieldMismatch("booleans are not field elements")
    if isinstance(x, (int, Fraction)):
        return str(Fraction(x))
    if isinstance(x, QuadNumber):
        terms = []
        if x.a != 0:
            terms.append(to_text(x.a))
        if x.b != 0:
            terms.append(_scaled(x.b, f"sqrt({to_text(x.field.radicand)})"))
        return _join(terms)
    if isinstance(x, LaurentPoly):
        terms = []
        for e, c in x.terms:
            if e == 0:
                terms.append(to_text(c))
            else:
                terms.append(_scaled(c, "t" if e == 1 else f"t^{e}"))
        return _join(terms)
    raise FieldMismatch(f"not a field element: {x!r}")


# --- constructors -----------------------------------------------------------

Q = Rationals()


def quad_ext(base: FieldTower, d) -> FieldTower:
    """F(sqrt d), normalised so that Laurent nodes stay outermost."""
    if isinstance(base, Laurent):
        d = base.coerce(d)
        if d == 0 or not d.is_monomial or d.valuation % 2:
            raise InvalidTower("over a Laurent field the radicand must be c*t^(2k) with c in the residue field")
        return Laurent(quad_ext(base.base, d.residue))
    return QuadExt(base, d)


def euclid(base: FieldTower, ordering: Optional[Ordering] = None) -> EuclideanHull:
    if ordering is None:
        if len(base.orderings) != 1:
            raise InvalidTower(f"{base} has {len(base.orderings)} orderings; name the designated one")
        ordering = base.orderings[0]
    return EuclideanHull(base, ordering)


def laurent(base: FieldTower) -> Laurent:
    return Laurent(base)


def adjoin_sqrt(field: FieldTower, a) -> tuple[FieldTower, Element, bool]:
    """Return ``(L, root, proper)`` with root**2 == a in L.

    ``proper`` is False when ``a`` is already a square in ``field``; L is then
    isomorphic to ``field`` (for Euclidean hulls it is rebuilt on top of
    base(sqrt a) so that the root has an exact representation).
    """
    a = field.coerce(a)
    if a == 0:
        raise ZeroElement("cannot adjoin sqrt(0)")
    if isinstance(field, Laurent):
        if not a.is_monomial or a.valuation % 2:
            raise InvalidTower("radicand must be c*t^(2k) with c in the residue field")
        k = a.valuation // 2
        inner, r, proper = adjoin_sqrt(field.base, a.residue)
        L = Laurent(inner)
        return L, L.coerce(r) * L.t ** k, proper
    ok, w = field.square_test(a)
    if ok and w is not None:
        return field, w, False
    if isinstance(field, EuclideanHull):
        if not ok:
            raise InvalidTower(f"{to_text(a)} is negative in {field}: no real root")
        ext = QuadExt(field.base, a)
        P = Ordering(ext, field.ordering.path + (1,))
        L = EuclideanHull(ext, P)
        return L, ext.gen, False
    ext = QuadExt(field, a)
    return ext, ext.gen, True


# --- spec-level operations --------------------------------------------------


def _nonzero(x, field: FieldTower):
    x = field.coerce(x)
    if x == 0:
        raise ZeroElement("operation undefined at zero")
    return x


def orderings_of(field: FieldTower) -> list[Ordering]:
    return list(field.orderings)


def sign_at(x, P: Ordering) -> int:
    try:
        x = P.field.coerce(x)
    except FieldMismatch as exc:
        raise OrderingFieldMismatch(str(exc)) from None
    if x == 0:
        raise ZeroElement("zero has no sign")
    return P.field._sign(x, P.path)


def is_square(x, field: FieldTower) -> bool:
    return field.square_test(_nonzero(x, field))[0]


def sqrt_witness(x, field: FieldTower) -> Optional[Element]:
    """Exact square root of ``x`` when one is representable, else None."""
    return field.square_test(_nonzero(x, field))[1]


def is_totally_positive(x, field: FieldTower) -> bool:
    x = _nonzero(x, field)
    return all(field._sign(x, P.path) > 0 for P in field.orderings)


def valuation_residue(x, field: FieldTower) -> tuple[int, Element]:
    if not isinstance(field, Laurent):
        raise NotLaurentField(f"{field} is not a Laurent field")
    x = _nonzero(x, field)
    return x.valuation, x.residue


def square_class_reps(field: FieldTower) -> Union[list[SquareClassRep], Unsupported]:
    if isinstance(field, EuclideanHull):
        reps = [field.one, -field.one]
    elif isinstance(field, Laurent) and isinstance(field.base, EuclideanHull):
        t = field.t
        reps = [field.one, -field.one, t, -t]
    else:
        return Unsupported(f"{field} has infinitely many square classes")
    return [SquareClassRep(r, field) for r in reps]


def square_class_of(x, field: FieldTower) -> SquareClassRep:
    """Representative r with x/r a square (finite square-class groups only)."""
    reps = square_class_reps(field)
    if isinstance(reps, Unsupported):
        raise InvalidTower(reps.reason)
    x = _nonzero(x, field)
    for rep in reps:
        if is_square(x * rep.representative, field):
            return rep
    raise AssertionError("square class representatives are incomplete")


def in_pythagorean_closure(sub: FieldTower, base: FieldTower) -> bool:
    """True iff ``sub`` is reached from ``base`` by adjoining roots of totally positive elements."""
    steps_ok = True
    node = sub
    while node != base:
        if isinstance(node, Laurent) and isinstance(base, Laurent):
            return steps_ok and in_pythagorean_closure(node.base, base.base)
        if isinstance(node, QuadExt):
            steps_ok = steps_ok and node.pythagorean_step
        elif isinstance(node, (EuclideanHull, Laurent)):
            # real closures and t are not inside the Pythagorean closure
            steps_ok = False
        else:
            raise NotAnExtension(f"{sub} is not built on top of {base}")
        node = node.base
    return steps_ok
