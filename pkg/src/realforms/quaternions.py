"""Quaternion algebras (a, b)_F with orthogonal involutions and skew-hermitian forms."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import isqrt
from typing import Optional, Sequence, Union

from .errors import (
    DimensionMismatch,
    FieldMismatch,
    InvalidInvolution,
    InvalidTower,
    NonDivisible,
    NonInvertible,
    NonInvertibleU,
    NotSplitByL,
    PreconditionFailed,
    ZeroElement,
)
from .fields import (
    Element,
    FieldTower,
    Laurent,
    Ordering,
    adjoin_sqrt,
    is_totally_positive,
    to_text,
)
from .forms import QuadForm, Status, Unknown, Verdict, is_totally_indefinite, isotropy_verdict, weak_isotropy_verdict


@dataclass(frozen=True)
class QuaternionAlgebra:
    """(a, b)_F with i^2 = a, j^2 = b, ij = -ji = k."""

    field: FieldTower
    a: Element
    b: Element

    def __post_init__(self):
        a, b = self.field.coerce(self.a), self.field.coerce(self.b)
        if a == 0 or b == 0:
            raise ZeroElement("quaternion slots must be nonzero")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def quat(self, x0=0, x1=0, x2=0, x3=0) -> "Quat":
        c = self.field.coerce
        return Quat(self, (c(x0), c(x1), c(x2), c(x3)))

    def coerce(self, x) -> "Quat":
        if isinstance(x, Quat):
            if x.alg != self:
                raise FieldMismatch("quaternions from different algebras")
            return x
        return self.quat(x)

    @property
    def zero(self) -> "Quat":
        return self.quat(0)

    @property
    def one(self) -> "Quat":
        return self.quat(1)

    @property
    def i(self) -> "Quat":
        return self.quat(0, 1)

    @property
    def j(self) -> "Quat":
        return self.quat(0, 0, 1)

    @property
    def k(self) -> "Quat":
        return self.quat(0, 0, 0, 1)

    @property
    def basis(self) -> tuple["Quat", ...]:
        return (self.one, self.i, self.j, self.k)

    def to_text(self) -> str:
        return f"quat({self.field.to_text()}; {to_text(self.a)}, {to_text(self.b)})"

    def __str__(self):
        return f"({to_text(self.a)}, {to_text(self.b)})"


class Quat:
    __slots__ = ("alg", "c")

    def __init__(self, alg: QuaternionAlgebra, coords):
        self.alg = alg
        self.c = tuple(coords)

    def _other(self, other) -> Optional["Quat"]:
        if isinstance(other, Quat):
            if other.alg != self.alg:
                raise FieldMismatch("quaternions from different algebras")
            return other
        try:
            return self.alg.quat(other)
        except FieldMismatch:
            return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Quat(self.alg, (x + y for x, y in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        return Quat(self.alg, (-x for x in self.c))

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else o + (-self)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        a, b = self.alg.a, self.alg.b
        x0, x1, x2, x3 = self.c
        y0, y1, y2, y3 = o.c
        return Quat(self.alg, (
            x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        ))

    def __rmul__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else o * self

    def __truediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        out = self.alg.one
        for _ in range(abs(n)):
            out = out * base
        return out

    def conj(self) -> "Quat":
        x0, x1, x2, x3 = self.c
        return Quat(self.alg, (x0, -x1, -x2, -x3))

    def nrd(self) -> Element:
        a, b = self.alg.a, self.alg.b
        x0, x1, x2, x3 = self.c
        return x0 * x0 - a * x1 * x1 - b * x2 * x2 + a * b * x3 * x3

    def inverse(self) -> "Quat":
        n = self.nrd()
        if n == 0:
            raise NonInvertible(f"{self} has reduced norm 0")
        inv = self.alg.field.one / n
        return Quat(self.alg, (inv * x for x in self.conj().c))

    @property
    def is_pure(self) -> bool:
        return self.c[0] == 0

    @property
    def is_scalar(self) -> bool:
        return all(x == 0 for x in self.c[1:])

    def __eq__(self, other):
        try:
            o = self._other(other)
        except FieldMismatch:
            return False
        return o is not None and self.c == o.c

    def __hash__(self):
        return hash(self.c)

    def to_text(self) -> str:
        terms = []
        for x, name in zip(self.c, ("", "i", "j", "k")):
            if x == 0:
                continue
            s = to_text(x)
            if not name:
                terms.append(s)
            elif x == 1:
                terms.append(name)
            elif x == -1:
                terms.append("-" + name)
            else:
                terms.append(f"({s})*{name}" if " " in s else f"{s}*{name}")
        if not terms:
            return "0"
        out = terms[0]
        for s in terms[1:]:
            out += f" - {s[1:]}" if s.startswith("-") else f" + {s}"
        return out

    __str__ = to_text

    def __repr__(self):
        return f"Quat({self.to_text()!r})"


def gamma_conj(x: Quat) -> Quat:
    return x.conj()


def nrd(x: Quat, A: Optional[QuaternionAlgebra] = None) -> Element:
    if A is not None:
        x = A.coerce(x)
    return x.nrd()


# --- involutions ------------------------------------------------------------


@dataclass(frozen=True)
class Canonical:
    """The canonical (symplectic) involution gamma."""

    def apply(self, x: Quat) -> Quat:
        return x.conj()

    def to_text(self) -> str:
        return "gamma"


@dataclass(frozen=True)
class IntUGamma:
    """x -> u gamma(x) u^-1; orthogonal when u is pure and invertible."""

    u: Quat

    def __post_init__(self):
        if not self.u.is_pure:
            raise InvalidInvolution("u must be pure (zero scalar part) for an orthogonal involution")
        if self.u.nrd() == 0:
            raise NonInvertibleU("u must be invertible")

    def apply(self, x: Quat) -> Quat:
        return self.u * x.conj() * self.u.inverse()

    def to_text(self) -> str:
        return f"int_gamma({self.u.to_text()})"


InvolutionSpec = Union[Canonical, IntUGamma]


def apply_involution(sigma: InvolutionSpec, x: Quat, A: Optional[QuaternionAlgebra] = None) -> Quat:
    if A is not None:
        x = A.coerce(x)
        if isinstance(sigma, IntUGamma) and sigma.u.alg != A:
            raise FieldMismatch("involution defined on a different algebra")
    return sigma.apply(x)


def symmetric_dimension(sigma: InvolutionSpec, A: QuaternionAlgebra) -> int:
    """dim of {x : sigma(x) = x}, by exact rank of sigma - id on the basis."""
    F = A.field
    rows = [list((sigma.apply(e) - e).c) for e in A.basis]
    return 4 - _rank(rows, F)


def _rank(rows, F) -> int:
    rows = [list(r) for r in rows]
    rank, col, ncols = 0, 0, len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncols:
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        p = rows[rank][col]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col] / p
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


@dataclass(frozen=True)
class NormFormResult:
    norm_form: QuadForm
    verdict: Verdict

    @property
    def division(self) -> Optional[bool]:
        if self.verdict.is_anisotropic:
            return True
        if self.verdict.is_isotropic:
            return False
        return None


def norm_form(A: QuaternionAlgebra) -> QuadForm:
    a, b = A.a, A.b
    return QuadForm(A.field, (A.field.one, -a, -b, a * b))


def norm_form_and_division(A: QuaternionAlgebra) -> NormFormResult:
    q = norm_form(A)
    return NormFormResult(q, isotropy_verdict(q))


def division_at(A: QuaternionAlgebra, P: Ordering) -> bool:
    """(a, b) stays division over the real closure at P iff a < 0 and b < 0 there."""
    F = A.field
    return F._sign(A.a, P.path) < 0 and F._sign(A.b, P.path) < 0


# --- skew-hermitian forms and transfer --------------------------------------


@dataclass(frozen=True)
class SkewHermitianForm:
    """<d1, ..., dn> with pure invertible d_i, skew-hermitian for gamma."""

    algebra: QuaternionAlgebra
    entries: tuple

    def __post_init__(self):
        ents = tuple(self.algebra.coerce(d) for d in self.entries)
        for d in ents:
            if not d.is_pure:
                raise InvalidInvolution(f"{d} is not gamma-skew")
            if d.nrd() == 0:
                raise NonInvertible(f"{d} is not invertible")
        object.__setattr__(self, "entries", ents)

    @classmethod
    def from_involution(cls, A: QuaternionAlgebra, sigma: IntUGamma) -> "SkewHermitianForm":
        # Int(u)∘gamma is the adjoint involution of <u> (u^-1 is a scalar multiple of u)
        return cls(A, (sigma.u,))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def to_text(self) -> str:
        return f"sherm({self.algebra.to_text()}; {', '.join(d.to_text() for d in self.entries)})"


def herm_gram(h: SkewHermitianForm, x: Sequence, y: Sequence) -> Quat:
    """h(x, y) = sum gamma(x_i) d_i y_i."""
    if len(x) != h.dim or len(y) != h.dim:
        raise DimensionMismatch(f"vectors must have length {h.dim}")
    A = h.algebra
    total = A.zero
    for xi, d, yi in zip(x, h.entries, y):
        total = total + A.coerce(xi).conj() * d * A.coerce(yi)
    return total


@dataclass(frozen=True)
class TransferResult:
    L: FieldTower
    root: Element
    proper: bool
    gram: tuple  # rows of L-elements
    diagonal_form: Optional[QuadForm]

    @property
    def blocks(self) -> list[tuple[tuple, tuple]]:
        g = self.gram
        return [((g[r][r], g[r][r + 1]), (g[r + 1][r], g[r + 1][r + 1])) for r in range(0, len(g), 2)]


def pi2(x: Quat, L: FieldTower, root: Element) -> Element:
    """Write x = alpha + beta*j with alpha, beta in F(i) and return beta, i -> root."""
    _, _, x2, x3 = x.c
    return L.coerce(x2) + L.coerce(x3) * root


def pi2_transfer(h: SkewHermitianForm, allow_split: bool = False) -> TransferResult:
    """Quadratic form over L = F(sqrt a) attached to h via alpha + beta*j -> beta.

    With ``allow_split`` the degenerate case (a already a square in F) is
    accepted: the result is then the transfer form over F_0(sqrt a) extended
    to F.
    """
    A = h.algebra
    try:
        L, root, proper = adjoin_sqrt(A.field, A.a)
    except InvalidTower as exc:
        raise PreconditionFailed(f"F(sqrt {to_text(A.a)}) is not a real field: {exc}") from None
    if not proper and not allow_split:
        raise NotSplitByL(f"{to_text(A.a)} is already a square in {A.field}")
    n = 2 * h.dim
    zero = L.zero
    gram = [[zero] * n for _ in range(n)]
    basis = (A.one, A.j)
    for idx, d in enumerate(h.entries):
        one_dim = SkewHermitianForm(A, (d,))
        for r, x in enumerate(basis):
            for c, y in enumerate(basis):
                gram[2 * idx + r][2 * idx + c] = pi2(herm_gram(one_dim, (x,), (y,)), L, root)
    diagonal = all(gram[r][c] == 0 for r in range(n) for c in range(n) if r != c)
    diag_form = QuadForm(L, tuple(gram[r][r] for r in range(n))) if diagonal else None
    return TransferResult(L, root, proper, tuple(tuple(row) for row in gram), diag_form)


def involution_signatures(A: QuaternionAlgebra, sigma: InvolutionSpec) -> dict:
    """sgn_P(sigma) at orderings where A is division (0 there); None elsewhere."""
    if not isinstance(sigma, IntUGamma):
        raise InvalidInvolution("signatures are only defined here for orthogonal Int(u)∘gamma")
    return {P: (0 if division_at(A, P) else None) for P in A.field.orderings}


def involution_totally_indefinite(obj) -> Union[bool, Verdict]:
    """Total indefiniteness of an orthogonal involution.

    ``obj`` is a QuadForm (its adjoint involution on a split matrix algebra),
    a SkewHermitianForm over (Q, gamma), or a pair (QuaternionAlgebra, IntUGamma).
    Returns an Unknown verdict when no rule applies.
    """
    if isinstance(obj, QuadForm):
        return is_totally_indefinite(obj)
    if isinstance(obj, SkewHermitianForm):
        tr = pi2_transfer(obj, allow_split=True)
        if tr.diagonal_form is None:
            return Unknown("transfer Gram matrix is not diagonal")
        return is_totally_indefinite(tr.diagonal_form)
    A, sigma = obj
    sgn = involution_signatures(A, sigma)
    if all(v == 0 for v in sgn.values()):
        return True
    return Unknown("signature undefined at orderings where the algebra splits")


def involution_weak_isotropy_via_descent(h, A: Optional[QuaternionAlgebra] = None) -> Verdict:
    """Weak isotropy of adj(h) over F, from its transfer form over L = F(sqrt a).

    Weak isotropy over L descends because a is a sum of squares in F; strong
    anisotropy over L restricts to F trivially.
    """
    if not isinstance(h, SkewHermitianForm):
        A, sigma = h if A is None else (A, h)
        h = SkewHermitianForm.from_involution(A, sigma)
    A = h.algebra
    F = A.field
    if not is_totally_positive(A.a, F):
        raise PreconditionFailed(f"{to_text(A.a)} is not totally positive in {F}: descent does not apply")
    tr = pi2_transfer(h, allow_split=True)
    if tr.diagonal_form is None:
        return Unknown("transfer Gram matrix is not diagonal")
    v = weak_isotropy_verdict(tr.diagonal_form)
    form_txt = str(tr.diagonal_form)
    if v.is_weakly_isotropic:
        if tr.proper:
            return Verdict(Status.WEAKLY_ISOTROPIC, "descent",
                           f"transfer form {form_txt} weakly isotropic over {tr.L}; "
                           f"descends since {to_text(A.a)} is a sum of squares in {F}", parts=(v,))
        return Verdict(Status.WEAKLY_ISOTROPIC, "split",
                       f"{to_text(A.a)} is a square in {F}; transfer form {form_txt} weakly isotropic",
                       parts=(v,))
    if v.is_strongly_anisotropic:
        return Verdict(Status.STRONGLY_ANISOTROPIC, "restriction",
                       f"transfer form {form_txt} strongly anisotropic over {tr.L}; "
                       f"any relation over {F} would persist over {tr.L}", parts=(v,))
    return Unknown("transfer form has no weak-isotropy decision")


# --- witnesses --------------------------------------------------------------


def default_coefficients(F: FieldTower) -> tuple:
    if isinstance(F, Laurent):
        t = F.t
        return (F.one, -F.one, t, -t, t ** -1, -(t ** -1))
    return (F.one, -F.one)


def verify_sum(sigma: InvolutionSpec, A: QuaternionAlgebra, xs: Sequence, left: bool = False) -> Quat:
    """sum sigma(x)x, or sum x sigma(x) with ``left=True``."""
    total = A.zero
    for x in xs:
        x = A.coerce(x)
        sx = sigma.apply(x)
        total = total + (x * sx if left else sx * x)
    return total


@dataclass(frozen=True)
class SearchResult:
    witness: Optional[tuple]
    explored: int

    @property
    def found(self) -> bool:
        return self.witness is not None

    @property
    def note(self) -> str:
        if self.found:
            return "witness verified exactly"
        return "not found within bounds (inconclusive)"


def _candidates(A, generators, coefficients, max_combo):
    seen, out = set(), []
    gens = [A.coerce(g) for g in generators]
    for m in range(1, max_combo + 1):
        for idx in combinations(range(len(gens)), m):
            for coeffs in product(coefficients, repeat=m):
                x = A.zero
                for c, i in zip(coeffs, idx):
                    x = x + c * gens[i]
                if x == A.zero or x in seen or -x in seen:
                    continue
                seen.add(x)
                out.append(x)
    return out


def weak_isotropy_witness_search(sigma: InvolutionSpec, A: QuaternionAlgebra, generators: Sequence,
                                 max_terms: int = 3, coefficients: Optional[Sequence] = None,
                                 max_combo: int = 2, budget: int = 200_000) -> SearchResult:
    """Bounded search for nonzero x_1..x_n with sum sigma(x_i) x_i = 0."""
    if coefficients is None:
        coefficients = default_coefficients(A.field)
    coefficients = [A.field.coerce(c) for c in coefficients]
    cands = _candidates(A, generators, coefficients, max_combo)
    values = [sigma.apply(x) * x for x in cands]
    zero = A.zero
    explored = 0
    level: dict = {}
    for i, v in enumerate(values):
        explored += 1
        if v == zero:
            return SearchResult((cands[i],), explored)
        level.setdefault(v, (i,))
    for _ in range(2, max_terms + 1):
        nxt: dict = {}
        for s, combo in level.items():
            for i, v in enumerate(values):
                explored += 1
                s2 = s + v
                if s2 == zero:
                    witness = tuple(cands[c] for c in combo + (i,))
                    assert verify_sum(sigma, A, witness) == zero
                    return SearchResult(witness, explored)
                nxt.setdefault(s2, combo + (i,))
                if explored >= budget:
                    return SearchResult(None, explored)
        level = nxt
    return SearchResult(None, explored)


@dataclass(frozen=True)
class HermitianSquareResult:
    status: str  # "is-square" | "obstructed" | "unknown"
    reason: str
    witness: Optional[Quat] = None
    ordering: Optional[Ordering] = None


def hermitian_square_obstruction(s: Quat, sigma: InvolutionSpec, A: QuaternionAlgebra,
                                 coefficients: Optional[Sequence] = None) -> HermitianSquareResult:
    """Decide whether s = x sigma(x) using the reduced-norm necessary condition.

    x sigma(x) is sigma-symmetric with Nrd = Nrd(x)^2, so a non-symmetric s,
    or an Nrd(s) that is negative at some ordering, cannot be a hermitian square.
    """
    F = A.field
    s = A.coerce(s)
    if sigma.apply(s) != s:
        return HermitianSquareResult("obstructed", f"{s} is not symmetric under the involution")
    n = s.nrd()
    if n != 0:
        for P in F.orderings:
            if F._sign(n, P.path) < 0:
                return HermitianSquareResult(
                    "obstructed", f"Nrd(s) = {to_text(n)} would be a square but is negative at {P}",
                    ordering=P)
        if not F.square_test(n)[0]:
            return HermitianSquareResult("obstructed", f"Nrd(s) = {to_text(n)} is not a square")
    if coefficients is None:
        coefficients = default_coefficients(F)
    coords = [F.zero] + [F.coerce(c) for c in coefficients]
    for cs in product(coords, repeat=4):
        x = Quat(A, cs)
        if x * sigma.apply(x) == s:
            return HermitianSquareResult("is-square", f"s = x sigma(x) for x = {x}", witness=x)
    return HermitianSquareResult("unknown", "necessary condition holds; no witness within bounds")


# --- Pythagorean index and Brauer bookkeeping --------------------------------


def pind_quaternion(A: QuaternionAlgebra) -> int:
    """2 iff A stays division over some real closure (both slots negative at an ordering)."""
    return 2 if any(division_at(A, P) for P in A.field.orderings) else 1


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def double_centralizer_dims(dim_D: int, deg_K: int) -> tuple[int, int]:
    """([C_D(K):F], [C_D(K):K]) from [D:F] = [K:F] * [C_D(K):F]."""
    if not (_is_power_of_two(dim_D) and _is_power_of_two(deg_K)):
        raise NonDivisible("degrees must be powers of 2")
    index = isqrt(dim_D)
    if index * index != dim_D:
        raise NonDivisible(f"[D:F] = {dim_D} is not a square")
    if index % deg_K:
        raise NonDivisible(f"[K:F] = {deg_K} does not divide ind(D) = {index}")
    return dim_D // deg_K, dim_D // (deg_K * deg_K)
