"""Diagonal quadratic forms over tower fields and certified (weak) isotropy."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from enum import Enum
from itertools import combinations
from typing import Optional, Sequence, Union

from .errors import FieldMismatch, NotLaurentField, OrderingFieldMismatch, ZeroElement, ZeroScalar
from .fields import (
    Element,
    EuclideanHull,
    FieldTower,
    Laurent,
    Ordering,
    Unsupported,
    square_class_reps,
    to_text,
)


@dataclass(frozen=True)
class QuadForm:
    """The diagonal form <a1, ..., an>; the empty form is allowed."""

    field: FieldTower
    entries: tuple

    def __post_init__(self):
        entries = tuple(self.field.coerce(a) for a in self.entries)
        if any(a == 0 for a in entries):
            raise ZeroElement("quadratic forms are nondegenerate: zero entry")
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __len__(self):
        return len(self.entries)

    def value(self, vector: Sequence) -> Element:
        if len(vector) != self.dim:
            raise ValueError("vector length does not match the form dimension")
        total = self.field.zero
        for a, x in zip(self.entries, vector):
            x = self.field.coerce(x)
            total = total + a * x * x
        return total

    def perp(self, other: "QuadForm") -> "QuadForm":
        if other.field != self.field:
            raise FieldMismatch(f"forms over {self.field} and {other.field}")
        return QuadForm(self.field, self.entries + other.entries)

    __add__ = perp

    def scaled(self, c) -> "QuadForm":
        c = self.field.coerce(c)
        if c == 0:
            raise ZeroScalar("cannot scale a form by zero")
        return QuadForm(self.field, tuple(c * a for a in self.entries))

    def multiple(self, n: int) -> "QuadForm":
        if n < 0:
            raise ValueError("multiplicity must be nonnegative")
        return QuadForm(self.field, self.entries * n)

    def base_change(self, field: FieldTower) -> "QuadForm":
        return QuadForm(field, self.entries)

    def to_text(self) -> str:
        return f"form({self.field.to_text()}; {', '.join(to_text(a) for a in self.entries)})"

    def __str__(self):
        return "<" + ", ".join(to_text(a) for a in self.entries) + ">"


def form(field: FieldTower, *entries) -> QuadForm:
    return QuadForm(field, tuple(entries))


def form_perp(q1: QuadForm, q2: QuadForm) -> QuadForm:
    return q1.perp(q2)


def form_scale(c, q: QuadForm) -> QuadForm:
    return q.scaled(c)


def form_multiple(n: int, q: QuadForm) -> QuadForm:
    return q.multiple(n)


# --- verdicts ---------------------------------------------------------------


class Status(str, Enum):
    ISOTROPIC = "isotropic"
    ANISOTROPIC = "anisotropic"
    WEAKLY_ISOTROPIC = "weakly-isotropic"
    STRONGLY_ANISOTROPIC = "strongly-anisotropic"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Verdict:
    status: Status
    certificate: str
    detail: str = ""
    witness: Optional[tuple] = None
    ordering: Optional[Ordering] = None
    indices: tuple = ()
    parts: tuple = dc_field(default=())

    @property
    def decisive(self) -> bool:
        return self.status is not Status.UNKNOWN

    @property
    def is_isotropic(self) -> bool:
        return self.status is Status.ISOTROPIC

    @property
    def is_anisotropic(self) -> bool:
        return self.status is Status.ANISOTROPIC

    @property
    def is_weakly_isotropic(self) -> bool:
        return self.status is Status.WEAKLY_ISOTROPIC

    @property
    def is_strongly_anisotropic(self) -> bool:
        return self.status is Status.STRONGLY_ANISOTROPIC

    def to_record(self) -> dict:
        rec = {"verdict": self.status.value, "certificate_kind": self.certificate}
        if self.detail:
            rec["detail"] = self.detail
        if self.witness is not None:
            rec["witness"] = [to_text(x) for x in self.witness]
        if self.ordering is not None:
            rec["ordering"] = str(self.ordering)
        return rec


def Unknown(reason: str) -> Verdict:
    return Verdict(Status.UNKNOWN, "none", reason)


# --- signatures -------------------------------------------------------------


def signature_at(q: QuadForm, P: Ordering) -> int:
    if P.field != q.field:
        raise OrderingFieldMismatch(f"ordering of {P.field} used on a form over {q.field}")
    return sum(q.field._sign(a, P.path) for a in q.entries)


def signatures(q: QuadForm) -> list[int]:
    return [signature_at(q, P) for P in q.field.orderings]


def _definite_ordering(q: QuadForm) -> Optional[Ordering]:
    for P in q.field.orderings:
        if abs(signature_at(q, P)) == q.dim:
            return P
    return None


def is_totally_indefinite(q: QuadForm) -> bool:
    if q.dim <= 1:
        return False
    return _definite_ordering(q) is None


# --- Springer ---------------------------------------------------------------


def springer_decompose(q: QuadForm) -> tuple[QuadForm, QuadForm]:
    """Split q = q1 _|_ <t> q2 into residue forms over the base field.

    Each entry t^v * u contributes the residue u(0) to q1 (v even) or q2 (v odd);
    units with residue c differ from c by a square (Hensel), so nothing is lost.
    """
    F = q.field
    if not isinstance(F, Laurent):
        raise NotLaurentField(f"{F} is not a Laurent field")
    even, odd = [], []
    for a in q.entries:
        (even if a.valuation % 2 == 0 else odd).append(a.residue)
    return QuadForm(F.base, tuple(even)), QuadForm(F.base, tuple(odd))


def _springer_parts(q: QuadForm) -> tuple[list[int], list[int]]:
    even = [i for i, a in enumerate(q.entries) if a.valuation % 2 == 0]
    odd = [i for i, a in enumerate(q.entries) if a.valuation % 2]
    return even, odd


def _lift_residue_witness(q: QuadForm, idx: list[int], w: Sequence) -> Optional[tuple]:
    # entries c*t^v with residue witness y lift to x = y * t^(-floor(v/2))
    F = q.field
    vec = [F.zero] * q.dim
    for i, y in zip(idx, w):
        a = q.entries[i]
        if not a.is_monomial:
            return None
        vec[i] = F.coerce(y) * F.t ** (-(a.valuation // 2))
    return tuple(vec)


# --- isotropy ---------------------------------------------------------------


def _hyperbolic_pair(q: QuadForm) -> Optional[Verdict]:
    # prefer a pair whose square root is representable, so a witness comes back
    F = q.field
    fallback = None
    for i, j in combinations(range(q.dim), 2):
        ai, aj = q.entries[i], q.entries[j]
        ok, s = F.square_test(-(ai * aj))
        if not ok:
            continue
        detail = f"-a{i + 1}*a{j + 1} is a square"
        if s is None:
            fallback = fallback or Verdict(Status.ISOTROPIC, "hyperbolic-pair", detail, indices=(i, j))
            continue
        # ai*s^2 + aj*ai^2 = ai*(-ai*aj) + aj*ai^2 = 0
        vec = [F.zero] * q.dim
        vec[i], vec[j] = s, ai
        return Verdict(Status.ISOTROPIC, "witness", detail, witness=tuple(vec), indices=(i, j))
    return fallback


def isotropy_verdict(q: QuadForm) -> Verdict:
    n = q.dim
    if n <= 1:
        return Verdict(Status.ANISOTROPIC, "dimension", f"dimension {n}")
    found = _hyperbolic_pair(q)
    if found is not None:
        return found
    P = _definite_ordering(q)
    if P is not None:
        return Verdict(Status.ANISOTROPIC, "definite", f"definite at {P}", ordering=P)
    F = q.field
    if isinstance(F, EuclideanHull):
        return Verdict(Status.ISOTROPIC, "euclidean-indefinite", "indefinite over a Euclidean field")
    if n == 2:
        return Verdict(Status.ANISOTROPIC, "binary-determinant", "-a1*a2 is not a square")
    if isinstance(F, Laurent):
        q1, q2 = springer_decompose(q)
        v1, v2 = isotropy_verdict(q1), isotropy_verdict(q2)
        if v1.is_isotropic or v2.is_isotropic:
            idx_even, idx_odd = _springer_parts(q)
            which, idx = (v1, idx_even) if v1.is_isotropic else (v2, idx_odd)
            witness = None
            if which.witness is not None:
                witness = _lift_residue_witness(q, idx, which.witness)
            label = "first" if which is v1 else "second"
            return Verdict(Status.ISOTROPIC, "residue-recursion",
                           f"{label} residue form is isotropic", witness=witness, parts=(v1, v2))
        if v1.is_anisotropic and v2.is_anisotropic:
            return Verdict(Status.ANISOTROPIC, "residue-recursion",
                           "both residue forms are anisotropic", parts=(v1, v2))
        return Unknown("a residue form has no decision")
    return Unknown(f"indefinite form of dimension {n} over {F}: no decision rule")


def weak_isotropy_verdict(q: QuadForm) -> Verdict:
    F = q.field
    if isinstance(F, Laurent):
        q1, q2 = springer_decompose(q)
        w1, w2 = weak_isotropy_verdict(q1), weak_isotropy_verdict(q2)
        if w1.is_weakly_isotropic or w2.is_weakly_isotropic:
            label = "first" if w1.is_weakly_isotropic else "second"
            return Verdict(Status.WEAKLY_ISOTROPIC, "residue-recursion",
                           f"{label} residue form is weakly isotropic", parts=(w1, w2))
        if w1.is_strongly_anisotropic and w2.is_strongly_anisotropic:
            return Verdict(Status.STRONGLY_ANISOTROPIC, "residue-recursion",
                           "both residue forms are strongly anisotropic", parts=(w1, w2))
        return Unknown("a residue form has no decision")
    if q.dim <= 1:
        return Verdict(Status.STRONGLY_ANISOTROPIC, "dimension", f"dimension {q.dim}")
    P = _definite_ordering(q)
    if P is None:
        return Verdict(Status.WEAKLY_ISOTROPIC, "total-indefiniteness",
                       f"indefinite at all {len(F.orderings)} orderings")
    return Verdict(Status.STRONGLY_ANISOTROPIC, "definite", f"definite at {P}", ordering=P)


def verify_witness(q: QuadForm, vector: Sequence) -> bool:
    vec = [q.field.coerce(x) for x in vector]
    return any(x != 0 for x in vec) and q.value(vec) == 0


def check_certificate(q: QuadForm, v: Verdict) -> bool:
    """Re-verify a verdict's certificate without rerunning the decision procedure."""
    if v.status is Status.UNKNOWN:
        return True
    if v.witness is not None and not verify_witness(q, v.witness):
        return False
    kind = v.certificate
    if kind == "dimension":
        return q.dim <= 1
    if kind == "witness":
        return v.witness is not None
    if kind == "hyperbolic-pair":
        i, j = v.indices
        return q.field.square_test(-(q.entries[i] * q.entries[j]))[0]
    if kind == "definite":
        return abs(signature_at(q, v.ordering)) == q.dim
    if kind == "euclidean-indefinite":
        return isinstance(q.field, EuclideanHull) and q.dim >= 2 and _definite_ordering(q) is None
    if kind == "binary-determinant":
        a, b = q.entries
        return not q.field.square_test(-(a * b))[0]
    if kind == "total-indefiniteness":
        return is_totally_indefinite(q)
    if kind == "residue-recursion":
        q1, q2 = springer_decompose(q)
        v1, v2 = v.parts
        if not (check_certificate(q1, v1) and check_certificate(q2, v2)):
            return False
        if v.status is Status.ISOTROPIC:
            return v1.is_isotropic or v2.is_isotropic
        if v.status is Status.ANISOTROPIC:
            return v1.is_anisotropic and v2.is_anisotropic
        if v.status is Status.WEAKLY_ISOTROPIC:
            return v1.is_weakly_isotropic or v2.is_weakly_isotropic
        return v1.is_strongly_anisotropic and v2.is_strongly_anisotropic
    return False


# --- ED ---------------------------------------------------------------------


@dataclass(frozen=True)
class EDReport:
    field: FieldTower
    pairs: tuple  # (a, b, Verdict)

    @property
    def verified(self) -> bool:
        return all(v.is_isotropic for _, _, v in self.pairs)

    @property
    def isotropic_count(self) -> int:
        return sum(v.is_isotropic for _, _, v in self.pairs)


def ed_check_field(field: FieldTower) -> Union[EDReport, Unsupported]:
    """Check <1, a, b, -ab> is isotropic for all square-class representatives a, b."""
    reps = square_class_reps(field)
    if isinstance(reps, Unsupported):
        return reps
    pairs = []
    for ra in reps:
        for rb in reps:
            a, b = ra.representative, rb.representative
            q = QuadForm(field, (field.one, a, b, -(a * b)))
            pairs.append((a, b, isotropy_verdict(q)))
    return EDReport(field, tuple(pairs))


@dataclass(frozen=True)
class NotByPermutation:
    detail: str


def effective_diagonalize(q: QuadForm) -> Union[QuadForm, NotByPermutation]:
    """Reorder entries so that signs are non-increasing at every ordering."""
    F = q.field
    orders = F.orderings
    vectors = [tuple(F._sign(a, P.path) > 0 for P in orders) for a in q.entries]
    order = sorted(range(q.dim), key=lambda i: -sum(vectors[i]))
    for i, j in zip(order, order[1:]):
        if any(r and not p for p, r in zip(vectors[i], vectors[j])):
            return NotByPermutation(
                f"sign vectors of {to_text(q.entries[i])} and {to_text(q.entries[j])} are incomparable")
    return QuadForm(F, tuple(q.entries[i] for i in order))
