"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line."""
import random
import time
from contextlib import contextmanager

import pytest

import conftest
from realforms import (
    Q,
    IntUGamma,
    QuaternionAlgebra,
    SkewHermitianForm,
    check_certificate,
    double_centralizer_dims,
    ed_check_field,
    euclid,
    hermitian_square_obstruction,
    involution_signatures,
    involution_totally_indefinite,
    involution_weak_isotropy_via_descent,
    is_totally_indefinite,
    is_totally_positive,
    isotropy_verdict,
    laurent,
    norm_form_and_division,
    nrd,
    parse_element,
    parse_field,
    parse_form,
    pi2_transfer,
    pind_quaternion,
    quad_ext,
    sign_at,
    signature_at,
    signatures,
    springer_decompose,
    verify_sum,
    verify_witness,
    weak_isotropy_verdict,
    weak_isotropy_witness_search,
)
from realforms.fields import LaurentPoly
from realforms.forms import QuadForm, Status
from realforms.scenarios import RunOptions, run_scenario, tp_corpus

from oracles import numeric_sign

SEED = 20240601
CASES = 1000

Qt = laurent(Q)
Q2 = quad_ext(Q, 2)
Q2t = laurent(Q2)
R = euclid(Q)
Rt = laurent(R)
t = Qt.t
A2T = QuaternionAlgebra(Qt, 2, t)
TT = QuaternionAlgebra(Qt, t, t)


@contextmanager
def criterion(n: int, text: str):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        conftest.ACCEPTANCE_LINES.append(f"FAIL criterion {n:2d}: {text}")
        print(f"FAIL criterion {n}: {text}")
        raise
    line = f"PASS criterion {n:2d}: {text} ({time.perf_counter() - start:.2f}s)"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)


def _transfer(A=A2T):
    return pi2_transfer(SkewHermitianForm(A, (A.j, A.k)))


def test_criterion_01_pi2_matrices():
    with criterion(1, "pi2(<j>) = diag(1, -t), pi2(<k>) = diag(sqrt2, t*sqrt2) exactly"):
        A = A2T
        L = Q2t
        r2 = parse_element("sqrt(2)", L)
        tr1 = pi2_transfer(SkewHermitianForm(A, (A.j,)))
        tr2 = pi2_transfer(SkewHermitianForm(A, (A.k,)))
        assert tr1.L == L and tr2.L == L
        assert tr1.gram == ((1, 0), (0, -L.t))
        assert tr2.gram == ((r2, 0), (0, L.t * r2))


def test_criterion_02_transfer_form():
    with criterion(2, "transfer form = <1, -t, sqrt2, t*sqrt2> entrywise"):
        expected = parse_form("form(laurent(quadext(Q, 2)); 1, -t, sqrt(2), t*sqrt(2))")
        q = _transfer().diagonal_form
        assert q is not None and q.field == expected.field
        assert q.entries == expected.entries


def test_criterion_03_signature_vector():
    with criterion(3, "signatures (2, 2, -2, 2) at the 4 orderings; totally indefinite"):
        q = _transfer().diagonal_form
        labels = [str(o) for o in q.field.orderings]
        assert labels == ["(sqrt(2)+, t>0)", "(sqrt(2)+, t<0)", "(sqrt(2)-, t>0)", "(sqrt(2)-, t<0)"]
        assert signatures(q) == [2, 2, -2, 2]
        # sign-table oracle: numeric embedding of each entry
        oracle = [sum(numeric_sign(e, q.field, o.path) for e in q.entries) for o in q.field.orderings]
        assert oracle == [2, 2, -2, 2]
        assert is_totally_indefinite(q) is True


def test_criterion_04_counterexample_verdicts():
    with criterion(4, "strongly anisotropic over Q(sqrt2)((t)) and Q((t)); isotropic over R((t))"):
        q = _transfer().diagonal_form
        v = weak_isotropy_verdict(q)
        assert v.status is Status.STRONGLY_ANISOTROPIC and check_certificate(q, v)
        h = SkewHermitianForm(A2T, (A2T.j, A2T.k))
        assert involution_weak_isotropy_via_descent(h).status is Status.STRONGLY_ANISOTROPIC
        AR = QuaternionAlgebra(Rt, 2, Rt.t)
        trR = pi2_transfer(SkewHermitianForm(AR, (AR.j, AR.k)), allow_split=True)
        vR = isotropy_verdict(trR.diagonal_form)
        assert vR.status is Status.ISOTROPIC and check_certificate(trR.diagonal_form, vR)
        assert involution_weak_isotropy_via_descent(SkewHermitianForm(AR, (AR.j, AR.k))).status \
            is Status.WEAKLY_ISOTROPIC


def test_criterion_05_ed_check():
    with criterion(5, "all 16 pairs <1,a,b,-ab> over R((t)) isotropic"):
        report = ed_check_field(Rt)
        assert len(report.pairs) == 16 and report.isotropic_count == 16
        for a, b, v in report.pairs:
            q = QuadForm(Rt, (Rt.one, a, b, -(a * b)))
            assert v.is_isotropic and check_certificate(q, v)
            if v.witness is not None:
                assert verify_witness(q, v.witness)


def test_criterion_06_hamilton():
    with criterion(6, "(-1,-1)/Q division; witness (1, j); sgn 0 and totally indefinite"):
        H = QuaternionAlgebra(Q, -1, -1)
        assert norm_form_and_division(H).division is True
        sigma = IntUGamma(H.i)
        assert verify_sum(sigma, H, (H.one, H.j)) == 0
        res = weak_isotropy_witness_search(sigma, H, [H.one, H.i, H.j, H.k])
        assert res.found and verify_sum(sigma, H, res.witness) == 0
        HR = QuaternionAlgebra(R, -1, -1)
        sgn = involution_signatures(HR, IntUGamma(HR.i))
        assert list(sgn.values()) == [0]
        assert involution_totally_indefinite((HR, IntUGamma(HR.i))) is True


def test_criterion_07_hermitian_square():
    with criterion(7, "three-term sum = 2j; Nrd(2j) = -4t; obstruction at t > 0"):
        sigma = IntUGamma(TT.i)
        xs = (TT.i, 1 + TT.j, t ** -1 * TT.k)
        assert verify_sum(sigma, TT, xs, left=True) == 2 * TT.j
        assert nrd(2 * TT.j) == -4 * t
        r = hermitian_square_obstruction(2 * TT.j, sigma, TT)
        assert r.status == "obstructed"
        assert r.ordering is not None and r.ordering.path == (0, 1)
        assert sign_at(-4 * t, r.ordering) == -1


def test_criterion_08_pind():
    with criterion(8, "pind((-1,-1)/Q) = 2, pind((2,t)) = 1, pind((s,t)) = 1 for 20 totally positive s"):
        assert pind_quaternion(QuaternionAlgebra(Q, -1, -1)) == 2
        assert pind_quaternion(A2T) == 1
        rng = random.Random(SEED)
        fields = [Q, Qt, Q2, Q2t]
        for _ in range(20):
            F = rng.choice(fields)
            s = F.zero
            while s == 0:
                s = sum((_rand_elem(rng, F) ** 2 for _ in range(rng.randint(1, 3))), F.zero)
            assert is_totally_positive(s, F)
            tt = F.t if hasattr(F, "t") else F.coerce(rng.choice([-3, -1, 2, 5]))
            assert pind_quaternion(QuaternionAlgebra(F, s, tt)) == 1


def test_criterion_09_double_centralizer():
    with criterion(9, "[C_D(L):L] = 2^4 for n = 2..6"):
        for n in range(2, 7):
            assert double_centralizer_dims(2 ** (2 * n), 2 ** (n - 2))[1] == 2 ** 4


# --- criterion 10: property suites -------------------------------------------

def _rand_base(rng, F):
    if F is Q or F is R:
        return F.coerce(rng.randint(-9, 9)) / rng.randint(1, 4)
    # Q(sqrt 2)
    return F.coerce(rng.randint(-6, 6)) + rng.randint(-6, 6) * F.gen


def _rand_elem(rng, F, monomial=False, max_terms=3):
    if not hasattr(F, "t"):
        return _rand_base(rng, F)
    terms = {}
    for _ in range(1 if monomial else rng.randint(1, max_terms)):
        terms[rng.randint(-2, 2)] = _rand_base(rng, F.base)
    return LaurentPoly.from_dict(F, terms)


def _rand_nonzero(rng, F, monomial=False):
    while True:
        x = _rand_elem(rng, F, monomial)
        if x != 0:
            return x


def _rand_form(rng, F, dmin=1, dmax=5, monomial=True):
    return QuadForm(F, tuple(_rand_nonzero(rng, F, monomial) for _ in range(rng.randint(dmin, dmax))))


PROPERTY_FIELDS = [Q, Q2, Qt, Q2t, Rt]


def test_criterion_10a_sign_multiplicativity():
    with criterion(10, f"sign multiplicativity ({CASES} cases)"):
        rng = random.Random(SEED)
        for _ in range(CASES):
            F = rng.choice(PROPERTY_FIELDS)
            x, y = _rand_nonzero(rng, F), _rand_nonzero(rng, F)
            for o in F.orderings:
                assert sign_at(x * y, o) == sign_at(x, o) * sign_at(y, o)


def test_criterion_10b_nrd_multiplicativity():
    with criterion(10, f"Nrd multiplicativity ({CASES} cases)"):
        rng = random.Random(SEED + 1)
        algebras = [A2T, TT, QuaternionAlgebra(Q, -1, -1), QuaternionAlgebra(Q2t, Q2.gen, -Q2t.t)]
        for _ in range(CASES):
            A = rng.choice(algebras)
            x = A.quat(*(_rand_elem(rng, A.field, max_terms=2) for _ in range(4)))
            y = A.quat(*(_rand_elem(rng, A.field, max_terms=2) for _ in range(4)))
            assert nrd(x * y) == nrd(x) * nrd(y)


def test_criterion_10c_springer_signature():
    with criterion(10, f"Springer-signature compatibility at all orderings ({CASES} forms)"):
        rng = random.Random(SEED + 2)
        for _ in range(CASES):
            F = rng.choice([Qt, Q2t, Rt])
            q = _rand_form(rng, F, 0, 6, monomial=False)
            q1, q2 = springer_decompose(q)
            for o in F.orderings:
                base = next(b for b in F.base.orderings if b.path == o.path[:-1])
                assert signature_at(q, o) == signature_at(q1, base) + o.path[-1] * signature_at(q2, base)


def test_criterion_10d_weak_isotropy_implies_total_indefiniteness():
    with criterion(10, f"weakly isotropic => totally indefinite ({CASES} forms)"):
        rng = random.Random(SEED + 3)
        hits = 0
        for _ in range(CASES):
            F = rng.choice(PROPERTY_FIELDS)
            q = _rand_form(rng, F)
            v = weak_isotropy_verdict(q)
            if v.is_weakly_isotropic:
                hits += 1
                assert is_totally_indefinite(q)
        assert hits >= 100


def test_criterion_10e_isotropy_witnesses():
    with criterion(10, f"isotropy witnesses re-verify to zero ({CASES} forms)"):
        rng = random.Random(SEED + 4)
        for _ in range(CASES):
            F = rng.choice([Q, Q2, Qt, Q2t, Rt])
            a, c = _rand_nonzero(rng, F, True), _rand_nonzero(rng, F, True)
            rest = list(_rand_form(rng, F, 0, 3).entries)
            entries = rest + [a, -a * c * c]
            rng.shuffle(entries)
            q = QuadForm(F, tuple(entries))
            v = isotropy_verdict(q)
            assert v.is_isotropic and v.witness is not None
            assert any(x != 0 for x in v.witness)
            assert q.value(v.witness) == 0


def test_criterion_10f_tp_laurent_corpus():
    with criterion(10, "tp-laurent implication on a 200-form corpus, zero failures"):
        corpus = tp_corpus(0, 200)
        assert len(corpus) == 200
        failures = 0
        for q in corpus:
            qR = q.base_change(Rt)
            vR, vQ = weak_isotropy_verdict(qR), weak_isotropy_verdict(q)
            assert vR.decisive and vQ.decisive
            failures += vR.is_weakly_isotropic and not vQ.is_weakly_isotropic
        assert failures == 0
        report = run_scenario("tp-laurent", RunOptions(seed=0, corpus_size=200))
        assert report.passed
