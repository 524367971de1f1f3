"""Acceptance run: one line per criterion, each exact.

Run with pytest, or directly as ``python3 tests/test_acceptance.py``.
"""
import sys

import pytest

from relkit import complete as C
from relkit import equip as E
from relkit import fib as B
from relkit import fincat
from relkit import finrel as R
from relkit import prof as P
from relkit import reglog as L
from relkit.report import Report


def _summary(*reports: Report) -> tuple[bool, str]:
    checks = [c for r in reports for c in r.checks]
    failed = [c.law for c in checks if not c.passed]
    cases = sum(c.cases for c in checks)
    detail = f"{len(checks)} checks, {cases} cases"
    if failed:
        detail += "; failing: " + ", ".join(failed)
    return not failed, detail


def criterion_1():
    """allegory laws, exhaustive on sets <= 3 plus 10^4 random relations on sets <= 5"""
    rep = R.validate_allegory(3, random_count=10_000, seed=0)
    # equality cases only apply to the triples meeting their side condition
    unconditional = [c.cases for c in rep.checks if c.law.startswith("random/") and "equality" not in c.law]
    ok, detail = _summary(rep)
    return ok and set(unconditional) == {10_000}, detail


def criterion_2():
    """Frobenius, separability, unit axioms and tensor functoriality on sets <= 3"""
    return _summary(R.bicategory_laws(3))


def criterion_3():
    """derived meet, top and converse agree with the direct definitions on sets <= 3"""
    return _summary(R.derived_structure_consistency(3))


def criterion_4():
    """Sub(FinSet) fibration axioms on sets <= 4; sequents, pullbacks and exact cells agree on sets <= 3"""
    s4 = B.SubFibration(4)
    return _summary(B.validate(s4, 4), L.pullback_sequent_agreement(3))


M3 = None


def _matr3():
    global M3
    if M3 is None:
        M3 = E.matr(B.SubFibration(3))
    return M3


def criterion_5():
    """matr(Sub) matches relations; matr(pred(matr(Sub))) is isomorphic to matr(Sub) on sets <= 3"""
    m = _matr3()
    iso, rep = E.roundtrip_iso(m, E.matr(E.pred(m)), 3)
    ok, detail = _summary(E.matr_relation_agreement(m, 3), rep)
    return ok and iso is not None, detail


def criterion_6():
    """tabulation agrees with comprehension for every relation on sets <= 3"""
    return _summary(E.tabulation_correspondence(_matr3(), 3))


def criterion_7():
    """every comonad on sets <= 3 has its tabulation as Eilenberg-Moore object"""
    return _summary(E.em_suite(_matr3(), 3))


def criterion_8():
    """pers equivalent to maps of the symmetric splitting; exact completion of FinSet; crf splitting tabular"""
    per_cert, _, _ = C.per_equivalence(B.SubFibration(3), 3)
    ex_cert, _ = C.exact_completion_certificate(3)
    ok, detail = _summary(C.crf_tabular(3))
    for name, cert in (("pers", per_cert), ("exact completion", ex_cert)):
        j = cert.to_json()
        detail += (f"; {name}: {j['domain']['arrows']} arrows, fully faithful {j['fully_faithful']},"
                   f" essentially surjective {j['essentially_surjective']}")
    return ok and per_cert.ok and ex_cert.ok, detail


def criterion_9():
    """profunctor composition vs the zig-zag oracle, co-Yoneda count, Kleisli objects"""
    got, want = P.co_yoneda_instance()
    ok, detail = _summary(P.composition_suite(), P.kleisli_suite())
    return ok and got == want, detail + f"; co-Yoneda {got} vs hom {want}"


def criterion_10():
    """colimits of 50 random set diagrams, interval and loop localizations"""
    rep = fincat.colimit_suite(50, seed=0, word_bound=6)
    return _summary(rep)


def criterion_11():
    """substitution, Frobenius image and satisfaction vs pointwise truth on 10^3 random instances"""
    rep = L.logic_suite(1000, seed=0, max_size=3)
    ok, detail = _summary(rep)
    return ok and all(c.cases == 1000 for c in rep.checks), detail


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8, criterion_9, criterion_10, criterion_11]


def line(n: int, ok: bool, doc: str, detail: str) -> str:
    return f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {doc} ({detail})"


@pytest.mark.parametrize("n", range(1, len(CRITERIA) + 1))
def test_criterion(n, capsys):
    fn = CRITERIA[n - 1]
    ok, detail = fn()
    with capsys.disabled():
        print("\n" + line(n, ok, fn.__doc__, detail))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for n, fn in enumerate(CRITERIA, 1):
        ok, detail = fn()
        results.append(ok)
        print(line(n, ok, fn.__doc__, detail), flush=True)
    sys.exit(0 if all(results) else 1)
