import pytest

from artifact.localsolver import (
    ANTI_SYMPLECTIC,
    EMPTY,
    NON_EMPTY,
    OUT_OF_SCOPE,
    SYMPLECTIC,
    UNDETERMINED,
    FinitePrime,
    HypothesisError,
    RealPlace,
    compare_symplectic,
    exceptional_prime,
    genus,
    solve_local,
    three_torsion_point_exists,
)
from artifact.weierstrass import WeierstrassModel

W = WeierstrassModel
E11 = W(0, -1, 1, -10, -20)
E27 = W(0, 0, 1, 0, -7)
E121 = W(0, -1, 1, -7, 10)


def test_genus_values():
    g7 = genus(7)
    assert (g7.g, g7.hensel_bound) == (3, 36)
    assert genus(11).g == 26
    assert genus(5).g == 0
    assert genus(3).g == 0
    assert genus(13).g == 1 + (13 ** 2 - 1) * (13 - 6) // 24


def test_genus_rejects():
    with pytest.raises(ValueError):
        genus(2)
    with pytest.raises(ValueError):
        genus(9)


def test_small_p_rule():
    for p in (3, 5):
        v = solve_local(E11, p, FinitePrime(7))
        assert v.status == NON_EMPTY and v.rule == "Thm-small-p"


def test_real_place_rule():
    v = solve_local(E11, 7, RealPlace())
    assert v.status == NON_EMPTY and v.rule == "Thm-real"


def test_multiplicative_rule():
    v = solve_local(E11, 7, FinitePrime(11))
    assert v.status == NON_EMPTY and v.rule == "Thm-multiplicative"


def test_hensel_rule():
    # E: y^2 = x^3 + x + 9, good outside 2, 7, 313; primes > 36 use Hensel
    m = W(0, 0, 0, 1, 9)
    v = solve_local(m, 7, FinitePrime(37))
    assert v.status == NON_EMPTY and v.rule == "Hensel"


def test_residual_empty_example():
    # good-reduction lift of y^2 = x^3 + x^2 + 2 over F_3, p = 11
    m = W(0, 1, 0, 0, 2)
    v = solve_local(m, 11, FinitePrime(3))
    assert v.status == EMPTY and v.rule == "Search-empty"


def test_residual_antisymplectic_example():
    m = W(0, 0, 0, 1, 9)
    v = solve_local(m, 7, FinitePrime(11))
    assert v.status == NON_EMPTY and v.rule == "Search-antisymplectic"
    assert tuple(v.witness["partner"]) == (0, 0, 0, 1, 7)


def test_e12_biconditional():
    v = solve_local(E27, 7, FinitePrime(3))
    assert v.status == NON_EMPTY and v.rule == "Thm-e12"
    v = solve_local(E27, 13, FinitePrime(3))
    assert v.status == EMPTY and v.rule == "Thm-e12"


def test_e4_tame_example():
    v = solve_local(E121, 37, FinitePrime(11))
    assert v.status == NON_EMPTY and v.rule == "Thm-e4-tame"


def test_out_of_scope_additive_at_p():
    v = solve_local(E27, 3, FinitePrime(3))
    # p = 3 is small, so the small-p rule wins; use p = 11 on a curve
    # additive at 11
    v = solve_local(E121, 11, FinitePrime(11))
    assert v.status == OUT_OF_SCOPE and v.rule == "OutOfScope-additive-p"


def test_good_at_p_rules():
    # 11a1 at ell = p = 7 (good reduction): p = 7 = 3 mod 4 so rule (1)
    # fails; squarefree part of -7 * Delta_7 decides rule (2)
    v = solve_local(E11, 7, FinitePrime(7))
    assert v.status in (NON_EMPTY, UNDETERMINED)
    assert v.rule.startswith("Thm-good-p") or v.rule == "Cor-good-p-exception"


def test_twist_rules_prefix():
    # an e=2 curve: quadratic twist of a good curve by ell
    from artifact.weierstrass import quadratic_twist

    base = W(0, 0, 0, 1, 1)
    tw = quadratic_twist(base, 5)
    v = solve_local(tw, 7, FinitePrime(5))
    assert v.rule.startswith("Twist-e2/")
    assert v.status == NON_EMPTY


def test_exceptional_prime():
    # residual curve with Delta_ell = -11 over F_3
    m = W(0, 1, 0, 0, 2)
    assert exceptional_prime(m, 3) == 11
    # Delta_ell = -4 cases have squarefree part 1: no exceptional prime
    # y^2 = x^3 + x + 2 over F_5 lifted: a = 2? compute directly instead:
    found = None
    for a6 in range(1, 30):
        try:
            mm = W(0, 0, 0, 1, a6)
        except Exception:
            continue
        from artifact.weierstrass import ReductionKind, reduction_kind
        if reduction_kind(mm, 5) != ReductionKind.GOOD:
            continue
        from artifact.fq import Fq
        from artifact.fqcurves import CurveOverFq, trace_of_frobenius
        a = trace_of_frobenius(CurveOverFq(Fq(5, 1), 0, 0, 0, 1, a6 % 5))
        if a * a - 4 * 5 == -11:
            found = mm
            break
    if found is not None:
        assert exceptional_prime(found, 5) == 11


def test_three_torsion_fixtures():
    assert three_torsion_point_exists(W(0, 0, 1, 0, 0), 5)    # (0,0) order 3
    assert three_torsion_point_exists(W(0, 0, 0, 0, 4), 7)    # (0,2) order 3
    assert not three_torsion_point_exists(W(0, 0, 0, 1, 0), 5)


def test_three_torsion_matches_point_count_oracle():
    # for good ell not dividing 3*Delta, a Q_ell 3-torsion point exists
    # iff 3 divides the F_ell point count
    from artifact.fq import Fq
    from artifact.fqcurves import CurveOverFq, count_points
    from artifact.weierstrass import ReductionKind, reduction_kind

    checked = 0
    for ell in (5, 7, 11, 13):
        for a4 in range(-3, 4):
            for a6 in range(-3, 4):
                try:
                    m = W(0, 0, 0, a4, a6)
                except Exception:
                    continue
                if m.discriminant() % ell == 0 or ell == 3:
                    continue
                if reduction_kind(m, ell) != ReductionKind.GOOD:
                    continue
                n = count_points(CurveOverFq(Fq(ell, 1), 0, 0, 0,
                                             a4 % ell, a6 % ell))
                assert three_torsion_point_exists(m, ell) == (n % 3 == 0)
                checked += 1
    assert checked > 100


def test_compare_symplectic_identity():
    res = compare_symplectic(E121, E121, 11, 7)
    assert res.symplectic_type == SYMPLECTIC
    assert res.r == 0 and res.iso_guarantee


def test_compare_symplectic_derived_e3_pair():
    A = W(5, 0, 25, 0, 0)   # v(Delta) = 8, e = 3 at 5
    B = W(5, 0, 5, 0, 0)    # v(Delta) = 4, e = 3 at 5
    res = compare_symplectic(A, B, 5, 7)
    assert res.symplectic_type == ANTI_SYMPLECTIC
    assert res.r == 1 and res.t == 0
    # symmetry
    res2 = compare_symplectic(B, A, 5, 7)
    assert res2.symplectic_type == res.symplectic_type
    assert (res2.r, res2.t) == (res.r, res.t)


def test_compare_symplectic_e3_wild_corpus_pair():
    from artifact.corpus import resolve

    res = compare_symplectic(resolve("25920z1"), resolve("25920v1"), 3, 7)
    assert res.symplectic_type == ANTI_SYMPLECTIC
    assert res.criterion == "e3-wild" and res.r == 1


def test_compare_symplectic_hypothesis_rejection():
    # e = 12 curve does not satisfy any comparison criterion
    with pytest.raises(HypothesisError):
        compare_symplectic(E27, E27, 3, 7)
    # (2,4) without the same-field flag is rejected
    j1 = W(0, -1, 0, -19, -33)
    with pytest.raises(HypothesisError):
        compare_symplectic(j1, j1, 2, 7)
    res = compare_symplectic(j1, j1, 2, 7, same_field_assumed=True)
    assert res.symplectic_type == SYMPLECTIC


def test_verdict_statuses_only_from_documented_rules():
    # Empty verdicts must come from biconditional rules or the search
    for m, p, ell in ((E27, 13, 3), (W(0, 1, 0, 0, 2), 11, 3)):
        v = solve_local(m, p, FinitePrime(ell))
        if v.status == EMPTY:
            assert (v.rule.startswith("Thm-e") or v.rule == "Search-empty"
                    or v.rule.startswith("Twist-"))
