"""Multiplier search: admissibility, norm equation, minimality, conjecture."""

import math
import random

import pytest

from cast_forge.cyclotomic import (
    SumOfRoots,
    b_vector_value,
    canonicalize,
    has_rational_arg,
    integer,
    is_root_of_unity,
    mu,
)
from cast_forge.search import (
    TABLE1_ROWS,
    LambdaCandidate,
    check_admissible,
    derived_b_vector,
    enumerate_lambda_candidates,
    find_min_irr_multiplier,
    is_irreducible_sum,
    solve_eta_for_lambda,
    table_csv,
    table_report,
    verify_conjecture1,
)


def candidate_for(n, b):
    val = b_vector_value(n, b)
    return LambdaCandidate(n=n, b=tuple(b), value=val, float_value=val.float_approx())


class TestAdmissible:
    def test_table_n8(self):
        assert check_admissible(8, (3, 1, 0, 1))

    def test_violates_odd_condition(self):
        assert not check_admissible(5, (3, 0, 0))

    def test_table_n7(self):
        assert check_admissible(7, (3, 1))

    def test_monotone_condition(self):
        # b_k >= b_{k+2} must hold from k = 0
        assert not check_admissible(9, (1, 1, 0, 2, 0))

    def test_small_n_rejected(self):
        with pytest.raises(ValueError):
            check_admissible(3, (3,))


class TestEnumerate:
    def test_n6_chain(self):
        cands = enumerate_lambda_candidates(6, 7.0)
        floats = [c.float_value for c in cands]
        assert floats == sorted(floats)
        b_by_value = {c.b: c for c in cands}
        # the collapsed chain from zeta_12^2 + conj = 1
        assert (3, 1) in b_by_value
        assert (4, 1) in b_by_value
        assert (5, 1) in b_by_value
        c = b_by_value[(4, 1)]
        assert (3, 1, 1) in c.reps  # merged duplicate by value

    def test_n5_uses_golden_identity(self):
        cands = enumerate_lambda_candidates(5, 5.0)
        vals = {c.b for c in cands}
        assert (3, 1) in vals
        target = b_vector_value(5, (3, 1))
        merged = [c for c in cands if c.value == target]
        assert len(merged) == 1
        assert (4, 0, 1) in merged[0].reps  # 1 + mu(5,2)' identity

    def test_n4_small_bound_empty(self):
        # smallest admissible value is 1 + mu(4,2) ~ 2.41 but needs b0 >= 1;
        # the first candidate with b0 >= 3 exceeds 3
        cands = enumerate_lambda_candidates(4, 3.0)
        assert all(c.b0 < 3 for c in cands)

    def test_strictly_increasing_values(self):
        for n in (5, 7, 8, 12):
            cands = enumerate_lambda_candidates(n, 7.0)
            for a, b in zip(cands, cands[1:]):
                assert a.float_value <= b.float_value + 1e-12


class TestDerivedB:
    def test_paper_n7_cancellation(self):
        # eta = 1 + zeta + zeta^((n+1)/2) folds e_4 against e_3 for n=7
        assert derived_b_vector(7, (0, 1, 4)) == (3, 1)

    def test_n6_rational_collapse(self):
        assert derived_b_vector(6, (0, 1, 3)) == (4, 1)

    def test_n12_deep_identity_stays_apart(self):
        # cos identities between distinct irrational diagonals do not merge
        assert derived_b_vector(12, (0, 2, 5, 19)) != (4, 1)
        v = SumOfRoots(12, (0, 2, 5, 19)).value()
        assert v * v.conj() == b_vector_value(12, (4, 1)).value

    def test_negative_returns_none(self):
        # two roots at distance n cancel: reducible, negative constant content
        assert derived_b_vector(4, (0, 4)) is None or derived_b_vector(4, (0, 4))[0] >= 0


class TestSolve:
    def test_n7_family_solution(self):
        lam = candidate_for(7, (3, 1))
        sols = solve_eta_for_lambda(7, lam, 3)
        assert any(s.orbit_normal_form() == (0, 1, 4) for s in sols)

    def test_n7_no_solution_for_second_diagonal(self):
        lam = candidate_for(7, (3, 0, 1))
        assert solve_eta_for_lambda(7, lam, 3) == []

    def test_n4_table_solution_at_l4(self):
        lam = candidate_for(4, (6, 1))
        sols = solve_eta_for_lambda(4, lam, 4)
        norm = SumOfRoots(4, (0, 1, 1, 3)).orbit_normal_form()
        assert any(s.orbit_normal_form() == norm for s in sols)

    def test_solutions_satisfy_norm_exactly(self):
        lam = candidate_for(8, (3, 1, 0, 1))
        for s in solve_eta_for_lambda(8, lam, 3):
            v = s.value()
            assert v * v.conj() == lam.value.value

    def test_dihedral_symmetry_of_solutions(self):
        lam = candidate_for(7, (3, 1))
        sols = solve_eta_for_lambda(7, lam, 3, dedupe=False)
        # all rotations/reflections of a solution solve the same equation
        s = sols[0]
        for c in range(14):
            for refl in (False, True):
                img = (s.reflected() if refl else s).rotated(c)
                v = img.value()
                assert v * v.conj() == lam.value.value


class TestIrreducible:
    def test_zero_is_reducible(self):
        assert not is_irreducible_sum(SumOfRoots(3, (0, 2, 4)))

    def test_pinwheel_eta_irreducible(self):
        assert is_irreducible_sum(SumOfRoots(2, (0, 0, 1)))

    def test_collapsing_n6(self):
        # zeta_12^2 + zeta_12^(-2) = 1: a four-term sum with a shorter form
        s = SumOfRoots(6, (0, 2, 10, 1))
        assert not is_irreducible_sum(s)

    def test_random_brute_force_agreement(self):
        rng = random.Random(37)
        for _ in range(40):
            n = rng.randint(2, 6)
            l = rng.randint(1, 4)
            s = SumOfRoots(n, [rng.randint(0, 2 * n - 1) for _ in range(l)])
            got = is_irreducible_sum(s)
            # oracle: enumerate all shorter sums directly
            v = s.value()
            found_shorter = v.is_zero()
            if not found_shorter:
                import itertools

                for ll in range(1, l):
                    for combo in itertools.combinations_with_replacement(range(2 * n), ll):
                        if SumOfRoots(n, combo).value() == v:
                            found_shorter = True
                            break
                    if found_shorter:
                        break
            assert got == (not found_shorter)


class TestFindMinimal:
    @pytest.mark.parametrize("n", sorted(TABLE1_ROWS))
    def test_reproduces_table(self, n):
        res = find_min_irr_multiplier(n)
        row = TABLE1_ROWS[n]
        assert res.eta.orbit_normal_form() == SumOfRoots(n, row["eta"]).orbit_normal_form()
        assert res.lam.value == b_vector_value(n, row["b"])
        v = res.eta.value()
        assert has_rational_arg(v) is None
        assert is_irreducible_sum(res.eta)

    def test_n3_discrepancy_note(self):
        res = find_min_irr_multiplier(3)
        assert res.lam.value.value == integer(3, 7)
        assert any("prints lambda_1 = 3" in note for note in res.notes)

    def test_lmax_guard(self):
        with pytest.raises(ValueError):
            find_min_irr_multiplier(5, l_max=2)

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_minimality_brute_force_oracle(self, n):
        """No admissible irrational multiplier below the found one (l <= 5)."""
        res = find_min_irr_multiplier(n)
        best = res.eta.value()
        best_norm = (best * best.conj()).complex_approx().real
        import itertools

        m = 2 * n
        seen = set()
        for l in range(1, 6):
            for combo in itertools.combinations_with_replacement(range(m), l):
                if combo in seen or combo[0] != 0:
                    continue
                s = SumOfRoots(n, combo)
                v = s.value()
                if v.is_zero():
                    continue
                nf = (v * v.conj()).complex_approx().real
                if nf >= best_norm - 1e-9:
                    continue
                if has_rational_arg(v) is not None:
                    continue
                if not is_irreducible_sum(s):
                    continue
                if n >= 4:
                    db = derived_b_vector(n, combo)
                    if db is None or not check_admissible(n, db):
                        continue
                raise AssertionError(f"smaller multiplier {combo} for n={n}")


class TestConjecture:
    def test_n16(self):
        rep = verify_conjecture1(16)
        assert rep.holds

    def test_n20(self):
        rep = verify_conjecture1(20)
        assert rep.holds

    def test_precondition(self):
        with pytest.raises(ValueError):
            verify_conjecture1(12)
        with pytest.raises(ValueError):
            verify_conjecture1(18)

    def test_l_bounds_recorded(self):
        rep = verify_conjecture1(16)
        assert rep.l_bounds == {"4+mu(n,2)": 4, "5+mu(n,2)": 5}


class TestReport:
    def test_rows_match_table(self):
        rows = table_report([2, 3, 7, 12])
        for row in rows:
            assert row["table_match"]
        n3 = next(r for r in rows if r["n"] == 3)
        assert "discrepancy" in n3

    def test_csv_shape(self):
        rows = table_report([5])
        text = table_csv(rows)
        lines = text.strip().splitlines()
        assert lines[0].startswith("n,eta_exponents")
        assert lines[1].startswith("5,")

    def test_empty(self):
        assert table_csv([]).strip() == (
            "n,eta_exponents,lambda_b_vector,abs_eta,method,table_match,notes"
        )


class TestDeterminism:
    def test_repeated_runs_identical(self):
        a = find_min_irr_multiplier(8)
        b = find_min_irr_multiplier(8)
        assert a.eta.alphas == b.eta.alphas
        assert a.lam.b == b.lam.b
