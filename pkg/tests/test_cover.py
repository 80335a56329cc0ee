import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import letters, rays, words
from oracles import brute_matrix, float_apply
from shiftlab.cover import (
    PHASE_ZERO,
    SKYSCRAPER,
    ChargeVector,
    FunctorWord,
    GeneratorLetter as L,
    LiftedRay,
    SL2ZMatrix,
    apply_letter,
    apply_word,
    classify,
    compare_phases,
    displacement,
    heart_degree,
    ray_from_sheaf_class,
    shift_ray,
    word_matrix,
)


def W(text):
    return FunctorWord.of(text)


class TestRayFromSheafClass:
    def test_skyscraper(self):
        assert ray_from_sheaf_class(ChargeVector(0, 1)) == LiftedRay(-1, 0, 0)

    def test_trivial_bundle(self):
        r = ray_from_sheaf_class(ChargeVector(1, 0))
        assert r == LiftedRay(0, 1, 0)
        assert r.phase_float() == pytest.approx(0.5)

    def test_gcd_reduction(self):
        assert ray_from_sheaf_class(ChargeVector(2, 6)) == LiftedRay(-3, 1, 0)

    @pytest.mark.parametrize("r,d", [(0, -1), (-1, 4), (-2, 0)])
    def test_rejects_outside_cone(self, r, d):
        with pytest.raises(ValueError):
            ray_from_sheaf_class(ChargeVector(r, d))

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            ChargeVector(0, 0)


def test_lifted_ray_rejects_non_primitive():
    with pytest.raises(ValueError):
        LiftedRay(2, 4)
    with pytest.raises(ValueError):
        LiftedRay(0, 0)


class TestComparePhases:
    def test_examples(self):
        assert compare_phases(LiftedRay(0, 1), LiftedRay(-1, 0)) == -1
        assert compare_phases(LiftedRay(1, 0), LiftedRay(0, 1, -1)) == 1
        assert compare_phases(LiftedRay(-3, 1), LiftedRay(-3, 1)) == 0

    @given(rays, rays)
    def test_matches_float_order(self, x, y):
        fx, fy = x.phase_float(), y.phase_float()
        c = compare_phases(x, y)
        if abs(fx - fy) > 1e-9:
            assert c == (1 if fx > fy else -1)
        assert (c == 0) == (x == y)

    @given(rays, rays)
    def test_antisymmetric(self, x, y):
        assert compare_phases(x, y) == -compare_phases(y, x)


class TestApplyLetter:
    def test_mukai_on_skyscraper(self):
        assert apply_letter(L.MUKAI, SKYSCRAPER) == LiftedRay(0, 1, 0)

    def test_twist_on_trivial_bundle(self):
        y = apply_letter(L.TWIST, LiftedRay(0, 1))
        assert y == LiftedRay(-1, 1, 0)
        assert y.phase_float() == pytest.approx(0.75)

    def test_shift_up_on_skyscraper(self):
        assert apply_letter(L.SHIFT_UP, SKYSCRAPER) == LiftedRay(1, 0, 1)

    @given(rays)
    def test_mukai_squared_is_shift_down(self, x):
        assert apply_word(W("mukai mukai"), x) == apply_letter(L.SHIFT_DOWN, x)

    @given(letters, rays)
    def test_matches_float_lift(self, g, x):
        y = apply_letter(g, x)
        assert y.phase_float() == pytest.approx(float_apply([g.value], x.phase_float()), abs=1e-9)

    @given(letters, rays)
    def test_non_shift_letters_move_less_than_one(self, g, x):
        if g in (L.SHIFT_UP, L.SHIFT_DOWN):
            return
        assert abs(apply_letter(g, x).phase_float() - x.phase_float()) < 1


class TestApplyWord:
    def test_identity(self):
        assert apply_word(FunctorWord(), LiftedRay(5, -3, 2)) == LiftedRay(5, -3, 2)

    def test_mukai_squared(self):
        y = apply_word(W("mukai mukai"), SKYSCRAPER)
        assert y == LiftedRay(1, 0, 0)
        assert y.phase_float() == 0

    def test_twist_mukai_six_times(self):
        y = apply_word(W("twist mukai") ** 6, SKYSCRAPER)
        assert displacement(y, SKYSCRAPER) == -2
        assert y.phase_float() == pytest.approx(-1)

    @given(words, rays)
    def test_inverse_cancels(self, w, x):
        assert apply_word(w + w.inverse(), x) == x
        assert apply_word(w.inverse() + w, x) == x


class TestWordMatrix:
    def test_letters(self):
        assert word_matrix(W("twist")) == SL2ZMatrix(1, -1, 0, 1)
        assert word_matrix(W("mukai")) == SL2ZMatrix(0, 1, -1, 0)
        assert word_matrix(W("shift_up")) == SL2ZMatrix(-1, 0, 0, -1)

    @given(words)
    def test_matches_brute_product(self, w):
        M = word_matrix(w)
        assert tuple(map(tuple, M.rows())) == brute_matrix([g.value for g in w])

    @given(words, rays)
    def test_direction_is_matrix_image(self, w, x):
        y = apply_word(w, x)
        assert y.u == word_matrix(w).apply(x.u)

    def test_determinant_enforced(self):
        with pytest.raises(ValueError):
            SL2ZMatrix(1, 1, 1, 1)


class TestClassify:
    def test_examples(self):
        assert classify(word_matrix(W("twist"))).kind == "parabolic"
        assert str(classify(word_matrix(W("mukai")))) == "elliptic order 4"
        assert classify(word_matrix(W("twist mukai"))).order == 6

    def test_identities(self):
        assert classify(word_matrix(FunctorWord())).kind == "plus_identity"
        assert classify(word_matrix(W("shift_up"))).kind == "minus_identity"

    def test_hyperbolic(self):
        assert classify(word_matrix(W("twist twist twist mukai"))).kind == "hyperbolic"

    @given(words)
    def test_elliptic_order_is_exact(self, w):
        M = word_matrix(w)
        cl = classify(M)
        if cl.kind == "elliptic":
            powers = [M ** k for k in range(1, cl.order + 1)]
            assert powers[-1] == SL2ZMatrix(1, 0, 0, 1)
            assert SL2ZMatrix(1, 0, 0, 1) not in powers[:-1]


class TestHeartDegree:
    def test_examples(self):
        assert heart_degree(SKYSCRAPER, PHASE_ZERO) == 0
        assert heart_degree(LiftedRay(1, 0, 0), PHASE_ZERO) == -1
        assert heart_degree(LiftedRay(-3, 1, 0), PHASE_ZERO) == 0

    @given(rays, rays)
    def test_float_oracle(self, x, s):
        diff = x.phase_float() - s.phase_float()
        if abs(diff - round(diff)) > 1e-9:
            assert heart_degree(x, s) == math.ceil(diff) - 1

    @given(rays, rays)
    def test_shift_raises_degree(self, x, s):
        assert heart_degree(shift_ray(x, 1), s) == heart_degree(x, s) + 1
        assert heart_degree(x, shift_ray(s, 1)) == heart_degree(x, s) - 1

    @pytest.mark.parametrize("a,b,alpha", [
        (1, 0, Fraction(0)), (1, 1, Fraction(1, 4)), (0, 1, Fraction(1, 2)),
        (-1, 1, Fraction(3, 4)), (-1, 0, Fraction(1)), (-1, -1, Fraction(-3, 4)),
        (0, -1, Fraction(-1, 2)), (1, -1, Fraction(-1, 4)),
    ])
    @pytest.mark.parametrize("m", [-2, 0, 3])
    def test_floor_identity_at_rational_rays(self, a, b, alpha, m):
        x = alpha + 2 * m
        assert heart_degree(LiftedRay(a, b, m), PHASE_ZERO) == -math.floor(-x) - 1


class TestShiftAndDisplacement:
    @given(rays, st.integers(-9, 9))
    def test_round_trip(self, x, k):
        y = shift_ray(x, k)
        assert displacement(y, x) == k
        assert y.phase_float() == pytest.approx(x.phase_float() + k)

    def test_not_a_translate(self):
        with pytest.raises(ValueError):
            displacement(LiftedRay(1, 1), LiftedRay(1, 0))
