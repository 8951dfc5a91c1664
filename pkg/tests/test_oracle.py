"""Exact-arithmetic core: rational matrices, wrappers, and the joint law."""

from fractions import Fraction

import numpy as np
import pytest

from qcc_lab.errors import (DimensionMismatchError, InvariantError,
                            PromiseViolationError)
from qcc_lab.oracle import (BinaryObservable, DensityMatrix, ExpectationTriple,
                            JointProbs, Projector, RationalMatrix, SignVector,
                            bloch_observable, dj_target_probability,
                            expectations_to_probs, joint_plus_probability,
                            maximally_entangled, observable_to_projector,
                            predict_expectations, predict_joint_probs,
                            probs_to_expectations, projector_to_observable,
                            sign_vector_observable, sign_vector_projector,
                            singlet)


# --- rational matrices ----------------------------------------------------


def test_rational_matrix_identity_and_trace():
    eye = RationalMatrix.identity(3)
    assert eye.trace() == 1 * 3
    assert eye.entry(0, 0) == 1 and eye.entry(0, 1) == 0


def test_rational_matrix_equals_across_denominators():
    half = RationalMatrix(np.array([[1, 0], [0, 1]], dtype=object) * 2, 4)
    also_half = RationalMatrix(np.array([[1, 0], [0, 1]], dtype=object), 2)
    assert half.equals(also_half)
    assert not half.equals(RationalMatrix.identity(2))


def test_rational_matmul_matches_float():
    rng = np.random.default_rng(5)
    a = RationalMatrix(rng.integers(-9, 10, (4, 4)), 7)
    b = RationalMatrix(rng.integers(-9, 10, (4, 4)), 3)
    np.testing.assert_allclose((a @ b).to_float(), a.to_float() @ b.to_float(),
                               atol=1e-12)
    np.testing.assert_allclose(a.kron(b).to_float(),
                               np.kron(a.to_float(), b.to_float()), atol=1e-12)


def test_rational_one_minus_and_trace_dot():
    p = RationalMatrix(np.array([[1, 1], [1, 1]], dtype=object), 2)
    q = p.one_minus()
    assert (p.to_float() + q.to_float() == np.eye(2)).all()
    # Tr(p q) = Fraction sum of elementwise products with q^T
    expected = Fraction(
        int((p.num * q.num.T).sum()), p.den * q.den)
    assert p.trace_dot(q) == expected == 0


def test_rational_matrix_rejects_float_input():
    with pytest.raises(InvariantError):
        RationalMatrix(np.array([[0.5, 0], [0, 0.5]]), 2)
    with pytest.raises(InvariantError):
        RationalMatrix(np.eye(2, dtype=np.int64), 0)


# --- sign vectors ----------------------------------------------------------


def test_sign_vector_parse_both_formats():
    assert SignVector.parse("+-+-").coords == (1, -1, 1, -1)
    assert SignVector.parse("1,-1,1,-1").coords == (1, -1, 1, -1)
    with pytest.raises(InvariantError):
        SignVector.parse("+-+")  # odd length
    with pytest.raises(InvariantError):
        SignVector.parse("+0+-")


def test_sign_vector_roundtrips():
    for text in ("++", "+-", "-+--", "++--+-"):
        vec = SignVector.parse(text)
        assert vec.to_text() == text
        assert SignVector.from_bits(vec.to_bits()) == vec
        assert SignVector.from_hex(vec.to_hex(), vec.n) == vec


def test_all_vectors_enumeration():
    vectors = list(SignVector.all_vectors(4))
    assert len(vectors) == 16
    assert len({v.coords for v in vectors}) == 16
    with pytest.raises(InvariantError):
        list(SignVector.all_vectors(3))


def test_sign_vector_dot():
    a = SignVector.parse("++--")
    b = SignVector.parse("+-+-")
    assert a.dot(b) == 0
    assert a.dot(a) == 4
    with pytest.raises(DimensionMismatchError):
        a.dot(SignVector.parse("++"))


# --- operator wrappers ------------------------------------------------------


def test_projector_rejects_non_idempotent():
    with pytest.raises(InvariantError):
        Projector(np.array([[0.5, 0.0], [0.0, 0.7]]))
    with pytest.raises(InvariantError):
        Projector(np.array([[0.0, 1.0], [0.0, 0.0]]))  # not Hermitian


def test_projector_complement():
    p = sign_vector_projector(SignVector.parse("+-"))
    q = p.complement()
    np.testing.assert_allclose(p.entries.to_float() + q.entries.to_float(),
                               np.eye(2))


def test_observable_projector_conversion():
    a = sign_vector_observable(SignVector.parse("++--"))
    p = observable_to_projector(a)
    back = projector_to_observable(p)
    assert back.entries.equals(a.entries)


def test_observable_requires_involution():
    with pytest.raises(InvariantError):
        BinaryObservable(np.diag([1.0, 0.5]))
    # a valid non-exact observable: Pauli X
    BinaryObservable(np.array([[0.0, 1.0], [1.0, 0.0]]))


def test_density_matrix_validation():
    with pytest.raises(InvariantError):
        DensityMatrix(np.eye(4) / 2)  # trace 2
    with pytest.raises(InvariantError):
        DensityMatrix(np.diag([1.5, -0.5, 0.0, 0.0]))  # negative eigenvalue
    with pytest.raises(InvariantError):
        DensityMatrix(np.eye(3) / 3)  # dimension not a perfect square
    state = maximally_entangled(2)
    assert state.dim == 4 and state.dim_local == 2 and state.exact


# --- joint law and closed forms ---------------------------------------------


@pytest.mark.parametrize("n", [2, 4])
def test_trace_law_matches_closed_form_all_pairs(n):
    """Trace route vs the (a.b)^2/n^3 closed form, all pairs (not just promise)."""
    state = maximally_entangled(n)
    vectors = list(SignVector.all_vectors(n))
    projectors = {v: sign_vector_projector(v) for v in vectors}
    for a in vectors:
        for b in vectors:
            probs = predict_joint_probs(projectors[a], projectors[b], state)
            assert probs.p_pp == joint_plus_probability(a, b)
            assert probs.exact


def test_joint_probs_marginals_match_quantum_targets():
    n = 4
    state = maximally_entangled(n)
    a = SignVector.parse("++--")
    b = SignVector.parse("+-+-")
    probs = predict_joint_probs(sign_vector_projector(a),
                                sign_vector_projector(b), state)
    # each local projector is rank 1 on a maximally mixed marginal
    assert probs.p_pp + probs.p_pm == Fraction(1, n)
    assert probs.p_pp + probs.p_mp == Fraction(1, n)
    assert probs.p_pp + probs.p_mp + probs.p_pm + probs.p_mm == 1


def test_float_path_agrees_with_exact():
    n = 4
    state_f = maximally_entangled(n, exact=False)
    state_e = maximally_entangled(n)
    rng = np.random.default_rng(11)
    vectors = list(SignVector.all_vectors(n))
    for _ in range(25):
        a = vectors[rng.integers(len(vectors))]
        b = vectors[rng.integers(len(vectors))]
        exact = predict_joint_probs(sign_vector_projector(a),
                                    sign_vector_projector(b), state_e)
        loose = predict_joint_probs(sign_vector_projector(a, exact=False),
                                    sign_vector_projector(b, exact=False), state_f)
        assert not loose.exact
        for field in ("p_pp", "p_mp", "p_pm", "p_mm"):
            assert getattr(loose, field) == pytest.approx(
                float(getattr(exact, field)), abs=1e-12)


def test_predict_expectations_consistent_with_probs():
    n = 2
    state = maximally_entangled(n)
    a = SignVector.parse("++")
    b = SignVector.parse("+-")
    probs = predict_joint_probs(sign_vector_projector(a),
                                sign_vector_projector(b), state)
    triple = predict_expectations(sign_vector_observable(a),
                                  sign_vector_observable(b), state)
    assert probs_to_expectations(probs) == triple


def test_singlet_expectations_from_bloch_observables():
    state = singlet(exact=False)
    z = bloch_observable((0.0, 0.0, 1.0))
    x = bloch_observable((1.0, 0.0, 0.0))
    tilted = bloch_observable((0.6, 0.0, 0.8))
    same = predict_expectations(z, z, state)
    assert same.e_ab == pytest.approx(-1.0, abs=1e-12)
    assert same.e_a == pytest.approx(0.0, abs=1e-12)
    assert same.e_b == pytest.approx(0.0, abs=1e-12)
    cross = predict_expectations(z, x, state)
    assert cross.e_ab == pytest.approx(0.0, abs=1e-12)
    slant = predict_expectations(z, tilted, state)
    assert slant.e_ab == pytest.approx(-0.8, abs=1e-12)


def test_bloch_observable_requires_unit_direction():
    with pytest.raises(InvariantError):
        bloch_observable((1.0, 1.0, 0.0))
    obs = bloch_observable((0.0, 1.0, 0.0))
    np.testing.assert_allclose(obs.entries @ obs.entries, np.eye(2), atol=1e-12)


# --- probability/expectation bijection --------------------------------------


def test_bijection_known_points():
    certain = JointProbs(Fraction(1), Fraction(0), Fraction(0), Fraction(0))
    assert probs_to_expectations(certain) == ExpectationTriple(
        Fraction(1), Fraction(1), Fraction(1))
    flat = JointProbs(*([Fraction(1, 4)] * 4))
    assert probs_to_expectations(flat) == ExpectationTriple(
        Fraction(0), Fraction(0), Fraction(0))


def test_bijection_roundtrip_exact():
    rng = np.random.default_rng(3)
    for _ in range(300):
        weights = rng.integers(0, 20, 4)
        if weights.sum() == 0:
            continue
        total = int(weights.sum())
        probs = JointProbs(*(Fraction(int(w), total) for w in weights))
        back = expectations_to_probs(probs_to_expectations(probs))
        assert back == probs and back.exact


def test_bijection_rejects_incoherent_triple():
    # e_ab = 1 with opposite marginals would force a negative probability
    with pytest.raises(InvariantError):
        expectations_to_probs(ExpectationTriple(
            Fraction(1), Fraction(1), Fraction(-1)))


def test_joint_probs_validation():
    with pytest.raises(InvariantError):
        JointProbs(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2),
                   Fraction(-1, 2))
    with pytest.raises(InvariantError):
        JointProbs(0.5, 0.5, 0.5, 0.5)  # sums to 2
    mixed = JointProbs.from_plus_parts(Fraction(1, 4), Fraction(1, 4),
                                       Fraction(1, 4))
    assert mixed.p_mm == Fraction(1, 4)


# --- promise-family closed forms ---------------------------------------------


@pytest.mark.parametrize("n", [2, 4, 6])
def test_target_probability_on_promise(n):
    for a in SignVector.all_vectors(n):
        assert dj_target_probability(a, a) == Fraction(1, n)
        assert joint_plus_probability(a, a) == Fraction(1, n)
    a = SignVector((1,) * n)
    b = SignVector((1,) * (n // 2) + (-1,) * (n // 2))
    assert dj_target_probability(a, b) == 0
    assert joint_plus_probability(a, b) == 0


def test_target_probability_rejects_off_promise():
    a = SignVector.parse("++++")
    b = SignVector.parse("+++-")  # dot = 2
    with pytest.raises(PromiseViolationError):
        dj_target_probability(a, b)
    # the general closed form still applies off-promise
    assert joint_plus_probability(a, b) == Fraction(4, 64)
