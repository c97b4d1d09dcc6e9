import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cstarframes.algebra import (
    AlgebraDescriptor,
    AlgebraElement,
    Structure,
    loewner_leq,
)
from cstarframes.errors import (
    DescriptorMismatchError,
    NotPositiveError,
    SingularError,
)

FULL2 = AlgebraDescriptor(2, Structure.FULL)
FULL3 = AlgebraDescriptor(3, Structure.FULL)
DIAG3 = AlgebraDescriptor(3, Structure.DIAGONAL)


def _random_element(descriptor, rng):
    n = descriptor.dim
    if descriptor.structure is Structure.DIAGONAL:
        return AlgebraElement.from_diag(
            descriptor, rng.standard_normal(n) + 1j * rng.standard_normal(n)
        )
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return AlgebraElement(descriptor, m)


def _random_psd(descriptor, rng):
    a = _random_element(descriptor, rng)
    return a @ a.adjoint()


dims = st.integers(min_value=1, max_value=4)
seeds = st.integers(min_value=0, max_value=2**31 - 1)
structures = st.sampled_from([Structure.FULL, Structure.DIAGONAL])


@settings(max_examples=60, deadline=None)
@given(dim=dims, seed=seeds, structure=structures)
def test_cstar_identity(dim, seed, structure):
    # the defining identity ||a* a|| == ||a||^2
    rng = np.random.default_rng(seed)
    a = _random_element(AlgebraDescriptor(dim, structure), rng)
    assert (a.adjoint() @ a).norm == pytest.approx(a.norm**2, rel=1e-12, abs=1e-15)


@settings(max_examples=60, deadline=None)
@given(dim=dims, seed=seeds, structure=structures)
def test_norm_submultiplicative_and_triangle(dim, seed, structure):
    rng = np.random.default_rng(seed)
    d = AlgebraDescriptor(dim, structure)
    a = _random_element(d, rng)
    b = _random_element(d, rng)
    assert (a @ b).norm <= a.norm * b.norm * (1 + 1e-12)
    assert (a + b).norm <= a.norm + b.norm + 1e-12
    assert a.adjoint().norm == pytest.approx(a.norm, rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(dim=dims, seed=seeds, structure=structures)
def test_psd_sqrt_squares_back(dim, seed, structure):
    rng = np.random.default_rng(seed)
    p = _random_psd(AlgebraDescriptor(dim, structure), rng)
    r = p.psd_sqrt()
    assert r.is_hermitian()
    assert r.is_positive()
    np.testing.assert_allclose(
        (r @ r).entries, p.entries, rtol=0, atol=1e-11 * max(1.0, p.norm)
    )


@settings(max_examples=60, deadline=None)
@given(dim=dims, seed=seeds, structure=structures)
def test_inverse_roundtrip(dim, seed, structure):
    rng = np.random.default_rng(seed)
    d = AlgebraDescriptor(dim, structure)
    # shift a PSD element to keep it comfortably invertible
    a = _random_psd(d, rng) + AlgebraElement.identity(d) * 0.5
    ident = AlgebraElement.identity(d)
    np.testing.assert_allclose(
        (a @ a.inv()).entries, ident.entries, rtol=0, atol=1e-9 * max(1.0, a.norm)
    )


@settings(max_examples=40, deadline=None)
@given(dim=dims, seed=seeds, structure=structures)
def test_loewner_order_respects_psd_shift(dim, seed, structure):
    rng = np.random.default_rng(seed)
    d = AlgebraDescriptor(dim, structure)
    h = _random_psd(d, rng)
    p = _random_psd(d, rng)
    assert loewner_leq(h, h + p)
    eig = h.hermitian_eigenvalues()
    bump = AlgebraElement.identity(d) * (float(eig[-1] - eig[0]) + 1.0)
    assert not loewner_leq(h + bump, h)


@settings(max_examples=40, deadline=None)
@given(dim=dims, seed=seeds)
def test_eigenvalues_match_numpy(dim, seed):
    rng = np.random.default_rng(seed)
    a = _random_element(AlgebraDescriptor(dim, Structure.FULL), rng)
    h = a + a.adjoint()
    np.testing.assert_allclose(
        h.hermitian_eigenvalues(), np.linalg.eigvalsh(h.entries), rtol=1e-12, atol=1e-12
    )


def test_descriptor_validation():
    with pytest.raises(ValueError):
        AlgebraDescriptor(0, Structure.FULL)
    with pytest.raises(ValueError):
        AlgebraDescriptor(-2, Structure.DIAGONAL)


def test_diagonal_structure_enforced():
    with pytest.raises(ValueError):
        AlgebraElement(DIAG3, np.ones((3, 3)))
    # exact zeros off the diagonal are fine
    a = AlgebraElement(DIAG3, np.diag([1.0, 2.0, 3.0]))
    assert a.norm == 3.0


def test_wrong_shape_rejected():
    with pytest.raises(ValueError):
        AlgebraElement(FULL2, np.zeros((3, 3)))
    with pytest.raises(ValueError):
        AlgebraElement(FULL2, np.zeros(2))


def test_mixed_descriptor_arithmetic_rejected():
    a = AlgebraElement.identity(FULL2)
    b = AlgebraElement.identity(FULL3)
    with pytest.raises(DescriptorMismatchError):
        a + b
    with pytest.raises(DescriptorMismatchError):
        a @ b


def test_from_diag_roundtrip():
    vals = np.array([1.0 + 2.0j, -0.5, 3.0])
    a = AlgebraElement.from_diag(DIAG3, vals)
    np.testing.assert_array_equal(a.diag(), vals)
    assert a.norm == 3.0


def test_diagonal_norm_is_max_modulus():
    a = AlgebraElement.from_diag(DIAG3, [3.0, -4.0, 1.0j])
    assert a.norm == 4.0
    # and agrees with the dense 2-norm
    assert a.norm == pytest.approx(np.linalg.norm(a.entries, 2))


def test_hermitian_detection():
    rng = np.random.default_rng(5)
    a = _random_element(FULL3, rng)
    h = a + a.adjoint()
    assert h.is_hermitian()
    assert h.hermitian_defect() <= 1e-14
    skew = a - a.adjoint()
    if skew.norm > 1e-9:
        assert not skew.is_hermitian()


def test_is_positive_rejects_negative_and_nonhermitian():
    neg = AlgebraElement.from_diag(DIAG3, [1.0, -0.5, 2.0])
    assert not neg.is_positive()
    rng = np.random.default_rng(6)
    a = _random_element(FULL2, rng)
    if (a - a.adjoint()).norm > 1e-6:
        assert not a.is_positive()


def test_psd_sqrt_requires_positive():
    neg = AlgebraElement.from_diag(DIAG3, [1.0, -1.0, 2.0])
    with pytest.raises(NotPositiveError):
        neg.psd_sqrt()


def test_singular_inverse_raises():
    s = AlgebraElement.from_diag(DIAG3, [1.0, 0.0, 2.0])
    with pytest.raises(SingularError):
        s.inv()
    full_singular = AlgebraElement(FULL2, np.array([[1.0, 1.0], [1.0, 1.0]]))
    with pytest.raises(SingularError):
        full_singular.inv()


def test_scalar_arithmetic():
    a = AlgebraElement.from_diag(DIAG3, [1.0, 2.0, 3.0])
    np.testing.assert_array_equal((a * 2.0).diag(), [2.0, 4.0, 6.0])
    np.testing.assert_array_equal((a / 2.0).diag(), [0.5, 1.0, 1.5])
    np.testing.assert_array_equal((-a).diag(), [-1.0, -2.0, -3.0])
    np.testing.assert_array_equal((a - a).diag(), [0.0, 0.0, 0.0])


def test_entries_are_defensive_copies():
    m = np.eye(2, dtype=np.complex128)
    a = AlgebraElement(FULL2, m)
    m[0, 0] = 99.0
    assert a.entries[0, 0] == 1.0
    with pytest.raises(ValueError):
        a.entries[0, 0] = 5.0  # read-only view
