import numpy as np
import pytest

from cstarframes.algebra import AlgebraDescriptor, AlgebraElement, Structure
from cstarframes.errors import (
    DescriptorMismatchError,
    NotInGlPlusError,
    NotSelfAdjointError,
    SingularError,
)
from cstarframes.module import (
    GlPlusCertificate,
    ModuleDescriptor,
    ModuleElement,
    ModuleOperator,
)
from cstarframes.sampling import (
    random_algebra_element,
    random_module_element,
    random_operator,
    random_positive_operator,
)

FULL2_K2 = ModuleDescriptor(AlgebraDescriptor(2, Structure.FULL), 2)
DIAG3_K2 = ModuleDescriptor(AlgebraDescriptor(3, Structure.DIAGONAL), 2)
MODULES = [FULL2_K2, DIAG3_K2, ModuleDescriptor(AlgebraDescriptor(1, Structure.FULL), 3)]


@pytest.mark.parametrize("module", MODULES)
def test_inner_is_conjugate_symmetric(module):
    rng = np.random.default_rng(0)
    x = random_module_element(module, rng)
    y = random_module_element(module, rng)
    np.testing.assert_allclose(
        x.inner(y).entries, y.inner(x).adjoint().entries, rtol=0, atol=1e-14
    )


@pytest.mark.parametrize("module", MODULES)
def test_inner_left_linearity(module):
    rng = np.random.default_rng(1)
    x = random_module_element(module, rng)
    y = random_module_element(module, rng)
    z = random_module_element(module, rng)
    a = random_algebra_element(module.algebra, rng)
    lhs = (x.scale(a) + y).inner(z)
    rhs = a @ x.inner(z) + y.inner(z)
    np.testing.assert_allclose(lhs.entries, rhs.entries, rtol=0, atol=1e-12 * max(1, lhs.norm))


@pytest.mark.parametrize("module", MODULES)
def test_norm_is_cstar_norm_of_inner(module):
    rng = np.random.default_rng(2)
    x = random_module_element(module, rng)
    assert x.norm == pytest.approx(np.sqrt(x.inner(x).norm), rel=1e-12)
    assert x.inner(x).is_positive()


def test_componentwise_inner_is_sum_of_products():
    # <x, y> = sum_j x_j y_j* against a hand-rolled loop
    rng = np.random.default_rng(3)
    x = random_module_element(FULL2_K2, rng)
    y = random_module_element(FULL2_K2, rng)
    acc = np.zeros((2, 2), dtype=np.complex128)
    for j in range(2):
        acc += x.component(j).entries @ y.component(j).entries.conj().T
    np.testing.assert_allclose(x.inner(y).entries, acc, rtol=0, atol=1e-13)


def test_zero_element():
    z = ModuleElement.zeros(DIAG3_K2)
    assert z.norm == 0.0
    assert z.inner(z).norm == 0.0


def test_component_count_validated():
    a = AlgebraElement.identity(FULL2_K2.algebra)
    with pytest.raises(ValueError):
        ModuleElement(FULL2_K2, [a])  # needs 2 components
    wrong = AlgebraElement.identity(AlgebraDescriptor(3, Structure.FULL))
    with pytest.raises(DescriptorMismatchError):
        ModuleElement(FULL2_K2, [a, wrong])


# ---------------------------------------------------------------------------
# operators


@pytest.mark.parametrize("module", MODULES)
def test_adjoint_moves_across_inner(module):
    rng = np.random.default_rng(4)
    t = random_operator(module, rng)
    x = random_module_element(module, rng)
    y = random_module_element(module, rng)
    lhs = t.apply(x).inner(y)
    rhs = x.inner(t.adjoint().apply(y))
    np.testing.assert_allclose(lhs.entries, rhs.entries, rtol=0, atol=1e-12 * max(1, lhs.norm))


def test_then_matches_flat_product():
    rng = np.random.default_rng(5)
    s = random_operator(FULL2_K2, rng)
    t = random_operator(FULL2_K2, rng)
    x = random_module_element(FULL2_K2, rng)
    composed = s.then(t)
    np.testing.assert_allclose(composed.flat, s.flat @ t.flat, rtol=0, atol=1e-14)
    np.testing.assert_allclose(
        composed.apply(x).row, t.apply(s.apply(x)).row, rtol=0, atol=1e-13
    )


def test_conjugate_by_flat_identity():
    rng = np.random.default_rng(6)
    t = random_operator(DIAG3_K2, rng)
    k = random_operator(DIAG3_K2, rng)
    expected = k.flat.conj().T @ t.flat @ k.flat
    np.testing.assert_allclose(t.conjugate_by(k).flat, expected, rtol=0, atol=1e-14)


def test_from_blocks_and_block_roundtrip():
    rng = np.random.default_rng(7)
    n, k = 2, 2
    blocks = [
        [random_algebra_element(FULL2_K2.algebra, rng) for _ in range(k)] for _ in range(k)
    ]
    t = ModuleOperator.from_blocks(FULL2_K2, blocks)
    for i in range(k):
        for j in range(k):
            np.testing.assert_array_equal(t.block(i, j).entries, blocks[i][j].entries)
    # block action: (Tx)_i = sum_j x_j B[i][j]
    x = random_module_element(FULL2_K2, rng)
    out = t.apply(x)
    for i in range(k):
        acc = np.zeros((n, n), dtype=np.complex128)
        for j in range(k):
            acc += x.component(j).entries @ blocks[i][j].entries
        np.testing.assert_allclose(out.component(i).entries, acc, rtol=0, atol=1e-13)


def test_componentwise_operator_is_kron():
    a = AlgebraElement(
        FULL2_K2.algebra, np.array([[1.0, 2.0], [0.0, 1.0]], dtype=np.complex128)
    )
    t = ModuleOperator.componentwise(FULL2_K2, a)
    np.testing.assert_array_equal(t.flat, np.kron(np.eye(2), a.entries))


def test_operator_norm_is_largest_singular_value():
    rng = np.random.default_rng(8)
    for module in MODULES:
        t = random_operator(module, rng)
        assert t.norm == pytest.approx(np.linalg.norm(t.flat, 2), rel=1e-12)


def test_identity_norm_and_apply():
    ident = ModuleOperator.identity(DIAG3_K2)
    assert ident.norm == 1.0
    x = random_module_element(DIAG3_K2, np.random.default_rng(9))
    np.testing.assert_array_equal(ident.apply(x).row, x.row)


def test_diagonal_index_blocks_roundtrip():
    rng = np.random.default_rng(10)
    t = random_operator(DIAG3_K2, rng)
    rebuilt = ModuleOperator.from_index_blocks(DIAG3_K2, t.index_blocks())
    np.testing.assert_array_equal(rebuilt.flat, t.flat)


def test_diagonal_operator_keeps_structure():
    rng = np.random.default_rng(11)
    t = random_operator(DIAG3_K2, rng)
    p = t.then(t.adjoint()).psd_sqrt()
    # off-index entries stay exactly zero through sqrt and inverse
    blocks = p.index_blocks()
    dense = np.zeros_like(p.flat)
    k, n = 2, 3
    for d in range(n):
        for i in range(k):
            for j in range(k):
                dense[i * n + d, j * n + d] = blocks[d][i, j]
    np.testing.assert_array_equal(p.flat, dense)


def test_positive_operator_sqrt_and_inv():
    rng = np.random.default_rng(12)
    for module in MODULES:
        p = random_positive_operator(module, rng, spectrum=(0.5, 2.0))
        r = p.psd_sqrt()
        np.testing.assert_allclose(r.then(r).flat, p.flat, rtol=0, atol=1e-12)
        ident = ModuleOperator.identity(module)
        np.testing.assert_allclose(
            p.then(p.inv()).flat, ident.flat, rtol=0, atol=1e-11
        )


def test_hermitian_eigenvalues_sorted_and_match_numpy():
    rng = np.random.default_rng(13)
    t = random_operator(FULL2_K2, rng)
    h = t + t.adjoint()
    eigs = h.hermitian_eigenvalues()
    assert np.all(np.diff(eigs) >= 0)
    np.testing.assert_allclose(eigs, np.linalg.eigvalsh(h.flat), rtol=1e-12, atol=1e-12)


def test_singular_operator_inverse_raises():
    t = ModuleOperator.zeros(FULL2_K2)
    with pytest.raises(SingularError):
        t.inv()


def test_surjectivity_check():
    ident = ModuleOperator.identity(FULL2_K2)
    assert ident.is_surjective()
    assert not ModuleOperator.zeros(FULL2_K2).is_surjective()


# ---------------------------------------------------------------------------
# certificates and witnesses


def test_certify_gl_plus_happy_path():
    rng = np.random.default_rng(14)
    p = random_positive_operator(FULL2_K2, rng, spectrum=(0.5, 2.0))
    cert = p.certify_gl_plus()
    assert isinstance(cert, GlPlusCertificate)
    assert 0.4 < cert.eig_min <= cert.eig_max < 2.1
    assert cert.norm == cert.eig_max
    assert cert.inv_norm == pytest.approx(1.0 / cert.eig_min)
    assert cert.sqrt_norm == pytest.approx(np.sqrt(cert.eig_max))
    assert cert.inv_sqrt_norm == pytest.approx(1.0 / np.sqrt(cert.eig_min))
    assert cert.operator is p


def test_certify_gl_plus_rejects_non_self_adjoint():
    rng = np.random.default_rng(15)
    t = random_operator(FULL2_K2, rng)
    if (t - t.adjoint()).norm < 1e-9:
        t = t + ModuleOperator.identity(FULL2_K2) * 1j
    with pytest.raises(NotSelfAdjointError):
        t.certify_gl_plus()


def test_certify_gl_plus_rejects_singular_and_negative():
    with pytest.raises(NotInGlPlusError):
        ModuleOperator.zeros(FULL2_K2).certify_gl_plus()
    neg = ModuleOperator.identity(FULL2_K2) * -1.0
    with pytest.raises(NotInGlPlusError):
        neg.certify_gl_plus()


def test_certificate_validation():
    ident = ModuleOperator.identity(FULL2_K2)
    with pytest.raises(ValueError):
        GlPlusCertificate(ident, eig_min=0.0, eig_max=1.0)
    with pytest.raises(ValueError):
        GlPlusCertificate(ident, eig_min=2.0, eig_max=1.0)


@pytest.mark.parametrize("module", MODULES)
def test_norm_witness_attains_the_norm(module):
    rng = np.random.default_rng(16)
    t = random_operator(module, rng)
    x = t.norm_witness()
    assert x.norm == pytest.approx(1.0, rel=1e-12)
    assert t.apply(x).norm == pytest.approx(t.norm, rel=1e-10)


@pytest.mark.parametrize("module", MODULES)
def test_spectral_witness_is_an_eigenvector(module):
    rng = np.random.default_rng(17)
    p = random_positive_operator(module, rng, spectrum=(0.5, 2.0))
    for which in ("min", "max"):
        x, lam = p.spectral_witness(which)
        np.testing.assert_allclose(
            p.apply(x).row, x.row * lam, rtol=0, atol=1e-10 * max(1.0, abs(lam))
        )
    lo = p.spectral_witness("min")[1]
    hi = p.spectral_witness("max")[1]
    eigs = p.hermitian_eigenvalues()
    assert lo == pytest.approx(eigs[0], rel=1e-12)
    assert hi == pytest.approx(eigs[-1], rel=1e-12)


def test_apply_rejects_foreign_elements():
    t = ModuleOperator.identity(FULL2_K2)
    x = ModuleElement.zeros(DIAG3_K2)
    with pytest.raises(DescriptorMismatchError):
        t.apply(x)
