"""Seeded random instances: elements, operators, and planted-spectrum frames.

Everything draws from an explicit numpy Generator so callers control
reproducibility.  Frame families are built backwards from a target
operator spectrum: pick eigenvalues in a band, factor the target Gram as
R*R, and lift R through a random isometry spread over the measure nodes.
That keeps every generated instance a genuine well-conditioned frame, so
property-suite failures indicate real bugs rather than degenerate draws.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .algebra import AlgebraDescriptor, AlgebraElement, Structure
from .frames import FrameFamily
from .integration import MeasureSpace
from .module import GlPlusCertificate, ModuleDescriptor, ModuleElement, ModuleOperator


def _cgauss(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _unitary(rng: np.random.Generator, m: int) -> np.ndarray:
    q, _ = np.linalg.qr(_cgauss(rng, (m, m)))
    return q


def _isometry(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    if rows < cols:
        raise ValueError(f"isometry needs rows >= cols, got {rows} < {cols}")
    q, _ = np.linalg.qr(_cgauss(rng, (rows, cols)))
    return q


# ---------------------------------------------------------------------------
# algebra-level draws


def random_algebra_element(
    descriptor: AlgebraDescriptor, rng: np.random.Generator, scale: float = 1.0
) -> AlgebraElement:
    n = descriptor.dim
    if descriptor.structure is Structure.DIAGONAL:
        return AlgebraElement.from_diag(descriptor, scale * _cgauss(rng, n))
    return AlgebraElement(descriptor, scale * _cgauss(rng, (n, n)))


def random_hermitian(descriptor: AlgebraDescriptor, rng: np.random.Generator) -> AlgebraElement:
    a = random_algebra_element(descriptor, rng)
    return (a + a.adjoint()) * 0.5


def random_psd(descriptor: AlgebraDescriptor, rng: np.random.Generator) -> AlgebraElement:
    a = random_algebra_element(descriptor, rng)
    return a @ a.adjoint()


# ---------------------------------------------------------------------------
# module-level draws


def random_module_element(
    module: ModuleDescriptor, rng: np.random.Generator, scale: float = 1.0
) -> ModuleElement:
    return ModuleElement(
        module,
        [random_algebra_element(module.algebra, rng, scale) for _ in range(module.rank)],
    )


def random_operator(module: ModuleDescriptor, rng: np.random.Generator) -> ModuleOperator:
    """Generic adjointable operator with no spectral guarantees."""
    n, k = module.algebra.dim, module.rank
    if module.algebra.structure is Structure.DIAGONAL:
        return ModuleOperator.from_index_blocks(module, _cgauss(rng, (n, k, k)))
    return ModuleOperator(module, _cgauss(rng, (k * n, k * n)))


def random_invertible_operator(
    module: ModuleDescriptor,
    rng: np.random.Generator,
    singular_range: tuple[float, float] = (0.5, 2.0),
) -> ModuleOperator:
    """Operator with all singular values drawn inside the given band."""
    lo, hi = singular_range
    n, k = module.algebra.dim, module.rank
    if module.algebra.structure is Structure.DIAGONAL:
        blocks = np.empty((n, k, k), dtype=np.complex128)
        for d in range(n):
            s = rng.uniform(lo, hi, k)
            blocks[d] = (_unitary(rng, k) * s) @ _unitary(rng, k).conj().T
        return ModuleOperator.from_index_blocks(module, blocks)
    m = k * n
    s = rng.uniform(lo, hi, m)
    return ModuleOperator(module, (_unitary(rng, m) * s) @ _unitary(rng, m).conj().T)


def random_positive_operator(
    module: ModuleDescriptor,
    rng: np.random.Generator,
    spectrum: tuple[float, float] = (0.5, 2.0),
) -> ModuleOperator:
    """Hermitian PSD operator with eigenvalues planted in the given band."""
    lo, hi = spectrum
    n, k = module.algebra.dim, module.rank
    if module.algebra.structure is Structure.DIAGONAL:
        blocks = np.empty((n, k, k), dtype=np.complex128)
        for d in range(n):
            q = _unitary(rng, k)
            blocks[d] = (q * rng.uniform(lo, hi, k)) @ q.conj().T
        return ModuleOperator.from_index_blocks(module, blocks)
    m = k * n
    q = _unitary(rng, m)
    return ModuleOperator(module, (q * rng.uniform(lo, hi, m)) @ q.conj().T)


# ---------------------------------------------------------------------------
# frames with a planted operator spectrum


def planted_frame(
    module: ModuleDescriptor,
    space: MeasureSpace,
    rng: np.random.Generator,
    spectrum: tuple[float, float] = (0.5, 2.0),
) -> tuple[FrameFamily, np.ndarray]:
    """Frame whose operator has eigenvalues drawn from the given band.

    Returns the family and the planted eigenvalues (ascending).  Needs at
    least as many nodes as the module rank so the isometry lift exists.
    """
    n, k = module.algebra.dim, module.rank
    size = space.size
    if size < k:
        raise ValueError(f"need at least rank={k} nodes, got {size}")
    lo, hi = spectrum
    root_mu = np.sqrt(space.weights)
    if module.algebra.structure is Structure.DIAGONAL:
        # independent k-by-k target per diagonal index
        eigs = rng.uniform(lo, hi, (n, k))
        rows = np.zeros((size, n, k * n), dtype=np.complex128)
        for d in range(n):
            q = _unitary(rng, k)
            r = (np.sqrt(eigs[d])[:, None] * q.conj().T)
            a = _isometry(rng, size, k) @ r  # a^H a = target block
            f = a / root_mu[:, None]
            rows[:, d, np.arange(k) * n + d] = f
        vectors = [ModuleElement.from_row(module, rows[i]) for i in range(size)]
        return FrameFamily(module, space, tuple(vectors)), np.sort(eigs.ravel())
    m = k * n
    eigs = rng.uniform(lo, hi, m)
    q = _unitary(rng, m)
    r = np.sqrt(eigs)[:, None] * q.conj().T
    z = _isometry(rng, size * n, m) @ r  # z^H z = target Gram
    vectors = []
    for i in range(size):
        vectors.append(
            ModuleElement.from_row(module, z[i * n : (i + 1) * n, :] / root_mu[i])
        )
    return FrameFamily(module, space, tuple(vectors)), np.sort(eigs)


# ---------------------------------------------------------------------------
# controllers and transport operators compatible with a frame operator


def commuting_controller(
    s_op: ModuleOperator,
    rng: np.random.Generator,
    scalar_eig: Optional[float] = None,
) -> GlPlusCertificate:
    """Positive invertible controller commuting with the given operator.

    Either a scalar multiple of the identity (when scalar_eig is given) or
    an affine function of the operator itself, which commutes by
    construction.  A controller that fails to commute would make the
    controlled operator non-self-adjoint, so frames only admit this kind.
    """
    ident = ModuleOperator.identity(s_op.descriptor)
    if scalar_eig is not None:
        if scalar_eig <= 0:
            raise ValueError(f"scalar controller needs a positive eigenvalue, got {scalar_eig}")
        return (ident * scalar_eig).certify_gl_plus()
    c0 = rng.uniform(0.6, 1.6)
    c1 = rng.uniform(0.0, 1.0)
    cop = ident * c0 + s_op * (c1 / s_op.norm)
    return cop.certify_gl_plus()


def commuting_surjective(
    s_op: ModuleOperator, rng: np.random.Generator
) -> ModuleOperator:
    """Surjective operator commuting with the given operator (and with any
    controller built from it), again an affine function of the operator."""
    ident = ModuleOperator.identity(s_op.descriptor)
    k0 = rng.uniform(0.5, 1.5)
    k1 = rng.uniform(0.0, 1.0)
    return ident * k0 + s_op * (k1 / s_op.norm)
