"""Finite-rank modules over a matrix *-algebra and their adjointable maps.

An element of the rank-k module is a k-tuple of algebra elements, stored
flat as an n-by-(k*n) row of blocks so that the algebra-valued inner
product is a single matrix product:  inner(x, y) = X @ Y^H.

An adjointable operator acts by right multiplication, X -> X @ T, where T
is a (k*n)-by-(k*n) block matrix.  Under this encoding the operator
adjoint is the conjugate transpose of T, positivity of the operator is
positive semidefiniteness of T, and the operator norm is the top singular
value of T.  When the algebra is diagonal, every block of T is diagonal
and T splits under a permutation into n independent k-by-k matrices; the
spectral routines work per index there so diagonal structure survives
roots and inverses exactly.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .algebra import DEFAULT_TOL, INVERT_TOL, AlgebraDescriptor, AlgebraElement, Structure
from .errors import (
    DescriptorMismatchError,
    NotInGlPlusError,
    NotPositiveError,
    NotSelfAdjointError,
    SingularError,
)


@dataclass(frozen=True)
class ModuleDescriptor:
    """Rank-k module over the given algebra."""

    algebra: AlgebraDescriptor
    rank: int

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValueError(f"module rank must be >= 1, got {self.rank}")

    @property
    def flat_dim(self) -> int:
        return self.rank * self.algebra.dim


def _check_structured(descriptor: ModuleDescriptor, flat: np.ndarray) -> None:
    # diagonal algebra: every n-by-n block must have zero off-diagonal
    if descriptor.algebra.structure is not Structure.DIAGONAL:
        return
    n, k = descriptor.algebra.dim, flat.shape[0] // descriptor.algebra.dim
    blocks = flat.reshape(k, n, flat.shape[1] // n, n)
    mask = ~np.eye(n, dtype=bool)
    if np.any(blocks[:, mask.nonzero()[0], :, mask.nonzero()[1]] != 0):
        raise ValueError("blocks are not diagonal for a diagonal-algebra module")


class ModuleElement:
    """Immutable k-tuple of algebra elements with the row-block encoding."""

    def __init__(self, descriptor: ModuleDescriptor, components: Sequence[AlgebraElement]) -> None:
        comps = tuple(components)
        if len(comps) != descriptor.rank:
            raise ValueError(f"expected {descriptor.rank} components, got {len(comps)}")
        for c in comps:
            if c.descriptor != descriptor.algebra:
                raise DescriptorMismatchError(
                    f"component algebra {c.descriptor} does not match {descriptor.algebra}"
                )
        self.descriptor = descriptor
        row = np.hstack([c.entries for c in comps])
        row.setflags(write=False)
        self.row = row

    @classmethod
    def from_row(cls, descriptor: ModuleDescriptor, row) -> ModuleElement:
        arr = np.asarray(row, dtype=np.complex128)
        n, k = descriptor.algebra.dim, descriptor.rank
        if arr.shape != (n, k * n):
            raise ValueError(f"expected shape {(n, k * n)}, got {arr.shape}")
        comps = [
            AlgebraElement(descriptor.algebra, arr[:, j * n : (j + 1) * n]) for j in range(k)
        ]
        return cls(descriptor, comps)

    @classmethod
    def zeros(cls, descriptor: ModuleDescriptor) -> ModuleElement:
        z = AlgebraElement.zeros(descriptor.algebra)
        return cls(descriptor, [z] * descriptor.rank)

    def component(self, j: int) -> AlgebraElement:
        n = self.descriptor.algebra.dim
        return AlgebraElement(self.descriptor.algebra, self.row[:, j * n : (j + 1) * n])

    @property
    def components(self) -> tuple[AlgebraElement, ...]:
        return tuple(self.component(j) for j in range(self.descriptor.rank))

    def _require_same(self, other: ModuleElement) -> None:
        if not isinstance(other, ModuleElement):
            raise TypeError(f"expected ModuleElement, got {type(other).__name__}")
        if other.descriptor != self.descriptor:
            raise DescriptorMismatchError(
                f"module mismatch: {self.descriptor} vs {other.descriptor}"
            )

    # -- linear structure ---------------------------------------------------

    def __add__(self, other: ModuleElement) -> ModuleElement:
        self._require_same(other)
        return ModuleElement.from_row(self.descriptor, self.row + other.row)

    def __sub__(self, other: ModuleElement) -> ModuleElement:
        self._require_same(other)
        return ModuleElement.from_row(self.descriptor, self.row - other.row)

    def __neg__(self) -> ModuleElement:
        return ModuleElement.from_row(self.descriptor, -self.row)

    def __mul__(self, scalar) -> ModuleElement:
        if not isinstance(scalar, numbers.Number):
            return NotImplemented
        return ModuleElement.from_row(self.descriptor, self.row * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> ModuleElement:
        if not isinstance(scalar, numbers.Number):
            return NotImplemented
        return ModuleElement.from_row(self.descriptor, self.row / scalar)

    def scale(self, a: AlgebraElement) -> ModuleElement:
        """Left module action: every component becomes a @ component."""
        if a.descriptor != self.descriptor.algebra:
            raise DescriptorMismatchError("scaling element belongs to a different algebra")
        return ModuleElement.from_row(self.descriptor, a.entries @ self.row)

    # -- metric structure ---------------------------------------------------

    def inner(self, other: ModuleElement) -> AlgebraElement:
        """Algebra-valued inner product, conjugate-linear in the second slot."""
        self._require_same(other)
        return AlgebraElement(self.descriptor.algebra, self.row @ other.row.conj().T)

    @cached_property
    def norm(self) -> float:
        return float(np.sqrt(self.inner(self).norm))

    def __repr__(self) -> str:
        d = self.descriptor
        return f"ModuleElement(rank {d.rank} over {d.algebra.structure.value} dim {d.algebra.dim})"


@dataclass(frozen=True)
class GlPlusCertificate:
    """A positive invertible operator together with its spectral edges.

    ``sqrt_norm`` is the norm of the positive square root and
    ``inv_sqrt_norm`` the norm of its inverse; both recur as conversion
    factors between plain and controlled frame bounds.
    """

    operator: ModuleOperator
    eig_min: float
    eig_max: float

    def __post_init__(self) -> None:
        if not 0.0 < self.eig_min <= self.eig_max:
            raise ValueError(
                f"certificate needs 0 < eig_min <= eig_max, got "
                f"({self.eig_min}, {self.eig_max})"
            )

    @property
    def norm(self) -> float:
        return self.eig_max

    @property
    def inv_norm(self) -> float:
        return 1.0 / self.eig_min

    @property
    def sqrt_norm(self) -> float:
        return float(np.sqrt(self.eig_max))

    @property
    def inv_sqrt_norm(self) -> float:
        return float(1.0 / np.sqrt(self.eig_min))


class ModuleOperator:
    """Adjointable right-action operator stored as its flat block matrix."""

    def __init__(self, descriptor: ModuleDescriptor, flat) -> None:
        arr = np.array(flat, dtype=np.complex128)
        m = descriptor.flat_dim
        if arr.shape != (m, m):
            raise ValueError(f"expected a {m}x{m} matrix, got {arr.shape}")
        _check_structured(descriptor, arr)
        arr.setflags(write=False)
        self.descriptor = descriptor
        self.flat = arr

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_blocks(
        cls, descriptor: ModuleDescriptor, blocks: Sequence[Sequence[AlgebraElement]]
    ) -> ModuleOperator:
        """Build from blocks[i][j] = coefficient sending component j of the
        input to component i of the output."""
        n, k = descriptor.algebra.dim, descriptor.rank
        if len(blocks) != k or any(len(r) != k for r in blocks):
            raise ValueError(f"expected a {k}x{k} grid of blocks")
        flat = np.zeros((k * n, k * n), dtype=np.complex128)
        for i in range(k):
            for j in range(k):
                b = blocks[i][j]
                if b.descriptor != descriptor.algebra:
                    raise DescriptorMismatchError("block from a different algebra")
                flat[j * n : (j + 1) * n, i * n : (i + 1) * n] = b.entries
        return cls(descriptor, flat)

    @classmethod
    def identity(cls, descriptor: ModuleDescriptor) -> ModuleOperator:
        return cls(descriptor, np.eye(descriptor.flat_dim))

    @classmethod
    def zeros(cls, descriptor: ModuleDescriptor) -> ModuleOperator:
        return cls(descriptor, np.zeros((descriptor.flat_dim, descriptor.flat_dim)))

    @classmethod
    def componentwise(cls, descriptor: ModuleDescriptor, a: AlgebraElement) -> ModuleOperator:
        """Right-multiply every component by the same algebra element a."""
        if a.descriptor != descriptor.algebra:
            raise DescriptorMismatchError("multiplier from a different algebra")
        return cls(descriptor, np.kron(np.eye(descriptor.rank), a.entries))

    # -- block access -------------------------------------------------------

    def block(self, i: int, j: int) -> AlgebraElement:
        """Coefficient sending input component j to output component i."""
        n = self.descriptor.algebra.dim
        return AlgebraElement(
            self.descriptor.algebra, self.flat[j * n : (j + 1) * n, i * n : (i + 1) * n]
        )

    def index_blocks(self) -> np.ndarray:
        """Diagonal algebra only: the n independent k-by-k matrices, one per
        diagonal index, as an (n, k, k) array."""
        if self.descriptor.algebra.structure is not Structure.DIAGONAL:
            raise ValueError("index blocks exist only over a diagonal algebra")
        n, k = self.descriptor.algebra.dim, self.descriptor.rank
        f = self.flat.reshape(k, n, k, n)
        return np.einsum("jdid->dji", f)

    @classmethod
    def from_index_blocks(cls, descriptor: ModuleDescriptor, blocks: np.ndarray) -> ModuleOperator:
        if descriptor.algebra.structure is not Structure.DIAGONAL:
            raise ValueError("index blocks exist only over a diagonal algebra")
        n, k = descriptor.algebra.dim, descriptor.rank
        b = np.asarray(blocks, dtype=np.complex128)
        if b.shape != (n, k, k):
            raise ValueError(f"expected index blocks of shape {(n, k, k)}, got {b.shape}")
        f = np.zeros((k, n, k, n), dtype=np.complex128)
        f[:, np.arange(n), :, np.arange(n)] = b
        return cls(descriptor, f.reshape(k * n, k * n))

    # -- action and composition --------------------------------------------

    def apply(self, x: ModuleElement) -> ModuleElement:
        if x.descriptor != self.descriptor:
            raise DescriptorMismatchError("element from a different module")
        return ModuleElement.from_row(self.descriptor, x.row @ self.flat)

    __call__ = apply

    def then(self, other: ModuleOperator) -> ModuleOperator:
        """Composition in application order: first self, then other."""
        self._require_same(other)
        return ModuleOperator(self.descriptor, self.flat @ other.flat)

    def adjoint(self) -> ModuleOperator:
        return ModuleOperator(self.descriptor, self.flat.conj().T)

    def conjugate_by(self, k_op: ModuleOperator) -> ModuleOperator:
        """x -> K(self(K* x)), the two-sided transport along K."""
        self._require_same(k_op)
        return k_op.adjoint().then(self).then(k_op)

    def _require_same(self, other: ModuleOperator) -> None:
        if not isinstance(other, ModuleOperator):
            raise TypeError(f"expected ModuleOperator, got {type(other).__name__}")
        if other.descriptor != self.descriptor:
            raise DescriptorMismatchError(
                f"module mismatch: {self.descriptor} vs {other.descriptor}"
            )

    # -- linear combinations ------------------------------------------------

    def __add__(self, other: ModuleOperator) -> ModuleOperator:
        self._require_same(other)
        return ModuleOperator(self.descriptor, self.flat + other.flat)

    def __sub__(self, other: ModuleOperator) -> ModuleOperator:
        self._require_same(other)
        return ModuleOperator(self.descriptor, self.flat - other.flat)

    def __neg__(self) -> ModuleOperator:
        return ModuleOperator(self.descriptor, -self.flat)

    def __mul__(self, scalar) -> ModuleOperator:
        if not isinstance(scalar, numbers.Number):
            return NotImplemented
        return ModuleOperator(self.descriptor, self.flat * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> ModuleOperator:
        if not isinstance(scalar, numbers.Number):
            return NotImplemented
        return ModuleOperator(self.descriptor, self.flat / scalar)

    # -- spectral quantities ------------------------------------------------

    @property
    def _is_diag(self) -> bool:
        return self.descriptor.algebra.structure is Structure.DIAGONAL

    @cached_property
    def norm(self) -> float:
        if self._is_diag:
            svals = np.linalg.svd(self.index_blocks(), compute_uv=False)
            return float(np.max(svals)) if svals.size else 0.0
        return float(np.linalg.norm(self.flat, 2))

    def hermitian_defect(self) -> float:
        return float(np.linalg.norm(self.flat - self.flat.conj().T, 2))

    def is_hermitian(self, tol: float = DEFAULT_TOL) -> bool:
        return self.hermitian_defect() <= tol * max(1.0, self.norm)

    def hermitian_eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues of the Hermitian part of the flat matrix."""
        if self._is_diag:
            b = self.index_blocks()
            herm = 0.5 * (b + b.conj().transpose(0, 2, 1))
            return np.sort(np.linalg.eigvalsh(herm).ravel())
        herm = 0.5 * (self.flat + self.flat.conj().T)
        return np.linalg.eigvalsh(herm)

    def is_positive(self, tol: float = DEFAULT_TOL) -> bool:
        if not self.is_hermitian(tol):
            return False
        floor = -tol * max(1.0, self.norm)
        return bool(self.hermitian_eigenvalues()[0] >= floor)

    def psd_sqrt(self, tol: float = DEFAULT_TOL) -> ModuleOperator:
        if not self.is_positive(tol):
            raise NotPositiveError("operator is not positive, no square root")
        if self._is_diag:
            b = self.index_blocks()
            herm = 0.5 * (b + b.conj().transpose(0, 2, 1))
            w, v = np.linalg.eigh(herm)
            w = np.sqrt(np.clip(w, 0.0, None))
            roots = np.einsum("dij,dj,dkj->dik", v, w, v.conj())
            return ModuleOperator.from_index_blocks(self.descriptor, roots)
        herm = 0.5 * (self.flat + self.flat.conj().T)
        w, v = np.linalg.eigh(herm)
        w = np.sqrt(np.clip(w, 0.0, None))
        return ModuleOperator(self.descriptor, (v * w) @ v.conj().T)

    def inv(self, tol: float = INVERT_TOL) -> ModuleOperator:
        if self._is_diag:
            b = self.index_blocks()
            svals = np.linalg.svd(b, compute_uv=False)
            top = float(np.max(svals))
            if top == 0.0 or float(np.min(svals)) <= tol * top:
                raise SingularError("operator is numerically singular")
            return ModuleOperator.from_index_blocks(self.descriptor, np.linalg.inv(b))
        svals = np.linalg.svd(self.flat, compute_uv=False)
        if svals[0] == 0.0 or svals[-1] <= tol * svals[0]:
            raise SingularError("operator is numerically singular")
        return ModuleOperator(self.descriptor, np.linalg.inv(self.flat))

    def is_surjective(self, tol: float = DEFAULT_TOL) -> bool:
        """Bounded below, hence onto: smallest singular value well above 0."""
        if self._is_diag:
            svals = np.linalg.svd(self.index_blocks(), compute_uv=False)
        else:
            svals = np.linalg.svd(self.flat, compute_uv=False)
        return bool(np.min(svals) > tol * max(1.0, float(np.max(svals))))

    def certify_gl_plus(self, tol: float = DEFAULT_TOL) -> GlPlusCertificate:
        """Certify self is positive and invertible; return its spectral edges."""
        if not self.is_hermitian(tol):
            raise NotSelfAdjointError(
                f"operator is not self-adjoint (defect {self.hermitian_defect():.3e})"
            )
        eigs = self.hermitian_eigenvalues()
        lo, hi = float(eigs[0]), float(eigs[-1])
        if lo <= tol * max(1.0, hi):
            raise NotInGlPlusError(
                f"operator is not positive-invertible (eig_min {lo:.3e}, eig_max {hi:.3e})"
            )
        return GlPlusCertificate(operator=self, eig_min=lo, eig_max=hi)

    def norm_witness(self) -> ModuleElement:
        """A unit element x with ||self(x)|| equal to the operator norm.

        Over the diagonal algebra the witness is supported on the single
        worst diagonal index, so it respects the structure constraint.
        """
        n, k = self.descriptor.algebra.dim, self.descriptor.rank
        if self._is_diag:
            blocks = self.index_blocks()
            u, s, _ = np.linalg.svd(blocks)
            d_star = int(np.argmax(s[:, 0]))
            c = u[d_star, :, 0].conj()
            row = np.zeros((n, k * n), dtype=np.complex128)
            row[d_star, np.arange(k) * n + d_star] = c
            return ModuleElement.from_row(self.descriptor, row)
        u, _, _ = np.linalg.svd(self.flat)
        row = np.zeros((n, k * n), dtype=np.complex128)
        row[0, :] = u[:, 0].conj()
        return ModuleElement.from_row(self.descriptor, row)

    def spectral_witness(self, which: str = "min") -> tuple[ModuleElement, float]:
        """Unit element x with inner(self(x), x) equal (up to structure) to an
        extreme eigenvalue of the Hermitian part.  which is "min" or "max"."""
        if which not in ("min", "max"):
            raise ValueError(f"which must be 'min' or 'max', got {which!r}")
        n, k = self.descriptor.algebra.dim, self.descriptor.rank
        row = np.zeros((n, k * n), dtype=np.complex128)
        if self._is_diag:
            b = self.index_blocks()
            herm = 0.5 * (b + b.conj().transpose(0, 2, 1))
            w, v = np.linalg.eigh(herm)
            col = 0 if which == "min" else k - 1
            pick = w[:, col]
            d_star = int(np.argmin(pick) if which == "min" else np.argmax(pick))
            row[d_star, np.arange(k) * n + d_star] = v[d_star, :, col].conj()
            return ModuleElement.from_row(self.descriptor, row), float(pick[d_star])
        herm = 0.5 * (self.flat + self.flat.conj().T)
        w, v = np.linalg.eigh(herm)
        col = 0 if which == "min" else k * n - 1
        row[0, :] = v[:, col].conj()
        return ModuleElement.from_row(self.descriptor, row), float(w[col])

    def __repr__(self) -> str:
        d = self.descriptor
        return (
            f"ModuleOperator(rank {d.rank} over {d.algebra.structure.value} "
            f"dim {d.algebra.dim})"
        )
