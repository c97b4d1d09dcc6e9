"""Dense matrix *-algebra: arithmetic, adjoints, the Loewner order, roots.

Elements live either in the full complex n-by-n matrix algebra or in its
diagonal subalgebra.  The diagonal case is tracked structurally: off-diagonal
entries of a diagonal element are exactly zero, and every operation that is
algebraically closed on the subalgebra (sums, products, adjoints, roots,
inverses) preserves that exactness bit-for-bit, not merely up to rounding.

All positivity and ordering checks use a relative tolerance against
``max(1, norm)`` so they behave identically under rescaling.
"""

from __future__ import annotations

import enum
import numbers
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from .errors import DescriptorMismatchError, NotPositiveError, SingularError

#: Default relative tolerance for positivity / ordering decisions.
DEFAULT_TOL = 1e-9

#: Default relative singular-value threshold below which inversion refuses.
INVERT_TOL = 1e-12


class Structure(enum.Enum):
    FULL = "full"
    DIAGONAL = "diagonal"


@dataclass(frozen=True)
class AlgebraDescriptor:
    """Shape and structure shared by mutually composable elements."""

    dim: int
    structure: Structure = Structure.FULL

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError(f"algebra dimension must be >= 1, got {self.dim}")
        if not isinstance(self.structure, Structure):
            raise ValueError(f"unknown structure {self.structure!r}")


class AlgebraElement:
    """Immutable n-by-n complex matrix tagged with its algebra descriptor."""

    def __init__(self, descriptor: AlgebraDescriptor, entries) -> None:
        arr = np.array(entries, dtype=np.complex128)
        n = descriptor.dim
        if arr.shape != (n, n):
            raise ValueError(f"expected a {n}x{n} matrix, got shape {arr.shape}")
        if descriptor.structure is Structure.DIAGONAL:
            off = arr[~np.eye(n, dtype=bool)]
            if off.size and np.any(off != 0):
                raise ValueError("diagonal element has nonzero off-diagonal entries")
        arr.setflags(write=False)
        self.descriptor = descriptor
        self.entries = arr

    # -- constructors -------------------------------------------------------

    @classmethod
    def zeros(cls, descriptor: AlgebraDescriptor) -> AlgebraElement:
        return cls(descriptor, np.zeros((descriptor.dim, descriptor.dim)))

    @classmethod
    def identity(cls, descriptor: AlgebraDescriptor) -> AlgebraElement:
        return cls(descriptor, np.eye(descriptor.dim))

    @classmethod
    def from_diag(cls, descriptor: AlgebraDescriptor, values: Iterable[complex]) -> AlgebraElement:
        vals = np.asarray(list(values), dtype=np.complex128)
        if vals.shape != (descriptor.dim,):
            raise ValueError(f"expected {descriptor.dim} diagonal values, got {vals.shape}")
        return cls(descriptor, np.diag(vals))

    # -- structure helpers --------------------------------------------------

    @property
    def is_diagonal(self) -> bool:
        return self.descriptor.structure is Structure.DIAGONAL

    def diag(self) -> np.ndarray:
        return np.diagonal(self.entries)

    def _require_same(self, other: AlgebraElement) -> None:
        if not isinstance(other, AlgebraElement):
            raise TypeError(f"expected AlgebraElement, got {type(other).__name__}")
        if other.descriptor != self.descriptor:
            raise DescriptorMismatchError(
                f"algebra mismatch: {self.descriptor} vs {other.descriptor}"
            )

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: AlgebraElement) -> AlgebraElement:
        self._require_same(other)
        return AlgebraElement(self.descriptor, self.entries + other.entries)

    def __sub__(self, other: AlgebraElement) -> AlgebraElement:
        self._require_same(other)
        return AlgebraElement(self.descriptor, self.entries - other.entries)

    def __neg__(self) -> AlgebraElement:
        return AlgebraElement(self.descriptor, -self.entries)

    def __matmul__(self, other: AlgebraElement) -> AlgebraElement:
        """Algebra product.  Diagonal times diagonal stays exactly diagonal."""
        self._require_same(other)
        return AlgebraElement(self.descriptor, self.entries @ other.entries)

    def __mul__(self, scalar) -> AlgebraElement:
        if not isinstance(scalar, numbers.Number):
            return NotImplemented
        return AlgebraElement(self.descriptor, self.entries * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> AlgebraElement:
        if not isinstance(scalar, numbers.Number):
            return NotImplemented
        return AlgebraElement(self.descriptor, self.entries / scalar)

    def adjoint(self) -> AlgebraElement:
        return AlgebraElement(self.descriptor, self.entries.conj().T)

    # -- spectral quantities ------------------------------------------------

    @cached_property
    def norm(self) -> float:
        """Largest singular value (the ambient operator norm)."""
        if self.is_diagonal:
            return float(np.max(np.abs(self.diag())))
        return float(np.linalg.norm(self.entries, 2))

    def hermitian_defect(self) -> float:
        """Operator norm of ``a - a*``."""
        if self.is_diagonal:
            return float(2.0 * np.max(np.abs(self.diag().imag)))
        return float(np.linalg.norm(self.entries - self.entries.conj().T, 2))

    def is_hermitian(self, tol: float = DEFAULT_TOL) -> bool:
        return self.hermitian_defect() <= tol * max(1.0, self.norm)

    def hermitian_eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues of the Hermitian part ``(a + a*)/2``."""
        if self.is_diagonal:
            return np.sort(self.diag().real)
        herm = 0.5 * (self.entries + self.entries.conj().T)
        return np.linalg.eigvalsh(herm)

    def is_positive(self, tol: float = DEFAULT_TOL) -> bool:
        """Hermitian within tolerance with spectrum above ``-tol * scale``.

        Non-Hermitian input returns False rather than raising, so order
        comparisons of indefinite differences simply fail.
        """
        if not self.is_hermitian(tol):
            return False
        floor = -tol * max(1.0, self.norm)
        return bool(self.hermitian_eigenvalues()[0] >= floor)

    def psd_sqrt(self, tol: float = DEFAULT_TOL) -> AlgebraElement:
        """Unique positive square root; tiny negative eigenvalues clamp to 0."""
        if not self.is_positive(tol):
            raise NotPositiveError("element is not positive, no square root")
        if self.is_diagonal:
            vals = np.sqrt(np.clip(self.diag().real, 0.0, None))
            return AlgebraElement.from_diag(self.descriptor, vals)
        herm = 0.5 * (self.entries + self.entries.conj().T)
        w, v = np.linalg.eigh(herm)
        w = np.sqrt(np.clip(w, 0.0, None))
        return AlgebraElement(self.descriptor, (v * w) @ v.conj().T)

    def inv(self, tol: float = INVERT_TOL) -> AlgebraElement:
        """Inverse, refusing when the smallest singular value is below
        ``tol`` times the largest."""
        if self.is_diagonal:
            d = self.diag()
            top = np.max(np.abs(d))
            if top == 0.0 or np.min(np.abs(d)) <= tol * top:
                raise SingularError("diagonal element is numerically singular")
            return AlgebraElement.from_diag(self.descriptor, 1.0 / d)
        svals = np.linalg.svd(self.entries, compute_uv=False)
        if svals[0] == 0.0 or svals[-1] <= tol * svals[0]:
            raise SingularError(
                f"element is numerically singular (sigma_min/sigma_max = "
                f"{0.0 if svals[0] == 0.0 else svals[-1] / svals[0]:.3e})"
            )
        return AlgebraElement(self.descriptor, np.linalg.inv(self.entries))

    def __repr__(self) -> str:
        kind = self.descriptor.structure.value
        return f"AlgebraElement({kind} {self.descriptor.dim}x{self.descriptor.dim})"


def loewner_leq(a: AlgebraElement, b: AlgebraElement, tol: float = DEFAULT_TOL) -> bool:
    """True when ``b - a`` is positive, i.e. a <= b in the Loewner order."""
    a._require_same(b)
    return (b - a).is_positive(tol)
