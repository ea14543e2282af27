"""Ordered real spectra and their polynomial invariants.

The basic objects are short real vectors.  A :class:`Spectrum` is a full
eigenvalue tuple stored in non-increasing order; a :class:`Tail` is the
free part of a spectrum whose leading slot is being varied and is kept
in the order given.  On top of these the module computes the two
coefficient views used by everything else:

* ``elementary_coeffs`` expands ``prod_i (x - lambda_i)`` and returns the
  non-leading coefficients ``a_1..a_n``, so ``a_k = (-1)^k e_k`` with
  ``e_k`` the elementary symmetric polynomial of the spectrum.
* ``char_coeffs`` produces the same coefficient vector from a square
  matrix via the Faddeev-LeVerrier trace recurrence, without forming
  eigenvalues.  ``char_coeffs_vjp`` exposes the reverse-mode derivative
  of that recurrence for the optimization layers.

Power sums, the spectral radius, and the l1 metric round out the kit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "Spectrum",
    "Tail",
    "make_spectrum",
    "make_tail",
    "as_square_matrix",
    "elementary_coeffs",
    "char_coeffs",
    "char_coeffs_vjp",
    "char_coeff_jacobian",
    "eigenvalues",
    "spectral_radius",
    "power_sums",
    "l1_distance",
]


def _as_finite_vector(values: Iterable[float], what: str) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if arr.ndim != 1:
        raise ValueError(f"{what} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{what} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} entries must be finite")
    return arr


@dataclass(frozen=True)
class Spectrum:
    """A real eigenvalue tuple in non-increasing order.

    Construct through :func:`make_spectrum`, which sorts; building the
    dataclass directly with unsorted values raises.
    """

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        arr = _as_finite_vector(self.values, "spectrum")
        if np.any(np.diff(arr) > 0.0):
            raise ValueError("spectrum entries must be non-increasing")
        object.__setattr__(self, "values", tuple(float(v) for v in arr))

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    @property
    def tail(self) -> "Tail":
        """Everything after the leading slot, order preserved."""
        if self.n < 2:
            raise ValueError("a 1-point spectrum has no tail")
        return Tail(self.values[1:])

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[float]:
        return iter(self.values)

    def __getitem__(self, idx: int) -> float:
        return self.values[idx]


@dataclass(frozen=True)
class Tail:
    """The non-leading part of a spectrum, kept in the order given.

    Tails are not sorted: they are slots that pair positionally with
    perturbation vectors, so reordering would silently change what a
    perturbation means.
    """

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        arr = _as_finite_vector(self.values, "tail")
        object.__setattr__(self, "values", tuple(float(v) for v in arr))

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def with_leading(self, t: float) -> Spectrum:
        """The spectrum obtained by prepending leading value ``t``."""
        return make_spectrum((float(t),) + self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[float]:
        return iter(self.values)

    def __getitem__(self, idx: int) -> float:
        return self.values[idx]


def make_spectrum(values: Iterable[float]) -> Spectrum:
    """Sort ``values`` into non-increasing order and wrap as a Spectrum."""
    arr = _as_finite_vector(values, "spectrum")
    return Spectrum(tuple(np.sort(arr)[::-1]))


def make_tail(values: Iterable[float]) -> Tail:
    """Wrap ``values`` as a Tail without reordering."""
    arr = _as_finite_vector(values, "tail")
    return Tail(tuple(arr))


def as_square_matrix(entries: Sequence[Sequence[float]] | np.ndarray) -> np.ndarray:
    """Validate and return a finite square float matrix."""
    arr = np.asarray(entries, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise ValueError("matrix must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    return arr


def _spectrum_array(spec: Spectrum | Tail | Iterable[float]) -> np.ndarray:
    if isinstance(spec, (Spectrum, Tail)):
        return spec.array
    return _as_finite_vector(spec, "value vector")


def elementary_coeffs(spec: Spectrum | Iterable[float]) -> np.ndarray:
    """Non-leading coefficients of ``prod (x - lambda_i)``.

    Returns ``a`` with ``a[k-1]`` the coefficient of ``x^(n-k)``, i.e.
    ``a_k = (-1)^k e_k(lambda)``.  Computed by sequential convolution,
    which is exact in the same sense as the brute-force expansion.
    """
    lam = _spectrum_array(spec)
    return np.poly(lam)[1:].astype(float)


def char_coeffs(matrix: np.ndarray) -> np.ndarray:
    """Characteristic coefficients of a square matrix, Faddeev-LeVerrier.

    Same convention as :func:`elementary_coeffs`: returns ``c_1..c_n``
    with ``det(xI - A) = x^n + c_1 x^(n-1) + ... + c_n``.  Uses only
    matrix products and traces:

        B_0 = I;  M_k = A B_{k-1};  c_k = -tr(M_k)/k;  B_k = M_k + c_k I.
    """
    A = as_square_matrix(matrix)
    c, _ = _faddeev_forward(A)
    return c


def _faddeev_forward(A: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    n = A.shape[0]
    eye = np.eye(n)
    B = eye
    bs = [B]
    c = np.empty(n)
    for k in range(1, n + 1):
        M = A @ B
        c[k - 1] = -np.trace(M) / k
        B = M + c[k - 1] * eye
        bs.append(B)
    return c, bs


def char_coeffs_vjp(matrix: np.ndarray, seed: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients plus the adjoint ``sum_k seed_k * dc_k/dA``.

    Reverse-mode sweep of the Faddeev-LeVerrier recurrence.  ``seed`` is
    the downstream gradient with respect to the coefficient vector; the
    returned matrix is the gradient with respect to the matrix entries.
    """
    A = as_square_matrix(matrix)
    n = A.shape[0]
    seed = np.asarray(seed, dtype=float)
    if seed.shape != (n,):
        raise ValueError(f"seed must have shape ({n},), got {seed.shape}")
    c, bs = _faddeev_forward(A)
    eye = np.eye(n)
    Abar = np.zeros_like(A)
    Bbar = np.zeros_like(A)
    for k in range(n, 0, -1):
        cbar = seed[k - 1] + np.trace(Bbar)
        Mbar = Bbar - (cbar / k) * eye
        Abar += Mbar @ bs[k - 1].T
        Bbar = A.T @ Mbar
    return c, Abar


def char_coeff_jacobian(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients plus the full Jacobian ``J[k, i, j] = dc_{k+1}/dA_ij``."""
    A = as_square_matrix(matrix)
    n = A.shape[0]
    jac = np.empty((n, n, n))
    c = np.empty(n)
    for k in range(n):
        seed = np.zeros(n)
        seed[k] = 1.0
        c, jac[k] = char_coeffs_vjp(A, seed)
    return c, jac


def eigenvalues(matrix: np.ndarray) -> np.ndarray:
    """Eigenvalues of a square matrix, sorted by (real, imag).

    Returns a complex vector.  Iteration failures of the underlying
    eigensolver propagate as ``numpy.linalg.LinAlgError``.
    """
    A = as_square_matrix(matrix)
    vals = np.linalg.eigvals(A)
    order = np.lexsort((vals.imag, vals.real))
    return vals[order]


def spectral_radius(spec: Spectrum | Tail | Iterable[float]) -> float:
    """Largest absolute value among the entries."""
    return float(np.max(np.abs(_spectrum_array(spec))))


def power_sums(spec: Spectrum | Iterable[float], depth: int) -> np.ndarray:
    """Moments ``p_k = sum_i lambda_i^k`` for ``k = 1..depth``."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    lam = _spectrum_array(spec)
    return np.array([np.sum(lam**k) for k in range(1, depth + 1)])


def l1_distance(
    a: Spectrum | Tail | Iterable[float],
    b: Spectrum | Tail | Iterable[float],
) -> float:
    """Slotwise l1 distance between two equal-length value vectors."""
    va = _spectrum_array(a)
    vb = _spectrum_array(b)
    if va.shape != vb.shape:
        raise ValueError(f"length mismatch: {va.shape[0]} vs {vb.shape[0]}")
    return float(np.sum(np.abs(va - vb)))
