"""
Exact Linear Algebra over Prime Fields

This module implements dense linear algebra over F_p: reduced row-echelon form,
linear solves, kernels and inverses. Every linear map between the vector spaces
of a module (structure maps, witness components) is a matrix over one of these
fields.

Matrices are numpy int64 arrays whose entries are residues in [0, p). Moduli are
capped so that a dense product never overflows int64.
"""

from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime

from pm_utils import config_value, log_event

MAX_PRIME = 2 ** 24


class FieldError(ValueError):
    """Raised for invalid moduli and shape mismatches."""


class PrimeField:
    """
    The prime field F_p with dense matrix routines.

    All routines are pure: inputs are never modified and results are fresh
    arrays reduced mod p.
    """

    def __init__(self, p: Optional[int] = None):
        """
        Initialize the field.

        Args:
            p: Prime modulus; defaults to field.default_prime from the config
        """
        if p is None:
            p = config_value("field", "default_prime")
        p = int(p)
        if not isprime(p):
            raise FieldError(f"Field modulus {p} is not prime")
        if p >= MAX_PRIME:
            raise FieldError(f"Field modulus {p} exceeds supported bound {MAX_PRIME}")
        self.p = p

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PrimeField", self.p))

    # Construction

    def matrix(self, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> np.ndarray:
        """
        Build a matrix from nested rows, reducing entries mod p.

        Args:
            rows: Row-major nested integers
            cols: Column count, required only when rows is empty

        Returns:
            rows x cols int64 array
        """
        if len(rows) == 0:
            return self.zeros(0, cols or 0)
        array = np.array([[int(x) for x in row] for row in rows], dtype=np.int64)
        if array.ndim != 2:
            raise FieldError("Matrix rows must have equal length")
        return array % self.p

    def from_entries(self, rows: int, cols: int, entries: Sequence[int]) -> np.ndarray:
        """Build a rows x cols matrix from a flat row-major entry list."""
        if len(entries) != rows * cols:
            raise FieldError(f"Expected {rows * cols} entries for a {rows}x{cols} matrix, got {len(entries)}")
        return np.array([int(x) for x in entries], dtype=np.int64).reshape(rows, cols) % self.p

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        return np.zeros((rows, cols), dtype=np.int64)

    def identity(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def scalar(self, value: int) -> int:
        return int(value) % self.p

    def random_matrix(self, rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
        return rng.integers(0, self.p, size=(rows, cols), dtype=np.int64)

    # Arithmetic

    def reduce(self, a: np.ndarray) -> np.ndarray:
        return np.asarray(a, dtype=np.int64) % self.p

    def mul(self, *factors: np.ndarray) -> np.ndarray:
        """Product of one or more matrices, left to right."""
        result = self.reduce(factors[0])
        for factor in factors[1:]:
            if result.shape[1] != factor.shape[0]:
                raise FieldError(f"Cannot multiply {result.shape} by {factor.shape}")
            result = (result @ self.reduce(factor)) % self.p
        return result

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (self.reduce(a) + self.reduce(b)) % self.p

    def sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (self.reduce(a) - self.reduce(b)) % self.p

    def scale(self, c: int, a: np.ndarray) -> np.ndarray:
        return (int(c) * self.reduce(a)) % self.p

    def equal(self, a: np.ndarray, b: np.ndarray) -> bool:
        a = np.asarray(a)
        b = np.asarray(b)
        return a.shape == b.shape and bool(np.array_equal(a % self.p, b % self.p))

    def is_zero(self, a: np.ndarray) -> bool:
        return not np.any(np.asarray(a) % self.p)

    def linear_combination(self, coefficients: Iterable[int], basis: Sequence[np.ndarray]) -> np.ndarray:
        """Sum of c_i * basis_i; basis must be nonempty."""
        total = np.zeros_like(basis[0])
        for c, b in zip(coefficients, basis):
            if c:
                total = (total + int(c) * b) % self.p
        return total

    # Elimination

    def rref(self, a: np.ndarray) -> Tuple[np.ndarray, Tuple[int, ...]]:
        """
        Reduced row-echelon form.

        Args:
            a: Any matrix

        Returns:
            (R, pivot column indices); rank = number of pivots
        """
        reduced = self.reduce(a).copy()
        n_rows, n_cols = reduced.shape
        pivots: List[int] = []
        row = 0
        for col in range(n_cols):
            if row == n_rows:
                break
            nonzero = np.nonzero(reduced[row:, col])[0]
            if nonzero.size == 0:
                continue
            pivot = row + int(nonzero[0])
            if pivot != row:
                reduced[[row, pivot], :] = reduced[[pivot, row], :]
            inverse = pow(int(reduced[row, col]), -1, self.p)
            reduced[row, :] = (reduced[row, :] * inverse) % self.p
            factors = reduced[:, col].copy()
            factors[row] = 0
            reduced = (reduced - np.outer(factors, reduced[row, :])) % self.p
            pivots.append(col)
            row += 1
        return reduced, tuple(pivots)

    def rank(self, a: np.ndarray) -> int:
        return len(self.rref(a)[1])

    def solve(self, a: np.ndarray, b: np.ndarray) -> Optional[np.ndarray]:
        """
        Find any x with a @ x = b.

        Args:
            a: m x n coefficient matrix
            b: m x k right-hand side (a 1-D vector is treated as one column)

        Returns:
            n x k solution with free variables set to zero, or None when inconsistent
        """
        a = self.reduce(a)
        b = self.reduce(b)
        if b.ndim == 1:
            b = b.reshape(-1, 1)
        if a.shape[0] != b.shape[0]:
            raise FieldError(f"Incompatible shapes for a {a.shape} and b {b.shape}")
        n = a.shape[1]
        reduced, pivots = self.rref(np.hstack((a, b)))
        if any(col >= n for col in pivots):
            return None
        x = self.zeros(n, b.shape[1])
        for row_idx, pivot_col in enumerate(pivots):
            x[pivot_col, :] = reduced[row_idx, n:]
        return x

    def nullspace_basis(self, a: np.ndarray) -> np.ndarray:
        """
        Basis of ker(a) as columns.

        Args:
            a: m x n matrix

        Returns:
            n x (n - rank) matrix whose columns span the kernel
        """
        reduced, pivots = self.rref(a)
        n = reduced.shape[1]
        free = [c for c in range(n) if c not in set(pivots)]
        basis = self.zeros(n, len(free))
        for j, free_col in enumerate(free):
            basis[free_col, j] = 1
            for row_idx, pivot_col in enumerate(pivots):
                basis[pivot_col, j] = (-reduced[row_idx, free_col]) % self.p
        return basis

    def inverse(self, a: np.ndarray) -> Optional[np.ndarray]:
        """Inverse of a square matrix, or None when singular or non-square."""
        a = self.reduce(a)
        n_rows, n_cols = a.shape
        if n_rows != n_cols:
            return None
        reduced, pivots = self.rref(np.hstack((a, self.identity(n_rows))))
        if pivots != tuple(range(n_rows)):
            return None
        return reduced[:, n_rows:]

    def is_invertible(self, a: np.ndarray) -> bool:
        a = np.asarray(a)
        return a.shape[0] == a.shape[1] and self.rank(a) == a.shape[0]


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of integer matrices (reduce afterwards)."""
    return np.kron(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))


def stack_rows(blocks: List[np.ndarray], cols: int) -> np.ndarray:
    """Vertically stack blocks; an empty list gives a 0 x cols matrix."""
    if not blocks:
        return np.zeros((0, cols), dtype=np.int64)
    return np.vstack(blocks)


def enumerate_coefficients(p: int, k: int) -> Iterable[Tuple[int, ...]]:
    """All coefficient vectors of F_p^k in lexicographic order."""
    if k == 0:
        yield ()
        return
    log_event("EXACTLIN", f"enumerating {p ** k} coefficient vectors")
    vector = [0] * k
    while True:
        yield tuple(vector)
        i = k - 1
        while i >= 0 and vector[i] == p - 1:
            vector[i] = 0
            i -= 1
        if i < 0:
            return
        vector[i] += 1
