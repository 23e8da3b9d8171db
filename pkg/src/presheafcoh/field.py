"""Exact scalar fields and dense matrix kernels.

Matrices are plain numpy arrays: ``int64`` reduced into ``[0, p)`` over a
prime field, ``object`` arrays of :class:`fractions.Fraction` over the
rationals.  Elimination (rank, reduced echelon form) is delegated to
python-flint, which is exact in both cases.
"""
from __future__ import annotations

from fractions import Fraction

import flint
import numpy as np

DEFAULT_PRIME = 101


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


class Field:
    """F_p for a prime ``p``, or Q when ``p`` is None."""

    def __init__(self, p: int | None = DEFAULT_PRIME):
        if p is not None:
            p = int(p)
            if not _is_prime(p):
                raise ValueError(f"{p} is not prime")
        self.p = p
        self.dtype = np.int64 if p is not None else object

    @classmethod
    def from_name(cls, name: str | int | None) -> "Field":
        if name is None or isinstance(name, int):
            return cls(name if name is not None else DEFAULT_PRIME)
        s = str(name).strip().upper()
        if s in ("Q", "QQ", "RATIONALS"):
            return cls(None)
        if s.startswith("F"):
            s = s[1:].lstrip("_")
        return cls(int(s))

    @property
    def name(self) -> str:
        return "Q" if self.p is None else f"F{self.p}"

    def __repr__(self) -> str:
        return f"Field({self.name})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("Field", self.p))

    # -- scalars -----------------------------------------------------------

    def scalar(self, x):
        if self.p is not None:
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return int(x) % self.p
        return Fraction(x)

    def parse(self, s) -> object:
        if isinstance(s, (int, Fraction)):
            return self.scalar(s)
        return self.scalar(Fraction(str(s).strip()))

    def format(self, x) -> str:
        if self.p is not None:
            return str(int(x))
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def inv(self, x):
        if self.p is not None:
            return pow(int(x), -1, self.p)
        return 1 / Fraction(x)

    # -- constructors --------------------------------------------------------

    def array(self, data) -> np.ndarray:
        if self.p is not None:
            a = np.array(data, dtype=object)
            if a.size and any(isinstance(x, Fraction) for x in a.flat):
                a = np.vectorize(self.scalar, otypes=[object])(a)
            return np.asarray(a, dtype=np.int64) % self.p
        a = np.array(data, dtype=object)
        if a.size:
            a = np.vectorize(Fraction, otypes=[object])(a)
        return a

    def zeros(self, *shape) -> np.ndarray:
        if self.p is not None:
            return np.zeros(shape, dtype=np.int64)
        a = np.empty(shape, dtype=object)
        a.fill(Fraction(0))
        return a

    def eye(self, n: int) -> np.ndarray:
        a = self.zeros(n, n)
        for i in range(n):
            a[i, i] = 1 if self.p is not None else Fraction(1)
        return a

    def random(self, rng: np.random.Generator, shape, low: int = -3, high: int = 3) -> np.ndarray:
        if self.p is not None:
            return rng.integers(0, self.p, size=shape).astype(np.int64)
        vals = rng.integers(low, high + 1, size=shape)
        return self.array(vals)

    def reduce(self, a: np.ndarray) -> np.ndarray:
        if self.p is not None:
            return np.asarray(a, dtype=np.int64) % self.p
        return a

    # -- arithmetic ------------------------------------------------------------

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[-1] != b.shape[0]:
            raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
        if self.p is None:
            if a.size == 0 or b.size == 0:
                return self.zeros(a.shape[0], b.shape[1])
            return np.dot(a, b)
        inner = a.shape[-1]
        if inner * (self.p - 1) ** 2 < 2 ** 52:
            # exact in double precision; routes through BLAS
            c = np.matmul(a.astype(np.float64), b.astype(np.float64))
            return np.rint(c).astype(np.int64) % self.p
        return np.matmul(a.astype(object), b.astype(object)).astype(np.int64) % self.p

    def mul(self, *mats: np.ndarray) -> np.ndarray:
        out = mats[0]
        for m in mats[1:]:
            out = self.matmul(out, m)
        return out

    def kron(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.reduce(np.kron(a, b))

    def is_zero(self, a: np.ndarray) -> bool:
        if a.size == 0:
            return True
        if self.p is not None:
            return not np.any(a % self.p)
        return all(x == 0 for x in a.flat)

    def equal(self, a: np.ndarray, b: np.ndarray) -> bool:
        if a.shape != b.shape:
            return False
        return self.is_zero(self.reduce(a - b))

    # -- elimination -------------------------------------------------------------

    def _to_flint(self, a: np.ndarray):
        m, n = a.shape
        if self.p is not None:
            return flint.nmod_mat(m, n, (a % self.p).ravel().tolist(), self.p)
        return flint.fmpq_mat(m, n, [flint.fmpq(x.numerator, x.denominator) for x in a.ravel()])

    def _from_flint(self, fm, shape) -> np.ndarray:
        entries = fm.entries()
        if self.p is not None:
            return np.fromiter(map(int, entries), dtype=np.int64, count=len(entries)).reshape(shape)
        out = np.empty(len(entries), dtype=object)
        out[:] = [Fraction(int(x.p), int(x.q)) for x in entries]
        return out.reshape(shape)

    def rank(self, a: np.ndarray) -> int:
        a = np.asarray(a)
        if a.ndim != 2 or 0 in a.shape:
            return 0
        if a.shape[0] > a.shape[1]:
            a = a.T
        return int(self._to_flint(a).rank())

    def rref(self, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
        """Reduced row echelon form with zero rows dropped, and pivot columns."""
        m, n = a.shape
        if m == 0 or n == 0:
            return self.zeros(0, n), []
        fr, r = self._to_flint(a).rref()
        r = int(r)
        if r == 0:
            return self.zeros(0, n), []
        rows = self._from_flint(fr, (m, n))[:r]
        pivots = []
        for i in range(r):
            row = rows[i]
            j = next(j for j in range(n) if row[j] != 0)
            pivots.append(j)
        return rows, pivots

    def nullspace(self, a: np.ndarray) -> np.ndarray:
        """Basis of {x : a x = 0}, as columns."""
        m, n = a.shape
        if m == 0:
            return self.eye(n)
        rows, piv = self.rref(a)
        free = [j for j in range(n) if j not in set(piv)]
        out = self.zeros(n, len(free))
        for c, j in enumerate(free):
            out[j, c] = 1
            for i, pj in enumerate(piv):
                out[pj, c] = -rows[i, j]
        return self.reduce(out)

    def colspace(self, a: np.ndarray) -> np.ndarray:
        """Linearly independent columns of ``a`` spanning its column space."""
        if a.shape[1] == 0:
            return a
        _, piv = self.rref(a)
        return a[:, piv]

    def rowspace(self, a: np.ndarray) -> np.ndarray:
        rows, _ = self.rref(a)
        return rows

    def solve(self, a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
        """Some X with a X = b, or None when the system is inconsistent."""
        m, n = a.shape
        k = b.shape[1]
        if m == 0:
            return self.zeros(n, k)
        aug = np.concatenate([a, b], axis=1)
        rows, piv = self.rref(aug)
        if any(j >= n for j in piv):
            return None
        x = self.zeros(n, k)
        for i, j in enumerate(piv):
            x[j, :] = rows[i, n:]
        return x

    def inverse(self, a: np.ndarray) -> np.ndarray:
        n = a.shape[0]
        if a.shape != (n, n):
            raise ValueError("inverse of a non-square matrix")
        x = self.solve(a, self.eye(n))
        if x is None or not self.equal(self.matmul(a, x), self.eye(n)):
            raise ValueError("matrix is singular")
        return x

    def left_inverse(self, b: np.ndarray) -> np.ndarray:
        """L with L b = I for a matrix b of full column rank."""
        n, k = b.shape
        if k == 0:
            return self.zeros(0, n)
        _, piv = self.rref(b.T)
        if len(piv) != k:
            raise ValueError("matrix does not have full column rank")
        sub = self.inverse(b[piv, :])
        out = self.zeros(k, n)
        out[:, piv] = sub
        return out

    def pseudo_inverse(self, a: np.ndarray) -> np.ndarray:
        """A matrix k with a k a = a (exists for every matrix over a field)."""
        m, n = a.shape
        if m == 0 or n == 0 or self.is_zero(a):
            return self.zeros(n, m)
        col = self.colspace(a)
        _, piv = self.rref(a)
        # a restricted to the pivot columns maps onto the image isomorphically
        lift = self.zeros(n, col.shape[1])
        for c, j in enumerate(piv):
            lift[j, c] = 1
        return self.matmul(lift, self.left_inverse(col))

    def in_span(self, basis: np.ndarray, vecs: np.ndarray) -> bool:
        if vecs.shape[1] == 0:
            return True
        return self.rank(np.concatenate([basis, vecs], axis=1)) == self.rank(basis)

    def complement_basis(self, sub: np.ndarray, n: int) -> np.ndarray:
        """Standard basis vectors completing the column span of ``sub`` to F^n."""
        if sub.shape[1] == 0:
            return self.eye(n)
        rows, piv = self.rref(sub.T)
        free = [j for j in range(n) if j not in set(piv)]
        return self.eye(n)[:, free]
