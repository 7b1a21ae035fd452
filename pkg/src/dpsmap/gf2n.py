"""Arithmetic in GF(2^n) with a verified self-dual basis.

Field elements are plain Python ints whose bits hold the coefficients in
the fixed polynomial basis: addition is XOR, multiplication is carry-less
multiplication reduced modulo an irreducible polynomial.  Each context
additionally carries a self-dual basis {theta_1 .. theta_n}, i.e. one with
tr(theta_i * theta_j) = delta_ij.  In that basis the expansion coefficients
of an element double as qubit labels, the trace of a product becomes the
mod-2 dot product of coordinate strings, and swapping two qubits becomes a
linear map on the field.
"""

from __future__ import annotations

import json
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError

# ----------------------------------------------------------------------
# polynomial helpers (bit i of an int = coefficient of x^i)
# ----------------------------------------------------------------------

#: default irreducible polynomial per extension degree
IRREDUCIBLE_POLYS = {
    1: 0b11,         # x + 1
    2: 0b111,        # x^2 + x + 1
    3: 0b1011,       # x^3 + x + 1
    4: 0b10011,      # x^4 + x + 1
    5: 0b100101,     # x^5 + x^2 + 1
    6: 0b1000011,    # x^6 + x + 1
    7: 0b10001001,   # x^7 + x^3 + 1
    8: 0b100011101,  # x^8 + x^4 + x^3 + x^2 + 1
}

#: largest supported extension degree (field level; operators cap lower)
MAX_N = 8


def poly_degree(p: int) -> int:
    return p.bit_length() - 1


def clmul(a: int, b: int) -> int:
    """Carry-less (GF(2)[x]) product of two polynomials."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_mod(p: int, mod: int) -> int:
    """Remainder of p modulo mod in GF(2)[x]."""
    dm = poly_degree(mod)
    while poly_degree(p) >= dm and p:
        p ^= mod << (poly_degree(p) - dm)
    return p


def is_irreducible(poly: int) -> bool:
    """Trial division over GF(2)[x]; fine for the degrees we support."""
    deg = poly_degree(poly)
    if deg < 1:
        return False
    if not poly & 1:
        return poly == 0b10  # x itself is the only irreducible multiple of x
    for d in range(1, deg // 2 + 1):
        for q in range(1 << d, 1 << (d + 1)):
            if poly_mod(poly, q) == 0:
                return False
    return True


# ----------------------------------------------------------------------
# field context
# ----------------------------------------------------------------------

class FieldContext:
    """GF(2^n) lookup tables plus a deterministic self-dual basis.

    Parameters
    ----------
    n : extension degree (1 <= n <= 8).
    poly : optional irreducible polynomial override (bit i = coeff of x^i).
        Must have degree n; irreducibility is verified at construction.
    """

    def __init__(self, n: int, poly: int | None = None):
        if not 1 <= n <= MAX_N:
            raise ConfigurationError(f"n must be in 1..{MAX_N}, got {n}")
        if poly is None:
            poly = IRREDUCIBLE_POLYS[n]
        if poly_degree(poly) != n:
            raise ConfigurationError(
                f"polynomial 0b{poly:b} has degree {poly_degree(poly)}, expected {n}")
        if not is_irreducible(poly):
            raise ConfigurationError(f"polynomial 0b{poly:b} is reducible over GF(2)")
        self.n = n
        self.poly = poly
        self.order = 1 << n

        self._build_tables()
        self.selfdual_basis = self._find_selfdual_basis()
        self._build_coord_tables()

    # -- construction ---------------------------------------------------

    def _build_tables(self):
        q, n, poly = self.order, self.n, self.poly
        a = np.arange(q, dtype=np.int64)[:, None]
        b = np.arange(q, dtype=np.int64)[None, :]
        prod = np.zeros((q, q), dtype=np.int64)
        for i in range(n):
            prod ^= np.where((b >> i) & 1 == 1, a << i, 0)
        for j in range(2 * n - 2, n - 1, -1):
            prod ^= np.where((prod >> j) & 1 == 1, poly << (j - n), 0)
        self.mul_table = prod

        # multiplicative inverses: the unique 1 in each nonzero row
        inv = np.argmax(prod == 1, axis=1)
        inv[0] = 0  # sentinel, inv(0) is rejected in inv()
        self.inv_table = inv

        # absolute trace tr(x) = sum_{i=0}^{n-1} x^(2^i), a sum in the field
        cur = np.arange(q, dtype=np.int64)
        acc = cur.copy()
        for _ in range(n - 1):
            cur = prod[cur, cur]
            acc ^= cur
        if acc.max() > 1:
            raise ConfigurationError("trace not GF(2)-valued; polynomial is bad")
        self.trace_table = acc
        self.chi_table = (1 - 2 * acc).astype(np.int64)

        # square root = inverse Frobenius, x^(2^(n-1))
        cur = np.arange(q, dtype=np.int64)
        for _ in range(n - 1):
            cur = prod[cur, cur]
        self.sqrt_table = cur

    def _find_selfdual_basis(self) -> tuple[int, ...]:
        """Lexicographically smallest ascending tuple with Gram matrix I.

        Depth-first search in increasing element order.  Requiring the
        tuple to be ascending loses nothing (a self-dual set stays
        self-dual under reordering) and makes the result canonical.
        """
        q, n = self.order, self.n
        tr, mul = self.trace_table, self.mul_table
        elems = np.arange(q, dtype=np.int64)
        diag_ok = tr[mul[elems, elems]] == 1

        basis: list[int] = []

        def extend(lo: int) -> bool:
            if len(basis) == n:
                return True
            ok = diag_ok.copy()
            ok[:lo] = False
            for th in basis:
                ok &= tr[mul[th]] == 0
            cands = np.flatnonzero(ok)
            if len(cands) < n - len(basis):
                return False
            for x in cands:
                basis.append(int(x))
                if extend(int(x) + 1):
                    return True
                basis.pop()
            return False

        if not extend(1):
            raise ConfigurationError("no self-dual basis found (unexpected for GF(2^n))")
        return tuple(basis)

    def _build_coord_tables(self):
        q, n = self.order, self.n
        theta = np.array(self.selfdual_basis, dtype=np.int64)
        # coords[x, i] = tr(x * theta_i)
        self.coords_table = self.trace_table[self.mul_table[:, theta]].astype(np.int64)
        self.hweight_table = self.coords_table.sum(axis=1)
        # Hilbert-space basis index: coordinate of theta_1 is the most
        # significant bit, matching qubit order in tensor products
        weights = 1 << np.arange(n - 1, -1, -1, dtype=np.int64)
        self.index_table = (self.coords_table * weights).sum(axis=1)
        inverse = np.empty(q, dtype=np.int64)
        inverse[self.index_table] = np.arange(q, dtype=np.int64)
        self.element_of_index = inverse
        # chi(x*y) for all pairs; the workhorse of every character sum
        self.char_matrix = self.chi_table[self.mul_table]
        self.char_matrix_f = self.char_matrix.astype(np.float64)
        self.char_matrix_c = self.char_matrix.astype(np.complex128)
        self.xor_grid = np.bitwise_xor.outer(
            np.arange(q, dtype=np.int64), np.arange(q, dtype=np.int64))

    # -- scalar operations ----------------------------------------------

    def elements(self) -> range:
        return range(self.order)

    def add(self, x: int, y: int) -> int:
        return x ^ y

    def mul(self, x: int, y: int) -> int:
        return int(self.mul_table[x, y])

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return int(self.inv_table[x])

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def frobenius(self, x: int, k: int = 1) -> int:
        """x^(2^k)."""
        for _ in range(k % self.n):
            x = int(self.mul_table[x, x])
        return x

    def sqrt(self, x: int) -> int:
        return int(self.sqrt_table[x])

    def trace(self, x: int) -> int:
        return int(self.trace_table[x])

    def chi(self, x: int) -> int:
        """Additive character (-1)^tr(x), valued in {+1, -1}."""
        return int(self.chi_table[x])

    # -- self-dual coordinates -------------------------------------------

    def to_coords(self, x: int) -> tuple[int, ...]:
        return tuple(int(c) for c in self.coords_table[x])

    def from_coords(self, coords) -> int:
        if len(coords) != self.n:
            raise ValueError(f"expected {self.n} coordinates, got {len(coords)}")
        x = 0
        for c, th in zip(coords, self.selfdual_basis):
            if c not in (0, 1):
                raise ValueError("coordinates must be bits")
            if c:
                x ^= th
        return x

    def hweight(self, x: int) -> int:
        """Hamming weight of the self-dual coordinate string."""
        return int(self.hweight_table[x])

    def basis_index(self, x: int) -> int:
        """Position of |x> in the 2^n-dimensional amplitude vector."""
        return int(self.index_table[x])

    def transpose_coords(self, x: int, i: int, j: int) -> int:
        """Swap self-dual coordinates i and j (1-based qubit labels).

        Equals x + eps * tr(x * eps) with eps = theta_i + theta_j.
        """
        eps = self.transposition_element(i, j)
        if self.trace(self.mul(x, eps)):
            return x ^ eps
        return x

    def transposition_element(self, i: int, j: int) -> int:
        if not (1 <= i <= self.n and 1 <= j <= self.n) or i == j:
            raise ValueError(f"need distinct qubit labels in 1..{self.n}")
        return self.selfdual_basis[i - 1] ^ self.selfdual_basis[j - 1]

    def gram_matrix(self) -> np.ndarray:
        theta = np.array(self.selfdual_basis, dtype=np.int64)
        return self.trace_table[self.mul_table[np.ix_(theta, theta)]]

    # -- serialization ----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "poly": self.poly,
            "selfdual_basis": list(self.selfdual_basis),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, record: dict) -> "FieldContext":
        ctx = cls(int(record["n"]), int(record["poly"]))
        claimed = tuple(int(x) for x in record.get("selfdual_basis", ()))
        if claimed and claimed != ctx.selfdual_basis:
            # accept any basis that passes the Gram test, not just ours
            theta = np.array(claimed, dtype=np.int64)
            gram = ctx.trace_table[ctx.mul_table[np.ix_(theta, theta)]]
            if not np.array_equal(gram, np.eye(ctx.n, dtype=np.int64)):
                raise ConfigurationError("stored basis fails the self-duality check")
            ctx.selfdual_basis = claimed
            ctx._build_coord_tables()
        return ctx

    @classmethod
    def from_json(cls, text: str) -> "FieldContext":
        return cls.from_json_dict(json.loads(text))

    def __repr__(self):
        return f"FieldContext(n={self.n}, poly=0b{self.poly:b})"


@lru_cache(maxsize=None)
def field_context(n: int, poly: int | None = None) -> FieldContext:
    """Cached constructor; contexts are immutable in practice."""
    return FieldContext(n, poly)


def find_selfdual_basis(n: int, poly: int | None = None) -> tuple[int, ...]:
    """Convenience wrapper returning just the canonical basis."""
    return field_context(n, poly).selfdual_basis
