"""Antisymmetric A-products on Z_p^3: brackets, bases, sublattices.

A 3x3 matrix A over Z_p encodes the product with

    [x1, x2] = sum_i A_i0 x_i,   [x2, x0] = sum_i A_i1 x_i,
    [x0, x1] = sum_i A_i2 x_i,

equivalently [x, y] = A (x cross y) on coordinate triples.  The single
Jacobi instance J(x0, x1, x2) decides the Jacobi identity in dimension 3,
and equals A v where v is the antisymmetry defect vector of A, so symmetric
A always yields a Lie bracket and a nondegenerate Lie bracket forces A
symmetric.

Changing basis by U (columns are the new basis, det U nonzero) transforms
the structure matrix by

    B = det(U) U^{-1} A U^{-T},

which is also the integrality test for a full-rank submodule to be a
subalgebra, and then B is the structure matrix of the submodule.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import Degenerate, InvalidParameters, NotSubalgebra
from .normal_forms import Mat, hnf_columns, lattice_contains, snf
from .padic_core import INF


def cross(x, y):
    """Coordinate cross product of two scalar triples."""
    return (
        x[1] * y[2] - x[2] * y[1],
        x[2] * y[0] - x[0] * y[2],
        x[0] * y[1] - x[1] * y[0],
    )


class Algebra:
    """Z_p^3 with the antisymmetric product encoded by a structure matrix."""

    def __init__(self, matrix):
        if matrix.nrows != 3 or matrix.ncols != 3:
            raise InvalidParameters("structure matrix must be 3x3")
        if not matrix.is_integral():
            raise InvalidParameters("structure matrix must be over Z_p")
        self.matrix = matrix
        self.ctx = matrix.ctx

    def bracket(self, x, y):
        """[x, y] = A (x cross y) on coordinate triples."""
        return self.matrix.mul_vec(cross(x, y))

    def antisymmetry_defect(self):
        """The vector v with A - A^T = [[0,v2,-v1],[-v2,0,v0],[v1,-v0,0]]."""
        d = self.matrix - self.matrix.transpose()
        return (d[1, 2], d[2, 0], d[0, 1])

    def jacobiator(self):
        """J(x0, x1, x2) = A v; zero iff the bracket satisfies Jacobi."""
        return self.matrix.mul_vec(self.antisymmetry_defect())

    def is_lie(self):
        return all(c.is_zero() for c in self.jacobiator())

    def is_unsolvable(self):
        """Nonzero determinant, equivalently L is an unsolvable Lie lattice."""
        return not self.matrix.det().is_zero()

    def s_invariants(self):
        """Elementary divisor valuations of A, ascending; L/[L,L] shape."""
        divisors, _, _ = snf(self.matrix)
        return divisors

    def commutator_matrix(self):
        """Generator matrix of [L, L]: the columns of A."""
        return self.matrix

    def __repr__(self):
        return f"<Algebra {self.matrix.to_literal()} (p={self.ctx.p})>"


def change_of_basis(alg, U):
    """Structure matrix after the basis change U: det(U) U^{-1} A U^{-T}.

    Exact over Q_p via the adjugate; entries may have negative valuation
    when U is not unimodular.
    """
    d = U.det()
    if d.is_zero():
        raise Degenerate("basis-change matrix is singular")
    adj = U.adjugate()
    return (adj * alg.matrix * adj.transpose()).scale(d.inv())


def is_subalgebra(alg, U):
    """Whether the column span of U is closed under the bracket."""
    return change_of_basis(alg, U).is_integral()


def induced_algebra(alg, U):
    """The subalgebra structure on the column span of U; NotSubalgebra if open."""
    B = change_of_basis(alg, U)
    if not B.is_integral():
        raise NotSubalgebra("submodule is not closed under the bracket")
    return Algebra(B)


def index_exponent(U):
    """v_p(det U): the index of the column span in Z_p^3 is p to this."""
    d = U.det()
    if d.is_zero():
        raise Degenerate("submodule has rank < 3")
    return d.valuation()


def index_and_commutator_index(alg, U):
    """Measure [L : M] and [[L,L] : [M,M]] for the subalgebra M = span U.

    Returns (k, c) with p^k the index of M and p^c the commutator index,
    both read off Hermite forms.  The quadrupling law c = 2k is asserted.
    """
    if not alg.is_unsolvable():
        raise Degenerate("commutator index needs an unsolvable algebra")
    B = change_of_basis(alg, U)
    if not B.is_integral():
        raise NotSubalgebra("not a subalgebra")
    k = index_exponent(U)
    comm_L, _ = hnf_columns(alg.commutator_matrix())
    comm_M, _ = hnf_columns(U * B)
    if not lattice_contains(comm_L, comm_M):
        raise NotSubalgebra("commutator lattice escaped; inconsistent input")
    c = sum(x.valuation() for x in comm_M.diagonal_entries()) - sum(
        x.valuation() for x in comm_L.diagonal_entries()
    )
    assert c == 2 * k, "commutator index must be the square of the index"
    return k, c


# ---------------------------------------------------------------------------
# Sublattices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Sublattice:
    """A full-rank sublattice of Z_p^3 held in Hermite normal form."""

    matrix: Mat

    @classmethod
    def from_generators(cls, gens):
        H, rank = hnf_columns(gens)
        if rank < H.nrows:
            raise Degenerate("sublattice must have full rank")
        return cls(H)

    @property
    def ctx(self):
        return self.matrix.ctx

    def index_exponent(self):
        return sum(x.valuation() for x in self.matrix.diagonal_entries())

    def contains_vector(self, v):
        c = self.matrix.inverse_times(Mat(self.ctx, [[x] for x in v]))
        return c.is_integral()

    def contains(self, other):
        return lattice_contains(self.matrix, other.matrix)

    def __eq__(self, other):
        if not isinstance(other, Sublattice):
            return NotImplemented
        return self.matrix == other.matrix

    def key(self):
        return self.matrix.key()


def saturating_scale(n, s):
    """n * s with the conventions 0 * INF = 0 and n * INF = INF for n > 0."""
    if n == 0:
        return 0
    return n * s if s != INF else INF


def lcs_exponents(s, n):
    """Diagonal exponents of gamma_n(L) in a well-diagonalizing basis.

    s = (s0, s1, s2) are the s-invariants read in a basis where the
    structure matrix is diagonal with those valuations; entries may be INF.
    The series is indexed from gamma_0 = L, gamma_{n+1} = [L, gamma_n].
    For n = 2m+1 the exponents are

        ((m+1) s0 + m s1,  m s0 + (m+1) s1,  m s0 + m s1 + s2)

    and for n = 2m (m >= 1)

        (m s0 + m s1,  m s0 + m s1,  m s0 + (m-1) s1 + s2),

    with saturating arithmetic so that INF entries stay INF.
    """
    if n < 0:
        raise InvalidParameters("the series starts at gamma_0 = L")
    s0, s1, s2 = s

    def add(*terms):
        return INF if any(t == INF for t in terms) else sum(terms)

    if n == 0:
        return (0, 0, 0)
    if n % 2 == 1:
        m = (n - 1) // 2
        return (
            add(saturating_scale(m + 1, s0), saturating_scale(m, s1)),
            add(saturating_scale(m, s0), saturating_scale(m + 1, s1)),
            add(saturating_scale(m, s0), saturating_scale(m, s1), s2),
        )
    m = n // 2
    return (
        add(saturating_scale(m, s0), saturating_scale(m, s1)),
        add(saturating_scale(m, s0), saturating_scale(m, s1)),
        add(saturating_scale(m, s0), saturating_scale(m - 1, s1), s2),
    )


def residually_nilpotent(s):
    """gamma_n(L) shrinks to zero iff the middle sorted s-invariant is >= 1."""
    middle = sorted(s)[1]
    return middle >= 1
