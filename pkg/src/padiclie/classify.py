"""Canonical forms and the eta invariant of unsolvable Lie lattices.

Every unsolvable Lie lattice on Z_p^3 (p odd) has a symmetric nondegenerate
structure matrix, and the congruence class of that matrix up to a unit
factor is a complete isomorphism invariant.  Each class contains exactly
one representative from four diagonal families (rho is the least positive
non-residue mod p):

    1: diag(p^s0, rho^e1 p^s1, rho^e2 p^s2)      0 <= s0 < s1 < s2
    2: diag(p^s0, -rho^e1 p^s0, p^s2)            0 <= s0 < s2
    3: diag(p^s0, p^s1, -rho^e2 p^s1)            0 <= s0 < s1
    4: diag(p^s0, p^s0, p^s0)

The eta invariant separates the two Q_p types: eta = 0 lattices sit inside
sl2(Q_p), eta = 1 lattices inside sl1 of the quaternion division algebra.
It is computed along two independent routes (additive Hilbert symbols
against a closed formula in the diagonal data) which must agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import Degenerate, InvalidParameters, NotLie, PathDisagreement
from .lattice import Algebra
from .normal_forms import Mat, congruent_diagonalize
from .padic_core import PrimeContext, hilbert_additive


class QpType(Enum):
    SL2 = "sl2"
    SL1D = "sl1d"


@dataclass(frozen=True)
class CanonicalForm:
    """Complete isomorphism invariant: (family, s, eps) at a fixed prime."""

    family: int
    s: tuple
    eps: tuple
    p: int

    def __post_init__(self):
        s0, s1, s2 = self.s
        ok = {
            1: s0 < s1 < s2 and self.eps[0] is not None and self.eps[1] is not None,
            2: s0 == s1 < s2 and self.eps[0] is not None and self.eps[1] is None,
            3: s0 < s1 == s2 and self.eps[1] is not None and self.eps[0] is None,
            4: s0 == s1 == s2 and self.eps == (None, None),
        }.get(self.family, False)
        if not ok or s0 < 0:
            raise InvalidParameters(
                f"inconsistent canonical data: family {self.family}, s={self.s}, eps={self.eps}"
            )
        for e in self.eps:
            if e not in (None, 0, 1):
                raise InvalidParameters("eps entries must be 0, 1, or absent")

    def matrix(self, ctx=None):
        """The canonical structure matrix as a Mat."""
        ctx = ctx or PrimeContext(self.p)
        p, rho = ctx.p, ctx.rho
        s0, s1, s2 = self.s
        e1, e2 = self.eps
        if self.family == 1:
            diag = [p**s0, rho**e1 * p**s1, rho**e2 * p**s2]
        elif self.family == 2:
            diag = [p**s0, -(rho**e1) * p**s0, p**s2]
        elif self.family == 3:
            diag = [p**s0, p**s1, -(rho**e2) * p**s1]
        else:
            diag = [p**s0, p**s0, p**s0]
        return Mat.diagonal(ctx, [ctx.from_int(x) for x in diag])

    def algebra(self, ctx=None):
        return Algebra(self.matrix(ctx))


def _family_from_diagonal(entries, ctx):
    """(family, s, eps) from a sorted well-diagonalized diagonal."""
    vals = [x.valuation() for x in entries]
    chi = [x.square_class() for x in entries]
    delta = ctx.delta
    s0, s1, s2 = vals
    if s0 < s1 < s2:
        return 1, (s0, s1, s2), ((chi[1] + chi[0]) % 2, (chi[2] + chi[0]) % 2)
    if s0 == s1 < s2:
        # eps1 is the class of -u0*u1
        return 2, (s0, s1, s2), ((delta + chi[0] + chi[1]) % 2, None)
    if s0 < s1 == s2:
        return 3, (s0, s1, s2), (None, (delta + chi[1] + chi[2]) % 2)
    return 4, (s0, s1, s2), (None, None)


def canonical_form(alg):
    """Canonical form of an unsolvable Lie lattice.

    Raises NotLie when the structure matrix is not symmetric (an unsolvable
    Lie bracket forces symmetry) and Degenerate when det A = 0.
    """
    A = alg.matrix
    ctx = alg.ctx
    if not A.is_symmetric():
        raise NotLie("structure matrix of an unsolvable Lie lattice must be symmetric")
    if A.det().is_zero():
        raise Degenerate("structure matrix is degenerate")
    D, _V = congruent_diagonalize(A)
    entries = D.diagonal_entries()
    for x in entries:
        ctx.guard_decidable(x.valuation())
    family, s, eps = _family_from_diagonal(entries, ctx)
    return CanonicalForm(family, s, eps, ctx.p)


def is_isomorphic(a, b):
    """Two unsolvable Lie lattices are isomorphic iff canonical forms agree."""
    if a.ctx.p != b.ctx.p:
        raise InvalidParameters("lattices live over different primes")
    return canonical_form(a) == canonical_form(b)


# ---------------------------------------------------------------------------
# The eta invariant
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EtaBreakdown:
    """eta = delta * v_p(d(A)) + e(A) mod 2, with both ingredients exposed."""

    disc_valuation_parity: int
    hilbert_sum: int
    eta: int


def _eta_symbol_route(entries, ctx):
    """Route one: discriminant parity plus pairwise additive Hilbert symbols."""
    disc_val = sum(x.valuation() for x in entries)
    e = 0
    for i in range(3):
        for j in range(i + 1, 3):
            e = (e + hilbert_additive(entries[i], entries[j])) % 2
    return (ctx.delta * disc_val + e) % 2, disc_val % 2, e


def _eta_closed_route(entries, ctx):
    """Route two: closed formula in the valuations and unit square classes.

        eta = delta (sum_i s_i + sum_{i<j} s_i s_j)
              + sum_{i<j} (chi_i s_j + chi_j s_i)   (mod 2)
    """
    s = [x.valuation() for x in entries]
    chi = [x.square_class() for x in entries]
    total = ctx.delta * (sum(s) + s[0] * s[1] + s[0] * s[2] + s[1] * s[2])
    for i in range(3):
        for j in range(i + 1, 3):
            total += chi[i] * s[j] + chi[j] * s[i]
    return total % 2


def eta(A):
    """eta invariant of a symmetric nondegenerate matrix over Q_p.

    Both routes are always evaluated; disagreement raises PathDisagreement.
    """
    if isinstance(A, Algebra):
        A = A.matrix
    ctx = A.ctx
    D, _ = congruent_diagonalize(A)  # raises NotSymmetric / Degenerate
    entries = D.diagonal_entries()
    via_symbols, disc_parity, e_sum = _eta_symbol_route(entries, ctx)
    via_formula = _eta_closed_route(entries, ctx)
    if via_symbols != via_formula:
        raise PathDisagreement(
            f"eta routes disagree: symbols {via_symbols}, closed formula {via_formula}"
        )
    return EtaBreakdown(disc_parity, e_sum, via_symbols)


def qp_type(A):
    """Q_p isomorphism type: sl2 when eta = 0, the division algebra when 1."""
    return QpType.SL2 if eta(A).eta == 0 else QpType.SL1D
