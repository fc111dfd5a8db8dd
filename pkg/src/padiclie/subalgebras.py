"""Index-p submodules, the Xi parametrization, and the key stability identity.

The 1 + p + p^2 index-p submodules of Z_p^3 are parametrized by symbols

    ()          ->  U = diag(p, 1, 1)
    (e)         ->  U = [[1,0,0],[e,p,0],[0,0,1]]        e in {0..p-1}
    (e, f)      ->  U = [[1,0,0],[0,1,0],[e,f,p]]        e, f in {0..p-1}

partitioned into classes Xi_0, Xi_1, Xi_2 by the first basis direction the
symbol avoids.  For diagonal A = diag(a0, a1, a2) the transformed structure
matrix has a closed form whose only possibly fractional entry is a single
p^{-1} term, so membership of L^xi among subalgebras is immediate.

A diagonal basis is "non-singular-stable" (NSS) when the three families of
valuation identities below hold; under NSS the subalgebra L^xi in class
Xi_i exists iff s_i >= 1, its s-invariants are the ambient ones shifted by
(-1, +1, +1) in slot i, and the key identity

    [M, M] + p^{s_i} M  =  p [L, L] + p^{s_i} L

pins every such M, which is what makes index-p self-similarity decidable.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import InvalidParameters, NotDiagonal, NotSubalgebra, PreconditionViolated
from .lattice import Algebra, change_of_basis
from .normal_forms import Mat, hnf_columns, snf
from .padic_core import INF


@dataclass(frozen=True)
class XiSymbol:
    """One of the 1 + p + p^2 index-p symbols: (), (e,), or (e, f)."""

    entries: tuple

    def __post_init__(self):
        if len(self.entries) > 2:
            raise InvalidParameters("symbol has at most two entries")

    def class_index(self):
        """Which Xi_i the symbol belongs to (0, 1, or 2)."""
        t = self.entries
        if len(t) == 0:
            return 0
        if len(t) == 1:
            return 0 if t[0] != 0 else 1
        if t[0] != 0:
            return 0
        return 1 if t[1] != 0 else 2

    def u_matrix(self, ctx):
        """Generator matrix of the submodule L^xi."""
        t = self.entries
        if len(t) == 0:
            return Mat.from_ints(ctx, [[ctx.p, 0, 0], [0, 1, 0], [0, 0, 1]])
        if len(t) == 1:
            return Mat.from_ints(ctx, [[1, 0, 0], [t[0], ctx.p, 0], [0, 0, 1]])
        return Mat.from_ints(ctx, [[1, 0, 0], [0, 1, 0], [t[0], t[1], ctx.p]])


def all_symbols(p):
    """All 1 + p + p^2 symbols, in a fixed deterministic order."""
    out = [XiSymbol(())]
    out += [XiSymbol((e,)) for e in range(p)]
    out += [XiSymbol((e, f)) for e in range(p) for f in range(p)]
    return out


def b_xi(A, xi):
    """Closed form of the transformed structure matrix for diagonal A."""
    if not A.is_diagonal():
        raise NotDiagonal("closed form requires a diagonal structure matrix")
    ctx = A.ctx
    a0, a1, a2 = A.diagonal_entries()
    z = ctx.zero()
    t = xi.entries
    if len(t) == 0:
        return Mat.diagonal(ctx, [a0.shift(-1), a1.shift(1), a2.shift(1)])
    if len(t) == 1:
        e = ctx.from_int(t[0])
        mid = (e * e * a0 + a1).shift(-1)
        return Mat(
            ctx,
            [
                [a0.shift(1), -(e * a0), z],
                [-(e * a0), mid, z],
                [z, z, a2.shift(1)],
            ],
        )
    e, f = ctx.from_int(t[0]), ctx.from_int(t[1])
    corner = (e * e * a0 + f * f * a1 + a2).shift(-1)
    return Mat(
        ctx,
        [
            [a0.shift(1), z, -(e * a0)],
            [z, a1.shift(1), -(f * a1)],
            [-(e * a0), -(f * a1), corner],
        ],
    )


@dataclass(frozen=True)
class SubalgebraReport:
    """What enumerate_index_p records for one symbol."""

    xi: XiSymbol
    u_matrix: Mat
    b_matrix: Mat
    closed: bool
    sub_s: tuple


def enumerate_index_p(alg):
    """Reports for every index-p submodule of the algebra.

    b_matrix comes from the generic change-of-basis law; when the ambient
    matrix is diagonal it is cross-checked against the closed form.
    """
    ctx = alg.ctx
    diag = alg.matrix.is_diagonal()
    reports = []
    for xi in all_symbols(ctx.p):
        U = xi.u_matrix(ctx)
        B = change_of_basis(alg, U)
        if diag:
            assert B == b_xi(alg.matrix, xi), "closed form disagrees with base change"
        closed = B.is_integral()
        sub_s = None
        if closed:
            sub_s, _, _ = snf(B)
        reports.append(SubalgebraReport(xi, U, B, closed, sub_s))
    return reports


# ---------------------------------------------------------------------------
# The NSS condition and the shift law
# ---------------------------------------------------------------------------


def nss_condition(A):
    """Check the three valuation-identity families for diagonal sorted A.

    With a = diag entries, Z1 = {1..p-1}, Z0 = {0..p-1}:

        (1)  v(e^2 a0 + a1) = v(a0)            for all e in Z1
        (2)  v(e^2 a0 + f^2 a1 + a2) = v(a0)   for all e in Z1, f in Z0
        (3)  v(f^2 a1 + a2) = v(a1)            for all f in Z1

    Returns (True, None) or (False, witness) with witness = (rule, e, f).
    """
    if not A.is_diagonal():
        raise NotDiagonal("NSS condition is read on a diagonal matrix")
    ctx = A.ctx
    a0, a1, a2 = A.diagonal_entries()
    vals = [x.valuation() for x in (a0, a1, a2)]
    if sorted(vals) != vals:
        raise InvalidParameters("diagonal must be sorted by valuation")
    p = ctx.p
    for e in range(1, p):
        ee = ctx.from_int(e * e)
        if (ee * a0 + a1).valuation() != a0.valuation():
            return False, (1, e, None)
    for e in range(1, p):
        ee = ctx.from_int(e * e)
        for f in range(p):
            ff = ctx.from_int(f * f)
            if (ee * a0 + ff * a1 + a2).valuation() != a0.valuation():
                return False, (2, e, f)
    for f in range(1, p):
        ff = ctx.from_int(f * f)
        if (ff * a1 + a2).valuation() != a1.valuation():
            return False, (3, None, f)
    return True, None


def sub_s_invariants(s, i):
    """Shift law: s-invariants of L^xi for xi in Xi_i under an NSS basis.

    Slot i loses one, the other two slots gain one; requires s_i >= 1.
    """
    if s[i] == INF or s[i] < 1:
        raise NotSubalgebra(f"no index-p subalgebra in class {i}: s_{i} < 1")
    shifted = [
        (x - 1 if j == i else (x + 1 if x != INF else INF)) for j, x in enumerate(s)
    ]
    return tuple(sorted(shifted))


def key_identity_check(alg, xi):
    """Verify [M, M] + p^{s_i} M = p [L, L] + p^{s_i} L for M = L^xi.

    Precondition: the algebra's matrix is diagonal, sorted, NSS, and L^xi
    is a subalgebra.  Both sides are compared as Hermite forms of 3x6
    generator matrices.
    """
    ctx = alg.ctx
    ok, witness = nss_condition(alg.matrix)
    if not ok:
        raise PreconditionViolated(f"basis is not NSS, witness {witness}")
    U = xi.u_matrix(ctx)
    B = change_of_basis(alg, U)
    if not B.is_integral():
        raise PreconditionViolated("L^xi is not a subalgebra")
    s = [x.valuation() for x in alg.matrix.diagonal_entries()]
    si = s[xi.class_index()]
    lhs = (U * B).hstack(U.shift(si))
    rhs = alg.matrix.shift(1).hstack(Mat.identity(ctx, 3).shift(si))
    H1, _ = hnf_columns(lhs)
    H2, _ = hnf_columns(rhs)
    return H1 == H2


# ---------------------------------------------------------------------------
# Index p^2 and generic sublattice enumeration
# ---------------------------------------------------------------------------


def enumerate_index_p2(alg):
    """Index-p^2 subalgebras via two Xi steps, deduplicated by Hermite form.

    Every index-p^2 sublattice contains an index-p intermediate one, so the
    composites U_xi1 * U_xi2 cover everything; non-subalgebra composites
    are filtered out.  Returns {hnf_key: (U_hnf, B)}.
    """
    ctx = alg.ctx
    found = {}
    for xi1 in all_symbols(ctx.p):
        U1 = xi1.u_matrix(ctx)
        for xi2 in all_symbols(ctx.p):
            U = U1 * xi2.u_matrix(ctx)
            H, _ = hnf_columns(U)
            key = H.key()
            if key in found:
                continue
            B = change_of_basis(alg, H)
            if B.is_integral():
                found[key] = (H, B)
    return found


def enumerate_sublattices(ctx, exponent):
    """All full-rank sublattices of Z_p^3 of index exactly p^exponent.

    Direct Hermite enumeration: diagonal (p^a, p^b, p^c) with a+b+c equal
    to the exponent and above-pivot entries reduced mod the pivot of their
    row.  Yields Mats already in Hermite form.
    """
    p = ctx.p
    for a in range(exponent + 1):
        for b in range(exponent + 1 - a):
            c = exponent - a - b
            for h01, h02 in product(range(p**a), repeat=2):
                for h12 in range(p**b):
                    yield Mat.from_ints(
                        ctx,
                        [[p**a, h01, h02], [0, p**b, h12], [0, 0, p**c]],
                    )
