"""Self-similarity: decision, certificates, obstruction data, sigma bounds.

A virtual endomorphism of L is a module map phi from a finite-index
subalgebra M into L; it is simple when no nonzero ideal J of L with J
inside M satisfies phi(J) inside J.  L is self-similar of index p^k when a
simple phi exists on some M of index p^k; sigma(L) is the least such p^k.

Index-p decision (complete, by canonical family):

    family 1 -> never      family 2 -> iff eps1 = 0
    family 3 -> iff eps2 = 0       family 4 -> always

The positive certificate is fully explicit.  Any matrix of the hyperbolic
shape [[a,0,0],[0,0,b],[0,b,0]] (b nonzero) admits the simple map

    M = <x0, p x1, x2>,  phi: x0 -> x0, p x1 -> x1, x2 -> p x2,

whose domain chain is D_n = <x0, p^n x1, x2> with intersection <x0, x2>.
Every decide-yes diagonal form reaches that shape by permutation, a unit
rescale by sqrt(-u_i/u_j) (possible exactly when the relevant eps
vanishes; family 4 may first need a Cassels move), and the basis change
[[2,0,0],[0,1,1],[0,-1,1]].

The negative certificate is the key identity: in an NSS basis, every
index-p subalgebra M in class Xi_i satisfies [M,M] + p^{s_i} M =
p[L,L] + p^{s_i} L, which any index-p morphism must stabilize.

sigma bounds for eta = 0 follow the nine-row table (see sigma_bounds);
for eta = 1 the lattice is not self-similar of index p, and the upper
bound is conjectured infinite: the sentinel is never a number.
"""

from __future__ import annotations

from dataclasses import dataclass

from .classify import CanonicalForm, canonical_form, eta
from .errors import (
    Degenerate,
    InvalidParameters,
    NotIndexPSelfSimilar,
    NotSubalgebra,
    PreconditionViolated,
)
from .lattice import Algebra, change_of_basis, index_exponent
from .normal_forms import (
    Mat,
    congruent_diagonalize,
    cassels_move,
    hnf_columns,
    kernel_basis,
    lattice_contains,
)
from .padic_core import INF
from .subalgebras import all_symbols, enumerate_sublattices, key_identity_check, nss_condition

CONJECTURED_INFINITE = "conjectured_infinite"


def decide_index_p(cf):
    """Is a lattice with this canonical form self-similar of index p?"""
    if cf.family == 1:
        return False
    if cf.family == 2:
        return cf.eps[0] == 0
    if cf.family == 3:
        return cf.eps[1] == 0
    return True


# ---------------------------------------------------------------------------
# Virtual endomorphisms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VirtualEndomorphism:
    """phi: M -> L.  domain columns span M; phi columns are the images of
    the domain basis vectors, written in ambient coordinates."""

    ambient: Algebra
    domain: Mat
    phi: Mat

    def __post_init__(self):
        if self.domain.det().is_zero():
            raise Degenerate("domain must have full rank")
        if not self.domain.is_integral() or not self.phi.is_integral():
            raise InvalidParameters("domain and images must be integral")

    def index_exponent(self):
        return index_exponent(self.domain)

    def apply(self, x):
        """Image of an ambient vector lying in M."""
        c = self.domain.inverse_times(Mat(self.ambient.ctx, [[t] for t in x]))
        if not c.is_integral():
            raise InvalidParameters("vector is not in the domain")
        img = self.phi * c
        return tuple(img[i, 0] for i in range(3))


def is_morphism(ve):
    """Check phi[x, y] = [phi x, phi y] on the domain basis pairs.

    Raises NotSubalgebra when the domain is not closed under the bracket.
    """
    alg = ve.ambient
    B = change_of_basis(alg, ve.domain)
    if not B.is_integral():
        raise NotSubalgebra("domain of a virtual endomorphism must be a subalgebra")
    d = [ve.domain.col(j) for j in range(3)]
    im = [ve.phi.col(j) for j in range(3)]
    for i in range(3):
        for j in range(i + 1, 3):
            lhs_vec = alg.bracket(d[i], d[j])  # lies in M since M is closed
            c = ve.domain.inverse_times(Mat(alg.ctx, [[t] for t in lhs_vec]))
            lhs = (ve.phi * c).col(0)
            rhs = alg.bracket(im[i], im[j])
            if any(a != b for a, b in zip(lhs, rhs)):
                return False
    return True


def _preimage_lattice(phi, S):
    """Generator matrix of {c integral : phi c in span S} (full rank)."""
    stacked = phi.hstack(S.scale(-phi.ctx.one()))
    K = kernel_basis(stacked)
    n = phi.ncols
    top = Mat(phi.ctx, [K.row(i) for i in range(n)])
    H, rank = hnf_columns(top)
    if rank < n:
        raise Degenerate("preimage degenerated; phi and S must be full rank")
    return H


def domain_chain(ve, depth):
    """The descending chain D_0 = L, D_{n+1} = {x in M : phi x in D_n}.

    Returns the list [D_0, ..., D_depth] of Hermite generator matrices in
    ambient coordinates.
    """
    ctx = ve.ambient.ctx
    chain = [Mat.identity(ctx, 3)]
    for _ in range(depth):
        pre_c = _preimage_lattice(ve.phi, chain[-1])
        nxt, _ = hnf_columns(ve.domain * pre_c)
        chain.append(nxt)
    return chain


@dataclass(frozen=True)
class RegularityReport:
    regular: bool
    index_exponents: tuple
    escapes: tuple


def regularity_check(ve, depth):
    """Indices along the domain chain, and the escape condition at each level.

    regular means every consecutive index is exactly p.  escapes[n] records
    whether phi(D_{n+1}) is NOT contained in D_{n+1}, the sufficient
    condition for regularity to propagate.
    """
    chain = domain_chain(ve, depth + 1)
    exps = []
    escapes = []
    for n in range(depth):
        k0 = sum(x.valuation() for x in chain[n].diagonal_entries())
        k1 = sum(x.valuation() for x in chain[n + 1].diagonal_entries())
        exps.append(k1 - k0)
        d_next = chain[n + 1]
        c = ve.domain.inverse_times(d_next)
        images = ve.phi * c
        escapes.append(not lattice_contains(d_next, images))
    return RegularityReport(all(e == 1 for e in exps), tuple(exps), tuple(escapes))


def invariant_ideal_search(ve, bound):
    """Search for a nonzero phi-invariant ideal J of L inside M, of index
    at most p^bound.  Returns the witness Hermite matrix or None.

    Any phi-invariant ideal lies inside every D_n, so the enumeration runs
    over sublattices of D_bound only; proper sublattices of L are
    considered (index exponent >= 1), ordered by increasing index.
    """
    alg = ve.ambient
    ctx = alg.ctx
    B = change_of_basis(alg, ve.domain)
    if not B.is_integral():
        raise NotSubalgebra("domain must be a subalgebra")
    chain = domain_chain(ve, bound)
    d_bound = chain[-1]
    v_bound = sum(x.valuation() for x in d_bound.diagonal_entries())
    if v_bound > bound:
        return None
    basis = [tuple(Mat.identity(ctx, 3).col(j)) for j in range(3)]
    candidates = []
    for rel in range(max(0, 1 - v_bound), bound - v_bound + 1):
        for H in enumerate_sublattices(ctx, rel):
            J, _ = hnf_columns(d_bound * H)
            candidates.append((v_bound + rel, J))
    candidates.sort(key=lambda t: t[0])
    for _, J in candidates:
        cols = [J.col(j) for j in range(3)]
        # ideal test: [L, J] inside J
        is_ideal = True
        for x in basis:
            for jvec in cols:
                w = alg.bracket(x, jvec)
                wmat = Mat(ctx, [[t] for t in w])
                if not J.inverse_times(wmat).is_integral():
                    is_ideal = False
                    break
            if not is_ideal:
                break
        if not is_ideal:
            continue
        # J inside M
        if not ve.domain.inverse_times(J).is_integral():
            continue
        # phi(J) inside J
        c = ve.domain.inverse_times(J)
        images = ve.phi * c
        if J.inverse_times(images).is_integral():
            return J
    return None


# ---------------------------------------------------------------------------
# Construction of the simple index-p endomorphism
# ---------------------------------------------------------------------------


def _is_hyperbolic(A):
    """Matches [[a,0,0],[0,0,b],[0,b,0]] with b nonzero."""
    zero_positions = [(0, 1), (0, 2), (1, 0), (2, 0), (1, 1), (2, 2)]
    if any(not A[i, j].is_zero() for i, j in zero_positions):
        return False
    return (not A[1, 2].is_zero()) and A[1, 2] == A[2, 1]


def _hyperbolic_ve(alg):
    """The literal construction on [[a,0,0],[0,0,b],[0,b,0]]."""
    ctx = alg.ctx
    domain = Mat.p_power_diagonal(ctx, (0, 1, 0))
    phi = Mat.p_power_diagonal(ctx, (0, 0, 1))
    return VirtualEndomorphism(alg, domain, phi)


def _prepare_hyperbolic(alg):
    """Basis-change witness W with change_of_basis(alg, W) hyperbolic.

    Diagonalize, find an equal-valuation pair whose negated unit product is
    a square (one Cassels move with rho creates such a pair for family 4
    when none exists), move the pair to slots 1 and 2, rescale slot 2 by
    sqrt(-u1/u2), and finish with [[2,0,0],[0,1,1],[0,-1,1]].
    """
    ctx = alg.ctx
    D, V = congruent_diagonalize(alg.matrix)

    def find_pair(diag):
        for i in range(3):
            for j in range(i + 1, 3):
                di, dj = diag[i, i], diag[j, j]
                if di.valuation() != dj.valuation():
                    continue
                if (-(di * dj)).square_class() == 0:
                    return i, j
        return None

    pair = find_pair(D)
    if pair is None:
        # only family 4 reaches here; shuffle one rho across a tied pair
        tied = [
            (i, j)
            for i in range(3)
            for j in range(i + 1, 3)
            if D[i, i].valuation() == D[j, j].valuation()
        ]
        if not tied:
            raise NotIndexPSelfSimilar("no equal-valuation pair available")
        i, j = tied[0]
        D, Vc = cassels_move(D, i, j, ctx.rho)
        V = V * Vc
        pair = find_pair(D)
        if pair is None:
            raise NotIndexPSelfSimilar("no hyperbolic pair even after a Cassels move")
    i, j = pair
    m = [t for t in range(3) if t not in (i, j)][0]
    # permutation sending m -> slot 0, i -> slot 1, j -> slot 2
    perm = Mat(
        ctx,
        [
            [
                ctx.one() if (r, c) in ((m, 0), (i, 1), (j, 2)) else ctx.zero()
                for c in range(3)
            ]
            for r in range(3)
        ],
    )
    D = (perm.transpose() * D) * perm
    V = V * perm
    u1, u2 = D[1, 1], D[2, 2]
    w = (-(u1 / u2)).sqrt()  # unit: same valuation, square class 0
    scale = Mat.diagonal(ctx, [ctx.one(), ctx.one(), w])
    D = (scale.transpose() * D) * scale
    V = V * scale
    hyp = Mat.from_ints(ctx, [[2, 0, 0], [0, 1, 1], [0, -1, 1]])
    V = V * hyp
    # V is a congruence witness (V^T A V hyperbolic).  The structure matrix
    # transforms by det(W) W^{-1} A W^{-T}, and W = adj(V^T) turns that into
    # exactly V^T A V, so hand back the adjugate transpose.
    return V.transpose().adjugate()


def construct_simple_ve(alg):
    """Explicit simple virtual endomorphism of index p, or raise.

    For the hyperbolic shape the construction is literal; otherwise the
    lattice is rewritten into that shape first.  Raises
    NotIndexPSelfSimilar when the canonical family forbids index p.
    """
    cf = canonical_form(alg)
    if not decide_index_p(cf):
        raise NotIndexPSelfSimilar(
            f"family {cf.family} with eps {cf.eps} admits no simple index-p map"
        )
    if _is_hyperbolic(alg.matrix):
        return _hyperbolic_ve(alg)
    W = _prepare_hyperbolic(alg)
    # cross-check: the rewritten matrix really is hyperbolic
    H = change_of_basis(alg, W)
    assert _is_hyperbolic(H), "preparation failed to reach the hyperbolic shape"
    domain, _ = hnf_columns(W * Mat.p_power_diagonal(alg.ctx, (0, 1, 0)))
    phi_raw = W * Mat.p_power_diagonal(alg.ctx, (0, 0, 1))
    # rewrite phi on the Hermite domain basis: columns of domain expressed
    # in the prepared basis, mapped through the prepared phi
    prepared_domain = W * Mat.p_power_diagonal(alg.ctx, (0, 1, 0))
    transfer = prepared_domain.inverse_times(domain)
    phi = phi_raw * transfer
    return VirtualEndomorphism(alg, domain, phi)


def non_self_similarity_certificate(alg):
    """Negative certificate: NSS holds and the key identity pins every M.

    Returns a dict with the NSS flag and the per-symbol key identity
    results; meaningful on a diagonal sorted basis of a decide-no form.
    """
    ok, witness = nss_condition(alg.matrix)
    if not ok:
        raise PreconditionViolated(f"basis fails NSS at {witness}")
    results = {}
    for xi in all_symbols(alg.ctx.p):
        U = xi.u_matrix(alg.ctx)
        if change_of_basis(alg, U).is_integral():
            results[xi.entries] = key_identity_check(alg, xi)
    return {"nss": True, "key_identity": results}


# ---------------------------------------------------------------------------
# sigma bounds (the nine-row table for eta = 0)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SelfSimReport:
    """sigma(L) bounds as p-power exponents, with the certifying data."""

    canonical: CanonicalForm
    eta: int
    index_p_self_similar: bool
    sigma_lower: int
    sigma_upper: object  # int exponent, or CONJECTURED_INFINITE
    table_row: int
    witness_exponents: tuple
    note: str


def _table_row(cf, eta_value):
    """Row number, upper-bound exponent, witness scaling exponents."""
    s0, s1, s2 = cf.s
    if cf.family == 4:
        return 1, 1, None
    if cf.family == 3:
        if cf.eps[1] == 0:
            return 2, 1, None
        l = (s1 - s0) // 2
        return 3, s1 - s0 + 1, (0, l, l)
    if cf.family == 2:
        if cf.eps[0] == 0:
            return 4, 1, None
        l = (s2 - s0) // 2
        return 5, (s2 - s0) // 2 + 1, (0, 0, l)
    # family 1: split by the parity pattern, all distinct valuations
    par = [t % 2 for t in cf.s]
    if par[0] == par[1] == par[2]:
        l1, l2 = (s1 - s0) // 2, (s2 - s0) // 2
        return 6, l1 + l2 + 1, (0, l1, l2)
    if par[0] == par[1]:
        l = (s1 - s0) // 2
        return 7, l + 1, (0, l, 0)
    if par[1] == par[2]:
        l = (s2 - s1) // 2
        return 8, l + 1, (0, 0, l)
    l = (s2 - s0) // 2
    return 9, l + 1, (0, 0, l)


def sigma_bounds(cf):
    """Bounds on sigma(L) for the canonical form, per the nine-row table.

    eta = 0: the form matches exactly one row; rows 1, 2, 4 have sigma = p
    certified by the explicit construction; the other rows carry a witness
    subalgebra M of the listed index with sigma(M) = p, giving
    sigma(L) <= p * [L : M].  eta = 1: sigma >= p^2 and the upper bound is
    conjecturally infinite (reported as a sentinel, never a number).
    """
    alg = cf.algebra()
    eta_value = eta(alg.matrix).eta
    yes = decide_index_p(cf)
    if eta_value == 1:
        return SelfSimReport(
            canonical=cf,
            eta=1,
            index_p_self_similar=yes,
            sigma_lower=2,
            sigma_upper=CONJECTURED_INFINITE,
            table_row=0,
            witness_exponents=None,
            note=(
                "eta = 1: not self-similar of index p; conjecturally not "
                "self-similar of any index"
            ),
        )
    row, upper, witness = _table_row(cf, eta_value)
    if row in (1, 2, 4):
        return SelfSimReport(
            canonical=cf,
            eta=0,
            index_p_self_similar=True,
            sigma_lower=1,
            sigma_upper=1,
            table_row=row,
            witness_exponents=None,
            note="sigma = p, certified by an explicit simple endomorphism",
        )
    return SelfSimReport(
        canonical=cf,
        eta=0,
        index_p_self_similar=yes,
        sigma_lower=2,
        sigma_upper=upper,
        table_row=row,
        witness_exponents=witness,
        note=(
            "not self-similar of index p; the witness subalgebra has sigma = p "
            "and index p^(upper-1), so sigma(L) <= p * index"
        ),
    )


def witness_subalgebra(cf):
    """The scaled-basis subalgebra certifying the table upper bound.

    Returns (U, induced_algebra) for rows with a witness; None for rows
    whose sigma is exactly p.
    """
    report = sigma_bounds(cf)
    if report.witness_exponents is None:
        return None
    alg = cf.algebra()
    U = Mat.p_power_diagonal(alg.ctx, report.witness_exponents)
    B = change_of_basis(alg, U)
    if not B.is_integral():
        raise NotSubalgebra("table witness is not a subalgebra; table misread")
    return U, Algebra(B)


# ---------------------------------------------------------------------------
# Dimensions 1 and 2
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LowDimReport:
    """Simple virtual endomorphism data in dimension 1 or 2."""

    dim: int
    s: object  # dim 2 only: bracket exponent, int or INF
    k: int
    domain: Mat
    phi: Mat
    is_morphism: bool
    d_infinity: Mat
    invariant_found: bool


def _dim2_bracket(ctx, s, x, y):
    """[x, y] = det(x|y) p^s e0 on Z_p^2; s = INF means abelian."""
    d = x[0] * y[1] - x[1] * y[0]
    if s == INF:
        return (ctx.zero(), ctx.zero())
    return (d.shift(s), ctx.zero())


def lowdim_report(ctx, dim, k, s=None, bound=4):
    """The standard simple virtual endomorphism in dimension 1 or 2.

    dim 1: domain p^k Z_p, phi(a) = p^{-k} a.
    dim 2: L(s) = <x, y | [x, y] = p^s x>, domain <p^k x, y>;
           s = INF: phi swaps p^k x -> y, y -> x (then D_infinity = 0);
           s finite: phi(p^k x) = x, phi(y) = y (then D_infinity = <y>).

    The morphism law and a bounded invariant-ideal search (index up to
    p^bound) are both verified and reported.
    """
    p = ctx.p
    if dim == 1:
        if k < 1:
            raise InvalidParameters("dimension 1 needs k >= 1")
        domain = Mat.p_power_diagonal(ctx, (k,))
        phi = Mat.identity(ctx, 1)
        # ideals are p^m Z_p; invariant needs phi(p^m) in p^m, i.e. m-k >= m
        invariant = False
        d_inf = Mat(ctx, [[ctx.zero()]])
        return LowDimReport(1, None, k, domain, phi, True, d_inf, invariant)
    if dim != 2:
        raise InvalidParameters("only dimensions 1 and 2 here")
    if k < 1:
        raise InvalidParameters("dimension 2 needs k >= 1")
    if s is not None and s != INF and s < 0:
        raise InvalidParameters("bracket exponent must be >= 0 or INF")
    s = INF if s is None else s
    domain = Mat.from_ints(ctx, [[p**k, 0], [0, 1]])
    if s == INF:
        phi = Mat.from_ints(ctx, [[0, 1], [1, 0]])
    else:
        phi = Mat.from_ints(ctx, [[1, 0], [0, 1]])
    # morphism check on the only basis pair
    d0, d1 = domain.col(0), domain.col(1)
    lhs_vec = _dim2_bracket(ctx, s, d0, d1)
    c = domain.inverse_times(Mat(ctx, [[t] for t in lhs_vec]))
    ok = c.is_integral()
    if ok:
        lhs = (phi * c).col(0)
        rhs = _dim2_bracket(ctx, s, phi.col(0), phi.col(1))
        ok = all(a == b for a, b in zip(lhs, rhs))
    # bounded invariant-ideal search over 2x2 Hermite forms
    invariant = False
    witness = None
    for expo in range(1, bound + 1):
        for a in range(expo + 1):
            b = expo - a
            for h in range(p**a):
                J = Mat.from_ints(ctx, [[p**a, h], [0, p**b]])
                cols = [J.col(0), J.col(1)]
                basis = [Mat.identity(ctx, 2).col(t) for t in range(2)]
                ideal = all(
                    J.inverse_times(
                        Mat(ctx, [[t] for t in _dim2_bracket(ctx, s, x, jv)])
                    ).is_integral()
                    for x in basis
                    for jv in cols
                )
                if not ideal:
                    continue
                if not domain.inverse_times(J).is_integral():
                    continue
                imgs = phi * domain.inverse_times(J)
                if J.inverse_times(imgs).is_integral():
                    invariant = True
                    witness = J
                    break
            if invariant:
                break
        if invariant:
            break
    # D_infinity from the chain, stabilized or vanished within 2*bound steps
    chain = [Mat.identity(ctx, 2)]
    for _ in range(2 * bound):
        pre = _preimage_lattice(phi, chain[-1])
        nxt, _ = hnf_columns(domain * pre)
        chain.append(nxt)
    d_inf = chain[-1]
    return LowDimReport(2, s, k, domain, phi, ok, d_inf, invariant)
