"""Named lattices, their canonical data, and group-level reporting.

The catalog holds the standard unsolvable lattices and their congruence
and lower-central relatives, each returned in its traditional basis so
that classification of the catalog exercises the full pipeline:

    sl2                 [[1,0,0],[0,0,2],[0,2,0]]
    sl2_congruence(k)   p^k * sl2
    sl2_sylow           [[1,0,0],[0,0,2p],[0,2p,0]]   basis (p x0, x1, p x2)
    gamma_sl2_sylow(n)  gamma_n of the Sylow lattice, diagonal basis
    sl1_delta           diag(-1, rho, p)
    sl1_congruence(k)   the index-p^k congruence chain inside sl1_delta
    L1/L2/L3/L4         literal canonical representatives

Group-level facts transfer through the exponential correspondence for
saturable lattices: indices of open subgroups match indices of
subalgebras, morphisms match morphisms, and simplicity matches
simplicity.  The correspondence needs p >= 5 in general (dimension 3);
statements about congruence subgroups of depth >= 1 already hold for
p >= 3.  A torsion-free group only exists over the lattice when the
lower central series shrinks, i.e. when the middle s-invariant is >= 1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .classify import canonical_form, eta, qp_type, QpType
from .errors import InvalidParameters, NotAnIdeal
from .lattice import (
    Algebra,
    change_of_basis,
    lcs_exponents,
    residually_nilpotent,
)
from .normal_forms import Mat, hnf_columns, lattice_contains
from .padic_core import INF
from .selfsim import decide_index_p, sigma_bounds


NAMED = (
    "sl2",
    "sl2_congruence",
    "sl2_sylow",
    "gamma_sl2_sylow",
    "sl1_delta",
    "sl1_congruence",
    "L1",
    "L2",
    "L3",
    "L4",
)


def named_algebra(ctx, name, k=None, s=None, eps=None, n=None):
    """Construct a catalog lattice in its traditional basis."""
    p = ctx.p
    if name == "sl2":
        return Algebra(Mat.from_ints(ctx, [[1, 0, 0], [0, 0, 2], [0, 2, 0]]))
    if name == "sl2_congruence":
        _need(k is not None and k >= 0, "sl2_congruence needs k >= 0")
        base = named_algebra(ctx, "sl2")
        return Algebra(base.matrix.shift(k))
    if name == "sl2_sylow":
        return Algebra(
            Mat.from_ints(ctx, [[1, 0, 0], [0, 0, 2 * p], [0, 2 * p, 0]])
        )
    if name == "gamma_sl2_sylow":
        _need(n is not None and n >= 1, "gamma_sl2_sylow needs n >= 1")
        base = Algebra(Mat.diagonal(ctx, [ctx.from_int(t) for t in (1, p, -p)]))
        exps = lcs_exponents((0, 1, 1), n)
        U = Mat.p_power_diagonal(ctx, exps)
        return Algebra(change_of_basis(base, U))
    if name == "sl1_delta":
        return Algebra(Mat.diagonal(ctx, [ctx.from_int(t) for t in (-1, ctx.rho, p)]))
    if name == "sl1_congruence":
        _need(k is not None and k >= 0, "sl1_congruence needs k >= 0")
        base = named_algebra(ctx, "sl1_delta")
        m, odd = divmod(k, 2)
        U = Mat.p_power_diagonal(ctx, (m, m, m + 1) if odd else (m, m, m))
        return Algebra(change_of_basis(base, U))
    if name in ("L1", "L2", "L3", "L4"):
        return Algebra(_canonical_named(ctx, name, s, eps))
    raise InvalidParameters(f"unknown catalog name {name!r}")


def _need(cond, msg):
    if not cond:
        raise InvalidParameters(msg)


def _canonical_named(ctx, name, s, eps):
    p, rho = ctx.p, ctx.rho
    eps = eps or (0, 0)
    if name == "L1":
        _need(s is not None and len(s) == 3 and 0 <= s[0] < s[1] < s[2], "L1 needs 0 <= s0 < s1 < s2")
        d = [p ** s[0], rho ** eps[0] * p ** s[1], rho ** eps[1] * p ** s[2]]
    elif name == "L2":
        _need(s is not None and len(s) == 2 and 0 <= s[0] < s[1], "L2 needs 0 <= s0 < s2")
        d = [p ** s[0], -(rho ** eps[0]) * p ** s[0], p ** s[1]]
    elif name == "L3":
        _need(s is not None and len(s) == 2 and 0 <= s[0] < s[1], "L3 needs 0 <= s0 < s1")
        d = [p ** s[0], p ** s[1], -(rho ** eps[1]) * p ** s[1]]
    else:
        _need(s is not None and len(s) >= 1 and s[0] >= 0, "L4 needs s0 >= 0")
        d = [p ** s[0]] * 3
    return Mat.diagonal(ctx, [ctx.from_int(t) for t in d])


# ---------------------------------------------------------------------------
# Group-level reporting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupReport:
    """What the lattice classification says about the associated group."""

    group_name: str
    family: int
    parameters: tuple
    residually_nilpotent: bool
    failing_s: object
    prime_threshold: int
    threshold_met: bool
    qp_type: str
    index_p_self_similar: bool
    sigma_lower: int
    sigma_upper: object
    index_transfer: str
    notes: tuple


def group_report(alg):
    """Classification and self-similarity transferred to the group side.

    When the middle s-invariant is 0 the lower central series stalls and
    no torsion-free group sits over the lattice; the failure is reported,
    not raised.
    """
    cf = canonical_form(alg)
    ctx = alg.ctx
    report = sigma_bounds(cf)
    resnil = residually_nilpotent(cf.s)
    failing = None if resnil else sorted(cf.s)[1]
    s0, s1, s2 = cf.s
    if cf.family == 1:
        params = (s0, s1, s2, cf.eps[0], cf.eps[1])
    elif cf.family == 2:
        params = (s0, s2, cf.eps[0])
    elif cf.family == 3:
        params = (s0, s1, cf.eps[1])
    else:
        params = (s0,)
    name = None
    if resnil:
        name = f"G{cf.family}({', '.join(str(t) for t in params)})"
    threshold = 5
    notes = []
    ty = qp_type(alg.matrix)
    if ty is QpType.SL2:
        notes.append(
            "eta = 0: the group embeds as an open subgroup of the Sylow "
            "pro-p subgroup of SL2(Z_p) (p >= 5)"
        )
        if cf.family == 4 and s0 >= 1:
            threshold = 3
            notes.append(
                "congruence level: the k-th congruence subgroup of SL2(Z_p) "
                "is self-similar of index p for every k >= 1 (p >= 3)"
            )
    else:
        notes.append(
            "eta = 1: no open subgroup acts faithfully self-similarly on a "
            "p-ary tree of degree p; conjecturally of any degree"
        )
        is_sl1_congruence = (
            cf.family == 2 and cf.eps[0] == 1 and s2 == s0 + 1 and s0 >= 1
        ) or (cf.family == 3 and cf.eps[1] == 1 and s1 == s0 + 1 and s0 >= 1)
        if is_sl1_congruence:
            threshold = 3
            notes.append(
                "congruence level inside the division-algebra group: the "
                "index-p statement holds for p >= 3 at depth >= 2"
            )
    if not resnil:
        notes.append(
            "middle s-invariant is 0: the lower central series stalls, no "
            "torsion-free p-adic analytic group lies over this lattice"
        )
        name = None
    return GroupReport(
        group_name=name,
        family=cf.family,
        parameters=params,
        residually_nilpotent=resnil,
        failing_s=failing,
        prime_threshold=threshold,
        threshold_met=ctx.p >= threshold,
        qp_type=ty.value,
        index_p_self_similar=report.index_p_self_similar,
        sigma_lower=report.sigma_lower,
        sigma_upper=report.sigma_upper,
        index_transfer=(
            "for saturable lattices, [G : H] = [L_G : L_H] for open subgroups "
            "and their subalgebras; simple maps correspond to simple maps"
        ),
        notes=tuple(notes),
    )


# ---------------------------------------------------------------------------
# Nonzero ideals of the Sylow lattice
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IdealSigmaReport:
    level: int
    equals_gamma_term: bool
    index_over_gamma: int
    verdict: str
    decided_exponent: int


def normal_subgroup_sigma(alg, ideal):
    """sigma verdict for a nonzero ideal of the Sylow-type lattice.

    alg must carry the diagonal Sylow matrix diag(1, p, -p).  Locates the
    least level with gamma_level inside the ideal; the theorem gives
    sigma = p when the ideal is a gamma term and p or p^2 otherwise, and
    the exact value is also decided through the canonical form.
    """
    ctx = alg.ctx
    expect = Mat.diagonal(ctx, [ctx.from_int(t) for t in (1, ctx.p, -ctx.p)])
    if alg.matrix != expect:
        raise InvalidParameters("expects the Sylow lattice in its diagonal basis")
    I, rank = hnf_columns(ideal)
    if rank < 3:
        raise InvalidParameters("ideal must be full rank (nonzero closed ideals are)")
    basis = [tuple(Mat.identity(ctx, 3).col(j)) for j in range(3)]
    for x in basis:
        for j in range(3):
            w = alg.bracket(x, I.col(j))
            if not I.inverse_times(Mat(ctx, [[t] for t in w])).is_integral():
                raise NotAnIdeal("submodule is not an ideal of the Sylow lattice")
    s = (0, 1, 1)
    level = 0
    while True:
        G = Mat.p_power_diagonal(ctx, lcs_exponents(s, level))
        if lattice_contains(I, G):
            break
        level += 1
        if level > 4 * ctx.precision:
            raise InvalidParameters("gamma terms never entered the ideal")
    gamma = Mat.p_power_diagonal(ctx, lcs_exponents(s, level))
    gh, _ = hnf_columns(gamma)
    equals = gh == I
    idx = sum(x.valuation() for x in gh.diagonal_entries()) - sum(
        x.valuation() for x in I.diagonal_entries()
    )
    sub = Algebra(change_of_basis(alg, I))
    decided = 1 if decide_index_p(canonical_form(sub)) else 2
    verdict = "p" if equals else "p_or_p2"
    return IdealSigmaReport(level, equals, idx, verdict, decided)
