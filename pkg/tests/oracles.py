"""Independent reference computations used to pin expected values.

Everything here recomputes quantities by a different route than the
package: plain integer arithmetic mod p^K, exhaustive enumeration, or
textbook algorithms with no reliance on the scalar class.
"""

from fractions import Fraction


def egcd(a, b):
    """Extended Euclid: returns (g, x, y) with a*x + b*y = g."""
    if b == 0:
        return a, 1, 0
    g, x, y = egcd(b, a % b)
    return g, y, x - (a // b) * y


def inverse_mod(a, m):
    g, x, _ = egcd(a % m, m)
    assert g == 1
    return x % m


def legendre_symbol(a, p):
    """Euler criterion; returns +1, -1 or 0."""
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def least_nonresidue(p):
    n = 2
    while legendre_symbol(n, p) != -1:
        n += 1
    return n


def membership_mod(vec, cols, p, K):
    """Is vec in the span of cols over Z/p^K, by meet-in-the-middle?

    cols is a list of three integer 3-vectors.  Solvability mod p^K
    equals Z_p-span membership whenever K >= v_p(det cols).
    """
    m = p**K
    left = {}
    for a in range(m):
        for b in range(m):
            key = tuple((a * cols[0][i] + b * cols[1][i]) % m for i in range(3))
            left[key] = (a, b)
    for c in range(m):
        key = tuple((vec[i] - c * cols[2][i]) % m for i in range(3))
        if key in left:
            return True
    return False


def bracket_direct(A, x, y):
    """[x, y] with structure matrix A over Fractions: A times (x cross y)."""
    cx = (
        x[1] * y[2] - x[2] * y[1],
        x[2] * y[0] - x[0] * y[2],
        x[0] * y[1] - x[1] * y[0],
    )
    return tuple(sum(A[i][j] * cx[j] for j in range(3)) for i in range(3))


def jacobiator_direct(A):
    """J(e0, e1, e2) by literally expanding the three nested brackets."""
    e = [(Fraction(1), Fraction(0), Fraction(0)),
         (Fraction(0), Fraction(1), Fraction(0)),
         (Fraction(0), Fraction(0), Fraction(1))]
    A = [[Fraction(a) for a in row] for row in A]
    total = (Fraction(0), Fraction(0), Fraction(0))
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        inner = bracket_direct(A, e[i], e[j])
        term = bracket_direct(A, inner, e[k])
        total = tuple(total[t] + term[t] for t in range(3))
    return total


def count_sublattices_exponent(p, k):
    """Number of sublattices of Z_p^3 of index p^k, by enumerating HNFs.

    Column-style HNF: upper triangular, diagonal (p^a, p^b, p^c) with
    a+b+c = k, entry (0,1) and (0,2) free mod p^a, entry (1,2) free mod p^b.
    """
    total = 0
    for a in range(k + 1):
        for b in range(k - a + 1):
            total += p**a * p**a * p**b
    return total


def solve_two_square_classes(c, d, t, p):
    """Some (x, y) mod p with c x^2 + d y^2 = t (mod p), x or y nonzero."""
    for x in range(p):
        for y in range(p):
            if (x or y) and (c * x * x + d * y * y - t) % p == 0:
                return x, y
    return None
