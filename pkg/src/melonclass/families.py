"""The four recursive polynomial families and the necklace closed forms.

All four families live in the S basis and are generated exactly:

    f_0 = 0,  f_{m+1} = (s+1) f_m + (-1)^m
    g_{m,n} = n (s+1)^{m-1} - f_m,   g_m = g_{m,m},  g_0 = 0
    h_0 = 1,  h_m = (s+1) f_{m-1}
    b_{m,n} = n (s+1)^{m-1} + (s+1) f_m,   b_m = b_{m,m},  b_0 = 0

b_m is the class of the m-banana graph (two vertices joined by m parallel
edges).  The closed forms for the low-degree coefficients and for the
necklace / clasped-necklace classes are exposed alongside so that every
identity can be cross-checked by independent routes.
"""

from __future__ import annotations

import threading
from enum import Enum
from math import comb

from .poly import Basis, ClassPoly, IntPoly, ONE, ZERO, mul

S_PLUS_1 = IntPoly((1, 1))
S_PLUS_2 = IntPoly((2, 1))


class FamilyTag(Enum):
    F = "f"
    G = "g"
    H = "h"
    B = "b"


_lock = threading.Lock()
_f_cache: list[IntPoly] = [ZERO]
_s1_pow_cache: list[IntPoly] = [ONE]
_s2_pow_cache: list[IntPoly] = [ONE]
_banana_pow_cache: dict[tuple[int, int], IntPoly] = {}


def _f(m: int) -> IntPoly:
    """f_m as a bare IntPoly, grown iteratively and cached."""
    with _lock:
        while len(_f_cache) <= m:
            k = len(_f_cache) - 1
            sign = 1 if k % 2 == 0 else -1
            _f_cache.append(mul(_f_cache[k], S_PLUS_1) + IntPoly((sign,)))
        return _f_cache[m]


def _s1_pow(k: int) -> IntPoly:
    """(s+1)^k, cached."""
    with _lock:
        while len(_s1_pow_cache) <= k:
            _s1_pow_cache.append(mul(_s1_pow_cache[-1], S_PLUS_1))
        return _s1_pow_cache[k]


def _s2_pow(k: int) -> IntPoly:
    """(s+2)^k, cached."""
    with _lock:
        while len(_s2_pow_cache) <= k:
            _s2_pow_cache.append(mul(_s2_pow_cache[-1], S_PLUS_2))
        return _s2_pow_cache[k]


def _b(m: int) -> IntPoly:
    if m == 0:
        return ZERO
    return m * _s1_pow(m - 1) + mul(S_PLUS_1, _f(m))


def _banana_pow(m: int, k: int) -> IntPoly:
    """b_m^k, cached per (m, k) so sweeps over k reuse earlier powers."""
    if k == 0:
        return ONE
    with _lock:
        have = _banana_pow_cache.get((m, k))
    if have is not None:
        return have
    prev = _banana_pow(m, k - 1)
    result = mul(prev, _b(m))
    with _lock:
        _banana_pow_cache[(m, k)] = result
    return result


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


def f_poly(m: int) -> ClassPoly:
    """f_m in the S basis; f_0 = 0, degree m-1 for m >= 2."""
    _require(m >= 0, "f_poly requires m >= 0")
    return ClassPoly(_f(m), Basis.S)


def f_closed_form(m: int) -> ClassPoly:
    """f_m from the explicit binomial-sum formula.

    f_m(s) = sum_{j>=1} sum_{k=1}^{floor(m/2)} C(m-2k, j-1) s^j, plus a
    constant term of 1 exactly when m is odd.
    """
    _require(m >= 1, "f_closed_form requires m >= 1")
    coeffs = [1 if m % 2 == 1 else 0] + [0] * max(m - 1, 1)
    for k in range(1, m // 2 + 1):
        top = m - 2 * k
        # row C(top, 0..top) added at degrees 1..top+1
        c = 1
        for j in range(top + 1):
            coeffs[j + 1] += c
            c = c * (top - j) // (j + 1)
    return ClassPoly(IntPoly(coeffs), Basis.S)


def g_mn_poly(m: int, n: int) -> ClassPoly:
    """g_{m,n} = n (s+1)^{m-1} - f_m."""
    _require(m >= 1 and n >= 1, "g_mn_poly requires m, n >= 1")
    return ClassPoly(n * _s1_pow(m - 1) - _f(m), Basis.S)


def g_poly(m: int) -> ClassPoly:
    """g_m = g_{m,m}; g_0 = 0."""
    _require(m >= 0, "g_poly requires m >= 0")
    if m == 0:
        return ClassPoly(ZERO, Basis.S)
    return g_mn_poly(m, m)


def h_poly(m: int) -> ClassPoly:
    """h_m = (s+1) f_{m-1}; h_0 = 1."""
    _require(m >= 0, "h_poly requires m >= 0")
    if m == 0:
        return ClassPoly(ONE, Basis.S)
    return ClassPoly(mul(S_PLUS_1, _f(m - 1)), Basis.S)


def b_mn_poly(m: int, n: int) -> ClassPoly:
    """b_{m,n} = n (s+1)^{m-1} + (s+1) f_m."""
    _require(m >= 1 and n >= 1, "b_mn_poly requires m, n >= 1")
    return ClassPoly(n * _s1_pow(m - 1) + mul(S_PLUS_1, _f(m)), Basis.S)


def b_poly(m: int) -> ClassPoly:
    """The m-banana class b_m = b_{m,m}; b_0 = 0."""
    _require(m >= 0, "b_poly requires m >= 0")
    if m == 0:
        return ClassPoly(ZERO, Basis.S)
    return ClassPoly(_b(m), Basis.S)


def family_poly(family: FamilyTag, m: int, n: int | None = None) -> ClassPoly:
    """Dispatch to the family generator; n selects the two-parameter form."""
    if family is FamilyTag.F:
        return f_poly(m)
    if family is FamilyTag.G:
        return g_poly(m) if n is None else g_mn_poly(m, n)
    if family is FamilyTag.H:
        return h_poly(m)
    if family is FamilyTag.B:
        return b_poly(m) if n is None else b_mn_poly(m, n)
    raise ValueError(f"unknown family {family!r}")


def _exact_div(num: int, den: int) -> int:
    q, r = divmod(num, den)
    if r:
        raise AssertionError(f"non-exact division {num}/{den} in closed form")
    return q


def coeff_closed_form(family: FamilyTag, m: int, n: int | None, k: int) -> int:
    """Closed form for the degree-k coefficient, 0 <= k <= 4.

    Covers f_m (n ignored), g_{m,n}, and b_{m,n}, with separate formulas
    for odd and even m.  Returns 0 where k exceeds the degree.
    """
    _require(family in (FamilyTag.F, FamilyTag.G, FamilyTag.B),
             "closed-form coefficients exist only for families f, g, b")
    _require(m >= 1, "coeff_closed_form requires m >= 1")
    _require(0 <= k <= 4, "closed-form coefficients cover only degrees 0..4")
    odd = m % 2 == 1

    if family is FamilyTag.F:
        if odd:
            table = (
                1,
                (m - 1, 2),
                ((m - 1) ** 2, 4),
                ((m - 1) * (m - 3) * (2 * m - 1), 24),
                ((m - 1) * (m - 3) * (m * m - 4 * m + 1), 48),
            )
        else:
            table = (
                0,
                (m, 2),
                (m * (m - 2), 4),
                (m * (m - 2) * (2 * m - 5), 24),
                (m * (m - 2) ** 2 * (m - 4), 48),
            )
    else:
        _require(n is not None and n >= 1,
                 "families g and b need the second parameter n >= 1")
        assert n is not None
        if family is FamilyTag.G:
            if odd:
                table = (
                    n - 1,
                    ((m - 1) * (2 * n - 1), 2),
                    ((m - 1) * ((m - 1) * (2 * n - 1) - 2 * n), 4),
                    ((m - 1) * (m - 3) * (4 * n * (m - 2) - (2 * m - 1)), 24),
                    ((m - 1) * (m - 3)
                     * (2 * n * (m - 2) * (m - 4) - (m * m - 4 * m + 1)), 48),
                )
            else:
                table = (
                    n,
                    (2 * n * (m - 1) - m, 2),
                    ((m - 2) * (2 * n * (m - 1) - m), 4),
                    ((m - 2) * (4 * n * (m - 1) * (m - 3) - m * (2 * m - 5)), 24),
                    ((m - 2) * (m - 4)
                     * (2 * n * (m - 1) * (m - 3) - m * (m - 2)), 48),
                )
        else:
            if odd:
                table = (
                    n + 1,
                    ((m - 1) * (2 * n + 1) + 2, 2),
                    ((m - 1) * (2 * n * (m - 2) + m + 1), 4),
                    ((m - 1) * (4 * n * (m - 2) * (m - 3) + 2 * m * m - m - 3), 24),
                    ((m - 1) * (m - 3)
                     * (2 * n * (m - 2) * (m - 4) + m * m - 1), 48),
                )
            else:
                table = (
                    n,
                    (2 * n * (m - 1) + m, 2),
                    (2 * n * (m - 1) * (m - 2) + m * m, 4),
                    ((m - 2) * (4 * n * (m - 1) * (m - 3) + m * (2 * m + 1)), 24),
                    ((m - 2)
                     * (2 * n * (m - 1) * (m - 3) * (m - 4)
                        + m * (m * m - 2 * m - 2)), 48),
                )

    entry = table[k]
    if isinstance(entry, int):
        return entry
    return _exact_div(entry[0], entry[1])


def p_mn_poly(m: int, n: int) -> ClassPoly:
    """Cofactor polynomial of the clasped-necklace class.

    p_{m,n}(s) = (s+1)^{m-1} + sum_{k=0}^{m-2} (-1)^{m-2-k} (n+k-1) (s+1)^k.
    Satisfies p_{m,n} = (s+1) p_{m-1,n+1} + (n-1)(-1)^{m-2} and
    p_{2,n} = s + n.  m = 1 gives the empty sum, p_{1,n} = 1.
    """
    _require(m >= 1 and n >= 2, "p_mn_poly requires m >= 1, n >= 2")
    acc = _s1_pow(m - 1)
    for k in range(m - 1):
        sign = 1 if (m - 2 - k) % 2 == 0 else -1
        acc = acc + sign * (n + k - 1) * _s1_pow(k)
    return ClassPoly(acc, Basis.S)


def clasped_necklace_class(m: int, n: int) -> ClassPoly:
    """Class of the necklace of n-1 m-bananas closed by a single edge.

    In the T basis this is T(T+1) b_m^{n-2} (T^{m-1} +
    sum_{k=0}^{m-2} (-1)^{m-2-k} (n+k-1) T^k); here assembled in S as
    (s+1)(s+2) b_m^{n-2} p_{m,n}.  At n = 2 it collapses to b_{m+1}.
    """
    _require(m >= 1 and n >= 2, "clasped_necklace_class requires m >= 1, n >= 2")
    acc = mul(mul(S_PLUS_1, S_PLUS_2), _banana_pow(m, n - 2))
    return ClassPoly(mul(acc, p_mn_poly(m, n).poly), Basis.S)


_necklace_memo: dict[tuple[int, int], IntPoly] = {}


def _necklace_by_recursion(m: int, n: int) -> IntPoly:
    """Necklace class via contraction-deletion on the closing banana.

    U(G_{m,n}) = f_m U(G'_{m,n}) + g_m U(G_{m,n-1}) + h_m b_m^{n-1},
    grounded at U(G_{m,2}) = b_{2m} (a 2m-banana).
    """
    f_m = _f(m)
    g_m = g_poly(m).poly
    h_m = h_poly(m).poly
    with _lock:
        known = dict(_necklace_memo)
    for j in range(2, n + 1):
        if (m, j) in known:
            continue
        if j == 2:
            val = _b(2 * m)
        else:
            val = (mul(f_m, clasped_necklace_class(m, j).poly)
                   + mul(g_m, known[(m, j - 1)])
                   + mul(h_m, _banana_pow(m, j - 1)))
        known[(m, j)] = val
        with _lock:
            _necklace_memo[(m, j)] = val
    return known[(m, n)]


def necklace_class(m: int, n: int) -> ClassPoly:
    """Class of the necklace of n m-bananas arranged in a cycle.

    m = 1 is the n-gon, b_2 (s+2)^{n-2}.  m = 2 has the closed form
    ((s+1)^n + n(s+1)^{n-1} - 1)(s+2)^{n-1}(s+1).  Larger m runs the
    contraction-deletion recursion in n.
    """
    _require(m >= 1 and n >= 2, "necklace_class requires m >= 1, n >= 2")
    if m == 1:
        return ClassPoly(mul(_b(2), _s2_pow(n - 2)), Basis.S)
    if m == 2:
        head = _s1_pow(n) + n * _s1_pow(n - 1) - ONE
        return ClassPoly(mul(mul(head, _s2_pow(n - 1)), S_PLUS_1), Basis.S)
    return ClassPoly(_necklace_by_recursion(m, n), Basis.S)
