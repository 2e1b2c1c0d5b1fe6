"""Exact joint spectral radius over the rationals with a p-adic absolute value.

Everything here is a decision procedure: eigenvalue magnitudes come from
Newton polygons of exact characteristic polynomials, the joint spectral
radius equals the peak of Lambda(S^k)^(1/k) over k up to an explicit
length bound ell(d), and all arithmetic is arbitrary-precision rational
(stdlib Fraction).  No floating point, no tolerances.

Magnitudes are carried in exponent form: PAdicMagnitude(e) denotes the
value p^(-e) with e rational (roots in the algebraic closure can have
fractional valuation), and BOTTOM denotes the magnitude of zero, below
every finite magnitude.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .core import WORD_CAP, BudgetExceededError, Word, count_words

__all__ = [
    "BOTTOM",
    "NewtonPolygon",
    "PAdicJsrResult",
    "PAdicMagnitude",
    "PAdicMatrixSet",
    "UltraBocaReport",
    "as_rational",
    "char_poly_exact",
    "check_ultra_boca",
    "ell_bound",
    "is_prime",
    "max_root_magnitude",
    "padic_jsr_exact",
    "padic_nilpotency_exact",
    "padic_product_set",
    "padic_valuation",
    "ultrametric_set_norm",
]


# --- rational plumbing --------------------------------------------------------


def as_rational(x) -> Fraction:
    """Parse an exact rational: int, Fraction, or a string like "-3" or "9/2".

    Floats are refused on purpose; a binary float is almost never the
    rational the caller meant.
    """
    if isinstance(x, float):
        raise TypeError("refusing a float; pass an int, Fraction, or 'a/b' string")
    return Fraction(x)


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Miller-Rabin with the first twelve prime bases.

    Deterministic for n < 3.3e24, which covers any prime a word sweep could
    plausibly use; beyond that it is a strong probable-prime test.
    """
    n = int(n)
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _int_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def padic_valuation(q, p: int):
    """v_p(q): multiplicity of p in the numerator minus the denominator.

    Returns None (the bottom element) for q = 0.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    q = as_rational(q)
    if q == 0:
        return None
    return _int_valuation(abs(q.numerator), p) - _int_valuation(q.denominator, p)


# --- magnitudes ---------------------------------------------------------------


@functools.total_ordering
@dataclass(frozen=True)
class PAdicMagnitude:
    """The absolute value p^(-exponent), or the bottom element for zero.

    Ordering follows the magnitude, so a *larger* exponent is a *smaller*
    magnitude and BOTTOM is below everything.  Multiplication adds
    exponents; powers and roots scale them.  The exponent is a Fraction
    because root magnitudes of non-split polynomials live in the divisible
    closure of the value group.
    """

    exponent: Fraction | None = None

    def __post_init__(self):
        if self.exponent is not None:
            object.__setattr__(self, "exponent", Fraction(self.exponent))

    @property
    def is_bottom(self) -> bool:
        return self.exponent is None

    def __lt__(self, other: "PAdicMagnitude") -> bool:
        if self.exponent is None:
            return other.exponent is not None
        if other.exponent is None:
            return False
        return self.exponent > other.exponent

    def __mul__(self, other: "PAdicMagnitude") -> "PAdicMagnitude":
        if self.exponent is None or other.exponent is None:
            return BOTTOM
        return PAdicMagnitude(self.exponent + other.exponent)

    def __pow__(self, k: int) -> "PAdicMagnitude":
        if k < 0:
            raise ValueError("negative powers are not defined for magnitudes")
        if k == 0:
            return PAdicMagnitude(Fraction(0))  # empty product, even of zero
        if self.exponent is None:
            return BOTTOM
        return PAdicMagnitude(self.exponent * k)

    def root(self, k: int) -> "PAdicMagnitude":
        if k < 1:
            raise ValueError("root order must be >= 1")
        if self.exponent is None:
            return BOTTOM
        return PAdicMagnitude(self.exponent / k)

    def __repr__(self):
        if self.exponent is None:
            return "PAdicMagnitude(bottom)"
        return f"PAdicMagnitude(p**{-self.exponent})"


BOTTOM = PAdicMagnitude(None)


# --- Newton polygons ----------------------------------------------------------


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of (i, v_p(a_i)) over the nonzero coefficients.

    Slopes use the valuation-drop convention: the segment from (i, v_i) to
    (j, v_j) with i < j has slope (v_i - v_j) / (j - i), so a root of
    valuation m contributes a segment of slope m.  ``min_slope`` is the
    smallest slope (the segment meeting the rightmost vertex), which for a
    monic polynomial is the valuation of its largest-magnitude root; it is
    None when fewer than two points exist.
    """

    points: tuple[tuple[int, int], ...]
    lower_hull: tuple[tuple[int, int], ...]
    min_slope: Fraction | None

    @classmethod
    def from_coeffs(cls, coeffs: Sequence, p: int) -> "NewtonPolygon":
        cs = [as_rational(c) for c in coeffs]
        points = tuple(
            (i, padic_valuation(c, p)) for i, c in enumerate(cs) if c != 0
        )
        hull: list[tuple[int, int]] = []
        for pt in points:  # already sorted by index; Andrew monotone chain
            while len(hull) >= 2:
                (x1, y1), (x2, y2) = hull[-2], hull[-1]
                if (x2 - x1) * (pt[1] - y1) - (y2 - y1) * (pt[0] - x1) <= 0:
                    hull.pop()
                else:
                    break
            hull.append(pt)
        if len(hull) >= 2:
            (xa, ya), (xb, yb) = hull[-2], hull[-1]
            min_slope = Fraction(ya - yb, xb - xa)
        else:
            min_slope = None
        return cls(points, tuple(hull), min_slope)


def max_root_magnitude(coeffs: Sequence, p: int) -> PAdicMagnitude:
    """Largest p-adic magnitude among the roots of a monic polynomial.

    Equals p^(-m) for m the minimal Newton-polygon slope; BOTTOM exactly
    when the polynomial is t^d.  Coefficients are ascending, ``coeffs[i]``
    multiplying t^i.
    """
    cs = [as_rational(c) for c in coeffs]
    if len(cs) < 2:
        raise ValueError("polynomial must have degree >= 1")
    if cs[-1] != 1:
        raise ValueError("polynomial must be monic")
    if all(c == 0 for c in cs[:-1]):
        return BOTTOM
    slope = NewtonPolygon.from_coeffs(cs, p).min_slope
    assert slope is not None
    return PAdicMagnitude(slope)


# --- exact characteristic polynomials ------------------------------------------


def _char_coeffs_flat(flat: Sequence, d: int) -> tuple:
    # ascending coefficients of det(tI - A); entries may be ints or
    # Fractions, and the direct d <= 3 formulas keep ints exact.
    if d == 1:
        return (-flat[0], 1)
    if d == 2:
        a, b, c, e = flat
        return (a * e - b * c, -(a + e), 1)
    if d == 3:
        a, b, c, e, f, g, h, i, j = flat
        det = a * (f * j - g * i) - b * (e * j - g * h) + c * (e * i - f * h)
        e2 = (a * f - b * e) + (a * j - c * h) + (f * j - g * i)
        return (-det, e2, -(a + f + j), 1)
    # Faddeev-LeVerrier; the divisions are exact over the rationals.
    rows = [[Fraction(flat[r * d + c]) for c in range(d)] for r in range(d)]
    m = [[Fraction(0)] * d for _ in range(d)]
    coeffs = [Fraction(0)] * (d + 1)
    coeffs[d] = Fraction(1)
    c_prev = Fraction(1)
    for k in range(1, d + 1):
        for r in range(d):
            m[r][r] += c_prev
        m = [
            [sum(rows[r][t] * m[t][c] for t in range(d)) for c in range(d)]
            for r in range(d)
        ]
        c_prev = -sum(m[r][r] for r in range(d)) / k
        coeffs[d - k] = c_prev
    return tuple(coeffs)


def char_poly_exact(matrix) -> tuple:
    """Ascending monic characteristic polynomial coefficients, exactly.

    ``matrix`` is a square array of rationals (ints, Fractions, or "a/b"
    strings).  coeffs[i] multiplies t^i and coeffs[-1] == 1.
    """
    rows = [[as_rational(x) for x in row] for row in matrix]
    d = len(rows)
    if any(len(r) != d for r in rows) or d == 0:
        raise ValueError("matrix must be square and nonempty")
    flat = tuple(x for row in rows for x in row)
    return _char_coeffs_flat(flat, d)


# --- matrix sets over Q -------------------------------------------------------


@dataclass(frozen=True)
class PAdicMatrixSet:
    """A finite set of d x d rational matrices together with a prime."""

    dim: int
    prime: int
    members: tuple  # tuple of matrices, each a tuple of row tuples of Fraction

    @classmethod
    def from_rows(cls, members: Sequence, prime: int) -> "PAdicMatrixSet":
        if not is_prime(prime):
            raise ValueError(f"{prime} is not prime")
        if len(members) == 0:
            raise ValueError("need at least one member")
        parsed = []
        dim = None
        for m in members:
            rows = tuple(tuple(as_rational(x) for x in row) for row in m)
            d = len(rows)
            if d == 0 or any(len(r) != d for r in rows):
                raise ValueError("members must be square and nonempty")
            if dim is None:
                dim = d
            elif d != dim:
                raise ValueError("members must share a dimension")
            parsed.append(rows)
        return cls(dim, int(prime), tuple(parsed))

    @property
    def size(self) -> int:
        return len(self.members)


def _flat(member) -> tuple:
    return tuple(x for row in member for x in row)


def _matmul_flat(a, b, d):
    if d == 2:
        a0, a1, a2, a3 = a
        b0, b1, b2, b3 = b
        return (
            a0 * b0 + a1 * b2,
            a0 * b1 + a1 * b3,
            a2 * b0 + a3 * b2,
            a2 * b1 + a3 * b3,
        )
    if d == 3:
        a0, a1, a2, a3, a4, a5, a6, a7, a8 = a
        b0, b1, b2, b3, b4, b5, b6, b7, b8 = b
        return (
            a0 * b0 + a1 * b3 + a2 * b6,
            a0 * b1 + a1 * b4 + a2 * b7,
            a0 * b2 + a1 * b5 + a2 * b8,
            a3 * b0 + a4 * b3 + a5 * b6,
            a3 * b1 + a4 * b4 + a5 * b7,
            a3 * b2 + a4 * b5 + a5 * b8,
            a6 * b0 + a7 * b3 + a8 * b6,
            a6 * b1 + a7 * b4 + a8 * b7,
            a6 * b2 + a7 * b5 + a8 * b8,
        )
    return tuple(
        sum(a[r * d + t] * b[t * d + c] for t in range(d))
        for r in range(d)
        for c in range(d)
    )


def _min_valuation_flat(flat, p: int):
    # exponent of the entrywise max magnitude; None when the matrix is zero
    vmin = None
    for x in flat:
        if x == 0:
            continue
        if isinstance(x, int):
            v = _int_valuation(abs(x), p)
        else:
            v = _int_valuation(abs(x.numerator), p) - _int_valuation(
                x.denominator, p
            )
        if vmin is None or v < vmin:
            vmin = v
    return vmin


def _min_valuation_flat_int(flat, p: int):
    # integer entries cannot dip below valuation 0, so bail at the first
    # entry coprime to p
    vmin = None
    for x in flat:
        if x == 0:
            continue
        if x % p:
            return 0
        v = 1
        x //= p
        while x % p == 0:
            x //= p
            v += 1
        if vmin is None or v < vmin:
            vmin = v
    return vmin


def ultrametric_set_norm(s: PAdicMatrixSet) -> PAdicMagnitude:
    """||S||_0 = max entry magnitude over all members (exact operator norm
    for the coordinatewise ultrametric vector norm)."""
    vmin = None
    for m in s.members:
        v = _min_valuation_flat(_flat(m), s.prime)
        if v is not None and (vmin is None or v < vmin):
            vmin = v
    return BOTTOM if vmin is None else PAdicMagnitude(Fraction(vmin))


def ell_bound(d: int) -> int:
    """Word-length bound sufficient for the exact peak to reach the joint
    spectral radius: min(d^2, ceil(2 d log2 d) + 4d - 4), and 1 for d = 1.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    if d == 1:
        return 1
    n = d ** (2 * d)  # exact ceil(2 d log2 d) via bit length
    ceil_log = n.bit_length() - 1 if n & (n - 1) == 0 else n.bit_length()
    return min(d * d, ceil_log + 4 * d - 4)


class PAdicJsrResult(NamedTuple):
    rho: PAdicMagnitude
    witness: Word


class _PeakAtFloor(Exception):
    """Internal: the sweep proved no remaining word can improve the peak."""


def _lambda_exponent(flat, d: int, p: int):
    # exponent of Lambda(matrix) = max root magnitude of its char poly,
    # via the rightmost-hull-segment formula; None means BOTTOM
    coeffs = _char_coeffs_flat(flat, d)
    best = None
    for i in range(d):
        c = coeffs[i]
        if c == 0:
            continue
        if isinstance(c, int):
            v = Fraction(_int_valuation(abs(c), p), d - i)
        else:
            v = Fraction(
                _int_valuation(abs(c.numerator), p)
                - _int_valuation(c.denominator, p),
                d - i,
            )
        if best is None or v < best:
            best = v
    return best


def padic_jsr_exact(
    s: PAdicMatrixSet,
    *,
    ell: int | None = None,
    word_cap: int = WORD_CAP,
) -> PAdicJsrResult:
    """The exact joint spectral radius max_{k <= ell} Lambda(S^k)^(1/k).

    Enumerates every word of length up to ``ell`` (default ``ell_bound(d)``,
    which provably suffices; pass a smaller or larger value to trade
    completeness for time, e.g. in stability experiments).  Each word's
    eigenvalue magnitude comes from the Newton polygon of its exact
    characteristic polynomial; the return value is EXACT, with a witness
    word attaining it.

    Words whose entrywise norm already caps their eigenvalue magnitude
    below the running best are not analyzed further (the norm bound
    Lambda <= ||.||_0 makes this lossless for the value); zero products
    prune their whole subtree.
    """
    d, m, p = s.dim, s.size, s.prime
    if ell is None:
        ell = ell_bound(d)
    if ell < 1:
        raise ValueError("ell must be >= 1")
    needed = count_words(m, ell)
    if needed > word_cap:
        raise BudgetExceededError(needed, word_cap, f"exact sweep to depth {ell}")

    int_path = all(
        x.denominator == 1 for mem in s.members for x in _flat(mem)
    )
    if int_path:
        members = [tuple(int(x) for x in _flat(mem)) for mem in s.members]
        minval = _min_valuation_flat_int
    else:
        members = [_flat(mem) for mem in s.members]
        minval = _min_valuation_flat
    # with p-integral entries every eigenvalue exponent is >= 0, so a peak
    # of exactly 0 can never be beaten and the sweep may stop early
    floor_zero = all(
        (v := _min_valuation_flat(_flat(mem), p)) is None or v >= 0
        for mem in s.members
    )

    best_val: Fraction | None = None  # exponent of the running best rho
    best_wit: Word | None = None

    def visit(prod, word: Word):
        nonlocal best_val, best_wit
        k = len(word)
        vmin = minval(prod, p)
        if vmin is None:
            return  # zero product; every extension is zero too
        # Lambda <= ||.||_0, so vmin/k >= best_val means this word cannot
        # improve the peak; compare cross-multiplied to stay allocation-free
        if best_val is None or vmin * best_val.denominator < best_val.numerator * k:
            lam = _lambda_exponent(prod, d, p)
            if lam is not None:
                val = lam / k
                if best_val is None or val < best_val:
                    best_val, best_wit = val, word
                    if floor_zero and best_val == 0:
                        raise _PeakAtFloor
        if k < ell:
            for letter in range(m):
                visit(_matmul_flat(members[letter], prod, d), word + (letter,))

    try:
        for letter in range(m):
            visit(members[letter], (letter,))
    except _PeakAtFloor:
        pass

    if best_wit is None:
        return PAdicJsrResult(BOTTOM, (0,))
    return PAdicJsrResult(PAdicMagnitude(best_val), best_wit)


def padic_eval_word(s: PAdicMatrixSet, word: Sequence[int]):
    """Exact product for a word (rightmost letter applied first), as row tuples."""
    d = s.dim
    out = tuple(
        Fraction(1) if r == c else Fraction(0) for r in range(d) for c in range(d)
    )
    for i in word:
        if not 0 <= int(i) < s.size:
            raise ValueError(f"word letter {i} out of range")
        out = _matmul_flat(_flat(s.members[int(i)]), out, d)
    return tuple(tuple(out[r * d + c] for c in range(d)) for r in range(d))


def padic_product_set(
    s: PAdicMatrixSet, k: int, *, word_cap: int = WORD_CAP
) -> PAdicMatrixSet:
    """S^k as an exact PAdicMatrixSet (all |S|^k length-k products)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if s.size**k > word_cap:
        raise BudgetExceededError(s.size**k, word_cap, f"product set at power {k}")
    d = s.dim
    mats = []
    for word in itertools.product(range(s.size), repeat=k):
        mats.append(padic_eval_word(s, word))
    return PAdicMatrixSet(d, s.prime, tuple(mats))


class UltraBocaReport(NamedTuple):
    holds: bool
    lhs: PAdicMagnitude
    rhs: PAdicMagnitude
    extremal_word: Word
    rho: PAdicMagnitude
    set_norm: PAdicMagnitude


def check_ultra_boca(
    s: PAdicMatrixSet, *, word_cap: int = WORD_CAP
) -> UltraBocaReport:
    """Exact check of ||S^d||_0 <= rho(S) ||S||_0^(d-1).

    Both sides are computed as exact magnitudes; ``extremal_word`` attains
    the left side.  A violated report would contradict a proven bound, so
    the suite treats it as a failure.
    """
    d, m, p = s.dim, s.size, s.prime
    if m**d > word_cap:
        raise BudgetExceededError(m**d, word_cap, f"power norm at exponent {d}")
    members = [_flat(mem) for mem in s.members]
    vbest = None
    wbest: Word = tuple([0] * d)
    for word in itertools.product(range(m), repeat=d):
        prod = members[word[0]]
        for i in word[1:]:
            prod = _matmul_flat(members[i], prod, d)
        v = _min_valuation_flat(prod, p)
        if v is not None and (vbest is None or v < vbest):
            vbest, wbest = v, word
    lhs = BOTTOM if vbest is None else PAdicMagnitude(Fraction(vbest))
    rho = padic_jsr_exact(s, word_cap=word_cap).rho
    norm = ultrametric_set_norm(s)
    rhs = rho * norm ** (d - 1)
    return UltraBocaReport(not rhs < lhs, lhs, rhs, wbest, rho, norm)


# --- exact nilpotency ----------------------------------------------------------


def _reduce_against(vec: list, basis: list[tuple[int, list]]) -> list:
    # eliminate the pivot coordinates of an exact basis from vec, in place
    for piv, row in basis:
        if vec[piv] != 0:
            f = vec[piv] / row[piv]
            for i in range(piv, len(vec)):
                vec[i] -= f * row[i]
    return vec


def _try_extend(vec: Sequence, basis: list[tuple[int, list]]) -> bool:
    v = _reduce_against([Fraction(x) for x in vec], basis)
    for i, x in enumerate(v):
        if x != 0:
            basis.append((i, v))
            basis.sort(key=lambda t: t[0])
            return True
    return False


def padic_nilpotency_exact(s: PAdicMatrixSet) -> bool:
    """Whether the algebra generated by the members is nilpotent, exactly.

    Saturates the span of the members under left multiplication with exact
    rational elimination, then multiplies the algebra onto itself d - 1
    times; nilpotency is equivalent to the d-fold products all vanishing.
    """
    d = s.dim
    mats = [_flat(m) for m in s.members]
    basis: list[tuple[int, list]] = []
    queue = [m for m in mats if _try_extend(m, basis)]
    while queue:
        w = queue.pop()
        for m in mats:
            prod = _matmul_flat(m, w, d)
            if _try_extend(prod, basis):
                queue.append(prod)
    if not basis:
        return True  # all members are zero
    algebra = [tuple(row) for _, row in basis]

    layer = algebra
    for _ in range(d - 1):
        nxt_basis: list[tuple[int, list]] = []
        nxt = []
        for a in algebra:
            for w in layer:
                prod = _matmul_flat(a, w, d)
                if _try_extend(prod, nxt_basis):
                    nxt.append(prod)
        if not nxt:
            return True
        layer = nxt
    return False
