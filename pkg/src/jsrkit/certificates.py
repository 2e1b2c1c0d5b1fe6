"""Constructive spectral-radius certificates and inequality checkers.

The central object is the residual certificate: for a norm-bounded matrix
an approximate eigenpair (x, lambda) with a small residual forces the
spectral radius up to nearly |lambda|.  The other searches in this module
(integer combinations by pigeonhole, trajectory returns, near-idempotent
words) exist to *produce* such eigenpairs, and the ``check_*`` functions
wrap the package's bounds into three-valued verdicts for explicit
inequalities relating peak spectral radii, power norms, and the joint
spectral radius of a finite matrix set.
"""

from __future__ import annotations

import enum
import heapq
import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .bounds import (
    JsrInterval,
    PolytopeNorm,
    _level_children,
    _word_from_index,
    jsr_estimate,
    lower_bound,
)
from .core import (
    SPECTRAL,
    TOL_REL,
    WORD_CAP,
    BudgetExceededError,
    ComplexMatrix,
    JsrError,
    MatrixSet,
    NormKind,
    NormSpec,
    Word,
    as_matrix,
    batch_operator_norms,
    batch_spectral_radii,
    check_budget,
    count_words,
    eval_word,
    operator_norm,
    product_set,
    set_norm,
    spectral_radius,
    vector_norm,
)


class HypothesisUnmetError(JsrError):
    """The pigeonhole hypothesis of the combination search does not hold."""


class CombinationNotFoundError(JsrError):
    """Exhaustive search found no small integer combination.

    Over the complex field the pigeonhole count needs
    (1+T)^n > (1 + 2nT/eps)^(2d) because each complex coordinate
    contributes two real grid axes; instances that only satisfy the
    exponent-d count can genuinely have no solution.
    """


class Verdict(enum.Enum):
    CONFIRMED = "CONFIRMED"
    REFUTED = "REFUTED"
    INCONCLUSIVE = "INCONCLUSIVE"


# --- residual certificates ---------------------------------------------------


@dataclass(frozen=True)
class ResidualCertificate:
    """A certified spectral-radius lower bound from an approximate eigenpair.

    For ``||a|| <= 1`` (in the norm ``norm``), a unit vector x and
    |lam| <= 2 with residual ``||a x - lam x|| = (eps |lam|)^d``, the
    spectral radius of ``a`` is at least ``|lam| (1 - 4 eps)``.  ``bound``
    stores that value clamped at zero; a certificate with bound 0 is
    vacuous but still valid.
    """

    a: ComplexMatrix
    x: np.ndarray
    lam: complex
    residual: float
    eps: float
    bound: float
    norm: NormSpec = SPECTRAL


def residual_certificate(a, x, lam, n: NormSpec = SPECTRAL) -> ResidualCertificate:
    """Build a ResidualCertificate, rejecting inputs outside the hypothesis.

    Preconditions (each reported by name on violation): the operator norm
    of ``a`` under ``n`` is at most 1, ``x`` is a unit vector in the
    corresponding vector norm, and |lam| <= 2.
    """
    mat = as_matrix(a)
    vec = np.array(x, dtype=np.complex128, copy=True).reshape(-1)
    if vec.shape[0] != mat.dim:
        raise ValueError(f"vector length {vec.shape[0]} != matrix dimension {mat.dim}")
    lam = complex(lam)

    a_norm = operator_norm(mat.entries, n)
    if a_norm > 1.0 + TOL_REL:
        raise ValueError(f"norm bound violated: ||a|| = {a_norm} > 1")
    x_norm = vector_norm(vec, n)
    if abs(x_norm - 1.0) > TOL_REL:
        raise ValueError(f"unit vector violated: ||x|| = {x_norm}")
    if abs(lam) > 2.0 * (1.0 + TOL_REL):
        raise ValueError(f"lambda bound violated: |lam| = {abs(lam)} > 2")

    residual = vector_norm(mat.entries @ vec - lam * vec, n)
    d = mat.dim
    abs_lam = abs(lam)
    if abs_lam == 0.0:
        eps = 0.0 if residual == 0.0 else math.inf
    else:
        eps = residual ** (1.0 / d) / abs_lam
    bound = max(0.0, abs_lam * (1.0 - 4.0 * eps))
    vec.flags.writeable = False
    return ResidualCertificate(mat, vec, lam, residual, eps, bound, n)


# --- small integer combinations ----------------------------------------------


def _coordinate_bound(n: NormSpec) -> float:
    # Largest modulus a single coordinate can have on the unit ball of the
    # vector norm; used to size grid cells so that any pair of sums at norm
    # distance <= eps lands in the same or an adjacent cell.
    if n.kind in (NormKind.SPECTRAL, NormKind.MAX_ROW_SUM, NormKind.MAX_COL_SUM):
        return 1.0
    if n.kind is NormKind.ELLIPSOIDAL:
        return float(np.linalg.svd(n.g_inv, compute_uv=False)[0])
    raise ValueError("polytope norms are not supported by the combination search")


def siegel_combination(
    xs: Sequence,
    t: int,
    eps: float,
    n: NormSpec = SPECTRAL,
    *,
    enforce_hypothesis: bool = True,
    word_cap: int = WORD_CAP,
) -> tuple[int, ...]:
    """Integer coefficients c, not all zero, with |c_i| <= t and ||sum c_i x_i|| <= eps.

    Searches the (t+1)^n nonnegative-coefficient sums for two whose
    difference has norm at most eps, bucketing the sums into a grid and
    comparing same-cell and adjacent-cell pairs; the difference of the two
    coefficient vectors is the answer.  The grid cell is sized so this is a
    complete search: a qualifying pair is found whenever one exists (the
    neighbor scan costs a factor 3^(2d), so this is for low dimensions).

    The pigeonhole hypothesis (1+t)^n > (1 + 2nt/eps)^d guarantees a
    collision for real data; pass ``enforce_hypothesis=False`` to search
    anyway when it fails.  Raises CombinationNotFoundError if no
    combination exists within the bounds, which can happen for complex
    data as close as a factor 2 in the exponent above.
    """
    if t < 1:
        raise ValueError("coefficient bound t must be >= 1")
    if eps <= 0:
        raise ValueError("eps must be positive")
    xmat = np.array([np.asarray(v, dtype=np.complex128).reshape(-1) for v in xs])
    if xmat.ndim != 2 or xmat.shape[0] == 0:
        raise ValueError("xs must be a nonempty list of equal-length vectors")
    nv, d = xmat.shape
    for i in range(nv):
        if vector_norm(xmat[i], n) > 1.0 + TOL_REL:
            raise ValueError(f"vector bound violated: ||xs[{i}]|| > 1")

    if enforce_hypothesis and (1 + t) ** nv <= (1.0 + 2.0 * nv * t / eps) ** d:
        raise HypothesisUnmetError(
            f"(1+t)^n = {(1 + t) ** nv} does not exceed "
            f"(1 + 2nt/eps)^d = {(1.0 + 2.0 * nv * t / eps) ** d:.6g}"
        )
    total = (1 + t) ** nv
    if total > word_cap:
        raise BudgetExceededError(total, word_cap, "combination search enumeration")

    # All sums sum_i b_i x_i with b_i in {0..t}; flat index sum_i b_i (t+1)^i.
    sums = np.zeros((1, d), dtype=np.complex128)
    for i in range(nv):
        block = np.arange(t + 1)[:, None, None] * xmat[i][None, None, :]
        sums = (block + sums[None, :, :]).reshape(-1, d)

    def digits(idx: int) -> np.ndarray:
        out = np.empty(nv, dtype=np.int64)
        for i in range(nv):
            idx, out[i] = divmod(idx, t + 1)
        return out

    cell = eps * _coordinate_bound(n)
    coords = np.concatenate([sums.real, sums.imag], axis=1)
    keys = np.floor(coords / cell).astype(np.int64)
    offsets = list(itertools.product((-1, 0, 1), repeat=2 * d))
    buckets: dict[tuple, list[int]] = {}
    for idx in range(total):
        key = tuple(keys[idx])
        for off in offsets:
            nbr = buckets.get(tuple(k + o for k, o in zip(key, off)))
            if not nbr:
                continue
            for j in nbr:
                if vector_norm(sums[idx] - sums[j], n) <= eps:
                    c = digits(idx) - digits(j)
                    return tuple(int(v) for v in c)
        buckets.setdefault(key, []).append(idx)

    raise CombinationNotFoundError(
        f"no combination with |c_i| <= {t} reaches norm <= {eps}"
    )


# --- trace and convex-hull bounds --------------------------------------------


def trace_bound(a) -> float:
    """2 * max_k |trace(a^k)|^(1/k) over 1 <= k <= d, an upper bound on the
    spectral radius.

    Small power traces pin down all elementary symmetric functions of the
    eigenvalues through the Newton identities, hence all eigenvalues.
    """
    m = as_matrix(a).entries
    d = m.shape[0]
    p = np.eye(d, dtype=np.complex128)
    eps = 0.0
    for k in range(1, d + 1):
        p = p @ m
        eps = max(eps, abs(np.trace(p)) ** (1.0 / k))
    return 2.0 * eps


class HullCheckReport(NamedTuple):
    ok: bool
    eps: float
    bound: float
    max_radius: float
    max_ratio: float
    samples: int
    seed: int


def convex_hull_bound_check(
    s: MatrixSet,
    n: int,
    samples: int = 200,
    seed: int = 0,
    *,
    tol_rel: float = TOL_REL,
    word_cap: int = WORD_CAP,
) -> HullCheckReport:
    """Sample the complex convex hull of S u S^2 u ... u S^n against 2*d*eps.

    With eps = max_{k <= n d} rho(eval(w))^(1/|w|) at most 1, every point of
    the hull (complex coefficients with |.|-sum 1) has spectral radius at
    most 2 d eps.  This draws random combinations, also checks every vertex,
    and reports the worst ratio seen.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    d = s.dim
    eps = lower_bound(s, n * d, word_cap=word_cap).value
    if eps > 1.0:
        raise ValueError(
            f"hypothesis not met: peak radius {eps} over depth {n * d} exceeds 1"
        )
    pool = np.concatenate(
        [product_set(s, k, word_cap=word_cap).stack for k in range(1, n + 1)]
    )
    bound = 2.0 * d * eps
    max_radius = float(batch_spectral_radii(pool).max())
    rng = np.random.default_rng(seed)
    p = pool.shape[0]
    for _ in range(samples):
        z = rng.standard_normal(p) + 1j * rng.standard_normal(p)
        z /= np.abs(z).sum()
        max_radius = max(max_radius, spectral_radius(np.tensordot(z, pool, axes=1)))
    if bound > 0:
        max_ratio = max_radius / bound
    else:
        max_ratio = 0.0 if max_radius == 0.0 else math.inf
    ok = max_radius <= bound * (1.0 + tol_rel)
    return HullCheckReport(ok, eps, bound, max_radius, max_ratio, samples, seed)


# --- trajectory return search -------------------------------------------------


class ReturnSearchResult(NamedTuple):
    word: Word
    certificate: ResidualCertificate
    diagnostics: dict


def _working_norm(norm, v: np.ndarray) -> float:
    if isinstance(norm, PolytopeNorm):
        return float(norm.evaluate(v))
    return vector_norm(v, norm)


def _closest_pairs(points: np.ndarray, k_best: int) -> list[tuple[float, int, int]]:
    """The k_best most aligned index pairs (i < j), scored by 1 - |<xi,xj>|^2.

    The score is phase invariant: a return to e^(i theta) x is as good as a
    return to x, since the phase can be absorbed into the eigenvalue
    estimate.  All-pairs scan, one vectorized pass per endpoint j.
    """
    out: list[tuple[float, int, int]] = []
    for j in range(1, len(points)):
        ip = np.minimum(np.abs(points[:j] @ points[j].conj()), 1.0)
        scores = 1.0 - ip * ip
        i = int(np.argmin(scores))
        out.append((float(scores[i]), i, j))
    return heapq.nsmallest(k_best, out)


def _hashed_pairs(
    points: np.ndarray, k_best: int, cell: float = 0.25
) -> list[tuple[float, int, int]]:
    # Spatial hash over the raw positions for long trajectories.  Positional
    # buckets miss returns that are only phase aligned; candidates that do
    # collide are still scored phase invariantly.
    d = points.shape[1]
    coords = np.concatenate([points.real, points.imag], axis=1)
    keys = np.floor(coords / cell).astype(np.int64)
    offsets = list(itertools.product((-1, 0, 1), repeat=2 * d))
    buckets: dict[tuple, list[int]] = {}
    out: list[tuple[float, int, int]] = []
    for j in range(len(points)):
        key = tuple(keys[j])
        cand: list[int] = []
        for off in offsets:
            cand.extend(buckets.get(tuple(k + o for k, o in zip(key, off)), ()))
        if cand:
            ip = np.minimum(np.abs(points[cand] @ points[j].conj()), 1.0)
            scores = 1.0 - ip * ip
            b = int(np.argmin(scores))
            out.append((float(scores[b]), cand[b], j))
        buckets.setdefault(key, []).append(j)
    return heapq.nsmallest(k_best, out)


def trajectory_return_search(
    s: MatrixSet,
    norm=SPECTRAL,
    maxlen: int = 256,
    x0=None,
    seed: int = 0,
    *,
    max_restarts: int = 8,
    k_best: int = 64,
) -> ReturnSearchResult:
    """Hunt for a word whose product nearly fixes a direction.

    Starting from x0 (random if omitted) the trajectory greedily applies
    the member that maximizes the working norm of the image, keeping all
    visited directions.  A close return x_j ~ e^(i theta) x_i makes the
    subword i..j an approximate eigenpair: the product (normalized to
    spectral norm 1) fixes x_i up to a small residual, and the resulting
    ResidualCertificate lower-bounds its spectral radius.  The best
    certificate over the k_best most aligned return pairs is returned,
    ties going to the shorter word.

    ``norm`` is the working norm steering the greedy choice (a NormSpec or
    an adapted PolytopeNorm); the caller should rescale ``s`` so its joint
    spectral radius is near 1, since a trajectory whose working norm decays
    below 1/2 is abandoned and restarted from a fresh random direction (at
    most ``max_restarts`` times).  Certificates themselves are always in
    the spectral norm.  Raises ValueError if every trajectory dies
    immediately (all member images vanish), as for the zero set.
    """
    if maxlen < 2:
        raise ValueError("maxlen must be >= 2")
    d = s.dim
    rng = np.random.default_rng(seed)

    def fresh() -> np.ndarray:
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        return v / np.linalg.norm(v)

    if x0 is not None:
        x = np.asarray(x0, dtype=np.complex128).reshape(-1)
        nrm = np.linalg.norm(x)
        if nrm == 0:
            raise ValueError("x0 must be nonzero")
        x = x / nrm
    else:
        x = fresh()

    segments: list[tuple[list[np.ndarray], list[int]]] = []
    points, letters = [x], []
    wscale = 1.0
    steps = 0
    restarts = 0
    while steps < maxlen:
        images = s.stack @ x
        wvals = np.array([_working_norm(norm, images[i]) for i in range(s.size)])
        best = int(np.argmax(wvals))
        wx = _working_norm(norm, x)
        if wvals[best] <= 0.0 or wx <= 0.0:
            wscale = 0.0  # dead end; force a restart
        else:
            wscale *= wvals[best] / wx
        if wscale < 0.5:
            segments.append((points, letters))
            if restarts >= max_restarts:
                break
            restarts += 1
            x = fresh()
            points, letters = [x], []
            wscale = 1.0
            continue
        raw = images[best]
        x = raw / np.linalg.norm(raw)
        letters.append(best)
        points.append(x)
        steps += 1
    segments.append((points, letters))

    best_result: tuple[float, int, Word, ResidualCertificate] | None = None
    best_distance = math.inf
    pairs_checked = 0
    for points, letters in segments:
        if len(points) < 2:
            continue
        pts = np.array(points)
        pairer = _closest_pairs if len(pts) <= 4096 else _hashed_pairs
        for _, i, j in pairer(pts, k_best):
            pairs_checked += 1
            word = tuple(letters[i:j])
            prod = eval_word(s, word)
            norm_a = operator_norm(prod, SPECTRAL)
            if norm_a == 0.0 or not math.isfinite(norm_a):
                continue
            # Least-squares eigenvalue estimate for the normalized product.
            lam = complex(pts[i].conj() @ (prod @ pts[i])) / norm_a
            cert = residual_certificate(prod / norm_a, pts[i], lam, SPECTRAL)
            best_distance = min(best_distance, float(np.linalg.norm(pts[j] - pts[i])))
            if (
                best_result is None
                or cert.bound > best_result[0] * (1.0 + 1e-12)
                or (
                    cert.bound >= best_result[0] * (1.0 - 1e-12)
                    and len(word) < best_result[1]
                )
            ):
                best_result = (cert.bound, len(word), word, cert)
    if best_result is None:
        raise ValueError(
            "no trajectory pair to certify: every start direction was annihilated"
        )
    diagnostics = {
        "restarts": restarts,
        "steps": steps,
        "segments": [len(p) - 1 for p, _ in segments],
        "pairs_checked": pairs_checked,
        "best_distance": best_distance,
        "found_return": best_distance <= 1.0,
    }
    return ReturnSearchResult(best_result[2], best_result[3], diagnostics)


def near_idempotent_search(
    s: MatrixSet,
    maxlen: int,
    tol: float,
    *,
    word_cap: int = WORD_CAP,
) -> tuple[Word, float] | None:
    """Word minimizing ||P^2 - P|| / ||P|| among products with ||P|| >= 1/2.

    P ranges over eval(w) for nonempty words up to ``maxlen``; norms are
    spectral.  Returns (word, defect) when the smallest defect is at most
    ``tol``, None otherwise.  Sensible only after rescaling the set so its
    joint spectral radius is near 1, since products otherwise decay below
    the 1/2 norm floor or blow up.
    """
    if maxlen < 1:
        raise ValueError("maxlen must be >= 1")
    check_budget(s.size, maxlen, word_cap, f"near_idempotent_search to {maxlen}")
    best: tuple[float, Word] | None = None
    level = s.stack
    for k in range(1, maxlen + 1):
        if k > 1:
            level = _level_children(level, s)
        norms = batch_operator_norms(level, SPECTRAL)
        ok = np.flatnonzero(norms >= 0.5)
        if ok.size:
            sub = level[ok]
            defects = batch_operator_norms(
                np.matmul(sub, sub) - sub, SPECTRAL
            ) / norms[ok]
            i = int(np.argmin(defects))
            if best is None or defects[i] < best[0]:
                best = (float(defects[i]), _word_from_index(int(ok[i]), k, s.size))
    if best is None or best[0] > tol:
        return None
    return best[1], best[0]


# --- theorem checkers ---------------------------------------------------------


@dataclass(frozen=True)
class TheoremReport:
    """Outcome of checking one explicit inequality on a matrix set.

    ``lhs`` is the computed left-hand side; ``rhs_at_lower`` and
    ``rhs_at_upper`` evaluate the right-hand side with the joint spectral
    radius replaced by each end of the supplied enclosure.  The verdict is
    CONFIRMED when the inequality holds at the endpoint that makes the
    claim strongest, REFUTED when it fails at the endpoint that makes it
    weakest (and the budget was not clamped), INCONCLUSIVE otherwise.
    """

    theorem_id: str
    lhs: float
    rhs_at_lower: float
    rhs_at_upper: float
    verdict: Verdict
    witnesses: dict = field(default_factory=dict)
    budget: dict = field(default_factory=dict)


def _clamped_depth(size: int, depth_full: int, word_cap: int) -> int:
    depth = 0
    while depth < depth_full and count_words(size, depth + 1) <= word_cap:
        depth += 1
    return depth


def check_polbd(
    s: MatrixSet,
    interval: JsrInterval,
    *,
    word_cap: int = WORD_CAP,
) -> TheoremReport:
    """Check max_{k <= 2d^3} rho(eval(w))^(1/|w|) >= jsr(S) / (2^8 d^5).

    The peak is taken over all words up to depth 2d^3 (clamped to the word
    budget, with a flag); a clamped run can only confirm or abstain, never
    refute, since deeper words could still raise the left-hand side.
    """
    d = s.dim
    depth_full = 2 * d**3
    depth = _clamped_depth(s.size, depth_full, word_cap)
    if depth < 1:
        raise BudgetExceededError(s.size, word_cap, "peak radius at depth 1")
    clamped = depth < depth_full
    low = lower_bound(s, depth, word_cap=word_cap)
    c = 1.0 / (2**8 * d**5)
    rhs_lo, rhs_up = c * interval.lower, c * interval.upper
    if low.value >= rhs_up:
        verdict = Verdict.CONFIRMED
    elif not clamped and low.value < rhs_lo * (1.0 - TOL_REL):
        verdict = Verdict.REFUTED
    else:
        verdict = Verdict.INCONCLUSIVE
    return TheoremReport(
        "POLBD",
        low.value,
        rhs_lo,
        rhs_up,
        verdict,
        witnesses={"word": low.witness},
        budget={"depth": depth, "depth_full": depth_full, "clamped": clamped},
    )


def check_boca_new(
    s: MatrixSet,
    n: NormSpec,
    interval: JsrInterval,
    *,
    word_cap: int = WORD_CAP,
) -> TheoremReport:
    """Check ||S^n1|| <= 2^7 d^4 jsr(S) ||S||^(n1 - 1) at n1 = 2d^2.

    ||S^k|| is the max norm over all k-letter products.  If 2d^2 products
    exceed the word budget, n1 is clamped down (flagged); clamped runs can
    only confirm or abstain.
    """
    d = s.dim
    n1_full = 2 * d * d
    n1 = 0
    while n1 < n1_full and s.size ** (n1 + 1) <= word_cap:
        n1 += 1
    if n1 < 1:
        raise BudgetExceededError(s.size, word_cap, "power norm at exponent 1")
    clamped = n1 < n1_full
    stack = product_set(s, n1, word_cap=word_cap).stack
    norms = batch_operator_norms(stack, n)
    idx = int(np.argmax(norms))
    lhs = float(norms[idx])
    base = float(2**7 * d**4 * set_norm(s, n) ** (n1 - 1))
    rhs_lo, rhs_up = base * interval.lower, base * interval.upper
    if lhs <= rhs_lo:
        verdict = Verdict.CONFIRMED
    elif not clamped and lhs > rhs_up * (1.0 + TOL_REL):
        verdict = Verdict.REFUTED
    else:
        verdict = Verdict.INCONCLUSIVE
    ratio = lhs / rhs_lo if rhs_lo > 0 else (0.0 if lhs == 0.0 else math.inf)
    return TheoremReport(
        "BOCA_NEW",
        lhs,
        rhs_lo,
        rhs_up,
        verdict,
        witnesses={"word": _word_from_index(idx, n1, s.size), "ratio": ratio},
        budget={"n1": n1, "n1_full": n1_full, "clamped": clamped},
    )


def check_bg_el(
    s: MatrixSet,
    eps: float,
    maxlen: int,
    *,
    interval: JsrInterval | None = None,
    seed: int = 0,
    word_cap: int = WORD_CAP,
) -> TheoremReport:
    """Look for a word with rho(eval(w)) >= (1 - eps) jsr(S)^|w|.

    Expects ``s`` rescaled so the supplied (or freshly computed) enclosure
    contains 1.  Dimension 1 honors the full guaranteed search length
    12/eps; higher dimensions treat ``maxlen`` as the practical budget
    (the guaranteed length grows like 3^d 4^(d^2) eps^(-d^2)), so a miss is
    INCONCLUSIVE, never REFUTED.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    if interval is None:
        interval = jsr_estimate(s)
    if interval.lower > 1.0 + TOL_REL or interval.upper < 1.0 - TOL_REL:
        raise ValueError(
            "rescale the set so the joint spectral radius enclosure contains 1"
        )
    d = s.dim
    if d == 1:
        required = math.ceil(12.0 / eps)
        budget_len = max(maxlen, required)
        honored = True
    else:
        budget_len = maxlen
        honored = False
    word, cert, diag = trajectory_return_search(
        s, SPECTRAL, budget_len, seed=seed, max_restarts=8
    )
    lhs = spectral_radius(eval_word(s, word))
    k = len(word)
    rhs_lo = (1.0 - eps) * interval.lower**k
    rhs_up = (1.0 - eps) * interval.upper**k
    verdict = Verdict.CONFIRMED if lhs >= rhs_lo else Verdict.INCONCLUSIVE
    return TheoremReport(
        "BG_EL",
        lhs,
        rhs_lo,
        rhs_up,
        verdict,
        witnesses={"word": word, "residual": cert.residual},
        budget={
            "maxlen": budget_len,
            "required_length_honored": honored,
            "restarts": diag["restarts"],
        },
    )
