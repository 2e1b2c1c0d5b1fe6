"""Two-sided joint-spectral-radius bounds and norm constructions.

The basic sandwich for a finite matrix set S is

    max_{|w| <= depth} rho(eval(w))^(1/|w|)   <=   jsr(S)   <=
    min_{k <= depth}   max_{|w| = k} ||eval(w)||^(1/k)

where rho is the spectral radius of a single matrix.  Both sides converge
to the joint spectral radius as the depth grows.  ``jsr_estimate`` computes
both in one breadth-first sweep over the word tree.

A note on pruning: discarding whole subtrees whose prefix norm falls below
``(running lower bound)^k`` is sound for the eigenvalue side (any word that
could still improve the maximum has a cyclic rotation whose prefixes all
stay above the bound) but it can silently corrupt the norm side, because
the word attaining ``max ||eval(w)||`` may well have a small prefix.  The
sweep therefore keeps the enumeration exhaustive and uses the running
lower bound only to skip eigenvalue evaluations that provably cannot
improve it.  Results are bit-identical to the fully exhaustive computation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Sequence

import numpy as np
import scipy.linalg

from jsrkit.core import (
    SPECTRAL,
    TOL_REL,
    WORD_CAP,
    BudgetExceededError,
    ComplexMatrix,
    JsrError,
    MatrixSet,
    NormSpec,
    Word,
    batch_operator_norms,
    batch_spectral_radii,
    check_budget,
    count_words,
)

__all__ = [
    "JsrInterval",
    "JsrConfig",
    "LowerBound",
    "PolytopeNorm",
    "ConjugationResult",
    "SeriesNormValue",
    "NilpotencyResult",
    "DivergentSeriesError",
    "IndeterminateRankError",
    "lower_bound",
    "upper_bound",
    "jsr_estimate",
    "conjugation_search",
    "rota_strang_norm",
    "barabanov_approx",
    "nilpotency_test",
]

# Computed eigenvalue magnitudes at or below roundoff scale are treated as
# exact zeros before taking k-th roots.  A k-th root would otherwise blow
# pure noise (~eps * ||A||) up to noise^(1/k), which is large.  Zeroing only
# ever shrinks the reported lower bound, which is the safe direction.
_EIG_NOISE_FACTOR = 64.0


class DivergentSeriesError(JsrError):
    """The weighted series cannot be certified convergent: r * upper >= 1."""


class IndeterminateRankError(JsrError):
    """A rank decision fell inside the tolerance band; rescale and retry."""


class LowerBound(NamedTuple):
    value: float
    witness: Word


class ConjugationResult(NamedTuple):
    g: ComplexMatrix
    value: float


class SeriesNormValue(NamedTuple):
    value: float
    tail_bound: float


class NilpotencyResult(NamedTuple):
    nilpotent: bool
    algebra_dim: int


@dataclass(frozen=True)
class JsrInterval:
    """A certified enclosure lower <= jsr(S) <= upper.

    ``lower_witness`` is a word whose normalized spectral radius reproduces
    ``lower``; ``upper_depth`` is the power at which the norm side attained
    its minimum.  ``diagnostics`` carries sweep counters (depth reached,
    words enumerated, eigensolves skipped, budget / early-stop flags).
    """

    lower: float
    upper: float
    lower_witness: Word
    upper_depth: int
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.lower < 0:
            raise ValueError("lower bound cannot be negative")
        if self.lower > self.upper * (1 + TOL_REL) + 1e-300:
            raise ValueError(
                f"inconsistent interval: lower {self.lower} exceeds upper {self.upper}"
            )

    @property
    def width(self) -> float:
        # rounding can push the two sides past each other by an ulp when
        # both have converged; an empty overlap is width zero, not negative
        return max(0.0, self.upper - self.lower)

    def scaled(self, c: float) -> "JsrInterval":
        return JsrInterval(
            self.lower * c, self.upper * c, self.lower_witness, self.upper_depth,
            dict(self.diagnostics),
        )


@dataclass(frozen=True)
class JsrConfig:
    """Parameters for ``jsr_estimate``.

    ``target_width`` stops the sweep early once
    ``upper - lower <= target_width * upper``.  The word budget is a total
    across levels; when it runs out the partial interval is returned with
    ``diagnostics["budget_exhausted"] = 1.0`` instead of raising.
    """

    depth: int = 8
    norm: NormSpec = SPECTRAL
    word_cap: int = WORD_CAP
    tol_rel: float = TOL_REL
    target_width: float | None = None


def _word_from_index(idx: int, length: int, size: int) -> Word:
    digits = []
    for _ in range(length):
        digits.append(idx % size)
        idx //= size
    return tuple(reversed(digits))


def _level_children(level: np.ndarray, s: MatrixSet) -> np.ndarray:
    """Extend every word by one letter; child index = parent * size + letter."""
    m, d = s.size, s.dim
    out = np.empty((level.shape[0] * m, d, d), dtype=np.complex128)
    for i in range(m):
        out[i::m] = np.einsum("ij,njk->nik", s.members[i].entries, level)
    return out


def _sweep(
    s: MatrixSet,
    depth: int,
    n: NormSpec,
    word_cap: int,
    want_lower: bool,
    want_upper: bool,
    target_width: float | None = None,
):
    """Breadth-first sweep computing the norm and eigenvalue sides at once."""
    m, d = s.size, s.dim
    eps = np.finfo(float).eps
    best_low = 0.0
    # (length, index, value) of every word still eligible as a witness
    candidates: list[tuple[int, int, float]] = []
    best_up = math.inf
    up_depth = 0
    words_seen = 0
    eig_skipped = 0
    depth_reached = 0
    budget_hit = False
    early_stop = False

    level = None
    for k in range(1, depth + 1):
        level_count = m**k
        if words_seen + level_count > word_cap:
            budget_hit = True
            break
        level = s.stack if k == 1 else _level_children(level, s)
        words_seen += level_count
        depth_reached = k

        row_sums = np.abs(level).sum(axis=2).max(axis=1)

        if want_upper:
            norms = row_sums if n.kind.value == "max_row_sum" else batch_operator_norms(level, n)
            lev_up = float(norms.max()) ** (1.0 / k)
            if lev_up < best_up:
                best_up = lev_up
                up_depth = k

        if want_lower:
            # rho(A) <= ||A|| for every operator norm, so words whose row-sum
            # bound cannot reach the running maximum are skipped outright.
            # The guard factor keeps ties eligible so the reported witness is
            # identical to the exhaustive computation.
            cutoff = best_low * (1 - 1e-12)
            mask = row_sums ** (1.0 / k) >= cutoff
            eig_skipped += int(level_count - mask.sum())
            radii = np.zeros(level_count)
            if mask.any():
                radii[mask] = batch_spectral_radii(level[mask])
            scale = np.abs(level).max(axis=(1, 2))
            radii[radii <= _EIG_NOISE_FACTOR * d * eps * scale] = 0.0
            vals = radii ** (1.0 / k)
            lev_best = float(vals.max()) if level_count else 0.0
            if lev_best > best_low:
                best_low = lev_best
                cut = best_low * (1 - 1e-12)
                candidates = [c for c in candidates if c[2] >= cut]
            hits = np.nonzero(vals >= best_low * (1 - 1e-12))[0]
            for idx in hits[:1024]:
                candidates.append((k, int(idx), float(vals[idx])))

        if (
            target_width is not None
            and want_lower
            and want_upper
            and math.isfinite(best_up)
            and best_up - best_low <= target_width * best_up
        ):
            early_stop = True
            break

    witness: Word = ()
    if want_lower:
        final_cut = best_low * (1 - 1e-12)
        for k, idx, val in candidates:
            if val >= final_cut:
                witness = _word_from_index(idx, k, m)
                break

    diagnostics = {
        "depth_reached": float(depth_reached),
        "words_enumerated": float(words_seen),
        "eig_skipped": float(eig_skipped),
        "budget_exhausted": 1.0 if budget_hit else 0.0,
        "early_stop_width": 1.0 if early_stop else 0.0,
    }
    return best_low, witness, best_up, up_depth, diagnostics


def lower_bound(
    s: MatrixSet,
    depth: int,
    *,
    word_cap: int = WORD_CAP,
) -> LowerBound:
    """max over words of length <= depth of rho(eval(w))^(1/|w|).

    Returns the value together with an argmax witness word.  Ties (within
    one part in 1e12, to absorb eigensolver roundoff) go to the shortest
    word and then to the lexicographically first one.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    check_budget(s.size, depth, word_cap, f"lower_bound to depth {depth}")
    low, witness, _, _, _ = _sweep(s, depth, SPECTRAL, word_cap, True, False)
    return LowerBound(low, witness)


def upper_bound(
    s: MatrixSet,
    depth: int,
    n: NormSpec = SPECTRAL,
    *,
    word_cap: int = WORD_CAP,
) -> float:
    """min over 1 <= k <= depth of ||S^k||_n^(1/k); a certified upper bound."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    check_budget(s.size, depth, word_cap, f"upper_bound to depth {depth}")
    _, _, up, _, _ = _sweep(s, depth, n, word_cap, False, True)
    return up


def jsr_estimate(s: MatrixSet, config: JsrConfig = JsrConfig()) -> JsrInterval:
    """Both sandwich bounds in a single exhaustive sweep.

    The running lower bound prunes eigenvalue work only, so the returned
    interval is identical to running ``lower_bound`` and ``upper_bound``
    separately at the same depth.  On budget exhaustion the deepest
    completed level determines a (wider) valid interval, flagged in the
    diagnostics rather than raised.
    """
    low, witness, up, up_depth, diag = _sweep(
        s,
        config.depth,
        config.norm,
        config.word_cap,
        True,
        True,
        config.target_width,
    )
    return JsrInterval(low, up, witness, up_depth, diag)


# --- conjugation search ------------------------------------------------------


def _balance_step(stack: np.ndarray, base: float) -> np.ndarray | None:
    """One pass of diagonal balancing, snapped to powers of ``base``.

    Returns the diagonal scale vector, or None when already balanced.
    """
    abssum = np.abs(stack)
    rows = abssum.sum(axis=2).max(axis=0)  # worst row sums per coordinate
    cols = abssum.sum(axis=1).max(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.sqrt(cols / rows)
    ratio[~np.isfinite(ratio)] = 1.0
    ratio[ratio <= 0] = 1.0
    powers = np.round(np.log(ratio) / math.log(base))
    if not powers.any():
        return None
    return base**powers


def conjugation_search(
    s: MatrixSet,
    iterations: int = 200,
    *,
    eta: float = 0.1,
    base: float = 2.0,
    norm: NormSpec = SPECTRAL,
) -> ConjugationResult:
    """Search for g making ||g S g^-1|| small; never worse than the identity.

    Alternates two deterministic strategies, keeping the best candidate:

    * diagonal rescaling by powers of ``base`` that balances worst-case row
      against column sums of the conjugated set, and
    * a damped quadratic-form iteration
      ``P <- (1 - eta) P + eta * mean_s(s^H P s)`` (trace-normalized), whose
      Cholesky factor supplies the conjugation.

    The quadratic-form iteration converges toward an invariant form when one
    exists (e.g. conjugated unitary families), while the diagonal strategy
    fixes badly scaled triangular sets.
    """
    d = s.dim
    identity_value = float(batch_operator_norms(s.stack, norm).max())
    best = ConjugationResult(ComplexMatrix(np.eye(d)), identity_value)

    def consider(g: np.ndarray) -> None:
        nonlocal best
        try:
            conj = np.einsum("ij,njk,kl->nil", g, s.stack, np.linalg.inv(g))
        except np.linalg.LinAlgError:
            return
        value = float(batch_operator_norms(conj, norm).max())
        if value < best.value:
            best = ConjugationResult(ComplexMatrix(g), value)

    # strategy (a): accumulated diagonal balancing
    g_diag = np.ones(d)
    stack = s.stack
    for _ in range(iterations):
        scale = _balance_step(
            np.einsum("i,nij,j->nij", g_diag, stack, 1.0 / g_diag), base
        )
        if scale is None:
            break
        g_diag = scale * g_diag
        consider(np.diag(g_diag))

    # strategy (b): damped invariant-quadratic-form iteration
    p = np.eye(d, dtype=np.complex128)
    for _ in range(iterations):
        avg = np.einsum("nij,jk,nkl->il", stack.conj().transpose(0, 2, 1), p, stack)
        avg /= s.size
        p = (1 - eta) * p + eta * avg
        p = (p + p.conj().T) / 2
        tr = np.trace(p).real
        if not math.isfinite(tr) or tr <= 0:
            break
        p *= d / tr
        try:
            chol = np.linalg.cholesky(p)
        except np.linalg.LinAlgError:
            break
        consider(chol.conj().T)

    return best


# --- weighted series norm ----------------------------------------------------


def rota_strang_norm(
    s: MatrixSet,
    r: float,
    x,
    trunc: int,
    *,
    word_cap: int = WORD_CAP,
) -> SeriesNormValue:
    """Truncation of the weighted series norm  v_r(x) = sum_n ||S^n x|| r^n.

    ``||S^n x||`` is the worst Euclidean image norm over words of length n
    (the n = 0 term is ``||x||``).  Returns the partial sum through
    ``trunc`` together with a certified geometric bound on the dropped
    tail, derived from submultiplicativity of the level norms.  Requires
    r * (best computed upper bound on the jsr) < 1, otherwise the series
    cannot be certified convergent and DivergentSeriesError is raised.
    """
    if r <= 0:
        raise ValueError("r must be positive")
    if trunc < 1:
        raise ValueError("trunc must be >= 1")
    check_budget(s.size, trunc, word_cap, f"rota_strang_norm to depth {trunc}")
    v = np.asarray(x, dtype=np.complex128).reshape(-1)
    if v.shape[0] != s.dim:
        raise ValueError("vector dimension mismatch")
    x_norm = float(np.linalg.norm(v))

    value = x_norm
    level = None
    level_norms = []  # ||S^k||_2 for k = 1..trunc
    for k in range(1, trunc + 1):
        level = s.stack if k == 1 else _level_children(level, s)
        level_norms.append(float(batch_operator_norms(level, SPECTRAL).max()))
        value += float(np.linalg.norm(level @ v, axis=1).max()) * r**k

    roots = [ln ** (1.0 / k) for k, ln in enumerate(level_norms, start=1)]
    u = min(roots)
    if r * u >= 1.0:
        raise DivergentSeriesError(
            f"r*upper >= 1: r = {r} against the norm-side bound {u}; "
            f"the series has no certified geometric tail"
        )
    k_star = roots.index(u) + 1
    q = level_norms[k_star - 1] * r**k_star
    tail = (
        level_norms[trunc - 1]
        * r**trunc
        * sum(level_norms[i - 1] * r**i for i in range(1, k_star + 1))
        / (1 - q)
        * x_norm
    )
    return SeriesNormValue(value, tail)


# --- adapted polytope norm ---------------------------------------------------


@dataclass(frozen=True, eq=False)
class PolytopeNorm:
    """An adapted vector norm built from scaled products of the set.

    v(x) = max over stored words w (including the empty word) of
    ``||eval(w) x||_2 / rho_hat^|w|``.  With rho_hat close to the jsr this
    approximates an extremal norm: applying any member inflates v by at
    most ``rho_hat * (1 + slack)``, where ``slack`` is measured on the
    stored sample of directions.  ``vertices`` lists the nonzero rows of
    the scaled products; they span the space (the identity is always
    stored), which makes v a genuine norm.
    """

    rho_hat: float
    depth: int
    words: tuple[Word, ...]
    matrices: np.ndarray  # (count, d, d), scaled by rho_hat^-|w|
    vertices: tuple[np.ndarray, ...]
    slack: float
    sample_size: int
    seed: int

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    def evaluate(self, x) -> float:
        v = np.asarray(x, dtype=np.complex128).reshape(-1)
        return float(np.linalg.norm(self.matrices @ v, axis=1).max())

    def evaluate_batch(self, xs: np.ndarray) -> np.ndarray:
        """Norms of the columns of a (d, count) array."""
        imgs = self.matrices @ xs  # (count_w, d, count_x)
        return np.linalg.norm(imgs, axis=1).max(axis=0)


def barabanov_approx(
    s: MatrixSet,
    rho_hat: float,
    depth: int,
    *,
    sample_size: int = 256,
    seed: int = 0,
    word_cap: int = WORD_CAP,
) -> PolytopeNorm:
    """Finite-depth approximation of an extremal (Barabanov-type) norm.

    Stores every product of length <= depth scaled by rho_hat^-length and
    reports the worst relative growth ``v(s x) / (rho_hat * v(x)) - 1``
    over a seeded sample of directions.  A small slack certifies, on the
    sample, that rho_hat nearly dominates one-step growth of v.
    """
    if rho_hat <= 0:
        raise ValueError("rho_hat must be positive")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    check_budget(s.size, depth, word_cap, f"barabanov_approx to depth {depth}")
    d = s.dim
    words: list[Word] = [()]
    mats = [np.eye(d, dtype=np.complex128)]
    level = None
    for k in range(1, depth + 1):
        level = s.stack if k == 1 else _level_children(level, s)
        scale = rho_hat**-k
        for idx in range(level.shape[0]):
            words.append(_word_from_index(idx, k, s.size))
            mats.append(level[idx] * scale)
    matrices = np.stack(mats)
    matrices.flags.writeable = False

    rng = np.random.default_rng(seed)
    dirs = rng.standard_normal((d, sample_size)) + 1j * rng.standard_normal(
        (d, sample_size)
    )
    dirs /= np.linalg.norm(dirs, axis=0)

    base = np.linalg.norm(matrices @ dirs, axis=1).max(axis=0)
    worst = -math.inf
    for m in s.members:
        imgs = np.linalg.norm(matrices @ (m.entries @ dirs), axis=1).max(axis=0)
        worst = max(worst, float((imgs / (rho_hat * base)).max()))
    slack = worst - 1.0

    vertices = tuple(
        row.copy() for mat in mats for row in mat if np.abs(row).max() > 0
    )
    pn = PolytopeNorm(
        rho_hat=rho_hat,
        depth=depth,
        words=tuple(words),
        matrices=matrices,
        vertices=vertices,
        slack=slack,
        sample_size=sample_size,
        seed=seed,
    )
    for i in range(d):
        e = np.zeros(d)
        e[i] = 1.0
        if pn.evaluate(e) <= 0:
            raise ValueError("polytope norm degenerate: stored products do not span")
    return pn


# --- nilpotency of the generated algebra -------------------------------------


def _accept_directions(
    cand: np.ndarray,
    q: np.ndarray | None,
    tol_factor: float,
    band: float,
    ref_scale: float,
) -> np.ndarray | None:
    """Orthonormal new directions from candidate columns, or None if none.

    Rank decisions use a pivoted QR with threshold
    ``tol_factor * max(ref_scale, max column norm)``; pivots falling inside
    the band ``(threshold / band, threshold * band)`` raise
    IndeterminateRankError because the rank is not numerically well
    determined there.  ``ref_scale`` anchors the threshold to the scale of
    the generating set, so that a candidate which is tiny relative to the
    set (and tiny relative to nothing else, e.g. the only product around)
    is still treated as a borderline rank decision rather than judged
    against its own magnitude.
    """
    if cand.size == 0:
        return None
    cand_scale = float(np.linalg.norm(cand, axis=0).max())
    if cand_scale == 0.0:
        return None
    if q is not None:
        cand = cand - q @ (q.conj().T @ cand)
        cand = cand - q @ (q.conj().T @ cand)  # re-orthogonalize once
    threshold = tol_factor * max(ref_scale, cand_scale)
    qf, rf, _ = scipy.linalg.qr(cand, mode="economic", pivoting=True)
    diag = np.abs(np.diag(rf))
    inside_band = (diag > threshold / band) & (diag < threshold * band)
    if inside_band.any():
        raise IndeterminateRankError(
            f"rank decision indeterminate: pivot magnitude within a factor "
            f"{band:g} of the threshold {threshold:.3e}; rescale the input"
        )
    rank = int((diag >= threshold * band).sum())
    if rank == 0:
        return None
    return qf[:, :rank]


def nilpotency_test(
    s: MatrixSet,
    *,
    tol_rank: float = 1e-8,
    band: float = 10.0,
) -> NilpotencyResult:
    """Decide whether the algebra generated by the set is nilpotent.

    Builds a basis of span(S, S^2, ...) by saturating left-multiplication,
    then checks whether d-fold products of the algebra vanish (for a
    nilpotent subalgebra of d x d matrices the nilpotency index is at most
    d).  Rank decisions too close to the tolerance raise
    IndeterminateRankError instead of guessing.
    """
    d = s.dim
    mats = [m.entries for m in s.members]
    ref = max(float(np.linalg.norm(m)) for m in mats)

    q = _accept_directions(
        np.stack([m.reshape(-1) for m in mats], axis=1),
        None,
        tol_rank,
        band,
        ref,
    )
    if q is None:
        # every member is (numerically) zero
        return NilpotencyResult(True, 0)
    while True:
        basis = [q[:, j].reshape(d, d) for j in range(q.shape[1])]
        cand = np.stack(
            [(m @ b).reshape(-1) for m in mats for b in basis], axis=1
        )
        new = _accept_directions(cand, q, tol_rank, band, ref)
        if new is None:
            break
        q = np.concatenate([q, new], axis=1)

    algebra = [q[:, j].reshape(d, d) for j in range(q.shape[1])]
    algebra_dim = len(algebra)

    layer = q
    for _ in range(d - 1):
        mats_layer = [layer[:, j].reshape(d, d) for j in range(layer.shape[1])]
        cand = np.stack(
            [(a @ w).reshape(-1) for a in algebra for w in mats_layer], axis=1
        )
        layer = _accept_directions(cand, None, tol_rank, band, ref)
        if layer is None:
            return NilpotencyResult(True, algebra_dim)
    return NilpotencyResult(False, algebra_dim)
