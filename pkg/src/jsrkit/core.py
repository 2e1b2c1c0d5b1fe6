"""Core matrix types and operations for joint-spectral-radius computations.

Everything downstream works with finite sets of square complex matrices.
A product of set members is addressed by a *word*: a tuple of member
indices ``(i1, ..., ik)`` evaluated right-to-left, so the letter ``i1``
acts first:

    eval((i1, ..., ik)) = members[ik] @ ... @ members[i1]

All operations here are pure; matrices are stored read-only.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "TOL_REL",
    "DIM_CAP",
    "WORD_CAP",
    "COND_CAP",
    "JsrError",
    "BudgetExceededError",
    "EigensolverError",
    "ComplexMatrix",
    "MatrixSet",
    "Word",
    "NormKind",
    "NormSpec",
    "as_matrix",
    "eval_word",
    "spectral_radius",
    "operator_norm",
    "vector_norm",
    "set_norm",
    "enumerate_products",
    "count_words",
    "product_set",
]

# Default tolerances and budgets. Every consumer can override these per call.
TOL_REL = 1e-9          # relative comparison slack for floating-point results
DIM_CAP = 32            # dense enumeration is pointless far beyond this
WORD_CAP = 2_000_000    # default cap on enumerated words
COND_CAP = 1e12         # conditioning limit for ellipsoidal norm factors


class JsrError(Exception):
    """Base class for errors raised by this package."""


class BudgetExceededError(JsrError):
    """An enumeration would exceed its word budget.

    The message always names the offending bound so callers can adjust it.
    """

    def __init__(self, needed: int, cap: int, what: str = "word enumeration"):
        self.needed = needed
        self.cap = cap
        super().__init__(
            f"{what} requires {needed} words which exceeds the cap of {cap}; "
            f"raise word_cap or reduce depth"
        )


class EigensolverError(JsrError):
    """The dense eigensolver failed to converge (never silently zero)."""


Word = tuple[int, ...]


def _as_complex_array(entries) -> np.ndarray:
    a = np.array(entries, dtype=np.complex128, copy=True, order="C")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        raise ValueError("empty matrix")
    if not np.all(np.isfinite(a.view(np.float64))):
        raise ValueError("matrix entries must be finite")
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class ComplexMatrix:
    """A d x d complex matrix with finite entries, immutable after creation."""

    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _as_complex_array(self.entries))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def same_entries(self, other: "ComplexMatrix") -> bool:
        return bool(np.array_equal(self.entries, other.entries))

    def __repr__(self):
        return f"ComplexMatrix(dim={self.dim})"


def as_matrix(m) -> ComplexMatrix:
    """Coerce an array-like or ComplexMatrix into a ComplexMatrix."""
    if isinstance(m, ComplexMatrix):
        return m
    return ComplexMatrix(m)


@dataclass(frozen=True, eq=False)
class MatrixSet:
    """A finite, non-empty set of same-dimension complex matrices.

    Members keep their given order; words index into it.  Exact duplicate
    members are legal but flagged, since they only waste enumeration budget.
    """

    members: tuple[ComplexMatrix, ...]
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        members = tuple(as_matrix(m) for m in self.members)
        if not members:
            raise ValueError("a MatrixSet needs at least one member")
        d = members[0].dim
        for k, m in enumerate(members):
            if m.dim != d:
                raise ValueError(
                    f"member {k} has dimension {m.dim}, expected {d}"
                )
        object.__setattr__(self, "members", members)

    @classmethod
    def from_arrays(
        cls,
        arrays: Iterable,
        *,
        dim_cap: int = DIM_CAP,
        check_duplicates: bool = True,
    ) -> "MatrixSet":
        members = tuple(as_matrix(a) for a in arrays)
        warnings: list[str] = []
        if members and members[0].dim > dim_cap:
            raise ValueError(
                f"dimension {members[0].dim} exceeds the cap of {dim_cap}; "
                f"dense enumeration does not scale there"
            )
        if check_duplicates:
            for i in range(len(members)):
                for j in range(i + 1, len(members)):
                    if members[i].same_entries(members[j]):
                        warnings.append(
                            f"members {i} and {j} are exact duplicates"
                        )
        return cls(members, tuple(warnings))

    @property
    def dim(self) -> int:
        return self.members[0].dim

    @property
    def size(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    @cached_property
    def stack(self) -> np.ndarray:
        """All members as one read-only (size, d, d) array."""
        s = np.stack([m.entries for m in self.members])
        s.flags.writeable = False
        return s

    def scaled(self, c: complex) -> "MatrixSet":
        """The set {c*m for m in members}, preserving order."""
        return MatrixSet(tuple(ComplexMatrix(c * m.entries) for m in self.members))

    def conjugated(self, g: np.ndarray) -> "MatrixSet":
        """The set {g m g^-1 for m in members}."""
        g = np.asarray(g, dtype=np.complex128)
        g_inv = np.linalg.inv(g)
        return MatrixSet(
            tuple(ComplexMatrix(g @ m.entries @ g_inv) for m in self.members)
        )

    def __repr__(self):
        return f"MatrixSet(size={self.size}, dim={self.dim})"


def validate_word(word: Sequence[int], set_size: int) -> Word:
    w = tuple(int(i) for i in word)
    for i in w:
        if not 0 <= i < set_size:
            raise ValueError(f"word letter {i} out of range for a set of size {set_size}")
    return w


def eval_word(s: MatrixSet, word: Sequence[int]) -> np.ndarray:
    """Evaluate a word to its matrix product (rightmost letter applied first).

    The empty word evaluates to the identity.
    """
    w = validate_word(word, s.size)
    out = np.eye(s.dim, dtype=np.complex128)
    for i in w:
        out = s.members[i].entries @ out
    return out


# --- norms -----------------------------------------------------------------


class NormKind(enum.Enum):
    SPECTRAL = "spectral"
    MAX_ROW_SUM = "max_row_sum"
    MAX_COL_SUM = "max_col_sum"
    ELLIPSOIDAL = "ellipsoidal"
    POLYTOPE = "polytope"


@dataclass(frozen=True, eq=False)
class NormSpec:
    """Specification of a submultiplicative matrix norm.

    SPECTRAL is the largest singular value, MAX_ROW_SUM / MAX_COL_SUM are
    the exact operator norms induced by the sup / sum vector norms, and
    ELLIPSOIDAL(g) is ``A -> ||g A g^-1||_2`` for an invertible g.  The
    POLYTOPE kind wraps an adapted polytope vector norm built elsewhere;
    it supports vector evaluation only, not induced operator norms.
    """

    kind: NormKind
    g: np.ndarray | None = None
    polytope: object | None = None  # bounds.PolytopeNorm

    def __post_init__(self):
        if self.kind is NormKind.ELLIPSOIDAL:
            if self.g is None:
                raise ValueError("ellipsoidal norm needs a factor g")
            g = np.array(self.g, dtype=np.complex128, copy=True)
            if g.ndim != 2 or g.shape[0] != g.shape[1]:
                raise ValueError("ellipsoidal factor must be square")
            sv = np.linalg.svd(g, compute_uv=False)
            if sv[-1] <= 0 or sv[0] / sv[-1] > COND_CAP:
                raise ValueError(
                    f"ellipsoidal factor is singular or has condition number "
                    f"beyond {COND_CAP:g}"
                )
            g.flags.writeable = False
            object.__setattr__(self, "g", g)
        elif self.g is not None:
            raise ValueError("only the ellipsoidal kind takes a factor g")
        if self.kind is NormKind.POLYTOPE and self.polytope is None:
            raise ValueError("polytope norm needs the polytope object")

    @cached_property
    def g_inv(self) -> np.ndarray:
        assert self.g is not None
        inv = np.linalg.inv(self.g)
        inv.flags.writeable = False
        return inv

    # Convenience constructors; these read better at call sites.
    @staticmethod
    def spectral() -> "NormSpec":
        return NormSpec(NormKind.SPECTRAL)

    @staticmethod
    def max_row_sum() -> "NormSpec":
        return NormSpec(NormKind.MAX_ROW_SUM)

    @staticmethod
    def max_col_sum() -> "NormSpec":
        return NormSpec(NormKind.MAX_COL_SUM)

    @staticmethod
    def ellipsoidal(g) -> "NormSpec":
        return NormSpec(NormKind.ELLIPSOIDAL, g=np.asarray(g, dtype=np.complex128))

    @staticmethod
    def from_polytope(p) -> "NormSpec":
        return NormSpec(NormKind.POLYTOPE, polytope=p)

    def __repr__(self):
        return f"NormSpec({self.kind.value})"


SPECTRAL = NormSpec.spectral()


def spectral_radius(a) -> float:
    """Largest eigenvalue magnitude, via the dense (Schur-based) eigensolver.

    Raises EigensolverError if the QR iteration fails; the failure is never
    masked as a zero.
    """
    m = as_matrix(a).entries
    try:
        ev = np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigensolver failed on a {m.shape[0]} x {m.shape[0]} matrix: {exc}") from exc
    return float(np.max(np.abs(ev))) if ev.size else 0.0


def batch_spectral_radii(stack: np.ndarray) -> np.ndarray:
    """Spectral radii of a (n, d, d) stack; same error contract as above."""
    if stack.shape[0] == 0:
        return np.zeros(0)
    try:
        ev = np.linalg.eigvals(stack)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"batched eigensolver failure: {exc}") from exc
    return np.abs(ev).max(axis=1)


def operator_norm(a, n: NormSpec = SPECTRAL) -> float:
    """Operator norm of a single matrix under the given specification."""
    m = as_matrix(a).entries
    return float(batch_operator_norms(m[np.newaxis], n)[0])


def batch_operator_norms(stack: np.ndarray, n: NormSpec = SPECTRAL) -> np.ndarray:
    """Operator norms of a (count, d, d) stack under ``n``.

    Row/column sums are exact; the spectral and ellipsoidal kinds go through
    singular values.  Polytope norms have no induced-operator-norm evaluation
    and are rejected.
    """
    if stack.shape[0] == 0:
        return np.zeros(0)
    if n.kind is NormKind.MAX_ROW_SUM:
        return np.abs(stack).sum(axis=2).max(axis=1)
    if n.kind is NormKind.MAX_COL_SUM:
        return np.abs(stack).sum(axis=1).max(axis=1)
    if n.kind is NormKind.SPECTRAL:
        return np.linalg.svd(stack, compute_uv=False)[..., 0]
    if n.kind is NormKind.ELLIPSOIDAL:
        conj = np.einsum("ij,njk,kl->nil", n.g, stack, n.g_inv)
        return np.linalg.svd(conj, compute_uv=False)[..., 0]
    raise ValueError(
        f"operator norms are not defined for the {n.kind.value} kind; "
        f"use vector_norm instead"
    )


def vector_norm(x, n: NormSpec = SPECTRAL) -> float:
    """The vector norm that induces ``n`` as an operator norm.

    SPECTRAL -> Euclidean, MAX_ROW_SUM -> sup, MAX_COL_SUM -> sum,
    ELLIPSOIDAL(g) -> ||g x||_2, POLYTOPE -> the stored polytope norm.
    """
    v = np.asarray(x, dtype=np.complex128).reshape(-1)
    if n.kind is NormKind.SPECTRAL:
        return float(np.linalg.norm(v))
    if n.kind is NormKind.MAX_ROW_SUM:
        return float(np.abs(v).max())
    if n.kind is NormKind.MAX_COL_SUM:
        return float(np.abs(v).sum())
    if n.kind is NormKind.ELLIPSOIDAL:
        return float(np.linalg.norm(n.g @ v))
    if n.kind is NormKind.POLYTOPE:
        return float(n.polytope.evaluate(v))
    raise ValueError(f"unknown norm kind {n.kind!r}")


def set_norm(s: MatrixSet, n: NormSpec = SPECTRAL) -> float:
    """max over members of the operator norm, i.e. ||S||_n."""
    return float(batch_operator_norms(s.stack, n).max())


# --- word enumeration ------------------------------------------------------


def count_words(set_size: int, depth: int) -> int:
    """Number of nonempty words of length <= depth over ``set_size`` letters."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if set_size == 1:
        return depth
    return (set_size ** (depth + 1) - set_size) // (set_size - 1)


def check_budget(set_size: int, depth: int, word_cap: int, what: str) -> int:
    needed = count_words(set_size, depth)
    if needed > word_cap:
        raise BudgetExceededError(needed, word_cap, what)
    return needed


def enumerate_products(
    s: MatrixSet,
    depth: int,
    prune: float = 0.0,
    n: NormSpec = SPECTRAL,
    *,
    word_cap: int = WORD_CAP,
    first_letters: Sequence[int] | None = None,
) -> Iterator[tuple[Word, np.ndarray]]:
    """Stream (word, product) pairs for all words of length 1..depth.

    Words come out in depth-first preorder: ``(0), (0,0), ..., (1), ...``.
    With ``prune > 0``, a word is emitted only if every prefix product has
    norm strictly above the threshold; the subtree below a failing prefix
    is skipped entirely (valid for search because norms are
    submultiplicative).  ``prune = 0`` streams everything, including exact
    zero products.

    ``first_letters`` restricts the walk to subtrees rooted at the given
    initial letters, which is how parallel consumers partition the tree.
    The stream is freshly computed per call and safe to consume anywhere.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    check_budget(s.size, depth, word_cap, "enumerate_products")
    roots = range(s.size) if first_letters is None else validate_word(first_letters, s.size)
    mats = [m.entries for m in s.members]
    do_prune = prune > 0.0

    def _norm1(p: np.ndarray) -> float:
        return float(batch_operator_norms(p[np.newaxis], n)[0])

    def walk(word: Word, prod: np.ndarray) -> Iterator[tuple[Word, np.ndarray]]:
        yield word, prod
        if len(word) < depth:
            for i in range(s.size):
                child = mats[i] @ prod
                if do_prune and _norm1(child) <= prune:
                    continue
                yield from walk(word + (i,), child)

    for r in roots:
        prod = mats[r]
        if do_prune and _norm1(prod) <= prune:
            continue
        yield from walk((r,), prod)


def product_set(
    s: MatrixSet,
    k: int,
    *,
    word_cap: int = WORD_CAP,
) -> MatrixSet:
    """The k-fold product set S^k = {eval(w) : |w| = k} as a MatrixSet."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if s.size ** k > word_cap:
        raise BudgetExceededError(s.size**k, word_cap, f"product_set at power {k}")
    level = s.stack
    for _ in range(k - 1):
        m, d = s.size, s.dim
        nxt = np.empty((level.shape[0] * m, d, d), dtype=np.complex128)
        for i in range(m):
            # child index convention: parent * size + letter
            nxt[i::m] = np.einsum("ij,njk->nik", s.members[i].entries, level)
        level = nxt
    return MatrixSet.from_arrays(list(level), check_duplicates=False)
