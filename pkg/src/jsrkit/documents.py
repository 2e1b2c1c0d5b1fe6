"""Versioned matrix-set documents and reproducible run reports.

An input document is a single JSON object with a "format" field, a
dimension, a scalar field marker, and the member matrices: complex entries
travel as [re, im] decimal pairs (no locale or parsing ambiguity), exact
rational entries as "a/b" strings.  Parsing normalizes entries, so
emission is canonical: parse(emit(doc)) emits byte-identical text, and the
sha256 of that text identifies the input in reports.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import DIM_CAP, JsrError, MatrixSet
from .ultrametric import PAdicMatrixSet, as_rational, is_prime

__all__ = [
    "FORMAT_VERSION",
    "InputDocument",
    "ParseError",
    "RunReport",
]

FORMAT_VERSION = 1


class ParseError(JsrError):
    """Malformed input document; the message names the offending field."""


def _fail(path: str, message: str):
    raise ParseError(f"{path}: {message}")


def _canonical_complex(entry, path: str) -> list:
    if (
        not isinstance(entry, (list, tuple))
        or len(entry) != 2
        or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in entry)
    ):
        _fail(path, "expected an [re, im] pair of numbers")
    re, im = float(entry[0]), float(entry[1])
    if not (math.isfinite(re) and math.isfinite(im)):
        _fail(path, "entries must be finite")
    return [re, im]


def _canonical_rational(entry, path: str) -> str:
    if isinstance(entry, bool) or not isinstance(entry, (int, str)):
        _fail(path, "expected an integer or an 'a/b' string")
    try:
        return str(as_rational(entry))
    except (ValueError, ZeroDivisionError) as exc:
        _fail(path, f"not a rational: {exc}")


@dataclass(frozen=True)
class InputDocument:
    """A parsed, normalized matrix-set document."""

    dim: int
    field_kind: str  # "complex" or "rational_padic"
    prime: int | None
    members: tuple  # rows of [re, im] lists, or rows of canonical strings
    labels: tuple | None = None
    meta: dict | None = None

    # -- construction ----------------------------------------------------

    @classmethod
    def from_matrix_set(
        cls, s: MatrixSet, labels: Sequence[str] | None = None, meta: dict | None = None
    ) -> "InputDocument":
        members = tuple(
            tuple(
                tuple([float(x.real), float(x.imag)] for x in row)
                for row in m.entries
            )
            for m in s.members
        )
        return cls(s.dim, "complex", None, members, _norm_labels(labels, len(members)), meta)

    @classmethod
    def from_padic_set(
        cls,
        s: PAdicMatrixSet,
        labels: Sequence[str] | None = None,
        meta: dict | None = None,
    ) -> "InputDocument":
        members = tuple(
            tuple(tuple(str(x) for x in row) for row in m) for m in s.members
        )
        return cls(s.dim, "rational_padic", s.prime, members, _norm_labels(labels, len(members)), meta)

    # -- parsing ---------------------------------------------------------

    @classmethod
    def parse(cls, text: str) -> "InputDocument":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(
                f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from exc
        if not isinstance(obj, dict):
            raise ParseError("document: expected a JSON object")
        if obj.get("format") != FORMAT_VERSION:
            _fail("format", f"expected {FORMAT_VERSION}, got {obj.get('format')!r}")

        dim = obj.get("dim")
        if isinstance(dim, bool) or not isinstance(dim, int) or not 1 <= dim <= DIM_CAP:
            _fail("dim", f"expected an integer in [1, {DIM_CAP}], got {dim!r}")

        field = obj.get("field")
        prime = None
        if field == "complex":
            kind = "complex"
        elif isinstance(field, dict) and field.get("kind") == "rational_padic":
            kind = "rational_padic"
            prime = field.get("prime")
            if isinstance(prime, bool) or not isinstance(prime, int) or not is_prime(prime):
                _fail("field.prime", f"expected a prime, got {prime!r}")
        else:
            _fail(
                "field",
                "expected \"complex\" or {\"kind\": \"rational_padic\", \"prime\": p}",
            )

        raw_members = obj.get("members")
        if not isinstance(raw_members, list) or not raw_members:
            _fail("members", "expected a nonempty list of matrices")
        members = []
        for mi, mat in enumerate(raw_members):
            if not isinstance(mat, list) or len(mat) != dim:
                _fail(f"members[{mi}]", f"expected {dim} rows")
            rows = []
            for ri, row in enumerate(mat):
                if not isinstance(row, list) or len(row) != dim:
                    _fail(f"members[{mi}][{ri}]", f"expected {dim} entries")
                if kind == "complex":
                    rows.append(
                        tuple(
                            _canonical_complex(x, f"members[{mi}][{ri}][{ci}]")
                            for ci, x in enumerate(row)
                        )
                    )
                else:
                    rows.append(
                        tuple(
                            _canonical_rational(x, f"members[{mi}][{ri}][{ci}]")
                            for ci, x in enumerate(row)
                        )
                    )
            members.append(tuple(rows))

        labels = obj.get("labels")
        if labels is not None:
            if not isinstance(labels, list) or len(labels) != len(members) or any(
                not isinstance(x, str) for x in labels
            ):
                _fail("labels", "expected one string per member")
            labels = tuple(labels)

        meta = obj.get("meta")
        if meta is not None and not isinstance(meta, dict):
            _fail("meta", "expected an object")

        return cls(dim, kind, prime, tuple(members), labels, meta)

    # -- conversion ------------------------------------------------------

    def to_matrix_set(self) -> MatrixSet:
        if self.field_kind != "complex":
            raise ParseError("field: this command needs a complex-field document")
        mats = [
            np.array(
                [[complex(e[0], e[1]) for e in row] for row in m],
                dtype=np.complex128,
            )
            for m in self.members
        ]
        return MatrixSet.from_arrays(mats)

    def to_padic_set(self) -> PAdicMatrixSet:
        if self.field_kind != "rational_padic":
            raise ParseError("field: this command needs a rational_padic document")
        return PAdicMatrixSet.from_rows(
            [[[Fraction(x) for x in row] for row in m] for m in self.members],
            self.prime,
        )

    # -- emission ----------------------------------------------------------

    def to_json_obj(self) -> dict:
        field = (
            "complex"
            if self.field_kind == "complex"
            else {"kind": "rational_padic", "prime": self.prime}
        )
        obj = {
            "format": FORMAT_VERSION,
            "dim": self.dim,
            "field": field,
            "members": [[list(row) for row in m] for m in self.members],
        }
        if self.labels is not None:
            obj["labels"] = list(self.labels)
        if self.meta is not None:
            obj["meta"] = self.meta
        return obj

    def emit(self) -> str:
        return (
            json.dumps(self.to_json_obj(), indent=2, sort_keys=True, allow_nan=False)
            + "\n"
        )

    def digest(self) -> str:
        return hashlib.sha256(self.emit().encode()).hexdigest()


def _norm_labels(labels, n: int):
    if labels is None:
        return None
    labels = tuple(str(x) for x in labels)
    if len(labels) != n:
        raise ValueError(f"expected {n} labels, got {len(labels)}")
    return labels


@dataclass(frozen=True)
class RunReport:
    """One command invocation's structured output.

    Re-running with the same input, config, and seed reproduces every field
    except wall_time_s.
    """

    tool: str
    version: str
    command: str
    input_digest: str
    config: dict
    seed: int | None
    results: dict
    wall_time_s: float

    def to_json_obj(self) -> dict:
        return {
            "tool": self.tool,
            "version": self.version,
            "command": self.command,
            "input_digest": self.input_digest,
            "config": self.config,
            "seed": self.seed,
            "results": self.results,
            "wall_time_s": self.wall_time_s,
        }

    def emit(self) -> str:
        return (
            json.dumps(self.to_json_obj(), indent=2, sort_keys=True, allow_nan=False)
            + "\n"
        )
