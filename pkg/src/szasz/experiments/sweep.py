"""Exact norms against requested bounds along a grid of evaluation points."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from ..bounds import (BoundId, BoundReport, de_branges, functional_bounds, intermediate_bound,
                      lh_bound, matrix_factored_bound, realization_bound, szasz_original,
                      vn_sup_report)
from ..io import FunctionalSubject, Subject, parse_complex
from ..poly import MatrixPoly, ScalarPoly
from ..realization import Realization, StructureError, realization_from_factors

APPLICABLE = {
    ScalarPoly: ("szasz1943", "debranges", "vn_sup"),
    FunctionalSubject: ("e1", "e2", "e3", "intermediate", "vn_sup"),
    MatrixPoly: ("lh", "factored", "realization", "vn_sup"),
    Realization: ("realization", "factored", "lh", "vn_sup"),
}


class InapplicableBound(ValueError):
    """A bound id was requested for a subject it does not apply to."""


@dataclass
class SweepRow:
    lam: complex
    exact_f: float
    exact_op: float
    bounds: dict[str, float] = field(default_factory=dict)
    hypotheses: dict[str, str] = field(default_factory=dict)

    def violations(self, slack: float = 1e-9) -> list[str]:
        """Bounds with verified hypotheses that fall below the matching exact norm."""
        out = []
        for bid, val in self.bounds.items():
            if self.hypotheses.get(bid) != "verified":
                continue
            exact = self.exact_f if bid in _FROBENIUS else self.exact_op
            if exact > val + slack * max(1.0, val):
                out.append(bid)
        return out


# bounds on the Frobenius norm; the rest bound the operator norm
_FROBENIUS = {"factored", "realization", "e1"}


def applicable_bounds(subject: Subject) -> tuple[str, ...]:
    for cls, ids in APPLICABLE.items():
        if isinstance(subject, cls):
            return ids
    raise TypeError(f"unsupported subject type {type(subject).__name__}")


def parse_grid(spec: str) -> list[complex]:
    """Grid specifications.

    ``circle:R:N``           N points on ``|lam| = R`` starting at ``R``
    ``segment:A:B:N``        N evenly spaced points from A to B (``re,im`` each)
    ``re,im;re,im;...``      an explicit list
    """
    spec = spec.strip()
    if spec.startswith("circle:"):
        _, r, count = spec.split(":")
        r, count = float(r), int(count)
        return list(r * np.exp(2j * np.pi * np.arange(count) / count))
    if spec.startswith("segment:"):
        _, a, b, count = spec.split(":")
        return list(np.linspace(parse_complex(a), parse_complex(b), int(count)))
    pts = [parse_complex(t) for t in spec.split(";") if t.strip()]
    if not pts:
        raise ValueError("empty grid")
    return pts


def _as_realization(subject) -> Realization:
    if isinstance(subject, Realization):
        return subject
    if subject.factors is None:
        raise InapplicableBound("realization bound needs rank-one factors")
    try:
        return realization_from_factors(subject.factors)
    except StructureError as exc:
        raise InapplicableBound(f"realization bound needs rank-one factors: {exc}") from None


def evaluate_bounds(subject: Subject, lam: complex, bound_ids) -> tuple[dict, np.ndarray]:
    """Exact value at ``lam`` and the requested :class:`BoundReport` objects keyed by id."""
    lam = complex(lam)
    allowed = applicable_bounds(subject)
    for bid in bound_ids:
        if bid not in allowed:
            raise InapplicableBound(
                f"bound {bid!r} does not apply to {type(subject).__name__}; choose from {allowed}")
    reports: dict[str, BoundReport] = {}
    if isinstance(subject, ScalarPoly):
        value = np.array([[subject(lam)]])
        for bid in bound_ids:
            if bid == "szasz1943":
                reports[bid] = szasz_original(subject, lam)
            elif bid == "debranges":
                reports[bid] = de_branges(subject, lam)
            else:
                reports[bid] = vn_sup_report(subject, abs(lam), lam)
        return reports, value
    if isinstance(subject, FunctionalSubject):
        A = lam * subject.A
        value = subject.p.at_matrix(A)
        fb = None
        for bid in bound_ids:
            if bid in ("e1", "e2", "e3"):
                fb = fb or functional_bounds(subject.p, A)
                reports[bid] = getattr(fb, bid)
            elif bid == "intermediate":
                reports[bid] = intermediate_bound(subject.p, A)
            else:
                reports[bid] = vn_sup_report(subject.p, float(np.linalg.norm(A, 2)), A)
        return reports, value
    if isinstance(subject, Realization):
        value = subject(lam)
        poly = subject.to_matrix_poly()
    else:
        value = subject(lam)
        poly = subject
    for bid in bound_ids:
        if bid == "lh":
            reports[bid] = lh_bound(poly, lam, certificate=True)
        elif bid == "factored":
            reports[bid] = matrix_factored_bound(poly, lam)
        elif bid == "realization":
            reports[bid] = realization_bound(_as_realization(subject), lam)
        else:
            reports[bid] = vn_sup_report(poly, abs(lam), lam)
    return reports, value


def sweep(subject: Subject, grid, bound_ids=()) -> list[SweepRow]:
    grid = list(grid)
    if not grid:
        raise ValueError("grid must be non-empty")
    bound_ids = [BoundId(b).value for b in bound_ids]
    rows = []
    for lam in grid:
        reports, value = evaluate_bounds(subject, lam, bound_ids)
        rows.append(SweepRow(
            complex(lam), float(np.linalg.norm(value)), float(np.linalg.norm(value, 2)),
            {bid: r.value for bid, r in reports.items()},
            {bid: r.hypothesis.value for bid, r in reports.items()},
        ))
    return rows


def rows_to_csv(rows: list[SweepRow], bound_ids) -> str:
    bound_ids = list(bound_ids)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lambda_re", "lambda_im", "exact_f", "exact_op"] + bound_ids
               + [f"{b}_hypothesis" for b in bound_ids])
    for r in rows:
        w.writerow([repr(r.lam.real), repr(r.lam.imag), repr(r.exact_f), repr(r.exact_op)]
                   + [repr(r.bounds[b]) for b in bound_ids]
                   + [r.hypotheses[b] for b in bound_ids])
    return buf.getvalue()


def rows_to_json(rows: list[SweepRow]) -> str:
    return json.dumps([{"lambda": [r.lam.real, r.lam.imag], "exact_f": r.exact_f,
                        "exact_op": r.exact_op, "bounds": r.bounds,
                        "hypotheses": r.hypotheses} for r in rows], indent=2)
