"""Append-only tensed truth records and the past-fixity audit.

Every recorded valuation pairs the tick it is about with the tick it was
asserted at; the tense (past, present, future) is derived from the two.
Ledgers are persistent values: appending returns a new ledger and never
touches the old one, so any previously held ledger stays valid. Appends
must not regress in assertion time.

The audit treats the earliest determinate truth recorded for a given
(proposition, tick) pair as fixed. A later determinate record that
disagrees is a "flip"; a later gap is a "loss". A gap that is later
refined to a determinate value is learning, not alteration, and is not
flagged.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NonMonotoneAssertion
from .lattice import TruthValue

PAST = "past"
PRESENT = "present"
FUTURE = "future"


def derive_tense(at: int, asserted_at: int) -> str:
    if at < asserted_at:
        return PAST
    if at == asserted_at:
        return PRESENT
    return FUTURE


@dataclass(frozen=True)
class TensedRecord:
    at: int
    prop_id: str
    tense: str
    truth: TruthValue
    asserted_at: int


@dataclass(frozen=True)
class Ledger:
    records: tuple[TensedRecord, ...] = ()

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


@dataclass(frozen=True)
class Violation:
    """A past valuation that failed to stay fixed."""

    prop_id: str
    at: int
    earlier_truth: TruthValue
    later_truth: TruthValue
    later_asserted_at: int
    kind: str  # "flip" for determinate-to-determinate, "loss" for determinate-to-gap


def _check_tick(name: str, value: int) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise ValueError(f"{name} must be a non-negative integer, got {value!r}")
    return value


def record_valuation(
    ledger: Ledger,
    at: int,
    prop_id: str,
    truth: TruthValue,
    asserted_at: int,
) -> Ledger:
    """Append one valuation, deriving its tense from (at, asserted_at).

    Returns a new ledger; the input ledger is unchanged. Raises
    NonMonotoneAssertion when asserted_at is earlier than the last record's.
    """
    _check_tick("at", at)
    _check_tick("asserted_at", asserted_at)
    if ledger.records and asserted_at < ledger.records[-1].asserted_at:
        raise NonMonotoneAssertion(
            f"asserted_at {asserted_at} regresses behind {ledger.records[-1].asserted_at}"
        )
    rec = TensedRecord(at, prop_id, derive_tense(at, asserted_at), truth, asserted_at)
    return Ledger(ledger.records + (rec,))


def check_past_unalterability(ledger: Ledger) -> tuple[Violation, ...]:
    """Audit for altered past valuations.

    For each (prop_id, at) key, the earliest determinate truth is the
    baseline. Every later record at that key whose truth differs yields a
    violation: kind "loss" when the later truth is a gap, kind "flip" when
    it is the opposite determinate value. Keys with no determinate record,
    and gap records preceding the baseline, are skipped. Future-tense
    records are predictions, not history: one never serves as a baseline,
    so a prediction that fails to come true is not an alteration.
    """
    groups: dict[tuple[str, int], list[TensedRecord]] = {}
    for rec in ledger.records:
        groups.setdefault((rec.prop_id, rec.at), []).append(rec)
    violations: list[Violation] = []
    for (prop_id, at), recs in groups.items():
        baseline_index = next(
            (i for i, r in enumerate(recs) if r.truth.is_determinate and r.tense != FUTURE),
            None,
        )
        if baseline_index is None:
            continue
        baseline = recs[baseline_index].truth
        for later in recs[baseline_index + 1:]:
            if later.truth is baseline:
                continue
            kind = "loss" if later.truth is TruthValue.GAP else "flip"
            violations.append(
                Violation(prop_id, at, baseline, later.truth, later.asserted_at, kind)
            )
    return tuple(violations)


def tense_view(ledger: Ledger, now: int) -> tuple[tuple[str, int, str, TruthValue], ...]:
    """Relabel every record's tense relative to the supplied present moment.

    Pure view: recorded truths come back unchanged and the ledger itself is
    untouched."""
    _check_tick("now", now)
    return tuple(
        (rec.prop_id, rec.at, derive_tense(rec.at, now), rec.truth) for rec in ledger.records
    )


def ledger_lines(ledger: Ledger) -> list[str]:
    """Line-delimited serialization: tick, prop id, tense, truth, asserted tick."""
    return [
        f"{rec.at}\t{rec.prop_id}\t{rec.tense}\t{rec.truth}\t{rec.asserted_at}"
        for rec in ledger.records
    ]
