"""Range campaigns over the conjecture, theorem, and lemma inequalities.

Campaigns split [from, to] into fixed chunks; every chunk seeds its own
pi(n^2) and running sums, so chunks are pure functions of their bounds and
may run in any number of worker processes with bit-identical results.
Reports aggregate rows in n-order only, never in completion order.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from .analytic import (
    SumRCache,
    c1_rhs,
    c2_lhs,
    delta,
    dusart_lower,
    dusart_upper,
    lemma1_proof_sides,
    lemma1_sides,
    lemma2_lhs,
    theorem_floor,
)
from .counting import pi_exact, stream_f
from .errors import DomainError

CHUNK_SIZE = 512
CHECKPOINT_VERSION = 1
LEMMA2_MIN_N = 180

CLS_PASS, CLS_VIOLATION, CLS_BOUNDARY = 0, 1, 2

MARGIN_TARGETS = ("c1", "c2", "theorem", "implication")
MARGIN_CSV_COLUMNS = "n,f,pi_n2,delta,c1_rhs,c2_lhs,t_floor,margin_c1,margin_c2,margin_thm,boundary_flag"


@dataclass(frozen=True)
class ConjectureReport:
    target: str
    range: tuple[int, int]
    checked: int
    violations: list[int]
    boundary_cases: list[int]
    min_margin: float | None
    argmin_n: int | None
    runtime_note: str


@dataclass(frozen=True)
class MarginRecord:
    """Per-n audit row; margins are rhs-f (c1), f-lhs (c2), f-t_floor (thm)."""

    n: int
    f: int
    pi_n2: int
    delta: float
    c1_rhs: float
    c2_lhs: float
    t_floor: int
    margin_c1: float
    margin_c2: float
    margin_thm: int
    boundary_flag: bool

    @property
    def margins(self) -> tuple[float, float, int]:
        return (self.margin_c1, self.margin_c2, self.margin_thm)


def _classify(margin: float, err: float) -> int:
    if abs(margin) <= err:
        return CLS_BOUNDARY
    return CLS_PASS if margin > 0.0 else CLS_VIOLATION


# margin row layout (JSON-friendly lists; floats round-trip through json):
# [n, f, pi_n2, delta, c1_rhs, c2_lhs, t_floor,
#  margin_c1, margin_c2, margin_thm, boundary_flag, cls_c1, cls_c2, cls_thm]


def _margin_chunk(start: int, end: int, strict: bool) -> list[list]:
    rows = []
    for rec in stream_f(start, end):
        n, f = rec.n, rec.f
        d = delta(n)
        c1 = c1_rhs(n)
        c2 = c2_lhs(n)
        tf, bflag = theorem_floor(n)
        m1 = c1.value - f
        m2 = f - c2.value
        mt = f - tf
        cls1 = _classify(m1, c1.abs_err)
        cls2 = _classify(m2, c2.abs_err)
        if strict and cls1 == CLS_BOUNDARY:
            q = c1_rhs(n, "quad")
            cls1 = _classify(q.value - f, q.abs_err)
        if strict and cls2 == CLS_BOUNDARY:
            q = c2_lhs(n, "quad")
            cls2 = _classify(f - q.value, q.abs_err)
        if strict and bflag:
            cls_thm = CLS_BOUNDARY  # floor argument inconclusive at quad
        else:
            cls_thm = CLS_PASS if mt >= 0 else CLS_VIOLATION
        rows.append(
            [n, f, rec.pi_n2, d.value, c1.value, c2.value, tf,
             m1, m2, mt, 1 if bflag else 0, cls1, cls2, cls_thm]
        )
    return rows


# lemma row layout:
# [n, pi_n2, l1_lhs, l1_rhs, proof_lhs, proof_rhs,
#  margin_l1, cls_l1, margin_l2, cls_l2]


def _lemma_chunk(start: int, end: int, strict: bool) -> list[list]:
    cache = SumRCache()
    rows = []
    for rec in stream_f(start, end):
        n = rec.n
        lhs, rhs = lemma1_sides(n, cache=cache)
        plhs, prhs = lemma1_proof_sides(n, cache=cache)
        m_disp = rhs.value - lhs.value
        m_proof = plhs.value - prhs.value
        e_disp = rhs.abs_err + lhs.abs_err
        e_proof = plhs.abs_err + prhs.abs_err
        # the lemma holds only if both forms do; report the tighter margin
        if m_disp <= m_proof:
            m1, cls1 = m_disp, _classify(m_disp, e_disp)
        else:
            m1, cls1 = m_proof, _classify(m_proof, e_proof)
        if strict and cls1 == CLS_BOUNDARY:
            qlhs, qrhs = lemma1_sides(n, "quad")
            cls1 = _classify(qrhs.value - qlhs.value, qrhs.abs_err + qlhs.abs_err)
        m2 = rec.pi_n2 - lhs.value
        cls2 = _classify(m2, lhs.abs_err)
        if strict and cls2 == CLS_BOUNDARY:
            q = lemma2_lhs(n, "quad")
            cls2 = _classify(rec.pi_n2 - q.value, q.abs_err)
        rows.append(
            [n, rec.pi_n2, lhs.value, rhs.value, plhs.value, prhs.value,
             m1, cls1, m2, cls2]
        )
    return rows


def _chunk_job(args: tuple[str, int, int, bool]) -> list[list]:
    kind, start, end, strict = args
    if kind == "margin":
        return _margin_chunk(start, end, strict)
    if kind == "lemma":
        return _lemma_chunk(start, end, strict)
    raise ValueError(f"unknown chunk kind {kind!r}")


def _chunks(from_n: int, to_n: int, size: int) -> list[tuple[int, int]]:
    return [(s, min(s + size - 1, to_n)) for s in range(from_n, to_n + 1, size)]


# --- checkpoint file: one JSON line per record, torn tails discarded ---------


def _checkpoint_header(command: str, from_n: int, to_n: int, chunk_size: int, precision: str) -> dict:
    return {
        "format": "primesq-checkpoint",
        "version": CHECKPOINT_VERSION,
        "command": command,
        "from": from_n,
        "to": to_n,
        "chunk_size": chunk_size,
        "precision": precision,
    }


def _load_checkpoint(path: str, header: dict) -> dict[int, dict]:
    """Completed chunk records keyed by chunk_start; {} when absent."""
    if not os.path.exists(path):
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        return {}
    try:
        found = json.loads(lines[0])
    except json.JSONDecodeError:
        return {}
    if found != header:
        raise DomainError(
            f"checkpoint {path} belongs to a different campaign "
            f"({found.get('command')} over {found.get('from')}..{found.get('to')})"
        )
    done: dict[int, dict] = {}
    for line in lines[1:]:
        try:
            rec = json.loads(line)
        except json.JSONDecodeError:
            break  # torn tail from an interrupted write
        if "chunk_start" not in rec:
            break
        done[rec["chunk_start"]] = rec
    return done


class _CheckpointWriter:
    def __init__(self, path: str | None, header: dict, done: dict[int, dict]):
        self.path = path
        if path is None:
            return
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(header) + "\n")
            for start in sorted(done):
                fh.write(json.dumps(done[start]) + "\n")
            fh.flush()

    def append(self, rec: dict) -> None:
        if self.path is None:
            return
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(rec) + "\n")
            fh.flush()


def _run_chunked(kind: str, command: str, from_n: int, to_n: int, *, workers: int,
                 strict: bool, checkpoint_path: str | None, resume: bool,
                 chunk_size: int) -> tuple[list[list], int]:
    """All rows for [from_n, to_n] in n-order, plus the chunk count."""
    header = _checkpoint_header(command, from_n, to_n, chunk_size, "strict" if strict else "fast")
    chunks = _chunks(from_n, to_n, chunk_size)
    done = _load_checkpoint(checkpoint_path, header) if (checkpoint_path and resume) else {}
    writer = _CheckpointWriter(checkpoint_path, header, done)
    todo = [(s, e) for (s, e) in chunks if s not in done]
    jobs = [(kind, s, e, strict) for (s, e) in todo]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_chunk_job, jobs))
    else:
        results = [_chunk_job(job) for job in jobs]
    pi_idx = 2 if kind == "margin" else 1
    for (s, e), rows in zip(todo, results):
        rec = {"chunk_start": s, "chunk_end": e,
               "pi_at_start": rows[0][pi_idx] if rows else None, "rows": rows}
        done[s] = rec
        writer.append(rec)
    all_rows: list[list] = []
    for s, _ in chunks:
        all_rows.extend(done[s]["rows"])
    return all_rows, len(chunks)


# --- aggregation --------------------------------------------------------------


def _margin_and_cls(target: str, row: list) -> tuple[float, int]:
    if target == "c1":
        return float(row[7]), row[11]
    if target == "c2":
        return float(row[8]), row[12]
    if target == "theorem":
        return float(row[9]), row[13]
    # implication: a c2 pass at n must force t_floor <= f
    if row[12] == CLS_BOUNDARY or row[13] == CLS_BOUNDARY:
        return float(row[9]), CLS_BOUNDARY
    if row[12] == CLS_PASS and row[6] > row[1]:
        return float(row[9]), CLS_VIOLATION
    return float(row[9]), CLS_PASS


def _aggregate_margin(target: str, from_n: int, to_n: int, rows: list[list],
                      strict: bool, chunk_count: int, chunk_size: int) -> ConjectureReport:
    violations: list[int] = []
    boundary: list[int] = []
    min_margin: float | None = None
    argmin: int | None = None
    last_negative: int | None = None
    for row in rows:
        n = row[0]
        if row[6] < 0:
            last_negative = n
        margin, cls = _margin_and_cls(target, row)
        if cls == CLS_VIOLATION:
            violations.append(n)
        elif cls == CLS_BOUNDARY:
            boundary.append(n)
        elif min_margin is None or margin < min_margin:
            min_margin, argmin = margin, n
    note = f"chunks={chunk_count};chunk_size={chunk_size};precision={'strict' if strict else 'fast'}"
    if target in ("theorem", "implication"):
        note += f";last_negative_t_floor={last_negative if last_negative is not None else 'none'}"
    return ConjectureReport(target, (from_n, to_n), len(rows), violations, boundary,
                            min_margin, argmin, note)


def run_margin_campaign(target: str, from_n: int, to_n: int, *, workers: int = 1,
                        precision_mode: str = "fast", checkpoint_path: str | None = None,
                        resume: bool = False, chunk_size: int = CHUNK_SIZE,
                        ) -> tuple[ConjectureReport, list[MarginRecord]]:
    if target not in MARGIN_TARGETS:
        raise ValueError(f"unknown target {target!r}")
    min_from = 5 if target == "c1" else 3
    if from_n < min_from:
        raise DomainError(f"{target} campaigns need from >= {min_from}")
    if to_n < from_n:
        raise DomainError("need from <= to")
    if precision_mode not in ("fast", "strict"):
        raise ValueError(f"unknown precision mode {precision_mode!r}")
    strict = precision_mode == "strict"
    rows, chunk_count = _run_chunked(
        "margin", f"verify {target}", from_n, to_n, workers=workers, strict=strict,
        checkpoint_path=checkpoint_path, resume=resume, chunk_size=chunk_size)
    report = _aggregate_margin(target, from_n, to_n, rows, strict, chunk_count, chunk_size)
    records = [MarginRecord(r[0], r[1], r[2], r[3], r[4], r[5], r[6], r[7], r[8], r[9], bool(r[10]))
               for r in rows]
    return report, records


def verify_conjecture(which: str, from_n: int, to_n: int, **kwargs) -> ConjectureReport:
    """Check one of the two strict inequalities over n = from..to."""
    if which not in ("c1", "c2"):
        raise ValueError("which must be 'c1' or 'c2'")
    return run_margin_campaign(which, from_n, to_n, **kwargs)[0]


def verify_theorem(from_n: int, to_n: int, **kwargs) -> ConjectureReport:
    """Check t_floor(n) <= f(n); the note carries the floor sign transition."""
    return run_margin_campaign("theorem", from_n, to_n, **kwargs)[0]


def implication_check(from_n: int, to_n: int, **kwargs) -> ConjectureReport:
    """Exactness witness: wherever c2 passes, the floor bound must hold too.

    Any violation here signals a precision bug, not a mathematical finding:
    floor(x) <= F follows from x < F + 1 whenever F is an integer.
    """
    return run_margin_campaign("implication", from_n, to_n, **kwargs)[0]


def run_lemma_campaign(from_n: int, to_n: int, *, workers: int = 1,
                       precision_mode: str = "fast", checkpoint_path: str | None = None,
                       resume: bool = False, chunk_size: int = CHUNK_SIZE,
                       ) -> tuple[ConjectureReport, ConjectureReport]:
    if from_n < 3:
        raise DomainError("lemma campaigns need from >= 3")
    if to_n < from_n:
        raise DomainError("need from <= to")
    if precision_mode not in ("fast", "strict"):
        raise ValueError(f"unknown precision mode {precision_mode!r}")
    strict = precision_mode == "strict"
    rows, chunk_count = _run_chunked(
        "lemma", "verify lemmas", from_n, to_n, workers=workers, strict=strict,
        checkpoint_path=checkpoint_path, resume=resume, chunk_size=chunk_size)
    base_note = f"chunks={chunk_count};chunk_size={chunk_size};precision={'strict' if strict else 'fast'}"

    viol1: list[int] = []
    bdry1: list[int] = []
    min1: float | None = None
    arg1: int | None = None
    for row in rows:
        n, cls1, m1 = row[0], row[7], float(row[6])
        if cls1 == CLS_VIOLATION:
            viol1.append(n)
        elif cls1 == CLS_BOUNDARY:
            bdry1.append(n)
        elif min1 is None or m1 < min1:
            min1, arg1 = m1, n
    rep1 = ConjectureReport("lemma1", (from_n, to_n), len(rows), viol1, bdry1, min1, arg1,
                            base_note + ";forms=display+proof")

    viol2: list[int] = []
    bdry2: list[int] = []
    min2: float | None = None
    arg2: int | None = None
    checked2 = 0
    info_failures = 0
    for row in rows:
        n, m2, cls2 = row[0], float(row[8]), row[9]
        if n < LEMMA2_MIN_N:
            if cls2 != CLS_PASS:
                info_failures += 1
            continue
        checked2 += 1
        if cls2 == CLS_VIOLATION:
            viol2.append(n)
        elif cls2 == CLS_BOUNDARY:
            bdry2.append(n)
        elif min2 is None or m2 < min2:
            min2, arg2 = m2, n
    note2 = (base_note + f";asserted_from={max(from_n, LEMMA2_MIN_N)}"
             + f";below_domain_failures={info_failures}")
    rep2 = ConjectureReport("lemma2", (from_n, to_n), checked2, viol2, bdry2, min2, arg2, note2)
    return rep1, rep2


def verify_lemmas(from_n: int, to_n: int, **kwargs) -> tuple[ConjectureReport, ConjectureReport]:
    """Check both lemma inequalities; the second is asserted from n = 180 only."""
    return run_lemma_campaign(from_n, to_n, **kwargs)


def verify_dusart(samples: list[int]) -> ConjectureReport:
    """Sandwich pi(x) between the explicit bounds at each applicable sample."""
    if not samples:
        raise DomainError("need at least one sample")
    xs = sorted(set(int(x) for x in samples))
    violations: list[int] = []
    skipped: list[int] = []
    min_margin: float | None = None
    argmin: int | None = None
    checked = 0
    for x in xs:
        lower, lower_ok = (None, False) if x <= 1 else dusart_lower(x)
        upper, upper_ok = (None, False) if x <= 1 else dusart_upper(x)
        if not lower_ok and not upper_ok:
            skipped.append(x)
            continue
        pi = pi_exact(x, "combinatorial")
        checked += 1
        ok = True
        for margin, applies in ((pi - lower.value, lower_ok), (upper.value - pi, upper_ok)):
            if not applies:
                continue
            if margin <= 0.0:
                ok = False
            elif min_margin is None or margin < min_margin:
                min_margin, argmin = margin, x
        if not ok:
            violations.append(x)
    note = f"samples={len(xs)};skipped={len(skipped)}"
    return ConjectureReport("dusart", (xs[0], xs[-1]), checked, violations, [],
                            min_margin, argmin, note)


# --- emission -----------------------------------------------------------------


def margin_rows_csv(records: list[MarginRecord]) -> str:
    lines = [MARGIN_CSV_COLUMNS]
    for r in records:
        lines.append(
            f"{r.n},{r.f},{r.pi_n2},{r.delta:.6f},{r.c1_rhs:.6f},{r.c2_lhs:.6f},"
            f"{r.t_floor},{r.margin_c1:.6f},{r.margin_c2:.6f},{r.margin_thm},"
            f"{1 if r.boundary_flag else 0}"
        )
    return "\n".join(lines) + "\n"


def report_json(report: ConjectureReport) -> str:
    return json.dumps(asdict(report), indent=2) + "\n"


def reports_json(reports: dict[str, ConjectureReport | list]) -> str:
    payload = {}
    for key, value in reports.items():
        payload[key] = asdict(value) if isinstance(value, ConjectureReport) else value
    return json.dumps(payload, indent=2) + "\n"


def report_table(report: ConjectureReport) -> str:
    lines = [
        f"target      : {report.target}",
        f"range       : {report.range[0]} .. {report.range[1]}",
        f"checked     : {report.checked}",
        f"violations  : {len(report.violations)}"
        + (f"  {report.violations[:20]}" if report.violations else ""),
        f"boundary    : {len(report.boundary_cases)}"
        + (f"  {report.boundary_cases[:20]}" if report.boundary_cases else ""),
        f"min margin  : "
        + ("n/a" if report.min_margin is None else f"{report.min_margin:.6f} at n={report.argmin_n}"),
        f"note        : {report.runtime_note}",
    ]
    return "\n".join(lines) + "\n"
