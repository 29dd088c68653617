"""Per-graph records, corpus claims, summaries and the NDJSON result cache."""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import time
from collections import Counter
from dataclasses import asdict, dataclass, field
from multiprocessing import Pool
from pathlib import Path
from typing import Iterable, Sequence

from .constructor import construct
from .graph import Graph, connected_components, is_connected, is_regular, parse_graph6, to_graph6
from .solver import DEFAULT_MAX_K, EXCEEDS, INFINITE, distinguishing_index, small_distinguishing_index
from .symmetry import automorphism_group, small_automorphisms

log = logging.getLogger(__name__)

CACHE_ENV = "SYMBREAK_CACHE"
CACHE_FILE = "records.ndjson"

CLAIMS = ("thm1", "kpw3", "regular2", "monotone")
THM1_DISCONNECTED = "thm1[disconnected]"


@dataclass
class VerificationRecord:
    graph6: str
    n: int
    m: int
    aut_order: int
    small_count: int
    d_prime: int | str
    d_small: int | str
    method: str
    connected: bool
    regular: bool
    millis: float

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "VerificationRecord":
        return cls(**{k: data[k] for k in cls.__dataclass_fields__})


def record_problems(rec: VerificationRecord) -> list[str]:
    """Violations of the record invariants (empty when consistent)."""
    out = []
    if not index_at_most(rec.d_small, rec.d_prime):
        out.append(f"d_small={rec.d_small} exceeds d_prime={rec.d_prime}")
    if (rec.d_small == 1) != (rec.small_count == 0):
        out.append(f"d_small={rec.d_small} with {rec.small_count} small automorphisms")
    return out


def _rank(v: int | str) -> tuple[int, int]:
    # numbers < "exceeds max_k" < INFINITE
    if v == INFINITE:
        return (2, 0)
    if v == EXCEEDS:
        return (1, 0)
    return (0, int(v))


def index_at_most(a: int | str, b: int | str) -> bool:
    """``a <= b`` for index values, unknown comparisons counting as consistent."""
    if a == EXCEEDS and b == EXCEEDS:
        return True
    return _rank(a) <= _rank(b)


def analyze_graph(
    g: Graph, max_k: int = DEFAULT_MAX_K, with_construct: bool = False, seed: int | None = None
):
    """Full analysis of one graph; returns ``(record, trace_or_None)``."""
    start = time.perf_counter()
    grp = automorphism_group(g)
    small = small_automorphisms(g, grp)
    d_prime = distinguishing_index(g, max_k, grp=grp, seed=seed)
    d_small = small_distinguishing_index(g, max_k, grp=grp, small=small, seed=seed)
    connected = is_connected(g)
    trace = None
    method = d_small.method
    if with_construct and connected and g.n >= 6:
        _, trace = construct(g, seed=seed, grp=grp)
        method = trace.case
    rec = VerificationRecord(
        graph6=to_graph6(g),
        n=g.n,
        m=g.m,
        aut_order=grp.order,
        small_count=len(small),
        d_prime=d_prime.value,
        d_small=d_small.value,
        method=method,
        connected=connected,
        regular=is_regular(g),
        millis=round((time.perf_counter() - start) * 1000, 3),
    )
    return rec, trace


def has_isolated_edge(g: Graph) -> bool:
    return any(len(c) == 2 for c in connected_components(g))


def claim_applies(claim: str, g: Graph, rec: VerificationRecord) -> bool:
    if claim == "thm1":
        return rec.connected and rec.n >= 6
    if claim == THM1_DISCONNECTED:
        return not rec.connected and rec.n >= 6
    if claim == "kpw3":
        return not has_isolated_edge(g)
    if claim == "regular2":
        return rec.connected and rec.regular and rec.n >= 7
    if claim == "monotone":
        return True
    raise ValueError(f"unknown claim {claim!r}; expected one of {', '.join(CLAIMS)}")


def claim_holds(claim: str, rec: VerificationRecord) -> bool:
    if claim in ("thm1", THM1_DISCONNECTED):
        return isinstance(rec.d_small, int) and rec.d_small <= 2
    if claim == "kpw3":
        return isinstance(rec.d_small, int) and rec.d_small <= 3
    if claim == "regular2":
        return isinstance(rec.d_prime, int) and rec.d_prime <= 2
    if claim == "monotone":
        return index_at_most(rec.d_small, rec.d_prime)
    raise ValueError(f"unknown claim {claim!r}")


@dataclass
class ClaimTally:
    total: int = 0
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    violators: list[str] = field(default_factory=list)
    informational: bool = False


@dataclass
class CorpusSummary:
    total: int
    claims: dict[str, ClaimTally]
    d_prime: dict[str, int]
    d_small: dict[str, int]
    joint: dict[str, int]
    invariant_violations: list[str]
    attaining_d_small_3: list[str]
    construct_cases: dict[str, int] | None = None
    dichotomy_failures: list[str] | None = None

    @property
    def ok(self) -> bool:
        return not self.invariant_violations and all(
            not t.violators for t in self.claims.values() if not t.informational
        )

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = [f"graphs analysed: {self.total}", ""]
        if self.claims:
            lines.append(f"{'claim':<20} {'total':>7} {'pass':>7} {'fail':>7} {'skipped':>8}")
            for name, t in self.claims.items():
                note = "  (informational)" if t.informational else ""
                lines.append(f"{name:<20} {t.total:>7} {t.passed:>7} {t.failed:>7} {t.skipped:>8}{note}")
                for v in t.violators:
                    lines.append(f"  violator: {v}")
            lines.append("")
        for title, table in (("d_prime", self.d_prime), ("d_small", self.d_small)):
            lines.append(f"{title:<10} {'count':>7}")
            for value, count in table.items():
                lines.append(f"{value:<10} {count:>7}")
            lines.append("")
        if self.attaining_d_small_3:
            lines.append(f"d_small = 3 attained by {len(self.attaining_d_small_3)} graphs:")
            lines.extend(f"  {g6}" for g6 in self.attaining_d_small_3)
            lines.append("")
        if self.construct_cases is not None:
            lines.append(f"{'case':<26} {'count':>7}")
            for case, count in self.construct_cases.items():
                lines.append(f"{case:<26} {count:>7}")
            lines.append("")
        if self.dichotomy_failures:
            lines.append("regular orbit components without a distinguishing or two almost-distinguishing colourings:")
            lines.extend(f"  {d}" for d in self.dichotomy_failures)
            lines.append("")
        if self.invariant_violations:
            lines.append("record invariant violations:")
            lines.extend(f"  {v}" for v in self.invariant_violations)
        return "\n".join(lines).rstrip() + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["table", "d_prime", "d_small", "count"])
        for value, count in self.d_prime.items():
            w.writerow(["d_prime", value, "", count])
        for value, count in self.d_small.items():
            w.writerow(["d_small", "", value, count])
        for key, count in self.joint.items():
            dp, ds = key.split("/")
            w.writerow(["joint", dp, ds, count])
        return buf.getvalue()


def _sorted_table(counter: Counter) -> dict[str, int]:
    return {str(k): counter[k] for k in sorted(counter, key=_rank)}


def summarize(
    graphs: Sequence[Graph],
    records: Sequence[VerificationRecord],
    claims: Sequence[str] = (),
    traces: Sequence | None = None,
) -> CorpusSummary:
    tallies = {c: ClaimTally() for c in claims}
    if "thm1" in tallies:
        # the bound is also reported for disconnected graphs, without gating the exit code
        tallies[THM1_DISCONNECTED] = ClaimTally(informational=True)
    dp, ds, joint = Counter(), Counter(), Counter()
    problems, attaining = [], []
    for g, rec in zip(graphs, records):
        dp[rec.d_prime] += 1
        ds[rec.d_small] += 1
        joint[(rec.d_prime, rec.d_small)] += 1
        if rec.d_small == 3:
            attaining.append(rec.graph6)
        problems.extend(f"{rec.graph6}: {p}" for p in record_problems(rec))
        for c, t in tallies.items():
            if not claim_applies(c, g, rec):
                t.skipped += 1
                continue
            t.total += 1
            if claim_holds(c, rec):
                t.passed += 1
            else:
                t.failed += 1
                t.violators.append(rec.graph6)
    joint_table = {
        f"{a}/{b}": joint[(a, b)] for a, b in sorted(joint, key=lambda ab: (_rank(ab[0]), _rank(ab[1])))
    }
    cases = dichotomy = None
    if traces is not None:
        counted = Counter(t.case for t in traces if t is not None)
        cases = {k: counted[k] for k in sorted(counted)}
        dichotomy = [f"{t.graph6}: {comp}" for t in traces if t is not None for comp in t.dichotomy_failures]
    return CorpusSummary(
        total=len(records),
        claims=tallies,
        d_prime=_sorted_table(dp),
        d_small=_sorted_table(ds),
        joint=joint_table,
        invariant_violations=problems,
        attaining_d_small_3=attaining,
        construct_cases=cases,
        dichotomy_failures=dichotomy,
    )


class ResultCache:
    """Append-only NDJSON cache keyed by the exact graph6 string.

    Entries also carry the analysis settings (colour bound, construction
    flag, seed override); a lookup only hits when those match too.
    """

    def __init__(self, directory: str | os.PathLike, settings: dict):
        self.path = Path(directory) / CACHE_FILE
        self.settings = dict(settings)
        self._entries: dict[str, dict] = {}
        self._load()

    def _load(self) -> None:
        if not self.path.exists():
            return
        with self.path.open() as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    entry = json.loads(line)
                    key, settings, rec = entry["key"], entry["settings"], entry["record"]
                    VerificationRecord.from_dict(rec)
                except (ValueError, KeyError, TypeError) as exc:
                    log.warning("skipping corrupt cache line %s:%d (%s)", self.path, lineno, exc)
                    continue
                if settings == self.settings:
                    self._entries[key] = rec

    def lookup(self, key: str) -> VerificationRecord | None:
        rec = self._entries.get(key)
        return None if rec is None else VerificationRecord.from_dict(rec)

    def store(self, key: str, record: VerificationRecord) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        rec = record.to_dict()
        with self.path.open("a") as fh:
            fh.write(json.dumps({"key": key, "settings": self.settings, "record": rec}, sort_keys=True) + "\n")
        self._entries[key] = rec


def resolve_cache_dir(flag: str | None) -> str | None:
    return flag or os.environ.get(CACHE_ENV) or None


def read_corpus(lines: Iterable[str]) -> list[tuple[str, Graph]]:
    out = []
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text:
            continue
        try:
            out.append((text, parse_graph6(text)))
        except ValueError as exc:
            raise ValueError(f"corpus line {lineno}: {exc}") from exc
    return out


def filter_graphs(
    graphs: Iterable[tuple[str, Graph]],
    min_order: int | None = None,
    max_order: int | None = None,
    connected_only: bool = False,
    regular_only: bool = False,
) -> list[tuple[str, Graph]]:
    out = []
    for key, g in graphs:
        if min_order is not None and g.n < min_order:
            continue
        if max_order is not None and g.n > max_order:
            continue
        if connected_only and not is_connected(g):
            continue
        if regular_only and not is_regular(g):
            continue
        out.append((key, g))
    return out


def _work(args):
    g, max_k, with_construct, seed = args
    rec, trace = analyze_graph(g, max_k, with_construct, seed)
    return rec, trace


def run_corpus(
    graphs: Sequence[tuple[str, Graph]],
    max_k: int = DEFAULT_MAX_K,
    jobs: int = 1,
    with_construct: bool = False,
    seed: int | None = None,
    cache: ResultCache | None = None,
):
    """Analyse every graph; results come back in input order.

    Cached records are reused; construction traces are only available for
    freshly computed graphs, so ``--construct`` runs bypass cache hits.
    """
    records: list[VerificationRecord | None] = [None] * len(graphs)
    traces: list = [None] * len(graphs)
    todo = []
    for i, (key, g) in enumerate(graphs):
        hit = cache.lookup(key) if cache is not None and not with_construct else None
        if hit is not None:
            records[i] = hit
        else:
            todo.append(i)
    tasks = [(graphs[i][1], max_k, with_construct, seed) for i in todo]
    if jobs > 1 and len(tasks) > 1:
        with Pool(jobs) as pool:
            results = pool.map(_work, tasks, chunksize=max(1, len(tasks) // (jobs * 8)))
    else:
        results = [_work(t) for t in tasks]
    for i, (rec, trace) in zip(todo, results):
        records[i] = rec
        traces[i] = trace
        if cache is not None:
            cache.store(graphs[i][0], rec)
    return records, traces
