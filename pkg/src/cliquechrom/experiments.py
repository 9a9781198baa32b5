"""Seeded experiment cells, campaigns and sweep summaries.

Cell seeds are derived as::

    numpy.random.SeedSequence([base_seed, n, index]).generate_state(1, uint64)[0]

and every cell builds its graph with ``gen_gnp(n, p, make_rng(cell_seed))``,
then keeps drawing from the same generator for any further sampling. A cell
is therefore reproducible from ``(n, p, seed)`` alone.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import __version__
from .certificates import (
    ConstructionFailure,
    ParameterProfile,
    check_lemma21,
    check_lemma22,
    construct_covering_clique,
    is_significant,
    refute_coloring,
    resolve_thresholds,
)
from .cliques import CliqueLimitExceeded, is_maximal_clique
from .coloring import BRUTEFORCE_MAX_N, Coloring, chi_c_bruteforce, chi_c_exact, greedy_clique_coloring, verify_coloring
from .graph import GENERATOR_ID, gen_gnp, make_rng

SCHEMA_VERSION = 1


def derive_seed(base_seed: int, n: int, index: int) -> int:
    state = np.random.SeedSequence([base_seed, n, index]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def make_record(command: str, n, p, seed, payload: dict, profile: Optional[ParameterProfile] = None,
                wall_time: Optional[float] = None, **extra) -> dict:
    rec = {
        "schema": SCHEMA_VERSION,
        "command": command,
        "n": n,
        "p": p,
        "seed": seed,
        "profile": profile.name if profile else None,
        "thresholds": resolve_thresholds(profile, n).to_dict() if profile and n and n >= 2 else None,
        "payload": payload,
        "wall_time": wall_time,
        "generator": GENERATOR_ID,
        "version": __version__,
    }
    rec.update(extra)
    return rec


def run_cells(fn: Callable, cells: Sequence[tuple], jobs: int = 1) -> list:
    """Apply ``fn`` to each argument tuple, in order; a process pool when ``jobs > 1``."""
    if jobs <= 1 or len(cells) <= 1:
        return [fn(*c) for c in cells]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, *zip(*cells)))


# --- sweep --------------------------------------------------------------------------


def sweep_cell(n: int, p: float, seed: int, mode: str, restarts: int = 1,
               node_limit: int = 2_000_000, clique_limit: int = 10**6,
               check_bruteforce: bool = False) -> dict:
    t0 = time.perf_counter()
    gen = make_rng(seed)
    g = gen_gnp(n, p, gen)
    payload: dict = {"mode": mode, "edges": g.n_edges()}
    if mode == "heuristic":
        col = greedy_clique_coloring(g, gen, restarts=restarts)
        payload.update(k=col.k, status="upper_bound", valid=verify_coloring(g, col).valid, coloring=list(col.colors))
    elif mode == "exact":
        try:
            res = chi_c_exact(g, node_limit=node_limit, clique_limit=clique_limit)
        except CliqueLimitExceeded as exc:
            payload.update(k=None, status="clique_limit", valid=None, lower=None, upper=None, error=str(exc))
        else:
            payload.update(
                k=res.k, status=res.status, lower=res.lower, upper=res.upper, nodes=res.nodes,
                hyperedges=res.hyperedges, valid=verify_coloring(g, res.coloring).valid,
                coloring=list(res.coloring.colors),
            )
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if check_bruteforce and n <= BRUTEFORCE_MAX_N:
        payload["k_bruteforce"] = chi_c_bruteforce(g)[0]
    return make_record("sweep", n, p, seed, payload, wall_time=time.perf_counter() - t0)


@dataclass
class SweepSummary:
    per_n: dict = field(default_factory=dict)
    a: Optional[float] = None
    b: Optional[float] = None
    residuals: list = field(default_factory=list)
    fit_status: str = "ok"

    def to_dict(self) -> dict:
        return {
            "per_n": {str(n): v for n, v in self.per_n.items()},
            "a": self.a,
            "b": self.b,
            "residuals": self.residuals,
            "fit_status": self.fit_status,
            "model": "chi_c ~ a*log2(n) + b over per-n sample means",
        }

    def text(self) -> str:
        lines = ["n      count  mean     min  max"]
        for n, s in self.per_n.items():
            mean = "nan" if s["mean"] is None else f"{s['mean']:.3f}"
            lines.append(f"{n:<6} {s['count']:<6} {mean:<8} {s['min']!s:<4} {s['max']!s}")
        if self.a is None:
            lines.append(f"fit: {self.fit_status}")
        else:
            lines.append(f"fit: chi_c ~ {self.a:.4f} * log2(n) + {self.b:.4f}")
        return "\n".join(lines) + "\n"


def summarize_sweep(records: Iterable[dict]) -> SweepSummary:
    """Per-n statistics over cells with a known k, and a least-squares log2(n) fit."""
    by_n: dict[int, list[int]] = {}
    gaps: Counter = Counter()
    for rec in records:
        k = rec["payload"].get("k")
        by_n.setdefault(rec["n"], [])
        if k is None or rec["payload"].get("status") not in ("proved", "upper_bound"):
            gaps[rec["n"]] += 1
        if k is not None:
            by_n[rec["n"]].append(k)
    summary = SweepSummary()
    for n in sorted(by_n):
        ks = by_n[n]
        summary.per_n[n] = {
            "count": len(ks),
            "gaps": gaps[n],
            "mean": sum(ks) / len(ks) if ks else None,
            "min": min(ks, default=None),
            "max": max(ks, default=None),
        }
    pts = [(math.log2(n), s["mean"]) for n, s in summary.per_n.items() if s["mean"] is not None]
    if len({x for x, _ in pts}) < 2:
        summary.fit_status = "underdetermined: fewer than two grid points"
        return summary
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    design = np.column_stack([x, np.ones_like(x)])
    (a, b), *_ = np.linalg.lstsq(design, y, rcond=None)
    summary.a, summary.b = float(a), float(b)
    summary.residuals = [float(v) for v in y - (a * x + b)]
    return summary


def gnuplot_script(csv_path: str) -> str:
    return (
        "set datafile separator ','\n"
        "set key autotitle columnhead\n"
        "set logscale x 2\n"
        "set xlabel 'n'\nset ylabel 'chi_c'\n"
        f"plot '{csv_path}' using (column('n')):(column('payload.k')) with points title 'samples'\n"
    )


# --- certify campaign -----------------------------------------------------------------


def _random_partition(n: int, classes: int, gen: np.random.Generator) -> list[int]:
    """Balanced random colouring with exactly ``classes`` colours."""
    colors = [0] * n
    for pos, v in enumerate(gen.permutation(n)):
        colors[int(v)] = pos % classes
    return colors


def certify_cell(n: int, p: float, seed: int, profile: ParameterProfile, halves: int = 5,
                 trials: int = 200, effort: int = 200_000) -> dict:
    t0 = time.perf_counter()
    gen = make_rng(seed)
    g = gen_gnp(n, p, gen)
    th = resolve_thresholds(profile, n)

    l21 = check_lemma21(g, profile, mode="sampled", trials=trials, rng=gen)
    halves_out = []
    for _ in range(halves):
        y = sum(1 << int(v) for v in gen.permutation(n)[: n // 2])
        l22 = check_lemma22(g, y, profile)
        sig = is_significant(g, y, profile)
        entry = {"lemma22_holds": l22.holds, "bad": len(l22.bad), "significant": sig.significant,
                 "condition1": sig.condition1_met, "condition2": sig.condition2_met}
        if sig.significant:
            built = construct_covering_clique(g, y, profile, gen, effort)
            if isinstance(built, ConstructionFailure):
                entry.update(construction="failed", stage=built.stage, reason=built.reason)
            else:
                entry.update(construction="ok", witness_problems=built.problems(g), witness=built.to_dict())
        halves_out.append(entry)

    refutations = []
    for classes in range(2, max(2, th.s_max) + 1):
        col = Coloring(tuple(_random_partition(n, classes, gen)), classes)
        out = refute_coloring(g, col, profile, gen, effort, fallback=True)
        entry = {"classes": classes, "stage": out.stage, "via": out.via,
                 "failure": list(out.failure) if out.failure else None,
                 "witness": out.witness.sorted() if out.witness is not None else None}
        if out.witness is not None:
            (colour,) = {col.colors[v] for v in out.witness} or {None}
            entry["witness_sound"] = (
                colour is not None
                and len(out.witness) >= 2
                and bool(is_maximal_clique(g, out.witness))
                and not verify_coloring(g, col, only_color=colour).valid
            )
        refutations.append(entry)

    payload = {"lemma21": l21.to_dict(), "halves": halves_out, "refutations": refutations}
    return make_record("certify", n, p, seed, payload, profile, wall_time=time.perf_counter() - t0)


def summarize_certify(records: Sequence[dict]) -> dict:
    halves = [h for r in records for h in r["payload"]["halves"]]
    refs = [x for r in records for x in r["payload"]["refutations"]]
    built = [h for h in halves if h.get("construction") == "ok"]
    stages = Counter(h.get("stage", "ok") for h in halves if "construction" in h)
    ref_stages = Counter((x["failure"][0] if x["failure"] else "none") for x in refs)
    witnessed = [x for x in refs if x["witness"] is not None]
    return {
        "graphs": len(records),
        "lemma21_holds": sum(r["payload"]["lemma21"]["holds"] for r in records),
        "halves": len(halves),
        "lemma22_holds": sum(h["lemma22_holds"] for h in halves),
        "significant": sum(h["significant"] for h in halves),
        "constructions_attempted": sum("construction" in h for h in halves),
        "constructions_ok": len(built),
        "construction_stage_histogram": dict(sorted(stages.items())),
        "witnesses_sound": sum(not h["witness_problems"] for h in built),
        "refutations": len(refs),
        "refutation_pipeline_failures": dict(sorted(ref_stages.items())),
        "refutation_witnesses": len(witnessed),
        "refutation_witnesses_via_pipeline": sum(x["via"] == "pipeline" for x in witnessed),
        "refutation_witnesses_sound": sum(bool(x.get("witness_sound")) for x in witnessed),
    }


# --- output ---------------------------------------------------------------------------


def dumps_jsonl(records: Iterable[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)


def loads_jsonl(text: str) -> list[dict]:
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for key, val in d.items():
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            out.update(_flatten(val, name + "."))
        elif isinstance(val, list):
            out[name] = json.dumps(val)
        else:
            out[name] = val
    return out


SWEEP_COLUMNS = ("schema", "command", "n", "p", "seed", "payload.mode", "payload.k", "payload.status",
                 "payload.valid", "payload.edges", "payload.k_bruteforce", "wall_time", "generator", "version")


def dumps_csv(records: Sequence[dict], columns: Optional[Sequence[str]] = None) -> str:
    flat = [_flatten(r) for r in records]
    if columns is None:
        columns = []
        for row in flat:
            columns += [c for c in row if c not in columns]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for row in flat:
        w.writerow({c: row.get(c, "") for c in columns})
    return buf.getvalue()
