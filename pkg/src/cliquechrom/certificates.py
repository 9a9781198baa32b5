"""Deterministic certificates for the χ_c(G(n,1/2)) = Ω(log n) argument.

Each random-graph property used by the lower-bound proof is exposed as a
check on a concrete graph, the covering-clique existence statement gets a
constructive search, and the final contradiction becomes a procedure that
hunts for a monochromatic maximal clique in a given colouring.

All thresholds come from a :class:`ParameterProfile`. ``PAPER`` carries the
asymptotic constants, which are vacuous for any graph that fits in memory;
``DESK`` keeps the structure of every check but rescales the constants so
they bite at n in the hundreds.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
from dataclasses import dataclass, field
from typing import Literal, Optional, Union

import numpy as np

from .cliques import extend_to_maximal, is_maximal_clique
from .coloring import Coloring, verify_coloring
from .graph import Graph, VertexLike, VertexSet, _rng, as_mask, iter_bits, lowest_bit


@dataclass(frozen=True)
class ParameterProfile:
    name: str = "paper"
    class_coeff: float = 1 / 2000
    indep_exp: float = 0.999
    indep_exp_hi: float = 0.9995
    bad_frac: float = 0.41
    bad_frac_after: float = 0.405
    bad_count_coeff: float = 0.25
    k_coeff: float = 1.9
    s_coeff: float = 1.65
    m_exp: float = 0.99
    z_hit_frac: float = 0.4
    miss_base: float = 0.6
    # Desk-scale replacements: when set, n^indep_exp becomes indep_frac * |set|
    # and m becomes floor(m_frac * |Y| / k).
    indep_frac: Optional[float] = None
    m_frac: Optional[float] = None

    def __post_init__(self):
        errs = []
        if not math.isclose(self.k_coeff, self.bad_count_coeff + self.s_coeff, abs_tol=1e-9):
            errs.append("k_coeff must equal bad_count_coeff + s_coeff")
        if not 0 < self.bad_frac_after < self.bad_frac < 0.5:
            errs.append("need 0 < bad_frac_after < bad_frac < 1/2")
        if not math.isclose(self.z_hit_frac + self.miss_base, 1.0, abs_tol=1e-9):
            errs.append("z_hit_frac + miss_base must equal 1")
        for name in ("indep_exp", "indep_exp_hi", "m_exp"):
            if not 0 < getattr(self, name) < 1:
                errs.append(f"{name} must lie in (0, 1)")
        for name in ("class_coeff", "bad_count_coeff", "k_coeff", "s_coeff", "z_hit_frac"):
            if getattr(self, name) <= 0:
                errs.append(f"{name} must be positive")
        if self.indep_frac is not None and not 0 < self.indep_frac < 1:
            errs.append("indep_frac must lie in (0, 1)")
        if self.m_frac is not None and not 0 < self.m_frac <= 1:
            errs.append("m_frac must lie in (0, 1]")
        if errs:
            raise ValueError("invalid profile: " + "; ".join(errs))

    def replace(self, **changes) -> "ParameterProfile":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def dumps(self) -> str:
        return "".join(f"{k}={'' if v is None else v}\n" for k, v in self.to_dict().items())

    @classmethod
    def loads(cls, text: str) -> "ParameterProfile":
        """Parse ``key=value`` lines; unspecified keys keep the asymptotic defaults."""
        fields = {f.name: f for f in dataclasses.fields(cls)}
        kw: dict = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = (part.strip() for part in line.partition("="))
            if not sep or key not in fields:
                raise ValueError(f"profile line {lineno}: unknown or malformed entry {raw!r}")
            if key == "name":
                kw[key] = value
            elif value in ("", "None", "none"):
                kw[key] = None
            else:
                kw[key] = float(value)
        kw.setdefault("name", "file")
        return cls(**kw)


PAPER = ParameterProfile()
DESK = ParameterProfile(
    name="desk",
    class_coeff=0.25,
    k_coeff=1.0,
    s_coeff=0.75,
    z_hit_frac=0.1,
    miss_base=0.9,
    indep_frac=0.05,
    m_frac=0.5,
)
PROFILES = {"paper": PAPER, "desk": DESK}


def get_profile(name_or_path: str) -> ParameterProfile:
    if name_or_path in PROFILES:
        return PROFILES[name_or_path]
    with open(name_or_path) as fh:
        return ParameterProfile.loads(fh.read())


def _ceil(x: float) -> int:
    # guards 1.9 * 20 -> 37.99999... style float noise
    return math.ceil(x - 1e-9)


@dataclass(frozen=True)
class Thresholds:
    n: int
    y_size: Optional[int]
    s_max: int
    indep_threshold: int
    sig_nonneighbor: int
    bad_cap: int
    k: int
    r: int
    s: int
    m: int

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def resolve_thresholds(profile: ParameterProfile, n: int, y_size: Optional[int] = None) -> Thresholds:
    """Integer thresholds at a concrete n; every real quantity is rounded up.

    Desk profiles replace ``n^indep_exp`` by ``indep_frac`` times the relevant
    set size (``n`` for the independence check, ``|Y|`` for significance) and
    set ``m = floor(m_frac * |Y| / k)``. Without ``y_size`` the set size
    defaults to ``n``.
    """
    if n < 2:
        raise ValueError("thresholds need n >= 2")
    lg = math.log2(n)
    ys = n if y_size is None else y_size
    k = max(1, _ceil(profile.k_coeff * lg))
    r = _ceil(profile.bad_count_coeff * lg)
    if profile.indep_frac is None:
        indep = _ceil(n**profile.indep_exp * lg)
        sig = _ceil(n**profile.indep_exp)
    else:
        indep = _ceil(profile.indep_frac * n)
        sig = _ceil(profile.indep_frac * ys)
    if profile.m_frac is None:
        m = _ceil(n**profile.m_exp)
    else:
        m = math.floor(profile.m_frac * ys / k + 1e-9)
    return Thresholds(
        n=n,
        y_size=y_size,
        s_max=max(1, _ceil(profile.class_coeff * lg)),
        indep_threshold=indep,
        sig_nonneighbor=sig,
        bad_cap=_ceil(profile.bad_count_coeff * lg),
        k=k,
        r=r,
        s=max(0, k - r),
        m=m,
    )


# --- independence property -------------------------------------------------------


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class IndependenceReport:
    mode: str
    s_max: int
    threshold: int
    examined: int
    min_count: int
    worst_set: VertexSet
    holds: bool

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["worst_set"] = self.worst_set.sorted()
        return d


def check_lemma21(
    g: Graph,
    profile: ParameterProfile,
    mode: Literal["exhaustive", "sampled"] = "sampled",
    s_max: Optional[int] = None,
    trials: int = 200,
    rng=0,
    budget: int = 2_000_000,
    threshold: Optional[int] = None,
) -> IndependenceReport:
    """Smallest number of vertices adjacent to nothing in S, over sets |S| <= s_max.

    The property holds when that minimum is strictly above the threshold.
    Exhaustive mode scans every S; sampled mode draws ``trials`` uniform sets
    of each size 1..s_max.
    """
    th = resolve_thresholds(profile, g.n)
    s_max = th.s_max if s_max is None else s_max
    threshold = th.indep_threshold if threshold is None else threshold
    closed = [g.adj[v] | 1 << v for v in range(g.n)]
    best, worst, examined = g.n, 0, 0

    def visit(vs):
        nonlocal best, worst, examined
        covered = 0
        for v in vs:
            covered |= closed[v]
        count = g.n - covered.bit_count()
        examined += 1
        if count < best:
            best = count
            worst = sum(1 << v for v in vs)

    if mode == "exhaustive":
        total = sum(math.comb(g.n, s) for s in range(1, s_max + 1))
        if total > budget:
            raise BudgetExceeded(f"exhaustive scan needs {total} sets, budget {budget}")
        for s in range(1, s_max + 1):
            for vs in itertools.combinations(range(g.n), s):
                visit(vs)
    elif mode == "sampled":
        gen = _rng(rng)
        for s in range(1, min(s_max, g.n) + 1):
            for _ in range(trials):
                visit(gen.choice(g.n, size=s, replace=False).tolist())
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return IndependenceReport(mode, s_max, threshold, examined, best, VertexSet(worst), best > threshold)


# --- few-dense-neighbours property and significance ------------------------------


def _check_y(g: Graph, y: int) -> None:
    if not y:
        raise ValueError("Y must be nonempty")
    if y & ~g.all:
        raise ValueError("Y contains vertices outside the graph")
    if y == g.all:
        raise ValueError("Y must be a proper subset of V")


def bad_vertices(g: Graph, y: VertexLike, bad_frac: float) -> VertexSet:
    """Vertices outside Y with at most ``bad_frac * |Y|`` non-neighbours in Y."""
    ym = as_mask(y)
    limit = bad_frac * ym.bit_count()
    bad = 0
    for v in iter_bits(g.all & ~ym):
        if (ym & ~g.adj[v]).bit_count() <= limit + 1e-9:
            bad |= 1 << v
    return VertexSet(bad)


@dataclass(frozen=True)
class DenseNeighbourResult:
    bad: VertexSet
    holds: bool
    cap: int

    def __iter__(self):
        return iter((self.bad, self.holds))


def check_lemma22(g: Graph, y: VertexLike, profile: ParameterProfile) -> DenseNeighbourResult:
    """Outside vertices with few non-neighbours in Y must be fewer than the cap."""
    ym = as_mask(y)
    _check_y(g, ym)
    cap = resolve_thresholds(profile, g.n, ym.bit_count()).bad_cap
    bad = bad_vertices(g, ym, profile.bad_frac)
    return DenseNeighbourResult(bad, len(bad) < cap, cap)


@dataclass(frozen=True)
class SignificanceReport:
    y_size: int
    min_nonneighbors: int
    bad_vertices: VertexSet
    condition1_met: bool
    condition2_met: bool
    sig_nonneighbor: int
    bad_cap: int
    bad_frac: float

    @property
    def significant(self) -> bool:
        return self.condition1_met and self.condition2_met

    def __bool__(self) -> bool:
        return self.significant

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["bad_vertices"] = self.bad_vertices.sorted()
        d["significant"] = self.significant
        return d


def is_significant(g: Graph, y: VertexLike, profile: ParameterProfile) -> SignificanceReport:
    ym = as_mask(y)
    _check_y(g, ym)
    th = resolve_thresholds(profile, g.n, ym.bit_count())
    min_nn = min((ym & ~g.adj[v]).bit_count() for v in iter_bits(g.all & ~ym))
    bad = bad_vertices(g, ym, profile.bad_frac)
    return SignificanceReport(
        y_size=ym.bit_count(),
        min_nonneighbors=min_nn,
        bad_vertices=bad,
        condition1_met=min_nn >= th.sig_nonneighbor,
        condition2_met=len(bad) <= th.bad_cap,
        sig_nonneighbor=th.sig_nonneighbor,
        bad_cap=th.bad_cap,
        bad_frac=profile.bad_frac,
    )


# --- covering clique construction ---------------------------------------------------


class NotSignificant(ValueError):
    def __init__(self, report: SignificanceReport):
        super().__init__("the set is not significant")
        self.report = report


def _lowest_bits(mask: int, count: int) -> int:
    out = 0
    for _ in range(count):
        low = mask & -mask
        out |= low
        mask ^= low
    return out


@dataclass
class CliqueWitness:
    clique: VertexSet
    coverage: dict[int, int]
    b_vertices: list[int]
    z_sets: list[VertexSet]
    y: VertexSet
    m: int
    sample_attempts: int = 0
    search_nodes: int = 0
    transversals_rejected: int = 0

    def problems(self, g: Graph) -> list[str]:
        """Re-check every structural invariant; an empty list means sound."""
        out = []
        k, y = self.clique.mask, self.y.mask
        if not g.is_clique(k):
            out.append("clique: missing edge")
        if k & ~y:
            out.append("clique: leaves Y")
        seen = 0
        for i, z in enumerate(self.z_sets):
            if len(z) != self.m:
                out.append(f"z[{i}]: size {len(z)} != m={self.m}")
            if z.mask & seen:
                out.append(f"z[{i}]: overlaps an earlier set")
            if z.mask & ~y:
                out.append(f"z[{i}]: leaves Y")
            if (z.mask & k).bit_count() != 1:
                out.append(f"z[{i}]: clique meets it {(z.mask & k).bit_count()} times")
            seen |= z.mask
        if len(self.clique) != len(self.z_sets):
            out.append("clique: not a transversal of the Z-system")
        for b, z in zip(self.b_vertices, self.z_sets):
            if z.mask & g.adj[b]:
                out.append(f"z for b={b}: contains a neighbour of b")
        outside = g.all & ~y
        if set(self.coverage) != set(iter_bits(outside)):
            out.append("coverage: not total over V - Y")
        for v, u in self.coverage.items():
            if not k >> u & 1:
                out.append(f"coverage[{v}]: {u} is not in the clique")
            elif g.has_edge(u, v):
                out.append(f"coverage[{v}]: {u} is a neighbour")
        return out

    def to_dict(self) -> dict:
        return {
            "clique": self.clique.sorted(),
            "coverage": {str(v): u for v, u in sorted(self.coverage.items())},
            "b_vertices": self.b_vertices,
            "z_sets": [z.sorted() for z in self.z_sets],
            "m": self.m,
            "sample_attempts": self.sample_attempts,
            "search_nodes": self.search_nodes,
            "transversals_rejected": self.transversals_rejected,
        }


Stage = Literal["select_b", "carve_b", "sample_z", "transversal_search", "coverage"]


@dataclass(frozen=True)
class ConstructionFailure:
    stage: Stage
    reason: str

    def __bool__(self) -> bool:
        return False

    def to_dict(self) -> dict:
        return {"failure": self.stage, "reason": self.reason}


def _transversal_cliques(adj, zs: list[int], gen: np.random.Generator, budget: list[int]):
    """Yield cliques with exactly one vertex in each mask of ``zs``, within ``budget`` nodes."""

    def rec(chosen: int, cands: list[int]):
        if not cands:
            yield chosen
            return
        j = min(range(len(cands)), key=lambda i: (cands[i].bit_count(), i))
        members = list(iter_bits(cands[j]))
        gen.shuffle(members)
        rest = cands[:j] + cands[j + 1 :]
        for v in members:
            if budget[0] <= 0:
                return
            budget[0] -= 1
            nv = adj[v]
            nxt = [c & nv for c in rest]
            if all(nxt):
                yield from rec(chosen | 1 << v, nxt)

    yield from rec(0, list(zs))


def construct_covering_clique(
    g: Graph,
    y: VertexLike,
    profile: ParameterProfile,
    rng=0,
    effort: int = 200_000,
    retry_cap: int = 200,
) -> Union[CliqueWitness, ConstructionFailure]:
    """Build a clique K inside a significant Y with a non-neighbour of every outside vertex.

    K is a transversal of disjoint sets Z_1..Z_k of size m inside Y: the
    first r are carved from the non-neighbourhoods of a set B of r outside
    vertices that have few non-neighbours in Y, the remaining s are random
    disjoint m-subsets of what is left, resampled until every other outside
    vertex has at least ``z_hit_frac * m`` non-neighbours in each. Transversal
    cliques are then searched (budget ``effort`` nodes) until one covers every
    outside vertex. Raises :class:`NotSignificant` if Y is not significant.
    """
    ym = as_mask(y)
    report = is_significant(g, ym, profile)
    if not report.significant:
        raise NotSignificant(report)
    gen = _rng(rng)
    adj = g.adj
    th = resolve_thresholds(profile, g.n, ym.bit_count())
    k, r, s, m = th.k, min(th.r, th.k), th.k - min(th.r, th.k), th.m
    outside = g.all & ~ym

    if m < 1:
        return ConstructionFailure("carve_b", f"m={m} leaves no room for the Z-sets")
    if k * m > ym.bit_count():
        return ConstructionFailure("carve_b", f"k*m={k * m} exceeds |Y|={ym.bit_count()}")

    # stage 1: B = all bad vertices, padded by fewest non-neighbours then index
    b_mask = report.bad_vertices.mask
    if b_mask.bit_count() > r:
        return ConstructionFailure("select_b", f"{b_mask.bit_count()} bad vertices exceed r={r}")
    if outside.bit_count() < r:
        return ConstructionFailure("select_b", f"only {outside.bit_count()} vertices outside Y, r={r}")
    pad = sorted(iter_bits(outside & ~b_mask), key=lambda v: ((ym & ~adj[v]).bit_count(), v))
    for v in pad[: r - b_mask.bit_count()]:
        b_mask |= 1 << v
    b_list = list(iter_bits(b_mask))

    # stage 2: disjoint m-subsets of each B-vertex's non-neighbours in Y
    used = 0
    zs: list[int] = []
    for b in b_list:
        avail = ym & ~adj[b] & ~used
        if avail.bit_count() < m:
            return ConstructionFailure("carve_b", f"vertex {b} has only {avail.bit_count()} free non-neighbours")
        z = _lowest_bits(avail, m)
        zs.append(z)
        used |= z

    # stage 3: random disjoint Z-sets hit by every remaining outside vertex
    y_rest = list(iter_bits(ym & ~used))
    if s * m > len(y_rest):
        return ConstructionFailure("sample_z", f"Y' has {len(y_rest)} vertices, need {s * m}")
    others = list(iter_bits(outside & ~b_mask))
    need = profile.z_hit_frac * m
    sampled = None
    attempts = 0
    for attempts in range(1, retry_cap + 1):
        perm = gen.permutation(len(y_rest))
        cand = []
        for j in range(s):
            z = 0
            for idx in perm[j * m : (j + 1) * m]:
                z |= 1 << y_rest[idx]
            cand.append(z)
        if all((z & ~adj[v]).bit_count() >= need - 1e-9 for v in others for z in cand):
            sampled = cand
            break
    if sampled is None:
        return ConstructionFailure("sample_z", f"no admissible Z-system in {retry_cap} attempts")
    zs += sampled

    # stage 4/5: transversal clique covering V - Y
    budget = [effort]
    rejected = 0
    for clique in _transversal_cliques(adj, zs, gen, budget):
        if all(clique & ~adj[v] for v in iter_bits(outside)):
            coverage = {v: lowest_bit(clique & ~adj[v]) for v in iter_bits(outside)}
            return CliqueWitness(
                clique=VertexSet(clique),
                coverage=coverage,
                b_vertices=b_list,
                z_sets=[VertexSet(z) for z in zs],
                y=VertexSet(ym),
                m=m,
                sample_attempts=attempts,
                search_nodes=effort - budget[0],
                transversals_rejected=rejected,
            )
        rejected += 1
    if rejected:
        return ConstructionFailure("coverage", f"{rejected} transversal clique(s) found, none covers V - Y")
    exhausted = budget[0] <= 0
    return ConstructionFailure(
        "transversal_search",
        "search budget exhausted" if exhausted else "no transversal clique exists",
    )


# --- refuting a colouring ------------------------------------------------------------


RefutationStage = Literal[
    "start", "picked_representatives", "found_significant_class", "built_clique", "extended_maximal", "witness_found"
]


@dataclass
class RefutationOutcome:
    stage: RefutationStage
    failure: Optional[tuple[str, str]] = None
    n_classes: int = 0
    s_max: int = 0
    out_of_regime: bool = False
    representatives: list[tuple[int, int]] = field(default_factory=list)
    uncovered_by_representatives: Optional[int] = None
    chosen_class: Optional[int] = None
    significance: Optional[SignificanceReport] = None
    covering: Optional[CliqueWitness] = None
    witness: Optional[VertexSet] = None
    via: Optional[str] = None

    @property
    def found(self) -> bool:
        return self.stage == "witness_found"

    def to_dict(self) -> dict:
        return {
            "stage": self.stage,
            "failure": list(self.failure) if self.failure else None,
            "n_classes": self.n_classes,
            "s_max": self.s_max,
            "out_of_regime": self.out_of_regime,
            "representatives": [list(p) for p in self.representatives],
            "uncovered_by_representatives": self.uncovered_by_representatives,
            "chosen_class": self.chosen_class,
            "significance": self.significance.to_dict() if self.significance else None,
            "covering": self.covering.to_dict() if self.covering else None,
            "witness": self.witness.sorted() if self.witness is not None else None,
            "via": self.via,
        }


def refute_coloring(
    g: Graph,
    c: Coloring,
    profile: ParameterProfile,
    rng=0,
    effort: int = 200_000,
    fallback: bool = False,
) -> RefutationOutcome:
    """Run the contradiction argument against a colouring and report how far it gets.

    Per class pick the outside vertex with fewest non-neighbours inside it
    (lowest index on ties), take the class where that count is largest, test
    it for significance, build a covering clique in it and extend that to a
    maximal clique, which then has to lie inside the class. With
    ``fallback=True`` a pipeline failure is followed by a plain
    :func:`verify_coloring` search; ``via`` says which route produced the
    witness.
    """
    if c.n != g.n:
        raise ValueError(f"coloring covers {c.n} vertices, graph has {g.n}")
    gen = _rng(rng)
    classes = [m for m in c.class_masks() if m]
    th = resolve_thresholds(profile, g.n)
    out = RefutationOutcome("start", n_classes=len(classes), s_max=th.s_max, out_of_regime=len(classes) > th.s_max)

    def finish(stage: str, reason: str) -> RefutationOutcome:
        out.failure = (stage, reason)
        if fallback:
            verdict = verify_coloring(g, c)
            if not verdict.valid:
                out.stage, out.witness, out.via = "witness_found", verdict.witness, "verify"
        return out

    if len(classes) == 1:
        verdict = verify_coloring(g, c)
        if verdict.valid:
            out.failure = ("picked_representatives", "single class on an edgeless graph")
            return out
        out.stage, out.witness, out.via = "witness_found", verdict.witness, "verify"
        return out

    reps = []
    for cls in classes:
        best_v, best_t = -1, g.n + 1
        for v in iter_bits(g.all & ~cls):
            t = (cls & ~g.adj[v]).bit_count()
            if t < best_t:
                best_v, best_t = v, t
        reps.append((best_v, best_t))
    out.representatives = reps
    out.stage = "picked_representatives"
    s_mask = sum(1 << v for v, _ in set(reps))
    covered = s_mask
    for v in iter_bits(s_mask):
        covered |= g.adj[v]
    out.uncovered_by_representatives = (g.all & ~covered).bit_count()

    i = max(range(len(reps)), key=lambda j: (reps[j][1], -j))
    out.chosen_class = c.colors[lowest_bit(classes[i])]
    y = classes[i]
    sig_need = resolve_thresholds(profile, g.n, y.bit_count()).sig_nonneighbor
    if reps[i][1] < sig_need:
        return finish("found_significant_class", f"averaging step: max t={reps[i][1]} < {sig_need}")
    report = is_significant(g, y, profile)
    out.significance = report
    if not report.significant:
        which = "condition 1" if not report.condition1_met else "condition 2"
        return finish("found_significant_class", f"class {out.chosen_class} fails {which}")
    out.stage = "found_significant_class"

    built = construct_covering_clique(g, y, profile, gen, effort)
    if isinstance(built, ConstructionFailure):
        return finish("built_clique", f"{built.stage}: {built.reason}")
    out.covering = built
    out.stage = "built_clique"

    k_max = extend_to_maximal(g, built.clique, gen)
    out.stage = "extended_maximal"
    if k_max.mask & ~y or not is_maximal_clique(g, k_max) or len(k_max) < 2:
        return finish("extended_maximal", "extended clique escaped the class")
    out.stage, out.witness, out.via = "witness_found", k_max, "pipeline"
    return out
