"""Monte Carlo estimates of Pr[G(n,p) |= phi] over a grid of n.

Trial t at size n samples its graph from RngSpec(master_seed, (n << 32) | t),
so adding grid points or trials never changes the graphs of existing
trials.  Results are merged by trial index, which makes reports identical
for any number of workers.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .decider import decide
from .errors import CapExceeded, SemanticsViolation
from .evaluator import Evaluator
from .formula import free_vars, to_text
from .graph import DEFAULT_CAPS, Caps, RngSpec, sample_gnp
from .tensor_eval import TensorEvaluator

ONE, ZERO, INCONCLUSIVE = "ConsistentWithOne", "ConsistentWithZero", "Inconclusive"
CSV_COLUMNS = ("n", "trials", "successes", "estimate", "ci_lo", "ci_hi", "errors")


def wilson(successes: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        return 0.0, 1.0
    phat = successes / trials
    denom = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    # the endpoints are exactly 0 at k = 0 and 1 at k = n; rounding would miss them
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == trials else min(1.0, centre + half)
    return lo, hi


def trial_stream(n: int, trial: int) -> int:
    return (n << 32) | trial


@dataclass
class ProbeConfig:
    formula: object
    p: float
    n_grid: list
    trials: int = 200
    master_seed: int = 0
    caps: Caps = DEFAULT_CAPS
    method: str = "tensor"
    workers: int = 1
    hi: float = 0.95
    lo: float = 0.05

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.n_grid or any(n < 0 for n in self.n_grid):
            raise ValueError("n_grid must be a nonempty list of sizes")
        if free_vars(self.formula):
            raise ValueError(f"not a sentence: free variables {sorted(free_vars(self.formula))}")


@dataclass
class ProbeRow:
    n: int
    trials: int
    successes: int
    errors: int

    @property
    def failures(self) -> int:
        return self.trials - self.successes - self.errors

    @property
    def estimate(self) -> float:
        done = self.trials - self.errors
        return self.successes / done if done else float("nan")

    @property
    def ci(self) -> tuple[float, float]:
        return wilson(self.successes, self.trials - self.errors)


@dataclass
class ProbeReport:
    formula: str
    p: float
    master_seed: int
    rows: list
    classification: str
    decider_verdict: int | None = None
    disagreement: bool | None = None
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "formula": self.formula,
            "p": self.p,
            "master_seed": self.master_seed,
            "classification": self.classification,
            "decider_verdict": self.decider_verdict,
            "disagreement": self.disagreement,
            "rows": [dict(zip(CSV_COLUMNS, _row_values(r))) for r in self.rows],
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([_fmt(v) for v in _row_values(r)])
        return buf.getvalue()


def _row_values(r: ProbeRow) -> tuple:
    lo, hi = r.ci
    return (r.n, r.trials, r.successes, round(r.estimate, 10), round(lo, 10), round(hi, 10), r.errors)


def _fmt(v):
    return repr(v) if isinstance(v, float) else str(v)


def classify(rows: list, hi: float = 0.95, lo: float = 0.05) -> str:
    """Label from the last estimate plus a monotonicity check with CI slack."""
    est = [r.estimate for r in rows]
    cis = [r.ci for r in rows]
    if not rows or any(math.isnan(e) for e in est):
        return INCONCLUSIVE
    # a step breaks monotonicity only if the later interval lies wholly beyond the earlier one
    up = all(cis[i + 1][1] >= cis[i][0] for i in range(len(rows) - 1))
    down = all(cis[i + 1][0] <= cis[i][1] for i in range(len(rows) - 1))
    if est[-1] >= hi and up:
        return ONE
    if est[-1] <= lo and down:
        return ZERO
    return INCONCLUSIVE


def run_trial(formula, n: int, p: float, master_seed: int, trial: int, caps: Caps,
              method: str = "tensor"):
    """True/False, or None when a solver cap was hit."""
    g = sample_gnp(n, p, RngSpec(master_seed, trial_stream(n, trial)))
    ev = TensorEvaluator(g, caps) if method == "tensor" else Evaluator(g, caps)
    try:
        return ev.eval(formula)
    except CapExceeded:
        return None
    except SemanticsViolation as e:
        raise SemanticsViolation(f"{e} [n={n}, trial={trial}, master_seed={master_seed}, "
                                 f"stream={trial_stream(n, trial)}]") from e


def _chunk(args):
    formula, n, p, seed, trials, caps, method = args
    return [run_trial(formula, n, p, seed, t, caps, method) for t in trials]


def probe(cfg: ProbeConfig) -> ProbeReport:
    rows = []
    pool = ProcessPoolExecutor(cfg.workers) if cfg.workers > 1 else None
    try:
        for n in cfg.n_grid:
            idx = list(range(cfg.trials))
            if pool is None:
                results = _chunk((cfg.formula, n, cfg.p, cfg.master_seed, idx, cfg.caps, cfg.method))
            else:
                parts = [idx[i::cfg.workers] for i in range(cfg.workers)]
                outs = list(pool.map(_chunk, [(cfg.formula, n, cfg.p, cfg.master_seed, part,
                                               cfg.caps, cfg.method) for part in parts]))
                results = [None] * cfg.trials
                for part, out in zip(parts, outs):
                    for t, r in zip(part, out):
                        results[t] = r
            succ = sum(1 for r in results if r is True)
            err = sum(1 for r in results if r is None)
            rows.append(ProbeRow(n, cfg.trials, succ, err))
    finally:
        if pool is not None:
            pool.shutdown()
    return ProbeReport(to_text(cfg.formula), cfg.p, cfg.master_seed, rows,
                       classify(rows, cfg.hi, cfg.lo))


def compare_with_decider(cfg: ProbeConfig) -> ProbeReport:
    verdict = decide(cfg.formula).value
    rep = probe(cfg)
    rep.decider_verdict = verdict
    expected = ONE if verdict == 1 else ZERO
    rep.disagreement = rep.classification != expected
    if rep.disagreement:
        rep.notes.append(f"decider says {verdict} but the sample is {rep.classification}")
    return rep


def dclass_campaign(n: int, p: float, alpha: float = 0.0, seeds: int = 30, master_seed: int = 0,
                    subset_size: int = 3) -> dict:
    """|D(m)| and inner-degree statistics over seeded samples."""
    from .ham_arith.dclass import dclass_sample, expected_class_size
    from .ham_arith.repr import check_powerset_repr
    from .graph import DegreeTarget

    target = DegreeTarget(n, p, alpha)
    per_seed = []
    in_tol = total = 0
    for s in range(seeds):
        rng = RngSpec(master_seed, s)
        try:
            pg, st = dclass_sample(n, p, rng, alpha)
        except Exception as e:  # recorded, not fatal
            per_seed.append({"seed": s, "error": f"{type(e).__name__}: {e}"})
            continue
        d = st["size"]
        ok = [abs(x - p * d) <= st["eps"] * p * d for x in st["inner_degrees"]]
        in_tol += sum(ok)
        total += len(ok)
        rec = {"seed": s, "size": d, "degree_in_tolerance": st["degree_in_tolerance"],
               "codegree_in_tolerance": st["codegree_in_tolerance"]}
        if d:
            pick = np.random.Generator(np.random.PCG64(np.random.SeedSequence([master_seed, s, 1])))
            S = sorted(pick.choice(st["D"], size=min(subset_size, d), replace=False).tolist())
            rec["powerset_repr_valid"] = check_powerset_repr(pg, S, exclude_S=True).valid
        per_seed.append(rec)
    sizes = [r["size"] for r in per_seed if "size" in r]
    expected = expected_class_size(n, p, target.m)
    mean = float(np.mean(sizes)) if sizes else float("nan")
    repr_checks = [r["powerset_repr_valid"] for r in per_seed if "powerset_repr_valid" in r]
    return {
        "n": n, "p": p, "alpha": alpha, "seeds": seeds, "master_seed": master_seed,
        "m": target.m, "h": target.h, "eps": target.eps,
        "mean_size": mean, "expected_size": expected,
        "size_ratio": mean / expected if expected else float("nan"),
        "degree_in_tolerance_pooled": in_tol / total if total else None,
        "powerset_repr_valid_fraction": (sum(repr_checks) / len(repr_checks)) if repr_checks else None,
        "per_seed": per_seed,
    }
