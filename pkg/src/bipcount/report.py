"""Experiment orchestration and the JSON run report.

A config names a graph (sampled, inline or from a file) and a list of tasks,
or an expander sweep over sampled graphs.  Every run yields a
:class:`RunReport`; two runs of the same config differ only in their
``timings`` fields.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

from .coloring import ColorClass, algorithm2, build_coloring_model, colorings_cluster_via_polymers
from .driver import AlgorithmConfig
from .errors import PreconditionError
from .expansion import BRUTE_FORCE, Estimate, estimate_log_xi
from .generate import GENERATOR_VERSION, SampleConfig, sample_graph
from .graph import BipartiteGraph, L, R, build_graph, read_graph
from .hardcore import HardcoreParams, algorithm1, build_hardcore_model
from .numbers import as_fraction, frac_str, log_fraction
from .oracle import (OracleBudget, count_colorings, count_colorings_cluster, count_is,
                     count_is_cluster)
from .polymer import DEFAULT_BUDGET, kp_check, kp_parameter, xi_exact
from .properties import (DEFAULT_EXACT_BUDGET, Regime, beta_minus_one_expansion_holds,
                         has_cover_property, is_expander, regime_parameters)

SCHEMA_VERSION = "bipcount-report/1"


@dataclass
class RunReport:
    config: dict
    seed: Optional[int] = None
    schema_version: str = SCHEMA_VERSION
    generator: str = GENERATOR_VERSION
    graph_fingerprint: Optional[str] = None
    verdicts: dict = field(default_factory=dict)
    estimates: dict = field(default_factory=dict)
    oracle: dict = field(default_factory=dict)
    relative_errors: dict = field(default_factory=dict)
    sweep: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "RunReport":
        if data.get("schema_version") != SCHEMA_VERSION:
            raise PreconditionError(f"unsupported report schema {data.get('schema_version')!r}")
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls.from_dict(json.loads(text))

    def canonical(self) -> dict:
        """The report with every ``timings`` entry removed, for comparisons."""
        return _strip_timings(self.to_dict())


def _strip_timings(obj):
    if isinstance(obj, dict):
        return {k: _strip_timings(v) for k, v in obj.items() if k != "timings"}
    if isinstance(obj, list):
        return [_strip_timings(v) for v in obj]
    return obj


# -- graph specs ----------------------------------------------------------------

def load_graph(spec: dict, seed: Optional[int] = None) -> BipartiteGraph:
    if "path" in spec:
        return read_graph(spec["path"])
    if "matchings" in spec:
        return build_graph(int(spec["n"]), int(spec["delta"]), spec["matchings"])
    s = spec.get("seed", seed if seed is not None else 0)
    return sample_graph(SampleConfig(int(spec["n"]), int(spec["delta"]), int(s)))


def _algo_config(task: dict, budget: int) -> AlgorithmConfig:
    return AlgorithmConfig(
        n_threshold=task.get("n_threshold", 24),
        c_constant=task.get("c_constant", 1.01),
        alpha=None if task.get("alpha") is None else as_fraction(task["alpha"]),
        alpha_n=task.get("alpha_n"),
        m_override=task.get("m"),
        radius=task.get("radius"),
        branch=task.get("branch", "auto"),
        force=bool(task.get("force", False)),
        budget=budget,
    )


# -- tasks ---------------------------------------------------------------------

def _compare(report: RunReport, key: str, est: Estimate, exact: Fraction, eps: float, guaranteed: bool):
    if exact <= 0:
        return
    err = abs(float(est.log_value - log_fraction(exact)))
    report.relative_errors[key] = {"abs_log_error": err, "eps": eps, "within_eps": err <= eps}
    if guaranteed and err > eps:
        report.violations.append(f"{key}: |log Z_hat - log Z| = {err:.3g} exceeds eps = {eps}")


def _is_guaranteed(est: Estimate, cfg: AlgorithmConfig) -> bool:
    return est.method == BRUTE_FORCE or (est.certified and not cfg.force)


def _task_count_is(G, task, report, budget, oracle_budget):
    lam = as_fraction(task.get("lambda", 1))
    eps = float(task.get("eps", 0.1))
    cfg = _algo_config(task, budget)
    t0 = time.perf_counter()
    est = algorithm1(G, lam, eps, cfg)
    report.timings["count-is"] = time.perf_counter() - t0
    report.estimates["count-is"] = est.to_dict()
    if task.get("oracle", True):
        Z = count_is(G, lam, oracle_budget)
        report.oracle["Z"] = frac_str(Z)
        _compare(report, "count-is", est, Z, eps, _is_guaranteed(est, cfg))


def _task_count_colorings(G, task, report, budget, oracle_budget):
    q = int(task["q"])
    eps = float(task.get("eps", 0.1))
    cfg = _algo_config(task, budget)
    t0 = time.perf_counter()
    est = algorithm2(G, q, eps, cfg)
    report.timings["count-colorings"] = time.perf_counter() - t0
    report.estimates["count-colorings"] = est.to_dict()
    if task.get("oracle", True):
        C = count_colorings(G, q, oracle_budget)
        report.oracle["colorings"] = str(C)
        _compare(report, "count-colorings", est, Fraction(C), eps, _is_guaranteed(est, cfg))


def property_checks(G: BipartiteGraph, regime: str, mode="exact", q: Optional[int] = None,
                    force: bool = False, alpha=None, beta=None, budget: int = DEFAULT_EXACT_BUDGET,
                    seed: int = 0) -> dict:
    """The structural checks each regime relies on, at that regime's parameters."""
    params = regime_parameters(regime, G.delta, q=q, force=force)
    a = params.alpha if alpha is None else as_fraction(alpha)
    b = params.beta if beta is None else as_fraction(beta)
    out = {"params": {"alpha": str(a), "beta": str(b), "regime": params.mode.value}}
    out["expander"] = is_expander(G, a, b, mode, budget, seed).to_dict()
    if params.mode is Regime.IS_LOW:
        out["cover"] = has_cover_property(G, a, a, mode, budget, seed).to_dict()
    if params.mode is Regime.COLORING:
        out["beta_minus_one"] = beta_minus_one_expansion_holds(G, a, b, mode, budget, seed).to_dict()
        out["cover"] = has_cover_property(G, params.s, as_fraction(a) / q, mode, budget, seed).to_dict()
    return out


def _task_props(G, task, report, budget, seed):
    t0 = time.perf_counter()
    report.verdicts[task.get("regime", "is-high")] = property_checks(
        G, task.get("regime", "is-high"), task.get("mode", "exact"), task.get("q"),
        bool(task.get("force", False)), task.get("alpha"), task.get("beta"),
        task.get("budget", DEFAULT_EXACT_BUDGET), seed)
    report.timings["props"] = time.perf_counter() - t0


def model_from_task(G: BipartiteGraph, task: dict):
    """A hardcore or coloring polymer model from CLI-style task fields."""
    alpha_n = task.get("alpha_n")
    if task.get("model", "hardcore") == "hardcore":
        side = task.get("side", L)
        cap = alpha_n if alpha_n is not None else G.n + 1
        return build_hardcore_model(G, HardcoreParams(as_fraction(task.get("lambda", 1)), side, cap))
    q = int(task["q"])
    x = task.get("x")
    X = ColorClass.first(q, q // 2) if x is None else ColorClass(q, frozenset(_parse_set(x)))
    return build_coloring_model(G, X, alpha_n=alpha_n)


def _parse_set(x) -> list[int]:
    if isinstance(x, str):
        return [int(t) for t in x.replace("{", "").replace("}", "").split(",") if t.strip()]
    return [int(t) for t in x]


def _task_xi(G, task, report, budget):
    model = model_from_task(G, task)
    radius = float(task.get("radius", 2.0))
    t0 = time.perf_counter()
    est = estimate_log_xi(model, float(task.get("eps", 0.01)), radius, task.get("m"), budget)
    report.estimates["xi"] = est.to_dict()
    if task.get("exact"):
        report.oracle["xi_exact"] = frac_str(xi_exact(model, 1, model.size_cap, budget))
    report.timings["xi"] = time.perf_counter() - t0


def _task_kp(G, task, report, budget):
    model = model_from_task(G, task)
    a = float(task.get("a_coeff", kp_parameter()))
    t0 = time.perf_counter()
    report.verdicts["kp"] = kp_check(model, a, float(task.get("radius", 1.0))).to_dict()
    report.timings["kp-check"] = time.perf_counter() - t0


def _task_oracle(G, task, report, oracle_budget):
    t0 = time.perf_counter()
    if task.get("colorings"):
        q = int(task["q"])
        if task.get("cluster") is None:
            report.oracle["colorings"] = str(count_colorings(G, q, oracle_budget))
        else:
            X = _parse_set(task["cluster"])
            report.oracle["colorings_cluster"] = str(
                count_colorings_cluster(G, X, int(task["alpha_n"]), q, oracle_budget))
            report.oracle["colorings_cluster_via_polymers"] = frac_str(
                colorings_cluster_via_polymers(G, ColorClass(q, frozenset(X)), alpha_n=int(task["alpha_n"])))
    else:
        lam = as_fraction(task.get("lambda", 1))
        if task.get("cluster") is None:
            report.oracle["Z"] = frac_str(count_is(G, lam, oracle_budget))
        else:
            side = str(task["cluster"]).upper()
            if side not in (L, R):
                raise PreconditionError("independent-set cluster must be L or R")
            report.oracle["Z_cluster"] = frac_str(
                count_is_cluster(G, side, int(task["alpha_n"]), lam, oracle_budget))
    report.timings["oracle"] = time.perf_counter() - t0


# -- sweeps --------------------------------------------------------------------

def _sweep_one(args):
    n, delta, seed, regime, mode, force, alpha, beta, budget = args
    G = sample_graph(SampleConfig(n, delta, seed))
    params = regime_parameters(regime, delta, force=force)
    a = params.alpha if alpha is None else as_fraction(alpha)
    b = params.beta if beta is None else as_fraction(beta)
    return is_expander(G, a, b, mode, budget, seed).holds


def expander_sweep(n: int, deltas, samples: int, mode="sampled(10)", regime="is-high",
                   seed: int = 0, force: bool = True, alpha=None, beta=None,
                   budget: int = DEFAULT_EXACT_BUDGET, threads: int = 1) -> list[dict]:
    """Fraction of sampled graphs passing the expander check, per degree."""
    rows = []
    for delta in deltas:
        jobs = [(n, delta, seed + i, regime, mode, force, alpha, beta, budget) for i in range(samples)]
        if threads > 1:
            with ThreadPoolExecutor(threads) as pool:
                passed = list(pool.map(_sweep_one, jobs))
        else:
            passed = [_sweep_one(j) for j in jobs]
        rows.append({"n": n, "delta": delta, "samples": samples, "mode": str(mode),
                     "pass_fraction": sum(passed) / samples})
    return rows


# -- entry point -----------------------------------------------------------------

def run_experiment(config: dict, threads: int = 1) -> RunReport:
    seed = config.get("seed")
    budget = int(config.get("budget", DEFAULT_BUDGET))
    oracle_budget = OracleBudget(int(config.get("oracle_budget", 2**26)))
    report = RunReport(config=json.loads(json.dumps(config)), seed=seed)
    t0 = time.perf_counter()
    if "sweep" in config:
        sw = dict(config["sweep"])
        report.sweep = expander_sweep(
            int(sw["n"]), sw["deltas"], int(sw.get("samples", 100)), sw.get("mode", "sampled(10)"),
            sw.get("regime", "is-high"), int(sw.get("seed", seed or 0)), bool(sw.get("force", True)),
            sw.get("alpha"), sw.get("beta"), int(sw.get("budget", DEFAULT_EXACT_BUDGET)), threads)
    if "graph" in config:
        G = load_graph(config["graph"], seed)
        report.graph_fingerprint = G.fingerprint()
        for task in config.get("tasks", []):
            op = task["op"]
            if op == "count-is":
                _task_count_is(G, task, report, budget, oracle_budget)
            elif op == "count-colorings":
                _task_count_colorings(G, task, report, budget, oracle_budget)
            elif op == "props":
                _task_props(G, task, report, budget, seed or 0)
            elif op == "xi":
                _task_xi(G, task, report, budget)
            elif op == "kp-check":
                _task_kp(G, task, report, budget)
            elif op == "oracle":
                _task_oracle(G, task, report, oracle_budget)
            else:
                raise PreconditionError(f"unknown task {op!r}")
    report.timings["total"] = time.perf_counter() - t0
    return report


__all__ = ["RunReport", "SCHEMA_VERSION", "run_experiment", "expander_sweep", "property_checks",
           "load_graph", "model_from_task"]
