"""Batch verification front door.

Subcommands run the package's verification sweeps from a JSON config and
emit a deterministic JSON report: ``verify-derivatives``, ``verify-ricci``
(with ``--scope catalogue|all|mixed``), ``rank-rho`` and ``cosmology``.
Exit status is 0 exactly when no check failed.

Set TORSIONCALC_WORKERS to parallelise instance sweeps; results are reduced
in a fixed order so the report bytes do not depend on the worker count.
"""

from __future__ import annotations

import argparse
import json
import multiprocessing
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from .connection import (
    DEPENDENT_TRIPLES,
    INDEPENDENT_TRIPLES,
    derivative_kind_rank,
    verify_derivative_relations,
    DERIVATIVE_RELATIONS,
)
from .cosmology import (
    CosmologyMetric,
    antisym_christoffel_generic,
    antisym_christoffel_table,
    energy_momentum,
    matter_lagrangian_paths,
    recover_n,
    scalar_curvature,
    scalar_curvature_family,
)
from .curvature import (
    CURVATURE_R_MEMBER,
    INDEPENDENT_SIX_SETS,
    rho_catalogue,
    rho_family_rank,
    six_set_members,
)
from .ratfunc import Poly, RationalFunction
from .report import (
    Check,
    Report,
    quadrature_check,
    rank_check,
    residual_check,
    value_check,
)
from .ricci import (
    CATALOGUE_BY_PQRS,
    IdentityWorkspace,
    MixWeights,
    identity_catalogue,
    solve_all_identities,
    solved_span_rank,
)
from .sampling import derive_rng, random_even_connection, random_tensor_field

WORKERS_ENV = "TORSIONCALC_WORKERS"


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending field."""


@dataclass
class RunConfig:
    dimension: int = 3
    seed: int = 20260809
    degree: int = 2
    instances: int = 20
    cosmology: CosmologyMetric | None = None
    window: tuple = (Fraction(0), Fraction(1))
    panels: int = 1000
    output: str | None = None

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        cfg = cls()
        known = {
            "dimension", "seed", "degree", "instances", "cosmology", "output",
        }
        for key in raw:
            if key not in known:
                raise ConfigError(f"unknown config field: {key!r}")
        if "dimension" in raw:
            cfg.dimension = _expect_int(raw, "dimension", 2, 6)
        if "seed" in raw:
            cfg.seed = _expect_int(raw, "seed", 0, 2**64 - 1)
        if "degree" in raw:
            cfg.degree = _expect_int(raw, "degree", 0, 8)
        if "instances" in raw:
            cfg.instances = _expect_int(raw, "instances", 1, 10**6)
        if "output" in raw:
            if not isinstance(raw["output"], str):
                raise ConfigError("output: expected a path string")
            cfg.output = raw["output"]
        if "cosmology" in raw:
            cfg.cosmology, cfg.window, cfg.panels = _parse_cosmology(raw["cosmology"])
        return cfg

    def echo(self) -> dict:
        out = {
            "dimension": self.dimension,
            "seed": self.seed,
            "degree": self.degree,
            "instances": self.instances,
        }
        if self.cosmology is not None:
            out["cosmology"] = {
                **{
                    f"s{i+1}": [str(c) for c in p.coeffs]
                    for i, p in enumerate(self.cosmology.s)
                },
                "n": [str(c) for c in self.cosmology.n.coeffs],
                "vprime_minus_w": str(self.cosmology.vprime_minus_w),
                "window": [str(self.window[0]), str(self.window[1])],
                "panels": self.panels,
            }
        return out


def _expect_int(raw, key, lo, hi) -> int:
    value = raw[key]
    if not isinstance(value, int) or isinstance(value, bool):
        raise ConfigError(f"{key}: expected an integer")
    if not lo <= value <= hi:
        raise ConfigError(f"{key}: {value} outside [{lo}, {hi}]")
    return value


def _parse_cosmology(raw: dict):
    if not isinstance(raw, dict):
        raise ConfigError("cosmology: expected an object")
    lists = {}
    for key in ("s1", "s2", "s3", "s4", "n"):
        if key not in raw:
            raise ConfigError(f"cosmology.{key}: missing coefficient list")
        value = raw[key]
        if not isinstance(value, list) or not value:
            raise ConfigError(f"cosmology.{key}: expected a non-empty list")
        lists[key] = value
    if "vprime_minus_w" not in raw:
        raise ConfigError("cosmology.vprime_minus_w: missing")
    extra = set(raw) - {"s1", "s2", "s3", "s4", "n", "vprime_minus_w", "window", "panels"}
    if extra:
        raise ConfigError(f"cosmology: unknown fields {sorted(extra)}")
    try:
        metric = CosmologyMetric.from_coefficients(
            [lists["s1"], lists["s2"], lists["s3"], lists["s4"]],
            lists["n"],
            raw["vprime_minus_w"],
        )
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"cosmology: {exc}") from exc
    window = raw.get("window", ["0", "1"])
    if not (isinstance(window, list) and len(window) == 2):
        raise ConfigError("cosmology.window: expected [t0, t1]")
    t0, t1 = (Fraction(str(x)) for x in window)
    if not t1 > t0:
        raise ConfigError("cosmology.window: needs t1 > t0")
    panels = raw.get("panels", 1000)
    if not isinstance(panels, int) or panels <= 0:
        raise ConfigError("cosmology.panels: expected a positive integer")
    return metric, (t0, t1), panels


def load_config(path: str | None) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config parse failure at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be an object")
    return RunConfig.from_dict(raw)


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _parallel_map(fn, items):
    items = list(items)
    workers = worker_count()
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with multiprocessing.Pool(min(workers, len(items))) as pool:
        return pool.map(fn, items)


# ---------------------------------------------------------------------------
# instance tasks (module level so they can cross process boundaries)
# ---------------------------------------------------------------------------


def _relations_task(args):
    seed, dim, degree, idx = args
    rng = derive_rng(seed, f"deriv:{dim}:{idx}")
    L = random_even_connection(rng, dim, degree)
    a = random_tensor_field(rng, dim, (1, 1), degree)
    return [(tag, res.is_zero()) for tag, res in verify_derivative_relations(L, a)]


def _catalogue_task(args):
    seed, dim, degree, idx = args
    rng = derive_rng(seed, f"ricci:{dim}:{idx}")
    L = random_even_connection(rng, dim, degree)
    a = random_tensor_field(rng, dim, (1, 1), degree)
    ws = IdentityWorkspace(a, L)
    return [(ic.tag, ws.residual(ic).is_zero()) for ic in identity_catalogue()]


def _mixed_task(args):
    seed, dim, degree, idx, per_combo = args
    rng = derive_rng(seed, f"mixed:{dim}:{idx}")
    L = random_even_connection(rng, dim, degree)
    a = random_tensor_field(rng, dim, (1, 1), degree)
    ws = IdentityWorkspace(a, L)
    out = []
    for ic in identity_catalogue():
        ok = True
        for _ in range(per_combo):
            weights = MixWeights.random(rng)
            if not (ws.lhs(ic.pqrs) - ws.rhs_mixed(ic, weights)).is_zero():
                ok = False
        out.append((ic.tag, ok))
    return out


def _and_reduce(results):
    """AND per-tag across instance task outputs, preserving tag order."""
    agg = {}
    order = []
    for task_result in results:
        for tag, ok in task_result:
            if tag not in agg:
                agg[tag] = True
                order.append(tag)
            agg[tag] = agg[tag] and ok
    return [(tag, agg[tag]) for tag in order]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_verify_derivatives(config: RunConfig) -> Report:
    report = Report("verify-derivatives", config.echo())
    t0 = time.perf_counter()
    tasks = [
        (config.seed, config.dimension, config.degree, i)
        for i in range(config.instances)
    ]
    merged = _and_reduce(_parallel_map(_relations_task, tasks))
    elapsed = (time.perf_counter() - t0) * 1000 / max(1, len(merged))
    for tag, ok in merged:
        report.add(residual_check(tag, ok, config.instances, elapsed_ms=elapsed))
    for label, kinds in INDEPENDENT_TRIPLES:
        report.add(rank_check(f"cor1:{label}", 3, derivative_kind_rank(kinds)))
    for label, kinds in DEPENDENT_TRIPLES:
        report.add(rank_check(f"cor1:{label}", 2, derivative_kind_rank(kinds)))
    return report


def cmd_verify_ricci(config: RunConfig, scope: str) -> Report:
    report = Report(f"verify-ricci:{scope}", config.echo())
    if scope == "catalogue":
        tasks = [
            (config.seed, config.dimension, config.degree, i)
            for i in range(config.instances)
        ]
        merged = _and_reduce(_parallel_map(_catalogue_task, tasks))
        for tag, ok in merged:
            report.add(residual_check(f"eq:{tag}", ok, config.instances))
    elif scope == "all":
        try:
            solutions = solve_all_identities(seed=config.seed, degree=config.degree)
        except Exception as exc:  # solver failure is a failed check, not a crash
            report.add(
                value_check("thm2:solve", "solved", f"error: {exc}")
            )
            return report
        for pqrs, ic in sorted(solutions.items()):
            ok = all(v in (-1, 0, 1) for v in ic.c)
            if pqrs in CATALOGUE_BY_PQRS:
                ok = ok and ic.c == CATALOGUE_BY_PQRS[pqrs].c
            report.add(
                Check(
                    id=f"thm2:{''.join(map(str, pqrs))}",
                    kind="value",
                    passed=ok,
                    actual=list(ic.c),
                    status="solved",
                )
            )
        report.add(
            rank_check("cor2:span-rank", 17, solved_span_rank(solutions))
        )
    elif scope == "mixed":
        tasks = [
            (config.seed, config.dimension, config.degree, i, 5)
            for i in range(max(1, config.instances // 4))
        ]
        merged = _and_reduce(_parallel_map(_mixed_task, tasks))
        for tag, ok in merged:
            report.add(residual_check(f"eq:29:{tag}", ok, len(tasks) * 5))
    else:
        raise ConfigError(f"unknown scope: {scope!r}")
    return report


def cmd_rank_rho(config: RunConfig) -> Report:
    report = Report("rank-rho", config.echo())
    catalogue = rho_catalogue()
    report.add(rank_check("thm3:full-catalogue", 6, rho_family_rank(catalogue)))
    for label, indices in INDEPENDENT_SIX_SETS:
        report.add(
            rank_check(f"cor4:{label}", 6, rho_family_rank(six_set_members(indices)))
        )
    report.add(rank_check("thm3:R-alone", 1, rho_family_rank([CURVATURE_R_MEMBER])))
    return report


def _rf_str(rf: RationalFunction) -> str:
    return repr(rf)


def cmd_cosmology(config: RunConfig) -> Report:
    if config.cosmology is None:
        raise ConfigError("cosmology: block required for this command")
    m = config.cosmology
    report = Report("cosmology", config.echo())

    # lowered antisymmetric connection table vs the generic formula
    closed = antisym_christoffel_table(m)
    generic = antisym_christoffel_generic(m)
    entries = {}
    for a in range(4):
        for j in range(4):
            for k in range(4):
                e = closed.get(a, j, k)
                if not e.is_zero():
                    entries[f"({a+1},{j+1},{k+1})"] = repr(e)
    report.add(
        value_check(
            "eq:51",
            "closed-form-table",
            "closed-form-table" if closed == generic else "mismatch",
            detail=entries,
        )
    )

    # scalar-curvature family and the matter Lagrangian, both routes
    via, closed_form = matter_lagrangian_paths(m)
    report.add(value_check("eq:58-59", _rf_str(closed_form), _rf_str(via)))
    fam = scalar_curvature_family(m)
    R = scalar_curvature(m)
    report.add(
        value_check(
            "eq:56",
            _rf_str(closed_form),
            _rf_str(fam - R),
            detail={"scalar_curvature": _rf_str(R), "family": _rf_str(fam)},
        )
    )

    # energy-momentum family
    T = energy_momentum(m)
    lm = closed_form
    s = [RationalFunction.from_value(p) for p in m.s]
    expected = [(-s[0] * lm), (-s[1] * lm), (-s[2] * lm), (s[3] * lm)]
    diag_ok = all(T[i][i] == expected[i] for i in range(4))
    off_ok = all(T[i][j].is_zero() for i in range(4) for j in range(4) if i != j)
    report.add(
        value_check(
            "eq:66",
            "diagonal",
            "diagonal" if (diag_ok and off_ok) else "unexpected-structure",
            detail={f"T{i+1}{i+1}": _rf_str(T[i][i]) for i in range(4)},
        )
    )

    # quadrature recovery of the off-diagonal function
    t0, t1 = config.window
    try:
        ts, n1, n2 = recover_n(m, t0, t1, config.panels)
        sign_gap = max(abs(x + y) for x, y in zip(n1, n2))
        detail = {
            "t": [f"{x:.17g}" for x in ts[:: max(1, len(ts) // 8)]],
            "n1": [f"{x:.17g}" for x in n1[:: max(1, len(n1) // 8)]],
        }
        report.add(
            quadrature_check("eq:60", sign_gap, 0.0, detail=detail)
        )
    except (ValueError, ZeroDivisionError) as exc:
        report.add(value_check("eq:60", "computed", f"error: {exc}"))
    return report


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torsioncalc",
        description="Exact verification sweeps for connections with torsion",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("verify-derivatives", "verify-ricci", "rank-rho", "cosmology"):
        p = sub.add_parser(name)
        p.add_argument("--config", help="path to a JSON run configuration")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--out", help="write the JSON report to this path")
        p.add_argument(
            "--json", action="store_true", help="print the JSON report to stdout"
        )
        p.add_argument(
            "--timings",
            action="store_true",
            help="include wall-clock timings (report no longer byte-reproducible)",
        )
        if name == "verify-ricci":
            p.add_argument(
                "--scope",
                choices=("catalogue", "all", "mixed"),
                default="catalogue",
            )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise ConfigError("seed: outside the unsigned 64-bit range")
            config.seed = args.seed
        if args.out:
            config.output = args.out

        if args.command == "verify-derivatives":
            report = cmd_verify_derivatives(config)
        elif args.command == "verify-ricci":
            report = cmd_verify_ricci(config, args.scope)
        elif args.command == "rank-rho":
            report = cmd_rank_rho(config)
        else:
            report = cmd_cosmology(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    rendered = report.render(with_timings=args.timings)
    if config.output:
        with open(config.output, "w", encoding="utf-8") as fh:
            fh.write(rendered)
    if args.json:
        sys.stdout.write(rendered)
    else:
        for check in sorted(report.checks, key=lambda c: c.id):
            print(f"{'PASS' if check.passed else 'FAIL'} {check.id}")
        summary = report.to_json()["summary"]
        print(f"pass={summary['pass']} fail={summary['fail']}")
    return report.exit_code()


if __name__ == "__main__":
    sys.exit(main())
