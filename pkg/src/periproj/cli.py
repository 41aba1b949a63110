"""Batch experiment runner: parse a group config, run suites, write reports.

A run reads one INI config describing the group, backend, and suite
parameters, executes the selected suites, and writes one CSV per suite plus
a structured-text summary.  Identical (config, seed) pairs produce
byte-identical reports: all sampling is seeded and nothing timestamped.

Exit codes: 0 clean; 1 theorem violation; 2 config error; 3 resource or
certification budget exceeded.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import random
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import (
    BallBudgetError,
    ConfigError,
    OutOfRangeError,
    PeriprojError,
    TheoremViolationError,
)
from .factor import CyclicFactor, FreeAbelianRank2Factor, InfiniteCyclicFactor, TableFactor
from .group import (
    GroupSpec,
    ball,
    inv,
    mul,
    parse_element,
    syllable_length,
)
from .metric import BfsBackend, ExactBackend, quasigeodesic_constants
from .conedoff import ConedOffBackend, check_bcp, dist_hat, geodesic_hat, lift
from .verify import (
    SamplePlan,
    check_ap_axioms,
    distance_formula,
    estimate_dstg_constants,
    fit_formula_constants,
    lemma_battery,
    seeded_pairs,
    thinness_scan,
    triangle_sample,
)

SUITES = ("oracle", "ap", "battery", "dstg", "formula", "bcp", "lifts", "thinness")
RANDOMIZED_SUITES = {"battery", "formula", "lifts", "thinness"}


@dataclass
class RunConfig:
    group: GroupSpec
    name: str
    mode: str  # exact | bfs
    radius: int
    hat_radius: int
    ball_cap: int
    suites: list
    thresholds: list
    samples: int
    seed: int | None
    sample_radius: int
    coset_radius: int
    out_dir: Path
    skip_tolerance: float = 0.5
    source: str = ""

    def validate(self) -> None:
        if not self.suites:
            raise ConfigError("no suites selected")
        for s in self.suites:
            if s not in SUITES:
                raise ConfigError(f"unknown suite: {s!r} (choose from {', '.join(SUITES)})")
        if self.mode not in ("exact", "bfs"):
            raise ConfigError(f"backend mode must be exact or bfs, got {self.mode!r}")
        if self.mode == "exact" and not self.group.is_standard:
            raise ConfigError("exact backend requires the standard generating set")
        if self.seed is None and RANDOMIZED_SUITES & set(self.suites):
            raise ConfigError("randomized suites need an explicit seed")
        if self.radius < 1 or self.sample_radius < 1:
            raise ConfigError("radii must be positive")
        needs_peripheral = {"formula", "bcp", "lifts"} & set(self.suites)
        if needs_peripheral and not self.group.peripheral_indices:
            raise ConfigError(
                f"suites {sorted(needs_peripheral)} need a nonempty peripheral set"
            )


def _parse_factors(lines: str):
    factors = []
    for raw in lines.strip().splitlines():
        parts = raw.split()
        if not parts:
            continue
        kind = parts[0]
        if kind == "cyclic":
            if len(parts) != 3:
                raise ConfigError(f"cyclic factor needs: cyclic <n> <label> ({raw!r})")
            factors.append(CyclicFactor(int(parts[1]), parts[2]))
        elif kind == "z":
            if len(parts) != 2:
                raise ConfigError(f"z factor needs: z <label> ({raw!r})")
            factors.append(InfiniteCyclicFactor(parts[1]))
        elif kind == "z2":
            if len(parts) != 3:
                raise ConfigError(f"z2 factor needs: z2 <label1> <label2> ({raw!r})")
            factors.append(FreeAbelianRank2Factor(parts[1], parts[2]))
        elif kind == "table":
            if len(parts) != 2:
                raise ConfigError(f"table factor needs: table <json-path> ({raw!r})")
            factors.append(_load_table(parts[1]))
        else:
            raise ConfigError(f"unknown factor kind: {kind!r}")
    return factors


def _load_table(path: str) -> TableFactor:
    try:
        data = json.loads(Path(path).read_text())
        return TableFactor(data["table"], {str(k): int(v) for k, v in data["generators"].items()})
    except (OSError, KeyError, ValueError) as exc:
        raise ConfigError(f"bad table factor file {path!r}: {exc}") from exc


def parse_config(path: str | Path) -> RunConfig:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"config file not found: {path}")
    try:
        gsec = parser["group"]
        factors = _parse_factors(gsec.get("factors", ""))
        peripheral = [int(tok) for tok in gsec.get("peripheral", "").split()]
        for i in peripheral:
            if not 0 <= i < len(factors):
                raise ConfigError(f"peripheral index out of range: {i}")
            factors[i].peripheral = True
        name = gsec.get("name", Path(path).stem)
        pre_spec = GroupSpec(factors, name=name)
        extras = []
        for raw in gsec.get("extra_generators", "").strip().splitlines():
            if not raw.strip():
                continue
            gen_name, _, word = raw.partition(":")
            if not word:
                raise ConfigError(f"extra generator needs 'name: word' ({raw!r})")
            extras.append((gen_name.strip(), parse_element(pre_spec, word.strip())))
        spec = GroupSpec(factors, extra_generators=extras, name=name) if extras else pre_spec

        bsec = parser["backend"] if parser.has_section("backend") else {}
        default_mode = "exact" if spec.is_standard else "bfs"
        rsec = parser["run"] if parser.has_section("run") else {}
        config = RunConfig(
            group=spec,
            name=name,
            mode=_get(bsec, "mode", default_mode),
            radius=int(_get(bsec, "radius", "6")),
            hat_radius=int(_get(bsec, "hat_radius", _get(bsec, "radius", "6"))),
            ball_cap=int(_get(bsec, "ball_cap", "2000000")),
            suites=_get(rsec, "suites", "oracle").split(),
            thresholds=[int(t) for t in _get(rsec, "thresholds", "2 4 8").split()],
            samples=int(_get(rsec, "samples", "200")),
            seed=int(_get(rsec, "seed", "7")),
            sample_radius=int(_get(rsec, "sample_radius", "4")),
            coset_radius=int(_get(rsec, "coset_radius", "3")),
            out_dir=Path(_get(rsec, "out", "reports")),
            source=str(path),
        )
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad config {path}: {exc}") from exc
    return config


def _get(section, key, default):
    try:
        value = section.get(key, default)
    except AttributeError:  # plain dict fallback
        value = section.get(key, default) if hasattr(section, "get") else default
    return value if value is not None else default


@dataclass
class SuiteResult:
    name: str
    rows: list
    header: list
    summary: list
    violations: int = 0
    examined: int = 0
    skipped: int = 0


def run(config: RunConfig) -> int:
    """Execute the configured suites; write reports; map failures to exit codes."""
    try:
        config.validate()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    spec = config.group
    try:
        backend = (
            ExactBackend(spec)
            if config.mode == "exact"
            else BfsBackend(spec, config.radius, config.ball_cap)
        )
        hat_backend = None
        if spec.peripheral_indices:
            hat_backend = ConedOffBackend(spec, radius=config.hat_radius, cap=config.ball_cap)
    except BallBudgetError as exc:
        print(f"resource budget exceeded: {exc}", file=sys.stderr)
        return 3

    results: list[SuiteResult] = []
    violations = 0
    try:
        for suite in config.suites:
            runner = _SUITE_RUNNERS[suite]
            result = runner(config, spec, backend, hat_backend)
            results.append(result)
            violations += result.violations
    except TheoremViolationError as exc:
        print(f"theorem violation: {exc}", file=sys.stderr)
        return 1
    except BallBudgetError as exc:
        print(f"resource budget exceeded: {exc}", file=sys.stderr)
        return 3

    config.out_dir.mkdir(parents=True, exist_ok=True)
    for result in results:
        _write_csv(config.out_dir / f"{result.name}.csv", result.header, result.rows)
    _write_summary(config, results)

    if violations:
        return 1
    total_examined = sum(r.examined for r in results)
    total_skipped = sum(r.skipped for r in results)
    if total_examined + total_skipped > 0:
        if total_skipped / (total_examined + total_skipped) > config.skip_tolerance:
            return 3
    return 0


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _write_summary(config: RunConfig, results) -> None:
    lines = [
        f"group: {config.name}",
        f"config: {Path(config.source).name}",
        f"mode: {config.mode} (radius {config.radius}, hat radius {config.hat_radius})",
        f"seed: {config.seed}",
        "",
    ]
    for result in results:
        lines.append(f"[{result.name}]")
        lines.extend(result.summary)
        lines.append(
            f"census: examined={result.examined} skipped={result.skipped} "
            f"violations={result.violations}"
        )
        lines.append("")
    (config.out_dir / "summary.txt").write_text("\n".join(lines))


# --- suites -----------------------------------------------------------------


def _suite_oracle(config, spec, backend, hat_backend) -> SuiteResult:
    rows = []
    mismatches = 0
    examined = 0
    if spec.is_standard:
        oracle = BfsBackend(spec, 2 * config.sample_radius, config.ball_cap)
        elems = list(ball(spec, config.sample_radius))
        bad = 0
        for x in elems:
            xi = inv(spec, x)
            for y in elems:
                examined += 1
                w = mul(spec, xi, y)
                if syllable_length(spec, w) != oracle.table[w]:
                    bad += 1
        mismatches += bad
        rows.append(["exact_vs_bfs", len(elems) ** 2, bad])
        if spec.peripheral_indices:
            hb = ConedOffBackend(spec, radius=config.sample_radius, cap=config.ball_cap)
            bad = 0
            count = 0
            for w in hb.gtable:
                count += 1
                if hb.window_distance((), w) != dist_hat(spec, (), w):
                    bad += 1
            mismatches += bad
            examined += count
            rows.append(["hat_formula_vs_bfs", count, bad])
    else:
        # extended mode: metric axioms on certified data
        elems = list(ball(spec, config.sample_radius))
        bad = 0
        count = 0
        for x in elems:
            for y in elems:
                try:
                    dxy = backend.distance(x, y)
                    dyx = backend.distance(y, x)
                except OutOfRangeError:
                    continue
                count += 1
                if dxy != dyx:
                    bad += 1
        rows.append(["symmetry", count, bad])
        mismatches += bad
        examined += count
    return SuiteResult(
        name="oracle",
        rows=rows,
        header=["check", "pairs", "mismatches"],
        summary=[f"{r[0]}: {r[2]} mismatches over {r[1]} pairs" for r in rows],
        violations=mismatches,
        examined=examined,
    )


def _suite_ap(config, spec, backend, hat_backend) -> SuiteResult:
    report = check_ap_axioms(spec, backend, config.sample_radius, config.coset_radius)
    rows = [
        [axiom, report.constants[axiom], report.examined[axiom],
         json.dumps(report.witnesses.get(axiom, {}), sort_keys=True)]
        for axiom in sorted(report.constants)
    ]
    rows.append(["ap3_image_max", report.ap3_image_max, report.examined["ap3"], "{}"])
    summary = [
        f"constants: {report.constants}",
        f"projection constant C = {report.projection_constant}",
        f"ap3 image max size = {report.ap3_image_max}",
        f"equivalence tracks: {report.equivalence}",
    ]
    return SuiteResult(
        name="ap",
        rows=rows,
        header=["axiom", "constant", "examined", "witness"],
        summary=summary,
        examined=sum(report.examined.values()),
        skipped=report.skipped,
    )


def _ap_constant(config, spec, backend) -> int:
    return check_ap_axioms(
        spec, backend, config.sample_radius, config.coset_radius
    ).projection_constant


def _suite_battery(config, spec, backend, hat_backend) -> SuiteResult:
    c = _ap_constant(config, spec, backend)
    plan = SamplePlan(
        seed=config.seed,
        n_pairs=config.samples,
        sample_radius=min(config.sample_radius, 3),
        coset_radius=min(config.coset_radius, 2),
    )
    report = lemma_battery(spec, backend, c, plan, hat_backend=hat_backend)
    rows = [
        [row.name, row.examined, row.skipped, row.violations,
         row.min_margin if row.min_margin is not None else "",
         json.dumps(row.witness or {}, sort_keys=True)]
        for row in report.rows.values()
    ]
    return SuiteResult(
        name="battery",
        rows=rows,
        header=["lemma", "examined", "skipped", "violations", "min_margin", "witness"],
        summary=[f"C = {c}", f"total examined = {report.total_examined}"],
        violations=report.total_violations,
        examined=report.total_examined,
        skipped=sum(r.skipped for r in report.rows.values()),
    )


def _suite_dstg(config, spec, backend, hat_backend) -> SuiteResult:
    consts = estimate_dstg_constants(
        spec, backend, min(config.sample_radius, 3), hat_backend=hat_backend
    )
    rows = [["m", consts.m, consts.examined["m"]]]
    for h, b in sorted(consts.b_by_h.items()):
        rows.append([f"b{h}", b, consts.examined["b"]])
    for level, t in sorted(consts.t_by_l.items()):
        rows.append([f"t{level}", str(t), consts.examined["t"]])
    for depth, s in sorted(consts.sigma_by_d.items()):
        rows.append([f"sigma{depth}", s, consts.examined["sigma"]])
    for depth, e in sorted(consts.entry_m_by_d.items()):
        rows.append([f"entry{depth}", e, consts.examined["entry"]])
    rows.append(["hat_entry", consts.hat_entry_m, consts.examined["hat_entry"]])
    return SuiteResult(
        name="dstg",
        rows=rows,
        header=["constant", "value", "examined"],
        summary=[f"{r[0]} = {r[1]}" for r in rows],
        examined=sum(consts.examined.values()),
        skipped=consts.skipped,
    )


def _certified_pairs(config, spec, backend, rng, n, max_syllables, max_syllable_len):
    """Pair sample guaranteed evaluable: free-form in exact mode, drawn from
    the half-radius ball in BFS mode (so distances stay in range)."""
    if backend.is_exact:
        return seeded_pairs(spec, rng, n, max_syllables, max_syllable_len)
    elems = list(ball(spec, backend.radius // 2, config.ball_cap))
    return [
        (elems[rng.randrange(len(elems))], elems[rng.randrange(len(elems))])
        for _ in range(n)
    ]


def _suite_formula(config, spec, backend, hat_backend) -> SuiteResult:
    consts = estimate_dstg_constants(
        spec, backend, min(config.sample_radius, 3), hat_backend=hat_backend
    )
    rng = random.Random(config.seed)
    pairs = _certified_pairs(config, spec, backend, rng, config.samples, 10, 12)
    sigma, entry_m = consts.sigma_by_d[0], consts.entry_m_by_d[0]
    usable = []
    skipped = 0
    for x, y in pairs:
        try:
            distance_formula(
                spec, x, y, config.thresholds, backend=backend,
                hat_backend=hat_backend, sigma=sigma, entry_m=entry_m,
            )
            usable.append((x, y))
        except OutOfRangeError:
            skipped += 1
    rows_out = []
    fit = fit_formula_constants(
        spec, usable, config.thresholds, backend=backend, hat_backend=hat_backend,
        sigma=sigma, entry_m=entry_m,
    )
    for row in fit:
        rows_out.append([row.threshold, str(row.lam), row.mu, row.witness])
    return SuiteResult(
        name="formula",
        rows=rows_out,
        header=["L", "lambda", "mu", "witness"],
        summary=[f"L={r[0]}: lambda={r[1]} mu={r[2]}" for r in rows_out]
        + [f"sigma={sigma} entry_m={entry_m}"],
        examined=len(usable) * len(config.thresholds),
        skipped=skipped,
    )


def _suite_bcp(config, spec, backend, hat_backend) -> SuiteResult:
    targets = list(ball(spec, min(config.sample_radius, config.hat_radius)))
    max_c1 = 0
    max_c2 = 0
    pairs = 0
    truncated = 0
    skipped = 0
    for w in targets:
        try:
            report = check_bcp(spec, hat_backend, backend, (), w, 10_000)
        except OutOfRangeError:
            skipped += 1
            continue
        pairs += report.samples
        truncated += 1 if report.truncated else 0
        max_c1 = max(max_c1, report.max_clause1)
        max_c2 = max(max_c2, report.max_clause2)
    rows = [[len(targets), pairs, max_c1, max_c2, truncated]]
    return SuiteResult(
        name="bcp",
        rows=rows,
        header=["targets", "geodesic_pairs", "max_clause1", "max_clause2", "truncated"],
        summary=[
            f"targets={len(targets)} geodesic pairs={pairs}",
            f"empirical c: clause1={max_c1} clause2={max_c2}",
        ],
        examined=pairs,
        skipped=skipped,
    )


def _suite_lifts(config, spec, backend, hat_backend) -> SuiteResult:
    rng = random.Random(config.seed)
    pairs = _certified_pairs(config, spec, backend, rng, config.samples, 4, 4)
    max_mu = 0
    count = 0
    skipped = 0
    for x, y in pairs:
        try:
            hp = geodesic_hat(spec, x, y) if spec.is_standard else hat_backend.geodesic(x, y)
            lifted = lift(spec, hp)
            _, mu = quasigeodesic_constants(lifted, backend)
        except OutOfRangeError:
            skipped += 1
            continue
        count += 1
        max_mu = max(max_mu, mu)
    rows = [[count, 1, max_mu, skipped]]
    return SuiteResult(
        name="lifts",
        rows=rows,
        header=["lifts", "lambda", "max_mu", "skipped"],
        summary=[f"{count} lifts: (lambda, mu) = (1, {max_mu})"],
        examined=count,
        skipped=skipped,
    )


def _suite_thinness(config, spec, backend, hat_backend) -> SuiteResult:
    rng = random.Random(config.seed)
    if backend.is_exact:
        triangles = triangle_sample(spec, rng, config.samples)
    else:
        elems = list(ball(spec, backend.radius // 3, config.ball_cap))
        triangles = [
            tuple(elems[rng.randrange(len(elems))] for _ in range(3))
            for _ in range(config.samples)
        ]
    report = thinness_scan(spec, backend, 1, triangles)
    bins: dict = {}
    for row in report.rows:
        entry = bins.setdefault(row.depth, [0, 0])
        entry[0] += 1
        entry[1] = max(entry[1], row.delta)
    rows = [[depth, count, max_delta] for depth, (count, max_delta) in sorted(bins.items())]
    return SuiteResult(
        name="thinness",
        rows=rows,
        header=["depth", "triangles", "max_delta"],
        summary=[
            f"triangles={len(report.rows)} lambda={report.lam}",
            f"flagged families: {report.flagged or 'none'}",
        ],
        violations=len(report.flagged),
        examined=len(report.rows),
        skipped=report.skipped,
    )


_SUITE_RUNNERS = {
    "oracle": _suite_oracle,
    "ap": _suite_ap,
    "battery": _suite_battery,
    "dstg": _suite_dstg,
    "formula": _suite_formula,
    "bcp": _suite_bcp,
    "lifts": _suite_lifts,
    "thinness": _suite_thinness,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="periproj",
        description="Run verification suites for free products with peripheral structure.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    runp = sub.add_parser("run", help="run suites from a config file")
    runp.add_argument("--config", required=True, help="path to an INI group config")
    runp.add_argument("--suite", help="comma-separated suite list (overrides config)")
    runp.add_argument("--L", help="comma-separated thresholds (overrides config)")
    runp.add_argument("--radius", type=int, help="backend ball radius override")
    runp.add_argument("--samples", type=int, help="sample count override")
    runp.add_argument("--seed", type=int, help="random seed override")
    runp.add_argument("--out", help="report directory override")
    args = parser.parse_args(argv)

    try:
        config = parse_config(args.config)
        if args.suite is not None:
            config = replace(config, suites=[s for s in args.suite.split(",") if s])
        if args.L:
            config = replace(config, thresholds=[int(t) for t in args.L.split(",")])
        if args.radius is not None:
            config = replace(config, radius=args.radius, hat_radius=args.radius)
        if args.samples is not None:
            config = replace(config, samples=args.samples)
        if args.seed is not None:
            config = replace(config, seed=args.seed)
        if args.out:
            config = replace(config, out_dir=Path(args.out))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except PeriprojError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    return run(config)


if __name__ == "__main__":
    sys.exit(main())
