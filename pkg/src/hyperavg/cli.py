"""Command-line front end: generate, simulate, predict, check, ensemble, spectra.

Every command reads an optional config file ("section.key = value" lines)
whose values are overridden by flags.  Exit codes: 0 for pass verdicts,
1 for fail verdicts, 2 for errors (including malformed configs).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .config import ExperimentConfig, default_config, load_config
from .dynamics import (
    InteractionFunction,
    exponential,
    power_series,
    run,
    trace_summary,
    trace_to_csv,
)
from .errors import HyperavgError
from .hypergraph import (
    Hypergraph3,
    generate_complete,
    generate_erdos_renyi,
    generate_torus,
    load_hypergraph,
    rademacher_init,
    save_hypergraph,
)
from .montecarlo import (
    anticoncentration_report,
    anticoncentration_report_text,
    concentration_report,
    concentration_report_text,
    ensemble_summary_text,
    ensemble_to_csv,
    run_ensemble,
)
from .motif import (
    build_motif,
    certificate_report,
    dump_spectra_csv,
    er_spectrum_certificate,
    spectral_comparison_certificate,
    spectral_summary,
)
from .prediction import (
    assumption_report_text,
    check_assumptions,
    mean_field_consensus,
    predict,
    prediction_report_text,
    shift_theorem,
)

GAP_ACCEPTANCE = 0.1  # relative consensus gap reported by `simulate`

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_ERROR = 2


def _load(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else default_config()
    overrides = {
        "hypergraph.kind": getattr(args, "kind", None),
        "hypergraph.source": getattr(args, "hypergraph", None),
        "hypergraph.n": getattr(args, "n", None),
        "hypergraph.p_edge": getattr(args, "p_edge", None),
        "hypergraph.L": getattr(args, "L", None),
        "hypergraph.d": getattr(args, "d", None),
        "hypergraph.seed": getattr(args, "seed", None),
        "interaction.lambda": getattr(args, "lam", None),
        "init.p_init": getattr(args, "p_init", None),
        "init.seed": getattr(args, "init_seed", None),
        "run.tol": getattr(args, "tol", None),
        "run.t_max": getattr(args, "t_max", None),
        "run.R": getattr(args, "runs", None),
        "run.a": getattr(args, "a", None),
        "output.dir": getattr(args, "out", None),
    }
    return cfg.with_overrides(overrides)


def _build_hypergraph(cfg: ExperimentConfig) -> Hypergraph3:
    source = cfg.get("hypergraph.source")
    if source is not None:
        return load_hypergraph(source)
    kind = cfg.get("hypergraph.kind")
    if kind == "er":
        return generate_erdos_renyi(
            cfg.get("hypergraph.n"),
            cfg.get("hypergraph.p_edge"),
            cfg.get("hypergraph.seed", 0),
        )
    if kind == "complete":
        return generate_complete(cfg.get("hypergraph.n"))
    if kind == "torus":
        return generate_torus(cfg.get("hypergraph.L"), cfg.get("hypergraph.d", 1))
    raise ValueError(
        f"no hypergraph source: set hypergraph.source or hypergraph.kind, got {kind!r}"
    )


def _build_interaction(cfg: ExperimentConfig) -> InteractionFunction:
    kind = cfg.get("interaction.kind", "exponential")
    lam = cfg.get("interaction.lambda", 0.0)
    if kind == "exponential":
        return exponential(lam)
    if kind == "power_series":
        raw = cfg.get("interaction.coefficients")
        if raw is None:
            raise ValueError("power_series needs interaction.coefficients")
        coeffs = [float(tok) for tok in raw.split(",")]
        return power_series(lam, coeffs)
    raise ValueError(f"unknown interaction.kind {kind!r}")


def _outdir(cfg: ExperimentConfig) -> Path:
    out = Path(cfg.get("output.dir", "."))
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_generate(args) -> int:
    cfg = _load(args)
    h = _build_hypergraph(cfg)
    out = _outdir(cfg)
    path = out / "hypergraph.txt"
    save_hypergraph(h, path)
    deg = h.degrees()
    print(f"n = {h.n}")
    print(f"hyperedges = {h.m}")
    print(f"min_degree = {int(deg.min()) if h.n else 0}")
    print(f"max_degree = {int(deg.max()) if h.n else 0}")
    print(f"wrote {path}")
    return EXIT_PASS


def cmd_simulate(args) -> int:
    cfg = _load(args)
    h = _build_hypergraph(cfg)
    g = build_motif(h)
    f = _build_interaction(cfg)
    p_init = cfg.get("init.p_init", 0.5)
    x0 = rademacher_init(h.n, p_init, cfg.get("init.seed", 0))
    trace = run(
        h,
        x0,
        f,
        tol=cfg.get("run.tol", 1e-9),
        t_max=cfg.get("run.t_max", 1000),
        stride=cfg.get("run.stride"),
    )
    out = _outdir(cfg)
    trace_to_csv(trace, out / "trace.csv")
    lines = [trace_summary(trace).rstrip("\n")]
    if f.lam == 0.0:
        lines.append("mode = linear")
    try:
        report = predict(h, g, x0, f, p_init, target=cfg.get("run.tol", 1e-9))
        lines.append(prediction_report_text(report).rstrip("\n"))
        target = report.mu_bar * (1.0 + report.shift_theorem)
        if target != 0.0:
            gap = abs(trace.consensus_value - target) / abs(target)
            lines.append(f"relative_gap = {gap:.17g}")
            lines.append(f"gap_acceptance = {GAP_ACCEPTANCE:.17g}")
            lines.append(f"gap_ok = {str(gap <= GAP_ACCEPTANCE).lower()}")
    except HyperavgError as exc:
        lines.append(f"prediction_skipped = {type(exc).__name__}")
    text = "\n".join(lines) + "\n"
    (out / "summary.txt").write_text(text)
    print(text, end="")
    return EXIT_PASS


def cmd_predict(args) -> int:
    cfg = _load(args)
    f = _build_interaction(cfg)
    p_init = cfg.get("init.p_init", 0.5)
    shift = shift_theorem(p_init, f)
    lines = [
        f"p_init = {p_init:.17g}",
        f"lambda = {f.lam:.17g}",
        f"shift_theorem = {shift:.17g}",
    ]
    n = cfg.get("hypergraph.n")
    if n is not None:
        a = round(p_init * n)
        lines.append(f"mean_field_consensus = {mean_field_consensus(n, a, f):.17g}")
    text = "\n".join(lines) + "\n"
    out = _outdir(cfg)
    (out / "predict.txt").write_text(text)
    print(text, end="")
    return EXIT_PASS


def cmd_check(args) -> int:
    cfg = _load(args)
    h = _build_hypergraph(cfg)
    g = build_motif(h)
    report = check_assumptions(
        h,
        g,
        cfg.get("init.p_init", 0.5),
        C=cfg.get("run.C", 4.3),
        m_max=cfg.get("run.m_max", 64),
    )
    text = assumption_report_text(report)
    out = _outdir(cfg)
    (out / "check.txt").write_text(text)
    print(text, end="")
    return EXIT_PASS if report.verdict else EXIT_FAIL


def cmd_ensemble(args) -> int:
    cfg = _load(args)
    h = _build_hypergraph(cfg)
    g = build_motif(h)
    f = _build_interaction(cfg)
    p_init = cfg.get("init.p_init", 0.5)
    summary = run_ensemble(
        h,
        f,
        p_init,
        R=cfg.get("run.R", 50),
        tol=cfg.get("run.tol", 1e-9),
        t_max=cfg.get("run.t_max", 1000),
        base_seed=cfg.get("init.seed", 0),
        jobs=args.jobs or 1,
        g=g,
    )
    out = _outdir(cfg)
    ensemble_to_csv(summary, out / "ensemble.csv")
    texts = [ensemble_summary_text(summary)]
    conc = concentration_report(summary, p_init, f, g, C=cfg.get("run.C", 4.3))
    texts.append(concentration_report_text(conc))
    passed = conc.passed
    a = cfg.get("run.a")
    if a is not None and p_init == 0.5:
        anti = anticoncentration_report(summary, g, a)
        texts.append(anticoncentration_report_text(anti))
        passed = passed and anti.passed
    text = "\n".join(t.rstrip("\n") for t in texts) + "\n"
    (out / "ensemble_report.txt").write_text(text)
    print(text, end="")
    return EXIT_PASS if passed else EXIT_FAIL


def cmd_spectra(args) -> int:
    cfg = _load(args)
    h = _build_hypergraph(cfg)
    g = build_motif(h)
    summary = spectral_summary(g)
    out = _outdir(cfg)
    dump_spectra_csv(g, out / "spectra.csv")
    comparison = spectral_comparison_certificate(g)
    texts = [
        "\n".join(
            [
                f"nu = {summary.nu:.17g}",
                f"delta_ratio = {summary.delta_ratio:.17g}",
                f"connected = {str(summary.connected).lower()}",
                f"bipartite = {str(summary.bipartite).lower()}",
            ]
        )
        + "\n",
        certificate_report(comparison),
    ]
    passed = comparison.passed
    p_edge = cfg.get("run.p_edge")
    if p_edge is not None:
        er = er_spectrum_certificate(g, p_edge)
        texts.append(certificate_report(er))
        passed = passed and er.passed
    text = "\n".join(t.rstrip("\n") for t in texts) + "\n"
    (out / "spectra_report.txt").write_text(text)
    print(text, end="")
    return EXIT_PASS if passed else EXIT_FAIL


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="path to a 'section.key = value' config file")
    p.add_argument("--out", help="output directory")
    p.add_argument("--seed", type=int, help="hypergraph generator seed")
    p.add_argument("--jobs", type=int, default=1, help="parallel runs for ensembles")
    p.add_argument("--hypergraph", help="path to a hypergraph file")
    p.add_argument("--kind", choices=["er", "complete", "torus"])
    p.add_argument("--n", type=int)
    p.add_argument("--p-edge", dest="p_edge", type=float)
    p.add_argument("--L", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--p-init", dest="p_init", type=float)
    p.add_argument("--init-seed", dest="init_seed", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--t-max", dest="t_max", type=int)
    p.add_argument("--runs", type=int, help="ensemble size R")
    p.add_argument("--a", type=float, help="anti-concentration threshold")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperavg",
        description="Three-body averaging dynamics on 3-uniform hypergraphs",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func in (
        ("generate", cmd_generate),
        ("simulate", cmd_simulate),
        ("predict", cmd_predict),
        ("check", cmd_check),
        ("ensemble", cmd_ensemble),
        ("spectra", cmd_spectra),
    ):
        p = sub.add_parser(name)
        _add_common(p)
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (HyperavgError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
