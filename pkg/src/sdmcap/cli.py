"""Command-line front end.

Subcommands: ``coeffs`` (derive and cache density coefficients),
``analytic`` (per-mode and total capacity statistics), ``simulate``
(Monte-Carlo ensemble), ``fit`` (correlation-coefficient fitting) and
``sweep`` (analytic-vs-simulated deviation grids).  Every command accepts
``--format json|csv`` and ``--out PATH``; the file receives exactly what
is printed.  Exit codes: 0 success, 2 invalid range/arguments, 3 missing
correlation coefficients, 4 simulation failure, 5 fit failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import cache, fitting, gue, total, wigner
from .capacity import METHOD_AUTO, METHOD_GUE, METHOD_WIGNER, per_mode_stats
from .channel import ChannelSpec
from .errors import (
    CalibrationError,
    CorrelationRangeError,
    EnsembleError,
    FitError,
    SdmCapError,
    TrialError,
    UnsupportedOrderError,
)
from .mc import (
    McConfig,
    POWER_CONTROL_ENSEMBLE,
    POWER_CONTROL_TRIAL,
    result_to_csv_rows,
    result_to_json,
    run_ensemble,
)
from .total import CorrelationModel

EXIT_OK = 0
EXIT_RANGE = 2
EXIT_NO_GAMMA = 3
EXIT_SIMULATION = 4
EXIT_FIT = 5


def _parse_sigma_grid(text: str):
    """Grid spec: comma list ``1,2.5,5`` or range ``lo:hi:step`` (inclusive)."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError("range grid must be lo:hi:step")
        lo, hi, step = (float(p) for p in parts)
        if step <= 0 or hi < lo:
            raise ValueError("range grid must have step > 0 and hi >= lo")
        count = int(math.floor((hi - lo) / step + 1e-9)) + 1
        return [lo + k * step for k in range(count)]
    values = [float(p) for p in text.split(",") if p.strip()]
    if not values:
        raise ValueError("empty sigma grid")
    return values


def _flatten(payload, prefix=""):
    if isinstance(payload, dict):
        for key in sorted(payload):
            yield from _flatten(payload[key], f"{prefix}{key}.")
    elif isinstance(payload, (list, tuple)):
        for idx, item in enumerate(payload):
            yield from _flatten(item, f"{prefix}{idx}.")
    else:
        yield f"{prefix[:-1]},{payload}"


def _emit(payload: dict, args) -> None:
    if args.format == "json":
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        text = "".join(line + "\n" for line in _flatten(payload))
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)


def _gamma_model(args, spec: ChannelSpec):
    if spec.sigma_mdg_db == 0:
        return CorrelationModel(gamma0=0.0, gamma1=0.0, D=spec.mode_count,
                                snr_db=spec.snr_db)
    if args.gamma:
        g0, g1 = (float(p) for p in args.gamma.split(","))
        return CorrelationModel(gamma0=g0, gamma1=g1, D=spec.mode_count,
                                snr_db=spec.snr_db)
    return cache.lookup_gamma(spec.mode_count, spec.snr_db)


def cmd_coeffs(args) -> int:
    coeffs = cache.cached_coefficients(args.modes)
    area = sum(
        2 * b * gue._double_factorial_odd(j) / (coeffs.D + 1) ** j
        for j, b in enumerate(coeffs.beta)
    )  # in units of the half Gaussian integral: equals 1 iff unit area
    variance = gue.unit_variance_check(coeffs)
    payload = {
        "schema": 1,
        "mode_count": coeffs.D,
        "alpha": coeffs.alpha,
        "beta": [f"{b.numerator}/{b.denominator}" for b in coeffs.beta],
        "unit_area_check": "PASS" if area == 1 else f"FAIL ({float(area)})",
        "unit_variance_check": (
            "PASS" if variance == 1 else f"FAIL ({float(variance)})"),
    }
    _emit(payload, args)
    return EXIT_OK


def cmd_analytic(args) -> int:
    spec = ChannelSpec(args.modes, args.snr_db, args.sigma_mdg_db,
                       freq_bins=args.bins)
    stats = per_mode_stats(spec, method=args.method)
    model = _gamma_model(args, spec)
    if model is None:
        sys.stderr.write(
            f"no fitted correlation coefficients for D={spec.mode_count}, "
            f"SNR={spec.snr_db} dB; run `fit` first or pass --gamma G0,G1\n"
        )
        return EXIT_NO_GAMMA

    if spec.sigma_mdg_db == 0:
        exact_mean = spec.mode_count * math.log2(1.0 + spec.snr_linear)
    elif stats.method == METHOD_GUE:
        coeffs = gue.derive_coefficients(spec.mode_count)
        exact_mean = total.exact_total_mean(spec, gue.unit_variance_pdf(coeffs))
    else:
        exact_mean = total.exact_total_mean(
            spec, lambda x: wigner.semicircle_pdf(x, 1.0, 0.0),
            support=(-2.0, 2.0),
        )

    tstats = total.total_stats(stats, model, spec.sigma_mdg_db,
                               mu_ct_exact=exact_mean)
    tstats = total.apply_frequency_diversity(tstats, args.bins)
    outage = total.outage_capacity(tstats.mu_ct, tstats.sigma_ct, args.pout)

    payload = {
        "schema": 1,
        "mode_count": spec.mode_count,
        "snr_db": spec.snr_db,
        "sigma_mdg_db": spec.sigma_mdg_db,
        "method": stats.method,
        "freq_bins": args.bins,
        "p_out": args.pout,
        "gamma0": model.gamma0,
        "gamma1": model.gamma1,
        "mu_lambda_db": stats.mu_lambda_db,
        "per_mode_gain_mean_db": list(stats.gain_means),
        "per_mode_gain_std_db": list(stats.gain_sigmas),
        "per_mode_cap_mean_bits_per_s_per_hz": list(stats.cap_means),
        "per_mode_cap_std_bits_per_s_per_hz": list(stats.cap_sigmas),
        "cap_correlation": total.correlation_matrix(
            spec.mode_count, spec.sigma_mdg_db, model),
        "total_mean_bits_per_s_per_hz": tstats.mu_ct,
        "total_mean_exact_bits_per_s_per_hz": tstats.mu_ct_exact,
        "total_std_bits_per_s_per_hz": tstats.sigma_ct * math.sqrt(args.bins),
        "total_std_diversity_bits_per_s_per_hz": tstats.sigma_ct,
        "outage_capacity_bits_per_s_per_hz": outage,
    }
    _emit(payload, args)
    return EXIT_OK


def cmd_simulate(args) -> int:
    spec = ChannelSpec(args.modes, args.snr_db, args.sigma_mdg_db,
                       freq_bins=args.bins)
    config = McConfig(
        spec=spec, sections=args.sections, trials=args.trials, seed=args.seed,
        power_control=args.power_control,
    )
    result = run_ensemble(config)
    if args.trial_csv:
        with open(args.trial_csv, "w") as fh:
            D = spec.mode_count
            header = (
                ["trial"]
                + [f"gain_db_{i}" for i in range(1, D + 1)]
                + [f"cap_{i}" for i in range(1, D + 1)]
                + ["total"]
            )
            fh.write(",".join(header) + "\n")
            for row in result_to_csv_rows(result):
                fh.write(",".join(str(v) for v in row) + "\n")
    text = result_to_json(result) + "\n"
    if args.format == "csv":
        payload = json.loads(text)
        text = "".join(line + "\n" for line in _flatten(payload))
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    return EXIT_OK


def _oracle_variances(D, snr_db, sigma_grid, trials, seed, sections):
    variances = []
    for sigma in sigma_grid:
        config = McConfig(
            spec=ChannelSpec(D, snr_db, sigma),
            sections=sections, trials=trials, seed=seed,
        )
        variances.append(run_ensemble(config).total_var)
    return variances


def cmd_fit(args) -> int:
    grid = _parse_sigma_grid(args.sigma_grid)
    oracle_vars = _oracle_variances(args.modes, args.snr_db, grid,
                                    args.trials, args.seed, args.sections)
    model = fitting.fit(args.modes, args.snr_db, grid, oracle_vars)
    cache.store_gamma(model)

    provider = fitting.default_per_mode_provider(args.modes, args.snr_db)
    analytic_vars = []
    for sigma in grid:
        a, b = fitting._variance_terms(args.modes, provider(sigma).cap_sigmas)
        analytic_vars.append(
            a + b * (model.gamma0 + model.gamma1 * sigma**total.CORRELATION_EXPONENT))
    payload = {
        "schema": 1,
        "mode_count": args.modes,
        "snr_db": args.snr_db,
        "gamma0": model.gamma0,
        "gamma1": model.gamma1,
        "sigma_grid_db": grid,
        "oracle_variances": oracle_vars,
        "analytic_variances": analytic_vars,
        "msle": fitting.msle(analytic_vars, oracle_vars),
    }
    _emit(payload, args)
    return EXIT_OK


def cmd_sweep(args) -> int:
    modes = [int(m) for m in args.modes.split(",")]
    grid = _parse_sigma_grid(args.sigma_grid)
    rows = []
    for D in modes:
        model = cache.lookup_gamma(D, args.snr_db)
        sim_vars = _oracle_variances(D, args.snr_db, grid, args.trials,
                                     args.seed, args.sections)
        if model is None:
            # no table entry: fit on this sweep's own simulated variances
            if len(grid) < 3:
                sys.stderr.write(
                    f"no fitted correlation coefficients for D={D}, "
                    f"SNR={args.snr_db} dB and the sweep grid is too small "
                    f"to fit (< 3 points)\n"
                )
                return EXIT_NO_GAMMA
            model = fitting.fit(D, args.snr_db, grid, sim_vars)
        provider = fitting.default_per_mode_provider(D, args.snr_db)
        for sigma, sim_var in zip(grid, sim_vars):
            a, b = fitting._variance_terms(D, provider(sigma).cap_sigmas)
            var = a + b * (model.gamma0
                           + model.gamma1 * sigma**total.CORRELATION_EXPONENT)
            rows.append({
                "mode_count": D,
                "snr_db": args.snr_db,
                "sigma_mdg_db": sigma,
                "sigma_ct_analytic": math.sqrt(max(var, 0.0)),
                "sigma_ct_sim": math.sqrt(max(sim_var, 0.0)),
            })
    payload = {"schema": 1, "rows": rows}
    if args.format == "csv":
        header = ["mode_count", "snr_db", "sigma_mdg_db",
                  "sigma_ct_analytic", "sigma_ct_sim"]
        text = ",".join(header) + "\n" + "".join(
            ",".join(str(r[k]) for k in header) + "\n" for r in rows)
        sys.stdout.write(text)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
    else:
        _emit(payload, args)
    return EXIT_OK


def _add_common(parser):
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", default=None, help="also write the report here")


def _add_spec_flags(parser):
    parser.add_argument("--modes", type=int, required=True)
    parser.add_argument("--snr-db", type=float, required=True)
    parser.add_argument("--sigma-mdg-db", type=float, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sdmcap",
        description="Capacity statistics of coupled SDM links with "
                    "mode-dependent gain",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="derive and cache density coefficients")
    p.add_argument("--modes", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("analytic", help="analytic per-mode and total statistics")
    _add_spec_flags(p)
    p.add_argument("--method", choices=(METHOD_AUTO, METHOD_GUE, METHOD_WIGNER),
                   default=METHOD_AUTO)
    p.add_argument("--pout", type=float, default=0.01)
    p.add_argument("--bins", type=int, default=1)
    p.add_argument("--gamma", default=None, metavar="G0,G1",
                   help="override the fitted correlation coefficients")
    _add_common(p)
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("simulate", help="run the Monte-Carlo channel oracle")
    _add_spec_flags(p)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sections", type=int, default=100)
    p.add_argument("--bins", type=int, default=1)
    p.add_argument("--power-control",
                   choices=(POWER_CONTROL_ENSEMBLE, POWER_CONTROL_TRIAL),
                   default=POWER_CONTROL_ENSEMBLE)
    p.add_argument("--trial-csv", default=None,
                   help="write per-trial gains/capacities here")
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fit", help="fit correlation coefficients on the oracle")
    p.add_argument("--modes", type=int, required=True)
    p.add_argument("--snr-db", type=float, required=True)
    p.add_argument("--sigma-grid", required=True,
                   help="comma list (1,2.5,5) or range (1:7.5:0.5)")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sections", type=int, default=100)
    _add_common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("sweep", help="analytic vs simulated deviation grid")
    p.add_argument("--modes", required=True, help="comma list of mode counts")
    p.add_argument("--snr-db", type=float, required=True)
    p.add_argument("--sigma-grid", required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sections", type=int, default=100)
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UnsupportedOrderError, CorrelationRangeError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_RANGE
    except (CalibrationError, EnsembleError, TrialError) as exc:
        sys.stderr.write(f"simulation error: {exc}\n")
        return EXIT_SIMULATION
    except FitError as exc:
        sys.stderr.write(f"fit error: {exc}\n")
        return EXIT_FIT
    except SdmCapError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
