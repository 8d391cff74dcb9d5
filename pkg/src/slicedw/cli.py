"""Command-line front end: distances, training runs, figure-style artifacts.

Subcommands
-----------
distance
    Sliced (and optionally exact) Wasserstein cost between two CSV clouds.
train
    Full training run driven by a config file and/or flags, writing loss
    logs, checkpoints, latent scatters and decoded-grid artifacts.
divergence-curve
    W1 and Jensen-Shannon divergence of a shifted uniform versus shift.
prior-preview
    Sample a latent prior and render it.

Config files are flat UTF-8 ``key=value`` lines ('#' starts a comment);
command-line flags override file values.  Unknown keys are rejected.  Every
run directory receives a ``resolved_config.txt`` capturing the exact
settings.  Exit codes: 0 success, 1 usage or config error, 2 runtime or
numeric failure.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io as cloud_io
from .distances import (
    EXACT_SOLVER_DEFAULT_CAP,
    exact_wasserstein_small,
    js_divergence_1d,
    quantile_wasserstein_1d,
    sliced_wasserstein_per_direction,
)
from .nn import forward, save_network
from .samplers import (
    PRIOR_KINDS,
    PriorSpec,
    derive_rng,
    sample_prior,
    sample_swiss_roll_labeled,
    sample_unit_sphere,
)
from .svgplot import line_svg, scatter_svg
from .training import TrainConfig, build_networks, latent_grid_decode, train

__all__ = ["main"]


class UsageError(Exception):
    """Bad flags, bad config keys or invalid inputs detected before running."""


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; the contract here is 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------
# train config keys: (key, parser, default)
# --------------------------------------------------------------------------


def _parse_hidden(text):
    sizes = tuple(int(part) for part in str(text).split(",") if part != "")
    if not sizes:
        raise ValueError("hidden_sizes must list at least one width")
    return sizes


TRAIN_KEYS = {
    "dataset": (str, "swiss_roll"),
    "output_dir": (str, "run"),
    "seed": (int, 0),
    "lambda": (float, 10.0),
    "projections": (int, 50),
    "batch_size": (int, 500),
    "epochs": (int, 20),
    "latent_dim": (int, 2),
    "recon_loss": (str, "squared"),
    "optimizer": (str, "rmsprop"),
    "learning_rate": (float, 1e-3),
    "hidden_sizes": (_parse_hidden, (128, 128)),
    "eval_interval": (int, 10),
    "eval_projections": (int, 100),
    "early_stop_patience": (int, 0),
    "prior.kind": (str, "uniform_box"),
    "prior.half_width": (float, 1.0),
    "prior.r_inner": (float, 0.5),
    "prior.r_outer": (float, 1.0),
    "prior.radius": (float, 1.0),
    "prior.noise": (float, 0.1),
    "prior.exponent": (float, 2.0),
    "swiss_roll_size": (int, 5000),
    "swiss_roll_noise": (float, 0.0),
}


def parse_config_file(path, known_keys):
    """Read a flat key=value config file, rejecting unknown keys."""
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in known_keys:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = value.strip()
    return values


def resolve_train_settings(args):
    """Defaults, then config file, then explicit flags."""
    settings = {key: default for key, (_, default) in TRAIN_KEYS.items()}
    raw = {}
    if args.config:
        raw.update(parse_config_file(args.config, TRAIN_KEYS.keys()))
    for key in TRAIN_KEYS:
        flag_value = getattr(args, _flag_dest(key))
        if flag_value is not None:
            raw[key] = flag_value
    for key, value in raw.items():
        parse, _ = TRAIN_KEYS[key]
        try:
            settings[key] = parse(value)
        except ValueError as exc:
            raise UsageError(f"bad value for {key}: {value!r} ({exc})") from exc
    return settings


def _flag_dest(key):
    return key.replace(".", "_")


def write_resolved_config(path, settings):
    lines = []
    for key in sorted(settings):
        value = settings[key]
        if isinstance(value, tuple):
            value = ",".join(str(v) for v in value)
        elif isinstance(value, float):
            value = cloud_io.format_float(value)
        lines.append(f"{key}={value}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _prior_from_settings(settings, dim):
    return PriorSpec(
        kind=settings["prior.kind"],
        dim=dim,
        half_width=settings["prior.half_width"],
        r_inner=settings["prior.r_inner"],
        r_outer=settings["prior.r_outer"],
        radius=settings["prior.radius"],
        noise=settings["prior.noise"],
        exponent=settings["prior.exponent"],
    )


# --------------------------------------------------------------------------
# distance
# --------------------------------------------------------------------------


def cmd_distance(args):
    try:
        cloud_a = cloud_io.load_cloud(args.cloud_a)
        cloud_b = cloud_io.load_cloud(args.cloud_b)
    except (OSError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    if cloud_a.shape != cloud_b.shape:
        raise UsageError(
            f"clouds must have equal shape, got {cloud_a.shape} vs {cloud_b.shape}"
        )
    if args.exact and cloud_a.shape[0] > EXACT_SOLVER_DEFAULT_CAP:
        raise UsageError(
            f"--exact is capped at {EXACT_SOLVER_DEFAULT_CAP} points (got {cloud_a.shape[0]}); "
            "drop --exact to report the sliced estimate only"
        )

    rng = derive_rng(args.seed)
    thetas = sample_unit_sphere(args.projections, cloud_a.shape[1], rng)
    per_dir = sliced_wasserstein_per_direction(cloud_a, cloud_b, thetas, args.p)
    sw = float(per_dir.mean())
    se = float(per_dir.std(ddof=1) / np.sqrt(per_dir.size)) if per_dir.size > 1 else 0.0

    report = {
        "p": args.p,
        "num_projections": args.projections,
        "seed": args.seed,
        "sliced_wasserstein": sw,
        "sw_standard_error": se,
    }
    if args.exact:
        report["exact_wasserstein"] = exact_wasserstein_small(cloud_a, cloud_b, args.p)
    for key, value in report.items():
        print(f"{key}={cloud_io.format_float(value) if isinstance(value, float) else value}")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(",".join(report.keys()) + "\n")
            fh.write(
                ",".join(
                    cloud_io.format_float(v) if isinstance(v, float) else str(v)
                    for v in report.values()
                )
                + "\n"
            )
    return 0


# --------------------------------------------------------------------------
# train
# --------------------------------------------------------------------------


def _load_dataset(settings):
    """Return (points, color_values or None) for the configured dataset."""
    name = settings["dataset"]
    if name == "swiss_roll":
        rng = derive_rng(settings["seed"], 17)
        points, t = sample_swiss_roll_labeled(
            settings["swiss_roll_size"], settings["swiss_roll_noise"], rng
        )
        return points, t
    if name.startswith("csv:"):
        path = name[len("csv:") :]
        try:
            return cloud_io.load_cloud(path), None
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot load dataset {path}: {exc}") from exc
    raise UsageError(f"unknown dataset {name!r}; expected swiss_roll or csv:<path>")


def cmd_train(args):
    settings = resolve_train_settings(args)
    data, colors = _load_dataset(settings)
    try:
        prior = _prior_from_settings(settings, settings["latent_dim"])
        config = TrainConfig(
            latent_dim=settings["latent_dim"],
            prior=prior,
            latent_weight=settings["lambda"],
            num_projections=settings["projections"],
            batch_size=settings["batch_size"],
            epochs=settings["epochs"],
            hidden_sizes=settings["hidden_sizes"],
            recon_loss=settings["recon_loss"],
            optimizer=settings["optimizer"],
            learning_rate=settings["learning_rate"],
            seed=settings["seed"],
            eval_interval=settings["eval_interval"],
            eval_projections=settings["eval_projections"],
            early_stop_patience=settings["early_stop_patience"],
        )
        if config.batch_size > data.shape[0]:
            raise ValueError(
                f"batch_size {config.batch_size} exceeds dataset size {data.shape[0]}"
            )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    out = Path(settings["output_dir"])
    out.mkdir(parents=True, exist_ok=True)
    write_resolved_config(out / "resolved_config.txt", settings)

    # Latent scatter before training: same init stream the trainer uses.
    encoder_0, _ = build_networks(data.shape[1], config)
    z_before = forward(encoder_0, data)[0]
    _write_latent_svg(out / "latent_before.svg", z_before, colors, "latent before training")

    record = train(data, config)

    z_after = forward(record.encoder, data)[0]
    _write_latent_svg(out / "latent_after.svg", z_after, colors, "latent after training")
    cloud_io.write_loss_log(out / "loss_log.csv", record.steps)
    cloud_io.write_wall_ms_log(out / "wall_ms.csv", record.steps)
    cloud_io.write_eval_log(out / "eval_log.csv", record.evals)
    save_network(record.encoder, out / "encoder.json")
    save_network(record.decoder, out / "decoder.json")
    if config.latent_dim == 2:
        decoded = latent_grid_decode(record.decoder, 25, prior.bounding_box())
        cloud_io.save_cloud(out / "grid_decoded.csv", decoded)

    first, last = record.evals[0], record.evals[-1]
    print(f"steps={len(record.steps)}")
    print(f"sw_latent_initial={cloud_io.format_float(first.sw_latent)}")
    print(f"sw_latent_final={cloud_io.format_float(last.sw_latent)}")
    print(f"recon_initial={cloud_io.format_float(first.recon_cost)}")
    print(f"recon_final={cloud_io.format_float(last.recon_cost)}")
    print(f"grid_occupancy_final={cloud_io.format_float(last.grid_occupancy)}")
    print(f"output_dir={out}")
    return 0


def _write_latent_svg(path, z, colors, title):
    pts = z if z.shape[1] >= 2 else np.column_stack((z[:, 0], np.zeros(z.shape[0])))
    Path(path).write_text(scatter_svg(pts, colors, title=title), encoding="utf-8")


# --------------------------------------------------------------------------
# divergence-curve
# --------------------------------------------------------------------------


def _uniform_pdf(center, width=1.0):
    lo, hi = center - width / 2.0, center + width / 2.0

    def pdf(xs):
        return ((xs >= lo) & (xs <= hi)).astype(np.float64) / width

    return pdf


def cmd_divergence_curve(args):
    if args.steps < 2:
        raise UsageError(f"steps must be >= 2, got {args.steps}")
    if not args.tau_max > args.tau_min:
        raise UsageError(f"need tau_min < tau_max, got [{args.tau_min}, {args.tau_max}]")
    if args.bins < 2:
        raise UsageError(f"bins must be >= 2, got {args.bins}")
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_resolved_config(
        out / "resolved_config.txt",
        {
            "tau_min": args.tau_min,
            "tau_max": args.tau_max,
            "steps": args.steps,
            "bins": args.bins,
        },
    )

    taus = np.linspace(args.tau_min, args.tau_max, args.steps)
    base = _uniform_pdf(0.0)
    w1 = np.empty_like(taus)
    js = np.empty_like(taus)
    for i, tau in enumerate(taus):
        w1[i] = quantile_wasserstein_1d(lambda t: t - 0.5, lambda t, s=tau: t - 0.5 + s, 256, p=1)
        lo = min(-0.5, tau - 0.5) - 0.25
        hi = max(0.5, tau + 0.5) + 0.25
        js[i] = js_divergence_1d(base, _uniform_pdf(tau), (lo, hi, args.bins))

    with open(out / "divergence_curve.csv", "w", encoding="utf-8", newline="") as fh:
        fh.write("tau,w1,js\n")
        for tau, a, b in zip(taus, w1, js):
            fh.write(
                f"{cloud_io.format_float(tau)},{cloud_io.format_float(a)},{cloud_io.format_float(b)}\n"
            )
    (out / "divergence_curve.svg").write_text(
        line_svg(taus, {"W1": w1, "JS": js}, title="shifted-uniform divergences"),
        encoding="utf-8",
    )
    print(f"output_dir={out}")
    return 0


# --------------------------------------------------------------------------
# prior-preview
# --------------------------------------------------------------------------


def cmd_prior_preview(args):
    try:
        spec = PriorSpec(
            kind=args.kind,
            dim=args.dim,
            half_width=args.half_width,
            r_inner=args.r_inner,
            r_outer=args.r_outer,
            radius=args.radius,
            noise=args.noise,
            exponent=args.exponent,
        )
        if args.num_samples < 1:
            raise ValueError("num_samples must be >= 1")
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_resolved_config(
        out / "resolved_config.txt",
        {
            "kind": args.kind,
            "dim": args.dim,
            "num_samples": args.num_samples,
            "seed": args.seed,
            "half_width": args.half_width,
            "r_inner": args.r_inner,
            "r_outer": args.r_outer,
            "radius": args.radius,
            "noise": args.noise,
            "exponent": args.exponent,
        },
    )
    samples = sample_prior(spec, args.num_samples, derive_rng(args.seed))
    cloud_io.save_cloud(out / "prior_preview.csv", samples)
    pts = samples if spec.dim >= 2 else np.column_stack((samples[:, 0], np.zeros(len(samples))))
    (out / "prior_preview.svg").write_text(
        scatter_svg(pts, title=f"{args.kind} prior"), encoding="utf-8"
    )
    print(f"output_dir={out}")
    return 0


# --------------------------------------------------------------------------
# parser wiring
# --------------------------------------------------------------------------


def build_parser():
    parser = _Parser(prog="slicedw", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_dist = sub.add_parser("distance", help="distance between two CSV point clouds")
    p_dist.add_argument("cloud_a")
    p_dist.add_argument("cloud_b")
    p_dist.add_argument("--p", type=int, choices=(1, 2), default=2, help="cost exponent")
    p_dist.add_argument("--projections", type=int, default=50, help="number of random directions")
    p_dist.add_argument("--seed", type=int, default=0)
    p_dist.add_argument("--exact", action="store_true", help="also solve the exact assignment")
    p_dist.add_argument("--csv", default=None, help="write the report as a one-row CSV")
    p_dist.set_defaults(func=cmd_distance)

    p_train = sub.add_parser("train", help="run a training experiment")
    p_train.add_argument("--config", default=None, help="key=value config file")
    for key, (parse, default) in TRAIN_KEYS.items():
        flag = "--" + key.replace(".", "-").replace("_", "-")
        p_train.add_argument(
            flag,
            dest=_flag_dest(key),
            default=None,
            metavar="V",
            help=f"override {key} (default {default})",
        )
    p_train.set_defaults(func=cmd_train)

    p_curve = sub.add_parser(
        "divergence-curve", help="W1 and JS of a shifted uniform versus the shift"
    )
    p_curve.add_argument("--tau-min", type=float, default=-3.0)
    p_curve.add_argument("--tau-max", type=float, default=3.0)
    p_curve.add_argument("--steps", type=int, default=61)
    p_curve.add_argument("--bins", type=int, default=50_000, help="quadrature cells for JS")
    p_curve.add_argument("--output-dir", default="divergence_curve")
    p_curve.set_defaults(func=cmd_divergence_curve)

    p_prior = sub.add_parser("prior-preview", help="sample and render a latent prior")
    p_prior.add_argument("--kind", choices=PRIOR_KINDS, default="uniform_box")
    p_prior.add_argument("--dim", type=int, default=2)
    p_prior.add_argument("--num-samples", type=int, default=2000)
    p_prior.add_argument("--seed", type=int, default=0)
    p_prior.add_argument("--half-width", type=float, default=1.0)
    p_prior.add_argument("--r-inner", type=float, default=0.5)
    p_prior.add_argument("--r-outer", type=float, default=1.0)
    p_prior.add_argument("--radius", type=float, default=1.0)
    p_prior.add_argument("--noise", type=float, default=0.1)
    p_prior.add_argument("--exponent", type=float, default=2.0)
    p_prior.add_argument("--output-dir", default="prior_preview")
    p_prior.set_defaults(func=cmd_prior_preview)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"slicedw: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # runtime/numeric failure
        print(f"slicedw: failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
