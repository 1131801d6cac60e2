"""Command-line entry point.

``structpista simulate|restore|sweep|compare|oracle-check``. Exit status is
0 on success, 1 on usage errors and 2 when a solver fails.

Images and PSFs are given as files or as built-in generators::

    --true-image synthetic:64      --psf motion:9
    --true-image satellite:128     --psf gaussian:128:2.5:1.5:30
    --true-image cameraman:256     --psf double-motion:9
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import scenes
from .boundary import BlurOperator, BoundaryCondition
from .framelet import analysis, synthesis
from .harness import ExperimentConfig, Method, run_experiment, simulate
from .imagecore import NoiseSpec, Psf, load_psf, read_pgm, write_pgm

FAILED_PREFIXES = ("error", "alpha-failed", "non-finite")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _image_arg(spec: str) -> np.ndarray:
    if Path(spec).exists():
        return read_pgm(spec)
    name, *args = spec.split(":")
    try:
        size = int(args[0]) if args else None
        if name == "synthetic":
            return scenes.synthetic_scene(size or 64, int(args[1]) if len(args) > 1 else 0)
        if name == "satellite":
            return scenes.satellite_scene(size or 128)
        if name == "cameraman":
            return scenes.cameraman(size or 256)
    except (ValueError, IndexError) as exc:
        raise UsageError(f"bad image spec {spec!r}: {exc}") from exc
    raise UsageError(f"no such image file or generator: {spec!r}")


def _psf_arg(spec: str) -> Psf:
    if Path(spec).exists():
        return load_psf(spec)
    name, *args = spec.split(":")
    try:
        vals = [float(a) for a in args]
        k = int(vals[0]) if vals else 9
        if name == "motion":
            return scenes.motion_psf(k, *vals[1:3])
        if name == "double-motion":
            return scenes.double_motion_psf(k)
        if name == "gaussian":
            sigma = tuple(vals[1:3]) if len(vals) >= 3 else (2.0, 2.0)
            rot = vals[3] if len(vals) > 3 else 0.0
            return scenes.gaussian_psf(k, sigma, rot)
    except (ValueError, IndexError) as exc:
        raise UsageError(f"bad PSF spec {spec!r}: {exc}") from exc
    raise UsageError(f"no such PSF file or generator: {spec!r}")


def _mu_grid(text: str) -> list[float]:
    """``a,b,c`` or ``log:lo:hi:n`` (``n`` values from ``10**lo`` to ``10**hi``)."""
    try:
        if text.startswith("log:"):
            lo, hi, n = text[4:].split(":")
            return list(np.logspace(float(lo), float(hi), int(n)))
        return [float(v) for v in text.split(",") if v]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad mu grid {text!r}") from exc


def _data_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--true-image", required=True, help="PGM file or generator")
    p.add_argument("--psf", required=True, help="PSF text/PGM file or generator")
    p.add_argument("--noise", type=float, default=1.0, help="noise level in percent")
    p.add_argument("--seed", type=int, required=True, help="noise seed (PCG64)")
    p.add_argument("--crop-margin", type=int, default=0)
    p.add_argument("--out-dir", type=Path, default=None)


def _solver_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--bc", type=BoundaryCondition.parse, default=BoundaryCondition.REFLECTIVE,
                   help="zero, periodic, reflective or antireflective")
    p.add_argument("--rho", type=float, default=0.1)
    p.add_argument("--q", type=float, default=0.5)
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--c1-scaling", action="store_true")
    p.add_argument("--alg2-update-scaled", action="store_true")
    p.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="structpista", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    methods = [m.value for m in Method]

    p = sub.add_parser("simulate", help="blur, crop and add noise; print delta")
    _data_args(p)

    p = sub.add_parser("restore", help="one method at one mu")
    _data_args(p)
    _solver_args(p)
    p.add_argument("--method", choices=methods, required=True)
    p.add_argument("--mu", type=float, default=0.0)

    p = sub.add_parser("sweep", help="one method over a mu grid")
    _data_args(p)
    _solver_args(p)
    p.add_argument("--method", choices=methods, required=True)
    p.add_argument("--mu-grid", type=_mu_grid, default=_mu_grid("log:-4:-1:8"),
                   help="comma list or log:lo:hi:n")

    p = sub.add_parser("compare", help="all six methods over a mu grid")
    _data_args(p)
    _solver_args(p)
    p.add_argument("--mu-grid", type=_mu_grid, default=_mu_grid("log:-4:-1:8"))

    p = sub.add_parser("oracle-check", help="dense small-size verification")
    p.add_argument("--sizes", type=lambda s: [int(v) for v in s.split(",")], default=[5, 8])
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-12)
    return parser


def _experiment(args, methods, mu_grid) -> ExperimentConfig:
    return ExperimentConfig(
        true_image=_image_arg(args.true_image), psf=_psf_arg(args.psf), bc=args.bc,
        noise=NoiseSpec(args.noise, args.seed), crop_margin=args.crop_margin,
        methods=methods, mu_grid=mu_grid, rho=args.rho, q=args.q,
        max_iter=args.max_iter, c1_scaling=args.c1_scaling,
        alg2_update_scaled=args.alg2_update_scaled, out_dir=args.out_dir,
        workers=args.workers,
    )


def _cmd_simulate(args) -> int:
    img, psf = _image_arg(args.true_image), _psf_arg(args.psf)
    g, f_true, delta = simulate(img, psf, NoiseSpec(args.noise, args.seed), args.crop_margin)
    if args.out_dir is not None:
        out = args.out_dir
        out.mkdir(parents=True, exist_ok=True)
        write_pgm(g, out / "observed.pgm")
        write_pgm(f_true, out / "truth.pgm")
        np.save(out / "observed.npy", g)
        np.save(out / "truth.npy", f_true)
        meta = {"delta": delta, "seed": args.seed, "noise_percent": args.noise,
                "shape": list(g.shape)}
        (out / "simulate.json").write_text(json.dumps(meta, indent=2) + "\n")
    print(f"observed {g.shape[0]}x{g.shape[1]}  delta {delta!r}")
    return 0


def _print_rows(rows) -> None:
    print(f"{'method':9s} {'mu':>10s} {'iter':>5s} {'rre':>9s} {'psnr':>8s} {'ssim':>8s}  status")
    for r in rows:
        star = " *" if r.best else ""
        print(f"{r.method:9s} {r.mu:10.4g} {r.iterations:5d} {r.rre:9.6f} {r.psnr:8.4f} "
              f"{r.ssim:8.6f}  {r.status}{star}")


def _cmd_run(args, methods, mu_grid) -> int:
    rows = run_experiment(_experiment(args, methods, mu_grid))
    _print_rows(rows)
    failed = [r for r in rows if r.status.startswith(FAILED_PREFIXES)]
    return 2 if failed else 0


def oracle_check(sizes=(5, 8), trials=20, seed=0) -> dict:
    """Compare the matrix-free operators with explicitly assembled matrices.

    Returns the worst absolute error for every boundary condition and for
    frame reconstruction, keyed by name.
    """
    rng = np.random.default_rng(seed)
    worst = {}
    for bc in BoundaryCondition:
        err = 0.0
        for m in sizes:
            for _ in range(trials):
                k = int(rng.integers(1, m + 1))
                mask = rng.standard_normal((k, k))
                center = (int(rng.integers(0, k)), int(rng.integers(0, k)))
                op = BlurOperator(Psf(mask, center), bc, m)
                dense = op.dense_assemble()
                x, y = rng.standard_normal((m, m)), rng.standard_normal((m, m))
                err = max(err,
                          np.abs(op.apply(x).ravel() - dense @ x.ravel()).max(),
                          np.abs(op.apply_adjoint(y).ravel() - dense.T @ y.ravel()).max())
        worst[bc.value] = float(err)
    err = 0.0
    for m in sizes:
        x = rng.standard_normal((m, m))
        err = max(err, np.abs(synthesis(analysis(x)) - x).max())
    worst["frame"] = float(err)
    return worst


def _cmd_oracle(args) -> int:
    worst = oracle_check(args.sizes, args.trials, args.seed)
    ok = True
    for name, err in worst.items():
        passed = err <= args.tol
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'}  {name:15s} max abs error {err:.3e}")
    return 0 if ok else 2


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "restore":
            return _cmd_run(args, [args.method], [args.mu])
        if args.command == "sweep":
            return _cmd_run(args, [args.method], args.mu_grid)
        if args.command == "compare":
            return _cmd_run(args, list(Method), args.mu_grid)
        return _cmd_oracle(args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"structpista: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
