"""Six-method comparison on the Cameraman and Satellite protocols.

Cameraman: 256x256 photograph, non-symmetric 17x17 blur, 2 % noise, 9
pixels cropped from each side (238x238 observed), reflective boundaries.
Needs scikit-image for the photograph (``pip install scikit-image``).

Satellite: a synthetic satellite on a black sky, blurred by a full-size
anisotropic Gaussian (atmospheric-like) PSF, about 1 % noise, zero
boundaries. The original data set is not redistributable, so the scene
and PSF here are stand-ins and the numbers are only indicative.

For every method the mu of least RRE is kept (oracle choice). Published
values are printed beside ours with the relative RRE deviation; these are
reported, not asserted, since noise realizations and parameter grids
differ. Results go to demos/out/table/<problem>/.

Run:  python3 demos/05_table_reproduction.py [--quick] [--seed N] [--rho R --q Q]
"""

import argparse
from pathlib import Path

import numpy as np

from structpista import NoiseSpec
from structpista.harness import ExperimentConfig, Method, compare
from structpista.scenes import cameraman, gaussian_psf, motion_psf, satellite_scene

PUBLISHED = {
    "Cameraman": {
        "AITGP": (0.111024, 24.7798, 0.729095),
        "ISTA": (0.090921, 26.5149, 0.763217),
        "PISTA_H": (0.096558, 25.9924, 0.790363),
        "PISTA_L": (0.094853, 26.1471, 0.795061),
        "SPISTA_H": (0.088796, 26.7203, 0.840145),
        "SPISTA_L": (0.090182, 26.5857, 0.834532),
    },
    "Satellite": {
        "AITGP": (0.222783, 26.6708, 0.742416),
        "ISTA": (0.286179, 24.4956, 0.657111),
        "PISTA_H": (0.192146, 27.9558, 0.928584),
        "PISTA_L": (0.193730, 27.8844, 0.916993),
        "SPISTA_H": (0.187970, 28.1466, 0.934876),
        "SPISTA_L": (0.189147, 28.0924, 0.924931),
    },
}


def problems(quick: bool, seed: int):
    m = 128 if quick else 256
    try:
        cam = cameraman(m)
        crop = 9 * m // 256
        psf = motion_psf(17 * m // 256 | 1, angle_deg=30)
        yield "Cameraman", ExperimentConfig(cam, psf, bc="reflective", noise=NoiseSpec(2.0, seed),
                                            crop_margin=crop)
    except ImportError:
        print("scikit-image not installed: skipping Cameraman")
    sat = satellite_scene(m)
    psf = gaussian_psf(m, (5.0, 3.0), 30.0)
    yield "Satellite", ExperimentConfig(sat, psf, bc="zero", noise=NoiseSpec(1.0, seed))


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--quick", action="store_true", help="half-size images")
    parser.add_argument("--seed", type=int, default=2024)
    parser.add_argument("--workers", type=int, default=4)
    parser.add_argument("--rho", type=float, default=0.05)
    parser.add_argument("--q", type=float, default=0.7)
    args = parser.parse_args()

    root = Path(__file__).parent / "out" / "table"
    for name, cfg in problems(args.quick, args.seed):
        cfg.mu_grid = tuple(np.logspace(-4, -1, 8))
        cfg.out_dir = root / name.lower()
        cfg.workers = args.workers
        cfg.rho, cfg.q = args.rho, args.q
        rows = compare(cfg)
        print(f"\n{name} (seed {args.seed}, rho {args.rho}, q {args.q})")
        print(f"  {'method':9s} {'mu':>9s} {'iter':>5s} {'RRE':>8s} {'PSNR':>7s} {'SSIM':>7s}"
              f"   {'pub. RRE':>9s} {'dev.':>6s}  status")
        for r in rows:
            pub = PUBLISHED[name][r.method][0]
            dev = f"{r.rre / pub - 1:+6.0%}" if pub and np.isfinite(r.rre) else "     -"
            pub_s = f"{pub:9.6f}" if pub else "        -"
            print(f"  {r.method:9s} {r.mu:9.2e} {r.iterations:5d} {r.rre:8.4f} {r.psnr:7.2f} "
                  f"{r.ssim:7.4f}   {pub_s} {dev}  {r.status}")
        failed = sorted({m.value for m in Method} - {r.method for r in rows})
        if failed:
            print(f"  no successful mu for: {', '.join(failed)}")


if __name__ == "__main__":
    main()
