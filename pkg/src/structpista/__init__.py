"""Preconditioned iterated soft-thresholding for tight-frame image deblurring.

The package is organised by layer:

``imagecore``   images, PSFs, PGM / PSF-text I/O, seeded noise
``spectral``    DFT conventions, BCCB eigenvalues, spectrum <-> mask
``boundary``    blur operators under Zero / Periodic / Reflective /
                Anti-Reflective boundary conditions
``framelet``    linear B-spline tight frame
``regop``       regularization weights ``h(CC*)`` and Laplacian
``alphasolve``  Newton solver for the nonstationary Tikhonov parameter
``pista``       ISTA, AIT-GP, PISTA and Struct-PISTA drivers
``metrics``     RRE, PSNR, SSIM
``harness``     simulation, mu sweeps and result files (CLI in ``cli``)
"""

from .alphasolve import AlphaProblem, TargetUnattainable, phi, phi_prime, solve_alpha
from .boundary import BlurOperator, BoundaryCondition, pad
from .framelet import analysis, frame_norm_bound, synthesis
from .imagecore import NoiseSpec, Psf, add_noise, read_pgm, write_pgm
from .metrics import psnr, rre, ssim
from .pista import (
    SolverConfig,
    SolverState,
    run_aitgp,
    run_ista,
    run_pista,
    run_struct_pista,
    soft_threshold,
)
from .regop import RegKind, RegWeights, h_weights, lambda_weights
from .spectral import circ_apply, fft2, ifft2, laplacian_symbol, psf_eigenvalues, spectrum_to_mask

__version__ = "0.1.0"
