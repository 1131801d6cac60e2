"""Slow, loop-based reference implementations used only by the tests.

Nothing here shares code with the package: boundary extensions are written
out index by index, the DFT is a double sum, SSIM is evaluated window by
window.
"""

import numpy as np


def extend_1d(t, m, bc):
    """Extension of sample ``t`` of a length-``m`` signal as ``[(index, coeff)]``."""
    if 0 <= t < m:
        return [(t, 1.0)]
    if bc == "zero":
        return []
    if bc == "periodic":
        return [(t % m, 1.0)]
    if bc == "reflective":
        s = -t - 1 if t < 0 else 2 * m - 1 - t
        return extend_1d(s, m, bc)
    if bc == "antireflective":
        # x(-s) = 2 x(0) - x(s),  x(m-1+s) = 2 x(m-1) - x(m-1-s)
        if t < 0:
            pivot, mirror = 0, -t
        else:
            pivot, mirror = m - 1, 2 * (m - 1) - t
        out = [(pivot, 2.0)]
        out += [(i, -c) for i, c in extend_1d(mirror, m, bc)]
        return out
    raise ValueError(bc)


def dense_blur(mask, center, m, bc):
    """``y[i, j] = sum_ab mask[a, b] x_ext[i + cr - a, j + cc - b]`` as a matrix."""
    k = mask.shape[0]
    cr, cc = center
    K = np.zeros((m * m, m * m))
    for i in range(m):
        for j in range(m):
            for a in range(k):
                for b in range(k):
                    for p, cp in extend_1d(i + cr - a, m, bc):
                        for q, cq in extend_1d(j + cc - b, m, bc):
                            K[i * m + j, p * m + q] += mask[a, b] * cp * cq
    return K


def naive_dft2(x):
    """Unnormalized 2-D DFT by double sum."""
    m = x.shape[0]
    out = np.zeros((m, m), dtype=complex)
    n = np.arange(m)
    for k in range(m):
        for l in range(m):
            phase = np.exp(-2j * np.pi * (np.outer(n, np.ones(m)) * k + np.outer(np.ones(m), n) * l) / m)
            out[k, l] = np.sum(x * phase)
    return out


def framelet_1d(m):
    """``W_0, W_1, W_2`` built from the masks with a mirrored signal."""
    masks = [np.array([1, 2, 1]) / 4, np.array([-1, 0, 1]) * np.sqrt(2) / 4,
             np.array([-1, 2, -1]) / 4]
    mats = []
    for mask in masks:
        W = np.zeros((m, m))
        for i in range(m):
            for off, c in zip((-1, 0, 1), mask):
                for p, cp in extend_1d(i + off, m, "reflective"):
                    W[i, p] += c * cp
        mats.append(W)
    return mats


def ssim_direct(x, y, L=1.0, win=11, sigma=1.5):
    """Mean SSIM by explicit loops over every fully contained window."""
    ax = np.arange(win) - (win - 1) / 2
    g = np.exp(-(ax ** 2) / (2 * sigma ** 2))
    w = np.outer(g, g)
    w /= w.sum()
    c1, c2 = (0.01 * L) ** 2, (0.03 * L) ** 2
    m = x.shape[0]
    vals = []
    for i in range(m - win + 1):
        for j in range(m - win + 1):
            a = x[i:i + win, j:j + win]
            b = y[i:i + win, j:j + win]
            mu_a, mu_b = np.sum(w * a), np.sum(w * b)
            va = np.sum(w * (a - mu_a) ** 2)
            vb = np.sum(w * (b - mu_b) ** 2)
            cov = np.sum(w * (a - mu_a) * (b - mu_b))
            vals.append((2 * mu_a * mu_b + c1) * (2 * cov + c2)
                        / ((mu_a ** 2 + mu_b ** 2 + c1) * (va + vb + c2)))
    return float(np.mean(vals))


def alpha_bisection(s, w, rr, t, iters=400):
    """Root of ``alpha ||(s + alpha w)^{-1} r|| = t ||r||`` by geometric bisection."""
    target = t * np.sqrt(rr.sum())

    def lhs(a):
        return np.sqrt(np.sum((a / (s + a * w)) ** 2 * rr))

    lo, hi = 1e-300, 1.0
    while lhs(hi) < target:
        hi *= 2.0
    for _ in range(iters):
        mid = np.sqrt(lo * hi) if hi / lo > 4 else 0.5 * (lo + hi)
        if lhs(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
