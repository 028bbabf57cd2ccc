#!/usr/bin/env python3
"""Regenerates the frozen oracle values in tests/golden_values.hpp.

All values are computed with 50-digit arithmetic (mpmath) from the
double-precision dataset literals written to tests/golden_data.hpp, so the
C++ tests and this script see bit-identical inputs.
"""

import numpy as np
import mpmath as mp

mp.mp.dps = 50

# ---------------------------------------------------------------------------
# Frozen dataset: n=20, p=8, two active coefficients, unit noise.
# ---------------------------------------------------------------------------
rng = np.random.default_rng(20240811)
N, P = 20, 8
X = rng.standard_normal((N, P))
BETA_TRUE = np.zeros(P)
BETA_TRUE[0] = 2.0
BETA_TRUE[1] = -1.5
Y = X @ BETA_TRUE + rng.standard_normal(N)

TAU0, TAU1 = 1e-3, 2.0
S, A, B = 1.0, 0.01, 0.01
ALPHA = 0.25


def fmt(v):
    return repr(float(v))


def emit_data(path):
    with open(path, "w") as f:
        f.write("// Frozen test dataset (n=20, p=8). Generated by oracle/gen_golden.py.\n")
        f.write("#pragma once\n\n#include <array>\n\nnamespace golden {\n\n")
        f.write(f"inline constexpr int kN = {N};\ninline constexpr int kP = {P};\n\n")
        f.write("inline constexpr std::array<double, kN * kP> kX = {\n")
        for i in range(N):
            f.write("    " + ", ".join(fmt(v) for v in X[i]) + ",\n")
        f.write("};\n\n")
        f.write("inline constexpr std::array<double, kN> kY = {\n")
        for i in range(N):
            f.write(f"    {fmt(Y[i])},\n")
        f.write("};\n\n")
        f.write("inline constexpr std::array<double, kP> kBetaTrue = {")
        f.write(", ".join(fmt(v) for v in BETA_TRUE))
        f.write("};\n\n")
        f.write(f"inline constexpr double kTau0 = {fmt(TAU0)};\n")
        f.write(f"inline constexpr double kTau1 = {fmt(TAU1)};\n")
        f.write(f"inline constexpr double kS = {fmt(S)};\n")
        f.write(f"inline constexpr double kA = {fmt(A)};\n")
        f.write(f"inline constexpr double kB = {fmt(B)};\n")
        f.write(f"inline constexpr double kAlpha = {fmt(ALPHA)};\n")
        f.write("\n}  // namespace golden\n")


# ---------------------------------------------------------------------------
# High-precision helpers.
# ---------------------------------------------------------------------------

def mpm(a):
    m = mp.matrix(a.shape[0], a.shape[1] if a.ndim == 2 else 1)
    if a.ndim == 2:
        for i in range(a.shape[0]):
            for j in range(a.shape[1]):
                m[i, j] = mp.mpf(float(a[i, j]))
    else:
        for i in range(a.shape[0]):
            m[i] = mp.mpf(float(a[i]))
    return m


def log_normal_pdf(x, mean, var):
    return -mp.mpf(0.5) * mp.log(2 * mp.pi * var) - (x - mean) ** 2 / (2 * var)


def shrink(k, beta_hat, n, sigma2, tau0, tau1):
    tau = tau1 if k == 1 else tau0
    c = n * tau * tau
    bh = c * beta_hat / (c + 1)
    var = sigma2 * tau * tau / (c + 1)
    logw = -mp.mpf(0.5) * mp.log(c + 1) - n * beta_hat ** 2 / (2 * sigma2 * (c + 1))
    return bh, var, logw


def model_log_score(gamma, x, y, alpha, tau0, tau1, a, b):
    n, p = x.rows, len(gamma)
    xtx = x.T * x
    xty = x.T * y
    A_ = xtx[:, :]
    for j in range(p):
        d = mp.mpf(1) / (tau1 ** 2 if gamma[j] else tau0 ** 2)
        A_[j, j] += d
    t = (xty.T * mp.lu_solve(A_, xty))[0]
    yty = (y.T * y)[0]
    logdetL = -mp.log(mp.det(A_))
    k = sum(gamma)
    sc = mp.mpf(0)
    for j in range(p):
        sc += mp.log(alpha) if gamma[j] else mp.log(1 - alpha)
    sc += mp.mpf(0.5) * logdetL - k * mp.log(tau1) - (p - k) * mp.log(tau0)
    sc -= (mp.mpf(n) / 2 + a) * mp.log(b + (yty - t) / 2)
    return sc


def main():
    emit_data("../golden_data.hpp")
    xm = mpm(X)
    ym = mpm(Y)

    lines = []

    def put(name, val):
        lines.append(f"inline constexpr double {name} = {repr(float(val))};")

    # -- scalar density values ------------------------------------------------
    put("kSpikeSlabLogDensity", log_normal_pdf(mp.mpf(1), 0, mp.mpf(100)))
    mix = mp.log(mp.mpf("0.05") * mp.e ** log_normal_pdf(mp.mpf(2), 0, mp.mpf(100))
                 + mp.mpf("0.95") * mp.e ** log_normal_pdf(mp.mpf(2), 0, mp.mpf("1e-8")))
    put("kMarginalPriorLogDensity", mix)

    # -- shrinkage component (beta_hat=0.3, n=100, sigma2=1, tau0=1e-4) -------
    bh0, var0, logw0 = shrink(0, mp.mpf("0.3"), 100, mp.mpf(1), mp.mpf("1e-4"), mp.mpf(10))
    put("kShrinkSpikeMean", bh0)
    put("kShrinkSpikeVar", var0)
    put("kShrinkSpikeLogW", logw0)

    # -- Bernoulli posterior (n=100, sigma2=1, tau0=1e-4, tau1=10, bh=.5, a=.5)
    _, _, lw1 = shrink(1, mp.mpf("0.5"), 100, mp.mpf(1), mp.mpf("1e-4"), mp.mpf(10))
    _, _, lw0 = shrink(0, mp.mpf("0.5"), 100, mp.mpf(1), mp.mpf("1e-4"), mp.mpf(10))
    al = mp.mpf("0.5")
    prob = al * mp.e ** lw1 / (al * mp.e ** lw1 + (1 - al) * mp.e ** lw0)
    put("kGammaPosteriorProb", prob)

    # -- mixture moments (beta_hat=0.5, alpha=0.5, n=100, s2=1, t0=1e-4, t1=10)
    b1, v1, lw1b = shrink(1, mp.mpf("0.5"), 100, mp.mpf(1), mp.mpf("1e-4"), mp.mpf(10))
    b0, v0, lw0b = shrink(0, mp.mpf("0.5"), 100, mp.mpf(1), mp.mpf("1e-4"), mp.mpf(10))
    w1 = al * mp.e ** lw1b
    w0 = (1 - al) * mp.e ** lw0b
    W = w1 + w0
    mean = (w1 * b1 + w0 * b0) / W
    var = (w1 * v1 + w0 * v0) / W + w1 * w0 * (b1 - b0) ** 2 / W ** 2
    put("kMixturePosteriorMean", mean)
    put("kMixturePosteriorVar", var)

    # -- mixture CDF values at (alpha in {.05,.5,.95}) x (t in {0,.25,.5}) ----
    def mix_cdf(alpha, t):
        w1 = alpha * mp.e ** lw1b
        w0 = (1 - alpha) * mp.e ** lw0b
        W = w1 + w0
        return (w1 * mp.ncdf(t, b1, mp.sqrt(v1)) + w0 * mp.ncdf(t, b0, mp.sqrt(v0))) / W

    cdf_vals = []
    for alpha in (mp.mpf("0.05"), mp.mpf("0.5"), mp.mpf("0.95")):
        for t in (mp.mpf(0), mp.mpf("0.25"), mp.mpf("0.5")):
            cdf_vals.append(mix_cdf(alpha, t))
    lines.append("inline constexpr std::array<double, 9> kMixtureCdf = {")
    lines.append("    " + ", ".join(repr(float(v)) for v in cdf_vals))
    lines.append("};")

    # -- indeterminacy thresholds (n=100, s2=1, tau1=5, tau0=1e-6, eps=0.05) --
    n, s2, t1, t0, eps = 100, mp.mpf(1), mp.mpf(5), mp.mpf("1e-6"), mp.mpf("0.05")
    c1, c0 = n * t1 * t1, n * t0 * t0
    fac = s2 / n * (c1 + 1) * (c0 + 1) / (c1 - c0)
    hi = fac * (2 * mp.log((1 - eps) / eps) + mp.log((c1 + 1) / (c0 + 1)))
    lo = fac * (2 * mp.log(eps / (1 - eps)) + mp.log((c1 + 1) / (c0 + 1)))
    put("kIndetLower", lo)
    put("kIndetUpper", hi)

    # -- model-space scores on the first 3 columns ----------------------------
    x3 = xm[:, 0:3]
    scores3 = []
    for m in range(8):
        g = [(m >> j) & 1 for j in range(3)]
        scores3.append(model_log_score(g, x3, ym, mp.mpf(ALPHA), mp.mpf(TAU0),
                                       mp.mpf(TAU1), mp.mpf(A), mp.mpf(B)))
    lines.append("// model index m encodes gamma_j = (m >> j) & 1")
    lines.append("inline constexpr std::array<double, 8> kScoresP3 = {")
    for v in scores3:
        lines.append(f"    {repr(float(v))},")
    lines.append("};")

    # -- exhaustive marginal inclusion on the full p=8 dataset ----------------
    scores8 = []
    for m in range(1 << P):
        g = [(m >> j) & 1 for j in range(P)]
        scores8.append(model_log_score(g, xm, ym, mp.mpf(ALPHA), mp.mpf(TAU0),
                                       mp.mpf(TAU1), mp.mpf(A), mp.mpf(B)))
    mx = max(scores8)
    ws = [mp.e ** (s - mx) for s in scores8]
    Z = mp.fsum(ws)
    incl = []
    for j in range(P):
        acc = mp.fsum(w for m, w in enumerate(ws) if (m >> j) & 1)
        incl.append(acc / Z)
    lines.append("inline constexpr std::array<double, kP> kMarginalInclusion = {")
    for v in incl:
        lines.append(f"    {repr(float(v))},")
    lines.append("};")

    # -- exact posterior mean of beta (t-mixture expectation) -----------------
    emean = [mp.mpf(0)] * P
    for m in range(1 << P):
        g = [(m >> j) & 1 for j in range(P)]
        A_ = (xm.T * xm)[:, :]
        for j in range(P):
            A_[j, j] += mp.mpf(1) / (mp.mpf(TAU1) ** 2 if g[j] else mp.mpf(TAU0) ** 2)
        mu = mp.lu_solve(A_, xm.T * ym)
        w = ws[m] / Z
        for j in range(P):
            emean[j] += w * mu[j]
    lines.append("inline constexpr std::array<double, kP> kExactBetaMean = {")
    for v in emean:
        lines.append(f"    {repr(float(v))},")
    lines.append("};")

    # -- refit error for active set {0,1} using exact posterior mean ----------
    act = [0, 1]
    Xa = np.asarray(X[:, act], dtype=float)
    ba = mp.matrix([emean[j] for j in act])
    Xam = mpm(Xa)
    resid = ym - Xam * ba
    put("kRefitErrorAct01", (resid.T * resid)[0])

    # -- delta on the same active set -----------------------------------------
    d = mp.mpf(0)
    for j in range(P):
        est = emean[j] if j in act else mp.mpf(0)
        d += (est - mp.mpf(float(BETA_TRUE[j]))) ** 2
    put("kDeltaBetaAct01", d)

    # -- ridge elicitation (penalty 1.0, thresholds 0.01 / 0.2) ---------------
    lam = mp.mpf(1)
    XtX = xm.T * xm
    M = XtX[:, :]
    for j in range(P):
        M[j, j] += lam
    Minv = M ** -1
    bh = Minv * (xm.T * ym)
    H = xm * Minv * xm.T
    trH = mp.fsum(H[i, i] for i in range(N))
    r = ym - xm * bh
    s2h = (r.T * r)[0] / (N - trH)
    V = Minv * s2h
    pvals = []
    for j in range(P):
        z = bh[j] / mp.sqrt(V[j, j])
        pvals.append(2 * (1 - mp.ncdf(abs(z))))
    klo = sum(1 for v in pvals if v < mp.mpf("0.01"))
    khi = sum(1 for v in pvals if v < mp.mpf("0.2"))
    clamp = lambda v: min(max(v, mp.mpf(1) / (2 * P)), 1 - mp.mpf(1) / (2 * P))
    put("kElicitLo", clamp(mp.mpf(klo) / P))
    put("kElicitHi", clamp(mp.mpf(khi) / P))

    # -- correlation screening order ------------------------------------------
    cors = []
    for j in range(P):
        xc = X[:, j] - X[:, j].mean()
        yc = Y - Y.mean()
        denom = np.sqrt((xc * xc).sum() * (yc * yc).sum())
        cors.append(abs((xc * yc).sum() / denom) if denom > 0 else 0.0)
    order = sorted(range(P), key=lambda j: (-cors[j], j))
    lines.append("inline constexpr std::array<int, kP> kScreenOrder = {"
                 + ", ".join(str(j) for j in order) + "};")

    with open("../golden_values.hpp", "w") as f:
        f.write("// Frozen oracle values. Generated by oracle/gen_golden.py\n")
        f.write("// (50-digit arithmetic, rounded to double).\n")
        f.write("#pragma once\n\n#include <array>\n\nnamespace golden {\n\n")
        f.write("\n".join(lines))
        f.write("\n\n}  // namespace golden\n")


if __name__ == "__main__":
    main()
