"""High-precision reference values frozen into the C++ test suites.

Run with `python3 tests/oracles/generate_oracles.py`. Everything here is
computed with mpmath at 40 significant digits and shares no code with the
library; the printed constants are pasted into tests/oracle_values.hpp.
"""
import mpmath as mp

mp.mp.dps = 40
pi = mp.pi


def amplitude_sq(parity, omega, Lam, a):
    Om = omega * a / 2
    g = Lam / Om
    s, c = mp.sin(Om), mp.cos(Om)
    if parity == 1:
        return 1 / (s**2 + (g * s + c) ** 2)
    return 1 / (c**2 + (g * c - s) ** 2)


def phase(parity, omega, Lam, a):
    Om = omega * a / 2
    g = Lam / Om
    s, c = mp.sin(Om), mp.cos(Om)
    if parity == 1:
        return mp.atan2(-g * s**2, 1 + g * s * c)
    return mp.atan2(-g * c**2, 1 - g * s * c)


def norm_b(parity, omega, Lam, a):
    A2 = amplitude_sq(parity, omega, Lam, a)
    d = phase(parity, omega, Lam, a)
    t = (A2 * mp.sin(omega * a) - mp.sin(omega * a + 2 * d)) / omega
    return a * (1 - A2) + (t if parity == 1 else -t)


def fixed_point(parity, n, Lam, a, L):
    w0 = 2 * pi * n / L if parity == 1 else 2 * pi * (n - mp.mpf(1) / 2) / L
    w = w0
    for _ in range(400):
        wn = w0 - 2 * phase(parity, w, Lam, a) / L
        if abs(wn - w) < mp.mpf(10) ** -35:
            return wn
        w = wn
    raise RuntimeError("fixed point did not converge")


def eta(Lam, a):
    f1 = lambda y: y * mp.exp(-y) / (y * mp.exp(y) + Lam * mp.sinh(y))
    f2 = lambda y: y * mp.exp(-y) / (y * mp.exp(y) + Lam * mp.cosh(y))
    e1 = -Lam / (pi * a**2) * mp.quad(f1, [0, 1, 5, 20, mp.inf])
    e2 = Lam / (pi * a**2) * mp.quad(f2, [0, 1, 5, 20, mp.inf])
    return e1, e2


def residuals_after_shift(parity, n, Lam, a, L, shift):
    """Continuity and jump residuals at x = a/2 when omega is perturbed but
    amplitude, phase and normalization are kept at their solved values."""
    lam = 2 * Lam / a
    w = fixed_point(parity, n, Lam, a, L)
    A = mp.sqrt(amplitude_sq(parity, w, Lam, a))
    d = phase(parity, w, Lam, a)
    N = 1 / mp.sqrt(1 - norm_b(parity, w, Lam, a) / L)
    wp = w + shift
    K = N / mp.sqrt(wp * L)
    x = a / 2
    if parity == 1:
        uI, uII = K * A * mp.sin(wp * x), K * mp.sin(wp * x + d)
        dI, dII = K * A * wp * mp.cos(wp * x), K * wp * mp.cos(wp * x + d)
    else:
        uI, uII = K * A * mp.cos(wp * x), K * mp.cos(wp * x + d)
        dI, dII = -K * A * wp * mp.sin(wp * x), -K * wp * mp.sin(wp * x + d)
    cont = abs(uI - uII) / K
    jump = abs(dII - dI - lam * uI) / (K * (wp + lam))
    return cont, jump


def beta_parts(Lam, a, periods=400):
    """Integral of omega*(B + 2 d(delta)/d(omega)) with the phase derivative
    taken symbolically by mpmath, plus the mode-index cutoff boundary term."""
    def integrand(w):
        tot = 0
        for j in (1, 2):
            dd = mp.diff(lambda t: phase(j, t, Lam, a), w)
            tot += w * (norm_b(j, w, Lam, a) + 2 * dd)
        return tot / (4 * pi)

    P = 2 * pi / a
    cum = mp.mpf(0)
    partial = []
    for k in range(periods):
        pts = [k * P + i * P / 4 for i in range(5)]
        cum += mp.quad(integrand, pts)
        partial.append(cum)
    integral = sum(partial[periods // 2:]) / (periods - periods // 2)
    W = 2 * pi * 10**6 / a
    boundary = -(W / (2 * pi)) * (phase(1, W, Lam, a) + phase(2, W, Lam, a))
    return integral, boundary


def critical_tau(eta_value, a, bound_factor):
    # lhs(tau) = -(2 eta/pi) atan(a/(2 tau)); bound = -1/(bound_factor*pi*tau^2)
    f = lambda t: (2 * eta_value / pi) * mp.atan(a / (2 * t)) - 1 / (bound_factor * pi * t**2)
    lo, hi = mp.mpf("0.01"), mp.mpf(10)
    for _ in range(200):
        mid = (lo + hi) / 2
        if f(mid) > 0:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


def show(name, value):
    print(f"{name} = {mp.nstr(value, 20)}")


if __name__ == "__main__":
    show("kFixedPointOmegaOdd", fixed_point(1, 5, 1, 1, 100))
    show("kFixedPointOmegaEven", fixed_point(2, 5, 1, 1, 100))
    show("kPhaseOddHalfPi", phase(1, pi, 1, 1))
    show("kAmplitudeSqOddHalfPi", amplitude_sq(1, pi, 1, 1))
    e1, e2 = eta(1, 1)
    show("kEta1Coupling1", e1)
    show("kEta2Coupling1", e2)
    e1, e2 = eta(mp.mpf(10) ** 6, 1)
    show("kEta1Coupling1e6", e1)
    show("kEta2Coupling1e6", e2)
    for Lam, name in ((mp.mpf("0.5"), "05"), (5, "5"), (10, "10")):
        e1, e2 = eta(Lam, 1)
        show(f"kEtaSumCoupling{name}", e1 + e2)
    c, j = residuals_after_shift(1, 30, 1, 1, 100, mp.mpf("1e-4"))
    show("kShiftedContinuityResidual", c)
    show("kShiftedJumpResidual", j)
    integral, boundary = beta_parts(1, 1)
    show("kBetaIntegralCoupling1", integral)
    show("kBetaBoundaryCoupling1", boundary)
    show("kBetaCoupling1", integral + boundary)
    show("kCriticalTauClosedForm", critical_tau(pi / 24, 1, 24))
    show("kCriticalTauQuadrature", critical_tau(pi / 24, 1, 48))
