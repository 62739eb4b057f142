#!/usr/bin/env python3
"""High-precision oracle for the frozen expected values used in the C++ tests.

Evaluates every closed-form quantity with mpmath at 50 significant digits,
independently of the C++ implementation. Re-run after changing a default and
paste the printed values into the corresponding test.

    python3 tests/oracles/compute_expected.py
"""
from mpmath import mp, mpf, sin, exp, log, sqrt, pi, findroot

mp.dps = 50

C_LIGHT = mpf(299792458)
H_PLANCK = mpf("6.62607015e-34")
K_BOLTZMANN = mpf("1.380649e-23")


def db_to_linear(x):
    return mpf(10) ** (-mpf(x) / 10)


def sinc(x):
    return mpf(1) if x == 0 else sin(x) / x


def beta2_from_d(d_ps_nm_km, lam):
    d_si = mpf(d_ps_nm_km) * mpf("1e-6")  # ps/(nm km) -> s/m^2
    return -d_si * lam ** 2 / (2 * pi * C_LIGHT)


def alpha_np(db_per_cm):
    return mpf(db_per_cm) * 100 * log(10) / 10


def l_eff(alpha, length):
    return length if alpha == 0 else (1 - exp(-alpha * length)) / alpha


def n_th(nu, temp):
    return 1 / (exp(H_PLANCK * nu / (K_BOLTZMANN * temp)) - 1)


def show(name, value):
    print(f"{name:40s} {mp.nstr(value, 17)}")


def main():
    length = mpf("0.071")
    alpha = alpha_np("0.7")
    leff = l_eff(alpha, length)
    gamma = mpf(14)
    lam_ref = mpf("1550e-9")
    beta2 = beta2_from_d(-239, lam_ref)
    lam_pump = mpf("1549.315e-9")
    nu = mpf("1.4e12")
    power = mpf("0.057")

    print("# unit conversions")
    show("db_to_linear(6.51)", db_to_linear("6.51"))
    show("f(1549.315 nm)", C_LIGHT / lam_pump)
    show("gamma_from_n2(3e-18,0.86um2,1550nm)", 2 * pi * mpf("3e-18") / (lam_ref * mpf("0.86e-12")))
    show("beta2(-239)", beta2)
    show("beta2(+22)", beta2_from_d(22, lam_ref))
    show("alpha(0.7 dB/cm) Np/m", alpha)
    show("L_eff", leff)
    show("eta_alpha analytic", leff / length)

    print("# coupling")
    facet = (mpf("14.24") - mpf("0.7") * mpf("7.1")) / 2
    eta = db_to_linear(facet)
    show("facet dB", facet)
    show("eta_out", eta)

    print("# channels")
    dnu_bpf = C_LIGHT * mpf("0.5e-9") / lam_pump ** 2
    dnu = min(mpf("50e9"), dnu_bpf)
    show("bpf bandwidth Hz", dnu_bpf)
    e0 = mpf("0.18") * db_to_linear("6.51")
    e1 = mpf("0.08") * db_to_linear("6.75")
    show("eta0", e0)
    show("eta1", e1)

    def rate(p, detuning, b2=beta2, g=gamma):
        arg = b2 * (2 * pi * detuning) ** 2 * length / 2 + g * p * length
        return dnu * (g * p * leff) ** 2 * sinc(arg) ** 2

    r = rate(power, nu)
    print("# pair generation")
    show("r(paper defaults)", r)
    # first phase-matching null: arg = pi
    nu_null = sqrt((pi - gamma * power * length) * 2 / (beta2 * length)) / (2 * pi)
    show("nu_null (arg = pi)", nu_null)

    print("# thermal occupancy")
    show("n_th(1.4 THz, 300 K)", n_th(nu, 300))
    show("ratio (n+1)/n at 0.1 THz", (n_th(mpf("0.1e12"), 300) + 1) / n_th(mpf("0.1e12"), 300))

    print("# calibration (C = 80, N0 = 3.45e6, N1 = 1.34e6, d = 1000)")
    eta_a = sqrt(80 / (eta ** 2 * e0 * e1 * r))
    show("eta_alpha calibrated", eta_a)
    flux = power / (H_PLANCK * C_LIGHT / lam_pump)
    # leakage rejection at 1.4 THz: min(120, 60 + 100 * 1.4) = 120 dB
    leak = flux * db_to_linear(120)
    show("pump photon flux", flux)
    show("leakage @120 dB", leak)
    rn0 = (mpf("3.45e6") - 1000) / (eta * e0) - eta_a * r - leak
    rn1 = (mpf("1.34e6") - 1000) / (eta * e1) - eta_a * r - leak
    show("r_n0", rn0)
    show("r_n1", rn1)
    occ = n_th(nu, 300)
    show("rho0 (Stokes, idler)", rn0 / (dnu * power * leff * (occ + 1)))
    show("rho1 (anti-Stokes, signal)", rn1 / (dnu * power * leff * occ))

    print("# pulsed (tau = 5 ps, B = 100 MHz)")
    tau = mpf("5e-12")
    rep = mpf("1e8")
    sigma = tau * rep
    p_peak = findroot(lambda p: rate(p, nu) * tau - mpf("0.01"), mpf("0.4"))
    show("P_peak(mu = 0.01)", p_peak)
    p4 = findroot(lambda p: rate(p, nu) * tau - mpf("0.04"), mpf("0.9"))
    show("P_peak(mu = 0.04) / P_peak(0.01)", p4 / p_peak)
    p_small = findroot(lambda p: rate(p, nu) * tau - mpf("1e-6"), mpf("0.004"))
    p_small4 = findroot(lambda p: rate(p, nu) * tau - mpf("4e-6"), mpf("0.008"))
    show("P(4e-6)/P(1e-6)", p_small4 / p_small)
    rp = rate(p_peak, nu)
    c_rate = sigma * eta_a ** 2 * eta ** 2 * e0 * e1 * rp
    scale = p_peak / power
    leak_p = leak * scale
    n0 = sigma * eta * e0 * (eta_a * rp + rn0 * scale + leak_p) + 1000
    n1 = sigma * eta * e1 * (eta_a * rp + rn1 * scale + leak_p) + 1000
    show("C pulsed", c_rate)
    show("N0 pulsed", n0)
    show("N1 pulsed", n1)
    show("CAR gated mu=0.01", c_rate / (n0 * n1 / rep))

    print("# TIA floor")
    show("N0*N1*16ps", mpf("3.45e6") * mpf("1.34e6") * mpf("16e-12"))


if __name__ == "__main__":
    main()
