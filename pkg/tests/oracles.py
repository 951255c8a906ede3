"""Independent reference computations used to freeze expected values.

Nothing here imports the package under test.
"""
import mpmath as mp
import numpy as np


def symbol_mp(lam, tau, rho1, rho2, mu1, mu2, sigma, gamma_a, dps=50):
    """Straight-line evaluation of s(lambda, tau) in 50-digit arithmetic."""
    with mp.workdps(dps):
        lam = mp.mpc(lam)
        rho1, rho2, mu1, mu2, sigma, gamma_a, tau = map(
            mp.mpf, (rho1, rho2, mu1, mu2, sigma, gamma_a, tau))
        w1 = mp.sqrt(rho1 * lam + mu1 * tau**2)
        w2 = mp.sqrt(rho2 * lam + mu2 * tau**2)
        e1 = mp.sqrt(mu1) * w1 + mu2 * tau
        e2 = mp.sqrt(mu2) * w2 + mu1 * tau
        num = sigma * tau**2 - (rho2 - rho1) * gamma_a
        den = (rho1 + rho2) * lam / tau + 4 * e1 * e2 / (e1 + e2)
        return complex(lam + num / den)


def phi_scan(zeta, rho1, rho2, mu1, mu2):
    """Phi(zeta) = zeta / k(zeta) on an array of real zeta, plain numpy."""
    w1 = np.sqrt(rho1 * zeta + mu1)
    w2 = np.sqrt(rho2 * zeta + mu2)
    e1 = np.sqrt(mu1) * w1 + mu2
    e2 = np.sqrt(mu2) * w2 + mu1
    inv_k = zeta + 4.0 / (rho1 + rho2) * e1 * e2 / (e1 + e2)
    return zeta * inv_k


def growth_rate_scan(tau, rho1, rho2, mu1, mu2, sigma, gamma_a, n=10**6):
    """Dense sign-change scan of Phi + psi on [1e-6, 1e3], then bisection."""
    psi = sigma / ((rho1 + rho2) * tau) - (rho2 - rho1) * gamma_a / ((rho1 + rho2) * tau**3)
    z = np.geomspace(1e-6, 1e3, n)
    f = phi_scan(z, rho1, rho2, mu1, mu2) + psi
    i = np.nonzero(np.sign(f[:-1]) != np.sign(f[1:]))[0]
    assert i.size == 1, "expected a single sign change"
    a, b = z[i[0]], z[i[0] + 1]
    g = lambda x: phi_scan(np.array([x]), rho1, rho2, mu1, mu2)[0] + psi
    while b - a > 1e-12 * b:
        m = 0.5 * (a + b)
        if np.sign(g(m)) == np.sign(g(a)):
            a = m
        else:
            b = m
    return tau * tau * 0.5 * (a + b)


if __name__ == "__main__":
    unit = (1, 3, 1, 1, 1, 1)
    print(repr(symbol_mp(1, 1, *unit)))
    print(repr(growth_rate_scan(1.0, *unit)))
    print(repr(complex(phi_scan(np.array([1.0]), 1, 3, 1, 1)[0])))
