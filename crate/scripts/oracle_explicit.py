"""Independent oracle for the k = 3 explicit-formula reconstruction.

Series by numpy with a plain Möbius sieve, residues at the negative integers by
mpmath contour sums, zero terms by scipy's loggamma. Prints the RMS discrepancy
for each zero budget and the discrepancy at x = 0.02 with 100 zeros.
"""
import math

import mpmath as mp
import numpy as np
from scipy.special import loggamma

K = 3
N = 10**7
BUDGETS = (0, 10, 25, 50, 100)
GRID = np.exp(np.linspace(math.log(0.01), math.log(0.1), 20))

mp.mp.dps = 30


def mobius(n):
    mu = np.ones(n + 1, dtype=np.int8)
    mu[0] = 0
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, n + 1):
        if sieve[p]:
            sieve[2 * p :: p] = False
            mu[p::p] *= -1
            if p * p <= n:
                mu[p * p :: p * p] = 0
    return mu


def series(xs):
    mu = mobius(N)[1:].astype(np.float64)
    n = np.arange(1, N + 1, dtype=np.float64)
    keep = mu != 0
    n, w = n[keep], mu[keep] * np.log(n[keep]) / n[keep] ** 3
    out = []
    for x in xs:
        t = np.mod(n * x, 1.0)
        out.append(math.fsum(w * (t**3 - 1.5 * t**2 + 0.5 * t)))
    return np.array(out)


def prefactor(s):
    return mp.e ** (1j * mp.pi * s / 2) + (-1) ** K * mp.e ** (-1j * mp.pi * s / 2)


NORM = -mp.factorial(K) / (2j * mp.pi) ** K


def integrand(s):
    w = s + K
    return NORM * mp.gamma(s) * (2 * mp.pi) ** (-s) * prefactor(s) * mp.zeta(w, 1, 1) / mp.zeta(w)


def laurent(s0, r=mp.mpf("0.25"), n=128):
    pts = [r * mp.e ** (2j * mp.pi * j / n) for j in range(n)]
    vals = [integrand(s0 + p) for p in pts]
    return {m: sum(v * p ** (-m) for v, p in zip(vals, pts)) / n for m in (-3, -2, -1)}


def model_terms():
    terms = []
    for l in range(1, K + 2 * 4 + 2):
        c = laurent(mp.mpf(-l))
        terms.append((l, float(c[-1].real), float(-c[-2].real), float(c[-3].real) / 2))
    return terms


def model(x, terms):
    lx = math.log(x)
    return sum(x**e * (a + b * lx + c * lx * lx) for e, a, b, c in terms)


def zero_sum(x, gammas):
    if len(gammas) == 0:
        return 0.0
    s = 0.5 + 1j * gammas - K
    p = np.exp(1j * np.pi * s / 2) + (-1) ** K * np.exp(-1j * np.pi * s / 2)
    norm = -math.factorial(K) / (2j * np.pi) ** K
    t = norm * np.exp(loggamma(s) - s * np.log(2 * np.pi * x)) * p
    return 2.0 * float(np.sum(t.real))


def main():
    gammas = np.array([float(mp.zetazero(j).imag) for j in range(1, max(BUDGETS) + 1)])
    terms = model_terms()
    xs = list(GRID) + [0.02]
    s = series(xs)
    base = s - np.array([model(x, terms) for x in xs])
    for j in BUDGETS:
        d = base - np.array([zero_sum(x, gammas[:j]) for x in xs])
        print(f"rms[{j}] = {math.sqrt(np.mean(d[:-1] ** 2)):.6e}")
    d = base[-1] - zero_sum(0.02, gammas[:100])
    print(f"x=0.02 J=100 discrepancy = {d:.6e}")


if __name__ == "__main__":
    main()
