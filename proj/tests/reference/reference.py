#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Independent numpy/scipy implementation used to freeze reference values.

Builds the master equation from the pairwise double sum (no diagonalized
jump operators, no frames), solves the steady state with a dense solve,
propagates with scipy's matrix exponential and evaluates the resolvent
formula on the full blocks. Prints JSON consumed by hand into the C++ tests.
"""
import json

import numpy as np
from scipy.linalg import expm


def geometry(N=1, gamma=0.01, Gamma=1.0, d=0.25):
    if N == 1:
        pos = [-d, 0.0, -d + 0.5]
    else:
        ms = [(2 * k + 1) / 4 for k in range(N)]
        pos = sorted([-m for m in ms] + [0.0] + ms)
    rates = [gamma if p == 0.0 else Gamma for p in pos]
    return np.array(pos), np.array(rates), pos.index(0.0)


def basis(n, K=None):
    K = n if K is None else K
    return [s for k in range(K + 1) for s in range(1 << n) if bin(s).count("1") == k]


def lowering(n, states):
    idx = {s: i for i, s in enumerate(states)}
    out = []
    for a in range(n):
        m = np.zeros((len(states), len(states)), complex)
        for s in states:
            if s >> a & 1 and (s & ~(1 << a)) in idx:
                m[idx[s & ~(1 << a)], idx[s]] = 1
        out.append(m)
    return out


def model(pos, rates, med, eps, delta, K=None, drop_cross=None):
    n = len(pos)
    st = basis(n, K)
    sig = lowering(n, st)
    D = len(st)
    kx = 2 * np.pi * pos
    amp = np.sqrt(np.outer(rates, rates))
    J = amp * np.sin(np.abs(kx[:, None] - kx[None, :]))
    G = amp * np.cos(kx[:, None] - kx[None, :])
    if drop_cross is not None:
        a, b = drop_cross
        G[a, b] = G[b, a] = 0.0
    dag = lambda x: x.conj().T
    H = -delta * sum(dag(s) @ s for s in sig) + eps * (sig[med] + dag(sig[med]))
    H = H + sum(J[m, k] * dag(sig[m]) @ sig[k] for m in range(n) for k in range(n))
    I = np.eye(D)
    L = -1j * (np.kron(I, H) - np.kron(H.T, I))
    for m in range(n):
        for k in range(n):
            A, B = sig[m], sig[k]
            BdA = dag(B) @ A
            L += G[m, k] * (2 * np.kron(B.conj(), A) - np.kron(I, BdA) - np.kron(BdA.T, I))
    sigt = sum(np.sqrt(rates[a]) * np.exp(1j * kx[a]) * sig[a] for a in range(n))
    heff = -1j * sum(
        amp[m, k] * np.exp(1j * abs(kx[k] - kx[m])) * dag(sig[m]) @ sig[k] for m in range(n) for k in range(n)
    )
    return L, st, sig, sigt, heff, D


def steady(L, D):
    A = L.copy()
    b = np.zeros(D * D, complex)
    A[0, :] = np.eye(D).reshape(-1, order="F")
    b[0] = 1
    r = np.linalg.solve(A, b).reshape(D, D, order="F")
    return (r + r.conj().T) / 2


def g2_curve(geom, eps, delta, taus, K=None):
    pos, rates, med = geom
    L, st, sig, sigt, heff, D = model(pos, rates, med, eps, delta, K)
    r = steady(L, D)
    n = sigt.conj().T @ sigt
    mean = np.trace(n @ r).real
    c = (sigt @ r @ sigt.conj().T).reshape(-1, order="F")
    out = []
    for t in taus:
        ct = (expm(L * t) @ c).reshape(D, D, order="F")
        out.append(np.trace(n @ ct).real / mean**2)
    return out


def g2_analytic(geom, delta):
    pos, rates, med = geom
    L, st, sig, sigt, heff, D = model(pos, rates, med, 0.0, 0.0, K=2)
    pc = [bin(s).count("1") for s in st]
    i1 = [i for i in range(D) if pc[i] == 1]
    i2 = [i for i in range(D) if pc[i] == 2]
    up = sig[med].conj().T
    g = np.zeros(D, complex)
    g[0] = 1
    v1 = up @ g
    x1 = np.zeros(D, complex)
    x1[i1] = np.linalg.solve(delta * np.eye(len(i1)) - heff[np.ix_(i1, i1)], v1[i1])
    v2 = up @ x1
    x2 = np.zeros(D, complex)
    x2[i2] = np.linalg.solve(2 * delta * np.eye(len(i2)) - heff[np.ix_(i2, i2)], v2[i2])
    den = (sigt @ x1)[0]
    num = (sigt @ sigt @ x2)[0]
    return abs(num) ** 2 / abs(den) ** 4


def lam_minus(gamma, Gamma=1.0):
    return -0.5 * np.sqrt(gamma * (8 * Gamma - gamma))


def main():
    ref = {}
    geo = geometry(1, 0.01)
    dip = lam_minus(0.01)
    ref["analytic_dip_gamma0.01"] = g2_analytic(geo, dip)
    ref["analytic_dip_gamma1"] = g2_analytic(geometry(1, 1.0), lam_minus(1.0))
    ref["analytic_0.05_gamma0.01"] = g2_analytic(geo, 0.05)
    for e in (0.1, 1.0, 10.0):
        ref[f"regression_dip_eps{e}gamma"] = g2_curve(geo, e * 0.01, dip, [0.0])[0]
    ref["regression_tau_dip_eps1e-3"] = dict(
        zip(["0", "100", "446.5", "2000"], g2_curve(geo, 1e-5, dip, [0.0, 100.0, 446.5, 2000.0]))
    )

    pos, rates, med = geometry(1, 1.0)
    pops = []
    for drop in (None, (0, 2)):
        L, st, sig, sigt, heff, D = model(pos, rates, med, 0.1, lam_minus(1.0), drop_cross=drop)
        r = steady(L, D)
        pops.append(np.trace(sig[med].conj().T @ sig[med] @ r).real)
    ref["cross_dissipator_medium_population"] = pops

    pos, rates, med = geometry(1, 0.01)
    L, st, sig, sigt, heff, D = model(pos, rates, med, 1e-5, np.sqrt(0.02))
    r = steady(L, D)
    ref["medium_population_eps1e-5_sqrt2Gg"] = np.trace(sig[med].conj().T @ sig[med] @ r).real

    for N in (2, 3):
        geo = geometry(N, 0.01)
        ref[f"analytic_N{N}_delta0.1"] = g2_analytic(geo, 0.1)
    print(json.dumps(ref, indent=2))


if __name__ == "__main__":
    main()
