"""Independent reference values for the C++ tests (numpy/scipy/mpmath only).

Run: python3 tests/oracles/oracles.py
The printed numbers are frozen in tests/oracle_values.hpp.
"""
import numpy as np
from mpmath import mp, mpf, pi, sin, cos, sqrt
from scipy.integrate import solve_ivp
from scipy.optimize import linprog

mp.dps = 30


def lp_min_slope(K, odd_only, G=4096):
    # min t s.t. |u'(j/G)| <= t, u(0) = 0, u(1/2) = 1. A relaxation of the
    # continuous problem, so its value is a lower bound of max|u'|.
    ks = [k for k in range(1, K + 1) if k % 2 == 1 or not odd_only]
    p = np.arange(G) / G
    nv = 2 + 2 * len(ks)
    D = np.zeros((G, nv))
    for j, k in enumerate(ks):
        D[:, 1 + 2 * j] = -2 * np.pi * k * np.sin(2 * np.pi * k * p)
        D[:, 2 + 2 * j] = 2 * np.pi * k * np.cos(2 * np.pi * k * p)
    D[:, -1] = -1.0
    Dm = -D
    Dm[:, -1] = -1.0
    A = np.vstack([D, Dm])

    def row(x):
        r = np.zeros(nv)
        r[0] = 1
        for j, k in enumerate(ks):
            r[1 + 2 * j] = np.cos(2 * np.pi * k * x)
            r[2 + 2 * j] = np.sin(2 * np.pi * k * x)
        return r

    c = np.zeros(nv)
    c[-1] = 1
    res = linprog(c, A_ub=A, b_ub=np.zeros(2 * G), A_eq=np.array([row(0.0), row(0.5)]),
                  b_eq=[0.0, 1.0], bounds=[(None, None)] * nv, method="highs")
    return res.fun


def pl_min_half_slope(N=400):
    # Periodic piecewise-linear u on N cells with u(0)=0, u(1/2)=1:
    # minimize max |slope| / 2.
    nv = N + 1
    A, b = [], []
    for i in range(N):
        for sgn in (1, -1):
            r = np.zeros(nv)
            r[(i + 1) % N] += sgn * N
            r[i] -= sgn * N
            r[-1] = -1
            A.append(r)
            b.append(0)
    Aeq = np.zeros((2, nv))
    Aeq[0, 0] = 1
    Aeq[1, N // 2] = 1
    c = np.zeros(nv)
    c[-1] = 1
    res = linprog(c, A_ub=np.array(A), b_ub=b, A_eq=Aeq, b_eq=[0, 1], bounds=[(None, None)] * nv, method="highs")
    return res.fun / 2


def twisted_sgrad(p1, gamma):
    # Ωᵀ v = -dF for F = sin²(π p1) on T⁴, coordinates (p1, p2, q1, q2).
    W = np.zeros((4, 4))
    W[0, 2] = 1
    W[1, 2] = gamma
    W[1, 3] = 1
    W = W - W.T
    dF = np.array([np.pi * np.sin(2 * np.pi * p1), 0, 0, 0])
    return np.linalg.solve(W.T, -dF)


def time_one_average(p1, eps=0.2, periods=20):
    # Brute-force q1 displacement per period of F = sin²(πp) + eps sin(2πs) sin(2πp).
    def rhs(t, y):
        p, q = y
        return [0.0, np.pi * np.sin(2 * np.pi * p) + eps * np.sin(2 * np.pi * t) * 2 * np.pi * np.cos(2 * np.pi * p)]
    sol = solve_ivp(rhs, (0, periods), [p1, 0.0], rtol=1e-12, atol=1e-12)
    return sol.y[1, -1] / periods


def main():
    gamma = sqrt(2) - 1
    c = pi * sin(mpf("0.4") * pi)
    print("lp_min_slope_12", lp_min_slope(12, False))
    print("lp_min_slope_32_odd", lp_min_slope(32, True))
    print("pl_min_half_slope", pl_min_half_slope())
    print("twisted_speed_q1", c)
    print("twisted_speed_q2", -gamma * c)
    print("twisted_sgrad_p1_0.2", twisted_sgrad(0.2, float(gamma)))
    # Invariance defect of μ_{x,T} for q1 = c t, H = cos 2π q1, s = 1/(2c),
    # c T = 299 + 1/3: (1/T)|∫_T^{T+s} H| = |sin 2π c T| / (π c T).
    ct = mpf(299) + mpf(1) / 3
    print("defect_T", abs(sin(2 * pi * ct)) / (pi * ct))
    print("defect_2T", abs(sin(4 * pi * ct)) / (pi * 2 * ct))
    print("dds_forced_s0.1_p0.3", 2 * pi * mpf("0.2") * cos(2 * pi * mpf("0.1")) * sin(2 * pi * mpf("0.3")))
    print("bracket_sin_over_2pi_p0.1", cos(2 * pi * mpf("0.1")))
    print("time_one_avg_p0.25", time_one_average(0.25))
    print("time_one_avg_p0.1", time_one_average(0.1))
    print("sup_pad_cos_512", 2 * pi / (2 * 512))


if __name__ == "__main__":
    main()
