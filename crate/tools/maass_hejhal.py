"""Hejhal's method for level-1 Maass cusp forms.

Writes n,a_n CSV plus a .meta.json sidecar with the refined spectral
parameter and parity. Coefficients are normalized so that a_1 = 1 and
extended past the solved range by Hecke multiplicativity.

usage: maass_hejhal.py R_GUESS PARITY OUT.csv [NMAX]
"""
import json
import sys

import mpmath as mp

mp.mp.dps = 50


def pullback(x, y):
    while True:
        x = x - mp.floor(x + mp.mpf(1) / 2)
        r2 = x * x + y * y
        if r2 >= 1 - mp.mpf(10) ** -25:
            return x, y
        x, y = -x / r2, y / r2


def whittaker(r, n, y):
    return mp.sqrt(y) * mp.re(mp.besselk(1j * r, 2 * mp.pi * n * y)) * mp.exp(mp.pi * r / 2)


def trig(parity, t):
    return mp.cos(t) if parity == 1 else mp.sin(t)


def solve(r, parity, Y, M, Q):
    xs = [(m - mp.mpf(1) / 2) / (2 * Q) for m in range(1, Q + 1)]
    pts = [pullback(x, Y) for x in xs]
    W = {}
    for l in range(1, M + 1):
        W[(l, None)] = whittaker(r, l, Y)
        for m, (xp, yp) in enumerate(pts):
            W[(l, m)] = whittaker(r, l, yp) * trig(parity, 2 * mp.pi * l * xp)
    V = mp.matrix(M, M)
    for n in range(1, M + 1):
        for l in range(1, M + 1):
            s = mp.fsum(W[(l, m)] * trig(parity, 2 * mp.pi * n * xs[m]) for m in range(Q))
            # Unknowns are scaled as c_l W_l(Y) to keep the system well conditioned.
            V[n - 1, l - 1] = (1 if n == l else 0) - 2 * s / (Q * W[(l, None)])
    # c_1 = 1: drop the first row, move column 1 to the right-hand side.
    A = mp.matrix(M - 1, M - 1)
    b = mp.matrix(M - 1, 1)
    for i in range(1, M):
        b[i - 1] = -V[i, 0]
        for j in range(1, M):
            A[i - 1, j - 1] = V[i, j]
    w1 = W[(1, None)]
    for i in range(M - 1):
        b[i] = b[i] * w1
    d = mp.lu_solve(A, b)
    return [mp.mpf(1)] + [d[i] / W[(i + 2, None)] for i in range(M - 1)]


def defect(r, parity, M, Q):
    c1 = solve(r, parity, mp.mpf("0.82"), M, Q)
    c2 = solve(r, parity, mp.mpf("0.78"), M, Q)
    return c1[1] - c2[1], c1


def refine(r0, parity, M, Q):
    a, b = mp.mpf(r0), mp.mpf(r0) + mp.mpf(10) ** -12
    fa, _ = defect(a, parity, M, Q)
    fb, coef = defect(b, parity, M, Q)
    for _ in range(12):
        if abs(fb) < mp.mpf(10) ** -40 or fb == fa:
            break
        a, b, fa = b, b - fb * (b - a) / (fb - fa), fb
        fb, coef = defect(b, parity, M, Q)
    return b, coef


def extend(c, nmax):
    """Hecke multiplicativity from lambda(p^k) for p^k within the solved range."""
    solved = len(c)
    lam = {n: c[n - 1] for n in range(1, solved + 1)}
    spf = list(range(nmax + 1))
    for p in range(2, nmax + 1):
        if spf[p] == p:
            for m in range(p * p, nmax + 1, p):
                if spf[m] == m:
                    spf[m] = p
    out = [mp.mpf(0)] * (nmax + 1)
    out[1] = mp.mpf(1)
    for n in range(2, nmax + 1):
        p = spf[n]
        m, k = n, 0
        while m % p == 0:
            m //= p
            k += 1
        if m > 1:
            out[n] = out[m] * out[n // m]
        elif k == 1:
            if p > solved:
                raise SystemExit(f"prime {p} beyond solved range {solved}")
            out[n] = lam[p]
        else:
            out[n] = out[p] * out[n // p] - out[n // (p * p)]
    return out[1:]


def main():
    r0, parity, path = sys.argv[1], int(sys.argv[2]), sys.argv[3]
    nmax = int(sys.argv[4]) if len(sys.argv) > 4 else 22
    M, Q = 26, 34
    r, c = refine(r0, parity, M, Q)
    lam = extend(c[:20], nmax)
    pairs = [(2, 3), (2, 5), (3, 5), (2, 7)]
    hecke = max(abs(c[a - 1] * c[b - 1] - c[a * b - 1]) for a, b in pairs)
    with open(path, "w", newline="\n") as fh:
        fh.write("n,a_n\n")
        for n, v in enumerate(lam, start=1):
            fh.write(f"{n},{mp.nstr(v, 20)}\n")
    meta = {"level": 1, "weight": 0, "atkin_lehner": {}, "spectral_r": float(r), "parity": parity}
    with open(path.rsplit(".", 1)[0] + ".meta.json", "w", newline="\n") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"r = {mp.nstr(r, 22)}  max Hecke defect = {mp.nstr(hecke, 3)}")


if __name__ == "__main__":
    main()
