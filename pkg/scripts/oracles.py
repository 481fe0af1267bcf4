"""Independent high-precision values frozen into the test suite.

Fredholm determinants use mpmath's own Gauss-Legendre nodes at 40 digits;
kernel values are direct 50-digit evaluations. Run once, paste the output.
"""
import mpmath as mp

mp.mp.dps = 50


def ktilde(x, y):
    s = lambda t: mp.sin(t) / t if t != 0 else mp.mpf(1)
    return (s(x - y) - s(x) * s(y)) / mp.pi


def logdet(a1, a2, m):
    mp.mp.dps = 40
    nodes = mp.calculus.quadrature.GaussLegendre(mp.mp)
    # degree 3*2^(k-1) nodes on [-1, 1]
    k = 1
    while 3 * 2 ** (k - 1) < m:
        k += 1
    pts = nodes.calc_nodes(k, mp.mp.prec)
    h = (mp.mpf(a2) - a1) / 2
    c = (mp.mpf(a2) + a1) / 2
    xs = [c + h * x for x, _ in pts]
    ws = [h * w for _, w in pts]
    n = len(xs)
    M = mp.matrix(n, n)
    for i in range(n):
        for j in range(n):
            M[i, j] = (1 if i == j else 0) - mp.sqrt(ws[i] * ws[j]) * ktilde(xs[i], xs[j])
    return mp.log(mp.det(M)), n


if __name__ == "__main__":
    print("K(0.5,0.2)", mp.sin(mp.mpf("0.3")) / (mp.mpf("0.3") * mp.pi))
    print("psi(0.1)", (mp.cos(mp.mpf("0.1")) - mp.sin(mp.mpf("0.1")) / mp.mpf("0.1")) / mp.sqrt(mp.pi))
    print("Kt(1,-1)", ktilde(mp.mpf(1), mp.mpf(-1)))
    for a1, a2, m in [(-1, 1, 48), (-2, 3, 96), (0, 3, 48), (-5, 5, 96)]:
        v1, n1 = logdet(a1, a2, m)
        v2, n2 = logdet(a1, a2, 2 * m)
        print(f"lnJ({a1},{a2})", mp.nstr(v2, 25), "n", n2, "diff", mp.nstr(v2 - v1, 3))
