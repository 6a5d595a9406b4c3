"""Independent high-precision reference for values frozen into the C++ tests.

Uses mpmath at 50 digits. Water-filling is solved here by bisection on the
threshold equation (no active-set pruning), and two-set durations by a dense
grid followed by golden-section refinement, so nothing here shares a code
path with the C++ library.

Run: python3 tests/reference/frozen_values.py
"""

import mpmath as mp

mp.mp.dps = 50
LN2 = mp.log(2)


def rate(lam, G, p, B):
    total = mp.mpf(0)
    for g, q in zip(G, p):
        x = (1 - q) / (g * LN2) * lam - 1
        if x > 0:
            total += (1 - q) * mp.log(1 + x, 2)
    return B * total


def threshold(Q, t, G, p, B):
    target = Q / t
    lo = min(g * LN2 / (1 - q) for g, q in zip(G, p))
    hi = lo * 2
    while rate(hi, G, p, B) < target:
        hi *= 2
    for _ in range(200):
        mid = (lo + hi) / 2
        if rate(mid, G, p, B) < target:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def bits(lam, t, G, p, B):
    out = []
    for g, q in zip(G, p):
        x = (1 - q) / (g * LN2) * lam - 1
        out.append(B * t * (1 - q) * mp.log(1 + x, 2) if x > 0 else mp.mpf(0))
    return out


def energy(Q, t, G, p, B):
    if Q == 0:
        return mp.mpf(0)
    lam = threshold(Q, t, G, p, B)
    e = mp.mpf(0)
    for b, g, q in zip(bits(lam, t, G, p, B), G, p):
        e += (mp.power(2, b / ((1 - q) * t * B)) - 1) * t * B * g
    return e


def two_set_min(q1, q2, T1, T2, G, p, B, grid=100):
    f = lambda t1: energy(q1, t1, G, p, B) + energy(q2, T2 - t1, G, p, B)
    hi = min(T1, T2)
    lo = hi * mp.mpf("1e-6")
    pts = [lo + (hi - lo) * i / grid for i in range(grid + 1)]
    vals = [f(x) for x in pts]
    i = min(range(len(vals)), key=lambda j: vals[j])
    a = pts[max(i - 1, 0)]
    b = pts[min(i + 1, grid)]
    gr = (mp.sqrt(5) - 1) / 2
    c, d = b - gr * (b - a), a + gr * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(120):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - gr * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + gr * (b - a)
            fd = f(d)
    x = (a + b) / 2
    # boundary candidate
    if f(hi) <= f(x):
        x = hi
    return x, f(x)


if __name__ == "__main__":
    # Two subchannels, G = {1, 10} nW/Hz, B = 1 kHz, t = 1 s, Q = 5000 bits.
    G = [mp.mpf("1e-9"), mp.mpf("1e-8")]
    p = [mp.mpf(0), mp.mpf(0)]
    lam = threshold(mp.mpf(5000), mp.mpf(1), G, p, mp.mpf(1000))
    b = bits(lam, 1, G, p, mp.mpf(1000))
    print("two_subchannel_lambda", mp.nstr(lam, 20))
    print("two_subchannel_bits", [mp.nstr(x, 20) for x in b])

    # Eight-subchannel two-set instance.
    G8 = [mp.mpf(s) for s in [
        "3.2e-10", "1.7e-9", "8.5e-8", "4.4e-10",
        "2.6e-8", "1.1e-10", "6.3e-9", "5.0e-8"]]
    p8 = [mp.mpf(s) for s in ["0.06", "0.06", "0.05", "0.05",
                              "0.05", "0.06", "0.05", "0.05"]]
    B = mp.mpf(24414)
    t1, e = two_set_min(mp.mpf("1e5"), mp.mpf("3e5"), mp.mpf("0.5"), mp.mpf(2), G8, p8, B)
    print("eight_subchannel_t1", mp.nstr(t1, 20))
    print("eight_subchannel_energy", mp.nstr(e, 20))
    # Same channel, interior optimum: T1 = 1.5 s.
    t1, e = two_set_min(mp.mpf("1e5"), mp.mpf("3e5"), mp.mpf("1.5"), mp.mpf(2), G8, p8, B)
    print("eight_subchannel_interior_t1", mp.nstr(t1, 20))
    print("eight_subchannel_interior_energy", mp.nstr(e, 20))
    # Same channel, binding first deadline: q1 = 3e5, q2 = 1e5, T1 = 0.5 s.
    t1, e = two_set_min(mp.mpf("3e5"), mp.mpf("1e5"), mp.mpf("0.5"), mp.mpf(2), G8, p8, B)
    print("eight_subchannel_boundary_t1", mp.nstr(t1, 20))
    print("eight_subchannel_boundary_energy", mp.nstr(e, 20))
