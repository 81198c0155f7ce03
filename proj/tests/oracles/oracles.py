"""Independent reference values for the C++ tests, computed with mpmath.

Run with `python3 tests/oracles/oracles.py`; the printed numbers are frozen
in the test sources.
"""
import mpmath as mp

mp.mp.dps = 30


def power_closed_form(p, d=2):
    theta = d * (1 / p + mp.mpf(1) / d - 1)
    return 1 / theta + p / ((d - 1) * (p - 1))


def power_condition_numeric(p, theta, s, d=2):
    inv = lambda x: x ** (1 / p)
    psi_inv = lambda t: t ** theta  # Psi(1/t)
    first = s ** (d - 1) / inv(s ** d) * mp.quad(lambda t: psi_inv(t) / t, [0, s])
    second = mp.quad(lambda t: psi_inv(t) * s ** (d - 1) / (inv(t * s ** (d - 1)) * t), [s, mp.inf])
    return first + second


class ThreePiece:
    def __init__(self, alpha):
        self.alpha = mp.mpf(alpha)
        self.r = mp.e ** (2 * mp.e ** 2)
        h = mp.log(self.r) / 2
        shape = h / mp.log(h)
        upper = self.r * mp.e ** (-self.alpha * shape)
        lower = mp.e ** (self.alpha * shape) / self.r
        self.p = (upper - lower) / (self.r - 1 / self.r)
        self.q = upper - self.p * self.r

    def inv(self, s):
        if s < 1 / self.r:
            l = -mp.log(s) / 2
            return s * mp.e ** (self.alpha * l / mp.log(l))
        if s < self.r:
            return self.p * s + self.q
        l = mp.log(s) / 2
        return s * mp.e ** (-self.alpha * l / mp.log(l))


def first_bound(alpha, s):
    f = ThreePiece(alpha)
    integral = mp.quad(lambda x: mp.e ** (-x) / f.inv(mp.e ** (-2 * x)), [mp.log(f.r), mp.log(s)])
    return s / f.inv(s ** 2) * integral


def second_bound(alpha, s, U):
    f = ThreePiece(alpha)
    L = mp.log(s)
    g = lambda u: s / (mp.e ** (L + u) * f.inv(mp.e ** (L + u) * s) * f.inv(mp.e ** (-2 * (L + u))))
    pts = [0, 1, 4, 16, 64, 256, 1024, U]
    pts = [p for p in pts if p < U] + [U]
    return mp.quad(g, pts)


def luxemburg_indicator_power(p, measure):
    return (1 / measure) ** (-1 / p)


def besov_interval_closed_form(p, theta):
    # seminorm of chi_[0,1] with omega(t) = (2 min(t,1))^{1/p}, Psi = t^-theta
    return 2 ** (1 / p) * (1 / (1 / p - theta) + 1 / theta)


def necessity_ratio(p, theta, r, d=2, exact=False):
    V = mp.pi
    inv = lambda x: x ** (1 / p)
    lux = lambda m: 1 / inv(1 / m)
    t0 = 1 / (2 * r)
    first = lux(2 * V * r ** d) * mp.quad(lambda t: t ** theta / t, [0, t0])

    def meas(t):
        c = 1 / t
        if exact:
            lens = 2 * r * r * mp.acos(c / (2 * r)) - c / 2 * mp.sqrt(4 * r * r - c * c)
            return 2 * (V * r * r - lens)
        return V * r ** (d - 1) * c / 2

    second = mp.quad(lambda t: t ** theta * lux(meas(t)) / t, [t0, 2 * t0, 10 * t0, mp.inf])
    orl = lux(V * r ** d)
    bv = V * r ** d + d * V * r ** (d - 1)
    return (orl + first + second) / bv


if __name__ == "__main__":
    for p in (1.2, 1.3, 1.4):
        print("closed_form p=%s" % p, mp.nstr(power_closed_form(mp.mpf(p)), 15))
    p = mp.mpf("1.3")
    th = 2 * (1 / p - mp.mpf(1) / 2)
    print("numeric condition p=1.3 s=0.37", mp.nstr(power_condition_numeric(p, th, mp.mpf("0.37")), 15))
    for k in (1, 10, 100, 1000):
        f = ThreePiece("0.1")
        print("first_bound alpha=0.1 s=%dr" % k, mp.nstr(first_bound("0.1", k * f.r), 15))
    f = ThreePiece("0.13")
    print("first_bound alpha=0.13 s=r^2", mp.nstr(first_bound("0.13", f.r ** 2), 15))
    f = ThreePiece("0.1")
    print("second_bound alpha=0.1 s=r U=3840", mp.nstr(second_bound("0.1", f.r, 3840), 15))
    print("besov interval p=1.3 theta=0.2", mp.nstr(besov_interval_closed_form(p, mp.mpf("0.2")), 15))
    for r in ("1", "0.5", "0.25", "0.125"):
        print("necessity ratio critical r=%s" % r, mp.nstr(necessity_ratio(p, th, mp.mpf(r)), 15),
              "exact", mp.nstr(necessity_ratio(p, th, mp.mpf(r), exact=True), 15))
