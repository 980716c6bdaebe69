"""Independent oracles backing the frozen expected values in the tests.

Everything here is deliberately written against mpmath scalars (50 decimal
digits), not against the library's numpy code paths, so agreement between
the two is meaningful.  Frozen constants in the tests were produced by these
functions and are re-derivable by calling them.
"""

import mpmath as mp

mp.mp.dps = 50


def _to_mp(weights):
    return [mp.mpf(repr(float(w))) for w in weights]


def kl_oracle(p, q):
    p, q = _to_mp(p), _to_mp(q)
    total = mp.mpf(0)
    for a, b in zip(p, q):
        if a > 0 and b == 0:
            return mp.inf
        if a > 0:
            total += a * mp.log(a / b)
    return float(total)


def kl_extended_oracle(p, q):
    p, q = _to_mp(p), _to_mp(q)
    total = mp.mpf(0)
    for a, b in zip(p, q):
        if a > 0 and b == 0:
            return mp.inf
        if a > 0:
            total += a * mp.log(a / b)
        total += b - a
    return float(total)


def js_oracle(p, q):
    p, q = _to_mp(p), _to_mp(q)
    m = [(a + b) / 2 for a, b in zip(p, q)]
    return float((kl_oracle(p, m) + kl_oracle(q, m)) / 2)


def geometric_z_oracle(p, q):
    p, q = _to_mp(p), _to_mp(q)
    return float(mp.fsum(mp.sqrt(a * b) for a, b in zip(p, q)))


def bhattacharyya_oracle(p, q, alpha=0.5):
    p, q = _to_mp(p), _to_mp(q)
    alpha = mp.mpf(repr(float(alpha)))
    coeff = mp.fsum(a ** alpha * b ** (1 - alpha) for a, b in zip(p, q))
    return float(-mp.log(coeff)) if coeff > 0 else float(mp.inf)


def js_geometric_oracle(p, q):
    """Normalized geometric JSD by direct summation (not the J/4 - B identity)."""
    p, q = _to_mp(p), _to_mp(q)
    z = mp.fsum(mp.sqrt(a * b) for a, b in zip(p, q))
    m = [mp.sqrt(a * b) / z for a, b in zip(p, q)]
    return float((kl_oracle(p, m) + kl_oracle(q, m)) / 2)


def js_geometric_extended_oracle(p, q):
    """Extended geometric JSD by direct summation of its defining integrand."""
    p, q = _to_mp(p), _to_mp(q)
    total = mp.mpf(0)
    for a, b in zip(p, q):
        g = mp.sqrt(a * b)
        for x in (a, b):
            if x > 0:
                total += x * mp.log(x / g)
            total += g - x
    return float(total / 2)


def taneja_oracle(p, q):
    p, q = _to_mp(p), _to_mp(q)
    total = mp.mpf(0)
    for a, b in zip(p, q):
        if a + b == 0:
            continue
        g = mp.sqrt(a * b)
        if g == 0:
            return mp.inf
        total += (a + b) / 2 * mp.log((a + b) / (2 * g))
    return float(total)


def kl_between_mixtures_oracle(p, q):
    """KL between the arithmetic and normalized geometric mixtures."""
    p, q = _to_mp(p), _to_mp(q)
    z_g = mp.fsum(mp.sqrt(a * b) for a, b in zip(p, q))
    arith = [(a + b) / 2 for a, b in zip(p, q)]
    geo = [mp.sqrt(a * b) / z_g for a, b in zip(p, q)]
    return kl_oracle(arith, geo)


def total_variation_oracle(p, q):
    p, q = _to_mp(p), _to_mp(q)
    return float(mp.fsum(abs(a - b) for a, b in zip(p, q)) / 2)


# ---------------------------------------------------------------------------
# Gaussian oracles via mpmath quadrature (fixed pairs only; slow but exact)
# ---------------------------------------------------------------------------

def _gauss_pdf(mu, sigma):
    mu, sigma = mp.mpf(repr(float(mu))), mp.mpf(repr(float(sigma)))

    def pdf(x):
        return mp.e ** (-(x - mu) ** 2 / (2 * sigma ** 2)) / (sigma * mp.sqrt(2 * mp.pi))

    return pdf


def _gauss_interval(m1, s1, m2, s2):
    lo = min(m1, m2) - 14 * max(s1, s2)
    hi = max(m1, m2) + 14 * max(s1, s2)
    return [lo, hi]


def gaussian_kl_quad(m1, s1, m2, s2):
    p1, p2 = _gauss_pdf(m1, s1), _gauss_pdf(m2, s2)
    return float(mp.quad(lambda x: p1(x) * mp.log(p1(x) / p2(x)),
                         _gauss_interval(m1, s1, m2, s2)))


def gaussian_bhattacharyya_quad(m1, s1, m2, s2, alpha=0.5):
    p1, p2 = _gauss_pdf(m1, s1), _gauss_pdf(m2, s2)
    alpha = mp.mpf(repr(float(alpha)))
    coeff = mp.quad(lambda x: p1(x) ** alpha * p2(x) ** (1 - alpha),
                    _gauss_interval(m1, s1, m2, s2))
    return float(-mp.log(coeff))


def gaussian_gjsd_quad(m1, s1, m2, s2):
    p1, p2 = _gauss_pdf(m1, s1), _gauss_pdf(m2, s2)
    interval = _gauss_interval(m1, s1, m2, s2)
    z = mp.quad(lambda x: mp.sqrt(p1(x) * p2(x)), interval)

    def integrand(x):
        mix = mp.sqrt(p1(x) * p2(x)) / z
        return (p1(x) * mp.log(p1(x) / mix) + p2(x) * mp.log(p2(x) / mix)) / 2

    return float(mp.quad(integrand, interval))


def gaussian_gjsd_extended_quad(m1, s1, m2, s2):
    p1, p2 = _gauss_pdf(m1, s1), _gauss_pdf(m2, s2)
    interval = _gauss_interval(m1, s1, m2, s2)

    def integrand(x):
        g = mp.sqrt(p1(x) * p2(x))
        return (p1(x) * mp.log(p1(x) / g) + p2(x) * mp.log(p2(x) / g)
                + 2 * g - p1(x) - p2(x)) / 2

    return float(mp.quad(integrand, interval))


def gaussian_tv_quad(m1, s1, m2, s2):
    p1, p2 = _gauss_pdf(m1, s1), _gauss_pdf(m2, s2)
    lo, hi = _gauss_interval(m1, s1, m2, s2)

    # locate density crossovers by sign scan + bisection (no closed form used)
    def diff(x):
        return p1(x) - p2(x)

    step = (hi - lo) / 4000
    points = [lo]
    last_sign, last_x = 0, lo
    for i in range(4001):
        x = lo + i * step
        sign = mp.sign(diff(x))
        if sign == 0:
            points.append(x)  # the grid point is itself a crossover
        elif last_sign != 0 and sign != last_sign:
            a, b = last_x, x
            for _ in range(200):
                mid = (a + b) / 2
                if mp.sign(diff(mid)) == mp.sign(diff(a)):
                    a = mid
                else:
                    b = mid
            points.append((a + b) / 2)
        last_sign, last_x = sign, x
    points.append(hi)
    return float(mp.quad(lambda x: abs(diff(x)), sorted(points)) / 2)
