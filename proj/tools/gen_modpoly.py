#!/usr/bin/env python3
"""Generate classical modular polynomial data files (phi_<ell>.txt).

The coefficients are computed from the q-expansion of j: the roots of
Phi_ell(X, j(q)) are j(q^ell) and j(zeta^k q^(1/ell)) for k = 0..ell-1, so the
power sums of the roots are plain q-series, Newton's identities give the
elementary symmetric functions, and each of those is rewritten as a
polynomial in j(q) by leading-term elimination.  Every generated polynomial is
checked against Phi_ell(j(q), j(q^ell)) = 0 before it is written.

Requires python-flint for fast integer polynomial arithmetic.

Usage: gen_modpoly.py OUTDIR [ELL ...]
"""

import hashlib
import os
import sys

from flint import fmpz_poly


class Laurent:
    """q^val * poly, known exactly for exponents < prec."""

    __slots__ = ("val", "poly", "prec")

    def __init__(self, val, poly, prec):
        self.val = val
        self.prec = prec
        keep = max(prec - val, 0)
        self.poly = poly.truncate(keep) if keep < poly.length() else poly

    def __add__(self, other):
        val = min(self.val, other.val)
        prec = min(self.prec, other.prec)
        a = self.poly.left_shift(self.val - val)
        b = other.poly.left_shift(other.val - val)
        return Laurent(val, a + b, prec)

    def __neg__(self):
        return Laurent(self.val, -self.poly, self.prec)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return Laurent(self.val, self.poly * c, self.prec)

    def __mul__(self, other):
        val = self.val + other.val
        prec = min(self.prec + other.val, other.prec + self.val)
        n = max(prec - val, 0)
        n = min(n, self.poly.length() + other.poly.length())
        return Laurent(val, self.poly.mul_low(other.poly, n), prec)

    def coeff(self, e):
        if e >= self.prec:
            raise ValueError("coefficient beyond precision")
        k = e - self.val
        if k < 0 or k >= self.poly.length():
            return 0
        return int(self.poly.coeffs()[k])

    def exact_div(self, d):
        coeffs = [int(c) for c in self.poly.coeffs()]
        for c in coeffs:
            if c % d:
                raise ArithmeticError("inexact division in Newton identity")
        return Laurent(self.val, fmpz_poly([c // d for c in coeffs]), self.prec)


def partitions(n):
    p = [0] * (n + 1)
    p[0] = 1
    for m in range(1, n + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[m - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return p


def j_series(n):
    """j(q) as a Laurent series known for exponents < n."""
    sigma3 = [0] * (n + 2)
    for d in range(1, n + 2):
        for m in range(d, n + 2, d):
            sigma3[m] += d ** 3
    e4 = fmpz_poly([1] + [240 * sigma3[k] for k in range(1, n + 2)])
    inv_eta24 = fmpz_poly(partitions(n + 1)).pow_trunc(24, n + 2)
    qj = e4.pow_trunc(3, n + 2).mul_low(inv_eta24, n + 2)
    return Laurent(-1, qj, n)


def u_operator(series, ell):
    """sum_{ell | n} a_n q^(n/ell), from a series in T = q^(1/ell)."""
    coeffs = [int(c) for c in series.poly.coeffs()]
    out = {}
    for k, c in enumerate(coeffs):
        e = series.val + k
        if e % ell == 0:
            out[e // ell] = c
    lo = -((-series.val) // ell)
    prec = -((-series.prec) // ell)
    poly = fmpz_poly([out.get(e, 0) for e in range(lo, prec)])
    return Laurent(lo, poly, prec)


def v_operator(series, ell):
    """f(q) -> f(q^ell)."""
    poly = series.poly.inflate(ell) if series.poly.length() else series.poly
    return Laurent(series.val * ell, poly, series.prec * ell)


def strip(series):
    coeffs = [int(c) for c in series.poly.coeffs()]
    k = 0
    while k < len(coeffs) and coeffs[k] == 0 and series.val + k < series.prec:
        k += 1
    return Laurent(series.val + k, fmpz_poly(coeffs[k:]), series.prec)


def modular_polynomial(ell):
    deg = ell + 1
    # Precision budget: Newton's identities lose at most ell*deg orders on the
    # way from the power sums to e_deg, and the elimination needs q^0.
    target = 1
    prec_q = target + ell * deg + deg + 8
    j_t = j_series(ell * prec_q + 2)

    powers_t = [Laurent(0, fmpz_poly([1]), j_t.prec + 10 ** 6)]
    for _ in range(deg):
        powers_t.append(powers_t[-1] * j_t)

    power_sums = [None]
    for m in range(1, deg + 1):
        s = u_operator(powers_t[m], ell).scale(ell) + v_operator(powers_t[m], ell)
        power_sums.append(strip(s))

    elem = [Laurent(0, fmpz_poly([1]), 10 ** 9)]
    for k in range(1, deg + 1):
        acc = None
        for i in range(1, k + 1):
            term = elem[k - i] * power_sums[i]
            if i % 2 == 0:
                term = -term
            acc = term if acc is None else acc + term
        elem.append(strip(acc.exact_div(k)))

    j_q = j_series(prec_q)
    powers_q = [Laurent(0, fmpz_poly([1]), 10 ** 9)]
    for _ in range(deg):
        powers_q.append(powers_q[-1] * j_q)

    coeffs = {}
    for k in range(0, deg + 1):
        rest = elem[k]
        if rest.prec <= 0:
            raise RuntimeError(f"precision exhausted for e_{k} (ell={ell})")
        for d in range(deg, -1, -1):
            c = rest.coeff(-d)
            if c:
                rest = strip(rest - powers_q[d].scale(c))
                x_exp = deg - k
                coeffs[(x_exp, d)] = coeffs.get((x_exp, d), 0) + (-1) ** k * c
        for e in range(rest.val, min(rest.prec, 1)):
            if rest.coeff(e):
                raise RuntimeError(f"e_{k} is not a polynomial in j (ell={ell})")
    return {key: c for key, c in coeffs.items() if c}


def check(ell, coeffs):
    for (i, j), c in coeffs.items():
        if coeffs.get((j, i)) != c:
            raise RuntimeError(f"asymmetric coefficient ({i},{j}) for ell={ell}")
    deg = ell + 1
    if coeffs.get((deg, 0)) != 1 or coeffs.get((ell, ell)) != -1:
        raise RuntimeError(f"unexpected leading structure for ell={ell}")
    if (deg, deg) in coeffs:
        raise RuntimeError("X^(l+1) Y^(l+1) must be absent")
    # Independent check: Phi(j(q), j(q^ell)) vanishes to the computed order.
    prec = 40
    j_q = j_series(prec + deg * ell + 4)
    j_ql = v_operator(j_q, ell)
    xp = [Laurent(0, fmpz_poly([1]), 10 ** 9)]
    yp = [Laurent(0, fmpz_poly([1]), 10 ** 9)]
    for _ in range(deg):
        xp.append(xp[-1] * j_q)
        yp.append(yp[-1] * j_ql)
    total = None
    for (i, j), c in coeffs.items():
        term = (xp[i] * yp[j]).scale(c)
        total = term if total is None else total + term
    if total.prec < 10:
        raise RuntimeError("vanishing check has too little precision")
    for e in range(total.val, min(total.prec, prec)):
        if total.coeff(e):
            raise RuntimeError(f"Phi_{ell}(j(q), j(q^{ell})) != 0 at q^{e}")


def render(ell, coeffs):
    lines = [f"ell {ell}\n"]
    for (i, j) in sorted(k for k in coeffs if k[0] >= k[1]):
        lines.append(f"{i} {j} {coeffs[(i, j)]}\n")
    body = "".join(lines)
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    return body + f"sha256 {digest}\n"


def main(argv):
    if len(argv) < 2:
        print(__doc__, file=sys.stderr)
        return 1
    outdir = argv[1]
    ells = [int(x) for x in argv[2:]] or [2, 3, 5, 7, 11, 13]
    os.makedirs(outdir, exist_ok=True)
    for ell in ells:
        coeffs = modular_polynomial(ell)
        check(ell, coeffs)
        path = os.path.join(outdir, f"phi_{ell}.txt")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(render(ell, coeffs))
        print(f"phi_{ell}: {len(coeffs)} monomials -> {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
