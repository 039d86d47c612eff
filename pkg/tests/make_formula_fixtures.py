#!/usr/bin/env python3
"""Regenerate tests/fixtures/formula_grid.json.

Independent arbitrary-precision evaluation (mpmath, 50 digits) of every
closed-form formula on a frozen 100-point grid per formula. Run once and
commit the output; the test suite compares the library's double-precision
values against these strings at 1e-12 relative tolerance.
"""

import json
import os

import mpmath as mp

mp.mp.dps = 50

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "fixtures", "formula_grid.json")


def linspace(a, b, k):
    return [a + (b - a) * i / (k - 1) for i in range(k)]


def main():
    fixtures = {}

    rows = []
    for gamma in linspace(0.0, 1.0, 10):
        for lam in linspace(0.0, 1.0, 10):
            g, l = mp.mpf(gamma), mp.mpf(lam)
            rows.append({"gamma": gamma, "lam": lam, "value": mp.nstr(1 - g + l * (1 - l) * g * g, 30)})
    fixtures["alpha_star"] = rows

    rows = []
    for s in linspace(0.1, 1.0, 10):
        for alpha in linspace(0.1, 1.0, 10):
            sv, av = mp.mpf(s), mp.mpf(alpha)
            rows.append({"s": s, "alpha": alpha, "value": mp.nstr(1 / (sv * sv * av), 30)})
    fixtures["c_threshold"] = rows

    rows = []
    for s in linspace(0.0, 1.0, 10):
        for alpha in linspace(0.0, 1.0, 10):
            sv, av = mp.mpf(s), mp.mpf(alpha)
            rows.append({"s": s, "alpha": alpha, "value": mp.nstr(sv * (1 - av * av) / 4, 30)})
    fixtures["scg_gamma_bound_log"] = rows

    rows = []
    for p in linspace(0.0, 1.0, 5):
        for s in linspace(0.0, 1.0, 5):
            for alpha in linspace(0.0, 1.0, 4):
                pv, sv, av = mp.mpf(p), mp.mpf(s), mp.mpf(alpha)
                val = 1 - mp.sqrt(1 - sv * sv * pv * (1 - pv) * (1 - av * av) / 2)
                rows.append({"p": p, "s": s, "alpha": alpha, "value": mp.nstr(val, 30)})
    fixtures["scg_gamma_bound_lin"] = rows

    rows = []
    for beta in linspace(0.05, 0.95, 10):
        for s in (0.6, 1.0):
            bound = s * (1 - beta * beta) / 4
            for frac in (0.0, 0.2, 0.4, 0.6, 0.8):
                gamma = frac * bound
                bv, sv, gv = mp.mpf(beta), mp.mpf(s), mp.mpf(gamma)
                val = mp.log((1 - 4 * gv / sv) / (bv * bv))
                rows.append({"beta": beta, "gamma": gamma, "s": s, "value": mp.nstr(val, 30)})
    fixtures["t_star"] = rows

    rows_l1, rows_l2 = [], []
    for p in (0.1, 0.3, 0.5, 0.7, 0.9):
        for s in (0.2, 0.5, 0.8, 1.0):
            for t in (-0.5, 0.0, 0.3, 0.5, 1.0):
                pv, sv, tv = mp.mpf(p), mp.mpf(s), mp.mpf(t)
                ps = pv * sv
                et = mp.e**tv
                l1 = 1 - ps + ps * (1 - sv + sv * et)
                inner = 1 - pv + pv * (1 - sv) ** 2 + ps * (1 - sv) * et
                l2 = (1 - ps) ** 2 + 2 * ps * inner + (ps * (1 - sv + sv * et)) ** 2
                rows_l1.append({"p": p, "s": s, "t": t, "value": mp.nstr(l1, 30)})
                rows_l2.append({"p": p, "s": s, "t": t, "value": mp.nstr(l2, 30)})
    fixtures["mgf_L1"] = rows_l1
    fixtures["mgf_L2"] = rows_l2

    with open(OUT, "w", encoding="ascii") as fh:
        json.dump(fixtures, fh, indent=1, sort_keys=True)
        fh.write("\n")
    total = sum(len(v) for v in fixtures.values())
    print(f"wrote {total} fixture rows across {len(fixtures)} formulas to {OUT}")


if __name__ == "__main__":
    main()
