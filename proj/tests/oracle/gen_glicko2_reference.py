#!/usr/bin/env python3
"""Reference Glicko-2 implementation used to freeze test fixtures.

Implements the update procedure from Glickman's "Example of the Glicko-2
system" document (http://www.glicko.net/glicko/glicko2.pdf) directly in
Python. Independent of the C++ code under test; run once to regenerate
tests/data/glicko2_reference.json.
"""

import json
import math
import random

SCALE = 173.7178


def g(phi):
    return 1.0 / math.sqrt(1.0 + 3.0 * phi * phi / (math.pi ** 2))


def expect(mu, mu_j, phi_j):
    return 1.0 / (1.0 + math.exp(-g(phi_j) * (mu - mu_j)))


def update(r, rd, vol, opponents, tau, eps=1e-6):
    """One rating period. opponents: list of (r_j, rd_j, score)."""
    mu = (r - 1500.0) / SCALE
    phi = rd / SCALE
    gs, es, ss = [], [], []
    for r_j, rd_j, s in opponents:
        mu_j = (r_j - 1500.0) / SCALE
        phi_j = rd_j / SCALE
        gs.append(g(phi_j))
        es.append(expect(mu, mu_j, phi_j))
        ss.append(s)
    v = 1.0 / sum(gj * gj * ej * (1.0 - ej) for gj, ej in zip(gs, es))
    delta = v * sum(gj * (sj - ej) for gj, ej, sj in zip(gs, es, ss))

    a = math.log(vol * vol)

    def f(x):
        ex = math.exp(x)
        num = ex * (delta * delta - phi * phi - v - ex)
        den = 2.0 * (phi * phi + v + ex) ** 2
        return num / den - (x - a) / (tau * tau)

    A = a
    if delta * delta > phi * phi + v:
        B = math.log(delta * delta - phi * phi - v)
    else:
        k = 1
        while f(a - k * tau) < 0.0:
            k += 1
        B = a - k * tau
    fa, fb = f(A), f(B)
    iters = 0
    while abs(B - A) > eps:
        C = A + (A - B) * fa / (fb - fa)
        fc = f(C)
        if fc * fb <= 0.0:
            A, fa = B, fb
        else:
            fa /= 2.0
        B, fb = C, fc
        iters += 1
        assert iters < 100
    vol_new = math.exp(A / 2.0)

    phi_star = math.sqrt(phi * phi + vol_new * vol_new)
    phi_new = 1.0 / math.sqrt(1.0 / (phi_star * phi_star) + 1.0 / v)
    mu_new = mu + phi_new * phi_new * sum(
        gj * (sj - ej) for gj, ej, sj in zip(gs, es, ss))
    return (SCALE * mu_new + 1500.0, SCALE * phi_new, vol_new)


def win_probability(r_a, rd_a, r_b, rd_b):
    """Glicko-style expected score with combined-deviation attenuation."""
    q = math.log(10.0) / 400.0
    rd_comb = math.sqrt(rd_a * rd_a + rd_b * rd_b)
    g1 = 1.0 / math.sqrt(1.0 + 3.0 * (q * rd_comb) ** 2 / (math.pi ** 2))
    return 1.0 / (1.0 + 10.0 ** (-g1 * (r_a - r_b) / 400.0))


def main():
    worked = update(1500.0, 200.0, 0.06,
                    [(1400.0, 30.0, 1.0), (1550.0, 100.0, 0.0),
                     (1700.0, 300.0, 0.0)], 0.5)
    print("worked example:", worked)
    assert abs(worked[0] - 1464.06) < 0.01
    assert abs(worked[1] - 151.52) < 0.01

    rng = random.Random(20260809)
    cases = []
    for _ in range(60):
        r = rng.uniform(1200.0, 1800.0)
        rd = rng.uniform(30.0, 350.0)
        vol = rng.uniform(0.03, 0.12)
        tau = rng.choice([0.3, 0.5, 0.75, 1.0])
        r_j = rng.uniform(1200.0, 1800.0)
        rd_j = rng.uniform(30.0, 350.0)
        score = rng.choice([0.0, 0.0, 1.0, 1.0, 0.5])
        out = update(r, rd, vol, [(r_j, rd_j, score)], tau)
        cases.append({
            "rating": r, "rd": rd, "vol": vol, "tau": tau,
            "opponents": [[r_j, rd_j, score]],
            "expected": {"rating": out[0], "rd": out[1], "vol": out[2]},
        })

    probs = []
    for (ra, da, rb, db) in [(1700.0, 50.0, 1500.0, 50.0),
                             (1500.0, 350.0, 1500.0, 350.0),
                             (1650.0, 120.0, 1420.0, 80.0),
                             (1400.0, 200.0, 1600.0, 30.0)]:
        probs.append({"r_a": ra, "rd_a": da, "r_b": rb, "rd_b": db,
                      "p": win_probability(ra, da, rb, db)})

    data = {
        "worked_example": {
            "rating": 1500.0, "rd": 200.0, "vol": 0.06, "tau": 0.5,
            "opponents": [[1400.0, 30.0, 1.0], [1550.0, 100.0, 0.0],
                          [1700.0, 300.0, 0.0]],
            "expected": {"rating": worked[0], "rd": worked[1],
                         "vol": worked[2]},
        },
        "random_cases": cases,
        "win_probabilities": probs,
    }
    with open("tests/data/glicko2_reference.json", "w") as fh:
        json.dump(data, fh, indent=1)
    print(f"wrote {len(cases)} random cases")


if __name__ == "__main__":
    main()
