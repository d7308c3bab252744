"""Generate the frozen Pisot oracle fixture.

Draws seeded random monic integer polynomials of degree <= 6 that are
irreducible over Q and have a real root > 1, then classifies each with
200-digit mpmath root finding. Half of the sample is Pisot, half is not.

    python3 gen_pisot_oracle.py > pisot_oracle.json
"""
import json
import random

import mpmath
import sympy

mpmath.mp.dps = 200
SEED = 20090111
x = sympy.symbols("x")


def classify(coeffs_low_first):
    high_first = list(reversed(coeffs_low_first))
    roots = mpmath.polyroots(high_first, maxsteps=2000, extraprec=800)
    real_above_one = [r for r in roots if abs(mpmath.im(r)) < mpmath.mpf(10) ** -150 and mpmath.re(r) > 1]
    if not real_above_one:
        return None
    lam = max(real_above_one, key=lambda r: mpmath.re(r))
    others = [abs(r) for r in roots if r is not lam]
    # keep clear of the unit circle so the verdict is unambiguous at 200 digits
    if any(abs(m - 1) < mpmath.mpf(10) ** -100 for m in others):
        return None
    top = max(others) if others else mpmath.mpf(0)
    return all(m < 1 for m in others), mpmath.nstr(top, 30), mpmath.nstr(mpmath.re(lam), 30)


def main():
    rng = random.Random(SEED)
    want = {True: 25, False: 25}
    out = []
    while want[True] or want[False]:
        deg = rng.randint(1, 6)
        coeffs = [rng.randint(-6, 6) for _ in range(deg)] + [1]
        if coeffs[0] == 0:
            continue
        poly = sympy.Poly(list(reversed(coeffs)), x)
        if not poly.is_irreducible:
            continue
        verdict = classify(coeffs)
        if verdict is None:
            continue
        is_pisot, top, lam = verdict
        if want[is_pisot] == 0:
            continue
        want[is_pisot] -= 1
        out.append({"coeffs": coeffs, "is_pisot": is_pisot, "max_conjugate_modulus": top, "root": lam})
    print(json.dumps({"seed": SEED, "digits": 200, "cases": out}, indent=1))


if __name__ == "__main__":
    main()
