"""Writes tau_schur_n1.json: Schur coefficients c_lambda of T(N=1) at p1 = p2 = 0.

c_lambda = q^{-kappa(lambda)/4} s_{lambda^t}(q^{-rho}), with the principal
specialization from the hook length formula
s_mu(q^{-rho}) = q^{n(mu) + |mu|/2} / prod_boxes (1 - q^{hook}).
"""

import json
from fractions import Fraction
from pathlib import Path

MAX_WEIGHT = 4
WIDTH = 12  # q-powers kept above the valuation


def partitions(n, m=None):
    m = n if m is None else m
    if n == 0:
        yield ()
        return
    for k in range(min(n, m), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def conj(p):
    return tuple(sum(1 for x in p if x > j) for j in range(p[0])) if p else ()


def kappa(p):
    return sum(x * (x - 2 * i - 1) for i, x in enumerate(p))


def n_of(p):
    return sum(i * x for i, x in enumerate(p))


def hooks(p):
    c = conj(p)
    return [p[i] - j + c[j] - i - 1 for i in range(len(p)) for j in range(p[i])]


def inverse_product(hs, width):
    # prod 1 / (1 - q^h) as integer coefficients up to q^{width-1}
    s = [1] + [0] * (width - 1)
    for h in hs:
        for e in range(h, width):
            s[e] += s[e - h]
    return s


def main():
    table = []
    for w in range(MAX_WEIGHT + 1):
        for lam in partitions(w):
            mu = conj(lam)
            shift = Fraction(-kappa(lam), 4) + n_of(mu) + Fraction(w, 2)
            coeffs = inverse_product(hooks(mu), WIDTH)
            table.append({
                "lambda": list(lam),
                "terms": [[str(shift + e), str(c)] for e, c in enumerate(coeffs) if c],
                "order": str(shift + WIDTH),
            })
    out = Path(__file__).with_suffix(".json")
    out.write_text(json.dumps({"N": 1, "max_weight": MAX_WEIGHT, "table": table}, indent=1) + "\n")


if __name__ == "__main__":
    main()
