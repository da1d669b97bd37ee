"""Reference values for the agreement statistics fixtures in test_eval.cpp.

Fleiss' kappa is evaluated in exact rational arithmetic; Pearson r and its
two-sided p-value come from scipy.
"""
from fractions import Fraction

from scipy import stats

RATINGS = [
    [0, 0, 0], [0, 0, 1], [1, 1, 1], [0, 1, 2], [2, 2, 2],
    [1, 1, 0], [0, 0, 0], [2, 2, 1], [1, 1, 1], [0, 2, 2],
]


def fleiss(ratings):
    n = len(ratings[0])
    cats = sorted({c for item in ratings for c in item})
    p_bar = Fraction(0)
    totals = {c: 0 for c in cats}
    for item in ratings:
        counts = {c: item.count(c) for c in cats}
        p_bar += Fraction(sum(v * (v - 1) for v in counts.values()), n * (n - 1))
        for c, v in counts.items():
            totals[c] += v
    p_bar /= len(ratings)
    p_e = sum(Fraction(t, len(ratings) * n) ** 2 for t in totals.values())
    return (p_bar - p_e) / (1 - p_e)


X = [2.1, 3.4, 1.9, 5.6, 4.4, 6.1, 7.3, 5.0, 8.2, 6.6]
Y = [1.0, 2.9, 2.2, 4.1, 3.0, 6.8, 5.9, 3.3, 7.7, 4.9]

k = fleiss(RATINGS)
print(f"fleiss {k.numerator}/{k.denominator} = {float(k)!r}")
res = stats.pearsonr(X, Y)
print(f"pearson r = {float(res[0])!r} p = {float(res[1])!r}")
weak = stats.pearsonr([1, 2, 3, 4, 5, 6], [2, 1, 4, 3, 6, 2])
print(f"weak r = {float(weak[0])!r} p = {float(weak[1])!r}")
