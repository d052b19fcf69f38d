"""Exact rational arithmetic on unnormalized integer pairs.

``fractions.Fraction`` reduces by a gcd after every operation, which
dominates the cost of long terminating sums. Here a rational is a plain
``(numerator, denominator)`` tuple of ints with a positive denominator and
reduction happens once, at the end.
"""
from __future__ import annotations

import math
from fractions import Fraction


def common_scale(values):
    """Scale ``D`` and integers ``V_i`` with ``values[i] == V_i / D``."""
    fr = [Fraction(v) for v in values]
    d = 1
    for f in fr:
        d = d * f.denominator // math.gcd(d, f.denominator)
    return d, [f.numerator * (d // f.denominator) for f in fr]


def terminating_pair(numerators, denominators):
    """Terminating ``pFq(-n, ...; ...; 1)`` as an integer pair.

    Horner form ``1 + r_0 (1 + r_1 (1 + ... r_{n-1}))`` keeps every term's
    denominator a divisor of the next, so sizes grow only linearly in ``n``.
    Raises ``ZeroDivisionError`` when a denominator Pochhammer vanishes.
    """
    first = Fraction(numerators[0])
    n = -int(first)
    d, ints = common_scale(list(numerators) + list(denominators))
    return terminating_scaled(n, ints[: len(numerators)], ints[len(numerators):], d)


def terminating_scaled(n, num, den, d):
    """As :func:`terminating_pair` with every parameter given as ``V / d``.

    ``n`` is the number of nonzero terms minus one; ``num[0]`` should be
    ``-n * d``.
    """
    p, q = len(num), len(den)
    # r_k = prod(N_i + kD) D^q / ((k+1) prod(Q_j + kD) D^p)
    lift_top = d ** max(q - p, 0)
    lift_bot = d ** max(p - q, 0)
    acc_n, acc_d = 1, 1
    for k in range(n - 1, -1, -1):
        kd = k * d
        top = lift_top
        for v in num:
            top *= v + kd
        bot = (k + 1) * lift_bot
        for v in den:
            bot *= v + kd
        if bot == 0:
            raise ZeroDivisionError(f"denominator Pochhammer vanishes at k={k}")
        # acc = 1 + top/bot * acc
        acc_n, acc_d = bot * acc_d + top * acc_n, bot * acc_d
    if acc_d < 0:
        acc_n, acc_d = -acc_n, -acc_d
    return acc_n, acc_d


def poch_scaled(v, k, d):
    """``(v / d)_k`` as an integer pair."""
    top = 1
    for j in range(k):
        top *= v + j * d
    return top, d ** k


def poch_pair(value, k):
    """``(value)_k`` as an integer pair."""
    f = Fraction(value)
    top, bot = 1, 1
    for j in range(k):
        top *= f.numerator + j * f.denominator
        bot *= f.denominator
    return top, bot


def mul(x, y):
    return x[0] * y[0], x[1] * y[1]


def div(x, y):
    if y[0] == 0:
        raise ZeroDivisionError("division by an exact zero")
    n, d = x[0] * y[1], x[1] * y[0]
    return (-n, -d) if d < 0 else (n, d)


def add(x, y):
    return x[0] * y[1] + y[0] * x[1], x[1] * y[1]


def reduce(x):
    g = math.gcd(x[0], x[1])
    return (x[0] // g, x[1] // g) if g > 1 else x


def to_fraction(x):
    return Fraction(x[0], x[1])


def to_float(x):
    return x[0] / x[1]
