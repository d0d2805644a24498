"""Polynomials over Q(omega) stored as pairs (p0, p1) meaning p0 + omega*p1.

Both components are flint fmpq_mpoly in the same context.  These helpers are
the inner loop of tower arithmetic, so zero components are short-circuited.
"""

from __future__ import annotations

import flint

from .cyclotomic import Cyclotomic, cyclotomic_root


def mul(a, b):
    a0, a1 = a
    b0, b1 = b
    if a1.is_zero():
        if b1.is_zero():
            return (a0 * b0, b1)
        return (a0 * b0, a0 * b1)
    if b1.is_zero():
        return (a0 * b0, a1 * b0)
    t = a1 * b1
    return (a0 * b0 - t, a0 * b1 + a1 * b0 - t)


def add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def neg(a):
    return (-a[0], -a[1])


def is_zero(a) -> bool:
    return a[0].is_zero() and a[1].is_zero()


def times_omega(a, k: int):
    k %= 3
    a0, a1 = a
    if k == 0:
        return a
    if k == 1:
        return (-a1, a0 - a1)
    return (a1 - a0, -a0)


def conjugate(a):
    """omega -> omega^2 applied to the coefficients."""
    a0, a1 = a
    return (a0 - a1, -a1)


def norm(a):
    """a * conjugate(a), a polynomial over Q."""
    a0, a1 = a
    return a0 * a0 - a0 * a1 + a1 * a1


def scale(a, c: Cyclotomic, ctx):
    return mul(a, (ctx.constant(_q(c.a)), ctx.constant(_q(c.b))))


def _q(f):
    return flint.fmpq(f.numerator, f.denominator)


def _key(m):
    return (sum(m), m)


def leading(a):
    """Leading monomial (deglex) and its Q(omega) coefficient."""
    best = None
    for p in a:
        if not p.is_zero():
            m = p.monoms()[0]
            if best is None or _key(m) > _key(best):
                best = m
    if best is None:
        return None, Cyclotomic(0)
    c = []
    for p in a:
        if p.is_zero():
            c.append(0)
            continue
        m0 = p.monoms()[0]
        c.append(p.coeffs()[0] if m0 == best else 0)
    return best, Cyclotomic(c[0], c[1])


def monomial_pair(ctx, m, c: Cyclotomic):
    zero = ctx.constant(0)
    p0 = ctx.term(coeff=_q(c.a), exp_vec=m) if c.a else zero
    p1 = ctx.term(coeff=_q(c.b), exp_vec=m) if c.b else zero
    return (p0, p1)


def nth_root(a, n: int, ctx):
    """Exact n-th root (n = 2 or 3) of a polynomial pair, or None.

    Peels off the root term by term in deglex order.  If a = r^n and R is the
    leading part of r, the leading term of a - R^n equals n*lt(R)^(n-1)*t for
    the next term t of r, so a mismatch anywhere proves that no root exists.
    """
    if n not in (2, 3):
        raise ValueError("only square and cube roots are supported")
    zero = ctx.constant(0)
    if is_zero(a):
        return (zero, zero)
    m, c = leading(a)
    if any(e % n for e in m):
        return None
    rc = cyclotomic_root(c, n)
    if rc is None:
        return None
    r = monomial_pair(ctx, tuple(e // n for e in m), rc)
    lm_r = tuple(e // n for e in m)
    denom_c = Cyclotomic(n) * rc ** (n - 1)
    r2 = mul(r, r)
    power = r2 if n == 2 else mul(r2, r)
    rem = sub(a, power)
    lm_sq = tuple((n - 1) * e for e in lm_r)
    while not is_zero(rem):
        mr, cr = leading(rem)
        q = tuple(x - y for x, y in zip(mr, lm_sq))
        if any(e < 0 for e in q) or _key(q) >= _key(lm_r):
            return None
        t = monomial_pair(ctx, q, cr / denom_c)
        t2 = mul(t, t)
        if n == 2:
            delta = add(mul((2 * r[0], 2 * r[1]), t), t2)
        else:
            rt = mul(r, t)
            delta = add(add(mul((3 * r2[0], 3 * r2[1]), t), mul((3 * rt[0], 3 * rt[1]), t)), mul(t2, t))
            r2 = add(add(r2, (2 * rt[0], 2 * rt[1])), t2)
        rem = sub(rem, delta)
        r = add(r, t)
    return r
