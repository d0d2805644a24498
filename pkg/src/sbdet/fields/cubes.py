"""Cube and square tests in the base field and in towers."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ZeroInput
from . import pairs
from .tower import FieldTower, TowerElement


@dataclass(frozen=True)
class RootResult:
    status: str  # "cube" / "square", "no" or "undecided"
    witness: TowerElement | None = None
    certificate: str = ""

    @property
    def found(self) -> bool:
        return self.witness is not None


def _low(p, v):
    return min(m[v] for m in p.monoms())


def valuation_certificate(x: TowerElement, n: int = 3) -> str | None:
    """A place where the valuation of x is not divisible by n, if one is visible.

    Only the places var = 0, var = infinity and the total-degree place are
    inspected; none of them needs factoring.
    """
    p0, p1, d = x.base_pair()
    nums = [p for p in (p0, p1) if not p.is_zero()]
    names = x.tower.variables
    for v, name in enumerate(names):
        low = min(_low(p, v) for p in nums) - _low(d, v)
        if low % n:
            return f"valuation at {name}=0 is {low}"
        high = max(p.degrees()[v] for p in nums) - d.degrees()[v]
        if high % n:
            return f"degree in {name} is {high}"
    if names:
        tot = max(p.total_degree() for p in nums) - d.total_degree()
        if tot % n:
            return f"total degree is {tot}"
    return None


def _root_base(x: TowerElement, n: int, exact: bool) -> RootResult:
    label = "cube" if n == 3 else "square"
    if x.is_zero():
        raise ZeroInput("cube test of zero")
    if not x.in_base():
        from ..errors import NotInBaseField

        raise NotInBaseField("root tests are only available for base-field elements")
    cert = valuation_certificate(x, n)
    if cert is not None:
        return RootResult("no", None, cert)
    if not exact:
        return RootResult("undecided", None, "no valuation certificate")
    p0, p1, d = x.base_pair()
    ctx = x.tower.ctx
    # x is an n-th power iff the polynomial x * d^n = N * d^(n-1) is one
    dd = d ** (n - 1)
    r = pairs.nth_root((p0 * dd, p1 * dd), n, ctx)
    if r is None:
        return RootResult("no", None, f"numerator*denominator^{n - 1} has no exact {label} root")
    T = x.tower
    base = T.base
    w = base.from_poly(r[0], r[1], d)
    return RootResult(label, T.coerce(w) if T is not base else w, "")


def is_cube(x: TowerElement, exact: bool = True) -> RootResult:
    """Decide whether a nonzero base-field element is a cube in the base field."""
    return _root_base(x, 3, exact)


def is_square(x: TowerElement, exact: bool = True) -> RootResult:
    return _root_base(x, 2, exact)


def is_cube_in(x: TowerElement, tower: FieldTower) -> RootResult:
    """Decide whether x in k is a cube in ``tower``.

    Cubes of the tower that lie in k are k*^3 times the group generated by the
    radicands, so x is a cube in the tower iff x / (d1^a d2^b) is a cube in k
    for some exponents a, b in {0, 1, 2}.
    """
    if x.is_zero():
        raise ZeroInput("cube test of zero")
    xb = x.to_base() if x.tower is not x.tower.base else x
    rads = [r for _, r in tower.layers]
    exps_a = range(3) if len(rads) >= 1 else range(1)
    exps_b = range(3) if len(rads) >= 2 else range(1)
    certs = []
    undecided = False
    for b in exps_b:
        for a in exps_a:
            y = xb
            if a:
                y = y / rads[0] ** a
            if b:
                y = y / rads[1] ** b
            res = is_cube(y)
            if res.status == "cube":
                w = tower.coerce(res.witness) * tower.monomial(a, b)
                return RootResult("cube", w, "")
            if res.status == "undecided":
                undecided = True
            certs.append(f"[a={a},b={b}] {res.certificate}")
    if undecided:
        return RootResult("undecided", None, "; ".join(certs))
    return RootResult("no", None, "; ".join(certs))

