"""Galois action, norms, the Hilbert-90 solver and random elements."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..errors import ExhaustedCandidates, NormNotOne, RadicandIsCube, TowerMismatch, ZeroRadicand
from .cyclotomic import Cyclotomic
from .tower import FieldTower, GaloisElement, TowerElement, tower_make

HILBERT90_SEED = 90
HILBERT90_RANDOM_TRIES = 64


def _check(sigma: GaloisElement, x: TowerElement, tower: FieldTower | None):
    if tower is not None and not (x.tower is tower or x.tower.is_prefix_of(tower)):
        raise TowerMismatch("element does not belong to the tower of the Galois element")


def galois_apply(sigma: GaloisElement, x: TowerElement, tower: FieldTower | None = None) -> TowerElement:
    _check(sigma, x, tower)
    return x.galois(sigma)


def norm(x: TowerElement, along: GaloisElement, tower: FieldTower | None = None) -> TowerElement:
    """x * sigma(x) * sigma^2(x); the result is checked to be sigma-fixed."""
    _check(along, x, tower)
    if along.is_identity():
        raise ValueError("norm needs a Galois element of order 3")
    n = x * x.galois(along) * x.galois(along * along)
    if n.galois(along) != n:
        raise ArithmeticError("norm is not fixed by the Galois element")
    return n


@dataclass
class Hilbert90Result:
    value: TowerElement
    candidate: str
    seed: int
    tries: int = 1
    log: list = field(default_factory=list)


def _candidates(tower: FieldTower, rng: random.Random, fixed_by):
    mons = [(0, 0), (1, 0), (0, 1), (2, 0), (0, 2), (1, 1), (2, 1), (1, 2), (2, 2)]
    for i, j in mons:
        if i >= tower.nt or j >= tower.ns:
            continue
        c = tower.monomial(i, j)
        if fixed_by is not None and not c.is_fixed_by(fixed_by):
            continue
        yield f"t^{i}s^{j}", c
    for k in range(HILBERT90_RANDOM_TRIES):
        c = tower.zero()
        for i in range(tower.nt):
            for j in range(tower.ns):
                coef = rng.randint(-3, 3)
                if coef:
                    c = c + coef * tower.monomial(i, j)
        if fixed_by is not None:
            # average over the subgroup to land in its fixed field
            c = c + c.galois(fixed_by) + c.galois(fixed_by * fixed_by)
        if not c.is_zero():
            yield f"random#{k}", c


def hilbert90_solve_detailed(
    mu: TowerElement, along: GaloisElement, seed: int = HILBERT90_SEED, fixed_by: GaloisElement | None = None
) -> Hilbert90Result:
    """Solve lambda / sigma(lambda) = mu for mu of norm 1.

    Candidates c are tried in a fixed order and the telescoping sum
    c + mu*sigma(c) + mu*sigma(mu)*sigma^2(c) is returned for the first c
    where it is nonzero.  ``fixed_by`` restricts the candidates (and hence
    the answer, when mu is fixed too) to the fixed field of another Galois
    element.
    """
    if mu.is_zero():
        raise NormNotOne("mu is zero")
    if norm(mu, along) != 1:
        raise NormNotOne("norm of mu is not 1")
    tower = mu.tower
    if mu == 1:
        return Hilbert90Result(tower.one(), "one", seed, 0)
    s1 = along
    s2 = along * along
    mu_s = mu * mu.galois(s1)
    rng = random.Random(seed)
    tries = 0
    for label, c in _candidates(tower, rng, fixed_by):
        tries += 1
        lam = c + mu * c.galois(s1) + mu_s * c.galois(s2)
        if lam.is_zero():
            continue
        if lam != mu * lam.galois(s1):
            raise ArithmeticError("Hilbert-90 candidate failed its own check")
        return Hilbert90Result(lam, label, seed, tries)
    raise ExhaustedCandidates(seed, tries)


def hilbert90_solve(mu: TowerElement, along: GaloisElement, seed: int = HILBERT90_SEED, fixed_by=None) -> TowerElement:
    return hilbert90_solve_detailed(mu, along, seed, fixed_by).value


def random_base_element(tower: FieldTower, rng: random.Random, degree: int = 1, coeff: int = 3, terms: int = 3,
                        with_omega: bool = True, denominator: bool = False) -> TowerElement:
    """Random element of the base field, sparse polynomial coefficients."""
    base = tower.base
    ctx = base.ctx
    nv = len(base.variables)

    def poly():
        d = {}
        for _ in range(terms):
            if nv:
                m = [0] * nv
                for _ in range(rng.randint(0, degree)):
                    m[rng.randrange(nv)] += 1
                m = tuple(m)
            else:
                m = ()
            d[m] = d.get(m, 0) + rng.randint(-coeff, coeff)
        return ctx.from_dict({k: v for k, v in d.items() if v})

    p0 = poly()
    p1 = poly() if with_omega else ctx.constant(0)
    den = None
    if denominator:
        den = poly()
        if den.is_zero():
            den = None
    if p0.is_zero() and p1.is_zero():
        p0 = ctx.constant(rng.choice([-2, -1, 1, 2]))
    return tower.coerce(base.from_poly(p0, p1, den))


def random_element(tower: FieldTower, rng: random.Random, degree: int = 1, coeff: int = 3, density: float = 0.6,
                   denominator: bool = False, nonzero: bool = True) -> TowerElement:
    """Random tower element: random base coefficients on a random subset of t^i s^j."""
    while True:
        x = tower.zero()
        for i in range(tower.nt):
            for j in range(tower.ns):
                if (i, j) == (0, 0) or rng.random() < density:
                    c = random_base_element(tower, rng, degree, coeff, denominator=denominator and rng.random() < 0.3)
                    x = x + c * tower.monomial(i, j)
        if not nonzero or not x.is_zero():
            return x



class Specializer:
    """Ring map from a tower over Q(omega)(vars) to a tower over Q(omega).

    Variables are replaced by integers; the radicands stay non-cubes, so the
    target is again a field.  Used for cheap gcd certificates and sampling.
    """

    def __init__(self, tower: FieldTower, rng: random.Random, tries: int = 50):
        self.source = tower
        for _ in range(tries):
            values = {name: rng.randint(2, 29) for name in tower.variables}
            try:
                layers = []
                for name, rad in tower.layers:
                    layers.append((name, self._const(rad, values)))
                self.target = tower_make([], layers)
                self.values = values
                return
            except (ZeroDivisionError, RadicandIsCube, ZeroRadicand):
                continue
        raise ArithmeticError("could not find a specialization point")

    @staticmethod
    def _const(x: TowerElement, values):
        p0, p1 = x.num[0]
        a, b, d = (p.subs(values) for p in (p0, p1, x.den))
        if d.is_zero():
            raise ZeroDivisionError

        def lc(p):
            return p.leading_coefficient() if not p.is_zero() else 0

        return Cyclotomic(lc(a), lc(b)) / Cyclotomic(lc(d))

    def __call__(self, x: TowerElement) -> TowerElement:
        """Image of x; raises ZeroDivisionError if its denominator vanishes."""
        T = self.target
        src = x.tower
        values = self.values
        d = x.den.subs(values)
        if d.is_zero():
            raise ZeroDivisionError("denominator vanishes at the specialization point")
        dv = d.leading_coefficient()
        one = T._one_poly
        num = [(T._zero_poly, T._zero_poly)] * T.size
        for k, (p0, p1) in enumerate(x.num):
            i, j = k % src.nt, k // src.nt
            if p0.is_zero() and p1.is_zero():
                continue
            c = self._const_pair(p0, p1, values)
            num[i + T.nt * j] = (one * c[0], one * c[1])
        return T._raw(num, one * dv)

    @staticmethod
    def _const_pair(p0, p1, values):
        out = []
        for p in (p0, p1):
            q = p.subs(values) if not p.is_zero() else p
            out.append(q.leading_coefficient() if not q.is_zero() else 0)
        return out
