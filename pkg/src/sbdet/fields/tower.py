"""Cyclic cubic towers k, L = k(t), F = L(s) over k = Q(omega)(variables).

An element of a tower is stored with one common denominator D in Q[vars]
and a numerator for every monomial t^i s^j, each numerator a pair (p0, p1)
standing for p0 + omega*p1 with p0, p1 in Q[vars].  The normal form has D
monic in deglex and gcd_Q(D, all numerator components) = 1; it is unique,
so equality is a comparison of normal forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import flint

from ..errors import (
    DuplicateGeneratorName,
    TooManyLayers,
    TowerMismatch,
    ZeroRadicand,
)
from . import pairs
from .cyclotomic import Cyclotomic


@dataclass(frozen=True)
class GaloisElement:
    """The automorphism g^i g'^j, with g(t) = omega t and g'(s) = omega s."""

    i: int = 0
    j: int = 0

    def __post_init__(self):
        object.__setattr__(self, "i", self.i % 3)
        object.__setattr__(self, "j", self.j % 3)

    def __mul__(self, other: "GaloisElement") -> "GaloisElement":
        return GaloisElement(self.i + other.i, self.j + other.j)

    def __pow__(self, n: int) -> "GaloisElement":
        return GaloisElement(self.i * n, self.j * n)

    def inverse(self) -> "GaloisElement":
        return GaloisElement(-self.i, -self.j)

    def is_identity(self) -> bool:
        return self.i == 0 and self.j == 0

    def order(self) -> int:
        return 1 if self.is_identity() else 3

    def __repr__(self):
        return f"GaloisElement({self.i}, {self.j})"


IDENTITY = GaloisElement(0, 0)
G = GaloisElement(1, 0)
GP = GaloisElement(0, 1)


class FieldTower:
    """A tower with at most two Kummer layers over Q(omega)(variables)."""

    def __init__(self, variables, layers=(), *, _base=None, _parent=None):
        self.variables = tuple(variables)
        self.layers = tuple(layers)  # (name, radicand) with radicand in base
        self.ctx = _base.ctx if _base is not None else flint.fmpq_mpoly_ctx.get(self.variables, "deglex")
        self.base = _base if _base is not None else self
        self.parent = _parent
        self.nt = 3 if len(self.layers) >= 1 else 1
        self.ns = 3 if len(self.layers) >= 2 else 1
        self.size = self.nt * self.ns
        self.radicand_status = []
        self._zero_poly = self.ctx.constant(0)
        self._one_poly = self.ctx.constant(1)
        self._factors = None
        self._etot = self._one_poly
        if self.layers:
            self._prepare_wraps()

    # -- construction helpers -------------------------------------------------
    def _prepare_wraps(self):
        data = []
        for _, rad in self.layers:
            data.append((rad.num[0], rad.den))
        one = (self._one_poly, self._zero_poly)
        factors = {}
        for w1 in (0, 1):
            for w2 in (0, 1):
                if self.nt == 1 and w1:
                    continue
                if self.ns == 1 and w2:
                    continue
                f = one
                R1, E1 = data[0]
                f = pairs.mul(f, R1 if w1 else (E1, self._zero_poly))
                if self.ns == 3:
                    R2, E2 = data[1]
                    f = pairs.mul(f, R2 if w2 else (E2, self._zero_poly))
                factors[(w1, w2)] = f
        self._factors = factors
        etot = data[0][1]
        if self.ns == 3:
            etot = etot * data[1][1]
        self._etot = etot

    @property
    def nlayers(self) -> int:
        return len(self.layers)

    @property
    def generator_names(self):
        return tuple(name for name, _ in self.layers)

    def prefix(self, n: int) -> "FieldTower":
        t = self
        while t.nlayers > n:
            t = t.parent
        return t

    def is_prefix_of(self, other: "FieldTower") -> bool:
        return other.prefix(self.nlayers) is self if self.nlayers <= other.nlayers else False

    def radicand(self, layer: int) -> "TowerElement":
        return self.layers[layer][1]

    def galois_group(self):
        iis = range(3) if self.nt == 3 else range(1)
        jjs = range(3) if self.ns == 3 else range(1)
        return [GaloisElement(i, j) for j in jjs for i in iis]

    # -- element constructors -------------------------------------------------
    def _raw(self, num, den, normalize=True) -> "TowerElement":
        e = TowerElement.__new__(TowerElement)
        e.tower = self
        e.num = tuple(num)
        e.den = den
        if normalize:
            e._normalize()
        return e

    def zero(self) -> "TowerElement":
        z = (self._zero_poly, self._zero_poly)
        return self._raw([z] * self.size, self._one_poly, normalize=False)

    def one(self) -> "TowerElement":
        return self.from_cyclotomic(Cyclotomic(1))

    def from_cyclotomic(self, c: Cyclotomic) -> "TowerElement":
        z = (self._zero_poly, self._zero_poly)
        num = [z] * self.size
        num[0] = (self.ctx.constant(pairs._q(c.a)), self.ctx.constant(pairs._q(c.b)))
        return self._raw(num, self._one_poly)

    def omega(self) -> "TowerElement":
        return self.from_cyclotomic(Cyclotomic.omega())

    def var(self, name: str) -> "TowerElement":
        z = (self._zero_poly, self._zero_poly)
        num = [z] * self.size
        num[0] = (self.ctx.gen(self.variables.index(name)), self._zero_poly)
        return self._raw(num, self._one_poly, normalize=False)

    def gen(self, name: str) -> "TowerElement":
        names = self.generator_names
        layer = names.index(name)
        z = (self._zero_poly, self._zero_poly)
        num = [z] * self.size
        num[1 if layer == 0 else self.nt] = (self._one_poly, self._zero_poly)
        return self._raw(num, self._one_poly, normalize=False)

    def monomial(self, i: int, j: int = 0) -> "TowerElement":
        """t^i s^j for 0 <= i, j <= 2."""
        z = (self._zero_poly, self._zero_poly)
        num = [z] * self.size
        num[i + self.nt * j] = (self._one_poly, self._zero_poly)
        return self._raw(num, self._one_poly, normalize=False)

    def from_poly(self, p0, p1=None, den=None) -> "TowerElement":
        """Base-field element (p0 + omega*p1)/den from flint polynomials."""
        z = (self._zero_poly, self._zero_poly)
        num = [z] * self.size
        num[0] = (p0, p1 if p1 is not None else self._zero_poly)
        return self._raw(num, den if den is not None else self._one_poly)

    def names(self):
        return set(self.variables) | set(self.generator_names) | {"omega"}

    def resolve(self, name: str) -> "TowerElement":
        if name == "omega":
            return self.omega()
        if name in self.variables:
            return self.var(name)
        if name in self.generator_names:
            return self.gen(name)
        from ..errors import UnknownName

        raise UnknownName(f"unknown name '{name}' in tower {self.describe()}")

    def parse(self, text: str) -> "TowerElement":
        from .parse import parse_expression

        return self.coerce(parse_expression(text, self.resolve, one=self.one()))

    def coerce(self, x) -> "TowerElement":
        if isinstance(x, TowerElement):
            if x.tower is self:
                return x
            if x.tower.is_prefix_of(self):
                return self._lift(x)
            raise TowerMismatch(f"element of {x.tower.describe()} used in {self.describe()}")
        if isinstance(x, Cyclotomic):
            return self.from_cyclotomic(x)
        if isinstance(x, (int, Fraction, flint.fmpq, flint.fmpz)):
            return self.from_cyclotomic(Cyclotomic(x))
        raise TypeError(f"cannot coerce {type(x).__name__} into a tower element")

    def _lift(self, x: "TowerElement") -> "TowerElement":
        z = (self._zero_poly, self._zero_poly)
        num = [z] * self.size
        src = x.tower
        for k, a in enumerate(x.num):
            i, j = k % src.nt, k // src.nt
            num[i + self.nt * j] = a
        return self._raw(num, x.den, normalize=False)

    def describe(self) -> str:
        parts = [f"Q(omega)({','.join(self.variables)})"]
        for name, rad in self.layers:
            parts.append(f"{name}^3={rad.to_expr()}")
        return " ; ".join(parts)

    def __repr__(self):
        return f"FieldTower({self.describe()})"


def _factor(p) -> str:
    """p as a factor of a product: parenthesized unless it is a single term."""
    text = str(p)
    return text if len(p) == 1 else f"({text})"


class TowerElement:
    """Exact element of a FieldTower.  Immutable."""

    __slots__ = ("tower", "num", "den", "_hash")

    # -- normalisation --------------------------------------------------------
    def _normalize(self):
        den = self.den
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        polys = [p for a in self.num for p in a if not p.is_zero()]
        if not polys:
            T = self.tower
            self.den = T._one_poly
            return
        g = den
        if not g.is_constant():
            for p in polys:
                g = g.gcd(p)
                if g.is_constant():
                    break
        if not g.is_constant():
            self.num = tuple((a[0] / g, a[1] / g) for a in self.num)
            den = den / g
        lc = den.leading_coefficient()
        if lc != 1:
            inv = 1 / lc
            self.num = tuple((a[0] * inv, a[1] * inv) for a in self.num)
            den = den * inv
        self.den = den

    # -- coercion -------------------------------------------------------------
    def _pair_with(self, other):
        if isinstance(other, TowerElement):
            if other.tower is self.tower:
                return self, other
            if other.tower.is_prefix_of(self.tower):
                return self, self.tower._lift(other)
            if self.tower.is_prefix_of(other.tower):
                return other.tower._lift(self), other
            raise TowerMismatch(
                f"elements of {self.tower.describe()} and {other.tower.describe()} cannot be combined"
            )
        try:
            return self, self.tower.coerce(other)
        except TypeError:
            return None

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other):
        p = self._pair_with(other)
        if p is None:
            return NotImplemented
        x, y = p
        T = x.tower
        if x.den == y.den:
            num = [pairs.add(a, b) for a, b in zip(x.num, y.num)]
            return T._raw(num, x.den)
        g = x.den.gcd(y.den)
        fa = y.den / g
        fb = x.den / g
        num = [(a[0] * fa + b[0] * fb, a[1] * fa + b[1] * fb) for a, b in zip(x.num, y.num)]
        return T._raw(num, x.den * fa)

    __radd__ = __add__

    def __neg__(self):
        return self.tower._raw([pairs.neg(a) for a in self.num], self.den, normalize=False)

    def __sub__(self, other):
        p = self._pair_with(other)
        if p is None:
            return NotImplemented
        x, y = p
        return x + (-y)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        p = self._pair_with(other)
        if p is None:
            return NotImplemented
        return self._product(*p)

    @staticmethod
    def _product(x, y, keep=None):
        # keep: optional bound on the flat index; components beyond it are
        # known to vanish and are not computed
        T = x.tower
        if T.size == 1:
            return T._raw([pairs.mul(x.num[0], y.num[0])], x.den * y.den)
        nt = T.nt
        buckets = {}
        for kx, a in enumerate(x.num):
            if pairs.is_zero(a):
                continue
            ix, jx = kx % nt, kx // nt
            for ky, b in enumerate(y.num):
                if pairs.is_zero(b):
                    continue
                iy, jy = ky % nt, ky // nt
                i, j = ix + iy, jx + jy
                w = (i // 3, j // 3)
                idx = (i % 3) + nt * (j % 3)
                if keep is not None and idx >= keep:
                    continue
                bucket = buckets.setdefault(w, {})
                prod = pairs.mul(a, b)
                if idx in bucket:
                    bucket[idx] = pairs.add(bucket[idx], prod)
                else:
                    bucket[idx] = prod
        z = (T._zero_poly, T._zero_poly)
        num = [z] * T.size
        for w, bucket in buckets.items():
            f = T._factors[w]
            for idx, val in bucket.items():
                num[idx] = pairs.add(num[idx], pairs.mul(val, f))
        return T._raw(num, x.den * y.den * T._etot)

    __rmul__ = __mul__

    def inverse(self) -> "TowerElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero tower element")
        T = self.tower
        if T.size == 1:
            p = self.num[0]
            c = pairs.conjugate(p)
            return T._raw([(c[0] * self.den, c[1] * self.den)], pairs.norm(p))
        x = self
        conj = T.one()
        if T.ns == 3:
            conj = x.galois(GaloisElement(0, 1)) * x.galois(GaloisElement(0, 2))
            x = TowerElement._product(x, conj, keep=T.nt)
        if T.nt == 3:
            c2 = x.galois(GaloisElement(1, 0)) * x.galois(GaloisElement(2, 0))
            conj = conj * c2
            x = TowerElement._product(x, c2, keep=1)
        base = T.base
        zb = base._raw([x.num[0]], x.den, normalize=False)
        return conj * zb.inverse()

    def __truediv__(self, other):
        p = self._pair_with(other)
        if p is None:
            return NotImplemented
        x, y = p
        return x * y.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = self.tower.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- comparison -----------------------------------------------------------
    def __eq__(self, other):
        try:
            p = self._pair_with(other)
        except TowerMismatch:
            return False
        if p is None:
            return NotImplemented
        x, y = p
        if x.den != y.den:
            return False
        return all(a[0] == b[0] and a[1] == b[1] for a, b in zip(x.num, y.num))

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = hash((self.tower.nlayers, self.to_expr()))
            self._hash = h
            return h

    def is_zero(self) -> bool:
        return all(pairs.is_zero(a) for a in self.num)

    def __bool__(self):
        return not self.is_zero()

    def is_one(self) -> bool:
        return self == 1

    # -- structure ------------------------------------------------------------
    def galois(self, sigma: GaloisElement) -> "TowerElement":
        if sigma.is_identity():
            return self
        T = self.tower
        nt = T.nt
        num = []
        for k, a in enumerate(self.num):
            i, j = k % nt, k // nt
            num.append(pairs.times_omega(a, sigma.i * i + sigma.j * j))
        return T._raw(num, self.den, normalize=False)

    def coefficient(self, i: int, j: int = 0) -> "TowerElement":
        """Coefficient of t^i s^j as an element of the base field."""
        T = self.tower
        return T.base._raw([self.num[i + T.nt * j]], self.den)

    def support(self):
        T = self.tower
        return [(k % T.nt, k // T.nt) for k, a in enumerate(self.num) if not pairs.is_zero(a)]

    def in_base(self) -> bool:
        return all(pairs.is_zero(a) for a in self.num[1:])

    def to_base(self) -> "TowerElement":
        if not self.in_base():
            from ..errors import NotInBaseField

            raise NotInBaseField(f"{self.to_expr()} is not in the base field")
        return self.tower.base._raw([self.num[0]], self.den, normalize=False)

    def in_prefix(self, n: int) -> bool:
        T = self.tower
        sub = T.prefix(n)
        for k, a in enumerate(self.num):
            i, j = k % T.nt, k // T.nt
            if pairs.is_zero(a):
                continue
            if i >= sub.nt or j >= sub.ns:
                return False
        return True

    def to_prefix(self, n: int) -> "TowerElement":
        T = self.tower
        sub = T.prefix(n)
        if sub is T:
            return self
        if not self.in_prefix(n):
            from ..errors import NotInBaseField

            raise NotInBaseField(f"{self.to_expr()} does not lie in {sub.describe()}")
        num = []
        for k in range(sub.size):
            i, j = k % sub.nt, k // sub.nt
            num.append(self.num[i + T.nt * j])
        return sub._raw(num, self.den, normalize=False)

    def is_fixed_by(self, sigma: GaloisElement) -> bool:
        return self.galois(sigma) == self

    def is_constant(self) -> bool:
        return self.in_base() and self.den.is_constant() and all(p.is_constant() for p in self.num[0])

    def as_cyclotomic(self) -> Cyclotomic:
        if not self.is_constant():
            raise ValueError(f"{self.to_expr()} is not a constant")
        p0, p1 = self.num[0]
        d = self.den.leading_coefficient()
        a = p0.leading_coefficient() if not p0.is_zero() else 0
        b = p1.leading_coefficient() if not p1.is_zero() else 0
        return Cyclotomic(a, b) / Cyclotomic(d)

    def base_pair(self):
        """(p0, p1, D) for an element of the base field."""
        if not self.in_base():
            from ..errors import NotInBaseField

            raise NotInBaseField(f"{self.to_expr()} is not in the base field")
        return self.num[0][0], self.num[0][1], self.den

    # -- output ---------------------------------------------------------------
    def to_expr(self) -> str:
        T = self.tower
        terms = []
        for k, (p0, p1) in enumerate(self.num):
            if p0.is_zero() and p1.is_zero():
                continue
            i, j = k % T.nt, k // T.nt
            if p1.is_zero():
                c = _factor(p0)
            elif p0.is_zero():
                c = {"1": "omega", "-1": "-omega"}.get(str(p1), f"omega*{_factor(p1)}")
            else:
                c = f"({p0} + omega*{_factor(p1)})"
            mono = []
            if i:
                mono.append(T.generator_names[0] + (f"^{i}" if i > 1 else ""))
            if j:
                mono.append(T.generator_names[1] + (f"^{j}" if j > 1 else ""))
            if mono and c in ("1", "-1"):
                terms.append(("-" if c == "-1" else "") + "*".join(mono))
            else:
                terms.append("*".join([c] + mono))
        if not terms:
            return "0"
        numer = terms[0] + "".join(f" - {t[1:]}" if t.startswith("-") else f" + {t}" for t in terms[1:])
        if self.den.is_one():
            return numer
        if len(terms) > 1:
            numer = f"({numer})"
        den = str(self.den)
        if not den.isalnum():
            den = f"({den})"
        return f"{numer}/{den}"

    def __str__(self):
        return self.to_expr()

    def __repr__(self):
        return f"TowerElement({self.to_expr()})"


def base_tower(variables) -> FieldTower:
    return FieldTower(variables)


def tower_make(variables, layers=(), order: str = "deglex") -> FieldTower:
    """Build a tower from variable names and (generator, radicand) layers.

    Radicands may be TowerElements of the base field or expression strings
    in the variables.  Each radicand is checked to be a non-cube in the field
    below it; the outcome is recorded in ``radicand_status``.
    """
    from .cubes import is_cube_in

    if order != "deglex":
        raise ValueError("only the deglex monomial order is supported")
    variables = tuple(variables)
    layers = list(layers)
    if len(layers) > 2:
        raise TooManyLayers(f"{len(layers)} layers requested, at most 2 supported")
    seen = set()
    for name in list(variables) + [n for n, _ in layers]:
        if name in seen or name == "omega":
            raise DuplicateGeneratorName(f"name '{name}' is used twice or is reserved")
        seen.add(name)
    base = FieldTower(variables)
    tower = base
    statuses = []
    for name, rad in layers:
        r = base.parse(rad) if isinstance(rad, str) else base.coerce(rad)
        if not r.in_base():
            raise ValueError("radicands must lie in the base field")
        r = r.to_base() if r.tower is not base else r
        if r.is_zero():
            raise ZeroRadicand(f"radicand of {name} is zero")
        res = is_cube_in(r, tower)
        if res.status == "cube":
            from ..errors import RadicandIsCube

            raise RadicandIsCube(f"radicand of {name} is a cube in the field below: {res.witness}")
        statuses.append("certified-non-cube" if res.status == "no" else "assumed-non-cube")
        tower = FieldTower(variables, tower.layers + ((name, r),), _base=base, _parent=tower)
    tower.radicand_status = statuses
    return tower
