"""Plane birational maps as triples of homogeneous polynomials over a tower."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import BasePoint, DegenerateComposition, DegreeParityMismatch, ParityViolation, TowerMismatch
from .fields import G, GP, FieldTower, GaloisElement, Specializer, parse_expression
from .matrices import primitive_scalar, Mat3
from .severi import S, S_OP, SBContext, _check_side, twist_power

COORDS = ("x", "y", "z")


# -- polynomials in x, y, z --------------------------------------------------


class Poly3:
    """Polynomial in x, y, z with tower coefficients; terms {(a, b, c): coeff}."""

    __slots__ = ("tower", "terms")

    def __init__(self, tower: FieldTower, terms=None):
        self.tower = tower
        self.terms = {m: c for m, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def gen(cls, tower, k):
        m = [0, 0, 0]
        m[k] = 1
        return cls(tower, {tuple(m): tower.one()})

    @classmethod
    def const(cls, tower, c):
        return cls(tower, {(0, 0, 0): tower.coerce(c)})

    def _coerce(self, other):
        if isinstance(other, Poly3):
            if other.tower is not self.tower:
                if other.tower.is_prefix_of(self.tower):
                    return Poly3(self.tower, {m: self.tower.coerce(c) for m, c in other.terms.items()})
                raise TowerMismatch("polynomials over unrelated towers")
            return other
        return Poly3.const(self.tower, other)

    def __add__(self, other):
        o = self._coerce(other)
        out = dict(self.terms)
        for m, c in o.terms.items():
            out[m] = out[m] + c if m in out else c
        return Poly3(self.tower, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly3(self.tower, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly3):
            c = self.tower.coerce(other)
            if c.is_zero():
                return Poly3(self.tower)
            return Poly3(self.tower, {m: c * v for m, v in self.terms.items()})
        o = self._coerce(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
                p = c1 * c2
                out[m] = out[m] + p if m in out else p
        return Poly3(self.tower, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Poly3):
            return exact_divide(self, other)
        return self * self.tower.coerce(other).inverse()

    def __pow__(self, n: int):
        result = Poly3.const(self.tower, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly3):
            other = Poly3.const(self.tower, other)
        o = self._coerce(other)
        if set(self.terms) != set(o.terms):
            return False
        return all(self.terms[m] == o.terms[m] for m in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def leading(self):
        m = max(self.terms)
        return m, self.terms[m]

    def galois(self, sigma: GaloisElement) -> "Poly3":
        return Poly3(self.tower, {m: c.galois(sigma) for m, c in self.terms.items()})

    def evaluate(self, point):
        T = self.tower
        pw = [[T.one()] for _ in range(3)]
        acc = T.zero()
        for m, c in self.terms.items():
            term = c
            for k in range(3):
                while len(pw[k]) <= m[k]:
                    pw[k].append(pw[k][-1] * point[k])
                if m[k]:
                    term = term * pw[k][m[k]]
            acc = acc + term
        return acc

    def substitute(self, images, cache=None) -> "Poly3":
        """self(images[0], images[1], images[2]) for Poly3 images."""
        T = self.tower
        pw = cache if cache is not None else [[Poly3.const(T, 1)] for _ in range(3)]
        acc = Poly3(T)
        for m, c in self.terms.items():
            term = None
            for k in range(3):
                while len(pw[k]) <= m[k]:
                    pw[k].append(pw[k][-1] * images[k])
                if m[k]:
                    term = pw[k][m[k]] if term is None else term * pw[k][m[k]]
            acc = acc + (Poly3.const(T, c) if term is None else term * c)
        return acc

    def to_expr(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, reverse=True):
            mono = [f"{v}^{e}" if e > 1 else v for v, e in zip(COORDS, m) if e]
            parts.append("*".join([f"({self.terms[m].to_expr()})"] + mono))
        return " + ".join(parts)

    def __repr__(self):
        return f"Poly3({self.to_expr()})"


def exact_divide(P: Poly3, D: Poly3) -> Poly3:
    """P / D when D divides P exactly (lex division); ArithmeticError otherwise."""
    if D.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    T = P.tower
    md, cd = D.leading()
    cdi = cd.inverse()
    R = Poly3(T, dict(P.terms))
    Q = {}
    while not R.is_zero():
        mr, cr = R.leading()
        e = (mr[0] - md[0], mr[1] - md[1], mr[2] - md[2])
        if min(e) < 0:
            raise ArithmeticError("polynomial division is not exact")
        c = cr * cdi
        Q[e] = c
        R = R - Poly3(T, {(e[0] + a, e[1] + b, e[2] + g): c * v for (a, b, g), v in D.terms.items()})
    return Poly3(T, Q)


# -- univariate helpers over a field ----------------------------------------


def _utrim(p):
    while p and p[-1].is_zero():
        p.pop()
    return p


def _usub(a, b, zero):
    n = max(len(a), len(b))
    return _utrim([(a[i] if i < len(a) else zero) - (b[i] if i < len(b) else zero) for i in range(n)])


def _umul(a, b, zero):
    if not a or not b:
        return []
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return _utrim(out)


def _udivmod(a, b, zero):
    a = list(a)
    q = [zero] * max(len(a) - len(b) + 1, 0)
    inv = b[-1].inverse()
    while len(a) >= len(b) and a:
        c = a[-1] * inv
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[i + k] = a[i + k] - c * y
        a.pop()
        _utrim(a)
    return _utrim(q), a


def _ugcd(a, b, zero):
    a, b = _utrim(list(a)), _utrim(list(b))
    while b:
        _, r = _udivmod(a, b, zero)
        a, b = b, r
    if a:
        inv = a[-1].inverse()
        a = [x * inv for x in a]
    return a


# -- gcd of homogeneous polynomials -----------------------------------------


def _monomial_content(polys):
    ms = [m for p in polys for m in p.terms]
    return tuple(min(m[k] for m in ms) for k in range(3))


def _shift(p: Poly3, m) -> Poly3:
    return Poly3(p.tower, {(a - m[0], b - m[1], c - m[2]): v for (a, b, c), v in p.terms.items()})


def _as_univariate(p: Poly3, main: int, other: int, value, spec):
    """Dehomogenize z = 1 (or the third coordinate), set ``other`` = value, specialize coefficients."""
    T = spec.target
    out = {}
    for m, c in p.terms.items():
        k = m[main]
        v = spec(c) * (value ** m[other])
        out[k] = out[k] + v if k in out else v
    deg = max(out) if out else -1
    return _utrim([out.get(i, T.zero()) for i in range(deg + 1)])


def _x_degree(p: Poly3, main: int) -> int:
    return max((m[main] for m in p.terms), default=-1)


def trivial_gcd_certificate(P: Poly3, Q: Poly3, rng: random.Random, rounds: int = 2) -> bool:
    """True when gcd(P, Q) is certified to have no factor involving x or y.

    Both polynomials are dehomogenized, one coordinate and the field
    parameters are specialized to integers, and the univariate gcd over the
    specialized tower is computed.  The leading coefficients in the main
    variable are kept nonzero, so a common factor of positive degree would
    survive specialization.
    """
    for main, other in ((0, 1), (1, 0)):
        dp, dq = _x_degree(P, main), _x_degree(Q, main)
        if dp == 0 or dq == 0:
            continue
        ok = False
        for _ in range(rounds * 4):
            try:
                spec = Specializer(P.tower, rng)
            except ArithmeticError:
                return False
            value = spec.target.coerce(rng.randint(-40, 40))
            try:
                up = _as_univariate(P, main, other, value, spec)
                uq = _as_univariate(Q, main, other, value, spec)
            except ZeroDivisionError:
                continue
            if len(up) - 1 != dp or len(uq) - 1 != dq:
                continue
            g = _ugcd(up, uq, spec.target.zero())
            if len(g) == 1:
                ok = True
                break
            return False
        if not ok:
            return False
    return True


def _bivariate(p: Poly3, zdrop=2):
    """Dehomogenize: dict x-degree -> univariate list in y."""
    T = p.tower
    out = {}
    for (a, b, c), v in p.terms.items():
        row = out.setdefault(a, [])
        while len(row) <= b:
            row.append(T.zero())
        row[b] = row[b] + v
    return {k: _utrim(r) for k, r in out.items() if _utrim(r)}


def _bv_content(A, zero):
    g = []
    for r in A.values():
        g = _ugcd(g, r, zero) if g else _ugcd(r, [], zero)
        if len(g) == 1:
            break
    return g


def _bv_divcontent(A, c, zero):
    return {k: _udivmod(r, c, zero)[0] for k, r in A.items()}


def _bv_prem(A, B, zero):
    A = dict(A)
    db = max(B)
    lcb = B[db]
    while A and max(A) >= db:
        da = max(A)
        lca = A[da]
        newA = {}
        for k, r in A.items():
            newA[k] = _umul(r, lcb, zero)
        for k, r in B.items():
            kk = k + da - db
            newA[kk] = _usub(newA.get(kk, []), _umul(r, lca, zero), zero)
        A = {k: r for k, r in newA.items() if r}
        A.pop(da, None)
    return A


def _bv_gcd(A, B, zero):
    """gcd in K[y][x] by the primitive pseudo-remainder sequence."""
    ca, cb = _bv_content(A, zero), _bv_content(B, zero)
    c = _ugcd(ca, cb, zero)
    A, B = _bv_divcontent(A, ca, zero), _bv_divcontent(B, cb, zero)
    if max(A) < max(B):
        A, B = B, A
    while True:
        if not B:
            g = A
            break
        if max(B) == 0:
            g = {0: [zero + 1]}
            break
        R = _bv_prem(A, B, zero)
        A, B = B, (_bv_divcontent(R, _bv_content(R, zero), zero) if R else {})
    g = _bv_divcontent(g, _bv_content(g, zero), zero)
    out = {}
    for k, r in g.items():
        r = _umul(r, c, zero)
        if r:
            out[k] = r
    return out


def _homogenize(Bv, tower) -> Poly3:
    deg = max(a + len(r) - 1 for a, r in Bv.items())
    terms = {}
    for a, r in Bv.items():
        for b, v in enumerate(r):
            if not v.is_zero():
                terms[(a, b, deg - a - b)] = v
    return Poly3(tower, terms)


def hom_gcd(P: Poly3, Q: Poly3) -> Poly3:
    """Exact gcd of two homogeneous polynomials, up to a constant."""
    T = P.tower
    zero = T.zero()
    if P.is_zero():
        return Q
    if Q.is_zero():
        return P
    zp = min(m[2] for m in P.terms)
    zq = min(m[2] for m in Q.terms)
    P1, Q1 = _shift(P, (0, 0, zp)), _shift(Q, (0, 0, zq))
    A, B = _bivariate(P1), _bivariate(Q1)
    g = _bv_gcd(A, B, zero)
    H = _homogenize(g, T)
    z = min(zp, zq)
    if z:
        H = Poly3(T, {(a, b, c + z): v for (a, b, c), v in H.terms.items()})
    # monic in lex order
    _, lc = H.leading()
    return H * lc.inverse()


# -- maps ---------------------------------------------------------------------


class HomTriple:
    """A rational map of the plane given by three homogeneous polynomials."""

    __slots__ = ("tower", "comps")

    def __init__(self, tower: FieldTower, comps, reduce: bool = False, seed: int = 0):
        comps = list(comps)
        if len(comps) != 3:
            raise ValueError("a HomTriple has three components")
        self.tower = tower
        self.comps = tuple(c if isinstance(c, Poly3) else Poly3.const(tower, c) for c in comps)
        if all(c.is_zero() for c in self.comps):
            raise DegenerateComposition("all components vanish")
        degs = {c.degree() for c in self.comps if not c.is_zero()}
        if len(degs) != 1 or not all(c.is_homogeneous() for c in self.comps):
            raise ValueError("components must be homogeneous of equal degree")
        if reduce:
            self.comps = _reduce(self.comps, seed)

    @classmethod
    def linear(cls, A: Mat3) -> "HomTriple":
        T = A.tower
        gens = [Poly3.gen(T, k) for k in range(3)]
        comps = []
        for i in range(3):
            p = Poly3(T)
            for j in range(3):
                if not A[i, j].is_zero():
                    p = p + gens[j] * A[i, j]
            comps.append(p)
        return cls(T, comps)

    @classmethod
    def sigma(cls, tower: FieldTower) -> "HomTriple":
        one = tower.one()
        return cls(tower, [Poly3(tower, {(0, 1, 1): one}), Poly3(tower, {(1, 0, 1): one}), Poly3(tower, {(1, 1, 0): one})])

    @classmethod
    def identity(cls, tower: FieldTower) -> "HomTriple":
        return cls.linear(Mat3.identity(tower))

    @classmethod
    def from_strings(cls, tower: FieldTower, exprs, reduce: bool = True) -> "HomTriple":
        gens = {name: Poly3.gen(tower, k) for k, name in enumerate(COORDS)}
        clash = set(COORDS) & tower.names()
        if clash:
            raise ValueError(f"tower names {sorted(clash)} clash with the plane coordinates")

        def resolve(name):
            if name in gens:
                return gens[name]
            return Poly3.const(tower, tower.resolve(name))

        comps = [parse_expression(e, resolve, Poly3.const(tower, 1)) for e in exprs]
        return cls(tower, comps, reduce=reduce)

    def degree(self) -> int:
        return next(c.degree() for c in self.comps if not c.is_zero())

    def lift(self, tower: FieldTower) -> "HomTriple":
        if tower is self.tower:
            return self
        if not self.tower.is_prefix_of(tower):
            raise TowerMismatch("map is not over a sub-tower")
        return HomTriple(tower, [Poly3(tower, {m: tower.coerce(c) for m, c in p.terms.items()}) for p in self.comps])

    def _align(self, other: "HomTriple"):
        if other.tower is self.tower:
            return self, other
        if other.tower.is_prefix_of(self.tower):
            return self, other.lift(self.tower)
        if self.tower.is_prefix_of(other.tower):
            return self.lift(other.tower), other
        raise TowerMismatch("maps over unrelated towers")

    def compose(self, inner: "HomTriple", reduce: bool = True, seed: int = 0) -> "HomTriple":
        """self o inner."""
        return map_compose(self, inner, reduce=reduce, seed=seed)

    def scale(self, c) -> "HomTriple":
        return HomTriple(self.tower, [p * c for p in self.comps])

    def galois(self, sigma: GaloisElement) -> "HomTriple":
        return HomTriple(self.tower, [p.galois(sigma) for p in self.comps])

    def apply_matrix(self, A: Mat3) -> "HomTriple":
        """A o self."""
        f, _ = self._align(HomTriple.linear(A))
        A = A.lift(f.tower) if A.tower is not f.tower else A
        comps = []
        for i in range(3):
            p = Poly3(f.tower)
            for j in range(3):
                if not A[i, j].is_zero():
                    p = p + f.comps[j] * A[i, j]
            comps.append(p)
        return HomTriple(f.tower, comps)

    def precompose_matrix(self, A: Mat3) -> "HomTriple":
        """self o A."""
        f, lin = self._align(HomTriple.linear(A))
        return HomTriple(f.tower, [p.substitute(lin.comps) for p in f.comps])

    def evaluate(self, point):
        return [c.evaluate(point) for c in self.comps]

    def __eq__(self, other):
        if not isinstance(other, HomTriple):
            return NotImplemented
        a, b = self._align(other)
        return all(p == q for p, q in zip(a.comps, b.comps))

    def to_strings(self):
        return [c.to_expr() for c in self.comps]

    def __repr__(self):
        return "HomTriple(" + ", ".join(self.to_strings()) + ")"


def _reduce(comps, seed: int = 0):
    if all(c.is_zero() for c in comps):
        raise DegenerateComposition("all components vanish identically")
    nz = [c for c in comps if not c.is_zero()]
    m = _monomial_content(nz)
    if any(m):
        comps = [_shift(c, m) if not c.is_zero() else c for c in comps]
        nz = [c for c in comps if not c.is_zero()]
    if nz[0].degree() == 0:
        return tuple(comps)
    rng = random.Random(seed)
    if len(nz) == 1:
        g = nz[0]
    else:
        P = nz[0]
        Q = nz[1]
        if len(nz) == 3:
            Q = Q + nz[2] * rng.randint(1, 97)
        if trivial_gcd_certificate(P, Q, rng):
            return tuple(comps)
        g = nz[0]
        for c in nz[1:]:
            g = hom_gcd(g, c)
            if g.degree() == 0:
                return tuple(comps)
    if g.degree() <= 0:
        return tuple(comps)
    return tuple(exact_divide(c, g) if not c.is_zero() else c for c in comps)


def map_compose(f: HomTriple, h: HomTriple, reduce: bool = True, seed: int = 0) -> HomTriple:
    """f o h with common factors removed."""
    f, h = f._align(h)
    T = f.tower
    cache = [[Poly3.const(T, 1)] for _ in range(3)]
    comps = [p.substitute(h.comps, cache) for p in f.comps]
    if all(c.is_zero() for c in comps):
        raise DegenerateComposition("the inner map lands in the base locus of the outer map")
    return HomTriple(T, comps, reduce=reduce, seed=seed)


def _expected_residue(sides):
    src, dst = sides
    _check_side(src)
    _check_side(dst)
    return 1 if src == dst else 2


def map_degree(f: HomTriple, sides=None) -> int:
    d = f.degree()
    if sides is not None and d % 3 != _expected_residue(sides):
        raise ParityViolation(f"degree {d} between {sides[0]} and {sides[1]} has the wrong residue mod 3")
    return d


# -- projective equality ------------------------------------------------------


class Composite:
    """A word of maps and matrices, applied right to left, evaluated pointwise."""

    def __init__(self, factors):
        self.factors = list(factors)

    def evaluate(self, point):
        p = list(point)
        for f in reversed(self.factors):
            if isinstance(f, Mat3):
                p = [sum((f[i, j] * p[j] for j in range(3)), p[0].tower.zero()) for i in range(3)]
            else:
                p = f.evaluate(p)
            if all(x.is_zero() for x in p):
                raise BasePoint("intermediate image is the zero vector")
            c = primitive_scalar(p)
            p = [x * c for x in p]
        return p

    @property
    def tower(self):
        towers = [f.tower for f in self.factors]
        return max(towers, key=lambda t: t.nlayers)


def _as_evaluable(f):
    if isinstance(f, Mat3):
        return Composite([f])
    return f


def _proportional(p, q) -> bool:
    return all((p[i] * q[j] - p[j] * q[i]).is_zero() for i in range(3) for j in range(i + 1, 3))


def sample_points(tower: FieldTower, n: int, seed: int):
    """Seeded points with integer coordinates; maps over the tower are dense on them."""
    rng = random.Random(seed)
    while True:
        yield [tower.coerce(rng.randint(-20, 20)) for _ in range(3)]


@dataclass
class SampleCertificate:
    agree: bool
    seed: int
    points: list = field(default_factory=list)
    skipped: int = 0
    mismatch: list | None = None
    specialization: dict | None = None


def _specialize(f, spec):
    T = spec.target
    if isinstance(f, Mat3):
        return Mat3(T, [[spec(f[i, j]) for j in range(3)] for i in range(3)])
    if isinstance(f, Composite):
        return Composite([_specialize(g, spec) for g in f.factors])
    comps = [Poly3(T, {m: spec(c) for m, c in p.terms.items()}) for p in f.comps]
    return HomTriple(T, comps)


def _specialized_pair(f, h, tower, rng, tries=20):
    for _ in range(tries):
        spec = Specializer(tower, rng)
        try:
            return spec, _specialize(f, spec), _specialize(h, spec)
        except ZeroDivisionError:
            continue
    raise ArithmeticError("no specialization point keeps the maps defined")


def proj_equal_sampled(f, h, n: int = 7, seed: int = 0, max_skips: int = 200,
                       specialize: bool = False) -> SampleCertificate:
    """Compare f and h at n seeded integer points.

    With ``specialize`` the base-field variables are first replaced by seeded
    integers as well, so the comparison runs over number fields.
    """
    f, h = _as_evaluable(f), _as_evaluable(h)
    tower = max((f.tower, h.tower), key=lambda t: t.nlayers)
    cert = SampleCertificate(True, seed)
    if specialize and tower.variables:
        spec, f, h = _specialized_pair(f, h, tower, random.Random(seed))
        cert.specialization = dict(spec.values)
        tower = spec.target
    gen = sample_points(tower, n, seed)
    while len(cert.points) < n:
        pt = next(gen)
        try:
            a = f.evaluate(pt)
            b = h.evaluate(pt)
        except (BasePoint, ZeroDivisionError):
            cert.skipped += 1
            if cert.skipped > max_skips:
                raise
            continue
        if all(x.is_zero() for x in a) or all(x.is_zero() for x in b):
            cert.skipped += 1
            continue
        coords = [x.to_expr() for x in pt]
        cert.points.append(coords)
        if not _proportional(a, b):
            cert.agree = False
            cert.mismatch = coords
            return cert
    return cert


def proj_equal(f, h, mode="symbolic", n: int = 7, seed: int = 0) -> bool:
    """Projective equality, either exactly or at n seeded sample points."""
    if mode == "sampled":
        return proj_equal_sampled(f, h, n, seed).agree
    if isinstance(f, Mat3):
        f = HomTriple.linear(f)
    if isinstance(h, Mat3):
        h = HomTriple.linear(h)
    f, h = f._align(h)
    if f.degree() != h.degree():
        f = HomTriple(f.tower, f.comps, reduce=True)
        h = HomTriple(h.tower, h.comps, reduce=True)
        if f.degree() != h.degree():
            return False
    lam = None
    for p, q in zip(f.comps, h.comps):
        if set(p.terms) != set(q.terms):
            return False
        for m, c in q.terms.items():
            if lam is None:
                lam = p.terms[m] / c
            elif p.terms[m] != lam * c:
                return False
    return True


# -- representant condition for maps -------------------------------------------


def cocycle_exponent(degree: int, sides) -> int:
    """Exponent e with xi^(i*e) F^(g^i) = (A^Y_g^i)^-1 o F o A^X_g^i.

    With A_g^3 = xi I on S and xi^-1 I on S_op, compatibility of the identity
    for i = 3 forces these values; divisibility by 3 is the degree parity.
    """
    src, dst = sides
    if src == S and dst == S_OP:
        num = degree + 1
    elif src == S and dst == S:
        num = degree - 1
    elif src == S_OP and dst == S:
        num = -(degree + 1)
    else:
        num = -(degree - 1)
    if num % 3:
        raise DegreeParityMismatch(f"degree {degree} is impossible between {src} and {dst}")
    return num // 3


def is_affine_rep_map(ctx: SBContext, f: HomTriple, sides) -> bool:
    src, dst = sides
    f = f.lift(ctx.tower) if f.tower is not ctx.tower else f
    e = cocycle_exponent(f.degree(), sides)
    for i in (1, 2):
        gi = G ** i
        lhs = f.galois(gi).scale(ctx.xi ** (i * e))
        Ax = twist_power(ctx, src, i)
        Ay_inv = _twist_inv(ctx, dst, i)
        rhs = f.precompose_matrix(Ax).apply_matrix(Ay_inv)
        if not lhs == rhs:
            return False
    if ctx.tower.ns == 3:
        if not f.galois(GP) == f:
            return False
    return True


def _twist_inv(ctx: SBContext, side: str, i: int) -> Mat3:
    Ag = twist_power(ctx, side, 3 - i)
    return Ag.scale(ctx.xi_side(side).inverse())


def apply_to_point(f, point):
    if isinstance(f, Mat3):
        f = HomTriple.linear(f)
    img = f.evaluate(point)
    if all(x.is_zero() for x in img):
        raise BasePoint("point lies in the base locus")
    return img
