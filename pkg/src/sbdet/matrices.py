"""3x3 matrices over tower elements."""

from __future__ import annotations

from .errors import DegenerateColumn, Singular, TowerMismatch
from .fields import FieldTower, GaloisElement, TowerElement


class Mat3:
    """Immutable 3x3 matrix; ``rows`` are tuples of TowerElements of one tower."""

    __slots__ = ("tower", "e")

    def __init__(self, tower: FieldTower, rows):
        self.tower = tower
        flat = []
        rows = list(rows)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("a Mat3 needs three rows of three entries")
        for r in rows:
            for x in r:
                flat.append(tower.coerce(x))
        self.e = tuple(flat)

    @classmethod
    def _flat(cls, tower, flat):
        m = cls.__new__(cls)
        m.tower = tower
        m.e = tuple(flat)
        return m

    # -- constructors ---------------------------------------------------------
    @classmethod
    def identity(cls, tower):
        one, zero = tower.one(), tower.zero()
        return cls._flat(tower, [one, zero, zero, zero, one, zero, zero, zero, one])

    @classmethod
    def diag(cls, tower, a, b, c):
        zero = tower.zero()
        a, b, c = (tower.coerce(x) for x in (a, b, c))
        return cls._flat(tower, [a, zero, zero, zero, b, zero, zero, zero, c])

    @classmethod
    def scalar(cls, tower, c):
        return cls.diag(tower, c, c, c)

    @classmethod
    def from_strings(cls, tower, rows):
        return cls(tower, [[tower.parse(s) for s in r] for r in rows])

    @classmethod
    def cycle(cls, tower):
        """The permutation matrix (123): column i is the basis vector e_{i+1}."""
        one, zero = tower.one(), tower.zero()
        return cls(tower, [[zero, zero, one], [one, zero, zero], [zero, one, zero]])

    # -- access ---------------------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self.e[3 * i + j]

    def rows(self):
        return [list(self.e[3 * i:3 * i + 3]) for i in range(3)]

    def column(self, j):
        return [self.e[j], self.e[3 + j], self.e[6 + j]]

    def diagonal(self):
        return [self.e[0], self.e[4], self.e[8]]

    def lift(self, tower: FieldTower) -> "Mat3":
        if tower is self.tower:
            return self
        return Mat3._flat(tower, [tower.coerce(x) for x in self.e])

    def _align(self, other: "Mat3"):
        if other.tower is self.tower:
            return self, other
        if other.tower.is_prefix_of(self.tower):
            return self, other.lift(self.tower)
        if self.tower.is_prefix_of(other.tower):
            return self.lift(other.tower), other
        raise TowerMismatch("matrices over unrelated towers")

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other: "Mat3"):
        a, b = self._align(other)
        return Mat3._flat(a.tower, [x + y for x, y in zip(a.e, b.e)])

    def __sub__(self, other: "Mat3"):
        a, b = self._align(other)
        return Mat3._flat(a.tower, [x - y for x, y in zip(a.e, b.e)])

    def __neg__(self):
        return Mat3._flat(self.tower, [-x for x in self.e])

    def __mul__(self, other):
        if isinstance(other, Mat3):
            a, b = self._align(other)
            out = []
            for i in range(3):
                for j in range(3):
                    s = None
                    for k in range(3):
                        x, y = a.e[3 * i + k], b.e[3 * k + j]
                        if x.is_zero() or y.is_zero():
                            continue
                        s = x * y if s is None else s + x * y
                    out.append(s if s is not None else a.tower.zero())
            return Mat3._flat(a.tower, out)
        return self.scale(other)

    def apply(self, v):
        """Image of a column vector."""
        T = self.tower
        v = [T.coerce(x) for x in v]
        return [sum((self.e[3 * i + j] * v[j] for j in range(3)), T.zero()) for i in range(3)]

    def scale(self, c) -> "Mat3":
        if isinstance(c, TowerElement) and c.tower is not self.tower:
            if self.tower.is_prefix_of(c.tower):
                return self.lift(c.tower).scale(c)
        c = self.tower.coerce(c)
        return Mat3._flat(self.tower, [c * x for x in self.e])

    def __rmul__(self, c):
        return self.scale(c)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = Mat3.identity(self.tower)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def transpose(self) -> "Mat3":
        return Mat3._flat(self.tower, [self.e[3 * j + i] for i in range(3) for j in range(3)])

    def det(self) -> TowerElement:
        a, b, c, d, e, f, g, h, i = self.e
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)

    def adjugate(self) -> "Mat3":
        a, b, c, d, e, f, g, h, i = self.e
        return Mat3._flat(
            self.tower,
            [
                e * i - f * h, c * h - b * i, b * f - c * e,
                f * g - d * i, a * i - c * g, c * d - a * f,
                d * h - e * g, b * g - a * h, a * e - b * d,
            ],
        )

    def inverse(self) -> "Mat3":
        return matrix_invert(self)[0]

    def galois(self, sigma: GaloisElement) -> "Mat3":
        if sigma.is_identity():
            return self
        return Mat3._flat(self.tower, [x.galois(sigma) for x in self.e])

    # -- predicates -----------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Mat3):
            return NotImplemented
        try:
            a, b = self._align(other)
        except TowerMismatch:
            return False
        return all(x == y for x, y in zip(a.e, b.e))

    def __hash__(self):
        return hash(tuple(hash(x) for x in self.e))

    def is_diagonal(self) -> bool:
        return all(self.e[k].is_zero() for k in (1, 2, 3, 5, 6, 7))

    def is_scalar(self) -> bool:
        return self.is_diagonal() and self.e[0] == self.e[4] == self.e[8]

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.e)

    def proportional_to(self, other: "Mat3"):
        """The scalar c with self = c*other, or None."""
        a, b = self._align(other)
        c = None
        for x, y in zip(a.e, b.e):
            if y.is_zero():
                if not x.is_zero():
                    return None
                continue
            if c is None:
                c = x / y
                if c.is_zero():
                    return None
            elif x != c * y:
                return None
        return c

    # -- output ---------------------------------------------------------------
    def to_strings(self):
        return [[x.to_expr() for x in r] for r in self.rows()]

    def __repr__(self):
        return "Mat3(" + repr(self.to_strings()) + ")"


def matrix_invert(A: Mat3, check: bool = True):
    """(A^{-1}, det A) via the adjugate; Singular carries the adjugate."""
    adj = A.adjugate()
    d = A.det()
    if d.is_zero():
        raise Singular("matrix is singular", adjugate=adj)
    dinv = d.inverse()
    inv = Mat3._flat(A.tower, [x * dinv for x in adj.e])
    if check:
        # A * adj = det * I, checked on the diagonal and off-diagonal entries
        prod = A * adj
        if not prod == Mat3.scalar(A.tower, d):
            raise ArithmeticError("adjugate check failed")
    return inv, d


def entry_product(A: Mat3) -> TowerElement:
    p = A.tower.one()
    for x in A.e:
        if x.is_zero():
            return A.tower.zero()
        p = p * x
    return p


def sigma_columns(A: Mat3, stage=None) -> Mat3:
    """Apply (x, y, z) -> (yz, xz, xy) to every column of A."""
    cols = []
    for j in range(3):
        x, y, z = A.column(j)
        if sum(1 for v in (x, y, z) if v.is_zero()) >= 2:
            raise DegenerateColumn(f"column {j} is a coordinate point", column=j, stage=stage)
        cols.append((y * z, x * z, x * y))
    return Mat3._flat(A.tower, [cols[j][i] for i in range(3) for j in range(3)])


def galois_matrix(sigma: GaloisElement, A: Mat3, tower: FieldTower | None = None) -> Mat3:
    if tower is not None and not (A.tower is tower or A.tower.is_prefix_of(tower)):
        raise TowerMismatch("matrix does not belong to the tower of the Galois element")
    return A.galois(sigma)


def diag_power(tower: FieldTower, x, sign: int = 1) -> Mat3:
    """D_x = diag(1, x, x^2), or D_{x^-1} for sign = -1."""
    x = tower.coerce(x)
    if sign < 0:
        x = x.inverse()
    return Mat3.diag(tower, 1, x, x * x)


def diag_conjugates(tower: FieldTower, d, sigma: GaloisElement) -> Mat3:
    """diag(d, sigma(d), sigma^2(d))."""
    d = tower.coerce(d)
    return Mat3.diag(tower, d, d.galois(sigma), d.galois(sigma * sigma))



def primitive_scalar(entries):
    """c in the base field making c*x polynomial with content 1 for all x in entries."""
    entries = [x for x in entries if not x.is_zero()]
    if not entries:
        raise ValueError("all entries vanish")
    T = entries[0].tower
    lcm = None
    for x in entries:
        lcm = x.den if lcm is None else lcm * (x.den / lcm.gcd(x.den))
    g = None
    for x in entries:
        f = lcm / x.den
        for a in x.num:
            for p in a:
                if not p.is_zero():
                    g = p * f if g is None else g.gcd(p * f)
    zero = T.base.ctx.from_dict({})
    return T.coerce(T.base.from_poly(lcm, zero, g))


def clear_denominators(A: Mat3):
    """(c, c*A) with c in the base field and c*A of polynomial entries with content 1."""
    c = primitive_scalar(A.e)
    return c, A.scale(c)
