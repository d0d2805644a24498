"""Severi-Brauer presentations: twisting matrices, representants, det classes."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    NotMonomialForm,
    NotRepresentant,
    ScalarInput,
    Singular,
    SingularResult,
    TowerMismatch,
    XiIsCube,
    XiZero,
    ZeroVector,
)
from .fields import G, GP, FieldTower, RootResult, TowerElement, is_cube, is_cube_in, is_square
from .linalg import nullspace, rank
from .matrices import Mat3, diag_conjugates

S = "S"
S_OP = "S_op"
SIDES = (S, S_OP)


def opposite(side: str) -> str:
    return S_OP if side == S else S


def _check_side(side):
    if side not in SIDES:
        raise ValueError(f"unknown side {side!r}")


@dataclass
class SBContext:
    tower: FieldTower
    xi: TowerElement
    A_g: Mat3
    A_g_op: Mat3
    nontriviality: str  # "certified-non-norm" or "assumed"
    certificate: str = ""
    notes: list = field(default_factory=list)

    def twist(self, side: str) -> Mat3:
        _check_side(side)
        return self.A_g if side == S else self.A_g_op

    def xi_side(self, side: str) -> TowerElement:
        """The twisting parameter of a side: xi on S, xi^-1 on S_op."""
        _check_side(side)
        return self.xi if side == S else self.xi.inverse()

    def describe(self) -> dict:
        return {
            "tower": self.tower.describe(),
            "xi": self.xi.to_expr(),
            "nontriviality": self.nontriviality,
            "certificate": self.certificate,
        }


def twisting_matrix(tower: FieldTower, xi) -> Mat3:
    xi = tower.coerce(xi)
    z, one = tower.zero(), tower.one()
    return Mat3(tower, [[z, z, xi], [one, z, z], [z, one, z]])


def _non_norm_certificate(tower: FieldTower, xi: TowerElement):
    """Look for a place var = 0 where L/k is inert and v(xi) is prime to 3.

    Norms from an inert cubic extension have valuation divisible by 3 there,
    so such a place shows that xi is not a norm.
    """
    base = tower.base
    d = tower.radicand(0)
    dp0, dp1, dD = d.base_pair()
    xp0, xp1, xD = xi.base_pair()
    for v, name in enumerate(base.variables):

        def low(p):
            return min(m[v] for m in p.monoms()) if not p.is_zero() else None

        dl = [x for x in (low(dp0), low(dp1)) if x is not None]
        if min(dl) - low(dD) != 0:
            continue
        xl = [x for x in (low(xp0), low(xp1)) if x is not None]
        val = min(xl) - low(xD)
        if val % 3 == 0:
            continue
        sub = {name: 0}
        r0, r1, rD = dp0.subs(sub), dp1.subs(sub), dD.subs(sub)
        if rD.is_zero() or (r0.is_zero() and r1.is_zero()):
            continue
        residue = base.from_poly(r0, r1, rD)
        if is_cube(residue).status == "no":
            return f"valuation of xi at {name}=0 is {val}, and the radicand has a non-cube unit residue there"
    return None


def context_make(tower: FieldTower, xi) -> SBContext:
    """Presentation of the surface twisted by xi over the first layer of ``tower``."""
    if tower.nlayers < 1:
        raise ValueError("a Severi-Brauer context needs at least one tower layer")
    if isinstance(xi, str):
        xi = tower.parse(xi)
    xi = tower.coerce(xi)
    if xi.is_zero():
        raise XiZero("xi must be nonzero")
    if not xi.in_base():
        raise ValueError("xi must lie in the base field")
    xib = xi.to_base()
    res = is_cube(xib)
    if res.status == "cube":
        raise XiIsCube(f"xi is a cube ({res.witness.to_expr()}^3); the surface would be trivial")
    cert = _non_norm_certificate(tower, xib)
    status = "certified-non-norm" if cert else "assumed"
    A_g = twisting_matrix(tower, xi)
    A_g_op = twisting_matrix(tower, xi.inverse())
    ctx = SBContext(tower, xi, A_g, A_g_op, status, cert or "no valuation certificate found; non-norm assumed")
    assert A_g ** 3 == Mat3.scalar(tower, xi)
    return ctx


def twist_power(ctx: SBContext, side: str, i: int) -> Mat3:
    i %= 3
    Ag = ctx.twist(side)
    if i == 0:
        return Mat3.identity(ctx.tower)
    return Ag if i == 1 else Ag * Ag


def is_affine_representant(ctx: SBContext, A: Mat3, side: str = S) -> bool:
    """A^sigma = A_sigma^{-1} A A_sigma for the Galois group of the tower.

    The twist is a homomorphism on the group, so checking the generators g
    and g' is enough; g' acts with trivial twist.
    """
    _check_side(side)
    A = _lift(ctx, A)
    Ag = ctx.twist(side)
    if not Ag * A.galois(G) == A * Ag:
        return False
    if ctx.tower.ns == 3 and not A.galois(GP) == A:
        return False
    return True


def _lift(ctx, A: Mat3) -> Mat3:
    if A.tower is ctx.tower:
        return A
    if A.tower.is_prefix_of(ctx.tower):
        return A.lift(ctx.tower)
    raise TowerMismatch("matrix is not over the context tower")


def aut_from_vector(ctx: SBContext, a, b, c, side: str = S) -> Mat3:
    """Representant on ``side`` with first column (a, b, c), entries in the first layer."""
    _check_side(side)
    T = ctx.tower
    a, b, c = (T.coerce(x) for x in (a, b, c))
    if a.is_zero() and b.is_zero() and c.is_zero():
        raise ZeroVector("the vector (a, b, c) is zero")
    xi = ctx.xi_side(side)
    g1, g2 = G, G * G
    A = Mat3(
        T,
        [
            [a, xi * c.galois(g1), xi * b.galois(g2)],
            [b, a.galois(g1), xi * c.galois(g2)],
            [c, b.galois(g1), a.galois(g2)],
        ],
    )
    if A.det().is_zero():
        raise SingularResult("columns of the constructed matrix are dependent")
    return A


@dataclass(frozen=True)
class DetClass:
    """Class of a base-field element in k*/(k*)^3.

    ``rep=None`` is the trivial class when no field is at hand (a word made
    only of links, say); it combines with any other class.
    """

    rep: TowerElement | None
    state: str = "raw"

    def __mul__(self, other: "DetClass") -> "DetClass":
        if self.rep is None:
            return other
        if other.rep is None:
            return self
        return DetClass(self.rep * other.rep)

    def __truediv__(self, other: "DetClass") -> "DetClass":
        return self * other.inverse()

    def inverse(self) -> "DetClass":
        return self if self.rep is None else DetClass(self.rep.inverse())

    def __pow__(self, n: int) -> "DetClass":
        return self if self.rep is None else DetClass(self.rep ** n)

    def cube_status(self):
        if self.rep is None:
            return RootResult("cube", None, "trivial")
        return is_cube(self.rep)

    def is_trivial(self) -> bool:
        return self.cube_status().status == "cube"

    def witness(self):
        return self.cube_status().witness

    def same_class(self, other: "DetClass") -> bool:
        return (self / other).is_trivial()

    def to_json(self) -> dict:
        st = self.cube_status()
        return {
            "representative": self.rep.to_expr() if self.rep is not None else "1",
            "cube": st.status,
            "witness": st.witness.to_expr() if st.witness is not None else ("1" if self.rep is None else None),
            "certificate": st.certificate,
        }


TRIVIAL = DetClass(None)


def trivial_class(tower: FieldTower) -> DetClass:
    return DetClass(tower.base.one())


def class_of(x: TowerElement) -> DetClass:
    if not x.in_base():
        raise ValueError("determinant classes live in the base field")
    return DetClass(x.to_base() if x.tower is not x.tower.base else x)


def det_class(ctx: SBContext, A: Mat3, side: str = S, check: bool = True) -> DetClass:
    """det(A) on side S and det(A)^-1 on side S_op, modulo cubes."""
    A = _lift(ctx, A)
    if check and not is_affine_representant(ctx, A, side):
        raise NotRepresentant(f"matrix is not an affine representant on side {side}")
    d = A.det()
    if d.is_zero():
        raise Singular("representant is singular", adjugate=A.adjugate())
    if not d.in_base():
        raise NotRepresentant("determinant is not Galois-fixed")
    c = class_of(d)
    return c if side == S else c.inverse()


# -- fixed points -----------------------------------------------------------


@dataclass
class ThreePoint:
    status: str  # "points" or "unresolved"
    points: list = field(default_factory=list)
    eigenvalues: list = field(default_factory=list)
    orbit_verified: bool = False
    reason: str = ""


def _cross(u, v):
    return [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]


def _proj_eq(p, q) -> bool:
    return all((p[i] * q[j] - p[j] * q[i]).is_zero() for i in range(3) for j in range(i + 1, 3))


def _cubic_roots(tower: FieldTower, c2, c1, c0):
    """Roots in ``tower`` of X^3 + c2 X^2 + c1 X + c0 (coefficients in k)."""
    sh = c2 / 3
    p = c1 - c2 * c2 / 3
    q = 2 * c2 ** 3 / 27 - c2 * c1 / 3 + c0
    if p.is_zero() and q.is_zero():
        return None, "triple eigenvalue"
    if p.is_zero():
        kappa = -q
    else:
        delta = q * q / 4 + p ** 3 / 27
        if delta.is_zero():
            return None, "repeated eigenvalue"
        sq = is_square(delta.to_base())
        if sq.witness is None:
            return None, "requires extension (non-abelian splitting field)"
        r = tower.coerce(sq.witness)
        kappa = -q / 2 + r
        if kappa.is_zero():
            kappa = -q / 2 - r
    cr = is_cube_in(kappa.to_base(), tower)
    if cr.witness is None:
        return None, "requires extension (eigenvalues outside the tower)"
    C = cr.witness
    w = tower.omega()
    roots = []
    for k in range(3):
        Ck = C * w ** k
        mu = Ck - p / (3 * Ck)
        roots.append(mu - sh)
    return roots, ""


def fixed_three_point(ctx: SBContext, A: Mat3, side: str = S) -> ThreePoint:
    A = _lift(ctx, A)
    T = ctx.tower
    if A.is_scalar():
        raise ScalarInput("scalar matrices fix every point")
    tr = A[0, 0] + A[1, 1] + A[2, 2]
    m2 = (
        A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
        + A[0, 0] * A[2, 2] - A[0, 2] * A[2, 0]
        + A[1, 1] * A[2, 2] - A[1, 2] * A[2, 1]
    )
    det = A.det()
    if not (tr.in_base() and m2.in_base() and det.in_base()):
        return ThreePoint("unresolved", reason="characteristic polynomial not over the base field")
    roots, why = _cubic_roots(T, -tr, m2, -det)
    if roots is None:
        return ThreePoint("unresolved", reason=why)
    if roots[0] == roots[1] or roots[0] == roots[2] or roots[1] == roots[2]:
        return ThreePoint("unresolved", eigenvalues=roots, reason="repeated eigenvalue")
    points = []
    for lam in roots:
        M = A - Mat3.scalar(T, lam)
        rows = M.rows()
        vec = None
        for i, j in ((0, 1), (0, 2), (1, 2)):
            v = _cross(rows[i], rows[j])
            if not all(x.is_zero() for x in v):
                vec = v
                break
        if vec is None:
            return ThreePoint("unresolved", eigenvalues=roots, reason="eigenspace of dimension > 1")
        # scale so the first nonzero coordinate is 1
        lead = next(x for x in vec if not x.is_zero())
        vec = [x / lead for x in vec]
        points.append(vec)
    Ag = ctx.twist(side)
    images = []
    for pnt in points:
        gp = [x.galois(G) for x in pnt]
        images.append([sum((Ag[i, j] * gp[j] for j in range(3)), T.zero()) for i in range(3)])
    perm = []
    for img in images:
        hit = [k for k, q in enumerate(points) if _proj_eq(img, q)]
        perm.append(hit[0] if hit else None)
    orbit = None not in perm and sorted(perm) == [0, 1, 2] and all(perm[k] != k for k in range(3))
    return ThreePoint("points", points, roots, orbit)


# -- the cyclic algebra -----------------------------------------------------


def algebra_basis(ctx: SBContext) -> list[Mat3]:
    """b^i A_g^j for i, j in 0..2 with b = diag(t, g(t), g^2(t)), ordered by i then j."""
    T = ctx.tower
    t = T.monomial(1, 0)
    b = diag_conjugates(T, t, G)
    out = []
    bi = Mat3.identity(T)
    for _i in range(3):
        Aj = Mat3.identity(T)
        for _j in range(3):
            out.append(bi * Aj)
            Aj = Aj * ctx.A_g
        bi = bi * b
    return out


def algebra_element(ctx: SBContext, coeffs) -> Mat3:
    coeffs = list(coeffs)
    if len(coeffs) != 9:
        raise ValueError("an algebra element needs nine coefficients")
    T = ctx.tower
    acc = None
    for c, m in zip(coeffs, algebra_basis(ctx)):
        c = T.coerce(c)
        if c.is_zero():
            continue
        term = m.scale(c)
        acc = term if acc is None else acc + term
    return acc if acc is not None else Mat3.scalar(T, 0)


def algebra_basis_rank(ctx: SBContext) -> int:
    return rank([list(m.e) for m in algebra_basis(ctx)])


def algebra_center(ctx: SBContext):
    """Basis (over k) of the coefficient vectors commuting with A_g and b."""
    T = ctx.tower
    base = T.base
    basis = algebra_basis(ctx)
    t = T.monomial(1, 0)
    bmat = diag_conjugates(T, t, G)
    cols = []
    for m in basis:
        col = []
        for X in (ctx.A_g, bmat):
            comm = m * X - X * m
            for entry in comm.e:
                for i in range(T.nt):
                    for j in range(T.ns):
                        col.append(entry.coefficient(i, j))
        cols.append(col)
    nrows = len(cols[0])
    rows = [[cols[k][r] for k in range(9)] for r in range(nrows)]
    rows = [r for r in rows if not all(x.is_zero() for x in r)]
    return nullspace(rows, 9, base.zero(), base.one())


# -- monomial representants -------------------------------------------------


def monomial_form(ctx: SBContext, A: Mat3, side: str = S):
    """(D_A, i) with A = D_A * A_g^i and D_A diagonal, or NotMonomialForm."""
    A = _lift(ctx, A)
    for i in range(3):
        D = A if i == 0 else A * _twist_inverse_power(ctx, side, i)
        if D.is_diagonal():
            return D, i
    raise NotMonomialForm("matrix is not a diagonal times a power of the twisting matrix")


def _twist_inverse_power(ctx, side, i):
    # A_g^{-1} = A_g^2 / xi_side
    Ag = ctx.twist(side)
    inv = (Ag * Ag).scale(ctx.xi_side(side).inverse())
    return inv if i == 1 else inv * inv


def link_conjugate_diag(ctx: SBContext, A: Mat3, check: bool = True) -> Mat3:
    """B on side S_op with B o Sigma = Sigma o A, for A = D_A A_g^i on side S."""
    D, i = monomial_form(ctx, A, S)
    T = ctx.tower
    d = D.diagonal()
    detD = d[0] * d[1] * d[2]
    Dinv = Mat3.diag(T, d[0].inverse(), d[1].inverse(), d[2].inverse())
    B = Dinv.scale(detD * ctx.xi ** i) * twist_power(ctx, S_OP, i)
    if check:
        from .birmaps import HomTriple, proj_equal

        lhs = HomTriple.linear(B).compose(HomTriple.sigma(T))
        rhs = HomTriple.sigma(T).compose(HomTriple.linear(_lift(ctx, A)))
        if not proj_equal(lhs, rhs):
            raise ArithmeticError("B o Sigma differs from Sigma o A")
        ca = det_class(ctx, A, S)
        cb = det_class(ctx, B, S_OP)
        if not ca.same_class(cb):
            raise ArithmeticError("determinant classes of A and B differ")
    return B
