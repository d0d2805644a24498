"""Words in links and automorphisms, their determinant and the map Phi.

A word is a path in the groupoid generated by automorphisms of S and S_op
and links between them.  Generators are stored in application order: the
first generator acts first.  ``Link(p, "fwd")`` is the chosen link of class
p from S to S_op and ``Link(p, "inv")`` its inverse.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import flint

from .errors import (
    DistinguishedClass,
    MissingContext,
    MissingPrime,
    NotAnEndomorphismWord,
    NotRepresentant,
    WordError,
)
from .matrices import Mat3
from .severi import S, S_OP, TRIVIAL, DetClass, SBContext, class_of, det_class, is_affine_representant

THREE = "three"
SIX = "six"
FWD = "fwd"
INV = "inv"


# -- point classes ------------------------------------------------------------


@dataclass(frozen=True)
class PointClass:
    label: str
    kind: str
    distinguished: bool = False

    def __post_init__(self):
        if self.kind not in (THREE, SIX):
            raise WordError(f"class {self.label}: kind must be 'three' or 'six', not {self.kind!r}")


class Registry:
    """The declared link classes; exactly one distinguished 3-class q."""

    def __init__(self, classes):
        self.classes = {}
        for c in classes:
            if c.label in self.classes:
                raise WordError(f"class {c.label} declared twice")
            self.classes[c.label] = c
        marked = [c for c in self.classes.values() if c.distinguished]
        if len(marked) != 1:
            raise WordError(f"exactly one distinguished class is needed, found {len(marked)}")
        if marked[0].kind != THREE:
            raise WordError(f"the distinguished class {marked[0].label} must be a 3-class")
        self.q = marked[0]

    def __contains__(self, label):
        return label in self.classes

    def __getitem__(self, label) -> PointClass:
        try:
            return self.classes[label]
        except KeyError:
            raise WordError(f"unknown link class {label!r}") from None

    def three_labels(self):
        """3-classes other than q, sorted: the Z/3 coordinates of Phi."""
        return sorted(c.label for c in self.classes.values() if c.kind == THREE and not c.distinguished)

    def six_labels(self):
        return sorted(c.label for c in self.classes.values() if c.kind == SIX)

    def to_text(self) -> str:
        lines = []
        for c in self.classes.values():
            lines.append(f"class {c.label} {c.kind}" + (" distinguished" if c.distinguished else ""))
        return "\n".join(lines) + "\n"


def parse_registry(text: str) -> Registry:
    """Lines ``class <label> three|six [distinguished]``; '#' starts a comment."""
    out = []
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] != "class" or len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "distinguished"):
            raise WordError(f"line {n}: expected 'class <label> three|six [distinguished]'")
        out.append(PointClass(parts[1], parts[2], len(parts) == 4))
    return Registry(out)


# -- words --------------------------------------------------------------------


@dataclass(frozen=True)
class Aut:
    """An automorphism of one side, given by a matrix or only by its det class.

    For a symbolic automorphism ``value`` is det(alpha) itself (not the
    signed contribution), on either side.
    """

    side: str
    value: object
    name: str | None = None

    def __post_init__(self):
        if self.side not in (S, S_OP):
            raise WordError(f"unknown side {self.side!r}")
        if not isinstance(self.value, (Mat3, DetClass)):
            raise WordError("automorphisms carry a matrix or a determinant class")

    @property
    def symbolic(self) -> bool:
        return isinstance(self.value, DetClass)


@dataclass(frozen=True)
class Link:
    label: str
    direction: str

    def __post_init__(self):
        if self.direction not in (FWD, INV):
            raise WordError(f"link direction must be 'fwd' or 'inv', not {self.direction!r}")

    @property
    def sides(self):
        return (S, S_OP) if self.direction == FWD else (S_OP, S)

    def inverse(self) -> "Link":
        return Link(self.label, INV if self.direction == FWD else FWD)


@dataclass
class Word:
    source: str = S
    gens: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def __len__(self):
        return len(self.gens)

    @property
    def target(self) -> str:
        side = self.source
        for g in self.gens:
            side = g.sides[1] if isinstance(g, Link) else side
        return side

    def then(self, other: "Word") -> "Word":
        """Apply self, then other."""
        return Word(self.source, list(self.gens) + list(other.gens))

    def inverse(self) -> "Word":
        gens = []
        for g in reversed(self.gens):
            if isinstance(g, Link):
                gens.append(g.inverse())
            else:
                gens.append(Aut(g.side, g.value.inverse()))
        return Word(self.target, gens)

    def to_text(self) -> str:
        lines = [f"source {self.source}"]
        for g in self.gens:
            if isinstance(g, Link):
                lines.append(f"link {g.label} {g.direction}")
            elif g.name is not None:
                lines.append(f"aut {g.side} {g.name}")
            elif g.symbolic:
                rep = g.value.rep.to_expr() if g.value.rep is not None else "1"
                lines.append(f"aut {g.side} {rep}")
            else:
                raise WordError("an unnamed matrix cannot be written as text")
        return "\n".join(lines) + "\n"


def word_check(w: Word, registry: Registry | None = None, ctx: SBContext | None = None):
    """None if w is valid, else the reason."""
    if w.source not in (S, S_OP):
        return f"unknown source side {w.source!r}"
    side = w.source
    for k, g in enumerate(w.gens, start=1):
        if isinstance(g, Link):
            if g.sides[0] != side:
                return f"generator {k}: link {g.label} {g.direction} starts on {g.sides[0]}, word is on {side}"
            if registry is not None and g.label not in registry:
                return f"generator {k}: link class {g.label} is not registered"
            side = g.sides[1]
        elif isinstance(g, Aut):
            if g.side != side:
                return f"generator {k}: automorphism of {g.side} applied on {side}"
            if ctx is not None and not g.symbolic and not is_affine_representant(ctx, g.value, g.side):
                return f"generator {k}: matrix is not a representant on {g.side}"
        else:
            return f"generator {k}: not a generator"
    return None


def word_validate(w: Word, registry: Registry | None = None, ctx: SBContext | None = None,
                  raise_on_failure: bool = False) -> bool:
    """True iff sides chain correctly and every link class is registered."""
    reason = word_check(w, registry, ctx)
    if reason is not None and raise_on_failure:
        raise WordError(reason)
    return reason is None


def _aut_class(g: Aut, ctx: SBContext | None) -> DetClass:
    """Signed contribution: det on S, det^-1 on S_op."""
    if g.symbolic:
        c = g.value
        return c if g.side == S else c.inverse()
    if ctx is None:
        raise MissingContext("matrix-backed automorphisms need a surface context")
    try:
        return det_class(ctx, g.value, g.side)
    except NotRepresentant as exc:
        raise WordError(str(exc)) from None


def det_R(w: Word, ctx: SBContext | None = None, registry: Registry | None = None) -> DetClass:
    """Product of the signed determinant classes of the automorphisms; links count 1."""
    word_validate(w, registry, None, raise_on_failure=True)
    acc = TRIVIAL
    for g in w.gens:
        if isinstance(g, Aut):
            acc = acc * _aut_class(g, ctx)
    return acc


# -- Phi ----------------------------------------------------------------------


@dataclass
class PhiImage:
    z3: dict
    z: dict
    det: DetClass = TRIVIAL

    def __post_init__(self):
        self.z3 = {k: v % 3 for k, v in self.z3.items()}

    @classmethod
    def zero(cls, registry: Registry) -> "PhiImage":
        return cls({p: 0 for p in registry.three_labels()}, {p: 0 for p in registry.six_labels()})

    def __add__(self, other: "PhiImage") -> "PhiImage":
        if self.z3.keys() != other.z3.keys() or self.z.keys() != other.z.keys():
            raise WordError("images over different registries")
        return PhiImage(
            {k: self.z3[k] + other.z3[k] for k in self.z3},
            {k: self.z[k] + other.z[k] for k in self.z},
            self.det * other.det,
        )

    def __neg__(self) -> "PhiImage":
        return PhiImage({k: -v for k, v in self.z3.items()}, {k: -v for k, v in self.z.items()}, self.det.inverse())

    def __sub__(self, other: "PhiImage") -> "PhiImage":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PhiImage):
            return NotImplemented
        return self.z3 == other.z3 and self.z == other.z and self.det.same_class(other.det)

    def coordinates_zero(self) -> bool:
        return not any(self.z3.values()) and not any(self.z.values())

    def is_zero(self) -> bool:
        return self.coordinates_zero() and self.det.is_trivial()

    def coordinate(self, label: str) -> int:
        if label in self.z3:
            return self.z3[label]
        return self.z[label]

    def to_json(self) -> dict:
        return {"z3": dict(sorted(self.z3.items())), "z": dict(sorted(self.z.items())), "det": self.det.to_json()}


def link_counts(w: Word) -> dict:
    """Signed number of links per class: fwd +1, inv -1."""
    out = {}
    for g in w.gens:
        if isinstance(g, Link):
            out[g.label] = out.get(g.label, 0) + (1 if g.direction == FWD else -1)
    return out


def _require_endomorphism(w: Word, registry: Registry):
    word_validate(w, registry, None, raise_on_failure=True)
    if w.source != S or w.target != S:
        raise NotAnEndomorphismWord(f"word goes from {w.source} to {w.target}, not from S to S")


def phi(w: Word, registry: Registry, ctx: SBContext | None = None) -> PhiImage:
    """Link counts per class (q dropped, 3-classes mod 3) and the det_R class."""
    _require_endomorphism(w, registry)
    img = PhiImage.zero(registry)
    for label, n in link_counts(w).items():
        c = registry[label]
        if c.distinguished:
            continue
        if c.kind == THREE:
            img.z3[label] = (img.z3[label] + n) % 3
        else:
            img.z[label] += n
    img.det = det_R(w, ctx, registry)
    return img


# -- normal form --------------------------------------------------------------


def block(p: str, q: str, exponent: int = 1) -> Word:
    """B_{p,q}^exponent, with B_{p,q} = chi_p^-1 chi_q (chi_q first)."""
    unit = [Link(q, FWD), Link(p, INV)] if exponent >= 0 else [Link(p, FWD), Link(q, INV)]
    return Word(S, unit * abs(exponent))


def normal_form(w: Word, registry: Registry, ctx: SBContext | None = None) -> Word:
    """alpha chi_q^-1 alpha' chi_q prod_p B_{p,q}^{a_p}, in application order.

    Automorphisms are collected into alpha (on S) and alpha' (on S_op) by
    their det classes; each pair of links chi_b^-1 beta chi_a is split as
    B_{b,q} chi_q^-1 beta chi_q B_{a,q}^-1, blocks B_{q,q} are dropped and
    exponents of 3-classes are reduced into {0, 1, 2}, each B_{p,q}^3 being
    traded for automorphisms of trivial total determinant.
    """
    _require_endomorphism(w, registry)
    q = registry.q.label
    alpha = TRIVIAL
    alpha_op = TRIVIAL
    for g in w.gens:
        if isinstance(g, Aut):
            c = _aut_class(g, ctx)
            if g.side == S:
                alpha = alpha * c
            else:
                # keep alpha' as det(alpha') itself
                alpha_op = alpha_op * c.inverse()
    exps = {}
    for label, n in link_counts(w).items():
        # fwd chi_a contributes B_{a,q}^-1, inv chi_b contributes B_{b,q}
        exps[label] = exps.get(label, 0) - n
    notes = []
    if exps.pop(q, 0):
        notes.append(f"links of the distinguished class {q} carry no coordinate (B_{{{q},{q}}} = id)")
    out = Word(S, [])
    for label in sorted(exps):
        a = exps[label]
        if registry[label].kind == THREE and a % 3 != a:
            r = a % 3
            notes.append(f"B_{{{label},{q}}}^{a} reduced to exponent {r}; the B^3 factors became "
                         "automorphisms of trivial determinant class")
            a = r
        if a:
            out.gens += block(label, q, a).gens
    if not alpha_op.is_trivial():
        out.gens += [Link(q, FWD), Aut(S_OP, alpha_op), Link(q, INV)]
    if not alpha.is_trivial():
        out.gens.append(Aut(S, alpha))
    out.notes = notes
    return out


# -- maximal subgroups ----------------------------------------------------------


def maximal_member(w: Word, registry: Registry, p: str, a: int | None = None,
                   ctx: SBContext | None = None) -> bool:
    """Whether the p-coordinate of phi(w) lies in {0} (3-class) or aZ (6-class)."""
    c = registry[p]
    if c.distinguished:
        raise DistinguishedClass(f"{p} is the distinguished class; it has no coordinate")
    if c.kind == SIX:
        if a is None:
            raise MissingPrime(f"{p} is a 6-class; a prime a is needed")
        if not flint.fmpz(a).is_prime():
            raise MissingPrime(f"{a} is not a prime")
    elif a is not None:
        raise WordError(f"{p} is a 3-class; no prime is used")
    img = phi(w, registry, ctx)
    x = img.coordinate(p)
    return x == 0 if c.kind == THREE else x % a == 0


# -- text format --------------------------------------------------------------

_LINE = re.compile(r"^\s*(\w+)\s+(\S+)\s+(.+?)\s*$")


def parse_word(text: str, resolve_aut=None, source: str | None = None) -> Word:
    """Read ``aut <side> <ref|class-expr>`` / ``link <p> fwd|inv`` lines.

    An optional first line ``source S|S_op`` fixes the source; otherwise it is
    read off the first generator.  ``resolve_aut(token, side)`` turns the
    automorphism token into a Mat3 or DetClass (plus a name); without it
    only the literal ``1`` is understood.
    """
    gens = []
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(None, 1)
        if parts[0] == "source" and len(parts) == 2 and not gens:
            source = parts[1].strip()
            continue
        m = _LINE.match(line)
        if m is None:
            err = WordError(f"line {n}: expected 'aut <side> <value>' or 'link <class> fwd|inv'")
            err.line = n
            raise err
        kind, a, b = m.groups()
        try:
            if kind == "link":
                gens.append(Link(a, b))
            elif kind == "aut":
                side = {"S": S, "S_op": S_OP}.get(a)
                if side is None:
                    raise WordError(f"unknown side {a!r}")
                if resolve_aut is not None:
                    value, name = resolve_aut(b, side)
                elif b == "1":
                    value, name = TRIVIAL, None
                else:
                    raise WordError(f"cannot resolve automorphism {b!r} without a session")
                gens.append(Aut(side, value, name))
            else:
                raise WordError(f"unknown generator {kind!r}")
        except WordError as exc:
            err = WordError(f"line {n}: {exc}")
            err.line = n
            raise err from None
    if source is None:
        if gens and isinstance(gens[0], Link):
            source = gens[0].sides[0]
        elif gens:
            source = gens[0].side
        else:
            source = S
    return Word(source, gens)


def chain_word(chain, labels: dict) -> Word:
    """The hexagon of a relation chain as a word at S.

    ``labels`` maps (link name, sides) to (class label, direction); the
    hexagon is rotated to start with a link leaving S.
    """
    n = len(chain.links)
    start = next(i for i, L in enumerate(chain.links) if L.sides[0] == S)
    gens = []
    for k in range(n):
        i = (start + k) % n
        L = chain.links[i]
        label, direction = labels[(L.name, L.sides)]
        gens.append(Link(label, direction))
        gens.append(Aut(chain.sides[i], chain.matrices[i]))
    return Word(S, gens)


def class_expr(tower, text: str) -> DetClass:
    """Determinant class of a base-field expression."""
    x = tower.parse(text)
    if x.is_zero():
        raise WordError("a determinant class must be nonzero")
    return class_of(x)
