import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sbdet.abelianization import (
    FWD,
    INV,
    Aut,
    Link,
    PhiImage,
    Word,
    block,
    chain_word,
    det_R,
    link_counts,
    maximal_member,
    normal_form,
    parse_registry,
    parse_word,
    phi,
    word_validate,
)
from sbdet.errors import DistinguishedClass, MissingContext, MissingPrime, NotAnEndomorphismWord, WordError
from sbdet.fields import tower_make
from sbdet.relations import one_class_relation
from sbdet.severi import S, S_OP, TRIVIAL, aut_from_vector, class_of, context_make

T = tower_make(["u", "v"], [("t", "u")])
CTX = context_make(T, "v")
REG = parse_registry(
    """
    class q three distinguished
    class p three
    class r three
    class h six   # a class of six points
    class k six
    """
)
LABELS = ["q", "p", "r", "h", "k"]
CLASSES = [class_of(T.parse(x)) for x in ("u", "v", "u*v^2", "2", "u^2", "3*v")]


@st.composite
def words(draw, source=S, endo=True, max_len=10):
    """Random walk in the groupoid; with ``endo`` the word returns to S."""
    side = source
    gens = []
    for _ in range(draw(st.integers(0, max_len))):
        if draw(st.booleans()):
            label = draw(st.sampled_from(LABELS))
            gens.append(Link(label, FWD if side == S else INV))
            side = S_OP if side == S else S
        else:
            gens.append(Aut(side, draw(st.sampled_from(CLASSES))))
    if endo and side == S_OP:
        gens.append(Link(draw(st.sampled_from(LABELS)), INV))
    return Word(source, gens)


PROPS = settings(max_examples=60, deadline=None)


@PROPS
@given(words())
def test_random_words_are_valid(w):
    assert word_validate(w, REG)
    assert w.target == S


@PROPS
@given(words(), words())
def test_phi_is_a_homomorphism(a, b):
    assert phi(a.then(b), REG) == phi(a, REG) + phi(b, REG)


@PROPS
@given(words(endo=False), st.data())
def test_det_R_is_a_homomorphism(a, data):
    b = data.draw(words(source=a.target, endo=False))
    assert det_R(a.then(b)).same_class(det_R(a) * det_R(b))


@PROPS
@given(words())
def test_phi_of_inverse(w):
    assert phi(w.inverse(), REG) == -phi(w, REG)
    assert phi(w.then(w.inverse()), REG).is_zero()


@PROPS
@given(words())
def test_normal_form_preserves_phi(w):
    nf = normal_form(w, REG)
    assert word_validate(nf, REG)
    assert phi(nf, REG) == phi(w, REG)
    assert len(normal_form(nf, REG)) == len(nf)


@PROPS
@given(words())
def test_maximal_member_matches_counts(w):
    counts = link_counts(w)
    for p in ("p", "r"):
        assert maximal_member(w, REG, p) == (counts.get(p, 0) % 3 == 0)
    for h in ("h", "k"):
        for a in (2, 3, 5):
            assert maximal_member(w, REG, h, a) == (counts.get(h, 0) % a == 0)


def test_block_images():
    B = block("p", "q")
    img = phi(B, REG)
    assert img.z3 == {"p": 2, "r": 0}
    assert phi(block("p", "q", 3), REG).is_zero()
    assert phi(block("h", "q", 4), REG).z["h"] == -4
    assert normal_form(block("p", "q", 4), REG).gens == B.gens


def test_distinguished_class_has_no_coordinate():
    w = Word(S, [Link("q", FWD), Link("q", INV)])
    assert phi(w, REG).is_zero()
    assert normal_form(w, REG).gens == []
    with pytest.raises(DistinguishedClass):
        maximal_member(w, REG, "q")


def test_maximal_member_arguments():
    w = block("h", "q")
    with pytest.raises(MissingPrime):
        maximal_member(w, REG, "h")
    with pytest.raises(MissingPrime):
        maximal_member(w, REG, "h", 4)
    with pytest.raises(WordError):
        maximal_member(w, REG, "p", 5)


def test_invalid_words():
    assert not word_validate(Word(S, [Link("p", FWD), Link("p", FWD)]), REG)
    assert not word_validate(Word(S, [Aut(S_OP, CLASSES[0])]), REG)
    assert not word_validate(Word(S, [Link("zz", FWD), Link("zz", INV)]), REG)
    assert word_validate(Word(S, []), REG)
    with pytest.raises(NotAnEndomorphismWord):
        phi(Word(S, [Link("p", FWD)]), REG)


def test_registry_errors():
    with pytest.raises(WordError):
        parse_registry("class q three\nclass p three\n")
    with pytest.raises(WordError):
        parse_registry("class q six distinguished\n")
    with pytest.raises(WordError):
        parse_registry("class q three distinguished\nclass q three\n")
    with pytest.raises(WordError):
        parse_registry("klass q three\n")
    assert parse_registry(REG.to_text()).three_labels() == ["p", "r"]


def test_matrix_automorphisms():
    A = aut_from_vector(CTX, 1, 2, 3)
    w = Word(S, [Aut(S, CTX.A_g)])
    assert det_R(w, CTX).same_class(class_of(T.parse("v")))
    with pytest.raises(MissingContext):
        det_R(Word(S, [Aut(S, A)]))
    assert not word_validate(Word(S, [Aut(S_OP, A)]), REG, CTX)


def test_parse_word_roundtrip():
    text = "source S\nlink p fwd\naut S_op 1\nlink h inv\n"
    w = parse_word(text)
    assert [type(g).__name__ for g in w.gens] == ["Link", "Aut", "Link"]
    assert parse_word(w.to_text()).gens == w.gens
    with pytest.raises(WordError) as exc:
        parse_word("link p fwd\nlink p sideways\n")
    assert exc.value.line == 2


def test_relation_word_has_trivial_image():
    chain = one_class_relation(CTX, aut_from_vector(CTX, 1, 2, 3))
    labels = {("Sigma", (S, S_OP)): ("p", FWD), ("Sigma", (S_OP, S)): ("p", INV)}
    w = chain_word(chain, labels)
    assert word_validate(w, REG, CTX)
    img = phi(w, REG, CTX)
    assert img.coordinates_zero() and img.det.is_trivial()


def test_phi_image_json():
    img = PhiImage.zero(REG)
    assert img.to_json()["det"]["cube"] == "cube"
    assert img.det is TRIVIAL
