"""Acceptance criteria: one pass/fail line each, at exact tolerance."""

import random
import time

import pytest

from sbdet.abelianization import FWD, INV, Aut, Link, Word, det_R, link_counts, maximal_member, normal_form, phi
from sbdet.abelianization import parse_registry
from sbdet.birmaps import HomTriple, map_degree, proj_equal
from sbdet.errors import SBError
from sbdet.fields import G, hilbert90_solve, random_base_element, random_element, tower_make
from sbdet.matrices import Mat3, diag_conjugates
from sbdet.relations import (
    closed_forms_verify,
    dep_point_check,
    one_class_relation,
    substitution_check,
    two_class_relation,
    verify_elementary,
)
from sbdet.severi import (
    S,
    S_OP,
    algebra_basis_rank,
    algebra_center,
    algebra_element,
    aut_from_vector,
    class_of,
    context_make,
    det_class,
    is_affine_representant,
    link_conjugate_diag,
    opposite,
    twist_power,
)

from .conftest import ACCEPTANCE_LINES, nonzero_vector, small_element

K = tower_make([], [])
T1 = tower_make(["u", "v"], [("t", "u")])
CTX1 = context_make(T1, "v")
T2 = tower_make(["u", "w"], [("t", "u"), ("s", "w")])
CTX2 = context_make(T2, "u*w^2")


def report(n, ok, detail, seconds):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail} ({seconds:.1f} s)"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_criterion_1_worked_example():
    t0 = time.perf_counter()
    A1 = aut_from_vector(CTX1, 1, 2, 3)
    chain = one_class_relation(CTX1, A1, samples=7, seed=0)
    d = [M.det() for M in chain.matrices]
    ratio = d[0] * d[2] * d[4] / (d[1] * d[3] * d[5])
    ok_det = ratio == 1
    ok_id = chain.report["composition = identity"]
    elapsed = time.perf_counter() - t0
    ok = ok_det and ok_id and elapsed < 5
    report(1, ok, f"xi = v, A1 from (1,2,3): det ratio = {ratio.to_expr()}, composition = identity {ok_id}, "
                  f"under 5 s {elapsed < 5}", elapsed)


def test_criterion_2_closed_forms():
    t0 = time.perf_counter()
    rng = random.Random(2)
    units = [-5, -4, -3, -2, -1, 1, 2, 3, 4, 5]
    passed, tried = {"Q(omega)": 0, "t-tower": 0}, 0
    while passed["Q(omega)"] < 13:
        A = Mat3(K, [[rng.choice(units) + rng.randint(0, 1) * K.omega() for _ in range(3)] for _ in range(3)])
        tried += 1
        try:
            rep = closed_forms_verify(A, raise_on_failure=False)
        except SBError:
            continue  # invalid input: singular, or the chain meets a coordinate point
        passed["Q(omega)"] += rep.passed
        if not rep.passed:
            break
    while passed["t-tower"] < 12:
        tried += 1
        try:
            A = aut_from_vector(CTX1, *nonzero_vector(rng, -4, 4))
            rep = closed_forms_verify(A, raise_on_failure=False)
        except SBError:
            continue
        passed["t-tower"] += rep.passed
        if not rep.passed:
            break
    total = sum(passed.values())
    report(2, total == 25, f"{total}/25 matrices pass all four identity groups "
                           f"({passed['Q(omega)']} over Q(omega), {passed['t-tower']} over Q(omega)(u,v)(t))",
           time.perf_counter() - t0)


def _twists(n, seed):
    rng = random.Random(seed)
    pool = [(a, c, e) for a in (1, -1) for c in (1, -1) for e in (1, 2)]
    return rng.sample(pool, n)


def test_criterion_3_two_class_relation():
    t0 = time.perf_counter()
    b0 = T2.parse("w*t^2*s")
    t = T2.gen("t")
    cases = [("fixture", b0)]
    for a, c, e in _twists(5, seed=3):
        x = a + c * t ** e
        cases.append((f"x = {x.to_expr()}", b0 * x / x.galois(G)))
    failures = []
    for name, b in cases:
        chain = two_class_relation(CTX2, b, samples=7, seed=0)
        ledger = chain.report["ledger"]
        eqs = [v for k, v in ledger.items() if k.split(" ")[0] in ("eq:1P", "eq:2Ps", "eq:1B", "eq:2Bs", "eq:Dh")]
        ok = len(eqs) == 5 and all(eqs) and ledger["final value = 1"] and chain.report["composition = identity"]
        if not ok:
            failures.append(name)
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 20
    report(3, ok, f"{len(cases) - len(failures)}/{len(cases)} elements b (fixture and 5 norm-1 twists) pass "
                  f"composition, five ledger identities and final value 1; under 20 s {elapsed < 20}", elapsed)


def test_criterion_4_hilbert_90():
    t0 = time.perf_counter()
    rng = random.Random(4)
    good = 0
    for k in range(100):
        if k < 60:
            x = random_element(T1, rng)
            if x.is_fixed_by(G):
                x = x + T1.gen("t")
        else:
            x = small_element(T2, rng)
        mu = x / x.galois(G)
        lam = hilbert90_solve(mu, G)
        if k < 60:
            good += lam / lam.galois(G) == mu
        else:
            # same identity without a division in the two-layer tower; lam is nonzero
            good += (not lam.is_zero()) and lam == mu * lam.galois(G)
    report(4, good == 100, f"{good}/100 norm-1 inputs give lambda/g(lambda) = mu", time.perf_counter() - t0)


def test_criterion_5_cyclic_algebra():
    t0 = time.perf_counter()
    rng = random.Random(5)
    rank_ok = algebra_basis_rank(CTX1) == 9
    center = algebra_center(CTX1)
    center_ok = len(center) == 1 and all(x.is_zero() for x in center[0][1:])
    inv = 0
    for _ in range(100):
        coeffs = [random_base_element(T1, rng, coeff=2, terms=2) if rng.random() < 0.5 else 0 for _ in range(9)]
        if all(T1.coerce(c).is_zero() for c in coeffs):
            coeffs[rng.randrange(9)] = 1
        inv += not algebra_element(CTX1, coeffs).det().is_zero()
    mult = 0
    for _ in range(100):
        x = algebra_element(CTX1, [rng.randint(-3, 3) for _ in range(9)])
        y = aut_from_vector(CTX1, *nonzero_vector(rng))
        if x.det().is_zero():
            x = CTX1.A_g
        mult += det_class(CTX1, x * y).same_class(det_class(CTX1, x) * det_class(CTX1, y))
    ok = rank_ok and center_ok and inv == 100 and mult == 100
    report(5, ok, f"xi = v: rank 9 {rank_ok}, center = k I {center_ok}, {inv}/100 invertible, "
                  f"{mult}/100 pairs multiplicative", time.perf_counter() - t0)


def test_criterion_6_trivial_relation_law():
    t0 = time.perf_counter()
    rng = random.Random(6)
    sig = HomTriple.sigma(T1)
    good = 0
    for _ in range(50):
        x = rng.choice([1, -1, 2, -2, 3]) * T1.monomial(rng.randrange(3)) + rng.randint(-2, 2) * T1.var("u")
        x = x if not x.is_zero() else T1.one()
        A = diag_conjugates(T1, x, G) * twist_power(CTX1, S, rng.randrange(3))
        B = link_conjugate_diag(CTX1, A, check=False)
        same = det_class(CTX1, B, S_OP).same_class(det_class(CTX1, A, S))
        commutes = proj_equal(HomTriple.linear(B).compose(sig), sig.compose(HomTriple.linear(A)))
        good += same and commutes
    report(6, good == 50, f"{good}/50 monomial automorphisms: equal det class and B Sigma = Sigma A",
           time.perf_counter() - t0)


def test_criterion_7_degree_parity():
    t0 = time.perf_counter()
    rng = random.Random(7)
    sig = HomTriple.sigma(T1)
    good, kinds = 0, set()
    for _ in range(50):
        f, side = HomTriple.identity(T1), S
        for _ in range(rng.randint(1, 3)):
            A = aut_from_vector(CTX1, *nonzero_vector(rng), side=side)
            f = sig.compose(HomTriple.linear(A).compose(f))
            side = opposite(side)
        expected = 2 if side == S_OP else 1
        kinds.add(side)
        good += f.degree() % 3 == expected and map_degree(f, (S, side)) == f.degree()
    report(7, good == 50 and kinds == {S, S_OP},
           f"{good}/50 compositions have degree 2 mod 3 (S to S_op) or 1 mod 3 (S to S)", time.perf_counter() - t0)


REG = parse_registry("class q three distinguished\nclass p three\nclass r three\nclass h six\nclass k six\n")
LABELS = ["q", "p", "r", "h", "k"]


@pytest.fixture(scope="module")
def aut_pool():
    rng = random.Random(80)
    pool = {S: [], S_OP: []}
    for side in (S, S_OP):
        for _ in range(3):
            pool[side].append(Aut(side, aut_from_vector(CTX1, *nonzero_vector(rng), side=side)))
        for text in ("u", "v^2", "u*v", "5"):
            pool[side].append(Aut(side, class_of(T1.parse(text))))
    return pool


def _word(rng, pool, source=S, endo=True):
    side, gens = source, []
    for _ in range(rng.randint(0, 10)):
        if rng.random() < 0.5:
            gens.append(Link(rng.choice(LABELS), FWD if side == S else INV))
            side = opposite(side)
        else:
            gens.append(rng.choice(pool[side]))
    if endo and side == S_OP:
        gens.append(Link(rng.choice(LABELS), INV))
    return Word(source, gens)


def test_criterion_8_word_calculus(aut_pool):
    t0 = time.perf_counter()
    rng = random.Random(8)
    hom_phi = hom_det = nf_ok = 0
    for _ in range(200):
        a, b = _word(rng, aut_pool), _word(rng, aut_pool)
        hom_phi += phi(a.then(b), REG, CTX1) == phi(a, REG, CTX1) + phi(b, REG, CTX1)
        c = _word(rng, aut_pool, source=rng.choice([S, S_OP]), endo=False)
        d = _word(rng, aut_pool, source=c.target, endo=False)
        hom_det += det_R(c.then(d), CTX1).same_class(det_R(c, CTX1) * det_R(d, CTX1))
        nf_ok += phi(normal_form(a, REG, CTX1), REG, CTX1) == phi(a, REG, CTX1)
    member = 0
    for _ in range(100):
        w = _word(rng, aut_pool)
        counts = link_counts(w)
        p = rng.choice(["p", "r", "h", "k"])
        if REG[p].kind == "three":
            member += maximal_member(w, REG, p, ctx=CTX1) == (counts.get(p, 0) % 3 == 0)
        else:
            a = rng.choice([2, 3, 5, 7])
            member += maximal_member(w, REG, p, a, CTX1) == (counts.get(p, 0) % a == 0)
    ok = hom_phi == hom_det == nf_ok == 200 and member == 100
    report(8, ok, f"phi homomorphism {hom_phi}/200, det_R homomorphism {hom_det}/200, "
                  f"normal form keeps phi {nf_ok}/200, maximal_member {member}/100", time.perf_counter() - t0)


def test_criterion_9_invariance():
    t0 = time.perf_counter()
    rng = random.Random(9)
    chains = []
    while len(chains) < 4:
        try:
            chains.append(one_class_relation(CTX1, aut_from_vector(CTX1, *nonzero_vector(rng))))
        except SBError:
            continue
    subst = 0
    for k in range(20):
        chain = chains[k % 4]
        choices = {}
        for L in chain.links:
            key = (L.name, L.sides)
            if key not in choices:
                gamma = aut_from_vector(CTX1, *nonzero_vector(rng), side=L.sides[1])
                delta = aut_from_vector(CTX1, *nonzero_vector(rng), side=L.sides[0])
                choices[key] = (gamma, delta)
        r = substitution_check(chain, choices, seed=k)
        reps = all(is_affine_representant(CTX1, M, s) for M, s in zip(r["chain"].matrices, r["chain"].sides))
        subst += r["ratio is a cube"] and r["cube witness"] is not None and r["composition = identity"] and reps
    dep = 0
    for k in range(20):
        A1 = chains[k % 4].matrices[0]
        E = [diag_conjugates(T1, T1.monomial(rng.randrange(3)), G).scale(rng.choice([1, -1, 2, -2, 3]))
             for _ in range(4)]
        r = dep_point_check(CTX1, A1, E, seed=k)
        dep += r["same class"] and r["composition = identity"] and r["representants"]
    ok = subst == 20 and dep == 20
    report(9, ok, f"representant substitution keeps the class {subst}/20, diagonal twisting {dep}/20",
           time.perf_counter() - t0)


def test_elementary_checks_on_acceptance_chains():
    """The two relation builders also pass the itemized hexagon check."""
    one = one_class_relation(CTX1, aut_from_vector(CTX1, 1, 2, 3))
    two = two_class_relation(CTX2, T2.parse("w*t^2*s"))
    assert verify_elementary(one).passed
    assert verify_elementary(two).passed
