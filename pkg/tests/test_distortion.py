import random

from submon.words import Alphabet, Word, Presentation
from submon.rewrite import DehnEngine
from submon.distortion import (
    DistortionBudget, compose_budget, half_suffix, midpoint_certificate,
    positive_functional, functional_value, code_certificate, free_image_graded,
    dehn_twist_hom,
    undistorted_constants, SearchBudget, bounded_search,
)

AB = Alphabet(["a", "b"])
XY = Alphabet(["x", "y"])


def W(alphabet, text):
    return Word.parse(alphabet, text)


def test_budget_compose():
    lam = DistortionBudget(1, 0)
    assert lam.bound(7) == 7
    stretched = compose_budget(lam, 3)
    assert stretched == DistortionBudget(3, 0)
    assert stretched.bound(5) == 15
    assert compose_budget(DistortionBudget(2, 5), 4).bound(1) == 13


def test_half_suffix():
    assert half_suffix(W(AB, "aBB")).format() == "BB"
    assert half_suffix(W(AB, "ab")).format() == "b"
    assert half_suffix(W(AB, "a")).format() == "a"
    assert half_suffix(W(AB, "abABa")).format() == "ABa"
    assert len(half_suffix(W(AB, "abABBaabaBA"))) == 6


def test_dehn_twist_hom():
    h0 = dehn_twist_hom(0)
    assert [w.format() for w in h0.images] == ["a", "b", "b", "a"]
    h1 = dehn_twist_hom(1)
    assert h1.images[2].format() == "abAbaBA"
    assert h1.images[3].format() == "abABabaBA"
    assert h1.max_image_length == 9
    # images of the genus-2 relator collapse
    rel = W(h1.source, "abABcdCD")
    assert not h1.apply(rel)


TWIST_GENS = ["aBB", "bAA", "Cdd", "Dcc"]

ALPHA = ["aBB", "bAA", "abABBaabaBA", "abABAbbbaBA"]

MIDPOINT_TABLE = {
    (0, 0): "BBaBB",
    (0, 1): "BAA",
    (0, 2): "BBabABBaabaBA",
    (0, 3): "BBabABAbbbaBA",
    (1, 0): "ABB",
    (1, 1): "AAbAA",
    (1, 2): "AbABBaabaBA",
    (1, 3): "AbABAbbbaBA",
    (2, 0): "aabaBBB",
    (2, 1): "aabaBAbAA",
    (2, 2): "aaBaabaBA",
    (2, 3): "abbbaBA",
    (3, 0): "bbbaBBB",
    (3, 1): "bbbaBAbAA",
    (3, 2): "baabaBA",
    (3, 3): "bbAbbbaBA",
}


def twist_alphas():
    h = dehn_twist_hom(1)
    return [h.apply(W(h.source, t)) for t in TWIST_GENS]


def test_twist_image_generators():
    assert [w.format() for w in twist_alphas()] == ALPHA


def test_midpoint_table_frozen():
    alphas = twist_alphas()
    report = midpoint_certificate(AB, alphas)
    assert report.passes
    assert [s.format() for s in report.suffixes] == ["BB", "AA", "aabaBA", "bbbaBA"]
    assert len(report.rows) == 16
    got = {(i, j): u.format() for i, j, u, _, _ in report.rows}
    assert got == MIDPOINT_TABLE
    assert report.budget == DistortionBudget(1, 0)
    # spot-check two splits: minimal surviving prefix and kept suffix
    by_pair = {(i, j): (p, l) for i, j, _, p, l in report.rows}
    assert by_pair[(0, 1)] == (1, 2)   # B . AA
    assert by_pair[(2, 0)] == (5, 2)   # aabaB . BB


def test_midpoint_failure_detected():
    prefixes = [W(AB, t) for t in ["a", "ab", "abA", "abAB"]]
    report = midpoint_certificate(AB, prefixes)
    assert not report.passes
    assert report.budget is None
    assert [(i, j) for i, j, _, _ in report.failures] == [(2, 0)]
    # and for cause: factor count is genuinely unbounded at length 2
    w = W(AB, "ab")
    for k in range(1, 6):
        prod = W(AB, "abABA") ** k * w * W(AB, "a") ** k
        assert prod.format() == "ab"


def test_positive_functional_klein_prefixes():
    cd = Alphabet(["c", "d"])
    pres = Presentation(cd, [W(cd, "ccdd")])
    gens = [W(cd, t) for t in ["c", "cc", "ccd"]]
    psi = positive_functional(pres, gens)
    assert psi == {"c": 1, "d": -1}
    assert [functional_value(psi, g) for g in gens] == [1, 2, 1]
    assert functional_value(psi, W(cd, "C")) == -1
    assert functional_value(psi, W(cd, "Cdd")) == -3


def test_positive_functional_respects_relators():
    cd = Alphabet(["c", "d"])
    pres = Presentation(cd, [W(cd, "ccdd")])
    psi = positive_functional(pres, [W(cd, "c"), W(cd, "d")])
    assert psi is None  # psi(c) = -psi(d) blocks both being positive


def test_positive_functional_free_case():
    pres = Presentation(XY, [])
    psi = positive_functional(pres, [W(XY, "x"), W(XY, "xy")])
    assert psi == {"x": 1, "y": 0}


def test_positive_functional_surface_prefixes_none():
    abcd = Alphabet(["a", "b", "c", "d"])
    rel = W(abcd, "abABcdCD")
    pres = Presentation(abcd, [rel])
    prefixes = [Word(abcd, rel.letters[:k]) for k in range(1, 8)]
    # the commutator prefix abAB has value 0 under every functional
    assert positive_functional(pres, prefixes, radius=2) is None


def test_code_certificate():
    gens = [W(XY, t) for t in ["x", "yx", "y", "yXYx"]]
    cert = code_certificate(XY, gens)
    assert cert is not None
    assert cert.kind == "code"
    assert cert.data["kept"] == [0, 2, 3]
    assert [w.format() for w in cert.data["code"]] == ["x", "y", "yXYx"]
    assert cert.budget == DistortionBudget(1, 0)


def test_code_certificate_rejects_cancellation():
    assert code_certificate(XY, [W(XY, "x"), W(XY, "X")]) is None
    assert code_certificate(XY, [W(XY, "xy"), W(XY, "Y")]) is None


def test_undistorted_constants():
    c = undistorted_constants(XY, [W(XY, "xx")])
    assert (c.L, c.L_prime) == (2, 1)
    assert c.budget == DistortionBudget(1, 5)
    assert c.budget.bound(6) == 11

    c = undistorted_constants(XY, [W(XY, "x")])
    assert (c.L, c.L_prime) == (1, 2)
    assert c.budget == DistortionBudget(2, 5)

    c = undistorted_constants(XY, [])
    assert (c.L, c.L_prime) == (0, 0)
    assert c.budget.bound(100) == 1


def test_bounded_search_member():
    gens = [W(AB, "ab"), W(AB, "bA")]
    target = gens[0] * gens[1] * gens[0]
    assert target.format() == "abbb"
    res = bounded_search(gens, target, SearchBudget(max_depth=5))
    assert res.found
    assert res.witness == [0, 1, 0]
    prod = Word(AB, ())
    for i in res.witness:
        prod = prod * gens[i]
    assert prod == target


def test_bounded_search_depth_budget():
    gens = [W(AB, "ab")]
    target = W(AB, "ab") ** 6
    shallow = bounded_search(gens, target, SearchBudget(max_depth=2))
    assert not shallow.found
    assert shallow.complete and shallow.certified  # not a product of <= 2
    deep = bounded_search(gens, target, SearchBudget(max_depth=6))
    assert deep.found and deep.witness == [0] * 6


def test_bounded_search_certified_nonmember():
    gens = [W(AB, "ab"), W(AB, "bA")]
    res = bounded_search(gens, W(AB, "ba"), SearchBudget(max_depth=6))
    assert not res.found
    assert res.complete and res.certified


def test_bounded_search_group_equality():
    abcd = Alphabet(["a", "b", "c", "d"])
    pres = Presentation(abcd, [W(abcd, "abABcdCD")])
    engine = DehnEngine(pres)
    gens = [W(abcd, "a"), W(abcd, "b")]
    # equals a in the group but no free product of a, b spells it
    target = (pres.relator * W(abcd, "a")).free_reduce()
    res = bounded_search(gens, target, SearchBudget(max_depth=2), engine=engine)
    assert res.found
    assert res.witness == [0]
    assert res.method == "search+group-eq"


def test_bounded_search_empty_target():
    res = bounded_search([W(AB, "ab")], Word(AB, ()), SearchBudget(max_depth=3))
    assert res.found and res.witness == []


def test_bounded_search_random_roundtrip():
    rng = random.Random(31)
    gens = [W(AB, t) for t in ["ab", "bA", "aa"]]
    for _ in range(40):
        n = rng.randint(1, 5)
        picks = [rng.randrange(len(gens)) for _ in range(n)]
        target = Word(AB, ())
        for i in picks:
            target = target * gens[i]
        res = bounded_search(gens, target, SearchBudget(max_depth=5))
        assert res.found
        prod = Word(AB, ())
        for i in res.witness:
            prod = prod * gens[i]
        assert prod == target


def test_free_image_graded_pullback():
    from submon.presentations import prefix_generators, s2_retraction

    pres, gens = prefix_generators(2, True)
    f = s2_retraction()
    cert = free_image_graded(pres, f, gens)
    assert cert is not None
    assert cert.kind == "code"
    assert cert.data["stretch"] == 3
    assert cert.budget == DistortionBudget(3, 0)
    assert cert.budget.bound(4) == 12


def test_free_image_graded_killed_generator():
    from submon.words import GroupHom
    from submon.presentations import surface_presentation

    pres = surface_presentation(2)
    collapse = GroupHom.from_dict(
        pres.alphabet, Alphabet(["x"]), {"a": "x", "d": "x'"})
    assert not collapse(pres.relator)
    gens = [pres.word("b"), pres.word("a")]
    assert free_image_graded(pres, collapse, gens) is None
