import itertools
from fractions import Fraction

import numpy as np
import pytest

from coxfold import exact, kernels
from coxfold.affine import (
    INDUCED_NAMES,
    STANDARD_NAMES,
    BorderedCartan,
    ExtensionError,
    affine_root,
    axis_constraint,
    axis_data,
    classify,
    decompose_affine_root,
    extend_affine_by_one,
    fibonacci_rescale,
    galois_conjugate_extension,
    induce,
    induced_root_under_automorphism,
    is_kac_moody_extension,
    lift_symmetric,
    lift_transposed,
    named_extension,
    search_single_extensions,
    symmetric_extension,
    symmetrise,
    transpose,
)
from coxfold.coxeter import GroupId, cartan_matrix, diagram_automorphisms, highest_root
from coxfold.golden import TAU, parse_golden, tau_pow
from coxfold.projection import project, projection_map


def G(s):
    return parse_golden(s)


def rows(*r):
    return tuple(tuple(G(x) for x in row.split()) for row in r)


# -- single-node search ---------------------------------------------------------


def test_search_finds_exactly_the_standard_extensions():
    found = {g: [(h.extension.name, h.orbit_size) for h in search_single_extensions(g, with_orbits=True)] for g in ("A4", "D6", "E8")}
    assert found == {"A4": [("A4=", 1)], "D6": [("D6<", 1), ("D6=", 1), ("D6>", 1)], "E8": [("E8=", 1)]}


@pytest.mark.parametrize("base", ["A4", "D6"])
def test_search_is_stable_beyond_the_bound(base):
    # no solution has an entry in 5..6: bound 4 already sees them all
    assert search_single_extensions(base, 4) == search_single_extensions(base, 6)


def test_search_matches_brute_force_on_a4():
    a = np.array([[int(x.rational_part) for x in r] for r in cartan_matrix("A4").entries], dtype=np.int64)
    options = [(0, 0)] + [(-p, -q) for p in range(1, 5) for q in range(1, 5)]
    cands = list(itertools.product(options, repeat=4))
    mats = np.zeros((len(cands), 5, 5), dtype=np.int64)
    for k, c in enumerate(cands):
        mats[k, 0, 0] = 2
        mats[k, 0, 1:] = [p for p, _ in c]
        mats[k, 1:, 0] = [q for _, q in c]
        mats[k, 1:, 1:] = a
    dets = kernels.det_batch(mats, impl=kernels.backends()["python"])
    brute = set()
    for c, d in zip(cands, dets):
        if d == 0 and any(p for p, _ in c):
            brute.add((tuple(p for p, _ in c), tuple(q for _, q in c)))
    from coxfold.affine import _border_search

    dfs = set(_border_search(a.tolist(), 4, require_nonzero=True))
    assert dfs == brute
    # the two automorphic attachments of A4= are the only solutions
    assert brute == {((-1, 0, 0, -1), (-1, 0, 0, -1))}


@pytest.mark.parametrize(
    "name,coeffs",
    [
        ("A4=", "1 1 1 1"),
        ("D6<", "1 1 1 1 1/2 1/2"),
        ("D6=", "1 2 2 2 1 1"),
        ("D6>", "2 2 2 2 1 1"),
        ("E8=", "2 3 4 5 6 4 2 3"),
    ],
)
def test_affine_root_decompositions(name, coeffs):
    assert decompose_affine_root(named_extension(name)).coords == tuple(G(c) for c in coeffs.split())


def test_standard_matrices():
    assert named_extension("D6<").full.entries == rows(
        "2 -2 0 0 0 0 0", "-1 2 -1 0 0 0 0", "0 -1 2 -1 0 0 0", "0 0 -1 2 -1 0 0",
        "0 0 0 -1 2 -1 -1", "0 0 0 0 -1 2 0", "0 0 0 0 -1 0 2",
    )
    assert named_extension("A4=").full.entries == rows(
        "2 -1 0 0 -1", "-1 2 -1 0 0", "0 -1 2 -1 0", "0 0 -1 2 -1", "-1 0 0 -1 2"
    )
    e8 = named_extension("E8=")
    assert e8.v == e8.w and e8.support() == (0,)
    for n in STANDARD_NAMES:
        assert is_kac_moody_extension(named_extension(n)).ok


def test_extending_affine_matrices_gives_only_disconnected_nodes():
    for n in ("A4=", "D6="):
        assert extend_affine_by_one(named_extension(n)) == [((0,) * (named_extension(n).rank + 1),) * 2]


# -- induced extensions -------------------------------------------------------------

INDUCED = {
    "H4=": ("2 tau-2 0 0 0", "-1 2 -1 0 0", "0 -1 2 -1 0", "0 0 -1 2 -tau", "0 0 0 -tau 2"),
    "H3=": ("2 0 tau-2 0", "0 2 -1 0", "-1 -1 2 -tau", "0 0 -tau 2"),
    "H3<": ("2 4/5*(tau-3) 0 0", "-1 2 -1 0", "0 -1 2 -tau", "0 0 -tau 2"),
    "H3>": ("2 2/5*(tau-3) 0 0", "-2 2 -1 0", "0 -1 2 -tau", "0 0 -tau 2"),
    "H2=": ("2 tau-2 tau-2", "-1 2 -tau", "-1 -tau 2"),
}


@pytest.mark.parametrize("name", INDUCED)
def test_induced_matrices(name):
    ext = named_extension(name)
    assert ext.full.entries == rows(*INDUCED[name])
    assert ext.is_affine
    assert galois_conjugate_extension(ext).is_affine
    bar = named_extension("Hbar" + name[1:])
    assert bar.full.entries == ext.full.conj().entries
    assert bar.conjugate and bar.is_affine


def test_e8_projected_affine_root():
    root = affine_root(named_extension("H4="))
    assert (-root).coords == (G("2+2*tau"), G("3+4*tau"), G("4+6*tau"), G("3+5*tau"))
    bar = affine_root(named_extension("Hbar4="))
    assert (-bar).coords == tuple(c.conj() for c in (-root).coords)


@pytest.mark.parametrize("name", INDUCED_NAMES)
def test_kac_moody_conditions(name):
    check = is_kac_moody_extension(named_extension(name))
    assert check.ok, check.failures
    if name.endswith(("<", ">")):
        assert "entries in Q[tau]" in check.flags
    else:
        assert check.ring == "Z[tau]"


def test_kac_moody_rejections():
    assert not is_kac_moody_extension(rows("2 1", "1 2"))
    bad = is_kac_moody_extension(rows("2 -1 0", "0 2 -1", "-1 -1 2"))
    assert not bad.signs and any("zero pattern" in f for f in bad.failures)
    with pytest.raises(ExtensionError):
        BorderedCartan.make("A4", (-1, 0, 0, 0), (0, 0, 0, -1))


def test_induce_requires_matching_map():
    with pytest.raises(ExtensionError):
        induce(named_extension("A4="), projection_map("E8"))


@pytest.mark.parametrize("name", STANDARD_NAMES)
def test_induced_root_invariant_under_automorphisms(name):
    ext = named_extension(name)
    perms = diagram_automorphisms(ext.full)
    assert len(perms) >= 1
    for sub in ("par", "perp"):
        pmap = projection_map(ext.base, sub)
        ref = project(pmap, affine_root(ext))
        for p in perms:
            assert induced_root_under_automorphism(ext, p, pmap) == ref


def test_extended_automorphism_groups():
    counts = {n: len(diagram_automorphisms(named_extension(n).full)) for n in STANDARD_NAMES}
    assert counts == {"A4=": 10, "D6<": 2, "D6=": 8, "D6>": 2, "E8=": 1}


# -- Fibonacci classification -------------------------------------------------------

TABLE = {
    "H4=": ("2-tau", (1, -1, 1, -1), ("1", "1"), "tau-2 0 0 0", "-1 0 0 0"),
    "H3=": ("2-tau", (1, -1, 1, -1), ("1", "1"), "0 tau-2 0", "0 -1 0"),
    "H3<": ("4/5*(3-tau)", (1, -2, 1, -1), ("4/5", "1"), "4/5*(tau-3) 0 0", "-1 0 0"),
    "H3>": ("4/5*(3-tau)", (1, -2, 1, -1), ("2/5", "2"), "2/5*(tau-3) 0 0", "-2 0 0"),
    "H2=": ("2-tau", (1, -1, 1, -1), ("1", "1"), "tau-2 tau-2", "-1 -1"),
}


@pytest.mark.parametrize("name", TABLE)
def test_classification_table(name):
    xy, ref, mult, v, w = TABLE[name]
    ext = named_extension(name)
    rec = classify(ext)
    assert rec.xy == G(xy)
    assert rec.reference == ref
    assert rec.k == -1
    assert rec.multipliers == tuple(Fraction(m) for m in mult)
    assert ext.v == tuple(G(x) for x in v.split())
    assert ext.w == tuple(G(x) for x in w.split())
    assert rec.xy == axis_constraint(ext.base, rec.axis)


@pytest.mark.parametrize(
    "name,length,axis",
    [
        ("H4=", "tau", "twofold"), ("H3=", "tau", "twofold"), ("H2=", "tau", "twofold"),
        ("H3<", "1/2", "fivefold"), ("H3>", "1", "fivefold"),
        ("Hbar4=", "tau-1", "twofold"), ("Hbar3<", "(tau-1)/2", "fivefold"), ("Hbar3>", "tau-1", "fivefold"),
    ],
)
def test_translation_lengths(name, length, axis):
    rec = classify(named_extension(name))
    assert rec.translation_length == G(length)
    assert rec.axis == axis


def test_conjugate_records():
    for n in INDUCED_NAMES[:5]:
        a, b = classify(named_extension(n)), classify(named_extension("Hbar" + n[1:]))
        assert b.conjugate and b.x == a.x.conj() and b.y == a.y.conj()
        assert (b.quadruplet, b.k, b.multipliers) == (a.quadruplet, a.k, a.multipliers)


@pytest.mark.parametrize("name", INDUCED_NAMES[:5])
@pytest.mark.parametrize("steps", [-3, -1, 1, 2])
def test_rescale_moves_along_the_family(name, steps):
    rec = classify(named_extension(name))
    moved = fibonacci_rescale(rec, steps)
    assert moved.xy == rec.xy
    assert moved.k == rec.k - steps
    assert moved.x == rec.x * tau_pow(-steps) and moved.y == rec.y * tau_pow(steps)
    back = fibonacci_rescale(moved, -steps)
    assert (back.x, back.y, back.k) == (rec.x, rec.y, rec.k)


def test_transposes():
    t = classify(transpose(named_extension("H4=")))
    assert t.quadruplet == (-1, 0, -2, 1) and t.k == 1
    assert t.xy == classify(named_extension("H4=")).xy
    assert t.translation_length == TAU - 1
    t3 = classify(transpose(named_extension("H3<")))
    assert t3.reference == (1, -1, 1, -2) and t3.k == 1 and t3.multipliers == (1, Fraction(4, 5))


def test_symmetric_extensions_have_unit_length():
    for g in ("H2", "H3", "H4"):
        ext = symmetric_extension(g)
        assert ext.v == ext.w and ext.is_affine
        assert classify(ext).translation_length == 1
        assert affine_root(ext) == -highest_root(g)


def test_axis_data():
    h3 = axis_data("H3")
    assert set(h3) == {"twofold", "threefold", "fivefold"}
    assert h3["fivefold"].norm2 == 2 + TAU and h3["threefold"].norm2 == 3
    assert axis_constraint("H3", "threefold") == G("4/3*(2-tau)")
    assert set(axis_data("H2")) == {"twofold"} and axis_data("H2")["twofold"].positions == (0, 1)


def test_named_extension_spellings():
    assert named_extension("h3<").name == "H3<"
    assert named_extension("H̄3=").name == "Hbar3="
    assert named_extension("hbar2=").name == "Hbar2="
    with pytest.raises(KeyError) as err:
        named_extension("H5=")
    assert "A4=" in str(err.value)


# -- symmetrisation and lifts --------------------------------------------------------


def test_symmetrise_induced():
    for n in INDUCED_NAMES:
        for side in ("left", "right"):
            s = symmetrise(named_extension(n), side=side)
            assert s.exists and all(d.sign() > 0 for d in s.D)
            a = named_extension(n).full.entries
            size = len(a)
            for i in range(size):
                for j in range(size):
                    lhs = s.D[i] * s.S[i][j] if side == "left" else s.S[i][j] * s.D[j]
                    assert lhs == a[i][j]
            assert exact.is_symmetric(s.S)
            # D is never rational here; S leaves Z[tau] only for the < case
            assert not s.rational
    assert symmetrise(named_extension("H4=")).D[0] == 2 - TAU
    assert not symmetrise(named_extension("H3<")).S_in_ztau
    assert symmetrise(named_extension("H4=")).S_in_ztau


def test_symmetrise_failures():
    assert not symmetrise(rows("2 -1 0", "0 2 -1", "-1 -1 2")).exists
    # inconsistent cycle: a triangle with asymmetric products
    s = symmetrise(rows("2 -1 -1", "-2 2 -1", "-1 -1 2"))
    assert not s.exists and "cycle" in s.reason
    with pytest.raises(ValueError):
        symmetrise(rows("2"), side="middle")


def test_lifts_of_symmetric_extensions():
    expect = {"H4": "1 0 0 0 0 0 -1 0", "H3": "0 1 0 -1 0 0", "H2": "1 -1 -1 1"}
    for g, v in expect.items():
        m = lift_symmetric(g)
        vec = tuple(G(x) for x in v.split())
        assert m.entries[0][1:] == vec and tuple(r[0] for r in m.entries[1:]) == vec
        assert m.is_symmetric() and "nonstandard: positive entries" in m.notes


@pytest.mark.parametrize(
    "name,v,ratio",
    [
        ("H4=", "-1 0 0 0 0 0 1/2 0", "1/2"),
        ("H3<", "-1 0 0 0 0 1/3", "5/12"),
        ("H3>", "-2 0 0 0 0 2/3", "5/3"),
        ("H3=", "0 -1 0 1/2 0 0", "1/2"),
        ("H2=", "-1 1/2 1/2 -1", "1/2"),
    ],
)
def test_lifts_of_transposes(name, v, ratio):
    m = lift_transposed(name)
    vec = tuple(G(x) for x in v.split())
    assert m.entries[0][1:] == vec
    assert tuple(G(ratio) * r[0] for r in m.entries[1:]) == vec
    assert m.det().is_zero()


def test_sltp():
    s = symmetrise(lift_transposed("H4="), side="right")
    assert s.exists and s.S[0][0] == 1
    vec = tuple(G(x) for x in "-1 0 0 0 0 0 1/2 0".split())
    assert s.S[0][1:] == vec and tuple(r[0] for r in s.S[1:]) == vec
    assert tuple(tuple(r[1:]) for r in s.S[1:]) == cartan_matrix("E8").entries
