"""Delocalized model: exponential twists, assembly, pruning sequences, Chern."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resolvedk import deloc
from resolvedk.action import ChernData, ResolvedAction, WindowError, WindowRule
from resolvedk.basespace import ChainMap, CochainComplex, FaceMaps, KData, KPair, NodeSpaceData
from resolvedk.chargroup import Character, SubgroupDatum, offset_section, section
from resolvedk.deloc import (
    TwistedFormSector,
    assemble_complex,
    augmented_pullback_forms,
    canonicalize_form,
    ch_of_character,
    ch_operator,
    chern_character,
    compare_ranks,
    corner_forms_factorization,
    deloc_cohomology,
    face_restriction_forms,
    les_of_pruning,
    validate_chern_data,
    window_stabilization,
)
from resolvedk.fgab import AbHom, FgAbGroup
from resolvedk.fixtures import (
    product_trivial,
    projective_plane,
    random_action,
    sphere_rotation,
    sphere_rotation_speed,
)
from resolvedk.itspace import IsotropyTree, pruning_sequence
from resolvedk.ktheory import rational_global_k
from resolvedk.ratmat import RationalMatrix

Z = FgAbGroup.free(1)
TRIV = FgAbGroup.free(0)


def counting_oracle(m):
    """Even dimension of the rotation sphere at window radius m.

    A compatible tuple is a pair of integer tables on the two pole windows
    (2m+1 entries each) with equal total sums; the interval part is the
    shared constant, already determined by either sum.
    """
    return 2 * (2 * m + 1) - 1


def plane_root():
    sphere = projective_plane()
    return sphere.tree.nodes["0"], sphere.spaces["0"]


def free_circle_action(bundles=None, chern=None, expected=None):
    """One free node modelling a circle orbit: dims (1, 1), zero differential."""
    datum = SubgroupDatum(AbHom(Z, TRIV, []))
    circle = CochainComplex((1, 1))
    space = NodeSpaceData(
        circle,
        [ChainMap.zero(circle, circle, degree=2)],
        KData.trivial_shifts(Z, Z, AbHom.identity(Z), 1),
    )
    tree = IsotropyTree({"n": datum}, [])
    return ResolvedAction(
        tree, {"n": space}, {}, {"n": WindowRule.full()},
        bundles=bundles, chern=chern, expected=expected,
    )


def fixed_point_action(window_rule):
    """One point with full isotropy."""
    datum = SubgroupDatum(AbHom.identity(Z))
    pt = CochainComplex.point()
    space = NodeSpaceData(pt, [], KData.trivial_shifts(Z, TRIV, AbHom.identity(Z), 0))
    tree = IsotropyTree({"n": datum}, [])
    return ResolvedAction(tree, {"n": space}, {}, {"n": window_rule})


def equal_isotropy_pair(deep_rule):
    """Two fully fixed points with an identity edge between them."""
    whole = SubgroupDatum(AbHom.identity(Z))
    pt = CochainComplex.point()
    space = NodeSpaceData(pt, [], KData.trivial_shifts(Z, TRIV, AbHom.identity(Z), 0))
    kid = KPair(AbHom.identity(Z), AbHom.identity(TRIV))
    face = FaceMaps(space, ChainMap.identity(pt), ChainMap.identity(pt), kid, kid)
    tree = IsotropyTree({"a": whole, "b": whole}, [("a", "b")])
    return ResolvedAction(
        tree,
        {"a": space, "b": space},
        {("a", "b"): face},
        {"a": WindowRule.ball(1), "b": deep_rule},
    )


# -- character exponentials --------------------------------------------------------


def test_ch_identity_when_shifts_vanish():
    sphere = sphere_rotation()
    datum, space = sphere.tree.nodes["0"], sphere.spaces["0"]
    for k in (-2, 0, 5):
        assert ch_of_character((k,), datum, space) == RationalMatrix.identity(3)


def test_ch_single_nilpotent_step():
    datum, space = plane_root()
    for k in (1, 2, -3):
        expect = RationalMatrix([[1, 0], [k, 1]])
        assert ch_of_character((k,), datum, space) == expect


def test_ch_is_multiplicative():
    datum, space = plane_root()
    two, three = ch_of_character((2,), datum, space), ch_of_character((3,), datum, space)
    assert two @ three == ch_of_character((5,), datum, space)
    inv = ch_of_character((-2,), datum, space)
    assert two @ inv == RationalMatrix.identity(2)


def test_ch_requires_kernel_character():
    sphere = sphere_rotation()
    with pytest.raises(ValueError):
        ch_of_character((1,), sphere.tree.nodes["N"], sphere.spaces["N"])


def test_exp_rejects_non_nilpotent():
    with pytest.raises(ValueError, match="nilpotent"):
        deloc._exp_nilpotent(RationalMatrix.identity(2))


def test_ch_operator_coefficient_count():
    _, space = plane_root()
    with pytest.raises(ValueError, match="coefficient"):
        ch_operator(space.shifts, (1, 2), 2)


# -- canonical form sectors --------------------------------------------------------


def test_canonicalize_form_additive_when_untwisted():
    sphere = sphere_rotation()
    datum, space = sphere.tree.nodes["0"], sphere.spaces["0"]
    v = canonicalize_form({5: (1, 2, 0), 0: (1, 0, 0)}, datum, space)
    assert v.table == {Character(Z, (0,)): (1 + 1, 2, 0)}


def test_canonicalize_form_applies_nilpotent_twist():
    datum, space = plane_root()
    v = canonicalize_form({3: (1, 2)}, datum, space)
    assert v.table == {Character(Z, (0,)): (Fraction(1), Fraction(5))}
    again = canonicalize_form(v.table, datum, space)
    assert again == v


def test_canonicalize_form_zero_drop_and_errors():
    datum, space = plane_root()
    assert canonicalize_form({2: (0, 0)}, datum, space).table == {}
    with pytest.raises(ValueError, match="ambient"):
        canonicalize_form({Character(FgAbGroup(0, (2,)), (1,)): (1, 0)}, datum, space)
    with pytest.raises(ValueError, match="length"):
        canonicalize_form({0: (1, 0, 0)}, datum, space)


def test_canonicalize_form_with_offset_section():
    datum, space = plane_root()
    base = section(datum, [Character(TRIV, ())])
    moved = offset_section(base, {Character(TRIV, ()): (2,)})
    v = canonicalize_form({3: (1, 0)}, datum, space, section=moved)
    assert v.table == {Character(Z, (2,)): (Fraction(1), Fraction(1))}


@settings(max_examples=40)
@given(
    entries=st.dictionaries(
        st.integers(-3, 3),
        st.tuples(st.integers(-4, 4), st.integers(-4, 4)),
        max_size=4,
    )
)
def test_canonicalize_form_idempotent(entries):
    datum, space = plane_root()
    v = canonicalize_form(entries, datum, space)
    assert canonicalize_form(v.table, datum, space) == v
    for ghat in v.support():
        assert ghat == datum.canonical_representative(datum.restrict(ghat))


# -- face restriction and pullback of forms -----------------------------------------


def test_face_restriction_forms_evaluates():
    sphere = sphere_rotation()
    datum, space = sphere.tree.nodes["0"], sphere.spaces["0"]
    v = TwistedFormSector("0", datum, space, {Character(Z, (0,)): (4, 7, 1)})
    north = face_restriction_forms(sphere.faces[("0", "N")], v)
    south = face_restriction_forms(sphere.faces[("0", "S")], v)
    assert north.table == {Character(Z, (0,)): (Fraction(4),)}
    assert south.table == {Character(Z, (0,)): (Fraction(7),)}


def test_augmented_pullback_forms_twists_by_exponential():
    plane = projective_plane()
    fm = plane.faces[("0", "p2")]
    edge = plane.tree.edge_restriction("0", "p2")
    root_datum = plane.tree.nodes["0"]
    deep_datum = plane.tree.nodes["p2"]
    for g in (2, -1):
        v = TwistedFormSector("p2", deep_datum, plane.spaces["p2"],
                              {Character(Z, (g,)): (5,)})
        out = augmented_pullback_forms(fm, root_datum, edge, v)
        assert out.table == {Character(Z, (0,)): (Fraction(5), Fraction(5 * g))}


def test_augmented_pullback_forms_sums_over_fiber():
    sphere = sphere_rotation()
    fm = sphere.faces[("0", "N")]
    edge = sphere.tree.edge_restriction("0", "N")
    v = TwistedFormSector(
        "N", sphere.tree.nodes["N"], sphere.spaces["N"],
        {Character(Z, (-1,)): (2,), Character(Z, (0,)): (3,), Character(Z, (1,)): (4,)},
    )
    out = augmented_pullback_forms(fm, sphere.tree.nodes["0"], edge, v)
    assert out.table == {Character(Z, (0,)): (Fraction(9),)}


def test_plain_pullback_on_equal_isotropy_edge():
    act = equal_isotropy_pair(WindowRule.ball(1))
    fm = act.faces[("a", "b")]
    edge = act.tree.edge_restriction("a", "b")
    v = TwistedFormSector("b", act.tree.nodes["b"], act.spaces["b"],
                          {Character(Z, (1,)): (6,)})
    out = augmented_pullback_forms(fm, act.tree.nodes["a"], edge, v)
    assert out.table == {Character(Z, (1,)): (Fraction(6),)}


def test_pullback_forms_commute_with_differential():
    sphere = sphere_rotation()
    fm = sphere.faces[("0", "S")]
    edge = sphere.tree.edge_restriction("0", "S")
    v = TwistedFormSector("S", sphere.tree.nodes["S"], sphere.spaces["S"],
                          {Character(Z, (1,)): (3,)})
    direct = augmented_pullback_forms(fm, sphere.tree.nodes["0"], edge, v.apply_d())
    other = augmented_pullback_forms(fm, sphere.tree.nodes["0"], edge, v).apply_d()
    assert direct == other


def test_corner_forms_factorization_on_plane():
    plane = projective_plane()
    for chain in sorted(plane.corners):
        rep = corner_forms_factorization(plane, chain, radius=1)
        assert rep.ok, rep.failures()


# -- assembling the global complex ---------------------------------------------------


def test_single_free_node_is_the_node_complex():
    act = free_circle_action()
    asm = assemble_complex(act)
    (sec,) = asm.sectors.values()
    assert sec.total == 2
    assert sec.constraint.nrows == 0
    dims = deloc_cohomology(asm)
    assert (dims.even, dims.odd) == (1, 1)


def test_fixed_point_single_window_character():
    act = fixed_point_action(WindowRule.explicit([(5,)]))
    dims = deloc_cohomology(assemble_complex(act))
    assert (dims.even, dims.odd) == (1, 0)


@pytest.mark.parametrize("m", [0, 1, 2])
def test_sphere_dimensions_match_counting_oracle(m):
    sphere = sphere_rotation()
    dims = deloc_cohomology(assemble_complex(sphere, radius=m))
    assert dims.even == counting_oracle(m) == 4 * m + 1
    assert dims.odd == 0
    declared = sphere.expected["deloc_dims_by_radius"][str(m)]
    assert [dims.even, dims.odd] == declared


def test_sphere_relative_both_poles():
    sphere = sphere_rotation()
    asm = assemble_complex(sphere, prune=("N", "S"), radius=1)
    (sec,) = asm.sectors.values()
    # interval forms vanishing at both endpoints
    assert sec.basis(0).ncols == 0
    assert sec.basis(1).ncols == 1
    dims = deloc_cohomology(asm)
    assert (dims.even, dims.odd) == (0, 1)


def test_sphere_relative_one_pole():
    sphere = sphere_rotation()
    dims = deloc_cohomology(assemble_complex(sphere, prune=("N",), radius=1))
    assert (dims.even, dims.odd) == (2, 0)


@pytest.mark.parametrize("m", [0, 1, 2])
def test_plane_dimensions(m):
    plane = projective_plane()
    dims = deloc_cohomology(assemble_complex(plane, radius=m))
    declared = plane.expected["deloc_dims_by_radius"][str(m)]
    assert [dims.even, dims.odd] == declared
    assert dims.even == (1 if m == 0 else 6 * m)
    assert dims.odd == 0


@pytest.mark.parametrize("n", [2, 3])
def test_speed_n_multiplies_dimensions(n):
    base = deloc_cohomology(assemble_complex(sphere_rotation(), radius=1))
    fast = deloc_cohomology(assemble_complex(sphere_rotation_speed(n), radius=1))
    assert (fast.even, fast.odd) == (n * base.even, n * base.odd)
    # split evenly across the root sectors
    assert sorted(fast.sectors.values()) == [(4 + 1, 0)] * n


def test_product_doubles_every_sector():
    prod = product_trivial((2,))
    dims = deloc_cohomology(assemble_complex(prod, radius=1))
    assert (dims.even, dims.odd) == (10, 0)
    assert sorted(dims.sectors.values()) == [(5, 0), (5, 0)]


def test_assemble_rejects_bad_prunes():
    sphere = sphere_rotation()
    with pytest.raises(ValueError, match="unknown"):
        assemble_complex(sphere, prune=("X",))
    with pytest.raises(ValueError):
        assemble_complex(sphere, prune=("0",))  # poles would lose their root


def test_assemble_names_unsaturated_edge():
    act = equal_isotropy_pair(WindowRule.ball(1))
    act.window_rules["a"] = WindowRule.explicit([(0,)])
    with pytest.raises(WindowError, match="a<b"):
        assemble_complex(act)


def test_assemble_rejects_non_chain_map_faces():
    interval = CochainComplex((2, 1), [[[-1, 1]]])
    trivial = SubgroupDatum(AbHom(Z, TRIV, []))
    whole = SubgroupDatum(AbHom.identity(Z))
    tree = IsotropyTree({"a": trivial, "b": whole}, [("a", "b")])
    root = NodeSpaceData(
        interval,
        [ChainMap.zero(interval, interval, degree=2)],
        KData.trivial_shifts(Z, TRIV, AbHom.identity(Z), 1),
    )
    pt = CochainComplex.point()
    deep = NodeSpaceData(pt, [], KData.trivial_shifts(Z, TRIV, AbHom.identity(Z), 0))
    face_space = NodeSpaceData(
        interval,
        [ChainMap.zero(interval, interval, degree=2)],
        KData.trivial_shifts(Z, TRIV, AbHom.identity(Z), 1),
    )
    kid = KPair(AbHom.identity(Z), AbHom.identity(TRIV))
    crooked = ChainMap(interval, interval, [[1, 0, 0], [0, 2, 0], [0, 0, 1]])
    lift_pt = ChainMap(pt, interval, [[1], [1], [0]])
    face = FaceMaps(face_space, crooked, lift_pt, kid, kid)
    act = ResolvedAction(
        tree, {"a": root, "b": deep}, {("a", "b"): face},
        {"a": WindowRule.full(), "b": WindowRule.ball(1)},
    )
    with pytest.raises(ValueError, match="chain map"):
        assemble_complex(act)


def test_assembled_differential_squares_to_zero_and_preserves_constraints():
    for act, radius in ((sphere_rotation(), 2), (projective_plane(), 1)):
        asm = assemble_complex(act, radius=radius)
        for sec in asm.sectors.values():
            assert (sec.diff @ sec.diff).is_zero()
            for parity in (0, 1):
                image = sec.constraint @ (sec.diff @ sec.basis(parity))
                assert image.is_zero()


def test_membership_failure_names_the_face():
    sphere = sphere_rotation()
    asm = assemble_complex(sphere, radius=0)
    (sec,) = asm.sectors.values()
    vec = [0] * sec.total
    s0, _ = sec.spans[("0", Character(TRIV, ()))]
    vec[s0] = 1
    assert "face 0<N" in sec.membership_failure(vec)
    assert sec.membership_failure([0] * sec.total) is None


def test_assembly_dimensions_independent_of_sections():
    sphere = sphere_rotation()
    windows = sphere.windows(2)
    secs = dict(sphere.sections(windows))
    secs["0"] = offset_section(secs["0"], {Character(TRIV, ()): (3,)})
    base = deloc_cohomology(assemble_complex(sphere, radius=2))
    moved = deloc_cohomology(assemble_complex(sphere, radius=2, sections=secs))
    assert (base.even, base.odd) == (moved.even, moved.odd)

    plane = projective_plane()
    pw = plane.windows(1)
    psecs = dict(plane.sections(pw))
    psecs["s"] = offset_section(
        psecs["s"], {b: (1,) for b in psecs["s"].table}
    )
    first = deloc_cohomology(assemble_complex(plane, radius=1))
    second = deloc_cohomology(assemble_complex(plane, radius=1, sections=psecs))
    assert (first.even, first.odd) == (second.even, second.odd)


# -- pruning long exact sequences ----------------------------------------------------


def test_sphere_pruning_steps_are_exact():
    sphere = sphere_rotation()
    steps = pruning_sequence(sphere.tree)
    for m in (1, 2):
        for idx in range(len(steps) - 1):
            kept = steps[idx].kept
            (alpha,) = steps[idx + 1].kept - kept
            les = les_of_pruning(sphere, kept, alpha, radius=m)
            assert les.report.ok, les.report.failures()
            assert les.instance.labels == deloc.LES_LABELS
            assert les.instance.alternating_sum() == 0


def test_les_dimensions_match_direct_assemblies():
    sphere = sphere_rotation()
    les = les_of_pruning(sphere, {"0"}, "N", radius=1)
    sub = deloc_cohomology(assemble_complex(sphere, prune=("N", "S"), radius=1))
    tot = deloc_cohomology(assemble_complex(sphere, prune=("S",), radius=1))
    assert les.instance.dims[0] == sub.even and les.instance.dims[3] == sub.odd
    assert les.instance.dims[1] == tot.even and les.instance.dims[4] == tot.odd
    # the quotient term carries the full pole block here
    assert les.instance.dims[2] == 3 and les.instance.dims[5] == 0


def test_les_degenerates_when_added_window_is_empty():
    act = equal_isotropy_pair(WindowRule.explicit(()))
    les = les_of_pruning(act, {"a"}, "b")
    assert les.report.ok
    assert les.instance.dims[2] == 0 and les.instance.dims[5] == 0
    assert les.instance.dims[0] == les.instance.dims[1]


def test_les_rejects_invalid_steps():
    sphere = sphere_rotation()
    with pytest.raises(ValueError):
        les_of_pruning(sphere, {"0", "N"}, "N")  # already kept
    with pytest.raises(ValueError):
        les_of_pruning(sphere, frozenset(), "N")  # root missing below


def test_plane_pruning_steps_are_exact():
    plane = projective_plane()
    steps = pruning_sequence(plane.tree)
    for idx in range(len(steps) - 1):
        kept = steps[idx].kept
        (alpha,) = steps[idx + 1].kept - kept
        les = les_of_pruning(plane, kept, alpha, radius=1)
        assert les.report.ok, les.report.failures()


@pytest.mark.parametrize("seed", range(12))
def test_random_actions_pruning_exactness(seed):
    act = random_action(seed)
    steps = pruning_sequence(act.tree)
    for idx in range(len(steps) - 1):
        kept = steps[idx].kept
        (alpha,) = steps[idx + 1].kept - kept
        les = les_of_pruning(act, kept, alpha, radius=1)
        assert les.report.ok, (seed, alpha, les.report.failures())


# -- Chern characters -----------------------------------------------------------------


def test_fixture_chern_data_is_valid():
    assert validate_chern_data(sphere_rotation()).ok
    assert validate_chern_data(projective_plane()).ok


def test_chern_data_validation_catches_twist_violation():
    datum = SubgroupDatum(AbHom(Z, TRIV, []))
    pt = CochainComplex.point()
    flip = AbHom(Z, Z, [[-1]])
    space = NodeSpaceData(
        pt,
        [ChainMap.zero(pt, pt, degree=2)],
        KData(Z, TRIV, [flip], [AbHom.identity(TRIV)], AbHom.identity(Z)),
    )
    act = ResolvedAction(
        IsotropyTree({"n": datum}, []), {"n": space}, {}, {"n": WindowRule.full()},
        chern=ChernData({"n": [(1,)]}),
    )
    rep = validate_chern_data(act)
    assert not rep.ok
    assert any("exponential twists" in name for name, _ in rep.failures())


def test_chern_data_validation_catches_open_or_torsion_reps():
    interval = CochainComplex((2, 1), [[[-1, 1]]])
    datum = SubgroupDatum(AbHom(Z, TRIV, []))
    space = NodeSpaceData(
        interval,
        [ChainMap.zero(interval, interval, degree=2)],
        KData.trivial_shifts(Z, TRIV, AbHom.identity(Z), 1),
    )
    act = ResolvedAction(
        IsotropyTree({"n": datum}, []), {"n": space}, {}, {"n": WindowRule.full()},
        chern=ChernData({"n": [(1, 0, 0)]}),
    )
    rep = validate_chern_data(act)
    assert any("closed" in name for name, ok in rep.failures())

    torsion_k = FgAbGroup(1, (2,))
    space2 = NodeSpaceData(
        CochainComplex.point(),
        [],
        KData.trivial_shifts(torsion_k, TRIV, AbHom(torsion_k, Z, [[1, 0]]), 0),
    )
    act2 = ResolvedAction(
        IsotropyTree({"n": SubgroupDatum(AbHom.identity(Z))}, []),
        {"n": space2}, {}, {"n": WindowRule.explicit([(0,)])},
        chern=ChernData({"n": [(1,), (1,)]}),
    )
    rep2 = validate_chern_data(act2)
    assert any("torsion" in name for name, _ in rep2.failures())

    act3 = ResolvedAction(
        IsotropyTree({"n": datum}, []), {"n": space}, {}, {"n": WindowRule.full()},
        chern=ChernData({}),
    )
    assert not validate_chern_data(act3).ok


def test_sphere_chern_cocycle_values():
    sphere = sphere_rotation()
    cc = chern_character(sphere, "poles", radius=3)
    # pole multiplicities (2, 1) and the rank-3 constant on the interval
    assert cc.node_value("0", Character(TRIV, ())) == (3, 3, 0)
    assert cc.node_value("N", Character(Z, (0,))) == (2,)
    assert cc.node_value("N", Character(Z, (3,))) == (1,)
    assert cc.node_value("N", Character(Z, (1,))) == (0,)
    assert cc.node_value("S", Character(Z, (0,))) == (3,)
    assert cc.node_value("S", Character(Z, (2,))) == (0,)


def test_chern_requires_window_covering_support():
    sphere = sphere_rotation()
    with pytest.raises(WindowError, match="outside the window"):
        chern_character(sphere, "poles", radius=1)


def test_chern_unknown_bundle():
    with pytest.raises(ValueError, match="no bundle named"):
        chern_character(sphere_rotation(), "nope", radius=3)


def test_plane_chern_cocycle():
    plane = projective_plane()
    cc = chern_character(plane, "tautological", radius=1)
    assert cc.node_value("0", Character(TRIV, ())) == (2, 1)
    c2 = plane.tree.nodes["s"].target
    assert cc.node_value("s", Character(c2, (0,))) == (1,)
    assert cc.node_value("s", Character(c2, (1,))) == (1,)
    for pole in ("p1", "p2", "p3"):
        assert cc.node_value(pole, Character(Z, (0,))) == (1,)
        assert cc.node_value(pole, Character(Z, (-1,))) == (0,)


def test_trivial_rank_one_bundle_is_the_constant_cocycle():
    act = free_circle_action(
        bundles={"unit": {"n": {(0,): (1,)}}},
        chern=ChernData({"n": [(1, 0)]}),
    )
    cc = chern_character(act, "unit")
    (vec,) = cc.vectors.values()
    assert vec == (1, 0)


def test_chern_value_independent_of_sections():
    sphere = sphere_rotation()
    windows = sphere.windows(3)
    secs = dict(sphere.sections(windows))
    secs["0"] = offset_section(secs["0"], {Character(TRIV, ()): (2,)})
    plain = chern_character(sphere, "poles", radius=3)
    moved = chern_character(sphere, "poles", radius=3, sections=secs)
    assert plain.vectors == moved.vectors


# -- comparisons and scans -------------------------------------------------------------


def test_compare_ranks_sphere():
    rep = compare_ranks(sphere_rotation(), radius=1)
    assert rep.ok, rep.failures()


@pytest.mark.parametrize("m", [0, 1, 2])
def test_compare_ranks_plane(m):
    rep = compare_ranks(projective_plane(), radius=m)
    assert rep.ok, rep.failures()


def test_compare_ranks_flags_wrong_expectations():
    sphere = sphere_rotation()
    doctored = ResolvedAction(
        sphere.tree, sphere.spaces, sphere.faces, sphere.window_rules,
        bundles=sphere.bundles, chern=sphere.chern,
        expected={"deloc_dims_by_radius": {"1": [4, 0]}},
    )
    rep = compare_ranks(doctored, radius=1)
    assert not rep.ok
    assert any("declared" in name for name, _ in rep.failures())


def test_global_rational_k_agrees_with_assembly():
    sphere = sphere_rotation()
    for m in (0, 1, 2):
        g = rational_global_k(sphere, radius=m)
        assert (g.even, g.odd) == (4 * m + 1, 0)
        assert g.checks.ok


def test_window_scan_shows_linear_growth_without_stabilization():
    scan = window_stabilization(sphere_rotation(), radii=(0, 1, 2))
    assert scan.rows == ((0, 1, 0), (1, 5, 0), (2, 9, 0))
    assert scan.stabilized is False


def test_window_scan_stabilizes_on_finite_duals():
    act = free_circle_action()
    scan = window_stabilization(act, radii=(0, 1, 2), support_bound=0)
    assert scan.rows == ((0, 1, 1), (1, 1, 1), (2, 1, 1))
    assert scan.stabilized is True


def test_window_scan_empty_radii():
    scan = window_stabilization(sphere_rotation(), radii=())
    assert scan.rows == ()
    assert scan.stabilized is None
