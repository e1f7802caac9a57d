import pytest
from hypothesis import given, strategies as st

from resolvedk.chargroup import (
    ChainSections,
    Character,
    SectionSystem,
    SubgroupDatum,
    chain_sections,
    compare_sections,
    edge_restriction,
    fiber_support,
    kernel_lattice,
    offset_section,
    section,
    section_from_splitting,
)
from resolvedk.fgab import AbHom, FgAbGroup


Z = FgAbGroup.free(1)
Z2 = FgAbGroup.free(2)
C2 = FgAbGroup(0, (2,))
TRIV = FgAbGroup.free(0)


def mod2_datum():
    return SubgroupDatum(AbHom(Z, C2, [[1]]))


def slope_datum():
    # r(x, y) = 2x + 3y onto Z
    return SubgroupDatum(AbHom(Z2, Z, [[2, 3]]))


def test_character_arithmetic():
    a = Character(C2, (5,))
    b = Character(C2, (1,))
    assert a == b
    assert (a + b).is_zero()
    assert -a == a
    with pytest.raises(ValueError):
        a + Character(Z, (1,))


def test_kernel_lattice_mod2():
    datum = mod2_datum()
    (gen,) = kernel_lattice(datum)
    assert gen.coords == (2,)
    assert datum.in_kernel(Character(Z, (-4,)))
    assert not datum.in_kernel(Character(Z, (3,)))


def test_kernel_coordinates_roundtrip():
    datum = slope_datum()
    assert datum.kernel_rank == 1
    v = datum.kernel_basis[0]
    assert tuple(datum.restriction.apply(v.coords)) == (0,)
    coeffs = datum.kernel_coordinates(v.scale(-3))
    assert datum.kernel_element(coeffs) == v.scale(-3)
    with pytest.raises(ValueError):
        datum.kernel_coordinates(Character(Z2, (1, 0)))


def test_rejects_non_surjective():
    with pytest.raises(ValueError, match="not surjective"):
        SubgroupDatum(AbHom(Z, Z, [[2]]))


def test_rejects_torsion_kernel():
    proj = AbHom(FgAbGroup(1, (2,)), Z, [[1, 0]])
    with pytest.raises(ValueError, match="torsion"):
        SubgroupDatum(proj)


def test_rejects_kernel_outside_free_part():
    # r(x, t) = x + t in Z/2: kernel is generated by (1, 1), which is free
    # as a group but leans on the torsion coordinate.
    amb = FgAbGroup(1, (2,))
    r = AbHom(amb, C2, [[1, 1]])
    with pytest.raises(ValueError, match="free part"):
        SubgroupDatum(r)


def test_supplied_kernel_basis_checked():
    r = AbHom(Z2, Z, [[2, 3]])
    datum = SubgroupDatum(r, kernel_basis=[(-3, 2)])
    assert datum.kernel_basis[0].coords == (-3, 2)
    with pytest.raises(ValueError, match="does not span"):
        SubgroupDatum(r, kernel_basis=[(6, -4)])
    with pytest.raises(ValueError, match="kernel rank"):
        SubgroupDatum(r, kernel_basis=[(-3, 2), (3, -2)])


def test_canonical_section_mod2():
    datum = mod2_datum()
    sec = section(datum, [(0,), (1,)])
    assert sec(Character(C2, (0,))).coords == (0,)
    assert sec(Character(C2, (1,))).coords == (1,)
    # No homomorphic splitting of Z -> Z/2 exists, and that is decided.
    assert sec.homomorphic is False
    # (2,) reduces to (0,), which is tabulated
    assert sec(Character(C2, (2,))).coords == (0,)


def test_canonical_section_slope():
    datum = slope_datum()
    sec = section(datum, [Character(Z, (0,)), Character(Z, (1,))])
    assert sec(Character(Z, (1,))).coords == (-1, 1)
    assert sec(Character(Z, (0,))).coords == (0, 0)
    assert sec.homomorphic is True
    with pytest.raises(ValueError, match="outside the tabulated"):
        sec(Character(Z, (5,)))


def test_canonical_section_slope_breaks_additivity_on_larger_support():
    datum = slope_datum()
    sec = section(datum, [Character(Z, (k,)) for k in range(3)])
    # tau(1) + tau(1) = (-2, 2) but tau(2) = (1, 0): canonical lifts need
    # not be additive even when splittings exist.
    assert sec(Character(Z, (2,))).coords == (1, 0)
    assert sec.homomorphic is False


def test_section_from_splitting():
    datum = slope_datum()
    split = AbHom(Z, Z2, [[-1], [1]])
    sec = section_from_splitting(datum, split, [Character(Z, (k,)) for k in range(-2, 3)])
    assert sec.homomorphic is True
    assert sec(Character(Z, (2,))).coords == (-2, 2)
    bad = AbHom(Z, Z2, [[1], [0]])
    with pytest.raises(ValueError, match="not a splitting"):
        section_from_splitting(datum, bad, [])


def test_offset_and_compare_sections():
    datum = mod2_datum()
    base = section(datum, [(0,), (1,)])
    moved = offset_section(base, {Character(C2, (1,)): (1,)})
    assert moved(Character(C2, (1,))).coords == (3,)
    diff = compare_sections(base, moved)
    assert diff[Character(C2, (1,))].coords == (2,)
    assert diff[Character(C2, (0,))].is_zero()


def test_offset_section_rejects_unknown_support():
    datum = slope_datum()
    base = section(datum, [Character(Z, (0,))])
    with pytest.raises(ValueError, match="outside the section support"):
        offset_section(base, {Character(Z, (7,)): (1,)})


def test_compare_sections_support_mismatch():
    datum = mod2_datum()
    a = section(datum, [(0,), (1,)])
    b = section(datum, [(0,)])
    with pytest.raises(ValueError, match="different supports"):
        compare_sections(a, b)


def test_decompose():
    datum = mod2_datum()
    sec = section(datum, [(0,), (1,)])
    b, h = sec.decompose(Character(Z, (5,)))
    assert b.coords == (1,)
    assert h.coords == (4,)
    assert datum.in_kernel(h)


def test_section_table_validated():
    datum = mod2_datum()
    with pytest.raises(ValueError, match="not a lift"):
        SectionSystem(datum, {Character(C2, (1,)): Character(Z, (2,))})


def test_fiber_support_partitions():
    edge = AbHom(Z, C2, [[1]])
    support = [Character(Z, (k,)) for k in (-1, 0, 1, 2)]
    fibers = fiber_support(edge, support)
    assert [c.coords for c in fibers[Character(C2, (0,))]] == [(0,), (2,)]
    assert [c.coords for c in fibers[Character(C2, (1,))]] == [(-1,), (1,)]
    total = sum(len(v) for v in fibers.values())
    assert total == len(support)


def test_edge_restriction_mod2():
    full = SubgroupDatum(AbHom(Z, Z, [[1]]))      # whole-group stabilizer
    half = SubgroupDatum(AbHom(Z, C2, [[1]]))     # order-two stabilizer
    edge = edge_restriction(half, full)
    assert edge.domain == Z and edge.codomain == C2
    assert tuple(edge.apply((1,))) == (1,)
    with pytest.raises(ValueError, match="not nested"):
        edge_restriction(full, half)


def test_chain_sections_compose():
    trivial = SubgroupDatum(AbHom(Z, TRIV, []))
    half = SubgroupDatum(AbHom(Z, C2, [[1]]))
    full = SubgroupDatum(AbHom(Z, Z, [[1]]))
    chain = chain_sections(
        [trivial, half, full],
        [
            [Character(TRIV, ())],
            [Character(C2, (0,)), Character(C2, (1,))],
            [Character(Z, (k,)) for k in range(3)],
        ],
    )
    assert isinstance(chain, ChainSections)
    assert chain.verify()
    # one-step lifts land where the next level expects them
    one = chain.lift(1, Character(C2, (1,)))
    assert one.coords == (1,)
    # composite two-step lift of the trivial character
    top = chain.composite(0, 2, Character(TRIV, ()))
    assert top.coords == (0,)
    # ambient lifts are stepwise-consistent by construction
    assert chain.to_ambient(1, Character(C2, (1,))).coords == (1,)
    assert chain.to_ambient(0, Character(TRIV, ())).coords == (0,)


def test_chain_sections_needs_matching_lengths():
    half = SubgroupDatum(AbHom(Z, C2, [[1]]))
    with pytest.raises(ValueError, match="one support per chain level"):
        chain_sections([half], [])


@given(st.integers(-20, 20), st.integers(-20, 20))
def test_canonical_representative_is_coset_invariant(x, y):
    datum = slope_datum()
    b = Character(Z, (2 * x + 3 * y,))
    rep = datum.canonical_representative(b)
    assert datum.restrict(rep) == b
    # shifting b's preimage by kernel elements cannot change the canonical rep
    shifted = Character(Z2, (x + 3, y - 2))
    assert datum.restrict(shifted) == b
    again = datum.canonical_representative(datum.restrict(shifted))
    assert again == rep
