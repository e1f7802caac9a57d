"""Pontryagin-dual bookkeeping: subgroups given by dual surjections.

A closed subgroup B of the acting group G never appears directly; it is
presented by the restriction surjection r : G-hat -> B-hat.  The characters
of G/B form the kernel of r ("kernel lattice").  Splittings of r need not
exist as homomorphisms (Z/2 inside U(1) is the standard failure), so
sections are tabulated set-theoretic maps with a canonical
coset-representative rule; everything downstream is built to be independent
of the choice of section.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .fgab import AbHom, FgAbGroup, IntegerMatrix, Lattice, solve_int

DualGroup = FgAbGroup


class Character:
    """Element of a dual group, stored in canonical coordinates."""

    __slots__ = ("group", "coords")

    def __init__(self, group: FgAbGroup, coords: Sequence[int]):
        self.group = group
        self.coords = group.reduce(coords)

    def __add__(self, other: "Character") -> "Character":
        self._check(other)
        return Character(self.group, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: "Character") -> "Character":
        self._check(other)
        return Character(self.group, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> "Character":
        return Character(self.group, [-a for a in self.coords])

    def scale(self, n: int) -> "Character":
        return Character(self.group, [n * a for a in self.coords])

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coords)

    def _check(self, other: "Character") -> None:
        if self.group != other.group:
            raise ValueError("characters of different groups")

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Character)
            and self.group == other.group
            and self.coords == other.coords
        )

    def __hash__(self) -> int:
        return hash((self.group, self.coords))

    def __lt__(self, other: "Character") -> bool:
        self._check(other)
        return self.coords < other.coords

    def __repr__(self) -> str:
        return f"Character{self.coords}"


class SubgroupDatum:
    """A closed subgroup presented by its dual surjection.

    Validates on construction: the restriction must be surjective, and its
    kernel must be a free lattice sitting inside the free coordinates of the
    ambient dual (torsion kernel directions carry no shift bookkeeping and
    are rejected).  The stored kernel basis fixes the order that shift
    operators refer to; if none is supplied, the canonical Hermite basis is
    used.
    """

    __slots__ = ("ambient", "restriction", "kernel_basis", "lattice")

    def __init__(self, restriction: AbHom, kernel_basis: Optional[Sequence[Sequence[int]]] = None):
        ambient = restriction.domain
        if not restriction.is_surjective():
            raise ValueError("restriction to the subgroup dual is not surjective")
        ker_group, incl = restriction.kernel()
        if ker_group.torsion:
            raise ValueError(
                "kernel of the restriction has torsion; a free kernel lattice is required"
            )
        computed = [incl.matrix.column(j) for j in range(incl.matrix.ncols)]
        for col in computed:
            if any(col[ambient.free_rank:]):
                raise ValueError(
                    "kernel lattice is not contained in the free part of the ambient dual"
                )
        lattice = Lattice(ambient.ngens, computed)
        if kernel_basis is None:
            basis = lattice.basis()
        else:
            basis = [tuple(int(x) for x in b) for b in kernel_basis]
            if len(basis) != lattice.rank:
                raise ValueError(
                    f"kernel basis has {len(basis)} elements, kernel rank is {lattice.rank}"
                )
            if Lattice(ambient.ngens, basis) != lattice:
                raise ValueError("supplied kernel basis does not span the kernel lattice")
        self.ambient = ambient
        self.restriction = restriction
        self.kernel_basis = tuple(Character(ambient, b) for b in basis)
        self.lattice = lattice

    @property
    def target(self) -> FgAbGroup:
        return self.restriction.codomain

    @property
    def kernel_rank(self) -> int:
        return len(self.kernel_basis)

    def restrict(self, ghat: Character) -> Character:
        return Character(self.target, self.restriction.apply(ghat.coords))

    def in_kernel(self, ghat: Character) -> bool:
        return self.lattice.contains(ghat.coords)

    def kernel_coordinates(self, ghat: Character) -> Tuple[int, ...]:
        """Integer coordinates of a kernel element in the stored basis."""
        mat = IntegerMatrix.from_columns(
            [list(b.coords) for b in self.kernel_basis], nrows=self.ambient.ngens
        )
        sol = solve_int(mat, list(ghat.coords))
        if sol is None:
            raise ValueError(f"{ghat!r} is not in the kernel lattice")
        return sol

    def kernel_element(self, coeffs: Sequence[int]) -> Character:
        if len(coeffs) != self.kernel_rank:
            raise ValueError("coefficient length mismatch")
        acc = Character(self.ambient, self.ambient.zero())
        for c, b in zip(coeffs, self.kernel_basis):
            acc = acc + b.scale(c)
        return acc

    def canonical_representative(self, b: Character) -> Character:
        """The canonical lift of a target character to the ambient dual."""
        if b.group != self.target:
            raise ValueError("character is not in the subgroup dual")
        return Character(self.ambient, self.restriction.preimage_representative(b.coords))

    def __repr__(self) -> str:
        return f"SubgroupDatum({self.ambient} -> {self.target})"


class SectionSystem:
    """A tabulated set-theoretic section of a subgroup restriction.

    `homomorphic` records whether the table came from a homomorphic
    splitting (True), provably did not (False), or was not checked (None).
    """

    __slots__ = ("datum", "table", "homomorphic")

    def __init__(
        self,
        datum: SubgroupDatum,
        table: Mapping[Character, Character],
        homomorphic: Optional[bool] = None,
    ):
        for b, ghat in table.items():
            if b.group != datum.target or ghat.group != datum.ambient:
                raise ValueError("section table has mismatched groups")
            if datum.restrict(ghat) != b:
                raise ValueError(f"table entry for {b!r} is not a lift (got {ghat!r})")
        self.datum = datum
        self.table = dict(table)
        self.homomorphic = homomorphic

    @property
    def support(self) -> Tuple[Character, ...]:
        return tuple(sorted(self.table, key=lambda c: c.coords))

    def __call__(self, b: Character) -> Character:
        try:
            return self.table[b]
        except KeyError:
            raise ValueError(f"character {b!r} is outside the tabulated section support")

    def decompose(self, ghat: Character) -> Tuple[Character, Character]:
        """Split an ambient character as (target, kernel offset from the section)."""
        b = self.datum.restrict(ghat)
        return b, ghat - self(b)

    def __repr__(self) -> str:
        entries = ", ".join(f"{b.coords}->{g.coords}" for b, g in sorted(
            self.table.items(), key=lambda kv: kv[0].coords))
        return f"SectionSystem({entries})"


def kernel_lattice(datum: SubgroupDatum) -> List[Character]:
    """Basis of the kernel of the restriction (characters of G/B)."""
    return list(datum.kernel_basis)


def _table_additive(table: Mapping[Character, Character]) -> bool:
    """Whether tabulated lifts respect addition wherever it stays tabulated."""
    for b1, g1 in table.items():
        if b1.is_zero() and not g1.is_zero():
            return False
        for b2, g2 in table.items():
            s = b1 + b2
            if s in table and table[s] != g1 + g2:
                return False
    return True


def section(datum: SubgroupDatum, support: Iterable) -> SectionSystem:
    """Canonical section over a finite support set of target characters.

    The `homomorphic` flag is False when no homomorphic splitting exists at
    all (that absence is decided exactly), and otherwise records whether the
    tabulated entries are additive wherever sums stay inside the support.
    """
    table: Dict[Character, Character] = {}
    for b in support:
        if not isinstance(b, Character):
            b = Character(datum.target, b)
        table[b] = datum.canonical_representative(b)
    split = datum.restriction.try_split()
    homomorphic = False if split is None else _table_additive(table)
    return SectionSystem(datum, table, homomorphic)


def section_from_splitting(datum: SubgroupDatum, split: AbHom, support: Iterable) -> SectionSystem:
    """Tabulate a homomorphic splitting over a support."""
    if (datum.restriction @ split) != AbHom.identity(datum.target):
        raise ValueError("supplied hom is not a splitting of the restriction")
    table = {}
    for b in support:
        if not isinstance(b, Character):
            b = Character(datum.target, b)
        table[b] = Character(datum.ambient, split.apply(b.coords))
    return SectionSystem(datum, table, True)


def offset_section(base: SectionSystem, offsets: Mapping[Character, Sequence[int]]) -> SectionSystem:
    """New section differing from `base` by kernel elements.

    `offsets` maps target characters to integer coefficient vectors in the
    kernel basis; unlisted characters keep their base lift.
    """
    datum = base.datum
    table = dict(base.table)
    for b, coeffs in offsets.items():
        if b not in table:
            raise ValueError(f"offset for {b!r} outside the section support")
        table[b] = table[b] + datum.kernel_element(coeffs)
    return SectionSystem(datum, table, None)


def compare_sections(first: SectionSystem, second: SectionSystem) -> Dict[Character, Character]:
    """Pointwise difference second - first, verified to lie in the kernel."""
    if first.datum is not second.datum and (
        first.datum.restriction != second.datum.restriction
    ):
        raise ValueError("sections belong to different subgroup data")
    if set(first.table) != set(second.table):
        raise ValueError("sections are tabulated over different supports")
    diff = {}
    for b in first.table:
        mu = second.table[b] - first.table[b]
        if not first.datum.in_kernel(mu):
            raise ValueError(f"difference at {b!r} is not in the kernel lattice")
        diff[b] = mu
    return diff


def fiber_support(
    edge: AbHom, support: Iterable[Character]
) -> Dict[Character, Tuple[Character, ...]]:
    """Partition a finite support by the value of an edge restriction.

    `edge` maps the deeper subgroup dual onto the shallower one; the result
    maps each hit target character to the tuple of support characters above
    it (input order preserved, keys sorted).
    """
    fibers: Dict[Character, List[Character]] = {}
    for b in support:
        if b.group != edge.domain:
            raise ValueError("support character not in the edge domain")
        target = Character(edge.codomain, edge.apply(b.coords))
        fibers.setdefault(target, []).append(b)
    return {k: tuple(fibers[k]) for k in sorted(fibers, key=lambda c: c.coords)}


def edge_restriction(shallow: SubgroupDatum, deep: SubgroupDatum) -> AbHom:
    """The unique map e with e o r_deep = r_shallow (needs nested kernels)."""
    if shallow.ambient != deep.ambient:
        raise ValueError("subgroup data have different ambient duals")
    if not deep.lattice.is_sublattice_of(shallow.lattice):
        raise ValueError("kernel lattices are not nested (deep inside shallow)")
    cols = []
    for g in deep.target.generators():
        x = deep.restriction.preimage_representative(g)
        cols.append(shallow.restriction.apply(x))
    edge = AbHom.from_columns(deep.target, shallow.target, cols)
    if (edge @ deep.restriction) != shallow.restriction:
        raise ValueError("edge restriction is not well-defined")
    return edge


class ChainSections:
    """Stepwise-consistent section tables along a chain of subgroups.

    Levels are ordered shallow to deep (kernel lattices decreasing).  Edge
    lifts are canonical per consecutive edge; composites are *defined* as
    products of the one-step lifts, which makes the composition identity
    hold on the tabulated supports by construction -- `verify` re-checks
    both that identity and the section property of every composite.
    """

    __slots__ = ("data", "edge_maps", "edge_tables", "ambient_tables")

    def __init__(self, data, edge_maps, edge_tables, ambient_tables):
        self.data = tuple(data)
        self.edge_maps = tuple(edge_maps)
        self.edge_tables = tuple(edge_tables)
        self.ambient_tables = tuple(ambient_tables)

    def lift(self, level: int, b: Character) -> Character:
        """One-step lift from level to level + 1."""
        try:
            return self.edge_tables[level][b]
        except KeyError:
            raise ValueError(f"{b!r} is not tabulated at chain level {level}")

    def composite(self, start: int, stop: int, b: Character) -> Character:
        """Lift from level `start` up to level `stop` by composing steps."""
        if not 0 <= start <= stop < len(self.data):
            raise ValueError("chain levels out of range")
        cur = b
        for lvl in range(start, stop):
            cur = self.lift(lvl, cur)
        return cur

    def to_ambient(self, level: int, b: Character) -> Character:
        try:
            return self.ambient_tables[level][b]
        except KeyError:
            raise ValueError(f"{b!r} is not tabulated at chain level {level}")

    def verify(self) -> bool:
        for lvl, table in enumerate(self.edge_tables):
            edge = self.edge_maps[lvl]
            for b, lifted in table.items():
                if Character(edge.codomain, edge.apply(lifted.coords)) != b:
                    return False
        for lvl, table in enumerate(self.ambient_tables):
            datum = self.data[lvl]
            for b, ghat in table.items():
                if datum.restrict(ghat) != b:
                    return False
                if lvl + 1 < len(self.data) and b in self.edge_tables[lvl]:
                    stepped = self.to_ambient(lvl + 1, self.edge_tables[lvl][b])
                    if stepped != ghat:
                        return False
        return True


def chain_sections(data: Sequence[SubgroupDatum], supports: Sequence[Iterable[Character]]) -> ChainSections:
    """Build stepwise-consistent lifts along a chain of nested subgroups.

    `data` is ordered shallow to deep; `supports[i]` is the finite support
    to tabulate at level i.  Supports are automatically enlarged so that the
    image of each tabulated lift is tabulated at the next level.
    """
    if len(data) != len(supports):
        raise ValueError("one support per chain level required")
    k = len(data)
    edge_maps = [edge_restriction(data[i], data[i + 1]) for i in range(k - 1)]

    needed: List[set] = [set() for _ in range(k)]
    for i in range(k):
        for b in supports[i]:
            if not isinstance(b, Character):
                b = Character(data[i].target, b)
            needed[i].add(b)

    edge_tables: List[Dict[Character, Character]] = []
    for i in range(k - 1):
        table = {}
        for b in sorted(needed[i], key=lambda c: c.coords):
            lifted = Character(
                data[i + 1].target, edge_maps[i].preimage_representative(b.coords)
            )
            table[b] = lifted
            needed[i + 1].add(lifted)
        edge_tables.append(table)

    # Ambient lifts: canonical at the deepest level, stepwise below it.
    ambient_tables: List[Dict[Character, Character]] = [dict() for _ in range(k)]
    for b in sorted(needed[k - 1], key=lambda c: c.coords):
        ambient_tables[k - 1][b] = data[k - 1].canonical_representative(b)
    for i in range(k - 2, -1, -1):
        for b, lifted in edge_tables[i].items():
            ambient_tables[i][b] = ambient_tables[i + 1][lifted]
    return ChainSections(data, edge_maps, edge_tables, ambient_tables)
