"""The delocalized cochain model over an isotropy tree.

A global element assigns to every kept node and every window character a
cochain of that node's complex, subject to one compatibility condition per
face: the restriction of the shallow data equals the twisted, fiberwise
summed pullback of the deep data.  Pruned nodes contribute nothing and
force the corresponding restrictions to vanish, which is what makes the
relative complexes of a pruning step literally sub- and quotient complexes.

All linear algebra is exact and rational; the character twists enter
through exponentials of the nilpotent shift operators, so every exponential
is a finite sum.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .action import ResolvedAction, WindowError
from .basespace import ChainMap, NodeSpaceData
from .chargroup import Character, SectionSystem, SubgroupDatum
from .itspace import Pruning, prune_step, pruning_sequence
from .ktheory import SixTermInstance, hexagon_check
from .ratmat import (
    QuotientSpace,
    RationalMatrix,
    nullspace_basis,
    rank,
    rref,
    solve,
)
from .report import ValidationReport

LES_LABELS = (
    "even relative",
    "even total",
    "even quotient",
    "odd relative",
    "odd total",
    "odd quotient",
)


# -- small exact-linear-algebra helpers ----------------------------------------


def _submatrix(mat: RationalMatrix, rows: Sequence[int], cols: Sequence[int]) -> RationalMatrix:
    return RationalMatrix(
        [[mat[i, j] for j in cols] for i in rows], ncols=len(cols)
    )

def _select(vec: Sequence, idx: Sequence[int]) -> Tuple:
    return tuple(vec[i] for i in idx)


def _scatter(vec: Sequence, idx: Sequence[int], total: int) -> Tuple:
    out = [Fraction(0)] * total
    for x, i in zip(vec, idx):
        out[i] = Fraction(x)
    return tuple(out)


def _column_space_basis(mat: RationalMatrix) -> RationalMatrix:
    """Independent columns of `mat` spanning its column space."""
    _, pivots = rref(mat)
    return _submatrix(mat, range(mat.nrows), pivots)


def _exp_nilpotent(m: RationalMatrix) -> RationalMatrix:
    if m.nrows != m.ncols:
        raise ValueError("exponential of a non-square matrix")
    acc = RationalMatrix.identity(m.nrows)
    term = acc
    for k in range(1, m.nrows + 2):
        term = (term @ m) * Fraction(1, k)
        if term.is_zero():
            return acc
        acc = acc + term
    raise ValueError("operator is not nilpotent")


# -- character exponentials and twisted form sectors ---------------------------


def ch_operator(shifts: Sequence[ChainMap], coeffs: Sequence[int], dim: int) -> RationalMatrix:
    """exp of the combined shift operator for integer kernel coordinates."""
    if len(shifts) != len(coeffs):
        raise ValueError("one coefficient per shift operator required")
    total = RationalMatrix.zeros(dim, dim)
    for c, op in zip(coeffs, shifts):
        if c:
            total = total + op.matrix * Fraction(int(c))
    return _exp_nilpotent(total)


def ch_of_character(hhat, datum: SubgroupDatum, space: NodeSpaceData) -> RationalMatrix:
    """Even chain operator of a kernel character: exponential of its shift."""
    if not isinstance(hhat, Character):
        if isinstance(hhat, int):
            hhat = (hhat,)
        hhat = Character(datum.ambient, hhat)
    coords = datum.kernel_coordinates(hhat)
    return ch_operator(space.shifts, coords, space.complex.total_dim)


class TwistedFormSector:
    """Finitely supported table of cochains at one node, canonical form."""

    __slots__ = ("label", "datum", "space", "table")

    def __init__(
        self,
        label: str,
        datum: SubgroupDatum,
        space: NodeSpaceData,
        table: Mapping[Character, Sequence],
    ):
        clean: Dict[Character, Tuple[Fraction, ...]] = {}
        for ghat, vec in table.items():
            vec = tuple(Fraction(x) for x in vec)
            if len(vec) != space.complex.total_dim:
                raise ValueError(f"cochain length mismatch at {ghat!r}")
            if any(vec):
                clean[ghat] = vec
        self.label = label
        self.datum = datum
        self.space = space
        self.table = clean

    def get(self, ghat: Character) -> Tuple[Fraction, ...]:
        return self.table.get(ghat, (Fraction(0),) * self.space.complex.total_dim)

    def support(self) -> List[Character]:
        return sorted(self.table, key=lambda c: c.coords)

    def apply_d(self) -> "TwistedFormSector":
        d = self.space.complex.d
        return TwistedFormSector(
            self.label, self.datum, self.space,
            {g: d.apply(v) for g, v in self.table.items()},
        )

    def map_values(
        self, op: ChainMap, space: NodeSpaceData, label: str = ""
    ) -> "TwistedFormSector":
        return TwistedFormSector(
            label or self.label, self.datum, space,
            {g: op.apply(v) for g, v in self.table.items()},
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TwistedFormSector) and self.table == other.table

    def __repr__(self) -> str:
        entries = ", ".join(
            f"{g.coords}->{tuple(str(x) for x in v)}"
            for g, v in sorted(self.table.items(), key=lambda kv: kv[0].coords)
        )
        return f"TwistedFormSector({self.label}: {entries or '0'})"


def _lift(datum: SubgroupDatum, section: Optional[SectionSystem], b: Character) -> Character:
    if section is None:
        return datum.canonical_representative(b)
    return section(b)


def canonicalize_form(
    raw_table: Mapping,
    datum: SubgroupDatum,
    space: NodeSpaceData,
    section: Optional[SectionSystem] = None,
    label: str = "",
) -> TwistedFormSector:
    """Move form entries onto section representatives.

    An entry v at rep + h is identified with exp(L(h)) v at rep — the same
    orientation as the K-class twisting law, so the Chern character
    intertwines the two canonicalizations.
    """
    dim = space.complex.total_dim
    acc: Dict[Character, List[Fraction]] = {}
    for ghat, vec in raw_table.items():
        if not isinstance(ghat, Character):
            if isinstance(ghat, int):
                ghat = (ghat,)
            ghat = Character(datum.ambient, ghat)
        elif ghat.group != datum.ambient:
            raise ValueError(f"character {ghat!r} is not in the ambient dual")
        b = datum.restrict(ghat)
        rep = _lift(datum, section, b)
        coords = datum.kernel_coordinates(ghat - rep)
        moved = ch_operator(space.shifts, coords, dim).apply(vec)
        if rep in acc:
            acc[rep] = [a + b2 for a, b2 in zip(acc[rep], moved)]
        else:
            acc[rep] = list(moved)
    return TwistedFormSector(label, datum, space, acc)


def face_restriction_forms(face_maps, v: TwistedFormSector, label: str = "") -> TwistedFormSector:
    """Restrict a shallow node's form sector to the face, characterwise."""
    return v.map_values(face_maps.rho, face_maps.face, label or v.label)


def augmented_pullback_forms(
    face_maps,
    shallow_datum: SubgroupDatum,
    edge,
    v: TwistedFormSector,
    shallow_section: Optional[SectionSystem] = None,
    label: str = "",
) -> TwistedFormSector:
    """Pull a deep form sector back to the face over the shallow node.

    Entries are pulled back along the fibration, twisted by the exponential
    of the kernel element connecting the lifts, and summed over each fiber
    of the edge restriction.  Commutes with the differentials.
    """
    face = face_maps.face
    fdim = face.complex.total_dim
    out: Dict[Character, List[Fraction]] = {}
    for ghat, vec in v.table.items():
        b = v.datum.restrict(ghat)
        k = Character(edge.codomain, edge.apply(b.coords))
        rep = _lift(shallow_datum, shallow_section, k)
        coords = shallow_datum.kernel_coordinates(ghat - rep)
        moved = ch_operator(face.shifts, coords, fdim).apply(
            face_maps.pullback.apply(vec)
        )
        if rep in out:
            out[rep] = [a + b2 for a, b2 in zip(out[rep], moved)]
        else:
            out[rep] = list(moved)
    return TwistedFormSector(label or v.label, shallow_datum, face, out)


def corner_forms_factorization(
    action: ResolvedAction, chain: Sequence[str], radius: Optional[int] = None
) -> ValidationReport:
    """Pulling forms back along a composite edge factors through the corner.

    Checked on every basis cochain of the deep node over its whole window:
    restriction-to-corner of the pullback along a<g must agree with the
    corner-level pullback of the pullback along b<g.
    """
    a, b, g = chain
    tree = action.tree
    windows = action.windows(radius)
    corner = action.corners[tuple(chain)]
    fm_ag, fm_bg = action.faces[(a, g)], action.faces[(b, g)]
    edge_ag = tree.edge_restriction(a, g)
    edge_bg = tree.edge_restriction(b, g)
    edge_ab = tree.edge_restriction(a, b)
    datum_a, datum_b, datum_g = tree.nodes[a], tree.nodes[b], tree.nodes[g]
    gdim = action.spaces[g].complex.total_dim
    cdim = corner.corner.total_dim

    rep = ValidationReport()
    mismatch = ""
    for khat_g in windows[g]:
        lift_g = datum_g.canonical_representative(khat_g)
        for i in range(gdim):
            unit = [Fraction(0)] * gdim
            unit[i] = Fraction(1)
            v = TwistedFormSector(g, datum_g, action.spaces[g], {lift_g: unit})
            via_ag = augmented_pullback_forms(fm_ag, datum_a, edge_ag, v)
            path_a = {
                ch: corner.into_ag.apply(vec) for ch, vec in via_ag.table.items()
            }
            via_bg = augmented_pullback_forms(fm_bg, datum_b, edge_bg, v)
            path_b: Dict[Character, List[Fraction]] = {}
            for ghat, vec in via_bg.table.items():
                kb = via_bg.datum.restrict(ghat)
                ka = Character(edge_ab.codomain, edge_ab.apply(kb.coords))
                rep_a = datum_a.canonical_representative(ka)
                coords = datum_a.kernel_coordinates(ghat - rep_a)
                moved = ch_operator(corner.shifts, coords, cdim).apply(
                    corner.pull_bg.apply(vec)
                )
                if rep_a in path_b:
                    path_b[rep_a] = [x + y for x, y in zip(path_b[rep_a], moved)]
                else:
                    path_b[rep_a] = list(moved)
            pa = {ch: tuple(vec) for ch, vec in path_a.items() if any(vec)}
            pb = {ch: tuple(vec) for ch, vec in path_b.items() if any(vec)}
            if pa != pb and not mismatch:
                mismatch = (
                    f"basis cochain {i} at {khat_g.coords}: direct {pa} != factored {pb}"
                )
    rep.add(
        f"corner {'<'.join(chain)} form pullback factorization",
        not mismatch,
        mismatch,
    )
    return rep


# -- the assembled global complex ----------------------------------------------


class TwoPeriodicComplex:
    """A two-periodic subcomplex: parity subspace bases and a differential."""

    __slots__ = ("d", "_bases", "_cocycles", "_boundaries", "_class")

    def __init__(self, d: RationalMatrix, basis_even: RationalMatrix, basis_odd: RationalMatrix):
        self.d = d
        self._bases = (basis_even, basis_odd)
        self._cocycles: List[Optional[RationalMatrix]] = [None, None]
        self._boundaries: List[Optional[RationalMatrix]] = [None, None]
        self._class: List[Optional[Tuple[RationalMatrix, QuotientSpace]]] = [None, None]

    def basis(self, parity: int) -> RationalMatrix:
        return self._bases[parity % 2]

    def dim(self, parity: int) -> int:
        return self.basis(parity).ncols

    def cocycles(self, parity: int) -> RationalMatrix:
        p = parity % 2
        if self._cocycles[p] is None:
            b = self.basis(p)
            null = nullspace_basis(self.d @ b)
            coeff = RationalMatrix.from_columns(null, nrows=b.ncols)
            self._cocycles[p] = b @ coeff
        return self._cocycles[p]

    def boundaries(self, parity: int) -> RationalMatrix:
        p = parity % 2
        if self._boundaries[p] is None:
            self._boundaries[p] = _column_space_basis(self.d @ self.basis(1 - p))
        return self._boundaries[p]

    def h_dim(self, parity: int) -> int:
        return self.cocycles(parity).ncols - self.boundaries(parity).ncols

    def _class_space(self, parity: int) -> Tuple[RationalMatrix, QuotientSpace]:
        p = parity % 2
        if self._class[p] is None:
            z = self.cocycles(p)
            bnd = self.boundaries(p)
            coords = []
            for j in range(bnd.ncols):
                x = solve(z, bnd.column(j))
                if x is None:
                    raise ArithmeticError("boundary escaped the cocycle space")
                coords.append(x)
            sub = RationalMatrix.from_columns(coords, nrows=z.ncols)
            self._class[p] = (z, QuotientSpace(sub))
        return self._class[p]

    def class_coords(self, vec: Sequence, parity: int) -> Tuple[Fraction, ...]:
        """Cohomology-class coordinates of a cocycle."""
        z, qs = self._class_space(parity)
        x = solve(z, vec)
        if x is None:
            raise ArithmeticError("vector is not a cocycle of the subcomplex")
        return qs.project(x)

    def class_representatives(self, parity: int) -> RationalMatrix:
        """One cocycle per cohomology class of a distinguished basis."""
        z, qs = self._class_space(parity % 2)
        cols = [z.apply(qs.lift(unit)) for unit in RationalMatrix.identity(qs.dim).columns()] \
            if qs.dim else []
        return RationalMatrix.from_columns(cols, nrows=z.nrows)


class SectorComplex:
    """One root-character sector of the assembled delocalized complex."""

    __slots__ = (
        "chi", "blocks", "spans", "total", "constraint", "row_origins",
        "diff", "even_idx", "odd_idx", "_two",
    )

    def __init__(self, chi, blocks, spans, total, constraint, row_origins,
                 diff, even_idx, odd_idx):
        self.chi = chi
        self.blocks = blocks        # (label, window char, start, stop)
        self.spans = spans
        self.total = total
        self.constraint = constraint
        self.row_origins = row_origins
        self.diff = diff
        self.even_idx = even_idx
        self.odd_idx = odd_idx
        self._two: Optional[TwoPeriodicComplex] = None

    def parity_indices(self, parity: int) -> List[int]:
        return self.even_idx if parity % 2 == 0 else self.odd_idx

    def basis(self, parity: int) -> RationalMatrix:
        """Basis of the compatible subspace in the given parity, as columns."""
        idx = self.parity_indices(parity)
        restricted = _submatrix(self.constraint, range(self.constraint.nrows), idx)
        cols = [_scatter(v, idx, self.total) for v in nullspace_basis(restricted)]
        return RationalMatrix.from_columns(cols, nrows=self.total)

    @property
    def two_periodic(self) -> TwoPeriodicComplex:
        if self._two is None:
            self._two = TwoPeriodicComplex(self.diff, self.basis(0), self.basis(1))
        return self._two

    def dims(self) -> Tuple[int, int]:
        return self.two_periodic.dim(0), self.two_periodic.dim(1)

    def membership_failure(self, vec: Sequence) -> Optional[str]:
        """None if the vector satisfies every constraint, else a diagnostic."""
        res = self.constraint.apply(vec)
        for i, x in enumerate(res):
            if x != 0:
                for desc, start, stop in self.row_origins:
                    if start <= i < stop:
                        return desc
                return f"constraint row {i}"
        return None


class AssembledComplex:
    """Delocalized complex of a resolved action, split by root sector."""

    __slots__ = ("action", "prune", "kept", "radius", "windows", "sections", "sectors")

    def __init__(self, action, prune, kept, radius, windows, sections, sectors):
        self.action = action
        self.prune = prune
        self.kept = kept
        self.radius = radius
        self.windows = windows
        self.sections = sections
        self.sectors = sectors

    def lift(self, label: str, khat: Character) -> Character:
        section = self.sections.get(label) if self.sections else None
        return _lift(self.action.tree.nodes[label], section, khat)

    def total_dims(self) -> Tuple[int, int]:
        dims = [s.dims() for s in self.sectors.values()]
        return sum(d[0] for d in dims), sum(d[1] for d in dims)


def assemble_complex(
    action: ResolvedAction,
    prune: Sequence[str] = (),
    radius: Optional[int] = None,
    sections: Optional[Mapping[str, SectionSystem]] = None,
) -> AssembledComplex:
    """Build the compatible-tuple complex over the kept subtree.

    Pruned nodes are omitted and their faces contribute pure vanishing
    constraints on the kept side; the result splits as a direct sum over
    the root window characters.
    """
    tree = action.tree
    tree.require_valid()
    prune_set = frozenset(prune)
    unknown = sorted(prune_set - set(tree.nodes))
    if unknown:
        raise ValueError(f"cannot prune unknown nodes {unknown}")
    kept = frozenset(tree.nodes) - prune_set
    Pruning(tree, kept)  # raises unless the kept part is downward-closed

    windows = action.windows(radius)
    sat = action.check_window_saturation(windows)
    if not sat.ok:
        raise WindowError(
            "; ".join(f"{name}: {detail}" for name, detail in sat.failures())
        )
    for pair in sorted(action.faces):
        fm = action.faces[pair]
        if not fm.rho.commutes_with_differentials():
            raise ValueError(f"face {pair[0]}<{pair[1]}: restriction is not a chain map")
        if not fm.pullback.commutes_with_differentials():
            raise ValueError(f"face {pair[0]}<{pair[1]}: pullback is not a chain map")

    root = tree.root
    root_group = tree.nodes[root].target

    def root_image(label: str, khat: Character) -> Character:
        if label == root:
            return khat
        e = tree.edge_restriction(root, label)
        return Character(root_group, e.apply(khat.coords))

    def lift_of(label: str) -> Callable[[Character], Character]:
        section = sections.get(label) if sections else None
        datum = tree.nodes[label]
        return lambda khat: _lift(datum, section, khat)

    sectors = {}
    for chi in windows[root]:
        sectors[chi] = _build_sector(
            action, kept, windows, chi, root_image, lift_of
        )
    return AssembledComplex(
        action, prune_set, kept, radius, windows, dict(sections or {}), sectors
    )


def _build_sector(action, kept, windows, chi, root_image, lift_of) -> SectorComplex:
    tree = action.tree
    blocks = []
    spans = {}
    offset = 0
    for label in sorted(kept):
        dim = action.spaces[label].complex.total_dim
        for khat in windows[label]:
            if root_image(label, khat) != chi:
                continue
            blocks.append((label, khat, offset, offset + dim))
            spans[(label, khat)] = (offset, offset + dim)
            offset += dim
    total = offset

    rows: List[List[Fraction]] = []
    row_origins = []
    for a, b in sorted(tree.comparable_pairs()):
        if a not in kept:
            continue
        fm = action.faces[(a, b)]
        edge = tree.edge_restriction(a, b)
        fdim = fm.face.complex.total_dim
        rho_m = fm.rho.matrix
        datum_a = tree.nodes[a]
        lift_a = lift_of(a)
        lift_b = lift_of(b)
        exp_cache: Dict[Tuple[int, ...], RationalMatrix] = {}
        for khat in windows[a]:
            if (a, khat) not in spans:
                continue
            s0, _ = spans[(a, khat)]
            block = [[Fraction(0)] * total for _ in range(fdim)]
            for i in range(fdim):
                for j in range(rho_m.ncols):
                    block[i][s0 + j] = rho_m[i, j]
            if b in kept:
                rep_a = lift_a(khat)
                for bhat in windows[b]:
                    if edge.apply(bhat.coords) != khat.coords:
                        continue
                    t0, _ = spans[(b, bhat)]
                    coords = datum_a.kernel_coordinates(lift_b(bhat) - rep_a)
                    if coords not in exp_cache:
                        exp_cache[coords] = ch_operator(fm.face.shifts, coords, fdim)
                    m = exp_cache[coords] @ fm.pullback.matrix
                    for i in range(fdim):
                        for j in range(m.ncols):
                            block[i][t0 + j] -= m[i, j]
            start = len(rows)
            rows.extend(block)
            row_origins.append(
                (f"face {a}<{b} at sector {khat.coords}", start, start + fdim)
            )
    constraint = (
        RationalMatrix(rows, ncols=total) if rows else RationalMatrix.zeros(0, total)
    )

    diff_rows = [[Fraction(0)] * total for _ in range(total)]
    even_idx: List[int] = []
    odd_idx: List[int] = []
    for label, khat, s0, _ in blocks:
        cx = action.spaces[label].complex
        d = cx.d
        for i in range(d.nrows):
            for j in range(d.ncols):
                if d[i, j] != 0:
                    diff_rows[s0 + i][s0 + j] = d[i, j]
        even_idx.extend(s0 + i for i in cx.parity_slots(0))
        odd_idx.extend(s0 + i for i in cx.parity_slots(1))
    diff = RationalMatrix(diff_rows, ncols=total) if total else RationalMatrix.zeros(0, 0)

    return SectorComplex(
        chi, tuple(blocks), spans, total, constraint, tuple(row_origins),
        diff, even_idx, odd_idx,
    )


class DelocDims:
    """Even/odd cohomology dimensions, per root sector and total."""

    __slots__ = ("sectors", "even", "odd")

    def __init__(self, sectors: Dict[Character, Tuple[int, int]]):
        self.sectors = sectors
        self.even = sum(e for e, _ in sectors.values())
        self.odd = sum(o for _, o in sectors.values())

    def __repr__(self) -> str:
        return f"DelocDims(even={self.even}, odd={self.odd})"


def deloc_cohomology(assembled: AssembledComplex) -> DelocDims:
    """Exact rational cohomology dimensions of the assembled complex."""
    return DelocDims({
        chi: (sec.two_periodic.h_dim(0), sec.two_periodic.h_dim(1))
        for chi, sec in assembled.sectors.items()
    })


# -- pruning long exact sequences ----------------------------------------------


class PruningLES:
    """Six-term data of one pruning step, with its verification report."""

    __slots__ = ("kept", "alpha", "sector_instances", "instance", "report")

    def __init__(self, kept, alpha, sector_instances, instance, report):
        self.kept = kept
        self.alpha = alpha
        self.sector_instances = sector_instances
        self.instance = instance
        self.report = report

    def __repr__(self) -> str:
        return f"PruningLES(+{self.alpha}, dims={self.instance.dims})"


def les_of_pruning(
    action: ResolvedAction,
    kept,
    alpha: str,
    radius: Optional[int] = None,
    sections: Optional[Mapping[str, SectionSystem]] = None,
) -> PruningLES:
    """Six-term sequence of adding one node to a kept subtree.

    The sub-complex keeps the old nodes, the total complex also keeps
    `alpha`, and the third term is the image of the projection onto the
    alpha sectors with its induced differential.  All six cohomology maps
    (including the connecting ones) are computed explicitly and exactness
    is verified, not assumed.
    """
    tree = action.tree
    bigger = prune_step(tree, kept, alpha)
    kept_small = frozenset(kept.kept if isinstance(kept, Pruning) else kept)
    all_nodes = set(tree.nodes)
    sub = assemble_complex(
        action, prune=all_nodes - kept_small, radius=radius, sections=sections
    )
    total = assemble_complex(
        action, prune=all_nodes - bigger.kept, radius=radius, sections=sections
    )

    report = ValidationReport()
    sector_instances = {}
    for chi in sorted(total.sectors, key=lambda c: c.coords):
        inst, rep = _sector_les(sub.sectors[chi], total.sectors[chi], alpha)
        sector_instances[chi] = inst
        report.merge(rep, prefix=f"sector {chi.coords}: ")

    insts = list(sector_instances.values())
    dims = tuple(sum(i.dims[k] for i in insts) for k in range(6))
    ranks = tuple(sum(i.ranks[k] for i in insts) for k in range(6))
    instance = SixTermInstance(dims, ranks, labels=LES_LABELS)
    return PruningLES(kept_small, alpha, sector_instances, instance, report)


def _sector_les(sa: SectorComplex, sb: SectorComplex, alpha: str):
    # embedding of the sub sector into the total sector, as an index map
    emb: List[int] = []
    for label, khat, s0, s1 in sa.blocks:
        t0, t1 = sb.spans[(label, khat)]
        emb.extend(range(t0, t1))
    # quotient: the alpha components of the total sector
    q_idx: List[int] = []
    for label, khat, s0, s1 in sb.blocks:
        if label == alpha:
            q_idx.extend(range(s0, s1))
    d_alpha = _submatrix(sb.diff, q_idx, q_idx)

    two_a, two_b = sa.two_periodic, sb.two_periodic
    q_images = []
    for p in (0, 1):
        vb = two_b.basis(p)
        q_images.append(_column_space_basis(_submatrix(vb, q_idx, range(vb.ncols))))
    two_q = TwoPeriodicComplex(d_alpha, q_images[0], q_images[1])

    maps = {}
    for p in (0, 1):
        # induced inclusion on cohomology
        ra = two_a.class_representatives(p)
        cols = [
            two_b.class_coords(_scatter(ra.column(j), emb, sb.total), p)
            for j in range(ra.ncols)
        ]
        maps[("incl", p)] = RationalMatrix.from_columns(cols, nrows=two_b.h_dim(p))
        # induced projection on cohomology
        rb = two_b.class_representatives(p)
        cols = [
            two_q.class_coords(_select(rb.column(j), q_idx), p)
            for j in range(rb.ncols)
        ]
        maps[("proj", p)] = RationalMatrix.from_columns(cols, nrows=two_q.h_dim(p))
        # connecting map: lift a quotient cocycle, apply the differential,
        # pull the result back into the sub sector
        rq = two_q.class_representatives(p)
        vb = two_b.basis(p)
        q_of_vb = _submatrix(vb, q_idx, range(vb.ncols))
        cols = []
        for j in range(rq.ncols):
            x = solve(q_of_vb, rq.column(j))
            if x is None:
                raise ArithmeticError("quotient cocycle has no total-space lift")
            lifted = vb.apply(x)
            image = sb.diff.apply(lifted)
            back = _select(image, emb)
            if any(image[i] != 0 for i in q_idx):
                raise ArithmeticError("connecting image does not vanish on the quotient")
            cols.append(two_a.class_coords(back, (p + 1) % 2))
        maps[("conn", p)] = RationalMatrix.from_columns(
            cols, nrows=two_a.h_dim((p + 1) % 2)
        )

    dims = (
        two_a.h_dim(0), two_b.h_dim(0), two_q.h_dim(0),
        two_a.h_dim(1), two_b.h_dim(1), two_q.h_dim(1),
    )
    ranks = (
        rank(maps[("incl", 0)]), rank(maps[("proj", 0)]), rank(maps[("conn", 0)]),
        rank(maps[("incl", 1)]), rank(maps[("proj", 1)]), rank(maps[("conn", 1)]),
    )
    instance = SixTermInstance(dims, ranks, labels=LES_LABELS)

    rep = hexagon_check(instance)
    composites = [
        ("total->quotient->total", maps[("proj", 0)] @ maps[("incl", 0)]),
        ("quotient->connecting (even)", maps[("conn", 0)] @ maps[("proj", 0)]),
        ("connecting->inclusion (even)", maps[("incl", 1)] @ maps[("conn", 0)]),
        ("total->quotient->total (odd)", maps[("proj", 1)] @ maps[("incl", 1)]),
        ("quotient->connecting (odd)", maps[("conn", 1)] @ maps[("proj", 1)]),
        ("connecting->inclusion (odd)", maps[("incl", 0)] @ maps[("conn", 1)]),
    ]
    bad = [name for name, m in composites if not m.is_zero()]
    rep.add(
        "consecutive maps compose to zero",
        not bad,
        "" if not bad else "nonzero: " + ", ".join(bad),
    )
    return instance, rep


# -- Chern characters ------------------------------------------------------------


def validate_chern_data(action: ResolvedAction) -> ValidationReport:
    """Closedness, torsion vanishing, and shift compatibility of Chern data."""
    rep = ValidationReport()
    if action.chern is None:
        rep.add("Chern data present", False, "action carries no Chern data")
        return rep
    for label in sorted(action.tree.nodes):
        space = action.spaces[label]
        kdata = space.kdata
        reps = action.chern.reps.get(label)
        if reps is None or len(reps) != kdata.k0.ngens:
            rep.add(
                f"node {label}: one representative per K0 generator",
                False,
                f"got {0 if reps is None else len(reps)}, need {kdata.k0.ngens}",
            )
            continue
        d = space.complex.d
        not_closed = [j for j, v in enumerate(reps) if any(d.apply(v))]
        rep.add(
            f"node {label}: representatives are closed",
            not not_closed,
            "" if not not_closed else f"generators {not_closed}",
        )
        tors = [
            j for j in range(kdata.k0.free_rank, kdata.k0.ngens)
            if any(Fraction(x) != 0 for x in reps[j])
        ]
        rep.add(
            f"node {label}: torsion classes have zero representative",
            not tors,
            "" if not tors else f"generators {tors}",
        )
        dim = space.complex.total_dim
        c = RationalMatrix.from_columns([list(v) for v in reps], nrows=dim) \
            if reps else RationalMatrix.zeros(dim, 0)
        bad_twists = []
        for i, (sigma, shift) in enumerate(zip(kdata.sigma0, space.shifts)):
            e = _exp_nilpotent(shift.matrix)
            lhs = c @ RationalMatrix.from_integer(sigma.matrix)
            if lhs != e @ c:
                bad_twists.append(i)
        rep.add(
            f"node {label}: shift automorphisms match exponential twists",
            not bad_twists,
            "" if not bad_twists else f"kernel generators {bad_twists}",
        )
    return rep


class ChernCocycle:
    """Closed, compatible tuple representing the Chern character of a bundle."""

    __slots__ = ("assembled", "name", "vectors")

    def __init__(self, assembled: AssembledComplex, name: str, vectors):
        self.assembled = assembled
        self.name = name
        self.vectors = vectors

    def sector_vector(self, chi: Character) -> Tuple[Fraction, ...]:
        return self.vectors[chi]

    def node_value(self, label: str, khat: Character) -> Tuple[Fraction, ...]:
        tree = self.assembled.action.tree
        root = tree.root
        if label == root:
            chi = khat
        else:
            e = tree.edge_restriction(root, label)
            chi = Character(tree.nodes[root].target, e.apply(khat.coords))
        sec = self.assembled.sectors[chi]
        s0, s1 = sec.spans[(label, khat)]
        return self.vectors[chi][s0:s1]


def chern_character(
    action: ResolvedAction,
    name: str,
    prune: Sequence[str] = (),
    radius: Optional[int] = None,
    sections: Optional[Mapping[str, SectionSystem]] = None,
) -> ChernCocycle:
    """Chern character of a named bundle as an element of the assembled complex.

    K-class coordinates are contracted with the node's Chern representatives
    sector by sector; the result is checked to be closed and to satisfy every
    face compatibility, and the offending face is named otherwise.
    """
    from .redbun import canonical_bundle

    validate_chern_data(action).raise_if_failed("Chern data")
    bundles = canonical_bundle(action, name, sections)
    assembled = assemble_complex(action, prune=prune, radius=radius, sections=sections)
    tree = action.tree

    for label in sorted(assembled.kept):
        window_set = set(assembled.windows[label])
        for ghat in bundles[label].table:
            k = tree.nodes[label].restrict(ghat)
            if k not in window_set:
                raise WindowError(
                    f"bundle {name!r} has support at {ghat.coords} on node "
                    f"{label}, outside the window; enlarge the radius"
                )

    vectors = {}
    for chi, sec in assembled.sectors.items():
        vec = [Fraction(0)] * sec.total
        for label, khat, s0, s1 in sec.blocks:
            cls = bundles[label].table.get(assembled.lift(label, khat))
            if cls is None:
                continue
            reps = action.chern.reps[label]
            for coeff, representative in zip(cls, reps):
                if coeff:
                    for i, x in enumerate(representative):
                        vec[s0 + i] += coeff * Fraction(x)
        if any(sec.diff.apply(vec)):
            raise ValueError(
                f"Chern cocycle of {name!r} is not closed in sector {chi.coords}"
            )
        bad = sec.membership_failure(vec)
        if bad is not None:
            raise ValueError(
                f"Chern cocycle of {name!r} breaks compatibility in sector "
                f"{chi.coords}: {bad}"
            )
        vectors[chi] = tuple(vec)
    return ChernCocycle(assembled, name, vectors)


# -- comparisons and scans -------------------------------------------------------


def node_parity_dims(space: NodeSpaceData) -> Tuple[int, int]:
    """Even/odd cohomology of a single node complex.

    This is exactly the delocalized answer of the one-node tree in any
    sector: with no faces there are no constraints.
    """
    per_degree = space.complex.cohomology()
    even = sum(c for k, c in enumerate(per_degree) if k % 2 == 0)
    odd = sum(c for k, c in enumerate(per_degree) if k % 2 == 1)
    return even, odd


def compare_ranks(
    action: ResolvedAction,
    prune: Sequence[str] = (),
    radius: Optional[int] = None,
) -> ValidationReport:
    """Rational rank equality between the K side and the delocalized side.

    Per node: every window sector contributes the free ranks of (K0, K1),
    which must equal the node's even/odd cohomology.  Globally: the
    dimensions must survive every pruning hexagon, and match the action's
    declared expectations when those cover the requested radius.
    """
    from .ktheory import rational_global_k

    rep = ValidationReport()
    for label in sorted(action.tree.nodes):
        kdata = action.spaces[label].kdata
        even, odd = node_parity_dims(action.spaces[label])
        ok = kdata.k0.free_rank == even and kdata.k1.free_rank == odd
        rep.add(
            f"node {label}: K ranks match node cohomology",
            ok,
            "" if ok else
            f"K gives ({kdata.k0.free_rank}, {kdata.k1.free_rank}), "
            f"cohomology gives ({even}, {odd})",
        )
    try:
        global_k = rational_global_k(action, prune=prune, radius=radius)
    except ArithmeticError as exc:
        rep.add("pruning hexagons consistent", False, str(exc))
        return rep
    rep.add("pruning hexagons consistent", True, "")

    expected = (action.expected or {}).get("deloc_dims_by_radius")
    if expected is not None and radius is not None and not prune:
        declared = expected.get(str(radius))
        if declared is not None:
            got = [global_k.even, global_k.odd]
            rep.add(
                f"dimensions at radius {radius} match declared values",
                got == list(declared),
                "" if got == list(declared) else f"computed {got}, declared {list(declared)}",
            )
    return rep


class WindowScan:
    """Dimensions across a sequence of window radii."""

    __slots__ = ("rows", "support_bound", "stabilized")

    def __init__(self, rows, support_bound, stabilized):
        self.rows = rows            # (radius, even, odd)
        self.support_bound = support_bound
        self.stabilized = stabilized

    def __repr__(self) -> str:
        return f"WindowScan(rows={self.rows}, stabilized={self.stabilized})"


def window_stabilization(
    action: ResolvedAction,
    radii: Sequence[int],
    prune: Sequence[str] = (),
    support_bound: Optional[int] = None,
) -> WindowScan:
    """Scan dimensions over growing windows and flag stabilization.

    With a declared support bound, stabilization means all dimensions for
    radii at or past the bound agree; otherwise the last two rows are
    compared.
    """
    rows = []
    for r in radii:
        dims = deloc_cohomology(assemble_complex(action, prune=prune, radius=r))
        rows.append((r, dims.even, dims.odd))
    stabilized: Optional[bool] = None
    if support_bound is not None:
        tail = [(e, o) for r, e, o in rows if r >= support_bound]
        stabilized = len(tail) >= 1 and len(set(tail)) == 1
    elif len(rows) >= 2:
        stabilized = rows[-1][1:] == rows[-2][1:]
    return WindowScan(tuple(rows), support_bound, stabilized)
