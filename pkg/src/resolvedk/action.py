"""The aggregate object tying a whole resolved action together.

A `ResolvedAction` bundles the ambient dual group, the isotropy tree, the
per-node space models, per-face maps, optional corner data, window rules,
and optional reduced-bundle / Chern-representative tables.  It owns the
cross-module consistency checks (everything `validate` on the parts cannot
see alone, like window saturation along edges) and materializes finite
character windows for the computational pipelines.

Windows truncate the finitely supported character direction.  Four rules:

- ``explicit``: a fixed list of characters; refuses resizing.
- ``full``: every character of a finite dual.
- ``ball``: free coordinates bounded by a radius, torsion coordinates full.
- ``residue_ball``: rank-one duals whose characters track a residue mod n;
  the window is {j + n*t : 0 <= j < n, |t| <= radius}, so each residue
  class keeps a symmetric range.  Plain balls are wrong for such nodes:
  the sector over a residue needs the same count for every residue.
"""

from __future__ import annotations

from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .basespace import (
    CornerData,
    FaceMaps,
    NodeSpaceData,
    validate_corner,
    validate_face,
    validate_node,
)
from .chargroup import Character, SectionSystem, section
from .fgab import FgAbGroup
from .itspace import IsotropyTree
from .report import ValidationReport


class WindowError(ValueError):
    """Raised when a window rule cannot be materialized as requested."""


class WindowRule:
    """Recipe for the finite character window of one node."""

    __slots__ = ("kind", "chars", "radius", "modulus")

    KINDS = ("explicit", "full", "ball", "residue_ball")

    def __init__(
        self,
        kind: str,
        chars: Sequence[Sequence[int]] = (),
        radius: int = 0,
        modulus: int = 0,
    ):
        if kind not in self.KINDS:
            raise ValueError(f"unknown window kind {kind!r}")
        if kind == "explicit" and not chars and chars != ():
            raise ValueError("explicit window needs characters")
        if kind in ("ball", "residue_ball") and radius < 0:
            raise ValueError("window radius must be nonnegative")
        if kind == "residue_ball" and modulus < 1:
            raise ValueError("residue window needs a positive modulus")
        self.kind = kind
        self.chars = tuple(tuple(int(x) for x in c) for c in chars)
        self.radius = int(radius)
        self.modulus = int(modulus)

    @classmethod
    def explicit(cls, chars: Sequence[Sequence[int]]) -> "WindowRule":
        return cls("explicit", chars=chars)

    @classmethod
    def full(cls) -> "WindowRule":
        return cls("full")

    @classmethod
    def ball(cls, radius: int) -> "WindowRule":
        return cls("ball", radius=radius)

    @classmethod
    def residue_ball(cls, modulus: int, radius: int) -> "WindowRule":
        return cls("residue_ball", modulus=modulus, radius=radius)

    def materialize(self, group: FgAbGroup, radius: Optional[int] = None) -> List[Character]:
        """Finite character list; `radius` overrides a stored ball radius.

        Full windows are already canonical and ignore the override;
        explicit windows are a fixed commitment and refuse it.
        """
        if self.kind == "explicit":
            if radius is not None:
                raise WindowError("explicit windows cannot be resized")
            return [Character(group, c) for c in self.chars]
        if self.kind == "full":
            if not group.is_finite:
                raise WindowError("full window requested on an infinite dual")
            return [Character(group, c) for c in group.elements()]
        r = self.radius if radius is None else int(radius)
        if r < 0:
            raise WindowError("window radius must be nonnegative")
        if self.kind == "ball":
            out = [[]]
            for _ in range(group.free_rank):
                out = [c + [v] for c in out for v in range(-r, r + 1)]
            for d in group.torsion:
                out = [c + [v] for c in out for v in range(d)]
            return [Character(group, c) for c in out]
        # residue_ball
        if group.free_rank != 1 or group.torsion:
            raise WindowError("residue window requires an infinite cyclic dual")
        n = self.modulus
        return [
            Character(group, (j + n * t,))
            for j in range(n)
            for t in range(-r, r + 1)
        ]

    def __repr__(self) -> str:
        if self.kind == "explicit":
            return f"WindowRule.explicit({list(self.chars)})"
        if self.kind == "full":
            return "WindowRule.full()"
        if self.kind == "ball":
            return f"WindowRule.ball({self.radius})"
        return f"WindowRule.residue_ball({self.modulus}, {self.radius})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, WindowRule) and (
            (self.kind, self.chars, self.radius, self.modulus)
            == (other.kind, other.chars, other.radius, other.modulus)
        )


class ChernData:
    """Even-cochain representatives of the K0 generators per node.

    `reps[node][i]` is a vector in the node complex (total coordinates,
    even slots only) representing the Chern character of the i-th K0
    generator.  Torsion generators must be represented by zero: their
    classes die rationally.
    """

    __slots__ = ("reps",)

    def __init__(self, reps: Mapping[str, Sequence[Sequence]]):
        self.reps = {node: tuple(tuple(v) for v in vecs) for node, vecs in reps.items()}


class ResolvedAction:
    """Validated container for a resolved abelian action."""

    __slots__ = (
        "tree",
        "spaces",
        "faces",
        "corners",
        "window_rules",
        "bundles",
        "chern",
        "notes",
        "expected",
    )

    def __init__(
        self,
        tree: IsotropyTree,
        spaces: Mapping[str, NodeSpaceData],
        faces: Mapping[Tuple[str, str], FaceMaps],
        window_rules: Mapping[str, WindowRule],
        corners: Mapping[Tuple[str, ...], CornerData] = (),
        bundles: Optional[Mapping[str, Mapping[str, Mapping[Tuple[int, ...], Sequence[int]]]]] = None,
        chern: Optional[ChernData] = None,
        notes: Sequence[str] = (),
        expected: Optional[Mapping] = None,
    ):
        self.tree = tree
        self.spaces = dict(spaces)
        self.faces = dict(faces)
        self.corners = dict(corners) if corners else {}
        self.window_rules = dict(window_rules)
        self.bundles = {k: dict(v) for k, v in bundles.items()} if bundles else {}
        self.chern = chern
        self.notes = tuple(notes)
        self.expected = dict(expected) if expected else {}

    @property
    def group(self) -> FgAbGroup:
        """The ambient dual group shared by all nodes."""
        return next(iter(self.tree.nodes.values())).ambient

    # -- windows -------------------------------------------------------------

    def windows(self, radius: Optional[int] = None) -> Dict[str, List[Character]]:
        """Materialize every node window, sorted for determinism."""
        out = {}
        for label in self.tree.nodes:
            rule = self.window_rules.get(label)
            if rule is None:
                raise WindowError(f"no window rule for node {label!r}")
            target = self.tree.nodes[label].target
            out[label] = sorted(rule.materialize(target, radius), key=lambda c: c.coords)
        return out

    def check_window_saturation(
        self, windows: Mapping[str, Sequence[Character]]
    ) -> ValidationReport:
        """Edge restrictions must map deep windows into shallow windows."""
        rep = ValidationReport()
        bad = []
        for a, b in self.tree.comparable_pairs():
            shallow = set(windows[a])
            edge = self.tree.edge_restriction(a, b)
            for ch in windows[b]:
                image = Character(edge.codomain, edge.apply(ch.coords))
                if image not in shallow:
                    bad.append(f"{a}<{b} at {ch.coords}")
                    break
        rep.add(
            "windows saturated under edge restrictions",
            not bad,
            "" if not bad else "unsaturated on " + ", ".join(bad),
        )
        return rep

    def sections(
        self, windows: Mapping[str, Sequence[Character]]
    ) -> Dict[str, SectionSystem]:
        """Canonical section per node over its window."""
        return {
            label: section(self.tree.nodes[label], windows[label])
            for label in self.tree.nodes
        }

    # -- validation ----------------------------------------------------------

    def validate(self, radius: Optional[int] = None) -> ValidationReport:
        rep = ValidationReport()
        rep.merge(self.tree.validate(), prefix="tree: ")

        missing_space = sorted(set(self.tree.nodes) - set(self.spaces))
        extra_space = sorted(set(self.spaces) - set(self.tree.nodes))
        rep.add(
            "space data matches node set",
            not missing_space and not extra_space,
            "; ".join(
                filter(None, [
                    f"missing {missing_space}" if missing_space else "",
                    f"extraneous {extra_space}" if extra_space else "",
                ])
            ),
        )
        missing_face = sorted(set(self.tree.order) - set(self.faces))
        extra_face = sorted(set(self.faces) - set(self.tree.order))
        rep.add(
            "face data matches comparable pairs",
            not missing_face and not extra_face,
            "; ".join(
                filter(None, [
                    f"missing {missing_face}" if missing_face else "",
                    f"extraneous {extra_face}" if extra_face else "",
                ])
            ),
        )
        if not rep.ok:
            return rep

        for label in sorted(self.tree.nodes):
            rep.merge(
                validate_node(
                    self.spaces[label],
                    kernel_rank=self.tree.nodes[label].kernel_rank,
                ),
                prefix=f"node {label}: ",
            )
        for a, b in self.tree.comparable_pairs():
            rep.merge(
                validate_face(
                    self.faces[(a, b)],
                    self.tree.nodes[a],
                    self.tree.nodes[b],
                    self.spaces[a],
                    self.spaces[b],
                ),
                prefix=f"face {a}<{b}: ",
            )

        declared = set(self.tree.corner_chains)
        extra_corners = sorted(set(self.corners) - declared)
        rep.add(
            "corner data only on declared chains",
            not extra_corners,
            "" if not extra_corners else f"undeclared {extra_corners}",
        )
        for chain in sorted(self.corners):
            a, b, g = chain[0], chain[1], chain[2]
            rep.merge(
                validate_corner(
                    self.corners[chain],
                    self.faces[(a, b)],
                    self.faces[(a, g)],
                    self.faces[(b, g)],
                ),
                prefix=f"corner {'<'.join(chain)}: ",
            )

        try:
            windows = self.windows(radius)
        except WindowError as exc:
            rep.add("windows materialize", False, str(exc))
            return rep
        rep.add("windows materialize", True)
        rep.merge(self.check_window_saturation(windows))

        for name, per_node in sorted(self.bundles.items()):
            unknown = sorted(set(per_node) - set(self.tree.nodes))
            rep.add(
                f"bundle {name!r} node labels known",
                not unknown,
                "" if not unknown else f"unknown nodes {unknown}",
            )
            bad_entries = []
            for node, table in per_node.items():
                if node not in self.spaces:
                    continue
                k0 = self.spaces[node].kdata.k0
                for coords, cls in table.items():
                    if len(coords) != self.group.ngens or len(cls) != k0.ngens:
                        bad_entries.append(f"{name}/{node}@{coords}")
            rep.add(
                f"bundle {name!r} entry shapes",
                not bad_entries,
                "" if not bad_entries else "bad " + ", ".join(bad_entries),
            )

        if self.chern is not None:
            missing = sorted(set(self.tree.nodes) - set(self.chern.reps))
            rep.add(
                "Chern representatives cover all nodes",
                not missing,
                "" if not missing else f"missing {missing}",
            )
            bad_shape = []
            for node, vecs in sorted(self.chern.reps.items()):
                if node not in self.spaces:
                    bad_shape.append(f"{node} (unknown node)")
                    continue
                space = self.spaces[node]
                k0 = space.kdata.k0
                if len(vecs) != k0.ngens:
                    bad_shape.append(f"{node} (one vector per K0 generator)")
                    continue
                odd = set(space.complex.parity_slots(1))
                for i, vec in enumerate(vecs):
                    if len(vec) != space.complex.total_dim or any(
                        vec[j] != 0 for j in odd
                    ):
                        bad_shape.append(f"{node}[{i}]")
            rep.add(
                "Chern representatives shaped and even",
                not bad_shape,
                "" if not bad_shape else "bad " + ", ".join(bad_shape),
            )
        return rep

    def require_valid(self, radius: Optional[int] = None) -> None:
        self.validate(radius).raise_if_failed("resolved action validation")
