"""Exact integer linear algebra and finitely generated abelian groups.

Everything here is arbitrary-precision: matrices are tuples of Python ints,
Smith/Hermite reductions carry their unimodular transforms, and group
homomorphisms are integer matrices acting on chosen generators.  Groups are
kept in invariant-factor form (free rank plus a divisibility chain of torsion
factors); subgroups, kernels, images and cokernels are computed through
integer lattices.

Coordinate convention: a group with free rank f and torsion factors
(d_1 | d_2 | ... | d_t) has f + t generators, free generators first.  An
element is a coordinate tuple with the torsion coordinates reduced into
[0, d_i).
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence, Tuple


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Extended gcd: return (g, s, t) with g = s*a + t*b and g >= 0.

    >>> xgcd(12, 18)
    (6, -1, 1)
    >>> xgcd(0, 0)
    (0, 0, 0)
    """
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


class IntegerMatrix:
    """Immutable integer matrix.

    >>> a = IntegerMatrix([[2, 4], [6, 8]])
    >>> a.shape
    (2, 2)
    >>> (a @ IntegerMatrix.identity(2)) == a
    True
    """

    __slots__ = ("nrows", "ncols", "_rows")

    def __init__(self, rows: Iterable[Iterable[int]], *, ncols: Optional[int] = None):
        data = tuple(tuple(int(x) for x in row) for row in rows)
        if data:
            width = len(data[0])
            if any(len(r) != width for r in data):
                raise ValueError("ragged rows in integer matrix")
            if ncols is not None and ncols != width:
                raise ValueError("ncols disagrees with row length")
        else:
            if ncols is None:
                raise ValueError("empty matrix needs an explicit ncols")
            width = ncols
        self.nrows = len(data)
        self.ncols = width
        self._rows = data

    # -- constructors -----------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], ncols=n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntegerMatrix":
        return cls([[0] * ncols for _ in range(nrows)], ncols=ncols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: Optional[int] = None) -> "IntegerMatrix":
        cols = [tuple(int(x) for x in c) for c in columns]
        if cols:
            nrows = len(cols[0])
            if any(len(c) != nrows for c in cols):
                raise ValueError("ragged columns")
        elif nrows is None:
            raise ValueError("empty column list needs nrows")
        return cls([[c[i] for c in cols] for i in range(nrows)], ncols=len(cols))

    # -- access ------------------------------------------------------------

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, key: Tuple[int, int]) -> int:
        i, j = key
        return self._rows[i][j]

    def row(self, i: int) -> Tuple[int, ...]:
        return self._rows[i]

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(r[j] for r in self._rows)

    def rows_tuple(self) -> Tuple[Tuple[int, ...], ...]:
        return self._rows

    def columns(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(self.column(j) for j in range(self.ncols))

    def to_lists(self) -> list:
        return [list(r) for r in self._rows]

    def is_zero(self) -> bool:
        return all(x == 0 for row in self._rows for x in row)

    # -- algebra -----------------------------------------------------------

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = other.columns()
        return IntegerMatrix(
            [[sum(a * b for a, b in zip(row, col)) for col in ocols] for row in self._rows],
            ncols=other.ncols,
        )

    def apply(self, vec: Sequence[int]) -> Tuple[int, ...]:
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(row, vec)) for row in self._rows)

    def __add__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntegerMatrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self._rows, other._rows)],
            ncols=self.ncols,
        )

    def __sub__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        return self + (-other)

    def __neg__(self) -> "IntegerMatrix":
        return IntegerMatrix([[-x for x in r] for r in self._rows], ncols=self.ncols)

    def __mul__(self, scalar: int) -> "IntegerMatrix":
        return IntegerMatrix([[scalar * x for x in r] for r in self._rows], ncols=self.ncols)

    __rmul__ = __mul__

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(self.columns(), ncols=self.nrows)

    def hstack(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return IntegerMatrix(
            [r1 + r2 for r1, r2 in zip(self._rows, other._rows)],
            ncols=self.ncols + other.ncols,
        )

    def vstack(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        return IntegerMatrix(self._rows + other._rows, ncols=self.ncols)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, IntegerMatrix)
            and self.ncols == other.ncols
            and self._rows == other._rows
        )

    def __hash__(self) -> int:
        return hash((self.ncols, self._rows))

    def __repr__(self) -> str:
        return f"IntegerMatrix({[list(r) for r in self._rows]!r}, ncols={self.ncols})"


def det_int(mat: IntegerMatrix) -> int:
    """Determinant by fraction-free (Bareiss) elimination.

    >>> det_int(IntegerMatrix([[2, 4], [6, 8]]))
    -8
    """
    if mat.nrows != mat.ncols:
        raise ValueError("determinant of non-square matrix")
    n = mat.nrows
    if n == 0:
        return 1
    a = mat.to_lists()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


class SmithDecomposition:
    """Smith normal form with transforms: u @ a @ v == s.

    `s` is diagonal with nonnegative entries satisfying the divisibility
    chain d_1 | d_2 | ..., and `u`, `v` are unimodular.
    """

    __slots__ = ("u", "s", "v")

    def __init__(self, u: IntegerMatrix, s: IntegerMatrix, v: IntegerMatrix):
        self.u = u
        self.s = s
        self.v = v

    def diagonal(self) -> Tuple[int, ...]:
        return tuple(self.s[i, i] for i in range(min(self.s.nrows, self.s.ncols)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal() if d != 0)

    def invariant_factors(self) -> Tuple[int, ...]:
        """Diagonal entries that are neither 0 nor 1."""
        return tuple(d for d in self.diagonal() if d not in (0, 1))

    def verify(self, a: IntegerMatrix) -> bool:
        if self.u @ a @ self.v != self.s:
            return False
        if abs(det_int(self.u)) != 1 or abs(det_int(self.v)) != 1:
            return False
        diag = self.diagonal()
        for i in range(self.s.nrows):
            for j in range(self.s.ncols):
                if i != j and self.s[i, j] != 0:
                    return False
        for i, d in enumerate(diag):
            if d < 0:
                return False
            if i + 1 < len(diag):
                nxt = diag[i + 1]
                if d == 0 and nxt != 0:
                    return False
                if d != 0 and nxt % d != 0:
                    return False
        return True


def smith_normal_form(mat: IntegerMatrix) -> SmithDecomposition:
    """Smith normal form over the integers, with unimodular transforms.

    >>> d = smith_normal_form(IntegerMatrix([[2, 4], [6, 8]]))
    >>> d.diagonal()
    (2, 4)
    >>> d.verify(IntegerMatrix([[2, 4], [6, 8]]))
    True
    """
    m, n = mat.shape
    s = mat.to_lists()
    u = IntegerMatrix.identity(m).to_lists()
    v = IntegerMatrix.identity(n).to_lists()

    def swap_rows(i: int, j: int) -> None:
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def row_sub(i: int, j: int, q: int) -> None:
        # row_i -= q * row_j
        s[i] = [a - q * b for a, b in zip(s[i], s[j])]
        u[i] = [a - q * b for a, b in zip(u[i], u[j])]

    def col_sub(i: int, j: int, q: int) -> None:
        # col_i -= q * col_j
        for row in s:
            row[i] -= q * row[j]
        for row in v:
            row[i] -= q * row[j]

    def negate_row(i: int) -> None:
        s[i] = [-a for a in s[i]]
        u[i] = [-a for a in u[i]]

    t = 0
    bound = min(m, n)
    while t < bound:
        # Bring a smallest-magnitude nonzero entry of the trailing block to (t, t).
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                val = s[i][j]
                if val != 0 and (pivot is None or abs(val) < abs(pivot[2])):
                    pivot = (i, j, val)
        if pivot is None:
            break
        if pivot[0] != t:
            swap_rows(t, pivot[0])
        if pivot[1] != t:
            swap_cols(t, pivot[1])
        while True:
            restart = False
            for i in range(t + 1, m):
                if s[i][t] != 0:
                    q = s[i][t] // s[t][t]
                    row_sub(i, t, q)
                    if s[i][t] != 0:
                        # Remainder is smaller than the pivot; promote it.
                        swap_rows(i, t)
                        restart = True
            if restart:
                continue
            for j in range(t + 1, n):
                if s[t][j] != 0:
                    q = s[t][j] // s[t][t]
                    col_sub(j, t, q)
                    if s[t][j] != 0:
                        swap_cols(j, t)
                        restart = True
            if restart:
                continue
            break
        t += 1

    rank = t
    for i in range(rank):
        if s[i][i] < 0:
            negate_row(i)

    # Enforce the divisibility chain d_i | d_{i+1} with local 2x2 repairs.
    i = 0
    while i < rank - 1:
        a, b = s[i][i], s[i + 1][i + 1]
        if b % a == 0:
            i += 1
            continue
        # Put b next to a, then use column combinations to leave (gcd, lcm).
        row_sub(i, i + 1, -1)  # row_i += row_{i+1}; now s[i][i+1] == b
        g, sc, tc = xgcd(a, b)
        bg, ag = b // g, a // g
        for row in (s, v):
            for r in row:
                ci, cj = r[i], r[i + 1]
                r[i] = sc * ci + tc * cj
                r[i + 1] = -bg * ci + ag * cj
        # Clear the leftover below-diagonal entry; it is divisible by g.
        if s[i + 1][i] != 0:
            row_sub(i + 1, i, s[i + 1][i] // s[i][i])
        if s[i + 1][i + 1] < 0:
            negate_row(i + 1)
        i = max(i - 1, 0)

    return SmithDecomposition(
        IntegerMatrix(u, ncols=m),
        IntegerMatrix(s, ncols=n),
        IntegerMatrix(v, ncols=n),
    )


def solve_int(mat: IntegerMatrix, rhs: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """One integer solution x of mat @ x = rhs, or None.

    >>> solve_int(IntegerMatrix([[2, 3]]), [1])
    (-1, 1)
    """
    if len(rhs) != mat.nrows:
        raise ValueError("rhs length mismatch")
    dec = smith_normal_form(mat)
    c = dec.u.apply(rhs)
    diag = dec.diagonal()
    y = [0] * mat.ncols
    for i in range(mat.nrows):
        d = diag[i] if i < len(diag) else 0
        if d != 0:
            if c[i] % d != 0:
                return None
            y[i] = c[i] // d
        elif c[i] != 0:
            return None
    return dec.v.apply(y)


def kernel_basis(mat: IntegerMatrix) -> list:
    """Basis (list of coordinate tuples) of the integer kernel lattice.

    >>> kernel_basis(IntegerMatrix([[2, 3]]))
    [(3, -2)]
    """
    dec = smith_normal_form(mat)
    diag = dec.diagonal()
    rank = sum(1 for d in diag if d != 0)
    return [dec.v.column(j) for j in range(rank, mat.ncols)]


def row_hermite_form(rows: Iterable[Sequence[int]], width: int) -> list:
    """Row-style Hermite normal form of the lattice spanned by `rows`.

    The result is a list of rows in echelon form: pivot columns strictly
    increase, each pivot is positive, and entries above a pivot are reduced
    into [0, pivot).  The output is the unique such basis of the lattice.
    """
    work = [list(r) for r in rows if any(r)]
    hnf: list = []
    pivots: list = []
    for col in range(width):
        pivot_row = None
        rest = []
        for r in work:
            if r[col] == 0:
                rest.append(r)
                continue
            if pivot_row is None:
                pivot_row = r
                continue
            g, sc, tc = xgcd(pivot_row[col], r[col])
            a, b = pivot_row[col] // g, r[col] // g
            pivot_row, r = (
                [sc * x + tc * y for x, y in zip(pivot_row, r)],
                [a * y - b * x for x, y in zip(pivot_row, r)],
            )
            if any(r):
                rest.append(r)
        if pivot_row is not None:
            if pivot_row[col] < 0:
                pivot_row = [-x for x in pivot_row]
            for h in hnf:
                q = h[col] // pivot_row[col]
                if q:
                    for j in range(width):
                        h[j] -= q * pivot_row[j]
            hnf.append(pivot_row)
            pivots.append(col)
        work = rest
    return hnf


def lattice_reduce(hnf_rows: Sequence[Sequence[int]], vec: Sequence[int]) -> list:
    """Reduce `vec` into the Hermite fundamental domain of the lattice.

    `hnf_rows` must come from :func:`row_hermite_form`.  Two vectors in the
    same coset reduce to the same representative.
    """
    v = list(vec)
    for row in hnf_rows:
        col = next(j for j, x in enumerate(row) if x != 0)
        q = v[col] // row[col]
        if q:
            for j in range(len(v)):
                v[j] -= q * row[j]
    return v


class Lattice:
    """Sublattice of Z^n with a canonical coset-representative map.

    The representative rule pivots on the *last* coordinates first: the
    Hermite form is taken in reversed coordinate order, and reduction brings
    each pivot coordinate into [0, pivot).  This reproduces, e.g., the
    minimal lift 1 for 2Z in Z and the lift (-1, 1) for the kernel of
    (x, y) -> 2x + 3y.
    """

    __slots__ = ("ambient_dim", "_rev_hnf")

    def __init__(self, ambient_dim: int, generators: Iterable[Sequence[int]]):
        gens = [list(g) for g in generators]
        if any(len(g) != ambient_dim for g in gens):
            raise ValueError("generator length mismatch")
        self.ambient_dim = ambient_dim
        self._rev_hnf = row_hermite_form([g[::-1] for g in gens], ambient_dim)

    @property
    def rank(self) -> int:
        return len(self._rev_hnf)

    def basis(self) -> list:
        """Canonical basis, ordered by leading (original) coordinate."""
        rows = [tuple(r[::-1]) for r in self._rev_hnf]
        return rows[::-1]

    def reduce(self, vec: Sequence[int]) -> Tuple[int, ...]:
        if len(vec) != self.ambient_dim:
            raise ValueError("vector length mismatch")
        red = lattice_reduce(self._rev_hnf, list(vec)[::-1])
        return tuple(red[::-1])

    def contains(self, vec: Sequence[int]) -> bool:
        return all(x == 0 for x in self.reduce(vec))

    def coordinates_of(self, vec: Sequence[int], generators: Sequence[Sequence[int]]) -> Optional[Tuple[int, ...]]:
        """Express `vec` as an integer combination of `generators`, if possible."""
        mat = IntegerMatrix.from_columns([list(g) for g in generators], nrows=self.ambient_dim)
        return solve_int(mat, list(vec))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Lattice)
            and self.ambient_dim == other.ambient_dim
            and [tuple(r) for r in self._rev_hnf] == [tuple(r) for r in other._rev_hnf]
        )

    def __hash__(self) -> int:
        return hash((self.ambient_dim, tuple(tuple(r) for r in self._rev_hnf)))

    def is_sublattice_of(self, other: "Lattice") -> bool:
        return all(other.contains(b) for b in self.basis())


class FgAbGroup:
    """Finitely generated abelian group in invariant-factor form.

    >>> g = FgAbGroup(1, (2,))
    >>> g.ngens
    2
    >>> g.reduce((3, 5))
    (3, 1)
    >>> str(FgAbGroup(2)), str(FgAbGroup(0, (2, 4))), str(FgAbGroup(0))
    ('Z^2', 'Z/2 + Z/4', '0')
    """

    __slots__ = ("free_rank", "torsion")

    def __init__(self, free_rank: int, torsion: Sequence[int] = ()):
        if free_rank < 0:
            raise ValueError("negative free rank")
        tor = tuple(int(d) for d in torsion)
        for d in tor:
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
        for a, b in zip(tor, tor[1:]):
            if b % a != 0:
                raise ValueError(f"invariant factors {tor} violate divisibility")
        self.free_rank = free_rank
        self.torsion = tor

    @classmethod
    def free(cls, rank: int) -> "FgAbGroup":
        return cls(rank, ())

    @classmethod
    def trivial(cls) -> "FgAbGroup":
        return cls(0, ())

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def is_trivial(self) -> bool:
        return self.ngens == 0

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> Optional[int]:
        if not self.is_finite:
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def zero(self) -> Tuple[int, ...]:
        return (0,) * self.ngens

    def reduce(self, vec: Sequence[int]) -> Tuple[int, ...]:
        if len(vec) != self.ngens:
            raise ValueError(f"coordinate length {len(vec)} != {self.ngens}")
        free = tuple(int(x) for x in vec[: self.free_rank])
        tor = tuple(int(x) % d for x, d in zip(vec[self.free_rank:], self.torsion))
        return free + tor

    def add(self, a: Sequence[int], b: Sequence[int]) -> Tuple[int, ...]:
        return self.reduce([x + y for x, y in zip(a, b)])

    def negate(self, a: Sequence[int]) -> Tuple[int, ...]:
        return self.reduce([-x for x in a])

    def generators(self) -> list:
        return [tuple(1 if i == j else 0 for j in range(self.ngens)) for i in range(self.ngens)]

    def relation_matrix(self) -> IntegerMatrix:
        """Columns generate the relation lattice of the presentation."""
        cols = []
        for i, d in enumerate(self.torsion):
            col = [0] * self.ngens
            col[self.free_rank + i] = d
            cols.append(col)
        return IntegerMatrix.from_columns(cols, nrows=self.ngens)

    def elements(self) -> Iterable[Tuple[int, ...]]:
        if not self.is_finite:
            raise ValueError("cannot enumerate an infinite group")
        def rec(i: int, prefix: Tuple[int, ...]):
            if i == len(self.torsion):
                yield prefix
                return
            for x in range(self.torsion[i]):
                yield from rec(i + 1, prefix + (x,))
        yield from rec(0, ())

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FgAbGroup)
            and self.free_rank == other.free_rank
            and self.torsion == other.torsion
        )

    def __hash__(self) -> int:
        return hash((self.free_rank, self.torsion))

    def __repr__(self) -> str:
        return f"FgAbGroup({self.free_rank}, {self.torsion!r})"

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


def _normalize_matrix(domain: FgAbGroup, codomain: FgAbGroup, matrix: IntegerMatrix) -> IntegerMatrix:
    return IntegerMatrix.from_columns(
        [codomain.reduce(matrix.column(j)) for j in range(matrix.ncols)],
        nrows=codomain.ngens,
    )


class AbHom:
    """Homomorphism of finitely generated abelian groups.

    The matrix has shape (codomain.ngens, domain.ngens) and acts on
    coordinate columns: h(x) = M @ x, reduced in the codomain.  The
    constructor checks that torsion relations are respected.

    >>> z = FgAbGroup.free(1); z2 = FgAbGroup(0, (2,))
    >>> mod2 = AbHom(z, z2, IntegerMatrix([[1]]))
    >>> mod2.apply((5,))
    (1,)
    """

    __slots__ = ("domain", "codomain", "matrix")

    def __init__(self, domain: FgAbGroup, codomain: FgAbGroup, matrix):
        if not isinstance(matrix, IntegerMatrix):
            matrix = IntegerMatrix(matrix, ncols=domain.ngens)
        if matrix.shape != (codomain.ngens, domain.ngens):
            raise ValueError(
                f"matrix shape {matrix.shape} != ({codomain.ngens}, {domain.ngens})"
            )
        matrix = _normalize_matrix(domain, codomain, matrix)
        for j, d in enumerate(domain.torsion):
            col = matrix.column(domain.free_rank + j)
            scaled = [d * x for x in col]
            if any(codomain.reduce(scaled)):
                raise ValueError(
                    f"matrix does not respect torsion relation {d} on generator "
                    f"{domain.free_rank + j}"
                )
        self.domain = domain
        self.codomain = codomain
        self.matrix = matrix

    @classmethod
    def identity(cls, group: FgAbGroup) -> "AbHom":
        return cls(group, group, IntegerMatrix.identity(group.ngens))

    @classmethod
    def zero(cls, domain: FgAbGroup, codomain: FgAbGroup) -> "AbHom":
        return cls(domain, codomain, IntegerMatrix.zeros(codomain.ngens, domain.ngens))

    @classmethod
    def from_columns(cls, domain: FgAbGroup, codomain: FgAbGroup, columns: Sequence[Sequence[int]]) -> "AbHom":
        return cls(domain, codomain, IntegerMatrix.from_columns(columns, nrows=codomain.ngens))

    def apply(self, vec: Sequence[int]) -> Tuple[int, ...]:
        return self.codomain.reduce(self.matrix.apply(self.domain.reduce(vec)))

    def compose(self, inner: "AbHom") -> "AbHom":
        """self o inner."""
        if inner.codomain != self.domain:
            raise ValueError("composition domain mismatch")
        return AbHom(inner.domain, self.codomain, self.matrix @ inner.matrix)

    def __matmul__(self, inner: "AbHom") -> "AbHom":
        return self.compose(inner)

    def __add__(self, other: "AbHom") -> "AbHom":
        if (self.domain, self.codomain) != (other.domain, other.codomain):
            raise ValueError("hom addition mismatch")
        return AbHom(self.domain, self.codomain, self.matrix + other.matrix)

    def __sub__(self, other: "AbHom") -> "AbHom":
        return self + (-other)

    def __neg__(self) -> "AbHom":
        return AbHom(self.domain, self.codomain, -self.matrix)

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, AbHom)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and self.matrix == other.matrix
        )

    def __hash__(self) -> int:
        return hash((self.domain, self.codomain, self.matrix))

    def __repr__(self) -> str:
        return f"AbHom({self.domain} -> {self.codomain}, {self.matrix.to_lists()!r})"

    # -- lattice plumbing ---------------------------------------------------

    def _graph_lattice_basis(self) -> list:
        """Basis of {x in Z^n : M x lies in the codomain relation lattice}."""
        rel = self.codomain.relation_matrix()
        stacked = self.matrix.hstack(rel) if rel.ncols else self.matrix
        n = self.domain.ngens
        return [k[:n] for k in kernel_basis(stacked)]

    def kernel_lattice(self) -> Lattice:
        return Lattice(self.domain.ngens, self._graph_lattice_basis())

    def image_lattice(self) -> Lattice:
        cols = list(self.matrix.columns()) + list(self.codomain.relation_matrix().columns())
        return Lattice(self.codomain.ngens, cols)

    # -- derived groups ------------------------------------------------------

    def kernel(self) -> Tuple[FgAbGroup, "AbHom"]:
        """(K, inclusion) with inclusion : K -> domain onto ker(self)."""
        group, gens, _ = _lattice_quotient(
            self.domain.ngens,
            self._graph_lattice_basis(),
            list(self.domain.relation_matrix().columns()),
        )
        incl = AbHom.from_columns(group, self.domain, [self.domain.reduce(g) for g in gens])
        return group, incl

    def image(self) -> Tuple[FgAbGroup, "AbHom"]:
        """(I, inclusion) with inclusion : I -> codomain onto im(self)."""
        big = list(self.matrix.columns()) + list(self.codomain.relation_matrix().columns())
        group, gens, _ = _lattice_quotient(
            self.codomain.ngens,
            big,
            list(self.codomain.relation_matrix().columns()),
        )
        incl = AbHom.from_columns(group, self.codomain, [self.codomain.reduce(g) for g in gens])
        return group, incl

    def cokernel(self) -> Tuple[FgAbGroup, "AbHom"]:
        """(C, projection) with projection : codomain -> C."""
        m = self.codomain.ngens
        big = [tuple(1 if i == j else 0 for i in range(m)) for j in range(m)]
        small = list(self.matrix.columns()) + list(self.codomain.relation_matrix().columns())
        group, _, project = _lattice_quotient(m, big, small)
        cols = [project(e) for e in big]
        proj = AbHom.from_columns(self.codomain, group, cols)
        return group, proj

    def is_surjective(self) -> bool:
        group, _ = self.cokernel()
        return group.is_trivial

    def is_injective(self) -> bool:
        group, _ = self.kernel()
        return group.is_trivial

    def inverse(self) -> Optional["AbHom"]:
        """Two-sided inverse hom, or None when not an isomorphism."""
        if not (self.is_surjective() and self.is_injective()):
            return None
        cols = [self.preimage_representative(e) for e in self.codomain.generators()]
        inv = AbHom.from_columns(self.codomain, self.domain, cols)
        if (self @ inv) != AbHom.identity(self.codomain):
            return None
        if (inv @ self) != AbHom.identity(self.domain):
            return None
        return inv

    def preimage_representative(self, y: Sequence[int]) -> Tuple[int, ...]:
        """Canonical x with self(x) = y; raises ValueError when y is not hit.

        The representative is the Hermite-reduced one: any particular
        solution is reduced modulo the full preimage-of-zero lattice with
        pivots taken from the last coordinate upward.

        >>> z2 = FgAbGroup.free(2); z = FgAbGroup.free(1)
        >>> h = AbHom(z2, z, IntegerMatrix([[2, 3]]))
        >>> h.preimage_representative((1,))
        (-1, 1)
        """
        rel = self.codomain.relation_matrix()
        stacked = self.matrix.hstack(rel) if rel.ncols else self.matrix
        sol = solve_int(stacked, self.codomain.reduce(y))
        if sol is None:
            raise ValueError(f"{tuple(y)} is not in the image")
        x = sol[: self.domain.ngens]
        lat = Lattice(self.domain.ngens, self._graph_lattice_basis())
        return self.domain.reduce(lat.reduce(x))

    def try_split(self) -> Optional["AbHom"]:
        """Homomorphic section s with self o s = id, or None.

        Sections are built generator by generator; a torsion generator of
        order d needs a preimage killed by d, which is an integer solvability
        condition.  Absence is definitive.

        >>> z = FgAbGroup.free(1); z2t = FgAbGroup(0, (2,))
        >>> AbHom(z, z2t, IntegerMatrix([[1]])).try_split() is None
        True
        >>> h = AbHom(FgAbGroup.free(2), z, IntegerMatrix([[2, 3]]))
        >>> h.try_split().matrix.to_lists()
        [[-1], [1]]
        """
        if not self.is_surjective():
            raise ValueError("try_split requires a surjective homomorphism")
        n = self.domain.ngens
        cod = self.codomain
        rel_dom = self.domain.relation_matrix()
        graph = self._graph_lattice_basis()
        cols = []
        for i, e in enumerate(cod.generators()):
            x = list(self.preimage_representative(e))
            if i >= cod.free_rank:
                d = cod.torsion[i - cod.free_rank]
                # Need x' = x + (graph combo) with d * x' in the domain
                # relation lattice.
                gmat = IntegerMatrix.from_columns([list(g) for g in graph], nrows=n)
                blocks = (d * gmat).hstack(rel_dom) if rel_dom.ncols else d * gmat
                sol = solve_int(blocks, [-d * xi for xi in x])
                if sol is None:
                    return None
                corr = gmat.apply(sol[: len(graph)])
                x = [xi + ci for xi, ci in zip(x, corr)]
                # Deterministic representative: reduce modulo the lattice of
                # valid corrections {v in graph-lattice : d*v in relations}.
                cond_rows = [gmat.apply(k[: len(graph)]) for k in kernel_basis(blocks)]
                x = list(Lattice(n, cond_rows).reduce(x))
            cols.append(self.domain.reduce(x))
        sec = AbHom.from_columns(cod, self.domain, cols)
        if (self @ sec) != AbHom.identity(cod):
            return None
        return sec


def _lattice_quotient(ambient: int, big_gens: Sequence[Sequence[int]], small_gens: Sequence[Sequence[int]]):
    """Quotient of the lattice spanned by big_gens by the span of small_gens.

    Returns (group, generator_vectors, project) where generator_vectors are
    ambient representatives of the group generators (free generators first)
    and project maps an ambient vector of the big lattice to canonical group
    coordinates.
    """
    big_rows = row_hermite_form([list(g) for g in big_gens], ambient)
    k = len(big_rows)
    basis_mat = IntegerMatrix.from_columns([list(r) for r in big_rows], nrows=ambient)

    def in_basis(vec: Sequence[int]) -> Tuple[int, ...]:
        sol = solve_int(basis_mat, list(vec))
        if sol is None:
            raise ValueError("vector not in the big lattice")
        return sol

    small_in_b = [in_basis(sg) for sg in small_gens]
    cmat = IntegerMatrix.from_columns([list(c) for c in small_in_b], nrows=k)
    dec = smith_normal_form(cmat)
    diag = dec.diagonal()
    uinv_cols = []
    for j in range(k):
        e = [1 if i == j else 0 for i in range(k)]
        col = solve_int(dec.u, e)
        uinv_cols.append(col)

    free_idx = [i for i in range(k) if (i >= len(diag) or diag[i] == 0)]
    tors_idx = [i for i in range(k) if i < len(diag) and diag[i] >= 2]
    invariants = [diag[i] for i in tors_idx]
    group = FgAbGroup(len(free_idx), invariants)

    gen_vectors = []
    for i in free_idx + tors_idx:
        coeffs = uinv_cols[i]
        vec = [sum(c * b[j] for c, b in zip(coeffs, big_rows)) for j in range(ambient)]
        gen_vectors.append(tuple(vec))

    def project(vec: Sequence[int]) -> Tuple[int, ...]:
        xb = in_basis(vec)
        y = dec.u.apply(xb)
        coords = [y[i] for i in free_idx] + [y[i] for i in tors_idx]
        return group.reduce(coords)

    return group, gen_vectors, project


# -- module-level operation names ------------------------------------------


def hom_kernel(h: AbHom) -> Tuple[FgAbGroup, AbHom]:
    """Kernel subgroup with its inclusion; see :meth:`AbHom.kernel`."""
    return h.kernel()


def hom_cokernel(h: AbHom) -> Tuple[FgAbGroup, AbHom]:
    """Cokernel with its projection; see :meth:`AbHom.cokernel`.

    >>> z = FgAbGroup.free(1)
    >>> coker, _ = hom_cokernel(AbHom(z, z, IntegerMatrix([[2]])))
    >>> str(coker)
    'Z/2'
    """
    return h.cokernel()


def hom_image(h: AbHom) -> Tuple[FgAbGroup, AbHom]:
    """Image subgroup with its inclusion; see :meth:`AbHom.image`."""
    return h.image()


def is_exact_at(f: AbHom, g: AbHom) -> bool:
    """Whether im(f) = ker(g) as subgroups of the shared middle group.

    >>> z = FgAbGroup.free(1); z2 = FgAbGroup(0, (2,))
    >>> is_exact_at(AbHom(z, z, IntegerMatrix([[2]])),
    ...             AbHom(z, z2, IntegerMatrix([[1]])))
    True
    """
    if f.codomain != g.domain:
        raise ValueError("is_exact_at needs codomain(f) == domain(g)")
    return f.image_lattice() == g.kernel_lattice()


def preimage_representative(h: AbHom, y: Sequence[int]) -> Tuple[int, ...]:
    return h.preimage_representative(y)


def try_split(h: AbHom) -> Optional[AbHom]:
    return h.try_split()
