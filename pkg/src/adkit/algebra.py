"""Structure-constant algebras and the structural toolbox.

A bilinear product on an n-dimensional space is stored as an n*n*n tensor of
polynomials: ``e_i o e_j = sum_k c[i][j][k] e_k`` (indices 0-based internally,
1-based in files and reports).  A two-operation carrier holds one tensor for
each operation; the anti-dendriform laws are checked symbolically, identically
in any family parameters, by expanding both sides of each identity on basis
triples.  Bilinearity makes the basis-triple check equivalent to the law on
the whole space.

Rank-based computations (centers, annihilators, power series, quotients)
require parameters to be instantiated first, because ranks can jump on
parameter subvarieties; callers supply an assignment and the report echoes it.

All values are immutable after construction and all operations are pure
functions, so everything here is safe to use concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .errors import CenterMismatch, DimensionMismatch, SingularMatrix
from .scalars import Poly, Scalar

Vector = tuple  # tuple[Poly, ...] in the standard basis


def _coerce_vec(dim: int, v: Sequence[Scalar]) -> Vector:
    if len(v) != dim:
        raise DimensionMismatch(f"expected a vector of length {dim}, got {len(v)}")
    return tuple(Poly.coerce(x) for x in v)


def unit_vector(dim: int, i: int) -> Vector:
    return tuple(Poly.const(1 if j == i else 0) for j in range(dim))


class StructureConstants:
    """Tensor of structure constants for one bilinear operation."""

    __slots__ = ("dim", "c")

    def __init__(self, dim: int, c):
        self.dim = dim
        self.c = tuple(tuple(tuple(Poly.coerce(x) for x in row) for row in plane)
                       for plane in c)

    @classmethod
    def zero(cls, dim: int) -> "StructureConstants":
        z = Poly.zero()
        return cls(dim, [[[z] * dim for _ in range(dim)] for _ in range(dim)])

    @classmethod
    def from_table(cls, dim: int, entries: Mapping[tuple, Scalar | str],
                   params=()) -> "StructureConstants":
        """Build from a sparse table with 1-based ``(i, j, k)`` keys.

        String values go through the coefficient grammar with the given
        parameter names; omitted entries are zero.
        """
        from .scalars import poly_parse
        tensor = [[[Poly.zero() for _ in range(dim)] for _ in range(dim)]
                  for _ in range(dim)]
        for (i, j, k), value in entries.items():
            if not (1 <= i <= dim and 1 <= j <= dim and 1 <= k <= dim):
                raise DimensionMismatch(f"index {(i, j, k)} out of range for dim {dim}")
            if isinstance(value, str):
                value = poly_parse(value, params or ("a", "b", "g", "l"))
            tensor[i - 1][j - 1][k - 1] = Poly.coerce(value)
        return cls(dim, tensor)

    def entries(self):
        """Iterate nonzero entries as ((i, j, k), poly) with 0-based indices."""
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    p = self.c[i][j][k]
                    if not p.is_zero():
                        yield (i, j, k), p

    def row(self, i: int, j: int) -> Vector:
        """The product e_i o e_j as a coordinate vector."""
        return self.c[i][j]

    def map_entries(self, fn) -> "StructureConstants":
        return StructureConstants(self.dim, [[[fn(x) for x in row] for row in plane]
                                             for plane in self.c])

    def subs(self, mapping) -> "StructureConstants":
        return self.map_entries(lambda p: p.subs(mapping))

    def variables(self) -> frozenset:
        out = frozenset()
        for _, p in self.entries():
            out |= p.variables()
        return out

    def add(self, other: "StructureConstants") -> "StructureConstants":
        if other.dim != self.dim:
            raise DimensionMismatch("tensor dimensions differ")
        return StructureConstants(
            self.dim,
            [[[self.c[i][j][k] + other.c[i][j][k] for k in range(self.dim)]
              for j in range(self.dim)] for i in range(self.dim)])

    def neg(self) -> "StructureConstants":
        return self.map_entries(lambda p: -p)

    def constant_tensor(self, assign: Mapping[str, Fraction] | None = None):
        """Evaluate every entry to a Fraction; parameters must be covered."""
        assign = assign or {}
        return [[[self.c[i][j][k].eval(assign) for k in range(self.dim)]
                 for j in range(self.dim)] for i in range(self.dim)]

    def __eq__(self, other):
        if not isinstance(other, StructureConstants):
            return NotImplemented
        return self.dim == other.dim and self.c == other.c

    def __hash__(self):
        return hash((self.dim, self.c))


@dataclass(frozen=True)
class UnaryAlgebra:
    """A single-operation algebra with an optional catalog label."""
    sc: StructureConstants
    label: str | None = None

    @property
    def dim(self) -> int:
        return self.sc.dim


@dataclass(frozen=True)
class AdPair:
    """Two-operation carrier: ``rhd`` and ``lhd`` tensors of equal dimension."""
    rhd: StructureConstants
    lhd: StructureConstants
    label: str | None = None

    def __post_init__(self):
        if self.rhd.dim != self.lhd.dim:
            raise DimensionMismatch("the two operation tensors have different dims")

    @property
    def dim(self) -> int:
        return self.rhd.dim

    def subs(self, mapping) -> "AdPair":
        return AdPair(self.rhd.subs(mapping), self.lhd.subs(mapping), self.label)

    def variables(self) -> frozenset:
        return self.rhd.variables() | self.lhd.variables()


def product(sc: StructureConstants, x: Sequence[Scalar], y: Sequence[Scalar]) -> Vector:
    """Bilinear extension of the tensor to arbitrary coordinate vectors."""
    xv = _coerce_vec(sc.dim, x)
    yv = _coerce_vec(sc.dim, y)
    out = [Poly.zero() for _ in range(sc.dim)]
    for i in range(sc.dim):
        if xv[i].is_zero():
            continue
        for j in range(sc.dim):
            if yv[j].is_zero():
                continue
            f = xv[i] * yv[j]
            for k in range(sc.dim):
                entry = sc.c[i][j][k]
                if not entry.is_zero():
                    out[k] = out[k] + f * entry
    return tuple(out)


def _apply_right(sc: StructureConstants, i: int, vec: Vector) -> Vector:
    """e_i o vec."""
    out = [Poly.zero() for _ in range(sc.dim)]
    for k in range(sc.dim):
        if vec[k].is_zero():
            continue
        for m in range(sc.dim):
            entry = sc.c[i][k][m]
            if not entry.is_zero():
                out[m] = out[m] + vec[k] * entry
    return tuple(out)


def _apply_left(sc: StructureConstants, vec: Vector, j: int) -> Vector:
    """vec o e_j."""
    out = [Poly.zero() for _ in range(sc.dim)]
    for k in range(sc.dim):
        if vec[k].is_zero():
            continue
        for m in range(sc.dim):
            entry = sc.c[k][j][m]
            if not entry.is_zero():
                out[m] = out[m] + vec[k] * entry
    return tuple(out)


def _vec_add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def _vec_sub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def _vec_is_zero(v: Vector) -> bool:
    return all(p.is_zero() for p in v)


def sum_algebra(ad: AdPair) -> UnaryAlgebra:
    """The single operation x o y = x rhd y + x lhd y."""
    return UnaryAlgebra(ad.rhd.add(ad.lhd),
                        label=None if ad.label is None else f"sum({ad.label})")


@dataclass(frozen=True)
class AssociativityReport:
    dim: int
    violations: tuple  # ((i, j, k) 0-based, residual Vector)

    @property
    def ok(self) -> bool:
        return not self.violations


def is_associative(alg: UnaryAlgebra) -> AssociativityReport:
    """All basis triples with (e_i e_j) e_k != e_i (e_j e_k), symbolically."""
    sc = alg.sc
    n = sc.dim
    bad = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                left = _apply_left(sc, sc.row(i, j), k)
                right = _apply_right(sc, i, sc.row(j, k))
                res = _vec_sub(left, right)
                if not _vec_is_zero(res):
                    bad.append(((i, j, k), res))
    return AssociativityReport(n, tuple(bad))


#: The seven component identities, in reporting order.  With R = rhd, L = lhd
#: and x.y the sum product, each maps a basis triple to its residual vector.
IDENTITY_NAMES = ("id1", "id2", "id3", "id4", "id5", "id6", "id7")

IDENTITY_LAWS = {
    "id1": "(x>y)<z = x>(y<z)",
    "id2": "x>(y>z) = -(x.y)>z",
    "id3": "x>(y>z) = -x<(y.z)",
    "id4": "x>(y>z) = (x<y)<z",
    "id5": "(x.y)>z = x<(y.z)",
    "id6": "-(x.y)>z = (x<y)<z",
    "id7": "-x<(y.z) = (x<y)<z",
}


def _identity_residual(name: str, r: StructureConstants, l: StructureConstants,
                       s: StructureConstants, i: int, j: int, k: int) -> Vector:
    if name == "id1":
        return _vec_sub(_apply_left(l, r.row(i, j), k), _apply_right(r, i, l.row(j, k)))
    if name == "id2":
        return _vec_add(_apply_right(r, i, r.row(j, k)), _apply_left(r, s.row(i, j), k))
    if name == "id3":
        return _vec_add(_apply_right(r, i, r.row(j, k)), _apply_right(l, i, s.row(j, k)))
    if name == "id4":
        return _vec_sub(_apply_right(r, i, r.row(j, k)), _apply_left(l, l.row(i, j), k))
    if name == "id5":
        return _vec_sub(_apply_left(r, s.row(i, j), k), _apply_right(l, i, s.row(j, k)))
    if name == "id6":
        return _vec_add(_apply_left(r, s.row(i, j), k), _apply_left(l, l.row(i, j), k))
    if name == "id7":
        return _vec_add(_apply_right(l, i, s.row(j, k)), _apply_left(l, l.row(i, j), k))
    raise ValueError(name)


@dataclass(frozen=True)
class AntidendriformReport:
    dim: int
    #: name -> tuple of ((i, j, k) 0-based, residual Vector), nonzero only
    failures: Mapping[str, tuple]
    #: residuals of the two defining chains, computed independently
    chain_failures: Mapping[str, tuple]

    @property
    def ok(self) -> bool:
        return not any(self.failures.values())

    @property
    def chains_ok(self) -> bool:
        return not any(self.chain_failures.values())

    def failing_identities(self) -> tuple:
        return tuple(n for n in IDENTITY_NAMES if self.failures[n])


def check_antidendriform(ad: AdPair) -> AntidendriformReport:
    """Symbolic residuals of the seven identities on every basis triple.

    Also evaluates the two defining equations directly (the four-way chain
    and the middle-swap law); a pair is anti-dendriform exactly when all
    residuals vanish identically in the parameters.
    """
    r, l = ad.rhd, ad.lhd
    s = r.add(l)
    n = ad.dim
    failures = {name: [] for name in IDENTITY_NAMES}
    for name in IDENTITY_NAMES:
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    res = _identity_residual(name, r, l, s, i, j, k)
                    if not _vec_is_zero(res):
                        failures[name].append(((i, j, k), res))
    # The defining chain x>(y>z) = -(x.y)>z = -x<(y.z) = (x<y)<z re-expanded
    # as adjacent differences, plus the middle-swap law.
    chain = {"eq_chain": [], "eq_swap": []}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                left = _apply_right(r, i, r.row(j, k))
                mid1 = tuple(-p for p in _apply_left(r, s.row(i, j), k))
                mid2 = tuple(-p for p in _apply_right(l, i, s.row(j, k)))
                right = _apply_left(l, l.row(i, j), k)
                for u, v in ((left, mid1), (mid1, mid2), (mid2, right)):
                    res = _vec_sub(u, v)
                    if not _vec_is_zero(res):
                        chain["eq_chain"].append(((i, j, k), res))
                res = _vec_sub(_apply_left(l, r.row(i, j), k),
                               _apply_right(r, i, l.row(j, k)))
                if not _vec_is_zero(res):
                    chain["eq_swap"].append(((i, j, k), res))
    return AntidendriformReport(
        n,
        {name: tuple(v) for name, v in failures.items()},
        {name: tuple(v) for name, v in chain.items()})


def is_two_nilpotent(ad: AdPair) -> bool:
    """Do all triple products vanish, for every bracketing and operation mix?"""
    ops = (ad.rhd, ad.lhd)
    n = ad.dim
    for first in ops:
        for second in ops:
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        if not _vec_is_zero(_apply_left(second, first.row(i, j), k)):
                            return False
                        if not _vec_is_zero(_apply_right(second, i, first.row(j, k))):
                            return False
    return True


# -- rank computations at an instantiated point ---------------------------------


def _product_rows(tensors, assign, left: bool):
    """Linear conditions on x for x o e_j = 0 (left) or e_j o x = 0."""
    rows = []
    for sc in tensors:
        t = sc.constant_tensor(assign)
        n = sc.dim
        for j in range(n):
            for m in range(n):
                if left:
                    rows.append([t[i][j][m] for i in range(n)])
                else:
                    rows.append([t[j][i][m] for i in range(n)])
    return rows


def center_associative(alg: UnaryAlgebra, assign=None):
    """Rational basis of {x : x.y = y.x = 0 for all y} at the assignment."""
    rows = (_product_rows([alg.sc], assign, left=True)
            + _product_rows([alg.sc], assign, left=False))
    return linalg.nullspace(rows, alg.dim)


def center_ad(ad: AdPair, assign=None):
    """Basis of the two-operation center (four product conditions)."""
    tensors = [ad.rhd, ad.lhd]
    rows = (_product_rows(tensors, assign, left=True)
            + _product_rows(tensors, assign, left=False))
    return linalg.nullspace(rows, ad.dim)


def left_annihilator(tensors, dim: int, assign=None):
    rows = _product_rows(tensors, assign, left=True)
    return linalg.nullspace(rows, dim)


def right_annihilator(tensors, dim: int, assign=None):
    rows = _product_rows(tensors, assign, left=False)
    return linalg.nullspace(rows, dim)


@dataclass(frozen=True)
class PowerSeries:
    dims: tuple          # dim A^1, dim A^2, ... until 0 or stabilisation
    nilpotent: bool
    index: int | None    # smallest i with A^i = 0
    null_filiform: bool


def power_series(alg: UnaryAlgebra, assign=None) -> PowerSeries:
    """Dimensions of the descending power series A^1 >= A^2 >= ...

    A^{i+1} = sum_k A^k A^{i+1-k}, computed on spanning sets at a rational
    point.  Null-filiform means dim A^i = (n+1) - i for 1 <= i <= n+1.
    """
    n = alg.dim
    t = alg.sc.constant_tensor(assign)

    def mul_sets(us, vs):
        out = []
        for u in us:
            for v in vs:
                w = [Fraction(0)] * n
                for i in range(n):
                    if u[i] == 0:
                        continue
                    for j in range(n):
                        if v[j] == 0:
                            continue
                        f = u[i] * v[j]
                        for k in range(n):
                            if t[i][j][k]:
                                w[k] += f * t[i][j][k]
                out.append(w)
        return out

    powers = [[[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]]
    dims = [n]
    while True:
        i = len(powers)  # computing A^{i+1}
        spanning = []
        for k in range(i):
            spanning.extend(mul_sets(powers[k], powers[i - 1 - k]))
        basis = [list(v) for v in linalg.rref(spanning)[0]] if spanning else []
        d = len(basis)
        dims.append(d)
        powers.append(basis)
        if d == 0 or d == dims[-2]:
            break
    nil = dims[-1] == 0
    index = len(dims) if nil else None
    expected = [n + 1 - i for i in range(1, n + 2)]
    nf = nil and dims == expected
    return PowerSeries(tuple(dims), nil, index, nf)


@dataclass(frozen=True)
class QuotientResult:
    pair: AdPair
    center: tuple            # basis vectors of the common center
    kept_indices: tuple      # 0-based standard basis indices spanning the complement


def quotient_by_center(ad: AdPair, assign=None) -> QuotientResult:
    """Induced pair on A/Z when the one- and two-operation centers agree.

    The complement is spanned by the standard basis vectors that are not
    pivotal in the center's reduced echelon form, which makes the output
    basis deterministic.
    """
    n = ad.dim
    z_sum = center_associative(sum_algebra(ad), assign)
    z_ad = center_ad(ad, assign)
    if not linalg.same_span(z_sum, z_ad):
        raise CenterMismatch(
            "the associative and two-operation centers differ at this point")
    center_rows, pivots = linalg.rref(z_ad) if z_ad else ([], [])
    kept = [i for i in range(n) if i not in pivots]
    m = len(kept)
    # Transition matrix: columns are center basis vectors then kept unit vectors.
    cols = [list(v) for v in center_rows] + \
           [[Fraction(1 if i == k else 0) for i in range(n)] for k in kept]
    basis_matrix = [[cols[c][r] for c in range(n)] for r in range(n)]
    inv = linalg.invert(basis_matrix)

    def project(sc: StructureConstants) -> StructureConstants:
        t = sc.constant_tensor(assign)
        out = [[[Poly.zero() for _ in range(m)] for _ in range(m)] for _ in range(m)]
        for a in range(m):
            for b in range(m):
                w = [Fraction(0)] * n
                ia, ib = kept[a], kept[b]
                for k in range(n):
                    w[k] = t[ia][ib][k]
                coords = [sum(inv[r][c] * w[c] for c in range(n)) for r in range(n)]
                for c_idx in range(m):
                    out[a][b][c_idx] = Poly.const(coords[len(center_rows) + c_idx])
        return StructureConstants(m, out)

    pair = AdPair(project(ad.rhd), project(ad.lhd),
                  label=None if ad.label is None else f"{ad.label}/Z")
    return QuotientResult(pair, tuple(tuple(v) for v in z_ad), tuple(kept))


# -- basis change ---------------------------------------------------------------


def transport_tensor(sc: StructureConstants, t_rows) -> StructureConstants:
    """Structure constants in the new basis e'_i = sum_j T[i][j] e_j.

    T has rational entries; tensor entries may still carry parameters.
    """
    n = sc.dim
    if len(t_rows) != n or any(len(r) != n for r in t_rows):
        raise DimensionMismatch("basis-change matrix has the wrong shape")
    t = [[Fraction(x) for x in row] for row in t_rows]
    if linalg.det(t) == 0:
        raise SingularMatrix("basis-change matrix is singular")
    inv = linalg.invert(t)
    out = [[[Poly.zero() for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            prod = [Poly.zero() for _ in range(n)]
            for p in range(n):
                if t[i][p] == 0:
                    continue
                for q in range(n):
                    f = t[i][p] * t[j][q]
                    if f == 0:
                        continue
                    for m in range(n):
                        entry = sc.c[p][q][m]
                        if not entry.is_zero():
                            prod[m] = prod[m] + entry * f
            for k in range(n):
                acc = Poly.zero()
                for m in range(n):
                    if inv[m][k] != 0 and not prod[m].is_zero():
                        acc = acc + prod[m] * inv[m][k]
                out[i][j][k] = acc
    return StructureConstants(n, out)


def apply_basis_change(obj, t_rows):
    """Transport an algebra or pair along an invertible rational matrix."""
    if isinstance(obj, StructureConstants):
        return transport_tensor(obj, t_rows)
    if isinstance(obj, UnaryAlgebra):
        return UnaryAlgebra(transport_tensor(obj.sc, t_rows), obj.label)
    if isinstance(obj, AdPair):
        return AdPair(transport_tensor(obj.rhd, t_rows),
                      transport_tensor(obj.lhd, t_rows), obj.label)
    raise TypeError(f"cannot transport {type(obj).__name__}")
