"""Isomorphism evidence: invariant fingerprints, witness checking, search.

A witness is an invertible matrix T whose rows express a new basis inside the
source algebra: e'_i = sum_j T[i][j] e_j.  It certifies source ~ target when
the products of the new basis vectors, computed in the source, follow the
target's multiplication table:

    sum_{p,q} T[i][p] T[j][q] src[p][q][m]  =  sum_k tgt[i][j][k] T[k][m]

for every basis pair (i, j), coordinate m and both operations.  This form is
division-free, so parametric witnesses are verified symbolically; only the
determinant must be (symbolically) nonzero.

Non-isomorphism is certified exclusively by fingerprint separation: every
fingerprint component is invariant under basis change, so differing values at
a single assignment rule out any witness there.  A failed bounded search
proves nothing and is reported as such.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product as iproduct
from typing import Sequence

from . import linalg
from .algebra import (AdPair, StructureConstants, UnaryAlgebra, center_ad,
                      center_associative, is_two_nilpotent, left_annihilator,
                      power_series, right_annihilator)
from .errors import DimensionMismatch, SingularMatrix
from .scalars import Poly, QuadExt


@dataclass(frozen=True)
class Witness:
    """Invertible basis-change matrix over Q, Q(sqrt d), or the parameter ring."""
    entries: tuple  # rows of Poly or QuadExt
    radicand: Fraction | None = None

    @property
    def dim(self) -> int:
        return len(self.entries)

    @property
    def is_quadratic(self) -> bool:
        return any(isinstance(c, QuadExt) for row in self.entries for c in row)

    @classmethod
    def from_rows(cls, rows, radicand=None) -> "Witness":
        out = []
        for row in rows:
            conv = []
            for c in row:
                if isinstance(c, (QuadExt, Poly)):
                    conv.append(c)
                else:
                    conv.append(Poly.const(c))
            out.append(tuple(conv))
        return cls(tuple(out), radicand)

    @classmethod
    def identity(cls, dim: int) -> "Witness":
        return cls.from_rows([[1 if i == j else 0 for j in range(dim)]
                              for i in range(dim)])

    def determinant(self):
        if self.is_quadratic:
            rows = [[c if isinstance(c, QuadExt) else QuadExt(c.constant_value(), 0, self.radicand)
                     for c in row] for row in self.entries]
            return linalg.det(rows)
        return linalg.det_poly([list(row) for row in self.entries])


@dataclass(frozen=True)
class WitnessReport:
    ok: bool
    det: str
    #: ((op, i, j, m) 0-based, residual) for every failing coordinate
    failures: tuple


def _check_transport(src_tensors: Sequence[StructureConstants],
                     tgt_tensors: Sequence[StructureConstants],
                     witness: Witness) -> tuple:
    n = witness.dim
    t = witness.entries
    quad = witness.is_quadratic

    def lift(poly: Poly):
        if quad:
            return QuadExt(poly.constant_value(), 0, witness.radicand)
        return poly

    failures = []
    op_names = ("rhd", "lhd") if len(src_tensors) == 2 else ("mul",)
    for o, (src, tgt) in enumerate(zip(src_tensors, tgt_tensors)):
        for i in range(n):
            for j in range(n):
                for m in range(n):
                    lhs = 0
                    for p in range(n):
                        for q in range(n):
                            entry = src.c[p][q][m]
                            if not entry.is_zero():
                                lhs = t[i][p] * t[j][q] * lift(entry) + lhs
                    rhs = 0
                    for k in range(n):
                        entry = tgt.c[i][j][k]
                        if not entry.is_zero():
                            rhs = lift(entry) * t[k][m] + rhs
                    res = lhs - rhs
                    if res != 0:
                        failures.append(((op_names[o], i, j, m), res))
    return tuple(failures)


def verify_witness_tensors(src_tensors, tgt_tensors, witness: Witness) -> WitnessReport:
    """Transport identity for a list of paired tensors (shared witness)."""
    n = witness.dim
    if witness.is_quadratic and witness.radicand is None:
        raise ValueError("quadratic witness entries need a radicand")
    for sc in list(src_tensors) + list(tgt_tensors):
        if sc.dim != n:
            raise DimensionMismatch("witness and tensors have different dims")
    d = witness.determinant()
    if d == 0:
        raise SingularMatrix("witness matrix has (identically) zero determinant")
    failures = _check_transport(src_tensors, tgt_tensors, witness)
    return WitnessReport(not failures, str(d), failures)


def verify_witness(source: AdPair, target: AdPair, witness: Witness) -> WitnessReport:
    """Does the witness carry the source pair onto the target pair?

    Checks both operations identically in any parameters appearing in the
    tensors or the witness entries.
    """
    if source.dim != target.dim:
        raise DimensionMismatch("source and target dims differ")
    return verify_witness_tensors((source.rhd, source.lhd),
                                  (target.rhd, target.lhd), witness)


# -- fingerprints ---------------------------------------------------------------


FINGERPRINT_COMPONENTS = (
    "dim", "rhd_image_dim", "lhd_image_dim", "sum_image_dim", "sum_power_dims",
    "center_ad_dim", "center_sum_dim", "left_annihilator_dim",
    "right_annihilator_dim", "two_nilpotent", "sum_commutative",
    "sym_diff_image_dim",
)


@dataclass(frozen=True)
class Fingerprint:
    """Basis-invariant profile of a pair at an instantiated point.

    Every component is a rank or flag of an object that transports
    canonically under basis change, so equal pairs of fingerprints are a
    precondition for isomorphism and differing ones certify separation.
    """
    dim: int
    rhd_image_dim: int
    lhd_image_dim: int
    sum_image_dim: int
    sum_power_dims: tuple
    center_ad_dim: int
    center_sum_dim: int
    left_annihilator_dim: int
    right_annihilator_dim: int
    two_nilpotent: bool
    sum_commutative: bool
    sym_diff_image_dim: int

    def components(self) -> tuple:
        return tuple(getattr(self, name) for name in FINGERPRINT_COMPONENTS)

    def differing(self, other: "Fingerprint") -> tuple:
        return tuple(name for name in FINGERPRINT_COMPONENTS
                     if getattr(self, name) != getattr(other, name))


def _image_dim(tensor, n: int) -> int:
    return linalg.span_dim([tensor[i][j] for i in range(n) for j in range(n)])


def fingerprint(ad: AdPair, assign=None) -> Fingerprint:
    """Compute the invariant profile; parameters must be instantiated."""
    n = ad.dim
    r = ad.rhd.constant_tensor(assign)
    l = ad.lhd.constant_tensor(assign)
    s = [[[r[i][j][k] + l[i][j][k] for k in range(n)] for j in range(n)]
         for i in range(n)]
    const_pair = AdPair(
        StructureConstants(n, [[[Poly.const(x) for x in row] for row in plane]
                               for plane in r]),
        StructureConstants(n, [[[Poly.const(x) for x in row] for row in plane]
                               for plane in l]))
    sum_alg = UnaryAlgebra(StructureConstants(
        n, [[[Poly.const(x) for x in row] for row in plane] for plane in s]))
    series = power_series(sum_alg)
    sym_rows = []
    for i in range(n):
        for j in range(i, n):
            sym_rows.append([r[i][j][k] - l[i][j][k] + r[j][i][k] - l[j][i][k]
                             for k in range(n)])
    return Fingerprint(
        dim=n,
        rhd_image_dim=_image_dim(r, n),
        lhd_image_dim=_image_dim(l, n),
        sum_image_dim=_image_dim(s, n),
        sum_power_dims=series.dims,
        center_ad_dim=len(center_ad(const_pair)),
        center_sum_dim=len(center_associative(sum_alg)),
        left_annihilator_dim=len(left_annihilator(
            (const_pair.rhd, const_pair.lhd), n)),
        right_annihilator_dim=len(right_annihilator(
            (const_pair.rhd, const_pair.lhd), n)),
        two_nilpotent=is_two_nilpotent(const_pair),
        sum_commutative=all(s[i][j] == s[j][i] for i in range(n) for j in range(n)),
        sym_diff_image_dim=linalg.span_dim(sym_rows),
    )


# -- bounded witness search -------------------------------------------------------


def rational_grid(bound: int):
    """Rationals p/q with |p|, q <= bound, ordered simplest first."""
    values = {Fraction(0)}
    for q in range(1, bound + 1):
        for p in range(1, bound + 1):
            values.add(Fraction(p, q))
            values.add(Fraction(-p, q))
    return sorted(values, key=lambda f: (abs(f.numerator) + f.denominator,
                                         f.denominator, abs(f), f < 0))


@dataclass(frozen=True)
class SearchResult:
    status: str                       # "found" | "separated" | "not_found"
    witness: Witness | None = None
    separation: tuple = ()            # differing fingerprint components
    examined: int = 0


def _verify_candidate(src, tgt, rows) -> bool:
    n = len(rows)
    for o in range(2):
        s, g = src[o], tgt[o]
        for i in range(n):
            for j in range(n):
                for m in range(n):
                    lhs = Fraction(0)
                    for p in range(n):
                        if rows[i][p] == 0:
                            continue
                        for q in range(n):
                            if rows[j][q] == 0 or s[p][q][m] == 0:
                                continue
                            lhs += rows[i][p] * rows[j][q] * s[p][q][m]
                    rhs = Fraction(0)
                    for k in range(n):
                        if g[i][j][k] != 0 and rows[k][m] != 0:
                            rhs += g[i][j][k] * rows[k][m]
                    if lhs != rhs:
                        return False
    return True


def search_witness(source: AdPair, target: AdPair, assign=None, bound: int = 3,
                   radicand=None, budget: int = 200_000) -> SearchResult:
    """Bounded enumeration of rational witnesses at an instantiated point.

    Fingerprints are compared first; unequal components short-circuit into a
    separation certificate.  Otherwise candidate matrices with entries p/q,
    |p|, |q| <= bound are tried in canonical order; the linear constraints
    imposed by the first-row image are solved before enumerating deeper rows.
    A not-found outcome is inconclusive, never a proof.

    With a radicand, a second pass retries first rows scaled by sqrt(d);
    this covers the diagonal-rescaling witnesses that need a square root.
    """
    if source.dim != target.dim:
        raise DimensionMismatch("source and target dims differ")
    fp_s = fingerprint(source, assign)
    fp_t = fingerprint(target, assign)
    if fp_s != fp_t:
        return SearchResult("separated", separation=fp_s.differing(fp_t))
    n = source.dim
    src = (source.rhd.constant_tensor(assign), source.lhd.constant_tensor(assign))
    tgt = (target.rhd.constant_tensor(assign), target.lhd.constant_tensor(assign))

    examined = 0
    ident = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    if _verify_candidate(src, tgt, ident):
        return SearchResult("found", Witness.from_rows(ident), examined=1)
    examined += 1

    grid = rational_grid(bound)

    def column_constraints(first_row):
        """Rows k>=1 constraints per column from the (e'_1, e'_1) products.

        Returns per-column (matrix, rhs) linear systems over T[1..n-1][m],
        or None when inconsistent.
        """
        systems = []
        for m in range(n):
            mat, rhs = [], []
            for o in range(2):
                lhs = Fraction(0)
                for p in range(n):
                    if first_row[p] == 0:
                        continue
                    for q in range(n):
                        if first_row[q] != 0 and src[o][p][q][m] != 0:
                            lhs += first_row[p] * first_row[q] * src[o][p][q][m]
                row = [tgt[o][0][0][k] for k in range(1, n)]
                const = lhs - tgt[o][0][0][0] * first_row[m]
                if any(row):
                    mat.append(row)
                    rhs.append(const)
                elif const != 0:
                    return None
            systems.append((mat, rhs))
        return systems

    def solve_column(mat, rhs):
        """Particular solution + nullspace basis, or None if inconsistent."""
        w = n - 1
        if not mat:
            return [Fraction(0)] * w, [[Fraction(1 if i == j else 0) for j in range(w)]
                                       for i in range(w)]
        aug = [list(r) + [v] for r, v in zip(mat, rhs)]
        red, pivots = linalg.rref(aug)
        if w in pivots:
            return None
        particular = [Fraction(0)] * w
        for row, pc in zip(red, pivots):
            particular[pc] = row[-1]
        null = linalg.nullspace([r[:-1] for r in red], w)
        return particular, null

    def complexity(values):
        return sum(abs(v.numerator) + v.denominator for v in values)

    first_rows = sorted(
        (row for row in iproduct(grid, repeat=n) if any(row)),
        key=lambda row: (complexity(row),
                         [(v.numerator, v.denominator) for v in row]))
    per_cell_cap = 4096  # keeps one unconstrained first row from eating the budget
    for first_row in first_rows:
        systems = column_constraints(list(first_row))
        if systems is None:
            continue
        solved = [solve_column(mat, rhs) for mat, rhs in systems]
        if any(s is None for s in solved):
            continue
        free_dims = [len(s[1]) for s in solved]
        produced = 0
        for choice in iproduct(*[iproduct(grid, repeat=fd) for fd in free_dims]):
            rows = [[Fraction(0)] * n for _ in range(n)]
            rows[0] = list(first_row)
            for m in range(n):
                particular, null = solved[m]
                col = list(particular)
                for c, basis_vec in zip(choice[m], null):
                    col = [x + c * y for x, y in zip(col, basis_vec)]
                for k in range(1, n):
                    rows[k][m] = col[k - 1]
            examined += 1
            produced += 1
            if linalg.det(rows) != 0 and _verify_candidate(src, tgt, rows):
                return SearchResult("found", Witness.from_rows(rows), examined=examined)
            if examined >= budget or produced >= per_cell_cap:
                break
        if examined >= budget:
            break

    if radicand is not None:
        found = _search_quadratic(src, tgt, n, bound, radicand)
        if found is not None:
            return SearchResult("found", found, examined=examined)
    return SearchResult("not_found", examined=examined)


def _search_quadratic(src, tgt, n, bound, d, budget=500_000):
    """Small search over matrices with entries a + b*sqrt(d).

    Only diagonal-times-permutation shapes are tried; these cover the
    square-root rescalings that arise in normalisation arguments.  For a
    candidate e'_i = d_i e_{s(i)} the transport condition collapses to one
    scalar identity per tensor cell, so candidates are cheap to reject.
    """
    grid = rational_grid(bound)
    scalars = []
    for a in grid:
        for b in grid:
            if a == 0 and b == 0:
                continue
            scalars.append(QuadExt(a, b, d))
    idx = range(n)
    cells = [(i, j, k) for i in idx for j in idx for k in idx]
    examined = 0
    for perm in permutations(idx):
        for diag in iproduct(scalars, repeat=n):
            examined += 1
            if examined > budget:
                return None
            ok = True
            for o in range(2):
                s, g = src[o], tgt[o]
                for i, j, k in cells:
                    lhs = diag[i] * diag[j] * s[perm[i]][perm[j]][perm[k]]
                    rhs = diag[k] * g[i][j][k]
                    if lhs != rhs:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                rows = [[QuadExt(0, 0, d) for _ in idx] for _ in idx]
                for i in idx:
                    rows[i][perm[i]] = diag[i]
                return Witness(tuple(tuple(r) for r in rows), Fraction(d))
    return None
