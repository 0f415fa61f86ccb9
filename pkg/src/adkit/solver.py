"""Compatibility solver: which two-operation structures sum to a given
associative algebra?

The unknowns are the n^3 coefficients u{i}_{j}_{k} of the first operation on
basis pairs; the second operation is eliminated up front through the sum
constraint (lhd = mul - rhd), so the seven defining identities expand to
polynomial equations of total degree at most two in the unknowns.  Those from
the mixed-associator law (id5) are linear, which the generator asserts.

Elimination loop, per branch:

1. canonicalise (drop zeros, deduplicate up to scaling);
2. substitute away unknowns that occur linearly with a constant
   coefficient, preferring equations with the fewest unknowns and then the
   lexicographically lowest pivot;
3. when substitutions stall, row-reduce the equations over their monomials
   to surface linear or constant consequences of rational combinations
   (each extracted row records its lineage so certificates replay);
4. split on a quadratic: a factor shape (unknown)*(linear) = 0, or a
   single-unknown quadratic a*u^2 + b*u + c resolved through its
   discriminant (zero forces the double root, a constant square splits on
   the two polynomial roots);
5. a branch dies when an equation reduces to a nonzero rational constant,
   or a recorded side condition reduces to zero -- either way the branch
   carries a replayable trace ending in the contradiction;
6. branches that exceed the split budget, or whose remaining equations fit
   no supported shape, stay honestly "stuck".

The union of the surviving branches' solution sets (side conditions
included), together with the stuck branches, equals the original solution
set: substitutions and row combinations are invertible rewrites, and both
split shapes partition the solution set exactly.  A quadratic whose
discriminant is a nonzero non-square rational leaves the branch
"stuck: needs-extension" rather than infeasible, because the root exists
over the complex field even though no rational represents it.

Branches are independent after splitting (pure data), so they could be
processed concurrently; results are sorted by case path before reporting,
making the output order-independent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .algebra import (AdPair, IDENTITY_NAMES, StructureConstants, UnaryAlgebra,
                      _identity_residual, check_antidendriform, is_associative)
from .errors import (ConstraintViolation, MissingAssignment, NotAssociative,
                     SideConditionViolation)
from .scalars import (Poly, format_poly, is_rational_square, rational_sqrt)


def unknown_name(i: int, j: int, k: int) -> str:
    """Variable name for the e_k coefficient of e_i rhd e_j (1-based)."""
    return f"u{i}_{j}_{k}"


@dataclass(frozen=True)
class Equation:
    prov: str
    poly: Poly


@dataclass(frozen=True)
class ConstraintSystem:
    dim: int
    base: UnaryAlgebra
    unknowns: tuple            # all n^3 names, lexicographic in (i, j, k)
    equations: tuple           # deduplicated Equations
    params: frozenset          # parameter names of the base algebra

    def unknown_order(self, name: str) -> int:
        return self._index[name]

    def __post_init__(self):
        object.__setattr__(self, "_index",
                           {u: n for n, u in enumerate(self.unknowns)})


def _unknown_degree(p: Poly, unknowns: frozenset) -> int:
    return p.degree_in(unknowns)


def generate_constraints(assoc: UnaryAlgebra) -> ConstraintSystem:
    """Expand the seven identities over all basis triples into equations.

    The input must be associative (symbolically, in any parameters); the
    equations are deduplicated up to scaling, keeping the provenance of the
    first occurrence.
    """
    rep = is_associative(assoc)
    if not rep.ok:
        bad = ", ".join(str(tuple(x + 1 for x in t)) for t, _ in rep.violations[:3])
        raise NotAssociative(f"input is not associative (triples {bad})")
    n = assoc.dim
    names = tuple(unknown_name(i, j, k)
                  for i in range(1, n + 1) for j in range(1, n + 1)
                  for k in range(1, n + 1))
    name_set = frozenset(names)
    r_sym = StructureConstants(
        n, [[[Poly.var(unknown_name(i + 1, j + 1, k + 1)) for k in range(n)]
             for j in range(n)] for i in range(n)])
    l_sym = assoc.sc.add(r_sym.neg())
    s_sym = assoc.sc
    seen: dict = {}
    equations = []
    for ident in IDENTITY_NAMES:
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    res = _identity_residual(ident, r_sym, l_sym, s_sym, i, j, k)
                    for m in range(n):
                        p = res[m]
                        if p.is_zero():
                            continue
                        if ident == "id5" and _unknown_degree(p, name_set) > 1:
                            raise AssertionError(
                                "mixed-associator equation is not linear")
                        key = p.normalized_key()
                        if key in seen:
                            continue
                        prov = f"{ident}@({i + 1},{j + 1},{k + 1})#{m + 1}"
                        seen[key] = prov
                        equations.append(Equation(prov, p))
    return ConstraintSystem(n, assoc, names, tuple(equations),
                            frozenset(assoc.sc.variables()))


@dataclass(frozen=True)
class TraceStep:
    kind: str                  # substitute | case-zero | case-nonzero |
                               # root-case | combine | equation-contradiction |
                               # side-contradiction
    var: str | None
    poly: Poly | None          # rhs, quotient, combination, or contradiction
    prov: str | None
    lineage: tuple = ()        # ((prov, coeff), ...) for combine steps

    def describe(self) -> str:
        if self.kind == "substitute":
            return f"{self.var} := {format_poly(self.poly)}  [from {self.prov}]"
        if self.kind == "case-zero":
            return f"case {self.var} = 0  [splitting {self.prov}]"
        if self.kind == "case-nonzero":
            return (f"case {self.var} != 0: {self.prov} reduces to "
                    f"{format_poly(self.poly)} = 0")
        if self.kind == "root-case":
            return f"case {self.var} = {format_poly(self.poly)}  [root of {self.prov}]"
        if self.kind == "combine":
            combo = " + ".join(f"({c})*{p}" for p, c in self.lineage)
            return f"{self.prov}: {combo} = {format_poly(self.poly)}"
        if self.kind == "equation-contradiction":
            return f"{self.prov} reduces to {format_poly(self.poly)} != 0"
        if self.kind == "side-contradiction":
            return f"side condition {self.prov} != 0 reduces to 0"
        return self.kind


@dataclass
class Branch:
    """A partial solution: substitutions, residual equations, side conditions."""
    subs: dict = field(default_factory=dict)        # var -> Poly, fully reduced
    sub_order: list = field(default_factory=list)
    equations: list = field(default_factory=list)   # [Equation]
    side: list = field(default_factory=list)        # [(Poly, origin prov)]
    trace: list = field(default_factory=list)       # [TraceStep]
    path: tuple = ()
    depth: int = 0
    status: str = "open"       # open | solved | infeasible | stuck
    stuck_reason: str = ""
    derived: int = 0           # counter for combination-derived equations

    def clone(self) -> "Branch":
        return Branch(dict(self.subs), list(self.sub_order),
                      list(self.equations), list(self.side), list(self.trace),
                      self.path, self.depth, self.status, self.stuck_reason,
                      self.derived)

    def free_unknowns(self, system: ConstraintSystem) -> tuple:
        return tuple(u for u in system.unknowns if u not in self.subs)

    def certificate(self) -> tuple:
        """Serialisable replayable record of this branch's derivation."""
        out = []
        for s in self.trace:
            record = {"kind": s.kind, "var": s.var,
                      "value": None if s.poly is None else format_poly(s.poly),
                      "prov": s.prov}
            if s.lineage:
                record["lineage"] = [[p, str(c)] for p, c in s.lineage]
            out.append(record)
        return tuple(out)


def _apply_substitution(branch: Branch, var: str, rhs: Poly, kind: str, prov: str):
    mapping = {var: rhs}
    branch.subs = {v: p.subs(mapping) for v, p in branch.subs.items()}
    branch.subs[var] = rhs
    branch.sub_order.append(var)
    branch.equations = [Equation(e.prov, e.poly.subs(mapping))
                        for e in branch.equations]
    branch.side = [(p.subs(mapping), origin) for p, origin in branch.side]
    branch.trace.append(TraceStep(kind, var, rhs, prov))


def _linear_candidates(branch: Branch, system: ConstraintSystem):
    """(unknown count, pivot order, eq index, var, rhs) for solvable equations."""
    unknown_set = frozenset(system.unknowns)
    best = None
    for idx, eq in enumerate(branch.equations):
        p = eq.poly
        uvars = sorted(p.variables() & unknown_set, key=system.unknown_order)
        if not uvars or _unknown_degree(p, unknown_set) != 1:
            continue
        for var in uvars:
            a, b = p.linear_parts(var)
            if not a.is_constant() or a.is_zero():
                continue
            cand = (len(uvars), system.unknown_order(var), idx)
            if best is None or cand < best[0]:
                rhs = b * (Fraction(-1) / a.constant_value())
                best = (cand, var, rhs, eq.prov)
            break  # lower pivots in the same equation were already tried
    return best


def _quadratic_shapes(p: Poly, unknown_set: frozenset, order):
    """Views of p as a*u^2 + b*u + c with a a nonzero rational constant.

    Yields (u, a, b, disc) in pivot order; the discriminant decides the
    move: disc = 0 forces u := -b/2a exactly (p = a*(u + b/2a)^2), a
    nonzero constant square disc = r^2 factors p = a*(u - r1)*(u - r2)
    with polynomial roots, and a constant non-square disc has no root in
    the rationals even though one exists over the complex field.
    """
    uvars = sorted(p.variables() & unknown_set, key=order)
    for u in uvars:
        a_terms: dict = {}
        b_terms: dict = {}
        c_terms: dict = {}
        ok = True
        for mono, coeff in p.terms.items():
            exps = dict(mono)
            e = exps.pop(u, 0)
            stripped = tuple(sorted(exps.items()))
            if e == 0:
                c_terms[stripped] = coeff
            elif e == 1:
                b_terms[stripped] = coeff
            elif e == 2:
                a_terms[stripped] = coeff
            else:
                ok = False
                break
        if not ok or not a_terms:
            continue
        a = Poly(a_terms, _trusted=True)
        if not a.is_constant():
            continue
        b = Poly(b_terms, _trusted=True)
        c = Poly(c_terms, _trusted=True)
        disc = b * b - a * c * 4
        yield u, a.constant_value(), b, disc


def _factor_shape(p: Poly, unknown_set: frozenset, order):
    """Match u * (linear) = 0; returns (u, quotient) with the lowest such u."""
    uvars = sorted(p.variables() & unknown_set, key=order)
    for var in uvars:
        q = p.divide_by_var(var)
        if q is not None and not q.is_zero():
            if _unknown_degree(q, unknown_set) <= 1:
                return var, q
    return None


def _linear_consequences(branch: Branch, unknown_set: frozenset,
                         cap: int = 200) -> list:
    """Linear or constant equations hiding in the rational span of the
    current ones.

    The equations are viewed as vectors over their monomials, with the
    monomials that are quadratic in unknowns eliminated first; reduced rows
    whose leading monomial falls outside that block are degree <= 1
    consequences.  Row operations preserve the solution set, and each
    extracted row records its lineage (the rational combination of source
    equations) so certificates replay mechanically.
    """
    eqs = branch.equations
    if len(eqs) < 2 or len(eqs) > cap:
        return []

    def udeg(mono):
        return sum(e for name, e in mono if name in unknown_set)

    monos = sorted({m for eq in eqs for m in eq.poly.terms},
                   key=lambda m: (-udeg(m), m))
    if not monos or udeg(monos[0]) <= 1:
        return []
    col = {m: i for i, m in enumerate(monos)}
    width = len(monos)
    n_eq = len(eqs)
    aug = []
    for i, eq in enumerate(eqs):
        row = [Fraction(0)] * (width + n_eq)
        for m, c in eq.poly.terms.items():
            row[col[m]] = c
        row[width + i] = Fraction(1)
        aug.append(row)
    r = 0
    for c_idx in range(width):
        pivot = None
        for i in range(r, n_eq):
            if aug[i][c_idx] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = aug[r][c_idx]
        aug[r] = [x / inv for x in aug[r]]
        for i in range(n_eq):
            if i != r and aug[i][c_idx] != 0:
                f = aug[i][c_idx]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        r += 1
        if r == n_eq:
            break
    existing = {eq.poly.normalized_key() for eq in eqs}
    out = []
    for i in range(n_eq):
        vec = aug[i][:width]
        if not any(vec):
            continue
        poly = Poly({monos[j]: vec[j] for j in range(width) if vec[j]})
        if poly.degree_in(unknown_set) > 1:
            continue
        key = poly.normalized_key()
        if key in existing:
            continue
        existing.add(key)
        lineage = tuple((eqs[j].prov, aug[i][width + j])
                        for j in range(n_eq) if aug[i][width + j])
        out.append((poly, lineage))
    return out


def _canonicalise(branch: Branch):
    seen = set()
    kept = []
    for eq in branch.equations:
        if eq.poly.is_zero():
            continue
        key = eq.poly.normalized_key()
        if key in seen:
            continue
        seen.add(key)
        kept.append(eq)
    branch.equations = kept
    seen_sides = set()
    sides = []
    for p, origin in branch.side:
        key = p.normalized_key()
        if key in seen_sides:
            continue
        seen_sides.add(key)
        sides.append((p, origin))
    branch.side = sides


def _scan_contradiction(branch: Branch) -> bool:
    for eq in branch.equations:
        if eq.poly.is_constant() and not eq.poly.is_zero():
            branch.trace.append(TraceStep("equation-contradiction", None,
                                          eq.poly, eq.prov))
            branch.status = "infeasible"
            return True
    kept_sides = []
    for p, origin in branch.side:
        if p.is_zero():
            branch.trace.append(TraceStep("side-contradiction", None, p, origin))
            branch.status = "infeasible"
            return True
        if p.is_constant():
            continue  # satisfied forever
        kept_sides.append((p, origin))
    branch.side = kept_sides
    return False


def eliminate(system: ConstraintSystem, max_depth: int = 32,
              step_limit: int = 100_000) -> list:
    """Explore the case tree; returns terminal branches sorted by case path.

    ``max_depth`` bounds the number of splits along any root-to-leaf path;
    branches that would exceed it are marked stuck instead of split.
    """
    unknown_set = frozenset(system.unknowns)
    root = Branch(equations=list(system.equations))
    queue = [root]
    done = []
    while queue:
        branch = queue.pop()
        steps = 0
        while branch.status == "open":
            steps += 1
            if steps > step_limit:
                branch.status = "stuck"
                branch.stuck_reason = "step-budget"
                break
            _canonicalise(branch)
            if _scan_contradiction(branch):
                break
            if not branch.equations:
                branch.status = "solved"
                break
            cand = _linear_candidates(branch, system)
            if cand is not None:
                _, var, rhs, prov = cand
                _apply_substitution(branch, var, rhs, "substitute", prov)
                continue
            consequences = _linear_consequences(branch, unknown_set)
            if consequences:
                for poly, lineage in consequences:
                    branch.derived += 1
                    prov = f"lin{branch.derived}"
                    branch.equations.append(Equation(prov, poly))
                    branch.trace.append(
                        TraceStep("combine", None, poly, prov, lineage))
                continue
            # quadratics in one unknown: a forced root needs no split
            forced = None
            splits = []
            needs_extension = False
            for idx, eq in enumerate(branch.equations):
                for var, a, b, disc in _quadratic_shapes(
                        eq.poly, unknown_set, system.unknown_order):
                    if disc.is_zero():
                        forced = (var, b * (Fraction(-1) / (2 * a)), eq.prov)
                        break
                    if disc.is_constant():
                        d = disc.constant_value()
                        if is_rational_square(d):
                            splits.append((system.unknown_order(var), idx,
                                           "root", var, (a, b, rational_sqrt(d)),
                                           eq.prov))
                        else:
                            needs_extension = True
                if forced is not None:
                    break
                fac = _factor_shape(eq.poly, unknown_set, system.unknown_order)
                if fac is not None:
                    var, quotient = fac
                    splits.append((system.unknown_order(var), idx,
                                   "factor", var, quotient, eq.prov))
            if forced is not None:
                var, rhs, prov = forced
                _apply_substitution(branch, var, rhs, "substitute", prov)
                continue
            if splits:
                if branch.depth + 1 > max_depth:
                    branch.status = "stuck"
                    branch.stuck_reason = "split-budget"
                    break
                splits.sort(key=lambda s: (s[0], s[1]))
                _, _, kind, var, payload, prov = splits[0]
                if kind == "root":
                    a, b, root = payload
                    for sign in (1, -1):
                        rhs = (b + Poly.const(-sign * root)) * \
                            (Fraction(-1) / (2 * a))
                        child = branch.clone()
                        child.depth += 1
                        child.path = branch.path + (f"{var}:root{'+' if sign > 0 else '-'}",)
                        _apply_substitution(child, var, rhs, "root-case", prov)
                        queue.append(child)
                else:
                    zero = branch.clone()
                    zero.depth += 1
                    zero.path = branch.path + (f"{var}=0",)
                    _apply_substitution(zero, var, Poly.zero(), "case-zero", prov)
                    nonzero = branch.clone()
                    nonzero.depth += 1
                    nonzero.path = branch.path + (f"{var}!=0",)
                    nonzero.side.append((Poly.var(var), prov))
                    derived = f"{prov}/{var}"
                    nonzero.equations = [
                        Equation(derived, payload) if i == splits[0][1] else e
                        for i, e in enumerate(nonzero.equations)]
                    nonzero.trace.append(
                        TraceStep("case-nonzero", var, payload, prov))
                    queue.append(nonzero)
                    queue.append(zero)
                branch.status = "split"
                break
            branch.status = "stuck"
            branch.stuck_reason = ("needs-extension" if needs_extension
                                   else "nonlinear")
        if branch.status != "split":
            done.append(branch)
    done.sort(key=lambda b: b.path)
    return done


def replay_certificate(system: ConstraintSystem, branch: Branch) -> bool:
    """Mechanically re-run a branch's trace against the original system.

    Each substitution must annihilate its source equation, each nonzero-case
    quotient must multiply back exactly, and the final step must exhibit the
    recorded contradiction.  Returns True when every step checks out.
    """
    eqs = {e.prov: e.poly for e in system.equations}
    sides: list[tuple[Poly, str]] = []
    for step in branch.trace:
        if step.kind in ("substitute", "case-zero", "root-case"):
            src = eqs.get(step.prov)
            if src is None or not src.subs({step.var: step.poly}).is_zero():
                return False
            mapping = {step.var: step.poly}
            eqs = {prov: p.subs(mapping) for prov, p in eqs.items()}
            sides = [(p.subs(mapping), origin) for p, origin in sides]
        elif step.kind == "case-nonzero":
            src = eqs.get(step.prov)
            if src is None or src != step.poly * Poly.var(step.var):
                return False
            eqs[f"{step.prov}/{step.var}"] = step.poly
            sides.append((Poly.var(step.var), step.prov))
        elif step.kind == "combine":
            total = Poly.zero()
            for prov, coeff in step.lineage:
                src = eqs.get(prov)
                if src is None:
                    return False
                total = total + src * coeff
            if total != step.poly:
                return False
            eqs[step.prov] = step.poly
        elif step.kind == "equation-contradiction":
            p = eqs.get(step.prov)
            if p is None or not p.is_constant() or p.is_zero() or p != step.poly:
                return False
        elif step.kind == "side-contradiction":
            if not any(origin == step.prov and p.is_zero() for p, origin in sides):
                return False
        else:
            return False
    return True


@dataclass(frozen=True)
class Family:
    """A branch converted to tensors over fresh parameters p1, p2, ...

    Solved branches have no residual equations; stuck branches keep theirs,
    and samples must satisfy them.
    """
    label: str
    params: tuple
    rhd: StructureConstants
    lhd: StructureConstants
    side: tuple                # Poly conditions, != 0
    residual: tuple            # Equations that must vanish at samples
    branch: Branch

    @property
    def solved(self) -> bool:
        return not self.residual

    def pair(self) -> AdPair:
        return AdPair(self.rhd, self.lhd, label=self.label)


@dataclass(frozen=True)
class EnumerationResult:
    system: ConstraintSystem
    families: tuple            # solved
    constrained: tuple         # stuck, with residual equations
    infeasible: tuple          # dead branches with certificates

    @property
    def status(self) -> str:
        if self.families or self.constrained:
            return "inconclusive" if self.constrained else "families"
        return "no-structure"


def _branch_parametrisation(branch: Branch, system: ConstraintSystem) -> dict:
    """Every unknown as a polynomial in the branch's free unknowns."""
    return {u: branch.subs.get(u, Poly.var(u)) for u in system.unknowns}


def _contained_in(b: Branch, a: Branch, system: ConstraintSystem) -> bool:
    """Exact containment of solution sets for solved branches.

    B lies inside A when A has no side conditions and every substitution
    relation of A becomes an identity under B's parametrisation.
    """
    if a.side:
        return False
    par_b = _branch_parametrisation(b, system)
    return all((par_b[v] - rhs.subs(par_b)).is_zero() for v, rhs in a.subs.items())


def _absorb_redundant_solved(solved: list, system: ConstraintSystem) -> list:
    """Drop solved branches contained in another solved branch.

    Dropping a contained branch leaves the union of solution sets unchanged;
    when two branches describe the same set, the lexicographically earlier
    case path survives.
    """
    kept = []
    for b in solved:
        drop = False
        for a in solved:
            if a is b or not _contained_in(b, a, system):
                continue
            if _contained_in(a, b, system):
                if a.path < b.path:
                    drop = True
                    break
            else:
                drop = True
                break
        if not drop:
            kept.append(b)
    return kept


def enumerate_compatible(assoc: UnaryAlgebra, max_depth: int = 32,
                         step_limit: int = 100_000) -> EnumerationResult:
    """Solve the compatibility system and package the outcome.

    Solved branches become parameterised pairs that are re-checked against
    the defining identities symbolically before being returned; infeasible
    branches carry replayable contradiction certificates.
    """
    system = generate_constraints(assoc)
    branches = eliminate(system, max_depth=max_depth, step_limit=step_limit)
    solved = [b for b in branches if b.status == "solved"]
    stuck = [b for b in branches if b.status == "stuck"]
    dead = [b for b in branches if b.status == "infeasible"]
    solved = _absorb_redundant_solved(solved, system)

    families = []
    constrained = []
    n = system.dim
    for number, branch in enumerate(solved + stuck, start=1):
        free = branch.free_unknowns(system)
        rename = {u: f"p{i}" for i, u in enumerate(free, start=1)}
        mapping = {u: Poly.var(p) for u, p in rename.items()}

        def entry_value(i, j, k):
            u = unknown_name(i + 1, j + 1, k + 1)
            return branch.subs.get(u, Poly.var(u)).subs(mapping)

        rhd = StructureConstants(
            n, [[[entry_value(i, j, k) for k in range(n)] for j in range(n)]
                for i in range(n)])
        lhd = assoc.sc.add(rhd.neg())
        fam = Family(
            label=f"family{number}",
            params=tuple(rename[u] for u in free),
            rhd=rhd, lhd=lhd,
            side=tuple(p.subs(mapping) for p, _ in branch.side),
            residual=tuple(Equation(e.prov, e.poly.subs(mapping))
                           for e in branch.equations),
            branch=branch)
        if branch.status == "solved":
            report = check_antidendriform(fam.pair())
            if not report.ok:
                raise AssertionError(
                    f"solved branch {fam.label} fails the identities; "
                    "the elimination is unsound")
            families.append(fam)
        else:
            constrained.append(fam)
    return EnumerationResult(system, tuple(families), tuple(constrained),
                             tuple(dead))


def sample_branch(family: Family, assign: Mapping[str, Fraction],
                  base_assign: Mapping[str, Fraction] | None = None) -> AdPair:
    """Instantiate a family at rational parameter values.

    The point must satisfy the side conditions (strictly nonzero) and any
    residual equations; the result then passes the defining identities by
    construction, which callers are encouraged to re-check.
    """
    full = dict(base_assign or {})
    full.update(assign)
    for p in family.params:
        if p not in full:
            raise MissingAssignment(f"no value for family parameter {p}")
    for cond in family.side:
        if cond.eval(full) == 0:
            raise SideConditionViolation(
                f"side condition {format_poly(cond)} != 0 fails at the sample")
    for eq in family.residual:
        if eq.poly.eval(full) != 0:
            raise ConstraintViolation(
                f"residual equation {eq.prov} is violated at the sample")
    rhd = family.rhd.map_entries(lambda p: Poly.const(p.eval(full)))
    lhd = family.lhd.map_entries(lambda p: Poly.const(p.eval(full)))
    return AdPair(rhd, lhd, label=f"{family.label}@sample")
