"""Limits and higher limits of abelian-group systems over finite posets.

The higher limits are computed as cohomology of the normalized nerve
cochain complex: degree n is the direct sum, over strictly increasing
flags i0 < ... < in, of the group at the flag's smallest element, and the
differential combines the bond into the new smallest element with the
alternating sum of flag-face omissions.  Degrees above the longest chain
vanish, so the complex is finite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .abgroups import (AbHom, FgAbGroup, group_invariants, hom_compose,
                       hom_equal, hom_is_valid, is_surjective_hom,
                       is_trivial_group, subquotient)
from .errors import BudgetExceeded, FunctorialityViolation, MissingBond
from .intlinalg import IntMatrix, in_lattice, lattice_contains, relative_kernel
from .poset import Poset


class AbSystem:
    """Inverse system of finitely generated abelian groups over a poset."""

    def __init__(self, base: Poset, groups: dict[str, FgAbGroup],
                 cover_bonds: dict[tuple[str, str], AbHom]):
        self.base = base
        self.groups = {e: groups[e] for e in base.elements}
        self.cover_bonds = dict(cover_bonds)
        self._composites: dict[tuple[str, str], AbHom] = {}

    def group(self, e: str) -> FgAbGroup:
        return self.groups[e]

    def bond(self, lower: str, upper: str) -> AbHom:
        """Composite bond group(upper) -> group(lower)."""
        if lower == upper:
            return AbHom.identity(self.groups[lower])
        key = (lower, upper)
        if key in self._composites:
            return self._composites[key]
        if not self.base.lt(lower, upper):
            raise ValueError(f"{lower} is not below {upper}")
        candidates = []
        for (lo, hi), step in self.cover_bonds.items():
            if hi == upper and self.base.leq(lower, lo):
                candidates.append((hom_compose(self.bond(lower, lo), step), lo))
        if not candidates:
            raise MissingBond(f"no cover path from {upper} down to {lower}")
        first, via = candidates[0]
        for other, via2 in candidates[1:]:
            if not hom_equal(first, other):
                raise FunctorialityViolation(lower, via, upper,
                                             f"paths through {via} and {via2} disagree")
        self._composites[key] = first
        return first


def validate_absystem(base: Poset, groups: dict[str, FgAbGroup],
                      cover_bonds: dict[tuple[str, str], AbHom]) -> AbSystem:
    for cov in base.covers:
        if cov not in cover_bonds:
            raise MissingBond(f"cover {cov[0]} < {cov[1]} has no bond")
    for (lo, hi), h in cover_bonds.items():
        if h.source != groups[hi] or h.target != groups[lo]:
            raise ValueError(f"bond {hi} -> {lo} has wrong source/target group")
        if not hom_is_valid(h):
            raise ValueError(f"bond {hi} -> {lo} does not respect relations")
    sys = AbSystem(base, groups, cover_bonds)
    for i in base.elements:
        for j in base.elements:
            if not base.leq(i, j):
                continue
            for k in base.elements:
                if base.leq(j, k):
                    composed = hom_compose(sys.bond(i, j), sys.bond(j, k))
                    if not hom_equal(composed, sys.bond(i, k)):
                        raise FunctorialityViolation(i, j, k)
    return sys


def is_surjective_absystem(sys: AbSystem) -> bool:
    return all(is_surjective_hom(sys.bond(i, j))
               for i in sys.base.elements for j in sys.base.elements
               if sys.base.lt(i, j))


@dataclass
class CochainComplex:
    """Normalized nerve complex of an AbSystem, stored as block data.

    flags[n] lists the degree-n flags; dims[n] is the total generator count
    of C(n); diff[n] maps C(n) -> C(n+1); lattices[n] has the block relation
    lattice of C(n) as columns.
    """
    flags: list[list[tuple[str, ...]]]
    dims: list[int]
    diff: list[IntMatrix]
    lattices: list[IntMatrix]

    @property
    def top_degree(self) -> int:
        return len(self.flags) - 1


DEFAULT_FLAG_BUDGET = 20000


def nerve_complex(sys: AbSystem, budget: int = DEFAULT_FLAG_BUDGET) -> CochainComplex:
    base = sys.base
    top = base.longest_chain()
    flags = [base.chains(n + 1) for n in range(top)]
    if sum(len(f) for f in flags) > budget:
        raise BudgetExceeded("nerve flag count exceeds budget")

    offsets: list[dict[tuple[str, ...], int]] = []
    dims: list[int] = []
    for n in range(top):
        off, total = {}, 0
        for fl in flags[n]:
            off[fl] = total
            total += sys.group(fl[0]).ngens
        offsets.append(off)
        dims.append(total)

    lattices = []
    for n in range(top):
        cols = []
        for fl in flags[n]:
            g = sys.group(fl[0])
            for row in g.relations.entries:
                col = [0] * dims[n]
                col[offsets[n][fl]: offsets[n][fl] + g.ngens] = list(row)
                cols.append(col)
        lattices.append(IntMatrix.from_cols(cols, rows=dims[n]))

    diffs = []
    for n in range(top):
        tgt_dim = dims[n + 1] if n + 1 < top else 0
        rows = [[0] * dims[n] for _ in range(tgt_dim)]
        if n + 1 < top:
            for gfl in flags[n + 1]:
                g0 = sys.group(gfl[0])
                r0 = offsets[n + 1][gfl]
                # bond term: source flag drops the smallest element
                src = gfl[1:]
                mat = sys.bond(gfl[0], gfl[1]).matrix
                c0 = offsets[n][src]
                for a in range(g0.ngens):
                    for b in range(mat.cols):
                        rows[r0 + a][c0 + b] += mat.entries[a][b]
                # face terms: drop an inner element, keep the coefficient group
                for k in range(1, n + 2):
                    src = gfl[:k] + gfl[k + 1:]
                    sign = -1 if k % 2 else 1
                    c0 = offsets[n][src]
                    for a in range(g0.ngens):
                        rows[r0 + a][c0 + a] += sign
        diffs.append(IntMatrix.from_rows(rows, cols=dims[n]))
    return CochainComplex(flags, dims, diffs, lattices)


def _cocycles(cx: CochainComplex, n: int) -> IntMatrix:
    """Columns generating {x in C(n) : d x lies in the degree-(n+1) relations}."""
    d_n = cx.diff[n]
    lat_next = cx.lattices[n + 1] if n + 1 <= cx.top_degree else IntMatrix.zeros(0, 0)
    if d_n.rows == 0:
        return IntMatrix.identity(cx.dims[n])
    return relative_kernel(d_n, lat_next)


def cohomology(cx: CochainComplex, n: int) -> FgAbGroup:
    """H^n = (cocycles mod relations) / (coboundaries), as a presented group."""
    if n < 0 or n > cx.top_degree:
        return FgAbGroup.trivial()
    z = _cocycles(cx, n)
    sub = cx.lattices[n]
    if n > 0:
        sub = sub.hstack(cx.diff[n - 1])
    assert lattice_contains(z, sub), "coboundaries must be cocycles"
    return subquotient(z, sub)


def derived_limit(sys: AbSystem, n: int,
                  budget: int = DEFAULT_FLAG_BUDGET) -> FgAbGroup:
    return cohomology(nerve_complex(sys, budget), n)


def h0_with_basis(sys: AbSystem) -> tuple[FgAbGroup, IntMatrix, CochainComplex]:
    """H^0 together with its generating columns inside C(0)."""
    cx = nerve_complex(sys)
    z = _cocycles(cx, 0)
    return subquotient(z, cx.lattices[0]), z, cx


def induced_limit_hom(level_maps: dict[str, AbHom],
                      src: AbSystem, tgt: AbSystem) -> AbHom:
    """The hom between H^0 groups induced by a level-wise map of systems."""
    h0_s, z_s, cx_s = h0_with_basis(src)
    h0_t, z_t, cx_t = h0_with_basis(tgt)
    # block-diagonal level map on C(0)
    rows = [[0] * cx_s.dims[0] for _ in range(cx_t.dims[0])]
    ro = co = 0
    for e in src.base.elements:
        m = level_maps[e].matrix
        for a in range(m.rows):
            for b in range(m.cols):
                rows[ro + a][co + b] = m.entries[a][b]
        ro += m.rows
        co += m.cols
    big = IntMatrix.from_rows(rows, cols=cx_s.dims[0])
    cols = []
    aug = z_t.hstack(cx_t.lattices[0])
    from .intlinalg import solve
    for j in range(z_s.cols):
        image = big.apply(z_s.col(j))
        sol = solve(aug, image)
        assert sol is not None, "level map does not preserve compatible families"
        cols.append(sol[: z_t.cols])
    mat = IntMatrix.from_cols(cols, rows=z_t.cols)
    h = AbHom(h0_s, h0_t, mat)
    assert hom_is_valid(h)
    return h


# -- exactness experiments ------------------------------------------------


@dataclass
class ExactnessReport:
    lim_a: tuple[int, list[int]]
    lim_b: tuple[int, list[int]]
    lim_c: tuple[int, list[int]]
    lim1_a: tuple[int, list[int]]
    u_injective: bool
    exact_at_middle: bool
    v_surjective: bool
    coker_v: tuple[int, list[int]]
    coker_embeds_in_lim1: bool
    a_surjective: bool
    base_has_maximum: bool

    @property
    def exact(self) -> bool:
        return self.u_injective and self.exact_at_middle and self.v_surjective

    @property
    def ok(self) -> bool:
        """Everything a surjective-first-term sequence over a directed
        base is guaranteed to satisfy at the limit."""
        verdict = self.u_injective and self.exact_at_middle and self.coker_embeds_in_lim1
        if self.a_surjective and self.base_has_maximum:
            verdict = verdict and self.v_surjective
        return verdict


def limit_exactness_check(a: AbSystem, b: AbSystem, c: AbSystem,
                          u: dict[str, AbHom], v: dict[str, AbHom]) -> ExactnessReport:
    """Check that taking limits preserves a level-wise short exact sequence.

    Verifies level-wise exactness and commuting ladders first, then computes
    the three limits with their induced maps and tests injectivity,
    middle exactness, surjectivity (expected when the kernel system is
    surjective and the base has a maximum), and that the cokernel of the
    right-hand limit map can embed into the first derived limit of the
    kernel system.
    """
    from .abgroups import hom_cokernel, hom_kernel, is_exact_at, is_injective
    from .errors import NotLevelwiseExact, SquaresDoNotCommute

    base = a.base
    for e in base.elements:
        ue, ve = u[e], v[e]
        if ue.source != a.group(e) or ue.target != b.group(e):
            raise ValueError(f"u at {e} has wrong endpoints")
        if ve.source != b.group(e) or ve.target != c.group(e):
            raise ValueError(f"v at {e} has wrong endpoints")
        if not (hom_is_valid(ue) and hom_is_valid(ve)):
            raise ValueError(f"level map at {e} does not respect relations")
        if not is_injective(ue):
            raise NotLevelwiseExact(f"u at {e} is not injective")
        if not is_exact_at(ue, ve):
            raise NotLevelwiseExact(f"sequence at {e} is not exact in the middle")
        if not is_trivial_group(hom_cokernel(ve)):
            raise NotLevelwiseExact(f"v at {e} is not surjective")
    for (lo, hi) in base.covers:
        if not hom_equal(hom_compose(u[lo], a.cover_bonds[(lo, hi)]),
                         hom_compose(b.cover_bonds[(lo, hi)], u[hi])):
            raise SquaresDoNotCommute(f"u-square at cover {lo} < {hi}")
        if not hom_equal(hom_compose(v[lo], b.cover_bonds[(lo, hi)]),
                         hom_compose(c.cover_bonds[(lo, hi)], v[hi])):
            raise SquaresDoNotCommute(f"v-square at cover {lo} < {hi}")

    lim_u = induced_limit_hom(u, a, b)
    lim_v = induced_limit_hom(v, b, c)
    lim1_a = derived_limit(a, 1)
    coker_v = hom_cokernel(lim_v)
    from .abgroups import invariants_embed
    report = ExactnessReport(
        lim_a=group_invariants(lim_u.source),
        lim_b=group_invariants(lim_u.target),
        lim_c=group_invariants(lim_v.target),
        lim1_a=group_invariants(lim1_a),
        u_injective=is_injective(lim_u),
        exact_at_middle=is_exact_at(lim_u, lim_v),
        v_surjective=is_trivial_group(hom_cokernel(lim_v)),
        coker_v=group_invariants(coker_v),
        coker_embeds_in_lim1=invariants_embed(group_invariants(coker_v),
                                              group_invariants(lim1_a)),
        a_surjective=is_surjective_absystem(a),
        base_has_maximum=base.has_maximum() is not None,
    )
    return report


def scd_witness_system(base: Poset) -> AbSystem:
    """The deterministic nonvanishing probe: Z at minimal elements, 0 above.

    Not a surjective system unless the poset is an antichain; it is seeded
    into scd sampling because it is the standard witness for a nonzero
    first derived limit on non-directed shapes (wedge: free rank 1).
    """
    minimal = [e for e in base.elements
               if not any(base.lt(x, e) for x in base.elements)]
    groups = {e: (FgAbGroup.free(1) if e in minimal else FgAbGroup.trivial())
              for e in base.elements}
    bonds = {}
    for (lo, hi) in base.covers:
        bonds[(lo, hi)] = AbHom.zero(groups[hi], groups[lo])
    return validate_absystem(base, groups, bonds)


def scd_finite(base: Poset, trials: int, seed: int,
               generator=None) -> int:
    """Sampled lower bound for the surjective cohomological dimension.

    Runs `trials` randomly generated surjective systems plus the
    deterministic witness probe, and returns the largest degree with a
    nonzero derived limit seen.  A sample, not a proof.
    """
    import random

    from .generators import random_surjective_absystem
    gen = generator or random_surjective_absystem
    rng = random.Random(seed)
    best = 0
    top = base.longest_chain()
    systems = [scd_witness_system(base)]
    systems += [gen(rng, base) for _ in range(trials)]
    for sys in systems:
        for n in range(top - 1, 0, -1):
            if n <= best:
                break
            if not is_trivial_group(derived_limit(sys, n)):
                best = n
                break
    return best
