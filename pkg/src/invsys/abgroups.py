"""Finitely generated abelian groups as integer presentations.

A group is Z^ngens modulo the row lattice of a relation matrix; a
homomorphism is an integer matrix on generators that must carry every
source relator into the target's relation lattice.  Kernels, images,
cokernels and exactness all reduce to Smith-normal-form computations on
the relevant lattices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Optional, Sequence

from .intlinalg import (IntMatrix, in_lattice, inverse_unimodular,
                        invariant_factors, lattice_contains, relative_kernel,
                        smith_normal_form)


@dataclass(frozen=True)
class FgAbGroup:
    ngens: int
    relations: IntMatrix  # rows are relators in the generators

    def __post_init__(self):
        if self.relations.cols != self.ngens:
            raise ValueError("relation width must equal generator count")

    @staticmethod
    def free(n: int) -> "FgAbGroup":
        return FgAbGroup(n, IntMatrix.from_rows([], cols=n))

    @staticmethod
    def cyclic(order: int) -> "FgAbGroup":
        return FgAbGroup(1, IntMatrix.from_rows([[order]]))

    @staticmethod
    def trivial() -> "FgAbGroup":
        return FgAbGroup(0, IntMatrix.from_rows([], cols=0))

    def relation_lattice(self) -> IntMatrix:
        """Relators as columns in Z^ngens."""
        return self.relations.transpose()


def group_invariants(g: FgAbGroup) -> tuple[int, list[int]]:
    """(free rank, nontrivial invariant factors)."""
    factors = invariant_factors(g.relations)
    return g.ngens - len(factors), [f for f in factors if f != 1]


def is_trivial_group(g: FgAbGroup) -> bool:
    rank, torsion = group_invariants(g)
    return rank == 0 and not torsion


def group_order(g: FgAbGroup) -> Optional[int]:
    """Number of elements, or None when the group is infinite."""
    rank, torsion = group_invariants(g)
    if rank > 0:
        return None
    out = 1
    for f in torsion:
        out *= f
    return out


@dataclass(frozen=True)
class AbHom:
    source: FgAbGroup
    target: FgAbGroup
    matrix: IntMatrix  # (target.ngens x source.ngens), acts on columns

    def __post_init__(self):
        if self.matrix.rows != self.target.ngens or self.matrix.cols != self.source.ngens:
            raise ValueError("matrix shape does not match source/target")

    @staticmethod
    def identity(g: FgAbGroup) -> "AbHom":
        return AbHom(g, g, IntMatrix.identity(g.ngens))

    @staticmethod
    def zero(source: FgAbGroup, target: FgAbGroup) -> "AbHom":
        return AbHom(source, target, IntMatrix.zeros(target.ngens, source.ngens))


def hom_is_valid(h: AbHom) -> bool:
    """Every source relator must land in the target relation lattice."""
    lat = h.target.relation_lattice()
    for row in h.source.relations.entries:
        if not in_lattice(lat, h.matrix.apply(row)):
            return False
    return True


def hom_compose(g: AbHom, f: AbHom) -> AbHom:
    """g after f."""
    if f.target != g.source:
        raise ValueError("composition mismatch")
    return AbHom(f.source, g.target, g.matrix.mul(f.matrix))


def hom_equal(f: AbHom, g: AbHom) -> bool:
    """Equality as maps, i.e. columns agree modulo the target relations."""
    if f.source != g.source or f.target != g.target:
        return False
    lat = f.target.relation_lattice()
    for j in range(f.matrix.cols):
        diff = [a - b for a, b in zip(f.matrix.col(j), g.matrix.col(j))]
        if not in_lattice(lat, diff):
            return False
    return True


def hom_is_zero(h: AbHom) -> bool:
    return hom_equal(h, AbHom.zero(h.source, h.target))


def subquotient(gens: IntMatrix, sub: IntMatrix) -> FgAbGroup:
    """(span of gens columns) / (span of sub columns) as a presented group.

    The quotient is presented on the given generating columns; its relators
    are exactly the integer combinations of the generators that fall into
    the sub-lattice.
    """
    rel = relative_kernel(gens, sub)
    return FgAbGroup(gens.cols, rel.transpose())


def _kernel_lattice(h: AbHom) -> IntMatrix:
    """Columns generating {x in Z^source : h(x) lies in target relations}."""
    return relative_kernel(h.matrix, h.target.relation_lattice())


def hom_kernel(h: AbHom) -> FgAbGroup:
    ker = _kernel_lattice(h)
    return subquotient(ker, h.source.relation_lattice())


def hom_image(h: AbHom) -> FgAbGroup:
    """Image subgroup of the target, presented on the source generators."""
    rel = relative_kernel(h.matrix, h.target.relation_lattice())
    return FgAbGroup(h.source.ngens, rel.transpose())


def hom_cokernel(h: AbHom) -> FgAbGroup:
    rels = h.target.relations.vstack(h.matrix.transpose())
    return FgAbGroup(h.target.ngens, rels)


def is_injective(h: AbHom) -> bool:
    return is_trivial_group(hom_kernel(h))


def is_surjective_hom(h: AbHom) -> bool:
    return is_trivial_group(hom_cokernel(h))


def composition_is_zero(f: AbHom, g: AbHom) -> bool:
    """Whether g o f is the zero map."""
    return hom_is_zero(hom_compose(g, f))


def is_exact_at(f: AbHom, g: AbHom) -> bool:
    """im f = ker g inside the shared middle group, by double inclusion.

    Both subgroups are lattices between the middle relation lattice and
    Z^ngens; equality is decided by mutual integer solvability.
    """
    if f.target != g.source:
        raise ValueError("target of f must be source of g")
    mid_lat = f.target.relation_lattice()
    im_lat = f.matrix.hstack(mid_lat)
    ker_lat = _kernel_lattice(g)
    return lattice_contains(ker_lat, im_lat) and lattice_contains(im_lat, ker_lat)


def invariants_embed(small: tuple[int, list[int]], big: tuple[int, list[int]]) -> bool:
    """Necessary-and-sufficient test for an embedding between f.g. groups.

    Ranks must not drop, and for each prime power p^k the number of cyclic
    summands of order divisible by p^k must not drop either.
    """
    rank_s, tors_s = small
    rank_b, tors_b = big
    if rank_s > rank_b:
        return False

    def primes(factors):
        ps = set()
        for f in factors:
            n, p = f, 2
            while n > 1:
                while n % p == 0:
                    n //= p
                    ps.add(p)
                p += 1
        return ps

    def val(n, p):
        v = 0
        while n % p == 0:
            n //= p
            v += 1
        return v

    for p in primes(tors_s):
        k = 1
        while True:
            cnt_s = sum(1 for f in tors_s if val(f, p) >= k)
            if cnt_s == 0:
                break
            cnt_b = sum(1 for f in tors_b if val(f, p) >= k)
            if cnt_s > cnt_b:
                return False
            k += 1
    return True


class FiniteGroupElements:
    """Element enumeration and canonical forms for a finite presented group.

    Canonical coordinates live in the Smith basis of the relation lattice:
    coordinate i ranges over Z/d_i.  Only usable when the group is finite.
    """

    def __init__(self, g: FgAbGroup):
        if group_order(g) is None:
            raise ValueError("group is infinite")
        self.group = g
        lat = g.relation_lattice()  # ngens x nrel
        u, d, _ = smith_normal_form(lat)
        self.u = u
        self.uinv = inverse_unimodular(u) if g.ngens else IntMatrix.identity(0)
        self.diag = [d.entries[i][i] if i < lat.cols else 0 for i in range(g.ngens)]
        assert all(di > 0 for di in self.diag), "finite group must have full-rank relations"

    def canon(self, x: Sequence[int]) -> tuple[int, ...]:
        """Canonical form of a generator-coordinate vector."""
        y = self.u.apply(x)
        return tuple(yi % di for yi, di in zip(y, self.diag))

    def elements(self) -> list[tuple[int, ...]]:
        """All elements in canonical coordinates."""
        return [tuple(t) for t in product(*(range(d) for d in self.diag))]

    def to_gen_coords(self, canon: Sequence[int]) -> tuple[int, ...]:
        return self.uinv.apply(canon)


@lru_cache(maxsize=1024)
def finite_elements(g: FgAbGroup) -> FiniteGroupElements:
    return FiniteGroupElements(g)


def apply_hom_canon(h: AbHom, canon: Sequence[int]) -> tuple[int, ...]:
    """Apply a hom between finite groups in canonical coordinates."""
    src = finite_elements(h.source)
    tgt = finite_elements(h.target)
    return tgt.canon(h.matrix.apply(src.to_gen_coords(canon)))
