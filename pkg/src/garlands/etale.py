"""Direct sums of finite fields S = K_1 + ... + K_t over a base field k.

The fixed k-basis of S is the concatenation of the power bases
1, y, ..., y^(n_i - 1) of the factors (y the canonical relative generator of
each factor over k).  With that basis the regular embedding of S into
n x n matrices over k is block diagonal, idempotents of rank-1 factors are
standard basis vectors, and a quadratic factor presented by y^2 = d produces
the classical [[x, y*d], [y, x]] block.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .config import DEFAULT_CAPS, Caps
from .finite_field import (
    Extension,
    FieldElement,
    FieldMatrix,
    FieldTable,
    construct_extension,
    extension_of,
)


class AlgebraError(Exception):
    pass


class AlgebraCapError(AlgebraError):
    pass


class AlgebraSpec:
    """An etale algebra over a finite field, given by factor degrees."""

    __slots__ = ("base", "degrees", "n", "extensions", "caps")

    def __init__(self, base: FieldTable, degrees: Sequence[int], caps: Caps = DEFAULT_CAPS):
        degrees = tuple(int(d) for d in degrees)
        if not degrees:
            raise AlgebraError("at least one factor required")
        if any(d < 1 for d in degrees):
            raise AlgebraError(f"factor degrees must be >= 1, got {degrees}")
        order = 1
        for d in degrees:
            order *= base.q**d
        if order > caps.algebra_order:
            raise AlgebraCapError(f"algebra order {order} exceeds cap {caps.algebra_order}")
        self.base = base
        self.degrees = degrees
        self.n = sum(degrees)
        self.caps = caps
        by_degree: dict[int, Extension] = {}
        exts = []
        for d in degrees:
            if d not in by_degree:
                top = construct_extension(base, d, caps)
                by_degree[d] = extension_of(base, top)
            exts.append(by_degree[d])
        self.extensions = tuple(exts)

    # -- identity --------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AlgebraSpec)
            and self.base == other.base
            and self.degrees == other.degrees
        )

    def __hash__(self) -> int:
        return hash((self.base, self.degrees))

    def __repr__(self) -> str:
        return f"AlgebraSpec(q={self.base.q}, degrees={self.degrees})"

    @property
    def factors(self) -> tuple[FieldTable, ...]:
        return tuple(e.top for e in self.extensions)

    @property
    def order(self) -> int:
        out = 1
        for e in self.extensions:
            out *= e.top.q
        return out

    @property
    def unit_count(self) -> int:
        out = 1
        for e in self.extensions:
            out *= e.top.q - 1
        return out

    def serialize(self) -> dict:
        return {"p": self.base.p, "base_degree": self.base.m, "degrees": list(self.degrees)}

    # -- componentwise arithmetic on index tuples -------------------------------

    def zero_comps(self) -> tuple[int, ...]:
        return (0,) * len(self.degrees)

    def one_comps(self) -> tuple[int, ...]:
        return tuple(e.top.one_index for e in self.extensions)

    def mul_comps(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        return tuple(e.top.mul_idx(x, y) for e, x, y in zip(self.extensions, a, b))

    def add_comps(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        return tuple(e.top.add_idx(x, y) for e, x, y in zip(self.extensions, a, b))

    def neg_comps(self, a: Sequence[int]) -> tuple[int, ...]:
        return tuple(e.top.neg_idx(x) for e, x in zip(self.extensions, a))

    def scalar_mul_comps(self, c: int, a: Sequence[int]) -> tuple[int, ...]:
        """Multiply by a base-field element (base index c)."""
        return tuple(e.top.mul_idx(int(e.embed[c]), x) for e, x in zip(self.extensions, a))

    def inv_comps(self, a: Sequence[int]) -> tuple[int, ...]:
        if any(x == 0 for x in a):
            raise ZeroDivisionError("not a unit")
        return tuple(e.top.inv_idx(x) for e, x in zip(self.extensions, a))

    def norm_comps(self, a: Sequence[int]) -> int:
        """Product of the factor norms, a base-field index."""
        acc = self.base.one_index
        for e, x in zip(self.extensions, a):
            acc = self.base.mul_idx(acc, e.rel_norm(x))
        return acc

    def coords_comps(self, a: Sequence[int]) -> tuple[int, ...]:
        """Coordinates in the fixed k-basis (length n, base indices)."""
        out: list[int] = []
        for e, x in zip(self.extensions, a):
            out.extend(e.coords(x))
        return tuple(out)

    def from_coords(self, coords: Sequence[int]) -> tuple[int, ...]:
        comps = []
        pos = 0
        for e, d in zip(self.extensions, self.degrees):
            comps.append(e.from_coords(coords[pos : pos + d]))
            pos += d
        return tuple(comps)

    # -- element objects --------------------------------------------------------

    def element(self, comps: Sequence[int]) -> "AlgebraElement":
        comps = tuple(int(c) for c in comps)
        if len(comps) != len(self.degrees):
            raise AlgebraError(f"expected {len(self.degrees)} components")
        for e, c in zip(self.extensions, comps):
            if not 0 <= c < e.top.q:
                raise AlgebraError(f"component index {c} out of range")
        return AlgebraElement(self, comps)

    @property
    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, self.one_comps())

    @property
    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, self.zero_comps())

    def elements(self) -> Iterator["AlgebraElement"]:
        for comps in itertools.product(*(range(e.top.q) for e in self.extensions)):
            yield AlgebraElement(self, comps)

    def units(self) -> Iterator["AlgebraElement"]:
        for comps in itertools.product(*(range(1, e.top.q) for e in self.extensions)):
            yield AlgebraElement(self, comps)

    def regular_rep_rows(self, comps: Sequence[int]) -> list[list[int]]:
        """Block-diagonal matrix of right multiplication, base-field indices."""
        n = self.n
        rows = [[0] * n for _ in range(n)]
        pos = 0
        for e, d, x in zip(self.extensions, self.degrees, comps):
            e._ensure_coords()
            basis_pow = e._ypow
            for col in range(d):
                prod = e.top.mul_idx(basis_pow[col], x)
                for row, c in enumerate(e.coords(prod)):
                    rows[pos + row][pos + col] = c
            pos += d
        return rows


@dataclass(frozen=True)
class AlgebraElement:
    """An element of an AlgebraSpec; comps holds one index per factor."""

    spec: AlgebraSpec
    comps: tuple[int, ...]

    @property
    def components(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(e.top, c) for e, c in zip(self.spec.extensions, self.comps))

    @property
    def is_unit(self) -> bool:
        return all(c != 0 for c in self.comps)

    def _check(self, other: "AlgebraElement") -> None:
        if self.spec != other.spec:
            raise AlgebraError("elements of different algebras")

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return AlgebraElement(self.spec, self.spec.mul_comps(self.comps, other.comps))

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return AlgebraElement(self.spec, self.spec.add_comps(self.comps, other.comps))

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return AlgebraElement(self.spec, self.spec.add_comps(self.comps, self.spec.neg_comps(other.comps)))

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.spec, self.spec.neg_comps(self.comps))

    def inverse(self) -> "AlgebraElement":
        return AlgebraElement(self.spec, self.spec.inv_comps(self.comps))

    def __repr__(self) -> str:
        return f"S{self.spec.degrees}{self.comps}"


@dataclass(frozen=True)
class RingAutomorphism:
    """A ring automorphism of S fixing the base field pointwise.

    perm[i] is the target slot of source factor i (degrees must match) and
    frob[i] the relative Frobenius power applied on the way.
    """

    spec: AlgebraSpec
    perm: tuple[int, ...]
    frob: tuple[int, ...]

    def apply(self, a: AlgebraElement) -> AlgebraElement:
        if a.spec != self.spec:
            raise AlgebraError("element of a different algebra")
        out = [0] * len(self.perm)
        for i, (target, e) in enumerate(zip(self.perm, self.frob)):
            out[target] = self.spec.extensions[i].rel_frobenius(a.comps[i], e)
        return AlgebraElement(self.spec, tuple(out))

    def matrix(self) -> FieldMatrix:
        """Matrix of this k-linear map in the fixed basis (columns = images)."""
        spec = self.spec
        n = spec.n
        rows = [[0] * n for _ in range(n)]
        offsets = [0]
        for d in spec.degrees:
            offsets.append(offsets[-1] + d)
        for i, (target, e) in enumerate(zip(self.perm, self.frob)):
            ext = spec.extensions[i]
            ext._ensure_coords()
            for power in range(spec.degrees[i]):
                img = ext.rel_frobenius(ext._ypow[power], e)
                col = offsets[i] + power
                for row, c in enumerate(spec.extensions[target].coords(img)):
                    rows[offsets[target] + row][col] = c
        return FieldMatrix(spec.base, rows)

    @property
    def is_identity(self) -> bool:
        return all(t == i for i, t in enumerate(self.perm)) and all(e == 0 for e in self.frob)


# ---------------------------------------------------------------------------
# operations


def regular_rep(a: AlgebraElement) -> FieldMatrix:
    """Matrix of right multiplication by a in the fixed basis of S over k."""
    return FieldMatrix(a.spec.base, a.spec.regular_rep_rows(a.comps))


def torus_units(spec: AlgebraSpec) -> list[AlgebraElement]:
    """All invertible elements of S, in canonical component order."""
    if spec.unit_count > spec.caps.algebra_order:
        raise AlgebraCapError(f"unit count {spec.unit_count} exceeds cap")
    return list(spec.units())


def algebra_norm(a: AlgebraElement) -> FieldElement:
    """The norm of a down to the base field; equals det(regular_rep(a))."""
    return FieldElement(a.spec.base, a.spec.norm_comps(a.comps))


def aut_group(spec: AlgebraSpec) -> list[RingAutomorphism]:
    """All ring automorphisms of S fixing k pointwise, built structurally.

    Degree-preserving factor permutations combined with a relative Frobenius
    power on each factor; the count is the product over degrees d of
    c_d! * d^c_d where c_d counts factors of degree d.
    """
    by_degree: dict[int, list[int]] = {}
    for i, d in enumerate(spec.degrees):
        by_degree.setdefault(d, []).append(i)
    class_perms = []
    classes = sorted(by_degree)
    for d in classes:
        slots = by_degree[d]
        class_perms.append([dict(zip(slots, img)) for img in itertools.permutations(slots)])
    autos = []
    for combo in itertools.product(*class_perms):
        perm = [0] * len(spec.degrees)
        for mapping in combo:
            for src, dst in mapping.items():
                perm[src] = dst
        for frob in itertools.product(*(range(d) for d in spec.degrees)):
            autos.append(RingAutomorphism(spec, tuple(perm), tuple(frob)))
    autos.sort(key=lambda s: (s.perm, s.frob))
    return autos


def aut_group_size(spec: AlgebraSpec) -> int:
    """Closed form for |Aut(S/k)|."""
    counts: dict[int, int] = {}
    for d in spec.degrees:
        counts[d] = counts.get(d, 0) + 1
    out = 1
    for d, c in counts.items():
        fact = 1
        for i in range(2, c + 1):
            fact *= i
        out *= fact * d**c
    return out


class RowSpan:
    """Incremental k-linear span of coordinate vectors (Gaussian elimination)."""

    def __init__(self, field: FieldTable, n: int):
        self.field = field
        self.n = n
        self.pivots: dict[int, list[int]] = {}

    def _reduce(self, vec: Sequence[int]) -> list[int]:
        f = self.field
        v = list(vec)
        for col, row in self.pivots.items():
            c = v[col]
            if c:
                v = [f.sub_idx(x, f.mul_idx(c, y)) for x, y in zip(v, row)]
        return v

    def contains(self, vec: Sequence[int]) -> bool:
        return all(x == 0 for x in self._reduce(vec))

    def add(self, vec: Sequence[int]) -> bool:
        """Insert a vector; True if it enlarged the span."""
        f = self.field
        v = self._reduce(vec)
        for col, x in enumerate(v):
            if x:
                inv = f.inv_idx(x)
                self.pivots[col] = [f.mul_idx(inv, y) for y in v]
                return True
        return False

    @property
    def rank(self) -> int:
        return len(self.pivots)


Selector = Callable[[AlgebraElement], bool]


def select_all_units(a: AlgebraElement) -> bool:
    return True


def select_norm_one(a: AlgebraElement) -> bool:
    return a.spec.norm_comps(a.comps) == a.spec.base.one_index


@dataclass(frozen=True)
class SpanCheckResult:
    spans: bool
    rank: int
    witness: tuple[AlgebraElement, ...]


def additive_span_check(spec: AlgebraSpec, selector: Selector) -> SpanCheckResult:
    """k-linear span of the selected units: does it equal all of S?

    The witness lists a spanning subset of the selected units (the pivots
    found, in canonical unit order).
    """
    span = RowSpan(spec.base, spec.n)
    witness: list[AlgebraElement] = []
    for u in spec.units():
        if selector(u):
            if span.add(spec.coords_comps(u.comps)):
                witness.append(u)
                if span.rank == spec.n:
                    break
    return SpanCheckResult(span.rank == spec.n, span.rank, tuple(witness))


def span_absorbs_units(spec: AlgebraSpec, selector: Selector) -> bool:
    """Whether the span of the selected units contains every unit of S."""
    span = RowSpan(spec.base, spec.n)
    for u in spec.units():
        if selector(u):
            span.add(spec.coords_comps(u.comps))
    return all(span.contains(spec.coords_comps(u.comps)) for u in spec.units())


def primitive_norm_one_search(base: FieldTable, ext_field: FieldTable) -> FieldElement | None:
    """First element of K (canonical order) of norm 1 that generates K over base."""
    ext = extension_of(base, ext_field)
    if ext.degree < 2:
        raise AlgebraError("K must be a proper extension of the base")
    for idx in range(1, ext_field.q):
        if ext.rel_norm(idx) == base.one_index and ext.orbit_size(idx) == ext.degree:
            return FieldElement(ext_field, idx)
    return None


def count_power_in_base(base: FieldTable, x: FieldElement, exponent: int) -> int:
    """Number of alpha in k with (x + alpha)^N in k.

    Preconditions reported distinctly: x outside the base, gcd(N, p) = 1,
    |k| > N, N >= 1.
    """
    ext = extension_of(base, x.owner)
    if exponent < 1:
        raise AlgebraError(f"exponent must be >= 1, got {exponent}")
    if ext.contains(x.index):
        raise AlgebraError("x must lie outside the base field")
    if exponent % base.p == 0:
        raise AlgebraError(f"exponent {exponent} is divisible by the characteristic {base.p}")
    if base.q <= exponent:
        raise AlgebraError(f"base field of order {base.q} too small for exponent {exponent}")
    top = x.owner
    count = 0
    for alpha in range(base.q):
        z = top.add_idx(x.index, int(ext.embed[alpha]))
        if ext.contains(top.pow_idx(z, exponent)):
            count += 1
    return count
