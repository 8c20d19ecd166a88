"""Finite matrix groups over F_q: closure, normalizers, tori.

Ambient groups GL(n,q) / SL(n,q) are enumerated once (within the configured
cap) and all heavy scans run vectorized over element indices: a matrix is an
(n, n) array of field element indices, products go through dense add/mul
tables of the coefficient field, and membership tests use a base-q key
lookup table.  Subgroups store sorted ambient indices plus a digest of the
sorted matrix keys; two subgroups are equal exactly when their key sets are,
which also makes subgroups of GL and SL over the same field comparable.
"""

from __future__ import annotations

import hashlib
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT_CAPS, Caps
from .etale import AlgebraSpec, aut_group, regular_rep, torus_units
from .finite_field import FieldMatrix, FieldTable

GL = "GL"
SL = "SL"


class GroupError(Exception):
    pass


class GroupCapError(GroupError):
    """Carries the offending order in .order."""

    def __init__(self, msg: str, order: int | None = None):
        super().__init__(msg)
        self.order = order


class NonMemberError(GroupError):
    pass


class NotAbelianError(GroupError):
    pass


class HypothesisFailure(GroupError):
    """A structural prediction failed to close; carries a report payload."""

    def __init__(self, msg: str, payload: dict):
        super().__init__(msg)
        self.payload = payload


def gl_order(n: int, q: int) -> int:
    out = 1
    qn = q**n
    for i in range(n):
        out *= qn - q**i
    return out


def sl_order(n: int, q: int) -> int:
    return gl_order(n, q) // (q - 1)


def _mat_mul(field: FieldTable, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Index-level matrix product; A, B are (..., n, n) int arrays."""
    if field.m == 1:
        p = field.p
        return ((A.astype(np.int32) @ B.astype(np.int32)) % p).astype(np.int16)
    MUL = field.np_mul()
    ADD = field.np_add()
    n = A.shape[-1]
    Bt = np.swapaxes(B, -1, -2)
    term = MUL[A[..., :, None, :], Bt[..., None, :, :]]
    out = term[..., 0]
    for k in range(1, n):
        out = ADD[out, term[..., k]]
    return out


def _det_idx(field: FieldTable, A: np.ndarray) -> np.ndarray:
    """Vectorized determinant of (..., n, n) index arrays."""
    n = A.shape[-1]
    MUL = field.np_mul()
    ADD = field.np_add()
    NEG = field.np_neg()

    def mul(x, y):
        return MUL[x, y]

    def add(x, y):
        return ADD[x, y]

    def sub(x, y):
        return ADD[x, NEG[y]]

    if n == 1:
        return A[..., 0, 0]
    if n == 2:
        return sub(mul(A[..., 0, 0], A[..., 1, 1]), mul(A[..., 0, 1], A[..., 1, 0]))
    if n == 3:
        m = [
            sub(mul(A[..., 1, 1], A[..., 2, 2]), mul(A[..., 1, 2], A[..., 2, 1])),
            sub(mul(A[..., 1, 0], A[..., 2, 2]), mul(A[..., 1, 2], A[..., 2, 0])),
            sub(mul(A[..., 1, 0], A[..., 2, 1]), mul(A[..., 1, 1], A[..., 2, 0])),
        ]
        acc = mul(A[..., 0, 0], m[0])
        acc = sub(acc, mul(A[..., 0, 1], m[1]))
        return add(acc, mul(A[..., 0, 2], m[2]))
    # Laplace along the first row for larger n (only reachable with raised caps)
    acc = None
    cols = list(range(n))
    for j in range(n):
        rest = [c for c in cols if c != j]
        minor = _det_idx(field, A[..., 1:, :][..., :, rest])
        term = mul(A[..., 0, j], minor)
        if j % 2 == 1:
            term = NEG[term]
        acc = term if acc is None else add(acc, term)
    return acc


def _inv_mats(field: FieldTable, A: np.ndarray) -> np.ndarray:
    """Vectorized inverses of (N, n, n) invertible index matrices."""
    n = A.shape[-1]
    MUL = field.np_mul()
    NEG = field.np_neg()
    INV = field.np_inv()
    det_inv = INV[_det_idx(field, A)]
    if n == 1:
        return det_inv[..., None, None].astype(np.int16)
    if n == 2:
        adj = np.empty_like(A)
        adj[..., 0, 0] = A[..., 1, 1]
        adj[..., 1, 1] = A[..., 0, 0]
        adj[..., 0, 1] = NEG[A[..., 0, 1]]
        adj[..., 1, 0] = NEG[A[..., 1, 0]]
        return MUL[det_inv[..., None, None], adj]
    if n == 3:
        ADD = field.np_add()

        def c2(a, b, c, d):
            return ADD[MUL[a, d], NEG[MUL[b, c]]]

        adj = np.empty_like(A)
        # adjugate: adj[i][j] = cofactor_j,i
        adj[..., 0, 0] = c2(A[..., 1, 1], A[..., 1, 2], A[..., 2, 1], A[..., 2, 2])
        adj[..., 0, 1] = NEG[c2(A[..., 0, 1], A[..., 0, 2], A[..., 2, 1], A[..., 2, 2])]
        adj[..., 0, 2] = c2(A[..., 0, 1], A[..., 0, 2], A[..., 1, 1], A[..., 1, 2])
        adj[..., 1, 0] = NEG[c2(A[..., 1, 0], A[..., 1, 2], A[..., 2, 0], A[..., 2, 2])]
        adj[..., 1, 1] = c2(A[..., 0, 0], A[..., 0, 2], A[..., 2, 0], A[..., 2, 2])
        adj[..., 1, 2] = NEG[c2(A[..., 0, 0], A[..., 0, 2], A[..., 1, 0], A[..., 1, 2])]
        adj[..., 2, 0] = c2(A[..., 1, 0], A[..., 1, 1], A[..., 2, 0], A[..., 2, 1])
        adj[..., 2, 1] = NEG[c2(A[..., 0, 0], A[..., 0, 1], A[..., 2, 0], A[..., 2, 1])]
        adj[..., 2, 2] = c2(A[..., 0, 0], A[..., 0, 1], A[..., 1, 0], A[..., 1, 1])
        return MUL[det_inv[..., None, None], adj]
    out = np.empty_like(A)
    for i in range(A.shape[0]):
        fm = FieldMatrix(field, A[i].tolist())
        out[i] = np.array(fm.inverse().rows, dtype=A.dtype)
    return out


class AmbientGroup:
    """GL(n, q) or SL(n, q) with vectorized element-level machinery."""

    def __init__(self, kind: str, n: int, field: FieldTable, caps: Caps = DEFAULT_CAPS):
        if kind not in (GL, SL):
            raise GroupError(f"kind must be GL or SL, got {kind!r}")
        if n < 1:
            raise GroupError(f"matrix size must be >= 1, got {n}")
        self.kind = kind
        self.n = n
        self.field = field
        self.caps = caps
        self.order = gl_order(n, field.q) if kind == GL else sl_order(n, field.q)
        if self.order > caps.group_order:
            raise GroupCapError(
                f"{kind}({n},{field.q}) has order {self.order}, cap is {caps.group_order}",
                order=self.order,
            )
        self._mats: np.ndarray | None = None
        self._lut: np.ndarray | None = None
        self._keypow: np.ndarray | None = None
        self._inv: np.ndarray | None = None
        self._identity: int | None = None

    def __repr__(self) -> str:
        return f"{self.kind}({self.n},{self.field.q})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AmbientGroup)
            and self.kind == other.kind
            and self.n == other.n
            and self.field == other.field
        )

    def __hash__(self) -> int:
        return hash((self.kind, self.n, self.field))

    # -- enumeration ------------------------------------------------------------

    def _ensure(self) -> None:
        if self._mats is not None:
            return
        q, n = self.field.q, self.n
        total = q ** (n * n)
        if total > 80_000_000:
            raise GroupCapError(f"cannot enumerate {self!r}: {total} candidate matrices")
        flat = np.arange(total, dtype=np.int64)
        entries = np.empty((total, n * n), dtype=np.int16)
        rem = flat.copy()
        for pos in range(n * n - 1, -1, -1):
            entries[:, pos] = rem % q
            rem //= q
        mats = entries.reshape(total, n, n)
        dets = _det_idx(self.field, mats)
        keep = dets != 0 if self.kind == GL else dets == self.field.one_index
        sel = np.nonzero(keep)[0]
        if sel.size != self.order:
            raise GroupError(f"enumeration mismatch for {self!r}: {sel.size} != {self.order}")
        self._mats = np.ascontiguousarray(mats[sel])
        lut = np.full(total, -1, dtype=np.int32)
        lut[sel] = np.arange(sel.size, dtype=np.int32)
        self._lut = lut
        self._keypow = np.array([q ** (n * n - 1 - i) for i in range(n * n)], dtype=np.int64)
        ident = FieldMatrix.identity(self.field, n)
        self._identity = int(lut[ident.key()])
        self._inv = None

    @property
    def identity_index(self) -> int:
        self._ensure()
        return self._identity

    def mats(self) -> np.ndarray:
        self._ensure()
        return self._mats

    def inv_indices(self) -> np.ndarray:
        self._ensure()
        if self._inv is None:
            invm = _inv_mats(self.field, self._mats)
            self._inv = self.indices_of_mats(invm)
        return self._inv

    # -- lookups ----------------------------------------------------------------

    def keys_of_mats(self, mats: np.ndarray) -> np.ndarray:
        self._ensure()
        n = self.n
        return mats.reshape(-1, n * n).astype(np.int64) @ self._keypow

    def indices_of_mats(self, mats: np.ndarray) -> np.ndarray:
        """Ambient indices of (N, n, n) member matrices."""
        idx = self._lut[self.keys_of_mats(mats)]
        if (idx < 0).any():
            raise NonMemberError("matrix outside the ambient group")
        return idx.astype(np.int32)

    def index_of(self, mat: FieldMatrix) -> int:
        if mat.field != self.field or mat.n != self.n:
            raise NonMemberError(f"matrix over the wrong field/size for {self!r}")
        self._ensure()
        idx = int(self._lut[mat.key()])
        if idx < 0:
            raise NonMemberError(f"matrix is not a member of {self!r}")
        return idx

    def matrix_at(self, idx: int) -> FieldMatrix:
        self._ensure()
        return FieldMatrix(self.field, self._mats[idx].tolist())

    def keys_of_indices(self, idxs: np.ndarray) -> np.ndarray:
        self._ensure()
        return self.keys_of_mats(self._mats[idxs])

    # -- batched group operations -------------------------------------------------

    def rmul(self, idxs: np.ndarray, g: int) -> np.ndarray:
        """Indices of x * g for each x in idxs."""
        self._ensure()
        prods = _mat_mul(self.field, self._mats[idxs], self._mats[g])
        return self.indices_of_mats(prods)

    def lmul(self, g: int, idxs: np.ndarray) -> np.ndarray:
        self._ensure()
        prods = _mat_mul(self.field, self._mats[g][None, :, :], self._mats[idxs])
        return self.indices_of_mats(prods)

    def conj_by_all(self, x: int) -> np.ndarray:
        """Indices of g * x * g^-1 for every ambient g, in ambient order."""
        self._ensure()
        inv = self.inv_indices()
        left = _mat_mul(self.field, self._mats, self._mats[x])
        conj = _mat_mul(self.field, left, self._mats[inv])
        return self.indices_of_mats(conj)

    def commute_mask(self, x: int) -> np.ndarray:
        """Boolean mask over ambient g of g*x == x*g."""
        self._ensure()
        gx = self.keys_of_mats(_mat_mul(self.field, self._mats, self._mats[x]))
        xg = self.keys_of_mats(_mat_mul(self.field, self._mats[x][None, :, :], self._mats))
        return gx == xg


@lru_cache(maxsize=None)
def _shared_ambient(kind: str, n: int, field: FieldTable, caps: Caps) -> AmbientGroup:
    return AmbientGroup(kind, n, field, caps)


def ambient_group(kind: str, n: int, field: FieldTable, caps: Caps = DEFAULT_CAPS) -> AmbientGroup:
    """Shared, lazily-enumerated ambient group instance."""
    return _shared_ambient(kind, n, field, caps)


class Subgroup:
    """A subgroup of an ambient group, stored as sorted ambient indices."""

    __slots__ = ("ambient", "indices", "_mask", "_keys", "_id", "_gens")

    def __init__(self, ambient: AmbientGroup, indices: Iterable[int]):
        self.ambient = ambient
        idx = np.unique(np.asarray(list(indices), dtype=np.int32))
        if idx.size == 0:
            raise GroupError("a subgroup contains at least the identity")
        self.indices = idx
        self._mask = None
        self._keys = None
        self._id = None
        self._gens = None
        if ambient.order % idx.size != 0:
            raise GroupError(f"order {idx.size} does not divide ambient order {ambient.order}")

    @property
    def order(self) -> int:
        return int(self.indices.size)

    def mask(self) -> np.ndarray:
        if self._mask is None:
            m = np.zeros(self.ambient.order, dtype=bool)
            m[self.indices] = True
            self._mask = m
        return self._mask

    def key_tuple(self) -> tuple[int, ...]:
        """Sorted matrix keys; canonical across ambients over the same field."""
        if self._keys is None:
            keys = self.ambient.keys_of_indices(self.indices)
            keys.sort()
            self._keys = tuple(int(k) for k in keys)
        return self._keys

    @property
    def id(self) -> str:
        if self._id is None:
            h = hashlib.blake2b(digest_size=8)
            h.update(np.array(self.key_tuple(), dtype=np.int64).tobytes())
            self._id = h.hexdigest()
        return self._id

    def same_elements(self, other: "Subgroup") -> bool:
        return self.key_tuple() == other.key_tuple()

    def __eq__(self, other) -> bool:
        return isinstance(other, Subgroup) and self.ambient.field == other.ambient.field and self.key_tuple() == other.key_tuple()

    def __hash__(self) -> int:
        return hash((self.ambient.field, self.id))

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, ambient={self.ambient!r})"

    def contains_index(self, idx: int) -> bool:
        return bool(self.mask()[idx])

    def is_subset_of(self, other: "Subgroup") -> bool:
        return bool(other.mask()[self.indices].all())

    @property
    def generators(self) -> list[int]:
        """Greedy minimal-ish generating indices, deterministic."""
        if self._gens is None:
            amb = self.ambient
            chosen: list[int] = []
            covered = np.zeros(amb.order, dtype=bool)
            covered[amb.identity_index] = True
            size = 1
            for x in self.indices:
                if covered[x]:
                    continue
                chosen.append(int(x))
                cl = _closure(amb, chosen)
                covered[:] = False
                covered[cl] = True
                size = cl.size
                if size == self.order:
                    break
            self._gens = chosen
        return self._gens

    def generator_matrices(self) -> list[FieldMatrix]:
        return [self.ambient.matrix_at(g) for g in self.generators]

    def matrices(self) -> list[FieldMatrix]:
        return [self.ambient.matrix_at(int(i)) for i in self.indices]

    def serialize(self, with_elements: bool = False) -> dict:
        doc = {
            "ambient": {"kind": self.ambient.kind, "n": self.ambient.n, "field": self.ambient.field.serialize()},
            "order": self.order,
            "generators": [m.coeff_rows() for m in self.generator_matrices()],
        }
        if with_elements:
            doc["elements"] = [m.coeff_rows() for m in self.matrices()]
        return doc


def _closure(amb: AmbientGroup, gen_idxs: Sequence[int], seed_idxs: Sequence[int] | None = None) -> np.ndarray:
    """Sorted indices of the subgroup generated by gens (seeded orbit closure)."""
    amb._ensure()
    seen = np.zeros(amb.order, dtype=bool)
    seen[amb.identity_index] = True
    start = [amb.identity_index]
    if seed_idxs is not None:
        start.extend(int(i) for i in seed_idxs)
    start.extend(int(g) for g in gen_idxs)
    frontier = np.unique(np.array(start, dtype=np.int32))
    seen[frontier] = True
    gens = list(dict.fromkeys(int(g) for g in gen_idxs))
    if not gens:
        return np.nonzero(seen)[0].astype(np.int32)
    while frontier.size:
        parts = [amb.rmul(frontier, g) for g in gens]
        cand = np.unique(np.concatenate(parts))
        fresh = cand[~seen[cand]]
        seen[fresh] = True
        frontier = fresh
    return np.nonzero(seen)[0].astype(np.int32)


def generate(ambient: AmbientGroup, gens: Iterable[FieldMatrix], max_size: int | None = None) -> Subgroup:
    """Smallest subgroup of the ambient containing the given matrices."""
    idxs = [ambient.index_of(m) for m in gens]
    cl = _closure(ambient, idxs)
    if max_size is not None and cl.size > max_size:
        raise GroupCapError(f"closure reached {cl.size} elements, cap {max_size}", order=int(cl.size))
    return Subgroup(ambient, cl)


def extend_subgroup(h: Subgroup, extra_index: int) -> Subgroup:
    """Subgroup generated by h and one more ambient element."""
    amb = h.ambient
    gens = list(h.generators) + [int(extra_index)]
    cl = _closure(amb, gens, seed_idxs=h.indices)
    return Subgroup(amb, cl)


def torus_subgroup(spec: AlgebraSpec, ambient: AmbientGroup) -> Subgroup:
    """Image of the units of S (GL) or of its norm-one units (SL)."""
    if spec.n != ambient.n:
        raise GroupError(f"algebra rank {spec.n} does not match ambient size {ambient.n}")
    if spec.base != ambient.field:
        raise GroupError("algebra base field does not match the ambient field")
    idxs = []
    one = spec.base.one_index
    for u in torus_units(spec):
        if ambient.kind == SL and spec.norm_comps(u.comps) != one:
            continue
        idxs.append(ambient.index_of(regular_rep(u)))
    return Subgroup(ambient, idxs)


def is_normal_in(h: Subgroup, k: Subgroup) -> bool:
    """Whether h is normal in k; requires h <= k."""
    if h.ambient is not k.ambient and h.ambient != k.ambient:
        raise GroupError("subgroups of different ambient groups")
    if not h.is_subset_of(k):
        raise GroupError("normality requires inclusion")
    amb = h.ambient
    hmask = h.mask()
    for g in k.generators:
        ginv = int(amb.inv_indices()[g])
        conj = amb.rmul(amb.lmul(g, h.indices), ginv)
        if not hmask[conj].all():
            return False
    return True


def normalizer_brute(ambient: AmbientGroup, h: Subgroup) -> Subgroup:
    """{g : g h g^-1 = h}, by scanning every ambient element."""
    if h.ambient != ambient:
        raise GroupError("subgroup lives in a different ambient group")
    ok = np.ones(ambient.order, dtype=bool)
    hmask = h.mask()
    for x in h.generators:
        ok &= hmask[ambient.conj_by_all(x)]
    return Subgroup(ambient, np.nonzero(ok)[0])


def centralizer_brute(ambient: AmbientGroup, h: Subgroup) -> Subgroup:
    ok = np.ones(ambient.order, dtype=bool)
    for x in h.generators:
        ok &= ambient.commute_mask(x)
    return Subgroup(ambient, np.nonzero(ok)[0])


def is_abelian(h: Subgroup) -> bool:
    amb = h.ambient
    gens = h.generators
    for i, a in enumerate(gens):
        for b in gens[i + 1 :]:
            if int(amb.rmul(np.array([a], dtype=np.int32), b)[0]) != int(
                amb.rmul(np.array([b], dtype=np.int32), a)[0]
            ):
                return False
    return True


def is_maximal_abelian(ambient: AmbientGroup, h: Subgroup) -> bool:
    """True when no ambient element outside h commutes with all of h."""
    if not is_abelian(h):
        raise NotAbelianError("subgroup is not abelian")
    cent = centralizer_brute(ambient, h)
    return cent.order == h.order


def normalizer_formula(spec: AlgebraSpec, ambient: AmbientGroup) -> Subgroup:
    """The predicted normalizer: matrices t(a) * P_sigma inside the ambient.

    a runs over the units of S and sigma over the ring automorphisms of S
    over k; for an SL ambient only determinant-one products are kept.  The
    resulting set is verified to be closed; a closure failure raises
    HypothesisFailure with a structured payload instead of crashing.
    """
    if spec.n != ambient.n:
        raise GroupError(f"algebra rank {spec.n} does not match ambient size {ambient.n}")
    if spec.base != ambient.field:
        raise GroupError("algebra base field does not match the ambient field")
    sigmas = aut_group(spec)
    p_mats = [s.matrix() for s in sigmas]
    one = spec.base.one_index
    idxs = set()
    for u in torus_units(spec):
        t = regular_rep(u)
        for pm in p_mats:
            prod = t * pm
            if ambient.kind == SL and prod.det() != one:
                continue
            idxs.add(ambient.index_of(prod))
    sub = Subgroup(ambient, idxs)
    closed = _closure(ambient, sub.generators)
    if closed.size != sub.order or not sub.mask()[closed].all():
        raise HypothesisFailure(
            "predicted normalizer set is not closed under multiplication",
            payload={
                "case": spec.serialize(),
                "ambient": {"kind": ambient.kind, "n": ambient.n, "q": ambient.field.q},
                "set_size": sub.order,
                "closure_size": int(closed.size),
            },
        )
    return sub


def intersect_with_ambient(h: Subgroup, target: AmbientGroup) -> Subgroup:
    """h intersected with another ambient over the same field (e.g. SL inside GL)."""
    if target.field != h.ambient.field or target.n != h.ambient.n:
        raise GroupError("ambients are not comparable")
    target._ensure()
    keys = h.ambient.keys_of_indices(h.indices)
    got = target._lut[keys]
    return Subgroup(target, got[got >= 0])
