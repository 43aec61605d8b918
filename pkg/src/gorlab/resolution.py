"""Minimal free resolutions, syzygies and chain-map lifting.

Resolutions have two regimes.  A materialized head is computed honestly, one
k-linear kernel per homological degree; matrix sizes grow like e^i, so the
head is bounded by a column budget.  Beyond the head, Betti numbers are exact
values of the certified tail: once the syzygy M_J is past the junction index
J (no later syzygy can split off a copy of k, by the dimension bound
dim k_{-j} = dim k_j), M_J is Koszul and the Lescot formulas force
beta_{i+1} = e*beta_i - beta_{i-1}.  The certificate is cross-checked against
every materialized degree past the junction before any tail value is served.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import NotMaterialized, RadicalSquareNonzero
from .modules import (
    FiniteModule,
    ModuleMap,
    matlis_dual,
    radical_rows,
    radical_square_rows,
    submodule,
)
from .ring import ShortGorensteinRing

DEFAULT_BUDGET = 6000     # max columns of a materialized kernel problem
HARD_COLUMN_CAP = 60000   # absolute safety cap, beyond which we refuse
TAIL_OVERLAP = 2          # honest degrees past the junction required for a tail
HEAD_SLACK = 3            # extra head degrees materialized past the junction
SLACK_COLUMNS = 1500      # max kernel columns for the optional slack degrees


def free_kmat(ring: ShortGorensteinRing, G: np.ndarray) -> np.ndarray:
    """k-matrix of the map R^a -> R^j given by the ring-entry array G
    (shape (a, j, e+2): row a is the image of generator a)."""
    a, j, D = G.shape
    out = np.einsum("ajc,cyb->jyab", G, ring.basis_reg) % ring.p
    return out.reshape(j * D, a * D)


def _radical_image_w(ring: ShortGorensteinRing, K: np.ndarray) -> np.ndarray:
    """w-components of x_g * (rows of K) for vectors K inside m*F.

    Since K lies in m*F, the radical images land in m^2 F, whose only
    nonzero coordinates are the w-slots; the w-coefficient of x_g * r is
    the form applied to the degree-one part of r.  Rows: g-major over the
    rows of K; columns: one per free-module block.
    """
    n = K.shape[0]
    e, D = ring.e, ring.dim
    K3 = K.reshape(n, -1, D)
    img = np.einsum("njc,gc->gnj", K3[:, :, 1:e + 1], ring.form) % ring.p
    return img.reshape(e * n, K3.shape[1])


@dataclass
class SyzygyData:
    """The i-th syzygy as a subspace of F_{i-1} (rref rows + pivots)."""

    rows: np.ndarray
    pivots: list
    nu: int      # nu(M_i) = beta_i
    nu_m: int    # nu(m M_i) = dim m M_i  (m^2 M_i = 0 for i >= 1)


@dataclass
class TailCertificate:
    """Witness that the Betti sequence obeys the two-term recurrence from
    the junction J on, checked on every materialized degree past J."""

    junction: int
    i_max: int
    verified_through: int
    seeds: tuple[int, int]


class MinimalFreeResolution:
    """Growable minimal free resolution of a finite module."""

    def __init__(self, module: FiniteModule, budget: int = DEFAULT_BUDGET):
        ring = module.ring
        self.module = module
        self.ring = ring
        self.budget = budget
        U, piv = radical_rows(module)
        pivset = set(piv)
        self.gen_cols = [c for c in range(module.dim) if c not in pivset]
        b0 = len(self.gen_cols)
        D = ring.dim
        C = module.all_ops[:, :, self.gen_cols].transpose(1, 2, 0).reshape(module.dim, b0 * D)
        self.cover_matrix = C % ring.p
        self.betti_head = [b0]
        self.diffs: list[np.ndarray] = []    # diffs[i-1] = del_i, shape (b_i, b_{i-1}, D)
        self.syz: list[SyzygyData] = []      # syz[i-1] = data of M_i in F_{i-1}
        self._pending = self.cover_matrix if b0 else None
        self.finite = b0 == 0
        self._tail: TailCertificate | None = None

    # -- materialization ----------------------------------------------------

    @property
    def head(self) -> int:
        """Number of materialized differentials."""
        return len(self.diffs)

    def _step(self):
        ring = self.ring
        p = ring.p
        D = ring.dim
        bprev = self.betti_head[-1]
        K = linalg.kernel_array(self._pending, p)
        # the cover is minimal, so the kernel lies in m*F: unit components 0
        assert not K[:, ::D].any(), "kernel escapes the radical; cover not minimal"
        R, kpiv, nk = linalg.rref_array(K, p)
        Kr = R[:nk]
        if nk == 0:
            self.syz.append(SyzygyData(Kr, kpiv, 0, 0))
            self.diffs.append(np.zeros((0, bprev, D), dtype=np.int64))
            self.betti_head.append(0)
            self.finite = True
            self._pending = None
            return
        # m*K lies inside the row space of Kr, so its rank and a complement
        # are visible in coordinates w.r.t. Kr (the pivot-column entries);
        # generators = rows of Kr complementary to the row space of m*K.
        # w kills K (K is in m*F), so m*K is spanned by the x_g images,
        # which are supported on the w-slots alone.
        imgw = _radical_image_w(ring, Kr)
        wcols = [t for t in range(nk) if kpiv[t] % D == D - 1]
        W = imgw[:, [kpiv[t] // D for t in wcols]]
        _, wpiv, wrank = linalg.rref_array(W, p)
        drop = {wcols[t] for t in wpiv}
        sel = [t for t in range(nk) if t not in drop]
        nu = len(sel)
        assert nu == nk - wrank
        self.syz.append(SyzygyData(Kr, kpiv, nu, wrank))
        G = Kr[sel].reshape(nu, bprev, D)
        self.diffs.append(G)
        self.betti_head.append(nu)
        if nu == 0:
            self.finite = True
            self._pending = None
        else:
            self._pending = free_kmat(ring, G)

    def extend(self, steps: int, ignore_budget: bool = False):
        """Materialize differentials up to index `steps` (subject to budget)."""
        while self.head < steps and not self.finite:
            cols = self.betti_head[-1] * self.ring.dim
            if cols > HARD_COLUMN_CAP:
                raise NotMaterialized(
                    f"next kernel has {cols} columns, over the hard cap")
            if cols > self.budget and not ignore_budget:
                break
            self._step()

    # -- tail certification --------------------------------------------------

    def junction(self) -> tuple[int, int]:
        """(J, i_max): no syzygy M_j with j > i_max can split off k, so M_J
        with J = i_max + 1 is Koszul.  A split at index j needs a summand
        k_{-j'} of M (or of M_1 when m^2 M != 0) with dim k_{j'} below the
        module's dimension."""
        M = self.module
        if radical_square_rows(M)[0].shape[0] == 0:
            bound = M.dim
            shift = 0
        else:
            # splits at index j >= 1 come from summands k_{-(j-1)} of M_1
            bound = self.betti_head[0] * self.ring.dim - M.dim
            shift = 1
        dims = k_syzygy_dims(self.ring, bound)
        i_max = shift + max([j for j in range(1, len(dims)) if dims[j] <= bound],
                            default=0)
        return i_max + 1, i_max

    def _ensure_tail(self):
        if self._tail is not None or self.finite:
            return
        J, i_max = self.junction()
        need = J + TAIL_OVERLAP
        self.extend(need, ignore_budget=True)
        # extra honest degrees help downstream homology windows, but they are
        # optional: take them only while the kernel problems stay desk-scale
        while (self.head < need + HEAD_SLACK and not self.finite
               and self.betti_head[-1] * self.ring.dim <= SLACK_COLUMNS):
            self._step()
        e = self.ring.e
        b = self.betti_head
        # the recurrence and the Lescot formulas must hold on every honest
        # degree past the junction; any mismatch falsifies the certificate
        for j in range(J, self.head):
            assert b[j + 1] == e * b[j] - self.syz[j - 1].nu_m, (
                "Lescot formula fails past the junction")
            assert self.syz[j].nu_m == b[j], (
                "nu(m M_{j+1}) != nu(M_j) past the junction")
        self._tail = TailCertificate(J, i_max, self.head,
                                     (b[self.head - 1], b[self.head]))

    def tail_certificate(self) -> TailCertificate | None:
        self._ensure_tail()
        return self._tail

    # -- accessors -----------------------------------------------------------

    def betti(self, n: int) -> list[int]:
        """Exact Betti numbers beta_0..beta_n (tail degrees certified)."""
        if n < len(self.betti_head):
            return self.betti_head[: n + 1]
        if self.finite:
            return self.betti_head + [0] * (n - self.head)
        self._ensure_tail()
        if n < len(self.betti_head):
            return self.betti_head[: n + 1]
        out = list(self.betti_head)
        e = self.ring.e
        while len(out) <= n:
            out.append(e * out[-1] - out[-2])
        return out[: n + 1]

    def diff(self, i: int) -> np.ndarray:
        """Ring-entry array of del_i, for 1 <= i <= head."""
        if not 1 <= i <= self.head:
            raise NotMaterialized(f"differential {i} not materialized (head={self.head})")
        return self.diffs[i - 1]

    def kmat(self, i: int) -> np.ndarray:
        """k-matrix of del_i: F_i -> F_{i-1}; del_0 means the cover."""
        if i == 0:
            return self.cover_matrix
        return free_kmat(self.ring, self.diff(i))

    def cover_map(self) -> ModuleMap:
        F = FiniteModule.free(self.ring, self.betti_head[0])
        return ModuleMap(F, self.module, self.cover_matrix)


def resolve(M: FiniteModule, n: int, budget: int = DEFAULT_BUDGET,
            min_head: int | None = None) -> MinimalFreeResolution:
    """Resolution of M with exact Betti numbers through degree n.

    Cached on the module; the head is materialized up to the budget and at
    least through the junction overlap so the tail is certified.
    """
    res = M._cache.get("resolution")
    if res is None:
        res = MinimalFreeResolution(M, budget)
        M._cache["resolution"] = res
    res.budget = max(res.budget, budget)
    if min_head is not None:
        res.extend(min(min_head, n), ignore_budget=True)
    res.betti(n)  # materializes the head and certifies the tail as needed
    return res


def betti_numbers(M: FiniteModule, n: int) -> list[int]:
    return resolve(M, n).betti(n)


def syzygy(M: FiniteModule, i: int, budget: int = DEFAULT_BUDGET) -> FiniteModule:
    """The i-th syzygy module M_i, realized inside F_{i-1}."""
    if i == 0:
        return M
    res = resolve(M, i, budget, min_head=i)
    if res.finite and i > res.head:
        return FiniteModule.zero(M.ring)
    if i > res.head:
        raise NotMaterialized(f"syzygy {i} beyond the materialized head")
    data = res.syz[i - 1]
    F = FiniteModule.free(M.ring, res.betti_head[i - 1])
    S, _ = submodule(F, data.rows, data.pivots)
    return S


def negative_syzygy(M: FiniteModule, i: int) -> FiniteModule:
    """M_{-i} = (dual of the i-th syzygy of M*); needs m^2 M = 0."""
    if radical_square_rows(M)[0].shape[0]:
        raise RadicalSquareNonzero("negative syzygies need m^2 M = 0")
    return matlis_dual(syzygy(matlis_dual(M), i))


@dataclass
class ChainMapLift:
    """Degreewise lifts f_i: F_i^A -> F_i^B of a map A -> B, as ring-entry
    arrays (beta_i(A), beta_i(B), e+2)."""

    phi: ModuleMap
    source: MinimalFreeResolution
    target: MinimalFreeResolution
    maps: list[np.ndarray] = field(default_factory=list)

    def kmat(self, i: int) -> np.ndarray:
        return free_kmat(self.source.ring, self.maps[i])


def lift_chain_map(phi: ModuleMap, n: int,
                   budget: int = DEFAULT_BUDGET) -> ChainMapLift:
    """Lift phi: A -> B to chain maps between minimal resolutions, degrees
    0..n (capped at the materialized heads)."""
    A, B = phi.source, phi.target
    ring = A.ring
    p = ring.p
    D = ring.dim
    ra = resolve(A, n, budget, min_head=n)
    rb = resolve(B, n, budget, min_head=n)
    depth = min(n, ra.head, rb.head)
    lift = ChainMapLift(phi, ra, rb)
    # degree 0: cover_B . f0 = phi . cover_A, solved on the free generators
    ga = ra.betti_head[0]
    gens_a = A.all_ops[0][:, ra.gen_cols]  # columns are the chosen generators
    rhs = phi.matrix @ gens_a % p
    sols = linalg.solve_many(rb.cover_matrix, rhs, p)
    f = np.zeros((ga, rb.betti_head[0], D), dtype=np.int64)
    for a, x in enumerate(sols):
        assert x is not None, "cover is surjective; lift must exist"
        f[a] = x.reshape(rb.betti_head[0], D)
    lift.maps.append(f)
    for i in range(1, depth + 1):
        # it suffices to solve on the free generators: column a*D of the
        # k-matrix of del_i is del_i(gen a), i.e. row a of the entry array
        Ga = ra.diff(i)
        bi_a, bi_b = ra.betti_head[i], rb.betti_head[i]
        fprev = free_kmat(ring, lift.maps[i - 1])
        rhs = fprev @ Ga.reshape(bi_a, -1).T % p
        sols = linalg.solve_many(rb.kmat(i), rhs, p)
        arr = np.zeros((bi_a, bi_b, D), dtype=np.int64)
        for a, x in enumerate(sols):
            assert x is not None, "acyclicity guarantees the lift"
            arr[a] = x.reshape(bi_b, D)
        lift.maps.append(arr)
    return lift


# ---------------------------------------------------------------------------
# per-ring residue-field data


def residue_field_module(ring: ShortGorensteinRing) -> FiniteModule:
    k = ring._cache.get("residue_field")
    if k is None:
        k = FiniteModule.residue_field(ring)
        ring._cache["residue_field"] = k
    return k


def k_resolution(ring: ShortGorensteinRing) -> MinimalFreeResolution:
    """The cached resolution of k.  Materialization is driven honestly here
    (no tail logic) because the junction computation for every other module
    consults this resolution."""
    k = residue_field_module(ring)
    res = k._cache.get("resolution")
    if res is None:
        res = MinimalFreeResolution(k)
        k._cache["resolution"] = res
    return res


def k_syzygy_dims(ring: ShortGorensteinRing, bound: int) -> list[int]:
    """dims[j] = dim_k of the j-th syzygy of k, listed while dims[j] is at
    most `bound` (plus one terminating larger value).  Uses only honestly
    materialized Betti numbers of k."""
    res = k_resolution(ring)
    dims = [1]
    j = 1
    while dims[-1] <= bound:
        res.extend(j - 1, ignore_budget=True)
        dims.append(res.betti_head[j - 1] * ring.dim - dims[-1])
        j += 1
    return dims
