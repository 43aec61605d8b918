"""Tor and Ext tables, induced maps on homology, and length bookkeeping.

Materialized degrees are honest homology computations on F_*(M) tensor N
(resp. Hom(F_*(M), N)).  Degrees past the materialized window are certified:
writing X = M_J for the junction syzygy (which is Koszul), the length count

    l(Tor_t(X, N)) = nu(X) beta_t(N) - nu(mX) beta_{t-1}(N) + l(L_t) + l(L_{t-1})

turns observed equality of the two sides into a proof that the induced maps
Tor_t(iota_X, N) vanish at t and t-1.  Once equality holds on a margin of
consecutive materialized degrees, the tail values follow the closed formula,
with m Tor = 0 and nu = length; such entries are tagged "certified".
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import InsufficientDegree, RadicalSquareNonzero, RingMismatch
from .modules import (
    FiniteModule,
    ModuleMap,
    matlis_dual,
    minimal_generators,
    radical_rows,
    radical_square_rows,
)
from .resolution import (
    MinimalFreeResolution,
    lift_chain_map,
    resolve,
)

TOR_MARGIN = 3       # consecutive equality degrees required for a tail
WINDOW_RETRIES = 3   # how many times to deepen the window before giving up
TOR_BUDGET = 1500    # max rows/columns of a materialized homology problem
MAX_WINDOW_ROWS = 12000   # absolute ceiling on a retry window's row count

COMPUTED = "computed"
CERTIFIED = "certified"


@dataclass(frozen=True)
class TorEntry:
    i: int
    length: int
    nu: int
    m_annihilated: bool
    provenance: str


@dataclass
class TorTable:
    M: FiniteModule
    N: FiniteModule
    entries: list[TorEntry]
    window: int            # largest honestly computed degree
    junction: int | None   # junction used for the certified tail, if any

    def lengths(self) -> list[int]:
        return [t.length for t in self.entries]

    def nus(self) -> list[int]:
        return [t.nu for t in self.entries]


@dataclass
class ExtTable(TorTable):
    pass


@dataclass(frozen=True)
class InducedMapResult:
    i: int
    rank: int
    source_length: int
    target_length: int
    provenance: str


def _tor_diff(G: np.ndarray, N: FiniteModule) -> np.ndarray:
    """k-matrix of del tensor N: N^a -> N^j for the entry array G (a, j, D)."""
    a, j, _ = G.shape
    d = N.dim
    out = np.einsum("ajc,cxy->jxay", G, N.all_ops) % N.ring.p
    return out.reshape(j * d, a * d)


def _ext_diff(G: np.ndarray, N: FiniteModule) -> np.ndarray:
    """k-matrix of Hom(del, N): N^j -> N^a (precomposition with del)."""
    a, j, _ = G.shape
    d = N.dim
    out = np.einsum("ajc,cxy->axjy", G, N.all_ops) % N.ring.p
    return out.reshape(a * d, j * d)


def _radical_excess(N: FiniteModule, Z: np.ndarray, Bnd: np.ndarray,
                    piv, chunk: int = 1024) -> int:
    """Rank added to the row space of Bnd (rref rows, pivot columns piv) by
    the images of the rows of Z (vectors in N^b) under x_1..x_e, w.  The
    images are absorbed in chunks so peak memory stays bounded by the basis
    plus one chunk, and each chunk is reduced against the basis first."""
    if Z.size == 0:
        return 0
    p = N.ring.p
    d = N.dim
    ops = np.concatenate([N.actions, N.action_w[None]], axis=0)
    B = Bnd % p
    piv = list(piv)
    base = Bnd.shape[0]
    for lo in range(0, Z.shape[0], chunk):
        Z3 = Z[lo:lo + chunk].reshape(-1, Z.shape[1] // d, d)
        img = np.einsum("zjd,oxd->ozjx", Z3, ops).reshape(-1, Z.shape[1]) % p
        if piv:
            img = linalg.reduce_mod_rowspace(B, piv, img, p)
            img = img[img.any(axis=1)]
        if img.shape[0] == 0:
            continue
        S = np.concatenate([B, img], axis=0)
        piv = linalg.rref_inplace(S, p)
        B = S[: len(piv)].copy()
    return B.shape[0] - base


@dataclass
class _Homology:
    """Honest homology data of one complex degree."""

    length: int
    nu: int
    m_annihilated: bool
    cycles: np.ndarray        # rows: basis of ker D_i (all of C_i at i = 0)
    boundary_rows: np.ndarray  # rref rows of im D_{i+1}
    boundary_pivots: list


def _homology_window(res: MinimalFreeResolution, N: FiniteModule,
                     w: int) -> list[_Homology]:
    """Honest Tor homology of F_*(res.module) tensor N in degrees 0..w.
    Needs res.head >= w + 1 unless the resolution is finite."""
    p = N.ring.p
    d = N.dim
    out = []
    dims = [b * d for b in res.betti_head]
    Dmats = {}

    def dmat(i):
        if i not in Dmats:
            if i > res.head:
                Dmats[i] = np.zeros((dims[res.head] if i == res.head + 1 else 0, 0),
                                    dtype=np.int64)
            else:
                Dmats[i] = _tor_diff(res.diff(i), N)
        return Dmats[i]

    kern = {}

    def kernel_of(i):
        # (rank, kernel rows) of D_i; D_0 is the zero map out of C_0
        if i not in kern:
            if i == 0:
                kern[i] = (0, np.eye(dims[0], dtype=np.int64))
            elif i > res.head:
                ncols = 0
                kern[i] = (0, np.zeros((0, ncols), dtype=np.int64))
            else:
                Dm = dmat(i)
                Z = linalg.kernel_array(Dm, p)
                kern[i] = (Dm.shape[1] - Z.shape[0], Z)
        return kern[i]

    for i in range(w + 1):
        ci = dims[i] if i <= res.head else 0
        ri, Z = kernel_of(i)
        if i + 1 > res.head:
            Bnd = np.zeros((0, ci), dtype=np.int64)
            bpiv: list = []
        else:
            Bnd, bpiv = linalg.row_space(dmat(i + 1).T, p)
            if i == w:
                Dmats.pop(i + 1, None)   # top boundary is not needed again
        li = ci - ri - Bnd.shape[0]
        assert li >= 0
        extra = _radical_excess(N, Z, Bnd, bpiv) if ci else 0
        out.append(_Homology(li, li - extra, extra == 0, Z, Bnd, bpiv))
        Dmats.pop(i, None)   # degree i's differential is no longer needed
        kern.pop(i - 1, None)
    return out


def _size_capped_window(res: MinimalFreeResolution, d: int, n: int,
                        floor: int = 0) -> int:
    """Largest w <= n such that every complex degree j <= w + 1 satisfies
    beta_j * d <= TOR_BUDGET (but at least `floor`): keeps the boundary
    matrices of the honest homology window at desk scale even when the
    cached resolution head has been driven deeper by other callers."""
    bs = [b * d for b in res.betti(n + 2)]
    w = n
    while w > floor and max(bs[: w + 2]) > TOR_BUDGET:
        w -= 1
    return w


def _tail_parameters(res: MinimalFreeResolution):
    cert = res.tail_certificate()
    J = cert.junction
    nu_x = res.betti_head[J]
    nu_mx = res.syz[J - 1].nu_m
    return J, nu_x, nu_mx


def _expected_tail(res, resN, J, nu_x, nu_mx, i):
    """Length-count value for Tor_i(M, N) = Tor_{i-J}(X, N), i > J."""
    t = i - J
    bN = resN.betti(t)
    prev = bN[t - 1] if t >= 1 else 0
    return nu_x * bN[t] - nu_mx * prev


def _build_table(M: FiniteModule, N: FiniteModule, n: int, kind,
                 diff_builder) -> TorTable:
    if M.ring != N.ring:
        raise RingMismatch("modules over different rings")
    res = resolve(M, max(n, 1))
    if N.dim == 0 or M.dim == 0:
        ent = [TorEntry(i, 0, 0, True, COMPUTED) for i in range(n + 1)]
        return kind(M, N, ent, n, None)
    if res.finite:
        w = min(n, res.head)
        hom = diff_builder(res, N, w)
        ent = [TorEntry(i, h.length, h.nu, h.m_annihilated, COMPUTED)
               for i, h in enumerate(hom)]
        ent += [TorEntry(i, 0, 0, True, COMPUTED) for i in range(w + 1, n + 1)]
        return kind(M, N, ent, w, None)

    if kind is TorTable and radical_rows(M)[0].shape[0] == 0:
        # M is a k-vector space k^a: tensoring the minimal resolution of N
        # with k kills every differential, so Tor_i(M, N) = k^(a b_i(N))
        a = M.dim
        resN = resolve(N, n)
        bN = resN.betti(n)
        wN = min(n, resN.head if resN.finite else resN.head - 1)
        ent = [TorEntry(i, a * bN[i], a * bN[i], True,
                        COMPUTED if i <= wN else CERTIFIED)
               for i in range(n + 1)]
        return kind(M, N, ent, wN, None if wN >= n else resN.tail_certificate().junction)

    if resolve(N, 1).finite:
        # finite projective dimension over an artinian local ring forces N
        # free, and a free module is also injective here (R is self-injective)
        # so both Tor and Ext vanish exactly in positive degrees
        hom = diff_builder(res, N, 0)
        ent = [TorEntry(0, hom[0].length, hom[0].nu, hom[0].m_annihilated,
                        COMPUTED)]
        ent += [TorEntry(i, 0, 0, True, COMPUTED) for i in range(1, n + 1)]
        return kind(M, N, ent, n, None)

    J, nu_x, nu_mx = _tail_parameters(res)
    # prefer honest materialization through degree n when it is affordable
    # (slow-growing resolutions, e.g. e = 2, may never need a certificate)
    cost = max(res.betti(n + 1))
    if cost * res.ring.dim <= res.budget and cost * N.dim <= TOR_BUDGET:
        res.extend(n + 1, ignore_budget=True)
    # the length-count equality can start at J + 2 at the earliest (degree
    # J + 1 may legitimately disagree), so the floor leaves room for a full
    # margin above it
    floor = J + TOR_MARGIN + 1
    cap = _size_capped_window(res, N.dim, n, floor=floor)
    target_w = min(n, max(min(res.head - 1, cap), floor))
    for attempt in range(WINDOW_RETRIES + 1):
        if attempt and res.betti(target_w + 1)[target_w + 1] * N.dim > MAX_WINDOW_ROWS:
            break   # refuse runaway windows; fail honestly below instead
        res.extend(target_w + 1, ignore_budget=True)
        w = min(n, res.head - 1, max(target_w, floor))
        hom = diff_builder(res, N, w)
        if n <= w:
            ent = [TorEntry(i, h.length, h.nu, h.m_annihilated, COMPUTED)
                   for i, h in enumerate(hom[: n + 1])]
            return kind(M, N, ent, w, None)
        # certify: equality of honest lengths with the junction length count
        resN = resolve(N, n - J + 1)
        t0 = None
        for i in range(w, J, -1):
            if hom[i].length != _expected_tail(res, resN, J, nu_x, nu_mx, i):
                break
            t0 = i
        ok = t0 is not None and w - t0 + 1 >= TOR_MARGIN
        if ok:
            ent = [TorEntry(i, h.length, h.nu, h.m_annihilated, COMPUTED)
                   for i, h in enumerate(hom)]
            for i in range(w + 1, n + 1):
                li = _expected_tail(res, resN, J, nu_x, nu_mx, i)
                assert li >= 0
                ent.append(TorEntry(i, li, li, True, CERTIFIED))
            return kind(M, N, ent, w, J)
        target_w += 1
    raise InsufficientDegree(
        f"no length-count equality margin of {TOR_MARGIN} within the "
        f"materialized window (degrees through {w})", violating_index=w)


def tor(M: FiniteModule, N: FiniteModule, n: int) -> TorTable:
    """Tor_i(M, N) bookkeeping for 0 <= i <= n."""
    return _build_table(M, N, n, TorTable, _homology_window)


def _cohomology_window(res: MinimalFreeResolution, N: FiniteModule,
                       w: int) -> list[_Homology]:
    """Honest Ext cohomology of Hom(F_*(res.module), N) in degrees 0..w."""
    p = N.ring.p
    d = N.dim
    out = []
    dims = [b * d for b in res.betti_head]
    Emats = {}

    def emat(i):
        # E_i: C^i -> C^{i+1}, built from del_{i+1}
        if i not in Emats:
            if i + 1 > res.head:
                Emats[i] = np.zeros((0, dims[i]), dtype=np.int64)
            else:
                Emats[i] = _ext_diff(res.diff(i + 1), N)
        return Emats[i]

    prev_im: np.ndarray | None = None
    for i in range(w + 1):
        ci = dims[i] if i <= res.head else 0
        Z = linalg.kernel_array(emat(i), p)
        if prev_im is None:
            Bnd = np.zeros((0, ci), dtype=np.int64)
            bpiv: list = []
        else:
            Bnd, bpiv = linalg.row_space(prev_im.T, p)
        li = Z.shape[0] - Bnd.shape[0]
        assert li >= 0
        extra = _radical_excess(N, Z, Bnd, bpiv) if ci else 0
        out.append(_Homology(li, li - extra, extra == 0, Z, Bnd, []))
        prev_im = emat(i)
    return out


def ext(M: FiniteModule, N: FiniteModule, n: int) -> ExtTable:
    """Ext^i(M, N) bookkeeping for 0 <= i <= n.

    Honest degrees come from the Hom complex; the certified tail is pulled
    across Matlis duality from tor(M, N*): Ext^i(M, N) is the dual of
    Tor_i(M, N*), and in the tail m kills everything so length and nu agree.
    """
    if M.ring != N.ring:
        raise RingMismatch("modules over different rings")
    res = resolve(M, max(n, 1))
    if N.dim == 0 or M.dim == 0 or res.finite:
        t = _build_table(M, N, n, ExtTable, _cohomology_window)
        return t
    tdual = tor(M, matlis_dual(N), n)
    w = min(tdual.window, _size_capped_window(res, N.dim, n))
    res.extend(w + 1, ignore_budget=True)
    w = min(w, res.head if res.finite else res.head - 1)
    hom = _cohomology_window(res, N, w)
    entries = [TorEntry(i, h.length, h.nu, h.m_annihilated, COMPUTED)
               for i, h in enumerate(hom[: min(n, w) + 1])]
    for i in range(len(entries)):
        assert entries[i].length == tdual.entries[i].length, (
            "Ext/Tor duality violated at degree %d" % i)
    entries += tdual.entries[w + 1: n + 1]
    return ExtTable(M, N, entries, w, tdual.junction)


def _induced_block(F: np.ndarray, N: FiniteModule) -> np.ndarray:
    """k-matrix of f_i tensor N: N^a -> N^b for the lift entry array F."""
    a, b, _ = F.shape
    d = N.dim
    out = np.einsum("abc,cxy->bxay", F, N.all_ops) % N.ring.p
    return out.reshape(b * d, a * d)


def tor_induced(phi: ModuleMap, N: FiniteModule, n: int) -> list[InducedMapResult]:
    """Ranks of Tor_i(phi, N): Tor_i(A, N) -> Tor_i(B, N) for honest degrees
    0..min(n, window)."""
    A, B = phi.source, phi.target
    if N.ring != A.ring:
        raise RingMismatch("modules over different rings")
    p = N.ring.p
    ra = resolve(A, max(n, 1))
    rb = resolve(B, max(n, 1))
    w = min(n,
            _size_capped_window(ra, N.dim, n),
            _size_capped_window(rb, N.dim, n))
    ra.extend(w + 1, ignore_budget=True)
    rb.extend(w + 1, ignore_budget=True)
    wa = ra.head if ra.finite else ra.head - 1
    wb = rb.head if rb.finite else rb.head - 1
    w = min(w, wa, wb)
    lift = lift_chain_map(phi, w)
    ha = _homology_window(ra, N, w)
    hb = _homology_window(rb, N, w)
    out = []
    for i in range(w + 1):
        Za = ha[i].cycles
        if Za.size == 0 or hb[i].length == 0:
            rank = 0
        else:
            U = _induced_block(lift.maps[i], N)
            img = Za @ U.T % p
            # rank of the induced map on homology: images modulo boundaries
            Bnd = hb[i].boundary_rows
            stacked = np.concatenate([Bnd, img], axis=0)
            rank = linalg.rank_array(stacked, p) - Bnd.shape[0]
        out.append(InducedMapResult(i, rank, ha[i].length, hb[i].length,
                                    COMPUTED))
    return out


@dataclass
class LengthCountReport:
    M: FiniteModule
    N: FiniteModule
    degrees: list[dict]
    all_equalities_hold: bool


def length_count_audit(M: FiniteModule, N: FiniteModule, n: int) -> LengthCountReport:
    """Check, degree by honest degree, the identity

        l(Tor_i(M,N)) = nu(M) b_i(N) - nu(mM) b_{i-1}(N) + l(L_i) + l(L_{i-1})

    together with the companion inequality, where L_i is the image of
    Tor_i(iota_M, N).  Requires m^2 M = 0."""
    if radical_square_rows(M)[0].shape[0]:
        raise RadicalSquareNonzero("length count requires m^2 M = 0")
    nuM, _ = minimal_generators(M)
    U, piv = radical_rows(M)
    nu_mM = U.shape[0]  # m M is a k-vector space here
    from .modules import submodule
    mM, iota = submodule(M, U, piv) if U.shape[0] else (None, None)
    table = tor(M, N, n)
    w = table.window
    bN = resolve(N, w + 1).betti(w + 1)
    if mM is None:
        ranks = [0] * (w + 1)
    else:
        ranks = [r.rank for r in tor_induced(iota, N, min(n, w))]
        w = min(w, len(ranks) - 1)
    rows = []
    ok = True
    for i in range(1, min(n, w) + 1):
        base = nuM * bN[i] - nu_mM * bN[i - 1]
        li = table.entries[i].length
        eq = li == base + ranks[i] + ranks[i - 1]
        ok = ok and eq
        rows.append({
            "i": i,
            "length": li,
            "base": base,
            "rank_i": ranks[i],
            "rank_prev": ranks[i - 1],
            "equality": eq,
            "inequality": li >= base,
            "equality_iff_vanishing": (li == base) == (ranks[i] == 0 and ranks[i - 1] == 0),
        })
    return LengthCountReport(M, N, rows, ok)


def iota_vanishing(M: FiniteModule, N: FiniteModule, n: int):
    """(ranks over the honest window, certified_through) for Tor_i(iota_M, N).

    Beyond the window, vanishing is certified by the length-count equality
    exactly when the Tor table's tail is certified with junction at M itself;
    here we return the honest ranks and the degree through which the
    zero-rank claim extends (n when the tail is certified, else the window).
    """
    if radical_square_rows(M)[0].shape[0]:
        raise RadicalSquareNonzero("iota-vanishing analysis requires m^2 M = 0")
    U, piv = radical_rows(M)
    if U.shape[0] == 0:
        return [0] * (n + 1), n  # mM = 0: the inclusion is the zero map
    from .modules import submodule
    _, iota = submodule(M, U, piv)
    table = tor(M, N, n)
    results = tor_induced(iota, N, min(n, table.window))
    w = results[-1].i
    ranks = [r.rank for r in results]
    certified_through = w
    if w >= n:
        return ranks, n
    # tail: the length count makes equality of l(Tor_i(M,N)) with
    # nu(M) b_i(N) - nu(mM) b_{i-1}(N) equivalent to rank_i = rank_{i-1} = 0,
    # so equality on a margin of honest degrees plus every certified degree
    # through n proves the ranks vanish there
    nuM, _ = minimal_generators(M)
    nu_mM = U.shape[0]
    wt = table.window
    bN = resolve(N, n).betti(n)

    def base(i):
        return nuM * bN[i] - nu_mM * bN[i - 1]

    s = None
    for i in range(wt, 0, -1):
        if table.entries[i].length != base(i):
            break
        s = i
    if (s is not None and wt - s + 1 >= TOR_MARGIN
            and all(table.entries[i].length == base(i)
                    for i in range(wt + 1, n + 1))):
        certified_through = n
    return ranks, certified_through
