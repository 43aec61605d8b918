"""Seeded, bounded property suites for the structural results.

Each check generates rings and modules from an explicit seed, tests a single
statement on every generated instance, and returns a VerificationReport whose
failures carry a reproducer (the seed and trial index).  Statements with
hypotheses (e > 2 gates, m^2 M = 0, Koszulness filters) skip instances that
violate them; a skip is never a failure.  "i >> 0" conclusions are
operationalized as: there exists s <= cutoff - margin with the property
holding on [s, cutoff].
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import homology, koszul, linalg, series
from .errors import ConfigError, GorlabError, InsufficientDegree
from .modules import (
    FiniteModule,
    cyclic_module,
    hilbert_function,
    matlis_dual,
    hom_space,
    nu,
    radical_rows,
    radical_square_rows,
    random_module,
    split_extension,
    submodule,
)
from .resolution import resolve, syzygy
from .ring import (
    ShortGorensteinRing,
    hyperbolic_form,
    identity_form,
    make_ring,
    random_nondegenerate_form,
)

FORM_CHOICES = ("identity", "hyperbolic", "random")


@dataclass(frozen=True)
class TrialConfig:
    seed: int = 0
    trials: int = 25
    p: int = 101
    e: int = 3
    form: str = "identity"
    max_generators: int = 3
    max_relations: int = 3
    max_dim: int = 12
    cutoff: int = 20
    margin: int = 5

    def __post_init__(self):
        if self.cutoff < 10:
            raise ConfigError(f"cutoff {self.cutoff} < 10")
        if self.trials < 1 or self.max_generators < 1 or self.max_dim < 1:
            raise ConfigError("trial counts and size caps must be positive")
        if self.max_relations < 0 or self.margin < 0:
            raise ConfigError("negative configuration value")
        if self.form not in FORM_CHOICES:
            raise ConfigError(f"form must be one of {FORM_CHOICES}")


@dataclass
class VerificationReport:
    check: str
    config: dict
    passed: bool
    trials: list
    failures: list
    elapsed_ms: int

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "check": self.check,
            "config": self.config,
            "pass": self.passed,
            "trials": self.trials,
            "failures": self.failures,
        }
        if include_timing:
            out["elapsed_ms"] = self.elapsed_ms
        return out


def _ring_for(cfg: TrialConfig, index: int = 0) -> ShortGorensteinRing:
    if cfg.form == "identity":
        form = identity_form(cfg.e)
    elif cfg.form == "hyperbolic":
        form = hyperbolic_form(cfg.e)
    else:
        rng = np.random.default_rng(cfg.seed + 7919 * index)
        form = random_nondegenerate_form(cfg.e, cfg.p, rng)
    return make_ring(cfg.p, cfg.e, form)


def _draw_module(ring, cfg: TrialConfig, rng) -> FiniteModule:
    """A random nonzero module within the size caps."""
    while True:
        g = int(rng.integers(1, cfg.max_generators + 1))
        r = int(rng.integers(0, cfg.max_relations + 1))
        M = random_module(ring, g, r, int(rng.integers(0, 2**62)))
        if 0 < M.dim <= cfg.max_dim:
            return M


def _draw_ideal_gens(ring, rng, include_edge: int = -1):
    """1-3 random ideal generators with mixed degree-1/degree-2 parts;
    include_edge 0 -> I = m^2, 1 -> I = m."""
    if include_edge == 0:
        return [ring.w()]
    if include_edge == 1:
        return [ring.x(i) for i in range(1, ring.e + 1)] + [ring.w()]
    gens = []
    for _ in range(int(rng.integers(1, 4))):
        c = np.zeros(ring.dim, dtype=np.int64)
        c[1:ring.e + 1] = rng.integers(0, ring.p, size=ring.e)
        if rng.integers(0, 2):
            c[-1] = rng.integers(0, ring.p)
        gens.append(ring.element(c))
    return gens


def _fingerprint(M: FiniteModule) -> dict:
    return {"dim": int(M.dim), "nu": int(nu(M)),
            "hilbert": [int(h) for h in hilbert_function(M)]}


def _thread_count() -> int:
    try:
        return max(int(os.environ.get("GORLAB_THREADS", "0")), 0)
    except ValueError:
        return 0


def _run_trials(fn, count: int):
    """Run fn(index) for each trial; parallel when GORLAB_THREADS > 1, with
    results always reduced in index order."""
    threads = _thread_count()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, range(count)))
    return [fn(i) for i in range(count)]


def _finish(check: str, cfg: TrialConfig, trials: list, t0: float) -> VerificationReport:
    failures = [t for t in trials if t.get("status") == "fail"]
    return VerificationReport(check, asdict(cfg), not failures, trials,
                              failures, int((time.time() - t0) * 1000))


# ---------------------------------------------------------------------------
# individual checks


def verify_lofwall(cfg: TrialConfig) -> VerificationReport:
    """beta_i(k) equals the expansion of 1/(1 - e t + t^2) through the cutoff,
    with b_0 = 1, b_1 = e and the three-term recurrence."""
    t0 = time.time()
    count = cfg.trials if cfg.form == "random" else 1

    def one(i):
        ring = _ring_for(cfg, i)
        k = FiniteModule.residue_field(ring)
        # the tail past the (tiny) junction of k is certified, so a modest
        # budget keeps deep cutoffs at e = 4, 5 from grinding huge kernels
        b = [int(x) for x in resolve(k, cfg.cutoff, budget=600).betti(cfg.cutoff)]
        expected = series.expand_rational([1], cfg.e, cfg.cutoff)
        ok = (b == expected and b[0] == 1 and b[1] == cfg.e
              and all(b[i + 1] == cfg.e * b[i] - b[i - 1]
                      for i in range(1, cfg.cutoff)))
        return {"trial": i, "status": "pass" if ok else "fail",
                "betti": b, "expected": expected}

    return _finish("lofwall", cfg, _run_trials(one, count), t0)


def verify_main_theorem(cfg: TrialConfig) -> VerificationReport:
    """Per random pair (M, N): m Tor_i = m Ext^i = 0 on a tail [s, n];
    certify_rational succeeds on all four series; length = nu on the tail."""
    if cfg.e <= 2:
        raise ConfigError(
            "the theorem assumes e > 2; run verify_counterexample_e2 instead")
    t0 = time.time()
    ring = _ring_for(cfg)
    n = cfg.cutoff

    def one(t):
        rng = np.random.default_rng(cfg.seed + t)
        M = _draw_module(ring, cfg, rng)
        N = _draw_module(ring, cfg, rng)
        rec = {"trial": t, "M": _fingerprint(M), "N": _fingerprint(N)}
        try:
            ttab = homology.tor(M, N, n)
            etab = homology.ext(M, N, n)
            s = n + 1
            for s_try in range(n, -1, -1):
                if (ttab.entries[s_try].m_annihilated
                        and etab.entries[s_try].m_annihilated):
                    s = s_try
                else:
                    break
            rec["s"] = s
            problems = []
            if s > n - cfg.margin:
                problems.append(f"m-annihilation tail starts at {s}")
            for label, ser in (
                ("tor_nu", series.TruncatedIntegerSeries("tor_nu", ttab.nus())),
                ("tor_length", series.TruncatedIntegerSeries("tor_length", ttab.lengths())),
                ("ext_nu", series.TruncatedIntegerSeries("ext_nu", etab.nus())),
                ("ext_length", series.TruncatedIntegerSeries("ext_length", etab.lengths())),
            ):
                try:
                    cert = series.certify_rational(ser, cfg.e, cfg.margin)
                    rec[label + "_s"] = cert.s
                except InsufficientDegree as ex:
                    problems.append(f"{label} not certified: {ex}")
            for i in range(s, n + 1):
                if ttab.entries[i].length != ttab.entries[i].nu:
                    problems.append(f"tor length != nu at {i}")
                if etab.entries[i].length != etab.entries[i].nu:
                    problems.append(f"ext length != nu at {i}")
            rec["status"] = "fail" if problems else "pass"
            if problems:
                rec["problems"] = problems
        except GorlabError as ex:
            rec["status"] = "fail"
            rec["problems"] = [f"{type(ex).__name__}: {ex}"]
        return rec

    return _finish("main_theorem", cfg, _run_trials(one, cfg.trials), t0)


def verify_vanishing_proposition(cfg: TrialConfig) -> VerificationReport:
    """For Koszul M with m^2 M = 0 and arbitrary N, the induced maps
    Tor_i(iota_M, N) vanish on a tail; cyclic Koszul M obey the effective
    bound: zero for every i > nu(N*)."""
    if cfg.e <= 2:
        raise ConfigError("the proposition assumes e > 2")
    t0 = time.time()
    ring = _ring_for(cfg)
    n = cfg.cutoff

    def one(t):
        rng = np.random.default_rng(cfg.seed + t)
        cyclic = t % 2 == 0
        if cyclic:
            M, _ = cyclic_module(ring, _draw_ideal_gens(ring, rng))
        else:
            M = _draw_module(ring, cfg, rng)
        N = _draw_module(ring, cfg, rng)
        rec = {"trial": t, "cyclic": cyclic, "M": _fingerprint(M),
               "N": _fingerprint(N)}
        if M.dim == 0 or radical_square_rows(M)[0].shape[0]:
            rec["status"] = "skipped"
            rec["reason"] = "m^2 M != 0 or M = 0"
            return rec
        verdict = koszul.is_koszul(M)
        if not verdict.is_koszul():
            rec["status"] = "skipped"
            rec["reason"] = "M not Koszul"
            return rec
        ranks, certified = homology.iota_vanishing(M, N, n)
        rec["ranks"] = [int(r) for r in ranks]
        rec["certified_through"] = certified
        problems = []
        s = len(ranks)
        while s > 1 and ranks[s - 1] == 0:
            s -= 1
        rec["s"] = s
        if certified < n:
            problems.append(f"vanishing tail only certified through {certified}")
        elif s > n - cfg.margin:
            problems.append(f"rank tail starts at {s}")
        if cyclic:
            bound = nu(matlis_dual(N))
            rec["nu_dual"] = int(bound)
            bad = [i for i in range(bound + 1, len(ranks)) if ranks[i] != 0]
            if bad:
                problems.append(f"cyclic bound violated at {bad}")
        rec["status"] = "fail" if problems else "pass"
        if problems:
            rec["problems"] = problems
        return rec

    return _finish("vanishing_proposition", cfg, _run_trials(one, cfg.trials), t0)


def verify_counterexample_e2(cfg: TrialConfig) -> VerificationReport:
    """Over R2 = k[x,y]/(x^2, y^2) with M = N = R/(x): Tor_i(M, N) is M
    itself for every i >= 1 (length 2, nu 1, not killed by m), the induced
    maps have rank 1, and beta_i(M) = 1; the nu series is still rational."""
    t0 = time.time()
    ring = make_ring(cfg.p, 2, hyperbolic_form(2))
    n = min(cfg.cutoff, 15)
    M, _ = cyclic_module(ring, [ring.x(1)])
    rec = {"trial": 0, "M": _fingerprint(M)}
    problems = []
    table = homology.tor(M, M, n)
    betti = [int(b) for b in resolve(M, n).betti(n)]
    rec["lengths"] = table.lengths()
    rec["betti"] = betti
    for i in range(1, n + 1):
        e = table.entries[i]
        if not (e.length == 2 and e.nu == 1 and not e.m_annihilated):
            problems.append(f"Tor_{i} is not M numerically")
    if betti != [1] * (n + 1):
        problems.append("beta_i(R/(x)) != 1")
    U, piv = radical_rows(M)
    _, iota = submodule(M, U, piv)
    ranks = [r.rank for r in homology.tor_induced(iota, M, n)]
    rec["ranks"] = [int(r) for r in ranks]
    if any(r != 1 for r in ranks[1:]):
        problems.append("induced rank != 1 at a positive degree")
    nu_series = series.TruncatedIntegerSeries("tor_nu", table.nus())
    try:
        cert = series.certify_rational(nu_series, 2, cfg.margin)
        rec["nu_series_s"] = cert.s
        rec["note"] = ("rationality holds at e = 2 even though "
                       "m-annihilation fails")
    except InsufficientDegree as ex:
        problems.append(f"nu series not certified: {ex}")
    rec["status"] = "fail" if problems else "pass"
    if problems:
        rec["problems"] = problems
    return _finish("counterexample_e2", cfg, [rec], t0)


# ---------------------------------------------------------------------------
# lemma suite


def _check_lescot(cfg: TrialConfig, ring) -> list:
    """nu(M_1) = nu(M) e - nu(mM) and nu(m M_1) = nu(M), for m^2 M = 0 and
    M_1 not splitting off k."""

    def one(t):
        rng = np.random.default_rng(cfg.seed + 1000 + t)
        M = _draw_module(ring, cfg, rng)
        rec = {"check": "lescot", "trial": t, "M": _fingerprint(M)}
        if radical_square_rows(M)[0].shape[0]:
            rec["status"] = "skipped"
            return rec
        M1 = syzygy(M, 1)
        if M1.dim == 0 or koszul.split_off_k_witness(M1) is not None:
            rec["status"] = "skipped"
            return rec
        U, _ = radical_rows(M)
        lhs1, rhs1 = nu(M1), nu(M) * ring.e - U.shape[0]
        # nu(m M_1) = dim m M_1: it is a vector space since m^2 M_1 = 0
        U1, _ = radical_rows(M1)
        lhs2, rhs2 = U1.shape[0], nu(M)
        ok = lhs1 == rhs1 and lhs2 == rhs2
        rec.update(status="pass" if ok else "fail",
                   values=[int(lhs1), int(rhs1), int(lhs2), int(rhs2)])
        return rec

    return _run_trials(one, 4 * cfg.trials)


def _check_betti_growth(cfg: TrialConfig) -> list:
    """For proper ideals I and e > 2: beta_i(R/I) strictly increasing from
    i = 1 and beta_i >= i."""

    def one(t):
        e = 3 if t % 2 == 0 else 4
        ring = make_ring(cfg.p, e, identity_form(e))
        rng = np.random.default_rng(cfg.seed + 2000 + t)
        gens = _draw_ideal_gens(ring, rng, include_edge=(0 if t % 10 == 0 else
                                                         1 if t % 10 == 5 else -1))
        M, _ = cyclic_module(ring, gens)
        rec = {"check": "betti_growth", "trial": t, "e": e,
               "M": _fingerprint(M)}
        if M.dim == ring.dim:   # I = 0 is not proper-interesting: R is free
            rec["status"] = "skipped"
            return rec
        n = min(cfg.cutoff, 12)
        b = [int(x) for x in resolve(M, n).betti(n)]
        ok = (all(b[i] >= i for i in range(n + 1))
              and all(b[i + 1] > b[i] for i in range(1, n)))
        rec.update(status="pass" if ok else "fail", betti=b)
        return rec

    return _run_trials(one, 2 * cfg.trials)


def _check_koszul_iff(cfg: TrialConfig, ring) -> list:
    """R/I is not Koszul exactly when I = m^2."""

    def one(t):
        rng = np.random.default_rng(cfg.seed + 3000 + t)
        edge = 0 if t % 10 == 0 else 1 if t % 10 == 5 else -1
        gens = _draw_ideal_gens(ring, rng, include_edge=edge)
        M, _ = cyclic_module(ring, gens)
        rec = {"check": "koszul_iff", "trial": t, "M": _fingerprint(M)}
        if M.dim == ring.dim:
            rec["status"] = "skipped"   # I = 0: R/I free, Koszulness trivial
            return rec
        is_m2 = hilbert_function(M) == [1, ring.e]
        verdict = koszul.is_koszul(M)
        ok = verdict.is_koszul() == (not is_m2)
        rec.update(status="pass" if ok else "fail", i_eq_m2=is_m2,
                   verdict=verdict.verdict)
        return rec

    return _run_trials(one, 8 * cfg.trials)


def _check_tail_equivalence(cfg: TrialConfig, ring) -> list:
    """Tor_i(iota_M, N) vanishes for i >> 0 iff the same holds for M_1,
    when m^2 M = 0 and M_1 does not split off k."""
    n = min(cfg.cutoff, 12)

    def one(t):
        rng = np.random.default_rng(cfg.seed + 4000 + t)
        M = _draw_module(ring, cfg, rng)
        N = _draw_module(ring, cfg, rng)
        rec = {"check": "tail_equivalence", "trial": t, "M": _fingerprint(M),
               "N": _fingerprint(N)}
        if radical_square_rows(M)[0].shape[0]:
            rec["status"] = "skipped"
            return rec
        M1 = syzygy(M, 1)
        if M1.dim == 0 or koszul.split_off_k_witness(M1) is not None:
            rec["status"] = "skipped"
            return rec
        vm = _tail_vanishes(M, N, n, cfg.margin)
        v1 = _tail_vanishes(M1, N, n, cfg.margin)
        rec.update(status="pass" if vm == v1 else "fail",
                   vanishing=[vm, v1])
        return rec

    return _run_trials(one, cfg.trials)


def _tail_vanishes(M: FiniteModule, N: FiniteModule, n: int, margin: int) -> bool:
    ranks, certified = homology.iota_vanishing(M, N, n)
    w = len(ranks) - 1
    s = w + 1
    while s > 1 and ranks[s - 1] == 0:
        s -= 1
    # zeros hold on [s, certified]; certified degrees count toward the
    # margin just like honest ones (the honest window alone can be shorter
    # than the margin even when the tail is certified much further)
    return certified >= n and s <= n - margin


def _check_length_count(cfg: TrialConfig, ring) -> list:
    """Length-count equality at degree i holds iff the induced maps vanish
    at i and i-1 (Remark conditions), plus the companion inequality."""

    def one(t):
        rng = np.random.default_rng(cfg.seed + 5000 + t)
        M = _draw_module(ring, cfg, rng)
        N = _draw_module(ring, cfg, rng)
        rec = {"check": "length_count", "trial": t, "M": _fingerprint(M),
               "N": _fingerprint(N)}
        if radical_square_rows(M)[0].shape[0]:
            rec["status"] = "skipped"
            return rec
        rep = homology.length_count_audit(M, N, min(cfg.cutoff, 10))
        ok = all(r["equality"] and r["inequality"]
                 and r["equality_iff_vanishing"] for r in rep.degrees)
        rec.update(status="pass" if ok else "fail",
                   degrees_checked=len(rep.degrees))
        return rec

    return _run_trials(one, cfg.trials)


def _check_hom_vanishing(cfg: TrialConfig, ring) -> list:
    """For cyclic Koszul M and beta_i(M) > beta_i(N) at some i: every
    phi: M -> N lands in mN, and (when m^2 N = 0) phi kills mM."""

    def one(t):
        rng = np.random.default_rng(cfg.seed + 6000 + t)
        M, _ = cyclic_module(ring, _draw_ideal_gens(ring, rng))
        N = _draw_module(ring, cfg, rng)
        rec = {"check": "hom_vanishing", "trial": t, "M": _fingerprint(M),
               "N": _fingerprint(N)}
        if M.dim == 0 or M.dim == ring.dim or not koszul.is_koszul(M).is_koszul():
            rec["status"] = "skipped"
            return rec
        n = min(cfg.cutoff, 12)
        bM = resolve(M, n).betti(n)
        bN = resolve(N, n).betti(n)
        if not any(bM[i] > bN[i] for i in range(n + 1)):
            rec["status"] = "skipped"
            rec["reason"] = "no degree with beta_i(M) > beta_i(N)"
            return rec
        UN, pivN = radical_rows(N)
        UM, _ = radical_rows(M)
        p = ring.p
        problems = []
        for phi in hom_space(M, N):
            img = phi.matrix.T % p   # rows are images of the basis of M
            if not linalg.in_rowspace(UN, pivN, img, p):
                problems.append("phi(M) not inside mN")
            if radical_square_rows(N)[0].shape[0] == 0 and UM.shape[0]:
                if (phi.matrix @ UM.T % p).any():
                    problems.append("phi does not kill mM")
        rec["status"] = "fail" if problems else "pass"
        if problems:
            rec["problems"] = problems
        return rec

    return _run_trials(one, cfg.trials)


def _check_three_parts(cfg: TrialConfig, ring) -> list:
    """Split extensions 0 -> Rx -> M -> B -> 0 with x outside mM: when
    m^2 M = 0 and M is Koszul, B is Koszul."""

    def one(t):
        rng = np.random.default_rng(cfg.seed + 8000 + t)
        M = _draw_module(ring, cfg, rng)
        rec = {"check": "three_parts", "trial": t, "M": _fingerprint(M)}
        if radical_square_rows(M)[0].shape[0] or not koszul.is_koszul(M).is_koszul():
            rec["status"] = "skipped"
            return rec
        # x = the first minimal generator of M
        U, piv = radical_rows(M)
        pivset = set(piv)
        free_cols = [c for c in range(M.dim) if c not in pivset]
        x = np.zeros(M.dim, dtype=np.int64)
        x[free_cols[0]] = 1
        data = split_extension(M, x)
        verdict = koszul.is_koszul(data.B)
        rec.update(status="pass" if verdict.is_koszul() else "fail",
                   B_dim=int(data.B.dim))
        return rec

    return _run_trials(one, cfg.trials)


def _ann_is_m2(ann: np.ndarray, p: int) -> bool:
    """ann given as rref rows of {r : r x = 0} inside R; m^2 = span(w)."""
    if ann.shape[0] != 1:
        return False
    v = ann[0] % p
    return not v[:-1].any() and v[-1] != 0


def _check_annihilator(cfg: TrialConfig, ring) -> list:
    """Search for x outside mM with ann(x) != m^2 (exists over algebraically
    closed k when m^2 M = 0 and nu(M) >= nu(mM)); over GF(p) a not-found is a
    soft outcome, reported but never failing."""

    def one(t):
        rng = np.random.default_rng(cfg.seed + 9000 + t)
        M = _draw_module(ring, cfg, rng)
        rec = {"check": "annihilator", "trial": t, "M": _fingerprint(M)}
        U, piv = radical_rows(M)
        if radical_square_rows(M)[0].shape[0] or nu(M) < U.shape[0]:
            rec["status"] = "skipped"
            return rec
        pivset = set(piv)
        free_cols = [c for c in range(M.dim) if c not in pivset]
        p = ring.p
        found = False
        candidates = 0
        for _ in range(60):
            x = np.zeros(M.dim, dtype=np.int64)
            x[free_cols] = rng.integers(0, p, size=len(free_cols))
            if not x.any():
                continue
            candidates += 1
            T = np.stack([M.all_ops[b] @ x % p for b in range(ring.dim)], axis=1)
            ann = linalg.kernel_array(T, p)
            if not _ann_is_m2(ann, p):
                found = True
                break
        rec.update(status="pass" if found else "soft_not_found",
                   candidates=candidates)
        return rec

    return _run_trials(one, cfg.trials)


def verify_lemma_suite(cfg: TrialConfig) -> VerificationReport:
    """Bundle of the supporting lemmas: Lescot formulas, cyclic Betti growth,
    R/I Koszul iff I != m^2, tail equivalence between M and M_1, length-count
    equality vs induced-rank vanishing, Hom vanishing, split extensions, and
    the (soft) annihilator search."""
    t0 = time.time()
    ring = _ring_for(cfg)
    trials: list = []
    trials += _check_lescot(cfg, ring)
    trials += _check_betti_growth(cfg)
    trials += _check_koszul_iff(cfg, ring)
    trials += _check_tail_equivalence(cfg, ring)
    trials += _check_length_count(cfg, ring)
    trials += _check_hom_vanishing(cfg, ring)
    trials += _check_three_parts(cfg, ring)
    trials += _check_annihilator(cfg, ring)
    return _finish("lemma_suite", cfg, trials, t0)


CHECKS = {
    "lofwall": verify_lofwall,
    "main-theorem": verify_main_theorem,
    "vanishing": verify_vanishing_proposition,
    "counterexample-e2": verify_counterexample_e2,
    "lemma-suite": verify_lemma_suite,
}


def run_check(name: str, cfg: TrialConfig) -> VerificationReport:
    if name not in CHECKS:
        raise ConfigError(f"unknown check {name!r}; choose from {sorted(CHECKS)}")
    return CHECKS[name](cfg)
