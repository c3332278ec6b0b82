"""End-to-end acceptance gate: one test per headline property, each
printing a single pass/fail line. These are the contracts the library is
shipped against; the per-module tests probe finer-grained behavior."""

import math

import numpy as np
import pytest

from integrable import models, mpa, oscillator, sixvertex, uqsl2, ybe
from integrable.models import AsepParams, XxzParams
from integrable.sixvertex import PoleInSpectralLadder
from integrable.tensor import permutation_operator, stationary_distribution


def _line(num: int, label: str, ok: bool, detail: str):
    print(f"criterion {num:2d} [{'PASS' if ok else 'FAIL'}] {label}: {detail}")
    assert ok, f"criterion {num} ({label}): {detail}"


def test_criterion_1_braided_ybe_family():
    worst = 0.0
    from integrable.tensor import identity

    for R in (permutation_operator(2, 2), identity((2, 2))):
        worst = max(worst, ybe.verify_braided_ybe(R)["residual"])
    grid = [round(0.1 * i, 1) for i in range(11)]
    for a in grid:
        r = ybe.verify_braided_ybe(ybe.r_alpha_beta(a, 0.0))
        worst = max(worst, min(r["residual"], r["r_check_residual"]))
    for b in grid:
        r = ybe.verify_braided_ybe(ybe.r_alpha_beta(1.0, b))
        worst = max(worst, min(r["residual"], r["r_check_residual"]))
    bad = ybe.verify_braided_ybe(ybe.r_alpha_beta(0.5, 0.5))
    necessity = min(bad["residual"], bad["r_check_residual"])
    ok = worst <= 1e-10 and necessity > 1e-3
    _line(1, "braided YBE family", ok,
          f"max residual {worst:.2e}, generic-point residual {necessity:.2e}")


def test_criterion_2_spectral_suite():
    worst = 0.0
    reg = 0.0
    rho_err = 0.0
    zs = [0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
    for q in (0.3, 0.5, 0.8):
        fam = ybe.asep_r_family(q)
        for z in zs:
            for w in zs:
                worst = max(
                    worst, ybe.verify_spectral_ybe(fam, z, w)["residual"]
                )
        P = permutation_operator(2, 2).entries
        reg = max(reg, float(np.max(np.abs(fam.r_form(1.0) - P))))
        rep = ybe.markov_structure_report(fam, models.asep_bulk_w(q))
        rho_err = max(rho_err, abs(rep["params"]["rho_fit"] - 1.0 / (q - 1.0)))
    ok = worst <= 1e-10 and reg <= 1e-12 and rho_err <= 1e-5
    _line(2, "spectral R suite", ok,
          f"YBE {worst:.2e}, regularity {reg:.2e}, rho error {rho_err:.2e}")


def test_criterion_3_quantum_group_suite():
    rel = 0.0
    intw = 0.0
    trip = 0.0
    for q in (0.3, 0.7, 1.5):
        for m in range(1, 5):
            rel = max(rel, uqsl2.check_relations(uqsl2.rep(m, q))["max"])
        r1 = uqsl2.rep(1, q)
        chk = uqsl2.universal_r_check(r1, r1)
        intw = max(
            intw, max(v for k, v in chk.items() if k.startswith("intertwine"))
        )
        trip = max(
            trip, ybe.verify_braided_ybe(uqsl2.braided_r(r1, r1))["residual"]
        )
    ok = rel <= 1e-10 and intw <= 1e-10 and trip <= 1e-10
    _line(3, "quantum group suite", ok,
          f"relations {rel:.2e}, intertwining {intw:.2e}, triple YBE {trip:.2e}")


def test_criterion_4_xxz_asep_equivalence():
    res = xxz = 0.0
    for q in (0.4, 0.7):
        res = max(res, models.xxz_to_asep_search(q, grid=21)["residual"])
    xxx = XxzParams(Jx=1.0, Jy=1.0, Jz=1.0, N=4)
    xxx_worst = max(
        models.symmetry_commutator(models.xxz_hamiltonian(xxx), a)
        for a in (1, 2, 3)
    )
    aniso = XxzParams(Jx=1.0, Jy=1.0, Jz=1.7, N=4)
    H = models.xxz_hamiltonian(aniso)
    z_comm = models.symmetry_commutator(H, 3)
    broken = min(models.symmetry_commutator(H, a) for a in (1, 2))
    ok = (
        res <= 1e-9
        and xxx_worst <= 1e-12
        and z_comm <= 1e-12
        and broken > 1e-3
    )
    _line(4, "spin chain / exclusion equivalence", ok,
          f"search residual {res:.2e}, isotropic commutators {xxx_worst:.2e}, "
          f"axial {z_comm:.2e}, transverse {broken:.2e}")


def test_criterion_5_mpa_vs_oracle():
    rng = np.random.Generator(np.random.Philox(7))
    worst = 0.0
    for L in range(2, 7):
        for q in (0.3, 0.5, 0.8):
            for _ in range(5):
                # rates kept in the regime where the truncated matrix
                # elements stay positive and converge
                alpha, beta = rng.uniform(0.5, 1.2, size=2)
                gamma, delta = rng.uniform(0.05, 0.3, size=2)
                p = AsepParams(
                    q=q, alpha=alpha, beta=beta, gamma=gamma, delta=delta, L=L
                )
                mu = mpa.mpa_stationary_measure(p)
                pi = stationary_distribution(
                    models.asep_generator(p, open_boundary=True)
                )
                worst = max(worst, 0.5 * float(np.abs(mu.values - pi.values).sum()))
    ok = worst <= 1e-8
    _line(5, "matrix product vs null-space oracle", ok,
          f"max total variation {worst:.2e}")


def test_criterion_6_fusion_cross_check():
    q = 0.5
    worst_scaled = 0.0
    row_dev = 0.0
    pole_points = []
    for l in range(1, 5):
        for m in range(1, 5):
            for z in (0.1, 0.25, 0.4):
                try:
                    rec = sixvertex.fused_weights_recurrence(l, m, z, q)
                except PoleInSpectralLadder:
                    # z = 0.25 = q^(m+1) q^(2s) for some rung: both
                    # constructions must refuse the evaluation
                    with pytest.raises(PoleInSpectralLadder):
                        sixvertex.fused_weights_closed_form(l, m, z, q)
                    pole_points.append((l, m, z))
                    continue
                clo = sixvertex.fused_weights_closed_form(l, m, z, q)
                # entries reach ~1e10 at l=m=4, so the comparison is scaled
                # by entry magnitude (plain 1e-8 is below double precision)
                scale = np.maximum(1.0, np.abs(rec.table))
                worst_scaled = max(
                    worst_scaled,
                    float(np.max(np.abs(rec.table - clo.table) / scale)),
                )
                for tab in (rec.table, clo.table):
                    sums = tab.reshape(
                        (l + 1) * (m + 1), (l + 1) * (m + 1)
                    ).sum(axis=1)
                    row_scale = np.maximum(
                        1.0,
                        np.abs(tab).reshape(
                            (l + 1) * (m + 1), (l + 1) * (m + 1)
                        ).max(axis=1),
                    )
                    row_dev = max(
                        row_dev,
                        float(np.max(np.abs(sums - 1.0) / row_scale)),
                    )
    # fused l=m=2 spectral check: in T(x) := S(x / q^(l-1)) the spectral
    # variable is multiplicative across the three factors
    l = m = 2
    P = permutation_operator(m + 1, m + 1).entries

    def T(x):
        return sixvertex.fused_weights_recurrence(
            l, m, x * q ** (-(l - 1)), q
        ).as_operator().entries

    def e12(M):
        return np.kron(M, np.eye(m + 1))

    def e23(M):
        return np.kron(np.eye(l + 1), M)

    X = np.kron(np.eye(l + 1), P)

    def e13(M):
        return X @ np.kron(M, np.eye(m + 1)) @ X

    fused_ybe = 0.0
    for u, v in [(0.3, 0.7), (0.45, 0.8), (0.6, 0.35)]:
        lhs = e12(T(u)) @ e13(T(u * v)) @ e23(T(v))
        rhs = e23(T(v)) @ e13(T(u * v)) @ e12(T(u))
        fused_ybe = max(fused_ybe, float(np.max(np.abs(lhs - rhs))))
    ok = (
        worst_scaled <= 1e-8
        and row_dev <= 1e-9
        and fused_ybe <= 1e-9
        and len(pole_points) > 0
    )
    _line(6, "fusion cross-check", ok,
          f"scaled entry diff {worst_scaled:.2e}, row sums {row_dev:.2e}, "
          f"fused YBE {fused_ybe:.2e}, pole refusals {len(pole_points)}")


def test_criterion_7_reflection_suite():
    q, alpha, gamma, beta, delta = 0.5, 0.6, 0.15, 0.4, 0.2
    rfam = ybe.asep_r_family(q)
    kfam = ybe.reflection_family(q, alpha, gamma, side="left")
    kbar = ybe.reflection_family(q, beta, delta, side="right")
    worst = 0.0
    # grid chosen so q z/w and q z w stay away from 1 (R-matrix poles)
    for z in (0.3, 0.5, 0.7, 0.9):
        for w in (0.32, 0.55, 0.77, 0.95):
            for kf in (kfam, kbar):
                worst = max(
                    worst,
                    ybe.verify_reflection_equation(rfam, kf, z, w)["residual"],
                )
    k_one = float(
        np.max(np.abs(kfam.evaluator(1.0).entries - np.eye(2)))
    )
    k_one = max(
        k_one, float(np.max(np.abs(kbar.evaluator(1.0).entries - np.eye(2))))
    )
    h = 1e-5

    def kl(x):
        return kfam.evaluator(x).entries

    d1 = (kl(1 + h) - kl(1 - h)) / (2 * h)
    d2 = (kl(1 + h / 2) - kl(1 - h / 2)) / h
    kp = (4 * d2 - d1) / 3
    rho = 1.0 / (q - 1.0)
    B = np.array([[-alpha, alpha], [gamma, -gamma]])
    deriv = float(np.max(np.abs(kp - 2.0 * rho * B)))
    ok = worst <= 1e-10 and k_one <= 1e-12 and deriv <= 1e-6
    _line(7, "boundary reflection suite", ok,
          f"reflection {worst:.2e}, K(1) {k_one:.2e}, K'(1) {deriv:.2e}")


def test_criterion_8_contour_formula_vs_ctmc():
    worst1 = 0.0
    for t in (0.5, 1.0, 2.0):
        for q in (0.0, 0.5):
            for y, x in [((0,), (1,)), ((2,), (0,)), ((1,), (1,))]:
                v = models.tw_transition_probability(y, x, t, q)
                o = models.ctmc_oracle_probability(y, x, t, q)
                worst1 = max(worst1, abs(v - o))
    assert worst1 <= 1e-6  # single-particle gate before the two-particle run
    worst2 = 0.0
    for q in (0.0, 0.5):
        for y, x in [((0, 2), (1, 3)), ((0, 1), (0, 2))]:
            v = models.tw_transition_probability(y, x, 0.5, q)
            o = models.ctmc_oracle_probability(y, x, 0.5, q)
            worst2 = max(worst2, abs(v - o))
    ok = worst1 <= 1e-6 and worst2 <= 1e-5
    _line(8, "contour transition formula vs CTMC oracle", ok,
          f"one-particle {worst1:.2e}, two-particle {worst2:.2e}")


def test_criterion_9_sampler_statistics():
    b1, b2 = 0.35, 0.7
    w = sixvertex.six_vertex_weights(b1, b2)
    n = 100_000
    # iid single-vertex draws: a 1x1 lattice per seed, conditioned on each
    # nontrivial input state
    counts_up = 0
    counts_right = 0
    for seed in range(n):
        c = sixvertex.sample_lattice(
            w, 1, 1, boundary_left=(0,), boundary_bottom=(1,), seed=seed
        )
        counts_up += int(c.k_out[0, 0] == 1)
        c = sixvertex.sample_lattice(
            w, 1, 1, boundary_left=(1,), boundary_bottom=(0,), seed=seed + n
        )
        counts_right += int(c.j_out[0, 0] == 1)
    dev1 = abs(counts_up / n - b1) / math.sqrt(b1 * (1 - b1) / n)
    dev2 = abs(counts_right / n - b2) / math.sqrt(b2 * (1 - b2) / n)
    a = sixvertex.sample_lattice(
        w, 20, 20, boundary_left=(1,) * 20, boundary_bottom=(0,) * 20, seed=11
    ).to_csv()
    b = sixvertex.sample_lattice(
        w, 20, 20, boundary_left=(1,) * 20, boundary_bottom=(0,) * 20, seed=11
    ).to_csv()
    ok = dev1 <= 4.0 and dev2 <= 4.0 and a == b
    _line(9, "sampler statistics", ok,
          f"vertical z-score {dev1:.2f}, horizontal z-score {dev2:.2f}, "
          f"byte-stable {a == b}")


def test_criterion_10_oscillator_suite():
    worst = 0.0
    for m in range(7):
        for n in range(m):
            norm = math.sqrt(
                oscillator.hermite_overlap(m, m) * oscillator.hermite_overlap(n, n)
            )
            worst = max(worst, abs(oscillator.hermite_overlap(m, n)) / norm)
    e = np.array([[0.0, 1.0], [0.0, 0.0]])
    f = np.array([[0.0, 0.0], [1.0, 0.0]])
    h = np.diag([1.0, -1.0])
    js = max(
        oscillator.js_homomorphism_violation(h, e, 8),
        oscillator.js_homomorphism_violation(h, f, 8),
        oscillator.js_homomorphism_violation(e, f, 8),
    )
    ok = worst <= 1e-6 and js <= 1e-10
    _line(10, "oscillator suite", ok,
          f"orthogonality {worst:.2e}, sl2 commutators {js:.2e}")
