"""Acceptance criteria 1 to 13, one test each, at the stated tolerances.

Each test prints a single pass/fail line; the terminal summary repeats them.
"""

import numpy as np
import pytest
from click.testing import CliRunner

from g2cert import registry
from g2cert.classifier import enumerate_symmetries, verify_generators
from g2cert.cli import classify_report, main
from g2cert.exterior import e, form_norm, hodge, random_form
from g2cert.g2struct import G2Structure, NotSubalgebra, metric_from_phi, ricci
from g2cert.liealg import LieAlgebra, heisenberg_plus_abelian
from g2cert.quadruple import (
    OMEGA7, T7, TAU, act_g, act_u0, check_main_theorem, reference_phi, so33_residual, theta, theta_on_form,
    u0_from_angles,
)

from conftest import record_criterion
from theta_displays import DISPLAYED, theta_A_rt

TOL = 1e-9
E7 = np.eye(7)[6]


def structures():
    return {n: G2Structure(registry.load(n).algebra) for n in registry.NAMES}


def test_criterion_01_registry_integrity():
    worst_jac = worst_cross = 0.0
    for ent in registry.load_all():
        worst_jac = max(worst_jac, ent.algebra.jacobi_residual())
        worst_cross = max(worst_cross, *ent.cross_check.values())
    ok = len(registry.list_entries()) == 6 and worst_jac < 1e-12 and worst_cross <= 1e-12
    record_criterion(1, ok, f"6 entries, jacobi {worst_jac:.1e}, cross-check {worst_cross:.1e}")
    assert ok


def test_criterion_02_torsion():
    tau = e(1, 2) - e(5, 6)
    worst_tau = worst_id = 0.0
    for S in structures().values():
        worst_tau = max(worst_tau, form_norm(S.torsion - tau))
        worst_id = max(worst_id, S.torsion_identity_residual())
    ok = worst_tau < TOL and worst_id < TOL
    record_criterion(2, ok, f"tau = e12 - e56 residual {worst_tau:.1e}, d*phi = tau^phi residual {worst_id:.1e}")
    assert ok


def test_criterion_03_erp():
    worst = max(S.erp_residual() for S in structures().values())
    rng = np.random.default_rng(2024)
    worst_rt = 0.0
    for r, t in rng.uniform(-10, 10, size=(20, 2)):
        S = G2Structure(registry.load("mu_rt", {"r": float(r), "t": float(t)}).algebra)
        worst_rt = max(worst_rt, S.erp_residual())
    ok = worst < TOL and worst_rt < TOL
    record_criterion(3, ok, f"ERP residual {worst:.1e} on entries, {worst_rt:.1e} on 20 random mu_rt")
    assert ok


def test_criterion_04_pinching():
    ok_all, worst = True, 0.0
    for S in structures().values():
        scal = S.curvature.scalar
        gap = abs(S.pinching_gap())
        worst = max(worst, gap / scal ** 2)
        ok_all &= gap < TOL * scal ** 2
    control = ricci(heisenberg_plus_abelian())
    control_gap = control.scalar ** 2 - 3 * control.ricci_norm2
    ok = ok_all and abs(control_gap) > 1e-6
    record_criterion(4, ok, f"relative gap {worst:.1e}; Heisenberg control gap {control_gap:.3g}")
    assert ok


def test_criterion_05_invariants_table():
    mismatches = []
    for ent in registry.load_all():
        L, meta = ent.algebra, ent.metadata
        b, _ = L.betti()
        nil = L.nilradical()
        if b[1:7] != [int(x) for x in meta["betti"]]:
            mismatches.append(f"{ent.name} betti {b[1:7]} vs {meta['betti']}")
        if nil.dim != meta["dim_nilradical"]:
            mismatches.append(f"{ent.name} nilradical")
        if L.nilpotency_degree(nil) != meta["nilpotency_degree"]:
            mismatches.append(f"{ent.name} nilpotency")
        if ent.name == "mu_J":
            if b != b[::-1]:
                mismatches.append("mu_J duality")
        elif b[7] != 0:
            mismatches.append(f"{ent.name} b7")
    ok = not mismatches
    record_criterion(5, ok, "all rows match" if ok else "; ".join(mismatches) + " (see decisions ledger)")
    assert ok


def test_criterion_06_exactness():
    expected = {"mu_B": 1.5, "mu_M1": np.sqrt(30) / 3, "mu_M2": 3.0, "mu_M3": np.sqrt(6), "mu_rt": 1.5}
    worst = 0.0
    coeff_ok = True
    for name, k in expected.items():
        ent = registry.load(name)
        coeff_ok &= bool(np.isclose(ent.inv_trace_A1, k, rtol=0, atol=1e-14))
        worst = max(worst, G2Structure(ent.algebra).exactness_residual(ent.inv_trace_A1))
    cert = G2Structure(registry.load("mu_J").algebra).non_exactness_certificate()
    ok = coeff_ok and worst < TOL and cert.not_exact and cert.argument_holds and cert.pairs == 21
    record_criterion(6, ok, f"primitive residual {worst:.1e}; mu_J not exact (distance {cert.distance:.3f}, "
                            f"max <de^ij, e347> = {cert.max_pairing_e347:.1e} over {cert.pairs} pairs)")
    assert ok


def test_criterion_07_su3():
    S = structures()
    res = {n: s.su3_restrict(E7) for n, s in S.items()}
    half_flat = max(max(r.d_omega2, r.d_rho) for r in res.values())
    coupled = {n for n, r in res.items() if r.coupled(TOL)}
    try:
        declared = S["mu_J"].su3_restrict(np.array([1, -1, 0, 0, 0, 0, 1]) / np.sqrt(3))
        shf, note = declared.symplectic_half_flat(TOL), "declared normal"
    except NotSubalgebra as exc:
        shf, note = False, f"declared normal (e1-e2+e7)/sqrt3: {exc}"
    alt = S["mu_J"].su3_restrict(np.array([0, 0, 0, np.sqrt(2), 0, 0, -1]) / np.sqrt(3))
    # mu_rt is mu_B at its default parameters, so it belongs to the coupled set
    ok = half_flat < TOL and coupled == {"mu_B", "mu_rt"} and shf
    record_criterion(7, ok, f"half-flat {half_flat:.1e}; coupled {sorted(coupled)}; mu_J {note}; "
                            f"(sqrt2 e4 - e7)/sqrt3 symplectic half-flat {alt.symplectic_half_flat(TOL)}")
    assert ok


def test_criterion_08_solitons():
    ok, cs, lams = True, [], []
    for s in structures().values():
        rs, ls = s.ricci_soliton(), s.laplacian_soliton()
        ok &= rs.success and rs.constant < 0 and ls.success and abs(ls.constant) < 1e-8
        cs.append(rs.constant)
        lams.append(abs(ls.constant))
    record_criterion(8, ok, f"Ricci c in [{min(cs):.6f}, {max(cs):.6f}]; max |lambda| {max(lams):.1e}")
    assert ok


def test_criterion_09_theta():
    exact = np.array_equal(theta_on_form(T7, TAU), OMEGA7 / 3)
    worst = max(np.max(np.abs(theta(getattr(registry.load(n).quadruple, k)) - M)) for (n, k), M in DISPLAYED.items())
    rng = np.random.default_rng(9)
    for r, t in rng.uniform(-5, 5, size=(5, 2)):
        q = registry.load("mu_rt", {"r": float(r), "t": float(t)}).quadruple
        worst = max(worst, np.max(np.abs(theta(q.A) - theta_A_rt(r, t))))
    so33 = 0.0
    for _ in range(1000):
        E = rng.normal(size=(4, 4))
        so33 = max(so33, so33_residual(theta(E - np.trace(E) / 4 * np.eye(4))))
    ok = exact and worst < 1e-12 and so33 < 1e-12 and len(DISPLAYED) == 12
    record_criterion(9, ok, f"theta(T7)tau exact {exact}; 13 displays max error {worst:.1e}; so(3,3) {so33:.1e}")
    assert ok


def test_criterion_10_main_theorem():
    rng = np.random.default_rng(10)
    worst = 0.0
    ok = True
    for ent in registry.load_all():
        q = ent.quadruple
        good, res = check_main_theorem(q, TOL)
        ok &= good
        for i in range(100):
            q = act_g(q) if rng.random() < 0.3 else act_u0(q, *u0_from_angles(*rng.uniform(0, 2 * np.pi, 2)))
        good, res2 = check_main_theorem(q, TOL)
        ok &= good
        worst = max(worst, *res.values(), *res2.values())
    record_criterion(10, ok, f"conditions hold on all entries and after 100 random actions, max residual {worst:.1e}")
    assert ok


@pytest.mark.parametrize("case", [4, 5, 6])
def test_criterion_11_classification(case):
    rep = classify_report(case, "symmetric", seeds=200, rng_seed=0, min_seeds=10)
    found = {r.check: r.value for r in rep.records}
    summary = f"case {case}: classes {found['classes']} with seeds {found['seeds_per_class']}"
    test_criterion_11_classification.results[case] = (rep.passed, summary)
    if len(test_criterion_11_classification.results) == 3:
        res = test_criterion_11_classification.results
        record_criterion(11, all(v[0] for v in res.values()), "; ".join(res[c][1] for c in sorted(res)))
    assert rep.passed, summary


test_criterion_11_classification.results = {}


def test_criterion_12_symmetries():
    parts, ok = [], True
    declared_ok = True
    for ent in registry.load_all():
        gens = [(g["name"], registry.generator(g["name"]), g["g2"]) for g in ent.metadata.get("generators") or []]
        declared_ok &= all(c.passed for c in verify_generators(ent.algebra, gens))
    ok &= declared_ok
    skew = [registry.load(n).algebra.skew_derivations_dim() for n in registry.NAMES]
    ok &= skew == [2, 0, 0, 0, 0, 2]
    targets = {"mu_M1": (2, 4), "mu_M2": (2, 8), "mu_M3": (4, 16), "mu_J": (24, 384)}
    for name, (og2, oo7) in targets.items():
        L = registry.load(name).algebra
        G = enumerate_symmetries(L, "g2", n_seeds=60)
        O = enumerate_symmetries(L, "o7", n_seeds=60)
        ok &= G.order == og2 and O.order == oo7
        parts.append(f"{name} {G.order}/{O.order}")
        if name == "mu_J":
            ok &= G.order_histogram.get(2) == 1 and 12 not in G.order_histogram
        if name == "mu_M3":
            ok &= G.order_histogram.get(4) == 2  # cyclic of order 4
    record_criterion(12, ok, f"generators verified {declared_ok}; skew dims {skew}; orders (G2/O7) "
                             + ", ".join(parts))
    assert ok


def test_criterion_13_properties():
    rng = np.random.default_rng(13)
    # d^2 = 0 iff Jacobi
    agree = True
    for i in range(40):
        c = rng.normal(size=(7, 7, 7))
        L = LieAlgebra(c - c.transpose(1, 0, 2)) if i % 2 else \
            registry.load(registry.NAMES[i % 6]).algebra.conjugate(rng.normal(size=(7, 7)) + 3 * np.eye(7))
        agree &= (L.jacobi_residual() < 1e-9) == (L.d_squared_norm() < 1e-9)
    # ** = id in dimension 7
    star = max(form_norm(hodge(hodge(a)) - a) for a in (random_form(rng, 7, k) for k in range(8)))
    # theta is a homomorphism
    hom = 0.0
    for _ in range(50):
        E, F = rng.normal(size=(2, 4, 4))
        hom = max(hom, np.max(np.abs(theta(E @ F - F @ E) - (theta(E) @ theta(F) - theta(F) @ theta(E)))))
    # metric scaling law
    scale = max(np.max(np.abs(metric_from_phi(reference_phi() * c)[0] - c ** (2 / 3) * np.eye(7)))
                for c in (0.3, 2.0, 27.0))
    # byte determinism of the CLI under a fixed seed
    runner = CliRunner()
    args = ["classify", "5", "--seeds", "10", "--min-seeds", "1", "--json"]
    outs = [runner.invoke(main, args).stdout for _ in range(2)]
    outs += [runner.invoke(main, ["verify", "mu_M3", "--json"]).stdout for _ in range(2)]
    det = outs[0] == outs[1] and outs[2] == outs[3]
    ok = agree and star < 1e-12 and hom < 1e-10 and scale < 1e-12 and det
    record_criterion(13, ok, f"d^2/Jacobi agree {agree}; **-id {star:.1e}; theta hom {hom:.1e}; "
                             f"scaling {scale:.1e}; byte-identical {det}")
    assert ok

