"""Acceptance suite: one test per criterion, at full scale.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines as they complete.  Total runtime is dominated by the 20,000-trial
census experiment (criterion 2); expect roughly half an hour on one core.
"""

import itertools
import math
import sys

import numpy as np

from flaglab import (ALMOST_COLLAPSED, COLLAPSED_BELOW_D, STUCK,
                     ExperimentConfig, RngSpec, SimplicialComplex,
                     almost_d_collapse, betti_numbers, boundary_matrix,
                     brute_force_density, build_graph, clique_complex,
                     counts_to_histogram, density_bound_audit,
                     erdos_renyi_cycle_probability, essential_density,
                     homology_with_torsion, is_d_collapsible_exact,
                     poisson_gof, reference_constants, replay_steps,
                     run_experiment, sample_gnp, smith_normal_form,
                     torsion_search)
from flaglab.experiments import result_to_csv, result_to_json
from conftest import RP2_FACES, random_graph
from test_homology import reference_snf_divisors


def _report(num, ok, detail):
    line = f"ACCEPTANCE {num:>2} {'PASS' if ok else 'FAIL'}: {detail}"
    print(line, file=sys.stderr)
    return line


def test_criterion_01_crosspolytope_uniqueness():
    """Exhaustively over 6-vertex graphs (and all smaller ones), the only
    non-2-collapsible flag complex is the octahedron graph's."""
    def is_octahedron_graph(g):
        if g.n != 6 or g.m != 12:
            return False
        non_edges = [(u, v) for u in range(6) for v in range(u + 1, 6)
                     if not g.has_edge(u, v)]
        return (len(non_edges) == 3
                and len({v for e in non_edges for v in e}) == 6)

    mismatches = []
    pairs6 = list(itertools.combinations(range(6), 2))
    for mask in range(1 << 15):
        g = build_graph(6, [pairs6[i] for i in range(15) if mask >> i & 1])
        verdict = is_d_collapsible_exact(clique_complex(g, 5), 2)
        expected = "no" if is_octahedron_graph(g) else "yes"
        if verdict != expected:
            mismatches.append((6, mask, verdict, expected))
    for n in range(1, 6):
        pairs = list(itertools.combinations(range(n), 2))
        for mask in range(1 << len(pairs)):
            g = build_graph(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])
            verdict = is_d_collapsible_exact(clique_complex(g, max(n - 1, 0)), 2)
            if verdict != "yes":
                mismatches.append((n, mask, verdict, "yes"))
    detail = f"34,891 labeled graphs on <=6 vertices, {len(mismatches)} mismatches"
    _report(1, not mismatches, detail)
    assert not mismatches


def test_criterion_02_poisson_census():
    """20,000 census trials at d=2, n=1000, c=1: the embedded-copy count is
    Poisson with the exact finite-n mean."""
    n, trials = 1000, 20000
    cfg = ExperimentConfig(n=n, d=2, c=1.0, trials=trials, master_seed=20260809,
                           fvector=False, census=True)
    res = run_experiment(cfg)
    counts = [r.cp_count for r in res.records]
    assert len(counts) == trials and all(c_ is not None for c_ in counts)
    target = reference_constants(2).finite_n_mean(n, 1.0)
    mean = float(np.mean(counts))
    sd = float(np.std(counts, ddof=1))
    se = sd / math.sqrt(trials)
    gof = poisson_gof(counts_to_histogram(counts), target)
    mean_ok = abs(mean - target) <= 3 * se
    gof_ok = gof.p_value > 0.01
    detail = (f"mean {mean:.5f} vs {target:.5f} (3se={3 * se:.5f}), "
              f"chi2 p={gof.p_value:.3f}, tv={gof.tv_distance:.5f}")
    _report(2, mean_ok and gof_ok, detail)
    assert mean_ok, detail
    assert gof_ok, detail


def test_criterion_03_census_betti_equality():
    """Across the (n, c) grid, every almost-collapsed trial has
    beta_2(Q) equal to the surviving-copy count; stuck trials stay
    below 5% at c <= 1.0."""
    plan = [(200, 0.8, 450), (200, 1.0, 450), (200, 1.5, 450),
            (500, 0.8, 250), (500, 1.0, 250), (500, 1.5, 250)]
    mismatches = 0
    stuck_low_c = 0
    trials_low_c = 0
    total = 0
    summary = []
    for idx, (n, c, trials) in enumerate(plan):
        cfg = ExperimentConfig(n=n, d=2, c=c, trials=trials,
                               master_seed=3000 + idx, collapse=True,
                               betti_rational=True)
        res = run_experiment(cfg)
        assert res.aggregates["failed"] == 0
        total += trials
        stuck = sum(1 for r in res.records if r.collapse_status == STUCK)
        summary.append(f"n={n} c={c}: stuck {stuck}/{trials}")
        if c <= 1.0:
            stuck_low_c += stuck
            trials_low_c += trials
        for r in res.records:
            if r.collapse_status == ALMOST_COLLAPSED and r.betti_d_q != r.surviving:
                mismatches += 1
    stuck_frac = stuck_low_c / trials_low_c
    detail = (f"{total} trials; equality mismatches {mismatches}; "
              f"stuck at c<=1.0: {stuck_frac:.3%} ({'; '.join(summary)})")
    ok = mismatches == 0 and stuck_frac < 0.05
    _report(3, ok, detail)
    assert mismatches == 0
    assert stuck_frac < 0.05, detail


def test_criterion_04_homotopy_invariance():
    """1,000 random complexes: GF(2) and GF(3) Betti numbers agree before
    and after replaying the collapse sequence."""
    rng = np.random.default_rng(404)
    failures = 0
    for t in range(1000):
        n = int(rng.integers(20, 201))
        if t % 3 == 2:
            p = float(rng.uniform(1.5, 3.0)) / n       # sparse, mostly forests
        else:
            p = float(rng.uniform(0.6, 1.5)) / math.sqrt(n)
        x = clique_complex(sample_gnp(n, p, RngSpec(9000, t)), 4)
        out = almost_d_collapse(x, 2, seed=t)
        residual = replay_steps(x, out.steps)
        if residual != out.residual:
            failures += 1
            continue
        degrees = list(range(4))
        for coeff in (2, 3):
            if betti_numbers(x, coeff, degrees=degrees) != \
               betti_numbers(residual, coeff, degrees=degrees):
                failures += 1
                break
    detail = f"1000 complexes, {failures} invariance failures"
    _report(4, failures == 0, detail)
    assert failures == 0


def test_criterion_05_erdos_renyi_calibration():
    """d=1 cycle probability at n=10^4, c=0.5 matches the closed form
    within +-0.01."""
    cfg = ExperimentConfig(n=10000, d=1, c=0.5, trials=10000,
                           master_seed=555, fvector=False, cycle=True)
    res = run_experiment(cfg)
    frac = res.aggregates["frac_with_cycle"]
    target = erdos_renyi_cycle_probability(0.5)
    ok = abs(frac - target) <= 0.01
    detail = f"empirical {frac:.4f} vs formula {target:.4f}"
    _report(5, ok, detail)
    assert ok, detail


def test_criterion_06_density_filtered_graphs_collapse():
    """1,000 random connected graphs with essential density below 25/12:
    the pipeline succeeds on every one."""
    rng = np.random.default_rng(606)
    pairs_cache = {n: list(itertools.combinations(range(n), 2)) for n in range(3, 15)}
    done = 0
    failures = 0
    attempts = 0
    while done < 1000:
        attempts += 1
        assert attempts < 60000, "sampling the filtered family stalled"
        n = int(rng.integers(3, 15))
        pairs = pairs_cache[n]
        m = int(rng.integers(n - 1, min(2 * n + 2, len(pairs)) + 1))
        idx = rng.permutation(len(pairs))[:m]
        g = build_graph(n, [pairs[i] for i in idx])
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for w in g.neighbor_set(u):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != n or not density_bound_audit(g, 2):
            continue
        done += 1
        out = almost_d_collapse(clique_complex(g, 4), 2, seed=done)
        if out.status not in (ALMOST_COLLAPSED, COLLAPSED_BELOW_D):
            failures += 1
    detail = f"1000 graphs below 25/12, {failures} pipeline failures"
    _report(6, failures == 0, detail)
    assert failures == 0


def test_criterion_07_density_oracle_equivalence():
    """Flow-based essential density equals brute-force subset maximization
    on 500 random graphs with <= 12 vertices.  Exact rational equality."""
    rng = np.random.default_rng(707)
    mismatches = 0
    done = 0
    while done < 500:
        n = int(rng.integers(2, 13))
        g = random_graph(rng, n, float(rng.uniform(0.1, 0.95)))
        if g.m == 0:
            continue
        done += 1
        rho_brute, _ = brute_force_density(g)
        if essential_density(g).rho != rho_brute:
            mismatches += 1
    detail = f"500 graphs, {mismatches} disagreements"
    _report(7, mismatches == 0, detail)
    assert mismatches == 0


def test_criterion_08_torsion_detector():
    """The 6-vertex projective plane yields H_1 = Z/2 via Smith normal form
    (cross-checked by an independent reduction) and planted copies are
    detected in 100% of trials."""
    rp2 = SimplicialComplex.from_faces(6, RP2_FACES, 3)
    bm = boundary_matrix(rp2, 2)
    snf = smith_normal_form(bm)
    ref = reference_snf_divisors(bm.toarray().tolist())
    assert snf.divisors == ref == (1,) * 9 + (2,)
    rank, torsion = homology_with_torsion(rp2, 1)
    assert (rank, torsion) == (0, (2,))
    cfg = ExperimentConfig(n=30, d=2, c=1.0, trials=60, master_seed=808)
    rep = torsion_search(cfg, 1, plant=rp2)
    detected = sum(1 for _, ds in rep.per_trial if any(dv % 2 == 0 for dv in ds))
    ok = detected == 60
    detail = f"H1(RP2)=Z/2 certified; planted recall {detected}/60"
    _report(8, ok, detail)
    assert ok, detail


def test_criterion_09_face_degree_bound():
    """d=2, n=4000, c=1, 1000 trials: trials whose max vertex degree exceeds
    1.2*sqrt(4000) must be under 1%.

    Known to be unattainable at this n: the binomial maximum over 4000
    vertices concentrates near 1.5*sqrt(n), so every trial exceeds the
    asymptotic bound.  The criterion is asserted as specified; see the
    decisions ledger for the analysis.
    """
    n, trials = 4000, 1000
    cfg = ExperimentConfig(n=n, d=2, c=1.0, trials=trials, master_seed=909,
                           fvector=False)
    res = run_experiment(cfg)
    threshold = 1.2 * math.sqrt(n)
    exceed = sum(1 for r in res.records if r.max_face_degrees[0] > threshold)
    frac = exceed / trials
    maxima = [r.max_face_degrees[0] for r in res.records]
    detail = (f"exceed fraction {frac:.3f} vs required <0.01 "
              f"(threshold {threshold:.1f}; observed max degree "
              f"mean {np.mean(maxima):.1f}, min {min(maxima)}, max {max(maxima)})")
    _report(9, frac < 0.01, detail)
    assert frac < 0.01, detail


def test_criterion_10_worker_determinism():
    """Rerunning with a different worker count produces byte-identical
    result files."""
    kw = dict(n=150, d=2, c=1.0, trials=40, master_seed=1010, census=True,
              collapse=True, betti_gf2=True, betti_rational=True)
    runs = [run_experiment(ExperimentConfig(workers=w, **kw)) for w in (1, 3)]
    csvs = [result_to_csv(r) for r in runs]
    jsons = [result_to_json(r) for r in runs]
    ok = csvs[0] == csvs[1] and jsons[0] == jsons[1]
    detail = f"workers 1 vs 3: csv identical {csvs[0] == csvs[1]}, json identical {jsons[0] == jsons[1]}"
    _report(10, ok, detail)
    assert ok, detail
