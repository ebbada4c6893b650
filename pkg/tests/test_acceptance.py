"""End-to-end acceptance gate.

Each test covers one numbered acceptance criterion and prints exactly one
PASS/FAIL line so the whole ledger is visible in any pytest run. Stated
runtime budgets are asserted with wall-clock measurements.
"""

import math
import random
import time

import gmpy2
import pytest

import oracles
from igfields import arith, asymptotics, bounds, density, quadfield, tower
from igfields.errors import FeasibilityError


@pytest.fixture(name="report")
def _report_fixture(capsys):
    """One PASS/FAIL ledger line per criterion, visible even without -s."""

    def _report(num, ok, detail):
        tag = "PASS" if ok else "FAIL"
        with capsys.disabled():
            print(f"\nACCEPTANCE {num}: {tag} - {detail}")
        return ok

    return _report


def test_criterion_1_rn_formula_consistency(report):
    start = time.perf_counter()
    mismatches = []
    for n in range(1, 10**4 + 1):
        params = bounds.GSParams(
            ell=2, sizeT_k=n, sizeT_K=2 * n, t0=n, r1=2, r2=0, rho=0,
            delta_ell=1,
        )
        want = 1 + math.floor(bounds.gs_threshold_nf(params))
        if quadfield.rn_formula(n) != want:
            mismatches.append(n)
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed < 1.0
    assert report(
        1, ok,
        f"rn_formula == 1+floor(threshold) for n <= 1e4, {elapsed:.2f}s",
    )


def test_criterion_2_construction_correctness(report):
    start = time.perf_counter()
    bad = []
    for n in range(1, 51):
        res = quadfield.construct_Kn(n)
        d = res.field.d
        factors = res.field.ramified_primes
        # d is odd; its prime support is the odd part of the ramified list
        # (2 appears exactly when d is 3 mod 4 and disc = 4d). Distinct
        # primes multiplying back to |d| certify squarefreeness.
        odd_factors = [f for f in factors if f != 2]
        squarefree = (
            d % 2 == 1
            and (2 in factors) == (d % 4 != 1)
            and math.prod(odd_factors) == abs(d)
            and len(set(factors)) == len(factors)
            and all(gmpy2.is_prime(f) for f in factors)
        )
        splits = all(
            gmpy2.kronecker(res.field.discriminant, p) == 1 for p in res.P
        )
        lo = quadfield.genus_lower_bound(n)
        hi = quadfield.genus_upper_bound(n)
        window = lo <= res.field.genus <= hi
        if not (squarefree and splits and res.gs_satisfied and window):
            bad.append(n)
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 30.0
    assert report(
        2, ok,
        f"n <= 50 squarefree/split/GS/genus-window, {elapsed:.1f}s",
    )


def test_criterion_3_genus_oracle_equivalence(report):
    rng = random.Random(414243)
    primes = [p for p in oracles.trial_division_primes(500)]
    worst = 0.0
    for _ in range(1000):
        k = rng.randint(1, 6)
        chosen = rng.sample(primes, k)
        d = math.prod(chosen) * rng.choice((1, -1))
        if d == 1:
            d = -1
        field = quadfield.QuadField.from_d(d)
        disc = oracles.discriminant_of(d)
        assert disc == field.discriminant
        want = 0.5 * math.log(abs(disc))
        rel = abs(field.genus - want) / want
        worst = max(worst, rel)
    ok = worst < 1e-12
    assert report(3, ok, f"1000 random squarefree d, worst rel err {worst:.2e}")


def test_criterion_4_gs_threshold_regressions(report):
    imag = bounds.GSParams(
        ell=2, sizeT_k=0, sizeT_K=0, t0=0, r1=0, r2=1, rho=1, delta_ell=1,
    )
    ff = bounds.GSParams(
        ell=2, sizeT_k=1, sizeT_K=2, t0=1, r1=0, r2=0, rho=0, delta_ell=1,
    )
    err_nf = abs(bounds.gs_threshold_nf(imag) - (3 + 2 * math.sqrt(2)))
    err_ff = abs(bounds.gs_threshold_ff(ff) - (4 + 2 * math.sqrt(3)))
    ok = err_nf < 1e-12 and err_ff < 1e-12
    assert report(
        4, ok, f"3+2sqrt2 err {err_nf:.1e}, 4+2sqrt3 err {err_ff:.1e}"
    )


def test_criterion_5_asymptotics_desk_scale(report):
    start = time.perf_counter()
    rep = asymptotics.ratio_report("sn", [10**4, 10**5, 10**6])
    ratios = [s.ratio for s in rep.samples]
    window = 0.9 < ratios[-1] < 1.4
    devs = [abs(r - 1) for r in ratios]
    shrinking = devs[0] > devs[1] > devs[2]
    eps2 = [asymptotics.epsilon_n(n, "nf") * (3 * n / 4) for n in (10**2, 10**3)]
    n = 10**3
    eps1 = asymptotics.epsilon_n(n, "grh") * (3 * math.sqrt(n * math.log(n)) / 8)
    bands = all(0.5 < v < 1.5 for v in eps2 + [eps1])
    elapsed = time.perf_counter() - start
    ok = window and shrinking and bands and elapsed < 60.0
    assert report(
        5, ok,
        f"sn ratio {ratios[-1]:.3f}, eps bands "
        f"{eps2[0]:.3f}/{eps2[1]:.3f}/{eps1:.3f}, {elapsed:.1f}s",
    )


def test_criterion_6_inequality_suite(report):
    bad = []
    for n in range(1, 101):
        res = quadfield.construct_Kn(n)
        tw = tower.simulate_classfield_tower(res.field, res.P, depth=3)
        v = tower.phi_limit(tw)
        for variant in ("nf", "grh"):
            delta = bounds.basic_inequality(v, variant).deficiency
            if not 0 <= delta <= 1:
                bad.append((n, variant))
        got = bounds.ihara_split_bound(v, list(res.P), base_degree=2,
                                       variant="nf")
        if not got.holds:
            bad.append((n, "ihara"))
    ff_vec = tower.PhiVector(
        entries={4: 1.0}, phi_infinity=0.0, variant="FF", ff_base=4
    )
    ff_delta = bounds.basic_inequality(ff_vec, "ff").deficiency
    ok = not bad and abs(ff_delta) < 1e-12
    assert report(
        6, ok,
        f"towers n <= 100 deficiencies in [0,1] + ihara, FF delta "
        f"{ff_delta:.1e}",
    )


def _random_dominated_pair(rng, p):
    depth = rng.randint(1, 5)
    v_counts = [rng.uniform(0, 1) for _ in range(depth)]
    u_counts = list(v_counts)
    for i in range(depth - 1):
        moved = rng.uniform(0, u_counts[i])
        u_counts[i] -= moved
        u_counts[i + 1] += moved * (i + 1) / (i + 2)

    def vec(counts):
        entries = {}
        total = 0.0
        for k, c in enumerate(counts, start=1):
            if c:
                entries[p**k] = c
                total += k * c
        phi_inf = total + 1.0
        entries["R"] = phi_inf
        return tower.PhiVector(entries=entries, phi_infinity=phi_inf)

    # v dominates u: mass only ever moved toward higher exponents.
    return vec(v_counts), vec(u_counts)


def test_criterion_7_monotonicity_lemmas(report):
    rng = random.Random(20260814)
    dominance_failures = 0
    for _ in range(10**4):
        p = rng.choice((2, 3, 5))
        v, u = _random_dominated_pair(rng, p)
        if not bounds.weighted_dominance(v, u, p, lambda k: 1.0 / (k + 1)):
            dominance_failures += 1
    arch_failures = 0
    for _ in range(10**4):
        variant = rng.choice(("nf", "grh"))
        c = bounds.arch_coefficients(variant)
        m = rng.randint(1, 6)
        r1 = rng.randint(0, 4)
        r2 = rng.randint(0, 4)
        rows = []
        for _ in range(r1):
            vc = rng.randint(0, m // 2)
            rows.append((m - 2 * vc, vc))
        if not bounds.archimedean_monotonicity(
            (r1, r2), rows, m, (c.a_R, c.a_C)
        ):
            arch_failures += 1
    ok = dominance_failures == 0 and arch_failures == 0
    assert report(
        7, ok,
        f"1e4 dominance pairs ({dominance_failures} fail), "
        f"1e4 arch decompositions ({arch_failures} fail)",
    )


def test_criterion_8_deficiency_coherence_grh_weights(report):
    # The sqrt-weight analog reaches its cutoff within tiny norms, so the
    # alpha <= delta comparison is desk-checkable in this variant.
    bad = []
    for n in (3, 5, 10):
        res = quadfield.construct_Kn(n)
        got = bounds.deficiency_lower_bound(
            res.field, S=list(res.field.ramified_primes), variant="grh"
        )
        tw = tower.simulate_classfield_tower(res.field, res.P, depth=3)
        delta = bounds.basic_inequality(tower.phi_limit(tw), "grh").deficiency
        if not 0 < got.alpha <= delta:
            bad.append((n, got.alpha, delta))
    ok = not bad
    assert report(8, ok, f"grh weights: alpha <= deficiency for n in 3,5,10")


def test_criterion_8_deficiency_coherence_nf_weights(report):
    # Documented infeasibility: with linear weights the greedy place sum
    # grows like log(max_norm) + O(1), but the cutoff is genus - a_C, which
    # is ~50 already at n = 3. Reaching it needs prime norms around e^50,
    # far beyond any desk-scale enumeration (cap 1e7 reaches only ~17).
    failures = []
    for n in (3, 5, 10):
        res = quadfield.construct_Kn(n)
        try:
            bounds.deficiency_lower_bound(
                res.field, S=list(res.field.ramified_primes), variant="nf"
            )
        except FeasibilityError as exc:
            failures.append(f"n={n}: {exc}")
    if failures:
        report(8, False, "nf weights infeasible at K_n genus scale")
        pytest.fail(
            "nf-weight deficiency_lower_bound cannot terminate on K_n: "
            + "; ".join(failures)
        )
    assert report(8, True, "nf weights: alpha computed for n in 3,5,10")


def test_criterion_9_chebotarev_suite(report):
    bad = []
    for name, G in density.catalog().items():
        for H in density.all_subgroups(G):
            rep = density.split_degree_one_density(G, H)
            if not rep.lower_bound <= rep.value <= rep.upper_bound:
                bad.append((name, "bracket"))
            if (rep.value == rep.lower_bound) != H.is_normal():
                bad.append((name, "normality"))
    s3 = density.catalog()["s3"]
    h = density.subgroup_generated(s3, ["(12)"])
    exact = density.split_degree_one_density(s3, h).value
    from fractions import Fraction

    ok = not bad and exact == Fraction(2, 3)
    assert report(
        9, ok, f"all catalog subgroups bracketed, s3/<(12)> = {exact}"
    )


def test_criterion_10_empirical_densities(report):
    start = time.perf_counter()
    emp = density.empirical_split_density(105, 10**6)
    emp_ok = abs(emp.fraction - 0.5) <= 0.02
    spreads = {}
    for q, a in ((3, 1), (3, 2), (5, 1), (5, 3)):
        devs = [
            density.norton_deviation(q, a, 10**k).deviation for k in range(3, 8)
        ]
        spreads[(q, a)] = max(devs) - min(devs)
    norton_ok = all(s <= 1.0 for s in spreads.values())
    elapsed = time.perf_counter() - start
    ok = emp_ok and norton_ok and elapsed < 120.0
    assert report(
        10, ok,
        f"|emp-1/2| = {abs(emp.fraction - 0.5):.4f}, max norton spread "
        f"{max(spreads.values()):.3f}, {elapsed:.1f}s",
    )
