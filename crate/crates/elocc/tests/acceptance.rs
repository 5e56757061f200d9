//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Reference tables are the published interception tables; `N` means no
//! interception. Cell values compare through a dual rule: either the
//! 0.1-scan display value matches the reference notch, or a refined crossing
//! lies within half a notch of it.

use elocc::*;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

const TRUNC: f64 = DEFAULT_TRUNC_TOL;

fn report(id: u32, name: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("ACCEPTANCE {id} ({name}): PASS");
    } else {
        println!("ACCEPTANCE {id} ({name}): FAIL");
        for f in &failures {
            println!("    - {f}");
        }
    }
    assert!(failures.is_empty(), "criterion {id} failed: {failures:?}");
}

fn parse_ref_table(text: &str) -> Vec<Vec<Option<f64>>> {
    text.trim()
        .lines()
        .map(|l| {
            l.split_whitespace()
                .map(|c| if c == "N" { None } else { Some(c.parse().unwrap()) })
                .collect()
        })
        .collect()
}

fn value_matches(crossings: &[f64], reference: f64) -> bool {
    if matches!(paper_rounded(crossings), Some(d) if (d - reference).abs() < 1e-9) {
        return true;
    }
    crossings.iter().any(|c| (c - reference).abs() <= 0.0501)
}

/// Compare in paper-display space: the reference tables come from a 0.1-step
/// α scan, so a cell counts as crossing when that scan would have seen it.
fn check_table(
    table: &InterceptionTable,
    reference: &[Vec<Option<f64>>],
    label: &str,
    failures: &mut Vec<String>,
) {
    let n = table.size();
    assert_eq!(reference.len(), n, "reference table shape");
    for i in 0..n {
        for j in (i + 1)..n {
            let crossings = table.cell_crossings(i, j);
            let display = table.paper_cell(i, j);
            match reference[i][j] {
                None => {
                    if display.is_some() {
                        failures.push(format!(
                            "{label} ({}, {}): crossings {crossings:?} (display {display:?}) where reference has N",
                            table.labels()[i],
                            table.labels()[j]
                        ));
                    }
                }
                Some(want) => {
                    if display.is_none() {
                        failures.push(format!(
                            "{label} ({}, {}): no visible interception (raw {crossings:?}), reference has {want}",
                            table.labels()[i],
                            table.labels()[j]
                        ));
                    } else if !value_matches(crossings, want) {
                        failures.push(format!(
                            "{label} ({}, {}): crossings {crossings:?} (display {display:?}) vs reference {want}",
                            table.labels()[i],
                            table.labels()[j]
                        ));
                    }
                }
            }
        }
    }
}

fn ising_sweep(from: f64, to: f64, step: f64, n: usize) -> SweepResult {
    let model = ModelSpec::parse("ising").unwrap();
    let part = half_chain(n).unwrap();
    sweep(&model, "g", (from, to, step), n, &part, false, TRUNC).unwrap()
}

// --- criterion 1 -----------------------------------------------------------

#[test]
fn criterion_1_catalyst_demo() {
    let mut failures = Vec::new();
    let p = normalize_descending(&[0.4, 0.4, 0.1, 0.1], 1e-12).unwrap();
    let q = normalize_descending(&[0.5, 0.25, 0.25], 1e-12).unwrap();
    let c = normalize_descending(&[0.6, 0.4], 1e-12).unwrap();

    if locc_convertible(&p, &q) {
        failures.push("p -> q should fail by LOCC alone".into());
    }
    if locc_convertible(&q, &p) {
        failures.push("q -> p should fail by LOCC alone".into());
    }
    if !verify_catalyst(&p, &q, &c) {
        failures.push("catalyst (0.6, 0.4) should enable p -> q".into());
    }

    let lambda = tensor_product(&p, &c);
    let lambda_want = [0.24, 0.24, 0.16, 0.16, 0.06, 0.06, 0.04, 0.04];
    let lambda_prime = tensor_product(&q, &c);
    let lambda_prime_want = [0.30, 0.20, 0.15, 0.15, 0.10, 0.10];
    for (name, got, want) in [
        ("Lambda", &lambda, &lambda_want[..]),
        ("Lambda'", &lambda_prime, &lambda_prime_want[..]),
    ] {
        if got.len() != want.len()
            || got
                .coeffs()
                .iter()
                .zip(want)
                .any(|(g, w)| (g - w).abs() > 1e-12)
        {
            failures.push(format!("{name} spectrum {:?} != {want:?}", got.coeffs()));
        }
    }
    report(1, "catalyst demo", failures);
}

// --- criterion 2 -----------------------------------------------------------

const TABLE_II: &str = "
N 0.6 0.5 0.5 0.5 0.4 0.4 0.3 0.3 0.2 N
0.6 N 0.5 0.5 0.4 0.4 0.3 0.3 0.2 N N
0.5 0.5 N 0.4 0.4 0.3 0.3 0.2 N N N
0.5 0.5 0.4 N 0.3 0.3 0.2 N N N N
0.5 0.4 0.4 0.3 N 0.2 N N N N N
0.4 0.4 0.3 0.3 0.2 N N N N N N
0.4 0.3 0.3 0.2 N N N N N N N
0.3 0.3 0.2 N N N N N N N N
0.3 0.2 N N N N N N N N N
0.2 N N N N N N N N N N
N N N N N N N N N N N
";

#[test]
fn criterion_2_ising_interception_table() {
    let mut failures = Vec::new();
    let s = ising_sweep(0.94, 1.04, 0.01, 10);
    let table = interception_table(&s, &AlphaGrid::default());
    check_table(&table, &parse_ref_table(TABLE_II), "Table II", &mut failures);
    report(2, "Ising N=10 interception table", failures);
}

// --- criterion 3 -----------------------------------------------------------

#[test]
fn criterion_3_refined_ising_brackets() {
    let mut failures = Vec::new();
    let model = ModelSpec::parse("ising").unwrap();
    let part = half_chain(10).unwrap();
    let grid = AlphaGrid::default();

    let expect = |got: &std::result::Result<Bracket, Error>,
                  want: (f64, f64),
                  step: f64,
                  failures: &mut Vec<String>| match got {
        Ok(b) => {
            if (b.lower - want.0).abs() > 1e-9 || (b.upper - want.1).abs() > 1e-9 {
                failures.push(format!(
                    "step {step}: bracket [{}, {}], expected [{}, {}]",
                    b.lower, b.upper, want.0, want.1
                ));
            }
        }
        Err(e) => failures.push(format!("step {step}: locate failed: {e}")),
    };

    let coarse = locate_boundary(&model, "g", (0.94, 1.04), 10, &part, 0.001, &grid, TRUNC);
    expect(&coarse, (0.987, 0.989), 0.001, &mut failures);

    let fine = locate_boundary(&model, "g", (0.94, 1.04), 10, &part, 0.0001, &grid, TRUNC);
    expect(&fine, (0.9883, 0.9885), 0.0001, &mut failures);
    if let Ok(b) = &fine {
        println!("    step 0.0001 bracket: [{}, {}]", b.lower, b.upper);
    }
    report(3, "refined Ising brackets", failures);
}

// --- criterion 4 -----------------------------------------------------------

#[test]
fn criterion_4_finite_size_scaling() {
    let mut failures = Vec::new();
    let model = ModelSpec::parse("ising").unwrap();
    let grid = AlphaGrid::default();

    // Round-trip fixture on the published fit constants.
    let (a0, b0, c0) = (-9.149, 1.2522, 0.9940);
    let fixture: Vec<(usize, f64)> = [4usize, 6, 8, 10]
        .iter()
        .map(|&n| (n, a0 * (-(n as f64) / b0).exp() + c0))
        .collect();
    match scaling_fit(&fixture) {
        Ok(fit) => {
            if (fit.a - a0).abs() > 1e-6 || (fit.b - b0).abs() > 1e-6 || (fit.c - c0).abs() > 1e-6
            {
                failures.push(format!(
                    "round-trip fixture recovered (a, b, c) = ({}, {}, {})",
                    fit.a, fit.b, fit.c
                ));
            }
        }
        Err(e) => failures.push(format!("round-trip fit failed: {e}")),
    }

    // Midpoint pseudo-critical couplings at step 0.0001.
    let windows = [(4usize, 0.95, 1.05), (6, 0.90, 1.00), (8, 0.95, 1.05), (10, 0.94, 1.04)];
    let mut points = Vec::new();
    for &(n, lo, hi) in &windows {
        let part = half_chain(n).unwrap();
        match locate_boundary(&model, "g", (lo, hi), n, &part, 0.0001, &grid, TRUNC) {
            Ok(b) => {
                println!("    N={n}: bracket [{}, {}]", b.lower, b.upper);
                points.push((n, 0.5 * (b.lower + b.upper)));
            }
            Err(e) => failures.push(format!("N={n}: locate failed: {e}")),
        }
    }
    if points.len() >= 3 {
        match scaling_fit(&points) {
            Ok(fit) => {
                println!(
                    "    fit: a={:.4} b={:.4} c={:.6} rms={:.2e}",
                    fit.a, fit.b, fit.c, fit.rms_residual
                );
                if (fit.c - 0.9940).abs() > 0.002 {
                    failures.push(format!(
                        "asymptote c = {:.6}, outside 0.9940 +/- 0.002",
                        fit.c
                    ));
                }
            }
            Err(e) => failures.push(format!("scaling fit failed: {e}")),
        }
    }
    report(4, "finite-size scaling", failures);
}

// --- criterion 5 -----------------------------------------------------------

const TABLE_III: &str = "
N N N N N N N N 0.3 1.5 1.4
N N N N N N N N 0.2 1.5 1.5
N N N N N N N 0.5 1.6 1.6 1.5
N N N N N N N 1.6 1.8 1.6 1.5
N N N N N N 1.4 2 1.9 1.7 1.5
N N N N N N 2.2 2.2 1.9 1.7 1.5
N N N N 1.4 2.2 N 2.2 1.9 1.7 1.5
N N 0.5 1.6 2 2.2 2.2 N 1.8 1.7 1.5
0.3 0.2 1.6 1.8 1.9 1.9 1.9 1.8 N 1.6 1.5
1.5 1.5 1.6 1.6 1.7 1.7 1.7 1.7 1.6 N 1.4
1.4 1.5 1.5 1.5 1.5 1.5 1.5 1.5 1.5 1.4 N
";

const TABLE_IV: &str = "
N 1.1 1 0.9 0.8 0.7 0.6 0.5 0.4 0.3 N
1.1 N 0.9 0.8 0.7 0.6 0.4 0.2 N N N
1 0.9 N 0.7 0.6 0.4 0.3 N N N N
0.9 0.8 0.7 N 0.4 0.2 N N N N N
0.8 0.7 0.6 0.4 N N N N N N N
0.7 0.6 0.4 0.2 N N N N N N N
0.6 0.4 0.3 N N N N N N N N
0.5 0.2 N N N N N N N N N
0.4 N N N N N N N N N N
0.3 N N N N N N N N N N
N N N N N N N N N N N
";

#[test]
fn criterion_5_xy_boundaries_and_tables() {
    let mut failures = Vec::new();
    let gamma = 3.0f64.sqrt() / 2.0;
    let model = ModelSpec::parse(&format!("xy:gamma={gamma}")).unwrap();
    let part = half_chain(10).unwrap();
    let grid = AlphaGrid::default();

    match locate_boundary(&model, "h", (0.95, 1.05), 10, &part, 0.001, &grid, TRUNC) {
        Ok(b) => {
            println!("    1A/1B bracket: [{}, {}]", b.lower, b.upper);
            if (b.lower - 0.999).abs() > 1e-9 || (b.upper - 1.000).abs() > 1e-9 {
                failures.push(format!(
                    "1A/1B boundary: [{}, {}], expected [0.999, 1.000]",
                    b.lower, b.upper
                ));
            }
        }
        Err(e) => failures.push(format!("1A/1B locate failed: {e}")),
    }

    match locate_boundary(&model, "h", (1.8, 2.2), 10, &part, 0.001, &grid, TRUNC) {
        Ok(b) => {
            println!("    h=2 bracket: [{}, {}]", b.lower, b.upper);
            if (b.lower - 2.010).abs() > 1e-9 || (b.upper - 2.012).abs() > 1e-9 {
                failures.push(format!(
                    "critical point: [{}, {}], expected [2.010, 2.012]",
                    b.lower, b.upper
                ));
            }
        }
        Err(e) => failures.push(format!("h=2 locate failed: {e}")),
    }

    for (name, from, reference) in [("Table III", 0.5, TABLE_III), ("Table IV", 1.6, TABLE_IV)] {
        let s = sweep(&model, "h", (from, from + 1.0, 0.1), 10, &part, false, TRUNC).unwrap();
        let table = interception_table(&s, &grid);
        check_table(&table, &parse_ref_table(reference), name, &mut failures);
    }
    report(5, "XY boundaries and tables", failures);
}

// --- criterion 6 -----------------------------------------------------------

#[test]
fn criterion_6_xxz_comb_table() {
    let mut failures = Vec::new();
    let model = ModelSpec::parse("xxz").unwrap();
    let part = comb(10).unwrap();
    let grid = AlphaGrid::default();
    let s = sweep(&model, "delta", (0.4, 1.6, 0.1), 10, &part, false, TRUNC).unwrap();
    let table = interception_table(&s, &grid);

    // Split the labels at delta = 1.0 (index 6).
    match classify_pattern(&table, 6, 0.1) {
        Ok(rep) => {
            if rep.class != PatternClass::CaseII {
                failures.push(format!("classified {:?}, expected CaseII ({rep:?})", rep.class));
            }
        }
        Err(e) => failures.push(format!("classification failed: {e}")),
    }

    let idx = |v: f64| {
        table
            .labels()
            .iter()
            .position(|&l| (l - v).abs() < 1e-9)
            .unwrap()
    };
    for (a, b, want, tol) in [(0.9, 1.1, 0.9, 0.1), (0.4, 1.5, 5.4, 0.1)] {
        let crossings = table.cell_crossings(idx(a), idx(b));
        let ok = matches!(paper_rounded(crossings), Some(d) if (d - want).abs() < 1e-9)
            || crossings.iter().any(|c| (c - want).abs() <= tol + 1e-9);
        if !ok {
            failures.push(format!(
                "cell ({a}, {b}): crossings {crossings:?}, expected about {want}"
            ));
        }
    }

    // Critical region certification: the innermost cross-phase pair crosses,
    // everything nearer the diagonal does not.
    let (i09, i10, i11) = (idx(0.9), idx(1.0), idx(1.1));
    if table.cell(i09, i11).is_none() {
        failures.push("cell (0.9, 1.1) should intercept".into());
    }
    if table.cell(i09, i10).is_some() || table.cell(i10, i11).is_some() {
        failures.push("cells (0.9, 1.0) and (1.0, 1.1) should not intercept".into());
    }
    println!("    certified critical region: 0.9 <= delta <= 1.1");
    report(6, "XXZ comb-partition table", failures);
}

// --- criterion 7 -----------------------------------------------------------

#[test]
fn criterion_7_ground_vs_excited() {
    let mut failures = Vec::new();
    let part = half_chain(10).unwrap();
    let grid = AlphaGrid::default();

    for g in [0.5, 0.6, 0.7, 0.8, 0.9] {
        let spec = ModelSpec::parse(&format!("ising:g={g}")).unwrap();
        match gs_vs_excited(&spec, 10, &part, &grid, TRUNC) {
            Ok(ConversionVerdict::Incomparable { .. }) => {}
            Ok(other) => failures.push(format!("g={g}: verdict {other:?}, expected Incomparable")),
            Err(e) => failures.push(format!("g={g}: {e}")),
        }
    }

    let mut last_gap = f64::NEG_INFINITY;
    for g in [1.1, 1.2, 1.3, 1.4, 1.5] {
        let spec = ModelSpec::parse(&format!("ising:g={g}")).unwrap();
        match gs_vs_excited(&spec, 10, &part, &grid, TRUNC) {
            Ok(ConversionVerdict::AtoB) => {}
            Ok(other) => failures.push(format!("g={g}: verdict {other:?}, expected AtoB")),
            Err(e) => failures.push(format!("g={g}: {e}")),
        }
        // Large-alpha separation of the two curves grows with the energy gap.
        let op = spec.build(10).unwrap();
        let pairs = lowest_states(&op, 2).unwrap();
        let ground = schmidt_from_state(&pairs[0].state, &part, TRUNC).unwrap();
        let excited = schmidt_from_state(&pairs[1].state, &part, TRUNC).unwrap();
        let gap = renyi_entropy(&excited, f64::INFINITY) - renyi_entropy(&ground, f64::INFINITY);
        if gap <= last_gap {
            failures.push(format!("g={g}: large-alpha gap {gap} did not grow"));
        }
        last_gap = gap;
    }
    report(7, "ground vs first excited", failures);
}

// --- criterion 8 -----------------------------------------------------------

fn random_schmidt(rng: &mut impl Rng, max_dim: usize) -> SchmidtVector {
    let d = rng.gen_range(1..=max_dim);
    let raw: Vec<f64> = (0..d).map(|_| rng.gen_range(1e-6..1.0)).collect();
    normalize_descending(&raw, 1e-12).unwrap()
}

#[test]
fn criterion_8_property_suites() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0xE10CC);
    let grid = AlphaGrid::default();

    // Renyi monotonicity and limit identities on 1000 random vectors.
    let alphas: Vec<f64> = (0..80).map(|i| 0.005 * 1.13f64.powi(i)).collect();
    for _ in 0..1000 {
        let p = random_schmidt(&mut rng, 16);
        let mut prev = renyi_entropy(&p, 0.0);
        if (prev - (p.len() as f64).log2()).abs() > 1e-9 {
            failures.push("Hartley limit violated".into());
            break;
        }
        if (renyi_entropy(&p, f64::INFINITY) + p.first().log2()).abs() > 1e-9 {
            failures.push("min-entropy limit violated".into());
            break;
        }
        let mut ok = true;
        for &a in &alphas {
            let s = renyi_entropy(&p, a);
            if s > prev + 1e-9 {
                ok = false;
                break;
            }
            prev = s;
        }
        if !ok {
            failures.push("alpha-monotonicity violated".into());
            break;
        }
    }

    // Majorization implies Renyi dominance on 1e4 random pairs.
    let mut checked = 0;
    for _ in 0..10_000 {
        let p = random_schmidt(&mut rng, 6);
        let q = random_schmidt(&mut rng, 6);
        if locc_convertible(&p, &q) && !p.approx_eq(&q, 1e-10) {
            checked += 1;
            if !find_interceptions(&p, &q, &grid).is_empty()
                || elocc_verdict(&p, &q, &grid) != ConversionVerdict::AtoB
            {
                failures.push(format!("dominance violated for {p:?} -> {q:?}"));
                break;
            }
        }
    }
    if checked < 100 {
        failures.push(format!("only {checked} convertible pairs sampled"));
    }

    // SVD spectra match explicit reduced-density-matrix eigenvalues.
    for _ in 0..20 {
        let n = rng.gen_range(2..=8);
        let dim = 1usize << n;
        let mut state: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm: f64 = state.iter().map(|x| x * x).sum::<f64>().sqrt();
        state.iter_mut().for_each(|x| *x /= norm);
        let size_a = rng.gen_range(1..n);
        let mut sites: Vec<usize> = (1..=n).collect();
        sites.shuffle(&mut rng);
        let part = BipartitionSpec::new(n, sites[..size_a].to_vec()).unwrap();

        let na = part.a_sites().len();
        let nb = n - na;
        let mut m = nalgebra::DMatrix::<f64>::zeros(1 << na, 1 << nb);
        for (b, &amp) in state.iter().enumerate() {
            let mut r = 0usize;
            for (pos, &site) in part.a_sites().iter().enumerate() {
                r |= ((b >> (n - site)) & 1) << (na - 1 - pos);
            }
            let mut c = 0usize;
            for (pos, &site) in part.b_sites().iter().enumerate() {
                c |= ((b >> (n - site)) & 1) << (nb - 1 - pos);
            }
            m[(r, c)] = amp;
        }
        let rho = &m * m.transpose();
        let mut eigs: Vec<f64> = rho.symmetric_eigenvalues().iter().copied().collect();
        eigs.sort_by(|a, b| b.partial_cmp(a).unwrap());

        let v = schmidt_from_state(&state, &part, 1e-14).unwrap();
        for (i, &lam) in v.coeffs().iter().enumerate() {
            if (lam - eigs[i]).abs() > 1e-10 {
                failures.push(format!("SVD vs RDM mismatch at lambda_{i}: {lam} vs {}", eigs[i]));
                break;
            }
        }
    }

    // Ising ground energies against the free-fermion even-sector oracle.
    for n in [8usize, 10] {
        for _ in 0..20 {
            let g = rng.gen_range(0.5..1.5);
            let op = build_ising(n, g).unwrap();
            let e0 = lowest_states(&op, 1).unwrap()[0].energy;
            let oracle: f64 = -(0..n / 2)
                .map(|m| {
                    let k = (2 * m + 1) as f64 * std::f64::consts::PI / n as f64;
                    2.0 * (1.0 + g * g - 2.0 * g * k.cos()).sqrt()
                })
                .sum::<f64>();
            if (e0 - oracle).abs() / oracle.abs() > 1e-8 {
                failures.push(format!("free-fermion oracle: n={n} g={g}: {e0} vs {oracle}"));
            }
        }
    }

    // XY at gamma=1, h=2g reproduces the Ising pipeline spectrum for spectrum.
    let part = half_chain(10).unwrap();
    for g in [0.7, 0.95, 1.2] {
        let ising = ModelSpec::parse(&format!("ising:g={g}")).unwrap();
        let xy = ModelSpec::parse(&format!("xy:gamma=1,h={}", 2.0 * g)).unwrap();
        let vi = schmidt_from_state(
            &lowest_states(&ising.build(10).unwrap(), 1).unwrap()[0].state,
            &part,
            TRUNC,
        )
        .unwrap();
        let vx = schmidt_from_state(
            &lowest_states(&xy.build(10).unwrap(), 1).unwrap()[0].state,
            &part,
            TRUNC,
        )
        .unwrap();
        let d = vi.len().min(vx.len());
        let tail_ok = vi.len() == vx.len()
            || vi.coeffs()[d.min(vi.len() - 1)..].iter().all(|&x| x < 1e-10)
                && vx.coeffs()[d.min(vx.len() - 1)..].iter().all(|&x| x < 1e-10);
        let head_ok = vi.coeffs()[..d]
            .iter()
            .zip(&vx.coeffs()[..d])
            .all(|(a, b)| (a - b).abs() < 1e-10);
        if !(head_ok && tail_ok) {
            failures.push(format!("XY/Ising spectra differ at g={g}"));
        }
    }

    report(8, "property suites", failures);
}
