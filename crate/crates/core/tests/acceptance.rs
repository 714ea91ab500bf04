//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strata::cartan::{build_context, GroupKind};
use strata::catalog::{
    bracket_preset, critical_bracket_check, jordan_display, jordan_label, jordan_vector, BracketPreset,
    BracketTensor, Partition,
};
use strata::flows::{verify_flow_equivalence, FlowParams};
use strata::hesselink::{
    enumerate_labels, kn_label_via_flow, min_norm_point, optimal_class_for_group, project_to_sl,
    DEFAULT_WEIGHT_CAP,
};
use strata::linalg::{condition_number, Matrix, Vector};
use strata::moment::{closed_form_moment, energy, moment};
use strata::rational::{int, rat, Rational, RationalVector};
use strata::reps::{Family, RepSpec, RepVector};

fn report(id: u32, name: &str, pass: bool, detail: &str, elapsed: Duration, budget: Duration) -> bool {
    let in_time = elapsed <= budget;
    let ok = pass && in_time;
    println!(
        "[criterion {id:>2}] {name}: {} ({detail}; {:.3}s of {:.0}s budget)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
    ok
}

fn random_vector(rng: &mut ChaCha8Rng, spec: &RepSpec) -> RepVector {
    loop {
        let coords: Vec<f64> = (0..spec.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if coords.iter().map(|c| c * c).sum::<f64>() > 1e-6 {
            return RepVector::from_slice(spec.clone(), &coords).unwrap();
        }
    }
}

fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let a = Matrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let qr = a.qr();
    let (q, r) = (qr.q(), qr.r());
    let signs = Vector::from_fn(n, |i, _| if r[(i, i)] < 0.0 { -1.0 } else { 1.0 });
    q * Matrix::from_diagonal(&signs)
}

fn unit(n: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    m[(i, j)] = 1.0;
    m
}

#[test]
fn criterion_01_constant_energy_on_standard() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let n = 2 + k % 5;
        let ctx = build_context(n, GroupKind::GL).unwrap();
        let spec = RepSpec::new(Family::Standard, n).unwrap();
        let v = random_vector(&mut rng, &spec);
        worst = worst.max((energy(&ctx, &spec, &v).unwrap() - 1.0).abs());
    }
    let ok = report(
        1,
        "F = 1 on Standard",
        worst <= 1e-12,
        &format!("max |F - 1| = {worst:.2e}, tol 1e-12"),
        start.elapsed(),
        Duration::from_secs(1),
    );
    assert!(ok);
}

#[test]
fn criterion_02_closed_forms_match_generic_moment() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst: f64 = 0.0;
    for family in Family::BUILT_IN {
        for k in 0..100 {
            let n = 2 + k % 4;
            let ctx = build_context(n, GroupKind::GL).unwrap();
            let spec = RepSpec::new(family, n).unwrap();
            let v = random_vector(&mut rng, &spec);
            let generic = moment(&ctx, &spec, &v).unwrap().matrix;
            let closed = closed_form_moment(&spec, &v).unwrap().matrix;
            worst = worst.max((&generic - &closed).norm() / closed.norm().max(f64::MIN_POSITIVE));
        }
    }
    let ok = report(
        2,
        "closed forms = generic moment",
        worst <= 1e-12,
        &format!("max relative deviation {worst:.2e}, tol 1e-12, 500 vectors"),
        start.elapsed(),
        Duration::from_secs(5),
    );
    assert!(ok);
}

#[test]
fn criterion_03_normal_matrices_have_zero_moment() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let n = 2 + k % 4;
        let ctx = build_context(n, GroupKind::GL).unwrap();
        let q = random_orthogonal(&mut rng, n);
        let d = Matrix::from_diagonal(&Vector::from_fn(n, |_, _| rng.gen_range(-2.0..2.0)));
        let x = &q * d * q.transpose();
        let v = RepVector::from_matrix(&x).unwrap();
        worst = worst.max(moment(&ctx, v.spec(), &v).unwrap().matrix.norm());
    }
    let ctx = build_context(2, GroupKind::GL).unwrap();
    let e12 = RepVector::from_matrix(&unit(2, 0, 1)).unwrap();
    let f = moment(&ctx, e12.spec(), &e12).unwrap().energy;
    let ok = report(
        3,
        "normal matrices in the kernel, |m(E12)|^2 = 2",
        worst <= 1e-12 && (f - 2.0).abs() <= 1e-12,
        &format!("max |m(x)| = {worst:.2e}; |m(E12)|^2 = {f}"),
        start.elapsed(),
        Duration::from_secs(1),
    );
    assert!(ok);
}

#[test]
fn criterion_04_k_equivariance() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut worst: f64 = 0.0;
    for family in Family::BUILT_IN {
        for k in 0..50 {
            let n = 2 + k % 3;
            let ctx = build_context(n, GroupKind::GL).unwrap();
            let spec = RepSpec::new(family, n).unwrap();
            let v = random_vector(&mut rng, &spec);
            let h = random_orthogonal(&mut rng, n);
            let moved = RepVector::new(spec.clone(), spec.act_group(&h, v.coords()).unwrap()).unwrap();
            let lhs = &h * moment(&ctx, &spec, &v).unwrap().matrix * h.transpose();
            let rhs = moment(&ctx, &spec, &moved).unwrap().matrix;
            worst = worst.max((lhs - rhs).amax());
        }
    }
    let ok = report(
        4,
        "Ad_k m(v) = m(rho(k) v)",
        worst <= 1e-10,
        &format!("max deviation {worst:.2e}, tol 1e-10, 50 k per family"),
        start.elapsed(),
        Duration::from_secs(5),
    );
    assert!(ok);
}

#[test]
fn criterion_05_flow_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let cases: Vec<(&str, RepVector)> = vec![
        (
            "Standard/e1",
            RepVector::basis(RepSpec::new(Family::Standard, 3).unwrap(), 0).unwrap(),
        ),
        (
            "Adjoint/E12+E23",
            RepVector::from_matrix(&(unit(3, 0, 1) + unit(3, 1, 2))).unwrap(),
        ),
        (
            "Brackets/heisenberg",
            bracket_preset(BracketPreset::Heisenberg, 3).unwrap().to_rep_vector().unwrap(),
        ),
    ];
    let mut all = true;
    let mut details = Vec::new();
    for (name, v) in &cases {
        let n = v.spec().n();
        let ctx = build_context(n, GroupKind::GL).unwrap();
        let h0 = loop {
            let h = Matrix::identity(n, n) + Matrix::from_fn(n, n, |_, _| rng.gen_range(-0.3..0.3));
            if condition_number(&h) < 10.0 {
                break h;
            }
        };
        let r = verify_flow_equivalence(&ctx, v.spec(), v, &h0, 5.0, &FlowParams::default()).unwrap();
        all &= r.passed;
        details.push(format!("{name}: dv {:.1e} dS {:.1e}", r.max_dev_v, r.max_dev_s));
    }
    let ok = report(
        5,
        "gradient, group and metric flows agree",
        all,
        &format!("{}; tol 1e-6, T = 5", details.join(", ")),
        start.elapsed(),
        Duration::from_secs(10),
    );
    assert!(ok);
}

#[test]
fn criterion_06_min_norm_matches_exhaustive_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let mut mismatches = 0;
    let mut uncertified = 0;
    let instances = 600;
    for _ in 0..instances {
        let n = rng.gen_range(1..=4);
        let count = rng.gen_range(1..=6);
        let points: Vec<RationalVector> = (0..count)
            .map(|_| {
                let c: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
                RationalVector::from_ints(&c)
            })
            .collect();
        let cert = min_norm_point(&points).unwrap();
        let oracle = common::min_norm_by_enumeration(&points);
        if cert.eta != oracle || cert.q != oracle.norm2() {
            mismatches += 1;
        }
        if !cert.verify(&points) {
            uncertified += 1;
        }
    }
    let ok = report(
        6,
        "exact min-norm point = subset-enumeration oracle",
        mismatches == 0 && uncertified == 0,
        &format!("{instances} instances, {mismatches} mismatches, {uncertified} bad certificates"),
        start.elapsed(),
        Duration::from_secs(30),
    );
    assert!(ok);
}

#[test]
fn criterion_07_jordan_suite() {
    let start = Instant::now();
    let mut identity_failures = Vec::new();
    let mut display_failures = Vec::new();
    let mut negdef_failures = Vec::new();
    let mut dominance_failures = Vec::new();
    for n in 1..=6 {
        let parts: Vec<Partition> = Partition::all(n).into_iter().filter(|p| !p.is_all_ones()).collect();
        let labels: Vec<Rational> = parts
            .iter()
            .map(|p| {
                let r = jordan_label(p).unwrap();
                // independent of the library's own flags
                let q_formula: Rational = p
                    .parts()
                    .iter()
                    .map(|&k| rat(((k - 1) * k * (k + 1)) as i64, 12))
                    .fold(int(0), |a, b| a + b);
                if !(&r.label.q * &q_formula == int(1) && r.q_paper == q_formula && r.identity_ok) {
                    identity_failures.push(p.to_string());
                }
                if !(r.beta_paper == jordan_display(p) && r.display_ok) {
                    display_failures.push(p.to_string());
                }
                let ad_max = &r.beta_paper.0[0] - &r.beta_paper.0[n - 1];
                if !(ad_max <= r.q_paper && r.negdef_ok) {
                    negdef_failures.push(p.to_string());
                }
                r.label.q
            })
            .collect();
        for (a, pa) in parts.iter().enumerate() {
            for (b, pb) in parts.iter().enumerate() {
                if a != b && pa.dominates(pb) && !(labels[b] > labels[a]) {
                    dominance_failures.push(format!("{pb} < {pa}"));
                }
            }
        }
    }
    let pass = identity_failures.is_empty()
        && display_failures.is_empty()
        && negdef_failures.is_empty()
        && dominance_failures.is_empty();
    let ok = report(
        7,
        "Jordan identities, display, semidefiniteness, dominance",
        pass,
        &format!(
            "identity failures {:?}; display failures {:?}; ad(beta) - q <= 0 failures {:?}; dominance failures {:?}",
            identity_failures, display_failures, negdef_failures, dominance_failures
        ),
        start.elapsed(),
        Duration::from_secs(5),
    );
    assert!(ok);
}

#[test]
fn criterion_08_flow_limit_matches_exact_label() {
    let start = Instant::now();
    let params = FlowParams::default();
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 2..=5 {
        let ctx = build_context(n, GroupKind::GL).unwrap();
        for p in Partition::all(n).into_iter().filter(|p| !p.is_all_ones()) {
            let x = jordan_vector(&p).unwrap();
            let c = kn_label_via_flow(&ctx, x.spec(), &x, &params).unwrap();
            worst = worst.max(c.max_deviation);
            cases += 1;
            if !c.matched {
                failures.push(format!("({p}): dev {:.1e} converged {}", c.max_deviation, c.converged));
            }
        }
    }
    let ctx = build_context(3, GroupKind::GL).unwrap();
    let h = bracket_preset(BracketPreset::Heisenberg, 3).unwrap().to_rep_vector().unwrap();
    let c = kn_label_via_flow(&ctx, h.spec(), &h, &params).unwrap();
    worst = worst.max(c.max_deviation);
    cases += 1;
    if !c.matched {
        failures.push(format!("heisenberg: dev {:.1e}", c.max_deviation));
    }
    let ok = report(
        8,
        "gradient-flow limit spectrum = exact label",
        failures.is_empty(),
        &format!("{cases} cases, max deviation {worst:.2e}, tol 1e-5, failures {failures:?}"),
        start.elapsed(),
        Duration::from_secs(60),
    );
    assert!(ok);
}

#[test]
fn criterion_09_heisenberg_exact_values() {
    let start = Instant::now();
    let ctx = build_context(3, GroupKind::GL).unwrap();
    let mu = bracket_preset(BracketPreset::Heisenberg, 3).unwrap();

    // oracle: expand ⟨π(X)μ, μ⟩/⟨μ, μ⟩ over an orthonormal basis of symmetric matrices,
    // with (π(X)μ)(x,y) = Xμ(x,y) − μ(Xx,y) − μ(x,Xy) summed over ordered pairs
    let e = |i: usize| Vector::from_fn(3, |k, _| if k == i { 1.0 } else { 0.0 });
    let pair_sum = |f: &dyn Fn(usize, usize) -> f64| -> f64 {
        (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| f(i, j)).sum()
    };
    let norm2 = pair_sum(&|i, j| mu.bracket(&e(i), &e(j)).norm_squared());
    let mut oracle = Matrix::zeros(3, 3);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut basis = Vec::new();
    for i in 0..3 {
        basis.push(unit(3, i, i));
        for j in (i + 1)..3 {
            basis.push((unit(3, i, j) + unit(3, j, i)) * r);
        }
    }
    for b in &basis {
        let c = pair_sum(&|i, j| {
            let (x, y) = (e(i), e(j));
            let moved = b * mu.bracket(&x, &y) - mu.bracket(&(b * &x), &y) - mu.bracket(&x, &(b * &y));
            moved.dot(&mu.bracket(&x, &y))
        }) / norm2;
        oracle += b * c;
    }
    let want = Matrix::from_diagonal(&Vector::from_vec(vec![-1.0, -1.0, 1.0]));
    let report_c = critical_bracket_check(&ctx, &mu).unwrap();
    let m = &report_c.beta.matrix;
    let plus_want = Matrix::from_diagonal(&Vector::from_vec(vec![2.0, 2.0, 4.0]));
    let dev_oracle = (m - &oracle).amax().max((&oracle - &want).amax());
    let dev_f = (report_c.beta.energy - 3.0).abs();
    let dev_plus = (&report_c.beta_plus - plus_want).amax();
    let orth = report_c.orthogonality.unwrap_or(f64::NAN);
    let pass = dev_oracle <= 1e-12
        && dev_f <= 1e-12
        && dev_plus <= 1e-12
        && report_c.is_derivation
        && report_c.positive
        && orth.abs() <= 1e-12;
    let ok = report(
        9,
        "Heisenberg m, F, beta+ derivation and orthogonality",
        pass,
        &format!(
            "m dev {dev_oracle:.1e}, F dev {dev_f:.1e}, beta+ dev {dev_plus:.1e}, derivation residual {:.1e}, <beta+,beta> = {orth:.1e}",
            report_c.derivation.derivation_residual
        ),
        start.elapsed(),
        Duration::from_secs(1),
    );
    assert!(ok);
}

#[test]
fn criterion_10_sl_projection() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for n in 2..=6 {
        let spec = RepSpec::new(Family::Standard, n).unwrap();
        for i in 0..n {
            let mut want: Vec<Rational> = vec![rat(-1, n as i64); n];
            want[i] = rat(n as i64 - 1, n as i64);
            let want = RationalVector(want);
            let mut e = vec![0; n];
            e[i] = 1;
            let projected = project_to_sl(&RationalVector::from_ints(&e));
            let ev = RepVector::basis(spec.clone(), i).unwrap();
            let class = optimal_class_for_group(GroupKind::SL, &spec, &ev).unwrap();
            let torus_eta = class.label().map(|l| l.torus_eta.clone());
            if projected != want || torus_eta.as_ref() != Some(&want) || !projected.sum().eq(&int(0)) {
                failures.push(format!("n={n} i={i}"));
            }
        }
    }
    let ok = report(
        10,
        "SL labels of e_i are e_i - (1/n)(1,...,1)",
        failures.is_empty(),
        &format!("n = 2..6, failures {failures:?}"),
        start.elapsed(),
        Duration::from_secs(1),
    );
    assert!(ok);
}

#[test]
fn criterion_11_label_enumeration() {
    let start = Instant::now();
    let r = |v: &[(i64, i64)]| RationalVector(v.iter().map(|&(a, b)| rat(a, b)).collect());
    let std3 = enumerate_labels(&RepSpec::new(Family::Standard, 3).unwrap(), DEFAULT_WEIGHT_CAP).unwrap();
    let dual3 = enumerate_labels(&RepSpec::new(Family::Dual, 3).unwrap(), DEFAULT_WEIGHT_CAP).unwrap();
    let got_std: Vec<RationalVector> = std3.labels.iter().map(|l| l.eta.clone()).collect();
    let got_dual: Vec<RationalVector> = dual3.labels.iter().map(|l| l.eta.clone()).collect();
    let want_std = vec![
        r(&[(1, 1), (0, 1), (0, 1)]),
        r(&[(1, 2), (1, 2), (0, 1)]),
        r(&[(1, 3), (1, 3), (1, 3)]),
    ];
    let want_dual = vec![
        r(&[(0, 1), (0, 1), (-1, 1)]),
        r(&[(0, 1), (-1, 2), (-1, 2)]),
        r(&[(-1, 3), (-1, 3), (-1, 3)]),
    ];
    let pass = got_std == want_std && got_dual == want_dual && !std3.includes_zero && !dual3.includes_zero;
    let ok = report(
        11,
        "labels of Standard and Dual for n = 3",
        pass,
        &format!(
            "Standard {:?}, Dual {:?}",
            got_std.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            got_dual.iter().map(|v| v.to_string()).collect::<Vec<_>>()
        ),
        start.elapsed(),
        Duration::from_secs(1),
    );
    assert!(ok);
}

#[test]
fn heisenberg_bracket_tensor_is_lie() {
    let mu = bracket_preset(BracketPreset::Heisenberg, 3).unwrap();
    assert!(mu.jacobi_ok());
    let back = BracketTensor::from_rep_vector(&mu.to_rep_vector().unwrap()).unwrap();
    assert_eq!(back, mu);
}
