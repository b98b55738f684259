//! Acceptance harness: one PASS/FAIL line per criterion, nonzero exit if any
//! fails. Randomized criteria draw from ChaCha8 seeded by `DCSA_SEED`.

mod common;

use std::time::{Duration, Instant};

use common::{quarter_powers, jordan, q, rf};
use dcsa_core::dcsa::is_horizontal;
use dcsa_core::diffmod::{gauge_transform, transport, DiffModule};
use dcsa_core::galois::{classify, relation_lattice, tower_description};
use dcsa_core::hypersolve::{
    rational_solution, rational_solutions_param, solve_diagonal, solve_rank1, solve_triangular_2x2,
};
use dcsa_core::ideals::{flag_criterion, ideal_is_d_stable, reductive_criterion, RightIdeal};
use dcsa_core::lattice::lattice_contains;
use dcsa_core::linalg::Subspace;
use dcsa_core::{Differential, Matrix, RatFunc, SplittingTower, TowerElem, Q};
use num_traits::Zero;
use rand::Rng;

/// Wall-clock budget for criteria 1 and 2.
const EXAMPLE_BUDGET: Duration = Duration::from_secs(1);
const PHI_INSTANCES: usize = 500;
const SOLVER_CASES: usize = 1000;
const TRANSPORT_INSTANCES: usize = 100;
const BRUTE_BOUND: i64 = 8;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn te(s: &str) -> TowerElem {
    s.parse().unwrap()
}

fn tower(gens: &[&str]) -> SplittingTower {
    SplittingTower::parse_list(&gens.iter().map(|s| s.to_string()).collect::<Vec<_>>()).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let a = quarter_powers();
    let conn = a.associated_module().conn().clone();
    let expected = Matrix::diagonal(&[rf("0"), rf("1/(2*x)"), rf("-1/(2*x)"), rf("0")]);
    ensure(conn == expected, || format!("associated connection {conn:?}"))?;

    let sol = solve_diagonal(&conn).map_err(|e| e.to_string())?;
    let z_expected = Matrix::diagonal(&[te("1"), te("(x)^(1/2)"), te("(x)^(-1/2)"), te("1")]);
    ensure(sol.fundamental == z_expected, || format!("fundamental {:?}", sol.fundamental))?;
    ensure(a.associated_module().verify_fundamental(&sol.fundamental).passed, || "fundamental fails".into())?;

    let desc = tower_description(&conn.diagonal_entries()).map_err(|e| e.to_string())?;
    ensure(desc.algebraic_degree == 2 && desc.transcendence_degree == 0, || format!("{desc:?}"))?;

    let z = Matrix::diagonal(&[te("(x)^(1/4)"), te("(x)^(-1/4)")]);
    ensure(a.split_check(&z).passed, || "split_check fails on diag(x^(1/4), x^(-1/4))".into())?;
    let quartic = tower(&["(x)^(1/4)"]);
    for i in 0..2 {
        ensure(quartic.contains(z.get(i, i)).unwrap(), || "certificate outside the degree-4 tower".into())?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < EXAMPLE_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("{elapsed:.2?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let a = quarter_powers();
    let root = tower(&["(x)^(1/2)"]);
    let found = a.gauge_to_zero_certificate(&root).map_err(|e| e.to_string())?;
    ensure(found.is_none(), || format!("unexpected Z1 {found:?}"))?;
    for p in ["1/(4*x)", "-1/(4*x)"] {
        let h = solve_rank1(&rf(p)).map_err(|e| e.to_string())?;
        ensure(!root.contains_class(h.class()).unwrap(), || format!("{h} lies in Q(x)(x^(1/2))"))?;
    }
    // A solution of y' = y/(4x) in the tower would be x^(k/2)·r with r
    // rational and r' = (1/4 - k/2)/x · r.
    for k in -6i64..=6 {
        let shifted = rf("1/(4*x)") - RatFunc::linear_power(&Q::zero(), -1).scale(&q(k, 2));
        ensure(rational_solution(&shifted, &RatFunc::zero()).unwrap().is_none(), || format!("cofactor repair at k = {k}"))?;
        ensure(rational_solutions_param(&shifted, &[]).unwrap().is_empty(), || format!("nonzero kernel at k = {k}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < EXAMPLE_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("{elapsed:.2?}"))
}

fn criterion_3() -> Outcome {
    let mut trivial = 0;
    let corpus = common::corpus();
    for (name, a) in &corpus {
        let n = a.n();
        let t = a.splitting_tower().map_err(|e| format!("{name}: {e}"))?;
        let report = a.triviality_check(&t).map_err(|e| format!("{name}: {e}"))?;
        let cert = a.find_split_certificate(&t).map_err(|e| format!("{name}: {e}"))?;
        ensure(report.trivial == cert.is_some(), || format!("{name}: trivial = {} but certificate = {cert:?}", report.trivial))?;
        let constants = a.constants_algebra(&t).map_err(|e| format!("{name}: {e}"))?;
        for b in constants.basis() {
            ensure(is_horizontal(a, b), || format!("{name}: constant {b:?} is not annihilated"))?;
        }
        if let Some(z) = cert {
            trivial += 1;
            ensure(a.split_check(&z).passed, || format!("{name}: certificate fails split_check"))?;
            ensure(constants.dim() == n * n, || format!("{name}: constants dim {}", constants.dim()))?;
            ensure(constants.structure_constants().is_some(), || format!("{name}: constants not closed"))?;
            ensure(constants.has_full_matrix_units(&z), || format!("{name}: no full matrix units"))?;
        } else {
            ensure(constants.dim() < n * n, || format!("{name}: constants full without certificate"))?;
        }
    }
    Ok(format!("{} algebras, {trivial} split over their towers", corpus.len()))
}

fn criterion_4() -> Outcome {
    let mut r = common::rng(4);
    for inst in 0..PHI_INSTANCES {
        let n = if inst % 2 == 0 { 2 } else { 3 };
        let (w1, w2) = (common::random_subspace(&mut r, n), common::random_subspace(&mut r, n));
        let (i1, i2) = (RightIdeal::phi_inverse(w1.clone()), RightIdeal::phi_inverse(w2.clone()));
        let ctx = || format!("instance {inst}: W1 = {:?}, W2 = {:?}", w1.basis(), w2.basis());

        ensure(i1.linear_dim() == n * w1.dim(), ctx)?;
        ensure(w1.is_subspace_of(&w2) == i1.is_subideal_of(&i2), ctx)?;
        // Compare against the intersection and sum of the ideals as
        // subspaces of the flattened n²-dimensional matrix space.
        let flat = |i: &RightIdeal<Q>| Subspace::span(n * n, i.matrix_basis().iter().map(|m| m.entries().to_vec()).collect());
        let (f1, f2) = (flat(&i1), flat(&i2));
        ensure(flat(&RightIdeal::phi_inverse(w1.intersect(&w2))) == f1.intersect(&f2), ctx)?;
        ensure(flat(&i1.intersect(&i2)) == f1.intersect(&f2), ctx)?;
        ensure(flat(&RightIdeal::phi_inverse(w1.sum(&w2))) == f1.sum(&f2), ctx)?;
        ensure(flat(&i1.sum(&i2)) == f1.sum(&f2), ctx)?;
        if w1.intersect(&w2).dim() == 0 {
            ensure(i1.sum(&i2).linear_dim() == i1.linear_dim() + i2.linear_dim(), ctx)?;
        }
        let c = common::random_invertible_q(&mut r, n);
        let ci = c.inverse().unwrap();
        let conj = i1.conjugate(&c).map_err(|e| e.to_string())?;
        let direct = Subspace::span(n * n, i1.matrix_basis().iter().map(|m| (&(&c * m) * &ci).entries().to_vec()).collect());
        ensure(flat(&conj) == direct, ctx)?;
        ensure(conj.phi() == &w1.image(&c), ctx)?;
        ensure(conj.linear_dim() == i1.linear_dim(), ctx)?;
    }
    Ok(format!("{PHI_INSTANCES} instances in M_2 and M_3"))
}

fn criterion_5() -> Outcome {
    let a = quarter_powers();
    let v = reductive_criterion(&a).map_err(|e| e.to_string())?;
    ensure(v.reductive && v.decomposition.len() == 2, || format!("{v:?}"))?;
    for ideal in &v.decomposition {
        ensure(ideal.linear_dim() == 2, || format!("ideal of dimension {}", ideal.linear_dim()))?;
        ensure(ideal_is_d_stable(&a, ideal), || "ideal is not D-stable".into())?;
        for x in ideal.matrix_basis() {
            let dx = a.apply_derivation(&x);
            ensure(ideal.contains(&dx), || format!("D({x:?}) leaves the ideal"))?;
        }
    }
    let total = v.decomposition.iter().fold(RightIdeal::phi_inverse(Subspace::zero(2)), |acc, i| acc.sum(i));
    ensure(total.linear_dim() == 4, || "summands do not span M_2".into())?;

    let j = jordan();
    let v = reductive_criterion(&j).map_err(|e| e.to_string())?;
    ensure(!v.reductive, || "Jordan input judged reductive".into())?;
    let w = v.witness.ok_or("no witness")?;
    ensure(ideal_is_d_stable(&j, &RightIdeal::phi_inverse(w.clone())), || "witness not stable".into())?;
    ensure(rational_solution(&RatFunc::zero(), &rf("1/x")).unwrap().is_none(), || "log x is rational".into())?;
    Ok("2 minimal ideals of dimension 2; Jordan input not reductive".into())
}

fn criterion_6() -> Outcome {
    let mut count = 0;
    for (name, a) in common::corpus() {
        let n = a.n();
        let chain = flag_criterion(&a).map_err(|e| format!("{name}: {e}"))?.ok_or(format!("{name}: no flag"))?;
        let expected: Vec<usize> = (1..=n).map(|k| k * n).collect();
        ensure(chain.dims() == expected, || format!("{name}: dims {:?}", chain.dims()))?;
        for ideal in &chain.ideals {
            ensure(ideal_is_d_stable(&a, ideal), || format!("{name}: unstable ideal in flag"))?;
        }
        count += 1;
    }
    Ok(format!("{count} corpus algebras carry full flags"))
}

fn criterion_7() -> Outcome {
    let mut checked = 0;
    for (name, a) in common::corpus() {
        if !a.p().is_diagonal() {
            continue;
        }
        let full = a.associated_module().conn().diagonal_entries();
        let gens = common::reduced_generators(&full);
        let desc = classify(&full).map_err(|e| format!("{name}: {e}"))?;
        let brute = common::brute_relations(&gens, BRUTE_BOUND);
        let (torus, order) = common::group_from_relations(gens.len(), &brute);
        ensure(desc.torus_rank == torus && desc.finite_order() == order, || {
            format!("{name}: classify {desc:?} vs oracle torus {torus}, order {order}")
        })?;
        // The lattice must agree with the box exactly.
        let basis = relation_lattice(&gens).map_err(|e| e.to_string())?;
        let count = brute.len();
        let mut m = vec![-BRUTE_BOUND; gens.len()];
        let mut inside = 0;
        loop {
            if lattice_contains(&basis, &common::to_big(&m)) {
                inside += 1;
            }
            let mut i = 0;
            while i < m.len() && m[i] == BRUTE_BOUND {
                m[i] = -BRUTE_BOUND;
                i += 1;
            }
            if i == m.len() {
                break;
            }
            m[i] += 1;
        }
        ensure(inside == count, || format!("{name}: lattice has {inside} box points, oracle {count}"))?;
        for v in &brute {
            ensure(lattice_contains(&basis, &common::to_big(v)), || format!("{name}: {v:?} missing"))?;
        }
        checked += 1;
    }
    let a = quarter_powers();
    let k = classify(&a.associated_module().conn().diagonal_entries()).map_err(|e| e.to_string())?;
    ensure(k.torus_rank == 0 && k.finite_order() == 2, || format!("associated group {k:?}"))?;
    let e = classify(&a.p().diagonal_entries()).map_err(|e| e.to_string())?;
    ensure(e.torus_rank == 0 && e.finite_order() == 4, || format!("column group {e:?}"))?;
    Ok(format!("{checked} diagonal inputs match the oracle; orders 2 and 4"))
}

fn criterion_8() -> Outcome {
    let mut r = common::rng(8);
    let (mut rank1, mut planted, mut free, mut systems) = (0, 0, 0, 0);
    for case in 0..SOLVER_CASES {
        match case % 4 {
            0 => {
                let a = common::random_split(&mut r, 3);
                let h = solve_rank1(&a).map_err(|e| e.to_string())?;
                let e = TowerElem::from(h.clone());
                ensure((e.derive() - e * TowerElem::from(a.clone())).is_zero(), || format!("case {case}: {h} for {a}"))?;
                rank1 += 1;
            }
            1 => {
                let a = common::random_split(&mut r, 2);
                let y = loop {
                    let y = common::random_split(&mut r, 2);
                    if !y.is_zero() {
                        break y;
                    }
                };
                let b = y.derive() - a.clone() * y.clone();
                let z = rational_solution(&a, &b)
                    .map_err(|e| e.to_string())?
                    .ok_or_else(|| format!("case {case}: planted {y} for a = {a} not recovered"))?;
                ensure(z.derive() - a.clone() * z.clone() - b == RatFunc::zero(), || format!("case {case}: residual"))?;
                planted += 1;
            }
            2 => {
                let a = common::random_log_type(&mut r);
                let b = common::random_split(&mut r, 2);
                if let Some(z) = rational_solution(&a, &b).map_err(|e| e.to_string())? {
                    ensure(z.derive() - a.clone() * z.clone() - b.clone() == RatFunc::zero(), || format!("case {case}: residual"))?;
                    free += 1;
                }
            }
            _ => {
                let p11 = common::random_split(&mut r, 2);
                let p22 = common::random_split(&mut r, 2);
                let p12 = if r.gen_bool(0.5) { RatFunc::zero() } else { common::random_split(&mut r, 2) };
                let p = Matrix::from_rows(vec![vec![p11, p12], vec![RatFunc::zero(), p22]]).unwrap();
                let sol = solve_triangular_2x2(&p).map_err(|e| e.to_string())?;
                if let Some(z) = sol.fundamental() {
                    let report = DiffModule::new(p.clone()).unwrap().verify_fundamental(&z);
                    ensure(report.passed, || format!("case {case}: {z:?} fails for {p:?}"))?;
                    systems += 1;
                }
            }
        }
    }
    Ok(format!(
        "{SOLVER_CASES} cases: {rank1} rank-one, {planted} planted, {free} unplanted solutions, {systems} triangular systems verified"
    ))
}

fn criterion_9() -> Outcome {
    let mut r = common::rng(9);
    for inst in 0..TRANSPORT_INSTANCES {
        let b = Matrix::diagonal(&[common::random_split(&mut r, 2), common::random_split(&mut r, 2)]);
        let k = solve_diagonal(&b).map_err(|e| e.to_string())?.fundamental;
        let (m1, m2) = (common::random_gauge(&mut r, 2), common::random_gauge(&mut r, 2));
        let a = gauge_transform(&b, &m1).map_err(|e| e.to_string())?;
        let moved = transport(&k, &m1).map_err(|e| e.to_string())?;
        ensure(DiffModule::new(a.clone()).unwrap().verify_fundamental(&moved).passed, || format!("instance {inst}: transport fails"))?;
        let two_steps = gauge_transform(&a, &m2).map_err(|e| e.to_string())?;
        let one_step = gauge_transform(&b, &(&m1 * &m2)).map_err(|e| e.to_string())?;
        ensure(two_steps == one_step, || format!("instance {inst}: cocycle fails"))?;
        let moved_twice = transport(&moved, &m2).map_err(|e| e.to_string())?;
        ensure(DiffModule::new(two_steps).unwrap().verify_fundamental(&moved_twice).passed, || format!("instance {inst}: composite transport fails"))?;
    }
    Ok(format!("{TRANSPORT_INSTANCES} instances"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("example end to end, exact, under 1 s", criterion_1),
        ("no gauge to zero over Q(x)(x^(1/2)), exact, under 1 s", criterion_2),
        ("triviality iff split certificate on 10 corpus algebras", criterion_3),
        ("right-ideal correspondence laws, 500 instances", criterion_4),
        ("reductive verdicts", criterion_5),
        ("flags of δ-right ideals", criterion_6),
        ("group descriptors vs brute-force lattice, |m| <= 8", criterion_7),
        ("solver soundness, 1000 cases", criterion_8),
        ("gauge transport and cocycle, 100 instances", criterion_9),
    ];
    println!("seed {}", common::seed());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {}: {name} ({detail}; {t:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}: {name} ({why})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

