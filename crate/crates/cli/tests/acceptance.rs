//! Acceptance suite: one test per criterion, each printing a pass line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use ndarray::array;
use netgrow::bounds::{
    bound_single_cluster, bound_single_leaf, bound_w1, bound_w2,
    check_trace_power_supermodularity,
};
use netgrow::control::{
    kalman_rank, pbh_controllable, verify_growth_preserves_controllability, w1_eigenvalue_map,
    w2_eigenvalue_map, InputMatrix, WhiskerOp, DEFAULT_TOL,
};
use netgrow::graph::{erdos_renyi, random_connected, Laplacian, NodeSet};
use netgrow::optimize::{
    exhaustive_cluster, exhaustive_leaf, grow, ClusterKind, Method, RelaxationProblem,
};
use netgrow::spectral::{eig_sym, grounded_laplacian, trace_power};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_input<R: Rng>(n: usize, rng: &mut R) -> InputMatrix {
    if rng.gen::<bool>() {
        InputMatrix::basis(n, rng.gen_range(1..=n)).unwrap()
    } else {
        let vals: Vec<f64> = (0..n)
            .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
            .collect();
        InputMatrix::column(&vals).unwrap()
    }
}

/// The pinned 4-node seed: a triangle with a pendant node.
fn seed4() -> Laplacian {
    Laplacian::from_edge_list(&[(1, 2), (1, 3), (2, 3), (3, 4)], 4).unwrap()
}

#[test]
fn acceptance_1_controllability_preservation() {
    let start = Instant::now();
    let mut rng = rng(101);
    for seed_idx in 0..200 {
        let n = rng.gen_range(3..=8);
        let l = random_connected(n, 0.5, &mut rng);
        let b = random_input(n, &mut rng);
        for leaf in [false, true] {
            assert!(
                verify_growth_preserves_controllability(&l, &b, WhiskerOp::W1, &[leaf], DEFAULT_TOL)
                    .unwrap(),
                "w1 variant [{leaf}] violated at seed {seed_idx}"
            );
        }
        for bits in 0..8u8 {
            let pattern = [bits & 1 != 0, bits & 2 != 0, bits & 4 != 0];
            assert!(
                verify_growth_preserves_controllability(
                    &l,
                    &b,
                    WhiskerOp::W2,
                    &pattern,
                    DEFAULT_TOL
                )
                .unwrap(),
                "w2 variant {pattern:?} violated at seed {seed_idx}"
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}, budget 60 s");
    println!(
        "acceptance 1 (controllability preservation, 200 seeds x 10 variants, {:.1?}): PASS",
        elapsed
    );
}

#[test]
fn acceptance_2_pbh_kalman_agreement() {
    let mut rng = rng(102);
    for trial in 0..500 {
        let n = rng.gen_range(2..=8);
        let l = erdos_renyi(n, 0.5, &mut rng);
        let b = random_input(n, &mut rng);
        let pbh = pbh_controllable(&l, &b, DEFAULT_TOL).unwrap();
        let rank = kalman_rank(&l, &b).unwrap();
        assert_eq!(
            pbh.controllable,
            rank == n,
            "trial {trial}: PBH {} vs Kalman rank {rank}/{n}",
            pbh.controllable
        );
    }
    println!("acceptance 2 (PBH-Kalman oracle agreement, 500 trials): PASS");
}

#[test]
fn acceptance_3_spectrum_maps() {
    fn multiset_close(a: &[f64], b: &[f64], tol: f64) -> bool {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= tol)
    }

    let mut rng = rng(103);
    for _ in 0..100 {
        let n = rng.gen_range(1..=6);
        let l = erdos_renyi(n, 0.5, &mut rng);
        let base = eig_sym(l.matrix()).unwrap().values;

        let direct = eig_sym(l.whisker_w1().matrix()).unwrap().values;
        let mut mapped = Vec::new();
        for &lam in &base {
            let (plus, minus) = w1_eigenvalue_map(lam).unwrap();
            mapped.extend([plus, minus]);
        }
        assert!(multiset_close(&direct, &mapped, 1e-8), "w1 map mismatch");

        let direct = eig_sym(l.whisker_w2().matrix()).unwrap().values;
        let mut mapped = Vec::new();
        for &lam in &base {
            mapped.extend(w2_eigenvalue_map(lam).unwrap());
        }
        assert!(multiset_close(&direct, &mapped, 1e-8), "w2 map mismatch");
    }

    // n = 1 anchor, both routes, 1e-10.
    let single = Laplacian::from_edge_list(&[], 1).unwrap();
    let expected = [0.0, 2.0 - 2f64.sqrt(), 2.0, 2.0 + 2f64.sqrt()];
    let direct = eig_sym(single.whisker_w2().matrix()).unwrap().values;
    let mapped = w2_eigenvalue_map(0.0).unwrap();
    for ((d, m), e) in direct.iter().zip(&mapped).zip(&expected) {
        assert!((d - e).abs() <= 1e-10, "direct {d} vs anchor {e}");
        assert!((m - e).abs() <= 1e-10, "mapped {m} vs anchor {e}");
    }
    println!("acceptance 3 (spectrum maps, 100 seeds + n=1 anchor): PASS");
}

#[test]
fn acceptance_4_supermodularity() {
    let mut rng = rng(104);
    let directional = [-1.0, -0.5, 0.25, 0.5, 0.75, 1.5, 2.0];
    for &p in &directional {
        for _ in 0..200 {
            let n = rng.gen_range(3..=8);
            let l = random_connected(n, 0.5, &mut rng);
            let a = grounded_laplacian(&l, 1).unwrap();
            let m = a.nrows();
            let j = NodeSet::new((1..=m).filter(|_| rng.gen::<bool>()).collect()).unwrap();
            let k = NodeSet::new((1..=m).filter(|_| rng.gen::<bool>()).collect()).unwrap();
            let check = check_trace_power_supermodularity(&a, &j, &k, p).unwrap();
            assert!(check.holds, "violated at p={p} J={j:?} K={k:?}");
        }
    }
    // Modularity at p = 1.
    for _ in 0..200 {
        let n = rng.gen_range(3..=8);
        let l = random_connected(n, 0.5, &mut rng);
        let a = grounded_laplacian(&l, 1).unwrap();
        let m = a.nrows();
        let j = NodeSet::new((1..=m).filter(|_| rng.gen::<bool>()).collect()).unwrap();
        let k = NodeSet::new((1..=m).filter(|_| rng.gen::<bool>()).collect()).unwrap();
        let check = check_trace_power_supermodularity(&a, &j, &k, 1.0).unwrap();
        assert!((check.lhs - check.rhs).abs() <= 1e-10);
    }
    // The worked 2x2 instance.
    let a = array![[2.0, -1.0], [-1.0, 1.0]];
    let check = check_trace_power_supermodularity(
        &a,
        &NodeSet::new(vec![1]).unwrap(),
        &NodeSet::new(vec![2]).unwrap(),
        -1.0,
    )
    .unwrap();
    assert!((check.lhs - 1.5).abs() < 1e-12 && (check.rhs - 3.0).abs() < 1e-12);
    println!("acceptance 4 (trace-power supermodularity, 200 instances x 7 exponents + modularity): PASS");
}

#[test]
fn acceptance_5_gramian_bounds() {
    let mut rng = rng(105);
    for _ in 0..100 {
        let n = rng.gen_range(2..=10);
        let l = random_connected(n, 0.5, &mut rng);
        assert!(bound_w1(&l, 1).unwrap().slack >= -1e-9);
        assert!(bound_w2(&l, 1).unwrap().slack >= -1e-9);
        for i in 1..=n {
            assert!(bound_single_leaf(&l, i, 1).unwrap().slack >= -1e-9);
            assert!(bound_single_cluster(&l, i, 1).unwrap().slack >= -1e-9);
        }
    }
    // n = 1 anchor: the fixed internal cluster block contributes exactly 4.
    let block = array![[1.0, 0.0, 0.0], [0.0, 2.0, -1.0], [0.0, -1.0, 1.0]];
    assert!((trace_power(&block, -1.0).unwrap() - 4.0).abs() <= 1e-10);
    let single = Laplacian::from_edge_list(&[], 1).unwrap();
    let report = bound_single_cluster(&single, 1, 1).unwrap();
    assert!((report.two_trace_p - 4.0).abs() <= 1e-10);
    println!("acceptance 5 (Gramian trace bounds, 100 seeds + n=1 anchor): PASS");
}

#[test]
fn acceptance_6_optimizer_dominance() {
    let start = Instant::now();
    let seed = seed4();
    for cluster in [ClusterKind::Leaf, ClusterKind::Path2] {
        let exhaustive = grow(&seed, Method::Exhaustive, cluster, 9, 0, 1).unwrap();
        let relaxation = grow(&seed, Method::Relaxation, cluster, 9, 0, 1).unwrap();
        let heuristic = grow(&seed, Method::Heuristic, cluster, 9, 0, 1).unwrap();
        let mut relax_current = seed.clone();
        for k in 0..9 {
            let ex = exhaustive.steps[k].lambda2;
            let he = heuristic.steps[k].lambda2;
            let re = relaxation.steps[k].lambda2;
            assert!(ex >= he - 1e-9, "{cluster} iter {k}: exhaustive {ex} < heuristic {he}");
            assert!(ex >= re - 1e-9, "{cluster} iter {k}: exhaustive {ex} < relaxation {re}");
            // The relaxed objective upper-bounds the integer optimum of the
            // graph the relaxation run actually optimizes at this step.
            let integer_opt = match cluster {
                ClusterKind::Leaf => exhaustive_leaf(&relax_current).unwrap().1,
                ClusterKind::Path2 => exhaustive_cluster(&relax_current).unwrap().1,
            };
            let relaxed = relaxation.steps[k].relaxed_value.unwrap();
            assert!(
                relaxed >= integer_opt - 1e-6,
                "{cluster} iter {k}: relaxed {relaxed} < integer optimum {integer_opt}"
            );
            let node = relaxation.steps[k].chosen_node;
            relax_current = match cluster {
                ClusterKind::Leaf => relax_current.attach_leaf_at(node).unwrap(),
                ClusterKind::Path2 => relax_current.attach_path_cluster_at(node).unwrap(),
            };
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 120, "took {elapsed:?}, budget 120 s");
    println!(
        "acceptance 6 (optimizer dominance, 9-iteration leaf and path2 runs, {:.1?}): PASS",
        elapsed
    );
}

#[test]
fn acceptance_7_supergradient_finite_differences() {
    let mut rng = rng(107);
    let mut checked = 0;
    while checked < 50 {
        let n = rng.gen_range(3..=6);
        let l = random_connected(n, 0.6, &mut rng);
        let problem = if rng.gen::<bool>() {
            RelaxationProblem::leaf(&l)
        } else {
            RelaxationProblem::cluster(&l)
        };
        let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
        let total: f64 = x.iter().sum();
        x.iter_mut().for_each(|v| *v /= total);
        // Exclude near-degenerate lambda2 (the derivative is not classical
        // there).
        let eig = eig_sym(&problem.laplacian_of(&x)).unwrap();
        if eig.values[2] - eig.values[1] < 1e-5 || eig.values[1] < 1e-5 {
            continue;
        }
        let (_, g) = problem.evaluate(&x).unwrap();
        let dir = rng.gen_range(0..n);
        let h = 1e-6;
        let lambda2_at = |sign: f64| -> f64 {
            let xs: Vec<f64> = x
                .iter()
                .enumerate()
                .map(|(l2, &v)| {
                    let d = if l2 == dir { 1.0 - v } else { -v };
                    v + sign * h * d
                })
                .collect();
            eig_sym(&problem.laplacian_of(&xs)).unwrap().values[1]
        };
        let fd = (lambda2_at(1.0) - lambda2_at(-1.0)) / (2.0 * h);
        let predicted: f64 = g
            .iter()
            .enumerate()
            .map(|(l2, &gl)| gl * (if l2 == dir { 1.0 - x[l2] } else { -x[l2] }))
            .sum();
        let denom = fd.abs().max(1e-6);
        assert!(
            (fd - predicted).abs() / denom <= 1e-4,
            "point {checked}: fd {fd} vs prediction {predicted}"
        );
        checked += 1;
    }
    println!("acceptance 7 (supergradient vs finite differences, 50 points): PASS");
}

#[test]
fn acceptance_8_grow_determinism() {
    let tmp = tempfile::tempdir().unwrap();
    let seed_path = tmp.path().join("seed.txt");
    std::fs::write(&seed_path, "1 2\n1 3\n2 3\n3 4\n").unwrap();
    let mut csvs = Vec::new();
    for dir in ["run1", "run2"] {
        let out = tmp.path().join(dir);
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_netgrow"))
            .args(["grow", "--method", "all", "--cluster", "leaf"])
            .arg("--seed")
            .arg(&seed_path)
            .args(["--iterations", "5", "--rng-seed", "42"])
            .arg("--out")
            .arg(&out)
            .status()
            .expect("binary runs");
        assert!(status.success());
        csvs.push(std::fs::read(out.join("trajectory.csv")).unwrap());
    }
    assert_eq!(csvs[0], csvs[1], "trajectory.csv must be byte-identical");
    println!("acceptance 8 (cmd_grow determinism, byte-identical CSV): PASS");
}
