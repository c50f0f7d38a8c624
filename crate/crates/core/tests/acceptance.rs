//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line
//! with its measured values and runtime; the binary exits non-zero if any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polyvem_core::datasets::{gen_parametric, parametric_polygon, Generator, ParamClass, DEFAULT_SEED, SWEEP_STEPS};
use polyvem_core::geometry::{self, Point};
use polyvem_core::indicator::rho_mesh;
use polyvem_core::linalg::{cond1_estimate, preconditioned_cond1, CsrMatrix, Ic0, SolverKind, SpdSolver};
use polyvem_core::metrics::{aggregate, kernel_area, max_inscribed_circle, mesh_metrics, min_enclosing_circle, polygon_metrics, Aggregation, MetricId};
use polyvem_core::perf::{analyze, element_diagnostics, ground_truth, log_log_slope, patch_problem, AnalysisOptions, TestCase};
use polyvem_core::stats::{average_ranks, spearman};
use polyvem_core::vem::{build_locals, Stabilization, VemConfig};
use polyvem_core::Mesh;

type Outcome = (bool, String);

const QUICK: AnalysisOptions = AnalysisOptions {
    conditioning: false,
    diagnostics: false,
};

fn config(k: usize) -> VemConfig {
    VemConfig { k, ..Default::default() }
}

/// Least-squares slopes of the energy and L2 errors against the mean
/// element diameter, the length scale of the error constant P6.
fn rates(g: Generator, k: usize, levels: std::ops::RangeInclusive<usize>) -> (f64, f64, usize) {
    let problem = ground_truth(TestCase::Test1);
    let (mut h, mut e1, mut e2, mut dofs) = (vec![], vec![], vec![], 0);
    for n in levels {
        let mesh = g.generate(n, DEFAULT_SEED).unwrap();
        let r = analyze(&mesh, config(k), &problem, QUICK).unwrap();
        h.push(r.h_av);
        e1.push(r.rel_h1_energy);
        e2.push(r.rel_l2);
        dofs = dofs.max(r.dof_count);
    }
    (log_log_slope(&h, &e1).unwrap(), log_log_slope(&h, &e2).unwrap(), dofs)
}

fn level_zero_meshes() -> Vec<(String, Mesh)> {
    Generator::REFERENCE
        .into_iter()
        .chain(ParamClass::ALL.map(Generator::Parametric))
        .map(|g| (g.to_string(), g.generate(0, DEFAULT_SEED).unwrap()))
        .collect()
}

fn patch_test() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    for (_, mesh) in level_zero_meshes() {
        for k in 1..=3 {
            for stabilization in [Stabilization::DRecipe, Stabilization::DofiDofi, Stabilization::Trace] {
                let cfg = VemConfig { k, stabilization, ..Default::default() };
                let r = analyze(&mesh, cfg, &patch_problem(k), QUICK).unwrap();
                worst = worst.max(r.rel_h1_energy).max(r.rel_linf_dofs).max(r.rel_l2);
                runs += 1;
            }
        }
    }
    (worst <= 1e-10, format!("{runs} runs, max(P1, P2, P3) = {worst:.2e} (<= 1e-10)"))
}

fn triangle_rates() -> Outcome {
    let mut ok = true;
    let mut parts = vec![];
    for (k, levels) in [(1, 1..=4), (2, 1..=4), (3, 0..=3)] {
        let (s1, s2, dofs) = rates(Generator::Triangle, k, levels);
        ok &= (s1 - k as f64).abs() <= 0.2 && (s2 - (k + 1) as f64).abs() <= 0.25 && dofs <= 20_000;
        parts.push(format!("k={k}: H1 {s1:.3}, L2 {s2:.3}, max DOFs {dofs}"));
    }
    (ok, parts.join("; "))
}

fn violating_rates() -> Outcome {
    let mut ok = true;
    let mut parts = vec![];
    for k in 1..=2 {
        let (s1, _, _) = rates(Generator::Jenga, k, 1..=4);
        ok &= (s1 - k as f64).abs() <= 0.3;
        parts.push(format!("jenga k={k}: H1 {s1:.3}"));
    }
    let (s1, _, _) = rates(Generator::Ulike, 1, 1..=4);
    ok &= s1 < 1.0 - 0.3;
    parts.push(format!("ulike k=1: H1 {s1:.3} (< 0.7)"));
    (ok, parts.join("; "))
}

fn conditioning_gap() -> Outcome {
    let level = 2;
    let cond = |g: Generator| {
        let mesh = g.generate(level, DEFAULT_SEED).unwrap();
        element_diagnostics(&build_locals(&mesh, 3).unwrap()).max_cond_g
    };
    let (single, multiple) = (cond(Generator::Jenga).log10(), cond(Generator::Jenga4).log10());
    (
        multiple - single >= 5.0,
        format!("level {level}, k=3: log10 cond(G) jenga {single:.2}, jenga4 {multiple:.2}, gap {:.2} (>= 5)", multiple - single),
    )
}

fn projector_identities() -> Outcome {
    let (mut nabla, mut zero): (f64, f64) = (0.0, 0.0);
    for (g, top) in [(Generator::Triangle, 4), (Generator::Maze, 3), (Generator::Star, 3)] {
        for n in 0..=top {
            let mesh = g.generate(n, DEFAULT_SEED).unwrap();
            for k in 1..=3 {
                let d = element_diagnostics(&build_locals(&mesh, k).unwrap());
                nabla = nabla.max(d.max_pi_nabla_discrepancy);
                zero = zero.max(d.max_pi0_discrepancy);
            }
        }
    }
    (
        nabla <= 1e-8 && zero <= 1e-7,
        format!("max |Pi_nabla D - I| = {nabla:.2e} (<= 1e-8), max |Pi_0 D - I| = {zero:.2e} (<= 1e-7)"),
    )
}

fn indicator_ordering() -> Outcome {
    let level = 2;
    let rho = |g: Generator| rho_mesh(&g.generate(level, DEFAULT_SEED).unwrap()).unwrap();
    let all: Vec<(Generator, f64)> = Generator::REFERENCE.into_iter().map(|g| (g, rho(g))).collect();
    let get = |g: Generator| all.iter().find(|x| x.0 == g).unwrap().1;
    let chain = [Generator::Triangle, Generator::Jenga, Generator::Slices, Generator::Ulike].map(get);
    let ordered = chain.windows(2).all(|w| w[0] > w[1]);
    let u4 = get(Generator::Ulike4);
    let global_min = all.iter().all(|&(g, r)| g == Generator::Ulike4 || r > u4);
    let listing: Vec<String> = all.iter().map(|(g, r)| format!("{g} {r:.4}")).collect();
    (ordered && global_min, format!("level {level}: {}", listing.join(", ")))
}

/// Random simple polygon with 3..=10 vertices, star-shaped with respect to
/// the origin by construction.
fn random_polygon(rng: &mut ChaCha8Rng) -> Vec<Point> {
    let n = rng.gen_range(3..=10);
    let mut angles: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * std::f64::consts::TAU).collect();
    angles.sort_by(f64::total_cmp);
    angles
        .into_iter()
        .map(|a| {
            let r = rng.gen_range(0.3..1.0);
            Point::new(r * a.cos(), r * a.sin())
        })
        .collect()
}

/// Counts midpoints of a fine grid over the bounding box that are inside
/// the polygon and on the inner side of every edge line (i.e. see the
/// whole boundary).
fn visibility_area(poly: &[Point], cells: usize) -> f64 {
    let (lo, hi) = geometry::bounding_box(poly);
    let (dx, dy) = ((hi.x - lo.x) / cells as f64, (hi.y - lo.y) / cells as f64);
    let n = poly.len();
    let mut hits = 0usize;
    for i in 0..cells {
        for j in 0..cells {
            let p = Point::new(lo.x + (i as f64 + 0.5) * dx, lo.y + (j as f64 + 0.5) * dy);
            if (0..n).all(|e| geometry::orient(poly[e], poly[(e + 1) % n], p) >= 0.0) {
                hits += 1;
            }
        }
    }
    hits as f64 * dx * dy
}

/// Smallest circle through two or three of the points containing them all.
fn enclosing_radius_brute_force(pts: &[Point]) -> f64 {
    let contains = |c: Point, r: f64| pts.iter().all(|p| p.dist(c) <= r * (1.0 + 1e-12) + 1e-15);
    let mut best = f64::INFINITY;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let c = (pts[i] + pts[j]) * 0.5;
            let r = pts[i].dist(c);
            if r < best && contains(c, r) {
                best = r;
            }
            for k in j + 1..pts.len() {
                let (a, b, q) = (pts[i], pts[j], pts[k]);
                let d = 2.0 * (a.x * (b.y - q.y) + b.x * (q.y - a.y) + q.x * (a.y - b.y));
                if d.abs() < 1e-14 {
                    continue;
                }
                let (a2, b2, q2) = (a.norm2(), b.norm2(), q.norm2());
                let c = Point::new(
                    (a2 * (b.y - q.y) + b2 * (q.y - a.y) + q2 * (a.y - b.y)) / d,
                    (a2 * (q.x - b.x) + b2 * (a.x - q.x) + q2 * (b.x - a.x)) / d,
                );
                let r = a.dist(c);
                if r < best && contains(c, r) {
                    best = r;
                }
            }
        }
    }
    best
}

fn geometry_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut worst_ke, mut worst_cc): (f64, f64) = (0.0, 0.0);
    let mut empty = 0;
    for _ in 0..100 {
        let poly = random_polygon(&mut rng);
        let ke = kernel_area(&poly);
        let mc = visibility_area(&poly, 1000);
        if mc == 0.0 && ke == 0.0 {
            empty += 1;
        } else {
            worst_ke = worst_ke.max((ke - mc).abs() / mc.max(ke));
        }
        let cc = min_enclosing_circle(&poly).radius;
        worst_cc = worst_cc.max((cc - enclosing_radius_brute_force(&poly)).abs());
    }
    let square = [Point::new(0., 0.), Point::new(1., 0.), Point::new(1., 1.), Point::new(0., 1.)];
    let ic = max_inscribed_circle(&square).radius;
    (
        worst_ke <= 1e-2 && worst_cc <= 1e-12 && (ic - 0.5).abs() <= 1e-6,
        format!("kernel vs visibility rel {worst_ke:.2e} ({empty} empty kernels), CC vs brute force {worst_cc:.1e}, IC(square) {ic:.8}"),
    )
}

fn scale_invariance() -> Outcome {
    let ids = [MetricId::Cr, MetricId::Kar, MetricId::Apr, MetricId::Er, MetricId::Ma, MetricId::Mxa, MetricId::Ns, MetricId::Sr];
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for c in ParamClass::ALL {
        for i in 0..=SWEEP_STEPS {
            let poly = parametric_polygon(c, i as f64 / SWEEP_STEPS as f64).unwrap();
            let big: Vec<Point> = poly.iter().map(|&p| p * 2.0).collect();
            let (a, b) = (polygon_metrics(&poly).unwrap(), polygon_metrics(&big).unwrap());
            for id in ids {
                let (x, y) = (a.get(id), b.get(id));
                let scale = x.abs().max(y.abs());
                if scale > 0.0 {
                    worst = worst.max((x - y).abs() / scale);
                }
            }
            count += 1;
        }
    }
    (worst <= 1e-10, format!("{count} polygons, max relative change {worst:.2e} (<= 1e-10)"))
}

fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let b = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    &b * b.transpose() + DMatrix::identity(n, n) * (0.01 * n as f64)
}

fn dense_norm1(m: &DMatrix<f64>) -> f64 {
    m.column_iter().map(|c| c.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

fn condition_estimator() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let (mut lower_bound, mut worst_ratio) = (true, f64::INFINITY);
    for _ in 0..20 {
        let n = rng.gen_range(5..=100);
        let dense = random_spd(&mut rng, n);
        let rows: Vec<Vec<f64>> = dense.row_iter().map(|r| r.iter().copied().collect()).collect();
        let a = CsrMatrix::from_dense(&rows);
        let est = cond1_estimate(&a, &SpdSolver::new(&a, SolverKind::Direct, 1e-12).unwrap()).unwrap();
        let exact = dense_norm1(&dense) * dense_norm1(&dense.clone().try_inverse().unwrap());
        lower_bound &= est <= exact * (1.0 + 1e-10);
        worst_ratio = worst_ratio.min(est / exact);
    }
    let id = CsrMatrix::identity(50);
    let id_cond = cond1_estimate(&id, &SpdSolver::new(&id, SolverKind::Direct, 1e-12).unwrap()).unwrap();

    let n = 200;
    let mut t = vec![];
    for i in 0..n {
        t.push((i, i, 2.0));
        if i + 1 < n {
            t.push((i, i + 1, -1.0));
            t.push((i + 1, i, -1.0));
        }
    }
    let lap = CsrMatrix::from_triplets(n, &t);
    let ic = Ic0::factor(&lap).unwrap();
    let solver = SpdSolver::new(&lap, SolverKind::Direct, 1e-12).unwrap();
    let p5 = preconditioned_cond1(&lap, &ic, &solver).unwrap();
    let p4 = cond1_estimate(&lap, &solver).unwrap();
    (
        lower_bound && id_cond == 1.0 && (p5 - 1.0).abs() <= 1e-8 && p5 / p4 < 1e-3,
        format!(
            "20 SPD: lower bound {lower_bound}, min est/exact {worst_ratio:.3}; identity {id_cond}; tridiagonal P5 = {p5:.12}, P8 = {:.2e}",
            p5 / p4
        ),
    )
}

fn spearman_checks() -> Outcome {
    let x = [0.3, 1.2, 2.5, 4.0, 7.7];
    let up: Vec<f64> = x.iter().map(|v| v * v * v).collect();
    let down: Vec<f64> = x.iter().map(|v| (-v).exp()).collect();
    let (a, b) = (spearman(&x, &up).unwrap(), spearman(&x, &down).unwrap());
    // Ranks of [1, 1, 2] are [1.5, 1.5, 3]; against [1, 2, 3] Pearson gives
    // 1.5 / sqrt(1.5 * 2).
    let tie = spearman(&[1., 1., 2.], &[1., 2., 3.]).unwrap();
    let oracle = 1.5 / (1.5f64 * 2.0).sqrt();
    (
        a == 1.0 && b == -1.0 && tie == oracle && average_ranks(&[1., 1., 2.]) == [1.5, 1.5, 3.0],
        format!("monotone {a}, {b}; tie {tie} vs oracle {oracle}"),
    )
}

fn correlation_reproduction() -> Outcome {
    let problem = ground_truth(TestCase::Test1);
    let mut parts = vec![];
    let mut ok = true;
    let mut meshes = vec![];
    for c in ParamClass::ALL {
        for i in 0..=SWEEP_STEPS {
            let mesh = gen_parametric(c, i as f64 / SWEEP_STEPS as f64).unwrap();
            let m = mesh_metrics(&mesh).unwrap();
            let ns: Vec<f64> = m.iter().map(|p| p.ns as f64).collect();
            let sr: Vec<f64> = m.iter().map(|p| p.sr).collect();
            let max_ns = aggregate(&ns, Aggregation::Max, MetricId::Ns).unwrap();
            let min_sr = aggregate(&sr, Aggregation::Min, MetricId::Sr).unwrap();
            meshes.push((mesh, max_ns, min_sr));
        }
    }
    for k in 1..=3 {
        let (mut ns, mut sr, mut p1, mut p6) = (vec![], vec![], vec![], vec![]);
        for (mesh, max_ns, min_sr) in &meshes {
            let r = analyze(mesh, config(k), &problem, QUICK).unwrap();
            ns.push(*max_ns);
            sr.push(*min_sr);
            p1.push(r.rel_h1_energy);
            p6.push(r.err_const);
        }
        let a = spearman(&ns, &p6).unwrap();
        let b = spearman(&sr, &p1).unwrap();
        ok &= a.abs() > 0.5;
        parts.push(format!("k={k}: rho(max NS, P6) {a:.3}, rho(min SR, P1) {b:.3}"));
    }
    (ok, format!("{} meshes; {}", meshes.len(), parts.join("; ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("patch test", patch_test),
        ("convergence rates on triangle", triangle_rates),
        ("robustness on violating datasets", violating_rates),
        ("conditioning blow-up on jenga4", conditioning_gap),
        ("projector identities", projector_identities),
        ("indicator ordering", indicator_ordering),
        ("geometry oracles", geometry_oracles),
        ("metric scale invariance", scale_invariance),
        ("condition estimator", condition_estimator),
        ("spearman", spearman_checks),
        ("correlation study", correlation_reproduction),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            (false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        failures += usize::from(!ok);
        println!(
            "{} criterion {:>2} {name}: {detail} [{:.2?}]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
