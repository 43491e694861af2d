//! Acceptance suite: one PASS/FAIL line per criterion, with timings.
//!
//! Runs without the libtest harness so that the lines are always printed.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use kirillov::lie::law::{candidate_charts, compare_with_reference, derive_group_law, group_inverse, group_multiply};
use kirillov::lie::linalg::Subspace;
use kirillov::lie::{bch_product, coadjoint, coadjoint_f64, validate_algebra, PolynomialMap};
use kirillov::ncdl::{
    multiplicativity_defect, ncdl_report, schedule_generic, sigma_gamma0, sigma_generic, Case, CoherentFrame,
    GenericBoxes, RandomField, ReportConfig,
};
use kirillov::ncdl::frame::S0_SPACING;
use kirillov::orbits::{classify_layer, is_subordinate, orbit_dim, orbit_invariants, stabilizer, vergne_polarization, Layer};
use kirillov::reps::{induced_kernel, kernel_centers, Atom, Factor, Grid, TestFunction, C64};
use kirillov::scalar::{int, rat, Rational};
use kirillov::topology::{verify_limit, OrbitSequence, Reading};
use kirillov::Algebra;
use nalgebra::DVector;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20240607;
const LIMIT_TOL: f64 = 1e-3;
const HERMITIAN_TOL: f64 = 1e-12;
const NORM_SLACK: f64 = 1e-3;
const ORBIT_NORM_TOL: f64 = 1e-3;
const BOUND_SLACK: f64 = 1e-3;
const FRAME_TOL: f64 = 1e-3;
const GRID_N: usize = 48;
const WINDOW: f64 = 6.0;
const KS: [usize; 4] = [4, 8, 16, 32];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

fn rational(r: &mut ChaCha8Rng) -> Rational {
    rat(r.gen_range(-9..=9), r.gen_range(1..=5))
}

fn rational_vec(r: &mut ChaCha8Rng) -> Vec<Rational> {
    (0..7).map(|_| rational(r)).collect()
}

fn nonzero(r: &mut ChaCha8Rng) -> Rational {
    loop {
        let q = rational(r);
        if !q.is_zero() {
            return q;
        }
    }
}

fn functional_in(layer: Layer, r: &mut ChaCha8Rng) -> Vec<Rational> {
    let mut f = rational_vec(r);
    match layer {
        Layer::Gamma2 => f[6] = nonzero(r),
        Layer::Gamma1 => {
            f[4] = nonzero(r);
            f[6] = Rational::zero();
        }
        Layer::Gamma0 => f[4..].iter_mut().for_each(|x| *x = Rational::zero()),
    }
    f
}

fn algebra() -> Outcome {
    let alg = Algebra::n7();
    let rep = validate_algebra(alg.sc());
    let pass = rep.antisymmetric && rep.jacobi && rep.nilpotency_step == Some(4) && alg.step() == 4;
    outcome(pass, format!("antisymmetric {}, jacobi {}, step {:?}", rep.antisymmetric, rep.jacobi, rep.nilpotency_step))
}

fn bch_law() -> Outcome {
    let alg = Algebra::n7();
    let law = derive_group_law(&alg);
    let mut r = rng(2);
    let mut assoc = 0;
    let mut matches = 0;
    for _ in 0..100 {
        let (x, y, z) = (rational_vec(&mut r), rational_vec(&mut r), rational_vec(&mut r));
        let xy = bch_product(&alg, &x, &y).unwrap();
        let l = bch_product(&alg, &xy, &z).unwrap();
        let rr = bch_product(&alg, &x, &bch_product(&alg, &y, &z).unwrap()).unwrap();
        assoc += (l == rr) as usize;
        matches += (group_multiply(&law, &x, &y).unwrap() == xy) as usize;
    }
    let cmp = compare_with_reference(&alg, &PolynomialMap::n7_printed_law());
    println!("    printed law vs first-kind BCH: {} differing monomials", cmp.derived_vs_reference.count());
    println!("    closest chart {}: {} differing monomials", cmp.best_chart, cmp.best_chart_diff.count());
    for line in cmp.best_chart_diff.to_string().lines() {
        println!("      {line}");
    }
    outcome(assoc == 100 && matches == 100, format!("associative {assoc}/100, law = bch_product {matches}/100"))
}

fn coadjoint_action() -> Outcome {
    let alg = Algebra::n7();
    let mut r = rng(3);
    let mut hom = 0;
    for _ in 0..50 {
        let (g, h, f) = (rational_vec(&mut r), rational_vec(&mut r), rational_vec(&mut r));
        let gh = bch_product(&alg, &g, &h).unwrap();
        let lhs = coadjoint(&alg, &gh, &f).unwrap();
        let rhs = coadjoint(&alg, &g, &coadjoint(&alg, &h, &f).unwrap()).unwrap();
        hom += (lhs == rhs) as usize;
    }
    let printed = PolynomialMap::n7_printed_coadjoint();
    let split = candidate_charts(7)
        .into_iter()
        .find(|c| c.label() == "exp(x1X1)*exp(x2X2+x3X3+x4X4+x5X5+x6X6+x7X7)")
        .expect("split chart is a candidate")
        .coadjoint(&alg, true);
    let (mut split_ok, mut first_kind_ok) = (0, 0);
    for _ in 0..20 {
        let (g, f) = (rational_vec(&mut r), rational_vec(&mut r));
        let p = printed.eval(&g, &f).unwrap();
        split_ok += (split.eval(&g, &f).unwrap() == p) as usize;
        first_kind_ok += (coadjoint(&alg, &group_inverse(&g), &f).unwrap() == p) as usize;
    }
    println!("    printed Ad* at 20 points: split-chart f o Ad(g) {split_ok}/20, first-kind Ad*(g^-1) {first_kind_ok}/20");
    outcome(hom == 50 && split_ok == 20, format!("homomorphism {hom}/50, printed Ad* reproduced {split_ok}/20"))
}

fn orbit_geometry() -> Outcome {
    let alg = Algebra::n7();
    let mut r = rng(4);
    let p37 = Subspace::coordinate(7, &[2, 3, 4, 5, 6]);
    let mut bad = Vec::new();
    for layer in [Layer::Gamma2, Layer::Gamma1, Layer::Gamma0] {
        for _ in 0..50 {
            let f = functional_in(layer, &mut r);
            let s = stabilizer(&alg, &f).unwrap();
            let d = orbit_dim(&alg, &f).unwrap();
            let p = vergne_polarization(&alg, &f, None).unwrap();
            let ok = classify_layer(&f).unwrap() == layer
                && d + s.dim() == 7
                && is_subordinate(&alg, &f, &p)
                && (layer == Layer::Gamma0 || p.dim() == 5);
            if !ok {
                bad.push(format!("{layer:?}"));
            }
        }
    }
    let cases = [
        [0, 0, 0, 1, 0, 0, 1],
        [0, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 1, 0],
    ];
    let spans = cases
        .iter()
        .filter(|c| {
            let f: Vec<Rational> = c.iter().map(|&n| int(n)).collect();
            vergne_polarization(&alg, &f, None).unwrap() == p37
        })
        .count();
    outcome(bad.is_empty() && spans == 3, format!("150 functionals, {} failures, printed span {spans}/3", bad.len()))
}

fn invariants() -> Outcome {
    let alg = Algebra::n7();
    let mut r = rng(5);
    let mut ok = 0;
    for _ in 0..50 {
        let f = functional_in(Layer::Gamma2, &mut r);
        let g = rational_vec(&mut r);
        let h = coadjoint(&alg, &g, &f).unwrap();
        ok += (orbit_invariants(&h) == orbit_invariants(&f)) as usize;
    }
    outcome(ok == 50, format!("I1, I2 preserved {ok}/50"))
}

fn limit_sets() -> Outcome {
    let seq = OrbitSequence::gamma2("0", "k", "1/k", 1000).unwrap();
    let mut r = rng(6);
    // verify_limit compares max_k |f_k - f|_inf / (1 + |f|_inf) with the
    // tolerance; the raw distance at k = K is exactly 1/K here
    let mut on = 0;
    let mut worst = 0.0f64;
    let mut worst_raw = 0.0f64;
    for _ in 0..5 {
        let a: f64 = r.gen_range(0.25..4.0) * if r.gen_bool(0.5) { 1.0 } else { -1.0 };
        let c = [r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), 0.0, 0.0, a, -1.0 / a, 0.0];
        if let Ok(rep) = verify_limit(&seq, &c, LIMIT_TOL, Reading::Stated) {
            worst = worst.max(rep.scaled_distance);
            worst_raw = worst_raw.max(rep.max_distance);
            on += (rep.pass && rep.scaled_distance < LIMIT_TOL) as usize;
        }
    }
    let mut off = 0;
    for _ in 0..5 {
        let c = [0.0, 0.0, 0.0, 0.0, r.gen_range(0.25..4.0), r.gen_range(0.25..4.0), 0.0];
        off += verify_limit(&seq, &c, LIMIT_TOL, Reading::Stated).map_or(true, |rep| !rep.pass) as usize;
    }
    let chars = OrbitSequence::gamma1("1/k", "1/k", 1000).unwrap();
    let mut reach = 0;
    let mut worst_char = 0.0f64;
    let mut worst_char_raw = 0.0f64;
    for _ in 0..5 {
        let c = [r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0), 0.0, 0.0, 0.0];
        if let Ok(rep) = verify_limit(&chars, &c, LIMIT_TOL, Reading::Stated) {
            worst_char = worst_char.max(rep.scaled_distance);
            worst_char_raw = worst_char_raw.max(rep.max_distance);
            reach += (rep.pass && rep.scaled_distance < LIMIT_TOL) as usize;
        }
    }
    outcome(
        on == 5 && off == 5 && reach == 5,
        format!(
            "hyperbola {on}/5 (distance {worst:.2e}, raw {worst_raw:.2e}), rejected {off}/5, characters {reach}/5 (distance {worst_char:.2e}, raw {worst_char_raw:.2e})"
        ),
    )
}

fn skew_atom() -> Atom {
    let f = |poly: Vec<f64>, a: f64, b: f64| Factor::new(poly, a, b).unwrap();
    Atom::new(
        C64::new(0.8, -0.3),
        vec![
            f(vec![1.0], PI, 0.2),
            f(vec![0.5, 1.0], 1.2 * PI, -0.1),
            f(vec![1.0, -0.5], PI, 0.3),
            f(vec![1.0], 0.9 * PI, -0.2),
            f(vec![0.2, 1.0], PI, 0.1),
            f(vec![1.0], 1.1 * PI, 0.0),
            f(vec![1.0, 0.3], PI, -0.25),
        ],
    )
    .unwrap()
}

fn grid_at(f: &[f64]) -> Grid {
    let cs = kernel_centers(f, WINDOW).unwrap();
    let m = cs.len() as f64;
    let c = [cs.iter().map(|c| c[0]).sum::<f64>() / m, cs.iter().map(|c| c[1]).sum::<f64>() / m];
    Grid::plane(c, WINDOW, GRID_N).unwrap()
}

fn representations() -> Outcome {
    let alg = Algebra::n7();
    let herm = TestFunction::from_atom(skew_atom()).hermitian_part();
    let tests = [TestFunction::gaussian(1.0, 1.0), TestFunction::from_atom(skew_atom()), herm.clone()];
    let fs: [[f64; 7]; 3] =
        [[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 0.2, -0.3, 0.6, 0.8, 0.0], [0.0, 0.0, 0.2, 0.1, 0.3, 0.2, 0.5]];
    let mut worst_herm = 0.0f64;
    let mut worst_ratio = 0.0f64;
    for f in &fs {
        let grid = grid_at(f);
        let k = induced_kernel(&herm, f, &grid).unwrap();
        worst_herm = worst_herm.max(k.hermiticity_defect() / k.max_abs());
        for t in &tests {
            let n = induced_kernel(t, f, &grid).unwrap().norm();
            worst_ratio = worst_ratio.max(n / t.l1_bound());
        }
    }
    let pairs = [
        ([0.0, 0.0, 0.5, -0.5, 0.0, 0.0, 1.0], [0.7, -0.4, 0.3, 0.1, -0.6, 0.2, 0.5]),
        ([0.0, 0.0, 0.0, 0.0, 1.0, 0.5, 0.0], [-0.8, 1.1, 0.4, -0.3, 0.2, 0.7, -0.1]),
    ];
    let mut worst_orbit = 0.0f64;
    for (f, g) in pairs {
        let fg = coadjoint_f64(&alg, &g, &f);
        let a = induced_kernel(&herm, &f, &grid_at(&f)).unwrap().norm();
        let b = induced_kernel(&herm, &fg, &grid_at(&fg)).unwrap().norm();
        worst_orbit = worst_orbit.max((a - b).abs() / a);
    }
    outcome(
        worst_herm <= HERMITIAN_TOL && worst_ratio <= 1.0 + NORM_SLACK && worst_orbit <= ORBIT_NORM_TOL,
        format!(
            "hermiticity {worst_herm:.1e} |K|, max |pi|/|F|_1 {worst_ratio:.4}, same-orbit spread {worst_orbit:.1e}"
        ),
    )
}

fn field_bounds() -> Outcome {
    let seq = OrbitSequence::gamma2("0", "k^2", "1/k^2", 200).unwrap();
    let step = schedule_generic(&seq, 1.0, None, &[16]).unwrap().remove(0);
    let c = GenericBoxes::new(&step).center((1.0 / step.eps).round() as i64);
    let grid = Grid::plane(c, 6.0, 20).unwrap();
    let mut worst_generic = f64::NEG_INFINITY;
    for seed in 0..10 {
        let field = RandomField { seed };
        let s = sigma_generic(&field, &step, &grid, 0.0).unwrap();
        worst_generic = worst_generic.max(s.op.norm() - 3f64.sqrt() * s.sup_field_norm(&field));
    }
    let s_grid = Grid::plane([0.0, 0.0], 3.0, 10).unwrap();
    let frame = CoherentFrame::new(0.8, 0.6, [0.2, -0.1], None, &s_grid, 0.5).unwrap();
    let mut r = rng(8);
    let mut worst_gamma0 = f64::NEG_INFINITY;
    for _ in 0..10 {
        let a = C64::from_polar(r.gen_range(0.2..2.0), r.gen_range(0.0..2.0 * PI));
        let b: f64 = r.gen_range(0.1..2.0);
        let c: [f64; 4] = std::array::from_fn(|_| r.gen_range(-1.0..1.0));
        let w: [f64; 4] = std::array::from_fn(|_| r.gen_range(-2.0..2.0));
        let h = move |f: [f64; 4]| {
            let d2: f64 = (0..4).map(|i| (f[i] - c[i]).powi(2)).sum();
            let ph: f64 = (0..4).map(|i| w[i] * f[i]).sum();
            a * (-b * d2).exp() * C64::from_polar(1.0, ph)
        };
        let op = sigma_gamma0(&h, &frame);
        worst_gamma0 = worst_gamma0.max(op.norm() - a.norm());
    }
    outcome(
        worst_generic <= BOUND_SLACK && worst_gamma0 <= BOUND_SLACK,
        format!("max |sigma| - sqrt3 sup {worst_generic:.2e}, max |sigma(h)| - |h|_inf {worst_gamma0:.2e}"),
    )
}

fn print_ladder(name: &str, rows: &[(usize, f64, f64)]) {
    for (k, pi, diff) in rows {
        println!("    {name:<10} k = {k:>2}  |pi_k| = {pi:.4e}  diff = {diff:.4e}");
    }
}

fn ncdl_ladders() -> Outcome {
    let f = TestFunction::gaussian(1.0, 1.0);
    let cases = [
        (Case::Generic { c1: 1.0 }, OrbitSequence::gamma2("0", "k^2", "1/k^2", 200).unwrap()),
        (Case::Degenerate, OrbitSequence::gamma2("k^3/2", "k", "1/k^3", 64).unwrap()),
        (Case::Gamma0, OrbitSequence::gamma1("1/(4*k)", "1/(4*k)", 64).unwrap()),
    ];
    let mut verdicts = Vec::new();
    for (case, seq) in cases {
        let cfg = ReportConfig::new(case, seq, KS.to_vec(), GRID_N, WINDOW);
        match ncdl_report(&f, &cfg) {
            Ok(rep) => {
                let rows: Vec<_> = rep.rows.iter().map(|r| (r.k, r.norm_pi, r.diff)).collect();
                print_ladder(case.name(), &rows);
                let ok = match case {
                    Case::Gamma0 => rep.decreasing,
                    _ => rep.pass,
                };
                verdicts.push((case.name(), ok, rep.slope));
            }
            Err(e) => {
                println!("    {}: {e}", case.name());
                verdicts.push((case.name(), false, f64::NAN));
            }
        }
    }
    let pass = verdicts.iter().all(|v| v.1);
    let detail = verdicts.iter().map(|(n, ok, s)| format!("{n} {} (slope {s:.2})", if *ok { "ok" } else { "FAIL" })).collect::<Vec<_>>();
    outcome(pass, detail.join(", "))
}

fn frame_resolution() -> Outcome {
    let grid = Grid::plane([0.0, 0.0], 3.0, 24).unwrap();
    let mut r = rng(10);
    let bumps: Vec<([f64; 2], [f64; 2], C64)> = (0..4)
        .map(|_| {
            let c = [r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)];
            let w = [r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)];
            (c, w, C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
        })
        .collect();
    let xi = DVector::from_iterator(
        grid.len(),
        grid.points2().into_iter().map(|s| {
            bumps
                .iter()
                .map(|(c, w, a)| {
                    let d2 = (s[0] - c[0]).powi(2) + (s[1] - c[1]).powi(2);
                    a * (-PI * d2).exp() * C64::from_polar(1.0, 2.0 * PI * (s[0] * w[0] + s[1] * w[1]))
                })
                .sum::<C64>()
        }),
    );
    let spacings = [4.0 * S0_SPACING, 2.0 * S0_SPACING, S0_SPACING];
    let errs: Vec<f64> = spacings
        .iter()
        .map(|&sp| CoherentFrame::new(0.7, 0.4, [0.0, 0.0], None, &grid, sp).unwrap().resolution_error(&xi))
        .collect();
    let improves = errs.windows(2).all(|w| w[1] <= 0.5 * w[0]);
    let final_err = errs[2];
    outcome(
        final_err < FRAME_TOL && improves,
        format!("errors at spacings {spacings:?}: {}", errs.iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>().join(", ")),
    )
}

fn multiplicativity() -> Outcome {
    let f = TestFunction::gaussian(1.0, 1.0);
    let g = TestFunction::gaussian(2.0, 0.5);
    let seq = OrbitSequence::gamma2("k^3/2", "k", "1/k^3", 64).unwrap();
    let cfg = ReportConfig::new(Case::Degenerate, seq, KS.to_vec(), GRID_N, WINDOW);
    match multiplicativity_defect(&f, &g, &cfg) {
        Ok(d) => {
            let decreasing = d.windows(2).all(|w| w[1].1 < w[0].1);
            let s = d.iter().map(|(k, v)| format!("{k}: {v:.2e}")).collect::<Vec<_>>().join(", ");
            outcome(decreasing, format!("defects {s}"))
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("algebra", Duration::from_secs(1), algebra),
        ("bch law", Duration::from_secs(10), bch_law),
        ("coadjoint action", Duration::from_secs(5), coadjoint_action),
        ("orbit geometry", Duration::from_secs(5), orbit_geometry),
        ("orbit invariants", Duration::from_secs(5), invariants),
        ("limit sets", Duration::from_secs(30), limit_sets),
        ("representations", Duration::from_secs(120), representations),
        ("sigma bounds", Duration::from_secs(60), field_bounds),
        ("ncdl convergence", Duration::from_secs(900), ncdl_ladders),
        ("coherent frame", Duration::from_secs(10), frame_resolution),
        ("multiplicativity", Duration::from_secs(900), multiplicativity),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let out = run();
        let dt = t0.elapsed();
        let pass = out.pass && dt <= *budget;
        failed += !pass as usize;
        println!(
            "{} {:>2} {name}: {} [{:.2} s, budget {} s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            out.detail,
            dt.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
