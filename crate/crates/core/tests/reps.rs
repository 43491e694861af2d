use std::f64::consts::PI;

use kirillov::lie::coadjoint_f64;
use kirillov::lie::linalg::Subspace;
use kirillov::reps::export::{read_matrix, write_matrix};
use kirillov::reps::kernel::{kernel_block_at, matmul, symbol_block_at};
use kirillov::reps::{
    act, boundary_mass, character_transform, induced_kernel, induced_kernel_symbol, kernel_block, kernel_centers,
    operator_norm, partial_fourier, pi0_sup_norm, power_norm, Atom, Convolution, Factor, Grid, Symbol, TestFunction,
    C64,
};
use kirillov::{Algebra, Error};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const L: f64 = 6.0;
const N: usize = 48;

fn p37() -> Subspace {
    Subspace::coordinate(7, &[2, 3, 4, 5, 6])
}

/// A non-symmetric atom: shifted centers, linear polynomial factors and a
/// complex coefficient.
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

/// Trapezoid nodes on `b +- sqrt(s / a)` with `n` points.
fn nodes(fac: &Factor, s: f64, n: usize) -> (Vec<f64>, f64) {
    let r = (s / fac.a).sqrt();
    let h = 2.0 * r / (n - 1) as f64;
    ((0..n).map(|i| fac.b - r + i as f64 * h).collect(), h)
}

/// `int A(a, y) e^{-2 pi i <q, y>} dy` on a 5-dimensional lattice.
fn lattice_partial(atom: &Atom, a: [f64; 2], q: &[f64; 5]) -> C64 {
    let n = 17;
    let ax: Vec<(Vec<f64>, f64)> = (0..5).map(|i| nodes(&atom.factors[2 + i], 25.0, n)).collect();
    let vol: f64 = ax.iter().map(|(_, h)| h).product();
    let mut s = C64::new(0.0, 0.0);
    let mut idx = [0usize; 5];
    for _ in 0..n.pow(5) {
        let y: [f64; 5] = std::array::from_fn(|i| ax[i].0[idx[i]]);
        let ph: f64 = (0..5).map(|i| q[i] * y[i]).sum();
        s += atom.eval(a, &y) * C64::from_polar(1.0, -2.0 * PI * ph);
        for i in (0..5).rev() {
            idx[i] += 1;
            if idx[i] < n {
                break;
            }
            idx[i] = 0;
        }
    }
    s * vol
}

/// `int A(n) e^{-2 pi i <xi, x_{1..4}>} dn` on a 7-dimensional lattice.
fn lattice_character(atom: &Atom, xi: &[f64; 4]) -> C64 {
    let n = 13;
    let ax: Vec<(Vec<f64>, f64)> = atom.factors.iter().map(|f| nodes(f, 16.0, n)).collect();
    let vol: f64 = ax.iter().map(|(_, h)| h).product();
    let mut s = C64::new(0.0, 0.0);
    let mut idx = [0usize; 7];
    for _ in 0..n.pow(7) {
        let t: [f64; 7] = std::array::from_fn(|i| ax[i].0[idx[i]]);
        let ph: f64 = (0..4).map(|i| xi[i] * t[i]).sum();
        let y = [t[2], t[3], t[4], t[5], t[6]];
        s += atom.eval([t[0], t[1]], &y) * C64::from_polar(1.0, -2.0 * PI * ph);
        for i in (0..7).rev() {
            idx[i] += 1;
            if idx[i] < n {
                break;
            }
            idx[i] = 0;
        }
    }
    s * vol
}

fn random_matrix(n: usize, seed: u64) -> DMatrix<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DMatrix::from_fn(n, n, |_, _| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
}

fn grid_at(f: &[f64]) -> Grid {
    let cs = kernel_centers(f, L).unwrap();
    let c = [cs.iter().map(|c| c[0]).sum::<f64>() / cs.len() as f64, cs.iter().map(|c| c[1]).sum::<f64>() / cs.len() as f64];
    Grid::plane(c, L, N).unwrap()
}

#[test]
fn gaussian_partial_transform_is_gaussian() {
    let g = TestFunction::gaussian(1.0, 1.0);
    let pf = partial_fourier(&g, &p37()).unwrap();
    for (a, q) in [([0.0, 0.0], [0.0; 5]), ([0.3, -0.7], [0.1, 0.2, -0.4, 0.5, 1.0])] {
        let a2 = a[0] * a[0] + a[1] * a[1];
        let q2: f64 = q.iter().map(|x| x * x).sum();
        let want = (-PI * a2 - PI * q2).exp();
        assert!((pf.eval(a, &q) - want).norm() < 1e-14);
    }
}

#[test]
fn even_real_functions_have_real_transforms() {
    let f = |poly: Vec<f64>, a: f64| Factor::new(poly, a, 0.0).unwrap();
    let mut factors = vec![f(vec![1.0], PI), f(vec![0.0, 1.0], PI)];
    factors.extend([f(vec![1.0, 0.0, 2.0], 1.5 * PI), f(vec![1.0], PI), f(vec![0.0, 0.0, 1.0], 2.0), f(vec![1.0], 3.0), f(vec![1.0], 1.0)]);
    let t = TestFunction::from_atom(Atom::new(C64::new(1.0, 0.0), factors).unwrap());
    for q in [[0.3, -0.2, 0.7, 0.0, 1.1], [1.0, 1.0, -1.0, 0.5, 0.25]] {
        assert!(t.partial([0.4, -0.9], &q).im.abs() < 1e-15);
    }
}

#[test]
fn partial_transform_matches_lattice_quadrature() {
    let atom = skew_atom();
    let t = TestFunction::from_atom(atom.clone());
    for (a, q) in [([0.1, -0.3], [0.0; 5]), ([0.5, 0.2], [0.3, -0.2, 0.15, 0.4, -0.35])] {
        let got = t.partial(a, &q);
        let want = lattice_partial(&atom, a, &q);
        assert!((got - want).norm() < 1e-6, "{got} vs {want}");
    }
}

#[test]
fn only_the_coordinate_polarization_is_supported() {
    let g = TestFunction::gaussian(1.0, 1.0);
    assert!(partial_fourier(&g, &Subspace::coordinate(7, &[1, 2, 3, 4, 5, 6])).is_err());
    let skew = Subspace::span(7, &[vec![1, 1, 0, 0, 0, 0, 0].into_iter().map(kirillov::scalar::int).collect()]);
    assert!(matches!(partial_fourier(&g, &skew), Err(Error::UnsupportedPolarization(_))));
}

#[test]
fn characters_are_rejected_by_the_kernel() {
    let g = TestFunction::gaussian(1.0, 1.0);
    let grid = Grid::new(L, 8, 2).unwrap();
    let r = induced_kernel(&g, &[1.0, 2.0, 3.0, 4.0, 0.0, 0.0, 0.0], &grid);
    assert!(matches!(r, Err(Error::WrongLayer(_))));
}

#[test]
fn kernel_entries_follow_the_formula() {
    let t = TestFunction::from_atom(skew_atom()).hermitian_part();
    let f = [0.0, 0.0, 0.3, -0.2, 0.5, 0.1, 0.7];
    let p = [0.3, -0.2, 0.5, 0.1, 0.7];
    let grid = Grid::new(3.0, 7, 2).unwrap();
    let k = induced_kernel(&t, &f, &grid).unwrap();
    let pts = grid.points2();
    for (r, c) in [(0, 0), (3, 17), (40, 12), (24, 24)] {
        let (z, x) = (pts[r], pts[c]);
        let want = t.partial([z[0] - x[0], z[1] - x[1]], &act(x, &p)) * grid.weight();
        assert!((k.matrix[(r, c)] - want).norm() < 1e-14 * (1.0 + want.norm()));
    }
    let rows = [1, 5, 30];
    let cols = [0, 2, 48];
    let b = kernel_block(&t, &f, &grid, &rows, &cols).unwrap();
    for (i, &r) in rows.iter().enumerate() {
        for (j, &c) in cols.iter().enumerate() {
            assert_eq!(b[(i, j)], k.matrix[(r, c)]);
        }
    }
    let s = induced_kernel_symbol(&t, &f, &grid).unwrap();
    assert!((&s.matrix - &k.matrix).iter().all(|z| z.norm() < 1e-14));
}

#[test]
fn star_gives_the_adjoint_kernel() {
    let t = TestFunction::from_atom(skew_atom());
    for f in [[0.0, 0.0, 0.4, 0.1, 0.0, 0.0, 1.0], [0.0, 0.0, 0.3, 0.6, 1.0, -0.5, 0.0]] {
        let grid = grid_at(&f);
        let k = induced_kernel(&t, &f, &grid).unwrap();
        let ks = induced_kernel(&t.star(), &f, &grid).unwrap();
        let scale = k.max_abs();
        let d = (&ks.matrix - k.matrix.adjoint()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        assert!(d <= 1e-12 * scale, "{d:e}");
        let h = induced_kernel(&t.hermitian_part(), &f, &grid).unwrap();
        assert!(h.hermiticity_defect() <= 1e-12 * h.max_abs());
    }
}

#[test]
fn norm_is_bounded_by_the_l1_norm() {
    for t in [TestFunction::gaussian(1.0, 1.0), TestFunction::from_atom(skew_atom())] {
        for f in [[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 0.2, -0.3, 0.6, 0.8, 0.0], [0.0, 0.0, 0.2, 0.1, 0.3, 0.2, 0.5]] {
            let grid = grid_at(&f);
            let k = induced_kernel(&t, &f, &grid).unwrap();
            assert!(boundary_mass(&k) < 1e-6);
            let n = k.norm();
            assert!(n <= t.l1_bound() * (1.0 + 1e-3), "{n} vs {}", t.l1_bound());
            assert!(n > 0.0);
        }
    }
}

#[test]
fn same_orbit_functionals_give_equal_norms() {
    let alg = Algebra::n7();
    let t = TestFunction::from_atom(skew_atom()).hermitian_part();
    let cases = [
        ([0.0, 0.0, 0.5, -0.5, 0.0, 0.0, 1.0], [0.7, -0.4, 0.3, 0.1, -0.6, 0.2, 0.5]),
        ([0.0, 0.0, 0.0, 0.0, 1.0, 0.5, 0.0], [-0.8, 1.1, 0.4, -0.3, 0.2, 0.7, -0.1]),
    ];
    for (f, g) in cases {
        let fg = coadjoint_f64(&alg, &g, &f);
        let a = induced_kernel(&t, &f, &grid_at(&f)).unwrap().norm();
        let b = induced_kernel(&t, &fg, &grid_at(&fg)).unwrap().norm();
        assert!((a - b).abs() <= 1e-3 * a, "{a} vs {b}");
    }
}

#[test]
fn operator_norm_examples() {
    assert_eq!(operator_norm(&DMatrix::zeros(5, 5)), 0.0);
    let u = DMatrix::from_fn(6, 1, |i, _| C64::new(i as f64 - 2.0, 0.5));
    let v = DMatrix::from_fn(6, 1, |i, _| C64::new(1.0, -(i as f64) / 3.0));
    let k = &u * v.adjoint();
    let want = u.norm() * v.norm();
    assert!((operator_norm(&k) - want).abs() < 1e-12 * want);
    for seed in 0..4 {
        let m = random_matrix(16, seed);
        let a = operator_norm(&m);
        let b = power_norm(&m, 5000);
        assert!((a - b).abs() < 1e-8 * a, "{a} vs {b}");
    }
}

#[test]
fn character_of_the_gaussian_at_zero_is_one() {
    let g = TestFunction::gaussian(1.0, 1.0);
    assert!((character_transform(&g, &[0.0; 4]) - 1.0).norm() < 1e-14);
}

#[test]
fn character_matches_lattice_quadrature() {
    let atom = skew_atom();
    let t = TestFunction::from_atom(atom.clone());
    for xi in [[0.0; 4], [0.1, -0.2, 0.25, 0.05]] {
        let got = character_transform(&t, &xi);
        let want = lattice_character(&atom, &xi);
        assert!((got - want).norm() < 1e-5 * (1.0 + want.norm()), "{got} vs {want}");
    }
}

#[test]
fn pi0_norm_of_the_gaussian_sits_at_the_origin() {
    let g = TestFunction::gaussian(1.0, 1.0);
    let grid = Grid::new(2.0, 9, 4).unwrap();
    let s = pi0_sup_norm(&g, &grid).unwrap();
    assert!((s - 1.0).abs() < 1e-14);
    let c = C64::new(-1.5, 2.0);
    let s2 = pi0_sup_norm(&g.scale(c), &grid).unwrap();
    assert!((s2 - 2.5).abs() < 1e-13);
    // shifting the atom only modulates the transform
    let shifted = Atom::new(C64::new(1.0, 0.0), (0..7).map(|i| Factor::new(vec![1.0], PI, 0.1 * i as f64).unwrap()).collect()).unwrap();
    let s3 = pi0_sup_norm(&TestFunction::from_atom(shifted), &grid.refined()).unwrap();
    assert!((s3 - s).abs() < 1e-4);
}

#[test]
fn pi0_norm_converges_under_refinement() {
    let t = TestFunction::from_atom(skew_atom());
    let r = t.frequency_radius(1e-8);
    let errs: Vec<f64> = {
        let fine = pi0_sup_norm(&t, &Grid::new(r, 33, 4).unwrap()).unwrap();
        [5, 9, 17].iter().map(|&n| (fine - pi0_sup_norm(&t, &Grid::new(r, n, 4).unwrap()).unwrap()).abs()).collect()
    };
    assert!(errs.windows(2).all(|w| w[1] <= w[0]), "{errs:?}");
    assert!(pi0_sup_norm(&t, &Grid::new(r, 3, 2).unwrap()).is_err());
}

#[test]
fn grids_are_validated() {
    assert!(Grid::new(1.0, 1, 2).is_err());
    assert!(Grid::new(0.0, 4, 2).is_err());
    let g = Grid::new(2.0, 5, 2).unwrap();
    assert_eq!(g.len(), 25);
    assert!((g.weight() - 1.0).abs() < 1e-15);
    assert_eq!(g.boundary2().len(), 16);
    assert_eq!(g.refined().n, 9);
}

#[test]
fn matrix_dump_round_trips() {
    let m = random_matrix(5, 9);
    let mut buf = Vec::new();
    write_matrix(&mut buf, &m).unwrap();
    assert_eq!(buf.len(), 5 * 5 * 16);
    assert_eq!(&buf[..8], &m[(0, 0)].re.to_le_bytes());
    assert_eq!(&buf[16..24], &m[(0, 1)].re.to_le_bytes());
    assert_eq!(read_matrix(&buf[..], 5, 5).unwrap(), m);
}

#[test]
fn kernel_of_a_product_approaches_the_operator_product() {
    let a = TestFunction::gaussian(1.0, 1.0);
    let b = TestFunction::gaussian(2.0, 0.5);
    let conv = Convolution::new(&a, &b, 24);
    let p = [0.0, 0.0, 1.0, 0.0, 0.0];
    // every seventh output row, against the full intermediate integration
    let defects: Vec<f64> = [15, 21, 29]
        .iter()
        .map(|&n| {
            let grid = Grid::new(3.5, n, 2).unwrap();
            let all: Vec<usize> = (0..grid.len()).collect();
            let rows: Vec<usize> = (0..grid.len()).step_by(7).collect();
            let prod = matmul(&kernel_block_at(&a, &p, &grid, &rows, &all), &kernel_block_at(&b, &p, &grid, &all, &all));
            let kc = symbol_block_at(&conv, &p, &grid, &rows, &all);
            let d = (&kc - &prod).iter().fold(0.0f64, |m, z| m.max(z.norm()));
            d / kc.iter().fold(0.0f64, |m, z| m.max(z.norm()))
        })
        .collect();
    assert!(defects.windows(2).all(|w| w[1] < w[0]), "{defects:?}");
    assert!(defects[2] < 1e-3, "{defects:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn conjugation_identities_for_characters(x in proptest::array::uniform4(-1.0f64..1.0)) {
        let t = TestFunction::from_atom(skew_atom());
        let c = character_transform(&t, &x);
        let neg = [-x[0], -x[1], -x[2], -x[3]];
        prop_assert!((c.conj() - character_transform(&t.star(), &x)).norm() < 1e-12);
        prop_assert!((c.conj() - character_transform(&t.conj().unwrap(), &neg)).norm() < 1e-12);
    }

    #[test]
    fn star_is_an_involution_on_partials(a in proptest::array::uniform2(-2.0f64..2.0), q in proptest::array::uniform5(-1.0f64..1.0)) {
        let t = TestFunction::from_atom(skew_atom());
        let tt = t.star().star();
        prop_assert!((tt.partial(a, &q) - t.partial(a, &q)).norm() < 1e-15);
        prop_assert_eq!(tt, t);
    }

    #[test]
    fn action_is_a_group_action(x in proptest::array::uniform2(-2.0f64..2.0), y in proptest::array::uniform2(-2.0f64..2.0), p in proptest::array::uniform5(-2.0f64..2.0)) {
        let lhs = act(x, &act(y, &p));
        let rhs = act([x[0] + y[0], x[1] + y[1]], &p);
        for (u, v) in lhs.iter().zip(rhs) {
            prop_assert!((u - v).abs() < 1e-12);
        }
    }
}
