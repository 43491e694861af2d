use kirillov::lie::coadjoint;
use kirillov::lie::linalg::Subspace;
use kirillov::orbits::{
    canonical_orbit, classify_layer, classify_layer_f64, is_subordinate, orbit_dim, orbit_invariants, orbit_point,
    orbit_sample, skew_form, stabilizer, sweeping_axes, vergne_polarization, write_csv, Layer,
};
use kirillov::scalar::{int, rat, to_f64, Rational};
use kirillov::Algebra;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn v(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&n| int(n)).collect()
}

fn dual(i: usize) -> Vec<Rational> {
    let mut f = vec![Rational::zero(); 7];
    f[i] = Rational::one();
    f
}

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn nonzero() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

fn vec7() -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec(rational(), 7)
}

fn gamma2() -> impl Strategy<Value = Vec<Rational>> {
    (vec7(), nonzero()).prop_map(|(mut f, f7)| {
        f[6] = f7;
        f
    })
}

fn gamma1() -> impl Strategy<Value = Vec<Rational>> {
    (vec7(), nonzero(), rational()).prop_map(|(mut f, a, b)| {
        f[4] = a;
        f[5] = b;
        f[6] = Rational::zero();
        f
    })
}

fn gamma0() -> impl Strategy<Value = Vec<Rational>> {
    vec7().prop_map(|mut f| {
        f[4..].iter_mut().for_each(|x| *x = Rational::zero());
        f
    })
}

fn p37() -> Subspace {
    Subspace::coordinate(7, &[2, 3, 4, 5, 6])
}

#[test]
fn skew_form_examples() {
    let alg = Algebra::n7();
    let b = skew_form(&alg, &vec![Rational::zero(); 7]).unwrap();
    assert!(b.iter().flatten().all(Zero::is_zero));

    let b = skew_form(&alg, &dual(6)).unwrap();
    for i in 0..7 {
        for j in 0..7 {
            let want = match (i, j) {
                (0, 4) | (1, 5) => int(1),
                (4, 0) | (5, 1) => int(-1),
                _ => int(0),
            };
            assert_eq!(b[i][j], want, "entry ({}, {})", i + 1, j + 1);
        }
    }

    let b = skew_form(&alg, &dual(4)).unwrap();
    assert_eq!(b[0][2], int(1));
    assert_eq!(b[1][3], int(1));
    assert_eq!(b[2][0], int(-1));
}

#[test]
fn stabilizer_examples() {
    let alg = Algebra::n7();
    assert_eq!(stabilizer(&alg, &vec![Rational::zero(); 7]).unwrap().dim(), 7);
    assert_eq!(stabilizer(&alg, &v(&[1, 2, 3, 4, 5, 6, 7])).unwrap().dim(), 3);
    let s = stabilizer(&alg, &dual(5)).unwrap();
    assert_eq!(s, Subspace::coordinate(7, &[4, 5, 6]));
}

#[test]
fn polarization_recovers_the_printed_span() {
    let alg = Algebra::n7();
    assert_eq!(vergne_polarization(&alg, &vec![Rational::zero(); 7], None).unwrap().dim(), 7);
    for f in [v(&[0, 0, 0, 1, 0, 0, 1]), dual(4), v(&[0, 0, 0, 0, 1, 1, 0])] {
        let p = vergne_polarization(&alg, &f, None).unwrap();
        assert_eq!(p, p37(), "f = {f:?}");
    }
}

#[test]
fn layer_examples() {
    assert_eq!(classify_layer(&dual(6)).unwrap(), Layer::Gamma2);
    assert_eq!(classify_layer(&v(&[0, 0, 0, 0, 1, 1, 0])).unwrap(), Layer::Gamma1);
    assert_eq!(classify_layer(&v(&[1, 2, 3, 4, 0, 0, 0])).unwrap(), Layer::Gamma0);
    assert_eq!(classify_layer_f64(&[1e6, 0.0, 0.0, 0.0, 0.0, 0.0, 1e-7]).unwrap(), Layer::Gamma0);
    assert_eq!(classify_layer_f64(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1e-7]).unwrap(), Layer::Gamma2);
}

#[test]
fn canonical_examples() {
    let d = canonical_orbit(&dual(6)).unwrap();
    assert_eq!(d.layer, Layer::Gamma2);
    assert_eq!(d.params, v(&[0, 0, 1]));
    let d = canonical_orbit(&v(&[1, 2, 3, 4, 0, 0, 0])).unwrap();
    assert_eq!(d.layer, Layer::Gamma0);
    assert_eq!(d.params, v(&[1, 2, 3, 4]));
    let (i1, i2) = orbit_invariants(&v(&[0, 0, 5, 7, 0, 0, 3]));
    assert_eq!((i1, i2), (int(30), int(21)));
}

#[test]
fn gamma0_orbits_are_points() {
    let alg = Algebra::n7();
    let f = v(&[1, 2, 3, 4, 0, 0, 0]);
    let vals = v(&[-2, -1, 0, 1, 2]);
    let pts = orbit_sample(&alg, &f, &[0, 1, 2, 3, 4, 5, 6], &vals[..2]);
    assert!(pts.iter().all(|p| *p == f));
}

#[test]
fn gamma2_sample_on_printed_parameterization() {
    let alg = Algebra::n7();
    let f = v(&[0, 0, 2, 3, 0, 0, 1]);
    let vals: Vec<Rational> = (-3..=3).map(|n| rat(n, 2)).collect();
    let pts = orbit_sample(&alg, &f, &sweeping_axes(Layer::Gamma2), &vals);
    assert_eq!(pts.len(), 7usize.pow(4));
    for p in &pts {
        assert_eq!(p[2], int(2) + (&p[4] * &p[4] - &p[5] * &p[5]) / int(2));
        assert_eq!(p[3], int(3) + &p[4] * &p[5]);
        assert_eq!(orbit_invariants(p), (int(4), int(3)));
    }
}

#[test]
fn gamma1_sample_pins_the_top_slots() {
    let alg = Algebra::n7();
    let f = v(&[0, 0, 0, 0, 1, 1, 0]);
    let vals: Vec<Rational> = (-2..=2).map(int).collect();
    let pts = orbit_sample(&alg, &f, &sweeping_axes(Layer::Gamma1), &vals);
    let mut firsts = std::collections::BTreeSet::new();
    for p in &pts {
        assert_eq!(&p[4..], &v(&[1, 1, 0])[..]);
        firsts.insert(p[..4].to_vec());
    }
    // the four lower slots move freely: the sample is injective
    assert_eq!(firsts.len(), pts.len());
}

#[test]
fn orbit_point_matches_sampled_points() {
    let alg = Algebra::n7();
    let f = v(&[0, 0, 1, -2, 0, 0, 3]);
    let d = canonical_orbit(&f).unwrap().to_f64();
    let vals: Vec<Rational> = (-2..=2).map(|n| rat(n, 3)).collect();
    for p in orbit_sample(&alg, &f, &[0, 1, 4, 5], &vals) {
        let p: Vec<f64> = p.iter().map(to_f64).collect();
        let q = orbit_point(&d, &[p[0], p[1], p[4], p[5]]);
        for (a, b) in p.iter().zip(&q) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn csv_has_header_and_seven_columns() {
    let mut buf = Vec::new();
    write_csv(&mut buf, &[vec![0.5; 7], vec![-1.0; 7]]).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "f1,f2,f3,f4,f5,f6,f7");
    assert_eq!(lines.len(), 3);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 7));
}

fn check_geometry(f: &[Rational], layer: Layer) -> Result<(), TestCaseError> {
    let alg = Algebra::n7();
    prop_assert_eq!(classify_layer(f).unwrap(), layer);
    let s = stabilizer(&alg, f).unwrap();
    let d = orbit_dim(&alg, f).unwrap();
    prop_assert_eq!(d + s.dim(), 7);
    prop_assert_eq!(d, layer.orbit_dim());
    let p = vergne_polarization(&alg, f, None).unwrap();
    prop_assert_eq!(2 * p.dim(), 7 + s.dim());
    prop_assert!(is_subordinate(&alg, f, &p));
    prop_assert!(s.is_subspace_of(&p));
    if layer != Layer::Gamma0 {
        prop_assert_eq!(p, p37());
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn geometry_on_gamma2(f in gamma2()) {
        check_geometry(&f, Layer::Gamma2)?;
    }

    #[test]
    fn geometry_on_gamma1(f in gamma1()) {
        check_geometry(&f, Layer::Gamma1)?;
    }

    #[test]
    fn geometry_on_gamma0(f in gamma0()) {
        check_geometry(&f, Layer::Gamma0)?;
    }

    #[test]
    fn invariants_are_constant_on_gamma2_orbits(f in gamma2(), g in vec7()) {
        let alg = Algebra::n7();
        let h = coadjoint(&alg, &g, &f).unwrap();
        prop_assert_eq!(orbit_invariants(&h), orbit_invariants(&f));
        prop_assert_eq!(canonical_orbit(&h).unwrap(), canonical_orbit(&f).unwrap());
    }

    #[test]
    fn descriptors_and_layers_are_orbit_invariants(f in vec7(), g in vec7()) {
        let alg = Algebra::n7();
        let h = coadjoint(&alg, &g, &f).unwrap();
        prop_assert_eq!(classify_layer(&h).unwrap(), classify_layer(&f).unwrap());
        prop_assert_eq!(canonical_orbit(&h).unwrap(), canonical_orbit(&f).unwrap());
        prop_assert_eq!(orbit_dim(&alg, &h).unwrap(), orbit_dim(&alg, &f).unwrap());
    }

    #[test]
    fn representative_is_on_its_orbit(f in vec7()) {
        let d = canonical_orbit(&f).unwrap();
        prop_assert_eq!(canonical_orbit(&d.representative()).unwrap(), d);
    }
}
