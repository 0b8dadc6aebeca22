use proptest::prelude::*;
use rotelast::energetics::lagrangian_density;
use rotelast::grid::{Axis, GridSpec};
use rotelast::planewave::{critical_residual, solve_plane_waves, FourMomentum, PlaneWave};
use rotelast::sampling::{random_moduli, random_spinor, rng, smooth_spinor_field};
use rotelast::spinor_repr::measures;
use rotelast::variational::*;
use rotelast::{Differentiator, ElasticModuli, Spinor};

#[test]
fn w_reconstructs_the_lagrangian() {
    let g = GridSpec::spacetime(Axis::new(8, 2.0), [8; 3], [2.0; 3]).unwrap();
    let d = Differentiator::spectral();
    let mut r = rng(3);
    for seed in 0..3 {
        let xi = smooth_spinor_field(&mut rng(seed), g, 3, 0.2, 1);
        let m = random_moduli(&mut r);
        let t = build_tables(&m).unwrap();
        let w = assemble_w(&xi, &d, &t).unwrap();
        let l = lagrangian_density(&xi, &d, &m).unwrap();
        let meas = measures(&xi, &d).unwrap();
        for i in 0..xi.len() {
            let lw = lagrangian_from_w(&w.data[i], &t);
            assert!((lw - l.data[i]).abs() <= 1e-12 * l.data[i].abs().max(1.0));
            let p = &meas.data[i];
            let s = p.rho.sqrt();
            let f: f64 = (0..3).map(|a| p.dual_torsion.0[a][a]).sum();
            assert!((w.data[i][W_F] - s * f).abs() < 1e-10);
            for a in 0..3 {
                assert!((w.data[i][W_OMEGA + a] - s * p.omega[a]).abs() < 1e-10);
                for b in 0..3 {
                    assert!((w.data[i][w_index_t(a, b)] - s * p.dual_torsion.0[a][b]).abs() < 1e-10);
                }
            }
        }
    }
}

#[test]
fn plane_wave_residual_is_a_modulated_constant() {
    let mut r = rng(8);
    for _ in 0..10 {
        let m = random_moduli(&mut r);
        let zeta = random_spinor(&mut r);
        let p = FourMomentum::new(1.0, [1.0, -1.0, 2.0]);
        let wave = PlaneWave::new(zeta, p).unwrap();
        let g = wave.periodic_grid(6, 6).unwrap();
        let rep = lemma_check(&wave, g, &Differentiator::exact(p.to_array()), &m).unwrap();
        let scale = rep.g_norm.max(1.0);
        assert!(rep.stdev < 1e-10 * scale);
        assert!(rep.max_residual < 1e-10 * scale);
    }
}

#[test]
fn solutions_are_critical_points() {
    let mut r = rng(12);
    for _ in 0..5 {
        let m = random_moduli(&mut r);
        for p0 in [1.0, -3.7] {
            let sol = solve_plane_waves(&m, p0).unwrap();
            for fam in &sol.families {
                for p in fam.samples.iter().take(3) {
                    let wave = PlaneWave::new(Spinor::from_reals(1.0, 0.0, 0.0, 0.0), FourMomentum::new(p0, *p)).unwrap();
                    let g = GridSpec::spacetime(Axis::new(4, 1.0), [4; 3], [1.0; 3]).unwrap();
                    let field = wave.sample(g);
                    let f = euler_lagrange_f(&field, &Differentiator::exact(wave.momentum.to_array()), &m).unwrap();
                    let scale = m.c_kin * p0 * p0;
                    assert!(f.data.iter().all(|s| s.norm() < 1e-10 * scale));
                }
            }
        }
    }
}

fn oracle_gap(seed: u64, step: f64) -> f64 {
    let g = GridSpec::spacetime(Axis::new(8, 2.0), [8; 3], [2.0; 3]).unwrap();
    let xi = smooth_spinor_field(&mut rng(seed), g, 3, 0.2, 1);
    let m = random_moduli(&mut rng(seed + 100));
    let d = Differentiator::central();
    let f = euler_lagrange_f(&xi, &d, &m).unwrap();
    let fd = fd_action_gradient(&xi, &d, &m, step).unwrap();
    let scale = f.data.iter().map(|s| s.norm()).fold(0.0, f64::max);
    f.data.iter().zip(&fd.data).map(|(a, b)| (*a - *b).norm()).fold(0.0, f64::max) / scale
}

#[test]
fn residual_matches_the_action_gradient() {
    for seed in 0..3 {
        assert!(oracle_gap(seed, 1e-5) < 1e-6);
    }
}

#[test]
fn oracle_error_shrinks_with_the_step() {
    let coarse = oracle_gap(0, 1e-2);
    let fine = oracle_gap(0, 1e-3);
    let ratio = coarse / fine;
    assert!((30.0..300.0).contains(&ratio), "{coarse} {fine}");
}

fn arb_spinor() -> impl Strategy<Value = Spinor> {
    prop::array::uniform4(-1.0f64..1.0)
        .prop_filter("nonzero", |c| c.iter().map(|x| x * x).sum::<f64>() > 0.05)
        .prop_map(|c| Spinor::from_reals(c[0], c[1], c[2], c[3]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn table_residual_equals_closed_form(z in arb_spinor(), p in prop::array::uniform4(-2.0f64..2.0), c in prop::array::uniform4(0.0f64..2.0)) {
        let m = ElasticModuli::new(c[0], c[1], c[2], c[3]).unwrap();
        let p = FourMomentum::from_array(p);
        let a = reduced_g(&z, &p, &m).unwrap();
        let b = critical_residual(&z, &p, &m).unwrap();
        prop_assert!(a.max_abs_diff(&b) <= 1e-12 * b.norm().max(1.0));
    }
}
