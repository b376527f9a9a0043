use dirac_time::algebra::{dirac, hermitian_eigensystem, spinor_dot, Matrix4, Spinor4, C64};
use dirac_time::analysis::{time_eigensystem, uncertainty_product};
use dirac_time::cli::{format_number, RunConfig};
use dirac_time::dynamics::evolve_free;
use dirac_time::hilbert::{MomentumGrid, Representation, SpinorField};
use dirac_time::operators::{
    energy_projector, hamiltonian_at, propagator_at, time_operator_at, Branch, ModelParams,
};
use dirac_time::packets::{build_gaussian, plan_grid, BranchMix, PacketSpec};
use proptest::prelude::*;

fn vec3(lo: f64, hi: f64) -> impl Strategy<Value = [f64; 3]> {
    [lo..hi, lo..hi, lo..hi]
}

fn params() -> impl Strategy<Value = ModelParams> {
    (0.0..3.0f64, 0.0..3.0f64, -2.0..2.0f64).prop_map(|(m0, tau0, q)| ModelParams { m0, tau0, q })
}

fn close(a: &Matrix4, b: &Matrix4, tol: f64) -> bool {
    (*a - *b).max_norm() <= tol
}

fn scalar(s: f64) -> Matrix4 {
    Matrix4::identity() * s
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Small grid with a pseudo-random smooth field derived from `seed`.
fn random_field(seed: u64, repr: Representation) -> SpinorField {
    let grid = MomentumGrid::new(8, 4.0).unwrap();
    let s = seed as f64 * 0.618_033_988_75;
    SpinorField::from_fn(grid, repr, |q| {
        let env = (-0.5 * dot(q, q)).exp();
        std::array::from_fn(|k| {
            let a = s + k as f64 * 1.3;
            C64::new(env * (a + q[0]).cos(), env * (a * 0.7 + q[1] - q[2]).sin())
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn dirac_matrices_anticommute(i in 0usize..3, j in 0usize..3) {
        let d = dirac();
        let ab = d.alpha[i] * d.alpha[j] + d.alpha[j] * d.alpha[i];
        let want = if i == j { scalar(2.0) } else { Matrix4::zero() };
        prop_assert!(close(&ab, &want, 0.0));
        prop_assert!(close(&(d.alpha[i] * d.beta + d.beta * d.alpha[i]), &Matrix4::zero(), 0.0));
    }

    #[test]
    fn squares_are_scalar(p in vec3(-5.0, 5.0), r in vec3(-5.0, 5.0), prm in params()) {
        let h = hamiltonian_at(p, &prm);
        let t = time_operator_at(r, &prm);
        prop_assert!(h.is_hermitian(1e-15) && t.is_hermitian(1e-15));
        let e2 = dot(p, p) + prm.m0 * prm.m0;
        let t2 = dot(r, r) + prm.tau0 * prm.tau0;
        prop_assert!(close(&(h * h), &scalar(e2), 1e-12 * (1.0 + e2)));
        prop_assert!(close(&(t * t), &scalar(t2), 1e-12 * (1.0 + t2)));
    }

    #[test]
    fn time_eigensystem_is_orthonormal(r in 0.0..50.0f64, tau0 in 0.0..5.0f64) {
        prop_assume!(r > 1e-6 || tau0 > 1e-6);
        let prm = ModelParams { m0: 1.0, tau0, q: 1.0 };
        let es = time_eigensystem(r, &prm).unwrap();
        let scale = (r * r + tau0 * tau0).sqrt();
        prop_assert!((es.tau_r - scale).abs() <= 1e-12 * (1.0 + scale));
        prop_assert!(es.residual() <= 1e-12 * (1.0 + scale));
        prop_assert!(es.orthonormality_error() <= 1e-12);
    }

    #[test]
    fn generic_eigensolver_reconstructs(re in prop::array::uniform16(-2.0..2.0f64), im in prop::array::uniform16(-2.0..2.0f64)) {
        let a = Matrix4::from_fn(|r, c| C64::new(re[4 * r + c], im[4 * r + c]));
        let h = (a + a.adjoint()) * 0.5;
        let es = hermitian_eigensystem(&h).unwrap();
        prop_assert!(close(&es.reconstruct(), &h, 1e-11));
        for w in es.values.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((spinor_dot(&es.vectors[i], &es.vectors[j]) - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn energy_projectors_split_identity(p in vec3(-5.0, 5.0), m0 in 0.05..3.0f64) {
        let prm = ModelParams { m0, tau0: 1.0, q: 1.0 };
        let lp = energy_projector(p, Branch::Plus, &prm).unwrap();
        let lm = energy_projector(p, Branch::Minus, &prm).unwrap();
        prop_assert!(close(&(lp * lm), &Matrix4::zero(), 1e-13));
        prop_assert!(close(&(lp * lp), &lp, 1e-13));
        prop_assert!(close(&(lm * lm), &lm, 1e-13));
        prop_assert!(close(&(lp + lm), &Matrix4::identity(), 1e-13));
        prop_assert!((lp.trace() - C64::new(2.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn propagator_is_unitary_group(
        p in vec3(-5.0, 5.0),
        a in vec3(-1.0, 1.0),
        t1 in -20.0..20.0f64,
        t2 in -20.0..20.0f64,
        prm in params(),
    ) {
        let u1 = propagator_at(p, t1, a, &prm);
        let u2 = propagator_at(p, t2, a, &prm);
        prop_assert!(u1.is_unitary(1e-12));
        prop_assert!(close(&(u1 * u2), &propagator_at(p, t1 + t2, a, &prm), 1e-11));
        prop_assert!(close(&propagator_at(p, 0.0, a, &prm), &Matrix4::identity(), 1e-15));
    }

    #[test]
    fn csv_numbers_round_trip(v in prop::num::f64::NORMAL | prop::num::f64::ZERO) {
        let back: f64 = format_number(v).parse().unwrap();
        prop_assert!((back - v).abs() <= 1e-14 * v.abs());
    }

    #[test]
    fn config_values_round_trip(tau0 in 0.0..1e3f64, m0 in 0.0..1e3f64, n in 2usize..9, seed in any::<u32>()) {
        let text = format!(
            "# generated\n[model]\ntau0 = {}\nm0 = {}\n\n[grid]\nn = {}\n[check]\nseed = {seed}\n",
            format_number(tau0), format_number(m0), 1usize << n,
        );
        let cfg = RunConfig::from_text(&text).unwrap();
        prop_assert!((cfg.tau0 - tau0).abs() <= 1e-14 * tau0.abs());
        prop_assert!((cfg.m0 - m0).abs() <= 1e-14 * m0);
        prop_assert_eq!(cfg.grid_n, Some([1usize << n; 3]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn transforms_round_trip(seed in 0u64..1000, pos in any::<bool>()) {
        let repr = if pos { Representation::Position } else { Representation::Momentum };
        let f = random_field(seed, repr);
        let g = f.switch_representation();
        prop_assert!((g.norm_sqr() - f.norm_sqr()).abs() <= 1e-12 * f.norm_sqr());
        let back = g.switch_representation();
        prop_assert_eq!(back.representation(), repr);
        prop_assert!(back.max_difference(&f).unwrap() <= 1e-13);
    }

    #[test]
    fn inner_product_is_sesquilinear(
        s1 in 0u64..1000, s2 in 0u64..1000, s3 in 0u64..1000,
        a in (-2.0..2.0f64, -2.0..2.0f64), b in (-2.0..2.0f64, -2.0..2.0f64),
    ) {
        let (x, y, z) = (
            random_field(s1, Representation::Momentum),
            random_field(s2, Representation::Momentum),
            random_field(s3, Representation::Momentum),
        );
        let (a, b) = (C64::new(a.0, a.1), C64::new(b.0, b.1));
        let lhs = x.inner(&y.combine(a, &z, b).unwrap()).unwrap();
        let rhs = a * x.inner(&y).unwrap() + b * x.inner(&z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        prop_assert!((x.inner(&y).unwrap() - y.inner(&x).unwrap().conj()).norm() <= 1e-13);
        let anti = x.scaled(a).inner(&y).unwrap();
        prop_assert!((anti - a.conj() * x.inner(&y).unwrap()).norm() <= 1e-12 * (1.0 + anti.norm()));
        // Representation independence (Parseval).
        let ip = x.switch_representation().inner(&y.switch_representation()).unwrap();
        prop_assert!((ip - x.inner(&y).unwrap()).norm() <= 1e-12);
    }

    #[test]
    fn free_evolution_preserves_norm(seed in 0u64..1000, t in -30.0..30.0f64, prm in params()) {
        let f = random_field(seed, Representation::Momentum);
        let g = evolve_free(&f, t, &prm).unwrap();
        prop_assert!((g.norm_sqr() - f.norm_sqr()).abs() <= 1e-12 * f.norm_sqr());
        let back = evolve_free(&g, -t, &prm).unwrap();
        prop_assert!(back.max_difference(&f).unwrap() <= 1e-12);
    }
}

fn sample_spec(p: [f64; 3], r: [f64; 3], branch: u8, w: f64, axis: [f64; 3], up: bool) -> PacketSpec {
    let branch = match branch {
        0 => BranchMix::Plus,
        1 => BranchMix::Minus,
        _ => BranchMix::Mixed(w),
    };
    PacketSpec::new(p, [0.08; 3], branch)
        .with_r_center(r)
        .with_spin(axis, if up { 1.0 } else { -1.0 })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 4, ..ProptestConfig::default() })]

    #[test]
    fn robertson_bound_holds(
        p in vec3(-0.6, 0.6),
        r in vec3(-2.0, 2.0),
        branch in 0u8..3,
        w in 0.1..0.9f64,
        axis in vec3(-1.0, 1.0),
        up in any::<bool>(),
        tau0 in 0.0..2.0f64,
    ) {
        prop_assume!(dot(axis, axis) > 0.01);
        let prm = ModelParams { m0: 1.0, tau0, q: 1.0 };
        let spec = sample_spec(p, r, branch, w, axis, up);
        let grid = plan_grid(&spec, &prm, 0.0, 32).unwrap();
        let field = build_gaussian(&spec, &grid, &prm).unwrap();
        let rep = uncertainty_product(&field, &prm).unwrap();
        prop_assert!(rep.robertson_ok, "{rep:?}");
        prop_assert!(rep.product >= rep.robertson_bound - 1e-10);
        prop_assert!(rep.commutator.re.abs() <= 1e-8 * (1.0 + rep.commutator.im.abs()));
    }
}

#[test]
fn gamma_squares_to_minus_one() {
    let d = dirac();
    for k in 0..3 {
        let g = d.gamma(k);
        assert!(close(&(g * g), &scalar(-1.0), 0.0));
        assert!(close(&g.adjoint(), &(-g), 0.0));
    }
}

#[test]
fn spinor_dot_is_antilinear_in_first_slot() {
    let u: Spinor4 = [C64::new(1.0, 2.0), C64::new(0.0, -1.0), C64::new(3.0, 0.5), C64::new(-1.0, 1.0)];
    let v: Spinor4 = [C64::new(0.5, 0.0), C64::new(1.0, 1.0), C64::new(0.0, 2.0), C64::new(2.0, -3.0)];
    let i = C64::new(0.0, 1.0);
    let iu = u.map(|c| c * i);
    assert!((spinor_dot(&iu, &v) + i * spinor_dot(&u, &v)).norm() < 1e-15);
}
