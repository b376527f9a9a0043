//! Exact 4×4 complex kernel: Dirac matrices in the Dirac–Pauli representation,
//! brackets, a cyclic Jacobi eigensolver for Hermitian matrices and unitary
//! exponentials.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Four complex amplitudes of a Dirac spinor.
pub type Spinor4 = [C64; 4];

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

const JACOBI_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;
const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix4(pub [[C64; 4]; 4]);

impl Default for Matrix4 {
    fn default() -> Self {
        Self::zero()
    }
}

impl Matrix4 {
    pub const fn zero() -> Self {
        Matrix4([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        Self::diag([1.0; 4])
    }

    pub fn diag(d: [f64; 4]) -> Self {
        let mut m = Self::zero();
        for k in 0..4 {
            m.0[k][k] = C64::new(d[k], 0.0);
        }
        m
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> C64) -> Self {
        let mut m = Self::zero();
        for r in 0..4 {
            for c in 0..4 {
                m.0[r][c] = f(r, c);
            }
        }
        m
    }

    /// Builds the block matrix `[[a, b], [c, d]]` out of 2×2 blocks.
    pub fn from_blocks(a: [[C64; 2]; 2], b: [[C64; 2]; 2], c: [[C64; 2]; 2], d: [[C64; 2]; 2]) -> Self {
        Self::from_fn(|r, col| match (r < 2, col < 2) {
            (true, true) => a[r][col],
            (true, false) => b[r][col - 2],
            (false, true) => c[r - 2][col],
            (false, false) => d[r - 2][col - 2],
        })
    }

    /// `u v†`
    pub fn outer(u: &Spinor4, v: &Spinor4) -> Self {
        Self::from_fn(|r, c| u[r] * v[c].conj())
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.0[r][c]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|r, c| self.0[c][r].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_fn(|r, c| self.0[r][c] * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Self::from_fn(|r, c| self.0[r][c] * s)
    }

    pub fn trace(&self) -> C64 {
        (0..4).map(|k| self.0[k][k]).sum()
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|row| row.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (*self - self.adjoint()).max_norm() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (*self * self.adjoint() - Self::identity()).max_norm() <= tol
    }

    pub fn apply(&self, v: &Spinor4) -> Spinor4 {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2] + m[0][3] * v[3],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2] + m[1][3] * v[3],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2] + m[2][3] * v[3],
            m[3][0] * v[0] + m[3][1] * v[1] + m[3][2] * v[2] + m[3][3] * v[3],
        ]
    }

    /// `u† M v`
    pub fn sandwich(&self, u: &Spinor4, v: &Spinor4) -> C64 {
        spinor_dot(u, &self.apply(v))
    }
}

impl Add for Matrix4 {
    type Output = Matrix4;
    fn add(self, rhs: Matrix4) -> Matrix4 {
        Matrix4::from_fn(|r, c| self.0[r][c] + rhs.0[r][c])
    }
}

impl AddAssign for Matrix4 {
    fn add_assign(&mut self, rhs: Matrix4) {
        for r in 0..4 {
            for c in 0..4 {
                self.0[r][c] += rhs.0[r][c];
            }
        }
    }
}

impl Sub for Matrix4 {
    type Output = Matrix4;
    fn sub(self, rhs: Matrix4) -> Matrix4 {
        Matrix4::from_fn(|r, c| self.0[r][c] - rhs.0[r][c])
    }
}

impl Neg for Matrix4 {
    type Output = Matrix4;
    fn neg(self) -> Matrix4 {
        self.scale_re(-1.0)
    }
}

impl Mul for Matrix4 {
    type Output = Matrix4;
    fn mul(self, rhs: Matrix4) -> Matrix4 {
        Matrix4::from_fn(|r, c| (0..4).map(|k| self.0[r][k] * rhs.0[k][c]).sum())
    }
}

impl Mul<f64> for Matrix4 {
    type Output = Matrix4;
    fn mul(self, s: f64) -> Matrix4 {
        self.scale_re(s)
    }
}

impl Mul<C64> for Matrix4 {
    type Output = Matrix4;
    fn mul(self, s: C64) -> Matrix4 {
        self.scale(s)
    }
}

/// `u† v`
pub fn spinor_dot(u: &Spinor4, v: &Spinor4) -> C64 {
    u[0].conj() * v[0] + u[1].conj() * v[1] + u[2].conj() * v[2] + u[3].conj() * v[3]
}

pub fn spinor_norm_sqr(u: &Spinor4) -> f64 {
    u.iter().map(|z| z.norm_sqr()).sum()
}

pub fn spinor_scale(u: &Spinor4, s: C64) -> Spinor4 {
    [u[0] * s, u[1] * s, u[2] * s, u[3] * s]
}

pub fn spinor_add(u: &Spinor4, v: &Spinor4) -> Spinor4 {
    [u[0] + v[0], u[1] + v[1], u[2] + v[2], u[3] + v[3]]
}

/// Fixed Dirac–Pauli set: `β = diag(1,1,−1,−1)`, `α_k = [[0,σ_k],[σ_k,0]]`,
/// `Σ_k = diag(σ_k, σ_k)`.
#[derive(Clone, Debug)]
pub struct DiracBasis {
    pub alpha: [Matrix4; 3],
    pub beta: Matrix4,
    pub sigma: [Matrix4; 3],
    pub identity: Matrix4,
}

pub fn pauli() -> [[[C64; 2]; 2]; 3] {
    [
        [[ZERO, ONE], [ONE, ZERO]],
        [[ZERO, -I], [I, ZERO]],
        [[ONE, ZERO], [ZERO, -ONE]],
    ]
}

pub fn build_dirac_basis() -> DiracBasis {
    let z = [[ZERO; 2]; 2];
    let id2 = [[ONE, ZERO], [ZERO, ONE]];
    let s = pauli();
    DiracBasis {
        alpha: [0, 1, 2].map(|k| Matrix4::from_blocks(z, s[k], s[k], z)),
        beta: Matrix4::diag([1.0, 1.0, -1.0, -1.0]),
        sigma: [0, 1, 2].map(|k| Matrix4::from_blocks(s[k], z, z, s[k])),
        identity: Matrix4::from_blocks(id2, z, z, id2),
    }
}

/// Shared instance of the basis.
pub fn dirac() -> &'static DiracBasis {
    static BASIS: OnceLock<DiracBasis> = OnceLock::new();
    BASIS.get_or_init(build_dirac_basis)
}

impl DiracBasis {
    /// `α·v`
    pub fn alpha_dot(&self, v: [f64; 3]) -> Matrix4 {
        self.alpha[0] * v[0] + self.alpha[1] * v[1] + self.alpha[2] * v[2]
    }

    /// `Σ·v`
    pub fn sigma_dot(&self, v: [f64; 3]) -> Matrix4 {
        self.sigma[0] * v[0] + self.sigma[1] * v[1] + self.sigma[2] * v[2]
    }

    /// `γ_k = β α_k`, anti-Hermitian.
    pub fn gamma(&self, k: usize) -> Matrix4 {
        self.beta * self.alpha[k]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketKind {
    Commutator,
    Anticommutator,
}

pub fn bracket(a: &Matrix4, b: &Matrix4, kind: BracketKind) -> Matrix4 {
    let ab = *a * *b;
    let ba = *b * *a;
    match kind {
        BracketKind::Commutator => ab - ba,
        BracketKind::Anticommutator => ab + ba,
    }
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Clone, Copy, Debug)]
pub struct Eigensystem {
    pub values: [f64; 4],
    pub vectors: [Spinor4; 4],
}

impl Eigensystem {
    /// `Σ λ_k v_k v_k†`
    pub fn reconstruct(&self) -> Matrix4 {
        let mut m = Matrix4::zero();
        for k in 0..4 {
            m += Matrix4::outer(&self.vectors[k], &self.vectors[k]) * self.values[k];
        }
        m
    }

    /// Orthogonal projector onto the span of the eigenvectors whose eigenvalue
    /// satisfies `select`.
    pub fn projector(&self, select: impl Fn(f64) -> bool) -> Matrix4 {
        let mut m = Matrix4::zero();
        for k in 0..4 {
            if select(self.values[k]) {
                m += Matrix4::outer(&self.vectors[k], &self.vectors[k]);
            }
        }
        m
    }
}

fn off_diagonal_norm(a: &Matrix4) -> f64 {
    let mut s = 0.0;
    for r in 0..4 {
        for c in 0..4 {
            if r != c {
                s += a.0[r][c].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi diagonalization of a Hermitian 4×4 matrix.
pub fn hermitian_eigensystem(m: &Matrix4) -> Result<Eigensystem> {
    if !m.is_finite() {
        return Err(Error::validation("matrix has non-finite entries"));
    }
    if !m.is_hermitian(HERMITIAN_TOL * m.max_norm().max(1.0)) {
        return Err(Error::validation("matrix is not Hermitian"));
    }
    // Symmetrize so that round-off in the input cannot leak into the rotations.
    let mut a = (*m + m.adjoint()).scale_re(0.5);
    let mut v = Matrix4::identity();
    let scale = a.max_norm().max(f64::MIN_POSITIVE);

    let mut previous = f64::INFINITY;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off = off_diagonal_norm(&a);
        // stop at round-off level or once a sweep no longer helps
        if off <= f64::EPSILON * scale || (off <= JACOBI_TOL * scale && off >= previous) {
            break;
        }
        previous = off;
        for p in 0..3 {
            for q in (p + 1)..4 {
                let apq = a.0[p][q];
                let mag = apq.norm();
                if mag <= f64::MIN_POSITIVE {
                    continue;
                }
                // Phase-rotate so the (p,q) element is real, then apply the real
                // Jacobi rotation.
                let phase = apq / mag;
                let theta = (a.0[q][q].re - a.0[p][p].re) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let mut g = Matrix4::identity();
                g.0[p][p] = C64::new(c, 0.0);
                g.0[p][q] = C64::new(s, 0.0);
                g.0[q][p] = -phase.conj() * s;
                g.0[q][q] = phase.conj() * c;
                a = g.adjoint() * a * g;
                a.0[p][q] = ZERO;
                a.0[q][p] = ZERO;
                v = v * g;
            }
        }
    }
    if off_diagonal_norm(&a) > JACOBI_TOL * scale {
        return Err(Error::runtime("Jacobi iteration did not converge"));
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&x, &y| a.0[x][x].re.total_cmp(&a.0[y][y].re));
    let values = order.map(|k| a.0[k][k].re);
    let vectors = order.map(|k| [v.0[0][k], v.0[1][k], v.0[2][k], v.0[3][k]]);
    Ok(Eigensystem { values, vectors })
}

/// `exp(i s m)` for Hermitian `m`, via its eigensystem.
pub fn unitary_exponential(m: &Matrix4, s: f64) -> Result<Matrix4> {
    let es = hermitian_eigensystem(m)?;
    let mut u = Matrix4::zero();
    for k in 0..4 {
        let phase = C64::from_polar(1.0, s * es.values[k]);
        u += Matrix4::outer(&es.vectors[k], &es.vectors[k]) * phase;
    }
    Ok(u)
}

/// `exp(i s m)` for a Hermitian `m` with `m² = root² I`:
/// `cos(s·root) I + i sin(s·root)/root · m`. This is the per-node fast path for
/// `H(p)` and `T(r)`, whose squares are scalar.
pub fn scalar_square_exponential(m: &Matrix4, s: f64, root: f64) -> Matrix4 {
    let arg = s * root;
    let sinc = if root.abs() < 1e-300 { s } else { arg.sin() / root };
    Matrix4::identity() * arg.cos() + *m * C64::new(0.0, sinc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Matrix4, b: &Matrix4, tol: f64) -> bool {
        (*a - *b).max_norm() <= tol
    }

    #[test]
    fn beta_squares_to_identity() {
        let d = build_dirac_basis();
        assert!(close(&(d.beta * d.beta), &d.identity, 1e-15));
        assert_eq!(d.beta, Matrix4::diag([1.0, 1.0, -1.0, -1.0]));
    }

    #[test]
    fn alpha_anticommutes_with_beta() {
        let d = build_dirac_basis();
        for k in 0..3 {
            let ac = bracket(&d.alpha[k], &d.beta, BracketKind::Anticommutator);
            assert!(ac.max_norm() < 1e-15);
        }
    }

    #[test]
    fn clifford_relations() {
        let d = build_dirac_basis();
        for i in 0..3 {
            for j in 0..3 {
                let ac = bracket(&d.alpha[i], &d.alpha[j], BracketKind::Anticommutator);
                let expect = if i == j { d.identity * 2.0 } else { Matrix4::zero() };
                assert!(close(&ac, &expect, 1e-15), "{i}{j}");
            }
        }
    }

    #[test]
    fn spin_from_alpha_products() {
        // Σ_k = −(i/2) ε_kij α_i α_j
        let d = build_dirac_basis();
        for k in 0..3 {
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            let s = (d.alpha[i] * d.alpha[j] - d.alpha[j] * d.alpha[i]) * C64::new(0.0, -0.5);
            assert!(close(&s, &d.sigma[k], 1e-15));
        }
    }

    #[test]
    fn bracket_examples() {
        let d = build_dirac_basis();
        let c = bracket(&d.identity, &d.beta, BracketKind::Commutator);
        assert_eq!(c.max_norm(), 0.0);
        let ac = bracket(&d.alpha[0], &d.alpha[0], BracketKind::Anticommutator);
        assert!(close(&ac, &(d.identity * 2.0), 0.0));
        // direct product oracle: [α_z, β] = α_zβ − βα_z = 2α_zβ
        let c = bracket(&d.alpha[2], &d.beta, BracketKind::Commutator);
        let mut direct = Matrix4::zero();
        for r in 0..4 {
            for col in 0..4 {
                let mut s = ZERO;
                for k in 0..4 {
                    s += d.alpha[2].0[r][k] * d.beta.0[k][col] * 2.0;
                }
                direct.0[r][col] = s;
            }
        }
        assert!(close(&c, &direct, 1e-15));
    }

    #[test]
    fn eigen_of_beta() {
        let es = hermitian_eigensystem(&dirac().beta).unwrap();
        assert_eq!(es.values, [-1.0, -1.0, 1.0, 1.0]);
    }

    #[test]
    fn eigen_of_time_like_matrix() {
        let d = dirac();
        let m = d.alpha[2] * 3.0 + d.beta * 4.0;
        let es = hermitian_eigensystem(&m).unwrap();
        for (v, e) in es.values.iter().zip([-5.0, -5.0, 5.0, 5.0]) {
            assert!((v - e).abs() < 1e-12);
        }
        for k in 0..4 {
            let mv = m.apply(&es.vectors[k]);
            for c in 0..4 {
                assert!((mv[c] - es.vectors[k][c] * es.values[k]).norm() < 1e-12);
            }
        }
        assert!(close(&es.reconstruct(), &m, 1e-12));
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = Matrix4::identity();
        m.0[0][1] = ONE;
        assert!(matches!(hermitian_eigensystem(&m), Err(Error::Validation(_))));
        assert!(unitary_exponential(&m, 1.0).is_err());
    }

    #[test]
    fn exponential_examples() {
        let d = dirac();
        let u = unitary_exponential(&(d.alpha[0] * 0.3 + d.beta), 0.0).unwrap();
        assert!(close(&u, &Matrix4::identity(), 1e-14));
        let u = unitary_exponential(&d.beta, std::f64::consts::PI).unwrap();
        assert!(close(&u, &(-Matrix4::identity()), 1e-14));
    }

    #[test]
    fn hamiltonian_exponential_phases() {
        // H(p) at p = (0,0,0.75), m = 1 has eigenvalues ±1.25; exp(−iHt) has
        // eigenphases ∓1.25 t.
        let d = dirac();
        let h = d.alpha[2] * 0.75 + d.beta;
        let t = 0.7;
        let u = unitary_exponential(&h, -t).unwrap();
        assert!(u.is_unitary(1e-12));
        let es = hermitian_eigensystem(&h).unwrap();
        for k in 0..4 {
            let uv = u.apply(&es.vectors[k]);
            let expect = C64::from_polar(1.0, -es.values[k] * t);
            for c in 0..4 {
                assert!((uv[c] - es.vectors[k][c] * expect).norm() < 1e-12);
            }
        }
        assert!((es.values[3] - 1.25).abs() < 1e-13);
        let fast = scalar_square_exponential(&h, -t, 1.25);
        assert!(close(&fast, &u, 1e-13));
    }
}
