//! Two-component spinors and 2x2 complex matrices.
//!
//! Everything in the automaton reduces per momentum mode to SU(2) arithmetic,
//! so a tiny fixed-size kernel is all we need.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

pub use num_complex::Complex64 as C64;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };
pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// A two-component complex vector `(psi_R, psi_L)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Spinor2(pub [C64; 2]);

impl Spinor2 {
    pub const fn new(r: C64, l: C64) -> Self {
        Self([r, l])
    }

    pub fn real(r: f64, l: f64) -> Self {
        Self([C64::new(r, 0.0), C64::new(l, 0.0)])
    }

    #[inline]
    pub fn r(&self) -> C64 {
        self.0[0]
    }

    #[inline]
    pub fn l(&self) -> C64 {
        self.0[1]
    }

    #[inline]
    pub fn norm_sqr(&self) -> f64 {
        self.0[0].norm_sqr() + self.0[1].norm_sqr()
    }

    /// `<self|other>`, antilinear in `self`.
    #[inline]
    pub fn inner(&self, other: &Spinor2) -> C64 {
        self.0[0].conj() * other.0[0] + self.0[1].conj() * other.0[1]
    }

    #[inline]
    pub fn scale(&self, z: C64) -> Spinor2 {
        Spinor2([self.0[0] * z, self.0[1] * z])
    }

    pub fn max_abs_diff(&self, other: &Spinor2) -> f64 {
        (self.0[0] - other.0[0])
            .norm()
            .max((self.0[1] - other.0[1]).norm())
    }
}

impl Add for Spinor2 {
    type Output = Spinor2;
    fn add(self, o: Spinor2) -> Spinor2 {
        Spinor2([self.0[0] + o.0[0], self.0[1] + o.0[1]])
    }
}

impl Sub for Spinor2 {
    type Output = Spinor2;
    fn sub(self, o: Spinor2) -> Spinor2 {
        Spinor2([self.0[0] - o.0[0], self.0[1] - o.0[1]])
    }
}

/// Row-major 2x2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2::new(a.into(), b.into(), c.into(), d.into())
    }

    pub const fn identity() -> Self {
        Mat2([[ONE, ZERO], [ZERO, ONE]])
    }

    pub const fn zero() -> Self {
        Mat2([[ZERO, ZERO], [ZERO, ZERO]])
    }

    pub const fn pauli_x() -> Self {
        Mat2([[ZERO, ONE], [ONE, ZERO]])
    }

    pub const fn pauli_z() -> Self {
        Mat2([[ONE, ZERO], [ZERO, C64 { re: -1.0, im: 0.0 }]])
    }

    pub fn adjoint(&self) -> Mat2 {
        let a = &self.0;
        Mat2([
            [a[0][0].conj(), a[1][0].conj()],
            [a[0][1].conj(), a[1][1].conj()],
        ])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Mat2 {
        let a = &self.0;
        Mat2([
            [a[0][0].conj(), a[0][1].conj()],
            [a[1][0].conj(), a[1][1].conj()],
        ])
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn scale(&self, z: C64) -> Mat2 {
        let a = &self.0;
        Mat2([[a[0][0] * z, a[0][1] * z], [a[1][0] * z, a[1][1] * z]])
    }

    pub fn apply(&self, v: &Spinor2) -> Spinor2 {
        let a = &self.0;
        Spinor2([
            a[0][0] * v.0[0] + a[0][1] * v.0[1],
            a[1][0] * v.0[0] + a[1][1] * v.0[1],
        ])
    }

    /// `|u><v|`
    pub fn outer(u: &Spinor2, v: &Spinor2) -> Mat2 {
        Mat2([
            [u.0[0] * v.0[0].conj(), u.0[0] * v.0[1].conj()],
            [u.0[1] * v.0[0].conj(), u.0[1] * v.0[1].conj()],
        ])
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.max_abs_diff(&Mat2::zero())
    }

    /// Entrywise residual of `A^dagger A = I`.
    pub fn unitarity_residual(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&Mat2::identity())
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, mut e: u64) -> Mat2 {
        let mut base = *self;
        let mut acc = Mat2::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// `exp(-i t H)` for Hermitian `H`, through the Pauli decomposition
    /// `H = h0 I + h . sigma`.
    pub fn exp_i_hermitian(&self, t: f64) -> Mat2 {
        let a = &self.0;
        let h0 = 0.5 * (a[0][0].re + a[1][1].re);
        let hz = 0.5 * (a[0][0].re - a[1][1].re);
        let hx = a[0][1].re;
        let hy = -a[0][1].im;
        let r = (hx * hx + hy * hy + hz * hz).sqrt();
        let c = (r * t).cos();
        // sin(r t) / r, continuous at r = 0
        let s = if r * t.abs() < 1e-8 {
            t
        } else {
            (r * t).sin() / r
        };
        let global = C64::from_polar(1.0, -h0 * t);
        let m = Mat2([
            [C64::new(c, -s * hz), C64::new(-s * hy, -s * hx)],
            [C64::new(s * hy, -s * hx), C64::new(c, s * hz)],
        ]);
        m.scale(global)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let a = &self.0;
        let b = &o.0;
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        let a = &self.0;
        let b = &o.0;
        Mat2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        self + (-o)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Index<(usize, usize)> for Mat2 {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.0[r][c]
    }
}

impl IndexMut<(usize, usize)> for Mat2 {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.0[r][c]
    }
}
