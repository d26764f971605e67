//! Exact evaluation at multiples of π/4.
//!
//! `W_C(ζ)` at a fourth root of unity reduces to Gauss sums of GF(2)
//! quadratic forms on the even-weight subcode, which are classified by their
//! radical and Arf invariant in polynomial time. The θ = π/4 output
//! distribution is uniform on an affine subspace found from `Ker(PᵀP)`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::ops::{Add, Mul};

use num_complex::Complex64;
use rand::Rng;

use crate::codes::code_basis;
use crate::error::{Error, Result};
use crate::gf2::{orthogonal_complement, BinaryMatrix, BitVector};

/// Largest code rank whose `2^r` still fits the exact integer types.
pub const MAX_EXACT_RANK: usize = 125;

/// `re + i·im` with integer parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussianInteger {
    pub re: i128,
    pub im: i128,
}

impl GaussianInteger {
    pub const ZERO: Self = Self { re: 0, im: 0 };

    pub fn new(re: i128, im: i128) -> Self {
        Self { re, im }
    }

    pub fn conj(self) -> Self {
        Self { re: self.re, im: -self.im }
    }

    /// `self · i^k`.
    pub fn times_i_pow(self, k: u32) -> Self {
        match k % 4 {
            0 => self,
            1 => Self { re: -self.im, im: self.re },
            2 => Self { re: -self.re, im: -self.im },
            _ => Self { re: self.im, im: -self.re },
        }
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re as f64, self.im as f64)
    }
}

impl Add for GaussianInteger {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Mul<i128> for GaussianInteger {
    type Output = Self;
    fn mul(self, rhs: i128) -> Self {
        Self {
            re: self.re * rhs,
            im: self.im * rhs,
        }
    }
}

impl fmt::Display for GaussianInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im >= 0 {
            write!(f, "{}+{}i", self.re, self.im)
        } else {
            write!(f, "{}{}i", self.re, self.im)
        }
    }
}

/// `ω^eighths · value / 2^log2_den` with `ω = e^{iπ/4}`.
///
/// Kept normalised: `eighths` is 0 or odd, and the fraction is reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactAlpha {
    pub eighths: u32,
    pub value: GaussianInteger,
    pub log2_den: u32,
}

impl ExactAlpha {
    fn normalised(mut eighths: u32, mut value: GaussianInteger, mut log2_den: u32) -> Self {
        eighths %= 8;
        if eighths % 2 == 0 {
            value = value.times_i_pow(eighths / 2);
            eighths = 0;
        }
        if value.is_zero() {
            return Self {
                eighths: 0,
                value,
                log2_den: 0,
            };
        }
        while log2_den > 0 && value.re % 2 == 0 && value.im % 2 == 0 {
            value.re /= 2;
            value.im /= 2;
            log2_den -= 1;
        }
        Self {
            eighths,
            value,
            log2_den,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let omega = Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2);
        omega.powu(self.eighths) * self.value.to_complex() / (self.log2_den as f64).exp2()
    }
}

/// A GF(2)-valued quadratic form
/// `q(u) = c + Σ_j lin_j u_j + Σ_{j<k} upper_{jk} u_j u_k`.
#[derive(Clone, Debug)]
struct QuadraticForm {
    constant: bool,
    lin: BitVector,
    /// `upper[j]` holds the coefficients `upper_{jk}` for `k > j`.
    upper: Vec<BitVector>,
}

impl QuadraticForm {
    fn dim(&self) -> usize {
        self.lin.len()
    }

    /// `q(u) − q(0)`.
    fn eval_homogeneous(&self, u: &BitVector) -> bool {
        let mut acc = self.lin.dot(u);
        for j in u.ones_iter() {
            acc ^= self.upper[j].dot(u);
        }
        acc
    }

    /// The alternating polar matrix `upper + upperᵀ`.
    fn polar_matrix(&self) -> BinaryMatrix {
        let k = self.dim();
        let mut m = BinaryMatrix::zeros(k, k);
        for (j, row) in self.upper.iter().enumerate() {
            for l in row.ones_iter() {
                m.set(j, l, true);
                m.set(l, j, true);
            }
        }
        m
    }

    /// `Σ_u (−1)^{q(u)}` over GF(2)^k, which is 0 or `±2^{(k + dim rad)/2}`.
    fn gauss_sum(&self) -> i128 {
        let polar = self.polar_matrix();
        let k = self.dim();
        let mut pool: Vec<BitVector> = (0..k).map(|i| BitVector::unit(k, i)).collect();
        let mut arf = false;
        let mut pairs = 0u32;
        // Split off hyperbolic pairs until the remaining pool spans the radical.
        while let Some((i, j)) = find_hyperbolic_pair(&polar, &pool) {
            let (e, f) = if i < j {
                let f = pool.remove(j);
                (pool.remove(i), f)
            } else {
                let e = pool.remove(i);
                (e, pool.remove(j))
            };
            arf ^= self.eval_homogeneous(&e) & self.eval_homogeneous(&f);
            let pe = polar.mul_vec(&e).expect("square polar matrix");
            let pf = polar.mul_vec(&f).expect("square polar matrix");
            for v in pool.iter_mut() {
                let (be, bf) = (v.dot(&pe), v.dot(&pf));
                if bf {
                    v.xor_assign(&e);
                }
                if be {
                    v.xor_assign(&f);
                }
            }
            pairs += 1;
        }
        if pool.iter().any(|v| self.eval_homogeneous(v)) {
            return 0;
        }
        let magnitude = 1i128 << (pool.len() as u32 + pairs);
        if arf ^ self.constant {
            -magnitude
        } else {
            magnitude
        }
    }
}

fn find_hyperbolic_pair(polar: &BinaryMatrix, pool: &[BitVector]) -> Option<(usize, usize)> {
    pool.iter().enumerate().find_map(|(i, e)| {
        let pe = polar.mul_vec(e).expect("square polar matrix");
        pool.iter().position(|f| f.dot(&pe)).map(|j| (i, j))
    })
}

/// `Σ_{c ∈ C} i^{|c|}`, from a basis of the code.
fn quarter_sum(basis: &[BitVector]) -> GaussianInteger {
    let odd = basis.iter().position(|g| g.weight() % 2 == 1);
    let even: Vec<BitVector> = basis
        .iter()
        .enumerate()
        .filter(|&(j, _)| Some(j) != odd)
        .map(|(_, g)| match odd {
            Some(o) if g.weight() % 2 == 1 => g.xor(&basis[o]),
            _ => g.clone(),
        })
        .collect();
    let k = even.len();
    let lin = BitVector::from_bits(even.iter().map(|h| (h.weight() / 2) % 2 == 1));
    let upper = (0..k)
        .map(|j| {
            let mut row = BitVector::zeros(k);
            for l in j + 1..k {
                row.set(l, even[j].and_weight(&even[l]) % 2 == 1);
            }
            row
        })
        .collect();
    let mut form = QuadraticForm {
        constant: false,
        lin,
        upper,
    };
    let even_sum = GaussianInteger::new(form.gauss_sum(), 0);
    let Some(o) = odd else {
        return even_sum;
    };
    // Odd coset g0 + C_e: i^{|g0 + c|} = i^{|g0|} (−1)^{q(c) + |g0 ∧ c|}.
    let g0 = &basis[o];
    for (j, h) in even.iter().enumerate() {
        if g0.and_weight(h) % 2 == 1 {
            form.lin.flip(j);
        }
    }
    let odd_sum = GaussianInteger::new(form.gauss_sum(), 0).times_i_pow((g0.weight() % 4) as u32);
    even_sum + odd_sum
}

/// `Σ_{c ∈ C(P)} i^{k·|c|}` exactly, in time polynomial in the matrix size.
///
/// Fails only when `2^r` would overflow the exact representation
/// (`r > MAX_EXACT_RANK`).
pub fn wenum_at_fourth_root(p: &BinaryMatrix, k: u32) -> Result<GaussianInteger> {
    let basis = code_basis(p);
    let r = basis.len();
    if r > MAX_EXACT_RANK {
        return Err(Error::RankTooLarge {
            rank: r,
            limit: MAX_EXACT_RANK,
        });
    }
    let full = GaussianInteger::new(1i128 << r, 0);
    Ok(match k % 4 {
        0 => full,
        2 => {
            if basis.iter().all(|g| g.weight() % 2 == 0) {
                full
            } else {
                GaussianInteger::ZERO
            }
        }
        1 => quarter_sum(&basis),
        _ => quarter_sum(&basis).conj(),
    })
}

/// `α_{(P, kπ/4)} = 2^{-r} e^{ikπn/4} W(i^{-k})`, exactly.
pub fn alpha_exact(p: &BinaryMatrix, eighth_turns: u32) -> Result<ExactAlpha> {
    let k = eighth_turns % 8;
    let n = p.nrows() as u64;
    let w = wenum_at_fourth_root(p, (4 - k % 4) % 4)?;
    let r = p.rank() as u32;
    Ok(ExactAlpha::normalised(((k as u64 * n) % 8) as u32, w, r))
}

/// A non-negative dyadic rational `numerator / 2^log2_den`, kept reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    pub numerator: u128,
    pub log2_den: u32,
}

impl Dyadic {
    pub const ZERO: Self = Self {
        numerator: 0,
        log2_den: 0,
    };
    pub const ONE: Self = Self {
        numerator: 1,
        log2_den: 0,
    };

    pub fn new(numerator: u128, log2_den: u32) -> Self {
        let mut d = Self { numerator, log2_den };
        if d.numerator == 0 {
            return Self::ZERO;
        }
        while d.log2_den > 0 && d.numerator % 2 == 0 {
            d.numerator /= 2;
            d.log2_den -= 1;
        }
        d
    }

    /// `2^{-exponent}`.
    pub fn inverse_power_of_two(exponent: u32) -> Self {
        Self::new(1, exponent)
    }

    pub fn to_f64(self) -> f64 {
        self.numerator as f64 / (self.log2_den as f64).exp2()
    }
}

impl Add for Dyadic {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let den = self.log2_den.max(rhs.log2_den);
        Dyadic::new(
            (self.numerator << (den - self.log2_den)) + (rhs.numerator << (den - rhs.log2_den)),
            den,
        )
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.log2_den == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/2^{}", self.numerator, self.log2_den)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SupportCase {
    /// `S = V^⊥`.
    One,
    /// `S = U^⊥ \ V^⊥`.
    Two,
}

/// Support of the θ = π/4 distribution, with `V = Ker(PᵀP)` and `U ≤ V` the
/// elements whose affinification length is divisible by 4.
#[derive(Clone, Debug)]
pub struct AffineSupport {
    pub case: SupportCase,
    /// In case Two the first vector is the single remaining element with
    /// `n_s ≡ 2 (mod 4)`; the rest equal `u_basis`.
    pub v_basis: Vec<BitVector>,
    pub u_basis: Vec<BitVector>,
    /// Dimension of the affine support.
    pub dim: usize,
    /// Some point of `S`.
    pub offset: BitVector,
    /// A basis of the direction space `V^⊥`.
    pub directions: Vec<BitVector>,
}

impl AffineSupport {
    pub fn contains(&self, x: &BitVector) -> bool {
        match self.case {
            SupportCase::One => self.v_basis.iter().all(|v| !v.dot(x)),
            SupportCase::Two => {
                self.u_basis.iter().all(|u| !u.dot(x)) && self.v_basis[0].dot(x)
            }
        }
    }

    pub fn probability(&self, x: &BitVector) -> Dyadic {
        if self.contains(x) {
            Dyadic::inverse_power_of_two(self.dim as u32)
        } else {
            Dyadic::ZERO
        }
    }

    /// Uniform sample from `S`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BitVector {
        let mut x = self.offset.clone();
        for d in &self.directions {
            if rng.gen::<bool>() {
                x.xor_assign(d);
            }
        }
        x
    }
}

/// Computes `V`, repairs a basis of `V` into one of `U`, and decides the case.
pub fn clifford_support(p: &BinaryMatrix) -> AffineSupport {
    let l = p.ncols();
    let gram = p.transpose().mul(p).expect("PᵀP is always defined");
    let mut v = gram.kernel();
    let affine_len = |s: &BitVector| p.mul_vec(s).expect("length l").weight();
    let bad: Vec<usize> = (0..v.len()).filter(|&i| affine_len(&v[i]) % 4 != 0).collect();
    let directions = orthogonal_complement(&v, l);
    let dim = directions.len();
    let Some(&pivot) = bad.last() else {
        return AffineSupport {
            case: SupportCase::One,
            u_basis: v.clone(),
            v_basis: v,
            dim,
            offset: BitVector::zeros(l),
            directions,
        };
    };
    let reference = v[pivot].clone();
    for &i in &bad[..bad.len() - 1] {
        v[i].xor_assign(&reference);
        debug_assert_eq!(affine_len(&v[i]) % 4, 0);
    }
    let u_basis: Vec<BitVector> = v
        .into_iter()
        .enumerate()
        .filter(|&(i, _)| i != pivot)
        .map(|(_, s)| s)
        .collect();
    let mut constraints = u_basis.clone();
    constraints.push(reference.clone());
    let mut rhs = BitVector::zeros(constraints.len());
    rhs.set(constraints.len() - 1, true);
    let offset = BinaryMatrix::from_rows(constraints, l)
        .expect("all vectors have length l")
        .solve(&rhs)
        .expect("dimensions agree")
        .expect("the reference vector is independent of U");
    let mut v_basis = vec![reference];
    v_basis.extend(u_basis.iter().cloned());
    AffineSupport {
        case: SupportCase::Two,
        v_basis,
        u_basis,
        dim,
        offset,
        directions,
    }
}

/// `P[X = x]` at θ = π/4, as an exact dyadic rational.
pub fn clifford_probability(p: &BinaryMatrix, x: &BitVector) -> Dyadic {
    clifford_support(p).probability(x)
}

/// Exact sample from the θ = π/4 distribution.
pub fn clifford_sample<R: Rng + ?Sized>(p: &BinaryMatrix, rng: &mut R) -> BitVector {
    clifford_support(p).sample(rng)
}
