//! Marginals of X-program outputs under idempotent linear maps.
//!
//! A [`Projector`] `m` acts as `x ↦ M·x`. Marginal distributions live on its
//! range `R` and are indexed by coordinates in [`Projector::range_basis`]:
//! index bit `i` is the coefficient of the `i`-th basis vector. Correlation
//! coefficients are taken over `R*`, the range of the dual map.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::clifford;
use crate::codes::{self, Angle};
use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BitVector};
use crate::xprogram::{self, walsh_hadamard, XProgram, NEGATIVE_TOLERANCE};
use crate::Limits;

/// Conditional vectors in the sampler must sum to one within this.
pub const SAMPLER_SUM_TOLERANCE: f64 = 1e-9;
/// Conditional entries may undershoot zero by at most this.
pub const SAMPLER_NEGATIVE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Projector {
    matrix: BinaryMatrix,
    kernel_basis: Vec<BitVector>,
    range_basis: Vec<BitVector>,
    dual_kernel_basis: Vec<BitVector>,
    dual_range_basis: Vec<BitVector>,
    support_bits: usize,
}

/// Validates `M² = M` and computes the kernel and range of `M` and `Mᵀ`.
pub fn make_projector(m: BinaryMatrix) -> Result<Projector> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.ncols(),
            found: m.nrows(),
        });
    }
    if m.mul(&m)? != m {
        return Err(Error::NotIdempotent);
    }
    let l = m.ncols();
    let mt = m.transpose();
    let kernel_basis = m.kernel();
    let dual_kernel_basis = mt.kernel();
    let range_basis = mt.rref().0;
    let dual_range_basis = m.rref().0;
    let unit_kernel = (0..l).filter(|&j| m.column(j).is_zero()).count();
    Ok(Projector {
        matrix: m,
        kernel_basis,
        range_basis,
        dual_kernel_basis,
        dual_range_basis,
        support_bits: l - unit_kernel,
    })
}

impl Projector {
    /// The diagonal mask keeping the listed bits of `GF(2)^l`.
    pub fn mask(l: usize, bits: &[usize]) -> Result<Self> {
        let mut m = BinaryMatrix::zeros(l, l);
        for &b in bits {
            if b >= l {
                return Err(Error::DimensionMismatch { expected: l, found: b + 1 });
            }
            m.set(b, b, true);
        }
        make_projector(m)
    }

    pub fn identity(l: usize) -> Self {
        make_projector(BinaryMatrix::identity(l)).expect("identity is idempotent")
    }

    pub fn zero(l: usize) -> Self {
        make_projector(BinaryMatrix::zeros(l, l)).expect("zero is idempotent")
    }

    pub fn matrix(&self) -> &BinaryMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.ncols()
    }

    /// `K = ker m`.
    pub fn kernel_basis(&self) -> &[BitVector] {
        &self.kernel_basis
    }

    /// `R = im m`.
    pub fn range_basis(&self) -> &[BitVector] {
        &self.range_basis
    }

    /// `K* = ker mᵀ`.
    pub fn dual_kernel_basis(&self) -> &[BitVector] {
        &self.dual_kernel_basis
    }

    /// `R* = im mᵀ`.
    pub fn dual_range_basis(&self) -> &[BitVector] {
        &self.dual_range_basis
    }

    /// `|m|`.
    pub fn range_dim(&self) -> usize {
        self.range_basis.len()
    }

    /// Number of bits `j` with `e_j ∉ K`.
    pub fn support_bits(&self) -> usize {
        self.support_bits
    }

    /// Bits `j` with `e_j ∉ K`, ascending.
    pub fn supported(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&j| !self.matrix.column(j).is_zero())
            .collect()
    }

    pub fn apply(&self, x: &BitVector) -> Result<BitVector> {
        self.matrix.mul_vec(x)
    }

    /// The point of `R` with coordinates `index` in the range basis.
    pub fn range_point(&self, index: usize) -> BitVector {
        combine(&self.range_basis, self.dim(), index as u64)
    }

    /// The point of `R*` with coordinates `index` in the dual range basis.
    pub fn dual_point(&self, index: usize) -> BitVector {
        combine(&self.dual_range_basis, self.dim(), index as u64)
    }

    /// Range-basis coordinates of `x`, or `None` if `x ∉ R`.
    pub fn coordinates(&self, x: &BitVector) -> Option<usize> {
        let (rows, pivots) = BinaryMatrix::from_rows(self.range_basis.clone(), self.dim())
            .ok()?
            .rref();
        // range_basis is already reduced, so rows == range_basis
        let mut residual = x.clone();
        let mut index = 0usize;
        for (i, (row, &p)) in rows.iter().zip(&pivots).enumerate() {
            if residual.get(p) {
                residual.xor_assign(row);
                index |= 1 << i;
            }
        }
        residual.is_zero().then_some(index)
    }

    /// `w_j = ⊕_i y_i (r_i · t_j)` for every range index `y`.
    fn pairing_table(&self) -> Vec<usize> {
        let k = self.range_dim();
        let gram: Vec<usize> = self
            .range_basis
            .iter()
            .map(|r| {
                self.dual_range_basis
                    .iter()
                    .enumerate()
                    .filter(|(_, t)| r.dot(t))
                    .fold(0usize, |acc, (j, _)| acc | 1 << j)
            })
            .collect();
        (0..1usize << k)
            .map(|y| {
                (0..k)
                    .filter(|i| y >> i & 1 == 1)
                    .fold(0, |acc, i| acc ^ gram[i])
            })
            .collect()
    }

    fn check_range(&self, limits: &Limits) -> Result<()> {
        if self.range_dim() > limits.max_range_dim {
            return Err(Error::RangeTooLarge {
                dim: self.range_dim(),
                limit: limits.max_range_dim,
            });
        }
        Ok(())
    }
}

fn combine(basis: &[BitVector], len: usize, index: u64) -> BitVector {
    let mut v = BitVector::zeros(len);
    for (i, b) in basis.iter().enumerate() {
        if index >> i & 1 == 1 {
            v.xor_assign(b);
        }
    }
    v
}

/// A distribution over the range of a projector.
#[derive(Clone, Debug, PartialEq)]
pub struct Marginal {
    /// `l`.
    pub dim: usize,
    pub range_basis: Vec<BitVector>,
    pub probabilities: Vec<f64>,
    /// `Σ p − 1` before renormalisation.
    pub drift: f64,
}

impl Marginal {
    pub fn range_dim(&self) -> usize {
        self.range_basis.len()
    }

    /// The point of `GF(2)^l` with range coordinates `index`.
    pub fn point(&self, index: usize) -> BitVector {
        combine(&self.range_basis, self.dim, index as u64)
    }

    pub fn max_abs_diff(&self, other: &Marginal) -> f64 {
        assert_eq!(self.probabilities.len(), other.probabilities.len());
        self.probabilities
            .iter()
            .zip(&other.probabilities)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `P[y] = 2^{-k} Σ_z (−1)^{z·w(y)} β(z)` with `β` indexed by `R*` coordinates.
fn assemble(m: &Projector, mut betas: Vec<f64>) -> Result<Marginal> {
    let k = m.range_dim();
    walsh_hadamard(&mut betas);
    let scale = (k as f64).exp2();
    let table = m.pairing_table();
    let mut probabilities = Vec::with_capacity(table.len());
    for (y, &w) in table.iter().enumerate() {
        let p = betas[w] / scale;
        if p < -NEGATIVE_TOLERANCE {
            return Err(Error::NumericalInconsistency(format!(
                "marginal probability {p:e} at range index {y} is negative"
            )));
        }
        probabilities.push(p.max(0.0));
    }
    let total: f64 = probabilities.iter().sum();
    if total <= 0.0 {
        return Err(Error::NumericalInconsistency("marginal sums to zero".into()));
    }
    probabilities.iter_mut().for_each(|p| *p /= total);
    Ok(Marginal {
        dim: m.dim(),
        range_basis: m.range_basis.clone(),
        probabilities,
        drift: total - 1.0,
    })
}

fn betas_over_dual<F>(m: &Projector, beta: F) -> Result<Vec<f64>>
where
    F: Fn(&BitVector) -> Result<f64> + Sync,
{
    (0..1usize << m.range_dim())
        .into_par_iter()
        .map(|z| {
            if z == 0 {
                Ok(1.0)
            } else {
                beta(&m.dual_point(z))
            }
        })
        .collect()
}

fn check_program(prog: &XProgram, m: &Projector) -> Result<()> {
    if m.dim() != prog.qubits() {
        return Err(Error::DimensionMismatch {
            expected: prog.qubits(),
            found: m.dim(),
        });
    }
    Ok(())
}

/// `P[m(X) = x] = E_{s ∈ R*} (−1)^{x·s} β_s` for `x ∈ R`.
pub fn marginal_distribution(prog: &XProgram, m: &Projector) -> Result<Marginal> {
    marginal_distribution_with(prog, m, &Limits::default())
}

pub fn marginal_distribution_with(
    prog: &XProgram,
    m: &Projector,
    limits: &Limits,
) -> Result<Marginal> {
    check_program(prog, m)?;
    m.check_range(limits)?;
    let betas = betas_over_dual(m, |s| xprogram::beta_with(prog, s, limits))?;
    assemble(m, betas)
}

/// The marginal at `θ = π/8`, with every `β_s = α(P_s, π/4)` evaluated exactly.
pub fn marginal_pi8(p: &BinaryMatrix, m: &Projector) -> Result<Marginal> {
    marginal_pi8_with(p, m, &Limits::default())
}

pub fn marginal_pi8_with(p: &BinaryMatrix, m: &Projector, limits: &Limits) -> Result<Marginal> {
    if m.dim() != p.ncols() {
        return Err(Error::DimensionMismatch {
            expected: p.ncols(),
            found: m.dim(),
        });
    }
    m.check_range(limits)?;
    let betas = betas_over_dual(m, |s| {
        let ps = codes::affinify(p, s)?;
        let value = clifford::alpha_exact(&ps, 1)?.to_complex();
        xprogram::real_part(value, s)
    })?;
    assemble(m, betas)
}

/// The marginal when every column of `P` has at most `c` ones: each `P_s`
/// then has at most `c·|s|` rows and its code is enumerated directly.
pub fn marginal_sparse(prog: &XProgram, m: &Projector, c: usize) -> Result<Marginal> {
    marginal_sparse_with(prog, m, c, &Limits::default())
}

pub fn marginal_sparse_with(
    prog: &XProgram,
    m: &Projector,
    c: usize,
    limits: &Limits,
) -> Result<Marginal> {
    check_program(prog, m)?;
    for (column, &weight) in prog.matrix().column_weights().iter().enumerate() {
        if weight > c {
            return Err(Error::ColumnBoundViolated { column, weight, bound: c });
        }
    }
    m.check_range(limits)?;
    let doubled = prog.angle().doubled().value();
    let betas = betas_over_dual(m, |s| {
        let ps = codes::affinify(prog.matrix(), s)?;
        assert!(ps.nrows() <= c * s.weight(), "n_s exceeds c·|s|");
        let value = codes::weight_enumerator_with(&ps, limits)?.alpha(doubled);
        xprogram::real_part(value, s)
    })?;
    assemble(m, betas)
}

/// `β_s` for a program whose rows have at most two ones, by summing over the
/// values of the (at most two) bits in `supp(s)` and factoring the rest.
pub fn graphic_beta(p: &BinaryMatrix, theta: Angle, s: &BitVector) -> Result<f64> {
    if s.len() != p.ncols() {
        return Err(Error::DimensionMismatch {
            expected: p.ncols(),
            found: s.len(),
        });
    }
    for (row, r) in p.rows().iter().enumerate() {
        if r.weight() > 2 {
            return Err(Error::RowWeightViolated { row, weight: r.weight() });
        }
    }
    let hubs: Vec<usize> = s.ones_iter().collect();
    if hubs.len() > 2 {
        return Err(Error::SupportTooLarge { bits: hubs.len(), limit: 2 });
    }
    let phi = theta.doubled().value();
    let l = p.ncols();
    // hub-only rows as a mask over hubs; partner counts per column
    let mut hub_rows: Vec<usize> = Vec::new();
    let mut partners = vec![[0i64; 2]; l];
    for r in p.rows().iter().filter(|r| r.dot(s)) {
        let mut mask = 0usize;
        let mut other = None;
        for j in r.ones_iter() {
            match hubs.iter().position(|&h| h == j) {
                Some(i) => mask |= 1 << i,
                None => other = Some(j),
            }
        }
        match other {
            None => hub_rows.push(mask),
            Some(j) => partners[j][mask.trailing_zeros() as usize] += 1,
        }
    }
    let mut total = Complex64::new(0.0, 0.0);
    for v in 0..1usize << hubs.len() {
        let sign = |mask: usize| if (v & mask).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        let exponent: f64 = hub_rows.iter().map(|&mask| sign(mask)).sum();
        let mut term = Complex64::from_polar(1.0, phi * exponent);
        for [a, b] in partners.iter().filter(|c| c[0] != 0 || c[1] != 0) {
            let base = *a as f64 * sign(1) + *b as f64 * sign(2);
            term *= (phi * base).cos();
        }
        total += term;
    }
    total /= (hubs.len() as f64).exp2();
    xprogram::real_part(total, s)
}

/// The marginal for programs with at most two ones per row and projectors
/// supported on at most two bits.
pub fn marginal_graphic(prog: &XProgram, m: &Projector) -> Result<Marginal> {
    check_program(prog, m)?;
    let bits = m.support_bits();
    if bits > 2 {
        return Err(Error::SupportTooLarge { bits, limit: 2 });
    }
    let betas = betas_over_dual(m, |s| graphic_beta(prog.matrix(), prog.angle(), s))?;
    assemble(m, betas)
}

/// `P[m(X) = x | k] = |E_{t ∈ R*} (−1)^{x·t} exp(iθ Σ_j (−1)^{P_j·(t+k)})|²`
/// for `k ∈ K*`, indexed by range coordinates.
pub fn conditional_distribution(prog: &XProgram, m: &Projector, k: &BitVector) -> Result<Vec<f64>> {
    check_program(prog, m)?;
    m.check_range(&Limits::default())?;
    let dim = m.range_dim();
    let theta = prog.angle().value();
    let p = prog.matrix();
    let mut phases: Vec<Complex64> = (0..1usize << dim)
        .map(|z| {
            let v = m.dual_point(z).xor(k);
            let n = p.nrows() as f64;
            let odd = p.rows().iter().filter(|r| r.dot(&v)).count() as f64;
            Complex64::from_polar(1.0, theta * (n - 2.0 * odd))
        })
        .collect();
    walsh_hadamard(&mut phases);
    let scale = (dim as f64).exp2();
    let probs: Vec<f64> = m
        .pairing_table()
        .iter()
        .map(|&w| (phases[w] / scale).norm_sqr())
        .collect();
    let total: f64 = probs.iter().sum();
    let min = probs.iter().copied().fold(f64::INFINITY, f64::min);
    if (total - 1.0).abs() > SAMPLER_SUM_TOLERANCE || min < -SAMPLER_NEGATIVE_TOLERANCE {
        return Err(Error::NumericalInconsistency(format!(
            "conditional vector sums to {total} with minimum {min:e}"
        )));
    }
    Ok(probs)
}

/// A uniform element of `K*`.
pub fn random_dual_kernel<R: Rng + ?Sized>(m: &Projector, rng: &mut R) -> BitVector {
    let mut k = BitVector::zeros(m.dim());
    for b in m.dual_kernel_basis() {
        if rng.gen::<bool>() {
            k.xor_assign(b);
        }
    }
    k
}

/// One sample of `m(X)`, using a fresh `k ∈ K*`.
pub fn sample_marginal<R: Rng + ?Sized>(prog: &XProgram, m: &Projector, rng: &mut R) -> Result<BitVector> {
    let k = random_dual_kernel(m, rng);
    let probs = conditional_distribution(prog, m, &k)?;
    let u: f64 = rng.gen::<f64>() * probs.iter().sum::<f64>();
    let mut acc = 0.0;
    let mut pick = probs.len() - 1;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            pick = i;
            break;
        }
    }
    Ok(m.range_point(pick))
}
