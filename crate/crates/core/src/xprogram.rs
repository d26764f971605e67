//! X-programs `(P, θ)`: transition amplitudes, Born-rule probabilities,
//! correlation coefficients, dense output distributions, and reduction of
//! row weight at dyadic angles.
//!
//! Dense vectors over `GF(2)^l` are indexed so that bit `j` of the index is
//! bit `j` of the vector (the `j`-th character of its string form).

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::codes::{self, Angle};
use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BitVector};
use crate::Limits;

/// Probabilities below `-NEGATIVE_TOLERANCE` indicate a formula error rather than rounding.
pub const NEGATIVE_TOLERANCE: f64 = 1e-9;
/// Largest imaginary part tolerated in a correlation coefficient.
pub const IMAGINARY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct XProgram {
    matrix: BinaryMatrix,
    angle: Angle,
}

impl XProgram {
    pub fn new(matrix: BinaryMatrix, angle: Angle) -> Self {
        Self { matrix, angle }
    }

    pub fn matrix(&self) -> &BinaryMatrix {
        &self.matrix
    }

    pub fn angle(&self) -> Angle {
        self.angle
    }

    /// Number of qubits `l`.
    pub fn qubits(&self) -> usize {
        self.matrix.ncols()
    }

    /// Number of gates `n`.
    pub fn gates(&self) -> usize {
        self.matrix.nrows()
    }

    fn check_len(&self, v: &BitVector) -> Result<()> {
        if v.len() != self.qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.qubits(),
                found: v.len(),
            });
        }
        Ok(())
    }
}

/// A probability vector over `GF(2)^bits`.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    bits: usize,
    probabilities: Vec<f64>,
}

impl Distribution {
    /// # Panics
    ///
    /// Panics if the vector length is not `2^bits`.
    pub fn new(bits: usize, probabilities: Vec<f64>) -> Self {
        assert_eq!(probabilities.len(), 1usize << bits, "length must be 2^bits");
        Self { bits, probabilities }
    }

    /// Clamps tiny negative entries to zero; larger negativity is an error.
    pub fn from_signed(bits: usize, mut values: Vec<f64>) -> Result<Self> {
        for (i, v) in values.iter_mut().enumerate() {
            if *v < -NEGATIVE_TOLERANCE {
                return Err(Error::NumericalInconsistency(format!(
                    "probability {v:e} at index {i} is negative"
                )));
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        Ok(Self::new(bits, values))
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn get(&self, index: usize) -> f64 {
        self.probabilities[index]
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.bits, other.bits);
        self.probabilities
            .iter()
            .zip(&other.probabilities)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn total_variation(&self, other: &Self) -> f64 {
        assert_eq!(self.bits, other.bits);
        0.5 * self
            .probabilities
            .iter()
            .zip(&other.probabilities)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    }
}

/// In-place unnormalised Walsh–Hadamard transform:
/// `out[x] = Σ_s (−1)^{popcount(x & s)} in[s]`.
pub fn walsh_hadamard<T>(data: &mut [T])
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Sub<Output = T>,
{
    let n = data.len();
    assert!(n.is_power_of_two() || n == 0, "length must be a power of two");
    let mut h = 1;
    while h < n {
        for chunk in data.chunks_mut(2 * h) {
            let (lo, hi) = chunk.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (u, v) = (*a, *b);
                *a = u + v;
                *b = u - v;
            }
        }
        h *= 2;
    }
}

/// `⟨x| exp(iθH_P) |0⟩`: `α_{(P,θ)}` at `x = 0`, else `α_{(P⊤x,θ)} − α_{(P,θ)}`.
pub fn amplitude(prog: &XProgram, x: &BitVector) -> Result<Complex64> {
    amplitude_with(prog, x, &Limits::default())
}

pub fn amplitude_with(prog: &XProgram, x: &BitVector, limits: &Limits) -> Result<Complex64> {
    prog.check_len(x)?;
    let base = codes::alpha_with(&prog.matrix, prog.angle, limits)?;
    if x.is_zero() {
        return Ok(base);
    }
    let projected = codes::project(&prog.matrix, x)?;
    Ok(codes::alpha_with(&projected, prog.angle, limits)? - base)
}

pub fn probability(prog: &XProgram, x: &BitVector) -> Result<f64> {
    Ok(amplitude(prog, x)?.norm_sqr())
}

/// `β_s = 2·P[X·s = 0] − 1`, computed as `α_{(P_s, 2θ)}`.
pub fn beta(prog: &XProgram, s: &BitVector) -> Result<f64> {
    beta_with(prog, s, &Limits::default())
}

pub fn beta_with(prog: &XProgram, s: &BitVector, limits: &Limits) -> Result<f64> {
    prog.check_len(s)?;
    if s.is_zero() {
        return Ok(1.0);
    }
    let affine = codes::affinify(&prog.matrix, s)?;
    let value = codes::alpha_with(&affine, prog.angle.doubled(), limits)?;
    real_part(value, s)
}

pub(crate) fn real_part(value: Complex64, s: &BitVector) -> Result<f64> {
    if value.im.abs() > IMAGINARY_TOLERANCE {
        return Err(Error::NumericalInconsistency(format!(
            "correlation coefficient at s = {s} has imaginary part {:e}",
            value.im
        )));
    }
    Ok(value.re)
}

fn check_domain(l: usize, limits: &Limits) -> Result<()> {
    if l > limits.max_distribution_bits {
        return Err(Error::DomainTooLarge {
            bits: l,
            limit: limits.max_distribution_bits,
        });
    }
    Ok(())
}

/// All `2^l` correlation coefficients, indexed by `s`.
pub fn all_betas(prog: &XProgram) -> Result<Vec<f64>> {
    let limits = Limits::default();
    let l = prog.qubits();
    check_domain(l, &limits)?;
    (0..1u64 << l)
        .into_par_iter()
        .map(|s| beta_with(prog, &BitVector::from_u64(l, s), &limits))
        .collect()
}

/// `P[X = x] = 2^{-l} Σ_s (−1)^{x·s} β_s`, via a fast Walsh–Hadamard transform.
pub fn full_distribution(prog: &XProgram) -> Result<Distribution> {
    let l = prog.qubits();
    let mut values = all_betas(prog)?;
    walsh_hadamard(&mut values);
    let scale = (l as f64).exp2();
    values.iter_mut().for_each(|v| *v /= scale);
    Distribution::from_signed(l, values)
}

/// The same distribution assembled from squared amplitudes.
pub fn distribution_from_amplitudes(prog: &XProgram) -> Result<Distribution> {
    let limits = Limits::default();
    let l = prog.qubits();
    check_domain(l, &limits)?;
    let values = (0..1u64 << l)
        .into_par_iter()
        .map(|x| Ok(amplitude_with(prog, &BitVector::from_u64(l, x), &limits)?.norm_sqr()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Distribution::new(l, values))
}

/// An X-program with at most `degree` ones per row and the same unitary as
/// its source up to the global phase `e^{iπ·phase_units/2^degree}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedProgram {
    pub qubits: usize,
    pub angle: Angle,
    pub degree: u32,
    /// Distinct rows with multiplicities in `[1, 2^degree)`, sorted by row.
    pub terms: Vec<(BitVector, u64)>,
    /// Global phase in units of `π/2^degree`, modulo `2^{degree+1}`.
    pub phase_units: u64,
}

impl ReducedProgram {
    pub fn global_phase(&self) -> Complex64 {
        let unit = std::f64::consts::PI / (self.degree as f64).exp2();
        Complex64::from_polar(1.0, unit * self.phase_units as f64)
    }

    /// Total number of rows once multiplicities are expanded.
    pub fn row_count(&self) -> u64 {
        self.terms.iter().map(|(_, m)| m).sum()
    }

    /// Expands multiplicities into repeated rows.
    pub fn to_program(&self) -> XProgram {
        let rows = self
            .terms
            .iter()
            .flat_map(|(row, m)| std::iter::repeat(row.clone()).take(*m as usize))
            .collect();
        let matrix = BinaryMatrix::from_rows(rows, self.qubits).expect("rows have width l");
        XProgram::new(matrix, self.angle)
    }
}

/// Visits every subset of `support` with at most `max` elements.
fn for_each_small_subset(support: &[usize], max: usize, f: &mut impl FnMut(&[usize])) {
    fn go(support: &[usize], start: usize, max: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        f(cur);
        if cur.len() == max {
            return;
        }
        for i in start..support.len() {
            cur.push(support[i]);
            go(support, i + 1, max, cur, f);
            cur.pop();
        }
    }
    go(support, 0, max, &mut Vec::new(), f);
}

/// Integer coefficients `h_U` of `H_Q = Σ_{|U| ≤ degree} h_U X_U`, keyed by
/// the support of `U` (the empty key is the identity term).
///
/// Writing each `X_j = 1 − 2x_j`, `H_P = Σ_T (−1)^{|T|} N_T Π_{j∈T}(1 − X_j)`
/// where `N_T` counts rows containing `T`; the terms with `|T| > degree`
/// exponentiate to the identity and are dropped before converting back.
pub fn expand_low_degree(p: &BinaryMatrix, degree: u32) -> BTreeMap<BitVector, i64> {
    let l = p.ncols();
    let max = degree as usize;
    let mut containing: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
    for row in p.rows() {
        let support: Vec<usize> = row.ones_iter().collect();
        for_each_small_subset(&support, max, &mut |t| {
            *containing.entry(t.to_vec()).or_insert(0) += 1;
        });
    }
    let mut coeffs: BTreeMap<BitVector, i64> = BTreeMap::new();
    for (t, count) in containing {
        let sign_t = if t.len() % 2 == 0 { 1 } else { -1 };
        for_each_small_subset(&t, t.len(), &mut |u| {
            let sign_u = if u.len() % 2 == 0 { 1 } else { -1 };
            let mut key = BitVector::zeros(l);
            for &j in u {
                key.set(j, true);
            }
            *coeffs.entry(key).or_insert(0) += sign_t * sign_u * count;
        });
    }
    coeffs.retain(|_, c| *c != 0);
    coeffs
}

/// Row-weight reduction for `θ = c·π/2^d`: an equivalent program whose rows
/// have at most `d` ones.
pub fn reduce_rows(prog: &XProgram) -> Result<ReducedProgram> {
    let theta = prog.angle;
    let (c, d) = theta
        .dyadic()
        .ok_or_else(|| Error::UnsupportedAngle(theta.to_string()))?;
    let l = prog.qubits();
    if c == 0 {
        return Ok(ReducedProgram {
            qubits: l,
            angle: theta,
            degree: d,
            terms: Vec::new(),
            phase_units: 0,
        });
    }
    let period = 1i64 << d;
    let modulus = 2 * period;
    let c = c as i64;
    let mut phase: i64 = 0;
    let mut terms = Vec::new();
    for (u, h) in expand_low_degree(&prog.matrix, d) {
        if u.is_zero() {
            phase += c * h;
            continue;
        }
        // e^{iθ(q·2^d + m)X} = (−1)^{cq} e^{iθmX}
        let q = h.div_euclid(period);
        let m = h.rem_euclid(period);
        phase += period * ((c * q).rem_euclid(2));
        if m != 0 {
            terms.push((u, m as u64));
        }
    }
    Ok(ReducedProgram {
        qubits: l,
        angle: theta,
        degree: d,
        terms,
        phase_units: phase.rem_euclid(modulus) as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p_ex() -> BinaryMatrix {
        BinaryMatrix::from_strs(&["1101", "0110", "0000", "0101", "1011", "0101"]).unwrap()
    }

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn single_qubit_rotation() {
        let p = BinaryMatrix::from_strs(&["1"]).unwrap();
        for t in [0.2, 0.7, 2.0] {
            let prog = XProgram::new(p.clone(), Angle::radians(t));
            let a0 = amplitude(&prog, &bv("0")).unwrap();
            let a1 = amplitude(&prog, &bv("1")).unwrap();
            assert!((a0 - Complex64::new(t.cos(), 0.0)).norm() < 1e-12);
            assert!((a1 - Complex64::new(0.0, t.sin())).norm() < 1e-12);
            assert!((probability(&prog, &bv("1")).unwrap() - t.sin().powi(2)).abs() < 1e-12);
            let d = full_distribution(&prog).unwrap();
            assert!((d.get(0) - t.cos().powi(2)).abs() < 1e-12);
            assert!((d.get(1) - t.sin().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn fixture_at_quarter_pi() {
        let prog = XProgram::new(p_ex(), Angle::pi_fraction(1, 4));
        assert!(amplitude(&prog, &bv("0000")).unwrap().norm() < 1e-12);
        assert!(probability(&prog, &bv("0000")).unwrap() < 1e-12);
    }

    #[test]
    fn fixture_beta_at_eighth_pi() {
        let prog = XProgram::new(p_ex(), Angle::pi_fraction(1, 8));
        assert!(beta(&prog, &bv("0110")).unwrap().abs() < 1e-12);
        assert_eq!(beta(&prog, &bv("0000")).unwrap(), 1.0);
        let ps = codes::affinify(&p_ex(), &bv("0110")).unwrap();
        assert_eq!(codes::weight_enumerator(&ps).unwrap().weights, vec![1, 2, 2, 2, 1]);
    }

    #[test]
    fn distribution_limits() {
        let prog = XProgram::new(BinaryMatrix::zeros(1, 17), Angle::pi_fraction(1, 8));
        assert!(matches!(full_distribution(&prog), Err(Error::DomainTooLarge { .. })));
    }

    #[test]
    fn dimension_checks() {
        let prog = XProgram::new(p_ex(), Angle::pi_fraction(1, 8));
        assert!(amplitude(&prog, &bv("01")).is_err());
        assert!(beta(&prog, &bv("01")).is_err());
    }

    #[test]
    fn walsh_hadamard_small() {
        let mut v = [1.0, 0.0, 0.0, 0.0];
        walsh_hadamard(&mut v);
        assert_eq!(v, [1.0; 4]);
        let mut v = [1.0, 2.0, 3.0, 4.0];
        walsh_hadamard(&mut v);
        assert_eq!(v, [10.0, -2.0, -4.0, 0.0]);
    }

    #[test]
    fn worked_triple_replacement() {
        let p = BinaryMatrix::from_strs(&["111"]).unwrap();
        let coeffs = expand_low_degree(&p, 2);
        let expect: BTreeMap<BitVector, i64> = [
            ("000", 1),
            ("100", -1),
            ("010", -1),
            ("001", -1),
            ("110", 1),
            ("101", 1),
            ("011", 1),
        ]
        .into_iter()
        .map(|(s, c)| (bv(s), c))
        .collect();
        assert_eq!(coeffs, expect);
        let red = reduce_rows(&XProgram::new(p, Angle::pi_fraction(1, 4))).unwrap();
        assert!(red.terms.iter().all(|(r, _)| r.weight() <= 2));
        assert_eq!(red.terms.len(), 6);
    }

    #[test]
    fn reduction_at_pi_is_trivial() {
        let red = reduce_rows(&XProgram::new(p_ex(), Angle::pi_fraction(1, 1))).unwrap();
        assert!(red.terms.is_empty());
        assert_eq!(red.degree, 0);
        // e^{iπ H} = (−1)^n for n = 6 commuting involutions
        assert_eq!(red.phase_units, 0);
        let red = reduce_rows(&XProgram::new(
            BinaryMatrix::from_strs(&["1"]).unwrap(),
            Angle::pi_fraction(1, 1),
        ))
        .unwrap();
        assert_eq!(red.phase_units, 1);
    }

    #[test]
    fn reduction_rejects_non_dyadic() {
        assert!(matches!(
            reduce_rows(&XProgram::new(p_ex(), Angle::pi_fraction(1, 3))),
            Err(Error::UnsupportedAngle(_))
        ));
        assert!(reduce_rows(&XProgram::new(p_ex(), Angle::radians(0.5))).is_err());
    }
}
