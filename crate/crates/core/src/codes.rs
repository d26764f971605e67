//! The binary code `C(P)` spanned by the columns of a matrix: weight
//! enumerators, the normalised amplitude scalar, and the projection and
//! affinification transforms.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::clifford;
use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BitVector};
use crate::Limits;

/// Codes at or above this rank are enumerated in parallel blocks.
const PARALLEL_RANK: usize = 16;
const PARALLEL_BLOCKS: u64 = 64;

/// An angle, either an exact rational multiple of π or a raw radian value.
///
/// Exact angles are kept reduced with the numerator in `[0, 2·den)`, so two
/// exact angles are equal iff they agree modulo 2π.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Angle {
    /// `num/den · π`.
    Exact { num: i64, den: u64 },
    Radians(f64),
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Angle {
    /// `num/den · π`, normalised modulo 2π.
    ///
    /// # Panics
    ///
    /// Panics if `den == 0`.
    pub fn pi_fraction(num: i64, den: u64) -> Self {
        assert!(den > 0, "angle denominator must be positive");
        let g = gcd(num.unsigned_abs(), den).max(1);
        let den = den / g;
        let num = (num / g as i64).rem_euclid(2 * den as i64);
        if num == 0 {
            return Angle::Exact { num: 0, den: 1 };
        }
        let g = gcd(num as u64, den);
        Angle::Exact {
            num: num / g as i64,
            den: den / g,
        }
    }

    pub fn radians(value: f64) -> Self {
        Angle::Radians(value.rem_euclid(2.0 * PI))
    }

    pub fn value(&self) -> f64 {
        match *self {
            Angle::Exact { num, den } => num as f64 * PI / den as f64,
            Angle::Radians(v) => v,
        }
    }

    /// True for exact multiples of π/4, where `e^{-2iθ}` is a fourth root of unity.
    pub fn is_fourth_root(&self) -> bool {
        self.eighth_turns().is_some()
    }

    /// `k` with `θ = k·π/4`, `k ∈ [0, 8)`, for exact multiples of π/4.
    pub fn eighth_turns(&self) -> Option<u32> {
        match *self {
            Angle::Exact { num, den } if 4 % den == 0 => Some((num as u64 * (4 / den)) as u32),
            _ => None,
        }
    }

    /// Writes an exact angle as `c·π/2^d` with `c` odd (or `c = 0`, `d = 0`).
    pub fn dyadic(&self) -> Option<(u64, u32)> {
        match *self {
            Angle::Exact { num, den } if den.is_power_of_two() => {
                Some((num as u64, den.trailing_zeros()))
            }
            _ => None,
        }
    }

    pub fn doubled(&self) -> Self {
        match *self {
            Angle::Exact { num, den } => Angle::pi_fraction(2 * num, den),
            Angle::Radians(v) => Angle::radians(2.0 * v),
        }
    }

    pub fn negated(&self) -> Self {
        match *self {
            Angle::Exact { num, den } => Angle::pi_fraction(-num, den),
            Angle::Radians(v) => Angle::radians(-v),
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Angle::Exact { num, den } => write!(f, "{num}/{den}"),
            Angle::Radians(v) => write!(f, "rad:{v}"),
        }
    }
}

/// Weight histogram of a binary code together with its length and rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeProfile {
    pub length: usize,
    pub rank: usize,
    /// `weights[w]` counts the codewords of Hamming weight `w`.
    pub weights: Vec<u64>,
}

impl CodeProfile {
    /// `W_C(ζ) = Σ_w weights[w]·ζ^w`.
    pub fn evaluate(&self, zeta: Complex64) -> Complex64 {
        self.weights
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * zeta + c as f64)
    }

    /// `2^{-r} Σ_c e^{iθ(n − 2|c|)}`.
    pub fn alpha(&self, theta: f64) -> Complex64 {
        let n = self.length as f64;
        let sum: Complex64 = self
            .weights
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(w, &c)| Complex64::from_polar(c as f64, theta * (n - 2.0 * w as f64)))
            .sum();
        sum / (self.rank as f64).exp2()
    }
}

/// A basis of `C(P)`: independent columns of `P`, as length-`n` vectors.
pub fn code_basis(p: &BinaryMatrix) -> Vec<BitVector> {
    p.transpose().row_space_basis()
}

pub fn weight_enumerator(p: &BinaryMatrix) -> Result<CodeProfile> {
    weight_enumerator_with(p, &Limits::default())
}

/// Exact weight histogram of `C(P)` by Gray-code enumeration of its codewords.
pub fn weight_enumerator_with(p: &BinaryMatrix, limits: &Limits) -> Result<CodeProfile> {
    let basis = code_basis(p);
    let rank = basis.len();
    if rank > limits.max_code_rank {
        return Err(Error::RankTooLarge {
            rank,
            limit: limits.max_code_rank,
        });
    }
    let n = p.nrows();
    let total = 1u64 << rank;
    let weights = if rank < PARALLEL_RANK {
        gray_block(&basis, n, 0, total)
    } else {
        let step = total / PARALLEL_BLOCKS;
        (0..PARALLEL_BLOCKS)
            .into_par_iter()
            .map(|b| gray_block(&basis, n, b * step, (b + 1) * step))
            .reduce(
                || vec![0; n + 1],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x = x.checked_add(y).expect("weight count overflow");
                    }
                    a
                },
            )
    };
    Ok(CodeProfile { length: n, rank, weights })
}

/// Histogram of the codewords with Gray-code indices in `[start, end)`.
fn gray_block(basis: &[BitVector], n: usize, start: u64, end: u64) -> Vec<u64> {
    let mut hist = vec![0u64; n + 1];
    let gray = start ^ (start >> 1);
    let mut word = BitVector::zeros(n);
    for (j, g) in basis.iter().enumerate() {
        if (gray >> j) & 1 == 1 {
            word.xor_assign(g);
        }
    }
    hist[word.weight()] += 1;
    for idx in start + 1..end {
        word.xor_assign(&basis[idx.trailing_zeros() as usize]);
        hist[word.weight()] += 1;
    }
    hist
}

pub fn alpha(p: &BinaryMatrix, theta: Angle) -> Result<Complex64> {
    alpha_with(p, theta, &Limits::default())
}

/// `α = E_{c ∈ C(P)} e^{iθ(n − 2|c|)}`.
///
/// Multiples of π/4 are evaluated exactly in polynomial time; other angles
/// enumerate the code.
pub fn alpha_with(p: &BinaryMatrix, theta: Angle, limits: &Limits) -> Result<Complex64> {
    if let Some(k) = theta.eighth_turns() {
        return Ok(clifford::alpha_exact(p, k)?.to_complex());
    }
    Ok(weight_enumerator_with(p, limits)?.alpha(theta.value()))
}

/// Projection `P⊤x`: each row `a` becomes the lexicographically first of
/// `{a, a + x}`.
pub fn project(p: &BinaryMatrix, x: &BitVector) -> Result<BinaryMatrix> {
    if x.len() != p.ncols() {
        return Err(Error::DimensionMismatch {
            expected: p.ncols(),
            found: x.len(),
        });
    }
    let lead = x.first_one().ok_or(Error::ZeroDirection)?;
    let rows = p
        .rows()
        .iter()
        .map(|a| if a.get(lead) { a.xor(x) } else { a.clone() })
        .collect();
    BinaryMatrix::from_rows(rows, p.ncols())
}

/// Affinification `P_s`: the rows `a` with `a · s = 1`, in their original order.
pub fn affinify(p: &BinaryMatrix, s: &BitVector) -> Result<BinaryMatrix> {
    if s.len() != p.ncols() {
        return Err(Error::DimensionMismatch {
            expected: p.ncols(),
            found: s.len(),
        });
    }
    let rows = p.rows().iter().filter(|a| a.dot(s)).cloned().collect();
    BinaryMatrix::from_rows(rows, p.ncols())
}

/// True iff every codeword of `C(P)` has even weight, i.e. every column of
/// `P` has even weight.
pub fn is_even_code(p: &BinaryMatrix) -> bool {
    p.column_weights().iter().all(|w| w % 2 == 0)
}

/// True iff the all-ones word of length `n` lies in `C(P)`.
pub fn contains_all_ones(p: &BinaryMatrix) -> bool {
    matches!(p.solve(&BitVector::ones(p.nrows())), Ok(Some(_)))
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
    fn angle_normalisation() {
        assert_eq!(Angle::pi_fraction(2, 8), Angle::Exact { num: 1, den: 4 });
        assert_eq!(Angle::pi_fraction(-1, 4), Angle::Exact { num: 7, den: 4 });
        assert_eq!(Angle::pi_fraction(9, 4), Angle::Exact { num: 1, den: 4 });
        assert_eq!(Angle::pi_fraction(4, 2), Angle::Exact { num: 0, den: 1 });
        assert!(Angle::pi_fraction(1, 4).is_fourth_root());
        assert!(Angle::pi_fraction(1, 2).is_fourth_root());
        assert!(!Angle::pi_fraction(1, 8).is_fourth_root());
        assert!(!Angle::radians(PI / 4.0).is_fourth_root());
        assert_eq!(Angle::pi_fraction(3, 8).dyadic(), Some((3, 3)));
        assert_eq!(Angle::pi_fraction(1, 3).dyadic(), None);
        assert_eq!(Angle::pi_fraction(1, 8).doubled(), Angle::Exact { num: 1, den: 4 });
        assert!((Angle::radians(-1.0).value() - (2.0 * PI - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn weight_enumerator_of_fixture() {
        let w = weight_enumerator(&p_ex()).unwrap();
        assert_eq!(w.weights, vec![1, 0, 4, 0, 3, 0, 0]);
        assert_eq!(w.rank, 3);
        assert_eq!(w.length, 6);
    }

    #[test]
    fn weight_enumerator_small_cases() {
        let one = BinaryMatrix::from_strs(&["1"]).unwrap();
        assert_eq!(weight_enumerator(&one).unwrap().weights, vec![1, 1]);
        let empty_cols = BinaryMatrix::zeros(3, 0);
        let w = weight_enumerator(&empty_cols).unwrap();
        assert_eq!((w.rank, w.weights), (0, vec![1, 0, 0, 0]));
    }

    #[test]
    fn rank_limit_is_enforced() {
        let limits = Limits {
            max_code_rank: 2,
            ..Limits::default()
        };
        assert!(matches!(
            weight_enumerator_with(&p_ex(), &limits),
            Err(Error::RankTooLarge { rank: 3, limit: 2 })
        ));
    }

    #[test]
    fn parallel_enumeration_matches_sequential() {
        // rank 17 identity code: binomial coefficients
        let id = BinaryMatrix::identity(17);
        let w = weight_enumerator(&id).unwrap();
        let mut binom = vec![1u64];
        for _ in 0..17 {
            let mut next = vec![1u64; binom.len() + 1];
            for k in 1..binom.len() {
                next[k] = binom[k - 1] + binom[k];
            }
            binom = next;
        }
        assert_eq!(w.weights, binom);
    }

    #[test]
    fn alpha_special_values() {
        let p = p_ex();
        let a = alpha(&p, Angle::pi_fraction(1, 1)).unwrap();
        assert!((a - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let a = alpha(&p, Angle::pi_fraction(1, 4)).unwrap();
        assert!(a.norm() < 1e-12);
        let one = BinaryMatrix::from_strs(&["1"]).unwrap();
        for t in [0.3, 1.1, 2.5] {
            let a = alpha(&one, Angle::radians(t)).unwrap();
            assert!((a - Complex64::new(t.cos(), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn projection_fixture() {
        let proj = project(&p_ex(), &bv("0110")).unwrap();
        let expect =
            BinaryMatrix::from_strs(&["1011", "0000", "0000", "0011", "1011", "0011"]).unwrap();
        assert_eq!(proj, expect);
        assert_eq!(proj.rank(), 2);
        assert!(matches!(project(&p_ex(), &bv("0000")), Err(Error::ZeroDirection)));
        let along_row = project(&p_ex(), &bv("1101")).unwrap();
        assert!(along_row.row(0).is_zero());
    }

    #[test]
    fn affinification_fixture() {
        let ps = affinify(&p_ex(), &bv("0110")).unwrap();
        let expect = BinaryMatrix::from_strs(&["1101", "0101", "1011", "0101"]).unwrap();
        assert_eq!(ps, expect);
        assert!(contains_all_ones(&ps));
        let none = affinify(&p_ex(), &bv("0000")).unwrap();
        assert_eq!((none.nrows(), none.ncols()), (0, 4));
    }

    #[test]
    fn evenness() {
        // column weights of P_ex are 2, 4, 2, 4
        assert!(is_even_code(&p_ex()));
        let w = weight_enumerator(&p_ex()).unwrap();
        assert!(w.weights.iter().skip(1).step_by(2).all(|&c| c == 0));
        let odd = BinaryMatrix::from_strs(&["10", "11"]).unwrap();
        assert!(!is_even_code(&odd));
        assert!(is_even_code(&BinaryMatrix::zeros(0, 5)));
    }
}
