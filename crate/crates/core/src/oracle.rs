//! Brute-force ground truth by dense statevector evolution.
//!
//! Nothing here calls into the code, Tutte or linear-algebra routines of the
//! other modules; vectors are unpacked into plain integers and every
//! quantity is recomputed from its definition.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BitVector};
use crate::marginals::Projector;
use crate::tutte::TuttePolynomial;
use crate::xprogram::{Distribution, XProgram};

pub const MAX_QUBITS: usize = 20;
pub const MAX_ROWS: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    pub qubits: usize,
    pub amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn amplitude(&self, x: &BitVector) -> Complex64 {
        self.amplitudes[to_index(x)]
    }
}

fn to_index(v: &BitVector) -> usize {
    (0..v.len()).filter(|&j| v.get(j)).map(|j| 1usize << j).sum()
}

fn check_qubits(l: usize) -> Result<()> {
    if l > MAX_QUBITS {
        return Err(Error::TooManyQubits { qubits: l, limit: MAX_QUBITS });
    }
    Ok(())
}

/// `exp(iθ H_P)|0⟩`, one factor `cos θ·I + i sin θ·X_S` per row.
pub fn statevector(prog: &XProgram) -> Result<StateVector> {
    let l = prog.qubits();
    check_qubits(l)?;
    let theta = prog.angle().value();
    let (c, s) = (Complex64::new(theta.cos(), 0.0), Complex64::new(0.0, theta.sin()));
    let mut psi = vec![Complex64::new(0.0, 0.0); 1 << l];
    psi[0] = Complex64::new(1.0, 0.0);
    for row in prog.matrix().rows() {
        let flip = to_index(row);
        psi = (0..psi.len()).map(|x| c * psi[x] + s * psi[x ^ flip]).collect();
    }
    Ok(StateVector { qubits: l, amplitudes: psi })
}

pub fn oracle_distribution(prog: &XProgram) -> Result<Distribution> {
    let psi = statevector(prog)?;
    Ok(Distribution::new(
        psi.qubits,
        psi.amplitudes.iter().map(|a| a.norm_sqr()).collect(),
    ))
}

/// `2·P[X·s = 0] − 1`.
pub fn oracle_beta(prog: &XProgram, s: &BitVector) -> Result<f64> {
    let dist = oracle_distribution(prog)?;
    let mask = to_index(s);
    let even: f64 = dist
        .probabilities()
        .iter()
        .enumerate()
        .filter(|(x, _)| (x & mask).count_ones() % 2 == 0)
        .map(|(_, p)| p)
        .sum();
    Ok(2.0 * even - 1.0)
}

/// `P[m(X) = y]` for every `y ∈ GF(2)^l`, zero off the range.
pub fn oracle_marginal(prog: &XProgram, m: &Projector) -> Result<Distribution> {
    let dist = oracle_distribution(prog)?;
    let l = dist.bits();
    let mat = m.matrix();
    let mut out = vec![0.0; 1 << l];
    for (x, p) in dist.probabilities().iter().enumerate() {
        let mut y = 0usize;
        for i in 0..l {
            let bit = (0..l).filter(|&j| mat.get(i, j) && x >> j & 1 == 1).count() % 2;
            y |= bit << i;
        }
        out[y] += p;
    }
    Ok(Distribution::new(l, out))
}

/// Rank of a set of integer-packed vectors by plain elimination.
fn rank(mut rows: Vec<u128>) -> u32 {
    let mut r = 0;
    while let Some(pos) = rows.iter().position(|&v| v != 0) {
        let pivot = rows.swap_remove(pos);
        let low = pivot & pivot.wrapping_neg();
        for v in rows.iter_mut() {
            if *v & low != 0 {
                *v ^= pivot;
            }
        }
        r += 1;
    }
    r
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// `T(x, y) = Σ_A (x−1)^{r(E)−r(A)} (y−1)^{|A|−r(A)}` over all row subsets.
pub fn oracle_tutte(p: &BinaryMatrix) -> Result<TuttePolynomial> {
    let n = p.nrows();
    if n > MAX_ROWS {
        return Err(Error::TooManyRows { rows: n, limit: MAX_ROWS });
    }
    if p.ncols() > 128 {
        return Err(Error::TooManyQubits { qubits: p.ncols(), limit: 128 });
    }
    let packed: Vec<u128> = p
        .rows()
        .iter()
        .map(|r| (0..r.len()).filter(|&j| r.get(j)).map(|j| 1u128 << j).sum())
        .collect();
    let full = rank(packed.clone());
    let mut counts = std::collections::BTreeMap::<(u32, u32), i64>::new();
    for subset in 0u32..1 << n {
        let chosen: Vec<u128> = (0..n).filter(|i| subset >> i & 1 == 1).map(|i| packed[i]).collect();
        let size = chosen.len() as u32;
        let r = rank(chosen);
        *counts.entry((full - r, size - r)).or_insert(0) += 1;
    }
    let mut terms = Vec::new();
    for ((a, b), count) in counts {
        for i in 0..=a {
            for j in 0..=b {
                let sign = if (a - i + b - j) % 2 == 0 { 1 } else { -1 };
                terms.push(((i, j), sign * count * binomial(a, i) * binomial(b, j)));
            }
        }
    }
    Ok(TuttePolynomial::from_terms(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::Angle;

    #[test]
    fn single_rotation() {
        let prog = XProgram::new(BinaryMatrix::from_strs(&["1"]).unwrap(), Angle::radians(0.4));
        let psi = statevector(&prog).unwrap();
        assert!((psi.amplitudes[0] - Complex64::new(0.4f64.cos(), 0.0)).norm() < 1e-15);
        assert!((psi.amplitudes[1] - Complex64::new(0.0, 0.4f64.sin())).norm() < 1e-15);
    }

    #[test]
    fn fixture_tutte() {
        let p = BinaryMatrix::from_strs(&["1101", "0110", "0000", "0101", "1011", "0101"]).unwrap();
        assert_eq!(oracle_tutte(&p).unwrap().to_string(), "x^3*y + x^2*y + x^2*y^2 + 2*x*y^2 + y^3");
    }

    #[test]
    fn beta_at_zero_and_limits() {
        let prog = XProgram::new(BinaryMatrix::from_strs(&["11", "01"]).unwrap(), Angle::radians(1.0));
        assert!((oracle_beta(&prog, &"00".parse().unwrap()).unwrap() - 1.0).abs() < 1e-15);
        let big = XProgram::new(BinaryMatrix::zeros(1, 21), Angle::radians(1.0));
        assert!(matches!(statevector(&big), Err(Error::TooManyQubits { .. })));
    }
}
