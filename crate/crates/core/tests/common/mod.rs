#![allow(dead_code)]

use iqp_matroid::{Angle, BinaryMatrix, BitVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn p_ex() -> BinaryMatrix {
    BinaryMatrix::from_strs(&["1101", "0110", "0000", "0101", "1011", "0101"]).unwrap()
}

pub fn bv(s: &str) -> BitVector {
    s.parse().unwrap()
}

pub fn random_vector<R: Rng>(rng: &mut R, len: usize) -> BitVector {
    BitVector::from_bits((0..len).map(|_| rng.gen::<bool>()))
}

pub fn random_matrix<R: Rng>(rng: &mut R, n: usize, l: usize) -> BinaryMatrix {
    let rows = (0..n).map(|_| random_vector(rng, l)).collect();
    BinaryMatrix::from_rows(rows, l).unwrap()
}

/// Rows with one or two ones.
pub fn random_graphic<R: Rng>(rng: &mut R, n: usize, l: usize) -> BinaryMatrix {
    let rows = (0..n)
        .map(|_| {
            let mut r = BitVector::zeros(l);
            r.set(rng.gen_range(0..l), true);
            if rng.gen_bool(0.7) {
                r.set(rng.gen_range(0..l), true);
            }
            r
        })
        .collect();
    BinaryMatrix::from_rows(rows, l).unwrap()
}

pub const ANGLES: [&str; 5] = ["1/8", "1/4", "1/2", "1/5", "rad:1.0"];

pub fn angle(name: &str) -> Angle {
    match name.strip_prefix("rad:") {
        Some(v) => Angle::radians(v.parse().unwrap()),
        None => {
            let (a, b) = name.split_once('/').unwrap();
            Angle::pi_fraction(a.parse().unwrap(), b.parse().unwrap())
        }
    }
}

/// `count` distinct bits of `0..l`, ascending.
pub fn random_bits<R: Rng>(rng: &mut R, l: usize, count: usize) -> Vec<usize> {
    let mut bits = rand::seq::index::sample(rng, l, count).into_vec();
    bits.sort_unstable();
    bits
}

/// A random invertible matrix.
pub fn random_invertible<R: Rng>(rng: &mut R, l: usize) -> BinaryMatrix {
    loop {
        let m = random_matrix(rng, l, l);
        if m.rank() == l {
            return m;
        }
    }
}

pub fn inverse(m: &BinaryMatrix) -> BinaryMatrix {
    let l = m.ncols();
    let cols: Vec<BitVector> = (0..l)
        .map(|j| m.solve(&BitVector::unit(l, j)).unwrap().unwrap())
        .collect();
    BinaryMatrix::from_rows(cols, l).unwrap().transpose()
}

/// `B·D·B⁻¹` with `D` diagonal of rank `k`; usually not orthogonal.
pub fn random_idempotent<R: Rng>(rng: &mut R, l: usize, k: usize) -> BinaryMatrix {
    let b = random_invertible(rng, l);
    let mut d = BinaryMatrix::zeros(l, l);
    for i in 0..k {
        d.set(i, i, true);
    }
    b.mul(&d).unwrap().mul(&inverse(&b)).unwrap()
}
