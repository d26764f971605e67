//! Tutte polynomials of binary matroids: the corank–nullity expansion,
//! memoised deletion–contraction, Greene's identity for `α`, and star graphs.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_complex::Complex64;

use crate::codes::Angle;
use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BitVector};
use crate::Limits;

/// `Σ t_ij x^i y^j` with integer coefficients, keyed by `(i, j)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TuttePolynomial {
    coefficients: BTreeMap<(u32, u32), i64>,
}

impl TuttePolynomial {
    pub fn one() -> Self {
        Self::monomial(0, 0, 1)
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, 1)
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, 1)
    }

    pub fn monomial(i: u32, j: u32, c: i64) -> Self {
        let mut p = Self::default();
        p.add_term(i, j, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), i64)>>(terms: I) -> Self {
        let mut p = Self::default();
        for ((i, j), c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    fn add_term(&mut self, i: u32, j: u32, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.coefficients.entry((i, j)).or_insert(0);
        *e += c;
        if *e == 0 {
            self.coefficients.remove(&(i, j));
        }
    }

    pub fn coefficient(&self, i: u32, j: u32) -> i64 {
        self.coefficients.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), i64)> + '_ {
        self.coefficients.iter().map(|(&k, &c)| (k, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add_term(k.0, k.1, c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for ((i1, j1), c1) in self.terms() {
            for ((i2, j2), c2) in other.terms() {
                out.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        out
    }

    pub fn eval(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.terms()
            .map(|((i, j), c)| x.powu(i) * y.powu(j) * c as f64)
            .sum()
    }
}

impl fmt::Display for TuttePolynomial {
    /// Terms by descending `x` degree, then ascending `y` degree, e.g.
    /// `x^3*y + x^2*y + 2*x*y^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<_> = self.terms().collect();
        if terms.is_empty() {
            return f.write_str("0");
        }
        terms.sort_by(|a, b| b.0 .0.cmp(&a.0 .0).then(a.0 .1.cmp(&b.0 .1)));
        for (n, ((i, j), c)) in terms.into_iter().enumerate() {
            let mut factors = Vec::new();
            match i {
                0 => {}
                1 => factors.push("x".to_string()),
                _ => factors.push(format!("x^{i}")),
            }
            match j {
                0 => {}
                1 => factors.push("y".to_string()),
                _ => factors.push(format!("y^{j}")),
            }
            let mag = c.unsigned_abs();
            if n == 0 {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if mag != 1 {
                    write!(f, "{mag}*")?;
                }
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}

fn binomial_row(n: u32) -> Vec<i64> {
    let mut row = vec![1i64];
    for _ in 0..n {
        let mut next = vec![1i64; row.len() + 1];
        for k in 1..row.len() {
            next[k] = row[k - 1] + row[k];
        }
        row = next;
    }
    row
}

/// Basis supporting push/pop, for depth-first subset enumeration.
struct StackBasis {
    vectors: Vec<(BitVector, usize)>,
}

impl StackBasis {
    fn reduce(&self, v: &BitVector) -> BitVector {
        let mut r = v.clone();
        for (b, p) in &self.vectors {
            if r.get(*p) {
                r.xor_assign(b);
            }
        }
        r
    }

    fn push(&mut self, v: &BitVector) -> bool {
        let r = self.reduce(v);
        match r.first_one() {
            Some(p) => {
                self.vectors.push((r, p));
                true
            }
            None => false,
        }
    }
}

fn count_subsets(
    rows: &[BitVector],
    idx: usize,
    size: usize,
    basis: &mut StackBasis,
    counts: &mut HashMap<(usize, usize), i64>,
) {
    if idx == rows.len() {
        let rho = basis.vectors.len();
        *counts.entry((rho, size - rho)).or_insert(0) += 1;
        return;
    }
    count_subsets(rows, idx + 1, size, basis, counts);
    let added = basis.push(&rows[idx]);
    count_subsets(rows, idx + 1, size + 1, basis, counts);
    if added {
        basis.vectors.pop();
    }
}

/// `T_M(x,y) = Σ_{X ⊆ E} (x−1)^{ρ(E)−ρ(X)} (y−1)^{|X|−ρ(X)}` by enumerating
/// all `2^n` row subsets.
pub fn tutte_subset_sum(p: &BinaryMatrix) -> Result<TuttePolynomial> {
    tutte_subset_sum_with(p, &Limits::default())
}

pub fn tutte_subset_sum_with(p: &BinaryMatrix, limits: &Limits) -> Result<TuttePolynomial> {
    let n = p.nrows();
    if n > limits.max_subset_rows {
        return Err(Error::TooManyRows {
            rows: n,
            limit: limits.max_subset_rows,
        });
    }
    let rank = p.rank();
    let mut counts = HashMap::new();
    let mut basis = StackBasis { vectors: Vec::new() };
    count_subsets(p.rows(), 0, 0, &mut basis, &mut counts);
    let mut poly = TuttePolynomial::default();
    for ((rho, nullity), count) in counts {
        let a = (rank - rho) as u32;
        let b = nullity as u32;
        let (ba, bb) = (binomial_row(a), binomial_row(b));
        for i in 0..=a {
            for j in 0..=b {
                let sign = if (a - i + b - j) % 2 == 0 { 1 } else { -1 };
                poly.add_term(i, j, sign * count * ba[i as usize] * bb[j as usize]);
            }
        }
    }
    Ok(poly)
}

type Classes = Vec<(BitVector, u32)>;

/// Groups nonzero rows into parallel classes and counts loops.
fn parallel_classes(rows: &[BitVector]) -> (Classes, u32) {
    let mut map: BTreeMap<BitVector, u32> = BTreeMap::new();
    let mut loops = 0;
    for r in rows {
        if r.is_zero() {
            loops += 1;
        } else {
            *map.entry(r.clone()).or_insert(0) += 1;
        }
    }
    (map.into_iter().collect(), loops)
}

/// Rewrites the classes in coordinates of a basis picked greedily from the
/// sorted class vectors, then sorts. Equal keys give equal matroids.
fn canonicalise(classes: &[(BitVector, u32)]) -> Classes {
    let len = classes.first().map_or(0, |c| c.0.len());
    let vectors: Vec<BitVector> = classes.iter().map(|c| c.0.clone()).collect();
    let m = BinaryMatrix::from_rows(vectors, len).expect("uniform class length");
    let ech = m.echelon_reduce();
    let mut out: Classes = ech
        .reduced()
        .rows()
        .iter()
        .cloned()
        .zip(classes.iter().map(|c| c.1))
        .collect();
    out.sort();
    out
}

/// `1 + y + … + y^{k−1}`.
fn y_series(y: Complex64, k: u32) -> Complex64 {
    (0..k).map(|j| y.powu(j)).sum()
}

struct DeletionContraction {
    x: Complex64,
    y: Complex64,
    memo: HashMap<Classes, Complex64>,
    limit: usize,
}

impl DeletionContraction {
    fn eval(&mut self, classes: Classes) -> Result<Complex64> {
        if classes.is_empty() {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let key = canonicalise(&classes);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let (v, k) = key[0].clone();
        let rest: Classes = key[1..].to_vec();
        let rest_vectors: Vec<BitVector> = rest.iter().map(|c| c.0.clone()).collect();
        let series = y_series(self.y, k);
        let value = if !crate::gf2::in_span(&rest_vectors, &v) {
            // the class is a coloop class: its elements are free over the rest
            (series + self.x - 1.0) * self.eval(rest)?
        } else {
            let lead = v.first_one().expect("class vectors are nonzero");
            let contracted: Vec<BitVector> = rest
                .iter()
                .flat_map(|(w, m)| {
                    let w = if w.get(lead) { w.xor(&v) } else { w.clone() };
                    std::iter::repeat(w).take(*m as usize)
                })
                .collect();
            let (contracted, loops) = parallel_classes(&contracted);
            let deleted = self.eval(rest)?;
            let contracted = self.eval(contracted)?;
            deleted + series * self.y.powu(loops) * contracted
        };
        if self.memo.len() >= self.limit {
            return Err(Error::BudgetExceeded { limit: self.limit });
        }
        self.memo.insert(key, value);
        Ok(value)
    }
}

pub fn tutte_eval(p: &BinaryMatrix, x: Complex64, y: Complex64) -> Result<Complex64> {
    tutte_eval_with(p, x, y, &Limits::default())
}

/// `T_M(x, y)` by deletion–contraction over parallel classes, memoised on
/// canonical minors. Loops are factored out first.
pub fn tutte_eval_with(
    p: &BinaryMatrix,
    x: Complex64,
    y: Complex64,
    limits: &Limits,
) -> Result<Complex64> {
    let (classes, loops) = parallel_classes(p.rows());
    let mut dc = DeletionContraction {
        x,
        y,
        memo: HashMap::new(),
        limit: limits.max_memo_entries,
    };
    Ok(y.powu(loops) * dc.eval(classes)?)
}

pub fn greene_alpha(p: &BinaryMatrix, theta: Angle) -> Result<Complex64> {
    greene_alpha_with(p, theta, &Limits::default())
}

/// `α = e^{iθ(r−n)} i^r sin^r θ · T((e^{iθ}+e^{−iθ})/(e^{iθ}−e^{−iθ}), e^{2iθ})`.
///
/// At θ ≡ 0 or π, where the Tutte form degenerates, `α = e^{iθn}`.
pub fn greene_alpha_with(p: &BinaryMatrix, theta: Angle, limits: &Limits) -> Result<Complex64> {
    let n = p.nrows() as f64;
    let t = theta.value();
    let degenerate = match theta {
        Angle::Exact { den, .. } => den == 1,
        Angle::Radians(v) => v.sin() == 0.0,
    };
    if degenerate {
        return Ok(Complex64::from_polar(1.0, t * n));
    }
    let r = p.rank() as u32;
    let e = Complex64::from_polar(1.0, t);
    let x = (e + e.conj()) / (e - e.conj());
    let y = e * e;
    let tv = tutte_eval_with(p, x, y, limits)?;
    let prefactor = Complex64::from_polar(1.0, t * (r as f64 - n))
        * Complex64::i().powu(r)
        * t.sin().powi(r as i32);
    Ok(prefactor * tv)
}

/// `Π_j ((y^{a_j} − 1)/(y − 1) + x − 1)`, the Tutte polynomial of a star
/// whose `j`-th spoke has `a_j` parallel edges.
///
/// # Panics
///
/// Panics if some `a_j` is zero.
pub fn star_tutte(spokes: &[u32]) -> TuttePolynomial {
    spokes.iter().fold(TuttePolynomial::one(), |acc, &a| {
        assert!(a >= 1, "star spokes need at least one edge");
        let factor = TuttePolynomial::from_terms(
            std::iter::once(((1, 0), 1)).chain((1..a).map(|j| ((0, j), 1))),
        );
        acc.mul(&factor)
    })
}

/// Incidence matrix of a star: column 0 is the hub, column `j` the `j`-th
/// leaf, and spoke `j` contributes `a_j` copies of the row `e_0 + e_j`.
pub fn star_graph_matrix(spokes: &[u32]) -> BinaryMatrix {
    let l = spokes.len() + 1;
    let mut rows = Vec::new();
    for (j, &a) in spokes.iter().enumerate() {
        let mut row = BitVector::unit(l, 0);
        row.set(j + 1, true);
        rows.extend(std::iter::repeat(row).take(a as usize));
    }
    BinaryMatrix::from_rows(rows, l).expect("rows have the hub-plus-leaves width")
}
