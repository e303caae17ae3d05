//! Exact linear algebra over the rationals and univariate rational polynomials.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::expr::Rational;

/// Dense row-major matrix of exact rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> QMatrix {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> QMatrix {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> QMatrix {
        let r = rows.len();
        let c = rows.first().map(|v| v.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row);
        }
        QMatrix { rows: r, cols: c, data }
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, o.rows);
        let mut m = QMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let p = a * &o[(k, j)];
                    m[(i, j)] += p;
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).fold(Rational::zero(), |s, x| s + x))
            .collect()
    }

    /// Reduce to reduced row-echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self[(r, c)].recip();
            for j in c..self.cols {
                let v = &self[(r, j)] * &inv;
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in c..self.cols {
                    let v = &self[(r, j)] * &f;
                    self[(i, j)] -= v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{v : A v = 0}`.
    pub fn null_space(&self) -> Vec<Vec<Rational>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    /// One solution of `A x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = QMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug[(r, self.cols)].clone();
        }
        Some(x)
    }

    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for i in c + 1..n {
                let f = &m[(i, c)] / &piv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = &m[(c, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
        }
        det
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// Dense univariate polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct QPoly {
    pub coeffs: Vec<Rational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> QPoly {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn monic(&self) -> QPoly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(l) => QPoly::new(self.coeffs.iter().map(|c| c / l).collect()),
        }
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::new(vec![]);
        }
        let mut c = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        QPoly::new(c)
    }

    /// Euclidean division: `(q, r)` with `self = q·d + r`.
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let lead = d.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        let mut q = vec![Rational::zero(); r.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = &r[r.len() - 1] / &lead;
            for (i, c) in d.coeffs.iter().enumerate() {
                let v = &f * c;
                r[k + i] -= v;
            }
            q[k] = f;
            while r.last().map(|c| c.is_zero()).unwrap_or(false) {
                r.pop();
            }
        }
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// All distinct rational roots, ascending.
    pub fn rational_roots(&self) -> Vec<Rational> {
        if self.is_zero() {
            return vec![];
        }
        // strip roots at zero
        let mut roots = Vec::new();
        let mut cs = self.coeffs.clone();
        if cs[0].is_zero() {
            roots.push(Rational::zero());
            while cs.first().map(|c| c.is_zero()).unwrap_or(false) {
                cs.remove(0);
            }
        }
        if cs.len() <= 1 {
            return roots;
        }
        // clear denominators
        let l = cs.iter().fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
        let ints: Vec<BigInt> = cs.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
        let p = &QPoly::new(cs);
        let a0 = ints[0].abs();
        let an = ints[ints.len() - 1].abs();
        for num in divisors(&a0) {
            for den in divisors(&an) {
                for s in [1i64, -1] {
                    let cand = Rational::new(&num * BigInt::from(s), den.clone());
                    if p.eval(&cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        roots
    }
}

/// Positive divisors of a nonzero integer (trial division).
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![];
    }
    let mut out = Vec::new();
    if let Some(v) = n.to_u64() {
        let mut d = 1u64;
        while d * d <= v {
            if v % d == 0 {
                out.push(BigInt::from(d));
                if d * d != v {
                    out.push(BigInt::from(v / d));
                }
            }
            d += 1;
        }
    } else {
        let mut d = BigInt::one();
        while &d * &d <= n {
            if (&n % &d).is_zero() {
                out.push(d.clone());
                let q = &n / &d;
                if q != d {
                    out.push(q);
                }
            }
            d += 1;
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{rat, rint};

    fn q(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| rint(v)).collect()).collect())
    }

    #[test]
    fn rank_and_null_space() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let ns = m.null_space();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(|v| v.is_zero()));
    }

    #[test]
    fn solve_and_determinant() {
        let m = q(&[&[2, 1], &[1, 3]]);
        let x = m.solve(&[rint(3), rint(5)]).unwrap();
        assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
        assert_eq!(m.determinant(), rint(5));
        let sing = q(&[&[1, 1], &[1, 1]]);
        assert!(sing.solve(&[rint(1), rint(2)]).is_none());
    }

    #[test]
    fn polynomial_roots_and_gcd() {
        // (j+1)(j-4)(j-5)(j-6) = j^4 - 14 j^3 + 59 j^2 - 46 j - 120
        let p = QPoly::new([-120, -46, 59, -14, 1].iter().map(|&c| rint(c)).collect());
        assert_eq!(p.rational_roots(), vec![rint(-1), rint(4), rint(5), rint(6)]);
        let a = QPoly::new(vec![rint(-1), rint(0), rint(1)]); // x^2 - 1
        let b = QPoly::new(vec![rint(1), rint(1)]); // x + 1
        assert_eq!(a.gcd(&b), b);
        let h = QPoly::new(vec![rat(-1, 2), rint(3)]); // 3x - 1/2
        assert_eq!(h.rational_roots(), vec![rat(1, 6)]);
    }
}
