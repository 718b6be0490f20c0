//! Univariate polynomials with exact integer coefficients: ring
//! arithmetic, exact division, evaluation, and fraction-free Sylvester
//! resultants. Used for Weil polynomials, where every quantity must stay
//! an exact integer.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Integer polynomial; coefficient of X^i at index i, trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> IntPoly {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn from_big(coeffs: Vec<BigInt>) -> IntPoly {
        let mut p = IntPoly { coeffs };
        p.trim();
        p
    }

    /// Constant term first.
    pub fn from_i64s(coeffs: &[i64]) -> IntPoly {
        IntPoly::from_big(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Highest-degree coefficient first (as polynomials are usually read).
    pub fn from_descending(coeffs: &[i64]) -> IntPoly {
        let mut v: Vec<i64> = coeffs.to_vec();
        v.reverse();
        IntPoly::from_i64s(&v)
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficients highest degree first, for display and comparison
    /// against the usual written form.
    pub fn descending(&self) -> Vec<BigInt> {
        self.coeffs.iter().rev().cloned().collect()
    }

    pub fn lead(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        matches!(self.lead(), Some(c) if c.is_one())
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::from_big((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly::from_big(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPoly::from_big(coeffs)
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::from_big(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        let mut acc = IntPoly::from_i64s(&[1]);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Exact division over Z: Some(quotient) when `other` divides self
    /// exactly (integer coefficients, zero remainder), None otherwise.
    pub fn divide_exact(&self, other: &IntPoly) -> Option<IntPoly> {
        let dd = other.deg()?;
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let dn = self.deg().unwrap();
        if dn < dd {
            return None;
        }
        let lead = other.lead().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); dn - dd + 1];
        for shift in (0..=dn - dd).rev() {
            let top = rem[shift + dd].clone();
            if top.is_zero() {
                continue;
            }
            if (&top % lead) != BigInt::zero() {
                return None;
            }
            let q = &top / lead;
            for j in 0..=dd {
                rem[shift + j] -= &q * &other.coeffs[j];
            }
            quot[shift] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::from_big(quot))
    }

    /// Substitute X ↦ c·X.
    pub fn scale_variable(&self, c: &BigInt) -> IntPoly {
        let mut power = BigInt::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| {
                let out = a * &power;
                power = &power * c;
                out
            })
            .collect();
        IntPoly::from_big(coeffs)
    }

    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                out.push_str(&mag.to_string());
            }
            if i > 0 {
                if show_coeff {
                    out.push('*');
                }
                out.push_str(var);
                if i > 1 {
                    out.push_str(&format!("^{i}"));
                }
            }
        }
        out
    }
}

/// Resultant of two nonzero integer polynomials via fraction-free
/// (Bareiss) elimination of the Sylvester matrix; exact over Z.
pub fn int_resultant(f: &IntPoly, g: &IntPoly) -> Option<BigInt> {
    let df = f.deg()?;
    let dg = g.deg()?;
    if df == 0 {
        return Some(f.coeff(0).pow(dg as u32));
    }
    if dg == 0 {
        return Some(g.coeff(0).pow(df as u32));
    }
    let n = df + dg;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for row in 0..dg {
        for (j, c) in f.coeffs.iter().enumerate() {
            m[row][row + df - j] = c.clone();
        }
    }
    for row in 0..df {
        for (j, c) in g.coeffs.iter().enumerate() {
            m[dg + row][row + dg - j] = c.clone();
        }
    }
    Some(bareiss_det(m))
}

/// Fraction-free determinant (Bareiss algorithm); every division is exact.
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !m[r][k].is_zero());
            match swap {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_eval() {
        let a = IntPoly::from_i64s(&[1, 2, 3]); // 3X^2+2X+1
        let b = IntPoly::from_i64s(&[-1, 1]); // X-1
        assert_eq!(a.add(&b), IntPoly::from_i64s(&[0, 3, 3]));
        assert_eq!(a.mul(&b), IntPoly::from_i64s(&[-1, -1, -1, 3]));
        assert_eq!(a.eval(&BigInt::from(2)), BigInt::from(17));
        assert_eq!(a.deg(), Some(2));
        assert!(IntPoly::zero().deg().is_none());
        assert_eq!(
            IntPoly::from_descending(&[1, 2, 3]),
            IntPoly::from_i64s(&[3, 2, 1])
        );
    }

    #[test]
    fn exact_division() {
        let b = IntPoly::from_i64s(&[-1, 1]);
        let c = IntPoly::from_i64s(&[2, 1]);
        let prod = b.mul(&c);
        assert_eq!(prod.divide_exact(&b), Some(c.clone()));
        assert_eq!(prod.divide_exact(&c), Some(b.clone()));
        // not divisible: wrong remainder
        assert!(prod.add(&IntPoly::from_i64s(&[1])).divide_exact(&b).is_none());
        // not divisible: non-integer quotient (2X+2)/(2X) fails on remainder
        let two_x = IntPoly::from_i64s(&[0, 2]);
        assert!(IntPoly::from_i64s(&[2, 2]).divide_exact(&two_x).is_none());
        // leading coefficient need not be 1 when division is exact
        let scaled = two_x.mul(&c);
        assert_eq!(scaled.divide_exact(&two_x), Some(c));
    }

    #[test]
    fn resultants() {
        // Res(X+3, X+2) = (−3) − (−2) evaluated: linear case = 2 − 3 = −1
        let a = IntPoly::from_i64s(&[3, 1]);
        let b = IntPoly::from_i64s(&[2, 1]);
        assert_eq!(int_resultant(&a, &b), Some(BigInt::from(-1)));
        // Res(f, g·h) = Res(f,g)·Res(f,h)
        let c = IntPoly::from_i64s(&[2, 4, 1]);
        let gh = b.mul(&c);
        let r1 = int_resultant(&a, &gh).unwrap();
        let r2 = int_resultant(&a, &b).unwrap() * int_resultant(&a, &c).unwrap();
        assert_eq!(r1, r2);
        // Res(X−t, g) = g(t)
        for t in -5i64..=5 {
            let lin = IntPoly::from_i64s(&[-t, 1]);
            let r = int_resultant(&lin, &c).unwrap();
            assert_eq!(r, c.eval(&BigInt::from(t)));
        }
        // common factor forces zero
        assert_eq!(int_resultant(&b, &gh), Some(BigInt::zero()));
    }

    #[test]
    fn variable_scaling_and_render() {
        let a = IntPoly::from_i64s(&[1, -2, 1]); // X^2-2X+1
        let s = a.scale_variable(&BigInt::from(3)); // 9X^2-6X+1
        assert_eq!(s, IntPoly::from_i64s(&[1, -6, 9]));
        assert_eq!(a.render("T"), "T^2 - 2*T + 1");
        assert_eq!(IntPoly::from_i64s(&[0, 1]).render("T"), "T");
        assert_eq!(IntPoly::zero().render("T"), "0");
    }
}
