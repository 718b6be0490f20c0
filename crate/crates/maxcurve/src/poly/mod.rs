//! Polynomial arithmetic: sparse multivariate polynomials over a finite
//! field, dense univariate polynomials over a finite field and over the
//! integers, parsing, determinants, resultants and root finding.

pub mod int;
pub mod parse;
pub mod uni;

use crate::gf::{Elem, Field, FieldError};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Errors from polynomial operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("expected {expected} coordinates, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("total degree {got} exceeds target degree {target}")]
    DegreeOverflow { got: u32, target: u32 },
    #[error("variable index {0} out of range")]
    BadVariable(usize),
    #[error("zero denominator in rational map")]
    ZeroDenominator,
    #[error("matrix is not square")]
    NotSquare,
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Exponent tuple ordered by graded lexicographic order: higher total degree
/// first, ties broken lexicographically with earlier variables weighing more.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Mono) -> Mono {
        Mono(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(&a, &b)| a + b)
                .collect(),
        )
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial; only nonzero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Mono, Elem>,
}

impl MultiPoly {
    pub fn zero(field: &Field, nvars: usize) -> MultiPoly {
        MultiPoly {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Field, nvars: usize, c: &Elem) -> MultiPoly {
        let mut f = MultiPoly::zero(field, nvars);
        f.add_term(Mono(vec![0; nvars]), c.clone());
        f
    }

    pub fn var(field: &Field, nvars: usize, i: usize) -> MultiPoly {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        let mut f = MultiPoly::zero(field, nvars);
        f.add_term(Mono(exps), field.one());
        f
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Add `c · x^mono` into the polynomial, dropping the term if it cancels.
    pub fn add_term(&mut self, mono: Mono, c: Elem) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = self.field.add(o.get(), &c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.field.neg(c);
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.field, self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), self.field.mul(ca, cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &Elem) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.field, self.nvars);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), self.field.mul(a, c));
        }
        out
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut out = MultiPoly::constant(&self.field, self.nvars, &self.field.one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Total degree; None for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Largest exponent of one variable.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Some(d) if every term has total degree d (zero counts as homogeneous
    /// of any degree; reported as None).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| m.degree());
        let first = degs.next()?;
        if degs.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn eval(&self, point: &[Elem]) -> Result<Elem, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::Arity {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let f = &self.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = f.mul(&t, &f.pow(&point[i], e as u64));
                }
            }
            acc = f.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Formal partial derivative with respect to one variable.
    pub fn derive(&self, var: usize) -> Result<MultiPoly, PolyError> {
        if var >= self.nvars {
            return Err(PolyError::BadVariable(var));
        }
        let mut out = MultiPoly::zero(&self.field, self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            out.add_term(Mono(exps), self.field.scale(c, e as u64));
        }
        Ok(out)
    }

    /// Multiply each term by var^(d − term degree) to reach degree d.
    pub fn homogenize(&self, var: usize, d: u32) -> Result<MultiPoly, PolyError> {
        if var >= self.nvars {
            return Err(PolyError::BadVariable(var));
        }
        if let Some(t) = self.total_degree() {
            if t > d {
                return Err(PolyError::DegreeOverflow { got: t, target: d });
            }
        }
        let mut out = MultiPoly::zero(&self.field, self.nvars);
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            exps[var] += d - m.degree();
            out.add_term(Mono(exps), c.clone());
        }
        Ok(out)
    }

    /// Substitute var = 1.
    pub fn dehomogenize(&self, var: usize) -> Result<MultiPoly, PolyError> {
        if var >= self.nvars {
            return Err(PolyError::BadVariable(var));
        }
        let mut out = MultiPoly::zero(&self.field, self.nvars);
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            exps[var] = 0;
            out.add_term(Mono(exps), c.clone());
        }
        Ok(out)
    }

    /// Substitute each variable by the corresponding polynomial.
    pub fn compose(&self, subs: &[MultiPoly]) -> Result<MultiPoly, PolyError> {
        if subs.len() != self.nvars {
            return Err(PolyError::Arity {
                expected: self.nvars,
                got: subs.len(),
            });
        }
        let out_vars = subs.first().map(|s| s.nvars).unwrap_or(0);
        // memoized powers of each substituted polynomial
        let mut powers: Vec<Vec<MultiPoly>> = subs
            .iter()
            .map(|s| vec![MultiPoly::constant(&s.field, out_vars, &s.field.one())])
            .collect();
        let mut out = MultiPoly::zero(&self.field, out_vars);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(&self.field, out_vars, c);
            for (i, &e) in m.0.iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&subs[i]);
                    powers[i].push(next);
                }
                if e > 0 {
                    t = t.mul(&powers[i][e as usize]);
                }
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Lift a polynomial with prime-subfield coefficients into an extension
    /// with the same characteristic.
    pub fn lift(&self, ext: &Field) -> Result<MultiPoly, PolyError> {
        if self.field == *ext {
            return Ok(self.clone());
        }
        if self.field.k() != 1 || self.field.p() != ext.p() {
            return Err(PolyError::FieldMismatch);
        }
        let mut out = MultiPoly::zero(ext, self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), ext.from_u64(self.field.code(c)));
        }
        Ok(out)
    }

    /// Multivariate division by a single divisor under graded lexicographic
    /// order; Some(q) iff self = q·g exactly.
    pub fn divide_exact(&self, g: &MultiPoly) -> Option<MultiPoly> {
        if g.is_zero() {
            return None;
        }
        let f = &self.field;
        let (glm, glc) = g.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone()))?;
        let glc_inv = f.inv(&glc).expect("nonzero lead coefficient");
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(f, self.nvars);
        while let Some((rm, rc)) = rem.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            // does the divisor's lead monomial divide the remainder's?
            if rm.0.iter().zip(glm.0.iter()).any(|(&a, &b)| a < b) {
                return None;
            }
            let qm = Mono(rm.0.iter().zip(glm.0.iter()).map(|(&a, &b)| a - b).collect());
            let qc = f.mul(&rc, &glc_inv);
            quot.add_term(qm.clone(), qc.clone());
            let mut sub = MultiPoly::zero(f, self.nvars);
            sub.add_term(qm, qc);
            rem = rem.sub(&sub.mul(g));
        }
        Some(quot)
    }

    /// Scalar c with self = c · other, if the two are proportional and
    /// nonzero; for two zero polynomials returns 1.
    pub fn proportionality(&self, other: &MultiPoly) -> Option<Elem> {
        let f = &self.field;
        if self.is_zero() && other.is_zero() {
            return Some(f.one());
        }
        if self.terms.len() != other.terms.len() {
            return None;
        }
        let mut scalar: Option<Elem> = None;
        for ((ma, ca), (mb, cb)) in self.terms.iter().zip(other.terms.iter()) {
            if ma != mb {
                return None;
            }
            let r = f.div(ca, cb).ok()?;
            match &scalar {
                None => scalar = Some(r),
                Some(s) if *s == r => {}
                _ => return None,
            }
        }
        scalar
    }

    /// View a polynomial involving only `var` as a dense univariate.
    pub fn as_univariate(&self, var: usize) -> Result<uni::UniPolyF, PolyError> {
        let mut coeffs = vec![self.field.zero(); self.degree_in(var) as usize + 1];
        for (m, c) in &self.terms {
            for (i, &e) in m.0.iter().enumerate() {
                if i != var && e != 0 {
                    return Err(PolyError::Unsupported(format!(
                        "polynomial involves variable {i}, not univariate in {var}"
                    )));
                }
            }
            coeffs[m.0[var] as usize] = c.clone();
        }
        Ok(uni::UniPolyF::from_coeffs(&self.field, coeffs))
    }

    /// Collect coefficients with respect to `var`: entry e is the
    /// coefficient polynomial of var^e (with var cleared from its terms).
    pub fn coeffs_in(&self, var: usize) -> Vec<MultiPoly> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![MultiPoly::zero(&self.field, self.nvars); d + 1];
        for (m, c) in &self.terms {
            let e = m.0[var] as usize;
            let mut exps = m.0.clone();
            exps[var] = 0;
            out[e].add_term(Mono(exps), c.clone());
        }
        out
    }
}

/// Components of a rational map between affine models, numerator/denominator
/// pairs over shared source variables.
#[derive(Debug, Clone)]
pub struct RationalMap {
    pub components: Vec<(MultiPoly, MultiPoly)>,
}

impl RationalMap {
    pub fn new(components: Vec<(MultiPoly, MultiPoly)>) -> Result<RationalMap, PolyError> {
        for (_, d) in &components {
            if d.is_zero() {
                return Err(PolyError::ZeroDenominator);
            }
        }
        Ok(RationalMap { components })
    }
}

/// Pull back `f` (in target variables) along the map. Result (N, D) with
/// f∘map = N/D. Clearing convention: D = Π D_i^{E_i} where E_i is the
/// largest exponent of target variable i in f; each term c·Πx_i^{e_i}
/// contributes c·Π N_i^{e_i}·D_i^{E_i−e_i}. A constant f returns (f·1, 1).
pub fn pullback(f: &MultiPoly, map: &RationalMap) -> Result<(MultiPoly, MultiPoly), PolyError> {
    if f.nvars != map.components.len() {
        return Err(PolyError::Arity {
            expected: map.components.len(),
            got: f.nvars,
        });
    }
    for (_, d) in &map.components {
        if d.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
    }
    let field = &f.field;
    let src_vars = map
        .components
        .first()
        .map(|(n, _)| n.nvars)
        .unwrap_or(0);
    let caps: Vec<u32> = (0..f.nvars).map(|i| f.degree_in(i)).collect();
    // memoized powers of numerators and denominators
    let mut npow: Vec<Vec<MultiPoly>> = Vec::new();
    let mut dpow: Vec<Vec<MultiPoly>> = Vec::new();
    for (n, d) in &map.components {
        let one = MultiPoly::constant(field, src_vars, &field.one());
        let mut np = vec![one.clone()];
        let mut dp = vec![one];
        for e in 1..=caps[npow.len()] as usize {
            np.push(np[e - 1].mul(n));
            dp.push(dp[e - 1].mul(d));
        }
        npow.push(np);
        dpow.push(dp);
    }
    let mut numer = MultiPoly::zero(field, src_vars);
    for (m, c) in &f.terms {
        let mut t = MultiPoly::constant(field, src_vars, c);
        for (i, &e) in m.0.iter().enumerate() {
            t = t.mul(&npow[i][e as usize]);
            t = t.mul(&dpow[i][(caps[i] - e) as usize]);
        }
        numer = numer.add(&t);
    }
    let mut denom = MultiPoly::constant(field, src_vars, &field.one());
    for (i, dp) in dpow.iter().enumerate() {
        denom = denom.mul(&dp[caps[i] as usize]);
    }
    Ok((numer, denom))
}

/// Exact determinant of a square matrix of polynomials by cofactor
/// expansion along the first row. Intended for small matrices (n ≤ 5).
pub fn det_poly_matrix(m: &[Vec<MultiPoly>]) -> Result<MultiPoly, PolyError> {
    let n = m.len();
    for row in m {
        if row.len() != n {
            return Err(PolyError::NotSquare);
        }
    }
    if n == 0 {
        return Err(PolyError::NotSquare);
    }
    Ok(det_rec(m, &(0..n).collect::<Vec<_>>(), 0))
}

fn det_rec(m: &[Vec<MultiPoly>], cols: &[usize], row: usize) -> MultiPoly {
    let field = m[0][0].field.clone();
    let nvars = m[0][0].nvars;
    if cols.len() == 1 {
        return m[row][cols[0]].clone();
    }
    let mut acc = MultiPoly::zero(&field, nvars);
    for (i, &c) in cols.iter().enumerate() {
        if m[row][c].is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = det_rec(m, &rest, row + 1);
        let term = m[row][c].mul(&minor);
        if i % 2 == 0 {
            acc = acc.add(&term);
        } else {
            acc = acc.sub(&term);
        }
    }
    acc
}

impl fmt::Display for MultiPoly {
    /// Prints in the parseable grammar with default variable names
    /// v0, v1, ... unless the conventional names fit (up to 8 vars the
    /// caller should use [`MultiPoly::render`] with explicit names).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("v{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        write!(f, "{}", self.render(&refs))
    }
}

impl MultiPoly {
    /// Render with explicit variable names, terms in descending graded
    /// lexicographic order; output parses back to the same polynomial.
    pub fn render(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (m, c) in self.terms.iter().rev() {
            let code = self.field.code(c);
            let coeff_str = if self.field.k() == 1 {
                format!("{code}")
            } else {
                // extension coefficients render as parenthesized-free codes;
                // only prime-field polynomials are meant to round-trip
                format!("{code}")
            };
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[i].to_string()),
                    _ => factors.push(format!("{}^{}", names[i], e)),
                }
            }
            let piece = if factors.is_empty() {
                coeff_str
            } else if code == 1 {
                factors.join("*")
            } else {
                format!("{}*{}", coeff_str, factors.join("*"))
            };
            if !out.is_empty() {
                out.push('+');
            }
            out.push_str(&piece);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_poly;

    fn f3() -> Field {
        Field::new(3, 1).unwrap()
    }

    #[test]
    fn grlex_order_examples() {
        // x^2 > xy > y^2 > x > y > 1 in two variables
        let seq = [
            Mono(vec![2, 0]),
            Mono(vec![1, 1]),
            Mono(vec![0, 2]),
            Mono(vec![1, 0]),
            Mono(vec![0, 1]),
            Mono(vec![0, 0]),
        ];
        for w in seq.windows(2) {
            assert!(w[0] > w[1], "{:?} should exceed {:?}", w[0], w[1]);
        }
    }

    #[test]
    fn ring_operations_via_evaluation() {
        let f = f3();
        let a = parse_poly("x^2+2*y", &["x", "y"], &f).unwrap();
        let b = parse_poly("x*y+1", &["x", "y"], &f).unwrap();
        let sum = a.add(&b);
        let prod = a.mul(&b);
        for cx in 0..3 {
            for cy in 0..3 {
                let pt = vec![f.from_u64(cx), f.from_u64(cy)];
                let va = a.eval(&pt).unwrap();
                let vb = b.eval(&pt).unwrap();
                assert_eq!(sum.eval(&pt).unwrap(), f.add(&va, &vb));
                assert_eq!(prod.eval(&pt).unwrap(), f.mul(&va, &vb));
            }
        }
    }

    #[test]
    fn derivative_char_three() {
        let f = f3();
        let cube = parse_poly("x^3", &["x", "y"], &f).unwrap();
        assert!(cube.derive(0).unwrap().is_zero());
        let g = parse_poly("x^2*y", &["x", "y"], &f).unwrap();
        let gx = g.derive(0).unwrap();
        assert_eq!(gx, parse_poly("2*x*y", &["x", "y"], &f).unwrap());
        // Leibniz rule on a fixed pair
        let a = parse_poly("x^2+y^2+x*y", &["x", "y"], &f).unwrap();
        let b = parse_poly("x+2*y^3", &["x", "y"], &f).unwrap();
        let lhs = a.mul(&b).derive(0).unwrap();
        let rhs = a.derive(0).unwrap().mul(&b).add(&a.mul(&b.derive(0).unwrap()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn homogenize_round_trip() {
        let f = f3();
        let vars = ["x", "y", "z"];
        let g = parse_poly("x^2+y", &vars, &f).unwrap();
        let h = g.homogenize(2, 2).unwrap();
        assert_eq!(h, parse_poly("x^2+y*z", &vars, &f).unwrap());
        assert_eq!(h.dehomogenize(2).unwrap(), g);
        assert_eq!(h.homogeneous_degree(), Some(2));
        // the plane sextic model homogenizes as expected
        let affine = parse_poly("x^4+x^3*y^3-x^2-x*y^5+y^5+2*y", &vars, &f).unwrap();
        let hom = affine.homogenize(2, 6).unwrap();
        let want = parse_poly(
            "x^4*z^2+x^3*y^3-x^2*z^4-x*y^5+y^5*z+2*y*z^5",
            &vars,
            &f,
        )
        .unwrap();
        assert_eq!(hom, want);
        assert_eq!(hom.dehomogenize(2).unwrap(), affine);
        // degree overflow is an error
        assert!(matches!(
            affine.homogenize(2, 4),
            Err(PolyError::DegreeOverflow { .. })
        ));
    }

    #[test]
    fn exact_division() {
        let f = f3();
        let vars = ["x", "y"];
        let a = parse_poly("x^2-y^2", &vars, &f).unwrap();
        let b = parse_poly("x-y", &vars, &f).unwrap();
        let q = a.divide_exact(&b).unwrap();
        assert_eq!(q, parse_poly("x+y", &vars, &f).unwrap());
        let x = parse_poly("x", &vars, &f).unwrap();
        let y = parse_poly("y", &vars, &f).unwrap();
        assert!(x.divide_exact(&y).is_none());
        // (f·g) ÷ g recovers f on seeded sparse pairs
        let mut state = 1u64;
        let mut rng = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            state >> 33
        };
        for _ in 0..200 {
            let mut fa = MultiPoly::zero(&f, 2);
            let mut fb = MultiPoly::zero(&f, 2);
            for _ in 0..3 {
                fa.add_term(
                    Mono(vec![(rng() % 4) as u32, (rng() % 4) as u32]),
                    f.from_u64(rng() % 3),
                );
                fb.add_term(
                    Mono(vec![(rng() % 3) as u32, (rng() % 3) as u32]),
                    f.from_u64(rng() % 3),
                );
            }
            if fb.is_zero() {
                continue;
            }
            let prod = fa.mul(&fb);
            let q = prod.divide_exact(&fb).expect("constructed product divides");
            assert_eq!(q, fa);
        }
    }

    #[test]
    fn determinant_small_matrices() {
        let f = f3();
        let vars = ["x", "y"];
        let x = parse_poly("x", &vars, &f).unwrap();
        let y = parse_poly("y", &vars, &f).unwrap();
        let zero = MultiPoly::zero(&f, 2);
        // diag(x,x,x,x,x) → x^5
        let mut m = vec![vec![zero.clone(); 5]; 5];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = x.clone();
        }
        assert_eq!(
            det_poly_matrix(&m).unwrap(),
            parse_poly("x^5", &vars, &f).unwrap()
        );
        // [[x,y],[y,x]] → x^2 − y^2
        let m2 = vec![vec![x.clone(), y.clone()], vec![y.clone(), x.clone()]];
        assert_eq!(
            det_poly_matrix(&m2).unwrap(),
            parse_poly("x^2-y^2", &vars, &f).unwrap()
        );
        let bad = vec![vec![x.clone()], vec![y.clone()]];
        assert!(det_poly_matrix(&bad).is_err());
    }

    #[test]
    fn determinant_matches_numeric_evaluation() {
        // random-ish 4×4 of linear forms: symbolic det at sample points
        // equals the numeric determinant of the evaluated matrix
        let f = Field::new(3, 2).unwrap();
        let nv = 3;
        let mut state = 7u64;
        let mut rng = move || {
            state = state.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
            state >> 32
        };
        let mut m = Vec::new();
        for _ in 0..4 {
            let mut row = Vec::new();
            for _ in 0..4 {
                let mut e = MultiPoly::zero(&f, nv);
                for v in 0..nv {
                    e.add_term(
                        Mono({
                            let mut ex = vec![0; nv];
                            ex[v] = 1;
                            ex
                        }),
                        f.from_code(rng() % 9),
                    );
                }
                row.push(e);
            }
            m.push(row);
        }
        let det = det_poly_matrix(&m).unwrap();
        for trial in 0..50u64 {
            let pt: Vec<Elem> = (0..nv).map(|i| f.from_code((trial * 31 + i as u64 * 7) % 9)).collect();
            // numeric determinant by Gaussian elimination
            let mut num: Vec<Vec<Elem>> = m
                .iter()
                .map(|row| row.iter().map(|e| e.eval(&pt).unwrap()).collect())
                .collect();
            let mut detv = f.one();
            let n = 4;
            let mut sign_flip = false;
            'outer: for col in 0..n {
                let mut piv = None;
                for r in col..n {
                    if !num[r][col].is_zero() {
                        piv = Some(r);
                        break;
                    }
                }
                let piv = match piv {
                    Some(p) => p,
                    None => {
                        detv = f.zero();
                        break 'outer;
                    }
                };
                if piv != col {
                    num.swap(piv, col);
                    sign_flip = !sign_flip;
                }
                detv = f.mul(&detv, &num[col][col]);
                let inv = f.inv(&num[col][col]).unwrap();
                for r in col + 1..n {
                    let factor = f.mul(&num[r][col], &inv);
                    for c in col..n {
                        let t = f.mul(&factor, &num[col][c]);
                        num[r][c] = f.sub(&num[r][c], &t);
                    }
                }
            }
            if sign_flip {
                detv = f.neg(&detv);
            }
            assert_eq!(det.eval(&pt).unwrap(), detv);
        }
    }

    #[test]
    fn pullback_clearing_convention() {
        let f = f3();
        // map x' = x/y: pulling back f = x' gives (x, y)
        let x = parse_poly("x", &["x", "y"], &f).unwrap();
        let y = parse_poly("y", &["x", "y"], &f).unwrap();
        let map = RationalMap::new(vec![(x.clone(), y.clone())]).unwrap();
        let xp = parse_poly("u", &["u"], &f).unwrap();
        let (n, d) = pullback(&xp, &map).unwrap();
        assert_eq!(n, x);
        assert_eq!(d, y);
        // constant pulls back to (c, 1)
        let c = parse_poly("2", &["u"], &f).unwrap();
        let (n, d) = pullback(&c, &map).unwrap();
        assert_eq!(n, MultiPoly::constant(&f, 2, &f.from_u64(2)));
        assert_eq!(d, MultiPoly::constant(&f, 2, &f.one()));
        // f = u^2 + u: N = x^2 + x·y, D = y^2
        let g = parse_poly("u^2+u", &["u"], &f).unwrap();
        let (n, d) = pullback(&g, &map).unwrap();
        assert_eq!(n, parse_poly("x^2+x*y", &["x", "y"], &f).unwrap());
        assert_eq!(d, parse_poly("y^2", &["x", "y"], &f).unwrap());
    }

    #[test]
    fn proportionality_detection() {
        let f = f3();
        let vars = ["x", "y"];
        let a = parse_poly("x^2+2*y", &vars, &f).unwrap();
        let b = parse_poly("2*x^2+y", &vars, &f).unwrap();
        assert_eq!(a.proportionality(&b), Some(f.from_u64(2)));
        let c = parse_poly("x^2+y", &vars, &f).unwrap();
        assert_eq!(a.proportionality(&c), None);
        assert_eq!(a.proportionality(&a), Some(f.one()));
    }

    #[test]
    fn compose_substitution() {
        let f = f3();
        // f(x,y) = x^2+y, substitute x=u+v, y=u*v
        let g = parse_poly("x^2+y", &["x", "y"], &f).unwrap();
        let u_plus_v = parse_poly("u+v", &["u", "v"], &f).unwrap();
        let uv = parse_poly("u*v", &["u", "v"], &f).unwrap();
        let h = g.compose(&[u_plus_v, uv]).unwrap();
        assert_eq!(h, parse_poly("u^2+2*u*v+v^2+u*v", &["u", "v"], &f).unwrap());
    }

    #[test]
    fn render_round_trip() {
        let f = f3();
        let vars = ["x", "y", "z"];
        let samples = [
            "x^4*z^2+x^3*y^3+2*x^2*z^4+2*x*y^5+y^5*z+2*y*z^5",
            "x^2-y^2",
            "2*x*y+z",
            "0",
            "1",
        ];
        for s in samples {
            let p = parse_poly(s, &vars, &f).unwrap();
            let printed = p.render(&vars);
            let re = parse_poly(&printed, &vars, &f).unwrap();
            assert_eq!(p, re, "round trip failed for {s} → {printed}");
        }
    }
}
