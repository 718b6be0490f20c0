//! Dense univariate polynomials over a finite field: Euclidean arithmetic,
//! Sylvester resultants, squarefree radicals, distinct-degree/equal-degree
//! factorization over the prime field, root finding in extensions, and a
//! bivariate resultant by evaluation-interpolation.

use super::{MultiPoly, PolyError};
use crate::gf::{Elem, Field};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Dense univariate polynomial; coefficient of X^i at index i, trimmed so
/// the last stored coefficient is nonzero (zero polynomial stores nothing).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPolyF {
    field: Field,
    coeffs: Vec<Elem>,
}

impl UniPolyF {
    pub fn zero(field: &Field) -> UniPolyF {
        UniPolyF {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn from_coeffs(field: &Field, coeffs: Vec<Elem>) -> UniPolyF {
        let mut p = UniPolyF {
            field: field.clone(),
            coeffs,
        };
        p.trim();
        p
    }

    /// Convenience constructor from signed integers (reduced mod p),
    /// constant term first.
    pub fn from_i64s(field: &Field, coeffs: &[i64]) -> UniPolyF {
        UniPolyF::from_coeffs(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn constant(field: &Field, c: &Elem) -> UniPolyF {
        UniPolyF::from_coeffs(field, vec![c.clone()])
    }

    pub fn x(field: &Field) -> UniPolyF {
        UniPolyF::from_coeffs(field, vec![field.zero(), field.one()])
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
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

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn lead(&self) -> Option<&Elem> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &UniPolyF) -> UniPolyF {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.add(&self.coeff(i), &other.coeff(i)))
            .collect();
        UniPolyF::from_coeffs(f, coeffs)
    }

    pub fn neg(&self) -> UniPolyF {
        let f = &self.field;
        UniPolyF::from_coeffs(f, self.coeffs.iter().map(|c| f.neg(c)).collect())
    }

    pub fn sub(&self, other: &UniPolyF) -> UniPolyF {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &UniPolyF) -> UniPolyF {
        if self.is_zero() || other.is_zero() {
            return UniPolyF::zero(&self.field);
        }
        let f = &self.field;
        let mut coeffs = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let t = f.mul(a, b);
                coeffs[i + j] = f.add(&coeffs[i + j], &t);
            }
        }
        UniPolyF::from_coeffs(f, coeffs)
    }

    pub fn mul_elem(&self, c: &Elem) -> UniPolyF {
        let f = &self.field;
        UniPolyF::from_coeffs(f, self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    /// Multiply by X^k.
    pub fn shift(&self, k: usize) -> UniPolyF {
        if self.is_zero() {
            return self.clone();
        }
        let f = &self.field;
        let mut coeffs = vec![f.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UniPolyF::from_coeffs(f, coeffs)
    }

    /// Quotient and remainder; error when dividing by zero.
    pub fn divrem(&self, other: &UniPolyF) -> Result<(UniPolyF, UniPolyF), PolyError> {
        let f = &self.field;
        let dd = other.deg().ok_or(PolyError::DivisionByZero)?;
        let lead_inv = f.inv(other.lead().unwrap())?;
        let mut rem = self.clone();
        let mut quot = vec![f.zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(dr) = rem.deg() {
            if dr < dd {
                break;
            }
            let c = f.mul(rem.lead().unwrap(), &lead_inv);
            let shift = dr - dd;
            quot[shift] = c.clone();
            for j in 0..=dd {
                let t = f.mul(&other.coeffs[j], &c);
                rem.coeffs[shift + j] = f.sub(&rem.coeffs[shift + j], &t);
            }
            rem.trim();
        }
        Ok((UniPolyF::from_coeffs(f, quot), rem))
    }

    pub fn rem(&self, other: &UniPolyF) -> Result<UniPolyF, PolyError> {
        Ok(self.divrem(other)?.1)
    }

    /// Scale to leading coefficient 1 (zero stays zero).
    pub fn monic(&self) -> UniPolyF {
        match self.lead() {
            None => self.clone(),
            Some(l) => {
                let inv = self.field.inv(l).expect("nonzero lead");
                self.mul_elem(&inv)
            }
        }
    }

    /// Monic greatest common divisor via Euclid.
    pub fn gcd(&self, other: &UniPolyF) -> UniPolyF {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: returns (g, s) with s·self ≡ g (mod m), g monic.
    pub fn half_ext_gcd(&self, m: &UniPolyF) -> (UniPolyF, UniPolyF) {
        let f = &self.field;
        let mut r0 = self.clone();
        let mut r1 = m.clone();
        let mut s0 = UniPolyF::constant(f, &f.one());
        let mut s1 = UniPolyF::zero(f);
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        match r0.lead() {
            None => (r0, s0),
            Some(l) => {
                let inv = f.inv(l).expect("nonzero");
                (r0.mul_elem(&inv), s0.mul_elem(&inv))
            }
        }
    }

    pub fn eval(&self, x: &Elem) -> Elem {
        let f = &self.field;
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, x), c);
        }
        acc
    }

    pub fn derivative(&self) -> UniPolyF {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.scale(c, i as u64))
            .collect();
        UniPolyF::from_coeffs(f, coeffs)
    }

    /// self^e mod m via binary exponentiation.
    pub fn pow_mod(&self, mut e: u128, m: &UniPolyF) -> Result<UniPolyF, PolyError> {
        let f = &self.field;
        let mut base = self.rem(m)?;
        let mut acc = UniPolyF::constant(f, &f.one()).rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m)?;
            }
            base = base.mul(&base).rem(m)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Lift prime-field coefficients into an extension of the same
    /// characteristic (or return self for the identical field).
    pub fn lift(&self, ext: &Field) -> Result<UniPolyF, PolyError> {
        if self.field == *ext {
            return Ok(self.clone());
        }
        if self.field.k() != 1 || self.field.p() != ext.p() {
            return Err(PolyError::FieldMismatch);
        }
        Ok(UniPolyF::from_coeffs(
            ext,
            self.coeffs
                .iter()
                .map(|c| ext.from_u64(self.field.code(c)))
                .collect(),
        ))
    }

    /// p-th root of a polynomial whose exponents are all divisible by p.
    fn pth_root(&self) -> Option<UniPolyF> {
        let f = &self.field;
        let p = f.p() as usize;
        let mut coeffs = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i % p == 0 {
                // c^(p^(k-1)) inverts Frobenius on the coefficient
                coeffs.push(f.frobenius(c, f.k() - 1));
            } else if !c.is_zero() {
                return None;
            }
        }
        Some(UniPolyF::from_coeffs(f, coeffs))
    }

    /// Product of the distinct irreducible factors (monic).
    pub fn radical(&self) -> Result<UniPolyF, PolyError> {
        if self.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let mut f = self.monic();
        let mut parts: Vec<UniPolyF> = Vec::new();
        loop {
            if f.deg() == Some(0) || f.deg().is_none() {
                break;
            }
            let d = f.derivative();
            if d.is_zero() {
                f = f.pth_root().expect("zero derivative forces p-th power");
                continue;
            }
            let g = f.gcd(&d);
            if g.deg() == Some(0) {
                parts.push(f);
                break;
            }
            let w = f.divrem(&g).expect("gcd divides").0;
            // w carries each irreducible with multiplicity not divisible
            // by p, once; strip all w-factors from f and recurse on the
            // leftover p-th-power part
            let mut rest = f.clone();
            loop {
                let h = rest.gcd(&w);
                if h.deg() == Some(0) {
                    break;
                }
                rest = rest.divrem(&h).expect("gcd divides").0;
            }
            parts.push(w);
            f = rest;
        }
        let unit = UniPolyF::constant(&self.field, &self.field.one());
        Ok(parts.iter().fold(unit, |acc, p| acc.mul(p)))
    }
}

/// Sylvester-matrix resultant of two nonzero polynomials over one field.
pub fn resultant(f: &UniPolyF, g: &UniPolyF) -> Result<Elem, PolyError> {
    let df = f.deg().ok_or(PolyError::DivisionByZero)?;
    let dg = g.deg().ok_or(PolyError::DivisionByZero)?;
    let field = f.field().clone();
    if df == 0 {
        return Ok(field.pow(&f.coeff(0), dg as u64));
    }
    if dg == 0 {
        return Ok(field.pow(&g.coeff(0), df as u64));
    }
    let n = df + dg;
    let mut m: Vec<Vec<Elem>> = vec![vec![field.zero(); n]; n];
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
    Ok(det_in_place(&field, m))
}

/// Determinant by Gaussian elimination with first-nonzero pivoting.
fn det_in_place(field: &Field, mut m: Vec<Vec<Elem>>) -> Elem {
    let n = m.len();
    let mut det = field.one();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => return field.zero(),
        };
        if piv != col {
            m.swap(piv, col);
            det = field.neg(&det);
        }
        det = field.mul(&det, &m[col][col]);
        let inv = field.inv(&m[col][col]).expect("pivot nonzero");
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = field.mul(&m[r][col], &inv);
            for c in col..n {
                let t = field.mul(&factor, &m[col][c]);
                m[r][c] = field.sub(&m[r][c], &t);
            }
        }
    }
    det
}

/// All roots of `f` lying in the field `ext`, with multiplicities (each
/// root repeated), sorted by element code. Coefficients must either lie in
/// the prime field (any extension allowed) or already in `ext` itself;
/// cross-extension embeddings are intentionally unsupported.
pub fn roots_in(f: &UniPolyF, ext: &Field) -> Result<Vec<Elem>, PolyError> {
    let lifted = f.lift(ext)?;
    if lifted.is_zero() {
        return Err(PolyError::DivisionByZero);
    }
    if lifted.deg() == Some(0) {
        return Ok(Vec::new());
    }
    let q = ext.q();
    // product of (X - r) over distinct roots in ext: gcd(f, X^q - X)
    let x = UniPolyF::x(ext);
    let xq = x.pow_mod(q as u128, &lifted)?;
    let linear_part = lifted.gcd(&xq.sub(&x));
    let mut distinct: Vec<Elem> = Vec::new();
    match linear_part.deg() {
        None | Some(0) => return Ok(Vec::new()),
        Some(1) => {
            let r = root_of_linear(&linear_part);
            distinct.push(r);
        }
        Some(_) => {
            if q <= 1 << 20 {
                for e in ext.elems() {
                    if linear_part.eval(&e).is_zero() {
                        distinct.push(e);
                    }
                }
            } else {
                let mut rng = StdRng::seed_from_u64(0x5eed_0001);
                split_linear_product(&linear_part, &mut rng, &mut distinct)?;
                distinct.sort_by_key(|e| ext.code(e));
            }
        }
    }
    // multiplicities by repeated exact division
    let mut out = Vec::new();
    for r in distinct {
        let lin = UniPolyF::from_coeffs(ext, vec![ext.neg(&r), ext.one()]);
        let mut cur = lifted.clone();
        loop {
            let (quo, rem) = cur.divrem(&lin)?;
            if !rem.is_zero() {
                break;
            }
            out.push(r.clone());
            cur = quo;
        }
    }
    Ok(out)
}

fn root_of_linear(f: &UniPolyF) -> Elem {
    let field = f.field();
    let inv = field.inv(f.lead().unwrap()).expect("nonzero lead");
    field.neg(&field.mul(&f.coeff(0), &inv))
}

/// Equal-degree-one splitting of a squarefree product of linear factors.
fn split_linear_product(
    f: &UniPolyF,
    rng: &mut StdRng,
    out: &mut Vec<Elem>,
) -> Result<(), PolyError> {
    match f.deg() {
        None | Some(0) => return Ok(()),
        Some(1) => {
            out.push(root_of_linear(f));
            return Ok(());
        }
        _ => {}
    }
    let field = f.field().clone();
    let q = field.q();
    loop {
        let c = field.from_code(rng.gen_range(0..q));
        let t = UniPolyF::from_coeffs(&field, vec![c, field.one()]);
        let te = t.pow_mod(((q - 1) / 2) as u128, f)?;
        let one = UniPolyF::constant(&field, &field.one());
        let h = f.gcd(&te.sub(&one));
        let dh = h.deg().unwrap_or(0);
        if dh > 0 && dh < f.deg().unwrap() {
            let other = f.divrem(&h)?.0;
            split_linear_product(&h, rng, out)?;
            split_linear_product(&other, rng, out)?;
            return Ok(());
        }
    }
}

/// Complete factorization over the prime field: returns the leading
/// coefficient and the monic irreducible factors with multiplicities,
/// sorted by (degree, coefficient codes). Deterministic: the equal-degree
/// splitting uses a fixed-seed generator.
pub fn factor_prime_field(f: &UniPolyF) -> Result<(Elem, Vec<(UniPolyF, u32)>), PolyError> {
    let field = f.field().clone();
    if field.k() != 1 {
        return Err(PolyError::Unsupported(
            "factorization implemented over the prime field only".into(),
        ));
    }
    let lead = f.lead().ok_or(PolyError::DivisionByZero)?.clone();
    let mut rad = f.radical()?;
    let p = field.p();
    // distinct-degree decomposition of the radical
    let mut rng = StdRng::seed_from_u64(0x5eed_0002);
    let mut irreducibles: Vec<UniPolyF> = Vec::new();
    let x = UniPolyF::x(&field);
    let mut h = x.clone();
    let mut m = 0u32;
    while rad.deg().unwrap_or(0) > 0 {
        m += 1;
        if (rad.deg().unwrap() as u32) < 2 * m {
            // the remainder is itself irreducible
            irreducibles.push(rad.monic());
            break;
        }
        h = h.pow_mod(p as u128, &rad)?;
        let g = rad.gcd(&h.sub(&x));
        if g.deg().unwrap_or(0) > 0 {
            split_equal_degree(&g, m, p, &mut rng, &mut irreducibles)?;
            rad = rad.divrem(&g)?.0;
            h = h.rem(&rad)?;
        }
    }
    // multiplicities by trial division of the original
    let mut factors = Vec::new();
    for irr in irreducibles {
        let mut mult = 0u32;
        let mut cur = f.clone();
        loop {
            let (quo, rem) = cur.divrem(&irr)?;
            if !rem.is_zero() {
                break;
            }
            mult += 1;
            cur = quo;
        }
        factors.push((irr, mult));
    }
    factors.sort_by(|a, b| {
        a.0.deg()
            .cmp(&b.0.deg())
            .then_with(|| coeff_codes(&a.0).cmp(&coeff_codes(&b.0)))
    });
    Ok((lead, factors))
}

fn coeff_codes(f: &UniPolyF) -> Vec<u64> {
    f.coeffs().iter().map(|c| f.field().code(c)).collect()
}

/// Split a squarefree product of degree-m irreducibles over F_p.
fn split_equal_degree(
    f: &UniPolyF,
    m: u32,
    p: u64,
    rng: &mut StdRng,
    out: &mut Vec<UniPolyF>,
) -> Result<(), PolyError> {
    let d = f.deg().unwrap_or(0) as u32;
    if d == 0 {
        return Ok(());
    }
    if d == m {
        out.push(f.monic());
        return Ok(());
    }
    let field = f.field().clone();
    let exp: u128 = (u128::from(p).pow(m) - 1) / 2;
    loop {
        let deg = f.deg().unwrap();
        let coeffs: Vec<Elem> = (0..deg)
            .map(|_| field.from_code(rng.gen_range(0..p)))
            .collect();
        let t = UniPolyF::from_coeffs(&field, coeffs);
        if t.is_zero() {
            continue;
        }
        let te = t.pow_mod(exp, f)?;
        let one = UniPolyF::constant(&field, &field.one());
        let h = f.gcd(&te.sub(&one));
        let dh = h.deg().unwrap_or(0);
        if dh > 0 && dh < deg {
            let other = f.divrem(&h)?.0;
            split_equal_degree(&h, m, p, rng, out)?;
            split_equal_degree(&other, m, p, rng, out)?;
            return Ok(());
        }
    }
}

/// Resultant of two bivariate polynomials with respect to `yvar`, as a
/// univariate polynomial in `xvar`, via evaluation at enough points of a
/// prime-field extension followed by Lagrange interpolation. The formal
/// Sylvester matrix (built from declared y-degrees) commutes with
/// evaluation, so specializations that drop degree are still exact.
/// Coefficients must lie in a prime field.
pub fn bivar_resultant(
    f: &MultiPoly,
    g: &MultiPoly,
    xvar: usize,
    yvar: usize,
) -> Result<UniPolyF, PolyError> {
    let base = f.field().clone();
    if base.k() != 1 {
        return Err(PolyError::Unsupported(
            "bivariate resultant implemented over prime fields only".into(),
        ));
    }
    for poly in [f, g] {
        for (m, _) in poly.terms() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 && i != xvar && i != yvar {
                    return Err(PolyError::Unsupported(format!(
                        "polynomial involves extraneous variable {i}"
                    )));
                }
            }
        }
    }
    let dyf = f.degree_in(yvar) as usize;
    let dyg = g.degree_in(yvar) as usize;
    let dxf = f.degree_in(xvar) as usize;
    let dxg = g.degree_in(xvar) as usize;
    if f.is_zero() || g.is_zero() {
        return Ok(UniPolyF::zero(&base));
    }
    let bound = dyg * dxf + dyf * dxg; // x-degree bound of the resultant
    let mut k = 1u32;
    while base.p().pow(k) <= bound as u64 {
        k += 1;
        if k > 16 {
            return Err(PolyError::Unsupported(
                "resultant interpolation would need too large an evaluation field".into(),
            ));
        }
    }
    let ext = Field::new(base.p(), k)?;
    // y-coefficient polynomials in x, lifted to the evaluation field
    let fc: Vec<UniPolyF> = coeff_polys(f, xvar, yvar, dyf, &ext)?;
    let gc: Vec<UniPolyF> = coeff_polys(g, xvar, yvar, dyg, &ext)?;
    let npts = bound + 1;
    let mut xs = Vec::with_capacity(npts);
    let mut ys = Vec::with_capacity(npts);
    for code in 0..npts as u64 {
        let alpha = ext.from_code(code);
        let fa: Vec<Elem> = fc.iter().map(|c| c.eval(&alpha)).collect();
        let ga: Vec<Elem> = gc.iter().map(|c| c.eval(&alpha)).collect();
        ys.push(sylvester_det_formal(&ext, &fa, &ga, dyf, dyg));
        xs.push(alpha);
    }
    let interp = lagrange_interpolate(&ext, &xs, &ys);
    // the result has prime-field coefficients; descend
    let mut coeffs = Vec::new();
    for c in interp.coeffs() {
        let code = ext.code(c);
        if code >= base.p() {
            return Err(PolyError::Unsupported(
                "interpolated resultant left the prime field".into(),
            ));
        }
        coeffs.push(base.from_u64(code));
    }
    Ok(UniPolyF::from_coeffs(&base, coeffs))
}

fn coeff_polys(
    f: &MultiPoly,
    xvar: usize,
    yvar: usize,
    dy: usize,
    ext: &Field,
) -> Result<Vec<UniPolyF>, PolyError> {
    let base = f.field();
    let mut out = vec![UniPolyF::zero(ext); dy + 1];
    for (m, c) in f.terms() {
        let e = m.0[yvar] as usize;
        let xe = m.0[xvar] as usize;
        let mut coeffs = vec![ext.zero(); xe + 1];
        coeffs[xe] = ext.from_u64(base.code(c));
        out[e] = out[e].add(&UniPolyF::from_coeffs(ext, coeffs));
    }
    Ok(out)
}

/// Determinant of the Sylvester matrix with declared degrees df, dg and the
/// given coefficient values (index = y-exponent).
fn sylvester_det_formal(field: &Field, fa: &[Elem], ga: &[Elem], df: usize, dg: usize) -> Elem {
    if df == 0 && dg == 0 {
        return field.one();
    }
    if df == 0 {
        return field.pow(&fa[0], dg as u64);
    }
    if dg == 0 {
        return field.pow(&ga[0], df as u64);
    }
    let n = df + dg;
    let mut m = vec![vec![field.zero(); n]; n];
    for row in 0..dg {
        for (j, c) in fa.iter().enumerate() {
            m[row][row + df - j] = c.clone();
        }
    }
    for row in 0..df {
        for (j, c) in ga.iter().enumerate() {
            m[dg + row][row + dg - j] = c.clone();
        }
    }
    det_in_place(field, m)
}

fn lagrange_interpolate(field: &Field, xs: &[Elem], ys: &[Elem]) -> UniPolyF {
    let n = xs.len();
    let mut acc = UniPolyF::zero(field);
    for i in 0..n {
        if ys[i].is_zero() {
            continue;
        }
        let mut numer = UniPolyF::constant(field, &field.one());
        let mut denom = field.one();
        for j in 0..n {
            if i == j {
                continue;
            }
            let lin = UniPolyF::from_coeffs(field, vec![field.neg(&xs[j]), field.one()]);
            numer = numer.mul(&lin);
            denom = field.mul(&denom, &field.sub(&xs[i], &xs[j]));
        }
        let scale = field.mul(&ys[i], &field.inv(&denom).expect("distinct nodes"));
        acc = acc.add(&numer.mul_elem(&scale));
    }
    acc
}

/// Outcome of a gcd computation inside F_p[X]/(P).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuotientGcd {
    /// Every input polynomial vanished identically in the quotient.
    AllZero,
    /// Degree (in y) of the monic gcd of the nonzero images.
    Degree(usize),
}

/// Gcd degree of bivariate polynomials specialized at x = (class of X) in
/// the quotient field F_p[X]/(modulus); `modulus` must be irreducible over
/// the prime field. Arithmetic runs directly in the quotient, so no field
/// tower or degree cap is involved.
pub fn quotient_gcd_degree(
    polys: &[&MultiPoly],
    xvar: usize,
    yvar: usize,
    modulus: &UniPolyF,
) -> Result<QuotientGcd, PolyError> {
    let base = modulus.field().clone();
    if base.k() != 1 {
        return Err(PolyError::Unsupported(
            "quotient-ring gcd implemented over prime fields only".into(),
        ));
    }
    let mut images: Vec<Vec<UniPolyF>> = Vec::new();
    for poly in polys {
        let dy = poly.degree_in(yvar) as usize;
        let mut coeffs = vec![UniPolyF::zero(&base); dy + 1];
        for (m, c) in poly.terms() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 && i != xvar && i != yvar {
                    return Err(PolyError::Unsupported(format!(
                        "polynomial involves extraneous variable {i}"
                    )));
                }
            }
            let e = m.0[yvar] as usize;
            let xe = m.0[xvar] as usize;
            let mut mono = vec![base.zero(); xe + 1];
            mono[xe] = c.clone();
            coeffs[e] = coeffs[e].add(&UniPolyF::from_coeffs(&base, mono));
        }
        let reduced: Vec<UniPolyF> = coeffs
            .iter()
            .map(|c| c.rem(modulus))
            .collect::<Result<_, _>>()?;
        images.push(reduced);
    }
    let nonzero: Vec<&Vec<UniPolyF>> = images
        .iter()
        .filter(|im| im.iter().any(|c| !c.is_zero()))
        .collect();
    if nonzero.is_empty() {
        return Ok(QuotientGcd::AllZero);
    }
    let mut g = trim_qpoly(nonzero[0].clone());
    for im in nonzero.iter().skip(1) {
        g = qpoly_gcd(&g, &trim_qpoly((*im).clone()), modulus)?;
        if g.len() == 1 {
            break;
        }
    }
    Ok(QuotientGcd::Degree(g.len().saturating_sub(1)))
}

fn trim_qpoly(mut v: Vec<UniPolyF>) -> Vec<UniPolyF> {
    while matches!(v.last(), Some(c) if c.is_zero()) {
        v.pop();
    }
    v
}

/// Inverse of a nonzero element of F_p[X]/(modulus).
fn qinv(a: &UniPolyF, modulus: &UniPolyF) -> Result<UniPolyF, PolyError> {
    let (g, s) = a.half_ext_gcd(modulus);
    if g.deg() != Some(0) {
        return Err(PolyError::Unsupported(
            "quotient modulus is not irreducible".into(),
        ));
    }
    let inv = a.field().inv(&g.coeff(0))?;
    s.mul_elem(&inv).rem(modulus)
}

/// Euclidean gcd of polynomials in (F_p[X]/(modulus))[y]; result monic,
/// trimmed, length = deg+1 (empty = zero).
fn qpoly_gcd(
    a: &[UniPolyF],
    b: &[UniPolyF],
    modulus: &UniPolyF,
) -> Result<Vec<UniPolyF>, PolyError> {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    while !r1.is_empty() {
        let lead_inv = qinv(r1.last().unwrap(), modulus)?;
        let db = r1.len() - 1;
        while r0.len() >= r1.len() && !r0.is_empty() {
            let da = r0.len() - 1;
            let c = r0.last().unwrap().mul(&lead_inv).rem(modulus)?;
            if c.is_zero() {
                r0.pop();
                continue;
            }
            let shift = da - db;
            for j in 0..=db {
                let t = r1[j].mul(&c).rem(modulus)?;
                r0[shift + j] = r0[shift + j].sub(&t).rem(modulus)?;
            }
            r0 = trim_qpoly(r0);
        }
        std::mem::swap(&mut r0, &mut r1);
    }
    if let Some(last) = r0.clone().last() {
        let inv = qinv(last, modulus)?;
        r0 = r0
            .iter()
            .map(|c| c.mul(&inv).rem(modulus))
            .collect::<Result<_, _>>()?;
        r0 = trim_qpoly(r0);
    }
    Ok(r0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_poly;

    fn f3() -> Field {
        Field::new(3, 1).unwrap()
    }

    #[test]
    fn division_and_gcd() {
        let f = f3();
        // (X^2 - 1) = (X - 1)(X + 1)
        let a = UniPolyF::from_i64s(&f, &[-1, 0, 1]);
        let b = UniPolyF::from_i64s(&f, &[-1, 1]);
        let (q, r) = a.divrem(&b).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, UniPolyF::from_i64s(&f, &[1, 1]));
        assert_eq!(a.gcd(&b), b.monic());
        // gcd with zero returns the monic other
        let z = UniPolyF::zero(&f);
        assert_eq!(a.gcd(&z), a.monic());
        // two coprime irreducibles: X^2+1 and X+1 over F_3
        let c = UniPolyF::from_i64s(&f, &[1, 0, 1]);
        assert_eq!(c.gcd(&b).deg(), Some(0));
    }

    #[test]
    fn extended_gcd_inverts() {
        let f = f3();
        let m = UniPolyF::from_i64s(&f, &[1, 0, 1]); // irreducible X^2+1
        let a = UniPolyF::from_i64s(&f, &[2, 1]);
        let (g, s) = a.half_ext_gcd(&m);
        assert_eq!(g.deg(), Some(0));
        let prod = a.mul(&s).rem(&m).unwrap();
        let ginv = f.inv(&g.coeff(0)).unwrap();
        assert_eq!(prod.mul_elem(&ginv), UniPolyF::constant(&f, &f.one()));
    }

    #[test]
    fn resultant_examples() {
        let f = f3();
        // Res(X - a, g) = g(a): take g = X^2 + 1, a = 1 → 2
        let lin = UniPolyF::from_i64s(&f, &[-1, 1]);
        let g = UniPolyF::from_i64s(&f, &[1, 0, 1]);
        assert_eq!(resultant(&lin, &g).unwrap(), f.from_u64(2));
        // shared root forces resultant zero
        let a = UniPolyF::from_i64s(&f, &[-1, 0, 1]);
        let b = UniPolyF::from_i64s(&f, &[-1, 1]);
        assert!(resultant(&a, &b).unwrap().is_zero());
        // resultant zero iff gcd nonconstant, on planted pairs
        let polys = [
            UniPolyF::from_i64s(&f, &[1, 1]),
            UniPolyF::from_i64s(&f, &[2, 1]),
            UniPolyF::from_i64s(&f, &[1, 0, 1]),
            UniPolyF::from_i64s(&f, &[2, 1, 1]),
        ];
        for x in &polys {
            for y in &polys {
                let r = resultant(x, y).unwrap();
                let common = x.gcd(y).deg().unwrap_or(0) > 0;
                assert_eq!(r.is_zero(), common);
            }
        }
    }

    #[test]
    fn roots_with_multiplicity() {
        let f = f3();
        // X^3 - X has roots 0, 1, 2 over F_3
        let a = UniPolyF::from_i64s(&f, &[0, -1, 0, 1]);
        let roots = roots_in(&a, &f).unwrap();
        let codes: Vec<u64> = roots.iter().map(|r| f.code(r)).collect();
        assert_eq!(codes, vec![0, 1, 2]);
        // X^2+1 has no roots over F_3 but two over F_9
        let b = UniPolyF::from_i64s(&f, &[1, 0, 1]);
        assert!(roots_in(&b, &f).unwrap().is_empty());
        let f9 = Field::new(3, 2).unwrap();
        let roots9 = roots_in(&b, &f9).unwrap();
        assert_eq!(roots9.len(), 2);
        for r in &roots9 {
            assert_eq!(f9.mul(r, r), f9.from_i64(-1));
        }
        // (X-1)^2·(X+1) reports 1 twice and 2 once
        let c = UniPolyF::from_i64s(&f, &[-1, 1]);
        let c2 = c.mul(&c).mul(&UniPolyF::from_i64s(&f, &[1, 1]));
        let mult = roots_in(&c2, &f).unwrap();
        let codes: Vec<u64> = mult.iter().map(|r| f.code(r)).collect();
        assert_eq!(codes, vec![1, 1, 2]);
        // mixed-extension coefficients are rejected
        let f27 = Field::new(3, 3).unwrap();
        let over9 = UniPolyF::from_coeffs(&f9, vec![f9.from_code(5), f9.one()]);
        assert!(roots_in(&over9, &f27).is_err());
    }

    #[test]
    fn roots_found_by_scan_match_structure() {
        // X^q - X over F_27 splits completely: 27 roots
        let f27 = Field::new(3, 3).unwrap();
        let f = f3();
        // build X^3 - X + 1, irreducible over F_3, split over F_27
        let a = UniPolyF::from_i64s(&f, &[1, -1, 0, 1]);
        let roots = roots_in(&a, &f27).unwrap();
        assert_eq!(roots.len(), 3);
        let lifted = a.lift(&f27).unwrap();
        for r in &roots {
            assert!(lifted.eval(r).is_zero());
        }
        // and no roots in F_9 (degree 3 does not divide 2)
        let f9 = Field::new(3, 2).unwrap();
        assert!(roots_in(&a, &f9).unwrap().is_empty());
    }

    #[test]
    fn radical_strips_multiplicity() {
        let f = f3();
        let lin1 = UniPolyF::from_i64s(&f, &[-1, 1]);
        let lin2 = UniPolyF::from_i64s(&f, &[1, 1]);
        let irr = UniPolyF::from_i64s(&f, &[1, 0, 1]);
        // (X-1)^3 (X+1)^2 (X^2+1)^6 → product of the three distinct factors
        let mut prod = UniPolyF::constant(&f, &f.one());
        for _ in 0..3 {
            prod = prod.mul(&lin1);
        }
        for _ in 0..2 {
            prod = prod.mul(&lin2);
        }
        for _ in 0..6 {
            prod = prod.mul(&irr);
        }
        let rad = prod.radical().unwrap();
        let want = lin1.mul(&lin2).mul(&irr).monic();
        assert_eq!(rad, want);
        // radical over an extension field with p-th powers
        let f9 = Field::new(3, 2).unwrap();
        let t = f9.from_code(3);
        let lin = UniPolyF::from_coeffs(&f9, vec![t.clone(), f9.one()]);
        let cubed = lin.mul(&lin).mul(&lin);
        assert_eq!(cubed.radical().unwrap(), lin);
    }

    #[test]
    fn factorization_over_f3() {
        let f = f3();
        // X^4 - 1 = (X-1)(X+1)(X^2+1) over F_3
        let a = UniPolyF::from_i64s(&f, &[-1, 0, 0, 0, 1]);
        let (lead, factors) = factor_prime_field(&a).unwrap();
        assert_eq!(lead, f.one());
        assert_eq!(factors.len(), 3);
        let mut recomposed = UniPolyF::constant(&f, &lead);
        for (fac, m) in &factors {
            assert!(*m >= 1);
            for _ in 0..*m {
                recomposed = recomposed.mul(fac);
            }
        }
        assert_eq!(recomposed, a);
        let degs: Vec<usize> = factors.iter().map(|(fac, _)| fac.deg().unwrap()).collect();
        assert_eq!(degs, vec![1, 1, 2]);
        // multiplicities: 2·(X-1)^2·(X^2+X+2)
        let sq = UniPolyF::from_i64s(&f, &[-1, 1]);
        let b = sq
            .mul(&sq)
            .mul(&UniPolyF::from_i64s(&f, &[2, 1, 1]))
            .mul_elem(&f.from_u64(2));
        let (lead, factors) = factor_prime_field(&b).unwrap();
        assert_eq!(lead, f.from_u64(2));
        let mut recomposed = UniPolyF::constant(&f, &lead);
        for (fac, m) in &factors {
            for _ in 0..*m {
                recomposed = recomposed.mul(fac);
            }
        }
        assert_eq!(recomposed, b);
        let pattern: Vec<(usize, u32)> = factors
            .iter()
            .map(|(fac, m)| (fac.deg().unwrap(), *m))
            .collect();
        assert_eq!(pattern, vec![(1, 2), (2, 1)]);
    }

    #[test]
    fn factorization_is_deterministic() {
        let f = f3();
        // X^9 - X splits into all monic irreducibles of degree dividing 2
        let mut coeffs = vec![0i64; 10];
        coeffs[1] = -1;
        coeffs[9] = 1;
        let a = UniPolyF::from_i64s(&f, &coeffs);
        let first = factor_prime_field(&a).unwrap();
        let second = factor_prime_field(&a).unwrap();
        assert_eq!(first, second);
        assert_eq!(first.1.len(), 3 + 3); // three linears, three quadratics
    }

    #[test]
    fn bivariate_resultant_matches_direct_elimination() {
        let f = f3();
        let vars = ["x", "y"];
        // f = y^2 - x, g = y - x: Res_y = x^2 - x (common zeros at x=0,1)
        let a = parse_poly("y^2-x", &vars, &f).unwrap();
        let b = parse_poly("y-x", &vars, &f).unwrap();
        let r = bivar_resultant(&a, &b, 0, 1).unwrap();
        let expected = UniPolyF::from_i64s(&f, &[0, -1, 1]);
        assert!(
            r == expected || r == expected.neg(),
            "unexpected resultant {:?}",
            r
        );
        // degenerate degrees: g constant in y → power of g
        let c = parse_poly("x^2+1", &vars, &f).unwrap();
        let r2 = bivar_resultant(&a, &c, 0, 1).unwrap();
        let cc = UniPolyF::from_i64s(&f, &[1, 0, 1]);
        assert_eq!(r2, cc.mul(&cc));
        // common factor in y forces the zero polynomial
        let d = parse_poly("y^2-x", &vars, &f).unwrap();
        let e = parse_poly("y^4-x^2", &vars, &f).unwrap();
        assert!(bivar_resultant(&d, &e, 0, 1).unwrap().is_zero());
    }

    #[test]
    fn quotient_gcd_detects_common_roots() {
        let f = f3();
        let vars = ["x", "y"];
        // at x0 root of X^2+1: f = y^2 - x0^2... use f = y^2 + 1 = (y-x0)(y+x0)
        // and g = y - x: at x = x0 the two share the root y = x0
        let a = parse_poly("y^2+1", &vars, &f).unwrap();
        let b = parse_poly("y-x", &vars, &f).unwrap();
        let modulus = UniPolyF::from_i64s(&f, &[1, 0, 1]);
        let out = quotient_gcd_degree(&[&a, &b], 0, 1, &modulus).unwrap();
        assert_eq!(out, QuotientGcd::Degree(1));
        // no common root when the second poly is y - x - 1
        let c = parse_poly("y-x-1", &vars, &f).unwrap();
        let out = quotient_gcd_degree(&[&a, &c], 0, 1, &modulus).unwrap();
        assert_eq!(out, QuotientGcd::Degree(0));
        // a polynomial divisible by the modulus vanishes identically
        let d = parse_poly("x^2+1", &vars, &f).unwrap();
        let out = quotient_gcd_degree(&[&d], 0, 1, &modulus).unwrap();
        assert_eq!(out, QuotientGcd::AllZero);
    }

    #[test]
    fn pow_mod_agrees_with_naive() {
        let f = f3();
        let m = UniPolyF::from_i64s(&f, &[1, 2, 0, 1]);
        let base = UniPolyF::from_i64s(&f, &[1, 1]);
        let mut naive = UniPolyF::constant(&f, &f.one());
        for e in 0..20u32 {
            let fast = base.pow_mod(e as u128, &m).unwrap();
            assert_eq!(fast, naive.rem(&m).unwrap(), "exponent {e}");
            naive = naive.mul(&base);
        }
    }
}
