//! Integer-side Weil machinery: L-polynomials from point counts and back,
//! bounded Weil factorization, characteristic polynomials of Frobenius
//! powers, real Weil polynomials, and supersingularity tests.
//!
//! Convention throughout: P(T) = Π(T − α_i), monic of degree 2g with
//! P(0) = q^g, and N_k = q^k + 1 − Σ α_i^k. Every division is exact or a
//! hard error — no rounding anywhere.

use crate::poly::int::{int_resultant, IntPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, thiserror::Error)]
pub enum ZetaError {
    #[error("expected {expected} counts, got {got}")]
    WrongCountLength { expected: usize, got: usize },
    #[error("count N_{k} = {n} lies outside the Weil interval [{lo}, {hi}]")]
    CountOutOfInterval { k: u32, n: u64, lo: u64, hi: u64 },
    #[error("Newton's identities demand a non-integral coefficient at k = {k}")]
    NonIntegral { k: u32 },
    #[error("polynomial violates the L-polynomial invariants: {0}")]
    BadLPolynomial(String),
    #[error("input is not a Weil polynomial: {0}")]
    NotWeil(String),
    #[error("expected a degree-2 factor, got degree {0}")]
    WrongDegree(usize),
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

/// The numerator of a zeta function: monic integer polynomial of degree
/// 2g with P(0) = q^g satisfying the functional equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LPolynomial {
    poly: IntPoly,
    q: u64,
    g: u32,
}

impl LPolynomial {
    pub fn new(poly: IntPoly, q: u64, g: u32) -> Result<LPolynomial, ZetaError> {
        if q < 2 {
            return Err(ZetaError::BadLPolynomial("q must be at least 2".into()));
        }
        let deg = poly.deg().unwrap_or(0);
        if deg != 2 * g as usize {
            return Err(ZetaError::BadLPolynomial(format!(
                "degree {deg} does not equal 2g = {}",
                2 * g
            )));
        }
        if !poly.is_monic() {
            return Err(ZetaError::BadLPolynomial("not monic".into()));
        }
        let qg = BigInt::from(q).pow(g);
        if poly.coeff(0) != qg {
            return Err(ZetaError::BadLPolynomial(format!(
                "constant term {} is not q^g = {qg}",
                poly.coeff(0)
            )));
        }
        // functional equation: c_j = q^{g-j} · c_{2g-j} for j < g
        for j in 0..g as usize {
            let scale = BigInt::from(q).pow(g - j as u32);
            if poly.coeff(j) != scale * poly.coeff(2 * g as usize - j) {
                return Err(ZetaError::BadLPolynomial(format!(
                    "functional equation fails at coefficient {j}"
                )));
            }
        }
        Ok(LPolynomial { poly, q, g })
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn genus(&self) -> u32 {
        self.g
    }
}

/// Integer square root (floor).
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u64 + 2;
    while (x as u128) * (x as u128) > n as u128 {
        x -= 1;
    }
    x
}

/// The Weil interval for point counts of a genus-g curve over F_q:
/// [max(0, q+1−⌊2g√q⌋), q+1+⌊2g√q⌋], exactly.
pub fn weil_interval(q: u64, g: u32) -> (u64, u64) {
    let spread = isqrt(4 * (g as u64) * (g as u64) * q);
    let hi = q + 1 + spread;
    let lo = (q + 1).saturating_sub(spread);
    (lo, hi)
}

/// Power sums p_k = q^k + 1 − N_k for the given counts.
fn power_sums_from_counts(counts: &[u64], q: u64) -> Vec<BigInt> {
    counts
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let k = i as u32 + 1;
            BigInt::from(q).pow(k) + 1 - BigInt::from(n)
        })
        .collect()
}

/// Build the L-polynomial of a genus-g curve over F_q from its point
/// counts N_1..N_g via Newton's identities and the functional equation.
pub fn lpoly_from_counts(counts: &[u64], q: u64, g: u32) -> Result<LPolynomial, ZetaError> {
    if counts.len() != g as usize {
        return Err(ZetaError::WrongCountLength {
            expected: g as usize,
            got: counts.len(),
        });
    }
    for (i, &n) in counts.iter().enumerate() {
        let k = i as u32 + 1;
        let qk = q.pow(k);
        let (lo, hi) = weil_interval(qk, g);
        if n < lo || n > hi {
            return Err(ZetaError::CountOutOfInterval { k, n, lo, hi });
        }
    }
    if g == 0 {
        return LPolynomial::new(IntPoly::from_i64s(&[1]), q, 0);
    }
    let p = power_sums_from_counts(counts, q);
    // Newton: p_k − e_1·p_{k−1} + … + (−1)^{k−1} e_{k−1}·p_1 + (−1)^k·k·e_k = 0
    let mut e: Vec<BigInt> = vec![BigInt::one()]; // e_0
    for k in 1..=g as usize {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            let term = &e[k - i] * &p[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let (quot, rem) = acc.div_rem(&BigInt::from(k as i64));
        if !rem.is_zero() {
            return Err(ZetaError::NonIntegral { k: k as u32 });
        }
        e.push(quot);
    }
    // top half: c_{2g−j} = (−1)^j e_j; bottom half by the functional equation
    let d = 2 * g as usize;
    let mut coeffs = vec![BigInt::zero(); d + 1];
    for (j, ej) in e.iter().enumerate() {
        let signed = if j % 2 == 0 { ej.clone() } else { -ej.clone() };
        coeffs[d - j] = signed;
    }
    for j in 0..g as usize {
        coeffs[j] = BigInt::from(q).pow(g - j as u32) * &coeffs[d - j];
    }
    LPolynomial::new(IntPoly::from_big(coeffs), q, g)
}

/// Power sums p_1..p_m of the roots of a monic integer polynomial, via the
/// Newton recurrence (exact).
fn power_sums_of_poly(poly: &IntPoly, m: usize) -> Vec<BigInt> {
    let d = poly.deg().unwrap_or(0);
    // write poly = T^d + a_1 T^{d−1} + … + a_d
    let a = |i: usize| -> BigInt {
        if i == 0 {
            BigInt::one()
        } else if i <= d {
            poly.coeff(d - i)
        } else {
            BigInt::zero()
        }
    };
    let mut p: Vec<BigInt> = Vec::with_capacity(m);
    for n in 1..=m {
        let mut acc = if n <= d {
            -BigInt::from(n as i64) * a(n)
        } else {
            BigInt::zero()
        };
        for i in 1..n.min(d + 1) {
            acc -= a(i) * &p[n - i - 1];
        }
        p.push(acc);
    }
    p
}

/// N_k = q^k + 1 − p_k, where p_k is the k-th power sum of the roots.
pub fn counts_from_lpoly(l: &LPolynomial, k: u32) -> BigInt {
    assert!(k >= 1, "extension degree must be positive");
    if l.g == 0 {
        return BigInt::from(l.q).pow(k) + 1;
    }
    let p = power_sums_of_poly(&l.poly, k as usize);
    BigInt::from(l.q).pow(k) + 1 - &p[k as usize - 1]
}

/// Monic polynomial whose roots are the m-th powers of the roots of L.
pub fn frobenius_power_charpoly(l: &LPolynomial, m: u32) -> Result<IntPoly, ZetaError> {
    assert!(m >= 1, "power must be positive");
    let d = 2 * l.g as usize;
    if d == 0 {
        return Ok(IntPoly::from_i64s(&[1]));
    }
    let p_all = power_sums_of_poly(&l.poly, d * m as usize);
    let p: Vec<BigInt> = (1..=d).map(|j| p_all[j * m as usize - 1].clone()).collect();
    // Newton's identities build e_1..e_d of the powered roots
    let mut e: Vec<BigInt> = vec![BigInt::one()];
    for k in 1..=d {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            let term = &e[k - i] * &p[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let (quot, rem) = acc.div_rem(&BigInt::from(k as i64));
        if !rem.is_zero() {
            return Err(ZetaError::NonIntegral { k: k as u32 });
        }
        e.push(quot);
    }
    let mut coeffs = vec![BigInt::zero(); d + 1];
    for (j, ej) in e.iter().enumerate() {
        coeffs[d - j] = if j % 2 == 0 { ej.clone() } else { -ej.clone() };
    }
    Ok(IntPoly::from_big(coeffs))
}

/// Check that the roots of the monic quadratic t² + u·t + v are real and
/// lie in [−2√q, 2√q], by exact integer arithmetic.
fn quadratic_real_roots_in_weil_band(u: &BigInt, v: &BigInt, q: u64) -> bool {
    let disc: BigInt = u * u - 4 * v;
    if disc.is_negative() {
        return false;
    }
    // max |root|² ≤ 4q  ⟺  u² + D + 2|u|√D ≤ 16q
    let bound = BigInt::from(16 * q as i64);
    let r = &bound - u * u - &disc;
    if r.is_negative() {
        return false;
    }
    4 * u * u * &disc <= &r * &r
}

/// Is the monic polynomial a Weil polynomial for q (all roots of modulus
/// √q)? Implemented exactly for degrees 0, 1, 2 and 4.
fn is_weil_poly(f: &IntPoly, q: u64) -> Result<bool, ZetaError> {
    let qi = BigInt::from(q);
    match f.deg() {
        None => Ok(false),
        Some(0) => Ok(true),
        Some(1) => {
            // T + c: root −c with c² = q
            let c = f.coeff(0);
            Ok(&c * &c == qi)
        }
        Some(2) => {
            // T² + aT + q with a² ≤ 4q
            if f.coeff(0) != qi {
                return Ok(false);
            }
            let a = f.coeff(1);
            Ok(&a * &a <= 4 * qi)
        }
        Some(4) => {
            // (T²+sT+q)(T²+s′T+q) with s, s′ real in [−2√q, 2√q]:
            // c3 = q·c1, c4 = q², and t² − c1·t + (c2−2q) real-rooted in band
            if f.coeff(0) != &qi * &qi || f.coeff(1) != &qi * f.coeff(3) {
                return Ok(false);
            }
            let u = -f.coeff(3);
            let v = f.coeff(2) - 2 * &qi;
            Ok(quadratic_real_roots_in_weil_band(&u, &v, q))
        }
        Some(d) => Err(ZetaError::Unsupported(format!(
            "Weil test implemented for degrees ≤ 4, got {d}"
        ))),
    }
}

/// One factor of an L-polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsogenyFactor {
    pub factor: IntPoly,
    pub multiplicity: u32,
}

/// Outcome of the bounded Weil factorization.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub factors: Vec<IsogenyFactor>,
    /// Set when the bounded search could not finish the job.
    pub remainder: Option<IntPoly>,
    pub diagnostic: Option<String>,
}

impl Factorization {
    pub fn complete(&self) -> bool {
        self.remainder.is_none()
    }

    /// Product of the found factors (with multiplicity) times the
    /// remainder, for audit.
    pub fn reassemble(&self) -> IntPoly {
        let mut acc = IntPoly::from_i64s(&[1]);
        for f in &self.factors {
            for _ in 0..f.multiplicity {
                acc = acc.mul(&f.factor);
            }
        }
        if let Some(r) = &self.remainder {
            acc = acc.mul(r);
        }
        acc
    }
}

/// Factor an L-polynomial into monic integer Weil polynomials by bounded
/// exhaustive search: quadratics T²+aT+q with |a| ≤ ⌊2√q⌋ first, then
/// Weil quartics, by repeated trial division.
pub fn weil_factorization(l: &LPolynomial) -> Factorization {
    let q = l.q;
    let mut remaining = l.poly.clone();
    let mut factors: Vec<IsogenyFactor> = Vec::new();
    let amax = isqrt(4 * q) as i64;

    let mut push_factor = |rem: &mut IntPoly, cand: IntPoly| {
        let mut mult = 0u32;
        while let Some(quo) = rem.divide_exact(&cand) {
            mult += 1;
            *rem = quo;
        }
        if mult > 0 {
            factors.push(IsogenyFactor {
                factor: cand,
                multiplicity: mult,
            });
        }
    };

    for a in -amax..=amax {
        let cand = IntPoly::from_big(vec![BigInt::from(q), BigInt::from(a), BigInt::one()]);
        push_factor(&mut remaining, cand);
        if remaining.deg() == Some(0) {
            break;
        }
    }
    if remaining.deg().unwrap_or(0) >= 4 {
        let c1max = isqrt(16 * q) as i64;
        'outer: for c1 in -c1max..=c1max {
            // c2 = 2q + s·s′ with |s·s′| ≤ 4q
            for c2 in -(4 * q as i64) + 2 * q as i64..=(4 * q as i64) + 2 * q as i64 {
                let cand = IntPoly::from_big(vec![
                    BigInt::from(q) * BigInt::from(q),
                    BigInt::from(q) * BigInt::from(c1),
                    BigInt::from(c2),
                    BigInt::from(c1),
                    BigInt::one(),
                ]);
                if !is_weil_poly(&cand, q).unwrap_or(false) {
                    continue;
                }
                push_factor(&mut remaining, cand);
                if remaining.deg().unwrap_or(0) < 4 {
                    break 'outer;
                }
            }
        }
    }
    factors.sort_by(|x, y| {
        x.factor
            .deg()
            .cmp(&y.factor.deg())
            .then_with(|| x.factor.descending().cmp(&y.factor.descending()))
    });
    if remaining.deg() == Some(0) && remaining.coeff(0).is_one() {
        Factorization {
            factors,
            remainder: None,
            diagnostic: None,
        }
    } else {
        Factorization {
            factors,
            remainder: Some(remaining.clone()),
            diagnostic: Some(format!(
                "bounded search left an unfactored part of degree {}",
                remaining.deg().unwrap_or(0)
            )),
        }
    }
}

/// The real Weil polynomial of an even-degree Weil polynomial: the monic
/// degree-d polynomial W with f(T) = T^d · W(T + q/T). Errors when no such
/// W with real roots in [−2√q, 2√q] exists.
pub fn real_weil(factor: &IntPoly, q: u64) -> Result<IntPoly, ZetaError> {
    let deg = factor.deg().ok_or_else(|| {
        ZetaError::NotWeil("zero polynomial".into())
    })?;
    if deg % 2 != 0 || deg == 0 {
        return Err(ZetaError::NotWeil(format!(
            "degree {deg} is not a positive even number"
        )));
    }
    if !factor.is_monic() {
        return Err(ZetaError::NotWeil("not monic".into()));
    }
    let d = deg / 2;
    // T^d·(T + q/T)^j = Σ_i C(j,i)·q^i·T^{d+j−2i}; solve triangularly for
    // the coefficients b_j of W from the top of f downwards.
    let qi = BigInt::from(q);
    let mut b = vec![BigInt::zero(); d + 1];
    b[d] = BigInt::one();
    for j in (0..d).rev() {
        // coefficient of T^{d+j} in f minus contributions of b_{j+2}, b_{j+4}, …
        let mut acc = factor.coeff(d + j);
        let mut jj = j + 2;
        while jj <= d {
            let i = (jj - j) / 2;
            acc -= binomial(jj, i) * qi.pow(i as u32) * &b[jj];
            jj += 2;
        }
        b[j] = acc;
    }
    let w = IntPoly::from_big(b);
    // audit: resubstitute and compare every coefficient
    let mut rebuilt = IntPoly::zero();
    for (j, bj) in w.coeffs().iter().enumerate() {
        // b_j · T^{d−j} · (T² + q)^j  equals  b_j·T^d·(T+q/T)^j
        let tq = IntPoly::from_big(vec![qi.clone(), BigInt::zero(), BigInt::one()]);
        let mut term = tq.pow(j as u32).scale(bj);
        term = term.mul(&monomial(d - j));
        rebuilt = rebuilt.add(&term);
    }
    if rebuilt != *factor {
        return Err(ZetaError::NotWeil(
            "polynomial is not of the form T^d·W(T + q/T)".into(),
        ));
    }
    // real-rootedness in the Weil band, exact for d ≤ 2
    match d {
        1 => {
            let c = w.coeff(0);
            if &c * &c > BigInt::from(4 * q as i64) {
                return Err(ZetaError::NotWeil(format!(
                    "real trace {c} exceeds the Weil bound"
                )));
            }
        }
        2 => {
            if !quadratic_real_roots_in_weil_band(&w.coeff(1), &w.coeff(0), q) {
                return Err(ZetaError::NotWeil(
                    "real quadratic has roots outside the Weil band".into(),
                ));
            }
        }
        _ => {
            return Err(ZetaError::Unsupported(format!(
                "real-rootedness check implemented for half-degree ≤ 2, got {d}"
            )))
        }
    }
    Ok(w)
}

fn monomial(e: usize) -> IntPoly {
    let mut coeffs = vec![BigInt::zero(); e + 1];
    coeffs[e] = BigInt::one();
    IntPoly::from_big(coeffs)
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from((n - i) as i64) / BigInt::from((i + 1) as i64);
    }
    acc
}

/// Resultant of the real Weil polynomials of two factor groups; a nonzero
/// value bounds the degree of a connecting isogeny-compatible cover. Zero
/// means the bound is vacuous (shared real factor).
pub fn cover_degree_bound(
    part: &IntPoly,
    complement: &IntPoly,
    q: u64,
) -> Result<BigInt, ZetaError> {
    let a = real_weil_of_product(part, q)?;
    let b = real_weil_of_product(complement, q)?;
    Ok(int_resultant(&a, &b).unwrap_or_else(BigInt::zero))
}

/// Real Weil polynomial of a product of Weil factors: factor with the
/// bounded search, apply real_weil to each piece, multiply.
fn real_weil_of_product(f: &IntPoly, q: u64) -> Result<IntPoly, ZetaError> {
    let deg = f.deg().unwrap_or(0);
    if deg <= 4 && deg % 2 == 0 && deg > 0 {
        if let Ok(w) = real_weil(f, q) {
            return Ok(w);
        }
    }
    // split into bounded factors first
    let g = (deg / 2) as u32;
    let l = LPolynomial::new(f.clone(), q, g)
        .map_err(|e| ZetaError::NotWeil(format!("not an L-polynomial: {e}")))?;
    let fact = weil_factorization(&l);
    if !fact.complete() {
        return Err(ZetaError::NotWeil(
            "could not split the product into Weil factors".into(),
        ));
    }
    let mut acc = IntPoly::from_i64s(&[1]);
    for piece in &fact.factors {
        let w = real_weil(&piece.factor, q)?;
        for _ in 0..piece.multiplicity {
            acc = acc.mul(&w);
        }
    }
    Ok(acc)
}

/// An elliptic (degree-2) Weil factor T² + aT + q is supersingular over
/// F_q, q = p^m with p odd, exactly when p divides a.
pub fn is_supersingular(factor: &IntPoly, q: u64, p: u64) -> Result<bool, ZetaError> {
    if p < 3 {
        return Err(ZetaError::Unsupported(
            "supersingularity test implemented for odd characteristic".into(),
        ));
    }
    if factor.deg() != Some(2) {
        return Err(ZetaError::WrongDegree(factor.deg().unwrap_or(0)));
    }
    if !factor.is_monic() || factor.coeff(0) != BigInt::from(q) {
        return Err(ZetaError::NotWeil(
            "expected monic T² + aT + q".into(),
        ));
    }
    let a = factor.coeff(1);
    Ok((a % BigInt::from(p)).is_zero())
}

/// Exact divisibility over Z.
pub fn divides(sub: &IntPoly, whole: &IntPoly) -> bool {
    if sub.is_zero() {
        return whole.is_zero();
    }
    whole.divide_exact(sub).is_some()
}

/// Convert a count to u64, for callers that know it is small.
pub fn count_to_u64(n: &BigInt) -> Option<u64> {
    n.to_u64()
}
