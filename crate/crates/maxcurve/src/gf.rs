//! Finite field arithmetic for F_{p^k} with odd prime p.
//!
//! A [`Field`] carries the characteristic, the extension degree and the
//! canonical modulus: the monic irreducible of degree k over F_p whose
//! coefficient list (constant term first) is smallest when read as a base-p
//! integer. Elements are coefficient vectors against the power basis of that
//! modulus, so every element has a stable integer code and enumeration order
//! is reproducible across runs and machines.

use std::fmt;
use thiserror::Error;

/// Errors from field construction and arithmetic.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not an odd prime")]
    BadCharacteristic(u64),
    #[error("extension degree {0} outside supported range 1..=32")]
    BadDegree(u32),
    #[error("field order {p}^{k} does not fit in 62 bits")]
    TooLarge { p: u64, k: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element has wrong length for this field")]
    WrongField,
}

/// An element of F_{p^k}: exactly k coefficients, each reduced mod p,
/// constant term first. Codes 0..p-1 are the prime subfield.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub Vec<u64>);

impl Elem {
    /// True if every coefficient is zero.
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

/// Context for F_{p^k}: characteristic, degree, canonical modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    p: u64,
    k: u32,
    /// Monic modulus of degree k; k+1 coefficients, constant first, leading 1.
    modulus: Vec<u64>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Multiply two coefficient vectors mod (modulus, p). Inputs need not be
/// reduced in degree; the output has length modulus.len()-1.
fn mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let k = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj != 0 {
                let cell = &mut prod[i + j];
                *cell = (*cell + ai * bj) % p;
            }
        }
    }
    // reduce by the monic modulus, highest degree first
    for d in (k..prod.len()).rev() {
        let c = prod[d];
        if c != 0 {
            prod[d] = 0;
            for j in 0..k {
                let cell = &mut prod[d - k + j];
                *cell = (*cell + (p - modulus[j]) % p * c) % p;
            }
        }
    }
    prod.truncate(k.max(1));
    prod.resize(k.max(1), 0);
    prod
}

/// x^(p^steps) mod (modulus, p), by repeated p-th powering.
fn frob_of_x(steps: u32, modulus: &[u64], p: u64) -> Vec<u64> {
    let k = modulus.len() - 1;
    let mut cur = vec![0u64; k];
    if k == 1 {
        // x reduces to -modulus[0]
        cur[0] = (p - modulus[0] % p) % p;
    } else {
        cur[1] = 1;
    }
    for _ in 0..steps {
        let mut acc = vec![0u64; k];
        acc[0] = 1;
        let mut base = cur.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &base, modulus, p);
            }
            base = mul_mod(&base, &base, modulus, p);
            e >>= 1;
        }
        cur = acc;
    }
    cur
}

fn vec_deg(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

/// Gcd of coefficient vectors over F_p, monic result (or empty for gcd of zeros).
fn vec_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    loop {
        let db = match vec_deg(&b) {
            Some(d) => d,
            None => {
                if let Some(da) = vec_deg(&a) {
                    let inv = pow_mod_u64(a[da], p - 2, p);
                    for c in a.iter_mut() {
                        *c = *c * inv % p;
                    }
                }
                return a;
            }
        };
        while let Some(da) = vec_deg(&a) {
            if da < db {
                break;
            }
            let inv = pow_mod_u64(b[db], p - 2, p);
            let c = a[da] * inv % p;
            let shift = da - db;
            for j in 0..=db {
                a[shift + j] = (a[shift + j] + (p - b[j] % p) % p * c) % p;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
}

fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Rabin irreducibility test for a monic polynomial over F_p.
fn is_irreducible(modulus: &[u64], p: u64) -> bool {
    let k = (modulus.len() - 1) as u32;
    if k == 1 {
        return true;
    }
    // x^(p^k) must equal x mod f
    let mut x = vec![0u64; k as usize];
    x[1] = 1;
    if frob_of_x(k, modulus, p) != x {
        return false;
    }
    // for each prime l | k: gcd(x^(p^(k/l)) - x, f) must be constant
    let mut rem = k;
    let mut l = 2;
    while l <= rem {
        if rem % l == 0 {
            let g = frob_of_x(k / l, modulus, p);
            let mut diff: Vec<u64> = g
                .iter()
                .zip(x.iter())
                .map(|(&a, &b)| (a + p - b) % p)
                .collect();
            diff.resize(modulus.len(), 0);
            let gcd = vec_gcd(modulus.to_vec(), diff, p);
            if vec_deg(&gcd) != Some(0) {
                return false;
            }
            while rem % l == 0 {
                rem /= l;
            }
        }
        l += 1;
    }
    true
}

impl Field {
    /// Build F_{p^k} with the canonical modulus (smallest base-p coefficient
    /// code among monic irreducibles of degree k).
    pub fn new(p: u64, k: u32) -> Result<Field, FieldError> {
        if p < 3 || p % 2 == 0 || !is_prime(p) {
            return Err(FieldError::BadCharacteristic(p));
        }
        if k == 0 || k > 32 {
            return Err(FieldError::BadDegree(k));
        }
        let mut q: u64 = 1;
        for _ in 0..k {
            q = q.checked_mul(p).ok_or(FieldError::TooLarge { p, k })?;
            if q >= 1 << 62 {
                return Err(FieldError::TooLarge { p, k });
            }
        }
        if k == 1 {
            return Ok(Field {
                p,
                k,
                modulus: vec![0, 1],
            });
        }
        let mut code: u64 = 0;
        loop {
            let mut modulus = Vec::with_capacity(k as usize + 1);
            let mut t = code;
            for _ in 0..k {
                modulus.push(t % p);
                t /= p;
            }
            modulus.push(1);
            if is_irreducible(&modulus, p) {
                return Ok(Field { p, k, modulus });
            }
            code += 1;
        }
    }

    /// Characteristic p.
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Extension degree k.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// Field order q = p^k.
    pub fn q(&self) -> u64 {
        self.p.pow(self.k)
    }

    /// The modulus coefficients, constant first, length k+1, leading 1.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    fn check(&self, a: &Elem) -> Result<(), FieldError> {
        if a.0.len() == self.k as usize && a.0.iter().all(|&c| c < self.p) {
            Ok(())
        } else {
            Err(FieldError::WrongField)
        }
    }

    /// Additive identity.
    pub fn zero(&self) -> Elem {
        Elem(vec![0; self.k as usize])
    }

    /// Multiplicative identity.
    pub fn one(&self) -> Elem {
        self.from_u64(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_u64(&self, n: u64) -> Elem {
        let mut v = vec![0; self.k as usize];
        v[0] = n % self.p;
        Elem(v)
    }

    /// Image of a signed integer in the prime subfield.
    pub fn from_i64(&self, n: i64) -> Elem {
        let r = n.rem_euclid(self.p as i64) as u64;
        self.from_u64(r)
    }

    /// Element with the given integer code (base-p digits, constant first).
    pub fn from_code(&self, mut code: u64) -> Elem {
        let mut v = Vec::with_capacity(self.k as usize);
        for _ in 0..self.k {
            v.push(code % self.p);
            code /= self.p;
        }
        Elem(v)
    }

    /// Integer code of an element.
    pub fn code(&self, a: &Elem) -> u64 {
        let mut c = 0u64;
        for &d in a.0.iter().rev() {
            c = c * self.p + d;
        }
        c
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        Elem(
            a.0.iter()
                .zip(b.0.iter())
                .map(|(&x, &y)| (x + y) % self.p)
                .collect(),
        )
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        Elem(
            a.0.iter()
                .zip(b.0.iter())
                .map(|(&x, &y)| (x + self.p - y) % self.p)
                .collect(),
        )
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        Elem(a.0.iter().map(|&x| (self.p - x) % self.p).collect())
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        Elem(mul_mod(&a.0, &b.0, &self.modulus, self.p))
    }

    /// Scale by an integer from the prime subfield.
    pub fn scale(&self, a: &Elem, c: u64) -> Elem {
        let c = c % self.p;
        Elem(a.0.iter().map(|&x| x * c % self.p).collect())
    }

    /// a^e for a u64 exponent.
    pub fn pow(&self, a: &Elem, mut e: u64) -> Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; division by zero is a hard error.
    pub fn inv(&self, a: &Elem) -> Result<Elem, FieldError> {
        self.check(a)?;
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(a, self.q() - 2))
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// j-fold Frobenius a^(p^j).
    pub fn frobenius(&self, a: &Elem, j: u32) -> Elem {
        let mut out = a.clone();
        for _ in 0..j {
            out = self.pow(&out, self.p);
        }
        out
    }

    /// Legendre-style square test: 0 for zero, 1 for nonzero squares,
    /// -1 for nonsquares.
    pub fn square_class(&self, a: &Elem) -> i32 {
        if a.is_zero() {
            return 0;
        }
        let e = (self.q() - 1) / 2;
        if self.pow(a, e) == self.one() {
            1
        } else {
            -1
        }
    }

    /// A square root of `a`, if one exists. Of the two roots of a nonzero
    /// square, returns the one with the smaller code.
    pub fn sqrt(&self, a: &Elem) -> Option<Elem> {
        if a.is_zero() {
            return Some(self.zero());
        }
        if self.square_class(a) != 1 {
            return None;
        }
        let q = self.q();
        let r = if q % 4 == 3 {
            self.pow(a, (q + 1) / 4)
        } else {
            self.tonelli_shanks(a)
        };
        debug_assert_eq!(self.mul(&r, &r), *a);
        let r2 = self.neg(&r);
        if self.code(&r) <= self.code(&r2) {
            Some(r)
        } else {
            Some(r2)
        }
    }

    fn tonelli_shanks(&self, a: &Elem) -> Elem {
        let q = self.q();
        let mut m = q - 1;
        let mut e = 0u32;
        while m % 2 == 0 {
            m /= 2;
            e += 1;
        }
        // first nonsquare in code order
        let z = (1..q)
            .map(|c| self.from_code(c))
            .find(|x| self.square_class(x) == -1)
            .expect("odd field has a nonsquare");
        let mut c = self.pow(&z, m);
        let mut t = self.pow(a, m);
        let mut r = self.pow(a, (m + 1) / 2);
        let mut e_cur = e;
        while t != self.one() {
            let mut i = 0u32;
            let mut t2 = t.clone();
            while t2 != self.one() {
                t2 = self.mul(&t2, &t2);
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(e_cur - i - 1) {
                b = self.mul(&b, &b);
            }
            r = self.mul(&r, &b);
            c = self.mul(&b, &b);
            t = self.mul(&t, &c);
            e_cur = i;
        }
        r
    }

    /// All field elements in code order.
    pub fn elems(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.q()).map(move |c| self.from_code(c))
    }

    /// Canonical representatives of P^n(F_q): first nonzero coordinate 1,
    /// charts in order (x_0 = 1 first, then x_0 = 0 and x_1 = 1, ...).
    /// Within a chart the free coordinates run in code order, last
    /// coordinate fastest.
    pub fn proj_points(&self, n: usize) -> ProjPoints<'_> {
        ProjPoints {
            field: self,
            n,
            lead: 0,
            suffix: vec![0; n],
            done: false,
        }
    }

    /// Number of points of P^n(F_q).
    pub fn proj_count(&self, n: usize) -> u64 {
        let q = self.q();
        let mut total = 0u64;
        let mut pw = 1u64;
        for _ in 0..=n {
            total += pw;
            pw *= q;
        }
        total
    }

    /// Scale a coordinate vector so its first nonzero entry is 1.
    /// Returns None for the zero vector.
    pub fn normalize_point(&self, pt: &[Elem]) -> Option<Vec<Elem>> {
        let lead = pt.iter().position(|c| !c.is_zero())?;
        let inv = self.inv(&pt[lead]).expect("nonzero leading coordinate");
        Some(pt.iter().map(|c| self.mul(c, &inv)).collect())
    }

    /// Render an element as a polynomial in t.
    pub fn render(&self, a: &Elem) -> String {
        let mut parts = Vec::new();
        for (i, &c) in a.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let part = match (i, c) {
                (0, _) => format!("{c}"),
                (1, 1) => "t".to_string(),
                (1, _) => format!("{c}t"),
                (_, 1) => format!("t^{i}"),
                (_, _) => format!("{c}t^{i}"),
            };
            parts.push(part);
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }
}

/// Iterator over canonical projective representatives; see [`Field::proj_points`].
pub struct ProjPoints<'a> {
    field: &'a Field,
    n: usize,
    lead: usize,
    suffix: Vec<u64>,
    done: bool,
}

impl Iterator for ProjPoints<'_> {
    type Item = Vec<Elem>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let f = self.field;
        let mut pt = Vec::with_capacity(self.n + 1);
        for _ in 0..self.lead {
            pt.push(f.zero());
        }
        pt.push(f.one());
        let free = self.n - self.lead;
        for i in 0..free {
            pt.push(f.from_code(self.suffix[i]));
        }
        // advance odometer, last coordinate fastest
        let q = f.q();
        let mut i = free;
        loop {
            if i == 0 {
                self.lead += 1;
                self.suffix.iter_mut().for_each(|c| *c = 0);
                if self.lead > self.n {
                    self.done = true;
                }
                break;
            }
            i -= 1;
            self.suffix[i] += 1;
            if self.suffix[i] < q {
                break;
            }
            self.suffix[i] = 0;
        }
        Some(pt)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Table-backed arithmetic on element codes for fields with at most
/// [`SmallField::MAX_ORDER`] elements. Used by enumeration-heavy counting.
pub struct SmallField {
    q: usize,
    p: u64,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    /// Code of a square root, or u16::MAX when none exists.
    sqrt: Vec<u16>,
}

impl SmallField {
    /// Largest field order accepted (3^7 = 2187 fits; tables are q^2 entries).
    pub const MAX_ORDER: u64 = 2200;

    const NO_SQRT: u16 = u16::MAX;

    /// Build lookup tables from a field context.
    pub fn build(field: &Field) -> Option<SmallField> {
        let q64 = field.q();
        if q64 > Self::MAX_ORDER {
            return None;
        }
        let q = q64 as usize;
        let elems: Vec<Elem> = field.elems().collect();
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            for b in a..q {
                let s = field.code(&field.add(&elems[a], &elems[b])) as u16;
                let m = field.code(&field.mul(&elems[a], &elems[b])) as u16;
                add[a * q + b] = s;
                add[b * q + a] = s;
                mul[a * q + b] = m;
                mul[b * q + a] = m;
            }
        }
        let neg: Vec<u16> = (0..q)
            .map(|a| field.code(&field.neg(&elems[a])) as u16)
            .collect();
        let mut inv = vec![0u16; q];
        for a in 1..q {
            inv[a] = field.code(&field.inv(&elems[a]).expect("nonzero")) as u16;
        }
        let mut sqrt = vec![Self::NO_SQRT; q];
        for a in 0..q {
            if let Some(r) = field.sqrt(&elems[a]) {
                sqrt[a] = field.code(&r) as u16;
            }
        }
        Some(SmallField {
            q,
            p: field.p(),
            add,
            mul,
            neg,
            inv,
            sqrt,
        })
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }

    /// Inverse of a nonzero code; code 0 maps to 0 and must be guarded by
    /// the caller.
    #[inline]
    pub fn inv(&self, a: u16) -> u16 {
        self.inv[a as usize]
    }

    /// One square root, or None.
    #[inline]
    pub fn sqrt(&self, a: u16) -> Option<u16> {
        let r = self.sqrt[a as usize];
        if r == Self::NO_SQRT {
            None
        } else {
            Some(r)
        }
    }
}
