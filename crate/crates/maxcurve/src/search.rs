//! Exhaustive scan of plane sextics over F_3 through a prescribed set of
//! rational base points.
//!
//! The scan enumerates every projective candidate in the linear system of
//! sextics vanishing at the base points (for the 13 points of P²(F_3)
//! that system has dimension 15, giving (3¹⁵ − 1)/2 = 7 174 453
//! candidates up to scalar), screens each candidate with cheap
//! necessary-condition filters, and reports the survivors. Screening
//! never certifies genus; any shortlist member still needs downstream
//! confirmation by the counting and zeta machinery.

use std::io::Write as _;
use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::counting::{CountError, DoublePointClass};
use crate::gf::{Elem, Field, FieldError};
use crate::poly::{MultiPoly, PolyError};

#[derive(Debug, thiserror::Error)]
pub enum SearchError {
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("checkpoint rejected: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Number of degree-6 monomials in three variables.
pub const SEXTIC_MONOMIAL_COUNT: usize = 28;

/// Degree-6 exponent triples in a fixed order: e₀ descending, then e₁
/// descending. Every coefficient vector in this module uses this order.
fn sextic_monomials() -> Vec<[u32; 3]> {
    let mut out = Vec::with_capacity(SEXTIC_MONOMIAL_COUNT);
    for e0 in (0..=6u32).rev() {
        for e1 in (0..=6 - e0).rev() {
            out.push([e0, e1, 6 - e0 - e1]);
        }
    }
    out
}

// --- small exact linear algebra over F_3 on u8 codes ---

fn add3(a: u8, b: u8) -> u8 {
    let s = a + b;
    if s > 2 {
        s - 3
    } else {
        s
    }
}

fn mul3(a: u8, b: u8) -> u8 {
    (a * b) % 3
}

fn neg3(a: u8) -> u8 {
    (3 - a) % 3
}

/// Reduced row echelon form in place; returns pivot column per row.
fn rref3(rows: &mut Vec<Vec<u8>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..ncols {
        if let Some(sel) = (r..rows.len()).find(|&i| rows[i][c] != 0) {
            rows.swap(r, sel);
            if rows[r][c] == 2 {
                for x in rows[r].iter_mut() {
                    *x = mul3(*x, 2);
                }
            }
            for i in 0..rows.len() {
                if i != r && rows[i][c] != 0 {
                    let f = rows[i][c];
                    for j in 0..ncols {
                        let t = mul3(f, rows[r][j]);
                        rows[i][j] = add3(rows[i][j], neg3(t));
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
    }
    pivots
}

/// Nullspace basis of the row space, one vector per free column, in
/// ascending free-column order.
fn nullspace3(mut rows: Vec<Vec<u8>>, ncols: usize) -> Vec<Vec<u8>> {
    let pivots = rref3(&mut rows, ncols);
    let mut pivot_of_col = vec![None; ncols];
    for (r, &c) in pivots.iter().enumerate() {
        pivot_of_col[c] = Some(r);
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| pivot_of_col[*c].is_none()) {
        let mut v = vec![0u8; ncols];
        v[free] = 1;
        for c in 0..ncols {
            if let Some(r) = pivot_of_col[c] {
                v[c] = neg3(rows[r][free]);
            }
        }
        basis.push(v);
    }
    basis
}

/// Basis of the space of plane sextics over F_3 vanishing at a set of
/// points, as coefficient vectors over the fixed monomial order.
pub struct SexticBasis {
    field: Field,
    points: Vec<[Elem; 3]>,
    monomials: Vec<[u32; 3]>,
    vectors: Vec<Vec<u8>>,
}

/// Kernel of the evaluation matrix of the 28 degree-6 monomials at the
/// given points, by exact elimination over F_3.
pub fn sextic_space(field: &Field, points: &[[Elem; 3]]) -> Result<SexticBasis, SearchError> {
    if field.p() != 3 || field.k() != 1 {
        return Err(SearchError::Unsupported(
            "the sextic scan works over the prime field F_3".into(),
        ));
    }
    let monomials = sextic_monomials();
    let mut normalized = Vec::with_capacity(points.len());
    let mut seen = Vec::new();
    for p in points {
        let n = field
            .normalize_point(p)
            .ok_or_else(|| SearchError::Unsupported("zero point".into()))?;
        let codes = [field.code(&n[0]), field.code(&n[1]), field.code(&n[2])];
        if seen.contains(&codes) {
            return Err(SearchError::Unsupported("duplicate base point".into()));
        }
        seen.push(codes);
        normalized.push([n[0].clone(), n[1].clone(), n[2].clone()]);
    }
    let mut rows = Vec::with_capacity(normalized.len());
    for p in &normalized {
        let mut row = Vec::with_capacity(monomials.len());
        for m in &monomials {
            let mut v = field.one();
            for (i, &e) in m.iter().enumerate() {
                v = field.mul(&v, &field.pow(&p[i], e as u64));
            }
            row.push(field.code(&v) as u8);
        }
        rows.push(row);
    }
    let vectors = nullspace3(rows, monomials.len());
    Ok(SexticBasis {
        field: field.clone(),
        points: normalized,
        monomials,
        vectors,
    })
}

impl SexticBasis {
    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn points(&self) -> &[[Elem; 3]] {
        &self.points
    }

    pub fn vectors(&self) -> &[Vec<u8>] {
        &self.vectors
    }

    /// The j-th basis vector as a homogeneous polynomial.
    pub fn polynomial(&self, j: usize) -> MultiPoly {
        self.from_coefficients(&self.vectors[j])
    }

    fn from_coefficients(&self, coeffs: &[u8]) -> MultiPoly {
        let mut poly = MultiPoly::zero(&self.field, 3);
        for (c, m) in coeffs.iter().zip(&self.monomials) {
            if *c != 0 {
                let mut mono = MultiPoly::constant(&self.field, 3, &self.field.from_u64(*c as u64));
                for (v, &e) in m.iter().enumerate() {
                    if e > 0 {
                        mono = mono.mul(&MultiPoly::var(&self.field, 3, v).pow(e));
                    }
                }
                poly = poly.add(&mono);
            }
        }
        poly
    }

    /// Linear combination of the basis with the given base-3 digits.
    pub fn combine(&self, digits: &[u8]) -> Result<MultiPoly, SearchError> {
        if digits.len() != self.dimension() {
            return Err(SearchError::Unsupported(format!(
                "expected {} digits, got {}",
                self.dimension(),
                digits.len()
            )));
        }
        let mut coeffs = vec![0u8; self.monomials.len()];
        for (d, v) in digits.iter().zip(&self.vectors) {
            if *d != 0 {
                for (c, b) in coeffs.iter_mut().zip(v) {
                    *c = add3(*c, mul3(*d, *b));
                }
            }
        }
        Ok(self.from_coefficients(&coeffs))
    }

    /// Digits expressing a homogeneous sextic in this basis, if it lies
    /// in the span. The digits are not canonicalized.
    pub fn coordinates_of(&self, poly: &MultiPoly) -> Result<Option<Vec<u8>>, SearchError> {
        if poly.homogeneous_degree() != Some(6) {
            return Err(SearchError::Unsupported(
                "coordinates_of expects a homogeneous sextic".into(),
            ));
        }
        let mut target = vec![0u8; self.monomials.len()];
        for (m, c) in poly.terms() {
            let idx = self
                .monomials
                .iter()
                .position(|e| m.0[..] == e[..])
                .ok_or_else(|| SearchError::Unsupported("monomial outside degree 6".into()))?;
            target[idx] = self.field.code(c) as u8;
        }
        // solve digitsᵀ·vectors = target by eliminating the stacked system
        let dim = self.dimension();
        let ncols = self.monomials.len();
        let mut rows: Vec<Vec<u8>> = (0..ncols)
            .map(|c| {
                let mut row: Vec<u8> = (0..dim).map(|j| self.vectors[j][c]).collect();
                row.push(target[c]);
                row
            })
            .collect();
        let pivots = rref3(&mut rows, dim + 1);
        if pivots.contains(&dim) {
            return Ok(None); // inconsistent: target outside the span
        }
        let mut digits = vec![0u8; dim];
        let mut pivot_of_col = vec![None; dim];
        for (r, &c) in pivots.iter().enumerate() {
            pivot_of_col[c] = Some(r);
        }
        for c in 0..dim {
            if let Some(r) = pivot_of_col[c] {
                digits[c] = rows[r][dim];
            }
        }
        Ok(Some(digits))
    }

    /// Number of projective candidates: (3^dim − 1)/2.
    pub fn candidate_count(&self) -> u64 {
        candidate_total(self.dimension())
    }
}

/// (3^dim − 1)/2 canonical nonzero vectors up to scalar.
pub fn candidate_total(dim: usize) -> u64 {
    (3u64.pow(dim as u32) - 1) / 2
}

/// Index of the first candidate whose leading digit sits at position
/// `lead`: earlier blocks have sizes 3^(dim−1−l).
fn block_offset(dim: usize, lead: usize) -> u64 {
    (0..lead).map(|l| 3u64.pow((dim - 1 - l) as u32)).sum()
}

/// Candidate digits for a global index: the leading digit is 1 and the
/// trailing digits follow a modular ternary Gray code, so consecutive
/// candidates within a block differ in exactly one digit (by +1 mod 3).
pub fn candidate_digits(dim: usize, index: u64) -> Option<Vec<u8>> {
    if index >= candidate_total(dim) {
        return None;
    }
    let mut lead = 0usize;
    let mut rest = index;
    loop {
        let size = 3u64.pow((dim - 1 - lead) as u32);
        if rest < size {
            break;
        }
        rest -= size;
        lead += 1;
    }
    let m = dim - 1 - lead;
    // base-3 digits of the offset, least significant first
    let mut b = vec![0u8; m + 1];
    let mut o = rest;
    for digit in b.iter_mut().take(m) {
        *digit = (o % 3) as u8;
        o /= 3;
    }
    let mut digits = vec![0u8; dim];
    digits[lead] = 1;
    for i in 0..m {
        // Gray digit i lives at position dim−1−i
        digits[dim - 1 - i] = add3(b[i], neg3(b[i + 1]));
    }
    Some(digits)
}

/// Inverse of `candidate_digits`; requires canonical digits (first
/// nonzero digit equal to 1).
pub fn candidate_index(digits: &[u8]) -> Option<u64> {
    let dim = digits.len();
    let lead = digits.iter().position(|&d| d != 0)?;
    if digits[lead] != 1 || digits.iter().any(|&d| d > 2) {
        return None;
    }
    let m = dim - 1 - lead;
    let mut b = vec![0u8; m + 1];
    for i in (0..m).rev() {
        b[i] = add3(digits[dim - 1 - i], b[i + 1]);
    }
    let mut o = 0u64;
    for i in (0..m).rev() {
        o = o * 3 + b[i] as u64;
    }
    Some(block_offset(dim, lead) + o)
}

/// A candidate in enumeration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub index: u64,
    pub digits: Vec<u8>,
}

/// Stream the canonical candidates with indices in `range`, in order.
pub fn enumerate_candidates(
    basis: &SexticBasis,
    range: Range<u64>,
) -> impl Iterator<Item = Candidate> {
    let dim = basis.dimension();
    let total = candidate_total(dim);
    let end = range.end.min(total);
    let mut cursor = Cursor::seed(dim, range.start.min(end), end);
    std::iter::from_fn(move || {
        let c = cursor.as_ref()?.emit();
        cursor = cursor.take().unwrap().advance();
        Some(c)
    })
}

/// Enumeration state: current index, Gray digits, and the base-3 offset
/// digits used to locate the changing position in O(carry) per step.
struct Cursor {
    dim: usize,
    index: u64,
    end: u64,
    block_end: u64,
    lead: usize,
    offset_digits: Vec<u8>,
    digits: Vec<u8>,
}

impl Cursor {
    fn seed(dim: usize, index: u64, end: u64) -> Option<Cursor> {
        if index >= end {
            return None;
        }
        let digits = candidate_digits(dim, index)?;
        let lead = digits.iter().position(|&d| d != 0).unwrap();
        let mut rest = index - block_offset(dim, lead);
        let m = dim - 1 - lead;
        let mut offset_digits = vec![0u8; m];
        for d in offset_digits.iter_mut() {
            *d = (rest % 3) as u8;
            rest /= 3;
        }
        Some(Cursor {
            dim,
            index,
            end,
            block_end: block_offset(dim, lead + 1),
            lead,
            offset_digits,
            digits,
        })
    }

    fn emit(&self) -> Candidate {
        Candidate {
            index: self.index,
            digits: self.digits.clone(),
        }
    }

    /// Step to the next candidate; returns the changed digit position
    /// within a block through `last_change`.
    fn advance(mut self) -> Option<Cursor> {
        let next = self.index + 1;
        if next >= self.end {
            return None;
        }
        if next == self.block_end {
            return Cursor::seed(self.dim, next, self.end);
        }
        // increment the offset; the changed Gray digit is the carry length
        let mut c = 0usize;
        while self.offset_digits[c] == 2 {
            self.offset_digits[c] = 0;
            c += 1;
        }
        self.offset_digits[c] += 1;
        let pos = self.dim - 1 - c;
        self.digits[pos] = add3(self.digits[pos], 1);
        self.index = next;
        Some(self)
    }
}

/// Precomputed evaluation data for the screening loop: values of every
/// basis sextic at each point of P²(F_9) and P²(F_27), the local linear
/// parts at each base point (for singularity detection), and the local
/// quadratic and cubic parts (for on-demand classification).
///
/// Extension values are stored as packed element codes (base-3 digit
/// vectors); adding two codes digit-wise mod 3 is exactly field
/// addition, done through the small precomputed tables.
pub struct EvalTables {
    dim: usize,
    base_count: usize,
    /// per basis vector: codes at the points of P²(F_9)
    col9: Vec<Vec<u8>>,
    /// per basis vector: codes at the points of P²(F_27)
    col27: Vec<Vec<u8>>,
    /// per basis vector: the two local linear coefficients (F_3 codes)
    /// per base point
    colg: Vec<Vec<u8>>,
    /// per base point, per basis vector: local [a, b, c, d₀, d₁, d₂, d₃]
    local: Vec<Vec<[u8; 7]>>,
    /// code-addition tables for F_9 and F_27
    add9: Vec<[u8; 9]>,
    add27: Vec<[u8; 27]>,
}

/// Digit-wise mod-3 addition of packed codes, tabulated.
fn code_add_table<const N: usize>(q: usize) -> Vec<[u8; N]> {
    let mut table = vec![[0u8; N]; q];
    for (a, row) in table.iter_mut().enumerate() {
        for (b, cell) in row.iter_mut().enumerate().take(q) {
            let (mut x, mut y, mut m, mut out) = (a, b, 1usize, 0usize);
            while x > 0 || y > 0 {
                out += ((x % 3 + y % 3) % 3) * m;
                x /= 3;
                y /= 3;
                m *= 3;
            }
            *cell = out as u8;
        }
    }
    table
}

/// Evaluate the basis over the screening domains.
pub fn build_tables(basis: &SexticBasis) -> Result<EvalTables, SearchError> {
    let f3 = basis.field().clone();
    let f9 = Field::new(3, 2)?;
    let f27 = Field::new(3, 3)?;
    let pts9: Vec<Vec<Elem>> = f9.proj_points(2).collect();
    let pts27: Vec<Vec<Elem>> = f27.proj_points(2).collect();
    let dim = basis.dimension();
    let mut col9 = Vec::with_capacity(dim);
    let mut col27 = Vec::with_capacity(dim);
    let mut colg = Vec::with_capacity(dim);
    let mut local = vec![Vec::with_capacity(dim); basis.points().len()];
    for j in 0..dim {
        let poly = basis.polynomial(j);
        let p9 = poly.lift(&f9)?;
        let mut c9 = Vec::with_capacity(pts9.len());
        for p in &pts9 {
            c9.push(f9.code(&p9.eval(p)?) as u8);
        }
        col9.push(c9);
        let p27 = poly.lift(&f27)?;
        let mut c27 = Vec::with_capacity(pts27.len());
        for p in &pts27 {
            c27.push(f27.code(&p27.eval(p)?) as u8);
        }
        col27.push(c27);
        let mut cg = Vec::with_capacity(2 * basis.points().len());
        for (pi, point) in basis.points().iter().enumerate() {
            let exp = local_expansion(&f3, &poly, point)?;
            cg.push(exp[0]);
            cg.push(exp[1]);
            local[pi].push([exp[2], exp[3], exp[4], exp[5], exp[6], exp[7], exp[8]]);
        }
        colg.push(cg);
    }
    Ok(EvalTables {
        dim,
        base_count: basis.points().len(),
        col9,
        col27,
        colg,
        local,
        add9: code_add_table::<9>(9),
        add27: code_add_table::<27>(27),
    })
}

/// Coefficients of the local expansion of a sextic at a rational point:
/// [l_u, l_w, a, b, c, d₀, d₁, d₂, d₃] for the chart with the last
/// nonzero coordinate scaled to 1 and translated to the origin.
fn local_expansion(
    field: &Field,
    poly: &MultiPoly,
    point: &[Elem; 3],
) -> Result<[u8; 9], SearchError> {
    let pivot = (0..3)
        .rev()
        .find(|&i| !point[i].is_zero())
        .ok_or_else(|| SearchError::Unsupported("zero point".into()))?;
    let inv = field.inv(&point[pivot])?;
    let scaled: Vec<Elem> = point.iter().map(|c| field.mul(c, &inv)).collect();
    let locals: Vec<usize> = (0..3).filter(|&i| i != pivot).collect();
    let mut subs = Vec::new();
    for i in 0..3 {
        if i == pivot {
            subs.push(MultiPoly::constant(field, 2, &field.one()));
        } else {
            let slot = locals.iter().position(|&l| l == i).unwrap();
            let var = MultiPoly::var(field, 2, slot);
            subs.push(var.add(&MultiPoly::constant(field, 2, &scaled[i])));
        }
    }
    let expansion = poly.compose(&subs)?;
    let mut out = [0u8; 9];
    for (m, c) in expansion.terms() {
        let (eu, ew) = (m.0[0] as usize, m.0[1] as usize);
        let slot = match (eu, ew) {
            (1, 0) => Some(0),
            (0, 1) => Some(1),
            (2, 0) => Some(2),
            (1, 1) => Some(3),
            (0, 2) => Some(4),
            (3, 0) => Some(5),
            (2, 1) => Some(6),
            (1, 2) => Some(7),
            (0, 3) => Some(8),
            _ => None,
        };
        if let Some(s) = slot {
            out[s] = add3(out[s], field.code(c) as u8);
        }
    }
    Ok(out)
}

/// Screening result for one candidate.
#[derive(Debug, Clone)]
pub struct ScreenStats {
    /// plane count over F_3; every candidate passes through all base
    /// points, so for the full point set this is always 13
    pub n3_plane: u32,
    pub n9: u32,
    pub n27: u32,
    /// singular base points with their local classification, by index
    /// into the basis point list
    pub singular: Vec<(usize, DoublePointClass)>,
    /// rational count corrected to the smooth model (split node +1,
    /// nonsplit node −1, cusp 0); None when some singular point falls
    /// outside the node/cusp classification
    pub corrected_n1: Option<i64>,
}

/// Working value vectors for one candidate over the screening domains.
struct ValueState {
    v9: Vec<u8>,
    v27: Vec<u8>,
    vg: Vec<u8>,
}

impl ValueState {
    fn new(tables: &EvalTables) -> ValueState {
        ValueState {
            v9: vec![0u8; tables.col9[0].len()],
            v27: vec![0u8; tables.col27[0].len()],
            vg: vec![0u8; tables.colg[0].len()],
        }
    }

    /// Add basis column j once (field addition on packed codes).
    fn add_column(&mut self, tables: &EvalTables, j: usize) {
        for (v, t) in self.v9.iter_mut().zip(&tables.col9[j]) {
            *v = tables.add9[*v as usize][*t as usize];
        }
        for (v, t) in self.v27.iter_mut().zip(&tables.col27[j]) {
            *v = tables.add27[*v as usize][*t as usize];
        }
        for (v, t) in self.vg.iter_mut().zip(&tables.colg[j]) {
            *v = add3(*v, *t);
        }
    }

    fn seed(&mut self, tables: &EvalTables, digits: &[u8]) {
        self.v9.iter_mut().for_each(|v| *v = 0);
        self.v27.iter_mut().for_each(|v| *v = 0);
        self.vg.iter_mut().for_each(|v| *v = 0);
        for (j, &d) in digits.iter().enumerate() {
            for _ in 0..d {
                self.add_column(tables, j);
            }
        }
    }
}

/// Screen one candidate from scratch. The incremental scan computes the
/// same stats by value-vector updates; the two routes are required to
/// agree.
pub fn screen(tables: &EvalTables, digits: &[u8]) -> Result<ScreenStats, SearchError> {
    if digits.len() != tables.dim {
        return Err(SearchError::Unsupported(format!(
            "expected {} digits, got {}",
            tables.dim,
            digits.len()
        )));
    }
    let mut values = ValueState::new(tables);
    values.seed(tables, digits);
    Ok(stats_from_values(tables, digits, &values))
}

fn stats_from_values(tables: &EvalTables, digits: &[u8], values: &ValueState) -> ScreenStats {
    let n9 = values.v9.iter().filter(|&&v| v == 0).count() as u32;
    let n27 = values.v27.iter().filter(|&&v| v == 0).count() as u32;
    let mut singular = Vec::new();
    let mut corrected = tables.base_count as i64;
    let mut classified = true;
    for p in 0..tables.base_count {
        if values.vg[2 * p] == 0 && values.vg[2 * p + 1] == 0 {
            let class = classify_from_local(&tables.local[p], digits);
            match class {
                DoublePointClass::NodeSplit => corrected += 1,
                DoublePointClass::NodeNonsplit => corrected -= 1,
                DoublePointClass::Cusp => {}
                DoublePointClass::Other => classified = false,
            }
            singular.push((p, class));
        }
    }
    ScreenStats {
        n3_plane: tables.base_count as u32,
        n9,
        n27,
        singular,
        corrected_n1: if classified { Some(corrected) } else { None },
    }
}

/// Classify a singular base point from precomputed local data: combine
/// the quadratic and cubic coefficients and read the tangent cone.
fn classify_from_local(point_rows: &[[u8; 7]], digits: &[u8]) -> DoublePointClass {
    let mut v = [0u8; 7];
    for (d, row) in digits.iter().zip(point_rows) {
        if *d != 0 {
            for (acc, x) in v.iter_mut().zip(row) {
                *acc = add3(*acc, mul3(*d, *x));
            }
        }
    }
    let (a, b, c) = (v[0], v[1], v[2]);
    if a == 0 && b == 0 && c == 0 {
        return DoublePointClass::Other;
    }
    // disc = b² − 4ac = b² + 2ac mod 3; nonzero squares in F_3 are {1}
    let disc = add3(mul3(b, b), mul3(2, mul3(a, c)));
    match disc {
        1 => DoublePointClass::NodeSplit,
        2 => DoublePointClass::NodeNonsplit,
        _ => {
            // double tangent direction (du, dw)
            let (du, dw) = if a != 0 {
                // −b / (2a); in F_3 the inverse of 2a is 2a itself
                (neg3(mul3(b, mul3(2, a))), 1)
            } else {
                // disc = b² = 0 forces b = 0, leaving c·w²
                (1, 0)
            };
            // cubic part along the direction; x³ = x in F_3
            let mut val = 0u8;
            for (i, &coeff) in v[3..7].iter().enumerate() {
                let powers = mul3(pow3(du, 3 - i as u32), pow3(dw, i as u32));
                val = add3(val, mul3(coeff, powers));
            }
            if val != 0 {
                DoublePointClass::Cusp
            } else {
                DoublePointClass::Other
            }
        }
    }
}

fn pow3(x: u8, e: u32) -> u8 {
    match e {
        0 => 1,
        _ => {
            if e % 2 == 0 {
                mul3(x, x) // x² ; for e ∈ {2}
            } else {
                x // x¹ and x³ = x in F_3
            }
        }
    }
}

/// Scan configuration. Windows are inclusive. A `threads` value of 0
/// uses one worker per available CPU.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub n9_window: (u32, u32),
    pub n27_window: (u32, u32),
    pub singular_budget: u32,
    pub threads: usize,
    pub checkpoint: Option<PathBuf>,
    pub checkpoint_interval: u64,
    pub shortlist_cap: usize,
    /// stop (after writing a checkpoint) once this many candidates have
    /// been processed in this call; None runs to completion
    pub stop_after: Option<u64>,
    pub resume: bool,
}

impl Default for SearchConfig {
    /// Windows default to the genus-5 Weil intervals over F_9 and F_27
    /// widened by twice the maximal plane-model correction (δ ≤ 5), so
    /// no true genus-5 curve with 13 rational points is ever excluded.
    fn default() -> SearchConfig {
        SearchConfig {
            n9_window: (0, 50),
            n27_window: (0, 89),
            singular_budget: 5,
            threads: 0,
            checkpoint: None,
            checkpoint_interval: 1 << 20,
            shortlist_cap: 16_000_000,
            stop_after: None,
            resume: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ShortlistEntry {
    pub index: u64,
    pub n9: u16,
    pub n27: u16,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub processed: u64,
    pub canonical_total: u64,
    /// the raw coefficient-vector count including scalars and zero
    pub raw_vector_total: u64,
    pub finished: bool,
    pub resumed_from: Option<u64>,
    pub truncated: bool,
    pub shortlist: Vec<ShortlistEntry>,
}

/// Scan the candidate space (or resume from a checkpoint) and return
/// the survivors of the screening filters. The shortlist is identical
/// for every thread count and across interrupt/resume cycles.
pub fn run_search(basis: &SexticBasis, config: &SearchConfig) -> Result<SearchReport, SearchError> {
    if config.n9_window.0 > config.n9_window.1 || config.n27_window.0 > config.n27_window.1 {
        return Err(SearchError::Config("screening window is empty".into()));
    }
    if config.shortlist_cap == 0 {
        return Err(SearchError::Config("shortlist cap must be at least 1".into()));
    }
    if config.checkpoint_interval == 0 {
        return Err(SearchError::Config("checkpoint interval must be positive".into()));
    }
    let tables = build_tables(basis)?;
    let total = basis.candidate_count();
    let dim = basis.dimension();

    let (mut cursor_index, mut shortlist, resumed_from) = if config.resume {
        let path = config
            .checkpoint
            .as_ref()
            .ok_or_else(|| SearchError::Config("resume requires a checkpoint path".into()))?;
        let (next, entries) = load_checkpoint(path, config, dim)?;
        (next, entries, Some(next))
    } else {
        (0, Vec::new(), None)
    };
    let mut truncated = shortlist.len() >= config.shortlist_cap;

    let threads = if config.threads == 0 {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    } else {
        config.threads
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| SearchError::Config(e.to_string()))?;

    let mut this_run = 0u64;
    while cursor_index < total {
        if let Some(stop) = config.stop_after {
            if this_run >= stop {
                break;
            }
        }
        let mut round_end = (cursor_index + config.checkpoint_interval).min(total);
        if let Some(stop) = config.stop_after {
            round_end = round_end.min(cursor_index + (stop - this_run));
        }
        // deterministic shortlist: disjoint ordered chunks, merged in order
        let len = round_end - cursor_index;
        let chunk_count = threads.min(len.max(1) as usize).max(1);
        let bounds: Vec<(u64, u64)> = (0..chunk_count as u64)
            .map(|i| {
                let a = cursor_index + i * len / chunk_count as u64;
                let b = cursor_index + (i + 1) * len / chunk_count as u64;
                (a, b)
            })
            .collect();
        let results: Vec<Vec<ShortlistEntry>> = pool.install(|| {
            use rayon::prelude::*;
            bounds
                .par_iter()
                .map(|&(a, b)| scan_range(&tables, config, dim, a, b))
                .collect()
        });
        for mut part in results {
            if shortlist.len() + part.len() > config.shortlist_cap {
                part.truncate(config.shortlist_cap - shortlist.len());
                truncated = true;
            }
            shortlist.append(&mut part);
        }
        this_run += len;
        cursor_index = round_end;
        if let Some(path) = &config.checkpoint {
            write_checkpoint(path, config, dim, cursor_index, &shortlist)?;
        }
    }
    Ok(SearchReport {
        processed: cursor_index,
        canonical_total: total,
        raw_vector_total: 3u64.pow(dim as u32),
        finished: cursor_index == total,
        resumed_from,
        truncated,
        shortlist,
    })
}

/// Screen indices [a, b): seed the value vector once, then follow the
/// Gray order with one column update per step.
fn scan_range(
    tables: &EvalTables,
    config: &SearchConfig,
    dim: usize,
    a: u64,
    b: u64,
) -> Vec<ShortlistEntry> {
    let mut out = Vec::new();
    let mut cursor = match Cursor::seed(dim, a, b) {
        Some(c) => c,
        None => return out,
    };
    let mut values = ValueState::new(tables);
    values.seed(tables, &cursor.digits);
    loop {
        let stats = stats_from_values(tables, &cursor.digits, &values);
        if passes(&stats, config) {
            out.push(ShortlistEntry {
                index: cursor.index,
                n9: stats.n9 as u16,
                n27: stats.n27 as u16,
            });
        }
        let prev_lead = cursor.lead;
        cursor = match cursor.advance() {
            Some(c) => c,
            None => break,
        };
        if cursor.lead != prev_lead {
            // new block: reseed from scratch
            values.seed(tables, &cursor.digits);
        } else {
            // exactly one digit changed by +1 mod 3: add its column once
            values.add_column(tables, cursor.last_changed());
        }
    }
    out
}

impl Cursor {
    /// Position of the digit changed by the most recent in-block step.
    fn last_changed(&self) -> usize {
        // the carry length is recoverable from the offset digits: the
        // incremented digit is the lowest nonzero one
        let c = self
            .offset_digits
            .iter()
            .position(|&d| d != 0)
            .unwrap_or(0);
        self.dim - 1 - c
    }
}

fn passes(stats: &ScreenStats, config: &SearchConfig) -> bool {
    if stats.n9 < config.n9_window.0 || stats.n9 > config.n9_window.1 {
        return false;
    }
    if stats.n27 < config.n27_window.0 || stats.n27 > config.n27_window.1 {
        return false;
    }
    if stats.singular.len() as u32 > config.singular_budget {
        return false;
    }
    match stats.corrected_n1 {
        // necessary condition for 13 points on the smooth model
        Some(corrected) => corrected == stats.n3_plane as i64,
        // unclassified singularity: cannot exclude, keep the candidate
        None => true,
    }
}

// --- checkpoint format ---
//
// Line-oriented text:
//   version=1
//   config=n9:<lo>-<hi> n27:<lo>-<hi> sing:<budget>
//   next_index=<integer>
//   processed=<integer>
//   cand=<digits> n3=<..> n9=<..> n27=<..>     (one line per entry)
//   checksum=<16 hex digits>                   (FNV-1a 64 of all prior bytes)

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn config_line(config: &SearchConfig) -> String {
    format!(
        "config=n9:{}-{} n27:{}-{} sing:{}",
        config.n9_window.0,
        config.n9_window.1,
        config.n27_window.0,
        config.n27_window.1,
        config.singular_budget
    )
}

fn write_checkpoint(
    path: &Path,
    config: &SearchConfig,
    dim: usize,
    next_index: u64,
    shortlist: &[ShortlistEntry],
) -> Result<(), SearchError> {
    let mut body = String::new();
    body.push_str("version=1\n");
    body.push_str(&config_line(config));
    body.push('\n');
    body.push_str(&format!("next_index={}\n", next_index));
    body.push_str(&format!("processed={}\n", next_index));
    for e in shortlist {
        let digits = candidate_digits(dim, e.index).expect("entry index in range");
        let digit_str: String = digits.iter().map(|d| (b'0' + d) as char).collect();
        body.push_str(&format!(
            "cand={} n3=13 n9={} n27={}\n",
            digit_str, e.n9, e.n27
        ));
    }
    let digest = fnv1a64(body.as_bytes());
    let tmp = path.with_extension("tmp");
    {
        let mut file = std::fs::File::create(&tmp)?;
        file.write_all(body.as_bytes())?;
        file.write_all(format!("checksum={:016x}\n", digest).as_bytes())?;
        file.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn load_checkpoint(
    path: &Path,
    config: &SearchConfig,
    dim: usize,
) -> Result<(u64, Vec<ShortlistEntry>), SearchError> {
    let text = std::fs::read_to_string(path)?;
    let tail = text
        .rfind("checksum=")
        .ok_or_else(|| SearchError::Checkpoint("missing checksum line".into()))?;
    let body = &text[..tail];
    let digest_line = text[tail..].trim_end();
    let want = digest_line
        .strip_prefix("checksum=")
        .and_then(|h| u64::from_str_radix(h, 16).ok())
        .ok_or_else(|| SearchError::Checkpoint("malformed checksum line".into()))?;
    if fnv1a64(body.as_bytes()) != want {
        return Err(SearchError::Checkpoint("checksum mismatch".into()));
    }
    let mut lines = body.lines();
    if lines.next() != Some("version=1") {
        return Err(SearchError::Checkpoint("unsupported version".into()));
    }
    let cfg = lines
        .next()
        .ok_or_else(|| SearchError::Checkpoint("missing config line".into()))?;
    if cfg != config_line(config) {
        return Err(SearchError::Checkpoint(
            "checkpoint was written with different screening settings".into(),
        ));
    }
    let next = lines
        .next()
        .and_then(|l| l.strip_prefix("next_index="))
        .and_then(|v| v.parse::<u64>().ok())
        .ok_or_else(|| SearchError::Checkpoint("missing next_index".into()))?;
    let processed = lines
        .next()
        .and_then(|l| l.strip_prefix("processed="))
        .and_then(|v| v.parse::<u64>().ok())
        .ok_or_else(|| SearchError::Checkpoint("missing processed".into()))?;
    if processed != next {
        return Err(SearchError::Checkpoint("inconsistent progress counters".into()));
    }
    let mut entries = Vec::new();
    for line in lines {
        let rest = line
            .strip_prefix("cand=")
            .ok_or_else(|| SearchError::Checkpoint(format!("unexpected line: {line}")))?;
        let mut fields = rest.split(' ');
        let digit_str = fields
            .next()
            .ok_or_else(|| SearchError::Checkpoint("missing digits".into()))?;
        if digit_str.len() != dim {
            return Err(SearchError::Checkpoint("wrong digit count".into()));
        }
        let digits: Vec<u8> = digit_str.bytes().map(|b| b.wrapping_sub(b'0')).collect();
        let index = candidate_index(&digits)
            .ok_or_else(|| SearchError::Checkpoint("non-canonical digits".into()))?;
        let mut n9 = None;
        let mut n27 = None;
        for field in fields {
            if let Some(v) = field.strip_prefix("n9=") {
                n9 = v.parse::<u16>().ok();
            } else if let Some(v) = field.strip_prefix("n27=") {
                n27 = v.parse::<u16>().ok();
            }
        }
        let (n9, n27) = match (n9, n27) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(SearchError::Checkpoint("missing counts".into())),
        };
        if index >= next {
            return Err(SearchError::Checkpoint(
                "shortlist entry beyond the recorded progress".into(),
            ));
        }
        entries.push(ShortlistEntry { index, n9, n27 });
    }
    Ok((next, entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{self, PlaneCurve, DEFAULT_BUDGET};
    use crate::poly::parse::parse_poly;

    fn f3() -> Field {
        Field::new(3, 1).unwrap()
    }

    fn all_points() -> Vec<[Elem; 3]> {
        let f = f3();
        f.proj_points(2)
            .map(|p| [p[0].clone(), p[1].clone(), p[2].clone()])
            .collect()
    }

    fn full_basis() -> SexticBasis {
        sextic_space(&f3(), &all_points()).unwrap()
    }

    #[test]
    fn space_dimensions() {
        let f = f3();
        let pts = all_points();
        assert_eq!(pts.len(), 13);
        assert_eq!(sextic_space(&f, &pts).unwrap().dimension(), 15);
        assert_eq!(sextic_space(&f, &[]).unwrap().dimension(), 28);
        assert_eq!(sextic_space(&f, &pts[..1]).unwrap().dimension(), 27);
        assert!(matches!(
            sextic_space(&f, &[pts[0].clone(), pts[0].clone()]),
            Err(SearchError::Unsupported(_))
        ));
    }

    #[test]
    fn basis_vectors_vanish_and_are_independent() {
        let basis = full_basis();
        for j in 0..basis.dimension() {
            let poly = basis.polynomial(j);
            assert!(!poly.is_zero());
            assert_eq!(poly.homogeneous_degree(), Some(6));
            for p in basis.points() {
                assert!(poly.eval(p).unwrap().is_zero());
            }
        }
        // independence: the stacked vectors have full rank
        let mut rows: Vec<Vec<u8>> = basis.vectors().to_vec();
        let pivots = rref3(&mut rows, SEXTIC_MONOMIAL_COUNT);
        assert_eq!(pivots.len(), basis.dimension());
    }

    #[test]
    fn candidate_indexing_roundtrip() {
        let dim = 15;
        let total = candidate_total(dim);
        assert_eq!(total, 7_174_453);
        let samples = [0u64, 1, 2, 100, 4_782_968, 4_782_969, total - 2, total - 1];
        for &n in &samples {
            let digits = candidate_digits(dim, n).unwrap();
            let lead = digits.iter().position(|&d| d != 0).unwrap();
            assert_eq!(digits[lead], 1, "canonical leading digit");
            assert_eq!(candidate_index(&digits), Some(n));
        }
        assert_eq!(candidate_digits(dim, total), None);
        // a deterministic pseudo-random sweep
        let mut state = 0x9e3779b97f4a7c15u64;
        for _ in 0..1000 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let n = state % total;
            let digits = candidate_digits(dim, n).unwrap();
            assert_eq!(candidate_index(&digits), Some(n));
        }
    }

    #[test]
    fn enumeration_is_gray_ordered() {
        let basis = full_basis();
        let mut count = 0u64;
        let mut prev: Option<Candidate> = None;
        for cand in enumerate_candidates(&basis, 0..200_000) {
            if let Some(p) = &prev {
                assert_eq!(cand.index, p.index + 1);
                let lead_prev = p.digits.iter().position(|&d| d != 0).unwrap();
                let lead_now = cand.digits.iter().position(|&d| d != 0).unwrap();
                if lead_prev == lead_now {
                    // within a block exactly one digit moves, by +1 mod 3
                    let diffs: Vec<usize> = (0..15)
                        .filter(|&i| cand.digits[i] != p.digits[i])
                        .collect();
                    assert_eq!(diffs.len(), 1);
                    let i = diffs[0];
                    assert_eq!(cand.digits[i], add3(p.digits[i], 1));
                }
            }
            prev = Some(cand);
            count += 1;
        }
        assert_eq!(count, 200_000);
        // spot-check random access against the stream
        let direct = candidate_digits(15, 199_999).unwrap();
        assert_eq!(prev.unwrap().digits, direct);
        // empty range
        assert_eq!(enumerate_candidates(&basis, 5..5).count(), 0);
    }

    #[test]
    fn full_enumeration_count_matches() {
        let basis = full_basis();
        let total = basis.candidate_count();
        let count = enumerate_candidates(&basis, 0..total).count() as u64;
        assert_eq!(count, 7_174_453);
    }

    #[test]
    fn random_candidates_vanish_at_base_points() {
        let basis = full_basis();
        let total = basis.candidate_count();
        let mut state = 42u64;
        for _ in 0..10_000 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let digits = candidate_digits(15, state % total).unwrap();
            let poly = basis.combine(&digits).unwrap();
            for p in basis.points() {
                assert!(poly.eval(p).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn reference_model_lies_in_the_span_and_passes() {
        let f = f3();
        let basis = full_basis();
        let vars = ["x", "y", "z"];
        let model = parse_poly(
            "x^4*z^2+x^3*y^3-x^2*z^4-x*y^5+y^5*z+2*y*z^5",
            &vars,
            &f,
        )
        .unwrap();
        let digits = basis.coordinates_of(&model).unwrap().expect("in span");
        let canonical = canonicalize(&digits);
        let index = candidate_index(&canonical).unwrap();
        let tables = build_tables(&basis).unwrap();
        let stats = screen(&tables, &canonical).unwrap();
        assert_eq!(stats.n3_plane, 13);
        assert_eq!(stats.n9, 15);
        assert_eq!(stats.n27, 25);
        assert_eq!(stats.singular.len(), 2);
        assert!(stats
            .singular
            .iter()
            .all(|(_, c)| *c == DoublePointClass::Cusp));
        assert_eq!(stats.corrected_n1, Some(13));
        assert!(passes(&stats, &SearchConfig::default()));
        // the scan must reach this index
        assert!(index < basis.candidate_count());
    }

    fn canonicalize(digits: &[u8]) -> Vec<u8> {
        let lead = digits.iter().position(|&d| d != 0).unwrap();
        if digits[lead] == 1 {
            digits.to_vec()
        } else {
            digits.iter().map(|&d| mul3(d, 2)).collect()
        }
    }

    #[test]
    fn screen_matches_counting_module_classification() {
        let f = f3();
        let basis = full_basis();
        let tables = build_tables(&basis).unwrap();
        let f9 = Field::new(3, 2).unwrap();
        let total = basis.candidate_count();
        let mut state = 7u64;
        let mut checked_singular = 0;
        for _ in 0..60 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let digits = candidate_digits(15, state % total).unwrap();
            let stats = screen(&tables, &digits).unwrap();
            let poly = basis.combine(&digits).unwrap();
            let curve = PlaneCurve::new(poly).unwrap();
            // plane count over F_9 agrees with direct enumeration
            let direct9 = counting::count_plane(&curve, &f9, DEFAULT_BUDGET).unwrap().n;
            assert_eq!(stats.n9 as u64, direct9);
            // singular points and classes agree with the counting module
            let sing = counting::singular_points_plane(&curve, &f, DEFAULT_BUDGET).unwrap();
            let mut expected = Vec::new();
            for s in &sing {
                let pos = basis
                    .points()
                    .iter()
                    .position(|p| {
                        (0..3).all(|i| f.code(&p[i]) == f.code(&s[i]))
                    })
                    .expect("rational singular points are base points");
                let class = counting::classify_double_point(&curve, s, &f).unwrap();
                expected.push((pos, class));
            }
            expected.sort_by_key(|(p, _)| *p);
            assert_eq!(stats.singular, expected);
            checked_singular += expected.len();
        }
        assert!(checked_singular > 0, "sample contained singular candidates");
    }

    #[test]
    fn incremental_scan_agrees_with_scratch_screen() {
        let basis = full_basis();
        let tables = build_tables(&basis).unwrap();
        // windows that accept everything, so the shortlist records the
        // stats of every candidate in the range
        let config = SearchConfig {
            n9_window: (0, 91),
            n27_window: (0, 757),
            singular_budget: 13,
            ..SearchConfig::default()
        };
        let mut state = 11u64;
        let total = basis.candidate_count();
        for _ in 0..40 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = state % (total - 30);
            let entries = scan_range(&tables, &config, 15, a, a + 25);
            let expected: Vec<ShortlistEntry> = (a..a + 25)
                .filter_map(|n| {
                    let digits = candidate_digits(15, n).unwrap();
                    let stats = screen(&tables, &digits).unwrap();
                    passes(&stats, &config).then(|| ShortlistEntry {
                        index: n,
                        n9: stats.n9 as u16,
                        n27: stats.n27 as u16,
                    })
                })
                .collect();
            assert_eq!(entries, expected);
        }
    }

    #[test]
    fn degenerate_product_profile_is_visible() {
        let f = f3();
        let basis = full_basis();
        // a line times a quintic through the remaining points lies in
        // the span; its F_9 count equals the union of the two components
        let vars = ["x", "y", "z"];
        let line = parse_poly("x", &vars, &f).unwrap();
        let on_line: Vec<usize> = (0..13)
            .filter(|&i| basis.points()[i][0].is_zero())
            .collect();
        assert_eq!(on_line.len(), 4);
        // quintic monomials evaluated at the 9 points off the line
        let mut quintic_monos = Vec::new();
        for e0 in (0..=5u32).rev() {
            for e1 in (0..=5 - e0).rev() {
                quintic_monos.push([e0, e1, 5 - e0 - e1]);
            }
        }
        assert_eq!(quintic_monos.len(), 21);
        let mut rows = Vec::new();
        for i in 0..13 {
            if on_line.contains(&i) {
                continue;
            }
            let p = &basis.points()[i];
            let row: Vec<u8> = quintic_monos
                .iter()
                .map(|m| {
                    let mut v = f.one();
                    for (idx, &e) in m.iter().enumerate() {
                        v = f.mul(&v, &f.pow(&p[idx], e as u64));
                    }
                    f.code(&v) as u8
                })
                .collect();
            rows.push(row);
        }
        let kernel = nullspace3(rows, 21);
        assert!(!kernel.is_empty());
        let mut quintic = MultiPoly::zero(&f, 3);
        for (c, m) in kernel[0].iter().zip(&quintic_monos) {
            if *c != 0 {
                let mut mono = MultiPoly::constant(&f, 3, &f.from_u64(*c as u64));
                for (v, &e) in m.iter().enumerate() {
                    if e > 0 {
                        mono = mono.mul(&MultiPoly::var(&f, 3, v).pow(e));
                    }
                }
                quintic = quintic.add(&mono);
            }
        }
        let product = line.mul(&quintic);
        let digits = basis.coordinates_of(&product).unwrap().expect("in span");
        let tables = build_tables(&basis).unwrap();
        let stats = screen(&tables, &canonicalize(&digits)).unwrap();
        // the profile equals the direct plane count of the reducible curve
        let f9 = Field::new(3, 2).unwrap();
        let curve = PlaneCurve::new(product).unwrap();
        let direct = counting::count_plane(&curve, &f9, DEFAULT_BUDGET).unwrap().n;
        assert_eq!(stats.n9 as u64, direct);
        // a line alone contributes 10 points over F_9
        assert!(stats.n9 >= 10);
    }

    #[test]
    fn screening_twice_is_stable() {
        let basis = full_basis();
        let tables = build_tables(&basis).unwrap();
        let digits = candidate_digits(15, 123_456).unwrap();
        let a = screen(&tables, &digits).unwrap();
        let b = screen(&tables, &digits).unwrap();
        assert_eq!(a.n9, b.n9);
        assert_eq!(a.n27, b.n27);
        assert_eq!(a.singular, b.singular);
        assert_eq!(a.corrected_n1, b.corrected_n1);
    }

    #[test]
    fn interrupted_resumed_scan_matches_uninterrupted() {
        let basis = full_basis();
        let dir = tempfile::tempdir().unwrap();
        let ck_a = dir.path().join("a.ck");
        let ck_b = dir.path().join("b.ck");
        let limit = 180_000u64;
        // straight partial run with a checkpoint
        let straight = run_search(
            &basis,
            &SearchConfig {
                threads: 2,
                checkpoint: Some(ck_a.clone()),
                checkpoint_interval: 50_000,
                stop_after: Some(limit),
                ..SearchConfig::default()
            },
        )
        .unwrap();
        assert_eq!(straight.processed, limit);
        assert!(!straight.finished);
        // interrupted at 70 000, then resumed to the same total
        let first = run_search(
            &basis,
            &SearchConfig {
                threads: 1,
                checkpoint: Some(ck_b.clone()),
                checkpoint_interval: 50_000,
                stop_after: Some(70_000),
                ..SearchConfig::default()
            },
        )
        .unwrap();
        assert_eq!(first.processed, 70_000);
        let resumed = run_search(
            &basis,
            &SearchConfig {
                threads: 3,
                checkpoint: Some(ck_b.clone()),
                checkpoint_interval: 50_000,
                stop_after: Some(limit - 70_000),
                resume: true,
                ..SearchConfig::default()
            },
        )
        .unwrap();
        assert_eq!(resumed.processed, limit);
        assert_eq!(resumed.resumed_from, Some(70_000));
        assert_eq!(straight.shortlist, resumed.shortlist);
        // checkpoint files are byte-identical
        let a = std::fs::read(&ck_a).unwrap();
        let b = std::fs::read(&ck_b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn thread_count_does_not_change_the_shortlist() {
        let basis = full_basis();
        let mk = |threads| SearchConfig {
            threads,
            stop_after: Some(120_000),
            checkpoint_interval: 40_000,
            ..SearchConfig::default()
        };
        let one = run_search(&basis, &mk(1)).unwrap();
        let four = run_search(&basis, &mk(4)).unwrap();
        assert_eq!(one.shortlist, four.shortlist);
        assert_eq!(one.processed, four.processed);
        assert!(!one.shortlist.is_empty());
    }

    #[test]
    fn corrupted_checkpoints_are_refused() {
        let basis = full_basis();
        let dir = tempfile::tempdir().unwrap();
        let ck = dir.path().join("scan.ck");
        run_search(
            &basis,
            &SearchConfig {
                threads: 1,
                checkpoint: Some(ck.clone()),
                checkpoint_interval: 10_000,
                stop_after: Some(10_000),
                ..SearchConfig::default()
            },
        )
        .unwrap();
        // flip one byte in the body
        let mut bytes = std::fs::read(&ck).unwrap();
        let mid = bytes.len() / 2;
        bytes[mid] = if bytes[mid] == b'1' { b'2' } else { b'1' };
        std::fs::write(&ck, &bytes).unwrap();
        let err = run_search(
            &basis,
            &SearchConfig {
                checkpoint: Some(ck.clone()),
                resume: true,
                ..SearchConfig::default()
            },
        )
        .unwrap_err();
        assert!(matches!(err, SearchError::Checkpoint(_)));
        // a different screening config is also refused
        run_search(
            &basis,
            &SearchConfig {
                threads: 1,
                checkpoint: Some(ck.clone()),
                checkpoint_interval: 10_000,
                stop_after: Some(10_000),
                ..SearchConfig::default()
            },
        )
        .unwrap();
        let err = run_search(
            &basis,
            &SearchConfig {
                checkpoint: Some(ck),
                resume: true,
                singular_budget: 4,
                ..SearchConfig::default()
            },
        )
        .unwrap_err();
        assert!(matches!(err, SearchError::Checkpoint(_)));
    }

    #[test]
    fn impossible_window_yields_clean_empty_shortlist() {
        let basis = full_basis();
        // every candidate vanishes at the 13 rational points, so n9 ≥ 13
        // and a (0, 0) window can never be met
        let report = run_search(
            &basis,
            &SearchConfig {
                threads: 1,
                n9_window: (0, 0),
                stop_after: Some(50_000),
                ..SearchConfig::default()
            },
        )
        .unwrap();
        assert!(report.shortlist.is_empty());
        assert_eq!(report.processed, 50_000);
        // an inverted window is invalid outright
        assert!(matches!(
            run_search(
                &basis,
                &SearchConfig {
                    n9_window: (5, 2),
                    ..SearchConfig::default()
                },
            ),
            Err(SearchError::Config(_))
        ));
    }
}
