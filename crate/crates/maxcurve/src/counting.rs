//! Exact point counting and singularity analysis: plane curves in P² and
//! nets of quadrics in P⁴ over small finite fields.
//!
//! Counting walks the standard chart decomposition of projective space
//! (leading coordinate 1, earlier coordinates 0, later ones free), so every
//! point is visited exactly once. Hot loops run on table-backed field codes
//! when the field is small enough; a generic path covers the rest, guarded
//! by an evaluation budget.

use crate::gf::{Elem, Field, FieldError, SmallField};
use crate::poly::uni::{
    bivar_resultant, factor_prime_field, quotient_gcd_degree, roots_in, QuotientGcd, UniPolyF,
};
use crate::poly::{MultiPoly, PolyError};
use rayon::prelude::*;
use std::time::Instant;

/// Default ceiling on elementary evaluations per counting call.
pub const DEFAULT_BUDGET: u64 = 10_000_000_000;

#[derive(Debug, thiserror::Error)]
pub enum CountError {
    #[error("operation needs about {required} elementary evaluations, budget is {budget}")]
    Budget { required: u64, budget: u64 },
    #[error("no quadric is linear in any variable; elimination plan unavailable")]
    NoPlan,
    #[error("point does not lie on the net")]
    NotOnNet,
    #[error("point is not a singular point of the curve")]
    NotSingular,
    #[error("curve has {0} variables, expected {1}")]
    WrongArity(usize, usize),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("quadric is not homogeneous of degree 2")]
    NotQuadric,
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A nonzero homogeneous plane curve F(x, y, z) = 0.
#[derive(Debug, Clone)]
pub struct PlaneCurve {
    equation: MultiPoly,
    degree: u32,
}

impl PlaneCurve {
    pub fn new(equation: MultiPoly) -> Result<PlaneCurve, CountError> {
        if equation.nvars() != 3 {
            return Err(CountError::WrongArity(equation.nvars(), 3));
        }
        if equation.is_zero() {
            return Err(CountError::ZeroPolynomial);
        }
        let degree = equation
            .homogeneous_degree()
            .ok_or(CountError::NotHomogeneous)?;
        Ok(PlaneCurve { equation, degree })
    }

    pub fn equation(&self) -> &MultiPoly {
        &self.equation
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn field(&self) -> &Field {
        self.equation.field()
    }

    /// The same curve with coefficients lifted into `ext` (identity when
    /// the fields already agree).
    pub fn lift(&self, ext: &Field) -> Result<PlaneCurve, CountError> {
        Ok(PlaneCurve {
            equation: self.equation.lift(ext)?,
            degree: self.degree,
        })
    }
}

/// Three quadratic forms in five variables together with their symmetric
/// Gram matrices (odd characteristic, so mixed coefficients halve).
#[derive(Debug, Clone)]
pub struct QuadricNet {
    forms: [MultiPoly; 3],
    gram: [Vec<Vec<Elem>>; 3],
}

impl QuadricNet {
    pub fn new(q1: MultiPoly, q2: MultiPoly, q3: MultiPoly) -> Result<QuadricNet, CountError> {
        let forms = [q1, q2, q3];
        let field = forms[0].field().clone();
        let mut gram = Vec::new();
        for q in &forms {
            if q.nvars() != 5 {
                return Err(CountError::WrongArity(q.nvars(), 5));
            }
            if q.field() != &field {
                return Err(CountError::Unsupported(
                    "the three quadrics must share one coefficient field".into(),
                ));
            }
            if q.is_zero() || q.homogeneous_degree() != Some(2) {
                return Err(CountError::NotQuadric);
            }
            gram.push(gram_matrix(q)?);
        }
        let gram: [Vec<Vec<Elem>>; 3] = gram.try_into().expect("three grams");
        Ok(QuadricNet { forms, gram })
    }

    pub fn forms(&self) -> &[MultiPoly; 3] {
        &self.forms
    }

    pub fn gram(&self, j: usize) -> &Vec<Vec<Elem>> {
        &self.gram[j]
    }

    pub fn field(&self) -> &Field {
        self.forms[0].field()
    }

    pub fn lift(&self, ext: &Field) -> Result<QuadricNet, CountError> {
        QuadricNet::new(
            self.forms[0].lift(ext)?,
            self.forms[1].lift(ext)?,
            self.forms[2].lift(ext)?,
        )
    }
}

/// Symmetric Gram matrix of a quadratic form (odd characteristic).
pub fn gram_matrix(q: &MultiPoly) -> Result<Vec<Vec<Elem>>, CountError> {
    let field = q.field().clone();
    if field.p() == 2 {
        return Err(CountError::Unsupported(
            "Gram matrices need odd characteristic".into(),
        ));
    }
    let n = q.nvars();
    let half = field.inv(&field.from_u64(2))?;
    let mut m = vec![vec![field.zero(); n]; n];
    for (mono, c) in q.terms() {
        let mut support: Vec<(usize, u32)> = mono
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (i, e))
            .collect();
        support.sort_unstable();
        match support.as_slice() {
            [(i, 2)] => m[*i][*i] = field.add(&m[*i][*i], c),
            [(i, 1), (j, 1)] => {
                let h = field.mul(c, &half);
                m[*i][*j] = field.add(&m[*i][*j], &h);
                m[*j][*i] = field.add(&m[*j][*i], &h);
            }
            _ => return Err(CountError::NotQuadric),
        }
    }
    Ok(m)
}

/// Outcome of a counting run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRecord {
    pub model: String,
    pub k: u32,
    pub n: u64,
    pub strategy: String,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetStrategy {
    Naive,
    Eliminate,
}

/// Terms of a polynomial compiled to field codes and byte exponents.
fn compile_terms(f: &MultiPoly) -> Vec<(u16, Vec<u8>)> {
    let field = f.field();
    f.terms()
        .map(|(m, c)| {
            (
                field.code(c) as u16,
                m.0.iter().map(|&e| e as u8).collect(),
            )
        })
        .collect()
}

/// pow[code][e] = code^e for e up to maxdeg.
fn power_table(sf: &SmallField, maxdeg: usize) -> Vec<Vec<u16>> {
    let q = sf.q() as usize;
    let mut t = vec![vec![1u16; maxdeg + 1]; q];
    for (code, row) in t.iter_mut().enumerate() {
        for e in 1..=maxdeg {
            row[e] = sf.mul(row[e - 1], code as u16);
        }
    }
    t
}

/// Number of points of P²(F_q) on the curve.
pub fn count_plane(
    curve: &PlaneCurve,
    ext: &Field,
    budget: u64,
) -> Result<CountRecord, CountError> {
    let start = Instant::now();
    let lifted = curve.lift(ext)?;
    let nterms = lifted.equation.num_terms() as u64;
    let required = ext.proj_count(2).saturating_mul(nterms.max(1));
    if required > budget {
        return Err(CountError::Budget { required, budget });
    }
    let n = match SmallField::build(ext) {
        Some(sf) => count_plane_tables(&lifted, &sf),
        None => count_plane_generic(&lifted, ext),
    };
    Ok(CountRecord {
        model: String::new(),
        k: ext.k(),
        n,
        strategy: "enumeration".into(),
        elapsed_ms: start.elapsed().as_millis(),
    })
}

fn count_plane_tables(curve: &PlaneCurve, sf: &SmallField) -> u64 {
    let q = sf.q() as usize;
    let d = curve.degree as usize;
    let terms = compile_terms(&curve.equation);
    let pow = power_table(sf, d);
    // chart x = 1: free (y, z)
    let mut grid = vec![vec![0u16; d + 1]; d + 1]; // grid[ey][ez]
    let mut used = vec![vec![false; d + 1]; d + 1];
    for (c, e) in &terms {
        let (ey, ez) = (e[1] as usize, e[2] as usize);
        grid[ey][ez] = sf.add(grid[ey][ez], *c);
        used[ey][ez] = true;
    }
    let chart_x: u64 = (0..q as u16)
        .into_par_iter()
        .map(|y| {
            let mut zc = vec![0u16; d + 1];
            for ey in 0..=d {
                let py = pow[y as usize][ey];
                if py == 0 && ey > 0 {
                    continue;
                }
                for ez in 0..=d {
                    if used[ey][ez] {
                        zc[ez] = sf.add(zc[ez], sf.mul(grid[ey][ez], py));
                    }
                }
            }
            let mut count = 0u64;
            for z in 0..q as u16 {
                let mut acc = 0u16;
                for ez in (0..=d).rev() {
                    acc = sf.add(sf.mul(acc, z), zc[ez]);
                }
                if acc == 0 {
                    count += 1;
                }
            }
            count
        })
        .sum();
    // chart x = 0, y = 1: free z
    let mut zc = vec![0u16; d + 1];
    for (c, e) in &terms {
        if e[0] == 0 {
            zc[e[2] as usize] = sf.add(zc[e[2] as usize], *c);
        }
    }
    let mut chart_y = 0u64;
    for z in 0..q as u16 {
        let mut acc = 0u16;
        for ez in (0..=d).rev() {
            acc = sf.add(sf.mul(acc, z), zc[ez]);
        }
        if acc == 0 {
            chart_y += 1;
        }
    }
    // point (0 : 0 : 1)
    let mut last = 0u16;
    for (c, e) in &terms {
        if e[0] == 0 && e[1] == 0 {
            last = sf.add(last, *c);
        }
    }
    chart_x + chart_y + u64::from(last == 0)
}

fn count_plane_generic(curve: &PlaneCurve, ext: &Field) -> u64 {
    let f = &curve.equation;
    let mut n = 0u64;
    for p in ext.proj_points(2) {
        if f.eval(&p).expect("arity checked").is_zero() {
            n += 1;
        }
    }
    n
}

/// All points of P²(F_q) on the curve, as canonical coordinate triples.
pub fn plane_points(
    curve: &PlaneCurve,
    ext: &Field,
    budget: u64,
) -> Result<Vec<[Elem; 3]>, CountError> {
    let lifted = curve.lift(ext)?;
    let nterms = lifted.equation.num_terms() as u64;
    let required = ext.proj_count(2).saturating_mul(nterms.max(1));
    if required > budget {
        return Err(CountError::Budget { required, budget });
    }
    let f = &lifted.equation;
    let mut out = Vec::new();
    for p in ext.proj_points(2) {
        if f.eval(&p).expect("arity checked").is_zero() {
            let mut it = p.into_iter();
            out.push([
                it.next().unwrap(),
                it.next().unwrap(),
                it.next().unwrap(),
            ]);
        }
    }
    Ok(out)
}

/// Number of common zeros of the net in P⁴(F_q).
pub fn count_net(
    net: &QuadricNet,
    ext: &Field,
    strategy: NetStrategy,
    budget: u64,
) -> Result<CountRecord, CountError> {
    let start = Instant::now();
    let lifted = net.lift(ext)?;
    let n = match strategy {
        NetStrategy::Naive => {
            let required = ext.proj_count(4).saturating_mul(45);
            if required > budget {
                return Err(CountError::Budget { required, budget });
            }
            count_net_naive(&lifted, ext)
        }
        NetStrategy::Eliminate => {
            let required = ext.proj_count(3).saturating_mul(50);
            if required > budget {
                return Err(CountError::Budget { required, budget });
            }
            count_net_eliminate(&lifted, ext)?
        }
    };
    Ok(CountRecord {
        model: String::new(),
        k: ext.k(),
        n,
        strategy: match strategy {
            NetStrategy::Naive => "naive".into(),
            NetStrategy::Eliminate => "eliminate".into(),
        },
        elapsed_ms: start.elapsed().as_millis(),
    })
}

fn count_net_naive(net: &QuadricNet, ext: &Field) -> u64 {
    let forms = &net.forms;
    let mut n = 0u64;
    for p in ext.proj_points(4) {
        if forms
            .iter()
            .all(|q| q.eval(&p).expect("arity checked").is_zero())
        {
            n += 1;
        }
    }
    n
}

/// All common zeros of the net in P⁴(F_q), canonical coordinates.
pub fn net_points(
    net: &QuadricNet,
    ext: &Field,
    budget: u64,
) -> Result<Vec<Vec<Elem>>, CountError> {
    let lifted = net.lift(ext)?;
    let required = ext.proj_count(4).saturating_mul(45);
    if required > budget {
        return Err(CountError::Budget { required, budget });
    }
    let mut out = Vec::new();
    for p in ext.proj_points(4) {
        if lifted
            .forms
            .iter()
            .all(|q| q.eval(&p).expect("arity checked").is_zero())
        {
            out.push(p);
        }
    }
    Ok(out)
}

/// Find a (quadric, variable) pair with the quadric of degree ≤ 1 in the
/// variable, preferring low indices.
fn elimination_plan(net: &QuadricNet) -> Option<(usize, usize)> {
    for j in 0..3 {
        for v in 0..5 {
            if net.gram[j][v][v].is_zero() && net.forms[j].degree_in(v) <= 1 {
                return Some((j, v));
            }
        }
    }
    None
}

/// Gram matrices as code tables, with doubled off-diagonal rows
/// precomputed: value of q at a code vector w is
/// Σ_i w_i·(diag_i·w_i + Σ_{j>i} cross_ij·w_j).
struct CodedQuadric {
    diag: [u16; 5],
    cross: [[u16; 5]; 5],
}

impl CodedQuadric {
    fn build(gram: &[Vec<Elem>], field: &Field, sf: &SmallField) -> CodedQuadric {
        let mut diag = [0u16; 5];
        let mut cross = [[0u16; 5]; 5];
        let two = (2 % field.p()) as u16;
        for i in 0..5 {
            diag[i] = field.code(&gram[i][i]) as u16;
            for j in 0..5 {
                cross[i][j] = sf.mul(two, field.code(&gram[i][j]) as u16);
            }
        }
        CodedQuadric { diag, cross }
    }

    /// Evaluate on the coordinates listed in `support` (others zero).
    fn eval_on(&self, sf: &SmallField, w: &[u16; 5], support: &[usize]) -> u16 {
        let mut acc = 0u16;
        for (a, &i) in support.iter().enumerate() {
            let wi = w[i];
            if wi == 0 {
                continue;
            }
            let mut row = self.diag[i];
            row = sf.mul(row, wi);
            let mut mixed = 0u16;
            for &j in &support[a + 1..] {
                if w[j] != 0 {
                    mixed = sf.add(mixed, sf.mul(self.cross[i][j], w[j]));
                }
            }
            acc = sf.add(acc, sf.mul(wi, sf.add(row, mixed)));
        }
        acc
    }

    /// Coefficient of x_v at the point `w` (x_v treated as indeterminate,
    /// coordinates outside `support` zero): Σ_{i in support} cross_vi·w_i.
    fn linear_in(&self, sf: &SmallField, v: usize, w: &[u16; 5], support: &[usize]) -> u16 {
        let mut acc = 0u16;
        for &i in support {
            if w[i] != 0 {
                acc = sf.add(acc, sf.mul(self.cross[v][i], w[i]));
            }
        }
        acc
    }
}

/// Roots in F_q of a·t² + b·t + c given as codes; None means every t.
fn quadratic_roots(sf: &SmallField, p: u64, a: u16, b: u16, c: u16) -> Option<Vec<u16>> {
    if a == 0 {
        if b == 0 {
            return if c == 0 { None } else { Some(Vec::new()) };
        }
        let t = sf.neg(sf.mul(c, sf.inv(b)));
        return Some(vec![t]);
    }
    let four = (4 % p) as u16;
    let disc = sf.sub(sf.mul(b, b), sf.mul(four, sf.mul(a, c)));
    let s = match sf.sqrt(disc) {
        Some(s) => s,
        None => return Some(Vec::new()),
    };
    let two_a_inv = sf.inv(sf.mul((2 % p) as u16, a));
    let r1 = sf.mul(sf.add(sf.neg(b), s), two_a_inv);
    if s == 0 {
        return Some(vec![r1]);
    }
    let r2 = sf.mul(sf.sub(sf.neg(b), s), two_a_inv);
    Some(vec![r1, r2])
}

fn intersect_roots(a: &Option<Vec<u16>>, b: &Option<Vec<u16>>, q: u64) -> u64 {
    match (a, b) {
        (None, None) => q,
        (None, Some(v)) | (Some(v), None) => v.len() as u64,
        (Some(v), Some(w)) => v.iter().filter(|t| w.contains(t)).count() as u64,
    }
}

fn count_net_eliminate(net: &QuadricNet, ext: &Field) -> Result<u64, CountError> {
    let (j0, v) = elimination_plan(net).ok_or(CountError::NoPlan)?;
    let sf = SmallField::build(ext).ok_or_else(|| {
        CountError::Unsupported("eliminate strategy needs a table-sized field".into())
    })?;
    let field = ext;
    let coded: Vec<CodedQuadric> = (0..3)
        .map(|j| CodedQuadric::build(&net.gram[j], field, &sf))
        .collect();
    let others: Vec<usize> = (0..3).filter(|&j| j != j0).collect();
    let rest: Vec<usize> = (0..5).filter(|&i| i != v).collect();
    let q = sf.q() as u64;
    let p = sf.p();

    // Walk P³ on the rest coordinates chart by chart: leading coordinate 1,
    // earlier rest coordinates 0, later ones free.
    let mut total = 0u64;
    for lead in 0..4 {
        let free: Vec<usize> = (lead + 1..4).collect();
        let nfree = free.len();
        let reps = q.pow(nfree as u32);
        let count_for = |outer: u64| -> u64 {
            let mut w = [0u16; 5];
            w[rest[lead]] = 1;
            let mut local = 0u64;
            let span = if nfree == 0 { 1 } else { q.pow((nfree - 1) as u32) };
            for inner in 0..span {
                let mut rem = inner;
                if nfree > 0 {
                    w[rest[free[0]]] = outer as u16;
                    for fi in 1..nfree {
                        w[rest[free[fi]]] = (rem % q) as u16;
                        rem /= q;
                    }
                }
                let support: Vec<usize> = rest[lead..].to_vec();
                let a0 = coded[j0].linear_in(&sf, v, &w, &support);
                let b0 = coded[j0].eval_on(&sf, &w, &support);
                if a0 != 0 {
                    // unique x_v on this fiber
                    let t = sf.neg(sf.mul(b0, sf.inv(a0)));
                    let ok = others.iter().all(|&j| {
                        let aj = coded[j].diag[v];
                        let bj = coded[j].linear_in(&sf, v, &w, &support);
                        let cj = coded[j].eval_on(&sf, &w, &support);
                        let val = sf.add(sf.mul(sf.add(sf.mul(aj, t), bj), t), cj);
                        val == 0
                    });
                    if ok {
                        local += 1;
                    }
                } else if b0 == 0 {
                    // the eliminated quadric vanishes on the whole fiber
                    let sets: Vec<Option<Vec<u16>>> = others
                        .iter()
                        .map(|&j| {
                            let aj = coded[j].diag[v];
                            let bj = coded[j].linear_in(&sf, v, &w, &support);
                            let cj = coded[j].eval_on(&sf, &w, &support);
                            quadratic_roots(&sf, p, aj, bj, cj)
                        })
                        .collect();
                    local += intersect_roots(&sets[0], &sets[1], q);
                }
            }
            local
        };
        if nfree == 0 {
            total += count_for(0);
        } else if reps >= 4096 {
            total += (0..q).into_par_iter().map(count_for).sum::<u64>();
        } else {
            total += (0..q).map(count_for).sum::<u64>();
        }
    }
    // the remaining point of P⁴: x_v = 1, all rest coordinates 0
    let on_ev = (0..3).all(|j| net.gram[j][v][v].is_zero());
    if on_ev {
        total += 1;
    }
    Ok(total)
}

/// Rational singular points (F = F_x = F_y = F_z = 0) in P²(F_q),
/// canonical coordinates, sorted by coordinate codes.
pub fn singular_points_plane(
    curve: &PlaneCurve,
    ext: &Field,
    budget: u64,
) -> Result<Vec<[Elem; 3]>, CountError> {
    let required = ext.proj_count(2).saturating_mul(4 * curve.equation.num_terms() as u64);
    if required <= budget && ext.q() <= 1 << 14 {
        singular_points_enumeration(curve, ext)
    } else {
        singular_points_pipeline(curve, ext)
    }
}

/// Direct enumeration of P²(F_q).
pub fn singular_points_enumeration(
    curve: &PlaneCurve,
    ext: &Field,
) -> Result<Vec<[Elem; 3]>, CountError> {
    let lifted = curve.lift(ext)?;
    let f = &lifted.equation;
    let grads = [f.derive(0)?, f.derive(1)?, f.derive(2)?];
    let mut out = Vec::new();
    for point in ext.proj_points(2) {
        if !f.eval(&point)?.is_zero() {
            continue;
        }
        if grads.iter().all(|g| g.eval(&point).unwrap().is_zero()) {
            let mut it = point.into_iter();
            out.push([
                it.next().unwrap(),
                it.next().unwrap(),
                it.next().unwrap(),
            ]);
        }
    }
    sort_points(ext, &mut out);
    Ok(out)
}

fn push_normalized(ext: &Field, out: &mut Vec<[Elem; 3]>, pt: [Elem; 3]) {
    let norm = ext
        .normalize_point(&pt)
        .expect("projective point has a nonzero coordinate");
    let mut it = norm.into_iter();
    out.push([
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
    ]);
}

fn sort_points(ext: &Field, pts: &mut [[Elem; 3]]) {
    pts.sort_by_key(|p| {
        (
            ext.code(&p[0]),
            ext.code(&p[1]),
            ext.code(&p[2]),
        )
    });
}

/// Resultant-based singular point location: eliminate y from the partials
/// in the x=? charts, take rational roots, verify.
pub fn singular_points_pipeline(
    curve: &PlaneCurve,
    ext: &Field,
) -> Result<Vec<[Elem; 3]>, CountError> {
    let base = curve.field().clone();
    if base.k() != 1 {
        return Err(CountError::Unsupported(
            "resultant pipeline needs a prime coefficient field".into(),
        ));
    }
    let f = &curve.equation;
    let fx = f.derive(0)?;
    let fy = f.derive(1)?;
    let fz = f.derive(2)?;
    let mut out: Vec<[Elem; 3]> = Vec::new();

    // chart z = 1
    let fd = f.dehomogenize(2)?;
    let fdx = fd.derive(0)?;
    let fdy = fd.derive(1)?;
    let candidates = chart_candidate_xs(&fd, &fdx, &fdy, ext)?;
    for x0 in candidates {
        let uf = specialize_to_y(&fd, &x0, ext);
        let ux = specialize_to_y(&fdx, &x0, ext);
        let uy = specialize_to_y(&fdy, &x0, ext);
        let mut g: Option<UniPolyF> = None;
        for u in [uf, ux, uy] {
            if u.is_zero() {
                continue;
            }
            g = Some(match g {
                None => u,
                Some(prev) => prev.gcd(&u),
            });
        }
        match g {
            None => {
                // entire line x = x0 is singular; collect its points
                for ycode in 0..ext.q() {
                    push_normalized(ext, &mut out, [x0.clone(), ext.from_code(ycode), ext.one()]);
                }
            }
            Some(g) => {
                for y0 in dedup_roots(ext, roots_in(&g, ext)?) {
                    push_normalized(ext, &mut out, [x0.clone(), y0, ext.one()]);
                }
            }
        }
    }

    // line z = 0, x ≠ 0: points (1 : y : 0)
    let mut g: Option<UniPolyF> = None;
    let mut all_zero = true;
    for poly in [f, &fx, &fy, &fz] {
        let u = specialize_line(poly, ext);
        if u.is_zero() {
            continue;
        }
        all_zero = false;
        g = Some(match g {
            None => u,
            Some(prev) => prev.gcd(&u),
        });
    }
    if all_zero {
        for ycode in 0..ext.q() {
            push_normalized(ext, &mut out, [ext.one(), ext.from_code(ycode), ext.zero()]);
        }
    } else if let Some(g) = g {
        for y0 in dedup_roots(ext, roots_in(&g, ext)?) {
            push_normalized(ext, &mut out, [ext.one(), y0, ext.zero()]);
        }
    }

    // point (0 : 1 : 0)
    let e = vec![ext.zero(), ext.one(), ext.zero()];
    let lf = f.lift(ext)?;
    if lf.eval(&e)?.is_zero()
        && [&fx, &fy, &fz]
            .iter()
            .all(|g| g.lift(ext).unwrap().eval(&e).unwrap().is_zero())
    {
        out.push([ext.zero(), ext.one(), ext.zero()]);
    }
    sort_points(ext, &mut out);
    out.dedup_by(|a, b| a == b);
    Ok(out)
}

fn dedup_roots(ext: &Field, roots: Vec<Elem>) -> Vec<Elem> {
    let mut seen: Vec<u64> = Vec::new();
    let mut out = Vec::new();
    for r in roots {
        let code = ext.code(&r);
        if !seen.contains(&code) {
            seen.push(code);
            out.push(r);
        }
    }
    out
}

/// Candidate x-coordinates of chart singular points: rational roots of the
/// first nonzero resultant from the pair cascade.
fn chart_candidate_xs(
    fd: &MultiPoly,
    fdx: &MultiPoly,
    fdy: &MultiPoly,
    ext: &Field,
) -> Result<Vec<Elem>, CountError> {
    let pairs: [(&MultiPoly, &MultiPoly); 3] = [(fdx, fdy), (fd, fdx), (fd, fdy)];
    for (a, b) in pairs {
        if a.is_zero() || b.is_zero() {
            continue;
        }
        if a.total_degree() == Some(0) || b.total_degree() == Some(0) {
            // a nonzero constant in the pair: no common zero in this chart
            return Ok(Vec::new());
        }
        let r = bivar_resultant(a, b, 0, 1)?;
        if !r.is_zero() {
            return Ok(dedup_roots(ext, roots_in(&r, ext)?));
        }
    }
    // every pairing degenerated; fall back to scanning all rational x
    Ok((0..ext.q()).map(|c| ext.from_code(c)).collect())
}

/// Substitute x = x0 into a polynomial of the chart (variables x, y; any
/// z-exponent must be zero) and return the univariate result in y.
fn specialize_to_y(f: &MultiPoly, x0: &Elem, ext: &Field) -> UniPolyF {
    let base = f.field();
    let dy = f.degree_in(1) as usize;
    let mut coeffs = vec![ext.zero(); dy + 1];
    for (m, c) in f.terms() {
        let lifted = ext.from_u64(base.code(c));
        let xpow = ext.pow(x0, m.0[0] as u64);
        let e = m.0[1] as usize;
        coeffs[e] = ext.add(&coeffs[e], &ext.mul(&lifted, &xpow));
    }
    UniPolyF::from_coeffs(ext, coeffs)
}

/// Substitute (x, z) = (1, 0) and return the univariate result in y.
fn specialize_line(f: &MultiPoly, ext: &Field) -> UniPolyF {
    let base = f.field();
    let dy = f.degree_in(1) as usize;
    let mut coeffs = vec![ext.zero(); dy + 1];
    for (m, c) in f.terms() {
        if m.0[2] != 0 {
            continue;
        }
        let e = m.0[1] as usize;
        let lifted = ext.from_u64(base.code(c));
        coeffs[e] = ext.add(&coeffs[e], &lifted);
    }
    UniPolyF::from_coeffs(ext, coeffs)
}

/// Verdict of the closure smoothness decision.
#[derive(Debug, Clone)]
pub struct SmoothnessReport {
    pub smooth: bool,
    /// Rational singular point when one was located.
    pub witness: Option<[Elem; 3]>,
    /// Description of the failure or of the evidence.
    pub detail: String,
    /// Degrees of the extensions in which candidates were examined.
    pub extensions_searched: Vec<usize>,
    /// Bézout bound (d−1)² on the size of the candidate singular scheme.
    pub bezout_bound: u64,
}

/// Decide smoothness of the curve over the algebraic closure.
///
/// Strategy per chart: take the first pair from (F_x,F_y), (F,F_x), (F,F_y)
/// whose y-resultant is nonzero, factor that resultant over the prime
/// field, and check each candidate x-coordinate in the quotient field
/// F_p[X]/(factor) by a triple gcd of F, F_x, F_y. The line z = 0 and the
/// point (0:1:0) are checked directly.
pub fn is_smooth_plane(curve: &PlaneCurve) -> Result<SmoothnessReport, CountError> {
    let base = curve.field().clone();
    if base.k() != 1 {
        return Err(CountError::Unsupported(
            "smoothness decision implemented over prime coefficient fields".into(),
        ));
    }
    if curve.degree > 8 {
        return Err(CountError::Unsupported(
            "smoothness decision limited to degree at most 8".into(),
        ));
    }
    let d = curve.degree as u64;
    let bezout = if d >= 1 { (d - 1) * (d - 1) } else { 0 };
    let mut extensions: Vec<usize> = Vec::new();

    let f = &curve.equation;
    let fx = f.derive(0)?;
    let fy = f.derive(1)?;
    let fz = f.derive(2)?;

    // chart z = 1
    let fd = f.dehomogenize(2)?;
    let fdx = fd.derive(0)?;
    let fdy = fd.derive(1)?;
    if fdx.is_zero() && fdy.is_zero() && fd.total_degree().unwrap_or(0) > 0 {
        return Ok(not_smooth_report(
            curve,
            "the affine equation is a p-th power; every curve point is singular",
            extensions,
            bezout,
        ));
    }
    if let Some(report) = chart_singularities(
        curve, &fd, &fdx, &fdy, &mut extensions, bezout,
    )? {
        return Ok(report);
    }

    // line z = 0, x ≠ 0
    let mut g: Option<UniPolyF> = None;
    let mut saw_nonzero = false;
    for poly in [f, &fx, &fy, &fz] {
        let u = specialize_line(poly, &base);
        if u.is_zero() {
            continue;
        }
        saw_nonzero = true;
        g = Some(match g {
            None => u,
            Some(prev) => prev.gcd(&u),
        });
    }
    if !saw_nonzero {
        return Ok(not_smooth_report(
            curve,
            "the line z = 0 lies on the curve with all partials vanishing",
            extensions,
            bezout,
        ));
    }
    if let Some(g) = g {
        if g.deg().unwrap_or(0) > 0 {
            let (_, factors) = factor_prime_field(&g)?;
            for (fac, _) in &factors {
                extensions.push(fac.deg().unwrap());
            }
            let mut report = not_smooth_report(
                curve,
                "singular point on the line z = 0",
                extensions,
                bezout,
            );
            if let Some(y0) = roots_in(&g, &base)?.first() {
                report.witness = Some([base.one(), y0.clone(), base.zero()]);
            }
            return Ok(report);
        }
    }

    // point (0 : 1 : 0)
    let e = vec![base.zero(), base.one(), base.zero()];
    if f.eval(&e)?.is_zero()
        && fx.eval(&e)?.is_zero()
        && fy.eval(&e)?.is_zero()
        && fz.eval(&e)?.is_zero()
    {
        let mut report = not_smooth_report(
            curve,
            "singular point at (0:1:0)",
            extensions,
            bezout,
        );
        report.witness = Some([base.zero(), base.one(), base.zero()]);
        return Ok(report);
    }

    extensions.sort_unstable();
    extensions.dedup();
    Ok(SmoothnessReport {
        smooth: true,
        witness: None,
        detail: "no singular point over the algebraic closure".into(),
        extensions_searched: extensions,
        bezout_bound: bezout,
    })
}

fn not_smooth_report(
    curve: &PlaneCurve,
    reason: &str,
    mut extensions: Vec<usize>,
    bezout: u64,
) -> SmoothnessReport {
    extensions.sort_unstable();
    extensions.dedup();
    // try to attach a small rational witness
    let witness = (1..=3u32).find_map(|k| {
        let ext = Field::new(curve.field().p(), k).ok()?;
        let pts = singular_points_enumeration(curve, &ext).ok()?;
        pts.into_iter().next()
    });
    SmoothnessReport {
        smooth: false,
        witness,
        detail: reason.to_string(),
        extensions_searched: extensions,
        bezout_bound: bezout,
    }
}

/// Examine chart z = 1 for closure singular points. Returns a report when
/// the curve is not smooth, None when the chart is clean.
fn chart_singularities(
    curve: &PlaneCurve,
    fd: &MultiPoly,
    fdx: &MultiPoly,
    fdy: &MultiPoly,
    extensions: &mut Vec<usize>,
    bezout: u64,
) -> Result<Option<SmoothnessReport>, CountError> {
    // a nonzero constant partial rules out chart singularities immediately
    for g in [fdx, fdy] {
        if !g.is_zero() && g.total_degree() == Some(0) {
            return Ok(None);
        }
    }
    let pairs: [(&MultiPoly, &MultiPoly); 3] = [(fdx, fdy), (fd, fdx), (fd, fdy)];
    let mut resultant = None;
    let mut orientation = 0usize; // 0: eliminate y (candidates in x), 1: eliminate x
    'outer: for (a, b) in pairs {
        if a.is_zero() || b.is_zero() {
            continue;
        }
        for (xv, yv) in [(0usize, 1usize), (1usize, 0usize)] {
            let r = bivar_resultant(a, b, xv, yv)?;
            if !r.is_zero() {
                resultant = Some(r);
                orientation = xv;
                break 'outer;
            }
        }
    }
    let r = match resultant {
        Some(r) => r,
        None => {
            return Err(CountError::Unsupported(
                "candidate singular locus is positive-dimensional; \
                 smoothness not decided by the resultant cascade"
                    .into(),
            ))
        }
    };
    let (xv, yv) = if orientation == 0 { (0, 1) } else { (1, 0) };
    if r.deg() == Some(0) {
        return Ok(None);
    }
    let (_, factors) = factor_prime_field(&r)?;
    for (fac, _) in &factors {
        let fac_deg = fac.deg().unwrap();
        extensions.push(fac_deg);
        match quotient_gcd_degree(&[fd, fdx, fdy], xv, yv, fac)? {
            QuotientGcd::AllZero => {
                return Ok(Some(not_smooth_report(
                    curve,
                    "curve contains a coordinate-aligned component through \
                     a candidate; the component meets the rest singularly",
                    extensions.clone(),
                    bezout,
                )));
            }
            QuotientGcd::Degree(0) => {}
            QuotientGcd::Degree(_) => {
                let mut report = not_smooth_report(
                    curve,
                    "common zero of F, F_x, F_y in the z = 1 chart",
                    extensions.clone(),
                    bezout,
                );
                if report.witness.is_none() && fac_deg == 1 {
                    // rational candidate coordinate; locate the mate
                    let base = curve.field();
                    if let Some(x0) = roots_in(fac, base)?.first() {
                        let mut g: Option<UniPolyF> = None;
                        for poly in [fd, fdx, fdy] {
                            let u = specialize_to_y(poly, x0, base);
                            if u.is_zero() {
                                continue;
                            }
                            g = Some(match g {
                                None => u,
                                Some(prev) => prev.gcd(&u),
                            });
                        }
                        if let Some(g) = g {
                            if let Some(y0) = roots_in(&g, base)?.first() {
                                let (a, b) = if orientation == 0 {
                                    (x0.clone(), y0.clone())
                                } else {
                                    (y0.clone(), x0.clone())
                                };
                                report.witness = Some([a, b, base.one()]);
                            }
                        }
                    }
                }
                return Ok(Some(report));
            }
        }
    }
    Ok(None)
}

/// Rank of the 3×5 Jacobian of the net at a point of P⁴(F_q) lying on it.
pub fn jacobian_rank_at(
    net: &QuadricNet,
    point: &[Elem],
    ext: &Field,
) -> Result<usize, CountError> {
    let lifted = net.lift(ext)?;
    if point.len() != 5 {
        return Err(CountError::WrongArity(point.len(), 5));
    }
    let pt = point.to_vec();
    for q in &lifted.forms {
        if !q.eval(&pt)?.is_zero() {
            return Err(CountError::NotOnNet);
        }
    }
    // gradient of v ↦ vᵀQv is 2·Q·v
    let two = ext.from_u64(2);
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    for j in 0..3 {
        let g = &lifted.gram[j];
        let mut row = Vec::with_capacity(5);
        for i in 0..5 {
            let mut acc = ext.zero();
            for l in 0..5 {
                acc = ext.add(&acc, &ext.mul(&g[i][l], &point[l]));
            }
            row.push(ext.mul(&two, &acc));
        }
        rows.push(row);
    }
    Ok(matrix_rank(ext, rows))
}

/// Rank of a matrix over a field by Gaussian elimination.
pub fn matrix_rank(field: &Field, mut m: Vec<Vec<Elem>>) -> usize {
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        let piv = (rank..nrows).find(|&r| !m[r][col].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => continue,
        };
        m.swap(rank, piv);
        let inv = field.inv(&m[rank][col]).expect("pivot nonzero");
        for c in col..ncols {
            m[rank][c] = field.mul(&m[rank][c], &inv);
        }
        for r in 0..nrows {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..ncols {
                    let t = field.mul(&factor, &m[rank][c]);
                    m[r][c] = field.sub(&m[r][c], &t);
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// Local type of a singular point read from the tangent cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DoublePointClass {
    /// Two distinct tangent directions, both rational.
    NodeSplit,
    /// Two distinct conjugate tangent directions.
    NodeNonsplit,
    /// One double tangent direction with a genuine cubic branch.
    Cusp,
    /// Degenerate tangent cone or higher-order structure.
    Other,
}

/// Classify a singular point by its tangent cone over the point's field:
/// factor the degree-2 part of the local expansion; distinct rational
/// roots → split node, distinct conjugate roots → nonsplit node, a double
/// root with nonvanishing cubic part along it → cusp, else other.
pub fn classify_double_point(
    curve: &PlaneCurve,
    point: &[Elem; 3],
    ext: &Field,
) -> Result<DoublePointClass, CountError> {
    let lifted = curve.lift(ext)?;
    let f = &lifted.equation;
    // chart with the last nonzero coordinate scaled to 1
    let pivot = (0..3)
        .rev()
        .find(|&i| !point[i].is_zero())
        .ok_or(CountError::NotSingular)?;
    let inv = ext.inv(&point[pivot])?;
    let scaled: Vec<Elem> = point.iter().map(|c| ext.mul(c, &inv)).collect();
    let locals: Vec<usize> = (0..3).filter(|&i| i != pivot).collect();
    // substitute x_local = p_local + u, x_pivot = 1
    let mut subs = Vec::new();
    for i in 0..3 {
        if i == pivot {
            subs.push(MultiPoly::constant(ext, 2, &ext.one()));
        } else {
            let slot = locals.iter().position(|&l| l == i).unwrap();
            let var = MultiPoly::var(ext, 2, slot);
            subs.push(var.add(&MultiPoly::constant(ext, 2, &scaled[i])));
        }
    }
    let local = f.compose(&subs)?;
    // degree parts
    let mut deg0 = ext.zero();
    let mut deg1 = [ext.zero(), ext.zero()];
    let mut quad = [ext.zero(), ext.zero(), ext.zero()]; // u², uw, w²
    let mut cubic = [ext.zero(), ext.zero(), ext.zero(), ext.zero()]; // u³..w³
    for (m, c) in local.terms() {
        let (eu, ew) = (m.0[0] as usize, m.0[1] as usize);
        match eu + ew {
            0 => deg0 = ext.add(&deg0, c),
            1 => deg1[ew] = ext.add(&deg1[ew], c),
            2 => quad[ew] = ext.add(&quad[ew], c),
            3 => cubic[ew] = ext.add(&cubic[ew], c),
            _ => {}
        }
    }
    if !deg0.is_zero() || deg1.iter().any(|c| !c.is_zero()) {
        return Err(CountError::NotSingular);
    }
    let (a, b, c) = (&quad[0], &quad[1], &quad[2]);
    if a.is_zero() && b.is_zero() && c.is_zero() {
        return Ok(DoublePointClass::Other);
    }
    // discriminant of a·u² + b·uw + c·w²
    let four = ext.from_u64(4);
    let disc = ext.sub(&ext.mul(b, b), &ext.mul(&four, &ext.mul(a, c)));
    match ext.square_class(&disc) {
        1 => Ok(DoublePointClass::NodeSplit),
        -1 => Ok(DoublePointClass::NodeNonsplit),
        _ => {
            // double tangent direction (du, dw)
            let (du, dw) = if !a.is_zero() {
                let two_a = ext.mul(&ext.from_u64(2), a);
                (ext.neg(&ext.mul(b, &ext.inv(&two_a)?)), ext.one())
            } else {
                // b² = disc = 0 forces b = 0, so the form is c·w²
                (ext.one(), ext.zero())
            };
            // evaluate the cubic part along the double direction
            let mut val = ext.zero();
            for (i, coeff) in cubic.iter().enumerate() {
                let t = ext.mul(
                    coeff,
                    &ext.mul(&ext.pow(&du, (3 - i) as u64), &ext.pow(&dw, i as u64)),
                );
                val = ext.add(&val, &t);
            }
            if val.is_zero() {
                Ok(DoublePointClass::Other)
            } else {
                Ok(DoublePointClass::Cusp)
            }
        }
    }
}

/// Count points of the nonsingular model over F_q: plane count, minus the
/// rational singular points, plus the rational places above them
/// (split node 2, nonsplit node 0, cusp 1). Refuses when any rational
/// singular point is not a node or cusp.
pub fn smooth_count(
    curve: &PlaneCurve,
    ext: &Field,
    budget: u64,
) -> Result<CountRecord, CountError> {
    let start = Instant::now();
    let plane = count_plane(curve, ext, budget)?;
    let singular = singular_points_plane(curve, ext, budget)?;
    let mut n = plane.n as i64;
    for pt in &singular {
        let class = classify_double_point(curve, pt, ext)?;
        match class {
            DoublePointClass::NodeSplit => n += 1,  // -1 point +2 places
            DoublePointClass::NodeNonsplit => n -= 1,
            DoublePointClass::Cusp => {}
            DoublePointClass::Other => {
                return Err(CountError::Unsupported(format!(
                    "singular point ({}, {}, {}) is neither a node nor a cusp",
                    ext.render(&pt[0]),
                    ext.render(&pt[1]),
                    ext.render(&pt[2]),
                )));
            }
        }
    }
    Ok(CountRecord {
        model: String::new(),
        k: ext.k(),
        n: n as u64,
        strategy: "smooth-corrected".into(),
        elapsed_ms: start.elapsed().as_millis(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_poly;

    fn f3() -> Field {
        Field::new(3, 1).unwrap()
    }

    fn curve(text: &str) -> PlaneCurve {
        let f = f3();
        PlaneCurve::new(parse_poly(text, &["x", "y", "z"], &f).unwrap()).unwrap()
    }

    fn reference_net() -> QuadricNet {
        let f = f3();
        let vars = ["x1", "x2", "x3", "x4", "x5"];
        let q1 = parse_poly("2*x1*x2+x3*x2+x3^2-x4^2", &vars, &f).unwrap();
        let q2 = parse_poly("x5*x1-x4*x2", &vars, &f).unwrap();
        let q3 = parse_poly("x1^2+x1*x2-x3^2+x5^2", &vars, &f).unwrap();
        QuadricNet::new(q1, q2, q3).unwrap()
    }

    #[test]
    fn plane_count_line_and_conic() {
        let line = curve("x");
        let conic = curve("x^2+y^2+z^2");
        for k in 1..=4u32 {
            let ext = Field::new(3, k).unwrap();
            let q = ext.q();
            assert_eq!(count_plane(&line, &ext, DEFAULT_BUDGET).unwrap().n, q + 1);
            assert_eq!(count_plane(&conic, &ext, DEFAULT_BUDGET).unwrap().n, q + 1);
        }
    }

    #[test]
    fn plane_count_generic_path_agrees_with_tables() {
        let c = curve("x^3*y+y^3*z+z^3*x");
        for k in 1..=2u32 {
            let ext = Field::new(3, k).unwrap();
            let sf = SmallField::build(&ext).unwrap();
            let lifted = c.lift(&ext).unwrap();
            assert_eq!(
                count_plane_tables(&lifted, &sf),
                count_plane_generic(&lifted, &ext)
            );
        }
    }

    #[test]
    fn plane_count_nodal_cubic_matches_parametrization() {
        // y²z − x³ − x²z: affine y² = x²(x+1), one split node at the origin.
        // The parametrization x = t²−1, y = t(t²−1) plus the flex at
        // infinity covers the projective curve; over F_3 the four values
        // t = 0, 1, 2, ∞ land on three distinct plane points.
        let c = curve("y^2*z-x^3-x^2*z");
        let f = f3();
        let mut images: Vec<(u64, u64)> = Vec::new();
        for t in 0..3u64 {
            let t = f.from_u64(t);
            let x = f.sub(&f.mul(&t, &t), &f.one());
            let y = f.mul(&t, &x);
            let pair = (f.code(&x), f.code(&y));
            if !images.contains(&pair) {
                images.push(pair);
            }
        }
        assert_eq!(images.len(), 2); // t=1 and t=2 collide at the node
        let ext = f3();
        let rec = count_plane(&c, &ext, DEFAULT_BUDGET).unwrap();
        assert_eq!(rec.n, 3); // 2 affine + 1 at infinity
        let smooth = smooth_count(&c, &ext, DEFAULT_BUDGET).unwrap();
        assert_eq!(smooth.n, 4); // = |P¹(F_3)|, the parametrization count
    }

    #[test]
    fn plane_counts_of_sextic_model() {
        let c = curve("x^4*z^2+x^3*y^3-x^2*z^4-x*y^5+y^5*z+2*y*z^5");
        let expected = [13u64, 15, 25];
        for (i, want) in expected.iter().enumerate() {
            let ext = Field::new(3, i as u32 + 1).unwrap();
            let got = count_plane(&c, &ext, DEFAULT_BUDGET).unwrap();
            assert_eq!(got.n, *want, "k = {}", i + 1);
        }
    }

    #[test]
    fn plane_counts_of_weierstrass_cubic() {
        // y² = x³ − x + 1 homogenized; one smooth point at infinity
        let c = curve("y^2*z-x^3+x*z^2-z^3");
        let expected = [7u64, 7, 28, 91];
        for (i, want) in expected.iter().enumerate() {
            let ext = Field::new(3, i as u32 + 1).unwrap();
            let got = count_plane(&c, &ext, DEFAULT_BUDGET).unwrap();
            assert_eq!(got.n, *want, "k = {}", i + 1);
        }
        assert!(is_smooth_plane(&c).unwrap().smooth);
    }

    #[test]
    fn budget_refusal_reports_requirement() {
        let c = curve("x^2+y^2+z^2");
        let ext = Field::new(3, 4).unwrap();
        match count_plane(&c, &ext, 10) {
            Err(CountError::Budget { required, budget }) => {
                assert_eq!(budget, 10);
                assert!(required > 10);
            }
            other => panic!("expected budget refusal, got {other:?}"),
        }
    }

    #[test]
    fn net_counts_match_known_values() {
        let net = reference_net();
        let expected = [13u64, 15, 22, 59, 263];
        for (i, want) in expected.iter().enumerate() {
            let k = i as u32 + 1;
            let ext = Field::new(3, k).unwrap();
            let got = count_net(&net, &ext, NetStrategy::Eliminate, DEFAULT_BUDGET).unwrap();
            assert_eq!(got.n, *want, "eliminate, k = {k}");
            if k <= 2 {
                let naive = count_net(&net, &ext, NetStrategy::Naive, DEFAULT_BUDGET).unwrap();
                assert_eq!(naive.n, *want, "naive, k = {k}");
            }
        }
    }

    #[test]
    fn net_count_diagonal_example() {
        // x1² = x2² = x3² = 0 leaves the line x1 = x2 = x3 = 0, q+1 points
        let f = f3();
        let vars = ["x1", "x2", "x3", "x4", "x5"];
        let net = QuadricNet::new(
            parse_poly("x1^2", &vars, &f).unwrap(),
            parse_poly("x2^2", &vars, &f).unwrap(),
            parse_poly("x3^2", &vars, &f).unwrap(),
        )
        .unwrap();
        for k in 1..=2u32 {
            let ext = Field::new(3, k).unwrap();
            let got = count_net(&net, &ext, NetStrategy::Eliminate, DEFAULT_BUDGET).unwrap();
            assert_eq!(got.n, ext.q() + 1);
            let naive = count_net(&net, &ext, NetStrategy::Naive, DEFAULT_BUDGET).unwrap();
            assert_eq!(naive.n, ext.q() + 1);
        }
    }

    #[test]
    fn net_strategies_agree_on_random_nets() {
        let f = f3();
        let mut state = 0x2468_ace0_1357_9bdfu64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) % 3
        };
        let mut built = 0;
        let mut attempts = 0;
        while built < 20 && attempts < 200 {
            attempts += 1;
            let mut forms = Vec::new();
            for j in 0..3 {
                let mut q = MultiPoly::zero(&f, 5);
                for i in 0..5 {
                    for l in i..5 {
                        // force an elimination plan: first quadric linear in x1
                        if j == 0 && i == 0 && l == 0 {
                            continue;
                        }
                        let c = f.from_u64(next());
                        if c.is_zero() {
                            continue;
                        }
                        let mut m = crate::poly::Mono(vec![0; 5]);
                        m.0[i] += 1;
                        m.0[l] += 1;
                        q.add_term(m, c);
                    }
                }
                forms.push(q);
            }
            let net = match QuadricNet::new(
                forms[0].clone(),
                forms[1].clone(),
                forms[2].clone(),
            ) {
                Ok(n) => n,
                Err(_) => continue, // a zero quadric was drawn
            };
            built += 1;
            for k in 1..=2u32 {
                let ext = Field::new(3, k).unwrap();
                let a = count_net(&net, &ext, NetStrategy::Naive, DEFAULT_BUDGET).unwrap();
                let b = count_net(&net, &ext, NetStrategy::Eliminate, DEFAULT_BUDGET).unwrap();
                assert_eq!(a.n, b.n, "net {built}, k = {k}");
            }
        }
        assert_eq!(built, 20);
    }

    #[test]
    fn net_count_invariant_under_coordinate_change() {
        let f = f3();
        let net = reference_net();
        // a specific invertible change of coordinates on P⁴
        let m: [[i64; 5]; 5] = [
            [1, 1, 0, 0, 2],
            [0, 1, 0, 0, 0],
            [2, 0, 1, 1, 0],
            [0, 0, 0, 1, 0],
            [1, 0, 0, 0, 1],
        ];
        let subs: Vec<MultiPoly> = (0..5)
            .map(|i| {
                let mut s = MultiPoly::zero(&f, 5);
                for (j, row) in m.iter().enumerate() {
                    let term = MultiPoly::var(&f, 5, j).scale(&f.from_i64(row[i]));
                    s = s.add(&term);
                }
                s
            })
            .collect();
        let moved = QuadricNet::new(
            net.forms[0].compose(&subs).unwrap(),
            net.forms[1].compose(&subs).unwrap(),
            net.forms[2].compose(&subs).unwrap(),
        )
        .unwrap();
        for k in 1..=2u32 {
            let ext = Field::new(3, k).unwrap();
            let a = count_net(&net, &ext, NetStrategy::Naive, DEFAULT_BUDGET).unwrap();
            let b = count_net(&moved, &ext, NetStrategy::Naive, DEFAULT_BUDGET).unwrap();
            assert_eq!(a.n, b.n, "k = {k}");
        }
    }

    #[test]
    fn singular_points_of_reference_curves() {
        let f = f3();
        // nodal cubic: exactly the origin of the z-chart
        let nodal = curve("y^2*z-x^3-x^2*z");
        let pts = singular_points_plane(&nodal, &f, DEFAULT_BUDGET).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(
            (f.code(&pts[0][0]), f.code(&pts[0][1]), f.code(&pts[0][2])),
            (0, 0, 1)
        );
        // the plane quartic: singular (its geometric genus drops to 2)
        let quartic = curve("y^3*z+y^2*z^2-x*y^3+x^4+x^3*y-x^2*z^2");
        assert!(!singular_points_plane(&quartic, &f, DEFAULT_BUDGET)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn quintic_model_is_smooth() {
        let f = f3();
        let affine = parse_poly(
            "-x^3+y^2*x-y^2-x^4+x+x^3*y^2-y^4*x+y^4",
            &["x", "y", "z"],
            &f,
        )
        .unwrap();
        let quintic = PlaneCurve::new(affine.homogenize(2, 5).unwrap()).unwrap();
        for k in 1..=3u32 {
            let ext = Field::new(3, k).unwrap();
            assert!(
                singular_points_plane(&quintic, &ext, DEFAULT_BUDGET)
                    .unwrap()
                    .is_empty(),
                "k = {k}"
            );
        }
        let report = is_smooth_plane(&quintic).unwrap();
        assert!(report.smooth, "{}", report.detail);
    }

    #[test]
    fn enumeration_and_pipeline_agree() {
        let cases = [
            "y^2*z-x^3-x^2*z",
            "y^3*z+y^2*z^2-x*y^3+x^4+x^3*y-x^2*z^2",
            "x^4*z^2+x^3*y^3-x^2*z^4-x*y^5+y^5*z+2*y*z^5",
            "x^2+y^2+z^2",
        ];
        for text in cases {
            let c = curve(text);
            for k in 1..=2u32 {
                let ext = Field::new(3, k).unwrap();
                let a = singular_points_enumeration(&c, &ext).unwrap();
                let b = singular_points_pipeline(&c, &ext).unwrap();
                assert_eq!(a, b, "curve {text}, k = {k}");
            }
        }
    }

    #[test]
    fn smoothness_verdicts() {
        assert!(is_smooth_plane(&curve("x^2+y^2+z^2")).unwrap().smooth);
        let nodal = is_smooth_plane(&curve("y^2*z-x^3-x^2*z")).unwrap();
        assert!(!nodal.smooth);
        let w = nodal.witness.expect("rational witness");
        let f = f3();
        assert_eq!((f.code(&w[0]), f.code(&w[1]), f.code(&w[2])), (0, 0, 1));
        // the sextic model is singular
        let sextic = curve("x^4*z^2+x^3*y^3-x^2*z^4-x*y^5+y^5*z+2*y*z^5");
        assert!(!is_smooth_plane(&sextic).unwrap().smooth);
        // a p-th power is rejected as singular everywhere
        let cube = curve("x^3+y^3");
        assert!(!is_smooth_plane(&cube).unwrap().smooth);
    }

    #[test]
    fn jacobian_ranks_on_the_net() {
        let net = reference_net();
        for k in 1..=3u32 {
            let ext = Field::new(3, k).unwrap();
            let pts = net_points(&net, &ext, DEFAULT_BUDGET).unwrap();
            let expected = [13, 15, 22][k as usize - 1];
            assert_eq!(pts.len(), expected);
            for p in &pts {
                assert_eq!(jacobian_rank_at(&net, p, &ext).unwrap(), 3);
            }
        }
        // degenerate net: all partials vanish at (0:0:0:1:0)
        let f = f3();
        let vars = ["x1", "x2", "x3", "x4", "x5"];
        let degenerate = QuadricNet::new(
            parse_poly("x1^2", &vars, &f).unwrap(),
            parse_poly("x1*x2", &vars, &f).unwrap(),
            parse_poly("x1*x3", &vars, &f).unwrap(),
        )
        .unwrap();
        let e4 = vec![f.zero(), f.zero(), f.zero(), f.one(), f.zero()];
        assert_eq!(jacobian_rank_at(&degenerate, &e4, &f).unwrap(), 0);
        // a point off the net errors
        let net = reference_net();
        let off = vec![f.one(), f.zero(), f.zero(), f.zero(), f.zero()];
        assert!(matches!(
            jacobian_rank_at(&net, &off, &f),
            Err(CountError::NotOnNet)
        ));
    }

    #[test]
    fn double_point_classification() {
        let f = f3();
        let origin = [f.zero(), f.zero(), f.one()];
        // split node: tangent cone y² − x²
        let nodal = curve("y^2*z-x^3-x^2*z");
        assert_eq!(
            classify_double_point(&nodal, &origin, &f).unwrap(),
            DoublePointClass::NodeSplit
        );
        // cusp: tangent cone y², cubic term x³ along the double direction
        let cuspidal = curve("y^2*z-x^3");
        assert_eq!(
            classify_double_point(&cuspidal, &origin, &f).unwrap(),
            DoublePointClass::Cusp
        );
        // nonsplit node: tangent cone x² + y², irreducible over F_3
        let nonsplit = curve("x^2*z+y^2*z+x^3");
        assert_eq!(
            classify_double_point(&nonsplit, &origin, &f).unwrap(),
            DoublePointClass::NodeNonsplit
        );
        // the same point splits over F_9
        let f9 = Field::new(3, 2).unwrap();
        let origin9 = [f9.zero(), f9.zero(), f9.one()];
        assert_eq!(
            classify_double_point(&nonsplit, &origin9, &f9).unwrap(),
            DoublePointClass::NodeSplit
        );
        // tangent cone a double line with vanishing cubic part: other
        let tacnode = curve("y^2*z^2-x^4");
        assert_eq!(
            classify_double_point(&tacnode, &origin, &f).unwrap(),
            DoublePointClass::Other
        );
        // non-singular input errors
        let conic = curve("x^2+y^2+z^2");
        let on = [f.one(), f.one(), f.one()];
        assert!(matches!(
            classify_double_point(&conic, &on, &f),
            Err(CountError::NotSingular)
        ));
    }

    #[test]
    fn corrected_counts_of_the_quartic() {
        // plane counts 7, 9; one split node lifts them by one place each
        let quartic = curve("y^3*z+y^2*z^2-x*y^3+x^4+x^3*y-x^2*z^2");
        let expected_plane = [7u64, 9];
        let expected_smooth = [8u64, 10];
        for k in 1..=2u32 {
            let ext = Field::new(3, k).unwrap();
            let plane = count_plane(&quartic, &ext, DEFAULT_BUDGET).unwrap();
            assert_eq!(plane.n, expected_plane[k as usize - 1], "plane k = {k}");
            let smooth = smooth_count(&quartic, &ext, DEFAULT_BUDGET).unwrap();
            assert_eq!(smooth.n, expected_smooth[k as usize - 1], "smooth k = {k}");
        }
        // the singular point is a split node
        let f = f3();
        let pts = singular_points_plane(&quartic, &f, DEFAULT_BUDGET).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(
            classify_double_point(&quartic, &pts[0], &f).unwrap(),
            DoublePointClass::NodeSplit
        );
    }

    #[test]
    fn smooth_count_refuses_unclassifiable_points() {
        let tacnode = curve("y^2*z^2-x^4");
        let f = f3();
        assert!(matches!(
            smooth_count(&tacnode, &f, DEFAULT_BUDGET),
            Err(CountError::Unsupported(_))
        ));
    }

    #[test]
    fn smooth_curve_needs_no_correction() {
        let conic = curve("x^2+y^2+z^2");
        for k in 1..=2u32 {
            let ext = Field::new(3, k).unwrap();
            let a = count_plane(&conic, &ext, DEFAULT_BUDGET).unwrap();
            let b = smooth_count(&conic, &ext, DEFAULT_BUDGET).unwrap();
            assert_eq!(a.n, b.n);
        }
    }

    #[test]
    fn projective_space_sizes_match_enumeration() {
        for k in 1..=4u32 {
            let ext = Field::new(3, k).unwrap();
            for n in 0..=4usize {
                if ext.proj_count(n) > 5_000_000 {
                    continue;
                }
                let counted = ext.proj_points(n).count() as u64;
                assert_eq!(counted, ext.proj_count(n), "q = {}, n = {n}", ext.q());
            }
        }
    }

    #[test]
    fn gram_matrices_reproduce_forms() {
        let net = reference_net();
        let f = f3();
        for j in 0..3 {
            let g = net.gram(j);
            // rebuild v ↦ vᵀ G v and compare with the stored form
            let mut rebuilt = MultiPoly::zero(&f, 5);
            for i in 0..5 {
                for l in 0..5 {
                    let mut m = crate::poly::Mono(vec![0; 5]);
                    m.0[i] += 1;
                    m.0[l] += 1;
                    rebuilt.add_term(m, g[i][l].clone());
                }
            }
            assert_eq!(&rebuilt, &net.forms()[j]);
        }
    }
}
