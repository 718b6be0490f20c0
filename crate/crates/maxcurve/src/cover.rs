//! Exact verification of a rational map from a plane sextic onto an
//! elliptic cubic: pullback divisibility certificates, quotient-ideal
//! membership, fiber enumeration with a base-point resolution pass, and a
//! ramification census checked against the Riemann–Hurwitz budget.

use crate::counting::{self, CountError, PlaneCurve, QuadricNet};
use crate::gf::{Elem, Field, FieldError};
use crate::poly::uni::{roots_in, UniPolyF};
use crate::poly::{pullback, MultiPoly, PolyError, RationalMap};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum CoverError {
    #[error("map undefined along curve: component denominator vanishes on it")]
    UndefinedAlongCurve,
    #[error("point does not lie on the target curve")]
    NotOnTarget,
    #[error("input must be homogeneous of degree {expected}, found {found:?}")]
    WrongDegree { expected: u32, found: Option<u32> },
    #[error("operation needs {required} evaluations, budget is {budget}")]
    Budget { required: u64, budget: u64 },
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Divisibility certificate produced by `verify_cover`.
#[derive(Debug, Clone)]
pub struct CoverCertificate {
    /// Whether the pulled-back target relation is divisible by the source.
    pub holds: bool,
    /// Total degree of the exact quotient when divisibility holds.
    pub quotient_degree: Option<u32>,
}

/// Pull the target relation back through the map and test exact
/// divisibility of the cleared numerator by the source polynomial.
pub fn verify_cover(
    source_affine: &MultiPoly,
    fractions: &[(MultiPoly, MultiPoly); 2],
    target_affine: &MultiPoly,
) -> Result<CoverCertificate, CoverError> {
    for (_, den) in fractions {
        if den.divide_exact(source_affine).is_some() {
            return Err(CoverError::UndefinedAlongCurve);
        }
    }
    let map = RationalMap {
        components: fractions.to_vec(),
    };
    let (numer, _) = pullback(target_affine, &map)?;
    match numer.divide_exact(source_affine) {
        Some(quotient) => {
            // the certificate must re-multiply to the pulled-back numerator
            let audit = quotient.mul(source_affine);
            debug_assert!(audit.sub(&numer).is_zero());
            if !audit.sub(&numer).is_zero() {
                return Err(CoverError::Unsupported(
                    "divisibility certificate failed to re-multiply".into(),
                ));
            }
            Ok(CoverCertificate {
                holds: true,
                quotient_degree: quotient.total_degree(),
            })
        }
        None => Ok(CoverCertificate {
            holds: false,
            quotient_degree: None,
        }),
    }
}

/// True iff a homogeneous quartic in five variables lies in the degree-4
/// graded piece of the ideal generated by the net's three quadrics,
/// decided by exact linear algebra on the 45 monomial multiples inside
/// the 70-dimensional quartic space.
pub fn quotient_membership(quartic: &MultiPoly, net: &QuadricNet) -> Result<bool, CoverError> {
    if quartic.nvars() != 5 {
        return Err(CoverError::Unsupported(
            "quartic must use the net's five variables".into(),
        ));
    }
    if quartic.homogeneous_degree() != Some(4) {
        return Err(CoverError::WrongDegree {
            expected: 4,
            found: quartic.homogeneous_degree(),
        });
    }
    let field = net.field().clone();
    // index all degree-4 monomials in 5 variables
    let mut index: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    let mut expos: Vec<Vec<u32>> = Vec::new();
    gen_exponents(5, 4, &mut vec![], &mut expos);
    for (i, e) in expos.iter().enumerate() {
        index.insert(e.clone(), i);
    }
    let dim = expos.len();
    let to_row = |p: &MultiPoly| -> Vec<Elem> {
        let mut row = vec![field.zero(); dim];
        for (m, c) in p.terms() {
            row[index[&m.0]] = c.clone();
        }
        row
    };
    // 45 generators: degree-2 monomial times each quadric
    let mut deg2: Vec<Vec<u32>> = Vec::new();
    gen_exponents(5, 2, &mut vec![], &mut deg2);
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    for form in net.forms() {
        for e in &deg2 {
            let mut mono = MultiPoly::constant(&field, 5, &field.one());
            for (v, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    mono = mono.mul(&MultiPoly::var(&field, 5, v));
                }
            }
            rows.push(to_row(&mono.mul(form)));
        }
    }
    let base_rank = counting::matrix_rank(&field, rows.clone());
    rows.push(to_row(quartic));
    let full_rank = counting::matrix_rank(&field, rows);
    Ok(full_rank == base_rank)
}

/// All exponent vectors of the given total degree.
fn gen_exponents(nvars: usize, degree: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if prefix.len() + 1 == nvars {
        let used: u32 = prefix.iter().sum();
        let mut e = prefix.clone();
        e.push(degree - used);
        out.push(e);
        return;
    }
    let used: u32 = prefix.iter().sum();
    for k in 0..=(degree - used) {
        prefix.push(k);
        gen_exponents(nvars, degree, prefix, out);
        prefix.pop();
    }
}

/// True iff the substitution y ↦ −y fixes the affine model up to scalar.
pub fn involution_check(model: &MultiPoly) -> Result<bool, CoverError> {
    if model.nvars() != 2 {
        return Err(CoverError::Unsupported(
            "involution check expects an affine model in two variables".into(),
        ));
    }
    let field = model.field().clone();
    let x = MultiPoly::var(&field, 2, 0);
    let minus_y = MultiPoly::var(&field, 2, 1).neg();
    let flipped = model.compose(&[x, minus_y])?;
    Ok(flipped.proportionality(model).is_some())
}

/// C(13,1) + C(13,2) + C(13,3): the divisor-search possibility count.
pub fn choose_377() -> u64 {
    choose(13, 1) + choose(13, 2) + choose(13, 3)
}

/// Binomial coefficient for small arguments.
pub fn choose(n: u64, k: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

/// A plane-to-plane cover: homogenized projective representations of the
/// affine fractional map, with extra representations solved for so that
/// base points of the canonical one can still be evaluated.
pub struct CoverMap {
    source: PlaneCurve,
    target: PlaneCurve,
    reps: Vec<[MultiPoly; 3]>,
    // images at rational unibranch singular points (cusps), computed by
    // formal branch expansion; keys and values are normalized coordinate
    // codes in the prime field
    assigned: Vec<([u64; 3], [u64; 3])>,
}

/// Embed an affine polynomial in (x, y) into three variables.
fn embed3(p: &MultiPoly) -> Result<MultiPoly, PolyError> {
    let field = p.field().clone();
    p.compose(&[MultiPoly::var(&field, 3, 0), MultiPoly::var(&field, 3, 1)])
}

impl CoverMap {
    /// Build the cover from an affine source sextic, the two coordinate
    /// fractions, and the affine target relation. The base field must be
    /// a prime field.
    pub fn new(
        source_affine: &MultiPoly,
        fractions: &[(MultiPoly, MultiPoly); 2],
        target_affine: &MultiPoly,
    ) -> Result<CoverMap, CoverError> {
        let field = source_affine.field().clone();
        if field.k() != 1 || field.p() > 251 {
            return Err(CoverError::Unsupported(
                "cover evaluation requires a small prime base field".into(),
            ));
        }
        for (_, den) in fractions {
            if den.divide_exact(source_affine).is_some() {
                return Err(CoverError::UndefinedAlongCurve);
            }
        }
        let src_deg = source_affine
            .total_degree()
            .ok_or_else(|| CoverError::Unsupported("source polynomial is zero".into()))?;
        let tgt_deg = target_affine
            .total_degree()
            .ok_or_else(|| CoverError::Unsupported("target polynomial is zero".into()))?;
        let source = PlaneCurve::new(embed3(source_affine)?.homogenize(2, src_deg)?)?;
        let target = PlaneCurve::new(embed3(target_affine)?.homogenize(2, tgt_deg)?)?;
        // canonical projective representation over the common denominator:
        // (n1·d2 : n2·d1 : d1·d2), homogenized to a common degree
        let (n1, d1) = &fractions[0];
        let (n2, d2) = &fractions[1];
        let k_affine = [n1.mul(d2), n2.mul(d1), d1.mul(d2)];
        let kd = k_affine
            .iter()
            .map(|p| p.total_degree().unwrap_or(0))
            .max()
            .unwrap();
        let mut canonical: Vec<MultiPoly> = Vec::new();
        for p in &k_affine {
            canonical.push(embed3(p)?.homogenize(2, kd)?);
        }
        let canonical: [MultiPoly; 3] = [
            canonical[0].clone(),
            canonical[1].clone(),
            canonical[2].clone(),
        ];
        let mut reps = vec![canonical.clone()];
        // every representation is forced to vanish at a singular point of
        // the plane model, so those are excluded from the resolution probe
        // and handled by branch expansion below
        let singular = counting::singular_points_plane(&source, &field, 10_000_000)?;
        let sing_codes: Vec<[u64; 3]> = singular
            .iter()
            .map(|p| [field.code(&p[0]), field.code(&p[1]), field.code(&p[2])])
            .collect();
        // extra representations of the same map, found by linear algebra:
        // (A, B, C) of degree d with A·K_j − B·K_i ≡ 0 mod the source for
        // all pairs; they agree with the map wherever they do not vanish
        let source_poly = source.equation().clone();
        for d in [src_deg + 2, src_deg + 3] {
            let extra = alternate_representations(&source_poly, &canonical, kd, d)?;
            reps.extend(extra);
            // stop as soon as every smooth rational source point resolves
            let probe = counting::plane_points(&source, &field, 10_000_000)?;
            let lifted = lift_reps(&reps, &field)?;
            if probe.iter().all(|p| {
                let codes = [field.code(&p[0]), field.code(&p[1]), field.code(&p[2])];
                sing_codes.contains(&codes) || eval_reps(&lifted, &field, p).is_some()
            }) {
                break;
            }
        }
        // a cusp is unibranch, so the map extends to it on the smooth
        // model; compute the image exactly along the formal branch
        let mut assigned = Vec::new();
        for pt in &singular {
            if counting::classify_double_point(&source, pt, &field)?
                == counting::DoublePointClass::Cusp
            {
                let branch = cusp_branch(&source, pt, 96)?;
                let img = branch_image(&reps, &branch)?;
                if !target.equation().eval(&img)?.is_zero() {
                    return Err(CoverError::Unsupported(
                        "branch image does not lie on the target curve".into(),
                    ));
                }
                let key = [field.code(&pt[0]), field.code(&pt[1]), field.code(&pt[2])];
                let val = [field.code(&img[0]), field.code(&img[1]), field.code(&img[2])];
                assigned.push((key, val));
            }
        }
        Ok(CoverMap {
            source,
            target,
            reps,
            assigned,
        })
    }

    pub fn source(&self) -> &PlaneCurve {
        &self.source
    }

    pub fn target(&self) -> &PlaneCurve {
        &self.target
    }

    /// Number of projective representations held (canonical + alternates).
    pub fn representation_count(&self) -> usize {
        self.reps.len()
    }

    /// Image of a source-curve point over `ext`, or None when the map
    /// has no defined value there (a non-unibranch singular point of the
    /// plane model).
    pub fn eval(&self, point: &[Elem; 3], ext: &Field) -> Result<Option<[Elem; 3]>, CoverError> {
        let lifted = lift_reps(&self.reps, ext)?;
        Ok(self.eval_lifted(&lifted, ext, point))
    }

    fn eval_lifted(
        &self,
        lifted: &[[MultiPoly; 3]],
        ext: &Field,
        point: &[Elem; 3],
    ) -> Option<[Elem; 3]> {
        if let Some(img) = eval_reps(lifted, ext, point) {
            return Some(img);
        }
        // branch-assigned image, recorded over the prime field
        let p = ext.p();
        let norm = ext.normalize_point(point)?;
        let codes = [ext.code(&norm[0]), ext.code(&norm[1]), ext.code(&norm[2])];
        if codes.iter().any(|&c| c >= p) {
            return None;
        }
        self.assigned
            .iter()
            .find(|(key, _)| *key == codes)
            .map(|(_, val)| [ext.from_u64(val[0]), ext.from_u64(val[1]), ext.from_u64(val[2])])
    }

    /// Source points over `ext` where the map has no defined value: the
    /// non-unibranch singular points of the plane model. These belong to
    /// no fiber at the plane level.
    pub fn undefined_points(
        &self,
        ext: &Field,
        budget: u64,
    ) -> Result<Vec<[Elem; 3]>, CoverError> {
        let sources = counting::plane_points(&self.source, ext, budget)?;
        let lifted = lift_reps(&self.reps, ext)?;
        Ok(sources
            .into_iter()
            .filter(|p| self.eval_lifted(&lifted, ext, p).is_none())
            .collect())
    }

    /// All source-curve points over `ext` mapping to the given target
    /// point. Points where the map has no defined value belong to no
    /// fiber and are excluded; `undefined_points` lists them.
    pub fn fiber(
        &self,
        target_point: &[Elem; 3],
        ext: &Field,
        budget: u64,
    ) -> Result<Vec<[Elem; 3]>, CoverError> {
        let tgt = self.target.lift(ext)?;
        if !tgt.equation().eval(target_point)?.is_zero() {
            return Err(CoverError::NotOnTarget);
        }
        let want = ext
            .normalize_point(target_point)
            .ok_or(CoverError::NotOnTarget)?;
        let sources = counting::plane_points(&self.source, ext, budget)?;
        let lifted = lift_reps(&self.reps, ext)?;
        let mut out = Vec::new();
        for p in &sources {
            if let Some(img) = self.eval_lifted(&lifted, ext, p) {
                if img[..] == want[..] {
                    out.push(p.clone());
                }
            }
        }
        Ok(out)
    }

    /// Fiber census over every target point defined over F_{p^k}, k ≤
    /// k_max, with fiber sizes recorded over the extensions F_{p^{k·j}}
    /// (j ≤ 3) that fit the enumeration budget.
    pub fn fiber_census(
        &self,
        k_max: u32,
        genus_source: u32,
        genus_target: u32,
        degree: u32,
        budget: u64,
    ) -> Result<RamificationReport, CoverError> {
        if k_max == 0 || k_max > 6 {
            return Err(CoverError::Unsupported(
                "census supports 1 ≤ k_max ≤ 6".into(),
            ));
        }
        let p = self.source.field().p();
        // extensions worth enumerating: k·j for j ≤ 3, capped to keep
        // the point enumeration affordable
        let mut exts: Vec<u32> = (1..=k_max)
            .flat_map(|k| (1..=3u32).map(move |j| k * j))
            .filter(|&m| m <= 8)
            .collect();
        exts.sort_unstable();
        exts.dedup();

        let mut used: Vec<u32> = Vec::new();
        let mut skipped: Vec<u32> = Vec::new();
        let mut unresolved: Vec<UnresolvedNote> = Vec::new();
        // closed-point key → (m → fiber size)
        let mut fibers: BTreeMap<PointKey, BTreeMap<u32, u32>> = BTreeMap::new();
        // target closed points seen, with definition degree ≤ k_max
        let mut targets: BTreeMap<PointKey, ()> = BTreeMap::new();

        for &m in &exts {
            let ext = Field::new(p, m)?;
            let tgt_pts = match counting::plane_points(&self.target.lift(&ext)?, &ext, budget) {
                Ok(v) => v,
                Err(CountError::Budget { .. }) => {
                    skipped.push(m);
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            let src_pts = match counting::plane_points(&self.source, &ext, budget) {
                Ok(v) => v,
                Err(CountError::Budget { .. }) => {
                    skipped.push(m);
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            used.push(m);
            for t in &tgt_pts {
                let d = definition_degree(&ext, t);
                if d <= k_max {
                    let key = closed_point_key(&ext, t, d)?;
                    targets.entry(key.clone()).or_insert(());
                    fibers.entry(key).or_default().entry(m).or_insert(0);
                }
            }
            let lifted = lift_reps(&self.reps, &ext)?;
            let mut miss = 0u32;
            for s in &src_pts {
                match self.eval_lifted(&lifted, &ext, s) {
                    Some(img) => {
                        let d = definition_degree(&ext, &img);
                        let key = closed_point_key(&ext, &img, d)?;
                        *fibers.entry(key).or_default().entry(m).or_insert(0) += 1;
                    }
                    None => miss += 1,
                }
            }
            if miss > 0 {
                unresolved.push(UnresolvedNote { m, count: miss });
            }
        }

        let mut reports: Vec<TargetPointReport> = Vec::new();
        for (key, _) in &targets {
            let sizes = &fibers[key];
            let d = key.degree;
            let fiber_sizes: Vec<(u32, u32)> = used
                .iter()
                .filter(|&&m| m % d == 0 && m / d <= 3)
                .map(|&m| (m, *sizes.get(&m).unwrap_or(&0)))
                .collect();
            let s_at = |j: u32| -> Option<u32> {
                fiber_sizes
                    .iter()
                    .find(|(m, _)| *m == d * j)
                    .map(|(_, s)| *s)
            };
            let (apparent, wild, conclusive) = classify_fiber(degree, p, s_at(1), s_at(2));
            reports.push(TargetPointReport {
                degree: d,
                coords: key.coords,
                fiber_sizes,
                apparent_indices: apparent,
                wild,
                conclusive,
            });
        }

        // Riemann–Hurwitz budget line
        let required = 2 * genus_source as i64 - 2
            - degree as i64 * (2 * genus_target as i64 - 2);
        let mut tame_point_sum = 0i64;
        let mut tame_weighted_sum = 0i64;
        let mut wild_present = false;
        for r in &reports {
            if !r.conclusive {
                continue;
            }
            if r.wild {
                wild_present = true;
            }
            for &e in &r.apparent_indices {
                if e >= 2 && e as u64 % p != 0 {
                    tame_point_sum += e as i64 - 1;
                    tame_weighted_sum += (e as i64 - 1) * r.degree as i64;
                }
            }
        }
        // wild ramification forces the tame accounting to undershoot the
        // required different degree; a census this partial can never
        // certify more than inequality
        let consistent = if wild_present {
            tame_weighted_sum < required
        } else {
            tame_weighted_sum <= required
        };
        Ok(RamificationReport {
            cover_degree: degree,
            targets: reports,
            extensions_used: used,
            extensions_skipped: skipped,
            unresolved,
            riemann_hurwitz: RhLine {
                required_different_degree: required,
                tame_point_sum,
                tame_weighted_sum,
                wild_present,
                consistent,
            },
        })
    }
}

/// Apparent ramification partition of a degree-3 fiber from rational
/// fiber sizes over the first two relative extensions.
fn classify_fiber(
    degree: u32,
    p: u64,
    s1: Option<u32>,
    s2: Option<u32>,
) -> (Vec<u32>, bool, bool) {
    if degree != 3 {
        return (Vec::new(), false, false);
    }
    let smax = s1.iter().chain(s2.iter()).copied().max();
    match (s1, s2, smax) {
        (_, _, Some(3)) => (vec![1, 1, 1], false, true),
        (_, _, Some(2)) => (vec![2, 1], false, true),
        // no rational fiber point at all: the only degree-3 partition
        // without a residue-degree ≤ 2 part is a single unramified
        // degree-3 point
        (Some(0), _, _) => (vec![1, 1, 1], false, true),
        // one stable rational point: ramification index 3 (wild iff p=3)
        (Some(1), Some(1), _) => (vec![3], p == 3, true),
        _ => (Vec::new(), false, false),
    }
}

/// Key identifying a closed point independently of the ambient field:
/// definition degree plus canonical codes over the canonical field of
/// that degree, minimized over the Frobenius orbit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct PointKey {
    degree: u32,
    coords: [u64; 3],
}

/// Smallest d dividing the field degree with Frob^d fixing the point.
fn definition_degree(ext: &Field, point: &[Elem; 3]) -> u32 {
    let k = ext.k();
    for d in 1..=k {
        if k % d != 0 {
            continue;
        }
        let moved: Vec<Elem> = point.iter().map(|c| ext.frobenius(c, d)).collect();
        if moved[..] == point[..] {
            return d;
        }
    }
    k
}

/// Canonical cross-field key for a point of definition degree d.
fn closed_point_key(ext: &Field, point: &[Elem; 3], d: u32) -> Result<PointKey, CoverError> {
    let p = ext.p();
    let coords_in_sub: Vec<Elem>;
    let sub: Field;
    if d == ext.k() {
        sub = ext.clone();
        coords_in_sub = point.to_vec();
    } else if d == 1 {
        // prime-subfield coordinates have degree-zero codes already
        sub = Field::new(p, 1)?;
        coords_in_sub = point.iter().map(|c| sub.from_u64(ext.code(c))).collect();
    } else {
        sub = Field::new(p, d)?;
        // embed the canonical F_{p^d} by a root of its modulus
        let modulus = UniPolyF::from_coeffs(
            &Field::new(p, 1)?,
            sub.modulus()
                .iter()
                .map(|&c| Field::new(p, 1).unwrap().from_u64(c))
                .collect(),
        );
        let roots = roots_in(&modulus, ext)?;
        let r = roots
            .first()
            .ok_or_else(|| {
                CoverError::Unsupported("canonical modulus has no root in extension".into())
            })?
            .clone();
        // express each coordinate in the basis 1, r, …, r^{d−1} over F_p
        let k = ext.k() as usize;
        let digits = |e: &Elem| -> Vec<u8> {
            let mut code = ext.code(e);
            let mut v = vec![0u8; k];
            for slot in v.iter_mut() {
                *slot = (code % p) as u8;
                code /= p;
            }
            v
        };
        let mut cols: Vec<Vec<u8>> = Vec::new();
        let mut rp = ext.one();
        for _ in 0..d {
            cols.push(digits(&rp));
            rp = ext.mul(&rp, &r);
        }
        let mut out = Vec::new();
        for c in point {
            let sol = solve_mod_p(p as u8, &cols, &digits(c)).ok_or_else(|| {
                CoverError::Unsupported("coordinate not in claimed subfield".into())
            })?;
            let mut acc = sub.zero();
            let g = if d == 1 {
                sub.one()
            } else {
                sub.from_code(p)
            };
            let mut gp = sub.one();
            for &ci in &sol {
                acc = sub.add(&acc, &sub.scale(&gp, ci as u64));
                gp = sub.mul(&gp, &g);
            }
            out.push(acc);
        }
        coords_in_sub = out;
    }
    // minimize over the Frobenius orbit for a canonical representative
    let mut best: Option<[u64; 3]> = None;
    let mut cur: Vec<Elem> = coords_in_sub;
    for _ in 0..d {
        let codes = [sub.code(&cur[0]), sub.code(&cur[1]), sub.code(&cur[2])];
        if best.map_or(true, |b| codes < b) {
            best = Some(codes);
        }
        cur = cur.iter().map(|c| sub.frobenius(c, 1)).collect();
    }
    Ok(PointKey {
        degree: d,
        coords: best.unwrap(),
    })
}

/// Solve Σ x_i·cols[i] = rhs over F_p; all vectors are digit vectors.
fn solve_mod_p(p: u8, cols: &[Vec<u8>], rhs: &[u8]) -> Option<Vec<u8>> {
    let nrows = rhs.len();
    let ncols = cols.len();
    let mut a: Vec<Vec<u8>> = (0..nrows)
        .map(|r| {
            let mut row: Vec<u8> = cols.iter().map(|c| c[r]).collect();
            row.push(rhs[r]);
            row
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let piv = (row..nrows).find(|&r| a[r][col] != 0);
        let piv = match piv {
            Some(x) => x,
            None => continue,
        };
        a.swap(row, piv);
        let inv = inv_mod_p(p, a[row][col]);
        for x in a[row].iter_mut() {
            *x = mul_mod_p(p, *x, inv);
        }
        for r in 0..nrows {
            if r != row && a[r][col] != 0 {
                let f = a[r][col];
                for c in 0..=ncols {
                    let t = mul_mod_p(p, f, a[row][c]);
                    a[r][c] = sub_mod_p(p, a[r][c], t);
                }
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    // consistency
    for r in row..nrows {
        if a[r][ncols] != 0 {
            return None;
        }
    }
    let mut sol = vec![0u8; ncols];
    for &(r, c) in &pivots {
        sol[c] = a[r][ncols];
    }
    Some(sol)
}

fn inv_mod_p(p: u8, a: u8) -> u8 {
    let mut x = 1u8;
    loop {
        if mul_mod_p(p, a, x) == 1 {
            return x;
        }
        x += 1;
    }
}

fn mul_mod_p(p: u8, a: u8, b: u8) -> u8 {
    ((a as u16 * b as u16) % p as u16) as u8
}

fn sub_mod_p(p: u8, a: u8, b: u8) -> u8 {
    ((a as u16 + p as u16 - b as u16) % p as u16) as u8
}

fn add_mod_p(p: u8, a: u8, b: u8) -> u8 {
    ((a as u16 + b as u16) % p as u16) as u8
}

/// Lift every representation into the evaluation field.
fn lift_reps(
    reps: &[[MultiPoly; 3]],
    ext: &Field,
) -> Result<Vec<[MultiPoly; 3]>, CoverError> {
    let mut out = Vec::new();
    for rep in reps {
        out.push([
            rep[0].lift(ext)?,
            rep[1].lift(ext)?,
            rep[2].lift(ext)?,
        ]);
    }
    Ok(out)
}

/// First representation with a nonzero value decides the image.
fn eval_reps(reps: &[[MultiPoly; 3]], ext: &Field, point: &[Elem; 3]) -> Option<[Elem; 3]> {
    for rep in reps {
        let vals: Vec<Elem> = rep
            .iter()
            .map(|c| c.eval(point).expect("arity matches"))
            .collect();
        if vals.iter().any(|v| !v.is_zero()) {
            let n = ext.normalize_point(&vals).expect("nonzero");
            return Some([n[0].clone(), n[1].clone(), n[2].clone()]);
        }
    }
    None
}

/// Degree-d homogeneous triples (A, B, C) agreeing with the canonical
/// representation on the source curve: A·K_j − B·K_i ∈ (F) for all pairs,
/// solved as an F_p nullspace.
fn alternate_representations(
    source: &MultiPoly,
    canonical: &[MultiPoly; 3],
    canon_deg: u32,
    d: u32,
) -> Result<Vec<[MultiPoly; 3]>, CoverError> {
    let field = source.field().clone();
    let p = field.p() as u8;
    let f_deg = source
        .homogeneous_degree()
        .ok_or_else(|| CoverError::Unsupported("source must be homogeneous".into()))?;
    if d + canon_deg < f_deg {
        return Ok(Vec::new());
    }
    let h_deg = d + canon_deg - f_deg;
    let dim_d = dim_homog(d);
    let dim_h = dim_homog(h_deg);
    let dim_big = dim_homog(d + canon_deg);
    let idx_d = homog_index_map(d);
    let idx_h = homog_index_map(h_deg);
    let idx_big = homog_index_map(d + canon_deg);
    let ncols = 3 * dim_d + 3 * dim_h;
    let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
    let mut rows = vec![vec![0u8; ncols]; 3 * dim_big];
    for (b, &(i, j)) in pairs.iter().enumerate() {
        let base = b * dim_big;
        // + A_i·K_j
        for (mono, col0) in &idx_d {
            for (km, kc) in canonical[j].terms() {
                let mut e = mono.clone();
                for (x, &ke) in e.iter_mut().zip(km.0.iter()) {
                    *x += ke;
                }
                let r = base + idx_big[&e];
                let c = i * dim_d + col0;
                rows[r][c] = add_mod_p(p, rows[r][c], field.code(kc) as u8);
            }
            // − A_j·K_i
            for (km, kc) in canonical[i].terms() {
                let mut e = mono.clone();
                for (x, &ke) in e.iter_mut().zip(km.0.iter()) {
                    *x += ke;
                }
                let r = base + idx_big[&e];
                let c = j * dim_d + col0;
                rows[r][c] = sub_mod_p(p, rows[r][c], field.code(kc) as u8);
            }
        }
        // − H_b·F
        for (mono, col0) in &idx_h {
            for (fm, fc) in source.terms() {
                let mut e = mono.clone();
                for (x, &fe) in e.iter_mut().zip(fm.0.iter()) {
                    *x += fe;
                }
                let r = base + idx_big[&e];
                let c = 3 * dim_d + b * dim_h + col0;
                rows[r][c] = sub_mod_p(p, rows[r][c], field.code(fc) as u8);
            }
        }
    }
    let basis = nullspace_mod_p(p, rows, ncols);
    // convert the (A, B, C) part of each null vector to polynomials
    let mut monos_d: Vec<Vec<u32>> = idx_d.keys().cloned().collect();
    monos_d.sort_by_key(|m| idx_d[m]);
    let mut out = Vec::new();
    for v in basis {
        let mut triple: Vec<MultiPoly> = Vec::new();
        let mut nonzero = false;
        for comp in 0..3 {
            let mut poly = MultiPoly::zero(&field, 3);
            for (mi, mono) in monos_d.iter().enumerate() {
                let coeff = v[comp * dim_d + mi];
                if coeff != 0 {
                    nonzero = true;
                    poly.add_term(
                        crate::poly::Mono(mono.clone()),
                        field.from_u64(coeff as u64),
                    );
                }
            }
            triple.push(poly);
        }
        if nonzero {
            out.push([triple[0].clone(), triple[1].clone(), triple[2].clone()]);
        }
    }
    Ok(out)
}

fn dim_homog(d: u32) -> usize {
    ((d + 1) * (d + 2) / 2) as usize
}

/// Deterministic index for homogeneous degree-d exponent triples.
fn homog_index_map(d: u32) -> BTreeMap<Vec<u32>, usize> {
    let mut out = BTreeMap::new();
    let mut i = 0usize;
    for e0 in 0..=d {
        for e1 in 0..=(d - e0) {
            out.insert(vec![e0, e1, d - e0 - e1], i);
            i += 1;
        }
    }
    out
}

/// Right-nullspace basis of the row system over F_p.
fn nullspace_mod_p(p: u8, mut rows: Vec<Vec<u8>>, ncols: usize) -> Vec<Vec<u8>> {
    let nrows = rows.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut row = 0usize;
    for col in 0..ncols {
        let piv = (row..nrows).find(|&r| rows[r][col] != 0);
        let piv = match piv {
            Some(x) => x,
            None => continue,
        };
        rows.swap(row, piv);
        let inv = inv_mod_p(p, rows[row][col]);
        for x in rows[row].iter_mut() {
            *x = mul_mod_p(p, *x, inv);
        }
        for r in 0..nrows {
            if r != row && rows[r][col] != 0 {
                let f = rows[r][col];
                // split borrows: copy the pivot row first
                let pivot_row = rows[row].clone();
                for c in 0..ncols {
                    let t = mul_mod_p(p, f, pivot_row[c]);
                    rows[r][c] = sub_mod_p(p, rows[r][c], t);
                }
            }
        }
        pivot_of_col[col] = Some(row);
        row += 1;
        if row == nrows {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![0u8; ncols];
        v[free] = 1;
        for c in 0..ncols {
            if let Some(r) = pivot_of_col[c] {
                // v[c] = −rows[r][free]
                v[c] = sub_mod_p(p, 0, rows[r][free]);
            }
        }
        basis.push(v);
    }
    basis
}

/// Truncated power series in t over a finite field; `c[i]` is the
/// coefficient of t^i and every series in a computation shares one
/// truncation length.
#[derive(Clone)]
struct Series {
    field: Field,
    c: Vec<Elem>,
}

impl Series {
    fn zero(field: &Field, n: usize) -> Series {
        Series {
            field: field.clone(),
            c: vec![field.zero(); n],
        }
    }

    fn constant(field: &Field, a: &Elem, n: usize) -> Series {
        let mut s = Series::zero(field, n);
        s.c[0] = a.clone();
        s
    }

    /// a·t^k truncated to length n.
    fn monomial(field: &Field, a: &Elem, k: usize, n: usize) -> Series {
        let mut s = Series::zero(field, n);
        if k < n {
            s.c[k] = a.clone();
        }
        s
    }

    fn add(&self, other: &Series) -> Series {
        let f = &self.field;
        Series {
            field: f.clone(),
            c: self
                .c
                .iter()
                .zip(&other.c)
                .map(|(a, b)| f.add(a, b))
                .collect(),
        }
    }

    fn sub(&self, other: &Series) -> Series {
        let f = &self.field;
        Series {
            field: f.clone(),
            c: self
                .c
                .iter()
                .zip(&other.c)
                .map(|(a, b)| f.sub(a, b))
                .collect(),
        }
    }

    fn mul(&self, other: &Series) -> Series {
        let f = &self.field;
        let n = self.c.len();
        let mut out = Series::zero(f, n);
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().take(n - i).enumerate() {
                if !b.is_zero() {
                    let t = f.mul(a, b);
                    out.c[i + j] = f.add(&out.c[i + j], &t);
                }
            }
        }
        out
    }

    fn scale(&self, a: &Elem) -> Series {
        let f = &self.field;
        Series {
            field: f.clone(),
            c: self.c.iter().map(|b| f.mul(a, b)).collect(),
        }
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    fn inv(&self) -> Result<Series, CoverError> {
        let f = &self.field;
        if self.c[0].is_zero() {
            return Err(CoverError::Unsupported(
                "series inverse of a non-unit".into(),
            ));
        }
        let n = self.c.len();
        let u = f.inv(&self.c[0])?;
        let mut out = Series::zero(f, n);
        out.c[0] = u.clone();
        for i in 1..n {
            let mut acc = f.zero();
            for j in 1..=i {
                let t = f.mul(&self.c[j], &out.c[i - j]);
                acc = f.add(&acc, &t);
            }
            out.c[i] = f.neg(&f.mul(&u, &acc));
        }
        Ok(out)
    }

    fn is_zero(&self) -> bool {
        self.c.iter().all(|a| a.is_zero())
    }

    fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|a| !a.is_zero())
    }
}

/// Evaluate a polynomial at a tuple of series by direct term expansion.
fn eval_on_series(poly: &MultiPoly, coords: &[Series]) -> Result<Series, CoverError> {
    let field = coords[0].field.clone();
    let n = coords[0].c.len();
    let lifted = poly.lift(&field)?;
    // power tables, pows[v][e] = coords[v]^e
    let degs: Vec<u32> = (0..coords.len())
        .map(|v| lifted.degree_in(v))
        .collect();
    let mut pows: Vec<Vec<Series>> = Vec::new();
    for (v, coord) in coords.iter().enumerate() {
        let mut table = vec![Series::constant(&field, &field.one(), n)];
        for e in 1..=degs[v] as usize {
            let prev = table[e - 1].clone();
            table.push(prev.mul(coord));
        }
        pows.push(table);
    }
    let mut acc = Series::zero(&field, n);
    for (mono, coeff) in lifted.terms() {
        let mut term = Series::constant(&field, coeff, n);
        for (v, &e) in mono.0.iter().enumerate() {
            if e > 0 {
                term = term.mul(&pows[v][e as usize]);
            }
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Formal parametrization of the single branch through a simple cusp of
/// a plane curve. Returns projective coordinate series for a local
/// uniformizer t, exact to the requested precision.
///
/// At a cusp with tangent cone c·L² and cubic term d₀·s³ along the
/// complementary coordinate, the branch is s = α·t², L = t³·w(t) with
/// α = −c/d₀ and w(0) = c/d₀; w is lifted by Newton iteration, which
/// converges because ∂/∂w has unit leading coefficient away from
/// characteristic 2.
fn cusp_branch(
    curve: &PlaneCurve,
    point: &[Elem; 3],
    prec: usize,
) -> Result<[Series; 3], CoverError> {
    let field = curve.field().clone();
    let work = prec + 6;
    let f = curve.equation();
    let pivot = (0..3)
        .rev()
        .find(|&i| !point[i].is_zero())
        .ok_or_else(|| CoverError::Unsupported("zero point".into()))?;
    let inv = field.inv(&point[pivot])?;
    let scaled: Vec<Elem> = point.iter().map(|c| field.mul(c, &inv)).collect();
    let locals: Vec<usize> = (0..3).filter(|&i| i != pivot).collect();
    let mut subs = Vec::new();
    for i in 0..3 {
        if i == pivot {
            subs.push(MultiPoly::constant(&field, 2, &field.one()));
        } else {
            let slot = locals.iter().position(|&l| l == i).unwrap();
            let var = MultiPoly::var(&field, 2, slot);
            subs.push(var.add(&MultiPoly::constant(&field, 2, &scaled[i])));
        }
    }
    let local = f.compose(&subs)?;
    // quadratic part a·u² + b·uw + c·w² must be a perfect square
    let mut quad = [field.zero(), field.zero(), field.zero()];
    for (m, coeff) in local.terms() {
        let (eu, ew) = (m.0[0] as usize, m.0[1] as usize);
        match eu + ew {
            0 | 1 => {
                if !coeff.is_zero() {
                    return Err(CoverError::Unsupported("point is not singular".into()));
                }
            }
            2 => quad[ew] = field.add(&quad[ew], coeff),
            _ => {}
        }
    }
    let (a, b) = (&quad[0], &quad[1]);
    // rotate so the double tangent line becomes the second coordinate:
    // (s, L) with L the tangent form
    let rotated = if !a.is_zero() {
        // tangent form L = u + (b/2a)·w; substitute u = L − e·s, w = s
        let two_a = field.mul(&field.from_u64(2), a);
        let e = field.mul(b, &field.inv(&two_a)?);
        let s_var = MultiPoly::var(&field, 2, 0);
        let l_var = MultiPoly::var(&field, 2, 1);
        let u_expr = l_var.sub(&s_var.scale(&e));
        local.compose(&[u_expr, s_var])?
    } else {
        if !b.is_zero() {
            return Err(CoverError::Unsupported("tangent cone is not a double line".into()));
        }
        local.clone()
    };
    // read c (coefficient of L²) and d₀ (coefficient of s³)
    let mut c_coeff = field.zero();
    let mut d0 = field.zero();
    for (m, coeff) in rotated.terms() {
        let (es, el) = (m.0[0] as usize, m.0[1] as usize);
        if (es, el) == (0, 2) {
            c_coeff = coeff.clone();
        } else if (es, el) == (3, 0) {
            d0 = coeff.clone();
        } else if es + el == 2 && !coeff.is_zero() {
            return Err(CoverError::Unsupported("tangent cone is not a double line".into()));
        }
    }
    if c_coeff.is_zero() || d0.is_zero() {
        return Err(CoverError::Unsupported("point is not a simple cusp".into()));
    }
    // branch data: s = α·t², L = t³·w(t), w(0) = β, with β² = (−d₀/c)·α³
    let ratio = field.mul(&c_coeff, &field.inv(&d0)?);
    let alpha = field.neg(&ratio);
    let beta = ratio;
    // G(α·t², t³·W) / t⁶ as a polynomial in W with series coefficients
    let max_el = rotated.degree_in(1) as usize;
    let mut poly_w: Vec<Series> = vec![Series::zero(&field, work); max_el + 1];
    for (m, coeff) in rotated.terms() {
        let (es, el) = (m.0[0] as usize, m.0[1] as usize);
        let order = 2 * es + 3 * el;
        if coeff.is_zero() {
            continue;
        }
        if order < 6 {
            return Err(CoverError::Unsupported("unexpected low-order term".into()));
        }
        if order - 6 < work {
            let val = field.mul(coeff, &field.pow(&alpha, es as u64));
            poly_w[el].c[order - 6] = field.add(&poly_w[el].c[order - 6], &val);
        }
    }
    let eval_poly = |w: &Series| -> Series {
        let mut acc = poly_w[max_el].clone();
        for b in (0..max_el).rev() {
            acc = acc.mul(w).add(&poly_w[b]);
        }
        acc
    };
    let eval_deriv = |w: &Series| -> Series {
        let mut acc = poly_w[max_el].scale(&field.from_u64(max_el as u64));
        for b in (1..max_el).rev() {
            acc = acc.mul(w).add(&poly_w[b].scale(&field.from_u64(b as u64)));
        }
        acc
    };
    let mut w = Series::constant(&field, &beta, work);
    for _ in 0..64 {
        let q = eval_poly(&w);
        if q.is_zero() {
            break;
        }
        let qp = eval_deriv(&w);
        w = w.sub(&q.mul(&qp.inv()?));
    }
    if !eval_poly(&w).is_zero() {
        return Err(CoverError::Unsupported("branch lift did not converge".into()));
    }
    let s_series = Series::monomial(&field, &alpha, 2, work);
    let l_series = {
        let shift = Series::monomial(&field, &field.one(), 3, work);
        shift.mul(&w)
    };
    // undo the rotation: (u, w) from (s, L)
    let (u_series, w_series) = if !a.is_zero() {
        let two_a = field.mul(&field.from_u64(2), a);
        let e = field.mul(b, &field.inv(&two_a)?);
        (l_series.sub(&s_series.scale(&e)), s_series)
    } else {
        (s_series, l_series)
    };
    // assemble projective coordinates and certify the branch
    let mut coords = vec![Series::zero(&field, work); 3];
    coords[pivot] = Series::constant(&field, &field.one(), work);
    coords[locals[0]] = Series::constant(&field, &scaled[locals[0]], work).add(&u_series);
    coords[locals[1]] = Series::constant(&field, &scaled[locals[1]], work).add(&w_series);
    let check = eval_on_series(f, &coords)?;
    if !check.is_zero() {
        return Err(CoverError::Unsupported("branch does not satisfy the curve".into()));
    }
    Ok([coords[0].clone(), coords[1].clone(), coords[2].clone()])
}

/// Image of a branch under the map: evaluate a representation on the
/// coordinate series and read the coefficients at the minimum valuation.
fn branch_image(
    reps: &[[MultiPoly; 3]],
    branch: &[Series; 3],
) -> Result<[Elem; 3], CoverError> {
    let field = branch[0].field.clone();
    for rep in reps {
        let vals = [
            eval_on_series(&rep[0], branch)?,
            eval_on_series(&rep[1], branch)?,
            eval_on_series(&rep[2], branch)?,
        ];
        let v = vals.iter().filter_map(|s| s.valuation()).min();
        if let Some(v) = v {
            let raw = [vals[0].c[v].clone(), vals[1].c[v].clone(), vals[2].c[v].clone()];
            let norm = field
                .normalize_point(&raw)
                .ok_or_else(|| CoverError::Unsupported("zero branch image".into()))?;
            return Ok([norm[0].clone(), norm[1].clone(), norm[2].clone()]);
        }
    }
    Err(CoverError::Unsupported(
        "all representations vanish along the branch".into(),
    ))
}

/// Census output: per-target fiber data plus the Riemann–Hurwitz line.
#[derive(Debug, Clone, Serialize)]
pub struct RamificationReport {
    pub cover_degree: u32,
    pub targets: Vec<TargetPointReport>,
    pub extensions_used: Vec<u32>,
    pub extensions_skipped: Vec<u32>,
    pub unresolved: Vec<UnresolvedNote>,
    pub riemann_hurwitz: RhLine,
}

#[derive(Debug, Clone, Serialize)]
pub struct TargetPointReport {
    /// Field-of-definition degree of the target closed point.
    pub degree: u32,
    /// Canonical coordinate codes over the canonical field of that degree.
    pub coords: [u64; 3],
    /// (extension degree, rational fiber size) pairs.
    pub fiber_sizes: Vec<(u32, u32)>,
    /// Apparent ramification indices (a partition of the cover degree).
    pub apparent_indices: Vec<u32>,
    /// True when an apparent index is divisible by the characteristic.
    pub wild: bool,
    /// False when the observed extensions cannot decide the pattern.
    pub conclusive: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct UnresolvedNote {
    pub m: u32,
    pub count: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct RhLine {
    pub required_different_degree: i64,
    pub tame_point_sum: i64,
    pub tame_weighted_sum: i64,
    pub wild_present: bool,
    pub consistent: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::DEFAULT_BUDGET;
    use crate::poly::parse::parse_poly;

    fn f3() -> Field {
        Field::new(3, 1).unwrap()
    }

    fn source_model() -> MultiPoly {
        parse_poly("x^4+x^3*y^3-x^2-x*y^5+y^5+2*y", &["x", "y"], &f3()).unwrap()
    }

    fn target_model() -> MultiPoly {
        parse_poly("y^2-x^3+x-1", &["x", "y"], &f3()).unwrap()
    }

    /// The coordinate fractions, with denominators built from the
    /// factored forms.
    fn map_fractions() -> [(MultiPoly, MultiPoly); 2] {
        let f = f3();
        let v = ["x", "y"];
        let n1 = parse_poly(
            "-x^3-x^2*y^3-x^2*y^2+x^2+x*y^5+x*y^4-x*y^3-x*y^2+x*y-y^6+y^5+y^4+y^3-y^2",
            &v,
            &f,
        )
        .unwrap();
        let n2 = parse_poly(
            "-x^3*y-x^2*y^5+x^2*y^4-x^2*y+x*y^5+x*y^4+x*y^3-x*y^2-x*y+y^8+y^7+y^4-y^3-y^2-y+1",
            &v,
            &f,
        )
        .unwrap();
        let yp1 = parse_poly("y+1", &v, &f).unwrap();
        let ym1 = parse_poly("y-1", &v, &f).unwrap();
        let cubic = parse_poly("y^3-y^2+y+1", &v, &f).unwrap();
        let d1 = yp1.mul(&ym1.pow(2)).mul(&cubic);
        let d2 = yp1.pow(2).mul(&ym1.pow(3)).mul(&cubic);
        [(n1, d1), (n2, d2)]
    }

    #[test]
    fn denominators_match_expanded_forms() {
        let f = f3();
        let [(_, d1), (_, d2)] = map_fractions();
        let d1_expanded =
            parse_poly("y^6-2*y^5+y^4+2*y^3-3*y^2+1", &["x", "y"], &f).unwrap();
        let d2_expanded = parse_poly(
            "y^8-2*y^7+4*y^5-4*y^4-2*y^3+4*y^2-1",
            &["x", "y"],
            &f,
        )
        .unwrap();
        assert_eq!(d1.sub(&d1_expanded).num_terms(), 0);
        assert_eq!(d2.sub(&d2_expanded).num_terms(), 0);
        // and d2 = d1·(y² − 1)
        let y2m1 = parse_poly("y^2-1", &["x", "y"], &f).unwrap();
        assert!(d2.sub(&d1.mul(&y2m1)).is_zero());
    }

    #[test]
    fn cover_relation_divides_exactly() {
        let cert = verify_cover(&source_model(), &map_fractions(), &target_model()).unwrap();
        assert!(cert.holds);
        assert!(cert.quotient_degree.is_some());
    }

    #[test]
    fn identity_map_on_target_verifies() {
        let f = f3();
        let e = target_model();
        let one = MultiPoly::constant(&f, 2, &f.one());
        let fractions = [
            (MultiPoly::var(&f, 2, 0), one.clone()),
            (MultiPoly::var(&f, 2, 1), one),
        ];
        let cert = verify_cover(&e, &fractions, &e).unwrap();
        assert!(cert.holds);
        assert_eq!(cert.quotient_degree, Some(0));
    }

    #[test]
    fn perturbed_maps_detected() {
        let f = f3();
        let one = MultiPoly::constant(&f, 2, &f.one());
        // x' + 1 still verifies: in characteristic 3 the target relation
        // y² = x³ − x + 1 satisfies (x+1)³ − (x+1) + 1 = x³ − x + 1, so
        // x ↦ x + 1 is a translation symmetry of the target
        let mut shifted_x = map_fractions();
        shifted_x[0].0 = shifted_x[0].0.add(&shifted_x[0].1.mul(&one));
        let cert = verify_cover(&source_model(), &shifted_x, &target_model()).unwrap();
        assert!(cert.holds);
        // y' + 1 changes y'² by 2y' + 1, which is not a symmetry
        let mut shifted_y = map_fractions();
        shifted_y[1].0 = shifted_y[1].0.add(&shifted_y[1].1.mul(&one));
        let cert = verify_cover(&source_model(), &shifted_y, &target_model()).unwrap();
        assert!(!cert.holds);
        // swapping the coordinate roles is not a cover either
        let plain = map_fractions();
        let swapped = [plain[1].clone(), plain[0].clone()];
        let cert = verify_cover(&source_model(), &swapped, &target_model()).unwrap();
        assert!(!cert.holds);
    }

    #[test]
    fn vanishing_denominator_is_rejected() {
        let f = f3();
        let src = source_model();
        let bad = [
            (MultiPoly::var(&f, 2, 0), src.clone()),
            (
                MultiPoly::var(&f, 2, 1),
                MultiPoly::constant(&f, 2, &f.one()),
            ),
        ];
        assert!(matches!(
            verify_cover(&src, &bad, &target_model()),
            Err(CoverError::UndefinedAlongCurve)
        ));
    }

    fn reference_net() -> QuadricNet {
        let f = f3();
        let vars = ["x1", "x2", "x3", "x4", "x5"];
        QuadricNet::new(
            parse_poly("2*x1*x2+x3*x2+x3^2-x4^2", &vars, &f).unwrap(),
            parse_poly("x5*x1-x4*x2", &vars, &f).unwrap(),
            parse_poly("x1^2+x1*x2-x3^2+x5^2", &vars, &f).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn quartic_quotient_membership() {
        let f = f3();
        let net = reference_net();
        let vars = ["x1", "x2", "x3", "x4", "x5"];
        // the genus-2 quotient model lies in the ideal
        let d = parse_poly(
            "x2^2*x3*x2+x2^2*x3^2-x2^2*x1*x2+x1^2*x1^2+x1*x2*x1^2-x3^2*x1^2",
            &vars,
            &f,
        )
        .unwrap();
        assert!(quotient_membership(&d, &net).unwrap());
        // a monomial multiple of a generator is a member by construction
        let x1x2q1 = parse_poly("x1*x2", &vars, &f)
            .unwrap()
            .mul(&net.forms()[0]);
        assert!(quotient_membership(&x1x2q1, &net).unwrap());
        // monotonicity spot-checks on the other generators
        let x1sq_q2 = parse_poly("x1^2", &vars, &f).unwrap().mul(&net.forms()[1]);
        assert!(quotient_membership(&x1sq_q2, &net).unwrap());
        let x4x5q3 = parse_poly("x4*x5", &vars, &f).unwrap().mul(&net.forms()[2]);
        assert!(quotient_membership(&x4x5q3, &net).unwrap());
        // a pure fourth power is not in the ideal
        let x14 = parse_poly("x1^4", &vars, &f).unwrap();
        assert!(!quotient_membership(&x14, &net).unwrap());
        // degree enforcement
        let cube = parse_poly("x1^3", &vars, &f).unwrap();
        assert!(matches!(
            quotient_membership(&cube, &net),
            Err(CoverError::WrongDegree { .. })
        ));
    }

    #[test]
    fn involution_detection() {
        let f = f3();
        let first = parse_poly(
            "x^4*y^2+x^2*y^4+y^6+x^2-y^2+x^3+x*y^2+1+x-x^4",
            &["x", "y"],
            &f,
        )
        .unwrap();
        assert!(involution_check(&first).unwrap());
        assert!(!involution_check(&source_model()).unwrap());
        let even = parse_poly("x^3+y^2*x+y^4+1", &["x", "y"], &f).unwrap();
        assert!(involution_check(&even).unwrap());
    }

    #[test]
    fn divisor_possibility_count() {
        assert_eq!(choose(13, 1), 13);
        assert_eq!(choose(13, 3), 286);
        assert_eq!(choose_377(), 377);
    }

    fn build_cover() -> CoverMap {
        CoverMap::new(&source_model(), &map_fractions(), &target_model()).unwrap()
    }

    #[test]
    fn every_rational_source_point_resolves() {
        let cover = build_cover();
        let f = f3();
        let sources =
            counting::plane_points(cover.source(), &f, DEFAULT_BUDGET).unwrap();
        assert_eq!(sources.len(), 13);
        let tgt = cover.target().clone();
        for p in &sources {
            let img = cover.eval(p, &f).unwrap().expect("image must resolve");
            assert!(tgt.equation().eval(&img).unwrap().is_zero());
        }
        assert!(cover.undefined_points(&f, DEFAULT_BUDGET).unwrap().is_empty());
    }

    #[test]
    fn cusps_resolve_through_their_branches() {
        let cover = build_cover();
        let f = f3();
        // the plane sextic has two rational singular points, both simple
        // cusps; every polynomial representation vanishes there, so their
        // images come from the formal branch through each cusp
        let sing = counting::singular_points_plane(cover.source(), &f, DEFAULT_BUDGET).unwrap();
        assert_eq!(sing.len(), 2);
        let mut seen = Vec::new();
        for pt in &sing {
            assert_eq!(
                counting::classify_double_point(cover.source(), pt, &f).unwrap(),
                counting::DoublePointClass::Cusp
            );
            let img = cover.eval(pt, &f).unwrap().expect("cusp image assigned");
            seen.push((
                [f.code(&pt[0]), f.code(&pt[1]), f.code(&pt[2])],
                [f.code(&img[0]), f.code(&img[1]), f.code(&img[2])],
            ));
        }
        seen.sort();
        assert_eq!(
            seen,
            vec![([1, 0, 0], [0, 1, 0]), ([1, 2, 2], [1, 1, 1])]
        );
    }

    #[test]
    fn undefined_locus_is_the_nonsplit_nodes() {
        let cover = build_cover();
        // over F_9 everything resolves; over F_27 exactly the conjugate
        // triple of non-unibranch singular points stays undefined
        let f9 = Field::new(3, 2).unwrap();
        assert!(cover.undefined_points(&f9, DEFAULT_BUDGET).unwrap().is_empty());
        let f27 = Field::new(3, 3).unwrap();
        let undef = cover.undefined_points(&f27, DEFAULT_BUDGET).unwrap();
        assert_eq!(undef.len(), 3);
        for p in &undef {
            assert_eq!(
                counting::classify_double_point(cover.source(), p, &f27).unwrap(),
                counting::DoublePointClass::NodeNonsplit
            );
        }
        // and they are exactly the singular points that are not cusps
        let sing = counting::singular_points_plane(cover.source(), &f27, DEFAULT_BUDGET).unwrap();
        assert_eq!(sing.len(), 5);
        let undef_codes: Vec<[u64; 3]> = undef
            .iter()
            .map(|p| [f27.code(&p[0]), f27.code(&p[1]), f27.code(&p[2])])
            .collect();
        for s in &sing {
            let codes = [f27.code(&s[0]), f27.code(&s[1]), f27.code(&s[2])];
            let class = counting::classify_double_point(cover.source(), s, &f27).unwrap();
            assert_eq!(
                undef_codes.contains(&codes),
                class == counting::DoublePointClass::NodeNonsplit
            );
        }
    }

    #[test]
    fn branch_of_a_standard_cusp() {
        // y²z = x³ has a cusp at the origin of the z = 1 chart; its
        // branch is (t², ±t³, 1) and the computed series must satisfy
        // the curve identically
        let f = f3();
        let vars = ["x", "y", "z"];
        let curve = PlaneCurve::new(
            parse_poly("y^2*z-x^3", &vars, &f).unwrap(),
        )
        .unwrap();
        let pt = [f.zero(), f.zero(), f.one()];
        let branch = cusp_branch(&curve, &pt, 30).unwrap();
        assert_eq!(branch[0].valuation(), Some(2));
        assert_eq!(branch[1].valuation(), Some(3));
        assert_eq!(branch[2].valuation(), Some(0));
        // x(t) = t² and y(t) = ±t³ exactly
        let x2 = f.code(&branch[0].c[2]);
        assert_eq!(x2, 1);
        assert!(branch[0].c.iter().enumerate().all(|(i, c)| i == 2 || c.is_zero()));
        assert!(branch[1].c.iter().enumerate().all(|(i, c)| i == 3 || c.is_zero()));
        // a non-cusp input is refused
        let node = PlaneCurve::new(
            parse_poly("y^2*z-x^2*z-x^3", &vars, &f).unwrap(),
        )
        .unwrap();
        assert!(cusp_branch(&node, &pt, 30).is_err());
    }

    #[test]
    fn rational_fibers_partition_the_source_points() {
        let cover = build_cover();
        let f = f3();
        let targets = counting::plane_points(cover.target(), &f, DEFAULT_BUDGET).unwrap();
        assert_eq!(targets.len(), 7);
        let mut sizes = Vec::new();
        let mut union: Vec<[u64; 3]> = Vec::new();
        for t in &targets {
            let fb = cover.fiber(t, &f, DEFAULT_BUDGET).unwrap();
            assert!(fb.len() <= 3);
            sizes.push(fb.len());
            for p in &fb {
                union.push([f.code(&p[0]), f.code(&p[1]), f.code(&p[2])]);
            }
        }
        // the fibers are disjoint and exhaust all 13 source points
        union.sort();
        let before = union.len();
        union.dedup();
        assert_eq!(union.len(), before);
        assert_eq!(union.len(), 13);
        let sources = counting::plane_points(cover.source(), &f, DEFAULT_BUDGET).unwrap();
        let mut source_codes: Vec<[u64; 3]> = sources
            .iter()
            .map(|p| [f.code(&p[0]), f.code(&p[1]), f.code(&p[2])])
            .collect();
        source_codes.sort();
        assert_eq!(union, source_codes);
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 1, 2, 2, 3, 3]);
        // a point off the target errors
        let off = f
            .proj_points(2)
            .find(|p| !cover.target().equation().eval(p).unwrap().is_zero())
            .unwrap();
        let off = [off[0].clone(), off[1].clone(), off[2].clone()];
        assert!(matches!(
            cover.fiber(&off, &f, DEFAULT_BUDGET),
            Err(CoverError::NotOnTarget)
        ));
    }

    #[test]
    fn census_flags_wild_ramification_within_budget() {
        let cover = build_cover();
        let report = cover
            .fiber_census(2, 5, 1, 3, DEFAULT_BUDGET)
            .unwrap();
        assert_eq!(report.riemann_hurwitz.required_different_degree, 8);
        // the only unassigned source points are the non-unibranch
        // singular triple, visible over F_27 and F_729
        let notes: Vec<(u32, u32)> = report.unresolved.iter().map(|n| (n.m, n.count)).collect();
        assert_eq!(notes, vec![(3, 3), (6, 3)]);
        // every conclusive pattern partitions the degree
        for t in &report.targets {
            if t.conclusive {
                assert_eq!(t.apparent_indices.iter().sum::<u32>(), 3);
            }
            if t.wild {
                assert!(t.apparent_indices.iter().any(|&e| e % 3 == 0));
            }
        }
        // the cover is wildly ramified, at exactly two rational targets
        assert!(report.riemann_hurwitz.wild_present);
        assert!(report.riemann_hurwitz.consistent);
        let mut wild: Vec<[u64; 3]> = report
            .targets
            .iter()
            .filter(|t| t.wild)
            .map(|t| t.coords)
            .collect();
        wild.sort();
        assert_eq!(wild, vec![[1, 2, 1], [1, 2, 2]]);
        // the tame contribution leaves room for the two wild points in
        // the degree-8 different
        assert_eq!(report.riemann_hurwitz.tame_weighted_sum, 2);
        // some rational target carries three rational points counted
        // with multiplicity
        let all_rational = report.targets.iter().any(|t| {
            t.degree == 1
                && t.conclusive
                && t.fiber_sizes.first().map(|&(_, s)| s as usize)
                    == Some(t.apparent_indices.len())
        });
        assert!(all_rational);
        // unramified conclusive fibers reach the full cover degree
        for t in &report.targets {
            if t.conclusive && t.apparent_indices == vec![1, 1, 1] {
                assert!(t.fiber_sizes.iter().any(|&(_, s)| s == 3));
            }
        }
        // serialization has a stable shape
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"riemann_hurwitz\""));
        assert!(json.contains("\"apparent_indices\""));
    }

    #[test]
    fn census_rational_fibers_match_direct_enumeration() {
        let cover = build_cover();
        let f = f3();
        let report = cover.fiber_census(1, 5, 1, 3, DEFAULT_BUDGET).unwrap();
        let degree_one: Vec<_> = report
            .targets
            .iter()
            .filter(|t| t.degree == 1)
            .collect();
        assert_eq!(degree_one.len(), 7);
        let total_rational: u32 = degree_one
            .iter()
            .map(|t| t.fiber_sizes.iter().find(|(m, _)| *m == 1).unwrap().1)
            .sum();
        assert_eq!(total_rational, 13);
        // cross-check one fiber against direct enumeration
        let targets = counting::plane_points(cover.target(), &f, DEFAULT_BUDGET).unwrap();
        let t0 = &targets[0];
        let direct = cover.fiber(t0, &f, DEFAULT_BUDGET).unwrap().len() as u32;
        let key_deg = definition_degree(&f, t0);
        let key = closed_point_key(&f, t0, key_deg).unwrap();
        let entry = report
            .targets
            .iter()
            .find(|t| t.degree == key.degree && t.coords == key.coords)
            .unwrap();
        let reported = entry.fiber_sizes.iter().find(|(m, _)| *m == 1).unwrap().1;
        assert_eq!(direct, reported);
    }

    #[test]
    fn closed_point_keys_are_field_independent() {
        let f3 = f3();
        let f9 = Field::new(3, 2).unwrap();
        let f27 = Field::new(3, 3).unwrap();
        // a rational point keyed from two different ambient fields
        let p3 = [f3.one(), f3.from_u64(2), f3.zero()];
        let p9 = [f9.one(), f9.from_u64(2), f9.zero()];
        let k3 = closed_point_key(&f3, &p3, 1).unwrap();
        let k9 = closed_point_key(&f9, &p9, definition_degree(&f9, &p9)).unwrap();
        assert_eq!(k3, k9);
        // a degree-2 point keyed from F_9 and from... the canonical F_9
        // copy of itself must agree with the orbit minimum
        let t = f9.from_code(3);
        let q9 = [f9.one(), t.clone(), f9.zero()];
        let d = definition_degree(&f9, &q9);
        assert_eq!(d, 2);
        let key = closed_point_key(&f9, &q9, d).unwrap();
        assert_eq!(key.degree, 2);
        // Frobenius orbit of the same point gives the same key
        let q9c = [
            f9.frobenius(&q9[0], 1),
            f9.frobenius(&q9[1], 1),
            f9.frobenius(&q9[2], 1),
        ];
        let key2 = closed_point_key(&f9, &q9c, d).unwrap();
        assert_eq!(key, key2);
        // degree-1 points inside F_27 descend to prime-field codes
        let p27 = [f27.one(), f27.from_u64(2), f27.one()];
        let k27 = closed_point_key(&f27, &p27, definition_degree(&f27, &p27)).unwrap();
        assert_eq!(k27, PointKey { degree: 1, coords: [1, 2, 1] });
    }

    #[test]
    fn generic_fiber_reaches_degree_over_extensions() {
        let cover = build_cover();
        // find an unramified rational target in the census and check its
        // fiber really has three points over a splitting extension
        let report = cover.fiber_census(1, 5, 1, 3, DEFAULT_BUDGET).unwrap();
        let unram = report
            .targets
            .iter()
            .find(|t| t.degree == 1 && t.apparent_indices == vec![1, 1, 1])
            .expect("an unramified rational target exists");
        let (m_split, _) = *unram
            .fiber_sizes
            .iter()
            .find(|&&(_, s)| s == 3)
            .expect("fiber splits within the census range");
        let ext = Field::new(3, m_split).unwrap();
        let sub = Field::new(3, 1).unwrap();
        let t = [
            ext.from_u64(sub.code(&sub.from_u64(unram.coords[0]))),
            ext.from_u64(unram.coords[1]),
            ext.from_u64(unram.coords[2]),
        ];
        let fb = cover.fiber(&t, &ext, DEFAULT_BUDGET).unwrap();
        assert_eq!(fb.len(), 3);
        // and a ramified target keeps a deficient fiber
        let ram = report
            .targets
            .iter()
            .find(|t| t.degree == 1 && t.wild)
            .expect("a wildly ramified rational target exists");
        let t = [
            ext.from_u64(ram.coords[0]),
            ext.from_u64(ram.coords[1]),
            ext.from_u64(ram.coords[2]),
        ];
        let fb = cover.fiber(&t, &ext, DEFAULT_BUDGET).unwrap();
        assert!(fb.len() < 3);
    }
}
