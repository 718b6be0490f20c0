//! Geometry of a net of quadrics in P⁴: the discriminant quintic, the
//! singular-point (Steinerian) map, the induced plane action of net
//! automorphisms, brute-force plane automorphism search, and simultaneous
//! diagonalization of nondegenerate pencils.

use crate::counting::{self, matrix_rank, PlaneCurve, QuadricNet};
use crate::gf::{Elem, Field, FieldError};
use crate::poly::uni::{factor_prime_field, roots_in};
use crate::poly::{det_poly_matrix, MultiPoly, PolyError};
use rayon::prelude::*;

#[derive(Debug, thiserror::Error)]
pub enum PencilError {
    #[error("matrix is singular")]
    Singular,
    #[error("net is degenerate: identically zero discriminant")]
    DegenerateNet,
    #[error("point does not lie on the discriminant curve")]
    OffCurve,
    #[error("pencil member has rank below 4: kernel dimension {0}")]
    RankLocus(usize),
    #[error("operation needs {required} candidates, budget is {budget}")]
    Budget { required: u64, budget: u64 },
    #[error("diagonalization hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("line is not transverse: intersection multiplicity pattern {pattern:?}, unsplit degree {unsplit}")]
    NotTransverse { pattern: Vec<usize>, unsplit: usize },
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Count(#[from] counting::CountError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// An invertible matrix up to scalar, stored with the canonical
/// representative whose first nonzero entry (row-major) is 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjLinearMap {
    field: Field,
    m: Vec<Vec<Elem>>,
}

impl ProjLinearMap {
    pub fn new(field: &Field, m: Vec<Vec<Elem>>) -> Result<ProjLinearMap, PencilError> {
        let n = m.len();
        if n == 0 || m.iter().any(|row| row.len() != n) {
            return Err(PencilError::Unsupported("matrix must be square".into()));
        }
        if det_elem(field, m.clone()).is_zero() {
            return Err(PencilError::Singular);
        }
        let mut out = ProjLinearMap {
            field: field.clone(),
            m,
        };
        out.canonicalize();
        Ok(out)
    }

    pub fn from_i64(field: &Field, rows: &[&[i64]]) -> Result<ProjLinearMap, PencilError> {
        let m = rows
            .iter()
            .map(|r| r.iter().map(|&c| field.from_i64(c)).collect())
            .collect();
        ProjLinearMap::new(field, m)
    }

    pub fn identity(field: &Field, n: usize) -> ProjLinearMap {
        let m = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { field.one() } else { field.zero() })
                    .collect()
            })
            .collect();
        ProjLinearMap {
            field: field.clone(),
            m,
        }
    }

    fn canonicalize(&mut self) {
        let lead = self
            .m
            .iter()
            .flatten()
            .find(|c| !c.is_zero())
            .cloned()
            .expect("invertible matrix has a nonzero entry");
        let inv = self.field.inv(&lead).expect("nonzero");
        for row in &mut self.m {
            for c in row.iter_mut() {
                *c = self.field.mul(c, &inv);
            }
        }
    }

    pub fn n(&self) -> usize {
        self.m.len()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn matrix(&self) -> &Vec<Vec<Elem>> {
        &self.m
    }

    /// Image of a projective point, canonically normalized.
    pub fn apply(&self, point: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let out: Vec<Elem> = self
            .m
            .iter()
            .map(|row| {
                let mut acc = f.zero();
                for (c, x) in row.iter().zip(point) {
                    acc = f.add(&acc, &f.mul(c, x));
                }
                acc
            })
            .collect();
        f.normalize_point(&out)
            .expect("invertible map sends points to points")
    }

    /// self ∘ other (matrix product), canonicalized.
    pub fn compose(&self, other: &ProjLinearMap) -> ProjLinearMap {
        let f = &self.field;
        let n = self.n();
        let mut m = vec![vec![f.zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = f.zero();
                for l in 0..n {
                    acc = f.add(&acc, &f.mul(&self.m[i][l], &other.m[l][j]));
                }
                m[i][j] = acc;
            }
        }
        let mut out = ProjLinearMap {
            field: f.clone(),
            m,
        };
        out.canonicalize();
        out
    }

    pub fn inverse(&self) -> ProjLinearMap {
        let f = &self.field;
        let n = self.n();
        // Gauss-Jordan on [M | I]
        let mut a = self.m.clone();
        let mut inv = ProjLinearMap::identity(f, n).m;
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .expect("invertible");
            a.swap(col, piv);
            inv.swap(col, piv);
            let s = f.inv(&a[col][col]).expect("pivot");
            for j in 0..n {
                a[col][j] = f.mul(&a[col][j], &s);
                inv[col][j] = f.mul(&inv[col][j], &s);
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let factor = a[r][col].clone();
                    for j in 0..n {
                        let t = f.mul(&factor, &a[col][j]);
                        a[r][j] = f.sub(&a[r][j], &t);
                        let t = f.mul(&factor, &inv[col][j]);
                        inv[r][j] = f.sub(&inv[r][j], &t);
                    }
                }
            }
        }
        let mut out = ProjLinearMap {
            field: f.clone(),
            m: inv,
        };
        out.canonicalize();
        out
    }
}

/// Determinant of an element matrix by Gaussian elimination.
fn det_elem(field: &Field, mut m: Vec<Vec<Elem>>) -> Elem {
    let n = m.len();
    let mut det = field.one();
    for col in 0..n {
        let piv = match (col..n).find(|&r| !m[r][col].is_zero()) {
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

/// Build the net (with Gram matrices) from three quadratic forms.
pub fn gram(q1: MultiPoly, q2: MultiPoly, q3: MultiPoly) -> Result<QuadricNet, PencilError> {
    Ok(QuadricNet::new(q1, q2, q3)?)
}

/// The discriminant curve det(x·Q1 + y·Q2 + z·Q3) = 0 in P².
pub fn discriminant_curve(net: &QuadricNet) -> Result<PlaneCurve, PencilError> {
    let field = net.field().clone();
    let n = net.gram(0).len();
    let mut entries = vec![vec![MultiPoly::zero(&field, 3); n]; n];
    for (v, var) in [(0usize, 0usize), (1, 1), (2, 2)] {
        let g = net.gram(v);
        for i in 0..n {
            for j in 0..n {
                if g[i][j].is_zero() {
                    continue;
                }
                let term = MultiPoly::var(&field, 3, var).scale(&g[i][j]);
                entries[i][j] = entries[i][j].add(&term);
            }
        }
    }
    let det = det_poly_matrix(&entries)?;
    if det.is_zero() {
        return Err(PencilError::DegenerateNet);
    }
    Ok(PlaneCurve::new(det)?)
}

/// Null-space basis of a symmetric matrix, by Gaussian elimination with
/// first-nonzero pivoting (deterministic).
pub fn quadric_kernel(field: &Field, m: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let nrows = m.len();
    if nrows == 0 {
        return Vec::new();
    }
    let ncols = m[0].len();
    let mut a: Vec<Vec<Elem>> = m.to_vec();
    let mut pivot_col: Vec<usize> = Vec::new();
    let mut row = 0usize;
    for col in 0..ncols {
        let piv = (row..nrows).find(|&r| !a[r][col].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => continue,
        };
        a.swap(row, piv);
        let inv = field.inv(&a[row][col]).expect("pivot nonzero");
        for c in 0..ncols {
            a[row][c] = field.mul(&a[row][c], &inv);
        }
        for r in 0..nrows {
            if r != row && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..ncols {
                    let t = field.mul(&factor, &a[row][c]);
                    a[r][c] = field.sub(&a[r][c], &t);
                }
            }
        }
        pivot_col.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_col.contains(&free) {
            continue;
        }
        let mut v = vec![field.zero(); ncols];
        v[free] = field.one();
        for (r, &pc) in pivot_col.iter().enumerate() {
            v[pc] = field.neg(&a[r][free]);
        }
        basis.push(v);
    }
    basis
}

/// Pencil member x·Q1 + y·Q2 + z·Q3 at a plane point, over `ext`.
fn pencil_member(
    net: &QuadricNet,
    point: &[Elem; 3],
    ext: &Field,
) -> Result<Vec<Vec<Elem>>, PencilError> {
    let lifted = net.lift(ext)?;
    let n = lifted.gram(0).len();
    let mut m = vec![vec![ext.zero(); n]; n];
    for v in 0..3 {
        let g = lifted.gram(v);
        for i in 0..n {
            for j in 0..n {
                let t = ext.mul(&g[i][j], &point[v]);
                m[i][j] = ext.add(&m[i][j], &t);
            }
        }
    }
    Ok(m)
}

/// The unique singular point of the rank-4 quadric attached to a point of
/// the discriminant curve.
pub fn steinerian(
    net: &QuadricNet,
    point: &[Elem; 3],
    ext: &Field,
) -> Result<Vec<Elem>, PencilError> {
    let m = pencil_member(net, point, ext)?;
    let kernel = quadric_kernel(ext, &m);
    match kernel.len() {
        0 => Err(PencilError::OffCurve),
        1 => Ok(ext
            .normalize_point(&kernel[0])
            .expect("kernel vector nonzero")),
        d => Err(PencilError::RankLocus(d)),
    }
}

/// Express a symmetric matrix in the span of the net's Gram matrices.
/// Returns the coefficient triple when it lies in the span.
fn in_net_span(net: &QuadricNet, target: &[Vec<Elem>]) -> Option<[Elem; 3]> {
    let field = net.field().clone();
    let n = net.gram(0).len();
    // unknowns (a, b, c); equations indexed by matrix positions i ≤ j
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    for i in 0..n {
        for j in i..n {
            rows.push(vec![
                net.gram(0)[i][j].clone(),
                net.gram(1)[i][j].clone(),
                net.gram(2)[i][j].clone(),
                target[i][j].clone(),
            ]);
        }
    }
    // Gaussian elimination on the augmented system
    let ncols = 3;
    let nrows = rows.len();
    let mut row = 0usize;
    let mut pivots: Vec<usize> = Vec::new();
    for col in 0..ncols {
        let piv = (row..nrows).find(|&r| !rows[r][col].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => continue,
        };
        rows.swap(row, piv);
        let inv = field.inv(&rows[row][col]).expect("pivot");
        for c in 0..=ncols {
            rows[row][c] = field.mul(&rows[row][c], &inv);
        }
        for r in 0..nrows {
            if r != row && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in 0..=ncols {
                    let t = field.mul(&factor, &rows[row][c]);
                    rows[r][c] = field.sub(&rows[r][c], &t);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    // consistency: no row 0 = nonzero
    for r in row..nrows {
        if !rows[r][ncols].is_zero() {
            return None;
        }
    }
    let mut sol = [field.zero(), field.zero(), field.zero()];
    for (r, &pc) in pivots.iter().enumerate() {
        sol[pc] = rows[r][ncols].clone();
    }
    Some(sol)
}

/// tM·Q·M for a Gram matrix Q.
fn conjugate_gram(field: &Field, m: &[Vec<Elem>], q: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let n = m.len();
    // first Q·M
    let mut qm = vec![vec![field.zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = field.zero();
            for l in 0..n {
                acc = field.add(&acc, &field.mul(&q[i][l], &m[l][j]));
            }
            qm[i][j] = acc;
        }
    }
    // then Mᵀ·(Q·M)
    let mut out = vec![vec![field.zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = field.zero();
            for l in 0..n {
                acc = field.add(&acc, &field.mul(&m[l][i], &qm[l][j]));
            }
            out[i][j] = acc;
        }
    }
    out
}

/// True iff tM·Q_i·M stays in span{Q1, Q2, Q3} for all three quadrics.
pub fn verify_net_automorphism(m: &ProjLinearMap, net: &QuadricNet) -> bool {
    let field = net.field();
    (0..3).all(|i| {
        let c = conjugate_gram(field, m.matrix(), net.gram(i));
        in_net_span(net, &c).is_some()
    })
}

/// The plane map induced by a net automorphism: write tM·Q_i·M = Σ_j
/// N_ji·Q_j and return the inverse of N (which makes the assignment a
/// group morphism and intertwines the Steinerian map with M). Returns None
/// when M does not preserve the span.
pub fn mu(m: &ProjLinearMap, net: &QuadricNet) -> Result<Option<ProjLinearMap>, PencilError> {
    let field = net.field().clone();
    let mut cols: Vec<[Elem; 3]> = Vec::new();
    for i in 0..3 {
        let c = conjugate_gram(&field, m.matrix(), net.gram(i));
        match in_net_span(net, &c) {
            Some(sol) => cols.push(sol),
            None => return Ok(None),
        }
    }
    let n_mat: Vec<Vec<Elem>> = (0..3)
        .map(|r| (0..3).map(|c| cols[c][r].clone()).collect())
        .collect();
    let n = match ProjLinearMap::new(&field, n_mat) {
        Ok(n) => n,
        Err(PencilError::Singular) => return Ok(None),
        Err(e) => return Err(e),
    };
    Ok(Some(n.inverse()))
}

/// All elements of PGL_3(F_q) preserving the plane curve as a polynomial
/// identity (f∘M proportional to f). Exhaustive over canonical
/// representatives, with a rational-point permutation prefilter.
pub fn brute_force_plane_autos(
    curve: &PlaneCurve,
    ext: &Field,
    budget: u64,
) -> Result<Vec<ProjLinearMap>, PencilError> {
    let q = ext.q();
    let required = q.checked_pow(9).unwrap_or(u64::MAX);
    if required > budget {
        return Err(PencilError::Budget { required, budget });
    }
    let lifted = curve.lift(ext)?;
    let f = lifted.equation().clone();
    // prefilter data: the curve's rational points, as sorted code triples
    let pts = counting::plane_points(&lifted, ext, budget)?;
    let mut codes: Vec<[u64; 3]> = pts
        .iter()
        .map(|p| [ext.code(&p[0]), ext.code(&p[1]), ext.code(&p[2])])
        .collect();
    codes.sort_unstable();
    let point_elems: Vec<Vec<Elem>> = pts.iter().map(|p| p.to_vec()).collect();

    let outer = q * q * q; // first row
    let found: Vec<Vec<ProjLinearMap>> = (0..outer)
        .into_par_iter()
        .map(|top| {
            let mut local = Vec::new();
            let r0 = [top / (q * q), (top / q) % q, top % q];
            // canonical representative: first nonzero entry must be 1
            if let Some(lead) = r0.iter().find(|&&c| c != 0) {
                if *lead != 1 {
                    return local;
                }
            }
            let row0: Vec<Elem> = r0.iter().map(|&c| ext.from_code(c)).collect();
            let all_zero_top = r0.iter().all(|&c| c == 0);
            for mid in 0..q * q * q {
                let r1 = [mid / (q * q), (mid / q) % q, mid % q];
                if all_zero_top {
                    if let Some(lead) = r1.iter().find(|&&c| c != 0) {
                        if *lead != 1 {
                            continue;
                        }
                    } else {
                        continue; // two zero rows cannot be invertible
                    }
                }
                let row1: Vec<Elem> = r1.iter().map(|&c| ext.from_code(c)).collect();
                for bot in 0..q * q * q {
                    let r2 = [bot / (q * q), (bot / q) % q, bot % q];
                    let row2: Vec<Elem> = r2.iter().map(|&c| ext.from_code(c)).collect();
                    let m = vec![row0.clone(), row1.clone(), row2.clone()];
                    if det_elem(ext, m.clone()).is_zero() {
                        continue;
                    }
                    // prefilter: images of curve points stay on the curve
                    let mut ok = true;
                    for p in &point_elems {
                        let img: Vec<Elem> = m
                            .iter()
                            .map(|row| {
                                let mut acc = ext.zero();
                                for (c, x) in row.iter().zip(p) {
                                    acc = ext.add(&acc, &ext.mul(c, x));
                                }
                                acc
                            })
                            .collect();
                        let norm = match ext.normalize_point(&img) {
                            Some(n) => n,
                            None => {
                                ok = false;
                                break;
                            }
                        };
                        let key = [
                            ext.code(&norm[0]),
                            ext.code(&norm[1]),
                            ext.code(&norm[2]),
                        ];
                        if codes.binary_search(&key).is_err() {
                            ok = false;
                            break;
                        }
                    }
                    if !ok {
                        continue;
                    }
                    // exact check: f(M·x) proportional to f
                    let subs: Vec<MultiPoly> = (0..3)
                        .map(|i| {
                            let mut s = MultiPoly::zero(ext, 3);
                            for j in 0..3 {
                                if m[i][j].is_zero() {
                                    continue;
                                }
                                s = s.add(&MultiPoly::var(ext, 3, j).scale(&m[i][j]));
                            }
                            s
                        })
                        .collect();
                    let composed = f.compose(&subs).expect("arity");
                    if composed.proportionality(&f).is_some() {
                        local.push(
                            ProjLinearMap::new(ext, m).expect("checked invertible"),
                        );
                    }
                }
            }
            local
        })
        .collect();
    Ok(found.into_iter().flatten().collect())
}

/// A simultaneous orthogonal basis for two nondegenerate symmetric forms.
#[derive(Debug, Clone)]
pub struct DiagonalizationResult {
    /// Basis vectors (columns) v_i.
    pub basis: Vec<Vec<Elem>>,
    /// Generalized eigenvalues: det(G − λ_i F) = 0.
    pub eigenvalues: Vec<Elem>,
    /// Diagonal values t v_i F v_i.
    pub diag_f: Vec<Elem>,
    /// Diagonal values t v_i G v_i.
    pub diag_g: Vec<Elem>,
}

fn bilinear(field: &Field, m: &[Vec<Elem>], u: &[Elem], v: &[Elem]) -> Elem {
    let mut acc = field.zero();
    for (i, ui) in u.iter().enumerate() {
        for (j, vj) in v.iter().enumerate() {
            let t = field.mul(&field.mul(ui, &m[i][j]), vj);
            acc = field.add(&acc, &t);
        }
    }
    acc
}

/// Simultaneously diagonalize two nondegenerate symmetric forms whose
/// pencil determinant det(G − tF) is squarefree with all roots in `ext`.
pub fn simultaneous_diagonalize(
    f_mat: &[Vec<Elem>],
    g_mat: &[Vec<Elem>],
    base: &Field,
    ext: &Field,
) -> Result<DiagonalizationResult, PencilError> {
    let n = f_mat.len();
    if n == 0 || g_mat.len() != n {
        return Err(PencilError::Unsupported("matrix sizes must agree".into()));
    }
    if det_elem(base, f_mat.to_vec()).is_zero() || det_elem(base, g_mat.to_vec()).is_zero() {
        return Err(PencilError::Hypothesis(
            "both forms must be nondegenerate".into(),
        ));
    }
    // det(G − tF) as a univariate polynomial
    let mut entries = vec![vec![MultiPoly::zero(base, 1); n]; n];
    for i in 0..n {
        for j in 0..n {
            let c = MultiPoly::constant(base, 1, &g_mat[i][j]);
            let t = MultiPoly::var(base, 1, 0).scale(&base.neg(&f_mat[i][j]));
            entries[i][j] = c.add(&t);
        }
    }
    let chi = det_poly_matrix(&entries)?.as_univariate(0)?;
    let roots = roots_in(&chi, ext)?;
    // repeated roots violate the hypothesis
    let mut distinct: Vec<Elem> = Vec::new();
    for r in &roots {
        if distinct.iter().any(|d| d == r) {
            return Err(PencilError::Hypothesis(
                "det(G − tF) has a repeated root".into(),
            ));
        }
        distinct.push(r.clone());
    }
    if distinct.len() != n {
        let msg = if base.k() == 1 {
            let (_, factors) = factor_prime_field(&chi)?;
            let max_deg = factors
                .iter()
                .map(|(p, _)| p.deg().unwrap_or(0))
                .max()
                .unwrap_or(0);
            format!(
                "only {} of {} eigenvalues lie in the field; splitting needs degree {}",
                distinct.len(),
                n,
                max_deg
            )
        } else {
            format!(
                "only {} of {} eigenvalues lie in the field",
                distinct.len(),
                n
            )
        };
        return Err(PencilError::Hypothesis(msg));
    }
    // sort eigenvalues by code for a deterministic basis order
    distinct.sort_by_key(|e| ext.code(e));
    let lift = |m: &[Vec<Elem>]| -> Result<Vec<Vec<Elem>>, PencilError> {
        if base == ext {
            return Ok(m.to_vec());
        }
        if base.k() != 1 {
            return Err(PencilError::Unsupported(
                "cross-extension lifts are not provided".into(),
            ));
        }
        Ok(m.iter()
            .map(|row| row.iter().map(|c| ext.from_u64(base.code(c))).collect())
            .collect())
    };
    let fl = lift(f_mat)?;
    let gl = lift(g_mat)?;
    let mut basis = Vec::new();
    let mut diag_f = Vec::new();
    let mut diag_g = Vec::new();
    for lam in &distinct {
        // G − λF
        let m: Vec<Vec<Elem>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| ext.sub(&gl[i][j], &ext.mul(lam, &fl[i][j])))
                    .collect()
            })
            .collect();
        let kernel = quadric_kernel(ext, &m);
        if kernel.len() != 1 {
            return Err(PencilError::Hypothesis(format!(
                "eigenvalue has kernel dimension {}",
                kernel.len()
            )));
        }
        let v = ext.normalize_point(&kernel[0]).expect("nonzero");
        diag_f.push(bilinear(ext, &fl, &v, &v));
        diag_g.push(bilinear(ext, &gl, &v, &v));
        basis.push(v);
    }
    // orthogonality audit
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if !bilinear(ext, &fl, &basis[i], &basis[j]).is_zero()
                || !bilinear(ext, &gl, &basis[i], &basis[j]).is_zero()
            {
                return Err(PencilError::Hypothesis(
                    "computed basis is not orthogonal".into(),
                ));
            }
        }
    }
    if diag_f.iter().any(|d| d.is_zero()) || diag_g.iter().any(|d| d.is_zero()) {
        return Err(PencilError::Hypothesis(
            "degenerate diagonal entry".into(),
        ));
    }
    Ok(DiagonalizationResult {
        basis,
        eigenvalues: distinct,
        diag_f,
        diag_g,
    })
}

/// Rank of the five Steinerian images of the intersection of a line with
/// the discriminant curve. The line through p1, p2 must meet the curve in
/// five distinct points over `ext`.
pub fn transversal_rank(
    net: &QuadricNet,
    p1: &[Elem; 3],
    p2: &[Elem; 3],
    ext: &Field,
) -> Result<usize, PencilError> {
    let base = net.field().clone();
    let quintic = discriminant_curve(net)?;
    // restrict to the line: substitute (x,y,z) = s·p1 + t·p2
    let subs: Vec<MultiPoly> = (0..3)
        .map(|i| {
            let s = MultiPoly::var(&base, 2, 0).scale(&p1[i]);
            let t = MultiPoly::var(&base, 2, 1).scale(&p2[i]);
            s.add(&t)
        })
        .collect();
    let restricted = quintic.equation().compose(&subs)?;
    if restricted.is_zero() {
        return Err(PencilError::NotTransverse {
            pattern: vec![5],
            unsplit: 0,
        });
    }
    // univariate in t at s = 1; multiplicity at infinity = 5 − deg
    let b = restricted.dehomogenize(0)?.as_univariate(1)?;
    let deg = b.deg().unwrap_or(0);
    let inf_mult = 5 - deg;
    let roots = roots_in(&b, ext)?;
    let mut mults: Vec<(u64, usize)> = Vec::new();
    for r in &roots {
        let code = ext.code(r);
        match mults.iter_mut().find(|(c, _)| *c == code) {
            Some((_, m)) => *m += 1,
            None => mults.push((code, 1)),
        }
    }
    let rational: usize = mults.iter().map(|(_, m)| m).sum();
    let unsplit = deg - rational;
    let mut pattern: Vec<usize> = mults.iter().map(|(_, m)| *m).collect();
    if inf_mult > 0 {
        pattern.push(inf_mult);
    }
    pattern.sort_unstable_by(|a, b| b.cmp(a));
    let transverse = unsplit == 0 && pattern.iter().all(|&m| m == 1) && pattern.len() == 5;
    if !transverse {
        return Err(PencilError::NotTransverse { pattern, unsplit });
    }
    // the five intersection points
    let mut line_points: Vec<[Elem; 3]> = Vec::new();
    let lift3 = |p: &[Elem; 3]| -> Result<[Elem; 3], PencilError> {
        if base == *ext {
            return Ok(p.clone());
        }
        if base.k() != 1 {
            return Err(PencilError::Unsupported(
                "cross-extension lifts are not provided".into(),
            ));
        }
        Ok([
            ext.from_u64(base.code(&p[0])),
            ext.from_u64(base.code(&p[1])),
            ext.from_u64(base.code(&p[2])),
        ])
    };
    let q1 = lift3(p1)?;
    let q2 = lift3(p2)?;
    for r in &roots {
        let pt = [
            ext.add(&q1[0], &ext.mul(r, &q2[0])),
            ext.add(&q1[1], &ext.mul(r, &q2[1])),
            ext.add(&q1[2], &ext.mul(r, &q2[2])),
        ];
        let norm = ext.normalize_point(&pt).expect("sum of distinct points");
        line_points.push([norm[0].clone(), norm[1].clone(), norm[2].clone()]);
    }
    if inf_mult == 1 {
        line_points.push(q2.clone());
    }
    // Steinerian images and their rank
    let mut rows = Vec::new();
    for pt in &line_points {
        rows.push(steinerian(net, pt, ext)?);
    }
    Ok(matrix_rank(ext, rows))
}
