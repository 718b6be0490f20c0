//! Model registry: named curves, nets, and maps in a line-oriented text
//! format, plus the bundled set used by the command-line tool.
//!
//! The format is deliberately small.  A file is a sequence of entries:
//!
//! ```text
//! # comment
//! [model some.id]
//! kind = plane-curve
//! field = 3^1
//! vars = x y
//! equation = x^4 - y^2 + 1
//! ```
//!
//! Keys are kind-specific and closed: an unrecognized key is an error,
//! not a warning, so a typo cannot silently drop data.  All diagnostics
//! carry the source line number.

use std::collections::BTreeMap;
use std::path::Path;

use crate::counting::{PlaneCurve, QuadricNet};
use crate::gf::Field;
use crate::pencil::ProjLinearMap;
use crate::poly::{parse::parse_poly, MultiPoly};

/// Failure to read or parse a registry file.
#[derive(Debug, thiserror::Error)]
pub enum RegistryError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}:{line}: {message}")]
    Syntax {
        origin: String,
        line: usize,
        message: String,
    },
}

fn syntax(origin: &str, line: usize, message: impl Into<String>) -> RegistryError {
    RegistryError::Syntax {
        origin: origin.to_string(),
        line,
        message: message.into(),
    }
}

/// The closed set of payload kinds a registry entry may declare.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    PlaneCurve,
    QuadricNet,
    Weierstrass,
    RationalMap,
    LinearMap,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::PlaneCurve => "plane-curve",
            ModelKind::QuadricNet => "quadric-net",
            ModelKind::Weierstrass => "weierstrass",
            ModelKind::RationalMap => "rational-map",
            ModelKind::LinearMap => "linear-map",
        }
    }

    fn parse(s: &str) -> Option<ModelKind> {
        match s {
            "plane-curve" => Some(ModelKind::PlaneCurve),
            "quadric-net" => Some(ModelKind::QuadricNet),
            "weierstrass" => Some(ModelKind::Weierstrass),
            "rational-map" => Some(ModelKind::RationalMap),
            "linear-map" => Some(ModelKind::LinearMap),
            _ => None,
        }
    }
}

/// Parsed payload of a registry entry.
#[derive(Debug, Clone)]
pub enum Payload {
    /// Projective plane curve; `affine` holds the two-variable equation
    /// exactly as written when the entry was affine.
    Plane {
        curve: PlaneCurve,
        affine: Option<MultiPoly>,
        vars: Vec<String>,
    },
    Net {
        net: QuadricNet,
        vars: Vec<String>,
    },
    /// Elliptic curve given by its vanishing affine relation.
    Weierstrass {
        curve: PlaneCurve,
        affine: MultiPoly,
        vars: Vec<String>,
    },
    Linear { map: ProjLinearMap },
    /// Rational map between two other registry entries, stored as two
    /// coordinate fractions in the affine chart.
    Rational {
        source: String,
        target: String,
        fractions: [(MultiPoly, MultiPoly); 2],
        vars: Vec<String>,
    },
}

/// One named entry of a registry.
#[derive(Debug, Clone)]
pub struct Model {
    pub id: String,
    pub kind: ModelKind,
    pub field: Field,
    /// Geometric genus of the smooth model, when declared.
    pub genus: Option<u32>,
    pub payload: Payload,
    /// Line of the `[model ...]` header in the source file.
    pub line: usize,
}

impl Model {
    /// The projective plane curve carried by plane-curve and
    /// weierstrass entries.
    pub fn plane_curve(&self) -> Option<&PlaneCurve> {
        match &self.payload {
            Payload::Plane { curve, .. } | Payload::Weierstrass { curve, .. } => Some(curve),
            _ => None,
        }
    }

    /// The affine two-variable equation, when the entry was written in
    /// affine form.
    pub fn affine_equation(&self) -> Option<&MultiPoly> {
        match &self.payload {
            Payload::Plane { affine, .. } => affine.as_ref(),
            Payload::Weierstrass { affine, .. } => Some(affine),
            _ => None,
        }
    }

    pub fn quadric_net(&self) -> Option<&QuadricNet> {
        match &self.payload {
            Payload::Net { net, .. } => Some(net),
            _ => None,
        }
    }

    pub fn linear_map(&self) -> Option<&ProjLinearMap> {
        match &self.payload {
            Payload::Linear { map } => Some(map),
            _ => None,
        }
    }

    /// Declared variable names, for rendering polynomials back out.
    pub fn vars(&self) -> &[String] {
        match &self.payload {
            Payload::Plane { vars, .. }
            | Payload::Net { vars, .. }
            | Payload::Weierstrass { vars, .. }
            | Payload::Rational { vars, .. } => vars,
            Payload::Linear { .. } => &[],
        }
    }
}

/// A validated collection of models with unique ids.
#[derive(Debug, Clone)]
pub struct Registry {
    models: Vec<Model>,
}

impl Registry {
    pub fn get(&self, id: &str) -> Option<&Model> {
        self.models.iter().find(|m| m.id == id)
    }

    pub fn models(&self) -> &[Model] {
        &self.models
    }

    pub fn ids(&self) -> Vec<&str> {
        self.models.iter().map(|m| m.id.as_str()).collect()
    }
}

/// The registry text compiled into the binary.
pub fn bundled_text() -> &'static str {
    include_str!("registry/bundled.txt")
}

/// The bundled registry.  The text ships with the crate and is covered
/// by tests, so failure to parse is a build defect.
pub fn bundled() -> Registry {
    registry_parse(bundled_text(), "<bundled>").expect("bundled registry must parse")
}

/// Load and validate a registry file from disk.
pub fn registry_load(path: &Path) -> Result<Registry, RegistryError> {
    let text = std::fs::read_to_string(path).map_err(|source| RegistryError::Io {
        path: path.display().to_string(),
        source,
    })?;
    registry_parse(&text, &path.display().to_string())
}

/// Parse a field label of the form `p^k` or a bare prime `p`.
pub fn parse_field_spec(s: &str) -> Option<(u64, u32)> {
    let s = s.trim();
    match s.split_once('^') {
        Some((p, k)) => {
            let p = p.trim().parse().ok()?;
            let k = k.trim().parse().ok()?;
            Some((p, k))
        }
        None => Some((s.parse().ok()?, 1)),
    }
}

/// Unfinalized entry: raw key/value pairs with their line numbers.
struct RawModel {
    id: String,
    line: usize,
    entries: BTreeMap<String, (String, usize)>,
}

/// Parse registry text; `origin` names the source in diagnostics.
pub fn registry_parse(text: &str, origin: &str) -> Result<Registry, RegistryError> {
    let mut models: Vec<Model> = Vec::new();
    let mut current: Option<RawModel> = None;

    for (idx, raw_line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let inner = rest
                .strip_suffix(']')
                .ok_or_else(|| syntax(origin, lineno, "unterminated section header"))?;
            let mut words = inner.split_whitespace();
            match (words.next(), words.next(), words.next()) {
                (Some("model"), Some(id), None) => {
                    if let Some(raw) = current.take() {
                        models.push(finalize(raw, origin)?);
                    }
                    if models.iter().any(|m| m.id == id) {
                        return Err(syntax(origin, lineno, format!("duplicate model id `{id}`")));
                    }
                    current = Some(RawModel {
                        id: id.to_string(),
                        line: lineno,
                        entries: BTreeMap::new(),
                    });
                }
                _ => {
                    return Err(syntax(
                        origin,
                        lineno,
                        "section header must be `[model <id>]`",
                    ))
                }
            }
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(syntax(origin, lineno, "expected `key = value`"));
        };
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() {
            return Err(syntax(origin, lineno, "empty key before `=`"));
        }
        let Some(raw) = current.as_mut() else {
            return Err(syntax(
                origin,
                lineno,
                format!("`{key}` appears before any `[model ...]` header"),
            ));
        };
        if raw
            .entries
            .insert(key.to_string(), (value.to_string(), lineno))
            .is_some()
        {
            return Err(syntax(
                origin,
                lineno,
                format!("duplicate key `{key}` in model `{}`", raw.id),
            ));
        }
    }
    if let Some(raw) = current.take() {
        if models.iter().any(|m| m.id == raw.id) {
            return Err(syntax(
                origin,
                raw.line,
                format!("duplicate model id `{}`", raw.id),
            ));
        }
        models.push(finalize(raw, origin)?);
    }

    // Cross-reference pass: rational maps must point at curve entries
    // that exist in the same registry.
    for m in &models {
        if let Payload::Rational { source, target, .. } = &m.payload {
            for (role, id) in [("source", source), ("target", target)] {
                match models.iter().find(|o| &o.id == id) {
                    None => {
                        return Err(syntax(
                            origin,
                            m.line,
                            format!("{role} `{id}` of `{}` is not in the registry", m.id),
                        ))
                    }
                    Some(other) => {
                        if other.plane_curve().is_none() {
                            return Err(syntax(
                                origin,
                                m.line,
                                format!("{role} `{id}` of `{}` is not a curve", m.id),
                            ));
                        }
                    }
                }
            }
        }
    }

    Ok(Registry { models })
}

/// Keys shared by every kind.
const COMMON_KEYS: &[&str] = &["kind", "field"];

fn finalize(raw: RawModel, origin: &str) -> Result<Model, RegistryError> {
    let RawModel { id, line, entries } = raw;
    let take = |key: &str| entries.get(key).cloned();
    let require = |key: &str| {
        take(key).ok_or_else(|| {
            syntax(
                origin,
                line,
                format!("model `{id}` is missing required key `{key}`"),
            )
        })
    };

    let (kind_text, kind_line) = require("kind")?;
    let kind = ModelKind::parse(&kind_text).ok_or_else(|| {
        syntax(
            origin,
            kind_line,
            format!(
                "unknown kind `{kind_text}` (expected plane-curve, quadric-net, \
                 weierstrass, rational-map, or linear-map)"
            ),
        )
    })?;

    let (field_text, field_line) = require("field")?;
    let (p, k) = parse_field_spec(&field_text)
        .ok_or_else(|| syntax(origin, field_line, "field must look like `3^1`"))?;
    let field = Field::new(p, k).map_err(|e| syntax(origin, field_line, e.to_string()))?;

    // Closed key set per kind; anything else is rejected below.
    let allowed: &[&str] = match kind {
        ModelKind::PlaneCurve => &["vars", "equation", "genus"],
        ModelKind::QuadricNet => &["vars", "q1", "q2", "q3", "genus"],
        ModelKind::Weierstrass => &["vars", "equation", "genus"],
        ModelKind::RationalMap => &["vars", "source", "target", "n1", "d1", "n2", "d2"],
        ModelKind::LinearMap => &["rows"],
    };
    for (key, (_, key_line)) in &entries {
        if !COMMON_KEYS.contains(&key.as_str()) && !allowed.contains(&key.as_str()) {
            return Err(syntax(
                origin,
                *key_line,
                format!("unknown key `{key}` for kind `{}`", kind.as_str()),
            ));
        }
    }

    let genus = match take("genus") {
        None => None,
        Some((text, genus_line)) => Some(
            text.parse::<u32>()
                .map_err(|_| syntax(origin, genus_line, "genus must be a small integer"))?,
        ),
    };

    let parse_vars = |spec: (String, usize)| -> Result<Vec<String>, RegistryError> {
        let (text, vars_line) = spec;
        let names: Vec<String> = text.split_whitespace().map(str::to_string).collect();
        for name in &names {
            let mut chars = name.chars();
            let head_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic());
            if !head_ok || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(syntax(
                    origin,
                    vars_line,
                    format!("invalid variable name `{name}`"),
                ));
            }
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(syntax(
                    origin,
                    vars_line,
                    format!("variable `{a}` declared twice"),
                ));
            }
        }
        if names.is_empty() {
            return Err(syntax(origin, vars_line, "vars must list at least one name"));
        }
        Ok(names)
    };

    let parse_in = |names: &[String], spec: (String, usize)| -> Result<MultiPoly, RegistryError> {
        let (text, poly_line) = spec;
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        parse_poly(&text, &refs, &field).map_err(|e| syntax(origin, poly_line, e.to_string()))
    };

    let payload = match kind {
        ModelKind::PlaneCurve => {
            let vars = parse_vars(require("vars")?)?;
            let spec = require("equation")?;
            match vars.len() {
                2 => {
                    let affine = parse_in(&vars, spec.clone())?;
                    let closure_var = fresh_var_name(&vars);
                    let mut names3 = vars.clone();
                    names3.push(closure_var);
                    let wide = parse_in(&names3, spec.clone())?;
                    let degree = wide
                        .total_degree()
                        .ok_or_else(|| syntax(origin, spec.1, "equation must be nonzero"))?;
                    let closed = wide
                        .homogenize(2, degree)
                        .map_err(|e| syntax(origin, spec.1, e.to_string()))?;
                    let curve = PlaneCurve::new(closed)
                        .map_err(|e| syntax(origin, spec.1, e.to_string()))?;
                    Payload::Plane {
                        curve,
                        affine: Some(affine),
                        vars: names3,
                    }
                }
                3 => {
                    let poly = parse_in(&vars, spec.clone())?;
                    let curve = PlaneCurve::new(poly)
                        .map_err(|e| syntax(origin, spec.1, e.to_string()))?;
                    Payload::Plane {
                        curve,
                        affine: None,
                        vars,
                    }
                }
                n => {
                    return Err(syntax(
                        origin,
                        line,
                        format!("plane-curve needs 2 (affine) or 3 (projective) vars, got {n}"),
                    ))
                }
            }
        }
        ModelKind::QuadricNet => {
            let vars = parse_vars(require("vars")?)?;
            if vars.len() != 5 {
                return Err(syntax(
                    origin,
                    line,
                    format!("quadric-net needs exactly 5 vars, got {}", vars.len()),
                ));
            }
            let q1 = parse_in(&vars, require("q1")?)?;
            let q2 = parse_in(&vars, require("q2")?)?;
            let q3 = parse_in(&vars, require("q3")?)?;
            let net =
                QuadricNet::new(q1, q2, q3).map_err(|e| syntax(origin, line, e.to_string()))?;
            Payload::Net { net, vars }
        }
        ModelKind::Weierstrass => {
            let vars = parse_vars(require("vars")?)?;
            if vars.len() != 2 {
                return Err(syntax(
                    origin,
                    line,
                    format!("weierstrass needs exactly 2 vars, got {}", vars.len()),
                ));
            }
            let spec = require("equation")?;
            let affine = parse_in(&vars, spec.clone())?;
            if affine.degree_in(0) != 3 || affine.degree_in(1) != 2 {
                return Err(syntax(
                    origin,
                    spec.1,
                    "weierstrass relation must be cubic in the first variable \
                     and quadratic in the second",
                ));
            }
            let closure_var = fresh_var_name(&vars);
            let mut names3 = vars.clone();
            names3.push(closure_var);
            let wide = parse_in(&names3, spec.clone())?;
            let closed = wide
                .homogenize(2, 3)
                .map_err(|e| syntax(origin, spec.1, e.to_string()))?;
            let curve =
                PlaneCurve::new(closed).map_err(|e| syntax(origin, spec.1, e.to_string()))?;
            Payload::Weierstrass {
                curve,
                affine,
                vars: names3,
            }
        }
        ModelKind::LinearMap => {
            let (text, rows_line) = require("rows")?;
            let mut rows: Vec<Vec<i64>> = Vec::new();
            for row_text in text.split(';') {
                let row: Result<Vec<i64>, _> =
                    row_text.split_whitespace().map(str::parse).collect();
                let row = row
                    .map_err(|_| syntax(origin, rows_line, "rows must contain integers"))?;
                rows.push(row);
            }
            let n = rows.len();
            if n < 2 || rows.iter().any(|r| r.len() != n) {
                return Err(syntax(
                    origin,
                    rows_line,
                    "rows must form a square matrix of size at least 2",
                ));
            }
            let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
            let map = ProjLinearMap::from_i64(&field, &refs)
                .map_err(|e| syntax(origin, rows_line, e.to_string()))?;
            Payload::Linear { map }
        }
        ModelKind::RationalMap => {
            let vars = parse_vars(require("vars")?)?;
            if vars.len() != 2 {
                return Err(syntax(
                    origin,
                    line,
                    format!("rational-map needs exactly 2 vars, got {}", vars.len()),
                ));
            }
            let (source, _) = require("source")?;
            let (target, _) = require("target")?;
            let n1 = parse_in(&vars, require("n1")?)?;
            let d1 = parse_in(&vars, require("d1")?)?;
            let n2 = parse_in(&vars, require("n2")?)?;
            let d2 = parse_in(&vars, require("d2")?)?;
            for (label, den) in [("d1", &d1), ("d2", &d2)] {
                if den.is_zero() {
                    return Err(syntax(
                        origin,
                        line,
                        format!("denominator `{label}` must be nonzero"),
                    ));
                }
            }
            Payload::Rational {
                source,
                target,
                fractions: [(n1, d1), (n2, d2)],
                vars,
            }
        }
    };

    Ok(Model {
        id,
        kind,
        field,
        genus,
        payload,
        line,
    })
}

/// A variable name not colliding with the declared affine names, used
/// for the homogenizing coordinate.
fn fresh_var_name(vars: &[String]) -> String {
    for candidate in ["z", "w", "u", "h"] {
        if !vars.iter().any(|v| v == candidate) {
            return candidate.to_string();
        }
    }
    let mut n = 0usize;
    loop {
        let candidate = format!("h{n}");
        if !vars.iter().any(|v| v == &candidate) {
            return candidate;
        }
        n += 1;
    }
}
