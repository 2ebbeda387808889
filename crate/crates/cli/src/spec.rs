//! The `.vbg` spec file format: UTF-8 JSON with rationals written as
//! `"p/q"` (or `"p"` for integers). A file either spells out the full
//! structure tables (`groupoid` + `vb`) or invokes one of the bundled
//! constructors.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use grpd_core::groupoid::FiniteGroupoid;
use grpd_core::linalg::{Mat, Rat};
use grpd_core::report::Violation;
use grpd_core::vbg::{Anchored2VB, VBGroupoid};

#[derive(Debug)]
pub enum SpecError {
    /// IO or JSON syntax problems, with position information when available.
    Parse(String),
    /// The file parsed but does not describe a VB-groupoid.
    Validation(Vec<Violation>),
    /// Structurally malformed content (unknown ids, wrong shapes).
    Malformed(String),
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::Parse(m) => write!(f, "parse error: {m}"),
            SpecError::Validation(vs) => {
                writeln!(f, "validation failed with {} violation(s):", vs.len())?;
                for v in vs {
                    writeln!(f, "  [{}] {}: {}", v.law, v.location, v.detail)?;
                }
                Ok(())
            }
            SpecError::Malformed(m) => write!(f, "malformed spec: {m}"),
        }
    }
}

impl std::error::Error for SpecError {}

type Grid = Vec<Vec<String>>;

#[derive(Debug, Serialize, Deserialize)]
pub struct SpecFile {
    pub format_version: u32,
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constructor: Option<Constructor>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub groupoid: Option<GroupoidSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vb: Option<VbSpec>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Constructor {
    Canonical { l: usize, k: usize, samples: Vec<Grid> },
    TrivialCore { groupoid: GroupoidSpec, rep: BTreeMap<String, Grid> },
    TrivialBase { groupoid: GroupoidSpec, rep: BTreeMap<String, Grid> },
    Pullback { groupoid: GroupoidSpec, k: usize },
    FromAnchored { points: Vec<String>, deltas: Vec<Grid> },
    Dual { of: Box<SpecFile> },
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GroupoidSpec {
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowSpec>,
    /// Triples `[a, b, a∘b]` with `src(a) = tgt(b)`.
    pub comp: Vec<[String; 3]>,
    pub unit: BTreeMap<String, String>,
    pub inv: BTreeMap<String, String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ArrowSpec {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct VbSpec {
    pub l: usize,
    pub k: usize,
    /// Per arrow id: `k x (l+k)` grid.
    pub src: BTreeMap<String, Grid>,
    pub tgt: BTreeMap<String, Grid>,
    /// Per object id: `(l+k) x k` grid.
    pub unit: BTreeMap<String, Grid>,
    /// Per arrow id: `(l+k) x (l+k)` grid.
    pub inv: BTreeMap<String, Grid>,
    /// Per composable pair: `(l+k) x 2(l+k)` grid.
    pub mul: Vec<MulSpec>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MulSpec {
    pub first: String,
    pub second: String,
    pub matrix: Grid,
}

fn parse_rat(s: &str, context: &str) -> Result<Rat, SpecError> {
    Rat::from_str(s.trim()).map_err(|e| SpecError::Malformed(format!("bad rational {s:?} in {context}: {e}")))
}

fn parse_grid(grid: &Grid, context: &str) -> Result<Mat, SpecError> {
    let rows = grid.len();
    let cols = grid.first().map_or(0, Vec::len);
    if grid.iter().any(|r| r.len() != cols) {
        return Err(SpecError::Malformed(format!("ragged matrix in {context}")));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for row in grid {
        for entry in row {
            data.push(parse_rat(entry, context)?);
        }
    }
    Mat::new(rows, cols, data).map_err(|e| SpecError::Malformed(format!("{context}: {e}")))
}

/// Grids keep their shape even when a dimension is zero, so `rows x 0`
/// matrices need the row count carried explicitly.
fn encode_mat(m: &Mat) -> Grid {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.at(r, c).to_string()).collect())
        .collect()
}

fn parse_grid_shaped(grid: &Grid, rows: usize, cols: usize, context: &str) -> Result<Mat, SpecError> {
    if cols == 0 || rows == 0 {
        // Empty grids lose one dimension in JSON; trust the declared shape.
        if grid.iter().flatten().count() == 0 {
            return Ok(Mat::zeros(rows, cols));
        }
        return Err(SpecError::Malformed(format!("{context}: expected an empty {rows}x{cols} matrix")));
    }
    let m = parse_grid(grid, context)?;
    if m.rows() != rows || m.cols() != cols {
        return Err(SpecError::Malformed(format!(
            "{context}: expected {rows}x{cols}, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(m)
}

fn build_groupoid(spec: &GroupoidSpec) -> Result<FiniteGroupoid, SpecError> {
    let objects = spec.objects.clone();
    let arrows: Vec<String> = spec.arrows.iter().map(|a| a.id.clone()).collect();
    let obj_index = |id: &str| {
        objects
            .iter()
            .position(|o| o == id)
            .ok_or_else(|| SpecError::Malformed(format!("unknown object id {id:?}")))
    };
    let arr_index = |id: &str| {
        arrows
            .iter()
            .position(|a| a == id)
            .ok_or_else(|| SpecError::Malformed(format!("unknown arrow id {id:?}")))
    };
    let mut src = Vec::new();
    let mut tgt = Vec::new();
    for a in &spec.arrows {
        src.push(obj_index(&a.src)?);
        tgt.push(obj_index(&a.tgt)?);
    }
    let mut comp = BTreeMap::new();
    for [a, b, c] in &spec.comp {
        comp.insert((arr_index(a)?, arr_index(b)?), arr_index(c)?);
    }
    let mut unit = vec![0usize; objects.len()];
    for (obj, arr) in &spec.unit {
        unit[obj_index(obj)?] = arr_index(arr)?;
    }
    if spec.unit.len() != objects.len() {
        return Err(SpecError::Malformed("one unit arrow per object required".into()));
    }
    let mut inv = vec![0usize; arrows.len()];
    for (a, ai) in &spec.inv {
        inv[arr_index(a)?] = arr_index(ai)?;
    }
    if spec.inv.len() != arrows.len() {
        return Err(SpecError::Malformed("one inverse per arrow required".into()));
    }
    FiniteGroupoid::new(objects, arrows, src, tgt, comp, unit, inv)
        .map_err(|e| SpecError::Malformed(format!("{e}")))
}

fn encode_groupoid(g: &FiniteGroupoid) -> GroupoidSpec {
    GroupoidSpec {
        objects: g.objects().to_vec(),
        arrows: (0..g.arrow_count())
            .map(|a| ArrowSpec {
                id: g.arrow_id(a).to_string(),
                src: g.object_id(g.src(a)).to_string(),
                tgt: g.object_id(g.tgt(a)).to_string(),
            })
            .collect(),
        comp: g
            .comp_table()
            .iter()
            .map(|(&(a, b), &c)| [g.arrow_id(a).to_string(), g.arrow_id(b).to_string(), g.arrow_id(c).to_string()])
            .collect(),
        unit: (0..g.object_count())
            .map(|x| (g.object_id(x).to_string(), g.arrow_id(g.unit_arrow(x)).to_string()))
            .collect(),
        inv: (0..g.arrow_count())
            .map(|a| (g.arrow_id(a).to_string(), g.arrow_id(g.inverse(a)).to_string()))
            .collect(),
    }
}

fn rep_table(base: &FiniteGroupoid, rep: &BTreeMap<String, Grid>, rank: usize) -> Result<Vec<Mat>, SpecError> {
    // Arrows missing from the table default to the identity.
    let mut out = vec![Mat::identity(rank); base.arrow_count()];
    for (id, grid) in rep {
        let a = base
            .arrow_index(id)
            .map_err(|e| SpecError::Malformed(format!("{e}")))?;
        out[a] = parse_grid_shaped(grid, rank, rank, &format!("rep at arrow {id}"))?;
    }
    Ok(out)
}

fn rep_rank(rep: &BTreeMap<String, Grid>) -> usize {
    rep.values().next().map_or(0, |g| g.len())
}

pub fn build(spec: &SpecFile) -> Result<VBGroupoid, SpecError> {
    if spec.format_version != 1 {
        return Err(SpecError::Malformed(format!("unsupported format_version {}", spec.format_version)));
    }
    match (&spec.constructor, &spec.groupoid, &spec.vb) {
        (Some(c), None, None) => build_constructor(c),
        (None, Some(g), Some(vb)) => build_explicit(g, vb),
        _ => Err(SpecError::Malformed(
            "a spec needs either a constructor or both groupoid and vb blocks".into(),
        )),
    }
}

fn build_constructor(c: &Constructor) -> Result<VBGroupoid, SpecError> {
    let wrap = |e: grpd_core::vbg::VbgError| SpecError::Malformed(format!("{e}"));
    match c {
        Constructor::Canonical { l, k, samples } => {
            let mats = samples
                .iter()
                .enumerate()
                .map(|(i, g)| parse_grid_shaped(g, *k, *l, &format!("sample {i}")))
                .collect::<Result<Vec<_>, _>>()?;
            VBGroupoid::canonical(*l, *k, mats).map_err(wrap)
        }
        Constructor::TrivialCore { groupoid, rep } => {
            let base = build_groupoid(groupoid)?;
            let table = rep_table(&base, rep, rep_rank(rep))?;
            VBGroupoid::trivial_core(base, table).map_err(wrap)
        }
        Constructor::TrivialBase { groupoid, rep } => {
            let base = build_groupoid(groupoid)?;
            let table = rep_table(&base, rep, rep_rank(rep))?;
            VBGroupoid::trivial_base(base, table).map_err(wrap)
        }
        Constructor::Pullback { groupoid, k } => {
            let base = build_groupoid(groupoid)?;
            VBGroupoid::pullback(base, *k).map_err(wrap)
        }
        Constructor::FromAnchored { points, deltas } => {
            if deltas.is_empty() {
                return Err(SpecError::Malformed("from_anchored needs at least one point".into()));
            }
            let e0 = deltas[0].len();
            let e1 = deltas[0].first().map_or(0, Vec::len);
            let mats = deltas
                .iter()
                .enumerate()
                .map(|(i, g)| parse_grid_shaped(g, e0, e1, &format!("delta {i}")))
                .collect::<Result<Vec<_>, _>>()?;
            let anchored = Anchored2VB::new(points.clone(), e1, e0, mats).map_err(wrap)?;
            VBGroupoid::from_anchored(&anchored).map_err(wrap)
        }
        Constructor::Dual { of } => {
            let inner = build(of)?;
            inner.dual().map_err(|e| match e {
                grpd_core::vbg::VbgError::Invalid(vs) => SpecError::Validation(vs),
                other => SpecError::Malformed(format!("{other}")),
            })
        }
    }
}

fn build_explicit(g: &GroupoidSpec, vb: &VbSpec) -> Result<VBGroupoid, SpecError> {
    let base = build_groupoid(g)?;
    let n = vb.l + vb.k;
    let per_arrow = |table: &BTreeMap<String, Grid>, rows: usize, cols: usize, what: &str| {
        (0..base.arrow_count())
            .map(|a| {
                let id = base.arrow_id(a);
                let grid = table
                    .get(id)
                    .ok_or_else(|| SpecError::Malformed(format!("missing {what} matrix for arrow {id}")))?;
                parse_grid_shaped(grid, rows, cols, &format!("{what} at arrow {id}"))
            })
            .collect::<Result<Vec<_>, _>>()
    };
    let src = per_arrow(&vb.src, vb.k, n, "src")?;
    let tgt = per_arrow(&vb.tgt, vb.k, n, "tgt")?;
    let inv = per_arrow(&vb.inv, n, n, "inv")?;
    let unit = (0..base.object_count())
        .map(|x| {
            let id = base.object_id(x);
            let grid = vb
                .unit
                .get(id)
                .ok_or_else(|| SpecError::Malformed(format!("missing unit matrix for object {id}")))?;
            parse_grid_shaped(grid, n, vb.k, &format!("unit at object {id}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut mul = BTreeMap::new();
    for m in &vb.mul {
        let a = base.arrow_index(&m.first).map_err(|e| SpecError::Malformed(format!("{e}")))?;
        let b = base.arrow_index(&m.second).map_err(|e| SpecError::Malformed(format!("{e}")))?;
        mul.insert(
            (a, b),
            parse_grid_shaped(&m.matrix, n, 2 * n, &format!("mul at pair ({},{})", m.first, m.second))?,
        );
    }
    VBGroupoid::new(base, vb.l, vb.k, src, tgt, mul, unit, inv).map_err(|e| SpecError::Malformed(format!("{e}")))
}

/// Encode a VB-groupoid in the explicit table form.
pub fn encode(v: &VBGroupoid, name: &str) -> SpecFile {
    let base = v.base();
    let vb = VbSpec {
        l: v.core_rank(),
        k: v.base_rank(),
        src: (0..base.arrow_count())
            .map(|a| (base.arrow_id(a).to_string(), encode_mat(v.src_map(a))))
            .collect(),
        tgt: (0..base.arrow_count())
            .map(|a| (base.arrow_id(a).to_string(), encode_mat(v.tgt_map(a))))
            .collect(),
        unit: (0..base.object_count())
            .map(|x| (base.object_id(x).to_string(), encode_mat(v.unit_map(x))))
            .collect(),
        inv: (0..base.arrow_count())
            .map(|a| (base.arrow_id(a).to_string(), encode_mat(v.inv_map(a))))
            .collect(),
        mul: v
            .mul_table()
            .iter()
            .map(|(&(a, b), m)| MulSpec {
                first: base.arrow_id(a).to_string(),
                second: base.arrow_id(b).to_string(),
                matrix: encode_mat(m),
            })
            .collect(),
    };
    SpecFile {
        format_version: 1,
        name: name.to_string(),
        constructor: None,
        groupoid: Some(encode_groupoid(base)),
        vb: Some(vb),
    }
}

/// Parse a spec file without validating the result.
pub fn parse_file(path: &Path) -> Result<SpecFile, SpecError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SpecError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| SpecError::Parse(format!("{} (line {}, column {})", e, e.line(), e.column())))
}

/// Load, build and validate: the public contract of the file format.
pub fn load(path: &Path) -> Result<(String, VBGroupoid), SpecError> {
    let spec = parse_file(path)?;
    let v = build(&spec)?;
    let violations = v.validate();
    if !violations.is_empty() {
        return Err(SpecError::Validation(violations));
    }
    Ok((spec.name, v))
}

pub fn save(v: &VBGroupoid, name: &str, path: &Path) -> Result<(), SpecError> {
    let spec = encode(v, name);
    let text = serde_json::to_string_pretty(&spec).map_err(|e| SpecError::Parse(format!("{e}")))?;
    std::fs::write(path, text + "\n").map_err(|e| SpecError::Parse(format!("{}: {e}", path.display())))
}
