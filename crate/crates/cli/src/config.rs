//! Run configuration: a line-oriented `key = value` file.
//!
//! Blank lines and lines starting with `#` are ignored. Every key below has a
//! default; unknown or repeated keys are errors.
//!
//! | key | default | meaning |
//! |-----|---------|---------|
//! | `model` | `dw` | `dw` or `lw` |
//! | `algebra` | `Z2` | built-in group or fusion category name, or a file path |
//! | `family` | `square-torus` | built-in cellulation family |
//! | `size` | `2` | family size |
//! | `complex` | (none) | cell complex file, overrides `family`/`size` |
//! | `checks` | `tqo0` | comma list of `tqo0 tqo1 tqo2 tqo3 distance` |
//! | `tqo1.regions` | `auto` | `auto`, or `;`-separated comma lists of edges |
//! | `tqo1.max_edges` | `1` | region size for `auto` |
//! | `tqo1.disk_faces` | (none) | comma list of faces for the enclosing disk; default is the hull of each region |
//! | `tqo2.face` | `0` | region A is this face's edges |
//! | `tqo2.radius` | `1` | disk B grows `tqo2.face` by this many rings |
//! | `tqo3.cellulations` | (empty) | comma list of `family:size` |
//! | `distance.weight` | `2` | weight cap of the distance search |
//! | `table.rows` | (empty) | `;`-separated `model/algebra/family/size` rows for `gsd-table` |
//! | `seed` | library default | RNG seed |
//! | `workers` | `1` | concurrent checks |
//! | `out` | (stdout) | report path |
//! | `timestamp` | `1970-01-01T00:00:00Z` | copied into the report header |
//! | `tol.<name>`, `cap.<name>` | library defaults | tolerance and cap overrides |

use std::path::PathBuf;
use tqo_core::config::DEFAULT_SEED;
use tqo_core::{Error, Family, Result, Settings};

#[derive(Debug, Clone, PartialEq)]
pub enum Regions {
    Auto,
    List(Vec<Vec<usize>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: String,
    pub algebra: String,
    pub family: Family,
    pub size: usize,
    pub complex: Option<PathBuf>,
    pub checks: Vec<String>,
    pub tqo1_regions: Regions,
    pub tqo1_max_edges: usize,
    pub tqo1_disk_faces: Option<Vec<usize>>,
    pub tqo2_face: usize,
    pub tqo2_radius: usize,
    pub tqo3_cellulations: Vec<(Family, usize)>,
    pub distance_weight: usize,
    pub table_rows: Vec<TableRow>,
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub timestamp: String,
    pub settings: Settings,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub model: String,
    pub algebra: String,
    pub family: Family,
    pub size: usize,
}

pub const CHECKS: [&str; 5] = ["tqo0", "tqo1", "tqo2", "tqo3", "distance"];

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            model: "dw".into(),
            algebra: "Z2".into(),
            family: Family::SquareTorus,
            size: 2,
            complex: None,
            checks: vec!["tqo0".into()],
            tqo1_regions: Regions::Auto,
            tqo1_max_edges: 1,
            tqo1_disk_faces: None,
            tqo2_face: 0,
            tqo2_radius: 1,
            tqo3_cellulations: Vec::new(),
            distance_weight: 2,
            table_rows: Vec::new(),
            workers: 1,
            out: None,
            timestamp: "1970-01-01T00:00:00Z".into(),
            settings: Settings { seed: DEFAULT_SEED, ..Settings::default() },
        }
    }
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::InvalidInput(format!("`{key}`: cannot parse `{v}`")))
}

fn list(key: &str, v: &str) -> Result<Vec<usize>> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|s| num(key, s)).collect()
}

fn cellulation(key: &str, v: &str) -> Result<(Family, usize)> {
    let (f, n) = v
        .split_once(':')
        .ok_or_else(|| Error::InvalidInput(format!("`{key}`: expected family:size, got `{v}`")))?;
    Ok((f.trim().parse()?, num(key, n.trim())?))
}

fn row(v: &str) -> Result<TableRow> {
    let parts: Vec<&str> = v.split('/').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(Error::InvalidInput(format!("`table.rows`: expected model/algebra/family/size, got `{v}`")));
    }
    Ok(TableRow {
        model: parts[0].to_string(),
        algebra: parts[1].to_string(),
        family: parts[2].parse()?,
        size: num("table.rows", parts[3])?,
    })
}

fn set_tol(s: &mut Settings, name: &str, v: f64) -> bool {
    let t = &mut s.tol;
    let slot = match name {
        "drop" => &mut t.drop,
        "hermitian" => &mut t.hermitian,
        "projector" => &mut t.projector,
        "commutator" => &mut t.commutator,
        "frustration" => &mut t.frustration,
        "gap" => &mut t.gap,
        "eigen_residual" => &mut t.eigen_residual,
        "rank_integrality" => &mut t.rank_integrality,
        "rank_projector" => &mut t.rank_projector,
        "tqo1" => &mut t.tqo1,
        "tqo2" => &mut t.tqo2,
        "null_space" => &mut t.null_space,
        "distance_preserve" => &mut t.distance_preserve,
        "distance_nontrivial" => &mut t.distance_nontrivial,
        "fusion_validate" => &mut t.fusion_validate,
        "fusion_builtin" => &mut t.fusion_builtin,
        _ => return false,
    };
    *slot = v;
    true
}

fn set_cap(s: &mut Settings, key: &str, name: &str, v: &str) -> Result<bool> {
    let c = &mut s.caps;
    match name {
        "dense" => c.dense = num(key, v)?,
        "full_matrix" => c.full_matrix = num(key, v)?,
        "matrix_free" => c.matrix_free = num(key, v)?,
        "operator_basis" => c.operator_basis = num(key, v)?,
        "ground_rank" => c.ground_rank = num(key, v)?,
        "krylov" => c.krylov = num(key, v)?,
        "max_restarts" => c.max_restarts = num(key, v)?,
        "distance_candidates" => c.distance_candidates = num(key, v)?,
        _ => return Ok(false),
    }
    Ok(true)
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig> {
        let mut c = RunConfig::default();
        let mut seen = std::collections::HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: i + 1, msg };
            let (k, v) = line.split_once('=').ok_or_else(|| perr(format!("expected `key = value`, got `{line}`")))?;
            let (k, v) = (k.trim(), v.trim());
            if !seen.insert(k.to_string()) {
                return Err(perr(format!("repeated key `{k}`")));
            }
            c.set(k, v).map_err(|e| match e {
                Error::InvalidInput(m) => perr(m),
                e => e,
            })?;
        }
        Ok(c)
    }

    pub fn load(path: &std::path::Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        RunConfig::parse(&text)
    }

    fn set(&mut self, k: &str, v: &str) -> Result<()> {
        match k {
            "model" => {
                if v != "dw" && v != "lw" {
                    return Err(Error::InvalidInput(format!("`model` must be dw or lw, got `{v}`")));
                }
                self.model = v.into();
            }
            "algebra" => self.algebra = v.into(),
            "family" => self.family = v.parse()?,
            "size" => self.size = num(k, v)?,
            "complex" => self.complex = Some(v.into()),
            "checks" => {
                let checks: Vec<String> = v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
                if let Some(bad) = checks.iter().find(|c| !CHECKS.contains(&c.as_str())) {
                    return Err(Error::InvalidInput(format!("unknown check `{bad}`")));
                }
                self.checks = checks;
            }
            "tqo1.regions" => {
                self.tqo1_regions = if v == "auto" {
                    Regions::Auto
                } else {
                    Regions::List(v.split(';').map(|r| list(k, r)).collect::<Result<_>>()?)
                }
            }
            "tqo1.max_edges" => self.tqo1_max_edges = num(k, v)?,
            "tqo1.disk_faces" => self.tqo1_disk_faces = Some(list(k, v)?),
            "tqo2.face" => self.tqo2_face = num(k, v)?,
            "tqo2.radius" => self.tqo2_radius = num(k, v)?,
            "tqo3.cellulations" => {
                self.tqo3_cellulations = v.split(',').filter(|s| !s.trim().is_empty()).map(|s| cellulation(k, s)).collect::<Result<_>>()?
            }
            "distance.weight" => self.distance_weight = num(k, v)?,
            "table.rows" => self.table_rows = v.split(';').filter(|s| !s.trim().is_empty()).map(row).collect::<Result<_>>()?,
            "seed" => self.settings.seed = num(k, v)?,
            "workers" => self.workers = num(k, v)?,
            "out" => self.out = Some(v.into()),
            "timestamp" => self.timestamp = v.into(),
            _ => {
                let known = if let Some(name) = k.strip_prefix("tol.") {
                    set_tol(&mut self.settings, name, num(k, v)?)
                } else if let Some(name) = k.strip_prefix("cap.") {
                    set_cap(&mut self.settings, k, name, v)?
                } else {
                    false
                };
                if !known {
                    return Err(Error::InvalidInput(format!("unknown key `{k}`")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_from_empty_file() {
        assert_eq!(RunConfig::parse("# nothing\n\n").unwrap(), RunConfig::default());
    }

    #[test]
    fn parses_every_section() {
        let c = RunConfig::parse(
            "model = lw\nalgebra = Fibonacci\nfamily = honeycomb-skew-torus\nsize = 3\n\
             checks = tqo0, tqo2\ntqo1.regions = 0,1; 4\ntqo3.cellulations = square-torus:2, triangulated-torus:2\n\
             table.rows = dw/Z2/square-torus/2; lw/VecZ2/honeycomb-skew-torus/3\n\
             tol.tqo1 = 1e-6\ncap.dense = 64\nseed = 9\n",
        )
        .unwrap();
        assert_eq!(c.model, "lw");
        assert_eq!(c.family, Family::HoneycombSkewTorus);
        assert_eq!(c.checks, vec!["tqo0", "tqo2"]);
        assert_eq!(c.tqo1_regions, Regions::List(vec![vec![0, 1], vec![4]]));
        assert_eq!(c.tqo3_cellulations[1], (Family::TriangulatedTorus, 2));
        assert_eq!(c.table_rows.len(), 2);
        assert_eq!(c.settings.tol.tqo1, 1e-6);
        assert_eq!(c.settings.caps.dense, 64);
        assert_eq!(c.settings.seed, 9);
    }

    #[test]
    fn rejects_unknown_and_repeated_keys() {
        assert!(matches!(RunConfig::parse("colour = red"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(RunConfig::parse("tol.nope = 1"), Err(Error::Parse { .. })));
        assert!(matches!(RunConfig::parse("seed = 1\nseed = 2"), Err(Error::Parse { line: 2, .. })));
        assert!(RunConfig::parse("checks = tqo9").is_err());
        assert!(RunConfig::parse("no equals sign").is_err());
    }
}
