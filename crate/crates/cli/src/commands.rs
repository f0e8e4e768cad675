use crate::config::{Regions, RunConfig, TableRow};
use crate::report::{self, Entry, Header};
use std::fmt::Write;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use tqo_core::algebra::{load_fusion, load_group};
use tqo_core::complex::{build_standard, disk_from_faces, disk_region, hull_of_edges};
use tqo_core::verify::{check_tqo0_with, check_tqo1, check_tqo2, check_tqo3, distance_search};
use tqo_core::{
    builtin_fusion, builtin_group, dw, lw, CellComplex, DiskRegion, Error, FiniteGroup, FusionData, Ground, LatticeModel, Region,
    Result, Settings, TermKind, VerificationReport,
};

/// Known violations the hidden `--fault` flag can inject.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// One face term replaced by a random diagonal that commutes with nothing.
    NonCommuting,
    /// One F-symbol of the fusion data sign-flipped.
    CorruptF,
}

impl std::str::FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Fault> {
        match s {
            "noncommuting" => Ok(Fault::NonCommuting),
            "corrupt-f" => Ok(Fault::CorruptF),
            _ => Err(Error::InvalidInput(format!("unknown fault `{s}` (noncommuting, corrupt-f)"))),
        }
    }
}

impl Fault {
    fn name(self) -> &'static str {
        match self {
            Fault::NonCommuting => "noncommuting",
            Fault::CorruptF => "corrupt-f",
        }
    }
}

pub enum Algebra {
    Group(FiniteGroup),
    Fusion(FusionData),
}

/// A built-in name, or else a file path.
pub fn load_algebra(model: &str, name: &str, s: &Settings) -> Result<Algebra> {
    let file = Path::new(name);
    match model {
        "dw" => builtin_group(name)
            .or_else(|e| if file.exists() { load_group(file) } else { Err(e) })
            .map(Algebra::Group),
        "lw" => builtin_fusion(name)
            .or_else(|e| if file.exists() { load_fusion(file, s.tol.fusion_validate) } else { Err(e) })
            .map(Algebra::Fusion),
        _ => Err(Error::InvalidInput(format!("unknown model family `{model}`"))),
    }
}

fn complex_of(cfg: &RunConfig) -> Result<(CellComplex, String)> {
    match &cfg.complex {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", p.display())))?;
            Ok((CellComplex::from_text(&text)?, p.display().to_string()))
        }
        None => standard(cfg.family, cfg.size),
    }
}

fn standard(f: tqo_core::Family, n: usize) -> Result<(CellComplex, String)> {
    Ok((build_standard(f.surface(), f, n)?, format!("{f}({n})")))
}

pub fn build_model(alg: &Algebra, c: &CellComplex, fault: Option<Fault>, s: &Settings) -> Result<LatticeModel> {
    match (alg, fault) {
        (Algebra::Fusion(fd), Some(Fault::CorruptF)) => lw::inject_fault(c, fd, s),
        (Algebra::Group(_), Some(Fault::CorruptF)) => Err(Error::InvalidInput("corrupt-f needs a Levin-Wen model".into())),
        (alg, fault) => {
            let m = match alg {
                Algebra::Group(g) => dw::build(c, g, s)?,
                Algebra::Fusion(fd) => lw::build(c, fd, s)?,
            };
            match fault {
                Some(Fault::NonCommuting) => dw::inject_fault(&m, s.seed, s),
                _ => Ok(m),
            }
        }
    }
}

/// Runs `jobs` on up to `workers` threads; results come back in job order.
fn run_jobs<T: Send>(jobs: Vec<Box<dyn Fn() -> T + Send + Sync + '_>>, workers: usize) -> Vec<T> {
    let n = jobs.len();
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<T>>> = (0..n).map(|_| Mutex::new(None)).collect();
    std::thread::scope(|sc| {
        for _ in 0..workers.clamp(1, n.max(1)) {
            sc.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let v = jobs[i]();
                *slots[i].lock().unwrap() = Some(v);
            });
        }
    });
    slots.into_iter().map(|m| m.into_inner().unwrap().unwrap()).collect()
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Prints the model summary. Returns the exit code.
/// Names for the two term kinds. The string-net vertex and plaquette terms
/// also go by the face-consistency and vertex-operator names.
fn term_names(alg: &Algebra) -> [(&'static str, &'static str); 2] {
    match alg {
        Algebra::Group(_) => [("H_v", "vertex gauge average"), ("H_f", "face flatness")],
        Algebra::Fusion(_) => [("Q_v", "vertex fusion rule, also written H_f"), ("B_p", "plaquette projector, also written H_v")],
    }
}

/// Faces whose boundary walk uses some edge twice.
fn self_adjacent_faces(c: &CellComplex) -> usize {
    c.faces
        .iter()
        .filter(|f| {
            let mut seen = std::collections::BTreeSet::new();
            !f.walk.iter().all(|w| seen.insert(w.edge))
        })
        .count()
}

pub fn cmd_build(cfg: &RunConfig, fault: Option<Fault>) -> Result<i32> {
    let s = &cfg.settings;
    let alg = load_algebra(&cfg.model, &cfg.algebra, s)?;
    let (c, label) = complex_of(cfg)?;
    let m = build_model(&alg, &c, fault, s)?;
    let (mut idem, mut herm) = (0.0f64, 0.0f64);
    for t in &m.terms {
        let (p, h) = t.op.projector_residuals();
        idem = idem.max(p);
        herm = herm.max(h);
    }
    println!("dim={} terms={}", m.dim(), m.terms.len());
    println!("model={} complex={label}", m.descriptor);
    println!("edges={} vertices={} faces={} euler={}", c.n_edges(), c.n_vertices, c.n_faces(), c.euler_characteristic());
    println!("vertex_terms={} face_terms={}", m.count(TermKind::Vertex), m.count(TermKind::Face));
    println!("complex_issues={}", c.validate().len());
    println!("self_adjacent_faces={}", self_adjacent_faces(&c));
    let [(vn, vd), (fnm, fd)] = term_names(&alg);
    println!("vertex_term={vn} ({vd})");
    println!("face_term={fnm} ({fd})");
    println!("term_projector_residual={idem:e}");
    println!("term_hermitian_residual={herm:e}");
    if let Algebra::Fusion(fd) = &alg {
        println!("pentagon_residual={:e}", fd.pentagon_residual()?);
    }
    Ok(0)
}

/// All `k`-subsets of `items` for `k` in `1..=max`, shortest first.
fn subsets(items: &[usize], max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    for k in 1..=max.min(items.len()) {
        rec(items, k, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// TQO1 regions with their enclosing disks. In `auto` mode regions whose
/// hull is not a disk enclosing them are skipped; listed regions are not.
fn tqo1_regions(cfg: &RunConfig, c: &CellComplex) -> Result<Vec<(Vec<usize>, Result<DiskRegion>)>> {
    let fixed = cfg.tqo1_disk_faces.as_ref().map(|f| disk_from_faces(c, f)).transpose()?;
    let disk_for = |r: &[usize]| match &fixed {
        Some(d) => Ok(d.clone()),
        None => hull_of_edges(c, r),
    };
    Ok(match &cfg.tqo1_regions {
        Regions::List(rs) => rs.iter().map(|r| (r.clone(), disk_for(r))).collect(),
        Regions::Auto => {
            let pool: Vec<usize> = match &fixed {
                Some(d) => d.interior_edges.clone(),
                None => (0..c.n_edges()).collect(),
            };
            subsets(&pool, cfg.tqo1_max_edges)
                .into_iter()
                .filter_map(|r| {
                    let d = disk_for(&r).ok()?;
                    let reg = Region::new(c, r.iter().copied()).ok()?;
                    d.encloses(&reg).then_some((r, Ok(d)))
                })
                .collect()
        }
    })
}

type Job<'a> = Box<dyn Fn() -> Result<VerificationReport> + Send + Sync + 'a>;

/// Writes the report. Returns the exit code.
pub fn cmd_verify(cfg: &RunConfig, fault: Option<Fault>) -> Result<i32> {
    let s = &cfg.settings;
    let alg = load_algebra(&cfg.model, &cfg.algebra, s)?;
    let (c, label) = complex_of(cfg)?;
    let m = build_model(&alg, &c, fault, s)?;
    let (m, c) = (&m, &c);
    let needs_ground = cfg.checks.iter().any(|k| k != "tqo3");
    let ground = if needs_ground { Some(Ground::compute(m, s)) } else { None };
    let ground = || -> Result<&Ground> { ground.as_ref().unwrap().as_ref().map_err(Clone::clone) };

    let mut names = Vec::new();
    let mut jobs: Vec<Job> = Vec::new();
    for check in &cfg.checks {
        match check.as_str() {
            "tqo0" => {
                names.push("tqo0".to_string());
                jobs.push(Box::new(|| check_tqo0_with(&m, ground()?, s)));
            }
            "tqo1" => {
                for (i, (edges, disk)) in tqo1_regions(cfg, c)?.into_iter().enumerate() {
                    names.push(format!("tqo1_{i}"));
                    jobs.push(Box::new(move || {
                        let region = Region::new(c, edges.iter().copied())?;
                        let disk = disk.clone()?;
                        check_tqo1(m, ground()?, &region, &disk, s)
                    }));
                }
            }
            "tqo2" => {
                names.push("tqo2".to_string());
                jobs.push(Box::new(|| {
                    if cfg.tqo2_face >= c.n_faces() {
                        return Err(Error::InvalidInput(format!("face {} out of range", cfg.tqo2_face)));
                    }
                    let a = Region::new(&c, c.face_edges(cfg.tqo2_face))?;
                    let b = disk_region(&c, cfg.tqo2_face, cfg.tqo2_radius)?;
                    let mut r = check_tqo2(&m, ground()?, &a, &b, s)?;
                    r.param("face", cfg.tqo2_face);
                    r.param("radius", cfg.tqo2_radius);
                    Ok(r)
                }));
            }
            "tqo3" => {
                names.push("tqo3".to_string());
                let alg = &alg;
                jobs.push(Box::new(move || {
                    let mut models = Vec::new();
                    let mut surface = None;
                    for &(f, n) in &cfg.tqo3_cellulations {
                        if *surface.get_or_insert(f.surface()) != f.surface() {
                            return Err(Error::InvalidInput("tqo3 cellulations must share one surface".into()));
                        }
                        let (cc, l) = standard(f, n)?;
                        models.push((l, build_model(alg, &cc, None, s)?));
                    }
                    let surface = surface.map(|t| t.to_string()).unwrap_or_default();
                    check_tqo3(&surface, &format!("{}/{}", cfg.model, cfg.algebra), &models, s)
                }));
            }
            "distance" => {
                names.push("distance".to_string());
                let alg = &alg;
                jobs.push(Box::new(move || {
                    let Algebra::Group(g) = alg else {
                        return Err(Error::Precondition("distance search needs a Dijkgraaf-Witten model".into()));
                    };
                    let gs = ground()?.space().ok_or_else(|| Error::Precondition("product of terms is not a projector".into()))?;
                    let d = distance_search(&m, g, gs, cfg.distance_weight, s)?;
                    let mut r = VerificationReport::new("distance", &m.descriptor, s);
                    r.param("weight", cfg.distance_weight);
                    r.scalar("distance", d);
                    Ok(r)
                }));
            }
            other => return Err(Error::InvalidInput(format!("unknown check `{other}`"))),
        }
    }
    let results = run_jobs(jobs, cfg.workers);
    let entries: Vec<Entry> = names
        .into_iter()
        .zip(results)
        .map(|(name, result)| Entry {
            name,
            result: result.map(|mut r| {
                r.timestamp = cfg.timestamp.clone();
                r
            }),
        })
        .collect();
    let mut fields = vec![
        ("model", m.descriptor.clone()),
        ("complex", label),
        ("dim", m.dim().to_string()),
        ("seed", s.seed.to_string()),
        ("timestamp", cfg.timestamp.clone()),
        ("self_adjacent_faces", self_adjacent_faces(&m.complex).to_string()),
    ];
    for (k, (name, desc)) in ["term.vertex", "term.face"].into_iter().zip(term_names(&alg)) {
        fields.push((k, format!("{name} ({desc})")));
    }
    if let Some(f) = fault {
        fields.push(("fault", f.name().to_string()));
    }
    let text = report::render(&Header { title: "topological order verification report", fields }, &entries);
    emit(cfg.out.as_deref(), &text)?;
    Ok(report::exit_code(&entries))
}

struct TableLine {
    gsd: Result<u64>,
    reference: Result<Option<u64>>,
    method: &'static str,
    surface: String,
    cellulation: String,
}

fn table_row(row: &TableRow, s: &Settings) -> TableLine {
    let cellulation = format!("{}({})", row.family, row.size);
    let surface = row.family.surface().to_string();
    let method = if row.model == "lw" { "reference" } else { "oracle" };
    let built = (|| {
        let alg = load_algebra(&row.model, &row.algebra, s)?;
        let (c, _) = standard(row.family, row.size)?;
        let m = build_model(&alg, &c, None, s)?;
        Ok::<_, Error>((alg, c, m))
    })();
    let (alg, c, m) = match built {
        Ok(x) => x,
        Err(e) => return TableLine { gsd: Err(e.clone()), reference: Err(e), method, surface, cellulation },
    };
    let gsd = m.ground_space(s).map(|g| g.rank() as u64);
    let reference = match &alg {
        Algebra::Group(g) => dw::gsd_oracle(&c, g, s.caps.matrix_free).map(Some),
        Algebra::Fusion(fd) => Ok(lw::gsd_reference(fd, c.surface.genus())),
    };
    TableLine { gsd, reference, method, surface, cellulation }
}

fn cell<T: std::fmt::Display>(r: &Result<T>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("error({})", e.exit_code()),
    }
}

/// Writes the degeneracy table. Exit 1 only when rank and oracle disagree.
pub fn cmd_gsd_table(cfg: &RunConfig) -> Result<i32> {
    if cfg.table_rows.is_empty() {
        return Err(Error::InvalidInput("`table.rows` is empty".into()));
    }
    let s = &cfg.settings;
    let jobs: Vec<Box<dyn Fn() -> TableLine + Send + Sync>> =
        cfg.table_rows.iter().map(|r| Box::new(move || table_row(r, s)) as Box<dyn Fn() -> TableLine + Send + Sync>).collect();
    let lines = run_jobs(jobs, cfg.workers);
    let mut human = String::new();
    let mut body = String::new();
    let mut disagree = false;
    writeln!(human, "# ground-state degeneracy table").unwrap();
    writeln!(human, "# {:<14} {:<8} {:<26} {:>8} {:<10} agree", "algebra", "surface", "cellulation", "gsd", "method").unwrap();
    for (i, (row, l)) in cfg.table_rows.iter().zip(&lines).enumerate() {
        let algebra = format!("{}/{}", row.model, row.algebra);
        let agree = match (&l.gsd, &l.reference) {
            (Ok(a), Ok(Some(b))) => (a == b).to_string(),
            (Ok(_), Ok(None)) => "n/a".to_string(),
            _ => "error".to_string(),
        };
        disagree |= agree == "false";
        let reference = match &l.reference {
            Ok(Some(v)) => v.to_string(),
            Ok(None) => "n/a".to_string(),
            Err(e) => format!("error({})", e.exit_code()),
        };
        writeln!(human, "# {algebra:<14} {:<8} {:<26} {:>8} {:<10} {agree}", l.surface, l.cellulation, cell(&l.gsd), "rank").unwrap();
        writeln!(human, "# {algebra:<14} {:<8} {:<26} {:>8} {:<10} {agree}", l.surface, l.cellulation, reference, l.method).unwrap();
        let p = format!("row.{i}");
        writeln!(body, "{p}.algebra = {algebra}").unwrap();
        writeln!(body, "{p}.surface = {}", l.surface).unwrap();
        writeln!(body, "{p}.cellulation = {}", l.cellulation).unwrap();
        writeln!(body, "{p}.gsd.rank = {}", cell(&l.gsd)).unwrap();
        writeln!(body, "{p}.gsd.{} = {reference}", l.method).unwrap();
        writeln!(body, "{p}.agree = {agree}").unwrap();
        for e in [l.gsd.as_ref().err(), l.reference.as_ref().err()].into_iter().flatten().take(1) {
            writeln!(body, "{p}.error = {e}").unwrap();
        }
    }
    let text = format!(
        "{human}format_version = {}\nseed = {}\ntimestamp = {}\n{body}",
        report::FORMAT_VERSION,
        s.seed,
        cfg.timestamp
    );
    emit(cfg.out.as_deref(), &text)?;
    Ok(disagree as i32)
}
