//! Multiplicity-free fusion data.
//!
//! `F^{abc}_d[e, f]` is the change of basis from `((a b)_e c)_d` to
//! `(a (b c)_f)_d`; it is stored only when `(a,b,e)`, `(e,c,d)`, `(b,c,f)` and
//! `(a,f,d)` are all allowed fusions.

use crate::error::{Error, InvariantKind, Result};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt::Write;

pub type FKey = [usize; 6];

#[derive(Debug, Clone, PartialEq)]
pub struct FusionData {
    pub name: String,
    pub labels: usize,
    pub unit: usize,
    pub dual: Vec<usize>,
    pub qdim: Vec<f64>,
    pub total_dim_sq: f64,
    /// `fusion[(a * n + b) * n + c]` is `N_{ab}^c`.
    fusion: Vec<bool>,
    pub fsymbol: BTreeMap<FKey, Complex64>,
}

impl FusionData {
    /// Assembles data without validating it.
    pub fn new_unchecked(
        name: &str,
        unit: usize,
        dual: Vec<usize>,
        qdim: Vec<f64>,
        rules: &[(usize, usize, usize)],
        fsymbol: BTreeMap<FKey, Complex64>,
    ) -> Self {
        let n = dual.len();
        let mut fusion = vec![false; n * n * n];
        for &(a, b, c) in rules {
            fusion[(a * n + b) * n + c] = true;
        }
        let total_dim_sq = qdim.iter().map(|d| d * d).sum();
        FusionData { name: name.to_string(), labels: n, unit, dual, qdim, total_dim_sq, fusion, fsymbol }
    }

    #[inline]
    pub fn n(&self, a: usize, b: usize, c: usize) -> bool {
        self.fusion[(a * self.labels + b) * self.labels + c]
    }

    /// Labels `c` with `N_{ab}^c = 1`.
    pub fn fuse(&self, a: usize, b: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.labels).filter(move |&c| self.n(a, b, c))
    }

    pub fn admissible(&self, k: &FKey) -> bool {
        let [a, b, c, d, e, f] = *k;
        self.n(a, b, e) && self.n(e, c, d) && self.n(b, c, f) && self.n(a, f, d)
    }

    /// The F-symbol, zero off the admissible set; a missing admissible entry is an error.
    pub fn f(&self, a: usize, b: usize, c: usize, d: usize, e: usize, f: usize) -> Result<Complex64> {
        let k = [a, b, c, d, e, f];
        if !self.admissible(&k) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        self.fsymbol
            .get(&k)
            .copied()
            .ok_or_else(|| Error::InvalidInput(format!("missing F-symbol {k:?}")))
    }

    /// Every admissible sextuple, in lexicographic order.
    pub fn admissible_keys(&self) -> Vec<FKey> {
        let n = self.labels;
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        for e in 0..n {
                            for f in 0..n {
                                let k = [a, b, c, d, e, f];
                                if self.admissible(&k) {
                                    out.push(k);
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Largest deviation from the pentagon equation
    /// `F^{fcd}_e[g,l] F^{abl}_e[f,k] = sum_h F^{abc}_g[f,h] F^{ahd}_e[g,k] F^{bcd}_k[h,l]`
    /// over all label choices for which both outer fusion trees exist.
    pub fn pentagon_residual(&self) -> Result<f64> {
        let n = self.labels;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        for e in 0..n {
                            for f in self.fuse(a, b) {
                                for g in self.fuse(f, c) {
                                    if !self.n(g, d, e) {
                                        continue;
                                    }
                                    for l in self.fuse(c, d) {
                                        for k in self.fuse(b, l) {
                                            if !self.n(a, k, e) {
                                                continue;
                                            }
                                            let lhs = self.f(f, c, d, e, g, l)? * self.f(a, b, l, e, f, k)?;
                                            let mut rhs = Complex64::new(0.0, 0.0);
                                            for h in 0..n {
                                                rhs += self.f(a, b, c, g, f, h)?
                                                    * self.f(a, h, d, e, g, k)?
                                                    * self.f(b, c, d, k, h, l)?;
                                            }
                                            worst = worst.max((lhs - rhs).norm());
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(worst)
    }

    /// Largest `|F F^dagger - I|` entry over all F-matrices.
    pub fn unitarity_residual(&self) -> Result<f64> {
        let n = self.labels;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let es: Vec<usize> = (0..n).filter(|&e| self.n(a, b, e) && self.n(e, c, d)).collect();
                        let fs: Vec<usize> = (0..n).filter(|&f| self.n(b, c, f) && self.n(a, f, d)).collect();
                        if es.len() != fs.len() {
                            return Ok(f64::INFINITY);
                        }
                        for &e1 in &es {
                            for &e2 in &es {
                                let mut s = Complex64::new(0.0, 0.0);
                                for &f in &fs {
                                    s += self.f(a, b, c, d, e1, f)? * self.f(a, b, c, d, e2, f)?.conj();
                                }
                                let target = if e1 == e2 { 1.0 } else { 0.0 };
                                worst = worst.max((s - target).norm());
                            }
                        }
                    }
                }
            }
        }
        Ok(worst)
    }

    /// Largest `|d_a d_b - sum_c N_{ab}^c d_c|`.
    pub fn dimension_residual(&self) -> f64 {
        let n = self.labels;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let s: f64 = self.fuse(a, b).map(|c| self.qdim[c]).sum();
                worst = worst.max((self.qdim[a] * self.qdim[b] - s).abs());
            }
        }
        worst
    }

    /// Checks every structural and numerical invariant at tolerance `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let n = self.labels;
        let bad = |kind, msg: String| Err(Error::Invariant { kind, msg });
        if self.unit >= n || self.dual.len() != n || self.qdim.len() != n || self.fusion.len() != n * n * n {
            return Err(Error::InvalidInput("inconsistent label counts".into()));
        }
        for a in 0..n {
            if self.dual[a] >= n || self.dual[self.dual[a]] != a {
                return bad(InvariantKind::Duality, format!("dual is not an involution at {a}"));
            }
            if !(self.qdim[a] > 0.0) {
                return bad(InvariantKind::DimensionEquation, format!("d_{a} is not positive"));
            }
            for c in 0..n {
                if self.n(a, self.unit, c) != (a == c) || self.n(self.unit, a, c) != (a == c) {
                    return bad(InvariantKind::Unit, format!("unit does not fuse trivially with {a}"));
                }
            }
            for b in 0..n {
                if self.n(a, b, self.unit) != (b == self.dual[a]) {
                    return bad(InvariantKind::Duality, format!("N_({a},{b})^1 disagrees with dual"));
                }
            }
        }
        if self.dual[self.unit] != self.unit {
            return bad(InvariantKind::Duality, "unit is not self-dual".into());
        }
        let r = self.dimension_residual();
        if r > tol {
            return bad(InvariantKind::DimensionEquation, format!("residual {r:e}"));
        }
        if let Some(k) = self.fsymbol.keys().find(|k| k.iter().any(|&x| x >= n) || !self.admissible(k)) {
            return Err(Error::InvalidInput(format!("F-symbol {k:?} is not admissible")));
        }
        let r = self.unitarity_residual()?;
        if r > tol {
            return bad(InvariantKind::Unitarity, format!("residual {r:e}"));
        }
        let r = self.pentagon_residual()?;
        if r > tol {
            return bad(InvariantKind::Pentagon, format!("residual {r:e}"));
        }
        Ok(())
    }

    /// Group category `Vec_{Z_n}` with trivial associator.
    pub fn vec_zn(n: usize) -> Self {
        let rules: Vec<_> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b, (a + b) % n))).collect();
        let mut fd = FusionData::new_unchecked(
            &format!("VecZ{n}"),
            0,
            (0..n).map(|a| (n - a) % n).collect(),
            vec![1.0; n],
            &rules,
            BTreeMap::new(),
        );
        for k in fd.admissible_keys() {
            fd.fsymbol.insert(k, Complex64::new(1.0, 0.0));
        }
        fd
    }

    /// Fibonacci category; label 0 is the unit and 1 is `tau`.
    pub fn fibonacci() -> Self {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let rules = [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0), (1, 1, 1)];
        let mut fd = FusionData::new_unchecked("Fibonacci", 0, vec![0, 1], vec![1.0, phi], &rules, BTreeMap::new());
        for k in fd.admissible_keys() {
            let v = match k {
                [1, 1, 1, 1, 0, 0] => 1.0 / phi,
                [1, 1, 1, 1, 0, 1] | [1, 1, 1, 1, 1, 0] => 1.0 / phi.sqrt(),
                [1, 1, 1, 1, 1, 1] => -1.0 / phi,
                _ => 1.0,
            };
            fd.fsymbol.insert(k, Complex64::new(v, 0.0));
        }
        fd
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "# F^{{abc}}_d[e,f] maps ((a b)_e c)_d to (a (b c)_f)_d; unitary gauge").unwrap();
        writeln!(s, "fusion {}", self.name).unwrap();
        writeln!(s, "labels {}", self.labels).unwrap();
        writeln!(s, "unit {}", self.unit).unwrap();
        let pairs: Vec<String> = self.dual.iter().enumerate().map(|(a, b)| format!("{a}:{b}")).collect();
        writeln!(s, "dual {}", pairs.join(" ")).unwrap();
        let dims: Vec<String> = self.qdim.iter().enumerate().map(|(a, d)| format!("{a}:{d}")).collect();
        writeln!(s, "qdim {}", dims.join(" ")).unwrap();
        for a in 0..self.labels {
            for b in 0..self.labels {
                for c in self.fuse(a, b) {
                    writeln!(s, "N {a} {b} {c}").unwrap();
                }
            }
        }
        for (k, v) in &self.fsymbol {
            writeln!(s, "F {} {} {} {} {} {} {} {}", k[0], k[1], k[2], k[3], k[4], k[5], v.re, v.im).unwrap();
        }
        s
    }

    /// Parses without validating.
    pub fn from_text_unchecked(text: &str) -> Result<Self> {
        let mut name = None;
        let mut labels = None;
        let mut unit = None;
        let mut dual = Vec::new();
        let mut qdim = Vec::new();
        let mut rules = Vec::new();
        let mut fsymbol = BTreeMap::new();
        for (ln, line) in text.lines().enumerate() {
            let perr = |msg: String| Error::Parse { line: ln + 1, msg };
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tok: Vec<&str> = line.split_whitespace().collect();
            let int = |t: &str| t.parse::<usize>().map_err(|e| perr(format!("`{t}`: {e}")));
            let real = |t: &str| t.parse::<f64>().map_err(|e| perr(format!("`{t}`: {e}")));
            let pairs = |toks: &[&str]| -> Result<Vec<(usize, String)>> {
                toks.iter()
                    .map(|t| {
                        let (i, v) = t.split_once(':').ok_or_else(|| perr(format!("expected `i:value`, got `{t}`")))?;
                        Ok((int(i)?, v.to_string()))
                    })
                    .collect()
            };
            match tok[0] {
                "fusion" if tok.len() == 2 => name = Some(tok[1].to_string()),
                "labels" if tok.len() == 2 => labels = Some(int(tok[1])?),
                "unit" if tok.len() == 2 => unit = Some(int(tok[1])?),
                "dual" => {
                    for (i, v) in pairs(&tok[1..])? {
                        dual.push((i, int(&v)?));
                    }
                }
                "qdim" => {
                    for (i, v) in pairs(&tok[1..])? {
                        qdim.push((i, real(&v)?));
                    }
                }
                "N" if tok.len() == 4 => rules.push((int(tok[1])?, int(tok[2])?, int(tok[3])?)),
                "F" if tok.len() == 9 => {
                    let mut k = [0usize; 6];
                    for (i, slot) in k.iter_mut().enumerate() {
                        *slot = int(tok[i + 1])?;
                    }
                    if fsymbol.insert(k, Complex64::new(real(tok[7])?, real(tok[8])?)).is_some() {
                        return Err(perr(format!("duplicate F-symbol {k:?}")));
                    }
                }
                other => return Err(perr(format!("malformed `{other}` record"))),
            }
        }
        let missing = |what: &str| Error::Parse { line: 0, msg: format!("missing `{what}` line") };
        let n = labels.ok_or_else(|| missing("labels"))?;
        let name = name.ok_or_else(|| missing("fusion"))?;
        let unit = unit.ok_or_else(|| missing("unit"))?;
        let dual = by_label("dual", n, dual)?;
        let qdim = by_label("qdim", n, qdim)?;
        if rules.iter().any(|&(a, b, c)| a >= n || b >= n || c >= n) {
            return Err(Error::Parse { line: 0, msg: "fusion rule label out of range".into() });
        }
        Ok(FusionData::new_unchecked(&name, unit, dual, qdim, &rules, fsymbol))
    }

    /// Parses and enforces every invariant at `tol`.
    pub fn from_text(text: &str, tol: f64) -> Result<Self> {
        let fd = FusionData::from_text_unchecked(text)?;
        fd.validate(tol)?;
        Ok(fd)
    }
}

fn by_label<T>(what: &str, n: usize, mut v: Vec<(usize, T)>) -> Result<Vec<T>> {
    v.sort_by_key(|p| p.0);
    if v.len() != n || v.iter().enumerate().any(|(i, p)| p.0 != i) {
        return Err(Error::Parse { line: 0, msg: format!("`{what}` must list every label once") });
    }
    Ok(v.into_iter().map(|p| p.1).collect())
}

/// `VecZ2`, `VecZ3` or `Fibonacci`.
pub fn builtin_fusion(name: &str) -> Result<FusionData> {
    match name {
        "VecZ2" => Ok(FusionData::vec_zn(2)),
        "VecZ3" => Ok(FusionData::vec_zn(3)),
        "Fibonacci" | "Fib" => Ok(FusionData::fibonacci()),
        _ => Err(Error::InvalidInput(format!("unknown fusion category `{name}`"))),
    }
}

pub fn load_fusion(path: &std::path::Path, tol: f64) -> Result<FusionData> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    FusionData::from_text(&text, tol)
}
