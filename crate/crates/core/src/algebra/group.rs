use crate::error::{Error, InvariantKind, Result};
use std::fmt::Write;

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    pub name: String,
    pub order: usize,
    /// `mult[g * order + h]` is the index of `g h`.
    mult: Vec<usize>,
    pub identity: usize,
    pub inv: Vec<usize>,
}

impl FiniteGroup {
    /// Validates the table (closure, associativity, unit, inverses) and derives
    /// the identity and inverse map.
    pub fn from_table(name: &str, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidInput("empty multiplication table".into()));
        }
        if table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidInput("multiplication table must be square with entries < order".into()));
        }
        let mult: Vec<usize> = table.into_iter().flatten().collect();
        let m = |a: usize, b: usize| mult[a * n + b];
        if n <= 128 {
            for a in 0..n {
                for b in 0..n {
                    let ab = m(a, b);
                    for c in 0..n {
                        if m(ab, c) != m(a, m(b, c)) {
                            return Err(Error::Invariant {
                                kind: InvariantKind::Associativity,
                                msg: format!("({a}{b}){c} != {a}({b}{c})"),
                            });
                        }
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| m(e, g) == g && m(g, e) == g))
            .ok_or(Error::Invariant { kind: InvariantKind::Unit, msg: "no two-sided identity".into() })?;
        let mut inv = Vec::with_capacity(n);
        for g in 0..n {
            let h = (0..n).find(|&h| m(g, h) == identity && m(h, g) == identity).ok_or(Error::Invariant {
                kind: InvariantKind::Inverse,
                msg: format!("element {g} has no inverse"),
            })?;
            inv.push(h);
        }
        Ok(FiniteGroup { name: name.to_string(), order: n, mult, identity, inv })
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("cyclic group of order 0".into()));
        }
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(&format!("Z{n}"), table)
    }

    /// Permutations of three points in lexicographic order, composed as functions.
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let table = perms
            .iter()
            .map(|a| perms.iter().map(|b| idx([a[b[0]], a[b[1]], a[b[2]]])).collect())
            .collect();
        FiniteGroup::from_table("S3", table).expect("S3 table is a group")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("group {}\norder {}\nmult\n", self.name, self.order);
        for a in 0..self.order {
            let row: Vec<String> = (0..self.order).map(|b| self.mul(a, b).to_string()).collect();
            writeln!(s, "{}", row.join(" ")).unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut name = None;
        let mut order = None;
        let mut rows: Vec<Vec<usize>> = Vec::new();
        let mut in_table = false;
        for (ln, line) in text.lines().enumerate() {
            let perr = |msg: String| Error::Parse { line: ln + 1, msg };
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if in_table {
                let row = line
                    .split_whitespace()
                    .map(|t| t.parse::<usize>().map_err(|e| perr(format!("`{t}`: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                rows.push(row);
                continue;
            }
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            match key {
                "group" => name = Some(rest.trim().to_string()),
                "order" => order = Some(rest.trim().parse::<usize>().map_err(|e| perr(e.to_string()))?),
                "mult" => in_table = true,
                _ => return Err(perr(format!("unknown record `{key}`"))),
            }
        }
        let name = name.ok_or(Error::Parse { line: 0, msg: "missing `group` line".into() })?;
        let order = order.ok_or(Error::Parse { line: 0, msg: "missing `order` line".into() })?;
        if rows.len() != order {
            return Err(Error::Parse { line: 0, msg: format!("expected {order} table rows, found {}", rows.len()) });
        }
        FiniteGroup::from_table(&name, rows)
    }
}

/// `Z1`, `Z2`, `Z3`, `Z4` or `S3`.
pub fn builtin_group(name: &str) -> Result<FiniteGroup> {
    match name {
        "Z1" => FiniteGroup::cyclic(1),
        "Z2" => FiniteGroup::cyclic(2),
        "Z3" => FiniteGroup::cyclic(3),
        "Z4" => FiniteGroup::cyclic(4),
        "S3" => Ok(FiniteGroup::symmetric3()),
        _ => Err(Error::InvalidInput(format!("unknown group `{name}`"))),
    }
}

pub fn load_group(path: &std::path::Path) -> Result<FiniteGroup> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    FiniteGroup::from_text(&text)
}
