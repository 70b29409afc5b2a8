use std::fmt::Write as _;
use std::path::Path;

use crate::diffalg::{Ranking, Relation, TriangularSet};
use crate::error::{Error, Result};
use crate::expr::{Expr, VarId};
use crate::groupoids::GroupoidId;
use crate::odeparse::{parse_expr, parse_rhs, print_expr};
use crate::symmetry::{signature, Signature};

use super::chgt::{Normalization, UNKNOWNS};

const DEFAULT_TABLE: &str = include_str!("../../data/kamke.table");

/// One target equation with the data needed to match and specialize it.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetEntry {
    pub id: String,
    pub name: String,
    pub rhs: Expr,
    pub signature: Signature,
    pub groupoid: GroupoidId,
    pub symmetry_degree: u32,
    /// Token expressions whose values on the target were inverted to obtain
    /// the necessary form. Empty for signature-only entries.
    pub invariants: Vec<Expr>,
    pub normalizations: Vec<Normalization>,
    pub necessary_form: TriangularSet,
}

impl TargetEntry {
    pub fn is_signature_only(&self) -> bool {
        self.necessary_form.is_empty()
    }

    /// Recomputes the signature and checks dim 0 and the degree.
    pub fn check(&self) -> Result<()> {
        let bad = |reason: String| Error::EntryInconsistent {
            id: self.id.clone(),
            reason,
        };
        let sig = signature(&self.rhs)?;
        if sig != self.signature {
            return Err(bad(format!(
                "stored signature {} but the equation has {sig}",
                self.signature
            )));
        }
        if self.is_signature_only() {
            return Ok(());
        }
        let (dim, deg) = self.necessary_form.dim_and_deg(&UNKNOWNS)?;
        if dim != 0 {
            return Err(bad(format!("necessary form has dimension {dim}")));
        }
        if deg != self.symmetry_degree as u64 {
            return Err(bad(format!(
                "necessary form has degree {deg}, symdeg is {}",
                self.symmetry_degree
            )));
        }
        Ok(())
    }
}

/// Entries that passed the load-time checks, plus one status per entry in
/// file order.
#[derive(Clone, Debug, Default)]
pub struct LoadedTable {
    pub entries: Vec<TargetEntry>,
    pub status: Vec<(String, Option<Error>)>,
}

impl LoadedTable {
    pub fn is_consistent(&self) -> bool {
        self.status.iter().all(|(_, e)| e.is_none())
    }

    pub fn problems(&self) -> impl Iterator<Item = &Error> {
        self.status.iter().filter_map(|(_, e)| e.as_ref())
    }
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::TableSyntax {
        line,
        message: message.into(),
    }
}

#[derive(Default)]
struct Draft {
    line: usize,
    id: String,
    name: Option<String>,
    rhs: Option<Expr>,
    signature: Option<Signature>,
    groupoid: Option<GroupoidId>,
    symdeg: Option<u32>,
    invariants: Vec<Expr>,
    normalizations: Vec<Normalization>,
    relations: Vec<Relation>,
}

impl Draft {
    fn finish(self) -> Result<TargetEntry> {
        let missing = |k: &str| syntax(self.line, format!("entry {} has no {k}=", self.id));
        let necessary_form = TriangularSet::new(Ranking::barred(), self.relations)
            .map_err(|e| syntax(self.line, format!("entry {}: {e}", self.id)))?;
        Ok(TargetEntry {
            name: self.name.ok_or_else(|| missing("name"))?,
            rhs: self.rhs.ok_or_else(|| missing("rhs"))?,
            signature: self.signature.ok_or_else(|| missing("signature"))?,
            groupoid: self.groupoid.ok_or_else(|| missing("groupoid"))?,
            symmetry_degree: self.symdeg.ok_or_else(|| missing("symdeg"))?,
            id: self.id,
            invariants: self.invariants,
            normalizations: self.normalizations,
            necessary_form,
        })
    }
}

fn leader_var(text: &str) -> Option<VarId> {
    match text {
        "xb" => Some(VarId::XB),
        "yb" => Some(VarId::YB),
        "pb" => Some(VarId::PB),
        _ => None,
    }
}

fn parse_relation(value: &str, line: usize) -> Result<Relation> {
    let (lhs, rhs) = value
        .split_once('=')
        .ok_or_else(|| syntax(line, "relation needs '='"))?;
    let lhs = lhs.trim();
    let (name, degree) = match lhs.split_once('^') {
        Some((n, d)) => (
            n.trim(),
            d.trim()
                .parse::<u32>()
                .map_err(|_| syntax(line, "bad relation degree"))?,
        ),
        None => (lhs, 1),
    };
    let leader =
        leader_var(name).ok_or_else(|| syntax(line, format!("unknown relation leader {name}")))?;
    if degree == 0 {
        return Err(syntax(line, "relation degree must be positive"));
    }
    let rhs = parse_expr(rhs.trim()).map_err(|e| syntax(line, e.to_string()))?;
    Relation::monic(leader, degree, &rhs).map_err(|e| syntax(line, e.to_string()))
}

/// Parses a table without running the consistency checks.
pub fn parse_table(text: &str) -> Result<Vec<TargetEntry>> {
    let mut out = Vec::new();
    let mut draft: Option<Draft> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if let Some(rest) = t.strip_prefix("[entry ") {
            if draft.is_some() {
                return Err(syntax(line, "missing end before new entry"));
            }
            let id = rest
                .strip_suffix(']')
                .ok_or_else(|| syntax(line, "unterminated entry header"))?
                .trim();
            if id.is_empty() {
                return Err(syntax(line, "empty entry id"));
            }
            draft = Some(Draft {
                line,
                id: id.to_string(),
                ..Draft::default()
            });
            continue;
        }
        let d = draft
            .as_mut()
            .ok_or_else(|| syntax(line, "content outside an entry"))?;
        if t == "end" {
            out.push(draft.take().expect("open entry").finish()?);
            continue;
        }
        let (key, value) = t
            .split_once('=')
            .ok_or_else(|| syntax(line, "expected key=value"))?;
        let value = value.trim();
        let parsed = |r: Result<Expr>| r.map_err(|e| syntax(line, e.to_string()));
        match key.trim() {
            "name" => d.name = Some(value.to_string()),
            "rhs" => d.rhs = Some(parsed(parse_rhs(value))?),
            "signature" => {
                d.signature = Some(
                    value
                        .parse()
                        .map_err(|e: Error| syntax(line, e.to_string()))?,
                )
            }
            "groupoid" => {
                d.groupoid = Some(
                    value
                        .parse()
                        .map_err(|e: Error| syntax(line, e.to_string()))?,
                )
            }
            "symdeg" => {
                let n: u32 = value
                    .parse()
                    .map_err(|_| syntax(line, "symdeg must be a positive integer"))?;
                if n == 0 {
                    return Err(syntax(line, "symdeg must be a positive integer"));
                }
                d.symdeg = Some(n);
            }
            "invariants" => {
                for part in value.split(',') {
                    d.invariants.push(parsed(parse_expr(part.trim()))?);
                }
            }
            "normalize" => {
                let (l, r) = value
                    .split_once('=')
                    .ok_or_else(|| syntax(line, "normalize needs '='"))?;
                d.normalizations.push(Normalization {
                    lhs: parsed(parse_expr(l.trim()))?,
                    rhs: parsed(parse_expr(r.trim()))?,
                });
            }
            "relation" => {
                let r = parse_relation(value, line)?;
                d.relations.push(r);
            }
            other => return Err(syntax(line, format!("unknown key {other}"))),
        }
    }
    if let Some(d) = draft {
        return Err(syntax(d.line, format!("entry {} has no end", d.id)));
    }
    Ok(out)
}

/// Parses and checks every entry; inconsistent entries are reported in
/// `status` and left out of `entries`.
pub fn load_table_str(text: &str) -> Result<LoadedTable> {
    let parsed = parse_table(text)?;
    let checks: Vec<Result<()>> = {
        use rayon::prelude::*;
        parsed.par_iter().map(|e| e.check()).collect()
    };
    let mut table = LoadedTable::default();
    for (entry, check) in parsed.into_iter().zip(checks) {
        let problem = check.err().map(|e| match e {
            Error::EntryInconsistent { .. } => e,
            other => Error::EntryInconsistent {
                id: entry.id.clone(),
                reason: other.to_string(),
            },
        });
        table.status.push((entry.id.clone(), problem.clone()));
        if problem.is_none() {
            table.entries.push(entry);
        }
    }
    Ok(table)
}

pub fn load_table(path: &Path) -> Result<LoadedTable> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    load_table_str(&text)
}

/// The bundled table, parsed without re-running the checks.
pub fn default_table() -> Vec<TargetEntry> {
    parse_table(DEFAULT_TABLE).expect("bundled table parses")
}

pub fn default_table_text() -> &'static str {
    DEFAULT_TABLE
}

fn relation_line(r: &Relation) -> String {
    let lhs = match r.degree() {
        1 => r.leader().to_string(),
        d => format!("{}^{d}", r.leader()),
    };
    format!("{lhs} = {}", print_expr(&r.monic_rhs()))
}

/// Canonical text of a table; `parse_table` of the result gives back the
/// same entries.
pub fn save_table(entries: &[TargetEntry]) -> String {
    let mut s = String::new();
    for (i, e) in entries.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        let _ = writeln!(s, "[entry {}]", e.id);
        let _ = writeln!(s, "name={}", e.name);
        let _ = writeln!(s, "rhs={}", print_expr(&e.rhs));
        let _ = writeln!(s, "signature={}", e.signature);
        let _ = writeln!(s, "groupoid={}", e.groupoid);
        let _ = writeln!(s, "symdeg={}", e.symmetry_degree);
        if !e.invariants.is_empty() {
            let parts: Vec<String> = e.invariants.iter().map(print_expr).collect();
            let _ = writeln!(s, "invariants={}", parts.join(", "));
        }
        for n in &e.normalizations {
            let _ = writeln!(
                s,
                "normalize={} = {}",
                print_expr(&n.lhs),
                print_expr(&n.rhs)
            );
        }
        for r in e.necessary_form.relations() {
            let _ = writeln!(s, "relation={}", relation_line(r));
        }
        s.push_str("end\n");
    }
    s
}
