//! Reports: verdict trees with replayable certificates.
//!
//! Certificates refer to modules and families by index into tables at the
//! end of the report; algebras are interned the same way, so a report is
//! self-contained and can be checked again without the document.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use commacat_core::comma::TriangularRing;
use commacat_core::{
    Bimodule, Certificate, CommaKind, FDAlgebra, Fact, Limits, Membership, ModuleFamily, ModuleMap, ModuleRep, Outcome,
    Presentation, Verdict,
};
use serde::{Deserialize, Serialize};

use crate::doc::{CommaKindRecord, SideRecord};
use crate::error::Violation;
use crate::matrix::{from_rows, to_rows, Rows};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitsRecord {
    pub max_dim: usize,
    pub iso_cap: usize,
    pub ext_cap: usize,
    pub enumeration_cap: usize,
}

impl From<Limits> for LimitsRecord {
    fn from(l: Limits) -> Self {
        Self {
            max_dim: l.max_dim,
            iso_cap: l.iso_cap,
            ext_cap: l.ext_cap,
            enumeration_cap: l.enumeration_cap,
        }
    }
}

impl From<LimitsRecord> for Limits {
    fn from(l: LimitsRecord) -> Self {
        Self {
            max_dim: l.max_dim,
            iso_cap: l.iso_cap,
            ext_cap: l.ext_cap,
            enumeration_cap: l.enumeration_cap,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraEntry {
    pub p: u32,
    pub mul: Vec<Vec<Vec<u32>>>,
    pub unit: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleEntry {
    pub algebra: usize,
    pub side: SideRecord,
    pub dim: usize,
    pub action: Vec<Rows>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapRecord {
    pub source: usize,
    pub target: usize,
    pub matrix: Rows,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingRecord {
    pub r: usize,
    pub s: usize,
    pub u_dim: usize,
    pub u_left_action: Vec<Rows>,
    pub u_right_action: Vec<Rows>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MembershipRecord {
    All,
    Zero,
    Explicit {
        members: Vec<usize>,
    },
    Gen {
        module: usize,
    },
    DSigma {
        sigma: MapRecord,
        target: usize,
        witness: MapRecord,
    },
    PerpRight {
        of: usize,
    },
    PerpLeft {
        of: usize,
    },
    Comma {
        ring: RingRecord,
        comma_kind: CommaKindRecord,
        c: usize,
        d: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyEntry {
    pub label: String,
    pub membership: MembershipRecord,
    pub universe: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FactRecord {
    HomDim { source: usize, target: usize, dim: usize },
    NonzeroMap { map: MapRecord },
    Member { family: usize, module: usize, member: bool },
    TensorDim { right: usize, left: usize, dim: usize },
    Isomorphic { a: usize, b: usize, iso: MapRecord },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateRecord {
    pub clause: String,
    pub fact: FactRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictRecord {
    pub claim: String,
    pub outcome: String,
    pub detail: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub universe_hash: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<CertificateRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sub: Vec<VerdictRecord>,
}

impl VerdictRecord {
    pub fn outcome(&self) -> Option<Outcome> {
        Outcome::parse(&self.outcome)
    }

    /// First record in depth-first order with the given claim id.
    pub fn find(&self, claim: &str) -> Option<&VerdictRecord> {
        if self.claim == claim {
            return Some(self);
        }
        self.sub.iter().find_map(|v| v.find(claim))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub index: usize,
    pub task: String,
    pub verdict: VerdictRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub limits: LimitsRecord,
    pub entries: Vec<Entry>,
    pub algebras: Vec<AlgebraEntry>,
    pub modules: Vec<ModuleEntry>,
    pub families: Vec<FamilyEntry>,
}

/// Collects entries and interns everything their certificates mention.
#[derive(Debug)]
pub struct ReportBuilder {
    limits: Limits,
    entries: Vec<Entry>,
    algebras: Vec<AlgebraEntry>,
    algebra_index: HashMap<FDAlgebra, usize>,
    modules: Vec<ModuleEntry>,
    module_index: HashMap<ModuleRep, usize>,
    families: Vec<FamilyEntry>,
    family_index: HashMap<String, usize>,
}

impl ReportBuilder {
    pub fn new(limits: Limits) -> Self {
        Self {
            limits,
            entries: Vec::new(),
            algebras: Vec::new(),
            algebra_index: HashMap::new(),
            modules: Vec::new(),
            module_index: HashMap::new(),
            families: Vec::new(),
            family_index: HashMap::new(),
        }
    }

    pub fn push(&mut self, task: &str, verdict: &Verdict, table: Option<Vec<Vec<usize>>>) {
        let verdict = self.verdict(verdict);
        let index = self.entries.len();
        self.entries.push(Entry {
            index,
            task: task.to_string(),
            verdict,
            table,
        });
    }

    pub fn finish(self) -> Report {
        Report {
            limits: self.limits.into(),
            entries: self.entries,
            algebras: self.algebras,
            modules: self.modules,
            families: self.families,
        }
    }

    fn algebra(&mut self, a: &FDAlgebra) -> usize {
        if let Some(&i) = self.algebra_index.get(a) {
            return i;
        }
        let i = self.algebras.len();
        self.algebras.push(AlgebraEntry {
            p: a.p(),
            mul: a.structure_constants(),
            unit: a.unit().to_vec(),
        });
        self.algebra_index.insert(a.clone(), i);
        i
    }

    fn module(&mut self, m: &ModuleRep) -> usize {
        if let Some(&i) = self.module_index.get(m) {
            return i;
        }
        let entry = ModuleEntry {
            algebra: self.algebra(m.algebra()),
            side: m.side().into(),
            dim: m.dim(),
            action: m.action().iter().map(to_rows).collect(),
        };
        let i = self.modules.len();
        self.modules.push(entry);
        self.module_index.insert(m.clone(), i);
        i
    }

    fn map(&mut self, f: &ModuleMap) -> MapRecord {
        MapRecord {
            source: self.module(f.source()),
            target: self.module(f.target()),
            matrix: to_rows(f.matrix()),
        }
    }

    fn ring(&mut self, t: &TriangularRing) -> RingRecord {
        RingRecord {
            r: self.algebra(t.r()),
            s: self.algebra(t.s()),
            u_dim: t.u().dim(),
            u_left_action: t.u().left_action().iter().map(to_rows).collect(),
            u_right_action: t.u().right_action().iter().map(to_rows).collect(),
        }
    }

    fn family(&mut self, f: &ModuleFamily) -> usize {
        let membership = match f.membership() {
            Membership::All => MembershipRecord::All,
            Membership::Zero => MembershipRecord::Zero,
            Membership::Explicit(list) => MembershipRecord::Explicit {
                members: list.iter().map(|m| self.module(m)).collect(),
            },
            Membership::Gen(t) => MembershipRecord::Gen { module: self.module(t) },
            Membership::DSigma(s) => MembershipRecord::DSigma {
                sigma: self.map(s.sigma()),
                target: self.module(s.target()),
                witness: self.map(s.witness()),
            },
            Membership::PerpRight(g) => MembershipRecord::PerpRight { of: self.family(g) },
            Membership::PerpLeft(g) => MembershipRecord::PerpLeft { of: self.family(g) },
            Membership::Comma { ring, kind, c, d } => MembershipRecord::Comma {
                ring: self.ring(ring),
                comma_kind: match kind {
                    CommaKind::Components => CommaKindRecord::Components,
                    CommaKind::Mono => CommaKindRecord::Mono,
                    CommaKind::Epi => CommaKindRecord::Epi,
                },
                c: self.family(c),
                d: self.family(d),
            },
        };
        let entry = FamilyEntry {
            label: f.label().to_string(),
            membership,
            universe: f.universe().iter().map(|m| self.module(m)).collect(),
        };
        let key = serde_json::to_string(&entry).expect("family entries serialize");
        if let Some(&i) = self.family_index.get(&key) {
            return i;
        }
        let i = self.families.len();
        self.families.push(entry);
        self.family_index.insert(key, i);
        i
    }

    fn fact(&mut self, f: &Fact) -> FactRecord {
        match f {
            Fact::HomDim { source, target, dim } => FactRecord::HomDim {
                source: self.module(source),
                target: self.module(target),
                dim: *dim,
            },
            Fact::NonzeroMap { map } => FactRecord::NonzeroMap { map: self.map(map) },
            Fact::Member { family, module, member } => FactRecord::Member {
                family: self.family(family),
                module: self.module(module),
                member: *member,
            },
            Fact::TensorDim { right, left, dim } => FactRecord::TensorDim {
                right: self.module(right),
                left: self.module(left),
                dim: *dim,
            },
            Fact::Isomorphic { a, b, iso } => FactRecord::Isomorphic {
                a: self.module(a),
                b: self.module(b),
                iso: self.map(iso),
            },
        }
    }

    fn verdict(&mut self, v: &Verdict) -> VerdictRecord {
        VerdictRecord {
            claim: v.claim.clone(),
            outcome: v.outcome.as_str().to_string(),
            detail: v.detail.clone(),
            universe_hash: v.universe_hash.clone(),
            certificates: v
                .certificates
                .iter()
                .map(|c| CertificateRecord {
                    clause: c.clause.clone(),
                    fact: self.fact(&c.fact),
                })
                .collect(),
            sub: v.sub.iter().map(|s| self.verdict(s)).collect(),
        }
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.entries.is_empty() {
            out.push_str("no tasks\n");
        }
        for e in &self.entries {
            let _ = writeln!(out, "task {} ({})", e.index, e.task);
            if let Some(t) = &e.table {
                for row in t {
                    let cells: Vec<String> = row.iter().map(|d| d.to_string()).collect();
                    let _ = writeln!(out, "  {}", cells.join(" "));
                }
            }
            text_verdict(&mut out, &e.verdict, 1);
        }
        out
    }
}

fn text_verdict(out: &mut String, v: &VerdictRecord, depth: usize) {
    let _ = writeln!(out, "{}[{}] {}: {}", "  ".repeat(depth), v.outcome, v.claim, v.detail);
    for s in &v.sub {
        text_verdict(out, s, depth + 1);
    }
}

/// Rebuilds core objects from a report's tables.
struct Tables {
    algebras: Vec<Arc<FDAlgebra>>,
    modules: Vec<ModuleRep>,
    families: Vec<ModuleFamily>,
}

fn get<T: Clone>(list: &[T], i: usize, what: &str) -> Result<T, String> {
    list.get(i)
        .cloned()
        .ok_or_else(|| format!("{what} index {i} is out of range"))
}

impl Tables {
    fn build(r: &Report) -> Result<Self, Violation> {
        let mut t = Tables {
            algebras: Vec::new(),
            modules: Vec::new(),
            families: Vec::new(),
        };
        for (i, a) in r.algebras.iter().enumerate() {
            let alg = FDAlgebra::from_structure_constants(a.p, &a.mul, &a.unit)
                .map_err(|e| Violation::new(format!("algebras[{i}]"), e.to_string()))?;
            t.algebras.push(Arc::new(alg));
        }
        for (i, m) in r.modules.iter().enumerate() {
            let path = format!("modules[{i}]");
            let alg = get(&t.algebras, m.algebra, "algebra").map_err(|e| Violation::new(&path, e))?;
            let mut action = Vec::new();
            for rows in &m.action {
                action.push(from_rows(alg.p(), rows, (m.dim, m.dim)).map_err(|e| Violation::new(&path, e))?);
            }
            t.modules.push(ModuleRep::from_parts(alg, m.side.into(), m.dim, action));
        }
        for (i, f) in r.families.iter().enumerate() {
            let path = format!("families[{i}]");
            let fam = t.family(f).map_err(|e| Violation::new(path, e))?;
            t.families.push(fam);
        }
        Ok(t)
    }

    fn module(&self, i: usize) -> Result<ModuleRep, String> {
        get(&self.modules, i, "module")
    }

    fn map(&self, m: &MapRecord) -> Result<ModuleMap, String> {
        let s = self.module(m.source)?;
        let t = self.module(m.target)?;
        let matrix = from_rows(s.p(), &m.matrix, (t.dim(), s.dim()))?;
        Ok(ModuleMap::from_parts(s, t, matrix))
    }

    fn family(&self, f: &FamilyEntry) -> Result<ModuleFamily, String> {
        let membership = match &f.membership {
            MembershipRecord::All => Membership::All,
            MembershipRecord::Zero => Membership::Zero,
            MembershipRecord::Explicit { members } => {
                Membership::Explicit(members.iter().map(|&i| self.module(i)).collect::<Result<_, _>>()?)
            }
            MembershipRecord::Gen { module } => Membership::Gen(self.module(*module)?),
            MembershipRecord::DSigma { sigma, target, witness } => Membership::DSigma(Box::new(
                Presentation::from_parts(self.map(sigma)?, self.module(*target)?, self.map(witness)?),
            )),
            MembershipRecord::PerpRight { of } => Membership::PerpRight(Box::new(get(&self.families, *of, "family")?)),
            MembershipRecord::PerpLeft { of } => Membership::PerpLeft(Box::new(get(&self.families, *of, "family")?)),
            MembershipRecord::Comma { ring, comma_kind, c, d } => {
                let r = get(&self.algebras, ring.r, "algebra")?;
                let s = get(&self.algebras, ring.s, "algebra")?;
                let p = r.p();
                let read = |list: &[Rows]| -> Result<Vec<_>, String> {
                    list.iter().map(|m| from_rows(p, m, (ring.u_dim, ring.u_dim))).collect()
                };
                let u = Bimodule::from_parts(
                    s.clone(),
                    r.clone(),
                    ring.u_dim,
                    read(&ring.u_left_action)?,
                    read(&ring.u_right_action)?,
                )
                .map_err(|e| e.to_string())?;
                let t = TriangularRing::new(r, s, u).map_err(|e| e.to_string())?;
                Membership::Comma {
                    ring: Arc::new(t),
                    kind: (*comma_kind).into(),
                    c: Box::new(get(&self.families, *c, "family")?),
                    d: Box::new(get(&self.families, *d, "family")?),
                }
            }
        };
        let universe = f.universe.iter().map(|&i| self.module(i)).collect::<Result<_, _>>()?;
        Ok(ModuleFamily::new(f.label.clone(), membership, universe))
    }

    fn fact(&self, f: &FactRecord) -> Result<Fact, String> {
        Ok(match f {
            FactRecord::HomDim { source, target, dim } => Fact::HomDim {
                source: self.module(*source)?,
                target: self.module(*target)?,
                dim: *dim,
            },
            FactRecord::NonzeroMap { map } => Fact::NonzeroMap { map: self.map(map)? },
            FactRecord::Member { family, module, member } => Fact::Member {
                family: get(&self.families, *family, "family")?,
                module: self.module(*module)?,
                member: *member,
            },
            FactRecord::TensorDim { right, left, dim } => Fact::TensorDim {
                right: self.module(*right)?,
                left: self.module(*left)?,
                dim: *dim,
            },
            FactRecord::Isomorphic { a, b, iso } => Fact::Isomorphic {
                a: self.module(*a)?,
                b: self.module(*b)?,
                iso: self.map(iso)?,
            },
        })
    }
}

/// Outcome of re-checking every certificate in a report.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReplaySummary {
    pub confirmed: usize,
    pub failures: Vec<Violation>,
}

impl ReplaySummary {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Re-checks every certificate of every entry, from the report alone.
pub fn replay(report: &Report) -> ReplaySummary {
    let mut summary = ReplaySummary::default();
    let tables = match Tables::build(report) {
        Ok(t) => t,
        Err(v) => {
            summary.failures.push(v);
            return summary;
        }
    };
    let limits: Limits = report.limits.into();
    for e in &report.entries {
        replay_verdict(
            &tables,
            &limits,
            &e.verdict,
            format!("entries[{}].verdict", e.index),
            &mut summary,
        );
    }
    summary
}

fn replay_verdict(t: &Tables, limits: &Limits, v: &VerdictRecord, path: String, out: &mut ReplaySummary) {
    if v.outcome().is_none() {
        out.failures
            .push(Violation::new(&path, format!("unknown outcome '{}'", v.outcome)));
    }
    for (i, c) in v.certificates.iter().enumerate() {
        let cpath = format!("{path}.certificates[{i}]");
        match t.fact(&c.fact).map(|f| Certificate::new(&c.clause, f)) {
            Ok(cert) => match cert.fact.replay(limits) {
                Ok(true) => out.confirmed += 1,
                Ok(false) => out.failures.push(Violation::new(
                    cpath,
                    format!("{} ({}) does not hold", cert.fact.kind(), c.clause),
                )),
                Err(e) => out.failures.push(Violation::new(cpath, e.to_string())),
            },
            Err(e) => out.failures.push(Violation::new(cpath, e)),
        }
    }
    for (i, s) in v.sub.iter().enumerate() {
        replay_verdict(t, limits, s, format!("{path}.sub[{i}]"), out);
    }
}
