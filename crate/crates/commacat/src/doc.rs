//! The JSON document format and its resolution into core objects.
//!
//! Named collections are ordered maps, so serializing a parsed document is
//! canonical: key order, field order and whitespace are fixed.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use commacat_core::comma::TriangularRing;
use commacat_core::module::check_action;
use commacat_core::{
    Bimodule, CommaKind, CommaObject, FDAlgebra, FpMatrix, ModuleFamily, ModuleMap, ModuleRep, Presentation,
    RightTModule, Side,
};
use serde::{Deserialize, Serialize};

use crate::error::{Violation, Violations};
use crate::matrix::{from_rows, Rows};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Field {
    pub p: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraRecord {
    /// `mul[i][j][k]`: coefficient of `e_k` in `e_i e_j`.
    pub mul: Vec<Vec<Vec<u32>>>,
    pub unit: Vec<u32>,
}

/// An `(S, R)`-bimodule; `left` names `S` and `right` names `R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BimoduleRecord {
    pub left: String,
    pub right: String,
    pub dim: usize,
    pub left_action: Vec<Rows>,
    pub right_action: Vec<Rows>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SideRecord {
    #[default]
    Left,
    Right,
}

impl From<SideRecord> for Side {
    fn from(s: SideRecord) -> Side {
        match s {
            SideRecord::Left => Side::Left,
            SideRecord::Right => Side::Right,
        }
    }
}

impl From<Side> for SideRecord {
    fn from(s: Side) -> SideRecord {
        match s {
            Side::Left => SideRecord::Left,
            Side::Right => SideRecord::Right,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleRecord {
    pub algebra: String,
    #[serde(default)]
    pub side: SideRecord,
    pub dim: usize,
    pub action: Vec<Rows>,
}

/// `(A, B, φ)` over the triangular ring of `bimodule`; `φ` is
/// `dim B × (dim U · dim A)` with column `u · dim A + a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommaRecord {
    pub bimodule: String,
    pub a: String,
    pub b: String,
    pub phi: Rows,
}

/// `(X, Y, ψ)`; `ψ` is `dim X × (dim Y · dim U)` with column `y · dim U + u`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RightRecord {
    pub bimodule: String,
    pub x: String,
    pub y: String,
    pub psi: Rows,
}

/// `σ: source → target` between projectives, `dim target × dim source`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationRecord {
    pub source: String,
    pub target: String,
    pub sigma: Rows,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommaKindRecord {
    Components,
    Mono,
    Epi,
}

impl From<CommaKindRecord> for CommaKind {
    fn from(k: CommaKindRecord) -> CommaKind {
        match k {
            CommaKindRecord::Components => CommaKind::Components,
            CommaKindRecord::Mono => CommaKind::Mono,
            CommaKindRecord::Epi => CommaKind::Epi,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FamilyRecord {
    All {
        universe: String,
    },
    Zero {
        universe: String,
    },
    Explicit {
        members: Vec<String>,
        universe: String,
    },
    Gen {
        module: String,
        universe: String,
    },
    DSigma {
        presentation: String,
        universe: String,
    },
    PerpRight {
        of: String,
        universe: String,
    },
    PerpLeft {
        of: String,
        universe: String,
    },
    Comma {
        comma_kind: CommaKindRecord,
        bimodule: String,
        c: String,
        d: String,
        universe: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TaskRecord {
    /// `dim Hom` between every pair of a universe of comma objects.
    HomTable {
        objects: String,
    },
    /// Every transfer claim over one triangular ring.
    VerifyAll {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        bimodule: String,
        r_universe: String,
        s_universe: String,
        right_r_universe: String,
        right_s_universe: String,
        r_presentations: Vec<String>,
        s_presentations: Vec<String>,
        /// Fixes the comma universe instead of enumerating it.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        comma_universe: Option<String>,
    },
    TorsionPair {
        torsion: String,
        torsion_free: String,
        universe: String,
    },
    TorsionClass {
        family: String,
        universe: String,
    },
    PartialSilting {
        module: String,
        presentation: String,
        universe: String,
    },
    Silting {
        module: String,
        presentation: String,
        universe: String,
    },
    Membership {
        family: String,
        module: String,
    },
    /// `X ⊗_T M` for a right module and a comma object.
    Tensor {
        right: String,
        comma: String,
    },
}

impl TaskRecord {
    pub fn name(&self) -> &'static str {
        match self {
            TaskRecord::HomTable { .. } => "hom-table",
            TaskRecord::VerifyAll { .. } => "verify-all",
            TaskRecord::TorsionPair { .. } => "torsion-pair",
            TaskRecord::TorsionClass { .. } => "torsion-class",
            TaskRecord::PartialSilting { .. } => "partial-silting",
            TaskRecord::Silting { .. } => "silting",
            TaskRecord::Membership { .. } => "membership",
            TaskRecord::Tensor { .. } => "tensor",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub field: Field,
    #[serde(default)]
    pub algebras: BTreeMap<String, AlgebraRecord>,
    #[serde(default)]
    pub bimodules: BTreeMap<String, BimoduleRecord>,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleRecord>,
    #[serde(default)]
    pub comma_objects: BTreeMap<String, CommaRecord>,
    #[serde(default)]
    pub right_modules: BTreeMap<String, RightRecord>,
    #[serde(default)]
    pub presentations: BTreeMap<String, PresentationRecord>,
    #[serde(default)]
    pub families: BTreeMap<String, FamilyRecord>,
    /// Lists of module, comma object or right module names.
    #[serde(default)]
    pub universes: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub tasks: Vec<TaskRecord>,
}

impl Document {
    pub fn parse(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Canonical form: pretty JSON with a trailing newline.
    pub fn to_canonical(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }
}

/// A named object that can sit in a universe.
#[derive(Clone, Debug)]
pub enum Object {
    Module(ModuleRep),
    Comma(CommaObject),
    Right(RightTModule),
}

impl Object {
    /// The underlying module; comma and right objects become `T`-modules.
    pub fn module(&self) -> ModuleRep {
        match self {
            Object::Module(m) => m.clone(),
            Object::Comma(c) => c.to_t_module(),
            Object::Right(r) => r.to_t_module(),
        }
    }
}

/// A document with every reference resolved into core objects.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub p: u32,
    pub algebras: BTreeMap<String, Arc<FDAlgebra>>,
    pub rings: BTreeMap<String, Arc<TriangularRing>>,
    pub objects: BTreeMap<String, Object>,
    pub presentations: BTreeMap<String, Presentation>,
    pub universes: BTreeMap<String, Vec<(String, Object)>>,
    pub families: BTreeMap<String, ModuleFamily>,
}

impl Resolved {
    pub fn universe_modules(&self, name: &str) -> Vec<ModuleRep> {
        self.universes[name].iter().map(|(_, o)| o.module()).collect()
    }

    pub fn universe_names(&self, name: &str) -> Vec<String> {
        self.universes[name].iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn module(&self, name: &str) -> ModuleRep {
        self.objects[name].module()
    }
}

struct Resolver<'a> {
    doc: &'a Document,
    p: u32,
    errors: Vec<Violation>,
    /// Names that are defined but failed to build; references to them are
    /// dropped quietly so each problem is reported once, where it lives.
    broken: BTreeSet<(&'static str, String)>,
}

fn namespace(what: &str) -> &'static str {
    match what {
        "algebra" => "algebra",
        "bimodule" => "bimodule",
        "module" | "object" => "object",
        "presentation" => "presentation",
        "universe" => "universe",
        _ => "family",
    }
}

impl Resolver<'_> {
    fn err(&mut self, path: String, message: impl Into<String>) {
        self.errors.push(Violation::new(path, message));
    }

    fn mark(&mut self, what: &str, name: &str) {
        self.broken.insert((namespace(what), name.to_string()));
    }

    fn matrix(&mut self, path: String, rows: &[Vec<u32>], shape: (usize, usize)) -> Option<FpMatrix> {
        match from_rows(self.p, rows, shape) {
            Ok(m) => Some(m),
            Err(e) => {
                self.err(path, e);
                None
            }
        }
    }

    fn matrices(&mut self, path: &str, list: &[Rows], count: usize, dim: usize) -> Option<Vec<FpMatrix>> {
        if list.len() != count {
            self.err(
                path.to_string(),
                format!("expected {count} matrices, found {}", list.len()),
            );
            return None;
        }
        let mut out = Vec::with_capacity(count);
        for (i, rows) in list.iter().enumerate() {
            out.push(self.matrix(format!("{path}[{i}]"), rows, (dim, dim))?);
        }
        Some(out)
    }

    fn algebras(&mut self) -> BTreeMap<String, Arc<FDAlgebra>> {
        let mut out = BTreeMap::new();
        for (name, rec) in &self.doc.algebras {
            let path = format!("algebras.{name}");
            let d = rec.unit.len();
            let mut ok = true;
            if rec.mul.len() != d {
                self.err(
                    format!("{path}.mul"),
                    format!("expected {d} entries to match the unit, found {}", rec.mul.len()),
                );
                self.mark("algebra", name);
                continue;
            }
            'outer: for (i, row) in rec.mul.iter().enumerate() {
                if row.len() != d {
                    self.err(
                        format!("{path}.mul[{i}]"),
                        format!("expected {d} entries, found {}", row.len()),
                    );
                    ok = false;
                    break;
                }
                for (j, entry) in row.iter().enumerate() {
                    if entry.len() != d {
                        self.err(
                            format!("{path}.mul[{i}][{j}]"),
                            format!("expected {d} entries, found {}", entry.len()),
                        );
                        ok = false;
                        break 'outer;
                    }
                    if let Some(k) = entry.iter().position(|&c| c >= self.p) {
                        self.err(
                            format!("{path}.mul[{i}][{j}][{k}]"),
                            format!("{} is not a residue mod {}", entry[k], self.p),
                        );
                        ok = false;
                        break 'outer;
                    }
                }
            }
            if let Some(k) = rec.unit.iter().position(|&c| c >= self.p) {
                self.err(
                    format!("{path}.unit[{k}]"),
                    format!("{} is not a residue mod {}", rec.unit[k], self.p),
                );
                ok = false;
            }
            if !ok {
                self.mark("algebra", name);
                continue;
            }
            match FDAlgebra::from_structure_constants(self.p, &rec.mul, &rec.unit) {
                Ok(a) => {
                    let violations = a.validate();
                    if violations.is_empty() {
                        out.insert(name.clone(), Arc::new(a));
                        continue;
                    }
                    for v in violations {
                        self.err(path.clone(), v.to_string());
                    }
                }
                Err(e) => self.err(path, e.to_string()),
            }
            self.mark("algebra", name);
        }
        out
    }

    fn lookup<'m, T>(&mut self, map: &'m BTreeMap<String, T>, path: String, what: &str, name: &str) -> Option<&'m T> {
        let found = map.get(name);
        if found.is_none() && !self.broken.contains(&(namespace(what), name.to_string())) {
            self.err(path, format!("unresolved reference to {what} '{name}'"));
        }
        found
    }

    fn rings(&mut self, algebras: &BTreeMap<String, Arc<FDAlgebra>>) -> BTreeMap<String, Arc<TriangularRing>> {
        let mut out = BTreeMap::new();
        for (name, rec) in &self.doc.bimodules {
            let path = format!("bimodules.{name}");
            let s = self
                .lookup(algebras, format!("{path}.left"), "algebra", &rec.left)
                .cloned();
            let r = self
                .lookup(algebras, format!("{path}.right"), "algebra", &rec.right)
                .cloned();
            let (Some(s), Some(r)) = (s, r) else {
                self.mark("bimodule", name);
                continue;
            };
            let la = self.matrices(&format!("{path}.left_action"), &rec.left_action, s.dim(), rec.dim);
            let ra = self.matrices(&format!("{path}.right_action"), &rec.right_action, r.dim(), rec.dim);
            let (Some(la), Some(ra)) = (la, ra) else {
                self.mark("bimodule", name);
                continue;
            };
            let ring = Bimodule::from_parts(s.clone(), r.clone(), rec.dim, la, ra).and_then(|u| {
                let violations = u.validate();
                if violations.is_empty() {
                    TriangularRing::new(r, s, u).map(Ok)
                } else {
                    Ok(Err(violations))
                }
            });
            match ring {
                Ok(Ok(t)) => {
                    out.insert(name.clone(), Arc::new(t));
                    continue;
                }
                Ok(Err(violations)) => {
                    for v in violations {
                        self.err(path.clone(), v.to_string());
                    }
                }
                Err(e) => self.err(path, e.to_string()),
            }
            self.mark("bimodule", name);
        }
        out
    }

    fn modules(&mut self, algebras: &BTreeMap<String, Arc<FDAlgebra>>, objects: &mut BTreeMap<String, Object>) {
        for (name, rec) in &self.doc.modules {
            let path = format!("modules.{name}");
            let Some(alg) = self
                .lookup(algebras, format!("{path}.algebra"), "algebra", &rec.algebra)
                .cloned()
            else {
                self.mark("object", name);
                continue;
            };
            match self.matrices(&format!("{path}.action"), &rec.action, alg.dim(), rec.dim) {
                Some(action) => {
                    objects.insert(
                        name.clone(),
                        Object::Module(ModuleRep::from_parts(alg, rec.side.into(), rec.dim, action)),
                    );
                }
                None => self.mark("object", name),
            }
        }
    }

    fn component(
        &mut self,
        objects: &BTreeMap<String, Object>,
        path: String,
        name: &str,
        algebra: &FDAlgebra,
        side: Side,
        role: &str,
    ) -> Option<ModuleRep> {
        let m = match self.lookup(objects, path.clone(), "module", name)? {
            Object::Module(m) => m.clone(),
            _ => {
                self.err(path, format!("'{name}' is not a module record"));
                return None;
            }
        };
        if m.side() != side || m.algebra().as_ref() != algebra {
            self.err(path, format!("'{name}' is not a {} module over {role}", side.as_str()));
            return None;
        }
        Some(m)
    }

    fn ring_of(
        &mut self,
        rings: &BTreeMap<String, Arc<TriangularRing>>,
        path: String,
        name: &str,
    ) -> Option<Arc<TriangularRing>> {
        self.lookup(rings, path, "bimodule", name).cloned()
    }

    fn comma_objects(&mut self, rings: &BTreeMap<String, Arc<TriangularRing>>, objects: &mut BTreeMap<String, Object>) {
        let mut new = Vec::new();
        for (name, rec) in &self.doc.comma_objects {
            let path = format!("comma_objects.{name}");
            let built = self
                .ring_of(rings, format!("{path}.bimodule"), &rec.bimodule)
                .and_then(|ring| {
                    let a = self.component(objects, format!("{path}.a"), &rec.a, ring.r(), Side::Left, "R");
                    let b = self.component(objects, format!("{path}.b"), &rec.b, ring.s(), Side::Left, "S");
                    let (a, b) = (a?, b?);
                    let shape = (b.dim(), ring.u().dim() * a.dim());
                    let phi = self.matrix(format!("{path}.phi"), &rec.phi, shape)?;
                    Some(CommaObject::from_parts(ring, a, b, phi))
                });
            match built {
                Some(c) => new.push((name.clone(), Object::Comma(c))),
                None => self.mark("object", name),
            }
        }
        for (name, rec) in &self.doc.right_modules {
            let path = format!("right_modules.{name}");
            let built = self
                .ring_of(rings, format!("{path}.bimodule"), &rec.bimodule)
                .and_then(|ring| {
                    let x = self.component(objects, format!("{path}.x"), &rec.x, ring.r(), Side::Right, "R");
                    let y = self.component(objects, format!("{path}.y"), &rec.y, ring.s(), Side::Right, "S");
                    let (x, y) = (x?, y?);
                    let shape = (x.dim(), y.dim() * ring.u().dim());
                    let psi = self.matrix(format!("{path}.psi"), &rec.psi, shape)?;
                    Some(RightTModule::from_parts(ring, x, y, psi))
                });
            match built {
                Some(x) => new.push((name.clone(), Object::Right(x))),
                None => self.mark("object", name),
            }
        }
        objects.extend(new);
    }

    fn presentations(&mut self, objects: &BTreeMap<String, Object>) -> BTreeMap<String, Presentation> {
        let mut out = BTreeMap::new();
        for (name, rec) in &self.doc.presentations {
            let path = format!("presentations.{name}");
            let src = match self.lookup(objects, format!("{path}.source"), "module", &rec.source) {
                Some(Object::Module(m)) => m.clone(),
                Some(_) => {
                    self.err(format!("{path}.source"), "presentations are between module records");
                    self.mark("presentation", name);
                    continue;
                }
                None => {
                    self.mark("presentation", name);
                    continue;
                }
            };
            let tgt = match self.lookup(objects, format!("{path}.target"), "module", &rec.target) {
                Some(Object::Module(m)) => m.clone(),
                Some(_) => {
                    self.err(format!("{path}.target"), "presentations are between module records");
                    self.mark("presentation", name);
                    continue;
                }
                None => {
                    self.mark("presentation", name);
                    continue;
                }
            };
            if !src.compatible(&tgt) {
                self.err(
                    path.clone(),
                    "source and target are modules over different algebras or sides",
                );
                self.mark("presentation", name);
                continue;
            }
            let Some(sigma) = self.matrix(format!("{path}.sigma"), &rec.sigma, (tgt.dim(), src.dim())) else {
                self.mark("presentation", name);
                continue;
            };
            match Presentation::from_sigma(ModuleMap::from_parts(src, tgt, sigma)) {
                Ok(s) => {
                    out.insert(name.clone(), s);
                }
                Err(e) => {
                    self.err(path, e.to_string());
                    self.mark("presentation", name);
                }
            }
        }
        out
    }

    fn universes(&mut self, objects: &BTreeMap<String, Object>) -> BTreeMap<String, Vec<(String, Object)>> {
        let mut out = BTreeMap::new();
        for (name, members) in &self.doc.universes {
            let mut list = Vec::new();
            for (i, m) in members.iter().enumerate() {
                if let Some(o) = self.lookup(objects, format!("universes.{name}[{i}]"), "object", m) {
                    list.push((m.clone(), o.clone()));
                }
            }
            if list.len() == members.len() {
                let first = list.first().map(|(_, o)| o.module());
                if let Some(f) = first {
                    if let Some(i) = list.iter().position(|(_, o)| !o.module().compatible(&f)) {
                        self.err(
                            format!("universes.{name}[{i}]"),
                            "universe members live over different algebras or sides",
                        );
                        self.mark("universe", name);
                        continue;
                    }
                }
                out.insert(name.clone(), list);
            } else {
                self.mark("universe", name);
            }
        }
        out
    }

    fn family(&mut self, name: &str, ctx: &mut FamilyContext<'_>, stack: &mut Vec<String>) -> Option<ModuleFamily> {
        if let Some(f) = ctx.done.get(name) {
            return Some(f.clone());
        }
        let path = format!("families.{name}");
        if stack.iter().any(|s| s == name) {
            self.err(path, "family definitions form a cycle");
            return None;
        }
        let rec = self.doc.families.get(name)?;
        stack.push(name.to_string());
        let universe_name = match rec {
            FamilyRecord::All { universe }
            | FamilyRecord::Zero { universe }
            | FamilyRecord::Explicit { universe, .. }
            | FamilyRecord::Gen { universe, .. }
            | FamilyRecord::DSigma { universe, .. }
            | FamilyRecord::PerpRight { universe, .. }
            | FamilyRecord::PerpLeft { universe, .. }
            | FamilyRecord::Comma { universe, .. } => universe,
        };
        let universe: Vec<ModuleRep> =
            match self.lookup(ctx.universes, format!("{path}.universe"), "universe", universe_name) {
                Some(u) => u.iter().map(|(_, o)| o.module()).collect(),
                None => {
                    stack.pop();
                    return None;
                }
            };
        let fam = match rec {
            FamilyRecord::All { .. } => Some(ModuleFamily::all(universe)),
            FamilyRecord::Zero { .. } => Some(ModuleFamily::zero(universe)),
            FamilyRecord::Explicit { members, .. } => {
                let mut ms = Vec::new();
                for (i, m) in members.iter().enumerate() {
                    if let Some(o) = self.lookup(ctx.objects, format!("{path}.members[{i}]"), "object", m) {
                        ms.push(o.module());
                    }
                }
                (ms.len() == members.len()).then(|| ModuleFamily::explicit(name, ms, universe))
            }
            FamilyRecord::Gen { module, .. } => self
                .lookup(ctx.objects, format!("{path}.module"), "object", module)
                .map(|o| ModuleFamily::gen(o.module(), universe)),
            FamilyRecord::DSigma { presentation, .. } => self
                .lookup(
                    ctx.presentations,
                    format!("{path}.presentation"),
                    "presentation",
                    presentation,
                )
                .map(|s| ModuleFamily::d_sigma(s.clone(), universe)),
            FamilyRecord::PerpRight { of, .. } => self
                .family_ref(&path, "of", of, ctx, stack)
                .map(|f| commacat_core::torsion::perp_right(&f, &universe)),
            FamilyRecord::PerpLeft { of, .. } => self
                .family_ref(&path, "of", of, ctx, stack)
                .map(|f| commacat_core::torsion::perp_left(&f, &universe)),
            FamilyRecord::Comma {
                comma_kind,
                bimodule,
                c,
                d,
                ..
            } => {
                let ring = self.ring_of(ctx.rings, format!("{path}.bimodule"), bimodule);
                let c = self.family_ref(&path, "c", c, ctx, stack);
                let d = self.family_ref(&path, "d", d, ctx, stack);
                match (ring, c, d) {
                    (Some(ring), Some(c), Some(d)) => {
                        Some(ModuleFamily::comma(ring, (*comma_kind).into(), &c, &d, universe))
                    }
                    _ => None,
                }
            }
        };
        stack.pop();
        let fam = fam?.with_label(name);
        ctx.done.insert(name.to_string(), fam.clone());
        Some(fam)
    }

    fn family_ref(
        &mut self,
        path: &str,
        field: &str,
        of: &str,
        ctx: &mut FamilyContext<'_>,
        stack: &mut Vec<String>,
    ) -> Option<ModuleFamily> {
        if !self.doc.families.contains_key(of) {
            self.err(
                format!("{path}.{field}"),
                format!("unresolved reference to family '{of}'"),
            );
            return None;
        }
        self.family(of, ctx, stack)
    }

    fn require(&mut self, path: String, found: bool, what: &str, name: &str) {
        if !found {
            self.err(path, format!("unresolved reference to {what} '{name}'"));
        }
    }

    fn tasks(&mut self, r: &Resolved) {
        for (i, task) in self.doc.tasks.iter().enumerate() {
            let path = |f: &str| format!("tasks[{i}].{f}");
            let obj = |n: &str| r.objects.contains_key(n);
            let uni = |n: &str| r.universes.contains_key(n);
            let fam = |n: &str| r.families.contains_key(n);
            let pres = |n: &str| r.presentations.contains_key(n);
            match task {
                TaskRecord::HomTable { objects } => {
                    self.require(path("objects"), uni(objects), "universe", objects);
                    if let Some(u) = r.universes.get(objects) {
                        if let Some(j) = u.iter().position(|(_, o)| !matches!(o, Object::Comma(_))) {
                            self.err(
                                path("objects"),
                                format!("member {j} of '{objects}' is not a comma object"),
                            );
                        }
                    }
                }
                TaskRecord::VerifyAll {
                    bimodule,
                    r_universe,
                    s_universe,
                    right_r_universe,
                    right_s_universe,
                    r_presentations,
                    s_presentations,
                    comma_universe,
                    ..
                } => {
                    let Some(ring) = r.rings.get(bimodule) else {
                        self.require(path("bimodule"), false, "bimodule", bimodule);
                        continue;
                    };
                    let sides = [
                        ("r_universe", r_universe, ring.r(), Side::Left),
                        ("s_universe", s_universe, ring.s(), Side::Left),
                        ("right_r_universe", right_r_universe, ring.r(), Side::Right),
                        ("right_s_universe", right_s_universe, ring.s(), Side::Right),
                    ];
                    for (field, u, alg, side) in sides {
                        match r.universes.get(u) {
                            None => self.require(path(field), false, "universe", u),
                            Some(list) => {
                                if let Some(j) = list.iter().position(|(_, o)| match o {
                                    Object::Module(m) => m.side() != side || m.algebra().as_ref() != alg.as_ref(),
                                    _ => true,
                                }) {
                                    self.err(
                                        path(field),
                                        format!(
                                            "member {j} of '{u}' is not a {} module over the expected algebra",
                                            side.as_str()
                                        ),
                                    );
                                }
                            }
                        }
                    }
                    for (field, list, alg) in [
                        ("r_presentations", r_presentations, ring.r()),
                        ("s_presentations", s_presentations, ring.s()),
                    ] {
                        for (j, n) in list.iter().enumerate() {
                            match r.presentations.get(n) {
                                None => self.require(format!("tasks[{i}].{field}[{j}]"), false, "presentation", n),
                                Some(s) if s.algebra().as_ref() != alg.as_ref() || s.p0().side() != Side::Left => self
                                    .err(
                                        format!("tasks[{i}].{field}[{j}]"),
                                        format!("presentation '{n}' is over the wrong algebra"),
                                    ),
                                Some(_) => {}
                            }
                        }
                    }
                    if let Some(cu) = comma_universe {
                        match r.universes.get(cu) {
                            None => self.require(path("comma_universe"), false, "universe", cu),
                            Some(list) => {
                                if let Some(j) = list.iter().position(
                                    |(_, o)| !matches!(o, Object::Comma(c) if c.ring().as_ref() == ring.as_ref()),
                                ) {
                                    self.err(
                                        path("comma_universe"),
                                        format!("member {j} of '{cu}' is not a comma object over '{bimodule}'"),
                                    );
                                }
                            }
                        }
                    }
                }
                TaskRecord::TorsionPair {
                    torsion,
                    torsion_free,
                    universe,
                } => {
                    self.require(path("torsion"), fam(torsion), "family", torsion);
                    self.require(path("torsion_free"), fam(torsion_free), "family", torsion_free);
                    self.require(path("universe"), uni(universe), "universe", universe);
                }
                TaskRecord::TorsionClass { family, universe } => {
                    self.require(path("family"), fam(family), "family", family);
                    self.require(path("universe"), uni(universe), "universe", universe);
                }
                TaskRecord::PartialSilting {
                    module,
                    presentation,
                    universe,
                }
                | TaskRecord::Silting {
                    module,
                    presentation,
                    universe,
                } => {
                    self.require(path("module"), obj(module), "object", module);
                    self.require(path("presentation"), pres(presentation), "presentation", presentation);
                    self.require(path("universe"), uni(universe), "universe", universe);
                }
                TaskRecord::Membership { family, module } => {
                    self.require(path("family"), fam(family), "family", family);
                    self.require(path("module"), obj(module), "object", module);
                }
                TaskRecord::Tensor { right, comma } => {
                    match r.objects.get(right) {
                        Some(Object::Right(_)) => {}
                        Some(_) => self.err(path("right"), format!("'{right}' is not a right module record")),
                        None => self.require(path("right"), false, "right module", right),
                    }
                    match (r.objects.get(comma), r.objects.get(right)) {
                        (Some(Object::Comma(c)), Some(Object::Right(x))) if c.ring().as_ref() != x.ring().as_ref() => {
                            self.err(path("comma"), "right module and comma object are over different rings")
                        }
                        (Some(Object::Comma(_)), _) => {}
                        (Some(_), _) => self.err(path("comma"), format!("'{comma}' is not a comma object record")),
                        (None, _) => self.require(path("comma"), false, "comma object", comma),
                    }
                }
            }
        }
    }
}

struct FamilyContext<'a> {
    objects: &'a BTreeMap<String, Object>,
    presentations: &'a BTreeMap<String, Presentation>,
    universes: &'a BTreeMap<String, Vec<(String, Object)>>,
    rings: &'a BTreeMap<String, Arc<TriangularRing>>,
    done: BTreeMap<String, ModuleFamily>,
}

/// Resolves every reference. Structural problems (unresolved names, matrix
/// shapes, residues outside the field) and algebra and bimodule axioms are
/// reported with their path; everything built on top of them is checked by
/// [`invariants`].
pub fn resolve(doc: &Document) -> Result<Resolved, Violations> {
    let p = doc.field.p;
    let mut r = Resolver {
        doc,
        p,
        errors: Vec::new(),
        broken: BTreeSet::new(),
    };
    if !commacat_core::linalg::is_prime(p) {
        r.err("field.p".into(), format!("{p} is not prime"));
        return Err(Violations(r.errors));
    }

    let mut seen = BTreeSet::new();
    let names = doc
        .modules
        .keys()
        .map(|n| ("modules", n))
        .chain(doc.comma_objects.keys().map(|n| ("comma_objects", n)))
        .chain(doc.right_modules.keys().map(|n| ("right_modules", n)));
    for (section, n) in names {
        if !seen.insert(n.clone()) {
            r.err(
                format!("{section}.{n}"),
                "object names must be unique across modules, comma objects and right modules",
            );
        }
    }

    let algebras = r.algebras();
    let rings = r.rings(&algebras);
    let mut objects = BTreeMap::new();
    r.modules(&algebras, &mut objects);
    r.comma_objects(&rings, &mut objects);
    let presentations = r.presentations(&objects);
    let universes = r.universes(&objects);
    if !r.errors.is_empty() {
        return Err(Violations(r.errors));
    }
    let mut ctx = FamilyContext {
        objects: &objects,
        presentations: &presentations,
        universes: &universes,
        rings: &rings,
        done: BTreeMap::new(),
    };
    for name in doc.families.keys() {
        r.family(name, &mut ctx, &mut Vec::new());
    }
    let families = ctx.done;
    let resolved = Resolved {
        p,
        algebras,
        rings,
        objects,
        presentations,
        universes,
        families,
    };
    r.tasks(&resolved);
    if r.errors.is_empty() {
        Ok(resolved)
    } else {
        Err(Violations(r.errors))
    }
}

/// Every violated axiom that resolution leaves to later: module axioms,
/// balance and linearity of structure maps, presentation exactness.
pub fn invariants(doc: &Document, r: &Resolved) -> Vec<Violation> {
    let mut out = Vec::new();
    for (name, o) in &r.objects {
        match o {
            Object::Module(m) => {
                for v in check_action(m.algebra(), m.side(), m.dim(), m.action()) {
                    out.push(Violation::new(format!("modules.{name}"), v.to_string()));
                }
            }
            Object::Comma(c) => {
                let rec = &doc.comma_objects[name];
                for v in c.validate() {
                    let path = match v {
                        commacat_core::comma::CommaViolation::A(_) => format!("modules.{}", rec.a),
                        commacat_core::comma::CommaViolation::B(_) => format!("modules.{}", rec.b),
                        _ => format!("comma_objects.{name}.phi"),
                    };
                    out.push(Violation::new(path, v.to_string()));
                }
            }
            Object::Right(x) => {
                for v in x.validate() {
                    out.push(Violation::new(format!("right_modules.{name}.psi"), v.to_string()));
                }
            }
        }
    }
    for (name, s) in &r.presentations {
        match s.validate() {
            Ok(vs) => out.extend(
                vs.into_iter()
                    .map(|v| Violation::new(format!("presentations.{name}"), v.to_string())),
            ),
            Err(e) => out.push(Violation::new(format!("presentations.{name}"), e.to_string())),
        }
    }
    out
}

/// Resolution followed by the axiom checks.
pub fn validate(doc: &Document) -> Result<Resolved, Violations> {
    let r = resolve(doc)?;
    let v = invariants(doc, &r);
    if v.is_empty() {
        Ok(r)
    } else {
        Err(Violations(v))
    }
}
