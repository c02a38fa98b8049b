//! Built-in corpora, produced from the core fixtures as documents so they go
//! through the same parser, validator and task runner as files do.

use commacat_core::fixtures::{DualNumbers, A2, A2_NAMES};
use commacat_core::presentation::free_presentation_minimized;
use commacat_core::universe::t_universe;
use commacat_core::{Bimodule, CommaObject, FDAlgebra, Limits, ModuleRep, Presentation};

use crate::doc::{
    AlgebraRecord, BimoduleRecord, CommaRecord, Document, Field, ModuleRecord, PresentationRecord, TaskRecord,
};
use crate::error::Error;
use crate::matrix::to_rows;

pub const FIXTURES: [&str; 2] = ["a2", "dual-numbers"];

struct Builder {
    doc: Document,
    algebras: Vec<(FDAlgebra, String)>,
    modules: Vec<(ModuleRep, String)>,
}

impl Builder {
    fn new(p: u32) -> Self {
        Self {
            doc: Document {
                field: Field { p },
                algebras: Default::default(),
                bimodules: Default::default(),
                modules: Default::default(),
                comma_objects: Default::default(),
                right_modules: Default::default(),
                presentations: Default::default(),
                families: Default::default(),
                universes: Default::default(),
                tasks: Vec::new(),
            },
            algebras: Vec::new(),
            modules: Vec::new(),
        }
    }

    fn algebra(&mut self, name: &str, a: &FDAlgebra) {
        self.doc.algebras.insert(
            name.to_string(),
            AlgebraRecord {
                mul: a.structure_constants(),
                unit: a.unit().to_vec(),
            },
        );
        self.algebras.push((a.clone(), name.to_string()));
    }

    fn algebra_name(&self, a: &FDAlgebra) -> String {
        self.algebras
            .iter()
            .find(|(x, _)| x == a)
            .map(|(_, n)| n.clone())
            .expect("algebras are registered before their modules")
    }

    fn bimodule(&mut self, name: &str, u: &Bimodule) {
        let rec = BimoduleRecord {
            left: self.algebra_name(u.left_algebra()),
            right: self.algebra_name(u.right_algebra()),
            dim: u.dim(),
            left_action: u.left_action().iter().map(to_rows).collect(),
            right_action: u.right_action().iter().map(to_rows).collect(),
        };
        self.doc.bimodules.insert(name.to_string(), rec);
    }

    /// Registers `m` under `name` unless an equal module already has a name.
    fn module(&mut self, name: &str, m: &ModuleRep) -> String {
        if let Some((_, n)) = self.modules.iter().find(|(x, _)| x == m) {
            return n.clone();
        }
        let rec = ModuleRecord {
            algebra: self.algebra_name(m.algebra()),
            side: m.side().into(),
            dim: m.dim(),
            action: m.action().iter().map(to_rows).collect(),
        };
        self.doc.modules.insert(name.to_string(), rec);
        self.modules.push((m.clone(), name.to_string()));
        name.to_string()
    }

    fn comma(&mut self, name: &str, bimodule: &str, c: &CommaObject, a_name: &str, b_name: &str) {
        let a = self.module(a_name, c.a());
        let b = self.module(b_name, c.b());
        self.doc.comma_objects.insert(
            name.to_string(),
            CommaRecord {
                bimodule: bimodule.to_string(),
                a,
                b,
                phi: to_rows(c.phi()),
            },
        );
    }

    fn presentation(&mut self, name: &str, s: &Presentation) {
        let source = self.module(&format!("{name} P1"), s.p1());
        let target = self.module(&format!("{name} P0"), s.p0());
        self.doc.presentations.insert(
            name.to_string(),
            PresentationRecord {
                source,
                target,
                sigma: to_rows(s.sigma().matrix()),
            },
        );
    }

    fn universe(&mut self, name: &str, members: &[&str]) {
        self.doc
            .universes
            .insert(name.to_string(), members.iter().map(|s| s.to_string()).collect());
    }
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// `R = S = U = F_2`; the comma universe is `0, S_R, S_S, P, N`.
pub fn a2() -> Document {
    let a2 = A2::new();
    let ring = &a2.ring;
    let mut b = Builder::new(2);
    b.algebra("k", ring.r());
    b.bimodule("U", ring.u());
    b.module("zero", &ring.zero_r());
    b.module("k", &a2.r_k);
    let rr = a2.right_r_universe();
    b.module("zero right", &rr[0]);
    b.module("k right", &rr[1]);
    for (name, c) in A2_NAMES.iter().zip(a2.comma().all()) {
        b.comma(name, "U", &c, &format!("{name}.A"), &format!("{name}.B"));
    }
    b.presentation("k", &Presentation::of_projective(&a2.r_k));
    b.presentation("0", &Presentation::zero(ring.r()));
    b.presentation("0 from R", &Presentation::killing(&a2.r_k));
    b.presentation("0 from S", &Presentation::killing(&a2.s_k));
    b.universe("R", &["zero", "k"]);
    b.universe("S", &["zero", "k"]);
    b.universe("R right", &["zero right", "k right"]);
    b.universe("S right", &["zero right", "k right"]);
    b.universe("T", &A2_NAMES);
    b.doc.tasks = vec![
        TaskRecord::HomTable { objects: "T".into() },
        TaskRecord::VerifyAll {
            name: Some("a2".into()),
            bimodule: "U".into(),
            r_universe: "R".into(),
            s_universe: "S".into(),
            right_r_universe: "R right".into(),
            right_s_universe: "S right".into(),
            r_presentations: names(&["k", "0", "0 from R"]),
            s_presentations: names(&["k", "0", "0 from S"]),
            comma_universe: Some("T".into()),
        },
    ];
    b.doc
}

/// `R = F_2[x]/(x²)`, `S = F_2`, `U = F_2` with `x` acting as zero. The comma
/// universe is enumerated from the component universes and frozen here.
pub fn dual_numbers() -> Document {
    let dn = DualNumbers::new();
    let ring = &dn.ring;
    let mut b = Builder::new(2);
    b.algebra("R", ring.r());
    b.algebra("S", ring.s());
    b.bimodule("U", ring.u());
    let r_names = ["R.0", "R.k", "R.R", "R.k2"];
    let s_names = ["S.0", "S.k", "S.k2"];
    for (n, m) in r_names.iter().zip(dn.r_universe()) {
        b.module(n, &m);
    }
    for (n, m) in s_names.iter().zip(dn.s_universe()) {
        b.module(n, &m);
    }
    let rr_names = ["R.0 right", "R.k right", "R.R right"];
    let sr_names = ["S.0 right", "S.k right"];
    for (n, m) in rr_names.iter().zip(dn.right_r_universe()) {
        b.module(n, &m);
    }
    for (n, m) in sr_names.iter().zip(dn.right_s_universe()) {
        b.module(n, &m);
    }
    let comma = t_universe(ring, &dn.r_universe(), &dn.s_universe(), &Limits::default())
        .expect("the dual-numbers universe is small");
    let t_names: Vec<String> = (0..comma.len()).map(|i| format!("T{i}")).collect();
    for (n, c) in t_names.iter().zip(&comma) {
        b.comma(n, "U", c, &format!("{n}.A"), &format!("{n}.B"));
    }
    b.presentation(
        "k by x",
        &free_presentation_minimized(&dn.r_k).expect("k has a presentation"),
    );
    b.presentation("R", &Presentation::of_projective(&dn.r_reg));
    b.presentation("0 over R", &Presentation::zero(ring.r()));
    b.presentation("0 from R", &Presentation::killing(&dn.r_reg));
    b.presentation("k", &Presentation::of_projective(&dn.s_k));
    b.presentation("0 over S", &Presentation::zero(ring.s()));
    b.presentation("0 from S", &Presentation::killing(&dn.s_k));
    b.universe("R", &r_names);
    b.universe("S", &s_names);
    b.universe("R right", &rr_names);
    b.universe("S right", &sr_names);
    let t_refs: Vec<&str> = t_names.iter().map(String::as_str).collect();
    b.universe("T", &t_refs);
    b.doc.tasks = vec![
        TaskRecord::HomTable { objects: "T".into() },
        TaskRecord::VerifyAll {
            name: Some("dual-numbers".into()),
            bimodule: "U".into(),
            r_universe: "R".into(),
            s_universe: "S".into(),
            right_r_universe: "R right".into(),
            right_s_universe: "S right".into(),
            r_presentations: names(&["k by x", "R", "0 over R", "0 from R"]),
            s_presentations: names(&["k", "0 over S", "0 from S"]),
            comma_universe: Some("T".into()),
        },
    ];
    b.doc
}

pub fn fixture(name: &str) -> Result<Document, Error> {
    match name {
        "a2" => Ok(a2()),
        "dual-numbers" => Ok(dual_numbers()),
        _ => Err(Error::UnknownFixture(name.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::validate;

    #[test]
    fn fixtures_are_valid_documents() {
        for name in FIXTURES {
            let doc = fixture(name).unwrap();
            let text = doc.to_canonical();
            let back = Document::parse(&text).unwrap();
            assert_eq!(back, doc);
            validate(&back).unwrap_or_else(|v| panic!("{name}: {v}"));
        }
    }

    #[test]
    fn dual_numbers_has_the_enumerated_universe() {
        let doc = dual_numbers();
        assert_eq!(doc.universes["T"].len(), 19);
        assert_eq!(doc.comma_objects.len(), 19);
    }
}
