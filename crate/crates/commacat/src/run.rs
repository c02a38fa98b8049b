//! Executes the tasks of a validated document, in order.

use commacat_core::comma::{hom_comma_dim, tensor_t};
use commacat_core::module::hom_dim;
use commacat_core::presentation::{is_partial_silting, is_silting};
use commacat_core::tensor::tensor_over_algebra;
use commacat_core::torsion::{is_torsion_class, is_torsion_pair};
use commacat_core::verify::{verify_all, Setting};
use commacat_core::{Certificate, CommaObject, Fact, Limits, Outcome, Result, Verdict};

use crate::doc::{Object, Resolved, TaskRecord};
use crate::error::Error;
use crate::report::{Report, ReportBuilder};

fn comma_list(r: &Resolved, universe: &str) -> Vec<CommaObject> {
    r.universes[universe]
        .iter()
        .map(|(_, o)| match o {
            Object::Comma(c) => c.clone(),
            _ => unreachable!("checked during resolution"),
        })
        .collect()
}

/// `dim Hom` in comma form against `dim Hom` of the `T`-modules, pair by pair.
fn hom_table_task(r: &Resolved, objects: &str) -> Result<(Verdict, Vec<Vec<usize>>)> {
    let list = comma_list(r, objects);
    let mut table = Vec::with_capacity(list.len());
    let mut certs = Vec::new();
    let mut mismatches = 0;
    for x in &list {
        let mut row = Vec::with_capacity(list.len());
        for y in &list {
            let d = hom_comma_dim(x, y)?;
            let (mx, my) = (x.to_t_module(), y.to_t_module());
            if hom_dim(&mx, &my)? != d {
                mismatches += 1;
            }
            certs.push(Certificate::new(
                "comma maps are T-module maps",
                Fact::HomDim {
                    source: mx,
                    target: my,
                    dim: d,
                },
            ));
            row.push(d);
        }
        table.push(row);
    }
    let detail = format!(
        "{n}x{n} table over universe {objects}; {mismatches} disagreement(s) with T-module Hom",
        n = list.len()
    );
    Ok((
        Verdict::new("hom-table", Outcome::from_bool(mismatches == 0), detail, certs),
        table,
    ))
}

fn setting(r: &Resolved, task: &TaskRecord, limits: Limits) -> Result<Setting> {
    let TaskRecord::VerifyAll {
        name,
        bimodule,
        r_universe,
        s_universe,
        right_r_universe,
        right_s_universe,
        r_presentations,
        s_presentations,
        comma_universe,
    } = task
    else {
        unreachable!("only called for verify-all")
    };
    let pres = |names: &[String]| names.iter().map(|n| (n.clone(), r.presentations[n].clone())).collect();
    let mut s = Setting::build(
        name.as_deref().unwrap_or("document"),
        r.rings[bimodule].clone(),
        r.universe_modules(r_universe),
        r.universe_modules(s_universe),
        &r.universe_modules(right_r_universe),
        &r.universe_modules(right_s_universe),
        pres(r_presentations),
        pres(s_presentations),
        limits,
    )?;
    s.r_names = r.universe_names(r_universe);
    s.s_names = r.universe_names(s_universe);
    if let Some(cu) = comma_universe {
        s.comma_universe = comma_list(r, cu);
        s.t_names = r.universe_names(cu);
    }
    Ok(s)
}

fn run_task(r: &Resolved, task: &TaskRecord, limits: Limits) -> Result<(Verdict, Option<Vec<Vec<usize>>>)> {
    let v = match task {
        TaskRecord::HomTable { objects } => {
            let (v, t) = hom_table_task(r, objects)?;
            return Ok((v, Some(t)));
        }
        TaskRecord::VerifyAll { .. } => verify_all(&setting(r, task, limits)?)?,
        TaskRecord::TorsionPair {
            torsion,
            torsion_free,
            universe,
        } => is_torsion_pair(
            &r.families[torsion],
            &r.families[torsion_free],
            &r.universe_modules(universe),
            &limits,
        )?,
        TaskRecord::TorsionClass { family, universe } => {
            is_torsion_class(&r.families[family], &r.universe_modules(universe), &limits)?
        }
        TaskRecord::PartialSilting {
            module,
            presentation,
            universe,
        } => is_partial_silting(
            &r.module(module),
            &r.presentations[presentation],
            &r.universe_modules(universe),
            &limits,
        )?,
        TaskRecord::Silting {
            module,
            presentation,
            universe,
        } => is_silting(
            &r.module(module),
            &r.presentations[presentation],
            &r.universe_modules(universe),
            &limits,
        )?,
        TaskRecord::Membership { family, module } => {
            let f = &r.families[family];
            let m = r.module(module);
            let member = f.contains(&m, &limits)?;
            Verdict::new(
                "membership",
                Outcome::from_bool(member),
                format!("{module} in {family}: {member}"),
                vec![Certificate::new(
                    "membership",
                    Fact::Member {
                        family: f.clone(),
                        module: m,
                        member,
                    },
                )],
            )
        }
        TaskRecord::Tensor { right, comma } => {
            let (Object::Right(x), Object::Comma(c)) = (&r.objects[right], &r.objects[comma]) else {
                unreachable!("checked during resolution")
            };
            let t = tensor_t(x, c)?;
            let (xt, ct) = (x.to_t_module(), c.to_t_module());
            let direct = tensor_over_algebra(&xt, &ct)?.dim;
            Verdict::new(
                "tensor",
                Outcome::from_bool(direct == t.dim),
                format!(
                    "{right} (x)_T {comma} has dimension {} by components, {direct} directly",
                    t.dim
                ),
                vec![Certificate::new(
                    "tensor over T",
                    Fact::TensorDim {
                        right: xt,
                        left: ct,
                        dim: t.dim,
                    },
                )],
            )
        }
    };
    Ok((v, None))
}

/// Runs the tasks whose names are in `only` (all tasks when empty).
pub fn run(doc_tasks: &[TaskRecord], r: &Resolved, only: &[String], limits: Limits) -> Result<Report, Error> {
    for name in only {
        if !doc_tasks.iter().any(|t| t.name() == name) {
            return Err(Error::NoSuchTask(name.clone()));
        }
    }
    let mut report = ReportBuilder::new(limits);
    for (index, task) in doc_tasks.iter().enumerate() {
        if !only.is_empty() && !only.iter().any(|n| n == task.name()) {
            continue;
        }
        let (verdict, table) = run_task(r, task, limits).map_err(|source| Error::Task {
            index,
            task: task.name(),
            source,
        })?;
        report.push(task.name(), &verdict, table);
    }
    Ok(report.finish())
}
