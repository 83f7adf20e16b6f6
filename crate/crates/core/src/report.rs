//! Task execution and deterministic reporting (text and JSON).

use crate::algebra::format_rat;
use crate::defn::{BuiltSetup, Expectation, Task, TensorDef};
use crate::error::Result;
use crate::hierarchy::build_pn_hierarchy;
use crate::identities::{verify_identity, Bounds, CheckStatus, Instance};
use crate::tensor::{classify_pair, PairClassification};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub bounds: Bounds,
    pub jobs: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            bounds: Bounds::default(),
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SetupEcho {
    pub name: String,
    pub n: u8,
    pub d: u8,
    pub theta: String,
    pub tensors: Vec<TensorEcho>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TensorEcho {
    pub name: String,
    pub form: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct TaskReport {
    pub id: String,
    pub instance: String,
    /// "passed" | "failed" | "not-applicable"
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub residual_terms: Vec<String>,
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl TaskReport {
    fn passed(id: &str, instance: &str, checked: usize, detail: Option<Value>) -> Self {
        TaskReport {
            id: id.into(),
            instance: instance.into(),
            status: "passed".into(),
            reason: None,
            residual_terms: Vec::new(),
            checked,
            detail,
        }
    }

    fn failed(
        id: &str,
        instance: &str,
        reason: Option<String>,
        residuals: Vec<String>,
        checked: usize,
        detail: Option<Value>,
    ) -> Self {
        TaskReport {
            id: id.into(),
            instance: instance.into(),
            status: "failed".into(),
            reason,
            residual_terms: residuals,
            checked,
            detail,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    #[serde(rename = "not-applicable")]
    pub not_applicable: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub setup: SetupEcho,
    pub tasks: Vec<TaskReport>,
    pub summary: Summary,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "setup {} (n={}, d={})\n",
            self.setup.name, self.setup.n, self.setup.d
        ));
        for t in &self.tasks {
            out.push_str(&format!("[{}] {} ({})", status_tag(&t.status), t.id, t.instance));
            if let Some(r) = &t.reason {
                out.push_str(&format!(" -- {r}"));
            }
            out.push('\n');
            for res in &t.residual_terms {
                out.push_str(&format!("    residual: {res}\n"));
            }
        }
        out.push_str(&format!(
            "summary: {} passed, {} failed, {} not-applicable\n",
            self.summary.passed, self.summary.failed, self.summary.not_applicable
        ));
        out
    }

    pub fn has_failures(&self) -> bool {
        self.summary.failed > 0
    }

    pub fn has_not_applicable(&self) -> bool {
        self.summary.not_applicable > 0
    }
}

fn status_tag(s: &str) -> &'static str {
    match s {
        "passed" => "PASS",
        "failed" => "FAIL",
        _ => "N/A ",
    }
}

fn echo(setup: &BuiltSetup, def_tensors: &[(String, String)]) -> SetupEcho {
    SetupEcho {
        name: setup.name.clone(),
        n: setup.signature.n,
        d: setup.signature.d,
        theta: setup.theta.as_poly().to_string(),
        tensors: def_tensors
            .iter()
            .map(|(name, form)| {
                let value = setup
                    .tensor(name)
                    .map(|t| match t {
                        crate::tensor::Tensor::Skew(tf) => tf.to_string(),
                        crate::tensor::Tensor::General(e) => e.to_string(),
                    })
                    .unwrap_or_default();
                TensorEcho {
                    name: name.clone(),
                    form: form.clone(),
                    value,
                }
            })
            .collect(),
    }
}

fn classification_detail(cls: &PairClassification) -> Value {
    json!({
        "anti_commute": cls.anti_commute,
        "anti_commute_wrt_theta": cls.anti_commute_wrt_theta,
        "compatible_pair": cls.compatible_pair,
        "nijenhuis_I": cls.nijenhuis_i,
        "nijenhuis_J": cls.nijenhuis_j,
        "deforming_eta": cls.deforming_eta.as_ref().map(format_rat),
        "poisson_J": cls.poisson_j,
        "degenerate_theta": cls.degenerate_theta,
        "pair_class": cls.pair_class.to_string(),
    })
}

fn instance_for(setup: &BuiltSetup, i: Option<&str>, j: Option<&str>, bounds: Bounds) -> Instance {
    let pick = |explicit: Option<&str>, default: &str| {
        let name = explicit.unwrap_or(default);
        setup.tensor(name).ok().cloned()
    };
    Instance {
        name: setup.name.clone(),
        theta: setup.theta.clone(),
        i: pick(i, "I"),
        j: pick(j, "J"),
        bounds,
    }
}

fn merged_bounds(base: Bounds, overrides: &std::collections::BTreeMap<String, u32>) -> Bounds {
    let mut b = base;
    for (k, v) in overrides {
        match k.as_str() {
            "k" => b.k = *v,
            "m" => b.m = *v,
            "n" => b.n = *v,
            "s" => b.s = *v,
            "t" => b.t = *v,
            _ => {}
        }
    }
    b
}

fn run_task(setup: &BuiltSetup, task: &Task, opts: &RunOptions) -> Result<TaskReport> {
    match task {
        Task::Identity { id, i, j, bounds } => {
            let inst = instance_for(
                setup,
                i.as_deref(),
                j.as_deref(),
                merged_bounds(opts.bounds, bounds),
            );
            let rep = verify_identity(id, &inst)?;
            let instance = format!(
                "{}: I={} J={}",
                setup.name,
                i.as_deref().unwrap_or("I"),
                j.as_deref().unwrap_or("J")
            );
            Ok(match rep.status {
                CheckStatus::Passed => TaskReport::passed(id, &instance, rep.checked, None),
                CheckStatus::Failed => {
                    TaskReport::failed(id, &instance, None, rep.residuals, rep.checked, None)
                }
                CheckStatus::NotApplicable(reason) => TaskReport {
                    id: id.clone(),
                    instance,
                    status: "not-applicable".into(),
                    reason: Some(reason),
                    residual_terms: Vec::new(),
                    checked: 0,
                    detail: None,
                },
            })
        }
        Task::Classify { i, j } => {
            let ti = setup.tensor(i)?;
            let tj = setup.tensor(j)?;
            let instance = format!("{}: I={i} J={j}", setup.name);
            match (ti.skew(), tj.skew()) {
                (Some(fi), Some(fj)) => {
                    let cls = classify_pair(&setup.theta, &fi, &fj)?;
                    Ok(TaskReport::passed(
                        "classify",
                        &instance,
                        1,
                        Some(classification_detail(&cls)),
                    ))
                }
                _ => Ok(TaskReport {
                    id: "classify".into(),
                    instance,
                    status: "not-applicable".into(),
                    reason: Some("classification needs skew-symmetric tensors".into()),
                    residual_terms: Vec::new(),
                    checked: 0,
                    detail: None,
                }),
            }
        }
        Task::Courant => {
            let instance = setup.name.clone();
            let sb = setup.theta.self_bracket();
            let detail = json!({ "courant": sb.is_zero() });
            Ok(TaskReport::passed("courant", &instance, 1, Some(detail)))
        }
        Task::Hierarchy { j, i, n, k } => {
            let instance = format!("{}: J={j} I={i}", setup.name);
            let (fj, fi) = match (setup.tensor(j)?.skew(), setup.tensor(i)?.skew()) {
                (Some(fj), Some(fi)) => (fj, fi),
                _ => {
                    return Ok(TaskReport {
                        id: "hierarchy".into(),
                        instance,
                        status: "not-applicable".into(),
                        reason: Some("hierarchy needs skew-symmetric tensors".into()),
                        residual_terms: Vec::new(),
                        checked: 0,
                        detail: None,
                    })
                }
            };
            let cls = classify_pair(&setup.theta, &fi, &fj)?;
            if cls.pair_class != crate::tensor::PairClass::PoissonNijenhuis {
                return Ok(TaskReport {
                    id: "hierarchy".into(),
                    instance,
                    status: "not-applicable".into(),
                    reason: Some(format!(
                        "(J,I) is not a Poisson-Nijenhuis pair (class: {})",
                        cls.pair_class
                    )),
                    residual_terms: Vec::new(),
                    checked: 0,
                    detail: None,
                });
            }
            let n_max = n.unwrap_or(opts.bounds.n);
            let k_max = k.unwrap_or(opts.bounds.k);
            let h = build_pn_hierarchy(&setup.theta, &fj, &fi, n_max, k_max)?;
            let detail = json!({
                "tensors": h.tensors.iter().map(|t| json!({
                    "n": t.n,
                    "tensor": t.tensor.to_string(),
                    "poisson": t.poisson,
                })).collect::<Vec<_>>(),
                // compatible[k][m][n]: (Theta_k)_{I^m.J, I^n.J} = 0
                "compatible": h.compatible,
                "all_poisson": h.all_poisson,
                "all_compatible": h.all_compatible,
            });
            let checked = h.tensors.len() * (k_max as usize + 1)
                + (k_max as usize + 1) * (n_max as usize + 1) * (n_max as usize + 1);
            if h.all_poisson && h.all_compatible {
                Ok(TaskReport::passed("hierarchy", &instance, checked, Some(detail)))
            } else {
                Ok(TaskReport::failed(
                    "hierarchy",
                    &instance,
                    Some("hierarchy claims failed".into()),
                    Vec::new(),
                    checked,
                    Some(detail),
                ))
            }
        }
        Task::Expect(e) => run_expect(setup, e),
    }
}

fn run_expect(setup: &BuiltSetup, e: &Expectation) -> Result<TaskReport> {
    let name = &setup.name;
    match e {
        Expectation::Courant(expected) => {
            let actual = setup.theta.is_courant();
            let instance = format!("{name}: courant = {expected}");
            if actual == *expected {
                Ok(TaskReport::passed("expect-courant", &instance, 1, None))
            } else {
                Ok(TaskReport::failed(
                    "expect-courant",
                    &instance,
                    Some(format!("expected courant={expected}, got {actual}")),
                    if actual {
                        vec![]
                    } else {
                        vec![format!("{{Theta,Theta}} = {}", setup.theta.self_bracket())]
                    },
                    1,
                    None,
                ))
            }
        }
        Expectation::Class { i, j, class } => {
            let instance = format!("{name}: class(I={i}, J={j}) = {class}");
            let (fi, fj) = match (setup.tensor(i)?.skew(), setup.tensor(j)?.skew()) {
                (Some(fi), Some(fj)) => (fi, fj),
                _ => {
                    return Ok(TaskReport::failed(
                        "expect-class",
                        &instance,
                        Some("tensors are not skew".into()),
                        vec![],
                        1,
                        None,
                    ))
                }
            };
            let cls = classify_pair(&setup.theta, &fi, &fj)?;
            if cls.pair_class == *class {
                Ok(TaskReport::passed(
                    "expect-class",
                    &instance,
                    1,
                    Some(classification_detail(&cls)),
                ))
            } else {
                Ok(TaskReport::failed(
                    "expect-class",
                    &instance,
                    Some(format!("expected {class}, got {}", cls.pair_class)),
                    vec![],
                    1,
                    Some(classification_detail(&cls)),
                ))
            }
        }
        Expectation::Eta { tensor, eta } => {
            let instance = format!(
                "{name}: eta({tensor}) = {}",
                eta.as_ref().map(format_rat).unwrap_or_else(|| "none".into())
            );
            let tf = match setup.tensor(tensor)?.skew() {
                Some(tf) => tf,
                None => {
                    return Ok(TaskReport::failed(
                        "expect-eta",
                        &instance,
                        Some("tensor is not skew".into()),
                        vec![],
                        1,
                        None,
                    ))
                }
            };
            let actual = crate::tensor::deforming_eta(&setup.theta, &tf)?;
            if actual == *eta {
                Ok(TaskReport::passed("expect-eta", &instance, 1, None))
            } else {
                Ok(TaskReport::failed(
                    "expect-eta",
                    &instance,
                    Some(format!(
                        "expected eta = {}, got {}",
                        eta.as_ref().map(format_rat).unwrap_or_else(|| "none".into()),
                        actual.as_ref().map(format_rat).unwrap_or_else(|| "none".into())
                    )),
                    vec![],
                    1,
                    None,
                ))
            }
        }
        Expectation::Nijenhuis { tensor, value } => {
            let instance = format!("{name}: nijenhuis({tensor}) = {value}");
            let e = setup.tensor(tensor)?.endo();
            let actual = crate::tensor::is_nijenhuis(&setup.theta, &e)?;
            if actual == *value {
                Ok(TaskReport::passed("expect-nijenhuis", &instance, 1, None))
            } else {
                Ok(TaskReport::failed(
                    "expect-nijenhuis",
                    &instance,
                    Some(format!("expected {value}, got {actual}")),
                    vec![],
                    1,
                    None,
                ))
            }
        }
        Expectation::Poisson { tensor, value } => {
            let instance = format!("{name}: poisson({tensor}) = {value}");
            let tf = match setup.tensor(tensor)?.skew() {
                Some(tf) => tf,
                None => {
                    return Ok(TaskReport::failed(
                        "expect-poisson",
                        &instance,
                        Some("tensor is not skew".into()),
                        vec![],
                        1,
                        None,
                    ))
                }
            };
            let actual = crate::tensor::is_poisson(&setup.theta, &tf)?;
            if actual == *value {
                Ok(TaskReport::passed("expect-poisson", &instance, 1, None))
            } else {
                Ok(TaskReport::failed(
                    "expect-poisson",
                    &instance,
                    Some(format!("expected {value}, got {actual}")),
                    vec![],
                    1,
                    None,
                ))
            }
        }
    }
}

/// Execute every task of a built setup. Results are ordered like the tasks
/// regardless of `jobs`, so reports are byte-identical across runs.
pub fn run_setup(
    setup: &BuiltSetup,
    tensor_forms: &[(String, String)],
    opts: &RunOptions,
) -> Result<Report> {
    let tasks: Vec<TaskReport> = if opts.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| crate::error::Error::Invalid(e.to_string()))?;
        pool.install(|| {
            setup
                .tasks
                .par_iter()
                .map(|t| run_task(setup, t, opts))
                .collect::<Result<Vec<_>>>()
        })?
    } else {
        setup
            .tasks
            .iter()
            .map(|t| run_task(setup, t, opts))
            .collect::<Result<Vec<_>>>()?
    };
    let summary = Summary {
        passed: tasks.iter().filter(|t| t.status == "passed").count(),
        failed: tasks.iter().filter(|t| t.status == "failed").count(),
        not_applicable: tasks
            .iter()
            .filter(|t| t.status == "not-applicable")
            .count(),
    };
    Ok(Report {
        setup: echo(setup, tensor_forms),
        tasks,
        summary,
    })
}

/// The tensor name/form pairs of a definition, for the setup echo.
pub fn tensor_forms(def: &crate::defn::SetupDefinition) -> Vec<(String, String)> {
    def.tensors
        .iter()
        .map(|(name, d)| {
            (
                name.clone(),
                match d {
                    TensorDef::Terms(_) => "function".to_string(),
                    TensorDef::Matrix(_) => "matrix".to_string(),
                },
            )
        })
        .collect()
}
