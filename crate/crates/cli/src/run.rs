//! Running a job.

use brauerkit::artin;
use brauerkit::elliptic::{self, WeierstrassModel};
use brauerkit::fgl::{self, HeightResult};
use brauerkit::landweber::{self, ExactnessReport, Family, StepOutcome, Verdict, Witness};
use brauerkit::stienstra::{self, StienstraSurface};

use crate::job::{JobSpec, Output, Surface};
use crate::report::{Report, Value};
use crate::CliError;

fn pipeline<E: std::fmt::Display>(module: &'static str) -> impl Fn(E) -> CliError {
    move |e| CliError::Pipeline { module, message: e.to_string() }
}

fn height_value(h: &HeightResult) -> Value {
    let mut kv = vec![("value".to_string(), Value::str(&h.value))];
    if let Some(u) = &h.leading_unit {
        kv.push(("leading_unit".into(), Value::str(u)));
    }
    Value::Map(kv)
}

fn point_text(names: &[String], pt: &[i64]) -> String {
    if names.is_empty() {
        return "(no parameters)".into();
    }
    names.iter().zip(pt).map(|(n, c)| format!("{n}={c}")).collect::<Vec<_>>().join(", ")
}

fn locus_name(depth: u32) -> String {
    let mut gens = vec!["p".to_string()];
    gens.extend((1..=depth).map(|n| format!("v{n}")));
    format!("({})", gens.join(", "))
}

pub fn landweber_value(r: &ExactnessReport) -> Value {
    let mut v = vec![format!("v0 = {}", r.p)];
    for (i, e) in r.v.entries().iter().enumerate() {
        let mut s = format!("v{} = {}", i + 1, e.value);
        if !e.modulo.is_empty() {
            let gs: Vec<String> = e.modulo.iter().map(|g| g.to_string()).collect();
            s.push_str(&format!(" mod ({})", gs.join(", ")));
        }
        v.push(s);
    }
    let verdict = match r.verdict.verdict {
        Verdict::ExactAtP => format!("exact_at_{}", r.p),
        Verdict::FailsAt(n) => format!("fails_at {n}"),
        Verdict::Inconclusive => "inconclusive".into(),
    };
    let steps = r.verdict.steps.iter().map(|s| {
        let what = match s.outcome {
            StepOutcome::Unit => "p is a unit",
            StepOutcome::TorsionFree => "injective: base is torsion-free",
            StepOutcome::Regular => "non-zero-divisor",
            StepOutcome::ZeroDivisor => "zero divisor",
        };
        let tail = if s.collapses { "; quotient is zero" } else { "" };
        format!("v{}: {what}{tail}", s.n)
    });
    let loci = r.loci.iter().map(|l| {
        let how = match &l.witness {
            Witness::SmoothFibre(pt) => format!("smooth fibre at {}", point_text(&r.params, pt)),
            Witness::DiscriminantBound { k, point } => {
                format!("v_t(Delta) <= {k} everywhere; first point {}", point_text(&r.params, point))
            }
            Witness::NotFound => "no F_p-point with smooth fibre".into(),
        };
        format!("{}: {how}", locus_name(l.depth))
    });
    let mut kv = vec![
        ("v".to_string(), Value::strs(v)),
        ("verdict".into(), Value::str(verdict)),
        ("regular_up_to".into(), Value::Int(r.verdict.regular_up_to as i64)),
        ("unit_at".into(), r.verdict.unit_at.map_or(Value::str("none"), |n| Value::Int(n as i64))),
        ("steps".into(), Value::strs(steps)),
    ];
    if r.v.height_bound() == r.h_max && r.h_max >= 2 {
        if let Ok(red) = r.v.reduced(r.h_max) {
            kv.push((format!("v{}_reduced", r.h_max), Value::str(red)));
        }
    }
    kv.push(("loci".into(), Value::strs(loci)));
    kv.push((
        "height_locus_points".into(),
        Value::strs(r.top_locus_points.iter().map(|pt| point_text(&r.params, pt))),
    ));
    kv.push(("height_locus_is_origin".into(), Value::Bool(r.top_locus_is_origin)));
    kv.push(("coefficient_ring".into(), Value::str(&r.coefficient_ring)));
    kv.push(("other_primes".into(), Value::str(&r.other_primes)));
    Value::Map(kv)
}

fn run_stienstra(job: &JobSpec, x: &StienstraSurface, out: Output, report: &mut Report) -> Result<(), CliError> {
    let n = job.order;
    let need_p = || job.prime.ok_or_else(|| CliError::Parse("ring.prime is required".into()));
    match out {
        Output::Log => {
            let log = stienstra::surface_log(x, n).map_err(pipeline("stienstra"))?;
            report.push("log", Value::str(log));
        }
        Output::Fgl => {
            let g = match job.prime {
                Some(p) => stienstra::brauer_fgl(x, p, job.precision, n),
                None => stienstra::rational_fgl(x, n),
            }
            .map_err(pipeline("stienstra"))?;
            report.push("fgl", Value::str(g));
        }
        Output::PSeries => {
            let ps = stienstra::brauer_p_series(x, need_p()?, n, &[]).map_err(pipeline("stienstra"))?;
            report.push("p_series", Value::str(ps));
        }
        Output::Height => {
            let h = stienstra::brauer_height(x, need_p()?, n).map_err(pipeline("stienstra"))?;
            report.push("height", height_value(&h));
        }
        Output::Landweber => {
            let r = landweber::exactness_report(&Family::Stienstra(x.clone()), need_p()?, job.hmax)
                .map_err(pipeline("landweber"))?;
            report.push("landweber", landweber_value(&r));
        }
    }
    Ok(())
}

fn model_value(w: &WeierstrassModel) -> Value {
    let shape = elliptic::validate_k3(w);
    let degrees = shape.degrees.iter().zip(["a1", "a2", "a3", "a4", "a6"]).map(|(d, n)| match d {
        Some(d) => format!("deg {n} = {d}"),
        None => format!("{n} = 0"),
    });
    Value::Map(vec![
        ("degrees".into(), Value::strs(degrees)),
        ("is_k3_shape".into(), Value::Bool(shape.is_k3_shape)),
        (
            "delta_t_valuation".into(),
            shape.delta_valuation.map_or(Value::str("infinite"), |v| Value::Int(v as i64)),
        ),
    ])
}

fn run_elliptic(job: &JobSpec, w: &WeierstrassModel, out: Output, report: &mut Report) -> Result<(), CliError> {
    let n = job.order;
    let p = job.prime.expect("validated: Weierstrass jobs carry a prime");
    match out {
        Output::Log => {
            return Err(CliError::Pipeline {
                module: "artin",
                message: "a logarithm needs characteristic 0; Weierstrass jobs run over F_p".into(),
            })
        }
        Output::Fgl => {
            let r = artin::artin_brauer_law(w, n, 2 * n).map_err(pipeline("artin"))?;
            report.push("fgl", Value::str(&r.law));
            report.push("iterations", Value::Int(r.iterations as i64));
        }
        Output::PSeries => {
            let r = artin::artin_p_series(w, p, n, &[], 2 * n).map_err(pipeline("artin"))?;
            report.push("p_series", Value::str(r.series));
        }
        Output::Height => {
            let r = artin::artin_p_series(w, p, n, &[], 2 * n).map_err(pipeline("artin"))?;
            let h = fgl::height_of_p_series(r.series, p).map_err(pipeline("fgl"))?;
            report.push("height", height_value(&h));
            if p == 2 {
                if let Ok(a) = artin::char2_coefficients(w) {
                    if let Ok(b) = artin::char2_height_predicate(&a) {
                        report.push("char2_criterion", Value::str(b));
                    }
                }
            }
        }
        Output::Landweber => {
            let r = landweber::exactness_report(&Family::Elliptic(w.clone()), p, job.hmax)
                .map_err(pipeline("landweber"))?;
            report.push("landweber", landweber_value(&r));
        }
    }
    Ok(())
}

/// Run every requested output of a job.
pub fn run(job: &JobSpec) -> Result<Report, CliError> {
    let mut report = Report::default();
    report.push("job", Value::str(&job.name));
    report.push("kind", Value::str(job.kind));
    report.push("prime", job.prime.map_or(Value::str("none"), |p| Value::Int(p as i64)));
    if job.precision > 1 {
        report.push("precision", Value::Int(job.precision as i64));
    }
    report.push("order", Value::Int(job.order as i64));
    report.push("hmax", Value::Int(job.hmax as i64));
    if let Surface::Elliptic(w) = &job.surface {
        report.push("model", model_value(w));
    }
    for &out in &job.outputs {
        match &job.surface {
            Surface::Stienstra(x) => run_stienstra(job, x, out, &mut report)?,
            Surface::Elliptic(w) => run_elliptic(job, w, out, &mut report)?,
        }
    }
    Ok(report)
}
