//! Subcommands shared by the command-line front end and the tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::expr::{parse_expr, parse_list, Parsed};
use super::scene::Scene;
use crate::error::{Error, Result};
use crate::newton::{nv_exactness, nv_local_poly, nv_minval_rf};
use crate::ratfunc::{rf_eval, EvalResult, KPoly, RatFunc};
use crate::report::{Check, CheckStatus, Report};
use crate::residue_field::poly_to_string;
use crate::skolem::suites::{suite_pvd_x2m, suite_vx2t2, tx, x2_and_t_power};
use crate::skolem::{
    certify_int_valued, construct_lemz, construct_rho, construct_theta, lemz_grid, sk_member, verify_lemz,
    CertOutcome, CertifyMode, SampleKind, SampleSet, SkVerdict,
};
use crate::spectra::{sp_chi, sp_fip, sp_ultraskolem_probe, Fip, PointSet, PointedIndex};
use crate::valgroup::{fmt_q, parse_q, qi, Q};
use crate::valued_field::{SampleConstraints, ValuationConstraint, ValuedElement};

/// Options every subcommand accepts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Common {
    /// Preset name or path to a scene file.
    pub scene: String,
    pub seed: Option<u64>,
    pub strict: bool,
    pub pretty: bool,
}

impl Default for Common {
    fn default() -> Self {
        Common {
            scene: "a".into(),
            seed: None,
            strict: false,
            pretty: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Construct {
    Lemz { eps: String, delta: String, c: String },
    Theta,
    Rho { phi1: String, phi2: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Suite {
    /// `tx` against `ideal` (default `x^2, t^2`).
    Vx2t2 {
        samples: Option<usize>,
        ideal: Option<String>,
    },
    PvdX2m {
        samples: Option<usize>,
    },
    /// Random profile-function constructions checked on grids.
    Lemz {
        trials: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Spectra {
    Fip {
        ideal: String,
        points: String,
    },
    Probe {
        ideal: String,
        points: Option<String>,
        samples: Option<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Eval {
        phi: String,
        at: String,
    },
    Minval {
        poly: String,
    },
    Locpoly {
        poly: String,
        at: String,
    },
    Exactness {
        poly: String,
        at: String,
    },
    SkCheck {
        psi: String,
        ideal: String,
        points: Option<String>,
        samples: Option<usize>,
    },
    Certify {
        phi: String,
        depth: u32,
        mode: CertifyMode,
    },
    Construct(Construct),
    Verify(Suite),
    Spectra(Spectra),
}

/// What a run produced: the process exit code and both output streams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub exit: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Ctx {
    scene: Scene,
    seed: u64,
    rng: ChaCha8Rng,
}

impl Ctx {
    fn parse(&self, src: &str) -> Result<Parsed> {
        parse_expr(src, &self.scene.kv, &self.scene.constants)
    }

    fn func(&self, src: &str) -> Result<RatFunc> {
        Ok(self.parse(src)?.into_function())
    }

    fn elem(&self, src: &str) -> Result<ValuedElement> {
        self.parse(src)?.into_element()
    }

    fn poly(&self, src: &str) -> Result<KPoly> {
        let f = self.func(src)?;
        if !f.den().is_constant() {
            return Err(Error::Usage(format!("`{src}` is not a polynomial in x")));
        }
        let inv = f.den().coeff(0).checked_inv()?;
        Ok(f.num().scale(&inv))
    }

    fn funcs(&self, src: &str) -> Result<Vec<RatFunc>> {
        Ok(parse_list(src, &self.scene.kv, &self.scene.constants)?
            .into_iter()
            .map(Parsed::into_function)
            .collect())
    }

    fn points(&mut self, points: Option<&str>, samples: Option<usize>) -> Result<SampleSet> {
        match points {
            Some(src) => {
                let pts = parse_list(src, &self.scene.kv, &self.scene.constants)?
                    .into_iter()
                    .map(Parsed::into_element)
                    .collect::<Result<Vec<_>>>()?;
                Ok(SampleSet::new("points", SampleKind::FiniteExact, pts))
            }
            None => self.scene.samples(samples, &mut self.rng),
        }
    }
}

fn single(name: &str, details: Value) -> Vec<Check> {
    vec![Check::new(name, CheckStatus::Pass, details)]
}

fn eval_value(phi: &RatFunc, a: &ValuedElement) -> Value {
    match rf_eval(phi, a) {
        EvalResult::Pole => json!({"value": "POLE", "valuation": "POLE"}),
        EvalResult::Value(y) => json!({"value": y.to_expr(), "valuation": y.valuation().to_string()}),
    }
}

fn run_construct(ctx: &mut Ctx, c: &Construct) -> Result<Vec<Check>> {
    let d = &ctx.scene.domain;
    Ok(match c {
        Construct::Lemz { eps, delta, c } => {
            let lz = construct_lemz(&parse_q(eps)?, &parse_q(delta)?, &ctx.elem(c)?)?;
            single("lemz", lz.to_json())
        }
        Construct::Theta => {
            let th = construct_theta(d)?;
            single("theta", json!({"phi": th.to_expr(), "rf": th.to_json()}))
        }
        Construct::Rho { phi1, phi2 } => {
            let rho = construct_rho(&ctx.func(phi1)?, &ctx.func(phi2)?, d)?;
            single("rho", json!({"phi": rho.to_expr(), "rf": rho.to_json()}))
        }
    })
}

fn random_positive<R: Rng>(ctx_scene: &Scene, rng: &mut R) -> Result<Q> {
    let gs = ctx_scene.kv.group_elements_in(&ValuationConstraint::Range {
        lo: qi(0),
        hi: qi(3),
        lo_open: true,
        hi_open: false,
    });
    Ok(gs[rng.gen_range(0..gs.len())].clone())
}

fn run_suite(ctx: &mut Ctx, s: &Suite) -> Result<Vec<Check>> {
    match s {
        Suite::Vx2t2 { samples, ideal } => {
            let kv = ctx.scene.kv.clone();
            let gens = match ideal {
                Some(src) => ctx.funcs(src)?,
                None => x2_and_t_power(&kv, 2)?,
            };
            let e = ctx.scene.samples(*samples, &mut ctx.rng)?;
            suite_vx2t2(&ctx.scene.domain, &gens, &tx(&kv), &e, &mut ctx.rng)
        }
        Suite::PvdX2m { samples } => {
            let e = ctx.scene.samples(*samples, &mut ctx.rng)?;
            let basis = ctx.scene.basis.clone();
            suite_pvd_x2m(&ctx.scene.domain, &basis, &e, &mut ctx.rng)
        }
        Suite::Lemz { trials } => {
            let kv = ctx.scene.kv.clone();
            let mut checks = Vec::with_capacity(*trials);
            let c_range = SampleConstraints::valuation(ValuationConstraint::closed(qi(-2), qi(3)));
            for k in 0..*trials {
                let eps = random_positive(&ctx.scene, &mut ctx.rng)?;
                let delta = random_positive(&ctx.scene, &mut ctx.rng)?;
                let c = if ctx.rng.gen_bool(0.2) {
                    kv.zero()
                } else {
                    kv.sample(&mut ctx.rng, &c_range)?
                };
                let lz = construct_lemz(&eps, &delta, &c)?;
                let grid = lemz_grid(&kv, &lz, &delta);
                let res = verify_lemz(&lz, &c, &delta, &grid, 10, &mut ctx.rng)?;
                let mut details = lz.to_json();
                details["delta"] = json!(fmt_q(&delta));
                details["c"] = json!(c.to_expr());
                details["check"] = res.to_json();
                checks.push(Check::pass_if(&format!("trial-{k}"), res.ok(), details));
            }
            Ok(checks)
        }
    }
}

fn fip_json(pi: &PointedIndex, fip: &Fip) -> Value {
    match fip {
        Fip::HasFip { common, witness } => json!({
            "fip": true,
            "common": pi.labels(common),
            "witness": witness.map(|w| pi.label(w)),
        }),
        Fip::Fails { subfamily } => json!({"fip": false, "empty_subfamily": subfamily}),
    }
}

fn run_spectra(ctx: &mut Ctx, s: &Spectra) -> Result<Vec<Check>> {
    match s {
        Spectra::Fip { ideal, points } => {
            let gens = ctx.funcs(ideal)?;
            let e = ctx.points(Some(points), None)?;
            let pi = PointedIndex::from_samples(&ctx.scene.domain, &e);
            let chis: Vec<_> = gens.iter().map(|g| sp_chi(g, &pi)).collect();
            let sets: Vec<PointSet> = chis.iter().map(|c| c.set.clone()).collect();
            let fip = sp_fip(&sets, &pi.all());
            let mut details = fip_json(&pi, &fip);
            details["chis"] = chis.iter().map(|c| crate::spectra::chi_json(&pi, c)).collect();
            Ok(single("fip", details))
        }
        Spectra::Probe {
            ideal,
            points,
            samples,
        } => {
            let gens = ctx.funcs(ideal)?;
            let e = ctx.points(points.as_deref(), *samples)?;
            let probe = sp_ultraskolem_probe(&gens, &e, &ctx.scene.domain)?;
            let mut checks = vec![Check::pass_if("consistency", probe.consistent, probe.to_json())];
            if let Some(ok) = probe.rho_check {
                checks.push(Check::pass_if(
                    "rho-intersection",
                    ok,
                    json!({"pairs": gens.len() - 1}),
                ));
            }
            Ok(checks)
        }
    }
}

fn run_checks(ctx: &mut Ctx, cmd: &Command) -> Result<(String, Vec<Check>)> {
    Ok(match cmd {
        Command::Eval { phi, at } => {
            let f = ctx.func(phi)?;
            let a = ctx.elem(at)?;
            let mut details = eval_value(&f, &a);
            details["phi"] = json!(f.to_expr());
            details["at"] = json!(a.to_expr());
            ("eval".into(), single("eval", details))
        }
        Command::Minval { .. } => unreachable!("handled separately"),
        Command::Locpoly { poly, at } => {
            let f = ctx.poly(poly)?;
            let a = ctx.elem(at)?;
            let r = nv_local_poly(&f, &a)?;
            let details = json!({
                "d_index": r.d_index,
                "residue_poly": poly_to_string(&r.residue_poly, "x"),
                "minval_at": fmt_q(&r.minval_at),
            });
            ("locpoly".into(), single("locpoly", details))
        }
        Command::Exactness { poly, at } => {
            let f = ctx.poly(poly)?;
            let a = ctx.elem(at)?;
            let r = nv_exactness(&f, &a)?;
            (
                "exactness".into(),
                single("exactness", serde_json::to_value(&r).expect("serializable")),
            )
        }
        Command::SkCheck {
            psi,
            ideal,
            points,
            samples,
        } => {
            let psi = ctx.func(psi)?;
            let gens = ctx.funcs(ideal)?;
            let e = ctx.points(points.as_deref(), *samples)?;
            let r = sk_member(&psi, &gens, &e, &ctx.scene.domain)?;
            let status = match r.member {
                SkVerdict::Member => CheckStatus::Pass,
                SkVerdict::Evidence => CheckStatus::Evidence,
                SkVerdict::NotMember => CheckStatus::Fail,
            };
            let details = json!({
                "member": r.member,
                "sample_kind": e.kind,
                "points": r.per_point,
                "poles": r.poles,
            });
            ("sk-check".into(), vec![Check::new("sk-member", status, details)])
        }
        Command::Certify { phi, depth, mode } => {
            let f = ctx.func(phi)?;
            let cert = certify_int_valued(&f, &ctx.scene.domain, *depth, *mode, &mut ctx.rng)?;
            let status = match cert.outcome {
                CertOutcome::Certified => CheckStatus::Pass,
                CertOutcome::Counterexample { .. } => CheckStatus::Fail,
                CertOutcome::Unknown { .. } => CheckStatus::Unknown,
            };
            let mut details = cert.to_json();
            details["phi"] = json!(f.to_expr());
            ("certify".into(), vec![Check::new("int-valued", status, details)])
        }
        Command::Construct(c) => ("construct".into(), run_construct(ctx, c)?),
        Command::Verify(s) => {
            let name = match s {
                Suite::Vx2t2 { .. } => "vx2t2",
                Suite::PvdX2m { .. } => "pvd-x2m",
                Suite::Lemz { .. } => "lemz",
            };
            (name.into(), run_suite(ctx, s)?)
        }
        Command::Spectra(s) => ("spectra".into(), run_spectra(ctx, s)?),
    })
}

fn summary(report: &Report) -> String {
    let mut out = format!("{} on scene {}\n", report.suite, report.scene.name);
    for c in &report.checks {
        let status = serde_json::to_value(c.status).expect("serializable");
        out.push_str(&format!("  {:<24} {}\n", c.name, status.as_str().unwrap_or("?")));
    }
    out
}

fn try_run(common: &Common, cmd: &Command) -> Result<Outcome> {
    let scene = Scene::load(&common.scene)?;
    let seed = common.seed.unwrap_or(scene.seed());
    let mut ctx = Ctx {
        rng: ChaCha8Rng::seed_from_u64(seed),
        scene,
        seed,
    };
    if let Command::Minval { poly } = cmd {
        let pl = nv_minval_rf(&ctx.func(poly)?)?;
        return Ok(Outcome {
            exit: 0,
            stdout: format!("{}\n", pl.to_json()),
            stderr: String::new(),
        });
    }
    let (suite, checks) = run_checks(&mut ctx, cmd)?;
    let report = ctx.scene.report(&suite, checks, ctx.seed);
    let exit = if report.any_fail() {
        1
    } else if common.strict && report.any_unknown() {
        3
    } else {
        0
    };
    let stdout = format!(
        "{}\n",
        serde_json::to_string_pretty(&report).expect("serializable")
    );
    let stderr = if common.pretty {
        summary(&report)
    } else {
        String::new()
    };
    Ok(Outcome { exit, stdout, stderr })
}

/// Runs one subcommand. Exit codes: 0 when every check passes, 1 when
/// some check fails, 2 on usage or scene errors, 3 when `strict` is set
/// and some check is unknown.
pub fn run_report(common: &Common, cmd: &Command) -> Outcome {
    match try_run(common, cmd) {
        Ok(o) => o,
        Err(e) => Outcome {
            exit: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
