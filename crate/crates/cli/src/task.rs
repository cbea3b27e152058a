//! Task dispatch. Each task reads its arguments, refuses up front when the
//! predicted enumeration is too large, and reports a verdict.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use omegaclone::finite::{
    cut_of_intersection, generate_clone, geiger_roundtrip, geiger_roundtrip_via, inv, op_space, pol,
    preservation_failure, rel_space, relation_clone_generate, ByArity, CloneCaps, FinOp, FinRel, GeigerRoute,
};
use omegaclone::galois::{
    cl_membership, duedue2_condition4_check, g_polymorphism_fin_failure, inv_finitary, is_bot_polymorphism,
    is_g_polymorphism_decseq, matrical_polymorphism, pol_omega, r_mc, theorem_clone_inclusion_check, IdealKind,
    IdealSpec, InclusionCaps, MatricalTarget, OmegaRelation, PolVerdict, SearchBounds,
};
use omegaclone::matrices::{apply_rop, Column, EvMatrix};
use omegaclone::omega_ops::{axiom_suite, finitary_approximation, generate_omega_clone, AxiomKind, ROp, SampleSpec};
use omegaclone::omega_rel::{DecSeq, EvSet, Verdict};
use omegaclone::threads::EvThread;
use omegaclone::FiniteDomain;

use crate::error::CliError;
use crate::report::{Report, Status, Witness};
use crate::spec::{Object, TaskSpec, WorkbenchSpec};

/// Largest predicted enumeration a task runs without an explicit `limit=`.
pub const DEFAULT_LIMIT: u128 = 1 << 31;

macro_rules! task_kinds {
    ($($variant:ident => $word:literal,)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum TaskKind { $($variant,)* }

        impl TaskKind {
            pub const ALL: &'static [TaskKind] = &[$(TaskKind::$variant,)*];
        }

        impl fmt::Display for TaskKind {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $(TaskKind::$variant => $word,)* })
            }
        }

        impl FromStr for TaskKind {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, String> {
                match s {
                    $($word => Ok(TaskKind::$variant),)*
                    _ => Err(format!("unknown task `{s}`")),
                }
            }
        }
    };
}

task_kinds! {
    Geiger => "geiger",
    Clone => "clone",
    Pol => "pol",
    Inv => "inv",
    RelClone => "relclone",
    Cut => "cut",
    PolyCheck => "polycheck",
    GPolyFin => "gpolyfin",
    GPoly => "gpoly",
    BotPoly => "botpoly",
    Axioms => "axioms",
    Member => "member",
    CutSeq => "cutseq",
    OmegaClone => "omegaclone",
    PolOmega => "polomega",
    InvFin => "invfin",
    Rmc => "rmc",
    ClMember => "clmember",
    Duedue2 => "duedue2",
    Matrical => "matrical",
    Inclusion => "inclusion",
    Approx => "approx",
    Apply => "apply",
}

type Key = (&'static str, Option<&'static str>);

impl TaskKind {
    /// Accepted keys, each with the object keyword it must name, if any.
    pub fn keys(self) -> Vec<Key> {
        use TaskKind::*;
        let named: &[Key] = match self {
            Geiger => &[("ops", Some("op")), ("opcap", None), ("relcap", None), ("route", None)],
            Clone => &[("ops", Some("op")), ("cap", None), ("member", Some("op"))],
            Pol | RelClone => &[("rels", Some("rel")), ("cap", None)],
            Inv => &[("ops", Some("op")), ("cap", None)],
            Cut => &[("rels", Some("rel")), ("n", None)],
            PolyCheck => &[("op", Some("op")), ("rel", Some("rel"))],
            GPolyFin => &[("rop", Some("rop")), ("rel", Some("rel"))],
            GPoly => &[
                ("rop", Some("rop")),
                ("evset", Some("evset")),
                ("decseq", Some("decseq")),
                ("depth", None),
                ("prefix", None),
                ("columns", None),
            ],
            BotPoly => &[("rop", Some("rop")), ("evset", Some("evset")), ("depth", None), ("prefix", None), ("columns", None)],
            Axioms => &[("kind", None), ("width", None), ("max_n", None), ("samples", None), ("seed", None)],
            Member => &[("thread", Some("thread")), ("decseq", Some("decseq")), ("depth", None)],
            CutSeq => &[("decseq", Some("decseq")), ("k", None)],
            OmegaClone | InvFin => &[("rops", Some("rop")), ("cap", None)],
            PolOmega => &[("rels", Some("rel")), ("width", None)],
            Rmc => &[("matrix", Some("matrix")), ("rops", Some("rop")), ("saturate", None), ("rop", Some("rop"))],
            ClMember => &[("rop", Some("rop")), ("rops", Some("rop")), ("ideal", None), ("prefix", None), ("saturate", None)],
            Duedue2 => &[("rop", Some("rop")), ("gens", Some("rop")), ("alpha", None), ("prefix", None)],
            Matrical => &[
                ("rop", Some("rop")),
                ("rel", Some("rel")),
                ("evset", Some("evset")),
                ("matrix", Some("matrix")),
                ("columns", None),
                ("prefix", None),
                ("depth", None),
            ],
            Inclusion => &[("decseqs", Some("decseq")), ("relcap", None), ("opcap", None), ("width", None)],
            Approx => &[("rop", Some("rop")), ("threads", Some("thread")), ("fallback", None)],
            Apply => &[
                ("rop", Some("rop")),
                ("matrix", Some("matrix")),
                ("rel", Some("rel")),
                ("evset", Some("evset")),
                ("decseq", Some("decseq")),
                ("depth", None),
            ],
        };
        let mut keys = named.to_vec();
        keys.push(("limit", None));
        keys
    }

    pub fn required(self) -> &'static [&'static str] {
        use TaskKind::*;
        match self {
            Cut => &["rels", "n"],
            PolyCheck => &["op", "rel"],
            GPolyFin => &["rop", "rel"],
            GPoly | ClMember | Duedue2 => &["rop"],
            BotPoly => &["rop", "evset"],
            Member => &["thread", "decseq"],
            CutSeq => &["decseq", "k"],
            Rmc => &["matrix"],
            Matrical | Apply => &["rop", "matrix"],
            Inclusion => &["decseqs"],
            Approx => &["rop", "threads"],
            _ => &[],
        }
    }
}

/// What a task found, before comparison with `expect=`.
struct Outcome {
    verdict: String,
    pass: bool,
    fields: Vec<(String, String)>,
    witnesses: Vec<Witness>,
}

impl Outcome {
    fn new(verdict: impl Into<String>, pass: bool) -> Self {
        Self { verdict: verdict.into(), pass, fields: Vec::new(), witnesses: Vec::new() }
    }

    fn field(mut self, key: &str, value: impl ToString) -> Self {
        self.fields.push((key.into(), value.to_string()));
        self
    }

    fn witness(mut self, kind: &'static str, literal: impl ToString) -> Self {
        self.witnesses.push(Witness { kind, literal: literal.to_string() });
        self
    }

    fn from_pol(v: PolVerdict) -> Self {
        let pass = !v.fails();
        let out = Outcome::new(v.to_string(), pass);
        match v {
            PolVerdict::FailsWith(m) => out.witness("matrix", m),
            _ => out,
        }
    }
}

struct Ctx<'a> {
    spec: &'a WorkbenchSpec,
    task: &'a TaskSpec,
    caps: Vec<(String, String)>,
}

type Res<T> = Result<T, CliError>;

impl<'a> Ctx<'a> {
    fn domain(&self) -> FiniteDomain {
        self.spec.domain
    }

    fn fail(&self, msg: impl fmt::Display) -> CliError {
        CliError::Task { task: self.task.label(), msg: msg.to_string() }
    }

    fn raw(&self, key: &str) -> Option<&'a str> {
        self.task.args.get(key).map(String::as_str)
    }

    /// A numeric cap, echoed in the report.
    fn num(&mut self, key: &str, default: usize) -> Res<usize> {
        let v = match self.raw(key) {
            Some(s) => s.parse().map_err(|_| self.fail(format!("`{key}` must be a number, got `{s}`")))?,
            None => default,
        };
        self.caps.push((key.into(), v.to_string()));
        Ok(v)
    }

    fn opt_num(&mut self, key: &str) -> Res<Option<usize>> {
        match self.raw(key) {
            Some(_) => self.num(key, 0).map(Some),
            None => Ok(None),
        }
    }

    fn word(&mut self, key: &str, default: &str) -> String {
        let v = self.raw(key).unwrap_or(default).to_string();
        self.caps.push((key.into(), v.clone()));
        v
    }

    fn names(&self, key: &str) -> Vec<&'a str> {
        self.raw(key).map_or(Vec::new(), |v| v.split(',').map(str::trim).filter(|n| !n.is_empty()).collect())
    }

    fn object(&self, name: &str) -> &'a Object {
        self.spec.get(name).expect("names are resolved while parsing")
    }

    fn op(&self, key: &str) -> Option<&'a FinOp> {
        self.raw(key).map(|n| match self.object(n) {
            Object::Op(f) => f,
            _ => unreachable!("kinds are checked while parsing"),
        })
    }

    fn ops(&self, key: &str) -> Vec<FinOp> {
        self.names(key).into_iter().map(|n| match self.object(n) {
            Object::Op(f) => f.clone(),
            _ => unreachable!("kinds are checked while parsing"),
        }).collect()
    }

    fn rel(&self, key: &str) -> Option<&'a FinRel> {
        self.raw(key).map(|n| match self.object(n) {
            Object::Rel(r) => r,
            _ => unreachable!("kinds are checked while parsing"),
        })
    }

    fn rels(&self, key: &str) -> Vec<FinRel> {
        self.names(key).into_iter().map(|n| match self.object(n) {
            Object::Rel(r) => r.clone(),
            _ => unreachable!("kinds are checked while parsing"),
        }).collect()
    }

    fn rop(&self, key: &str) -> Option<&'a ROp> {
        self.raw(key).map(|n| match self.object(n) {
            Object::ROp(r) => r,
            _ => unreachable!("kinds are checked while parsing"),
        })
    }

    fn rops(&self, key: &str) -> Vec<ROp> {
        self.names(key).into_iter().map(|n| match self.object(n) {
            Object::ROp(r) => r.clone(),
            _ => unreachable!("kinds are checked while parsing"),
        }).collect()
    }

    fn thread(&self, key: &str) -> Option<&'a EvThread> {
        self.raw(key).map(|n| match self.object(n) {
            Object::Thread(t) => t,
            _ => unreachable!("kinds are checked while parsing"),
        })
    }

    fn threads(&self, key: &str) -> Vec<EvThread> {
        self.names(key).into_iter().map(|n| match self.object(n) {
            Object::Thread(t) => t.clone(),
            _ => unreachable!("kinds are checked while parsing"),
        }).collect()
    }

    fn matrix(&self, key: &str) -> Option<&'a EvMatrix> {
        self.raw(key).map(|n| match self.object(n) {
            Object::Matrix(m) => m,
            _ => unreachable!("kinds are checked while parsing"),
        })
    }

    fn evset(&self, key: &str) -> Option<&'a EvSet> {
        self.raw(key).map(|n| match self.object(n) {
            Object::EvSet(s) => s,
            _ => unreachable!("kinds are checked while parsing"),
        })
    }

    fn decseq(&self, key: &str) -> Option<&'a DecSeq> {
        self.raw(key).map(|n| match self.object(n) {
            Object::DecSeq(_, s) => s,
            _ => unreachable!("kinds are checked while parsing"),
        })
    }

    fn decseqs(&self, key: &str) -> Vec<DecSeq> {
        self.names(key).into_iter().map(|n| match self.object(n) {
            Object::DecSeq(_, s) => s.clone(),
            _ => unreachable!("kinds are checked while parsing"),
        }).collect()
    }

    /// Refuses before enumerating when the estimate (`None` for overflow)
    /// is above the limit.
    fn guard(&mut self, estimate: Option<u128>) -> Res<()> {
        let limit = match self.raw("limit") {
            Some(s) => s.parse().map_err(|_| self.fail(format!("bad limit `{s}`")))?,
            None => DEFAULT_LIMIT,
        };
        match estimate {
            Some(e) if e <= limit => {
                self.caps.push(("estimate".into(), e.to_string()));
                Ok(())
            }
            e => Err(CliError::CapExceeded {
                task: self.task.label(),
                estimate: e.map_or_else(|| "more than 2^128".into(), |e| e.to_string()),
                limit,
            }),
        }
    }

    fn core<T>(&self, r: omegaclone::Result<T>) -> Res<T> {
        r.map_err(|e| self.fail(e))
    }
}

fn sum(xs: impl IntoIterator<Item = Option<u128>>) -> Option<u128> {
    xs.into_iter().try_fold(0u128, |acc, x| acc.checked_add(x?))
}

fn op_spaces(d: FiniteDomain, cap: usize) -> Option<u128> {
    sum((0..=cap).map(|k| op_space(d, k)))
}

fn rel_spaces(d: FiniteDomain, cap: usize) -> Option<u128> {
    sum((0..=cap).map(|k| rel_space(d, k)))
}

fn pow(base: u128, exp: usize) -> Option<u128> {
    base.checked_pow(u32::try_from(exp).ok()?)
}

/// Operations of width `<= w`: `|A|^(|A|^(w+1))`.
fn rop_space(d: FiniteDomain, w: usize) -> Option<u128> {
    op_space(d, w + 1)
}

/// Threads with prefix length `<= p`, counted with repetitions.
fn thread_count(d: FiniteDomain, p: usize) -> Option<u128> {
    let a = d.size() as u128;
    sum((0..=p).map(|i| pow(a, i + 1)))
}

/// Compositions a saturation may try: generators times slice space to
/// the largest generator arity.
fn clone_estimate(d: FiniteDomain, gens: &[FinOp], cap: usize) -> Option<u128> {
    let arity = gens.iter().map(FinOp::arity).max().unwrap_or(0);
    sum((0..=cap).map(|k| pow(op_space(d, k)?, arity)?.checked_mul(gens.len().max(1) as u128)))
}

fn counts<T: Ord>(b: &ByArity<T>) -> String {
    b.counts().iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn search_bounds(ctx: &mut Ctx<'_>) -> Res<SearchBounds> {
    let base = SearchBounds::default();
    Ok(SearchBounds {
        depth: ctx.num("depth", base.depth)?,
        prefix: ctx.num("prefix", base.prefix)?,
        columns: ctx.num("columns", base.columns)?,
        alpha: base.alpha,
    })
}

fn column_literal(c: &Column) -> String {
    c.to_string()
}

fn lim_out(seq: &DecSeq, t: &EvThread, depth: usize) -> omegaclone::Result<bool> {
    Ok(matches!(seq.lim_membership(t, depth)?, Verdict::CertifiedOut(_)))
}

fn run(ctx: &mut Ctx<'_>) -> Res<Outcome> {
    let d = ctx.domain();
    match ctx.task.kind {
        TaskKind::Geiger => {
            let gens = ctx.ops("ops");
            let caps = CloneCaps::new(ctx.num("opcap", 2)?, ctx.num("relcap", 3)?);
            let route = ctx.word("route", "auto");
            let est = [clone_estimate(d, &gens, caps.op_arity), rel_spaces(d, caps.relation_arity), op_spaces(d, caps.op_arity)];
            ctx.guard(est.into_iter().try_fold(0, |m: u128, e| e.map(|e| m.max(e))))?;
            let report = match route.as_str() {
                "auto" => geiger_roundtrip(d, &gens, caps),
                "explicit" => geiger_roundtrip_via(d, &gens, caps, GeigerRoute::Explicit),
                "matrices" => geiger_roundtrip_via(d, &gens, caps, GeigerRoute::Matrices),
                r => return Err(ctx.fail(format!("unknown route `{r}`"))),
            };
            let report = ctx.core(report)?;
            let mut out = Outcome::new(if report.equal { "equal" } else { "unequal" }, report.equal)
                .field("route_used", format!("{:?}", report.route).to_lowercase())
                .field("clone", counts(&report.clone))
                .field("pol_of_inv", counts(&report.pol_of_inv));
            if let Some(inv) = &report.invariants {
                out = out.field("invariants", inv.iter().map(ToString::to_string).collect::<Vec<_>>().join(","));
            }
            Ok(match report.witness {
                Some(w) => out.witness("op", w),
                None => out,
            })
        }
        TaskKind::Clone => {
            let gens = ctx.ops("ops");
            let cap = ctx.num("cap", 2)?;
            ctx.guard(clone_estimate(d, &gens, cap))?;
            let clone = ctx.core(generate_clone(d, &gens, cap))?;
            let (verdict, pass) = match ctx.op("member") {
                Some(f) if f.arity() > cap => return Err(ctx.fail(format!("member has arity above the cap {cap}"))),
                Some(f) if clone.contains(f.arity(), f) => ("contains", true),
                Some(_) => ("missing", false),
                None => ("computed", true),
            };
            Ok(Outcome::new(verdict, pass).field("counts", counts(&clone)).field("total", clone.total()))
        }
        TaskKind::Pol => {
            let rels = ctx.rels("rels");
            let cap = ctx.num("cap", 2)?;
            ctx.guard(op_spaces(d, cap))?;
            let p = ctx.core(pol(d, &rels, cap))?;
            Ok(Outcome::new("computed", true).field("counts", counts(&p)))
        }
        TaskKind::Inv => {
            let ops = ctx.ops("ops");
            let cap = ctx.num("cap", 2)?;
            ctx.guard(rel_spaces(d, cap))?;
            let r = ctx.core(inv(d, &ops, cap))?;
            Ok(Outcome::new("computed", true).field("counts", counts(&r)))
        }
        TaskKind::RelClone => {
            let rels = ctx.rels("rels");
            let cap = ctx.num("cap", 2)?;
            ctx.guard(rel_spaces(d, cap))?;
            let r = ctx.core(relation_clone_generate(d, &rels, cap))?;
            Ok(Outcome::new("computed", true).field("counts", counts(&r)))
        }
        TaskKind::Cut => {
            let rels = ctx.rels("rels");
            let n = ctx.num("n", 0)?;
            let top = rels.iter().map(FinRel::arity).fold(n, usize::max);
            ctx.guard(pow(d.size() as u128, top))?;
            let cut = ctx.core(cut_of_intersection(d, &rels, n))?;
            let naive = rels.iter().try_fold(ctx.core(FinRel::full(d, n))?, |acc, s| acc.intersect(&s.top_cut(n)?));
            let naive = ctx.core(naive)?;
            Ok(Outcome::new("computed", true)
                .field("relation", &cut)
                .field("intersection_of_cuts", &naive)
                .field("strictly_smaller", cut != naive))
        }
        TaskKind::PolyCheck => {
            let (f, s) = (ctx.op("op").unwrap(), ctx.rel("rel").unwrap());
            ctx.guard(pow(s.len() as u128, f.arity()))?;
            if f.domain() != s.domain() {
                return Err(ctx.fail("operation and relation over different domains"));
            }
            Ok(match preservation_failure(f, s) {
                None => Outcome::new("holds", true),
                Some(cols) => {
                    let image: Vec<_> = (0..s.arity()).map(|i| f.eval(&cols.iter().map(|c| c[i]).collect::<Vec<_>>())).collect();
                    let out = Outcome::new("fails_with", false).field("image", omegaclone::domain::digits(&image));
                    // as a matrix for the top extension, which ignores its tail column
                    let refs: Vec<&[_]> = cols.iter().map(Vec::as_slice).collect();
                    let tail = cols.last().cloned().or_else(|| s.tuples().next());
                    match tail {
                        Some(t) => out.witness("matrix", ctx.core(EvMatrix::from_finite_columns(s.arity(), &refs, &t))?),
                        None => out,
                    }
                }
            })
        }
        TaskKind::GPolyFin => {
            let (phi, s) = (ctx.rop("rop").unwrap(), ctx.rel("rel").unwrap());
            ctx.guard(pow(s.len() as u128, phi.canonical().width() + 1))?;
            if phi.domain() != s.domain() {
                return Err(ctx.fail("operation and relation over different domains"));
            }
            Ok(match g_polymorphism_fin_failure(phi, s) {
                None => Outcome::new("holds", true),
                Some(m) => Outcome::new("fails_with", false).witness("matrix", m),
            })
        }
        TaskKind::GPoly | TaskKind::BotPoly => {
            let phi = ctx.rop("rop").unwrap();
            let bounds = search_bounds(ctx)?;
            let pool = match ctx.evset("evset") {
                Some(r) => Some(r.members(bounds.prefix).len() as u128),
                None => thread_count(d, bounds.prefix),
            };
            ctx.guard(pool.and_then(|p| pow(p, bounds.columns + 1)))?;
            let v = match (ctx.task.kind, ctx.evset("evset"), ctx.decseq("decseq")) {
                (TaskKind::BotPoly, Some(r), _) => is_bot_polymorphism(phi, r, bounds),
                (TaskKind::GPoly, Some(r), None) => is_g_polymorphism_decseq(phi, OmegaRelation::Set(r), bounds),
                (TaskKind::GPoly, None, Some(r)) => is_g_polymorphism_decseq(phi, OmegaRelation::Seq(r), bounds),
                _ => return Err(ctx.fail("give exactly one of `evset=` and `decseq=`")),
            };
            Ok(Outcome::from_pol(ctx.core(v)?))
        }
        TaskKind::Axioms => {
            let kinds = match ctx.word("kind", "all").as_str() {
                "all" => AxiomKind::ALL.to_vec(),
                list => list.split(',').map(AxiomKind::parse).collect::<Result<_, _>>().map_err(|e| ctx.fail(e))?,
            };
            let width = ctx.num("width", 1)?;
            let max_n = ctx.num("max_n", 2)?;
            let spec = match ctx.opt_num("samples")? {
                Some(samples) => {
                    let seed = ctx.num("seed", 0)? as u64;
                    ctx.guard(Some(samples as u128))?;
                    SampleSpec::Sampled { width, max_n, samples, seed }
                }
                None => {
                    ctx.guard(rop_space(d, width).and_then(|r| pow(r, 2 * max_n + 1)))?;
                    SampleSpec::Exhaustive { width, max_n }
                }
            };
            let mut out = Outcome::new("holds", true);
            for kind in kinds {
                let r = ctx.core(axiom_suite(d, kind, spec))?;
                out = out.field(&format!("checked_{kind}"), r.checked);
                if r.checked_as != kind {
                    out = out.field(&format!("checked_{kind}_as"), r.checked_as);
                }
                if let Some(c) = r.counterexample {
                    out.verdict = "fails".into();
                    out.pass = false;
                    out = out.field(&format!("counterexample_{kind}"), c);
                }
            }
            Ok(out)
        }
        TaskKind::Member => {
            let (t, seq) = (ctx.thread("thread").unwrap(), ctx.decseq("decseq").unwrap());
            let depth = ctx.num("depth", 8)?;
            ctx.guard(pow(d.size() as u128, depth + t.prefix_len() + 1))?;
            let v = ctx.core(seq.lim_membership(t, depth))?;
            let pass = !matches!(v, Verdict::CertifiedOut(_));
            let verdict = v.to_string();
            let out = Outcome::new(verdict.split('(').next().unwrap_or_default(), pass);
            Ok(match v {
                Verdict::CertifiedOut(i) => out.field("cut", i),
                Verdict::InUpToDepth(i) => out.field("checked_to", i),
                Verdict::CertifiedIn => out,
            })
        }
        TaskKind::CutSeq => {
            let seq = ctx.decseq("decseq").unwrap();
            let k = ctx.num("k", 0)?;
            ctx.guard(pow(d.size() as u128, k + 1))?;
            let c = ctx.core(seq.cut(k))?;
            Ok(Outcome::new("computed", true).field("size", c.len()).field("relation", c))
        }
        TaskKind::OmegaClone => {
            let gens = ctx.rops("rops");
            let cap = ctx.num("cap", 2)?;
            ctx.guard(rop_space(d, cap))?;
            let c = ctx.core(generate_omega_clone(d, &gens, cap))?;
            Ok(Outcome::new("computed", true).field("size", c.len()))
        }
        TaskKind::PolOmega => {
            let rels = ctx.rels("rels");
            let width = ctx.num("width", 1)?;
            ctx.guard(rop_space(d, width))?;
            let p = ctx.core(pol_omega(d, &rels, width))?;
            Ok(Outcome::new("computed", true).field("size", p.len()))
        }
        TaskKind::InvFin => {
            let clone = ctx.rops("rops");
            let cap = ctx.num("cap", 2)?;
            ctx.guard(rel_spaces(d, cap))?;
            let r = ctx.core(inv_finitary(d, &clone, cap))?;
            Ok(Outcome::new("computed", true).field("counts", counts(&r)))
        }
        TaskKind::Rmc => {
            let m = ctx.matrix("matrix").unwrap();
            let clone = saturated(ctx, "rops")?;
            let rel = ctx.core(r_mc(d, m, &clone))?;
            let out = match ctx.rop("rop") {
                Some(phi) => {
                    let image = apply_rop(phi, m);
                    let inside = matches!(&image, Column::Finite(v) if rel.contains(v));
                    Outcome::new(if inside { "contains" } else { "missing" }, inside).field("image", column_literal(&image))
                }
                None => Outcome::new("computed", true),
            };
            Ok(out.field("clone_size", clone.len()).field("relation", rel))
        }
        TaskKind::ClMember => {
            let phi = ctx.rop("rop").unwrap();
            let kind = match ctx.word("ideal", "local").as_str() {
                "local" => IdealKind::Local,
                "uniform" => IdealKind::Uniform,
                "trace" => IdealKind::Trace,
                "global" => IdealKind::Global,
                k => return Err(ctx.fail(format!("unknown ideal `{k}`"))),
            };
            let prefix = ctx.num("prefix", 3)?;
            let clone = saturated(ctx, "rops")?;
            let member = cl_membership(phi, &clone, &IdealSpec::canonical(kind, d, prefix));
            Ok(Outcome::new(if member { "member" } else { "not_member" }, member).field("clone_size", clone.len()))
        }
        TaskKind::Duedue2 => {
            let phi = ctx.rop("rop").unwrap();
            let gens = ctx.rops("gens");
            let bounds = SearchBounds { alpha: ctx.num("alpha", 3)?, prefix: ctx.num("prefix", 3)?, ..SearchBounds::default() };
            let width = gens.iter().map(|g| g.canonical().width()).fold(phi.canonical().width().max(bounds.prefix + 1), usize::max);
            ctx.guard(thread_count(d, bounds.prefix).and_then(|t| pow(t, bounds.alpha)))?;
            let v = ctx.core(duedue2_condition4_check(phi, &gens, bounds))?;
            Ok(Outcome::from_pol(v).field("clone_width", width))
        }
        TaskKind::Matrical => {
            let (phi, m) = (ctx.rop("rop").unwrap(), ctx.matrix("matrix").unwrap());
            let bounds = search_bounds(ctx)?;
            let target = match (ctx.rel("rel"), ctx.evset("evset")) {
                (Some(s), None) => MatricalTarget::Finite(s),
                (None, Some(r)) => MatricalTarget::Set(r),
                _ => return Err(ctx.fail("give exactly one of `rel=` and `evset=`")),
            };
            let pool = match target {
                MatricalTarget::Finite(s) => s.len() as u128,
                MatricalTarget::Set(r) => r.members(bounds.prefix).len() as u128,
            };
            ctx.guard(pow(pool, bounds.columns))?;
            Ok(Outcome::from_pol(ctx.core(matrical_polymorphism(phi, target, m, bounds))?))
        }
        TaskKind::Inclusion => {
            let family = ctx.decseqs("decseqs");
            let caps = InclusionCaps {
                relation_arity: ctx.num("relcap", 2)?,
                op_arity: ctx.num("opcap", 2)?,
                width: ctx.num("width", 1)?,
            };
            let est = [rop_space(d, caps.width), rel_spaces(d, caps.relation_arity), op_spaces(d, caps.op_arity)];
            ctx.guard(est.into_iter().try_fold(0, |m: u128, e| e.map(|e| m.max(e))))?;
            let r = ctx.core(theorem_clone_inclusion_check(d, &family, caps))?;
            let verdict = match (r.included(), r.equal()) {
                (true, true) => "included_equal",
                (true, false) => "included",
                _ => "not_included",
            };
            let mut out = Outcome::new(verdict, r.included())
                .field("polymorphisms", r.polymorphisms)
                .field("omega_polymorphisms", r.omega_polymorphisms);
            for row in &r.rows {
                out = out.field(
                    &format!("arity_{}", row.arity),
                    format!("{}/{}/{}", row.generated, row.omega_side, row.finite_side),
                );
            }
            if let Some(w) = r.rows.iter().find_map(|row| row.witness.clone()) {
                out = out.witness("rel", w);
            }
            Ok(out)
        }
        TaskKind::Approx => {
            let phi = ctx.rop("rop").unwrap();
            let threads = ctx.threads("threads");
            let fallback = ctx.num("fallback", 0)?;
            let f = ctx.core(finitary_approximation(phi, &threads, fallback as omegaclone::Elem))?;
            Ok(Outcome::new("computed", true).field("op", f))
        }
        TaskKind::Apply => {
            let (phi, m) = (ctx.rop("rop").unwrap(), ctx.matrix("matrix").unwrap());
            ctx.core(m.check_domain(d))?;
            let image = apply_rop(phi, m);
            let depth = ctx.num("depth", 8)?;
            let columns = m.columns();
            // `Some(true)` inside the target, `Some(false)` outside, `None` without one
            let inside = |c: &Column| -> omegaclone::Result<Option<bool>> {
                Ok(match (c, ctx.rel("rel"), ctx.evset("evset"), ctx.decseq("decseq")) {
                    (_, None, None, None) => None,
                    (Column::Finite(v), Some(s), None, None) => Some(s.contains(v)),
                    (Column::Omega(t), None, Some(r), None) => Some(r.contains(t)),
                    (Column::Omega(t), None, None, Some(r)) => Some(!lim_out(r, t, depth)?),
                    _ => return Err(omegaclone::Error::ShapeMismatch("matrix shape does not fit the target".into())),
                })
            };
            let out = match ctx.core(inside(&image))? {
                None => Outcome::new("computed", true),
                Some(true) => Outcome::new("holds", true),
                Some(false) => {
                    let mut all_in = true;
                    for c in &columns {
                        all_in &= ctx.core(inside(c))? == Some(true);
                    }
                    if all_in {
                        Outcome::new("fails_with", false)
                    } else {
                        Outcome::new("columns_outside", false)
                    }
                }
            };
            Ok(out.field("image", column_literal(&image)))
        }
    }
}

/// The `rops=` list, saturated to width `saturate=` when that is given.
fn saturated(ctx: &mut Ctx<'_>, key: &str) -> Res<Vec<ROp>> {
    let rops = ctx.rops(key);
    match ctx.opt_num("saturate")? {
        Some(w) => {
            ctx.guard(rop_space(ctx.domain(), w))?;
            ctx.core(generate_omega_clone(ctx.domain(), &rops, w))
        }
        None => Ok(rops),
    }
}

/// Runs one task; failures to run become `error` reports.
pub fn run_task(spec: &WorkbenchSpec, index: usize, task: &TaskSpec) -> Report {
    let start = Instant::now();
    let mut ctx = Ctx { spec, task, caps: Vec::new() };
    let result = run(&mut ctx);
    let elapsed = start.elapsed();
    let (status, verdict, mut fields, witnesses) = match result {
        Ok(o) => {
            let pass = match &task.expect {
                Some(e) => &o.verdict == e,
                None => o.pass,
            };
            (if pass { Status::Pass } else { Status::Fail }, o.verdict, o.fields, o.witnesses)
        }
        Err(e) => (Status::Error, "error".to_string(), vec![("error".to_string(), e.to_string())], Vec::new()),
    };
    if let Some(e) = &task.expect {
        fields.insert(0, ("expect".into(), e.clone()));
    }
    Report {
        index,
        name: task.label(),
        kind: task.kind,
        status,
        verdict,
        caps: ctx.caps,
        fields,
        witnesses,
        elapsed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::parse_spec;

    fn run_one(text: &str) -> Report {
        let spec = parse_spec(text).unwrap();
        run_task(&spec, 0, &spec.tasks[0])
    }

    #[test]
    fn every_kind_round_trips_its_name() {
        for k in TaskKind::ALL {
            assert_eq!(k.to_string().parse::<TaskKind>().unwrap(), *k);
        }
    }

    #[test]
    fn geiger_on_and() {
        let r = run_one("domain 2\nop and 2 = 0001\ntask geiger ops=and opcap=2 relcap=3");
        assert_eq!((r.status, r.verdict.as_str()), (Status::Pass, "equal"));
        assert!(r.caps.contains(&("opcap".into(), "2".into())));
    }

    #[test]
    fn constant_zero_fails_on_the_pattern_family() {
        let r = run_one("domain 2\nrop c0 = const 0\nevset R = 0* | 1\ntask gpoly rop=c0 evset=R depth=8");
        assert_eq!((r.status, r.verdict.as_str()), (Status::Fail, "fails_with"));
        assert_eq!(r.witnesses[0].literal, "tailrow: | 1");
        let r = run_one("domain 2\nrop c0 = const 0\nevset R = 0* | 1\ntask gpoly rop=c0 evset=R expect=fails_with");
        assert_eq!(r.status, Status::Pass);
    }

    #[test]
    fn oversized_requests_are_refused_with_an_estimate() {
        let r = run_one("domain 3\ntask pol cap=3");
        assert_eq!(r.status, Status::Error);
        assert!(r.fields[0].1.contains("would enumerate about"), "{:?}", r.fields);
        let r = run_one("domain 2\ntask pol cap=2 limit=10");
        assert_eq!(r.status, Status::Error);
    }

    #[test]
    fn membership_verdicts() {
        let text = "domain 2\nthread z = | 0\nthread o = 1 | 0\nevset R = 0* | 1\ndecseq L closure evset=R\n";
        let r = run_one(&format!("{text}task member thread=z decseq=L depth=5"));
        assert_eq!((r.status, r.verdict.as_str()), (Status::Pass, "in_up_to_depth"));
        let r = run_one(&format!("{text}task member thread=o decseq=L depth=5"));
        assert_eq!((r.status, r.verdict.as_str()), (Status::Fail, "certified_out"));
    }
}
