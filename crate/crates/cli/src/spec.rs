//! Definition files: a domain, named objects and a task list.
//!
//! ```text
//! domain 2
//! op and 2 = 0001
//! rel leq 2 = 00 01 11
//! thread t = 0 1 | 1
//! rop c0 = const 0
//! rop f w=1 : 00->0 01->1 10->1 11->1
//! matrix m = 0 | 1 ; tailrow: | 1
//! evset R = 0* | 1
//! decseq L closure evset=R
//! task gpoly rop=c0 evset=R depth=8 expect=fails_with
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use omegaclone::finite::{FinOp, FinRel};
use omegaclone::matrices::EvMatrix;
use omegaclone::omega_ops::{parse_rop, ROp};
use omegaclone::omega_rel::{
    dec_exists, dec_intersect, dec_join, dec_permute, diagonal, from_finitary, local_closure, DecSeq, EvSet,
    FinitePermutation, Pattern,
};
use omegaclone::threads::{parse_digits, EvThread};
use omegaclone::{Elem, FiniteDomain};

use crate::error::CliError;
use crate::task::TaskKind;

/// How a named `decseq` was declared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecDef {
    TopExt(String),
    ClosurePattern(String),
    ClosureSet(String),
    Diagonal,
    Intersect(String, String),
    Join(String, String),
    Exists(String, Vec<usize>),
    Permute(String, Vec<usize>),
}

#[derive(Debug, Clone)]
pub enum Object {
    Op(FinOp),
    Rel(FinRel),
    Thread(EvThread),
    ROp(ROp),
    Matrix(EvMatrix),
    EvSet(EvSet),
    DecSeq(DecDef, DecSeq),
}

impl Object {
    pub fn keyword(&self) -> &'static str {
        match self {
            Object::Op(_) => "op",
            Object::Rel(_) => "rel",
            Object::Thread(_) => "thread",
            Object::ROp(_) => "rop",
            Object::Matrix(_) => "matrix",
            Object::EvSet(_) => "evset",
            Object::DecSeq(..) => "decseq",
        }
    }
}

impl PartialEq for Object {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Object::Op(a), Object::Op(b)) => a == b,
            (Object::Rel(a), Object::Rel(b)) => a == b,
            (Object::Thread(a), Object::Thread(b)) => a == b,
            (Object::ROp(a), Object::ROp(b)) => a == b,
            (Object::Matrix(a), Object::Matrix(b)) => a == b,
            (Object::EvSet(a), Object::EvSet(b)) => a == b,
            (Object::DecSeq(a, _), Object::DecSeq(b, _)) => a == b,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decl {
    pub name: String,
    pub object: Object,
}

#[derive(Debug, Clone)]
pub struct TaskSpec {
    pub line: usize,
    pub kind: TaskKind,
    pub name: Option<String>,
    pub expect: Option<String>,
    pub args: BTreeMap<String, String>,
}

/// Equal up to the line the task was read from.
impl PartialEq for TaskSpec {
    fn eq(&self, other: &Self) -> bool {
        (self.kind, &self.name, &self.expect, &self.args) == (other.kind, &other.name, &other.expect, &other.args)
    }
}

impl TaskSpec {
    /// The explicit `name=`, else the task kind.
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.kind.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkbenchSpec {
    pub domain: FiniteDomain,
    pub decls: Vec<Decl>,
    pub tasks: Vec<TaskSpec>,
}

impl WorkbenchSpec {
    pub fn get(&self, name: &str) -> Option<&Object> {
        self.decls.iter().find(|d| d.name == name).map(|d| &d.object)
    }
}

/// Splits on whitespace, keeping `key="a b"` together and dropping the quotes.
fn tokens(s: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut any = false;
    for c in s.chars() {
        match c {
            '"' => {
                quoted = !quoted;
                any = true;
            }
            c if c.is_whitespace() && !quoted => {
                if any {
                    out.push(std::mem::take(&mut cur));
                    any = false;
                }
            }
            c => {
                cur.push(c);
                any = true;
            }
        }
    }
    if quoted {
        return Err("unterminated `\"`".into());
    }
    if any {
        out.push(cur);
    }
    Ok(out)
}

fn strip_comment(line: &str) -> &str {
    let mut quoted = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => quoted = !quoted,
            '#' if !quoted => return &line[..i],
            _ => {}
        }
    }
    line
}

fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-' || c == '.')
        && !s.chars().next().is_some_and(|c| c.is_ascii_digit())
}

pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| format!("bad list entry `{x}`")))
        .collect()
}

struct Parser {
    domain: Option<FiniteDomain>,
    decls: Vec<Decl>,
    tasks: Vec<TaskSpec>,
    line: usize,
}

impl Parser {
    fn err(&self, msg: impl Into<String>) -> CliError {
        CliError::Parse { line: self.line, msg: msg.into() }
    }

    fn core(&self, e: omegaclone::Error) -> CliError {
        match e {
            omegaclone::Error::ValueOutOfRange { .. } | omegaclone::Error::DomainMismatch { .. } => {
                CliError::DomainMismatch { line: self.line, msg: e.to_string() }
            }
            e => self.err(e.to_string()),
        }
    }

    fn domain(&self) -> Result<FiniteDomain, CliError> {
        self.domain.ok_or_else(|| self.err("`domain` must be declared before any object"))
    }

    fn lookup(&self, name: &str, keyword: &str) -> Result<&Object, CliError> {
        match self.decls.iter().find(|d| d.name == name) {
            Some(d) if d.object.keyword() == keyword => Ok(&d.object),
            Some(d) => Err(self.err(format!("`{name}` is a {}, expected a {keyword}", d.object.keyword()))),
            None => Err(CliError::UnknownName { line: self.line, name: name.into() }),
        }
    }

    fn declare(&mut self, name: &str, object: Object) -> Result<(), CliError> {
        if !valid_name(name) {
            return Err(self.err(format!("bad name `{name}`")));
        }
        if self.decls.iter().any(|d| d.name == name) {
            return Err(self.err(format!("`{name}` is already declared")));
        }
        self.decls.push(Decl { name: name.into(), object });
        Ok(())
    }

    /// `NAME [=] rest`, returning the name and the text after it.
    fn name_and_body<'a>(&self, rest: &'a str) -> Result<(&'a str, &'a str), CliError> {
        let rest = rest.trim_start();
        let end = rest.find(|c: char| c.is_whitespace() || c == '=').unwrap_or(rest.len());
        let (name, body) = rest.split_at(end);
        if name.is_empty() {
            return Err(self.err("missing name"));
        }
        let body = body.trim_start();
        Ok((name, body.strip_prefix('=').unwrap_or(body).trim()))
    }

    fn statement(&mut self, keyword: &str, rest: &str) -> Result<(), CliError> {
        match keyword {
            "domain" => {
                if self.domain.is_some() {
                    return Err(self.err("domain declared twice"));
                }
                let n: usize = rest.trim().parse().map_err(|_| self.err(format!("bad domain size `{}`", rest.trim())))?;
                self.domain = Some(FiniteDomain::new(n).map_err(|e| self.err(e.to_string()))?);
                Ok(())
            }
            "op" => {
                let d = self.domain()?;
                let (name, _) = self.name_and_body(rest)?;
                let (arity, table) = self.arity_and_body(name, rest)?;
                let table = parse_digits(table).map_err(|e| self.err(e.to_string()))?;
                let op = FinOp::new(d, arity, table).map_err(|e| self.core(e))?;
                self.declare(name, Object::Op(op))
            }
            "rel" => {
                let d = self.domain()?;
                let (name, _) = self.name_and_body(rest)?;
                let (arity, body) = self.arity_and_body(name, rest)?;
                let digits = parse_digits(&body.replace("()", "")).map_err(|e| self.err(e.to_string()))?;
                let rel = if arity == 0 {
                    if body.contains("()") {
                        FinRel::full(d, 0)
                    } else {
                        FinRel::empty(d, 0)
                    }
                } else {
                    if digits.len() % arity != 0 {
                        return Err(self.err(format!("{} entries do not split into {arity}-tuples", digits.len())));
                    }
                    FinRel::from_tuples(d, arity, digits.chunks(arity))
                }
                .map_err(|e| self.core(e))?;
                self.declare(name, Object::Rel(rel))
            }
            "thread" => {
                let d = self.domain()?;
                let (name, body) = self.name_and_body(rest)?;
                let t: EvThread = body.parse().map_err(|e: omegaclone::Error| self.err(e.to_string()))?;
                t.check_domain(d).map_err(|e| self.core(e))?;
                self.declare(name, Object::Thread(t))
            }
            "rop" => {
                let d = self.domain()?;
                let (name, body) = self.name_and_body(rest)?;
                let rop = self.rop_body(d, body)?;
                self.declare(name, Object::ROp(rop))
            }
            "matrix" => {
                let d = self.domain()?;
                let (name, body) = self.name_and_body(rest)?;
                let m: EvMatrix = body.parse().map_err(|e: omegaclone::Error| self.err(e.to_string()))?;
                m.check_domain(d).map_err(|e| self.core(e))?;
                self.declare(name, Object::Matrix(m))
            }
            "evset" => {
                let d = self.domain()?;
                let (name, body) = self.name_and_body(rest)?;
                let set: EvSet = body.parse().map_err(|e: omegaclone::Error| self.err(e.to_string()))?;
                set.check_domain(d).map_err(|e| self.core(e))?;
                self.declare(name, Object::EvSet(set))
            }
            "decseq" => {
                let d = self.domain()?;
                let (name, body) = self.name_and_body(rest)?;
                let toks = tokens(body).map_err(|e| self.err(e))?;
                let def = self.dec_def(&toks)?;
                let seq = self.build_decseq(d, &def)?;
                self.declare(name, Object::DecSeq(def, seq))
            }
            "task" => {
                let toks = tokens(rest).map_err(|e| self.err(e))?;
                let task = self.task(&toks)?;
                self.tasks.push(task);
                Ok(())
            }
            other => Err(self.err(format!("unknown statement `{other}`"))),
        }
    }

    /// For `NAME ARITY = body`.
    fn arity_and_body<'a>(&self, name: &str, rest: &'a str) -> Result<(usize, &'a str), CliError> {
        let after = rest.trim_start()[name.len()..].trim_start();
        let (arity, body) = after.split_once('=').ok_or_else(|| self.err("expected `NAME ARITY = ...`"))?;
        let arity = arity.trim().parse().map_err(|_| self.err(format!("bad arity `{}`", arity.trim())))?;
        Ok((arity, body.trim()))
    }

    fn rop_body(&self, d: FiniteDomain, body: &str) -> Result<ROp, CliError> {
        let words: Vec<&str> = body.split_whitespace().collect();
        let elem = |s: &str| -> Result<Elem, CliError> {
            match parse_digits(s).map_err(|e| self.err(e.to_string()))?.as_slice() {
                [a] => d.check(*a).map_err(|e| self.core(e)),
                _ => Err(self.err(format!("expected one element, got `{s}`"))),
            }
        };
        match words.as_slice() {
            ["const", a] => ROp::constant(d, elem(a)?).map_err(|e| self.core(e)),
            ["proj", i] => {
                let i = i.parse().map_err(|_| self.err(format!("bad index `{i}`")))?;
                ROp::proj(d, i).map_err(|e| self.core(e))
            }
            ["tail"] => Ok(ROp::tail_op(d)),
            ["top", op] => match self.lookup(op, "op")? {
                Object::Op(f) => Ok(ROp::top_ext(f)),
                _ => unreachable!(),
            },
            _ => parse_rop(d, body).map_err(|e| self.core(e)),
        }
    }

    fn dec_def(&self, toks: &[String]) -> Result<DecDef, CliError> {
        let kv = |t: &str, key: &str| t.strip_prefix(key).and_then(|r| r.strip_prefix('=')).map(str::to_string);
        let list = |s: &str| parse_list::<usize>(s).map_err(|e| self.err(e));
        let t: Vec<&str> = toks.iter().map(String::as_str).collect();
        let def = match t.as_slice() {
            ["topext", a] => DecDef::TopExt(kv(a, "rel").ok_or_else(|| self.err("expected `rel=NAME`"))?),
            ["closure", a] if a.starts_with("pattern=") => DecDef::ClosurePattern(kv(a, "pattern").unwrap()),
            ["closure", a] => DecDef::ClosureSet(kv(a, "evset").ok_or_else(|| self.err("expected `evset=` or `pattern=`"))?),
            ["diagonal"] => DecDef::Diagonal,
            ["op", "intersect", r, s] => DecDef::Intersect(r.to_string(), s.to_string()),
            ["op", "join", r, s] => DecDef::Join(r.to_string(), s.to_string()),
            ["op", "exists", r, k] => {
                DecDef::Exists(r.to_string(), list(&kv(k, "keep").ok_or_else(|| self.err("expected `keep=`"))?)?)
            }
            ["op", "permute", r, s] => {
                DecDef::Permute(r.to_string(), list(&kv(s, "sigma").ok_or_else(|| self.err("expected `sigma=`"))?)?)
            }
            _ => return Err(self.err(format!("unknown decseq form `{}`", toks.join(" ")))),
        };
        Ok(def)
    }

    fn seq(&self, name: &str) -> Result<DecSeq, CliError> {
        match self.lookup(name, "decseq")? {
            Object::DecSeq(_, s) => Ok(s.clone()),
            _ => unreachable!(),
        }
    }

    fn build_decseq(&self, d: FiniteDomain, def: &DecDef) -> Result<DecSeq, CliError> {
        Ok(match def {
            DecDef::TopExt(s) => match self.lookup(s, "rel")? {
                Object::Rel(r) => from_finitary(r),
                _ => unreachable!(),
            },
            DecDef::ClosurePattern(p) => {
                let set = EvSet::Patterns(
                    p.split(',').map(|x| x.parse::<Pattern>()).collect::<Result<_, _>>().map_err(|e| self.err(e.to_string()))?,
                );
                local_closure(d, &set).map_err(|e| self.core(e))?
            }
            DecDef::ClosureSet(r) => match self.lookup(r, "evset")? {
                Object::EvSet(set) => local_closure(d, set).map_err(|e| self.core(e))?,
                _ => unreachable!(),
            },
            DecDef::Diagonal => diagonal(d),
            DecDef::Intersect(r, t) => dec_intersect(&self.seq(r)?, &self.seq(t)?).map_err(|e| self.core(e))?,
            DecDef::Join(r, t) => dec_join(&self.seq(r)?, &self.seq(t)?).map_err(|e| self.core(e))?,
            DecDef::Exists(r, kept) => dec_exists(&self.seq(r)?, &kept.iter().copied().collect::<BTreeSet<_>>()),
            DecDef::Permute(r, images) => {
                let sigma = FinitePermutation::new(images.clone()).map_err(|e| self.err(e.to_string()))?;
                dec_permute(&self.seq(r)?, &sigma)
            }
        })
    }

    fn task(&self, toks: &[String]) -> Result<TaskSpec, CliError> {
        let (kind, rest) = toks.split_first().ok_or_else(|| self.err("missing task kind"))?;
        let kind: TaskKind = kind.parse().map_err(|e: String| self.err(e))?;
        let mut args = BTreeMap::new();
        let (mut name, mut expect) = (None, None);
        for t in rest {
            let (k, v) = t.split_once('=').ok_or_else(|| self.err(format!("expected `key=value`, got `{t}`")))?;
            match k {
                "name" => name = Some(v.to_string()),
                "expect" => expect = Some(v.to_string()),
                _ => {
                    if !kind.keys().iter().any(|(key, _)| *key == k) {
                        return Err(self.err(format!("task {kind} does not take `{k}`")));
                    }
                    if args.insert(k.to_string(), v.to_string()).is_some() {
                        return Err(self.err(format!("`{k}` given twice")));
                    }
                }
            }
        }
        for (key, keyword) in kind.keys() {
            let Some(keyword) = keyword else { continue };
            if let Some(v) = args.get(key) {
                for n in v.split(',').map(str::trim).filter(|n| !n.is_empty()) {
                    self.lookup(n, keyword)?;
                }
            }
        }
        for key in kind.required() {
            if !args.contains_key(*key) {
                return Err(self.err(format!("task {kind} needs `{key}=`")));
            }
        }
        Ok(TaskSpec { line: self.line, kind, name, expect, args })
    }
}

/// Parses a definition file, stopping at the first error.
pub fn parse_spec(text: &str) -> Result<WorkbenchSpec, CliError> {
    let mut p = Parser { domain: None, decls: Vec::new(), tasks: Vec::new(), line: 0 };
    let mut lines = text.lines().enumerate();
    while let Some((i, raw)) = lines.next() {
        p.line = i + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        // a bare `matrix NAME` opens a block of rows closed by `end`
        if keyword == "matrix" && rest.split_whitespace().count() == 1 && !rest.contains('=') {
            let start = p.line;
            let mut rows = Vec::new();
            loop {
                let Some((j, raw)) = lines.next() else {
                    p.line = start;
                    return Err(p.err("matrix block without `end`"));
                };
                p.line = j + 1;
                let row = strip_comment(raw).trim();
                if row == "end" {
                    break;
                }
                if !row.is_empty() {
                    rows.push(row.to_string());
                }
            }
            let stmt = format!("{} = {}", rest.trim(), rows.join(" ; "));
            p.statement("matrix", &stmt)?;
            continue;
        }
        p.statement(keyword, rest)?;
    }
    let domain = p.domain.ok_or_else(|| CliError::Parse { line: 0, msg: "no `domain` declaration".into() })?;
    Ok(WorkbenchSpec { domain, decls: p.decls, tasks: p.tasks })
}

fn quote(v: &str) -> String {
    if v.is_empty() || v.contains(char::is_whitespace) || v.contains('#') {
        format!("\"{v}\"")
    } else {
        v.to_string()
    }
}

impl fmt::Display for DecDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |xs: &[usize]| xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        match self {
            DecDef::TopExt(s) => write!(f, "topext rel={s}"),
            DecDef::ClosurePattern(p) => write!(f, "closure pattern={}", quote(p)),
            DecDef::ClosureSet(r) => write!(f, "closure evset={r}"),
            DecDef::Diagonal => write!(f, "diagonal"),
            DecDef::Intersect(r, t) => write!(f, "op intersect {r} {t}"),
            DecDef::Join(r, t) => write!(f, "op join {r} {t}"),
            DecDef::Exists(r, k) => write!(f, "op exists {r} keep={}", list(k)),
            DecDef::Permute(r, s) => write!(f, "op permute {r} sigma={}", list(s)),
        }
    }
}

/// The declaration line for a named object, in the syntax [`parse_spec`] reads.
pub fn declaration(name: &str, object: &Object) -> String {
    match object {
        Object::Op(f) => format!("op {name} {f}"),
        Object::Rel(r) => format!("rel {name} {r}"),
        Object::Thread(t) => format!("thread {name} = {t}"),
        Object::ROp(r) => format!("rop {name} {r}"),
        Object::Matrix(m) => format!("matrix {name} = {m}"),
        Object::EvSet(s) => format!("evset {name} = {s}"),
        Object::DecSeq(def, _) => format!("decseq {name} {def}"),
    }
}

impl fmt::Display for TaskSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "task {}", self.kind)?;
        if let Some(n) = &self.name {
            write!(f, " name={}", quote(n))?;
        }
        for (k, v) in &self.args {
            write!(f, " {k}={}", quote(v))?;
        }
        if let Some(e) = &self.expect {
            write!(f, " expect={}", quote(e))?;
        }
        Ok(())
    }
}

impl fmt::Display for WorkbenchSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "domain {}", self.domain.size())?;
        for d in &self.decls {
            writeln!(f, "{}", declaration(&d.name, &d.object))?;
        }
        for t in &self.tasks {
            writeln!(f, "{t}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# a small file
domain 2
op and 2 = 0001
op not 1 = 1 0
rel leq 2 = 00 01 11
rel nothing 1 =
rel unit 0 = ()
thread t = 0 1 | 1
rop c0 = const 0
rop f w=1 : 00->0 01->1 10->1 11->1
rop tand = top and
matrix m = 0 | 1 ; tailrow: | 1
matrix block
  0 1 | 0
  tailrow: | 1
end
evset R = 0* | 1
evset E = { 0 1 | 1 ; | 0 }
decseq L closure evset=R
decseq P closure pattern=\"0* | 1\"
decseq T topext rel=leq
decseq D diagonal
decseq I op intersect T D
decseq X op exists T keep=1
decseq S op permute T sigma=1,0
task geiger ops=and opcap=2 relcap=3
task gpoly rop=c0 evset=R depth=8 expect=fails_with name=\"eq regression\"
";

    #[test]
    fn parses_every_form() {
        let s = parse_spec(SAMPLE).unwrap();
        assert_eq!(s.decls.len(), 20);
        assert_eq!(s.tasks.len(), 2);
        match s.get("and").unwrap() {
            Object::Op(f) => assert_eq!(f.table(), &[0, 0, 0, 1]),
            _ => panic!(),
        }
        match s.get("leq").unwrap() {
            Object::Rel(r) => assert_eq!(r.len(), 3),
            _ => panic!(),
        }
        match s.get("t").unwrap() {
            Object::Thread(t) => assert_eq!(t.prefix(), &[0]),
            _ => panic!(),
        }
        match s.get("unit").unwrap() {
            Object::Rel(r) => assert_eq!(r.len(), 1),
            _ => panic!(),
        }
        assert_eq!(s.get("block"), Some(&Object::Matrix("0 1 | 0 ; tailrow: | 1".parse().unwrap())));
        assert_eq!(s.tasks[1].label(), "eq regression");
    }

    #[test]
    fn print_then_parse_is_identity() {
        let s = parse_spec(SAMPLE).unwrap();
        let again = parse_spec(&s.to_string()).unwrap();
        assert_eq!(again, s);
    }

    fn error_of(text: &str) -> CliError {
        parse_spec(text).unwrap_err()
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        assert!(matches!(error_of("domain 2\nop f 1 = 012"), CliError::Parse { line: 2, .. }));
        assert!(matches!(error_of("op f 1 = 01"), CliError::Parse { line: 1, .. }));
        assert!(matches!(error_of("domain 2\n\ntask gpoly rop=nope evset=R"), CliError::UnknownName { line: 3, .. }));
        assert!(matches!(error_of("domain 2\nop f 1 = 02"), CliError::DomainMismatch { line: 2, .. }));
        assert!(matches!(error_of("domain 2\nop f 1 = 01\nop f 1 = 10"), CliError::Parse { line: 3, .. }));
        assert!(matches!(error_of("domain 2\ntask polycheck"), CliError::Parse { line: 2, .. }));
        assert!(matches!(error_of("domain 2\nmatrix m\n| 0\n"), CliError::Parse { line: 2, .. }));
    }

    #[test]
    fn references_must_have_the_right_kind() {
        let e = error_of("domain 2\nop f 1 = 01\ntask polycheck op=f rel=f");
        assert!(matches!(e, CliError::Parse { line: 3, .. }), "{e}");
    }

    #[test]
    fn quoted_values_keep_spaces() {
        assert_eq!(tokens("a=\"x y\" b").unwrap(), vec!["a=x y", "b"]);
        assert_eq!(tokens("ops=\"\"").unwrap(), vec!["ops="]);
        assert!(tokens("a=\"x").is_err());
    }
}
