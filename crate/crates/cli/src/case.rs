//! Line-oriented case files: one record `kind key=value ...` per line, with
//! `#` starting a comment. Values are checked against the preconditions of
//! the target operation while parsing, so a file that parses only fails by
//! disagreeing with the mathematics.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use hecke_core::exact_algebra::{int, scalar_text, Flavor, Scalar};
use hecke_core::kz_blocks::{Mutation, Param, WeightParams};
use hecke_core::root_loop::{Coweight, RootDatum};

/// A parse failure with its 1-based location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Virasoro,
    ConjugationNilpotent,
    ConjugationCoweight,
    Minuscule,
    Factorize,
    HeckeClass,
    WardTransport,
    KzTransport,
    TwoPoint,
}

impl Kind {
    pub const ALL: [Kind; 9] = [
        Kind::Virasoro,
        Kind::ConjugationNilpotent,
        Kind::ConjugationCoweight,
        Kind::Minuscule,
        Kind::Factorize,
        Kind::HeckeClass,
        Kind::WardTransport,
        Kind::KzTransport,
        Kind::TwoPoint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Virasoro => "virasoro",
            Kind::ConjugationNilpotent => "conjugation-nilpotent",
            Kind::ConjugationCoweight => "conjugation-coweight",
            Kind::Minuscule => "minuscule",
            Kind::Factorize => "factorize",
            Kind::HeckeClass => "hecke-class",
            Kind::WardTransport => "ward-transport",
            Kind::KzTransport => "kz-transport",
            Kind::TwoPoint => "two-point",
        }
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            Kind::Virasoro => &["depth", "m", "n"],
            Kind::ConjugationNilpotent => &["a", "j", "n", "depth", "root"],
            Kind::ConjugationCoweight => &["p", "n", "depth"],
            Kind::Minuscule => &["p", "depth"],
            Kind::Factorize => &["a", "mu", "lambda", "j", "flavor"],
            Kind::HeckeClass => &["type", "mu", "lambda", "alpha", "j", "flavor", "nu"],
            Kind::WardTransport => &["n", "chi", "k", "mutation"],
            Kind::KzTransport => &["n", "chi", "k", "i", "mutation"],
            Kind::TwoPoint => &["chi", "k"],
        }
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Kind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Kind::ALL.iter().map(|k| k.name()).collect();
            format!("unknown case kind `{s}` (expected one of {})", names.join(", "))
        })
    }
}

/// What a case asserts about its identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expect {
    /// Every identity reduces to zero.
    Verified,
    /// At least one identity has a nonzero residual (mutation controls).
    Failed,
}

impl Expect {
    pub fn name(self) -> &'static str {
        match self {
            Expect::Verified => "verified",
            Expect::Failed => "failed",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JChoice {
    /// Every `0 <= j < alpha(lambda)`.
    All,
    Listed,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CaseParams {
    Virasoro { depth: i64, m: Vec<i64>, n: Vec<i64> },
    ConjugationNilpotent { a: Vec<Scalar>, j: Vec<i64>, n: Vec<i64>, depth: i64, positive: bool },
    ConjugationCoweight { p: Vec<i64>, n: Vec<i64>, depth: i64 },
    Minuscule { p: i64, depth: i64 },
    Factorize { a: Vec<Scalar>, mu: Vec<i64>, lambda: Vec<i64>, j_choice: JChoice, j: Vec<i64>, flavors: Vec<Flavor> },
    HeckeClass { datum: String, mu: Vec<i64>, lambda: Vec<i64>, alpha: Vec<i64>, j: i64, flavor: Flavor, nu: Option<Vec<i64>> },
    WardTransport { params: WeightParams, mutation: Mutation },
    KzTransport { params: WeightParams, points: Vec<usize>, mutation: Mutation },
    TwoPoint { chi: Vec<Param>, k: Vec<Scalar> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseSpec {
    pub id: String,
    pub line: usize,
    pub kind: Kind,
    pub expect: Expect,
    pub params: CaseParams,
    /// The record as written, for transcripts.
    pub source: String,
}

/// Options that apply to every case of a file.
#[derive(Clone, Copy, Debug)]
pub struct ParseOptions {
    /// Flavor used by `factorize` and `hecke-class` cases that do not name one.
    pub flavor: Flavor,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions { flavor: Flavor::Pgl2 }
    }
}

struct Field<'a> {
    value: &'a str,
    column: usize,
}

struct Record<'a> {
    line: usize,
    fields: BTreeMap<&'a str, Field<'a>>,
    end_column: usize,
}

impl<'a> Record<'a> {
    fn err(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column, message: message.into() }
    }

    fn take<T>(
        &mut self,
        key: &str,
        default: impl FnOnce() -> T,
        parse: impl FnOnce(&str) -> Result<T, String>,
    ) -> Result<T, ParseError> {
        match self.fields.remove(key) {
            None => Ok(default()),
            Some(f) => parse(f.value).map_err(|m| ParseError {
                line: self.line,
                column: f.column + key.len() + 1,
                message: format!("{key}: {m}"),
            }),
        }
    }

    fn required<T>(&mut self, key: &str, parse: impl FnOnce(&str) -> Result<T, String>) -> Result<T, ParseError> {
        if !self.fields.contains_key(key) {
            return Err(self.err(self.end_column, format!("missing required key `{key}`")));
        }
        self.take(key, || unreachable!(), parse)
    }

    fn column_of(&self, key: &str) -> usize {
        self.fields.get(key).map(|f| f.column).unwrap_or(self.end_column)
    }
}

/// Parses a whole case file.
pub fn parse_cases(text: &str, options: ParseOptions) -> Result<Vec<CaseSpec>, ParseError> {
    let mut out: Vec<CaseSpec> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let case = parse_line(body, line, options)?;
        if let Some(prev) = out.iter().find(|c| c.id == case.id) {
            return Err(ParseError {
                line,
                column: 1,
                message: format!("case id `{}` already used on line {}", case.id, prev.line),
            });
        }
        out.push(case);
    }
    Ok(out)
}

/// Parses one record; `line` is used for locations and the default id.
pub fn parse_line(body: &str, line: usize, options: ParseOptions) -> Result<CaseSpec, ParseError> {
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, ch) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                tokens.push((&body[s..i], body[..s].chars().count() + 1));
                start = None;
            }
            _ => {}
        }
    }
    let end_column = body.trim_end().chars().count() + 1;
    let Some(&(kind_text, kind_col)) = tokens.first() else {
        return Err(ParseError { line, column: 1, message: "empty case record".into() });
    };
    let kind: Kind = kind_text.parse().map_err(|m| ParseError { line, column: kind_col, message: m })?;
    let mut record = Record { line, fields: BTreeMap::new(), end_column };
    let mut id = None;
    let mut expect = Expect::Verified;
    for &(tok, column) in &tokens[1..] {
        let Some((key, value)) = tok.split_once('=') else {
            return Err(record.err(column, format!("expected key=value, found `{tok}`")));
        };
        if value.is_empty() {
            return Err(record.err(column, format!("key `{key}` has an empty value")));
        }
        match key {
            "id" => {
                if id.replace(value.to_string()).is_some() {
                    return Err(record.err(column, "duplicate key `id`"));
                }
            }
            "expect" => {
                expect = match value {
                    "verified" => Expect::Verified,
                    "failed" => Expect::Failed,
                    _ => return Err(record.err(column + 7, "expect must be `verified` or `failed`")),
                }
            }
            _ if kind.keys().contains(&key) => {
                if record.fields.insert(key, Field { value, column }).is_some() {
                    return Err(record.err(column, format!("duplicate key `{key}`")));
                }
            }
            _ => {
                return Err(record.err(
                    column,
                    format!("unknown key `{key}` for {} (allowed: {})", kind.name(), kind.keys().join(", ")),
                ))
            }
        }
    }
    let params = parse_params(kind, &mut record, options)?;
    Ok(CaseSpec {
        id: id.unwrap_or_else(|| format!("{}@{}", kind.name(), line)),
        line,
        kind,
        expect,
        params,
        source: tokens.iter().map(|t| t.0).collect::<Vec<_>>().join(" "),
    })
}

fn parse_params(kind: Kind, r: &mut Record, options: ParseOptions) -> Result<CaseParams, ParseError> {
    Ok(match kind {
        Kind::Virasoro => {
            let depth = r.take("depth", || 4, |s| bounded_int(s, 0, 6))?;
            let m = r.take("m", || (-2..=2).collect(), int_list)?;
            let n = r.take("n", || (-2..=2).collect(), int_list)?;
            CaseParams::Virasoro { depth, m, n }
        }
        Kind::ConjugationNilpotent => {
            let a = r.take("a", || vec![int(1)], scalar_list)?;
            let j = r.take("j", || vec![1], |s| {
                let js = int_list(s)?;
                match js.iter().find(|&&j| j < 1) {
                    Some(j) => Err(format!("exp(a x t^j) needs j >= 1, got {j}")),
                    None => Ok(js),
                }
            })?;
            let n = r.take("n", || (-1..=1).collect(), int_list)?;
            let depth = r.take("depth", || 3, |s| bounded_int(s, 0, 5))?;
            let positive = r.take("root", || true, |s| match s {
                "e" => Ok(true),
                "f" => Ok(false),
                _ => Err("root must be `e` or `f`".into()),
            })?;
            CaseParams::ConjugationNilpotent { a, j, n, depth, positive }
        }
        Kind::ConjugationCoweight => {
            let p = r.take("p", || vec![1], int_list)?;
            let n = r.take("n", || (-2..=2).collect(), int_list)?;
            let depth = r.take("depth", || 3, |s| bounded_int(s, 0, 5))?;
            CaseParams::ConjugationCoweight { p, n, depth }
        }
        Kind::Minuscule => {
            let p = r.take("p", || 1, |s| {
                let p = parse_int(s)?;
                if p == 1 {
                    Ok(p)
                } else {
                    Err(format!("alpha(lambda) = {p} is not minuscule; the only minuscule pairing is 1"))
                }
            })?;
            let depth = r.take("depth", || 3, |s| bounded_int(s, 0, 4))?;
            CaseParams::Minuscule { p, depth }
        }
        Kind::Factorize => {
            let a = r.take("a", || vec![int(1)], |s| {
                let a = scalar_list(s)?;
                if a.iter().any(|x| x == &int(0)) {
                    Err("the factorization divides by a; a = 0 is not allowed".into())
                } else {
                    Ok(a)
                }
            })?;
            let mu = r.take("mu", || vec![0], int_list)?;
            let lambda = r.take("lambda", || vec![1], int_list)?;
            let (j_choice, j) = r.take("j", || (JChoice::All, vec![]), |s| {
                if s == "all" {
                    Ok((JChoice::All, vec![]))
                } else {
                    Ok((JChoice::Listed, int_list(s)?))
                }
            })?;
            let flavors = r.take("flavor", || vec![options.flavor], flavor_list)?;
            CaseParams::Factorize { a, mu, lambda, j_choice, j, flavors }
        }
        Kind::HeckeClass => parse_hecke_class(r, options)?,
        Kind::WardTransport | Kind::KzTransport => {
            let n = r.take("n", || 1, |s| bounded_int(s, 1, 4))? as usize;
            let weights = r.take("chi", || vec![Param::Symbolic; n], |s| weight_list(s, n))?;
            let level = r.take("k", || Param::Symbolic, level_param)?;
            let mutation = r.take("mutation", || Mutation::None, |s| parse_mutation(s, n))?;
            let params = WeightParams { weights, level };
            if kind == Kind::WardTransport {
                CaseParams::WardTransport { params, mutation }
            } else {
                let points = r.take("i", || (0..n).collect(), |s| {
                    if s == "all" {
                        return Ok((0..n).collect());
                    }
                    let is = int_list(s)?;
                    is.iter()
                        .map(|&i| {
                            if i >= 1 && i as usize <= n {
                                Ok(i as usize - 1)
                            } else {
                                Err(format!("KZ point {i} out of range 1..={n}"))
                            }
                        })
                        .collect()
                })?;
                CaseParams::KzTransport { params, points, mutation }
            }
        }
        Kind::TwoPoint => {
            let chi = r.take("chi", || vec![Param::Value(hecke_core::exact_algebra::ratio(1, 2))], |s| {
                s.split(',').map(|x| weight_item(x, 0)).collect()
            })?;
            let k = r.take("k", || vec![int(1)], |s| {
                let ks = scalar_list(s)?;
                if ks.contains(&int(-2)) {
                    Err("k = -2 is the critical level".into())
                } else {
                    Ok(ks)
                }
            })?;
            CaseParams::TwoPoint { chi, k }
        }
    })
}

fn parse_hecke_class(r: &mut Record, options: ParseOptions) -> Result<CaseParams, ParseError> {
    let datum_col = r.column_of("type");
    let datum_name = r.take("type", || "A1".to_string(), |s| Ok(s.to_string()))?;
    let datum = datum_from_name(&datum_name).map_err(|m| r.err(datum_col, m))?;
    let rank = datum.rank();
    let vector = |s: &str| -> Result<Vec<i64>, String> {
        let v: Vec<i64> = s.split(',').map(parse_int).collect::<Result<_, _>>()?;
        if v.len() == rank {
            Ok(v)
        } else {
            Err(format!("expected {rank} coordinates for type {datum_name}, got {}", v.len()))
        }
    };
    let mu_col = r.column_of("mu");
    let mu = r.required("mu", vector)?;
    let lambda_col = r.column_of("lambda");
    let lambda = r.required("lambda", vector)?;
    let alpha_col = r.column_of("alpha");
    let alpha = r.take("alpha", || {
        let mut a = vec![0; rank];
        a[0] = 1;
        a
    }, vector)?;
    let j_col = r.column_of("j");
    let j = r.take("j", || 0, parse_int)?;
    let flavor = r.take("flavor", || options.flavor, |s| match flavor_list(s)?.as_slice() {
        [f] => Ok(*f),
        _ => Err("hecke-class takes a single flavor".into()),
    })?;
    let nu = r.take("nu", || None, |s| vector(s).map(Some))?;
    let mu_w = Coweight::from_ints(&datum, &mu, flavor).map_err(|e| r.err(mu_col, e.to_string()))?;
    let lambda_w = Coweight::from_ints(&datum, &lambda, flavor).map_err(|e| r.err(lambda_col, e.to_string()))?;
    if !mu_w.is_dominant() {
        return Err(r.err(mu_col, "mu must be dominant"));
    }
    if !lambda_w.is_dominant() {
        return Err(r.err(lambda_col, "lambda must be dominant"));
    }
    if !datum.positive_roots().iter().any(|x| x == &alpha) {
        return Err(r.err(alpha_col, format!("{alpha:?} is not a positive root of {}", datum.name())));
    }
    let al = lambda_w.pairing(&alpha);
    if j < 0 || int(j) >= al {
        return Err(r.err(j_col, format!("need 0 <= j < alpha(lambda) = {}", scalar_text(&al))));
    }
    Ok(CaseParams::HeckeClass { datum: datum_name, mu, lambda, alpha, j, flavor, nu })
}

/// Root datum from a name such as `A2` or `G2`.
pub fn datum_from_name(s: &str) -> Result<std::sync::Arc<RootDatum>, String> {
    let mut chars = s.chars();
    let letter = chars.next().ok_or("empty root datum name")?;
    let rank: usize = chars.as_str().parse().map_err(|_| format!("bad root datum name `{s}`"))?;
    RootDatum::of_type(letter, rank).map_err(|e| e.to_string())
}

fn parse_int(s: &str) -> Result<i64, String> {
    s.parse().map_err(|_| format!("`{s}` is not an integer"))
}

fn bounded_int(s: &str, lo: i64, hi: i64) -> Result<i64, String> {
    let v = parse_int(s)?;
    if (lo..=hi).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside {lo}..={hi}"))
    }
}

/// Comma-separated integers and inclusive ranges `a..b`.
pub fn int_list(s: &str) -> Result<Vec<i64>, String> {
    let mut out = Vec::new();
    for item in s.split(',') {
        match item.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (parse_int(a)?, parse_int(b)?);
                if a > b {
                    return Err(format!("empty range {a}..{b}"));
                }
                if b - a > 1000 {
                    return Err(format!("range {a}..{b} is too long"));
                }
                out.extend(a..=b);
            }
            None => out.push(parse_int(item)?),
        }
    }
    Ok(out)
}

fn parse_scalar(s: &str) -> Result<Scalar, String> {
    let v: Scalar = s.parse().map_err(|_| format!("`{s}` is not a rational number"))?;
    Ok(v)
}

fn scalar_list(s: &str) -> Result<Vec<Scalar>, String> {
    s.split(',').map(parse_scalar).collect()
}

fn flavor_list(s: &str) -> Result<Vec<Flavor>, String> {
    match s {
        "sl2" => Ok(vec![Flavor::Sl2]),
        "pgl2" => Ok(vec![Flavor::Pgl2]),
        "both" => Ok(vec![Flavor::Sl2, Flavor::Pgl2]),
        _ => Err("flavor must be `sl2`, `pgl2` or `both`".into()),
    }
}

fn weight_item(s: &str, index: usize) -> Result<Param, String> {
    if s == "sym" {
        return Ok(Param::Symbolic);
    }
    if let Some(j) = s.strip_prefix('=') {
        let j = parse_int(j)?;
        if j < 1 || j as usize > index {
            return Err(format!("weight {} can only refer to an earlier point, got ={j}", index + 1));
        }
        return Ok(Param::SameAs(j as usize - 1));
    }
    parse_scalar(s).map(Param::Value)
}

fn weight_list(s: &str, n: usize) -> Result<Vec<Param>, String> {
    if s == "sym" {
        return Ok(vec![Param::Symbolic; n]);
    }
    let items: Vec<&str> = s.split(',').collect();
    if items.len() != n {
        return Err(format!("expected {n} weights, got {}", items.len()));
    }
    items.iter().enumerate().map(|(i, x)| weight_item(x, i)).collect()
}

fn level_param(s: &str) -> Result<Param, String> {
    if s == "sym" {
        return Ok(Param::Symbolic);
    }
    let k = parse_scalar(s)?;
    if k == int(-2) {
        return Err("k = -2 is the critical level".into());
    }
    Ok(Param::Value(k))
}

fn parse_mutation(s: &str, n: usize) -> Result<Mutation, String> {
    if s == "none" {
        return Ok(Mutation::None);
    }
    if s == "extra-weight" {
        return Ok(Mutation::ExtraWeight);
    }
    let (name, point) = s.split_once(':').ok_or_else(|| format!("unknown mutation `{s}`"))?;
    let i = parse_int(point)?;
    if i < 1 || i as usize > n {
        return Err(format!("mutation point {i} out of range 1..={n}"));
    }
    let i = i as usize - 1;
    match name {
        "xi-sign" => Ok(Mutation::XiSign(i)),
        "exponent-shift" => Ok(Mutation::ExponentShift(i)),
        "x-exponent-sign" => Ok(Mutation::PositionExponentSign(i)),
        "t-exponent-sign" => Ok(Mutation::TimeExponentSign(i)),
        _ => Err(format!("unknown mutation `{name}`")),
    }
}
