//! Structure-constant file format, parser/serializer, and plain-text
//! reports.
//!
//! ```text
//! # comment
//! lsa cayley2
//! dim 2
//! prod 1 1 : 1*e2
//! prod 2 1 : 1/2*e1
//! ```

use crate::lsa_core::Algebra;
use crate::qlinalg::{rat_to_string, Rat};
use num::{BigInt, Zero};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FileError {
    #[error("SYNTAX error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("INDEX_OUT_OF_RANGE at line {line}: index {index} with dim {dim}")]
    IndexOutOfRange { line: usize, index: usize, dim: usize },
    #[error("DUPLICATE_PRODUCT at line {line}: prod {i} {j} already defined")]
    DuplicateProduct { line: usize, i: usize, j: usize },
    #[error("ZERO_DENOMINATOR at line {line}")]
    ZeroDenominator { line: usize },
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> FileError {
    FileError::Syntax { line, col, msg: msg.into() }
}

struct LineScanner<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> LineScanner<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        Self { text, pos: 0, line }
    }

    fn col(&self) -> usize {
        self.pos + 1
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with([' ', '\t']) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), FileError> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(syntax(self.line, self.col(), format!("expected '{c}'")))
        }
    }

    fn integer(&mut self) -> Result<BigInt, FileError> {
        let start = self.pos;
        if self.peek() == Some('-') {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits {
            return Err(syntax(self.line, self.col(), "expected a number"));
        }
        Ok(self.text[start..self.pos].parse().unwrap())
    }

    fn index(&mut self) -> Result<usize, FileError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(syntax(self.line, self.col(), "expected an index"));
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| syntax(self.line, self.col(), "index too large"))
    }

    fn rational(&mut self) -> Result<Rat, FileError> {
        let numer = self.integer()?;
        if self.peek() == Some('/') {
            self.pos += 1;
            let denom = self.integer()?;
            if denom.is_zero() {
                return Err(FileError::ZeroDenominator { line: self.line });
            }
            Ok(Rat::new(numer, denom))
        } else {
            Ok(Rat::from_integer(numer))
        }
    }

    fn word(&mut self) -> Result<&'a str, FileError> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        if self.pos == start {
            return Err(syntax(self.line, self.col(), "expected an identifier"));
        }
        Ok(&self.text[start..self.pos])
    }

    fn at_end(&mut self) -> Result<(), FileError> {
        self.skip_ws();
        if self.pos == self.text.len() {
            Ok(())
        } else {
            Err(syntax(self.line, self.col(), "trailing input"))
        }
    }
}

/// Parses the canonical file format. The returned algebra is not yet
/// validated.
pub fn parse_algebra_file(text: &str) -> Result<Algebra, FileError> {
    let mut name: Option<String> = None;
    let mut dim: Option<usize> = None;
    let mut products: Vec<(usize, usize, usize, Vec<(Rat, usize)>)> = Vec::new();
    let mut seen: std::collections::BTreeSet<(usize, usize)> = Default::default();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let mut sc = LineScanner::new(content, lineno);
        sc.skip_ws();
        let keyword = sc.word()?;
        match keyword {
            "lsa" => {
                if name.is_some() {
                    return Err(syntax(lineno, sc.col(), "duplicate 'lsa' header"));
                }
                sc.skip_ws();
                name = Some(sc.word()?.to_string());
                sc.at_end()?;
            }
            "dim" => {
                if dim.is_some() {
                    return Err(syntax(lineno, sc.col(), "duplicate 'dim' header"));
                }
                sc.skip_ws();
                dim = Some(sc.index()?);
                sc.at_end()?;
            }
            "prod" => {
                sc.skip_ws();
                let i = sc.index()?;
                sc.skip_ws();
                let j = sc.index()?;
                sc.skip_ws();
                sc.expect(':')?;
                let mut terms = Vec::new();
                loop {
                    sc.skip_ws();
                    let c = sc.rational()?;
                    sc.expect('*')?;
                    sc.expect('e')?;
                    let k = sc.index()?;
                    terms.push((c, k));
                    sc.skip_ws();
                    if sc.peek() == Some('+') {
                        sc.pos += 1;
                    } else {
                        break;
                    }
                }
                sc.at_end()?;
                if !seen.insert((i, j)) {
                    return Err(FileError::DuplicateProduct { line: lineno, i, j });
                }
                products.push((lineno, i, j, terms));
            }
            other => {
                return Err(syntax(lineno, 1, format!("unknown keyword '{other}'")));
            }
        }
    }
    let name = name.unwrap_or_else(|| "anonymous".to_string());
    let dim = dim.ok_or_else(|| syntax(text.lines().count() + 1, 1, "missing 'dim' header"))?;
    let mut a = Algebra::zero_algebra(name, dim);
    for (lineno, i, j, terms) in products {
        let check = |index: usize| -> Result<usize, FileError> {
            if index == 0 || index > dim {
                Err(FileError::IndexOutOfRange { line: lineno, index, dim })
            } else {
                Ok(index - 1)
            }
        };
        let i = check(i)?;
        let j = check(j)?;
        for (c, k) in terms {
            let k = check(k)?;
            a.set_c(i, j, k, c);
        }
    }
    Ok(a)
}

/// Canonical text form: products in (i, j) order, terms by k, zero
/// products omitted.
pub fn serialize_algebra(a: &Algebra) -> String {
    let mut out = String::new();
    writeln!(out, "lsa {}", a.name).unwrap();
    writeln!(out, "dim {}", a.dim).unwrap();
    for i in 0..a.dim {
        for j in 0..a.dim {
            let terms: Vec<String> = (0..a.dim)
                .filter(|&k| !a.c(i, j, k).is_zero())
                .map(|k| format!("{}*e{}", rat_to_string(a.c(i, j, k)), k + 1))
                .collect();
            if !terms.is_empty() {
                writeln!(out, "prod {} {} : {}", i + 1, j + 1, terms.join(" + ")).unwrap();
            }
        }
    }
    out
}

/// Ordered key-value lines with deterministic rendering.
#[derive(Default, Clone, Debug)]
pub struct Report {
    lines: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.lines.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.lines {
            writeln!(out, "{k} = {v}").unwrap();
        }
        out
    }
}

/// `1/2,0,-3` -> vector of rationals.
pub fn parse_vector(s: &str, expect_len: Option<usize>) -> Result<Vec<Rat>, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let mut sc = LineScanner::new(part.trim(), 1);
        let r = sc.rational().map_err(|e| e.to_string())?;
        sc.at_end().map_err(|e| e.to_string())?;
        out.push(r);
    }
    if let Some(n) = expect_len {
        if out.len() != n {
            return Err(format!("expected {n} entries, got {}", out.len()));
        }
    }
    Ok(out)
}

/// `1,0;0,1` -> square matrix, rows separated by ';'.
pub fn parse_matrix(s: &str) -> Result<crate::qlinalg::QMatrix, String> {
    let rows: Vec<Vec<Rat>> = s
        .split(';')
        .map(|row| parse_vector(row, None))
        .collect::<Result<_, _>>()?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err("matrix must be square".to_string());
    }
    Ok(crate::qlinalg::QMatrix::from_rows(rows))
}

mod command {
    use super::*;
    use crate::builtins;
    use crate::koszul;
    use crate::lsa_core::{
        char_poly_lsa, classify, trace_form, validate_lsa, Triangularization,
    };
    use crate::ma_verify;
    use crate::polyring::{parse_poly, MPoly};
    use crate::qlinalg::QMatrix;
    use clap::{Parser, Subcommand};
    use std::io::Write;
    use std::path::PathBuf;

    #[derive(Parser)]
    #[command(name = "lsakit", about = "exact-arithmetic toolkit for left-symmetric algebras", disable_help_subcommand = true)]
    struct Cli {
        /// refuse input algebras above this dimension
        #[arg(long, global = true, default_value_t = 10)]
        max_dim: usize,
        #[command(subcommand)]
        cmd: Cmd,
    }

    #[derive(Subcommand)]
    enum Cmd {
        /// Validate the left-symmetry axiom for a structure-constant file
        Check { file: PathBuf },
        /// Full nilpotence/solvability classification
        Classify {
            file: PathBuf,
            /// cross-check polynomial nilpotence against matrix identities
            #[arg(long)]
            thorough: bool,
        },
        /// Characteristic polynomial det(I + R(x))
        Charpoly { file: PathBuf },
        /// Trace form matrix tau(e_i, e_j)
        Traceform { file: PathBuf },
        /// Right principal idempotent and its diagnostics
        Idempotent { file: PathBuf },
        /// Everything: classification, Koszul data, weights, Monge-Ampere
        Report { file: PathBuf },
        /// Monge-Ampere constant of a file or free-standing polynomial
        MaVerify {
            file: Option<PathBuf>,
            #[arg(long)]
            poly: Option<String>,
        },
        /// Adjoin a compatible derivation to a base algebra
        GraphExtend {
            basefile: PathBuf,
            /// metric rows, e.g. "1,0;0,1"
            #[arg(long)]
            metric: String,
            /// derivation rows, e.g. "1/2,0;0,1/2"
            #[arg(long)]
            derivation: String,
        },
        /// Emit a builtin algebra in the canonical file format
        Generate {
            /// cayley N | fili N | parab N | sixdim | negeig sigma Q | negeig jordan Q
            args: Vec<String>,
        },
        /// Integrate the right-invariant flow and check relative invariance
        Flow {
            file: PathBuf,
            #[arg(long)]
            a: String,
            #[arg(long)]
            x0: String,
            #[arg(long)]
            t: f64,
            #[arg(long, default_value_t = 1e-9)]
            tol: f64,
        },
    }

    pub fn run_command(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
        let cli = match Cli::try_parse_from(argv) {
            Ok(c) => c,
            Err(e) => {
                // help/version are successful exits
                if e.use_stderr() {
                    let _ = write!(err, "{e}");
                    return 2;
                }
                let _ = write!(out, "{e}");
                return 0;
            }
        };
        match dispatch(&cli, out) {
            Ok(report) => {
                let _ = write!(out, "{}", report.render());
                0
            }
            Err((code, msg)) => {
                let _ = writeln!(err, "error: {msg}");
                code
            }
        }
    }

    type Failure = (i32, String);

    fn load(path: &PathBuf, max_dim: usize) -> Result<Algebra, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| (2, format!("{}: {e}", path.display())))?;
        let a = parse_algebra_file(&text).map_err(|e| (1, e.to_string()))?;
        if a.dim > max_dim {
            return Err((1, format!("dim {} exceeds --max-dim {}", a.dim, max_dim)));
        }
        validate_lsa(a).map_err(|v| (1, format!("not an LSA: {v}")))
    }

    fn vec_string(v: &[Rat]) -> String {
        v.iter().map(rat_to_string).collect::<Vec<_>>().join(",")
    }

    fn matrix_lines(r: &mut Report, key: &str, m: &QMatrix) {
        for i in 0..m.rows {
            r.push(format!("{key}[{}]", i + 1), vec_string(&m.row(i)));
        }
    }

    fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<Report, Failure> {
        let mut r = Report::new();
        match &cli.cmd {
            Cmd::Check { file } => {
                let a = load(file, cli.max_dim)?;
                r.push("lsa", &a.name);
                r.push("dim", a.dim);
                r.push("valid", true);
            }
            Cmd::Classify { file, thorough } => {
                let a = load(file, cli.max_dim)?;
                classify_into(&a, *thorough, &mut r);
            }
            Cmd::Charpoly { file } => {
                let a = load(file, cli.max_dim)?;
                r.push("P", char_poly_lsa(&a).render());
            }
            Cmd::Traceform { file } => {
                let a = load(file, cli.max_dim)?;
                let tf = trace_form(&a);
                matrix_lines(&mut r, "tau", &tf.matrix);
                r.push("nondegenerate", tf.nondegenerate);
            }
            Cmd::Idempotent { file } => {
                let a = load(file, cli.max_dim)?;
                idempotent_into(&a, &mut r);
            }
            Cmd::Report { file } => {
                let a = load(file, cli.max_dim)?;
                r.push("lsa", &a.name);
                r.push("dim", a.dim);
                classify_into(&a, false, &mut r);
                let p = char_poly_lsa(&a);
                r.push("P", p.render());
                idempotent_into(&a, &mut r);
                ma_into(&p, Some(&a), &mut r);
                weights_into(&a, &p, &mut r);
            }
            Cmd::MaVerify { file, poly } => match (file, poly) {
                (Some(f), None) => {
                    let a = load(f, cli.max_dim)?;
                    ma_into(&char_poly_lsa(&a), Some(&a), &mut r);
                }
                (None, Some(expr)) => {
                    let p = parse_free_poly(expr).map_err(|m| (2, m))?;
                    ma_into(&p, None, &mut r);
                }
                _ => return Err((2, "supply exactly one of FILE or --poly".into())),
            },
            Cmd::GraphExtend { basefile, metric, derivation } => {
                let base = load(basefile, cli.max_dim)?;
                let h = parse_matrix(metric).map_err(|m| (2, m))?;
                let d = parse_matrix(derivation).map_err(|m| (2, m))?;
                if h.rows != base.dim || d.rows != base.dim {
                    return Err((2, "metric/derivation size must match base dim".into()));
                }
                let ge = koszul::graph_extend(&base, &h, &d).map_err(|e| (1, e.to_string()))?;
                let _ = write!(out, "{}", serialize_algebra(&ge.algebra));
                r.push("base_complete", ge.base_complete);
            }
            Cmd::Generate { args } => {
                let a = generate(args, cli.max_dim)?;
                let _ = write!(out, "{}", serialize_algebra(&a));
            }
            Cmd::Flow { file, a, x0, t, tol } => {
                let alg = load(file, cli.max_dim)?;
                let av = parse_vector(a, Some(alg.dim)).map_err(|m| (2, m))?;
                let xv = parse_vector(x0, Some(alg.dim)).map_err(|m| (2, m))?;
                let s = ma_verify::flow_sample(&alg, &av, &xv, *t);
                r.push(
                    "endpoint",
                    s.endpoint.iter().map(|x| format!("{x:.12}")).collect::<Vec<_>>().join(","),
                );
                r.push("character_residual", format!("{:.3e}", s.character_residual));
                let ok = s.character_residual <= *tol;
                r.push("within_tol", ok);
                if !ok {
                    let _ = write!(out, "{}", r.render());
                    return Err((1, "character residual exceeds tolerance".into()));
                }
            }
        }
        Ok(r)
    }

    fn classify_into(a: &Algebra, thorough: bool, r: &mut Report) {
        let c = classify(a, thorough);
        r.push("is_lsa", c.is_lsa);
        r.push("complete", c.complete);
        r.push("right_nil", c.right_nil);
        r.push("left_nil", c.left_nil);
        r.push("right_nilpotent", c.right_nilpotent);
        r.push("nilpotent", c.nilpotent);
        r.push("lie_solvable", c.lie_solvable);
        r.push("lie_nilpotent", c.lie_nilpotent);
        r.push("perfect", c.perfect);
        r.push("trace_form_nondegenerate", c.trace_form_nondegenerate);
        r.push("derived_codim", c.derived_codim);
        r.push(
            "ker_trr_unimodular",
            c.ker_trr_unimodular.map_or("UNDEFINED".into(), |b| b.to_string()),
        );
        r.push(
            "triangularizable",
            match c.triangularizable {
                Triangularization::Basis(_) => "true".to_string(),
                Triangularization::NotSolvable => "NOT_SOLVABLE".to_string(),
                Triangularization::IrrationalEigenvalues => "IRRATIONAL_EIGENVALUES".to_string(),
            },
        );
        r.push("condition_2trL_eq_n1trR", c.condition_2trl_eq_n1trr);
        r.push("trL", c.tr_l.render());
        r.push("trR", c.tr_r.render());
    }

    fn idempotent_into(a: &Algebra, r: &mut Report) {
        match koszul::principal_idempotent(a) {
            Err(e) => r.push("principal_idempotent", e),
            Ok(k) => {
                r.push("r", vec_string(&k.u));
                r.push("rank", rat_to_string(&k.rank));
                let rep = koszul::idempotent_report(a, &k);
                r.push("structural_identities", rep.all_structural_identities_hold());
                r.push("recognizer", rep.recognizer);
                r.push("Lu_invertible", rep.lu_invertible);
                if rep.recognizer && rep.lu_invertible {
                    r.push("simple", true);
                }
            }
        }
    }

    fn ma_into(p: &MPoly, alg: Option<&Algebra>, r: &mut Report) {
        let rep = ma_verify::ma_constant(p, alg);
        match &rep.axis {
            Some((v, lam)) => {
                r.push("axis", vec_string(v));
                r.push("increment", rat_to_string(lam));
            }
            None => r.push("axis", "NONE"),
        }
        match &rep.kappa {
            Some(k) => r.push("kappa", rat_to_string(k)),
            None => r.push("kappa", "NOT_CONSTANT"),
        }
        if let Some(s) = rep.sign_of_kappa {
            r.push("sign_of_kappa", s);
        }
        if let Some(b) = rep.trace_condition_2l_n1r {
            r.push("condition_2trL_eq_n1trR", b);
        }
        if let Some(b) = rep.euler_identity {
            r.push("euler_identity", b);
        }
    }

    fn weights_into(a: &Algebra, p: &MPoly, r: &mut Report) {
        let Ok(k) = koszul::principal_idempotent(a) else { return };
        let Ok(ind) = koszul::induced_algebra(a, &k) else { return };
        let wd = koszul::weight_decomposition(&ind.base, &ind.metric, &ind.derivation);
        let ws: Vec<String> = wd
            .weights
            .iter()
            .map(|(w, m)| format!("{}:{m}", rat_to_string(w)))
            .collect();
        r.push("weights", ws.join(", "));
        r.push("weights_split", wd.splits);
        r.push(
            "weight_lemma",
            wd.symmetry_ok && wd.grading_ok && wd.pairing_ok,
        );
        if wd.splits {
            let rels = koszul::arithmetic_relations(&wd.weights, p);
            for (d, witness) in rels {
                let parts: Vec<String> = witness
                    .iter()
                    .zip(&wd.weights)
                    .filter(|(i, _)| **i > 0)
                    .map(|(i, (w, _))| format!("{i}*{}", rat_to_string(w)))
                    .collect();
                r.push(format!("relation_deg{d}"), parts.join(" + "));
            }
        }
    }

    fn generate(args: &[String], max_dim: usize) -> Result<Algebra, Failure> {
        let usage = || {
            (2, "usage: generate (cayley N | fili N | parab N | sixdim | negeig sigma Q | negeig jordan Q)".to_string())
        };
        let strs: Vec<&str> = args.iter().map(String::as_str).collect();
        let dim_arg = |s: &str| -> Result<usize, Failure> {
            let n: usize = s.parse().map_err(|_| usage())?;
            if n == 0 || n > max_dim {
                return Err((2, format!("dimension must be in 1..={max_dim}")));
            }
            Ok(n)
        };
        let rat_arg = |s: &str| -> Result<Rat, Failure> {
            parse_vector(s, Some(1)).map(|v| v[0].clone()).map_err(|m| (2, m))
        };
        match strs.as_slice() {
            ["cayley", n] => builtins::cayley(dim_arg(n)?).map_err(|e| (1, e.to_string())),
            ["fili", n] => builtins::fili(dim_arg(n)?).map_err(|e| (1, e.to_string())),
            ["parab", n] => {
                let n = dim_arg(n)?;
                if n < 2 {
                    return Err((2, "parab needs dimension >= 2".into()));
                }
                builtins::parab(&builtins::euclidean_metric(n), n)
                    .map_err(|e| (1, e.to_string()))
            }
            ["sixdim"] => Ok(builtins::six_dim()),
            ["negeig", "sigma", q] => Ok(builtins::sigma_family(&rat_arg(q)?)),
            ["negeig", "jordan", q] => Ok(builtins::jordan_family(&rat_arg(q)?)),
            _ => Err(usage()),
        }
    }

    /// Number of variables inferred from the highest x<k> mentioned.
    fn parse_free_poly(expr: &str) -> Result<MPoly, String> {
        let mut nvars = 0usize;
        let bytes = expr.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i] == b'x' {
                let mut j = i + 1;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j > i + 1 {
                    let k: usize = expr[i + 1..j].parse().map_err(|_| "variable index too large".to_string())?;
                    nvars = nvars.max(k);
                }
                i = j;
            } else {
                i += 1;
            }
        }
        if nvars == 0 {
            return Err("no variables found in polynomial".to_string());
        }
        parse_poly(expr, nvars).map_err(|e| e.to_string())
    }

}

pub use command::run_command;
