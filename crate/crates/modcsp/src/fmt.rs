//! Line-oriented text formats: instances, polynomials, CNF input.
//!
//! The instance format is DIMACS-flavored so existing tooling habits
//! carry over: `c` comments, a `p` header, one record per line,
//! variables 1-indexed in files and 0-indexed in memory. Weights travel
//! as explicit (g(0), g(1)) pairs on the `g` lines, one line per group
//! component; `s` lines override the default allowed set. Serializers
//! emit a canonical form (ASCII, LF, single spaces, no trailing
//! whitespace) and parse of that form reproduces the instance exactly.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::group::{GroupSpec, ModularSideConstraint};
use crate::instance::{HornClause, HornInstance, Lin2Instance, Lit, TwoSatInstance};
use crate::poly::IntPoly;
use crate::reduce::ThreeSatInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    Horn,
    Lin2,
    TwoSat,
}

impl ProblemKind {
    pub fn tag(self) -> &'static str {
        match self {
            ProblemKind::Horn => "horn",
            ProblemKind::Lin2 => "lin2",
            ProblemKind::TwoSat => "2sat",
        }
    }

    fn from_tag(t: &str) -> Option<ProblemKind> {
        match t {
            "horn" => Some(ProblemKind::Horn),
            "lin2" => Some(ProblemKind::Lin2),
            "2sat" => Some(ProblemKind::TwoSat),
            _ => None,
        }
    }
}

/// Any of the three instance kinds, as read from a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyInstance {
    Horn(HornInstance),
    Lin2(Lin2Instance),
    TwoSat(TwoSatInstance),
}

impl AnyInstance {
    pub fn kind(&self) -> ProblemKind {
        match self {
            AnyInstance::Horn(_) => ProblemKind::Horn,
            AnyInstance::Lin2(_) => ProblemKind::Lin2,
            AnyInstance::TwoSat(_) => ProblemKind::TwoSat,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            AnyInstance::Horn(i) => i.n,
            AnyInstance::Lin2(i) => i.n,
            AnyInstance::TwoSat(i) => i.n,
        }
    }

    pub fn side(&self) -> &ModularSideConstraint {
        match self {
            AnyInstance::Horn(i) => &i.side,
            AnyInstance::Lin2(i) => &i.side,
            AnyInstance::TwoSat(i) => &i.side,
        }
    }
}

fn perr(line: usize, expected: impl Into<String>) -> Error {
    Error::ParseError {
        line,
        expected: expected.into(),
    }
}

fn serr(line: usize, message: impl Into<String>) -> Error {
    Error::SemanticError {
        line,
        message: message.into(),
    }
}

/// Re-tag a constructor failure with the line it came from; parse and
/// semantic errors pass through untouched.
fn at_line<T>(line: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::ParseError { .. } | Error::SemanticError { .. } => e,
        other => serr(line, other.to_string()),
    })
}

/// Cursor over one whitespace-split line.
struct Rec<'a> {
    no: usize,
    prod: &'static str,
    toks: Vec<&'a str>,
    pos: usize,
}

impl<'a> Rec<'a> {
    fn new(no: usize, prod: &'static str, toks: Vec<&'a str>) -> Self {
        Rec {
            no,
            prod,
            toks,
            pos: 1,
        }
    }

    fn next_tok(&mut self) -> Result<&'a str> {
        let t = self.toks.get(self.pos).ok_or_else(|| perr(self.no, self.prod))?;
        self.pos += 1;
        Ok(t)
    }

    fn next_usize(&mut self) -> Result<usize> {
        self.next_tok()?
            .parse()
            .map_err(|_| perr(self.no, self.prod))
    }

    fn next_u32(&mut self) -> Result<u32> {
        self.next_tok()?
            .parse()
            .map_err(|_| perr(self.no, self.prod))
    }

    fn next_i64(&mut self) -> Result<i64> {
        self.next_tok()?
            .parse()
            .map_err(|_| perr(self.no, self.prod))
    }

    fn next_bit(&mut self) -> Result<bool> {
        match self.next_tok()? {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(perr(self.no, self.prod)),
        }
    }

    /// 1-indexed variable token, returned 0-indexed.
    fn next_var(&mut self, n: usize) -> Result<u32> {
        let v = self.next_usize()?;
        if v < 1 || v > n {
            return Err(serr(
                self.no,
                format!("variable {v} out of range 1..={n}"),
            ));
        }
        Ok((v - 1) as u32)
    }

    fn remaining(&self) -> usize {
        self.toks.len() - self.pos
    }

    fn finish(self) -> Result<()> {
        if self.pos != self.toks.len() {
            return Err(perr(self.no, self.prod));
        }
        Ok(())
    }
}

const P_PROD: &str = "`p modcsp {horn|lin2|2sat} <n> <m>`";
const H_PROD: &str = "`h <head> <k> <b1> ... <bk>`";
const U_PROD: &str = "`u <var> <0|1>`";
const L_PROD: &str = "`l <rhs-bit> <k> <v1> ... <vk>`";
const T_PROD: &str = "`t <lit1> <lit2>`";
const G_PROD: &str = "`g <M> <a> <w1_0> <w1_1> ... <wn_0> <wn_1>`";
const S_PROD: &str = "`s <r1> ... <rk>`";
const RECORD_PROD: &str = "a record line (c/p/h/u/l/t/g/s)";

struct RawGroup {
    modulus: u32,
    target: u32,
    /// (g_j(0), g_j(1)) per variable, residues in this component.
    weights: Vec<(u32, u32)>,
}

/// Parse an instance file. Variables are 1-indexed in the text; indices
/// and residues are range-checked against the header and the `g` lines.
pub fn parse_instance(text: &str) -> Result<AnyInstance> {
    let mut header: Option<(ProblemKind, usize, usize, usize)> = None;
    let mut clauses: Vec<HornClause> = Vec::new();
    let mut units: Vec<(u32, bool)> = Vec::new();
    let mut equations: Vec<(Vec<u32>, bool)> = Vec::new();
    let mut tclauses: Vec<(Lit, Lit)> = Vec::new();
    let mut groups: Vec<RawGroup> = Vec::new();
    let mut tuples: Vec<(usize, Vec<u32>)> = Vec::new();
    let mut body_lines = 0usize;

    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        let Some(&tag) = toks.first() else {
            return Err(perr(no, RECORD_PROD));
        };
        if tag == "c" {
            continue;
        }
        if tag == "p" {
            if header.is_some() {
                return Err(serr(no, "duplicate header"));
            }
            let mut rec = Rec::new(no, P_PROD, toks);
            if rec.next_tok()? != "modcsp" {
                return Err(perr(no, P_PROD));
            }
            let kind = ProblemKind::from_tag(rec.next_tok()?).ok_or_else(|| perr(no, P_PROD))?;
            let n = rec.next_usize()?;
            let m = rec.next_usize()?;
            rec.finish()?;
            if n < 1 {
                return Err(serr(no, "variable count must be at least 1"));
            }
            header = Some((kind, n, m, no));
            continue;
        }
        if !matches!(tag, "h" | "u" | "l" | "t" | "g" | "s") {
            return Err(perr(no, RECORD_PROD));
        }
        let Some((kind, n, _, _)) = header else {
            return Err(serr(no, "record before the `p modcsp` header"));
        };
        match tag {
            "h" if kind == ProblemKind::Horn => {
                let mut rec = Rec::new(no, H_PROD, toks);
                let head = rec.next_var(n)?;
                let k = rec.next_usize()?;
                let mut body = Vec::with_capacity(k);
                for _ in 0..k {
                    body.push(rec.next_var(n)?);
                }
                rec.finish()?;
                clauses.push(at_line(no, HornClause::new(head, body))?);
                body_lines += 1;
            }
            "u" if kind == ProblemKind::Horn => {
                let mut rec = Rec::new(no, U_PROD, toks);
                let var = rec.next_var(n)?;
                let bit = rec.next_bit()?;
                rec.finish()?;
                units.push((var, bit));
            }
            "l" if kind == ProblemKind::Lin2 => {
                let mut rec = Rec::new(no, L_PROD, toks);
                let rhs = rec.next_bit()?;
                let k = rec.next_usize()?;
                let mut vars = Vec::with_capacity(k);
                for _ in 0..k {
                    vars.push(rec.next_var(n)?);
                }
                rec.finish()?;
                let mut sorted = vars.clone();
                sorted.sort_unstable();
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    return Err(serr(no, "equation lists a variable twice"));
                }
                equations.push((vars, rhs));
                body_lines += 1;
            }
            "t" if kind == ProblemKind::TwoSat => {
                let mut rec = Rec::new(no, T_PROD, toks);
                let lit = |rec: &mut Rec| -> Result<Lit> {
                    let v = rec.next_i64()?;
                    if v == 0 {
                        return Err(serr(no, "literal 0 is reserved"));
                    }
                    let var = v.unsigned_abs();
                    if var > n as u64 {
                        return Err(serr(
                            no,
                            format!("variable {var} out of range 1..={n}"),
                        ));
                    }
                    Ok(Lit {
                        var: (var - 1) as u32,
                        neg: v < 0,
                    })
                };
                let a = lit(&mut rec)?;
                let b = lit(&mut rec)?;
                rec.finish()?;
                tclauses.push((a, b));
                body_lines += 1;
            }
            "g" => {
                let mut rec = Rec::new(no, G_PROD, toks);
                let modulus = rec.next_u32()?;
                if modulus < 2 {
                    return Err(serr(no, format!("modulus {modulus} is below 2")));
                }
                let target = rec.next_u32()?;
                if target >= modulus {
                    return Err(serr(
                        no,
                        format!("residue {target} out of range for modulus {modulus}"),
                    ));
                }
                if rec.remaining() != 2 * n {
                    return Err(serr(
                        no,
                        format!(
                            "expected {} weight values for {n} variables, found {}",
                            2 * n,
                            rec.remaining()
                        ),
                    ));
                }
                let mut weights = Vec::with_capacity(n);
                for _ in 0..n {
                    let w0 = rec.next_u32()?;
                    let w1 = rec.next_u32()?;
                    if w0 >= modulus || w1 >= modulus {
                        return Err(serr(
                            no,
                            format!("weight out of range for modulus {modulus}"),
                        ));
                    }
                    weights.push((w0, w1));
                }
                rec.finish()?;
                groups.push(RawGroup {
                    modulus,
                    target,
                    weights,
                });
            }
            "s" => {
                let mut rec = Rec::new(no, S_PROD, toks);
                let mut vals = Vec::with_capacity(rec.remaining());
                while rec.remaining() > 0 {
                    vals.push(rec.next_u32()?);
                }
                tuples.push((no, vals));
            }
            "h" | "u" | "l" | "t" => {
                return Err(serr(
                    no,
                    format!("record `{tag}` not valid in a {} file", kind.tag()),
                ));
            }
            _ => unreachable!("tag membership checked above"),
        }
    }

    let Some((kind, n, m_declared, hline)) = header else {
        return Err(serr(1, "missing `p modcsp` header"));
    };
    if body_lines != m_declared {
        return Err(serr(
            hline,
            format!("header declares {m_declared} clauses, file has {body_lines}"),
        ));
    }
    if groups.is_empty() {
        return Err(serr(hline, "no group component (`g`) line"));
    }
    let group = at_line(
        hline,
        GroupSpec::new(groups.iter().map(|g| g.modulus).collect()),
    )?;
    let mut weights = Vec::with_capacity(n);
    for j in 0..n {
        let w0 = group.elem(groups.iter().map(|g| g.weights[j].0).collect());
        let w1 = group.elem(groups.iter().map(|g| g.weights[j].1).collect());
        weights.push((at_line(hline, w0)?, at_line(hline, w1)?));
    }
    let mut allowed = BTreeSet::new();
    if tuples.is_empty() {
        let defaults = groups.iter().map(|g| g.target).collect();
        allowed.insert(at_line(hline, group.elem(defaults))?);
    } else {
        for (no, vals) in tuples {
            if vals.len() != group.components() {
                return Err(serr(
                    no,
                    format!(
                        "allowed tuple has {} residues, group has {} components",
                        vals.len(),
                        group.components()
                    ),
                ));
            }
            allowed.insert(at_line(no, group.elem(vals))?);
        }
    }
    let side = at_line(hline, ModularSideConstraint::new(group, weights, allowed))?;
    at_line(
        hline,
        match kind {
            ProblemKind::Horn => {
                HornInstance::new(n, clauses, units, side).map(AnyInstance::Horn)
            }
            ProblemKind::Lin2 => {
                Lin2Instance::new(n, equations, side).map(AnyInstance::Lin2)
            }
            ProblemKind::TwoSat => {
                TwoSatInstance::new(n, tclauses, side).map(AnyInstance::TwoSat)
            }
        },
    )
}

fn lit_text(l: Lit) -> String {
    let v = (l.var + 1) as i64;
    (if l.neg { -v } else { v }).to_string()
}

/// Canonical text for an instance: header, clause records, group lines,
/// then `s` lines when the allowed set has more than one tuple (a
/// singleton folds into the per-component defaults).
pub fn serialize_instance(inst: &AnyInstance) -> String {
    let mut out = String::new();
    let n = inst.n();
    let side = inst.side();
    match inst {
        AnyInstance::Horn(h) => {
            let _ = writeln!(out, "p modcsp horn {n} {}", h.clauses.len());
            for c in &h.clauses {
                let _ = write!(out, "h {} {}", c.head + 1, c.body.len());
                for &b in &c.body {
                    let _ = write!(out, " {}", b + 1);
                }
                out.push('\n');
            }
            for &(v, b) in &h.units {
                let _ = writeln!(out, "u {} {}", v + 1, b as u8);
            }
        }
        AnyInstance::Lin2(l) => {
            let _ = writeln!(out, "p modcsp lin2 {n} {}", l.equations.len());
            for (vars, rhs) in &l.equations {
                let _ = write!(out, "l {} {}", *rhs as u8, vars.len());
                for &v in vars {
                    let _ = write!(out, " {}", v + 1);
                }
                out.push('\n');
            }
        }
        AnyInstance::TwoSat(t) => {
            let _ = writeln!(out, "p modcsp 2sat {n} {}", t.clauses.len());
            for &(a, b) in &t.clauses {
                let _ = writeln!(out, "t {} {}", lit_text(a), lit_text(b));
            }
        }
    }
    let first = side.allowed.first().expect("allowed set is non-empty");
    for (c, &m) in side.group.moduli().iter().enumerate() {
        let _ = write!(out, "g {m} {}", first.residues()[c]);
        for (w0, w1) in &side.weights {
            let _ = write!(out, " {} {}", w0.residues()[c], w1.residues()[c]);
        }
        out.push('\n');
    }
    if side.allowed.len() > 1 {
        for a in &side.allowed {
            out.push('s');
            for &r in a.residues() {
                let _ = write!(out, " {r}");
            }
            out.push('\n');
        }
    }
    out
}

const PP_PROD: &str = "`p poly <nvars>`";
const M_PROD: &str = "`m <coeff> <k> <v1> ... <vk>`";

/// Parse a polynomial file: `p poly <nvars>` then one `m` record per
/// monomial with a decimal (possibly signed, arbitrary precision)
/// coefficient and strictly increasing 1-indexed variables.
pub fn parse_poly(text: &str) -> Result<IntPoly> {
    let mut header: Option<(usize, usize)> = None;
    let mut terms: Vec<(Vec<u32>, BigInt)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        let Some(&tag) = toks.first() else {
            return Err(perr(no, "a record line (c/p/m)"));
        };
        match tag {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(serr(no, "duplicate header"));
                }
                let mut rec = Rec::new(no, PP_PROD, toks);
                if rec.next_tok()? != "poly" {
                    return Err(perr(no, PP_PROD));
                }
                let nvars = rec.next_usize()?;
                rec.finish()?;
                header = Some((nvars, no));
            }
            "m" => {
                let Some((nvars, _)) = header else {
                    return Err(serr(no, "record before the `p poly` header"));
                };
                let mut rec = Rec::new(no, M_PROD, toks);
                let coeff =
                    BigInt::from_str(rec.next_tok()?).map_err(|_| perr(no, M_PROD))?;
                let k = rec.next_usize()?;
                let mut vars = Vec::with_capacity(k);
                for _ in 0..k {
                    vars.push(rec.next_var(nvars)?);
                }
                rec.finish()?;
                if vars.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(serr(
                        no,
                        "monomial variables must be strictly increasing",
                    ));
                }
                terms.push((vars, coeff));
            }
            _ => return Err(perr(no, "a record line (c/p/m)")),
        }
    }
    let Some((nvars, hline)) = header else {
        return Err(serr(1, "missing `p poly` header"));
    };
    at_line(hline, IntPoly::from_terms(nvars, terms))
}

pub fn serialize_poly(p: &IntPoly) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p poly {}", p.nvars());
    for (mono, c) in p.terms() {
        let _ = write!(out, "m {c} {}", mono.len());
        for &v in mono {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
    }
    out
}

const CNF_PROD: &str = "`p cnf <nvars> <nclauses>`";
const CLAUSE_PROD: &str = "a clause line of 1 to 3 literals ending in 0";

/// Parse DIMACS-style CNF restricted to one clause per line with at
/// most 3 literals, which is what the gadget reductions consume.
pub fn parse_cnf(text: &str) -> Result<ThreeSatInstance> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut clauses: Vec<Vec<Lit>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        let Some(&tag) = toks.first() else {
            return Err(perr(no, "a comment, header, or clause line"));
        };
        if tag == "c" {
            continue;
        }
        if tag == "p" {
            if header.is_some() {
                return Err(serr(no, "duplicate header"));
            }
            let mut rec = Rec::new(no, CNF_PROD, toks);
            if rec.next_tok()? != "cnf" {
                return Err(perr(no, CNF_PROD));
            }
            let t = rec.next_usize()?;
            let m = rec.next_usize()?;
            rec.finish()?;
            if t < 1 {
                return Err(serr(no, "variable count must be at least 1"));
            }
            header = Some((t, m, no));
            continue;
        }
        let Some((t, _, _)) = header else {
            return Err(serr(no, "clause before the `p cnf` header"));
        };
        let mut lits = Vec::new();
        let mut terminated = false;
        for tok in &toks {
            let v: i64 = tok.parse().map_err(|_| perr(no, CLAUSE_PROD))?;
            if terminated {
                return Err(serr(no, "one clause per line, 0 only at the end"));
            }
            if v == 0 {
                terminated = true;
                continue;
            }
            let var = v.unsigned_abs();
            if var > t as u64 {
                return Err(serr(no, format!("variable {var} out of range 1..={t}")));
            }
            lits.push(Lit {
                var: (var - 1) as u32,
                neg: v < 0,
            });
        }
        if !terminated {
            return Err(perr(no, CLAUSE_PROD));
        }
        if lits.is_empty() || lits.len() > 3 {
            return Err(serr(
                no,
                format!("clause has {} literals, want 1 to 3", lits.len()),
            ));
        }
        clauses.push(lits);
    }
    let Some((t, m, hline)) = header else {
        return Err(serr(1, "missing `p cnf` header"));
    };
    if clauses.len() != m {
        return Err(serr(
            hline,
            format!("header declares {m} clauses, file has {}", clauses.len()),
        ));
    }
    at_line(hline, ThreeSatInstance::new(t, clauses))
}

pub fn serialize_cnf(phi: &ThreeSatInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p cnf {} {}", phi.t, phi.clauses.len());
    for clause in &phi.clauses {
        for &l in clause {
            let _ = write!(out, "{} ", lit_text(l));
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn horn_example_round_trips() {
        let text = "p modcsp horn 3 1\nh 3 2 1 2\ng 2 1 0 1 0 1 0 1\n";
        let inst = parse_instance(text).unwrap();
        let AnyInstance::Horn(h) = &inst else {
            panic!("wrong kind")
        };
        assert_eq!(h.n, 3);
        assert_eq!(h.clauses.len(), 1);
        assert_eq!(h.clauses[0].head, 2);
        assert_eq!(h.clauses[0].body, vec![0, 1]);
        assert!(h.units.is_empty());
        assert_eq!(h.side.group.moduli(), &[2]);
        assert_eq!(serialize_instance(&inst), text);
    }

    #[test]
    fn twosat_sign_convention() {
        let text = "p modcsp 2sat 2 1\nt 1 -2\ng 2 0 0 1 0 1\n";
        let inst = parse_instance(text).unwrap();
        let AnyInstance::TwoSat(t) = &inst else {
            panic!("wrong kind")
        };
        assert_eq!(t.clauses[0].0, Lit::pos(0));
        assert_eq!(t.clauses[0].1, Lit::negf(1));
        assert_eq!(serialize_instance(&inst), text);
    }

    #[test]
    fn allowed_set_lines_round_trip() {
        let text = "p modcsp lin2 2 1\nl 1 2 1 2\ng 2 0 0 1 0 1\ng 3 1 0 1 0 2\ns 0 1\ns 1 2\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.side().allowed.len(), 2);
        assert_eq!(serialize_instance(&inst), text);

        // Units come back in declaration order alongside clauses.
        let horn = "p modcsp horn 2 1\nh 2 1 1\nu 1 1\nu 2 0\ng 4 3 0 1 0 2\n";
        let inst = parse_instance(horn).unwrap();
        assert_eq!(serialize_instance(&inst), horn);
    }

    #[test]
    fn comments_and_whitespace_are_tolerated() {
        let text = "c made by hand\np modcsp horn 3 1\nc interlude\nh 3  2  1 2\ng 2 1 0 1 0 1 0 1";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.n(), 3);
    }

    fn expect_parse_err(text: &str) {
        match parse_instance(text) {
            Err(Error::ParseError { .. }) => {}
            other => panic!("wanted ParseError, got {other:?}"),
        }
    }

    fn expect_sem_err(text: &str) -> (usize, String) {
        match parse_instance(text) {
            Err(Error::SemanticError { line, message }) => (line, message),
            other => panic!("wanted SemanticError, got {other:?}"),
        }
    }

    #[test]
    fn instance_parse_errors() {
        expect_parse_err("p modcsp horn 3 1\n\nh 3 2 1 2\ng 2 1 0 1 0 1 0 1\n");
        expect_parse_err("q nonsense\n");
        expect_parse_err("p modcsp horn 3\n");
        expect_parse_err("p modcsp weird 3 1\n");
        expect_parse_err("p modcsp horn 3 1\nh 3 2 1\ng 2 1 0 1 0 1 0 1\n");
        expect_parse_err("p modcsp horn 3 1\nh 3 x 1 2\ng 2 1 0 1 0 1 0 1\n");
        expect_parse_err("p modcsp horn 1 0\nu 1 2\ng 2 1 0 1\n");
    }

    #[test]
    fn instance_semantic_errors() {
        // The wrong-weight-count case from the format's own docs.
        let (line, msg) = expect_sem_err("p modcsp horn 3 1\nh 3 2 1 2\ng 2 1 0 1\n");
        assert_eq!(line, 3);
        assert!(msg.contains("weight values"));

        expect_sem_err("h 1 1 2\n");
        expect_sem_err("p modcsp horn 3 1\np modcsp horn 3 1\n");
        expect_sem_err("p modcsp horn 3 2\nh 3 2 1 2\ng 2 1 0 1 0 1 0 1\n");
        expect_sem_err("p modcsp horn 3 1\nh 3 2 1 2\n");
        expect_sem_err("p modcsp horn 3 1\nh 4 2 1 2\ng 2 1 0 1 0 1 0 1\n");
        expect_sem_err("p modcsp horn 3 1\nh 3 2 1 2\ng 2 2 0 1 0 1 0 1\n");
        expect_sem_err("p modcsp horn 3 1\nh 3 2 1 2\ng 1 0 0 0 0 0 0 0\n");
        expect_sem_err("p modcsp lin2 2 1\nl 0 2 1 1\ng 2 0 0 1 0 1\n");
        expect_sem_err("p modcsp 2sat 2 1\nt 1 0\ng 2 0 0 1 0 1\n");
        expect_sem_err("p modcsp lin2 2 0\ng 2 0 0 1 0 1\ng 3 0 0 1 0 1\ns 1\n");
        expect_sem_err("p modcsp lin2 2 0\ng 2 0 0 1 0 1\ns 2\n");
        expect_sem_err("p modcsp lin2 2 1\nh 1 1 2\ng 2 0 0 1 0 1\n");
        expect_sem_err("");
    }

    #[test]
    fn poly_round_trip_and_errors() {
        let p = IntPoly::from_terms(
            3,
            vec![
                (vec![], BigInt::from(-7)),
                (vec![0, 2], "123456789012345678901234567890".parse().unwrap()),
                (vec![1], BigInt::from(1)),
            ],
        )
        .unwrap();
        let text = serialize_poly(&p);
        assert_eq!(
            text,
            "p poly 3\nm -7 0\nm 123456789012345678901234567890 2 1 3\nm 1 1 2\n"
        );
        assert_eq!(parse_poly(&text).unwrap(), p);

        assert!(matches!(
            parse_poly("p poly 2\nm 1 2 2 1\n"),
            Err(Error::SemanticError { .. })
        ));
        assert!(matches!(
            parse_poly("m 1 0\n"),
            Err(Error::SemanticError { .. })
        ));
        assert!(matches!(
            parse_poly("p poly 2\nm x 0\n"),
            Err(Error::ParseError { .. })
        ));
        assert!(matches!(
            parse_poly("p poly 2\nm 1 1 3\n"),
            Err(Error::SemanticError { .. })
        ));
    }

    #[test]
    fn cnf_round_trip_and_errors() {
        let phi = ThreeSatInstance::new(
            3,
            vec![
                vec![Lit::pos(0), Lit::negf(1), Lit::pos(2)],
                vec![Lit::negf(0)],
            ],
        )
        .unwrap();
        let text = serialize_cnf(&phi);
        assert_eq!(text, "p cnf 3 2\n1 -2 3 0\n-1 0\n");
        assert_eq!(parse_cnf(&text).unwrap(), phi);

        assert!(matches!(
            parse_cnf("p cnf 2 1\n1 2\n"),
            Err(Error::ParseError { .. })
        ));
        assert!(matches!(
            parse_cnf("p cnf 2 1\n1 2 1 2 0\n"),
            Err(Error::SemanticError { .. })
        ));
        assert!(matches!(
            parse_cnf("p cnf 2 1\n3 0\n"),
            Err(Error::SemanticError { .. })
        ));
        assert!(matches!(
            parse_cnf("p cnf 2 2\n1 0\n"),
            Err(Error::SemanticError { .. })
        ));
        assert!(matches!(
            parse_cnf("p cnf 2 1\n1 0 2 0\n"),
            Err(Error::SemanticError { .. })
        ));
    }

    fn random_side(rng: &mut StdRng, n: usize) -> ModularSideConstraint {
        let comps = rng.random_range(1..=2usize);
        let moduli: Vec<u32> = (0..comps).map(|_| rng.random_range(2..=6)).collect();
        let g = GroupSpec::new(moduli.clone()).unwrap();
        let rand_elem = |rng: &mut StdRng| {
            let rs: Vec<u32> = moduli.iter().map(|&m| rng.random_range(0..m)).collect();
            rs
        };
        let weights = (0..n)
            .map(|_| {
                (
                    g.elem(rand_elem(rng)).unwrap(),
                    g.elem(rand_elem(rng)).unwrap(),
                )
            })
            .collect();
        let mut allowed = BTreeSet::new();
        for _ in 0..rng.random_range(1..=2) {
            allowed.insert(g.elem(rand_elem(rng)).unwrap());
        }
        ModularSideConstraint::new(g, weights, allowed).unwrap()
    }

    #[test]
    fn random_round_trips() {
        let mut rng = StdRng::seed_from_u64(501);
        for _ in 0..40 {
            let n = rng.random_range(1..=6usize);
            let side = random_side(&mut rng, n);
            let inst = match rng.random_range(0..3) {
                0 => {
                    let mut clauses = Vec::new();
                    if n >= 2 {
                        for _ in 0..rng.random_range(0..=3) {
                            let head = rng.random_range(0..n as u32);
                            let body: Vec<u32> =
                                (0..n as u32).filter(|&v| v != head).collect();
                            let take = rng.random_range(1..=body.len());
                            clauses.push(HornClause::new(head, body[..take].to_vec()).unwrap());
                        }
                    }
                    let units = (0..rng.random_range(0..=2))
                        .map(|_| (rng.random_range(0..n as u32), rng.random::<bool>()))
                        .collect();
                    AnyInstance::Horn(HornInstance::new(n, clauses, units, side).unwrap())
                }
                1 => {
                    let mut equations = Vec::new();
                    for _ in 0..rng.random_range(0..=3) {
                        let vars: Vec<u32> =
                            (0..n as u32).filter(|_| rng.random::<bool>()).collect();
                        equations.push((vars, rng.random::<bool>()));
                    }
                    AnyInstance::Lin2(Lin2Instance::new(n, equations, side).unwrap())
                }
                _ => {
                    let clauses = (0..rng.random_range(0..=3))
                        .map(|_| {
                            let mut l = || Lit {
                                var: rng.random_range(0..n as u32),
                                neg: rng.random::<bool>(),
                            };
                            (l(), l())
                        })
                        .collect();
                    AnyInstance::TwoSat(TwoSatInstance::new(n, clauses, side).unwrap())
                }
            };
            let text = serialize_instance(&inst);
            let back = parse_instance(&text).unwrap();
            assert_eq!(back, inst, "round trip failed for:\n{text}");
            assert_eq!(serialize_instance(&back), text);
        }
    }
}
