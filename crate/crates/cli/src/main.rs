//! Command-line front end: local Jordan forms, class-number breakdowns with
//! optional oracle audit, growth surveys, and fixed-class-number searches.
//!
//! Output is machine-readable and byte-stable: JSON for single computations,
//! CSV for tables; rationals print as `num/den`, p-adic values as
//! `u*p^k (mod p^N)`.
//!
//! Exit codes: 0 ok, 2 parse error, 3 precision failure, 4 domain error
//! (not positive definite), 5 internal invariant breach.

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use shifted_genus::arith::max_precision;
use shifted_genus::global::{
    class_number_capped, growth_table, search_fixed_h, DEFAULT_MAX_DIGITS,
};
use shifted_genus::lattice::{jordan_form, localize_shift, GramMatrix, LocalShift, ShiftedLattice};
use shifted_genus::localdensity::{beta_empirical, DensityMethod};
use shifted_genus::{Error, Rat};
use std::process::ExitCode;

const EXIT_PARSE: u8 = 2;
const EXIT_PRECISION: u8 = 3;
const EXIT_DOMAIN: u8 = 4;
const EXIT_INTERNAL: u8 = 5;

#[derive(Parser)]
#[command(
    name = "shifted-genus",
    about = "Exact proper class numbers of positive-definite binary quadratic polynomials",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Local Jordan canonical form of a Gram matrix at a prime
    Jordan {
        /// Gram entries "a11,a12,a22"
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        /// The prime p
        #[arg(short, long)]
        p: u64,
    },
    /// Class number of the shifted lattice, with every factor itemized
    Classnumber {
        /// Gram entries "a11,a12,a22"
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        /// Shift "n1/d1,n2/d2"
        #[arg(long, allow_hyphen_values = true)]
        shift: String,
        /// Re-derive every closed-form factor by the brute-force oracle
        #[arg(long)]
        audit: bool,
    },
    /// CSV survey of h+ over the axis shift family (1/m, 0)
    Growth {
        /// Gram entries "a11,a12,a22"
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        /// Largest conductor m
        #[arg(long = "max-m")]
        max_m: u64,
        /// Shift family; only "axis" is defined
        #[arg(long = "shift-family", default_value = "axis")]
        shift_family: String,
    },
    /// Orbit representatives of shifts with a given class number
    Search {
        /// Gram entries "a11,a12,a22"
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        /// The class number to search for
        #[arg(long)]
        h: u64,
        /// Largest conductor to scan
        #[arg(long = "max-m")]
        max_m: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let max_digits = match read_precision_cap() {
        Ok(v) => v,
        Err(msg) => return fail(EXIT_PARSE, &msg),
    };
    match cli.cmd {
        Cmd::Jordan { form, p } => cmd_jordan(&form, p, max_digits),
        Cmd::Classnumber { form, shift, audit } => cmd_classnumber(&form, &shift, audit, max_digits),
        Cmd::Growth {
            form,
            max_m,
            shift_family,
        } => cmd_growth(&form, max_m, &shift_family),
        Cmd::Search { form, h, max_m } => cmd_search(&form, h, max_m),
    }
}

fn fail(code: u8, msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn error_exit(e: Error) -> ExitCode {
    let code = match e {
        Error::InsufficientPrecision { .. } | Error::PrecisionCapExceeded { .. } => EXIT_PRECISION,
        Error::NotPositiveDefinite | Error::BadDiscriminant { .. } | Error::DegenerateForm => {
            EXIT_DOMAIN
        }
        Error::NotStabilized { .. }
        | Error::NonIntegralIndex { .. }
        | Error::HypothesisNotMet
        | Error::NotUnit
        | Error::EtaAtEvenPrime => EXIT_INTERNAL,
    };
    fail(code, &e.to_string())
}

fn read_precision_cap() -> Result<u32, String> {
    match std::env::var("SHIFTED_GENUS_MAX_PRECISION") {
        Ok(s) => s
            .trim()
            .parse::<u32>()
            .map_err(|_| format!("SHIFTED_GENUS_MAX_PRECISION must be a positive integer, got {s:?}")),
        Err(_) => Ok(DEFAULT_MAX_DIGITS),
    }
}

/// "a11,a12,a22" with parse errors carrying position and reason.
fn parse_gram(s: &str) -> Result<GramMatrix, String> {
    let parts = split3(s, "Gram matrix")?;
    let mut vals = [0i64; 3];
    for (i, (part, offset)) in parts.iter().enumerate() {
        vals[i] = part.trim().parse::<i64>().map_err(|e| {
            format!("Gram matrix entry {} at byte {offset}: {e} (got {part:?})", i + 1)
        })?;
    }
    GramMatrix::new(vals[0], vals[1], vals[2])
        .map_err(|_| "Gram matrix is degenerate (zero determinant)".to_string())
}

/// "n1/d1,n2/d2"; plain integers are accepted as n/1.
fn parse_shift(s: &str) -> Result<(Rat, Rat), String> {
    let comma = s
        .find(',')
        .ok_or_else(|| format!("shift must be two comma-separated rationals, got {s:?}"))?;
    let a = parse_rat(&s[..comma], 0)?;
    let b = parse_rat(&s[comma + 1..], comma + 1)?;
    Ok((a, b))
}

fn parse_rat(part: &str, offset: usize) -> Result<Rat, String> {
    let part = part.trim();
    let (num, den) = match part.find('/') {
        Some(i) => (&part[..i], &part[i + 1..]),
        None => (part, "1"),
    };
    let n: i128 = num
        .parse()
        .map_err(|e| format!("rational numerator at byte {offset}: {e} (got {num:?})"))?;
    let d: i128 = den
        .parse()
        .map_err(|e| format!("rational denominator at byte {offset}: {e} (got {den:?})"))?;
    if d == 0 {
        return Err(format!("zero denominator at byte {offset}"));
    }
    Ok(Rat::new(n, d))
}

fn split3<'a>(s: &'a str, what: &str) -> Result<[(&'a str, usize); 3], String> {
    let mut parts = Vec::new();
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        if ch == ',' {
            parts.push((&s[start..i], start));
            start = i + 1;
        }
    }
    parts.push((&s[start..], start));
    if parts.len() != 3 {
        return Err(format!(
            "{what} must be three comma-separated integers, got {} parts in {s:?}",
            parts.len()
        ));
    }
    Ok([parts[0], parts[1], parts[2]])
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn rat_str(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn cmd_jordan(form: &str, p: u64, max_digits: u32) -> ExitCode {
    let gram = match parse_gram(form) {
        Ok(g) => g,
        Err(msg) => return fail(EXIT_PARSE, &msg),
    };
    if !is_prime(p) {
        return fail(EXIT_PARSE, &format!("{p} is not a prime"));
    }
    let det_ord = match shifted_genus::arith::ord_int(p, gram.det()).finite() {
        Some(v) => v as u32,
        None => return fail(EXIT_DOMAIN, "degenerate form"),
    };
    let e = if p == 2 { 1 } else { 0 };
    let prec = (det_ord + e + 8).min(max_digits).min(max_precision(p));
    let f = match jordan_form(&gram, p, prec) {
        Ok(f) => f,
        Err(e) => return error_exit(e),
    };
    let u = f.basis_change();
    let out = json!({
        "p": p,
        "kind": f.kind().index(),
        "c": f.scale().to_string(),
        "alpha": match f.kind().index() { 2 => Value::Null, _ => json!(f.alpha().to_string()) },
        "beta": match f.kind().index() { 3 => json!(f.beta().to_string()), _ => Value::Null },
        "U": [
            [u[0][0].to_string(), u[0][1].to_string()],
            [u[1][0].to_string(), u[1][1].to_string()],
        ],
        "precision": f.precision(),
    });
    println!("{out}");
    ExitCode::SUCCESS
}

fn cmd_classnumber(form: &str, shift: &str, audit: bool, max_digits: u32) -> ExitCode {
    let gram = match parse_gram(form) {
        Ok(g) => g,
        Err(msg) => return fail(EXIT_PARSE, &msg),
    };
    let shift = match parse_shift(shift) {
        Ok(s) => s,
        Err(msg) => return fail(EXIT_PARSE, &msg),
    };
    let x = ShiftedLattice::new(gram, shift);
    let b = match class_number_capped(&x, max_digits) {
        Ok(b) => b,
        Err(e) => return error_exit(e),
    };
    let locals: Vec<Value> = b
        .local_reports
        .iter()
        .map(|r| {
            json!({
                "p": r.p,
                "t_m": r.t_m,
                "beta_l": rat_str(&r.beta_l.value()),
                "beta_x": rat_str(&r.beta_x.value()),
                "index": r.index as u64,
                "method": match r.method { DensityMethod::Closed => "closed", DensityMethod::Empirical => "empirical" },
                "t_used": r.t_used,
            })
        })
        .collect();
    let (s1, s2) = x.shift();
    let mut out = json!({
        "gram": [gram.a11, gram.a12, gram.a22],
        "shift": [rat_str(&s1), rat_str(&s2)],
        "conductor": x.conductor(),
        "h_lattice": b.h_l,
        "aut_order": b.aut_l,
        "stabilizer_index": b.stab_index,
        "local": locals,
        "h_plus": b.h_x,
        "formula": {
            "applicable": b.conductor_formula_applicable,
            "value": b.conductor_formula_value.as_ref().map(rat_str),
        },
        "i_x": b.i_x as u64,
        "beta2": rat_str(&b.beta2),
        "norm_conductor": b.norm_m,
    });
    if audit {
        match audit_locals(&x, &b.local_reports, max_digits) {
            Ok((rows, ok)) => {
                out["audit"] = Value::Array(rows);
                out["audit_ok"] = json!(ok);
            }
            Err(e) => return error_exit(e),
        }
    }
    println!("{out}");
    ExitCode::SUCCESS
}

/// Recompute each local index purely by stabilized enumeration and report
/// agreement; never changes the primary fields.
fn audit_locals(
    x: &ShiftedLattice,
    reports: &[shifted_genus::localdensity::LocalIndexReport],
    max_digits: u32,
) -> Result<(Vec<Value>, bool), Error> {
    let mut rows = Vec::new();
    let mut all_ok = true;
    for r in reports {
        let p = r.p;
        let prec = (r.t_m + 14).min(max_digits).min(max_precision(p));
        let form = jordan_form(&x.gram, p, prec)?;
        let shift = localize_shift(x, &form)?;
        let trivial = LocalShift::trivial(p, form.precision())?;
        let (beta_l, t1) = beta_empirical(&form, &trivial)?;
        let (beta_x, t2) = beta_empirical(&form, &shift)?;
        let index = beta_l.value() / beta_x.value();
        let agree = beta_l.value() == r.beta_l.value()
            && beta_x.value() == r.beta_x.value()
            && index == Rat::new(r.index as i128, 1);
        all_ok &= agree;
        rows.push(json!({
            "p": p,
            "beta_l_oracle": rat_str(&beta_l.value()),
            "beta_x_oracle": rat_str(&beta_x.value()),
            "index_oracle": index.to_integer() as u64,
            "t_used": t1.max(t2),
            "agree": agree,
        }));
    }
    Ok((rows, all_ok))
}

fn cmd_growth(form: &str, max_m: u64, family: &str) -> ExitCode {
    let gram = match parse_gram(form) {
        Ok(g) => g,
        Err(msg) => return fail(EXIT_PARSE, &msg),
    };
    if family != "axis" {
        return fail(EXIT_PARSE, &format!("unknown shift family {family:?}"));
    }
    if max_m < 1 {
        return fail(EXIT_PARSE, "--max-m must be at least 1");
    }
    let ms: Vec<u64> = (1..=max_m).collect();
    let rows = match growth_table(&gram, &ms) {
        Ok(r) => r,
        Err(e) => return error_exit(e),
    };
    println!("m,norm_conductor,h_plus");
    for r in rows {
        println!("{},{},{}", r.m, r.norm_conductor, r.h_plus);
    }
    ExitCode::SUCCESS
}

fn cmd_search(form: &str, h: u64, max_m: u64) -> ExitCode {
    let gram = match parse_gram(form) {
        Ok(g) => g,
        Err(msg) => return fail(EXIT_PARSE, &msg),
    };
    let shifts = match search_fixed_h(&gram, h, max_m) {
        Ok(s) => s,
        Err(e) => return error_exit(e),
    };
    let list: Vec<Value> = shifts
        .iter()
        .map(|(a, b)| json!([rat_str(a), rat_str(b)]))
        .collect();
    let out = json!({
        "gram": [gram.a11, gram.a12, gram.a22],
        "h": h,
        "max_m": max_m,
        "shifts": list,
    });
    println!("{out}");
    ExitCode::SUCCESS
}
