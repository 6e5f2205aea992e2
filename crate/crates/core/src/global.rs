//! Classical reduction and genus machinery for the lattice part, finite
//! automorphism groups, and assembly of the class-number formulas, together
//! with the growth/finiteness surveys built on top of them.
//!
//! The global pipeline is
//!
//!   h⁺(X) = h⁺(L) / [O⁺(L):O⁺(X)] · ∏_{p | conductor} [O⁺(L_p):O⁺(X_p)],
//!
//! with h⁺(L) computed as the number of properly-equivalent reduced form
//! classes in the genus of L, the global index from the finite rotation
//! group, and each local index from the density module (closed forms where
//! available, brute-force oracle otherwise). The conductor-formula evaluation
//! re-derives the same number from the conductor norm, the dyadic lattice
//! density, the η-factors at odd primes, and the correction ideal, whenever
//! its dyadic divisibility hypotheses hold.

use crate::arith::{max_precision, ord_int, power};
use crate::lattice::{
    jordan_form, localize_shift, GramMatrix, JordanKind, LocalForm, LocalShift, ShiftedLattice,
};
use crate::localdensity::{beta_closed, beta_empirical, local_index, LocalIndexReport};
use crate::{Error, Rat};
use alloc::vec::Vec;
use num_integer::{Integer, Roots};
use num_traits::Zero;

/// Default cap on p-adic digits; the CLI can lower or raise it per run.
pub const DEFAULT_MAX_DIGITS: u32 = 64;

/// A binary quadratic form Ax² + Bxy + Cy².
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BQForm {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

impl BQForm {
    pub fn new(a: i128, b: i128, c: i128) -> Self {
        BQForm { a, b, c }
    }

    /// The form of a Gram matrix: x G xᵀ has middle coefficient 2·a12.
    pub fn from_gram(g: &GramMatrix) -> Self {
        BQForm::new(g.a11 as i128, 2 * g.a12 as i128, g.a22 as i128)
    }

    pub fn disc(&self) -> i128 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a > 0 && self.disc() < 0
    }

    pub fn is_reduced(&self) -> bool {
        let ok = self.b.abs() <= self.a && self.a <= self.c;
        ok && !(self.b < 0 && (self.b.abs() == self.a || self.a == self.c))
    }

    pub fn content(&self) -> i128 {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    pub fn primitive(&self) -> BQForm {
        let g = self.content();
        BQForm::new(self.a / g, self.b / g, self.c / g)
    }

    pub fn eval(&self, x: i128, y: i128) -> i128 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }
}

/// The unique reduced form properly equivalent to f.
pub fn gauss_reduce(f: &BQForm) -> Result<BQForm, Error> {
    if !f.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let (mut a, mut b, mut c) = (f.a, f.b, f.c);
    loop {
        // Normalize b into (−a, a] via (x,y) ↦ (x − ky, y).
        if b > a || b <= -a {
            let k = (b + a).div_euclid(2 * a);
            c += a * k * k - b * k;
            b -= 2 * a * k;
        }
        if a > c {
            // (x,y) ↦ (−y, x) swaps the outer coefficients.
            core::mem::swap(&mut a, &mut c);
            b = -b;
        } else {
            break;
        }
    }
    if b < 0 && (-b == a || a == c) {
        b = -b;
    }
    let out = BQForm::new(a, b, c);
    debug_assert!(out.is_reduced() && out.disc() == f.disc());
    Ok(out)
}

/// All primitive reduced forms of discriminant D < 0, sorted; the count is
/// the form class number h(D).
pub fn enumerate_reduced(d: i128) -> Result<Vec<BQForm>, Error> {
    if d >= 0 || d.rem_euclid(4) > 1 {
        return Err(Error::BadDiscriminant { disc: d });
    }
    let mut out = Vec::new();
    let mut a: i128 = 1;
    while 3 * a * a <= -d {
        for b in -a..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if a > c {
                continue;
            }
            if b < 0 && (-b == a || a == c) {
                continue;
            }
            if BQForm::new(a, b, c).content() != 1 {
                continue;
            }
            out.push(BQForm::new(a, b, c));
        }
        a += 1;
    }
    out.sort();
    Ok(out)
}

/// Genus invariant of a primitive positive-definite form: the set of units
/// modulo 8|D| it represents. The scan over x,y ∈ [0, 8|D|) is exhaustive
/// because represented residues are periodic in both variables with period
/// 8|D|.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenusKey {
    pub modulus: u64,
    pub residues: Vec<u64>,
}

pub fn genus_key(f: &BQForm) -> GenusKey {
    debug_assert_eq!(f.content(), 1);
    let m = (8 * f.disc().unsigned_abs()) as u64;
    let mm = m as u128;
    let a = f.a.rem_euclid(m as i128) as u128;
    let b = f.b.rem_euclid(m as i128) as u64;
    let c = f.c.rem_euclid(m as i128) as u64;
    let two_c = (2 * c) % m;
    let mut seen = alloc::vec![false; m as usize];
    for x in 0..m {
        // Row-incremental scan: f(x,y+1) − f(x,y) = b·x + c·(2y+1).
        let mut v = (a * (x as u128) % mm * (x as u128) % mm) as u64;
        let mut step = ((b as u128 * x as u128 + c as u128) % mm) as u64;
        for _ in 0..m {
            seen[v as usize] = true;
            v += step;
            if v >= m {
                v -= m;
            }
            step += two_c;
            if step >= m {
                step -= m;
            }
        }
    }
    let residues = (0..m)
        .filter(|&v| seen[v as usize] && v.gcd(&m) == 1)
        .collect();
    GenusKey {
        modulus: m,
        residues,
    }
}

/// h⁺(L): the number of proper form classes in the genus of the
/// (primitivized) form of G.
pub fn h_plus_lattice(g: &GramMatrix) -> Result<u64, Error> {
    if !g.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let prim = BQForm::from_gram(g).primitive();
    let key = genus_key(&gauss_reduce(&prim)?);
    let mut n = 0;
    for f in enumerate_reduced(prim.disc())? {
        if genus_key(&f) == key {
            n += 1;
        }
    }
    debug_assert!(n >= 1);
    Ok(n)
}

/// All integral 2×2 matrices M with MᵀGM = G and det M = 1, found by
/// enumerating the (finitely many) lattice vectors of the two diagonal norms.
pub fn automorphisms(g: &GramMatrix) -> Result<Vec<[[i64; 2]; 2]>, Error> {
    if !g.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let det = g.det();
    let vectors_of_norm = |n: i128| -> Vec<[i64; 2]> {
        let bx = ((n * g.a22 as i128) / det).sqrt() + 1;
        let by = ((n * g.a11 as i128) / det).sqrt() + 1;
        let mut out = Vec::new();
        for x in -bx..=bx {
            for y in -by..=by {
                if g.quad([x as i64, y as i64]) == n {
                    out.push([x as i64, y as i64]);
                }
            }
        }
        out
    };
    let firsts = vectors_of_norm(g.a11 as i128);
    let seconds = vectors_of_norm(g.a22 as i128);
    let mut out = Vec::new();
    for v in &firsts {
        for w in &seconds {
            let det_m = v[0] as i128 * w[1] as i128 - v[1] as i128 * w[0] as i128;
            if det_m != 1 {
                continue;
            }
            let b = g.a11 as i128 * (v[0] as i128 * w[0] as i128)
                + g.a12 as i128 * (v[0] as i128 * w[1] as i128 + v[1] as i128 * w[0] as i128)
                + g.a22 as i128 * (v[1] as i128 * w[1] as i128);
            if b == g.a12 as i128 {
                out.push([[v[0], w[0]], [v[1], w[1]]]);
            }
        }
    }
    debug_assert!(matches!(out.len(), 2 | 4 | 6));
    Ok(out)
}

fn apply_to_shift(m: &[[i64; 2]; 2], shift: &(Rat, Rat)) -> (Rat, Rat) {
    let a = Rat::new(m[0][0] as i128, 1) * shift.0 + Rat::new(m[0][1] as i128, 1) * shift.1;
    let b = Rat::new(m[1][0] as i128, 1) * shift.0 + Rat::new(m[1][1] as i128, 1) * shift.1;
    (a, b)
}

/// [O⁺(L) : O⁺(X)] = |O⁺(L)| / #{M : M·ν ≡ ν (mod ℤ²)}.
pub fn stabilizer_index(x: &ShiftedLattice) -> Result<u64, Error> {
    let auts = automorphisms(&x.gram)?;
    let shift = x.shift();
    let fixed = auts
        .iter()
        .filter(|m| {
            let (a, b) = apply_to_shift(m, &shift);
            (a - shift.0).is_integer() && (b - shift.1).is_integer()
        })
        .count();
    debug_assert!(fixed >= 1 && auts.len() % fixed == 0);
    Ok((auts.len() / fixed) as u64)
}

fn prime_factors(n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut n = n;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Run `probe` on the local Jordan data of X at p, starting at the default
/// precision ord_p(det) + ord_p(2·conductor) + 6 and doubling on
/// `InsufficientPrecision` up to the digit cap.
fn with_local_data<T>(
    x: &ShiftedLattice,
    p: u64,
    max_digits: u32,
    probe: impl Fn(&LocalForm, &LocalShift) -> Result<T, Error>,
) -> Result<(LocalForm, LocalShift, T), Error> {
    let cap = max_digits.min(max_precision(p));
    let det_ord = ord_int(p, x.gram.det()).finite().expect("nondegenerate") as u32;
    let m_ord = ord_int(p, x.conductor() as i128)
        .finite()
        .expect("conductor >= 1") as u32;
    let e = if p == 2 { 1 } else { 0 };
    let mut prec = (det_ord + e + m_ord + 6).max(det_ord + e + 4);
    loop {
        if prec > cap {
            return Err(Error::PrecisionCapExceeded {
                p,
                requested: prec,
                cap,
            });
        }
        let attempt = (|| {
            let form = jordan_form(&x.gram, p, prec)?;
            let shift = localize_shift(x, &form)?;
            let val = probe(&form, &shift)?;
            Ok((form, shift, val))
        })();
        match attempt {
            Err(Error::InsufficientPrecision { .. }) if prec < cap => {
                prec = (prec * 2).min(cap);
            }
            other => return other,
        }
    }
}

/// The correction ideal: ∏ p^{min(ord s₁, ord(s₁²+αs₂²))} over diagonal-shape
/// primes dividing the conductor; hyperbolic/even primes contribute nothing.
pub fn ideal_i_x(x: &ShiftedLattice) -> Result<u128, Error> {
    ideal_i_x_capped(x, DEFAULT_MAX_DIGITS)
}

pub fn ideal_i_x_capped(x: &ShiftedLattice, max_digits: u32) -> Result<u128, Error> {
    let mut product: u128 = 1;
    for (p, _) in prime_factors(x.conductor()) {
        let (_, _, exp) =
            with_local_data(x, p, max_digits, i_x_exponent)?;
        product *= power(p, exp);
    }
    Ok(product)
}

fn i_x_exponent(form: &LocalForm, shift: &LocalShift) -> Result<u32, Error> {
    if form.kind() != JordanKind::Diagonal {
        return Ok(0);
    }
    let q = shift
        .s1
        .mul(&shift.s1)?
        .add(&form.alpha().mul(&shift.s2)?.mul(&shift.s2)?)?;
    // min(ord s₁, ord q) is finite: a unit coordinate forces
    // ord q ≤ ord α + 2·ord s₂ < ∞.
    let t_nu = q.valuation()?;
    let exp = match shift.s1.valuation() {
        Ok(t_s) => t_s.min(t_nu),
        // s₁ ≡ 0 to full precision > t_ν, so the min is t_ν.
        Err(_) => t_nu,
    };
    Ok(exp)
}

/// ∏_{p | gcd(conductor, 2)} β_p⁺(L_p; L_p): the dyadic lattice density, 1
/// for odd conductors.
pub fn beta2(x: &ShiftedLattice) -> Result<Rat, Error> {
    beta2_capped(x, DEFAULT_MAX_DIGITS)
}

pub fn beta2_capped(x: &ShiftedLattice, max_digits: u32) -> Result<Rat, Error> {
    if x.conductor() % 2 != 0 {
        return Ok(Rat::new(1, 1));
    }
    let (_, _, beta) = with_local_data(x, 2, max_digits, |form, _| {
        lattice_density(form)
    })?;
    Ok(beta)
}

fn lattice_density(form: &LocalForm) -> Result<Rat, Error> {
    let trivial = LocalShift::trivial(form.prime(), form.precision())?;
    match beta_closed(form, &trivial) {
        Ok(b) => Ok(b.value()),
        Err(Error::HypothesisNotMet) => Ok(beta_empirical(form, &trivial)?.0.value()),
        Err(e) => Err(e),
    }
}

/// The conductor-formula evaluation and its applicability.
#[derive(Debug, Clone)]
pub struct ConductorFormula {
    /// Whether the dyadic divisibility hypotheses hold, making the closed
    /// conductor formula valid.
    pub applicable: bool,
    /// The formula value when applicable.
    pub value: Option<Rat>,
}

/// Every factor of the class-number computation, itemized for audit.
#[derive(Debug, Clone)]
pub struct ClassNumberBreakdown {
    pub h_l: u64,
    /// |O⁺(L)| ∈ {2, 4, 6}.
    pub aut_l: u32,
    pub stab_index: u64,
    pub local_reports: Vec<LocalIndexReport>,
    pub h_x: u64,
    pub conductor_formula_applicable: bool,
    pub conductor_formula_value: Option<Rat>,
    pub i_x: u128,
    pub beta2: Rat,
    pub norm_m: u64,
}

/// h⁺(X) by the mass-formula route: h⁺(L)/[O⁺(L):O⁺(X)] times the product of
/// the local indices over primes dividing the conductor, every factor
/// itemized; closed-form densities where their hypotheses hold, the oracle
/// otherwise.
pub fn class_number(x: &ShiftedLattice) -> Result<ClassNumberBreakdown, Error> {
    class_number_capped(x, DEFAULT_MAX_DIGITS)
}

/// Per-prime data for both formula routes, gathered inside one precision
/// ladder so that any certification failure retries at higher precision.
struct PrimeSummary {
    report: LocalIndexReport,
    /// Exponent of p in the correction ideal (diagonal shape only).
    i_exp: u32,
    /// 1 − η(−α)/p at odd diagonal primes, 1 otherwise.
    eta_factor: Rat,
    /// Whether the dyadic divisibility hypothesis holds at this prime.
    hypothesis: bool,
    /// β_p⁺(L;L) at p = 2, 1 otherwise.
    lattice_beta: Rat,
}

fn prime_summary(p: u64, form: &LocalForm, shift: &LocalShift) -> Result<PrimeSummary, Error> {
    let report = local_index(form, shift)?;
    let e = form.e();
    let one = Rat::new(1, 1);
    let (i_exp, eta_factor, hypothesis) = match form.kind() {
        JordanKind::Diagonal => {
            let exp = i_x_exponent(form, shift)?;
            if p == 2 {
                let ord_alpha = form.alpha().valuation()?;
                (exp, one, shift.t_m >= ord_alpha + e + 1)
            } else {
                let eta = form.alpha().neg().eta()?;
                (exp, one - Rat::new(eta as i128, p as i128), true)
            }
        }
        JordanKind::Hyperbolic => (0, one, true),
        JordanKind::Even => (0, one, shift.t_m >= e + 1),
    };
    let lattice_beta = if p == 2 { lattice_density(form)? } else { one };
    Ok(PrimeSummary {
        report,
        i_exp,
        eta_factor,
        hypothesis,
        lattice_beta,
    })
}

pub fn class_number_capped(
    x: &ShiftedLattice,
    max_digits: u32,
) -> Result<ClassNumberBreakdown, Error> {
    if !x.gram.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    debug_assert!(x.gram.det_condition());
    let h_l = h_plus_lattice(&x.gram)?;
    let aut_l = automorphisms(&x.gram)?.len() as u32;
    let stab_index = stabilizer_index(x)?;
    let m = x.conductor();

    let mut locals = Vec::new();
    for (p, _) in prime_factors(m) {
        let (_, shift, summary) =
            with_local_data(x, p, max_digits, |f, s| prime_summary(p, f, s))?;
        locals.push((p, shift.t_m, summary));
    }

    let mut h = Rat::new(h_l as i128, stab_index as i128);
    for (_, _, s) in &locals {
        h *= Rat::new(s.report.index as i128, 1);
    }
    if !h.is_integer() || h <= Rat::zero() {
        return Err(Error::NonIntegralIndex { p: 0 });
    }
    let h_x = h.to_integer() as u64;

    // The conductor-formula route, assembled from the same local data.
    let mut beta2 = Rat::new(1, 1);
    let mut i_x: u128 = 1;
    let mut eta_product = Rat::new(1, 1);
    let mut gcd_m_i: u128 = 1;
    let mut applicable = true;
    for (p, t_m, s) in &locals {
        beta2 *= s.lattice_beta;
        i_x *= power(*p, s.i_exp);
        gcd_m_i *= power(*p, s.i_exp.min(*t_m));
        eta_product *= s.eta_factor;
        applicable &= s.hypothesis;
    }
    let local_reports: Vec<LocalIndexReport> =
        locals.into_iter().map(|(_, _, s)| s.report).collect();
    let conductor_formula_value = if applicable {
        let v = Rat::new(h_l as i128, stab_index as i128)
            * beta2
            * Rat::new(m as i128, gcd_m_i as i128)
            * eta_product;
        debug_assert_eq!(v, Rat::new(h_x as i128, 1), "formula routes disagree");
        Some(v)
    } else {
        None
    };

    Ok(ClassNumberBreakdown {
        h_l,
        aut_l,
        stab_index,
        local_reports,
        h_x,
        conductor_formula_applicable: applicable,
        conductor_formula_value,
        i_x,
        beta2,
        norm_m: m,
    })
}

/// The conductor formula alone: value plus applicability flag.
pub fn class_number_conductor_formula(x: &ShiftedLattice) -> Result<ConductorFormula, Error> {
    let b = class_number(x)?;
    Ok(ConductorFormula {
        applicable: b.conductor_formula_applicable,
        value: b.conductor_formula_value,
    })
}

/// All shifts of conductor exactly m ≤ m_max with h⁺(L+ν) = h, one
/// lexicographically-smallest representative per O⁺(L)-orbit.
pub fn search_fixed_h(g: &GramMatrix, h: u64, m_max: u64) -> Result<Vec<(Rat, Rat)>, Error> {
    if !g.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let auts = automorphisms(g)?;
    let mut out = Vec::new();
    for m in 1..=m_max {
        for a in 0..m {
            for b in 0..m {
                if a.gcd(&b).gcd(&m) != 1 {
                    continue; // conductor strictly smaller than m
                }
                if !is_orbit_canonical(&auts, a, b, m) {
                    continue;
                }
                let x = ShiftedLattice::new(
                    *g,
                    (Rat::new(a as i128, m as i128), Rat::new(b as i128, m as i128)),
                );
                debug_assert_eq!(x.conductor(), m);
                if class_number(&x)?.h_x == h {
                    out.push(x.shift());
                }
            }
        }
    }
    Ok(out)
}

fn is_orbit_canonical(auts: &[[[i64; 2]; 2]], a: u64, b: u64, m: u64) -> bool {
    let m = m as i64;
    for mat in auts {
        let a2 = (mat[0][0] * a as i64 + mat[0][1] * b as i64).rem_euclid(m) as u64;
        let b2 = (mat[1][0] * a as i64 + mat[1][1] * b as i64).rem_euclid(m) as u64;
        if (a2, b2) < (a, b) {
            return false;
        }
    }
    true
}

/// One row of the growth survey over the axis family ν = (1/m, 0).
#[derive(Debug, Clone, Copy)]
pub struct GrowthRow {
    pub m: u64,
    pub norm_conductor: u64,
    pub h_plus: u64,
}

pub fn growth_table(g: &GramMatrix, ms: &[u64]) -> Result<Vec<GrowthRow>, Error> {
    let mut rows = Vec::new();
    for &m in ms {
        let x = ShiftedLattice::new(*g, (Rat::new(1, m as i128), Rat::zero()));
        let b = class_number(&x)?;
        rows.push(GrowthRow {
            m,
            norm_conductor: b.norm_m,
            h_plus: b.h_x,
        });
    }
    Ok(rows)
}


#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use alloc::vec;

    fn rat(n: i128, d: i128) -> Rat {
        Rat::new(n, d)
    }

    fn z2_shift(n1: (i128, i128), n2: (i128, i128)) -> ShiftedLattice {
        let g = GramMatrix::new(1, 0, 1).unwrap();
        ShiftedLattice::new(g, (rat(n1.0, n1.1), rat(n2.0, n2.1)))
    }

    #[test]
    fn gauss_reduce_examples() {
        let f = BQForm::new(1, 0, 1);
        assert_eq!(gauss_reduce(&f).unwrap(), f);
        let f = BQForm::new(2, 2, 3);
        assert_eq!(gauss_reduce(&f).unwrap(), f);
        let f = BQForm::new(3, 2, 5);
        assert_eq!(gauss_reduce(&f).unwrap(), f);
        // A non-reduced form of disc −20.
        let f = BQForm::new(3, 4, 3);
        let r = gauss_reduce(&f).unwrap();
        assert_eq!(r.disc(), -20);
        assert!(r.is_reduced());
        assert_eq!(r, BQForm::new(2, 2, 3));
    }

    #[test]
    fn gauss_reduce_rejects_indefinite() {
        assert_eq!(
            gauss_reduce(&BQForm::new(1, 0, -1)),
            Err(Error::NotPositiveDefinite)
        );
    }

    #[test]
    fn enumerate_reduced_classical_values() {
        assert_eq!(enumerate_reduced(-4).unwrap(), vec![BQForm::new(1, 0, 1)]);
        assert_eq!(
            enumerate_reduced(-20).unwrap(),
            vec![BQForm::new(1, 0, 5), BQForm::new(2, 2, 3)]
        );
        assert_eq!(enumerate_reduced(-23).unwrap().len(), 3);
        assert_eq!(enumerate_reduced(-56).unwrap().len(), 4);
        assert!(matches!(
            enumerate_reduced(-6),
            Err(Error::BadDiscriminant { .. })
        ));
    }

    /// Independent route: reduce every form of discriminant D in a
    /// coefficient box and collect the distinct reduced results.
    #[test]
    fn enumerate_reduced_matches_reduction_closure() {
        for d in [-4i128, -20, -23, -56, -15, -24] {
            let expected: BTreeSet<BQForm> = enumerate_reduced(d).unwrap().into_iter().collect();
            let mut seen = BTreeSet::new();
            for a in 1..=40i128 {
                for b in -40..=40i128 {
                    let num = b * b - d;
                    if num % (4 * a) != 0 {
                        continue;
                    }
                    let f = BQForm::new(a, b, num / (4 * a));
                    if f.content() != 1 {
                        continue;
                    }
                    seen.insert(gauss_reduce(&f).unwrap());
                }
            }
            assert_eq!(seen, expected, "D={d}");
        }
    }

    #[test]
    fn genus_key_examples() {
        let keys: Vec<GenusKey> = enumerate_reduced(-20)
            .unwrap()
            .iter()
            .map(genus_key)
            .collect();
        assert_ne!(keys[0], keys[1]);
        // (2,2,3) represents 3; x² + 5y² does not represent 3 mod 40.
        assert!(keys[1].residues.contains(&3) ^ keys[0].residues.contains(&3));

        let keys: BTreeSet<Vec<u64>> = enumerate_reduced(-23)
            .unwrap()
            .iter()
            .map(|f| genus_key(f).residues)
            .collect();
        assert_eq!(keys.len(), 1);

        assert_eq!(enumerate_reduced(-4).unwrap().len(), 1);
    }

    #[test]
    fn genus_partition_sanity() {
        // Genera of a fixed discriminant partition the classes into equal
        // cells.
        for d in [-20i128, -23, -56, -84, -39] {
            let forms = enumerate_reduced(d).unwrap();
            let keys: Vec<Vec<u64>> = forms.iter().map(|f| genus_key(f).residues).collect();
            let distinct: BTreeSet<&Vec<u64>> = keys.iter().collect();
            let sizes: BTreeSet<usize> = distinct
                .iter()
                .map(|k| keys.iter().filter(|x| x == k).count())
                .collect();
            assert_eq!(sizes.len(), 1, "unequal genus cells for D={d}");
            assert_eq!(
                keys.len(),
                forms.len(),
                "every class keyed exactly once for D={d}"
            );
        }
    }

    #[test]
    fn h_plus_lattice_examples() {
        assert_eq!(
            h_plus_lattice(&GramMatrix::new(1, 0, 1).unwrap()).unwrap(),
            1
        );
        assert_eq!(
            h_plus_lattice(&GramMatrix::new(1, 0, 5).unwrap()).unwrap(),
            1
        );
        assert_eq!(
            h_plus_lattice(&GramMatrix::new(2, 1, 3).unwrap()).unwrap(),
            1
        );
        assert_eq!(
            h_plus_lattice(&GramMatrix::new(2, 1, 2).unwrap()).unwrap(),
            1
        );
    }

    #[test]
    fn automorphism_orders() {
        assert_eq!(
            automorphisms(&GramMatrix::new(1, 0, 1).unwrap())
                .unwrap()
                .len(),
            4
        );
        assert_eq!(
            automorphisms(&GramMatrix::new(2, 1, 2).unwrap())
                .unwrap()
                .len(),
            6
        );
        assert_eq!(
            automorphisms(&GramMatrix::new(1, 0, 3).unwrap())
                .unwrap()
                .len(),
            2
        );
    }

    #[test]
    fn stabilizer_index_examples() {
        assert_eq!(stabilizer_index(&z2_shift((0, 1), (0, 1))).unwrap(), 1);
        assert_eq!(stabilizer_index(&z2_shift((1, 5), (0, 1))).unwrap(), 4);
        assert_eq!(stabilizer_index(&z2_shift((1, 2), (1, 2))).unwrap(), 1);
    }

    #[test]
    fn ideal_i_x_examples() {
        assert_eq!(ideal_i_x(&z2_shift((1, 5), (0, 1))).unwrap(), 1);
        assert_eq!(ideal_i_x(&z2_shift((0, 1), (1, 5))).unwrap(), 1);
        let g = GramMatrix::new(1, 0, 25).unwrap();
        let x = ShiftedLattice::new(g, (rat(0, 1), rat(1, 5)));
        assert_eq!(ideal_i_x(&x).unwrap(), 25);
    }

    #[test]
    fn beta2_examples() {
        assert_eq!(beta2(&z2_shift((1, 5), (0, 1))).unwrap(), rat(1, 1));
        assert_eq!(beta2(&z2_shift((1, 2), (0, 1))).unwrap(), rat(1, 1));
        let g = GramMatrix::new(2, 1, 2).unwrap();
        let x = ShiftedLattice::new(g, (rat(1, 2), rat(0, 1)));
        assert_eq!(beta2(&x).unwrap(), rat(3, 2));
    }

    #[test]
    fn worked_class_numbers() {
        let b = class_number(&z2_shift((1, 5), (0, 1))).unwrap();
        assert_eq!((b.h_x, b.h_l, b.stab_index), (1, 1, 4));
        assert_eq!(b.local_reports[0].index, 4);

        let b = class_number(&z2_shift((1, 9), (0, 1))).unwrap();
        assert_eq!(b.h_x, 3);
        assert_eq!(b.local_reports[0].index, 12);

        let b = class_number(&z2_shift((1, 4), (0, 1))).unwrap();
        assert_eq!(b.h_x, 1);
        assert_eq!(b.local_reports[0].index, 4);
    }

    #[test]
    fn conductor_formula_examples() {
        let b = class_number(&z2_shift((1, 5), (0, 1))).unwrap();
        assert!(b.conductor_formula_applicable);
        assert_eq!(b.conductor_formula_value, Some(rat(1, 1)));

        // t_m = 1 < ord(2α)+1 = 2 at p = 2: formula inapplicable.
        let f = class_number_conductor_formula(&z2_shift((1, 2), (0, 1))).unwrap();
        assert!(!f.applicable);
        assert!(f.value.is_none());

        let b = class_number(&z2_shift((1, 9), (0, 1))).unwrap();
        assert!(b.conductor_formula_applicable);
        assert_eq!(b.conductor_formula_value, Some(rat(3, 1)));

        // t_m = 2 = ord(2·1)+1 at p = 2: applicable.
        let b = class_number(&z2_shift((1, 4), (0, 1))).unwrap();
        assert!(b.conductor_formula_applicable);
        assert_eq!(b.conductor_formula_value, Some(rat(1, 1)));
    }

    #[test]
    fn scaling_invariance() {
        let shifts = [
            (rat(1, 5), rat(0, 1)),
            (rat(1, 4), rat(0, 1)),
            (rat(1, 3), rat(2, 3)),
        ];
        for g0 in [
            GramMatrix::new(1, 0, 1).unwrap(),
            GramMatrix::new(2, 1, 3).unwrap(),
        ] {
            for shift in &shifts {
                let h0 = class_number(&ShiftedLattice::new(g0, *shift)).unwrap().h_x;
                for k in 2i64..=4 {
                    let g = g0.scaled(k).unwrap();
                    let h = class_number(&ShiftedLattice::new(g, *shift)).unwrap().h_x;
                    assert_eq!(h, h0, "k={k} shift={shift:?}");
                }
            }
        }
    }

    #[test]
    fn search_examples() {
        let g = GramMatrix::new(1, 0, 1).unwrap();
        // Conductors 1 and 2: the lattice itself, the (0,1/2)-orbit and the
        // half-diagonal all have h⁺ = 1 (each re-verified by the oracle).
        let found = search_fixed_h(&g, 1, 2).unwrap();
        assert_eq!(
            found,
            vec![
                (rat(0, 1), rat(0, 1)),
                (rat(0, 1), rat(1, 2)),
                (rat(1, 2), rat(1, 2)),
            ]
        );

        let found = search_fixed_h(&g, 3, 9).unwrap();
        assert!(found.contains(&(rat(0, 1), rat(1, 9))));

        assert!(search_fixed_h(&g, 0, 3).unwrap().is_empty());
    }

    #[test]
    fn growth_examples() {
        let g = GramMatrix::new(1, 0, 1).unwrap();
        let rows = growth_table(&g, &[1, 5, 6, 7, 9]).unwrap();
        let triple = |r: &GrowthRow| (r.m, r.norm_conductor, r.h_plus);
        assert_eq!(triple(&rows[0]), (1, 1, 1));
        assert_eq!(triple(&rows[1]), (5, 5, 1));
        assert_eq!(triple(&rows[2]), (6, 6, 2));
        assert_eq!(triple(&rows[3]), (7, 7, 2));
        assert_eq!(triple(&rows[4]), (9, 9, 3));
    }

    #[test]
    fn hexagonal_growth_rows() {
        let g = GramMatrix::new(2, 1, 2).unwrap();
        let rows = growth_table(&g, &[1, 2, 3, 5, 7]).unwrap();
        for r in &rows {
            assert!(r.h_plus >= 1);
            assert_eq!(r.norm_conductor, r.m);
        }
        assert_eq!(rows[0].h_plus, 1); // h⁺(L) itself
    }
}
