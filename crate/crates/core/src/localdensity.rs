//! Brute-force counting of the finite orthogonal groups O⁺(L, p^t) and
//! O⁺(X, p^t), the closed-form local densities β_p⁺, and the local group
//! index [O⁺(L_p) : O⁺(X_p)].
//!
//! Matrices preserving the form modulo p^{t+𝔱_L} are parametrized by pairs
//! (x₁,x₂), so every group order is the number of solutions of a system of
//! one quadratic and at most two linear congruences. Two independent kernels
//! count such systems — direct grid enumeration for small moduli and
//! digit-by-digit lifting from mod-p seeds beyond — and the closed-form
//! density formulas are cross-checked against these counts exactly.

use crate::arith::{ord_int, power, PadicApprox, Valuation};
use crate::lattice::{JordanKind, LocalForm, LocalShift};
use crate::{Error, Rat};
use alloc::vec::Vec;

/// a·x₁² + b·x₁x₂ + c·x₂² ≡ rhs (mod p^mod_exp)
#[derive(Debug, Clone, Copy)]
struct QuadConstraint {
    a: u128,
    b: u128,
    c: u128,
    rhs: u128,
    mod_exp: u32,
}

/// c₁·x₁ + c₂·x₂ ≡ rhs (mod p^mod_exp)
#[derive(Debug, Clone, Copy)]
struct LinConstraint {
    c1: u128,
    c2: u128,
    rhs: u128,
    mod_exp: u32,
}

/// A congruence system over (ℤ/p^t)². The constraint moduli may exceed p^t
/// (by 𝔱_L digits); the systems produced here are well defined on residues
/// mod p^t regardless, which the perturbation tests check directly.
#[derive(Debug, Clone)]
struct ResidueSystem {
    p: u64,
    t: u32,
    quad: QuadConstraint,
    linear: Vec<LinConstraint>,
}

/// Direct enumeration is used while the full grid fits this budget.
const DIRECT_GRID_LIMIT: u128 = 1 << 22;

impl ResidueSystem {
    fn count(&self) -> u128 {
        let grid = power(self.p, self.t) * power(self.p, self.t);
        if grid <= DIRECT_GRID_LIMIT {
            self.count_direct()
        } else {
            self.count_lifted()
        }
    }

    fn count_direct(&self) -> u128 {
        let pt = power(self.p, self.t);
        let mut n = 0u128;
        for x1 in 0..pt {
            for x2 in 0..pt {
                if self.passes_level(x1, x2, self.t) {
                    n += 1;
                }
            }
        }
        n
    }

    /// Count by lifting solutions digit by digit from mod-p seeds. Each level
    /// filters with the constraint moduli clamped to the digits determined so
    /// far; soundness rests on the gradient valuations of the quadratic
    /// shapes used here (cross terms carry the same p-power as the modulus
    /// excess).
    fn count_lifted(&self) -> u128 {
        let p = self.p as u128;
        let mut n = 0u128;
        for x1 in 0..p {
            for x2 in 0..p {
                if self.passes_level(x1, x2, 1) {
                    n += self.descend(x1, x2, 1);
                }
            }
        }
        n
    }

    fn descend(&self, x1: u128, x2: u128, level: u32) -> u128 {
        if level == self.t {
            return 1;
        }
        let p = self.p as u128;
        let step = power(self.p, level);
        let mut n = 0u128;
        for d1 in 0..p {
            let y1 = x1 + d1 * step;
            for d2 in 0..p {
                let y2 = x2 + d2 * step;
                if self.passes_level(y1, y2, level + 1) {
                    n += self.descend(y1, y2, level + 1);
                }
            }
        }
        n
    }

    fn passes_level(&self, x1: u128, x2: u128, level: u32) -> bool {
        let q = &self.quad;
        let off = q.mod_exp - self.t;
        let m = power(self.p, (level + off).min(q.mod_exp));
        let a1 = x1 % m;
        let a2 = x2 % m;
        let val = (q.a * a1 % m * a1 + q.b * a1 % m * a2 + q.c * a2 % m * a2) % m;
        if val != q.rhs % m {
            return false;
        }
        for l in &self.linear {
            let off = l.mod_exp.saturating_sub(self.t);
            let m = power(self.p, (level + off).min(l.mod_exp));
            if (l.c1 * (x1 % m) + l.c2 * (x2 % m)) % m != l.rhs % m {
                return false;
            }
        }
        true
    }
}

fn group_system(form: &LocalForm, t: u32) -> Result<ResidueSystem, Error> {
    let p = form.prime();
    let t_l = form.t_l();
    assert!(t >= t_l + 1, "group counts need t >= t_L + 1");
    let (quad_exp, a, b, c, rhs) = match form.kind() {
        JordanKind::Diagonal => {
            let exp = t + form.e();
            (exp, 1u128, 0u128, residue(form.alpha(), exp, p)?, 1u128)
        }
        JordanKind::Hyperbolic => (t, 0, 1, 0, 1),
        JordanKind::Even => {
            // Cleared by α: α x₁² + 2 x₁x₂ + β x₂² ≡ α (mod 2^{t+e}), which is
            // the determinant condition mod 2^{t + e − 𝔱_α} scaled through.
            let exp = t + form.e();
            (
                exp,
                residue(form.alpha(), exp, p)?,
                2,
                residue(form.beta(), exp, p)?,
                residue(form.alpha(), exp, p)?,
            )
        }
    };
    Ok(ResidueSystem {
        p,
        t,
        quad: QuadConstraint {
            a,
            b,
            c,
            rhs,
            mod_exp: quad_exp,
        },
        linear: Vec::new(),
    })
}

fn residue(x: &PadicApprox, exp: u32, p: u64) -> Result<u128, Error> {
    if x.precision() < exp {
        return Err(Error::InsufficientPrecision {
            p,
            available: x.precision(),
            needed: exp,
        });
    }
    Ok(x.residue_mod(exp))
}

fn stabilizer_system(form: &LocalForm, shift: &LocalShift, t: u32) -> Result<ResidueSystem, Error> {
    let p = form.prime();
    let t_m = shift.t_m;
    assert!(
        t >= t_m && t >= form.t_l() + 1,
        "stabilizer counts need t >= max(t_m, t_L + 1)"
    );
    let mut sys = group_system(form, t)?;
    if t_m == 0 {
        return Ok(sys);
    }
    let mexp = match form.kind() {
        JordanKind::Even => t_m + form.t_alpha(),
        _ => t_m,
    };
    let m = power(p, mexp);
    let r = |x: &PadicApprox| residue(x, mexp, p);
    let (s1, s2) = (r(&shift.s1)?, r(&shift.s2)?);
    // M_L(x₁,x₂)·(s₁,s₂)ᵀ ≡ (s₁,s₂)ᵀ, two linear rows (cleared by α for the
    // even shape).
    let rows = match form.kind() {
        JordanKind::Diagonal => {
            let alpha = r(form.alpha())?;
            [
                LinConstraint {
                    c1: s1,
                    c2: (m - alpha * s2 % m) % m,
                    rhs: s1,
                    mod_exp: mexp,
                },
                LinConstraint {
                    c1: s2,
                    c2: s1,
                    rhs: s2,
                    mod_exp: mexp,
                },
            ]
        }
        JordanKind::Hyperbolic => [
            LinConstraint {
                c1: s1,
                c2: 0,
                rhs: s1,
                mod_exp: mexp,
            },
            LinConstraint {
                c1: 0,
                c2: s2,
                rhs: s2,
                mod_exp: mexp,
            },
        ],
        JordanKind::Even => {
            let alpha = r(form.alpha())?;
            let beta = r(form.beta())?;
            [
                LinConstraint {
                    c1: alpha * s1 % m,
                    c2: (m - beta * s2 % m) % m,
                    rhs: alpha * s1 % m,
                    mod_exp: mexp,
                },
                LinConstraint {
                    c1: alpha * s2 % m,
                    c2: (alpha * s1 + 2 * s2) % m,
                    rhs: alpha * s2 % m,
                    mod_exp: mexp,
                },
            ]
        }
    };
    sys.linear.extend(rows);
    Ok(sys)
}

/// |O⁺(L, p^t)|: pairs (x₁,x₂) mod p^t whose parametrized matrix preserves
/// the form and has determinant ≡ 1 modulo p^{t+𝔱_L}.
pub fn count_group(form: &LocalForm, t: u32) -> Result<u128, Error> {
    Ok(group_system(form, t)?.count())
}

/// |O⁺(X, p^t)|: the subgroup fixing the shift vector modulo p^{t_m}.
pub fn count_stabilizer(form: &LocalForm, shift: &LocalShift, t: u32) -> Result<u128, Error> {
    Ok(stabilizer_system(form, shift, t)?.count())
}

/// Orders of O⁺(L, p^t) and O⁺(X, p^t) at one level, bundled for audits.
#[derive(Debug, Clone, Copy)]
pub struct GroupCount {
    pub t: u32,
    pub count_l: u128,
    pub count_x: u128,
}

pub fn group_counts(form: &LocalForm, shift: &LocalShift, t: u32) -> Result<GroupCount, Error> {
    let count_l = count_group(form, t)?;
    let count_x = count_stabilizer(form, shift, t)?;
    debug_assert!(count_x >= 1 && count_x <= count_l);
    Ok(GroupCount {
        t,
        count_l,
        count_x,
    })
}

/// The parametrized proper isometry M_L(x₁,x₂) of the normal form.
pub fn orthogonal_param(
    form: &LocalForm,
    x1: i128,
    x2: i128,
) -> Result<[[PadicApprox; 2]; 2], Error> {
    let p = form.prime();
    let prec = form.precision();
    let x1 = PadicApprox::from_int(p, prec, x1)?;
    let x2 = PadicApprox::from_int(p, prec, x2)?;
    let zero = PadicApprox::zero(p, prec)?;
    Ok(match form.kind() {
        JordanKind::Diagonal => {
            let top = form.alpha().mul(&x2)?.neg();
            [[x1, top], [x2, x1]]
        }
        JordanKind::Hyperbolic => [[x1, zero], [zero, x2]],
        JordanKind::Even => {
            // Divisions by α are exact: ord β ≥ ord α and ord 2 ≥ ord α.
            let two = PadicApprox::from_int(p, prec, 2)?;
            let top = form.beta().div_exact(form.alpha())?.mul(&x2)?.neg();
            let corner = x1.add(&two.div_exact(form.alpha())?.mul(&x2)?)?;
            [[x1, top], [x2, corner]]
        }
    })
}

/// Number of solutions (x₁,x₂) mod p^t of x₁² + αx₂² ≡ 1 (mod p^t), p odd.
pub fn count_system0(p: u64, alpha: i128, t: u32) -> u128 {
    assert!(p % 2 == 1 && t >= 1);
    let m = power(p, t);
    ResidueSystem {
        p,
        t,
        quad: QuadConstraint {
            a: 1,
            b: 0,
            c: alpha.rem_euclid(m as i128) as u128,
            rhs: 1,
            mod_exp: t,
        },
        linear: Vec::new(),
    }
    .count()
}

/// A brute-force count plus whether the hypotheses of the matching counting
/// lemma hold, i.e. whether the closed form is guaranteed to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SystemCount {
    pub count: u128,
    pub hypotheses_met: bool,
}

/// x₁² + αx₂² ≡ 1 (mod p^{t+e}), x₁ ≡ 1 − s·x₂ (mod p^{t_m}),
/// x₂ ≡ 0 (mod p^{max(t_m−𝔱_ν,0)}) with 𝔱_ν = ord(s²+α).
pub fn count_system1(p: u64, alpha: i128, s: i128, t_m: u32, t: u32) -> SystemCount {
    assert!(t >= t_m && t >= 1);
    let e = if p == 2 { 1u32 } else { 0 };
    let t_s = ord_int(p, s);
    let t_nu = ord_int(p, s * s + alpha);
    let hypotheses_met = t_m >= e + 1 && {
        // (2) |t_m − 𝔱_ν| ≥ e when 𝔱_s ≥ 𝔱_ν; (3) max(t_m,𝔱_ν) ≥ 𝔱_s + e + 1
        // otherwise.
        if t_s >= t_nu {
            match t_nu {
                Valuation::Finite(v) => (t_m as i64 - v).unsigned_abs() >= e as u64,
                Valuation::Infinity => true,
            }
        } else {
            let max = t_nu.max(Valuation::Finite(t_m as i64));
            let ts = t_s.finite().expect("t_s < t_nu is finite");
            max >= Valuation::Finite(ts + e as i64 + 1)
        }
    };
    let x2_exp = match t_nu {
        Valuation::Finite(v) => (t_m as i64 - v).max(0) as u32,
        Valuation::Infinity => 0,
    };
    let qm = power(p, t + e);
    let mm = power(p, t_m);
    let count = ResidueSystem {
        p,
        t,
        quad: QuadConstraint {
            a: 1,
            b: 0,
            c: alpha.rem_euclid(qm as i128) as u128,
            rhs: 1,
            mod_exp: t + e,
        },
        linear: alloc::vec![
            LinConstraint {
                c1: 1,
                c2: s.rem_euclid(mm as i128) as u128,
                rhs: 1,
                mod_exp: t_m,
            },
            LinConstraint {
                c1: 0,
                c2: 1,
                rhs: 0,
                mod_exp: x2_exp,
            },
        ],
    }
    .count();
    SystemCount {
        count,
        hypotheses_met,
    }
}

fn even_shape_ok(alpha: i128, beta: i128) -> bool {
    ord_int(2, alpha) == Valuation::Finite(1) && ord_int(2, beta) >= Valuation::Finite(1)
}

/// Dyadic even shape: x₁² + (2x₁x₂ + βx₂²)/α ≡ 1 (mod 2^{t+e−𝔱_α}) with
/// x₁ ≡ 1, x₂ ≡ 0 (mod 2^{t_m}); evaluated with denominators cleared by α.
pub fn count_system2(alpha: i128, beta: i128, t_m: u32, t: u32) -> SystemCount {
    assert!(t >= t_m && t >= 1);
    let (p, e) = (2u64, 1u32);
    let t_alpha = ord_int(2, alpha).min_with(2) as u32;
    let hypotheses_met = even_shape_ok(alpha, beta) && t_m >= e + 1 && t >= t_m + t_alpha;
    let qm = power(p, t + e);
    let red = |n: i128| n.rem_euclid(qm as i128) as u128;
    let count = ResidueSystem {
        p,
        t,
        quad: QuadConstraint {
            a: red(alpha),
            b: 2,
            c: red(beta),
            rhs: red(alpha),
            mod_exp: t + e,
        },
        linear: alloc::vec![
            LinConstraint {
                c1: 1,
                c2: 0,
                rhs: 1,
                mod_exp: t_m,
            },
            LinConstraint {
                c1: 0,
                c2: 1,
                rhs: 0,
                mod_exp: t_m,
            },
        ],
    }
    .count();
    SystemCount {
        count,
        hypotheses_met,
    }
}

/// Dyadic even shape with the general shift congruence:
/// x₁ ≡ 1 − (s + 2/α)x₂ (mod 2^{t_m}), x₂ ≡ 0 (mod 2^{max(t_m−𝔱_ν,0)}) where
/// 𝔱_ν = ord(s² + 2s/α + β/α); denominators cleared by α throughout.
pub fn count_system3(alpha: i128, beta: i128, s: i128, t_m: u32, t: u32) -> SystemCount {
    assert!(t >= t_m && t >= 1);
    let (p, e) = (2u64, 1u32);
    let t_alpha = ord_int(2, alpha).min_with(2) as u32;
    let hypotheses_met = even_shape_ok(alpha, beta) && t_m >= e + 1 && t >= t_m + t_alpha;
    // 𝔱_ν = ord(αs² + 2s + β) − 𝔱_α.
    let t_nu = match ord_int(2, alpha * s * s + 2 * s + beta) {
        Valuation::Finite(v) => Valuation::Finite(v - t_alpha as i64),
        Valuation::Infinity => Valuation::Infinity,
    };
    let x2_exp = match t_nu {
        Valuation::Finite(v) => (t_m as i64 - v).max(0) as u32,
        Valuation::Infinity => 0,
    };
    let qm = power(p, t + e);
    let mexp = t_m + t_alpha;
    let mm = power(p, mexp);
    let count = ResidueSystem {
        p,
        t,
        quad: QuadConstraint {
            a: alpha.rem_euclid(qm as i128) as u128,
            b: 2,
            c: beta.rem_euclid(qm as i128) as u128,
            rhs: alpha.rem_euclid(qm as i128) as u128,
            mod_exp: t + e,
        },
        linear: alloc::vec![
            LinConstraint {
                c1: alpha.rem_euclid(mm as i128) as u128,
                c2: (alpha * s + 2).rem_euclid(mm as i128) as u128,
                rhs: alpha.rem_euclid(mm as i128) as u128,
                mod_exp: mexp,
            },
            LinConstraint {
                c1: 0,
                c2: 1,
                rhs: 0,
                mod_exp: x2_exp,
            },
        ],
    }
    .count();
    SystemCount {
        count,
        hypotheses_met,
    }
}

/// An exact local density 0 < β ≤ 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BetaValue(Rat);

impl BetaValue {
    pub fn new(value: Rat) -> Self {
        assert!(
            value > Rat::new(0, 1) && value <= Rat::new(2, 1),
            "density out of range: {value}"
        );
        BetaValue(value)
    }

    pub fn value(&self) -> Rat {
        self.0
    }
}

fn prime_power_rat(p: u64, exp: i64) -> Rat {
    let pk = power(p, exp.unsigned_abs() as u32) as i128;
    if exp >= 0 {
        Rat::new(pk, 1)
    } else {
        Rat::new(1, pk)
    }
}

/// The closed-form local density β_p⁺(X;X), when one of the density theorems
/// applies; `HypothesisNotMet` otherwise. The uncovered regions are the
/// dyadic diagonal shape with t_m ≤ ord(α)+e (including the lattice density
/// t_m = 0) and the even shape with t_m ≤ e.
pub fn beta_closed(form: &LocalForm, shift: &LocalShift) -> Result<BetaValue, Error> {
    let p = form.prime();
    let t_m = shift.t_m;
    let e = form.e();
    match form.kind() {
        JordanKind::Diagonal => {
            if p != 2 {
                if t_m == 0 {
                    let eta = form.alpha().neg().eta()?;
                    return Ok(BetaValue::new(
                        Rat::new(1, 1) - Rat::new(eta as i128, p as i128),
                    ));
                }
            } else {
                let ord_alpha = form.alpha().valuation()?;
                if t_m < ord_alpha + e + 1 {
                    return Err(Error::HypothesisNotMet);
                }
            }
            // p^{−t_m + min(t_m, 𝔱_ν, 𝔱_s)}
            if form.precision() < t_m || shift.s1.precision() < t_m {
                return Err(Error::InsufficientPrecision {
                    p,
                    available: form.precision().min(shift.s1.precision()),
                    needed: t_m,
                });
            }
            let t_s = shift.t_s_capped(t_m);
            let t_nu = shift.t_nu_capped(form, t_m);
            let m = t_m.min(t_nu).min(t_s);
            Ok(BetaValue::new(prime_power_rat(p, m as i64 - t_m as i64)))
        }
        JordanKind::Hyperbolic => {
            if t_m == 0 {
                Ok(BetaValue::new(Rat::new(1, 1) - Rat::new(1, p as i128)))
            } else {
                Ok(BetaValue::new(prime_power_rat(p, -(t_m as i64))))
            }
        }
        JordanKind::Even => {
            if t_m >= e + 1 {
                Ok(BetaValue::new(prime_power_rat(p, -(t_m as i64))))
            } else {
                Err(Error::HypothesisNotMet)
            }
        }
    }
}

/// The stabilized ratio |O⁺(X,p^t)|/p^t, computed by brute force at a level
/// where the counting lemmas are already in their stable regime, and
/// certified by the factor-p growth check at the next level.
pub fn beta_empirical(form: &LocalForm, shift: &LocalShift) -> Result<(BetaValue, u32), Error> {
    let p = form.prime();
    let start = (shift.t_m + form.t_alpha() + form.e() + 1).max(form.t_l() + 1);
    let mut t = start;
    let mut n1 = count_stabilizer(form, shift, t)?;
    // Raising t twice more tolerates a late start, never a real divergence.
    for _ in 0..3 {
        let n2 = count_stabilizer(form, shift, t + 1)?;
        if n2 == p as u128 * n1 {
            let beta = Rat::new(n1 as i128, power(p, t) as i128);
            return Ok((BetaValue::new(beta), t + 1));
        }
        t += 1;
        n1 = n2;
    }
    Err(Error::NotStabilized { p, t_last: t })
}

/// How a reported density was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityMethod {
    Closed,
    Empirical,
}

/// Every local factor of the class-number formula at one prime, itemized.
#[derive(Debug, Clone)]
pub struct LocalIndexReport {
    pub p: u64,
    pub t_m: u32,
    pub beta_l: BetaValue,
    pub beta_x: BetaValue,
    /// β_L/β_X, a positive integer by the finiteness of the group index.
    pub index: u128,
    pub method: DensityMethod,
    /// Largest enumeration level used; 0 when both densities are closed-form.
    pub t_used: u32,
}

fn beta_with_fallback(
    form: &LocalForm,
    shift: &LocalShift,
) -> Result<(BetaValue, DensityMethod, u32), Error> {
    match beta_closed(form, shift) {
        Ok(b) => Ok((b, DensityMethod::Closed, 0)),
        Err(Error::HypothesisNotMet) => {
            let (b, t) = beta_empirical(form, shift)?;
            Ok((b, DensityMethod::Empirical, t))
        }
        Err(e) => Err(e),
    }
}

/// [O⁺(L_p) : O⁺(X_p)] = β_L/β_X, via the closed forms when their hypotheses
/// hold and the brute-force oracle otherwise.
pub fn local_index(form: &LocalForm, shift: &LocalShift) -> Result<LocalIndexReport, Error> {
    let p = form.prime();
    let trivial = LocalShift::trivial(p, form.precision())?;
    let (beta_l, ml, tl) = beta_with_fallback(form, &trivial)?;
    let (beta_x, mx, tx) = beta_with_fallback(form, shift)?;
    let ratio = beta_l.value() / beta_x.value();
    if !ratio.is_integer() || ratio <= Rat::new(0, 1) {
        return Err(Error::NonIntegralIndex { p });
    }
    let method = if ml == DensityMethod::Closed && mx == DensityMethod::Closed {
        DensityMethod::Closed
    } else {
        DensityMethod::Empirical
    };
    Ok(LocalIndexReport {
        p,
        t_m: shift.t_m,
        beta_l,
        beta_x,
        index: ratio.to_integer() as u128,
        method,
        t_used: tl.max(tx),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LocalForm;

    fn beta(n: i128, d: i128) -> BetaValue {
        BetaValue::new(Rat::new(n, d))
    }

    #[test]
    fn orthogonal_param_examples() {
        let f = LocalForm::diagonal(5, 6, 1, 1).unwrap();
        let m = orthogonal_param(&f, 0, 1).unwrap();
        let r = |x: &PadicApprox| x.residue();
        assert_eq!(
            [[r(&m[0][0]), r(&m[0][1])], [r(&m[1][0]), r(&m[1][1])]],
            [[0, power(5, 6) - 1], [1, 0]]
        );

        let f = LocalForm::hyperbolic(3, 6, 1).unwrap();
        let m = orthogonal_param(&f, 1, 1).unwrap();
        assert_eq!(
            [[r(&m[0][0]), r(&m[0][1])], [r(&m[1][0]), r(&m[1][1])]],
            [[1, 0], [0, 1]]
        );

        let f = LocalForm::even(8, 1, 2, 2).unwrap();
        let m = orthogonal_param(&f, 1, 0).unwrap();
        assert_eq!(r(&m[0][0]), 1);
        assert_eq!(r(&m[0][1]), 0);
        assert_eq!(r(&m[1][0]), 0);
        assert_eq!(r(&m[1][1]), 1);
    }

    #[test]
    fn count_group_examples() {
        let f = LocalForm::diagonal(3, 8, 1, 1).unwrap();
        assert_eq!(count_group(&f, 1).unwrap(), 4);

        let f = LocalForm::hyperbolic(5, 8, 1).unwrap();
        assert_eq!(count_group(&f, 2).unwrap(), 20);

        let f = LocalForm::even(8, 1, 2, 2).unwrap();
        assert_eq!(count_group(&f, 2).unwrap(), 6);
    }

    #[test]
    fn count_group_insufficient_precision() {
        let f = LocalForm::diagonal(3, 4, 1, 1).unwrap();
        assert!(matches!(
            count_group(&f, 5),
            Err(Error::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn count_stabilizer_examples() {
        // t_m = 0 degenerates to the full group count.
        let f = LocalForm::even(8, 1, 2, 2).unwrap();
        let s = LocalShift::trivial(2, 8).unwrap();
        assert_eq!(
            count_stabilizer(&f, &s, 2).unwrap(),
            count_group(&f, 2).unwrap()
        );

        let f = LocalForm::diagonal(5, 8, 1, 1).unwrap();
        let s = LocalShift::new(5, 8, 1, 1, 0).unwrap();
        assert_eq!(count_stabilizer(&f, &s, 2).unwrap(), 5);

        let f = LocalForm::hyperbolic(3, 8, 1).unwrap();
        let s = LocalShift::new(3, 8, 1, 1, 1).unwrap();
        assert_eq!(count_stabilizer(&f, &s, 2).unwrap(), 3);
    }

    #[test]
    fn system0_examples_and_closed_form() {
        assert_eq!(count_system0(5, 1, 1), 4);
        assert_eq!(count_system0(3, 1, 1), 4);
        assert_eq!(count_system0(5, 5, 2), 50);
        // Closed form p^t·(1 − η(−α)/p) on a grid.
        for p in [3u64, 5, 7] {
            for alpha in [1i128, 2, 3, 5, p as i128, 2 * p as i128] {
                for t in 1..=3u32 {
                    let eta = crate::arith::eta(p, -alpha).unwrap();
                    let expect = power(p, t) as i128 * (p as i128 - eta as i128) / p as i128;
                    assert_eq!(
                        count_system0(p, alpha, t) as i128,
                        expect,
                        "p={p} alpha={alpha} t={t}"
                    );
                }
            }
        }
    }

    #[test]
    fn system1_examples() {
        assert_eq!(
            count_system1(3, 1, 0, 1, 2),
            SystemCount {
                count: 3,
                hypotheses_met: true
            }
        );
        assert_eq!(count_system1(5, 1, 1, 1, 1).count, 1);
        assert_eq!(count_system1(2, 1, 0, 2, 2).count, 1);
    }

    #[test]
    fn system1_closed_form_agreement() {
        // N(p)^{t − t_m + min(t_m, 𝔱_ν, 𝔱_s)} whenever hypotheses (1)–(3) hold.
        for p in [2u64, 3, 5] {
            for alpha in [1i128, 2, 3, -1, p as i128] {
                for s in [0i128, 1, 2, p as i128] {
                    for t_m in 1..=3u32 {
                        for t in t_m..=(t_m + 2) {
                            let sc = count_system1(p, alpha, s, t_m, t);
                            if !sc.hypotheses_met {
                                continue;
                            }
                            let t_s = ord_int(p, s).min_with(t_m as i64);
                            let t_nu = ord_int(p, s * s + alpha).min_with(t_m as i64);
                            let min = (t_m as i64).min(t_nu).min(t_s);
                            let expect = power(p, (t as i64 - t_m as i64 + min) as u32);
                            assert_eq!(
                                sc.count, expect,
                                "p={p} alpha={alpha} s={s} t_m={t_m} t={t}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn system2_examples_and_closed_form() {
        assert_eq!(
            count_system2(2, 2, 2, 3),
            SystemCount {
                count: 2,
                hypotheses_met: true
            }
        );
        assert_eq!(count_system2(2, 2, 2, 4).count, 4);
        assert_eq!(count_system2(2, 4, 3, 4).count, 2);
        // Below t_m = e+1 the count is still produced but unflagged.
        assert!(!count_system2(2, 2, 1, 2).hypotheses_met);
        for (alpha, beta) in [(2i128, 2i128), (2, 4), (2, 6), (2, 10), (6, 2)] {
            for t_m in 2..=3u32 {
                for t in (t_m + 1)..=(t_m + 2) {
                    let sc = count_system2(alpha, beta, t_m, t);
                    assert!(sc.hypotheses_met);
                    assert_eq!(sc.count, power(2, t - t_m), "({alpha},{beta}) {t_m} {t}");
                }
            }
        }
    }

    #[test]
    fn system3_examples_and_closed_form() {
        assert_eq!(count_system3(2, 2, 0, 2, 3).count, 2);
        assert_eq!(count_system3(2, 2, 1, 2, 3).count, 2);
        assert_eq!(count_system3(2, 6, 1, 3, 4).count, 2);
        for (alpha, beta) in [(2i128, 2i128), (2, 4), (2, 6), (2, 10)] {
            for s in [0i128, 1, 2, 3, 5] {
                for t_m in 2..=3u32 {
                    for t in (t_m + 1)..=(t_m + 2) {
                        let sc = count_system3(alpha, beta, s, t_m, t);
                        assert!(sc.hypotheses_met);
                        assert_eq!(
                            sc.count,
                            power(2, t - t_m),
                            "({alpha},{beta}) s={s} {t_m} {t}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn kernels_agree_on_overlap() {
        // Force both kernels on the same systems and compare.
        let forms = [
            LocalForm::diagonal(3, 10, 1, 1).unwrap(),
            LocalForm::diagonal(3, 10, 1, 3).unwrap(),
            LocalForm::diagonal(2, 10, 1, 1).unwrap(),
            LocalForm::diagonal(2, 10, 1, 6).unwrap(),
            LocalForm::hyperbolic(3, 10, 1).unwrap(),
            LocalForm::even(10, 1, 2, 2).unwrap(),
            LocalForm::even(10, 1, 2, 4).unwrap(),
        ];
        for f in &forms {
            let p = f.prime();
            for t in (f.t_l() + 1)..=4 {
                let sys = group_system(f, t).unwrap();
                assert_eq!(
                    sys.count_direct(),
                    sys.count_lifted(),
                    "group p={p} t={t} kind={:?}",
                    f.kind()
                );
                for (s1, s2, t_m) in [(1, 0, 1), (0, 1, 1), (1, 1, 2), (1, 2, 2)] {
                    if t < t_m {
                        continue;
                    }
                    let s = LocalShift::new(p, 10, t_m, s1, s2).unwrap();
                    let sys = stabilizer_system(f, &s, t).unwrap();
                    assert_eq!(
                        sys.count_direct(),
                        sys.count_lifted(),
                        "stab p={p} t={t} kind={:?} s=({s1},{s2})/{t_m}",
                        f.kind()
                    );
                }
            }
        }
    }

    #[test]
    fn counts_are_well_defined_mod_pt() {
        // Replacing x₁ or x₂ by x ± p^t must not change the predicate.
        let forms = [
            LocalForm::diagonal(3, 12, 1, 3).unwrap(),
            LocalForm::diagonal(2, 12, 1, 2).unwrap(),
            LocalForm::hyperbolic(5, 12, 1).unwrap(),
            LocalForm::even(12, 1, 2, 2).unwrap(),
        ];
        for f in &forms {
            let p = f.prime() as u128;
            for t in (f.t_l() + 1)..=3 {
                let s = LocalShift::new(f.prime(), 12, 1, 1, 0).unwrap();
                let sys = stabilizer_system(f, &s, t).unwrap();
                let pt = power(f.prime(), t);
                for x1 in 0..pt.min(50) {
                    for x2 in 0..pt.min(50) {
                        let base = sys.passes_level(x1, x2, t);
                        assert_eq!(base, sys.passes_level(x1 + pt, x2, t));
                        assert_eq!(base, sys.passes_level(x1, x2 + pt, t));
                        assert_eq!(base, sys.passes_level(x1 + pt * (p - 1), x2, t));
                    }
                }
            }
        }
    }

    #[test]
    fn stabilization_from_first_admissible_level() {
        let cases: Vec<(LocalForm, LocalShift)> = alloc::vec![
            (
                LocalForm::diagonal(3, 12, 1, 1).unwrap(),
                LocalShift::new(3, 12, 2, 1, 0).unwrap(),
            ),
            (
                LocalForm::diagonal(2, 12, 1, 2).unwrap(),
                LocalShift::new(2, 12, 1, 1, 0).unwrap(),
            ),
            (
                LocalForm::diagonal(2, 12, 1, 4).unwrap(),
                LocalShift::new(2, 12, 1, 0, 1).unwrap(),
            ),
            (
                LocalForm::hyperbolic(5, 12, 1).unwrap(),
                LocalShift::new(5, 12, 1, 1, 1).unwrap(),
            ),
            (
                LocalForm::even(12, 1, 2, 2).unwrap(),
                LocalShift::new(2, 12, 2, 1, 0).unwrap(),
            ),
        ];
        for (f, s) in &cases {
            let p = f.prime() as u128;
            let t0 = s.t_m.max(f.t_l() + 1);
            for t in t0..(t0 + 3) {
                let gl = count_group(f, t).unwrap();
                let gl2 = count_group(f, t + 1).unwrap();
                assert_eq!(gl2, p * gl, "group p={} t={t}", f.prime());
                let gx = count_stabilizer(f, s, t).unwrap();
                let gx2 = count_stabilizer(f, s, t + 1).unwrap();
                assert_eq!(gx2, p * gx, "stab p={} t={t}", f.prime());
            }
        }
    }

    #[test]
    fn beta_closed_examples() {
        let f = LocalForm::diagonal(5, 10, 1, 1).unwrap();
        let s = LocalShift::trivial(5, 10).unwrap();
        assert_eq!(beta_closed(&f, &s).unwrap(), beta(4, 5));

        let s = LocalShift::new(5, 10, 2, 1, 0).unwrap();
        assert_eq!(beta_closed(&f, &s).unwrap(), beta(1, 25));

        let f = LocalForm::hyperbolic(3, 10, 1).unwrap();
        let s = LocalShift::new(3, 10, 2, 1, 1).unwrap();
        assert_eq!(beta_closed(&f, &s).unwrap(), beta(1, 9));
    }

    #[test]
    fn beta_closed_dyadic_gaps() {
        // Dyadic diagonal: no closed form below t_m = ord(α)+e+1, none at 0.
        let f = LocalForm::diagonal(2, 10, 1, 1).unwrap();
        let s = LocalShift::trivial(2, 10).unwrap();
        assert_eq!(beta_closed(&f, &s), Err(Error::HypothesisNotMet));
        let s = LocalShift::new(2, 10, 1, 1, 0).unwrap();
        assert_eq!(beta_closed(&f, &s), Err(Error::HypothesisNotMet));
        let s = LocalShift::new(2, 10, 2, 1, 0).unwrap();
        assert_eq!(beta_closed(&f, &s).unwrap(), beta(1, 4));
        // Even shape: closed from t_m = e+1 on; oracle-only below.
        let f = LocalForm::even(10, 1, 2, 2).unwrap();
        let s = LocalShift::trivial(2, 10).unwrap();
        assert_eq!(beta_closed(&f, &s), Err(Error::HypothesisNotMet));
        let s = LocalShift::new(2, 10, 2, 1, 0).unwrap();
        assert_eq!(beta_closed(&f, &s).unwrap(), beta(1, 4));
    }

    #[test]
    fn beta_empirical_examples() {
        let f = LocalForm::diagonal(3, 12, 1, 1).unwrap();
        let s = LocalShift::trivial(3, 12).unwrap();
        assert_eq!(beta_empirical(&f, &s).unwrap().0, beta(4, 3));

        let f = LocalForm::even(12, 1, 2, 2).unwrap();
        let s = LocalShift::trivial(2, 12).unwrap();
        assert_eq!(beta_empirical(&f, &s).unwrap().0, beta(3, 2));

        let f = LocalForm::diagonal(2, 12, 1, 1).unwrap();
        let s = LocalShift::trivial(2, 12).unwrap();
        assert_eq!(beta_empirical(&f, &s).unwrap().0, beta(1, 1));
    }

    #[test]
    fn local_index_examples() {
        let f = LocalForm::diagonal(5, 12, 1, 1).unwrap();
        let s = LocalShift::new(5, 12, 1, 1, 0).unwrap();
        let r = local_index(&f, &s).unwrap();
        assert_eq!(r.index, 4);
        assert_eq!(r.method, DensityMethod::Closed);

        let f = LocalForm::diagonal(3, 12, 1, 1).unwrap();
        let s = LocalShift::new(3, 12, 2, 1, 0).unwrap();
        let r = local_index(&f, &s).unwrap();
        assert_eq!(r.index, 12);
        assert_eq!(r.beta_l, beta(4, 3));
        assert_eq!(r.beta_x, beta(1, 9));

        let f = LocalForm::even(12, 1, 2, 2).unwrap();
        let s = LocalShift::trivial(2, 12).unwrap();
        let r = local_index(&f, &s).unwrap();
        assert_eq!(r.index, 1);
    }

    #[test]
    fn minimum_bound_invariant() {
        // min(t_m, 𝔱_ν, 𝔱_s) ≤ ord(α) + e + 1 for diagonal shapes.
        for p in [2u64, 3, 5] {
            for alpha in [
                1i128,
                -1,
                2,
                p as i128,
                (p * p) as i128,
                -(p as i128 * p as i128),
            ] {
                let f = LocalForm::diagonal(p, 14, 1, alpha).unwrap();
                let ord_alpha = ord_int(p, alpha).finite().unwrap() as u32;
                for t_m in 1..=4u32 {
                    for (s1, s2) in [
                        (1i128, 0i128),
                        (0, 1),
                        (1, 1),
                        (p as i128, 1),
                        (1, p as i128),
                        ((p * p) as i128, 1),
                    ] {
                        let s = LocalShift::new(p, 14, t_m, s1, s2).unwrap();
                        let t_s = s.t_s_capped(t_m);
                        let t_nu = s.t_nu_capped(&f, t_m);
                        let min = t_m.min(t_nu).min(t_s);
                        assert!(
                            min <= ord_alpha + f.e() + 1,
                            "p={p} alpha={alpha} t_m={t_m} s=({s1},{s2})"
                        );
                    }
                }
            }
        }
    }
}
