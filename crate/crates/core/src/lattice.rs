//! Shifted binary lattices over ℤ and their local Jordan canonical forms.
//!
//! A lattice L = ℤ² carries the integral symmetric bilinear form given by a
//! Gram matrix G; a shifted lattice is X = L + ν with ν ∈ ℚ². At every prime
//! p the completion L ⊗ ℤ_p admits a basis in which the Gram matrix is one of
//!
//!   (1) c·D(1,α)    diagonal,
//!   (2) c·A(0,0)    hyperbolic plane (p = 2 for integral global input),
//!   (3) c·A(α,β)    even type with 1 ≤ ord(α) ≤ min(ord(2), ord(β)),
//!
//! where D is diagonal and A(α,β) = [[α,1],[1,β]]. `jordan_form` computes the
//! type together with the basis change U certifying Uᵀ·G·U ≡ c·J (mod p^N),
//! and `localize_shift` rewrites ν in that basis as (s₁e₁+s₂e₂)/p^{t_m}.

use crate::arith::{ord, ord_int, PadicApprox, Valuation};
use crate::{Error, Rat};
use num_integer::{Integer, Roots};
use num_traits::Zero;

/// Integral symmetric 2×2 bilinear form: entries B(e₁,e₁), B(e₁,e₂), B(e₂,e₂).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GramMatrix {
    pub a11: i64,
    pub a12: i64,
    pub a22: i64,
}

impl GramMatrix {
    pub fn new(a11: i64, a12: i64, a22: i64) -> Result<Self, Error> {
        let g = GramMatrix { a11, a12, a22 };
        if g.det() == 0 {
            return Err(Error::DegenerateForm);
        }
        Ok(g)
    }

    pub fn det(&self) -> i128 {
        self.a11 as i128 * self.a22 as i128 - self.a12 as i128 * self.a12 as i128
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a11 > 0 && self.det() > 0
    }

    /// Whether −det(V) is *not* a rational square (the non-degeneracy
    /// hypothesis of the class-number machinery). Automatic for positive
    /// definite forms.
    pub fn det_condition(&self) -> bool {
        let minus_det = -self.det();
        if minus_det < 0 {
            return true;
        }
        let r = minus_det.sqrt();
        r * r != minus_det
    }

    /// gcd of the entries; the rescaled Gram G/g has scale exactly ℤ.
    pub fn scale_content(&self) -> u64 {
        let g = self
            .a11
            .unsigned_abs()
            .gcd(&self.a12.unsigned_abs())
            .gcd(&self.a22.unsigned_abs());
        debug_assert!(g > 0);
        g
    }

    pub fn scaled(&self, k: i64) -> Result<Self, Error> {
        GramMatrix::new(self.a11 * k, self.a12 * k, self.a22 * k)
    }

    /// Q(x v) for an integer vector v.
    pub fn quad(&self, v: [i64; 2]) -> i128 {
        let (x, y) = (v[0] as i128, v[1] as i128);
        self.a11 as i128 * x * x + 2 * self.a12 as i128 * x * y + self.a22 as i128 * y * y
    }

    fn bilinear(&self, v: [i64; 2], w: [i64; 2]) -> i128 {
        let (x1, y1) = (v[0] as i128, v[1] as i128);
        let (x2, y2) = (w[0] as i128, w[1] as i128);
        self.a11 as i128 * x1 * x2
            + self.a12 as i128 * (x1 * y2 + x2 * y1)
            + self.a22 as i128 * y1 * y2
    }
}

/// A coset X = L + ν, with ν in lattice coordinates reduced into [0,1)².
///
/// Shifts differing by lattice vectors describe the same X, so two values
/// with such shifts compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftedLattice {
    pub gram: GramMatrix,
    shift: (Rat, Rat),
}

fn reduce_mod_one(x: Rat) -> Rat {
    let f = x.floor();
    x - f
}

impl ShiftedLattice {
    pub fn new(gram: GramMatrix, shift: (Rat, Rat)) -> Self {
        ShiftedLattice {
            gram,
            shift: (reduce_mod_one(shift.0), reduce_mod_one(shift.1)),
        }
    }

    pub fn lattice(gram: GramMatrix) -> Self {
        ShiftedLattice::new(gram, (Rat::zero(), Rat::zero()))
    }

    pub fn shift(&self) -> (Rat, Rat) {
        self.shift
    }

    /// Smallest m ≥ 1 with m·ν ∈ ℤ²: the lcm of the shift denominators.
    pub fn conductor(&self) -> u64 {
        let d1 = *self.shift.0.denom() as u64;
        let d2 = *self.shift.1.denom() as u64;
        d1.lcm(&d2)
    }
}

/// The three local normal-form shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JordanKind {
    /// c·D(1,α)
    Diagonal,
    /// c·A(0,0)
    Hyperbolic,
    /// c·A(α,β), 1 ≤ ord(α) ≤ min(ord(2), ord(β)); dyadic only
    Even,
}

impl JordanKind {
    /// The conventional index 1/2/3 of the shape.
    pub fn index(&self) -> u8 {
        match self {
            JordanKind::Diagonal => 1,
            JordanKind::Hyperbolic => 2,
            JordanKind::Even => 3,
        }
    }
}

/// Jordan canonical shape of L ⊗ ℤ_p plus the basis change that certifies it.
#[derive(Debug, Clone)]
pub struct LocalForm {
    p: u64,
    prec: u32,
    kind: JordanKind,
    c: PadicApprox,
    alpha: Option<PadicApprox>,
    beta: Option<PadicApprox>,
    basis: [[PadicApprox; 2]; 2],
}

impl LocalForm {
    /// Diagonal form c·D(1,α) at any prime, identity basis.
    pub fn diagonal(p: u64, prec: u32, c: i128, alpha: i128) -> Result<Self, Error> {
        Ok(LocalForm {
            p,
            prec,
            kind: JordanKind::Diagonal,
            c: PadicApprox::from_int(p, prec, c)?,
            alpha: Some(PadicApprox::from_int(p, prec, alpha)?),
            beta: None,
            basis: identity(p, prec)?,
        })
    }

    /// Hyperbolic plane c·A(0,0). The Jordan algorithm only emits this shape
    /// at p = 2, but the type-(2) density formulas hold at every residue
    /// characteristic, so direct construction at odd p is allowed for the
    /// oracle grids.
    pub fn hyperbolic(p: u64, prec: u32, c: i128) -> Result<Self, Error> {
        Ok(LocalForm {
            p,
            prec,
            kind: JordanKind::Hyperbolic,
            c: PadicApprox::from_int(p, prec, c)?,
            alpha: None,
            beta: None,
            basis: identity(p, prec)?,
        })
    }

    /// Even type c·A(α,β) over ℤ₂ with 1 ≤ ord(α) ≤ min(1, ord(β)).
    pub fn even(prec: u32, c: i128, alpha: i128, beta: i128) -> Result<Self, Error> {
        let ta = ord_int(2, alpha);
        if ta != Valuation::Finite(1) || ord_int(2, beta) < Valuation::Finite(1) {
            return Err(Error::HypothesisNotMet);
        }
        Ok(LocalForm {
            p: 2,
            prec,
            kind: JordanKind::Even,
            c: PadicApprox::from_int(2, prec, c)?,
            alpha: Some(PadicApprox::from_int(2, prec, alpha)?),
            beta: Some(PadicApprox::from_int(2, prec, beta)?),
            basis: identity(2, prec)?,
        })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn kind(&self) -> JordanKind {
        self.kind
    }

    pub fn scale(&self) -> &PadicApprox {
        &self.c
    }

    /// α of shapes (1) and (3).
    pub fn alpha(&self) -> &PadicApprox {
        self.alpha.as_ref().expect("alpha on diagonal/even form")
    }

    /// β of shape (3).
    pub fn beta(&self) -> &PadicApprox {
        self.beta.as_ref().expect("beta on even form")
    }

    pub fn basis_change(&self) -> &[[PadicApprox; 2]; 2] {
        &self.basis
    }

    /// ord_p(2): 1 at the dyadic place, 0 elsewhere.
    pub fn e(&self) -> u32 {
        if self.p == 2 {
            1
        } else {
            0
        }
    }

    /// ord(α): 0 for the hyperbolic shape (no α), clamped at the carried
    /// precision when uncertifiable.
    pub fn t_alpha(&self) -> u32 {
        match self.kind {
            JordanKind::Hyperbolic => 0,
            _ => self.alpha().valuation().unwrap_or(self.prec),
        }
    }

    /// The congruence offset 𝔱_L of the finite orthogonal groups:
    /// e, 0, e − ord(α) for shapes (1), (2), (3).
    pub fn t_l(&self) -> u32 {
        match self.kind {
            JordanKind::Diagonal => self.e(),
            JordanKind::Hyperbolic => 0,
            JordanKind::Even => self.e() - self.t_alpha(),
        }
    }

    /// The Gram matrix c·J of the normal form, at carried precision.
    pub fn jordan_gram(&self) -> [[PadicApprox; 2]; 2] {
        let zero = PadicApprox::zero(self.p, self.prec).expect("prec within cap");
        match self.kind {
            JordanKind::Diagonal => {
                let ca = self.c.mul(self.alpha()).expect("same prime");
                [[self.c, zero], [zero, ca]]
            }
            JordanKind::Hyperbolic => [[zero, self.c], [self.c, zero]],
            JordanKind::Even => {
                let ca = self.c.mul(self.alpha()).expect("same prime");
                let cb = self.c.mul(self.beta()).expect("same prime");
                [[ca, self.c], [self.c, cb]]
            }
        }
    }

    /// Check Uᵀ·G·U ≡ c·J (mod p^N) and det(U) ∈ ℤ_p^×.
    pub fn certifies(&self, g: &GramMatrix) -> bool {
        let prec = self.prec;
        let emb = |n: i128| PadicApprox::from_int(self.p, prec, n).expect("prec within cap");
        let gm = [[emb(g.a11 as i128), emb(g.a12 as i128)], [
            emb(g.a12 as i128),
            emb(g.a22 as i128),
        ]];
        let u = &self.basis;
        let det_u = u[0][0]
            .mul(&u[1][1])
            .and_then(|x| x.sub(&u[0][1].mul(&u[1][0])?))
            .expect("same prime");
        if !det_u.is_unit() {
            return false;
        }
        let gu = mat_mul(&gm, u);
        let ut = [[u[0][0], u[1][0]], [u[0][1], u[1][1]]];
        let utgu = mat_mul(&ut, &gu);
        let cj = self.jordan_gram();
        let min_prec = utgu
            .iter()
            .flatten()
            .chain(cj.iter().flatten())
            .map(|x| x.precision())
            .min()
            .unwrap();
        (0..2).all(|i| {
            (0..2).all(|j| utgu[i][j].truncate(min_prec) == cj[i][j].truncate(min_prec))
        })
    }
}

fn identity(p: u64, prec: u32) -> Result<[[PadicApprox; 2]; 2], Error> {
    let one = PadicApprox::one(p, prec)?;
    let zero = PadicApprox::zero(p, prec)?;
    Ok([[one, zero], [zero, one]])
}

fn mat_mul(a: &[[PadicApprox; 2]; 2], b: &[[PadicApprox; 2]; 2]) -> [[PadicApprox; 2]; 2] {
    let mut out = *a;
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0]
                .mul(&b[0][j])
                .and_then(|x| x.add(&a[i][1].mul(&b[1][j])?))
                .expect("same prime");
        }
    }
    out
}

/// Local Jordan canonical form of an integral Gram matrix at p, certified
/// modulo p^N.
///
/// The algorithm: among Q(e₁), Q(e₂), Q(e₁+e₂) pick v with
/// ord Q(v) ≤ ord B(e₁,e₂) and complete the square (always possible at odd
/// p). Otherwise p = 2 and the off-diagonal strictly minimizes the valuation:
/// scaling it to a unit gives A(α′,β′) with ord α′ ≥ 1; ord α′ = 1 is shape
/// (3) as-is, and ord α′ ≥ 2 forces 1 − α′β′ ≡ 1 (mod 8), the square class
/// of the hyperbolic plane, so an isotropic basis is constructed by Hensel
/// lifting.
pub fn jordan_form(g: &GramMatrix, p: u64, prec: u32) -> Result<LocalForm, Error> {
    if g.det() == 0 {
        return Err(Error::DegenerateForm);
    }
    let e = if p == 2 { 1 } else { 0 };
    let ord_det = ord_int(p, g.det()).finite().expect("nonzero det") as u32;
    let needed = ord_det + e + 4;
    if prec < needed {
        return Err(Error::InsufficientPrecision {
            p,
            available: prec,
            needed,
        });
    }

    let ord12 = ord_int(p, g.a12 as i128);
    let candidates: [([i64; 2], [i64; 2]); 3] =
        [([1, 0], [0, 1]), ([0, 1], [1, 0]), ([1, 1], [0, 1])];
    let pick = candidates
        .iter()
        .find(|(v, _)| ord_int(p, g.quad(*v)) <= ord12);

    match pick {
        Some(&(v, w)) => split_diagonal(g, p, prec, v, w),
        None => off_diagonal_dominant(g, p, prec),
    }
}

/// Case (a): complete the square on a vector of minimal valuation.
fn split_diagonal(
    g: &GramMatrix,
    p: u64,
    prec: u32,
    v: [i64; 2],
    w: [i64; 2],
) -> Result<LocalForm, Error> {
    let qv = g.quad(v);
    let bvw = g.bilinear(v, w);
    let ord_qv = ord_int(p, qv).finite().expect("minimal vector nonzero") as u32;
    // mu = B(v,w)/Q(v) ∈ ℤ_p since ord Q(v) ≤ ord B(v,w) by the choice of v;
    // the division consumes ord Q(v) digits of working precision.
    let cap = crate::arith::max_precision(p);
    let work = (prec + ord_qv + 4).min(cap);
    if work < prec + ord_qv {
        return Err(Error::PrecisionCapExceeded {
            p,
            requested: prec + ord_qv,
            cap,
        });
    }
    let emb = |n: i128| PadicApprox::from_int(p, work, n);
    let mu = emb(bvw)?.div_exact(&emb(qv)?)?;

    // Columns of U: v and w − μ·v.
    let col_v = [emb(v[0] as i128)?, emb(v[1] as i128)?];
    let col_w = [
        emb(w[0] as i128)?.sub(&mu.mul_int(v[0] as i128)?)?,
        emb(w[1] as i128)?.sub(&mu.mul_int(v[1] as i128)?)?,
    ];

    // Diagonal entries: d1 = Q(v), d2 = det(G)/Q(v); both are exact
    // p-integral rationals, as are the normalized quotients.
    let d1 = Rat::new(qv, 1);
    let d2 = Rat::new(g.det(), qv);
    let (c, alpha, swap) = if ord(p, &d1) <= ord(p, &d2) {
        (d1, d2 / d1, false)
    } else {
        (d2, d1 / d2, true)
    };
    let ord_alpha = ord(p, &alpha);
    debug_assert!(ord_alpha >= Valuation::Finite(0));
    if ord_alpha >= Valuation::Finite(prec as i64) {
        return Err(Error::InsufficientPrecision {
            p,
            available: prec,
            needed: ord_alpha.min_with(i64::MAX) as u32 + 1,
        });
    }

    let basis = if swap {
        [[col_w[0], col_v[0]], [col_w[1], col_v[1]]]
    } else {
        [[col_v[0], col_w[0]], [col_v[1], col_w[1]]]
    };
    let truncated = |x: &PadicApprox| x.truncate(prec.min(x.precision()));
    let form = LocalForm {
        p,
        prec,
        kind: JordanKind::Diagonal,
        c: PadicApprox::from_rat(p, prec, &c)?,
        alpha: Some(PadicApprox::from_rat(p, prec, &alpha)?),
        beta: None,
        basis: [
            [truncated(&basis[0][0]), truncated(&basis[0][1])],
            [truncated(&basis[1][0]), truncated(&basis[1][1])],
        ],
    };
    debug_assert!(form.certifies(g));
    Ok(form)
}

/// Case (b): ord B(e₁,e₂) strictly smaller than every ord Q. Only possible at
/// p = 2, where 2·B(e₁,e₂) inside Q(e₁+e₂) can cancel.
fn off_diagonal_dominant(g: &GramMatrix, p: u64, prec: u32) -> Result<LocalForm, Error> {
    if p != 2 {
        // At odd p, ord Q(e₁+e₂) = ord(2a₁₂) = ord(a₁₂) whenever both
        // diagonal valuations exceed ord(a₁₂), so case (a) always applies.
        unreachable!("off-diagonal dominance is impossible at odd p");
    }
    // G = c·A(α′,β′) with c = a₁₂, α′ = a₁₁/a₁₂, β′ = a₂₂/a₁₂, both of
    // positive valuation. Swap the basis so ord α′ ≤ ord β′.
    let c = g.a12 as i128;
    let ord_a = ord_int(2, g.a11 as i128) + ord_int(2, c).neg_of();
    let ord_b = ord_int(2, g.a22 as i128) + ord_int(2, c).neg_of();
    let swap = ord_a > ord_b;
    let (alpha_rat, beta_rat, ord_alpha) = if swap {
        (
            Rat::new(g.a22 as i128, c),
            Rat::new(g.a11 as i128, c),
            ord_b,
        )
    } else {
        (
            Rat::new(g.a11 as i128, c),
            Rat::new(g.a22 as i128, c),
            ord_a,
        )
    };
    debug_assert!(ord_alpha >= Valuation::Finite(1));

    // Newton iterations and the divisions by 2 consume at most ~12 digits of
    // working precision at p = 2.
    let cap = crate::arith::max_precision(2);
    let work = (prec + 24).min(cap);
    if work < prec + 12 {
        return Err(Error::PrecisionCapExceeded {
            p: 2,
            requested: prec + 12,
            cap,
        });
    }
    // Columns of the constructed matrices are expressed in the (possibly
    // swapped) basis (ê₁,ê₂); returning to the original basis permutes the
    // coordinate rows.
    let swap_rows = |m: [[PadicApprox; 2]; 2]| if swap { [m[1], m[0]] } else { m };

    if ord_alpha == Valuation::Finite(1) {
        // Shape (3) as-is: α = 2·unit, no further reduction of β.
        let form = LocalForm {
            p: 2,
            prec,
            kind: JordanKind::Even,
            c: PadicApprox::from_int(2, prec, c)?,
            alpha: Some(PadicApprox::from_rat(2, prec, &alpha_rat)?),
            beta: Some(PadicApprox::from_rat(2, prec, &beta_rat)?),
            basis: swap_rows(identity(2, prec)?),
        };
        debug_assert!(form.certifies(g));
        return Ok(form);
    }

    // ord α′ ≥ 2: then α′β′ ≡ 0 (mod 16), so −det(A(α′,β′)) = 1 − α′β′ ≡ 1
    // (mod 8) is a unit square and the plane is hyperbolic. (The other even
    // unimodular shape A(2,2) has −det ≡ 5 (mod 8) and cannot occur here.)
    let alpha_w = PadicApprox::from_rat(2, work, &alpha_rat)?;
    let beta_w = PadicApprox::from_rat(2, work, &beta_rat)?;
    debug_assert_eq!(
        alpha_w.mul(&beta_w).expect("same prime").residue_mod(3),
        0,
        "ord(alpha'), ord(beta') >= 2 forces alpha'*beta' ≡ 0 mod 8"
    );

    // Isotropic vector v = ê₁ + x·ê₂ with β′x² + 2x + α′ ≡ 0, by Newton from
    // x₀ = −α′/2 (f(x₀) = β′(α′/2)² has valuation ≥ 4 > 2·ord f′ = 2).
    let two = PadicApprox::from_int(2, work, 2)?;
    let mut x = alpha_w.div_exact(&two)?.neg();
    for _ in 0..64 {
        let fx = beta_w
            .mul(&x)?
            .mul(&x)?
            .add(&x.mul_int(2)?)?
            .add(&alpha_w)?;
        if fx.is_zero_residue() {
            break;
        }
        let dfx = beta_w.mul(&x)?.mul_int(2)?.add(&two)?;
        x = x.sub(&fx.div_exact(&dfx)?)?;
    }
    // w = u·v + z·ê₂ with B(v,ê₂) = 1 + β′x =: b, z = b⁻¹ (so B(v,w) ≡ 1)
    // and u = −z²β′/2 (so Q(w) ≡ 0).
    let b = beta_w.mul(&x)?.add(&PadicApprox::one(2, work)?)?;
    let z = b.invert()?;
    let u = z.mul(&z)?.mul(&beta_w)?.div_exact(&two)?.neg();

    // Columns in the (possibly swapped) scaled basis: v = (1, x), w = (u, ux+z).
    let one = PadicApprox::one(2, work)?;
    let cols = [[one, u], [x, u.mul(&x)?.add(&z)?]];
    let basis = swap_rows(cols);
    let truncated = |m: &[[PadicApprox; 2]; 2]| {
        let t = |x: &PadicApprox| x.truncate(prec.min(x.precision()));
        [[t(&m[0][0]), t(&m[0][1])], [t(&m[1][0]), t(&m[1][1])]]
    };
    let form = LocalForm {
        p: 2,
        prec,
        kind: JordanKind::Hyperbolic,
        c: PadicApprox::from_int(2, prec, c)?,
        alpha: None,
        beta: None,
        basis: truncated(&basis),
    };
    debug_assert!(form.certifies(g));
    Ok(form)
}

trait ValuationNeg {
    fn neg_of(self) -> Valuation;
}

impl ValuationNeg for Valuation {
    fn neg_of(self) -> Valuation {
        match self {
            Valuation::Finite(v) => Valuation::Finite(-v),
            Valuation::Infinity => Valuation::Infinity,
        }
    }
}

/// The shift ν written in the Jordan basis: ν = (s₁e₁ + s₂e₂)/p^{t_m} with
/// s₁, s₂ ∈ ℤ_p and, when t_m ≥ 1, at least one of them a unit.
#[derive(Debug, Clone)]
pub struct LocalShift {
    pub t_m: u32,
    pub s1: PadicApprox,
    pub s2: PadicApprox,
}

impl LocalShift {
    /// The trivial shift: X_p = L_p.
    pub fn trivial(p: u64, prec: u32) -> Result<Self, Error> {
        Ok(LocalShift {
            t_m: 0,
            s1: PadicApprox::zero(p, prec)?,
            s2: PadicApprox::zero(p, prec)?,
        })
    }

    pub fn new(p: u64, prec: u32, t_m: u32, s1: i128, s2: i128) -> Result<Self, Error> {
        Ok(LocalShift {
            t_m,
            s1: PadicApprox::from_int(p, prec, s1)?,
            s2: PadicApprox::from_int(p, prec, s2)?,
        })
    }

    /// 𝔱_s = ord(s₁), clamped at the carried precision.
    pub fn t_s_capped(&self, cap: u32) -> u32 {
        self.s1.valuation_capped(cap)
    }

    /// 𝔱_ν = ord(s₁² + α·s₂²) for a diagonal form, clamped at `cap`.
    pub fn t_nu_capped(&self, form: &LocalForm, cap: u32) -> u32 {
        let q = self
            .s1
            .mul(&self.s1)
            .and_then(|a| a.add(&form.alpha().mul(&self.s2)?.mul(&self.s2)?))
            .expect("same prime");
        q.valuation_capped(cap.min(q.precision()))
    }
}

/// Rewrite the shift of X in the Jordan basis of `form` (which must be the
/// Jordan form of X.gram at the same prime): t_m = ord_p(conductor) and
/// (s₁,s₂) = p^{t_m}·U⁻¹·ν reduced modulo p^N.
pub fn localize_shift(x: &ShiftedLattice, form: &LocalForm) -> Result<LocalShift, Error> {
    let p = form.prime();
    let prec = form.precision();
    let m = x.conductor();
    let t_m = ord_int(p, m as i128).finite().expect("conductor >= 1") as u32;
    if prec < t_m + 4 {
        return Err(Error::InsufficientPrecision {
            p,
            available: prec,
            needed: t_m + 4,
        });
    }

    // p^{t_m}·ν is p-integral: the conductor clears exactly the p-part of the
    // shift denominators.
    let scale = Rat::new(crate::arith::power(p, t_m) as i128, 1);
    let (n1, n2) = x.shift();
    let v1 = PadicApprox::from_rat(p, prec, &(n1 * scale))?;
    let v2 = PadicApprox::from_rat(p, prec, &(n2 * scale))?;

    // U⁻¹ = adj(U)/det(U); det(U) is a unit by construction.
    let u = form.basis_change();
    let det = u[0][0].mul(&u[1][1])?.sub(&u[0][1].mul(&u[1][0])?)?;
    let det_inv = det.invert()?;
    let s1 = u[1][1].mul(&v1)?.sub(&u[0][1].mul(&v2)?)?.mul(&det_inv)?;
    let s2 = u[0][0].mul(&v2)?.sub(&u[1][0].mul(&v1)?)?.mul(&det_inv)?;
    debug_assert!(
        t_m == 0 || s1.is_unit() || s2.is_unit(),
        "p^t_m || conductor forces a unit coordinate"
    );
    Ok(LocalShift { t_m, s1, s2 })
}
