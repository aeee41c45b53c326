//! Effectivity, nefness, bigness, spannedness and k-very ampleness.
//!
//! On `S_r` with `r >= 2` the cone of curves is spanned by the exceptional
//! classes, so nefness is `L.xi >= 0` for every `xi` in `I_r`. On `S_1` the
//! ruling `l - e_1` has to be added. k-very ampleness is the same test with
//! `0` replaced by `k`, except for three named anticanonical classes:
//! `-k K` and `-(k+1) K` on `S_8`, and `-K` on `S_7` when `k = 1`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::enumerate::exceptional_type_census;
use crate::error::{Error, Result};
use crate::lattice::{anticanonical_class, PicardClass, Rank, TypePattern};
use crate::surface::SurfaceContext;

/// Anticanonical classes that pass every intersection test but are not
/// k-very ample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExceptionFlag {
    /// `L = -k K` on `S_8`.
    MinusKKS8,
    /// `L = -(k+1) K` on `S_8`.
    MinusK1KS8,
    /// `L = -K` on `S_7` with `k = 1`.
    MinusKS7K1,
}

impl ExceptionFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            ExceptionFlag::MinusKKS8 => "minus_kK_S8",
            ExceptionFlag::MinusK1KS8 => "minus_k1K_S8",
            ExceptionFlag::MinusKS7K1 => "minus_K_S7_k1",
        }
    }

    /// Which exception, if any, `class` is at level `k`.
    pub fn detect(class: &PicardClass, k: i64) -> Option<ExceptionFlag> {
        let rank = class.rank();
        let minus_k = anticanonical_class(rank);
        match rank.get() {
            8 if *class == k * minus_k => Some(ExceptionFlag::MinusKKS8),
            8 if *class == (k + 1) * minus_k => Some(ExceptionFlag::MinusK1KS8),
            7 if k == 1 && *class == minus_k => Some(ExceptionFlag::MinusKS7K1),
            _ => None,
        }
    }
}

impl fmt::Display for ExceptionFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for ExceptionFlag {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// The inequalities `L.xi >= k` for all `xi` of one type, written in the
/// coordinates `(a; b)`: `a0 * a - sum m_t b_{i_t} >= k` over all choices of
/// distinct indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalityFamily {
    pub rank: Rank,
    pub source: TypePattern,
}

impl InequalityFamily {
    /// Smallest value of `L.xi` over the permutation orbit of the source
    /// type.
    ///
    /// By the rearrangement inequality the orbit maximum of
    /// `sum m_t b_{i_t}` pairs multiplicities and coefficients in the same
    /// order, so no orbit needs to be listed.
    pub fn min_value(&self, class: &PicardClass) -> i64 {
        debug_assert_eq!(class.rank(), self.rank);
        let r = self.rank.get();
        let mut mult = self.source.expanded();
        mult.resize(r, 0);
        mult.sort_unstable_by(|x, y| y.cmp(x));
        let mut b = class.b().to_vec();
        b.sort_unstable_by(|x, y| y.cmp(x));
        let paired: i64 = mult.iter().zip(&b).map(|(m, x)| m * x).sum();
        self.source.a0 * class.a() - paired
    }

    pub fn holds(&self, class: &PicardClass, k: i64) -> bool {
        self.min_value(class) >= k
    }

    /// Human-readable form with a symbolic `k`, or `0` for nefness.
    pub fn render(&self, with_k: bool) -> String {
        let mut lhs = Vec::new();
        let mut rhs = Vec::new();
        match self.source.a0 {
            0 => {}
            1 => lhs.push("a".to_string()),
            c => lhs.push(format!("{c}a")),
        }
        let mut letters = ["i", "j", "p", "q", "s", "t", "u", "v"].into_iter();
        for &(m, n) in &self.source.multiplicities {
            let coeff = if m.abs() == 1 {
                String::new()
            } else {
                m.abs().to_string()
            };
            let side = if m < 0 { &mut lhs } else { &mut rhs };
            if n <= 2 {
                for _ in 0..n {
                    let idx = letters.next().unwrap_or("x");
                    side.push(format!("{coeff}b_{idx}"));
                }
            } else {
                side.push(format!("{coeff}sum{n}(b)"));
            }
        }
        if with_k {
            rhs.push("k".to_string());
        }
        let join = |terms: &[String]| {
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" + ")
            }
        };
        format!("{} >= {}", join(&lhs), join(&rhs))
    }
}

impl fmt::Display for InequalityFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(true))
    }
}

/// One family per exceptional type occurring on `S_r`, ordered by degree
/// `a0`, plus the ruling family `a >= b_1 + k` on `S_1`.
pub fn generate_inequality_families(ctx: &SurfaceContext) -> Vec<InequalityFamily> {
    let rank = ctx.rank();
    let mut families: Vec<InequalityFamily> = exceptional_type_census(ctx)
        .counts
        .into_keys()
        .map(|source| InequalityFamily { rank, source })
        .collect();
    if rank.get() == 1 {
        families.push(InequalityFamily {
            rank,
            source: ctx.ruling().type_pattern(),
        });
    }
    families.sort_by(|x, y| x.source.a0.cmp(&y.source.a0).then(x.source.cmp(&y.source)));
    families
}

/// k-very ampleness read off the inequality families alone.
pub fn families_verdict(families: &[InequalityFamily], class: &PicardClass, k: i64) -> bool {
    families.iter().all(|f| f.holds(class, k)) && ExceptionFlag::detect(class, k).is_none()
}

/// How an effective class was reduced to a nef one: `class` equals
/// `terminal + sum count * curve`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EffectivityCertificate {
    pub subtracted: Vec<Component>,
    pub terminal: PicardClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub curve: PicardClass,
    pub multiplicity: i64,
}

impl EffectivityCertificate {
    /// Rebuilds the certified class.
    pub fn replay(&self) -> PicardClass {
        self.subtracted
            .iter()
            .fold(self.terminal, |acc, c| acc + c.multiplicity * c.curve)
    }
}

/// Decides effectivity. A positive answer comes with a certificate.
///
/// On `S_1` a class `a l - b e_1 = a (l - e_1) + (a - b) e_1` is effective
/// exactly when `a >= 0` and `a >= b`. On `S_r`, `r >= 2`, any `xi` with
/// `L.xi = -m < 0` is a fixed component of multiplicity at least `m`, so it
/// is peeled off; the loop stops at a nef (hence effective) class or at a
/// nonzero class with `-K.L <= 0`, which cannot be effective since `-K` is
/// ample. Each step lowers `-K.L` by `m`, so the loop terminates.
pub fn is_effective(
    class: &PicardClass,
    ctx: &SurfaceContext,
) -> Result<(bool, Option<EffectivityCertificate>)> {
    ctx.check(class)?;
    let rank = ctx.rank();
    if rank.get() == 1 {
        let (a, b) = (class.a(), class.b()[0]);
        if a < 0 || a < b {
            return Ok((false, None));
        }
        let e1 = PicardClass::exceptional(rank, 0);
        let subtracted = if a > b {
            vec![Component {
                curve: e1,
                multiplicity: a - b,
            }]
        } else {
            Vec::new()
        };
        let certificate = EffectivityCertificate {
            subtracted,
            terminal: a * ctx.ruling(),
        };
        return Ok((true, Some(certificate)));
    }

    let mut rest = *class;
    let mut subtracted: Vec<Component> = Vec::new();
    loop {
        if rest.is_zero() {
            break;
        }
        if rest.anticanonical_degree() <= 0 {
            return Ok((false, None));
        }
        // Most negative pairing; ties go to the first curve in class order.
        let (worst, value) = ctx
            .exceptional()
            .iter()
            .map(|xi| (*xi, rest.dot(xi)))
            .min_by_key(|&(_, v)| v)
            .expect("I_r is never empty");
        if value >= 0 {
            break;
        }
        rest = rest - (-value) * worst;
        match subtracted.iter_mut().find(|c| c.curve == worst) {
            Some(c) => c.multiplicity += -value,
            None => subtracted.push(Component {
                curve: worst,
                multiplicity: -value,
            }),
        }
    }
    Ok((
        true,
        Some(EffectivityCertificate {
            subtracted,
            terminal: rest,
        }),
    ))
}

pub fn is_nef(class: &PicardClass, ctx: &SurfaceContext) -> Result<bool> {
    ctx.check(class)?;
    Ok(ctx.min_curve_pairing(class) >= 0)
}

/// Nef with positive self-intersection. Non-nef classes are never big here.
pub fn is_big(class: &PicardClass, ctx: &SurfaceContext) -> Result<bool> {
    Ok(is_nef(class, ctx)? && class.degree() > 0)
}

/// Spanned by global sections; coincides with nef on these surfaces.
pub fn is_spanned(class: &PicardClass, ctx: &SurfaceContext) -> Result<bool> {
    is_nef(class, ctx)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub effective: bool,
    pub nef: bool,
    pub big: bool,
    pub spanned: bool,
    pub k_very_ample: bool,
}

/// A curve `C` with `L.C < k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// The inequality family the curve belongs to.
    pub family: String,
    /// Type pattern of the curves in that family.
    pub source: TypePattern,
    pub curve: PicardClass,
    pub value: i64,
    pub required: i64,
    /// Also breaks nefness (`L.C < 0`).
    pub nef: bool,
}

/// Full positivity picture of one class at one level `k`.
///
/// Field order is the serialized order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositivityReport {
    pub subject: PicardClass,
    pub r: usize,
    pub k: i64,
    pub degree: i64,
    pub genus: i64,
    pub verdicts: Verdicts,
    pub violations: Vec<Violation>,
    #[serde(serialize_with = "serialize_flag")]
    pub exception_flag: Option<ExceptionFlag>,
    pub certificate: Option<EffectivityCertificate>,
}

fn serialize_flag<S: Serializer>(
    flag: &Option<ExceptionFlag>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.serialize_str(flag.map_or("none", ExceptionFlag::as_str))
}

/// Tests `L.xi >= k` on `I_r` (and `L.(l - e_1) >= k` on `S_1`), then the
/// three exceptions, and collects the other verdicts along the way.
pub fn is_k_very_ample(
    class: &PicardClass,
    k: i64,
    ctx: &SurfaceContext,
) -> Result<PositivityReport> {
    if k < 0 {
        return Err(Error::NegativeK(k));
    }
    ctx.check(class)?;
    let families = generate_inequality_families(ctx);
    let family_of = |curve: &PicardClass| {
        let pattern = curve.type_pattern();
        families
            .iter()
            .position(|f| f.source == pattern)
            .expect("every test curve has a family")
    };

    let mut curves: Vec<PicardClass> = ctx.exceptional().to_vec();
    if ctx.rank().get() == 1 {
        curves.push(ctx.ruling());
    }
    let mut violations: Vec<(usize, Violation)> = Vec::new();
    let mut min_pairing = i64::MAX;
    for curve in curves {
        let value = class.dot(&curve);
        min_pairing = min_pairing.min(value);
        if value < k {
            let idx = family_of(&curve);
            violations.push((
                idx,
                Violation {
                    family: families[idx].render(true),
                    source: families[idx].source.clone(),
                    curve,
                    value,
                    required: k,
                    nef: value < 0,
                },
            ));
        }
    }
    violations.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.curve.cmp(&y.1.curve)));

    let nef = min_pairing >= 0;
    let exception_flag = ExceptionFlag::detect(class, k);
    let (effective, certificate) = is_effective(class, ctx)?;
    Ok(PositivityReport {
        subject: *class,
        r: ctx.rank().get(),
        k,
        degree: class.degree(),
        genus: class.sectional_genus(),
        verdicts: Verdicts {
            effective,
            nef,
            big: nef && class.degree() > 0,
            spanned: nef,
            k_very_ample: min_pairing >= k && exception_flag.is_none(),
        },
        violations: violations.into_iter().map(|(_, v)| v).collect(),
        exception_flag,
        certificate,
    })
}

/// k-very ampleness verdict only, without building a report.
pub fn k_very_ample(class: &PicardClass, k: i64, ctx: &SurfaceContext) -> bool {
    ctx.min_curve_pairing(class) >= k && ExceptionFlag::detect(class, k).is_none()
}

fn require_k_very_ample(class: &PicardClass, k: i64, ctx: &SurfaceContext) -> Result<()> {
    ctx.check(class)?;
    if k < 0 {
        return Err(Error::NegativeK(k));
    }
    if !k_very_ample(class, k, ctx) {
        return Err(Error::Precondition(format!(
            "{class} is not {k}-very ample"
        )));
    }
    Ok(())
}

/// Whether the adjoint `K + L` of a k-very ample `L` is `(k-1)`-very ample.
///
/// Always true for `r >= 2`; on `S_1` exactly when `a >= b_1 + k + 1`.
pub fn adjoint_kva_check(class: &PicardClass, k: i64, ctx: &SurfaceContext) -> Result<bool> {
    require_k_very_ample(class, k, ctx)?;
    if k < 1 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    Ok(k_very_ample(&class.adjoint(), k - 1, ctx))
}

/// Lower bound `k^2 + 3k + 2` on the degree of a k-very ample class.
pub fn degree_bound(k: i64) -> i64 {
    k * k + 3 * k + 2
}

/// `L^2 >= k^2 + 3k + 2` for k-very ample `L != -k K` with `k >= 2`.
pub fn degree_bound_check(class: &PicardClass, k: i64, ctx: &SurfaceContext) -> Result<bool> {
    require_k_very_ample(class, k, ctx)?;
    if k < 2 {
        return Err(Error::Precondition("k must be at least 2".into()));
    }
    if *class == k * anticanonical_class(ctx.rank()) {
        return Err(Error::Precondition("L = -kK is excluded".into()));
    }
    Ok(class.degree() >= degree_bound(k))
}

/// Coordinates `a0 E_0 + b f` on `F_1 = S_1`, where `E_0 = e_1` is the
/// negative section and `f = l - e_1` the fibre.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct F1Coords {
    pub a0: i64,
    pub b: i64,
}

impl F1Coords {
    /// `a0 E_0 + b f = b l - (b - a0) e_1`.
    pub fn to_class(self) -> PicardClass {
        let rank = Rank::new(1).unwrap();
        PicardClass::from_parts(rank, self.b, &[self.b - self.a0])
    }

    pub fn from_class(class: &PicardClass) -> Result<Self> {
        if class.rank().get() != 1 {
            return Err(Error::Precondition(format!(
                "F_1 coordinates need r = 1, got r = {}",
                class.rank()
            )));
        }
        Ok(F1Coords {
            a0: class.a() - class.b()[0],
            b: class.a(),
        })
    }

    /// `a0 >= k` and `b >= a0 + k`.
    pub fn is_k_very_ample(self, k: i64) -> bool {
        self.a0 >= k && self.b >= self.a0 + k
    }
}
