//! Exhaustive enumeration of exceptional classes, self-intersection-zero
//! classes, and the ways the latter split into two exceptional classes.
//!
//! Both searches reduce to integer points on the intersection of a
//! hyperplane `sum b_i = S` with a sphere `sum b_i^2 = Q`. The range of `a`
//! comes from Cauchy-Schwarz, `S^2 <= r * Q`, and the depth-first scan over
//! `b` prunes with the same inequality on the remaining coordinates.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lattice::{PicardClass, Rank, TypePattern};
use crate::surface::SurfaceContext;

/// Per-type counts of exceptional classes on one surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalTable {
    pub rank: Rank,
    pub counts: BTreeMap<TypePattern, usize>,
}

impl ExceptionalTable {
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn count(&self, pattern: &TypePattern) -> usize {
        self.counts.get(pattern).copied().unwrap_or(0)
    }
}

/// A self-intersection-zero class with `K.D = -2`, together with every split
/// into two exceptional classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NullClassRecord {
    /// Coefficients `b` sorted ascending.
    pub representative: PicardClass,
    /// Unordered pairs, larger class (in class order, so larger `a`) first.
    pub decompositions: Vec<(PicardClass, PicardClass)>,
}

impl NullClassRecord {
    /// Splittings into two exceptional curves of positive degree, i.e. with
    /// no `e_i` summand.
    pub fn positive_decompositions(&self) -> Vec<(PicardClass, PicardClass)> {
        self.decompositions
            .iter()
            .filter(|(x, y)| x.a() > 0 && y.a() > 0)
            .copied()
            .collect()
    }

    /// Distinct shapes `(type1, type2)` among the positive-degree
    /// splittings, larger shape first.
    pub fn decomposition_shapes(&self) -> Vec<(TypePattern, TypePattern)> {
        let mut shapes: Vec<_> = self
            .positive_decompositions()
            .iter()
            .map(|(x, y)| (x.type_pattern(), y.type_pattern()))
            .collect();
        shapes.sort_by(|p, q| q.cmp(p));
        shapes.dedup();
        shapes
    }
}

/// Integer interval of `a` with `(s1*a + s0)^2 <= r * (a^2 + q0)`, where the
/// target sum is `s1*a + s0` and the target square sum is `a^2 + q0`.
fn cauchy_schwarz_range(r: i64, s1: i64, s0: i64, q0: i64) -> Option<(i64, i64)> {
    let holds = |a: i64| {
        let s = s1 * a + s0;
        s * s <= r * (a * a + q0)
    };
    // The difference is a convex quadratic in `a` since s1^2 > r here, so the
    // feasible set is an interval around the vertex.
    debug_assert!(s1 * s1 > r);
    let vertex = -(s1 * s0) as f64 / (s1 * s1 - r) as f64;
    let centre = vertex.round() as i64;
    let start = (centre - 1..=centre + 1).find(|&a| holds(a))?;
    let mut lo = start;
    while holds(lo - 1) {
        lo -= 1;
    }
    let mut hi = start;
    while holds(hi + 1) {
        hi += 1;
    }
    Some((lo, hi))
}

/// All integer vectors of length `n` with entries in `[lo, hi]`, sum `sum` and
/// square sum `sumsq`. With `ascending`, only non-decreasing vectors.
pub(crate) fn sphere_points(
    n: usize,
    lo: i64,
    hi: i64,
    sum: i64,
    sumsq: i64,
    ascending: bool,
) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(n);
    sphere_dfs(n, lo, hi, sum, sumsq, ascending, &mut prefix, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn sphere_dfs(
    left: usize,
    lo: i64,
    hi: i64,
    sum: i64,
    sumsq: i64,
    ascending: bool,
    prefix: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    if left == 0 {
        if sum == 0 && sumsq == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    let m = left as i64;
    if sumsq < 0 || sum < m * lo || sum > m * hi || sum * sum > m * sumsq {
        return;
    }
    for x in lo..=hi {
        if x * x > sumsq {
            if x > 0 {
                break;
            }
            continue;
        }
        prefix.push(x);
        let next_lo = if ascending { x } else { lo };
        sphere_dfs(
            left - 1,
            next_lo,
            hi,
            sum - x,
            sumsq - x * x,
            ascending,
            prefix,
            out,
        );
        prefix.pop();
    }
}

/// Every class with `L^2 = -1` and `K.L = -1` on `S_r`, in ascending class
/// order.
pub fn enumerate_exceptional(rank: Rank) -> Vec<PicardClass> {
    let r = rank.get() as i64;
    // sum b = 3a - 1, sum b^2 = a^2 + 1
    let (lo, hi) = cauchy_schwarz_range(r, 3, -1, 1).expect("a = 0 is always feasible");
    let mut out = Vec::new();
    for a in lo..=hi {
        let bound = isqrt(a * a + 1);
        for b in sphere_points(rank.get(), -bound, bound, 3 * a - 1, a * a + 1, false) {
            out.push(PicardClass::from_parts(rank, a, &b));
        }
    }
    out.sort();
    out
}

/// The largest `a` that can occur for an exceptional class at this rank.
pub fn exceptional_degree_bound(rank: Rank) -> i64 {
    cauchy_schwarz_range(rank.get() as i64, 3, -1, 1).unwrap().1
}

/// Groups `I_r` by type pattern.
pub fn exceptional_type_census(ctx: &SurfaceContext) -> ExceptionalTable {
    let mut counts = BTreeMap::new();
    for xi in ctx.exceptional() {
        *counts.entry(xi.type_pattern()).or_insert(0) += 1;
    }
    ExceptionalTable {
        rank: ctx.rank(),
        counts,
    }
}

/// Largest `a` admitted by Cauchy-Schwarz for null classes at this rank.
pub fn null_class_degree_bound(rank: Rank) -> i64 {
    // sum b = 3a - 2, sum b^2 = a^2
    cauchy_schwarz_range(rank.get() as i64, 3, -2, 0).unwrap().1
}

/// Null-class representatives with non-negative `b` sorted ascending,
/// without their decompositions.
pub fn null_class_representatives(rank: Rank) -> Vec<PicardClass> {
    let bound = null_class_degree_bound(rank);
    let mut out = Vec::new();
    // One step past the bound, to check the bound is never active.
    for a in 0..=bound + 1 {
        let found = sphere_points(rank.get(), 0, a, 3 * a - 2, a * a, true);
        assert!(
            a <= bound || found.is_empty(),
            "null class beyond the Cauchy-Schwarz bound at a = {a}"
        );
        out.extend(found.iter().map(|b| PicardClass::from_parts(rank, a, b)));
    }
    out
}

/// All null classes of `S_r` with their decompositions.
pub fn enumerate_null_classes(ctx: &SurfaceContext) -> Vec<NullClassRecord> {
    null_class_representatives(ctx.rank())
        .into_iter()
        .map(|d| NullClassRecord {
            decompositions: decompose_null_class(&d, ctx).expect("representative is a null class"),
            representative: d,
        })
        .collect()
}

/// All unordered pairs `{x, y}` of exceptional classes with `x + y = d`.
pub fn decompose_null_class(
    d: &PicardClass,
    ctx: &SurfaceContext,
) -> Result<Vec<(PicardClass, PicardClass)>> {
    ctx.check(d)?;
    if d.degree() != 0 || d.canonical_degree() != -2 {
        return Err(Error::Precondition(format!(
            "{d} is not a null class (D^2 = {}, K.D = {})",
            d.degree(),
            d.canonical_degree()
        )));
    }
    let mut pairs = Vec::new();
    for &x in ctx.exceptional() {
        let y = *d - x;
        if x <= y && ctx.is_exceptional(&y) {
            pairs.push(if y > x { (y, x) } else { (x, y) });
        }
    }
    pairs.sort();
    Ok(pairs)
}

fn isqrt(n: i64) -> i64 {
    let mut x = (n as f64).sqrt() as i64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}
