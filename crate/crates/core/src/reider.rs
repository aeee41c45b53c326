//! Brute-force search for obstruction divisors.
//!
//! For `M = L - K` nef with `M^2 >= 4k + 5`, `L` is k-very ample unless some
//! effective `D` satisfies
//!
//! ```text
//! M.D - k - 1 <= D^2 < M.D / 2 < k + 1
//! ```
//!
//! All comparisons are done in integers: `2 D^2 < M.D` and `M.D < 2k + 2`.
//! The Q-effectivity of `M - 2D` is not checked, so the witness set found here
//! is a superset of the true obstructions.
//!
//! For nef `L` every witness lies in a finite box independent of `L`:
//!
//! 1. `M.D = L.D + (-K).D >= (-K).D >= 1`, and `M.D <= 2k + 1`, so
//!    `1 <= (-K).D <= 2k + 1`;
//! 2. `6(-K) - l` is nef, so `alpha = D.l <= 6 (-K).D`, and `l` is nef, so
//!    `alpha >= 0`;
//! 3. `l - e_i` is nef, so `beta_i <= alpha`;
//! 4. `beta_i < 0` forces `e_i` into `D` with multiplicity `-beta_i`, and then
//!    `(-K).D >= -beta_i`;
//! 5. `-k <= M.D - k - 1 <= D^2 <= k`.
//!
//! The box only depends on `(r, k)`, so its effective lattice points are
//! collected once into a [`CandidatePool`] and each `L` just filters them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{anticanonical_class, PicardClass, Rank};
use crate::positivity::{
    is_effective, is_nef, k_very_ample, EffectivityCertificate, ExceptionFlag,
};
use crate::surface::SurfaceContext;

/// Largest `k` the search is tuned for; beyond it the box grows quickly.
pub const DESK_SCALE_MAX_K: i64 = 2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowCheck {
    pub applicable: bool,
    pub m: PicardClass,
    pub m_squared: i64,
    pub m_nef: bool,
    pub threshold: i64,
}

/// `M = L - K`, and whether `M` is nef with `M^2 >= 4k + 5`.
pub fn window_applicable(class: &PicardClass, k: i64, ctx: &SurfaceContext) -> Result<WindowCheck> {
    if k < 0 {
        return Err(Error::NegativeK(k));
    }
    ctx.check(class)?;
    let m = *class - ctx.canonical();
    let m_squared = m.degree();
    let m_nef = is_nef(&m, ctx)?;
    let threshold = 4 * k + 5;
    Ok(WindowCheck {
        applicable: m_nef && m_squared >= threshold,
        m,
        m_squared,
        m_nef,
        threshold,
    })
}

/// The three window inequalities evaluated at one `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WindowValues {
    /// `M.D - k - 1 <= D^2`
    pub lower: bool,
    /// `2 D^2 < M.D`
    pub middle: bool,
    /// `M.D < 2k + 2`
    pub upper: bool,
}

impl WindowValues {
    pub fn evaluate(md: i64, d_squared: i64, k: i64) -> Self {
        WindowValues {
            lower: md - k - 1 <= d_squared,
            middle: 2 * d_squared < md,
            upper: md < 2 * k + 2,
        }
    }

    pub fn all(self) -> bool {
        self.lower && self.middle && self.upper
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionWitness {
    pub d: PicardClass,
    pub md: i64,
    pub d_squared: i64,
    pub window: WindowValues,
    pub effectivity_certificate: EffectivityCertificate,
}

/// The box scanned for a given `(r, k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    pub r: usize,
    pub k: i64,
    /// Range of `(-K).D`.
    pub anticanonical_degree: (i64, i64),
    /// Range of `alpha = D.l`.
    pub alpha: (i64, i64),
    /// Lower bound on each `beta_i`; the upper bound is `alpha`.
    pub beta_min: i64,
    /// Range of `D^2`.
    pub d_squared: (i64, i64),
    pub derivation: Vec<&'static str>,
}

impl SearchBounds {
    pub fn new(rank: Rank, k: i64) -> Self {
        let t_max = 2 * k + 1;
        SearchBounds {
            r: rank.get(),
            k,
            anticanonical_degree: (1, t_max),
            alpha: (0, 6 * t_max),
            beta_min: -t_max,
            d_squared: (-k, k),
            derivation: vec![
                "L nef: 1 <= (-K).D <= M.D <= 2k+1",
                "6(-K) - l nef: 0 <= alpha <= 6 (-K).D",
                "l - e_i nef: beta_i <= alpha",
                "beta_i < 0 forces e_i: beta_i >= -(-K).D",
                "window: -k <= D^2 <= k",
            ],
        }
    }

    pub fn contains(&self, d: &PicardClass) -> bool {
        let t = d.anticanonical_degree();
        let alpha = d.a();
        let d2 = d.degree();
        (self.anticanonical_degree.0..=self.anticanonical_degree.1).contains(&t)
            && (self.alpha.0..=self.alpha.1).contains(&alpha)
            && alpha <= 6 * t
            && d.b().iter().all(|&x| x >= -t && x <= alpha)
            && (self.d_squared.0..=self.d_squared.1).contains(&d2)
    }
}

/// All effective classes in the search box for `(r, k)`.
#[derive(Clone, Debug)]
pub struct CandidatePool {
    bounds: SearchBounds,
    candidates: Vec<(PicardClass, EffectivityCertificate)>,
    nodes_visited: u64,
}

impl CandidatePool {
    /// Scans the box. Refuses to run if `6(-K) - l` is not nef, since the box
    /// would then not be provably sufficient.
    pub fn build(k: i64, ctx: &SurfaceContext) -> Result<Self> {
        if k < 0 {
            return Err(Error::NegativeK(k));
        }
        if k > DESK_SCALE_MAX_K {
            log::warn!(
                "obstruction search at k = {k} is beyond desk scale (k <= {DESK_SCALE_MAX_K}); \
                 the box grows roughly like (12k+6)^(r+1)"
            );
        }
        let rank = ctx.rank();
        let bounding = 6 * anticanonical_class(rank) - PicardClass::line(rank);
        if !is_nef(&bounding, ctx)? {
            return Err(Error::Precondition(format!(
                "6(-K) - l = {bounding} is not nef on S_{rank}; search box is unjustified"
            )));
        }
        let bounds = SearchBounds::new(rank, k);
        let r = rank.get();
        let t_max = bounds.anticanonical_degree.1;

        let per_alpha: Vec<(Vec<PicardClass>, u64)> = (bounds.alpha.0..=bounds.alpha.1)
            .into_par_iter()
            .map(|alpha| {
                let mut found = Vec::new();
                let mut nodes = 0u64;
                let mut beta = vec![0i64; r];
                // (-K).D = t fixes sum beta = 3 alpha - t.
                let t_min = ((alpha + 5) / 6).max(1);
                for t in t_min..=t_max {
                    let mut scan = BetaScan {
                        lo: -t,
                        hi: alpha,
                        sq_lo: alpha * alpha - k,
                        sq_hi: alpha * alpha + k,
                        beta: &mut beta,
                        nodes: &mut nodes,
                    };
                    scan.run(0, 3 * alpha - t, 0, &mut |b| {
                        found.push(PicardClass::from_parts(rank, alpha, b));
                    });
                }
                (found, nodes)
            })
            .collect();

        let mut nodes_visited = 0;
        let mut lattice_points = Vec::new();
        for (found, nodes) in per_alpha {
            nodes_visited += nodes;
            lattice_points.extend(found);
        }
        let mut candidates: Vec<(PicardClass, EffectivityCertificate)> = lattice_points
            .into_par_iter()
            .filter_map(|d| match is_effective(&d, ctx) {
                Ok((true, Some(cert))) => Some((d, cert)),
                _ => None,
            })
            .collect();
        candidates.sort_by_key(|x| x.0);
        log::debug!(
            "candidate pool for r = {r}, k = {k}: {} classes, {nodes_visited} nodes",
            candidates.len()
        );
        Ok(CandidatePool {
            bounds,
            candidates,
            nodes_visited,
        })
    }

    pub fn bounds(&self) -> &SearchBounds {
        &self.bounds
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn nodes_visited(&self) -> u64 {
        self.nodes_visited
    }

    pub fn classes(&self) -> impl Iterator<Item = &PicardClass> {
        self.candidates.iter().map(|(d, _)| d)
    }

    /// Witnesses for `M = L - K`, in class order.
    pub fn witnesses(&self, m: &PicardClass) -> Vec<ObstructionWitness> {
        let k = self.bounds.k;
        self.candidates
            .iter()
            .filter_map(|(d, cert)| {
                let md = m.dot(d);
                let d_squared = d.degree();
                let window = WindowValues::evaluate(md, d_squared, k);
                window.all().then(|| ObstructionWitness {
                    d: *d,
                    md,
                    d_squared,
                    window,
                    effectivity_certificate: cert.clone(),
                })
            })
            .collect()
    }
}

/// Depth-first scan over `beta` with fixed sum and a window on the square sum.
struct BetaScan<'a> {
    lo: i64,
    hi: i64,
    sq_lo: i64,
    sq_hi: i64,
    beta: &'a mut [i64],
    nodes: &'a mut u64,
}

impl BetaScan<'_> {
    fn run(&mut self, i: usize, sum_left: i64, sq: i64, emit: &mut dyn FnMut(&[i64])) {
        *self.nodes += 1;
        let n = self.beta.len();
        let left = (n - i) as i64;
        if left == 0 {
            if sum_left == 0 && sq >= self.sq_lo {
                emit(self.beta);
            }
            return;
        }
        if sum_left < left * self.lo || sum_left > left * self.hi {
            return;
        }
        // Cauchy-Schwarz on the remaining coordinates.
        if sum_left * sum_left > left * (self.sq_hi - sq) {
            return;
        }
        for x in self.lo..=self.hi {
            let sq_next = sq + x * x;
            if sq_next > self.sq_hi {
                if x > 0 {
                    break;
                }
                continue;
            }
            self.beta[i] = x;
            self.run(i + 1, sum_left - x, sq_next, emit);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub subject: PicardClass,
    pub k: i64,
    pub applicable: bool,
    /// Why the criterion does not apply, when it does not.
    pub reason: Option<String>,
    pub m: PicardClass,
    pub m_squared: i64,
    /// False when `L` is not nef; the box is then not guaranteed to hold every
    /// witness.
    pub box_complete: bool,
    pub search_bounds: SearchBounds,
    pub nodes_visited: u64,
    pub witnesses: Vec<ObstructionWitness>,
}

/// Searches for obstruction divisors to the k-very ampleness of `L`.
pub fn search_obstructions(
    class: &PicardClass,
    k: i64,
    ctx: &SurfaceContext,
) -> Result<SearchOutcome> {
    let pool = CandidatePool::build(k, ctx)?;
    search_with_pool(class, &pool, ctx)
}

/// Same as [`search_obstructions`] with a prebuilt pool for `(r, k)`.
pub fn search_with_pool(
    class: &PicardClass,
    pool: &CandidatePool,
    ctx: &SurfaceContext,
) -> Result<SearchOutcome> {
    let k = pool.bounds.k;
    if pool.bounds.r != ctx.rank().get() {
        return Err(Error::RankMismatch {
            left: pool.bounds.r,
            right: ctx.rank().get(),
        });
    }
    let check = window_applicable(class, k, ctx)?;
    let reason = if !check.m_nef {
        Some(format!("M = {} is not nef", check.m))
    } else if check.m_squared < check.threshold {
        Some(format!(
            "M^2 = {} < 4k+5 = {}",
            check.m_squared, check.threshold
        ))
    } else {
        None
    };
    let witnesses = if check.applicable {
        pool.witnesses(&check.m)
    } else {
        Vec::new()
    };
    Ok(SearchOutcome {
        subject: *class,
        k,
        applicable: check.applicable,
        reason,
        m: check.m,
        m_squared: check.m_squared,
        box_complete: is_nef(class, ctx)?,
        search_bounds: pool.bounds.clone(),
        nodes_visited: pool.nodes_visited,
        witnesses,
    })
}

/// Which classes a sweep visits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepDomain {
    /// Every nef class with `0 <= b_i <= a <= max_a`, which is every nef
    /// class with `a <= max_a`. With `sorted`, only those with `b`
    /// non-decreasing; verdicts, windows and the candidate pool are all
    /// invariant under permuting the points, so this loses nothing.
    Box { max_a: i64, sorted: bool },
    /// `count` nef classes drawn with `1 <= a <= max_a` and
    /// `f <= b_i <= ceil(a/2)` for a random floor `f` in `0..=2`,
    /// reproducible from `seed`.
    Sample { count: usize, max_a: i64, seed: u64 },
}

impl SweepDomain {
    /// Size of the unpruned box, if this is a box.
    pub fn box_size(&self, rank: Rank) -> Option<u128> {
        match *self {
            SweepDomain::Box { max_a, .. } => Some(
                (0..=max_a.max(-1))
                    .map(|a| (a as u128 + 1).pow(rank.get() as u32))
                    .sum(),
            ),
            SweepDomain::Sample { .. } => None,
        }
    }

    /// The nef classes of the domain, in a deterministic order.
    pub fn nef_classes(&self, ctx: &SurfaceContext) -> Vec<PicardClass> {
        let rank = ctx.rank();
        let r = rank.get();
        match *self {
            SweepDomain::Box { max_a, sorted } => (0..=max_a)
                .into_par_iter()
                .flat_map_iter(|a| {
                    let mut out = Vec::new();
                    let mut b = vec![0i64; r];
                    nef_box_dfs(ctx, a, 0, sorted, &mut b, &mut out);
                    out
                })
                .collect(),
            SweepDomain::Sample { count, max_a, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut out = Vec::with_capacity(count);
                let mut attempts = 0usize;
                let max_attempts = count.saturating_mul(10_000).max(10_000);
                while out.len() < count && attempts < max_attempts {
                    attempts += 1;
                    let a = rng.gen_range(1..=max_a.max(1));
                    let top = (a + 1) / 2;
                    // A random floor keeps enough classes with every b_i >= k.
                    let floor = rng.gen_range(0..=2).min(top);
                    let b: Vec<i64> = (0..r).map(|_| rng.gen_range(floor..=top)).collect();
                    let class = PicardClass::from_parts(rank, a, &b);
                    if ctx.min_curve_pairing(&class) >= 0 {
                        out.push(class);
                    }
                }
                out
            }
        }
    }
}

/// Fills `b[i..]` over `0..=a` in lexicographic order, keeping nef classes.
///
/// Unfilled coordinates are zero, and raising any `b_i >= 0` only lowers
/// `L.xi` for curves of positive degree, so a non-nef prefix is pruned.
fn nef_box_dfs(
    ctx: &SurfaceContext,
    a: i64,
    i: usize,
    sorted: bool,
    b: &mut [i64],
    out: &mut Vec<PicardClass>,
) {
    let rank = ctx.rank();
    if i == b.len() {
        out.push(PicardClass::from_parts(rank, a, b));
        return;
    }
    let start = if sorted && i > 0 { b[i - 1] } else { 0 };
    for x in start..=a {
        b[i] = x;
        if ctx.min_curve_pairing(&PicardClass::from_parts(rank, a, b)) < 0 {
            break;
        }
        nef_box_dfs(ctx, a, i + 1, sorted, b, out);
    }
    b[i] = 0;
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SweepViolation {
    /// Passes the intersection criterion yet has a witness.
    PassingWithWitness {
        class: PicardClass,
        witnesses: Vec<PicardClass>,
    },
    /// Fails the intersection criterion (or is a named exception) yet has no
    /// witness.
    FailingWithoutWitness { class: PicardClass },
    /// A curve with `L.C < k` that is not itself among the witnesses.
    MissingCurve {
        class: PicardClass,
        curve: PicardClass,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub r: usize,
    pub k: i64,
    pub classes_scanned: usize,
    pub applicable: usize,
    pub passing: usize,
    pub failing: usize,
    pub exceptions: usize,
    pub witnesses: usize,
    pub pool_size: usize,
    pub nodes_visited: u64,
    pub violations: Vec<SweepViolation>,
}

/// Checks the intersection criterion against the obstruction search on every
/// nef class of `domain`.
///
/// For each nef `L` with the window applicable: if `L` passes, there must be
/// no witness; if it fails, there must be one, and every curve `C` with
/// `L.C < k` must itself be a witness.
pub fn consistency_sweep(
    k: i64,
    domain: SweepDomain,
    ctx: &SurfaceContext,
) -> Result<SweepSummary> {
    let pool = CandidatePool::build(k, ctx)?;
    let classes = domain.nef_classes(ctx);
    log::info!("sweeping {} nef classes on S_{}", classes.len(), ctx.rank());
    let mut test_curves: Vec<PicardClass> = ctx.exceptional().to_vec();
    if ctx.rank().get() == 1 {
        test_curves.push(ctx.ruling());
    }

    struct Row {
        applicable: bool,
        passing: bool,
        exception: bool,
        witnesses: usize,
        violations: Vec<SweepViolation>,
    }

    let rows: Vec<Row> = classes
        .par_iter()
        .map(|class| {
            let check = window_applicable(class, k, ctx).expect("k >= 0 and matching rank");
            let passing = k_very_ample(class, k, ctx);
            let exception = ExceptionFlag::detect(class, k).is_some();
            if !check.applicable {
                return Row {
                    applicable: false,
                    passing,
                    exception,
                    witnesses: 0,
                    violations: Vec::new(),
                };
            }
            let witnesses = pool.witnesses(&check.m);
            let mut violations = Vec::new();
            if passing {
                if !witnesses.is_empty() {
                    violations.push(SweepViolation::PassingWithWitness {
                        class: *class,
                        witnesses: witnesses.iter().map(|w| w.d).collect(),
                    });
                }
            } else {
                if witnesses.is_empty() {
                    violations.push(SweepViolation::FailingWithoutWitness { class: *class });
                }
                for curve in &test_curves {
                    if class.dot(curve) < k && !witnesses.iter().any(|w| w.d == *curve) {
                        violations.push(SweepViolation::MissingCurve {
                            class: *class,
                            curve: *curve,
                        });
                    }
                }
            }
            Row {
                applicable: true,
                passing,
                exception,
                witnesses: witnesses.len(),
                violations,
            }
        })
        .collect();

    let mut summary = SweepSummary {
        r: ctx.rank().get(),
        k,
        classes_scanned: classes.len(),
        pool_size: pool.len(),
        nodes_visited: pool.nodes_visited,
        ..SweepSummary::default()
    };
    for row in rows {
        if !row.applicable {
            continue;
        }
        summary.applicable += 1;
        if row.passing {
            summary.passing += 1;
        } else if row.exception {
            summary.exceptions += 1;
        } else {
            summary.failing += 1;
        }
        summary.witnesses += row.witnesses;
        summary.violations.extend(row.violations);
    }
    Ok(summary)
}
