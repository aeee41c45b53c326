use std::collections::HashSet;

use crate::enumerate::enumerate_exceptional;
use crate::error::{Error, Result};
use crate::lattice::{canonical_class, PicardClass, Rank};

/// A Del Pezzo surface `S_r` together with its exceptional classes `I_r`.
///
/// Immutable after construction, so it can be shared freely across threads.
#[derive(Clone, Debug)]
pub struct SurfaceContext {
    rank: Rank,
    canonical: PicardClass,
    exceptional: Vec<PicardClass>,
    lookup: HashSet<PicardClass>,
}

impl SurfaceContext {
    pub fn new(rank: Rank) -> Self {
        let exceptional = enumerate_exceptional(rank);
        let lookup = exceptional.iter().copied().collect();
        SurfaceContext {
            rank,
            canonical: canonical_class(rank),
            exceptional,
            lookup,
        }
    }

    pub fn for_rank(r: usize) -> Result<Self> {
        Ok(Self::new(Rank::new(r)?))
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn canonical(&self) -> PicardClass {
        self.canonical
    }

    /// `I_r` in ascending class order.
    pub fn exceptional(&self) -> &[PicardClass] {
        &self.exceptional
    }

    pub fn is_exceptional(&self, class: &PicardClass) -> bool {
        self.lookup.contains(class)
    }

    /// Fails unless `class` lives on this surface.
    pub fn check(&self, class: &PicardClass) -> Result<()> {
        if class.rank() == self.rank {
            Ok(())
        } else {
            Err(Error::RankMismatch {
                left: class.rank().get(),
                right: self.rank.get(),
            })
        }
    }

    /// `min L.xi` over `I_r`, plus `L.(l - e_1)` on `S_1`.
    ///
    /// `L` is k-very ample (outside the listed exceptions) exactly when this
    /// is at least `k`, and nef exactly when it is at least 0.
    pub fn min_curve_pairing(&self, class: &PicardClass) -> i64 {
        let mut min = self
            .exceptional
            .iter()
            .map(|xi| class.dot(xi))
            .min()
            .expect("I_r is never empty");
        if self.rank.get() == 1 {
            min = min.min(class.a() - class.b()[0]);
        }
        min
    }

    /// The ruling class `l - e_1`, which supplements `I_1` on `S_1`.
    pub fn ruling(&self) -> PicardClass {
        PicardClass::line(self.rank) - PicardClass::exceptional(self.rank, 0)
    }
}
