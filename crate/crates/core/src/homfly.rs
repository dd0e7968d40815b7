//! Skein-recursion HOMFLY engine.
//!
//! From fixed basepoints the crossings first met on the over-strand are
//! switched one after another. Each switch peels off a smoothed diagram with
//! one crossing fewer, and once every crossing is met from below the diagram
//! is an ascending unlink. Smoothed children are independent and may be
//! evaluated in parallel; connected pieces are cached under their canonical
//! code.

use dashmap::DashMap;
use thiserror::Error;

use crate::diagram::{ArcId, LinkDiagram, Sign};
use crate::par::{self, Parallelism};
use crate::poly::{LaurentPoly2, Monomial};

/// Diagrams smaller than this evaluate their children on the calling thread.
const PARALLEL_GRAIN: usize = 8;

pub const DEFAULT_CAP: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomflyError {
    #[error("diagram has {crossings} crossings, above the cap of {cap}")]
    CrossingCapExceeded { crossings: usize, cap: usize },
    #[error("basepoints {0:?} do not pick one arc on each strand component")]
    InvalidBasepoints(Vec<ArcId>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineOptions {
    pub cap: usize,
    pub memoize: bool,
    pub parallelism: Parallelism,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { cap: DEFAULT_CAP, memoize: true, parallelism: Parallelism::default() }
    }
}

/// Edge labels (switch, smooth) leaving a crossing of the given sign.
pub fn skein_labels(sign: Sign) -> (Monomial, Monomial) {
    match sign {
        Sign::Positive => (Monomial::V2, Monomial::VZ),
        Sign::Negative => (Monomial::V_INV2, Monomial::NEG_V_INV_Z),
    }
}

#[derive(Debug, Default)]
pub struct HomflyEngine {
    options: EngineOptions,
    cache: DashMap<Vec<u32>, LaurentPoly2>,
}

impl HomflyEngine {
    pub fn new(options: EngineOptions) -> Self {
        HomflyEngine { options, cache: DashMap::new() }
    }

    pub fn options(&self) -> EngineOptions {
        self.options
    }

    /// Number of connected diagrams currently cached.
    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    pub fn homfly(&self, d: &LinkDiagram) -> Result<LaurentPoly2, HomflyError> {
        self.check_cap(d)?;
        Ok(self.eval(d))
    }

    /// Runs the top level of the recursion from `starts`, one arc per strand
    /// component, components traversed in the given order.
    pub fn homfly_with_basepoints(&self, d: &LinkDiagram, starts: &[ArcId]) -> Result<LaurentPoly2, HomflyError> {
        self.check_cap(d)?;
        let components = d.strand_components();
        let mut hit = vec![false; components.len()];
        let valid = starts.len() == components.len()
            && starts.iter().all(|a| match components.iter().position(|c| c.contains(a)) {
                Some(i) if !hit[i] => {
                    hit[i] = true;
                    true
                }
                _ => false,
            });
        if !valid {
            return Err(HomflyError::InvalidBasepoints(starts.to_vec()));
        }
        Ok(self.chain(d, starts))
    }

    fn check_cap(&self, d: &LinkDiagram) -> Result<(), HomflyError> {
        let crossings = d.crossing_count();
        if crossings > self.options.cap {
            return Err(HomflyError::CrossingCapExceeded { crossings, cap: self.options.cap });
        }
        Ok(())
    }

    fn eval(&self, d: &LinkDiagram) -> LaurentPoly2 {
        if self.options.memoize {
            self.memoized(d)
        } else {
            self.chain(d, &d.default_basepoints())
        }
    }

    fn memoized(&self, d: &LinkDiagram) -> LaurentPoly2 {
        if d.crossing_count() == 0 {
            return LaurentPoly2::delta_power(d.free_loops().saturating_sub(1) as u32);
        }
        let parts = d.split_components();
        if parts.len() > 1 {
            let n = parts.len() as u32;
            let polys = par::map(self.options.parallelism, parts, |p| self.memoized(&p));
            return polys.iter().fold(LaurentPoly2::delta_power(n - 1), |acc, p| &acc * p);
        }
        let (canon, code) = d.canonical_connected();
        if let Some(p) = self.cache.get(&code).map(|r| r.clone()) {
            return p;
        }
        let p = self.chain(&canon, &canon.default_basepoints());
        self.cache.insert(code, p.clone());
        p
    }

    fn chain(&self, d: &LinkDiagram, starts: &[ArcId]) -> LaurentPoly2 {
        let mut cur = d.clone();
        let mut mult = Monomial::ONE;
        let mut smoothed = Vec::new();
        for i in d.non_ascending_crossings(starts) {
            let (switch, smooth) = skein_labels(cur.crossings()[i].sign());
            smoothed.push((mult * smooth, cur.smoothed(i)));
            mult = mult * switch;
            cur.switch_in_place(i);
        }
        let leaf = LaurentPoly2::delta_power(cur.component_count() as u32 - 1).mul_monomial(mult);
        let mode = if d.crossing_count() >= PARALLEL_GRAIN { self.options.parallelism } else { Parallelism::Sequential };
        par::map(mode, smoothed, |(m, child)| self.eval(&child).mul_monomial(m))
            .into_iter()
            .fold(leaf, |acc, t| acc + t)
    }
}

/// HOMFLY polynomial with default options.
pub fn homfly(d: &LinkDiagram) -> Result<LaurentPoly2, HomflyError> {
    HomflyEngine::default().homfly(d)
}
