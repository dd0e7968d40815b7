//! Corpus-wide verification and report rendering.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{self, BoundsReport, ConjectureRow, ExternalData, Verdict};
use crate::corpus::CorpusEntry;
use crate::diagram::{LinkDiagram, ResolveMode, Sign};
use crate::homfly::{EngineOptions, HomflyEngine, HomflyError, DEFAULT_CAP};
use crate::par::{self, Parallelism};
use crate::poly::LaurentPoly2;
use crate::seifert;
use crate::skein_tree::{self, TopLeafObservation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyOptions {
    pub cap: usize,
    pub parallelism: Parallelism,
    /// Seeds the randomized basepoint checks.
    pub seed: u64,
    pub property_checks: bool,
    /// Random basepoint choices tried per record.
    pub basepoint_samples: usize,
    /// Largest crossing count for which the explicit skein tree is built.
    pub tree_limit: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            cap: DEFAULT_CAP,
            parallelism: Parallelism::default(),
            seed: 0,
            property_checks: true,
            basepoint_samples: 4,
            tree_limit: 9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyChecks {
    /// `v^-1 P+ - v P- = z P0` at every crossing.
    pub skein_relation: Verdict,
    /// Mirror polynomial is `P(v^-1, -z)`.
    pub mirror: Verdict,
    /// Exponents `a = b = #L - 1 (mod 2)`.
    pub parity: Verdict,
    /// Randomly chosen basepoints and component orders.
    pub basepoints: Verdict,
    /// Leaf sum of the explicit resolution tree.
    pub skein_tree: Verdict,
    /// How top-`z` leaves of the tree behave on a homogeneous diagram;
    /// recorded, not checked.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub top_leaves: Option<TopLeafObservation>,
}

impl PropertyChecks {
    pub fn iter(&self) -> impl Iterator<Item = (&'static str, Verdict)> {
        [
            ("skein_relation", self.skein_relation),
            ("mirror", self.mirror),
            ("parity", self.parity),
            ("basepoints", self.basepoints),
            ("skein_tree", self.skein_tree),
        ]
        .into_iter()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Checked {
        report: Box<BoundsReport>,
        #[serde(skip_serializing_if = "Option::is_none")]
        properties: Option<PropertyChecks>,
    },
    Skipped {
        reason: String,
    },
    Failed {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecordResult {
    pub name: String,
    #[serde(flatten)]
    pub outcome: Outcome,
}

impl RecordResult {
    pub fn report(&self) -> Option<&BoundsReport> {
        match &self.outcome {
            Outcome::Checked { report, .. } => Some(report),
            _ => None,
        }
    }

    pub fn properties(&self) -> Option<&PropertyChecks> {
        match &self.outcome {
            Outcome::Checked { properties, .. } => properties.as_ref(),
            _ => None,
        }
    }

    /// Every verdict of this record, bounds first, with its check name.
    pub fn verdicts(&self) -> Vec<(&'static str, Verdict)> {
        let mut out: Vec<_> = self.report().map(|r| r.verdicts.iter().collect()).unwrap_or_default();
        if let Some(p) = self.properties() {
            out.extend(p.iter());
        }
        out
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub checked: usize,
    pub equalities: usize,
    pub strict: usize,
    pub holds: usize,
    pub violated: usize,
    pub skipped: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationSummary {
    pub options: VerifyOptions,
    pub counts: Counts,
    pub records: Vec<RecordResult>,
    pub conjecture: Vec<ConjectureRow>,
}

impl VerificationSummary {
    /// No violations, no failed records and no flagged equality cases.
    pub fn is_success(&self) -> bool {
        self.counts.violated == 0 && self.counts.failed == 0
    }

    pub fn violations(&self) -> Vec<(String, &'static str)> {
        self.records
            .iter()
            .flat_map(|r| r.verdicts().into_iter().filter(|v| v.1 == Verdict::Violated).map(|v| (r.name.clone(), v.0)))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }

    pub fn to_markdown(&self) -> String {
        let c = &self.counts;
        let mut out = String::from("# Verification report\n\n");
        let _ = writeln!(
            out,
            "checked {} | equalities {} | strict {} | holds {} | violated {} | skipped {} | failed {}\n",
            c.checked, c.equalities, c.strict, c.holds, c.violated, c.skipped, c.failed
        );
        out.push_str("| name | s | c | w | s+ | min_deg_v | rhs_eq1 | rhs_eq2 | rhs_main | rhs_slice | sigma | ");
        out.push_str("diagram | main | top | slice | signature |\n");
        out.push_str(&"|---".repeat(16));
        out.push_str("|\n");
        let opt = |x: Option<i64>| x.map_or("-".to_string(), |v| v.to_string());
        for r in &self.records {
            let Some(b) = r.report() else {
                let reason = match &r.outcome {
                    Outcome::Skipped { reason } => format!("skipped: {reason}"),
                    Outcome::Failed { reason } => format!("FAILED: {reason}"),
                    Outcome::Checked { .. } => unreachable!(),
                };
                let _ = writeln!(out, "| {} | {reason} |{}", r.name, " |".repeat(14));
                continue;
            };
            let st = &b.stats;
            let v = &b.verdicts;
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} |",
                r.name.replace('|', "\\|"),
                st.s,
                st.c,
                st.w,
                st.s_plus,
                b.min_deg_v,
                opt(b.rhs_eq1),
                b.rhs_eq2,
                b.rhs_main,
                opt(b.rhs_slice),
                opt(b.sigma_tree.or(b.sigma_recorded)),
                short(v.diagram),
                short(v.main),
                short(v.top_monomial),
                short(v.slice),
                short(v.signature),
            );
        }
        out.push_str("\n## Equality against positivity\n\n");
        out.push_str("| name | positive diagram | main equality | slice equality | top-z slice equality | flagged |\n");
        out.push_str("|---|---|---|---|---|---|\n");
        let yn = |b: Option<bool>| b.map_or("-", |b| if b { "yes" } else { "no" });
        for row in &self.conjecture {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} |",
                row.name.replace('|', "\\|"),
                yn(Some(row.positive_diagram)),
                yn(Some(row.main_equality)),
                yn(row.slice_equality),
                yn(row.top_slice_equality),
                if row.flagged { "**FLAG**" } else { "" },
            );
        }
        let flagged = self.conjecture.iter().filter(|r| r.flagged).count();
        let _ = writeln!(out, "\n{flagged} equality cases without positivity.");
        out
    }
}

fn short(v: Verdict) -> &'static str {
    match v {
        Verdict::Equality => "=",
        Verdict::Strict => "<",
        Verdict::Holds => "ok",
        Verdict::Violated => "VIOLATED",
        Verdict::NotApplicable => "n/a",
    }
}

pub fn external_data(e: &CorpusEntry) -> ExternalData {
    let r = &e.record;
    ExternalData {
        chi: r.chi,
        chi4: r.chi4,
        sigma: r.sigma,
        split_components: Some(r.split_components),
        positive_link: r.positive_diagram.filter(|&p| p).or(if e.diagram.is_positive() { Some(true) } else { None }),
        homfly_ref: r.homfly_ref.clone(),
    }
}

pub fn run_verification(corpus: &[CorpusEntry], options: &VerifyOptions) -> VerificationSummary {
    let engine = HomflyEngine::new(EngineOptions { cap: options.cap, memoize: true, parallelism: options.parallelism });
    let mut records = par::map(options.parallelism, corpus.iter().collect(), |e| verify_entry(&engine, e, options));
    records.sort_by(|a, b| a.name.cmp(&b.name));

    let mut counts = Counts::default();
    for r in &records {
        match &r.outcome {
            Outcome::Checked { .. } => counts.checked += 1,
            Outcome::Skipped { .. } => counts.skipped += 1,
            Outcome::Failed { .. } => counts.failed += 1,
        }
        for (_, v) in r.verdicts() {
            match v {
                Verdict::Equality => counts.equalities += 1,
                Verdict::Strict => counts.strict += 1,
                Verdict::Holds => counts.holds += 1,
                Verdict::Violated => counts.violated += 1,
                Verdict::NotApplicable => {}
            }
        }
    }
    let reports: Vec<BoundsReport> = records.iter().filter_map(|r| r.report().cloned()).collect();
    VerificationSummary { options: *options, counts, records, conjecture: bounds::conjecture_report(&reports) }
}

fn verify_entry(engine: &HomflyEngine, e: &CorpusEntry, options: &VerifyOptions) -> RecordResult {
    let name = e.name().to_string();
    let p = match engine.homfly(&e.diagram) {
        Ok(p) => p,
        Err(err @ HomflyError::CrossingCapExceeded { .. }) => {
            return RecordResult { name, outcome: Outcome::Skipped { reason: err.to_string() } }
        }
        Err(err) => return RecordResult { name, outcome: Outcome::Failed { reason: err.to_string() } },
    };
    let report = match bounds::evaluate(&name, &e.diagram, &p, &external_data(e)) {
        Ok(r) => r,
        Err(err) => return RecordResult { name, outcome: Outcome::Failed { reason: err.to_string() } },
    };
    let properties = options.property_checks.then(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed ^ name_hash(&name));
        property_checks(engine, &e.diagram, &p, options, &mut rng)
    });
    RecordResult { name, outcome: Outcome::Checked { report: Box::new(report), properties } }
}

fn name_hash(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Whether `v^-1 P+ - v P- = z P0` holds at crossing `i`.
pub fn skein_relation_holds(engine: &HomflyEngine, d: &LinkDiagram, i: usize) -> Result<bool, HomflyError> {
    let same = engine.homfly(d)?;
    let other = engine.homfly(&d.resolve(i, ResolveMode::Switch).expect("index in range"))?;
    let smooth = engine.homfly(&d.resolve(i, ResolveMode::Smooth).expect("index in range"))?;
    let (plus, minus) = match d.crossings()[i].sign() {
        Sign::Positive => (same, other),
        Sign::Negative => (other, same),
    };
    let lhs = &plus.mono_mul(-1, 0, &1.into()) - &minus.mono_mul(1, 0, &1.into());
    Ok(lhs == smooth.mono_mul(0, 1, &1.into()))
}

/// Every monomial `v^a z^b` has `a = b = #L - 1 (mod 2)`.
pub fn parity_holds(p: &LaurentPoly2, components: usize) -> bool {
    let k = (components as i32 - 1).rem_euclid(2);
    p.terms().all(|(a, b, _)| a.rem_euclid(2) == k && b.rem_euclid(2) == k)
}

/// A random component order with a random start arc on each component.
pub fn random_basepoints(d: &LinkDiagram, rng: &mut impl Rng) -> Vec<crate::diagram::ArcId> {
    let mut comps = d.strand_components();
    comps.shuffle(rng);
    comps.iter().map(|c| *c.choose(rng).expect("nonempty component")).collect()
}

fn property_checks(
    engine: &HomflyEngine,
    d: &LinkDiagram,
    p: &LaurentPoly2,
    options: &VerifyOptions,
    rng: &mut ChaCha8Rng,
) -> PropertyChecks {
    let skein_relation =
        Verdict::identity((0..d.crossing_count()).all(|i| skein_relation_holds(engine, d, i).unwrap_or(false)));
    let mirror = Verdict::identity(engine.homfly(&d.mirror()).is_ok_and(|m| m == p.mirror()));
    let parity = Verdict::identity(parity_holds(p, d.component_count()));
    let basepoints = if d.crossing_count() == 0 {
        Verdict::NotApplicable
    } else {
        Verdict::identity((0..options.basepoint_samples).all(|_| {
            let starts = random_basepoints(d, rng);
            engine.homfly_with_basepoints(d, &starts).is_ok_and(|q| &q == p)
        }))
    };
    let tree = (d.crossing_count() <= options.tree_limit)
        .then(|| skein_tree::skein_tree_with_cap(d, options.cap).ok())
        .flatten();
    let skein_tree = match &tree {
        Some(t) => Verdict::identity(&t.leaf_sum() == p),
        None => Verdict::NotApplicable,
    };
    let top_leaves = tree
        .filter(|_| seifert::analyze_diagram(d).is_homogeneous)
        .map(|t| skein_tree::observe_top_leaves(&t));
    PropertyChecks { skein_relation, mirror, parity, basepoints, skein_tree, top_leaves }
}
