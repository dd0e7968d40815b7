//! Degree bounds for homogeneous diagrams, checked against computed
//! polynomials and external invariants.

use serde::Serialize;
use thiserror::Error;

use crate::diagram::{DiagramStats, LinkDiagram};
use crate::poly::{LaurentPoly2, PolyError};
use crate::seifert::{self, GraphAnalysis, SeifertError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("diagram is not homogeneous")]
    NotHomogeneous,
    #[error("diagram is not alternating")]
    NotAlternating,
    #[error("no 4-ball Euler characteristic recorded")]
    MissingChi4,
    #[error("spanning-tree signature {computed} disagrees with recorded {recorded}")]
    SignatureMismatch { computed: i64, recorded: i64 },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Seifert(#[from] SeifertError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Equality,
    Strict,
    /// An identity or non-vanishing statement that checked out.
    Holds,
    Violated,
    NotApplicable,
}

impl Verdict {
    /// `lhs <= rhs`, with equality reported separately.
    pub fn compare(lhs: i64, rhs: i64) -> Verdict {
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Less => Verdict::Strict,
            std::cmp::Ordering::Equal => Verdict::Equality,
            std::cmp::Ordering::Greater => Verdict::Violated,
        }
    }

    pub fn identity(ok: bool) -> Verdict {
        if ok {
            Verdict::Holds
        } else {
            Verdict::Violated
        }
    }

    pub fn is_satisfied(self) -> bool {
        self != Verdict::Violated
    }
}

/// Monomial `v^v z^z` of the polynomial with its coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub v: i32,
    pub z: i32,
    pub coefficient: String,
}

/// Invariants supplied from outside the diagram.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExternalData {
    pub chi: Option<i64>,
    pub chi4: Option<i64>,
    pub sigma: Option<i64>,
    /// Number of split components of the link.
    pub split_components: Option<usize>,
    /// Whether the link admits a positive diagram, when known.
    pub positive_link: Option<bool>,
    pub homfly_ref: Option<LaurentPoly2>,
}

fn homogeneous(d: &LinkDiagram) -> Result<GraphAnalysis, BoundsError> {
    let g = seifert::analyze_diagram(d);
    if g.is_homogeneous {
        Ok(g)
    } else {
        Err(BoundsError::NotHomogeneous)
    }
}

/// `-s + w + 2 s_+ + 1 - 2 #sp`.
pub fn rhs_main(st: &DiagramStats, split: usize) -> i64 {
    -(st.s as i64) + st.w + 2 * st.s_plus as i64 + 1 - 2 * split as i64
}

/// `-s + c + 1`.
pub fn rhs_diagram(st: &DiagramStats) -> i64 {
    -(st.s as i64) + st.c as i64 + 1
}

/// `min_deg_v P <= -s + c + 1` on a homogeneous diagram. A positive diagram
/// that misses equality counts as a violation.
pub fn check_cromwell_diagram(d: &LinkDiagram, p: &LaurentPoly2) -> Result<Verdict, BoundsError> {
    homogeneous(d)?;
    let v = Verdict::compare(p.min_deg_v()? as i64, rhs_diagram(&d.stats()));
    if d.is_positive() && v != Verdict::Equality {
        return Ok(Verdict::Violated);
    }
    Ok(v)
}

/// `min_deg_v P <= -s + w + 2 s_+ + 1 - 2 #sp`, with `#sp` the number of
/// pieces of the homogeneous diagram.
pub fn check_theorem_main(d: &LinkDiagram, p: &LaurentPoly2) -> Result<Verdict, BoundsError> {
    homogeneous(d)?;
    let st = d.stats();
    Ok(Verdict::compare(p.min_deg_v()? as i64, rhs_main(&st, st.diagram_components)))
}

/// Top-`z` structure: the highest `z`-degree is `rank - (#sp - 1)` and its
/// coefficient has a monomial at `v^rhs_main`. On a connected diagram the
/// witness is the monomial at `(eps_rank_sum, rank)`.
pub fn check_theorem_main2(d: &LinkDiagram, p: &LaurentPoly2) -> Result<(Verdict, Option<Witness>), BoundsError> {
    let g = homogeneous(d)?;
    let st = d.stats();
    let split = st.diagram_components as i64;
    let top_ok = p.max_deg_z()? as i64 == g.rank - (split - 1);
    let h = p.highest_z_term()?;
    let rhs = rhs_main(&st, st.diagram_components);
    let h_ok = i32::try_from(rhs).is_ok_and(|r| h.coefficient(r) != 0.into());
    let witness = if split == 1 {
        let (a, b) = (g.eps_rank_sum()? as i32, g.rank as i32);
        Some(Witness { v: a, z: b, coefficient: p.coefficient(a, b).to_string() })
    } else {
        None
    };
    let witness_ok = witness.as_ref().is_none_or(|w| w.coefficient != "0");
    Ok((Verdict::identity(top_ok && h_ok && witness_ok), witness))
}

/// `min_deg_v P <= 1 - chi4`.
pub fn check_slice_cromwell(d: &LinkDiagram, p: &LaurentPoly2, chi4: Option<i64>) -> Result<Verdict, BoundsError> {
    homogeneous(d)?;
    let chi4 = chi4.ok_or(BoundsError::MissingChi4)?;
    Ok(Verdict::compare(p.min_deg_v()? as i64, 1 - chi4))
}

/// `min_deg_v P + #sp - 1 <= sigma` on an alternating diagram, with the
/// signature from spanning trees summed over pieces. Returns the verdict and
/// the computed signature.
pub fn check_signature_theorem(
    d: &LinkDiagram,
    p: &LaurentPoly2,
    recorded: Option<i64>,
) -> Result<(Verdict, i64), BoundsError> {
    if !d.is_alternating() {
        return Err(BoundsError::NotAlternating);
    }
    let sigma = seifert::split_traczyk_signature(d)?;
    if let Some(r) = recorded {
        if r != sigma {
            return Err(BoundsError::SignatureMismatch { computed: sigma, recorded: r });
        }
    }
    let lhs = p.min_deg_v()? as i64 + d.connected_count() as i64 - 1;
    Ok((Verdict::compare(lhs, sigma), sigma))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    /// Recorded polynomial equals the computed one.
    pub reference: Verdict,
    /// `-s + w + 1 <= min_deg_v`, valid for every diagram.
    pub self_linking: Verdict,
    /// `min_deg_v <= 1 - chi`.
    pub genus: Verdict,
    /// `min_deg_v <= -s + c + 1`.
    pub diagram: Verdict,
    /// `min_deg_v <= -s + w + 2 s_+ + 1 - 2 #sp`.
    pub main: Verdict,
    /// Top-`z` monomial statements.
    pub top_monomial: Verdict,
    /// `eps_rank_sum = -s + w + 2 s_+ - 1`.
    pub block_sum: Verdict,
    /// `min_deg_v <= 1 - chi4`.
    pub slice: Verdict,
    /// `min_deg_v + #sp - 1 <= sigma`.
    pub signature: Verdict,
    /// `rhs_main <= 1 - chi4 <= 1 - chi`.
    pub chain: Verdict,
}

impl Verdicts {
    pub fn iter(&self) -> impl Iterator<Item = (&'static str, Verdict)> {
        [
            ("reference", self.reference),
            ("self_linking", self.self_linking),
            ("genus", self.genus),
            ("diagram", self.diagram),
            ("main", self.main),
            ("top_monomial", self.top_monomial),
            ("block_sum", self.block_sum),
            ("slice", self.slice),
            ("signature", self.signature),
            ("chain", self.chain),
        ]
        .into_iter()
    }

    pub fn any_violated(&self) -> bool {
        self.iter().any(|(_, v)| v == Verdict::Violated)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphSummary {
    pub is_homogeneous: bool,
    pub is_positive: bool,
    pub is_negative: bool,
    pub rank: i64,
    pub eps_rank_sum: Option<i64>,
    pub component_count: usize,
    pub blocks: usize,
    pub positive_blocks: usize,
    pub negative_blocks: usize,
}

impl From<&GraphAnalysis> for GraphSummary {
    fn from(g: &GraphAnalysis) -> Self {
        GraphSummary {
            is_homogeneous: g.is_homogeneous,
            is_positive: g.is_positive,
            is_negative: g.is_negative,
            rank: g.rank,
            eps_rank_sum: g.eps_rank_sum,
            component_count: g.component_count,
            blocks: g.blocks.len(),
            positive_blocks: g.positive_blocks,
            negative_blocks: g.negative_blocks,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub name: String,
    pub stats: DiagramStats,
    pub graph: GraphSummary,
    pub alternating: bool,
    pub homfly: LaurentPoly2,
    pub min_deg_v: i32,
    pub max_deg_z: i32,
    /// Lowest `v`-degree of the top `z` coefficient.
    pub top_min_deg_v: i32,
    pub split_components: usize,
    pub rhs_eq1: Option<i64>,
    pub rhs_eq2: i64,
    pub rhs_main: i64,
    pub rhs_slice: Option<i64>,
    pub sigma_tree: Option<i64>,
    pub sigma_recorded: Option<i64>,
    pub positive_link: Option<bool>,
    pub verdicts: Verdicts,
    pub monomial_witness: Option<Witness>,
    pub notes: Vec<String>,
}

/// Runs every applicable check on a diagram and its polynomial.
pub fn evaluate(name: &str, d: &LinkDiagram, p: &LaurentPoly2, ext: &ExternalData) -> Result<BoundsReport, PolyError> {
    let st = d.stats();
    let g = seifert::analyze_diagram(d);
    let homog = g.is_homogeneous;
    let min_deg_v = p.min_deg_v()?;
    let h = p.highest_z_term()?;
    let mut notes = Vec::new();

    let split = if homog { st.diagram_components } else { ext.split_components.unwrap_or(st.diagram_components) };
    let non_splittable = split == st.diagram_components;
    let rhs_main_v = rhs_main(&st, split);
    let chi = if homog { Some(st.s as i64 - st.c as i64) } else { ext.chi };
    if let (true, Some(rec), Some(comp)) = (homog, ext.chi, chi) {
        if rec != comp {
            notes.push(format!("recorded chi {rec} differs from s - c = {comp}"));
        }
    }
    let rhs_eq1 = chi.map(|c| 1 - c);
    let rhs_slice = ext.chi4.map(|c| 1 - c);

    let na = |r: Result<Verdict, BoundsError>, notes: &mut Vec<String>, what: &str| match r {
        Ok(v) => v,
        Err(BoundsError::NotHomogeneous) => Verdict::NotApplicable,
        Err(e) => {
            notes.push(format!("{what}: {e}"));
            Verdict::NotApplicable
        }
    };

    let reference = match &ext.homfly_ref {
        Some(r) if r == p => Verdict::Holds,
        Some(r) => {
            notes.push(format!("recorded polynomial {r} differs"));
            Verdict::Violated
        }
        None => Verdict::NotApplicable,
    };
    let self_linking = Verdict::compare(st.self_linking + 1, min_deg_v as i64);
    let genus = match (homog, rhs_eq1) {
        (true, Some(r)) => {
            let v = Verdict::compare(min_deg_v as i64, r);
            let recorded_mismatch = ext.chi.is_some_and(|c| Some(c) != chi);
            if recorded_mismatch {
                Verdict::Violated
            } else {
                v
            }
        }
        _ => Verdict::NotApplicable,
    };
    let diagram = na(check_cromwell_diagram(d, p), &mut notes, "diagram bound");
    let main = na(check_theorem_main(d, p), &mut notes, "main bound");
    let (top_monomial, monomial_witness) = match check_theorem_main2(d, p) {
        Ok((v, w)) => (v, w),
        Err(e) => (na(Err(e), &mut notes, "top monomial"), None),
    };
    let block_sum = match (homog, seifert::prop_key_rhs(d), g.eps_rank_sum) {
        (true, Ok(rhs), Some(sum)) => Verdict::identity(rhs == sum),
        _ => Verdict::NotApplicable,
    };
    let slice = match (homog, ext.chi4) {
        (true, Some(_)) => na(check_slice_cromwell(d, p, ext.chi4), &mut notes, "slice bound"),
        _ => Verdict::NotApplicable,
    };
    let alternating = d.is_alternating();
    let (signature, sigma_tree) = if alternating {
        match check_signature_theorem(d, p, ext.sigma) {
            Ok((v, s)) => (v, Some(s)),
            Err(BoundsError::SignatureMismatch { computed, recorded }) => {
                notes.push(format!("spanning-tree signature {computed} but recorded {recorded}"));
                (Verdict::Violated, Some(computed))
            }
            Err(e) => (na(Err(e), &mut notes, "signature"), None),
        }
    } else {
        (Verdict::NotApplicable, None)
    };
    let chain = match (non_splittable, rhs_slice, rhs_eq1) {
        (true, Some(s), Some(e)) => {
            Verdict::identity(Verdict::compare(rhs_main_v, s).is_satisfied() && Verdict::compare(s, e).is_satisfied())
        }
        _ => Verdict::NotApplicable,
    };

    Ok(BoundsReport {
        name: name.to_string(),
        graph: GraphSummary::from(&g),
        alternating,
        homfly: p.clone(),
        min_deg_v,
        max_deg_z: p.max_deg_z()?,
        top_min_deg_v: h.min_deg()?,
        split_components: split,
        rhs_eq1,
        rhs_eq2: rhs_diagram(&st),
        rhs_main: rhs_main_v,
        rhs_slice,
        sigma_tree,
        sigma_recorded: ext.sigma,
        positive_link: ext.positive_link,
        verdicts: Verdicts {
            reference,
            self_linking,
            genus,
            diagram,
            main,
            top_monomial,
            block_sum,
            slice,
            signature,
            chain,
        },
        monomial_witness,
        notes,
        stats: st,
    })
}

/// One row of the equality-versus-positivity table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureRow {
    pub name: String,
    pub positive_diagram: bool,
    pub positive_link: Option<bool>,
    pub main_equality: bool,
    pub slice_equality: Option<bool>,
    /// Equality `top_min_deg_v = 1 - chi4` at the top `z` coefficient.
    pub top_slice_equality: Option<bool>,
    /// Equality without positivity.
    pub flagged: bool,
}

/// Equality cases of the main and slice bounds set against positivity, over
/// homogeneous reports.
pub fn conjecture_report(reports: &[BoundsReport]) -> Vec<ConjectureRow> {
    reports
        .iter()
        .filter(|r| r.graph.is_homogeneous)
        .map(|r| {
            let positive_diagram = r.graph.is_positive;
            let main_equality = r.verdicts.main == Verdict::Equality;
            let slice_equality = r.rhs_slice.map(|s| r.min_deg_v as i64 == s);
            let top_slice_equality = r.rhs_slice.map(|s| r.top_min_deg_v as i64 == s);
            let link_positive = positive_diagram || r.positive_link == Some(true);
            let flagged = (main_equality && !positive_diagram) || (slice_equality == Some(true) && !link_positive);
            ConjectureRow {
                name: r.name.clone(),
                positive_diagram,
                positive_link: r.positive_link,
                main_equality,
                slice_equality,
                top_slice_equality,
                flagged,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homfly::homfly;

    const TREFOIL: &str = "X(1,5,2,4),X(3,1,4,6),X(5,3,6,2)";
    const TREFOIL_LH: &str = "X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)";
    const FIGURE_EIGHT: &str = "X(4,2,5,1),X(8,6,1,5),X(6,3,7,4),X(2,7,3,8)";

    fn dp(pd: &str) -> (LinkDiagram, LaurentPoly2) {
        let d: LinkDiagram = pd.parse().unwrap();
        let p = homfly(&d).unwrap();
        (d, p)
    }

    #[test]
    fn diagram_bound() {
        let (d, p) = dp(TREFOIL);
        assert_eq!(check_cromwell_diagram(&d, &p), Ok(Verdict::Equality));
        let (d, p) = dp(FIGURE_EIGHT);
        assert_eq!(p.min_deg_v(), Ok(-2));
        assert_eq!(check_cromwell_diagram(&d, &p), Ok(Verdict::Strict));
        let (d, p) = dp("U(1)");
        assert_eq!(check_cromwell_diagram(&d, &p), Ok(Verdict::Equality));
    }

    #[test]
    fn main_bound() {
        let (d, p) = dp(TREFOIL);
        assert_eq!(check_theorem_main(&d, &p), Ok(Verdict::Equality));
        let (d, p) = dp(TREFOIL_LH);
        assert_eq!((p.min_deg_v(), rhs_main(&d.stats(), 1)), (Ok(-4), -2));
        assert_eq!(check_theorem_main(&d, &p), Ok(Verdict::Strict));
        let (d, p) = dp(FIGURE_EIGHT);
        assert_eq!(rhs_main(&d.stats(), 1), 0);
        assert_eq!(check_theorem_main(&d, &p), Ok(Verdict::Strict));
    }

    #[test]
    fn non_homogeneous_is_rejected() {
        // 8_20
        let (d, p) = dp("X(1,7,2,6),X(4,13,5,14),X(5,9,6,8),X(7,3,8,2),X(10,15,11,16),X(12,9,13,10),X(14,3,15,4),X(16,11,1,12)");
        assert!(!seifert::analyze_diagram(&d).is_homogeneous);
        assert_eq!(check_theorem_main(&d, &p), Err(BoundsError::NotHomogeneous));
    }

    #[test]
    fn top_monomial() {
        let (d, p) = dp(TREFOIL);
        let (v, w) = check_theorem_main2(&d, &p).unwrap();
        assert_eq!(v, Verdict::Holds);
        assert_eq!(w, Some(Witness { v: 2, z: 2, coefficient: "1".into() }));
        let (d, p) = dp(FIGURE_EIGHT);
        let (v, w) = check_theorem_main2(&d, &p).unwrap();
        assert_eq!((v, w), (Verdict::Holds, Some(Witness { v: 0, z: 2, coefficient: "-1".into() })));
        let (d, p) = dp(&format!("{TREFOIL},U(1)"));
        assert_eq!(p.highest_z_term().unwrap().coefficient(1), 1.into());
        assert_eq!(check_theorem_main2(&d, &p), Ok((Verdict::Holds, None)));
    }

    #[test]
    fn slice_bound() {
        let (d, p) = dp(TREFOIL);
        assert_eq!(check_slice_cromwell(&d, &p, Some(-1)), Ok(Verdict::Equality));
        assert_eq!(check_slice_cromwell(&d, &p, None), Err(BoundsError::MissingChi4));
        let (d, p) = dp("U(1)");
        assert_eq!(check_slice_cromwell(&d, &p, Some(1)), Ok(Verdict::Equality));
    }

    #[test]
    fn signature_bound() {
        let (d, p) = dp(TREFOIL);
        assert_eq!(check_signature_theorem(&d, &p, Some(2)), Ok((Verdict::Equality, 2)));
        assert_eq!(
            check_signature_theorem(&d, &p, Some(-2)),
            Err(BoundsError::SignatureMismatch { computed: 2, recorded: -2 })
        );
        let (d, p) = dp(FIGURE_EIGHT);
        assert_eq!(check_signature_theorem(&d, &p, Some(0)), Ok((Verdict::Strict, 0)));
        let (d, p) = dp(&format!("{TREFOIL},X(7,11,8,10),X(9,7,10,12),X(11,9,12,8)"));
        assert_eq!(p.min_deg_v(), Ok(3));
        assert_eq!(check_signature_theorem(&d, &p, None), Ok((Verdict::Equality, 4)));
    }

    #[test]
    fn evaluate_unknot() {
        let (d, p) = dp("U(1)");
        let ext = ExternalData { chi: Some(1), chi4: Some(1), sigma: Some(0), ..Default::default() };
        let r = evaluate("0_1", &d, &p, &ext).unwrap();
        assert!(r.verdicts.iter().all(|(_, v)| matches!(v, Verdict::Equality | Verdict::Holds | Verdict::NotApplicable)));
        assert!(!r.verdicts.any_violated());
        assert!(r.notes.is_empty(), "{:?}", r.notes);
    }

    #[test]
    fn evaluate_flags_wrong_reference() {
        let (d, p) = dp(TREFOIL);
        let ext = ExternalData { homfly_ref: Some(p.mirror()), ..Default::default() };
        let r = evaluate("3_1", &d, &p, &ext).unwrap();
        assert_eq!(r.verdicts.reference, Verdict::Violated);
        assert!(r.verdicts.any_violated());
    }

    #[test]
    fn conjecture_rows() {
        let reports: Vec<_> = [("3_1", TREFOIL, -1), ("4_1", FIGURE_EIGHT, 1)]
            .iter()
            .map(|(n, pd, chi4)| {
                let (d, p) = dp(pd);
                evaluate(n, &d, &p, &ExternalData { chi4: Some(*chi4), ..Default::default() }).unwrap()
            })
            .collect();
        let rows = conjecture_report(&reports);
        assert_eq!((rows[0].main_equality, rows[0].slice_equality, rows[0].flagged), (true, Some(true), false));
        assert_eq!((rows[1].main_equality, rows[1].slice_equality, rows[1].flagged), (false, Some(false), false));
    }
}
