//! Oriented link diagrams in planar-diagram (PD) form.
//!
//! A crossing lists four arc labels starting at the incoming under-strand
//! and proceeding counterclockwise. The over-strand runs between slots 1
//! and 3; a crossing is positive when it enters at slot 3 and leaves at
//! slot 1. Zero-crossing unknotted components are carried as a separate
//! count (`U(k)` in text form).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type ArcId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("malformed PD syntax near `{token}`: {reason}")]
    MalformedSyntax { token: String, reason: String },
    #[error("inconsistent diagram at arc {arc}: {reason}")]
    InconsistentDiagram { arc: ArcId, reason: String },
    #[error("crossing index {index} out of range for a diagram with {crossings} crossings")]
    IndexOutOfRange { index: usize, crossings: usize },
    #[error("empty diagram")]
    Empty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    arcs: [ArcId; 4],
    sign: Sign,
}

impl Crossing {
    pub fn arcs(&self) -> [ArcId; 4] {
        self.arcs
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    fn over_in(&self) -> usize {
        match self.sign {
            Sign::Positive => 3,
            Sign::Negative => 1,
        }
    }

    fn over_out(&self) -> usize {
        4 - self.over_in()
    }

    fn exit_slot(&self, entry: usize) -> usize {
        if entry == 0 {
            2
        } else {
            self.over_out()
        }
    }

    /// Crossing change; the incoming under-slot moves to the old over-strand.
    fn switched(&self) -> Crossing {
        let [a, b, c, d] = self.arcs;
        match self.sign {
            Sign::Positive => Crossing { arcs: [d, a, b, c], sign: Sign::Negative },
            Sign::Negative => Crossing { arcs: [b, c, d, a], sign: Sign::Positive },
        }
    }

    /// Arc pairs joined by the orientation-preserving smoothing, (in, out).
    fn smoothing_pairs(&self) -> [(ArcId, ArcId); 2] {
        let [a, b, c, d] = self.arcs;
        match self.sign {
            Sign::Positive => [(a, b), (d, c)],
            Sign::Negative => [(a, d), (b, c)],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResolveMode {
    Switch,
    Smooth,
}

/// One passage of a component through a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pass {
    pub crossing: usize,
    pub under: bool,
}

#[derive(Clone, Copy, Debug, Default)]
struct End {
    crossing: usize,
    slot: usize,
}

/// Where each arc enters a crossing.
struct ArcTable {
    head: Vec<Option<End>>,
}

impl ArcTable {
    fn build(crossings: &[Crossing]) -> ArcTable {
        let max = crossings.iter().flat_map(|x| x.arcs).max().map_or(0, |m| m as usize + 1);
        let mut head = vec![None; max];
        for (i, x) in crossings.iter().enumerate() {
            head[x.arcs[0] as usize] = Some(End { crossing: i, slot: 0 });
            head[x.arcs[x.over_in()] as usize] = Some(End { crossing: i, slot: x.over_in() });
        }
        ArcTable { head }
    }

    fn head(&self, a: ArcId) -> End {
        self.head[a as usize].expect("arc has a head")
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagramStats {
    pub s: usize,
    pub c: usize,
    pub w: i64,
    pub s_plus: usize,
    pub diagram_components: usize,
    pub self_linking: i64,
}

/// Seifert circles as arc sets; zero-crossing components count as circles
/// with no arcs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeifertCircles {
    pub circles: Vec<Vec<ArcId>>,
    pub free_loops: usize,
}

impl SeifertCircles {
    pub fn count(&self) -> usize {
        self.circles.len() + self.free_loops
    }

    /// Index of the circle containing arc `a`.
    pub fn circle_of(&self, a: ArcId) -> Option<usize> {
        self.circles.iter().position(|c| c.contains(&a))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DiagramJson", into = "DiagramJson")]
pub struct LinkDiagram {
    name: Option<String>,
    crossings: Vec<Crossing>,
    free_loops: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct DiagramJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    crossings: Vec<[ArcId; 4]>,
    #[serde(default)]
    unknot_components: usize,
}

impl TryFrom<DiagramJson> for LinkDiagram {
    type Error = DiagramError;
    fn try_from(j: DiagramJson) -> Result<Self, DiagramError> {
        let mut d = LinkDiagram::from_pd(&j.crossings, j.unknot_components)?;
        d.name = j.name;
        Ok(d)
    }
}

impl From<LinkDiagram> for DiagramJson {
    fn from(d: LinkDiagram) -> Self {
        let d = d.relabeled();
        DiagramJson {
            name: d.name.clone(),
            crossings: d.crossings.iter().map(|x| x.arcs).collect(),
            unknot_components: d.free_loops,
        }
    }
}

impl LinkDiagram {
    /// The `k`-component zero-crossing unlink.
    pub fn unlink(k: usize) -> Self {
        LinkDiagram { name: None, crossings: Vec::new(), free_loops: k }
    }

    /// Builds a validated diagram from raw PD tuples, inferring strand
    /// orientations, and relabels arcs to `1..=2c` along components.
    pub fn from_pd(tuples: &[[ArcId; 4]], unknots: usize) -> Result<Self, DiagramError> {
        if tuples.is_empty() && unknots == 0 {
            return Err(DiagramError::Empty);
        }
        let crossings = orient(tuples)?;
        let d = LinkDiagram { name: None, crossings, free_loops: unknots };
        d.check_seifert_loops()?;
        Ok(d.relabeled())
    }

    /// Closure of a braid on `strands` strands. Generator `i` (1-based)
    /// crosses strands `i` and `i + 1`; a positive entry gives a positive
    /// crossing and a negative entry its inverse. Strands that never cross
    /// close up into free loops.
    pub fn from_braid(strands: usize, word: &[i32]) -> Result<Self, DiagramError> {
        let mut at: Vec<ArcId> = (1..=strands as ArcId).collect();
        let mut next = strands as ArcId + 1;
        let mut raw = Vec::with_capacity(word.len());
        for &g in word {
            let i = g.unsigned_abs() as usize;
            if g == 0 || i >= strands {
                return Err(DiagramError::MalformedSyntax {
                    token: g.to_string(),
                    reason: format!("generator outside 1..{strands}"),
                });
            }
            let (left, right) = (at[i - 1], at[i]);
            let (top_left, top_right) = (next, next + 1);
            next += 2;
            raw.push(if g > 0 {
                [right, top_right, top_left, left]
            } else {
                [left, right, top_right, top_left]
            });
            at[i - 1] = top_left;
            at[i] = top_right;
        }
        // Close the braid: the last arc at each position is the first one.
        let mut close: BTreeMap<ArcId, ArcId> = BTreeMap::new();
        let mut loops = 0;
        for (pos, &a) in at.iter().enumerate() {
            if a == pos as ArcId + 1 {
                loops += 1;
            } else {
                close.insert(a, pos as ArcId + 1);
            }
        }
        let tuples: Vec<[ArcId; 4]> = raw.iter().map(|x| x.map(|a| *close.get(&a).unwrap_or(&a))).collect();
        LinkDiagram::from_pd(&tuples, loops)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn arcs(&self) -> Vec<ArcId> {
        let mut arcs: Vec<ArcId> = self.crossings.iter().flat_map(|x| x.arcs).collect();
        arcs.sort_unstable();
        arcs.dedup();
        arcs
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|x| x.sign.value()).sum()
    }

    pub fn is_positive(&self) -> bool {
        self.crossings.iter().all(|x| x.sign == Sign::Positive)
    }

    pub fn is_negative(&self) -> bool {
        self.crossings.iter().all(|x| x.sign == Sign::Negative)
    }

    /// Components carrying crossings, each as its arcs in traversal order
    /// starting from its smallest arc. Free loops are not included.
    pub fn strand_components(&self) -> Vec<Vec<ArcId>> {
        let table = ArcTable::build(&self.crossings);
        let mut seen = vec![false; table.head.len()];
        let mut out = Vec::new();
        for start in self.arcs() {
            if seen[start as usize] {
                continue;
            }
            let mut comp = Vec::new();
            let mut a = start;
            loop {
                seen[a as usize] = true;
                comp.push(a);
                let End { crossing, slot } = table.head(a);
                let x = &self.crossings[crossing];
                a = x.arcs[x.exit_slot(slot)];
                if a == start {
                    break;
                }
            }
            out.push(comp);
        }
        out
    }

    /// Number of link components, zero-crossing ones included.
    pub fn component_count(&self) -> usize {
        self.strand_components().len() + self.free_loops
    }

    /// Passes through crossings, component by component, starting each
    /// component at the given arc (one arc per strand component).
    pub fn traversal(&self, starts: &[ArcId]) -> Vec<Pass> {
        let table = ArcTable::build(&self.crossings);
        let mut out = Vec::with_capacity(2 * self.crossings.len());
        for &start in starts {
            let mut a = start;
            loop {
                let End { crossing, slot } = table.head(a);
                out.push(Pass { crossing, under: slot == 0 });
                let x = &self.crossings[crossing];
                a = x.arcs[x.exit_slot(slot)];
                if a == start {
                    break;
                }
            }
        }
        out
    }

    /// First arc of every strand component: the default basepoints.
    pub fn default_basepoints(&self) -> Vec<ArcId> {
        self.strand_components().iter().map(|c| c[0]).collect()
    }

    /// Crossings first met on the over-strand when traversing from
    /// `starts`, in the order they are met.
    pub fn non_ascending_crossings(&self, starts: &[ArcId]) -> Vec<usize> {
        let mut seen = vec![false; self.crossings.len()];
        let mut out = Vec::new();
        for p in self.traversal(starts) {
            if !seen[p.crossing] {
                seen[p.crossing] = true;
                if !p.under {
                    out.push(p.crossing);
                }
            }
        }
        out
    }

    /// Basepoints, in component order, with the fewest non-ascending
    /// crossings. A start arc only affects its own component's
    /// self-crossings, so each component is optimized separately; component
    /// orders are searched exhaustively up to five components.
    pub fn ascending_basepoints(&self) -> Vec<ArcId> {
        let comps = self.strand_components();
        let starts: Vec<ArcId> = comps
            .iter()
            .map(|c| *c.iter().min_by_key(|&&a| self.non_ascending_crossings(&[a]).len()).expect("nonempty"))
            .collect();
        let n = comps.len();
        if !(2..=5).contains(&n) {
            return starts;
        }
        let mut comp_of = vec![0; self.arcs().last().map_or(0, |&m| m as usize + 1)];
        for (i, c) in comps.iter().enumerate() {
            for &a in c {
                comp_of[a as usize] = i;
            }
        }
        // over[i][j]: crossings where component i passes over component j
        let mut over = vec![vec![0usize; n]; n];
        for x in &self.crossings {
            let (u, o) = (comp_of[x.arcs[0] as usize], comp_of[x.arcs[1] as usize]);
            if u != o {
                over[o][u] += 1;
            }
        }
        let cost = |order: &[usize]| -> usize {
            (0..n).flat_map(|p| (p + 1..n).map(move |q| (p, q))).map(|(p, q)| over[order[p]][order[q]]).sum()
        };
        let mut best: Vec<usize> = (0..n).collect();
        let mut best_cost = cost(&best);
        for order in permutations(n) {
            let c = cost(&order);
            if c < best_cost {
                best_cost = c;
                best = order;
            }
        }
        best.into_iter().map(|i| starts[i]).collect()
    }

    pub fn seifert_circles(&self) -> SeifertCircles {
        let (mut uf, arcs) = self.arc_union_find();
        for x in &self.crossings {
            for (a, b) in x.smoothing_pairs() {
                uf.union(a as usize, b as usize);
            }
        }
        SeifertCircles { circles: group_arcs(&mut uf, &arcs), free_loops: self.free_loops }
    }

    /// Components of the diagram after smoothing every negative crossing.
    pub fn s_plus(&self) -> usize {
        let (mut uf, arcs) = self.arc_union_find();
        for x in &self.crossings {
            match x.sign {
                Sign::Negative => {
                    for (a, b) in x.smoothing_pairs() {
                        uf.union(a as usize, b as usize);
                    }
                }
                Sign::Positive => join_all(&mut uf, x),
            }
        }
        group_arcs(&mut uf, &arcs).len() + self.free_loops
    }

    /// Connected components of the diagram as a plane curve.
    pub fn connected_count(&self) -> usize {
        self.connected_groups().len() + self.free_loops
    }

    fn connected_groups(&self) -> Vec<Vec<usize>> {
        let (mut uf, _) = self.arc_union_find();
        for x in &self.crossings {
            join_all(&mut uf, x);
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, x) in self.crossings.iter().enumerate() {
            groups.entry(uf.find(x.arcs[0] as usize)).or_default().push(i);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort();
        out
    }

    /// Connected pieces; each free loop becomes its own one-component unlink.
    pub fn split_components(&self) -> Vec<LinkDiagram> {
        let mut out: Vec<LinkDiagram> = self
            .connected_groups()
            .into_iter()
            .map(|group| LinkDiagram {
                name: None,
                crossings: group.into_iter().map(|i| self.crossings[i]).collect(),
                free_loops: 0,
            })
            .collect();
        out.extend((0..self.free_loops).map(|_| LinkDiagram::unlink(1)));
        out
    }

    pub fn stats(&self) -> DiagramStats {
        let s = self.seifert_circles().count();
        let w = self.writhe();
        DiagramStats {
            s,
            c: self.crossings.len(),
            w,
            s_plus: self.s_plus(),
            diagram_components: self.connected_count(),
            self_linking: w - s as i64,
        }
    }

    pub fn resolve(&self, index: usize, mode: ResolveMode) -> Result<LinkDiagram, DiagramError> {
        if index >= self.crossings.len() {
            return Err(DiagramError::IndexOutOfRange { index, crossings: self.crossings.len() });
        }
        Ok(match mode {
            ResolveMode::Switch => self.switched(index),
            ResolveMode::Smooth => self.smoothed(index),
        })
    }

    pub(crate) fn switched(&self, index: usize) -> LinkDiagram {
        let mut out = self.clone();
        out.crossings[index] = out.crossings[index].switched();
        out
    }

    pub(crate) fn switch_in_place(&mut self, index: usize) {
        self.crossings[index] = self.crossings[index].switched();
    }

    /// Oriented smoothing of crossing `index`. Each incoming arc absorbs the
    /// outgoing arc it is joined to; a joined pair that is already one arc
    /// closes up into a free loop.
    pub(crate) fn smoothed(&self, index: usize) -> LinkDiagram {
        let mut out = self.clone();
        let x = out.crossings.remove(index);
        let mut renamed: Vec<(ArcId, ArcId)> = Vec::new();
        for (incoming, outgoing) in x.smoothing_pairs() {
            // The first merge may have renamed arcs of the second pair.
            let current = |mut a: ArcId| {
                for &(from, to) in &renamed {
                    if a == from {
                        a = to;
                    }
                }
                a
            };
            let (incoming, outgoing) = (current(incoming), current(outgoing));
            if incoming == outgoing {
                out.free_loops += 1;
                continue;
            }
            for y in &mut out.crossings {
                for a in &mut y.arcs {
                    if *a == outgoing {
                        *a = incoming;
                    }
                }
            }
            renamed.push((outgoing, incoming));
        }
        out.name = None;
        out
    }

    pub fn mirror(&self) -> LinkDiagram {
        LinkDiagram {
            name: self.name.as_ref().map(|n| format!("{n}m")),
            crossings: self.crossings.iter().map(Crossing::switched).collect(),
            free_loops: self.free_loops,
        }
    }

    /// Split union with arcs of `other` shifted past those of `self`.
    pub fn disjoint_union(&self, other: &LinkDiagram) -> LinkDiagram {
        let offset = self.crossings.iter().flat_map(|x| x.arcs).max().unwrap_or(0);
        let shifted = other.crossings.iter().map(|x| Crossing { arcs: x.arcs.map(|a| a + offset), sign: x.sign });
        LinkDiagram {
            name: None,
            crossings: self.crossings.iter().copied().chain(shifted).collect(),
            free_loops: self.free_loops + other.free_loops,
        }
    }

    /// Every strand component alternates over and under along its length.
    pub fn is_alternating(&self) -> bool {
        let starts = self.default_basepoints();
        let table = ArcTable::build(&self.crossings);
        starts.iter().all(|&start| {
            let mut passes = Vec::new();
            let mut a = start;
            loop {
                let End { crossing, slot } = table.head(a);
                passes.push(slot == 0);
                let x = &self.crossings[crossing];
                a = x.arcs[x.exit_slot(slot)];
                if a == start {
                    break;
                }
            }
            (0..passes.len()).all(|i| passes[i] != passes[(i + 1) % passes.len()])
        })
    }

    /// Crossings that are cut vertices of the projection: removing one
    /// separates its four incident half-edges into more than one group.
    pub fn nugatory_crossings(&self) -> Vec<usize> {
        (0..self.crossings.len()).filter(|&i| self.is_nugatory(i)).collect()
    }

    pub fn is_reduced(&self) -> bool {
        self.nugatory_crossings().is_empty()
    }

    fn is_nugatory(&self, index: usize) -> bool {
        // Arcs connected through the other crossings share a group; an arc
        // with both ends at `index` touches nothing else.
        let (mut uf, _) = self.arc_union_find();
        for (i, x) in self.crossings.iter().enumerate() {
            if i != index {
                join_all(&mut uf, x);
            }
        }
        let x = &self.crossings[index];
        let mut slots = UnionFind::new(4);
        for s in 0..4 {
            for t in (s + 1)..4 {
                let (a, b) = (x.arcs[s] as usize, x.arcs[t] as usize);
                if a == b || uf.find(a) == uf.find(b) {
                    slots.union(s, t);
                }
            }
        }
        (1..4).any(|s| slots.find(s) != slots.find(0))
    }

    /// Arcs relabeled `1..=2c`, consecutively along each component. Each
    /// component starts at its smallest arc, except components that never
    /// pass under: those start at the arc entering their first-listed
    /// crossing, so that the numbering alone pins their orientation.
    pub fn relabeled(&self) -> LinkDiagram {
        let table = ArcTable::build(&self.crossings);
        let mut comps = self.strand_components();
        for comp in &mut comps {
            let has_under = comp.iter().any(|&a| table.head(a).slot == 0);
            if !has_under {
                let first = comp
                    .iter()
                    .enumerate()
                    .min_by_key(|(_, &a)| table.head(a).crossing)
                    .map(|(i, _)| i)
                    .unwrap_or(0);
                comp.rotate_left(first);
            }
        }
        let mut label = vec![0; table.head.len()];
        let mut next = 1;
        for comp in &comps {
            for &a in comp {
                label[a as usize] = next;
                next += 1;
            }
        }
        LinkDiagram {
            name: self.name.clone(),
            crossings: self
                .crossings
                .iter()
                .map(|x| Crossing { arcs: x.arcs.map(|a| label[a as usize]), sign: x.sign })
                .collect(),
            free_loops: self.free_loops,
        }
    }

    /// PD text after canonical relabeling.
    pub fn to_pd(&self) -> String {
        let d = self.relabeled();
        let mut parts: Vec<String> = d
            .crossings
            .iter()
            .map(|x| format!("X({},{},{},{})", x.arcs[0], x.arcs[1], x.arcs[2], x.arcs[3]))
            .collect();
        if d.free_loops > 0 {
            parts.push(format!("U({})", d.free_loops));
        }
        parts.join(",")
    }

    /// Canonical code of a connected diagram with at least one crossing:
    /// the lexicographically least traversal encoding over all starting arcs,
    /// together with the diagram relabeled in that encoding.
    pub(crate) fn canonical_connected(&self) -> (LinkDiagram, Vec<u32>) {
        debug_assert!(!self.crossings.is_empty() && self.free_loops == 0);
        let table = ArcTable::build(&self.crossings);
        let mut best: Option<(Vec<u32>, Vec<u32>, Vec<usize>)> = None;
        for start in self.arcs() {
            let (arc_label, order) = self.traversal_labels(&table, start);
            let code: Vec<u32> = order
                .iter()
                .flat_map(|&i| {
                    let x = &self.crossings[i];
                    let s = match x.sign {
                        Sign::Positive => 1,
                        Sign::Negative => 0,
                    };
                    x.arcs.iter().map(|&a| arc_label[a as usize]).chain(std::iter::once(s)).collect::<Vec<_>>()
                })
                .collect();
            if best.as_ref().is_none_or(|(b, _, _)| code < *b) {
                best = Some((code, arc_label, order));
            }
        }
        let (code, arc_label, order) = best.expect("at least one arc");
        let d = LinkDiagram {
            name: None,
            crossings: order
                .iter()
                .map(|&i| {
                    let x = &self.crossings[i];
                    Crossing { arcs: x.arcs.map(|a| arc_label[a as usize] + 1), sign: x.sign }
                })
                .collect(),
            free_loops: 0,
        };
        (d, code)
    }

    /// Labels arcs and crossings in the order a traversal from `start` meets
    /// them; further components are entered through the lowest-labeled
    /// crossing that still has an unlabeled arc, lowest slot first.
    fn traversal_labels(&self, table: &ArcTable, start: ArcId) -> (Vec<u32>, Vec<usize>) {
        const UNSET: u32 = u32::MAX;
        let mut arc_label = vec![UNSET; table.head.len()];
        let mut cross_label = vec![false; self.crossings.len()];
        let mut order = Vec::with_capacity(self.crossings.len());
        let mut next = 0;
        let mut entry = Some(start);
        let mut scan = 0;
        while let Some(first) = entry {
            let mut a = first;
            loop {
                arc_label[a as usize] = next;
                next += 1;
                let End { crossing, slot } = table.head(a);
                if !cross_label[crossing] {
                    cross_label[crossing] = true;
                    order.push(crossing);
                }
                let x = &self.crossings[crossing];
                a = x.arcs[x.exit_slot(slot)];
                if a == first {
                    break;
                }
            }
            entry = None;
            while scan < order.len() {
                let x = &self.crossings[order[scan]];
                if let Some(&a) = x.arcs.iter().find(|&&a| arc_label[a as usize] == UNSET) {
                    entry = Some(a);
                    break;
                }
                scan += 1;
            }
        }
        (arc_label, order)
    }

    /// Order-independent key identifying the diagram up to relabeling.
    pub fn isomorphism_key(&self) -> (Vec<Vec<u32>>, usize) {
        let mut codes: Vec<Vec<u32>> = Vec::new();
        let mut loops = 0;
        for part in self.split_components() {
            if part.crossings.is_empty() {
                loops += part.free_loops;
            } else {
                codes.push(part.canonical_connected().1);
            }
        }
        codes.sort();
        (codes, loops)
    }

    pub fn is_isomorphic(&self, other: &LinkDiagram) -> bool {
        self.isomorphism_key() == other.isomorphism_key()
    }

    fn arc_union_find(&self) -> (UnionFind, Vec<ArcId>) {
        let arcs = self.arcs();
        let max = arcs.last().map_or(0, |&m| m as usize + 1);
        (UnionFind::new(max), arcs)
    }

    fn check_seifert_loops(&self) -> Result<(), DiagramError> {
        let circles = self.seifert_circles();
        let mut circle_of = BTreeMap::new();
        for (i, c) in circles.circles.iter().enumerate() {
            for &a in c {
                circle_of.insert(a, i);
            }
        }
        for x in &self.crossings {
            if circle_of[&x.arcs[0]] == circle_of[&x.arcs[2]] {
                return Err(DiagramError::InconsistentDiagram {
                    arc: x.arcs[0],
                    reason: "crossing joins a Seifert circle to itself; the code is not planar".into(),
                });
            }
        }
        Ok(())
    }
}

fn join_all(uf: &mut UnionFind, x: &Crossing) {
    for a in &x.arcs[1..] {
        uf.union(x.arcs[0] as usize, *a as usize);
    }
}

/// All orderings of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in permutations(n - 1) {
            let mut p = vec![first];
            p.extend(rest.into_iter().map(|r| if r >= first { r + 1 } else { r }));
            out.push(p);
        }
    }
    out
}

fn group_arcs(uf: &mut UnionFind, arcs: &[ArcId]) -> Vec<Vec<ArcId>> {
    let mut groups: BTreeMap<usize, Vec<ArcId>> = BTreeMap::new();
    for &a in arcs {
        groups.entry(uf.find(a as usize)).or_default().push(a);
    }
    let mut out: Vec<Vec<ArcId>> = groups.into_values().collect();
    out.sort();
    out
}

/// Assigns over-strand directions (and hence signs) to raw PD tuples.
fn orient(tuples: &[[ArcId; 4]]) -> Result<Vec<Crossing>, DiagramError> {
    let mut count: BTreeMap<ArcId, usize> = BTreeMap::new();
    for t in tuples {
        for &a in t {
            *count.entry(a).or_default() += 1;
        }
    }
    if let Some((&arc, &n)) = count.iter().find(|(_, &n)| n != 2) {
        return Err(DiagramError::InconsistentDiagram {
            arc,
            reason: format!("arc occurs {n} times; every arc must occur exactly twice"),
        });
    }

    // Arc ends are known as heads (entering a crossing) or tails (leaving).
    let mut head: BTreeMap<ArcId, (usize, usize)> = BTreeMap::new();
    let mut tail: BTreeMap<ArcId, (usize, usize)> = BTreeMap::new();
    let set = |map: &mut BTreeMap<ArcId, (usize, usize)>, a: ArcId, at: (usize, usize), what: &str| {
        if map.insert(a, at).is_some() {
            Err(DiagramError::InconsistentDiagram {
                arc: a,
                reason: format!("arc {what} two crossings; orientation cycle is broken"),
            })
        } else {
            Ok(())
        }
    };
    for (i, t) in tuples.iter().enumerate() {
        set(&mut head, t[0], (i, 0), "enters")?;
        set(&mut tail, t[2], (i, 2), "leaves")?;
    }

    let mut signs: Vec<Option<Sign>> = vec![None; tuples.len()];
    let assign = |i: usize,
                      sign: Sign,
                      head: &mut BTreeMap<ArcId, (usize, usize)>,
                      tail: &mut BTreeMap<ArcId, (usize, usize)>,
                      signs: &mut Vec<Option<Sign>>|
     -> Result<(), DiagramError> {
        let t = tuples[i];
        let (inn, out) = match sign {
            Sign::Positive => (3, 1),
            Sign::Negative => (1, 3),
        };
        set(head, t[inn], (i, inn), "enters")?;
        set(tail, t[out], (i, out), "leaves")?;
        signs[i] = Some(sign);
        Ok(())
    };

    loop {
        let mut progress = true;
        while progress {
            progress = false;
            for i in 0..tuples.len() {
                if signs[i].is_some() {
                    continue;
                }
                let [_, j, _, l] = tuples[i];
                let elsewhere = |m: &BTreeMap<ArcId, (usize, usize)>, a: ArcId| m.get(&a).is_some_and(|&(c, _)| c != i);
                let sign = if j == l {
                    None
                } else if elsewhere(&head, j) || elsewhere(&tail, l) {
                    // j leaves here, l enters here.
                    Some(Sign::Positive)
                } else if elsewhere(&tail, j) || elsewhere(&head, l) {
                    Some(Sign::Negative)
                } else if head.contains_key(&j) || tail.contains_key(&l) {
                    // Arc ends at this same crossing's under-slots.
                    Some(Sign::Positive)
                } else if tail.contains_key(&j) || head.contains_key(&l) {
                    Some(Sign::Negative)
                } else {
                    None
                };
                if let Some(sign) = sign {
                    assign(i, sign, &mut head, &mut tail, &mut signs)?;
                    progress = true;
                }
            }
        }
        // Components that never pass under: fall back to arc numbering at
        // their first crossing, then propagate again.
        let Some(i) = signs.iter().position(Option::is_none) else { break };
        let [_, j, _, l] = tuples[i];
        let sign = if j == l || j == l.wrapping_add(1) {
            Sign::Positive
        } else if l == j.wrapping_add(1) {
            Sign::Negative
        } else if j < l {
            Sign::Positive
        } else {
            Sign::Negative
        };
        assign(i, sign, &mut head, &mut tail, &mut signs)?;
    }

    Ok(tuples
        .iter()
        .zip(signs)
        .map(|(&arcs, s)| Crossing { arcs, sign: s.expect("all crossings oriented") })
        .collect())
}

impl FromStr for LinkDiagram {
    type Err = DiagramError;

    /// Comma-separated `X(a,b,c,d)` crossings and `U(k)` unknot tokens.
    /// Square brackets are accepted in place of parentheses.
    fn from_str(text: &str) -> Result<Self, DiagramError> {
        let src: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let src = src.strip_prefix("PD[").and_then(|s| s.strip_suffix(']')).unwrap_or(&src);
        let mut tuples = Vec::new();
        let mut unknots = 0;
        let mut rest = src;
        let malformed = |token: &str, reason: &str| DiagramError::MalformedSyntax {
            token: token.to_string(),
            reason: reason.to_string(),
        };
        while !rest.is_empty() {
            let close = rest.find([')', ']']).ok_or_else(|| malformed(rest, "unterminated token"))?;
            let token = &rest[..=close];
            rest = &rest[close + 1..];
            if let Some(r) = rest.strip_prefix(',') {
                if r.is_empty() {
                    return Err(malformed(token, "trailing comma"));
                }
                rest = r;
            } else if !rest.is_empty() {
                return Err(malformed(rest, "expected ',' between tokens"));
            }
            let (kind, body) = token.split_at(1);
            let body = body
                .strip_prefix(['(', '['])
                .and_then(|b| b.strip_suffix([')', ']']))
                .ok_or_else(|| malformed(token, "expected `X(...)` or `U(...)`"))?;
            let nums: Vec<ArcId> = body
                .split(',')
                .map(|n| n.parse::<ArcId>())
                .collect::<Result<_, _>>()
                .map_err(|_| malformed(token, "arc labels must be non-negative integers"))?;
            match kind {
                "X" | "x" => {
                    let arcs: [ArcId; 4] = nums
                        .try_into()
                        .map_err(|v: Vec<ArcId>| malformed(token, &format!("crossing has {} labels, expected 4", v.len())))?;
                    tuples.push(arcs);
                }
                "U" | "u" => {
                    let [k] = nums[..] else {
                        return Err(malformed(token, "`U` takes a single component count"));
                    };
                    unknots += k as usize;
                }
                _ => return Err(malformed(token, "unknown token kind")),
            }
        }
        LinkDiagram::from_pd(&tuples, unknots)
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pd())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const TREFOIL: &str = "X(1,5,2,4),X(3,1,4,6),X(5,3,6,2)";
    const TREFOIL_LH: &str = "X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)";
    const HOPF_POS: &str = "X(4,2,3,1),X(2,4,1,3)";
    const HOPF_POS_ALT: &str = "X(1,3,2,4),X(3,1,4,2)";
    const FIGURE_EIGHT: &str = "X(4,2,5,1),X(8,6,1,5),X(6,3,7,4),X(2,7,3,8)";

    #[test]
    fn braid_closures() {
        let t = LinkDiagram::from_braid(2, &[1, 1, 1]).unwrap();
        assert!(t.is_isomorphic(&d(TREFOIL)));
        let f = LinkDiagram::from_braid(3, &[1, -2, 1, -2]).unwrap();
        assert_eq!((f.crossing_count(), f.writhe(), f.component_count()), (4, 0, 1));
        assert!(f.is_alternating());
        let h = LinkDiagram::from_braid(2, &[-1, -1]).unwrap();
        assert_eq!((h.writhe(), h.component_count()), (-2, 2));
        let u = LinkDiagram::from_braid(3, &[1]).unwrap();
        assert_eq!((u.crossing_count(), u.free_loops(), u.component_count()), (1, 1, 2));
        assert_eq!(LinkDiagram::from_braid(3, &[]).unwrap().free_loops(), 3);
        assert!(LinkDiagram::from_braid(2, &[2]).is_err());
        assert!(LinkDiagram::from_braid(2, &[0]).is_err());
    }

    fn d(s: &str) -> LinkDiagram {
        s.parse().unwrap()
    }

    #[test]
    fn parse_unknot() {
        let u = d("U(1)");
        assert_eq!(u.crossing_count(), 0);
        assert_eq!(u.component_count(), 1);
    }

    #[test]
    fn parse_trefoils() {
        let t = d(TREFOIL);
        assert_eq!(t.crossing_count(), 3);
        assert_eq!(t.component_count(), 1);
        assert_eq!(t.writhe(), 3);
        let lh = d(TREFOIL_LH);
        assert_eq!(lh.component_count(), 1);
        assert_eq!(lh.writhe(), -3);
        assert!(lh.is_isomorphic(&t.mirror()));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            "X(1,4,2,5),X(3,6,4,1),X(5,2,6)".parse::<LinkDiagram>(),
            Err(DiagramError::MalformedSyntax { .. })
        ));
        assert!(matches!("X(1,4,2,5".parse::<LinkDiagram>(), Err(DiagramError::MalformedSyntax { .. })));
        assert!(matches!("Y(1,2,3,4)".parse::<LinkDiagram>(), Err(DiagramError::MalformedSyntax { .. })));
        assert!(matches!(
            "X(1,4,2,5),X(3,6,4,1),X(5,2,6,7)".parse::<LinkDiagram>(),
            Err(DiagramError::InconsistentDiagram { arc: 3, .. })
        ));
        // arc 2 would leave two crossings
        assert!(matches!(
            "X(1,3,2,4),X(3,1,2,4)".parse::<LinkDiagram>(),
            Err(DiagramError::InconsistentDiagram { .. })
        ));
        assert_eq!("".parse::<LinkDiagram>(), Err(DiagramError::Empty));
    }

    #[test]
    fn arbitrary_labels_are_relabeled() {
        let t = d("X(10,50,20,40),X(30,10,40,60),X(50,30,60,20)");
        assert_eq!(t.to_pd(), TREFOIL);
        assert_eq!(t.writhe(), 3);
    }

    #[test]
    fn seifert_circle_counts() {
        assert_eq!(d("U(1)").seifert_circles().count(), 1);
        assert_eq!(d(TREFOIL).seifert_circles().count(), 2);
        assert_eq!(d(HOPF_POS).seifert_circles().count(), 2);
        assert_eq!(d(HOPF_POS_ALT).seifert_circles().count(), 2);
        let c = d(FIGURE_EIGHT).seifert_circles();
        assert_eq!(c.count(), 3);
        let mut all: Vec<ArcId> = c.circles.concat();
        all.sort();
        assert_eq!(all, (1..=8).collect::<Vec<_>>());
    }

    #[test]
    fn s_plus_values() {
        assert_eq!(d(TREFOIL).s_plus(), 1);
        assert_eq!(d(TREFOIL_LH).s_plus(), 2);
        assert_eq!(d(FIGURE_EIGHT).s_plus(), 2);
        assert_eq!(d(FIGURE_EIGHT).writhe(), 0);
    }

    #[test]
    fn hopf_orientation_comes_from_under_strands() {
        // Two-arc components: numbering alone cannot orient the over-strand.
        let h = d(HOPF_POS_ALT);
        assert_eq!(h.writhe(), 2);
        assert!(h.is_isomorphic(&d(HOPF_POS)));
        assert_eq!(h.component_count(), 2);
        assert_eq!(d("X(4,1,3,2),X(2,3,1,4)").writhe(), -2);
    }

    #[test]
    fn smoothing_hopf_gives_kinked_unknot() {
        let h = d(HOPF_POS);
        let k = h.resolve(0, ResolveMode::Smooth).unwrap();
        assert_eq!(k.crossing_count(), 1);
        assert_eq!(k.component_count(), 1);
        assert_eq!(k.free_loops(), 0);
        assert_eq!(k.nugatory_crossings(), vec![0]);
        let unlink = k.resolve(0, ResolveMode::Smooth).unwrap();
        assert_eq!(unlink.crossing_count(), 0);
        assert_eq!(unlink.component_count(), 2);
    }

    #[test]
    fn smoothing_all_trefoil_crossings_in_any_order() {
        let t = d(TREFOIL);
        for order in [[0, 0, 0], [1, 1, 0], [2, 0, 0], [2, 1, 0], [1, 0, 0]] {
            let mut cur = t.clone();
            for i in order {
                cur = cur.resolve(i, ResolveMode::Smooth).unwrap();
            }
            assert_eq!(cur.crossing_count(), 0);
            assert_eq!(cur.free_loops(), 2);
        }
    }

    #[test]
    fn switch_is_involution() {
        let t = d(FIGURE_EIGHT);
        for i in 0..4 {
            let s = t.resolve(i, ResolveMode::Switch).unwrap();
            assert_eq!(s.writhe(), t.writhe() - 2 * t.crossings()[i].sign().value());
            assert_eq!(s.resolve(i, ResolveMode::Switch).unwrap(), t);
        }
        assert_eq!(
            t.resolve(4, ResolveMode::Smooth),
            Err(DiagramError::IndexOutOfRange { index: 4, crossings: 4 })
        );
    }

    #[test]
    fn split_and_connected_count() {
        let t = d(TREFOIL);
        assert_eq!(t.connected_count(), 1);
        let tu = d(&format!("{TREFOIL},U(1)"));
        assert_eq!(tu.connected_count(), 2);
        let parts = tu.split_components();
        assert_eq!(parts.len(), 2);
        assert!(parts[0].is_isomorphic(&t));
        assert_eq!(parts[1].component_count(), 1);
        assert_eq!(parts[1].crossing_count(), 0);
        let tt = t.disjoint_union(&t);
        assert_eq!(tt.connected_count(), 2);
        assert_eq!(tt.split_components().len(), 2);
    }

    #[test]
    fn alternating_and_reduced() {
        assert!(d(TREFOIL).is_alternating());
        assert!(d(FIGURE_EIGHT).is_alternating());
        assert!(d(TREFOIL).is_reduced());
        assert!(d(FIGURE_EIGHT).is_reduced());
        // switching one trefoil crossing breaks alternation
        assert!(!d(TREFOIL).switched(0).is_alternating());
        // a kink added to the unknot: X(1,1,2,2) style
        let kink = d("X(2,1,1,2)");
        assert_eq!(kink.component_count(), 1);
        assert!(!kink.is_reduced());
    }

    #[test]
    fn stats_invariants() {
        let st = d(TREFOIL).stats();
        assert_eq!(st, DiagramStats { s: 2, c: 3, w: 3, s_plus: 1, diagram_components: 1, self_linking: 1 });
        let u = d("U(3)").stats();
        assert_eq!((u.s, u.c, u.diagram_components), (3, 0, 3));
    }

    #[test]
    fn json_round_trip() {
        let t = d(FIGURE_EIGHT).with_name("4_1");
        let js = serde_json::to_string(&t).unwrap();
        assert!(js.contains("\"unknot_components\":0"));
        let back: LinkDiagram = serde_json::from_str(&js).unwrap();
        assert_eq!(back, t);
        let raw = r#"{"name":"3_1","crossings":[[1,5,2,4],[3,1,4,6],[5,3,6,2]],"unknot_components":1}"#;
        let tu: LinkDiagram = serde_json::from_str(raw).unwrap();
        assert_eq!(tu.component_count(), 2);
        assert_eq!(tu.name(), Some("3_1"));
    }

    #[test]
    fn over_only_component_round_trips() {
        // A Hopf-like clasp drawn with one component entirely on top.
        let h = d(HOPF_POS);
        let top = h.switched(1);
        let again: LinkDiagram = top.to_pd().parse().unwrap();
        assert!(again.is_isomorphic(&top));
        assert_eq!(again.writhe(), top.writhe());
    }
}
