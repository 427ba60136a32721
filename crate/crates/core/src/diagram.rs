//! Oriented link diagrams given by planar-diagram (PD) codes.
//!
//! A crossing `[a, b, c, d]` lists its four edge labels counterclockwise,
//! starting at the incoming under-strand, so the under-strand runs a -> c.
//! The crossing is positive when the over-strand runs d -> b.

use std::collections::BTreeMap;
use std::fmt;

pub type Edge = u32;

/// Index into a diagram's crossing list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CrossingRef(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("malformed PD code: {0}")]
    Syntax(String),
    #[error("crossing {crossing} has {found} entries, expected 4")]
    Arity { crossing: usize, found: usize },
    #[error("edge labels must be positive integers, found {0}")]
    NonPositiveLabel(i64),
    #[error("edge {label} appears {count} times, expected exactly 2")]
    LabelCount { label: Edge, count: usize },
    #[error("component {component} passes under crossings in both directions")]
    InconsistentOrientation { component: usize },
    #[error("crossing index {index} out of range for a diagram with {count} crossings")]
    CrossingOutOfRange { index: usize, count: usize },
    #[error("edge {0} does not occur in the diagram")]
    UnknownEdge(Edge),
    #[error("operation needs a knot diagram, got {0} components")]
    NotAKnot(usize),
    #[error("line {line}: {message}")]
    Record { line: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    crossings: Vec<[Edge; 4]>,
    signs: Vec<i8>,
    /// Crossingless circles, counted as extra components.
    free_loops: usize,
    occurrences: BTreeMap<Edge, [(usize, u8); 2]>,
    component_of_edge: BTreeMap<Edge, usize>,
    component_count: usize,
    name: Option<String>,
}

impl Diagram {
    pub fn unknot() -> Diagram {
        Diagram::unlink(1)
    }

    pub fn unlink(components: usize) -> Diagram {
        Diagram {
            crossings: Vec::new(),
            signs: Vec::new(),
            free_loops: components,
            occurrences: BTreeMap::new(),
            component_of_edge: BTreeMap::new(),
            component_count: components,
            name: None,
        }
    }

    /// Validate a crossing list, tracing components and inferring signs.
    pub fn from_crossings(crossings: Vec<[Edge; 4]>, free_loops: usize) -> Result<Diagram, DiagramError> {
        Diagram::build(crossings, free_loops, None)
    }

    /// Like `from_crossings`, but components that never pass under a
    /// crossing take their direction from `sign_hint` instead of from the
    /// increasing-label heuristic.
    fn build(crossings: Vec<[Edge; 4]>, free_loops: usize, sign_hint: Option<&[i8]>) -> Result<Diagram, DiagramError> {
        let mut slots: BTreeMap<Edge, Vec<(usize, u8)>> = BTreeMap::new();
        for (c, x) in crossings.iter().enumerate() {
            for (p, &e) in x.iter().enumerate() {
                slots.entry(e).or_default().push((c, p as u8));
            }
        }
        let mut occurrences = BTreeMap::new();
        for (e, occ) in slots {
            if occ.len() != 2 {
                return Err(DiagramError::LabelCount { label: e, count: occ.len() });
            }
            occurrences.insert(e, [occ[0], occ[1]]);
        }

        let other = |c: usize, p: u8| -> (usize, u8) {
            let occ = occurrences[&crossings[c][p as usize]];
            if occ[0] == (c, p) {
                occ[1]
            } else {
                occ[0]
            }
        };

        let n = crossings.len();
        let mut used = vec![[false; 4]; n];
        let mut signs = vec![0i8; n];
        let mut component_of_edge = BTreeMap::new();
        let mut component = 0;
        for c0 in 0..n {
            for p0 in [0u8, 1] {
                if used[c0][p0 as usize] {
                    continue;
                }
                // walk entering slots; each step leaves through the opposite slot
                let mut entries = Vec::new();
                let mut edges = Vec::new();
                let (mut c, mut p) = (c0, p0);
                loop {
                    used[c][p as usize] = true;
                    used[c][(p as usize + 2) % 4] = true;
                    entries.push((c, p));
                    let q = (p + 2) % 4;
                    edges.push(crossings[c][q as usize]);
                    (c, p) = other(c, q);
                    if (c, p) == (c0, p0) {
                        break;
                    }
                }
                let forward_under = entries.iter().any(|&(_, p)| p == 0);
                let backward_under = entries.iter().any(|&(_, p)| p == 2);
                let forward = match (forward_under, backward_under) {
                    (true, true) => return Err(DiagramError::InconsistentOrientation { component }),
                    (true, false) => true,
                    (false, true) => false,
                    (false, false) => {
                        let (c, p) = entries[0];
                        match sign_hint {
                            Some(h) => (h[c] > 0) == (p == 3),
                            None => label_heuristic(&edges),
                        }
                    }
                };
                for &(c, p) in &entries {
                    if p % 2 == 1 {
                        // over-strand entering at slot 3 runs 3 -> 1
                        let enters_at = if forward { p } else { (p + 2) % 4 };
                        signs[c] = if enters_at == 3 { 1 } else { -1 };
                    }
                }
                for e in edges {
                    component_of_edge.insert(e, component);
                }
                component += 1;
            }
        }
        Ok(Diagram {
            crossings,
            signs,
            free_loops,
            occurrences,
            component_of_edge,
            component_count: component + free_loops,
            name: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Diagram {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn crossings(&self) -> &[[Edge; 4]] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn edge_count(&self) -> usize {
        self.occurrences.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.occurrences.keys().copied()
    }

    pub fn max_label(&self) -> Option<Edge> {
        self.occurrences.keys().next_back().copied()
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn sign(&self, c: usize) -> i8 {
        self.signs[c]
    }

    pub fn components(&self) -> usize {
        self.component_count
    }

    pub fn is_knot(&self) -> bool {
        self.component_count == 1
    }

    pub fn component_of_edge(&self, e: Edge) -> Option<usize> {
        self.component_of_edge.get(&e).copied()
    }

    pub fn component_labels(&self) -> &BTreeMap<Edge, usize> {
        &self.component_of_edge
    }

    pub fn writhe(&self) -> i64 {
        self.signs.iter().map(|&s| s as i64).sum()
    }

    pub fn positive_count(&self) -> usize {
        self.signs.iter().filter(|&&s| s > 0).count()
    }

    pub fn negative_count(&self) -> usize {
        self.signs.iter().filter(|&&s| s < 0).count()
    }

    /// The two `(crossing, slot)` positions of an edge.
    pub fn occurrences(&self, e: Edge) -> Option<[(usize, u8); 2]> {
        self.occurrences.get(&e).copied()
    }

    /// Whether the strand at `slot` of crossing `c` leaves the crossing.
    pub fn is_outgoing(&self, c: usize, slot: u8) -> bool {
        match slot {
            0 => false,
            2 => true,
            1 => self.signs[c] > 0,
            _ => self.signs[c] < 0,
        }
    }

    /// `(tail, head)` slots of an edge: it leaves the tail and enters the head.
    pub fn edge_ends(&self, e: Edge) -> Option<((usize, u8), (usize, u8))> {
        let [a, b] = self.occurrences(e)?;
        Some(if self.is_outgoing(a.0, a.1) { (a, b) } else { (b, a) })
    }

    /// The component indices of the under- and over-strand at crossing `c`.
    pub fn strand_components(&self, c: usize) -> (usize, usize) {
        let x = self.crossings[c];
        (self.component_of_edge[&x[0]], self.component_of_edge[&x[1]])
    }

    fn check_ref(&self, c: CrossingRef) -> Result<(), DiagramError> {
        if c.0 >= self.crossings.len() {
            return Err(DiagramError::CrossingOutOfRange { index: c.0, count: self.crossings.len() });
        }
        Ok(())
    }

    /// Swap over and under at one crossing.
    pub fn crossing_change(&self, c: CrossingRef) -> Result<Diagram, DiagramError> {
        self.check_ref(c)?;
        let mut crossings = self.crossings.clone();
        let mut signs = self.signs.clone();
        crossings[c.0] = changed_tuple(crossings[c.0], signs[c.0]);
        signs[c.0] = -signs[c.0];
        let mut d = Diagram::build(crossings, self.free_loops, Some(&signs))?;
        d.name = self.name.clone();
        Ok(d)
    }

    /// Mirror image: every crossing changed.
    pub fn mirror(&self) -> Diagram {
        let crossings = self.crossings.iter().zip(&self.signs).map(|(&x, &s)| changed_tuple(x, s)).collect();
        let signs: Vec<i8> = self.signs.iter().map(|s| -s).collect();
        let mut d = Diagram::build(crossings, self.free_loops, Some(&signs)).expect("mirror of a valid diagram");
        d.name = self.name.as_ref().map(|n| format!("m({n})"));
        d
    }

    /// Replace crossing `c` by its orientation-respecting smoothing.
    pub fn oriented_resolution(&self, c: CrossingRef) -> Result<Diagram, DiagramError> {
        self.check_ref(c)?;
        let [a, b, cc, d] = self.crossings[c.0];
        // incoming a joins its left neighbour for a positive crossing
        let pairs = if self.signs[c.0] > 0 { [(a, b), (d, cc)] } else { [(a, d), (b, cc)] };
        let mut parent: BTreeMap<Edge, Edge> = BTreeMap::new();
        fn find(parent: &mut BTreeMap<Edge, Edge>, e: Edge) -> Edge {
            let p = *parent.get(&e).unwrap_or(&e);
            if p == e {
                return e;
            }
            let r = find(parent, p);
            parent.insert(e, r);
            r
        }
        for (x, y) in pairs {
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            if rx != ry {
                parent.insert(rx.max(ry), rx.min(ry));
            }
        }
        let mut crossings = Vec::with_capacity(self.crossings.len() - 1);
        let mut signs = Vec::with_capacity(self.crossings.len() - 1);
        for (i, x) in self.crossings.iter().enumerate() {
            if i != c.0 {
                crossings.push(x.map(|e| find(&mut parent, e)));
                signs.push(self.signs[i]);
            }
        }
        let mut roots: Vec<Edge> = [a, b, cc, d].iter().map(|&e| find(&mut parent, e)).collect();
        roots.sort_unstable();
        roots.dedup();
        let new_loops = roots.iter().filter(|r| !crossings.iter().any(|x| x.contains(r))).count();
        let mut out = canonical(crossings, signs, self.free_loops + new_loops)?;
        out.name = self.name.clone();
        Ok(out)
    }

    /// Connected sum of two knot diagrams, spliced at `e1` and `e2`
    /// (highest labels by default).
    pub fn connected_sum(&self, other: &Diagram, e1: Option<Edge>, e2: Option<Edge>) -> Result<Diagram, DiagramError> {
        for d in [self, other] {
            if !d.is_knot() {
                return Err(DiagramError::NotAKnot(d.components()));
            }
        }
        let name = match (&self.name, &other.name) {
            (Some(a), Some(b)) => Some(format!("{a}#{b}")),
            _ => None,
        };
        if self.crossings.is_empty() || other.crossings.is_empty() {
            let mut d = if self.crossings.is_empty() { other.clone() } else { self.clone() };
            d.name = name;
            return Ok(d);
        }
        let e1 = e1.unwrap_or_else(|| self.max_label().unwrap());
        let e2 = e2.unwrap_or_else(|| other.max_label().unwrap());
        let offset = self.max_label().unwrap();
        let (_, h1) = self.edge_ends(e1).ok_or(DiagramError::UnknownEdge(e1))?;
        let (_, h2) = other.edge_ends(e2).ok_or(DiagramError::UnknownEdge(e2))?;
        let mut crossings = self.crossings.clone();
        // e1 now runs from its old tail into the head of e2, and vice versa
        crossings[h1.0][h1.1 as usize] = e2 + offset;
        let base = crossings.len();
        crossings.extend(other.crossings.iter().map(|x| x.map(|e| e + offset)));
        crossings[base + h2.0][h2.1 as usize] = e1;
        let signs: Vec<i8> = self.signs.iter().chain(&other.signs).copied().collect();
        let mut d = canonical(crossings, signs, 0)?;
        d.name = name;
        Ok(d)
    }

    /// Distant union of two diagrams.
    pub fn split_union(&self, other: &Diagram) -> Diagram {
        let offset = self.max_label().unwrap_or(0);
        let mut crossings = self.crossings.clone();
        crossings.extend(other.crossings.iter().map(|x| x.map(|e| e + offset)));
        let signs: Vec<i8> = self.signs.iter().chain(&other.signs).copied().collect();
        canonical(crossings, signs, self.free_loops + other.free_loops).expect("union of valid diagrams")
    }

    /// Relabel edges consecutively along each oriented component.
    pub fn canonical(&self) -> Diagram {
        let mut d = canonical(self.crossings.clone(), self.signs.clone(), self.free_loops).expect("valid diagram");
        d.name = self.name.clone();
        d
    }

    /// PD text; crossingless components are written as `U` tokens.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        if !self.crossings.is_empty() {
            s.push('[');
            let parts: Vec<String> =
                self.crossings.iter().map(|x| format!("[{},{},{},{}]", x[0], x[1], x[2], x[3])).collect();
            s.push_str(&parts.join(","));
            s.push(']');
        }
        for _ in 0..self.free_loops {
            s.push('U');
        }
        s
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// The same crossing with over and under exchanged.
fn changed_tuple(x: [Edge; 4], sign: i8) -> [Edge; 4] {
    let [a, b, c, d] = x;
    if sign > 0 {
        [d, a, b, c]
    } else {
        [b, c, d, a]
    }
}

/// Orientation for a component with no under-passages: follow the
/// direction in which its smallest label is succeeded by the next label.
fn label_heuristic(edges: &[Edge]) -> bool {
    let k = edges.len();
    let i = (0..k).min_by_key(|&i| edges[i]).unwrap();
    let m = edges[i];
    if edges[(i + 1) % k] == m + 1 {
        true
    } else {
        edges[(i + k - 1) % k] != m + 1
    }
}

/// Build with sign hints, then renumber edges 1.. along the orientation.
fn canonical(crossings: Vec<[Edge; 4]>, signs: Vec<i8>, free_loops: usize) -> Result<Diagram, DiagramError> {
    let d = Diagram::build(crossings, free_loops, Some(&signs))?;
    let n = d.crossings.len();
    let mut relabel: BTreeMap<Edge, Edge> = BTreeMap::new();
    let mut next = 1;
    for c0 in 0..n {
        for p0 in [2u8, 1, 3] {
            if !d.is_outgoing(c0, p0) || relabel.contains_key(&d.crossings[c0][p0 as usize]) {
                continue;
            }
            let (mut c, mut p) = (c0, p0);
            loop {
                let e = d.crossings[c][p as usize];
                if relabel.contains_key(&e) {
                    break;
                }
                relabel.insert(e, next);
                next += 1;
                let [x, y] = d.occurrences[&e];
                let head = if x == (c, p) { y } else { x };
                (c, p) = (head.0, (head.1 + 2) % 4);
            }
        }
    }
    let crossings = d.crossings.iter().map(|x| x.map(|e| relabel[&e])).collect();
    Diagram::build(crossings, free_loops, Some(&d.signs))
}

/// Parse a PD code such as `[[1,4,2,5],[3,6,4,1],[5,2,6,3]]`.
///
/// `PD[X[..], ..]` wrappers are accepted, and trailing `U` tokens add
/// crossingless components; `U` alone is the unknot.
pub fn parse_pd(text: &str) -> Result<Diagram, DiagramError> {
    let mut body = text.trim();
    let mut free_loops = 0;
    loop {
        let t = body.trim_end().trim_end_matches(',');
        if let Some(rest) = t.strip_suffix('U').or_else(|| t.strip_suffix('u')) {
            free_loops += 1;
            body = rest;
        } else {
            body = t.trim();
            break;
        }
    }
    if body.is_empty() {
        if free_loops == 0 {
            return Err(DiagramError::Syntax("empty PD code".into()));
        }
        return Ok(Diagram::unlink(free_loops));
    }
    let cleaned: String = body.replace("PD", "").replace('X', "");
    let crossings = parse_tuples(&cleaned)?;
    Diagram::from_crossings(crossings, free_loops)
}

fn parse_tuples(s: &str) -> Result<Vec<[Edge; 4]>, DiagramError> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| DiagramError::Syntax("expected an outer [ ... ] list".into()))?;
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut rest = inner;
    loop {
        let body = rest
            .strip_prefix('[')
            .ok_or_else(|| DiagramError::Syntax(format!("expected '[' at `{}`", truncate(rest))))?;
        let end = body
            .find(']')
            .ok_or_else(|| DiagramError::Syntax("unterminated crossing tuple".into()))?;
        let nums: Vec<&str> = body[..end].split(',').collect();
        if nums.len() != 4 {
            return Err(DiagramError::Arity { crossing: out.len(), found: nums.len() });
        }
        let mut x = [0; 4];
        for (slot, t) in x.iter_mut().zip(&nums) {
            let v: i64 = t.parse().map_err(|_| DiagramError::Syntax(format!("`{t}` is not an integer")))?;
            if v <= 0 || v > Edge::MAX as i64 {
                return Err(DiagramError::NonPositiveLabel(v));
            }
            *slot = v as Edge;
        }
        out.push(x);
        rest = &body[end + 1..];
        if rest.is_empty() {
            break;
        }
        rest = rest
            .strip_prefix(',')
            .ok_or_else(|| DiagramError::Syntax(format!("expected ',' at `{}`", truncate(rest))))?;
    }
    Ok(out)
}

fn truncate(s: &str) -> &str {
    &s[..s.len().min(20)]
}

/// Read `name<TAB>pd_code` records; blank lines and `#` comments are skipped.
pub fn parse_records(text: &str) -> Result<Vec<Diagram>, DiagramError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let (name, code) = line.split_once('\t').ok_or_else(|| DiagramError::Record {
            line: i + 1,
            message: "expected `name<TAB>pd_code`".into(),
        })?;
        let d = parse_pd(code).map_err(|e| DiagramError::Record { line: i + 1, message: e.to_string() })?;
        out.push(d.with_name(name.trim()));
    }
    Ok(out)
}

/// Inverse of `parse_records`.
pub fn write_records(ds: &[Diagram]) -> String {
    let mut s = String::new();
    for (i, d) in ds.iter().enumerate() {
        let name = d.name().map(str::to_string).unwrap_or_else(|| format!("K{i}"));
        s.push_str(&format!("{name}\t{}\n", d.serialize()));
    }
    s
}

const CORPUS: &[(&str, &str)] = &[
    ("unknot", "U"),
    ("3_1", "[[1,4,2,5],[3,6,4,1],[5,2,6,3]]"),
    ("4_1", "[[4,2,5,1],[8,6,1,5],[6,3,7,4],[2,7,3,8]]"),
    ("5_1", "[[1,6,2,7],[3,8,4,9],[5,10,6,1],[7,2,8,3],[9,4,10,5]]"),
    ("6_1", "[[1,4,2,5],[7,10,8,11],[3,9,4,8],[9,3,10,2],[5,12,6,1],[11,6,12,7]]"),
    ("6_2", "[[1,4,2,5],[5,10,6,11],[3,9,4,8],[9,3,10,2],[7,12,8,1],[11,6,12,7]]"),
    ("hopf", "[[4,1,3,2],[2,3,1,4]]"),
    ("unlink2", "UU"),
    (
        "18nh_00159590",
        "[[16,2,17,1],[2,7,3,8],[10,3,11,4],[23,4,24,5],[5,24,6,25],[6,11,7,12],[27,8,28,9],[9,28,10,29],[12,32,13,31],[32,14,33,13],[14,36,15,35],[36,16,1,15],[17,21,18,20],[33,19,34,18],[19,35,20,34],[26,21,27,22],[22,29,23,30],[30,25,31,26]]",
    ),
    (
        "18nh_00752242",
        "[[10,2,11,1],[2,26,3,25],[3,32,4,33],[33,4,34,5],[20,5,21,6],[6,23,7,24],[7,15,8,14],[15,9,16,8],[36,10,1,9],[11,17,12,16],[17,13,18,12],[13,19,14,18],[24,19,25,20],[21,28,22,29],[29,22,30,23],[26,31,27,32],[34,27,35,28],[30,35,31,36]]",
    ),
    (
        "19nh_000129633",
        "[[30,2,31,1],[2,21,3,22],[3,33,4,32],[33,5,34,4],[5,29,6,28],[6,15,7,16],[16,7,17,8],[8,27,9,28],[36,9,37,10],[25,10,26,11],[11,38,12,1],[12,17,13,18],[18,13,19,14],[14,19,15,20],[29,21,30,20],[22,32,23,31],[34,24,35,23],[24,36,25,35],[37,27,38,26]]",
    ),
    (
        "19nh_000305767",
        "[[1,9,2,8],[11,3,12,2],[3,30,4,31],[21,5,22,4],[34,5,35,6],[6,24,7,23],[7,15,8,14],[26,10,27,9],[10,28,11,27],[12,31,13,32],[32,13,33,14],[15,36,16,37],[37,16,38,17],[17,38,18,1],[18,25,19,26],[19,29,20,28],[29,21,30,20],[22,34,23,33],[24,35,25,36]]",
    ),
    (
        "symunion_4_1",
        "[[7,37,8,36],[40,34,41,33],[31,13,32,12],[8,16,9,15],[14,6,15,5],[35,7,36,6],[32,40,33,39],[26,47,27,48],[46,19,47,20],[41,24,42,25],[44,3,45,4],[25,20,26,21],[48,27,1,28],[2,43,3,44],[23,4,24,5],[38,12,39,11],[42,45,43,46],[21,28,22,29],[10,30,11,29],[37,31,38,30],[13,35,14,34],[16,10,17,9],[17,22,18,23],[18,1,19,2]]",
    ),
];

/// Names of the four 18- and 19-crossing knots with reduced rank 5 mod 8.
pub const COUNTEREXAMPLES: [&str; 4] = ["18nh_00159590", "18nh_00752242", "19nh_000129633", "19nh_000305767"];

/// Built-in diagrams: small knots and links plus the large fixtures.
pub fn load_corpus() -> Vec<Diagram> {
    CORPUS
        .iter()
        .map(|(name, code)| parse_pd(code).expect("built-in PD code").with_name(*name))
        .collect()
}

pub fn corpus_diagram(name: &str) -> Option<Diagram> {
    CORPUS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(n, code)| parse_pd(code).expect("built-in PD code").with_name(*n))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "[[1,4,2,5],[3,6,4,1],[5,2,6,3]]";

    #[test]
    fn parse_trefoil() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.components(), 1);
        assert_eq!(d.edge_count(), 6);
        assert_eq!(d.writhe(), -3);
        assert_eq!(d.mirror().writhe(), 3);
    }

    #[test]
    fn parse_variants() {
        let d = parse_pd(" PD[X[1, 4, 2, 5], X[3,6,4,1], X[5,2,6,3]] ").unwrap();
        assert_eq!(d.crossings(), parse_pd(TREFOIL).unwrap().crossings());
        assert_eq!(parse_pd("U").unwrap().components(), 1);
        assert_eq!(parse_pd("UU").unwrap().components(), 2);
        assert_eq!(parse_pd("[]U").unwrap().components(), 1);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_pd("[[1,2,3]]"), Err(DiagramError::Arity { found: 3, .. })));
        assert!(matches!(parse_pd("[[1,1,2,3]]"), Err(DiagramError::LabelCount { .. })));
        assert!(matches!(parse_pd("[[1,2,1,2]"), Err(DiagramError::Syntax(_))));
        assert!(matches!(parse_pd("[[0,1,1,0]]"), Err(DiagramError::NonPositiveLabel(0))));
        assert!(matches!(parse_pd(""), Err(DiagramError::Syntax(_))));
        // the 4_1 code with one under-strand reversed
        assert!(matches!(
            parse_pd("[[4,2,5,1],[8,6,1,5],[6,3,7,4],[7,3,2,8]]"),
            Err(DiagramError::InconsistentOrientation { .. }) | Err(DiagramError::LabelCount { .. })
        ));
    }

    #[test]
    fn crossing_change_is_involution() {
        let d = parse_pd(TREFOIL).unwrap();
        let once = d.crossing_change(CrossingRef(1)).unwrap();
        assert_ne!(once.crossings(), d.crossings());
        assert_eq!(once.writhe(), -1);
        let twice = once.crossing_change(CrossingRef(1)).unwrap();
        assert_eq!(twice.crossings(), d.crossings());
        assert!(d.crossing_change(CrossingRef(3)).is_err());
    }

    #[test]
    fn resolution_of_trefoil_is_two_component() {
        let d = parse_pd(TREFOIL).unwrap();
        for c in 0..3 {
            let r = d.oriented_resolution(CrossingRef(c)).unwrap();
            assert_eq!(r.crossing_count(), 2);
            assert_eq!(r.components(), 2);
            assert_eq!(r.writhe(), -2);
        }
    }

    #[test]
    fn resolving_a_kink_adds_a_free_loop() {
        // one-crossing unknot
        let d = parse_pd("[[1,2,2,1]]").unwrap();
        assert_eq!(d.components(), 1);
        let r = d.oriented_resolution(CrossingRef(0)).unwrap();
        assert_eq!(r.crossing_count(), 0);
        assert_eq!(r.components(), 2);
    }

    #[test]
    fn connected_sum_basics() {
        let t = parse_pd(TREFOIL).unwrap();
        let s = t.connected_sum(&t.mirror(), None, None).unwrap();
        assert_eq!(s.crossing_count(), 6);
        assert_eq!(s.components(), 1);
        assert_eq!(s.writhe(), 0);
        assert_eq!(Diagram::unknot().connected_sum(&t, None, None).unwrap().crossings(), t.crossings());
    }

    #[test]
    fn roundtrip_serialize() {
        for d in load_corpus() {
            let again = parse_pd(&d.serialize()).unwrap();
            assert_eq!(again.crossings(), d.crossings());
            assert_eq!(again.components(), d.components());
            assert_eq!(again.signs(), d.signs());
        }
    }

    #[test]
    fn corpus_sizes() {
        let expect = [
            ("unknot", 0, 1),
            ("3_1", 3, 1),
            ("4_1", 4, 1),
            ("5_1", 5, 1),
            ("6_1", 6, 1),
            ("6_2", 6, 1),
            ("hopf", 2, 2),
            ("unlink2", 0, 2),
            ("18nh_00159590", 18, 1),
            ("18nh_00752242", 18, 1),
            ("19nh_000129633", 19, 1),
            ("19nh_000305767", 19, 1),
            ("symunion_4_1", 24, 1),
        ];
        let corpus = load_corpus();
        assert_eq!(corpus.len(), expect.len());
        for (d, (name, n, comps)) in corpus.iter().zip(expect) {
            assert_eq!(d.name(), Some(name));
            assert_eq!(d.crossing_count(), n, "{name}");
            assert_eq!(d.components(), comps, "{name}");
        }
    }

    #[test]
    fn records_roundtrip() {
        let text = "# comment\n3_1\t[[1,4,2,5],[3,6,4,1],[5,2,6,3]]\n\nU1\tU\n";
        let ds = parse_records(text).unwrap();
        assert_eq!(ds.len(), 2);
        let again = parse_records(&write_records(&ds)).unwrap();
        assert_eq!(again, ds);
        assert!(matches!(parse_records("bad line"), Err(DiagramError::Record { line: 1, .. })));
    }
}
