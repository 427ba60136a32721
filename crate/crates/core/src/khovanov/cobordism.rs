//! Crossingless matchings and dotted cobordisms between them.
//!
//! A morphism between two matchings S and T on the same boundary is a
//! combination of basis cobordisms: one disk per cycle of S u T, each with
//! or without a dot. Gluing pieces together and re-expanding in this basis
//! uses the Frobenius algebra A = F[X]/(X^2 - t) with counit e(X) = 1.

use std::collections::HashMap;

use crate::algebra::Field;
use crate::diagram::Edge;

/// Arcs `(a, b)` with `a < b`, sorted.
pub type Matching = Vec<(Edge, Edge)>;

#[derive(Clone, Debug)]
pub struct MatchingData {
    pub arcs: Matching,
    partner: Vec<(Edge, Edge)>,
}

impl MatchingData {
    pub fn new(arcs: Matching) -> Self {
        let mut partner: Vec<(Edge, Edge)> = arcs.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
        partner.sort_unstable();
        MatchingData { arcs, partner }
    }

    pub fn partner(&self, e: Edge) -> Option<Edge> {
        self.partner.binary_search_by_key(&e, |p| p.0).ok().map(|i| self.partner[i].1)
    }

    pub fn labels(&self) -> impl Iterator<Item = Edge> + '_ {
        self.partner.iter().map(|p| p.0)
    }
}

/// Interns matchings so they can be compared and cached by id.
#[derive(Default)]
pub struct Interner {
    ids: HashMap<Matching, u32>,
    list: Vec<MatchingData>,
}

impl Interner {
    pub fn intern(&mut self, m: Matching) -> u32 {
        if let Some(&id) = self.ids.get(&m) {
            return id;
        }
        let id = self.list.len() as u32;
        self.ids.insert(m.clone(), id);
        self.list.push(MatchingData::new(m));
        id
    }

    pub fn get(&self, id: u32) -> &MatchingData {
        &self.list[id as usize]
    }
}

/// Cycles of S u T, numbered in order of their smallest label.
pub struct Cycles {
    of_label: Vec<(Edge, usize)>,
    pub count: usize,
}

impl Cycles {
    pub fn new(s: &MatchingData, t: &MatchingData) -> Self {
        let mut of_label: Vec<(Edge, usize)> = Vec::with_capacity(s.partner.len());
        let mut seen: HashMap<Edge, usize> = HashMap::new();
        let mut count = 0;
        for u in s.labels() {
            if seen.contains_key(&u) {
                continue;
            }
            let mut v = u;
            loop {
                seen.insert(v, count);
                let w = s.partner(v).expect("label in S");
                seen.insert(w, count);
                v = t.partner(w).expect("S and T share a boundary");
                if v == u {
                    break;
                }
            }
            count += 1;
        }
        of_label.extend(seen);
        of_label.sort_unstable();
        Cycles { of_label, count }
    }

    pub fn of(&self, e: Edge) -> usize {
        let i = self.of_label.binary_search_by_key(&e, |p| p.0).expect("label on the boundary");
        self.of_label[i].1
    }
}

/// Sparse morphism: dot masks over the basis cycles, with coefficients.
pub type Mor<E> = Vec<(u64, E)>;

/// Connected components of a glued surface and where its boundary
/// circles (the basis cycles of the result) sit.
#[derive(Clone, Debug)]
pub struct Topology {
    piece_comp: Vec<usize>,
    comps: Vec<Component>,
}

#[derive(Clone, Debug)]
struct Component {
    genus: u32,
    cycles: Vec<usize>,
}

/// Pieces are disks. `intervals` glue two pieces along an arc, `joins`
/// glue along a whole circle, and `boundary[i]` is a piece touching
/// boundary circle i.
pub fn build_topology(pieces: usize, intervals: &[(usize, usize)], joins: &[(usize, usize)], boundary: &[usize]) -> Topology {
    let mut parent: Vec<usize> = (0..pieces).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let n = p[y];
            p[y] = r;
            y = n;
        }
        r
    }
    for &(a, b) in intervals.iter().chain(joins) {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut index: HashMap<usize, usize> = HashMap::new();
    let mut piece_comp = vec![0; pieces];
    for (p, slot) in piece_comp.iter_mut().enumerate() {
        let r = find(&mut parent, p);
        let n = index.len();
        *slot = *index.entry(r).or_insert(n);
    }
    let n = index.len();
    let mut chi = vec![0i64; n];
    for &c in &piece_comp {
        chi[c] += 1;
    }
    for &(a, _) in intervals {
        chi[piece_comp[a]] -= 1;
    }
    let mut cycles = vec![Vec::new(); n];
    for (i, &p) in boundary.iter().enumerate() {
        cycles[piece_comp[p]].push(i);
    }
    let comps = chi
        .into_iter()
        .zip(cycles)
        .map(|(chi, cycles)| {
            let twice_genus = 2 - cycles.len() as i64 - chi;
            assert!(twice_genus >= 0 && twice_genus % 2 == 0, "glued surface has non-integral genus");
            Component { genus: (twice_genus / 2) as u32, cycles }
        })
        .collect();
    Topology { piece_comp, comps }
}

/// Coefficients for re-expanding glued surfaces, for a fixed value of t.
pub struct Evaluator<F: Field> {
    pub field: F,
    tau: F::Elem,
}

impl<F: Field> Evaluator<F> {
    pub fn new(field: F, tau: F::Elem) -> Self {
        Evaluator { field, tau }
    }

    pub fn tau_is_zero(&self) -> bool {
        self.field.is_zero(&self.tau)
    }

    fn pow(&self, base: &F::Elem, e: u32) -> F::Elem {
        let mut r = self.field.one();
        for _ in 0..e {
            r = self.field.mul(&r, base);
        }
        r
    }

    /// Terms of a connected surface with `b` boundary circles, genus `g`
    /// and `d` dots: the coefficient of a labelling with k undotted
    /// circles is e(X^{d+g+k}) 2^g, i.e. 2^g t^{(d+g+k-1)/2} when d+g+k is odd.
    fn local_terms(&self, d: u32, g: u32, b: usize) -> Vec<(u64, F::Elem)> {
        let two_g = self.pow(&self.field.from_i64(2), g);
        let full: u64 = if b == 64 { u64::MAX } else { (1u64 << b) - 1 };
        if self.tau_is_zero() {
            return match d + g {
                0 => (0..b).map(|i| (full & !(1u64 << i), self.field.one())).collect(),
                1 => vec![(full, two_g)],
                _ => Vec::new(),
            };
        }
        let mut out = Vec::new();
        for m in 0..=full {
            let k = b as u32 - m.count_ones();
            let e = d + g + k;
            if e % 2 == 1 {
                out.push((m, self.field.mul(&two_g, &self.pow(&self.tau, (e - 1) / 2))));
            }
        }
        out
    }

    /// Expand a glued surface with the given dots per piece into basis
    /// masks over the boundary circles; terms are added into `acc` scaled by `scale`.
    pub fn evaluate(&self, topo: &Topology, dots: &[u32], scale: &F::Elem, acc: &mut HashMap<u64, F::Elem>) {
        let mut comp_dots = vec![0u32; topo.comps.len()];
        for (p, &d) in dots.iter().enumerate() {
            comp_dots[topo.piece_comp[p]] += d;
        }
        let mut terms: Vec<(u64, F::Elem)> = vec![(0, scale.clone())];
        for (c, comp) in topo.comps.iter().enumerate() {
            let local = self.local_terms(comp_dots[c], comp.genus, comp.cycles.len());
            if local.is_empty() {
                return;
            }
            let mut next = Vec::with_capacity(terms.len() * local.len());
            for (m, coef) in &terms {
                for (lm, lc) in &local {
                    let mut mask = *m;
                    for (bit, &cyc) in comp.cycles.iter().enumerate() {
                        if lm >> bit & 1 == 1 {
                            mask |= 1 << cyc;
                        }
                    }
                    next.push((mask, self.field.mul(coef, lc)));
                }
            }
            terms = next;
        }
        for (m, c) in terms {
            let slot = acc.entry(m).or_insert_with(|| self.field.zero());
            *slot = self.field.add(slot, &c);
        }
    }
}

/// Collect accumulated terms into a sorted morphism, dropping zeros.
pub fn finish<F: Field>(field: &F, acc: HashMap<u64, F::Elem>) -> Mor<F::Elem> {
    let mut v: Mor<F::Elem> = acc.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
    v.sort_unstable_by_key(|t| t.0);
    v
}

/// Gluing data for composing A -> B with B -> C.
pub fn composition_topology(a: &MatchingData, b: &MatchingData, c: &MatchingData) -> (Topology, usize) {
    let ab = Cycles::new(a, b);
    let bc = Cycles::new(b, c);
    let ac = Cycles::new(a, c);
    let nf = ab.count;
    let intervals: Vec<(usize, usize)> = b.arcs.iter().map(|&(x, _)| (ab.of(x), nf + bc.of(x))).collect();
    let mut boundary = vec![0; ac.count];
    for &(x, _) in &a.arcs {
        boundary[ac.of(x)] = ab.of(x);
    }
    (build_topology(nf + bc.count, &intervals, &[], &boundary), nf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PrimeField;

    fn md(arcs: &[(Edge, Edge)]) -> MatchingData {
        MatchingData::new(arcs.to_vec())
    }

    #[test]
    fn cycles_of_two_matchings() {
        // | | against the cup-cap on four points: one cycle
        let s = md(&[(1, 2), (3, 4)]);
        let t = md(&[(1, 4), (2, 3)]);
        assert_eq!(Cycles::new(&s, &t).count, 1);
        assert_eq!(Cycles::new(&s, &s).count, 2);
    }

    #[test]
    fn identity_composes_trivially() {
        let f = PrimeField::new(3);
        let ev = Evaluator::new(f, 0);
        let s = md(&[(1, 2), (3, 4)]);
        let t = md(&[(1, 4), (2, 3)]);
        let (topo, nf) = composition_topology(&s, &s, &t);
        // identity on s (no dots) followed by the basis cobordism s -> t with a dot
        let mut dots = vec![0u32; nf + 1];
        dots[nf] = 1;
        let mut acc = HashMap::new();
        ev.evaluate(&topo, &dots, &1, &mut acc);
        assert_eq!(finish(&f, acc), vec![(1, 1)]);
    }

    #[test]
    fn two_saddles_make_a_genus_or_two_dots() {
        // s -> t -> s through a single cycle each: the composite is the
        // identity of s tubed together, i.e. dot on either sheet
        let f = PrimeField::new(211);
        let s = md(&[(1, 2), (3, 4)]);
        let t = md(&[(1, 4), (2, 3)]);
        let (topo, nf) = composition_topology(&s, &t, &s);
        let dots = vec![0u32; nf + 1];
        let mut acc = HashMap::new();
        Evaluator::new(f, 0).evaluate(&topo, &dots, &1, &mut acc);
        assert_eq!(finish(&f, acc), vec![(1, 1), (2, 1)]);
        // with t = 1 there is no extra term here, since only one of the two
        // circles may be undotted for a genus-0 surface with no dots
        let mut acc = HashMap::new();
        Evaluator::new(f, 1).evaluate(&topo, &dots, &1, &mut acc);
        assert_eq!(finish(&f, acc), vec![(1, 1), (2, 1)]);
        // one dot: both dotted, plus t times both undotted
        let mut dots = vec![0u32; nf + 1];
        dots[0] = 1;
        let mut acc = HashMap::new();
        Evaluator::new(f, 1).evaluate(&topo, &dots, &1, &mut acc);
        assert_eq!(finish(&f, acc), vec![(0, 1), (3, 1)]);
    }
}
