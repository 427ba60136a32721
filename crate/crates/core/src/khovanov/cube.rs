//! The full cube of resolutions with an explicit basis. Exponential in
//! the crossing number; used to cross-check the scanning engine.

use std::collections::{BTreeMap, HashMap};

use super::{rank, BigradedRankTable, KhError};
use crate::algebra::Field;
use crate::diagram::{Diagram, Edge};

pub const MAX_CUBE_CROSSINGS: usize = 12;

pub struct KhovanovComplex<F: Field> {
    pub field: F,
    pub reduced: bool,
    pub basepoint_edge: Option<Edge>,
    /// (h, q) of each generator.
    pub generators: Vec<(i32, i32)>,
    /// Sparse differential as (source, target, coefficient).
    pub differential: Vec<(usize, usize, F::Elem)>,
}

struct State {
    circle_of: HashMap<Edge, usize>,
    circles: usize,
}

fn resolve(d: &Diagram, r: u32) -> State {
    let edges: Vec<Edge> = d.edges().collect();
    let index: HashMap<Edge, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut parent: Vec<usize> = (0..edges.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for (c, x) in d.crossings().iter().enumerate() {
        let pairs = if r >> c & 1 == 0 { [(0, 1), (2, 3)] } else { [(0, 3), (1, 2)] };
        for (a, b) in pairs {
            let (ra, rb) = (find(&mut parent, index[&x[a]]), find(&mut parent, index[&x[b]]));
            parent[ra] = rb;
        }
    }
    let mut ids = HashMap::new();
    let mut circle_of = HashMap::new();
    for (i, &e) in edges.iter().enumerate() {
        let root = find(&mut parent, i);
        let n = ids.len();
        circle_of.insert(e, *ids.entry(root).or_insert(n));
    }
    State { circle_of, circles: ids.len() }
}

impl<F: Field> KhovanovComplex<F> {
    pub fn build(field: F, d: &Diagram, reduced: bool, basepoint: Option<Edge>) -> Result<Self, KhError> {
        let n = d.crossing_count();
        if n > MAX_CUBE_CROSSINGS {
            return Err(KhError::ResourceLimit { generators: 1 << n, limit: 1 << MAX_CUBE_CROSSINGS });
        }
        if reduced && !d.is_knot() {
            return Err(KhError::NotAKnot(d.components()));
        }
        let base = if reduced { basepoint.or_else(|| d.edges().min()) } else { None };
        let (np, nn) = (d.positive_count() as i32, d.negative_count() as i32);
        let states: Vec<State> = (0..1u32 << n).map(|r| resolve(d, r)).collect();
        let loops = d.free_loops();
        // generator index by (state, labelling); bit set = circle labelled X
        let mut generators = Vec::new();
        let mut lookup: HashMap<(u32, u64), usize> = HashMap::new();
        let mut per_state: Vec<Vec<(u64, usize)>> = vec![Vec::new(); states.len()];
        for (r, st) in states.iter().enumerate() {
            let total = st.circles + loops;
            let marked = base.map(|e| st.circle_of[&e]);
            for lab in 0u64..1 << total {
                if let Some(m) = marked {
                    if lab >> m & 1 == 0 {
                        continue;
                    }
                }
                let xs = lab.count_ones() as i32;
                let ones = total as i32 - xs;
                let mut q = ones - xs + r.count_ones() as i32 + np - 2 * nn;
                if marked.is_some() {
                    q += 1;
                }
                lookup.insert((r as u32, lab), generators.len());
                per_state[r].push((lab, generators.len()));
                generators.push((r.count_ones() as i32 - nn, q));
            }
        }
        let mut differential = Vec::new();
        let one = field.one();
        for (r, st) in states.iter().enumerate() {
            let r = r as u32;
            for c in 0..n {
                if r >> c & 1 == 1 {
                    continue;
                }
                let r2 = r | 1 << c;
                let st2 = &states[r2 as usize];
                let sign = if (r & ((1u32 << c) - 1)).count_ones() % 2 == 0 { one.clone() } else { field.neg(&one) };
                // circle correspondence away from crossing c
                let x = d.crossings()[c];
                let incident: Vec<usize> = x.iter().map(|e| st.circle_of[e]).collect();
                let incident2: Vec<usize> = x.iter().map(|e| st2.circle_of[e]).collect();
                let mut map_old_to_new: HashMap<usize, usize> = HashMap::new();
                for (e, &ci) in &st.circle_of {
                    map_old_to_new.insert(ci, st2.circle_of[e]);
                }
                for &(lab, src) in &per_state[r as usize] {
                    for (lab2, coef) in saddle_image(&field, st, st2, &incident, &incident2, &map_old_to_new, lab, loops) {
                        if let Some(&tgt) = lookup.get(&(r2, lab2)) {
                            differential.push((src, tgt, field.mul(&sign, &coef)));
                        }
                    }
                }
            }
        }
        differential.sort_by_key(|t| (t.0, t.1));
        Ok(KhovanovComplex { field, reduced, basepoint_edge: base, generators, differential })
    }

    fn composite(&self) -> BTreeMap<(usize, usize), F::Elem> {
        let mut by_src: HashMap<usize, Vec<(usize, F::Elem)>> = HashMap::new();
        for (s, t, c) in &self.differential {
            by_src.entry(*s).or_default().push((*t, c.clone()));
        }
        let mut out: BTreeMap<(usize, usize), F::Elem> = BTreeMap::new();
        for (s, t, c) in &self.differential {
            for (u, c2) in by_src.get(t).into_iter().flatten() {
                let slot = out.entry((*s, *u)).or_insert_with(|| self.field.zero());
                *slot = self.field.add(slot, &self.field.mul(c, c2));
            }
        }
        out.retain(|_, v| !self.field.is_zero(v));
        out
    }

    pub fn squares_to_zero(&self) -> bool {
        self.composite().is_empty()
    }

    pub fn ranks(&self) -> BigradedRankTable {
        let mut blocks: BTreeMap<(i32, i32), Vec<usize>> = BTreeMap::new();
        for (i, &g) in self.generators.iter().enumerate() {
            blocks.entry(g).or_default().push(i);
        }
        let pos: HashMap<usize, usize> = blocks.values().flat_map(|v| v.iter().enumerate().map(|(k, &i)| (i, k))).collect();
        let mut mats: BTreeMap<(i32, i32), Vec<Vec<F::Elem>>> = BTreeMap::new();
        for (s, t, c) in &self.differential {
            let (h, q) = self.generators[*s];
            let rows = blocks[&(h + 1, q)].len();
            let cols = blocks[&(h, q)].len();
            let m = mats.entry((h, q)).or_insert_with(|| vec![vec![self.field.zero(); cols]; rows]);
            m[pos[t]][pos[s]] = c.clone();
        }
        let ranks: BTreeMap<(i32, i32), usize> = mats.into_iter().map(|(k, m)| (k, rank(&self.field, m))).collect();
        let mut t = BigradedRankTable::default();
        for (&(h, q), gens) in &blocks {
            let r = gens.len() - ranks.get(&(h, q)).copied().unwrap_or(0) - ranks.get(&(h - 1, q)).copied().unwrap_or(0);
            t.add(h, q, r as u64);
        }
        t
    }
}

/// Image of one labelled state under the merge or split at a crossing.
#[allow(clippy::too_many_arguments)]
fn saddle_image<F: Field>(
    field: &F,
    st: &State,
    st2: &State,
    incident: &[usize],
    incident2: &[usize],
    map: &HashMap<usize, usize>,
    lab: u64,
    loops: usize,
) -> Vec<(u64, F::Elem)> {
    let one = field.one();
    let old: Vec<usize> = {
        let mut v = incident.to_vec();
        v.sort_unstable();
        v.dedup();
        v
    };
    let new: Vec<usize> = {
        let mut v = incident2.to_vec();
        v.sort_unstable();
        v.dedup();
        v
    };
    // carry over untouched circles and free loops
    let mut base = 0u64;
    for i in 0..st.circles {
        if old.contains(&i) {
            continue;
        }
        if lab >> i & 1 == 1 {
            base |= 1 << map[&i];
        }
    }
    for k in 0..loops {
        if lab >> (st.circles + k) & 1 == 1 {
            base |= 1 << (st2.circles + k);
        }
    }
    let bit = |m: u64, i: usize| m >> i & 1 == 1;
    match (old.len(), new.len()) {
        (2, 1) => {
            let xs = bit(lab, old[0]) as u32 + bit(lab, old[1]) as u32;
            match xs {
                0 => vec![(base, one)],
                1 => vec![(base | 1 << new[0], one)],
                _ => Vec::new(),
            }
        }
        (1, 2) => {
            if bit(lab, old[0]) {
                vec![(base | 1 << new[0] | 1 << new[1], one)]
            } else {
                vec![(base | 1 << new[0], one.clone()), (base | 1 << new[1], one)]
            }
        }
        _ => unreachable!("a saddle merges two circles or splits one"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PrimeField;
    use crate::diagram::corpus_diagram;

    #[test]
    fn figure_eight_cube() {
        let d = corpus_diagram("4_1").unwrap();
        let c = KhovanovComplex::build(PrimeField::new(3), &d, true, None).unwrap();
        assert!(c.squares_to_zero());
        assert_eq!(c.ranks().total(), 5);
        let u = KhovanovComplex::build(PrimeField::new(2), &d, false, None).unwrap();
        assert!(u.squares_to_zero());
        assert_eq!(u.ranks().total(), 10);
    }
}
