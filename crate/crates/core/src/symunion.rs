//! Symmetric unions of a knot diagram with its mirror, and a seeded
//! source of random knot diagrams.
//!
//! Construction works on planar maps: crossings given by their four arms
//! in counter-clockwise order, with the under-strand on arms 0 and 2.
//! The mirror copy is the reflection `[a, b, c, d] -> [a, d, c, b]`; the
//! two copies are joined by a band across a shared face and each twist
//! region is a vertical chain of crossings between an edge of D and its
//! reflected partner.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::diagram::{Diagram, DiagramError, Edge};

#[derive(Debug, Error)]
pub enum SymUnionError {
    #[error("input has {0} components, expected a knot")]
    NotAKnot(usize),
    #[error("twist list is empty")]
    NoTwists,
    #[error("twist region {0} has zero crossings")]
    ZeroTwist(usize),
    #[error("assembled diagram has {0} components")]
    Components(usize),
    #[error("placement does not fit the diagram")]
    BadPlacement,
    #[error("no placement yields a knot")]
    NoPlacement,
    #[error("crossing count {found}, expected {expected}")]
    CrossingCount { found: usize, expected: usize },
    #[error("assembled diagram is not planar: {faces} faces for {crossings} crossings")]
    NotPlanar { faces: usize, crossings: usize },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Signed crossing counts of the twist regions, stacked along the axis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistSpec {
    twists: Vec<i32>,
}

impl TwistSpec {
    pub fn new(twists: Vec<i32>) -> Result<TwistSpec, SymUnionError> {
        if twists.is_empty() {
            return Err(SymUnionError::NoTwists);
        }
        if let Some(i) = twists.iter().position(|&n| n == 0) {
            return Err(SymUnionError::ZeroTwist(i));
        }
        Ok(TwistSpec { twists })
    }

    /// One region with a single half-twist.
    pub fn single() -> TwistSpec {
        TwistSpec { twists: vec![1] }
    }

    pub fn twists(&self) -> &[i32] {
        &self.twists
    }

    pub fn crossings(&self) -> usize {
        self.twists.iter().map(|n| n.unsigned_abs() as usize).sum()
    }
}

impl std::str::FromStr for TwistSpec {
    type Err = String;

    /// Comma- or space-separated integers, e.g. `"1"` or `"2,-1"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let twists = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<i32>().map_err(|_| format!("`{t}` is not an integer")))
            .collect::<Result<Vec<_>, _>>()?;
        TwistSpec::new(twists).map_err(|e| e.to_string())
    }
}

/// Where to attach: a face of D, the position on its boundary of the band
/// edge, and one boundary position per twist region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    pub face: usize,
    pub band: usize,
    pub regions: Vec<usize>,
}

type Dart = (usize, u8);

struct Map {
    arms: Vec<[Edge; 4]>,
    next: Edge,
}

impl Map {
    fn fresh(&mut self) -> Edge {
        self.next += 1;
        self.next
    }

    fn occurrences(&self) -> HashMap<Edge, [Dart; 2]> {
        let mut occ: HashMap<Edge, Vec<Dart>> = HashMap::new();
        for (c, x) in self.arms.iter().enumerate() {
            for (i, &e) in x.iter().enumerate() {
                occ.entry(e).or_default().push((c, i as u8));
            }
        }
        occ.into_iter().map(|(e, v)| (e, [v[0], v[1]])).collect()
    }

    fn far_end(&self, occ: &HashMap<Edge, [Dart; 2]>, d: Dart) -> Dart {
        let [x, y] = occ[&self.arms[d.0][d.1 as usize]];
        if x == d {
            y
        } else {
            x
        }
    }

    /// Faces as cycles of darts, each dart being the arm a boundary walk
    /// leaves by; the face stays on the left of the walk.
    fn faces(&self) -> Vec<Vec<Dart>> {
        let occ = self.occurrences();
        let mut seen = vec![[false; 4]; self.arms.len()];
        let mut faces = Vec::new();
        for c in 0..self.arms.len() {
            for i in 0..4u8 {
                if seen[c][i as usize] {
                    continue;
                }
                let mut face = Vec::new();
                let mut d = (c, i);
                while !seen[d.0][d.1 as usize] {
                    seen[d.0][d.1 as usize] = true;
                    face.push(d);
                    let (c2, j) = self.far_end(&occ, d);
                    d = (c2, (j + 3) % 4);
                }
                faces.push(face);
            }
        }
        faces
    }

    fn face_containing(&self, d: Dart) -> Vec<Dart> {
        self.faces().into_iter().find(|f| f.contains(&d)).expect("every dart bounds a face")
    }

    /// Insert a chain of twist crossings between the edges left by darts
    /// `q` and `p`, which must bound a common face with `q` before `p`.
    fn twist(&mut self, q: Dart, p: Dart, twists: &[i32]) {
        let occ = self.occurrences();
        let (qf, pf) = (self.far_end(&occ, q), self.far_end(&occ, p));
        // cut q and p: the first half keeps its label
        let q1 = self.arms[q.0][q.1 as usize];
        let p1 = self.arms[p.0][p.1 as usize];
        let (q2, p2) = (self.fresh(), self.fresh());
        self.arms[qf.0][qf.1 as usize] = q2;
        self.arms[pf.0][pf.1 as usize] = p2;
        self.chain(q1, p2, q2, p1, twists);
    }

    /// Vertical chain of crossings from the bottom ends `(br, bl)` to the
    /// top ends `(tr, tl)`; a positive count puts the `\` strand under.
    fn chain(&mut self, mut br: Edge, mut bl: Edge, top_r: Edge, top_l: Edge, twists: &[i32]) {
        let m: usize = twists.iter().map(|n| n.unsigned_abs() as usize).sum();
        let signs = twists.iter().flat_map(|&n| std::iter::repeat_n(n.signum(), n.unsigned_abs() as usize));
        for (k, s) in signs.enumerate() {
            let (tr, tl) = if k + 1 == m { (top_r, top_l) } else { (self.fresh(), self.fresh()) };
            self.arms.push(if s > 0 { [br, tr, tl, bl] } else { [tr, tl, bl, br] });
            (br, bl) = (tr, tl);
        }
    }

    /// Orient every component and rotate crossings so the under-strand
    /// enters at arm 0.
    fn into_diagram(mut self) -> Result<Diagram, DiagramError> {
        let occ = self.occurrences();
        let n = self.arms.len();
        let mut visited = vec![[false; 4]; n];
        let mut flip = vec![false; n];
        for c0 in 0..n {
            for i0 in 0..4u8 {
                if visited[c0][i0 as usize] {
                    continue;
                }
                let mut d = (c0, i0);
                loop {
                    visited[d.0][d.1 as usize] = true;
                    let out = (d.0, (d.1 + 2) % 4);
                    visited[out.0][out.1 as usize] = true;
                    if d.1 == 2 {
                        flip[d.0] = true;
                    }
                    d = self.far_end(&occ, out);
                    if d == (c0, i0) {
                        break;
                    }
                }
            }
        }
        for (x, f) in self.arms.iter_mut().zip(flip) {
            if f {
                *x = [x[2], x[3], x[0], x[1]];
            }
        }
        Ok(Diagram::from_crossings(self.arms, 0)?.canonical())
    }
}

/// Reflected mirror arms for crossing arms listed counter-clockwise.
fn reflect(x: [Edge; 4], offset: Edge) -> [Edge; 4] {
    [x[0] + offset, x[3] + offset, x[2] + offset, x[1] + offset]
}

/// The dart of the mirror copy that walks the reflection of the edge
/// leaving `d`, in the opposite direction: it starts from the far end.
fn reflected_dart(m: &Map, occ: &HashMap<Edge, [Dart; 2]>, d: Dart, n: usize) -> Dart {
    let r = |i: u8| [0u8, 3, 2, 1][i as usize];
    let (c, j) = m.far_end(occ, d);
    (c + n, r(j))
}

fn original_map(d: &Diagram) -> Map {
    Map { arms: d.crossings().to_vec(), next: d.max_label().unwrap_or(0) }
}

/// Faces of a diagram as dart cycles, in the order placements index them.
pub fn faces(d: &Diagram) -> Vec<Vec<(usize, u8)>> {
    original_map(d).faces()
}

/// All placements for `k` twist regions, in a fixed order: by face, then
/// by band position, then by region positions in increasing boundary order
/// after the band.
pub fn placements(d: &Diagram, k: usize) -> Vec<Placement> {
    let mut out = Vec::new();
    for (f, face) in faces(d).iter().enumerate() {
        let len = face.len();
        let edges: Vec<Edge> = face.iter().map(|&(c, i)| d.crossings()[c][i as usize]).collect();
        let mut distinct = edges.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != len || len < k + 1 {
            continue;
        }
        for band in 0..len {
            let mut chosen = Vec::new();
            choose(len, band, k, 1, &mut chosen, &mut |regions| {
                out.push(Placement { face: f, band, regions: regions.to_vec() })
            });
        }
    }
    out
}

fn choose(len: usize, band: usize, k: usize, from: usize, chosen: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
    if chosen.len() == k {
        emit(chosen);
        return;
    }
    for step in from..len {
        chosen.push((band + step) % len);
        choose(len, band, k, step + 1, chosen, emit);
        chosen.pop();
    }
}

/// Build the symmetric union at one placement.
pub fn symmetric_union_at(d: &Diagram, t: &TwistSpec, at: &Placement) -> Result<Diagram, SymUnionError> {
    if !d.is_knot() {
        return Err(SymUnionError::NotAKnot(d.components()));
    }
    let expected = 2 * d.crossing_count() + t.crossings();
    let out = if d.crossing_count() == 0 {
        // D # -D is a round circle and every region sits between its two sides
        let mut m = Map { arms: Vec::new(), next: 0 };
        let (b, top) = (m.fresh(), m.fresh());
        m.chain(b, b, top, top, t.twists());
        m.into_diagram()?
    } else {
        let n = d.crossing_count();
        let face = faces(d).get(at.face).cloned().ok_or(SymUnionError::BadPlacement)?;
        if at.regions.len() != t.twists().len() || at.regions.iter().chain([&at.band]).any(|&p| p >= face.len()) {
            return Err(SymUnionError::BadPlacement);
        }
        let offset = d.max_label().unwrap_or(0);
        let mut m = original_map(d);
        m.arms.extend(d.crossings().iter().map(|&x| reflect(x, offset)));
        m.next = 2 * offset;
        // band: swap the far ends of the two band edges
        let occ = m.occurrences();
        let mirror: Vec<Dart> = face.iter().map(|&q| reflected_dart(&m, &occ, q, n)).collect();
        let a = face[at.band];
        let a2 = mirror[at.band];
        let (af, af2) = (m.far_end(&occ, a), m.far_end(&occ, a2));
        let (e, e2) = (m.arms[a.0][a.1 as usize], m.arms[a2.0][a2.1 as usize]);
        m.arms[af.0][af.1 as usize] = e2;
        m.arms[af2.0][af2.1 as usize] = e;
        for (&pos, &n_i) in at.regions.iter().zip(t.twists()) {
            let (q, p) = (face[pos], mirror[pos]);
            let region = m.face_containing(q);
            if !region.contains(&p) {
                return Err(SymUnionError::BadPlacement);
            }
            m.twist(q, p, &[n_i]);
        }
        let faces = m.faces().len();
        let crossings = m.arms.len();
        if faces != crossings + 2 {
            return Err(SymUnionError::NotPlanar { faces, crossings });
        }
        m.into_diagram()?
    };
    if !out.is_knot() {
        return Err(SymUnionError::Components(out.components()));
    }
    if out.crossing_count() != expected {
        return Err(SymUnionError::CrossingCount { found: out.crossing_count(), expected });
    }
    Ok(out)
}

/// The symmetric union at the first placement that yields a knot.
pub fn symmetric_union(d: &Diagram, t: &TwistSpec) -> Result<Diagram, SymUnionError> {
    if !d.is_knot() {
        return Err(SymUnionError::NotAKnot(d.components()));
    }
    if d.crossing_count() == 0 {
        return symmetric_union_at(d, t, &Placement { face: 0, band: 0, regions: vec![0; t.twists().len()] });
    }
    for at in placements(d, t.twists().len()) {
        match symmetric_union_at(d, t, &at) {
            Ok(u) => return Ok(u),
            Err(SymUnionError::Components(_) | SymUnionError::BadPlacement) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(SymUnionError::NoPlacement)
}

/// Symmetric union at a placement drawn from `rng`, retrying until the
/// result is a knot.
pub fn random_symmetric_union<R: Rng>(d: &Diagram, t: &TwistSpec, rng: &mut R) -> Result<Diagram, SymUnionError> {
    if d.crossing_count() == 0 {
        return symmetric_union(d, t);
    }
    let mut all = placements(d, t.twists().len());
    while !all.is_empty() {
        let at = all.swap_remove(rng.gen_range(0..all.len()));
        match symmetric_union_at(d, t, &at) {
            Ok(u) => return Ok(u),
            Err(SymUnionError::Components(_) | SymUnionError::BadPlacement) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(SymUnionError::NoPlacement)
}

/// Closure of a braid word on `strands` strands; generator `i > 0` is
/// sigma_i and `-i` its inverse.
pub fn braid_closure(strands: u32, word: &[i32]) -> Result<Diagram, DiagramError> {
    if word.is_empty() {
        return Ok(Diagram::unlink(strands as usize));
    }
    let mut cur: Vec<Edge> = (1..=strands).collect();
    let mut next = strands + 1;
    let mut xs = Vec::with_capacity(word.len());
    for &g in word {
        let i = (g.unsigned_abs() - 1) as usize;
        let (a, b) = (cur[i], cur[i + 1]);
        let (c, d) = (next, next + 1);
        next += 2;
        xs.push(if g > 0 { [b, d, c, a] } else { [a, b, d, c] });
        cur[i] = c;
        cur[i + 1] = d;
    }
    let close: BTreeMap<Edge, Edge> = cur.iter().enumerate().map(|(p, &e)| (e, p as Edge + 1)).collect();
    let xs: Vec<[Edge; 4]> = xs.into_iter().map(|x| x.map(|e| close.get(&e).copied().unwrap_or(e))).collect();
    // strands that no generator touches close up into free circles
    let touched: Vec<bool> = (1..=strands).map(|s| xs.iter().any(|x| x.contains(&s))).collect();
    let loops = touched.iter().filter(|t| !**t).count();
    Ok(Diagram::from_crossings(xs, loops)?.canonical())
}

/// Random knot diagram with between 3 and `n` crossings, as the closure of
/// a random braid on 2 to 4 strands whose permutation is a single cycle.
/// Deterministic in the seed.
pub fn random_diagram(seed: u64, n: usize) -> Diagram {
    assert!(n >= 3, "random_diagram needs n >= 3");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let strands: u32 = rng.gen_range(2..=4.min(n as u32));
        let len = rng.gen_range(3..=n);
        let word: Vec<i32> = (0..len)
            .map(|_| {
                let g = rng.gen_range(1..strands) as i32;
                if rng.gen_bool(0.5) {
                    g
                } else {
                    -g
                }
            })
            .collect();
        let mut perm: Vec<u32> = (0..strands).collect();
        for &g in &word {
            perm.swap(g.unsigned_abs() as usize - 1, g.unsigned_abs() as usize);
        }
        let mut k = 0;
        let mut len_cycle = 0;
        loop {
            k = perm[k as usize];
            len_cycle += 1;
            if k == 0 {
                break;
            }
        }
        if len_cycle != strands {
            continue;
        }
        if let Ok(d) = braid_closure(strands, &word) {
            if d.is_knot() && d.free_loops() == 0 {
                return d;
            }
        }
    }
}

/// Seeded batch of symmetric unions of random diagrams, named `su_<seed>_<i>`.
pub fn generate(seed: u64, count: usize, crossings: usize, t: &TwistSpec) -> Vec<Diagram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let d = random_diagram(rng.gen(), crossings);
        if let Ok(u) = random_symmetric_union(&d, t, &mut rng) {
            out.push(u.with_name(format!("su_{seed}_{}", out.len())));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alexander::signed_det;
    use crate::algebra::IntLaurent;
    use crate::arf::arf;
    use crate::diagram::corpus_diagram;
    use crate::jones::jones;

    fn odd_square(n: i64) -> bool {
        let r = (n.unsigned_abs() as f64).sqrt().round() as i64;
        r * r == n.abs() && n % 2 != 0
    }

    #[test]
    fn unknot_union_is_unknotted() {
        let u = symmetric_union(&Diagram::unknot(), &TwistSpec::single()).unwrap();
        assert_eq!(u.crossing_count(), 1);
        assert_eq!(jones(&u).poly, IntLaurent::one());
    }

    #[test]
    fn trefoil_union() {
        let d = corpus_diagram("3_1").unwrap();
        let u = symmetric_union(&d, &TwistSpec::single()).unwrap();
        assert_eq!(u.crossing_count(), 7);
        let sdet = signed_det(&u).unwrap();
        assert_eq!(sdet.rem_euclid(8), 1);
        assert!(odd_square(sdet));
        assert_eq!(arf(&u).unwrap().value, 0);
    }

    #[test]
    fn every_valid_placement_has_square_determinant() {
        for name in ["3_1", "4_1", "5_1"] {
            let d = corpus_diagram(name).unwrap();
            for twists in [vec![1], vec![2], vec![-3], vec![1, -1], vec![2, 1]] {
                let t = TwistSpec::new(twists).unwrap();
                for at in placements(&d, t.twists().len()) {
                    if let Ok(u) = symmetric_union_at(&d, &t, &at) {
                        assert!(odd_square(signed_det(&u).unwrap()), "{name} {at:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn braid_closure_of_trefoil() {
        let d = braid_closure(2, &[1, 1, 1]).unwrap();
        assert!(d.is_knot());
        assert_eq!(d.writhe(), 3);
        assert_eq!(signed_det(&d).unwrap().abs(), 3);
    }

    #[test]
    fn twist_spec_parsing() {
        assert_eq!("2,-1".parse::<TwistSpec>().unwrap().twists(), &[2, -1]);
        assert!("0".parse::<TwistSpec>().is_err());
        assert!("".parse::<TwistSpec>().is_err());
    }
}
