//! Bigraded chain complexes over F2[U,V] built from unit boxes, their
//! homology at U = V = 0, and the rank arithmetic for torsion-order-1 knots.
//!
//! Text format, one item per line (`#` starts a comment):
//!
//! ```text
//! gen a 0 0
//! gen b 1 -1
//! d b <- a : U
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HfkError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("generator `{0}` declared twice")]
    DuplicateGenerator(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("entry {target} <- {origin} : {monomial} does not lower (gr_w, gr_z) by (1, 1) after the U, V shifts")]
    BadGrading { target: String, origin: String, monomial: Monomial },
    #[error("the differential does not square to zero")]
    NotAComplex,
    #[error("delta = (gr_w + gr_z)/2 is not an integer at ({0}, {1})")]
    HalfIntegerDelta(i64, i64),
}

/// U^u V^v with coefficient 1 in F2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    pub u: u32,
    pub v: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { u: 0, v: 0 };
    pub const U: Monomial = Monomial { u: 1, v: 0 };
    pub const V: Monomial = Monomial { u: 0, v: 1 };

    pub fn new(u: u32, v: u32) -> Self {
        Monomial { u, v }
    }

    fn times(self, o: Monomial) -> Monomial {
        Monomial { u: self.u + o.u, v: self.v + o.v }
    }

    pub fn parse(s: &str) -> Option<Monomial> {
        let s: String = s.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
        if s == "1" {
            return Some(Monomial::ONE);
        }
        let mut m = Monomial::ONE;
        let mut rest = s.as_str();
        if rest.is_empty() {
            return None;
        }
        while let Some(c) = rest.chars().next() {
            rest = &rest[1..];
            let digits: String = if let Some(r) = rest.strip_prefix('^') {
                let n: String = r.chars().take_while(|c| c.is_ascii_digit()).collect();
                if n.is_empty() {
                    return None;
                }
                rest = &r[n.len()..];
                n
            } else {
                "1".into()
            };
            let e: u32 = digits.parse().ok()?;
            match c {
                'U' => m.u += e,
                'V' => m.v += e,
                _ => return None,
            }
        }
        Some(m)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |f: &mut fmt::Formatter<'_>, name: char, e: u32| match e {
            0 => Ok(()),
            1 => write!(f, "{name}"),
            _ => write!(f, "{name}^{e}"),
        };
        if self.u == 0 && self.v == 0 {
            return write!(f, "1");
        }
        part(f, 'U', self.u)?;
        part(f, 'V', self.v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub gr_w: i64,
    pub gr_z: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UVChainComplex {
    pub generators: Vec<Generator>,
    /// (target, source, monomial): the source's differential contains monomial * target.
    pub differential: Vec<(usize, usize, Monomial)>,
}

impl UVChainComplex {
    pub fn add_generator(&mut self, name: &str, gr_w: i64, gr_z: i64) -> Result<usize, HfkError> {
        if self.index_of(name).is_some() {
            return Err(HfkError::DuplicateGenerator(name.into()));
        }
        self.generators.push(Generator { name: name.into(), gr_w, gr_z });
        Ok(self.generators.len() - 1)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn add_entry(&mut self, target: &str, source: &str, m: Monomial) -> Result<(), HfkError> {
        let t = self.index_of(target).ok_or_else(|| HfkError::UnknownGenerator(target.into()))?;
        let s = self.index_of(source).ok_or_else(|| HfkError::UnknownGenerator(source.into()))?;
        // coefficients live in F2, so a repeated entry cancels
        if let Some(i) = self.differential.iter().position(|&e| e == (t, s, m)) {
            self.differential.remove(i);
        } else {
            self.differential.push((t, s, m));
        }
        Ok(())
    }

    /// Check bidegrees and that the differential squares to zero.
    pub fn validate(&self) -> Result<(), HfkError> {
        for &(t, s, m) in &self.differential {
            let (gt, gs) = (&self.generators[t], &self.generators[s]);
            let w = gt.gr_w - 2 * m.u as i64;
            let z = gt.gr_z - 2 * m.v as i64;
            if (w, z) != (gs.gr_w - 1, gs.gr_z - 1) {
                return Err(HfkError::BadGrading { target: gt.name.clone(), origin: gs.name.clone(), monomial: m });
            }
        }
        let mut from: HashMap<usize, Vec<(usize, Monomial)>> = HashMap::new();
        for &(t, s, m) in &self.differential {
            from.entry(s).or_default().push((t, m));
        }
        let mut square: HashMap<(usize, usize, Monomial), u8> = HashMap::new();
        for &(mid, s, m1) in &self.differential {
            for &(t, m2) in from.get(&mid).into_iter().flatten() {
                *square.entry((s, t, m1.times(m2))).or_insert(0) ^= 1;
            }
        }
        if square.values().any(|&c| c == 1) {
            return Err(HfkError::NotAComplex);
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<UVChainComplex, HfkError> {
        let mut c = UVChainComplex::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let err = |message: &str| HfkError::Parse { line, message: message.into() };
            let words: Vec<&str> = body.split_whitespace().collect();
            match words[0] {
                "gen" => {
                    let [_, name, w, z] = words[..] else { return Err(err("expected `gen name gr_w gr_z`")) };
                    let w: i64 = w.parse().map_err(|_| err("gr_w is not an integer"))?;
                    let z: i64 = z.parse().map_err(|_| err("gr_z is not an integer"))?;
                    c.add_generator(name, w, z)?;
                }
                "d" => {
                    let rest = body[1..].trim();
                    let (lhs, mono) = rest.split_once(':').ok_or_else(|| err("expected `d target <- source : monomial`"))?;
                    let (t, s) = lhs.split_once("<-").ok_or_else(|| err("expected `<-`"))?;
                    let m = Monomial::parse(mono).ok_or_else(|| err("bad monomial"))?;
                    c.add_entry(t.trim(), s.trim(), m)?;
                }
                _ => return Err(err("lines start with `gen` or `d`")),
            }
        }
        Ok(c)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for g in &self.generators {
            s.push_str(&format!("gen {} {} {}\n", g.name, g.gr_w, g.gr_z));
        }
        for &(t, src, m) in &self.differential {
            s.push_str(&format!("d {} <- {} : {}\n", self.generators[t].name, self.generators[src].name, m));
        }
        s
    }

    fn shifted(&self, dw: i64, dz: i64, suffix: &str) -> UVChainComplex {
        UVChainComplex {
            generators: self
                .generators
                .iter()
                .map(|g| Generator { name: format!("{}{suffix}", g.name), gr_w: g.gr_w + dw, gr_z: g.gr_z + dz })
                .collect(),
            differential: self.differential.clone(),
        }
    }
}

/// The free module F2[U,V] on one generator at (0, 0).
pub fn base_summand() -> UVChainComplex {
    UVChainComplex { generators: vec![Generator { name: "x".into(), gr_w: 0, gr_z: 0 }], differential: Vec::new() }
}

/// da = Ub + Vc, db = Vd, dc = Ud, with a at the given gradings.
pub fn unit_box(shift: (i64, i64)) -> UVChainComplex {
    let mut c = UVChainComplex::default();
    for (n, w, z) in [("a", 0, 0), ("b", 1, -1), ("c", -1, 1), ("d", 0, 0)] {
        c.add_generator(n, w + shift.0, z + shift.1).unwrap();
    }
    for (t, s, m) in [("b", "a", Monomial::U), ("c", "a", Monomial::V), ("d", "b", Monomial::V), ("d", "c", Monomial::U)] {
        c.add_entry(t, s, m).unwrap();
    }
    c
}

/// Six-generator acyclic summand with torsion order 2.
pub fn complex_a() -> UVChainComplex {
    let mut c = UVChainComplex::default();
    for (n, w, z) in [("a", 0, 0), ("b1", 1, -1), ("b2", -1, 1), ("c1", 2, 0), ("c2", 0, 2), ("d", 1, 1)] {
        c.add_generator(n, w, z).unwrap();
    }
    let e = [
        ("b1", "a", Monomial::U),
        ("b2", "a", Monomial::V),
        ("c1", "b1", Monomial::new(1, 1)),
        ("c2", "b1", Monomial::new(0, 2)),
        ("c1", "b2", Monomial::new(2, 0)),
        ("c2", "b2", Monomial::new(1, 1)),
        ("d", "c1", Monomial::V),
        ("d", "c2", Monomial::U),
    ];
    for (t, s, m) in e {
        c.add_entry(t, s, m).unwrap();
    }
    c
}

/// Block sum; generator names get a `.k` suffix for the k-th summand.
pub fn direct_sum(cs: &[UVChainComplex]) -> UVChainComplex {
    let mut out = UVChainComplex::default();
    for (k, c) in cs.iter().enumerate() {
        let off = out.generators.len();
        let s = c.shifted(0, 0, &format!(".{k}"));
        out.generators.extend(s.generators);
        out.differential.extend(c.differential.iter().map(|&(t, src, m)| (t + off, src + off, m)));
    }
    out
}

/// Ranks by (gr_w, gr_z).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HatRankTable {
    pub ranks: BTreeMap<(i64, i64), u64>,
}

impl HatRankTable {
    pub fn total(&self) -> u64 {
        self.ranks.values().sum()
    }

    /// Ranks by delta = (gr_w + gr_z)/2, half-integers doubled away.
    pub fn by_delta(&self) -> Result<BTreeMap<i64, u64>, HfkError> {
        let mut m = BTreeMap::new();
        for (&(w, z), &r) in &self.ranks {
            if (w + z) % 2 != 0 {
                return Err(HfkError::HalfIntegerDelta(w, z));
            }
            *m.entry((w + z) / 2).or_insert(0) += r;
        }
        Ok(m)
    }

    /// Ranks by Alexander grading (gr_w - gr_z)/2.
    pub fn by_alexander(&self) -> BTreeMap<i64, u64> {
        let mut m = BTreeMap::new();
        for (&(w, z), &r) in &self.ranks {
            *m.entry((w - z).div_euclid(2)).or_insert(0) += r;
        }
        m
    }
}

/// Homology over F2 after setting U = V = 0.
pub fn hat_ranks(c: &UVChainComplex) -> Result<HatRankTable, HfkError> {
    c.validate()?;
    let mut blocks: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for (i, g) in c.generators.iter().enumerate() {
        blocks.entry((g.gr_w, g.gr_z)).or_default().push(i);
    }
    // surviving entries map (w, z) to (w-1, z-1)
    let mut rank_from: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for (&(w, z), sources) in &blocks {
        let Some(targets) = blocks.get(&(w - 1, z - 1)) else { continue };
        let mut big: Vec<Vec<bool>> = vec![vec![false; sources.len()]; targets.len()];
        for &(t, s, m) in &c.differential {
            if m == Monomial::ONE {
                if let (Some(i), Some(j)) = (targets.iter().position(|&x| x == t), sources.iter().position(|&x| x == s)) {
                    big[i][j] ^= true;
                }
            }
        }
        let r = f2_rank(&big);
        rank_from.insert((w, z), r);
    }
    let mut t = HatRankTable::default();
    for (&(w, z), gens) in &blocks {
        let out = rank_from.get(&(w, z)).copied().unwrap_or(0);
        let inc = rank_from.get(&(w + 1, z + 1)).copied().unwrap_or(0);
        let r = gens.len() - out - inc;
        if r > 0 {
            t.ranks.insert((w, z), r as u64);
        }
    }
    Ok(t)
}

fn f2_rank(m: &[Vec<bool>]) -> usize {
    let mut m: Vec<Vec<bool>> = m.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c]) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] {
                let pivot = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        r += 1;
    }
    r
}

/// Sum of (-1)^delta rank.
pub fn delta_euler_hat(t: &HatRankTable) -> Result<i64, HfkError> {
    Ok(t.by_delta()?.iter().map(|(&d, &r)| if d % 2 == 0 { r as i64 } else { -(r as i64) }).sum())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionOrderOneVerdict {
    pub det: i64,
    pub arf: u8,
    pub boxes: usize,
    pub rank: i64,
    /// det = 4l +- 1 mod 8.
    pub det_matches_boxes: bool,
    /// Arf 0 forces an even number of boxes.
    pub arf_parity_ok: bool,
    /// |1 + 4 sum (-1)^delta_i| = det, when every box delta is known.
    pub euler_matches: Option<bool>,
    pub consistent: bool,
}

/// Arithmetic of a base summand plus unit boxes at the given deltas
/// (`None` where a box's delta is not known).
pub fn theorem_to_check(det: i64, arf: u8, boxes: &[Option<i64>]) -> TorsionOrderOneVerdict {
    let l = boxes.len() as i64;
    let d8 = det.rem_euclid(8);
    let det_matches_boxes = d8 == (4 * l + 1).rem_euclid(8) || d8 == (4 * l - 1).rem_euclid(8);
    let arf_parity_ok = arf != 0 || l % 2 == 0;
    let euler_matches = boxes
        .iter()
        .copied()
        .collect::<Option<Vec<i64>>>()
        .map(|ds| (1 + 4 * ds.iter().map(|d| if d % 2 == 0 { 1 } else { -1 }).sum::<i64>()).abs() == det.abs());
    let consistent = det_matches_boxes && arf_parity_ok && euler_matches != Some(false);
    TorsionOrderOneVerdict { det, arf, boxes: boxes.len(), rank: 1 + 4 * l, det_matches_boxes, arf_parity_ok, euler_matches, consistent }
}
