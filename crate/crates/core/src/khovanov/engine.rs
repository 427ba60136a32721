//! Scanning construction of the Bar-Natan complex: crossings are tensored
//! on one at a time, closed circles are delooped immediately and every
//! degree-preserving isomorphism is cancelled by Gaussian elimination.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;
use std::time::Instant;

use super::cobordism::{build_topology, composition_topology, finish, Cycles, Evaluator, Interner, Mor, Topology};
use crate::algebra::Field;
use crate::diagram::Edge;

#[derive(Clone, Copy, Debug)]
pub struct Obj {
    pub m: u32,
    /// Number of 1-smoothings.
    pub h: i32,
    /// Circle labels plus the number of 1-smoothings, before the global shift.
    pub q: i32,
}

#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_generators: usize,
    pub deadline: Option<Instant>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Abort {
    Generators(usize),
    Deadline,
}

/// Which piece of an old arc or crossing arc a path passes through first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Part {
    Old(Edge),
    Cross(usize),
}

struct Merge {
    m: u32,
    /// Every endpoint of the new matching with the first part of its path.
    ends: Vec<(Edge, Part)>,
    loops: Vec<Part>,
}

impl Merge {
    fn end(&self, e: Edge) -> Part {
        let i = self.ends.binary_search_by_key(&e, |p| p.0).expect("endpoint of the merged matching");
        self.ends[i].1
    }
}

const OTHER: [[usize; 4]; 2] = [[1, 0, 3, 2], [3, 2, 1, 0]];
const ARC_OF: [[usize; 4]; 2] = [[0, 0, 1, 1], [0, 1, 1, 0]];

struct TensorTopo {
    topo: Topology,
    nf: usize,
    ncross: usize,
    src_loops: usize,
    tgt_loops: usize,
}

pub struct Engine<F: Field> {
    ev: Evaluator<F>,
    matchings: Interner,
    objs: Vec<Option<Obj>>,
    out: Vec<BTreeMap<usize, Mor<F::Elem>>>,
    inc: Vec<BTreeSet<usize>>,
    alive: usize,
    compose_cache: HashMap<(u32, u32, u32), Rc<(Topology, usize)>>,
    limits: Limits,
    pub peak: usize,
}

pub struct FinalComplex<E> {
    pub objs: Vec<Obj>,
    pub arrows: Vec<(usize, usize, Mor<E>)>,
}

impl<F: Field> Engine<F> {
    pub fn new(field: F, tau: F::Elem, limits: Limits) -> Self {
        let mut matchings = Interner::default();
        let empty = matchings.intern(Vec::new());
        Engine {
            ev: Evaluator::new(field, tau),
            matchings,
            objs: vec![Some(Obj { m: empty, h: 0, q: 0 })],
            out: vec![BTreeMap::new()],
            inc: vec![BTreeSet::new()],
            alive: 1,
            compose_cache: HashMap::new(),
            limits,
            peak: 1,
        }
    }

    fn field(&self) -> &F {
        &self.ev.field
    }

    fn check_deadline(&self) -> Result<(), Abort> {
        match self.limits.deadline {
            Some(t) if Instant::now() >= t => Err(Abort::Deadline),
            _ => Ok(()),
        }
    }

    /// Run the whole scan over `crossings` in the given order.
    pub fn run(mut self, crossings: &[[Edge; 4]], order: &[usize]) -> Result<(FinalComplex<F::Elem>, usize), Abort> {
        let mut boundary: BTreeSet<Edge> = BTreeSet::new();
        for &ci in order {
            let x = crossings[ci];
            boundary = self.add_crossing(&boundary, x)?;
            self.eliminate()?;
        }
        let peak = self.peak;
        Ok((self.into_final(), peak))
    }

    fn merge(&mut self, m: u32, boundary: &BTreeSet<Edge>, next: &BTreeSet<Edge>, x: [Edge; 4], s: usize) -> Merge {
        let md = self.matchings.get(m).clone();
        let slot_of = |e: Edge, not: usize| (0..4).find(|&u| u != not && x[u] == e);
        let step = |q: usize| -> Result<usize, Edge> {
            let f = x[q];
            if let Some(u) = slot_of(f, q) {
                return Ok(u);
            }
            if boundary.contains(&f) {
                let g = md.partner(f).expect("boundary label is matched");
                return match slot_of(g, 4) {
                    Some(u) => Ok(u),
                    None => Err(g),
                };
            }
            Err(f)
        };
        let mut visited = [false; 2];
        let walk = |start: usize, visited: &mut [bool; 2]| -> Option<Edge> {
            let mut p = start;
            loop {
                visited[ARC_OF[s][p]] = true;
                match step(OTHER[s][p]) {
                    Ok(u) if u == start => return None,
                    Ok(u) => p = u,
                    Err(e) => return Some(e),
                }
            }
        };
        let mut arcs = Vec::with_capacity(next.len() / 2);
        let mut ends = Vec::with_capacity(next.len());
        for &(a, b) in &md.arcs {
            let (ia, ib) = (x.contains(&a), x.contains(&b));
            if !ia && !ib {
                arcs.push((a, b));
                ends.push((a, Part::Old(a)));
                ends.push((b, Part::Old(a)));
            } else if ia != ib {
                let (free, inner) = if ia { (b, a) } else { (a, b) };
                let p = slot_of(inner, 4).unwrap();
                if !visited[ARC_OF[s][p]] {
                    let end = walk(p, &mut visited).expect("open path");
                    arcs.push((free.min(end), free.max(end)));
                    ends.push((free, Part::Old(free)));
                    ends.push((end, Part::Old(free)));
                }
            }
        }
        for p in 0..4 {
            let e = x[p];
            if next.contains(&e) && !visited[ARC_OF[s][p]] {
                let part = Part::Cross(ARC_OF[s][p]);
                let end = walk(p, &mut visited).expect("open path");
                arcs.push((e.min(end), e.max(end)));
                ends.push((e, part));
                ends.push((end, part));
            }
        }
        let mut loops = Vec::new();
        for p in 0..4 {
            let a = ARC_OF[s][p];
            if !visited[a] {
                let closed = walk(p, &mut visited);
                debug_assert!(closed.is_none());
                loops.push(Part::Cross(a));
            }
        }
        arcs.sort_unstable();
        ends.sort_unstable_by_key(|p| p.0);
        Merge { m: self.matchings.intern(arcs), ends, loops }
    }

    #[allow(clippy::too_many_arguments)]
    fn tensor_topology(&self, ms: u32, mt: u32, src: &Merge, tgt: &Merge, x: [Edge; 4], boundary: &BTreeSet<Edge>, kind: usize) -> TensorTopo {
        let (sd, td) = (self.matchings.get(ms), self.matchings.get(mt));
        let cyc = Cycles::new(sd, td);
        let nf = cyc.count;
        let saddle = kind == 2;
        let ncross = if saddle { 1 } else { 2 };
        let cross_piece = |p: usize| nf + if saddle { 0 } else { ARC_OF[kind][p] };
        let piece = |part: Part| match part {
            Part::Old(e) => cyc.of(e),
            Part::Cross(a) => nf + if saddle { 0 } else { a },
        };
        let mut intervals = Vec::new();
        for p in 0..4 {
            let e = x[p];
            if boundary.contains(&e) {
                intervals.push((cyc.of(e), cross_piece(p)));
            } else if let Some(u) = (p + 1..4).find(|&u| x[u] == e) {
                intervals.push((cross_piece(p), cross_piece(u)));
            }
        }
        let cup0 = nf + ncross;
        let cap0 = cup0 + src.loops.len();
        let mut joins = Vec::new();
        for (i, &part) in src.loops.iter().enumerate() {
            joins.push((cup0 + i, piece(part)));
        }
        for (j, &part) in tgt.loops.iter().enumerate() {
            joins.push((cap0 + j, piece(part)));
        }
        let (ns, nt) = (self.matchings.get(src.m), self.matchings.get(tgt.m));
        let fin = Cycles::new(ns, nt);
        let mut bnd = vec![0; fin.count];
        for &(a, _) in &ns.arcs {
            bnd[fin.of(a)] = piece(src.end(a));
        }
        let topo = build_topology(cap0 + tgt.loops.len(), &intervals, &joins, &bnd);
        TensorTopo { topo, nf, ncross, src_loops: src.loops.len(), tgt_loops: tgt.loops.len() }
    }

    fn add_crossing(&mut self, boundary: &BTreeSet<Edge>, x: [Edge; 4]) -> Result<BTreeSet<Edge>, Abort> {
        let mut next = boundary.clone();
        for &e in &x {
            if boundary.contains(&e) || x.iter().filter(|&&y| y == e).count() == 2 {
                next.remove(&e);
            } else {
                next.insert(e);
            }
        }
        let old: Vec<(usize, Obj)> = self.objs.iter().enumerate().filter_map(|(i, o)| o.map(|o| (i, o))).collect();
        let mut merges: HashMap<(u32, usize), Rc<Merge>> = HashMap::new();
        let mut objs: Vec<Option<Obj>> = Vec::new();
        // first new index of each (old object, smoothing)
        let mut base: HashMap<(usize, usize), usize> = HashMap::new();
        for &(i, o) in &old {
            for s in 0..2 {
                let mg = match merges.get(&(o.m, s)) {
                    Some(m) => m.clone(),
                    None => {
                        let m = Rc::new(self.merge(o.m, boundary, &next, x, s));
                        merges.insert((o.m, s), m.clone());
                        m
                    }
                };
                base.insert((i, s), objs.len());
                let l = mg.loops.len() as i32;
                for lam in 0u32..1 << l {
                    let q = o.q + s as i32 + l - 2 * lam.count_ones() as i32;
                    objs.push(Some(Obj { m: mg.m, h: o.h + s as i32, q }));
                }
            }
        }
        let n = objs.len();
        self.peak = self.peak.max(n);
        if n > self.limits.max_generators {
            return Err(Abort::Generators(n));
        }
        let mut out: Vec<BTreeMap<usize, Mor<F::Elem>>> = vec![BTreeMap::new(); n];
        let mut topos: HashMap<(u32, u32, usize), Rc<TensorTopo>> = HashMap::new();
        let one = self.field().one();
        let minus_one = self.field().neg(&one);

        let mut jobs: Vec<(usize, usize, usize, Mor<F::Elem>, F::Elem)> = Vec::new();
        for &(i, _) in &old {
            jobs.push((i, i, 2, vec![(0, one.clone())], one.clone()));
            for (&j, f) in &self.out[i] {
                jobs.push((i, j, 0, f.clone(), one.clone()));
                jobs.push((i, j, 1, f.clone(), minus_one.clone()));
            }
        }
        for (i, j, kind, f, sign) in jobs {
            let (oi, oj) = (self.objs[i].unwrap(), self.objs[j].unwrap());
            let (si, sj) = if kind == 2 { (0, 1) } else { (kind, kind) };
            let (src, tgt) = (merges[&(oi.m, si)].clone(), merges[&(oj.m, sj)].clone());
            let tt = match topos.get(&(oi.m, oj.m, kind)) {
                Some(t) => t.clone(),
                None => {
                    let t = Rc::new(self.tensor_topology(oi.m, oj.m, &src, &tgt, x, boundary, kind));
                    topos.insert((oi.m, oj.m, kind), t.clone());
                    t
                }
            };
            let (bi, bj) = (base[&(i, si)], base[&(j, sj)]);
            let mut dots = vec![0u32; tt.nf + tt.ncross + tt.src_loops + tt.tgt_loops];
            for ls in 0u32..1 << tt.src_loops {
                for lt in 0u32..1 << tt.tgt_loops {
                    let mut acc = HashMap::new();
                    for (mask, c) in &f {
                        for (k, d) in dots.iter_mut().enumerate().take(tt.nf) {
                            *d = (mask >> k & 1) as u32;
                        }
                        let cup0 = tt.nf + tt.ncross;
                        for k in 0..tt.src_loops {
                            dots[cup0 + k] = ls >> k & 1;
                        }
                        let cap0 = cup0 + tt.src_loops;
                        for k in 0..tt.tgt_loops {
                            dots[cap0 + k] = 1 - (lt >> k & 1);
                        }
                        let scale = self.field().mul(c, &sign);
                        self.ev.evaluate(&tt.topo, &dots, &scale, &mut acc);
                    }
                    let mor = finish(self.field(), acc);
                    if !mor.is_empty() {
                        out[bi + ls as usize].insert(bj + lt as usize, mor);
                    }
                }
            }
        }
        let mut inc = vec![BTreeSet::new(); n];
        for (a, row) in out.iter().enumerate() {
            for &b in row.keys() {
                inc[b].insert(a);
            }
        }
        self.objs = objs;
        self.out = out;
        self.inc = inc;
        self.alive = n;
        self.compose_cache.clear();
        self.check_deadline()?;
        Ok(next)
    }

    fn compose(&mut self, f: &Mor<F::Elem>, a: u32, b: u32, g: &Mor<F::Elem>, c: u32, scale: &F::Elem, acc: &mut HashMap<u64, F::Elem>) {
        let topo = match self.compose_cache.get(&(a, b, c)) {
            Some(t) => t.clone(),
            None => {
                let t = Rc::new(composition_topology(self.matchings.get(a), self.matchings.get(b), self.matchings.get(c)));
                self.compose_cache.insert((a, b, c), t.clone());
                t
            }
        };
        let (ref topo, nf) = *topo;
        let ng = Cycles::new(self.matchings.get(b), self.matchings.get(c)).count;
        let mut dots = vec![0u32; nf + ng];
        for (mf, cf) in f {
            for (k, d) in dots.iter_mut().enumerate().take(nf) {
                *d = (mf >> k & 1) as u32;
            }
            for (mg, cg) in g {
                for k in 0..ng {
                    dots[nf + k] = (mg >> k & 1) as u32;
                }
                let s = self.field().mul(&self.field().mul(cf, cg), scale);
                self.ev.evaluate(topo, &dots, &s, acc);
            }
        }
    }

    fn iso_coefficient(&self, a: usize, b: usize, mor: &Mor<F::Elem>) -> Option<F::Elem> {
        let (oa, ob) = (self.objs[a]?, self.objs[b]?);
        if oa.m != ob.m || oa.q != ob.q {
            return None;
        }
        let (mask, c) = mor.first()?;
        debug_assert!(mor.len() == 1 && *mask == 0, "degree-zero endomorphism is not a multiple of the identity");
        (*mask == 0).then(|| c.clone())
    }

    fn eliminate(&mut self) -> Result<(), Abort> {
        let mut queue: BTreeSet<usize> = (0..self.objs.len()).filter(|&i| self.objs[i].is_some()).collect();
        let mut steps = 0usize;
        while let Some(a) = queue.pop_first() {
            if self.objs[a].is_none() {
                continue;
            }
            let mut best: Option<(usize, usize, F::Elem)> = None;
            for (&b, mor) in &self.out[a] {
                if let Some(c) = self.iso_coefficient(a, b, mor) {
                    let cost = (self.inc[b].len() - 1) * (self.out[a].len() - 1);
                    if best.as_ref().is_none_or(|t| cost < t.0) {
                        best = Some((cost, b, c));
                    }
                }
            }
            if let Some((_, b, c)) = best {
                let touched = self.cancel(a, b, &c);
                queue.extend(touched);
                steps += 1;
                if steps % 256 == 0 {
                    self.check_deadline()?;
                }
            }
        }
        Ok(())
    }

    /// Remove the pair a -> b joined by c times the identity, adding the
    /// zig-zag correction to every other arrow x -> y through it.
    fn cancel(&mut self, a: usize, b: usize, c: &F::Elem) -> Vec<usize> {
        let field = self.field().clone();
        let inv = field.neg(&field.inv(c).expect("nonzero pivot"));
        let xs: Vec<usize> = self.inc[b].iter().copied().filter(|&x| x != a).collect();
        let ys: Vec<usize> = self.out[a].keys().copied().filter(|&y| y != b).collect();
        let mb = self.objs[b].unwrap().m;
        for &x in &xs {
            let psi = self.out[x][&b].clone();
            let mx = self.objs[x].unwrap().m;
            for &y in &ys {
                let delta = self.out[a][&y].clone();
                let my = self.objs[y].unwrap().m;
                let mut acc: HashMap<u64, F::Elem> = HashMap::new();
                if let Some(old) = self.out[x].get(&y) {
                    for (m, v) in old {
                        acc.insert(*m, v.clone());
                    }
                }
                self.compose(&psi, mx, mb, &delta, my, &inv, &mut acc);
                let mor = finish(&field, acc);
                if mor.is_empty() {
                    if self.out[x].remove(&y).is_some() {
                        self.inc[y].remove(&x);
                    }
                } else {
                    self.out[x].insert(y, mor);
                    self.inc[y].insert(x);
                }
            }
        }
        for v in [a, b] {
            let outs: Vec<usize> = self.out[v].keys().copied().collect();
            for t in outs {
                self.inc[t].remove(&v);
            }
            self.out[v].clear();
            let ins: Vec<usize> = std::mem::take(&mut self.inc[v]).into_iter().collect();
            for s in ins {
                self.out[s].remove(&v);
            }
            self.objs[v] = None;
        }
        self.alive -= 2;
        xs.into_iter().chain(ys).collect()
    }

    fn into_final(self) -> FinalComplex<F::Elem> {
        let mut index = HashMap::new();
        let mut objs = Vec::with_capacity(self.alive);
        for (i, o) in self.objs.iter().enumerate() {
            if let Some(o) = o {
                index.insert(i, objs.len());
                objs.push(*o);
            }
        }
        let mut arrows = Vec::new();
        for (i, row) in self.out.into_iter().enumerate() {
            if let Some(&a) = index.get(&i) {
                for (j, m) in row {
                    arrows.push((a, index[&j], m));
                }
            }
        }
        FinalComplex { objs, arrows }
    }
}
