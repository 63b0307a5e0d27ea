//! Exact isomorphism test by colour refinement and backtracking.

use std::collections::{BTreeMap, HashMap};

use super::Graph;

struct Indexed {
    names: Vec<String>,
    // per vertex: (label, neighbour) lists and sorted colour ids
    out: Vec<Vec<(usize, usize)>>,
    inn: Vec<Vec<(usize, usize)>>,
    colours: Vec<Vec<usize>>,
    pair: HashMap<(usize, usize), Vec<usize>>,
}

fn index(g: &Graph, labels: &mut HashMap<String, usize>) -> Indexed {
    let names: Vec<String> = g.vertices().iter().cloned().collect();
    let pos: HashMap<&str, usize> = names.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    let n = names.len();
    let mut intern = |s: &str| {
        let k = labels.len();
        *labels.entry(s.to_string()).or_insert(k)
    };
    let mut out = vec![Vec::new(); n];
    let mut inn = vec![Vec::new(); n];
    let mut pair: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for a in g.arcs() {
        let (s, t, l) = (pos[a.source.as_str()], pos[a.target.as_str()], intern(&a.label));
        out[s].push((l, t));
        inn[t].push((l, s));
        pair.entry((s, t)).or_default().push(l);
    }
    for ls in pair.values_mut() {
        ls.sort_unstable();
    }
    let mut colours = vec![Vec::new(); n];
    for (c, v) in g.colours() {
        colours[pos[v.as_str()]].push(intern(&format!("colour:{c}")));
    }
    for cs in &mut colours {
        cs.sort_unstable();
    }
    Indexed { names, out, inn, colours, pair }
}

// Joint colour refinement so class ids are comparable across both graphs.
fn refine(a: &Indexed, b: &Indexed) -> (Vec<usize>, Vec<usize>) {
    let mut keys: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut initial = |g: &Indexed| -> Vec<usize> {
        g.colours
            .iter()
            .map(|cs| {
                let k = keys.len();
                *keys.entry(cs.clone()).or_insert(k)
            })
            .collect()
    };
    let mut ca = initial(a);
    let mut cb = initial(b);
    let classes = |c: &[usize], d: &[usize]| {
        let mut all: Vec<usize> = c.iter().chain(d).copied().collect();
        all.sort_unstable();
        all.dedup();
        all.len()
    };
    let mut count = classes(&ca, &cb);
    loop {
        let mut keys: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut step = |g: &Indexed, c: &[usize]| -> Vec<usize> {
            (0..g.names.len())
                .map(|v| {
                    let mut outs: Vec<(usize, usize)> = g.out[v].iter().map(|&(l, w)| (l, c[w])).collect();
                    let mut ins: Vec<(usize, usize)> = g.inn[v].iter().map(|&(l, w)| (l, c[w])).collect();
                    outs.sort_unstable();
                    ins.sort_unstable();
                    let mut key = vec![c[v], outs.len()];
                    key.extend(outs.into_iter().flat_map(|(l, x)| [l, x]));
                    key.push(usize::MAX);
                    key.extend(ins.into_iter().flat_map(|(l, x)| [l, x]));
                    let k = keys.len();
                    *keys.entry(key).or_insert(k)
                })
                .collect()
        };
        let na = step(a, &ca);
        let nb = step(b, &cb);
        let next = classes(&na, &nb);
        ca = na;
        cb = nb;
        if next == count {
            return (ca, cb);
        }
        count = next;
    }
}

struct Search<'a> {
    a: &'a Indexed,
    b: &'a Indexed,
    ca: Vec<usize>,
    cb: Vec<usize>,
    order: Vec<usize>,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
    by_class: HashMap<usize, Vec<usize>>,
    nbrs_a: Vec<Vec<usize>>,
    nbrs_b: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn consistent(&self, v: usize, w: usize) -> bool {
        let empty = Vec::new();
        let get = |g: &Indexed, s, t| g.pair.get(&(s, t)).unwrap_or(&empty).clone();
        if get(self.a, v, v) != get(self.b, w, w) {
            return false;
        }
        for &x in &self.nbrs_a[v] {
            if let Some(y) = self.map[x] {
                if get(self.a, v, x) != get(self.b, w, y) || get(self.a, x, v) != get(self.b, y, w) {
                    return false;
                }
            }
        }
        // mapped neighbours of w must come from mapped neighbours of v
        let mapped_a = self.nbrs_a[v].iter().filter(|&&x| self.map[x].is_some()).count();
        let mapped_b = self.nbrs_b[w].iter().filter(|&&y| self.used[y]).count();
        mapped_a == mapped_b
    }

    fn run(&mut self, k: usize) -> bool {
        if k == self.order.len() {
            return true;
        }
        let v = self.order[k];
        let anchor = self.nbrs_a[v].iter().find_map(|&x| self.map[x]);
        let candidates: Vec<usize> = match anchor {
            Some(y) => self.nbrs_b[y].iter().copied().filter(|&w| self.cb[w] == self.ca[v]).collect(),
            None => self.by_class.get(&self.ca[v]).cloned().unwrap_or_default(),
        };
        for w in candidates {
            if self.used[w] || !self.consistent(v, w) {
                continue;
            }
            self.map[v] = Some(w);
            self.used[w] = true;
            if self.run(k + 1) {
                return true;
            }
            self.map[v] = None;
            self.used[w] = false;
        }
        false
    }
}

fn neighbours(g: &Indexed) -> Vec<Vec<usize>> {
    (0..g.names.len())
        .map(|v| {
            let mut n: Vec<usize> = g.out[v].iter().chain(&g.inn[v]).map(|&(_, w)| w).filter(|&w| w != v).collect();
            n.sort_unstable();
            n.dedup();
            n
        })
        .collect()
}

// Visit order: grow connected pieces, preferring vertices with many placed
// neighbours and rare classes.
fn visit_order(g: &Indexed, nbrs: &[Vec<usize>], class_size: &dyn Fn(usize) -> usize) -> Vec<usize> {
    let n = g.names.len();
    let mut placed = vec![false; n];
    let mut weight = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| (weight[v], std::cmp::Reverse(class_size(v)), std::cmp::Reverse(v)))
            .expect("unplaced vertex");
        placed[v] = true;
        order.push(v);
        for &w in &nbrs[v] {
            weight[w] += 1;
        }
    }
    order
}

/// A vertex bijection preserving arcs, labels and colours, if one exists.
pub fn isomorphism(g1: &Graph, g2: &Graph) -> Option<BTreeMap<String, String>> {
    if g1.num_vertices() != g2.num_vertices()
        || g1.num_arcs() != g2.num_arcs()
        || g1.colours().len() != g2.colours().len()
    {
        return None;
    }
    let mut labels = HashMap::new();
    let a = index(g1, &mut labels);
    let b = index(g2, &mut labels);
    let (ca, cb) = refine(&a, &b);
    let hist = |c: &[usize]| {
        let mut h: BTreeMap<usize, usize> = BTreeMap::new();
        for &x in c {
            *h.entry(x).or_default() += 1;
        }
        h
    };
    let ha = hist(&ca);
    if ha != hist(&cb) {
        return None;
    }
    let mut by_class: HashMap<usize, Vec<usize>> = HashMap::new();
    for (w, &c) in cb.iter().enumerate() {
        by_class.entry(c).or_default().push(w);
    }
    let nbrs_a = neighbours(&a);
    let nbrs_b = neighbours(&b);
    let order = visit_order(&a, &nbrs_a, &|v| ha[&ca[v]]);
    let n = a.names.len();
    let mut s = Search {
        a: &a,
        b: &b,
        ca,
        cb,
        order,
        map: vec![None; n],
        used: vec![false; n],
        by_class,
        nbrs_a,
        nbrs_b,
    };
    if !s.run(0) {
        return None;
    }
    Some(
        s.map
            .iter()
            .enumerate()
            .map(|(v, w)| (a.names[v].clone(), b.names[w.expect("complete map")].clone()))
            .collect(),
    )
}

pub fn isomorphic(g1: &Graph, g2: &Graph) -> bool {
    isomorphism(g1, g2).is_some()
}
