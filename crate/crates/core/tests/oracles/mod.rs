//! Reference implementations used to check the library from the outside.
//! They share no code with the paths they check.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

/// DBSCAN by connected components of the eps-graph restricted to core
/// points, from an exhaustive distance matrix. Components are numbered by
/// their lowest-index core point; a border point takes the lowest-numbered
/// adjacent component. `None` is noise.
pub fn dbscan_components(points: &[Vec<f64>], eps: f64, min_pts: usize) -> Vec<Option<usize>> {
    let n = points.len();
    let dist = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt() };
    let adj: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| dist(&points[i], &points[j]) <= eps).collect()).collect();
    let core: Vec<bool> = adj.iter().map(|row| row.iter().filter(|&&b| b).count() >= min_pts).collect();

    // union-find over core-core edges
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if core[i] && core[j] && adj[i][j] {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut component_id: BTreeMap<usize, usize> = BTreeMap::new();
    let mut labels = vec![None; n];
    for i in 0..n {
        if core[i] {
            let root = find(&mut parent, i);
            let next = component_id.len();
            let id = *component_id.entry(root).or_insert(next);
            labels[i] = Some(id);
        }
    }
    for i in 0..n {
        if !core[i] {
            labels[i] = (0..n).filter(|&j| core[j] && adj[i][j]).filter_map(|j| labels[j]).min();
        }
    }
    labels
}

/// Relabels clusters by order of first appearance so two labelings can be
/// compared as partitions.
pub fn canonical_partition(labels: &[Option<usize>]) -> Vec<Option<usize>> {
    let mut map = BTreeMap::new();
    labels
        .iter()
        .map(|l| {
            l.map(|c| {
                let next = map.len();
                *map.entry(c).or_insert(next)
            })
        })
        .collect()
}

/// Accepts a word iff every step `(completed prefix set, symbol)` and the
/// final completed set were observed in some demonstrated word.
pub struct ObservedWalker {
    steps: BTreeSet<(Vec<usize>, usize)>,
    ends: BTreeSet<Vec<usize>>,
}

impl ObservedWalker {
    pub fn new(words: &[Vec<usize>]) -> Self {
        let mut steps = BTreeSet::new();
        let mut ends = BTreeSet::new();
        for w in words {
            for i in 0..w.len() {
                steps.insert((sorted(&w[..i]), w[i]));
            }
            ends.insert(sorted(w));
        }
        Self { steps, ends }
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        let distinct: BTreeSet<usize> = word.iter().copied().collect();
        distinct.len() == word.len()
            && (0..word.len()).all(|i| self.steps.contains(&(sorted(&word[..i]), word[i])))
            && self.ends.contains(&sorted(word))
    }
}

fn sorted(w: &[usize]) -> Vec<usize> {
    let mut v = w.to_vec();
    v.sort_unstable();
    v
}

/// Prefix-tree acceptor of the demonstrated words, quotiented by merging
/// every pair of nodes whose prefixes complete the same symbol set.
pub struct MergedPrefixTree {
    /// class of each PTA node, edges between classes, accepting classes
    edges: BTreeMap<(usize, usize), usize>,
    accepting: BTreeSet<usize>,
}

impl MergedPrefixTree {
    pub fn new(words: &[Vec<usize>]) -> Self {
        // nodes of the PTA are prefixes
        let mut nodes: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        nodes.insert(Vec::new(), 0);
        let mut pta_edges = Vec::new();
        let mut pta_accepting = BTreeSet::new();
        for w in words {
            for i in 0..w.len() {
                let from = nodes[&w[..i].to_vec()];
                let next = nodes.len();
                let to = *nodes.entry(w[..=i].to_vec()).or_insert(next);
                pta_edges.push((from, w[i], to));
            }
            pta_accepting.insert(nodes[w]);
        }
        // merge: class = completed set of the node's prefix
        let mut class_of_set: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut class = vec![0; nodes.len()];
        for (prefix, &node) in &nodes {
            let key = sorted(prefix);
            let next = class_of_set.len();
            class[node] = *class_of_set.entry(key).or_insert(next);
        }
        let mut edges = BTreeMap::new();
        for (from, s, to) in pta_edges {
            let prev = edges.insert((class[from], s), class[to]);
            assert!(prev.is_none() || prev == Some(class[to]), "merge is not deterministic");
        }
        let accepting = pta_accepting.into_iter().map(|n| class[n]).collect();
        Self { edges, accepting }
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        let root = 0;
        let mut c = root;
        for &s in word {
            match self.edges.get(&(c, s)) {
                Some(&next) => c = next,
                None => return false,
            }
        }
        self.accepting.contains(&c)
    }
}

/// Every word of length at most `max_len` over `0..alphabet`, repeats included.
pub fn all_words(alphabet: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for s in 0..alphabet {
                let mut v: Vec<usize> = w.clone();
                v.push(s);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Every permutation of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Least-squares coefficient of determination of `y` against `x`.
pub fn r_squared(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    if syy == 0.0 {
        return 1.0;
    }
    sxy * sxy / (sxx * syy)
}
