//! Abstract intersection data `C = (L, P)` of a line arrangement, incidence
//! graphs, and automorphism groups.
//!
//! Points are stored as sorted subsets of 1-based line labels, and the stored
//! set contains all points including the double ones, so the two axioms
//! (every point has at least two lines, every pair of lines lies in exactly
//! one point) can be checked literally.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// A combinatorial type: `n_lines` labelled lines and the set of points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Combinatorics {
    n_lines: usize,
    /// Each point: sorted 1-based labels. The list is sorted lexicographically.
    points: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComboError {
    /// A point subset with fewer than two lines, or an out-of-range label.
    BadPoint(Vec<usize>),
    /// A pair of lines contained in two different points.
    PairInTwoPoints { pair: (usize, usize) },
    /// A pair of lines contained in no point.
    PairUncovered { pair: (usize, usize) },
    /// Automorphism search bound exceeded.
    TooManyLines { n: usize },
    /// A supplied generator does not preserve the point set.
    NotAnAutomorphism,
    UnknownName(String),
}

impl fmt::Display for ComboError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComboError::BadPoint(p) => write!(f, "invalid point {p:?}"),
            ComboError::PairInTwoPoints { pair } => {
                write!(f, "pair ({}, {}) lies in two points", pair.0, pair.1)
            }
            ComboError::PairUncovered { pair } => {
                write!(f, "pair ({}, {}) lies in no point", pair.0, pair.1)
            }
            ComboError::TooManyLines { n } => {
                write!(f, "automorphism search limited to 20 lines, got {n}")
            }
            ComboError::NotAnAutomorphism => write!(f, "generator is not an automorphism"),
            ComboError::UnknownName(s) => write!(f, "unknown built-in combinatorics `{s}`"),
        }
    }
}

impl core::error::Error for ComboError {}

impl Combinatorics {
    /// Build from raw point subsets; sorts everything into canonical form.
    pub fn new(n_lines: usize, points: impl IntoIterator<Item = Vec<usize>>) -> Combinatorics {
        let mut pts: Vec<Vec<usize>> = points
            .into_iter()
            .map(|mut p| {
                p.sort_unstable();
                p.dedup();
                p
            })
            .collect();
        pts.sort();
        pts.dedup();
        Combinatorics { n_lines, points: pts }
    }

    pub fn n_lines(&self) -> usize {
        self.n_lines
    }

    pub fn points(&self) -> &[Vec<usize>] {
        &self.points
    }

    /// Check the two axioms; `Ok(())` or the first violation.
    pub fn validate(&self) -> Result<(), ComboError> {
        for p in &self.points {
            if p.len() < 2 || p.iter().any(|&l| l == 0 || l > self.n_lines) {
                return Err(ComboError::BadPoint(p.clone()));
            }
        }
        let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (idx, p) in self.points.iter().enumerate() {
            for i in 0..p.len() {
                for j in i + 1..p.len() {
                    let pair = (p[i], p[j]);
                    if let Some(_prev) = seen.insert(pair, idx) {
                        return Err(ComboError::PairInTwoPoints { pair });
                    }
                }
            }
        }
        for a in 1..=self.n_lines {
            for b in a + 1..=self.n_lines {
                if !seen.contains_key(&(a, b)) {
                    return Err(ComboError::PairUncovered { pair: (a, b) });
                }
            }
        }
        Ok(())
    }

    /// The unique point containing both labels, if any.
    pub fn point_through(&self, a: usize, b: usize) -> Option<&Vec<usize>> {
        self.points
            .iter()
            .find(|p| p.contains(&a) && p.contains(&b))
    }

    /// Points lying on the given line.
    pub fn points_on_line(&self, line: usize) -> impl Iterator<Item = &Vec<usize>> {
        self.points.iter().filter(move |p| p.contains(&line))
    }

    /// Relabel lines by a permutation (`l -> pi(l)`).
    pub fn relabel(&self, pi: &Permutation) -> Combinatorics {
        Combinatorics::new(
            self.n_lines,
            self.points
                .iter()
                .map(|p| p.iter().map(|&l| pi.image(l)).collect::<Vec<_>>()),
        )
    }

    pub fn incidence_graph(&self) -> Result<IncidenceGraph, ComboError> {
        self.validate()?;
        let mut edges = Vec::new();
        for (pi, p) in self.points.iter().enumerate() {
            for &l in p {
                edges.push((l, pi));
            }
        }
        Ok(IncidenceGraph {
            n_lines: self.n_lines,
            n_points: self.points.len(),
            edges,
        })
    }

    /// Per-line invariant used to prune the automorphism search: the sorted
    /// multiset of multiplicities of the points through the line.
    fn line_profile(&self, line: usize) -> Vec<usize> {
        let mut prof: Vec<usize> = self.points_on_line(line).map(|p| p.len()).collect();
        prof.sort_unstable();
        prof
    }

    /// The full group of line permutations preserving the point set, found by
    /// backtracking with profile pruning. Groups here are tiny, so elements
    /// are materialized.
    pub fn automorphism_group(&self) -> Result<AutGroup, ComboError> {
        self.validate()?;
        if self.n_lines > 20 {
            return Err(ComboError::TooManyLines { n: self.n_lines });
        }
        let n = self.n_lines;
        let profiles: Vec<Vec<usize>> = (1..=n).map(|l| self.line_profile(l)).collect();
        let point_set: BTreeSet<&Vec<usize>> = self.points.iter().collect();
        let mut elements: Vec<Permutation> = Vec::new();
        let mut images = vec![0usize; n];
        let mut used = vec![false; n + 1];
        self.search(
            0,
            &mut images,
            &mut used,
            &profiles,
            &point_set,
            &mut elements,
        );
        elements.sort_by(|a, b| a.images.cmp(&b.images));
        Ok(AutGroup::from_elements(elements))
    }

    fn search(
        &self,
        depth: usize,
        images: &mut Vec<usize>,
        used: &mut Vec<bool>,
        profiles: &[Vec<usize>],
        point_set: &BTreeSet<&Vec<usize>>,
        out: &mut Vec<Permutation>,
    ) {
        let n = self.n_lines;
        if depth == n {
            out.push(Permutation { images: images.clone() });
            return;
        }
        let line = depth + 1;
        for cand in 1..=n {
            if used[cand] || profiles[line - 1] != profiles[cand - 1] {
                continue;
            }
            images[depth] = cand;
            used[cand] = true;
            if self.partial_consistent(depth + 1, images, point_set) {
                self.search(depth + 1, images, used, profiles, point_set, out);
            }
            used[cand] = false;
        }
        images[depth] = 0;
    }

    /// Every point fully contained in the assigned prefix must map to a point.
    fn partial_consistent(
        &self,
        assigned: usize,
        images: &[usize],
        point_set: &BTreeSet<&Vec<usize>>,
    ) -> bool {
        'points: for p in &self.points {
            let mut img = Vec::with_capacity(p.len());
            for &l in p {
                if l > assigned {
                    continue 'points;
                }
                img.push(images[l - 1]);
            }
            img.sort_unstable();
            if !point_set.contains(&img) {
                return false;
            }
        }
        true
    }

    /// Orbit partition of lines and of points under a group.
    pub fn orbits(&self, group: &AutGroup) -> Result<Orbits, ComboError> {
        for g in group.elements() {
            if self.relabel(g) != *self {
                return Err(ComboError::NotAnAutomorphism);
            }
        }
        // Line orbits.
        let mut line_orbit = vec![usize::MAX; self.n_lines + 1];
        let mut line_orbits: Vec<Vec<usize>> = Vec::new();
        for l in 1..=self.n_lines {
            if line_orbit[l] != usize::MAX {
                continue;
            }
            let id = line_orbits.len();
            let mut orbit: BTreeSet<usize> = BTreeSet::new();
            for g in group.elements() {
                orbit.insert(g.image(l));
            }
            for &m in &orbit {
                line_orbit[m] = id;
            }
            line_orbits.push(orbit.into_iter().collect());
        }
        // Point orbits.
        let index: BTreeMap<&Vec<usize>, usize> = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        let mut point_orbit = vec![usize::MAX; self.points.len()];
        let mut point_orbits: Vec<Vec<usize>> = Vec::new();
        for i in 0..self.points.len() {
            if point_orbit[i] != usize::MAX {
                continue;
            }
            let id = point_orbits.len();
            let mut orbit: BTreeSet<usize> = BTreeSet::new();
            for g in group.elements() {
                let mut img: Vec<usize> =
                    self.points[i].iter().map(|&l| g.image(l)).collect();
                img.sort_unstable();
                orbit.insert(index[&img]);
            }
            for &j in &orbit {
                point_orbit[j] = id;
            }
            point_orbits.push(orbit.into_iter().collect());
        }
        Ok(Orbits { line_orbits, point_orbits })
    }
}

/// Bipartite incidence graph: one vertex per line and per point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceGraph {
    pub n_lines: usize,
    pub n_points: usize,
    /// Edges `(line label, point index)`.
    pub edges: Vec<(usize, usize)>,
}

impl IncidenceGraph {
    pub fn n_vertices(&self) -> usize {
        self.n_lines + self.n_points
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Brute-force count of all graph automorphisms (not necessarily
    /// bipartite-respecting). Only for small graphs.
    pub fn automorphism_count_brute(&self) -> Option<u64> {
        let n = self.n_vertices();
        if n > 12 {
            return None;
        }
        // Adjacency matrix; vertices 0..n_lines are lines, the rest points.
        let mut adj = vec![false; n * n];
        for &(l, p) in &self.edges {
            let a = l - 1;
            let b = self.n_lines + p;
            adj[a * n + b] = true;
            adj[b * n + a] = true;
        }
        let mut perm: Vec<usize> = (0..n).collect();
        let mut count = 0u64;
        permute_count(&mut perm, 0, &adj, n, &mut count);
        Some(count)
    }
}

fn permute_count(perm: &mut Vec<usize>, k: usize, adj: &[bool], n: usize, count: &mut u64) {
    if k == n {
        *count += 1;
        return;
    }
    for i in k..n {
        perm.swap(k, i);
        // Partial check: edges within the prefix must be preserved.
        let ok = (0..k).all(|j| adj[perm[k] * n + perm[j]] == adj[k * n + j]);
        if ok {
            permute_count(perm, k + 1, adj, n, count);
        }
        perm.swap(k, i);
    }
}

/// A permutation of `1..=n`, stored as the image sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        Permutation { images: (1..=n).collect() }
    }

    /// From the image sequence (1-based); must be a bijection.
    pub fn from_images(images: Vec<usize>) -> Option<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v > n || seen[v] {
                return None;
            }
            seen[v] = true;
        }
        Some(Permutation { images })
    }

    /// From disjoint cycles over `1..=n`, e.g. `&[&[1,3,2,4], &[5,6]]`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Option<Permutation> {
        let mut images: Vec<usize> = (1..=n).collect();
        for cyc in cycles {
            for w in 0..cyc.len() {
                let from = cyc[w];
                let to = cyc[(w + 1) % cyc.len()];
                if from == 0 || from > n {
                    return None;
                }
                images[from - 1] = to;
            }
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, l: usize) -> usize {
        self.images[l - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn compose(&self, then: &Permutation) -> Permutation {
        // (then . self)(x) = then(self(x))
        Permutation {
            images: self.images.iter().map(|&v| then.image(v)).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0usize; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v - 1] = i + 1;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// Cycle notation, fixed points omitted; `()` for the identity.
    pub fn cycle_string(&self) -> String {
        let n = self.images.len();
        let mut seen = vec![false; n + 1];
        let mut out = String::new();
        for start in 1..=n {
            if seen[start] || self.image(start) == start {
                seen[start] = true;
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut cur = self.image(start);
            while cur != start {
                seen[cur] = true;
                cyc.push(cur);
                cur = self.image(cur);
            }
            out.push('(');
            for (i, v) in cyc.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                out.push_str(&format!("{v}"));
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

/// A fully materialized permutation group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutGroup {
    elements: Vec<Permutation>,
    generators: Vec<Permutation>,
}

impl AutGroup {
    pub fn trivial(n: usize) -> AutGroup {
        AutGroup {
            elements: vec![Permutation::identity(n)],
            generators: vec![],
        }
    }

    pub fn from_elements(elements: Vec<Permutation>) -> AutGroup {
        let generators = minimal_generators(&elements);
        AutGroup { elements, generators }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.contains(p)
    }

    /// Closure under composition and inverse; the identity must be present.
    pub fn is_closed(&self) -> bool {
        let set: BTreeSet<&Permutation> = self.elements.iter().collect();
        if self.elements.is_empty() {
            return false;
        }
        let n = self.elements[0].degree();
        if !set.contains(&Permutation::identity(n)) {
            return false;
        }
        self.elements.iter().all(|a| {
            set.contains(&a.inverse())
                && self.elements.iter().all(|b| set.contains(&a.compose(b)))
        })
    }

    /// The conjugate group `pi . G . pi^-1`.
    pub fn conjugate_by(&self, pi: &Permutation) -> AutGroup {
        let inv = pi.inverse();
        let mut elements: Vec<Permutation> = self
            .elements
            .iter()
            .map(|g| inv.compose(g).compose(pi))
            .collect();
        elements.sort();
        AutGroup::from_elements(elements)
    }
}

/// Greedy generator extraction: add elements until they span the group.
fn minimal_generators(elements: &[Permutation]) -> Vec<Permutation> {
    if elements.len() <= 1 {
        return vec![];
    }
    let n = elements[0].degree();
    let mut gens: Vec<Permutation> = Vec::new();
    let mut span: BTreeSet<Permutation> = BTreeSet::new();
    span.insert(Permutation::identity(n));
    for e in elements {
        if span.contains(e) {
            continue;
        }
        gens.push(e.clone());
        // Regenerate the span.
        let mut frontier: Vec<Permutation> = span.iter().cloned().collect();
        while let Some(x) = frontier.pop() {
            for g in &gens {
                let y = x.compose(g);
                if span.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        if span.len() == elements.len() {
            break;
        }
    }
    gens
}

/// Orbit partitions of lines (labels) and points (indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbits {
    pub line_orbits: Vec<Vec<usize>>,
    pub point_orbits: Vec<Vec<usize>>,
}

/// The 11-line combinatorics with four quadruple points.
pub fn builtin_k() -> Combinatorics {
    let pts: [&[usize]; 23] = [
        &[1, 2],
        &[1, 3, 5, 7],
        &[1, 4, 6, 8],
        &[1, 9],
        &[1, 10, 11],
        &[2, 3, 6, 9],
        &[2, 4, 5, 10],
        &[2, 7, 11],
        &[2, 8],
        &[3, 4],
        &[3, 8, 11],
        &[3, 10],
        &[4, 7],
        &[4, 9, 11],
        &[5, 6],
        &[5, 8, 9],
        &[5, 11],
        &[6, 7, 10],
        &[6, 11],
        &[7, 8],
        &[7, 9],
        &[8, 10],
        &[9, 10],
    ];
    Combinatorics::new(11, pts.iter().map(|p| p.to_vec()))
}

/// The 12-line extension with a unique quintuple point and trivial
/// automorphism group.
pub fn builtin_k12() -> Combinatorics {
    let pts: [&[usize]; 30] = [
        &[1, 2],
        &[1, 3, 5, 7, 12],
        &[1, 4, 6, 8],
        &[1, 9],
        &[1, 10, 11],
        &[2, 3, 6, 9],
        &[2, 4, 5, 10],
        &[2, 7, 11],
        &[2, 8],
        &[2, 12],
        &[3, 4],
        &[3, 8, 11],
        &[3, 10],
        &[4, 7],
        &[4, 9, 11],
        &[4, 12],
        &[5, 6],
        &[5, 8, 9],
        &[5, 11],
        &[6, 7, 10],
        &[6, 11],
        &[6, 12],
        &[7, 8],
        &[7, 9],
        &[8, 10],
        &[8, 12],
        &[9, 10],
        &[9, 12],
        &[10, 12],
        &[11, 12],
    ];
    Combinatorics::new(12, pts.iter().map(|p| p.to_vec()))
}

pub fn builtin_combinatorics(name: &str) -> Result<Combinatorics, ComboError> {
    match name {
        "K" => Ok(builtin_k()),
        "K12" => Ok(builtin_k12()),
        other => Err(ComboError::UnknownName(String::from(other))),
    }
}

/// A generic arrangement of `n` lines: all points double.
pub fn generic(n: usize) -> Combinatorics {
    let mut pts = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            pts.push(vec![a, b]);
        }
    }
    Combinatorics::new(n, pts)
}
