use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{ChoiceAssignment, Delta, MwpMatrix, MwpScalar};

/// The choice assignments whose evaluated matrix is free of `INF`.
///
/// Stored as the complement of a union of forbidden cubes: each cube is the
/// delta set of an `INF` monomial, and an assignment is infeasible exactly
/// when it extends some cube.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibleSet {
    points: u32,
    cubes: Vec<Vec<Delta>>,
}

impl FeasibleSet {
    /// Assignments avoiding every `INF` of `m` and every cube in `extra`.
    pub fn from_matrix(m: &MwpMatrix, points: u32, extra: &[Vec<Delta>]) -> FeasibleSet {
        let mut cubes: BTreeSet<Vec<Delta>> = extra.iter().cloned().collect();
        for (_, _, p) in m.entries() {
            for mono in p.monomials() {
                if mono.coeff == MwpScalar::Inf {
                    cubes.insert(mono.deltas.to_vec());
                }
            }
        }
        let mut cubes: Vec<Vec<Delta>> = cubes.into_iter().collect();
        // A cube containing another is redundant.
        cubes.sort_by_key(|c| c.len());
        let mut kept: Vec<Vec<Delta>> = Vec::new();
        for c in cubes {
            if !kept.iter().any(|k| k.iter().all(|d| c.contains(d))) {
                kept.push(c);
            }
        }
        FeasibleSet {
            points,
            cubes: kept,
        }
    }

    /// Number of choice points the assignments range over.
    pub fn points(&self) -> u32 {
        self.points
    }

    pub fn forbidden_cubes(&self) -> &[Vec<Delta>] {
        &self.cubes
    }

    pub fn contains(&self, sigma: &ChoiceAssignment) -> bool {
        !self
            .cubes
            .iter()
            .any(|c| c.iter().all(|d| sigma.get(d.index) == Some(d.choice)))
    }

    /// Does some feasible assignment extend `partial`?
    pub fn extends(&self, partial: &[Delta]) -> bool {
        let fixed: BTreeMap<u32, u8> = partial.iter().map(|d| (d.index, d.choice)).collect();
        self.solve(&fixed).is_some()
    }

    pub fn is_empty(&self) -> bool {
        self.witness().is_none()
    }

    /// Some feasible assignment, with unconstrained points set to 0.
    pub fn witness(&self) -> Option<ChoiceAssignment> {
        let found = self.solve(&BTreeMap::new())?;
        Some(ChoiceAssignment(
            (0..self.points)
                .map(|k| (k, found.get(&k).copied().unwrap_or(0)))
                .collect(),
        ))
    }

    /// Solves each group of cubes sharing choice points on its own.
    fn solve(&self, fixed: &BTreeMap<u32, u8>) -> Option<BTreeMap<u32, u8>> {
        let mut out = fixed.clone();
        for comp in self.components() {
            let points: Vec<u32> = comp
                .iter()
                .flat_map(|&c| self.cubes[c].iter().map(|d| d.index))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            let cubes: Vec<&Vec<Delta>> = comp.iter().map(|&c| &self.cubes[c]).collect();
            let mut assign = fixed.clone();
            if !dfs(&points, 0, &cubes, &mut assign) {
                return None;
            }
            out.extend(assign);
        }
        Some(out)
    }

    fn components(&self) -> Vec<Vec<usize>> {
        let n = self.cubes.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        let mut owner: BTreeMap<u32, usize> = BTreeMap::new();
        for (c, cube) in self.cubes.iter().enumerate() {
            for d in cube {
                match owner.get(&d.index) {
                    Some(&o) => {
                        let (a, b) = (find(&mut parent, o), find(&mut parent, c));
                        parent[a] = b;
                    }
                    None => {
                        owner.insert(d.index, c);
                    }
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for c in 0..n {
            let r = find(&mut parent, c);
            groups.entry(r).or_default().push(c);
        }
        groups.into_values().collect()
    }

    /// All feasible total assignments in lexicographic order, lazily.
    pub fn iter(&self) -> impl Iterator<Item = ChoiceAssignment> + '_ {
        FeasibleIter {
            set: self,
            stack: Vec::new(),
            started: false,
        }
    }
}

fn violated(cubes: &[&Vec<Delta>], assign: &BTreeMap<u32, u8>) -> bool {
    cubes
        .iter()
        .any(|c| c.iter().all(|d| assign.get(&d.index) == Some(&d.choice)))
}

fn dfs(points: &[u32], k: usize, cubes: &[&Vec<Delta>], assign: &mut BTreeMap<u32, u8>) -> bool {
    if violated(cubes, assign) {
        return false;
    }
    let Some(&p) = points.get(k) else {
        return true;
    };
    if assign.contains_key(&p) {
        return dfs(points, k + 1, cubes, assign);
    }
    for c in 0..3 {
        assign.insert(p, c);
        if dfs(points, k + 1, cubes, assign) {
            return true;
        }
    }
    assign.remove(&p);
    false
}

const EAGER_CHECK_POINTS: u32 = 16;

struct FeasibleIter<'a> {
    set: &'a FeasibleSet,
    /// Current partial assignment, one value per point.
    stack: Vec<u8>,
    started: bool,
}

impl FeasibleIter<'_> {
    fn prefix_ok(&self) -> bool {
        let k = self.stack.len() as u32;
        let dead = self.set.cubes.iter().any(|c| {
            c.iter()
                .all(|d| d.index < k && self.stack[d.index as usize] == d.choice)
        });
        if dead {
            return false;
        }
        // Large searches check extensibility up front to avoid thrashing.
        if self.set.points <= EAGER_CHECK_POINTS {
            return true;
        }
        let fixed: BTreeMap<u32, u8> = self
            .stack
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as u32, c))
            .collect();
        self.set.solve(&fixed).is_some()
    }

    /// Advances to the next prefix in depth-first order that survives
    /// pruning, returning false once the tree is exhausted.
    fn advance(&mut self) -> bool {
        loop {
            match self.stack.last_mut() {
                None => return false,
                Some(top) if *top < 2 => {
                    *top += 1;
                    if self.prefix_ok() {
                        return true;
                    }
                }
                Some(_) => {
                    self.stack.pop();
                }
            }
        }
    }

    fn descend(&mut self) -> bool {
        while (self.stack.len() as u32) < self.set.points {
            self.stack.push(0);
            if !self.prefix_ok() && !self.advance() {
                return false;
            }
        }
        true
    }
}

impl Iterator for FeasibleIter<'_> {
    type Item = ChoiceAssignment;

    fn next(&mut self) -> Option<ChoiceAssignment> {
        if !self.started {
            self.started = true;
            if !self.set.cubes.iter().all(|c| !c.is_empty()) {
                return None;
            }
            if !self.descend() {
                return None;
            }
        } else {
            if self.stack.is_empty() {
                return None;
            }
            if !self.advance() || !self.descend() {
                self.stack.clear();
                return None;
            }
        }
        if self.set.points == 0 {
            // the single empty assignment
            let out = ChoiceAssignment::default();
            self.stack.clear();
            return Some(out);
        }
        Some(ChoiceAssignment::from_slice(&self.stack))
    }
}
