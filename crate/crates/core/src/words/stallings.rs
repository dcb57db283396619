//! Folded core graphs of finitely generated subgroups.
//!
//! Every edge carries, besides its generator, a label in the free group on the
//! subgroup generators. Labels are kept consistent under folding by gauging
//! the merged vertex, so that reading a basepoint loop multiplies out to an
//! expression of the loop in the original generators.

use std::collections::HashMap;

use super::{Letter, Word};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
struct Edge {
    src: usize,
    dst: usize,
    gen: Letter,
    label: Word,
}

#[derive(Clone, Debug)]
pub struct SubgroupGraph {
    rank: usize,
    gens: Vec<Word>,
    states: usize,
    edges: Vec<Edge>,
    // (state, signed letter) -> (target, label of the traversal)
    nav: Vec<HashMap<Letter, (usize, Word)>>,
}

impl SubgroupGraph {
    pub fn new(rank: usize, gens: &[Word]) -> Result<SubgroupGraph> {
        if let Some(g) = gens.iter().find(|g| g.rank() != rank) {
            return Err(Error::RankMismatch(rank, g.rank()));
        }
        let k = gens.len();
        let mut states = 1usize;
        let mut edges: Vec<Option<Edge>> = Vec::new();

        for (j, g) in gens.iter().enumerate() {
            if g.is_identity() {
                continue;
            }
            let letters = g.letters();
            let mut cur = 0;
            for (pos, &l) in letters.iter().enumerate() {
                let nxt = if pos + 1 == letters.len() {
                    0
                } else {
                    states += 1;
                    states - 1
                };
                let lab = if pos == 0 {
                    Word::generator(k, j + 1)
                } else {
                    Word::identity(k)
                };
                edges.push(Some(if l > 0 {
                    Edge { src: cur, dst: nxt, gen: l, label: lab }
                } else {
                    Edge { src: nxt, dst: cur, gen: -l, label: lab.inverse() }
                }));
                cur = nxt;
            }
        }

        while let Some((keep_e, gone_e)) = find_fold(&edges) {
            fold(&mut edges, keep_e, gone_e);
        }

        let mut edges: Vec<Edge> = edges.into_iter().flatten().collect();
        trim(&mut edges);

        // Compact vertex ids, keeping the basepoint at 0.
        let mut ids = vec![usize::MAX; states];
        ids[0] = 0;
        let mut next = 1;
        for e in &edges {
            for v in [e.src, e.dst] {
                if ids[v] == usize::MAX {
                    ids[v] = next;
                    next += 1;
                }
            }
        }
        for e in &mut edges {
            e.src = ids[e.src];
            e.dst = ids[e.dst];
        }
        let states = next;

        let mut nav = vec![HashMap::new(); states];
        for e in &edges {
            nav[e.src].insert(e.gen, (e.dst, e.label.clone()));
            nav[e.dst].insert(-e.gen, (e.src, e.label.inverse()));
        }

        Ok(SubgroupGraph { rank, gens: gens.to_vec(), states, edges, nav })
    }

    pub fn ambient_rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[Word] {
        &self.gens
    }

    pub fn num_states(&self) -> usize {
        self.states
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Free rank of the subgroup.
    pub fn rank(&self) -> usize {
        self.edges.len() + 1 - self.states
    }

    /// True when the subgroup is the whole ambient free group.
    pub fn is_whole_group(&self) -> bool {
        self.states == 1 && self.edges.len() == self.rank
    }

    /// Expression of `u` as a word in the generators, if `u` lies in the subgroup.
    pub fn member(&self, u: &Word) -> Option<Word> {
        let mut cur = 0;
        let mut acc = Word::identity(self.gens.len());
        for &l in u.letters() {
            let (next, lab) = self.nav[cur].get(&l)?;
            acc = &acc * lab;
            cur = *next;
        }
        (cur == 0).then_some(acc)
    }

    pub fn contains(&self, u: &Word) -> bool {
        self.member(u).is_some()
    }

    /// True when some conjugate of `u` lies in the subgroup: the cyclic core
    /// of `u` reads a closed path at some vertex.
    pub fn contains_conjugate(&self, u: &Word) -> bool {
        let core = u.cyclic_reduce().core;
        (0..self.states).any(|start| {
            let mut cur = start;
            for &l in core.letters() {
                match self.nav[cur].get(&l) {
                    Some((next, _)) => cur = *next,
                    None => return false,
                }
            }
            cur == start
        })
    }

    /// Evaluates an expression in the subgroup generators back in the ambient group.
    pub fn evaluate(&self, expr: &Word) -> Word {
        if self.gens.is_empty() {
            return Word::identity(self.rank);
        }
        expr.substitute(&self.gens)
    }
}

fn find_fold(edges: &[Option<Edge>]) -> Option<(usize, usize)> {
    let mut seen: HashMap<(usize, Letter), usize> = HashMap::new();
    for (id, e) in edges.iter().enumerate() {
        let Some(e) = e else { continue };
        for key in [(e.src, e.gen), (e.dst, -e.gen)] {
            if let Some(&other) = seen.get(&key) {
                return Some((other, id));
            }
            seen.insert(key, id);
        }
    }
    None
}

// Half-edge of edge `id` leaving `from`: (target, label read in that direction).
fn half(e: &Edge, from: usize, forward: bool) -> (usize, Word) {
    if forward {
        debug_assert_eq!(e.src, from);
        (e.dst, e.label.clone())
    } else {
        debug_assert_eq!(e.dst, from);
        (e.src, e.label.inverse())
    }
}

fn fold(edges: &mut [Option<Edge>], a: usize, b: usize) {
    let ea = edges[a].clone().unwrap();
    let eb = edges[b].clone().unwrap();
    // Locate the shared vertex and direction of both half-edges.
    let (p, fa, fb) = if ea.src == eb.src && ea.gen == eb.gen {
        (ea.src, true, true)
    } else if ea.dst == eb.dst && ea.gen == eb.gen {
        (ea.dst, false, false)
    } else {
        unreachable!("fold called on non-matching edges")
    };
    let (qa, la) = half(&ea, p, fa);
    let (qb, lb) = half(&eb, p, fb);

    if qa == qb {
        edges[b] = None;
        return;
    }
    let (keep, gone, lk, lg, gone_edge) = if qb != 0 && (qa == 0 || qb > qa) {
        (qa, qb, la, lb, b)
    } else {
        (qb, qa, lb, la, a)
    };
    let delta = &lk.inverse() * &lg;
    for e in edges.iter_mut().flatten() {
        if e.src == gone {
            e.label = &delta * &e.label;
        }
        if e.dst == gone {
            e.label = &e.label * &delta.inverse();
        }
    }
    for e in edges.iter_mut().flatten() {
        if e.src == gone {
            e.src = keep;
        }
        if e.dst == gone {
            e.dst = keep;
        }
    }
    edges[gone_edge] = None;
}

fn trim(edges: &mut Vec<Edge>) {
    loop {
        let mut degree: HashMap<usize, usize> = HashMap::new();
        for e in edges.iter() {
            *degree.entry(e.src).or_default() += 1;
            *degree.entry(e.dst).or_default() += 1;
        }
        let before = edges.len();
        edges.retain(|e| {
            let leaf = |v: usize| v != 0 && degree[&v] == 1;
            !(leaf(e.src) || leaf(e.dst))
        });
        if edges.len() == before {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(letters: &[Letter]) -> Word {
        Word::new(2, letters.iter().copied()).unwrap()
    }

    #[test]
    fn small_graphs() {
        let g = SubgroupGraph::new(2, &[w(&[1, 1])]).unwrap();
        assert_eq!((g.num_states(), g.num_edges(), g.rank()), (2, 2, 1));

        let g = SubgroupGraph::new(2, &[w(&[1]), w(&[2])]).unwrap();
        assert_eq!((g.num_states(), g.rank()), (1, 2));
        assert!(g.is_whole_group());

        let g = SubgroupGraph::new(2, &[]).unwrap();
        assert_eq!((g.num_states(), g.rank()), (1, 0));
        assert!(g.contains(&Word::identity(2)));
        assert!(!g.contains(&w(&[1])));
    }

    #[test]
    fn membership_expressions() {
        let g = SubgroupGraph::new(2, &[w(&[1, 1]), w(&[2])]).unwrap();
        let e = g.member(&w(&[1, 1])).unwrap();
        assert_eq!(g.evaluate(&e), w(&[1, 1]));
        assert!(g.member(&w(&[1])).is_none());

        let c = w(&[1, 2, -1]);
        let g = SubgroupGraph::new(2, std::slice::from_ref(&c)).unwrap();
        assert_eq!(g.member(&c), Some(Word::generator(1, 1)));
    }

    #[test]
    fn even_length_subgroup_has_rank_three() {
        let g = SubgroupGraph::new(2, &[w(&[1, 2]), w(&[1, 1]), w(&[2, 1])]).unwrap();
        assert_eq!(g.num_states(), 2);
        assert_eq!(g.rank(), 3);
        assert!(g.contains(&w(&[2, 2])));
        assert!(!g.contains(&w(&[2])));
    }

    #[test]
    fn redundant_generators_fold_away() {
        let g = SubgroupGraph::new(2, &[w(&[1, 2]), w(&[1]), w(&[2])]).unwrap();
        assert!(g.is_whole_group());
        let expr = g.member(&w(&[2, -1, 2])).unwrap();
        assert_eq!(g.evaluate(&expr), w(&[2, -1, 2]));
    }

    #[test]
    fn hairs_are_trimmed() {
        // x1 x2 x1⁻¹ together with x1 x2² x1⁻¹: the x1 stem is shared
        let g = SubgroupGraph::new(2, &[w(&[1, 2, -1]), w(&[1, 2, 2, -1])]).unwrap();
        assert_eq!(g.rank(), 1);
        let e = g.member(&w(&[1, 2, 2, 2, -1])).unwrap();
        assert_eq!(g.evaluate(&e), w(&[1, 2, 2, 2, -1]));
    }

    #[test]
    fn conjugates_into_subgroup() {
        let g = SubgroupGraph::new(2, &[w(&[1, 2, -1])]).unwrap();
        assert!(g.contains_conjugate(&w(&[2])));
        assert!(g.contains_conjugate(&w(&[-2, 1, 2, 2, -1, 2])));
        assert!(!g.contains_conjugate(&w(&[1])));
        assert!(g.contains_conjugate(&w(&[])));
    }
}
