use std::collections::BTreeSet;

use super::TimTopology;

/// Unordered pair `(min, max)` of 0-based users.
pub type UserPair = (usize, usize);

fn pair(a: usize, b: usize) -> UserPair {
    (a.min(b), a.max(b))
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TimGraphs {
    /// Messages heard together at some third receiver; their beams must align.
    pub alignment: BTreeSet<UserPair>,
    /// Transmitter `i` interferes at receiver `k`.
    pub conflict: BTreeSet<UserPair>,
}

pub fn build_graphs(topo: &TimTopology) -> TimGraphs {
    let mut graphs = TimGraphs::default();
    for k in 0..topo.k() {
        let heard: Vec<usize> = topo.interferers(k).collect();
        for (a, &i) in heard.iter().enumerate() {
            graphs.conflict.insert(pair(i, k));
            for &j in &heard[a + 1..] {
                graphs.alignment.insert(pair(i, j));
            }
        }
    }
    graphs
}

/// Disjoint-set forest over `0..n`.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller index becomes the root so labels are canonical
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }

    /// Groups of `members` that share a root, each sorted, ordered by smallest member.
    pub(crate) fn groups(&mut self, members: &[usize]) -> Vec<Vec<usize>> {
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut roots: Vec<usize> = Vec::new();
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        for m in sorted {
            let r = self.find(m);
            match roots.iter().position(|&x| x == r) {
                Some(g) => groups[g].push(m),
                None => {
                    roots.push(r);
                    groups.push(vec![m]);
                }
            }
        }
        groups
    }
}
