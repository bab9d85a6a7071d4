use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::{PermError, PermGroup, Permutation};

/// A partition of the points into blocks permuted by the group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BlockSystem {
    blocks: Vec<Vec<usize>>,
}

impl BlockSystem {
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_size(&self) -> usize {
        self.blocks[0].len()
    }

    /// Index of the block holding `x`.
    pub fn block_of(&self, x: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(&x))
            .expect("partition covers every point")
    }

    pub fn is_trivial(&self) -> bool {
        self.blocks.len() == 1 || self.block_size() == 1
    }

    fn from_labels(labels: &[usize]) -> Self {
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for (x, &l) in labels.iter().enumerate() {
            groups.entry(l).or_default().push(x);
        }
        let mut blocks: Vec<Vec<usize>> = groups.into_values().collect();
        blocks.sort();
        BlockSystem { blocks }
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut y = x;
        while self.0[y] != root {
            y = std::mem::replace(&mut self.0[y], root);
        }
        root
    }
}

/// Finest block system in which every seed pair shares a block.
fn block_closure(group: &PermGroup, seeds: &[(usize, usize)]) -> BlockSystem {
    let mut uf = UnionFind((0..group.degree()).collect());
    let mut queue: Vec<(usize, usize)> = Vec::new();
    for &(a, b) in seeds {
        let (ra, rb) = (uf.find(a), uf.find(b));
        if ra != rb {
            uf.0[rb] = ra;
            queue.push((a, b));
        }
    }
    while let Some((x, y)) = queue.pop() {
        for g in group.gens() {
            let (gx, gy) = (g.apply(x), g.apply(y));
            let (rx, ry) = (uf.find(gx), uf.find(gy));
            if rx != ry {
                uf.0[ry] = rx;
                queue.push((gx, gy));
            }
        }
    }
    let labels: Vec<usize> = (0..group.degree()).map(|x| uf.find(x)).collect();
    BlockSystem::from_labels(&labels)
}

/// Smallest block system with `a` and `b` in one block, or `None` when that
/// forces a single block.
pub fn minimal_block_system(
    group: &PermGroup,
    seed: (usize, usize),
) -> Result<Option<BlockSystem>, PermError> {
    let d = group.degree();
    if seed.0 >= d || seed.1 >= d {
        return Err(PermError::PointOutOfRange {
            point: seed.0.max(seed.1),
            degree: d,
        });
    }
    if !group.is_transitive() {
        return Err(PermError::Intransitive);
    }
    let system = block_closure(group, &[seed]);
    Ok((system.blocks.len() > 1).then_some(system))
}

/// Transitive with no block system other than points and the whole set.
pub fn is_primitive(group: &PermGroup) -> bool {
    group.is_transitive()
        && (1..group.degree()).all(|b| block_closure(group, &[(0, b)]).blocks.len() == 1)
}

/// Every block system of a transitive group, finest first.
pub fn all_block_systems(group: &PermGroup) -> Result<Vec<BlockSystem>, PermError> {
    if !group.is_transitive() {
        return Err(PermError::Intransitive);
    }
    let d = group.degree();
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    found.insert(vec![0]);
    let mut frontier: Vec<Vec<usize>> = vec![vec![0]];
    let minimal: Vec<Vec<usize>> = (1..d)
        .map(|b| block_closure(group, &[(0, b)]).blocks[0].clone())
        .collect();
    // Every block through 0 is a join of minimal ones.
    while let Some(block) = frontier.pop() {
        for m in &minimal {
            let seeds: Vec<(usize, usize)> = block.iter().chain(m).map(|&x| (0, x)).collect();
            let joined = block_closure(group, &seeds).blocks[0].clone();
            if found.insert(joined.clone()) {
                frontier.push(joined);
            }
        }
    }
    let mut systems: Vec<BlockSystem> = found
        .into_iter()
        .map(|block| {
            let seeds: Vec<(usize, usize)> = block.iter().map(|&x| (0, x)).collect();
            block_closure(group, &seeds)
        })
        .collect();
    systems.sort_by_key(|s| (s.block_size(), s.blocks.clone()));
    Ok(systems)
}

/// One maximal refinement chain from points to the whole set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionChain {
    /// Block systems from finest (points) to coarsest (one block).
    pub systems: Vec<BlockSystem>,
    /// `|B_{i+1}| / |B_i|` along the chain.
    pub piece_degrees: Vec<usize>,
    /// Whether each piece's induced action is primitive.
    pub pieces_primitive: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub chains: Vec<DecompositionChain>,
    /// Set when more than [`CHAIN_CAP`] chains exist.
    pub truncated: bool,
}

pub const CHAIN_CAP: usize = 256;

/// Splits a solvable covering into primitive pieces, one chain per maximal
/// flag of block systems.
pub fn decompose_covering(group: &PermGroup) -> Result<Decomposition, PermError> {
    if !group.is_solvable()? {
        return Err(PermError::NotSolvable);
    }
    let systems = all_block_systems(group)?;
    let elements = group.elements()?;
    let refines = |fine: &BlockSystem, coarse: &BlockSystem| {
        coarse.block_size() > fine.block_size()
            && coarse.block_size() % fine.block_size() == 0
            && fine.blocks.iter().all(|b| {
                b.iter()
                    .all(|&x| coarse.block_of(x) == coarse.block_of(b[0]))
            })
    };
    let covers: Vec<Vec<usize>> = (0..systems.len())
        .map(|i| {
            (0..systems.len())
                .filter(|&j| {
                    refines(&systems[i], &systems[j])
                        && !(0..systems.len()).any(|k| {
                            refines(&systems[i], &systems[k]) && refines(&systems[k], &systems[j])
                        })
                })
                .collect()
        })
        .collect();

    let top = systems.len() - 1;
    let mut chains = Vec::new();
    let mut truncated = false;
    let mut stack: Vec<Vec<usize>> = vec![vec![0]];
    while let Some(path) = stack.pop() {
        let last = *path.last().expect("nonempty");
        if last == top {
            if chains.len() == CHAIN_CAP {
                truncated = true;
                break;
            }
            chains.push(path);
            continue;
        }
        for &next in covers[last].iter().rev() {
            let mut p = path.clone();
            p.push(next);
            stack.push(p);
        }
    }

    let chains = chains
        .into_iter()
        .map(|path| {
            let chain: Vec<BlockSystem> = path.iter().map(|&i| systems[i].clone()).collect();
            let piece_degrees = chain
                .windows(2)
                .map(|w| w[1].block_size() / w[0].block_size())
                .collect();
            let pieces_primitive = chain
                .windows(2)
                .map(|w| induced_piece(&elements, &w[0], &w[1]).is_some_and(|g| is_primitive(&g)))
                .collect();
            DecompositionChain {
                systems: chain,
                piece_degrees,
                pieces_primitive,
            }
        })
        .collect();
    Ok(Decomposition { chains, truncated })
}

/// Action of the stabiliser of the coarse block through 0 on the fine blocks
/// it contains.
pub fn induced_piece(
    elements: &[Permutation],
    fine: &BlockSystem,
    coarse: &BlockSystem,
) -> Option<PermGroup> {
    let outer = &coarse.blocks[coarse.block_of(0)];
    let inner: Vec<usize> = {
        let mut v: Vec<usize> = outer.iter().map(|&x| fine.block_of(x)).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let local = |block: usize| inner.iter().position(|&b| b == block);
    let mut gens: BTreeSet<Vec<usize>> = BTreeSet::new();
    for g in elements {
        if coarse.block_of(g.apply(outer[0])) != coarse.block_of(outer[0]) {
            continue;
        }
        let images: Option<Vec<usize>> = inner
            .iter()
            .map(|&b| local(fine.block_of(g.apply(fine.blocks[b][0]))))
            .collect();
        gens.insert(images?);
    }
    let gens = gens
        .into_iter()
        .map(Permutation::new)
        .collect::<Result<Vec<_>, _>>()
        .ok()?;
    PermGroup::new(inner.len(), gens).ok()
}
