use crate::scalar::Ring;

/// Maximum number of entries in a leaf before it bursts.
pub const BURST_THRESHOLD: usize = 10;

#[derive(Clone, Debug)]
enum Node<S> {
    Leaf(Vec<(Vec<u32>, S)>),
    Split { var: usize, min: u32, children: Vec<Node<S>> },
}

/// Outline of a trie, for inspection in tests and diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TrieShape {
    Leaf(usize),
    Split { var: usize, min: u32, children: Vec<TrieShape> },
}

/// Prefix tree over exponent vectors whose leaves are sorted arrays.
///
/// A leaf holding more than `threshold` entries splits on the lowest-index
/// variable whose exponents are not all equal inside the leaf.
#[derive(Clone, Debug)]
pub struct BurstTrie<S> {
    root: Node<S>,
    threshold: usize,
    len: usize,
}

impl<S: Ring> Default for BurstTrie<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Ring> BurstTrie<S> {
    pub fn new() -> Self {
        Self::with_threshold(BURST_THRESHOLD)
    }

    pub fn with_threshold(threshold: usize) -> Self {
        BurstTrie { root: Node::Leaf(Vec::new()), threshold: threshold.max(1), len: 0 }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Adds `c` to the coefficient of `mono`; a coefficient that cancels to zero is removed.
    pub fn insert(&mut self, mono: Vec<u32>, c: S) {
        if c.is_zero() {
            return;
        }
        let threshold = self.threshold;
        let delta = insert_node(&mut self.root, mono, c, threshold);
        self.len = (self.len as isize + delta) as usize;
    }

    pub fn get(&self, mono: &[u32]) -> Option<&S> {
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf(items) => {
                    return items
                        .binary_search_by(|(e, _)| e.as_slice().cmp(mono))
                        .ok()
                        .map(|i| &items[i].1);
                }
                Node::Split { var, min, children } => {
                    let e = mono[*var];
                    if e < *min || (e - min) as usize >= children.len() {
                        return None;
                    }
                    node = &children[(e - min) as usize];
                }
            }
        }
    }

    /// All entries in lexicographic order of exponent vectors.
    pub fn entries(&self) -> Vec<(Vec<u32>, S)> {
        let mut out = Vec::with_capacity(self.len);
        collect(&self.root, &mut out);
        out
    }

    pub fn shape(&self) -> TrieShape {
        shape(&self.root)
    }
}

fn shape<S>(node: &Node<S>) -> TrieShape {
    match node {
        Node::Leaf(items) => TrieShape::Leaf(items.len()),
        Node::Split { var, min, children } => TrieShape::Split {
            var: *var,
            min: *min,
            children: children.iter().map(shape).collect(),
        },
    }
}

fn collect<S: Clone>(node: &Node<S>, out: &mut Vec<(Vec<u32>, S)>) {
    match node {
        Node::Leaf(items) => out.extend(items.iter().cloned()),
        Node::Split { children, .. } => children.iter().for_each(|c| collect(c, out)),
    }
}

fn insert_node<S: Ring>(node: &mut Node<S>, mono: Vec<u32>, c: S, threshold: usize) -> isize {
    match node {
        Node::Leaf(items) => {
            let delta = match items.binary_search_by(|(e, _)| e.cmp(&mono)) {
                Ok(i) => {
                    let sum = items[i].1.clone() + c;
                    if sum.is_zero() {
                        items.remove(i);
                        -1
                    } else {
                        items[i].1 = sum;
                        0
                    }
                }
                Err(i) => {
                    items.insert(i, (mono, c));
                    1
                }
            };
            if items.len() > threshold {
                burst(node, threshold);
            }
            delta
        }
        Node::Split { var, min, children } => {
            let e = mono[*var];
            if e < *min {
                let extra = (*min - e) as usize;
                let mut fresh: Vec<Node<S>> = (0..extra).map(|_| Node::Leaf(Vec::new())).collect();
                fresh.append(children);
                *children = fresh;
                *min = e;
            }
            let idx = (e - *min) as usize;
            while children.len() <= idx {
                children.push(Node::Leaf(Vec::new()));
            }
            insert_node(&mut children[idx], mono, c, threshold)
        }
    }
}

fn burst<S: Ring>(node: &mut Node<S>, threshold: usize) {
    let Node::Leaf(items) = node else { return };
    let dim = items[0].0.len();
    let split = (0..dim).find(|&v| {
        let first = items[0].0[v];
        items.iter().any(|(e, _)| e[v] != first)
    });
    let Some(var) = split else { return };
    let min = items.iter().map(|(e, _)| e[var]).min().unwrap();
    let max = items.iter().map(|(e, _)| e[var]).max().unwrap();
    let mut children: Vec<Vec<(Vec<u32>, S)>> = vec![Vec::new(); (max - min + 1) as usize];
    for (e, c) in items.drain(..) {
        children[(e[var] - min) as usize].push((e, c));
    }
    let mut nodes: Vec<Node<S>> = children.into_iter().map(Node::Leaf).collect();
    for child in nodes.iter_mut() {
        if matches!(child, Node::Leaf(v) if v.len() > threshold) {
            burst(child, threshold);
        }
    }
    *node = Node::Split { var, min, children: nodes };
}
