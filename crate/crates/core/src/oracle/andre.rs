//! André permutations, increasing binary trees, and the map between them.
//!
//! A word with distinct letters is an André permutation when it is empty or
//! a single letter, or when it splits as `tau min tau'` around its minimum
//! with both flanks André and, for kind I, the maximum of `tau tau'` lying in
//! `tau'` (kind II: the minimum of `tau tau'` lies in `tau'`).

use crate::qpoly::QPoly;

use super::perm::{des, inv, mono};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AndreKind {
    I,
    II,
}

impl std::str::FromStr for AndreKind {
    type Err = String;
    fn from_str(s: &str) -> Result<AndreKind, String> {
        match s {
            "I" | "i" | "1" => Ok(AndreKind::I),
            "II" | "ii" | "2" => Ok(AndreKind::II),
            _ => Err(format!("unknown André kind `{s}` (expected I or II)")),
        }
    }
}

fn flank_condition(kind: AndreKind, left: &[u32], right: &[u32]) -> bool {
    let all = left.iter().chain(right);
    match kind {
        AndreKind::I => match all.max() {
            None => true,
            Some(m) => right.contains(m),
        },
        AndreKind::II => match all.min() {
            None => true,
            Some(m) => right.contains(m),
        },
    }
}

/// Direct test of the recursive definition.
pub fn is_andre(w: &[u32], kind: AndreKind) -> bool {
    if w.len() <= 1 {
        return true;
    }
    let p = (0..w.len()).min_by_key(|&i| w[i]).unwrap();
    let (left, right) = (&w[..p], &w[p + 1..]);
    flank_condition(kind, left, right) && is_andre(left, kind) && is_andre(right, kind)
}

fn andre_on(set: &[u32], kind: AndreKind) -> Vec<Vec<u32>> {
    if set.is_empty() {
        return vec![vec![]];
    }
    let m = set[0];
    let rest = &set[1..];
    let mut out = Vec::new();
    for mask in 0u32..(1 << rest.len()) {
        let left: Vec<u32> = (0..rest.len()).filter(|&i| mask >> i & 1 == 1).map(|i| rest[i]).collect();
        let right: Vec<u32> = (0..rest.len()).filter(|&i| mask >> i & 1 == 0).map(|i| rest[i]).collect();
        if !flank_condition(kind, &left, &right) {
            continue;
        }
        let rs = andre_on(&right, kind);
        for l in andre_on(&left, kind) {
            for r in &rs {
                let mut w = l.clone();
                w.push(m);
                w.extend_from_slice(r);
                out.push(w);
            }
        }
    }
    out
}

/// All André permutations of `1..=n`, sorted lexicographically.
pub fn andre_perms(n: u32, kind: AndreKind) -> Vec<Vec<u32>> {
    let set: Vec<u32> = (1..=n).collect();
    let mut out = andre_on(&set, kind);
    out.sort();
    out
}

/// A binary tree with labelled nodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Tree {
    Empty,
    Node(u32, Box<Tree>, Box<Tree>),
}

impl Tree {
    pub fn node(label: u32, left: Tree, right: Tree) -> Tree {
        Tree::Node(label, Box::new(left), Box::new(right))
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Tree::Empty)
    }

    pub fn size(&self) -> usize {
        match self {
            Tree::Empty => 0,
            Tree::Node(_, l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn labels(&self) -> Vec<u32> {
        self.inorder()
    }

    /// Left subtree, node, right subtree.
    pub fn inorder(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.inorder_into(&mut out);
        out
    }

    fn inorder_into(&self, out: &mut Vec<u32>) {
        if let Tree::Node(v, l, r) = self {
            l.inorder_into(out);
            out.push(*v);
            r.inorder_into(out);
        }
    }

    pub fn min_label(&self) -> Option<u32> {
        self.labels().into_iter().min()
    }

    pub fn max_label(&self) -> Option<u32> {
        self.labels().into_iter().max()
    }

    /// Nodes without children.
    pub fn leaves(&self) -> u32 {
        match self {
            Tree::Empty => 0,
            Tree::Node(_, l, r) if l.is_empty() && r.is_empty() => 1,
            Tree::Node(_, l, r) => l.leaves() + r.leaves(),
        }
    }

    /// Nodes with exactly one child.
    pub fn single_child_nodes(&self) -> u32 {
        match self {
            Tree::Empty => 0,
            Tree::Node(_, l, r) => (l.is_empty() != r.is_empty()) as u32 + l.single_child_nodes() + r.single_child_nodes(),
        }
    }

    /// Every child label exceeds its parent's.
    pub fn is_increasing(&self) -> bool {
        match self {
            Tree::Empty => true,
            Tree::Node(v, l, r) => {
                let ok = |t: &Tree| match t {
                    Tree::Empty => true,
                    Tree::Node(c, _, _) => c > v && t.is_increasing(),
                };
                ok(l) && ok(r)
            }
        }
    }
}

/// All increasing binary trees on the labels in `set` (sorted ascending).
fn increasing_on(set: &[u32]) -> Vec<Tree> {
    if set.is_empty() {
        return vec![Tree::Empty];
    }
    let root = set[0];
    let rest = &set[1..];
    let mut out = Vec::new();
    for mask in 0u32..(1 << rest.len()) {
        let left: Vec<u32> = (0..rest.len()).filter(|&i| mask >> i & 1 == 1).map(|i| rest[i]).collect();
        let right: Vec<u32> = (0..rest.len()).filter(|&i| mask >> i & 1 == 0).map(|i| rest[i]).collect();
        let rs = increasing_on(&right);
        for l in increasing_on(&left) {
            for r in &rs {
                out.push(Tree::node(root, l.clone(), r.clone()));
            }
        }
    }
    out
}

/// All increasing binary trees on `1..=n`.
pub fn increasing_trees(n: u32) -> Vec<Tree> {
    let set: Vec<u32> = (1..=n).collect();
    increasing_on(&set)
}

/// Sibling condition at every node: for kind I the maximum of the left
/// subtree is below that of the right subtree (empty maximum 0); for kind II
/// the minimum of the left subtree is above that of the right subtree (empty
/// minimum infinite).
pub fn is_andre_tree(t: &Tree, kind: AndreKind) -> bool {
    match t {
        Tree::Empty => true,
        Tree::Node(_, l, r) => {
            let here = match kind {
                AndreKind::I => l.max_label().unwrap_or(0) < r.max_label().unwrap_or(0),
                AndreKind::II => l.min_label().unwrap_or(u32::MAX) > r.min_label().unwrap_or(u32::MAX),
            };
            let here = here || (l.is_empty() && r.is_empty());
            here && is_andre_tree(l, kind) && is_andre_tree(r, kind)
        }
    }
}

/// André trees on `1..=n`, found by filtering all increasing trees.
pub fn andre_trees(n: u32, kind: AndreKind) -> Vec<Tree> {
    increasing_trees(n).into_iter().filter(|t| is_andre_tree(t, kind)).collect()
}

/// Splits `w = sigma min tau` and builds the tree with root `min`, left
/// subtree from `sigma` and right subtree from `tau`.
pub fn perm_to_tree(w: &[u32]) -> Tree {
    if w.is_empty() {
        return Tree::Empty;
    }
    let p = (0..w.len()).min_by_key(|&i| w[i]).unwrap();
    Tree::node(w[p], perm_to_tree(&w[..p]), perm_to_tree(&w[p + 1..]))
}

/// Inversions read off the tree shape: pairs `i > j` where `j` lies to the
/// right of the root-to-`i` path, or lies on that path with its left child
/// also on it.
pub fn tree_inv(t: &Tree) -> u32 {
    fn walk(t: &Tree, pending: &mut Vec<Vec<u32>>, total: &mut u32) {
        if let Tree::Node(v, l, r) = t {
            for group in pending.iter() {
                *total += group.iter().filter(|&&k| k < *v).count() as u32;
            }
            // Entering the left subtree: this node and its right subtree come after.
            let mut after = vec![*v];
            after.extend(r.labels());
            pending.push(after);
            walk(l, pending, total);
            pending.pop();
            walk(r, pending, total);
        }
    }
    let mut total = 0;
    walk(t, &mut Vec::new(), &mut total);
    total
}

/// `sum over André trees on [n] of x^leaves y^(one-child nodes) q^inv`.
pub fn andre_tree_poly(n: u32, kind: AndreKind) -> QPoly {
    let mut out = QPoly::zero();
    for t in andre_trees(n, kind) {
        out.add_term(mono(&[("x", t.leaves()), ("y", t.single_child_nodes()), ("q", tree_inv(&t))]), 1.into());
    }
    out
}

/// `sum over André permutations of [n] of t^des q^inv` (padded descents).
pub fn andre_perm_poly(n: u32, kind: AndreKind) -> QPoly {
    let mut out = QPoly::zero();
    for w in andre_perms(n, kind) {
        out.add_term(mono(&[("t", des(&w)), ("q", inv(&w))]), 1.into());
    }
    out
}
