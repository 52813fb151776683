//! Brute-force combinatorial enumerations used as independent references for
//! the grammar computations.

pub mod andre;
pub mod perm;
pub mod sequences;

pub use andre::{
    andre_perm_poly, andre_perms, andre_tree_poly, andre_trees, increasing_trees, is_andre, is_andre_tree,
    perm_to_tree, tree_inv, AndreKind, Tree,
};
pub use perm::{eulerian_poly, perm_stats, permutations, psi, roselle_poly, MahonianStat, PermStats};
