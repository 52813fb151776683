//! Permutation statistics, the cycle-to-word map, and the polynomials they
//! generate.
//!
//! Permutations are slices of the values `1..=n`. Ascents and descents use a
//! zero at both ends: `asc` counts `i in 0..n` with `s[i] < s[i+1]` and `des`
//! counts `i in 1..=n` with `s[i] > s[i+1]`, where `s[0] = s[n+1] = 0`. The
//! major index sums the unpadded descent positions `1..n-1`.

use itertools::Itertools;

use crate::qpoly::{Monomial, QPoly};
use crate::symbol::Symbol;

/// All permutations of `1..=n` in lexicographic order.
pub fn permutations(n: u32) -> impl Iterator<Item = Vec<u32>> {
    (1..=n).permutations(n as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PermStats {
    pub asc: u32,
    pub des: u32,
    pub maj: u32,
    pub inv: u32,
    pub exc: u32,
    pub drop: u32,
    pub fix: u32,
    /// Ascents whose upper entry is not isolated.
    pub iasc: u32,
    /// Entries alone in their block between bars.
    pub isol: u32,
    /// Right-to-left minima.
    pub rlmin: u32,
}

fn padded(s: &[u32]) -> Vec<u32> {
    let mut p = Vec::with_capacity(s.len() + 2);
    p.push(0);
    p.extend_from_slice(s);
    p.push(0);
    p
}

pub fn asc(s: &[u32]) -> u32 {
    let p = padded(s);
    (0..s.len()).filter(|&i| p[i] < p[i + 1]).count() as u32
}

pub fn des(s: &[u32]) -> u32 {
    let p = padded(s);
    (1..=s.len()).filter(|&i| p[i] > p[i + 1]).count() as u32
}

pub fn maj(s: &[u32]) -> u32 {
    (1..s.len()).filter(|&i| s[i - 1] > s[i]).map(|i| i as u32).sum()
}

pub fn inv(s: &[u32]) -> u32 {
    let mut c = 0;
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            if s[i] > s[j] {
                c += 1;
            }
        }
    }
    c
}

/// Positions `i` (0-based) holding a right-to-left minimum.
pub fn rl_minima(s: &[u32]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut min = u32::MAX;
    for i in (0..s.len()).rev() {
        if s[i] < min {
            min = s[i];
            out.push(i);
        }
    }
    out.reverse();
    out
}

/// Flags each position that is alone in its block. Bars sit at the start
/// and after every right-to-left minimum.
pub fn isolated(s: &[u32]) -> Vec<bool> {
    let mut flags = vec![false; s.len()];
    let mut start = 0;
    for end in rl_minima(s) {
        if end == start {
            flags[end] = true;
        }
        start = end + 1;
    }
    flags
}

pub fn perm_stats(s: &[u32]) -> PermStats {
    let p = padded(s);
    let iso = isolated(s);
    let iasc = (0..s.len()).filter(|&i| p[i] < p[i + 1] && !iso[i]).count() as u32;
    let pos = |i: usize| i as u32 + 1;
    PermStats {
        asc: asc(s),
        des: des(s),
        maj: maj(s),
        inv: inv(s),
        exc: (0..s.len()).filter(|&i| s[i] > pos(i)).count() as u32,
        drop: (0..s.len()).filter(|&i| s[i] < pos(i)).count() as u32,
        fix: (0..s.len()).filter(|&i| s[i] == pos(i)).count() as u32,
        iasc,
        isol: iso.iter().filter(|&&b| b).count() as u32,
        rlmin: rl_minima(s).len() as u32,
    }
}

/// Cycles of `s`, each listed from its smallest element's image and ending
/// with the smallest element, ordered by smallest element.
pub fn cycles(s: &[u32]) -> Vec<Vec<u32>> {
    let n = s.len();
    let mut seen = vec![false; n + 1];
    let mut out = Vec::new();
    for m in 1..=n as u32 {
        if seen[m as usize] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut k = s[m as usize - 1];
        seen[m as usize] = true;
        while k != m {
            seen[k as usize] = true;
            cyc.push(k);
            k = s[k as usize - 1];
        }
        cyc.push(m);
        out.push(cyc);
    }
    out
}

pub fn cycle_count(s: &[u32]) -> u32 {
    cycles(s).len() as u32
}

/// Writes every cycle with its smallest element last, orders cycles by
/// smallest element, and erases the parentheses.
pub fn psi(s: &[u32]) -> Vec<u32> {
    cycles(s).concat()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MahonianStat {
    Maj,
    Inv,
}

pub(crate) fn mono(pairs: &[(&str, u32)]) -> Monomial {
    Monomial::from_pairs(pairs.iter().map(|&(v, e)| (Symbol::new(v), e as i32)))
}

/// `sum over S_n of q^stat x^asc y^des`.
pub fn eulerian_poly(n: u32, stat: MahonianStat) -> QPoly {
    let mut out = QPoly::zero();
    for s in permutations(n) {
        let st = perm_stats(&s);
        let e = match stat {
            MahonianStat::Maj => st.maj,
            MahonianStat::Inv => st.inv,
        };
        out.add_term(mono(&[("q", e), ("x", st.asc), ("y", st.des)]), 1.into());
    }
    out
}

/// `sum over S_n of q^inv x^iasc z^isol y^(des-1) beta^rlmin`.
pub fn roselle_poly(n: u32) -> QPoly {
    let mut out = QPoly::zero();
    for s in permutations(n) {
        let st = perm_stats(&s);
        let m = mono(&[("q", st.inv), ("x", st.iasc), ("z", st.isol), ("y", st.des - 1), ("beta", st.rlmin)]);
        out.add_term(m, 1.into());
    }
    out
}
