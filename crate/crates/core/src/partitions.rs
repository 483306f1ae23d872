//! Partitions, r-tuples of partitions and the combinatorics built on them.
//!
//! Boxes are addressed 1-based as `(row, col)`. Arms and legs are measured
//! against an arbitrary diagram, so they may be negative for boxes outside it.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::exactmath::{rat, Rat};

/// A Young diagram, stored as its weakly decreasing list of positive parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

/// A box `(row, col)`, 1-based. Need not lie inside any particular diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BoxCoord {
    pub row: u32,
    pub col: u32,
}

impl BoxCoord {
    pub fn new(row: u32, col: u32) -> Self {
        assert!(row >= 1 && col >= 1, "box coordinates are 1-based");
        BoxCoord { row, col }
    }
}

impl Partition {
    /// Builds a partition from any multiset of parts: zeros are dropped and the
    /// parts are sorted into decreasing order.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The `i`-th part (1-based), zero beyond the length.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.part(1);
        Partition(
            (1..=first)
                .map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32)
                .collect(),
        )
    }

    pub fn boxes(&self) -> impl Iterator<Item = BoxCoord> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (1..=p).map(move |j| BoxCoord::new(i as u32 + 1, j)))
    }

    pub fn contains_box(&self, s: BoxCoord) -> bool {
        self.part(s.row as usize) >= s.col
    }

    /// `self ⊇ other` as diagrams.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    pub fn arm(&self, s: BoxCoord) -> i64 {
        self.part(s.row as usize) as i64 - s.col as i64
    }

    pub fn leg(&self, s: BoxCoord) -> i64 {
        self.conjugate().part(s.col as usize) as i64 - s.row as i64
    }

    pub fn hook_product(&self) -> u64 {
        let conj = self.conjugate();
        self.boxes()
            .map(|s| {
                let arm = self.part(s.row as usize) - s.col;
                let leg = conj.part(s.col as usize) - s.row;
                (arm + leg + 1) as u64
            })
            .product()
    }

    /// Multiplicity of the part `k`.
    pub fn multiplicity(&self, k: u32) -> usize {
        self.0.iter().filter(|&&p| p == k).count()
    }

    /// `z_λ = Π_i i^{m_i} m_i!`, the centralizer order of a permutation of cycle type λ.
    pub fn z_factor(&self) -> BigInt {
        let mut z = BigInt::one();
        let mut i = 0;
        while i < self.0.len() {
            let p = self.0[i];
            let mut m = 0u32;
            while i < self.0.len() && self.0[i] == p {
                m += 1;
                i += 1;
                z *= BigInt::from(p) * BigInt::from(m);
            }
        }
        z
    }

    /// Adds the part `k` (the power-sum monomial `p_λ · p_k`).
    pub fn with_part(&self, k: u32) -> Partition {
        let mut parts = self.0.clone();
        let pos = parts.iter().position(|&p| p < k).unwrap_or(parts.len());
        parts.insert(pos, k);
        Partition(parts)
    }

    /// Removes one copy of the part `k`, if present.
    pub fn without_part(&self, k: u32) -> Option<Partition> {
        let pos = self.0.iter().position(|&p| p == k)?;
        let mut parts = self.0.clone();
        parts.remove(pos);
        Some(Partition(parts))
    }

    /// Splits into (parts satisfying `pred`, remaining parts).
    pub fn split_by(&self, pred: impl Fn(u32) -> bool) -> (Partition, Partition) {
        let (a, b): (Vec<u32>, Vec<u32>) = self.0.iter().partition(|&&p| pred(p));
        (Partition(a), Partition(b))
    }

    /// Union of two multisets of parts.
    pub fn merge(&self, other: &Partition) -> Partition {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        Partition::new(parts)
    }

    /// The first `len` entries `μ_i − i + 1 + charge` of the beta-set (Maya diagram).
    pub fn beta_set(&self, len: usize, charge: i64) -> Vec<i64> {
        (1..=len)
            .map(|i| self.part(i) as i64 - i as i64 + 1 + charge)
            .collect()
    }

    /// Inverse of [`Partition::beta_set`]: reads parts off a decreasing
    /// sequence whose tail is already in the Dirac sea.
    pub fn from_beta_set(beta: &[i64], charge: i64) -> Partition {
        let mut sorted = beta.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let parts = sorted
            .iter()
            .enumerate()
            .map(|(i, &b)| b + i as i64 - charge)
            .inspect(|&p| debug_assert!(p >= 0, "beta-set not decreasing"))
            .filter(|&p| p > 0)
            .map(|p| p as u32)
            .collect();
        Partition(parts)
    }

    /// All partitions of `n` in reverse lexicographic order (`[n]` first).
    pub fn all_of_size(n: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fill_partitions(n, n, &mut cur, &mut out, &|_| true);
        out
    }

    /// Partitions of `n` whose parts all satisfy `allowed`.
    pub fn all_of_size_with(n: u32, allowed: impl Fn(u32) -> bool) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fill_partitions(n, n, &mut cur, &mut out, &allowed);
        out
    }

    /// Staircase `[2k, 2k−1, …, 1]` for `k ≥ 0`, `[−2k−1, …, 1]` for `k < 0`:
    /// the 2-cores, i.e. the blends of two empty partitions with charges `(k, −k)`.
    pub fn staircase(k: i64) -> Partition {
        let top = if k >= 0 { 2 * k } else { -2 * k - 1 };
        Partition((1..=top as u32).rev().collect())
    }
}

fn fill_partitions(
    n: u32,
    max: u32,
    cur: &mut Vec<u32>,
    out: &mut Vec<Partition>,
    allowed: &dyn Fn(u32) -> bool,
) {
    if n == 0 {
        out.push(Partition(cur.clone()));
        return;
    }
    for k in (1..=n.min(max)).rev() {
        if !allowed(k) {
            continue;
        }
        cur.push(k);
        fill_partitions(n - k, k, cur, out, allowed);
        cur.pop();
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl From<&[u32]> for Partition {
    fn from(parts: &[u32]) -> Self {
        Partition::new(parts.to_vec())
    }
}

impl<const N: usize> From<[u32; N]> for Partition {
    fn from(parts: [u32; N]) -> Self {
        Partition::new(parts.to_vec())
    }
}

/// `(a_μ(s), l_ν(s))`: arm of `s` in `μ` and leg of `s` in `ν`, possibly negative.
pub fn arm_leg(mu: &Partition, nu: &Partition, s: BoxCoord) -> (i64, i64) {
    (mu.arm(s), nu.leg(s))
}

/// An ordered r-tuple of partitions, a torus fixed point of the rank-r moduli space.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RTuple(Vec<Partition>);

impl RTuple {
    pub fn new(entries: Vec<Partition>) -> Self {
        assert!(!entries.is_empty(), "an r-tuple needs r ≥ 1");
        RTuple(entries)
    }

    pub fn empty(r: usize) -> Self {
        RTuple::new(vec![Partition::empty(); r])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Partition] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().map(Partition::size).sum()
    }

    /// All r-tuples of total size `n`.
    ///
    /// Ordered by the size vector `(|μ^(1)|, …, |μ^(r)|)` with larger leading
    /// sizes first, then by the parts of each entry in reverse lexicographic order.
    pub fn enumerate(n: u32, r: usize) -> Vec<RTuple> {
        assert!(r >= 1);
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(r);
        fill_tuples(n, r, &mut cur, &mut out);
        out
    }
}

fn fill_tuples(n: u32, r: usize, cur: &mut Vec<Partition>, out: &mut Vec<RTuple>) {
    if r == 1 {
        for p in Partition::all_of_size(n) {
            cur.push(p);
            out.push(RTuple(cur.clone()));
            cur.pop();
        }
        return;
    }
    for a in (0..=n).rev() {
        for p in Partition::all_of_size(a) {
            cur.push(p);
            fill_tuples(n - a, r - 1, cur, out);
            cur.pop();
        }
    }
}

impl fmt::Display for RTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Integer charges `(k_1, …, k_r)` attached to an r-tuple.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChargeVector(pub Vec<i64>);

impl ChargeVector {
    pub fn new(charges: Vec<i64>) -> Self {
        ChargeVector(charges)
    }

    pub fn zero(r: usize) -> Self {
        ChargeVector(vec![0; r])
    }

    /// `(k, −k)`.
    pub fn balanced(k: i64) -> Self {
        ChargeVector(vec![k, -k])
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

impl fmt::Display for ChargeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Explicit beta-set length used for each entry when blending.
///
/// Entry `j` contributes `r(β − i + 1 + k_j) − j + 1` for `i = 1..L`; everything
/// above the largest of the `r` truncation points is then exact. With
/// `L = max ℓ(μ^(j)) + 2·max |k_j| + 3` the exact window reaches into the Dirac
/// sea of the blended set, which [`blend_with_len`] asserts.
pub fn blend_truncation(mus: &RTuple, charges: &ChargeVector) -> usize {
    let max_len = mus.entries().iter().map(Partition::len).max().unwrap_or(0);
    let max_k = charges.0.iter().map(|k| k.unsigned_abs() as usize).max().unwrap_or(0);
    max_len + 2 * max_k + 3
}

/// The blended partition `(μ, k)` of an r-tuple with charges.
pub fn blend(mus: &RTuple, charges: &ChargeVector) -> (Partition, i64) {
    blend_with_len(mus, charges, blend_truncation(mus, charges))
}

/// [`blend`] with an explicit beta-set truncation length (must be at least
/// [`blend_truncation`]).
pub fn blend_with_len(mus: &RTuple, charges: &ChargeVector, len: usize) -> (Partition, i64) {
    let r = mus.rank() as i64;
    assert_eq!(mus.rank(), charges.rank(), "tuple and charges differ in rank");
    assert!(len >= blend_truncation(mus, charges), "beta-set truncation too short");
    let k = charges.total();
    let mut merged = Vec::new();
    let mut floor = i64::MIN;
    for (j, (mu, &kj)) in mus.entries().iter().zip(charges.as_slice()).enumerate() {
        let j = j as i64 + 1;
        let entries: Vec<i64> = mu.beta_set(len, kj).into_iter().map(|b| r * b - j + 1).collect();
        floor = floor.max(*entries.last().unwrap());
        merged.extend(entries);
    }
    merged.retain(|&b| b > floor);
    merged.sort_unstable_by(|a, b| b.cmp(a));
    let last = merged.len() as i64 - 1;
    assert_eq!(
        merged[last as usize] + last - k,
        0,
        "beta-set window does not reach the Dirac sea"
    );
    (Partition::from_beta_set(&merged, k), k)
}

/// Inverse of [`blend`]: splits the beta-set of `(μ, k)` by residue mod `r`.
pub fn unblend(mu: &Partition, k: i64, r: usize) -> (RTuple, ChargeVector) {
    assert!(r >= 1);
    let ri = r as i64;
    // Every class has at least one sea element in [k − ℓ − 2r, k − ℓ].
    let len = mu.len() + 2 * r + 1;
    let beta = mu.beta_set(len, k);
    let mut classes: Vec<Vec<i64>> = vec![Vec::new(); r];
    for b in beta {
        let j = (-b).rem_euclid(ri) as usize; // j − 1
        classes[j].push((b + j as i64) / ri);
    }
    let mut entries = Vec::with_capacity(r);
    let mut charges = Vec::with_capacity(r);
    for class in classes {
        let n = class.len() as i64;
        let charge = class.last().unwrap() + n - 1;
        entries.push(Partition::from_beta_set(&class, charge));
        charges.push(charge);
    }
    debug_assert_eq!(charges.iter().sum::<i64>(), k);
    (RTuple::new(entries), ChargeVector(charges))
}

/// `d_k = (r−1)/2 Σ k_i² + Σ (r+1−2i)/2 k_i − Σ_{i<j} k_i k_j`, so that
/// `|blend(μ, k)| = r|μ| + d_k`.
pub fn blend_norm(charges: &ChargeVector) -> Rat {
    let r = charges.rank() as i64;
    let ks = charges.as_slice();
    let sq: i64 = ks.iter().map(|k| k * k).sum();
    let lin: i64 = ks
        .iter()
        .enumerate()
        .map(|(i, k)| (r + 1 - 2 * (i as i64 + 1)) * k)
        .sum();
    let mut cross = 0i64;
    for i in 0..ks.len() {
        for j in i + 1..ks.len() {
            cross += ks[i] * ks[j];
        }
    }
    rat(r - 1, 2) * rat(sq, 1) + rat(lin, 2) - rat(cross, 1)
}

/// Maya set of a partition (charge 0) with `len` explicit entries, as a sorted set.
fn maya(mu: &Partition, len: usize) -> BTreeSet<i64> {
    mu.beta_set(len, 0).into_iter().collect()
}

fn from_maya(set: &BTreeSet<i64>) -> Partition {
    let v: Vec<i64> = set.iter().rev().copied().collect();
    Partition::from_beta_set(&v, 0)
}

/// All `λ ⊇ μ` with `λ/μ` a border strip of `n` boxes, with height = rows − 1.
pub fn border_strips(mu: &Partition, n: u32) -> Vec<(Partition, u32)> {
    assert!(n >= 1);
    let n = n as i64;
    let set = maya(mu, mu.len() + n as usize + 1);
    let mut out = Vec::new();
    for &j in &set {
        if set.contains(&(j + n)) {
            continue;
        }
        let height = set.range(j + 1..j + n).count() as u32;
        let mut moved = set.clone();
        moved.remove(&j);
        moved.insert(j + n);
        out.push((from_maya(&moved), height));
    }
    out.sort();
    out
}

/// All `ν ⊆ λ` with `λ/ν` a border strip of `n` boxes, with height.
pub fn removable_strips(lambda: &Partition, n: u32) -> Vec<(Partition, u32)> {
    assert!(n >= 1);
    let n = n as i64;
    let set = maya(lambda, lambda.len() + n as usize + 1);
    let lowest = *set.iter().next().unwrap();
    let mut out = Vec::new();
    for &j in &set {
        let target = j - n;
        if target < lowest || set.contains(&target) {
            continue;
        }
        let height = set.range(target + 1..j).count() as u32;
        let mut moved = set.clone();
        moved.remove(&j);
        moved.insert(target);
        out.push((from_maya(&moved), height));
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn arm_leg_examples() {
        assert_eq!(arm_leg(&p(&[1, 1]), &p(&[2, 1]), BoxCoord::new(1, 1)), (0, 1));
        assert_eq!(arm_leg(&p(&[]), &p(&[]), BoxCoord::new(1, 1)), (-1, -1));
        assert_eq!(arm_leg(&p(&[2, 1]), &p(&[2, 1]), BoxCoord::new(1, 1)), (1, 1));
    }

    #[test]
    fn hook_products() {
        assert_eq!(p(&[]).hook_product(), 1);
        assert_eq!(p(&[1, 1]).hook_product(), 2);
        assert_eq!(p(&[2, 1]).hook_product(), 3);
        assert_eq!(p(&[3, 2]).hook_product(), 24);
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(RTuple::enumerate(0, 2), vec![RTuple::empty(2)]);
        assert_eq!(RTuple::enumerate(1, 1), vec![RTuple::new(vec![p(&[1])])]);
        let two = RTuple::enumerate(2, 2);
        let expected: Vec<RTuple> = [
            [&[2][..], &[][..]],
            [&[1, 1], &[]],
            [&[1], &[1]],
            [&[], &[2]],
            [&[], &[1, 1]],
        ]
        .iter()
        .map(|[a, b]| RTuple::new(vec![p(a), p(b)]))
        .collect();
        assert_eq!(two, expected);
    }

    #[test]
    fn tuple_counts_match_convolution() {
        let pn: Vec<usize> = (0..=6).map(|n| Partition::all_of_size(n).len()).collect();
        assert_eq!(pn, vec![1, 1, 2, 3, 5, 7, 11]);
        for n in 0..=6u32 {
            let conv: usize = (0..=n as usize).map(|a| pn[a] * pn[n as usize - a]).sum();
            assert_eq!(RTuple::enumerate(n, 2).len(), conv);
        }
    }

    #[test]
    fn border_strip_examples() {
        assert_eq!(border_strips(&p(&[]), 1), vec![(p(&[1]), 0)]);
        let mut two = border_strips(&p(&[]), 2);
        two.sort();
        let mut expected = vec![(p(&[2]), 0), (p(&[1, 1]), 1)];
        expected.sort();
        assert_eq!(two, expected);
    }

    /// Skew shape λ/μ is a border strip: connected and without 2×2 squares.
    fn is_border_strip(lambda: &Partition, mu: &Partition) -> Option<u32> {
        if !lambda.contains(mu) || lambda.size() == mu.size() {
            return None;
        }
        let cells: Vec<BoxCoord> = lambda.boxes().filter(|&s| !mu.contains_box(s)).collect();
        let inside = |r: u32, c: u32| r >= 1 && c >= 1 && lambda.contains_box(BoxCoord::new(r, c)) && !mu.contains_box(BoxCoord::new(r, c));
        for s in &cells {
            if inside(s.row + 1, s.col) && inside(s.row, s.col + 1) && inside(s.row + 1, s.col + 1) {
                return None;
            }
        }
        let mut seen = vec![cells[0]];
        let mut stack = vec![cells[0]];
        while let Some(s) = stack.pop() {
            for t in &cells {
                let adjacent = (t.row == s.row && t.col.abs_diff(s.col) == 1)
                    || (t.col == s.col && t.row.abs_diff(s.row) == 1);
                if adjacent && !seen.contains(t) {
                    seen.push(*t);
                    stack.push(*t);
                }
            }
        }
        if seen.len() != cells.len() {
            return None;
        }
        let rows: BTreeSet<u32> = cells.iter().map(|s| s.row).collect();
        Some(rows.len() as u32 - 1)
    }

    #[test]
    fn border_strips_match_skew_shape_oracle() {
        for size in 0..=6u32 {
            for mu in Partition::all_of_size(size) {
                for n in 1..=4u32 {
                    let mut oracle: Vec<(Partition, u32)> = Partition::all_of_size(size + n)
                        .into_iter()
                        .filter_map(|l| is_border_strip(&l, &mu).map(|h| (l, h)))
                        .collect();
                    oracle.sort();
                    assert_eq!(border_strips(&mu, n), oracle, "adding {n} to {mu}");

                    if size >= n {
                        let mut removal: Vec<(Partition, u32)> = Partition::all_of_size(size - n)
                            .into_iter()
                            .filter_map(|nu| is_border_strip(&mu, &nu).map(|h| (nu, h)))
                            .collect();
                        removal.sort();
                        assert_eq!(removable_strips(&mu, n), removal, "removing {n} from {mu}");
                    }
                }
            }
        }
    }

    #[test]
    fn single_box_strips_are_addable_corners() {
        for size in 0..=8 {
            for mu in Partition::all_of_size(size) {
                let strips = border_strips(&mu, 1);
                let corners = (1..=mu.len() + 1)
                    .filter(|&i| i == 1 || mu.part(i) < mu.part(i - 1))
                    .count();
                assert_eq!(strips.len(), corners);
                assert!(strips.iter().all(|(l, h)| *h == 0 && l.contains(&mu)));
            }
        }
    }

    #[test]
    fn size_and_conjugation() {
        for size in 0..=8 {
            for mu in Partition::all_of_size(size) {
                assert_eq!(mu.boxes().count() as u32, mu.size());
                assert_eq!(mu.conjugate().conjugate(), mu);
                assert_eq!(mu.conjugate().size(), mu.size());
            }
        }
    }

    #[test]
    fn blend_staircases() {
        for k in 0..=3 {
            let (mu, charge) = blend(&RTuple::empty(2), &ChargeVector::balanced(k));
            assert_eq!(charge, 0);
            assert_eq!(mu, Partition::staircase(k));
            let expected: Vec<u32> = (1..=2 * k as u32).rev().collect();
            assert_eq!(mu.parts(), &expected[..]);
        }
        assert_eq!(blend(&RTuple::empty(2), &ChargeVector::zero(2)), (Partition::empty(), 0));
        assert_eq!(blend(&RTuple::empty(2), &ChargeVector::balanced(-1)), (p(&[1]), 0));
        assert_eq!(Partition::staircase(-2), p(&[3, 2, 1]));
    }

    #[test]
    fn unblend_examples() {
        assert_eq!(unblend(&p(&[]), 0, 2), (RTuple::empty(2), ChargeVector::zero(2)));
        assert_eq!(unblend(&p(&[1]), 0, 2), (RTuple::empty(2), ChargeVector::balanced(-1)));
        let (t, k) = unblend(&p(&[2, 1]), 0, 2);
        assert_eq!(blend(&t, &k), (p(&[2, 1]), 0));
    }

    #[test]
    fn unblend_round_trips_all_small_partitions() {
        for r in 2..=3 {
            for size in 0..=6 {
                for mu in Partition::all_of_size(size) {
                    for k in -1..=1 {
                        let (t, ks) = unblend(&mu, k, r);
                        assert_eq!(ks.total(), k);
                        assert_eq!(blend(&t, &ks), (mu.clone(), k));
                    }
                }
            }
        }
    }

    fn charge_vectors(r: usize, bound: i64) -> Vec<ChargeVector> {
        let mut out = vec![vec![]];
        for _ in 0..r {
            out = out
                .into_iter()
                .flat_map(|v: Vec<i64>| {
                    (-bound..=bound).map(move |k| {
                        let mut w = v.clone();
                        w.push(k);
                        w
                    })
                })
                .collect();
        }
        out.into_iter().map(ChargeVector).collect()
    }

    #[test]
    fn blend_is_bijective_and_norm_matches() {
        for r in 2..=3usize {
            for size in 0..=4 {
                for t in RTuple::enumerate(size, r) {
                    for ks in charge_vectors(r, 2) {
                        let (mu, k) = blend(&t, &ks);
                        assert_eq!(unblend(&mu, k, r), (t.clone(), ks.clone()));
                        let expected = rat(r as i64 * size as i64, 1) + blend_norm(&ks);
                        assert_eq!(rat(mu.size() as i64, 1), expected, "{t} {ks}");
                        let longer = blend_with_len(&t, &ks, blend_truncation(&t, &ks) + 7);
                        assert_eq!(longer, (mu, k));
                    }
                }
            }
        }
    }

    #[test]
    fn blend_norm_examples() {
        assert_eq!(blend_norm(&ChargeVector::zero(3)), rat(0, 1));
        for k in -3..=3 {
            assert_eq!(blend_norm(&ChargeVector::balanced(k)), rat(2 * k * k + k, 1));
        }
        assert_eq!(blend_norm(&ChargeVector::balanced(1)), rat(3, 1));
    }

    #[test]
    fn z_factor_values() {
        assert_eq!(p(&[1, 1]).z_factor(), BigInt::from(2));
        assert_eq!(p(&[2, 1]).z_factor(), BigInt::from(2));
        assert_eq!(p(&[2, 2, 1]).z_factor(), BigInt::from(8));
        assert_eq!(p(&[]).z_factor(), BigInt::from(1));
    }
}
