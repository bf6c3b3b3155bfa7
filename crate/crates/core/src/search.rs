//! Bounded exhaustive search for groups with `f(G)` equal to a given rational.
//!
//! Every negative answer here is relative to the bounds searched.

use std::collections::VecDeque;
use std::fs;
use std::io::Write;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::aut::{aut_order, aut_order_local, f_exact};
use crate::error::{Error, Result};
use crate::group::AbelianGroup;
use crate::primes::{factorize, is_prime};
use crate::ratio::Ratio;

pub const DEFAULT_MAX_RANK: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_order: u64,
    /// Largest prime allowed to divide `|G|`.
    pub max_prime: u64,
    /// Largest number of cyclic summands per prime.
    pub max_rank_per_prime: u32,
}

impl SearchBounds {
    pub fn new(max_order: u64, max_prime: u64, max_rank_per_prime: u32) -> Result<Self> {
        if max_order == 0 || max_prime == 0 || max_rank_per_prime == 0 {
            return Err(Error::InvalidArgument("search bounds must be positive".into()));
        }
        Ok(SearchBounds {
            max_order,
            max_prime,
            max_rank_per_prime,
        })
    }

    /// Only the order is bounded (besides the default rank cap).
    pub fn with_max_order(max_order: u64) -> Result<Self> {
        Self::new(max_order, max_order.max(1), DEFAULT_MAX_RANK)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub group: AbelianGroup,
    pub f_value: Ratio,
}

/// Ascending partitions of `k` with at most `max_parts` parts.
pub fn partitions(k: u32, max_parts: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, min: u32, slots: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        if slots == 0 {
            return;
        }
        for part in min..=rest {
            // remaining parts are at least `part` each
            if part != rest && rest - part < part {
                continue;
            }
            cur.push(part);
            go(rest - part, part, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, 1, max_parts, &mut Vec::new(), &mut out);
    out
}

/// All groups of order exactly `n` within the bounds, sorted by literal.
fn groups_of_order(n: u64, bounds: &SearchBounds) -> Vec<AbelianGroup> {
    let fac = factorize(n);
    if fac.iter().any(|&(p, _)| p > bounds.max_prime) {
        return Vec::new();
    }
    let mut acc = vec![AbelianGroup::trivial()];
    for (p, k) in fac {
        let parts = partitions(k, bounds.max_rank_per_prime);
        let mut next = Vec::with_capacity(acc.len() * parts.len());
        for g in &acc {
            for part in &parts {
                let local = AbelianGroup::from_parts([(p, part.clone())]).expect("prime key");
                next.push(g.direct_product(&local));
            }
        }
        acc = next;
    }
    let mut keyed: Vec<(String, AbelianGroup)> = acc.into_iter().map(|g| (g.to_string(), g)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.into_iter().map(|(_, g)| g).collect()
}

/// Iterator over every group in the bounds, each isomorphism class once, in
/// nondecreasing order of `|G|` and then by canonical literal.
pub struct GroupEnumerator {
    bounds: SearchBounds,
    next_order: u64,
    pending: VecDeque<AbelianGroup>,
}

impl Iterator for GroupEnumerator {
    type Item = AbelianGroup;

    fn next(&mut self) -> Option<AbelianGroup> {
        while self.pending.is_empty() {
            if self.next_order > self.bounds.max_order {
                return None;
            }
            self.pending = groups_of_order(self.next_order, &self.bounds).into();
            self.next_order += 1;
        }
        self.pending.pop_front()
    }
}

pub fn enumerate_groups(bounds: &SearchBounds) -> GroupEnumerator {
    GroupEnumerator {
        bounds: *bounds,
        next_order: 1,
        pending: VecDeque::new(),
    }
}

/// One admissible p-part: `C_{p^{e_1}} ⊕ ...` with its order and exact f.
struct LocalOption {
    prime: u64,
    size: u64,
    partition: Vec<u32>,
    f: BigRational,
}

struct Searcher<'a> {
    bounds: &'a SearchBounds,
    primes: Vec<u64>,
    /// options per entry of `primes`
    options: Vec<Vec<LocalOption>>,
}

impl<'a> Searcher<'a> {
    fn new(bounds: &'a SearchBounds) -> Self {
        let cap = bounds.max_prime.min(bounds.max_order);
        let primes: Vec<u64> = (2..=cap).filter(|&n| is_prime(n)).collect();
        let options = primes
            .iter()
            .map(|&p| {
                let mut opts = Vec::new();
                let mut size = p;
                let mut k = 1;
                while size <= bounds.max_order {
                    for part in partitions(k, bounds.max_rank_per_prime) {
                        let aut = aut_order_local(p, &part).expect("valid partition");
                        opts.push(LocalOption {
                            prime: p,
                            size,
                            partition: part,
                            f: BigRational::new(aut.into(), BigInt::from(size)),
                        });
                    }
                    let Some(s) = size.checked_mul(p) else { break };
                    size = s;
                    k += 1;
                }
                opts
            })
            .collect();
        Searcher {
            bounds,
            primes,
            options,
        }
    }

    /// Can parts over `primes[from..]` of total order `<= budget` have product `q`?
    /// Only the denominator is checked: each local f has denominator `p^k`.
    fn feasible(&self, q: &BigRational, from: usize, budget: u64) -> bool {
        let Some(den) = q.denom().to_u64() else {
            return false;
        };
        if den > budget {
            return false;
        }
        let floor = if from == 0 { 1 } else { self.primes[from - 1] };
        factorize(den)
            .iter()
            .all(|&(p, _)| p > floor && p <= self.bounds.max_prime)
    }

    fn dfs(&self, from: usize, budget: u64, q: &BigRational, chosen: &mut Vec<(u64, Vec<u32>)>, out: &mut Vec<AbelianGroup>) {
        if q.is_one() {
            out.push(AbelianGroup::from_parts(chosen.iter().cloned()).expect("valid parts"));
        }
        for j in from..self.primes.len() {
            if self.primes[j] > budget {
                break;
            }
            for opt in &self.options[j] {
                if opt.size > budget {
                    break;
                }
                let next = q / &opt.f;
                let rest = budget / opt.size;
                if !self.feasible(&next, j + 1, rest) {
                    continue;
                }
                chosen.push((opt.prime, opt.partition.clone()));
                self.dfs(j + 1, rest, &next, chosen, out);
                chosen.pop();
            }
        }
    }
}

fn sort_witnesses(groups: Vec<AbelianGroup>) -> Vec<Witness> {
    let mut keyed: Vec<(BigInt, String, AbelianGroup)> = groups
        .into_iter()
        .map(|g| (BigInt::from(g.order()), g.to_string(), g))
        .collect();
    keyed.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    keyed
        .into_iter()
        .map(|(_, _, group)| Witness {
            f_value: f_exact(&group),
            group,
        })
        .collect()
}

/// Every group within `bounds` with `f(G) = a` exactly.
pub fn find_exact(a: &Ratio, bounds: &SearchBounds) -> Vec<Witness> {
    if a.is_zero() {
        return Vec::new();
    }
    let searcher = Searcher::new(bounds);
    let q = a.as_big_rational().clone();
    let mut found = Vec::new();
    if q.is_one() {
        found.push(AbelianGroup::trivial());
    }
    // first-level choices are independent subtrees
    let roots: Vec<(usize, usize)> = searcher
        .options
        .iter()
        .enumerate()
        .flat_map(|(j, opts)| (0..opts.len()).map(move |k| (j, k)))
        .collect();
    let mut sub: Vec<AbelianGroup> = roots
        .par_iter()
        .flat_map_iter(|&(j, k)| {
            let opt = &searcher.options[j][k];
            let mut out = Vec::new();
            if opt.size <= bounds.max_order {
                let next = &q / &opt.f;
                let rest = bounds.max_order / opt.size;
                if searcher.feasible(&next, j + 1, rest) {
                    let mut chosen = vec![(opt.prime, opt.partition.clone())];
                    searcher.dfs(j + 1, rest, &next, &mut chosen, &mut out);
                }
            }
            out
        })
        .collect();
    found.append(&mut sub);
    sort_witnesses(found)
}

/// Reference search: enumerate every group and compare.
pub fn find_exact_unpruned(a: &Ratio, bounds: &SearchBounds) -> Vec<Witness> {
    let hits: Vec<AbelianGroup> = enumerate_groups(bounds)
        .filter(|g| f_exact(g) == *a)
        .collect();
    sort_witnesses(hits)
}

pub fn f_table_header(bounds: &SearchBounds) -> String {
    format!("# autratio f-table v1 max_order={}", bounds.max_order)
}

/// The f-table as text: header line, then one tab-separated row per group.
pub fn render_f_table(bounds: &SearchBounds) -> (String, usize) {
    let groups: Vec<AbelianGroup> = enumerate_groups(bounds).collect();
    let rows: Vec<String> = groups
        .par_iter()
        .map(|g| {
            let f = f_exact(g);
            format!("{}\t{}\t{}\t{}\n", g, g.order(), aut_order(g), f.to_fraction_string())
        })
        .collect();
    let mut text = f_table_header(bounds);
    text.push('\n');
    for row in &rows {
        text.push_str(row);
    }
    (text, rows.len())
}

/// Writes the f-table to `path` (via a sibling temp file and rename) and
/// returns the number of rows.
pub fn build_f_table(bounds: &SearchBounds, path: &Path) -> Result<usize> {
    let (text, rows) = render_f_table(bounds);
    let mut tmp_name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(text.as_bytes())?;
        file.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(rows)
}

/// Number of abelian groups of order `n`: `∏ P(k_i)` over `n = ∏ p_i^{k_i}`.
pub fn abelian_group_count(n: u64, max_rank: u32) -> u64 {
    factorize(n)
        .into_iter()
        .map(|(_, k)| partitions(k, max_rank).len() as u64)
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lits(ws: &[Witness]) -> Vec<String> {
        ws.iter().map(|w| w.group.to_string()).collect()
    }

    #[test]
    fn partitions_small() {
        assert_eq!(partitions(4, 8), vec![vec![1, 1, 1, 1], vec![1, 1, 2], vec![1, 3], vec![2, 2], vec![4]]);
        assert_eq!(partitions(4, 2).len(), 3);
        assert_eq!(partitions(0, 3), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn enumerate_examples() {
        let one: Vec<_> = enumerate_groups(&SearchBounds::with_max_order(1).unwrap()).collect();
        assert_eq!(one, vec![AbelianGroup::trivial()]);
        let eight: Vec<_> = enumerate_groups(&SearchBounds::with_max_order(8).unwrap()).collect();
        assert_eq!(eight.len(), 11);
        let b16 = SearchBounds::new(16, 16, 4).unwrap();
        let n16 = enumerate_groups(&b16).filter(|g| g.order_u64() == Some(16)).count();
        assert_eq!(n16, 5);
    }

    #[test]
    fn enumeration_respects_prime_and_rank_bounds() {
        let b = SearchBounds::new(64, 3, 2).unwrap();
        for g in enumerate_groups(&b) {
            assert!(g.factors().keys().all(|&p| p <= 3));
            assert!(g.factors().values().all(|e| e.len() <= 2));
        }
    }

    #[test]
    fn find_exact_examples() {
        let b = SearchBounds::with_max_order(8).unwrap();
        let ones = lits(&find_exact(&Ratio::one(), &b));
        assert!(ones.contains(&"C1".to_string()) && ones.contains(&"C2 x C4".to_string()));
        let halves = lits(&find_exact(&"1/2".parse().unwrap(), &b));
        assert_eq!(halves, vec!["C2", "C4", "C8"]);
        let t = lits(&find_exact(&"21".parse().unwrap(), &b));
        assert!(t.contains(&"C2 x C2 x C2".to_string()));
        assert!(find_exact(&"5".parse().unwrap(), &SearchBounds::with_max_order(4).unwrap()).is_empty());
        assert!(find_exact(&Ratio::zero(), &b).is_empty());
    }

    #[test]
    fn table_examples() {
        let (text, rows) = render_f_table(&SearchBounds::with_max_order(2).unwrap());
        assert_eq!(rows, 2);
        assert_eq!(text, "# autratio f-table v1 max_order=2\nC1\t1\t1\t1/1\nC2\t2\t1\t1/2\n");
        let (text, rows) = render_f_table(&SearchBounds::with_max_order(4).unwrap());
        assert_eq!(rows, 5);
        assert!(text.contains("C4\t4\t2\t1/2\n"));
        assert!(text.contains("C2 x C2\t4\t6\t3/2\n"));
    }

    #[test]
    fn table_file_is_idempotent() {
        let dir = std::env::temp_dir().join(format!("autratio-search-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("t.tsv");
        let b = SearchBounds::with_max_order(30).unwrap();
        assert_eq!(build_f_table(&b, &path).unwrap(), build_f_table(&b, &path).unwrap());
        let (text, _) = render_f_table(&b);
        assert_eq!(fs::read_to_string(&path).unwrap(), text);
        fs::remove_dir_all(&dir).ok();
    }
}
