//! Brute-force `|Aut(G)|` for small groups, independent of the closed form.
//!
//! Write `G = ⊕_i C_{m_i}` with canonical generators `g_i`. An assignment
//! `g_i ↦ h_i` extends to an endomorphism iff `ord(h_i) | m_i`, and an
//! endomorphism of a finite group is an automorphism iff it is onto. The
//! search enumerates image tuples and counts those whose images generate `G`,
//! computing generated subgroups by closure.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::config::OracleCaps;
use crate::error::{Error, Result};
use crate::group::AbelianGroup;

struct Table {
    order: usize,
    /// `add[x * order + y]`
    add: Vec<u32>,
    /// per generator, the admissible images
    candidates: Vec<Vec<u32>>,
    /// `suffix[i] = ∏_{j >= i} m_j`, saturating
    suffix: Vec<usize>,
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Table {
    fn build(moduli: &[usize]) -> Table {
        let order: usize = moduli.iter().product();
        let decode = |mut x: usize| -> Vec<usize> {
            moduli
                .iter()
                .map(|&m| {
                    let c = x % m;
                    x /= m;
                    c
                })
                .collect()
        };
        let encode = |coords: &[usize]| -> usize {
            coords
                .iter()
                .zip(moduli)
                .rev()
                .fold(0, |acc, (&c, &m)| acc * m + c)
        };
        let coords: Vec<Vec<usize>> = (0..order).map(decode).collect();
        let mut add = vec![0u32; order * order];
        for x in 0..order {
            for y in 0..order {
                let sum: Vec<usize> = coords[x]
                    .iter()
                    .zip(&coords[y])
                    .zip(moduli)
                    .map(|((a, b), m)| (a + b) % m)
                    .collect();
                add[x * order + y] = encode(&sum) as u32;
            }
        }
        let elem_order: Vec<usize> = coords
            .iter()
            .map(|c| {
                c.iter().zip(moduli).fold(1, |l, (&a, &m)| {
                    let o = m / gcd(a, m);
                    l / gcd(l, o) * o
                })
            })
            .collect();
        let candidates = moduli
            .iter()
            .map(|&m| {
                (0..order)
                    .filter(|&x| m % elem_order[x] == 0)
                    .map(|x| x as u32)
                    .collect()
            })
            .collect();
        let mut suffix = vec![1usize; moduli.len() + 1];
        for i in (0..moduli.len()).rev() {
            suffix[i] = suffix[i + 1].saturating_mul(moduli[i]);
        }
        Table {
            order,
            add,
            candidates,
            suffix,
        }
    }

    fn add(&self, x: u32, y: u32) -> u32 {
        self.add[x as usize * self.order + y as usize]
    }
}

/// Scratch space for one level of the search.
#[derive(Clone)]
struct Level {
    members: Vec<u32>,
    marked: Vec<bool>,
}

impl Level {
    fn new(order: usize) -> Self {
        Level {
            members: Vec::with_capacity(order),
            marked: vec![false; order],
        }
    }

    fn reset_to_zero(&mut self) {
        for &m in &self.members {
            self.marked[m as usize] = false;
        }
        self.members.clear();
        self.members.push(0);
        self.marked[0] = true;
    }
}

/// `<H, h>` written into `out`, as the union of cosets `H + k·h`.
fn span(t: &Table, h_set: &Level, h: u32, out: &mut Level) {
    for &m in &out.members {
        out.marked[m as usize] = false;
    }
    out.members.clear();
    out.members.extend_from_slice(&h_set.members);
    for &m in &h_set.members {
        out.marked[m as usize] = true;
    }
    let mut shift = h;
    while !h_set.marked[shift as usize] {
        for &x in &h_set.members {
            let y = t.add(x, shift);
            out.marked[y as usize] = true;
            out.members.push(y);
        }
        shift = t.add(shift, h);
    }
}

/// `levels[0]` holds the subgroup generated by the images chosen so far.
fn count_from(t: &Table, depth: usize, levels: &mut [Level]) -> u64 {
    let rank = t.candidates.len();
    if depth == rank {
        return u64::from(levels[0].members.len() == t.order);
    }
    let (head, tail) = levels.split_at_mut(1);
    let current = &head[0];
    let mut total = 0;
    for &h in &t.candidates[depth] {
        span(t, current, h, &mut tail[0]);
        // remaining generators can multiply the size by at most suffix[depth+1]
        if tail[0].members.len().saturating_mul(t.suffix[depth + 1]) < t.order {
            continue;
        }
        total += count_from(t, depth + 1, tail);
    }
    total
}

/// Counts automorphisms of `g` by enumerating generator images.
///
/// Refuses (never truncates) when `|G|` exceeds `caps.max_order` or
/// `|G|^rank` exceeds `caps.max_work`.
pub fn aut_order_bruteforce(g: &AbelianGroup, caps: &OracleCaps) -> Result<BigUint> {
    let order = g
        .order_u64()
        .filter(|&o| o <= caps.max_order)
        .ok_or_else(|| {
            Error::OracleCap(format!(
                "order of {g} exceeds oracle order cap {}",
                caps.max_order
            ))
        })?;
    let rank = g.rank() as u32;
    let work = (order as u128).checked_pow(rank);
    if work.is_none_or(|w| w > caps.max_work) {
        return Err(Error::OracleCap(format!(
            "|G|^rank = {order}^{rank} exceeds oracle work cap {}",
            caps.max_work
        )));
    }
    if rank == 0 {
        return Ok(BigUint::from(1u32));
    }
    let moduli: Vec<usize> = g.elementary_divisors().iter().map(|&m| m as usize).collect();
    let t = Table::build(&moduli);
    let n = t.order;
    let total: u64 = t.candidates[0]
        .par_iter()
        .map(|&h| {
            let mut levels = vec![Level::new(n); moduli.len() + 1];
            levels[0].reset_to_zero();
            let (first, rest) = levels.split_at_mut(1);
            span(&t, &first[0], h, &mut rest[0]);
            if levels[1].members.len().saturating_mul(t.suffix[1]) < n {
                return 0;
            }
            count_from(&t, 1, &mut levels[1..])
        })
        .sum();
    Ok(BigUint::from(total))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(s: &str) -> u64 {
        let g: AbelianGroup = s.parse().unwrap();
        let n = aut_order_bruteforce(&g, &OracleCaps::default()).unwrap();
        n.try_into().unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(run("C1"), 1);
        assert_eq!(run("C2 x C4"), 8);
        assert_eq!(run("C3"), 2);
        assert_eq!(run("C2^2"), 6);
        assert_eq!(run("C2^3"), 168);
        assert_eq!(run("C6"), 2);
        assert_eq!(run("C3^2"), 48);
    }

    #[test]
    fn refuses_past_caps() {
        let caps = OracleCaps { max_order: 200, max_work: 1_000 };
        let g: AbelianGroup = "C2^4".parse().unwrap();
        assert!(matches!(aut_order_bruteforce(&g, &caps), Err(Error::OracleCap(_))));
        let g: AbelianGroup = "C256".parse().unwrap();
        assert!(matches!(
            aut_order_bruteforce(&g, &OracleCaps::default()),
            Err(Error::OracleCap(_))
        ));
    }
}
