//! Counting isomorphism classes of `n`-card hands with Burnside's lemma.
//!
//! The number of classes of `n`-subsets is the average, over the group, of
//! the number of `n`-subsets each element fixes. A subset is fixed exactly
//! when it is a union of cycles of the element's deck permutation, so the
//! count is the coefficient of `x^n` in the product of `1 + x^len` over the
//! cycles.
//!
//! Two routes are provided. [`count_classes_burnside`] walks the tabulated
//! group. [`count_classes_cycle_index`] never touches individual elements:
//! it sums over conjugacy classes of the wreath product `S_k wr S_d`, which
//! makes decks such as `D(4^9)` tractable.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::classification::binomial;
use crate::deck::DeckSpec;
use crate::error::{Error, Result};
use crate::group::{cycle_lengths_of, factorial, group_order, SymmetryGroup};

/// Multiplies `poly` by `(1 + x^len)^count`, truncating at its length.
fn multiply_cycles(poly: &mut [BigUint], len: usize, count: u64) {
    let degree = poly.len() - 1;
    if len > degree || count == 0 {
        return;
    }
    // factor coefficients C(count, j) at x^(len*j)
    let terms = (degree / len).min(count as usize);
    let factor: Vec<BigUint> = (0..=terms).map(|j| binomial(count, j as u64)).collect();
    let mut out = vec![BigUint::zero(); poly.len()];
    for (i, p) in poly.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
        for (j, f) in factor.iter().enumerate() {
            let at = i + len * j;
            if at > degree {
                break;
            }
            out[at] += p * f;
        }
    }
    poly.clone_from_slice(&out);
}

/// Subset-fixing polynomial of a cycle type given as `length -> count`.
fn fixed_subset_polynomial(cycles: &[(usize, u64)], degree: usize) -> Vec<BigUint> {
    let mut poly = vec![BigUint::zero(); degree + 1];
    poly[0] = BigUint::one();
    for &(len, count) in cycles {
        multiply_cycles(&mut poly, len, count);
    }
    poly
}

fn histogram(lengths: &[usize]) -> Vec<(usize, u64)> {
    let mut out: Vec<(usize, u64)> = Vec::new();
    for &l in lengths {
        match out.last_mut() {
            Some((last, c)) if *last == l => *c += 1,
            _ => out.push((l, 1)),
        }
    }
    out
}

/// Class counts for every hand size `0..=k^d`, by summing over all group
/// elements. Elements are bucketed by cycle type first, which does not
/// change the sum.
pub fn count_classes_burnside(group: &SymmetryGroup) -> Vec<BigUint> {
    let size = group.spec().size() as usize;
    let types: HashMap<Vec<(usize, u64)>, u64> = (0..group.order())
        .into_par_iter()
        .fold(HashMap::new, |mut acc, rank| {
            let cycles = histogram(&cycle_lengths_of(group.permutation(rank)));
            *acc.entry(cycles).or_insert(0) += 1;
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (t, n) in b {
                *a.entry(t).or_insert(0) += n;
            }
            a
        });
    let mut total = vec![BigUint::zero(); size + 1];
    for (cycles, multiplicity) in &types {
        let poly = fixed_subset_polynomial(cycles, size);
        for (t, p) in total.iter_mut().zip(poly) {
            *t += p * *multiplicity;
        }
    }
    let order = BigUint::from(group.order());
    total.into_iter().map(|t| exact_div(t, &order)).collect()
}

fn exact_div(n: BigUint, d: &BigUint) -> BigUint {
    let (q, r) = n.div_rem(d);
    assert!(r.is_zero(), "orbit count average must be an integer");
    q
}

/// Integer partitions of `n`, parts descending.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            prefix.push(part);
            go(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// `prod l^{m_l} m_l!` for a partition given as descending parts.
fn centralizer_order(parts: &[usize]) -> BigUint {
    let mut z = BigUint::one();
    for (len, count) in histogram_desc(parts) {
        z *= BigUint::from(len).pow(count as u32) * factorial(count as u32);
    }
    z
}

fn histogram_desc(parts: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &p in parts {
        match out.last_mut() {
            Some((last, c)) if *last == p => *c += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Multisets of size `m` drawn from `0..kinds`, as nondecreasing vectors.
fn multisets(kinds: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(kinds: usize, m: usize, start: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == m {
            out.push(prefix.clone());
            return;
        }
        for kind in start..kinds {
            prefix.push(kind);
            go(kinds, m, kind, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(kinds, m, 0, &mut Vec::new(), &mut out);
    out
}

fn mobius(mut n: usize) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Points of `[k]` fixed by `sigma^power`, where `sigma` has cycle type `parts`.
fn value_fixed_points(parts: &[usize], power: usize) -> u64 {
    parts.iter().filter(|&&p| power.is_multiple_of(p)).map(|&p| p as u64).sum()
}

/// Class counts for hand sizes `0..=max_n` from the cycle index of the
/// wreath product.
///
/// A conjugacy class is fixed by the cycle type of the attribute
/// permutation and, for each of its cycles, the cycle type of the value
/// maps composed around that cycle. On the cards, a `g` whose attribute
/// cycle of length `l` carries composite `s` has `g^e` fixing
/// `|Fix(s^(e/h))|^h` points of that cycle's factor, `h = gcd(e, l)`;
/// fixed points multiply across cycles and Möbius inversion recovers the
/// number of card cycles of each length up to `max_n`.
pub fn count_classes_cycle_index(spec: &DeckSpec, max_n: usize) -> Result<Vec<BigUint>> {
    let (k, d) = (spec.k() as usize, spec.d() as usize);
    let size = spec.size() as usize;
    if max_n > size {
        return Err(Error::Arity { expected: size, found: max_n });
    }
    let k_fact = factorial(k as u32);
    let value_classes = partitions(k);
    let value_class_sizes: Vec<BigUint> =
        value_classes.iter().map(|p| &k_fact / centralizer_order(p)).collect();

    let mut total = vec![BigUint::zero(); max_n + 1];
    for attr_type in partitions(d) {
        let attr_class = factorial(d as u32) / centralizer_order(&attr_type);
        let groups = histogram_desc(&attr_type);
        // choose, for each group of equal-length attribute cycles, a multiset of value classes
        let choices: Vec<Vec<Vec<usize>>> =
            groups.iter().map(|&(_, m)| multisets(value_classes.len(), m)).collect();
        let mut pick = vec![0usize; groups.len()];
        loop {
            let mut weight = attr_class.clone();
            let mut cycles: Vec<(usize, &[usize])> = Vec::new();
            for (gi, &(len, m)) in groups.iter().enumerate() {
                let chosen = &choices[gi][pick[gi]];
                // ordered assignments of this multiset to the m distinguishable cycles
                let mut arrangements = factorial(m as u32);
                for (_, c) in histogram_desc(chosen) {
                    arrangements /= factorial(c as u32);
                }
                weight *= arrangements;
                for &vc in chosen {
                    weight *= k_fact.pow(len as u32 - 1) * &value_class_sizes[vc];
                    cycles.push((len, &value_classes[vc]));
                }
            }

            // fixed cards of g^e for e = 1..=max_n
            let fixed: Vec<i128> = (0..=max_n)
                .map(|e| {
                    if e == 0 {
                        return 0;
                    }
                    cycles
                        .iter()
                        .map(|&(len, parts)| {
                            let h = e.gcd(&len);
                            (value_fixed_points(parts, e / h) as i128).pow(h as u32)
                        })
                        .product()
                })
                .collect();
            let card_cycles: Vec<(usize, u64)> = (1..=max_n)
                .map(|m| {
                    let sum: i128 = (1..=m)
                        .filter(|e| m % e == 0)
                        .map(|e| mobius(m / e) as i128 * fixed[e])
                        .sum();
                    debug_assert!(sum >= 0 && sum % m as i128 == 0);
                    (m, (sum / m as i128) as u64)
                })
                .collect();
            let poly = fixed_subset_polynomial(&card_cycles, max_n);
            for (t, p) in total.iter_mut().zip(poly) {
                *t += p * &weight;
            }

            // next combination of picks
            let mut i = 0;
            while i < pick.len() {
                pick[i] += 1;
                if pick[i] < choices[i].len() {
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
            if i == pick.len() {
                break;
            }
        }
    }
    let order = group_order(spec);
    Ok(total.into_iter().map(|t| exact_div(t, &order)).collect())
}
