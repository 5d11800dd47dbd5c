//! Finite fixtures: Cayley tables used by the exact verification suites.
//!
//! The nonassociative K-loop of order 21 is constructed reproducibly:
//!
//! 1. The nonabelian group of order 21 (`⟨a,b | a⁷, b³, bab⁻¹ = a²⟩`) is
//!    searched exhaustively for involutive automorphisms. Every one of them
//!    turns out to fix a subgroup of order 3 and leave the cyclic `⟨a⟩` as
//!    transvection set, so the direct route only produces associative loops
//!    (see `direct_involution_search_on_f21_degenerates`).
//! 2. The construction is therefore applied to the doubled group `G × G`
//!    with the swap involution `σ(g,h) = (h,g)`. Its transvection set
//!    `{(g, g⁻¹)}` is a copy of `G` carrying the product
//!    `g·k = (g k² g)^{1/2}` (unique square roots exist in odd order), which
//!    is a genuinely nonassociative K-loop of order 21.

use crate::finite_hopf::{build_kloop_from_group, FiniteLoop, KloopConstruction};
use std::sync::OnceLock;

/// Cyclic group of order `n`.
pub fn cyclic_group(n: usize) -> FiniteLoop {
    let table = (0..n)
        .map(|a| (0..n).map(|b| (a + b) % n).collect())
        .collect();
    FiniteLoop::new(n, table, 0, format!("z{n}")).unwrap()
}

/// Symmetric group on three letters, elements enumerated as permutations of
/// `(0,1,2)` in lexicographic order; `x·y` acts by `x` after `y`.
pub fn symmetric_group_3() -> FiniteLoop {
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let index = |p: &[usize; 3]| perms.iter().position(|q| q == p).unwrap();
    let table: Vec<Vec<usize>> = perms
        .iter()
        .map(|x| {
            perms
                .iter()
                .map(|y| {
                    let comp = [x[y[0]], x[y[1]], x[y[2]]];
                    index(&comp)
                })
                .collect()
        })
        .collect();
    FiniteLoop::new(6, table, 0, "s3".into()).unwrap()
}

/// The nonabelian group of order 21: `⟨a,b | a⁷ = b³ = e, b a b⁻¹ = a²⟩`.
/// Element `7j + i` stands for `aⁱ bʲ`.
pub fn frobenius_group_21() -> FiniteLoop {
    let pw = [1usize, 2, 4]; // 2^j mod 7
    let idx = |i: usize, j: usize| 7 * j + i;
    let mut table = vec![vec![0usize; 21]; 21];
    for j1 in 0..3 {
        for i1 in 0..7 {
            for j2 in 0..3 {
                for i2 in 0..7 {
                    // aⁱ¹ bʲ¹ aⁱ² bʲ² = a^{i1 + i2·2^{j1}} b^{j1+j2}
                    let i = (i1 + i2 * pw[j1]) % 7;
                    let j = (j1 + j2) % 3;
                    table[idx(i1, j1)][idx(i2, j2)] = idx(i, j);
                }
            }
        }
    }
    FiniteLoop::new(21, table, 0, "f21".into()).unwrap()
}

/// Exhaustive search for involutive automorphisms of a group of order 21
/// presented as above: automorphisms are determined by the images of the
/// two generators; candidates are filtered by the homomorphism property and
/// bijectivity, then by `σ² = id` with `σ ≠ id`.
pub fn order_two_automorphisms(group: &FiniteLoop) -> Vec<Vec<usize>> {
    let n = group.order;
    let power = |x: usize, k: usize| -> usize {
        let mut r = group.identity;
        for _ in 0..k {
            r = group.mul(r, x);
        }
        r
    };
    let mut out = Vec::new();
    for ia in 0..n {
        for ib in 0..n {
            let mut phi = vec![0usize; n];
            for j in 0..3 {
                for i in 0..7 {
                    phi[7 * j + i] = group.mul(power(ia, i), power(ib, j));
                }
            }
            let mut seen = vec![false; n];
            if phi.iter().any(|&v| std::mem::replace(&mut seen[v], true)) {
                continue;
            }
            let hom = (0..n).all(|x| {
                (0..n).all(|y| phi[group.mul(x, y)] == group.mul(phi[x], phi[y]))
            });
            if !hom {
                continue;
            }
            let involutive = (0..n).all(|x| phi[phi[x]] == x);
            let trivial = (0..n).all(|x| phi[x] == x);
            if involutive && !trivial {
                out.push(phi);
            }
        }
    }
    out
}

/// Direct product `F₂₁ × F₂₁`, element `21·g + h` standing for `(g, h)`.
pub fn doubled_f21() -> FiniteLoop {
    static CACHE: OnceLock<FiniteLoop> = OnceLock::new();
    CACHE.get_or_init(build_doubled_f21).clone()
}

fn build_doubled_f21() -> FiniteLoop {
    let g = frobenius_group_21();
    let n = g.order;
    let mut table = vec![vec![0usize; n * n]; n * n];
    for g1 in 0..n {
        for h1 in 0..n {
            for g2 in 0..n {
                for h2 in 0..n {
                    table[n * g1 + h1][n * g2 + h2] = n * g.mul(g1, g2) + g.mul(h1, h2);
                }
            }
        }
    }
    FiniteLoop::new(n * n, table, 0, "f21xf21".into()).unwrap()
}

/// The swap involution `σ(g,h) = (h,g)` on the doubled group.
pub fn swap_involution(n: usize) -> Vec<usize> {
    let mut sigma = vec![0usize; n * n];
    for g in 0..n {
        for h in 0..n {
            sigma[n * g + h] = n * h + g;
        }
    }
    sigma
}

/// The order-21 nonassociative K-loop with its precession data.
pub fn kloop_21() -> KloopConstruction {
    static CACHE: OnceLock<KloopConstruction> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            let doubled = doubled_f21();
            let sigma = swap_involution(21);
            build_kloop_from_group(&doubled, &sigma, "kloop21")
                .expect("doubled construction factorizes")
        })
        .clone()
}

/// The K-loop table corrupted by a row-cycle swap: entries of two
/// non-identity rows are exchanged along one cycle of the permutation
/// `row_{r1} ∘ row_{r2}⁻¹` that avoids the identity column. The result is
/// still a Latin square with intact identity row and column, but the loop
/// identities break, providing the negative control with concrete
/// witnesses.
pub fn corrupted_kloop_21() -> FiniteLoop {
    let mut l = kloop_21().kloop;
    l.name = "kloop21-corrupted".into();
    let n = l.order;
    for r1 in 0..n {
        for r2 in (r1 + 1)..n {
            if r1 == l.identity || r2 == l.identity {
                continue;
            }
            // permutation on columns: follow value v at column c in row r1
            // to the column where row r2 takes value v
            let mut col_of_r2 = vec![0usize; n];
            for c in 0..n {
                col_of_r2[l.table[r2][c]] = c;
            }
            let mut visited = vec![false; n];
            for start in 0..n {
                if visited[start] {
                    continue;
                }
                let mut cycle = Vec::new();
                let mut c = start;
                while !visited[c] {
                    visited[c] = true;
                    cycle.push(c);
                    c = col_of_r2[l.table[r1][c]];
                }
                if cycle.len() >= 2 && cycle.len() < n && !cycle.contains(&l.identity) {
                    for &col in &cycle {
                        let tmp = l.table[r1][col];
                        l.table[r1][col] = l.table[r2][col];
                        l.table[r2][col] = tmp;
                    }
                    l.validate().expect("row-cycle swap keeps a Latin square");
                    return l;
                }
            }
        }
    }
    unreachable!("kloop21 admits a row-cycle swap away from the identity")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bruck_product_matches_square_root_formula() {
        // on the doubled construction, the induced product is
        // g·k = (g k² g)^{1/2} inside the order-21 group
        let g = frobenius_group_21();
        let cons = kloop_21();
        let n = 21;
        // square roots are unique in odd order
        let mut sqrt = vec![0usize; n];
        for x in 0..n {
            sqrt[g.mul(x, x)] = x;
        }
        // transvection (x, x⁻¹) is indexed by its first component
        let first: Vec<usize> = cons.l_elements.iter().map(|&e| e / n).collect();
        for i in 0..n {
            for j in 0..n {
                let x = first[i];
                let y = first[j];
                let expect = sqrt[g.mul(g.mul(x, g.mul(y, y)), x)];
                assert_eq!(first[cons.kloop.mul(i, j)], expect);
            }
        }
    }

    #[test]
    fn corrupted_table_differs_but_validates() {
        let good = kloop_21().kloop;
        let bad = corrupted_kloop_21();
        bad.validate().unwrap();
        assert_ne!(good.table, bad.table);
        let diff: usize = good
            .table
            .iter()
            .flatten()
            .zip(bad.table.iter().flatten())
            .filter(|(a, b)| a != b)
            .count();
        // one cycle swapped across two rows
        assert!(diff >= 4 && diff % 2 == 0, "changed {diff} cells");
        // identity row and column intact
        let e = bad.identity;
        for a in 0..bad.order {
            assert_eq!(bad.mul(e, a), a);
            assert_eq!(bad.mul(a, e), a);
        }
    }
}
