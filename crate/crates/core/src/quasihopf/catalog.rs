//! Named transversals: the four S3 choices, two families for S_{n-1} ⊂ S_n,
//! and the octonion transversal of Cl_3 ⋊ Z_2^3.

use std::sync::Arc;

use crate::group_core::catalog::s3;
use crate::group_core::{FiniteGroup, Subgroup, Transversal};
use crate::{Error, Result};

/// Catalog names accepted by [`by_name`].
pub fn names() -> Vec<String> {
    let mut v: Vec<String> = ["s3/standard", "s3/t2", "s3/t3", "s3/t4"].map(String::from).to_vec();
    for n in 3..=6 {
        v.push(format!("sn/cyclic/{n}"));
        v.push(format!("sn/transpositions/{n}"));
    }
    v.push("octonion".into());
    v
}

pub fn by_name(name: &str) -> Result<Transversal> {
    let parts: Vec<&str> = name.trim().split('/').collect();
    match parts.as_slice() {
        ["s3", which] => s3_transversal(which),
        ["sn", family, n] => {
            let n: usize = n.parse().map_err(|_| Error::Config(format!("bad degree in {name}")))?;
            match *family {
                "cyclic" => sn_cyclic(n),
                "transpositions" => sn_transpositions(n),
                _ => Err(Error::Config(format!("unknown S_n family {family}"))),
            }
        }
        ["octonion"] => Ok(octonion_transversal()),
        _ => Err(Error::Config(format!("unknown transversal {name}; known: {}", names().join(", ")))),
    }
}

/// K = {e,u} ⊂ S3 with one of the four transversals used in the examples.
pub fn s3_transversal(which: &str) -> Result<Transversal> {
    let reps = match which {
        "standard" | "t1" => ["e", "uv", "vu"],
        "t2" => ["e", "w", "v"],
        "t3" => ["e", "uv", "v"],
        "t4" => ["e", "w", "vu"],
        _ => return Err(Error::Config(format!("unknown S3 transversal {which}"))),
    };
    let g = Arc::new(s3());
    let k = Subgroup::new(g.clone(), &[0, g.find("u").unwrap()])?;
    let reps: Vec<usize> = reps.iter().map(|l| g.find(l).unwrap()).collect();
    Transversal::new(g, k, &reps)
}

fn sn_with_stabilizer(n: usize) -> Result<(Arc<FiniteGroup>, Subgroup)> {
    if !(3..=7).contains(&n) {
        return Err(Error::Config(format!("S_n catalog needs 3 ≤ n ≤ 7, got {n}")));
    }
    let g = Arc::new(FiniteGroup::symmetric(n)?);
    let last = (n - 1) as u8;
    let members: Vec<usize> = g.elements().filter(|&a| g.permutation(a).unwrap()[n - 1] == last).collect();
    let k = Subgroup::new(g.clone(), &members)?;
    Ok((g, k))
}

/// n-cycle (1 2 … n) in S_n.
pub fn long_cycle(g: &FiniteGroup, n: usize) -> usize {
    let pts: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    g.find(&format!("({})", pts.join(" "))).expect("n-cycle")
}

/// R = Z_n = {(12…n)^i}; R-position i is the i-th power.
pub fn sn_cyclic(n: usize) -> Result<Transversal> {
    let (g, k) = sn_with_stabilizer(n)?;
    let c = long_cycle(&g, n);
    let mut reps = vec![0];
    for _ in 1..n {
        reps.push(g.mul(*reps.last().unwrap(), c));
    }
    Transversal::new(g, k, &reps)
}

/// R = {e, (1 n), …, (n-1 n)}; R-position i is (i n).
pub fn sn_transpositions(n: usize) -> Result<Transversal> {
    let (g, k) = sn_with_stabilizer(n)?;
    let mut reps = vec![0];
    for i in 1..n {
        reps.push(g.find(&format!("({i} {n})")).expect("transposition"));
    }
    Transversal::new(g, k, &reps)
}

/// Index of (-1)^s e_a g^k, with a and k 3-bit vectors (first coordinate = high bit).
pub fn oct_index(s: usize, a: usize, k: usize) -> usize {
    s * 64 + a * 8 + k
}

pub fn oct_parts(i: usize) -> (usize, usize, usize) {
    (i / 64, (i / 8) % 8, i % 8)
}

fn bits(v: usize) -> [usize; 3] {
    [(v >> 2) & 1, (v >> 1) & 1, v & 1]
}

fn from_bits(b: [usize; 3]) -> usize {
    (b[0] << 2) | (b[1] << 1) | b[2]
}

/// Σ_{i≥j} a_i b_j mod 2: the sign in e_a e_b = ± e_{a+b}.
pub fn clifford_sign(a: usize, b: usize) -> usize {
    let (a, b) = (bits(a), bits(b));
    let mut s = 0;
    for i in 0..3 {
        for j in 0..=i {
            s += a[i] * b[j];
        }
    }
    s % 2
}

pub fn dot3(a: usize, b: usize) -> usize {
    (a & b).count_ones() as usize % 2
}

pub fn cross3(a: usize, b: usize) -> usize {
    let (x, y) = (bits(a), bits(b));
    from_bits([(x[1] * y[2] + x[2] * y[1]) % 2, (x[2] * y[0] + x[0] * y[2]) % 2, (x[0] * y[1] + x[1] * y[0]) % 2])
}

/// G = Cl_3 ⋊ Z_2^3 of order 128. Elements (-1)^s e_a g^k with g^k e_b = (-1)^{k·b} e_b g^k.
pub fn octonion_group() -> FiniteGroup {
    let table: Vec<Vec<usize>> = (0..128)
        .map(|x| {
            let (s, a, k) = oct_parts(x);
            (0..128)
                .map(|y| {
                    let (t, b, l) = oct_parts(y);
                    let sign = (s + t + dot3(k, b) + clifford_sign(a, b)) % 2;
                    oct_index(sign, a ^ b, k ^ l)
                })
                .collect()
        })
        .collect();
    let labels = (0..128)
        .map(|x| {
            let (s, a, k) = oct_parts(x);
            format!("{}e{:03b}g{:03b}", if s == 1 { "-" } else { "" }, a, k)
        })
        .collect();
    FiniteGroup::from_cayley(table, Some(labels)).expect("octonion group table").with_name("octonion")
}

/// The K-part of r_a: g^{(a2a3, a1a3, a1a2)}.
pub fn octonion_r_k(a: usize) -> usize {
    let b = bits(a);
    from_bits([b[1] * b[2], b[0] * b[2], b[0] * b[1]])
}

/// R = {±r_a}, K = {g^k}. R-position s*8 + a holds (-1)^s r_a.
pub fn octonion_transversal() -> Transversal {
    let g = Arc::new(octonion_group());
    let k = Subgroup::new(g.clone(), &(0..8).collect::<Vec<_>>()).expect("K = Z_2^3");
    let reps: Vec<usize> = (0..16).map(|p| oct_index(p / 8, p % 8, octonion_r_k(p % 8))).collect();
    Transversal::new(g, k, &reps).expect("octonion transversal")
}

/// f(a,b) = Σ_{i≥j} a_i b_j + a1a2b3 + a1b2a3 + b1a2a3 (mod 2).
pub fn octonion_f(a: usize, b: usize) -> usize {
    let (x, y) = (bits(a), bits(b));
    (clifford_sign(a, b) + x[0] * x[1] * y[2] + x[0] * y[1] * x[2] + y[0] * x[1] * x[2]) % 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_catalog_entry_is_a_matched_pair() {
        for name in names() {
            let td = by_name(&name).unwrap();
            let rep = td.verify_matched_pair();
            assert!(rep.all_pass(), "{name}: {:?}", rep.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn clifford_sign_example() {
        let g = octonion_group();
        let e = |a: usize| oct_index(0, a, 0);
        // e_(0,1,1) e_(1,0,1) = -e_(1,1,0)
        assert_eq!(g.mul(e(0b011), e(0b101)), oct_index(1, 0b110, 0));
        assert_eq!(g.order(), 128);
    }

    #[test]
    fn cyclic_family_actions() {
        for n in 3..=6 {
            let td = sn_cyclic(n).unwrap();
            assert!(td.tau.iter().flatten().all(|&t| t == 0));
            let g = &td.group;
            let pt = |p: &[u8], i: usize| -> usize { (p[(i + n - 1) % n] as usize + 1) % n };
            for x in 0..td.nk() {
                let sigma = g.permutation(td.k_elem(x)).unwrap().to_vec();
                for i in 0..n {
                    assert_eq!(td.act[x][i], pt(&sigma, i));
                    let back = g.permutation(td.k_elem(td.back[x][i])).unwrap();
                    for j in 1..n {
                        let want = (pt(&sigma, (i + j) % n) + n - pt(&sigma, i)) % n;
                        assert_eq!(pt(back, j), want, "n={n} i={i} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn transposition_family_cocycle() {
        let td = sn_transpositions(4).unwrap();
        let g = &td.group;
        assert!(td.back.iter().enumerate().all(|(x, row)| row.iter().all(|&b| b == x)));
        assert!(td.regular);
        for i in 1..4 {
            assert_eq!(td.rinv[i], i);
            for j in 1..4 {
                if i != j {
                    assert_eq!(td.dot[i][j], j);
                    assert_eq!(g.label(td.k_elem(td.tau[i][j])), format!("({}{})", i.min(j), i.max(j)));
                }
            }
        }
    }
}
