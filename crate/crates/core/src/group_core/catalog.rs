//! Named groups used throughout the examples.

use super::FiniteGroup;

/// S3 ordered as [e, u, v, w, uv, vu] with u=(12), v=(23), w=(13).
pub fn s3() -> FiniteGroup {
    let perms: Vec<Vec<u8>> = vec![
        vec![0, 1, 2],
        vec![1, 0, 2],
        vec![0, 2, 1],
        vec![2, 1, 0],
        vec![1, 2, 0],
        vec![2, 0, 1],
    ];
    let labels = ["e", "u", "v", "w", "uv", "vu"].map(String::from).to_vec();
    FiniteGroup::from_permutation_elements(perms, Some(labels))
        .expect("S3 catalog is closed")
        .with_name("s3")
}

/// Resolve a group by catalog name: `z<n>`, `s<n>`, `s3`, `d4`, `q8`, `octonion`.
pub fn by_name(name: &str) -> Option<FiniteGroup> {
    let name = name.trim().to_ascii_lowercase();
    match name.as_str() {
        "s3" => return Some(s3()),
        "d4" => {
            return FiniteGroup::from_permutations(&[vec![2, 3, 4, 1], vec![1, 4, 3, 2]])
                .ok()
                .map(|g| g.with_name("d4"))
        }
        "q8" => return Some(quaternion()),
        "octonion" => return Some(crate::quasihopf::catalog::octonion_group()),
        _ => {}
    }
    let (head, num) = name.split_at(1);
    let n: usize = num.parse().ok()?;
    match head {
        "z" => FiniteGroup::cyclic(n).ok(),
        "s" => FiniteGroup::symmetric(n).ok(),
        _ => None,
    }
}

/// Quaternion group as signed units (±1, ±i, ±j, ±k).
pub fn quaternion() -> FiniteGroup {
    // (sign, unit) with unit 0=1, 1=i, 2=j, 3=k.
    let unit_mul = |a: usize, b: usize| -> (bool, usize) {
        match (a, b) {
            (0, x) | (x, 0) => (false, x),
            (x, y) if x == y => (true, 0),
            (1, 2) => (false, 3),
            (2, 3) => (false, 1),
            (3, 1) => (false, 2),
            (2, 1) => (true, 3),
            (3, 2) => (true, 1),
            (1, 3) => (true, 2),
            _ => unreachable!(),
        }
    };
    let idx = |neg: bool, u: usize| u * 2 + neg as usize;
    let table = (0..8)
        .map(|a| {
            (0..8)
                .map(|b| {
                    let (na, ua) = (a % 2 == 1, a / 2);
                    let (nb, ub) = (b % 2 == 1, b / 2);
                    let (n, u) = unit_mul(ua, ub);
                    idx(na ^ nb ^ n, u)
                })
                .collect()
        })
        .collect();
    let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"].map(String::from).to_vec();
    FiniteGroup::from_cayley(table, Some(labels)).expect("Q8 table").with_name("q8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_relations() {
        let g = s3();
        let f = |l| g.find(l).unwrap();
        assert_eq!(g.mul(f("u"), f("v")), f("uv"));
        assert_eq!(g.mul(f("v"), f("u")), f("vu"));
        assert_eq!(g.product([f("u"), f("v"), f("u")]), f("w"));
        assert_eq!(g.label(f("(123)")), "uv");
    }

    #[test]
    fn named_groups() {
        assert_eq!(by_name("z5").unwrap().order(), 5);
        assert_eq!(by_name("s4").unwrap().order(), 24);
        assert_eq!(by_name("d4").unwrap().center().len(), 2);
        assert_eq!(by_name("q8").unwrap().center().len(), 2);
        assert!(by_name("x9").is_none());
    }
}
